//! Error norms, observed rates and refinement studies.

use std::fmt::Write as _;
use std::fs;
use std::path::PathBuf;
use std::sync::Arc;
use std::time::Instant;

use super::{make_example1, make_example2, ManufacturedCase, TxDefinition};
use crate::dg_space::DgSpace;
use crate::error::{Error, Result};
use crate::mesh::build_uniform_mesh;
use crate::optimizer::{pdas_solve, Discretization, OcpSolution, DEFAULT_MAX_ITER, DEFAULT_TOL};
use crate::scalar::Real;
use crate::timestepping::{check_count, SchemeConfig};

/// `L-inf(L2)` errors of state and adjoint, `L2(L2)` error of the control.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ErrorTriple {
    pub e_y: f64,
    pub e_p: f64,
    pub e_u: f64,
}

pub fn compute_errors<T: Real>(
    disc: &Discretization<T>,
    sol: &OcpSolution<T>,
    case: &ManufacturedCase<T>,
) -> Result<ErrorTriple> {
    let grid = disc.grid();
    let space = disc.space();
    check_count(sol.y.nodes(), grid.num_nodes())?;
    check_count(sol.p.nodes(), grid.num_nodes())?;
    check_count(sol.u.nodes(), disc.num_slots())?;
    let mut e_y = T::zero();
    let mut e_p = T::zero();
    for m in 0..grid.num_nodes() {
        let t = grid.t(m);
        e_y = e_y.max(space.l2_error(sol.y.node(m), |x, s| case.y(x, s), t));
        e_p = e_p.max(space.l2_error(sol.p.node(m), |x, s| case.p(x, s), t));
    }
    let mut acc = T::zero();
    for ((u, &t), &w) in sol.u.nodes().iter().zip(&disc.slot_times()).zip(&disc.slot_weights()) {
        let e = space.l2_error(u, |x, s| case.u(x, s), t);
        acc += w * e * e;
    }
    let f = |v: T| v.to_f64().unwrap_or(f64::NAN);
    Ok(ErrorTriple {
        e_y: f(e_y),
        e_p: f(e_p),
        e_u: f(acc.sqrt()),
    })
}

/// `log(e_coarse / e_fine) / log(step_ratio)`.
pub fn convergence_rate(e_coarse: f64, e_fine: f64, step_ratio: f64) -> Result<f64> {
    for e in [e_coarse, e_fine] {
        if !(e > 0.0) || !e.is_finite() {
            return Err(Error::NonPositiveError(e));
        }
    }
    if !(step_ratio > 1.0) {
        return Err(Error::InvalidParameter(format!("step ratio must exceed 1, got {step_ratio}")));
    }
    Ok((e_coarse / e_fine).ln() / step_ratio.ln())
}

#[derive(Clone, Debug, PartialEq)]
pub struct TableRow {
    /// Number of time intervals; `k = T / steps`.
    pub steps: usize,
    pub k: f64,
    pub errors: Option<ErrorTriple>,
    /// Rates against the previous successful row, for `(y, p, u)`.
    pub rates: [Option<f64>; 3],
    pub iterations: usize,
    pub kkt_residual: f64,
    pub seconds: f64,
    pub failure: Option<String>,
}

#[derive(Clone, Debug, Default, PartialEq)]
pub struct ConvergenceTable {
    pub rows: Vec<TableRow>,
}

impl ConvergenceTable {
    pub fn push(&mut self, mut row: TableRow) {
        if let (Some(cur), Some(prev)) = (row.errors, self.rows.iter().rev().find(|r| r.errors.is_some())) {
            let pe = prev.errors.expect("filtered");
            let ratio = prev.k / row.k;
            row.rates = [
                convergence_rate(pe.e_y, cur.e_y, ratio).ok(),
                convergence_rate(pe.e_p, cur.e_p, ratio).ok(),
                convergence_rate(pe.e_u, cur.e_u, ratio).ok(),
            ];
        }
        self.rows.push(row);
    }

    pub fn failed(&self) -> bool {
        self.rows.iter().any(|r| r.failure.is_some())
    }

    /// Rates of the last row, if it and a predecessor succeeded.
    pub fn finest_rates(&self) -> Option<[f64; 3]> {
        let last = self.rows.last()?;
        Some([last.rates[0]?, last.rates[1]?, last.rates[2]?])
    }

    pub fn to_csv(&self) -> String {
        let mut out = String::from("k,e_y,rate_y,e_p,rate_p,e_u,rate_u\n");
        let opt = |r: Option<f64>| r.map(|v| format!("{v:.4}")).unwrap_or_default();
        for row in &self.rows {
            let e = row.errors.map_or([f64::NAN; 3], |e| [e.e_y, e.e_p, e.e_u]);
            let _ = writeln!(
                out,
                "{:e},{:e},{},{:e},{},{:e},{}",
                row.k,
                e[0],
                opt(row.rates[0]),
                e[1],
                opt(row.rates[1]),
                e[2],
                opt(row.rates[2])
            );
        }
        out
    }

    pub fn to_markdown(&self) -> String {
        let header = ["k", "‖y−y_δ‖", "Rate", "‖p−p_δ‖", "Rate", "‖u−u_δ‖", "Rate", "PDAS it."];
        let mut cells: Vec<Vec<String>> = vec![header.iter().map(|s| s.to_string()).collect()];
        let rate = |r: Option<f64>| r.map_or_else(|| "-".to_string(), |v| format!("{v:.2}"));
        for row in &self.rows {
            let k = format!("1/{}", row.steps);
            match (row.errors, &row.failure) {
                (Some(e), _) => cells.push(vec![
                    k,
                    format!("{:.2e}", e.e_y),
                    rate(row.rates[0]),
                    format!("{:.2e}", e.e_p),
                    rate(row.rates[1]),
                    format!("{:.2e}", e.e_u),
                    rate(row.rates[2]),
                    row.iterations.to_string(),
                ]),
                (None, failure) => {
                    let mut line = vec![k, format!("failed: {}", failure.as_deref().unwrap_or("?"))];
                    line.resize(header.len(), String::new());
                    cells.push(line);
                }
            }
        }
        let widths: Vec<usize> = (0..header.len())
            .map(|c| cells.iter().map(|r| r[c].chars().count()).max().unwrap_or(0))
            .collect();
        let mut out = String::new();
        for (i, row) in cells.iter().enumerate() {
            out.push('|');
            for (c, cell) in row.iter().enumerate() {
                let pad = widths[c] - cell.chars().count();
                let _ = write!(out, " {}{} |", cell, " ".repeat(pad));
            }
            out.push('\n');
            if i == 0 {
                out.push('|');
                for w in &widths {
                    let _ = write!(out, "{}|", "-".repeat(w + 2));
                }
                out.push('\n');
            }
        }
        out
    }
}

#[derive(Clone, Debug)]
pub struct StudyConfig<T> {
    /// 1 or 2.
    pub example: u8,
    pub scheme: SchemeConfig<T>,
    /// Numbers of intervals per level; the mesh uses the same count per side.
    pub levels: Vec<usize>,
    pub sigma: T,
    pub alpha: Option<T>,
    pub tol: T,
    pub max_iter: usize,
    pub tx: TxDefinition,
    pub out: Option<PathBuf>,
}

impl<T: Real> StudyConfig<T> {
    pub fn new(example: u8, scheme: SchemeConfig<T>) -> Self {
        Self {
            example,
            scheme,
            levels: vec![5, 10, 20, 40],
            sigma: T::lit(crate::assembly::SipgParams::<T>::DEFAULT_SIGMA),
            alpha: None,
            tol: T::lit(DEFAULT_TOL),
            max_iter: DEFAULT_MAX_ITER,
            tx: TxDefinition::default(),
            out: None,
        }
    }

    pub fn case(&self) -> Result<ManufacturedCase<T>> {
        let case = match self.example {
            1 => make_example1(),
            2 => make_example2(self.tx),
            other => return Err(Error::InvalidParameter(format!("unknown example {other}"))),
        };
        let case = case.with_sigma(self.sigma);
        Ok(match self.alpha {
            Some(a) => case.with_alpha(a),
            None => case,
        })
    }
}

/// Solves one level: mesh with `steps` subdivisions per side and `steps` intervals.
pub fn run_level<T: Real>(
    case: &ManufacturedCase<T>,
    scheme: SchemeConfig<T>,
    steps: usize,
    tol: T,
    max_iter: usize,
) -> Result<(Discretization<T>, OcpSolution<T>, ErrorTriple)> {
    let mesh = build_uniform_mesh(steps)?;
    let space = Arc::new(DgSpace::new(Arc::new(mesh)));
    let disc = Discretization::new(case.problem()?, space, steps, scheme)?;
    let sol = pdas_solve(&disc, tol, max_iter)?;
    let errors = compute_errors(&disc, &sol, case)?;
    Ok((disc, sol, errors))
}

/// Runs every level, keeps going past failures, and writes outputs when
/// `config.out` is set.
pub fn run_study<T: Real>(config: &StudyConfig<T>) -> Result<ConvergenceTable> {
    let case = config.case()?;
    if let Some(dir) = &config.out {
        fs::create_dir_all(dir)?;
    }
    let mut table = ConvergenceTable::default();
    let finest = config.levels.iter().copied().max();
    for &steps in &config.levels {
        let clock = Instant::now();
        let k = case.horizon.to_f64().unwrap_or(f64::NAN) / steps as f64;
        let outcome = if steps == 0 {
            Err(Error::InvalidResolution(0))
        } else {
            run_level(&case, config.scheme, steps, config.tol, config.max_iter)
        };
        let mut row = TableRow {
            steps,
            k,
            errors: None,
            rates: [None; 3],
            iterations: 0,
            kkt_residual: f64::NAN,
            seconds: 0.0,
            failure: None,
        };
        match outcome {
            Ok((disc, sol, errors)) => {
                row.errors = Some(errors);
                row.iterations = sol.iterations;
                row.kkt_residual = sol.kkt_residual.to_f64().unwrap_or(f64::NAN);
                if let Some(dir) = &config.out {
                    sol.write_log(fs::File::create(dir.join(format!("pdas_n{steps}.csv")))?)?;
                    if Some(steps) == finest {
                        write_snapshots(dir, &disc, &sol)?;
                    }
                }
            }
            Err(e) => row.failure = Some(e.to_string()),
        }
        row.seconds = clock.elapsed().as_secs_f64();
        table.push(row);
    }
    if let Some(dir) = &config.out {
        fs::write(dir.join("table.csv"), table.to_csv())?;
        fs::write(dir.join("table.md"), table.to_markdown())?;
    }
    Ok(table)
}

// Fields at t = 0.5 when it is a grid node.
fn write_snapshots<T: Real>(dir: &std::path::Path, disc: &Discretization<T>, sol: &OcpSolution<T>) -> Result<()> {
    let grid = disc.grid();
    if grid.steps() % 2 != 0 {
        return Ok(());
    }
    let mid = grid.steps() / 2;
    let space = disc.space();
    space.write_field_csv(sol.y.node(mid), fs::File::create(dir.join("y_t0.5.csv"))?)?;
    space.write_field_csv(sol.p.node(mid), fs::File::create(dir.join("p_t0.5.csv"))?)?;
    let half = T::half() * grid.horizon();
    let slot = disc
        .slot_times()
        .iter()
        .position(|&t| (t - half).abs() <= T::lit(1e-12) * grid.horizon());
    if let Some(j) = slot {
        space.write_field_csv(sol.u.node(j), fs::File::create(dir.join("u_t0.5.csv"))?)?;
    }
    Ok(())
}
