//! Mass matrix, SIPG state/adjoint operators with upwinding, and load vectors.
//!
//! Matrices follow the convention `A[i][j] = a(phi_j, phi_i)`: rows index
//! test functions, so `a(y, v) = v^T A y`.

use crate::dg_space::DgSpace;
use crate::error::{Error, Result};
use crate::linalg::{CsrMatrix, TripletBuilder};
use crate::mesh::{classify_edges, EdgeClassification};
use crate::scalar::{Point2, Real};

/// Coefficients of the convection-diffusion-reaction operator.
///
/// `beta` and `reaction` are constants, so `beta` is divergence free and the
/// well-posedness constant is `c0 = reaction`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SipgParams<T> {
    pub epsilon: T,
    pub beta: Point2<T>,
    pub reaction: T,
    pub sigma: T,
}

impl<T: Real> SipgParams<T> {
    pub const DEFAULT_SIGMA: f64 = 6.0;

    pub fn new(epsilon: T, beta: Point2<T>, reaction: T) -> Self {
        Self {
            epsilon,
            beta,
            reaction,
            sigma: T::lit(Self::DEFAULT_SIGMA),
        }
    }

    pub fn with_sigma(mut self, sigma: T) -> Self {
        self.sigma = sigma;
        self
    }

    /// `r - div(beta) / 2`, which is `r` for constant `beta`.
    pub fn c0(&self) -> T {
        self.reaction
    }

    pub fn beta_at(&self, _x: Point2<T>) -> Point2<T> {
        self.beta
    }

    /// Checks used by assembly; `epsilon = 0` is allowed here.
    pub fn validate_for_assembly(&self) -> Result<()> {
        let all = [self.epsilon, self.beta[0], self.beta[1], self.reaction, self.sigma];
        if all.iter().any(|v| !v.is_finite()) {
            return Err(Error::InvalidParameter("coefficients must be finite".into()));
        }
        if !(self.sigma > T::zero()) {
            return Err(Error::InvalidParameter(format!("penalty sigma must be positive, got {}", self.sigma)));
        }
        if self.epsilon < T::zero() {
            return Err(Error::InvalidParameter(format!("diffusion must be nonnegative, got {}", self.epsilon)));
        }
        Ok(())
    }

    /// Checks required before solving: `epsilon > 0` and `c0 >= 0`.
    pub fn validate_for_solve(&self) -> Result<()> {
        self.validate_for_assembly()?;
        if !(self.epsilon > T::zero()) {
            return Err(Error::InvalidParameter(format!("diffusion must be positive, got {}", self.epsilon)));
        }
        if self.c0() < T::zero() {
            return Err(Error::InvalidParameter(format!("reaction must be nonnegative, got {}", self.c0())));
        }
        Ok(())
    }
}

/// The three operators every time stepper needs, plus `A_s^T` for the DO adjoint.
#[derive(Clone, Debug)]
pub struct SipgOperators<T> {
    pub mass: CsrMatrix<T>,
    pub state: CsrMatrix<T>,
    pub adjoint: CsrMatrix<T>,
    pub state_transpose: CsrMatrix<T>,
}

impl<T: Real> SipgOperators<T> {
    pub fn assemble(space: &DgSpace<T>, params: &SipgParams<T>) -> Result<Self> {
        let classes = classify_edges(space.mesh(), |x| params.beta_at(x));
        let state = assemble_state_operator(space, params, &classes)?;
        let adjoint = assemble_adjoint_operator(space, params, &classes)?;
        Ok(Self {
            mass: assemble_mass(space),
            state_transpose: state.transpose(),
            state,
            adjoint,
        })
    }

    pub fn ndof(&self) -> usize {
        self.mass.nrows()
    }
}

pub fn assemble_mass<T: Real>(space: &DgSpace<T>) -> CsrMatrix<T> {
    let mut b = TripletBuilder::new(space.ndof(), space.ndof());
    let twelfth = T::one() / T::lit(12.0);
    for k in 0..space.mesh().num_elements() {
        let a = space.mesh().area(k) * twelfth;
        for i in 0..3 {
            for j in 0..3 {
                let v = if i == j { a + a } else { a };
                b.add(space.dof(k, i), space.dof(k, j), v);
            }
        }
    }
    b.build()
}

/// `(g(., t), phi_i)` for every basis function.
pub fn assemble_load<T: Real, F: Fn(Point2<T>, T) -> T>(space: &DgSpace<T>, g: F, t: T) -> Vec<T> {
    let mut out = vec![T::zero(); space.ndof()];
    let rule = space.volume_rule();
    for k in 0..space.mesh().num_elements() {
        let area = space.mesh().area(k);
        for (lambda, &w) in rule.points.iter().zip(&rule.weights) {
            let gv = g(space.point_at(k, lambda), t) * w * area;
            for i in 0..3 {
                out[space.dof(k, i)] += gv * lambda[i];
            }
        }
    }
    out
}

#[derive(Clone, Copy, PartialEq)]
enum Form {
    State,
    Adjoint,
}

pub fn assemble_state_operator<T: Real>(
    space: &DgSpace<T>,
    params: &SipgParams<T>,
    classes: &EdgeClassification,
) -> Result<CsrMatrix<T>> {
    assemble_operator(space, params, classes, Form::State)
}

pub fn assemble_adjoint_operator<T: Real>(
    space: &DgSpace<T>,
    params: &SipgParams<T>,
    classes: &EdgeClassification,
) -> Result<CsrMatrix<T>> {
    assemble_operator(space, params, classes, Form::Adjoint)
}

// One side of an edge: element, sign of its normal relative to the stored
// edge normal, and basis values at the edge quadrature points.
struct Side<T> {
    element: usize,
    local: usize,
    sign: T,
    values: Vec<[T; 3]>,
}

fn assemble_operator<T: Real>(
    space: &DgSpace<T>,
    params: &SipgParams<T>,
    classes: &EdgeClassification,
    form: Form,
) -> Result<CsrMatrix<T>> {
    params.validate_for_assembly()?;
    let mesh = space.mesh();
    let n = space.ndof();
    let mut b = TripletBuilder::new(n, n);
    let eps = params.epsilon;
    let r = params.reaction;
    let conv_sign = match form {
        Form::State => T::one(),
        Form::Adjoint => -T::one(),
    };

    let rule = space.volume_rule();
    for k in 0..mesh.num_elements() {
        let area = mesh.area(k);
        let g = space.basis_gradients(k);
        for (lambda, &w) in rule.points.iter().zip(&rule.weights) {
            let x = space.point_at(k, lambda);
            let beta = params.beta_at(x);
            let wa = w * area;
            for i in 0..3 {
                for j in 0..3 {
                    let diff = eps * (g[j][0] * g[i][0] + g[j][1] * g[i][1]);
                    let conv = conv_sign * (beta[0] * g[j][0] + beta[1] * g[j][1]) * lambda[i];
                    let reac = r * lambda[j] * lambda[i];
                    b.add(space.dof(k, i), space.dof(k, j), wa * (diff + conv + reac));
                }
            }
        }
    }

    let line = space.edge_rule();
    for edge in mesh.edges() {
        let p0 = mesh.vertices()[edge.vertices[0]];
        let p1 = mesh.vertices()[edge.vertices[1]];
        let points: Vec<Point2<T>> = line
            .points
            .iter()
            .map(|&s| [p0[0] + s * (p1[0] - p0[0]), p0[1] + s * (p1[1] - p0[1])])
            .collect();
        let side = |element: usize, local: usize, sign: T| Side {
            element,
            local,
            sign,
            values: points.iter().map(|&x| space.barycentric(element, x)).collect(),
        };
        let mut sides = vec![side(edge.owner, edge.owner_local, T::one())];
        if let Some((nb, nb_local)) = edge.neighbor {
            sides.push(side(nb, nb_local, -T::one()));
        }
        let omega = if edge.is_boundary() { T::one() } else { T::half() };
        let nrm = edge.normal;
        let len = edge.length;
        let penalty = params.sigma * eps / len;

        // symmetric interior penalty part, identical for both forms
        for sa in &sides {
            let ga = space.basis_gradients(sa.element);
            for sb in &sides {
                let gb = space.basis_gradients(sb.element);
                for (q, &w) in line.weights.iter().enumerate() {
                    let wl = w * len;
                    for i in 0..3 {
                        let gi_n = ga[i][0] * nrm[0] + ga[i][1] * nrm[1];
                        for j in 0..3 {
                            let gj_n = gb[j][0] * nrm[0] + gb[j][1] * nrm[1];
                            let phi_i = sa.values[q][i];
                            let phi_j = sb.values[q][j];
                            let v = -eps * omega * gj_n * sa.sign * phi_i - eps * omega * gi_n * sb.sign * phi_j
                                + penalty * sa.sign * sb.sign * phi_i * phi_j;
                            b.add(space.dof(sa.element, i), space.dof(sb.element, j), wl * v);
                        }
                    }
                }
            }
        }

        // upwind convection: each side looks at its own part of the boundary
        for (s, me) in sides.iter().enumerate() {
            let other = sides.get(1 - s);
            let inflow = classes.is_element_inflow(me.element, me.local);
            let take = match form {
                Form::State => inflow,
                Form::Adjoint => !inflow,
            };
            if !take {
                continue;
            }
            for (q, &w) in line.weights.iter().enumerate() {
                let beta = params.beta_at(points[q]);
                let bn = me.sign * (beta[0] * nrm[0] + beta[1] * nrm[1]);
                // state: + bn (y^e - y) v inside, - bn y v on the inflow boundary;
                // adjoint: - bn (p^e - p) q inside, + bn p q on the outflow boundary
                let c = conv_sign * w * len * bn;
                for i in 0..3 {
                    let phi_i = me.values[q][i];
                    for j in 0..3 {
                        b.add(space.dof(me.element, i), space.dof(me.element, j), -c * me.values[q][j] * phi_i);
                    }
                    if let Some(o) = other {
                        for j in 0..3 {
                            b.add(space.dof(me.element, i), space.dof(o.element, j), c * o.values[q][j] * phi_i);
                        }
                    }
                }
            }
        }
    }
    Ok(b.build())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::factorize;
    use crate::mesh::build_uniform_mesh;
    use std::sync::Arc;

    fn space(n: usize) -> DgSpace<f64> {
        DgSpace::new(Arc::new(build_uniform_mesh(n).unwrap()))
    }

    fn ops(s: &DgSpace<f64>, p: SipgParams<f64>) -> (CsrMatrix<f64>, CsrMatrix<f64>) {
        let c = classify_edges(s.mesh(), |_| p.beta);
        (
            assemble_state_operator(s, &p, &c).unwrap(),
            assemble_adjoint_operator(s, &p, &c).unwrap(),
        )
    }

    #[test]
    fn mass_matrix() {
        let s = space(3);
        let m = assemble_mass(&s);
        let ones = vec![1.0; s.ndof()];
        let m1 = m.mul_vec(&ones).unwrap();
        assert!((m1.iter().sum::<f64>() - 1.0).abs() < 1e-14);
        let a = s.mesh().area(4);
        for i in 0..3 {
            for j in 0..3 {
                let expect = a / 12.0 * if i == j { 2.0 } else { 1.0 };
                assert!((m.get(12 + i, 12 + j) - expect).abs() < 1e-16);
            }
        }
        assert!(m.max_abs_diff(&m.transpose()).unwrap() == 0.0);
        // SPD: a symmetric matrix with a successful pivot-free factorization
        // and positive Rayleigh quotients
        let s2 = space(2);
        let m2 = assemble_mass(&s2);
        assert!(factorize(&m2).is_ok());
        for seed in 0..10 {
            let v: Vec<f64> = (0..s2.ndof()).map(|i| ((i * 31 + seed * 17) as f64).sin()).collect();
            let mv = m2.mul_vec(&v).unwrap();
            assert!(crate::scalar::dot(&v, &mv) > 0.0);
        }
    }

    #[test]
    fn pure_diffusion_is_symmetric() {
        let s = space(3);
        let (a, aa) = ops(&s, SipgParams::new(0.3, [0.0, 0.0], 0.0));
        assert!(a.max_abs_diff(&a.transpose()).unwrap() < 1e-13);
        assert!(a.max_abs_diff(&aa).unwrap() < 1e-13);
    }

    #[test]
    fn reaction_only_is_mass() {
        let s = space(3);
        let (a, _) = ops(&s, SipgParams::new(0.0, [0.0, 0.0], 1.0));
        assert!(a.max_abs_diff(&assemble_mass(&s)).unwrap() < 1e-15);
    }

    #[test]
    fn adjoint_is_transpose() {
        for n in [1, 2, 4] {
            let s = space(n);
            let (a, aa) = ops(&s, SipgParams::new(1e-2, [0.7, -0.3], 0.5));
            assert!(aa.max_abs_diff(&a.transpose()).unwrap() < 1e-14);
        }
    }

    #[test]
    fn rejects_bad_parameters() {
        let s = space(1);
        let c = classify_edges(s.mesh(), |_| [1.0, 0.0]);
        let bad = SipgParams::new(1.0, [1.0, 0.0], 0.0).with_sigma(0.0);
        assert!(assemble_state_operator(&s, &bad, &c).is_err());
        let bad = SipgParams::new(f64::NAN, [1.0, 0.0], 0.0);
        assert!(assemble_adjoint_operator(&s, &bad, &c).is_err());
        let zero_eps = SipgParams::new(0.0, [1.0, 0.0], 0.0);
        assert!(zero_eps.validate_for_assembly().is_ok());
        assert!(zero_eps.validate_for_solve().is_err());
        assert!(SipgParams::new(1.0, [1.0, 0.0], -1.0).validate_for_solve().is_err());
    }

    #[test]
    fn loads() {
        let s = space(3);
        let m = assemble_mass(&s);
        assert!(assemble_load(&s, |_, _| 0.0, 0.0).iter().all(|&v| v == 0.0));
        let one = assemble_load(&s, |_, _| 1.0, 0.0);
        let m1 = m.mul_vec(&vec![1.0; s.ndof()]).unwrap();
        assert!(crate::scalar::max_abs_diff(&one, &m1) < 1e-14);
        let x1 = assemble_load(&s, |p, _| p[0], 0.0);
        let mx = m.mul_vec(&s.interpolate(|p, _| p[0], 0.0)).unwrap();
        assert!(crate::scalar::max_abs_diff(&x1, &mx) < 1e-13);
    }

    #[test]
    fn penalty_increment_vanishes_on_continuous_fields() {
        let s = space(4);
        let p = SipgParams::new(0.5, [1.0, 0.5], 1.0);
        let (a1, _) = ops(&s, p);
        let (a2, _) = ops(&s, p.with_sigma(12.0));
        let diff = CsrMatrix::linear_combination(&[(1.0, &a2), (-1.0, &a1)]).unwrap();
        let y = s.interpolate(|x, _| x[0], 0.0);
        // boundary penalty sees y n, so restrict to fields vanishing on the boundary
        let bubble = s.interpolate(|x, _| x[0] * (1.0 - x[0]) * x[1] * (1.0 - x[1]), 0.0);
        let dy = diff.mul_vec(&bubble).unwrap();
        assert!(crate::scalar::dot(&bubble, &dy).abs() < 1e-13);
        // the increment is positive semidefinite and touches jumps of y
        let dx = diff.mul_vec(&y).unwrap();
        assert!(crate::scalar::dot(&y, &dx) > 0.0);
    }

    #[test]
    fn coercive_for_example_parameters() {
        let s = space(4);
        for beta in [[1.0, 0.0], [0.5, 0.5]] {
            let (a, _) = ops(&s, SipgParams::new(1e-5, beta, 1.0));
            for seed in 0..20u64 {
                let v: Vec<f64> = (0..s.ndof()).map(|i| ((i as f64 + 0.3) * (seed as f64 + 1.7)).sin()).collect();
                let av = a.mul_vec(&v).unwrap();
                assert!(crate::scalar::dot(&v, &av) > 0.0);
            }
        }
    }
}
