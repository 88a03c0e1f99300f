//! Dense reference implementations shared by the integration tests.
#![allow(dead_code)]

use std::collections::HashMap;

use stdg::mesh::Mesh;

/// Gaussian elimination with partial pivoting on a dense copy.
pub fn dense_solve(a: &[Vec<f64>], b: &[f64]) -> Vec<f64> {
    let n = b.len();
    let mut m: Vec<Vec<f64>> = a.to_vec();
    let mut x = b.to_vec();
    for c in 0..n {
        let piv = (c..n)
            .max_by(|&i, &j| m[i][c].abs().partial_cmp(&m[j][c].abs()).unwrap())
            .unwrap();
        m.swap(c, piv);
        x.swap(c, piv);
        assert!(m[c][c] != 0.0, "dense oracle hit a zero pivot");
        for r in c + 1..n {
            let l = m[r][c] / m[c][c];
            if l != 0.0 {
                for j in c..n {
                    m[r][j] -= l * m[c][j];
                }
                x[r] -= l * x[c];
            }
        }
    }
    for c in (0..n).rev() {
        let s: f64 = (c + 1..n).map(|j| m[c][j] * x[j]).sum();
        x[c] = (x[c] - s) / m[c][c];
    }
    x
}

pub fn dense_mul(a: &[Vec<f64>], x: &[f64]) -> Vec<f64> {
    a.iter().map(|row| row.iter().zip(x).map(|(a, b)| a * b).sum()).collect()
}

pub fn max_diff(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).fold(0.0, |m, (x, y)| m.max((x - y).abs()))
}

#[derive(Clone, Copy, Debug)]
pub struct Coeffs {
    pub eps: f64,
    pub beta: [f64; 2],
    pub r: f64,
    pub sigma: f64,
}

// Affine P1 data of one triangle, computed from the Jacobian.
struct Local {
    c0: [f64; 2],
    inv: [[f64; 2]; 2],
    area: f64,
    grads: [[f64; 2]; 3],
    corners: [[f64; 2]; 3],
}

impl Local {
    fn new(corners: [[f64; 2]; 3]) -> Self {
        let [c0, c1, c2] = corners;
        let j = [[c1[0] - c0[0], c2[0] - c0[0]], [c1[1] - c0[1], c2[1] - c0[1]]];
        let det = j[0][0] * j[1][1] - j[0][1] * j[1][0];
        let inv = [[j[1][1] / det, -j[0][1] / det], [-j[1][0] / det, j[0][0] / det]];
        // rows of J^{-1} are the gradients of lambda_1, lambda_2
        let g1 = inv[0];
        let g2 = inv[1];
        Self {
            c0,
            inv,
            area: det.abs() / 2.0,
            grads: [[-g1[0] - g2[0], -g1[1] - g2[1]], g1, g2],
            corners,
        }
    }

    fn basis(&self, x: [f64; 2]) -> [f64; 3] {
        let d = [x[0] - self.c0[0], x[1] - self.c0[1]];
        let l1 = self.inv[0][0] * d[0] + self.inv[0][1] * d[1];
        let l2 = self.inv[1][0] * d[0] + self.inv[1][1] * d[1];
        [1.0 - l1 - l2, l1, l2]
    }

    fn centroid(&self) -> [f64; 2] {
        let c = &self.corners;
        [(c[0][0] + c[1][0] + c[2][0]) / 3.0, (c[0][1] + c[1][1] + c[2][1]) / 3.0]
    }
}

fn dot(a: [f64; 2], b: [f64; 2]) -> f64 {
    a[0] * b[0] + a[1] * b[1]
}

/// Brute-force dense matrix of the state (`adjoint = false`) or adjoint
/// bilinear form, `A[i][j] = a(phi_j, phi_i)` with DOF `3k + i`. Uses the
/// edge-midpoint volume rule and two-point Gauss on edges, exact for P1.
pub fn dense_operator(mesh: &Mesh<f64>, c: Coeffs, adjoint: bool) -> Vec<Vec<f64>> {
    let tris = mesh.triangles();
    let verts = mesh.vertices();
    let ne = tris.len();
    let n = 3 * ne;
    let locals: Vec<Local> = tris
        .iter()
        .map(|t| Local::new([verts[t[0]], verts[t[1]], verts[t[2]]]))
        .collect();
    let mut a = vec![vec![0.0; n]; n];

    // volume terms
    let conv_sign = if adjoint { -1.0 } else { 1.0 };
    for (k, loc) in locals.iter().enumerate() {
        let cs = loc.corners;
        let mids = [
            [(cs[0][0] + cs[1][0]) / 2.0, (cs[0][1] + cs[1][1]) / 2.0],
            [(cs[1][0] + cs[2][0]) / 2.0, (cs[1][1] + cs[2][1]) / 2.0],
            [(cs[2][0] + cs[0][0]) / 2.0, (cs[2][1] + cs[0][1]) / 2.0],
        ];
        for x in mids {
            let phi = loc.basis(x);
            let w = loc.area / 3.0;
            for i in 0..3 {
                for j in 0..3 {
                    let val = c.eps * dot(loc.grads[j], loc.grads[i])
                        + conv_sign * dot(c.beta, loc.grads[j]) * phi[i]
                        + c.r * phi[j] * phi[i];
                    a[3 * k + i][3 * k + j] += w * val;
                }
            }
        }
    }

    // edges: vertex pair -> (element, outward normal)
    let mut sides: HashMap<(usize, usize), Vec<usize>> = HashMap::new();
    for (k, t) in tris.iter().enumerate() {
        for e in 0..3 {
            let (p, q) = (t[e], t[(e + 1) % 3]);
            sides.entry((p.min(q), p.max(q))).or_default().push(k);
        }
    }
    let gauss = [0.5 - 0.5 / 3f64.sqrt(), 0.5 + 0.5 / 3f64.sqrt()];
    let mut keys: Vec<_> = sides.keys().copied().collect();
    keys.sort_unstable();
    for key in keys {
        let elems = &sides[&key];
        let (pa, pb) = (verts[key.0], verts[key.1]);
        let len = ((pb[0] - pa[0]).powi(2) + (pb[1] - pa[1]).powi(2)).sqrt();
        let outward = |k: usize| {
            let mut nrm = [(pb[1] - pa[1]) / len, -(pb[0] - pa[0]) / len];
            let cen = locals[k].centroid();
            if dot(nrm, [cen[0] - pa[0], cen[1] - pa[1]]) > 0.0 {
                nrm = [-nrm[0], -nrm[1]];
            }
            nrm
        };
        let n1 = outward(elems[0]);
        for s in gauss {
            let x = [pa[0] + s * (pb[0] - pa[0]), pa[1] + s * (pb[1] - pa[1])];
            let w = 0.5 * len;
            // (element, local) of every function with a trace here
            let funcs: Vec<(usize, usize)> = elems.iter().flat_map(|&k| (0..3).map(move |i| (k, i))).collect();
            let trace = |f: (usize, usize), side: usize| -> (f64, [f64; 2]) {
                if elems.get(side) == Some(&f.0) {
                    (locals[f.0].basis(x)[f.1], locals[f.0].grads[f.1])
                } else {
                    (0.0, [0.0, 0.0])
                }
            };
            let jump = |f| {
                let v = if elems.len() == 2 { trace(f, 0).0 - trace(f, 1).0 } else { trace(f, 0).0 };
                [v * n1[0], v * n1[1]]
            };
            let avg = |f| {
                if elems.len() == 2 {
                    let (g0, g1) = (trace(f, 0).1, trace(f, 1).1);
                    [c.eps * (g0[0] + g1[0]) / 2.0, c.eps * (g0[1] + g1[1]) / 2.0]
                } else {
                    let g = trace(f, 0).1;
                    [c.eps * g[0], c.eps * g[1]]
                }
            };
            for &fi in &funcs {
                for &fj in &funcs {
                    let val = -dot(avg(fj), jump(fi)) - dot(avg(fi), jump(fj))
                        + c.sigma * c.eps / len * dot(jump(fj), jump(fi));
                    a[3 * fi.0 + fi.1][3 * fj.0 + fj.1] += w * val;
                }
            }

            // upwind terms, element by element
            for (side, &k) in elems.iter().enumerate() {
                let nk = outward(k);
                let bn = dot(c.beta, nk);
                let neighbour = if elems.len() == 2 { Some(1 - side) } else { None };
                let active = if adjoint { bn > 0.0 } else { bn < 0.0 };
                if !active {
                    continue;
                }
                // sign of the edge term relative to bn (y^e - y) v
                let sgn = if adjoint { -1.0 } else { 1.0 };
                for i in 0..3 {
                    let v = trace((k, i), side).0;
                    for &fj in &funcs {
                        let own = trace(fj, side).0;
                        let val = match neighbour {
                            Some(o) => sgn * bn * (trace(fj, o).0 - own) * v,
                            None => -sgn * bn * own * v,
                        };
                        a[3 * k + i][3 * fj.0 + fj.1] += w * val;
                    }
                }
            }
        }
    }
    a
}

/// Dense consistent mass matrix by the same volume rule.
pub fn dense_mass(mesh: &Mesh<f64>) -> Vec<Vec<f64>> {
    dense_operator(
        mesh,
        Coeffs {
            eps: 0.0,
            beta: [0.0, 0.0],
            r: 1.0,
            sigma: 0.0,
        },
        false,
    )
}
