mod common;

use std::sync::Arc;

use common::{dense_mass, dense_operator, max_diff, Coeffs};
use proptest::prelude::*;
use stdg::assembly::{SipgOperators, SipgParams};
use stdg::dg_space::DgSpace;
use stdg::mesh::build_uniform_mesh;

fn compare(n: usize, p: SipgParams<f64>) -> f64 {
    let mesh = build_uniform_mesh::<f64>(n).unwrap();
    let space = DgSpace::new(Arc::new(mesh.clone()));
    let ops = SipgOperators::assemble(&space, &p).unwrap();
    let c = Coeffs {
        eps: p.epsilon,
        beta: p.beta,
        r: p.reaction,
        sigma: p.sigma,
    };
    let mut worst = 0.0f64;
    for (lib, oracle) in [
        (&ops.state, dense_operator(&mesh, c, false)),
        (&ops.adjoint, dense_operator(&mesh, c, true)),
        (&ops.mass, dense_mass(&mesh)),
    ] {
        for (a, b) in lib.to_dense().iter().zip(&oracle) {
            worst = worst.max(max_diff(a, b));
        }
    }
    worst
}

#[test]
fn matches_dense_oracle_on_small_meshes() {
    for n in [1, 2, 3] {
        let p = SipgParams::new(0.3, [0.8, -0.45], 1.5).with_sigma(9.0);
        assert!(compare(n, p) < 1e-12, "n = {n}");
        // tangential flow on the diagonals of the split
        let p = SipgParams::new(1e-3, [0.5, 0.5], 1.0);
        assert!(compare(n, p) < 1e-12, "n = {n}");
    }
}

#[test]
fn constant_sees_only_the_inflow_boundary() {
    // beta . grad 1 = 0 and interior jumps vanish
    let mesh = build_uniform_mesh::<f64>(3).unwrap();
    let space = DgSpace::new(Arc::new(mesh));
    let p = SipgParams::new(0.0, [1.0, 0.0], 0.0);
    let ops = SipgOperators::assemble(&space, &p).unwrap();
    let ones = vec![1.0; space.ndof()];
    let a1 = ops.state.mul_vec(&ones).unwrap();
    // 1^T A 1 is the inflow flux through x1 = 0
    let total: f64 = a1.iter().sum();
    assert!((total - 1.0).abs() < 1e-13, "{total}");
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(16))]

    #[test]
    fn oracle_agreement(eps in 1e-4f64..2.0, bx in -1.0f64..1.0, by in -1.0f64..1.0, r in 0.0f64..2.0, sigma in 1.0f64..15.0) {
        prop_assert!(compare(2, SipgParams::new(eps, [bx, by], r).with_sigma(sigma)) < 1e-12);
    }

    #[test]
    fn adjoint_is_state_transpose(eps in 1e-6f64..1.0, bx in -2.0f64..2.0, by in -2.0f64..2.0, r in 0.0f64..2.0) {
        let space = DgSpace::new(Arc::new(build_uniform_mesh::<f64>(3).unwrap()));
        let ops = SipgOperators::assemble(&space, &SipgParams::new(eps, [bx, by], r)).unwrap();
        let d = ops.adjoint.max_abs_diff(&ops.state.transpose()).unwrap();
        prop_assert!(d <= 8.0 * f64::EPSILON * ops.state.max_abs());
    }
}
