//! Derived data checked against finite differences of independently coded
//! closed forms.

use std::f64::consts::PI;

use rand::{RngExt, SeedableRng};
use rand_chacha::ChaCha8Rng;
use stdg::bench::{make_example1, make_example2, ManufacturedCase, TxDefinition};

type Closed = fn(f64, f64, f64) -> f64;

fn s(x1: f64, x2: f64) -> f64 {
    (2.0 * PI * x1).sin() * (2.0 * PI * x2).sin()
}

fn ex1_y(x1: f64, x2: f64, t: f64) -> f64 {
    (-t).exp() * s(x1, x2)
}

fn ex1_p(x1: f64, x2: f64, t: f64) -> f64 {
    -(-t).exp() * (1.0 - t) * s(x1, x2)
}

const EPS: f64 = 1e-5;

fn ex2_q(x1: f64, x2: f64, t: f64) -> f64 {
    let tx = x1 + x2 - t;
    (PI * t).sin() * s(x1, x2) * ((tx.cos() - 1.0) / EPS.sqrt()).exp()
}

fn ex2_p(x1: f64, x2: f64, t: f64) -> f64 {
    -ex2_q(x1, x2, t)
}

fn ex2_y(x1: f64, x2: f64, t: f64) -> f64 {
    let tx = x1 + x2 - t;
    let se = EPS.sqrt();
    let e = ((tx.cos() - 1.0) / se).exp();
    ex2_q(x1, x2, t) * (tx.sin() / (2.0 * se) + 8.0 * EPS * PI * PI + se / 2.0 * tx.cos() - 0.5 * tx.sin().powi(2))
        - PI * (PI * t).cos() * s(x1, x2) * e
}

// Sixth-order central first and second differences along one axis.
fn d1(g: impl Fn(f64) -> f64, h: f64) -> f64 {
    (45.0 * (g(h) - g(-h)) - 9.0 * (g(2.0 * h) - g(-2.0 * h)) + (g(3.0 * h) - g(-3.0 * h))) / (60.0 * h)
}

fn d2(g: impl Fn(f64) -> f64, h: f64) -> f64 {
    (2.0 * (g(3.0 * h) + g(-3.0 * h)) - 27.0 * (g(2.0 * h) + g(-2.0 * h)) + 270.0 * (g(h) + g(-h)) - 490.0 * g(0.0))
        / (180.0 * h * h)
}

struct Derivs {
    v: f64,
    gx: f64,
    gy: f64,
    gt: f64,
    lap: f64,
}

fn fd(c: Closed, x1: f64, x2: f64, t: f64, h: f64) -> Derivs {
    Derivs {
        v: c(x1, x2, t),
        gx: d1(|d| c(x1 + d, x2, t), h),
        gy: d1(|d| c(x1, x2 + d, t), h),
        gt: d1(|d| c(x1, x2, t + d), h),
        lap: d2(|d| c(x1 + d, x2, t), h) + d2(|d| c(x1, x2 + d, t), h),
    }
}

// Returns (state residual, adjoint residual, scale of the terms involved).
fn residuals(case: &ManufacturedCase<f64>, y: Closed, p: Closed, x: [f64; 2], t: f64, h: f64) -> (f64, f64, f64) {
    let prm = case.params;
    let (b, eps, r) = (prm.beta, prm.epsilon, prm.reaction);
    let yd = fd(y, x[0], x[1], t, h);
    let pd = fd(p, x[0], x[1], t, h);
    let u = case.bounds.clamp(pd.v / case.alpha);
    let state = yd.gt - eps * yd.lap + b[0] * yd.gx + b[1] * yd.gy + r * yd.v - u;
    let adjoint = yd.v - pd.gt - eps * pd.lap - b[0] * pd.gx - b[1] * pd.gy + r * pd.v;
    let scale = [yd.gt, yd.gx, yd.gy, yd.v, pd.gt, pd.gx, pd.gy, pd.v, u]
        .iter()
        .fold(1.0f64, |m, v| m.max(v.abs()));
    (
        (state - case.f(x, t)).abs(),
        (adjoint - case.yd(x, t)).abs(),
        scale,
    )
}

#[test]
fn example1_closed_forms_agree() {
    let c = make_example1::<f64>();
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    for _ in 0..50 {
        let (x, t) = ([rng.random::<f64>(), rng.random::<f64>()], rng.random::<f64>());
        assert!((c.y(x, t) - ex1_y(x[0], x[1], t)).abs() < 1e-15);
        assert!((c.p(x, t) - ex1_p(x[0], x[1], t)).abs() < 1e-15);
    }
}

#[test]
fn example1_data_residual() {
    let c = make_example1::<f64>();
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    for _ in 0..50 {
        let (x, t) = ([rng.random::<f64>(), rng.random::<f64>()], rng.random::<f64>());
        let (rs, ra, _) = residuals(&c, ex1_y, ex1_p, x, t, 1e-3);
        assert!(rs <= 1e-8 && ra <= 1e-8, "residuals {rs:e} {ra:e} at {x:?}, {t}");
    }
}

#[test]
fn example2_closed_forms_agree() {
    let c = make_example2::<f64>(TxDefinition::Characteristic);
    let mut rng = ChaCha8Rng::seed_from_u64(12);
    for _ in 0..50 {
        let (x, t) = ([rng.random::<f64>(), rng.random::<f64>()], rng.random::<f64>());
        let scale = ex2_y(x[0], x[1], t).abs().max(1.0);
        assert!((c.y(x, t) - ex2_y(x[0], x[1], t)).abs() < 1e-13 * scale);
        assert!((c.p(x, t) - ex2_p(x[0], x[1], t)).abs() < 1e-15);
        let u = c.u(x, t);
        assert!((0.0..=0.5).contains(&u));
    }
}

#[test]
fn example2_data_residual() {
    // relative to the largest term: the layer makes individual terms reach 1e3
    let c = make_example2::<f64>(TxDefinition::Characteristic);
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    for _ in 0..50 {
        let (x, t) = ([rng.random::<f64>(), rng.random::<f64>()], rng.random::<f64>());
        let (rs, ra, scale) = residuals(&c, ex2_y, ex2_p, x, t, 2e-3);
        assert!(rs <= 1e-6 * scale && ra <= 1e-6 * scale, "residuals {rs:e} {ra:e} (scale {scale:e}) at {x:?}, {t}");
    }
}
