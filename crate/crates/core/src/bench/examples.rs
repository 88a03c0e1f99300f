//! Manufactured optimal control problems with known solutions.
//!
//! The exact state `y` and adjoint `p` are closed forms; the control is
//! `u = clamp(p / alpha)`, and `f`, `y_d` are derived so that the strong
//! optimality system holds:
//!
//! ```text
//! f   = y_t - eps lap y + beta . grad y + r y - u
//! y_d = y - p_t - eps lap p - beta . grad p + r p
//! ```
//!
//! The adjoint sign follows `u = clamp(p / alpha)`.

use std::fmt;
use std::str::FromStr;
use std::sync::Arc;

use super::Jet;
use crate::assembly::SipgParams;
use crate::error::{Error, Result};
use crate::optimizer::{Bounds, DataFn, OcpProblem};
use crate::scalar::{Point2, Real};

/// Closed form field, evaluated on jets of `(x1, x2, t)`.
pub type Field<T> = Arc<dyn Fn([Jet<T>; 3]) -> Jet<T> + Send + Sync>;

/// Choice of the inner variable `t_x` in Example 2.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum TxDefinition {
    /// `x1 + x2 - t`, constant along the characteristics of `beta = (0.5, 0.5)`.
    #[default]
    Characteristic,
    /// `(x1 + x2) / 2`.
    HalfSum,
    /// `0`, which removes the layer.
    Zero,
}

impl FromStr for TxDefinition {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "char" | "characteristic" => Ok(Self::Characteristic),
            "half" | "half-sum" => Ok(Self::HalfSum),
            "zero" => Ok(Self::Zero),
            other => Err(Error::InvalidParameter(format!("unknown t_x definition `{other}`"))),
        }
    }
}

impl fmt::Display for TxDefinition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Self::Characteristic => "char",
            Self::HalfSum => "half",
            Self::Zero => "zero",
        })
    }
}

#[derive(Clone)]
pub struct ManufacturedCase<T> {
    pub name: String,
    pub params: SipgParams<T>,
    pub alpha: T,
    pub bounds: Bounds<T>,
    pub horizon: T,
    y: Field<T>,
    p: Field<T>,
}

impl<T: Real> fmt::Debug for ManufacturedCase<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("ManufacturedCase")
            .field("name", &self.name)
            .field("params", &self.params)
            .field("alpha", &self.alpha)
            .field("bounds", &self.bounds)
            .field("horizon", &self.horizon)
            .finish_non_exhaustive()
    }
}

fn jets<T: Real>(x: Point2<T>, t: T) -> [Jet<T>; 3] {
    Jet::variables(x[0], x[1], t)
}

// sin(2 pi x1) sin(2 pi x2)
fn bump<T: Real>(x1: Jet<T>, x2: Jet<T>) -> Jet<T> {
    let w = T::two() * T::pi();
    (x1 * w).sin() * (x2 * w).sin()
}

impl<T: Real> ManufacturedCase<T> {
    pub fn new(name: &str, params: SipgParams<T>, alpha: T, bounds: Bounds<T>, horizon: T, y: Field<T>, p: Field<T>) -> Self {
        Self {
            name: name.to_string(),
            params,
            alpha,
            bounds,
            horizon,
            y,
            p,
        }
    }

    /// Same fields with another regularization weight (changes `u` and `f`).
    pub fn with_alpha(mut self, alpha: T) -> Self {
        self.alpha = alpha;
        self
    }

    pub fn with_sigma(mut self, sigma: T) -> Self {
        self.params.sigma = sigma;
        self
    }

    pub fn y_jet(&self, x: Point2<T>, t: T) -> Jet<T> {
        (self.y)(jets(x, t))
    }

    pub fn p_jet(&self, x: Point2<T>, t: T) -> Jet<T> {
        (self.p)(jets(x, t))
    }

    pub fn y(&self, x: Point2<T>, t: T) -> T {
        self.y_jet(x, t).v
    }

    pub fn p(&self, x: Point2<T>, t: T) -> T {
        self.p_jet(x, t).v
    }

    pub fn u(&self, x: Point2<T>, t: T) -> T {
        self.bounds.clamp(self.p(x, t) / self.alpha)
    }

    pub fn y0(&self, x: Point2<T>) -> T {
        self.y(x, T::zero())
    }

    pub fn f(&self, x: Point2<T>, t: T) -> T {
        let y = self.y_jet(x, t);
        let b = self.params.beta;
        y.d[2] - self.params.epsilon * y.laplacian() + b[0] * y.d[0] + b[1] * y.d[1] + self.params.reaction * y.v
            - self.u(x, t)
    }

    pub fn yd(&self, x: Point2<T>, t: T) -> T {
        let p = self.p_jet(x, t);
        let b = self.params.beta;
        self.y(x, t) - p.d[2] - self.params.epsilon * p.laplacian() - b[0] * p.d[0] - b[1] * p.d[1]
            + self.params.reaction * p.v
    }

    pub fn problem(&self) -> Result<OcpProblem<T>> {
        let (a, b, c) = (self.clone(), self.clone(), self.clone());
        let f: DataFn<T> = Arc::new(move |x, t| a.f(x, t));
        let yd: DataFn<T> = Arc::new(move |x, t| b.yd(x, t));
        let y0: DataFn<T> = Arc::new(move |x, _| c.y0(x));
        OcpProblem::new(self.params, self.alpha, self.bounds, self.horizon, f, yd, y0)
    }
}

/// `y = exp(-t) S`, `p = -exp(-t)(1 - t) S` with `S = sin(2 pi x1) sin(2 pi x2)`;
/// `eps = 1e-5`, `beta = (1, 0)`, `r = 1`, `alpha = 1`, `u >= 0`.
pub fn make_example1<T: Real>() -> ManufacturedCase<T> {
    let y: Field<T> = Arc::new(|[x1, x2, t]| (-t).exp() * bump(x1, x2));
    let p: Field<T> = Arc::new(|[x1, x2, t]| -((-t).exp() * (-t + T::one()) * bump(x1, x2)));
    ManufacturedCase::new(
        "example1",
        SipgParams::new(T::lit(1e-5), [T::one(), T::zero()], T::one()),
        T::one(),
        Bounds::at_least(T::zero()),
        T::one(),
        y,
        p,
    )
}

/// Convection-dominated case with an internal layer:
/// `q = sin(pi t) S exp((cos t_x - 1) / sqrt(eps))`, `p = -q`,
/// `y = q (sin t_x / (2 sqrt eps) + 8 eps pi^2 + sqrt(eps) cos t_x / 2 - sin^2 t_x / 2) - pi cos(pi t) S exp(..)`;
/// `beta = (0.5, 0.5)`, `r = 1`, `alpha = 1`, `0 <= u <= 0.5`.
pub fn make_example2<T: Real>(tx: TxDefinition) -> ManufacturedCase<T> {
    example2_with_epsilon(tx, T::lit(1e-5))
}

pub fn example2_with_epsilon<T: Real>(tx: TxDefinition, epsilon: T) -> ManufacturedCase<T> {
    let se = epsilon.sqrt();
    let pi = T::pi();
    let inner = move |x1: Jet<T>, x2: Jet<T>, t: Jet<T>| match tx {
        TxDefinition::Characteristic => x1 + x2 - t,
        TxDefinition::HalfSum => (x1 + x2) * T::half(),
        TxDefinition::Zero => Jet::constant(T::zero()),
    };
    // S exp((cos t_x - 1) / sqrt eps)
    let layer = move |x1: Jet<T>, x2: Jet<T>, t: Jet<T>| {
        let c = inner(x1, x2, t).cos() + (-T::one());
        bump(x1, x2) * (c * (T::one() / se)).exp()
    };
    let q = move |[x1, x2, t]: [Jet<T>; 3]| (t * pi).sin() * layer(x1, x2, t);
    let p: Field<T> = Arc::new(move |v| -q(v));
    let y: Field<T> = Arc::new(move |v: [Jet<T>; 3]| {
        let [x1, x2, t] = v;
        let tx = inner(x1, x2, t);
        let s = tx.sin();
        let factor = s * (T::half() / se) + tx.cos() * (T::half() * se) - s * s * T::half()
            + T::lit(8.0) * epsilon * pi * pi;
        q(v) * factor - (t * pi).cos() * layer(x1, x2, t) * pi
    });
    ManufacturedCase::new(
        "example2",
        SipgParams::new(epsilon, [T::half(), T::half()], T::one()),
        T::one(),
        Bounds::new(T::zero(), T::half()).expect("valid bounds"),
        T::one(),
        y,
        p,
    )
}
