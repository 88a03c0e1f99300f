//! Second-order forward differentiation in `(x1, x2, t)`.
//!
//! A [`Jet`] carries a value, its gradient in `(x1, x2, t)` and the pure
//! second derivatives in `x1` and `x2`, which is all the Laplacian needs.

use std::ops::{Add, Mul, Neg, Sub};

use crate::scalar::Real;

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Jet<T> {
    pub v: T,
    /// `d/dx1`, `d/dx2`, `d/dt`.
    pub d: [T; 3],
    /// `d2/dx1^2`, `d2/dx2^2`.
    pub dd: [T; 2],
}

impl<T: Real> Jet<T> {
    pub fn constant(v: T) -> Self {
        Self {
            v,
            d: [T::zero(); 3],
            dd: [T::zero(); 2],
        }
    }

    /// The coordinate functions `x1`, `x2`, `t` at a point.
    pub fn variables(x1: T, x2: T, t: T) -> [Self; 3] {
        let var = |v: T, axis: usize| {
            let mut j = Self::constant(v);
            j.d[axis] = T::one();
            j
        };
        [var(x1, 0), var(x2, 1), var(t, 2)]
    }

    pub fn laplacian(&self) -> T {
        self.dd[0] + self.dd[1]
    }

    pub fn scale(self, c: T) -> Self {
        Self {
            v: self.v * c,
            d: self.d.map(|x| x * c),
            dd: self.dd.map(|x| x * c),
        }
    }

    // h(self) given h, h', h'' at self.v
    fn chain(self, h0: T, h1: T, h2: T) -> Self {
        Self {
            v: h0,
            d: self.d.map(|x| h1 * x),
            dd: [h2 * self.d[0] * self.d[0] + h1 * self.dd[0], h2 * self.d[1] * self.d[1] + h1 * self.dd[1]],
        }
    }

    pub fn sin(self) -> Self {
        let (s, c) = self.v.sin_cos();
        self.chain(s, c, -s)
    }

    pub fn cos(self) -> Self {
        let (s, c) = self.v.sin_cos();
        self.chain(c, -s, -c)
    }

    pub fn exp(self) -> Self {
        let e = self.v.exp();
        self.chain(e, e, e)
    }
}

impl<T: Real> Add for Jet<T> {
    type Output = Self;
    fn add(self, o: Self) -> Self {
        Self {
            v: self.v + o.v,
            d: [self.d[0] + o.d[0], self.d[1] + o.d[1], self.d[2] + o.d[2]],
            dd: [self.dd[0] + o.dd[0], self.dd[1] + o.dd[1]],
        }
    }
}

impl<T: Real> Sub for Jet<T> {
    type Output = Self;
    fn sub(self, o: Self) -> Self {
        self + (-o)
    }
}

impl<T: Real> Neg for Jet<T> {
    type Output = Self;
    fn neg(self) -> Self {
        self.scale(-T::one())
    }
}

impl<T: Real> Mul for Jet<T> {
    type Output = Self;
    fn mul(self, o: Self) -> Self {
        let two = T::two();
        Self {
            v: self.v * o.v,
            d: [
                self.d[0] * o.v + self.v * o.d[0],
                self.d[1] * o.v + self.v * o.d[1],
                self.d[2] * o.v + self.v * o.d[2],
            ],
            dd: [
                self.dd[0] * o.v + two * self.d[0] * o.d[0] + self.v * o.dd[0],
                self.dd[1] * o.v + two * self.d[1] * o.d[1] + self.v * o.dd[1],
            ],
        }
    }
}

impl<T: Real> Add<T> for Jet<T> {
    type Output = Self;
    fn add(self, c: T) -> Self {
        Self { v: self.v + c, ..self }
    }
}

impl<T: Real> Mul<T> for Jet<T> {
    type Output = Self;
    fn mul(self, c: T) -> Self {
        self.scale(c)
    }
}
