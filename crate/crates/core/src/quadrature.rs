//! Quadrature rules on the reference triangle and the unit interval.

use crate::scalar::Real;

/// Rule on a triangle in barycentric coordinates; weights sum to one.
#[derive(Clone, Debug)]
pub struct TriangleRule<T> {
    pub points: Vec<[T; 3]>,
    pub weights: Vec<T>,
}

impl<T: Real> TriangleRule<T> {
    /// Seven-point rule exact for polynomials of degree five.
    pub fn degree5() -> Self {
        let s15 = T::lit(15.0).sqrt();
        let third = T::one() / T::lit(3.0);
        let a1 = (T::lit(6.0) - s15) / T::lit(21.0);
        let a2 = (T::lit(6.0) + s15) / T::lit(21.0);
        let w1 = (T::lit(155.0) - s15) / T::lit(1200.0);
        let w2 = (T::lit(155.0) + s15) / T::lit(1200.0);
        let b1 = T::one() - T::two() * a1;
        let b2 = T::one() - T::two() * a2;
        Self {
            points: vec![
                [third, third, third],
                [a1, a1, b1],
                [a1, b1, a1],
                [b1, a1, a1],
                [a2, a2, b2],
                [a2, b2, a2],
                [b2, a2, a2],
            ],
            weights: vec![T::lit(9.0) / T::lit(40.0), w1, w1, w1, w2, w2, w2],
        }
    }

    /// Composite rule: applies `self` on the four congruent sub-triangles.
    pub fn subdivided(&self) -> Self {
        let o = T::zero();
        let i = T::one();
        let h = T::half();
        let subs: [[[T; 3]; 3]; 4] = [
            [[i, o, o], [h, h, o], [h, o, h]],
            [[h, h, o], [o, i, o], [o, h, h]],
            [[h, o, h], [o, h, h], [o, o, i]],
            [[o, h, h], [h, o, h], [h, h, o]],
        ];
        let quarter = T::lit(0.25);
        let mut points = Vec::with_capacity(4 * self.points.len());
        let mut weights = Vec::with_capacity(4 * self.points.len());
        for sub in &subs {
            for (p, &w) in self.points.iter().zip(&self.weights) {
                let mut mapped = [T::zero(); 3];
                for (corner, &lambda) in sub.iter().zip(p) {
                    for c in 0..3 {
                        mapped[c] += lambda * corner[c];
                    }
                }
                points.push(mapped);
                weights.push(w * quarter);
            }
        }
        Self { points, weights }
    }
}

/// Rule on `[0, 1]`; weights sum to one.
#[derive(Clone, Debug)]
pub struct LineRule<T> {
    pub points: Vec<T>,
    pub weights: Vec<T>,
}

impl<T: Real> LineRule<T> {
    /// Three-point Gauss-Legendre, exact for degree five.
    pub fn gauss3() -> Self {
        let d = T::half() * (T::lit(3.0) / T::lit(5.0)).sqrt();
        let h = T::half();
        Self {
            points: vec![h - d, h, h + d],
            weights: vec![T::lit(5.0 / 18.0), T::lit(8.0 / 18.0), T::lit(5.0 / 18.0)],
        }
    }
}
