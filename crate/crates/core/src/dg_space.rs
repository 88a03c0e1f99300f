//! Discontinuous piecewise-linear space on a triangulation.
//!
//! Each triangle carries three degrees of freedom, the values of the field at
//! its vertices (nodal P1 basis = barycentric coordinates). DOF `3k + i`
//! belongs to local vertex `i` of element `k`.

use std::io::Write;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::linalg::CsrMatrix;
use crate::mesh::Mesh;
use crate::quadrature::{LineRule, TriangleRule};
use crate::scalar::{Point2, Real};

#[derive(Clone, Debug)]
pub struct DgSpace<T> {
    mesh: Arc<Mesh<T>>,
    volume: TriangleRule<T>,
    edge: LineRule<T>,
    error_rule: TriangleRule<T>,
    gradients: Vec<[Point2<T>; 3]>,
}

impl<T: Real> DgSpace<T> {
    pub fn new(mesh: Arc<Mesh<T>>) -> Self {
        let gradients = (0..mesh.num_elements())
            .map(|k| {
                let [p0, p1, p2] = mesh.corners(k);
                let two_area = T::two() * mesh.area(k);
                [
                    [(p1[1] - p2[1]) / two_area, (p2[0] - p1[0]) / two_area],
                    [(p2[1] - p0[1]) / two_area, (p0[0] - p2[0]) / two_area],
                    [(p0[1] - p1[1]) / two_area, (p1[0] - p0[0]) / two_area],
                ]
            })
            .collect();
        let volume = TriangleRule::degree5();
        let error_rule = volume.subdivided();
        Self {
            mesh,
            volume,
            edge: LineRule::gauss3(),
            error_rule,
            gradients,
        }
    }

    pub fn mesh(&self) -> &Mesh<T> {
        &self.mesh
    }

    pub fn mesh_arc(&self) -> &Arc<Mesh<T>> {
        &self.mesh
    }

    pub fn ndof(&self) -> usize {
        3 * self.mesh.num_elements()
    }

    pub fn dof(&self, element: usize, local: usize) -> usize {
        3 * element + local
    }

    pub fn volume_rule(&self) -> &TriangleRule<T> {
        &self.volume
    }

    pub fn edge_rule(&self) -> &LineRule<T> {
        &self.edge
    }

    /// Constant gradients of the three local basis functions.
    pub fn basis_gradients(&self, element: usize) -> &[Point2<T>; 3] {
        &self.gradients[element]
    }

    pub fn point_at(&self, element: usize, bary: &[T; 3]) -> Point2<T> {
        let c = self.mesh.corners(element);
        [
            bary[0] * c[0][0] + bary[1] * c[1][0] + bary[2] * c[2][0],
            bary[0] * c[0][1] + bary[1] * c[1][1] + bary[2] * c[2][1],
        ]
    }

    /// Barycentric coordinates of `point` with respect to `element`.
    pub fn barycentric(&self, element: usize, point: Point2<T>) -> [T; 3] {
        let c = self.mesh.corners(element);
        let g = &self.gradients[element];
        let mut lambda = [T::zero(); 3];
        for i in 0..3 {
            // lambda_i is affine and vanishes on the edge opposite vertex i
            let o = c[(i + 1) % 3];
            lambda[i] = g[i][0] * (point[0] - o[0]) + g[i][1] * (point[1] - o[1]);
        }
        lambda
    }

    /// Value of the discrete field `v` at `point` inside `element`.
    pub fn evaluate(&self, v: &[T], element: usize, point: Point2<T>) -> Result<T> {
        self.check_len(v)?;
        let lambda = self.barycentric(element, point);
        let tol = T::lit(1e-12);
        if lambda.iter().any(|&l| l < -tol || l > T::one() + tol) {
            return Err(Error::PointOutsideElement { element });
        }
        Ok((0..3).map(|i| v[self.dof(element, i)] * lambda[i]).sum())
    }

    /// Vertex interpolant of `g(., t)`, element by element.
    pub fn interpolate<F: Fn(Point2<T>, T) -> T>(&self, g: F, t: T) -> Vec<T> {
        let mut out = vec![T::zero(); self.ndof()];
        for k in 0..self.mesh.num_elements() {
            for (i, p) in self.mesh.corners(k).into_iter().enumerate() {
                out[self.dof(k, i)] = g(p, t);
            }
        }
        out
    }

    /// Element-local L2 projection of `g(., t)`.
    pub fn l2_project<F: Fn(Point2<T>, T) -> T>(&self, g: F, t: T) -> Vec<T> {
        let mut out = vec![T::zero(); self.ndof()];
        let quarter = T::lit(0.25);
        for k in 0..self.mesh.num_elements() {
            let area = self.mesh.area(k);
            let mut b = [T::zero(); 3];
            for (lambda, &w) in self.volume.points.iter().zip(&self.volume.weights) {
                let gv = g(self.point_at(k, lambda), t) * w * area;
                for i in 0..3 {
                    b[i] += gv * lambda[i];
                }
            }
            // local mass is area/12 (I + J); its inverse is 12/area (I - J/4)
            let sum = b[0] + b[1] + b[2];
            let scale = T::lit(12.0) / area;
            for i in 0..3 {
                out[self.dof(k, i)] = scale * (b[i] - quarter * sum);
            }
        }
        out
    }

    /// `||v_h - g(., t)||_{L2}` with a refined element quadrature.
    pub fn l2_error<F: Fn(Point2<T>, T) -> T>(&self, v: &[T], g: F, t: T) -> T {
        let mut acc = T::zero();
        for k in 0..self.mesh.num_elements() {
            let area = self.mesh.area(k);
            let local = [v[3 * k], v[3 * k + 1], v[3 * k + 2]];
            for (lambda, &w) in self.error_rule.points.iter().zip(&self.error_rule.weights) {
                let vh = local[0] * lambda[0] + local[1] * lambda[1] + local[2] * lambda[2];
                let d = vh - g(self.point_at(k, lambda), t);
                acc += w * area * d * d;
            }
        }
        acc.sqrt()
    }

    /// Squared L2 norm by direct element quadrature.
    pub fn quadrature_norm_squared(&self, v: &[T]) -> T {
        let mut acc = T::zero();
        for k in 0..self.mesh.num_elements() {
            let area = self.mesh.area(k);
            for (lambda, &w) in self.volume.points.iter().zip(&self.volume.weights) {
                let vh: T = (0..3).map(|i| v[3 * k + i] * lambda[i]).sum();
                acc += w * area * vh * vh;
            }
        }
        acc
    }

    /// CSV snapshot with header `element,vertex,value`.
    pub fn write_field_csv<W: Write>(&self, v: &[T], mut out: W) -> Result<()> {
        self.check_len(v)?;
        writeln!(out, "element,vertex,value")?;
        for k in 0..self.mesh.num_elements() {
            for i in 0..3 {
                writeln!(out, "{},{},{:e}", k, self.mesh.triangles()[k][i], v[self.dof(k, i)])?;
            }
        }
        Ok(())
    }

    pub(crate) fn check_len(&self, v: &[T]) -> Result<()> {
        if v.len() != self.ndof() {
            return Err(Error::DimensionMismatch {
                expected: self.ndof(),
                got: v.len(),
            });
        }
        Ok(())
    }
}

/// `sqrt(v^T M v)`.
pub fn l2_norm<T: Real>(mass: &CsrMatrix<T>, v: &[T]) -> Result<T> {
    let mv = mass.mul_vec(v)?;
    Ok(crate::scalar::dot(v, &mv).max(T::zero()).sqrt())
}
