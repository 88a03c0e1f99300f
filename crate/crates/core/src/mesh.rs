//! Structured triangulations of the unit square and upwind edge classification.
//!
//! Every grid square `[i/n, (i+1)/n] x [j/n, (j+1)/n]` is split along the
//! diagonal from its bottom-left to its top-right corner. Triangles are stored
//! counter-clockwise. Local edge `e` of a triangle is the edge opposite its
//! local vertex `e`.
//!
//! Each edge is stored once. Its normal points outward from the owning
//! element, which is the first element that visited it during construction.
//! Interior edges record the neighbor on the far side; boundary edges have
//! no neighbor and their normal is the outward normal of the square.

use std::collections::HashMap;
use std::io::Write;

use crate::error::{Error, Result};
use crate::scalar::{Point2, Real};

#[derive(Clone, Debug)]
pub struct Edge<T> {
    pub vertices: [usize; 2],
    pub owner: usize,
    /// Local edge index of this edge inside the owner element.
    pub owner_local: usize,
    /// Far-side element and its local edge index, `None` on the boundary.
    pub neighbor: Option<(usize, usize)>,
    /// Unit normal pointing out of the owner element.
    pub normal: Point2<T>,
    pub length: T,
}

impl<T: Real> Edge<T> {
    pub fn is_boundary(&self) -> bool {
        self.neighbor.is_none()
    }

    pub fn midpoint(&self, mesh: &Mesh<T>) -> Point2<T> {
        let a = mesh.vertices[self.vertices[0]];
        let b = mesh.vertices[self.vertices[1]];
        [(a[0] + b[0]) * T::half(), (a[1] + b[1]) * T::half()]
    }
}

#[derive(Clone, Debug)]
pub struct Mesh<T> {
    vertices: Vec<Point2<T>>,
    triangles: Vec<[usize; 3]>,
    edges: Vec<Edge<T>>,
    element_edges: Vec<[usize; 3]>,
    areas: Vec<T>,
    diameters: Vec<T>,
    h: T,
}

/// Builds the `n x n` structured triangulation of the unit square.
pub fn build_uniform_mesh<T: Real>(n: usize) -> Result<Mesh<T>> {
    if n == 0 {
        return Err(Error::InvalidResolution(n));
    }
    let scale = T::from_index(n);
    let mut vertices = Vec::with_capacity((n + 1) * (n + 1));
    for j in 0..=n {
        for i in 0..=n {
            vertices.push([T::from_index(i) / scale, T::from_index(j) / scale]);
        }
    }
    let vid = |i: usize, j: usize| j * (n + 1) + i;
    let mut triangles = Vec::with_capacity(2 * n * n);
    for j in 0..n {
        for i in 0..n {
            let (v00, v10, v01, v11) = (vid(i, j), vid(i + 1, j), vid(i, j + 1), vid(i + 1, j + 1));
            triangles.push([v00, v10, v11]);
            triangles.push([v00, v11, v01]);
        }
    }
    Ok(Mesh::from_triangles(vertices, triangles))
}

impl<T: Real> Mesh<T> {
    /// Builds edge connectivity for an arbitrary counter-clockwise triangulation.
    pub fn from_triangles(vertices: Vec<Point2<T>>, triangles: Vec<[usize; 3]>) -> Self {
        let mut edges: Vec<Edge<T>> = Vec::new();
        let mut element_edges = vec![[0usize; 3]; triangles.len()];
        let mut lookup: HashMap<(usize, usize), usize> = HashMap::new();
        let mut areas = Vec::with_capacity(triangles.len());
        let mut diameters = Vec::with_capacity(triangles.len());

        for (k, tri) in triangles.iter().enumerate() {
            let [p0, p1, p2] = tri.map(|v| vertices[v]);
            let cross = (p1[0] - p0[0]) * (p2[1] - p0[1]) - (p2[0] - p0[0]) * (p1[1] - p0[1]);
            areas.push(cross * T::half());

            let mut diameter = T::zero();
            for e in 0..3 {
                let a = tri[(e + 1) % 3];
                let b = tri[(e + 2) % 3];
                let key = (a.min(b), a.max(b));
                if let Some(&idx) = lookup.get(&key) {
                    edges[idx].neighbor = Some((k, e));
                    element_edges[k][e] = idx;
                    diameter = diameter.max(edges[idx].length);
                    continue;
                }
                let (pa, pb) = (vertices[a], vertices[b]);
                let (dx, dy) = (pb[0] - pa[0], pb[1] - pa[1]);
                let length = (dx * dx + dy * dy).sqrt();
                diameter = diameter.max(length);
                lookup.insert(key, edges.len());
                element_edges[k][e] = edges.len();
                edges.push(Edge {
                    vertices: [a, b],
                    owner: k,
                    owner_local: e,
                    neighbor: None,
                    normal: [dy / length, -dx / length],
                    length,
                });
            }
            diameters.push(diameter);
        }
        let h = diameters.iter().fold(T::zero(), |m, &d| m.max(d));
        Self {
            vertices,
            triangles,
            edges,
            element_edges,
            areas,
            diameters,
            h,
        }
    }

    pub fn vertices(&self) -> &[Point2<T>] {
        &self.vertices
    }

    pub fn triangles(&self) -> &[[usize; 3]] {
        &self.triangles
    }

    pub fn edges(&self) -> &[Edge<T>] {
        &self.edges
    }

    pub fn num_elements(&self) -> usize {
        self.triangles.len()
    }

    /// Global edge indices of an element, by local edge.
    pub fn element_edges(&self, element: usize) -> [usize; 3] {
        self.element_edges[element]
    }

    pub fn area(&self, element: usize) -> T {
        self.areas[element]
    }

    pub fn diameter(&self, element: usize) -> T {
        self.diameters[element]
    }

    /// Global mesh size, the largest element diameter.
    pub fn h(&self) -> T {
        self.h
    }

    pub fn corners(&self, element: usize) -> [Point2<T>; 3] {
        self.triangles[element].map(|v| self.vertices[v])
    }

    /// Outward unit normal of `element` on its local edge `local`.
    pub fn outward_normal(&self, element: usize, local: usize) -> Point2<T> {
        let edge = &self.edges[self.element_edges[element][local]];
        if edge.owner == element {
            edge.normal
        } else {
            [-edge.normal[0], -edge.normal[1]]
        }
    }

    pub fn num_interior_edges(&self) -> usize {
        self.edges.iter().filter(|e| !e.is_boundary()).count()
    }

    pub fn num_boundary_edges(&self) -> usize {
        self.edges.len() - self.num_interior_edges()
    }

    /// Debug dump: `v x y` per vertex, then `t i j k` per triangle.
    pub fn write_text<W: Write>(&self, mut out: W) -> Result<()> {
        for v in &self.vertices {
            writeln!(out, "v {} {}", v[0], v[1])?;
        }
        for t in &self.triangles {
            writeln!(out, "t {} {} {}", t[0], t[1], t[2])?;
        }
        Ok(())
    }
}

/// Inflow/outflow split of the mesh boundary and of every element boundary.
#[derive(Clone, Debug)]
pub struct EdgeClassification {
    /// Per edge: true for boundary edges on the inflow boundary.
    boundary_inflow: Vec<bool>,
    /// Per element and local edge: true when the edge belongs to the element's inflow part.
    element_inflow: Vec<[bool; 3]>,
}

impl EdgeClassification {
    pub fn is_inflow_boundary(&self, edge: usize) -> bool {
        self.boundary_inflow[edge]
    }

    pub fn is_element_inflow(&self, element: usize, local: usize) -> bool {
        self.element_inflow[element][local]
    }

    pub fn inflow_edges<'a, T: Real>(&'a self, mesh: &'a Mesh<T>) -> impl Iterator<Item = usize> + 'a {
        (0..mesh.edges().len()).filter(move |&e| mesh.edges()[e].is_boundary() && self.boundary_inflow[e])
    }

    pub fn outflow_edges<'a, T: Real>(&'a self, mesh: &'a Mesh<T>) -> impl Iterator<Item = usize> + 'a {
        (0..mesh.edges().len()).filter(move |&e| mesh.edges()[e].is_boundary() && !self.boundary_inflow[e])
    }
}

/// Classifies edges by the sign of `beta . n` at edge midpoints.
///
/// Strictly negative flux marks inflow; zero flux counts as outflow.
pub fn classify_edges<T: Real, F>(mesh: &Mesh<T>, beta: F) -> EdgeClassification
where
    F: Fn(Point2<T>) -> Point2<T>,
{
    let flux = |normal: Point2<T>, at: Point2<T>| {
        let b = beta(at);
        b[0] * normal[0] + b[1] * normal[1]
    };
    let boundary_inflow = mesh
        .edges()
        .iter()
        .map(|e| e.is_boundary() && flux(e.normal, e.midpoint(mesh)) < T::zero())
        .collect();
    let element_inflow = (0..mesh.num_elements())
        .map(|k| {
            let mut flags = [false; 3];
            for (local, flag) in flags.iter_mut().enumerate() {
                let edge = &mesh.edges()[mesh.element_edges(k)[local]];
                *flag = flux(mesh.outward_normal(k, local), edge.midpoint(mesh)) < T::zero();
            }
            flags
        })
        .collect();
    EdgeClassification {
        boundary_inflow,
        element_inflow,
    }
}
