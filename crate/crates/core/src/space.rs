//! The broken polynomial space `D_k` and coefficient vectors.

use std::sync::Arc;

use crate::basis::{element_trace, eval_basis, BasisEval, Side, MAX_DEGREE};
use crate::error::{Error, Result};
use crate::mesh::Mesh;

struct SpaceData {
    mesh: Mesh,
    degree: usize,
    left_trace: crate::basis::ElementTrace,
    right_trace: crate::basis::ElementTrace,
}

/// Discrete space of piecewise polynomials of degree `k` on a mesh, with no
/// continuity across element boundaries. Cheap to clone; immutable after
/// construction.
#[derive(Clone)]
pub struct DgSpace {
    data: Arc<SpaceData>,
}

impl std::fmt::Debug for DgSpace {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("DgSpace")
            .field("n_elements", &self.n_elements())
            .field("degree", &self.degree())
            .finish()
    }
}

impl DgSpace {
    pub fn new(mesh: Mesh, degree: usize) -> Result<Self> {
        if degree > MAX_DEGREE {
            return Err(Error::DegreeTooLarge {
                requested: degree,
                cap: MAX_DEGREE,
            });
        }
        let left_trace = element_trace(degree, Side::Left)?;
        let right_trace = element_trace(degree, Side::Right)?;
        Ok(Self {
            data: Arc::new(SpaceData {
                mesh,
                degree,
                left_trace,
                right_trace,
            }),
        })
    }

    pub fn mesh(&self) -> &Mesh {
        &self.data.mesh
    }

    pub fn degree(&self) -> usize {
        self.data.degree
    }

    /// Local modes per element, `k + 1`.
    pub fn n_local(&self) -> usize {
        self.data.degree + 1
    }

    pub fn n_elements(&self) -> usize {
        self.data.mesh.n_elements()
    }

    /// Global coefficient count, `N * (k + 1)`.
    pub fn n_dofs(&self) -> usize {
        self.n_elements() * self.n_local()
    }

    /// First global coefficient index of element `n`.
    pub fn element_offset(&self, n: usize) -> usize {
        n * self.n_local()
    }

    /// Endpoint trace table of the reference basis (no length scaling).
    pub fn trace(&self, side: Side) -> &crate::basis::ElementTrace {
        match side {
            Side::Left => &self.data.left_trace,
            Side::Right => &self.data.right_trace,
        }
    }

    /// Two spaces are compatible when they share the same mesh and degree.
    pub fn same_layout(&self, other: &DgSpace) -> bool {
        Arc::ptr_eq(&self.data, &other.data)
            || (self.data.degree == other.data.degree && self.data.mesh == other.data.mesh)
    }

    pub fn zero_vector(&self) -> DgVector {
        DgVector {
            space: self.clone(),
            coeffs: vec![0.0; self.n_dofs()],
        }
    }
}

/// Coefficient vector of a broken-polynomial function `u_h`. Within element
/// `n` the function is `sum_j coeffs[n*(k+1) + j] * P_j(xi)`.
#[derive(Debug, Clone)]
pub struct DgVector {
    space: DgSpace,
    coeffs: Vec<f64>,
}

impl DgVector {
    pub fn new(space: DgSpace, coeffs: Vec<f64>) -> Result<Self> {
        if coeffs.len() != space.n_dofs() {
            return Err(Error::DimensionMismatch {
                expected: space.n_dofs(),
                got: coeffs.len(),
            });
        }
        Ok(Self { space, coeffs })
    }

    pub fn space(&self) -> &DgSpace {
        &self.space
    }

    pub fn coeffs(&self) -> &[f64] {
        &self.coeffs
    }

    pub fn coeffs_mut(&mut self) -> &mut [f64] {
        &mut self.coeffs
    }

    pub fn into_coeffs(self) -> Vec<f64> {
        self.coeffs
    }

    /// Local coefficients of element `n`.
    pub fn element_coeffs(&self, n: usize) -> &[f64] {
        let k1 = self.space.n_local();
        &self.coeffs[n * k1..(n + 1) * k1]
    }

    /// Evaluates the `order`-th physical derivative at reference point `xi`
    /// inside element `n` using tabulated basis values.
    pub fn eval_in_element(&self, n: usize, basis: &BasisEval, point: usize, order: usize) -> f64 {
        let scale = (2.0 / self.space.mesh().element_length(n)).powi(order as i32);
        let table = basis.table(order);
        self.element_coeffs(n)
            .iter()
            .enumerate()
            .map(|(j, &c)| c * table[j][point])
            .sum::<f64>()
            * scale
    }

    /// One-sided trace of the `order`-th physical derivative of `u_h` at an
    /// endpoint of element `n`.
    pub fn element_trace_value(&self, n: usize, side: Side, order: usize) -> f64 {
        let scale = (2.0 / self.space.mesh().element_length(n)).powi(order as i32);
        let table = self.space.trace(side).table(order);
        self.element_coeffs(n)
            .iter()
            .zip(table)
            .map(|(&c, &t)| c * t)
            .sum::<f64>()
            * scale
    }

    /// Samples `u_h` at `points_per_element` uniformly spaced reference
    /// points (endpoints included) in every element, returning `(x, value)`
    /// pairs in ascending `x` order.
    pub fn sample_uniform(&self, points_per_element: usize) -> Vec<(f64, f64)> {
        let ppe = points_per_element.max(2);
        let pts: Vec<f64> = (0..ppe)
            .map(|i| -1.0 + 2.0 * i as f64 / (ppe - 1) as f64)
            .collect();
        let basis = eval_basis(self.space.degree(), &pts).expect("degree within cap");
        let mut out = Vec::with_capacity(self.space.n_elements() * ppe);
        for el in 0..self.space.n_elements() {
            for (p, &xi) in pts.iter().enumerate() {
                let x = self.space.mesh().to_physical(el, xi);
                out.push((x, self.eval_in_element(el, &basis, p, 0)));
            }
        }
        out
    }

    /// Evaluates `u_h` at a physical point `x` (clamped into the domain);
    /// points on interior nodes use the element to the right.
    pub fn eval_at(&self, x: f64) -> f64 {
        let mesh = self.space.mesh();
        let nodes = mesh.nodes();
        let nel = mesh.n_elements();
        let n = match nodes[1..nel].binary_search_by(|v| v.partial_cmp(&x).unwrap()) {
            Ok(i) => i + 1,
            Err(i) => i,
        };
        let xi = 2.0 * (x - mesh.element_left(n)) / mesh.element_length(n) - 1.0;
        let xi = xi.clamp(-1.0, 1.0);
        let basis = eval_basis(self.space.degree(), &[xi]).expect("degree within cap");
        self.eval_in_element(n, &basis, 0, 0)
    }
}
