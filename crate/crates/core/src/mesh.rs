//! One-dimensional meshes: ordered partitions of an interval `(a, b)`.

use crate::error::{Error, Result};

/// Ordered partition `a = x_0 < x_1 < ... < x_N = b` of the computational
/// domain into `N` elements `I_n = (x_n, x_{n+1})`.
#[derive(Debug, Clone, PartialEq)]
pub struct Mesh {
    a: f64,
    b: f64,
    nodes: Vec<f64>,
    element_lengths: Vec<f64>,
}

impl Mesh {
    /// Builds a mesh from an explicit node list. Nodes must be strictly
    /// increasing; the first and last node define the domain endpoints.
    pub fn from_nodes(nodes: Vec<f64>) -> Result<Self> {
        if nodes.len() < 2 {
            return Err(Error::InvalidMesh(format!(
                "need at least 2 nodes, got {}",
                nodes.len()
            )));
        }
        for w in nodes.windows(2) {
            if !(w[1] > w[0]) {
                return Err(Error::InvalidMesh(format!(
                    "nodes must be strictly increasing ({} then {})",
                    w[0], w[1]
                )));
            }
        }
        let element_lengths: Vec<f64> = nodes.windows(2).map(|w| w[1] - w[0]).collect();
        Ok(Self {
            a: nodes[0],
            b: *nodes.last().unwrap(),
            nodes,
            element_lengths,
        })
    }

    pub fn a(&self) -> f64 {
        self.a
    }

    pub fn b(&self) -> f64 {
        self.b
    }

    /// Number of elements `N`.
    pub fn n_elements(&self) -> usize {
        self.element_lengths.len()
    }

    /// Node coordinates `x_0 .. x_N` (length `N + 1`).
    pub fn nodes(&self) -> &[f64] {
        &self.nodes
    }

    /// Element lengths `h_n = x_{n+1} - x_n`.
    pub fn element_lengths(&self) -> &[f64] {
        &self.element_lengths
    }

    pub fn element_length(&self, n: usize) -> f64 {
        self.element_lengths[n]
    }

    /// Left endpoint of element `n`.
    pub fn element_left(&self, n: usize) -> f64 {
        self.nodes[n]
    }

    /// Maps a reference coordinate `xi` in `[-1, 1]` to the physical
    /// coordinate inside element `n`.
    pub fn to_physical(&self, n: usize, xi: f64) -> f64 {
        self.nodes[n] + 0.5 * (xi + 1.0) * self.element_lengths[n]
    }

    /// Penalty length scale at node `n`: the minimum of the adjacent element
    /// lengths (the single adjacent length at the boundary). Coincides with
    /// the global `h` on uniform meshes.
    pub fn node_h(&self, n: usize) -> f64 {
        let nel = self.n_elements();
        if n == 0 {
            self.element_lengths[0]
        } else if n == nel {
            self.element_lengths[nel - 1]
        } else {
            self.element_lengths[n].min(self.element_lengths[n - 1])
        }
    }
}

/// Builds a uniform partition of `(a, b)` into `n_elements` elements.
pub fn build_uniform_mesh(a: f64, b: f64, n_elements: usize) -> Result<Mesh> {
    if !(b > a) {
        return Err(Error::InvalidMesh(format!(
            "domain endpoints must satisfy b > a (got a = {a}, b = {b})"
        )));
    }
    if n_elements == 0 {
        return Err(Error::InvalidMesh("n_elements must be positive".into()));
    }
    let h = (b - a) / n_elements as f64;
    let mut nodes: Vec<f64> = (0..=n_elements).map(|i| a + i as f64 * h).collect();
    // pin the endpoints exactly
    nodes[0] = a;
    nodes[n_elements] = b;
    Mesh::from_nodes(nodes)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    #[test]
    fn uniform_mesh_benchmark_domain() {
        // domain (-10, 10), 100 elements -> h = 0.2 everywhere
        let mesh = build_uniform_mesh(-10.0, 10.0, 100).unwrap();
        assert_eq!(mesh.n_elements(), 100);
        for &h in mesh.element_lengths() {
            assert_abs_diff_eq!(h, 0.2, epsilon = 1e-13);
        }
        assert_eq!(mesh.nodes()[0], -10.0);
        assert_eq!(mesh.nodes()[100], 10.0);
    }

    #[test]
    fn single_element() {
        let mesh = build_uniform_mesh(0.0, 1.0, 1).unwrap();
        assert_eq!(mesh.nodes(), &[0.0, 1.0]);
        assert_eq!(mesh.element_lengths(), &[1.0]);
    }

    #[test]
    fn three_elements_unit_interval() {
        let mesh = build_uniform_mesh(0.0, 1.0, 3).unwrap();
        let expected = [0.0, 1.0 / 3.0, 2.0 / 3.0, 1.0];
        for (x, e) in mesh.nodes().iter().zip(expected.iter()) {
            assert_abs_diff_eq!(x, e, epsilon = 1e-15);
        }
    }

    #[test]
    fn rejects_degenerate_input() {
        assert!(build_uniform_mesh(1.0, 1.0, 4).is_err());
        assert!(build_uniform_mesh(2.0, 1.0, 4).is_err());
        assert!(build_uniform_mesh(0.0, 1.0, 0).is_err());
        assert!(Mesh::from_nodes(vec![0.0, 0.5, 0.5, 1.0]).is_err());
    }

    #[test]
    fn lengths_sum_to_domain() {
        for n in [1usize, 7, 100, 233] {
            let mesh = build_uniform_mesh(-10.0, 10.0, n).unwrap();
            let sum: f64 = mesh.element_lengths().iter().sum();
            assert_abs_diff_eq!(sum, 20.0, epsilon = 1e-12 * 20.0);
        }
    }

    #[test]
    fn node_h_is_min_of_neighbors() {
        let mesh = Mesh::from_nodes(vec![0.0, 0.1, 0.4, 1.0]).unwrap();
        assert_abs_diff_eq!(mesh.node_h(0), 0.1);
        assert_abs_diff_eq!(mesh.node_h(1), 0.1);
        assert_abs_diff_eq!(mesh.node_h(2), 0.3, epsilon = 1e-15);
        assert_abs_diff_eq!(mesh.node_h(3), 0.6, epsilon = 1e-15);
    }
}
