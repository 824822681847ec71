use serde::{Deserialize, Serialize};

use crate::basis::NodalBasis;
use crate::mesh::Mesh;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Arity {
    Scalar,
    Vector,
}

impl Arity {
    pub fn components(self) -> usize {
        match self {
            Arity::Scalar => 1,
            Arity::Vector => 2,
        }
    }
}

/// Piecewise polynomial field in the nodal basis.
///
/// Scalar fields store `S` coefficients per element. Vector fields store the
/// x-component coefficients followed by the y-component ones, `2S` per element.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DGField {
    pub arity: Arity,
    pub dofs_per_element: usize,
    pub coeffs: Vec<f64>,
}

impl DGField {
    pub fn zeros(arity: Arity, num_elements: usize, dofs_per_element: usize) -> Self {
        DGField {
            arity,
            dofs_per_element,
            coeffs: vec![0.0; num_elements * dofs_per_element * arity.components()],
        }
    }

    pub fn scalar(dofs_per_element: usize, coeffs: Vec<f64>) -> Self {
        DGField { arity: Arity::Scalar, dofs_per_element, coeffs }
    }

    pub fn num_elements(&self) -> usize {
        self.coeffs.len() / (self.dofs_per_element * self.arity.components())
    }

    fn stride(&self) -> usize {
        self.dofs_per_element * self.arity.components()
    }

    pub fn element(&self, e: usize) -> &[f64] {
        let st = self.stride();
        &self.coeffs[e * st..(e + 1) * st]
    }

    pub fn element_mut(&mut self, e: usize) -> &mut [f64] {
        let st = self.stride();
        &mut self.coeffs[e * st..(e + 1) * st]
    }

    /// Coefficients of component `c` on element `e`.
    pub fn component(&self, e: usize, c: usize) -> &[f64] {
        let s = self.dofs_per_element;
        &self.element(e)[c * s..(c + 1) * s]
    }

    pub fn component_mut(&mut self, e: usize, c: usize) -> &mut [f64] {
        let s = self.dofs_per_element;
        &mut self.element_mut(e)[c * s..(c + 1) * s]
    }

    /// Nodal interpolation of a scalar function of physical coordinates.
    pub fn interpolate(mesh: &Mesh, basis: &NodalBasis, f: impl Fn(f64, f64) -> f64) -> Self {
        let s = basis.dofs();
        let mut coeffs = Vec::with_capacity(mesh.num_elements() * s);
        for e in 0..mesh.num_elements() {
            let geo = mesh.geometry(e);
            for xi in &basis.node_coords {
                let x = geo.map(*xi);
                coeffs.push(f(x[0], x[1]));
            }
        }
        DGField::scalar(s, coeffs)
    }

    /// Elements in which the field has a coefficient with magnitude above `tol`.
    pub fn support(&self, tol: f64) -> Vec<usize> {
        (0..self.num_elements())
            .filter(|&e| self.element(e).iter().any(|c| c.abs() > tol))
            .collect()
    }

    pub fn max_abs(&self) -> f64 {
        self.coeffs.iter().fold(0.0, |m, c| m.max(c.abs()))
    }

    pub fn axpy(&mut self, a: f64, other: &DGField) {
        assert_eq!(self.coeffs.len(), other.coeffs.len());
        for (x, y) in self.coeffs.iter_mut().zip(&other.coeffs) {
            *x += a * y;
        }
    }
}
