use nalgebra::{DMatrix, DVector};

use crate::basis::{face_point, NodalBasis};
use crate::mesh::{ElementGeometry, Mesh};

/// Traces of the basis of one element on one of its faces, evaluated at the
/// face quadrature points in the plus-side ordering.
#[derive(Debug, Clone)]
pub struct Trace {
    pub values: DMatrix<f64>,
    /// Physical gradients.
    pub gx: DMatrix<f64>,
    pub gy: DMatrix<f64>,
}

impl Trace {
    /// `grad(phi) . n` at every point.
    pub fn normal_derivative(&self, n: [f64; 2]) -> DMatrix<f64> {
        &self.gx * n[0] + &self.gy * n[1]
    }
}

/// Physical quadrature on a face: points and weights (including the length).
#[derive(Debug, Clone)]
pub struct FaceQuad {
    pub points: Vec<[f64; 2]>,
    pub weights: Vec<f64>,
}

/// Mesh plus basis plus per-element geometry; everything the forms need.
#[derive(Debug, Clone)]
pub struct DgSpace<'a> {
    pub mesh: &'a Mesh,
    pub basis: &'a NodalBasis,
    geo: Vec<ElementGeometry>,
    ref_mass_inv: DMatrix<f64>,
}

impl<'a> DgSpace<'a> {
    pub fn new(mesh: &'a Mesh, basis: &'a NodalBasis) -> Self {
        let geo = (0..mesh.num_elements()).map(|e| mesh.geometry(e)).collect();
        let ref_mass_inv = basis
            .ref_mass
            .clone()
            .cholesky()
            .expect("reference mass matrix is SPD")
            .inverse();
        DgSpace { mesh, basis, geo, ref_mass_inv }
    }

    pub fn dofs(&self) -> usize {
        self.basis.dofs()
    }

    pub fn num_elements(&self) -> usize {
        self.mesh.num_elements()
    }

    pub fn geometry(&self, e: usize) -> &ElementGeometry {
        &self.geo[e]
    }

    pub fn mass(&self, e: usize) -> DMatrix<f64> {
        &self.basis.ref_mass * self.geo[e].det.abs()
    }

    pub fn mass_inv(&self, e: usize) -> DMatrix<f64> {
        &self.ref_mass_inv / self.geo[e].det.abs()
    }

    /// `int_K kappa phi_i phi_j` with the data rule.
    pub fn weighted_mass(&self, e: usize, kappa: &dyn Fn(f64, f64) -> f64) -> DMatrix<f64> {
        let geo = &self.geo[e];
        let rule = &self.basis.data_rule;
        let w: Vec<f64> = rule
            .points
            .iter()
            .zip(&rule.weights)
            .map(|(xi, w)| {
                let x = geo.map(*xi);
                w * geo.det.abs() * kappa(x[0], x[1])
            })
            .collect();
        weighted_product(&self.basis.data.values, &w, &self.basis.data.values)
    }

    /// `int_K kappa grad phi_i . grad phi_j`.
    pub fn stiffness(&self, e: usize, kappa: &dyn Fn(f64, f64) -> f64) -> DMatrix<f64> {
        let geo = &self.geo[e];
        let tab = &self.basis.volume;
        let rule = &self.basis.volume_rule;
        let (gx, gy) = physical_gradients(geo, &tab.dx, &tab.dy);
        let w: Vec<f64> = rule
            .points
            .iter()
            .zip(&rule.weights)
            .map(|(xi, w)| {
                let x = geo.map(*xi);
                w * geo.det.abs() * kappa(x[0], x[1])
            })
            .collect();
        weighted_product(&gx, &w, &gx) + weighted_product(&gy, &w, &gy)
    }

    /// Trace of element `e` on local face `k`. When `reversed` the points are
    /// listed in the opposite direction, which is how the minus side of an
    /// interior face sees the plus-side parameterization.
    pub fn trace(&self, e: usize, k: usize, reversed: bool) -> Trace {
        let tab = &self.basis.faces[k];
        let nq = tab.values.nrows();
        let (gx, gy) = physical_gradients(&self.geo[e], &tab.dx, &tab.dy);
        if !reversed {
            return Trace { values: tab.values.clone(), gx, gy };
        }
        let flip = |m: &DMatrix<f64>| DMatrix::from_fn(nq, m.ncols(), |q, i| m[(nq - 1 - q, i)]);
        Trace { values: flip(&tab.values), gx: flip(&gx), gy: flip(&gy) }
    }

    /// Quadrature on local face `k` of element `e` (in that element's direction).
    pub fn face_quad(&self, e: usize, k: usize) -> FaceQuad {
        let geo = &self.geo[e];
        let (len, _) = geo.face(k);
        let rule = &self.basis.face_rule;
        FaceQuad {
            points: rule.points.iter().map(|t| geo.map(face_point(k, t[0]))).collect(),
            weights: rule.weights.iter().map(|w| w * len).collect(),
        }
    }

    /// Evaluates the scalar coefficients `coef` of element `e` at reference points.
    pub fn eval(&self, coef: &[f64], values: &DMatrix<f64>) -> DVector<f64> {
        values * DVector::from_column_slice(coef)
    }
}

pub(crate) fn physical_gradients(
    geo: &ElementGeometry,
    dx: &DMatrix<f64>,
    dy: &DMatrix<f64>,
) -> (DMatrix<f64>, DMatrix<f64>) {
    let it = geo.inv_t;
    (dx * it[0][0] + dy * it[0][1], dx * it[1][0] + dy * it[1][1])
}

/// `a^T diag(w) b`.
pub(crate) fn weighted_product(a: &DMatrix<f64>, w: &[f64], b: &DMatrix<f64>) -> DMatrix<f64> {
    let mut wb = b.clone();
    for (q, wq) in w.iter().enumerate() {
        wb.row_mut(q).scale_mut(*wq);
    }
    a.transpose() * wb
}

/// `a^T diag(w) g` for point data `g`.
pub(crate) fn weighted_load(a: &DMatrix<f64>, w: &[f64], g: &[f64]) -> DVector<f64> {
    let wg = DVector::from_iterator(w.len(), w.iter().zip(g).map(|(w, g)| w * g));
    a.transpose() * wg
}
