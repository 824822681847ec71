//! Nodal Lagrange basis on the reference triangle with equally spaced nodes.
//!
//! The nodal functions are expressed through an orthogonal (Dubiner)
//! intermediate basis; the Vandermonde matrix of that basis at the nodes is
//! inverted once per degree.

use nalgebra::DMatrix;

use crate::error::{Error, Result};
use crate::quadrature::{face_quadrature, triangle_quadrature, QuadratureRule};

pub const MAX_DEGREE: usize = 10;

/// Reference triangle vertices. Local face `k` is opposite vertex `k` and runs
/// from vertex `k+1` to vertex `k+2` (indices mod 3).
pub const REF_VERTICES: [[f64; 2]; 3] = [[0.0, 0.0], [1.0, 0.0], [0.0, 1.0]];

/// Basis values and reference gradients tabulated at a set of points.
#[derive(Debug, Clone)]
pub struct Tabulation {
    /// `values[(q, i)]`: basis function `i` at point `q`.
    pub values: DMatrix<f64>,
    /// Reference derivatives with respect to `x` and `y`, same layout.
    pub dx: DMatrix<f64>,
    pub dy: DMatrix<f64>,
}

#[derive(Debug, Clone)]
pub struct NodalBasis {
    pub p: usize,
    pub node_coords: Vec<[f64; 2]>,
    /// Node indices on each local face, ordered along the face parameter.
    pub face_nodes: [Vec<usize>; 3],
    vinv: DMatrix<f64>,
    /// Volume rule for the bilinear forms (exact to 2p).
    pub volume_rule: QuadratureRule,
    pub volume: Tabulation,
    /// Volume rule for data integration and error norms (exact to 2p + 4).
    pub data_rule: QuadratureRule,
    pub data: Tabulation,
    /// Face rule (exact to 2p + 4), shared by all face terms.
    pub face_rule: QuadratureRule,
    pub faces: [Tabulation; 3],
    /// Reference mass matrix on the reference triangle.
    pub ref_mass: DMatrix<f64>,
}

impl NodalBasis {
    pub fn new(p: usize) -> Result<Self> {
        if p == 0 || p > MAX_DEGREE {
            return Err(Error::UnsupportedDegree(p));
        }
        let mut node_coords = Vec::with_capacity(dofs_per_element(p));
        for j in 0..=p {
            for i in 0..=(p - j) {
                node_coords.push([i as f64 / p as f64, j as f64 / p as f64]);
            }
        }
        let lattice = |i: usize, j: usize| -> usize {
            // Row j starts after rows 0..j, each of length p+1-row.
            (0..j).map(|r| p + 1 - r).sum::<usize>() + i
        };
        // Face 0: (1,0) -> (0,1), i + j = p. Face 1: (0,1) -> (0,0), i = 0.
        // Face 2: (0,0) -> (1,0), j = 0.
        let face0 = (0..=p).map(|k| lattice(p - k, k)).collect();
        let face1 = (0..=p).map(|k| lattice(0, p - k)).collect();
        let face2 = (0..=p).map(|k| lattice(k, 0)).collect();

        let vander = dubiner_values(p, &node_coords);
        let vinv = vander
            .clone()
            .lu()
            .try_inverse()
            .ok_or(Error::UnsupportedDegree(p))?;

        let volume_rule = triangle_quadrature(2 * p);
        let data_rule = triangle_quadrature(2 * p + 4);
        let face_rule = face_quadrature(2 * p + 4);

        let mut basis = NodalBasis {
            p,
            node_coords,
            face_nodes: [face0, face1, face2],
            vinv,
            volume_rule: volume_rule.clone(),
            volume: empty_tab(),
            data_rule: data_rule.clone(),
            data: empty_tab(),
            face_rule: face_rule.clone(),
            faces: [empty_tab(), empty_tab(), empty_tab()],
            ref_mass: DMatrix::zeros(0, 0),
        };
        basis.volume = basis.tabulate(&volume_rule.points);
        basis.data = basis.tabulate(&data_rule.points);
        for k in 0..3 {
            let pts: Vec<[f64; 2]> = face_rule
                .points
                .iter()
                .map(|t| face_point(k, t[0]))
                .collect();
            basis.faces[k] = basis.tabulate(&pts);
            // Off-face nodal functions vanish identically on the face; drop
            // the roundoff so face couplings are exactly sparse.
            for i in 0..basis.dofs() {
                if !basis.face_nodes[k].contains(&i) {
                    basis.faces[k].values.column_mut(i).fill(0.0);
                }
            }
        }
        let v = &basis.volume.values;
        let w = DMatrix::from_diagonal(&nalgebra::DVector::from_vec(volume_rule.weights.clone()));
        basis.ref_mass = v.transpose() * w * v;
        Ok(basis)
    }

    /// Dofs per element, `(p+1)(p+2)/2`.
    pub fn dofs(&self) -> usize {
        self.node_coords.len()
    }

    /// Dofs per face, `p+1`.
    pub fn face_dofs(&self) -> usize {
        self.p + 1
    }

    pub fn values_at(&self, points: &[[f64; 2]]) -> DMatrix<f64> {
        dubiner_values(self.p, points) * &self.vinv
    }

    pub fn tabulate(&self, points: &[[f64; 2]]) -> Tabulation {
        let (vals, dr, ds) = dubiner_all(self.p, points);
        // d/dx = 2 d/dr on the (0,1) reference triangle.
        Tabulation {
            values: vals * &self.vinv,
            dx: dr * &self.vinv * 2.0,
            dy: ds * &self.vinv * 2.0,
        }
    }

    /// Nodal interpolation of `f` given in reference coordinates.
    pub fn interpolate(&self, f: impl Fn(f64, f64) -> f64) -> Vec<f64> {
        self.node_coords.iter().map(|c| f(c[0], c[1])).collect()
    }

    /// Whether node `i` lies on local face `k`.
    pub fn is_face_node(&self, k: usize, i: usize) -> bool {
        self.face_nodes[k].contains(&i)
    }
}

pub fn dofs_per_element(p: usize) -> usize {
    (p + 1) * (p + 2) / 2
}

/// Reference coordinates of the point at parameter `t` on local face `k`.
pub fn face_point(k: usize, t: f64) -> [f64; 2] {
    let a = REF_VERTICES[(k + 1) % 3];
    let b = REF_VERTICES[(k + 2) % 3];
    [(1.0 - t) * a[0] + t * b[0], (1.0 - t) * a[1] + t * b[1]]
}

fn empty_tab() -> Tabulation {
    Tabulation {
        values: DMatrix::zeros(0, 0),
        dx: DMatrix::zeros(0, 0),
        dy: DMatrix::zeros(0, 0),
    }
}

/// Jacobi polynomial `P_n^{(alpha, 0)}(x)` for n = 0..=nmax, and derivatives.
fn jacobi(nmax: usize, alpha: f64, x: f64) -> (Vec<f64>, Vec<f64>) {
    let vals = jacobi_values(nmax, alpha, 0.0, x);
    let mut ders = vec![0.0; nmax + 1];
    if nmax >= 1 {
        let shifted = jacobi_values(nmax - 1, alpha + 1.0, 1.0, x);
        for n in 1..=nmax {
            ders[n] = 0.5 * (n as f64 + alpha + 1.0) * shifted[n - 1];
        }
    }
    (vals, ders)
}

fn jacobi_values(nmax: usize, a: f64, b: f64, x: f64) -> Vec<f64> {
    let mut p = vec![0.0; nmax + 1];
    p[0] = 1.0;
    if nmax == 0 {
        return p;
    }
    p[1] = 0.5 * ((a - b) + (a + b + 2.0) * x);
    for n in 2..=nmax {
        let nf = n as f64;
        let c = 2.0 * nf + a + b;
        let a1 = 2.0 * nf * (nf + a + b) * (c - 2.0);
        let a2 = (c - 1.0) * (c * (c - 2.0) * x + a * a - b * b);
        let a3 = 2.0 * (nf + a - 1.0) * (nf + b - 1.0) * c;
        p[n] = (a2 * p[n - 1] - a3 * p[n - 2]) / a1;
    }
    p
}

fn dubiner_index(p: usize) -> Vec<(usize, usize)> {
    let mut idx = Vec::with_capacity(dofs_per_element(p));
    for i in 0..=p {
        for j in 0..=(p - i) {
            idx.push((i, j));
        }
    }
    idx
}

fn collapsed(pt: &[f64; 2]) -> (f64, f64, f64) {
    let r = 2.0 * pt[0] - 1.0;
    let s = 2.0 * pt[1] - 1.0;
    let c = 0.5 * (1.0 - s);
    let a = if c.abs() < 1e-14 { -1.0 } else { (1.0 + r) / c - 1.0 };
    (a, s, c)
}

fn dubiner_values(p: usize, points: &[[f64; 2]]) -> DMatrix<f64> {
    dubiner_all(p, points).0
}

/// Dubiner basis values and derivatives with respect to the biunit
/// coordinates `r = 2x - 1`, `s = 2y - 1`.
fn dubiner_all(p: usize, points: &[[f64; 2]]) -> (DMatrix<f64>, DMatrix<f64>, DMatrix<f64>) {
    let idx = dubiner_index(p);
    let nq = points.len();
    let mut v = DMatrix::zeros(nq, idx.len());
    let mut dr = DMatrix::zeros(nq, idx.len());
    let mut ds = DMatrix::zeros(nq, idx.len());
    for (q, pt) in points.iter().enumerate() {
        let (a, b, c) = collapsed(pt);
        let (fa, dfa) = jacobi(p, 0.0, a);
        for (col, &(i, j)) in idx.iter().enumerate() {
            let (gb, dgb) = jacobi(j, 2.0 * i as f64 + 1.0, b);
            let (g, dg) = (gb[j], dgb[j]);
            let ci = c.powi(i as i32);
            let cim1 = if i == 0 { 0.0 } else { c.powi(i as i32 - 1) };
            v[(q, col)] = fa[i] * g * ci;
            dr[(q, col)] = dfa[i] * g * cim1;
            let mut dsv = dfa[i] * g * 0.5 * (1.0 + a) * cim1;
            dsv += fa[i] * (dg * ci - 0.5 * i as f64 * g * cim1);
            ds[(q, col)] = dsv;
        }
    }
    (v, dr, ds)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn dof_counts() {
        assert_eq!(NodalBasis::new(3).unwrap().dofs(), 10);
        assert_eq!(NodalBasis::new(4).unwrap().dofs(), 15);
        let b1 = NodalBasis::new(1).unwrap();
        assert_eq!(b1.dofs(), 3);
        let mut verts = b1.node_coords.clone();
        verts.sort_by(|a, b| a.partial_cmp(b).unwrap());
        assert_eq!(verts, vec![[0.0, 0.0], [0.0, 1.0], [1.0, 0.0]]);
        let b5 = NodalBasis::new(5).unwrap();
        assert_eq!((b5.dofs(), b5.face_dofs()), (21, 6));
    }

    #[test]
    fn rejects_degree_zero() {
        assert!(matches!(NodalBasis::new(0), Err(Error::UnsupportedDegree(0))));
        assert!(NodalBasis::new(11).is_err());
    }

    #[test]
    fn nodal_property() {
        for p in 1..=10 {
            let b = NodalBasis::new(p).unwrap();
            let v = b.values_at(&b.node_coords);
            for i in 0..b.dofs() {
                for j in 0..b.dofs() {
                    let want = if i == j { 1.0 } else { 0.0 };
                    assert!((v[(i, j)] - want).abs() < 1e-10, "p={p} ({i},{j})");
                }
            }
        }
    }

    #[test]
    fn reproduces_monomials() {
        let pts = [[0.1, 0.2], [0.7, 0.05], [0.33, 0.33], [0.0, 0.9]];
        for p in 1..=10 {
            let b = NodalBasis::new(p).unwrap();
            let tab = b.tabulate(&pts);
            for a in 0..=p as i32 {
                for c in 0..=(p as i32 - a) {
                    let coef = b.interpolate(|x, y| x.powi(a) * y.powi(c));
                    for (q, pt) in pts.iter().enumerate() {
                        let val: f64 = (0..b.dofs()).map(|i| tab.values[(q, i)] * coef[i]).sum();
                        let dx: f64 = (0..b.dofs()).map(|i| tab.dx[(q, i)] * coef[i]).sum();
                        let want = pt[0].powi(a) * pt[1].powi(c);
                        let want_dx = if a == 0 { 0.0 } else { a as f64 * pt[0].powi(a - 1) * pt[1].powi(c) };
                        assert!((val - want).abs() < 1e-10, "p={p} x^{a}y^{c}");
                        assert!((dx - want_dx).abs() < 1e-8, "p={p} d/dx x^{a}y^{c}");
                    }
                }
            }
        }
    }

    #[test]
    fn gradient_at_singular_vertex() {
        let b = NodalBasis::new(4).unwrap();
        let coef = b.interpolate(|x, y| x * y + y * y);
        let tab = b.tabulate(&[[0.0, 1.0]]);
        let dx: f64 = (0..b.dofs()).map(|i| tab.dx[(0, i)] * coef[i]).sum();
        let dy: f64 = (0..b.dofs()).map(|i| tab.dy[(0, i)] * coef[i]).sum();
        assert!((dx - 1.0).abs() < 1e-9);
        assert!((dy - 2.0).abs() < 1e-9);
    }

    #[test]
    fn face_nodes_lie_on_faces() {
        let b = NodalBasis::new(4).unwrap();
        for k in 0..3 {
            assert_eq!(b.face_nodes[k].len(), 5);
            for (m, &i) in b.face_nodes[k].iter().enumerate() {
                let want = face_point(k, m as f64 / 4.0);
                let got = b.node_coords[i];
                assert!((want[0] - got[0]).abs() < 1e-15 && (want[1] - got[1]).abs() < 1e-15);
            }
        }
    }

    #[test]
    fn face_trace_matches_face_node_restriction() {
        // Non-face basis functions vanish on a face; face ones interpolate along it.
        let b = NodalBasis::new(5).unwrap();
        for k in 0..3 {
            let tab = &b.faces[k];
            for i in 0..b.dofs() {
                if !b.is_face_node(k, i) {
                    for q in 0..b.face_rule.len() {
                        assert!(tab.values[(q, i)].abs() < 1e-12);
                    }
                }
            }
            for q in 0..b.face_rule.len() {
                let t = b.face_rule.points[q][0];
                // 1D Lagrange on p+1 equispaced points in t
                for (m, &i) in b.face_nodes[k].iter().enumerate() {
                    let mut l = 1.0;
                    for r in 0..=b.p {
                        if r != m {
                            l *= (t - r as f64 / b.p as f64) / ((m as f64 - r as f64) / b.p as f64);
                        }
                    }
                    assert!((tab.values[(q, i)] - l).abs() < 1e-12);
                }
            }
        }
    }

    #[test]
    fn reference_mass_is_spd() {
        for p in 1..=7 {
            let b = NodalBasis::new(p).unwrap();
            let m = &b.ref_mass;
            assert!((m - m.transpose()).amax() < 1e-14);
            let eig = nalgebra::SymmetricEigen::new(m.clone());
            assert!(eig.eigenvalues.min() > 0.0, "p={p}");
            assert!((m.sum() - 0.5).abs() < 1e-12);
        }
    }
}
