//! Facewise and global lifting operators.
//!
//! For an interior face `e` and a vector function `phi` on `e`, `r^e(phi)` is
//! the element of the vector DG space with `int r^e(phi) . tau = -int_e phi . {tau}`
//! for every vector test function `tau`; `l^e(q)` uses `-int_e q [tau]` and
//! `r^e_D(q)` on a Dirichlet face uses `-int_e q tau . n`.

use nalgebra::{DMatrix, DVector};

use super::space::{weighted_load, weighted_product, DgSpace};
use super::{Problem, Scheme};
use crate::error::{Error, Result};
use crate::field::{Arity, DGField};
use crate::mesh::{BoundaryTag, FaceRef, SwitchAssignment};

/// A facewise lifting restricted to its single support element.
///
/// The lifted vector field on `support` has component coefficients
/// `-normal[c] * sum_t terms[t].1 * u(terms[t].0)`, where `u(elem)` are the
/// nodal values of the lifted scalar on that element.
#[derive(Debug, Clone)]
pub struct FaceLift {
    pub support: usize,
    pub normal: [f64; 2],
    pub terms: Vec<(usize, DMatrix<f64>)>,
}

impl FaceLift {
    /// `D(u)`: the shared coefficient vector of both components up to `-n_c`.
    pub fn apply(&self, u: &DGField) -> DVector<f64> {
        let s = u.dofs_per_element;
        let mut out = DVector::zeros(s);
        for (elem, mat) in &self.terms {
            out += mat * DVector::from_column_slice(u.element(*elem));
        }
        out
    }
}

/// Lift of the combined CDG/LDG face data `r^e([u]) + l^e(C12 . [u])` for an
/// interior face, scaled by `scale`; it lives on the plus side when
/// `support_plus` and on the minus side otherwise.
pub(crate) fn interior_lift(space: &DgSpace, id: usize, support_plus: bool, scale: f64) -> FaceLift {
    let f = &space.mesh.interior_faces[id];
    let quad = space.face_quad(f.elem_plus, f.local_face_plus);
    let tp = space.trace(f.elem_plus, f.local_face_plus, false);
    let tm = space.trace(f.elem_minus, f.local_face_minus, true);
    let n = f.unit_normal_plus;
    let (s, o, vs, vo, ns) = if support_plus {
        (f.elem_plus, f.elem_minus, &tp.values, &tm.values, n)
    } else {
        (f.elem_minus, f.elem_plus, &tm.values, &tp.values, [-n[0], -n[1]])
    };
    let minv = space.mass_inv(s);
    let b_self = &minv * weighted_product(vs, &quad.weights, vs) * scale;
    let b_other = &minv * weighted_product(vs, &quad.weights, vo) * (-scale);
    FaceLift { support: s, normal: ns, terms: vec![(s, b_self), (o, b_other)] }
}

/// `r^e_D(u)` for a Dirichlet boundary face.
pub(crate) fn boundary_lift(space: &DgSpace, id: usize, scale: f64) -> FaceLift {
    let f = &space.mesh.boundary_faces[id];
    let quad = space.face_quad(f.elem, f.local_face);
    let t = space.trace(f.elem, f.local_face, false);
    let b = space.mass_inv(f.elem) * weighted_product(&t.values, &quad.weights, &t.values) * scale;
    FaceLift { support: f.elem, normal: f.unit_outward_normal, terms: vec![(f.elem, b)] }
}

/// The CDG facewise lift of an interior face: supported on the switch-1 side.
pub(crate) fn cdg_interior_lift(space: &DgSpace, switches: &SwitchAssignment, id: usize) -> FaceLift {
    interior_lift(space, id, switches.s_plus[id] == 1, 1.0)
}

fn check_len(expected: usize, got: usize) -> Result<()> {
    if expected != got {
        return Err(Error::DimensionMismatch { expected, got });
    }
    Ok(())
}

fn add_to_component(field: &mut DGField, e: usize, c: usize, v: &DVector<f64>) {
    for (x, y) in field.component_mut(e, c).iter_mut().zip(v.iter()) {
        *x += y;
    }
}

/// Sides of an interior face: (element, local face, reversed trace, outward normal).
fn sides(space: &DgSpace, id: usize) -> [(usize, usize, bool, [f64; 2]); 2] {
    let f = &space.mesh.interior_faces[id];
    let n = f.unit_normal_plus;
    [
        (f.elem_plus, f.local_face_plus, false, n),
        (f.elem_minus, f.local_face_minus, true, [-n[0], -n[1]]),
    ]
}

/// Right-hand sides `-int_e phi . {tau}` of `r^e` per side and component.
fn r_face_loads(space: &DgSpace, id: usize, phi: &[[f64; 2]], out: &mut Vec<(usize, usize, DVector<f64>)>) {
    let f = &space.mesh.interior_faces[id];
    let quad = space.face_quad(f.elem_plus, f.local_face_plus);
    for (e, k, rev, _) in sides(space, id) {
        let t = space.trace(e, k, rev);
        for c in 0..2 {
            let data: Vec<f64> = phi.iter().map(|v| -0.5 * v[c]).collect();
            out.push((e, c, weighted_load(&t.values, &quad.weights, &data)));
        }
    }
}

fn l_face_loads(space: &DgSpace, id: usize, q: &[f64], out: &mut Vec<(usize, usize, DVector<f64>)>) {
    let f = &space.mesh.interior_faces[id];
    let quad = space.face_quad(f.elem_plus, f.local_face_plus);
    for (e, k, rev, n) in sides(space, id) {
        let t = space.trace(e, k, rev);
        for c in 0..2 {
            let data: Vec<f64> = q.iter().map(|v| -v * n[c]).collect();
            out.push((e, c, weighted_load(&t.values, &quad.weights, &data)));
        }
    }
}

fn rd_face_loads(space: &DgSpace, id: usize, q: &[f64], out: &mut Vec<(usize, usize, DVector<f64>)>) {
    let f = &space.mesh.boundary_faces[id];
    if f.tag == BoundaryTag::Neumann {
        return;
    }
    let quad = space.face_quad(f.elem, f.local_face);
    let t = space.trace(f.elem, f.local_face, false);
    let n = f.unit_outward_normal;
    for c in 0..2 {
        let data: Vec<f64> = q.iter().map(|v| -v * n[c]).collect();
        out.push((f.elem, c, weighted_load(&t.values, &quad.weights, &data)));
    }
}

fn solve_loads(space: &DgSpace, loads: Vec<(usize, usize, DVector<f64>)>) -> DGField {
    let mut field = DGField::zeros(Arity::Vector, space.num_elements(), space.dofs());
    let mut acc: Vec<Option<[DVector<f64>; 2]>> = vec![None; space.num_elements()];
    for (e, c, v) in loads {
        let slot = acc[e].get_or_insert_with(|| [DVector::zeros(space.dofs()), DVector::zeros(space.dofs())]);
        slot[c] += v;
    }
    for (e, slot) in acc.into_iter().enumerate() {
        if let Some(rhs) = slot {
            let minv = space.mass_inv(e);
            for (c, r) in rhs.iter().enumerate() {
                add_to_component(&mut field, e, c, &(&minv * r));
            }
        }
    }
    field
}

/// `r^e(phi)`; `phi` is given at the face quadrature points (plus-side order).
pub fn lift_r_face(space: &DgSpace, face: FaceRef, phi: &[[f64; 2]]) -> Result<DGField> {
    let id = match face {
        FaceRef::Interior(id) => id,
        FaceRef::Boundary(id) => return Err(Error::NotInteriorFace(id)),
    };
    check_len(space.basis.face_rule.len(), phi.len())?;
    let mut loads = Vec::new();
    r_face_loads(space, id, phi, &mut loads);
    Ok(solve_loads(space, loads))
}

/// `l^e(q)` for an interior face.
pub fn lift_l_face(space: &DgSpace, face: FaceRef, q: &[f64]) -> Result<DGField> {
    let id = match face {
        FaceRef::Interior(id) => id,
        FaceRef::Boundary(id) => return Err(Error::NotInteriorFace(id)),
    };
    check_len(space.basis.face_rule.len(), q.len())?;
    let mut loads = Vec::new();
    l_face_loads(space, id, q, &mut loads);
    Ok(solve_loads(space, loads))
}

/// `r^e_D(q)` for a boundary face; a Neumann face yields the zero field.
pub fn lift_rd_face(space: &DgSpace, face: FaceRef, q: &[f64]) -> Result<DGField> {
    let id = match face {
        FaceRef::Boundary(id) => id,
        FaceRef::Interior(id) => return Err(Error::NotDirichletFace(id)),
    };
    check_len(space.basis.face_rule.len(), q.len())?;
    let mut loads = Vec::new();
    rd_face_loads(space, id, q, &mut loads);
    Ok(solve_loads(space, loads))
}

/// Global `r(phi)`, one data vector per interior face.
pub fn lift_r_global(space: &DgSpace, phi: &[Vec<[f64; 2]>]) -> Result<DGField> {
    check_len(space.mesh.interior_faces.len(), phi.len())?;
    let mut loads = Vec::new();
    for (id, data) in phi.iter().enumerate() {
        check_len(space.basis.face_rule.len(), data.len())?;
        r_face_loads(space, id, data, &mut loads);
    }
    Ok(solve_loads(space, loads))
}

/// Global `l(q)`, one data vector per interior face.
pub fn lift_l_global(space: &DgSpace, q: &[Vec<f64>]) -> Result<DGField> {
    check_len(space.mesh.interior_faces.len(), q.len())?;
    let mut loads = Vec::new();
    for (id, data) in q.iter().enumerate() {
        check_len(space.basis.face_rule.len(), data.len())?;
        l_face_loads(space, id, data, &mut loads);
    }
    Ok(solve_loads(space, loads))
}

/// Global `r_D(q)`, one data vector per boundary face (Neumann entries ignored).
pub fn lift_rd_global(space: &DgSpace, q: &[Vec<f64>]) -> Result<DGField> {
    check_len(space.mesh.boundary_faces.len(), q.len())?;
    let mut loads = Vec::new();
    for (id, data) in q.iter().enumerate() {
        check_len(space.basis.face_rule.len(), data.len())?;
        rd_face_loads(space, id, data, &mut loads);
    }
    Ok(solve_loads(space, loads))
}

/// Jump `[u] = (u+ - u-) n+` at the quadrature points of every interior face.
pub fn jump_data(space: &DgSpace, u: &DGField) -> Vec<Vec<[f64; 2]>> {
    space
        .mesh
        .interior_faces
        .iter()
        .map(|f| {
            let up = space.eval(u.element(f.elem_plus), &space.trace(f.elem_plus, f.local_face_plus, false).values);
            let um = space.eval(u.element(f.elem_minus), &space.trace(f.elem_minus, f.local_face_minus, true).values);
            let n = f.unit_normal_plus;
            up.iter().zip(um.iter()).map(|(a, b)| [(a - b) * n[0], (a - b) * n[1]]).collect()
        })
        .collect()
}

/// `C12 . [u]` at the quadrature points of every interior face.
pub fn c12_jump_data(space: &DgSpace, switches: &SwitchAssignment, u: &DGField) -> Vec<Vec<f64>> {
    jump_data(space, u)
        .into_iter()
        .enumerate()
        .map(|(id, jumps)| {
            let c12 = switches
                .c12(space.mesh, FaceRef::Interior(id))
                .expect("interior face");
            jumps.iter().map(|j| c12[0] * j[0] + c12[1] * j[1]).collect()
        })
        .collect()
}

/// `g_D - u` on Dirichlet faces (zeros on Neumann faces).
pub fn dirichlet_defect_data(space: &DgSpace, u: &DGField, g: &dyn Fn(f64, f64) -> f64) -> Vec<Vec<f64>> {
    space
        .mesh
        .boundary_faces
        .iter()
        .map(|f| {
            let nq = space.basis.face_rule.len();
            if f.tag == BoundaryTag::Neumann {
                return vec![0.0; nq];
            }
            let quad = space.face_quad(f.elem, f.local_face);
            let uh = space.eval(u.element(f.elem), &space.trace(f.elem, f.local_face, false).values);
            quad.points.iter().zip(uh.iter()).map(|(x, v)| g(x[0], x[1]) - v).collect()
        })
        .collect()
}

/// Flux `sigma_h = kappa grad_h u_h + sigma_bar_h` with
/// `sigma_bar_h = kappa r([u]) + kappa l(C12 . [u]) - kappa r_D(g_D - u)`.
/// BR2 has no `C12` term. The product with `kappa` is taken nodally.
pub fn reconstruct_flux(
    space: &DgSpace,
    switches: &SwitchAssignment,
    u: &DGField,
    problem: &Problem,
    scheme: Scheme,
) -> Result<DGField> {
    check_len(space.num_elements() * space.dofs(), u.coeffs.len())?;
    let mut bar = lift_r_global(space, &jump_data(space, u))?;
    if scheme != Scheme::Br2 {
        bar.axpy(1.0, &lift_l_global(space, &c12_jump_data(space, switches, u))?);
    }
    let defect = dirichlet_defect_data(space, u, problem.dirichlet.as_ref());
    bar.axpy(-1.0, &lift_rd_global(space, &defect)?);

    let basis = space.basis;
    let at_nodes = basis.tabulate(&basis.node_coords);
    let mut sigma = DGField::zeros(Arity::Vector, space.num_elements(), space.dofs());
    for e in 0..space.num_elements() {
        let geo = space.geometry(e);
        let ue = DVector::from_column_slice(u.element(e));
        let (gx, gy) = super::space::physical_gradients(geo, &at_nodes.dx, &at_nodes.dy);
        let grads = [&gx * &ue, &gy * &ue];
        for c in 0..2 {
            let vals: Vec<f64> = (0..space.dofs())
                .map(|i| {
                    let x = geo.map(basis.node_coords[i]);
                    (problem.kappa)(x[0], x[1]) * (grads[c][i] + bar.component(e, c)[i])
                })
                .collect();
            sigma.component_mut(e, c).copy_from_slice(&vals);
        }
    }
    Ok(sigma)
}
