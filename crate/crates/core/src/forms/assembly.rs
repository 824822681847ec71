//! Primal-form assembly.
//!
//! Volume stiffness is assembled element by element, then every face adds its
//! consistency, switch, penalty and lifting-product terms. Blocks are keyed by
//! (test element, trial element) and merged in a fixed order, so the result is
//! bit-reproducible.

use std::collections::BTreeMap;

use nalgebra::{DMatrix, DVector};

use super::lifting::{boundary_lift, cdg_interior_lift, interior_lift, FaceLift};
use super::space::{weighted_load, weighted_product, DgSpace};
use super::{Problem, Scheme, SchemeConfig};
use crate::basis::NodalBasis;
use crate::error::Result;
use crate::linalg::SystemMatrix;
use crate::mesh::{BoundaryTag, FaceRef, Mesh, SwitchAssignment};

#[derive(Debug, Clone)]
pub struct Assembled {
    pub matrix: SystemMatrix,
    pub rhs: Vec<f64>,
    /// Configuration options that were ignored by the chosen scheme.
    pub warnings: Vec<String>,
}

#[derive(Default)]
struct Blocks {
    map: BTreeMap<(usize, usize), DMatrix<f64>>,
}

impl Blocks {
    fn add(&mut self, row: usize, col: usize, block: DMatrix<f64>) {
        match self.map.get_mut(&(row, col)) {
            Some(b) => *b += block,
            None => {
                self.map.insert((row, col), block);
            }
        }
    }
}

struct Rhs {
    s: usize,
    data: Vec<f64>,
}

impl Rhs {
    fn add(&mut self, e: usize, v: &DVector<f64>) {
        for (x, y) in self.data[e * self.s..(e + 1) * self.s].iter_mut().zip(v.iter()) {
            *x += y;
        }
    }
}

/// Assembles `B_h(u, v)` and `L_h(v)` for the configured scheme.
pub fn assemble(
    mesh: &Mesh,
    basis: &NodalBasis,
    switches: &SwitchAssignment,
    problem: &Problem,
    config: &SchemeConfig,
) -> Result<Assembled> {
    let space = DgSpace::new(mesh, basis);
    let s = space.dofs();
    let t = space.num_elements();
    let kappa = problem.kappa.as_ref();
    let mut blocks = Blocks::default();
    let mut rhs = Rhs { s, data: vec![0.0; t * s] };

    let kmass: Vec<DMatrix<f64>> = (0..t).map(|e| space.weighted_mass(e, kappa)).collect();

    for e in 0..t {
        blocks.add(e, e, space.stiffness(e, kappa));
        rhs.add(e, &source_load(&space, e, problem));
    }

    for id in 0..mesh.interior_faces.len() {
        match config.scheme {
            Scheme::Cdg | Scheme::Ldg => interior_flux_terms(&space, switches, id, kappa, config, &mut blocks),
            Scheme::Br2 => br2_interior_terms(&space, id, kappa, config.eta, &kmass, &mut blocks),
        }
    }

    for (id, f) in mesh.boundary_faces.iter().enumerate() {
        let quad = space.face_quad(f.elem, f.local_face);
        let tr = space.trace(f.elem, f.local_face, false);
        match f.tag {
            BoundaryTag::Neumann => {
                let g: Vec<f64> = quad
                    .points
                    .iter()
                    .map(|x| (problem.neumann)(x[0], x[1], f.unit_outward_normal))
                    .collect();
                rhs.add(f.elem, &weighted_load(&tr.values, &quad.weights, &g));
            }
            BoundaryTag::Dirichlet => {
                let kw: Vec<f64> = quad
                    .points
                    .iter()
                    .zip(&quad.weights)
                    .map(|(x, w)| w * kappa(x[0], x[1]))
                    .collect();
                let dn = tr.normal_derivative(f.unit_outward_normal);
                let v = &tr.values;
                let cons = weighted_product(&dn, &kw, v);
                let mut a = -(&cons + cons.transpose());
                let g: Vec<f64> = quad.points.iter().map(|x| (problem.dirichlet)(x[0], x[1])).collect();
                let mut b = -weighted_load(&dn, &kw, &g);
                if config.scheme != Scheme::Br2 && config.c11_boundary != 0.0 {
                    a += weighted_product(v, &quad.weights, v) * config.c11_boundary;
                    b += weighted_load(v, &quad.weights, &g) * config.c11_boundary;
                }
                blocks.add(f.elem, f.elem, a);
                rhs.add(f.elem, &b);
                if config.scheme != Scheme::Ldg {
                    // Facewise boundary lifting product; LDG handles it per element below.
                    let scale = if config.scheme == Scheme::Br2 { config.eta } else { 1.0 };
                    let lift = boundary_lift(&space, id, 1.0);
                    let bmat = &lift.terms[0].1;
                    blocks.add(f.elem, f.elem, bmat.transpose() * &kmass[f.elem] * bmat * scale);
                    let dg = space.mass_inv(f.elem) * weighted_load(v, &quad.weights, &g);
                    rhs.add(f.elem, &(bmat.transpose() * &kmass[f.elem] * dg * scale));
                }
            }
        }
    }

    match config.scheme {
        Scheme::Cdg => {
            for id in 0..mesh.interior_faces.len() {
                let lift = cdg_interior_lift(&space, switches, id);
                add_lift_product(&mut blocks, &lift, &lift, &kmass[lift.support]);
            }
        }
        Scheme::Ldg => {
            let lifts = element_lifts(&space, switches);
            for (e, list) in lifts.iter().enumerate() {
                for a in list {
                    for b in list {
                        add_lift_product(&mut blocks, a, b, &kmass[e]);
                    }
                }
                ldg_boundary_data(&space, problem, list, &kmass[e], &mut rhs);
            }
        }
        Scheme::Br2 => {}
    }

    Ok(Assembled {
        matrix: SystemMatrix::from_block_map(t, s, blocks.map),
        rhs: rhs.data,
        warnings: config.warnings(),
    })
}

/// Cross-face lifting products `sum_K sum_{e != f} int_K kappa L^e(u) . L^f(v)`
/// that separate the LDG matrix from the CDG one.
pub fn ldg_cross_terms(
    mesh: &Mesh,
    basis: &NodalBasis,
    switches: &SwitchAssignment,
    problem: &Problem,
) -> SystemMatrix {
    let space = DgSpace::new(mesh, basis);
    let mut blocks = Blocks::default();
    let lifts = element_lifts(&space, switches);
    for (e, list) in lifts.iter().enumerate() {
        let km = space.weighted_mass(e, problem.kappa.as_ref());
        for (i, a) in list.iter().enumerate() {
            for (j, b) in list.iter().enumerate() {
                if i != j {
                    add_lift_product(&mut blocks, a, b, &km);
                }
            }
        }
    }
    SystemMatrix::from_block_map(space.num_elements(), space.dofs(), blocks.map)
}

/// All facewise lifts landing on each element: interior faces whose switch-1
/// side is the element, and the element's Dirichlet faces.
fn element_lifts(space: &DgSpace, switches: &SwitchAssignment) -> Vec<Vec<FaceLift>> {
    let mesh = space.mesh;
    let mut out: Vec<Vec<FaceLift>> = vec![Vec::new(); mesh.num_elements()];
    for e in 0..mesh.num_elements() {
        // A face shared by an element with itself is listed twice; lift it once.
        let mut seen = Vec::new();
        for face in mesh.element_faces(e) {
            match face {
                FaceRef::Interior(id) => {
                    if switches.lifting_support(mesh, id) == e && !seen.contains(&id) {
                        seen.push(id);
                        out[e].push(cdg_interior_lift(space, switches, id));
                    }
                }
                FaceRef::Boundary(id) => {
                    if mesh.boundary_faces[id].tag == BoundaryTag::Dirichlet {
                        out[e].push(boundary_lift(space, id, 1.0));
                    }
                }
            }
        }
    }
    out
}

/// `int_K kappa L_b(v) . L_a(u)` with `L = -n D`: rows from `b`, columns from `a`.
fn add_lift_product(blocks: &mut Blocks, a: &FaceLift, b: &FaceLift, kmass: &DMatrix<f64>) {
    let nn = a.normal[0] * b.normal[0] + a.normal[1] * b.normal[1];
    for (eb, mb) in &b.terms {
        let left = mb.transpose() * kmass * nn;
        for (ea, ma) in &a.terms {
            blocks.add(*eb, *ea, &left * ma);
        }
    }
}

/// LDG right-hand side lifting data: `int_K kappa r_D(g_D) . L(v)`.
fn ldg_boundary_data(
    space: &DgSpace,
    problem: &Problem,
    list: &[FaceLift],
    kmass: &DMatrix<f64>,
    rhs: &mut Rhs,
) {
    let mesh = space.mesh;
    let Some(e) = list.first().map(|l| l.support) else { return };
    for face in mesh.element_faces(e) {
        let FaceRef::Boundary(id) = face else { continue };
        let f = &mesh.boundary_faces[id];
        if f.tag != BoundaryTag::Dirichlet {
            continue;
        }
        let quad = space.face_quad(f.elem, f.local_face);
        let tr = space.trace(f.elem, f.local_face, false);
        let g: Vec<f64> = quad.points.iter().map(|x| (problem.dirichlet)(x[0], x[1])).collect();
        let dg = space.mass_inv(e) * weighted_load(&tr.values, &quad.weights, &g);
        let n = f.unit_outward_normal;
        for l in list {
            let nn = n[0] * l.normal[0] + n[1] * l.normal[1];
            for (elem, mat) in &l.terms {
                rhs.add(*elem, &(mat.transpose() * kmass * &dg * nn));
            }
        }
    }
}

fn source_load(space: &DgSpace, e: usize, problem: &Problem) -> DVector<f64> {
    let geo = space.geometry(e);
    let rule = &space.basis.data_rule;
    let w: Vec<f64> = rule.weights.iter().map(|w| w * geo.det.abs()).collect();
    let f: Vec<f64> = rule
        .points
        .iter()
        .map(|xi| {
            let x = geo.map(*xi);
            (problem.source)(x[0], x[1])
        })
        .collect();
    weighted_load(&space.basis.data.values, &w, &f)
}

/// Consistency, switch and C11 terms of an interior face for CDG and LDG.
///
/// With `s` the switch-1 side and `o` the other, the consistency and switch
/// terms combine to `-int_e (u_s - u_o) kappa grad v_s . n_s
/// - int_e kappa grad u_s . n_s (v_s - v_o)`.
fn interior_flux_terms(
    space: &DgSpace,
    switches: &SwitchAssignment,
    id: usize,
    kappa: &dyn Fn(f64, f64) -> f64,
    config: &SchemeConfig,
    blocks: &mut Blocks,
) {
    let f = &space.mesh.interior_faces[id];
    let quad = space.face_quad(f.elem_plus, f.local_face_plus);
    let tp = space.trace(f.elem_plus, f.local_face_plus, false);
    let tm = space.trace(f.elem_minus, f.local_face_minus, true);
    let n = f.unit_normal_plus;
    let kw: Vec<f64> = quad.points.iter().zip(&quad.weights).map(|(x, w)| w * kappa(x[0], x[1])).collect();

    let plus_is_s = switches.s_plus[id] == 1;
    let (s, o, ts, to, ns) = if plus_is_s {
        (f.elem_plus, f.elem_minus, &tp, &tm, n)
    } else {
        (f.elem_minus, f.elem_plus, &tm, &tp, [-n[0], -n[1]])
    };
    let dns = ts.normal_derivative(ns);
    let ss = weighted_product(&dns, &kw, &ts.values);
    blocks.add(s, s, -(&ss + ss.transpose()));
    let so = weighted_product(&dns, &kw, &to.values);
    blocks.add(o, s, so.transpose());
    blocks.add(s, o, so);

    if config.c11_interior != 0.0 {
        let c = config.c11_interior;
        let w = &quad.weights;
        blocks.add(f.elem_plus, f.elem_plus, weighted_product(&tp.values, w, &tp.values) * c);
        blocks.add(f.elem_minus, f.elem_minus, weighted_product(&tm.values, w, &tm.values) * c);
        let pm = weighted_product(&tp.values, w, &tm.values) * (-c);
        blocks.add(f.elem_minus, f.elem_plus, pm.transpose());
        blocks.add(f.elem_plus, f.elem_minus, pm);
    }
}

/// BR2 interior face: symmetric consistency terms with averages on both sides
/// plus `eta int kappa r^e([u]) . r^e([v])`, where `r^e` lives on both sides
/// with half weight.
fn br2_interior_terms(
    space: &DgSpace,
    id: usize,
    kappa: &dyn Fn(f64, f64) -> f64,
    eta: f64,
    kmass: &[DMatrix<f64>],
    blocks: &mut Blocks,
) {
    let f = &space.mesh.interior_faces[id];
    let quad = space.face_quad(f.elem_plus, f.local_face_plus);
    let tp = space.trace(f.elem_plus, f.local_face_plus, false);
    let tm = space.trace(f.elem_minus, f.local_face_minus, true);
    let n = f.unit_normal_plus;
    let kw: Vec<f64> = quad.points.iter().zip(&quad.weights).map(|(x, w)| w * kappa(x[0], x[1])).collect();
    let (p, m) = (f.elem_plus, f.elem_minus);
    let dnp = tp.normal_derivative(n);
    let dnm = tm.normal_derivative(n);

    // -int (u_P - u_M) n.{k grad v} - int n.{k grad u} (v_P - v_M)
    let pp = weighted_product(&dnp, &kw, &tp.values) * 0.5;
    blocks.add(p, p, -(&pp + pp.transpose()));
    let mm = weighted_product(&dnm, &kw, &tm.values) * 0.5;
    blocks.add(m, m, &mm + mm.transpose());
    let pm = weighted_product(&dnp, &kw, &tm.values) * 0.5 - weighted_product(&tp.values, &kw, &dnm) * 0.5;
    blocks.add(m, p, pm.transpose());
    blocks.add(p, m, pm);

    for support_plus in [true, false] {
        let lift = interior_lift(space, id, support_plus, 0.5);
        let mut scaled = lift.clone();
        for (_, mat) in scaled.terms.iter_mut() {
            *mat *= eta;
        }
        add_lift_product(blocks, &lift, &scaled, &kmass[lift.support]);
    }
}
