//! Symbolic sparsity of the assembled forms.
//!
//! The pattern follows the coupling graph of each term: a trace of the nodal
//! basis on a face only involves that face's nodes, while a normal derivative
//! on a face involves every node of the element.

use std::collections::BTreeMap;

use super::Scheme;
use crate::basis::NodalBasis;
use crate::mesh::{BoundaryTag, FaceRef, Mesh, SwitchAssignment};

/// Per-block dof masks keyed by (row element, column element).
#[derive(Debug, Clone, PartialEq)]
pub struct StructuralPattern {
    pub num_elements: usize,
    pub dofs_per_element: usize,
    /// Row-major `S x S` masks.
    pub blocks: BTreeMap<(usize, usize), Vec<bool>>,
}

impl StructuralPattern {
    fn new(num_elements: usize, dofs_per_element: usize) -> Self {
        StructuralPattern { num_elements, dofs_per_element, blocks: BTreeMap::new() }
    }

    fn mark(&mut self, row: usize, col: usize, rows: &[usize], cols: &[usize]) {
        let s = self.dofs_per_element;
        let mask = self.blocks.entry((row, col)).or_insert_with(|| vec![false; s * s]);
        for &i in rows {
            for &j in cols {
                mask[i * s + j] = true;
            }
        }
    }

    pub fn dim(&self) -> usize {
        self.num_elements * self.dofs_per_element
    }

    /// Whether global entry `(i, j)` is structurally nonzero.
    pub fn contains(&self, i: usize, j: usize) -> bool {
        let s = self.dofs_per_element;
        self.blocks
            .get(&(i / s, j / s))
            .is_some_and(|m| m[(i % s) * s + j % s])
    }

    /// Structural nonzeros in the row block of element `e`.
    pub fn row_block_nnz(&self, e: usize) -> usize {
        self.blocks
            .range((e, 0)..(e + 1, 0))
            .map(|(_, m)| m.iter().filter(|b| **b).count())
            .sum()
    }

    pub fn nnz(&self) -> usize {
        self.blocks.values().map(|m| m.iter().filter(|b| **b).count()).sum()
    }

    /// Element pairs with a nonempty block, excluding the diagonal.
    pub fn coupled_elements(&self) -> Vec<(usize, usize)> {
        self.blocks
            .iter()
            .filter(|((r, c), m)| r != c && m.iter().any(|b| *b))
            .map(|(k, _)| *k)
            .collect()
    }

    pub fn couples(&self, a: usize, b: usize) -> bool {
        self.blocks.get(&(a, b)).is_some_and(|m| m.iter().any(|x| *x))
    }

    /// Dense boolean image, row-major `N x N`.
    pub fn bitmap(&self) -> Vec<bool> {
        let n = self.dim();
        let s = self.dofs_per_element;
        let mut out = vec![false; n * n];
        for ((r, c), m) in &self.blocks {
            for i in 0..s {
                for j in 0..s {
                    if m[i * s + j] {
                        out[(r * s + i) * n + c * s + j] = true;
                    }
                }
            }
        }
        out
    }

    /// Plain PBM (P1) image, one pixel per matrix entry, black = nonzero.
    pub fn to_pbm(&self) -> String {
        let n = self.dim();
        let bits = self.bitmap();
        let mut out = format!("P1\n{n} {n}\n");
        for row in bits.chunks(n.max(1)) {
            let line: Vec<&str> = row.iter().map(|b| if *b { "1" } else { "0" }).collect();
            out.push_str(&line.join(" "));
            out.push('\n');
        }
        out
    }
}

/// Structural pattern of `scheme` on `mesh`, derived from the form's terms.
pub fn structural_pattern(
    mesh: &Mesh,
    basis: &NodalBasis,
    switches: &SwitchAssignment,
    scheme: Scheme,
) -> StructuralPattern {
    let s = basis.dofs();
    let t = mesh.num_elements();
    let all: Vec<usize> = (0..s).collect();
    let face = |k: usize| basis.face_nodes[k].as_slice();
    let mut pat = StructuralPattern::new(t, s);

    for e in 0..t {
        pat.mark(e, e, &all, &all);
    }

    for (id, f) in mesh.interior_faces.iter().enumerate() {
        let (p, m) = (f.elem_plus, f.elem_minus);
        let (fp, fm) = (face(f.local_face_plus), face(f.local_face_minus));
        match scheme {
            Scheme::Cdg | Scheme::Ldg => {
                let (sd, od, fo) = if switches.s_plus[id] == 1 { (p, m, fm) } else { (m, p, fp) };
                pat.mark(sd, od, &all, fo);
                pat.mark(od, sd, fo, &all);
                // Penalty and lifting products only add face-by-face couplings.
                pat.mark(p, m, fp, fm);
                pat.mark(m, p, fm, fp);
            }
            Scheme::Br2 => {
                pat.mark(p, m, &all, fm);
                pat.mark(p, m, fp, &all);
                pat.mark(m, p, &all, fp);
                pat.mark(m, p, fm, &all);
            }
        }
    }

    if scheme == Scheme::Ldg {
        // Every pair of lifts landing on the same element couples the face
        // nodes of the elements they draw data from.
        for e in 0..t {
            let mut sources: Vec<(usize, usize)> = Vec::new();
            for fr in mesh.element_faces(e) {
                match fr {
                    FaceRef::Interior(id) => {
                        if switches.lifting_support(mesh, id) != e {
                            continue;
                        }
                        let f = &mesh.interior_faces[id];
                        sources.push((f.elem_plus, f.local_face_plus));
                        sources.push((f.elem_minus, f.local_face_minus));
                    }
                    FaceRef::Boundary(id) => {
                        let f = &mesh.boundary_faces[id];
                        if f.tag == BoundaryTag::Dirichlet {
                            sources.push((f.elem, f.local_face));
                        }
                    }
                }
            }
            for &(ea, ka) in &sources {
                for &(eb, kb) in &sources {
                    pat.mark(eb, ea, face(kb), face(ka));
                }
            }
        }
    }
    pat
}
