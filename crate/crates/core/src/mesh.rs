//! Triangular meshes of the unit square, face connectivity and face switches.

use std::collections::HashMap;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum BoundaryTag {
    Dirichlet,
    Neumann,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Side {
    Left,
    Right,
    Bottom,
    Top,
}

/// How boundary faces of the unit square are tagged.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub enum BoundaryMarker {
    #[default]
    AllDirichlet,
    AllNeumann,
    /// Neumann on the listed sides, Dirichlet elsewhere.
    NeumannOn(Vec<Side>),
}

impl BoundaryMarker {
    fn tag(&self, midpoint: [f64; 2]) -> BoundaryTag {
        match self {
            BoundaryMarker::AllDirichlet => BoundaryTag::Dirichlet,
            BoundaryMarker::AllNeumann => BoundaryTag::Neumann,
            BoundaryMarker::NeumannOn(sides) => {
                let on = |s: &Side| match s {
                    Side::Left => midpoint[0].abs() < 1e-12,
                    Side::Right => (midpoint[0] - 1.0).abs() < 1e-12,
                    Side::Bottom => midpoint[1].abs() < 1e-12,
                    Side::Top => (midpoint[1] - 1.0).abs() < 1e-12,
                };
                if sides.iter().any(on) {
                    BoundaryTag::Neumann
                } else {
                    BoundaryTag::Dirichlet
                }
            }
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct InteriorFace {
    pub elem_plus: usize,
    pub elem_minus: usize,
    pub local_face_plus: usize,
    pub local_face_minus: usize,
    /// Unit normal pointing out of `elem_plus`.
    pub unit_normal_plus: [f64; 2],
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BoundaryFace {
    pub elem: usize,
    pub local_face: usize,
    pub unit_outward_normal: [f64; 2],
    pub tag: BoundaryTag,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FaceRef {
    Interior(usize),
    Boundary(usize),
}

/// Affine element geometry `x = v0 + J xi`.
#[derive(Debug, Clone, Copy)]
pub struct ElementGeometry {
    pub vertices: [[f64; 2]; 3],
    pub jac: [[f64; 2]; 2],
    pub det: f64,
    /// Inverse transpose of the Jacobian, maps reference to physical gradients.
    pub inv_t: [[f64; 2]; 2],
}

impl ElementGeometry {
    pub fn new(vertices: [[f64; 2]; 3]) -> Self {
        let [v0, v1, v2] = vertices;
        let jac = [[v1[0] - v0[0], v2[0] - v0[0]], [v1[1] - v0[1], v2[1] - v0[1]]];
        let det = jac[0][0] * jac[1][1] - jac[0][1] * jac[1][0];
        let inv_t = [
            [jac[1][1] / det, -jac[1][0] / det],
            [-jac[0][1] / det, jac[0][0] / det],
        ];
        ElementGeometry { vertices, jac, det, inv_t }
    }

    pub fn area(&self) -> f64 {
        0.5 * self.det
    }

    pub fn map(&self, xi: [f64; 2]) -> [f64; 2] {
        let v0 = self.vertices[0];
        [
            v0[0] + self.jac[0][0] * xi[0] + self.jac[0][1] * xi[1],
            v0[1] + self.jac[1][0] * xi[0] + self.jac[1][1] * xi[1],
        ]
    }

    pub fn physical_gradient(&self, dxi: f64, deta: f64) -> [f64; 2] {
        [
            self.inv_t[0][0] * dxi + self.inv_t[0][1] * deta,
            self.inv_t[1][0] * dxi + self.inv_t[1][1] * deta,
        ]
    }

    /// Length and outward unit normal of local face `k`.
    pub fn face(&self, k: usize) -> (f64, [f64; 2]) {
        let a = self.vertices[(k + 1) % 3];
        let b = self.vertices[(k + 2) % 3];
        let (dx, dy) = (b[0] - a[0], b[1] - a[1]);
        let len = dx.hypot(dy);
        (len, [dy / len, -dx / len])
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct Mesh {
    pub vertices: Vec<[f64; 2]>,
    pub elements: Vec<[usize; 3]>,
    pub interior_faces: Vec<InteriorFace>,
    pub boundary_faces: Vec<BoundaryFace>,
    pub periodic: bool,
    pub n: usize,
    #[serde(skip)]
    element_faces: Vec<[FaceRef; 3]>,
}

#[derive(Deserialize)]
struct RawMesh {
    vertices: Vec<[f64; 2]>,
    elements: Vec<[usize; 3]>,
    interior_faces: Vec<InteriorFace>,
    boundary_faces: Vec<BoundaryFace>,
    #[serde(default)]
    periodic: bool,
    #[serde(default)]
    n: usize,
}

/// Structural edge key of the split Cartesian grid.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
enum GridEdge {
    Horizontal(usize, usize),
    Vertical(usize, usize),
    Diagonal(usize, usize),
}

impl Mesh {
    /// Splits an `n x n` grid of the unit square along the lower-left to
    /// upper-right diagonal. Squares are numbered row-major and square `s`
    /// holds elements `2s` (lower right) and `2s + 1` (upper left).
    pub fn structured(n: usize, periodic: bool, marker: &BoundaryMarker) -> Result<Mesh> {
        if n == 0 {
            return Err(Error::InvalidMesh("n must be at least 1".into()));
        }
        let h = 1.0 / n as f64;
        let vid = |i: usize, j: usize| j * (n + 1) + i;
        let mut vertices = Vec::with_capacity((n + 1) * (n + 1));
        for j in 0..=n {
            for i in 0..=n {
                vertices.push([i as f64 * h, j as f64 * h]);
            }
        }
        let wrap = |k: usize| if periodic { k % n } else { k };
        let mut elements = Vec::with_capacity(2 * n * n);
        let mut keys: Vec<[GridEdge; 3]> = Vec::with_capacity(2 * n * n);
        for j in 0..n {
            for i in 0..n {
                elements.push([vid(i, j), vid(i + 1, j), vid(i + 1, j + 1)]);
                keys.push([
                    GridEdge::Vertical(wrap(i + 1), j),
                    GridEdge::Diagonal(i, j),
                    GridEdge::Horizontal(i, j),
                ]);
                elements.push([vid(i, j), vid(i + 1, j + 1), vid(i, j + 1)]);
                keys.push([
                    GridEdge::Horizontal(i, wrap(j + 1)),
                    GridEdge::Vertical(i, j),
                    GridEdge::Diagonal(i, j),
                ]);
            }
        }
        Self::from_keys(vertices, elements, &keys, periodic, n, marker)
    }

    /// Builds connectivity for an arbitrary conforming triangulation; faces
    /// shared by two elements are interior, the rest are boundary faces.
    pub fn from_triangles(
        vertices: Vec<[f64; 2]>,
        elements: Vec<[usize; 3]>,
        marker: &BoundaryMarker,
    ) -> Result<Mesh> {
        if elements.is_empty() {
            return Err(Error::InvalidMesh("mesh has no elements".into()));
        }
        for (e, tri) in elements.iter().enumerate() {
            if tri.iter().any(|&v| v >= vertices.len()) {
                return Err(Error::InvalidMesh(format!("element {e} references a missing vertex")));
            }
        }
        let keys: Vec<[(usize, usize); 3]> = elements
            .iter()
            .map(|t| {
                let key = |a: usize, b: usize| (a.min(b), a.max(b));
                [key(t[1], t[2]), key(t[2], t[0]), key(t[0], t[1])]
            })
            .collect();
        Self::from_keys(vertices, elements, &keys, false, 0, marker)
    }

    fn from_keys<K: Copy + Eq + std::hash::Hash>(
        vertices: Vec<[f64; 2]>,
        elements: Vec<[usize; 3]>,
        keys: &[[K; 3]],
        periodic: bool,
        n: usize,
        marker: &BoundaryMarker,
    ) -> Result<Mesh> {
        // Faces in order of first encounter.
        let mut slot: HashMap<K, usize> = HashMap::new();
        let mut owners: Vec<Vec<(usize, usize)>> = Vec::new();
        for (e, ks) in keys.iter().enumerate() {
            for (k, key) in ks.iter().enumerate() {
                let id = *slot.entry(*key).or_insert_with(|| {
                    owners.push(Vec::new());
                    owners.len() - 1
                });
                owners[id].push((e, k));
            }
        }
        let mut mesh = Mesh {
            vertices,
            elements,
            interior_faces: Vec::new(),
            boundary_faces: Vec::new(),
            periodic,
            n,
            element_faces: Vec::new(),
        };
        for e in 0..mesh.elements.len() {
            let area = mesh.geometry(e).area();
            if area <= 0.0 {
                return Err(Error::DegenerateElement { element: e, area });
            }
        }
        for own in &owners {
            match own.as_slice() {
                [(e, k)] => {
                    let geo = mesh.geometry(*e);
                    let (_, normal) = geo.face(*k);
                    let a = geo.vertices[(k + 1) % 3];
                    let b = geo.vertices[(k + 2) % 3];
                    let mid = [0.5 * (a[0] + b[0]), 0.5 * (a[1] + b[1])];
                    mesh.boundary_faces.push(BoundaryFace {
                        elem: *e,
                        local_face: *k,
                        unit_outward_normal: normal,
                        tag: marker.tag(mid),
                    });
                }
                [(e0, k0), (e1, k1)] => {
                    let (_, normal) = mesh.geometry(*e0).face(*k0);
                    mesh.interior_faces.push(InteriorFace {
                        elem_plus: *e0,
                        elem_minus: *e1,
                        local_face_plus: *k0,
                        local_face_minus: *k1,
                        unit_normal_plus: normal,
                    });
                }
                _ => {
                    return Err(Error::InvalidMesh(format!(
                        "face shared by {} elements",
                        own.len()
                    )))
                }
            }
        }
        mesh.rebuild_element_faces()?;
        Ok(mesh)
    }

    fn rebuild_element_faces(&mut self) -> Result<()> {
        let mut table: Vec<[Option<FaceRef>; 3]> = vec![[None; 3]; self.elements.len()];
        let mut put = |e: usize, k: usize, f: FaceRef| -> Result<()> {
            let cell = table
                .get_mut(e)
                .and_then(|row| row.get_mut(k))
                .ok_or_else(|| Error::InvalidMesh(format!("bad face reference ({e}, {k})")))?;
            if cell.is_some() {
                return Err(Error::InvalidMesh(format!("local face ({e}, {k}) used twice")));
            }
            *cell = Some(f);
            Ok(())
        };
        for (id, f) in self.interior_faces.iter().enumerate() {
            put(f.elem_plus, f.local_face_plus, FaceRef::Interior(id))?;
            put(f.elem_minus, f.local_face_minus, FaceRef::Interior(id))?;
        }
        for (id, f) in self.boundary_faces.iter().enumerate() {
            put(f.elem, f.local_face, FaceRef::Boundary(id))?;
        }
        self.element_faces = table
            .into_iter()
            .enumerate()
            .map(|(e, row)| {
                let mut out = [FaceRef::Boundary(0); 3];
                for k in 0..3 {
                    out[k] = row[k]
                        .ok_or_else(|| Error::InvalidMesh(format!("local face ({e}, {k}) unassigned")))?;
                }
                Ok(out)
            })
            .collect::<Result<_>>()?;
        Ok(())
    }

    pub fn num_elements(&self) -> usize {
        self.elements.len()
    }

    /// Mesh size `1/n` for structured meshes.
    pub fn h(&self) -> f64 {
        1.0 / self.n as f64
    }

    pub fn geometry(&self, e: usize) -> ElementGeometry {
        let t = self.elements[e];
        ElementGeometry::new([self.vertices[t[0]], self.vertices[t[1]], self.vertices[t[2]]])
    }

    pub fn element_faces(&self, e: usize) -> [FaceRef; 3] {
        self.element_faces[e]
    }

    /// True when none of the element's faces lies on the boundary.
    pub fn is_interior_element(&self, e: usize) -> bool {
        self.element_faces[e]
            .iter()
            .all(|f| matches!(f, FaceRef::Interior(_)))
    }

    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(self)?)
    }

    pub fn from_json(s: &str) -> Result<Mesh> {
        let raw: RawMesh = serde_json::from_str(s)?;
        if raw.elements.is_empty() {
            return Err(Error::InvalidMesh("mesh has no elements".into()));
        }
        let mut mesh = Mesh {
            vertices: raw.vertices,
            elements: raw.elements,
            interior_faces: raw.interior_faces,
            boundary_faces: raw.boundary_faces,
            periodic: raw.periodic,
            n: raw.n,
            element_faces: Vec::new(),
        };
        if mesh.elements.iter().flatten().any(|&v| v >= mesh.vertices.len()) {
            return Err(Error::InvalidMesh("element references a missing vertex".into()));
        }
        mesh.rebuild_element_faces()?;
        Ok(mesh)
    }
}

/// Four triangles around a central element; used to illustrate sparsity
/// patterns. Element 0 is the center and elements 1, 2, 3 sit across its
/// local faces 1, 0 and 2 respectively.
pub fn four_triangle_mesh() -> Mesh {
    let vertices = vec![
        [0.0, 0.0],  // A
        [2.0, 1.0],  // B
        [0.5, 2.0],  // C
        [2.0, 2.5],  // D
        [-1.0, 1.0], // E
        [1.5, -1.0], // F
    ];
    let elements = vec![[0, 1, 2], [2, 4, 0], [1, 3, 2], [0, 5, 1]];
    Mesh::from_triangles(vertices, elements, &BoundaryMarker::AllDirichlet)
        .expect("fixed four-triangle mesh is valid")
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum SwitchStrategy {
    Consistent,
    Natural,
}

impl std::fmt::Display for SwitchStrategy {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            SwitchStrategy::Consistent => write!(f, "consistent"),
            SwitchStrategy::Natural => write!(f, "natural"),
        }
    }
}

impl std::str::FromStr for SwitchStrategy {
    type Err = String;
    fn from_str(s: &str) -> std::result::Result<Self, String> {
        match s.to_ascii_lowercase().as_str() {
            "consistent" => Ok(SwitchStrategy::Consistent),
            "natural" => Ok(SwitchStrategy::Natural),
            other => Err(format!("unknown switch strategy '{other}'")),
        }
    }
}

/// Direction used by the consistent switch: `S = 1` on the side whose
/// outward normal has a positive component along it.
pub const CONSISTENT_DIRECTION: [f64; 2] = [1.0, -0.3];

/// Per-interior-face switch of the plus element; the minus switch is `1 - S+`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SwitchAssignment {
    pub strategy: SwitchStrategy,
    pub s_plus: Vec<u8>,
}

impl SwitchAssignment {
    pub fn new(mesh: &Mesh, strategy: SwitchStrategy) -> Result<Self> {
        if mesh.interior_faces.is_empty() {
            return Err(Error::NoInteriorFaces);
        }
        let s_plus = mesh
            .interior_faces
            .iter()
            .map(|f| match strategy {
                SwitchStrategy::Natural => u8::from(f.elem_plus >= f.elem_minus),
                SwitchStrategy::Consistent => {
                    let g = CONSISTENT_DIRECTION;
                    u8::from(g[0] * f.unit_normal_plus[0] + g[1] * f.unit_normal_plus[1] > 0.0)
                }
            })
            .collect();
        let sw = SwitchAssignment { strategy, s_plus };
        if strategy == SwitchStrategy::Consistent {
            sw.check_rule(mesh)?;
        }
        Ok(sw)
    }

    pub fn s_minus(&self, face: usize) -> u8 {
        1 - self.s_plus[face]
    }

    /// Switch of the plus (or minus) element on interior face `face`.
    pub fn switch_of(&self, face: usize, elem_is_plus: bool) -> u8 {
        if elem_is_plus {
            self.s_plus[face]
        } else {
            self.s_minus(face)
        }
    }

    /// Sum of switches over the interior faces of each element.
    pub fn element_sums(&self, mesh: &Mesh) -> Vec<usize> {
        let mut sums = vec![0; mesh.num_elements()];
        for (id, f) in mesh.interior_faces.iter().enumerate() {
            sums[f.elem_plus] += self.s_plus[id] as usize;
            sums[f.elem_minus] += self.s_minus(id) as usize;
        }
        sums
    }

    /// Checks that every element has fewer than d+1 = 3 switches set.
    pub fn check_rule(&self, mesh: &Mesh) -> Result<()> {
        for (e, &sum) in self.element_sums(mesh).iter().enumerate() {
            if sum >= 3 {
                return Err(Error::SwitchRule { element: e, sum });
            }
        }
        Ok(())
    }

    /// `C12 = (S+ n+ + S- n-) / 2` on an interior face.
    pub fn c12(&self, mesh: &Mesh, face: FaceRef) -> Result<[f64; 2]> {
        let id = match face {
            FaceRef::Interior(id) => id,
            FaceRef::Boundary(id) => return Err(Error::NotInteriorFace(id)),
        };
        let f = mesh
            .interior_faces
            .get(id)
            .ok_or(Error::NotInteriorFace(id))?;
        let sp = self.s_plus[id] as f64;
        let sm = self.s_minus(id) as f64;
        let n = f.unit_normal_plus;
        Ok([0.5 * (sp * n[0] - sm * n[0]), 0.5 * (sp * n[1] - sm * n[1])])
    }

    /// Element on which the facewise lifted flux of an interior face lives:
    /// the side whose switch is 1.
    pub fn lifting_support(&self, mesh: &Mesh, face: usize) -> usize {
        let f = &mesh.interior_faces[face];
        if self.s_plus[face] == 1 {
            f.elem_plus
        } else {
            f.elem_minus
        }
    }
}
