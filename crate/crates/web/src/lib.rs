//! WebAssembly bindings for the browser demo: solve and sample a field, show a
//! sparsity pattern, and count null-space modes.
//!
//! The plain functions return `Result<_, String>` so they run natively in
//! tests; the `#[wasm_bindgen]` wrappers convert errors to JS exceptions.

use cdg_core::basis::NodalBasis;
use cdg_core::forms::{assemble, structural_pattern, Problem, Scheme, SchemeConfig};
use cdg_core::linalg::nullspace_dim;
use cdg_core::manufactured::ManufacturedSolution;
use cdg_core::mesh::{BoundaryMarker, Mesh, SwitchAssignment, SwitchStrategy};
use wasm_bindgen::prelude::*;

/// Largest mesh and degree the page accepts; keeps the tab responsive.
const MAX_N: usize = 32;
const MAX_P: usize = 6;

fn parse(scheme: &str, switch: &str, p: usize, n: usize) -> Result<(Scheme, SwitchStrategy), String> {
    if !(1..=MAX_P).contains(&p) || !(1..=MAX_N).contains(&n) {
        return Err(format!("need 1 <= p <= {MAX_P} and 1 <= n <= {MAX_N}"));
    }
    Ok((scheme.parse()?, switch.parse()?))
}

fn config(scheme: Scheme) -> SchemeConfig {
    // C11 = 1 on the Dirichlet boundary keeps LDG well posed.
    SchemeConfig::new(scheme).with_c11(0.0, 1.0)
}

/// Discrete solution sampled on a `res x res` grid of cell centers, row 0 at y = 0.
#[wasm_bindgen]
pub struct FieldImage {
    res: usize,
    values: Vec<f64>,
    l2_error: f64,
    dofs: usize,
}

#[wasm_bindgen]
impl FieldImage {
    #[wasm_bindgen(getter)]
    pub fn res(&self) -> usize {
        self.res
    }

    #[wasm_bindgen(getter)]
    pub fn values(&self) -> Vec<f64> {
        self.values.clone()
    }

    #[wasm_bindgen(getter, js_name = l2Error)]
    pub fn l2_error(&self) -> f64 {
        self.l2_error
    }

    #[wasm_bindgen(getter)]
    pub fn dofs(&self) -> usize {
        self.dofs
    }
}

pub fn solve_field(scheme: &str, switch: &str, p: usize, n: usize, res: usize) -> Result<FieldImage, String> {
    let (scheme, strategy) = parse(scheme, switch, p, n)?;
    let res = res.clamp(8, 512);
    let mesh = Mesh::structured(n, false, &BoundaryMarker::AllDirichlet).map_err(|e| e.to_string())?;
    let basis = NodalBasis::new(p).map_err(|e| e.to_string())?;
    let sw = SwitchAssignment::new(&mesh, strategy).map_err(|e| e.to_string())?;
    let ex = ManufacturedSolution::default();
    let sol = cdg_core::solve(&mesh, &basis, &sw, &ex.problem(), &config(scheme)).map_err(|e| e.to_string())?;

    // Group samples by element so each element tabulates its basis once.
    let mut per_elem: Vec<Vec<(usize, [f64; 2])>> = vec![Vec::new(); mesh.num_elements()];
    for iy in 0..res {
        for ix in 0..res {
            let (x, y) = ((ix as f64 + 0.5) / res as f64, (iy as f64 + 0.5) / res as f64);
            let (i, j) = (((x * n as f64) as usize).min(n - 1), ((y * n as f64) as usize).min(n - 1));
            let (lx, ly) = (x * n as f64 - i as f64, y * n as f64 - j as f64);
            // Square j*n+i: element 2s below the diagonal, 2s+1 above it.
            let e = 2 * (j * n + i) + usize::from(ly > lx);
            let geo = mesh.geometry(e);
            let (dx, dy) = (x - geo.vertices[0][0], y - geo.vertices[0][1]);
            let xi = [geo.inv_t[0][0] * dx + geo.inv_t[1][0] * dy, geo.inv_t[0][1] * dx + geo.inv_t[1][1] * dy];
            per_elem[e].push((iy * res + ix, xi));
        }
    }
    let mut values = vec![0.0; res * res];
    for (e, samples) in per_elem.iter().enumerate().filter(|(_, s)| !s.is_empty()) {
        let pts: Vec<[f64; 2]> = samples.iter().map(|s| s.1).collect();
        let tab = basis.values_at(&pts);
        let c = sol.u.element(e);
        for (row, (k, _)) in samples.iter().enumerate() {
            values[*k] = (0..c.len()).map(|i| tab[(row, i)] * c[i]).sum();
        }
    }
    let l2_error = cdg_core::analysis::l2_error(&mesh, &basis, &sol.u, &|x, y| ex.u(x, y));
    Ok(FieldImage { res, values, l2_error, dofs: mesh.num_elements() * basis.dofs() })
}

/// Structural sparsity bitmap, row-major, one byte per entry.
#[wasm_bindgen]
pub struct PatternImage {
    dim: usize,
    bits: Vec<u8>,
    nnz: usize,
}

#[wasm_bindgen]
impl PatternImage {
    #[wasm_bindgen(getter)]
    pub fn dim(&self) -> usize {
        self.dim
    }

    #[wasm_bindgen(getter)]
    pub fn bits(&self) -> Vec<u8> {
        self.bits.clone()
    }

    #[wasm_bindgen(getter)]
    pub fn nnz(&self) -> usize {
        self.nnz
    }
}

pub fn sparsity(scheme: &str, switch: &str, p: usize, n: usize) -> Result<PatternImage, String> {
    let (scheme, strategy) = parse(scheme, switch, p, n.min(8))?;
    let mesh = Mesh::structured(n.min(8), false, &BoundaryMarker::AllDirichlet).map_err(|e| e.to_string())?;
    let basis = NodalBasis::new(p).map_err(|e| e.to_string())?;
    let sw = SwitchAssignment::new(&mesh, strategy).map_err(|e| e.to_string())?;
    let pat = structural_pattern(&mesh, &basis, &sw, scheme);
    let bits = pat.bitmap().into_iter().map(u8::from).collect();
    Ok(PatternImage { dim: pat.dim(), bits, nnz: pat.nnz() })
}

/// Null-space dimension on the periodic two-by-two mesh with C11 = 0.
pub fn nullity(scheme: &str, switch: &str, p: usize) -> Result<usize, String> {
    let (scheme, strategy) = parse(scheme, switch, p, 2)?;
    let mesh = Mesh::structured(2, true, &BoundaryMarker::AllDirichlet).map_err(|e| e.to_string())?;
    let basis = NodalBasis::new(p).map_err(|e| e.to_string())?;
    let sw = SwitchAssignment::new(&mesh, strategy).map_err(|e| e.to_string())?;
    let a = assemble(&mesh, &basis, &sw, &Problem::laplace(), &SchemeConfig::new(scheme))
        .map_err(|e| e.to_string())?
        .matrix;
    Ok(nullspace_dim(&a, 1e-8))
}

#[wasm_bindgen(js_name = solveField)]
pub fn solve_field_js(scheme: &str, switch: &str, p: usize, n: usize, res: usize) -> Result<FieldImage, JsError> {
    solve_field(scheme, switch, p, n, res).map_err(|e| JsError::new(&e))
}

#[wasm_bindgen(js_name = sparsityPattern)]
pub fn sparsity_js(scheme: &str, switch: &str, p: usize, n: usize) -> Result<PatternImage, JsError> {
    sparsity(scheme, switch, p, n).map_err(|e| JsError::new(&e))
}

#[wasm_bindgen(js_name = nullity)]
pub fn nullity_js(scheme: &str, switch: &str, p: usize) -> Result<usize, JsError> {
    nullity(scheme, switch, p).map_err(|e| JsError::new(&e))
}
