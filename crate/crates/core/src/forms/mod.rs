//! Lifting operators, numerical-flux terms and primal-form assembly of the
//! CDG, LDG and BR2 discretizations.

mod assembly;
mod lifting;
mod pattern;
mod space;

use std::fmt;
use std::str::FromStr;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

pub use assembly::{assemble, ldg_cross_terms, Assembled};
pub use lifting::{
    c12_jump_data, dirichlet_defect_data, jump_data, lift_l_face, lift_l_global, lift_r_face,
    lift_r_global, lift_rd_face, lift_rd_global, reconstruct_flux, FaceLift,
};
pub use pattern::{structural_pattern, StructuralPattern};
pub use space::{DgSpace, FaceQuad, Trace};

pub type ScalarFn = Arc<dyn Fn(f64, f64) -> f64 + Send + Sync>;
/// Neumann data `g_N(x, y, n)`; the outward normal is passed along.
pub type FluxFn = Arc<dyn Fn(f64, f64, [f64; 2]) -> f64 + Send + Sync>;

/// Data of `-div(kappa grad u) = f`, `u = g_D` on Dirichlet faces,
/// `kappa du/dn = g_N` on Neumann faces.
#[derive(Clone)]
pub struct Problem {
    pub kappa: ScalarFn,
    pub source: ScalarFn,
    pub dirichlet: ScalarFn,
    pub neumann: FluxFn,
}

impl Problem {
    /// Laplace operator with homogeneous data; used for operator-only studies.
    pub fn laplace() -> Self {
        Problem {
            kappa: Arc::new(|_, _| 1.0),
            source: Arc::new(|_, _| 0.0),
            dirichlet: Arc::new(|_, _| 0.0),
            neumann: Arc::new(|_, _, _| 0.0),
        }
    }
}

impl fmt::Debug for Problem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("Problem { .. }")
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "UPPERCASE")]
pub enum Scheme {
    Cdg,
    Ldg,
    Br2,
}

impl Scheme {
    pub const ALL: [Scheme; 3] = [Scheme::Cdg, Scheme::Ldg, Scheme::Br2];
}

impl fmt::Display for Scheme {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Scheme::Cdg => "CDG",
            Scheme::Ldg => "LDG",
            Scheme::Br2 => "BR2",
        })
    }
}

impl FromStr for Scheme {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, String> {
        match s.to_ascii_lowercase().as_str() {
            "cdg" => Ok(Scheme::Cdg),
            "ldg" => Ok(Scheme::Ldg),
            "br2" => Ok(Scheme::Br2),
            other => Err(format!("unknown scheme '{other}'")),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SchemeConfig {
    pub scheme: Scheme,
    pub c11_interior: f64,
    pub c11_boundary: f64,
    /// BR2 lifting weight.
    pub eta: f64,
}

impl SchemeConfig {
    pub fn new(scheme: Scheme) -> Self {
        SchemeConfig { scheme, c11_interior: 0.0, c11_boundary: 0.0, eta: 3.0 }
    }

    pub fn with_c11(mut self, interior: f64, boundary: f64) -> Self {
        self.c11_interior = interior;
        self.c11_boundary = boundary;
        self
    }

    pub fn with_eta(mut self, eta: f64) -> Self {
        self.eta = eta;
        self
    }

    /// Options that the chosen scheme ignores.
    pub fn warnings(&self) -> Vec<String> {
        let mut w = Vec::new();
        if self.scheme == Scheme::Br2 && (self.c11_interior != 0.0 || self.c11_boundary != 0.0) {
            w.push("BR2 ignores C11".to_string());
        }
        w
    }
}
