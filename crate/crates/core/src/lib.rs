//! Compact (CDG), local (LDG) and BR2 discontinuous Galerkin discretizations
//! of the Poisson problem on structured triangular meshes.
//!
//! ```
//! use cdg_core::{mesh::*, basis::NodalBasis, forms::*, manufactured::ManufacturedSolution};
//!
//! let mesh = Mesh::structured(4, false, &BoundaryMarker::AllDirichlet).unwrap();
//! let basis = NodalBasis::new(2).unwrap();
//! let switches = SwitchAssignment::new(&mesh, SwitchStrategy::Consistent).unwrap();
//! let exact = ManufacturedSolution::default();
//! let config = SchemeConfig::new(Scheme::Cdg);
//! let sol = cdg_core::solve(&mesh, &basis, &switches, &exact.problem(), &config).unwrap();
//! let err = cdg_core::analysis::l2_error(&mesh, &basis, &sol.u, &|x, y| exact.u(x, y));
//! assert!(err < 5e-3);
//! ```

pub mod analysis;
pub mod basis;
pub mod error;
pub mod field;
pub mod forms;
pub mod linalg;
pub mod manufactured;
pub mod mesh;
pub mod quadrature;

pub use error::{Error, Result};

use basis::NodalBasis;
use field::DGField;
use forms::{assemble, Problem, SchemeConfig};
use mesh::{Mesh, SwitchAssignment};

/// Discrete solution together with the assembled system diagnostics.
#[derive(Debug, Clone)]
pub struct Solution {
    pub u: DGField,
    /// `||A u - b||_2`.
    pub residual: f64,
    pub matrix_norm: f64,
    pub rhs_norm: f64,
    pub warnings: Vec<String>,
}

/// Assembles and solves the discrete Poisson problem with the direct solver.
pub fn solve(
    mesh: &Mesh,
    basis: &NodalBasis,
    switches: &SwitchAssignment,
    problem: &Problem,
    config: &SchemeConfig,
) -> Result<Solution> {
    let sys = assemble(mesh, basis, switches, problem, config)?;
    let x = linalg::solve_spd(&sys.matrix, &sys.rhs)?;
    let residual = linalg::residual_norm(&sys.matrix, &x, &sys.rhs);
    Ok(Solution {
        u: DGField::scalar(basis.dofs(), x),
        residual,
        matrix_norm: sys.matrix.norm_inf(),
        rhs_norm: sys.rhs.iter().map(|v| v * v).sum::<f64>().sqrt(),
        warnings: sys.warnings,
    })
}
