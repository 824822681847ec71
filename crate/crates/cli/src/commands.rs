use std::time::Instant;

use cdg_core::analysis::{h1_seminorm_error, l2_error, memory_counts, sparsity_census, ConvergenceReport, ReportRow, Status};
use cdg_core::basis::NodalBasis;
use cdg_core::forms::{assemble, structural_pattern, Problem, Scheme, SchemeConfig};
use cdg_core::linalg::{nullspace_dim, spectral_radius_lanczos, Lanczos, MassMatrix};
use cdg_core::manufactured::{ManufacturedSolution, PolynomialSolution};
use cdg_core::mesh::{BoundaryMarker, Mesh, SwitchAssignment, SwitchStrategy};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::args::{RunArgs, SparsityArgs, SwitchArg};
use crate::pool;
use crate::CliError;

/// One `(scheme, switch, p, n, C11)` combination.
#[derive(Debug, Clone)]
struct Cell {
    scheme: Scheme,
    switch: SwitchStrategy,
    p: usize,
    n: usize,
    c11: f64,
    c11_boundary: f64,
}

impl Cell {
    fn config(&self, eta: f64) -> SchemeConfig {
        SchemeConfig::new(self.scheme).with_c11(self.c11, self.c11_boundary).with_eta(eta)
    }

    fn row(&self, metric: &str, eta: f64) -> ReportRow {
        let mut r = ReportRow::new(self.scheme.to_string(), self.switch.to_string(), metric);
        r.p = Some(self.p);
        r.n = Some(self.n);
        if self.scheme == Scheme::Br2 {
            r.eta = Some(eta);
        } else {
            r.c11 = Some(self.c11);
        }
        r
    }
}

struct Defaults {
    schemes: &'static [Scheme],
    switches: &'static [SwitchArg],
    p: &'static [usize],
    n: &'static [usize],
}

fn or_default<T: Clone>(given: &[T], default: &[T]) -> Vec<T> {
    if given.is_empty() {
        default.to_vec()
    } else {
        given.to_vec()
    }
}

fn cells(args: &RunArgs, d: Defaults) -> Result<Vec<Cell>, CliError> {
    let p = or_default(&args.p, d.p);
    let n = or_default(&args.n, d.n);
    if let Some(bad) = p.iter().find(|&&p| p == 0) {
        return Err(CliError::Usage(format!("--p must be >= 1, got {bad}")));
    }
    if n.contains(&0) {
        return Err(CliError::Usage("--n must be >= 1 (empty mesh)".into()));
    }
    let c11 = or_default(&args.c11_interior, &[0.0]);
    let mut out = Vec::new();
    for &scheme in &or_default(&args.scheme, d.schemes) {
        for &sw in &or_default(&args.switch, d.switches) {
            for &p in &p {
                for &n in &n {
                    // BR2 has no C11; one cell regardless of the list.
                    let c11s: &[f64] = if scheme == Scheme::Br2 { &c11[..1] } else { &c11 };
                    for &c in c11s {
                        out.push(Cell {
                            scheme,
                            switch: sw.into(),
                            p,
                            n,
                            c11: c,
                            c11_boundary: args.c11_boundary.unwrap_or(c),
                        });
                    }
                }
            }
        }
    }
    Ok(out)
}

fn metadata(command: &str, args: &RunArgs) -> Vec<(String, String)> {
    let mut m = vec![
        ("command".to_string(), command.to_string()),
        ("periodic".to_string(), args.periodic.to_string()),
        ("eta".to_string(), args.eta.to_string()),
    ];
    if let Some(b) = args.c11_boundary {
        m.push(("c11_boundary".to_string(), b.to_string()));
    }
    if args.poly_exact {
        m.push(("exact".to_string(), format!("random polynomial, seed {}", args.seed)));
    } else {
        m.push(("exact".to_string(), "manufactured exponential".to_string()));
    }
    m
}

fn failed(mut row: ReportRow, err: impl std::fmt::Display) -> ReportRow {
    row.status = Status::Failed;
    row.message = Some(err.to_string());
    row
}

/// The exact solution of one cell.
enum Exact {
    Manufactured(ManufacturedSolution),
    Polynomial(PolynomialSolution),
}

impl Exact {
    fn new(args: &RunArgs, p: usize) -> Self {
        if !args.poly_exact {
            return Exact::Manufactured(ManufacturedSolution::default());
        }
        let mut rng = ChaCha8Rng::seed_from_u64(args.seed.wrapping_add(p as u64));
        let coeffs: Vec<f64> = (0..(p + 1) * (p + 2) / 2).map(|_| rng.gen_range(-1.0..1.0)).collect();
        Exact::Polynomial(PolynomialSolution::with_coefficients(p as u32, &coeffs))
    }

    fn problem(&self) -> Problem {
        match self {
            Exact::Manufactured(m) => m.problem(),
            Exact::Polynomial(q) => q.problem(),
        }
    }

    fn u(&self, x: f64, y: f64) -> f64 {
        match self {
            Exact::Manufactured(m) => m.u(x, y),
            Exact::Polynomial(q) => q.u(x, y),
        }
    }

    fn grad(&self, x: f64, y: f64) -> [f64; 2] {
        match self {
            Exact::Manufactured(m) => m.grad_u(x, y),
            Exact::Polynomial(q) => q.grad_u(x, y),
        }
    }
}

fn structured(n: usize, periodic: bool) -> cdg_core::Result<Mesh> {
    Mesh::structured(n, periodic, &BoundaryMarker::AllDirichlet)
}

struct Solved {
    l2: f64,
    h1: f64,
    residual: f64,
}

fn solve_cell(cell: &Cell, args: &RunArgs) -> cdg_core::Result<Solved> {
    let mesh = structured(cell.n, args.periodic)?;
    let basis = NodalBasis::new(cell.p)?;
    let sw = SwitchAssignment::new(&mesh, cell.switch)?;
    let exact = Exact::new(args, cell.p);
    let start = Instant::now();
    let sol = cdg_core::solve(&mesh, &basis, &sw, &exact.problem(), &cell.config(args.eta))?;
    eprintln!(
        "{} {} p={} n={} c11={}: solved in {:.3}s",
        cell.scheme,
        cell.switch,
        cell.p,
        cell.n,
        cell.c11,
        start.elapsed().as_secs_f64()
    );
    for w in &sol.warnings {
        eprintln!("warning: {w}");
    }
    Ok(Solved {
        l2: l2_error(&mesh, &basis, &sol.u, &|x, y| exact.u(x, y)),
        h1: h1_seminorm_error(&mesh, &basis, &sol.u, &|x, y| exact.grad(x, y)),
        residual: sol.residual / (sol.matrix_norm + sol.rhs_norm).max(f64::MIN_POSITIVE),
    })
}

const SOLVE_DEFAULTS: Defaults = Defaults { schemes: &[Scheme::Cdg], switches: &[SwitchArg::Consistent], p: &[1], n: &[2] };

pub fn solve(args: &RunArgs) -> Result<ConvergenceReport, CliError> {
    let cells = cells(args, SOLVE_DEFAULTS)?;
    let results = pool::map(&cells, pool::worker_count(), |c| solve_cell(c, args));
    let mut rep = ConvergenceReport { metadata: metadata("solve", args), ..Default::default() };
    for (cell, res) in cells.iter().zip(results) {
        let names = ["error_h1", "error_l2", "residual_rel"];
        match res {
            Ok(s) => {
                for (name, v) in names.into_iter().zip([s.h1, s.l2, s.residual]) {
                    let mut r = cell.row(name, args.eta);
                    r.value = Some(v);
                    rep.push(r);
                }
            }
            Err(e) => names.into_iter().for_each(|name| rep.push(failed(cell.row(name, args.eta), &e))),
        }
    }
    rep.finalize();
    Ok(rep)
}

pub fn convergence(args: &RunArgs) -> Result<ConvergenceReport, CliError> {
    let d = Defaults { schemes: &[Scheme::Cdg], switches: &[SwitchArg::Consistent], p: &[1, 2, 3, 4, 5], n: &[2, 4, 8, 16, 32] };
    let cells = cells(args, d)?;
    let results = pool::map(&cells, pool::worker_count(), |c| solve_cell(c, args));
    let mut rep = ConvergenceReport { metadata: metadata("convergence", args), ..Default::default() };
    for (cell, res) in cells.iter().zip(results) {
        let row = cell.row("error_l2", args.eta);
        rep.push(match res {
            Ok(s) => ReportRow { value: Some(s.l2), ..row },
            Err(e) => failed(row, e),
        });
    }
    rep.finalize();
    Ok(rep)
}

pub fn nullspace(args: &RunArgs) -> Result<ConvergenceReport, CliError> {
    let d = Defaults {
        schemes: &[Scheme::Cdg, Scheme::Ldg],
        switches: &[SwitchArg::Consistent, SwitchArg::Natural],
        p: &[1, 2, 3, 4, 5, 6, 7],
        n: &[2],
    };
    let cells = cells(args, d)?;
    let results = pool::map(&cells, pool::worker_count(), |c| -> cdg_core::Result<usize> {
        let mesh = structured(c.n, true)?;
        let basis = NodalBasis::new(c.p)?;
        let sw = SwitchAssignment::new(&mesh, c.switch)?;
        let a = assemble(&mesh, &basis, &sw, &Problem::laplace(), &c.config(args.eta))?.matrix;
        Ok(nullspace_dim(&a, 1e-8))
    });
    let mut meta = metadata("nullspace", args);
    meta.retain(|(k, _)| k != "periodic" && k != "exact");
    meta.push(("mesh".to_string(), "periodic".to_string()));
    let mut rep = ConvergenceReport { metadata: meta, ..Default::default() };
    for (cell, res) in cells.iter().zip(results) {
        let row = cell.row("nullity", args.eta);
        rep.push(match res {
            Ok(k) => ReportRow { value: Some(k as f64), ..row },
            Err(e) => failed(row, e),
        });
    }
    rep.finalize();
    Ok(rep)
}

pub fn spectrum(args: &RunArgs) -> Result<ConvergenceReport, CliError> {
    let d = Defaults { schemes: &[Scheme::Cdg, Scheme::Ldg, Scheme::Br2], switches: &[SwitchArg::Consistent], p: &[1], n: &[2, 4, 8] };
    let cells = cells(args, d)?;
    let results = pool::map(&cells, pool::worker_count(), |c| -> cdg_core::Result<f64> {
        let mesh = structured(c.n, args.periodic)?;
        let basis = NodalBasis::new(c.p)?;
        let sw = SwitchAssignment::new(&mesh, c.switch)?;
        let a = assemble(&mesh, &basis, &sw, &Problem::laplace(), &c.config(args.eta))?.matrix;
        let m = MassMatrix::new(&mesh, &basis);
        let rho = spectral_radius_lanczos(&a, &m, Lanczos::default())?;
        Ok(rho * (mesh.h() / c.p as f64).powi(2))
    });
    let mut meta = metadata("spectrum", args);
    meta.retain(|(k, _)| k != "exact");
    let mut rep = ConvergenceReport { metadata: meta, ..Default::default() };
    for (cell, res) in cells.iter().zip(results) {
        let row = cell.row("spectral_radius_scaled", args.eta);
        rep.push(match res {
            Ok(v) => ReportRow { value: Some(v), ..row },
            Err(e) => failed(row, e),
        });
    }
    rep.finalize();
    Ok(rep)
}

pub fn memory(args: &RunArgs) -> Result<ConvergenceReport, CliError> {
    let ps = or_default(&args.p, &[1, 2, 3, 4, 5]);
    let mut rep = ConvergenceReport {
        metadata: vec![("command".into(), "memory".into()), ("alpha".into(), "d - 1".into())],
        ..Default::default()
    };
    for d in 1..=3 {
        for &p in &ps {
            let m = memory_counts(d, p, d - 1)?;
            for (scheme, v) in [("CDG", m.cdg), ("LDG", m.ldg), ("BR2", m.br2)] {
                let mut r = ReportRow::new(scheme, "", format!("nnz_per_element_d{d}"));
                r.p = Some(p);
                r.value = Some(v as f64);
                rep.push(r);
            }
        }
    }
    rep.finalize();
    Ok(rep)
}

pub fn sparsity(args: &SparsityArgs) -> Result<ConvergenceReport, CliError> {
    let mesh = match &args.mesh {
        Some(path) => {
            let text = std::fs::read_to_string(path).map_err(|source| CliError::Io { path: path.display().to_string(), source })?;
            Mesh::from_json(&text)?
        }
        None => {
            if args.n == 0 {
                return Err(CliError::Usage("--n must be >= 1 (empty mesh)".into()));
            }
            structured(args.n, args.periodic)?
        }
    };
    let basis = NodalBasis::new(args.p)?;
    let strategy: SwitchStrategy = args.switch.into();
    let sw = SwitchAssignment::new(&mesh, strategy)?;
    let schemes = or_default(&args.scheme, &Scheme::ALL);
    let mut rep = ConvergenceReport {
        metadata: vec![
            ("command".into(), "sparsity".into()),
            ("elements".into(), mesh.num_elements().to_string()),
            ("dofs".into(), (mesh.num_elements() * basis.dofs()).to_string()),
        ],
        ..Default::default()
    };
    for scheme in schemes {
        let pattern = structural_pattern(&mesh, &basis, &sw, scheme);
        let census = sparsity_census(&pattern, &mesh, &basis);
        let neighbors = |a: usize, b: usize| {
            mesh.element_faces(a).iter().any(|f| match f {
                cdg_core::mesh::FaceRef::Interior(id) => {
                    let f = &mesh.interior_faces[*id];
                    (f.elem_plus == a && f.elem_minus == b) || (f.elem_plus == b && f.elem_minus == a)
                }
                _ => false,
            })
        };
        let noncompact: Vec<(usize, usize)> =
            pattern.coupled_elements().into_iter().filter(|&(a, b)| a < b && !neighbors(a, b)).collect();
        let mut push = |metric: &str, v: f64| {
            let mut r = ReportRow::new(scheme.to_string(), strategy.to_string(), metric);
            r.p = Some(args.p);
            r.n = if args.mesh.is_none() { Some(args.n) } else { None };
            r.value = Some(v);
            rep.rows.push(r);
        };
        push("dofs", pattern.dim() as f64);
        push("nnz", pattern.nnz() as f64);
        push("noncompact_pairs", noncompact.len() as f64);
        if let (Some(lo), Some(hi)) = (census.interior_counts().iter().min(), census.interior_counts().iter().max()) {
            push("interior_nnz_min", *lo as f64);
            push("interior_nnz_max", *hi as f64);
        }
        if let Some(a) = census.mean_alpha() {
            push("alpha_mean", a);
        }
        if !noncompact.is_empty() {
            let list: Vec<String> = noncompact.iter().map(|(a, b)| format!("{a}-{b}")).collect();
            rep.metadata.push((format!("noncompact_pairs_{scheme}"), list.join(" ")));
        }
        if let Some(tpl) = &args.pbm {
            write_file(&tpl.replace("{scheme}", &scheme.to_string()), &pattern.to_pbm())?;
        }
        if let Some(tpl) = &args.matrix {
            let cfg = SchemeConfig::new(scheme).with_c11(args.c11_interior, args.c11_boundary).with_eta(args.eta);
            let a = assemble(&mesh, &basis, &sw, &Problem::laplace(), &cfg)?.matrix;
            write_file(&tpl.replace("{scheme}", &scheme.to_string()), &a.to_coordinate_text())?;
        }
    }
    rep.finalize();
    Ok(rep)
}

pub fn write_file(path: &str, text: &str) -> Result<(), CliError> {
    std::fs::write(path, text).map_err(|source| CliError::Io { path: path.to_string(), source })
}
