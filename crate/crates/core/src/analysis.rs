//! Error norms, convergence rates, memory formulas, sparsity census and reports.

use std::fmt::Write as _;

use nalgebra::DVector;
use serde::{Deserialize, Serialize};

use crate::basis::NodalBasis;
use crate::error::{Error, Result};
use crate::field::DGField;
use crate::forms::StructuralPattern;
use crate::mesh::Mesh;

/// `||u - u_h||_{L2}` with the data rule (exact to degree 2p + 4).
pub fn l2_error(mesh: &Mesh, basis: &NodalBasis, uh: &DGField, u: &dyn Fn(f64, f64) -> f64) -> f64 {
    let rule = &basis.data_rule;
    let mut sum = 0.0;
    for e in 0..mesh.num_elements() {
        let geo = mesh.geometry(e);
        let vals = &basis.data.values * DVector::from_column_slice(uh.element(e));
        for (q, (xi, w)) in rule.points.iter().zip(&rule.weights).enumerate() {
            let x = geo.map(*xi);
            sum += w * geo.det.abs() * (u(x[0], x[1]) - vals[q]).powi(2);
        }
    }
    sum.sqrt()
}

/// Broken H1 seminorm `(sum_K |u - u_h|_{1,K}^2)^{1/2}`.
pub fn h1_seminorm_error(
    mesh: &Mesh,
    basis: &NodalBasis,
    uh: &DGField,
    grad: &dyn Fn(f64, f64) -> [f64; 2],
) -> f64 {
    let rule = &basis.data_rule;
    let tab = &basis.data;
    let mut sum = 0.0;
    for e in 0..mesh.num_elements() {
        let geo = mesh.geometry(e);
        let c = DVector::from_column_slice(uh.element(e));
        let (dr, ds) = (&tab.dx * &c, &tab.dy * &c);
        for (q, (xi, w)) in rule.points.iter().zip(&rule.weights).enumerate() {
            let x = geo.map(*xi);
            let gh = geo.physical_gradient(dr[q], ds[q]);
            let g = grad(x[0], x[1]);
            sum += w * geo.det.abs() * ((g[0] - gh[0]).powi(2) + (g[1] - gh[1]).powi(2));
        }
    }
    sum.sqrt()
}

/// `log(e1/e2) / log(h1/h2)`; `None` when undefined.
pub fn convergence_rate(e1: f64, e2: f64, h1: f64, h2: f64) -> Option<f64> {
    if !(e1 > 0.0 && e2 > 0.0) || h1 == h2 || !(h1 > 0.0 && h2 > 0.0) {
        return None;
    }
    Some((e1 / e2).ln() / (h1 / h2).ln())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct MemoryCount {
    pub d: usize,
    pub p: usize,
    pub s: usize,
    pub s_e: usize,
    pub alpha: usize,
    pub cdg: usize,
    pub ldg: usize,
    pub br2: usize,
}

fn binomial(n: usize, k: usize) -> usize {
    (0..k).fold(1, |acc, i| acc * (n - i) / (i + 1))
}

/// Nonzeros per interior simplex element for the three schemes.
pub fn memory_counts(d: usize, p: usize, alpha: usize) -> Result<MemoryCount> {
    if !(1..=3).contains(&d) || p == 0 {
        return Err(Error::InvalidMemoryQuery { d, p });
    }
    let s = binomial(p + d, d);
    let s_e = binomial(p + d - 1, d - 1);
    let cdg = s * s + (d + 1) * s_e * s;
    Ok(MemoryCount {
        d,
        p,
        s,
        s_e,
        alpha,
        cdg,
        ldg: cdg + alpha * s_e * s_e,
        br2: s * s + (d + 1) * (2 * s - s_e) * s_e,
    })
}

/// Structural nonzeros per element row block.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SparsityCensus {
    pub per_element: Vec<usize>,
    /// Elements without boundary faces.
    pub interior: Vec<usize>,
    pub total: usize,
    /// Per interior element, `(nnz - S^2 - 3 S S_e) / S_e^2`: the number of
    /// face-sized couplings beyond the compact stencil.
    pub alpha: Vec<f64>,
}

impl SparsityCensus {
    pub fn interior_counts(&self) -> Vec<usize> {
        self.interior.iter().map(|&e| self.per_element[e]).collect()
    }

    pub fn mean_alpha(&self) -> Option<f64> {
        if self.alpha.is_empty() {
            return None;
        }
        Some(self.alpha.iter().sum::<f64>() / self.alpha.len() as f64)
    }
}

pub fn sparsity_census(pattern: &StructuralPattern, mesh: &Mesh, basis: &NodalBasis) -> SparsityCensus {
    let s = basis.dofs() as f64;
    let se = basis.face_dofs() as f64;
    let per_element: Vec<usize> = (0..mesh.num_elements()).map(|e| pattern.row_block_nnz(e)).collect();
    let interior: Vec<usize> = (0..mesh.num_elements()).filter(|&e| mesh.is_interior_element(e)).collect();
    let alpha = interior
        .iter()
        .map(|&e| (per_element[e] as f64 - s * s - 3.0 * s * se) / (se * se))
        .collect();
    SparsityCensus { total: pattern.nnz(), per_element, interior, alpha }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Ok,
    Failed,
}

/// One report cell: the fixed CSV schema `scheme,switch,p,n,c11,eta,metric,value,rate,status`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ReportRow {
    pub scheme: String,
    pub switch: String,
    pub p: Option<usize>,
    pub n: Option<usize>,
    pub c11: Option<f64>,
    pub eta: Option<f64>,
    pub metric: String,
    pub value: Option<f64>,
    pub rate: Option<f64>,
    pub status: Status,
    /// Diagnostic for failed cells; not part of the CSV.
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub message: Option<String>,
}

impl ReportRow {
    pub fn new(scheme: impl Into<String>, switch: impl Into<String>, metric: impl Into<String>) -> Self {
        ReportRow {
            scheme: scheme.into(),
            switch: switch.into(),
            p: None,
            n: None,
            c11: None,
            eta: None,
            metric: metric.into(),
            value: None,
            rate: None,
            status: Status::Ok,
            message: None,
        }
    }

    fn group_key(&self) -> (String, String, Option<usize>, String, String, String) {
        (
            self.scheme.clone(),
            self.switch.clone(),
            self.p,
            fmt_opt(self.c11),
            fmt_opt(self.eta),
            self.metric.clone(),
        )
    }
}

fn fmt_opt(v: Option<f64>) -> String {
    v.map(|x| format!("{x}")).unwrap_or_default()
}

/// Report rows plus metadata; serialized as CSV or JSON.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct ConvergenceReport {
    pub rows: Vec<ReportRow>,
    pub metadata: Vec<(String, String)>,
}

pub const CSV_HEADER: &str = "scheme,switch,p,n,c11,eta,metric,value,rate,status";

impl ConvergenceReport {
    pub fn push(&mut self, row: ReportRow) {
        self.rows.push(row);
    }

    /// Sorts rows in the canonical order and fills each rate from the row with
    /// the next coarser mesh in the same group (the last one uses the two
    /// finest meshes).
    pub fn finalize(&mut self) {
        self.rows.sort_by(|a, b| {
            a.group_key()
                .cmp(&b.group_key())
                .then(a.n.cmp(&b.n))
                .then(a.metric.cmp(&b.metric))
        });
        for i in 0..self.rows.len() {
            self.rows[i].rate = None;
            if i == 0 || !self.rows[i].metric.starts_with("error") {
                continue;
            }
            let (prev, cur) = (&self.rows[i - 1], &self.rows[i]);
            if prev.group_key() != cur.group_key() {
                continue;
            }
            if let (Some(n1), Some(n2), Some(e1), Some(e2)) = (prev.n, cur.n, prev.value, cur.value) {
                self.rows[i].rate = convergence_rate(e1, e2, 1.0 / n1 as f64, 1.0 / n2 as f64);
            }
        }
    }

    pub fn failures(&self) -> usize {
        self.rows.iter().filter(|r| r.status == Status::Failed).count()
    }

    pub fn to_csv(&self) -> String {
        let mut out = String::from(CSV_HEADER);
        out.push('\n');
        for r in &self.rows {
            let _ = writeln!(
                out,
                "{},{},{},{},{},{},{},{},{},{}",
                r.scheme,
                r.switch,
                r.p.map(|v| v.to_string()).unwrap_or_default(),
                r.n.map(|v| v.to_string()).unwrap_or_default(),
                fmt_opt(r.c11),
                fmt_opt(r.eta),
                r.metric,
                r.value.map(format_value).unwrap_or_default(),
                r.rate.map(|v| format!("{v:.1}")).unwrap_or_default(),
                match r.status {
                    Status::Ok => "ok",
                    Status::Failed => "failed",
                }
            );
        }
        out
    }

    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(self)?)
    }
}

/// Integers print as integers; everything else in scientific notation.
fn format_value(v: f64) -> String {
    if v.fract() == 0.0 && v.abs() < 1e15 {
        format!("{}", v as i64)
    } else {
        format!("{v:.6e}")
    }
}
