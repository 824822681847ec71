//! Block-sparse storage, envelope Cholesky, null-space dimension, element mass
//! matrices and the generalized spectral radius.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use nalgebra::{DMatrix, DVector};
use serde::{Deserialize, Serialize};

use crate::basis::NodalBasis;
use crate::error::{Error, Result};
use crate::mesh::{FaceRef, Mesh, SwitchAssignment};

/// Block CSR matrix with dense `S x S` blocks, one block row per element.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SystemMatrix {
    pub num_elements: usize,
    pub block_size: usize,
    row_ptr: Vec<usize>,
    col_idx: Vec<usize>,
    /// Row-major block values, `S * S` per stored block.
    values: Vec<f64>,
}

impl SystemMatrix {
    pub fn from_block_map(
        num_elements: usize,
        block_size: usize,
        blocks: BTreeMap<(usize, usize), DMatrix<f64>>,
    ) -> Self {
        let s = block_size;
        let mut row_ptr = vec![0; num_elements + 1];
        let mut col_idx = Vec::with_capacity(blocks.len());
        let mut values = Vec::with_capacity(blocks.len() * s * s);
        for ((r, c), b) in blocks {
            row_ptr[r + 1] += 1;
            col_idx.push(c);
            for i in 0..s {
                for j in 0..s {
                    values.push(b[(i, j)]);
                }
            }
        }
        for r in 0..num_elements {
            row_ptr[r + 1] += row_ptr[r];
        }
        SystemMatrix { num_elements, block_size, row_ptr, col_idx, values }
    }

    /// Block-diagonal matrix from one block per element.
    pub fn block_diagonal(blocks: &[DMatrix<f64>]) -> Self {
        let s = blocks.first().map_or(0, |b| b.nrows());
        let map = blocks.iter().enumerate().map(|(e, b)| ((e, e), b.clone())).collect();
        Self::from_block_map(blocks.len(), s, map)
    }

    pub fn dim(&self) -> usize {
        self.num_elements * self.block_size
    }

    pub fn num_blocks(&self) -> usize {
        self.col_idx.len()
    }

    /// Stored blocks as (row element, column element, row-major values).
    pub fn blocks(&self) -> impl Iterator<Item = (usize, usize, &[f64])> + '_ {
        let ss = self.block_size * self.block_size;
        (0..self.num_elements).flat_map(move |r| {
            (self.row_ptr[r]..self.row_ptr[r + 1])
                .map(move |k| (r, self.col_idx[k], &self.values[k * ss..(k + 1) * ss]))
        })
    }

    pub fn block(&self, r: usize, c: usize) -> Option<DMatrix<f64>> {
        let s = self.block_size;
        let k = (self.row_ptr[r]..self.row_ptr[r + 1]).find(|&k| self.col_idx[k] == c)?;
        Some(DMatrix::from_row_slice(s, s, &self.values[k * s * s..(k + 1) * s * s]))
    }

    pub fn get(&self, i: usize, j: usize) -> f64 {
        let s = self.block_size;
        let (r, c) = (i / s, j / s);
        (self.row_ptr[r]..self.row_ptr[r + 1])
            .find(|&k| self.col_idx[k] == c)
            .map_or(0.0, |k| self.values[k * s * s + (i % s) * s + j % s])
    }

    pub fn matvec(&self, x: &[f64]) -> Vec<f64> {
        let s = self.block_size;
        assert_eq!(x.len(), self.dim(), "matvec dimension");
        let mut y = vec![0.0; self.dim()];
        for (r, c, b) in self.blocks() {
            let xc = &x[c * s..(c + 1) * s];
            for (i, yi) in y[r * s..(r + 1) * s].iter_mut().enumerate() {
                let row = &b[i * s..(i + 1) * s];
                *yi += row.iter().zip(xc).map(|(a, b)| a * b).sum::<f64>();
            }
        }
        y
    }

    pub fn to_dense(&self) -> DMatrix<f64> {
        let s = self.block_size;
        let mut d = DMatrix::zeros(self.dim(), self.dim());
        for (r, c, b) in self.blocks() {
            for i in 0..s {
                for j in 0..s {
                    d[(r * s + i, c * s + j)] += b[i * s + j];
                }
            }
        }
        d
    }

    /// Maximum absolute row sum.
    pub fn norm_inf(&self) -> f64 {
        let s = self.block_size;
        let mut rows = vec![0.0; self.dim()];
        for (r, _, b) in self.blocks() {
            for i in 0..s {
                rows[r * s + i] += b[i * s..(i + 1) * s].iter().map(|v| v.abs()).sum::<f64>();
            }
        }
        rows.into_iter().fold(0.0, f64::max)
    }

    /// `||A - A^T||_inf`.
    pub fn asymmetry(&self) -> f64 {
        let s = self.block_size;
        let mut rows = vec![0.0; self.dim()];
        for (r, c, b) in self.blocks() {
            let bt = self.block(c, r);
            for i in 0..s {
                for j in 0..s {
                    let t = bt.as_ref().map_or(0.0, |m| m[(j, i)]);
                    rows[r * s + i] += (b[i * s + j] - t).abs();
                }
            }
        }
        rows.into_iter().fold(0.0, f64::max)
    }

    pub fn is_symmetric(&self, rel_tol: f64) -> bool {
        self.asymmetry() <= rel_tol * self.norm_inf()
    }

    /// `self + a * other`.
    pub fn add_scaled(&self, a: f64, other: &SystemMatrix) -> SystemMatrix {
        assert_eq!(self.block_size, other.block_size);
        let s = self.block_size;
        let mut map: BTreeMap<(usize, usize), DMatrix<f64>> = BTreeMap::new();
        for (m, w) in [(self, 1.0), (other, a)] {
            for (r, c, b) in m.blocks() {
                let blk = DMatrix::from_row_slice(s, s, b) * w;
                map.entry((r, c)).and_modify(|x| *x += &blk).or_insert(blk);
            }
        }
        SystemMatrix::from_block_map(self.num_elements, s, map)
    }

    /// Nonzero entries as `(row, col, value)` in row-major order.
    pub fn entries(&self) -> Vec<(usize, usize, f64)> {
        let s = self.block_size;
        let mut out = Vec::new();
        for r in 0..self.num_elements {
            for i in 0..s {
                for k in self.row_ptr[r]..self.row_ptr[r + 1] {
                    let c = self.col_idx[k];
                    for j in 0..s {
                        let v = self.values[k * s * s + i * s + j];
                        if v != 0.0 {
                            out.push((r * s + i, c * s + j, v));
                        }
                    }
                }
            }
        }
        out
    }

    /// Coordinate text: one `row col value` line per nonzero, 0-based,
    /// values with 17 significant digits.
    pub fn to_coordinate_text(&self) -> String {
        let mut out = String::new();
        for (i, j, v) in self.entries() {
            let _ = writeln!(out, "{i} {j} {v:.16e}");
        }
        out
    }

    /// PBM image of entries with `|a_ij| > rel_tol * ||A||_inf`.
    pub fn to_pbm(&self, rel_tol: f64) -> String {
        let n = self.dim();
        let cut = rel_tol * self.norm_inf();
        let mut bits = vec![false; n * n];
        for (i, j, v) in self.entries() {
            if v.abs() > cut {
                bits[i * n + j] = true;
            }
        }
        let mut out = format!("P1\n{n} {n}\n");
        for row in bits.chunks(n.max(1)) {
            let line: Vec<&str> = row.iter().map(|b| if *b { "1" } else { "0" }).collect();
            out.push_str(&line.join(" "));
            out.push('\n');
        }
        out
    }
}

/// Block-diagonal element mass matrix.
#[derive(Debug, Clone)]
pub struct MassMatrix {
    pub blocks: Vec<DMatrix<f64>>,
    inverses: Vec<DMatrix<f64>>,
}

impl MassMatrix {
    pub fn new(mesh: &Mesh, basis: &NodalBasis) -> Self {
        let blocks: Vec<DMatrix<f64>> = (0..mesh.num_elements())
            .map(|e| &basis.ref_mass * mesh.geometry(e).det.abs())
            .collect();
        Self::from_blocks(blocks)
    }

    pub fn from_blocks(blocks: Vec<DMatrix<f64>>) -> Self {
        let inverses = blocks
            .iter()
            .map(|b| b.clone().cholesky().expect("element mass matrix is SPD").inverse())
            .collect();
        MassMatrix { blocks, inverses }
    }

    pub fn block_size(&self) -> usize {
        self.blocks.first().map_or(0, |b| b.nrows())
    }

    pub fn apply(&self, x: &[f64]) -> Vec<f64> {
        self.apply_blocks(&self.blocks, x)
    }

    pub fn solve(&self, x: &[f64]) -> Vec<f64> {
        self.apply_blocks(&self.inverses, x)
    }

    fn apply_blocks(&self, blocks: &[DMatrix<f64>], x: &[f64]) -> Vec<f64> {
        let s = self.block_size();
        let mut y = Vec::with_capacity(x.len());
        for (e, b) in blocks.iter().enumerate() {
            y.extend((b * DVector::from_column_slice(&x[e * s..(e + 1) * s])).iter());
        }
        y
    }

    pub fn to_system(&self) -> SystemMatrix {
        SystemMatrix::block_diagonal(&self.blocks)
    }
}

/// Envelope (profile) Cholesky factor `A = L L^T` in the natural ordering.
#[derive(Debug, Clone)]
pub struct EnvelopeCholesky {
    first: Vec<usize>,
    start: Vec<usize>,
    data: Vec<f64>,
}

impl EnvelopeCholesky {
    pub fn factor(a: &SystemMatrix) -> Result<Self> {
        let n = a.dim();
        let s = a.block_size;
        // Only the lower triangle is read; rows start at their first nonzero.
        let mut first: Vec<usize> = (0..n).collect();
        for (r, c, b) in a.blocks() {
            if c > r {
                continue;
            }
            for i in 0..s {
                if let Some(j) = (0..s).find(|&j| b[i * s + j] != 0.0) {
                    let f = &mut first[r * s + i];
                    *f = (*f).min(c * s + j);
                }
            }
        }
        let mut start = vec![0usize; n + 1];
        for i in 0..n {
            start[i + 1] = start[i] + (i - first[i] + 1);
        }
        let mut data = vec![0.0; start[n]];
        for (r, c, b) in a.blocks() {
            if c > r {
                continue;
            }
            for i in 0..s {
                let gi = r * s + i;
                for j in 0..s {
                    let gj = c * s + j;
                    if gj <= gi {
                        data[start[gi] + gj - first[gi]] += b[i * s + j];
                    }
                }
            }
        }
        for i in 0..n {
            let fi = first[i];
            let (done, rest) = data.split_at_mut(start[i]);
            let row_i = &mut rest[..i - fi + 1];
            for j in fi..i {
                let fj = first[j];
                let lo = fi.max(fj);
                let row_j = &done[start[j]..start[j] + (j - fj + 1)];
                let dot: f64 = row_i[lo - fi..j - fi]
                    .iter()
                    .zip(&row_j[lo - fj..j - fj])
                    .map(|(x, y)| x * y)
                    .sum();
                row_i[j - fi] = (row_i[j - fi] - dot) / row_j[j - fj];
            }
            let diag = row_i[i - fi] - row_i[..i - fi].iter().map(|x| x * x).sum::<f64>();
            if !(diag > 0.0) {
                return Err(Error::Factorization { pivot: i, value: diag });
            }
            row_i[i - fi] = diag.sqrt();
        }
        Ok(EnvelopeCholesky { first, start, data })
    }

    /// Number of stored factor entries.
    pub fn envelope_size(&self) -> usize {
        self.data.len()
    }

    pub fn solve(&self, b: &[f64]) -> Vec<f64> {
        let n = self.first.len();
        let mut y = b.to_vec();
        for i in 0..n {
            let fi = self.first[i];
            let row = &self.data[self.start[i]..self.start[i + 1]];
            let dot: f64 = row[..i - fi].iter().zip(&y[fi..i]).map(|(a, b)| a * b).sum();
            y[i] = (y[i] - dot) / row[i - fi];
        }
        for i in (0..n).rev() {
            let fi = self.first[i];
            let row = &self.data[self.start[i]..self.start[i + 1]];
            y[i] /= row[i - fi];
            let yi = y[i];
            for (k, l) in row[..i - fi].iter().enumerate() {
                y[fi + k] -= l * yi;
            }
        }
        y
    }
}

/// Solves `A x = b` for symmetric positive definite `A`.
pub fn solve_spd(a: &SystemMatrix, b: &[f64]) -> Result<Vec<f64>> {
    if b.len() != a.dim() {
        return Err(Error::DimensionMismatch { expected: a.dim(), got: b.len() });
    }
    Ok(EnvelopeCholesky::factor(a)?.solve(b))
}

/// `||A x - b||_2`.
pub fn residual_norm(a: &SystemMatrix, x: &[f64], b: &[f64]) -> f64 {
    a.matvec(x).iter().zip(b).map(|(y, b)| (y - b).powi(2)).sum::<f64>().sqrt()
}

/// Number of eigenvalues of the symmetric matrix `A` with magnitude at most
/// `rel_tol` times the largest one (singular values of a symmetric matrix).
pub fn nullspace_dim(a: &SystemMatrix, rel_tol: f64) -> usize {
    let ev = symmetric_eigenvalues(a);
    let max = ev.iter().fold(0.0f64, |m, v| m.max(v.abs()));
    ev.iter().filter(|v| v.abs() <= rel_tol * max).count()
}

/// Eigenvalues of the symmetrized dense matrix, ascending.
pub fn symmetric_eigenvalues(a: &SystemMatrix) -> Vec<f64> {
    let d = a.to_dense();
    let sym = (&d + d.transpose()) * 0.5;
    let mut ev: Vec<f64> = sym.symmetric_eigenvalues().iter().copied().collect();
    ev.sort_by(|x, y| x.total_cmp(y));
    ev
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PowerIteration {
    pub rel_tol: f64,
    pub max_iterations: usize,
}

impl Default for PowerIteration {
    fn default() -> Self {
        PowerIteration { rel_tol: 1e-8, max_iterations: 200_000 }
    }
}

/// `|lambda_max|` of `M^-1 A` by power iteration with a Rayleigh-quotient
/// estimate in the `M` inner product.
///
/// The quotient converges geometrically, so a small step alone says little
/// when the top eigenvalues cluster. The stop uses the Aitken tail estimate
/// `delta r / (1 - r)`, `r` being the ratio of successive steps, and accepts
/// once that is below `rel_tol |rho|` (or the steps hit rounding level).
pub fn spectral_radius_generalized(a: &SystemMatrix, m: &MassMatrix, opts: PowerIteration) -> Result<f64> {
    let n = a.dim();
    if m.block_size() * m.blocks.len() != n {
        return Err(Error::DimensionMismatch { expected: n, got: m.block_size() * m.blocks.len() });
    }
    let m_norm = |x: &[f64]| x.iter().zip(&m.apply(x)).map(|(a, b)| a * b).sum::<f64>().sqrt();
    // Deterministic start vector with components in every mode.
    let mut x: Vec<f64> = (0..n).map(|i| 1.0 + 0.5 * ((i as f64 + 1.0) * 0.7548776662).sin()).collect();
    let nrm = m_norm(&x);
    x.iter_mut().for_each(|v| *v /= nrm);
    let mut estimate = 0.0;
    let mut last_step = f64::NAN;
    for it in 1..=opts.max_iterations {
        let ax = a.matvec(&x);
        let rq = x.iter().zip(&ax).map(|(a, b)| a * b).sum::<f64>();
        let mut y = m.solve(&ax);
        let ny = m_norm(&y);
        if ny == 0.0 {
            return Ok(0.0);
        }
        y.iter_mut().for_each(|v| *v /= ny);
        x = y;
        if it > 1 {
            let step = (rq - estimate).abs();
            let ratio = step / last_step;
            let tail = if ratio > 0.0 && ratio < 1.0 { step * ratio / (1.0 - ratio) } else { f64::INFINITY };
            if tail <= opts.rel_tol * rq.abs() || step <= 4.0 * f64::EPSILON * rq.abs() {
                return Ok(rq.abs());
            }
            last_step = step;
        }
        estimate = rq;
    }
    Err(Error::NoConvergence { iterations: opts.max_iterations, estimate: estimate.abs() })
}

/// Options for [`spectral_radius_lanczos`].
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Lanczos {
    pub rel_tol: f64,
    /// Krylov dimension per cycle.
    pub basis_size: usize,
    pub max_restarts: usize,
}

impl Default for Lanczos {
    fn default() -> Self {
        Lanczos { rel_tol: 1e-8, basis_size: 60, max_restarts: 500 }
    }
}

/// `|lambda_max|` of `M^-1 A` by explicitly restarted Lanczos in the `M`
/// inner product, with full reorthogonalization.
///
/// Each cycle restarts from the extreme Ritz vector. A Ritz pair with residual
/// `res` is accepted once `min(res, res^2 / gap)` is below `rel_tol |theta|`,
/// `gap` being the distance to the next Ritz value.
pub fn spectral_radius_lanczos(a: &SystemMatrix, m: &MassMatrix, opts: Lanczos) -> Result<f64> {
    let n = a.dim();
    if m.block_size() * m.blocks.len() != n {
        return Err(Error::DimensionMismatch { expected: n, got: m.block_size() * m.blocks.len() });
    }
    let dot = |x: &[f64], y: &[f64]| x.iter().zip(y).map(|(a, b)| a * b).sum::<f64>();
    let k_max = opts.basis_size.clamp(2, n.max(2)).min(n);
    let mut v: Vec<f64> = (0..n).map(|i| 1.0 + 0.5 * ((i as f64 + 1.0) * 0.7548776662).sin()).collect();
    let mut theta = 0.0;
    for _ in 0..opts.max_restarts.max(1) {
        let mut q: Vec<Vec<f64>> = Vec::with_capacity(k_max);
        let mut mq: Vec<Vec<f64>> = Vec::with_capacity(k_max);
        let mut alpha = Vec::with_capacity(k_max);
        let mut beta: Vec<f64> = Vec::with_capacity(k_max);
        let mv = m.apply(&v);
        let nrm = dot(&v, &mv).sqrt();
        if nrm == 0.0 {
            return Ok(0.0);
        }
        q.push(v.iter().map(|x| x / nrm).collect());
        mq.push(mv.iter().map(|x| x / nrm).collect());
        let mut invariant = false;
        loop {
            let j = q.len() - 1;
            let aq = a.matvec(&q[j]);
            alpha.push(dot(&aq, &q[j]));
            let mut w = m.solve(&aq);
            for _ in 0..2 {
                for (qi, mqi) in q.iter().zip(&mq) {
                    let c = dot(&w, mqi);
                    w.iter_mut().zip(qi).for_each(|(x, y)| *x -= c * y);
                }
            }
            let mw = m.apply(&w);
            let b = dot(&w, &mw).max(0.0).sqrt();
            beta.push(b);
            if b <= 1e-13 * alpha.iter().fold(0.0f64, |s, x| s.max(x.abs())) {
                invariant = true;
                break;
            }
            if q.len() == k_max {
                break;
            }
            q.push(w.iter().map(|x| x / b).collect());
            mq.push(mw.iter().map(|x| x / b).collect());
        }
        let k = alpha.len();
        let mut t = DMatrix::<f64>::zeros(k, k);
        for i in 0..k {
            t[(i, i)] = alpha[i];
            if i + 1 < k {
                t[(i, i + 1)] = beta[i];
                t[(i + 1, i)] = beta[i];
            }
        }
        let eig = t.symmetric_eigen();
        let top = (0..k).max_by(|&i, &j| eig.eigenvalues[i].abs().total_cmp(&eig.eigenvalues[j].abs())).unwrap();
        theta = eig.eigenvalues[top];
        let s = eig.eigenvectors.column(top);
        let res = beta[k - 1] * s[k - 1].abs();
        let gap = (0..k)
            .filter(|&i| i != top)
            .map(|i| (eig.eigenvalues[i] - theta).abs())
            .fold(f64::INFINITY, f64::min);
        if invariant || res.min(res * res / gap) <= opts.rel_tol * theta.abs() {
            return Ok(theta.abs());
        }
        v = vec![0.0; n];
        for (i, qi) in q.iter().enumerate() {
            v.iter_mut().zip(qi).for_each(|(x, y)| *x += s[i] * y);
        }
    }
    Err(Error::NoConvergence { iterations: opts.max_restarts * k_max, estimate: theta.abs() })
}

/// The compact CDG storage: a dense `T x S x S` array of diagonal blocks plus
/// one `S x S_e` array per element face slot.
///
/// A slot whose element is the switch-1 side stores the columns of the
/// neighbor's face nodes; otherwise it stores the rows of the element's own
/// face nodes.
#[derive(Debug, Clone, PartialEq)]
pub struct CompactCdg {
    pub num_elements: usize,
    pub s: usize,
    pub s_e: usize,
    pub diagonal: Vec<f64>,
    pub off_diagonal: Vec<f64>,
    /// Per slot: neighbor element (or `None` on the boundary) and whether
    /// the slot stores columns.
    slots: Vec<Option<(usize, bool)>>,
    face_nodes: [Vec<usize>; 3],
    neighbor_face: Vec<usize>,
}

impl CompactCdg {
    /// Packs `a` into the compact layout, failing with the offending entry
    /// count if anything falls outside the footprint.
    pub fn pack(a: &SystemMatrix, mesh: &Mesh, basis: &NodalBasis, switches: &SwitchAssignment) -> Result<Self> {
        let (t, s, se) = (mesh.num_elements(), basis.dofs(), basis.face_dofs());
        let mut slots = vec![None; 3 * t];
        let mut neighbor_face = vec![0; 3 * t];
        for e in 0..t {
            for (k, fr) in mesh.element_faces(e).into_iter().enumerate() {
                if let FaceRef::Interior(id) = fr {
                    let f = &mesh.interior_faces[id];
                    let is_plus = f.elem_plus == e && f.local_face_plus == k;
                    let (nb, nk) = if is_plus {
                        (f.elem_minus, f.local_face_minus)
                    } else {
                        (f.elem_plus, f.local_face_plus)
                    };
                    if nb == e || (0..k).any(|j| slots[3 * e + j].is_some_and(|(x, _)| x == nb)) {
                        return Err(Error::InvalidMesh(format!(
                            "element {e} meets element {nb} on more than one face"
                        )));
                    }
                    slots[3 * e + k] = Some((nb, switches.switch_of(id, is_plus) == 1));
                    neighbor_face[3 * e + k] = nk;
                }
            }
        }
        let mut c = CompactCdg {
            num_elements: t,
            s,
            s_e: se,
            diagonal: vec![0.0; t * s * s],
            off_diagonal: vec![0.0; t * 3 * s * se],
            slots,
            face_nodes: basis.face_nodes.clone(),
            neighbor_face,
        };
        for (r, col, b) in a.blocks() {
            if r == col {
                c.diagonal[r * s * s..(r + 1) * s * s].copy_from_slice(b);
                continue;
            }
            let k = (0..3)
                .find(|&k| c.slots[3 * r + k].is_some_and(|(nb, _)| nb == col))
                .ok_or_else(|| Error::InvalidMesh(format!("block ({r}, {col}) couples non-neighbors")))?;
            let fp = c.footprint(r, k);
            let base = (3 * r + k) * s * se;
            let mut covered = vec![false; s * s];
            for (slot, (i, j)) in fp.iter().enumerate() {
                c.off_diagonal[base + slot] = b[i * s + j];
                covered[i * s + j] = true;
            }
            let outside = (0..s * s).filter(|&q| !covered[q] && b[q] != 0.0).count();
            if outside > 0 {
                return Err(Error::InvalidMesh(format!(
                    "block ({r}, {col}) has {outside} entries outside the compact footprint"
                )));
            }
        }
        Ok(c)
    }

    /// (row, col) positions of slot `k` of element `e`, in storage order.
    fn footprint(&self, e: usize, k: usize) -> Vec<(usize, usize)> {
        let (_, cols) = self.slots[3 * e + k].expect("interior slot");
        if cols {
            let nf = &self.face_nodes[self.neighbor_face[3 * e + k]];
            (0..self.s).flat_map(|i| nf.iter().map(move |&j| (i, j))).collect()
        } else {
            let own = &self.face_nodes[k];
            own.iter().flat_map(|&i| (0..self.s).map(move |j| (i, j))).collect()
        }
    }

    pub fn unpack(&self) -> SystemMatrix {
        let (s, se) = (self.s, self.s_e);
        let mut map = BTreeMap::new();
        for e in 0..self.num_elements {
            map.insert((e, e), DMatrix::from_row_slice(s, s, &self.diagonal[e * s * s..(e + 1) * s * s]));
            for k in 0..3 {
                let Some((nb, _)) = self.slots[3 * e + k] else { continue };
                let base = (3 * e + k) * s * se;
                let mut b = DMatrix::zeros(s, s);
                for (slot, (i, j)) in self.footprint(e, k).into_iter().enumerate() {
                    b[(i, j)] = self.off_diagonal[base + slot];
                }
                map.insert((e, nb), b);
            }
        }
        SystemMatrix::from_block_map(self.num_elements, s, map)
    }

    /// Stored values, diagonal and off-diagonal arrays together.
    pub fn storage_len(&self) -> usize {
        self.diagonal.len() + self.off_diagonal.len()
    }
}
