//! Binary linear block codes defined by sparse parity-check matrices.
//!
//! An [`LdpcCode`] owns its parity-check matrix `H`, a systematic generator
//! `G` derived from `H` by Gaussian elimination, and a flattened Tanner graph
//! used by the sum-product decoder. Codes are immutable after construction and
//! are shared across worker threads behind an `Arc`.

pub mod alist;
pub mod construct;
mod decoder;
pub mod gf2;
mod repetition;

use std::collections::BTreeSet;

use sha2::{Digest, Sha256};

use crate::{Error, Result};
use gf2::BitMatrix;

pub use construct::RandomCodeParams;
pub use decoder::{decode_bp, decode_bp_with, BpOptions, DecodeOutcome, LLR_CAP};
pub use repetition::RepetitionCode;

/// Sparse parity-check matrix: `rows[r]` lists the (sorted, distinct) columns
/// holding a one in check `r`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ParityCheck {
    n_cols: usize,
    rows: Vec<Vec<usize>>,
}

impl ParityCheck {
    /// Builds from `(row, col)` positions of ones. Duplicate positions and
    /// out-of-range indices are rejected.
    pub fn from_entries(n_rows: usize, n_cols: usize, entries: &[(usize, usize)]) -> Result<Self> {
        let mut sets = vec![BTreeSet::new(); n_rows];
        for &(r, c) in entries {
            if r >= n_rows || c >= n_cols {
                return Err(Error::Code(format!(
                    "entry ({r}, {c}) outside {n_rows}x{n_cols}"
                )));
            }
            if !sets[r].insert(c) {
                return Err(Error::Code(format!("duplicate entry ({r}, {c})")));
            }
        }
        Ok(ParityCheck {
            n_cols,
            rows: sets.into_iter().map(|s| s.into_iter().collect()).collect(),
        })
    }

    /// Builds from rows written as strings of `0`/`1`.
    pub fn from_dense_rows(rows: &[&str]) -> Result<Self> {
        let n_cols = rows.first().map_or(0, |r| r.len());
        let mut entries = Vec::new();
        for (r, s) in rows.iter().enumerate() {
            if s.len() != n_cols {
                return Err(Error::Shape {
                    expected: n_cols,
                    got: s.len(),
                });
            }
            for (c, ch) in s.chars().enumerate() {
                match ch {
                    '1' => entries.push((r, c)),
                    '0' => {}
                    other => return Err(Error::Code(format!("unexpected character {other:?}"))),
                }
            }
        }
        Self::from_entries(rows.len(), n_cols, &entries)
    }

    pub fn n_rows(&self) -> usize {
        self.rows.len()
    }

    pub fn n_cols(&self) -> usize {
        self.n_cols
    }

    pub fn row(&self, r: usize) -> &[usize] {
        &self.rows[r]
    }

    /// All `(row, col)` positions of ones in row-major order.
    pub fn entries(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.rows
            .iter()
            .enumerate()
            .flat_map(|(r, cols)| cols.iter().map(move |&c| (r, c)))
    }

    pub fn n_edges(&self) -> usize {
        self.rows.iter().map(Vec::len).sum()
    }

    /// Column adjacency: for each column, the checks it participates in.
    pub fn columns(&self) -> Vec<Vec<usize>> {
        let mut cols = vec![Vec::new(); self.n_cols];
        for (r, c) in self.entries() {
            cols[c].push(r);
        }
        cols
    }

    pub fn to_dense(&self) -> BitMatrix {
        let mut m = BitMatrix::zeros(self.n_rows(), self.n_cols);
        for (r, c) in self.entries() {
            m.set(r, c, true);
        }
        m
    }

    pub fn rank(&self) -> usize {
        self.to_dense().rank()
    }

    /// `H · v` over GF(2).
    pub fn syndrome(&self, v: &[u8]) -> Vec<u8> {
        self.rows
            .iter()
            .map(|cols| cols.iter().fold(0u8, |acc, &c| acc ^ (v[c] & 1)))
            .collect()
    }

    pub fn is_codeword(&self, v: &[u8]) -> bool {
        v.len() == self.n_cols && self.syndrome(v).iter().all(|&s| s == 0)
    }

    /// SHA-256 over the dimensions and the sorted positions, hex encoded.
    pub fn fingerprint(&self) -> String {
        let mut hasher = Sha256::new();
        hasher.update(format!("{} {}\n", self.n_cols, self.n_rows()));
        for (r, c) in self.entries() {
            hasher.update(format!("{r} {c}\n"));
        }
        hex::encode(hasher.finalize())
    }
}

/// Systematic generator matrix derived from `H`.
#[derive(Clone, Debug)]
pub struct Generator {
    /// `k × n` matrix; row `j` is the codeword produced by a single one at
    /// info position `j`.
    pub rows: BitMatrix,
    /// Code-bit index at which info bit `j` appears verbatim in every
    /// codeword. These are the non-pivot columns of the row-reduced `H`, in
    /// increasing order.
    pub info_positions: Vec<usize>,
}

/// Derives a systematic generator from `H` by Gaussian elimination with
/// column pivoting.
///
/// After row reduction, the pivot columns carry parity bits and the remaining
/// `k` columns carry info bits. Parity bit `p_i` equals the sum of the free
/// columns selected by row `i` of the reduced matrix.
pub fn derive_generator(h: &ParityCheck, k_info: usize) -> Result<Generator> {
    let n = h.n_cols();
    if k_info == 0 || k_info >= n {
        return Err(Error::Code(format!(
            "k_info = {k_info} must lie strictly between 0 and n = {n}"
        )));
    }
    let mut reduced = h.to_dense();
    let pivots = reduced.rref();
    let expected = n - k_info;
    if pivots.len() != expected {
        return Err(Error::RankDeficient {
            expected,
            found: pivots.len(),
        });
    }
    let mut is_pivot = vec![false; n];
    for &p in &pivots {
        is_pivot[p] = true;
    }
    let info_positions: Vec<usize> = (0..n).filter(|&c| !is_pivot[c]).collect();

    let mut rows = BitMatrix::zeros(k_info, n);
    for (j, &f) in info_positions.iter().enumerate() {
        rows.set(j, f, true);
        for (i, &p) in pivots.iter().enumerate() {
            if reduced.get(i, f) {
                rows.set(j, p, true);
            }
        }
    }
    Ok(Generator {
        rows,
        info_positions,
    })
}

/// Flattened Tanner graph. Edges are numbered check-major: the edges of
/// check `c` are `check_offsets[c]..check_offsets[c + 1]`.
#[derive(Clone, Debug)]
pub(crate) struct TannerGraph {
    pub check_offsets: Vec<usize>,
    pub edge_var: Vec<usize>,
    pub var_offsets: Vec<usize>,
    pub var_edges: Vec<usize>,
    pub max_check_degree: usize,
}

impl TannerGraph {
    fn new(h: &ParityCheck) -> Self {
        let mut check_offsets = vec![0];
        let mut edge_var = Vec::with_capacity(h.n_edges());
        for r in 0..h.n_rows() {
            edge_var.extend_from_slice(h.row(r));
            check_offsets.push(edge_var.len());
        }
        let mut per_var = vec![Vec::new(); h.n_cols()];
        for (e, &v) in edge_var.iter().enumerate() {
            per_var[v].push(e);
        }
        let mut var_offsets = vec![0];
        let mut var_edges = Vec::with_capacity(edge_var.len());
        for edges in per_var {
            var_edges.extend(edges);
            var_offsets.push(var_edges.len());
        }
        let max_check_degree = (0..h.n_rows()).map(|r| h.row(r).len()).max().unwrap_or(0);
        TannerGraph {
            check_offsets,
            edge_var,
            var_offsets,
            var_edges,
            max_check_degree,
        }
    }
}

#[derive(Clone, Debug)]
pub struct LdpcCode {
    h: ParityCheck,
    generator: Generator,
    graph: TannerGraph,
}

impl LdpcCode {
    /// Builds a code with a prescribed dimension; `H` must have rank
    /// `n - k_info`.
    pub fn new(h: ParityCheck, k_info: usize) -> Result<Self> {
        let generator = derive_generator(&h, k_info)?;
        let graph = TannerGraph::new(&h);
        Ok(LdpcCode {
            h,
            generator,
            graph,
        })
    }

    /// Builds a code whose dimension is `n - rank(H)`, tolerating redundant
    /// checks (common in externally supplied matrices).
    pub fn from_parity_check(h: ParityCheck) -> Result<Self> {
        let rank = h.rank();
        Self::new(h.clone(), h.n_cols().saturating_sub(rank))
    }

    /// Seeded pseudo-random code with full-rank `H`; see [`construct`].
    pub fn generate(params: &RandomCodeParams) -> Result<Self> {
        let h = construct::generate_full_rank(params)?;
        let k = params.n - params.m;
        Self::new(h, k)
    }

    pub fn from_alist(text: &str) -> Result<Self> {
        Self::from_parity_check(alist::parse(text)?)
    }

    pub fn n_code(&self) -> usize {
        self.h.n_cols()
    }

    pub fn k_info(&self) -> usize {
        self.generator.info_positions.len()
    }

    pub fn rate(&self) -> f64 {
        self.k_info() as f64 / self.n_code() as f64
    }

    pub fn parity_check(&self) -> &ParityCheck {
        &self.h
    }

    pub fn generator(&self) -> &Generator {
        &self.generator
    }

    pub fn info_positions(&self) -> &[usize] {
        &self.generator.info_positions
    }

    pub(crate) fn graph(&self) -> &TannerGraph {
        &self.graph
    }

    /// `v_m = Σ_k g_mk c_k` over GF(2).
    pub fn encode(&self, info: &[u8]) -> Result<Vec<u8>> {
        if info.len() != self.k_info() {
            return Err(Error::Shape {
                expected: self.k_info(),
                got: info.len(),
            });
        }
        let g = &self.generator.rows;
        let mut acc = vec![0u64; g.row_words(0).len()];
        for (j, &bit) in info.iter().enumerate() {
            if bit & 1 == 1 {
                for (a, w) in acc.iter_mut().zip(g.row_words(j)) {
                    *a ^= *w;
                }
            }
        }
        Ok(gf2::unpack(&acc, self.n_code()))
    }

    /// Info bits read back from a codeword at [`Self::info_positions`].
    pub fn extract_info(&self, codeword: &[u8]) -> Vec<u8> {
        self.info_positions().iter().map(|&p| codeword[p]).collect()
    }

    pub fn fingerprint(&self) -> String {
        self.h.fingerprint()
    }
}
