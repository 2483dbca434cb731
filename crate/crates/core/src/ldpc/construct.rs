//! Seeded pseudo-random LDPC parity-check matrices.
//!
//! Progressive edge growth: columns are filled one edge at a time, each edge
//! going to the check farthest from the column in the graph built so far
//! (an unreachable check if there is one), which keeps local girth as large
//! as the sizes allow. Among equally far checks the one with the most unused
//! sockets wins, so row degrees stay within one of each other. Ties are broken with a ChaCha stream seeded from `seed`, so
//! `(n, m, col_degree, seed)` fully determines the matrix on every platform.

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::ParityCheck;
use crate::{Error, Result};

const MAX_ATTEMPTS: u64 = 64;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RandomCodeParams {
    /// Code length.
    pub n: usize,
    /// Number of parity checks; the design rate is `1 - m / n`.
    pub m: usize,
    pub col_degree: usize,
    pub seed: u64,
}

impl RandomCodeParams {
    /// Regular `(col_degree, row_degree)` code of length `n`.
    pub fn regular(n: usize, col_degree: usize, row_degree: usize, seed: u64) -> Result<Self> {
        if row_degree == 0 || !(n * col_degree).is_multiple_of(row_degree) {
            return Err(Error::Code(format!(
                "n * col_degree = {} is not divisible by row_degree = {row_degree}",
                n * col_degree
            )));
        }
        Ok(RandomCodeParams {
            n,
            m: n * col_degree / row_degree,
            col_degree,
            seed,
        })
    }

    fn validate(&self) -> Result<()> {
        if self.m == 0 || self.m >= self.n {
            return Err(Error::Code(format!(
                "need 0 < m < n, got n = {}, m = {}",
                self.n, self.m
            )));
        }
        if self.col_degree == 0 || self.col_degree > self.m {
            return Err(Error::Code(format!(
                "col_degree {} must be in 1..={}",
                self.col_degree, self.m
            )));
        }
        Ok(())
    }
}

const UNREACHED: u32 = u32::MAX;

/// Breadth-first search from variable `col` over the partial graph, leaving
/// in `depth` the distance (in check layers) to every check.
fn expand_from(
    col: usize,
    row_vars: &[Vec<usize>],
    col_checks: &[Vec<usize>],
    depth: &mut [u32],
    seen_var: &mut [bool],
) {
    depth.fill(UNREACHED);
    seen_var.fill(false);
    seen_var[col] = true;
    let mut frontier: Vec<usize> = col_checks[col].clone();
    for &r in &frontier {
        depth[r] = 0;
    }
    let mut level = 0;
    while !frontier.is_empty() {
        level += 1;
        let mut next = Vec::new();
        for &r in &frontier {
            for &v in &row_vars[r] {
                if std::mem::replace(&mut seen_var[v], true) {
                    continue;
                }
                for &q in &col_checks[v] {
                    if depth[q] == UNREACHED {
                        depth[q] = level;
                        next.push(q);
                    }
                }
            }
        }
        frontier = next;
    }
}

/// One construction attempt with the given stream.
pub fn generate(params: &RandomCodeParams, stream: u64) -> Result<ParityCheck> {
    params.validate()?;
    let RandomCodeParams {
        n, m, col_degree, ..
    } = *params;
    let mut rng = ChaCha8Rng::seed_from_u64(params.seed);
    rng.set_stream(stream);

    // socket budget per row: total edges spread as evenly as possible,
    // with the larger rows chosen at random
    let edges = n * col_degree;
    let mut capacity = vec![edges / m; m];
    let mut order: Vec<usize> = (0..m).collect();
    order.shuffle(&mut rng);
    for &r in order.iter().take(edges % m) {
        capacity[r] += 1;
    }

    let mut row_vars: Vec<Vec<usize>> = vec![Vec::new(); m];
    let mut col_checks: Vec<Vec<usize>> = vec![Vec::new(); n];
    let mut depth = vec![UNREACHED; m];
    let mut seen_var = vec![false; n];
    let mut candidates = Vec::with_capacity(m);

    for col in 0..n {
        for _ in 0..col_degree {
            expand_from(col, &row_vars, &col_checks, &mut depth, &mut seen_var);
            let chosen = &col_checks[col];
            let mut pick = None;
            for need_capacity in [true, false] {
                // farthest first (unreached counts as farthest), then most
                // unused sockets
                candidates.clear();
                let mut best = (0u32, i64::MIN);
                for r in 0..m {
                    if chosen.contains(&r) || (need_capacity && capacity[r] == 0) {
                        continue;
                    }
                    let score = (depth[r], capacity[r] as i64);
                    if score > best {
                        best = score;
                        candidates.clear();
                    }
                    if score == best {
                        candidates.push(r);
                    }
                }
                if !candidates.is_empty() {
                    pick = Some(candidates[rng.random_range(0..candidates.len())]);
                    break;
                }
            }
            let r = pick.expect("col_degree <= m guarantees a distinct row");
            capacity[r] = capacity[r].saturating_sub(1);
            row_vars[r].push(col);
            col_checks[col].push(r);
        }
    }
    let entries: Vec<(usize, usize)> = col_checks
        .iter()
        .enumerate()
        .flat_map(|(c, rows)| rows.iter().map(move |&r| (r, c)))
        .collect();
    ParityCheck::from_entries(m, n, &entries)
}

/// Runs [`generate`] on successive streams until `H` has full row rank.
pub fn generate_full_rank(params: &RandomCodeParams) -> Result<ParityCheck> {
    let mut best_rank = 0;
    for stream in 0..MAX_ATTEMPTS {
        let h = generate(params, stream)?;
        let rank = h.rank();
        if rank == params.m {
            return Ok(h);
        }
        best_rank = best_rank.max(rank);
    }
    Err(Error::RankDeficient {
        expected: params.m,
        found: best_rank,
    })
}

/// Number of length-4 cycles (pairs of checks sharing two or more columns,
/// counted per shared column pair).
pub fn count_four_cycles(h: &ParityCheck) -> usize {
    let cols = h.columns();
    let mut count = 0;
    for a in 0..h.n_rows() {
        let mut shared = std::collections::HashMap::new();
        for &c in h.row(a) {
            for &b in &cols[c] {
                if b > a {
                    *shared.entry(b).or_insert(0usize) += 1;
                }
            }
        }
        count += shared
            .values()
            .map(|&s| s * s.saturating_sub(1) / 2)
            .sum::<usize>();
    }
    count
}

/// Length of the shortest cycle in the Tanner graph, `None` if acyclic.
pub fn girth(h: &ParityCheck) -> Option<usize> {
    let cols = h.columns();
    let (m, n) = (h.n_rows(), h.n_cols());
    // nodes: variables 0..n, checks n..n+m
    let neighbours = |u: usize| -> &[usize] {
        if u < n {
            &cols[u]
        } else {
            h.row(u - n)
        }
    };
    let mut best = usize::MAX;
    let mut dist = vec![usize::MAX; n + m];
    let mut parent = vec![usize::MAX; n + m];
    for root in 0..n {
        dist.fill(usize::MAX);
        dist[root] = 0;
        let mut queue = std::collections::VecDeque::from([root]);
        while let Some(u) = queue.pop_front() {
            if 2 * dist[u] + 1 >= best {
                break;
            }
            for &w in neighbours(u) {
                let w = if u < n { w + n } else { w };
                if dist[w] == usize::MAX {
                    dist[w] = dist[u] + 1;
                    parent[w] = u;
                    queue.push_back(w);
                } else if parent[u] != w {
                    best = best.min(dist[u] + dist[w] + 1);
                }
            }
        }
    }
    (best != usize::MAX).then_some(best)
}
