//! Flooding sum-product decoder with the tanh/atanh check kernel.
//!
//! LLR convention: positive means bit 0 is more likely. Every message is
//! clipped to `±LLR_CAP`. A posterior of exactly zero decides bit 0 but
//! blocks the convergence flag, since such a bit carries no decision.

use super::LdpcCode;

pub const LLR_CAP: f64 = 30.0;

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct BpOptions {
    pub max_iter: usize,
    /// Stop as soon as the hard decision satisfies every check.
    pub early_stop: bool,
}

impl BpOptions {
    pub fn new(max_iter: usize) -> Self {
        BpOptions {
            max_iter,
            early_stop: true,
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct DecodeOutcome {
    /// Decoded info bits.
    pub info: Vec<u8>,
    /// Hard decision on all code bits.
    pub codeword: Vec<u8>,
    /// A-posteriori LLRs after the last iteration.
    pub posterior: Vec<f64>,
    pub iterations: usize,
    pub converged: bool,
}

#[inline]
fn clip(x: f64) -> f64 {
    x.clamp(-LLR_CAP, LLR_CAP)
}

/// Sum-product decoding with early termination.
///
/// # Panics
/// If `llr.len() != code.n_code()` or `max_iter == 0`.
pub fn decode_bp(code: &LdpcCode, llr: &[f64], max_iter: usize) -> DecodeOutcome {
    decode_bp_with(code, llr, BpOptions::new(max_iter))
}

pub fn decode_bp_with(code: &LdpcCode, llr: &[f64], opts: BpOptions) -> DecodeOutcome {
    let n = code.n_code();
    assert_eq!(llr.len(), n, "LLR length must equal the code length");
    assert!(opts.max_iter >= 1, "max_iter must be at least 1");

    let g = code.graph();
    let channel: Vec<f64> = llr.iter().map(|&l| clip(l)).collect();
    let mut v2c: Vec<f64> = g.edge_var.iter().map(|&v| channel[v]).collect();
    let mut c2v = vec![0.0; v2c.len()];
    let mut posterior = channel.clone();
    let mut hard = vec![0u8; n];
    let mut tanhs = vec![0.0; g.max_check_degree];
    let mut suffix = vec![0.0; g.max_check_degree + 1];

    let mut iterations = 0;
    let mut converged = false;
    for it in 1..=opts.max_iter {
        iterations = it;

        for c in 0..g.check_offsets.len() - 1 {
            let (lo, hi) = (g.check_offsets[c], g.check_offsets[c + 1]);
            let deg = hi - lo;
            for (t, &m) in tanhs.iter_mut().zip(&v2c[lo..hi]) {
                *t = (0.5 * m).tanh();
            }
            suffix[deg] = 1.0;
            for i in (0..deg).rev() {
                suffix[i] = suffix[i + 1] * tanhs[i];
            }
            let mut prefix = 1.0;
            for i in 0..deg {
                let others = prefix * suffix[i + 1];
                c2v[lo + i] = clip(2.0 * others.atanh());
                prefix *= tanhs[i];
            }
        }

        for v in 0..n {
            let edges = &g.var_edges[g.var_offsets[v]..g.var_offsets[v + 1]];
            let total = channel[v] + edges.iter().map(|&e| c2v[e]).sum::<f64>();
            posterior[v] = total;
            hard[v] = (total < 0.0) as u8;
            for &e in edges {
                v2c[e] = clip(total - c2v[e]);
            }
        }

        let undecided = posterior.contains(&0.0);
        if !undecided && code.parity_check().is_codeword(&hard) {
            converged = true;
            if opts.early_stop {
                break;
            }
        } else {
            converged = false;
        }
    }

    DecodeOutcome {
        info: code.extract_info(&hard),
        codeword: hard,
        posterior,
        iterations,
        converged,
    }
}
