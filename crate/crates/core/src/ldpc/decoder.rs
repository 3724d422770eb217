use super::LdpcCode;
use crate::channels::{clamp_llr, hard_decision};
use crate::error::{Error, Result};
use crate::polar::{double_atanh, half_tanh};

pub const DEFAULT_LDPC_ITERS: usize = 60;


#[derive(Debug, Clone, PartialEq)]
pub struct LdpcDecodeResult {
    /// Hard decisions on the posterior.
    pub codeword: Vec<u8>,
    /// Full posterior LLR of every code bit, clamped to `±CLAMP`.
    pub posterior: Vec<f64>,
    /// Zero syndrome with no undecided (zero-LLR) bit.
    pub converged: bool,
    pub iterations: usize,
}

/// Flooding sum-product decoder with buffers sized for one code; keep one
/// per worker.
#[derive(Debug, Clone)]
pub struct LdpcDecoder {
    v2c: Vec<f64>,
    c2v: Vec<f64>,
    tanh: Vec<f64>,
    prefix: Vec<f64>,
}

impl LdpcDecoder {
    pub fn new(code: &LdpcCode) -> Self {
        let e = code.num_edges();
        let widest = code.chk_adj.iter().map(Vec::len).max().unwrap_or(0);
        LdpcDecoder {
            v2c: vec![0.0; e],
            c2v: vec![0.0; e],
            tanh: vec![0.0; e],
            prefix: vec![0.0; widest + 1],
        }
    }

    pub fn decode(&mut self, code: &LdpcCode, llrs: &[f64], max_iters: usize) -> Result<LdpcDecodeResult> {
        if llrs.len() != code.n {
            return Err(Error::shape("LDPC channel LLRs", code.n, llrs.len()));
        }
        if self.v2c.len() != code.num_edges() {
            *self = LdpcDecoder::new(code);
        }
        let channel: Vec<f64> = llrs.iter().map(|&l| clamp_llr(l)).collect();
        for (e, &v) in code.edge_var.iter().enumerate() {
            self.v2c[e] = channel[v as usize];
        }
        let mut posterior = channel.clone();
        let mut codeword: Vec<u8> = posterior.iter().map(|&l| hard_decision(l)).collect();
        let mut converged = max_iters == 0 && settled(code, &codeword, &posterior);
        let mut iterations = 0;
        while iterations < max_iters {
            iterations += 1;
            self.check_update(code);
            for v in 0..code.n {
                let edges = &code.var_edges[code.var_ptr[v]..code.var_ptr[v + 1]];
                let total = channel[v] + edges.iter().map(|&e| self.c2v[e as usize]).sum::<f64>();
                posterior[v] = clamp_llr(total);
                for &e in edges {
                    self.v2c[e as usize] = clamp_llr(total - self.c2v[e as usize]);
                }
                codeword[v] = hard_decision(posterior[v]);
            }
            converged = settled(code, &codeword, &posterior);
            if converged {
                break;
            }
        }
        Ok(LdpcDecodeResult {
            codeword,
            posterior,
            converged,
            iterations,
        })
    }

    /// `c2v = 2 atanh(prod of the other tanh(v2c/2))`, leave-one-out via
    /// prefix and suffix products.
    fn check_update(&mut self, code: &LdpcCode) {
        for c in 0..code.m {
            let (lo, hi) = (code.check_ptr[c], code.check_ptr[c + 1]);
            let t = &mut self.tanh[lo..hi];
            for (x, &q) in t.iter_mut().zip(&self.v2c[lo..hi]) {
                *x = half_tanh(q);
            }
            let pre = &mut self.prefix[..=t.len()];
            pre[0] = 1.0;
            for i in 0..t.len() {
                pre[i + 1] = pre[i] * t[i];
            }
            let mut suffix = 1.0;
            for i in (0..t.len()).rev() {
                self.c2v[lo + i] = clamp_llr(double_atanh(pre[i] * suffix));
                suffix *= t[i];
            }
        }
    }
}

fn settled(code: &LdpcCode, codeword: &[u8], posterior: &[f64]) -> bool {
    posterior.iter().all(|&l| l != 0.0) && code.syndrome_ok(codeword)
}

/// Decodes one frame with fresh buffers.
pub fn ldpc_bp_decode(code: &LdpcCode, llrs: &[f64], max_iters: usize) -> Result<LdpcDecodeResult> {
    LdpcDecoder::new(code).decode(code, llrs, max_iters)
}
