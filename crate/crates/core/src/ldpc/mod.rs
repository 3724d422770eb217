//! Irregular LDPC codes: degree distributions, progressive-edge-growth
//! construction, systematic encoding and sum-product decoding.

mod alist;
mod decoder;
pub mod dist;
mod peg;

use std::sync::OnceLock;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};

pub use decoder::{ldpc_bp_decode, LdpcDecodeResult, LdpcDecoder, DEFAULT_LDPC_ITERS};
pub use dist::{quantize, quantize_with_checks, DegreeDistribution, DegreeSequence};

/// Sparse parity-check code. Immutable once built; the encoder is derived on
/// first use.
#[derive(Debug, Clone)]
pub struct LdpcCode {
    n: usize,
    m: usize,
    var_adj: Vec<Vec<u32>>,
    chk_adj: Vec<Vec<u32>>,
    // Edge layout used by the decoder: edges grouped by check, and for each
    // variable the indices of its edges.
    check_ptr: Vec<usize>,
    edge_var: Vec<u32>,
    var_ptr: Vec<usize>,
    var_edges: Vec<u32>,
    encoder: OnceLock<Encoder>,
}

/// Reduced row-echelon form of H with pivots taken from the right, so
/// parity bits sit at pivot columns and information bits everywhere else.
#[derive(Debug, Clone)]
struct Encoder {
    rows: Vec<Vec<u64>>,
    pivots: Vec<usize>,
    info_cols: Vec<usize>,
}

impl LdpcCode {
    /// Builds the code from the check lists of every variable.
    pub fn from_var_adjacency(n: usize, m: usize, var_adj: Vec<Vec<u32>>) -> Result<Self> {
        if var_adj.len() != n {
            return Err(Error::shape("variable adjacency", n, var_adj.len()));
        }
        let mut chk_adj = vec![Vec::new(); m];
        for (v, checks) in var_adj.iter().enumerate() {
            for (i, &c) in checks.iter().enumerate() {
                if c as usize >= m {
                    return Err(Error::Construction(format!("variable {v} names check {c} >= m = {m}")));
                }
                if checks[..i].contains(&c) {
                    return Err(Error::Construction(format!("repeated edge ({v}, {c})")));
                }
                chk_adj[c as usize].push(v as u32);
            }
        }
        let mut check_ptr = Vec::with_capacity(m + 1);
        let mut edge_var = Vec::new();
        check_ptr.push(0);
        for vars in &chk_adj {
            edge_var.extend_from_slice(vars);
            check_ptr.push(edge_var.len());
        }
        let mut per_var = vec![Vec::new(); n];
        for (e, &v) in edge_var.iter().enumerate() {
            per_var[v as usize].push(e as u32);
        }
        let mut var_ptr = Vec::with_capacity(n + 1);
        let mut var_edges = Vec::with_capacity(edge_var.len());
        var_ptr.push(0);
        for edges in per_var {
            var_edges.extend(edges);
            var_ptr.push(var_edges.len());
        }
        Ok(LdpcCode {
            n,
            m,
            var_adj,
            chk_adj,
            check_ptr,
            edge_var,
            var_ptr,
            var_edges,
            encoder: OnceLock::new(),
        })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn num_edges(&self) -> usize {
        self.edge_var.len()
    }

    /// Checks adjacent to variable `v`.
    pub fn var_checks(&self, v: usize) -> &[u32] {
        &self.var_adj[v]
    }

    /// Variables adjacent to check `c`.
    pub fn check_vars(&self, c: usize) -> &[u32] {
        &self.chk_adj[c]
    }

    pub fn var_degrees(&self) -> Vec<usize> {
        self.var_adj.iter().map(Vec::len).collect()
    }

    pub fn check_degrees(&self) -> Vec<usize> {
        self.chk_adj.iter().map(Vec::len).collect()
    }

    /// `1 - m/n`.
    pub fn design_rate(&self) -> f64 {
        1.0 - self.m as f64 / self.n as f64
    }

    /// Information length `n - rank(H)`; at least `n - m`.
    pub fn k(&self) -> usize {
        self.encoder().info_cols.len()
    }

    pub fn rate(&self) -> f64 {
        self.k() as f64 / self.n as f64
    }

    /// Codeword positions that carry the information bits, ascending.
    pub fn info_positions(&self) -> &[usize] {
        &self.encoder().info_cols
    }

    pub fn syndrome_ok(&self, x: &[u8]) -> bool {
        self.chk_adj
            .iter()
            .all(|vars| vars.iter().fold(0u8, |acc, &v| acc ^ x[v as usize]) == 0)
    }

    fn encoder(&self) -> &Encoder {
        self.encoder.get_or_init(|| Encoder::new(self))
    }

    /// Systematic encoding: `info` lands on `info_positions()`, parities on
    /// the remaining columns.
    pub fn encode(&self, info: &[u8]) -> Result<Vec<u8>> {
        let enc = self.encoder();
        if info.len() != enc.info_cols.len() {
            return Err(Error::shape("LDPC information bits", enc.info_cols.len(), info.len()));
        }
        let mut x = vec![0u8; self.n];
        let mut bits = vec![0u64; self.n.div_ceil(64)];
        for (&col, &b) in enc.info_cols.iter().zip(info) {
            x[col] = b & 1;
            bits[col / 64] |= ((b & 1) as u64) << (col % 64);
        }
        for (row, &p) in enc.rows.iter().zip(&enc.pivots) {
            let parity = row
                .iter()
                .zip(&bits)
                .fold(0u32, |acc, (a, b)| acc ^ (a & b).count_ones())
                & 1;
            x[p] = parity as u8;
        }
        Ok(x)
    }

    /// Information bits of a codeword.
    pub fn extract(&self, x: &[u8]) -> Vec<u8> {
        self.info_positions().iter().map(|&c| x[c]).collect()
    }
}

impl Encoder {
    fn new(code: &LdpcCode) -> Self {
        let words = code.n.div_ceil(64);
        let mut rows: Vec<Vec<u64>> = code
            .chk_adj
            .iter()
            .map(|vars| {
                let mut r = vec![0u64; words];
                for &v in vars {
                    r[v as usize / 64] ^= 1 << (v % 64);
                }
                r
            })
            .collect();
        let mut pivots = Vec::new();
        let mut rank = 0;
        for col in (0..code.n).rev() {
            let (w, bit) = (col / 64, 1u64 << (col % 64));
            let Some(p) = (rank..rows.len()).find(|&r| rows[r][w] & bit != 0) else {
                continue;
            };
            rows.swap(rank, p);
            let (head, tail) = rows.split_at_mut(rank);
            let (pivot, tail) = tail.split_first_mut().unwrap();
            for r in head.iter_mut().chain(tail.iter_mut()) {
                if r[w] & bit != 0 {
                    r.iter_mut().zip(pivot.iter()).for_each(|(a, b)| *a ^= b);
                }
            }
            pivots.push(col);
            rank += 1;
            if rank == rows.len() {
                break;
            }
        }
        rows.truncate(rank);
        let mut is_pivot = vec![false; code.n];
        pivots.iter().for_each(|&p| is_pivot[p] = true);
        let info_cols = (0..code.n).filter(|&c| !is_pivot[c]).collect();
        Encoder {
            rows,
            pivots,
            info_cols,
        }
    }
}

/// Progressive-edge-growth code with the quantized degree sequences of
/// `dist` at length `n`. Deterministic in `seed`.
pub fn build_ldpc(n: usize, dist: &DegreeDistribution, seed: u64) -> Result<LdpcCode> {
    let seq = quantize(n, dist)?;
    build_from_sequence(&seq, seed)
}

/// Progressive-edge-growth code with exactly the given node degrees.
pub fn build_from_sequence(seq: &DegreeSequence, seed: u64) -> Result<LdpcCode> {
    let edges_v: usize = seq.var_degrees.iter().sum();
    let edges_c: usize = seq.check_degrees.iter().sum();
    if edges_v != edges_c {
        return Err(Error::Construction(format!(
            "degree sequences disagree: {edges_v} variable-side edges vs {edges_c} check-side edges"
        )));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let var_adj = peg::progressive_edge_growth(seq, &mut rng)?;
    LdpcCode::from_var_adjacency(seq.var_degrees.len(), seq.check_degrees.len(), var_adj)
}
