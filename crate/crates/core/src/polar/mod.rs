//! Polar codes in natural (non bit-reversed) order: `x = u F^{(x)n}` with
//! `F = [[1, 0], [1, 1]]`.
//!
//! Indices are 0-based everywhere; input `u_i` here is `u_{i+1}` in the usual
//! 1-based notation.

mod construct;
mod decode;
mod graph;

use std::fs;
use std::path::Path;

pub use construct::{
    bec_reliabilities, channel_reliabilities, mc_reliabilities, select_info_set,
    ReliabilityMetric, ReliabilityVector, DEFAULT_MC_TRIALS,
};
pub use decode::{bp_decode, sc_decode, BpDecoder, DecodeResult, DEFAULT_BP_ITERS};
pub use graph::{
    build_factor_graph, code_bit_tree_counts, girth, is_stopping_set, stopping_tree, CheckKind,
    FactorGraph, StoppingTree, TreeRoots,
};

pub(crate) use decode::{double_atanh, half_tanh, sc_genie_llrs};

use crate::error::{Error, Result};

/// A polar code: block length `2^n` and the set of information inputs.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PolarCode {
    n: u32,
    frozen: Vec<bool>,
    info_set: Vec<usize>,
}

impl PolarCode {
    /// Builds a code from its information set. The set is sorted and must be
    /// non-empty, duplicate-free and inside `0..2^n`.
    pub fn from_info_set(n: u32, info_set: impl IntoIterator<Item = usize>) -> Result<Self> {
        if n == 0 || n > 30 {
            return Err(Error::Parameter(format!("n = {n} out of 1..=30")));
        }
        let len = 1usize << n;
        let mut info: Vec<usize> = info_set.into_iter().collect();
        info.sort_unstable();
        if info.is_empty() {
            return Err(Error::Parameter("information set is empty".into()));
        }
        if info.windows(2).any(|w| w[0] == w[1]) {
            return Err(Error::Parameter("information set has duplicates".into()));
        }
        if let Some(&last) = info.last() {
            if last >= len {
                return Err(Error::Parameter(format!(
                    "information index {last} out of range for N = {len}"
                )));
            }
        }
        let mut frozen = vec![true; len];
        for &i in &info {
            frozen[i] = false;
        }
        Ok(PolarCode {
            n,
            frozen,
            info_set: info,
        })
    }

    pub fn from_frozen_mask(frozen: Vec<bool>) -> Result<Self> {
        let len = frozen.len();
        if !len.is_power_of_two() || len < 2 {
            return Err(Error::shape("frozen mask (power of two >= 2)", len.next_power_of_two(), len));
        }
        Self::from_info_set(
            len.trailing_zeros(),
            frozen.iter().enumerate().filter(|(_, f)| !**f).map(|(i, _)| i),
        )
    }

    pub fn n(&self) -> u32 {
        self.n
    }

    /// Block length `N = 2^n`.
    pub fn len(&self) -> usize {
        self.frozen.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    /// Number of information bits.
    pub fn k(&self) -> usize {
        self.info_set.len()
    }

    pub fn rate(&self) -> f64 {
        self.k() as f64 / self.len() as f64
    }

    pub fn info_set(&self) -> &[usize] {
        &self.info_set
    }

    /// `true` at frozen input positions.
    pub fn frozen_mask(&self) -> &[bool] {
        &self.frozen
    }

    pub fn is_frozen(&self, i: usize) -> bool {
        self.frozen[i]
    }

    /// Scatters `info` onto the information positions, zeros elsewhere.
    pub fn embed(&self, info: &[u8]) -> Result<Vec<u8>> {
        if info.len() != self.k() {
            return Err(Error::shape("information bits", self.k(), info.len()));
        }
        let mut u = vec![0u8; self.len()];
        for (&i, &b) in self.info_set.iter().zip(info) {
            u[i] = b & 1;
        }
        Ok(u)
    }

    /// Reads the information positions out of an input vector.
    pub fn extract(&self, u: &[u8]) -> Vec<u8> {
        self.info_set.iter().map(|&i| u[i]).collect()
    }

    pub fn encode(&self, info: &[u8]) -> Result<Vec<u8>> {
        let mut x = self.embed(info)?;
        transform_in_place(&mut x);
        Ok(x)
    }

    /// Writes the information-set file: `N k` then the sorted indices.
    pub fn write_info_file(&self, path: impl AsRef<Path>) -> Result<()> {
        fs::write(path, self.to_info_text())?;
        Ok(())
    }

    pub fn to_info_text(&self) -> String {
        let idx: Vec<String> = self.info_set.iter().map(|i| i.to_string()).collect();
        format!("{} {}\n{}\n", self.len(), self.k(), idx.join(" "))
    }

    pub fn read_info_file(path: impl AsRef<Path>) -> Result<Self> {
        let path = path.as_ref();
        let text = fs::read_to_string(path)
            .map_err(|e| Error::Config(format!("{}: {e}", path.display())))?;
        Self::parse_info_text(&text, path)
    }

    pub fn parse_info_text(text: &str, path: &Path) -> Result<Self> {
        let mut lines = text.lines().filter(|l| !l.trim().is_empty());
        let header = lines.next().ok_or_else(|| Error::parse(path, 1, "empty file"))?;
        let nums: Vec<usize> = parse_usizes(header, path, 1)?;
        let [len, k] = nums[..] else {
            return Err(Error::parse(path, 1, "expected `N k`"));
        };
        if !len.is_power_of_two() || len < 2 {
            return Err(Error::parse(path, 1, format!("N = {len} is not a power of two")));
        }
        let info = match lines.next() {
            Some(l) => parse_usizes(l, path, 2)?,
            None => Vec::new(),
        };
        if info.len() != k {
            return Err(Error::parse(
                path,
                2,
                format!("header says k = {k} but {} indices listed", info.len()),
            ));
        }
        Self::from_info_set(len.trailing_zeros(), info)
            .map_err(|e| Error::parse(path, 2, e.to_string()))
    }
}

pub(crate) fn parse_usizes(line: &str, path: &Path, lineno: usize) -> Result<Vec<usize>> {
    line.split_whitespace()
        .map(|t| {
            t.parse()
                .map_err(|_| Error::parse(path, lineno, format!("bad integer `{t}`")))
        })
        .collect()
}

/// In-place `x <- x F^{(x)n}` over GF(2). `x_j` ends up as the XOR of all `u_i`
/// whose index `i` has the bits of `j` as a subset.
pub fn transform_in_place(x: &mut [u8]) {
    let len = x.len();
    debug_assert!(len.is_power_of_two());
    let mut half = 1;
    while half < len {
        for block in x.chunks_exact_mut(2 * half) {
            let (lo, hi) = block.split_at_mut(half);
            for (a, b) in lo.iter_mut().zip(hi.iter()) {
                *a ^= *b;
            }
        }
        half *= 2;
    }
}

/// `u F^{(x)n}`; `u.len()` must be a power of two.
pub fn polar_transform(u: &[u8]) -> Result<Vec<u8>> {
    if u.is_empty() || !u.len().is_power_of_two() {
        return Err(Error::shape(
            "transform input (power of two)",
            u.len().next_power_of_two().max(1),
            u.len(),
        ));
    }
    let mut x = u.to_vec();
    transform_in_place(&mut x);
    Ok(x)
}

/// Encodes `info` with `code`.
pub fn polar_encode(code: &PolarCode, info: &[u8]) -> Result<Vec<u8>> {
    code.encode(info)
}
