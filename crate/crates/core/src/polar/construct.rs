//! Bit-channel reliabilities and information-set selection.

use rayon::prelude::*;

use super::{sc_genie_llrs, transform_in_place, PolarCode};
use crate::channels::{ChannelFamily, ChannelModel};
use crate::error::{Error, Result};
use crate::seeding;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ReliabilityMetric {
    /// Exact erasure probability of each BEC bit-channel.
    BecErasureExact,
    /// Monte-Carlo estimate of the genie-aided SC error probability.
    McErrorEstimate,
}

/// One value per bit-channel; lower is more reliable.
#[derive(Debug, Clone, PartialEq)]
pub struct ReliabilityVector {
    pub values: Vec<f64>,
    pub metric: ReliabilityMetric,
}

impl ReliabilityVector {
    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    /// Indices ordered from most to least reliable. Ties go to the higher
    /// index first.
    pub fn ranking(&self) -> Vec<usize> {
        let mut idx: Vec<usize> = (0..self.values.len()).collect();
        idx.sort_by(|&a, &b| {
            self.values[a]
                .total_cmp(&self.values[b])
                .then_with(|| b.cmp(&a))
        });
        idx
    }
}

/// Exact erasure probabilities of the `2^n` bit-channels of a BEC(`erasure`).
///
/// Index bits are consumed from the most significant down: a 0 bit applies
/// the check-node step `z -> 2z - z^2`, a 1 bit the variable-node step
/// `z -> z^2`.
pub fn bec_reliabilities(n: u32, erasure: f64) -> Result<ReliabilityVector> {
    if !(0.0..=1.0).contains(&erasure) {
        return Err(Error::Parameter(format!("erasure {erasure} out of [0, 1]")));
    }
    let mut z = vec![erasure];
    for _ in 0..n {
        // Appending one level below the current ones: the new LSB.
        z = z
            .iter()
            .flat_map(|&v| [2.0 * v - v * v, v * v])
            .collect();
    }
    Ok(ReliabilityVector {
        values: z,
        metric: ReliabilityMetric::BecErasureExact,
    })
}

const MC_BLOCK: usize = 256;

/// Genie-aided SC error-rate estimates over `trials` all-zero transmissions.
/// An LLR of zero (an erasure) counts as an error.
pub fn mc_reliabilities(
    n: u32,
    model: &ChannelModel,
    trials: usize,
    seed: u64,
) -> Result<ReliabilityVector> {
    if trials == 0 {
        return Err(Error::Parameter("trials must be >= 1".into()));
    }
    let len = 1usize << n;
    let zero_u = vec![0u8; len];
    let mut zero_x = zero_u.clone();
    transform_in_place(&mut zero_x);
    let blocks = trials.div_ceil(MC_BLOCK);
    let errors = (0..blocks)
        .into_par_iter()
        .map(|b| {
            let mut rng = seeding::stream(seed, 0x636f6e73, b as u64);
            let mut counts = vec![0u64; len];
            let count = MC_BLOCK.min(trials - b * MC_BLOCK);
            for _ in 0..count {
                let llrs = model.transmit_llrs(&zero_x, &mut rng);
                let genie = sc_genie_llrs(&llrs, &zero_u);
                for (c, l) in counts.iter_mut().zip(genie) {
                    *c += (l <= 0.0) as u64;
                }
            }
            counts
        })
        .reduce(
            || vec![0u64; len],
            |mut a, b| {
                a.iter_mut().zip(b).for_each(|(x, y)| *x += y);
                a
            },
        );
    Ok(ReliabilityVector {
        values: errors.iter().map(|&e| e as f64 / trials as f64).collect(),
        metric: ReliabilityMetric::McErrorEstimate,
    })
}

/// Default number of Monte-Carlo transmissions for non-erasure channels.
pub const DEFAULT_MC_TRIALS: usize = 20_000;

/// Exact erasure probabilities on the BEC, Monte-Carlo estimates otherwise.
pub fn channel_reliabilities(
    n: u32,
    model: &ChannelModel,
    mc_trials: usize,
    seed: u64,
) -> Result<ReliabilityVector> {
    match model.family() {
        ChannelFamily::Bec => bec_reliabilities(n, model.param()),
        _ => mc_reliabilities(n, model, mc_trials, seed),
    }
}

/// Keeps the `k` most reliable bit-channels as the information set.
pub fn select_info_set(rel: &ReliabilityVector, k: usize) -> Result<PolarCode> {
    let len = rel.len();
    if !len.is_power_of_two() || len < 2 {
        return Err(Error::shape("reliability vector (power of two)", len.next_power_of_two(), len));
    }
    if k == 0 || k > len {
        return Err(Error::Parameter(format!("k = {k} out of 1..={len}")));
    }
    PolarCode::from_info_set(len.trailing_zeros(), rel.ranking().into_iter().take(k))
}
