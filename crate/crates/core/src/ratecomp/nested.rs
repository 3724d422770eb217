use crate::channels::{is_degraded, ChannelModel};
use crate::error::{Error, Result};
use crate::polar::{channel_reliabilities, PolarCode, ReliabilityVector};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Provenance {
    /// Selected from this level's own reliabilities and already nested.
    Independent,
    /// Re-selected inside the previous level's set to restore nesting.
    Repaired,
}

#[derive(Debug, Clone, PartialEq)]
pub struct NestedLevel {
    pub channel: ChannelModel,
    pub rate: f64,
    pub code: PolarCode,
    pub provenance: Provenance,
    pub reliabilities: ReliabilityVector,
}

/// Polar codes of one length for a chain of progressively worse channels,
/// with information sets shrinking along the chain. Level 0 is the best
/// channel and the largest set; every level is encoded by the same parent
/// encoder with more inputs frozen.
#[derive(Debug, Clone, PartialEq)]
pub struct NestedFrozenFamily {
    n: u32,
    levels: Vec<NestedLevel>,
}

/// How reliabilities are obtained for channels without an exact recursion.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct NestedOptions {
    pub mc_trials: usize,
    pub seed: u64,
}

impl Default for NestedOptions {
    fn default() -> Self {
        NestedOptions {
            mc_trials: crate::polar::DEFAULT_MC_TRIALS,
            seed: 0,
        }
    }
}

/// Builds the family for `channels` (best first) and matching non-increasing
/// `rates`, with `k_j = round(R_j N)`.
pub fn build_nested_family(
    n: u32,
    channels: &[ChannelModel],
    rates: &[f64],
    opts: &NestedOptions,
) -> Result<NestedFrozenFamily> {
    if channels.is_empty() || channels.len() != rates.len() {
        return Err(Error::Parameter(format!(
            "need one rate per channel, got {} channels and {} rates",
            channels.len(),
            rates.len()
        )));
    }
    for w in channels.windows(2) {
        let ordered = is_degraded(&w[1], &w[0]).map_err(|e| Error::Domain(e.to_string()))?;
        if !ordered {
            return Err(Error::Domain(format!(
                "channels must be ordered best to worst: {} before {}",
                w[0], w[1]
            )));
        }
    }
    if rates.windows(2).any(|w| w[1] > w[0]) {
        return Err(Error::Parameter(format!("rates must be non-increasing: {rates:?}")));
    }
    let len = 1usize << n;
    let mut levels: Vec<NestedLevel> = Vec::with_capacity(channels.len());
    for (j, (ch, &rate)) in channels.iter().zip(rates).enumerate() {
        let k = (rate * len as f64).round() as usize;
        if !(rate > 0.0 && rate <= 1.0) || k == 0 {
            return Err(Error::Parameter(format!("rate {rate} not realizable at length {len}")));
        }
        // Distinct streams per level keep Monte-Carlo estimates independent.
        let rel = channel_reliabilities(n, ch, opts.mc_trials, crate::seeding::derive_seed(opts.seed, 0x6e657374, j as u64))?;
        let ranking = rel.ranking();
        let mut code = PolarCode::from_info_set(n, ranking.iter().copied().take(k))?;
        let mut provenance = Provenance::Independent;
        if let Some(parent) = levels.last() {
            let parent = &parent.code;
            if code.info_set().iter().any(|&i| parent.is_frozen(i)) {
                let inside = ranking.iter().copied().filter(|&i| !parent.is_frozen(i));
                code = PolarCode::from_info_set(n, inside.take(k))?;
                provenance = Provenance::Repaired;
            }
        }
        levels.push(NestedLevel {
            channel: *ch,
            rate,
            code,
            provenance,
            reliabilities: rel,
        });
    }
    Ok(NestedFrozenFamily { n, levels })
}

impl NestedFrozenFamily {
    pub fn n(&self) -> u32 {
        self.n
    }

    pub fn len(&self) -> usize {
        1 << self.n
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn levels(&self) -> &[NestedLevel] {
        &self.levels
    }

    pub fn level(&self, j: usize) -> Result<&NestedLevel> {
        self.levels.get(j).ok_or_else(|| {
            Error::Parameter(format!("level {j} out of range 0..{}", self.levels.len()))
        })
    }

    pub fn num_repairs(&self) -> usize {
        self.levels
            .iter()
            .filter(|l| l.provenance == Provenance::Repaired)
            .count()
    }

    /// `A_{j+1} ⊆ A_j` for every consecutive pair.
    pub fn is_nested(&self) -> bool {
        self.levels.windows(2).all(|w| {
            w[1].code.info_set().iter().all(|&i| !w[0].code.is_frozen(i))
        })
    }

    /// Encodes `info` at level `j`: information on `A_j`, zeros on every
    /// other input, through the parent transform.
    pub fn switch_rate(&self, j: usize, info: &[u8]) -> Result<Vec<u8>> {
        self.level(j)?.code.encode(info)
    }
}
