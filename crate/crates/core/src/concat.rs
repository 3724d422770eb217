//! Polar outer code, LDPC inner code. The polar codeword is the LDPC
//! information block; the LDPC decoder's posterior LLRs on that block are the
//! polar BP decoder's channel input.

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::channels::{clamp_llr, ChannelModel};
use crate::error::{Error, Result};
use crate::ldpc::{self, DegreeDistribution, LdpcCode, LdpcDecoder, DEFAULT_LDPC_ITERS};
use crate::polar::{self, build_factor_graph, BpDecoder, FactorGraph, PolarCode, DEFAULT_BP_ITERS};
use crate::seeding::derive_seed;

/// What the LDPC stage hands to the polar stage.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Handoff {
    /// Full posterior LLRs.
    #[default]
    Posterior,
    /// Posterior minus the channel LLR.
    Extrinsic,
}

/// Construction knobs beyond the rate targets.
#[derive(Debug, Clone, PartialEq)]
pub struct ConcatOptions {
    pub seed: u64,
    pub mc_trials: usize,
    pub polar_iters: usize,
    pub ldpc_iters: usize,
    pub interleave: bool,
    pub handoff: Handoff,
    /// PEG attempts before giving up on a full-rank parity-check matrix.
    pub max_attempts: usize,
}

impl Default for ConcatOptions {
    fn default() -> Self {
        ConcatOptions {
            seed: 0,
            mc_trials: polar::DEFAULT_MC_TRIALS,
            polar_iters: DEFAULT_BP_ITERS,
            ldpc_iters: DEFAULT_LDPC_ITERS,
            interleave: false,
            handoff: Handoff::Posterior,
            max_attempts: 16,
        }
    }
}

#[derive(Debug, Clone)]
pub struct ConcatCode {
    polar: PolarCode,
    graph: FactorGraph,
    ldpc: LdpcCode,
    /// `interleaver[i]` is the LDPC information slot of polar bit `i`.
    interleaver: Option<Vec<usize>>,
    pub polar_iters: usize,
    pub ldpc_iters: usize,
    pub handoff: Handoff,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ConcatDecodeResult {
    pub info: Vec<u8>,
    /// Both stages converged.
    pub converged: bool,
    pub ldpc_converged: bool,
    pub polar_converged: bool,
    pub ldpc_iterations: usize,
    pub polar_iterations: usize,
    /// LLRs given to the polar decoder, in polar code-bit order.
    pub handoff_llrs: Vec<f64>,
}

/// LDPC length carrying `n_polar` information bits at inner rate `r_l`.
/// Truncation, so 2^16 gives 68985 and 2^12 gives 4311 at 0.95.
pub fn inner_length(n_polar: usize, r_l: f64) -> usize {
    (n_polar as f64 / r_l).floor() as usize
}

/// Builds the pair for effective rate `r_eff` with a polar code of length
/// `2^n_polar` and inner rate `r_l`. The polar information set is designed
/// for `channel`; the LDPC code takes its variable degrees from `dist` and
/// exactly `n_l - N_p` nearly regular checks.
pub fn build_concat(
    r_eff: f64,
    n_polar: u32,
    r_l: f64,
    dist: &DegreeDistribution,
    channel: &ChannelModel,
    opts: &ConcatOptions,
) -> Result<ConcatCode> {
    if !(r_eff > 0.0 && r_eff < r_l && r_l < 1.0) {
        return Err(Error::Parameter(format!(
            "need 0 < R_eff < R_l < 1, got R_eff = {r_eff}, R_l = {r_l}"
        )));
    }
    let np = 1usize << n_polar;
    let r_p = r_eff / r_l;
    let kp = (r_p * np as f64).round() as usize;
    let nl = inner_length(np, r_l);
    let m = nl - np;
    let seq = ldpc::quantize_with_checks(nl, &dist.lambda, m)?;
    let ldpc = (0..opts.max_attempts as u64)
        .map(|a| ldpc::build_from_sequence(&seq, derive_seed(opts.seed, 0x6c647063, a)))
        .find(|c| c.as_ref().map_or(true, |c| c.k() == np))
        .ok_or_else(|| {
            Error::Construction(format!(
                "no full-rank ({nl}, {np}) parity-check matrix in {} attempts",
                opts.max_attempts
            ))
        })??;
    let rel = polar::channel_reliabilities(n_polar, channel, opts.mc_trials, derive_seed(opts.seed, 0x706f6c72, 0))?;
    let polar = polar::select_info_set(&rel, kp)?;
    ConcatCode::new(polar, ldpc, opts)
}

impl ConcatCode {
    /// Pairs existing codes; the LDPC information length must equal the
    /// polar length.
    pub fn new(polar: PolarCode, ldpc: LdpcCode, opts: &ConcatOptions) -> Result<Self> {
        if ldpc.k() != polar.len() {
            return Err(Error::Construction(format!(
                "LDPC information length {} differs from polar length {}",
                ldpc.k(),
                polar.len()
            )));
        }
        let graph = build_factor_graph(polar.n())?;
        let interleaver = opts.interleave.then(|| {
            let mut p: Vec<usize> = (0..polar.len()).collect();
            p.shuffle(&mut ChaCha8Rng::seed_from_u64(derive_seed(opts.seed, 0x696c7600, 0)));
            p
        });
        Ok(ConcatCode {
            polar,
            graph,
            ldpc,
            interleaver,
            polar_iters: opts.polar_iters,
            ldpc_iters: opts.ldpc_iters,
            handoff: opts.handoff,
        })
    }

    pub fn polar(&self) -> &PolarCode {
        &self.polar
    }

    pub fn ldpc(&self) -> &LdpcCode {
        &self.ldpc
    }

    pub fn graph(&self) -> &FactorGraph {
        &self.graph
    }

    pub fn k(&self) -> usize {
        self.polar.k()
    }

    /// Transmitted length `n_l`.
    pub fn len(&self) -> usize {
        self.ldpc.n()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn polar_rate(&self) -> f64 {
        self.polar.rate()
    }

    pub fn ldpc_rate(&self) -> f64 {
        self.ldpc.rate()
    }

    /// `k_p / n_l`.
    pub fn rate(&self) -> f64 {
        self.polar.k() as f64 / self.ldpc.n() as f64
    }

    pub fn encode(&self, info: &[u8]) -> Result<Vec<u8>> {
        let xp = self.polar.encode(info)?;
        let block = match &self.interleaver {
            None => xp,
            Some(perm) => {
                let mut b = vec![0u8; xp.len()];
                perm.iter().zip(&xp).for_each(|(&slot, &bit)| b[slot] = bit);
                b
            }
        };
        self.ldpc.encode(&block)
    }

    /// Decodes with fresh buffers; see [`ConcatDecoder`] for reuse.
    pub fn decode(&self, channel_llrs: &[f64]) -> Result<ConcatDecodeResult> {
        ConcatDecoder::new(self).decode(self, channel_llrs)
    }
}

/// Per-worker buffers for both stages.
#[derive(Debug, Clone)]
pub struct ConcatDecoder {
    ldpc: LdpcDecoder,
    polar: BpDecoder,
}

impl ConcatDecoder {
    pub fn new(code: &ConcatCode) -> Self {
        ConcatDecoder {
            ldpc: LdpcDecoder::new(&code.ldpc),
            polar: BpDecoder::new(&code.graph),
        }
    }

    pub fn decode(&mut self, code: &ConcatCode, channel_llrs: &[f64]) -> Result<ConcatDecodeResult> {
        let inner = self.ldpc.decode(&code.ldpc, channel_llrs, code.ldpc_iters)?;
        let positions = code.ldpc.info_positions();
        let slot_llr = |slot: usize| {
            let pos = positions[slot];
            match code.handoff {
                Handoff::Posterior => inner.posterior[pos],
                Handoff::Extrinsic => clamp_llr(inner.posterior[pos] - clamp_llr(channel_llrs[pos])),
            }
        };
        let handoff_llrs: Vec<f64> = match &code.interleaver {
            None => (0..positions.len()).map(slot_llr).collect(),
            Some(perm) => perm.iter().map(|&slot| slot_llr(slot)).collect(),
        };
        let outer = self.polar.decode(&code.graph, &code.polar, &handoff_llrs, code.polar_iters)?;
        Ok(ConcatDecodeResult {
            info: outer.info,
            converged: inner.converged && outer.converged,
            ldpc_converged: inner.converged,
            polar_converged: outer.converged,
            ldpc_iterations: inner.iterations,
            polar_iterations: outer.iterations,
            handoff_llrs,
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::channels::CLAMP;
    use crate::ldpc::DegreeDistribution;
    use rand::Rng;

    fn small(interleave: bool, handoff: Handoff) -> ConcatCode {
        let opts = ConcatOptions {
            interleave,
            handoff,
            mc_trials: 500,
            ..ConcatOptions::default()
        };
        build_concat(
            0.8,
            8,
            0.9,
            &DegreeDistribution::irregular_093(),
            &ChannelModel::awgn(0.6).unwrap(),
            &opts,
        )
        .unwrap()
    }

    fn bits(rng: &mut impl Rng, k: usize) -> Vec<u8> {
        (0..k).map(|_| rng.gen_range(0..2)).collect()
    }

    #[test]
    fn rate_bookkeeping() {
        assert_eq!(inner_length(1 << 16, 0.95), 68985);
        assert_eq!(inner_length(1 << 12, 0.95), 4311);
        assert!((0.979f64 * 0.95 - 0.93005).abs() < 1e-6);
        let c = small(false, Handoff::Posterior);
        assert_eq!(c.ldpc().k(), 256);
        assert_eq!(c.len(), inner_length(256, 0.9));
        assert_eq!(c.k(), (0.8 / 0.9 * 256.0_f64).round() as usize);
        assert_eq!(c.rate(), c.k() as f64 / c.len() as f64);
        assert!((c.polar_rate() * c.ldpc_rate() - c.rate()).abs() < 1e-15);
        assert!((c.rate() - 0.8).abs() <= 1e-2);
    }

    #[test]
    fn desk_scale_pair() {
        let opts = ConcatOptions { mc_trials: 200, ..ConcatOptions::default() };
        let c = build_concat(
            0.93,
            12,
            0.95,
            &DegreeDistribution::irregular_093(),
            &ChannelModel::awgn(0.5).unwrap(),
            &opts,
        )
        .unwrap();
        assert_eq!((c.len(), c.ldpc().k()), (4311, 4096));
        assert!((c.polar_rate() * c.ldpc_rate() - 0.93).abs() <= 1e-3);
    }

    #[test]
    fn rejects_bad_rates() {
        let d = DegreeDistribution::irregular_093();
        let ch = ChannelModel::awgn(0.5).unwrap();
        let o = ConcatOptions::default();
        assert!(build_concat(0.93, 8, 1.0, &d, &ch, &o).is_err());
        assert!(build_concat(0.96, 8, 0.95, &d, &ch, &o).is_err());
    }

    #[test]
    fn encoding_structure() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for interleave in [false, true] {
            let c = small(interleave, Handoff::Posterior);
            assert!(c.encode(&vec![0; c.k()]).unwrap().iter().all(|&b| b == 0));
            for _ in 0..20 {
                let u = bits(&mut rng, c.k());
                let v = bits(&mut rng, c.k());
                let x = c.encode(&u).unwrap();
                assert!(c.ldpc().syndrome_ok(&x));
                let block = c.ldpc().extract(&x);
                let xp = c.polar().encode(&u).unwrap();
                if interleave {
                    let mut a = block.clone();
                    let mut b = xp.clone();
                    a.sort_unstable();
                    b.sort_unstable();
                    assert_eq!(a, b);
                } else {
                    assert_eq!(block, xp);
                }
                let uv: Vec<u8> = u.iter().zip(&v).map(|(a, b)| a ^ b).collect();
                let xv = c.encode(&v).unwrap();
                let sum: Vec<u8> = x.iter().zip(&xv).map(|(a, b)| a ^ b).collect();
                assert_eq!(c.encode(&uv).unwrap(), sum);
            }
        }
    }

    #[test]
    fn noiseless_roundtrip_and_handoff() {
        let mut rng = ChaCha8Rng::seed_from_u64(4);
        let c = small(false, Handoff::Posterior);
        let mut dec = ConcatDecoder::new(&c);
        for _ in 0..10 {
            let u = bits(&mut rng, c.k());
            let x = c.encode(&u).unwrap();
            let r = dec.decode(&c, &ChannelModel::noiseless_llrs(&x)).unwrap();
            assert_eq!(r.info, u);
            assert!(r.converged);
            assert_eq!((r.ldpc_iterations, r.polar_iterations), (1, 1));
            assert_eq!(r.handoff_llrs.len(), 256);
        }
        // Handoff is the LDPC posterior at the information positions, untouched.
        let ch = ChannelModel::awgn(0.7).unwrap();
        let x = c.encode(&bits(&mut rng, c.k())).unwrap();
        let llrs = ch.transmit_llrs(&x, &mut rng);
        let r = dec.decode(&c, &llrs).unwrap();
        let inner = ldpc::ldpc_bp_decode(c.ldpc(), &llrs, c.ldpc_iters).unwrap();
        let expect: Vec<f64> = c.ldpc().info_positions().iter().map(|&p| inner.posterior[p]).collect();
        assert_eq!(r.handoff_llrs, expect);
        assert!(dec.decode(&c, &llrs[1..]).is_err());
    }

    #[test]
    fn variants_roundtrip() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let ch = ChannelModel::awgn(0.35).unwrap();
        for (il, h) in [(true, Handoff::Posterior), (false, Handoff::Extrinsic), (true, Handoff::Extrinsic)] {
            let c = small(il, h);
            let u = bits(&mut rng, c.k());
            let x = c.encode(&u).unwrap();
            let r = c.decode(&ch.transmit_llrs(&x, &mut rng)).unwrap();
            assert_eq!(r.info, u);
        }
    }

    #[test]
    fn inverted_llrs_fail_on_the_zero_word() {
        let c = small(false, Handoff::Posterior);
        let r = c.decode(&vec![-CLAMP; c.len()]).unwrap();
        assert!(r.info.iter().any(|&b| b == 1) || !r.converged);
    }
}
