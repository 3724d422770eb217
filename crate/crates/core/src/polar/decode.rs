//! Successive-cancellation and belief-propagation decoding.

use super::graph::FactorGraph;
use super::{transform_in_place, PolarCode};
use crate::channels::{clamp_llr, hard_decision, CLAMP};
use crate::error::{Error, Result};

/// Default iteration cap of the BP decoder.
pub const DEFAULT_BP_ITERS: usize = 60;

/// Largest magnitude of a tanh product before `atanh`.
const TANH_GUARD: f64 = 1.0 - 1e-12;

#[derive(Debug, Clone, PartialEq)]
pub struct DecodeResult {
    /// Estimated information bits, in information-set order.
    pub info: Vec<u8>,
    /// Re-encoded codeword estimate.
    pub codeword: Vec<u8>,
    pub converged: bool,
    pub iterations: usize,
    /// Posterior LLR of every input bit.
    pub input_llrs: Vec<f64>,
}

#[inline]
pub(crate) fn half_tanh(x: f64) -> f64 {
    // (1 - e^-|x|) / (1 + e^-|x|): plain exp is several times cheaper than
    // tanh, and the absolute error stays at rounding level
    let e = (-x.abs()).exp();
    ((1.0 - e) / (1.0 + e)).copysign(x)
}

#[inline]
pub(crate) fn double_atanh(t: f64) -> f64 {
    let a = t.abs().min(TANH_GUARD);
    ((1.0 + a) / (1.0 - a)).ln().copysign(t)
}

/// Check-node combine `2 atanh(tanh(a/2) tanh(b/2))`.
#[inline]
pub(crate) fn boxplus(a: f64, b: f64) -> f64 {
    double_atanh(half_tanh(a) * half_tanh(b))
}

/// Where successive cancellation takes its decisions from.
enum Decisions<'a> {
    /// Hard decisions, frozen inputs forced to zero.
    Hard(&'a [bool]),
    /// The true inputs (genie-aided decoding).
    Genie(&'a [u8]),
}

struct Sc<'a> {
    decisions: Decisions<'a>,
    u: Vec<u8>,
    llrs: Vec<f64>,
}

impl Sc<'_> {
    /// Decodes the inputs `offset..offset + llr.len()` and writes their
    /// re-encoding into `beta`.
    fn run(&mut self, llr: &[f64], offset: usize, beta: &mut [u8], scratch: &mut [f64]) {
        let len = llr.len();
        if len == 1 {
            let l = llr[0];
            let bit = match self.decisions {
                Decisions::Hard(frozen) if frozen[offset] => 0,
                Decisions::Hard(_) => hard_decision(l),
                Decisions::Genie(u) => u[offset],
            };
            self.u[offset] = bit;
            self.llrs[offset] = l;
            beta[0] = bit;
            return;
        }
        let half = len / 2;
        let (buf, rest) = scratch.split_at_mut(half);
        let (first, second) = llr.split_at(half);
        for ((o, &a), &b) in buf.iter_mut().zip(first).zip(second) {
            *o = boxplus(a, b);
        }
        let (beta_a, beta_b) = beta.split_at_mut(half);
        self.run(buf, offset, beta_a, rest);
        for (((o, &a), &b), &s) in buf.iter_mut().zip(first).zip(second).zip(beta_a.iter()) {
            *o = clamp_llr(if s == 0 { b + a } else { b - a });
        }
        self.run(buf, offset + half, beta_b, rest);
        for (a, &b) in beta_a.iter_mut().zip(beta_b.iter()) {
            *a ^= b;
        }
    }
}

fn run_sc(channel_llrs: &[f64], decisions: Decisions) -> (Vec<u8>, Vec<f64>, Vec<u8>) {
    let len = channel_llrs.len();
    let mut sc = Sc {
        decisions,
        u: vec![0; len],
        llrs: vec![0.0; len],
    };
    let mut beta = vec![0u8; len];
    let mut scratch = vec![0.0; len];
    sc.run(channel_llrs, 0, &mut beta, &mut scratch);
    (sc.u, sc.llrs, beta)
}

/// Per-input decision LLRs of SC decoding when every earlier input is known.
pub(crate) fn sc_genie_llrs(channel_llrs: &[f64], u: &[u8]) -> Vec<f64> {
    run_sc(channel_llrs, Decisions::Genie(u)).1
}

/// Successive-cancellation decoding. `converged` reports that no information
/// bit was decided from a zero LLR.
pub fn sc_decode(code: &PolarCode, channel_llrs: &[f64]) -> Result<DecodeResult> {
    if channel_llrs.len() != code.len() {
        return Err(Error::shape("channel LLRs", code.len(), channel_llrs.len()));
    }
    let (u, llrs, x) = run_sc(channel_llrs, Decisions::Hard(code.frozen_mask()));
    let converged = code.info_set().iter().all(|&i| llrs[i] != 0.0);
    Ok(DecodeResult {
        info: code.extract(&u),
        codeword: x,
        converged,
        iterations: 1,
        input_llrs: llrs,
    })
}

/// Sum-product decoder on the polar factor graph with reusable buffers.
///
/// Messages live on the `(n + 1) x N` grid: `left` flows from the code bits
/// towards the inputs, `right` the other way. One iteration is a full
/// right-to-left sweep followed by a full left-to-right sweep.
#[derive(Debug, Clone)]
pub struct BpDecoder {
    n: u32,
    len: usize,
    left: Vec<f64>,
    right: Vec<f64>,
    decisions: Vec<u8>,
}

impl BpDecoder {
    pub fn new(graph: &FactorGraph) -> Self {
        let size = (graph.n() as usize + 1) * graph.len();
        BpDecoder {
            n: graph.n(),
            len: graph.len(),
            left: vec![0.0; size],
            right: vec![0.0; size],
            decisions: vec![0; size],
        }
    }

    pub fn decode(
        &mut self,
        graph: &FactorGraph,
        code: &PolarCode,
        channel_llrs: &[f64],
        max_iters: usize,
    ) -> Result<DecodeResult> {
        let len = self.len;
        if graph.len() != len || graph.n() != self.n {
            return Err(Error::shape("factor graph length", len, graph.len()));
        }
        if code.len() != len {
            return Err(Error::shape("code length", len, code.len()));
        }
        if channel_llrs.len() != len {
            return Err(Error::shape("channel LLRs", len, channel_llrs.len()));
        }
        if max_iters == 0 {
            return Err(Error::Parameter("max_iters must be >= 1".into()));
        }
        let n = self.n as usize;
        self.left.fill(0.0);
        self.right.fill(0.0);
        self.left[n * len..].copy_from_slice(channel_llrs);
        for (r, &f) in self.right[..len].iter_mut().zip(code.frozen_mask()) {
            *r = if f { CLAMP } else { 0.0 };
        }

        let mut iterations = 0;
        let mut converged = false;
        while iterations < max_iters {
            iterations += 1;
            self.sweep_left();
            self.sweep_right();
            if self.hard_decisions_consistent(graph, code) {
                converged = true;
                break;
            }
        }

        let input_llrs: Vec<f64> = self.left[..len]
            .iter()
            .zip(&self.right[..len])
            .map(|(l, r)| l + r)
            .collect();
        let u: Vec<u8> = input_llrs
            .iter()
            .zip(code.frozen_mask())
            .map(|(&l, &f)| if f { 0 } else { hard_decision(l) })
            .collect();
        let mut codeword = u.clone();
        transform_in_place(&mut codeword);
        Ok(DecodeResult {
            info: code.extract(&u),
            codeword,
            converged,
            iterations,
            input_llrs,
        })
    }

    fn sweep_left(&mut self) {
        let len = self.len;
        for s in (1..=self.n as usize).rev() {
            let h = 1usize << (s - 1);
            let (lower, upper) = self.left.split_at_mut(s * len);
            let l_out = &mut lower[(s - 1) * len..];
            let l_in = &upper[..len];
            let r_in = &self.right[(s - 1) * len..s * len];
            for base in (0..len).step_by(2 * h) {
                for j in base..base + h {
                    let (lj, ljh) = (l_in[j], l_in[j + h]);
                    let (rj, rjh) = (r_in[j], r_in[j + h]);
                    let t_lj = half_tanh(lj);
                    l_out[j] = double_atanh(t_lj * half_tanh(ljh + rjh));
                    l_out[j + h] = clamp_llr(if rj == 0.0 {
                        ljh
                    } else {
                        double_atanh(half_tanh(rj) * t_lj) + ljh
                    });
                }
            }
        }
    }

    fn sweep_right(&mut self) {
        let len = self.len;
        for s in 1..=self.n as usize {
            let h = 1usize << (s - 1);
            let (lower, upper) = self.right.split_at_mut(s * len);
            let r_in = &lower[(s - 1) * len..];
            let r_out = &mut upper[..len];
            let l_in = &self.left[s * len..(s + 1) * len];
            for base in (0..len).step_by(2 * h) {
                for j in base..base + h {
                    let (lj, ljh) = (l_in[j], l_in[j + h]);
                    let (rj, rjh) = (r_in[j], r_in[j + h]);
                    if rj == 0.0 {
                        r_out[j] = 0.0;
                        r_out[j + h] = rjh;
                    } else {
                        let t_rj = half_tanh(rj);
                        r_out[j] = double_atanh(t_rj * half_tanh(ljh + rjh));
                        r_out[j + h] = clamp_llr(double_atanh(t_rj * half_tanh(lj)) + rjh);
                    }
                }
            }
        }
    }

    /// All checks satisfied by the hard decisions and no variable left
    /// without information. Frozen inputs count as known zeros.
    fn hard_decisions_consistent(&mut self, graph: &FactorGraph, code: &PolarCode) -> bool {
        let len = self.len;
        for (v, ((d, &l), &r)) in self
            .decisions
            .iter_mut()
            .zip(&self.left)
            .zip(&self.right)
            .enumerate()
        {
            if v < len && code.is_frozen(v) {
                *d = 0;
                continue;
            }
            let p = l + r;
            if p == 0.0 {
                return false;
            }
            *d = hard_decision(p);
        }
        graph.all_checks_satisfied(&self.decisions)
    }

    /// Right-moving messages, for diagnostics.
    pub fn right_messages(&self) -> &[f64] {
        &self.right
    }

    /// Left-moving messages, for diagnostics.
    pub fn left_messages(&self) -> &[f64] {
        &self.left
    }
}

/// One-shot belief-propagation decoding.
pub fn bp_decode(
    graph: &FactorGraph,
    code: &PolarCode,
    channel_llrs: &[f64],
    max_iters: usize,
) -> Result<DecodeResult> {
    BpDecoder::new(graph).decode(graph, code, channel_llrs, max_iters)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::channels::ChannelModel;
    use crate::polar::{bec_reliabilities, build_factor_graph, select_info_set, stopping_tree};
    use crate::test_support::{genie_decodable, max_stopping_subset};
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn random_bits(rng: &mut impl Rng, k: usize) -> Vec<u8> {
        (0..k).map(|_| rng.gen_range(0..2)).collect()
    }

    #[test]
    fn boxplus_properties() {
        assert_eq!(boxplus(CLAMP, 0.0), 0.0);
        assert!(boxplus(CLAMP, CLAMP) > 28.0);
        assert!(boxplus(CLAMP, -CLAMP) < -28.0);
        let (a, b) = (1.3, -0.7);
        let exact = 2.0 * ((a / 2.0_f64).tanh() * (b / 2.0_f64).tanh()).atanh();
        assert!((boxplus(a, b) - exact).abs() < 1e-14);
    }

    #[test]
    fn sc_noiseless_and_clean_bec() {
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        let code = select_info_set(&bec_reliabilities(6, 0.4).unwrap(), 30).unwrap();
        for _ in 0..20 {
            let info = random_bits(&mut rng, code.k());
            let x = code.encode(&info).unwrap();
            let res = sc_decode(&code, &ChannelModel::noiseless_llrs(&x)).unwrap();
            assert_eq!(res.info, info);
            assert_eq!(res.codeword, x);
            assert!(res.converged);
            let bec = ChannelModel::bec(0.0).unwrap();
            let res = sc_decode(&code, &bec.transmit_llrs(&x, &mut rng)).unwrap();
            assert_eq!(res.info, info);
        }
        assert!(sc_decode(&code, &[0.0; 3]).is_err());
    }

    #[test]
    fn genie_sc_failures_match_decodability_oracle() {
        let mut rng = ChaCha8Rng::seed_from_u64(10);
        for n in 1..=3u32 {
            let len = 1usize << n;
            for _ in 0..200 {
                let erased: u64 = rng.gen_range(0..1u64 << len);
                let u = random_bits(&mut rng, len);
                let mut x = u.clone();
                transform_in_place(&mut x);
                let llrs: Vec<f64> = x
                    .iter()
                    .enumerate()
                    .map(|(j, &b)| {
                        if erased >> j & 1 == 1 {
                            0.0
                        } else if b == 0 {
                            CLAMP
                        } else {
                            -CLAMP
                        }
                    })
                    .collect();
                let genie = sc_genie_llrs(&llrs, &u);
                for i in 0..len {
                    let fails = genie[i] == 0.0;
                    assert_eq!(fails, !genie_decodable(n, erased, i), "n={n} E={erased:b} i={i}");
                    if !fails {
                        assert_eq!(hard_decision(genie[i]), u[i]);
                    }
                }
            }
        }
    }

    #[test]
    fn bp_noiseless_converges_in_one_iteration() {
        let mut rng = ChaCha8Rng::seed_from_u64(12);
        for n in [3u32, 6, 9] {
            let g = build_factor_graph(n).unwrap();
            let len = 1usize << n;
            let code = select_info_set(&bec_reliabilities(n, 0.5).unwrap(), len / 2).unwrap();
            let info = random_bits(&mut rng, code.k());
            let x = code.encode(&info).unwrap();
            let res = bp_decode(&g, &code, &ChannelModel::noiseless_llrs(&x), 60).unwrap();
            assert!(res.converged);
            assert_eq!(res.iterations, 1);
            assert_eq!(res.info, info);
            assert_eq!(res.codeword, x);
        }
    }

    #[test]
    fn bp_bec_examples_n8() {
        let g = build_factor_graph(3).unwrap();
        let code = PolarCode::from_info_set(3, [3, 5, 6, 7]).unwrap();
        let x = vec![0u8; 8];
        let mut llrs = ChannelModel::noiseless_llrs(&x);
        llrs[0] = 0.0;
        let res = bp_decode(&g, &code, &llrs, 60).unwrap();
        assert!(res.converged);
        assert_eq!(res.info, vec![0; 4]);

        let tree = stopping_tree(&g, &code, 7).unwrap();
        let mut llrs = ChannelModel::noiseless_llrs(&x);
        for &j in &tree.leaves {
            llrs[j] = 0.0;
        }
        let res = bp_decode(&g, &code, &llrs, 60).unwrap();
        assert!(!res.converged);
        assert_eq!(res.input_llrs[7], 0.0);
    }

    #[test]
    fn bp_bec_failures_are_stopping_sets_n8() {
        let g = build_factor_graph(3).unwrap();
        let code = PolarCode::from_info_set(3, [3, 5, 6, 7]).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(13);
        let mut dec = BpDecoder::new(&g);
        for erased in 0u32..256 {
            let info = random_bits(&mut rng, 4);
            let x = code.encode(&info).unwrap();
            let llrs: Vec<f64> = x
                .iter()
                .enumerate()
                .map(|(j, &b)| if erased >> j & 1 == 1 { 0.0 } else if b == 0 { CLAMP } else { -CLAMP })
                .collect();
            let res = dec.decode(&g, &code, &llrs, 60).unwrap();
            let stuck = max_stopping_subset(&g, &code, erased as u64);
            for (i, &l) in res.input_llrs.iter().enumerate() {
                if code.is_frozen(i) {
                    assert!(l >= 0.0);
                    continue;
                }
                assert_eq!(l == 0.0, stuck.contains(&g.var(0, i)), "E={erased:08b} i={i}");
            }
            // messages are exactly zero, or confident and correct
            let truth = g.propagate(&code.embed(&info).unwrap()).unwrap();
            for (v, (&l, &r)) in dec.left_messages().iter().zip(dec.right_messages()).enumerate() {
                for m in [l, r] {
                    assert!(m == 0.0 || (m.abs() >= CLAMP / 2.0 && hard_decision(m) == truth[v]), "{m}");
                }
            }
        }
    }

    #[test]
    fn bp_agrees_with_sc_on_bec_when_resolved() {
        let mut rng = ChaCha8Rng::seed_from_u64(14);
        for n in [2u32, 3, 4, 6, 8] {
            let len = 1usize << n;
            let g = build_factor_graph(n).unwrap();
            let code = select_info_set(&bec_reliabilities(n, 0.4).unwrap(), len / 2).unwrap();
            let ch = ChannelModel::bec(0.35).unwrap();
            for _ in 0..100 {
                let info = random_bits(&mut rng, code.k());
                let x = code.encode(&info).unwrap();
                let llrs = ch.transmit_llrs(&x, &mut rng);
                let bp = bp_decode(&g, &code, &llrs, 60).unwrap();
                if bp.converged {
                    assert_eq!(bp.info, info);
                    let sc = sc_decode(&code, &llrs).unwrap();
                    if sc.converged {
                        assert_eq!(sc.info, bp.info);
                    }
                }
            }
        }
    }

    #[test]
    fn bp_never_flips_frozen_bits_on_awgn() {
        let mut rng = ChaCha8Rng::seed_from_u64(15);
        let n = 7;
        let g = build_factor_graph(n).unwrap();
        let code = select_info_set(&bec_reliabilities(n, 0.5).unwrap(), 64).unwrap();
        let ch = ChannelModel::awgn(1.1).unwrap();
        for _ in 0..30 {
            let info = random_bits(&mut rng, code.k());
            let x = code.encode(&info).unwrap();
            let res = bp_decode(&g, &code, &ch.transmit_llrs(&x, &mut rng), 60).unwrap();
            for (i, &l) in res.input_llrs.iter().enumerate() {
                if code.is_frozen(i) {
                    assert!(l >= 0.0);
                }
            }
        }
    }

    #[test]
    fn bp_rejects_bad_shapes() {
        let g = build_factor_graph(3).unwrap();
        let code = PolarCode::from_info_set(3, [3, 5, 6, 7]).unwrap();
        assert!(bp_decode(&g, &code, &[0.0; 4], 10).is_err());
        assert!(bp_decode(&g, &code, &[0.0; 8], 0).is_err());
        let other = PolarCode::from_info_set(4, [15]).unwrap();
        assert!(bp_decode(&g, &other, &[0.0; 16], 10).is_err());
    }
}
