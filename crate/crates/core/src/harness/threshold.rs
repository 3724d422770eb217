use super::scheme::Scheme;
use super::sim::{simulate_point, BerPoint, SimOptions, StopRule};
use crate::channels::{ChannelFamily, ChannelModel};
use crate::error::{Error, Result};

/// Bisection on the channel parameter for the worst channel still meeting a
/// BER target.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ThresholdSearch {
    pub family: ChannelFamily,
    pub target_ber: f64,
    /// Good end of the bracket; BER there must be at or below target.
    pub lo: f64,
    /// Bad end; BER there must exceed the target.
    pub hi: f64,
    pub tol: f64,
    pub stop: StopRule,
    pub seed: u64,
    pub threads: Option<usize>,
}

impl ThresholdSearch {
    pub fn new(family: ChannelFamily, target_ber: f64, lo: f64, hi: f64, tol: f64) -> Self {
        ThresholdSearch {
            family,
            target_ber,
            lo,
            hi,
            tol,
            stop: StopRule {
                min_frame_errors: 50,
                max_frames: 1_000_000,
            },
            seed: 0,
            threads: None,
        }
    }

    fn validate(&self) -> Result<()> {
        if !(self.target_ber > 0.0 && self.target_ber < 1.0) {
            return Err(Error::Parameter(format!("target BER {} out of (0, 1)", self.target_ber)));
        }
        if !(self.lo < self.hi) || !(self.tol > 0.0) {
            return Err(Error::Parameter(format!(
                "need lo < hi and tol > 0, got [{}, {}] tol {}",
                self.lo, self.hi, self.tol
            )));
        }
        ChannelModel::new(self.family, self.lo)?;
        ChannelModel::new(self.family, self.hi)?;
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Threshold {
    /// Worst parameter measured at or below the target.
    pub param: f64,
    /// Final bracket, `hi - lo <= tol`.
    pub lo: f64,
    pub hi: f64,
    pub evaluations: Vec<BerPoint>,
}

/// Every evaluation reuses point index 0, so all parameters see the same
/// per-frame random streams (common random numbers). That keeps the
/// measured BER monotone in the parameter far more often than independent
/// draws would, which the bisection relies on.
pub fn find_threshold_param(scheme: &Scheme, search: &ThresholdSearch) -> Result<Threshold> {
    search.validate()?;
    let opts = SimOptions {
        stop: search.stop,
        seed: search.seed,
        threads: search.threads,
        timing: false,
    };
    let mut evaluations = Vec::new();
    let mut eval = |param: f64| -> Result<f64> {
        let ch = ChannelModel::new(search.family, param)?;
        let p = simulate_point(scheme, &ch, 0, &opts)?;
        let ber = p.ber();
        evaluations.push(p);
        Ok(ber)
    };
    let (mut lo, mut hi) = (search.lo, search.hi);
    let (ber_lo, ber_hi) = (eval(lo)?, eval(hi)?);
    if ber_lo > search.target_ber || ber_hi <= search.target_ber {
        return Err(Error::Bracket {
            target: search.target_ber,
            lo,
            hi,
            ber_lo,
            ber_hi,
        });
    }
    while hi - lo > search.tol {
        let mid = 0.5 * (lo + hi);
        if eval(mid)? <= search.target_ber {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Ok(Threshold {
        param: lo,
        lo,
        hi,
        evaluations,
    })
}

#[derive(Debug, Clone, PartialEq)]
pub struct Gap {
    /// `C(param*) - R` in bits per channel use.
    pub gap: f64,
    /// Capacity spread across the final bracket.
    pub tolerance: f64,
    pub rate: f64,
    pub threshold: Threshold,
}

/// Distance from capacity at the threshold channel, for a scheme of rate
/// `rate` (normally [`Scheme::rate`]).
pub fn gap_to_capacity(scheme: &Scheme, rate: f64, search: &ThresholdSearch) -> Result<Gap> {
    let threshold = find_threshold_param(scheme, search)?;
    let cap = |p: f64| ChannelModel::new(search.family, p).map(|c| c.capacity());
    let c_lo = cap(threshold.lo)?;
    let c_hi = cap(threshold.hi)?;
    Ok(Gap {
        gap: c_lo - rate,
        tolerance: (c_lo - c_hi).abs(),
        rate,
        threshold,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::polar::{bec_reliabilities, select_info_set};

    #[test]
    fn uncoded_bsc_threshold_is_the_crossover() {
        let mut s = ThresholdSearch::new(ChannelFamily::Bsc, 1e-2, 0.001, 0.05, 1e-4);
        s.stop = StopRule::new(1000, 1_000_000).unwrap();
        s.seed = 3;
        let t = find_threshold_param(&Scheme::uncoded(1000), &s).unwrap();
        assert!(t.hi - t.lo <= 1e-4);
        assert!((t.param - 1e-2).abs() <= 5e-4, "p* = {}", t.param);
        let again = find_threshold_param(&Scheme::uncoded(1000), &s).unwrap();
        assert_eq!(t.param, again.param);
    }

    #[test]
    fn unbracketed_target_reports_endpoint_bers() {
        let s = ThresholdSearch::new(ChannelFamily::Bsc, 1e-2, 0.02, 0.05, 1e-3);
        match find_threshold_param(&Scheme::uncoded(200), &s) {
            Err(Error::Bracket { ber_lo, ber_hi, .. }) => {
                assert!(ber_lo > 1e-2 && ber_hi > ber_lo);
            }
            other => panic!("expected bracket error, got {other:?}"),
        }
        let bad = ThresholdSearch::new(ChannelFamily::Bsc, 1e-2, 0.05, 0.02, 1e-3);
        assert!(matches!(find_threshold_param(&Scheme::uncoded(8), &bad), Err(Error::Parameter(_))));
    }

    fn polar_bec_gap(n: u32) -> Gap {
        let code = select_info_set(&bec_reliabilities(n, 0.5).unwrap(), 1 << (n - 1)).unwrap();
        let scheme = Scheme::polar_bp(code, 60).unwrap();
        let mut s = ThresholdSearch::new(ChannelFamily::Bec, 1e-3, 0.2, 0.5, 5e-3);
        s.stop = StopRule::new(50, 4000).unwrap();
        s.seed = 11;
        gap_to_capacity(&scheme, 0.5, &s).unwrap()
    }

    #[test]
    fn polar_bec_threshold_improves_with_length() {
        let g8 = polar_bec_gap(8);
        let g10 = polar_bec_gap(10);
        for g in [&g8, &g10] {
            assert!(g.threshold.param > 0.0 && g.threshold.param < 0.5);
            assert!(g.gap > 0.0);
        }
        assert!(g10.threshold.param > g8.threshold.param, "{} vs {}", g10.threshold.param, g8.threshold.param);
        assert!(g10.gap < g8.gap);
    }
}
