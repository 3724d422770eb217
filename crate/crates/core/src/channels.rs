//! Binary-input memoryless channels: erasure, symmetric and Gaussian.
//!
//! All channels share one LLR convention, `ln P(y|0) - ln P(y|1)`, and the
//! BPSK map `0 -> +1`, `1 -> -1` for the Gaussian channel. Infinite LLRs are
//! saturated at [`CLAMP`].

use std::fmt;
use std::num::NonZeroUsize;
use std::str::FromStr;
use std::sync::OnceLock;

use gauss_quad::GaussHermite;
use rand::Rng;
use rand_distr::StandardNormal;

use crate::error::{Error, Result};

/// Saturation magnitude for log-likelihood ratios.
pub const CLAMP: f64 = 30.0;

/// Number of Gauss-Hermite nodes used for the BIAWGN capacity integral.
pub const HERMITE_NODES: usize = 96;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum ChannelFamily {
    /// Binary erasure channel, parameter = erasure probability.
    Bec,
    /// Binary symmetric channel, parameter = crossover probability.
    Bsc,
    /// BPSK over real AWGN with unit symbol energy, parameter = noise std-dev.
    Biawgn,
}

impl ChannelFamily {
    pub fn name(self) -> &'static str {
        match self {
            ChannelFamily::Bec => "bec",
            ChannelFamily::Bsc => "bsc",
            ChannelFamily::Biawgn => "awgn",
        }
    }
}

impl fmt::Display for ChannelFamily {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// A channel family together with its parameter. Larger parameters are
/// always worse channels.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ChannelModel {
    family: ChannelFamily,
    param: f64,
}

impl ChannelModel {
    pub fn new(family: ChannelFamily, param: f64) -> Result<Self> {
        let ok = match family {
            ChannelFamily::Bec => (0.0..=1.0).contains(&param),
            ChannelFamily::Bsc => (0.0..=0.5).contains(&param),
            ChannelFamily::Biawgn => param > 0.0 && param.is_finite(),
        };
        if !ok {
            return Err(Error::Parameter(format!(
                "{family} parameter {param} out of range"
            )));
        }
        Ok(ChannelModel { family, param })
    }

    pub fn bec(erasure: f64) -> Result<Self> {
        Self::new(ChannelFamily::Bec, erasure)
    }

    pub fn bsc(crossover: f64) -> Result<Self> {
        Self::new(ChannelFamily::Bsc, crossover)
    }

    pub fn awgn(sigma: f64) -> Result<Self> {
        Self::new(ChannelFamily::Biawgn, sigma)
    }

    /// Gaussian channel at the given Eb/N0 (dB) for a code of rate `rate`,
    /// using `Eb = 1 / (2 R sigma^2)`.
    pub fn awgn_ebn0_db(ebn0_db: f64, rate: f64) -> Result<Self> {
        if !(rate > 0.0 && rate <= 1.0) {
            return Err(Error::Parameter(format!("rate {rate} out of (0, 1]")));
        }
        let ebn0 = 10f64.powf(ebn0_db / 10.0);
        Self::awgn((1.0 / (2.0 * rate * ebn0)).sqrt())
    }

    pub fn family(&self) -> ChannelFamily {
        self.family
    }

    pub fn param(&self) -> f64 {
        self.param
    }

    /// Same family, different parameter.
    pub fn with_param(&self, param: f64) -> Result<Self> {
        Self::new(self.family, param)
    }

    /// Eb/N0 in dB of a Gaussian channel carrying a rate-`rate` code.
    pub fn ebn0_db(&self, rate: f64) -> Option<f64> {
        match self.family {
            ChannelFamily::Biawgn => {
                Some(10.0 * (1.0 / (2.0 * rate * self.param * self.param)).log10())
            }
            _ => None,
        }
    }

    /// Capacity in bits per channel use.
    pub fn capacity(&self) -> f64 {
        match self.family {
            ChannelFamily::Bec => 1.0 - self.param,
            ChannelFamily::Bsc => 1.0 - binary_entropy(self.param),
            ChannelFamily::Biawgn => biawgn_capacity(self.param),
        }
    }

    /// Sends `codeword` through independent uses of the channel.
    pub fn transmit<R: Rng + ?Sized>(&self, codeword: &[u8], rng: &mut R) -> Observation {
        match self.family {
            ChannelFamily::Bec => Observation::Erasure(
                codeword
                    .iter()
                    .map(|&b| (!rng.gen_bool(self.param)).then_some(b))
                    .collect(),
            ),
            ChannelFamily::Bsc => Observation::Binary(
                codeword
                    .iter()
                    .map(|&b| b ^ rng.gen_bool(self.param) as u8)
                    .collect(),
            ),
            ChannelFamily::Biawgn => Observation::Real(
                codeword
                    .iter()
                    .map(|&b| {
                        let noise: f64 = rng.sample(StandardNormal);
                        bpsk(b) + self.param * noise
                    })
                    .collect(),
            ),
        }
    }

    /// Channel LLRs of an observation drawn from this channel.
    pub fn llr(&self, obs: &Observation) -> Result<Vec<f64>> {
        match (self.family, obs) {
            (ChannelFamily::Bec, Observation::Erasure(ys)) => Ok(ys
                .iter()
                .map(|y| match y {
                    None => 0.0,
                    Some(0) => CLAMP,
                    Some(_) => -CLAMP,
                })
                .collect()),
            (ChannelFamily::Bsc, Observation::Binary(ys)) => {
                let mag = bsc_llr_magnitude(self.param);
                Ok(ys.iter().map(|&y| if y == 0 { mag } else { -mag }).collect())
            }
            (ChannelFamily::Biawgn, Observation::Real(ys)) => {
                let scale = 2.0 / (self.param * self.param);
                Ok(ys.iter().map(|&y| clamp_llr(scale * y)).collect())
            }
            (family, _) => Err(Error::Domain(format!(
                "observation type does not match {family} channel"
            ))),
        }
    }

    /// `transmit` followed by `llr`.
    pub fn transmit_llrs<R: Rng + ?Sized>(&self, codeword: &[u8], rng: &mut R) -> Vec<f64> {
        let obs = self.transmit(codeword, rng);
        self.llr(&obs).expect("observation produced by this channel")
    }

    /// LLRs of a noise-free reception of `codeword`.
    pub fn noiseless_llrs(codeword: &[u8]) -> Vec<f64> {
        codeword.iter().map(|&b| if b == 0 { CLAMP } else { -CLAMP }).collect()
    }
}

impl fmt::Display for ChannelModel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.family {
            ChannelFamily::Biawgn => write!(f, "awgn-sigma:{}", self.param),
            family => write!(f, "{family}:{}", self.param),
        }
    }
}

/// True iff `a` is a degraded version of `b` (`a` is no better than `b`).
pub fn is_degraded(a: &ChannelModel, b: &ChannelModel) -> Result<bool> {
    if a.family != b.family {
        return Err(Error::UnsupportedComparison(a.family.name(), b.family.name()));
    }
    Ok(a.param >= b.param)
}

/// Channel observation vector.
#[derive(Debug, Clone, PartialEq)]
pub enum Observation {
    /// BEC output; `None` marks an erasure.
    Erasure(Vec<Option<u8>>),
    /// BSC output bits.
    Binary(Vec<u8>),
    /// Gaussian channel output amplitudes.
    Real(Vec<f64>),
}

impl Observation {
    pub fn len(&self) -> usize {
        match self {
            Observation::Erasure(v) => v.len(),
            Observation::Binary(v) => v.len(),
            Observation::Real(v) => v.len(),
        }
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }
}

/// A channel as written on the command line. The Eb/N0 form needs the code
/// rate before it becomes a [`ChannelModel`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum ChannelSpec {
    Model(ChannelModel),
    EbN0Db(f64),
}

impl ChannelSpec {
    pub fn resolve(&self, rate: f64) -> Result<ChannelModel> {
        match *self {
            ChannelSpec::Model(m) => Ok(m),
            ChannelSpec::EbN0Db(db) => ChannelModel::awgn_ebn0_db(db, rate),
        }
    }
}

impl FromStr for ChannelSpec {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let (kind, value) = s
            .split_once(':')
            .ok_or_else(|| Error::Config(format!("channel `{s}`: expected <kind>:<value>")))?;
        let value: f64 = value
            .trim()
            .parse()
            .map_err(|_| Error::Config(format!("channel `{s}`: bad number")))?;
        match kind.trim() {
            "bec" => ChannelModel::bec(value).map(ChannelSpec::Model),
            "bsc" => ChannelModel::bsc(value).map(ChannelSpec::Model),
            "awgn-sigma" => ChannelModel::awgn(value).map(ChannelSpec::Model),
            "awgn-ebn0db" => Ok(ChannelSpec::EbN0Db(value)),
            other => Err(Error::Config(format!("unknown channel kind `{other}`"))),
        }
    }
}

#[inline]
pub fn bpsk(bit: u8) -> f64 {
    if bit == 0 {
        1.0
    } else {
        -1.0
    }
}

#[inline]
pub fn clamp_llr(x: f64) -> f64 {
    x.clamp(-CLAMP, CLAMP)
}

/// Hard decision: negative LLR means bit 1, ties go to 0.
#[inline]
pub fn hard_decision(llr: f64) -> u8 {
    (llr < 0.0) as u8
}

fn bsc_llr_magnitude(p: f64) -> f64 {
    if p <= 0.0 {
        CLAMP
    } else {
        clamp_llr(((1.0 - p) / p).ln())
    }
}

/// h2(p) in bits.
pub fn binary_entropy(p: f64) -> f64 {
    let term = |x: f64| if x <= 0.0 { 0.0 } else { -x * x.log2() };
    term(p) + term(1.0 - p)
}

/// `ln(1 + e^z)` without overflow.
fn softplus(z: f64) -> f64 {
    if z > 0.0 {
        z + (-z).exp().ln_1p()
    } else {
        z.exp().ln_1p()
    }
}

fn hermite_rule() -> &'static GaussHermite {
    static RULE: OnceLock<GaussHermite> = OnceLock::new();
    RULE.get_or_init(|| GaussHermite::new(NonZeroUsize::new(HERMITE_NODES).unwrap()))
}

/// `I(X;Y)` for equiprobable BPSK in AWGN of standard deviation `sigma`:
/// `1 - E[log2(1 + exp(-2Y/sigma^2))]` with `Y ~ N(1, sigma^2)`.
fn biawgn_capacity(sigma: f64) -> f64 {
    let s2 = sigma * sigma;
    let root2 = std::f64::consts::SQRT_2;
    let expect = hermite_rule().integrate(|t| {
        let y = 1.0 + root2 * sigma * t;
        softplus(-2.0 * y / s2)
    }) / std::f64::consts::PI.sqrt();
    (1.0 - expect / std::f64::consts::LN_2).clamp(0.0, 1.0)
}

/// Parameter at which the channel's capacity equals `capacity`, found by
/// bisection. Used to pick design channels for a target rate.
pub fn param_for_capacity(family: ChannelFamily, capacity: f64) -> Result<f64> {
    if !(0.0..1.0).contains(&capacity) || capacity <= 0.0 {
        return Err(Error::Parameter(format!("capacity {capacity} out of (0, 1)")));
    }
    let (mut lo, mut hi) = match family {
        ChannelFamily::Bec => return Ok(1.0 - capacity),
        ChannelFamily::Bsc => (0.0, 0.5),
        ChannelFamily::Biawgn => (1e-3, 100.0),
    };
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if ChannelModel::new(family, mid)?.capacity() > capacity {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Ok(0.5 * (lo + hi))
}
