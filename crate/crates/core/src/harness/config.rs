use std::fs;
use std::path::{Path, PathBuf};

use serde::Deserialize;

use super::scheme::{Scheme, SchemeKind};
use super::sim::{SimOptions, StopRule};
use super::threshold::ThresholdSearch;
use crate::channels::{ChannelFamily, ChannelModel, ChannelSpec};
use crate::concat::{ConcatCode, ConcatOptions, Handoff};
use crate::error::{Error, Result};
use crate::ldpc::{LdpcCode, DEFAULT_LDPC_ITERS};
use crate::polar::{PolarCode, DEFAULT_BP_ITERS};
use crate::ratecomp::PuncturingPattern;

/// Everything `simulate`, `threshold` and `gap` need. Every field is
/// optional so a file and command-line overrides can be layered with
/// [`SimConfig::overlay`].
#[derive(Debug, Clone, Default, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SimConfig {
    pub scheme: Option<String>,
    pub frozen: Option<PathBuf>,
    pub alist: Option<PathBuf>,
    pub pattern: Option<PathBuf>,
    /// Block length of the uncoded scheme.
    pub info_bits: Option<usize>,
    pub channels: Option<Vec<String>>,
    pub min_frame_errors: Option<u64>,
    pub max_frames: Option<u64>,
    pub seed: Option<u64>,
    pub polar_iters: Option<usize>,
    pub ldpc_iters: Option<usize>,
    pub threads: Option<usize>,
    pub timing: Option<bool>,
    pub output: Option<PathBuf>,
    pub family: Option<String>,
    pub target_ber: Option<f64>,
    pub lo: Option<f64>,
    pub hi: Option<f64>,
    pub tol: Option<f64>,
    /// Rate for the gap computation; defaults to the scheme's own.
    pub rate: Option<f64>,
    /// Concatenated scheme: declared effective and inner rates, checked
    /// against the loaded codes.
    pub r_eff: Option<f64>,
    pub r_l: Option<f64>,
    pub interleave: Option<bool>,
    pub interleaver_seed: Option<u64>,
    pub handoff: Option<String>,
}


macro_rules! overlay_fields {
    ($base:ident, $over:ident, $($f:ident),*) => {
        $( if $over.$f.is_some() { $base.$f = $over.$f; } )*
    };
}

fn rebase(dir: &Path, p: &mut Option<PathBuf>) {
    if let Some(path) = p {
        if path.is_relative() {
            *path = dir.join(&*path);
        }
    }
}

fn need<'a, T>(v: &'a Option<T>, key: &str) -> Result<&'a T> {
    v.as_ref().ok_or_else(|| Error::Config(format!("missing `{key}`")))
}

fn existing(p: &Option<PathBuf>, key: &str) -> Result<PathBuf> {
    let p = need(p, key)?;
    if !p.is_file() {
        return Err(Error::Config(format!("{key} file {} not found", p.display())));
    }
    Ok(p.clone())
}

pub fn parse_family(s: &str) -> Result<ChannelFamily> {
    match s {
        "bec" => Ok(ChannelFamily::Bec),
        "bsc" => Ok(ChannelFamily::Bsc),
        "awgn" | "awgn-sigma" | "biawgn" => Ok(ChannelFamily::Biawgn),
        _ => Err(Error::Config(format!("unknown channel family `{s}`"))),
    }
}

pub fn parse_handoff(s: &str) -> Result<Handoff> {
    match s {
        "posterior" => Ok(Handoff::Posterior),
        "extrinsic" => Ok(Handoff::Extrinsic),
        _ => Err(Error::Config(format!("unknown handoff `{s}`"))),
    }
}

impl SimConfig {
    /// Parses TOML; relative artifact paths are taken relative to `dir`.
    pub fn parse(text: &str, dir: &Path) -> Result<Self> {
        let mut c: SimConfig = toml::from_str(text).map_err(|e| Error::Config(e.to_string()))?;
        for p in [&mut c.frozen, &mut c.alist, &mut c.pattern] {
            rebase(dir, p);
        }
        Ok(c)
    }

    pub fn read(path: impl AsRef<Path>) -> Result<Self> {
        let path = path.as_ref();
        let text = fs::read_to_string(path)
            .map_err(|e| Error::Config(format!("{}: {e}", path.display())))?;
        Self::parse(&text, path.parent().unwrap_or(Path::new(".")))
    }

    /// `self` with every key that `over` sets replaced.
    pub fn overlay(mut self, over: SimConfig) -> Self {
        overlay_fields!(
            self, over, scheme, frozen, alist, pattern, info_bits, channels,
            min_frame_errors, max_frames, seed, polar_iters, ldpc_iters, threads, timing,
            output, family, target_ber, lo, hi, tol, rate, r_eff, r_l, interleave,
            interleaver_seed, handoff
        );
        self
    }

    pub fn scheme_kind(&self) -> Result<SchemeKind> {
        need(&self.scheme, "scheme")?.parse()
    }

    /// Loads the artifacts the scheme names. Missing files are config
    /// errors, raised before anything is simulated.
    pub fn build_scheme(&self) -> Result<Scheme> {
        let kind = self.scheme_kind()?;
        let polar_iters = self.polar_iters.unwrap_or(DEFAULT_BP_ITERS);
        let ldpc_iters = self.ldpc_iters.unwrap_or(DEFAULT_LDPC_ITERS);
        match kind {
            SchemeKind::Uncoded => Ok(Scheme::uncoded(*need(&self.info_bits, "info_bits")?)),
            SchemeKind::PolarSc => Ok(Scheme::polar_sc(PolarCode::read_info_file(existing(&self.frozen, "frozen")?)?)),
            SchemeKind::PolarBp => {
                Scheme::polar_bp(PolarCode::read_info_file(existing(&self.frozen, "frozen")?)?, polar_iters)
            }
            // a nested-family level is stored as an ordinary frozen file
            SchemeKind::Ucarc => {
                Scheme::ucarc_level(PolarCode::read_info_file(existing(&self.frozen, "frozen")?)?, polar_iters)
            }
            SchemeKind::PunctRandom | SchemeKind::PunctStoptree => {
                let frozen = existing(&self.frozen, "frozen")?;
                let pattern = existing(&self.pattern, "pattern")?;
                let code = PolarCode::read_info_file(frozen)?;
                Scheme::punctured_as(kind, code, PuncturingPattern::read(pattern)?, polar_iters)
            }
            SchemeKind::Ldpc => {
                let code = LdpcCode::read_alist(existing(&self.alist, "alist")?)?;
                Ok(Scheme::ldpc(code, ldpc_iters))
            }
            SchemeKind::Concat => Ok(Scheme::concat(self.build_concat()?)),
        }
    }

    fn build_concat(&self) -> Result<ConcatCode> {
        let frozen = existing(&self.frozen, "frozen")?;
        let alist = existing(&self.alist, "alist")?;
        let d = ConcatOptions::default();
        let opts = ConcatOptions {
            seed: self.interleaver_seed.unwrap_or(d.seed),
            polar_iters: self.polar_iters.unwrap_or(d.polar_iters),
            ldpc_iters: self.ldpc_iters.unwrap_or(d.ldpc_iters),
            interleave: self.interleave.unwrap_or(false),
            handoff: self.handoff.as_deref().map(parse_handoff).transpose()?.unwrap_or_default(),
            ..d
        };
        let code = ConcatCode::new(PolarCode::read_info_file(frozen)?, LdpcCode::read_alist(alist)?, &opts)
            .map_err(|e| Error::Config(e.to_string()))?;
        // declared and realized rates may differ by the rounding of k and
        // the truncation of the inner length, at most 1.5 / n_l
        let slack = 1.5 / code.len() as f64;
        for (key, declared, realized) in [("r_eff", self.r_eff, code.rate()), ("r_l", self.r_l, code.ldpc_rate())] {
            if let Some(r) = declared {
                if (r - realized).abs() > slack {
                    return Err(Error::Config(format!("{key} = {r} but the codes realize {realized:.6}")));
                }
            }
        }
        Ok(code)
    }

    /// The sweep, with Eb/N0 points converted at `rate`.
    pub fn channel_models(&self, rate: f64) -> Result<Vec<ChannelModel>> {
        let chans = need(&self.channels, "channels")?;
        if chans.is_empty() {
            return Err(Error::Config("empty channel sweep".into()));
        }
        chans
            .iter()
            .map(|s| s.parse::<ChannelSpec>()?.resolve(rate))
            .collect()
    }

    pub fn stop_rule(&self) -> Result<StopRule> {
        let d = StopRule::default();
        StopRule::new(
            self.min_frame_errors.unwrap_or(d.min_frame_errors),
            self.max_frames.unwrap_or(d.max_frames),
        )
    }

    pub fn sim_options(&self) -> Result<SimOptions> {
        Ok(SimOptions {
            stop: self.stop_rule()?,
            seed: self.seed.unwrap_or(0),
            threads: self.threads,
            timing: self.timing.unwrap_or(true),
        })
    }

    /// Threshold searches default to 50 frame errors per evaluation.
    pub fn threshold_search(&self) -> Result<ThresholdSearch> {
        let family = parse_family(need(&self.family, "family")?)?;
        let mut s = ThresholdSearch::new(
            family,
            *need(&self.target_ber, "target_ber")?,
            *need(&self.lo, "lo")?,
            *need(&self.hi, "hi")?,
            *need(&self.tol, "tol")?,
        );
        s.stop = StopRule::new(
            self.min_frame_errors.unwrap_or(s.stop.min_frame_errors),
            self.max_frames.unwrap_or(s.stop.max_frames),
        )?;
        s.seed = self.seed.unwrap_or(0);
        s.threads = self.threads;
        Ok(s)
    }
}
