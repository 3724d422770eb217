use std::io::Write;
use std::time::Instant;

use rand::Rng;
use rayon::prelude::*;

use super::scheme::Scheme;
use crate::channels::ChannelModel;
use crate::error::{Error, Result};
use crate::seeding;

/// Stop a point once `min_frame_errors` frame errors or `max_frames` frames
/// have been seen, whichever comes first.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct StopRule {
    pub min_frame_errors: u64,
    pub max_frames: u64,
}

impl Default for StopRule {
    fn default() -> Self {
        StopRule {
            min_frame_errors: 100,
            max_frames: 1_000_000,
        }
    }
}

impl StopRule {
    pub fn new(min_frame_errors: u64, max_frames: u64) -> Result<Self> {
        if min_frame_errors == 0 || max_frames == 0 {
            return Err(Error::Config("stop rule needs min_frame_errors >= 1 and max_frames >= 1".into()));
        }
        Ok(StopRule {
            min_frame_errors,
            max_frames,
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SimOptions {
    pub stop: StopRule,
    pub seed: u64,
    /// Worker threads; `None` uses the global pool.
    pub threads: Option<usize>,
    /// Record wall time. Off, `wall_s` is written as 0 so output files are
    /// byte-comparable between runs.
    pub timing: bool,
}

impl Default for SimOptions {
    fn default() -> Self {
        SimOptions {
            stop: StopRule::default(),
            seed: 0,
            threads: None,
            timing: true,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct BerPoint {
    pub scheme: String,
    pub channel: ChannelModel,
    pub rate_eff: f64,
    pub info_len: usize,
    pub frames: u64,
    pub bit_errors: u64,
    pub frame_errors: u64,
    pub seed: u64,
    pub wall_s: f64,
}

impl BerPoint {
    pub fn ber(&self) -> f64 {
        if self.frames == 0 {
            return 0.0;
        }
        self.bit_errors as f64 / (self.frames as f64 * self.info_len as f64)
    }

    pub fn fer(&self) -> f64 {
        if self.frames == 0 {
            return 0.0;
        }
        self.frame_errors as f64 / self.frames as f64
    }

    /// Half-width of the normal-approximation 95% interval on the FER.
    pub fn ci95_fer(&self) -> f64 {
        if self.frames == 0 {
            return 0.0;
        }
        let p = self.fer();
        1.96 * (p * (1.0 - p) / self.frames as f64).sqrt()
    }

    pub fn csv_row(&self) -> String {
        format!(
            "{},{},{},{},{},{},{},{:e},{:e},{:e},{},{}",
            self.scheme,
            self.channel.family(),
            self.channel.param(),
            self.rate_eff,
            self.frames,
            self.bit_errors,
            self.frame_errors,
            self.ber(),
            self.fer(),
            self.ci95_fer(),
            self.seed,
            self.wall_s
        )
    }
}

pub const CSV_HEADER: &str =
    "scheme,channel_family,channel_param,rate_eff,frames,bit_errors,frame_errors,ber,fer,ci95_fer,seed,wall_s";

/// Bit errors in frame `frame` of point `point`. Everything random in the
/// frame comes from its own counter-derived stream.
fn run_frame(
    scheme: &Scheme,
    worker: &mut super::scheme::Worker,
    channel: &ChannelModel,
    seed: u64,
    point: u64,
    frame: u64,
) -> Result<u64> {
    let mut rng = seeding::stream(seed, point, frame);
    let info: Vec<u8> = (0..scheme.info_len()).map(|_| rng.gen_range(0..2u8)).collect();
    let tx = scheme.encode(&info)?;
    let llrs = channel.transmit_llrs(&tx, &mut rng);
    let est = scheme.decode(worker, &llrs)?;
    Ok(info.iter().zip(&est).filter(|(a, b)| a != b).count() as u64)
}

fn in_pool<T: Send>(threads: Option<usize>, f: impl FnOnce() -> T + Send) -> Result<T> {
    match threads {
        None => Ok(f()),
        Some(t) => {
            let pool = rayon::ThreadPoolBuilder::new()
                .num_threads(t)
                .build()
                .map_err(|e| Error::Config(format!("thread pool: {e}")))?;
            Ok(pool.install(f))
        }
    }
}

/// Simulates one channel point. Frames are decoded in parallel batches but
/// tallied in frame order, so the stopping frame, and hence every counter,
/// does not depend on the number of workers.
pub fn simulate_point(
    scheme: &Scheme,
    channel: &ChannelModel,
    point: u64,
    opts: &SimOptions,
) -> Result<BerPoint> {
    let start = Instant::now();
    let stop = opts.stop;
    let (frames, bit_errors, frame_errors) = in_pool(opts.threads, || -> Result<(u64, u64, u64)> {
        let (mut frames, mut bits, mut ferrs) = (0u64, 0u64, 0u64);
        let mut batch = 2 * rayon::current_num_threads() as u64;
        while frames < stop.max_frames && ferrs < stop.min_frame_errors {
            let end = (frames + batch).min(stop.max_frames);
            let errs: Vec<u64> = (frames..end)
                .into_par_iter()
                .map_init(|| scheme.worker(), |w, f| run_frame(scheme, w, channel, opts.seed, point, f))
                .collect::<Result<_>>()?;
            for e in errs {
                frames += 1;
                bits += e;
                ferrs += (e > 0) as u64;
                if ferrs >= stop.min_frame_errors {
                    break;
                }
            }
            batch = (batch * 2).min(4096);
        }
        Ok((frames, bits, ferrs))
    })??;
    Ok(BerPoint {
        scheme: scheme.kind().name().to_string(),
        channel: *channel,
        rate_eff: scheme.rate(),
        info_len: scheme.info_len(),
        frames,
        bit_errors,
        frame_errors,
        seed: opts.seed,
        wall_s: if opts.timing { start.elapsed().as_secs_f64() } else { 0.0 },
    })
}

/// Simulates every channel in order, handing each finished point to `sink`
/// before starting the next.
pub fn run_ber_sweep(
    scheme: &Scheme,
    channels: &[ChannelModel],
    opts: &SimOptions,
    mut sink: impl FnMut(&BerPoint) -> Result<()>,
) -> Result<Vec<BerPoint>> {
    if channels.is_empty() {
        return Err(Error::Config("empty channel sweep".into()));
    }
    let mut out = Vec::with_capacity(channels.len());
    for (i, ch) in channels.iter().enumerate() {
        let p = simulate_point(scheme, ch, i as u64, opts)?;
        sink(&p)?;
        out.push(p);
    }
    Ok(out)
}

/// Sweep writing CSV rows to `out` as points complete.
pub fn write_ber_sweep(
    scheme: &Scheme,
    channels: &[ChannelModel],
    opts: &SimOptions,
    out: &mut impl Write,
) -> Result<Vec<BerPoint>> {
    writeln!(out, "{CSV_HEADER}")?;
    out.flush()?;
    run_ber_sweep(scheme, channels, opts, |p| {
        writeln!(out, "{}", p.csv_row())?;
        out.flush()?;
        Ok(())
    })
}

/// Pairs `(i, j)` where channel `j` is no better than channel `i`, yet the
/// measured BER at `j` is lower than at `i` by more than the two FER
/// intervals can explain (scaled to BER by the per-frame error weight).
pub fn monotonicity_violations(points: &[BerPoint]) -> Vec<(usize, usize)> {
    let slack = |p: &BerPoint| {
        if p.fer() > 0.0 {
            p.ci95_fer() * p.ber() / p.fer()
        } else {
            0.0
        }
    };
    let mut bad = Vec::new();
    for i in 0..points.len() {
        for j in 0..points.len() {
            let (a, b) = (&points[i], &points[j]);
            if a.channel.family() != b.channel.family() || b.channel.param() <= a.channel.param() {
                continue;
            }
            if b.ber() + slack(b) < a.ber() - slack(a) {
                bad.push((i, j));
            }
        }
    }
    bad
}
