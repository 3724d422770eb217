use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

use polarfec::channels::ChannelSpec;
use polarfec::concat::{build_concat, ConcatOptions};
use polarfec::harness::{self, files, Scheme, SimConfig};
use polarfec::ldpc::{self, DegreeDistribution, LdpcCode};
use polarfec::polar::{self, build_factor_graph, PolarCode};
use polarfec::ratecomp::{self, NestedOptions, PunctureMethod, PuncturingPattern};
use polarfec::{Error, Result};

#[derive(Parser)]
#[command(name = "polarfec", version, about = "Polar codes, polar-LDPC concatenation and rate-compatible polar coding")]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Design a polar code and write its frozen-set file.
    Construct {
        #[arg(long)]
        n: u32,
        #[arg(long)]
        channel: String,
        #[arg(long)]
        rate: f64,
        #[arg(long, default_value_t = polar::DEFAULT_MC_TRIALS)]
        mc_trials: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(short, long)]
        output: PathBuf,
    },
    /// Nested frozen sets for a chain of channels, one file per level.
    Nested {
        #[arg(long)]
        n: u32,
        /// Channels best first, comma-separated.
        #[arg(long, value_delimiter = ',')]
        channels: Vec<String>,
        /// Non-increasing rates, one per channel.
        #[arg(long, value_delimiter = ',')]
        rates: Vec<f64>,
        #[arg(long, default_value_t = polar::DEFAULT_MC_TRIALS)]
        mc_trials: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Level j goes to `<prefix>.<j>.txt`.
        #[arg(short, long)]
        output: PathBuf,
    },
    /// Build an LDPC code with progressive edge growth and write it as alist.
    BuildLdpc {
        #[arg(long)]
        n: usize,
        /// Degree-distribution file (`lambda d f`, `rho d f` lines).
        #[arg(long)]
        dist: PathBuf,
        /// Fix the number of checks; checks become nearly regular.
        #[arg(long)]
        checks: Option<usize>,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(short, long)]
        output: PathBuf,
    },
    /// Build a polar-outer / LDPC-inner pair plus a config to simulate it.
    BuildConcat {
        #[arg(long)]
        r_eff: f64,
        /// log2 of the polar length.
        #[arg(long)]
        n: u32,
        #[arg(long)]
        r_l: f64,
        #[arg(long)]
        dist: PathBuf,
        /// Design channel for the polar code.
        #[arg(long)]
        channel: String,
        #[arg(long, default_value_t = polar::DEFAULT_MC_TRIALS)]
        mc_trials: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Directory receiving outer.txt, inner.alist and concat.toml.
        #[arg(short, long)]
        output: PathBuf,
    },
    /// Encode information frames.
    Encode {
        #[command(flatten)]
        code: CodeArgs,
        /// Information bits, one frame per line.
        #[arg(long)]
        info: PathBuf,
        #[arg(short, long)]
        output: PathBuf,
    },
    /// Decode LLR frames to information bits.
    Decode {
        #[command(flatten)]
        code: CodeArgs,
        /// LLRs, one comma-separated frame per line.
        #[arg(long)]
        llrs: PathBuf,
        #[arg(long, default_value_t = polar::DEFAULT_BP_ITERS)]
        max_iters: usize,
        #[arg(long, value_enum, default_value_t = PolarDecoder::Bp)]
        decoder: PolarDecoder,
        #[arg(short, long)]
        output: PathBuf,
    },
    /// Choose code bits to puncture.
    PuncturePattern {
        #[arg(long)]
        frozen: PathBuf,
        #[arg(long)]
        count: usize,
        #[arg(long)]
        method: String,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(short, long)]
        output: PathBuf,
    },
    /// Girth, stopping-tree counts and size of the polar factor graph.
    GraphStats {
        #[arg(long)]
        n: u32,
        #[arg(long)]
        frozen: PathBuf,
    },
    /// BER/FER sweep written as CSV.
    Simulate(SimArgs),
    /// Worst channel parameter meeting a BER target.
    Threshold(SimArgs),
    /// Capacity minus rate at the threshold channel.
    Gap(SimArgs),
}

#[derive(Clone, Copy, ValueEnum)]
enum CodeScheme {
    Polar,
    Ldpc,
    Concat,
}

#[derive(Clone, Copy, PartialEq, ValueEnum)]
enum PolarDecoder {
    Bp,
    Sc,
}

#[derive(Args)]
struct CodeArgs {
    #[arg(long, value_enum, default_value_t = CodeScheme::Polar)]
    scheme: CodeScheme,
    #[arg(long)]
    frozen: Option<PathBuf>,
    #[arg(long)]
    alist: Option<PathBuf>,
    /// Puncturing pattern applied to polar codewords.
    #[arg(long)]
    pattern: Option<PathBuf>,
}

/// Every key of the simulation config, as an override.
#[derive(Args)]
struct SimArgs {
    /// TOML file with any of the keys below.
    #[arg(long)]
    config: Option<PathBuf>,
    #[arg(long)]
    scheme: Option<String>,
    #[arg(long)]
    frozen: Option<PathBuf>,
    #[arg(long)]
    alist: Option<PathBuf>,
    #[arg(long)]
    pattern: Option<PathBuf>,
    #[arg(long)]
    info_bits: Option<usize>,
    /// Repeatable: `bec:0.3`, `bsc:0.05`, `awgn-sigma:0.8`, `awgn-ebn0db:4`.
    #[arg(long = "channel")]
    channels: Vec<String>,
    #[arg(long)]
    min_frame_errors: Option<u64>,
    #[arg(long)]
    max_frames: Option<u64>,
    #[arg(long)]
    seed: Option<u64>,
    #[arg(long)]
    polar_iters: Option<usize>,
    #[arg(long)]
    ldpc_iters: Option<usize>,
    #[arg(long)]
    threads: Option<usize>,
    /// Write wall_s = 0 for byte-comparable output.
    #[arg(long)]
    no_timing: bool,
    #[arg(short, long)]
    output: Option<PathBuf>,
    #[arg(long)]
    family: Option<String>,
    #[arg(long)]
    target_ber: Option<f64>,
    #[arg(long)]
    lo: Option<f64>,
    #[arg(long)]
    hi: Option<f64>,
    #[arg(long)]
    tol: Option<f64>,
    #[arg(long)]
    rate: Option<f64>,
    #[arg(long)]
    r_eff: Option<f64>,
    #[arg(long)]
    r_l: Option<f64>,
    #[arg(long)]
    interleave: Option<bool>,
    #[arg(long)]
    interleaver_seed: Option<u64>,
    #[arg(long)]
    handoff: Option<String>,
}

impl SimArgs {
    fn resolve(self) -> Result<SimConfig> {
        let base = match &self.config {
            Some(p) => SimConfig::read(p)?,
            None => SimConfig::default(),
        };
        let over = SimConfig {
            scheme: self.scheme,
            frozen: self.frozen,
            alist: self.alist,
            pattern: self.pattern,
            info_bits: self.info_bits,
            channels: (!self.channels.is_empty()).then_some(self.channels),
            min_frame_errors: self.min_frame_errors,
            max_frames: self.max_frames,
            seed: self.seed,
            polar_iters: self.polar_iters,
            ldpc_iters: self.ldpc_iters,
            threads: self.threads,
            timing: self.no_timing.then_some(false),
            output: self.output,
            family: self.family,
            target_ber: self.target_ber,
            lo: self.lo,
            hi: self.hi,
            tol: self.tol,
            rate: self.rate,
            r_eff: self.r_eff,
            r_l: self.r_l,
            interleave: self.interleave,
            interleaver_seed: self.interleaver_seed,
            handoff: self.handoff,
        };
        Ok(base.overlay(over))
    }
}

fn output(path: &Option<PathBuf>) -> Result<Box<dyn Write>> {
    Ok(match path {
        Some(p) => Box::new(BufWriter::new(File::create(p)?)),
        None => Box::new(io::stdout().lock()),
    })
}

fn channel(spec: &str, rate: f64) -> Result<polarfec::ChannelModel> {
    spec.parse::<ChannelSpec>()?.resolve(rate)
}

fn need<'a>(p: &'a Option<PathBuf>, flag: &str) -> Result<&'a Path> {
    p.as_deref().ok_or_else(|| Error::Config(format!("--{flag} is required")))
}

/// The code named by `--scheme`, as a simulation scheme.
fn load_scheme(args: &CodeArgs, iters: usize, decoder: PolarDecoder) -> Result<Scheme> {
    match args.scheme {
        CodeScheme::Polar => {
            let code = PolarCode::read_info_file(need(&args.frozen, "frozen")?)?;
            match (&args.pattern, decoder) {
                (Some(p), _) => Scheme::punctured(code, PuncturingPattern::read(p)?, iters),
                (None, PolarDecoder::Sc) => Ok(Scheme::polar_sc(code)),
                (None, PolarDecoder::Bp) => Scheme::polar_bp(code, iters),
            }
        }
        CodeScheme::Ldpc => Ok(Scheme::ldpc(LdpcCode::read_alist(need(&args.alist, "alist")?)?, iters)),
        CodeScheme::Concat => {
            let cfg = SimConfig {
                scheme: Some("concat".into()),
                frozen: args.frozen.clone(),
                alist: args.alist.clone(),
                polar_iters: Some(iters),
                ldpc_iters: Some(iters),
                ..Default::default()
            };
            cfg.build_scheme()
        }
    }
}

fn run(cmd: Cmd) -> Result<()> {
    match cmd {
        Cmd::Construct { n, channel: ch, rate, mc_trials, seed, output } => {
            let model = channel(&ch, rate)?;
            let rel = polar::channel_reliabilities(n, &model, mc_trials, seed)?;
            let k = (rate * (1usize << n) as f64).round() as usize;
            polar::select_info_set(&rel, k)?.write_info_file(output)
        }
        Cmd::Nested { n, channels, rates, mc_trials, seed, output } => {
            let models = channels
                .iter()
                .zip(&rates)
                .map(|(c, &r)| channel(c, r))
                .collect::<Result<Vec<_>>>()?;
            let fam = ratecomp::build_nested_family(n, &models, &rates, &NestedOptions { mc_trials, seed })?;
            for (j, level) in fam.levels().iter().enumerate() {
                let path = PathBuf::from(format!("{}.{j}.txt", output.display()));
                level.code.write_info_file(&path)?;
                println!("{},{},{},{:?}", path.display(), level.code.k(), level.channel, level.provenance);
            }
            Ok(())
        }
        Cmd::BuildLdpc { n, dist, checks, seed, output } => {
            let dist = DegreeDistribution::read(dist)?;
            let code = match checks {
                Some(m) => ldpc::build_from_sequence(&ldpc::quantize_with_checks(n, &dist.lambda, m)?, seed)?,
                None => ldpc::build_ldpc(n, &dist, seed)?,
            };
            code.write_alist(output)?;
            println!("n={} m={} k={} rate={:.6}", code.n(), code.m(), code.k(), code.rate());
            Ok(())
        }
        Cmd::BuildConcat { r_eff, n, r_l, dist, channel: ch, mc_trials, seed, output } => {
            let dist = DegreeDistribution::read(dist)?;
            let model = channel(&ch, r_eff)?;
            let opts = ConcatOptions { seed, mc_trials, ..Default::default() };
            let code = build_concat(r_eff, n, r_l, &dist, &model, &opts)?;
            std::fs::create_dir_all(&output)?;
            code.polar().write_info_file(output.join("outer.txt"))?;
            code.ldpc().write_alist(output.join("inner.alist"))?;
            let cfg = format!(
                "scheme = \"concat\"\nfrozen = \"outer.txt\"\nalist = \"inner.alist\"\n\
                 polar_iters = {}\nldpc_iters = {}\nr_eff = {r_eff}\nr_l = {r_l}\n",
                code.polar_iters, code.ldpc_iters
            );
            std::fs::write(output.join("concat.toml"), cfg)?;
            println!("k={} n_l={} rate={:.6}", code.k(), code.len(), code.rate());
            Ok(())
        }
        Cmd::Encode { code, info, output } => {
            let scheme = load_scheme(&code, polar::DEFAULT_BP_ITERS, PolarDecoder::Bp)?;
            let frames = files::read_bits(info)?
                .iter()
                .map(|u| scheme.encode(u))
                .collect::<Result<Vec<_>>>()?;
            files::write_bits(output, &frames)
        }
        Cmd::Decode { code, llrs, max_iters, decoder, output } => {
            let scheme = load_scheme(&code, max_iters, decoder)?;
            let mut worker = scheme.worker();
            let frames = files::read_llrs(llrs)?
                .iter()
                .map(|l| scheme.decode(&mut worker, l))
                .collect::<Result<Vec<_>>>()?;
            files::write_bits(output, &frames)
        }
        Cmd::PuncturePattern { frozen, count, method, seed, output } => {
            let code = PolarCode::read_info_file(frozen)?;
            let pattern = match method.parse::<PunctureMethod>()? {
                PunctureMethod::Random => ratecomp::random_pattern(&code, count, seed)?,
                PunctureMethod::StoppingTree => ratecomp::stopping_tree_pattern(&code, count)?,
            };
            pattern.write(output)
        }
        Cmd::GraphStats { n, frozen } => {
            let code = PolarCode::read_info_file(frozen)?;
            if code.n() != n {
                return Err(Error::Config(format!("frozen file has N = {}, not 2^{n}", code.len())));
            }
            let graph = build_factor_graph(n)?;
            let mut out = io::stdout().lock();
            writeln!(out, "# variables={} checks={} edges={}", graph.num_variables(), graph.num_checks(), graph.num_edges())?;
            match polar::girth(&graph) {
                Some(g) => writeln!(out, "# girth={g}")?,
                None => writeln!(out, "# girth=inf")?,
            }
            writeln!(out, "index,count")?;
            for (i, c) in polar::code_bit_tree_counts(&graph, &code)?.iter().enumerate() {
                writeln!(out, "{i},{c}")?;
            }
            Ok(())
        }
        Cmd::Simulate(args) => {
            let cfg = args.resolve()?;
            let scheme = cfg.build_scheme()?;
            let chans = cfg.channel_models(scheme.rate())?;
            let opts = cfg.sim_options()?;
            let mut out = output(&cfg.output)?;
            let points = harness::write_ber_sweep(&scheme, &chans, &opts, &mut out)?;
            for (i, j) in harness::monotonicity_violations(&points) {
                eprintln!(
                    "warning: BER not monotone: {} at {} vs {} at {}",
                    points[i].ber(),
                    points[i].channel,
                    points[j].ber(),
                    points[j].channel
                );
            }
            Ok(())
        }
        Cmd::Threshold(args) => {
            let cfg = args.resolve()?;
            let scheme = cfg.build_scheme()?;
            let t = harness::find_threshold_param(&scheme, &cfg.threshold_search()?)?;
            let mut out = output(&cfg.output)?;
            writeln!(out, "scheme,family,param,lo,hi,evaluations")?;
            writeln!(
                out,
                "{},{},{},{},{},{}",
                scheme.kind(),
                cfg.family.as_deref().unwrap_or_default(),
                t.param,
                t.lo,
                t.hi,
                t.evaluations.len()
            )?;
            Ok(())
        }
        Cmd::Gap(args) => {
            let cfg = args.resolve()?;
            let scheme = cfg.build_scheme()?;
            let rate = cfg.rate.unwrap_or(scheme.rate());
            let g = harness::gap_to_capacity(&scheme, rate, &cfg.threshold_search()?)?;
            let mut out = output(&cfg.output)?;
            writeln!(out, "scheme,family,rate,param,gap,tolerance")?;
            writeln!(
                out,
                "{},{},{},{},{},{}",
                scheme.kind(),
                cfg.family.as_deref().unwrap_or_default(),
                rate,
                g.threshold.param,
                g.gap,
                g.tolerance
            )?;
            Ok(())
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli.cmd) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
