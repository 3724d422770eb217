//! Polar outer code, LDPC inner code, posterior LLR handoff. A short run
//! against a polar code of the same effective rate.

use polarfec::concat::{build_concat, ConcatOptions};
use polarfec::harness::{simulate_point, Scheme, SimOptions, StopRule};
use polarfec::ldpc::DegreeDistribution;
use polarfec::polar::{channel_reliabilities, select_info_set};
use polarfec::ChannelModel;

fn main() -> polarfec::Result<()> {
    let (r_eff, r_l) = (0.93, 0.95);
    let design = ChannelModel::awgn_ebn0_db(5.5, r_eff)?;
    let concat = build_concat(r_eff, 12, r_l, &DegreeDistribution::irregular_093(), &design, &ConcatOptions::default())?;
    println!(
        "outer ({}, {}) rate {:.4}, inner ({}, {}) rate {:.4}, overall {:.4}",
        concat.polar().len(),
        concat.k(),
        concat.polar_rate(),
        concat.len(),
        concat.ldpc().k(),
        concat.ldpc_rate(),
        concat.rate()
    );

    let k = (r_eff * 4096.0).round() as usize;
    let polar = select_info_set(&channel_reliabilities(12, &design, 20_000, 0)?, k)?;
    let schemes = [Scheme::concat(concat), Scheme::polar_bp(polar, 60)?];
    let opts = SimOptions {
        stop: StopRule::new(20, 400)?,
        seed: 1,
        ..Default::default()
    };
    for ebn0 in [5.0, 5.5] {
        for s in &schemes {
            let ch = ChannelModel::awgn_ebn0_db(ebn0, s.rate())?;
            let p = simulate_point(s, &ch, 0, &opts)?;
            println!("{ebn0} dB {:>8}: BER {:.2e} FER {:.3} ({} frames)", p.scheme, p.ber(), p.fer(), p.frames);
        }
    }
    Ok(())
}
