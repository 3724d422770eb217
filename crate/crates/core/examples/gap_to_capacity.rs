//! Threshold bisection and gap to capacity, for rate-1/2 polar codes of two
//! lengths on the erasure channel and for the uncoded binary symmetric
//! channel, where the answer is known.

use polarfec::harness::{find_threshold_param, gap_to_capacity, Scheme, StopRule, ThresholdSearch};
use polarfec::polar::{bec_reliabilities, select_info_set};
use polarfec::ChannelFamily;

fn main() -> polarfec::Result<()> {
    let mut s = ThresholdSearch::new(ChannelFamily::Bsc, 1e-2, 0.001, 0.05, 2e-4);
    s.stop = StopRule::new(500, 100_000)?;
    let t = find_threshold_param(&Scheme::uncoded(1000), &s)?;
    println!("uncoded BSC, BER 1e-2: p* = {:.5}", t.param);

    for n in [8, 10] {
        let code = select_info_set(&bec_reliabilities(n, 0.5)?, 1 << (n - 1))?;
        let scheme = Scheme::polar_bp(code, 60)?;
        let mut s = ThresholdSearch::new(ChannelFamily::Bec, 1e-3, 0.2, 0.5, 5e-3);
        s.stop = StopRule::new(50, 4_000)?;
        let g = gap_to_capacity(&scheme, 0.5, &s)?;
        println!("N={:5}: eps* = {:.4}, gap {:.4} +- {:.4}", 1 << n, g.threshold.param, g.gap, g.tolerance);
    }
    Ok(())
}
