//! Puncturing a rate-1/2 parent: stopping-tree ranking against random
//! choice, and how the decoder sees a punctured bit.

use polarfec::channels::param_for_capacity;
use polarfec::harness::{simulate_point, Scheme, SimOptions, StopRule};
use polarfec::polar::{channel_reliabilities, select_info_set};
use polarfec::ratecomp::{puncture_llrs, random_pattern, stopping_tree_pattern, PuncturingPattern};
use polarfec::{ChannelFamily, ChannelModel, PolarCode};

fn main() -> polarfec::Result<()> {
    // N = 8: x7 lies in one information tree, x6 in two
    let small = PolarCode::from_info_set(3, [3, 5, 6, 7])?;
    println!("N=8 stopping-tree pattern: {:?}", stopping_tree_pattern(&small, 2)?.positions());
    let p = PuncturingPattern::new(8, [6, 7])?;
    println!("decoder input {:?}", puncture_llrs(&p, &[1.0, 2.0, 3.0, 4.0, 5.0, 6.0])?);

    let design = ChannelModel::awgn(param_for_capacity(ChannelFamily::Biawgn, 0.5)?)?;
    let parent = select_info_set(&channel_reliabilities(9, &design, 5_000, 0)?, 256)?;
    let count = 512 - 366; // rate 0.7
    let opts = SimOptions {
        stop: StopRule::new(30, 1_000)?,
        seed: 2,
        ..Default::default()
    };
    for pattern in [stopping_tree_pattern(&parent, count)?, random_pattern(&parent, count, 9)?] {
        let s = Scheme::punctured(parent.clone(), pattern, 60)?;
        let ch = ChannelModel::awgn_ebn0_db(4.0, s.rate())?;
        let pt = simulate_point(&s, &ch, 0, &opts)?;
        println!("{:>15} rate {:.3}: BER {:.2e} FER {:.3}", s.kind(), s.rate(), pt.ber(), pt.fer());
    }
    Ok(())
}
