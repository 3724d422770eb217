//! SC against BP on the same received frames.

use polarfec::channels::param_for_capacity;
use polarfec::polar::{build_factor_graph, channel_reliabilities, sc_decode, select_info_set, BpDecoder};
use polarfec::{ChannelFamily, ChannelModel};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn main() -> polarfec::Result<()> {
    let n = 9;
    let design = ChannelModel::awgn(param_for_capacity(ChannelFamily::Biawgn, 0.6)?)?;
    let code = select_info_set(&channel_reliabilities(n, &design, 5_000, 1)?, 256)?;
    let graph = build_factor_graph(n)?;
    let mut bp = BpDecoder::new(&graph);
    let mut rng = ChaCha8Rng::seed_from_u64(3);

    for ebn0 in [1.5, 2.0, 2.5, 3.0] {
        let ch = ChannelModel::awgn_ebn0_db(ebn0, code.rate())?;
        let (mut sc_fe, mut bp_fe, mut iters) = (0, 0, 0);
        let frames = 300;
        for _ in 0..frames {
            let info: Vec<u8> = (0..code.k()).map(|_| rng.gen_range(0..2)).collect();
            let llrs = ch.transmit_llrs(&code.encode(&info)?, &mut rng);
            sc_fe += (sc_decode(&code, &llrs)?.info != info) as usize;
            let r = bp.decode(&graph, &code, &llrs, 60)?;
            bp_fe += (r.info != info) as usize;
            iters += r.iterations;
        }
        println!(
            "Eb/N0 {ebn0:.1} dB: FER sc {:.3}  bp {:.3}  (bp {:.1} iterations/frame)",
            sc_fe as f64 / frames as f64,
            bp_fe as f64 / frames as f64,
            iters as f64 / frames as f64
        );
    }
    Ok(())
}
