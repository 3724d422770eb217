//! Capacities, LLRs and the Eb/N0 conversion for the three channel families.

use polarfec::channels::{param_for_capacity, ChannelSpec};
use polarfec::{ChannelFamily, ChannelModel};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn main() -> polarfec::Result<()> {
    for ch in [ChannelModel::bec(0.5)?, ChannelModel::bsc(0.11)?, ChannelModel::awgn(0.9787)?] {
        println!("{ch:<16} capacity {:.4}", ch.capacity());
    }

    // the Gaussian noise level at which a rate-0.93 code sits at capacity
    let sigma = param_for_capacity(ChannelFamily::Biawgn, 0.93)?;
    let ch = ChannelModel::awgn(sigma)?;
    println!("C = 0.93 at sigma {sigma:.4}, Eb/N0 {:.3} dB", ch.ebn0_db(0.93).unwrap());

    let spec: ChannelSpec = "awgn-ebn0db:4.0".parse()?;
    println!("awgn-ebn0db:4.0 at rate 1/2 -> {}", spec.resolve(0.5)?);

    let mut rng = ChaCha8Rng::seed_from_u64(1);
    let x = [0u8, 1, 0, 1, 1, 0];
    for ch in [ChannelModel::bec(0.4)?, ChannelModel::bsc(0.1)?, ChannelModel::awgn(0.8)?] {
        let llrs: Vec<String> = ch.transmit_llrs(&x, &mut rng).iter().map(|l| format!("{l:6.2}")).collect();
        println!("{:<14} {}", ch.to_string(), llrs.join(" "));
    }
    Ok(())
}
