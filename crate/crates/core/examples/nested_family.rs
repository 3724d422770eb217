//! Rate-compatible polar coding with nested information sets: one parent
//! encoder, more inputs frozen as the channel worsens.

use polarfec::polar::polar_transform;
use polarfec::ratecomp::{build_nested_family, NestedOptions};
use polarfec::ChannelModel;

fn main() -> polarfec::Result<()> {
    let chain = [ChannelModel::bec(0.3)?, ChannelModel::bec(0.4)?, ChannelModel::bec(0.5)?];
    let fam = build_nested_family(10, &chain, &[0.65, 0.55, 0.45], &NestedOptions::default())?;
    for l in fam.levels() {
        println!("{:<10} k={:4} rate {:.3} {:?}", l.channel.to_string(), l.code.k(), l.code.rate(), l.provenance);
    }
    println!("nested: {}, repairs: {}", fam.is_nested(), fam.num_repairs());

    // switching rate only changes which inputs carry data
    let k2 = fam.level(2)?.code.k();
    let info = vec![1u8; k2];
    let x = fam.switch_rate(2, &info)?;
    let u = fam.level(2)?.code.embed(&info)?;
    assert_eq!(x, polar_transform(&u)?);
    println!("level 2 codeword weight {}", x.iter().filter(|&&b| b == 1).count());
    Ok(())
}
