//! Designing polar codes: exact erasure-channel reliabilities, Monte-Carlo
//! ones elsewhere, and the frozen-set file.

use polarfec::polar::{bec_reliabilities, channel_reliabilities, select_info_set};
use polarfec::{ChannelModel, PolarCode};

fn main() -> polarfec::Result<()> {
    // N = 8 on BEC(1/2): the classic information set {3, 5, 6, 7}
    let rel = bec_reliabilities(3, 0.5)?;
    println!("BEC(0.5), N=8 erasure probabilities:");
    for (i, z) in rel.values.iter().enumerate() {
        println!("  u{i}: {z:.4}");
    }
    let code = select_info_set(&rel, 4)?;
    println!("information set {:?}", code.info_set());

    // N = 256, rate 1/2 on a Gaussian channel via genie-aided SC
    let ch = ChannelModel::awgn_ebn0_db(2.0, 0.5)?;
    let rel = channel_reliabilities(8, &ch, 5_000, 7)?;
    let code = select_info_set(&rel, 128)?;
    println!("{ch}: first information indices {:?}", &code.info_set()[..8]);

    let dir = std::env::temp_dir().join("polarfec-construct");
    std::fs::create_dir_all(&dir)?;
    let path = dir.join("frozen.txt");
    code.write_info_file(&path)?;
    let back = PolarCode::read_info_file(&path)?;
    assert_eq!(back, code);
    println!("wrote {}", path.display());
    Ok(())
}
