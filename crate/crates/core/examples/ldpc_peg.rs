//! The rate-0.93 irregular LDPC ensemble at n = 4311: quantized degrees,
//! PEG construction, realized histograms and the alist file.

use polarfec::ldpc::dist::{edge_histogram, histogram_l1};
use polarfec::ldpc::{build_ldpc, ldpc_bp_decode, quantize, DegreeDistribution};
use polarfec::ChannelModel;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn main() -> polarfec::Result<()> {
    let dist = DegreeDistribution::irregular_093();
    println!("design rate {:.6}", dist.design_rate());
    let n = 4311;
    let seq = quantize(n, &dist)?;
    println!("{} edges, {} checks", seq.edges(), seq.check_degrees.len());

    let code = build_ldpc(n, &dist, 1)?;
    let lv = histogram_l1(&edge_histogram(&code.var_degrees()), &dist.lambda);
    let lc = histogram_l1(&edge_histogram(&code.check_degrees()), &dist.rho);
    println!("n={} m={} k={} rate {:.4}; L1 lambda {lv:.2e}, rho {lc:.2e}", code.n(), code.m(), code.k(), code.rate());

    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let ch = ChannelModel::awgn_ebn0_db(5.0, code.rate())?;
    let frames = 50;
    let mut fails = 0;
    for _ in 0..frames {
        let info: Vec<u8> = (0..code.k()).map(|_| rng.gen_range(0..2)).collect();
        let x = code.encode(&info)?;
        let r = ldpc_bp_decode(&code, &ch.transmit_llrs(&x, &mut rng), 60)?;
        fails += (code.extract(&r.codeword) != info) as usize;
    }
    println!("{ch}: {fails}/{frames} frames failed");

    let path = std::env::temp_dir().join("polarfec-4311.alist");
    code.write_alist(&path)?;
    println!("wrote {}", path.display());
    Ok(())
}
