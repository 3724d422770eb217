//! A BER/FER sweep written as CSV, reproducible for any number of workers.

use polarfec::harness::{write_ber_sweep, Scheme, SimOptions, StopRule};
use polarfec::polar::{bec_reliabilities, select_info_set};
use polarfec::ChannelModel;

fn main() -> polarfec::Result<()> {
    let code = select_info_set(&bec_reliabilities(8, 0.5)?, 128)?;
    let scheme = Scheme::polar_bp(code, 60)?;
    let chans: Vec<ChannelModel> = [0.25, 0.3, 0.35, 0.4, 0.45]
        .iter()
        .map(|&e| ChannelModel::bec(e))
        .collect::<polarfec::Result<_>>()?;
    let mut opts = SimOptions {
        stop: StopRule::new(50, 20_000)?,
        seed: 42,
        threads: Some(1),
        timing: false,
    };
    let mut one = Vec::new();
    write_ber_sweep(&scheme, &chans, &opts, &mut one)?;
    opts.threads = Some(4);
    let mut four = Vec::new();
    write_ber_sweep(&scheme, &chans, &opts, &mut four)?;
    assert_eq!(one, four);
    print!("{}", String::from_utf8_lossy(&one));
    Ok(())
}
