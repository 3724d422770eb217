//! Monte-Carlo BER/FER measurement: frame simulation, threshold bisection
//! on the channel parameter, gap to capacity, and the configuration files
//! the command-line tool reads.

mod config;
pub mod files;
mod scheme;
mod sim;
mod threshold;

pub use config::{parse_family, parse_handoff, SimConfig};
pub use scheme::{Scheme, SchemeKind, Worker};
pub use sim::{
    monotonicity_violations, run_ber_sweep, simulate_point, write_ber_sweep, BerPoint, SimOptions,
    StopRule, CSV_HEADER,
};
pub use threshold::{find_threshold_param, gap_to_capacity, Gap, Threshold, ThresholdSearch};
