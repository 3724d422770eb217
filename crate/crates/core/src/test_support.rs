#[path = "../tests/common/oracles.rs"]
mod oracles;

pub use oracles::*;

use crate::polar::{FactorGraph, PolarCode};

/// Variable ids stuck after peeling on the BEC: the largest stopping set
/// inside {information inputs, internal columns, erased code bits}.
pub fn max_stopping_subset(g: &FactorGraph, code: &PolarCode, erased: u64) -> Vec<usize> {
    let n = g.n();
    let unknown: Vec<bool> = (0..g.num_variables())
        .map(|v| {
            let (col, row) = g.var_position(v);
            if col == 0 {
                !code.is_frozen(row)
            } else if col == n {
                erased >> row & 1 == 1
            } else {
                true
            }
        })
        .collect();
    let var_checks: Vec<Vec<usize>> = (0..g.num_variables()).map(|v| g.var_checks(v).to_vec()).collect();
    let check_vars: Vec<Vec<usize>> = (0..g.num_checks()).map(|c| g.check_vars(c).to_vec()).collect();
    let stuck = max_stopping_subset_plain(&var_checks, &check_vars, unknown);
    (0..stuck.len()).filter(|&v| stuck[v]).collect()
}
