#![allow(dead_code)]

pub mod oracles;

use polarfec::polar::FactorGraph;
use polarfec::PolarCode;

/// Variables BP over the BEC can never resolve: the largest stopping set
/// among the unknown variables (non-frozen inputs, every internal column and
/// the erased code bits in `erased`).
pub fn stuck_variables(g: &FactorGraph, code: &PolarCode, erased: u64) -> Vec<usize> {
    let n = g.n();
    let unknown: Vec<bool> = (0..g.num_variables())
        .map(|v| match g.var_position(v) {
            (0, row) => !code.is_frozen(row),
            (col, row) if col == n => erased >> row & 1 == 1,
            _ => true,
        })
        .collect();
    let var_checks: Vec<Vec<usize>> = (0..g.num_variables()).map(|v| g.var_checks(v).to_vec()).collect();
    let check_vars: Vec<Vec<usize>> = (0..g.num_checks()).map(|c| g.check_vars(c).to_vec()).collect();
    let stuck = oracles::max_stopping_subset_plain(&var_checks, &check_vars, unknown);
    (0..stuck.len()).filter(|&v| stuck[v]).collect()
}

/// `x = u F^{(x)n}` straight from the definition: code bit `j` is the XOR of
/// every input whose index contains `j` as a bit subset.
pub fn dense_encode(u: &[u8]) -> Vec<u8> {
    (0..u.len())
        .map(|j| {
            (0..u.len())
                .filter(|&i| oracles::subset_of(j, i))
                .fold(0u8, |acc, i| acc ^ u[i])
        })
        .collect()
}
