//! Brute-force reference computations shared by unit and integration tests.
//! Nothing in here may call into the code under test.

#![allow(dead_code)]

/// `j` has no bit outside `i`.
pub fn subset_of(j: usize, i: usize) -> bool {
    j & !i == 0
}

/// Row `i` of the Kronecker power as a column bitmask.
pub fn kron_row(n: u32, i: usize) -> u64 {
    (0..1usize << n)
        .filter(|&j| subset_of(j, i))
        .fold(0u64, |m, j| m | 1 << j)
}

/// Inserts `v` into a GF(2) basis kept as (pivot bit, row) pairs. Returns
/// false when `v` was already in the span.
fn insert(basis: &mut Vec<u64>, mut v: u64) -> bool {
    for &b in basis.iter() {
        let pivot = 63 - b.leading_zeros();
        if v >> pivot & 1 == 1 {
            v ^= b;
        }
    }
    if v == 0 {
        return false;
    }
    // keep the basis reduced on pivots
    let pivot = 63 - v.leading_zeros();
    for b in basis.iter_mut() {
        if *b >> pivot & 1 == 1 {
            *b ^= v;
        }
    }
    basis.push(v);
    basis.sort_unstable_by(|a, b| b.cmp(a));
    true
}

pub fn gf2_rank(rows: &[u64]) -> usize {
    let mut basis = Vec::new();
    rows.iter().filter(|&&r| insert(&mut basis, r)).count()
}

/// With inputs `0..i` known and code bits in `erased` unobserved, is `u_i`
/// uniquely determined? True iff row `i` restricted to the observed columns
/// is independent of rows `i+1..N` restricted the same way.
pub fn genie_decodable(n: u32, erased: u64, i: usize) -> bool {
    let len = 1usize << n;
    let keep = !erased & if len == 64 { u64::MAX } else { (1u64 << len) - 1 };
    let later: Vec<u64> = (i + 1..len).map(|t| kron_row(n, t) & keep).collect();
    let mut with = later.clone();
    with.push(kron_row(n, i) & keep);
    gf2_rank(&with) > gf2_rank(&later)
}

/// Exact bit-channel erasure probabilities by enumerating every erasure
/// pattern of the `2^n` code bits.
pub fn erasure_oracle(n: u32, eps: f64) -> Vec<f64> {
    let len = 1usize << n;
    let rows: Vec<u64> = (0..len).map(|i| kron_row(n, i)).collect();
    let mut prob = vec![0.0; len];
    for erased in 0u64..1 << len {
        let e = erased.count_ones() as i32;
        let weight = eps.powi(e) * (1.0 - eps).powi(len as i32 - e);
        let keep = !erased;
        let mut basis = Vec::new();
        for i in (0..len).rev() {
            if !insert(&mut basis, rows[i] & keep) {
                prob[i] += weight;
            }
        }
    }
    prob
}

/// Shortest cycle by enumerating simple paths. Exponential; small graphs only.
pub fn brute_force_girth(adj: &[Vec<usize>]) -> Option<usize> {
    fn dfs(
        adj: &[Vec<usize>],
        start: usize,
        u: usize,
        depth: usize,
        on_path: &mut Vec<bool>,
        best: &mut usize,
    ) {
        if depth + 1 >= *best {
            return;
        }
        for &v in &adj[u] {
            if v == start && depth >= 2 {
                *best = (*best).min(depth + 1);
            } else if v > start && !on_path[v] {
                on_path[v] = true;
                dfs(adj, start, v, depth + 1, on_path, best);
                on_path[v] = false;
            }
        }
    }
    let mut best = usize::MAX;
    let mut on_path = vec![false; adj.len()];
    for s in 0..adj.len() {
        on_path[s] = true;
        dfs(adj, s, s, 0, &mut on_path, &mut best);
        on_path[s] = false;
    }
    (best != usize::MAX).then_some(best)
}

/// Largest stopping set inside `unknown`: repeatedly drop any member that is
/// the only member of one of its checks.
pub fn max_stopping_subset_plain(
    var_checks: &[Vec<usize>],
    check_vars: &[Vec<usize>],
    mut unknown: Vec<bool>,
) -> Vec<bool> {
    loop {
        let mut changed = false;
        for c in 0..check_vars.len() {
            let members: Vec<usize> = check_vars[c].iter().copied().filter(|&v| unknown[v]).collect();
            if members.len() == 1 {
                unknown[members[0]] = false;
                changed = true;
            }
        }
        if !changed {
            break;
        }
    }
    let _ = var_checks;
    unknown
}

/// Gaussian elimination over GF(2): solve `A y = b` for the unknown columns
/// `cols` of a dense 0/1 matrix given the other columns' values. Returns
/// `None` when the solution is not unique.
pub fn gf2_solve_columns(rows: &[Vec<u8>], x_known: &[u8], cols: &[usize]) -> Option<Vec<u8>> {
    let m = rows.len();
    let k = cols.len();
    let mut a: Vec<Vec<u8>> = rows
        .iter()
        .map(|r| {
            let mut line: Vec<u8> = cols.iter().map(|&c| r[c]).collect();
            let rhs = r
                .iter()
                .enumerate()
                .filter(|(c, _)| !cols.contains(c))
                .fold(0u8, |acc, (c, &h)| acc ^ (h & x_known[c]));
            line.push(rhs);
            line
        })
        .collect();
    let mut row = 0;
    let mut pivots = Vec::new();
    for col in 0..k {
        let Some(p) = (row..m).find(|&r| a[r][col] == 1) else {
            return None;
        };
        a.swap(row, p);
        for r in 0..m {
            if r != row && a[r][col] == 1 {
                let src = a[row].clone();
                for (x, y) in a[r].iter_mut().zip(src) {
                    *x ^= y;
                }
            }
        }
        pivots.push(row);
        row += 1;
    }
    Some(pivots.iter().map(|&r| a[r][k]).collect())
}
