use rand::Rng;
use rand_chacha::ChaCha8Rng;

use super::DegreeSequence;
use crate::error::{Error, Result};

const UNREACHED: u32 = u32::MAX;

struct Peg {
    var_adj: Vec<Vec<u32>>,
    chk_adj: Vec<Vec<u32>>,
    deficit: Vec<usize>,
    depth: Vec<u32>,
    seen_var: Vec<u32>,
    stamp: u32,
}

/// Progressive edge growth: variables in ascending degree order, each new
/// edge going to a check outside the current neighbourhood of the variable,
/// or failing that to one of the deepest checks of it.
pub(super) fn progressive_edge_growth(
    seq: &DegreeSequence,
    rng: &mut ChaCha8Rng,
) -> Result<Vec<Vec<u32>>> {
    let n = seq.var_degrees.len();
    let m = seq.check_degrees.len();
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by_key(|&v| seq.var_degrees[v]);
    let mut st = Peg {
        var_adj: vec![Vec::new(); n],
        chk_adj: vec![Vec::new(); m],
        deficit: seq.check_degrees.clone(),
        depth: vec![UNREACHED; m],
        seen_var: vec![0; n],
        stamp: 0,
    };
    for v in order {
        for e in 0..seq.var_degrees[v] {
            let c = if e == 0 {
                st.pick(v, rng, |_| true)
            } else {
                st.expand(v);
                if (0..m).any(|c| st.is_candidate(v, c) && st.depth[c] == UNREACHED) {
                    st.pick(v, rng, |d| d == UNREACHED)
                } else {
                    let deepest = (0..m)
                        .filter(|&c| st.is_candidate(v, c))
                        .map(|c| st.depth[c])
                        .max();
                    deepest.and_then(|deepest| st.pick(v, rng, |d| d == deepest))
                }
            };
            match c {
                Some(c) => st.connect(v, c),
                None => st.swap_repair(v, rng)?,
            }
        }
    }
    Ok(st.var_adj)
}

impl Peg {
    fn is_candidate(&self, v: usize, c: usize) -> bool {
        self.deficit[c] > 0 && !self.var_adj[v].contains(&(c as u32))
    }

    /// Among candidate checks whose BFS depth passes `keep`, the ones with the
    /// largest remaining deficit, chosen uniformly.
    fn pick(&self, v: usize, rng: &mut ChaCha8Rng, keep: impl Fn(u32) -> bool) -> Option<usize> {
        let mut best = Vec::new();
        let mut best_deficit = 0;
        for c in 0..self.deficit.len() {
            if !self.is_candidate(v, c) || !keep(self.depth[c]) {
                continue;
            }
            let d = self.deficit[c];
            if d > best_deficit {
                best_deficit = d;
                best.clear();
            }
            if d == best_deficit {
                best.push(c);
            }
        }
        (!best.is_empty()).then(|| best[rng.gen_range(0..best.len())])
    }

    /// Breadth-first search from `v`, recording the depth of every reachable
    /// check. Stops early once every candidate check has been reached.
    fn expand(&mut self, v: usize) {
        self.depth.fill(UNREACHED);
        self.stamp += 1;
        let stamp = self.stamp;
        self.seen_var[v] = stamp;
        let mut candidates_left =
            (0..self.deficit.len()).filter(|&c| self.is_candidate(v, c)).count();
        let mut frontier: Vec<u32> = self.var_adj[v].clone();
        for &c in &frontier {
            self.depth[c as usize] = 0;
        }
        let mut level = 0;
        while !frontier.is_empty() && candidates_left > 0 {
            level += 1;
            let mut next = Vec::new();
            for &c in &frontier {
                for &w in &self.chk_adj[c as usize] {
                    if self.seen_var[w as usize] == stamp {
                        continue;
                    }
                    self.seen_var[w as usize] = stamp;
                    for &c2 in &self.var_adj[w as usize] {
                        if self.depth[c2 as usize] == UNREACHED {
                            self.depth[c2 as usize] = level;
                            if self.deficit[c2 as usize] > 0 {
                                candidates_left -= 1;
                            }
                            next.push(c2);
                        }
                    }
                }
            }
            frontier = next;
        }
    }

    fn connect(&mut self, v: usize, c: usize) {
        self.var_adj[v].push(c as u32);
        self.chk_adj[c].push(v as u32);
        self.deficit[c] -= 1;
    }

    /// Every check with spare capacity is already adjacent to `v`: move an
    /// existing edge `(w, c2)` to `(w, c)` and connect `v` to `c2` instead.
    fn swap_repair(&mut self, v: usize, rng: &mut ChaCha8Rng) -> Result<()> {
        let m = self.deficit.len();
        let Some(c) = (0..m).find(|&c| self.deficit[c] > 0) else {
            return Err(Error::Construction("no check has spare edges".into()));
        };
        let start = rng.gen_range(0..m);
        for off in 0..m {
            let c2 = (start + off) % m;
            if c2 == c || self.var_adj[v].contains(&(c2 as u32)) {
                continue;
            }
            let w = self.chk_adj[c2]
                .iter()
                .copied()
                .find(|&w| w as usize != v && !self.var_adj[w as usize].contains(&(c as u32)));
            if let Some(w) = w {
                let w = w as usize;
                self.chk_adj[c2].retain(|&x| x as usize != w);
                let slot = self.var_adj[w].iter().position(|&x| x as usize == c2).unwrap();
                self.var_adj[w][slot] = c as u32;
                self.chk_adj[c].push(w as u32);
                self.deficit[c] -= 1;
                self.var_adj[v].push(c2 as u32);
                self.chk_adj[c2].push(v as u32);
                return Ok(());
            }
        }
        Err(Error::Construction(format!(
            "cannot place an edge of variable {v} without a repeated edge"
        )))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;

    #[test]
    fn dense_corner_needs_repair() {
        // Few checks, high degrees: forces the swap path at the end.
        let seq = DegreeSequence {
            var_degrees: vec![2; 9].into_iter().chain([3, 3, 3]).collect(),
            check_degrees: vec![7, 6, 6, 8],
        };
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let adj = progressive_edge_growth(&seq, &mut rng).unwrap();
        let mut counts = vec![0; 4];
        for (v, checks) in adj.iter().enumerate() {
            assert_eq!(checks.len(), seq.var_degrees[v]);
            let mut c = checks.clone();
            c.sort_unstable();
            c.dedup();
            assert_eq!(c.len(), checks.len());
            checks.iter().for_each(|&c| counts[c as usize] += 1);
        }
        assert_eq!(counts, seq.check_degrees);
    }
}
