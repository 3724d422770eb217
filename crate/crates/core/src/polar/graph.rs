//! The normal realization of the polar encoding graph, its girth, and
//! stopping-tree analysis.
//!
//! Variables sit in columns `0..=n` with `N` rows each: column 0 holds the
//! inputs `u`, column `n` the code bits `x`. Stage `s` (1-based) links column
//! `s - 1` to column `s` through butterflies of span `h = 2^(s-1)`: for every
//! row `j` with bit `h` clear, an XOR check `(a, b, c)` with
//! `c = a ^ b` and a pass-through check `(b, d)` with `d = b`, where
//! `a = (s-1, j)`, `b = (s-1, j+h)`, `c = (s, j)`, `d = (s, j+h)`.

use std::collections::VecDeque;

use super::PolarCode;
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CheckKind {
    /// Degree 3: operands first, output last.
    Xor,
    /// Degree 2 pass-through.
    Equality,
}

#[derive(Debug, Clone)]
pub struct FactorGraph {
    n: u32,
    len: usize,
    check_kind: Vec<CheckKind>,
    check_stage: Vec<u32>,
    check_vars: Vec<Vec<usize>>,
    var_checks: Vec<Vec<usize>>,
}

impl FactorGraph {
    pub fn n(&self) -> u32 {
        self.n
    }

    /// Rows per column, `N = 2^n`.
    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn num_variables(&self) -> usize {
        self.var_checks.len()
    }

    pub fn num_checks(&self) -> usize {
        self.check_vars.len()
    }

    pub fn num_edges(&self) -> usize {
        self.check_vars.iter().map(Vec::len).sum()
    }

    /// Variable id of `(column, row)`.
    #[inline]
    pub fn var(&self, column: u32, row: usize) -> usize {
        column as usize * self.len + row
    }

    /// `(column, row)` of a variable id.
    #[inline]
    pub fn var_position(&self, v: usize) -> (u32, usize) {
        ((v / self.len) as u32, v % self.len)
    }

    pub fn check_kind(&self, c: usize) -> CheckKind {
        self.check_kind[c]
    }

    pub fn check_stage(&self, c: usize) -> u32 {
        self.check_stage[c]
    }

    pub fn check_vars(&self, c: usize) -> &[usize] {
        &self.check_vars[c]
    }

    pub fn var_checks(&self, v: usize) -> &[usize] {
        &self.var_checks[v]
    }

    /// Hard-decision evaluation of every variable from the inputs, in stage
    /// order. Returns one value per variable id.
    pub fn propagate(&self, u: &[u8]) -> Result<Vec<u8>> {
        if u.len() != self.len {
            return Err(Error::shape("input bits", self.len, u.len()));
        }
        let mut values = vec![0u8; self.num_variables()];
        values[..self.len].copy_from_slice(u);
        // checks are stored stage by stage, so inputs are ready in order
        for (kind, vars) in self.check_kind.iter().zip(&self.check_vars) {
            match kind {
                CheckKind::Xor => values[vars[2]] = values[vars[0]] ^ values[vars[1]],
                CheckKind::Equality => values[vars[1]] = values[vars[0]],
            }
        }
        Ok(values)
    }

    /// Column `n` of [`propagate`](Self::propagate).
    pub fn encode_by_propagation(&self, u: &[u8]) -> Result<Vec<u8>> {
        let values = self.propagate(u)?;
        Ok(values[self.n as usize * self.len..].to_vec())
    }

    /// Whether a full assignment of hard decisions satisfies every check.
    pub fn all_checks_satisfied(&self, values: &[u8]) -> bool {
        self.check_kind
            .iter()
            .zip(&self.check_vars)
            .all(|(kind, vars)| match kind {
                CheckKind::Xor => values[vars[0]] ^ values[vars[1]] ^ values[vars[2]] == 0,
                CheckKind::Equality => values[vars[0]] == values[vars[1]],
            })
    }

    /// Undirected adjacency over all nodes: variables first, then checks at
    /// `num_variables() + c`.
    pub fn bipartite_adjacency(&self) -> Vec<Vec<usize>> {
        let nv = self.num_variables();
        let mut adj: Vec<Vec<usize>> = self
            .var_checks
            .iter()
            .map(|cs| cs.iter().map(|&c| nv + c).collect())
            .collect();
        adj.extend(self.check_vars.iter().cloned());
        adj
    }

    /// Adjacency of the graph with pass-through checks contracted: nodes
    /// `0..classes` are merged variables, the rest are XOR checks.
    pub fn contracted(&self) -> ContractedGraph {
        let nv = self.num_variables();
        let mut parent: Vec<usize> = (0..nv).collect();
        fn find(p: &mut [usize], mut x: usize) -> usize {
            while p[x] != x {
                p[x] = p[p[x]];
                x = p[x];
            }
            x
        }
        for (kind, vars) in self.check_kind.iter().zip(&self.check_vars) {
            if *kind == CheckKind::Equality {
                let (a, b) = (find(&mut parent, vars[0]), find(&mut parent, vars[1]));
                if a != b {
                    parent[b] = a;
                }
            }
        }
        let mut class_of = vec![usize::MAX; nv];
        let mut classes = 0;
        for v in 0..nv {
            let r = find(&mut parent, v);
            if class_of[r] == usize::MAX {
                class_of[r] = classes;
                classes += 1;
            }
            class_of[v] = class_of[r];
        }
        let xors: Vec<usize> = (0..self.num_checks())
            .filter(|&c| self.check_kind[c] == CheckKind::Xor)
            .collect();
        let mut adj = vec![Vec::new(); classes + xors.len()];
        for (xi, &c) in xors.iter().enumerate() {
            let node = classes + xi;
            for &v in &self.check_vars[c] {
                let cl = class_of[v];
                debug_assert!(!adj[node].contains(&cl), "parallel edge in contracted graph");
                adj[node].push(cl);
                adj[cl].push(node);
            }
        }
        ContractedGraph {
            adjacency: adj,
            classes,
            class_of,
        }
    }
}

/// Polar graph with pass-through checks merged away.
#[derive(Debug, Clone)]
pub struct ContractedGraph {
    pub adjacency: Vec<Vec<usize>>,
    /// Number of merged-variable nodes; nodes at or above this are XOR checks.
    pub classes: usize,
    /// Merged-variable node of every original variable.
    pub class_of: Vec<usize>,
}

/// Builds the factor graph of a length-`2^n` polar transform.
pub fn build_factor_graph(n: u32) -> Result<FactorGraph> {
    if n == 0 || n > 24 {
        return Err(Error::Parameter(format!("n = {n} out of 1..=24")));
    }
    let len = 1usize << n;
    let nv = (n as usize + 1) * len;
    let mut g = FactorGraph {
        n,
        len,
        check_kind: Vec::with_capacity(n as usize * len),
        check_stage: Vec::with_capacity(n as usize * len),
        check_vars: Vec::with_capacity(n as usize * len),
        var_checks: vec![Vec::with_capacity(3); nv],
    };
    for s in 1..=n {
        let h = 1usize << (s - 1);
        for j in (0..len).filter(|j| j & h == 0) {
            let a = g.var(s - 1, j);
            let b = g.var(s - 1, j + h);
            let c = g.var(s, j);
            let d = g.var(s, j + h);
            for (kind, vars) in [(CheckKind::Xor, vec![a, b, c]), (CheckKind::Equality, vec![b, d])] {
                let id = g.check_vars.len();
                for &v in &vars {
                    g.var_checks[v].push(id);
                }
                g.check_kind.push(kind);
                g.check_stage.push(s);
                g.check_vars.push(vars);
            }
        }
    }
    Ok(g)
}

/// Length of the shortest cycle, counted in edges of the full bipartite
/// graph (pass-through checks included), `None` if the graph is a forest.
pub fn girth(graph: &FactorGraph) -> Option<usize> {
    shortest_cycle(&graph.bipartite_adjacency())
}

/// Exact girth of an undirected simple graph by a breadth-first search from
/// every node.
pub(crate) fn shortest_cycle(adj: &[Vec<usize>]) -> Option<usize> {
    let nodes = adj.len();
    let mut best = usize::MAX;
    let mut dist = vec![usize::MAX; nodes];
    let mut from = vec![usize::MAX; nodes];
    let mut touched = Vec::new();
    let mut queue = VecDeque::new();
    for root in 0..nodes {
        for &t in &touched {
            dist[t] = usize::MAX;
            from[t] = usize::MAX;
        }
        touched.clear();
        queue.clear();
        dist[root] = 0;
        touched.push(root);
        queue.push_back(root);
        while let Some(u) = queue.pop_front() {
            if 2 * dist[u] + 1 >= best {
                break;
            }
            for &v in &adj[u] {
                if dist[v] == usize::MAX {
                    dist[v] = dist[u] + 1;
                    from[v] = u;
                    touched.push(v);
                    queue.push_back(v);
                } else if from[u] != v {
                    best = best.min(dist[u] + dist[v] + 1);
                }
            }
        }
    }
    (best != usize::MAX).then_some(best)
}

/// A stopping set shaped as a tree, rooted at one input bit with leaves on
/// the code bits.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct StoppingTree {
    pub root: usize,
    /// Sorted variable ids.
    pub variables: Vec<usize>,
    /// Sorted check ids.
    pub checks: Vec<usize>,
    /// Sorted code-bit indices (rows of column `n`).
    pub leaves: Vec<usize>,
}

/// Walks the stopping tree of input `i` rightwards through the graph.
fn walk_tree(graph: &FactorGraph, i: usize) -> StoppingTree {
    let n = graph.n();
    let mut in_set = vec![false; graph.num_variables()];
    let mut checks = Vec::new();
    let mut stack = vec![graph.var(0, i)];
    in_set[graph.var(0, i)] = true;
    while let Some(v) = stack.pop() {
        let (col, _) = graph.var_position(v);
        if col == n {
            continue;
        }
        for &c in graph.var_checks(v) {
            if graph.check_stage(c) != col + 1 {
                continue;
            }
            let target = match graph.check_kind(c) {
                CheckKind::Xor => graph.check_vars(c)[2],
                CheckKind::Equality => graph.check_vars(c)[1],
            };
            checks.push(c);
            if !in_set[target] {
                in_set[target] = true;
                stack.push(target);
            }
        }
    }
    let variables: Vec<usize> = (0..in_set.len()).filter(|&v| in_set[v]).collect();
    let base = graph.var(n, 0);
    let leaves = variables
        .iter()
        .filter(|&&v| v >= base)
        .map(|&v| v - base)
        .collect();
    checks.sort_unstable();
    checks.dedup();
    StoppingTree {
        root: i,
        variables,
        checks,
        leaves,
    }
}

/// The stopping tree of information bit `i`.
pub fn stopping_tree(graph: &FactorGraph, code: &PolarCode, i: usize) -> Result<StoppingTree> {
    if code.len() != graph.len() {
        return Err(Error::shape("code length", graph.len(), code.len()));
    }
    if i >= code.len() {
        return Err(Error::Parameter(format!("input index {i} out of range")));
    }
    if code.is_frozen(i) {
        return Err(Error::Domain(format!(
            "input {i} is frozen; stopping trees are rooted at information bits"
        )));
    }
    Ok(walk_tree(graph, i))
}

/// Which inputs root the trees counted by [`code_bit_tree_counts_with`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TreeRoots {
    Information,
    /// Diagnostic variant counting trees of every input.
    AllInputs,
}

/// Number of information-rooted stopping trees having each code bit as a leaf.
pub fn code_bit_tree_counts(graph: &FactorGraph, code: &PolarCode) -> Result<Vec<usize>> {
    code_bit_tree_counts_with(graph, code, TreeRoots::Information)
}

pub fn code_bit_tree_counts_with(
    graph: &FactorGraph,
    code: &PolarCode,
    roots: TreeRoots,
) -> Result<Vec<usize>> {
    if code.len() != graph.len() {
        return Err(Error::shape("code length", graph.len(), code.len()));
    }
    let mut counts = vec![0usize; code.len()];
    let roots: Vec<usize> = match roots {
        TreeRoots::Information => code.info_set().to_vec(),
        TreeRoots::AllInputs => (0..code.len()).collect(),
    };
    for i in roots {
        for leaf in walk_tree(graph, i).leaves {
            counts[leaf] += 1;
        }
    }
    Ok(counts)
}

/// True iff every check touching `vars` has at least two members in it.
pub fn is_stopping_set(graph: &FactorGraph, vars: &[usize]) -> bool {
    let mut member = vec![false; graph.num_variables()];
    for &v in vars {
        member[v] = true;
    }
    vars.iter().all(|&v| {
        graph.var_checks(v).iter().all(|&c| {
            graph.check_vars(c).iter().filter(|&&w| member[w]).count() >= 2
        })
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::polar::polar_transform;
    use crate::test_support::{brute_force_girth, subset_of};

    #[test]
    fn sizes() {
        let g = build_factor_graph(1).unwrap();
        assert_eq!((g.num_variables(), g.num_checks()), (4, 2));
        assert_eq!(g.check_kind(0), CheckKind::Xor);
        assert_eq!(g.check_kind(1), CheckKind::Equality);
        for n in 1..=8u32 {
            let g = build_factor_graph(n).unwrap();
            let len = 1usize << n;
            assert_eq!(g.num_variables(), (n as usize + 1) * len);
            assert_eq!(g.num_checks(), n as usize * len);
            assert_eq!(g.num_edges(), 5 * n as usize * len / 2);
        }
        assert!(build_factor_graph(0).is_err());
    }

    #[test]
    fn propagation_reproduces_transform() {
        let g = build_factor_graph(3).unwrap();
        let u = [0, 0, 0, 1, 0, 0, 0, 0];
        assert_eq!(g.encode_by_propagation(&u).unwrap(), polar_transform(&u).unwrap());
        let g = build_factor_graph(6).unwrap();
        for seed in 0..20u64 {
            let u: Vec<u8> = (0..64).map(|i| ((seed * 31 + i * 7) % 3 == 0) as u8).collect();
            let vals = g.propagate(&u).unwrap();
            assert!(g.all_checks_satisfied(&vals));
            assert_eq!(g.encode_by_propagation(&u).unwrap(), polar_transform(&u).unwrap());
        }
    }

    #[test]
    fn girth_small_cases() {
        assert_eq!(girth(&build_factor_graph(1).unwrap()), None);
        let g3 = build_factor_graph(3).unwrap();
        let got = girth(&g3).unwrap();
        assert!(got >= 12);
        assert_eq!(Some(got), brute_force_girth(&g3.bipartite_adjacency()));
        // merging pass-throughs shortens the 12-cycles to 8
        assert_eq!(shortest_cycle(&g3.contracted().adjacency), Some(8));
    }

    #[test]
    fn girth_at_least_twelve_up_to_256() {
        for n in 3..=8 {
            let g = girth(&build_factor_graph(n).unwrap()).unwrap();
            assert!(g >= 12, "n={n}: girth {g}");
        }
    }

    #[test]
    fn stopping_tree_examples() {
        let g = build_factor_graph(3).unwrap();
        let code = PolarCode::from_info_set(3, 0..8).unwrap();
        assert_eq!(stopping_tree(&g, &code, 7).unwrap().leaves, (0..8).collect::<Vec<_>>());
        assert_eq!(stopping_tree(&g, &code, 0).unwrap().leaves, vec![0]);
        let frozen = PolarCode::from_info_set(3, [3, 5, 6, 7]).unwrap();
        assert!(matches!(stopping_tree(&g, &frozen, 0), Err(Error::Domain(_))));
    }

    #[test]
    fn tree_leaves_are_index_subsets() {
        for n in 1..=5u32 {
            let g = build_factor_graph(n).unwrap();
            let len = 1usize << n;
            let code = PolarCode::from_info_set(n, 0..len).unwrap();
            for i in 0..len {
                let t = stopping_tree(&g, &code, i).unwrap();
                assert_eq!(t.leaves.len(), 1 << i.count_ones());
                let expect: Vec<usize> = (0..len).filter(|&j| subset_of(j, i)).collect();
                assert_eq!(t.leaves, expect);
                assert!(is_stopping_set(&g, &t.variables));
            }
        }
    }

    #[test]
    fn trees_are_connected_and_acyclic_when_contracted() {
        for n in 1..=5u32 {
            let g = build_factor_graph(n).unwrap();
            let cg = g.contracted();
            let len = 1usize << n;
            let code = PolarCode::from_info_set(n, 0..len).unwrap();
            for i in 0..len {
                let t = stopping_tree(&g, &code, i).unwrap();
                let mut nodes: Vec<usize> = t.variables.iter().map(|&v| cg.class_of[v]).collect();
                nodes.sort_unstable();
                nodes.dedup();
                let xor_nodes: Vec<usize> = {
                    let xors: Vec<usize> = (0..g.num_checks())
                        .filter(|&c| g.check_kind(c) == CheckKind::Xor)
                        .collect();
                    t.checks
                        .iter()
                        .filter_map(|c| xors.binary_search(c).ok())
                        .map(|x| cg.classes + x)
                        .collect()
                };
                let members: Vec<usize> = nodes.iter().chain(&xor_nodes).copied().collect();
                let edges: usize = xor_nodes
                    .iter()
                    .map(|&x| cg.adjacency[x].iter().filter(|v| nodes.contains(v)).count())
                    .sum();
                // a connected graph with |V| - 1 edges is a tree
                assert_eq!(edges + 1, members.len(), "n={n} i={i}");
                let mut seen = vec![cg.class_of[g.var(0, i)]];
                let mut k = 0;
                while k < seen.len() {
                    let u = seen[k];
                    for &w in &cg.adjacency[u] {
                        if members.contains(&w) && !seen.contains(&w) {
                            seen.push(w);
                        }
                    }
                    k += 1;
                }
                assert_eq!(seen.len(), members.len());
            }
        }
    }

    #[test]
    fn tree_counts_for_n8_example() {
        let g = build_factor_graph(3).unwrap();
        let code = PolarCode::from_info_set(3, [3, 5, 6, 7]).unwrap();
        let counts = code_bit_tree_counts(&g, &code).unwrap();
        assert_eq!(counts[7], 1);
        assert_eq!(counts[6], 2);
        assert_eq!(counts, vec![4, 3, 3, 2, 3, 2, 2, 1]);

        let all = PolarCode::from_info_set(3, 0..8).unwrap();
        let counts = code_bit_tree_counts(&g, &all).unwrap();
        for (j, c) in counts.iter().enumerate() {
            assert_eq!(*c, 1 << (3 - j.count_ones()));
        }
        assert_eq!(
            code_bit_tree_counts_with(&g, &code, TreeRoots::AllInputs).unwrap(),
            counts
        );
    }

    #[test]
    fn counts_match_subset_identity_and_grow_with_info_set() {
        let n = 5;
        let g = build_factor_graph(n).unwrap();
        let mut info: Vec<usize> = vec![31];
        let mut prev = vec![0usize; 32];
        for extra in [15, 23, 27, 29, 30, 7, 11, 13, 14, 19, 0] {
            info.push(extra);
            let code = PolarCode::from_info_set(n, info.clone()).unwrap();
            let counts = code_bit_tree_counts(&g, &code).unwrap();
            for (j, &c) in counts.iter().enumerate() {
                let identity = info.iter().filter(|&&i| subset_of(j, i)).count();
                assert_eq!(c, identity);
                assert!(c >= prev[j]);
            }
            prev = counts;
        }
    }

    #[test]
    fn stopping_set_basics() {
        let g = build_factor_graph(3).unwrap();
        assert!(is_stopping_set(&g, &[]));
        for j in 0..8 {
            assert!(!is_stopping_set(&g, &[g.var(3, j)]));
        }
        let everything: Vec<usize> = (0..g.num_variables()).collect();
        assert!(is_stopping_set(&g, &everything));
    }
}
