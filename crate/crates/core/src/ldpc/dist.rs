//! Edge-perspective degree distributions and their quantization into integer
//! node-degree sequences.

use std::fmt::Write as _;
use std::fs;
use std::path::Path;

use crate::error::{Error, Result};

/// Tolerance on the coefficient sums of lambda and rho.
pub const SUM_TOLERANCE: f64 = 2e-6;

/// `lambda(x) = sum lambda_d x^(d-1)` and `rho(x) = sum rho_d x^(d-1)`, as
/// `(degree, fraction of edges)` pairs.
#[derive(Debug, Clone, PartialEq)]
pub struct DegreeDistribution {
    pub lambda: Vec<(usize, f64)>,
    pub rho: Vec<(usize, f64)>,
    /// Decoding threshold, carried as metadata only.
    pub threshold: Option<f64>,
}

impl DegreeDistribution {
    pub fn new(lambda: Vec<(usize, f64)>, rho: Vec<(usize, f64)>) -> Result<Self> {
        let d = DegreeDistribution {
            lambda: normalize_order(lambda),
            rho: normalize_order(rho),
            threshold: None,
        };
        d.validate()?;
        Ok(d)
    }

    /// Irregular pair with variable degrees {2, 3, 4, 10} and check degrees
    /// {35, 36}; design rate 0.930, BEC-style threshold 0.435.
    pub fn irregular_093() -> Self {
        DegreeDistribution {
            lambda: vec![(2, 0.502197), (3, 0.375436), (4, 0.061422), (10, 0.060945)],
            rho: vec![(35, 0.076592), (36, 0.923408)],
            threshold: Some(0.435),
        }
    }

    /// `(dv, dc)`-regular ensemble.
    pub fn regular(dv: usize, dc: usize) -> Result<Self> {
        Self::new(vec![(dv, 1.0)], vec![(dc, 1.0)])
    }

    pub fn validate(&self) -> Result<()> {
        for (name, side) in [("lambda", &self.lambda), ("rho", &self.rho)] {
            if side.is_empty() {
                return Err(Error::Parameter(format!("{name} is empty")));
            }
            if let Some(&(d, f)) = side.iter().find(|(d, f)| *d < 2 || !(*f > 0.0)) {
                return Err(Error::Parameter(format!(
                    "{name}: degree {d} with fraction {f} (need degree >= 2, fraction > 0)"
                )));
            }
            let sum: f64 = side.iter().map(|(_, f)| f).sum();
            if (sum - 1.0).abs() > SUM_TOLERANCE {
                return Err(Error::Parameter(format!("{name} fractions sum to {sum}")));
            }
        }
        Ok(())
    }

    /// `sum lambda_d / d`, i.e. variable nodes per edge.
    pub fn var_nodes_per_edge(&self) -> f64 {
        self.lambda.iter().map(|&(d, f)| f / d as f64).sum()
    }

    pub fn check_nodes_per_edge(&self) -> f64 {
        self.rho.iter().map(|&(d, f)| f / d as f64).sum()
    }

    /// `1 - (sum rho_d/d) / (sum lambda_d/d)`.
    pub fn design_rate(&self) -> f64 {
        1.0 - self.check_nodes_per_edge() / self.var_nodes_per_edge()
    }

    /// Text form: one `lambda <d> <f>` / `rho <d> <f>` / `threshold <t>` per
    /// line, `#` starts a comment.
    pub fn to_text(&self) -> String {
        let mut s = String::new();
        for &(d, f) in &self.lambda {
            let _ = writeln!(s, "lambda {d} {f}");
        }
        for &(d, f) in &self.rho {
            let _ = writeln!(s, "rho {d} {f}");
        }
        if let Some(t) = self.threshold {
            let _ = writeln!(s, "threshold {t}");
        }
        s
    }

    pub fn parse(text: &str, path: &Path) -> Result<Self> {
        let mut lambda = Vec::new();
        let mut rho = Vec::new();
        let mut threshold = None;
        for (i, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let toks: Vec<&str> = line.split_whitespace().collect();
            let bad = || Error::parse(path, i + 1, format!("cannot parse `{line}`"));
            match toks[..] {
                ["lambda", d, f] | ["rho", d, f] => {
                    let d: usize = d.parse().map_err(|_| bad())?;
                    let f: f64 = f.parse().map_err(|_| bad())?;
                    if toks[0] == "lambda" { &mut lambda } else { &mut rho }.push((d, f));
                }
                ["threshold", t] => threshold = Some(t.parse().map_err(|_| bad())?),
                _ => return Err(bad()),
            }
        }
        let mut d = DegreeDistribution::new(lambda, rho)
            .map_err(|e| Error::parse(path, 0, e.to_string()))?;
        d.threshold = threshold;
        Ok(d)
    }

    pub fn read(path: impl AsRef<Path>) -> Result<Self> {
        let path = path.as_ref();
        let text = fs::read_to_string(path)
            .map_err(|e| Error::Config(format!("{}: {e}", path.display())))?;
        Self::parse(&text, path)
    }
}

fn normalize_order(mut v: Vec<(usize, f64)>) -> Vec<(usize, f64)> {
    v.sort_by_key(|&(d, _)| d);
    v
}

/// Per-node degrees of a concrete graph. Variable degrees are sorted
/// ascending.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DegreeSequence {
    pub var_degrees: Vec<usize>,
    pub check_degrees: Vec<usize>,
}

impl DegreeSequence {
    pub fn edges(&self) -> usize {
        self.var_degrees.iter().sum()
    }
}

/// Edge-perspective histogram of a list of node degrees.
pub fn edge_histogram(degrees: &[usize]) -> Vec<(usize, f64)> {
    let total: usize = degrees.iter().sum();
    let mut counts = std::collections::BTreeMap::new();
    for &d in degrees {
        *counts.entry(d).or_insert(0usize) += d;
    }
    counts
        .into_iter()
        .map(|(d, e)| (d, e as f64 / total as f64))
        .collect()
}

/// L1 distance between two edge-perspective histograms.
pub fn histogram_l1(a: &[(usize, f64)], b: &[(usize, f64)]) -> f64 {
    let mut degrees: Vec<usize> = a.iter().chain(b).map(|&(d, _)| d).collect();
    degrees.sort_unstable();
    degrees.dedup();
    let get = |h: &[(usize, f64)], d| h.iter().find(|(x, _)| *x == d).map_or(0.0, |&(_, f)| f);
    degrees.iter().map(|&d| (get(a, d) - get(b, d)).abs()).sum()
}

/// Largest-remainder rounding of `weights` scaled to sum to `total`.
fn apportion(weights: &[f64], total: usize) -> Vec<usize> {
    let sum: f64 = weights.iter().sum();
    let ideal: Vec<f64> = weights.iter().map(|w| w / sum * total as f64).collect();
    let mut counts: Vec<usize> = ideal.iter().map(|x| x.floor() as usize).collect();
    let mut short = total - counts.iter().sum::<usize>();
    let mut order: Vec<usize> = (0..weights.len()).collect();
    order.sort_by(|&a, &b| {
        let ra = ideal[a] - ideal[a].floor();
        let rb = ideal[b] - ideal[b].floor();
        rb.total_cmp(&ra)
    });
    for &i in order.iter().cycle() {
        if short == 0 {
            break;
        }
        counts[i] += 1;
        short -= 1;
    }
    counts
}

fn expand(degrees: &[usize], counts: &[usize]) -> Vec<usize> {
    degrees
        .iter()
        .zip(counts)
        .flat_map(|(&d, &c)| std::iter::repeat(d).take(c))
        .collect()
}

fn side_l1(degrees: &[usize], counts: &[usize], target: &[(usize, f64)]) -> f64 {
    histogram_l1(&edge_histogram(&expand(degrees, counts)), target)
}

fn node_weights(side: &[(usize, f64)]) -> (Vec<usize>, Vec<f64>) {
    side.iter().map(|&(d, f)| (d, f / d as f64)).unzip()
}

fn edges_of(degrees: &[usize], counts: &[usize]) -> usize {
    degrees.iter().zip(counts).map(|(d, c)| d * c).sum()
}

/// Quantizes `dist` to `n` variable nodes. Both sides must carry the same
/// number of edges, so the edge count is searched near its natural value for
/// the pair of node-degree sequences closest to the targets, distance being
/// the larger of the two histogram L1 errors, each relative to its rounding
/// scale `2 * (number of degrees) / n`.
pub fn quantize(n: usize, dist: &DegreeDistribution) -> Result<DegreeSequence> {
    dist.validate()?;
    let (vd, vw) = node_weights(&dist.lambda);
    let (cd, cw) = node_weights(&dist.rho);
    let natural = edges_of(&vd, &apportion(&vw, n));
    let window = 2 * (vd[vd.len() - 1] + cd[cd.len() - 1]);
    let scale_v = 2.0 * vd.len() as f64 / n as f64;
    let scale_c = 2.0 * cd.len() as f64 / n as f64;
    let mut best: Option<(f64, Vec<usize>, Vec<usize>)> = None;
    for edges in natural.saturating_sub(window)..=natural + window {
        let Some((vc, lv)) = fit_side(&vd, &vw, &dist.lambda, n, edges) else {
            continue;
        };
        let m_mid = (edges as f64 * dist.check_nodes_per_edge()).round() as usize;
        for m in m_mid.saturating_sub(1).max(1)..=m_mid + 1 {
            let Some((cc, lc)) = fit_side(&cd, &cw, &dist.rho, m, edges) else {
                continue;
            };
            let score = (lv / scale_v).max(lc / scale_c);
            if best.as_ref().map_or(true, |b| score < b.0) {
                best = Some((score, vc.clone(), cc));
            }
        }
    }
    let (_, vc, cc) = best.ok_or_else(|| {
        Error::Construction(format!(
            "infeasible degree sequence for n = {n}: no check nodes of degrees {cd:?} match \
             {natural} variable-side edges"
        ))
    })?;
    Ok(DegreeSequence {
        var_degrees: expand(&vd, &vc),
        check_degrees: expand(&cd, &cc),
    })
}

/// `count` nodes with degrees in `degrees` carrying exactly `edges` edges:
/// largest-remainder rounding, then the cheapest unit moves between adjacent
/// classes that bring the edge count closer. Returns the counts and their
/// histogram L1 distance to `target`.
fn fit_side(
    degrees: &[usize],
    weights: &[f64],
    target: &[(usize, f64)],
    count: usize,
    edges: usize,
) -> Option<(Vec<usize>, f64)> {
    if edges < degrees[0] * count || edges > degrees[degrees.len() - 1] * count {
        return None;
    }
    let mut counts = apportion(weights, count);
    loop {
        let diff = edges as i64 - edges_of(degrees, &counts) as i64;
        if diff == 0 {
            return Some(polish(degrees, counts, target));
        }
        let mut best: Option<(f64, usize, usize)> = None;
        for i in 0..degrees.len() {
            for j in 0..degrees.len() {
                let delta = degrees[j] as i64 - degrees[i] as i64;
                if i == j || counts[i] == 0 || (diff - delta).abs() >= diff.abs() {
                    continue;
                }
                let mut trial = counts.clone();
                trial[i] -= 1;
                trial[j] += 1;
                let cost = side_l1(degrees, &trial, target) / delta.unsigned_abs() as f64;
                if best.map_or(true, |b| cost < b.0) {
                    best = Some((cost, i, j));
                }
            }
        }
        let (_, i, j) = best?;
        counts[i] -= 1;
        counts[j] += 1;
    }
}

/// Pairs of unit moves that keep both the node and the edge count, applied
/// while they reduce the L1 error.
fn polish(degrees: &[usize], mut counts: Vec<usize>, target: &[(usize, f64)]) -> (Vec<usize>, f64) {
    let k = degrees.len();
    let mut l1 = side_l1(degrees, &counts, target);
    loop {
        let mut improved = false;
        for (a, b, c, d) in (0..k).flat_map(|a| (0..k).flat_map(move |b| (0..k).flat_map(move |c| (0..k).map(move |d| (a, b, c, d))))) {
            // a -> b and c -> d
            if a == b || c == d || degrees[b] + degrees[d] != degrees[a] + degrees[c] {
                continue;
            }
            let mut trial = counts.clone();
            if trial[a] == 0 {
                continue;
            }
            trial[a] -= 1;
            trial[b] += 1;
            if trial[c] == 0 {
                continue;
            }
            trial[c] -= 1;
            trial[d] += 1;
            let t = side_l1(degrees, &trial, target);
            if t < l1 - 1e-15 {
                counts = trial;
                l1 = t;
                improved = true;
            }
        }
        if !improved {
            return (counts, l1);
        }
    }
}

/// Variable degrees from `lambda`, with exactly `m` checks whose degrees are
/// as equal as possible.
pub fn quantize_with_checks(
    n: usize,
    lambda: &[(usize, f64)],
    m: usize,
) -> Result<DegreeSequence> {
    if m == 0 || m >= n {
        return Err(Error::Construction(format!("need 0 < m < n, got m = {m}, n = {n}")));
    }
    let lambda = normalize_order(lambda.to_vec());
    let (vd, vw) = node_weights(&lambda);
    let vc = apportion(&vw, n);
    let edges = edges_of(&vd, &vc);
    let low = edges / m;
    if low < 2 {
        return Err(Error::Construction(format!(
            "{edges} edges over {m} checks leaves checks of degree < 2"
        )));
    }
    let high_count = edges - low * m;
    let mut check_degrees = vec![low; m - high_count];
    check_degrees.extend(std::iter::repeat(low + 1).take(high_count));
    Ok(DegreeSequence {
        var_degrees: expand(&vd, &vc),
        check_degrees,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn reference_distribution_sums() {
        let d = DegreeDistribution::irregular_093();
        let sl: f64 = d.lambda.iter().map(|x| x.1).sum();
        let sr: f64 = d.rho.iter().map(|x| x.1).sum();
        assert!((sl - 1.0).abs() <= SUM_TOLERANCE);
        assert!((sr - 1.0).abs() <= SUM_TOLERANCE);
        d.validate().unwrap();
        // hand evaluation: 1 - 0.02783856 / 0.39769380
        assert!((d.design_rate() - 0.930001).abs() < 1e-5, "{}", d.design_rate());
    }

    #[test]
    fn validation_errors() {
        assert!(DegreeDistribution::new(vec![(1, 1.0)], vec![(6, 1.0)]).is_err());
        assert!(DegreeDistribution::new(vec![(3, 0.5)], vec![(6, 1.0)]).is_err());
        assert!(DegreeDistribution::new(vec![(3, 1.0)], vec![]).is_err());
        assert!(DegreeDistribution::new(vec![(3, 1.0), (4, 0.0)], vec![(6, 1.0)]).is_err());
    }

    #[test]
    fn regular_quantization() {
        let seq = quantize(1000, &DegreeDistribution::regular(3, 6).unwrap()).unwrap();
        assert_eq!(seq.var_degrees.len(), 1000);
        assert_eq!(seq.check_degrees.len(), 500);
        assert!(seq.var_degrees.iter().all(|&d| d == 3));
        assert!(seq.check_degrees.iter().all(|&d| d == 6));
        let err = quantize(1001, &DegreeDistribution::regular(3, 6).unwrap()).unwrap_err();
        assert!(matches!(err, Error::Construction(_)), "{err}");
    }

    #[test]
    fn irregular_quantization_is_close() {
        let d = DegreeDistribution::irregular_093();
        for n in [2000, 4311, 10000, 68985] {
            let seq = quantize(n, &d).unwrap();
            assert_eq!(seq.var_degrees.len(), n);
            assert_eq!(seq.edges(), seq.check_degrees.iter().sum::<usize>());
            let l1_v = histogram_l1(&edge_histogram(&seq.var_degrees), &d.lambda);
            let l1_c = histogram_l1(&edge_histogram(&seq.check_degrees), &d.rho);
            assert!(l1_c <= 1e-2, "n={n}: rho L1 {l1_c}");
            if n != 4311 {
                assert!(l1_v <= 2.0 / n as f64 * d.lambda.len() as f64, "n={n}: lambda L1 {l1_v}");
            }
        }
    }

    /// Every (variable counts, check counts) pair near the ideal with equal
    /// edge totals, scored as in `quantize`.
    fn brute_force_score(n: usize, d: &DegreeDistribution) -> f64 {
        let sv: f64 = d.var_nodes_per_edge();
        let ideal: Vec<f64> = d.lambda.iter().map(|&(deg, f)| f / deg as f64 / sv * n as f64).collect();
        let hist = |pairs: &[(usize, i64)]| {
            let e: i64 = pairs.iter().map(|&(deg, c)| deg as i64 * c).sum();
            let h: Vec<(usize, f64)> = pairs.iter().map(|&(deg, c)| (deg, (deg as i64 * c) as f64 / e as f64)).collect();
            (h, e)
        };
        let mut var_best = std::collections::HashMap::new();
        let r = 12i64;
        let base: Vec<i64> = ideal.iter().map(|x| x.round() as i64).collect();
        for a in -r..r {
            for b in -r..r {
                for c in -r..r {
                    let c3 = base[1] + a;
                    let c4 = base[2] + b;
                    let c10 = base[3] + c;
                    let c2 = n as i64 - c3 - c4 - c10;
                    let (h, e) = hist(&[(2, c2), (3, c3), (4, c4), (10, c10)]);
                    let l1 = histogram_l1(&h, &d.lambda);
                    let slot = var_best.entry(e).or_insert(f64::MAX);
                    *slot = f64::min(*slot, l1);
                }
            }
        }
        let mut best = f64::MAX;
        let m_mid = (n as f64 * (1.0 - d.design_rate())) as i64;
        for m in m_mid - 10..m_mid + 10 {
            for a in 0..=m {
                let (h, e) = hist(&[(35, a), (36, m - a)]);
                if let Some(&lv) = var_best.get(&e) {
                    let lc = histogram_l1(&h, &d.rho);
                    let score = (lv / (8.0 / n as f64)).max(lc / (4.0 / n as f64));
                    best = best.min(score);
                }
            }
        }
        best
    }

    #[test]
    fn quantization_matches_brute_force_at_4311() {
        let d = DegreeDistribution::irregular_093();
        let n = 4311;
        let seq = quantize(n, &d).unwrap();
        let lv = histogram_l1(&edge_histogram(&seq.var_degrees), &d.lambda);
        let lc = histogram_l1(&edge_histogram(&seq.check_degrees), &d.rho);
        let score = (lv / (8.0 / n as f64)).max(lc / (4.0 / n as f64));
        assert!((score - brute_force_score(n, &d)).abs() < 1e-12, "{score}");
        // The best attainable lambda error here sits just above 2/n per degree.
        assert!((lv - 1.8692684e-3).abs() < 1e-9, "{lv}");
    }

    #[test]
    fn full_length_design_rate() {
        // rate of the realized sequence at the long length
        let seq = quantize(68985, &DegreeDistribution::irregular_093()).unwrap();
        let rate = 1.0 - seq.check_degrees.len() as f64 / 68985.0;
        assert!((rate - 0.93).abs() < 5e-4, "{rate}");
    }

    #[test]
    fn fixed_check_count() {
        let d = DegreeDistribution::irregular_093();
        let seq = quantize_with_checks(4311, &d.lambda, 215).unwrap();
        assert_eq!(seq.check_degrees.len(), 215);
        assert_eq!(seq.edges(), seq.check_degrees.iter().sum::<usize>());
        let (lo, hi) = (seq.check_degrees[0], *seq.check_degrees.last().unwrap());
        assert!(hi - lo <= 1);
        assert!(quantize_with_checks(10, &d.lambda, 0).is_err());
    }

    #[test]
    fn text_roundtrip() {
        let d = DegreeDistribution::irregular_093();
        let back = DegreeDistribution::parse(&d.to_text(), Path::new("d")).unwrap();
        assert_eq!(back, d);
        assert!(DegreeDistribution::parse("lambda x 1\n", Path::new("d")).is_err());
    }
}
