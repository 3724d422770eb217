use std::fmt;
use std::fs;
use std::path::Path;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::polar::{build_factor_graph, code_bit_tree_counts, parse_usizes, PolarCode};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PunctureMethod {
    Random,
    StoppingTree,
}

impl fmt::Display for PunctureMethod {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            PunctureMethod::Random => "random",
            PunctureMethod::StoppingTree => "stopping-tree",
        })
    }
}

impl std::str::FromStr for PunctureMethod {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "random" => Ok(PunctureMethod::Random),
            "stopping-tree" | "stopping_tree" | "stoptree" => Ok(PunctureMethod::StoppingTree),
            _ => Err(Error::Config(format!("unknown puncturing method `{s}`"))),
        }
    }
}

/// Code bits withheld from transmission. Both ends know the pattern.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PuncturingPattern {
    len: usize,
    positions: Vec<usize>,
    /// `None` for patterns read back from a file.
    method: Option<PunctureMethod>,
}

impl PuncturingPattern {
    pub fn new(len: usize, positions: impl IntoIterator<Item = usize>) -> Result<Self> {
        let mut positions: Vec<usize> = positions.into_iter().collect();
        positions.sort_unstable();
        if positions.windows(2).any(|w| w[0] == w[1]) {
            return Err(Error::Parameter("repeated punctured position".into()));
        }
        if let Some(&p) = positions.last().filter(|&&p| p >= len) {
            return Err(Error::Parameter(format!("punctured position {p} >= length {len}")));
        }
        if positions.len() >= len {
            return Err(Error::Parameter("cannot puncture every bit".into()));
        }
        Ok(PuncturingPattern {
            len,
            positions,
            method: None,
        })
    }

    pub fn empty(len: usize) -> Self {
        PuncturingPattern {
            len,
            positions: Vec::new(),
            method: None,
        }
    }

    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.positions.is_empty()
    }

    /// Sorted punctured indices.
    pub fn positions(&self) -> &[usize] {
        &self.positions
    }

    pub fn count(&self) -> usize {
        self.positions.len()
    }

    pub fn method(&self) -> Option<PunctureMethod> {
        self.method
    }

    pub fn transmitted_len(&self) -> usize {
        self.len - self.positions.len()
    }

    /// `k / (N - |P|)`.
    pub fn rate(&self, k: usize) -> f64 {
        k as f64 / self.transmitted_len() as f64
    }

    fn mask(&self) -> Vec<bool> {
        let mut m = vec![false; self.len];
        self.positions.iter().for_each(|&p| m[p] = true);
        m
    }

    /// Drops the punctured bits of a full codeword.
    pub fn puncture<T: Copy>(&self, codeword: &[T]) -> Result<Vec<T>> {
        if codeword.len() != self.len {
            return Err(Error::shape("codeword to puncture", self.len, codeword.len()));
        }
        let mask = self.mask();
        Ok(codeword
            .iter()
            .zip(mask)
            .filter(|(_, p)| !p)
            .map(|(&x, _)| x)
            .collect())
    }

    pub fn to_text(&self) -> String {
        let idx: Vec<String> = self.positions.iter().map(|p| p.to_string()).collect();
        format!("{} {}\n{}\n", self.len, self.positions.len(), idx.join(" "))
    }

    pub fn write(&self, path: impl AsRef<Path>) -> Result<()> {
        fs::write(path, self.to_text())?;
        Ok(())
    }

    pub fn parse(text: &str, path: &Path) -> Result<Self> {
        let mut lines = text.lines().enumerate().filter(|(_, l)| !l.trim().is_empty());
        let (ln, head) = lines
            .next()
            .ok_or_else(|| Error::parse(path, 1, "empty pattern file"))?;
        let head = parse_usizes(head, path, ln + 1)?;
        let [len, count] = head[..] else {
            return Err(Error::parse(path, ln + 1, "expected `N count`"));
        };
        let positions = match lines.next() {
            Some((ln, line)) => parse_usizes(line, path, ln + 1)?,
            None => Vec::new(),
        };
        if positions.len() != count {
            return Err(Error::parse(path, 2, format!("{} indices for count {count}", positions.len())));
        }
        Self::new(len, positions).map_err(|e| Error::parse(path, 2, e.to_string()))
    }

    pub fn read(path: impl AsRef<Path>) -> Result<Self> {
        let path = path.as_ref();
        let text = fs::read_to_string(path)
            .map_err(|e| Error::Config(format!("{}: {e}", path.display())))?;
        Self::parse(&text, path)
    }
}

fn check_count(code: &PolarCode, count: usize) -> Result<()> {
    if count >= code.len() - code.k() {
        return Err(Error::Parameter(format!(
            "puncturing {count} bits of a ({}, {}) code leaves no redundancy",
            code.len(),
            code.k()
        )));
    }
    Ok(())
}

/// `count` code bits drawn uniformly without replacement.
pub fn random_pattern(code: &PolarCode, count: usize, seed: u64) -> Result<PuncturingPattern> {
    check_count(code, count)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let picked = rand::seq::index::sample(&mut rng, code.len(), count);
    let mut p = PuncturingPattern::new(code.len(), picked.into_iter())?;
    p.method = Some(PunctureMethod::Random);
    Ok(p)
}

/// The `count` code bits lying in the fewest information-rooted stopping
/// trees; ties go to the higher index.
pub fn stopping_tree_pattern(code: &PolarCode, count: usize) -> Result<PuncturingPattern> {
    check_count(code, count)?;
    let graph = build_factor_graph(code.n())?;
    let counts = code_bit_tree_counts(&graph, code)?;
    let mut order: Vec<usize> = (0..code.len()).collect();
    order.sort_by(|&a, &b| counts[a].cmp(&counts[b]).then(b.cmp(&a)));
    let mut p = PuncturingPattern::new(code.len(), order.into_iter().take(count))?;
    p.method = Some(PunctureMethod::StoppingTree);
    Ok(p)
}

/// Full-length decoder input: zeros at punctured positions, the received
/// LLRs elsewhere in order.
pub fn puncture_llrs(pattern: &PuncturingPattern, received: &[f64]) -> Result<Vec<f64>> {
    if received.len() != pattern.transmitted_len() {
        return Err(Error::shape("received LLRs", pattern.transmitted_len(), received.len()));
    }
    let mut rx = received.iter();
    Ok(pattern
        .mask()
        .into_iter()
        .map(|p| if p { 0.0 } else { *rx.next().unwrap() })
        .collect())
}
