//! alist serialization: `n m`, max column/row degree, column degrees, row
//! degrees, then each column's and each row's 1-based neighbours, zero-padded
//! to the maximum degree.

use std::fmt::Write as _;
use std::fs;
use std::path::Path;

use super::LdpcCode;
use crate::error::{Error, Result};

fn join(values: impl IntoIterator<Item = usize>) -> String {
    values
        .into_iter()
        .map(|v| v.to_string())
        .collect::<Vec<_>>()
        .join(" ")
}

fn padded(list: &[u32], width: usize) -> String {
    join(
        list.iter()
            .map(|&x| x as usize + 1)
            .chain(std::iter::repeat(0))
            .take(width),
    )
}

impl LdpcCode {
    pub fn to_alist(&self) -> String {
        let cd = self.var_degrees();
        let rd = self.check_degrees();
        let max_c = cd.iter().copied().max().unwrap_or(0);
        let max_r = rd.iter().copied().max().unwrap_or(0);
        let mut s = format!("{} {}\n{} {}\n{}\n{}\n", self.n, self.m, max_c, max_r, join(cd), join(rd));
        for checks in &self.var_adj {
            let _ = writeln!(s, "{}", padded(checks, max_c));
        }
        for vars in &self.chk_adj {
            let _ = writeln!(s, "{}", padded(vars, max_r));
        }
        s
    }

    pub fn write_alist(&self, path: impl AsRef<Path>) -> Result<()> {
        fs::write(path, self.to_alist())?;
        Ok(())
    }

    /// Parses an alist, with or without zero padding. The row lists must
    /// describe the same graph as the column lists.
    pub fn parse_alist(text: &str, path: &Path) -> Result<Self> {
        let mut lines = text
            .lines()
            .enumerate()
            .filter(|(_, l)| !l.trim().is_empty());
        let mut next = |what: &str| -> Result<(usize, Vec<usize>)> {
            let (i, line) = lines
                .next()
                .ok_or_else(|| Error::parse(path, 0, format!("missing {what}")))?;
            let nums = crate::polar::parse_usizes(line, path, i + 1)?;
            Ok((i + 1, nums))
        };
        let (ln, head) = next("header")?;
        let [n, m] = head[..] else {
            return Err(Error::parse(path, ln, "expected `n m`"));
        };
        next("maximum degrees")?;
        let (ln_c, col_deg) = next("column degrees")?;
        let (ln_r, row_deg) = next("row degrees")?;
        if col_deg.len() != n {
            return Err(Error::parse(path, ln_c, format!("{} column degrees for n = {n}", col_deg.len())));
        }
        if row_deg.len() != m {
            return Err(Error::parse(path, ln_r, format!("{} row degrees for m = {m}", row_deg.len())));
        }
        let mut neighbours = |count: usize, bound: usize, degs: &[usize]| -> Result<Vec<Vec<u32>>> {
            (0..count)
                .map(|i| {
                    let (ln, list) = next("neighbour list")?;
                    let list: Vec<u32> = list.into_iter().filter(|&x| x != 0).map(|x| x as u32 - 1).collect();
                    if list.len() != degs[i] || list.iter().any(|&x| x as usize >= bound) {
                        return Err(Error::parse(path, ln, "neighbour list disagrees with degree or size"));
                    }
                    Ok(list)
                })
                .collect()
        };
        let var_adj = neighbours(n, m, &col_deg)?;
        let chk_adj = neighbours(m, n, &row_deg)?;
        let code = LdpcCode::from_var_adjacency(n, m, var_adj)
            .map_err(|e| Error::parse(path, 0, e.to_string()))?;
        for (c, vars) in chk_adj.iter().enumerate() {
            let mut a = vars.clone();
            let mut b = code.chk_adj[c].clone();
            a.sort_unstable();
            b.sort_unstable();
            if a != b {
                return Err(Error::parse(path, 0, format!("row {} disagrees with the column lists", c + 1)));
            }
        }
        Ok(code)
    }

    pub fn read_alist(path: impl AsRef<Path>) -> Result<Self> {
        let path = path.as_ref();
        let text = fs::read_to_string(path)
            .map_err(|e| Error::Config(format!("{}: {e}", path.display())))?;
        Self::parse_alist(&text, path)
    }
}

#[cfg(test)]
mod tests {
    use crate::ldpc::{build_ldpc, DegreeDistribution, LdpcCode};
    use std::path::Path;

    #[test]
    fn tiny_code_exact_text() {
        let code = LdpcCode::from_var_adjacency(4, 2, vec![vec![0], vec![0, 1], vec![1], vec![0, 1]]).unwrap();
        let text = code.to_alist();
        assert_eq!(text, "4 2\n2 3\n1 2 1 2\n3 3\n1 0\n1 2\n2 0\n1 2\n1 2 4\n2 3 4\n");
    }

    #[test]
    fn roundtrip() {
        let code = build_ldpc(500, &DegreeDistribution::irregular_093(), 1).unwrap();
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("c.alist");
        code.write_alist(&path).unwrap();
        let back = LdpcCode::read_alist(&path).unwrap();
        assert_eq!(back.to_alist(), code.to_alist());
        assert_eq!(back.info_positions(), code.info_positions());
    }

    #[test]
    fn malformed_inputs() {
        let p = Path::new("x.alist");
        assert!(LdpcCode::parse_alist("2\n", p).is_err());
        assert!(LdpcCode::parse_alist("2 1\n1 2\n1 1\n2\n1\n1\n1 2\n", p).is_ok());
        // row list disagrees with columns
        assert!(LdpcCode::parse_alist("2 1\n1 2\n1 1\n2\n1\n1\n1 1\n", p).is_err());
        assert!(LdpcCode::parse_alist("2 1\n1 2\n1 1\n2\n1\n3\n1 2\n", p).is_err());
    }
}
