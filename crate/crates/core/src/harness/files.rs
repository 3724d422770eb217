//! Frame files for `encode` and `decode`: bits as one line of `0`/`1`
//! characters per frame, LLRs as one comma-separated line per frame.

use std::fs;
use std::path::Path;

use crate::error::{Error, Result};

fn read(path: &Path) -> Result<String> {
    fs::read_to_string(path).map_err(|e| Error::Config(format!("{}: {e}", path.display())))
}

fn frames(text: &str) -> impl Iterator<Item = (usize, &str)> {
    text.lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.trim()))
        .filter(|(_, l)| !l.is_empty() && !l.starts_with('#'))
}

pub fn parse_bits(text: &str, path: &Path) -> Result<Vec<Vec<u8>>> {
    frames(text)
        .map(|(ln, line)| {
            line.chars()
                .filter(|c| !c.is_whitespace())
                .map(|c| match c {
                    '0' => Ok(0),
                    '1' => Ok(1),
                    _ => Err(Error::parse(path, ln, format!("`{c}` is not a bit"))),
                })
                .collect()
        })
        .collect()
}

pub fn read_bits(path: impl AsRef<Path>) -> Result<Vec<Vec<u8>>> {
    let path = path.as_ref();
    parse_bits(&read(path)?, path)
}

pub fn bits_to_text(frames: &[Vec<u8>]) -> String {
    let mut s = String::new();
    for f in frames {
        s.extend(f.iter().map(|&b| if b == 0 { '0' } else { '1' }));
        s.push('\n');
    }
    s
}

pub fn write_bits(path: impl AsRef<Path>, frames: &[Vec<u8>]) -> Result<()> {
    fs::write(path, bits_to_text(frames))?;
    Ok(())
}

pub fn parse_llrs(text: &str, path: &Path) -> Result<Vec<Vec<f64>>> {
    frames(text)
        .map(|(ln, line)| {
            line.split(',')
                .map(|t| {
                    t.trim()
                        .parse::<f64>()
                        .ok()
                        .filter(|x| !x.is_nan())
                        .ok_or_else(|| Error::parse(path, ln, format!("bad LLR `{}`", t.trim())))
                })
                .collect()
        })
        .collect()
}

pub fn read_llrs(path: impl AsRef<Path>) -> Result<Vec<Vec<f64>>> {
    let path = path.as_ref();
    parse_llrs(&read(path)?, path)
}

pub fn llrs_to_text(frames: &[Vec<f64>]) -> String {
    let mut s = String::new();
    for f in frames {
        let row: Vec<String> = f.iter().map(|x| x.to_string()).collect();
        s.push_str(&row.join(","));
        s.push('\n');
    }
    s
}

pub fn write_llrs(path: impl AsRef<Path>, frames: &[Vec<f64>]) -> Result<()> {
    fs::write(path, llrs_to_text(frames))?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn formats() {
        let p = Path::new("x");
        assert_eq!(parse_bits("0110\n\n# c\n1 0\n", p).unwrap(), vec![vec![0, 1, 1, 0], vec![1, 0]]);
        assert!(parse_bits("012\n", p).is_err());
        assert_eq!(parse_llrs("1.5, -2\n30,0\n", p).unwrap(), vec![vec![1.5, -2.0], vec![30.0, 0.0]]);
        assert!(parse_llrs("1,,2\n", p).is_err());
        assert!(parse_llrs("nan\n", p).is_err());
    }

    proptest! {
        #[test]
        fn roundtrips(bits in prop::collection::vec(prop::collection::vec(0u8..2, 1..40), 0..5),
                      llrs in prop::collection::vec(prop::collection::vec(-30.0f64..30.0, 1..40), 0..5)) {
            let p = Path::new("x");
            prop_assert_eq!(parse_bits(&bits_to_text(&bits), p).unwrap(), bits);
            prop_assert_eq!(parse_llrs(&llrs_to_text(&llrs), p).unwrap(), llrs);
        }
    }
}
