//! Group files: a `d <n>` line, then one `perm s1 .. sd trans v1 .. vd` line
//! per generator. `#` starts a comment line.

use std::fmt::Write as _;

use super::{LatticeAut, SignedPerm, SubgroupSpec};
use crate::error::{Error, Result};

pub fn parse_group(text: &str) -> Result<SubgroupSpec> {
    let mut d: Option<usize> = None;
    let mut gens = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let line = raw.trim();
        let lineno = i + 1;
        let err = |msg: String| Error::Parse { line: lineno, msg };
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let words: Vec<&str> = line.split_whitespace().collect();
        match (d, words[0]) {
            (None, "d") => {
                if words.len() != 2 {
                    return Err(err("expected `d <dimension>`".into()));
                }
                let n: usize = words[1].parse().map_err(|e| err(format!("{e}")))?;
                if n == 0 {
                    return Err(err("dimension must be positive".into()));
                }
                d = Some(n);
            }
            (None, _) => return Err(err("first line must be `d <dimension>`".into())),
            (Some(n), "perm") => {
                if words.len() != 2 * n + 2 || words[n + 1] != "trans" {
                    return Err(err(format!("expected `perm` with {n} entries then `trans` with {n}")));
                }
                let images = words[1..=n]
                    .iter()
                    .map(|w| w.parse::<i32>().map_err(|e| err(format!("{e}"))))
                    .collect::<Result<Vec<_>>>()?;
                let trans = words[n + 2..]
                    .iter()
                    .map(|w| w.parse::<i64>().map_err(|e| err(format!("{e}"))))
                    .collect::<Result<Vec<_>>>()?;
                let sigma = SignedPerm::new(images).map_err(|e| err(e.to_string()))?;
                gens.push(LatticeAut::new(sigma, trans)?);
            }
            (Some(_), w) => return Err(err(format!("unexpected token `{w}`"))),
        }
    }
    let d = d.ok_or(Error::Parse {
        line: 0,
        msg: "missing `d <dimension>` line".into(),
    })?;
    SubgroupSpec::new(d, gens)
}

pub fn write_group(spec: &SubgroupSpec) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "d {}", spec.dim());
    for g in spec.generators() {
        let _ = writeln!(out, "{g}");
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_rotation_example() {
        let s = parse_group("d 2\nperm 2 -1 trans 0 3\n").unwrap();
        let g = &s.generators()[0];
        // e1 -> e2, e2 -> -e1, then + (0,3)
        assert_eq!(g.apply(&[1, 0]), vec![0, 4]);
        assert_eq!(g.apply(&[0, 1]), vec![-1, 3]);
        assert_eq!(s.point_group().len(), 4);
    }

    #[test]
    fn round_trip() {
        let text = "d 3\nperm -1 -2 -3 trans 1 1 1\nperm 1 2 3 trans 6 0 0\n";
        let s = parse_group(text).unwrap();
        assert_eq!(write_group(&s), text);
    }

    #[test]
    fn errors() {
        assert!(matches!(parse_group("perm 1 trans 0\n"), Err(Error::Parse { line: 1, .. })));
        assert!(matches!(parse_group("d 2\nperm 1 1 trans 0 0\n"), Err(Error::Parse { line: 2, .. })));
        assert!(matches!(parse_group("d 2\nperm 1 2 trans 0\n"), Err(Error::Parse { line: 2, .. })));
        assert!(parse_group("# nothing\n").is_err());
    }
}
