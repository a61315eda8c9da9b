//! The plain-text datum file format.
//!
//! ```text
//! # U_q(sl2)
//! group_rank: 1
//! cartan: 2 0; 0 2
//! parameters: q
//! g: 1; 1
//! chi: q^-2; q^2
//! linking: 1 2 1
//! ```
//!
//! Rows are separated by `;`, entries by whitespace or `,`. Linking entries are
//! 1-based `i j value` triples; absent pairs are 0. `cartan` may also name a
//! type such as `A2xA1`. An empty `cartan` describes a bare group algebra.

use std::collections::BTreeSet;
use std::fmt::Write as _;

use thiserror::Error;

use crate::cartan::CartanMatrix;
use crate::datum::RawDatum;
use crate::scalars::{Monomial, Param};

#[derive(Clone, Debug, PartialEq, Eq, Error)]
pub enum FormatError {
    #[error("line {line}, key `{key}`: {message}")]
    Line { line: usize, key: String, message: String },
    #[error("line {line}: {message}")]
    Syntax { line: usize, message: String },
    #[error("missing key `{0}`")]
    Missing(&'static str),
}

const KEYS: [&str; 6] = ["group_rank", "cartan", "parameters", "g", "chi", "linking"];

fn rows(value: &str) -> Vec<Vec<&str>> {
    if value.trim().is_empty() {
        return Vec::new();
    }
    value
        .split(';')
        .map(|r| r.split(|c: char| c == ',' || c.is_whitespace()).filter(|t| !t.is_empty()).collect())
        .collect()
}

/// Parses a datum file. Does not validate the algebraic conditions.
pub fn parse_datum(text: &str) -> Result<RawDatum, FormatError> {
    let mut seen: [Option<(usize, &str)>; 6] = Default::default();
    for (n, raw_line) in text.lines().enumerate() {
        let line = n + 1;
        let content = raw_line.split('#').next().unwrap_or("").trim();
        if content.is_empty() {
            continue;
        }
        let Some((key, value)) = content.split_once(':') else {
            return Err(FormatError::Syntax { line, message: "expected `key: value`".into() });
        };
        let key = key.trim();
        let Some(slot) = KEYS.iter().position(|k| *k == key) else {
            return Err(FormatError::Line { line, key: key.into(), message: "unknown key".into() });
        };
        if seen[slot].is_some() {
            return Err(FormatError::Line { line, key: key.into(), message: "duplicate key".into() });
        }
        seen[slot] = Some((line, value.trim()));
    }
    let err = |slot: usize, message: String| {
        let (line, _) = seen[slot].expect("present");
        FormatError::Line { line, key: KEYS[slot].into(), message }
    };
    let int = |slot: usize, t: &str| t.parse::<i64>().map_err(|_| err(slot, format!("`{t}` is not an integer")));

    let (_, rank_text) = seen[0].ok_or(FormatError::Missing("group_rank"))?;
    let group_rank: usize = rank_text
        .parse()
        .ok()
        .filter(|&s: &usize| s > 0)
        .ok_or_else(|| err(0, format!("`{rank_text}` is not a positive integer")))?;

    let (_, cartan_text) = seen[1].ok_or(FormatError::Missing("cartan"))?;
    let cartan = if cartan_text.starts_with(|c: char| c.is_ascii_alphabetic()) {
        CartanMatrix::named(cartan_text).map_err(|e| err(1, e.to_string()))?.entries().to_vec()
    } else {
        rows(cartan_text)
            .into_iter()
            .map(|r| r.into_iter().map(|t| int(1, t)).collect::<Result<Vec<_>, _>>())
            .collect::<Result<Vec<_>, _>>()?
    };
    let theta = cartan.len();

    let mut declared = BTreeSet::new();
    if let Some((_, text)) = seen[2] {
        for name in text.split(|c: char| c == ',' || c.is_whitespace()).filter(|t| !t.is_empty()) {
            let p = Param::new(name).map_err(|e| err(2, e.to_string()))?;
            if !declared.insert(p) {
                return Err(err(2, format!("parameter `{name}` declared twice")));
            }
        }
    }

    let required = |slot: usize, key: &'static str| -> Result<&str, FormatError> {
        match seen[slot] {
            Some((_, text)) => Ok(text),
            None if theta == 0 => Ok(""),
            None => Err(FormatError::Missing(key)),
        }
    };
    let g = rows(required(3, "g")?)
        .into_iter()
        .map(|r| r.into_iter().map(|t| int(3, t)).collect::<Result<Vec<_>, _>>())
        .collect::<Result<Vec<_>, _>>()?;
    let chi = rows(required(4, "chi")?)
        .into_iter()
        .map(|r| {
            r.into_iter()
                .map(|t| {
                    let m: Monomial = t.parse().map_err(|e: crate::scalars::ScalarError| err(4, e.to_string()))?;
                    if let Some(p) = m.params().find(|p| !declared.contains(p)) {
                        return Err(err(4, format!("undeclared parameter `{p}`")));
                    }
                    Ok(m)
                })
                .collect::<Result<Vec<_>, _>>()
        })
        .collect::<Result<Vec<_>, _>>()?;

    let mut linking = Vec::new();
    if let Some((_, text)) = seen[5] {
        for triple in rows(text) {
            let [i, j, v] = triple.as_slice() else {
                return Err(err(5, "expected `i j value` triples".into()));
            };
            let (i, j, v) = (int(5, i)?, int(5, j)?, int(5, v)?);
            if i < 1 || j < 1 || i as usize > theta || j as usize > theta {
                return Err(err(5, format!("pair ({i},{j}) out of range")));
            }
            match v {
                0 => {}
                1 => {
                    let pair = ((i - 1) as usize, (j - 1) as usize);
                    if linking.iter().any(|&(a, b)| (a, b) == pair || (b, a) == pair) {
                        return Err(err(5, format!("pair ({i},{j}) listed twice")));
                    }
                    linking.push(pair);
                }
                _ => return Err(err(5, format!("linking value {v} is not 0 or 1"))),
            }
        }
    }

    Ok(RawDatum { group_rank, cartan, g, chi, linking })
}

/// Writes a datum in the file format; `parse_datum` reads it back unchanged.
pub fn write_datum(raw: &RawDatum) -> String {
    let join_rows = |rows: Vec<String>| rows.join("; ");
    let mut out = String::new();
    writeln!(out, "group_rank: {}", raw.group_rank).unwrap();
    let cartan = raw.cartan.iter().map(|r| r.iter().map(i64::to_string).collect::<Vec<_>>().join(" ")).collect();
    writeln!(out, "cartan: {}", join_rows(cartan)).unwrap();
    let params: Vec<&str> = raw.parameters().into_iter().map(Param::name).collect();
    writeln!(out, "parameters: {}", params.join(", ")).unwrap();
    let g = raw.g.iter().map(|r| r.iter().map(i64::to_string).collect::<Vec<_>>().join(" ")).collect();
    writeln!(out, "g: {}", join_rows(g)).unwrap();
    let chi = raw.chi.iter().map(|r| r.iter().map(Monomial::to_string).collect::<Vec<_>>().join(" ")).collect();
    writeln!(out, "chi: {}", join_rows(chi)).unwrap();
    if !raw.linking.is_empty() {
        let mut pairs: Vec<(usize, usize)> = raw.linking.iter().map(|&(i, j)| (i.min(j), i.max(j))).collect();
        pairs.sort_unstable();
        let l = pairs.iter().map(|(i, j)| format!("{} {} 1", i + 1, j + 1)).collect();
        writeln!(out, "linking: {}", join_rows(l)).unwrap();
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    const UQSL2: &str = "# quantum sl2\ngroup_rank: 1\ncartan: 2 0; 0 2\nparameters: q\ng: 1; 1\nchi: q^-2; q^2\nlinking: 1 2 1\n";

    #[test]
    fn reads_uqsl2() {
        let raw = parse_datum(UQSL2).unwrap();
        assert_eq!(raw.group_rank, 1);
        assert_eq!(raw.cartan, vec![vec![2, 0], vec![0, 2]]);
        assert_eq!(raw.linking, vec![(0, 1)]);
        assert_eq!(raw.chi[0][0], "q^-2".parse().unwrap());
    }

    #[test]
    fn round_trip() {
        let raw = parse_datum(UQSL2).unwrap();
        let text = write_datum(&raw);
        assert_eq!(parse_datum(&text).unwrap(), raw);
        assert_eq!(write_datum(&parse_datum(&text).unwrap()), text);
    }

    #[test]
    fn strictness() {
        let unknown = UQSL2.replace("linking", "links");
        assert_eq!(
            parse_datum(&unknown).unwrap_err().to_string(),
            "line 7, key `links`: unknown key"
        );
        let dup = format!("{UQSL2}g: 1; 1\n");
        assert!(parse_datum(&dup).unwrap_err().to_string().contains("duplicate key"));
        let undeclared = UQSL2.replace("parameters: q", "parameters: t");
        let e = parse_datum(&undeclared).unwrap_err().to_string();
        assert!(e.contains("line 6, key `chi`") && e.contains("undeclared parameter `q`"), "{e}");
        let missing = UQSL2.replace("g: 1; 1\n", "");
        assert_eq!(parse_datum(&missing), Err(FormatError::Missing("g")));
        let bad_value = UQSL2.replace("1 2 1", "1 2 5");
        assert!(parse_datum(&bad_value).is_err());
        assert!(parse_datum("group_rank 1").is_err());
    }

    #[test]
    fn named_cartan_type() {
        let raw = parse_datum(&UQSL2.replace("2 0; 0 2", "A1xA1")).unwrap();
        assert_eq!(raw.cartan, vec![vec![2, 0], vec![0, 2]]);
        let e = parse_datum(&UQSL2.replace("2 0; 0 2", "E9")).unwrap_err().to_string();
        assert!(e.starts_with("line 3, key `cartan`"), "{e}");
    }

    #[test]
    fn group_algebra_descriptor() {
        let raw = parse_datum("group_rank: 3\ncartan:\n").unwrap();
        assert!(raw.cartan.is_empty() && raw.g.is_empty());
    }
}
