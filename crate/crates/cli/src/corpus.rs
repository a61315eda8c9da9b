//! Fixture corpus: `*.datum` files plus an `expected.txt` manifest with one
//! line per fixture, `name key=value ...`. Keys are `valid` (yes/no),
//! `pointed` and `nichols` (cy/not-cy) and `class` (a case name, `not-cy` or
//! `above4`). Only the listed keys are compared.

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::fs;
use std::path::Path;

use anyhow::{Context, Result};
use pointed_cy::isomorphism::Classification;
use serde::{Deserialize, Serialize};

use crate::{classification, cy_output, read_raw, to_json, Outcome, UsageError, NEGATIVE, OK};

pub const MANIFEST: &str = "expected.txt";

const KEYS: [&str; 4] = ["valid", "pointed", "nichols", "class"];

#[derive(Serialize, Deserialize, Debug, PartialEq, Eq)]
pub struct FixtureResult {
    pub fixture: String,
    pub matched: bool,
    pub expected: BTreeMap<String, String>,
    pub actual: BTreeMap<String, String>,
}

#[derive(Serialize, Deserialize, Debug, PartialEq, Eq)]
pub struct CorpusReport {
    pub fixtures: Vec<FixtureResult>,
    pub mismatches: usize,
}

fn parse_manifest(text: &str) -> Result<BTreeMap<String, BTreeMap<String, String>>> {
    let mut out = BTreeMap::new();
    for (n, line) in text.lines().enumerate() {
        let line = line.split('#').next().unwrap_or("").trim();
        let mut parts = line.split_whitespace();
        let Some(name) = parts.next() else { continue };
        let mut expected = BTreeMap::new();
        for pair in parts {
            let (k, v) = pair
                .split_once('=')
                .filter(|(k, _)| KEYS.contains(k))
                .ok_or_else(|| UsageError(format!("{MANIFEST} line {}: bad entry `{pair}`", n + 1)))?;
            expected.insert(k.to_string(), v.to_string());
        }
        if out.insert(name.to_string(), expected).is_some() {
            return Err(UsageError(format!("{MANIFEST} line {}: `{name}` listed twice", n + 1)).into());
        }
    }
    Ok(out)
}

fn verdict(b: bool) -> String {
    if b { "cy" } else { "not-cy" }.to_string()
}

fn actual(path: &Path) -> Result<BTreeMap<String, String>> {
    let raw = read_raw(path)?;
    let mut out = BTreeMap::new();
    match cy_output(&raw) {
        Err(_) => {
            out.insert("valid".into(), "no".into());
        }
        Ok(report) => {
            out.insert("valid".into(), "yes".into());
            out.insert("pointed".into(), verdict(report.pointed.report.is_cy));
            let nichols = report.nichols.map_or("none".into(), |n| verdict(n.report.is_cy));
            out.insert("nichols".into(), nichols);
            let class = match classification(&raw)?.expect("validated above") {
                Classification::Label { label } => label.case_name,
                Classification::NotCy => "not-cy".into(),
                Classification::DimensionAbove4 { .. } => "above4".into(),
            };
            out.insert("class".into(), class);
        }
    }
    Ok(out)
}

pub fn run(dir: &Path, json: bool) -> Result<Outcome> {
    let manifest_path = dir.join(MANIFEST);
    if !manifest_path.is_file() {
        return Err(UsageError(format!("no {MANIFEST} in {}", dir.display())).into());
    }
    let manifest = parse_manifest(&fs::read_to_string(&manifest_path)?)?;
    if manifest.is_empty() {
        return Err(UsageError(format!("empty corpus in {}", dir.display())).into());
    }
    for entry in fs::read_dir(dir).with_context(|| format!("cannot list {}", dir.display()))? {
        let name = entry?.file_name().to_string_lossy().into_owned();
        if name.ends_with(".datum") && !manifest.contains_key(&name) {
            return Err(UsageError(format!("fixture {name} has no entry in {MANIFEST}")).into());
        }
    }
    let mut fixtures = Vec::new();
    for (name, expected) in manifest {
        let path = dir.join(&name);
        if !path.is_file() {
            return Err(UsageError(format!("missing fixture {name}")).into());
        }
        let actual = actual(&path)?;
        let matched = expected.iter().all(|(k, v)| actual.get(k) == Some(v));
        fixtures.push(FixtureResult { fixture: name, matched, expected, actual });
    }
    let mismatches = fixtures.iter().filter(|f| !f.matched).count();
    let report = CorpusReport { fixtures, mismatches };
    let code = if mismatches == 0 { OK } else { NEGATIVE };
    if json {
        return Ok(Outcome { code, text: to_json(&report) });
    }
    let width = report.fixtures.iter().map(|f| f.fixture.len()).max().unwrap_or(0);
    let mut text = String::new();
    for f in &report.fixtures {
        let status = if f.matched { "ok" } else { "MISMATCH" };
        let detail: Vec<String> = if f.matched {
            f.expected.iter().map(|(k, v)| format!("{k}={v}")).collect()
        } else {
            f.expected
                .iter()
                .filter(|(k, v)| f.actual.get(*k) != Some(v))
                .map(|(k, v)| format!("{k}: expected {v}, got {}", f.actual.get(k).map_or("-", String::as_str)))
                .collect()
        };
        writeln!(text, "{:<width$}  {status:<8}  {}", f.fixture, detail.join(" ")).unwrap();
    }
    writeln!(text, "{} fixtures, {} mismatches", report.fixtures.len(), report.mismatches).unwrap();
    Ok(Outcome { code, text })
}
