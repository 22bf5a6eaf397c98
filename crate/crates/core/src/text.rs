//! Line-oriented lattice text format.
//!
//! ```text
//! # comment
//! elements: o al ar i
//! cover: o al
//! cover: o ar
//! cover: al i
//! cover: ar i
//! fork: t=t zl=zl1 zr=zr1
//! ```
//!
//! `cover: x y` means `x ≺ y`. The optional `fork:` line names the elements
//! added by a fork insertion. Serialization sorts labels and covers, so
//! `serialize(parse(serialize(l)))` is byte-identical to `serialize(l)`.

use std::fmt::Write as _;

use thiserror::Error;

use crate::error::LatticeError;
use crate::fork::ForkExtension;
use crate::lattice::{BuildOptions, FiniteLattice};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ParseError {
    #[error("line {line}: {message}")]
    Syntax { line: usize, message: String },
    #[error(transparent)]
    Lattice(#[from] LatticeError),
}

fn syntax(line: usize, message: impl Into<String>) -> ParseError {
    ParseError::Syntax {
        line,
        message: message.into(),
    }
}

/// Labels of the elements added by a fork, as recorded in a `fork:` line.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct ForkAnnotation {
    pub t: String,
    pub zl: Vec<String>,
    pub zr: Vec<String>,
}

impl ForkAnnotation {
    pub fn from_extension(ext: &ForkExtension) -> Self {
        let l = &ext.extended;
        let names =
            |ids: &[crate::ElementId]| ids.iter().map(|&x| l.label(x).to_string()).collect();
        ForkAnnotation {
            t: l.label(ext.labels.t).to_string(),
            zl: names(&ext.labels.z_left),
            zr: names(&ext.labels.z_right),
        }
    }

    pub fn labels(&self) -> impl Iterator<Item = &str> {
        std::iter::once(self.t.as_str())
            .chain(self.zl.iter().map(String::as_str))
            .chain(self.zr.iter().map(String::as_str))
    }

    fn to_line(&self) -> String {
        format!(
            "fork: t={} zl={} zr={}",
            self.t,
            self.zl.join(","),
            self.zr.join(",")
        )
    }
}

/// A parsed lattice file.
#[derive(Debug, Clone)]
pub struct LatticeFile {
    pub lattice: FiniteLattice,
    pub fork: Option<ForkAnnotation>,
}

pub fn parse(input: &str) -> Result<LatticeFile, ParseError> {
    parse_with(input, BuildOptions::default())
}

pub fn parse_with(input: &str, options: BuildOptions) -> Result<LatticeFile, ParseError> {
    let mut labels: Option<Vec<String>> = None;
    let mut covers: Vec<(usize, usize)> = Vec::new();
    let mut fork = None;
    let mut index = std::collections::HashMap::new();

    for (n, raw) in input.lines().enumerate() {
        let line_no = n + 1;
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let (key, rest) = line
            .split_once(':')
            .ok_or_else(|| syntax(line_no, format!("expected `key: ...`, found `{line}`")))?;
        match key.trim() {
            "elements" => {
                if labels.is_some() {
                    return Err(syntax(line_no, "duplicate `elements:` line"));
                }
                let names: Vec<String> = rest.split_whitespace().map(str::to_string).collect();
                for (i, name) in names.iter().enumerate() {
                    if index.insert(name.clone(), i).is_some() {
                        return Err(syntax(line_no, format!("duplicate label `{name}`")));
                    }
                }
                labels = Some(names);
            }
            "cover" => {
                if labels.is_none() {
                    return Err(syntax(line_no, "`cover:` before `elements:`"));
                }
                let parts: Vec<&str> = rest.split_whitespace().collect();
                let [a, b] = parts[..] else {
                    return Err(syntax(line_no, "expected `cover: LOWER UPPER`"));
                };
                let look = |s: &str| {
                    index
                        .get(s)
                        .copied()
                        .ok_or_else(|| syntax(line_no, format!("unknown label `{s}`")))
                };
                covers.push((look(a)?, look(b)?));
            }
            "fork" => {
                if fork.is_some() {
                    return Err(syntax(line_no, "duplicate `fork:` line"));
                }
                fork = Some(parse_fork(rest, line_no)?);
            }
            other => return Err(syntax(line_no, format!("unknown key `{other}`"))),
        }
    }

    let labels =
        labels.ok_or_else(|| syntax(input.lines().count().max(1), "missing `elements:` line"))?;
    let lattice = FiniteLattice::from_cover_indices(labels, &covers, options)?;
    if let Some(f) = &fork {
        for name in f.labels() {
            lattice.require(name)?;
        }
    }
    Ok(LatticeFile { lattice, fork })
}

fn parse_fork(rest: &str, line_no: usize) -> Result<ForkAnnotation, ParseError> {
    let mut out = ForkAnnotation::default();
    let mut have_t = false;
    for field in rest.split_whitespace() {
        let (k, v) = field
            .split_once('=')
            .ok_or_else(|| syntax(line_no, format!("bad fork field `{field}`")))?;
        let list = || -> Vec<String> {
            v.split(',')
                .filter(|s| !s.is_empty())
                .map(str::to_string)
                .collect()
        };
        match k {
            "t" => {
                out.t = v.to_string();
                have_t = true;
            }
            "zl" => out.zl = list(),
            "zr" => out.zr = list(),
            _ => return Err(syntax(line_no, format!("unknown fork field `{k}`"))),
        }
    }
    if !have_t || out.t.is_empty() {
        return Err(syntax(line_no, "fork line needs `t=`"));
    }
    Ok(out)
}

/// Writes labels sorted and covers sorted lexicographically by label.
pub fn serialize(lattice: &FiniteLattice, fork: Option<&ForkAnnotation>) -> String {
    let mut labels: Vec<&str> = lattice.labels().iter().map(String::as_str).collect();
    labels.sort_unstable();
    let mut covers: Vec<(&str, &str)> = lattice
        .cover_pairs()
        .map(|(a, b)| (lattice.label(a), lattice.label(b)))
        .collect();
    covers.sort_unstable();

    let mut out = String::new();
    let _ = writeln!(out, "elements: {}", labels.join(" "));
    for (a, b) in covers {
        let _ = writeln!(out, "cover: {a} {b}");
    }
    if let Some(f) = fork {
        let _ = writeln!(out, "{}", f.to_line());
    }
    out
}
