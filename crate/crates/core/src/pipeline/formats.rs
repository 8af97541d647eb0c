//! Plain-text formats for complexes, fields and simplex sets, and JSON envelopes for pairs and
//! diagrams.
//!
//! All text formats are line based. `#` starts a comment and blank lines are ignored.
//!
//! * complex: one generator simplex per line, vertex labels separated by whitespace;
//! * set: one simplex per line, same syntax, taken literally (no closure);
//! * field: `id: a b | a b c | ...`, one multivector per line, simplices separated by `|`.
//!   Simplices not listed are singletons.

use std::fs;
use std::path::{Path, PathBuf};
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::complex::{build_complex, Simplex, SimplicialComplex};
use crate::error::{Error, Result};
use crate::indexpair::{IndexPair, Mode};
use crate::mvf::{build_mvf, MultivectorField};
use crate::set::SimplexSet;
use crate::zigzag::PairDiagram;

fn content_lines(text: &str) -> impl Iterator<Item = (usize, &str)> {
    text.lines().enumerate().filter_map(|(i, l)| {
        let l = l.split('#').next().unwrap_or("").trim();
        (!l.is_empty()).then_some((i + 1, l))
    })
}

fn parse_err(path: &str, line: usize, msg: impl ToString) -> Error {
    Error::Parse {
        path: path.to_string(),
        line,
        msg: msg.to_string(),
    }
}

fn read(path: &Path) -> Result<String> {
    fs::read_to_string(path).map_err(|e| parse_err(&path.display().to_string(), 0, e))
}

pub fn parse_complex(text: &str, source: &str) -> Result<SimplicialComplex> {
    let mut gens = Vec::new();
    for (line, l) in content_lines(text) {
        gens.push(Simplex::parse(l).map_err(|e| parse_err(source, line, e))?);
    }
    Ok(build_complex(&gens))
}

pub fn read_complex(path: &Path) -> Result<SimplicialComplex> {
    parse_complex(&read(path)?, &path.display().to_string())
}

/// Lists the maximal simplices, which regenerate the complex.
pub fn write_complex(k: &SimplicialComplex) -> String {
    let mut out = String::new();
    for i in 0..k.len() {
        if k.cofaces(i).is_empty() {
            out.push_str(&k.simplex(i).to_string());
            out.push('\n');
        }
    }
    out
}

fn lookup(k: &SimplicialComplex, text: &str, source: &str, line: usize) -> Result<usize> {
    let s = Simplex::parse(text).map_err(|e| parse_err(source, line, e))?;
    k.index_of(&s)
        .ok_or_else(|| parse_err(source, line, Error::UnknownSimplex(s.to_string())))
}

pub fn parse_set(k: &SimplicialComplex, text: &str, source: &str) -> Result<SimplexSet> {
    let mut set = k.empty_set();
    for (line, l) in content_lines(text) {
        set.insert(lookup(k, l, source, line)?);
    }
    Ok(set)
}

pub fn read_set(k: &SimplicialComplex, path: &Path) -> Result<SimplexSet> {
    parse_set(k, &read(path)?, &path.display().to_string())
}

pub fn write_set(k: &SimplicialComplex, set: &SimplexSet) -> String {
    set.iter().map(|s| format!("{}\n", k.simplex(s))).collect()
}

/// Parses a field; `name` becomes the field's name.
pub fn parse_field(
    k: Arc<SimplicialComplex>,
    text: &str,
    source: &str,
    name: &str,
) -> Result<MultivectorField> {
    let mut vectors = Vec::new();
    for (line, l) in content_lines(text) {
        let (_, body) = l
            .split_once(':')
            .ok_or_else(|| parse_err(source, line, "expected `id: simplex | ...`"))?;
        let mut v = k.empty_set();
        for part in body.split('|').map(str::trim).filter(|p| !p.is_empty()) {
            v.insert(lookup(&k, part, source, line)?);
        }
        if v.is_empty() {
            return Err(parse_err(source, line, "multivector lists no simplices"));
        }
        vectors.push(v);
    }
    Ok(build_mvf(k, &vectors)?.with_name(name))
}

/// Reads a field named after the file stem.
pub fn read_field(k: Arc<SimplicialComplex>, path: &Path) -> Result<MultivectorField> {
    let name = path
        .file_stem()
        .map(|s| s.to_string_lossy().into_owned())
        .unwrap_or_default();
    parse_field(k, &read(path)?, &path.display().to_string(), &name)
}

/// Writes the non-singleton multivectors, numbered from 1.
pub fn write_field(f: &MultivectorField) -> String {
    let k = f.complex();
    let mut out = String::new();
    let mut id = 0;
    for members in f.vectors().filter(|m| m.len() > 1) {
        id += 1;
        let parts: Vec<String> = members.iter().map(|&s| k.simplex(s).to_string()).collect();
        out.push_str(&format!("v{id}: {}\n", parts.join(" | ")));
    }
    out
}

/// Metadata stored next to the two set files of a pair.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PairEnvelope {
    pub field: String,
    pub p: PathBuf,
    pub e: PathBuf,
    pub n: Option<Vec<String>>,
    pub mode: Mode,
}

/// Writes `{stem}.p.txt`, `{stem}.e.txt` and `{stem}.json` into `dir`.
pub fn write_pair(
    k: &SimplicialComplex,
    dir: &Path,
    stem: &str,
    pair: &IndexPair,
    mode: Mode,
) -> Result<PathBuf> {
    let p = PathBuf::from(format!("{stem}.p.txt"));
    let e = PathBuf::from(format!("{stem}.e.txt"));
    fs::write(dir.join(&p), write_set(k, &pair.p))?;
    fs::write(dir.join(&e), write_set(k, &pair.e))?;
    let n = pair
        .n
        .as_ref()
        .map(|n| n.iter().map(|s| k.simplex(s).to_string()).collect());
    let env = PairEnvelope {
        field: pair.field.clone(),
        p,
        e,
        n,
        mode,
    };
    let json = dir.join(format!("{stem}.json"));
    fs::write(&json, serde_json::to_string_pretty(&env)? + "\n")?;
    Ok(json)
}

/// Reads a pair from its envelope; set paths are relative to the envelope.
pub fn read_pair(k: &SimplicialComplex, envelope: &Path) -> Result<(IndexPair, Mode)> {
    let text = read(envelope)?;
    let env: PairEnvelope = serde_json::from_str(&text)
        .map_err(|e| parse_err(&envelope.display().to_string(), e.line(), e))?;
    let dir = envelope.parent().unwrap_or(Path::new("."));
    let p = read_set(k, &dir.join(&env.p))?;
    let e = read_set(k, &dir.join(&env.e))?;
    let n = match env.n {
        Some(list) => {
            let src = envelope.display().to_string();
            let mut n = k.empty_set();
            for s in &list {
                n.insert(lookup(k, s, &src, 0)?);
            }
            Some(n)
        }
        None => None,
    };
    Ok((IndexPair::new(p, e, env.field, n), env.mode))
}

/// One entry of a serialized diagram. `into` says which neighbors an intersection maps into.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DiagramEntry {
    pub position: usize,
    pub pair: PathBuf,
    pub into: Vec<usize>,
}

/// Writes every pair of the diagram and `diagram.json` listing them in order.
pub fn write_diagram(diagram: &PairDiagram, dir: &Path, mode: Mode) -> Result<PathBuf> {
    fs::create_dir_all(dir)?;
    let k = diagram.complex();
    let mut entries = Vec::with_capacity(diagram.len());
    for (i, pair) in diagram.positions().iter().enumerate() {
        let position = i + 1;
        let env = write_pair(k, dir, &format!("pair_{position}"), pair, mode)?;
        let into = if position % 2 == 0 {
            vec![position - 1, position + 1]
        } else {
            Vec::new()
        };
        entries.push(DiagramEntry {
            position,
            pair: PathBuf::from(env.file_name().expect("file name")),
            into,
        });
    }
    let path = dir.join("diagram.json");
    fs::write(&path, serde_json::to_string_pretty(&entries)? + "\n")?;
    Ok(path)
}

pub fn read_diagram(k: Arc<SimplicialComplex>, path: &Path) -> Result<PairDiagram> {
    let text = read(path)?;
    let entries: Vec<DiagramEntry> = serde_json::from_str(&text)
        .map_err(|e| parse_err(&path.display().to_string(), e.line(), e))?;
    let dir = path.parent().unwrap_or(Path::new("."));
    let mut positions = Vec::with_capacity(entries.len());
    for entry in &entries {
        positions.push(read_pair(&k, &dir.join(&entry.pair))?.0);
    }
    PairDiagram::new(k, positions)
}
