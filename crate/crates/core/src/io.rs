//! Tab-separated text formats.
//!
//! All readers accept `#` comment lines and blank lines, and report
//! failures as `path:line: message`.

use std::fmt::Write;

use crate::cograph::OrthologyEstimate;
use crate::error::{Error, Result};
use crate::model::{Label, SpeciesMap, Triple, TripleSet};

fn records(text: &str) -> impl Iterator<Item = (usize, Vec<&str>)> {
    text.lines().enumerate().filter_map(|(i, line)| {
        let line = line.trim_end_matches('\r');
        if line.trim().is_empty() || line.trim_start().starts_with('#') {
            None
        } else {
            Some((i + 1, line.split('\t').map(str::trim).collect()))
        }
    })
}

fn parse_err(path: &str, line: usize, message: impl Into<String>) -> Error {
    Error::Parse { path: path.to_string(), line, message: message.into() }
}

fn field_label(path: &str, line: usize, s: &str) -> Result<Label> {
    Label::new(s).map_err(|e| parse_err(path, line, e.to_string()))
}

/// `gene<TAB>species` per line.
pub fn read_species_map(path: &str, text: &str) -> Result<SpeciesMap> {
    let mut map = SpeciesMap::new();
    for (line, f) in records(text) {
        if f.len() != 2 {
            return Err(parse_err(path, line, format!("expected 2 columns, found {}", f.len())));
        }
        let gene = field_label(path, line, f[0])?;
        let species = field_label(path, line, f[1])?;
        if let Some(prev) = map.insert(gene.clone(), species.clone()) {
            if prev != species {
                return Err(parse_err(path, line, format!("gene {gene} assigned to both {prev} and {species}")));
            }
        }
    }
    Ok(map)
}

pub fn write_species_map(map: &SpeciesMap) -> String {
    let mut out = String::new();
    for (g, s) in map.iter() {
        let _ = writeln!(out, "{g}\t{s}");
    }
    out
}

/// Raw orthology pairs `geneA<TAB>geneB[<TAB>weight]`. Self-pairs and
/// weights outside [0,1] are rejected.
pub fn read_orthology_pairs(path: &str, text: &str) -> Result<Vec<(Label, Label, f64)>> {
    Ok(numbered_pairs(path, text)?.into_iter().map(|(_, a, b, w)| (a, b, w)).collect())
}

fn numbered_pairs(path: &str, text: &str) -> Result<Vec<(usize, Label, Label, f64)>> {
    let mut out = Vec::new();
    for (line, f) in records(text) {
        if f.len() != 2 && f.len() != 3 {
            return Err(parse_err(path, line, format!("expected 2 or 3 columns, found {}", f.len())));
        }
        let a = field_label(path, line, f[0])?;
        let b = field_label(path, line, f[1])?;
        if a == b {
            return Err(parse_err(path, line, format!("self-pair {a}-{a}")));
        }
        let w = match f.get(2) {
            Some(s) => s.parse::<f64>().map_err(|_| parse_err(path, line, format!("invalid weight {s:?}")))?,
            None => 1.0,
        };
        if !(0.0..=1.0).contains(&w) {
            return Err(parse_err(path, line, format!("weight {w} outside [0,1]")));
        }
        out.push((line, a, b, w));
    }
    Ok(out)
}

/// Read an orthology relation together with its species map. Every gene in
/// the map becomes a vertex, even when it has no pairs. Duplicate pairs keep
/// the larger weight. Genes missing from the map are all listed, with the
/// line of the first one.
pub fn read_orthology(path: &str, text: &str, species: SpeciesMap) -> Result<OrthologyEstimate> {
    let pairs = numbered_pairs(path, text)?;
    let mut first = None;
    let mut missing: Vec<Label> = Vec::new();
    for (line, a, b, _) in &pairs {
        for g in [a, b] {
            if !species.contains(g) {
                first.get_or_insert(*line);
                missing.push(g.clone());
            }
        }
    }
    missing.sort();
    missing.dedup();
    if let Some(line) = first {
        let names: Vec<&str> = missing.iter().map(|l| l.as_str()).collect();
        return Err(parse_err(path, line, format!("genes missing from species map: {}", names.join(", "))));
    }
    let mut g = OrthologyEstimate::new(species);
    for (_, a, b, w) in pairs {
        g.set_max(&a, &b, w)?;
    }
    Ok(g)
}

/// Edge list `geneA<TAB>geneB<TAB>weight`, pairs sorted, one line per nonzero pair.
pub fn write_orthology(g: &OrthologyEstimate) -> String {
    let mut out = String::new();
    for (a, b, w) in g.pairs() {
        let _ = writeln!(out, "{a}\t{b}\t{}", fmt_weight(w));
    }
    out
}

const SPECIES_DIRECTIVE: &str = "#species";

/// `alpha<TAB>beta<TAB>gamma<TAB>weight` meaning (αβ|γ). An optional
/// `#species<TAB>A<TAB>B...` line lists species that carry no triple.
pub fn read_triples(path: &str, text: &str) -> Result<TripleSet> {
    let mut set = TripleSet::new();
    for (i, line) in text.lines().enumerate() {
        let mut f = line.trim_end_matches('\r').split('\t');
        if f.next() == Some(SPECIES_DIRECTIVE) {
            let species = f.map(|s| field_label(path, i + 1, s.trim())).collect::<Result<Vec<_>>>()?;
            set.extend_universe(species);
        }
    }
    for (line, f) in records(text) {
        if f.len() != 3 && f.len() != 4 {
            return Err(parse_err(path, line, format!("expected 3 or 4 columns, found {}", f.len())));
        }
        let x = field_label(path, line, f[0])?;
        let y = field_label(path, line, f[1])?;
        let z = field_label(path, line, f[2])?;
        let w = match f.get(3) {
            Some(s) => s.parse::<f64>().map_err(|_| parse_err(path, line, format!("invalid weight {s:?}")))?,
            None => 1.0,
        };
        if !(w >= 0.0 && w.is_finite()) {
            return Err(parse_err(path, line, format!("weight {w} must be finite and nonnegative")));
        }
        let t = Triple::new(x, y, z).map_err(|e| parse_err(path, line, e.to_string()))?;
        set.add(t, w);
    }
    Ok(set)
}

pub fn write_triples(set: &TripleSet) -> String {
    let mut out = String::new();
    if !set.universe().is_empty() {
        out.push_str(SPECIES_DIRECTIVE);
        for s in set.universe() {
            let _ = write!(out, "\t{s}");
        }
        out.push('\n');
    }
    for (t, w) in set {
        let (a, b) = t.pair();
        let _ = writeln!(out, "{a}\t{b}\t{}\t{}", t.outgroup(), fmt_weight(*w));
    }
    out
}

/// Shortest decimal form: integers without a fractional part.
pub fn fmt_weight(w: f64) -> String {
    if w.fract() == 0.0 && w.abs() < 1e15 {
        format!("{}", w as i64)
    } else {
        format!("{w}")
    }
}
