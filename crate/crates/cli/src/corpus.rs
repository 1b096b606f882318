//! Corpus files: a slab directive followed by surfaces and their components.
//!
//! ```text
//! # comment
//! slab a=1.0
//! surface optimal:
//!   component f=5.2374 g=q^1
//! surface pair:
//!   component f=3 g=q^2 * exp(0.1*q)
//!   component f=4 g=q^1
//! ```

use std::collections::HashSet;
use std::fmt;

use slab_area::{parse_gauss_map, GaussMap, SlabSurface};

#[derive(Debug, Clone, PartialEq)]
pub struct CorpusError {
    pub line: usize,
    pub column: usize,
    pub surface: Option<String>,
    pub message: String,
}

impl fmt::Display for CorpusError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if let Some(id) = &self.surface {
            write!(f, "surface {id}, ")?;
        }
        write!(f, "line {}, column {}: {}", self.line, self.column, self.message)
    }
}

impl std::error::Error for CorpusError {}

#[derive(Debug, Clone)]
pub struct Corpus {
    pub a: f64,
    pub surfaces: Vec<(String, SlabSurface)>,
}

struct PendingSurface {
    id: String,
    line: usize,
    components: Vec<GaussMap>,
}

fn parse_positive(text: &str, what: &str) -> Result<f64, String> {
    match text.parse::<f64>() {
        Ok(x) if x.is_finite() && x > 0.0 => Ok(x),
        _ => Err(format!("{what} must be a positive number, got {text:?}")),
    }
}

pub fn parse_corpus(text: &str) -> Result<Corpus, CorpusError> {
    let mut a: Option<f64> = None;
    let mut pending: Vec<PendingSurface> = Vec::new();
    let mut seen = HashSet::new();

    for (idx, raw) in text.lines().enumerate() {
        let line_no = idx + 1;
        let line = raw.split('#').next().unwrap_or("");
        let indent = line.len() - line.trim_start().len();
        let content = line.trim();
        if content.is_empty() {
            continue;
        }
        let current = pending.last().map(|s| s.id.clone());
        let err = |column: usize, message: String| CorpusError {
            line: line_no,
            column,
            surface: current.clone(),
            message,
        };

        if let Some(rest) = content.strip_prefix("slab") {
            let value = rest.trim_start().strip_prefix("a=").ok_or_else(|| err(indent + 1, "expected 'slab a=<real>'".into()))?;
            if a.is_some() {
                return Err(err(indent + 1, "duplicate slab directive".into()));
            }
            if !pending.is_empty() {
                return Err(err(indent + 1, "slab directive must precede every surface".into()));
            }
            let column = indent + content.find("a=").map_or(0, |p| p + 2) + 1;
            a = Some(parse_positive(value.trim(), "slab half-height").map_err(|m| err(column, m))?);
        } else if let Some(rest) = content.strip_prefix("surface") {
            let id = rest
                .trim()
                .strip_suffix(':')
                .map(str::trim)
                .filter(|id| !id.is_empty() && !id.contains(char::is_whitespace))
                .ok_or_else(|| err(indent + 1, "expected 'surface <id>:'".into()))?;
            if !seen.insert(id.to_string()) {
                return Err(CorpusError {
                    line: line_no,
                    column: indent + 1,
                    surface: Some(id.to_string()),
                    message: "duplicate surface id".into(),
                });
            }
            pending.push(PendingSurface { id: id.to_string(), line: line_no, components: Vec::new() });
        } else if let Some(rest) = content.strip_prefix("component") {
            let surface = pending.last_mut().ok_or_else(|| err(indent + 1, "component outside a surface block".into()))?;
            let f_pos = content.find("f=").ok_or_else(|| err(indent + 1, "expected 'f=<real>'".into()))?;
            let g_pos = content.find("g=").ok_or_else(|| err(indent + 1, "expected 'g=<expr>'".into()))?;
            if !rest.trim_start().starts_with("f=") || g_pos < f_pos {
                return Err(err(indent + 1, "expected 'component f=<real> g=<expr>'".into()));
            }
            let f_text = content[f_pos + 2..g_pos].trim();
            let f = parse_positive(f_text, "circumference").map_err(|m| err(indent + f_pos + 3, m))?;
            let expr = &content[g_pos + 2..];
            let g = parse_gauss_map(expr, f).map_err(|e| {
                let base = indent + g_pos + 2;
                err(base + e.column().unwrap_or(1), e.to_string())
            })?;
            surface.components.push(g);
        } else {
            return Err(err(indent + 1, format!("unknown directive {:?}", content.split_whitespace().next().unwrap_or(""))));
        }
    }

    let a = a.ok_or(CorpusError { line: 1, column: 1, surface: None, message: "missing 'slab a=<real>'".into() })?;
    if pending.is_empty() {
        return Err(CorpusError { line: 1, column: 1, surface: None, message: "corpus has no surfaces".into() });
    }
    let surfaces = pending
        .into_iter()
        .map(|p| {
            let line = p.line;
            let id = p.id;
            SlabSurface::new(a, p.components)
                .map(|s| (id.clone(), s))
                .map_err(|e| CorpusError { line, column: 1, surface: Some(id), message: e.to_string() })
        })
        .collect::<Result<Vec<_>, _>>()?;
    Ok(Corpus { a, surfaces })
}

/// Inverse of [`parse_corpus`] for corpora sharing one slab.
pub fn format_corpus(a: f64, surfaces: &[(String, SlabSurface)]) -> String {
    let mut out = format!("slab a={a}\n");
    for (id, s) in surfaces {
        out.push_str(&format!("surface {id}:\n"));
        for g in s.components() {
            out.push_str(&format!("  component f={} g={}\n", g.circumference(), slab_area::format_gauss_map(g)));
        }
    }
    out
}
