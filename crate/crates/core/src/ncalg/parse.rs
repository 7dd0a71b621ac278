//! Presentation files.
//!
//! ```text
//! # comment
//! [generators]
//! x y z:2          # optional weight after ':'
//! [relations]
//! x*y - q*y*x      # one relation per line, understood as = 0
//! [options]
//! degree = 6
//! params = h, c    # commuting parameters besides q
//! ```

use std::sync::Arc;

use num_bigint::BigInt;

use crate::coeff::expr::{self, Interp};
use crate::coeff::{CoeffError, Field, ParamSet, QScalar};

use super::{Generators, NCPoly, NcError, Presentation};

#[derive(Clone, Debug)]
pub struct PresentationFile {
    pub presentation: Presentation<QScalar>,
    pub params: ParamSet,
    pub degree: Option<u32>,
}

struct PolyInterp<'a> {
    gens: &'a Generators,
    params: &'a ParamSet,
}

fn perr(line: usize, col: usize, msg: impl Into<String>) -> CoeffError {
    CoeffError::Parse { line, col, msg: msg.into() }
}

impl Interp for PolyInterp<'_> {
    type Value = NCPoly<QScalar>;
    fn int(&self, n: &BigInt) -> Self::Value {
        NCPoly::constant(QScalar::from_rational(n.clone().into()))
    }
    fn name(&self, name: &str, line: usize, col: usize) -> Result<Self::Value, CoeffError> {
        if let Some(g) = self.gens.by_name(name) {
            Ok(g)
        } else if self.params.index(name).is_some() {
            Ok(NCPoly::constant(self.params.var(name)))
        } else {
            Err(CoeffError::UnknownName { name: name.into(), line, col })
        }
    }
    fn add(&self, a: Self::Value, b: Self::Value) -> Self::Value {
        a.add(&b)
    }
    fn neg(&self, a: Self::Value) -> Self::Value {
        a.neg()
    }
    fn mul(&self, a: Self::Value, b: Self::Value) -> Result<Self::Value, CoeffError> {
        Ok(a.mul(&b))
    }
    fn div(&self, a: Self::Value, b: Self::Value) -> Result<Self::Value, CoeffError> {
        if !b.is_constant() {
            return Err(perr(0, 0, "division by a noncommutative expression"));
        }
        Ok(a.scale(&b.constant_part().inv()?))
    }
    fn pow(&self, a: Self::Value, e: i64) -> Result<Self::Value, CoeffError> {
        if a.is_constant() {
            return Ok(NCPoly::constant(a.constant_part().powi(e)?));
        }
        if e < 0 {
            return Err(perr(0, 0, "negative power of a generator"));
        }
        let mut acc = NCPoly::one();
        for _ in 0..e {
            acc = acc.mul(&a);
        }
        Ok(acc)
    }
}

fn strip_comment(s: &str) -> &str {
    s.split('#').next().unwrap_or("")
}

/// Parses a presentation file; errors carry 1-based line and column.
pub fn parse_presentation(src: &str) -> Result<PresentationFile, NcError> {
    let mut section = String::new();
    let mut gen_lines = Vec::new();
    let mut rel_lines = Vec::new();
    let mut degree = None;
    let mut extra: Vec<String> = Vec::new();
    for (ln, raw) in src.lines().enumerate() {
        let line = ln + 1;
        let text = strip_comment(raw);
        let trimmed = text.trim();
        if trimmed.is_empty() {
            continue;
        }
        if trimmed.starts_with('[') {
            if !trimmed.ends_with(']') {
                return Err(perr(line, 1, "unterminated section header").into());
            }
            section = trimmed[1..trimmed.len() - 1].trim().to_string();
            if !["generators", "relations", "options"].contains(&section.as_str()) {
                let col = text.find('[').unwrap() + 1;
                return Err(perr(line, col, format!("unknown section '{section}'")).into());
            }
            continue;
        }
        match section.as_str() {
            "generators" => gen_lines.push((line, text.to_string())),
            "relations" => rel_lines.push((line, text.to_string())),
            "options" => {
                let Some((k, v)) = text.split_once('=') else {
                    return Err(perr(line, 1, "expected 'key = value'").into());
                };
                let vcol = k.len() + 2 + (v.len() - v.trim_start().len());
                match k.trim() {
                    "degree" => {
                        degree = Some(
                            v.trim().parse().map_err(|_| perr(line, vcol, "degree must be a nonnegative integer"))?,
                        )
                    }
                    "params" => {
                        extra = v.split(',').map(|s| s.trim().to_string()).filter(|s| !s.is_empty()).collect()
                    }
                    other => {
                        let col = text.find(other).unwrap_or(0) + 1;
                        return Err(perr(line, col, format!("unknown option '{other}'")).into());
                    }
                }
            }
            _ => return Err(perr(line, 1, "content outside of a section").into()),
        }
    }
    let extra_refs: Vec<&str> = extra.iter().map(|s| s.as_str()).collect();
    let params = ParamSet::new(&extra_refs);
    let mut names = Vec::new();
    let mut weights = Vec::new();
    for (line, text) in &gen_lines {
        let mut offset = 0;
        for tok in text.split_whitespace() {
            let col = text[offset..].find(tok).unwrap() + offset + 1;
            offset = col - 1 + tok.len();
            let (name, w) = match tok.split_once(':') {
                Some((n, w)) => (n, w.parse::<u32>().map_err(|_| perr(*line, col + n.len() + 1, "bad weight"))?),
                None => (tok, 1),
            };
            let valid = name.chars().next().is_some_and(|c| c.is_alphabetic() || c == '_')
                && name.chars().all(|c| c.is_alphanumeric() || c == '_' || c == '\'');
            if !valid {
                return Err(perr(*line, col, format!("invalid generator name '{name}'")).into());
            }
            if params.index(name).is_some() {
                return Err(perr(*line, col, format!("'{name}' is already a parameter")).into());
            }
            if names.iter().any(|n| n == name) {
                return Err(perr(*line, col, format!("duplicate generator '{name}'")).into());
            }
            names.push(name.to_string());
            weights.push(w);
        }
    }
    let gens = Generators::new(names, weights)?;
    let interp = PolyInterp { gens: &gens, params: &params };
    let mut relations = Vec::new();
    for (line, text) in &rel_lines {
        let col = text.len() - text.trim_start().len() + 1;
        let e = expr::parse_at(text.trim(), *line, col)?;
        let r = e.eval(&interp).map_err(|err| match err {
            CoeffError::Parse { line: 0, msg, .. } => perr(*line, col, msg),
            other => other,
        })?;
        relations.push(r);
    }
    Ok(PresentationFile {
        presentation: Presentation::with_relations(Arc::new(gens), relations),
        params,
        degree,
    })
}
