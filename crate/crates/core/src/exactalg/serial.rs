//! Text serialization: one term per line, "num/den; e1,e2,...,ek" in
//! canonical (graded-lex descending) order. Used by the cache and golden
//! files; parsing requires the context the polynomial was written over.

use super::context::VarContext;
use super::poly::{Monomial, PolyError, SparsePoly};
use num::BigRational;
use std::str::FromStr;

pub fn to_text(p: &SparsePoly) -> String {
    let mut out = String::new();
    for (m, c) in p.sorted_terms() {
        out.push_str(&format!("{}; ", c));
        let exps: Vec<String> = m.0.iter().map(|e| e.to_string()).collect();
        out.push_str(&exps.join(","));
        out.push('\n');
    }
    out
}

pub fn from_text(ctx: &VarContext, text: &str) -> Result<SparsePoly, PolyError> {
    let mut p = SparsePoly::zero(ctx);
    for (lineno, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let (coeff_s, exps_s) = line
            .split_once(';')
            .ok_or_else(|| PolyError::Parse(format!("line {}: missing ';'", lineno + 1)))?;
        let coeff = BigRational::from_str(coeff_s.trim())
            .map_err(|e| PolyError::Parse(format!("line {}: bad coefficient: {e}", lineno + 1)))?;
        let exps: Vec<i16> = exps_s
            .trim()
            .split(',')
            .map(|t| {
                t.trim()
                    .parse::<i16>()
                    .map_err(|e| PolyError::Parse(format!("line {}: bad exponent: {e}", lineno + 1)))
            })
            .collect::<Result<_, _>>()?;
        if exps.len() != ctx.len() {
            return Err(PolyError::Parse(format!(
                "line {}: {} exponents for {} variables",
                lineno + 1,
                exps.len(),
                ctx.len()
            )));
        }
        let m = Monomial::from_exps(&exps);
        if !m.respects_laurent(ctx) {
            return Err(PolyError::Parse(format!(
                "line {}: negative exponent on non-Laurent variable",
                lineno + 1
            )));
        }
        p.insert_term(m, coeff);
    }
    Ok(p)
}
