//! Transcribed polynomial constants, loaded from checked-in data files with
//! checksums recorded in reports. Keeping the long displays out of the code
//! isolates transcription risk: the tau-exact identity and the series
//! cross-checks act as independent witnesses for these files.

use crate::exactalg::{from_text, Monomial, SparsePoly, VarContext};
use sha2::{Digest, Sha256};

pub const NU_FILE: &str = include_str!("../data/nu.poly");
pub const DELTA_FILE: &str = include_str!("../data/delta.factors");
pub const COROLLARY_FILE: &str = include_str!("../data/corollary.vectors");
pub const NORMALIZATION_FILE: &str = include_str!("../data/normalization.factors");

pub fn checksum(content: &str) -> String {
    let mut h = Sha256::new();
    h.update(content.as_bytes());
    format!("{:x}", h.finalize())
}

pub fn data_checksums() -> Vec<(&'static str, String)> {
    vec![
        ("nu.poly", checksum(NU_FILE)),
        ("delta.factors", checksum(DELTA_FILE)),
        ("corollary.vectors", checksum(COROLLARY_FILE)),
        ("normalization.factors", checksum(NORMALIZATION_FILE)),
    ]
}

/// Variable order used by the nu/delta files.
pub const NU_DELTA_VARS: [&str; 6] = ["x", "y", "t1", "t2", "t3", "t4"];

/// nu over a target context containing x, y, t1..t4 (matched by name).
pub fn nu_poly(target: &VarContext) -> SparsePoly {
    let file_ctx = VarContext::series(&[], &NU_DELTA_VARS, None);
    let p = from_text(&file_ctx, NU_FILE).expect("nu.poly parses");
    p.embed(target).expect("target context holds x,y,t1..t4")
}

/// The 14 delta factor monomials over a target context.
pub fn delta_factors(target: &VarContext) -> Vec<Monomial> {
    let mut out = Vec::new();
    for line in DELTA_FILE.lines() {
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let exps: Vec<i16> = line
            .split(',')
            .map(|t| t.trim().parse().expect("delta exponent"))
            .collect();
        assert_eq!(exps.len(), 6);
        let mut m = Monomial::unit(target.len());
        for (name, e) in NU_DELTA_VARS.iter().zip(exps) {
            if e != 0 {
                m.0[target.index(name)] += e;
            }
        }
        out.push(m);
    }
    assert_eq!(out.len(), 14, "delta has fourteen factors");
    out
}

/// Corollary data: rows (a_k, b_k, g1_k, g2_k, g3_k), k = 1..7.
pub fn corollary_rows() -> Vec<[i16; 5]> {
    let mut out = Vec::new();
    for line in COROLLARY_FILE.lines() {
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let vals: Vec<i16> = line
            .split(',')
            .map(|t| t.trim().parse().expect("corollary entry"))
            .collect();
        assert_eq!(vals.len(), 5);
        out.push([vals[0], vals[1], vals[2], vals[3], vals[4]]);
    }
    assert_eq!(out.len(), 7, "seven generating factors");
    out
}

/// Linear forms c1*s1 + c2*s2 + c0 from the normalization data file.
pub struct NormalizationData {
    pub n_factors: Vec<[i64; 3]>,
    pub ratio_num: Vec<[i64; 3]>,
    pub ratio_den: Vec<[i64; 3]>,
}

pub fn normalization_data() -> NormalizationData {
    let mut out = NormalizationData {
        n_factors: Vec::new(),
        ratio_num: Vec::new(),
        ratio_den: Vec::new(),
    };
    let mut section = "";
    for line in NORMALIZATION_FILE.lines() {
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        if line.starts_with('[') {
            section = line;
            continue;
        }
        let vals: Vec<i64> = line
            .split(',')
            .map(|t| t.trim().parse().expect("linear form entry"))
            .collect();
        assert_eq!(vals.len(), 3);
        let form = [vals[0], vals[1], vals[2]];
        match section {
            "[N]" => out.n_factors.push(form),
            "[ratio-num]" => out.ratio_num.push(form),
            "[ratio-den]" => out.ratio_den.push(form),
            other => panic!("unknown section {other}"),
        }
    }
    assert_eq!(out.n_factors.len(), 8, "N has eight factors");
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn nu_term_count_and_evaluation() {
        let ctx = VarContext::series(&[], &NU_DELTA_VARS, None);
        let nu = nu_poly(&ctx);
        assert_eq!(nu.num_terms(), 34);
        // constant term 1
        let one = Monomial::unit(6);
        assert_eq!(nu.coeff(&one), num::BigRational::from_integer(1.into()));
    }

    #[test]
    fn delta_and_corollary_shapes() {
        let ctx = VarContext::series(&[], &NU_DELTA_VARS, None);
        assert_eq!(delta_factors(&ctx).len(), 14);
        assert_eq!(corollary_rows().len(), 7);
        let nd = normalization_data();
        assert_eq!(nd.ratio_num.len(), 5);
        assert_eq!(nd.ratio_den.len(), 5);
    }
}
