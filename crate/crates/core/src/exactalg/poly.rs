//! Sparse multivariate Laurent polynomials with exact rational coefficients.

use super::context::VarContext;
use num::{BigRational, One, Signed, Zero};
use smallvec::SmallVec;
use std::cmp::Ordering;
use std::collections::HashMap;
use std::fmt;

pub type Coeff = BigRational;

#[derive(thiserror::Error, Debug)]
pub enum PolyError {
    #[error("operands built over different variable contexts")]
    ContextMismatch,
    #[error("inexact division, offending leading term {0}")]
    InexactDivision(String),
    #[error("division by zero polynomial")]
    DivisionByZero,
    #[error("negative exponent bound to non-Laurent variable {0}")]
    LaurentViolation(String),
    #[error("denominator factor {0} has zero series degree; expansion would not terminate")]
    NonTerminating(String),
    #[error("malformed serialized polynomial: {0}")]
    Parse(String),
}

/// Exponent vector aligned to a `VarContext`.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct Monomial(pub SmallVec<[i16; 8]>);

impl Monomial {
    pub fn unit(n: usize) -> Self {
        Monomial(smallvec::smallvec![0; n])
    }

    pub fn var(n: usize, i: usize, e: i16) -> Self {
        let mut m = Self::unit(n);
        m.0[i] = e;
        m
    }

    pub fn from_exps(exps: &[i16]) -> Self {
        Monomial(SmallVec::from_slice(exps))
    }

    pub fn mul(&self, other: &Monomial) -> Monomial {
        let mut out = self.0.clone();
        for (a, b) in out.iter_mut().zip(other.0.iter()) {
            *a += b;
        }
        Monomial(out)
    }

    pub fn pow(&self, k: i16) -> Monomial {
        Monomial(self.0.iter().map(|e| e * k).collect())
    }

    pub fn grade(&self) -> i64 {
        self.0.iter().map(|&e| e as i64).sum()
    }

    /// Total degree within one series group.
    pub fn group_degree(&self, ctx: &VarContext, g: usize) -> i64 {
        self.0
            .iter()
            .enumerate()
            .filter(|(i, _)| ctx.series_group(*i) == Some(g))
            .map(|(_, &e)| e as i64)
            .sum()
    }

    pub fn series_degree(&self, ctx: &VarContext) -> i64 {
        self.0
            .iter()
            .enumerate()
            .filter(|(i, _)| ctx.series_group(*i).is_some())
            .map(|(_, &e)| e as i64)
            .sum()
    }

    pub fn within(&self, ctx: &VarContext) -> bool {
        match ctx.trunc() {
            None => true,
            Some(t) => t
                .bounds
                .iter()
                .enumerate()
                .all(|(g, &b)| self.group_degree(ctx, g) <= b as i64),
        }
    }

    pub fn respects_laurent(&self, ctx: &VarContext) -> bool {
        self.0
            .iter()
            .enumerate()
            .all(|(i, &e)| e >= 0 || ctx.is_laurent(i))
    }

    /// Graded-lexicographic order: compare total grade, then exponents left
    /// to right. This is the canonical order for serialization and division.
    pub fn grlex(&self, other: &Monomial) -> Ordering {
        self.grade()
            .cmp(&other.grade())
            .then_with(|| self.0.cmp(&other.0))
    }

    pub fn try_div(&self, other: &Monomial, ctx: &VarContext) -> Option<Monomial> {
        let mut out = self.0.clone();
        for (i, (a, b)) in out.iter_mut().zip(other.0.iter()).enumerate() {
            *a -= b;
            if *a < 0 && !ctx.is_laurent(i) {
                return None;
            }
        }
        Some(Monomial(out))
    }

    pub fn display(&self, ctx: &VarContext) -> String {
        let mut parts = Vec::new();
        for (i, &e) in self.0.iter().enumerate() {
            match e {
                0 => {}
                1 => parts.push(ctx.names()[i].clone()),
                _ => parts.push(format!("{}^{}", ctx.names()[i], e)),
            }
        }
        if parts.is_empty() {
            "1".to_string()
        } else {
            parts.join("*")
        }
    }
}

/// Sparse polynomial over a shared context. Immutable in spirit: operations
/// return new values; `+=`-style helpers are internal.
#[derive(Clone, Debug)]
pub struct SparsePoly {
    ctx: VarContext,
    terms: HashMap<Monomial, Coeff>,
}

impl PartialEq for SparsePoly {
    fn eq(&self, other: &Self) -> bool {
        self.ctx == other.ctx && self.terms == other.terms
    }
}
impl Eq for SparsePoly {}

impl SparsePoly {
    pub fn zero(ctx: &VarContext) -> Self {
        SparsePoly {
            ctx: ctx.clone(),
            terms: HashMap::new(),
        }
    }

    pub fn constant(ctx: &VarContext, c: impl Into<Coeff>) -> Self {
        let mut p = Self::zero(ctx);
        let c = c.into();
        if !c.is_zero() {
            p.terms.insert(Monomial::unit(ctx.len()), c);
        }
        p
    }

    pub fn int(ctx: &VarContext, c: i64) -> Self {
        Self::constant(ctx, BigRational::from_integer(c.into()))
    }

    pub fn var(ctx: &VarContext, name: &str) -> Self {
        Self::monomial(ctx, Monomial::var(ctx.len(), ctx.index(name), 1))
    }

    pub fn monomial(ctx: &VarContext, m: Monomial) -> Self {
        debug_assert!(m.respects_laurent(ctx));
        let mut p = Self::zero(ctx);
        p.terms.insert(m, Coeff::one());
        p
    }

    /// Monomial from (name, exponent) pairs.
    pub fn mono(ctx: &VarContext, exps: &[(&str, i16)]) -> Self {
        let mut m = Monomial::unit(ctx.len());
        for (name, e) in exps {
            m.0[ctx.index(name)] += e;
        }
        Self::monomial(ctx, m)
    }

    pub fn ctx(&self) -> &VarContext {
        &self.ctx
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &Coeff)> {
        self.terms.iter()
    }

    pub fn coeff(&self, m: &Monomial) -> Coeff {
        self.terms.get(m).cloned().unwrap_or_else(Coeff::zero)
    }

    /// Terms in canonical (graded-lex descending) order.
    pub fn sorted_terms(&self) -> Vec<(&Monomial, &Coeff)> {
        let mut v: Vec<_> = self.terms.iter().collect();
        v.sort_by(|a, b| b.0.grlex(a.0));
        v
    }

    pub fn leading(&self) -> Option<(&Monomial, &Coeff)> {
        self.terms
            .iter()
            .max_by(|a, b| a.0.grlex(b.0))
    }

    fn check_ctx(&self, other: &SparsePoly) -> Result<(), PolyError> {
        if self.ctx == other.ctx {
            Ok(())
        } else {
            Err(PolyError::ContextMismatch)
        }
    }

    /// Accumulate one term, removing the slot if it cancels to zero.
    pub fn insert_term_pub(&mut self, m: Monomial, c: Coeff) {
        self.insert_term(m, c);
    }

    pub(crate) fn insert_term(&mut self, m: Monomial, c: Coeff) {
        if c.is_zero() {
            return;
        }
        use std::collections::hash_map::Entry;
        match self.terms.entry(m) {
            Entry::Vacant(v) => {
                v.insert(c);
            }
            Entry::Occupied(mut o) => {
                let sum = o.get() + &c;
                if sum.is_zero() {
                    o.remove();
                } else {
                    *o.get_mut() = sum;
                }
            }
        }
    }

    pub fn add(&self, other: &SparsePoly) -> Result<SparsePoly, PolyError> {
        self.check_ctx(other)?;
        let (big, small) = if self.terms.len() >= other.terms.len() {
            (self, other)
        } else {
            (other, self)
        };
        let mut out = big.clone();
        for (m, c) in &small.terms {
            out.insert_term(m.clone(), c.clone());
        }
        Ok(out)
    }

    pub fn sub(&self, other: &SparsePoly) -> Result<SparsePoly, PolyError> {
        self.check_ctx(other)?;
        let mut out = self.clone();
        for (m, c) in &other.terms {
            out.insert_term(m.clone(), -c.clone());
        }
        Ok(out)
    }

    pub fn neg(&self) -> SparsePoly {
        SparsePoly {
            ctx: self.ctx.clone(),
            terms: self.terms.iter().map(|(m, c)| (m.clone(), -c.clone())).collect(),
        }
    }

    pub fn scale(&self, c: &Coeff) -> SparsePoly {
        if c.is_zero() {
            return Self::zero(&self.ctx);
        }
        SparsePoly {
            ctx: self.ctx.clone(),
            terms: self.terms.iter().map(|(m, v)| (m.clone(), v * c)).collect(),
        }
    }

    /// Multiply by `c * m`: coefficient scale plus exponent shift.
    pub fn scale_mono(&self, c: &Coeff, m: &Monomial) -> SparsePoly {
        if c.is_zero() {
            return Self::zero(&self.ctx);
        }
        SparsePoly {
            ctx: self.ctx.clone(),
            terms: self
                .terms
                .iter()
                .map(|(k, v)| (k.mul(m), v * c))
                .collect(),
        }
    }

    /// Product, honoring the context truncation if one is attached.
    ///
    /// Large products fan out per-term across threads and merge; merging is
    /// order-insensitive and followed by zero-removal, so the result does not
    /// depend on scheduling.
    pub fn mul(&self, other: &SparsePoly) -> Result<SparsePoly, PolyError> {
        self.check_ctx(other)?;
        let truncating = self.ctx.trunc().is_some();
        let (a, b) = if self.terms.len() >= other.terms.len() {
            (self, other)
        } else {
            (other, self)
        };
        let work = a.terms.len().saturating_mul(b.terms.len());
        if work > 1_000_000 && a.terms.len() >= 8 {
            return Ok(self.mul_parallel(a, b, truncating));
        }
        let mut out = SparsePoly::zero(&self.ctx);
        out.terms.reserve(a.terms.len());
        for (ma, ca) in &a.terms {
            for (mb, cb) in &b.terms {
                let m = ma.mul(mb);
                if truncating && !m.within(&self.ctx) {
                    continue;
                }
                out.insert_term(m, ca * cb);
            }
        }
        Ok(out)
    }

    fn mul_parallel(&self, a: &SparsePoly, b: &SparsePoly, truncating: bool) -> SparsePoly {
        use rayon::prelude::*;
        let av: Vec<_> = a.terms.iter().collect();
        let ctx = &self.ctx;
        let maps: Vec<HashMap<Monomial, Coeff>> = av
            .par_chunks(av.len().div_ceil(rayon::current_num_threads().max(1)))
            .map(|chunk| {
                let mut local: HashMap<Monomial, Coeff> = HashMap::new();
                for (ma, ca) in chunk {
                    for (mb, cb) in &b.terms {
                        let m = ma.mul(mb);
                        if truncating && !m.within(ctx) {
                            continue;
                        }
                        let c = *ca * cb;
                        use std::collections::hash_map::Entry;
                        match local.entry(m) {
                            Entry::Vacant(v) => {
                                v.insert(c);
                            }
                            Entry::Occupied(mut o) => {
                                let sum = o.get() + &c;
                                if sum.is_zero() {
                                    o.remove();
                                } else {
                                    *o.get_mut() = sum;
                                }
                            }
                        }
                    }
                }
                local
            })
            .collect();
        let mut out = SparsePoly::zero(ctx);
        for map in maps {
            for (m, c) in map {
                out.insert_term(m, c);
            }
        }
        out
    }

    pub fn truncated(&self, ctx_override: Option<&VarContext>) -> SparsePoly {
        let ctx = ctx_override.unwrap_or(&self.ctx);
        SparsePoly {
            ctx: self.ctx.clone(),
            terms: self
                .terms
                .iter()
                .filter(|(m, _)| m.within(ctx))
                .map(|(m, c)| (m.clone(), c.clone()))
                .collect(),
        }
    }

    pub fn filter_terms(&self, keep: impl Fn(&Monomial) -> bool) -> SparsePoly {
        SparsePoly {
            ctx: self.ctx.clone(),
            terms: self
                .terms
                .iter()
                .filter(|(m, _)| keep(m))
                .map(|(m, c)| (m.clone(), c.clone()))
                .collect(),
        }
    }

    pub fn pow(&self, k: u32) -> Result<SparsePoly, PolyError> {
        let mut out = SparsePoly::constant(&self.ctx, Coeff::one());
        for _ in 0..k {
            out = out.mul(self)?;
        }
        Ok(out)
    }

    /// Exact division: returns `q` with `self = q * other`, or an error
    /// naming the first leading term that does not divide.
    pub fn divide_exact(&self, other: &SparsePoly) -> Result<SparsePoly, PolyError> {
        self.check_ctx(other)?;
        if other.is_zero() {
            return Err(PolyError::DivisionByZero);
        }
        let (lb, cb) = other.leading().expect("nonzero");
        let lb = lb.clone();
        let cb = cb.clone();
        let mut rem = self.clone();
        let mut quot = SparsePoly::zero(&self.ctx);
        let mut steps: u64 = 0;
        let max_steps: u64 = 10_000_000;
        while let Some((lr, cr)) = rem.leading() {
            let Some(qm) = lr.try_div(&lb, &self.ctx) else {
                return Err(PolyError::InexactDivision(lr.display(&self.ctx)));
            };
            let qc = cr / &cb;
            quot.insert_term(qm.clone(), qc.clone());
            let piece = other.scale_mono(&qc, &qm);
            rem = rem.sub(&piece)?;
            steps += 1;
            if steps > max_steps {
                return Err(PolyError::InexactDivision(format!(
                    "division diverged after {steps} steps"
                )));
            }
        }
        Ok(quot)
    }

    /// Substitute variables. Each binding maps a variable to a polynomial;
    /// a Laurent variable may only be bound to a single invertible term.
    pub fn substitute(&self, bindings: &[(&str, SparsePoly)]) -> Result<SparsePoly, PolyError> {
        for (name, val) in bindings {
            let i = self.ctx.index(name);
            if self.ctx.is_laurent(i) && val.num_terms() != 1 {
                return Err(PolyError::LaurentViolation((*name).to_string()));
            }
            if !self.ctx.is_laurent(i)
                && val.terms.keys().any(|m| m.0.iter().any(|&e| e < 0))
            {
                return Err(PolyError::LaurentViolation((*name).to_string()));
            }
            if val.ctx != self.ctx {
                return Err(PolyError::ContextMismatch);
            }
        }
        let idx: HashMap<usize, &SparsePoly> = bindings
            .iter()
            .map(|(name, val)| (self.ctx.index(name), val))
            .collect();
        let mut out = SparsePoly::zero(&self.ctx);
        for (m, c) in &self.terms {
            // split the monomial into untouched part and bound part
            let mut fixed = m.clone();
            let mut acc = SparsePoly::constant(&self.ctx, c.clone());
            for (&i, val) in &idx {
                let e = m.0[i];
                if e == 0 {
                    continue;
                }
                fixed.0[i] = 0;
                acc = acc.mul(&val.int_pow(e, &self.ctx)?)?;
            }
            for (mm, cc) in &acc.terms {
                let m2 = mm.mul(&fixed);
                if !m2.respects_laurent(&self.ctx) {
                    return Err(PolyError::LaurentViolation(
                        m2.display(&self.ctx),
                    ));
                }
                if m2.within(&self.ctx) {
                    out.insert_term(m2, cc.clone());
                }
            }
        }
        Ok(out)
    }

    /// self^e for signed e; negative powers require a single-term value.
    fn int_pow(&self, e: i16, ctx: &VarContext) -> Result<SparsePoly, PolyError> {
        if e >= 0 {
            return self.pow(e as u32);
        }
        if self.terms.len() != 1 {
            return Err(PolyError::LaurentViolation(format!(
                "negative power of a {}-term polynomial",
                self.terms.len()
            )));
        }
        let (m, c) = self.terms.iter().next().expect("one term");
        let mm = m.pow(e);
        let mut out = SparsePoly::zero(ctx);
        let inv = Coeff::one() / c;
        let mut cc = Coeff::one();
        for _ in 0..(-e) {
            cc *= &inv;
        }
        out.insert_term(mm, cc);
        Ok(out)
    }

    /// Exact evaluation at rational points (one value per context variable).
    pub fn eval_rational(&self, vals: &[BigRational]) -> BigRational {
        assert_eq!(vals.len(), self.ctx.len());
        let mut total = BigRational::zero();
        for (m, c) in &self.terms {
            let mut t = c.clone();
            for (i, &e) in m.0.iter().enumerate() {
                match e.cmp(&0) {
                    Ordering::Equal => {}
                    Ordering::Greater => {
                        t *= num::pow::pow(vals[i].clone(), e as usize);
                    }
                    Ordering::Less => {
                        t /= num::pow::pow(vals[i].clone(), (-e) as usize);
                    }
                }
            }
            total += t;
        }
        total
    }

    pub fn eval_complex(&self, vals: &[num::complex::Complex64]) -> num::complex::Complex64 {
        assert_eq!(vals.len(), self.ctx.len());
        let mut total = num::complex::Complex64::new(0.0, 0.0);
        for (m, c) in &self.terms {
            let mut t = num::complex::Complex64::new(
                rational_to_f64(c),
                0.0,
            );
            for (i, &e) in m.0.iter().enumerate() {
                if e != 0 {
                    t *= vals[i].powi(e as i32);
                }
            }
            total += t;
        }
        total
    }

    /// Translate into another context by variable name; missing names error.
    pub fn embed(&self, target: &VarContext) -> Result<SparsePoly, PolyError> {
        let map: Vec<usize> = self
            .ctx
            .names()
            .iter()
            .map(|n| {
                target
                    .try_index(n)
                    .ok_or_else(|| PolyError::Parse(format!("variable {n} missing in target")))
            })
            .collect::<Result<_, _>>()?;
        let mut out = SparsePoly::zero(target);
        for (m, c) in &self.terms {
            let mut mm = Monomial::unit(target.len());
            for (i, &e) in m.0.iter().enumerate() {
                mm.0[map[i]] += e;
            }
            if mm.within(target) {
                out.insert_term(mm, c.clone());
            }
        }
        Ok(out)
    }
}

pub fn rational_to_f64(c: &BigRational) -> f64 {
    use num::ToPrimitive;
    c.to_f64().unwrap_or_else(|| {
        // fall back through a reduced quotient for extreme magnitudes
        let n = c.numer().to_f64().unwrap_or(f64::MAX);
        let d = c.denom().to_f64().unwrap_or(f64::MAX);
        n / d
    })
}

impl fmt::Display for SparsePoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (m, c) in self.sorted_terms() {
            if first {
                write!(f, "{} {}", c, m.display(&self.ctx))?;
                first = false;
            } else if c.is_negative() {
                write!(f, " - {} {}", -c.clone(), m.display(&self.ctx))?;
            } else {
                write!(f, " + {} {}", c, m.display(&self.ctx))?;
            }
        }
        Ok(())
    }
}
