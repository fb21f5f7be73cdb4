//! Rational functions of the shape numerator / prod (1 - m_i), expanded as
//! truncated series by geometric expansion of each factor.

use super::context::VarContext;
use super::poly::{Coeff, Monomial, PolyError, SparsePoly};
use num::One;

/// numerator / prod_i (1 - dens[i]); repeated factors simply repeat.
#[derive(Clone, Debug)]
pub struct FactoredRational {
    pub num: SparsePoly,
    pub dens: Vec<Monomial>,
}

impl FactoredRational {
    pub fn new(num: SparsePoly, dens: Vec<Monomial>) -> Result<Self, PolyError> {
        let ctx = num.ctx().clone();
        for d in &dens {
            if d.series_degree(&ctx) <= 0 {
                return Err(PolyError::NonTerminating(d.display(&ctx)));
            }
        }
        Ok(FactoredRational { num, dens })
    }

    pub fn one(ctx: &VarContext) -> Self {
        FactoredRational {
            num: SparsePoly::constant(ctx, Coeff::one()),
            dens: Vec::new(),
        }
    }

    pub fn mul(&self, other: &FactoredRational) -> Result<FactoredRational, PolyError> {
        let num = self.num.mul(&other.num)?;
        let mut dens = self.dens.clone();
        dens.extend(other.dens.iter().cloned());
        Ok(FactoredRational { num, dens })
    }

    /// Expand to the truncation attached to `ctx` (which must bound every
    /// series group a denominator monomial touches).
    pub fn expand(&self, ctx: &VarContext) -> Result<SparsePoly, PolyError> {
        let mut acc = self.num.embed(ctx)?;
        for d in &self.dens {
            if d.series_degree(ctx) <= 0 {
                return Err(PolyError::NonTerminating(d.display(ctx)));
            }
            let geo = geometric(ctx, d)?;
            acc = acc.mul(&geo)?;
        }
        Ok(acc)
    }
}

/// 1 + m + m^2 + ... up to the context truncation.
pub fn geometric(ctx: &VarContext, m: &Monomial) -> Result<SparsePoly, PolyError> {
    let trunc = ctx
        .trunc()
        .expect("geometric expansion requires a truncation");
    // max power: every bounded group this monomial advances must stay in range
    let mut kmax = u32::MAX;
    for (g, &b) in trunc.bounds.iter().enumerate() {
        let dg = m.group_degree(ctx, g);
        if dg > 0 {
            kmax = kmax.min(b / dg as u32);
        }
    }
    if kmax == u32::MAX {
        return Err(PolyError::NonTerminating(m.display(ctx)));
    }
    let mut out = SparsePoly::constant(ctx, Coeff::one());
    let mut cur = Monomial::unit(ctx.len());
    for _ in 0..kmax {
        cur = cur.mul(m);
        if !cur.within(ctx) {
            break;
        }
        out.insert_term(cur.clone(), Coeff::one());
    }
    Ok(out)
}

/// prod (1 - m_i) as an exact polynomial (no truncation applied).
pub fn product_of_binomials(ctx: &VarContext, ms: &[Monomial]) -> SparsePoly {
    let mut acc = SparsePoly::constant(ctx, Coeff::one());
    for m in ms {
        let mut f = SparsePoly::constant(ctx, Coeff::one());
        f.insert_term(m.clone(), -Coeff::one());
        acc = acc.mul(&f).expect("same context");
    }
    acc
}

/// 1 - m as a polynomial.
pub fn one_minus(ctx: &VarContext, m: &Monomial) -> SparsePoly {
    let mut f = SparsePoly::constant(ctx, Coeff::one());
    f.insert_term(m.clone(), -Coeff::one());
    f
}
