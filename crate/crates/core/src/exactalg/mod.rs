//! Exact arithmetic substrate: big rationals, sparse multivariate Laurent
//! polynomials, truncated power-series expansion of factored rational
//! functions.
//!
//! Values are immutable after construction and safe to share across threads.
//! All coefficients are exact rationals; truncation applies only to series
//! variables, never to Laurent (torus) variables.

mod context;
mod factored;
mod poly;
mod serial;

pub use context::{TruncationSpec, VarContext, VarKind};
pub use factored::{geometric, one_minus, product_of_binomials, FactoredRational};
pub use poly::{rational_to_f64, Coeff, Monomial, PolyError, SparsePoly};
pub use serial::{from_text, to_text};

use num::BigRational;

/// Rational constant from an integer pair.
pub fn ratio(n: i64, d: i64) -> BigRational {
    BigRational::new(n.into(), d.into())
}

#[cfg(test)]
mod tests {
    use super::*;
    use num::{One, Zero};

    fn xy_ctx(n: Option<u32>) -> VarContext {
        VarContext::series(&["x", "y"], &[], n)
    }

    #[test]
    fn difference_of_squares() {
        let ctx = xy_ctx(None);
        let one = SparsePoly::int(&ctx, 1);
        let x = SparsePoly::var(&ctx, "x");
        let a = one.add(&x).unwrap();
        let b = one.sub(&x).unwrap();
        let x2 = x.mul(&x).unwrap();
        assert_eq!(a.mul(&b).unwrap(), one.sub(&x2).unwrap());
    }

    #[test]
    fn additive_identity() {
        let ctx = xy_ctx(None);
        let p = SparsePoly::mono(&ctx, &[("x", 2), ("y", 1)])
            .add(&SparsePoly::int(&ctx, 7))
            .unwrap();
        assert_eq!(p.add(&SparsePoly::zero(&ctx)).unwrap(), p);
    }

    #[test]
    fn z2_expansion_has_cancellation() {
        // (1-y^2)(1-x^2y^2)^2(1-x^2y^4)^2 expands to 18 terms or fewer
        let ctx = xy_ctx(None);
        let f = |ex: i16, ey: i16| {
            SparsePoly::int(&ctx, 1)
                .sub(&SparsePoly::mono(&ctx, &[("x", ex), ("y", ey)]))
                .unwrap()
        };
        let z2 = f(0, 2)
            .mul(&f(2, 2))
            .unwrap()
            .mul(&f(2, 2))
            .unwrap()
            .mul(&f(2, 4))
            .unwrap()
            .mul(&f(2, 4))
            .unwrap();
        assert!(z2.num_terms() <= 18, "got {}", z2.num_terms());
        let ones = vec![BigRational::one(), BigRational::one()];
        assert!(z2.eval_rational(&ones).is_zero());
    }

    #[test]
    fn geometric_series() {
        let ctx = xy_ctx(Some(3));
        let f = FactoredRational::new(
            SparsePoly::int(&ctx, 1),
            vec![Monomial::var(2, 0, 1)],
        )
        .unwrap();
        let got = f.expand(&ctx).unwrap();
        let mut want = SparsePoly::zero(&ctx);
        for k in 0..=3 {
            want = want.add(&SparsePoly::mono(&ctx, &[("x", k)])).unwrap();
        }
        assert_eq!(got, want);
    }

    #[test]
    fn product_of_geometric_series() {
        let ctx = xy_ctx(Some(2));
        let f = FactoredRational::new(
            SparsePoly::int(&ctx, 1),
            vec![Monomial::var(2, 0, 1), Monomial::var(2, 1, 1)],
        )
        .unwrap();
        let got = f.expand(&ctx).unwrap();
        assert_eq!(got.num_terms(), 6); // 1, x, y, x^2, xy, y^2
    }

    #[test]
    fn zero_series_degree_rejected() {
        let ctx = VarContext::new(
            vec![
                ("x".into(), VarKind::Series(0)),
                ("t".into(), VarKind::Ordinary),
            ],
            Some(TruncationSpec::total(4)),
        );
        let t = Monomial::var(2, 1, 1);
        assert!(FactoredRational::new(SparsePoly::int(&ctx, 1), vec![t]).is_err());
    }

    #[test]
    fn divide_exact_basic() {
        let ctx = xy_ctx(None);
        let x = SparsePoly::var(&ctx, "x");
        let one = SparsePoly::int(&ctx, 1);
        let num = x.mul(&x).unwrap().sub(&one).unwrap();
        let den = x.sub(&one).unwrap();
        let q = num.divide_exact(&den).unwrap();
        assert_eq!(q, x.add(&one).unwrap());
        // unit divisor
        assert_eq!(num.divide_exact(&one).unwrap(), num);
        // inexact division reports the offending term
        let err = x.divide_exact(&den).unwrap_err();
        assert!(matches!(err, PolyError::InexactDivision(_)));
    }

    #[test]
    fn substitution() {
        let ctx = xy_ctx(None);
        let p = SparsePoly::mono(&ctx, &[("x", 2)]);
        let y = SparsePoly::var(&ctx, "y");
        let got = p.substitute(&[("x", y.clone())]).unwrap();
        assert_eq!(got, SparsePoly::mono(&ctx, &[("y", 2)]));
    }

    #[test]
    fn laurent_binding_violation() {
        let ctx = VarContext::new(
            vec![
                ("x".into(), VarKind::Ordinary),
                ("a".into(), VarKind::Laurent),
            ],
            None,
        );
        let p = SparsePoly::var(&ctx, "x");
        let inv_a = SparsePoly::mono(&ctx, &[("a", -1)]);
        // binding non-Laurent x to a^{-1} must fail
        assert!(p.substitute(&[("x", inv_a)]).is_err());
    }

    #[test]
    fn truncation_stability() {
        // expand at N then truncate to N' equals expand at N'
        let ctx4 = xy_ctx(Some(4));
        let ctx2 = xy_ctx(Some(2));
        let dens = vec![
            Monomial::from_exps(&[1, 0]),
            Monomial::from_exps(&[1, 1]),
            Monomial::from_exps(&[0, 2]),
        ];
        let f4 = FactoredRational::new(SparsePoly::int(&ctx4, 1), dens.clone()).unwrap();
        let f2 = FactoredRational::new(SparsePoly::int(&ctx2, 1), dens).unwrap();
        let wide = f4.expand(&ctx4).unwrap().truncated(Some(&ctx2));
        let narrow = f2.expand(&ctx2).unwrap();
        let wide_in_ctx2 = from_text(&ctx2, &to_text(&wide)).unwrap();
        assert_eq!(wide_in_ctx2, narrow);
    }

    #[test]
    fn serialization_round_trip() {
        let ctx = VarContext::new(
            vec![
                ("x".into(), VarKind::Series(0)),
                ("a".into(), VarKind::Laurent),
            ],
            None,
        );
        let p = SparsePoly::mono(&ctx, &[("x", 2), ("a", -3)])
            .scale(&ratio(-7, 3))
            .add(&SparsePoly::int(&ctx, 5))
            .unwrap();
        let text = to_text(&p);
        let q = from_text(&ctx, &text).unwrap();
        assert_eq!(p, q);
        // canonical order makes re-serialization byte-identical
        assert_eq!(text, to_text(&q));
    }
}
