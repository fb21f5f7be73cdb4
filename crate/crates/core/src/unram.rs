//! The unramified machine: the Whittaker-value polynomial j, the
//! intertwined combination i_1, the seven-case piecewise i over the
//! admissible lattice, the reparametrized ii, the Z-factors, the
//! normalizing-factor identity, the torus-monomial identity for nu_s, and
//! the master power-series identity — all exact.
//!
//! Variable dictionary, fixed once: x stands for q^{-(s1-3s2)/2} and y for
//! q^{-s2+1}; the auxiliary u1 = (s1-s2-2)/2 and u2 = (s1+s2-4)/2 satisfy
//! q^{-u1} = xy and q^{-u2} = xy^2. Every case prefactor routes through this
//! dictionary.

use crate::data;
use crate::exactalg::{
    to_text, Coeff, FactoredRational, Monomial, SparsePoly, TruncationSpec, VarContext,
    VarKind,
};
use crate::matgroups;
use crate::report::{CheckReport, ReportBuilder, Status};
use num::{BigRational, One, Zero};

/// Context with series variables x, y only.
pub fn xy_ctx() -> VarContext {
    VarContext::series(&["x", "y"], &[], None)
}

/// Lattice point (A, B, C, D); admissible when the four pair sums are
/// non-negative.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct LatticePoint {
    pub a: i64,
    pub b: i64,
    pub c: i64,
    pub d: i64,
}

impl LatticePoint {
    pub fn admissible(&self) -> bool {
        self.a + self.d >= 0 && self.b + self.c >= 0 && self.b + self.d >= 0 && self.c + self.d >= 0
    }
}

/// The seven sign patterns; exactly one matches each admissible point.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CaseId {
    AllNonneg,
    DNeg,
    CNeg,
    ACNeg,
    ANeg,
    ABNeg,
    BNeg,
}

pub fn case_of(pt: &LatticePoint) -> Option<CaseId> {
    if !pt.admissible() {
        return None;
    }
    let (na, nb, nc, nd) = (pt.a < 0, pt.b < 0, pt.c < 0, pt.d < 0);
    Some(match (na, nb, nc, nd) {
        (false, false, false, false) => CaseId::AllNonneg,
        (false, false, false, true) => CaseId::DNeg,
        (false, false, true, false) => CaseId::CNeg,
        (true, false, true, false) => CaseId::ACNeg,
        (true, false, false, false) => CaseId::ANeg,
        (true, true, false, false) => CaseId::ABNeg,
        (false, true, false, false) => CaseId::BNeg,
        _ => unreachable!("pattern excluded by admissibility"),
    })
}

fn xy(ctx: &VarContext, ex: i64, ey: i64) -> SparsePoly {
    SparsePoly::mono(ctx, &[("x", ex as i16), ("y", ey as i16)])
}

/// j_1(l) j_2(l) j_3(l) when every l_i >= 0, else zero.
pub fn j_poly(ctx: &VarContext, l: [i64; 4]) -> SparsePoly {
    if l.iter().any(|&v| v < 0) {
        return SparsePoly::zero(ctx);
    }
    let [l1, l2, l3, l4] = l;
    let j1 = SparsePoly::int(ctx, 1)
        .sub(&xy(ctx, 2 * l4 + 2, 2 * l4 + 2))
        .unwrap()
        .sub(&xy(ctx, 0, 2 * l1 + 2))
        .unwrap()
        .sub(&xy(ctx, 2 * l1 + 2 * l4 + 4, 4 * l1 + 4 * l4 + 8))
        .unwrap()
        .add(&xy(ctx, 2 * l4 + 2, 2 * l1 + 4 * l4 + 6))
        .unwrap()
        .add(&xy(ctx, 2 * l1 + 2 * l4 + 4, 4 * l1 + 2 * l4 + 6))
        .unwrap();
    let j2 = SparsePoly::int(ctx, 1)
        .sub(&xy(ctx, 2 * l2 + 2, 4 * l2 + 4))
        .unwrap();
    let j3 = SparsePoly::int(ctx, 1)
        .sub(&xy(ctx, 2 * l3 + 2, 2 * l3 + 2))
        .unwrap();
    j1.mul(&j2).unwrap().mul(&j3).unwrap()
}

/// i_1(l) = j(l) - x^2 y^4 j(l - e1) - x^4 y^6 j(l - (0,1,1,1))
///          + x^6 y^10 j(l - (1,1,1,1)); vanishing j handles the boundary.
pub fn i1_poly(ctx: &VarContext, l: [i64; 4]) -> SparsePoly {
    let [l1, l2, l3, l4] = l;
    let shift = |p: SparsePoly, ex: i64, ey: i64| {
        p.scale_mono(
            &Coeff::one(),
            &{
                let mut m = Monomial::unit(ctx.len());
                m.0[ctx.index("x")] = ex as i16;
                m.0[ctx.index("y")] = ey as i16;
                m
            },
        )
    };
    j_poly(ctx, l)
        .sub(&shift(j_poly(ctx, [l1 - 1, l2, l3, l4]), 2, 4))
        .unwrap()
        .sub(&shift(j_poly(ctx, [l1, l2 - 1, l3 - 1, l4 - 1]), 4, 6))
        .unwrap()
        .add(&shift(j_poly(ctx, [l1 - 1, l2 - 1, l3 - 1, l4 - 1]), 6, 10))
        .unwrap()
}

/// Case prefactors through the single dictionary: a negative A or B
/// contributes (xy)^{-2A} or (xy)^{-2B}; a negative C or D contributes
/// (xy^2)^{-2C} or (xy^2)^{-2D}.
fn case_data(pt: &LatticePoint) -> ([i64; 4], (i64, i64)) {
    let LatticePoint { a, b, c, d } = *pt;
    match case_of(pt).expect("admissible") {
        CaseId::AllNonneg => ([a, b, c, d], (0, 0)),
        CaseId::DNeg => ([a + d, b + d, c + d, 0], (-2 * d, -4 * d)),
        CaseId::CNeg => ([a, b + c, 0, c + d], (-2 * c, -4 * c)),
        CaseId::ACNeg => ([0, b + c, 0, a + c + d], (-2 * (a + c), -2 * a - 4 * c)),
        CaseId::ANeg => ([0, b, c, a + d], (-2 * a, -2 * a)),
        CaseId::ABNeg => ([0, 0, b + c, a + b + d], (-2 * (a + b), -2 * (a + b))),
        CaseId::BNeg => ([a, 0, b + c, b + d], (-2 * b, -2 * b)),
    }
}

/// The piecewise i: monomial prefactor times i_1 at shifted arguments.
pub fn i_piecewise(ctx: &VarContext, pt: &LatticePoint) -> SparsePoly {
    assert!(pt.admissible(), "inadmissible lattice point");
    let (args, (ex, ey)) = case_data(pt);
    i1_poly(ctx, args).scale_mono(&Coeff::one(), &{
        let mut m = Monomial::unit(ctx.len());
        m.0[ctx.index("x")] = ex as i16;
        m.0[ctx.index("y")] = ey as i16;
        m
    })
}

/// The reparametrized ii(m1..m4): zero on odd m2+m3+m4, otherwise i at the
/// half-integer argument map times x^{2m1+m2} y^{2m1+m2+m4}.
pub fn ii_poly(ctx: &VarContext, m: [i64; 4]) -> SparsePoly {
    let [m1, m2, m3, m4] = m;
    assert!(m.iter().all(|&v| v >= 0));
    if (m2 + m3 + m4) % 2 != 0 {
        return SparsePoly::zero(ctx);
    }
    let h = (-m2 + m3 + m4) / 2;
    let pt = LatticePoint {
        a: m1 - h,
        b: (m2 + m3 - m4) / 2,
        c: (m2 - m3 + m4) / 2,
        d: h,
    };
    i_piecewise(ctx, &pt).scale_mono(&Coeff::one(), &{
        let mut mm = Monomial::unit(ctx.len());
        mm.0[ctx.index("x")] = (2 * m1 + m2) as i16;
        mm.0[ctx.index("y")] = (2 * m1 + m2 + m4) as i16;
        mm
    })
}

/// Floating-point evaluation of ii(m) at numeric (x, y): same integer case
/// logic as the exact route, with the j-polynomials evaluated directly.
/// Used by the numeric theorem check; the exact route stays the reference.
pub fn ii_eval_f64(m: [i64; 4], x: f64, y: f64) -> f64 {
    let [m1, m2, m3, m4] = m;
    if (m2 + m3 + m4) % 2 != 0 {
        return 0.0;
    }
    let h = (-m2 + m3 + m4) / 2;
    let pt = LatticePoint {
        a: m1 - h,
        b: (m2 + m3 - m4) / 2,
        c: (m2 - m3 + m4) / 2,
        d: h,
    };
    let j = |l: [i64; 4]| -> f64 {
        if l.iter().any(|&v| v < 0) {
            return 0.0;
        }
        let [l1, l2, l3, l4] = l;
        let p = |ex: i64, ey: i64| x.powi(ex as i32) * y.powi(ey as i32);
        let j1 = 1.0 - p(2 * l4 + 2, 2 * l4 + 2) - p(0, 2 * l1 + 2)
            - p(2 * l1 + 2 * l4 + 4, 4 * l1 + 4 * l4 + 8)
            + p(2 * l4 + 2, 2 * l1 + 4 * l4 + 6)
            + p(2 * l1 + 2 * l4 + 4, 4 * l1 + 2 * l4 + 6);
        let j2 = 1.0 - p(2 * l2 + 2, 4 * l2 + 4);
        let j3 = 1.0 - p(2 * l3 + 2, 2 * l3 + 2);
        j1 * j2 * j3
    };
    let i1 = |l: [i64; 4]| -> f64 {
        let [l1, l2, l3, l4] = l;
        j([l1, l2, l3, l4]) - x.powi(2) * y.powi(4) * j([l1 - 1, l2, l3, l4])
            - x.powi(4) * y.powi(6) * j([l1, l2 - 1, l3 - 1, l4 - 1])
            + x.powi(6) * y.powi(10) * j([l1 - 1, l2 - 1, l3 - 1, l4 - 1])
    };
    let (args, (ex, ey)) = case_data(&pt);
    let pref = x.powi(ex as i32) * y.powi(ey as i32);
    let outer = x.powi((2 * m1 + m2) as i32) * y.powi((2 * m1 + m2 + m4) as i32);
    outer * pref * i1(args)
}

// ---------------------------------------------------------------------------
// Z-factors
// ---------------------------------------------------------------------------

pub fn z2_poly(ctx: &VarContext) -> SparsePoly {
    let f = |ex, ey| SparsePoly::int(ctx, 1).sub(&xy(ctx, ex, ey)).unwrap();
    f(0, 2)
        .mul(&f(2, 2))
        .unwrap()
        .mul(&f(2, 2))
        .unwrap()
        .mul(&f(2, 4))
        .unwrap()
        .mul(&f(2, 4))
        .unwrap()
}

pub fn z3_poly(ctx: &VarContext) -> SparsePoly {
    let f = |ex, ey| SparsePoly::int(ctx, 1).sub(&xy(ctx, ex, ey)).unwrap();
    f(2, 2).mul(&f(2, 4)).unwrap().mul(&f(4, 6)).unwrap()
}

// ---------------------------------------------------------------------------
// Master identity
// ---------------------------------------------------------------------------

/// Context for the master identity: t's in series group 0 (bounded by the
/// lattice degree) and x, y in group 1 (bounded separately).
pub fn master_ctx(n_t: u32, m_xy: u32) -> VarContext {
    VarContext::new(
        vec![
            ("x".into(), VarKind::Series(1)),
            ("y".into(), VarKind::Series(1)),
            ("t1".into(), VarKind::Series(0)),
            ("t2".into(), VarKind::Series(0)),
            ("t3".into(), VarKind::Series(0)),
            ("t4".into(), VarKind::Series(0)),
        ],
        Some(TruncationSpec::groups(&[n_t, m_xy])),
    )
}

/// LHS: sum over admissible lattice points of
/// i(A,B,C,D) x^{2A+B+C+2D} y^{2A+B+2C+3D} t1^{B+C} t2^{A+D} t3^{B+D} t4^{C+D},
/// with t-degree <= n and the x,y part truncated at m_xy.
pub fn master_lhs(n: u32, m_xy: u32) -> SparsePoly {
    use rayon::prelude::*;
    let ctx = master_ctx(n, m_xy);
    let xyctx = xy_ctx();
    let mut tuples = Vec::new();
    for m1 in 0..=n as i64 {
        for m2 in 0..=(n as i64 - m1) {
            for m3 in 0..=(n as i64 - m1 - m2) {
                for m4 in 0..=(n as i64 - m1 - m2 - m3) {
                    if (m1 + m3 + m4) % 2 == 0 {
                        tuples.push([m1, m2, m3, m4]);
                    }
                }
            }
        }
    }
    let slices: Vec<SparsePoly> = tuples
        .par_iter()
        .map(|&[m1, m2, m3, m4]| {
            // lattice point for the swapped-argument ii(m2, m1, m3, m4)
            let h = (-m1 + m3 + m4) / 2;
            let pt = LatticePoint {
                a: m2 - h,
                b: (m1 + m3 - m4) / 2,
                c: (m1 - m3 + m4) / 2,
                d: h,
            };
            let contrib = i_piecewise(&xyctx, &pt);
            let mut out = SparsePoly::zero(&ctx);
            let ex0 = 2 * pt.a + pt.b + pt.c + 2 * pt.d;
            let ey0 = 2 * pt.a + pt.b + 2 * pt.c + 3 * pt.d;
            for (m, c) in contrib.terms() {
                let mut e = vec![0i16; ctx.len()];
                e[ctx.index("x")] = m.0[xyctx.index("x")] + ex0 as i16;
                e[ctx.index("y")] = m.0[xyctx.index("y")] + ey0 as i16;
                e[ctx.index("t1")] = m1 as i16;
                e[ctx.index("t2")] = m2 as i16;
                e[ctx.index("t3")] = m3 as i16;
                e[ctx.index("t4")] = m4 as i16;
                let mono = Monomial::from_exps(&e);
                if mono.within(&ctx) {
                    out.insert_term_pub(mono, c.clone());
                }
            }
            out
        })
        .collect();
    let mut lhs = SparsePoly::zero(&ctx);
    for s in slices {
        lhs = lhs.add(&s).expect("ctx");
    }
    lhs
}

/// RHS: Z_4(x, y) nu(xy, xy^2, t) / delta(xy, xy^2, t) — the markers of the
/// symmetric-algebra generating function are substituted per the
/// P_m(xy, xy^2) reduction before expansion.
pub fn master_rhs(n: u32, m_xy: u32, mutate_nu: Option<usize>) -> SparsePoly {
    let ctx = master_ctx(n, m_xy);
    let sub_markers = |m: &Monomial| -> Monomial {
        let mut out = m.clone();
        let (xi, yi) = (ctx.index("x"), ctx.index("y"));
        let (ex, ey) = (m.0[xi], m.0[yi]);
        out.0[xi] = ex + ey;
        out.0[yi] = ex + 2 * ey;
        out
    };
    // mutation indices count from the low-degree end of the canonical order,
    // so index 0 (the constant term) is visible in every truncation window
    let mut nu = SparsePoly::zero(&ctx);
    for (idx, (m, c)) in data::nu_poly(&ctx)
        .sorted_terms()
        .into_iter()
        .rev()
        .enumerate()
    {
        let c = if mutate_nu == Some(idx) {
            c + BigRational::one()
        } else {
            c.clone()
        };
        nu.insert_term_pub(sub_markers(m), c);
    }
    let dens: Vec<Monomial> = data::delta_factors(&ctx).iter().map(&sub_markers).collect();
    let z4 = z2_poly(&ctx).mul(&z3_poly(&ctx)).expect("ctx");
    let num = z4.mul(&nu).expect("ctx").truncated(None);
    FactoredRational::new(num, dens)
        .expect("substituted delta factors keep positive series degree")
        .expand(&ctx)
        .expect("expansion")
}

/// Exact equality of the two truncations; a mutated nu coefficient must
/// flip this to fail (exercised by the acceptance suite).
pub fn verify_master_with(
    lhs: &SparsePoly,
    n: u32,
    m_xy: u32,
    mutate_nu: Option<usize>,
) -> CheckReport {
    let mut rb = ReportBuilder::new(
        "master",
        "section 6, the piecewise lattice sum equals Z_4 nu/delta",
    )
    .param("degree", n)
    .param("xy-degree", m_xy);
    for (f, c) in data::data_checksums() {
        if f == "nu.poly" || f == "delta.factors" {
            rb.data_checksum(f, &c);
        }
    }
    if let Some(k) = mutate_nu {
        rb.note(format!("mutation: nu coefficient #{k} perturbed by +1"));
    }
    let rhs = master_rhs(n, m_xy, mutate_nu);
    let diff = lhs.sub(&rhs).expect("ctx");
    if let Some((m, c)) = diff.sorted_terms().into_iter().next() {
        rb.note(format!(
            "first differing coefficient at {} (difference {})",
            m.display(lhs.ctx()),
            c
        ));
    }
    rb.symbolic(diff.num_terms())
}

pub fn verify_master(n: u32, m_xy: u32, mutate_nu: Option<usize>) -> CheckReport {
    verify_master_with(&master_lhs(n, m_xy), n, m_xy, mutate_nu)
}

/// Default x,y window: wide enough to be a meaningful slice at every
/// t-degree up to n (the j-polynomials contribute degree ~ 4n + constants).
pub fn default_master_xy(n: u32) -> u32 {
    2 * n + 8
}

// ---------------------------------------------------------------------------
// Normalization identity
// ---------------------------------------------------------------------------

/// Monomial (e_x, e_y, e_q) for q^{-(c1 s1 + c2 s2 + c0)} under the
/// dictionary; e_q counts powers of q^{-1}.
fn dictionary_monomial(form: [i64; 3]) -> (i64, i64, i64) {
    let [c1, c2, c0] = form;
    let ex = 2 * c1;
    let ey = 3 * c1 + c2;
    let eq = c0 + 3 * c1 + c2;
    (ex, ey, eq)
}

fn multiset_of(forms: &[[i64; 3]]) -> std::collections::BTreeMap<(i64, i64, i64), i64> {
    let mut out = std::collections::BTreeMap::new();
    for f in forms {
        *out.entry(dictionary_monomial(*f)).or_insert(0) += 1;
    }
    out
}

/// N(s, chi_0) * [zeta ratio] * Z_2 * Z_3 = 1, exactly: the local factors
/// on the two sides must cancel as a multiset of (1 - monomial) binomials.
/// `omit_n_factor` deliberately drops one factor for the mutation test.
pub fn verify_normalization(omit_n_factor: Option<usize>) -> CheckReport {
    let mut rb = ReportBuilder::new(
        "normalization",
        "section 8 normalizing factor against the section 6 zeta ratio",
    );
    for (f, c) in data::data_checksums() {
        if f == "normalization.factors" {
            rb.data_checksum(f, &c);
        }
    }
    let nd = data::normalization_data();
    let mut n_forms = nd.n_factors.clone();
    if let Some(k) = omit_n_factor {
        rb.note(format!("mutation: N factor #{k} omitted"));
        n_forms.remove(k);
    }
    // denominator side: N's Euler factors and the ratio numerator
    let mut den = multiset_of(&n_forms);
    for (k, v) in multiset_of(&nd.ratio_num) {
        *den.entry(k).or_insert(0) += v;
    }
    // numerator side: the ratio denominator and the Z_2 Z_3 binomials
    let mut num = multiset_of(&nd.ratio_den);
    let z_binomials: [(i64, i64); 8] = [
        (0, 2),
        (2, 2),
        (2, 2),
        (2, 4),
        (2, 4),
        (2, 2),
        (2, 4),
        (4, 6),
    ];
    for (ex, ey) in z_binomials {
        *num.entry((ex, ey, 0)).or_insert(0) += 1;
    }
    let ok = num == den;
    if !ok {
        for (k, v) in &num {
            let d = den.get(k).copied().unwrap_or(0);
            if *v != d {
                rb.note(format!(
                    "binomial x^{} y^{} q^-{}: numerator {} vs denominator {}",
                    k.0, k.1, k.2, v, d
                ));
            }
        }
        for (k, d) in &den {
            if !num.contains_key(k) {
                rb.note(format!(
                    "binomial x^{} y^{} q^-{}: numerator 0 vs denominator {}",
                    k.0, k.1, k.2, d
                ));
            }
        }
    }
    rb.note("all eight Euler factors of N pair off against ratio and Z factors".to_string());
    rb.finish(
        if ok { Status::Pass } else { Status::Fail },
        if ok { "product is exactly 1" } else { "residual factors remain" },
    )
}

/// Sanity: the Gindikin-Karpelevich factor Z_1, rendered in the same
/// dictionary (with explicit q^{-1} powers), is not 1.
pub fn z1_is_nontrivial() -> bool {
    let num = [[0i64, 2, -1], [1, -1, -1], [1, 1, -3]];
    let den = [[0i64, 2, 0], [1, -1, 0], [1, 1, -2]];
    multiset_of(&num) != multiset_of(&den)
}

// ---------------------------------------------------------------------------
// nu_s monomial identity
// ---------------------------------------------------------------------------

/// Linear form c0 + c1 s1 + c2 s2 with exact rational coefficients.
#[derive(Clone, Debug, PartialEq)]
struct LinForm {
    c0: BigRational,
    c1: BigRational,
    c2: BigRational,
}

impl LinForm {
    fn zero() -> Self {
        LinForm {
            c0: BigRational::zero(),
            c1: BigRational::zero(),
            c2: BigRational::zero(),
        }
    }

    fn from_ints(c0: i64, c1: i64, c2: i64) -> Self {
        LinForm {
            c0: BigRational::from_integer(c0.into()),
            c1: BigRational::from_integer(c1.into()),
            c2: BigRational::from_integer(c2.into()),
        }
    }

    fn add(&self, o: &LinForm) -> LinForm {
        LinForm {
            c0: &self.c0 + &o.c0,
            c1: &self.c1 + &o.c1,
            c2: &self.c2 + &o.c2,
        }
    }

    fn scale_int(&self, k: i64) -> LinForm {
        let k = BigRational::from_integer(k.into());
        LinForm {
            c0: &self.c0 * &k,
            c1: &self.c1 * &k,
            c2: &self.c2 * &k,
        }
    }
}

/// The nu_s identity of the unramified computation: multiplying the torus
/// monomials delta_B^{-1/2}, |det t|^{1/2}, |t^{beta1+beta2+beta4}|, Jac_1
/// and (chi_0; s)(w t w^{-1}) — with s3 = 3(s1+s2)/2 substituted and beta's
/// taken from the coordinate-weight computation — gives exactly
/// x^{2n1+n2} y^{2n1+n3+2n4} as a formal monomial identity in (n1..n4).
pub fn verify_nu_s() -> CheckReport {
    let mut rb = ReportBuilder::new(
        "nu-s",
        "display (11): nu_s(t) = x^{2n1+n2} y^{2n1+n3+2n4}",
    );
    let (cw, wrep) = matgroups::coordinate_weights();
    if wrep.status == Status::Fail {
        return rb.finish(Status::Fail, "coordinate weights unavailable");
    }
    // q-exponent of each |.| factor, per n_i (valuations add: v(t_i) = n_i).
    // |t_i|^u contributes q^{-u n_i}.
    let mut total: [LinForm; 4] = [
        LinForm::zero(),
        LinForm::zero(),
        LinForm::zero(),
        LinForm::zero(),
    ];
    let add_abs_monomial = |total: &mut [LinForm; 4], exps: [i64; 4], u: LinForm| {
        // |t^w|^... : |prod t_i^{w_i}| with exponent form u contributes
        // q^{- sum_i w_i n_i * u}
        for i in 0..4 {
            total[i] = total[i].add(&u.scale_int(-exps[i]));
        }
    };
    // delta_B^{-1/2} = |t1^2 t2 t3 t4|^{-1}
    add_abs_monomial(&mut total, [2, 1, 1, 1], LinForm::from_ints(-1, 0, 0));
    // |det t|^{1/2} = |t2^{-2} t3^2 t4^4|
    add_abs_monomial(&mut total, [0, -2, 2, 4], LinForm::from_ints(1, 0, 0));
    // |t^{beta1 + beta2 + beta4}| with the betas from the weight computation
    let beta_sum = cw.betas[&1].add(&cw.betas[&2]).add(&cw.betas[&4]);
    add_abs_monomial(
        &mut total,
        [
            beta_sum.0[0] as i64,
            beta_sum.0[1] as i64,
            beta_sum.0[2] as i64,
            beta_sum.0[3] as i64,
        ],
        LinForm::from_ints(1, 0, 0),
    );
    // Jac_1 = |t1^2 t3 t4^2|^{-1}
    add_abs_monomial(&mut total, [2, 0, 1, 2], LinForm::from_ints(-1, 0, 0));
    // (chi_0; s)(w t w^{-1}) = |t1|^{s1-s2} |t2|^{-s1-3s2+s3} |t3 t4^2|^{s2},
    // s3 = 3(s1+s2)/2 makes the t2 exponent (s1-3s2)/2
    add_abs_monomial(&mut total, [1, 0, 0, 0], LinForm::from_ints(0, 1, -1));
    let half = |a: i64, b: i64, c: i64| LinForm {
        c0: crate::exactalg::ratio(a, 2),
        c1: crate::exactalg::ratio(b, 2),
        c2: crate::exactalg::ratio(c, 2),
    };
    add_abs_monomial(&mut total, [0, 1, 0, 0], half(0, 1, -3));
    add_abs_monomial(&mut total, [0, 0, 1, 2], LinForm::from_ints(0, 0, 1));

    // target: x^{2n1+n2} y^{2n1+n3+2n4}; x = q^{-(s1-3s2)/2}, y = q^{-s2+1}
    let x_form = half(0, -1, 3);
    let y_form = LinForm::from_ints(1, 0, -1);
    let want: [LinForm; 4] = [
        x_form.scale_int(2).add(&y_form.scale_int(2)),
        x_form.scale_int(1),
        y_form.scale_int(1),
        y_form.scale_int(2),
    ];
    let mut mismatches = Vec::new();
    for i in 0..4 {
        if total[i] != want[i] {
            mismatches.push(i + 1);
            rb.note(format!(
                "exponent of n{}: got ({} + {} s1 + {} s2), want ({} + {} s1 + {} s2)",
                i + 1,
                total[i].c0,
                total[i].c1,
                total[i].c2,
                want[i].c0,
                want[i].c1,
                want[i].c2
            ));
        }
    }
    // diagnose the beta2 inference specifically if it is the only failure
    if !mismatches.is_empty() {
        let mut without_beta2 = [
            LinForm::zero(),
            LinForm::zero(),
            LinForm::zero(),
            LinForm::zero(),
        ];
        let b2 = &cw.betas[&2];
        for i in 0..4 {
            without_beta2[i] = total[i].add(&LinForm::from_ints(b2.0[i] as i64, 0, 0));
        }
        if (0..4).all(|i| without_beta2[i] == want[i]) {
            rb.note(
                "mismatch isolated to the beta2-dependent exponent; the beta2 \
                 identification (not the displayed identity) is the suspect"
                    .to_string(),
            );
        }
    }
    let ok = mismatches.is_empty();
    rb.finish(
        if ok { Status::Pass } else { Status::Fail },
        if ok {
            "formal monomial identity holds in (n1..n4)".to_string()
        } else {
            format!("mismatch in n{mismatches:?}")
        },
    )
}

/// Serialize a truncation for the golden cache.
pub fn serialize(p: &SparsePoly) -> String {
    to_text(p)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactalg::from_text;

    #[test]
    fn j_vanishes_off_the_cone_and_matches_at_zero() {
        let ctx = xy_ctx();
        assert!(j_poly(&ctx, [-1, 0, 0, 0]).is_zero());
        // j(0) = (1 - x^2 y^2 - y^2 - x^4 y^8 + x^2 y^6 + x^4 y^6)(1 - x^2 y^4)(1 - x^2 y^2)
        let j0 = j_poly(&ctx, [0, 0, 0, 0]);
        let j1_expect = SparsePoly::int(&ctx, 1)
            .sub(&xy(&ctx, 2, 2))
            .unwrap()
            .sub(&xy(&ctx, 0, 2))
            .unwrap()
            .sub(&xy(&ctx, 4, 8))
            .unwrap()
            .add(&xy(&ctx, 2, 6))
            .unwrap()
            .add(&xy(&ctx, 4, 6))
            .unwrap();
        let expect = j1_expect
            .mul(&SparsePoly::int(&ctx, 1).sub(&xy(&ctx, 2, 4)).unwrap())
            .unwrap()
            .mul(&SparsePoly::int(&ctx, 1).sub(&xy(&ctx, 2, 2)).unwrap())
            .unwrap();
        assert_eq!(j0, expect);
    }

    #[test]
    fn j_and_i1_divisible_by_z2() {
        let ctx = xy_ctx();
        let z2 = z2_poly(&ctx);
        for l in [
            [0i64, 0, 0, 0],
            [1, 0, 2, 0],
            [2, 1, 0, 3],
            [3, 3, 3, 3],
            [0, 2, 1, 1],
        ] {
            assert!(j_poly(&ctx, l).divide_exact(&z2).is_ok(), "j{l:?}");
            assert!(i1_poly(&ctx, l).divide_exact(&z2).is_ok(), "i1{l:?}");
        }
    }

    #[test]
    fn i1_boundary_cases() {
        let ctx = xy_ctx();
        // at l = 0 the three shifted terms vanish
        assert_eq!(i1_poly(&ctx, [0, 0, 0, 0]), j_poly(&ctx, [0, 0, 0, 0]));
        // at l = e1 only one shift survives
        let want = j_poly(&ctx, [1, 0, 0, 0])
            .sub(
                &j_poly(&ctx, [0, 0, 0, 0])
                    .scale_mono(&Coeff::one(), &{
                        let mut m = Monomial::unit(2);
                        m.0[0] = 2;
                        m.0[1] = 4;
                        m
                    }),
            )
            .unwrap();
        assert_eq!(i1_poly(&ctx, [1, 0, 0, 0]), want);
    }

    #[test]
    fn case_coverage_on_box() {
        let mut admissible = 0;
        for a in -4..=4i64 {
            for b in -4..=4i64 {
                for c in -4..=4i64 {
                    for d in -4..=4i64 {
                        let pt = LatticePoint { a, b, c, d };
                        if pt.admissible() {
                            admissible += 1;
                            // exactly one case: case_of is total on admissible
                            // points and the forbidden sign pairs never occur
                            assert!(case_of(&pt).is_some());
                            assert!(!(b < 0 && c < 0));
                            assert!(!(c < 0 && d < 0));
                            assert!(!(a < 0 && d < 0));
                            assert!(!(b < 0 && d < 0));
                        }
                    }
                }
            }
        }
        assert!(admissible > 1000);
    }

    #[test]
    fn piecewise_examples() {
        let ctx = xy_ctx();
        let i0 = i_piecewise(&ctx, &LatticePoint { a: 0, b: 0, c: 0, d: 0 });
        assert_eq!(i0, i1_poly(&ctx, [0, 0, 0, 0]));
        // (1,1,1,-1): second case, prefactor x^2 y^4, arguments all zero
        let p = i_piecewise(&ctx, &LatticePoint { a: 1, b: 1, c: 1, d: -1 });
        let want = i1_poly(&ctx, [0, 0, 0, 0]).scale_mono(&Coeff::one(), &{
            let mut m = Monomial::unit(2);
            m.0[0] = 2;
            m.0[1] = 4;
            m
        });
        assert_eq!(p, want);
        // (-1,0,0,1): fifth case, prefactor x^2 y^2
        let p = i_piecewise(&ctx, &LatticePoint { a: -1, b: 0, c: 0, d: 1 });
        let want = i1_poly(&ctx, [0, 0, 0, 0]).scale_mono(&Coeff::one(), &{
            let mut m = Monomial::unit(2);
            m.0[0] = 2;
            m.0[1] = 2;
            m
        });
        assert_eq!(p, want);
    }

    #[test]
    fn case_boundary_consistency() {
        // on the closure overlap (a boundary coordinate hitting 0 from the
        // negative side), the adjacent case formulas agree
        let ctx = xy_ctx();
        let eval_case = |pt: &LatticePoint, forced: CaseId| -> SparsePoly {
            // apply the `forced` case formula at pt (valid on its closure)
            let LatticePoint { a, b, c, d } = *pt;
            let (args, (ex, ey)) = match forced {
                CaseId::AllNonneg => ([a, b, c, d], (0i64, 0i64)),
                CaseId::DNeg => ([a + d, b + d, c + d, 0], (-2 * d, -4 * d)),
                CaseId::CNeg => ([a, b + c, 0, c + d], (-2 * c, -4 * c)),
                CaseId::ACNeg => ([0, b + c, 0, a + c + d], (-2 * (a + c), -2 * a - 4 * c)),
                CaseId::ANeg => ([0, b, c, a + d], (-2 * a, -2 * a)),
                CaseId::ABNeg => ([0, 0, b + c, a + b + d], (-2 * (a + b), -2 * (a + b))),
                CaseId::BNeg => ([a, 0, b + c, b + d], (-2 * b, -2 * b)),
            };
            i1_poly(&ctx, args).scale_mono(&Coeff::one(), &{
                let mut m = Monomial::unit(2);
                m.0[0] = ex as i16;
                m.0[1] = ey as i16;
                m
            })
        };
        // pairs (boundary point, adjacent cases): a coordinate at 0 lies in
        // the closure of the case where it goes negative
        let checks: Vec<(LatticePoint, CaseId)> = vec![
            (LatticePoint { a: 1, b: 1, c: 1, d: 0 }, CaseId::DNeg),
            (LatticePoint { a: 2, b: 1, c: 0, d: 1 }, CaseId::CNeg),
            (LatticePoint { a: 0, b: 1, c: 0, d: 2 }, CaseId::ACNeg),
            (LatticePoint { a: 0, b: 2, c: 1, d: 1 }, CaseId::ANeg),
            (LatticePoint { a: 0, b: 0, c: 1, d: 2 }, CaseId::ABNeg),
            (LatticePoint { a: 1, b: 0, c: 2, d: 1 }, CaseId::BNeg),
            (LatticePoint { a: -1, b: 1, c: 0, d: 2 }, CaseId::ACNeg),
            (LatticePoint { a: -1, b: 0, c: 1, d: 1 }, CaseId::ABNeg),
            (LatticePoint { a: 0, b: -1, c: 1, d: 1 }, CaseId::ABNeg),
            (LatticePoint { a: 0, b: 1, c: -1, d: 1 }, CaseId::ACNeg),
        ];
        for (pt, adjacent) in checks {
            let direct = i_piecewise(&ctx, &pt);
            let via_adjacent = eval_case(&pt, adjacent);
            assert_eq!(direct, via_adjacent, "boundary overlap at {pt:?}");
        }
    }

    #[test]
    fn ii_parity_and_reindex() {
        let ctx = xy_ctx();
        assert!(ii_poly(&ctx, [0, 1, 0, 0]).is_zero());
        assert_eq!(ii_poly(&ctx, [0, 0, 0, 0]), i1_poly(&ctx, [0, 0, 0, 0]));
        // m = (1,0,0,0): i(1,0,0,0) x^2 y^2
        let want = i1_poly(&ctx, [1, 0, 0, 0]).scale_mono(&Coeff::one(), &{
            let mut m = Monomial::unit(2);
            m.0[0] = 2;
            m.0[1] = 2;
            m
        });
        assert_eq!(ii_poly(&ctx, [1, 0, 0, 0]), want);
        // ii divisible by Z_2
        let z2 = z2_poly(&ctx);
        for m in [[1i64, 1, 1, 0], [2, 0, 1, 1], [0, 2, 2, 0]] {
            let p = ii_poly(&ctx, m);
            if !p.is_zero() {
                assert!(p.divide_exact(&z2).is_ok(), "ii{m:?}");
            }
        }
    }

    #[test]
    fn ii_f64_matches_exact_route() {
        let ctx = xy_ctx();
        let x = crate::exactalg::ratio(1, 6);
        let y = crate::exactalg::ratio(1, 7);
        let vals = vec![x, y];
        let (xf, yf) = (1.0 / 6.0, 1.0 / 7.0);
        for m1 in 0..4i64 {
            for m2 in 0..4i64 {
                for m3 in 0..3i64 {
                    for m4 in 0..3i64 {
                        let exact = crate::exactalg::rational_to_f64(
                            &ii_poly(&ctx, [m1, m2, m3, m4]).eval_rational(&vals),
                        );
                        let fast = ii_eval_f64([m1, m2, m3, m4], xf, yf);
                        assert!(
                            (exact - fast).abs() <= 1e-12 * exact.abs().max(1.0),
                            "m = {:?}: {exact} vs {fast}",
                            [m1, m2, m3, m4]
                        );
                    }
                }
            }
        }
    }

    #[test]
    fn master_lhs_matches_ii_route() {
        // the lattice enumeration with explicit exponents equals the
        // ii-reparametrized sum
        let n = 3u32;
        let m_xy = 12u32;
        let lhs = master_lhs(n, m_xy);
        let ctx = master_ctx(n, m_xy);
        let xyc = xy_ctx();
        let mut alt = SparsePoly::zero(&ctx);
        for m1 in 0..=n as i64 {
            for m2 in 0..=(n as i64 - m1) {
                for m3 in 0..=(n as i64 - m1 - m2) {
                    for m4 in 0..=(n as i64 - m1 - m2 - m3) {
                        let p = ii_poly(&xyc, [m2, m1, m3, m4]);
                        for (mm, c) in p.terms() {
                            let mut e = vec![0i16; ctx.len()];
                            e[ctx.index("x")] = mm.0[0];
                            e[ctx.index("y")] = mm.0[1];
                            e[ctx.index("t1")] = m1 as i16;
                            e[ctx.index("t2")] = m2 as i16;
                            e[ctx.index("t3")] = m3 as i16;
                            e[ctx.index("t4")] = m4 as i16;
                            let mono = Monomial::from_exps(&e);
                            if mono.within(&ctx) {
                                alt.insert_term_pub(mono, c.clone());
                            }
                        }
                    }
                }
            }
        }
        assert_eq!(lhs, alt);
    }

    #[test]
    fn master_small_degree() {
        let r = verify_master(2, 12, None);
        assert_eq!(r.status, Status::Pass, "{:?}", r.notes);
        // constant term is 1
        let lhs = master_lhs(2, 12);
        let one = Monomial::unit(6);
        assert_eq!(lhs.coeff(&one), BigRational::one());
    }

    #[test]
    fn master_mutation_detected() {
        // index 0 is the constant term of nu, visible in every window
        let r = verify_master(2, 10, Some(0));
        assert_eq!(r.status, Status::Fail);
    }

    #[test]
    fn master_truncation_stability() {
        let wide = master_lhs(3, 10);
        let narrow = master_lhs(2, 10);
        let narrow_ctx = master_ctx(2, 10);
        let filtered = wide.truncated(Some(&narrow_ctx));
        // compare after reserialization into the narrower context
        let a = from_text(&narrow_ctx, &to_text(&filtered)).unwrap();
        let b = from_text(&narrow_ctx, &to_text(&narrow)).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn normalization_identity() {
        let r = verify_normalization(None);
        assert_eq!(r.status, Status::Pass, "{:?}", r.notes);
        assert!(z1_is_nontrivial());
        let broken = verify_normalization(Some(3));
        assert_eq!(broken.status, Status::Fail);
    }

    #[test]
    fn nu_s_identity() {
        let r = verify_nu_s();
        assert_eq!(r.status, Status::Pass, "{:?}", r.notes);
    }
}
