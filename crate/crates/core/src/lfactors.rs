//! Numeric side of the main local identity: Satake classes, Euler factors
//! for the eight-dimensional tensor representations, two-sided evaluation of
//! the theorem at small rational (x, y), and the twisting reduction.
//!
//! Floating point with explicit tail estimates; the symbolic master identity
//! carries the exact statement, so these numerics are a redundant
//! cross-check with an independent failure mode.

use crate::data;
use crate::exactalg::rational_to_f64;
use crate::report::{CheckReport, ReportBuilder, Status};
use crate::unram;
use num::complex::Complex64;
use num::BigRational;
use rand::Rng;
use rand::SeedableRng;

/// Satake parameters: (alpha, beta) for Sp4 and gamma_1, gamma_2 for the
/// two SL2 factors. Not normalized to a fundamental domain; Weyl-equivalent
/// parameter choices must produce equal outputs (a test obligation).
#[derive(Clone, Copy, Debug)]
pub struct SatakeClass {
    pub alpha: Complex64,
    pub beta: Complex64,
    pub gamma1: Complex64,
    pub gamma2: Complex64,
}

impl SatakeClass {
    pub fn trivial() -> Self {
        SatakeClass {
            alpha: Complex64::new(1.0, 0.0),
            beta: Complex64::new(1.0, 0.0),
            gamma1: Complex64::new(1.0, 0.0),
            gamma2: Complex64::new(1.0, 0.0),
        }
    }

    pub fn random_unitary(rng: &mut impl Rng) -> Self {
        let mut angle = || {
            let t: f64 = rng.gen_range(0.0..std::f64::consts::TAU);
            Complex64::new(t.cos(), t.sin())
        };
        SatakeClass {
            alpha: angle(),
            beta: angle(),
            gamma1: angle(),
            gamma2: angle(),
        }
    }

    pub fn sp4_eigenvalues(&self) -> [Complex64; 4] {
        [
            self.alpha,
            self.beta,
            1.0 / self.beta,
            1.0 / self.alpha,
        ]
    }

    pub fn sl2_eigenvalues(&self, which: Sl2Factor) -> [Complex64; 2] {
        let g = match which {
            Sl2Factor::First => self.gamma1,
            Sl2Factor::Second => self.gamma2,
        };
        [g, 1.0 / g]
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Sl2Factor {
    First,
    Second,
}

/// Numeric evaluation of the irreducible character [m1, m2; m3; m4] at a
/// Satake class, through the Weyl character formula when the parameters are
/// regular and through the exact character polynomial otherwise.
pub fn char_eval(w: (u32, u32, u32, u32), tau: &SatakeClass) -> Complex64 {
    let (n1, n2, m3, m4) = w;
    let one = Complex64::new(1.0, 0.0);
    if (tau.alpha - one).norm() < 1e-13
        && (tau.beta - one).norm() < 1e-13
        && (tau.gamma1 - one).norm() < 1e-13
        && (tau.gamma2 - one).norm() < 1e-13
    {
        let dim = crate::chars::DominantWeight::new(n1, n2, m3, m4).dimension();
        return Complex64::new(dim as f64, 0.0);
    }
    let sp4 = sp4_char_eval(n1, n2, tau.alpha, tau.beta);
    let c3 = sl2_char_eval(m3, tau.gamma1);
    let c4 = sl2_char_eval(m4, tau.gamma2);
    sp4 * c3 * c4
}

fn sl2_char_eval(m: u32, g: Complex64) -> Complex64 {
    let denom = g - 1.0 / g;
    if denom.norm() > 1e-9 {
        (g.powi(m as i32 + 1) - g.powi(-(m as i32) - 1)) / denom
    } else {
        // g ~ +-1: sum the weights directly
        let mut acc = Complex64::new(0.0, 0.0);
        for k in 0..=m {
            acc += g.powi(m as i32 - 2 * k as i32);
        }
        acc
    }
}

const WEYL_C2_NUM: [(bool, i32, i32, f64); 8] = [
    (false, 1, 1, 1.0),
    (false, 1, -1, -1.0),
    (false, -1, 1, -1.0),
    (false, -1, -1, 1.0),
    (true, 1, 1, -1.0),
    (true, 1, -1, 1.0),
    (true, -1, 1, 1.0),
    (true, -1, -1, -1.0),
];

fn sp4_alt_sum(l1: i32, l2: i32, a: Complex64, b: Complex64) -> Complex64 {
    let mut acc = Complex64::new(0.0, 0.0);
    for (swap, s1, s2, sgn) in WEYL_C2_NUM {
        let (e1, e2) = if swap { (l2, l1) } else { (l1, l2) };
        acc += sgn * a.powi(e1 * s1) * b.powi(e2 * s2);
    }
    acc
}

fn sp4_char_eval(n1: u32, n2: u32, a: Complex64, b: Complex64) -> Complex64 {
    let den = sp4_alt_sum(2, 1, a, b);
    if den.norm() > 1e-9 {
        sp4_alt_sum(n1 as i32 + n2 as i32 + 2, n2 as i32 + 1, a, b) / den
    } else {
        // degenerate parameters: evaluate the exact character polynomial,
        // sharing one table so repeated weights hit its cache
        use std::sync::OnceLock;
        static TABLE: OnceLock<crate::chars::CharTable> = OnceLock::new();
        let table = TABLE.get_or_init(crate::chars::CharTable::new);
        let ch = table.sp4_char(n1, n2);
        ch.eval_complex(&[a, b, Complex64::new(1.0, 0.0), Complex64::new(1.0, 0.0)])
    }
}

/// The degree-8 reciprocal polynomial det(I - u rho(tau)) for the tensor
/// representation; evaluation of the local factor is 1/value.
#[derive(Clone, Debug)]
pub struct EulerFactor {
    /// coefficients of det(I - u rho), constant term first (always 1)
    pub coeffs: Vec<Complex64>,
}

impl EulerFactor {
    pub fn new(tau: &SatakeClass, which: Sl2Factor) -> Self {
        let mut coeffs = vec![Complex64::new(1.0, 0.0)];
        for e in tau.sp4_eigenvalues() {
            for f in tau.sl2_eigenvalues(which) {
                // multiply by (1 - u e f)
                let root = e * f;
                let mut next = vec![Complex64::new(0.0, 0.0); coeffs.len() + 1];
                for (k, c) in coeffs.iter().enumerate() {
                    next[k] += c;
                    next[k + 1] -= c * root;
                }
                coeffs = next;
            }
        }
        EulerFactor { coeffs }
    }

    pub fn det_at(&self, u: Complex64) -> Complex64 {
        let mut acc = Complex64::new(0.0, 0.0);
        for c in self.coeffs.iter().rev() {
            acc = acc * u + c;
        }
        acc
    }

    /// 1 / det(I - u rho(tau)); errors at a zero of the determinant.
    pub fn eval(&self, u: Complex64) -> Result<Complex64, String> {
        let d = self.det_at(u);
        if d.norm() < 1e-14 {
            return Err(format!("evaluation at a zero of the determinant, u = {u}"));
        }
        Ok(1.0 / d)
    }
}

pub fn euler_factor(u: Complex64, tau: &SatakeClass, which: Sl2Factor) -> Result<Complex64, String> {
    EulerFactor::new(tau, which).eval(u)
}

// ---------------------------------------------------------------------------
// The theorem, numerically
// ---------------------------------------------------------------------------

fn dictionary_value(form: [i64; 3], x: f64, y: f64, q: f64) -> f64 {
    // q^{-(c1 s1 + c2 s2 + c0)} = x^{2 c1} y^{3 c1 + c2} q^{-(c0 + 3 c1 + c2)}
    let ex = 2 * form[0];
    let ey = 3 * form[0] + form[1];
    let eq = form[2] + 3 * form[0] + form[1];
    x.powi(ex as i32) * y.powi(ey as i32) * q.powi(-eq as i32)
}

/// zeta-ratio of the unramified computation at numeric (x, y, q).
pub fn zeta_ratio(x: f64, y: f64, q: f64) -> f64 {
    let nd = data::normalization_data();
    let mut v = 1.0;
    for f in &nd.ratio_num {
        v /= 1.0 - dictionary_value(*f, x, y, q);
    }
    for f in &nd.ratio_den {
        v *= 1.0 - dictionary_value(*f, x, y, q);
    }
    v
}

/// N(s, chi_0) at numeric (x, y, q).
pub fn n_factor(x: f64, y: f64, q: f64) -> f64 {
    let nd = data::normalization_data();
    let mut v = 1.0;
    for f in &nd.n_factors {
        v /= 1.0 - dictionary_value(*f, x, y, q);
    }
    v
}

pub struct TheoremOutcome {
    pub lhs: Complex64,
    pub rhs: Complex64,
    pub rel_err: f64,
    pub tail_estimate: f64,
}

/// Evaluate both sides of the main local identity for one Satake class:
/// LHS = zeta-ratio * sum over m of ii(m2, m1, m3, m4)(x, y) [m](tau),
/// RHS = L(xy, tensor-1) L(xy^2, tensor-2) / N(s, chi_0).
/// `mutate` perturbs one ii coefficient to exercise detection power.
pub fn theorem_sides(
    tau: &SatakeClass,
    x: &BigRational,
    y: &BigRational,
    n: u32,
    q: f64,
    mutate: bool,
) -> Result<TheoremOutcome, String> {
    let xf = rational_to_f64(x);
    let yf = rational_to_f64(y);
    let mut shells = vec![0.0f64; n as usize + 1];
    let mut sum = Complex64::new(0.0, 0.0);
    let mut first = true;
    for m1 in 0..=n as i64 {
        for m2 in 0..=(n as i64 - m1) {
            for m3 in 0..=(n as i64 - m1 - m2) {
                for m4 in 0..=(n as i64 - m1 - m2 - m3) {
                    if (m1 + m3 + m4) % 2 != 0 {
                        continue;
                    }
                    let mut coeff = unram::ii_eval_f64([m2, m1, m3, m4], xf, yf);
                    if mutate && first {
                        coeff += 0.5;
                        first = false;
                    }
                    let ch = char_eval(
                        (m1 as u32, m2 as u32, m3 as u32, m4 as u32),
                        tau,
                    );
                    let term = ch * coeff;
                    sum += term;
                    shells[(m1 + m2 + m3 + m4) as usize] += term.norm();
                }
            }
        }
    }
    // geometric tail estimate from the last shells
    let last = shells[n as usize].max(1e-300);
    let prev = shells[n as usize - 1].max(1e-300);
    let rho = (last / prev).min(0.95);
    let tail_estimate = last * rho / (1.0 - rho);

    let lhs = sum * zeta_ratio(xf, yf, q);
    let u1 = Complex64::new(xf * yf, 0.0);
    let u2 = Complex64::new(xf * yf * yf, 0.0);
    let l1 = euler_factor(u1, tau, Sl2Factor::First)?;
    let l2 = euler_factor(u2, tau, Sl2Factor::Second)?;
    let rhs = l1 * l2 / n_factor(xf, yf, q);
    let rel_err = (lhs - rhs).norm() / rhs.norm().max(1e-300);
    Ok(TheoremOutcome {
        lhs,
        rhs,
        rel_err,
        tail_estimate,
    })
}

/// The theorem over `samples` random unitary Satake classes plus the
/// trivial class, at rational x = y, truncation n, tolerance tol.
#[allow(clippy::too_many_arguments)]
pub fn verify_theorem(
    samples: usize,
    seed: u64,
    x: &BigRational,
    y: &BigRational,
    n: u32,
    tol: f64,
    q: f64,
    mutate: bool,
) -> CheckReport {
    let mut rb = ReportBuilder::new(
        "theorem",
        "main local identity: lattice sum against the two tensor L-factors",
    )
    .param("samples", samples)
    .param("seed", seed)
    .param("x", x)
    .param("y", y)
    .param("degree", n)
    .param("tol", tol)
    .param("q", q);
    if mutate {
        rb.note("mutation: one ii coefficient perturbed by +0.5".to_string());
    }
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
    let mut worst = 0.0f64;
    let mut failures = 0usize;
    let mut classes = vec![SatakeClass::trivial()];
    for _ in 0..samples {
        classes.push(SatakeClass::random_unitary(&mut rng));
    }
    for (k, tau) in classes.iter().enumerate() {
        match theorem_sides(tau, x, y, n, q, mutate) {
            Ok(out) => {
                let scale = out.rhs.norm().max(1e-300);
                if out.tail_estimate / scale > tol / 10.0 {
                    failures += 1;
                    rb.note(format!(
                        "sample {k}: tail estimate {:.3e} above tol/10",
                        out.tail_estimate / scale
                    ));
                }
                worst = worst.max(out.rel_err);
                if out.rel_err > tol {
                    failures += 1;
                    rb.note(format!(
                        "sample {k}: relative error {:.3e} (alpha {}, beta {})",
                        out.rel_err, tau.alpha, tau.beta
                    ));
                }
            }
            Err(e) => {
                failures += 1;
                rb.note(format!("sample {k}: {e}"));
            }
        }
    }
    rb.note(format!("max relative error {worst:.3e} over {} classes", classes.len()));
    rb.finish(
        if failures == 0 { Status::Pass } else { Status::Fail },
        format!("max relative error {worst:.3e}"),
    )
}

// ---------------------------------------------------------------------------
// Twisting reduction
// ---------------------------------------------------------------------------

/// Twist parameters: representation twists t1 (both SL2 classes scale by
/// q^{-t1}) and t2 (Sp4 scales by q^{-t2}), character exponents r1, r2, r3,
/// residue cardinality q.
#[derive(Clone, Debug)]
pub struct TwistData {
    pub t1: f64,
    pub t2: f64,
    pub r1: f64,
    pub r2: f64,
    pub r3: f64,
    pub q: f64,
}

impl TwistData {
    /// Central-character compatibility: -3 r1 - 3 r2 + 2 r3 + 2 (t1 - t2) = 0.
    pub fn compatible(&self) -> bool {
        (-3.0 * self.r1 - 3.0 * self.r2 + 2.0 * self.r3 + 2.0 * (self.t1 - self.t2)).abs() < 1e-12
    }

    pub fn random(rng: &mut impl Rng, q: f64) -> Self {
        let mut small = || rng.gen_range(-8i32..=8) as f64 / 4.0;
        let (t1, t2, r1, r2) = (small(), small(), small(), small());
        let r3 = (3.0 * r1 + 3.0 * r2) / 2.0 - (t1 - t2);
        TwistData {
            t1,
            t2,
            r1,
            r2,
            r3,
            q,
        }
    }
}

/// L(u, twisted parameters) = L(u - t2 + t1 + r, untwisted), where the
/// twists multiply the Sp4 class by q^{-t2} (entering through the dual) and
/// the SL2 classes by q^{-t1}, and r is the character exponent attached to
/// the factor (r3 - r1 - 2 r2 for the first, r3 - r1 - r2 for the second).
pub fn twist_reduce(td: &TwistData, tau: &SatakeClass, u: f64, seedless_tol: f64) -> CheckReport {
    let mut rb = ReportBuilder::new(
        "twist-reduce",
        "reduction of twisted parameters to the trivial-character case",
    )
    .param("t1", td.t1)
    .param("t2", td.t2)
    .param("q", td.q)
    .param("u", u);
    if !td.compatible() {
        return rb.finish(Status::Fail, "incompatible twist data");
    }
    let q = td.q;
    let mut worst = 0.0f64;
    for (which, r) in [
        (Sl2Factor::First, td.r3 - td.r1 - 2.0 * td.r2),
        (Sl2Factor::Second, td.r3 - td.r1 - td.r2),
    ] {
        // twisted eigenvalues: dual Sp4 class scales by q^{+t2}, SL2 by
        // q^{-t1}, the character by q^{-r}
        let scale = q.powf(td.t2 - td.t1 - r);
        let qu = q.powf(-u);
        let mut twisted = Complex64::new(1.0, 0.0);
        for e in tau.sp4_eigenvalues() {
            for f in tau.sl2_eigenvalues(which) {
                twisted *= 1.0 - e * f * qu * scale;
            }
        }
        // untwisted at the shifted argument
        let qshift = q.powf(-(u - td.t2 + td.t1 + r));
        let mut untwisted = Complex64::new(1.0, 0.0);
        for e in tau.sp4_eigenvalues() {
            for f in tau.sl2_eigenvalues(which) {
                untwisted *= 1.0 - e * f * qshift;
            }
        }
        let err = (1.0 / twisted - 1.0 / untwisted).norm() / (1.0 / untwisted).norm();
        worst = worst.max(err);
    }
    rb.note(format!("max relative mismatch {worst:.3e}"));
    rb.finish(
        if worst <= seedless_tol { Status::Pass } else { Status::Fail },
        format!("max relative mismatch {worst:.3e}"),
    )
}

/// Twist-reduction sweep at a seeded family of random twists (real Satake
/// classes so the real-arithmetic route stays exact).
pub fn verify_twist_reduce(samples: usize, seed: u64, q: f64) -> CheckReport {
    let mut rb = ReportBuilder::new(
        "twist-reduce",
        "reduction of twisted parameters to the trivial-character case",
    )
    .param("samples", samples)
    .param("seed", seed)
    .param("q", q);
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
    let mut worst = 0.0f64;
    let mut failures = 0usize;
    for k in 0..samples {
        let td = TwistData::random(&mut rng, q);
        let tau = SatakeClass {
            alpha: Complex64::new(rng.gen_range(0.5..1.5), 0.0),
            beta: Complex64::new(rng.gen_range(0.5..1.5), 0.0),
            gamma1: Complex64::new(rng.gen_range(0.5..1.5), 0.0),
            gamma2: Complex64::new(rng.gen_range(0.5..1.5), 0.0),
        };
        let u = rng.gen_range(2.0..4.0);
        let r = twist_reduce(&td, &tau, u, 1e-12);
        if r.status != Status::Pass {
            failures += 1;
            rb.note(format!("sample {k} failed: {}", r.residual));
        }
        if let Some(rest) = r.residual.strip_prefix("max relative mismatch ") {
            if let Ok(v) = rest.parse::<f64>() {
                worst = worst.max(v);
            }
        }
    }
    rb.finish(
        if failures == 0 { Status::Pass } else { Status::Fail },
        format!("max relative mismatch {worst:.3e}"),
    )
}
