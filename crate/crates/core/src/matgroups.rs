//! Matrix models of GSO_{2m} and GSp_{2n} with symbolic entries, the
//! parabolic data attached to them (m_P, m_Q, m_Q^1, u_Q), and symbolic
//! verification of the structure laws the rest of the pipeline relies on.
//!
//! Conventions: J_n is the anti-identity. For an n x m matrix g the "other
//! transpose" is tg = J_m (transpose g) J_n, and g* = tg^{-1}. GSO_{2m} is
//! cut out by g J (transpose g) = lambda(g) J; GSp_{2n} uses the
//! anti-diagonal symplectic form with +1 above the anti-diagonal center.

use crate::exactalg::{Coeff, SparsePoly, VarContext, VarKind};
use crate::report::{CheckReport, ReportBuilder, Status};
use num::{BigRational, One, Zero};
use rand::Rng;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum GroupKind {
    Gso,
    Gsp,
}

/// Size and kind of a similitude group; the form matrix is implied.
#[derive(Clone, Copy, Debug)]
pub struct GroupSpec {
    pub size: usize,
    pub kind: GroupKind,
}

/// Rectangular matrix of polynomials over a shared context.
#[derive(Clone, Debug, PartialEq)]
pub struct PolyMatrix {
    pub rows: usize,
    pub cols: usize,
    pub e: Vec<SparsePoly>,
}

impl PolyMatrix {
    pub fn zero(ctx: &VarContext, rows: usize, cols: usize) -> Self {
        PolyMatrix {
            rows,
            cols,
            e: vec![SparsePoly::zero(ctx); rows * cols],
        }
    }

    pub fn identity(ctx: &VarContext, n: usize) -> Self {
        let mut m = Self::zero(ctx, n, n);
        for i in 0..n {
            *m.at_mut(i, i) = SparsePoly::int(ctx, 1);
        }
        m
    }

    pub fn at(&self, r: usize, c: usize) -> &SparsePoly {
        &self.e[r * self.cols + c]
    }

    pub fn at_mut(&mut self, r: usize, c: usize) -> &mut SparsePoly {
        &mut self.e[r * self.cols + c]
    }

    pub fn ctx(&self) -> &VarContext {
        self.e[0].ctx()
    }

    pub fn mul(&self, other: &PolyMatrix) -> PolyMatrix {
        assert_eq!(self.cols, other.rows);
        let ctx = self.ctx();
        let mut out = Self::zero(ctx, self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.at(i, k);
                if a.is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    let b = other.at(k, j);
                    if b.is_zero() {
                        continue;
                    }
                    let prod = a.mul(b).expect("same context");
                    *out.at_mut(i, j) = out.at(i, j).add(&prod).expect("same context");
                }
            }
        }
        out
    }

    pub fn add(&self, other: &PolyMatrix) -> PolyMatrix {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        let mut out = self.clone();
        for (a, b) in out.e.iter_mut().zip(other.e.iter()) {
            *a = a.add(b).expect("same context");
        }
        out
    }

    pub fn sub(&self, other: &PolyMatrix) -> PolyMatrix {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        let mut out = self.clone();
        for (a, b) in out.e.iter_mut().zip(other.e.iter()) {
            *a = a.sub(b).expect("same context");
        }
        out
    }

    pub fn neg(&self) -> PolyMatrix {
        PolyMatrix {
            rows: self.rows,
            cols: self.cols,
            e: self.e.iter().map(|p| p.neg()).collect(),
        }
    }

    pub fn scale(&self, c: &Coeff) -> PolyMatrix {
        PolyMatrix {
            rows: self.rows,
            cols: self.cols,
            e: self.e.iter().map(|p| p.scale(c)).collect(),
        }
    }

    pub fn scale_poly(&self, c: &SparsePoly) -> PolyMatrix {
        PolyMatrix {
            rows: self.rows,
            cols: self.cols,
            e: self.e.iter().map(|p| p.mul(c).expect("same context")).collect(),
        }
    }

    pub fn transpose(&self) -> PolyMatrix {
        let mut out = Self::zero(self.ctx(), self.cols, self.rows);
        for r in 0..self.rows {
            for c in 0..self.cols {
                *out.at_mut(c, r) = self.at(r, c).clone();
            }
        }
        out
    }

    /// tg = J_cols (transpose g) J_rows: reverse both indices of the transpose.
    pub fn other_transpose(&self) -> PolyMatrix {
        let mut out = Self::zero(self.ctx(), self.cols, self.rows);
        for r in 0..self.rows {
            for c in 0..self.cols {
                *out.at_mut(self.cols - 1 - c, self.rows - 1 - r) = self.at(r, c).clone();
            }
        }
        out
    }

    pub fn is_zero(&self) -> bool {
        self.e.iter().all(|p| p.is_zero())
    }

    pub fn num_terms(&self) -> usize {
        self.e.iter().map(|p| p.num_terms()).sum()
    }

    pub fn first_nonzero(&self) -> Option<(usize, usize)> {
        for r in 0..self.rows {
            for c in 0..self.cols {
                if !self.at(r, c).is_zero() {
                    return Some((r + 1, c + 1)); // 1-based, matching reports
                }
            }
        }
        None
    }

    /// Block assignment: copy `block` with top-left corner at (r0, c0).
    pub fn set_block(&mut self, r0: usize, c0: usize, block: &PolyMatrix) {
        for r in 0..block.rows {
            for c in 0..block.cols {
                *self.at_mut(r0 + r, c0 + c) = block.at(r, c).clone();
            }
        }
    }

    /// Exact determinant by fraction-free Gaussian elimination on rational
    /// matrices (entries must be constants).
    pub fn det_rational(&self) -> BigRational {
        assert_eq!(self.rows, self.cols);
        let n = self.rows;
        let mut a: Vec<Vec<BigRational>> = (0..n)
            .map(|r| {
                (0..n)
                    .map(|c| {
                        let p = self.at(r, c);
                        assert!(p.num_terms() <= 1, "det_rational needs constant entries");
                        p.terms()
                            .next()
                            .map(|(m, co)| {
                                assert!(m.grade() == 0, "det_rational needs constant entries");
                                co.clone()
                            })
                            .unwrap_or_else(BigRational::zero)
                    })
                    .collect()
            })
            .collect();
        let mut det = BigRational::one();
        for col in 0..n {
            let Some(piv) = (col..n).find(|&r| !a[r][col].is_zero()) else {
                return BigRational::zero();
            };
            if piv != col {
                a.swap(piv, col);
                det = -det;
            }
            let p = a[col][col].clone();
            det *= &p;
            for r in col + 1..n {
                if a[r][col].is_zero() {
                    continue;
                }
                let f = &a[r][col] / &p;
                for c in col..n {
                    let sub = &f * &a[col][c];
                    a[r][c] = &a[r][c] - &sub;
                }
            }
        }
        det
    }
}

/// Similitude factor of g relative to the split form of its kind, if g lies
/// in the similitude group: g J (transpose g) = lambda J for GSO, and
/// g Jsp (transpose g) = lambda Jsp for GSp.
pub fn similitude(g: &PolyMatrix, kind: GroupKind) -> Option<SparsePoly> {
    let n = g.rows;
    let gj = match kind {
        GroupKind::Gso => {
            // (g J t(g))_{rc} = sum_k g_{rk} g_{c, n-1-k}
            let mut m = PolyMatrix::zero(g.ctx(), n, n);
            for r in 0..n {
                for c in 0..n {
                    let mut acc = SparsePoly::zero(g.ctx());
                    for k in 0..n {
                        let prod = g.at(r, k).mul(g.at(c, n - 1 - k)).expect("ctx");
                        acc = acc.add(&prod).expect("ctx");
                    }
                    *m.at_mut(r, c) = acc;
                }
            }
            m
        }
        GroupKind::Gsp => {
            // Jsp_{k, n-1-k} = +1 for k < n/2, -1 for k >= n/2
            let mut m = PolyMatrix::zero(g.ctx(), n, n);
            for r in 0..n {
                for c in 0..n {
                    let mut acc = SparsePoly::zero(g.ctx());
                    for k in 0..n {
                        let prod = g.at(r, k).mul(g.at(c, n - 1 - k)).expect("ctx");
                        let signed = if k < n / 2 { prod } else { prod.neg() };
                        acc = acc.add(&signed).expect("ctx");
                    }
                    *m.at_mut(r, c) = acc;
                }
            }
            m
        }
    };
    // gj must equal lambda * (form matrix); read lambda off the (0, n-1) slot
    let lambda = match kind {
        GroupKind::Gso => gj.at(0, n - 1).clone(),
        GroupKind::Gsp => gj.at(0, n - 1).clone(),
    };
    for r in 0..n {
        for c in 0..n {
            let want = if r + c == n - 1 {
                let sign_pos = match kind {
                    GroupKind::Gso => true,
                    GroupKind::Gsp => r < n / 2,
                };
                if sign_pos {
                    lambda.clone()
                } else {
                    lambda.neg()
                }
            } else {
                SparsePoly::zero(g.ctx())
            };
            if gj.at(r, c) != &want {
                return None;
            }
        }
    }
    Some(lambda)
}

/// Coordinates of u_Q(X, Y, Z) for GSO_{6n}: X, Y in Mat_{2n x n} and Z in
/// the J-skew space, laid out the way the rank-two case is printed:
/// X row-major x_1..x_{2n^2}, Y reverse row-major y_{2n^2}..y_1, Z free
/// entries z_1.. on the strict upper anti-triangle.
pub struct UqCoords {
    pub n: usize,
    pub x_names: Vec<String>,
    pub y_names: Vec<String>,
    pub z_names: Vec<String>,
}

impl UqCoords {
    pub fn new(n: usize, prefix: &str) -> Self {
        let two_n = 2 * n;
        let mut x_names = Vec::new();
        let mut y_names = Vec::new();
        for r in 0..two_n {
            for c in 0..n {
                x_names.push(format!("{prefix}x{}", r * n + c + 1));
                y_names.push(format!("{prefix}y{}", (two_n - 1 - r) * n + (n - c)));
            }
        }
        let mut z_names = Vec::new();
        let mut k = 0;
        for r in 0..two_n {
            for c in 0..two_n {
                if r + c + 2 <= two_n {
                    k += 1;
                    z_names.push(format!("{prefix}z{k}"));
                }
            }
        }
        UqCoords {
            n,
            x_names,
            y_names,
            z_names,
        }
    }

    pub fn all_names(&self) -> Vec<String> {
        let mut v = self.x_names.clone();
        v.extend(self.y_names.iter().cloned());
        v.extend(self.z_names.iter().cloned());
        v
    }

    /// X as a 2n x n symbolic matrix.
    pub fn x_matrix(&self, ctx: &VarContext) -> PolyMatrix {
        let mut m = PolyMatrix::zero(ctx, 2 * self.n, self.n);
        for r in 0..2 * self.n {
            for c in 0..self.n {
                *m.at_mut(r, c) = SparsePoly::var(ctx, &self.x_names[r * self.n + c]);
            }
        }
        m
    }

    pub fn y_matrix(&self, ctx: &VarContext) -> PolyMatrix {
        let mut m = PolyMatrix::zero(ctx, 2 * self.n, self.n);
        for r in 0..2 * self.n {
            for c in 0..self.n {
                *m.at_mut(r, c) = SparsePoly::var(ctx, &self.y_names[r * self.n + c]);
            }
        }
        m
    }

    /// Z with the skew symmetry tZ = -Z filled in from the free entries.
    pub fn z_matrix(&self, ctx: &VarContext) -> PolyMatrix {
        let two_n = 2 * self.n;
        let mut m = PolyMatrix::zero(ctx, two_n, two_n);
        let mut k = 0;
        for r in 0..two_n {
            for c in 0..two_n {
                if r + c + 2 <= two_n {
                    let v = SparsePoly::var(ctx, &self.z_names[k]);
                    k += 1;
                    *m.at_mut(r, c) = v.clone();
                    *m.at_mut(two_n - 1 - c, two_n - 1 - r) = v.neg();
                }
            }
        }
        m
    }
}

/// The pairing <A, B> = A tB - B tA on Mat_{2n x n}.
pub fn pairing(a: &PolyMatrix, b: &PolyMatrix) -> PolyMatrix {
    a.mul(&b.other_transpose())
        .sub(&b.mul(&a.other_transpose()))
}

/// l(Z) = Tr(Z diag(I_n, 0)) = sum of the first n diagonal entries.
pub fn l_functional(z: &PolyMatrix, n: usize) -> SparsePoly {
    let mut acc = SparsePoly::zero(z.ctx());
    for i in 0..n {
        acc = acc.add(z.at(i, i)).expect("ctx");
    }
    acc
}

/// u_Q(X, Y, Z): block unipotent with corner Z - (X tY + Y tX)/2.
pub fn uq(x: &PolyMatrix, y: &PolyMatrix, z: &PolyMatrix) -> PolyMatrix {
    let ctx = x.ctx();
    let n = x.cols;
    let two_n = 2 * n;
    let size = 6 * n;
    let half = crate::exactalg::ratio(1, 2);
    let sym = x
        .mul(&y.other_transpose())
        .add(&y.mul(&x.other_transpose()));
    let corner = z.sub(&sym.scale(&half));
    let mut m = PolyMatrix::identity(ctx, size);
    m.set_block(0, two_n, x);
    m.set_block(0, two_n + n, y);
    m.set_block(0, two_n + two_n, &corner);
    m.set_block(two_n, two_n + two_n, &y.other_transpose().neg());
    m.set_block(two_n + n, two_n + two_n, &x.other_transpose().neg());
    m
}

/// m_P(g1, g2, lambda) = diag(lambda g1, lambda g2, g2*, g1*) in GSO_{6n};
/// callers supply exact inverses so that g* = tg^{-1} stays polynomial.
pub fn mp(
    g1: &PolyMatrix,
    g1_inv: &PolyMatrix,
    g2: &PolyMatrix,
    g2_inv: &PolyMatrix,
    lambda: &SparsePoly,
) -> PolyMatrix {
    let ctx = g1.ctx();
    let k1 = g1.rows;
    let k2 = g2.rows;
    let size = 2 * (k1 + k2);
    let mut m = PolyMatrix::zero(ctx, size, size);
    m.set_block(0, 0, &g1.scale_poly(lambda));
    m.set_block(k1, k1, &g2.scale_poly(lambda));
    m.set_block(k1 + k2, k1 + k2, &g2_inv.other_transpose());
    m.set_block(k1 + k2 + k2, k1 + k2 + k2, &g1_inv.other_transpose());
    m
}

/// m_Q(g1, g2) = diag(lambda(g2) g1, g2, g1*) for g1 in GL_{2n}, g2 in
/// GSO_{2n} with similitude lambda2.
pub fn mq(
    g1: &PolyMatrix,
    g1_inv: &PolyMatrix,
    g2: &PolyMatrix,
    lambda2: &SparsePoly,
) -> PolyMatrix {
    let ctx = g1.ctx();
    let two_n = g1.rows;
    let size = 3 * two_n;
    let mut m = PolyMatrix::zero(ctx, size, size);
    m.set_block(0, 0, &g1.scale_poly(lambda2));
    m.set_block(two_n, two_n, g2);
    m.set_block(2 * two_n, 2 * two_n, &g1_inv.other_transpose());
    m
}

/// m_Q^1(g1, g2) = m_Q(g1, diag(lambda(g1)^{-1} g2, g2*)) for g1 in
/// GSp_{2n}, g2 in GL_n; lambda1_inv and g2_inv are exact inverses.
pub fn mq1(
    g1: &PolyMatrix,
    g1_inv: &PolyMatrix,
    lambda1_inv: &SparsePoly,
    g2: &PolyMatrix,
    g2_inv: &PolyMatrix,
) -> PolyMatrix {
    let ctx = g1.ctx();
    let two_n = g1.rows;
    let n = two_n / 2;
    let mut inner = PolyMatrix::zero(ctx, two_n, two_n);
    inner.set_block(0, 0, &g2.scale_poly(lambda1_inv));
    inner.set_block(n, n, &g2_inv.other_transpose());
    // similitude of inner GSO_{2n} element: lambda(g1)^{-1} g2 g2*^{-1}... the
    // anti-diagonal pairing gives lambda(inner) = lambda1_inv.
    mq(g1, g1_inv, &inner, lambda1_inv)
}

// ---------------------------------------------------------------------------
// Random exact group elements, as (matrix, inverse) pairs.
// ---------------------------------------------------------------------------

#[derive(Clone, Debug)]
pub struct GroupElt {
    pub m: PolyMatrix,
    pub inv: PolyMatrix,
}

impl GroupElt {
    pub fn identity(ctx: &VarContext, n: usize) -> Self {
        GroupElt {
            m: PolyMatrix::identity(ctx, n),
            inv: PolyMatrix::identity(ctx, n),
        }
    }

    pub fn mul(&self, other: &GroupElt) -> GroupElt {
        GroupElt {
            m: self.m.mul(&other.m),
            inv: other.inv.mul(&self.inv),
        }
    }
}

fn small_rational(rng: &mut impl Rng) -> BigRational {
    let n = rng.gen_range(-4i64..=4);
    let d = rng.gen_range(1i64..=3);
    BigRational::new(n.into(), d.into())
}

fn nonzero_small_rational(rng: &mut impl Rng) -> BigRational {
    loop {
        let r = small_rational(rng);
        if !r.is_zero() {
            return r;
        }
    }
}

/// Elementary matrix I + r E_{ij} with exact inverse.
fn elementary(ctx: &VarContext, n: usize, i: usize, j: usize, r: &BigRational) -> GroupElt {
    let mut m = PolyMatrix::identity(ctx, n);
    let mut inv = PolyMatrix::identity(ctx, n);
    *m.at_mut(i, j) = SparsePoly::constant(ctx, r.clone());
    *inv.at_mut(i, j) = SparsePoly::constant(ctx, -r.clone());
    GroupElt { m, inv }
}

/// Random element of GL_k over Q as a product of elementary matrices and an
/// invertible diagonal.
pub fn random_gl(ctx: &VarContext, k: usize, rng: &mut impl Rng) -> GroupElt {
    let mut g = GroupElt::identity(ctx, k);
    let mut d = PolyMatrix::identity(ctx, k);
    let mut d_inv = PolyMatrix::identity(ctx, k);
    for i in 0..k {
        let v = nonzero_small_rational(rng);
        *d.at_mut(i, i) = SparsePoly::constant(ctx, v.clone());
        *d_inv.at_mut(i, i) = SparsePoly::constant(ctx, BigRational::one() / v);
    }
    g = g.mul(&GroupElt { m: d, inv: d_inv });
    for _ in 0..2 * k {
        let i = rng.gen_range(0..k);
        let mut j = rng.gen_range(0..k);
        while j == i {
            j = rng.gen_range(0..k);
        }
        g = g.mul(&elementary(ctx, k, i, j, &small_rational(rng)));
    }
    g
}

/// Symplectic root one-parameter subgroups for GSp_4 (anti-diagonal form),
/// plus the similitude torus; random products give exact GSp_4 samples.
pub fn random_gsp4(ctx: &VarContext, rng: &mut impl Rng) -> (GroupElt, BigRational) {
    let n = 4;
    let mut g = GroupElt::identity(ctx, n);
    // torus diag(t1, t2, lam/t2, lam/t1)
    let t1 = nonzero_small_rational(rng);
    let t2 = nonzero_small_rational(rng);
    let lam = nonzero_small_rational(rng);
    let diag = [
        t1.clone(),
        t2.clone(),
        &lam / &t2,
        &lam / &t1,
    ];
    let mut d = PolyMatrix::identity(ctx, n);
    let mut d_inv = PolyMatrix::identity(ctx, n);
    for (i, v) in diag.iter().enumerate() {
        *d.at_mut(i, i) = SparsePoly::constant(ctx, v.clone());
        *d_inv.at_mut(i, i) = SparsePoly::constant(ctx, BigRational::one() / v);
    }
    g = g.mul(&GroupElt { m: d, inv: d_inv });
    // unipotent root elements: (i,j,pair) with partner entry sign
    // short roots: I + r(E12 - E34), I + r(E13 + E24) and transposes;
    // long roots: I + r E14, I + r E23 and transposes.
    let pairs: [(usize, usize, Option<(usize, usize, i64)>); 4] = [
        (0, 1, Some((2, 3, -1))),
        (0, 2, Some((1, 3, 1))),
        (0, 3, None),
        (1, 2, None),
    ];
    for _ in 0..6 {
        let (i, j, partner) = pairs[rng.gen_range(0..pairs.len())];
        let r = small_rational(rng);
        let transpose = rng.gen_bool(0.5);
        let mut m = PolyMatrix::identity(ctx, n);
        let mut inv = PolyMatrix::identity(ctx, n);
        let (a, b) = if transpose { (j, i) } else { (i, j) };
        *m.at_mut(a, b) = SparsePoly::constant(ctx, r.clone());
        *inv.at_mut(a, b) = SparsePoly::constant(ctx, -r.clone());
        if let Some((pi, pj, s)) = partner {
            let sr = BigRational::from_integer(s.into()) * &r;
            let (pa, pb) = if transpose { (pj, pi) } else { (pi, pj) };
            *m.at_mut(pa, pb) = SparsePoly::constant(ctx, sr.clone());
            *inv.at_mut(pa, pb) = SparsePoly::constant(ctx, -sr);
        }
        g = g.mul(&GroupElt { m, inv });
    }
    (g, lam)
}

/// Random GSO_{2m} element: products of x_{ij}(r) = I + r E_{ij} - r E_{2m+1-j, 2m+1-i}
/// (1-based mirror), the torus, and a similitude scaling.
pub fn random_gso(ctx: &VarContext, two_m: usize, rng: &mut impl Rng) -> (GroupElt, BigRational) {
    let m = two_m / 2;
    let mut g = GroupElt::identity(ctx, two_m);
    let mut diag: Vec<BigRational> = (0..m).map(|_| nonzero_small_rational(rng)).collect();
    let lam = nonzero_small_rational(rng);
    for i in 0..m {
        diag.push(&lam / &diag[m - 1 - i]);
    }
    let mut d = PolyMatrix::identity(ctx, two_m);
    let mut d_inv = PolyMatrix::identity(ctx, two_m);
    for (i, v) in diag.iter().enumerate() {
        *d.at_mut(i, i) = SparsePoly::constant(ctx, v.clone());
        *d_inv.at_mut(i, i) = SparsePoly::constant(ctx, BigRational::one() / v);
    }
    g = g.mul(&GroupElt { m: d, inv: d_inv });
    for _ in 0..3 * m {
        let i = rng.gen_range(0..two_m);
        let mut j = rng.gen_range(0..two_m);
        while j == i || i + j == two_m - 1 {
            j = rng.gen_range(0..two_m);
        }
        let r = small_rational(rng);
        let mut mm = PolyMatrix::identity(ctx, two_m);
        let mut inv = PolyMatrix::identity(ctx, two_m);
        *mm.at_mut(i, j) = SparsePoly::constant(ctx, r.clone());
        *inv.at_mut(i, j) = SparsePoly::constant(ctx, -r.clone());
        let (mi, mj) = (two_m - 1 - j, two_m - 1 - i);
        *mm.at_mut(mi, mj) = SparsePoly::constant(ctx, -r.clone());
        *inv.at_mut(mi, mj) = SparsePoly::constant(ctx, r.clone());
        g = g.mul(&GroupElt { m: mm, inv });
    }
    (g, lam)
}

// ---------------------------------------------------------------------------
// Verifications
// ---------------------------------------------------------------------------

fn uq_context(n: usize) -> (VarContext, UqCoords, UqCoords) {
    let first = UqCoords::new(n, "");
    let second = UqCoords::new(n, "u_");
    let mut vars: Vec<(String, VarKind)> = Vec::new();
    for name in first.all_names().into_iter().chain(second.all_names()) {
        vars.push((name, VarKind::Ordinary));
    }
    (VarContext::new(vars, None), first, second)
}

/// u_Q(X,Y,Z) u_Q(U,V,W) = u_Q(X+U, Y+V, Z+W - <X,V>/2 + <U,Y>/2), checked
/// as an identity of 6n x 6n symbolic matrices. The composition law carries
/// the factor 1/2 forced by the block form of u_Q; the inverse and
/// commutator identities below are consistent with it.
pub fn verify_uq_group_law(n: usize) -> CheckReport {
    let rb = ReportBuilder::new("uq-group-law", "section 2, u_Q composition law").param("n", n);
    let (ctx, a, b) = uq_context(n);
    let (x, y, z) = (a.x_matrix(&ctx), a.y_matrix(&ctx), a.z_matrix(&ctx));
    let (u, v, w) = (b.x_matrix(&ctx), b.y_matrix(&ctx), b.z_matrix(&ctx));
    let lhs = uq(&x, &y, &z).mul(&uq(&u, &v, &w));
    let half = crate::exactalg::ratio(1, 2);
    let zc = z
        .add(&w)
        .sub(&pairing(&x, &v).scale(&half))
        .add(&pairing(&u, &y).scale(&half));
    let rhs = uq(&x.add(&u), &y.add(&v), &zc);
    let residual = lhs.sub(&rhs);
    let mut rb = rb;
    if let Some((r, c)) = residual.first_nonzero() {
        rb.note(format!("first nonzero residual entry at ({r}, {c})"));
    }
    if similitude(&uq(&x, &y, &z), GroupKind::Gso)
        != Some(SparsePoly::int(&ctx, 1))
    {
        return rb.finish(Status::Fail, "u_Q not in GSO (membership failed)");
    }
    rb.symbolic(residual.num_terms())
}

/// u_Q(X,Y,Z)^{-1} = u_Q(-X,-Y,-Z) and [u_Q(X,0,0), u_Q(0,Y,0)] = u_Q(0,0,<Y,X>).
pub fn verify_commutator_and_inverse(n: usize) -> CheckReport {
    let rb = ReportBuilder::new(
        "uq-inverse-commutator",
        "section 2, u_Q inverse and commutator displays",
    )
    .param("n", n);
    let (ctx, a, b) = uq_context(n);
    let (x, y, z) = (a.x_matrix(&ctx), a.y_matrix(&ctx), a.z_matrix(&ctx));
    let ident = PolyMatrix::identity(&ctx, 6 * n);
    let inv_res = uq(&x, &y, &z)
        .mul(&uq(&x.neg(), &y.neg(), &z.neg()))
        .sub(&ident);
    let v = b.y_matrix(&ctx);
    let zero_xy = PolyMatrix::zero(&ctx, 2 * n, n);
    let zero_z = PolyMatrix::zero(&ctx, 2 * n, 2 * n);
    let g = uq(&x, &zero_xy, &zero_z);
    let h = uq(&zero_xy, &v, &zero_z);
    let lhs = g
        .mul(&h)
        .mul(&uq(&x.neg(), &zero_xy, &zero_z))
        .mul(&uq(&zero_xy, &v.neg(), &zero_z));
    let rhs = uq(&zero_xy, &zero_xy, &pairing(&v, &x));
    let comm_res = lhs.sub(&rhs);
    rb.symbolic(inv_res.num_terms() + comm_res.num_terms())
}

/// The 2n^2 x 2n^2 matrix of X -> g1^{-1} X g2 in the row-unwinding basis.
pub fn induced_matrix(
    ctx: &VarContext,
    g1_inv: &PolyMatrix,
    g2: &PolyMatrix,
) -> PolyMatrix {
    let two_n = g1_inv.rows;
    let n = g2.rows;
    let dim = two_n * n;
    let mut out = PolyMatrix::zero(ctx, dim, dim);
    for r in 0..two_n {
        for c in 0..n {
            // image of basis matrix E_{rc}: g1^{-1} E_{rc} g2 has (i,j) entry
            // g1_inv[i][r] * g2[c][j]
            let src = r * n + c;
            for i in 0..two_n {
                for j in 0..n {
                    let v = g1_inv.at(i, r).mul(g2.at(c, j)).expect("ctx");
                    *out.at_mut(src, i * n + j) = out.at(src, i * n + j).add(&v).expect("ctx");
                }
            }
        }
    }
    out
}

/// det of the induced action of m_Q^1(g1, g2) equals
/// det(g1)^{-n} det(g2)^{2n} = lambda(g1)^{-n^2} det(g2)^{2n}, on exact
/// random samples; also spot-checks the defining conjugation identity.
pub fn verify_det_mq1(n: usize, samples: usize, seed: u64) -> CheckReport {
    use rand::SeedableRng;
    let mut rb = ReportBuilder::new(
        "det-mq1",
        "section 2, determinant of the induced Siegel-Levi action",
    )
    .param("n", n)
    .param("samples", samples)
    .param("seed", seed);
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
    let ctx = VarContext::new(vec![], None);
    assert_eq!(n, 2, "exercised at n = 2");
    let mut failures = 0usize;
    for k in 0..samples {
        let (g1, lam1) = random_gsp4(&ctx, &mut rng);
        let g2 = random_gl(&ctx, n, &mut rng);
        let j = induced_matrix(&ctx, &g1.inv, &g2.m);
        let det_j = j.det_rational();
        let det_g1 = g1.m.det_rational();
        let det_g2 = g2.m.det_rational();
        let want = BigRational::one() / num::pow::pow(det_g1.clone(), n)
            * num::pow::pow(det_g2.clone(), 2 * n);
        let want_lam = BigRational::one() / num::pow::pow(lam1.clone(), n * n)
            * num::pow::pow(det_g2, 2 * n);
        if det_j != want || det_j != want_lam {
            failures += 1;
            rb.note(format!("sample {k}: determinant mismatch"));
        }
        if k == 0 {
            // defining identity: m_Q^1(g1,g2) u_Q(X,0,0) m_Q^1(g1^{-1},g2^{-1})
            //   = u_Q(g1 X g2^{-1}, 0, 0) with symbolic X
            let coords = UqCoords::new(n, "");
            let vars: Vec<(String, VarKind)> = coords
                .all_names()
                .into_iter()
                .map(|v| (v, VarKind::Ordinary))
                .collect();
            let xctx = VarContext::new(vars, None);
            let embed = |g: &PolyMatrix| {
                let mut out = PolyMatrix::zero(&xctx, g.rows, g.cols);
                for r in 0..g.rows {
                    for c in 0..g.cols {
                        let p = g.at(r, c);
                        if !p.is_zero() {
                            let c0 = p.terms().next().expect("const").1.clone();
                            *out.at_mut(r, c) = SparsePoly::constant(&xctx, c0);
                        }
                    }
                }
                out
            };
            let lam1_inv_p = SparsePoly::constant(&xctx, BigRational::one() / &lam1);
            let lam1_p = SparsePoly::constant(&xctx, lam1.clone());
            let m1 = mq1(
                &embed(&g1.m),
                &embed(&g1.inv),
                &lam1_inv_p,
                &embed(&g2.m),
                &embed(&g2.inv),
            );
            let m1_inv = mq1(
                &embed(&g1.inv),
                &embed(&g1.m),
                &lam1_p,
                &embed(&g2.inv),
                &embed(&g2.m),
            );
            let x = coords.x_matrix(&xctx);
            let zero_xy = PolyMatrix::zero(&xctx, 2 * n, n);
            let zero_z = PolyMatrix::zero(&xctx, 2 * n, 2 * n);
            let lhs = m1.mul(&uq(&x, &zero_xy, &zero_z)).mul(&m1_inv);
            let image = embed(&g1.m).mul(&x).mul(&embed(&g2.inv));
            let rhs = uq(&image, &zero_xy, &zero_z);
            if !lhs.sub(&rhs).is_zero() {
                failures += 1;
                rb.note("conjugation identity failed on symbolic X".to_string());
            }
        }
    }
    let status = if failures == 0 { Status::Pass } else { Status::Fail };
    rb.finish(status, format!("mismatching samples: {failures}"))
}

// ---------------------------------------------------------------------------
// Torus weights of the u_Q coordinates (n = 2)
// ---------------------------------------------------------------------------

/// Rational character of the rank-four torus in coordinates t1..t4.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WeightVector(pub [i16; 4]);

impl WeightVector {
    pub fn monomial(&self, ctx: &VarContext) -> SparsePoly {
        SparsePoly::mono(
            ctx,
            &[
                ("t1", self.0[0]),
                ("t2", self.0[1]),
                ("t3", self.0[2]),
                ("t4", self.0[3]),
            ],
        )
    }

    pub fn add(&self, o: &WeightVector) -> WeightVector {
        WeightVector([
            self.0[0] + o.0[0],
            self.0[1] + o.0[1],
            self.0[2] + o.0[2],
            self.0[3] + o.0[3],
        ])
    }

    pub fn neg(&self) -> WeightVector {
        WeightVector([-self.0[0], -self.0[1], -self.0[2], -self.0[3]])
    }
}

/// The rank-four torus inside GSO_12 that maps isomorphically onto Z\T:
/// diag(t1 t2, t2, 1, 1/t1, t3 t4, t4, t2/t4, t2/(t3 t4), t1 t2, t2, 1, 1/t1).
pub fn new_torus_exponents() -> [[i16; 4]; 12] {
    [
        [1, 1, 0, 0],
        [0, 1, 0, 0],
        [0, 0, 0, 0],
        [-1, 0, 0, 0],
        [0, 0, 1, 1],
        [0, 0, 0, 1],
        [0, 1, 0, -1],
        [0, 1, -1, -1],
        [1, 1, 0, 0],
        [0, 1, 0, 0],
        [0, 0, 0, 0],
        [-1, 0, 0, 0],
    ]
}

pub struct CoordinateWeights {
    /// Conjugation weight of each coordinate, in declaration order
    /// x1..x8, y1..y8, z1..z6.
    pub weights: std::collections::BTreeMap<String, WeightVector>,
    /// beta_i keyed by index in {1, 2, 3, 4, 6}.
    pub betas: std::collections::BTreeMap<usize, WeightVector>,
}

/// Conjugate u_Q symbolically by the rank-four torus and read off the weight
/// of every coordinate; identify beta_i as minus the weight of coordinate
/// y_i (equivalently, through the oscillator slot characters of the pair
/// (g1, g3) carved out of the torus) and assert the four stated relations
/// against the simple roots restricted to this torus.
pub fn coordinate_weights() -> (CoordinateWeights, CheckReport) {
    let n = 2usize;
    let mut rb = ReportBuilder::new(
        "coord-weights",
        "section 6, beta-weight relations and oscillator slot characters",
    );
    let coords = UqCoords::new(n, "");
    let mut vars: Vec<(String, VarKind)> = coords
        .all_names()
        .into_iter()
        .map(|v| (v, VarKind::Ordinary))
        .collect();
    for t in ["t1", "t2", "t3", "t4"] {
        vars.push((t.to_string(), VarKind::Laurent));
    }
    let ctx = VarContext::new(vars, None);
    let torus = new_torus_exponents();

    // t u_Q t^{-1}: entry (i,j) scales by d_i / d_j
    let u = uq(
        &coords.x_matrix(&ctx),
        &coords.y_matrix(&ctx),
        &coords.z_matrix(&ctx),
    );
    let size = 6 * n;
    let mut conj = PolyMatrix::zero(&ctx, size, size);
    for i in 0..size {
        for j in 0..size {
            let mut shift = [0i16; 4];
            for k in 0..4 {
                shift[k] = torus[i][k] - torus[j][k];
            }
            let m = SparsePoly::mono(
                &ctx,
                &[
                    ("t1", shift[0]),
                    ("t2", shift[1]),
                    ("t3", shift[2]),
                    ("t4", shift[3]),
                ],
            );
            *conj.at_mut(i, j) = u.at(i, j).mul(&m).expect("ctx");
        }
    }
    // read the weight of each coordinate off its defining slot
    let mut weights = std::collections::BTreeMap::new();
    let slot_weight = |i: usize, j: usize| {
        let mut w = [0i16; 4];
        for k in 0..4 {
            w[k] = torus[i][k] - torus[j][k];
        }
        WeightVector(w)
    };
    for r in 0..2 * n {
        for c in 0..n {
            weights.insert(
                coords.x_names[r * n + c].clone(),
                slot_weight(r, 2 * n + c),
            );
            weights.insert(
                coords.y_names[r * n + c].clone(),
                slot_weight(r, 3 * n + c),
            );
        }
    }
    {
        let mut k = 0;
        for r in 0..2 * n {
            for c in 0..2 * n {
                if r + c + 2 <= 2 * n {
                    weights.insert(
                        coords.z_names[k].clone(),
                        slot_weight(r, 4 * n + c),
                    );
                    k += 1;
                }
            }
        }
    }
    // sanity: symbolic conjugation agrees with the slot reading
    let rebuilt = {
        let mut x = PolyMatrix::zero(&ctx, 2 * n, n);
        let mut y = PolyMatrix::zero(&ctx, 2 * n, n);
        for r in 0..2 * n {
            for c in 0..n {
                let xn = &coords.x_names[r * n + c];
                let yn = &coords.y_names[r * n + c];
                *x.at_mut(r, c) = SparsePoly::var(&ctx, xn)
                    .mul(&weights[xn].monomial(&ctx))
                    .expect("ctx");
                *y.at_mut(r, c) = SparsePoly::var(&ctx, yn)
                    .mul(&weights[yn].monomial(&ctx))
                    .expect("ctx");
            }
        }
        let mut z = PolyMatrix::zero(&ctx, 2 * n, 2 * n);
        let mut k = 0;
        for r in 0..2 * n {
            for c in 0..2 * n {
                if r + c + 2 <= 2 * n {
                    let zn = &coords.z_names[k];
                    let v = SparsePoly::var(&ctx, zn)
                        .mul(&weights[zn].monomial(&ctx))
                        .expect("ctx");
                    k += 1;
                    *z.at_mut(r, c) = v.clone();
                    *z.at_mut(2 * n - 1 - c, 2 * n - 1 - r) = v.neg();
                }
            }
        }
        uq(&x, &y, &z)
    };
    let conj_residual = conj.sub(&rebuilt).num_terms();

    // beta_i := -(weight of y_i); the oscillator route must agree: the slot
    // of y_i in the 4x2 model scales by g3_{cc}/g1_{rr} with
    // g1 = diag(t1, 1, 1/t2, 1/(t1 t2)), g3 = diag(t3 t4 / t2, t4 / t2).
    let mut betas = std::collections::BTreeMap::new();
    for i in [1usize, 2, 3, 4, 6] {
        let name = format!("y{i}");
        betas.insert(i, weights[&name].neg());
    }
    let g1_diag: [[i16; 4]; 4] = [[1, 0, 0, 0], [0, 0, 0, 0], [0, -1, 0, 0], [-1, -1, 0, 0]];
    let g3_diag: [[i16; 4]; 2] = [[0, -1, 1, 1], [0, -1, 0, 1]];
    // The projection to the 4x2 oscillator model places y1, y2, y4 and the
    // shifted x3, x6 at fixed slots; each slot scales by g3_{cc}/g1_{rr} and
    // beta is minus that slot character (the x-slots enter through a Fourier
    // transform, which flips their scaling to match).
    let slots: [(usize, (usize, usize)); 5] =
        [(1, (0, 0)), (2, (0, 1)), (3, (1, 0)), (4, (1, 1)), (6, (2, 1))];
    let mut osc_mismatch = 0usize;
    for (idx, (r, c)) in slots {
        let mut w = [0i16; 4];
        for k in 0..4 {
            w[k] = g3_diag[c][k] - g1_diag[r][k];
        }
        if WeightVector(w).neg() != betas[&idx] {
            osc_mismatch += 1;
            rb.note(format!("oscillator route disagrees at beta{idx}"));
        }
    }

    // simple roots restricted to this torus
    let alpha = |i: usize| -> WeightVector {
        let t = new_torus_exponents();
        let (a, b) = match i {
            6 => (4, 6),
            i => (i - 1, i),
        };
        let mut w = [0i16; 4];
        for k in 0..4 {
            w[k] = t[a][k] - t[b][k];
        }
        WeightVector(w)
    };
    let mut rel_failures = 0usize;
    let relations: [(WeightVector, WeightVector, &str); 4] = [
        (
            betas[&1].add(&betas[&3].neg()),
            alpha(1),
            "beta1 - beta3 = alpha1",
        ),
        (
            betas[&4].add(&betas[&3].neg()),
            alpha(5),
            "beta4 - beta3 = alpha5",
        ),
        (
            betas[&4].add(&betas[&6].neg()),
            alpha(2),
            "beta4 - beta6 = alpha2",
        ),
        (
            betas[&3].neg().add(&betas[&6].neg()),
            alpha(6),
            "-beta3 - beta6 = alpha6 on T",
        ),
    ];
    for (got, want, label) in &relations {
        if got != want {
            rel_failures += 1;
            rb.note(format!("relation failed: {label}"));
        } else {
            rb.note(format!("ok: {label}"));
        }
    }
    // psi_l-relevant coordinates z1, z5 must have trivial weight on T
    let z_trivial = weights["z1"] == WeightVector([0; 4]) && weights["z5"] == WeightVector([0; 4]);
    if !z_trivial {
        rb.note("z1/z5 weights do not restrict trivially".to_string());
    }
    let total = conj_residual + osc_mismatch + rel_failures + usize::from(!z_trivial);
    let report = rb.symbolic(total);
    (CoordinateWeights { weights, betas }, report)
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;

    #[test]
    fn uq_zero_is_identity() {
        let (ctx, a, _) = uq_context(2);
        let zero_xy = PolyMatrix::zero(&ctx, 4, 2);
        let zero_z = PolyMatrix::zero(&ctx, 4, 4);
        let u = uq(&zero_xy, &zero_xy, &zero_z);
        assert_eq!(u, PolyMatrix::identity(&ctx, 12));
        let _ = a;
    }

    #[test]
    fn group_law_n2_and_n3() {
        assert_eq!(verify_uq_group_law(2).status, Status::Pass);
        assert_eq!(verify_uq_group_law(3).status, Status::Pass);
    }

    #[test]
    fn inverse_and_commutator() {
        assert_eq!(verify_commutator_and_inverse(2).status, Status::Pass);
        assert_eq!(verify_commutator_and_inverse(3).status, Status::Pass);
    }

    #[test]
    fn random_groups_satisfy_membership() {
        let ctx = VarContext::new(vec![], None);
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(5);
        for _ in 0..5 {
            let (g, lam) = random_gso(&ctx, 4, &mut rng);
            let s = similitude(&g.m, GroupKind::Gso).expect("in GSO_4");
            assert_eq!(s, SparsePoly::constant(&ctx, lam));
            let (g, lam) = random_gsp4(&ctx, &mut rng);
            let s = similitude(&g.m, GroupKind::Gsp).expect("in GSp_4");
            assert_eq!(s, SparsePoly::constant(&ctx, lam));
        }
    }

    #[test]
    fn mp_mq_membership_symbolic_lambda() {
        // m_P(I, I, 1) is the identity; random m_P/m_Q land in GSO_12 and
        // the m_Q similitude equals lambda(g2)
        let ctx = VarContext::new(vec![], None);
        let id3 = PolyMatrix::identity(&ctx, 3);
        let one = SparsePoly::int(&ctx, 1);
        let m = mp(&id3, &id3, &id3, &id3, &one);
        assert_eq!(m, PolyMatrix::identity(&ctx, 12));
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(9);
        for _ in 0..3 {
            let g1 = random_gl(&ctx, 3, &mut rng);
            let g2 = random_gl(&ctx, 3, &mut rng);
            let lam = SparsePoly::constant(&ctx, nonzero_small_rational(&mut rng));
            let m = mp(&g1.m, &g1.inv, &g2.m, &g2.inv, &lam);
            let s = similitude(&m, GroupKind::Gso).expect("m_P lands in GSO_12");
            assert_eq!(s, lam);

            let h1 = random_gl(&ctx, 4, &mut rng);
            let (h2, lam2) = random_gso(&ctx, 4, &mut rng);
            let lam2p = SparsePoly::constant(&ctx, lam2);
            let m = mq(&h1.m, &h1.inv, &h2.m, &lam2p);
            let s = similitude(&m, GroupKind::Gso).expect("m_Q lands in GSO_12");
            assert_eq!(s, lam2p);
        }
    }

    #[test]
    fn det_mq1_samples() {
        let r = verify_det_mq1(2, 20, 42);
        assert_eq!(r.status, Status::Pass, "{:?}", r.notes);
    }

    #[test]
    fn det_mq1_diag_example() {
        // g1 = I, g2 = diag(2,1): det j = det(g1)^{-2} * det(g2)^4 = 16
        let ctx = VarContext::new(vec![], None);
        let id = PolyMatrix::identity(&ctx, 4);
        let mut g2 = PolyMatrix::identity(&ctx, 2);
        *g2.at_mut(0, 0) = SparsePoly::int(&ctx, 2);
        let j = induced_matrix(&ctx, &id, &g2);
        assert_eq!(j.det_rational(), BigRational::from_integer(16.into()));
    }

    #[test]
    fn l_functional_on_commutators() {
        // the X- and Y-Lagrangian families are isotropic for l([.,.]);
        // a crossed pair is generically not (the pairing is nondegenerate)
        let (ctx, a, b) = uq_context(2);
        let x = a.x_matrix(&ctx);
        let u = b.x_matrix(&ctx);
        let y = a.y_matrix(&ctx);
        let v = b.y_matrix(&ctx);
        // [u(X,0,*), u(U,0,*)] has Z-part <U,0> - <X,0> = 0
        assert!(pairing(&x, &PolyMatrix::zero(&ctx, 4, 2))
            .sub(&pairing(&u, &PolyMatrix::zero(&ctx, 4, 2)))
            .is_zero());
        // same for the Y-family
        assert!(pairing(&PolyMatrix::zero(&ctx, 4, 2), &y)
            .sub(&pairing(&PolyMatrix::zero(&ctx, 4, 2), &v))
            .is_zero());
        // crossed: l(<Y, X>) is not identically zero
        let z = pairing(&y, &x);
        assert!(!l_functional(&z, 2).is_zero());
    }

    #[test]
    fn coordinate_weight_relations() {
        let (cw, report) = coordinate_weights();
        assert_eq!(report.status, Status::Pass, "{:?}", report.notes);
        // beta1 = t1 t2 / (t3 t4), beta4 = t2 / t4 in additive form
        assert_eq!(cw.betas[&1], WeightVector([1, 1, -1, -1]));
        assert_eq!(cw.betas[&4], WeightVector([0, 1, 0, -1]));
        // at t = identity all weights evaluate to 1 (zero exponent vectors sum)
        let total: i16 = cw
            .weights
            .values()
            .map(|w| w.0.iter().map(|e| e.abs()).sum::<i16>())
            .sum();
        assert!(total > 0, "weights are not all trivial as characters");
    }
}
