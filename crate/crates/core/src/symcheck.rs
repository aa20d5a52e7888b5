//! Exact operator algebra on Laurent polynomials in `(r, z)`.
//!
//! The separated equations for the cone's mixed modes reduce to identities
//! for `Δ̂ = −∂zz − ∂rr − n r⁻¹∂r` and the rotation field `V = r∂z − z∂r`.
//! Here they are checked as exact polynomial identities: the commutators,
//! the harmonic families `ker(Δ̂ + λr⁻²)` on homogeneous spans, and the
//! three auxiliary-function constructions built on top of them.

use alloc::collections::BTreeMap;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;
use core::ops::{Add, Mul, Neg, Sub};

use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::exactreal::{int, Rational};

/// Finite sum of `c·r^p·z^q` with `p ∈ ℤ`, `q ∈ ℕ₀`, no zero coefficients.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct LaurentPoly2 {
    terms: BTreeMap<(i64, u64), Rational>,
}

impl LaurentPoly2 {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn monomial(p: i64, q: u64, c: Rational) -> Self {
        let mut out = Self::zero();
        out.add_term(p, q, c);
        out
    }

    pub fn constant(c: Rational) -> Self {
        Self::monomial(0, 0, c)
    }

    pub fn r() -> Self {
        Self::monomial(1, 0, int(1))
    }

    pub fn z() -> Self {
        Self::monomial(0, 1, int(1))
    }

    pub fn from_terms<I: IntoIterator<Item = ((i64, u64), Rational)>>(terms: I) -> Self {
        let mut out = Self::zero();
        for ((p, q), c) in terms {
            out.add_term(p, q, c);
        }
        out
    }

    pub fn terms(&self) -> impl Iterator<Item = ((i64, u64), &Rational)> + '_ {
        self.terms.iter().map(|(k, v)| (*k, v))
    }

    pub fn coeff(&self, p: i64, q: u64) -> Rational {
        self.terms.get(&(p, q)).cloned().unwrap_or_else(Rational::zero)
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn add_term(&mut self, p: i64, q: u64, c: Rational) {
        if c.is_zero() {
            return;
        }
        let slot = self.terms.entry((p, q)).or_insert_with(Rational::zero);
        *slot += c;
        if slot.is_zero() {
            self.terms.remove(&(p, q));
        }
    }

    pub fn scale(&self, c: &Rational) -> Self {
        if c.is_zero() {
            return Self::zero();
        }
        LaurentPoly2 {
            terms: self.terms.iter().map(|(k, v)| (*k, v * c)).collect(),
        }
    }

    /// Multiplication by `r^p z^q`.
    pub fn mul_monomial(&self, p: i64, q: u64) -> Self {
        LaurentPoly2 {
            terms: self
                .terms
                .iter()
                .map(|(&(a, b), v)| ((a + p, b + q), v.clone()))
                .collect(),
        }
    }

    pub fn d_r(&self) -> Self {
        Self::from_terms(
            self.terms
                .iter()
                .map(|(&(p, q), c)| ((p - 1, q), c * int(p))),
        )
    }

    pub fn d_z(&self) -> Self {
        Self::from_terms(
            self.terms
                .iter()
                .filter(|(&(_, q), _)| q > 0)
                .map(|(&(p, q), c)| ((p, q - 1), c * int(q as i64))),
        )
    }

    /// `Δ̂f = −∂zz f − ∂rr f − n r⁻¹∂r f`.
    pub fn hat_laplacian(&self, n: u32) -> Self {
        let n = n as i64;
        let mut out = Self::zero();
        for (&(p, q), c) in &self.terms {
            if q >= 2 {
                out.add_term(p, q - 2, -(c * int((q * (q - 1)) as i64)));
            }
            out.add_term(p - 2, q, -(c * int(p * (p - 1 + n))));
        }
        out
    }

    /// `∂_V f = r∂z f − z∂r f`.
    pub fn v_field(&self) -> Self {
        &self.d_z().mul_monomial(1, 0) - &self.d_r().mul_monomial(0, 1)
    }

    /// `r^{−2}·f`, the potential term of the reduced operators.
    pub fn over_r2(&self) -> Self {
        self.mul_monomial(-2, 0)
    }

    /// `−(z/r)·f`.
    pub fn twist(&self) -> Self {
        -&self.mul_monomial(-1, 1)
    }

    pub fn apply(&self, op: Operator) -> Self {
        match op {
            Operator::Dr => self.d_r(),
            Operator::Dz => self.d_z(),
            Operator::HatLaplacian(n) => self.hat_laplacian(n),
            Operator::VField => self.v_field(),
            Operator::MulMonomial(p, q) => self.mul_monomial(p, q),
        }
    }
}

impl Add for &LaurentPoly2 {
    type Output = LaurentPoly2;
    fn add(self, rhs: &LaurentPoly2) -> LaurentPoly2 {
        let mut out = self.clone();
        for (&(p, q), c) in &rhs.terms {
            out.add_term(p, q, c.clone());
        }
        out
    }
}

impl Sub for &LaurentPoly2 {
    type Output = LaurentPoly2;
    fn sub(self, rhs: &LaurentPoly2) -> LaurentPoly2 {
        let mut out = self.clone();
        for (&(p, q), c) in &rhs.terms {
            out.add_term(p, q, -c.clone());
        }
        out
    }
}

impl Neg for &LaurentPoly2 {
    type Output = LaurentPoly2;
    fn neg(self) -> LaurentPoly2 {
        self.scale(&int(-1))
    }
}

impl Mul for &LaurentPoly2 {
    type Output = LaurentPoly2;
    fn mul(self, rhs: &LaurentPoly2) -> LaurentPoly2 {
        let mut out = LaurentPoly2::zero();
        for (&(p, q), a) in &self.terms {
            for (&(s, t), b) in &rhs.terms {
                out.add_term(p + s, q + t, a * b);
            }
        }
        out
    }
}

impl fmt::Display for LaurentPoly2 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        // highest total degree first
        let mut items: Vec<_> = self.terms.iter().collect();
        items.sort_by_key(|(m, _)| core::cmp::Reverse((m.0 + m.1 as i64, m.1)));
        for (i, (&(p, q), c)) in items.into_iter().enumerate() {
            let neg = c.is_negative();
            let abs = c.abs();
            match (i, neg) {
                (0, true) => write!(f, "-")?,
                (0, false) => {}
                (_, true) => write!(f, " - ")?,
                (_, false) => write!(f, " + ")?,
            }
            let bare = p == 0 && q == 0;
            if !abs.is_one() || bare {
                write!(f, "{abs}")?;
                if !bare {
                    write!(f, "*")?;
                }
            }
            let mut factors = Vec::new();
            match p {
                0 => {}
                1 => factors.push(String::from("r")),
                _ => factors.push(alloc::format!("r^{p}")),
            }
            match q {
                0 => {}
                1 => factors.push(String::from("z")),
                _ => factors.push(alloc::format!("z^{q}")),
            }
            write!(f, "{}", factors.join("*"))?;
        }
        Ok(())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Operator {
    Dr,
    Dz,
    HatLaplacian(u32),
    VField,
    MulMonomial(i64, u64),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum SymError {
    IdentityFailed {
        identity: String,
        context: String,
        residual: LaurentPoly2,
    },
    DimensionMismatch {
        n: u32,
        k: u64,
        j: u64,
        expected: usize,
        found: usize,
    },
    DecompositionFailed {
        n: u32,
        k: u64,
        j: u64,
        dim: usize,
        rank: usize,
    },
    InvalidParameters(String),
}

impl fmt::Display for SymError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SymError::IdentityFailed {
                identity,
                context,
                residual,
            } => write!(f, "identity {identity} failed ({context}): residual {residual}"),
            SymError::DimensionMismatch {
                n,
                k,
                j,
                expected,
                found,
            } => write!(
                f,
                "harmonic family n={n} k={k} j={j}: kernel dimension {found}, expected {expected}"
            ),
            SymError::DecompositionFailed { n, k, j, dim, rank } => write!(
                f,
                "decomposition n={n} k={k} j={j}: rank {rank} of {dim}"
            ),
            SymError::InvalidParameters(m) => write!(f, "invalid parameters: {m}"),
        }
    }
}

impl core::error::Error for SymError {}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IdentityResult {
    pub identity: String,
    pub context: String,
    pub residual: LaurentPoly2,
}

impl IdentityResult {
    pub fn holds(&self) -> bool {
        self.residual.is_zero()
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct SymReport {
    pub results: Vec<IdentityResult>,
}

impl SymReport {
    pub fn all_hold(&self) -> bool {
        self.results.iter().all(IdentityResult::holds)
    }

    /// `Ok(self)` if every residual vanishes, else the first failure.
    pub fn into_result(self) -> Result<SymReport, SymError> {
        match self.results.iter().find(|r| !r.holds()) {
            Some(r) => Err(SymError::IdentityFailed {
                identity: r.identity.clone(),
                context: r.context.clone(),
                residual: r.residual.clone(),
            }),
            None => Ok(self),
        }
    }

    fn push(&mut self, identity: &str, context: &str, residual: LaurentPoly2) {
        self.results.push(IdentityResult {
            identity: identity.into(),
            context: context.into(),
            residual,
        });
    }
}

/// Rectangular box of monomials `r^p z^q`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct DegreeBox {
    pub p_min: i64,
    pub p_max: i64,
    pub q_max: u64,
}

impl DegreeBox {
    pub fn monomials(&self) -> impl Iterator<Item = (i64, u64)> + '_ {
        (self.p_min..=self.p_max).flat_map(move |p| (0..=self.q_max).map(move |q| (p, q)))
    }
}

/// Commutator and product-rule identities of `V` and `Δ̂` on every monomial
/// of the box. `laplacian_dim` is the `n` used inside the left-hand sides;
/// pass something other than `n` to run a negative control.
pub fn commutator_report(n: u32, laplacian_dim: u32, bx: DegreeBox) -> SymReport {
    let mut report = SymReport::default();
    let nn = int(n as i64);
    let z_over_r = LaurentPoly2::monomial(-1, 1, int(1));
    for (p, q) in bx.monomials() {
        let f = LaurentPoly2::monomial(p, q, int(1));
        let ctx = alloc::format!("r^{p} z^{q}");
        let lap = |g: &LaurentPoly2| g.hat_laplacian(laplacian_dim);
        let vf = f.v_field();

        let lhs = &lap(&f).v_field() - &lap(&vf);
        report.push("[V, Δ̂] = n r⁻² V", &ctx, &lhs - &vf.over_r2().scale(&nn));

        let lhs = &f.over_r2().v_field() - &vf.over_r2();
        report.push("[V, r⁻²] = 2z r⁻³", &ctx, &lhs - &f.mul_monomial(-3, 1).scale(&int(2)));

        let lhs = &(&z_over_r * &f).v_field() - &(&z_over_r * &vf);
        let rhs = &f + &f.mul_monomial(-2, 2);
        report.push("[V, z r⁻¹] = 1 + z² r⁻²", &ctx, &lhs - &rhs);

        let g = f.twist();
        let rhs = &(&lap(&f).twist() + &g.over_r2().scale(&int(n as i64 - 2)))
            + &vf.over_r2().scale(&int(2));
        report.push(
            "Δ̂(−z r⁻¹ f) = −z r⁻¹ Δ̂f + (n−2) r⁻² g + 2 r⁻² V f",
            &ctx,
            &lap(&g) - &rhs,
        );

        let lhs = &f.d_z().mul_monomial(1, 0) + &g.d_r().mul_monomial(1, 0);
        report.push("r∂z f + r∂r g = V f − g", &ctx, &lhs - &(&vf - &g));
    }
    report
}

pub fn check_commutators(n: u32, bx: DegreeBox) -> Result<SymReport, SymError> {
    commutator_report(n, n, bx).into_result()
}

/// `(Δ̂ + λ r⁻²) f`.
pub fn reduced_operator(n: u32, lambda: &Rational, f: &LaurentPoly2) -> LaurentPoly2 {
    &f.hat_laplacian(n) + &f.over_r2().scale(lambda)
}

pub fn sphere_eigenvalue(n: u32, k: u64) -> Rational {
    int((k * (k + n as u64 - 1)) as i64)
}

/// Exponents `(k + 2l, j − 2l)` spanning the homogeneous family `P_{k,j}`.
pub fn family_span(k: u64, j: u64) -> Vec<(i64, u64)> {
    (0..=j / 2).map(|l| ((k + 2 * l) as i64, j - 2 * l)).collect()
}

/// The one-dimensional kernel of `Δ̂ + k(k+n−1) r⁻²` on `P_{k,j}`, scaled to
/// a primitive integer polynomial whose `r^k z^j` coefficient is positive.
pub fn build_harmonic_family(n: u32, k: u64, j: u64) -> Result<LaurentPoly2, SymError> {
    if n < 1 {
        return Err(SymError::InvalidParameters("n must be at least 1".into()));
    }
    let lambda = sphere_eigenvalue(n, k);
    let span = family_span(k, j);
    let images: Vec<LaurentPoly2> = span
        .iter()
        .map(|&(p, q)| reduced_operator(n, &lambda, &LaurentPoly2::monomial(p, q, int(1))))
        .collect();
    let kernel = kernel_of_images(&images);
    if kernel.len() != 1 {
        return Err(SymError::DimensionMismatch {
            n,
            k,
            j,
            expected: 1,
            found: kernel.len(),
        });
    }
    let poly = LaurentPoly2::from_terms(
        span.iter()
            .zip(&kernel[0])
            .map(|(&(p, q), c)| ((p, q), c.clone())),
    );
    Ok(primitive(&poly))
}

fn primitive(f: &LaurentPoly2) -> LaurentPoly2 {
    let mut den = num_bigint::BigInt::one();
    let mut num = num_bigint::BigInt::zero();
    for (_, c) in f.terms() {
        den = den.lcm(c.denom());
        num = num.gcd(c.numer());
    }
    if num.is_zero() {
        return f.clone();
    }
    let mut s = Rational::new(den, num);
    let lead = f.terms().max_by_key(|((_, q), _)| *q).map(|(_, c)| c.clone());
    if lead.is_some_and(|c| c.is_negative()) {
        s = -s;
    }
    f.scale(&s)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DecompositionReport {
    pub n: u32,
    pub k: u64,
    pub j: u64,
    pub dim_family: usize,
    pub dim_harmonic: usize,
    pub dim_lower: usize,
    pub rank: usize,
}

/// `P_{k,j} = H_{k,j} ⊕ (r² + z²)·P_{k,j−2}`, checked by an exact rank
/// computation in the monomial coordinates of `P_{k,j}`.
pub fn verify_decomposition(n: u32, k: u64, j: u64) -> Result<DecompositionReport, SymError> {
    let span = family_span(k, j);
    let harmonic = build_harmonic_family(n, k, j)?;
    if j < 2 {
        // the family is spanned by its single monomial and is harmonic
        return Ok(DecompositionReport {
            n,
            k,
            j,
            dim_family: span.len(),
            dim_harmonic: 1,
            dim_lower: 0,
            rank: 1,
        });
    }
    let radius2 = LaurentPoly2::from_terms([((2, 0), int(1)), ((0, 2), int(1))]);
    let lower = family_span(k, j - 2);
    let mut vectors = vec![harmonic];
    for &(p, q) in &lower {
        vectors.push(&radius2 * &LaurentPoly2::monomial(p, q, int(1)));
    }
    let mut rows = Vec::new();
    for v in &vectors {
        let coords: Vec<Rational> = span.iter().map(|&(p, q)| v.coeff(p, q)).collect();
        let covered = LaurentPoly2::from_terms(
            span.iter().zip(&coords).map(|(&m, c)| (m, c.clone())),
        );
        if &covered != v {
            return Err(SymError::DecompositionFailed {
                n,
                k,
                j,
                dim: span.len(),
                rank: 0,
            });
        }
        rows.push(coords);
    }
    let rank = rank(rows);
    let report = DecompositionReport {
        n,
        k,
        j,
        dim_family: span.len(),
        dim_harmonic: 1,
        dim_lower: lower.len(),
        rank,
    };
    if rank != span.len() || vectors.len() != span.len() {
        return Err(SymError::DecompositionFailed {
            n,
            k,
            j,
            dim: span.len(),
            rank,
        });
    }
    Ok(report)
}

/// Reduced-row-echelon rank of the row vectors.
fn rank(mut rows: Vec<Vec<Rational>>) -> usize {
    let cols = rows.first().map_or(0, Vec::len);
    let mut r = 0;
    for c in 0..cols {
        let Some(pivot) = (r..rows.len()).find(|&i| !rows[i][c].is_zero()) else {
            continue;
        };
        rows.swap(r, pivot);
        let pv = rows[r][c].clone();
        let prow: Vec<Rational> = rows[r].iter().map(|x| x / &pv).collect();
        for (i, row) in rows.iter_mut().enumerate() {
            if i != r && !row[c].is_zero() {
                let factor = row[c].clone();
                for (x, y) in row.iter_mut().zip(&prow) {
                    *x -= &factor * y;
                }
            }
        }
        rows[r] = prow;
        r += 1;
    }
    r
}

/// Basis of `{x : Σ xᵢ·imagesᵢ = 0}`.
fn kernel_of_images(images: &[LaurentPoly2]) -> Vec<Vec<Rational>> {
    let mut monos: Vec<(i64, u64)> = images.iter().flat_map(|f| f.terms().map(|(m, _)| m)).collect();
    monos.sort();
    monos.dedup();
    let cols = images.len();
    // one row per monomial, one column per input
    let mut m: Vec<Vec<Rational>> = monos
        .iter()
        .map(|&(p, q)| images.iter().map(|f| f.coeff(p, q)).collect())
        .collect();
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..cols {
        let Some(pivot) = (r..m.len()).find(|&i| !m[i][c].is_zero()) else {
            continue;
        };
        m.swap(r, pivot);
        let pv = m[r][c].clone();
        let prow: Vec<Rational> = m[r].iter().map(|x| x / &pv).collect();
        for (i, row) in m.iter_mut().enumerate() {
            if i != r && !row[c].is_zero() {
                let factor = row[c].clone();
                for (x, y) in row.iter_mut().zip(&prow) {
                    *x -= &factor * y;
                }
            }
        }
        m[r] = prow;
        pivots.push(c);
        r += 1;
    }
    let free: Vec<usize> = (0..cols).filter(|c| !pivots.contains(c)).collect();
    free.iter()
        .map(|&f| {
            let mut x = vec![Rational::zero(); cols];
            x[f] = int(1);
            for (row, &pc) in pivots.iter().enumerate() {
                x[pc] = -m[row][f].clone();
            }
            x
        })
        .collect()
}

/// Functions built from a solution `P` of `(Δ̂ + λr⁻²)P = 0` by
/// `Q = −(z/r)P` and `λR = r∂zP + r∂rQ + nQ`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PairSystem {
    pub n: u32,
    pub lambda: Rational,
    pub p: LaurentPoly2,
    pub q: LaurentPoly2,
    pub r: LaurentPoly2,
}

impl PairSystem {
    pub fn derive(n: u32, lambda: Rational, p: LaurentPoly2) -> Self {
        let q = p.twist();
        let nn = int(n as i64);
        let rhs = &(&p.d_z().mul_monomial(1, 0) + &q.d_r().mul_monomial(1, 0)) + &q.scale(&nn);
        let r = rhs.scale(&(int(1) / &lambda));
        PairSystem { n, lambda, p, q, r }
    }

    pub fn residuals(&self, context: &str) -> SymReport {
        let (n, l) = (self.n, &self.lambda);
        let nn = int(n as i64);
        let mut rep = SymReport::default();
        rep.push("Δ̂P + λr⁻²P", context, reduced_operator(n, l, &self.p));
        let res = &reduced_operator(n, &(l + &nn), &self.q) - &self.r.over_r2().scale(&(l * int(2)));
        rep.push("Δ̂Q + (λ+n)r⁻²Q − 2λr⁻²R", context, res);
        let res = &reduced_operator(n, &(l + int(2) - &nn), &self.r) - &self.q.over_r2().scale(&int(2));
        rep.push("Δ̂R + (λ+2−n)r⁻²R − 2r⁻²Q", context, res);
        rep
    }
}

/// The coclosed-form analogue: `(Δ̂ + (μ+1)r⁻²)P = 0`, `Q = −(z/r)P` and
/// `½(μ−(n−1))R = r∂zP + r∂rQ + (n+1)Q`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CoclosedSystem {
    pub n: u32,
    pub mu: Rational,
    pub p: LaurentPoly2,
    pub q: LaurentPoly2,
    pub r: LaurentPoly2,
}

impl CoclosedSystem {
    pub fn derive(n: u32, mu: Rational, p: LaurentPoly2) -> Self {
        let q = p.twist();
        let rhs = &(&p.d_z().mul_monomial(1, 0) + &q.d_r().mul_monomial(1, 0))
            + &q.scale(&int(n as i64 + 1));
        let half_gap = (&mu - int(n as i64 - 1)) / int(2);
        let r = rhs.scale(&(int(1) / half_gap));
        CoclosedSystem { n, mu, p, q, r }
    }

    pub fn residuals(&self, context: &str) -> SymReport {
        let (n, mu) = (self.n, &self.mu);
        let nn = int(n as i64);
        let gap = mu + int(1) - &nn;
        let mut rep = SymReport::default();
        rep.push("Δ̂P + (μ+1)r⁻²P", context, reduced_operator(n, &(mu + int(1)), &self.p));
        let res = &reduced_operator(n, &(mu + &nn + int(3)), &self.q) - &self.r.over_r2().scale(&gap);
        rep.push("Δ̂Q + (μ+n+3)r⁻²Q − (μ+1−n)r⁻²R", context, res);
        let res = &reduced_operator(n, &gap, &self.r) - &self.q.over_r2().scale(&int(4));
        rep.push("Δ̂R + (μ+1−n)r⁻²R − 4r⁻²Q", context, res);
        rep
    }
}

/// The seven-function system of the conformal/trace-free coupling for
/// `λ > n`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SevenSystem {
    pub n: u32,
    pub lambda: Rational,
    pub p1: LaurentPoly2,
    pub p2: LaurentPoly2,
    pub p3: LaurentPoly2,
    pub q1: LaurentPoly2,
    pub q2: LaurentPoly2,
    pub s: LaurentPoly2,
    pub r: LaurentPoly2,
}

impl SevenSystem {
    pub fn derive(n: u32, lambda: Rational, p1: LaurentPoly2) -> Self {
        let nn = int(n as i64);
        let rdz = |f: &LaurentPoly2| f.d_z().mul_monomial(1, 0);
        let rdr = |f: &LaurentPoly2| f.d_r().mul_monomial(1, 0);
        let p2 = p1.twist();
        let p3 = p2.twist();
        let s = (&p1 + &p3).scale(&(int(-1) / &nn));
        let q1 = (&(&rdz(&p1) + &rdr(&p2)) + &p2.scale(&nn)).scale(&(int(1) / &lambda));
        let q2 = q1.twist();
        let rhs = &(&(&rdz(&q1) + &rdr(&q2)) + &q2.scale(&int(n as i64 + 1))) + &s;
        let denom = int(n as i64 - 1) * (&lambda - &nn);
        let r = rhs.scale(&(int(1) / denom));
        SevenSystem {
            n,
            lambda,
            p1,
            p2,
            p3,
            q1,
            q2,
            s,
            r,
        }
    }

    pub fn residuals(&self, context: &str) -> SymReport {
        let (n, l) = (self.n, &self.lambda);
        let nn = int(n as i64);
        let r2 = |f: &LaurentPoly2, c: Rational| f.over_r2().scale(&c);
        let rdz = |f: &LaurentPoly2| f.d_z().mul_monomial(1, 0);
        let rdr = |f: &LaurentPoly2| f.d_r().mul_monomial(1, 0);
        let mut rep = SymReport::default();

        // Q⁽²⁾ is fixed by −(z/r)Q⁽¹⁾; its second definition must agree
        let second = &(&(&rdz(&self.p2) + &rdr(&self.p3)) + &self.p3.scale(&nn)) - &self.s.scale(&nn);
        rep.push(
            "λQ⁽²⁾ = r∂zP⁽²⁾ + r∂rP⁽³⁾ + nP⁽³⁾ − nS",
            context,
            &self.q2.scale(l) - &second,
        );

        rep.push("Δ̂P⁽¹⁾ + λr⁻²P⁽¹⁾", context, reduced_operator(n, l, &self.p1));

        let res = &reduced_operator(n, &(l + &nn), &self.p2) - &r2(&self.q1, l * int(2));
        rep.push("Δ̂P⁽²⁾ + (λ+n)r⁻²P⁽²⁾ − 2λr⁻²Q⁽¹⁾", context, res);

        let res = &reduced_operator(n, &(l - &nn + int(2)), &self.q1) - &r2(&self.p2, int(2));
        rep.push("Δ̂Q⁽¹⁾ + (λ−n+2)r⁻²Q⁽¹⁾ − 2r⁻²P⁽²⁾", context, res);

        let res = &(&reduced_operator(n, &(l + &nn * int(2)), &self.p3) - &r2(&self.s, &nn * int(2)))
            - &r2(&self.q2, l * int(4));
        rep.push("Δ̂P⁽³⁾ + (λ+2n)r⁻²P⁽³⁾ − 2nr⁻²S − 4λr⁻²Q⁽²⁾", context, res);

        let res = &(&reduced_operator(n, &(l + int(2)), &self.s) - &r2(&self.p3, int(2)))
            + &r2(&self.q2, l * int(4) / &nn);
        rep.push("Δ̂S + (λ+2)r⁻²S − 2r⁻²P⁽³⁾ + (4/n)λr⁻²Q⁽²⁾", context, res);

        let coupling = int(2) * int(n as i64 - 1) * (&nn - l);
        let res = &(&(&reduced_operator(n, &(l + int(4)), &self.q2) - &r2(&self.p3, int(2)))
            + &r2(&self.s, int(2)))
            + &r2(&self.r, coupling);
        rep.push(
            "Δ̂Q⁽²⁾ + (λ+4)r⁻²Q⁽²⁾ − 2r⁻²P⁽³⁾ + 2r⁻²S + 2(n−1)(n−λ)r⁻²R",
            context,
            res,
        );

        let res = &reduced_operator(n, &(l - &nn * int(2) + int(2)), &self.r)
            - &r2(&self.q2, int(4) / &nn);
        rep.push("Δ̂R + (λ−2n+2)r⁻²R − (4/n)r⁻²Q⁽²⁾", context, res);
        rep
    }
}

fn ctx(n: u32, k: u64, j: u64) -> String {
    alloc::format!("n={n} k={k} j={j}")
}

/// Pair system on the harmonic family `H_{k,j}`, `λ = k(k+n−1)`, `k ≥ 1`.
pub fn verify_formulas1(n: u32, k: u64, j: u64) -> Result<SymReport, SymError> {
    if k < 1 || n < 2 {
        return Err(SymError::InvalidParameters("need k >= 1 and n >= 2".into()));
    }
    let lambda = sphere_eigenvalue(n, k);
    let p = build_harmonic_family(n, k, j)?;
    PairSystem::derive(n, lambda, p).residuals(&ctx(n, k, j)).into_result()
}

/// Coclosed system with `μ = l(l+n−1) − 1`, `l ≥ 2`, on `H_{l,j}`.
pub fn verify_formulas2(n: u32, l: u64, j: u64) -> Result<SymReport, SymError> {
    if l < 2 || n < 2 {
        return Err(SymError::InvalidParameters("need l >= 2 and n >= 2".into()));
    }
    let mu = sphere_eigenvalue(n, l) - int(1);
    let p = build_harmonic_family(n, l, j)?;
    CoclosedSystem::derive(n, mu, p).residuals(&ctx(n, l, j)).into_result()
}

/// Seven-function system with `λ = k(k+n−1)`, `k ≥ 2`, on `H_{k,j}`.
pub fn verify_formulas3(n: u32, k: u64, j: u64) -> Result<SymReport, SymError> {
    if k < 2 || n < 2 {
        return Err(SymError::InvalidParameters("need k >= 2 and n >= 2".into()));
    }
    let lambda = sphere_eigenvalue(n, k);
    let p = build_harmonic_family(n, k, j)?;
    SevenSystem::derive(n, lambda, p).residuals(&ctx(n, k, j)).into_result()
}
