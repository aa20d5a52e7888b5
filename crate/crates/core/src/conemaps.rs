//! Spectra of the sine-cone `((0,π)×M, dθ² + sin²θ·g)` from base spectra.
//!
//! Every cone eigenvalue has the form `η_{n+1}(ξₙ(v) + j) − c` for a base
//! value `v`, a shift `j ≥ 0` and a block constant `c`. Since
//! `ξₙ ≥ −(n−1)/2` lies right of the vertex of `η_{n+1}`, each family is
//! increasing in `j` and in `v`, which is what makes truncation sound.

use alloc::vec::Vec;
use core::fmt;
use core::ops::Deref;

use num_bigint::BigInt;
use num_traits::One;

use crate::exactreal::{int, rat, ExactError, QuadReal, Rational};
use crate::spectra::{hardy_bound, Family, GeometricSpectrum, Origin, Spectrum};

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ConeError {
    /// `ξₙ` undefined: argument below `−(n−1)²/4`.
    BelowHardyBound { n: u32, value: QuadReal },
    /// A TT eigenvalue below the Hardy bound makes the cone Einstein operator
    /// unbounded below.
    UnboundedBelow { n: u32, kappa: QuadReal },
    InsufficientBaseCutoff {
        spectrum: &'static str,
        required: QuadReal,
        available: QuadReal,
    },
    /// Base violates `λ₁ ≥ n` or `μ₁ ≥ n−1` and no override was given.
    OutsideHypotheses { spectrum: &'static str, value: QuadReal },
    DimensionTooSmall { n: u32, min: u32 },
    NotNormalized,
    Exact(ExactError),
}

impl fmt::Display for ConeError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ConeError::BelowHardyBound { n, value } => {
                write!(f, "xi_{n}({value}) undefined: argument below -(n-1)^2/4")
            }
            ConeError::UnboundedBelow { n, kappa } => write!(
                f,
                "TT eigenvalue {kappa} < -(n-1)^2/4 for n={n}: the cone Einstein operator is unbounded below (Hardy inequality)"
            ),
            ConeError::InsufficientBaseCutoff {
                spectrum,
                required,
                available,
            } => write!(
                f,
                "base {spectrum} is complete only up to {available}, but {required} is required"
            ),
            ConeError::OutsideHypotheses { spectrum, value } => write!(
                f,
                "base {spectrum} has first value {value} below the admissible bound; pass the override to proceed"
            ),
            ConeError::DimensionTooSmall { n, min } => {
                write!(f, "dimension {n} is below the minimum {min} for this map")
            }
            ConeError::NotNormalized => write!(f, "base is not normalized to Ric = (n-1)g"),
            ConeError::Exact(e) => write!(f, "{e}"),
        }
    }
}

impl core::error::Error for ConeError {}

impl From<ExactError> for ConeError {
    fn from(e: ExactError) -> Self {
        ConeError::Exact(e)
    }
}

/// `ξₙ(x) = −(n−1)/2 + √((n−1)²/4 + x)`.
pub fn xi(n: u32, x: &QuadReal) -> Result<QuadReal, ConeError> {
    let h = hardy_bound(n);
    if x < &h {
        return Err(ConeError::BelowHardyBound {
            n,
            value: x.clone(),
        });
    }
    let half = rat(n as i64 - 1, 2);
    let root = x.add_rational(&-h.a().clone()).sqrt()?;
    Ok(root.add_rational(&-half))
}

/// `ηₙ(y) = y(y+n−1)`.
pub fn eta(n: u32, y: &QuadReal) -> QuadReal {
    y.checked_mul(&y.add_rational(&int(n as i64 - 1)))
        .expect("a value and its rational shift share a field")
}

/// Behaviour on bases violating `λ₁ ≥ n` or `μ₁ ≥ n−1`.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct MapOptions {
    /// Use the main-case formulas anyway and tag the output.
    pub allow_outside_hypotheses: bool,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ConeFunctionSpectrum {
    pub spectrum: Spectrum,
    pub outside_hypotheses: bool,
}

impl Deref for ConeFunctionSpectrum {
    type Target = Spectrum;
    fn deref(&self) -> &Spectrum {
        &self.spectrum
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ConeOneFormSpectrum {
    /// Differentials of eigenfunctions.
    pub exact_part: Spectrum,
    pub coclosed_part: Spectrum,
    pub outside_hypotheses: bool,
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct ExceptionalCases {
    /// `λ₁ = n`.
    pub lambda_equals_n: bool,
    /// `μ₁ = n − 1`.
    pub mu_equals_n_minus_1: bool,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ConeEinsteinSpectrum {
    pub conformal_block: Spectrum,
    pub delta_star_block: Spectrum,
    pub tt_block: Spectrum,
    pub exceptional: ExceptionalCases,
    pub outside_hypotheses: bool,
}

impl ConeEinsteinSpectrum {
    /// All three blocks merged, for whole-operator queries.
    pub fn union(&self) -> Spectrum {
        Spectrum::union([
            &self.conformal_block,
            &self.delta_star_block,
            &self.tt_block,
        ])
    }
}

// One base line feeding a family.
struct Source {
    family: Family,
    index: usize,
    value: QuadReal,
    mult: u64,
}

/// Base bound needed to list a block with constant `c` completely up to
/// `cutoff`: `ηₙ(ξ_{n+1}(cutoff + c))`, or `None` if the block has no
/// values that low at all.
pub fn required_base_cutoff(n: u32, cutoff: &QuadReal, c: i64) -> Option<QuadReal> {
    let top = rationalize_up(cutoff).add_rational(&int(c));
    // the smallest value any family can take is η_{n+1}(−(n−1)/2) = −(n²−1)/4
    let nn = n as i64;
    if top < QuadReal::rational(rat(-(nn * nn - 1), 4)) {
        return None;
    }
    let y = xi(n + 1, &top).expect("top lies above the (n+1) Hardy bound");
    Some(top.checked_sub(&y).expect("same field"))
}

/// Largest cutoff a block with constant `c` supports when its base data is
/// complete up to `base_cutoff`; inverse of [`required_base_cutoff`].
pub fn supported_cutoff(n: u32, base_cutoff: &QuadReal, c: i64) -> QuadReal {
    let base = rationalize_down(base_cutoff);
    let h = hardy_bound(n);
    if base < h {
        // nothing at or above the Hardy bound is known; only the empty range
        // below every possible family value is certified
        let nn = n as i64;
        return QuadReal::rational(rat(-(nn * nn - 1), 4) - int(c + 1));
    }
    let x = xi(n, &base).expect("above Hardy bound");
    base.checked_add(&x)
        .expect("same field")
        .add_rational(&int(-c))
}

fn rationalize_up(x: &QuadReal) -> QuadReal {
    if x.is_rational() {
        x.clone()
    } else {
        QuadReal::rational(Rational::from_integer(x.floor() + BigInt::one()))
    }
}

fn rationalize_down(x: &QuadReal) -> QuadReal {
    if x.is_rational() {
        x.clone()
    } else {
        QuadReal::rational(Rational::from_integer(x.floor()))
    }
}

// Emits η_{n+1}(ξₙ(v)+j) − c for j ≥ j_min while ≤ cutoff.
fn enumerate_family(
    n: u32,
    src: &Source,
    c: i64,
    cutoff: &QuadReal,
    j_min: u64,
    mult: impl Fn(u64) -> u64,
    out: &mut Vec<(QuadReal, Origin)>,
) -> Result<(), ConeError> {
    let x = xi(n, &src.value)?;
    let shift = int(-c);
    let mut j = j_min;
    loop {
        let y = x.add_rational(&int(j as i64));
        let v = eta(n + 1, &y).add_rational(&shift);
        if &v > cutoff {
            return Ok(());
        }
        out.push((
            v,
            Origin {
                family: src.family,
                index: src.index,
                shift: j,
                multiplicity: mult(j),
            },
        ));
        j += 1;
    }
}

fn check_cutoff(
    n: u32,
    spec: &Spectrum,
    name: &'static str,
    offset: i64,
    cutoff: &QuadReal,
    c: i64,
) -> Result<(), ConeError> {
    if let Some(req) = required_base_cutoff(n, cutoff, c) {
        // families fed by μ use μ + 1 as their base value
        let req = req.add_rational(&int(-offset));
        if &req > spec.cutoff() {
            return Err(ConeError::InsufficientBaseCutoff {
                spectrum: name,
                required: req,
                available: spec.cutoff().clone(),
            });
        }
    }
    Ok(())
}

fn lambda_sources(base: &GeometricSpectrum) -> Vec<Source> {
    base.spec0
        .lines()
        .iter()
        .enumerate()
        .map(|(i, l)| Source {
            family: Family::Lambda,
            index: i,
            value: l.value.clone(),
            mult: l.multiplicity,
        })
        .collect()
}

fn mu_sources(base: &GeometricSpectrum) -> Vec<Source> {
    base.spec1d
        .lines()
        .iter()
        .enumerate()
        .map(|(i, l)| Source {
            family: Family::Mu,
            index: i + 1,
            value: l.value.add_rational(&int(1)),
            mult: l.multiplicity,
        })
        .collect()
}

fn kappa_sources(base: &GeometricSpectrum) -> Vec<Source> {
    base.spec_tt
        .lines()
        .iter()
        .enumerate()
        .map(|(i, l)| Source {
            family: Family::Kappa,
            index: i + 1,
            value: l.value.clone(),
            mult: l.multiplicity,
        })
        .collect()
}

/// Checks dimension, normalization and the `λ₁ ≥ n`, `μ₁ ≥ n−1` bounds.
/// Returns whether the base lies outside the hypotheses (only possible with
/// the override).
fn check_hypotheses(
    base: &GeometricSpectrum,
    min_dim: u32,
    opts: MapOptions,
) -> Result<bool, ConeError> {
    if base.n < min_dim {
        return Err(ConeError::DimensionTooSmall {
            n: base.n,
            min: min_dim,
        });
    }
    if !base.normalized {
        return Err(ConeError::NotNormalized);
    }
    let n = base.dim();
    let mut outside = None;
    if let Some(l1) = base.spec0.positive_min() {
        if l1 < &n {
            outside = Some(("spec0", l1.clone()));
        }
    }
    if let Some(m1) = base.spec1d.min_line() {
        if m1.value < n.add_rational(&int(-1)) {
            outside = outside.or(Some(("spec1D", m1.value.clone())));
        }
    }
    match outside {
        None => Ok(false),
        Some(_) if opts.allow_outside_hypotheses => Ok(true),
        Some((spectrum, value)) => Err(ConeError::OutsideHypotheses { spectrum, value }),
    }
}

fn check_kappas(base: &GeometricSpectrum) -> Result<(), ConeError> {
    let h = base.hardy_bound();
    match base.spec_tt.min_line() {
        Some(l) if l.value < h => Err(ConeError::UnboundedBelow {
            n: base.n,
            kappa: l.value.clone(),
        }),
        _ => Ok(()),
    }
}

fn exceptional_cases(base: &GeometricSpectrum) -> ExceptionalCases {
    let n = base.dim();
    ExceptionalCases {
        lambda_equals_n: base.spec0.positive_min() == Some(&n),
        mu_equals_n_minus_1: base.spec1d.min_line().map(|l| &l.value)
            == Some(&n.add_rational(&int(-1))),
    }
}

fn functions_raw(
    base: &GeometricSpectrum,
    cutoff: &QuadReal,
) -> Result<Vec<(QuadReal, Origin)>, ConeError> {
    let mut raw = Vec::new();
    for src in lambda_sources(base) {
        enumerate_family(base.n, &src, 0, cutoff, 0, |_| src.mult, &mut raw)?;
    }
    Ok(raw)
}

fn coclosed_raw(
    base: &GeometricSpectrum,
    cutoff: &QuadReal,
) -> Result<Vec<(QuadReal, Origin)>, ConeError> {
    let mut raw = Vec::new();
    for src in lambda_sources(base).iter().skip(1) {
        enumerate_family(base.n, src, 1, cutoff, 0, |_| src.mult, &mut raw)?;
    }
    for src in mu_sources(base) {
        enumerate_family(base.n, &src, 1, cutoff, 0, |_| src.mult, &mut raw)?;
    }
    Ok(raw)
}

fn tt_raw(
    base: &GeometricSpectrum,
    cutoff: &QuadReal,
    exc: ExceptionalCases,
) -> Result<Vec<(QuadReal, Origin)>, ConeError> {
    let mut raw = Vec::new();
    for src in lambda_sources(base).iter().skip(1) {
        if exc.lambda_equals_n && src.index == 1 {
            continue;
        }
        enumerate_family(base.n, src, 0, cutoff, 0, |_| src.mult, &mut raw)?;
    }
    for src in mu_sources(base) {
        if exc.mu_equals_n_minus_1 && src.index == 1 {
            continue;
        }
        enumerate_family(base.n, &src, 0, cutoff, 0, |_| src.mult, &mut raw)?;
    }
    for src in kappa_sources(base) {
        enumerate_family(base.n, &src, 0, cutoff, 0, |_| src.mult, &mut raw)?;
    }
    Ok(raw)
}

/// Laplace spectrum of the cone: `η_{n+1}(ξₙ(λᵢ)+j)` with `mult(λᵢ)`.
pub fn map_functions(
    base: &GeometricSpectrum,
    cutoff: &QuadReal,
) -> Result<ConeFunctionSpectrum, ConeError> {
    map_functions_with(base, cutoff, MapOptions::default())
}

pub fn map_functions_with(
    base: &GeometricSpectrum,
    cutoff: &QuadReal,
    opts: MapOptions,
) -> Result<ConeFunctionSpectrum, ConeError> {
    let outside = check_hypotheses(base, 2, opts)?;
    check_cutoff(base.n, &base.spec0, "spec0", 0, cutoff, 0)?;
    let raw = functions_raw(base, cutoff)?;
    Ok(ConeFunctionSpectrum {
        spectrum: Spectrum::merge(raw, cutoff.clone()),
        outside_hypotheses: outside,
    })
}

/// Hodge Laplacian on cone 1-forms, split into exact and coclosed parts.
pub fn map_one_forms(
    base: &GeometricSpectrum,
    cutoff: &QuadReal,
) -> Result<ConeOneFormSpectrum, ConeError> {
    map_one_forms_with(base, cutoff, MapOptions::default())
}

pub fn map_one_forms_with(
    base: &GeometricSpectrum,
    cutoff: &QuadReal,
    opts: MapOptions,
) -> Result<ConeOneFormSpectrum, ConeError> {
    let outside = check_hypotheses(base, 2, opts)?;
    let n = base.n;
    let c_exact = n as i64;
    check_cutoff(n, &base.spec0, "spec0", 0, cutoff, c_exact)?;
    check_cutoff(n, &base.spec0, "spec0", 0, cutoff, 1)?;
    check_cutoff(n, &base.spec1d, "spec1D", 1, cutoff, 1)?;

    let mut exact = Vec::new();
    for src in lambda_sources(base) {
        // (i, j) = (0, 0) is the constant function, whose differential vanishes
        let j_min = if src.index == 0 { 1 } else { 0 };
        enumerate_family(n, &src, c_exact, cutoff, j_min, |_| src.mult, &mut exact)?;
    }
    let coclosed = coclosed_raw(base, cutoff)?;
    Ok(ConeOneFormSpectrum {
        exact_part: Spectrum::merge(exact, cutoff.clone()),
        coclosed_part: Spectrum::merge(coclosed, cutoff.clone()),
        outside_hypotheses: outside,
    })
}

/// Einstein operator on the cone in its three blocks, including the
/// exceptional cases `λ₁ = n` and `μ₁ = n − 1`.
pub fn map_einstein(
    base: &GeometricSpectrum,
    cutoff: &QuadReal,
) -> Result<ConeEinsteinSpectrum, ConeError> {
    map_einstein_with(base, cutoff, MapOptions::default())
}

pub fn map_einstein_with(
    base: &GeometricSpectrum,
    cutoff: &QuadReal,
    opts: MapOptions,
) -> Result<ConeEinsteinSpectrum, ConeError> {
    let outside = check_hypotheses(base, 3, opts)?;
    check_kappas(base)?;
    let n = base.n;
    let c_conf = 2 * n as i64;
    let c_ds = n as i64 + 1;
    check_cutoff(n, &base.spec0, "spec0", 0, cutoff, c_conf)?;
    check_cutoff(n, &base.spec1d, "spec1D", 1, cutoff, c_ds)?;
    check_cutoff(n, &base.spec_tt, "specE_TT", 0, cutoff, 0)?;
    let exc = exceptional_cases(base);

    let mut conformal = Vec::new();
    for src in lambda_sources(base) {
        let mult = |j: u64| {
            if src.index == 0 && j <= 1 {
                1
            } else if exc.lambda_equals_n && src.index == 1 && j == 0 {
                src.mult
            } else {
                2 * src.mult
            }
        };
        enumerate_family(n, &src, c_conf, cutoff, 0, mult, &mut conformal)?;
    }

    let mut delta_star = Vec::new();
    for src in lambda_sources(base).iter().skip(1) {
        let j_min = if exc.lambda_equals_n && src.index == 1 { 1 } else { 0 };
        enumerate_family(n, src, c_ds, cutoff, j_min, |_| src.mult, &mut delta_star)?;
    }
    for src in mu_sources(base) {
        let j_min = if exc.mu_equals_n_minus_1 && src.index == 1 { 1 } else { 0 };
        enumerate_family(n, &src, c_ds, cutoff, j_min, |_| src.mult, &mut delta_star)?;
    }

    let tt = tt_raw(base, cutoff, exc)?;
    Ok(ConeEinsteinSpectrum {
        conformal_block: Spectrum::merge(conformal, cutoff.clone()),
        delta_star_block: Spectrum::merge(delta_star, cutoff.clone()),
        tt_block: Spectrum::merge(tt, cutoff.clone()),
        exceptional: exc,
        outside_hypotheses: outside,
    })
}

/// Only the TT block of the cone Einstein operator. It needs far less base
/// data than [`map_einstein`]: Δ₀ and Δ₁ only up to the TT cutoff itself.
/// Product bases, whose Laplace spectrum is unknown, rely on this.
pub fn map_tt_block(base: &GeometricSpectrum, cutoff: &QuadReal) -> Result<Spectrum, ConeError> {
    map_tt_block_with(base, cutoff, MapOptions::default())
}

pub fn map_tt_block_with(
    base: &GeometricSpectrum,
    cutoff: &QuadReal,
    opts: MapOptions,
) -> Result<Spectrum, ConeError> {
    check_hypotheses(base, 3, opts)?;
    check_kappas(base)?;
    let n = base.n;
    check_cutoff(n, &base.spec0, "spec0", 0, cutoff, 0)?;
    check_cutoff(n, &base.spec1d, "spec1D", 1, cutoff, 0)?;
    check_cutoff(n, &base.spec_tt, "specE_TT", 0, cutoff, 0)?;
    let tt = tt_raw(base, cutoff, exceptional_cases(base))?;
    Ok(Spectrum::merge(tt, cutoff.clone()))
}

/// One cone step producing the cone's own [`GeometricSpectrum`]: Laplace
/// spectrum, coclosed 1-forms and the TT block.
///
/// Each output spectrum is certified up to `cutoff` or, when the base data
/// does not reach far enough, up to the largest value it does support; the
/// reduced cutoff is recorded in the output, never hidden.
pub fn cone_step(
    base: &GeometricSpectrum,
    cutoff: &QuadReal,
    opts: MapOptions,
) -> Result<GeometricSpectrum, ConeError> {
    check_hypotheses(base, 3, opts)?;
    check_kappas(base)?;
    let n = base.n;
    let support0 = |c: i64| supported_cutoff(n, base.spec0.cutoff(), c);
    // μ families see μ + 1, so their base is complete one unit further
    let support1 = |c: i64| supported_cutoff(n, &base.spec1d.cutoff().add_rational(&int(1)), c);
    let support_tt = supported_cutoff(n, base.spec_tt.cutoff(), 0);
    let cap = |x: QuadReal| if &x < cutoff { x } else { cutoff.clone() };

    let c0 = cap(support0(0));
    let c1 = cap(core::cmp::min(support0(1), support1(1)));
    let ctt = cap(core::cmp::min(
        core::cmp::min(support0(0), support1(0)),
        support_tt,
    ));
    let exc = exceptional_cases(base);
    Ok(GeometricSpectrum {
        n: n + 1,
        normalized: base.normalized,
        spec0: Spectrum::merge(functions_raw(base, &c0)?, c0),
        spec1d: Spectrum::merge(coclosed_raw(base, &c1)?, c1),
        spec_tt: Spectrum::merge(tt_raw(base, &ctt, exc)?, ctt),
    })
}

/// The `k`-fold sine-cone over `base`, with spectra certified up to `cutoff`.
///
/// Intermediate cones are computed as far as the final cutoff needs. The
/// Laplace spectrum must reach `cutoff`; the coclosed and TT spectra carry
/// whatever cutoff the base data supports (for a sphere without 1-form or TT
/// data they stay empty and uncertified).
pub fn iterate(
    base: &GeometricSpectrum,
    k: u32,
    cutoff: &QuadReal,
    opts: MapOptions,
) -> Result<GeometricSpectrum, ConeError> {
    // levels[i] is the cutoff wanted after i steps
    let mut levels = alloc::vec![cutoff.clone(); k as usize + 1];
    for step in (0..k as usize).rev() {
        let dim = base.n + step as u32;
        let next = &levels[step + 1];
        // rounded up to a rational so the next step can invert it exactly
        levels[step] = rationalize_up(
            &required_base_cutoff(dim, next, 1)
                .map(|b| core::cmp::max(b, next.clone()))
                .unwrap_or_else(|| next.clone()),
        );
    }
    let mut cur = base.clone();
    for level in levels.iter().skip(1) {
        cur = cone_step(&cur, level, opts)?;
    }
    if k > 0 && cur.spec0.cutoff() < cutoff {
        return Err(ConeError::InsufficientBaseCutoff {
            spectrum: "spec0",
            required: levels[0].clone(),
            available: base.spec0.cutoff().clone(),
        });
    }
    Ok(cur)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog::{product_base, sphere_base, sphere_functions, ProductMarker};

    fn qi(v: i64) -> QuadReal {
        QuadReal::integer(v)
    }

    fn ints(s: &Spectrum) -> Vec<(i64, u64)> {
        s.lines()
            .iter()
            .map(|l| {
                let v: i64 = l.value.as_integer().expect("integer").try_into().unwrap();
                (v, l.multiplicity)
            })
            .collect()
    }

    #[test]
    fn xi_and_eta_examples() {
        assert_eq!(xi(9, &qi(-16)).unwrap(), qi(-4));
        assert_eq!(xi(10, &qi(-18)).unwrap(), qi(-3));
        for n in 2..8u32 {
            for k in 0..6i64 {
                let v = qi(k * (k + n as i64 - 1));
                assert_eq!(xi(n, &v).unwrap(), qi(k));
            }
        }
        assert_eq!(eta(10, &qi(0)), qi(0));
        for n in 3..10 {
            assert_eq!(eta(n + 1, &qi(1)), qi(n as i64 + 1));
        }
        assert_eq!(eta(10, &qi(0)), qi(0));
        assert!(matches!(
            xi(8, &qi(-14)),
            Err(ConeError::BelowHardyBound { .. })
        ));
    }

    #[test]
    fn xi_of_irrational_cone_value() {
        // feed a cone eigenvalue back through the next dimension's ξ
        let x = xi(4, &qi(5)).unwrap();
        assert!(!x.is_rational());
        let cone_value = eta(5, &x.add_rational(&int(2)));
        assert_eq!(xi(5, &cone_value).unwrap(), x.add_rational(&int(2)));
    }

    #[test]
    fn sphere_three_to_four() {
        let cut = qi(18);
        let out = map_functions(&sphere_base(3, &cut), &cut).unwrap();
        assert_eq!(ints(&out), [(0, 1), (4, 5), (10, 14), (18, 30)]);
        assert!(out
            .equal_up_to(&sphere_functions(4, &cut), &cut)
            .unwrap());
    }

    #[test]
    fn constant_only_base() {
        let base = GeometricSpectrum {
            n: 3,
            normalized: true,
            spec0: Spectrum::from_pairs([(qi(0), 1)], qi(100)),
            spec1d: Spectrum::empty(qi(100)),
            spec_tt: Spectrum::empty(qi(100)),
        };
        let out = map_functions(&base, &qi(10)).unwrap();
        assert_eq!(ints(&out), [(0, 1), (4, 1), (10, 1)]);
    }

    #[test]
    fn refuses_short_base() {
        let base = sphere_base(3, &qi(8));
        let err = map_functions(&base, &qi(100)).unwrap_err();
        assert!(matches!(err, ConeError::InsufficientBaseCutoff { .. }));
    }

    #[test]
    fn killing_count() {
        // n = 4: λ₁ = 4 with mult 3, μ₁ = 3 with mult 2
        let base = GeometricSpectrum {
            n: 4,
            normalized: true,
            spec0: Spectrum::from_pairs([(qi(0), 1), (qi(4), 3), (qi(9), 1)], qi(60)),
            spec1d: Spectrum::from_pairs([(qi(3), 2), (qi(7), 1)], qi(60)),
            spec_tt: Spectrum::from_pairs([(qi(1), 1)], qi(60)),
        };
        let out = map_one_forms(&base, &qi(20)).unwrap();
        assert_eq!(out.coclosed_part.multiplicity_of(&qi(4)), 5);
        let e = map_einstein(&base, &qi(20)).unwrap();
        assert!(e.exceptional.lambda_equals_n && e.exceptional.mu_equals_n_minus_1);
        // λ̃⁽³⁾₁,ⱼ absent: the λ₁ family would start at η₅(1) = 5
        assert!(e
            .tt_block
            .lines()
            .iter()
            .all(|l| l.origins.iter().all(|o| !(o.family == Family::Lambda && o.index == 1))));
        // conformal (1,0) carries mult(λ₁) = 3, not 6; (0,1) adds 1 at the same value 5 − 8
        assert_eq!(e.conformal_block.multiplicity_of(&qi(-3)), 4);
    }

    #[test]
    fn product_nine_zero_mode() {
        let base = product_base(&ProductMarker::new(4, 5));
        // the full map needs Δ₀ far beyond what a product marker certifies
        assert!(matches!(
            map_einstein(&base, &qi(0)),
            Err(ConeError::InsufficientBaseCutoff { spectrum: "spec0", .. })
        ));
        let tt = map_tt_block(&base, &qi(0)).unwrap();
        assert_eq!(ints(&tt), [(-20, 1), (-18, 1), (-14, 1), (-8, 1), (0, 1)]);
        let zero = &tt.lines()[4];
        assert_eq!((zero.origins[0].index, zero.origins[0].shift), (1, 4));
        let eight = product_base(&ProductMarker::new(4, 4));
        assert!(matches!(
            map_einstein(&eight, &qi(0)),
            Err(ConeError::UnboundedBelow { .. })
        ));
    }

    #[test]
    fn iterate_sphere_and_product() {
        let s3 = sphere_base(3, &qi(60));
        let once = iterate(&s3, 1, &qi(30), MapOptions::default()).unwrap();
        assert_eq!(once.n, 4);
        assert!(once
            .spec0
            .equal_up_to(&sphere_functions(4, &qi(30)), &qi(30))
            .unwrap());
        assert_eq!(iterate(&s3, 0, &qi(30), MapOptions::default()).unwrap(), s3);
        let twice = iterate(&s3, 2, &qi(30), MapOptions::default()).unwrap();
        assert!(twice
            .spec0
            .equal_up_to(&sphere_functions(5, &qi(30)), &qi(30))
            .unwrap());

        let p9 = product_base(&ProductMarker::new(4, 5));
        let cone = iterate(&p9, 1, &qi(0), MapOptions::default()).unwrap();
        assert_eq!(cone.spec_tt.multiplicity_of(&qi(0)), 1);
    }

    #[test]
    fn required_and_supported_are_inverse() {
        for n in 3..8 {
            for c in [0i64, 1, n as i64, 2 * n as i64] {
                for lam in [0i64, 5, 40, 100] {
                    let b = required_base_cutoff(n, &qi(lam), c).unwrap();
                    let back = supported_cutoff(n, &b, c);
                    // irrational bounds are rounded, which only loses ground
                    if b.is_rational() {
                        assert_eq!(back, qi(lam), "n={n} c={c} Λ={lam}");
                    } else {
                        assert!(back <= qi(lam));
                    }
                    let up = rationalize_up(&b);
                    assert!(supported_cutoff(n, &up, c) >= qi(lam));
                }
            }
        }
    }
}
