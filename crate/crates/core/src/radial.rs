//! Floating-point cross-checks of the closed-form cone spectra.
//!
//! Each separated mode solves the pencil
//! `∫φ′² sinⁿ + c∫φ² sin^{n−2}` against `∫φ² sinⁿ` on `(0, π)`.
//! Writing `φ = sin^{−(n−1)/2}·u` turns the stiffness form into
//! `∫ sin·u′² + (c + H)·u²/sin − (H + (n−1)/2)·sin·u²` with `H = (n−1)²/4`
//! (boundary terms vanish on the form domain), so the Hardy-critical part is
//! explicit and the ground state is regular in `u` even at `c = −H`.
//! That form is discretized with cell-centered finite differences.
//!
//! Nothing here feeds back into exact results.

use alloc::vec;
use alloc::vec::Vec;
use core::f64::consts::PI;
use core::fmt;

use libm::{fabs, hypot, sin, sqrt};
use num_traits::ToPrimitive;

use crate::conemaps::{eta, xi};
use crate::exactreal::{int, QuadReal, Rational};
use crate::spectra::{hardy_bound, GeometricSpectrum};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Block {
    Function,
    Tt,
}

impl Block {
    pub fn as_str(self) -> &'static str {
        match self {
            Block::Function => "function",
            Block::Tt => "tt",
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct RadialProblem {
    pub n: u32,
    pub coupling: QuadReal,
    pub block: Block,
    pub grid_points: usize,
    pub boundary_offset: f64,
}

impl RadialProblem {
    pub fn new(n: u32, coupling: QuadReal, block: Block) -> Self {
        RadialProblem {
            n,
            coupling,
            block,
            grid_points: DEFAULT_GRID_POINTS,
            boundary_offset: DEFAULT_BOUNDARY_OFFSET,
        }
    }

    pub fn with_grid(mut self, grid_points: usize, boundary_offset: f64) -> Self {
        self.grid_points = grid_points;
        self.boundary_offset = boundary_offset;
        self
    }
}

pub const DEFAULT_GRID_POINTS: usize = 4000;
pub const DEFAULT_BOUNDARY_OFFSET: f64 = 1e-6;

#[derive(Clone, Debug, PartialEq)]
pub struct ModeReport {
    pub mode: u64,
    pub target: f64,
    pub computed: f64,
    /// Relative error, or absolute error when the target is 0.
    pub rel_error: f64,
    pub grid_points: usize,
    pub eps: f64,
}

#[derive(Clone, Debug, PartialEq)]
pub struct VerificationReport {
    pub n: u32,
    pub block: Block,
    pub coupling: QuadReal,
    pub tol: f64,
    pub modes: Vec<ModeReport>,
}

impl VerificationReport {
    pub fn worst(&self) -> Option<&ModeReport> {
        self.modes
            .iter()
            .max_by(|a, b| a.rel_error.total_cmp(&b.rel_error))
    }

    pub fn passed(&self) -> bool {
        self.modes.iter().all(|m| m.rel_error < self.tol)
    }
}

#[derive(Clone, Debug, PartialEq)]
pub enum RadialError {
    ConvergenceFailure { index: usize, iterations: usize },
    /// Coupling below `−(n−1)²/4`: the form is unbounded below.
    IllPosed { n: u32, coupling: QuadReal },
    InvalidGrid { grid_points: usize, eps: f64 },
    DimensionTooSmall { n: u32 },
    /// The base value is not a line of the relevant base spectrum.
    NotALine { block: Block, value: QuadReal },
    VerificationFailed(VerificationReport),
}

impl fmt::Display for RadialError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            RadialError::ConvergenceFailure { index, iterations } => write!(
                f,
                "tridiagonal eigensolver did not converge for eigenvalue {index} after {iterations} iterations"
            ),
            RadialError::IllPosed { n, coupling } => write!(
                f,
                "coupling {coupling} is below the Hardy bound -(n-1)^2/4 for n={n}"
            ),
            RadialError::InvalidGrid { grid_points, eps } => write!(
                f,
                "invalid grid: need N >= 100 and 0 < eps < pi/(4N), got N={grid_points}, eps={eps}"
            ),
            RadialError::DimensionTooSmall { n } => write!(f, "dimension {n} is below 2"),
            RadialError::NotALine { block, value } => write!(
                f,
                "{value} is not a line of the base {} spectrum",
                block.as_str()
            ),
            RadialError::VerificationFailed(r) => match r.worst() {
                Some(w) => write!(
                    f,
                    "verification failed: mode {} computed {} vs target {} (error {:e} >= {:e})",
                    w.mode, w.computed, w.target, w.rel_error, r.tol
                ),
                None => write!(f, "verification failed"),
            },
        }
    }
}

impl core::error::Error for RadialError {}

/// The `modes` smallest eigenvalues of the discretized pencil, ascending.
pub fn solve_radial(p: &RadialProblem, modes: usize) -> Result<Vec<f64>, RadialError> {
    if p.n < 2 {
        return Err(RadialError::DimensionTooSmall { n: p.n });
    }
    let big_n = p.grid_points;
    let eps = p.boundary_offset;
    if big_n < 100 || !(eps > 0.0 && eps < PI / (4.0 * big_n as f64)) {
        return Err(RadialError::InvalidGrid {
            grid_points: big_n,
            eps,
        });
    }
    let hardy = hardy_bound(p.n);
    if p.coupling < hardy {
        return Err(RadialError::IllPosed {
            n: p.n,
            coupling: p.coupling.clone(),
        });
    }
    // c + H is computed exactly so that c = −H gives exactly zero
    let shifted = p
        .coupling
        .checked_sub(&hardy)
        .expect("hardy bound is rational")
        .to_f64()
        .max(0.0);
    let half = (p.n as f64 - 1.0) / 2.0;
    let offset = half * half + half;

    let h = (PI - 2.0 * eps) / big_n as f64;
    let centre = |i: usize| sin(eps + (i as f64 + 0.5) * h);
    let face = |i: usize| sin(eps + (i as f64 + 1.0) * h);

    let s: Vec<f64> = (0..big_n).map(centre).collect();
    let mut diag = vec![0.0; big_n];
    let mut off = vec![0.0; big_n];
    for i in 0..big_n {
        let mut k = shifted * h / s[i];
        if i > 0 {
            k += face(i - 1) / h;
        }
        if i + 1 < big_n {
            k += face(i) / h;
            off[i + 1] = -face(i) / (h * h * sqrt(s[i] * s[i + 1]));
        }
        diag[i] = k / (s[i] * h);
    }
    tridiagonal_eigenvalues(&mut diag, &mut off)?;
    diag.sort_by(f64::total_cmp);
    Ok(diag.into_iter().take(modes).map(|v| v - offset).collect())
}

/// Eigenvalues of a symmetric tridiagonal matrix by implicit QL with
/// Wilkinson-type shifts. `d` holds the diagonal and is overwritten with the
/// (unsorted) eigenvalues; `e[i]` couples rows `i−1` and `i` (`e[0]` unused).
pub fn tridiagonal_eigenvalues(d: &mut [f64], e: &mut [f64]) -> Result<(), RadialError> {
    let n = d.len();
    assert_eq!(e.len(), n, "off-diagonal length must match the diagonal");
    if n == 0 {
        return Ok(());
    }
    const MAX_ITER: usize = 60;
    for i in 1..n {
        e[i - 1] = e[i];
    }
    e[n - 1] = 0.0;
    for l in 0..n {
        let mut iter = 0;
        loop {
            let mut m = l;
            while m + 1 < n {
                let dd = fabs(d[m]) + fabs(d[m + 1]);
                if fabs(e[m]) <= f64::EPSILON * dd {
                    break;
                }
                m += 1;
            }
            if m == l {
                break;
            }
            iter += 1;
            if iter > MAX_ITER {
                return Err(RadialError::ConvergenceFailure {
                    index: l,
                    iterations: iter - 1,
                });
            }
            let mut g = (d[l + 1] - d[l]) / (2.0 * e[l]);
            let mut r = hypot(g, 1.0);
            g = d[m] - d[l] + e[l] / (g + if g >= 0.0 { r } else { -r });
            let (mut s, mut c, mut p) = (1.0, 1.0, 0.0);
            let mut deflated = false;
            let mut i = m;
            while i > l {
                i -= 1;
                let f = s * e[i];
                let b = c * e[i];
                r = hypot(f, g);
                e[i + 1] = r;
                if r == 0.0 {
                    d[i + 1] -= p;
                    e[m] = 0.0;
                    deflated = true;
                    break;
                }
                s = f / r;
                c = g / r;
                g = d[i + 1] - p;
                r = (d[i] - g) * s + 2.0 * c * b;
                p = s * r;
                d[i + 1] = g + p;
                g = c * r - b;
            }
            if deflated {
                continue;
            }
            d[l] -= p;
            e[l] = g;
            e[m] = 0.0;
        }
    }
    Ok(())
}

/// Closed-form values `η_{n+1}(ξₙ(c) + j)` for `j < modes`.
pub fn closed_form_targets(n: u32, coupling: &QuadReal, modes: usize) -> Result<Vec<QuadReal>, RadialError> {
    let m = xi(n, coupling).map_err(|_| RadialError::IllPosed {
        n,
        coupling: coupling.clone(),
    })?;
    Ok((0..modes)
        .map(|j| eta(n + 1, &m.add_rational(&int(j as i64))))
        .collect())
}

/// Compares the numeric pencil against arbitrary targets.
pub fn verify_targets(p: &RadialProblem, targets: &[f64], tol: f64) -> Result<VerificationReport, RadialError> {
    let computed = solve_radial(p, targets.len())?;
    let modes = targets
        .iter()
        .zip(&computed)
        .enumerate()
        .map(|(j, (&target, &value))| {
            let abs = fabs(value - target);
            ModeReport {
                mode: j as u64,
                target,
                computed: value,
                rel_error: if target == 0.0 { abs } else { abs / fabs(target) },
                grid_points: p.grid_points,
                eps: p.boundary_offset,
            }
        })
        .collect();
    let report = VerificationReport {
        n: p.n,
        block: p.block,
        coupling: p.coupling.clone(),
        tol,
        modes,
    };
    if report.passed() {
        Ok(report)
    } else {
        Err(RadialError::VerificationFailed(report))
    }
}

/// Checks the first `modes` cone values fed by one base line against the
/// numeric radial spectrum.
pub fn verify_line(
    gs: &GeometricSpectrum,
    block: Block,
    base_value: &QuadReal,
    modes: usize,
    tol: f64,
    grid_points: usize,
    eps: f64,
) -> Result<VerificationReport, RadialError> {
    let spectrum = match block {
        Block::Function => &gs.spec0,
        Block::Tt => &gs.spec_tt,
    };
    if spectrum.multiplicity_of(base_value) == 0 {
        return Err(RadialError::NotALine {
            block,
            value: base_value.clone(),
        });
    }
    let p = RadialProblem {
        n: gs.n,
        coupling: base_value.clone(),
        block,
        grid_points,
        boundary_offset: eps,
    };
    let targets: Vec<f64> = closed_form_targets(gs.n, base_value, modes)?
        .iter()
        .map(QuadReal::to_f64)
        .collect();
    verify_targets(&p, &targets, tol)
}

/// Number of intervals for the composite Simpson rule.
pub const SIMPSON_INTERVALS: usize = 10_000;
const PROFILE_DEGREE: usize = 8;

/// Bump `ψ(t) = (1−t)²·Σ cₖ tᵏ` on `[0, 1]`, with coefficients chosen to
/// make `∫ψ′² tⁿ / ∫ψ² t^{n−2}` as small as the degree allows. Single-term
/// bumps stay above the Hardy constant by too much to expose every
/// subcritical κ.
#[derive(Clone, Debug, PartialEq)]
pub struct BumpProfile {
    pub coeffs: Vec<f64>,
    /// `∫ψ′² tⁿ / ∫ψ² t^{n−2}` in exact Gram arithmetic.
    pub hardy_ratio: f64,
}

impl BumpProfile {
    pub fn for_dimension(n: u32) -> Self {
        let d = PROFILE_DEGREE + 1;
        // basis bₖ = tᵏ − 2t^{k+1} + t^{k+2}
        let basis: Vec<Vec<Rational>> = (0..d)
            .map(|k| {
                let mut c = vec![int(0); k + 3];
                c[k] = int(1);
                c[k + 1] = int(-2);
                c[k + 2] = int(1);
                c
            })
            .collect();
        let derivs: Vec<Vec<Rational>> = basis
            .iter()
            .map(|c| {
                (1..c.len())
                    .map(|p| &c[p] * int(p as i64))
                    .collect()
            })
            .collect();
        let gram = |polys: &[Vec<Rational>], w: i64| -> Vec<Vec<f64>> {
            polys
                .iter()
                .map(|a| {
                    polys
                        .iter()
                        .map(|b| {
                            let mut acc = int(0);
                            for (p, ap) in a.iter().enumerate() {
                                for (q, bq) in b.iter().enumerate() {
                                    acc += ap * bq / int(p as i64 + q as i64 + w + 1);
                                }
                            }
                            acc.to_f64().unwrap_or(f64::NAN)
                        })
                        .collect()
                })
                .collect()
        };
        let n = n as i64;
        let stiff = gram(&derivs, n);
        let weight = gram(&basis, n - 2);
        let (ratio, coeffs) = smallest_generalized(&stiff, &weight);
        let scale = coeffs.iter().fold(0.0f64, |m, c| m.max(fabs(*c)));
        BumpProfile {
            coeffs: coeffs.iter().map(|c| c / scale).collect(),
            hardy_ratio: ratio,
        }
    }

    /// `(ψ(t), ψ′(t))`.
    pub fn eval(&self, t: f64) -> (f64, f64) {
        let mut q = 0.0;
        let mut dq = 0.0;
        for &c in self.coeffs.iter().rev() {
            dq = dq * t + q;
            q = q * t + c;
        }
        let w = (1.0 - t) * (1.0 - t);
        let dw = -2.0 * (1.0 - t);
        (w * q, dw * q + w * dq)
    }
}

/// Rayleigh quotients of `∫φ′² sinⁿ + κ∫φ² sin^{n−2}` over `∫φ² sinⁿ` for
/// `φ(θ) = ψ(θ/ε)`, one per ε.
pub fn rayleigh_unbounded_demo(n: u32, kappa: f64, epsilons: &[f64]) -> Vec<f64> {
    let profile = BumpProfile::for_dimension(n);
    epsilons
        .iter()
        .map(|&eps| rayleigh_quotient(&profile, n, kappa, eps))
        .collect()
}

fn rayleigh_quotient(profile: &BumpProfile, n: u32, kappa: f64, eps: f64) -> f64 {
    let m = SIMPSON_INTERVALS;
    let h = eps / m as f64;
    let (mut stiff, mut mass) = (0.0, 0.0);
    for i in 0..=m {
        let w = if i == 0 || i == m {
            1.0
        } else if i % 2 == 1 {
            4.0
        } else {
            2.0
        };
        let theta = i as f64 * h;
        let (psi, dpsi) = profile.eval(i as f64 / m as f64);
        let s = sin(theta);
        let sn2 = libm::pow(s, n as f64 - 2.0);
        let sn = sn2 * s * s;
        let dphi = dpsi / eps;
        stiff += w * (dphi * dphi * sn + kappa * psi * psi * sn2);
        mass += w * psi * psi * sn;
    }
    stiff / mass
}

/// Smallest eigenpair of `A x = σ B x` for symmetric `A` and positive
/// definite `B`, via Cholesky and cyclic Jacobi.
#[allow(clippy::needless_range_loop)]
fn smallest_generalized(a: &[Vec<f64>], b: &[Vec<f64>]) -> (f64, Vec<f64>) {
    let d = a.len();
    let mut l = vec![vec![0.0; d]; d];
    for i in 0..d {
        for j in 0..=i {
            let mut sum = b[i][j];
            for k in 0..j {
                sum -= l[i][k] * l[j][k];
            }
            if i == j {
                l[i][i] = sqrt(sum.max(f64::MIN_POSITIVE));
            } else {
                l[i][j] = sum / l[j][j];
            }
        }
    }
    // C = L⁻¹ A L⁻ᵀ
    let solve_lower = |rhs: &[f64]| -> Vec<f64> {
        let mut x = vec![0.0; d];
        for i in 0..d {
            let mut s = rhs[i];
            for k in 0..i {
                s -= l[i][k] * x[k];
            }
            x[i] = s / l[i][i];
        }
        x
    };
    let cols: Vec<Vec<f64>> = (0..d)
        .map(|j| solve_lower(&a.iter().map(|r| r[j]).collect::<Vec<_>>()))
        .collect();
    // cols[j] = L⁻¹ A[:, j]; now apply L⁻¹ to the rows
    let mut c = vec![vec![0.0; d]; d];
    for i in 0..d {
        let row: Vec<f64> = (0..d).map(|j| cols[j][i]).collect();
        c[i] = solve_lower(&row);
    }
    for i in 0..d {
        for j in 0..i {
            let m = 0.5 * (c[i][j] + c[j][i]);
            c[i][j] = m;
            c[j][i] = m;
        }
    }
    let (vals, vecs) = jacobi_eigen(c);
    let k = (0..d)
        .min_by(|&i, &j| vals[i].total_cmp(&vals[j]))
        .unwrap_or(0);
    let y: Vec<f64> = (0..d).map(|i| vecs[i][k]).collect();
    // x = L⁻ᵀ y
    let mut x = vec![0.0; d];
    for i in (0..d).rev() {
        let mut s = y[i];
        for k2 in i + 1..d {
            s -= l[k2][i] * x[k2];
        }
        x[i] = s / l[i][i];
    }
    (vals[k], x)
}

#[allow(clippy::needless_range_loop)]
fn jacobi_eigen(mut a: Vec<Vec<f64>>) -> (Vec<f64>, Vec<Vec<f64>>) {
    let d = a.len();
    let mut v = vec![vec![0.0; d]; d];
    for (i, row) in v.iter_mut().enumerate() {
        row[i] = 1.0;
    }
    for _sweep in 0..100 {
        let off: f64 = (0..d)
            .flat_map(|i| (0..d).filter(move |&j| j != i).map(move |j| (i, j)))
            .map(|(i, j)| a[i][j] * a[i][j])
            .sum();
        if off < 1e-30 {
            break;
        }
        for p in 0..d {
            for q in p + 1..d {
                if fabs(a[p][q]) < 1e-300 {
                    continue;
                }
                let theta = (a[q][q] - a[p][p]) / (2.0 * a[p][q]);
                let t = theta.signum() / (fabs(theta) + sqrt(theta * theta + 1.0));
                let t = if theta == 0.0 { 1.0 } else { t };
                let c = 1.0 / sqrt(t * t + 1.0);
                let s = t * c;
                for k in 0..d {
                    let akp = a[k][p];
                    let akq = a[k][q];
                    a[k][p] = c * akp - s * akq;
                    a[k][q] = s * akp + c * akq;
                }
                for k in 0..d {
                    let apk = a[p][k];
                    let aqk = a[q][k];
                    a[p][k] = c * apk - s * aqk;
                    a[q][k] = s * apk + c * aqk;
                }
                for row in v.iter_mut() {
                    let vkp = row[p];
                    let vkq = row[q];
                    row[p] = c * vkp - s * vkq;
                    row[q] = s * vkp + c * vkq;
                }
            }
        }
    }
    ((0..d).map(|i| a[i][i]).collect(), v)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog::{product_base, sphere_base, ProductMarker};

    fn q(v: i64) -> QuadReal {
        QuadReal::integer(v)
    }

    #[test]
    fn small_tridiagonal() {
        // [[2,1,0],[1,2,1],[0,1,2]] has eigenvalues 2−√2, 2, 2+√2
        let mut d = [2.0, 2.0, 2.0];
        let mut e = [0.0, 1.0, 1.0];
        tridiagonal_eigenvalues(&mut d, &mut e).unwrap();
        d.sort_by(f64::total_cmp);
        let r2 = sqrt(2.0);
        for (a, b) in d.iter().zip([2.0 - r2, 2.0, 2.0 + r2]) {
            assert!(fabs(a - b) < 1e-14);
        }
    }

    #[test]
    fn sphere_function_modes() {
        let p = RadialProblem::new(3, q(3), Block::Function);
        let v = solve_radial(&p, 3).unwrap();
        for (a, b) in v.iter().zip([4.0, 10.0, 18.0]) {
            assert!(fabs(a - b) / b < 1e-3, "{v:?}");
        }
        let p = RadialProblem::new(3, q(0), Block::Function);
        let v = solve_radial(&p, 3).unwrap();
        assert!(fabs(v[0]) < 1e-3 && fabs(v[1] - 4.0) < 4e-3 && fabs(v[2] - 10.0) < 1e-2, "{v:?}");
    }

    #[test]
    fn tt_at_the_hardy_bound() {
        let p = RadialProblem::new(9, q(-16), Block::Tt);
        let v = solve_radial(&p, 5).unwrap();
        for (a, b) in v.iter().zip([-20.0, -18.0, -14.0, -8.0, 0.0]) {
            assert!(fabs(a - b) < 1e-3, "{v:?}");
        }
    }

    #[test]
    fn below_hardy_is_ill_posed() {
        let p = RadialProblem::new(8, q(-14), Block::Tt);
        assert!(matches!(solve_radial(&p, 1), Err(RadialError::IllPosed { .. })));
        let p = RadialProblem::new(8, q(0), Block::Tt).with_grid(50, 1e-6);
        assert!(matches!(solve_radial(&p, 1), Err(RadialError::InvalidGrid { .. })));
    }

    #[test]
    fn second_order_convergence() {
        let err = |n_grid: usize| {
            let p = RadialProblem::new(3, q(3), Block::Function).with_grid(n_grid, 1e-6);
            fabs(solve_radial(&p, 1).unwrap()[0] - 4.0)
        };
        let (coarse, fine) = (err(500), err(1000));
        assert!(coarse / fine >= 3.0, "{coarse} {fine}");
    }

    #[test]
    fn verify_line_pass_and_fail() {
        let s3 = sphere_base(3, &q(20));
        let r = verify_line(&s3, Block::Function, &q(8), 4, 1e-3, 4000, 1e-6).unwrap();
        assert_eq!(r.modes.len(), 4);
        assert!(r.passed());

        let prod = product_base(&ProductMarker::new(4, 5));
        let r = verify_line(&prod, Block::Tt, &q(-16), 5, 1e-3, 4000, 1e-6).unwrap();
        assert_eq!(r.modes[4].target, 0.0);
        assert!(fabs(r.modes[4].computed) < 1e-3);

        let p = RadialProblem::new(3, q(8), Block::Function);
        let wrong: Vec<f64> = closed_form_targets(3, &q(8), 3)
            .unwrap()
            .iter()
            .map(|t| t.to_f64() + 1.0)
            .collect();
        assert!(matches!(
            verify_targets(&p, &wrong, 1e-3),
            Err(RadialError::VerificationFailed(_))
        ));
        assert!(matches!(
            verify_line(&s3, Block::Function, &q(7), 2, 1e-3, 4000, 1e-6),
            Err(RadialError::NotALine { .. })
        ));
    }

    #[test]
    fn profile_beats_the_product_gap() {
        let p = BumpProfile::for_dimension(8);
        assert!(p.hardy_ratio > 12.25 && p.hardy_ratio < 14.0, "{}", p.hardy_ratio);
        let (v, _) = p.eval(1.0);
        assert_eq!(v, 0.0);
    }

    #[test]
    fn quotients_blow_up_below_hardy() {
        let eps = [0.4, 0.2, 0.1, 0.05];
        let v = rayleigh_unbounded_demo(8, -14.0, &eps);
        assert!(v.windows(2).all(|w| w[1] < w[0]), "{v:?}");
        assert!(v[3] < -1e3, "{v:?}");
        let scaled: Vec<f64> = v.iter().zip(eps).map(|(q, e)| q * e * e).collect();
        assert!(scaled[3] < 0.0 && fabs(scaled[3] / scaled[2] - 1.0) < 0.05, "{scaled:?}");
    }

    #[test]
    fn quotients_bounded_at_the_bound_and_above() {
        let eps = [0.4, 0.2, 0.1, 0.05, 0.01];
        let v = rayleigh_unbounded_demo(9, -16.0, &eps);
        assert!(v.iter().all(|&q| q >= -20.0 - 1e-6), "{v:?}");
        let v = rayleigh_unbounded_demo(8, 0.0, &eps);
        assert!(v.iter().all(|&q| q >= 0.0));
    }
}
