//! Infinitesimal Einstein deformations (IEDs) of the cone: zeros of the TT
//! block, found in two independent ways that must agree.
//!
//! A TT line κ feeds the cone values `η_{n+1}(m + j)` with `m = ξₙ(κ)`.
//! Since `η_{n+1}(y) = y(y+n)` and `m ≥ −(n−1)/2 > −n`, a zero needs `m + j = 0`:
//! `m` must be an integer in `[−(n−1)/2, 0]`. The second path expands the
//! same condition into `(2j+1)·m = −κ − j(j+n)` and solves that quadratic
//! in `j` exactly.

use alloc::vec::Vec;
use core::fmt;

use num_bigint::BigInt;
use num_traits::{Signed, ToPrimitive};

use crate::catalog::{product_base, product_tt_marker, ProductMarker};
use crate::conemaps::{eta, xi};
use crate::exactreal::{int, rational_sqrt, QuadReal, Rational};
use crate::spectra::{hardy_bound, GeometricSpectrum};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IedCertificate {
    pub kappa: QuadReal,
    pub j: u64,
    /// True iff κ = 0; otherwise the deformation is L² but unbounded.
    pub bounded: bool,
    pub multiplicity: u64,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum RigidityError {
    UnboundedBelow { n: u32, kappa: QuadReal },
    /// The two zero criteria disagree; this is an implementation bug.
    SolverDisagreement {
        n: u32,
        kappa: QuadReal,
        direct: Option<u64>,
        equation: Option<u64>,
    },
    InvalidRange { from: u32, to: u32 },
}

impl fmt::Display for RigidityError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            RigidityError::UnboundedBelow { n, kappa } => write!(
                f,
                "TT eigenvalue {kappa} < -(n-1)^2/4 for n={n}: cone Einstein operator unbounded below (Hardy inequality)"
            ),
            RigidityError::SolverDisagreement {
                n,
                kappa,
                direct,
                equation,
            } => write!(
                f,
                "zero criteria disagree at n={n}, kappa={kappa}: direct {direct:?}, equation {equation:?}"
            ),
            RigidityError::InvalidRange { from, to } => {
                write!(f, "invalid dimension range {from}..={to}; need 4 <= from <= to")
            }
        }
    }
}

impl core::error::Error for RigidityError {}

/// Zero of the κ family by the ξ-integrality criterion.
fn direct_zero(n: u32, kappa: &QuadReal) -> Result<Option<u64>, RigidityError> {
    let m = xi(n, kappa).map_err(|_| RigidityError::UnboundedBelow {
        n,
        kappa: kappa.clone(),
    })?;
    let j = match m.as_integer() {
        Some(m) if !m.is_positive() => (-m).to_u64(),
        _ => None,
    };
    if let Some(j) = j {
        debug_assert!(eta(n + 1, &m.add_rational(&int(j as i64))).is_zero());
    }
    Ok(j)
}

/// Nonnegative integer solution of `(2j+1)·m = −κ − j(j+n)`, `m = ξₙ(κ)`.
/// An irrational `m` admits none, since the right side is rational.
pub fn solve_zero_equation(n: u32, kappa: &QuadReal) -> Option<u64> {
    let m = xi(n, kappa).ok()?;
    let m = m.as_rational()?.clone();
    let kappa = kappa.as_rational()?.clone();
    // j² + (n + 2m)·j + (κ + m) = 0
    let b = int(n as i64) + &m * int(2);
    let c = &kappa + &m;
    let disc = &b * &b - int(4) * &c;
    let root = rational_sqrt(&disc)?;
    let two = int(2);
    let mut sols: Vec<u64> = [(-&b + &root) / &two, (-&b - &root) / &two]
        .into_iter()
        .filter(|j| j.is_integer() && !j.is_negative())
        .filter_map(|j| j.to_integer().to_u64())
        .collect();
    sols.sort();
    sols.dedup();
    sols.first().copied()
}

fn zero_both_ways(n: u32, kappa: &QuadReal) -> Result<Option<u64>, RigidityError> {
    let direct = direct_zero(n, kappa)?;
    let equation = solve_zero_equation(n, kappa);
    if direct != equation {
        return Err(RigidityError::SolverDisagreement {
            n,
            kappa: kappa.clone(),
            direct,
            equation,
        });
    }
    Ok(direct)
}

/// All IEDs of the cone coming from TT lines of the base.
pub fn find_ieds(gs: &GeometricSpectrum) -> Result<Vec<IedCertificate>, RigidityError> {
    let h = hardy_bound(gs.n);
    let mut out = Vec::new();
    for line in gs.spec_tt.lines() {
        if line.value < h {
            return Err(RigidityError::UnboundedBelow {
                n: gs.n,
                kappa: line.value.clone(),
            });
        }
        if let Some(j) = zero_both_ways(gs.n, &line.value)? {
            out.push(IedCertificate {
                kappa: line.value.clone(),
                j,
                bounded: line.value.is_zero(),
                multiplicity: line.multiplicity,
            });
        }
    }
    Ok(out)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ScanStatus {
    /// `−2(n−1) < −(n−1)²/4`: no classification.
    UnboundedBelow,
    Ieds(Vec<IedCertificate>),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ScanRow {
    pub n: u32,
    pub kappa: QuadReal,
    /// `ξₙ(κ)` when defined.
    pub m: Option<QuadReal>,
    /// `(n−9)(n−1)`, whose square root decides rationality of `m`.
    pub pythagorean_radicand: i64,
    pub status: ScanStatus,
}

impl ScanRow {
    pub fn has_ied(&self) -> bool {
        matches!(&self.status, ScanStatus::Ieds(c) if !c.is_empty())
    }
}

/// IEDs of sine-cones over products with strictly stable factors, for each
/// dimension in `from..=to`.
pub fn product_rigidity_scan(from: u32, to: u32) -> Result<Vec<ScanRow>, RigidityError> {
    if from < 4 || from > to {
        return Err(RigidityError::InvalidRange { from, to });
    }
    let mut rows = Vec::new();
    for n in from..=to {
        let marker = ProductMarker::of_dim(n);
        let (kappa, _) = product_tt_marker(&marker);
        let nn = n as i64;
        let radicand = (nn - 9) * (nn - 1);
        let m = xi(n, &kappa).ok();
        let status = match find_ieds(&product_base(&marker)) {
            Ok(certs) => ScanStatus::Ieds(certs),
            Err(RigidityError::UnboundedBelow { .. }) => ScanStatus::UnboundedBelow,
            Err(e) => return Err(e),
        };
        rows.push(ScanRow {
            n,
            kappa,
            m,
            pythagorean_radicand: radicand,
            status,
        });
    }
    Ok(rows)
}

/// Dimensions in `from..=to` where `√((n−9)(n−1))` is a nonnegative
/// integer, with that integer.
pub fn pythagorean_dimensions(from: u32, to: u32) -> Vec<(u32, u64)> {
    (from..=to)
        .filter_map(|n| {
            let r = (n as i64 - 9) * (n as i64 - 1);
            if r < 0 {
                return None;
            }
            let root = rational_sqrt(&Rational::from_integer(BigInt::from(r)))?;
            Some((n, root.to_integer().to_u64()?))
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactreal::rat;
    use crate::spectra::Spectrum;

    fn qi(v: i64) -> QuadReal {
        QuadReal::integer(v)
    }

    #[test]
    fn nine_dimensional_product() {
        let certs = find_ieds(&product_base(&ProductMarker::new(4, 5))).unwrap();
        assert_eq!(
            certs,
            [IedCertificate {
                kappa: qi(-16),
                j: 4,
                bounded: false,
                multiplicity: 1
            }]
        );
        assert_eq!(solve_zero_equation(9, &qi(-16)), Some(4));
    }

    #[test]
    fn zero_line_is_bounded() {
        let gs = GeometricSpectrum {
            n: 5,
            normalized: true,
            spec0: Spectrum::from_pairs([(qi(0), 1)], qi(0)),
            spec1d: Spectrum::empty(qi(0)),
            spec_tt: Spectrum::from_pairs([(qi(0), 3)], qi(0)),
        };
        let certs = find_ieds(&gs).unwrap();
        assert_eq!(certs.len(), 1);
        assert!(certs[0].bounded && certs[0].j == 0 && certs[0].multiplicity == 3);
    }

    #[test]
    fn ten_dimensional_product() {
        // ξ₁₀(−18) = −3 and η₁₁(−3+j) = (j−3)(j+7): zero at j = 3
        assert_eq!(xi(10, &qi(-18)).unwrap(), qi(-3));
        assert!(eta(11, &qi(0)).is_zero());
        assert_eq!(solve_zero_equation(10, &qi(-18)), Some(3));
    }

    #[test]
    fn twelve_is_irrational() {
        let m = xi(12, &qi(-22)).unwrap();
        assert_eq!(m, QuadReal::new(rat(-11, 2), rat(1, 2), int(33)).unwrap());
        assert_eq!(solve_zero_equation(12, &qi(-22)), None);
    }

    #[test]
    fn pythagorean_cases() {
        assert_eq!(pythagorean_dimensions(4, 64), [(9, 0), (10, 3)]);
    }

    #[test]
    fn low_dimensions_unbounded() {
        let rows = product_rigidity_scan(4, 8).unwrap();
        assert!(rows.iter().all(|r| r.status == ScanStatus::UnboundedBelow));
    }
}
