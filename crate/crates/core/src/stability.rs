//! The four stability notions, decided on base data, predicted for the
//! cone, and checked against a direct classification of the cone spectra.
//!
//! Positive-spectrum conditions skip the eigenvalue equal to the dimension:
//! its eigenfunctions (and the constants) span the kernel of the map
//! `f ↦ ∇²f + (Δf/n)·g` into trace-free tensors, so they never produce a
//! deformation. On a cone this matters, since `n+1` is always an eigenvalue.

use alloc::vec::Vec;
use core::fmt;

use crate::conemaps::{cone_step, ConeError, MapOptions};
use crate::exactreal::{int, rat, QuadReal};
use crate::spectra::{GeometricSpectrum, Origin, SpectralLine, Spectrum};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Witness {
    pub value: QuadReal,
    pub spectrum: &'static str,
    pub origin: Option<Origin>,
}

impl Witness {
    fn of(line: &SpectralLine, spectrum: &'static str) -> Self {
        Witness {
            value: line.value.clone(),
            spectrum,
            origin: line.origins.first().cloned(),
        }
    }

    fn bare(value: QuadReal, spectrum: &'static str) -> Self {
        Witness {
            value,
            spectrum,
            origin: None,
        }
    }
}

/// Non-strict and strict verdict for one notion. The witness is the line
/// that decided it: the violating line, the line sitting on the threshold,
/// or the smallest line checked.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Verdict {
    pub stable: bool,
    pub strict: bool,
    pub witness: Option<Witness>,
}

impl Verdict {
    fn and(a: Verdict, b: Verdict) -> Verdict {
        let witness = if !a.stable {
            a.witness
        } else if !b.stable {
            b.witness
        } else if !a.strict {
            a.witness
        } else if !b.strict {
            b.witness
        } else {
            a.witness.or(b.witness)
        };
        Verdict {
            stable: a.stable && b.stable,
            strict: a.strict && b.strict,
            witness,
        }
    }

    fn unstable(witness: Option<Witness>) -> Verdict {
        Verdict {
            stable: false,
            strict: false,
            witness,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct StabilityReport {
    pub n: u32,
    pub eh: Verdict,
    pub linear: Verdict,
    pub tangential: Verdict,
    pub physical: Verdict,
    pub thresholds: Vec<(&'static str, QuadReal)>,
}

impl StabilityReport {
    pub fn notions(&self) -> [(&'static str, &Verdict); 4] {
        [
            ("eh", &self.eh),
            ("linear", &self.linear),
            ("tangential", &self.tangential),
            ("physical", &self.physical),
        ]
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum StabilityError {
    /// The spectra stop short of a threshold a verdict depends on.
    InsufficientCutoff {
        spectrum: &'static str,
        required: QuadReal,
        available: QuadReal,
    },
    NotNormalized,
    Cone(ConeError),
}

impl fmt::Display for StabilityError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            StabilityError::InsufficientCutoff {
                spectrum,
                required,
                available,
            } => write!(
                f,
                "{spectrum} is complete only up to {available}; deciding stability needs {required}"
            ),
            StabilityError::NotNormalized => write!(f, "spectrum is not normalized to Ric = (n-1)g"),
            StabilityError::Cone(e) => write!(f, "{e}"),
        }
    }
}

impl core::error::Error for StabilityError {}

impl From<ConeError> for StabilityError {
    fn from(e: ConeError) -> Self {
        StabilityError::Cone(e)
    }
}

// Outcome of a lower-bound test; `None` when the data does not reach far
// enough to decide.
fn floor_test<'a>(
    mut candidates: impl Iterator<Item = &'a SpectralLine>,
    spectrum: &Spectrum,
    name: &'static str,
    threshold: &QuadReal,
) -> Option<Verdict> {
    match candidates.next() {
        Some(l) => {
            let w = Some(Witness::of(l, name));
            Some(match l.value.cmp(threshold) {
                core::cmp::Ordering::Less => Verdict::unstable(w),
                core::cmp::Ordering::Equal => Verdict {
                    stable: true,
                    strict: false,
                    witness: w,
                },
                core::cmp::Ordering::Greater => Verdict {
                    stable: true,
                    strict: true,
                    witness: w,
                },
            })
        }
        // nothing at or below the cutoff, so everything lies above it
        None if spectrum.cutoff() >= threshold => Some(Verdict {
            stable: true,
            strict: true,
            witness: None,
        }),
        None => None,
    }
}

fn insufficient(spectrum: &Spectrum, name: &'static str, threshold: &QuadReal) -> StabilityError {
    StabilityError::InsufficientCutoff {
        spectrum: name,
        required: threshold.clone(),
        available: spectrum.cutoff().clone(),
    }
}

fn tt_floor(gs: &GeometricSpectrum, threshold: &QuadReal) -> Option<Verdict> {
    floor_test(gs.spec_tt.lines().iter(), &gs.spec_tt, "specE_TT", threshold)
}

fn laplace_floor(gs: &GeometricSpectrum, threshold: &QuadReal) -> Option<Verdict> {
    let dim = gs.dim();
    let candidates = gs
        .spec0
        .lines()
        .iter()
        .filter(move |l| l.value.is_positive() && l.value != dim);
    floor_test(candidates, &gs.spec0, "spec0", threshold)
}

// EH combined with a Laplace floor; an EH failure decides on its own.
fn combined(
    gs: &GeometricSpectrum,
    eh: &Verdict,
    threshold: &QuadReal,
) -> Result<Verdict, StabilityError> {
    if !eh.stable {
        return Ok(eh.clone());
    }
    let lap = laplace_floor(gs, threshold).ok_or_else(|| insufficient(&gs.spec0, "spec0", threshold))?;
    Ok(Verdict::and(eh.clone(), lap))
}

pub fn linear_threshold(n: u32) -> QuadReal {
    QuadReal::integer(2 * (n as i64 - 1))
}

pub fn tangential_threshold(n: u32) -> QuadReal {
    QuadReal::integer(2 * (n as i64 + 1))
}

pub fn physical_threshold(n: u32) -> QuadReal {
    crate::spectra::hardy_bound(n)
}

/// Base Laplace bound for a linearly stable cone,
/// `2n − (n/2)(√(1+8/n) − 1) = 5n/2 − √(n²+8n)/2`.
pub fn cone_linear_threshold(n: u32) -> QuadReal {
    let n = n as i64;
    QuadReal::new(rat(5 * n, 2), rat(-1, 2), int(n * n + 8 * n)).expect("positive radicand")
}

/// Classifies a [`GeometricSpectrum`] by the four stability notions.
pub fn classify(gs: &GeometricSpectrum) -> Result<StabilityReport, StabilityError> {
    if !gs.normalized {
        return Err(StabilityError::NotNormalized);
    }
    let n = gs.n;
    let zero = QuadReal::zero();
    let eh = tt_floor(gs, &zero).ok_or_else(|| insufficient(&gs.spec_tt, "specE_TT", &zero))?;
    let lin_t = linear_threshold(n);
    let tan_t = tangential_threshold(n);
    let phys_t = physical_threshold(n);
    let linear = combined(gs, &eh, &lin_t)?;
    let tangential = combined(gs, &eh, &tan_t)?;
    let physical =
        tt_floor(gs, &phys_t).ok_or_else(|| insufficient(&gs.spec_tt, "specE_TT", &phys_t))?;
    Ok(StabilityReport {
        n,
        eh,
        linear,
        tangential,
        physical,
        thresholds: alloc::vec![
            ("eh", zero),
            ("linear", lin_t),
            ("tangential", tan_t),
            ("physical", phys_t),
        ],
    })
}

/// Stability of the sine-cone predicted from base data alone.
///
/// The cone always carries the Laplace eigenvalue `η_{n+1}(2) = 2(n+2)`,
/// which sits exactly on its tangential threshold `2((n+1)+1)`; the cone is
/// therefore never strictly tangentially stable, and the strict verdict is
/// reported as such with that witness.
pub fn predict_cone(gs: &GeometricSpectrum) -> Result<StabilityReport, StabilityError> {
    let base = classify(gs)?;
    let n = gs.n;
    let cone_lin = cone_linear_threshold(n);
    let linear = combined(gs, &base.eh, &cone_lin)?;

    let corner = QuadReal::integer(2 * (n as i64 + 2));
    let tangential = if base.tangential.stable {
        Verdict {
            stable: true,
            strict: false,
            witness: Some(Witness::bare(corner, "spec0")),
        }
    } else {
        base.tangential.clone()
    };

    // bounded below iff the base is physical; then every cone TT value is at
    // least −(n²−1)/4, strictly above the cone's own bound −n²/4
    let physical = Verdict {
        stable: base.physical.stable,
        strict: base.physical.stable,
        witness: base.physical.witness.clone(),
    };
    let m = n as i64 + 1;
    Ok(StabilityReport {
        n: n + 1,
        eh: base.eh.clone(),
        linear,
        tangential,
        physical,
        thresholds: alloc::vec![
            ("eh", QuadReal::zero()),
            ("linear", QuadReal::integer(2 * (m - 1))),
            ("tangential", QuadReal::integer(2 * (m + 1))),
            ("physical", physical_threshold(m as u32)),
            ("base_laplace_for_cone_linear", cone_lin),
        ],
    })
}

/// Classification of the cone computed from its spectra. A base with a TT
/// eigenvalue below the Hardy bound gives an operator unbounded below, which
/// fails every notion.
pub fn classify_cone(gs: &GeometricSpectrum, cutoff: &QuadReal) -> Result<StabilityReport, StabilityError> {
    match cone_step(gs, cutoff, MapOptions::default()) {
        Ok(cone) => classify(&cone),
        Err(ConeError::UnboundedBelow { kappa, .. }) => {
            let w = Some(Witness::bare(kappa, "specE_TT"));
            let v = Verdict::unstable(w);
            let m = gs.n + 1;
            Ok(StabilityReport {
                n: m,
                eh: v.clone(),
                linear: v.clone(),
                tangential: v.clone(),
                physical: v,
                thresholds: alloc::vec![("physical", physical_threshold(m))],
            })
        }
        Err(e) => Err(e.into()),
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Discrepancy {
    pub notion: &'static str,
    pub strict: bool,
    pub predicted: bool,
    pub direct: bool,
    pub predicted_witness: Option<Witness>,
    pub direct_witness: Option<Witness>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CrossCheck {
    pub predicted: StabilityReport,
    pub direct: StabilityReport,
    pub discrepancies: Vec<Discrepancy>,
}

impl CrossCheck {
    pub fn consistent(&self) -> bool {
        self.discrepancies.is_empty()
    }
}

/// Compares [`predict_cone`] with [`classify_cone`] on every notion, strict
/// and non-strict. `cutoff` bounds the cone spectra; `2(n+2)` suffices.
pub fn cross_check(gs: &GeometricSpectrum, cutoff: &QuadReal) -> Result<CrossCheck, StabilityError> {
    let predicted = predict_cone(gs)?;
    let direct = classify_cone(gs, cutoff)?;
    let mut discrepancies = Vec::new();
    for ((notion, p), (_, d)) in predicted.notions().into_iter().zip(direct.notions()) {
        for (strict, pv, dv) in [(false, p.stable, d.stable), (true, p.strict, d.strict)] {
            if pv != dv {
                discrepancies.push(Discrepancy {
                    notion,
                    strict,
                    predicted: pv,
                    direct: dv,
                    predicted_witness: p.witness.clone(),
                    direct_witness: d.witness.clone(),
                });
            }
        }
    }
    Ok(CrossCheck {
        predicted,
        direct,
        discrepancies,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog::{product_base, ProductMarker};

    fn qi(v: i64) -> QuadReal {
        QuadReal::integer(v)
    }

    fn synthetic(n: u32, lam1: i64, kappa: i64) -> GeometricSpectrum {
        GeometricSpectrum {
            n,
            normalized: true,
            spec0: Spectrum::from_pairs([(qi(0), 1), (qi(lam1), 2)], qi(60)),
            spec1d: Spectrum::from_pairs([(qi(n as i64), 1)], qi(60)),
            spec_tt: Spectrum::from_pairs([(qi(kappa), 1)], qi(60)),
        }
    }

    #[test]
    fn product_nine() {
        let r = classify(&product_base(&ProductMarker::new(4, 5))).unwrap();
        assert!(!r.eh.stable);
        assert!(r.physical.stable && !r.physical.strict);
        assert_eq!(r.physical.witness.unwrap().value, qi(-16));
        assert!(!r.linear.stable && !r.tangential.stable);
    }

    #[test]
    fn boundary_verdicts() {
        let r = classify(&synthetic(4, 10, 3)).unwrap();
        assert!(r.tangential.stable && !r.tangential.strict);
        let r = classify(&synthetic(4, 10, 0)).unwrap();
        assert!(r.eh.stable && !r.eh.strict);
    }

    #[test]
    fn threshold_value() {
        let t = cone_linear_threshold(9);
        assert_eq!(t, QuadReal::new(rat(45, 2), rat(-3, 2), int(17)).unwrap());
        // feeding the threshold itself: stable, not strict
        let gs = GeometricSpectrum {
            n: 9,
            normalized: true,
            spec0: Spectrum::from_pairs([(qi(0), 1), (t.clone(), 1)], qi(60)),
            spec1d: Spectrum::empty(qi(60)),
            spec_tt: Spectrum::from_pairs([(qi(1), 1)], qi(60)),
        };
        let p = predict_cone(&gs).unwrap();
        assert!(p.linear.stable && !p.linear.strict);
        let c = cross_check(&gs, &qi(30)).unwrap();
        assert!(c.consistent(), "{:?}", c.discrepancies);
    }

    #[test]
    fn cross_check_examples() {
        for gs in [
            product_base(&ProductMarker::new(4, 5)),
            product_base(&ProductMarker::new(4, 4)),
            synthetic(4, 10, 0),
            synthetic(5, 30, 2),
            synthetic(3, 3, 1),
        ] {
            let c = cross_check(&gs, &qi(2 * (gs.n as i64 + 2))).unwrap();
            assert!(c.consistent(), "n={} {:?}", gs.n, c.discrepancies);
        }
    }
}
