//! Spectra as merged multisets with an explicit completeness cutoff.

use alloc::collections::BTreeMap;
use alloc::string::String;
use alloc::vec::Vec;
use core::fmt;

use crate::exactreal::{QuadReal, Rational};

/// Which eigenvalue family a line came from.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Family {
    /// Supplied directly (catalog, file, product marker).
    Input,
    /// Generated from a Δ₀ line of the base.
    Lambda,
    /// Generated from a coclosed Δ₁ line of the base.
    Mu,
    /// Generated from a TT line of the base.
    Kappa,
}

impl Family {
    pub fn as_str(self) -> &'static str {
        match self {
            Family::Input => "input",
            Family::Lambda => "lambda",
            Family::Mu => "mu",
            Family::Kappa => "kappa",
        }
    }
}

/// Provenance of part of a line's multiplicity: base line `index`, shift `shift`.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Origin {
    pub family: Family,
    pub index: usize,
    pub shift: u64,
    pub multiplicity: u64,
}

impl Origin {
    pub fn input(index: usize, multiplicity: u64) -> Self {
        Origin {
            family: Family::Input,
            index,
            shift: 0,
            multiplicity,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SpectralLine {
    pub value: QuadReal,
    pub multiplicity: u64,
    pub origins: Vec<Origin>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Spectrum {
    lines: Vec<SpectralLine>,
    cutoff: QuadReal,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum SpectraError {
    /// A comparison bound exceeds what one of the spectra certifies.
    CutoffTooSmall { bound: QuadReal, cutoff: QuadReal },
}

impl fmt::Display for SpectraError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SpectraError::CutoffTooSmall { bound, cutoff } => {
                write!(f, "bound {bound} exceeds spectrum cutoff {cutoff}")
            }
        }
    }
}

impl core::error::Error for SpectraError {}

impl Spectrum {
    pub fn empty(cutoff: QuadReal) -> Self {
        Spectrum {
            lines: Vec::new(),
            cutoff,
        }
    }

    /// Merges raw `(value, origin)` contributions; multiplicities come from
    /// the origins. Values above `cutoff` are dropped.
    pub fn merge<I>(raw: I, cutoff: QuadReal) -> Self
    where
        I: IntoIterator<Item = (QuadReal, Origin)>,
    {
        let mut acc: BTreeMap<QuadReal, Vec<Origin>> = BTreeMap::new();
        for (value, origin) in raw {
            if origin.multiplicity == 0 || value > cutoff {
                continue;
            }
            acc.entry(value).or_default().push(origin);
        }
        let lines = acc
            .into_iter()
            .map(|(value, mut origins)| {
                origins.sort();
                let multiplicity = origins.iter().map(|o| o.multiplicity).sum();
                SpectralLine {
                    value,
                    multiplicity,
                    origins,
                }
            })
            .collect();
        Spectrum { lines, cutoff }
    }

    /// Convenience for hand-written spectra: each pair becomes an input line.
    pub fn from_pairs<I>(pairs: I, cutoff: QuadReal) -> Self
    where
        I: IntoIterator<Item = (QuadReal, u64)>,
    {
        Self::merge(
            pairs
                .into_iter()
                .enumerate()
                .map(|(i, (v, m))| (v, Origin::input(i, m))),
            cutoff,
        )
    }

    pub fn lines(&self) -> &[SpectralLine] {
        &self.lines
    }

    pub fn cutoff(&self) -> &QuadReal {
        &self.cutoff
    }

    pub fn is_empty(&self) -> bool {
        self.lines.is_empty()
    }

    pub fn len(&self) -> usize {
        self.lines.len()
    }

    /// Flattens back to raw contributions, so that `merge` round-trips.
    pub fn raw(&self) -> impl Iterator<Item = (QuadReal, Origin)> + '_ {
        self.lines
            .iter()
            .flat_map(|l| l.origins.iter().map(move |o| (l.value.clone(), o.clone())))
    }

    pub fn multiplicity_of(&self, value: &QuadReal) -> u64 {
        self.lines
            .binary_search_by(|l| l.value.cmp(value))
            .map(|i| self.lines[i].multiplicity)
            .unwrap_or(0)
    }

    pub fn min_line(&self) -> Option<&SpectralLine> {
        self.lines.first()
    }

    /// Smallest strictly positive line.
    pub fn positive_min(&self) -> Option<&QuadReal> {
        self.positive_min_line().map(|l| &l.value)
    }

    pub fn positive_min_line(&self) -> Option<&SpectralLine> {
        self.lines.iter().find(|l| l.value.is_positive())
    }

    /// Smallest positive line different from `skip`.
    pub fn positive_min_excluding(&self, skip: &QuadReal) -> Option<&SpectralLine> {
        self.lines
            .iter()
            .find(|l| l.value.is_positive() && &l.value != skip)
    }

    /// Lines with value at most `bound`.
    pub fn up_to<'a>(&'a self, bound: &'a QuadReal) -> impl Iterator<Item = &'a SpectralLine> {
        self.lines.iter().take_while(move |l| &l.value <= bound)
    }

    /// Restricts to lines ≤ `cutoff` and lowers the cutoff accordingly.
    pub fn truncate(&self, cutoff: &QuadReal) -> Spectrum {
        let cutoff = if cutoff < &self.cutoff {
            cutoff.clone()
        } else {
            self.cutoff.clone()
        };
        Spectrum {
            lines: self.up_to(&cutoff).cloned().collect(),
            cutoff,
        }
    }

    /// Exact value-and-multiplicity equality below `bound`, origins ignored.
    pub fn equal_up_to(&self, other: &Spectrum, bound: &QuadReal) -> Result<bool, SpectraError> {
        for s in [self, other] {
            if bound > &s.cutoff {
                return Err(SpectraError::CutoffTooSmall {
                    bound: bound.clone(),
                    cutoff: s.cutoff.clone(),
                });
            }
        }
        let mut a = self.up_to(bound);
        let mut b = other.up_to(bound);
        loop {
            match (a.next(), b.next()) {
                (None, None) => return Ok(true),
                (Some(x), Some(y)) => {
                    if x.value != y.value || x.multiplicity != y.multiplicity {
                        return Ok(false);
                    }
                }
                _ => return Ok(false),
            }
        }
    }

    /// Concatenates several spectra; the result is complete up to the
    /// smallest of their cutoffs.
    pub fn union<'a, I>(parts: I) -> Spectrum
    where
        I: IntoIterator<Item = &'a Spectrum>,
    {
        let parts: Vec<&Spectrum> = parts.into_iter().collect();
        let cutoff = parts
            .iter()
            .map(|s| s.cutoff.clone())
            .min()
            .unwrap_or_else(QuadReal::zero);
        Spectrum::merge(parts.iter().flat_map(|s| s.raw()), cutoff)
    }
}

/// The triple of base spectra the cone maps consume and produce.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GeometricSpectrum {
    pub n: u32,
    pub normalized: bool,
    pub spec0: Spectrum,
    pub spec1d: Spectrum,
    pub spec_tt: Spectrum,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Violation {
    DimensionTooSmall(u32),
    NotNormalized,
    /// Zero must be a simple eigenvalue of Δ₀ (connected base).
    ZeroMultiplicity(u64),
    NegativeLaplace(QuadReal),
    /// A coclosed 1-form eigenvalue below n − 1.
    CoclosedBelowBound(QuadReal),
    /// A positive Δ₀ eigenvalue below n; a warning unless overridden.
    Obata(QuadReal),
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Violation::DimensionTooSmall(n) => write!(f, "dimension {n} is below 2"),
            Violation::NotNormalized => write!(f, "spectrum is not normalized to Ric = (n-1)g"),
            Violation::ZeroMultiplicity(m) => {
                write!(f, "eigenvalue 0 of the Laplacian has multiplicity {m}, expected 1 (connected base)")
            }
            Violation::NegativeLaplace(v) => write!(f, "negative Laplace eigenvalue {v}"),
            Violation::CoclosedBelowBound(v) => {
                write!(f, "spec1D value {v} below n-1 (coclosed 1-form bound)")
            }
            Violation::Obata(v) => write!(f, "positive Laplace eigenvalue {v} below n (Obata bound)"),
        }
    }
}

/// Outcome of validating a [`GeometricSpectrum`]: hard errors and warnings.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Validation {
    pub errors: Vec<Violation>,
    pub warnings: Vec<Violation>,
}

impl Validation {
    pub fn is_ok(&self) -> bool {
        self.errors.is_empty()
    }
}

impl GeometricSpectrum {
    pub fn dim(&self) -> QuadReal {
        QuadReal::integer(self.n as i64)
    }

    /// Checks the structural invariants. Obata violations are warnings
    /// unless `strict_obata` is set.
    pub fn validate(&self, strict_obata: bool) -> Validation {
        let mut v = Validation::default();
        if self.n < 2 {
            v.errors.push(Violation::DimensionTooSmall(self.n));
        }
        if !self.normalized {
            v.errors.push(Violation::NotNormalized);
        }
        let zero_mult = self.spec0.multiplicity_of(&QuadReal::zero());
        if zero_mult != 1 {
            v.errors.push(Violation::ZeroMultiplicity(zero_mult));
        }
        let n = self.dim();
        for l in self.spec0.lines() {
            if l.value.is_negative() {
                v.errors.push(Violation::NegativeLaplace(l.value.clone()));
            } else if l.value.is_positive() && l.value < n {
                let w = Violation::Obata(l.value.clone());
                if strict_obata {
                    v.errors.push(w);
                } else {
                    v.warnings.push(w);
                }
            }
        }
        let floor = n.add_rational(&-Rational::from_integer(1.into()));
        for l in self.spec1d.lines() {
            if l.value < floor {
                v.errors.push(Violation::CoclosedBelowBound(l.value.clone()));
            }
        }
        v
    }

    /// Hardy bound −(n−1)²/4 for TT eigenvalues.
    pub fn hardy_bound(&self) -> QuadReal {
        hardy_bound(self.n)
    }
}

/// −(n−1)²/4.
pub fn hardy_bound(n: u32) -> QuadReal {
    let m = n as i64 - 1;
    QuadReal::rational(crate::exactreal::rat(-m * m, 4))
}

/// Renders a spectrum as `value:mult` pairs, mostly for diagnostics.
pub fn summary(s: &Spectrum) -> String {
    use core::fmt::Write;
    let mut out = String::from("{");
    for (i, l) in s.lines().iter().enumerate() {
        if i > 0 {
            out.push_str(", ");
        }
        let _ = write!(out, "{}:{}", l.value, l.multiplicity);
    }
    out.push('}');
    out
}

impl fmt::Display for Spectrum {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} (complete to {})", summary(self), self.cutoff)
    }
}


#[cfg(test)]
mod tests {
    use super::*;
    use alloc::vec;

    fn qi(v: i64) -> QuadReal {
        QuadReal::integer(v)
    }

    fn tagged(v: i64, m: u64, fam: Family) -> (QuadReal, Origin) {
        (
            qi(v),
            Origin {
                family: fam,
                index: 0,
                shift: 0,
                multiplicity: m,
            },
        )
    }

    #[test]
    fn merge_combines_and_truncates() {
        let raw = vec![
            tagged(4, 1, Family::Lambda),
            tagged(4, 3, Family::Mu),
            tagged(10, 2, Family::Lambda),
            tagged(11, 7, Family::Lambda),
        ];
        let s = Spectrum::merge(raw, qi(10));
        assert_eq!(s.len(), 2);
        assert_eq!(s.multiplicity_of(&qi(4)), 4);
        assert_eq!(s.multiplicity_of(&qi(10)), 2);
        assert_eq!(s.lines()[0].origins.len(), 2);
        assert!(Spectrum::merge(Vec::new(), qi(10)).is_empty());
    }

    #[test]
    fn positive_minimum() {
        let s = Spectrum::from_pairs([(qi(-16), 1), (qi(0), 1), (qi(4), 2)], qi(10));
        assert_eq!(s.positive_min(), Some(&qi(4)));
        let z = Spectrum::from_pairs([(qi(0), 1)], qi(10));
        assert_eq!(z.positive_min(), None);
        assert_eq!(
            s.positive_min_excluding(&qi(4)).map(|l| l.value.clone()),
            None
        );
    }

    #[test]
    fn equality_up_to_bound() {
        let a = Spectrum::from_pairs([(qi(4), 1)], qi(10));
        let b = Spectrum::from_pairs([(qi(4), 2)], qi(10));
        assert_eq!(a.equal_up_to(&a, &qi(10)), Ok(true));
        assert_eq!(a.equal_up_to(&b, &qi(10)), Ok(false));
        assert_eq!(a.equal_up_to(&b, &qi(3)), Ok(true));
        assert!(matches!(
            a.equal_up_to(&b, &qi(11)),
            Err(SpectraError::CutoffTooSmall { .. })
        ));
    }

    #[test]
    fn validation_flags() {
        let gs = GeometricSpectrum {
            n: 4,
            normalized: true,
            spec0: Spectrum::from_pairs([(qi(0), 1), (qi(3), 1)], qi(10)),
            spec1d: Spectrum::from_pairs([(qi(2), 1)], qi(10)),
            spec_tt: Spectrum::empty(qi(10)),
        };
        let v = gs.validate(false);
        assert_eq!(v.errors, vec![Violation::CoclosedBelowBound(qi(2))]);
        assert_eq!(v.warnings, vec![Violation::Obata(qi(3))]);
        assert_eq!(gs.validate(true).errors.len(), 2);
    }
}
