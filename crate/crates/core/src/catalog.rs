//! Built-in base spectra: round spheres and product TT markers.

use alloc::vec::Vec;

use num_bigint::BigUint;
use num_traits::{ToPrimitive, Zero};

use crate::exactreal::QuadReal;
use crate::spectra::{GeometricSpectrum, Spectrum};

/// Dimension of degree-`k` harmonic polynomials in `n + 1` variables,
/// `C(n+k, k) − C(n+k−2, k−2)`.
///
/// Panics if the count does not fit in a `u64`.
pub fn sphere_multiplicity(n: u32, k: u64) -> u64 {
    let n = n as u64;
    let full = binomial(n + k, k);
    let lower = if k >= 2 {
        binomial(n + k - 2, k - 2)
    } else {
        BigUint::zero()
    };
    (full - lower)
        .to_u64()
        .expect("sphere multiplicity overflows u64")
}

fn binomial(n: u64, k: u64) -> BigUint {
    let k = k.min(n - k);
    let mut acc = BigUint::from(1u32);
    for i in 0..k {
        acc = acc * BigUint::from(n - i) / BigUint::from(i + 1);
    }
    acc
}

/// Laplace spectrum of the round unit sphere Sⁿ: `k(k+n−1)` with harmonic
/// polynomial multiplicities, complete up to `cutoff`.
pub fn sphere_functions(n: u32, cutoff: &QuadReal) -> Spectrum {
    assert!(n >= 2, "sphere dimension must be at least 2");
    let mut pairs = Vec::new();
    let mut k: u64 = 0;
    loop {
        let v = QuadReal::integer((k * (k + n as u64 - 1)) as i64);
        if &v > cutoff {
            break;
        }
        pairs.push((v, sphere_multiplicity(n, k)));
        k += 1;
    }
    Spectrum::from_pairs(pairs, cutoff.clone())
}

/// Base data for Sⁿ with only the Laplace spectrum known. The coclosed and
/// TT spectra are empty with cutoff below their first possible value, so
/// any map that needs them refuses with an insufficient-cutoff error.
pub fn sphere_base(n: u32, cutoff: &QuadReal) -> GeometricSpectrum {
    let below = QuadReal::integer(-(n as i64) * (n as i64));
    GeometricSpectrum {
        n,
        normalized: true,
        spec0: sphere_functions(n, cutoff),
        spec1d: Spectrum::empty(below.clone()),
        spec_tt: Spectrum::empty(below),
    }
}

/// A product `M₁ × M₂` normalized to `Ric = (n−1)g`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct ProductMarker {
    pub n1: u32,
    pub n2: u32,
    /// Asserts the factors are strictly linearly stable, so that the marker
    /// is the only nonpositive TT eigenvalue.
    pub factors_strictly_stable: bool,
}

impl ProductMarker {
    pub fn new(n1: u32, n2: u32) -> Self {
        assert!(n1 >= 2 && n2 >= 2, "product factors need dimension at least 2");
        ProductMarker {
            n1,
            n2,
            factors_strictly_stable: true,
        }
    }

    /// Splits `n` into two factors of dimension at least 2.
    pub fn of_dim(n: u32) -> Self {
        assert!(n >= 4, "a product of two factors needs n >= 4");
        Self::new(n / 2, n - n / 2)
    }

    pub fn n(&self) -> u32 {
        self.n1 + self.n2
    }
}

/// The TT eigenvalue `−2(n−1)` carried by `g₁/n₁ − g₂/n₂`, multiplicity 1.
pub fn product_tt_marker(m: &ProductMarker) -> (QuadReal, u64) {
    (QuadReal::integer(-2 * (m.n() as i64 - 1)), 1)
}

/// Base data for a product: Δ₀ and Δ₁ are only known in the trivial range,
/// and the TT spectrum holds just the marker. With strictly stable factors
/// the TT data is complete through 0; otherwise only through the marker.
pub fn product_base(m: &ProductMarker) -> GeometricSpectrum {
    let (kappa, mult) = product_tt_marker(m);
    let tt_cutoff = if m.factors_strictly_stable {
        QuadReal::zero()
    } else {
        kappa.clone()
    };
    GeometricSpectrum {
        n: m.n(),
        normalized: true,
        spec0: Spectrum::from_pairs([(QuadReal::zero(), 1)], QuadReal::zero()),
        spec1d: Spectrum::empty(QuadReal::zero()),
        spec_tt: Spectrum::from_pairs([(kappa, mult)], tt_cutoff),
    }
}

/// Symmetric spaces whose sine-cones are listed as dynamically stable; name
/// and dimension only.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct SymmetricStub {
    pub name: &'static str,
    pub dim: u32,
}

pub const EXCEPTIONAL_GROUPS: [SymmetricStub; 4] = [
    SymmetricStub { name: "E6", dim: 78 },
    SymmetricStub { name: "E7", dim: 133 },
    SymmetricStub { name: "E8", dim: 248 },
    SymmetricStub { name: "F4", dim: 52 },
];

/// Spin(p) for p ≥ 6, p ≠ 7.
pub fn spin_group(p: u32) -> Option<SymmetricStub> {
    (p >= 6 && p != 7).then(|| SymmetricStub {
        name: "Spin(p)",
        dim: p * (p - 1) / 2,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    // count monomials of degree k in n+1 variables, minus those of degree k−2
    fn brute(n: u32, k: u64) -> u64 {
        fn monomials(vars: u32, deg: u64) -> u64 {
            if vars == 1 {
                return 1;
            }
            (0..=deg).map(|d| monomials(vars - 1, deg - d)).sum()
        }
        let lower = if k >= 2 { monomials(n + 1, k - 2) } else { 0 };
        monomials(n + 1, k) - lower
    }

    #[test]
    fn multiplicities_match_brute_force() {
        for n in 2..7 {
            for k in 0..9 {
                assert_eq!(sphere_multiplicity(n, k), brute(n, k), "n={n} k={k}");
            }
        }
        for k in 0..10 {
            assert_eq!(sphere_multiplicity(3, k), (k + 1) * (k + 1));
            assert_eq!(sphere_multiplicity(2, k), 2 * k + 1);
        }
    }

    #[test]
    fn low_spheres() {
        let s3 = sphere_functions(3, &QuadReal::integer(15));
        let got: Vec<(i64, u64)> = s3
            .lines()
            .iter()
            .map(|l| (l.value.as_integer().unwrap().try_into().unwrap(), l.multiplicity))
            .collect();
        assert_eq!(got, [(0, 1), (3, 4), (8, 9), (15, 16)]);
        let s2 = sphere_functions(2, &QuadReal::integer(6));
        assert_eq!(s2.len(), 3);
        assert_eq!(s2.multiplicity_of(&QuadReal::integer(6)), 5);
    }

    #[test]
    fn product_markers() {
        assert_eq!(
            product_tt_marker(&ProductMarker::new(4, 5)),
            (QuadReal::integer(-16), 1)
        );
        assert_eq!(
            product_tt_marker(&ProductMarker::new(2, 2)),
            (QuadReal::integer(-6), 1)
        );
        assert_eq!(
            product_tt_marker(&ProductMarker::new(5, 5)),
            (QuadReal::integer(-18), 1)
        );
    }
}
