use std::path::Path;

use proptest::prelude::*;
use sinecone::files::{builtin, load_geometric_spectrum, parse_geometric_spectrum, save_geometric_spectrum, LoadError};
use sinecone::json::SpectrumFile;
use sinecone_core::catalog::{product_base, sphere_base, ProductMarker};
use sinecone_core::exactreal::{int, rat, QuadReal};
use sinecone_core::spectra::{hardy_bound, GeometricSpectrum, Spectrum, Violation};

fn q(v: i64) -> QuadReal {
    QuadReal::integer(v)
}

fn base(n: u32, mu: QuadReal, kappa: QuadReal) -> GeometricSpectrum {
    let nn = n as i64;
    let cutoff = q(50);
    GeometricSpectrum {
        n,
        normalized: true,
        spec0: Spectrum::from_pairs([(q(0), 1), (q(nn), nn as u64 + 1)], cutoff.clone()),
        spec1d: Spectrum::from_pairs([(mu, 3)], cutoff.clone()),
        spec_tt: Spectrum::from_pairs([(kappa, 2)], cutoff),
    }
}

// Values, multiplicities and cutoffs; origins record input order only.
fn content(gs: &GeometricSpectrum) -> Vec<(Vec<(QuadReal, u64)>, QuadReal)> {
    [&gs.spec0, &gs.spec1d, &gs.spec_tt]
        .iter()
        .map(|s| (s.lines().iter().map(|l| (l.value.clone(), l.multiplicity)).collect(), s.cutoff().clone()))
        .collect()
}

fn parse(gs: &GeometricSpectrum) -> Result<GeometricSpectrum, LoadError> {
    let text = serde_json::to_string(&SpectrumFile::from_geometric(gs)).unwrap();
    parse_geometric_spectrum(&text, Path::new("mem.json"), false).map(|l| l.spectrum)
}

#[test]
fn save_load_round_trip() {
    let dir = tempfile::tempdir().unwrap();
    let mut cases = vec![sphere_base(4, &q(60)), product_base(&ProductMarker::new(4, 5))];
    let irr = QuadReal::new(rat(45, 2), rat(-3, 2), int(17)).unwrap();
    cases.push(base(9, irr, hardy_bound(9)));
    for (i, gs) in cases.iter().enumerate() {
        let path = dir.path().join(format!("b{i}.json"));
        save_geometric_spectrum(gs, &path).unwrap();
        let back = load_geometric_spectrum(&path, false).unwrap();
        assert_eq!(&back.spectrum, gs);
    }
}

#[test]
fn coclosed_bound_violation_rejected() {
    let err = parse(&base(5, q(3), q(0))).unwrap_err();
    match err {
        LoadError::InvariantViolation { violations, .. } => {
            assert!(violations.iter().any(|v| v.contains("coclosed 1-form bound")), "{violations:?}")
        }
        e => panic!("{e}"),
    }
    assert!(parse(&base(5, q(4), q(0))).is_ok());
}

#[test]
fn hardy_bound_kappa_accepted() {
    for n in 3..12 {
        let gs = base(n, q(n as i64 - 1), hardy_bound(n));
        assert_eq!(parse(&gs).unwrap(), gs);
    }
}

#[test]
fn obata_is_a_warning_unless_strict() {
    let mut gs = base(5, q(4), q(0));
    gs.spec0 = Spectrum::from_pairs([(q(0), 1), (q(3), 2)], q(50));
    let text = serde_json::to_string(&SpectrumFile::from_geometric(&gs)).unwrap();
    let loaded = parse_geometric_spectrum(&text, Path::new("x"), false).unwrap();
    assert_eq!(loaded.warnings, vec![Violation::Obata(q(3))]);
    assert!(parse_geometric_spectrum(&text, Path::new("x"), true).is_err());
}

#[test]
fn malformed_files() {
    let p = Path::new("bad.json");
    assert!(matches!(parse_geometric_spectrum("{", p, false), Err(LoadError::Parse { .. })));
    let missing = r#"{"n": 3, "normalized": true, "spec0": [], "spec1D": []}"#;
    assert!(matches!(parse_geometric_spectrum(missing, p, false), Err(LoadError::Parse { .. })));
    // 15 lies above the declared cutoff 10
    let above = r#"{"n": 3, "normalized": true, "cutoff": 10,
        "spec0": [{"value": 0, "mult": 1}, {"value": 15, "mult": 16}],
        "spec1D": [], "specE_TT": []}"#;
    assert!(matches!(parse_geometric_spectrum(above, p, false), Err(LoadError::InvariantViolation { .. })));
    let shorthand = r#"{"n": 3, "normalized": true, "cutoff": "17/2",
        "spec0": [{"value": 0, "mult": 1}, {"value": "3", "mult": 4}, {"value": {"a": "8"}, "mult": 9}],
        "spec1D": [], "specE_TT": []}"#;
    let gs = parse_geometric_spectrum(shorthand, p, false).unwrap().spectrum;
    assert_eq!(gs.spec0, sphere_base(3, &QuadReal::rational(rat(17, 2))).spec0);
    let two_zeros = r#"{"n": 3, "normalized": true, "cutoff": 10,
        "spec0": [{"value": 0, "mult": 2}], "spec1D": [], "specE_TT": []}"#;
    assert!(matches!(parse_geometric_spectrum(two_zeros, p, false), Err(LoadError::InvariantViolation { .. })));
}

#[test]
fn builtins() {
    assert_eq!(builtin("sphere:3", &q(15)).unwrap().unwrap(), sphere_base(3, &q(15)));
    assert_eq!(
        builtin("product:4x5", &q(0)).unwrap().unwrap(),
        product_base(&ProductMarker::new(4, 5))
    );
    assert!(builtin("sphere:1", &q(1)).unwrap().is_err());
    assert!(builtin("product:1x5", &q(1)).unwrap().is_err());
    assert!(builtin("s3.json", &q(1)).is_none());
}

#[test]
fn shipped_sphere_files_match_catalog() {
    let dir = Path::new(env!("CARGO_MANIFEST_DIR")).join("../../data/spheres");
    for n in 2..=6u32 {
        let loaded = load_geometric_spectrum(&dir.join(format!("s{n}.json")), true).unwrap();
        assert_eq!(loaded.spectrum.spec0, sphere_base(n, &q(100)).spec0);
    }
}

proptest! {
    #[test]
    fn file_round_trip(
        n in 3u32..12,
        lams in proptest::collection::vec((0i64..200, 1i64..7, 1u64..9), 0..5),
        kappas in proptest::collection::vec((0i64..200, 1i64..7, 1u64..4), 0..4),
    ) {
        let nn = n as i64;
        let cutoff = q(100);
        let mut spec0 = vec![(q(0), 1)];
        spec0.extend(lams.iter().map(|(p, d, m)| (q(nn).add_rational(&rat(*p, *d)), *m)));
        let h = hardy_bound(n);
        let gs = GeometricSpectrum {
            n,
            normalized: true,
            spec0: Spectrum::from_pairs(spec0, cutoff.clone()),
            spec1d: Spectrum::from_pairs([(q(nn - 1), 2)], cutoff.clone()),
            spec_tt: Spectrum::from_pairs(kappas.iter().map(|(p, d, m)| (h.add_rational(&rat(*p, *d)), *m)), cutoff),
        };
        let back = parse(&gs).unwrap();
        prop_assert_eq!((back.n, back.normalized), (gs.n, gs.normalized));
        prop_assert_eq!(content(&back), content(&gs));
    }
}
