use sinecone_core::catalog::sphere_base;
use sinecone_core::conemaps::eta;
use sinecone_core::exactreal::{rat, QuadReal};
use sinecone_core::radial::{closed_form_targets, solve_radial, verify_line, Block, RadialProblem};
use sinecone_core::symcheck::build_harmonic_family;

#[test]
fn sphere_lines_match_closed_forms() {
    for n in 3..=5u32 {
        let nn = n as i64;
        let base = sphere_base(n, &QuadReal::integer(100));
        for k in 0..3 {
            let lambda = QuadReal::integer(k * (k + nn - 1));
            let r = verify_line(&base, Block::Function, &lambda, 3, 1e-3, 4000, 1e-6)
                .unwrap_or_else(|e| panic!("n={n} k={k}: {e}"));
            assert_eq!(r.modes.len(), 3);
        }
    }
}

#[test]
fn eigenvalues_grow_with_coupling() {
    let n = 5;
    let mut prev: Option<Vec<f64>> = None;
    // from the Hardy bound −4 upwards
    for c in [rat(-4, 1), rat(-3, 1), rat(-1, 2), rat(0, 1), rat(5, 2), rat(7, 1), rat(20, 1)] {
        let p = RadialProblem::new(n, QuadReal::rational(c), Block::Tt).with_grid(1000, 1e-6);
        let v = solve_radial(&p, 4).unwrap();
        if let Some(prev) = prev {
            assert!(prev.iter().zip(&v).all(|(a, b)| a <= b), "{prev:?} {v:?}");
        }
        prev = Some(v);
    }
}

#[test]
fn harmonic_degrees_match_radial_modes() {
    for n in 3..=5u32 {
        for k in 0..3u64 {
            let lambda = QuadReal::integer((k * (k + n as u64 - 1)) as i64);
            let p = RadialProblem::new(n, lambda.clone(), Block::Function);
            let numeric = solve_radial(&p, 4).unwrap();
            let closed = closed_form_targets(n, &lambda, 4).unwrap();
            for j in 0..4u64 {
                let h = build_harmonic_family(n, k, j).unwrap();
                let degree = h.terms().next().map(|((p, q), _)| p + q as i64).unwrap();
                assert_eq!(degree as u64, k + j);
                let value = eta(n + 1, &QuadReal::integer(degree));
                assert_eq!(value, closed[j as usize]);
                let target = value.to_f64();
                let err = (numeric[j as usize] - target).abs() / target.max(1.0);
                assert!(err < 1e-3, "n={n} k={k} j={j}: {} vs {target}", numeric[j as usize]);
            }
        }
    }
}

#[test]
fn irrational_coupling() {
    // ξ₄(2) = −3/2 + √17/2 is irrational; the radial modes still follow η₅
    let p = RadialProblem::new(4, QuadReal::integer(2), Block::Tt);
    let numeric = solve_radial(&p, 3).unwrap();
    for (num, t) in numeric.iter().zip(closed_form_targets(4, &QuadReal::integer(2), 3).unwrap()) {
        let t = t.to_f64();
        assert!((num - t).abs() / t < 1e-3, "{num} vs {t}");
    }
}
