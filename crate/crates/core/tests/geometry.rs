use std::f64::consts::PI;

use nalgebra::DMatrix;
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use selberg::geometry::{
    classify, compute_length_spectrum, evaluate_word, hyperbolic_weight, ChiRep, ElementKind, EnumeratedGroup,
    EnumerationLimits, GroupSpec, LengthSpectrum, Mat2, Model, SpectrumOptions, WordBall,
};

fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

/// The (2,3,7) triangle group: `x` of order 2, `y` of order 3, `xy` of order 7.
fn triangle_237() -> Vec<Mat2> {
    let tau = 2.0 * (PI / 7.0).cos();
    let b = (tau + (tau * tau - 3.0).sqrt()) / 2.0;
    vec![Mat2::real(0.0, -1.0, 1.0, 0.0), Mat2::real(0.5, b, b - tau, 0.5)]
}

fn schottky() -> Vec<Mat2> {
    let g = Mat2::diag(Complex64::from_polar(1.6, 0.4));
    let h = Mat2::real(1.0, 1.0, 1.0, 2.0);
    let k = Mat2::diag(Complex64::from_polar(1.9, -0.7)).conjugate_by(&h);
    vec![g, k]
}

fn all_words(gens: usize, max_len: usize) -> Vec<Vec<i32>> {
    let letters: Vec<i32> = (1..=gens as i32).flat_map(|k| [k, -k]).collect();
    let mut out = vec![Vec::new()];
    let mut frontier = vec![Vec::new()];
    for _ in 0..max_len {
        let mut next = Vec::new();
        for w in &frontier {
            for &l in &letters {
                let mut v: Vec<i32> = w.clone();
                v.push(l);
                next.push(v);
            }
        }
        out.extend(next.iter().cloned());
        frontier = next;
    }
    out
}

#[test]
fn triangle_group_relations() {
    let g = triangle_237();
    let x = g[0];
    let y = g[1];
    assert!(x.pow(2).projectively_eq(&Mat2::identity(), 1e-12));
    assert!(y.pow(3).projectively_eq(&Mat2::identity(), 1e-12));
    assert!((x * y).pow(7).projectively_eq(&Mat2::identity(), 1e-10));
    for m in [x, y, x * y] {
        assert_eq!(classify(&m, Model::H2Real).unwrap().kind, ElementKind::Elliptic);
    }
}

#[test]
fn ball_matches_pairwise_dedup() {
    let gens = triangle_237();
    for radius in [2, 5] {
        let ball = WordBall::enumerate(&gens, radius, EnumerationLimits::default()).unwrap();
        let mut distinct: Vec<Mat2> = Vec::new();
        for w in all_words(2, radius) {
            let m = evaluate_word(&gens, &w);
            if !distinct.iter().any(|d| d.projectively_eq(&m, 1e-8)) {
                distinct.push(m);
            }
            assert!(ball.find(&m).is_some(), "word {w:?} missing from the ball");
        }
        assert_eq!(ball.len(), distinct.len(), "radius {radius}");
        // every stored word evaluates to its matrix
        for e in &ball.elements {
            assert!(evaluate_word(&gens, &e.word).projectively_eq(&e.matrix, 1e-9));
            assert!(e.word.len() <= radius);
        }
    }
}

#[test]
fn triangle_group_elliptic_orders() {
    let spec = GroupSpec::new(Model::H2Real, triangle_237()).unwrap();
    let opts = SpectrumOptions {
        max_word_len: 6,
        cutoff: 3.0,
        ..SpectrumOptions::default()
    };
    let s = compute_length_spectrum(&spec, &opts).unwrap();
    // every torsion element is conjugate into ⟨x⟩, ⟨y⟩ or ⟨xy⟩
    for r in s.elliptic() {
        let theta = r.angles.angles()[0];
        let ok = [2u32, 3, 7].iter().any(|&k| {
            let step = 2.0 * PI / k as f64;
            let q = theta / step;
            (q - q.round()).abs() < 1e-8
        });
        assert!(ok, "unexpected elliptic angle {theta}");
    }
    assert!(s.hyperbolic().count() > 0);
    assert!(s.hyperbolic().all(|r| r.length > 0.0 && r.length <= 3.0));
}

#[test]
fn invariants_stable_under_conjugation() {
    let gens = schottky();
    let spec = GroupSpec::new(Model::H3Complex, gens.clone()).unwrap();
    let group = EnumeratedGroup::new(&spec, 5, EnumerationLimits::default()).unwrap();
    let records = group.conjugacy_reduce(3.5, &SpectrumOptions::default()).unwrap();
    assert!(!records.is_empty());
    for r in &records {
        let m = spec.evaluate(&r.word);
        for h in gens.iter().chain([gens[0] * gens[1]].iter()) {
            let conj = classify(&m.conjugate_by(h), Model::H3Complex).unwrap();
            assert!((conj.length - r.length).abs() < 1e-9);
            let d1 = hyperbolic_weight(conj.length, &[conj.angle]);
            assert!((d1 - r.d_gamma.unwrap()).abs() < 1e-8 * d1);
        }
    }
}

#[test]
fn chi_trace_is_a_class_function() {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let images: Vec<DMatrix<Complex64>> = (0..2)
        .map(|_| {
            DMatrix::from_fn(3, 3, |i, j| {
                let diag = if i == j { 2.0 } else { 0.0 };
                c(diag + rng.gen_range(-0.5..0.5), rng.gen_range(-0.5..0.5))
            })
        })
        .collect();
    let spec = GroupSpec::new(Model::H3Complex, schottky())
        .unwrap()
        .with_chi(ChiRep::new(images).unwrap())
        .unwrap();
    for _ in 0..50 {
        let w: Vec<i32> = (0..rng.gen_range(1..6))
            .map(|_| *[1, -1, 2, -2].get(rng.gen_range(0..4)).unwrap())
            .collect();
        let h: Vec<i32> = (0..rng.gen_range(1..4))
            .map(|_| *[1, -1, 2, -2].get(rng.gen_range(0..4)).unwrap())
            .collect();
        let mut conj = h.clone();
        conj.extend(&w);
        conj.extend(h.iter().rev().map(|l| -l));
        let a = spec.tr_chi(&w);
        let b = spec.tr_chi(&conj);
        assert!((a - b).norm() < 1e-9 * (1.0 + a.norm()), "{w:?} conjugated by {h:?}");
    }
}

#[test]
fn powers_scale_length_and_weight() {
    let g = schottky()[0];
    let base = classify(&g, Model::H3Complex).unwrap();
    for m in 1..=5 {
        let p = classify(&g.pow(m), Model::H3Complex).unwrap();
        assert!((p.length - m as f64 * base.length).abs() < 1e-10);
        let expected = hyperbolic_weight(m as f64 * base.length, &[m as f64 * base.angle]);
        let got = hyperbolic_weight(p.length, &[p.angle]);
        assert!((got - expected).abs() < 1e-9 * expected);
    }
    // the spectrum stores the same D for the power classes
    let spec = GroupSpec::new(Model::H3Complex, vec![g]).unwrap();
    let s = compute_length_spectrum(
        &spec,
        &SpectrumOptions {
            max_word_len: 6,
            cutoff: 4.0,
            ..SpectrumOptions::default()
        },
    )
    .unwrap();
    for r in s.hyperbolic() {
        let m = r.power as f64;
        let th = base.angle * m;
        let d = hyperbolic_weight(m * base.length, &[th]);
        assert!((r.d_gamma.unwrap() - d).abs() < 1e-9 * d);
        assert!((r.primitive_length - base.length).abs() < 1e-12);
    }
}

#[test]
fn spectrum_csv_file_round_trip() {
    let spec = GroupSpec::new(Model::H3Complex, schottky()).unwrap();
    let s = compute_length_spectrum(
        &spec,
        &SpectrumOptions {
            max_word_len: 4,
            cutoff: 3.0,
            ..SpectrumOptions::default()
        },
    )
    .unwrap();
    let path = std::env::temp_dir().join(format!("selberg-geometry-{}.csv", std::process::id()));
    s.save(&path).unwrap();
    let back = LengthSpectrum::load(&path).unwrap();
    std::fs::remove_file(&path).ok();
    assert_eq!(back.meta, s.meta);
    assert_eq!(back.to_csv_string(), s.to_csv_string());
    for (a, b) in s.records().iter().zip(back.records()) {
        assert_eq!(a.length.to_bits(), b.length.to_bits());
        assert_eq!(a.tr_chi, b.tr_chi);
        assert_eq!(a.word, b.word);
    }
}

#[test]
fn spec_toml_round_trip_keeps_hash() {
    let text = r#"
model = "H2-real-2x2"
generators = [[0.0, -1.0, 1.0, 0.0], [2.0, 1.0, 1.0, 1.0]]
"#;
    let spec = GroupSpec::from_toml_str(text).unwrap();
    let again = GroupSpec::from_toml_str(&spec.to_toml_string()).unwrap();
    assert_eq!(spec.hash(), again.hash());
    assert_eq!(spec.hash().len(), 64);
    assert!(GroupSpec::from_toml_str("model = \"H2-real-2x2\"\ngenerators = [[1.0, 1.0, 1.0, 1.0]]\n").is_err());
}
