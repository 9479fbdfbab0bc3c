use std::f64::consts::PI;

use clap::Args;
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use selberg::geometry::{ConjClassRecord, SpectrumMeta};
use selberg::{lie, orbital, zeta, EllipticAngles, LengthSpectrum, WeightVector};

use crate::Session;

#[derive(Debug, Args)]
pub struct SelftestArgs {
    /// Seed of the sample generator.
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Samples per property.
    #[arg(long, default_value_t = 200)]
    samples: usize,
}

/// Raised when a selftest property does not hold.
#[derive(Debug)]
pub struct PropertyFailure(pub usize);

impl std::fmt::Display for PropertyFailure {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{} property checks failed", self.0)
    }
}

impl std::error::Error for PropertyFailure {}

pub fn random_dominant(rng: &mut impl Rng, n: usize) -> WeightVector {
    let mut coords: Vec<i64> = (0..n).map(|_| rng.gen_range(0..4)).collect();
    coords.sort_unstable_by(|a, b| b.cmp(a));
    if rng.gen_bool(0.5) {
        coords[n - 1] = -coords[n - 1];
    }
    WeightVector::from_integers(&coords).expect("nonempty")
}

/// Angles mixing generic values with 0, π and repeats; one angle is forced
/// to zero when `with_zero` is set.
pub fn random_angles(rng: &mut impl Rng, n: usize, with_zero: bool) -> EllipticAngles {
    let mut a: Vec<f64> = Vec::with_capacity(n);
    for j in 0..n {
        let v = match rng.gen_range(0..5) {
            0 => 0.0,
            1 => PI,
            2 if j > 0 => a[rng.gen_range(0..j)],
            _ => rng.gen_range(0.0..2.0 * PI),
        };
        a.push(v);
    }
    if with_zero {
        a[rng.gen_range(0..n)] = 0.0;
    }
    EllipticAngles::new(a).expect("nonempty")
}

/// Angles whose Weyl denominator stays away from zero: every `φ_i ± φ_j`
/// is at least `margin` from `2πℤ`.
pub fn regular_angles(rng: &mut impl Rng, n: usize, margin: f64) -> Vec<f64> {
    let off_wall = |x: f64| {
        let r = x.rem_euclid(2.0 * PI);
        r.min(2.0 * PI - r) >= margin
    };
    loop {
        let a: Vec<f64> = (0..n).map(|_| rng.gen_range(0.0..2.0 * PI)).collect();
        let ok = (0..n).all(|i| (i + 1..n).all(|j| off_wall(a[i] - a[j]) && off_wall(a[i] + a[j])));
        if ok {
            return a;
        }
    }
}

struct Report<'a> {
    session: &'a mut Session,
    failures: usize,
}

impl Report<'_> {
    fn check(&mut self, name: &str, worst: f64, tol: f64) -> anyhow::Result<()> {
        let ok = worst < tol;
        if !ok {
            self.failures += 1;
        }
        let status = if ok { "PASS" } else { "FAIL" };
        self.session
            .out
            .line(format!("{status} {name}: worst {worst:.3e} (tolerance {tol:.0e})"))
    }

    fn check_bitwise(&mut self, name: &str, a: Complex64, b: Complex64) -> anyhow::Result<()> {
        let ok = a.re.to_bits() == b.re.to_bits() && a.im.to_bits() == b.im.to_bits();
        if !ok {
            self.failures += 1;
        }
        let line = if ok {
            format!("PASS {name}: bitwise identical")
        } else {
            format!("FAIL {name}: {a} vs {b}")
        };
        self.session.out.line(line)
    }
}

pub fn run(args: SelftestArgs, s: &mut Session) -> anyhow::Result<()> {
    if args.samples == 0 {
        return Err(selberg::Error::Invalid("--samples must be positive".into()).into());
    }
    if s.validate {
        return s.out.line("ok");
    }
    let mut rng = ChaCha8Rng::seed_from_u64(args.seed);
    let mut report = Report {
        session: s,
        failures: 0,
    };

    let mut odd: f64 = 0.0;
    let mut gap: f64 = 0.0;
    for k in 0..args.samples {
        let n = 1 + k % 3;
        let lambda = random_dominant(&mut rng, n);
        let angles = random_angles(&mut rng, n, true);
        let dense = orbital::orbital_dense(&lambda, &angles, n)?;
        let scale = dense
            .iter()
            .map(|c| c.norm())
            .fold(0.0, f64::max)
            .max(f64::MIN_POSITIVE);
        let o = dense.iter().skip(1).step_by(2).map(|c| c.norm()).fold(0.0, f64::max);
        odd = odd.max(o / scale);
        let g = orbital::weyl_a_invariance_gap(&lambda, &angles, n)?;
        gap = gap.max(g / scale);
    }
    report.check("orbital polynomial evenness", odd, 1e-10)?;
    report.check("W(A)-invariance gap", gap, 1e-10)?;

    let mut chi: f64 = 0.0;
    for k in 0..args.samples {
        let n = 1 + k % 3;
        let angles = regular_angles(&mut rng, n, 0.05);
        let mut e1 = vec![0i64; n];
        e1[0] = 1;
        let std = WeightVector::from_integers(&e1)?;
        let v = lie::class_character(&std, &EllipticAngles::new(angles.clone())?)?;
        // SO(2) is abelian: the weight (1) is the character e^{iφ} itself.
        let direct = if n == 1 {
            Complex64::from_polar(1.0, angles[0])
        } else {
            Complex64::new(angles.iter().map(|a| 2.0 * a.cos()).sum(), 0.0)
        };
        chi = chi.max((v - direct).norm());
    }
    report.check("standard character trace", chi, 1e-10)?;

    let mut pf: f64 = 0.0;
    for _ in 0..args.samples.min(50) {
        let count = rng.gen_range(1..=5);
        let points: Vec<Complex64> = (0..count)
            .map(|k| Complex64::new(k as f64 + 1.0 + rng.gen_range(0.0..0.5), rng.gen_range(-0.3..0.3)))
            .collect();
        let set = zeta::partial_fraction_coeffs(&points)?;
        let z = Complex64::new(rng.gen_range(-5.0..5.0), rng.gen_range(0.5..5.0));
        let prod = set.product(z);
        pf = pf.max((set.partial_fraction_sum(z) - prod).norm() / prod.norm());
    }
    report.check("partial-fraction identity", pf, 1e-12)?;

    let records: Vec<ConjClassRecord> = (0..40)
        .map(|_| {
            let l = rng.gen_range(0.5..6.0);
            let theta = EllipticAngles::new(vec![rng.gen_range(0.0..2.0 * PI)]).expect("rank 1");
            let chi = Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0));
            ConjClassRecord::hyperbolic(l, theta, rng.gen_range(1..4), chi, 1.0)
        })
        .collect();
    let meta = SpectrumMeta {
        spec_hash: "selftest".into(),
        cutoff: 6.0,
        max_word_len: 0,
    };
    let spectrum = LengthSpectrum::new(meta, records);
    let back = LengthSpectrum::from_csv_str(&spectrum.to_csv_string())?;
    let sigma = WeightVector::from_integers(&[1])?;
    let a = zeta::ZetaTermContext::new(1, sigma.clone(), 1, spectrum, 1.0)?;
    let b = zeta::ZetaTermContext::new(1, sigma, 1, back, 1.0)?;
    let s0 = Complex64::new(2.5, 0.7);
    let (za, zb) = (zeta::log_zeta_truncated(s0, &a)?, zeta::log_zeta_truncated(s0, &b)?);
    report.check_bitwise("CSV round trip of log Z", za, zb)?;

    match report.failures {
        0 => Ok(()),
        k => Err(PropertyFailure(k).into()),
    }
}
