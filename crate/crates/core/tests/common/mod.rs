//! Randomized property suites shared by `properties` and `acceptance`.
//! Every suite runs a fixed number of cases from a fixed seed.
#![allow(dead_code)]

use padic_dynamics::dynamics::{stabilizer_exponent, DynPair};
use padic_dynamics::lubin::{formal_group, is_associative, is_commutative_law};
use padic_dynamics::newton::newton_polygon;
use padic_dynamics::{KScalar, OKScalar, Ring, RingConfig, TruncSeries1, ValuationResult};
use proptest::prelude::*;
use proptest::test_runner::{Config, RngAlgorithm, TestRng, TestRunner};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub const CASES: u32 = 256;

fn runner(seed: u8) -> TestRunner {
    let config = Config {
        cases: CASES,
        failure_persistence: None,
        ..Config::default()
    };
    TestRunner::new_with_rng(config, TestRng::from_seed(RngAlgorithm::ChaCha, &[seed; 32]))
}

fn run<S: Strategy>(
    seed: u8,
    strategy: S,
    test: impl Fn(S::Value) -> Result<(), TestCaseError>,
) -> Result<(), String> {
    runner(seed).run(&strategy, test).map_err(|e| e.to_string())
}

/// `(p, e, r, n_prec, seed)`.
fn small_ring() -> impl Strategy<Value = (u64, usize, usize, u32, u64)> {
    (
        prop::sample::select(vec![2u64, 3, 5]),
        1..=3usize,
        1..=2usize,
        3..=7u32,
        any::<u64>(),
    )
}

fn ring(p: u64, e: usize, r: usize, n: u32) -> Ring {
    RingConfig::new(p, r, e, None, None, n).unwrap()
}

fn random_ok(ring: &Ring, rng: &mut ChaCha8Rng) -> OKScalar {
    let m = ring.modulus();
    let comps: Vec<i64> = (0..ring.e() * ring.r()).map(|_| rng.gen_range(0..m) as i64).collect();
    OKScalar::from_components(ring, &comps).unwrap()
}

fn random_unit(ring: &Ring, rng: &mut ChaCha8Rng) -> OKScalar {
    let x = random_ok(ring, rng);
    if x.is_unit() {
        x
    } else {
        &x + &OKScalar::one(ring)
    }
}

fn random_series(ring: &Ring, degree: usize, rng: &mut ChaCha8Rng) -> TruncSeries1 {
    let c = (0..degree).map(|_| KScalar::from_ok(random_ok(ring, rng))).collect();
    TruncSeries1::from_coeffs(ring, c).unwrap()
}

/// Integral series whose first unit coefficient sits at `w`.
fn series_with_wdeg(ring: &Ring, degree: usize, w: usize, rng: &mut ChaCha8Rng) -> TruncSeries1 {
    let pi = OKScalar::pi(ring);
    let c = (1..=degree)
        .map(|i| {
            let x = match i.cmp(&w) {
                std::cmp::Ordering::Less => &pi * &random_ok(ring, rng),
                std::cmp::Ordering::Equal => random_unit(ring, rng),
                std::cmp::Ordering::Greater => random_ok(ring, rng),
            };
            KScalar::from_ok(x)
        })
        .collect();
    TruncSeries1::from_coeffs(ring, c).unwrap()
}

pub fn composition_associative() -> Result<(), String> {
    run(1, (small_ring(), 2..=7usize), |((p, e, r, n, seed), d)| {
        let k = ring(p, e, r, n);
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let [a, b, c] = [0; 3].map(|_| random_series(&k, d, &mut rng));
        let left = a.compose(&b).unwrap().compose(&c).unwrap();
        let right = a.compose(&b.compose(&c).unwrap()).unwrap();
        prop_assert!(left.eq_to_prec(&right).unwrap());
        Ok(())
    })
}

pub fn comp_inverse_round_trip() -> Result<(), String> {
    run(2, (small_ring(), 1..=8usize), |((p, e, r, n, seed), d)| {
        let k = ring(p, e, r, n);
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut s = random_series(&k, d, &mut rng);
        s.set_coeff(1, KScalar::from_ok(random_unit(&k, &mut rng)));
        let inv = s.comp_inverse().unwrap();
        let id = TruncSeries1::identity(&k, d);
        prop_assert!(inv.compose(&s).unwrap().eq_to_prec(&id).unwrap());
        prop_assert!(s.compose(&inv).unwrap().eq_to_prec(&id).unwrap());
        Ok(())
    })
}

pub fn weierstrass_degree_multiplicative() -> Result<(), String> {
    run(3, (small_ring(), 1..=4usize, 1..=4usize), |((p, e, r, n, seed), a, b)| {
        let k = ring(p, e, r, n);
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let f = series_with_wdeg(&k, 16, a, &mut rng);
        let g = series_with_wdeg(&k, 16, b, &mut rng);
        prop_assert_eq!(f.compose(&g).unwrap().weierstrass_degree().unwrap(), Some(a * b));
        Ok(())
    })
}

pub fn polygon_lower_hull() -> Result<(), String> {
    let vals = prop::collection::vec(prop::option::weighted(0.8, 0..12i64), 1..=20);
    run(4, (small_ring(), vals), |((p, e, r, n, seed), vals)| {
        let k = ring(p, e, r, n);
        let en = k.full_precision();
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let pi = OKScalar::pi(&k);
        let c: Vec<KScalar> = vals
            .iter()
            .map(|v| match v {
                Some(v) if *v < en => KScalar::from_ok(&pi.pow(*v as u64) * &random_unit(&k, &mut rng)),
                _ => KScalar::zero(&k),
            })
            .collect();
        let s = TruncSeries1::from_coeffs(&k, c).unwrap();
        let np = newton_polygon(&s).unwrap();
        let pts = np.points();
        for w in np.slopes.windows(2) {
            prop_assert!(w[0] < w[1]);
        }
        let Some(&(last, _)) = pts.last() else {
            return Ok(());
        };
        for i in 1..=last {
            let Some(v) = s.coeff(i).valuation() else { continue };
            let seg = pts.windows(2).find(|w| w[0].0 <= i && i <= w[1].0);
            if let Some(w) = seg {
                let ((a, va), (b, vb)) = (w[0], w[1]);
                // (i, v) on or above the line through (a, va), (b, vb)
                prop_assert!((v - va) * (b - a) as i64 >= (vb - va) * (i - a) as i64);
            } else {
                prop_assert!(i == pts[0].0 && v == pts[0].1 || i < pts[0].0 && v > pts[0].1);
            }
        }
        if s.coeff(1).valuation().is_some() {
            if let Ok(Some(w)) = s.weierstrass_degree() {
                let dp = padic_dynamics::newton::decreasing_part(&np);
                prop_assert_eq!(dp.width(), w - 1);
            }
        }
        Ok(())
    })
}

/// Random Lubin-Tate series `pX + p·(…) + X^p` over Z_p, viewed over a
/// random K.
pub fn group_law_symmetric_associative() -> Result<(), String> {
    let strat = (
        prop::sample::select(vec![2u64, 3, 5]),
        1..=3usize,
        1..=2usize,
        any::<u64>(),
    );
    run(5, strat, |(p, e, r, seed)| {
        let n = match p {
            2 => 24,
            3 => 14,
            _ => 10,
        };
        let k = ring(p, e, r, n);
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let pk = OKScalar::from_int(&k, p as i64);
        let c: Vec<KScalar> = (1..=12usize)
            .map(|i| {
                let z = OKScalar::from_u64(&k, rng.gen_range(0..k.modulus()));
                let mut x = &pk * &z;
                if i == 1 {
                    x = pk.clone();
                }
                if i == p as usize {
                    x = &x + &OKScalar::one(&k);
                }
                KScalar::from_ok(x)
            })
            .collect();
        let f = TruncSeries1::from_coeffs(&k, c).unwrap();
        let law = formal_group(&f).unwrap();
        prop_assert!(law.is_integral());
        prop_assert!(law.certified_prec() > 0, "certified precision {}", law.certified_prec());
        prop_assert!(is_commutative_law(&law));
        prop_assert!(is_associative(&law, 12));
        Ok(())
    })
}

pub fn stabilizer_cross_check() -> Result<(), String> {
    let strat = (prop::sample::select(vec![3u64, 5, 7]), 1..=2u32, 1..200u64, 1..=4u32);
    run(6, strat, |(p, l, t, extra)| {
        let t = if t % p == 0 { t + 1 } else { t };
        let k = RingConfig::unramified(p, 10).unwrap();
        let a = 1 + p.pow(l) * t;
        let pair = DynPair::new(
            TruncSeries1::binomial_minus_one(&k, p, p as usize),
            TruncSeries1::binomial_minus_one(&k, a, p as usize),
        )
        .unwrap();
        prop_assert_eq!(pair.ell(), Some(l));
        let n = l + extra;
        prop_assert_eq!(stabilizer_exponent(&pair, n).unwrap(), p.pow(extra));
        Ok(())
    })
}

pub fn valuation_additive() -> Result<(), String> {
    run(7, small_ring(), |(p, e, r, n, seed)| {
        let k = ring(p, e, r, n);
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let pi = OKScalar::pi(&k);
        let top = k.full_precision().min(4) as u64;
        let x = &pi.pow(rng.gen_range(0..top)) * &random_unit(&k, &mut rng);
        let y = &pi.pow(rng.gen_range(0..top)) * &random_unit(&k, &mut rng);
        let (vx, vy) = (x.valuation().exact().unwrap(), y.valuation().exact().unwrap());
        let vxy = (&x * &y).valuation();
        if ((vx + vy) as i64) < k.full_precision() {
            prop_assert_eq!(vxy, ValuationResult::Exact(vx + vy));
        } else {
            prop_assert_eq!(vxy, ValuationResult::ZeroToPrecision);
        }
        Ok(())
    })
}

pub fn residue_homomorphism() -> Result<(), String> {
    run(8, small_ring(), |(p, e, r, n, seed)| {
        let k = ring(p, e, r, n);
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let (x, y) = (random_ok(&k, &mut rng), random_ok(&k, &mut rng));
        let lift = |z: &OKScalar| {
            let c: Vec<i64> = z.residue().0.iter().map(|&v| v as i64).collect();
            OKScalar::from_components(&k, &c).unwrap()
        };
        prop_assert_eq!((&x + &y).residue(), (&lift(&x) + &lift(&y)).residue());
        prop_assert_eq!((&x * &y).residue(), (&lift(&x) * &lift(&y)).residue());
        Ok(())
    })
}

/// All suites, by name.
pub fn all() -> Vec<(&'static str, fn() -> Result<(), String>)> {
    vec![
        ("composition associativity", composition_associative),
        ("comp_inverse round trip", comp_inverse_round_trip),
        ("weierstrass_degree multiplicativity", weierstrass_degree_multiplicative),
        ("polygon lower-hull property", polygon_lower_hull),
        ("F symmetry and associativity to degree 12", group_law_symmetric_associative),
        ("stabilizer cross-check", stabilizer_cross_check),
        ("valuation additivity", valuation_additive),
        ("residue homomorphism", residue_homomorphism),
    ]
}
