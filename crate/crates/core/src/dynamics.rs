//! Commuting pairs `(f, u)`, the hypotheses of the main theorem, the
//! arithmetic invariants ℓ, v(m), fixed-point counts and stabilizers, oracle
//! instance generators and the end-to-end conjecture check.

use num_bigint::BigInt;
use num_rational::BigRational;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::kscalar::KScalar;
use crate::lubin::{formal_group, mult_by_m};
use crate::newton::single_segment_of_width_p;
use crate::ring::{OKScalar, Ring, RingConfig, ValuationResult};
use crate::series::TruncSeries1;
use crate::series2::TruncSeries2;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Verdict {
    True,
    False,
    Undecidable,
}

impl Verdict {
    fn from_bool(b: bool) -> Self {
        if b {
            Verdict::True
        } else {
            Verdict::False
        }
    }
}

/// A verdict and the precision (υ_K units) it was decided at.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct Check {
    pub verdict: Verdict,
    pub precision: i64,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct HypothesisReport {
    pub coprimality: Check,
    pub weierstrass_degree_p: Check,
    pub simple_roots: Check,
    pub f_linear_uniformizer_in_zp: Check,
    pub u_linear_unit_in_zp: Check,
    pub u_linear_nontorsion: Check,
}

impl HypothesisReport {
    fn checks(&self) -> [Check; 6] {
        [
            self.coprimality,
            self.weierstrass_degree_p,
            self.simple_roots,
            self.f_linear_uniformizer_in_zp,
            self.u_linear_unit_in_zp,
            self.u_linear_nontorsion,
        ]
    }

    pub fn all_true(&self) -> bool {
        self.checks().iter().all(|c| c.verdict == Verdict::True)
    }

    pub fn any_false(&self) -> bool {
        self.checks().iter().any(|c| c.verdict == Verdict::False)
    }
}

/// A commuting pair of integral series, `f` noninvertible and `u` invertible.
#[derive(Debug, Clone)]
pub struct DynPair {
    f: TruncSeries1,
    u: TruncSeries1,
    wdeg_f: Option<usize>,
    u_linear: KScalar,
    normalized: bool,
    report: HypothesisReport,
}

impl DynPair {
    /// Checks integrality and `f∘u = u∘f` to certified precision. Both series
    /// are truncated to the smaller degree.
    pub fn new(f: TruncSeries1, u: TruncSeries1) -> Result<Self> {
        if !crate::ring::same_ring(f.ring(), u.ring()) {
            return Err(Error::ConfigMismatch);
        }
        let n = f.degree().min(u.degree());
        let (f, u) = (f.truncate(n), u.truncate(n));
        for s in [&f, &u] {
            if let Some(i) = (1..=n).find(|&i| !s.coeff(i).is_integral()) {
                return Err(Error::NonIntegralSeries(i));
            }
        }
        let fu = f.compose(&u)?;
        let uf = u.compose(&f)?;
        if !fu.eq_to_prec(&uf)? {
            let diff = fu.sub(&uf)?;
            let k = (1..=n).find(|&k| !diff.coeff(k).is_zero()).unwrap_or(0);
            return Err(Error::NotCommuting(format!(
                "f∘u − u∘f has a nonzero coefficient in degree {k}"
            )));
        }
        let u_linear = u.linear_coefficient().clone();
        let normalized = u_linear.to_ok().is_some_and(|x| {
            let one = OKScalar::one(x.ring());
            x.embeds_in_zp() && (&x - &one).valuation().exact().is_some_and(|v| v >= x.ring().e() as u32)
                || (&x - &one).is_zero()
        });
        let wdeg_f = f.weierstrass_degree().ok().flatten();
        let mut pair = DynPair {
            f,
            u,
            wdeg_f,
            u_linear,
            normalized,
            report: placeholder_report(),
        };
        pair.report = compute_report(&pair);
        Ok(pair)
    }

    pub fn f(&self) -> &TruncSeries1 {
        &self.f
    }

    pub fn u(&self) -> &TruncSeries1 {
        &self.u
    }

    pub fn ring(&self) -> &Ring {
        self.f.ring()
    }

    pub fn degree(&self) -> usize {
        self.f.degree()
    }

    pub fn weierstrass_degree_f(&self) -> Option<usize> {
        self.wdeg_f
    }

    pub fn f_linear_valuation(&self) -> Option<i64> {
        self.f.linear_coefficient().valuation()
    }

    pub fn u_linear(&self) -> &KScalar {
        &self.u_linear
    }

    /// `u'(0) ∈ 1 + pZ_p`.
    pub fn is_normalized(&self) -> bool {
        self.normalized
    }

    pub fn report(&self) -> &HypothesisReport {
        &self.report
    }

    /// ℓ when it is defined and decidable.
    pub fn ell(&self) -> Option<u32> {
        ell(self).ok()
    }

    pub fn truncate(&self, degree: usize) -> Result<DynPair> {
        DynPair::new(self.f.truncate(degree), self.u.truncate(degree))
    }
}

fn placeholder_report() -> HypothesisReport {
    let c = Check {
        verdict: Verdict::Undecidable,
        precision: 0,
    };
    HypothesisReport {
        coprimality: c,
        weierstrass_degree_p: c,
        simple_roots: c,
        f_linear_uniformizer_in_zp: c,
        u_linear_unit_in_zp: c,
        u_linear_nontorsion: c,
    }
}

fn undecidable(precision: i64) -> Check {
    Check {
        verdict: Verdict::Undecidable,
        precision,
    }
}

fn decided(b: bool, precision: i64) -> Check {
    Check {
        verdict: Verdict::from_bool(b),
        precision,
    }
}

/// Torsion can only be refuted at finite precision: `x^{p^k(q−1)} − 1` must
/// stay nonzero for `k ≤ 2`.
fn nontorsion(x: &OKScalar) -> Check {
    let ring = x.ring();
    let en = ring.full_precision();
    let one = OKScalar::one(ring);
    let mut y = x.pow(ring.q() - 1);
    for _ in 0..=2 {
        if (&y - &one).valuation() == ValuationResult::ZeroToPrecision {
            return undecidable(en);
        }
        y = y.pow(ring.p());
    }
    decided(true, en)
}

fn compute_report(pair: &DynPair) -> HypothesisReport {
    let ring = pair.ring();
    let en = ring.full_precision();
    let f = &pair.f;
    let fprec = f.certified_prec();
    let p = ring.p() as usize;
    let weierstrass_degree_p = match f.weierstrass_degree() {
        Ok(w) => decided(w == Some(p), fprec),
        Err(_) => undecidable(fprec),
    };
    let simple_roots = match single_segment_of_width_p(f) {
        Ok(b) => decided(b, fprec),
        Err(_) => undecidable(fprec),
    };
    let lam = f.linear_coefficient();
    let f_linear_uniformizer_in_zp = match (lam.valuation(), lam.to_ok()) {
        (Some(v), Some(x)) => decided(v == ring.e() as i64 && x.embeds_in_zp(), lam.prec()),
        (Some(_), None) => decided(false, lam.prec()),
        (None, _) => undecidable(lam.prec()),
    };
    let mu = &pair.u_linear;
    let (u_linear_unit_in_zp, u_linear_nontorsion) = match (mu.valuation(), mu.to_ok()) {
        (Some(0), Some(x)) if x.embeds_in_zp() => (decided(true, mu.prec()), nontorsion(&x)),
        (Some(0), Some(x)) => (decided(false, mu.prec()), nontorsion(&x)),
        (Some(_), _) => (decided(false, mu.prec()), undecidable(mu.prec())),
        (None, _) => (undecidable(mu.prec()), undecidable(mu.prec())),
    };
    HypothesisReport {
        coprimality: decided(ring.coprimality_hypothesis(), en),
        weierstrass_degree_p,
        simple_roots,
        f_linear_uniformizer_in_zp,
        u_linear_unit_in_zp,
        u_linear_nontorsion,
    }
}

pub fn check_hypotheses(pair: &DynPair) -> HypothesisReport {
    pair.report.clone()
}

/// Multiplicative order of `a` modulo the prime `p`.
fn order_mod_p(a: u64, p: u64) -> u64 {
    let a = a % p;
    let mut x = a;
    let mut k = 1;
    while x != 1 {
        x = x * a % p;
        k += 1;
    }
    k
}

/// Replaces `u` by `u^{∘k}`, `k` the order of `u'(0)` mod p, so that
/// `u'(0) ∈ 1 + pZ_p`.
pub fn normalize_u(pair: &DynPair) -> Result<DynPair> {
    let x = pair
        .u_linear
        .to_ok()
        .filter(|x| x.is_unit() && x.embeds_in_zp())
        .ok_or(Error::NotAUnit)?;
    let p = pair.ring().p();
    let a = x.as_zp().ok_or(Error::NotAUnit)?;
    let k = order_mod_p(a, p);
    if k == 1 {
        return Ok(pair.clone());
    }
    DynPair::new(pair.f.clone(), pair.u.iterate(k))
}

/// `υ_K(x^m − 1)/e` for a unit `x ∈ Z_p`.
pub fn unit_level(x: &OKScalar, m: i64) -> Result<u32> {
    if m == 0 {
        return Err(Error::PreconditionFailed("m must be nonzero".into()));
    }
    let ring = x.ring();
    let one = OKScalar::one(ring);
    // x^m − 1 and x^{−m} − 1 differ by the unit −x^{−m}
    let v = (&x.pow(m.unsigned_abs()) - &one)
        .valuation()
        .exact()
        .ok_or_else(|| Error::PrecisionExhausted(format!("u'(0)^{m} − 1 vanishes to precision")))?;
    let e = ring.e() as u32;
    assert!(v % e == 0, "valuation {v} of an element of Z_p not divisible by e = {e}");
    Ok(v / e)
}

fn normalized_linear(pair: &DynPair) -> Result<OKScalar> {
    if !pair.normalized {
        return Err(Error::PreconditionFailed(
            "u'(0) is not in 1 + pZ_p; normalize u first".into(),
        ));
    }
    pair.u_linear.to_ok().ok_or(Error::NotAUnit)
}

/// `ℓ = υ_K(u'(0) − 1)/e`.
pub fn ell(pair: &DynPair) -> Result<u32> {
    unit_level(&normalized_linear(pair)?, 1)
}

/// `v(m) = υ_K(u'(0)^m − 1)/e`.
pub fn v_of_m(pair: &DynPair, m: i64) -> Result<u32> {
    unit_level(&normalized_linear(pair)?, m)
}

fn pow_checked(p: u64, k: u32) -> Result<u64> {
    p.checked_pow(k)
        .ok_or_else(|| Error::PreconditionFailed(format!("{p}^{k} overflows")))
}

fn dump(pair: &DynPair) -> String {
    format!("f = {}; u = {}; config = {}", pair.f, pair.u, pair.ring().to_json())
}

/// Weierstrass degree of `u^{∘m}(X) − X`, asserted to equal `p^{v(m)}`.
pub fn fixed_point_count(pair: &DynPair, m: u64) -> Result<u64> {
    if m == 0 {
        return Err(Error::PreconditionFailed("m must be positive".into()));
    }
    let p = pair.ring().p();
    let v = v_of_m(pair, m as i64)?;
    let expected = pow_checked(p, v)?;
    if (pair.degree() as u64) < expected {
        return Err(Error::TruncationTooShallow {
            need: expected as usize,
            have: pair.degree(),
        });
    }
    let d = expected as usize;
    let it = pair.u.truncate(d).iterate(m);
    let diff = it.sub(&TruncSeries1::identity(pair.ring(), d))?;
    match diff.weierstrass_degree()? {
        Some(w) if w as u64 == expected => Ok(expected),
        other => Err(Error::MismatchWithTheorem(format!(
            "Weierstrass degree of u^{m} − X is {other:?}, expected p^v(m) = {expected}; {}",
            dump(pair)
        ))),
    }
}

/// `p^{n−ℓ}`, the generator of the stabilizer exponents of a level-n torsion
/// point, cross-checked against `v(p^{n−ℓ}) ≥ n > v(p^{n−ℓ−1})`.
pub fn stabilizer_exponent(pair: &DynPair, n: u32) -> Result<u64> {
    let l = ell(pair)?;
    if n <= l {
        return Err(Error::PreconditionFailed(format!("n = {n} must exceed ℓ = {l}")));
    }
    let p = pair.ring().p();
    let s = pow_checked(p, n - l)?;
    let hi = v_of_m(pair, s as i64)?;
    let lo = v_of_m(pair, (s / p) as i64)?;
    if hi < n || lo >= n {
        return Err(Error::MismatchWithTheorem(format!(
            "v(p^{}) = {hi}, v(p^{}) = {lo} for n = {n}; {}",
            n - l,
            n - l - 1,
            dump(pair)
        )));
    }
    Ok(s)
}

/// `j = p^ℓ − p^{ℓ−1}`.
pub fn cell_count(pair: &DynPair) -> Result<u64> {
    let l = ell(pair)?;
    let p = pair.ring().p();
    Ok(pow_checked(p, l)? - pow_checked(p, l - 1)?)
}

/// `lim_m q^m υ_p(π_{mr})` with `υ_p(π_n) = 1/(p^{n−1}(p−1))`; each term of
/// the sequence is evaluated exactly and all must agree.
pub fn tilt_valuation(cfg: &RingConfig) -> BigRational {
    let p = BigInt::from(cfg.p());
    let r = cfg.r() as u32;
    let terms: Vec<BigRational> = (1..=4u32)
        .map(|m| {
            let q_m = num_traits::pow(p.clone(), (r * m) as usize);
            let level = (r * m) as usize;
            let v_pi = BigRational::new(
                BigInt::from(1),
                num_traits::pow(p.clone(), level - 1) * (&p - 1),
            );
            BigRational::from_integer(q_m) * v_pi
        })
        .collect();
    assert!(terms.windows(2).all(|w| w[0] == w[1]), "tilt sequence not constant: {terms:?}");
    terms[0].clone()
}

/// `f = pX + Σ middle + X^p` and `u = [a]_f`, truncated at `degree`.
pub fn make_lubin_tate(
    ring: &Ring,
    middle: &[(usize, OKScalar)],
    a: &OKScalar,
    degree: usize,
) -> Result<DynPair> {
    let p = ring.p() as usize;
    let e = ring.e() as u32;
    if degree < p {
        return Err(Error::InvalidTemplate(format!("degree {degree} is below p = {p}")));
    }
    let mut c: Vec<KScalar> = (0..degree).map(|_| KScalar::zero(ring)).collect();
    c[0] = KScalar::from_int(ring, p as i64);
    c[p - 1] = KScalar::one(ring);
    for (i, x) in middle {
        if *i < 2 || *i > degree {
            return Err(Error::InvalidTemplate(format!("middle index {i} outside 2..={degree}")));
        }
        if !crate::ring::same_ring(ring, x.ring()) {
            return Err(Error::ConfigMismatch);
        }
        if x.valuation().exact().is_some_and(|v| v < e) {
            return Err(Error::InvalidTemplate(format!(
                "middle coefficient of X^{i} is not divisible by p"
            )));
        }
        c[i - 1] = &c[i - 1] + &KScalar::from_ok(x.clone());
    }
    if !(a.is_unit() && a.embeds_in_zp()) {
        return Err(Error::InvalidTemplate("a must be a unit of Z_p".into()));
    }
    let f = TruncSeries1::from_coeffs(ring, c)?;
    let u = mult_by_m(&f, a)?;
    DynPair::new(f, u)
}

/// `(w^{∘−1}∘f∘w, w^{∘−1}∘u∘w)` for integral `w` with `w'(0) = 1`.
pub fn conjugate_pair(pair: &DynPair, w: &TruncSeries1) -> Result<DynPair> {
    if !w.linear_coefficient().eq_to_prec(&KScalar::one(w.ring())) {
        return Err(Error::PreconditionFailed("w'(0) must be 1".into()));
    }
    if let Some(i) = (1..=w.degree()).find(|&i| !w.coeff(i).is_integral()) {
        return Err(Error::NonIntegralSeries(i));
    }
    let w = w.truncate(pair.degree());
    let winv = w
        .comp_inverse()
        .map_err(|e| Error::NotInvertible(e.to_string()))?;
    let f = winv.compose(&pair.f.compose(&w)?)?;
    let u = winv.compose(&pair.u.compose(&w)?)?;
    DynPair::new(f, u)
}

/// `X + Σ_{k=2}^{terms+1} c_k X^k` with coefficients drawn uniformly from
/// O_K mod p^n_prec by a ChaCha generator seeded with `seed`.
pub fn random_conjugator(ring: &Ring, degree: usize, terms: usize, seed: u64) -> TruncSeries1 {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let m = ring.modulus();
    let width = ring.e() * ring.r();
    let mut c: Vec<KScalar> = (0..degree).map(|_| KScalar::zero(ring)).collect();
    c[0] = KScalar::one(ring);
    for slot in c.iter_mut().skip(1).take(terms) {
        let comps: Vec<i64> = (0..width).map(|_| rng.gen_range(0..m) as i64).collect();
        *slot = KScalar::from_ok(OKScalar::from_components(ring, &comps).expect("in range"));
    }
    TruncSeries1::from_coeffs(ring, c).expect("same ring")
}

#[derive(Debug, Clone)]
pub struct ConjectureVerdict {
    pub formal_group: TruncSeries2,
    /// Every coefficient of F has shift 0.
    pub integral: bool,
    /// Integral and every coefficient known to nonnegative precision.
    pub integral_certified: bool,
    /// First coefficient with a nonzero shift, as `(i, j, shift)`.
    pub offending: Option<(usize, usize, u32)>,
    pub endo_f: bool,
    pub endo_f_precision: i64,
    pub endo_u: bool,
    pub endo_u_precision: i64,
    pub certified_degree: usize,
    pub certified_precision: i64,
}

fn residual(law: &TruncSeries2, s: &TruncSeries1) -> Result<(bool, i64)> {
    let lhs = law.subst2(&TruncSeries2::from_x(s), &TruncSeries2::from_y(s))?;
    let rhs = TruncSeries2::subst_outer(s, law)?;
    let r = lhs.sub(&rhs)?;
    Ok((r.is_zero_to_prec(), r.certified_prec()))
}

/// Builds `F` from `f` and checks integrality and that `f` and `u` are
/// endomorphisms of `F`, up to total degree `degree`.
pub fn verify_conjecture(pair: &DynPair, degree: usize) -> Result<ConjectureVerdict> {
    if pair.report.any_false() {
        return Err(Error::PreconditionFailed(format!(
            "hypotheses fail: {}",
            serde_json::to_string(&pair.report).expect("serializable")
        )));
    }
    if degree > pair.degree() {
        return Err(Error::TruncationTooShallow {
            need: degree,
            have: pair.degree(),
        });
    }
    let (f, u) = (pair.f.truncate(degree), pair.u.truncate(degree));
    let law = formal_group(&f)?;
    let (endo_f, endo_f_precision) = residual(&law, &f)?;
    let (endo_u, endo_u_precision) = residual(&law, &u)?;
    let integral = law.is_integral();
    let certified_precision = law.certified_prec();
    Ok(ConjectureVerdict {
        integral,
        integral_certified: integral && certified_precision >= 0,
        offending: law.first_non_integral(),
        endo_f,
        endo_f_precision,
        endo_u,
        endo_u_precision,
        certified_degree: degree,
        certified_precision,
        formal_group: law,
    })
}
