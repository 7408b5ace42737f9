//! The Lubin logarithm of a series, its inverse, the formal group it
//! defines and the multiplication-by-m series.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::kscalar::KScalar;
use crate::ring::{same_ring, OKScalar};
use crate::series::{powers, TruncSeries1};
use crate::certify;
use crate::series2::{exponents, idx, len_for, TruncSeries2};
use crate::series3::Series3;

/// Valuation of `λ^m − λ` consumed when solving for the degree-m coefficient.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct LossEntry {
    pub degree: usize,
    pub valuation: i64,
}

#[derive(Debug, Clone)]
pub struct LogResult {
    pub log: TruncSeries1,
    /// The linear coefficient `s'(0)`.
    pub lambda: KScalar,
    pub precision_loss_profile: Vec<LossEntry>,
}

impl LogResult {
    pub fn certified_prec(&self) -> i64 {
        self.log.certified_prec()
    }
}

/// Checks `λ^m − λ` for `2 ≤ m ≤ n` and returns the divisors. A divisor
/// whose valuation reaches `e·n_prec − e` cannot be told apart from zero.
fn eigen_gaps(lambda: &KScalar, n: usize) -> Result<Vec<KScalar>> {
    let ring = lambda.ring();
    if lambda.is_zero() {
        return Err(Error::PreconditionFailed(
            "linear coefficient vanishes to precision".into(),
        ));
    }
    let limit = ring.full_precision() - ring.e() as i64;
    let mut out = vec![KScalar::zero(ring), KScalar::zero(ring)];
    let mut lam_m = lambda.clone();
    for m in 2..=n {
        lam_m = &lam_m * lambda;
        let d = &lam_m - lambda;
        match d.valuation() {
            Some(v) if v < limit => out.push(d),
            _ => return Err(Error::RootOfUnityLinearCoefficient { degree: m }),
        }
    }
    Ok(out)
}

fn exhausted_if_low(what: &str, prec: i64) -> Result<()> {
    if prec <= 0 {
        return Err(Error::PrecisionExhausted(format!(
            "{what}: certified precision {prec} left no integral digits"
        )));
    }
    Ok(())
}

/// Solves `Log(s(X)) = s'(0) Log(X)` with `Log'(0) = 1` degree by degree.
pub fn lubin_log(s: &TruncSeries1) -> Result<LogResult> {
    let ring = s.ring();
    let n = s.degree();
    let lambda = s.linear_coefficient().clone();
    let gaps = eigen_gaps(&lambda, n)?;
    let pw = powers(ring, s.coeffs(), n);
    let mut b: Vec<KScalar> = (0..=n).map(|_| KScalar::zero(ring)).collect();
    if n >= 1 {
        b[1] = KScalar::one(ring);
    }
    let mut profile = Vec::with_capacity(n.saturating_sub(1));
    for m in 2..=n {
        // [X^m] Σ_k b_k s^k = λ b_m, and [X^m] s^m = λ^m
        let mut rhs = KScalar::zero(ring);
        for k in 1..m {
            rhs = &rhs - &(&b[k] * &pw[k][m]);
        }
        b[m] = rhs.checked_div(&gaps[m])?;
        profile.push(LossEntry {
            degree: m,
            valuation: gaps[m].valuation().expect("checked nonzero"),
        });
    }
    let log = TruncSeries1::from_coeffs(ring, b.into_iter().skip(1).collect())?;
    exhausted_if_low("logarithm", log.certified_prec())?;
    Ok(LogResult {
        log,
        lambda,
        precision_loss_profile: profile,
    })
}

/// Compositional inverse of the logarithm.
pub fn lubin_exp(lr: &LogResult) -> Result<TruncSeries1> {
    let exp = lr.log.comp_inverse()?;
    exhausted_if_low("exponential", exp.certified_prec())?;
    Ok(exp)
}

/// The formal group law `F(X,Y) = Log^{-1}(Log(X) + Log(Y))` of `f`.
///
/// Computed as the unique solution of `f(F(X,Y)) = F(f(X), f(Y))` with
/// `F ≡ X + Y` in degree one, degree by degree. When the result is integral
/// its precision comes from an a posteriori bound on the exact residual.
/// [`formal_group_via_log`] builds the same series through log and exp.
pub fn formal_group(f: &TruncSeries1) -> Result<TruncSeries2> {
    let ring = f.ring();
    let n = f.degree();
    let lambda = f.linear_coefficient().clone();
    let gaps = eigen_gaps(&lambda, n)?;
    let pf = powers(ring, f.coeffs(), n);
    let len = len_for(n);
    let zero_row = || -> Vec<KScalar> { (0..len).map(|_| KScalar::zero(ring)).collect() };
    // q[k] = F^k for the part of F solved so far
    let mut q: Vec<Vec<KScalar>> = (0..=n).map(|_| zero_row()).collect();
    q[0][0] = KScalar::one(ring);
    if n >= 1 {
        q[1][idx(1, 0)] = KScalar::one(ring);
        q[1][idx(0, 1)] = KScalar::one(ring);
    }
    for d in 2..=n {
        for k in 2..=d {
            for j in 0..=d {
                let i = d - j;
                let mut acc = KScalar::zero(ring);
                for (a, b) in exponents(d - k + 1).skip(1) {
                    if a > i || b > j {
                        continue;
                    }
                    acc = acc.add_mul(&q[1][idx(a, b)], &q[k - 1][idx(i - a, j - b)]);
                }
                q[k][idx(i, j)] = acc;
            }
        }
        for j in 0..=d {
            let i = d - j;
            // [X^i Y^j] f(F) = λ c_ij + Σ_{k≥2} a_k [X^i Y^j] F^k
            let mut lhs = KScalar::zero(ring);
            for k in 2..=d {
                lhs = &lhs + &(f.coeff(k) * &q[k][idx(i, j)]);
            }
            // [X^i Y^j] F(f(X), f(Y)) = λ^d c_ij + lower terms
            let mut rhs = KScalar::zero(ring);
            for (a, b) in exponents(d - 1).skip(1) {
                if a > i || b > j {
                    continue;
                }
                rhs = rhs.add_mul(&(&q[1][idx(a, b)] * &pf[a][i]), &pf[b][j]);
            }
            q[1][idx(i, j)] = (&lhs - &rhs).checked_div(&gaps[d])?;
        }
    }
    let mut law = TruncSeries2::from_dense(ring, n, q.swap_remove(1));
    if let Some(bounds) = certify::group_law_bounds(f, &law) {
        let raised = law
            .dense()
            .iter()
            .zip(bounds)
            .map(|(c, b)| c.with_certified_prec(b.max(c.prec())))
            .collect();
        law = TruncSeries2::from_dense(ring, n, raised);
    }
    Ok(law)
}

/// `F(X,Y) = Log^{-1}(Log(X) + Log(Y))` through the logarithm of `f`.
pub fn formal_group_via_log(f: &TruncSeries1) -> Result<TruncSeries2> {
    let lr = lubin_log(f)?;
    let exp = lubin_exp(&lr)?;
    formal_group_from_log(&lr.log, &exp)
}

pub fn formal_group_from_log(log: &TruncSeries1, exp: &TruncSeries1) -> Result<TruncSeries2> {
    let sum = TruncSeries2::from_x(log).add(&TruncSeries2::from_y(log))?;
    TruncSeries2::subst_outer(exp, &sum)
}

/// The unique series with linear coefficient `linear` commuting with `f`,
/// solved degree by degree from `f∘u = u∘f`. Requires `f'(0)` to be neither
/// zero nor a root of unity to precision.
pub fn commuting_series(f: &TruncSeries1, linear: &KScalar) -> Result<TruncSeries1> {
    let ring = f.ring();
    if !same_ring(ring, linear.ring()) {
        return Err(Error::ConfigMismatch);
    }
    let n = f.degree();
    let lambda = f.linear_coefficient().clone();
    let gaps = eigen_gaps(&lambda, n)?;
    let pf = powers(ring, f.coeffs(), n);
    let zero_row = || -> Vec<KScalar> { (0..=n).map(|_| KScalar::zero(ring)).collect() };
    // q[i][k] = [X^k] u^i for the partially solved u
    let mut q: Vec<Vec<KScalar>> = (0..=n).map(|_| zero_row()).collect();
    if n >= 1 {
        q[1][1] = linear.clone();
    }
    for k in 2..=n {
        // [X^k] f∘u = λ c_k + Σ_{i≥2} a_i [X^k] u^i
        let mut lhs = KScalar::zero(ring);
        for i in 2..=k {
            let mut acc = KScalar::zero(ring);
            for j in 1..=(k - i + 1) {
                acc = acc.add_mul(&q[1][j], &q[i - 1][k - j]);
            }
            lhs = &lhs + &(f.coeff(i) * &acc);
            q[i][k] = acc;
        }
        // [X^k] u∘f = λ^k c_k + Σ_{j<k} c_j [X^k] f^j
        let mut rhs = KScalar::zero(ring);
        for j in 1..k {
            rhs = &rhs + &(&q[1][j] * &pf[j][k]);
        }
        q[1][k] = (&lhs - &rhs).checked_div(&gaps[k])?;
    }
    let mut coeffs: Vec<KScalar> = q.swap_remove(1).into_iter().skip(1).collect();
    let u = TruncSeries1::from_coeffs(ring, coeffs.clone())?;
    if let Some(bounds) = certify::commuting_bounds(f, &u, linear.prec()) {
        for (c, b) in coeffs.iter_mut().zip(bounds.into_iter().skip(1)) {
            *c = c.with_certified_prec(b.max(c.prec()));
        }
    }
    TruncSeries1::from_coeffs(ring, coeffs)
}

/// `[m]_f`: the endomorphism with linear coefficient `m` commuting with `f`.
/// Equal to `Log^{-1}(m Log(X))`; see [`mult_by_m_via_log`].
pub fn mult_by_m(f: &TruncSeries1, m: &OKScalar) -> Result<TruncSeries1> {
    if !m.embeds_in_zp() {
        return Err(Error::PreconditionFailed("m must lie in Z_p".into()));
    }
    commuting_series(f, &KScalar::from_ok(m.clone()))
}

/// `[m]_f = Log^{-1}(m Log(X))` computed literally through log and exp.
pub fn mult_by_m_via_log(f: &TruncSeries1, m: &OKScalar) -> Result<TruncSeries1> {
    let lr = lubin_log(f)?;
    let exp = lubin_exp(&lr)?;
    exp.compose(&lr.log.scale(&KScalar::from_ok(m.clone())))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct DerivativeIntegrality {
    pub integral: bool,
    /// Degree m of the first logarithm coefficient with `m·b_m` non-integral.
    pub first_offending: Option<usize>,
}

/// Whether `Log'` has all coefficients in O_K.
pub fn log_derivative_integral(log: &TruncSeries1) -> DerivativeIntegrality {
    let d = log.derivative();
    let first = d.coeffs().iter().position(|c| !c.is_integral()).map(|i| i + 1);
    DerivativeIntegrality {
        integral: first.is_none(),
        first_offending: first,
    }
}

/// `F(s(X), s(Y)) = s(F(X, Y))` to certified precision.
pub fn is_endomorphism(f: &TruncSeries2, s: &TruncSeries1) -> Result<bool> {
    let lhs = f.subst2(&TruncSeries2::from_x(s), &TruncSeries2::from_y(s))?;
    let rhs = TruncSeries2::subst_outer(s, f)?;
    lhs.eq_to_prec(&rhs)
}

/// `F(F(X,Y),Z) = F(X,F(Y,Z))` up to total degree `degree`.
pub fn is_associative(f: &TruncSeries2, degree: usize) -> bool {
    let f = f.truncate(degree.min(f.degree()));
    let n = f.degree();
    let ring = f.ring();
    let [x, y, z] = [0, 1, 2].map(|k| Series3::var(ring, n, k));
    let left = Series3::subst(&f, &Series3::subst(&f, &x, &y), &z);
    let right = Series3::subst(&f, &x, &Series3::subst(&f, &y, &z));
    left.eq_to_prec(&right)
}

/// `F(X, 0) = X`, `F(0, Y) = Y` and `F(X, Y) = F(Y, X)`.
pub fn is_commutative_law(f: &TruncSeries2) -> bool {
    let unit_axes = f.terms().all(|((i, j), c)| {
        if i == 0 || j == 0 {
            let want = if i + j == 1 { 1 } else { 0 };
            c.eq_to_prec(&KScalar::from_int(f.ring(), want))
        } else {
            true
        }
    });
    unit_axes && f.eq_to_prec(&f.transpose()).unwrap_or(false)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ring::{Ring, RingConfig};

    fn z(p: u64, n: u32) -> Ring {
        RingConfig::unramified(p, n).unwrap()
    }

    fn alt_harmonic(ring: &Ring, n: usize) -> TruncSeries1 {
        let c = (1..=n as i64)
            .map(|m| KScalar::from_ratio(ring, if m % 2 == 1 { 1 } else { -1 }, m).unwrap())
            .collect();
        TruncSeries1::from_coeffs(ring, c).unwrap()
    }

    #[test]
    fn log_of_linear_is_identity() {
        let k = z(5, 10);
        let s = TruncSeries1::from_int_poly(&k, &[0, 5], 8).unwrap();
        let lr = lubin_log(&s).unwrap();
        assert_eq!(lr.log, TruncSeries1::identity(&k, 8));
        assert_eq!(lr.precision_loss_profile.len(), 7);
    }

    #[test]
    fn log_of_multiplicative_series() {
        for p in [2u64, 3, 5] {
            let k = z(p, 16);
            let s = TruncSeries1::binomial_minus_one(&k, p, 10);
            let lr = lubin_log(&s).unwrap();
            assert!(lr.log.eq_to_prec(&alt_harmonic(&k, 10)).unwrap(), "p = {p}");
            let resid = lr.log.compose(&s).unwrap().sub(&lr.log.scale(&lr.lambda)).unwrap();
            assert!(resid.is_zero_to_prec());
        }
    }

    #[test]
    fn exp_examples() {
        let k = z(3, 12);
        let x = TruncSeries1::identity(&k, 6);
        let lr = lubin_log(&TruncSeries1::from_int_poly(&k, &[0, 3], 6).unwrap()).unwrap();
        assert_eq!(lubin_exp(&lr).unwrap(), x);

        let lr = lubin_log(&TruncSeries1::binomial_minus_one(&k, 3, 6)).unwrap();
        let exp = lubin_exp(&lr).unwrap();
        let fact = [1i64, 1, 2, 6, 24, 120, 720];
        for m in 1..=6 {
            let want = KScalar::from_ratio(&k, 1, fact[m]).unwrap();
            assert!(exp.coeff(m).eq_to_prec(&want), "degree {m}");
        }
        assert!(exp.compose(&lr.log).unwrap().eq_to_prec(&x).unwrap());
    }

    #[test]
    fn additive_and_multiplicative_groups() {
        let k = z(3, 12);
        let f = TruncSeries1::from_int_poly(&k, &[0, 3], 6).unwrap();
        let g = formal_group(&f).unwrap();
        let one = KScalar::one(&k);
        let add = TruncSeries2::from_terms(&k, 6, &[((1, 0), one.clone()), ((0, 1), one.clone())])
            .unwrap();
        assert!(g.eq_to_prec(&add).unwrap());

        let f = TruncSeries1::binomial_minus_one(&k, 3, 8);
        let g = formal_group(&f).unwrap();
        let mult = TruncSeries2::from_terms(
            &k,
            8,
            &[((1, 0), one.clone()), ((0, 1), one.clone()), ((1, 1), one)],
        )
        .unwrap();
        assert!(g.eq_to_prec(&mult).unwrap());
        assert!(is_commutative_law(&g));
        assert!(is_associative(&g, 6));
    }

    #[test]
    fn mult_by_m_examples() {
        let k = z(3, 12);
        let f = TruncSeries1::binomial_minus_one(&k, 3, 8);
        let one = OKScalar::one(&k);
        assert_eq!(mult_by_m(&f, &one).unwrap(), TruncSeries1::identity(&k, 8));
        let two = OKScalar::from_int(&k, 2);
        let want = TruncSeries1::binomial_minus_one(&k, 2, 8);
        assert!(mult_by_m(&f, &two).unwrap().eq_to_prec(&want).unwrap());
        assert!(mult_by_m_via_log(&f, &two).unwrap().eq_to_prec(&want).unwrap());

        // [p]_f = f for a Lubin-Tate series
        let lt = TruncSeries1::from_int_poly(&k, &[0, 3, 0, 1], 12).unwrap();
        let p = OKScalar::from_int(&k, 3);
        assert!(mult_by_m(&lt, &p).unwrap().eq_to_prec(&lt).unwrap());
    }

    #[test]
    fn derivative_integrality() {
        let k = z(5, 10);
        let lr = lubin_log(&TruncSeries1::binomial_minus_one(&k, 5, 12)).unwrap();
        assert_eq!(
            log_derivative_integral(&lr.log),
            DerivativeIntegrality { integral: true, first_offending: None }
        );
        assert!(log_derivative_integral(&TruncSeries1::identity(&k, 5)).integral);
        let bad = TruncSeries1::from_coeffs(
            &k,
            vec![KScalar::one(&k), KScalar::from_ratio(&k, 1, 25).unwrap()],
        )
        .unwrap();
        assert_eq!(
            log_derivative_integral(&bad),
            DerivativeIntegrality { integral: false, first_offending: Some(2) }
        );
    }

    #[test]
    fn root_of_unity_rejected() {
        let k = z(5, 6);
        let s = TruncSeries1::from_int_poly(&k, &[0, -1, 1], 5).unwrap();
        assert_eq!(
            lubin_log(&s).unwrap_err(),
            Error::RootOfUnityLinearCoefficient { degree: 3 }
        );
    }

    /// Components of an integral coefficient reduced mod p^k.
    fn reduced(c: &KScalar, k: u32) -> Vec<i64> {
        let pk = (c.ring().p() as i64).pow(k);
        c.to_ok()
            .unwrap()
            .signed_components()
            .iter()
            .map(|x| x.rem_euclid(pk))
            .collect()
    }

    /// Certified digits at low precision agree with a high precision run.
    #[test]
    fn certified_precision_is_sound() {
        let (lo, hi) = (z(3, 8), z(3, 30));
        let n = 24;
        let f_lo = TruncSeries1::from_int_poly(&lo, &[0, 3, 3, 1], n).unwrap();
        let f_hi = TruncSeries1::from_int_poly(&hi, &[0, 3, 3, 1], n).unwrap();
        let u_lo = mult_by_m(&f_lo, &OKScalar::from_int(&lo, 7)).unwrap();
        let u_hi = mult_by_m(&f_hi, &OKScalar::from_int(&hi, 7)).unwrap();
        assert!(u_lo.certified_prec() > 0);
        for k in 1..=n {
            let b = u_lo.coeff(k).prec() as u32;
            assert_eq!(reduced(u_lo.coeff(k), b), reduced(u_hi.coeff(k), b), "degree {k}");
        }
        let g_lo = formal_group(&f_lo).unwrap();
        let g_hi = formal_group(&f_hi).unwrap();
        assert!(g_lo.certified_prec() > 0);
        for ((i, j), c) in g_lo.terms() {
            let b = c.prec() as u32;
            assert_eq!(reduced(c, b), reduced(g_hi.coeff(i, j), b), "({i},{j})");
        }
    }

    #[test]
    fn group_law_routes_agree() {
        let k = z(3, 20);
        let f = TruncSeries1::from_int_poly(&k, &[0, 3, 0, 1], 12).unwrap();
        let a = formal_group(&f).unwrap();
        let b = formal_group_via_log(&f).unwrap();
        assert!(a.certified_prec() >= b.certified_prec());
        assert!(a.eq_to_prec(&b).unwrap());
        let g = TruncSeries1::binomial_minus_one(&k, 3, 12);
        let mult = formal_group(&g).unwrap();
        let xy = TruncSeries2::from_terms(
            &k,
            12,
            &[((1, 0), KScalar::one(&k)), ((0, 1), KScalar::one(&k)), ((1, 1), KScalar::one(&k))],
        )
        .unwrap();
        assert!(mult.eq_to_prec(&xy).unwrap());
    }
}
