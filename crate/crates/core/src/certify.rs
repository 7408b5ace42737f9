//! A posteriori error bounds for integral solutions of `f∘u = u∘f` and
//! `f(F(X,Y)) = F(f(X), f(Y))`.
//!
//! The computed representative is plugged back into the equation exactly;
//! the residual and the linearized equation then bound the distance to the
//! true solution coefficient by coefficient. Nonlinear terms in the error
//! have valuation at least twice the smallest bound of lower degree.

use crate::kscalar::KScalar;
use crate::series::{powers, TruncSeries1};
use crate::series2::{exponents, idx, powers2, TruncSeries2};

fn exact(c: &KScalar) -> KScalar {
    c.with_certified_prec(i64::MAX)
}

fn exact1(s: &TruncSeries1) -> TruncSeries1 {
    let c = s.coeffs().iter().skip(1).map(exact).collect();
    TruncSeries1::from_coeffs(s.ring(), c).expect("same ring")
}

fn exact2(s: &TruncSeries2) -> TruncSeries2 {
    TruncSeries2::from_dense(s.ring(), s.degree(), s.dense().iter().map(exact).collect())
}

/// Valuation of an exactly known element, capped at the storage precision.
fn v(c: &KScalar, cap: i64) -> i64 {
    c.rep_valuation().map_or(cap, |x| x.min(cap))
}

fn gap_valuations(f: &TruncSeries1, cap: i64) -> Vec<i64> {
    let lambda = exact(f.linear_coefficient());
    let mut out = vec![cap; f.degree() + 1];
    let mut lm = lambda.clone();
    for g in out.iter_mut().skip(2) {
        lm = &lm * &lambda;
        *g = v(&(&lm - &lambda), cap);
    }
    out
}

/// `f'(t)` as a dense coefficient vector, from the powers of `t`.
fn derivative_at(f: &TruncSeries1, pt: &[Vec<KScalar>], len: usize) -> Vec<KScalar> {
    let ring = f.ring();
    let mut out: Vec<KScalar> = (0..len).map(|_| KScalar::zero(ring)).collect();
    for m in 1..=f.degree() {
        let c = exact(f.coeff(m)).scale(m as i64);
        if c.unit_part().is_zero() {
            continue;
        }
        for (o, x) in out.iter_mut().zip(&pt[m - 1]) {
            if !x.unit_part().is_zero() {
                *o = &*o + &(&c * x);
            }
        }
    }
    out
}

/// Lower bounds on `v(u*_k − u_k)` for `k = 1..=N`, where `u*` is the true
/// series commuting with `f` whose linear coefficient is known to `lin_prec`.
pub(crate) fn commuting_bounds(f: &TruncSeries1, u: &TruncSeries1, lin_prec: i64) -> Option<Vec<i64>> {
    if !f.is_integral() || !u.is_integral() {
        return None;
    }
    let ring = f.ring();
    let n = f.degree().min(u.degree());
    let cap = ring.full_precision();
    let (fx, ux) = (exact1(&f.truncate(n)), exact1(&u.truncate(n)));
    let input = f.truncate(n).certified_prec();
    let r = fx.compose(&ux).ok()?.sub(&ux.compose(&fx).ok()?).ok()?;
    let pu = powers(ring, ux.coeffs(), n);
    let d1 = derivative_at(&fx, &pu, n + 1);
    let pf = powers(ring, fx.coeffs(), n);
    let gaps = gap_valuations(&fx, cap);
    let vd1: Vec<i64> = d1.iter().map(|c| v(c, cap)).collect();
    let mut b = vec![cap; n + 1];
    if n >= 1 {
        b[1] = lin_prec.min(cap);
    }
    let mut low = b[1];
    for k in 2..=n {
        let mut m = v(r.coeff(k), cap).min(input).min(2 * low);
        for j in 1..k {
            m = m.min(vd1[k - j] + b[j]).min(v(&pf[j][k], cap) + b[j]);
        }
        b[k] = (m - gaps[k]).min(cap);
        if b[k] < 0 {
            return None;
        }
        low = low.min(b[k]);
    }
    Some(b)
}

/// Lower bounds on the error of each coefficient of the integral group law
/// `F` attached to `f`, indexed like the dense storage of [`TruncSeries2`].
pub(crate) fn group_law_bounds(f: &TruncSeries1, law: &TruncSeries2) -> Option<Vec<i64>> {
    if !f.is_integral() || !law.is_integral() {
        return None;
    }
    let ring = f.ring();
    let n = f.degree().min(law.degree());
    let cap = ring.full_precision();
    let (fx, lx) = (exact1(&f.truncate(n)), exact2(&law.truncate(n)));
    let input = f.truncate(n).certified_prec();
    let lhs = TruncSeries2::subst_outer(&fx, &lx).ok()?;
    let rhs = lx
        .subst2(&TruncSeries2::from_x(&fx), &TruncSeries2::from_y(&fx))
        .ok()?;
    let r = lhs.sub(&rhs).ok()?;
    let pl = powers2(ring, lx.dense(), n);
    let d1 = derivative_at(&fx, &pl, pl[0].len());
    let vd1: Vec<i64> = d1.iter().map(|c| v(c, cap)).collect();
    let pf = powers(ring, fx.coeffs(), n);
    let vpf: Vec<Vec<i64>> = pf.iter().map(|row| row.iter().map(|c| v(c, cap)).collect()).collect();
    let gaps = gap_valuations(&fx, cap);
    let mut b = vec![cap; pl[0].len()];
    let mut low = cap;
    for d in 2..=n {
        let mut low_d = cap;
        for j in 0..=d {
            let i = d - j;
            let mut m = v(r.coeff(i, j), cap).min(input).min(2 * low);
            for (a, bb) in exponents(d - 1).skip(1) {
                if a > i || bb > j {
                    continue;
                }
                let e = b[idx(a, bb)];
                m = m
                    .min(vd1[idx(i - a, j - bb)] + e)
                    .min(vpf[a][i] + vpf[bb][j] + e);
            }
            let bound = (m - gaps[d]).min(cap);
            if bound < 0 {
                return None;
            }
            b[idx(i, j)] = bound;
            low_d = low_d.min(bound);
        }
        low = low.min(low_d);
    }
    Some(b)
}
