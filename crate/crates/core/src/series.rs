//! Truncated power series in one variable over K without constant term.

use std::fmt;

use crate::error::{Error, Result};
use crate::kscalar::KScalar;
use crate::ring::{same_ring, OKScalar, Ring};

/// Truncated product of dense coefficient vectors (index = degree), up to
/// degree `n` inclusive. Products with a factor that vanishes to precision
/// only contribute their precision bound.
pub(crate) fn mul_trunc(ring: &Ring, a: &[KScalar], b: &[KScalar], n: usize) -> Vec<KScalar> {
    let mut out: Vec<KScalar> = (0..=n).map(|_| KScalar::zero(ring)).collect();
    let mut floor = vec![ring.full_precision(); n + 1];
    for (i, x) in a.iter().enumerate().take(n + 1) {
        let lx = x.valuation_lower_bound();
        for (j, y) in b.iter().enumerate().take(n + 1 - i) {
            if x.unit_part().is_zero() || y.unit_part().is_zero() {
                let bound = (lx + y.prec()).min(y.valuation_lower_bound() + x.prec());
                floor[i + j] = floor[i + j].min(bound);
                continue;
            }
            out[i + j] = &out[i + j] + &(x * y);
        }
    }
    out.into_iter()
        .zip(floor)
        .map(|(c, f)| if f < c.prec() { c.with_prec(f) } else { c })
        .collect()
}

/// Powers `t^k` for `k = 0..=n`, truncated at degree `n`.
pub(crate) fn powers(ring: &Ring, t: &[KScalar], n: usize) -> Vec<Vec<KScalar>> {
    let mut one: Vec<KScalar> = (0..=n).map(|_| KScalar::zero(ring)).collect();
    one[0] = KScalar::one(ring);
    let mut out = vec![one];
    for k in 1..=n {
        let next = mul_trunc(ring, &out[k - 1], t, n);
        out.push(next);
    }
    out
}

/// Series with a constant term allowed, as produced by differentiation.
#[derive(Clone, Debug)]
pub struct PowerSeries {
    coeffs: Vec<KScalar>,
}

impl PowerSeries {
    pub fn constant_term(&self) -> &KScalar {
        &self.coeffs[0]
    }

    pub fn coeff(&self, i: usize) -> &KScalar {
        &self.coeffs[i]
    }

    pub fn coeffs(&self) -> &[KScalar] {
        &self.coeffs
    }

    /// Highest degree kept.
    pub fn degree(&self) -> usize {
        self.coeffs.len() - 1
    }
}

/// `a_1 X + … + a_N X^N` modulo `X^(N+1)`.
#[derive(Clone)]
pub struct TruncSeries1 {
    ring: Ring,
    // coeffs[0] is always zero
    coeffs: Vec<KScalar>,
}

impl TruncSeries1 {
    pub fn zero(ring: &Ring, degree: usize) -> Self {
        TruncSeries1 {
            ring: ring.clone(),
            coeffs: (0..=degree).map(|_| KScalar::zero(ring)).collect(),
        }
    }

    pub fn identity(ring: &Ring, degree: usize) -> Self {
        let mut s = TruncSeries1::zero(ring, degree);
        if degree >= 1 {
            s.coeffs[1] = KScalar::one(ring);
        }
        s
    }

    /// From `a_1, …, a_N`.
    pub fn from_coeffs(ring: &Ring, coeffs: Vec<KScalar>) -> Result<Self> {
        if coeffs.iter().any(|c| !same_ring(c.ring(), ring)) {
            return Err(Error::ConfigMismatch);
        }
        let mut all = vec![KScalar::zero(ring)];
        all.extend(coeffs);
        Ok(TruncSeries1 {
            ring: ring.clone(),
            coeffs: all,
        })
    }

    pub fn from_ok_coeffs(ring: &Ring, coeffs: &[OKScalar]) -> Result<Self> {
        Self::from_coeffs(ring, coeffs.iter().cloned().map(KScalar::from_ok).collect())
    }

    /// From integer coefficients `poly[i]` of `X^i`, truncated at `degree`.
    /// `poly[0]` must be zero.
    pub fn from_int_poly(ring: &Ring, poly: &[i64], degree: usize) -> Result<Self> {
        if poly.first().is_some_and(|&c| c != 0) {
            return Err(Error::Malformed("series must have no constant term".into()));
        }
        let mut s = TruncSeries1::zero(ring, degree);
        for (i, &c) in poly.iter().enumerate().skip(1).take(degree) {
            s.coeffs[i] = KScalar::from_int(ring, c);
        }
        Ok(s)
    }

    /// Truncation of `(1 + X)^n − 1` for `n ≥ 0`.
    pub fn binomial_minus_one(ring: &Ring, n: u64, degree: usize) -> Self {
        let mut s = TruncSeries1::zero(ring, degree);
        // (1+X)^n by repeated squaring
        let mut base: Vec<KScalar> = (0..=degree).map(|_| KScalar::zero(ring)).collect();
        base[0] = KScalar::one(ring);
        if degree >= 1 {
            base[1] = KScalar::one(ring);
        }
        let mut acc: Vec<KScalar> = (0..=degree).map(|_| KScalar::zero(ring)).collect();
        acc[0] = KScalar::one(ring);
        let mut e = n;
        while e > 0 {
            if e & 1 == 1 {
                acc = mul_trunc(ring, &acc, &base, degree);
            }
            e >>= 1;
            if e > 0 {
                base = mul_trunc(ring, &base, &base, degree);
            }
        }
        for i in 1..=degree {
            s.coeffs[i] = acc[i].clone();
        }
        s
    }

    pub fn ring(&self) -> &Ring {
        &self.ring
    }

    /// Truncation degree N.
    pub fn degree(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn coeff(&self, i: usize) -> &KScalar {
        &self.coeffs[i]
    }

    /// Dense coefficients indexed by degree; entry 0 is the zero constant.
    pub fn coeffs(&self) -> &[KScalar] {
        &self.coeffs
    }

    pub fn set_coeff(&mut self, i: usize, c: KScalar) {
        assert!(i >= 1 && i <= self.degree(), "degree {i} out of range");
        self.coeffs[i] = c;
    }

    pub fn linear_coefficient(&self) -> &KScalar {
        &self.coeffs[1]
    }

    /// Lower bound on the absolute precision of every coefficient.
    pub fn certified_prec(&self) -> i64 {
        self.coeffs[1..]
            .iter()
            .map(KScalar::prec)
            .min()
            .unwrap_or(self.ring.full_precision())
    }

    pub fn is_integral(&self) -> bool {
        self.coeffs.iter().all(KScalar::is_integral)
    }

    pub fn truncate(&self, degree: usize) -> Self {
        let mut s = TruncSeries1::zero(&self.ring, degree);
        for i in 1..=degree.min(self.degree()) {
            s.coeffs[i] = self.coeffs[i].clone();
        }
        s
    }

    fn check(&self, other: &Self) -> Result<usize> {
        if !same_ring(&self.ring, &other.ring) {
            return Err(Error::ConfigMismatch);
        }
        Ok(self.degree().min(other.degree()))
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        let n = self.check(other)?;
        let mut s = TruncSeries1::zero(&self.ring, n);
        for i in 1..=n {
            s.coeffs[i] = &self.coeffs[i] + &other.coeffs[i];
        }
        Ok(s)
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.add(&other.scale(&KScalar::from_int(&self.ring, -1)))
    }

    pub fn scale(&self, c: &KScalar) -> Self {
        TruncSeries1 {
            ring: self.ring.clone(),
            coeffs: self.coeffs.iter().map(|x| x * c).collect(),
        }
    }

    /// Truncated product.
    pub fn mul(&self, other: &Self) -> Result<Self> {
        let n = self.check(other)?;
        Ok(TruncSeries1 {
            ring: self.ring.clone(),
            coeffs: mul_trunc(&self.ring, &self.coeffs, &other.coeffs, n),
        })
    }

    /// `self ∘ t` modulo `X^(N+1)`, N the smaller truncation degree.
    pub fn compose(&self, t: &Self) -> Result<Self> {
        let n = self.check(t)?;
        let pw = powers(&self.ring, &t.coeffs[..=n], n);
        let mut out = TruncSeries1::zero(&self.ring, n);
        for m in 1..=n {
            let mut acc = KScalar::zero(&self.ring);
            for k in 1..=m {
                acc = &acc + &(&self.coeffs[k] * &pw[k][m]);
            }
            out.coeffs[m] = acc;
        }
        Ok(out)
    }

    /// n-fold composite `self^{∘n}` (identity for n = 0).
    pub fn iterate(&self, n: u64) -> Self {
        let mut acc = TruncSeries1::identity(&self.ring, self.degree());
        let mut base = self.clone();
        let mut e = n;
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.compose(&base).expect("same ring");
            }
            e >>= 1;
            if e > 0 {
                base = base.compose(&base).expect("same ring");
            }
        }
        acc
    }

    /// Compositional inverse; the linear coefficient must be a unit of O_K.
    pub fn comp_inverse(&self) -> Result<Self> {
        let n = self.degree();
        let a1 = &self.coeffs[1];
        if !a1.is_unit() {
            return Err(Error::NotInvertible(format!(
                "linear coefficient {a1} is not a unit"
            )));
        }
        let ring = &self.ring;
        let b1 = KScalar::one(ring).checked_div(a1)?;
        // pw[k][m] = [X^m] g^k for the partially built inverse g
        let zero_row = || -> Vec<KScalar> { (0..=n).map(|_| KScalar::zero(ring)).collect() };
        let mut pw: Vec<Vec<KScalar>> = (0..=n).map(|_| zero_row()).collect();
        pw[1][1] = b1;
        for m in 2..=n {
            let mut c = KScalar::zero(ring);
            for k in 2..=m {
                let mut acc = KScalar::zero(ring);
                for j in 1..=(m - k + 1) {
                    acc = &acc + &(&pw[1][j] * &pw[k - 1][m - j]);
                }
                c = &c + &(&self.coeffs[k] * &acc);
                pw[k][m] = acc;
            }
            pw[1][m] = (-&c).checked_div(a1)?;
        }
        let mut out = TruncSeries1::zero(ring, n);
        for m in 1..=n {
            out.coeffs[m] = pw[1][m].clone();
        }
        Ok(out)
    }

    /// Index of the first unit coefficient, `None` if there is none up to N.
    /// Fails when a coefficient before it is too imprecise to rule out.
    pub fn weierstrass_degree(&self) -> Result<Option<usize>> {
        for i in 1..=self.degree() {
            let c = &self.coeffs[i];
            if c.is_unit() {
                return Ok(Some(i));
            }
            if c.is_zero() && c.prec() < 1 {
                return Err(Error::PrecisionExhausted(format!(
                    "coefficient of degree {i} known only to precision {}",
                    c.prec()
                )));
            }
        }
        Ok(None)
    }

    /// Termwise derivative, truncated at degree N − 1.
    pub fn derivative(&self) -> PowerSeries {
        let coeffs = (1..=self.degree())
            .map(|i| self.coeffs[i].scale(i as i64))
            .collect();
        PowerSeries { coeffs }
    }

    /// True iff `self − other` vanishes coefficientwise to precision.
    pub fn eq_to_prec(&self, other: &Self) -> Result<bool> {
        Ok(self.sub(other)?.is_zero_to_prec())
    }

    pub fn is_zero_to_prec(&self) -> bool {
        self.coeffs.iter().all(KScalar::is_zero)
    }
}

impl PartialEq for TruncSeries1 {
    fn eq(&self, other: &Self) -> bool {
        same_ring(&self.ring, &other.ring) && self.coeffs == other.coeffs
    }
}

impl fmt::Debug for TruncSeries1 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "TruncSeries1[{self}]")
    }
}

impl fmt::Display for TruncSeries1 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let terms: Vec<String> = self
            .coeffs
            .iter()
            .enumerate()
            .filter(|(_, c)| !c.is_zero())
            .map(|(i, c)| format!("({c})X^{i}"))
            .collect();
        if terms.is_empty() {
            write!(f, "0")?;
        } else {
            write!(f, "{}", terms.join(" + "))?;
        }
        write!(f, " + O(X^{})", self.degree() + 1)
    }
}
