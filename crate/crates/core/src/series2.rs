//! Truncated power series in two variables, stored densely by total degree.

use std::fmt;

use crate::error::{Error, Result};
use crate::kscalar::KScalar;
use crate::ring::{same_ring, Ring};
use crate::series::{mul_trunc, powers, TruncSeries1};

#[inline]
pub(crate) fn idx(i: usize, j: usize) -> usize {
    let d = i + j;
    d * (d + 1) / 2 + j
}

pub(crate) fn len_for(n: usize) -> usize {
    (n + 1) * (n + 2) / 2
}

/// Exponent pairs in storage order.
pub(crate) fn exponents(n: usize) -> impl Iterator<Item = (usize, usize)> {
    (0..=n).flat_map(|d| (0..=d).map(move |j| (d - j, j)))
}

pub(crate) fn zeros(ring: &Ring, n: usize) -> Vec<KScalar> {
    (0..len_for(n)).map(|_| KScalar::zero(ring)).collect()
}

fn mul2(ring: &Ring, a: &[KScalar], b: &[KScalar], n: usize) -> Vec<KScalar> {
    let mut out = zeros(ring, n);
    let mut floor = vec![ring.full_precision(); out.len()];
    let b_terms: Vec<(usize, usize, &KScalar)> = exponents(n).map(|(i, j)| (i, j, &b[idx(i, j)])).collect();
    for (i1, j1) in exponents(n) {
        let x = &a[idx(i1, j1)];
        let lx = x.valuation_lower_bound();
        let d1 = i1 + j1;
        for &(i2, j2, y) in &b_terms {
            if d1 + i2 + j2 > n {
                // storage order is by total degree
                break;
            }
            let k = idx(i1 + i2, j1 + j2);
            if x.unit_part().is_zero() || y.unit_part().is_zero() {
                let bound = (lx + y.prec()).min(y.valuation_lower_bound() + x.prec());
                floor[k] = floor[k].min(bound);
                continue;
            }
            out[k] = &out[k] + &(x * y);
        }
    }
    out.into_iter()
        .zip(floor)
        .map(|(c, f)| if f < c.prec() { c.with_prec(f) } else { c })
        .collect()
}

pub(crate) fn powers2(ring: &Ring, t: &[KScalar], n: usize) -> Vec<Vec<KScalar>> {
    let mut one = zeros(ring, n);
    one[0] = KScalar::one(ring);
    let mut out = vec![one];
    for k in 1..=n {
        let next = mul2(ring, &out[k - 1], t, n);
        out.push(next);
    }
    out
}

/// `Σ c_ij X^i Y^j` over `1 ≤ i + j ≤ N`.
#[derive(Clone)]
pub struct TruncSeries2 {
    ring: Ring,
    n: usize,
    // entry idx(0, 0) is always zero
    coeffs: Vec<KScalar>,
}

impl TruncSeries2 {
    pub fn zero(ring: &Ring, degree: usize) -> Self {
        TruncSeries2 {
            ring: ring.clone(),
            n: degree,
            coeffs: zeros(ring, degree),
        }
    }

    /// `s(X)` viewed as a series in X and Y.
    pub fn from_x(s: &TruncSeries1) -> Self {
        let mut out = TruncSeries2::zero(s.ring(), s.degree());
        for i in 1..=s.degree() {
            out.coeffs[idx(i, 0)] = s.coeff(i).clone();
        }
        out
    }

    /// `s(Y)` viewed as a series in X and Y.
    pub fn from_y(s: &TruncSeries1) -> Self {
        let mut out = TruncSeries2::zero(s.ring(), s.degree());
        for j in 1..=s.degree() {
            out.coeffs[idx(0, j)] = s.coeff(j).clone();
        }
        out
    }

    /// From explicit `((i, j), c_ij)` terms; all others are zero.
    pub fn from_terms(ring: &Ring, degree: usize, terms: &[((usize, usize), KScalar)]) -> Result<Self> {
        let mut out = TruncSeries2::zero(ring, degree);
        for ((i, j), c) in terms {
            if i + j == 0 || i + j > degree {
                return Err(Error::Malformed(format!("term ({i},{j}) out of range")));
            }
            out.coeffs[idx(*i, *j)] = c.clone();
        }
        Ok(out)
    }

    pub(crate) fn from_dense(ring: &Ring, n: usize, coeffs: Vec<KScalar>) -> Self {
        debug_assert_eq!(coeffs.len(), len_for(n));
        TruncSeries2 {
            ring: ring.clone(),
            n,
            coeffs,
        }
    }

    pub(crate) fn dense(&self) -> &[KScalar] {
        &self.coeffs
    }

    pub fn ring(&self) -> &Ring {
        &self.ring
    }

    pub fn degree(&self) -> usize {
        self.n
    }

    pub fn coeff(&self, i: usize, j: usize) -> &KScalar {
        &self.coeffs[idx(i, j)]
    }

    pub fn set_coeff(&mut self, i: usize, j: usize, c: KScalar) {
        assert!(i + j >= 1 && i + j <= self.n, "({i},{j}) out of range");
        self.coeffs[idx(i, j)] = c;
    }

    /// All `((i, j), c_ij)` with `1 ≤ i + j ≤ N`, by increasing total degree.
    pub fn terms(&self) -> impl Iterator<Item = ((usize, usize), &KScalar)> {
        exponents(self.n).skip(1).map(move |(i, j)| ((i, j), &self.coeffs[idx(i, j)]))
    }

    pub fn certified_prec(&self) -> i64 {
        self.terms()
            .map(|(_, c)| c.prec())
            .min()
            .unwrap_or(self.ring.full_precision())
    }

    pub fn is_integral(&self) -> bool {
        self.coeffs.iter().all(KScalar::is_integral)
    }

    /// First coefficient (by total degree) with a nonzero shift, as
    /// `(i, j, shift)`.
    pub fn first_non_integral(&self) -> Option<(usize, usize, u32)> {
        self.terms()
            .find(|(_, c)| !c.is_integral())
            .map(|((i, j), c)| (i, j, c.shift()))
    }

    /// `F(Y, X)`.
    pub fn transpose(&self) -> Self {
        let mut out = TruncSeries2::zero(&self.ring, self.n);
        for ((i, j), c) in self.terms() {
            out.coeffs[idx(j, i)] = c.clone();
        }
        out
    }

    fn check(&self, other: &Self) -> Result<usize> {
        if !same_ring(&self.ring, &other.ring) {
            return Err(Error::ConfigMismatch);
        }
        Ok(self.n.min(other.n))
    }

    pub fn truncate(&self, degree: usize) -> Self {
        let mut out = TruncSeries2::zero(&self.ring, degree);
        for (i, j) in exponents(degree.min(self.n)).skip(1) {
            out.coeffs[idx(i, j)] = self.coeffs[idx(i, j)].clone();
        }
        out
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        let n = self.check(other)?;
        let mut out = TruncSeries2::zero(&self.ring, n);
        for (i, j) in exponents(n).skip(1) {
            let k = idx(i, j);
            out.coeffs[k] = &self.coeffs[k] - &other.coeffs[k];
        }
        Ok(out)
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        let n = self.check(other)?;
        let mut out = TruncSeries2::zero(&self.ring, n);
        for (i, j) in exponents(n).skip(1) {
            let k = idx(i, j);
            out.coeffs[k] = &self.coeffs[k] + &other.coeffs[k];
        }
        Ok(out)
    }

    pub fn mul(&self, other: &Self) -> Result<Self> {
        let n = self.check(other)?;
        let a = self.truncate(n);
        let b = other.truncate(n);
        Ok(TruncSeries2 {
            ring: self.ring.clone(),
            n,
            coeffs: mul2(&self.ring, &a.coeffs, &b.coeffs, n),
        })
    }

    pub fn is_zero_to_prec(&self) -> bool {
        self.coeffs.iter().all(KScalar::is_zero)
    }

    pub fn eq_to_prec(&self, other: &Self) -> Result<bool> {
        Ok(self.sub(other)?.is_zero_to_prec())
    }

    /// `F(s(X), t(X))` truncated at the smallest degree involved.
    pub fn subst(&self, s: &TruncSeries1, t: &TruncSeries1) -> Result<TruncSeries1> {
        if !same_ring(&self.ring, s.ring()) || !same_ring(&self.ring, t.ring()) {
            return Err(Error::ConfigMismatch);
        }
        let n = self.n.min(s.degree()).min(t.degree());
        let ring = &self.ring;
        let ps = powers(ring, &s.coeffs()[..=n], n);
        let pt = powers(ring, &t.coeffs()[..=n], n);
        let mut total: Vec<KScalar> = (0..=n).map(|_| KScalar::zero(ring)).collect();
        for i in 0..=n {
            let mut inner: Vec<KScalar> = (0..=n).map(|_| KScalar::zero(ring)).collect();
            for j in 0..=(n - i) {
                if i + j == 0 {
                    continue;
                }
                let c = &self.coeffs[idx(i, j)];
                for m in j..=n {
                    inner[m] = &inner[m] + &(c * &pt[j][m]);
                }
            }
            let term = mul_trunc(ring, &ps[i], &inner, n);
            for m in 0..=n {
                total[m] = &total[m] + &term[m];
            }
        }
        TruncSeries1::from_coeffs(ring, total.into_iter().skip(1).collect())
    }

    /// `F(A(X,Y), B(X,Y))` for two-variable arguments without constant term.
    pub fn subst2(&self, a: &TruncSeries2, b: &TruncSeries2) -> Result<TruncSeries2> {
        self.check(a)?;
        self.check(b)?;
        let n = self.n.min(a.n).min(b.n);
        let ring = &self.ring;
        let pa = powers2(ring, &a.truncate(n).coeffs, n);
        let pb = powers2(ring, &b.truncate(n).coeffs, n);
        let mut total = zeros(ring, n);
        for i in 0..=n {
            let mut inner = zeros(ring, n);
            for j in 0..=(n - i) {
                if i + j == 0 {
                    continue;
                }
                let c = &self.coeffs[idx(i, j)];
                for (k, x) in pb[j].iter().enumerate() {
                    inner[k] = &inner[k] + &(c * x);
                }
            }
            let term = mul2(ring, &pa[i], &inner, n);
            for (k, x) in term.iter().enumerate() {
                total[k] = &total[k] + x;
            }
        }
        Ok(TruncSeries2 {
            ring: ring.clone(),
            n,
            coeffs: total,
        })
    }

    /// `s(F(X,Y))`.
    pub fn subst_outer(s: &TruncSeries1, f: &TruncSeries2) -> Result<TruncSeries2> {
        if !same_ring(s.ring(), &f.ring) {
            return Err(Error::ConfigMismatch);
        }
        let n = f.n.min(s.degree());
        let ring = &f.ring;
        let pf = powers2(ring, &f.truncate(n).coeffs, n);
        let mut total = zeros(ring, n);
        for (k, pk) in pf.iter().enumerate().skip(1) {
            let a = s.coeff(k);
            for (slot, x) in total.iter_mut().zip(pk) {
                *slot = &*slot + &(a * x);
            }
        }
        Ok(TruncSeries2 {
            ring: ring.clone(),
            n,
            coeffs: total,
        })
    }
}

impl PartialEq for TruncSeries2 {
    fn eq(&self, other: &Self) -> bool {
        same_ring(&self.ring, &other.ring) && self.n == other.n && self.coeffs == other.coeffs
    }
}

impl fmt::Debug for TruncSeries2 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let terms: Vec<String> = self
            .terms()
            .filter(|(_, c)| !c.is_zero())
            .map(|((i, j), c)| format!("({c})X^{i}Y^{j}"))
            .collect();
        write!(f, "TruncSeries2[{} + O(deg {})]", terms.join(" + "), self.n + 1)
    }
}
