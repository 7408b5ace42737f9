//! Arithmetic in O_K = W(F_q)[π]/(E(π)) modulo p^n.
//!
//! An element is stored as `e * r` residues modulo `p^n_prec`: the entry at
//! `i * r + j` is the coefficient of `π^i ζ^j`, where ζ generates the
//! unramified subring over Z_p. The valuation is normalized so that
//! `v(p) = e` and `v(π) = 1`.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::fp_poly;

pub type Ring = Arc<RingConfig>;

/// JSON form of a [`RingConfig`]. Polynomials are ascending coefficient
/// arrays of integers; `h` and `E` may be omitted to get the defaults.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RingConfigSpec {
    pub p: u64,
    pub r: usize,
    pub e: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub h: Option<Vec<i64>>,
    #[serde(rename = "E", default, skip_serializing_if = "Option::is_none")]
    pub eisenstein: Option<Vec<i64>>,
    pub n_prec: u32,
}

/// The tower Z_p ⊂ W(F_q) ⊂ O_K together with the working precision.
#[derive(Debug)]
pub struct RingConfig {
    p: u64,
    r: usize,
    e: usize,
    n_prec: u32,
    h: Vec<u64>,
    eisenstein: Vec<i64>,
    modulus: u64,
    // ζ^r = Σ h_neg[j] ζ^j and π^e = Σ e_neg[i] π^i
    h_neg: Vec<u64>,
    e_neg: Vec<u64>,
    // inverse of the unit π^e / p
    c0_inv: u64,
}

impl PartialEq for RingConfig {
    fn eq(&self, other: &Self) -> bool {
        self.p == other.p
            && self.r == other.r
            && self.e == other.e
            && self.n_prec == other.n_prec
            && self.h == other.h
            && self.eisenstein == other.eisenstein
    }
}

impl Eq for RingConfig {}

#[inline]
fn mulmod(a: u64, b: u64, m: u64) -> u64 {
    ((a as u128 * b as u128) % m as u128) as u64
}

#[inline]
fn addmod(a: u64, b: u64, m: u64) -> u64 {
    let s = a + b;
    if s >= m {
        s - m
    } else {
        s
    }
}

fn inv_mod(a: u64, m: u64) -> Option<u64> {
    let (mut r0, mut r1) = (m as i128, a as i128);
    let (mut t0, mut t1) = (0i128, 1i128);
    while r1 != 0 {
        let q = r0 / r1;
        (r0, r1) = (r1, r0 - q * r1);
        (t0, t1) = (t1, t0 - q * t1);
    }
    (r0 == 1).then(|| t0.rem_euclid(m as i128) as u64)
}

fn reduce_signed(x: i64, m: u64) -> u64 {
    (x as i128).rem_euclid(m as i128) as u64
}

impl RingConfig {
    /// Builds and validates a configuration. `h` defaults to the smallest
    /// irreducible monic polynomial of degree `r` modulo `p`, and the
    /// Eisenstein polynomial defaults to `X^e - p`.
    pub fn new(
        p: u64,
        r: usize,
        e: usize,
        h: Option<Vec<i64>>,
        eisenstein: Option<Vec<i64>>,
        n_prec: u32,
    ) -> Result<Ring> {
        let bad = |msg: String| Err(Error::InvalidConfig(msg));
        if !fp_poly::is_prime(p) {
            return bad(format!("p = {p} is not prime"));
        }
        if r == 0 || e == 0 || n_prec == 0 {
            return bad("r, e and n_prec must be at least 1".into());
        }
        let modulus = match p.checked_pow(n_prec) {
            Some(m) if m <= i64::MAX as u64 => m,
            _ => return bad(format!("p^n_prec = {p}^{n_prec} does not fit in 63 bits")),
        };

        let h: Vec<u64> = match h {
            Some(h) => h.iter().map(|&c| reduce_signed(c, p)).collect(),
            None => fp_poly::default_irreducible(r, p),
        };
        if h.len() != r + 1 || h[r] != 1 {
            return bad(format!("h must be monic of degree {r}"));
        }
        if !fp_poly::is_irreducible(&h, p) {
            return bad("h is not irreducible modulo p".into());
        }

        let eisenstein = eisenstein.unwrap_or_else(|| {
            let mut v = vec![0i64; e + 1];
            v[0] = -(p as i64);
            v[e] = 1;
            v
        });
        if eisenstein.len() != e + 1 || eisenstein[e] != 1 {
            return bad(format!("E must be monic of degree {e}"));
        }
        let pi = p as i64;
        if eisenstein[..e].iter().any(|c| c % pi != 0) || (eisenstein[0] / pi) % pi == 0 {
            return bad("E is not Eisenstein".into());
        }

        let h_neg = h[..r].iter().map(|&c| (modulus - c % modulus) % modulus).collect();
        let e_neg = eisenstein[..e]
            .iter()
            .map(|&c| reduce_signed(-c, modulus))
            .collect();
        let mut cfg = RingConfig {
            p,
            r,
            e,
            n_prec,
            h,
            eisenstein,
            modulus,
            h_neg,
            e_neg,
            c0_inv: 0,
        };
        cfg.c0_inv = inv_mod(reduce_signed(cfg.eisenstein[0] / pi, modulus), modulus)
            .expect("E(0)/p is a unit for Eisenstein E");
        Ok(Arc::new(cfg))
    }

    /// Z_p itself at precision `n_prec`.
    pub fn unramified(p: u64, n_prec: u32) -> Result<Ring> {
        Self::new(p, 1, 1, None, None, n_prec)
    }

    pub fn from_spec(spec: &RingConfigSpec) -> Result<Ring> {
        Self::new(
            spec.p,
            spec.r,
            spec.e,
            spec.h.clone(),
            spec.eisenstein.clone(),
            spec.n_prec,
        )
    }

    pub fn to_spec(&self) -> RingConfigSpec {
        RingConfigSpec {
            p: self.p,
            r: self.r,
            e: self.e,
            h: Some(self.h.iter().map(|&c| c as i64).collect()),
            eisenstein: Some(self.eisenstein.clone()),
            n_prec: self.n_prec,
        }
    }

    pub fn from_json(s: &str) -> Result<Ring> {
        let spec: RingConfigSpec =
            serde_json::from_str(s).map_err(|e| Error::Malformed(e.to_string()))?;
        Self::from_spec(&spec)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(&self.to_spec()).expect("config serializes")
    }

    pub fn p(&self) -> u64 {
        self.p
    }

    pub fn r(&self) -> usize {
        self.r
    }

    pub fn e(&self) -> usize {
        self.e
    }

    pub fn n_prec(&self) -> u32 {
        self.n_prec
    }

    /// Residue field size q = p^r.
    pub fn q(&self) -> u64 {
        self.p.pow(self.r as u32)
    }

    pub fn modulus(&self) -> u64 {
        self.modulus
    }

    /// Valuation precision e * n_prec: every exact valuation is below this.
    pub fn full_precision(&self) -> i64 {
        (self.e as i64) * (self.n_prec as i64)
    }

    pub fn h(&self) -> &[u64] {
        &self.h
    }

    pub fn eisenstein(&self) -> &[i64] {
        &self.eisenstein
    }

    /// gcd(e, p² − p) = 1.
    pub fn coprimality_hypothesis(&self) -> bool {
        num_integer::gcd(self.e as u64, self.p * self.p - self.p) == 1
    }

    fn len(&self) -> usize {
        self.e * self.r
    }

    fn vp(&self, x: u64) -> u32 {
        if x == 0 {
            return self.n_prec;
        }
        let mut v = 0;
        let mut x = x;
        while x % self.p == 0 {
            x /= self.p;
            v += 1;
        }
        v
    }

    fn one_raw(&self) -> Vec<u64> {
        let mut v = vec![0u64; self.len()];
        v[0] = 1 % self.modulus;
        v
    }

    fn add_raw(&self, a: &[u64], b: &[u64]) -> Vec<u64> {
        a.iter().zip(b).map(|(&x, &y)| addmod(x, y, self.modulus)).collect()
    }

    fn mul_raw(&self, a: &[u64], b: &[u64]) -> Vec<u64> {
        let (e, r, m) = (self.e, self.r, self.modulus);
        if e == 1 && r == 1 {
            return vec![mulmod(a[0], b[0], m)];
        }
        let rw = 2 * r - 1;
        let slots = 2 * e - 1;
        let mut acc = vec![0u128; slots * rw];
        for i in 0..e {
            for j in 0..r {
                let x = a[i * r + j];
                if x == 0 {
                    continue;
                }
                for k in 0..e {
                    for l in 0..r {
                        let y = b[k * r + l];
                        if y != 0 {
                            acc[(i + k) * rw + j + l] += (x as u128 * y as u128) % m as u128;
                        }
                    }
                }
            }
        }
        let mut t: Vec<u64> = acc.iter().map(|&v| (v % m as u128) as u64).collect();
        if r > 1 {
            for s in 0..slots {
                let w = &mut t[s * rw..(s + 1) * rw];
                for d in (r..rw).rev() {
                    let c = w[d];
                    if c == 0 {
                        continue;
                    }
                    w[d] = 0;
                    for j in 0..r {
                        w[d - r + j] = addmod(w[d - r + j], mulmod(c, self.h_neg[j], m), m);
                    }
                }
            }
        }
        for s in (e..slots).rev() {
            for j in 0..r {
                let c = t[s * rw + j];
                if c == 0 {
                    continue;
                }
                t[s * rw + j] = 0;
                for i in 0..e {
                    let idx = (s - e + i) * rw + j;
                    t[idx] = addmod(t[idx], mulmod(c, self.e_neg[i], m), m);
                }
            }
        }
        let mut out = vec![0u64; e * r];
        for i in 0..e {
            out[i * r..(i + 1) * r].copy_from_slice(&t[i * rw..i * rw + r]);
        }
        out
    }

    fn pow_raw(&self, a: &[u64], mut exp: u64) -> Vec<u64> {
        let mut acc = self.one_raw();
        let mut base = a.to_vec();
        while exp > 0 {
            if exp & 1 == 1 {
                acc = self.mul_raw(&acc, &base);
            }
            exp >>= 1;
            if exp > 0 {
                base = self.mul_raw(&base, &base);
            }
        }
        acc
    }

    fn valuation_raw(&self, a: &[u64]) -> Option<u32> {
        let mut best: Option<u32> = None;
        for i in 0..self.e {
            let vi = a[i * self.r..(i + 1) * self.r]
                .iter()
                .filter(|&&c| c != 0)
                .map(|&c| self.vp(c))
                .min();
            if let Some(vi) = vi {
                let v = vi * self.e as u32 + i as u32;
                best = Some(best.map_or(v, |b: u32| b.min(v)));
            }
        }
        best
    }

    fn invert_raw(&self, a: &[u64]) -> Option<Vec<u64>> {
        if self.valuation_raw(a) != Some(0) {
            return None;
        }
        // a^(q-1) ≡ 1 mod π, so a^(q-2) is an inverse modulo π; lift by Newton.
        let mut y = self.pow_raw(a, self.q() - 2);
        let one = self.one_raw();
        let two = self.add_raw(&one, &one);
        for _ in 0..80 {
            let t = self.mul_raw(a, &y);
            if t == one {
                return Some(y);
            }
            let corr: Vec<u64> = two
                .iter()
                .zip(&t)
                .map(|(&x, &z)| addmod(x, self.modulus - z, self.modulus) % self.modulus)
                .collect();
            y = self.mul_raw(&y, &corr);
        }
        None
    }
}

/// Outcome of a valuation query.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum ValuationResult {
    Exact(u32),
    ZeroToPrecision,
}

impl ValuationResult {
    pub fn exact(self) -> Option<u32> {
        match self {
            ValuationResult::Exact(v) => Some(v),
            ValuationResult::ZeroToPrecision => None,
        }
    }
}

/// Element of the residue field F_q, as a polynomial in ζ of degree < r
/// with coefficients in 0..p.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct FqElem(pub Vec<u64>);

impl FqElem {
    pub fn is_zero(&self) -> bool {
        self.0.iter().all(|&c| c == 0)
    }
}

/// Element of O_K modulo p^n_prec in canonical reduced form.
#[derive(Clone)]
pub struct OKScalar {
    ring: Ring,
    c: Vec<u64>,
}

pub(crate) fn same_ring(a: &Ring, b: &Ring) -> bool {
    Arc::ptr_eq(a, b) || **a == **b
}

impl OKScalar {
    pub fn zero(ring: &Ring) -> Self {
        OKScalar {
            ring: ring.clone(),
            c: vec![0; ring.len()],
        }
    }

    pub fn one(ring: &Ring) -> Self {
        OKScalar {
            ring: ring.clone(),
            c: ring.one_raw(),
        }
    }

    pub fn from_int(ring: &Ring, n: i64) -> Self {
        let mut c = vec![0; ring.len()];
        c[0] = reduce_signed(n, ring.modulus);
        OKScalar { ring: ring.clone(), c }
    }

    pub fn from_u64(ring: &Ring, n: u64) -> Self {
        let mut c = vec![0; ring.len()];
        c[0] = n % ring.modulus;
        OKScalar { ring: ring.clone(), c }
    }

    /// From the flat component array (`i * r + j` is the coefficient of
    /// `π^i ζ^j`); missing trailing entries are zero.
    pub fn from_components(ring: &Ring, comps: &[i64]) -> Result<Self> {
        if comps.len() > ring.len() {
            return Err(Error::Malformed(format!(
                "{} components given, ring has {}",
                comps.len(),
                ring.len()
            )));
        }
        let mut c = vec![0; ring.len()];
        for (slot, &x) in c.iter_mut().zip(comps) {
            *slot = reduce_signed(x, ring.modulus);
        }
        Ok(OKScalar { ring: ring.clone(), c })
    }

    /// The uniformizer π.
    pub fn pi(ring: &Ring) -> Self {
        if ring.e == 1 {
            // π is a root of X + c_0, i.e. π = -c_0.
            return OKScalar::from_int(ring, -ring.eisenstein[0]);
        }
        let mut c = vec![0; ring.len()];
        c[ring.r] = 1;
        OKScalar { ring: ring.clone(), c }
    }

    /// The generator ζ of the unramified subring (equal to 0 when r = 1,
    /// where the default h is X).
    pub fn zeta(ring: &Ring) -> Self {
        let mut c = vec![0; ring.len()];
        if ring.r > 1 {
            c[1] = 1;
        } else {
            c[0] = reduce_signed(-(ring.h[0] as i64), ring.modulus);
        }
        OKScalar { ring: ring.clone(), c }
    }

    pub fn ring(&self) -> &Ring {
        &self.ring
    }

    pub fn components(&self) -> &[u64] {
        &self.c
    }

    /// Components as signed integers in the symmetric range around zero.
    pub fn signed_components(&self) -> Vec<i64> {
        let m = self.ring.modulus;
        self.c
            .iter()
            .map(|&x| if x > m / 2 { x as i64 - m as i64 } else { x as i64 })
            .collect()
    }

    fn check(&self, other: &Self) -> Result<()> {
        if same_ring(&self.ring, &other.ring) {
            Ok(())
        } else {
            Err(Error::ConfigMismatch)
        }
    }

    pub fn checked_add(&self, other: &Self) -> Result<Self> {
        self.check(other)?;
        Ok(OKScalar {
            ring: self.ring.clone(),
            c: self.ring.add_raw(&self.c, &other.c),
        })
    }

    pub fn checked_sub(&self, other: &Self) -> Result<Self> {
        self.check(other)?;
        Ok(self + &(-other))
    }

    pub fn checked_mul(&self, other: &Self) -> Result<Self> {
        self.check(other)?;
        Ok(OKScalar {
            ring: self.ring.clone(),
            c: self.ring.mul_raw(&self.c, &other.c),
        })
    }

    pub fn pow(&self, exp: u64) -> Self {
        OKScalar {
            ring: self.ring.clone(),
            c: self.ring.pow_raw(&self.c, exp),
        }
    }

    pub fn is_zero(&self) -> bool {
        self.c.iter().all(|&x| x == 0)
    }

    pub fn is_one(&self) -> bool {
        self.c == self.ring.one_raw()
    }

    pub fn valuation(&self) -> ValuationResult {
        match self.ring.valuation_raw(&self.c) {
            Some(v) => ValuationResult::Exact(v),
            None => ValuationResult::ZeroToPrecision,
        }
    }

    pub fn is_unit(&self) -> bool {
        self.valuation() == ValuationResult::Exact(0)
    }

    pub fn invert(&self) -> Result<Self> {
        self.ring
            .invert_raw(&self.c)
            .map(|c| OKScalar {
                ring: self.ring.clone(),
                c,
            })
            .ok_or(Error::NotAUnit)
    }

    /// Reduction modulo π.
    pub fn residue(&self) -> FqElem {
        let p = self.ring.p;
        FqElem(self.c[..self.ring.r].iter().map(|&x| x % p).collect())
    }

    /// True iff the element is the image of an integer modulo p^n_prec.
    pub fn embeds_in_zp(&self) -> bool {
        self.c[1..].iter().all(|&x| x == 0)
    }

    /// The Z/(p^n) value when [`Self::embeds_in_zp`] holds.
    pub fn as_zp(&self) -> Option<u64> {
        self.embeds_in_zp().then_some(self.c[0])
    }

    /// Divides by π, assuming the valuation is at least 1. The result is a
    /// representative determined modulo π^(e·n − 1); the unknown top digit
    /// is set to zero.
    pub fn div_pi(&self) -> Option<Self> {
        match self.valuation() {
            ValuationResult::Exact(0) => return None,
            ValuationResult::ZeroToPrecision => return Some(self.clone()),
            _ => {}
        }
        // 1/π = -(π^(e-1) + c_(e-1) π^(e-2) + … + c_1) / c_0
        let ring = &self.ring;
        let (e, r, m) = (ring.e, ring.r, ring.modulus);
        let t: Vec<u64> = self.c[..r]
            .iter()
            .map(|&a| {
                debug_assert_eq!(a % ring.p, 0);
                mulmod(a / ring.p, ring.c0_inv, m)
            })
            .collect();
        let mut z = vec![0u64; e * r];
        z[..(e - 1) * r].copy_from_slice(&self.c[r..]);
        for k in 0..e {
            let c = reduce_signed(ring.eisenstein[k + 1], m);
            for j in 0..r {
                let d = mulmod(t[j], c, m);
                z[k * r + j] = (z[k * r + j] + m - d) % m;
            }
        }
        Some(OKScalar { ring: ring.clone(), c: z })
    }

    /// Divides by π^k; requires valuation ≥ k.
    pub fn div_pi_pow(&self, k: u32) -> Option<Self> {
        let mut x = self.clone();
        for _ in 0..k {
            x = x.div_pi()?;
        }
        Some(x)
    }

    /// Multiplies by π^k.
    pub fn mul_pi_pow(&self, k: u32) -> Self {
        if k == 0 {
            return self.clone();
        }
        self * &OKScalar::pi(&self.ring).pow(k as u64)
    }
}

impl PartialEq for OKScalar {
    fn eq(&self, other: &Self) -> bool {
        same_ring(&self.ring, &other.ring) && self.c == other.c
    }
}

impl Eq for OKScalar {}

impl fmt::Debug for OKScalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "OKScalar({self})")
    }
}

impl fmt::Display for OKScalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let comps = self.signed_components();
        if comps.len() == 1 {
            return write!(f, "{}", comps[0]);
        }
        let r = self.ring.r;
        let mut terms = Vec::new();
        for (i, w) in comps.chunks(r).enumerate() {
            if w.iter().all(|&x| x == 0) {
                continue;
            }
            let w = if r == 1 {
                w[0].to_string()
            } else {
                format!("{w:?}")
            };
            terms.push(match i {
                0 => w,
                1 => format!("{w}·π"),
                _ => format!("{w}·π^{i}"),
            });
        }
        if terms.is_empty() {
            write!(f, "0")
        } else {
            write!(f, "{}", terms.join(" + "))
        }
    }
}

impl Add for &OKScalar {
    type Output = OKScalar;
    fn add(self, rhs: &OKScalar) -> OKScalar {
        self.checked_add(rhs).expect("ring configuration mismatch")
    }
}

impl Mul for &OKScalar {
    type Output = OKScalar;
    fn mul(self, rhs: &OKScalar) -> OKScalar {
        self.checked_mul(rhs).expect("ring configuration mismatch")
    }
}

impl Neg for &OKScalar {
    type Output = OKScalar;
    fn neg(self) -> OKScalar {
        let m = self.ring.modulus;
        OKScalar {
            ring: self.ring.clone(),
            c: self.c.iter().map(|&x| (m - x) % m).collect(),
        }
    }
}

impl Sub for &OKScalar {
    type Output = OKScalar;
    fn sub(self, rhs: &OKScalar) -> OKScalar {
        self + &(-rhs)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ramified() -> Ring {
        RingConfig::new(5, 1, 3, None, Some(vec![-5, 0, 0, 1]), 20).unwrap()
    }

    #[test]
    fn add_identities() {
        let k = ramified();
        let pi = OKScalar::pi(&k);
        let x = OKScalar::from_components(&k, &[3, -1, 7]).unwrap();
        assert_eq!(&x + &OKScalar::zero(&k), x);
        assert_eq!(&pi + &pi, &OKScalar::from_int(&k, 2) * &pi);
        assert_eq!(pi.pow(3), OKScalar::from_int(&k, 5));
    }

    #[test]
    fn mul_identities() {
        let k = ramified();
        let x = OKScalar::from_components(&k, &[3, -1, 7]).unwrap();
        assert_eq!(&x * &OKScalar::one(&k), x);
        let z5 = RingConfig::unramified(5, 20).unwrap();
        let a = OKScalar::from_int(&z5, 6);
        let b = OKScalar::from_int(&z5, -4);
        assert_eq!(&a * &b, OKScalar::from_int(&z5, 1 - 25));
    }

    #[test]
    fn valuations() {
        let k = ramified();
        assert_eq!(OKScalar::from_int(&k, 5).valuation(), ValuationResult::Exact(3));
        assert_eq!(OKScalar::pi(&k).valuation(), ValuationResult::Exact(1));
        assert_eq!(OKScalar::zero(&k).valuation(), ValuationResult::ZeroToPrecision);
        assert_eq!(
            OKScalar::from_int(&k, 25).mul_pi_pow(2).valuation(),
            ValuationResult::Exact(8)
        );
    }

    #[test]
    fn inversion() {
        let z5 = RingConfig::unramified(5, 3).unwrap();
        assert_eq!(
            OKScalar::from_int(&z5, 2).invert().unwrap(),
            OKScalar::from_int(&z5, 63)
        );
        let one = OKScalar::one(&z5);
        assert_eq!(one.invert().unwrap(), one);
        assert_eq!(OKScalar::from_int(&z5, 5).invert(), Err(Error::NotAUnit));
        let k = ramified();
        let x = OKScalar::from_components(&k, &[6, 1, 0]).unwrap();
        assert!((&x * &x.invert().unwrap()).is_one());
    }

    #[test]
    fn residues() {
        let k = ramified();
        let pi = OKScalar::pi(&k);
        assert!(pi.residue().is_zero());
        assert_eq!((&OKScalar::one(&k) + &pi).residue(), FqElem(vec![1]));
        assert!(OKScalar::from_int(&k, 5).residue().is_zero());
    }

    #[test]
    fn coprimality() {
        let cfg = |p, e| RingConfig::new(p, 1, e, None, None, 4).unwrap();
        assert!(cfg(5, 3).coprimality_hypothesis());
        assert!(!cfg(3, 2).coprimality_hypothesis());
        assert!(cfg(2, 1).coprimality_hypothesis());
    }

    #[test]
    fn zp_embedding() {
        let k = ramified();
        assert!(OKScalar::from_int(&k, 6).embeds_in_zp());
        assert!(!OKScalar::pi(&k).embeds_in_zp());
        assert!(OKScalar::from_int(&k, 5).embeds_in_zp());
    }

    #[test]
    fn pi_power_over_p_is_unit() {
        let k = RingConfig::new(3, 1, 2, None, Some(vec![6, 3, 1]), 10).unwrap();
        let pi = OKScalar::pi(&k);
        let pe = pi.pow(2);
        assert_eq!(pe.valuation(), ValuationResult::Exact(2));
        assert!(pe.div_pi_pow(2).unwrap().is_unit());
    }

    #[test]
    fn unramified_extension() {
        let k = RingConfig::new(3, 2, 1, None, None, 6).unwrap();
        let z = OKScalar::zeta(&k);
        // default h for p = 3, r = 2 is X^2 + 1
        assert_eq!(&(&z * &z) + &OKScalar::one(&k), OKScalar::zero(&k));
        let x = &z + &OKScalar::from_int(&k, 3);
        assert!((&x * &x.invert().unwrap()).is_one());
        assert!(!x.embeds_in_zp());
    }

    #[test]
    fn rejects_bad_configs() {
        assert!(RingConfig::new(4, 1, 1, None, None, 3).is_err());
        assert!(RingConfig::new(5, 1, 2, None, Some(vec![-25, 0, 1]), 3).is_err());
        assert!(RingConfig::new(5, 2, 1, Some(vec![1, 0, 1]), None, 3).is_err());
        assert!(RingConfig::new(5, 1, 1, None, None, 40).is_err());
    }

    #[test]
    fn config_mismatch() {
        let a = OKScalar::one(&RingConfig::unramified(5, 4).unwrap());
        let b = OKScalar::one(&RingConfig::unramified(3, 4).unwrap());
        assert_eq!(a.checked_add(&b), Err(Error::ConfigMismatch));
    }

    #[test]
    fn json_round_trip() {
        let k = ramified();
        let back = RingConfig::from_json(&k.to_json()).unwrap();
        assert_eq!(*back, *k);
        let parsed =
            RingConfig::from_json(r#"{"p":5,"r":1,"e":3,"h":[0,1],"E":[-5,0,0,1],"n_prec":20}"#)
                .unwrap();
        assert_eq!(*parsed, *k);
    }
}
