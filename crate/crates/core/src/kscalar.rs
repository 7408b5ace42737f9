//! Elements of K = Frac(O_K) with absolute precision tracking.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use crate::error::{Error, Result};
use crate::ring::{OKScalar, Ring, ValuationResult};

/// `unit · π^(-shift)`, known modulo `π^prec`.
///
/// Normal form: when `shift > 0` the unit part is a unit of O_K. A value
/// whose valuation reaches `prec` is zero to precision but keeps its
/// computed representative.
#[derive(Clone)]
pub struct KScalar {
    unit: OKScalar,
    shift: u32,
    prec: i64,
}

fn val_of(x: &OKScalar) -> Option<u32> {
    x.valuation().exact()
}

impl KScalar {
    /// Normalizes `unit · π^(-shift)` known to absolute precision `prec`.
    /// The representative is kept even when its valuation reaches `prec`.
    pub fn new(unit: OKScalar, shift: u32, prec: i64) -> Self {
        let ring = unit.ring().clone();
        let prec = prec.min(ring.full_precision() - shift as i64);
        let v = match val_of(&unit) {
            None => return KScalar::zero_with_prec(&ring, prec),
            Some(v) => v,
        };
        let k = v.min(shift);
        let unit = unit.div_pi_pow(k).expect("valuation checked");
        KScalar {
            unit,
            shift: shift - k,
            prec,
        }
    }

    pub fn from_ok(x: OKScalar) -> Self {
        let prec = x.ring().full_precision();
        KScalar::new(x, 0, prec)
    }

    pub fn from_int(ring: &Ring, n: i64) -> Self {
        KScalar::from_ok(OKScalar::from_int(ring, n))
    }

    /// `num / den` for integers; fails when `den` vanishes to precision.
    pub fn from_ratio(ring: &Ring, num: i64, den: i64) -> Result<Self> {
        KScalar::from_int(ring, num).checked_div(&KScalar::from_int(ring, den))
    }

    pub fn zero(ring: &Ring) -> Self {
        KScalar::zero_with_prec(ring, ring.full_precision())
    }

    pub fn zero_with_prec(ring: &Ring, prec: i64) -> Self {
        KScalar {
            unit: OKScalar::zero(ring),
            shift: 0,
            prec: prec.min(ring.full_precision()),
        }
    }

    pub fn one(ring: &Ring) -> Self {
        KScalar::from_int(ring, 1)
    }

    /// π^(-k).
    pub fn pi_inv_pow(ring: &Ring, k: u32) -> Self {
        KScalar::new(OKScalar::one(ring), k, ring.full_precision())
    }

    pub fn ring(&self) -> &Ring {
        self.unit.ring()
    }

    pub fn unit_part(&self) -> &OKScalar {
        &self.unit
    }

    pub fn shift(&self) -> u32 {
        self.shift
    }

    /// Absolute precision in valuation units.
    pub fn prec(&self) -> i64 {
        self.prec
    }

    pub fn with_prec(&self, prec: i64) -> Self {
        KScalar::new(self.unit.clone(), self.shift, prec.min(self.prec))
    }

    /// `self + x·y`, skipping the multiplication when a representative is 0.
    pub fn add_mul(&self, x: &KScalar, y: &KScalar) -> KScalar {
        if x.unit.is_zero() || y.unit.is_zero() {
            let bound = (x.valuation_lower_bound() + y.prec).min(y.valuation_lower_bound() + x.prec);
            if bound < self.prec {
                return self.with_prec(bound);
            }
            return self.clone();
        }
        self + &(x * y)
    }

    /// Zero to precision.
    pub fn is_zero(&self) -> bool {
        match self.rep_valuation() {
            None => true,
            Some(v) => v >= self.prec,
        }
    }

    /// Valuation of the stored representative.
    pub fn rep_valuation(&self) -> Option<i64> {
        val_of(&self.unit).map(|v| v as i64 - self.shift as i64)
    }

    /// Same representative with absolute precision replaced by `prec`
    /// (capped by what the representation can hold).
    pub fn with_certified_prec(&self, prec: i64) -> Self {
        KScalar::new(self.unit.clone(), self.shift, prec)
    }

    pub fn is_integral(&self) -> bool {
        self.shift == 0
    }

    /// Exact valuation, or `None` for zero to precision.
    pub fn valuation(&self) -> Option<i64> {
        if self.is_zero() {
            None
        } else {
            self.rep_valuation()
        }
    }

    /// A lower bound for the valuation of the true value.
    pub fn valuation_lower_bound(&self) -> i64 {
        self.rep_valuation().map_or(self.prec, |v| v.min(self.prec))
    }

    /// True iff the element is a unit of O_K (integral with valuation 0).
    pub fn is_unit(&self) -> bool {
        self.valuation() == Some(0)
    }

    /// The element as an O_K element when integral.
    pub fn to_ok(&self) -> Option<OKScalar> {
        self.is_integral().then(|| self.unit.clone())
    }

    /// True iff `self - other` vanishes to the joint precision.
    pub fn eq_to_prec(&self, other: &Self) -> bool {
        (self - other).is_zero()
    }

    pub fn checked_add(&self, other: &Self) -> Result<Self> {
        if !crate::ring::same_ring(self.ring(), other.ring()) {
            return Err(Error::ConfigMismatch);
        }
        let s = self.shift.max(other.shift);
        let a = self.unit.mul_pi_pow(s - self.shift);
        let b = other.unit.mul_pi_pow(s - other.shift);
        Ok(KScalar::new(&a + &b, s, self.prec.min(other.prec)))
    }

    pub fn checked_mul(&self, other: &Self) -> Result<Self> {
        let unit = self.unit.checked_mul(&other.unit)?;
        let prec = (self.valuation_lower_bound() + other.prec)
            .min(other.valuation_lower_bound() + self.prec);
        if self.unit.is_zero() || other.unit.is_zero() {
            return Ok(KScalar::zero_with_prec(self.ring(), prec));
        }
        Ok(KScalar::new(unit, self.shift + other.shift, prec))
    }

    /// Division; the divisor must be nonzero to precision.
    pub fn checked_div(&self, d: &Self) -> Result<Self> {
        if !crate::ring::same_ring(self.ring(), d.ring()) {
            return Err(Error::ConfigMismatch);
        }
        let w = match d.unit.valuation() {
            ValuationResult::Exact(w) if !d.is_zero() => w,
            _ => {
                return Err(Error::PrecisionExhausted(
                    "division by an element that is zero to precision".into(),
                ))
            }
        };
        let vd = w as i64 - d.shift as i64;
        let inv = d.unit.div_pi_pow(w).expect("valuation checked").invert()?;
        let prec = (self.prec - vd).min(self.valuation_lower_bound() + d.prec - 2 * vd);
        let en = self.ring().full_precision();
        let t = d.shift as i64 - self.shift as i64 - w as i64;
        let unit = &self.unit * &inv;
        let (unit, shift) = if t >= 0 {
            (unit.mul_pi_pow(t as u32), 0u32)
        } else {
            (unit, (-t) as u32)
        };
        Ok(KScalar::new(unit, shift, prec.min(en - shift as i64)))
    }

    pub fn pow(&self, exp: u32) -> Self {
        let mut acc = KScalar::one(self.ring());
        for _ in 0..exp {
            acc = &acc * self;
        }
        acc
    }

    pub fn scale(&self, n: i64) -> Self {
        self * &KScalar::from_int(self.ring(), n)
    }
}

impl PartialEq for KScalar {
    /// Representation equality (after normalization), ignoring precision.
    fn eq(&self, other: &Self) -> bool {
        self.shift == other.shift && self.unit == other.unit
    }
}

impl fmt::Debug for KScalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "KScalar({self} + O(π^{}))", self.prec)
    }
}

impl fmt::Display for KScalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.shift == 0 {
            write!(f, "{}", self.unit)
        } else {
            write!(f, "({})/π^{}", self.unit, self.shift)
        }
    }
}

impl Add for &KScalar {
    type Output = KScalar;
    fn add(self, rhs: &KScalar) -> KScalar {
        self.checked_add(rhs).expect("ring configuration mismatch")
    }
}

impl Sub for &KScalar {
    type Output = KScalar;
    fn sub(self, rhs: &KScalar) -> KScalar {
        self + &(-rhs)
    }
}

impl Mul for &KScalar {
    type Output = KScalar;
    fn mul(self, rhs: &KScalar) -> KScalar {
        self.checked_mul(rhs).expect("ring configuration mismatch")
    }
}

impl Neg for &KScalar {
    type Output = KScalar;
    fn neg(self) -> KScalar {
        KScalar {
            unit: -&self.unit,
            shift: self.shift,
            prec: self.prec,
        }
    }
}
