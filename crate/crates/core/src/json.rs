//! JSON forms of series, pairs, polygons and verdicts.
//!
//! A coefficient is `{"i": k, "shift": s, "val": [...], "prec": P}` meaning
//! `val · π^(-s)` known to absolute precision `P` (υ_K units); `val` lists the
//! components of the O_K element (`i*r + j` ↦ coefficient of `π^i ζ^j`).
//! `shift` defaults to 0 and `prec` to the full storage precision. Two
//! variable series use `"ij": [i, j]` in place of `"i"`.

use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use crate::dynamics::{ConjectureVerdict, DynPair};
use crate::error::{Error, Result};
use crate::kscalar::KScalar;
use crate::ring::{OKScalar, Ring, RingConfig, RingConfigSpec};
use crate::series::TruncSeries1;
use crate::series2::TruncSeries2;

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CoeffJson {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub i: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub ij: Option<[usize; 2]>,
    #[serde(default)]
    pub shift: u32,
    pub val: Vec<i64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub prec: Option<i64>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SeriesJson {
    #[serde(rename = "N")]
    pub n: usize,
    pub coeffs: Vec<CoeffJson>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PairJson {
    pub config: RingConfigSpec,
    pub f: SeriesJson,
    pub u: SeriesJson,
}

fn malformed(e: impl std::fmt::Display) -> Error {
    Error::Malformed(e.to_string())
}

fn coeff_json(c: &KScalar) -> Option<(Vec<i64>, u32, Option<i64>)> {
    let full = c.ring().full_precision() - c.shift() as i64;
    if c.unit_part().is_zero() && c.prec() >= full {
        return None;
    }
    let prec = (c.prec() < full).then_some(c.prec());
    Some((c.unit_part().signed_components(), c.shift(), prec))
}

fn scalar(ring: &Ring, c: &CoeffJson) -> Result<KScalar> {
    let unit = OKScalar::from_components(ring, &c.val)?;
    if c.shift as i64 > ring.full_precision() {
        return Err(Error::Malformed(format!("shift {} exceeds the precision", c.shift)));
    }
    Ok(KScalar::new(unit, c.shift, c.prec.unwrap_or(i64::MAX)))
}

pub fn series1_to_json(s: &TruncSeries1) -> SeriesJson {
    let coeffs = (1..=s.degree())
        .filter_map(|i| {
            coeff_json(s.coeff(i)).map(|(val, shift, prec)| CoeffJson {
                i: Some(i),
                ij: None,
                shift,
                val,
                prec,
            })
        })
        .collect();
    SeriesJson { n: s.degree(), coeffs }
}

pub fn series1_from_json(ring: &Ring, s: &SeriesJson) -> Result<TruncSeries1> {
    let mut out = TruncSeries1::zero(ring, s.n);
    for c in &s.coeffs {
        let i = match (c.i, c.ij) {
            (Some(i), None) if (1..=s.n).contains(&i) => i,
            _ => return Err(Error::Malformed(format!("bad one-variable coefficient {c:?}"))),
        };
        out.set_coeff(i, scalar(ring, c)?);
    }
    Ok(out)
}

pub fn series2_to_json(s: &TruncSeries2) -> SeriesJson {
    let coeffs = s
        .terms()
        .filter_map(|((i, j), c)| {
            coeff_json(c).map(|(val, shift, prec)| CoeffJson {
                i: None,
                ij: Some([i, j]),
                shift,
                val,
                prec,
            })
        })
        .collect();
    SeriesJson { n: s.degree(), coeffs }
}

pub fn series2_from_json(ring: &Ring, s: &SeriesJson) -> Result<TruncSeries2> {
    let mut out = TruncSeries2::zero(ring, s.n);
    for c in &s.coeffs {
        match (c.i, c.ij) {
            (None, Some([i, j])) if i + j >= 1 && i + j <= s.n => out.set_coeff(i, j, scalar(ring, c)?),
            _ => return Err(Error::Malformed(format!("bad two-variable coefficient {c:?}"))),
        }
    }
    Ok(out)
}

pub fn pair_to_json(pair: &DynPair) -> PairJson {
    PairJson {
        config: pair.ring().to_spec(),
        f: series1_to_json(pair.f()),
        u: series1_to_json(pair.u()),
    }
}

pub fn pair_from_json(p: &PairJson) -> Result<DynPair> {
    let ring = RingConfig::from_spec(&p.config)?;
    DynPair::new(series1_from_json(&ring, &p.f)?, series1_from_json(&ring, &p.u)?)
}

pub fn pair_from_str(s: &str) -> Result<DynPair> {
    pair_from_json(&serde_json::from_str(s).map_err(malformed)?)
}

pub fn series_from_value(v: &Value) -> Result<SeriesJson> {
    serde_json::from_value(v.clone()).map_err(malformed)
}

pub fn verdict_to_json(v: &ConjectureVerdict) -> Value {
    json!({
        "integral": v.integral,
        "integral_certified": v.integral_certified,
        "offending": v.offending.map(|(i, j, s)| json!({"ij": [i, j], "shift": s})),
        "endo_f": v.endo_f,
        "endo_f_precision": v.endo_f_precision,
        "endo_u": v.endo_u,
        "endo_u_precision": v.endo_u_precision,
        "certified_degree": v.certified_degree,
        "certified_precision": v.certified_precision,
        "F": series2_to_json(&v.formal_group),
    })
}
