//! Newton polygons of truncated series and the polygon theorems for iterates.

use std::fmt::Write as _;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Signed, Zero};
use serde::ser::SerializeStruct;
use serde::{Serialize, Serializer};

use crate::error::{Error, Result};
use crate::series::TruncSeries1;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct Vertex {
    pub index: usize,
    pub val: i64,
    /// False when a coefficient known only up to precision could push the
    /// hull below this vertex.
    pub certified: bool,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NewtonPolygon {
    pub vertices: Vec<Vertex>,
    /// Slopes between consecutive vertices.
    pub slopes: Vec<BigRational>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Segment {
    pub start: (usize, i64),
    pub end: (usize, i64),
    pub slope: BigRational,
    /// Number of roots of valuation `-slope`, with multiplicity.
    pub width: usize,
}

fn slope(a: (usize, i64), b: (usize, i64)) -> BigRational {
    BigRational::new(BigInt::from(b.1 - a.1), BigInt::from(b.0 as i64 - a.0 as i64))
}

/// Strict lower convex hull of points sorted by index.
fn lower_hull(points: &[(usize, i64)]) -> Vec<(usize, i64)> {
    let mut h: Vec<(usize, i64)> = Vec::new();
    for &p in points {
        while h.len() >= 2 {
            let (o, a) = (h[h.len() - 2], h[h.len() - 1]);
            let cross = (a.0 as i128 - o.0 as i128) * (p.1 as i128 - o.1 as i128)
                - (a.1 as i128 - o.1 as i128) * (p.0 as i128 - o.0 as i128);
            if cross <= 0 {
                h.pop();
            } else {
                break;
            }
        }
        h.push(p);
    }
    h
}

impl NewtonPolygon {
    fn from_vertices(vertices: Vec<Vertex>) -> Self {
        let slopes = vertices
            .windows(2)
            .map(|w| slope((w[0].index, w[0].val), (w[1].index, w[1].val)))
            .collect();
        NewtonPolygon { vertices, slopes }
    }

    pub fn points(&self) -> Vec<(usize, i64)> {
        self.vertices.iter().map(|v| (v.index, v.val)).collect()
    }

    pub fn is_certified(&self) -> bool {
        self.vertices.iter().all(|v| v.certified)
    }

    pub fn segments(&self) -> Vec<Segment> {
        self.vertices
            .windows(2)
            .zip(&self.slopes)
            .map(|(w, s)| Segment {
                start: (w[0].index, w[0].val),
                end: (w[1].index, w[1].val),
                slope: s.clone(),
                width: w[1].index - w[0].index,
            })
            .collect()
    }

    /// Total width of all segments.
    pub fn width(&self) -> usize {
        match (self.vertices.first(), self.vertices.last()) {
            (Some(a), Some(b)) => b.index - a.index,
            _ => 0,
        }
    }

    pub fn to_json(&self) -> serde_json::Value {
        serde_json::to_value(self).expect("serializable")
    }

    /// Character plot of the hull; vertices are `o`, edges `.`, and the
    /// vertex list follows below.
    pub fn render_ascii(&self) -> String {
        let mut out = String::new();
        let (Some(first), Some(last)) = (self.vertices.first(), self.vertices.last()) else {
            return "(empty polygon)\n".into();
        };
        let max_v = self.vertices.iter().map(|v| v.val).max().unwrap_or(0).max(1);
        let span = (last.index - first.index).max(1);
        let cols = span.min(64);
        let rows = (max_v as usize).min(20);
        let mut grid = vec![vec![' '; cols + 1]; rows + 1];
        let to_col = |i: usize| (i - first.index) * cols / span;
        let to_row = |v: f64| (v * rows as f64 / max_v as f64).round() as usize;
        for w in self.vertices.windows(2) {
            let (c0, c1) = (to_col(w[0].index), to_col(w[1].index));
            for c in c0..=c1 {
                let t = if c1 == c0 { 0.0 } else { (c - c0) as f64 / (c1 - c0) as f64 };
                let v = w[0].val as f64 + t * (w[1].val - w[0].val) as f64;
                grid[to_row(v).min(rows)][c] = '.';
            }
        }
        for v in &self.vertices {
            grid[to_row(v.val as f64).min(rows)][to_col(v.index)] = if v.certified { 'o' } else { '?' };
        }
        for (r, line) in grid.iter().enumerate().rev() {
            let label = (r as f64 * max_v as f64 / rows as f64).round() as i64;
            let body: String = line.iter().collect();
            let _ = writeln!(out, "{label:>4} |{}", body.trim_end());
        }
        let _ = writeln!(out, "     +{}", "-".repeat(cols + 1));
        let _ = writeln!(out, "      {:<w$}{}", first.index, last.index, w = cols.saturating_sub(1).max(1));
        let labels: Vec<String> = self.vertices.iter().map(|v| format!("({},{})", v.index, v.val)).collect();
        let _ = writeln!(out, "vertices: {}", labels.join(" "));
        let slopes: Vec<String> = self.slopes.iter().map(|s| s.to_string()).collect();
        let _ = writeln!(out, "slopes:   {}", slopes.join(" "));
        out
    }

    /// Standalone SVG drawing of the hull with labeled vertices.
    pub fn render_svg(&self) -> String {
        let (w, h, pad) = (480.0, 320.0, 40.0);
        let max_i = self.vertices.iter().map(|v| v.index).max().unwrap_or(1).max(1) as f64;
        let min_i = self.vertices.iter().map(|v| v.index).min().unwrap_or(0) as f64;
        let max_v = self.vertices.iter().map(|v| v.val).max().unwrap_or(1).max(1) as f64;
        let sx = |i: usize| pad + (i as f64 - min_i) / (max_i - min_i).max(1.0) * (w - 2.0 * pad);
        let sy = |v: i64| h - pad - v as f64 / max_v * (h - 2.0 * pad);
        let mut s = String::new();
        let _ = writeln!(
            s,
            r#"<svg xmlns="http://www.w3.org/2000/svg" width="{w}" height="{h}" viewBox="0 0 {w} {h}">"#
        );
        let _ = writeln!(
            s,
            r#"<line x1="{pad}" y1="{y}" x2="{x2}" y2="{y}" stroke="gray"/>"#,
            y = h - pad,
            x2 = w - pad
        );
        let _ = writeln!(s, r#"<line x1="{pad}" y1="{pad}" x2="{pad}" y2="{y}" stroke="gray"/>"#, y = h - pad);
        let pts: Vec<String> = self
            .vertices
            .iter()
            .map(|v| format!("{:.1},{:.1}", sx(v.index), sy(v.val)))
            .collect();
        let _ = writeln!(
            s,
            r#"<polyline points="{}" fill="none" stroke="black" stroke-width="2"/>"#,
            pts.join(" ")
        );
        for v in &self.vertices {
            let (x, y) = (sx(v.index), sy(v.val));
            let fill = if v.certified { "black" } else { "red" };
            let _ = writeln!(s, r#"<circle cx="{x:.1}" cy="{y:.1}" r="4" fill="{fill}"/>"#);
            let _ = writeln!(
                s,
                r#"<text x="{:.1}" y="{:.1}" font-size="12">({},{})</text>"#,
                x + 6.0,
                y - 6.0,
                v.index,
                v.val
            );
        }
        s.push_str("</svg>\n");
        s
    }
}

impl Serialize for NewtonPolygon {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        let mut st = serializer.serialize_struct("NewtonPolygon", 2)?;
        st.serialize_field("vertices", &self.vertices)?;
        let slopes: Vec<String> = self.slopes.iter().map(|s| s.to_string()).collect();
        st.serialize_field("slopes", &slopes)?;
        st.end()
    }
}

/// Lower convex hull of `(i, υ_K(a_i))` for the coefficients known to be
/// nonzero, up to the first coefficient of valuation 0.
pub fn newton_polygon(s: &TruncSeries1) -> Result<NewtonPolygon> {
    if let Some(i) = (1..=s.degree()).find(|&i| !s.coeff(i).is_integral()) {
        return Err(Error::NonIntegralSeries(i));
    }
    let mut known = Vec::new();
    let mut bounded = Vec::new();
    for i in 1..=s.degree() {
        let c = s.coeff(i);
        match c.valuation() {
            Some(v) => {
                known.push((i, v));
                if v == 0 {
                    break;
                }
            }
            None => bounded.push((i, c.prec().max(0))),
        }
    }
    let hull = lower_hull(&known);
    // worst case: every imprecise coefficient sits at its precision bound
    let mut all: Vec<(usize, i64)> = known.iter().chain(&bounded).copied().collect();
    all.sort_unstable();
    let worst = lower_hull(&all);
    let neighbours = |h: &[(usize, i64)], k: usize| (k.checked_sub(1).map(|j| h[j]), h.get(k + 1).copied());
    let vertices = hull
        .iter()
        .enumerate()
        .map(|(k, &(index, val))| Vertex {
            index,
            val,
            certified: worst
                .iter()
                .position(|&w| w == (index, val))
                .is_some_and(|kw| neighbours(&worst, kw) == neighbours(&hull, k)),
        })
        .collect();
    Ok(NewtonPolygon::from_vertices(vertices))
}

/// Vertices up to the end of the last segment of negative slope.
pub fn decreasing_part(np: &NewtonPolygon) -> NewtonPolygon {
    let keep = np.slopes.iter().take_while(|s| s.is_negative()).count();
    let vertices = np.vertices.iter().take(keep + 1).copied().collect();
    NewtonPolygon::from_vertices(vertices)
}

/// Outcome of comparing the polygon of `f^{∘n}` with `(p^i, e(n−i))`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct IterateReport {
    pub n: u32,
    pub matches: bool,
    pub expected: Vec<(usize, i64)>,
    pub found: Vec<(usize, i64)>,
}

fn check_weierstrass_p(f: &TruncSeries1) -> Result<()> {
    let ring = f.ring();
    let p = ring.p() as usize;
    match f.weierstrass_degree()? {
        Some(w) if w == p => {}
        other => {
            return Err(Error::PreconditionFailed(format!(
                "Weierstrass degree of f is {other:?}, expected {p}"
            )))
        }
    }
    if f.linear_coefficient().valuation() != Some(ring.e() as i64) {
        return Err(Error::PreconditionFailed(
            "f'(0) is not a uniformizer of K".into(),
        ));
    }
    Ok(())
}

fn certified_decreasing(s: &TruncSeries1) -> Result<NewtonPolygon> {
    let dp = decreasing_part(&newton_polygon(s)?);
    if !dp.is_certified() {
        return Err(Error::PrecisionExhausted(
            "Newton polygon vertices are not certified at this precision".into(),
        ));
    }
    Ok(dp)
}

/// Checks that the decreasing part of the polygon of `f^{∘n}` has vertices
/// `(p^i, e(n−i))` for `i = 0..=n`.
pub fn verify_iterate_polygon(f: &TruncSeries1, n: u32) -> Result<IterateReport> {
    check_weierstrass_p(f)?;
    let ring = f.ring();
    let p = ring.p() as usize;
    let need = p
        .checked_pow(n)
        .ok_or_else(|| Error::PreconditionFailed("p^n overflows".into()))?;
    if f.degree() < need {
        return Err(Error::TruncationTooShallow {
            need,
            have: f.degree(),
        });
    }
    let it = f.truncate(need).iterate(n as u64);
    let found = certified_decreasing(&it)?.points();
    let e = ring.e() as i64;
    let expected: Vec<(usize, i64)> = (0..=n)
        .map(|i| (p.pow(i), e * (n - i) as i64))
        .collect();
    Ok(IterateReport {
        n,
        matches: found == expected,
        expected,
        found,
    })
}

/// Number and common slope of the roots of `f^{∘n}/f^{∘(n−1)}`, read off the
/// last segment of the verified polygon of `f^{∘n}`.
pub fn new_root_data(f: &TruncSeries1, n: u32) -> Result<(u64, BigRational)> {
    if n == 0 {
        return Err(Error::PreconditionFailed("n must be at least 1".into()));
    }
    let report = verify_iterate_polygon(f, n)?;
    if !report.matches {
        return Err(Error::MismatchWithTheorem(format!(
            "polygon of f^{n} is {:?}, expected {:?}",
            report.found, report.expected
        )));
    }
    let a = report.found[report.found.len() - 2];
    let b = report.found[report.found.len() - 1];
    Ok(((b.0 - a.0) as u64, slope(a, b)))
}

/// Pure-slope criterion: the segment's slope in lowest terms has
/// denominator equal to its width. Sufficient for irreducibility only.
pub fn segment_irreducible_certificate(seg: &Segment) -> bool {
    // BigRational is kept reduced with a positive denominator
    !seg.slope.is_zero() && *seg.slope.denom() == BigInt::from(seg.width)
        || seg.slope.is_zero() && seg.width == 1
}

/// Whether the nonzero roots of `f` all have the same valuation, i.e. the
/// decreasing part of its polygon is the single segment `(1,e)→(p,0)`.
/// A Weierstrass degree other than `p` yields `false`.
pub fn simple_roots_criterion(f: &TruncSeries1) -> Result<bool> {
    if !f.ring().coprimality_hypothesis() {
        return Err(Error::PreconditionFailed("gcd(e, p²−p) ≠ 1".into()));
    }
    single_segment_of_width_p(f)
}

/// The polygon condition of [`simple_roots_criterion`] without the
/// coprimality precondition.
pub fn single_segment_of_width_p(f: &TruncSeries1) -> Result<bool> {
    let ring = f.ring();
    let p = ring.p() as usize;
    if f.weierstrass_degree()? != Some(p) {
        return Ok(false);
    }
    let dp = certified_decreasing(f)?;
    Ok(dp.points() == vec![(1, ring.e() as i64), (p, 0)])
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ring::{RingConfig, OKScalar};
    use crate::kscalar::KScalar;

    fn poly(p: u64, n: u32, c: &[i64], deg: usize) -> TruncSeries1 {
        let k = RingConfig::unramified(p, n).unwrap();
        TruncSeries1::from_int_poly(&k, c, deg).unwrap()
    }

    #[test]
    fn basic_polygons() {
        assert_eq!(newton_polygon(&poly(3, 10, &[0, 1], 5)).unwrap().points(), vec![(1, 0)]);
        let f = poly(3, 10, &[0, 3, 0, 1], 9);
        assert_eq!(newton_polygon(&f).unwrap().points(), vec![(1, 1), (3, 0)]);
        let f2 = f.iterate(2);
        let np = newton_polygon(&f2).unwrap();
        assert_eq!(np.points(), vec![(1, 2), (3, 1), (9, 0)]);
        assert!(np.is_certified());
        assert_eq!(np.slopes[0], BigRational::new((-1).into(), 2.into()));
        assert_eq!(decreasing_part(&np), np);
    }

    #[test]
    fn collinear_points_dropped() {
        // 4X + 2X^2 + X^3 over Z_2: (1,2),(2,1),(3,0) are collinear
        let np = newton_polygon(&poly(2, 10, &[0, 4, 2, 1], 4)).unwrap();
        assert_eq!(np.points(), vec![(1, 2), (3, 0)]);
    }

    #[test]
    fn imprecise_coefficient_uncertifies() {
        let k = RingConfig::unramified(3, 4).unwrap();
        let c = vec![
            KScalar::from_int(&k, 27),
            KScalar::zero_with_prec(&k, 1),
            KScalar::one(&k),
        ];
        let s = TruncSeries1::from_coeffs(&k, c).unwrap();
        let np = newton_polygon(&s).unwrap();
        assert_eq!(np.points(), vec![(1, 3), (3, 0)]);
        assert!(!np.is_certified());
    }

    #[test]
    fn non_integral_rejected() {
        let k = RingConfig::unramified(3, 4).unwrap();
        let s = TruncSeries1::from_coeffs(&k, vec![KScalar::one(&k), KScalar::from_ratio(&k, 1, 3).unwrap()]).unwrap();
        assert_eq!(newton_polygon(&s).unwrap_err(), Error::NonIntegralSeries(2));
    }

    #[test]
    fn iterates_and_root_data() {
        let f = poly(3, 20, &[0, 3, 0, 1], 27);
        let r = verify_iterate_polygon(&f, 3).unwrap();
        assert!(r.matches, "{r:?}");
        assert_eq!(new_root_data(&f, 2).unwrap(), (6, BigRational::new((-1).into(), 6.into())));
        assert_eq!(new_root_data(&f, 1).unwrap(), (2, BigRational::new((-1).into(), 2.into())));
        let bad = poly(5, 10, &[0, 5, 1], 25);
        assert!(matches!(verify_iterate_polygon(&bad, 1), Err(Error::PreconditionFailed(_))));
        assert!(matches!(
            verify_iterate_polygon(&f.truncate(8), 2),
            Err(Error::TruncationTooShallow { need: 9, have: 8 })
        ));
    }

    #[test]
    fn ramified_iterates() {
        let k = RingConfig::new(5, 1, 3, None, None, 8).unwrap();
        let pi = OKScalar::pi(&k);
        let five = &(&pi * &pi) * &pi;
        let mut c = vec![KScalar::zero(&k); 25];
        c[0] = KScalar::from_ok(five);
        c[4] = KScalar::one(&k);
        let f = TruncSeries1::from_coeffs(&k, c).unwrap();
        let r = verify_iterate_polygon(&f, 2).unwrap();
        assert_eq!(r.found, vec![(1, 6), (5, 3), (25, 0)]);
        assert!(r.matches);
        assert_eq!(new_root_data(&f, 1).unwrap(), (4, BigRational::new((-3).into(), 4.into())));
    }

    #[test]
    fn irreducibility_certificate() {
        let seg = |num: i64, den: i64, width| Segment {
            start: (0, 0),
            end: (width, 0),
            slope: BigRational::new(num.into(), den.into()),
            width,
        };
        assert!(segment_irreducible_certificate(&seg(-1, 2, 2)));
        assert!(segment_irreducible_certificate(&seg(-1, 6, 6)));
        assert!(!segment_irreducible_certificate(&seg(-1, 1, 2)));
        assert!(!segment_irreducible_certificate(&seg(-2, 4, 4)));
    }

    #[test]
    fn simple_roots() {
        assert!(simple_roots_criterion(&poly(3, 10, &[0, 3, 0, 1], 5)).unwrap());
        assert!(simple_roots_criterion(&poly(5, 10, &[0, 5, 5, 0, 0, 1], 5)).unwrap());
        assert!(!simple_roots_criterion(&poly(3, 10, &[0, 9, 0, 3, 0, 0, 0, 0, 0, 1], 9)).unwrap());
        // 3X + X^2 + X^3 over Z_3 has Weierstrass degree 2
        assert!(!simple_roots_criterion(&poly(3, 10, &[0, 3, 1, 1], 5)).unwrap());
    }

    #[test]
    fn rendering() {
        let np = newton_polygon(&poly(3, 10, &[0, 3, 0, 1], 9).iterate(2)).unwrap();
        let a = np.render_ascii();
        assert!(a.contains("vertices: (1,2) (3,1) (9,0)"));
        assert!(a.contains("slopes:   -1/2 -1/6"));
        let s = np.render_svg();
        assert!(s.starts_with("<svg") && s.contains("(9,0)"));
        let j = np.to_json();
        assert_eq!(j["slopes"][1], "-1/6");
        assert_eq!(j["vertices"][2]["index"], 9);
    }
}
