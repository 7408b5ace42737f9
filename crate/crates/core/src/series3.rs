//! Minimal three-variable truncated series, used only to test associativity
//! of two-variable laws.

use std::collections::BTreeMap;

use crate::kscalar::KScalar;
use crate::ring::Ring;
use crate::series2::TruncSeries2;

type Exp = [usize; 3];

#[derive(Clone)]
pub(crate) struct Series3 {
    ring: Ring,
    n: usize,
    terms: BTreeMap<Exp, KScalar>,
    // lowest precision among dropped contributions
    floor: i64,
}

impl Series3 {
    fn new(ring: &Ring, n: usize) -> Self {
        Series3 {
            ring: ring.clone(),
            n,
            terms: BTreeMap::new(),
            floor: ring.full_precision(),
        }
    }

    fn one(ring: &Ring, n: usize) -> Self {
        let mut s = Series3::new(ring, n);
        s.terms.insert([0, 0, 0], KScalar::one(ring));
        s
    }

    pub(crate) fn var(ring: &Ring, n: usize, k: usize) -> Self {
        let mut s = Series3::new(ring, n);
        let mut e = [0; 3];
        e[k] = 1;
        s.terms.insert(e, KScalar::one(ring));
        s
    }

    fn add_term(&mut self, e: Exp, c: KScalar) {
        if c.is_zero() {
            self.floor = self.floor.min(c.prec());
            return;
        }
        let slot = self
            .terms
            .entry(e)
            .or_insert_with(|| KScalar::zero(&c.ring().clone()));
        *slot = &*slot + &c;
    }

    fn mul(&self, other: &Self) -> Self {
        let mut out = Series3::new(&self.ring, self.n);
        out.floor = self.floor.min(other.floor);
        for (a, x) in &self.terms {
            let da: usize = a.iter().sum();
            for (b, y) in &other.terms {
                if da + b.iter().sum::<usize>() > self.n {
                    continue;
                }
                out.add_term([a[0] + b[0], a[1] + b[1], a[2] + b[2]], x * y);
            }
        }
        out
    }

    /// `F(a, b)`.
    pub(crate) fn subst(f: &TruncSeries2, a: &Series3, b: &Series3) -> Self {
        let n = a.n.min(f.degree());
        let ring = f.ring();
        let mut pa = vec![Series3::one(ring, n)];
        let mut pb = vec![Series3::one(ring, n)];
        for k in 1..=n {
            pa.push(pa[k - 1].mul(a));
            pb.push(pb[k - 1].mul(b));
        }
        let mut out = Series3::new(ring, n);
        for ((i, j), c) in f.terms() {
            if c.is_zero() {
                continue;
            }
            for (e, x) in pa[i].mul(&pb[j]).terms {
                out.add_term(e, c * &x);
            }
        }
        out.floor = out.floor.min(a.floor).min(b.floor);
        out
    }

    pub(crate) fn eq_to_prec(&self, other: &Self) -> bool {
        let mut diff = self.clone();
        for (e, c) in &other.terms {
            diff.add_term(*e, -c);
        }
        diff.terms.values().all(KScalar::is_zero)
    }
}
