//! Real algebraic numbers as (square-free polynomial, isolating interval).
//!
//! Only what the pipeline needs: comparison, sign, shifting and scaling by
//! rationals, evaluating a rational polynomial at the number, and sums (for
//! definite integrals whose endpoints are both irrational). Rational values are
//! always stored exactly; an irrational value is never silently rounded.

use super::matrix::{charpoly, companion, identity, kronecker, multiplication_matrix};
use super::poly::Poly;
use super::rat::{fmt_rat, rat_to_decimal, rat_to_f64, simplest_between, Rat, Sign};
use super::roots::SturmChain;
use num_traits::{One, Signed, Zero};
use std::cmp::Ordering;
use std::fmt;

#[derive(Clone, Debug)]
pub struct AlgReal {
    repr: Repr,
}

#[derive(Clone, Debug)]
enum Repr {
    Rational(Rat),
    /// Irrational root of `poly`, the only root in the open interval `(lo, hi)`.
    Root { poly: Poly, lo: Rat, hi: Rat },
}

fn two() -> Rat {
    Rat::from_integer(2.into())
}

impl AlgReal {
    pub fn from_rat(r: Rat) -> AlgReal {
        AlgReal { repr: Repr::Rational(r) }
    }

    pub fn zero() -> AlgReal {
        AlgReal::from_rat(Rat::zero())
    }

    /// Builds the root of square-free `poly` isolated in `(lo, hi)`.
    ///
    /// The caller guarantees `poly(lo)`, `poly(hi)` are nonzero and the open
    /// interval holds exactly one root. Rational roots are detected and stored
    /// exactly.
    pub fn from_isolating(poly: Poly, lo: Rat, hi: Rat) -> AlgReal {
        let poly = poly.primitive();
        debug_assert!(poly.sign_at(&lo) != Sign::Zero && poly.sign_at(&hi) != Sign::Zero);
        let lead = poly.leading().abs();
        // A rational root p/q has q | lead; once the interval is narrower than
        // 1/lead^2 it is the simplest fraction inside.
        let target = (&lead * &lead).recip();
        let mut cur = AlgReal { repr: Repr::Root { poly, lo, hi } };
        loop {
            let Repr::Root { poly, lo, hi } = &cur.repr else {
                return cur;
            };
            if hi - lo < target {
                let c = simplest_between(lo, hi);
                if poly.eval(&c).is_zero() {
                    return AlgReal::from_rat(c);
                }
                return cur;
            }
            cur = cur.bisected();
        }
    }

    pub fn is_rational(&self) -> bool {
        matches!(self.repr, Repr::Rational(_))
    }

    pub fn as_rat(&self) -> Option<&Rat> {
        match &self.repr {
            Repr::Rational(r) => Some(r),
            Repr::Root { .. } => None,
        }
    }

    /// Closed enclosure; degenerate for rationals, open isolating interval otherwise.
    pub fn interval(&self) -> (Rat, Rat) {
        match &self.repr {
            Repr::Rational(r) => (r.clone(), r.clone()),
            Repr::Root { lo, hi, .. } => (lo.clone(), hi.clone()),
        }
    }

    pub fn defining_poly(&self) -> Poly {
        match &self.repr {
            Repr::Rational(r) => Poly::linear(-r, Rat::one()),
            Repr::Root { poly, .. } => poly.clone(),
        }
    }

    fn bisected(&self) -> AlgReal {
        match &self.repr {
            Repr::Rational(_) => self.clone(),
            Repr::Root { poly, lo, hi } => {
                let mid = (lo + hi) / two();
                let sm = poly.sign_at(&mid);
                if sm == Sign::Zero {
                    return AlgReal::from_rat(mid);
                }
                let repr = if sm == poly.sign_at(lo) {
                    Repr::Root { poly: poly.clone(), lo: mid, hi: hi.clone() }
                } else {
                    Repr::Root { poly: poly.clone(), lo: lo.clone(), hi: mid }
                };
                AlgReal { repr }
            }
        }
    }

    /// Same value with an isolating interval no wider than `width`.
    pub fn refined(&self, width: &Rat) -> AlgReal {
        let mut cur = self.clone();
        while let Repr::Root { lo, hi, .. } = &cur.repr {
            if &(hi - lo) <= width {
                break;
            }
            cur = cur.bisected();
        }
        cur
    }

    pub fn cmp_rat(&self, r: &Rat) -> Ordering {
        match &self.repr {
            Repr::Rational(v) => v.cmp(r),
            Repr::Root { poly, lo, hi } => {
                if r <= lo {
                    Ordering::Greater
                } else if r >= hi {
                    Ordering::Less
                } else {
                    let s = poly.sign_at(r);
                    if s == Sign::Zero {
                        Ordering::Equal
                    } else if s == poly.sign_at(lo) {
                        // root lies in (r, hi)
                        Ordering::Greater
                    } else {
                        Ordering::Less
                    }
                }
            }
        }
    }

    pub fn sign(&self) -> Sign {
        match self.cmp_rat(&Rat::zero()) {
            Ordering::Less => Sign::Negative,
            Ordering::Equal => Sign::Zero,
            Ordering::Greater => Sign::Positive,
        }
    }

    pub fn neg(&self) -> AlgReal {
        match &self.repr {
            Repr::Rational(r) => AlgReal::from_rat(-r),
            Repr::Root { poly, lo, hi } => AlgReal {
                repr: Repr::Root {
                    poly: poly.compose_affine(&-Rat::one(), &Rat::zero()).primitive(),
                    lo: -hi,
                    hi: -lo,
                },
            },
        }
    }

    pub fn add_rat(&self, c: &Rat) -> AlgReal {
        match &self.repr {
            Repr::Rational(r) => AlgReal::from_rat(r + c),
            Repr::Root { poly, lo, hi } => AlgReal {
                repr: Repr::Root {
                    poly: poly.shift(&-c).primitive(),
                    lo: lo + c,
                    hi: hi + c,
                },
            },
        }
    }

    pub fn mul_rat(&self, c: &Rat) -> AlgReal {
        if c.is_zero() {
            return AlgReal::zero();
        }
        match &self.repr {
            Repr::Rational(r) => AlgReal::from_rat(r * c),
            Repr::Root { poly, lo, hi } => {
                let (a, b) = (lo * c, hi * c);
                let (lo, hi) = if c.is_negative() { (b, a) } else { (a, b) };
                AlgReal {
                    repr: Repr::Root {
                        poly: poly.compose_affine(&c.recip(), &Rat::zero()).primitive(),
                        lo,
                        hi,
                    },
                }
            }
        }
    }

    /// The exact value `g(self)`.
    pub fn eval_poly(&self, g: &Poly) -> AlgReal {
        if g.degree().unwrap_or(0) == 0 {
            return AlgReal::from_rat(g.coeff(0));
        }
        match &self.repr {
            Repr::Rational(r) => AlgReal::from_rat(g.eval(r)),
            Repr::Root { poly, .. } => {
                let h = charpoly(&multiplication_matrix(poly, g)).square_free();
                let mut cur = self.clone();
                loop {
                    let (lo, hi) = cur.interval();
                    let (elo, ehi) = g.eval_interval(&lo, &hi);
                    if let Some(v) = isolate_in(&h, &elo, &ehi) {
                        return v;
                    }
                    cur = cur.bisected();
                    if let Some(r) = cur.as_rat() {
                        return AlgReal::from_rat(g.eval(r));
                    }
                }
            }
        }
    }

    pub fn add(&self, other: &AlgReal) -> AlgReal {
        match (&self.repr, &other.repr) {
            (Repr::Rational(a), _) => other.add_rat(a),
            (_, Repr::Rational(b)) => self.add_rat(b),
            (Repr::Root { poly: p, .. }, Repr::Root { poly: q, .. }) => {
                let (cp, cq) = (companion(p), companion(q));
                let (ip, iq) = (identity(cp.len()), identity(cq.len()));
                let a = kronecker(&cp, &iq);
                let b = kronecker(&ip, &cq);
                let sum: Vec<Vec<Rat>> = a
                    .iter()
                    .zip(&b)
                    .map(|(ra, rb)| ra.iter().zip(rb).map(|(x, y)| x + y).collect())
                    .collect();
                let h = charpoly(&sum).square_free();
                let (mut x, mut y) = (self.clone(), other.clone());
                loop {
                    let (xl, xh) = x.interval();
                    let (yl, yh) = y.interval();
                    if let Some(v) = isolate_in(&h, &(&xl + &yl), &(&xh + &yh)) {
                        return v;
                    }
                    x = x.bisected();
                    y = y.bisected();
                    if x.is_rational() || y.is_rational() {
                        return x.add(&y);
                    }
                }
            }
        }
    }

    pub fn sub(&self, other: &AlgReal) -> AlgReal {
        self.add(&other.neg())
    }

    /// Some rational strictly between `self` and a strictly larger `other`.
    pub fn rational_between(&self, other: &AlgReal) -> Rat {
        debug_assert!(self < other);
        let (mut a, mut b) = (self.clone(), other.clone());
        loop {
            let (_, ah) = a.interval();
            let (bl, _) = b.interval();
            let m = (ah + bl) / two();
            if a.cmp_rat(&m) == Ordering::Less && b.cmp_rat(&m) == Ordering::Greater {
                return m;
            }
            a = a.bisected();
            b = b.bisected();
        }
    }

    pub fn to_f64(&self) -> f64 {
        match &self.repr {
            Repr::Rational(r) => rat_to_f64(r),
            Repr::Root { .. } => {
                let w = Rat::new(1.into(), num_traits::pow(num_bigint::BigInt::from(2), 64));
                let (lo, hi) = self.refined(&w).interval();
                rat_to_f64(&((lo + hi) / two()))
            }
        }
    }

    /// Advisory decimal expansion with `digits` fractional digits.
    pub fn decimal(&self, digits: usize) -> String {
        match &self.repr {
            Repr::Rational(r) => rat_to_decimal(r, digits),
            Repr::Root { .. } => {
                let w = Rat::new(
                    1.into(),
                    num_traits::pow(num_bigint::BigInt::from(10), digits + 3),
                );
                let (lo, hi) = self.refined(&w).interval();
                rat_to_decimal(&((lo + hi) / two()), digits)
            }
        }
    }
}

/// Locates the unique root of square-free `h` in `[lo, hi]`, or `None` if the
/// enclosure does not isolate exactly one root.
fn isolate_in(h: &Poly, lo: &Rat, hi: &Rat) -> Option<AlgReal> {
    if lo == hi {
        return h.eval(lo).is_zero().then(|| AlgReal::from_rat(lo.clone()));
    }
    if h.eval(lo).is_zero() || h.eval(hi).is_zero() {
        return None;
    }
    if SturmChain::new(h).count(lo, hi) != 1 {
        return None;
    }
    Some(AlgReal::from_isolating(h.clone(), lo.clone(), hi.clone()))
}

fn cmp_alg(a: &AlgReal, b: &AlgReal) -> Ordering {
    if let Some(r) = b.as_rat() {
        return a.cmp_rat(r);
    }
    if let Some(r) = a.as_rat() {
        return b.cmp_rat(r).reverse();
    }
    let g = a.defining_poly().gcd(&b.defining_poly());
    let has_root = |x: &AlgReal| {
        let (lo, hi) = x.interval();
        g.sign_at(&lo) != g.sign_at(&hi)
    };
    if g.degree().unwrap_or(0) > 0 && has_root(a) && has_root(b) {
        let (al, ah) = a.interval();
        let (bl, bh) = b.interval();
        let (jl, jh) = (al.clone().max(bl.clone()), ah.clone().min(bh.clone()));
        if jl < jh && g.sign_at(&jl) != g.sign_at(&jh) {
            return Ordering::Equal;
        }
    }
    let (mut x, mut y) = (a.clone(), b.clone());
    loop {
        let (xl, xh) = x.interval();
        let (yl, yh) = y.interval();
        if xh <= yl {
            return Ordering::Less;
        }
        if yh <= xl {
            return Ordering::Greater;
        }
        x = x.bisected();
        y = y.bisected();
        if x.is_rational() || y.is_rational() {
            return cmp_alg(&x, &y);
        }
    }
}

impl PartialEq for AlgReal {
    fn eq(&self, other: &Self) -> bool {
        cmp_alg(self, other) == Ordering::Equal
    }
}

impl Eq for AlgReal {}

impl PartialOrd for AlgReal {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for AlgReal {
    fn cmp(&self, other: &Self) -> Ordering {
        cmp_alg(self, other)
    }
}

impl From<Rat> for AlgReal {
    fn from(r: Rat) -> Self {
        AlgReal::from_rat(r)
    }
}

impl fmt::Display for AlgReal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.repr {
            Repr::Rational(r) => f.write_str(&fmt_rat(r)),
            Repr::Root { poly, lo, hi } => write!(
                f,
                "root of {} in ({}, {}) ~ {}",
                poly,
                fmt_rat(lo),
                fmt_rat(hi),
                self.decimal(6)
            ),
        }
    }
}
