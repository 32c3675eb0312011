//! Real root isolation by Sturm-sequence bisection.

use super::algreal::AlgReal;
use super::poly::Poly;
use super::rat::{Rat, Sign};
use num_traits::Zero;

/// Sturm chain of a square-free polynomial.
#[derive(Clone, Debug)]
pub struct SturmChain {
    chain: Vec<Poly>,
}

impl SturmChain {
    pub fn new(p: &Poly) -> SturmChain {
        let mut chain = vec![p.clone()];
        let d = p.derivative();
        if !d.is_zero() {
            chain.push(d);
        }
        loop {
            let n = chain.len();
            if n < 2 {
                break;
            }
            let r = chain[n - 2].rem(&chain[n - 1]);
            if r.is_zero() {
                break;
            }
            chain.push(-r);
        }
        SturmChain { chain }
    }

    fn variations(&self, x: &Rat) -> usize {
        let mut last = Sign::Zero;
        let mut count = 0;
        for p in &self.chain {
            let s = p.sign_at(x);
            if s == Sign::Zero {
                continue;
            }
            if last != Sign::Zero && s != last {
                count += 1;
            }
            last = s;
        }
        count
    }

    /// Number of distinct roots in the half-open interval `(a, b]`.
    pub fn count(&self, a: &Rat, b: &Rat) -> usize {
        self.variations(a).saturating_sub(self.variations(b))
    }
}

/// All distinct real roots of `p` in the closed interval `[lo, hi]`, ascending.
///
/// Works on the square-free part; each irrational root comes back with an open
/// isolating interval whose endpoints are not roots, rational roots come back
/// exact.
pub fn isolate_roots(p: &Poly, lo: &Rat, hi: &Rat) -> Vec<AlgReal> {
    let mut out = Vec::new();
    if p.is_zero() || lo > hi {
        return out;
    }
    let sf = p.square_free();
    if sf.degree() == Some(0) {
        return out;
    }
    if sf.eval(lo).is_zero() {
        out.push(AlgReal::from_rat(lo.clone()));
    }
    let chain = SturmChain::new(&sf);
    bisect(&sf, &chain, lo.clone(), hi.clone(), &mut out);
    out
}

/// Roots in the whole real line, using the Cauchy bound for the search window.
pub fn real_roots(p: &Poly) -> Vec<AlgReal> {
    if p.is_zero() || p.degree() == Some(0) {
        return Vec::new();
    }
    let b = p.cauchy_bound();
    isolate_roots(p, &-b.clone(), &b)
}

fn bisect(sf: &Poly, chain: &SturmChain, a: Rat, b: Rat, out: &mut Vec<AlgReal>) {
    let n = chain.count(&a, &b);
    if n == 0 {
        return;
    }
    if n == 1 {
        if sf.eval(&b).is_zero() {
            out.push(AlgReal::from_rat(b));
            return;
        }
        // a root sitting on `a` was already reported; shrink away from it
        if !sf.eval(&a).is_zero() {
            out.push(AlgReal::from_isolating(sf.clone(), a, b));
            return;
        }
    }
    let mid = (&a + &b) / Rat::from_integer(2.into());
    bisect(sf, chain, a, mid.clone(), out);
    bisect(sf, chain, mid, b, out);
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactnum::rat::{int, rat};

    #[test]
    fn factored_quadratic() {
        let roots = isolate_roots(&Poly::from_ints(&[8, -6, 1]), &int(0), &int(10));
        assert_eq!(roots.len(), 2);
        assert_eq!(roots[0].as_rat(), Some(&int(2)));
        assert_eq!(roots[1].as_rat(), Some(&int(4)));
    }

    #[test]
    fn root_on_a_bisection_midpoint() {
        // x(x - 1/4) on [-1, 1]: 0 is the first midpoint
        let p = Poly::new(vec![int(0), rat(-1, 4), int(1)]);
        let roots = isolate_roots(&p, &int(-1), &int(1));
        assert_eq!(roots.len(), 2);
        assert_eq!(roots[0].as_rat(), Some(&int(0)));
        assert_eq!(roots[1].as_rat(), Some(&rat(1, 4)));
    }

    #[test]
    fn irrational_root_in_unit_interval() {
        let p = Poly::new(vec![rat(-4, 3), int(0), int(2)]);
        let roots = isolate_roots(&p, &int(0), &int(1));
        assert_eq!(roots.len(), 1);
        let r = &roots[0];
        assert!(!r.is_rational());
        assert_eq!(r.cmp_rat(&rat(4, 5)), std::cmp::Ordering::Greater);
        assert_eq!(r.cmp_rat(&rat(5, 6)), std::cmp::Ordering::Less);
    }

    #[test]
    fn no_roots_in_range() {
        assert!(isolate_roots(&Poly::from_ints(&[1, 1]), &int(0), &int(1)).is_empty());
    }

    #[test]
    fn close_roots_are_separated() {
        // (x - 1/1000)(x - 2/1000): no sign change over [0, 1] yet two roots
        let p = &Poly::new(vec![rat(-1, 1000), int(1)]) * &Poly::new(vec![rat(-2, 1000), int(1)]);
        let roots = isolate_roots(&p, &int(0), &int(1));
        assert_eq!(roots.len(), 2);
        assert_eq!(roots[0].as_rat(), Some(&rat(1, 1000)));
    }

    #[test]
    fn repeated_roots_collapse() {
        let p = Poly::from_ints(&[-2, 1]).pow(3);
        let roots = real_roots(&p);
        assert_eq!(roots.len(), 1);
        assert_eq!(roots[0].as_rat(), Some(&int(2)));
    }

    #[test]
    fn endpoints_are_included() {
        let roots = isolate_roots(&Poly::from_ints(&[8, -6, 1]), &int(2), &int(4));
        assert_eq!(roots.len(), 2);
    }
}
