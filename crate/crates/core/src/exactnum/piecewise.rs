use super::algreal::AlgReal;
use super::poly::Poly;
use super::rat::Rat;
use crate::error::{Error, Result};

/// Exact definite integral of `p` over `[a, b]`.
pub fn poly_integrate(p: &Poly, a: &AlgReal, b: &AlgReal) -> AlgReal {
    if p.is_zero() || a == b {
        return AlgReal::zero();
    }
    if let (Some(x), Some(y)) = (a.as_rat(), b.as_rat()) {
        return AlgReal::from_rat(p.integrate(x, y));
    }
    let f = p.antiderivative();
    b.eval_poly(&f).sub(&a.eval_poly(&f))
}

/// Piecewise polynomial on `[b_0, b_m]` with one polynomial per consecutive
/// breakpoint pair. Continuity is not part of the type.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PiecewisePoly {
    breakpoints: Vec<AlgReal>,
    pieces: Vec<Poly>,
}

impl PiecewisePoly {
    pub fn new(breakpoints: Vec<AlgReal>, pieces: Vec<Poly>) -> Result<PiecewisePoly> {
        if breakpoints.len() != pieces.len() + 1 || pieces.is_empty() {
            return Err(Error::InvalidInput(format!(
                "piecewise polynomial needs one more breakpoint than pieces (got {} breakpoints, {} pieces)",
                breakpoints.len(),
                pieces.len()
            )));
        }
        if breakpoints.windows(2).any(|w| w[0] >= w[1]) {
            return Err(Error::InvalidInput(
                "breakpoints must be strictly increasing".into(),
            ));
        }
        Ok(PiecewisePoly { breakpoints, pieces })
    }

    pub fn breakpoints(&self) -> &[AlgReal] {
        &self.breakpoints
    }

    pub fn pieces(&self) -> &[Poly] {
        &self.pieces
    }

    pub fn start(&self) -> &AlgReal {
        &self.breakpoints[0]
    }

    pub fn end(&self) -> &AlgReal {
        self.breakpoints.last().expect("nonempty")
    }

    pub fn piece_interval(&self, i: usize) -> (&AlgReal, &AlgReal) {
        (&self.breakpoints[i], &self.breakpoints[i + 1])
    }

    /// Index of the piece containing `x`; at an interior breakpoint the piece
    /// on the right wins, at the final breakpoint the last piece.
    pub fn piece_index(&self, x: &Rat) -> Option<usize> {
        if self.start().cmp_rat(x).is_gt() || self.end().cmp_rat(x).is_lt() {
            return None;
        }
        let i = self.breakpoints[1..]
            .iter()
            .position(|b| b.cmp_rat(x).is_gt())
            .unwrap_or(self.pieces.len() - 1);
        Some(i)
    }

    /// Value at a rational point; `None` outside the domain.
    pub fn eval(&self, x: &Rat) -> Option<Rat> {
        self.piece_index(x).map(|i| self.pieces[i].eval(x))
    }

    /// Exact `∫_a^b f`. With `zero_beyond_end` the function is taken to vanish
    /// past its last breakpoint (volume profiles); otherwise `b` must stay in
    /// the domain.
    pub fn integrate(&self, a: &AlgReal, b: &AlgReal, zero_beyond_end: bool) -> Result<AlgReal> {
        if a > b {
            return Err(Error::Domain(format!("empty integration range [{a}, {b}]")));
        }
        if a < self.start() {
            return Err(Error::Domain(format!(
                "lower limit {a} lies before the first breakpoint {}",
                self.start()
            )));
        }
        if !zero_beyond_end && b > self.end() {
            return Err(Error::Domain(format!(
                "upper limit {b} lies past the last breakpoint {}",
                self.end()
            )));
        }
        let mut total = AlgReal::zero();
        for (i, p) in self.pieces.iter().enumerate() {
            let (l, r) = self.piece_interval(i);
            let lo = if a > l { a } else { l };
            let hi = if b < r { b } else { r };
            if lo < hi {
                total = total.add(&poly_integrate(p, lo, hi));
            }
        }
        Ok(total)
    }

    /// Maps every piece through `f`, keeping the breakpoints.
    pub fn map_pieces(&self, f: impl Fn(&Poly) -> Poly) -> PiecewisePoly {
        PiecewisePoly {
            breakpoints: self.breakpoints.clone(),
            pieces: self.pieces.iter().map(f).collect(),
        }
    }

    /// True when adjacent pieces agree at every interior breakpoint.
    pub fn is_continuous(&self) -> bool {
        (1..self.pieces.len()).all(|i| {
            let b = &self.breakpoints[i];
            self.pieces[i - 1].eval_at(b) == self.pieces[i].eval_at(b)
        })
    }
}

impl Poly {
    /// Exact value at an algebraic point.
    pub fn eval_at(&self, x: &AlgReal) -> AlgReal {
        x.eval_poly(self)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactnum::rat::{int, rat};

    fn ex42() -> PiecewisePoly {
        PiecewisePoly::new(
            vec![int(0).into(), int(1).into(), int(2).into()],
            vec![Poly::from_ints(&[7, -4]), Poly::from_ints(&[8, -6, 1])],
        )
        .unwrap()
    }

    #[test]
    fn integrate_full_profile() {
        let v = ex42().integrate(&int(0).into(), &int(2).into(), true).unwrap();
        assert_eq!(v.as_rat(), Some(&rat(19, 3)));
    }

    #[test]
    fn integrate_partial_profile() {
        // ∫_{1/2}^1 (7-4x) + ∫_1^2 (x^2-6x+8) = 2 + 4/3
        let v = ex42().integrate(&rat(1, 2).into(), &int(2).into(), true).unwrap();
        assert_eq!(v.as_rat(), Some(&rat(10, 3)));
    }

    #[test]
    fn empty_range_and_tail() {
        let f = ex42();
        let a: AlgReal = rat(3, 4).into();
        assert_eq!(f.integrate(&a, &a, false).unwrap().as_rat(), Some(&int(0)));
        let tail = f.integrate(&int(0).into(), &int(7).into(), true).unwrap();
        assert_eq!(tail.as_rat(), Some(&rat(19, 3)));
        assert!(f.integrate(&int(0).into(), &int(7).into(), false).is_err());
        assert!(f.integrate(&int(-1).into(), &int(1).into(), true).is_err());
    }

    #[test]
    fn evaluation_and_continuity() {
        let f = ex42();
        assert_eq!(f.eval(&int(1)), Some(int(3)));
        assert_eq!(f.eval(&rat(3, 2)), Some(rat(5, 4)));
        assert_eq!(f.eval(&int(3)), None);
        assert!(f.is_continuous());
        let g = PiecewisePoly::new(
            vec![int(0).into(), int(1).into(), int(2).into()],
            vec![Poly::from_ints(&[1]), Poly::from_ints(&[2])],
        )
        .unwrap();
        assert!(!g.is_continuous());
    }

    #[test]
    fn irrational_endpoint() {
        // ∫_0^{sqrt 2} 3x^2 dx = 2 sqrt 2
        let r = AlgReal::from_isolating(Poly::from_ints(&[-2, 0, 1]), int(1), int(2));
        let v = poly_integrate(&Poly::from_ints(&[0, 0, 3]), &AlgReal::zero(), &r);
        assert_eq!(v, r.mul_rat(&int(2)));
        // and between two irrational endpoints: ∫_{-sqrt2}^{sqrt2} 1 = 2 sqrt2
        let w = poly_integrate(&Poly::one(), &r.neg(), &r);
        assert_eq!(w, r.mul_rat(&int(2)));
    }

    #[test]
    fn rejects_bad_shapes() {
        assert!(PiecewisePoly::new(vec![int(0).into()], vec![]).is_err());
        assert!(PiecewisePoly::new(
            vec![int(1).into(), int(0).into()],
            vec![Poly::one()]
        )
        .is_err());
    }
}
