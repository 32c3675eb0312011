use super::rat::{fmt_rat, lcm_denominators, Rat, Sign};
use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

/// Univariate polynomial over the rationals, coefficients lowest degree first.
///
/// The coefficient list never ends in a zero; the zero polynomial is empty.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Default)]
pub struct Poly {
    coeffs: Vec<Rat>,
}

impl Poly {
    pub fn zero() -> Poly {
        Poly { coeffs: Vec::new() }
    }

    pub fn one() -> Poly {
        Poly::constant(Rat::one())
    }

    pub fn constant(c: Rat) -> Poly {
        Poly::new(vec![c])
    }

    /// The identity polynomial `x`.
    pub fn x() -> Poly {
        Poly::new(vec![Rat::zero(), Rat::one()])
    }

    /// `a + b x`
    pub fn linear(a: Rat, b: Rat) -> Poly {
        Poly::new(vec![a, b])
    }

    pub fn new(mut coeffs: Vec<Rat>) -> Poly {
        while coeffs.last().is_some_and(Zero::is_zero) {
            coeffs.pop();
        }
        Poly { coeffs }
    }

    pub fn from_ints(cs: &[i64]) -> Poly {
        Poly::new(cs.iter().map(|&c| Rat::from_integer(BigInt::from(c))).collect())
    }

    pub fn coeffs(&self) -> &[Rat] {
        &self.coeffs
    }

    pub fn coeff(&self, i: usize) -> Rat {
        self.coeffs.get(i).cloned().unwrap_or_else(Rat::zero)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn leading(&self) -> Rat {
        self.coeffs.last().cloned().unwrap_or_else(Rat::zero)
    }

    pub fn eval(&self, x: &Rat) -> Rat {
        let mut acc = Rat::zero();
        for c in self.coeffs.iter().rev() {
            acc = acc * x + c;
        }
        acc
    }

    pub fn sign_at(&self, x: &Rat) -> Sign {
        Sign::of(&self.eval(x))
    }

    /// Sign of the polynomial on `(x, x + eps)` for all sufficiently small `eps > 0`.
    pub fn sign_right_of(&self, x: &Rat) -> Sign {
        let mut d = self.clone();
        while !d.is_zero() {
            let s = d.sign_at(x);
            if s != Sign::Zero {
                return s;
            }
            d = d.derivative();
        }
        Sign::Zero
    }

    pub fn scale(&self, c: &Rat) -> Poly {
        Poly::new(self.coeffs.iter().map(|a| a * c).collect())
    }

    pub fn derivative(&self) -> Poly {
        Poly::new(
            self.coeffs
                .iter()
                .enumerate()
                .skip(1)
                .map(|(i, c)| c * Rat::from_integer(BigInt::from(i)))
                .collect(),
        )
    }

    /// Antiderivative with zero constant term.
    pub fn antiderivative(&self) -> Poly {
        let mut out = Vec::with_capacity(self.coeffs.len() + 1);
        out.push(Rat::zero());
        for (i, c) in self.coeffs.iter().enumerate() {
            out.push(c / Rat::from_integer(BigInt::from(i + 1)));
        }
        Poly::new(out)
    }

    /// Exact definite integral over rational bounds.
    pub fn integrate(&self, a: &Rat, b: &Rat) -> Rat {
        let f = self.antiderivative();
        f.eval(b) - f.eval(a)
    }

    /// `p(a x + b)`
    pub fn compose_affine(&self, a: &Rat, b: &Rat) -> Poly {
        let inner = Poly::linear(b.clone(), a.clone());
        let mut acc = Poly::zero();
        for c in self.coeffs.iter().rev() {
            acc = &(&acc * &inner) + &Poly::constant(c.clone());
        }
        acc
    }

    /// `p(x + c)`
    pub fn shift(&self, c: &Rat) -> Poly {
        self.compose_affine(&Rat::one(), c)
    }

    pub fn pow(&self, e: u32) -> Poly {
        (0..e).fold(Poly::one(), |acc, _| &acc * self)
    }

    /// Euclidean division; panics on a zero divisor.
    pub fn div_rem(&self, d: &Poly) -> (Poly, Poly) {
        assert!(!d.is_zero(), "polynomial division by zero");
        let dd = d.coeffs.len() - 1;
        let lead = d.leading();
        let mut rem = self.coeffs.clone();
        if rem.len() <= dd {
            return (Poly::zero(), self.clone());
        }
        let mut quot = vec![Rat::zero(); rem.len() - dd];
        for i in (0..quot.len()).rev() {
            let q = &rem[i + dd] / &lead;
            if !q.is_zero() {
                for (j, dc) in d.coeffs.iter().enumerate() {
                    rem[i + j] -= &q * dc;
                }
            }
            quot[i] = q;
        }
        rem.truncate(dd);
        (Poly::new(quot), Poly::new(rem))
    }

    pub fn rem(&self, d: &Poly) -> Poly {
        self.div_rem(d).1
    }

    pub fn monic(&self) -> Poly {
        if self.is_zero() {
            return Poly::zero();
        }
        let l = self.leading();
        self.scale(&l.recip())
    }

    /// Monic greatest common divisor.
    pub fn gcd(&self, other: &Poly) -> Poly {
        let (mut a, mut b) = (self.clone(), other.clone());
        while !b.is_zero() {
            let r = a.rem(&b);
            a = b;
            b = r;
        }
        a.monic()
    }

    /// `p / gcd(p, p')`, made primitive.
    pub fn square_free(&self) -> Poly {
        if self.degree().unwrap_or(0) == 0 {
            return self.primitive();
        }
        let g = self.gcd(&self.derivative());
        self.div_rem(&g).0.primitive()
    }

    /// Scales to integer coefficients with unit content and positive leading coefficient.
    pub fn primitive(&self) -> Poly {
        if self.is_zero() {
            return Poly::zero();
        }
        let l = lcm_denominators(self.coeffs.iter());
        let ints: Vec<BigInt> = self
            .coeffs
            .iter()
            .map(|c| (c * Rat::from_integer(l.clone())).to_integer())
            .collect();
        let mut content = ints.iter().fold(BigInt::zero(), |acc, c| acc.gcd(c));
        if ints.last().is_some_and(|c| c.is_negative()) {
            content = -content;
        }
        Poly::new(
            ints.into_iter()
                .map(|c| Rat::from_integer(c / &content))
                .collect(),
        )
    }

    /// Cauchy bound: every complex root has modulus below the returned value.
    pub fn cauchy_bound(&self) -> Rat {
        let lead = self.leading().abs();
        let n = self.coeffs.len().saturating_sub(1);
        let max = self.coeffs[..n]
            .iter()
            .map(|c| c.abs() / &lead)
            .max()
            .unwrap_or_else(Rat::zero);
        Rat::one() + max
    }

    /// Enclosure of the image of `[lo, hi]` under the polynomial (interval Horner).
    pub fn eval_interval(&self, lo: &Rat, hi: &Rat) -> (Rat, Rat) {
        let mut acc = (Rat::zero(), Rat::zero());
        for c in self.coeffs.iter().rev() {
            let prods = [&acc.0 * lo, &acc.0 * hi, &acc.1 * lo, &acc.1 * hi];
            let mn = prods.iter().min().unwrap().clone();
            let mx = prods.iter().max().unwrap().clone();
            acc = (mn + c, mx + c);
        }
        acc
    }

    pub fn to_strings(&self) -> Vec<String> {
        self.coeffs.iter().map(fmt_rat).collect()
    }

    /// Pretty rendering in the variable `var`, highest degree first.
    pub fn render(&self, var: &str) -> String {
        if self.is_zero() {
            return "0".into();
        }
        let mut out = String::new();
        for (i, c) in self.coeffs.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            let neg = c.is_negative();
            let a = c.abs();
            if out.is_empty() {
                if neg {
                    out.push('-');
                }
            } else {
                out.push_str(if neg { " - " } else { " + " });
            }
            let mono = match i {
                0 => String::new(),
                1 => var.to_string(),
                _ => format!("{var}^{i}"),
            };
            if i == 0 || !a.is_one() {
                out.push_str(&fmt_rat(&a));
                if i > 0 {
                    out.push('*');
                }
            }
            out.push_str(&mono);
        }
        out
    }
}

impl fmt::Display for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.render("x"))
    }
}

impl<'a> Add<&'a Poly> for &'a Poly {
    type Output = Poly;
    fn add(self, rhs: &Poly) -> Poly {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        Poly::new((0..n).map(|i| self.coeff(i) + rhs.coeff(i)).collect())
    }
}

impl<'a> Sub<&'a Poly> for &'a Poly {
    type Output = Poly;
    fn sub(self, rhs: &Poly) -> Poly {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        Poly::new((0..n).map(|i| self.coeff(i) - rhs.coeff(i)).collect())
    }
}

impl<'a> Mul<&'a Poly> for &'a Poly {
    type Output = Poly;
    fn mul(self, rhs: &Poly) -> Poly {
        if self.is_zero() || rhs.is_zero() {
            return Poly::zero();
        }
        let mut out = vec![Rat::zero(); self.coeffs.len() + rhs.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            for (j, b) in rhs.coeffs.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        Poly::new(out)
    }
}

impl Neg for &Poly {
    type Output = Poly;
    fn neg(self) -> Poly {
        Poly::new(self.coeffs.iter().map(|c| -c).collect())
    }
}

macro_rules! forward_owned {
    ($tr:ident, $m:ident) => {
        impl $tr<Poly> for Poly {
            type Output = Poly;
            fn $m(self, rhs: Poly) -> Poly {
                (&self).$m(&rhs)
            }
        }
    };
}
forward_owned!(Add, add);
forward_owned!(Sub, sub);
forward_owned!(Mul, mul);

impl Neg for Poly {
    type Output = Poly;
    fn neg(self) -> Poly {
        -(&self)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactnum::rat::{int, rat};

    #[test]
    fn normal_form_trims_zeros() {
        let p = Poly::new(vec![int(1), int(0), int(0)]);
        assert_eq!(p.degree(), Some(0));
        assert!(Poly::new(vec![int(0)]).is_zero());
        assert_eq!(Poly::zero().degree(), None);
    }

    #[test]
    fn integrate_volume_pieces() {
        // antiderivatives -2x^2+7x and x^3/3-3x^2+8x by hand
        assert_eq!(Poly::from_ints(&[7, -4]).integrate(&int(0), &int(1)), int(5));
        assert_eq!(Poly::from_ints(&[8, -6, 1]).integrate(&int(1), &int(2)), rat(4, 3));
        assert_eq!(Poly::zero().integrate(&int(-3), &int(9)), int(0));
    }

    #[test]
    fn division_and_gcd() {
        let a = Poly::from_ints(&[8, -6, 1]); // (x-2)(x-4)
        let b = Poly::from_ints(&[-2, 1]);
        let (q, r) = a.div_rem(&b);
        assert_eq!(q, Poly::from_ints(&[-4, 1]));
        assert!(r.is_zero());
        let sq = &a * &b; // (x-2)^2 (x-4)
        assert_eq!(sq.gcd(&sq.derivative()), Poly::from_ints(&[-2, 1]));
        assert_eq!(sq.square_free(), a);
    }

    #[test]
    fn composition() {
        let v = Poly::from_ints(&[7, -4]);
        // 7 - 4(1 - b) = 3 + 4b
        assert_eq!(v.compose_affine(&int(-1), &int(1)), Poly::from_ints(&[3, 4]));
        let p = Poly::from_ints(&[9, -6, 1]); // (3-t)^2
        assert_eq!(p.shift(&rat(1, 2)), Poly::new(vec![rat(25, 4), int(-5), int(1)]));
    }

    #[test]
    fn primitive_and_render() {
        let p = Poly::new(vec![rat(-4, 3), int(2)]);
        assert_eq!(p.primitive(), Poly::from_ints(&[-2, 3]));
        assert_eq!(Poly::from_ints(&[8, -6, 1]).render("t"), "t^2 - 6*t + 8");
        assert_eq!(Poly::from_ints(&[7, -4]).render("t"), "-4*t + 7");
    }

    #[test]
    fn sign_right_of_uses_derivatives() {
        let p = Poly::from_ints(&[-2, 1]); // x - 2
        assert_eq!(p.sign_right_of(&int(2)), Sign::Positive);
        let q = Poly::from_ints(&[4, -4, 1]); // (x-2)^2
        assert_eq!(q.sign_right_of(&int(2)), Sign::Positive);
        assert_eq!(Poly::zero().sign_right_of(&int(0)), Sign::Zero);
    }

    #[test]
    fn interval_enclosure_contains_values() {
        let p = Poly::from_ints(&[8, -6, 1]);
        let (lo, hi) = p.eval_interval(&int(1), &int(3));
        for x in [int(1), rat(3, 2), int(2), int(3)] {
            let v = p.eval(&x);
            assert!(lo <= v && v <= hi);
        }
    }
}
