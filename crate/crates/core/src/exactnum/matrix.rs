//! Dense exact matrices over the rationals. Sizes here are tiny (Gram matrices
//! of a handful of curves, companion matrices of quadratics), so everything is
//! plain Gaussian elimination.

use super::poly::Poly;
use super::rat::Rat;
use num_traits::{One, Zero};

pub type Matrix = Vec<Vec<Rat>>;

pub fn identity(n: usize) -> Matrix {
    (0..n)
        .map(|i| (0..n).map(|j| if i == j { Rat::one() } else { Rat::zero() }).collect())
        .collect()
}

pub fn mat_mul(a: &Matrix, b: &Matrix) -> Matrix {
    let n = a.len();
    let m = b.first().map_or(0, Vec::len);
    let k = b.len();
    (0..n)
        .map(|i| {
            (0..m)
                .map(|j| (0..k).fold(Rat::zero(), |acc, l| acc + &a[i][l] * &b[l][j]))
                .collect()
        })
        .collect()
}

pub fn is_symmetric(a: &Matrix) -> bool {
    a.iter()
        .enumerate()
        .all(|(i, row)| row.iter().enumerate().all(|(j, v)| *v == a[j][i]))
}

/// Sylvester-style test via symmetric elimination without pivoting: a symmetric
/// matrix is negative definite iff every pivot is strictly negative.
pub fn is_negative_definite(a: &Matrix) -> bool {
    let n = a.len();
    let mut m = a.clone();
    for k in 0..n {
        if m[k][k] >= Rat::zero() {
            return false;
        }
        for i in k + 1..n {
            let f = &m[i][k] / &m[k][k];
            for j in k..n {
                let d = &f * &m[k][j];
                m[i][j] -= d;
            }
        }
    }
    true
}

/// Inverse by Gauss-Jordan; `None` when singular.
pub fn inverse(a: &Matrix) -> Option<Matrix> {
    let n = a.len();
    let mut m: Matrix = a
        .iter()
        .zip(identity(n))
        .map(|(row, id)| row.iter().cloned().chain(id).collect())
        .collect();
    for col in 0..n {
        let piv = (col..n).find(|&r| !m[r][col].is_zero())?;
        m.swap(col, piv);
        let p = m[col][col].clone();
        for v in m[col].iter_mut() {
            *v /= &p;
        }
        for r in 0..n {
            if r != col && !m[r][col].is_zero() {
                let f = m[r][col].clone();
                for c in 0..2 * n {
                    let d = &f * &m[col][c];
                    m[r][c] -= d;
                }
            }
        }
    }
    Some(m.into_iter().map(|row| row[n..].to_vec()).collect())
}

/// Characteristic polynomial `det(y I - A)` by Faddeev-LeVerrier.
pub fn charpoly(a: &Matrix) -> Poly {
    let n = a.len();
    let mut coeffs = vec![Rat::zero(); n + 1];
    coeffs[n] = Rat::one();
    let mut m = vec![vec![Rat::zero(); n]; n];
    for k in 1..=n {
        // M_k = A M_{k-1} + c_{n-k+1} I
        let mut next = mat_mul(a, &m);
        for (i, row) in next.iter_mut().enumerate() {
            row[i] += &coeffs[n - k + 1];
        }
        let am = mat_mul(a, &next);
        let tr = (0..n).fold(Rat::zero(), |acc, i| acc + &am[i][i]);
        coeffs[n - k] = -tr / Rat::from_integer(k.into());
        m = next;
    }
    Poly::new(coeffs)
}

/// Companion matrix of a nonconstant polynomial (made monic).
pub fn companion(p: &Poly) -> Matrix {
    let p = p.monic();
    let d = p.degree().expect("companion of zero polynomial");
    let mut m = vec![vec![Rat::zero(); d]; d];
    for i in 1..d {
        m[i][i - 1] = Rat::one();
    }
    for (i, row) in m.iter_mut().enumerate() {
        row[d - 1] = -p.coeff(i);
    }
    m
}

pub fn kronecker(a: &Matrix, b: &Matrix) -> Matrix {
    let (n, m) = (a.len(), b.len());
    let mut out = vec![vec![Rat::zero(); n * m]; n * m];
    for i in 0..n {
        for j in 0..n {
            for k in 0..m {
                for l in 0..m {
                    out[i * m + k][j * m + l] = &a[i][j] * &b[k][l];
                }
            }
        }
    }
    out
}

/// Matrix of multiplication by `g` on `Q[x]/(p)` in the monomial basis.
pub fn multiplication_matrix(p: &Poly, g: &Poly) -> Matrix {
    let d = p.degree().expect("modulus must be nonconstant");
    let mut m = vec![vec![Rat::zero(); d]; d];
    let mut xi = Poly::one();
    for j in 0..d {
        let col = (g * &xi).rem(p);
        for (i, row) in m.iter_mut().enumerate() {
            row[j] = col.coeff(i);
        }
        xi = &xi * &Poly::x();
    }
    m
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactnum::rat::int;

    fn m(rows: &[&[i64]]) -> Matrix {
        rows.iter().map(|r| r.iter().map(|&v| int(v)).collect()).collect()
    }

    #[test]
    fn definiteness() {
        assert!(is_negative_definite(&m(&[&[-1]])));
        assert!(is_negative_definite(&m(&[&[-2, 1], &[1, -2]])));
        // {E, f-E} on the blown-up F1: singular
        assert!(!is_negative_definite(&m(&[&[-1, 1], &[1, -1]])));
        assert!(!is_negative_definite(&m(&[&[0]])));
    }

    #[test]
    fn inverse_roundtrip() {
        let a = m(&[&[-2, 1], &[1, -3]]);
        let inv = inverse(&a).unwrap();
        assert_eq!(mat_mul(&a, &inv), identity(2));
        assert!(inverse(&m(&[&[1, 1], &[1, 1]])).is_none());
    }

    #[test]
    fn charpoly_of_companion_recovers_poly() {
        let p = Poly::from_ints(&[-2, 0, 3]); // 3x^2 - 2
        assert_eq!(charpoly(&companion(&p)), p.monic());
        let q = Poly::from_ints(&[6, -5, 1]);
        let k = kronecker(&companion(&q), &identity(2));
        assert_eq!(charpoly(&k), (&q * &q).monic());
    }
}
