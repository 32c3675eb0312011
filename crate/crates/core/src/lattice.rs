//! Divisor classes on a Picard lattice with a rational intersection pairing.

use crate::error::{Error, Result};
use crate::exactnum::{matrix, Rat};
use num_traits::Zero;
use std::ops::{Add, Neg, Sub};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IntersectionLattice {
    pub basis_labels: Vec<String>,
    pub gram: Vec<Vec<Rat>>,
    pub dimension_n: usize,
}

impl IntersectionLattice {
    pub fn new(basis_labels: Vec<String>, gram: Vec<Vec<Rat>>, dimension_n: usize) -> Result<Self> {
        let r = basis_labels.len();
        if gram.len() != r || gram.iter().any(|row| row.len() != r) {
            return Err(Error::InvalidInput(format!(
                "gram must be {r}x{r} to match the basis"
            )));
        }
        if !matrix::is_symmetric(&gram) {
            return Err(Error::InvalidInput("gram is not symmetric".into()));
        }
        if dimension_n == 0 {
            return Err(Error::InvalidInput("dimension must be positive".into()));
        }
        Ok(IntersectionLattice { basis_labels, gram, dimension_n })
    }

    pub fn rank(&self) -> usize {
        self.basis_labels.len()
    }

    pub fn check(&self, a: &DivisorClass) -> Result<()> {
        if a.0.len() != self.rank() {
            return Err(Error::RankMismatch { expected: self.rank(), got: a.0.len() });
        }
        Ok(())
    }

    /// `Aᵀ · gram · B`
    pub fn intersect(&self, a: &DivisorClass, b: &DivisorClass) -> Result<Rat> {
        self.check(a)?;
        self.check(b)?;
        Ok(self.pair(&a.0, &b.0))
    }

    /// Unchecked pairing of raw coefficient slices.
    pub(crate) fn pair(&self, a: &[Rat], b: &[Rat]) -> Rat {
        let mut acc = Rat::zero();
        for (i, ai) in a.iter().enumerate() {
            if ai.is_zero() {
                continue;
            }
            for (j, bj) in b.iter().enumerate() {
                if !bj.is_zero() {
                    acc += ai * &self.gram[i][j] * bj;
                }
            }
        }
        acc
    }
}

/// Coefficient vector of a ℚ-divisor class over the lattice basis.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct DivisorClass(pub Vec<Rat>);

impl DivisorClass {
    pub fn zero(rank: usize) -> DivisorClass {
        DivisorClass(vec![Rat::zero(); rank])
    }

    pub fn from_ints(cs: &[i64]) -> DivisorClass {
        DivisorClass(cs.iter().map(|&c| Rat::from_integer(c.into())).collect())
    }

    pub fn basis(rank: usize, i: usize) -> DivisorClass {
        let mut v = DivisorClass::zero(rank);
        v.0[i] = Rat::from_integer(1.into());
        v
    }

    pub fn coeffs(&self) -> &[Rat] {
        &self.0
    }

    pub fn scale(&self, c: &Rat) -> DivisorClass {
        DivisorClass(self.0.iter().map(|a| a * c).collect())
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(Zero::is_zero)
    }
}

impl Add for &DivisorClass {
    type Output = DivisorClass;
    fn add(self, rhs: &DivisorClass) -> DivisorClass {
        DivisorClass(self.0.iter().zip(&rhs.0).map(|(a, b)| a + b).collect())
    }
}

impl Sub for &DivisorClass {
    type Output = DivisorClass;
    fn sub(self, rhs: &DivisorClass) -> DivisorClass {
        DivisorClass(self.0.iter().zip(&rhs.0).map(|(a, b)| a - b).collect())
    }
}

impl Neg for &DivisorClass {
    type Output = DivisorClass;
    fn neg(self) -> DivisorClass {
        DivisorClass(self.0.iter().map(|a| -a).collect())
    }
}

/// A smooth projective surface described by its numerical data.
///
/// `negative_curves` are irreducible curves with negative self-intersection;
/// they are the only candidates for negative parts of Zariski decompositions.
/// `test_curves` are further irreducible curves (self-intersection ≥ 0) that
/// only take part in nefness checks. Nefness is always relative to these two
/// lists.
#[derive(Clone, Debug)]
pub struct SurfaceData {
    pub lattice: IntersectionLattice,
    pub canonical: DivisorClass,
    pub boundary: DivisorClass,
    pub negative_curves: Vec<DivisorClass>,
    pub curve_labels: Vec<String>,
    pub test_curves: Vec<DivisorClass>,
    /// Reference ample class separating the two halves of the positive cone;
    /// `-K_X` when absent.
    pub ample: Option<DivisorClass>,
}

pub const NEF_CAVEAT: &str =
    "nefness and ampleness are certified only against the supplied curve list";

impl SurfaceData {
    pub fn new(
        lattice: IntersectionLattice,
        canonical: DivisorClass,
        boundary: DivisorClass,
        negative_curves: Vec<DivisorClass>,
    ) -> Result<SurfaceData> {
        let labels = (0..negative_curves.len()).map(|i| format!("C{i}")).collect();
        SurfaceData {
            lattice,
            canonical,
            boundary,
            negative_curves,
            curve_labels: labels,
            test_curves: Vec::new(),
            ample: None,
        }
        .validated()
    }

    pub fn with_test_curves(mut self, curves: Vec<DivisorClass>) -> Result<SurfaceData> {
        self.test_curves = curves;
        self.validated()
    }

    pub fn with_labels(mut self, labels: Vec<String>) -> Result<SurfaceData> {
        self.curve_labels = labels;
        self.validated()
    }

    pub fn with_ample(mut self, ample: DivisorClass) -> Result<SurfaceData> {
        self.ample = Some(ample);
        self.validated()
    }

    fn validated(self) -> Result<SurfaceData> {
        let l = &self.lattice;
        if l.dimension_n != 2 {
            return Err(Error::InvalidInput("surface data needs dimension 2".into()));
        }
        l.check(&self.canonical)?;
        l.check(&self.boundary)?;
        if self.boundary.is_zero() {
            return Err(Error::InvalidInput("boundary divisor D must be nonzero".into()));
        }
        if self.curve_labels.len() != self.negative_curves.len() {
            return Err(Error::InvalidInput("one label per negative curve".into()));
        }
        for (i, c) in self.negative_curves.iter().enumerate() {
            if l.intersect(c, c)? >= Rat::zero() {
                return Err(Error::InvalidInput(format!(
                    "negative curve {} has non-negative self-intersection",
                    self.curve_labels[i]
                )));
            }
        }
        for c in &self.test_curves {
            l.check(c)?;
        }
        if let Some(h) = &self.ample {
            l.check(h)?;
        }
        Ok(self)
    }

    pub fn anticanonical(&self) -> DivisorClass {
        -&self.canonical
    }

    pub fn ample_reference(&self) -> DivisorClass {
        self.ample.clone().unwrap_or_else(|| self.anticanonical())
    }

    pub fn intersect(&self, a: &DivisorClass, b: &DivisorClass) -> Result<Rat> {
        self.lattice.intersect(a, b)
    }

    /// Every curve that takes part in nefness tests.
    pub fn all_curves(&self) -> impl Iterator<Item = &DivisorClass> {
        self.negative_curves.iter().chain(&self.test_curves)
    }

    /// `A·C ≥ 0` for every listed curve.
    pub fn is_nef_against(&self, a: &DivisorClass) -> bool {
        self.lattice.check(a).is_ok()
            && self
                .all_curves()
                .all(|c| self.lattice.pair(&a.0, &c.0) >= Rat::zero())
    }

    /// Nakai-Moishezon relative to the listed curves: `A² > 0` and `A·C > 0`.
    pub fn is_ample_against(&self, a: &DivisorClass) -> bool {
        self.lattice.check(a).is_ok()
            && self.lattice.pair(&a.0, &a.0) > Rat::zero()
            && self
                .all_curves()
                .all(|c| self.lattice.pair(&a.0, &c.0) > Rat::zero())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::builtins;
    use crate::exactnum::int;

    #[test]
    fn anticanonical_degree_of_blown_up_f1() {
        let s = builtins::blown_up_f1();
        let mk = s.anticanonical();
        assert_eq!(s.intersect(&mk, &mk).unwrap(), int(7));
        assert_eq!(s.intersect(&s.boundary, &s.boundary).unwrap(), int(0));
        let e = DivisorClass::from_ints(&[0, 0, 1]);
        assert_eq!(s.intersect(&e, &e).unwrap(), int(-1));
    }

    #[test]
    fn rank_mismatch_is_reported() {
        let s = builtins::blown_up_f1();
        let bad = DivisorClass::from_ints(&[1, 2]);
        assert!(matches!(
            s.intersect(&bad, &bad),
            Err(Error::RankMismatch { expected: 3, got: 2 })
        ));
    }

    #[test]
    fn nefness_against_curve_list() {
        let s = builtins::blown_up_f1();
        assert!(s.is_nef_against(&DivisorClass::zero(3)));
        assert!(s.is_nef_against(&s.anticanonical()));
        assert!(!s.is_nef_against(&DivisorClass::from_ints(&[0, 0, -1])));
        assert!(s.is_ample_against(&s.anticanonical()));
    }

    #[test]
    fn rejects_non_negative_curve() {
        let l = IntersectionLattice::new(vec!["H".into()], vec![vec![int(1)]], 2).unwrap();
        let h = DivisorClass::from_ints(&[1]);
        let err = SurfaceData::new(l, DivisorClass::from_ints(&[-3]), h.clone(), vec![h]);
        assert!(err.is_err());
    }

    #[test]
    fn rejects_zero_boundary() {
        let l = IntersectionLattice::new(vec!["H".into()], vec![vec![int(1)]], 2).unwrap();
        let err = SurfaceData::new(l, DivisorClass::from_ints(&[-3]), DivisorClass::zero(1), vec![]);
        assert!(err.is_err());
    }
}
