//! Built-in surfaces and fans used by the tests, the acceptance suite and the
//! Python bindings.

use crate::exactnum::{int, Rat};
use crate::lattice::{DivisorClass, IntersectionLattice, SurfaceData};
use crate::toric::{TDivisor, ToricSurface};

fn gram(rows: &[&[i64]]) -> Vec<Vec<Rat>> {
    rows.iter().map(|r| r.iter().map(|&v| int(v)).collect()).collect()
}

fn labels(ls: &[&str]) -> Vec<String> {
    ls.iter().map(|s| s.to_string()).collect()
}

/// The blow-up `X` of `F_1 = P(O + O(1))` at a point of a section `C` with
/// `C² = 1`, in the basis `{π*C, π*f, E}`, with `D` the strict transform of `C`.
pub fn blown_up_f1() -> SurfaceData {
    let lattice = IntersectionLattice::new(
        labels(&["piC", "pif", "E"]),
        gram(&[&[1, 1, 0], &[1, 0, 0], &[0, 0, -1]]),
        2,
    )
    .expect("valid lattice");
    SurfaceData::new(
        lattice,
        DivisorClass::from_ints(&[-2, -1, 1]),
        DivisorClass::from_ints(&[1, 0, -1]),
        vec![
            DivisorClass::from_ints(&[0, 0, 1]),
            DivisorClass::from_ints(&[0, 1, -1]),
            DivisorClass::from_ints(&[1, -1, 0]),
        ],
    )
    .and_then(|s| s.with_labels(labels(&["E", "f-E", "C-f"])))
    .and_then(|s| {
        s.with_test_curves(vec![
            DivisorClass::from_ints(&[1, 0, -1]),
            DivisorClass::from_ints(&[0, 1, 0]),
        ])
    })
    .expect("valid surface")
}

/// `P²` with `D` a line.
pub fn projective_plane() -> SurfaceData {
    let lattice = IntersectionLattice::new(labels(&["H"]), gram(&[&[1]]), 2).expect("valid lattice");
    SurfaceData::new(
        lattice,
        DivisorClass::from_ints(&[-3]),
        DivisorClass::from_ints(&[1]),
        vec![],
    )
    .and_then(|s| s.with_test_curves(vec![DivisorClass::from_ints(&[1])]))
    .expect("valid surface")
}

/// `P¹×P¹` with `D` of bidegree (1,1).
pub fn p1_x_p1() -> SurfaceData {
    let lattice = IntersectionLattice::new(labels(&["F1", "F2"]), gram(&[&[0, 1], &[1, 0]]), 2)
        .expect("valid lattice");
    SurfaceData::new(
        lattice,
        DivisorClass::from_ints(&[-2, -2]),
        DivisorClass::from_ints(&[1, 1]),
        vec![],
    )
    .and_then(|s| {
        s.with_test_curves(vec![
            DivisorClass::from_ints(&[1, 0]),
            DivisorClass::from_ints(&[0, 1]),
        ])
    })
    .expect("valid surface")
}

/// Rank-one configuration with `D² = d` and `-K = l·D`.
pub fn rank_one(d: i64, l: Rat) -> SurfaceData {
    let lattice = IntersectionLattice::new(labels(&["D"]), gram(&[&[d]]), 2).expect("valid lattice");
    SurfaceData::new(
        lattice,
        DivisorClass(vec![-l]),
        DivisorClass::from_ints(&[1]),
        vec![],
    )
    .and_then(|s| s.with_test_curves(vec![DivisorClass::from_ints(&[1])]))
    .expect("valid surface")
}

/// `P²` with `D` a conic: `-K = (3/2) D`.
pub fn plane_conic() -> SurfaceData {
    rank_one(4, crate::exactnum::rat(3, 2))
}

/// Cubic-surface analog: a rank-one lattice with `K² = 3` and `D ~ -K`.
pub fn cubic_anticanonical() -> SurfaceData {
    rank_one(3, int(1))
}

/// Fan of the blown-up `F_1` above. Rays, counterclockwise:
/// `(1,0)` = f-E, `(0,1)` = C-f, `(-1,1)` = a general fiber, `(0,-1)` = D,
/// `(1,-1)` = E.
pub fn blown_up_f1_fan() -> (ToricSurface, TDivisor) {
    let t = ToricSurface::new(vec![(1, 0), (0, 1), (-1, 1), (0, -1), (1, -1)])
        .expect("valid fan");
    let d = TDivisor::from_ints(&[0, 0, 0, 1, 0]);
    (t, d)
}

/// Expresses the lattice basis `{π*C, π*f, E}` of [`blown_up_f1`] in the ray
/// divisors of [`blown_up_f1_fan`]: `π*C = D + E`, `π*f` = general fiber.
pub fn blown_up_f1_basis_in_rays() -> Vec<TDivisor> {
    vec![
        TDivisor::from_ints(&[0, 0, 0, 1, 1]),
        TDivisor::from_ints(&[0, 0, 1, 0, 0]),
        TDivisor::from_ints(&[0, 0, 0, 0, 1]),
    ]
}

pub fn projective_plane_fan() -> (ToricSurface, TDivisor) {
    let t = ToricSurface::new(vec![(1, 0), (0, 1), (-1, -1)]).expect("valid fan");
    (t, TDivisor::from_ints(&[0, 0, 1]))
}

pub fn p1_x_p1_fan() -> (ToricSurface, TDivisor) {
    let t = ToricSurface::new(vec![(1, 0), (0, 1), (-1, 0), (0, -1)]).expect("valid fan");
    (t, TDivisor::from_ints(&[1, 1, 0, 0]))
}
