//! Smooth complete toric surfaces: intersection numbers from the fan, section
//! counts by lattice-point enumeration, and the weight sums `v(k)`, `w(k)` of
//! the filtration by multiples of a torus-invariant divisor.

use crate::error::{Error, Result};
use crate::exactnum::{floor, int, matrix, Rat};
use crate::lattice::{DivisorClass, IntersectionLattice, SurfaceData};
use num_integer::Integer;
use num_traits::{ToPrimitive, Zero};
use rayon::prelude::*;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ToricSurface {
    rays: Vec<(i64, i64)>,
    self_int: Vec<i64>,
}

fn det(a: (i64, i64), b: (i64, i64)) -> i64 {
    a.0 * b.1 - a.1 * b.0
}

impl ToricSurface {
    /// Rays must be primitive, listed counterclockwise, with every pair of
    /// consecutive rays (cyclically) spanning a unimodular cone and the cones
    /// going around the origin exactly once.
    pub fn new(rays: Vec<(i64, i64)>) -> Result<ToricSurface> {
        let m = rays.len();
        if m < 3 {
            return Err(Error::InvalidInput("a complete fan needs at least 3 rays".into()));
        }
        for &(a, b) in &rays {
            if a.gcd(&b) != 1 {
                return Err(Error::InvalidInput(format!("ray ({a},{b}) is not primitive")));
            }
        }
        let mut winding = 0.0;
        for i in 0..m {
            let (u, v) = (rays[i], rays[(i + 1) % m]);
            if det(u, v) != 1 {
                return Err(Error::InvalidInput(format!(
                    "cone spanned by rays {i} and {} is not unimodular and counterclockwise",
                    (i + 1) % m
                )));
            }
            let dot = (u.0 * v.0 + u.1 * v.1) as f64;
            winding += (det(u, v) as f64).atan2(dot);
        }
        if (winding - std::f64::consts::TAU).abs() > 1e-6 {
            return Err(Error::UnboundedPolytope(
                "rays wind around the origin more than once".into(),
            ));
        }
        let self_int = (0..m)
            .map(|i| {
                let (p, c, n) = (rays[(i + m - 1) % m], rays[i], rays[(i + 1) % m]);
                let w = (p.0 + n.0, p.1 + n.1);
                -((w.0 * c.0 + w.1 * c.1) / (c.0 * c.0 + c.1 * c.1))
            })
            .collect();
        Ok(ToricSurface { rays, self_int })
    }

    pub fn rays(&self) -> &[(i64, i64)] {
        &self.rays
    }

    pub fn ray_count(&self) -> usize {
        self.rays.len()
    }

    /// Pairings of the ray divisors: `D_i² = -a_i` where
    /// `v_{i-1} + v_{i+1} = a_i v_i`, `1` for neighbours, `0` otherwise.
    pub fn intersection_matrix(&self) -> matrix::Matrix {
        let m = self.ray_count();
        (0..m)
            .map(|i| {
                (0..m)
                    .map(|j| {
                        if i == j {
                            int(self.self_int[i])
                        } else if (i + 1) % m == j || (j + 1) % m == i {
                            int(1)
                        } else {
                            Rat::zero()
                        }
                    })
                    .collect()
            })
            .collect()
    }

    pub fn canonical(&self) -> TDivisor {
        TDivisor(vec![int(-1); self.ray_count()])
    }

    /// Surface data over the (redundant) basis of ray divisors. Rays with
    /// negative self-intersection become negative curves; the rest are test
    /// curves. Torus-invariant curves generate the cone of curves, so nefness
    /// here is exact.
    pub fn to_surface_data(&self, d: &TDivisor) -> Result<SurfaceData> {
        self.check(d)?;
        let m = self.ray_count();
        let labels: Vec<String> = (0..m).map(|i| format!("D{i}")).collect();
        let lattice = IntersectionLattice::new(labels.clone(), self.intersection_matrix(), 2)?;
        let basis = |i| DivisorClass::basis(m, i);
        let (neg, rest): (Vec<usize>, Vec<usize>) = (0..m).partition(|&i| self.self_int[i] < 0);
        SurfaceData::new(
            lattice,
            DivisorClass(self.canonical().0),
            DivisorClass(d.0.clone()),
            neg.iter().map(|&i| basis(i)).collect(),
        )?
        .with_labels(neg.iter().map(|&i| labels[i].clone()).collect())?
        .with_test_curves(rest.iter().map(|&i| basis(i)).collect())
    }

    fn check(&self, a: &TDivisor) -> Result<()> {
        if a.0.len() != self.ray_count() {
            return Err(Error::RankMismatch { expected: self.ray_count(), got: a.0.len() });
        }
        Ok(())
    }
}

/// Torus-invariant ℚ-divisor, one coefficient per ray.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TDivisor(pub Vec<Rat>);

impl TDivisor {
    pub fn from_ints(cs: &[i64]) -> TDivisor {
        TDivisor(cs.iter().map(|&c| int(c)).collect())
    }

    pub fn scale(&self, c: &Rat) -> TDivisor {
        TDivisor(self.0.iter().map(|a| a * c).collect())
    }

    pub fn sub(&self, other: &TDivisor) -> TDivisor {
        TDivisor(self.0.iter().zip(&other.0).map(|(a, b)| a - b).collect())
    }

    pub fn add(&self, other: &TDivisor) -> TDivisor {
        TDivisor(self.0.iter().zip(&other.0).map(|(a, b)| a + b).collect())
    }

    pub fn is_integral(&self) -> bool {
        self.0.iter().all(|c| c.is_integer())
    }
}

fn div_floor(a: i64, b: i64) -> i64 {
    Integer::div_floor(&a, &b)
}

fn div_ceil(a: i64, b: i64) -> i64 {
    -div_floor(-a, b)
}

/// Number of `m ∈ ℤ²` with `⟨m, v_ρ⟩ ≥ -⌊a_ρ⌋` for every ray.
pub fn count_sections(t: &ToricSurface, a: &TDivisor) -> Result<u64> {
    t.check(a)?;
    let cons: Vec<(i64, i64, i64)> = t
        .rays
        .iter()
        .zip(&a.0)
        .map(|(&(p, q), c)| {
            let f = floor(c)
                .to_i64()
                .ok_or_else(|| Error::Computation("divisor coefficient out of range".into()))?;
            Ok((p, q, -f))
        })
        .collect::<Result<_>>()?;
    let feasible = |x: &Rat, y: &Rat| {
        cons.iter()
            .all(|&(p, q, c)| int(p) * x + int(q) * y >= int(c))
    };
    // Vertices of the polygon lie on pairwise intersections of boundary lines.
    let mut xs: Vec<Rat> = Vec::new();
    for (i, &(p1, q1, c1)) in cons.iter().enumerate() {
        for &(p2, q2, c2) in &cons[i + 1..] {
            let dt = p1 * q2 - p2 * q1;
            if dt == 0 {
                continue;
            }
            let x = Rat::new((c1 * q2 - c2 * q1).into(), dt.into());
            let y = Rat::new((p1 * c2 - p2 * c1).into(), dt.into());
            if feasible(&x, &y) {
                xs.push(x);
            }
        }
    }
    let (Some(lo), Some(hi)) = (xs.iter().min(), xs.iter().max()) else {
        return Ok(0);
    };
    let x_lo = crate::exactnum::ceil(lo).to_i64().expect("small");
    let x_hi = floor(hi).to_i64().expect("small");
    let mut total = 0u64;
    for x in x_lo..=x_hi {
        let mut y_lo = i64::MIN;
        let mut y_hi = i64::MAX;
        let mut ok = true;
        for &(p, q, c) in &cons {
            let rhs = c - p * x;
            match q.signum() {
                1 => y_lo = y_lo.max(div_ceil(rhs, q)),
                -1 => y_hi = y_hi.min(div_floor(-rhs, -q)),
                _ => ok &= rhs <= 0,
            }
        }
        if !ok {
            continue;
        }
        if y_lo == i64::MIN || y_hi == i64::MAX {
            return Err(Error::UnboundedPolytope(format!("column x = {x} is unbounded")));
        }
        if y_hi >= y_lo {
            total += (y_hi - y_lo + 1) as u64;
        }
    }
    Ok(total)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WeightTable {
    pub k: u64,
    pub h0_by_j: Vec<u64>,
    pub v_k: u64,
    pub w_k: Rat,
}

/// Section counts `h⁰(kL - jD)` for `j = 0..=⌊k·rτ⌋`, with
/// `v(k) = Σ_{j≥1} h⁰` and `w(k) = -k·rτ·h⁰(kL) + v(k)`.
pub fn weight_table(
    t: &ToricSurface,
    l_beta: &TDivisor,
    d: &TDivisor,
    r_tau_beta: &Rat,
    k: u64,
) -> Result<WeightTable> {
    t.check(l_beta)?;
    t.check(d)?;
    if k == 0 {
        return Ok(WeightTable { k, h0_by_j: vec![1], v_k: 0, w_k: Rat::zero() });
    }
    let kr = int(k as i64);
    let kl = l_beta.scale(&kr);
    if !kl.is_integral() {
        return Err(Error::NonIntegral(format!("k·L_beta is not integral at k = {k}")));
    }
    let j_max = floor(&(&kr * r_tau_beta))
        .to_i64()
        .filter(|j| *j >= 0)
        .ok_or_else(|| Error::InvalidInput("r·tau_beta must be non-negative".into()))?;
    let h0_by_j = (0..=j_max)
        .into_par_iter()
        .map(|j| count_sections(t, &kl.sub(&d.scale(&int(j)))))
        .collect::<Result<Vec<u64>>>()?;
    let v_k: u64 = h0_by_j[1..].iter().sum();
    let w_k = -(kr * r_tau_beta) * int(h0_by_j[0] as i64) + int(v_k as i64);
    Ok(WeightTable { k, h0_by_j, v_k, w_k })
}

/// Smallest period clearing every floor in the table: the lcm of the
/// denominators of `L_β` and `rτ_β`.
pub fn congruence_period(l_beta: &TDivisor, r_tau_beta: &Rat) -> u64 {
    crate::exactnum::lcm_denominators(l_beta.0.iter().chain(std::iter::once(r_tau_beta)))
        .to_u64()
        .expect("small period")
}

/// Exact least-squares cubic fit of `v(k)` over the upper half of the tables
/// in the congruence class (mod `period`) of the largest `k`; returns the
/// `k³` and `k²` coefficients.
pub fn fit_leading_coeffs(tables: &[WeightTable], period: u64) -> Result<(Rat, Rat)> {
    let period = period.max(1);
    let k_max = tables
        .iter()
        .map(|t| t.k)
        .max()
        .ok_or_else(|| Error::InsufficientData("no tables".into()))?;
    let mut ks: Vec<&WeightTable> = tables.iter().filter(|t| t.k % period == k_max % period).collect();
    ks.sort_by_key(|t| t.k);
    ks.dedup_by_key(|t| t.k);
    if k_max < 20 {
        return Err(Error::InsufficientData(format!("largest k is {k_max}, need at least 20")));
    }
    let upper = &ks[ks.len() / 2..];
    if upper.len() < 4 {
        return Err(Error::InsufficientData(format!(
            "{} usable tables in the upper half, need at least 4",
            upper.len()
        )));
    }
    // Normal equations for v ≈ c3 k³ + c2 k² + c1 k + c0.
    let mut ata = vec![vec![Rat::zero(); 4]; 4];
    let mut atb = vec![Rat::zero(); 4];
    for t in upper {
        let k = int(t.k as i64);
        let row = [&k * &k * &k, &k * &k, k.clone(), int(1)];
        let v = int(t.v_k as i64);
        for i in 0..4 {
            for j in 0..4 {
                ata[i][j] += &row[i] * &row[j];
            }
            atb[i] += &row[i] * &v;
        }
    }
    let inv = matrix::inverse(&ata).ok_or_else(|| Error::Computation("singular fit".into()))?;
    let coef: Vec<Rat> = inv
        .iter()
        .map(|r| r.iter().zip(&atb).fold(Rat::zero(), |a, (x, y)| a + x * y))
        .collect();
    Ok((coef[0].clone(), coef[1].clone()))
}
