//! The invariant η_β(D), its split into η₊ and η₋, sign verdicts, the set of
//! destabilizing cone angles, and the Donaldson-Futaki coefficients of the
//! test configuration built from the filtration by multiples of `D`.

use crate::error::{Error, Result};
use crate::exactnum::{fmt_rat, int, isolate_roots, lcm_denominators, AlgReal, PiecewisePoly, Poly, Rat, Sign};
use crate::lattice::{DivisorClass, SurfaceData};
use crate::zariski::{check_beta, GeographyBundle, VolumeProfile};
use num_traits::{One, ToPrimitive, Zero};
use serde::Serialize;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub enum Verdict {
    #[serde(rename = "NOT_LOG_K_SEMISTABLE")]
    NotLogKSemistable,
    #[serde(rename = "NOT_LOG_K_STABLE_SEMISTABILITY_UNDECIDED")]
    NotLogKStableSemistabilityUndecided,
    #[serde(rename = "NECESSARY_CONDITION_PASSED_UNDECIDED")]
    NecessaryConditionPassedUndecided,
}

impl Verdict {
    pub fn from_sign(s: Sign) -> Verdict {
        match s {
            Sign::Negative => Verdict::NotLogKSemistable,
            Sign::Zero => Verdict::NotLogKStableSemistabilityUndecided,
            Sign::Positive => Verdict::NecessaryConditionPassedUndecided,
        }
    }

    pub fn as_str(self) -> &'static str {
        match self {
            Verdict::NotLogKSemistable => "NOT_LOG_K_SEMISTABLE",
            Verdict::NotLogKStableSemistabilityUndecided => "NOT_LOG_K_STABLE_SEMISTABILITY_UNDECIDED",
            Verdict::NecessaryConditionPassedUndecided => "NECESSARY_CONDITION_PASSED_UNDECIDED",
        }
    }

    pub fn explanation(self) -> &'static str {
        match self {
            Verdict::NotLogKSemistable => {
                "eta < 0: the pair is not log K-semistable at this angle, so it carries no Kähler-Einstein edge metric"
            }
            Verdict::NotLogKStableSemistabilityUndecided => {
                "eta = 0: the pair is not log K-stable; semistability is not decided by this test"
            }
            Verdict::NecessaryConditionPassedUndecided => {
                "eta > 0: the necessary condition holds; stability is not decided by this test"
            }
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EtaResult {
    pub beta: Rat,
    pub value: AlgReal,
    pub eta_plus: AlgReal,
    pub eta_minus: AlgReal,
    pub sign: Sign,
    pub verdict: Verdict,
    pub eta_as_poly_in_beta: Option<PiecewisePoly>,
}

pub fn verdict(e: &EtaResult) -> Verdict {
    Verdict::from_sign(e.sign)
}

/// η, η₊ and η₋ as exact functions of β on `(max(0, 1 - τ), 1]`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EtaPolynomials {
    pub eta: PiecewisePoly,
    pub eta_plus: PiecewisePoly,
    pub eta_minus: Rat,
}

fn min_alg(a: AlgReal, b: AlgReal) -> AlgReal {
    if a <= b {
        a
    } else {
        b
    }
}

/// `β·V(1-β) - ∫_{1-β}^τ V(t) dt` with the split at `t = min(1, τ)`.
pub fn eta(p: &VolumeProfile, beta: &Rat) -> Result<EtaResult> {
    check_beta(beta)?;
    let u = Rat::one() - beta;
    if p.tau.cmp_rat(&u).is_le() {
        return Err(Error::NotBig(fmt_rat(beta)));
    }
    let v_u = p.volume_at(&u).expect("u inside the profile");
    let head = beta * v_u;
    let ua: AlgReal = u.into();
    let c = min_alg(AlgReal::from_rat(Rat::one()), p.tau.clone());
    let total = p.volume.integrate(&ua, &p.tau, true)?;
    let eta_plus = p.volume.integrate(&ua, &c, true)?.neg().add_rat(&head);
    let eta_minus = p.volume.integrate(&c, &p.tau, true)?;
    let value = total.neg().add_rat(&head);
    debug_assert_eq!(value, eta_plus.sub(&eta_minus));
    let sign = value.sign();
    Ok(EtaResult {
        beta: beta.clone(),
        eta_plus,
        eta_minus,
        sign,
        verdict: Verdict::from_sign(sign),
        eta_as_poly_in_beta: eta_polynomials(p).ok().map(|e| e.eta),
        value,
    })
}

/// Exact β-polynomials of η and η₊; needs rational chamber walls.
pub fn eta_polynomials(p: &VolumeProfile) -> Result<EtaPolynomials> {
    let breaks = p.rational_breaks().ok_or(Error::AlgebraicWalls)?;
    let tau = breaks.last().expect("nonempty").clone();
    let c = tau.clone().min(Rat::one());
    let integral = |a: &Rat, b: &Rat| -> Result<Rat> {
        let v = p.volume.integrate(&a.clone().into(), &b.clone().into(), true)?;
        Ok(v.as_rat().expect("rational limits").clone())
    };
    let eta_minus = integral(&c, &tau)?;
    let reflect = |q: &Poly| q.compose_affine(&-Rat::one(), &Rat::one());
    let mut beta_breaks: Vec<AlgReal> = Vec::new();
    let mut eta_pieces = Vec::new();
    let mut plus_pieces = Vec::new();
    for i in (0..p.chamber_count()).rev() {
        let b_lo = &breaks[i];
        if *b_lo >= c {
            continue;
        }
        let e = breaks[i + 1].clone().min(c.clone());
        let v = &p.volume.pieces()[i];
        let f = v.antiderivative();
        let moving = &(&Poly::x() * &reflect(v)) + &reflect(&f);
        let fixed = f.eval(&e);
        let plus_tail = &fixed + integral(&e, &c)?;
        let eta_tail = &fixed + integral(&e, &tau)?;
        plus_pieces.push(&moving - &Poly::constant(plus_tail));
        eta_pieces.push(&moving - &Poly::constant(eta_tail));
        if beta_breaks.is_empty() {
            beta_breaks.push((Rat::one() - &e).into());
        }
        beta_breaks.push((Rat::one() - b_lo).into());
    }
    Ok(EtaPolynomials {
        eta: PiecewisePoly::new(beta_breaks.clone(), eta_pieces)?,
        eta_plus: PiecewisePoly::new(beta_breaks, plus_pieces)?,
        eta_minus,
    })
}

/// `n/(n+1) · vol · (β - (l-1)/n)` for `-K_X ∼ l·D`.
pub fn eta_closed_form(n: usize, l: &Rat, vol_at_beta: &Rat, beta: &Rat) -> Rat {
    let n = int(n as i64);
    &n / (&n + Rat::one()) * vol_at_beta * (beta - (l - Rat::one()) / &n)
}

/// A β-interval with algebraic endpoints.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BetaInterval {
    pub lo: AlgReal,
    pub hi: AlgReal,
    pub lo_closed: bool,
    pub hi_closed: bool,
}

impl BetaInterval {
    pub fn contains(&self, b: &Rat) -> bool {
        let lo = self.lo.cmp_rat(b);
        let hi = self.hi.cmp_rat(b);
        (lo.is_lt() || (self.lo_closed && lo.is_eq())) && (hi.is_gt() || (self.hi_closed && hi.is_eq()))
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum DestabilizingSet {
    /// Exact union of intervals where η_β < 0.
    Exact(Vec<BetaInterval>),
    /// Exact signs of η at grid points, used when the walls are irrational.
    Grid(Vec<(Rat, Sign)>),
}

pub const DEFAULT_GRID: u32 = 100;

/// `{β ∈ (0, 1] : η_β(D) < 0}`.
pub fn destabilizing_betas(p: &VolumeProfile) -> Result<DestabilizingSet> {
    match eta_polynomials(p) {
        Ok(polys) => Ok(DestabilizingSet::Exact(negative_intervals(&polys.eta))),
        Err(Error::AlgebraicWalls) => destabilizing_grid(p, DEFAULT_GRID),
        Err(e) => Err(e),
    }
}

pub fn destabilizing_grid(p: &VolumeProfile, steps: u32) -> Result<DestabilizingSet> {
    let mut out = Vec::new();
    for k in 1..=steps {
        let b = Rat::new(k.into(), steps.into());
        if p.tau.cmp_rat(&(Rat::one() - &b)).is_gt() {
            out.push((b.clone(), eta(p, &b)?.sign));
        }
    }
    Ok(DestabilizingSet::Grid(out))
}

/// Intervals inside `(start, end]` where `f < 0`; the left end of the domain
/// is always excluded.
fn negative_intervals(f: &PiecewisePoly) -> Vec<BetaInterval> {
    let mut crit: Vec<AlgReal> = f.breakpoints().to_vec();
    for (i, piece) in f.pieces().iter().enumerate() {
        if piece.is_zero() {
            continue;
        }
        let (lo, hi) = f.piece_interval(i);
        let (lo, hi) = (lo.as_rat().expect("rational"), hi.as_rat().expect("rational"));
        crit.extend(isolate_roots(piece, lo, hi));
    }
    crit.sort();
    crit.dedup();
    let sign_at = |x: &AlgReal| -> Sign {
        let idx = (0..f.pieces().len())
            .find(|&i| f.piece_interval(i).1 >= x)
            .unwrap_or(f.pieces().len() - 1);
        f.pieces()[idx].eval_at(x).sign()
    };
    let point_neg: Vec<bool> = crit
        .iter()
        .enumerate()
        .map(|(i, x)| i > 0 && sign_at(x) == Sign::Negative)
        .collect();
    let gap_neg: Vec<bool> = crit
        .windows(2)
        .map(|w| {
            let m = w[0].rational_between(&w[1]);
            f.eval(&m).map(|v| v < Rat::zero()).unwrap_or(false)
        })
        .collect();
    let mut out: Vec<BetaInterval> = Vec::new();
    let mut open: Option<BetaInterval> = None;
    for (g, neg) in gap_neg.iter().enumerate() {
        if *neg {
            if open.is_none() {
                open = Some(BetaInterval {
                    lo: crit[g].clone(),
                    hi: crit[g + 1].clone(),
                    lo_closed: point_neg[g],
                    hi_closed: false,
                });
            }
            let cur = open.as_mut().expect("open");
            cur.hi = crit[g + 1].clone();
            cur.hi_closed = point_neg[g + 1];
            if !point_neg[g + 1] {
                out.extend(open.take());
            }
        } else if point_neg[g] && open.is_none() && g > 0 {
            // isolated negative point; cannot happen for continuous η
            out.push(BetaInterval {
                lo: crit[g].clone(),
                hi: crit[g].clone(),
                lo_closed: true,
                hi_closed: true,
            });
        }
    }
    out.extend(open);
    out
}

/// The intersection numbers of `L_β = r(-K_X - (1-β)D)` that enter the
/// Riemann-Roch coefficients.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IntersectionInputs {
    pub n: usize,
    pub r: u64,
    /// `(L_β^n)`
    pub l_n: Rat,
    /// `(L_β^{n-1} · (-K_X))`
    pub l_n1_minus_k: Rat,
    /// `(L_β^{n-1} · D)`
    pub l_n1_d: Rat,
}

impl IntersectionInputs {
    pub fn from_surface(s: &SurfaceData, beta: &Rat, r: u64) -> Result<IntersectionInputs> {
        check_beta(beta)?;
        check_r(r)?;
        let l = l_beta(s, beta).scale(&int(r as i64));
        let lat = &s.lattice;
        Ok(IntersectionInputs {
            n: 2,
            r,
            l_n: lat.intersect(&l, &l)?,
            l_n1_minus_k: lat.intersect(&l, &s.anticanonical())?,
            l_n1_d: lat.intersect(&l, &s.boundary)?,
        })
    }

    /// Reads the pairings off the first segment, where `-K_X - (1-β)D` is
    /// assumed ample.
    pub fn from_bundle(b: &GeographyBundle, r: u64) -> Result<IntersectionInputs> {
        check_r(r)?;
        let seg = b
            .segments
            .first()
            .ok_or_else(|| Error::InvalidInput("bundle has no segments".into()))?;
        let n = b.dimension_n;
        let zero = Rat::zero();
        let (vol, s) = (seg.vol.eval(&zero), seg.s.eval(&zero));
        let rr = int(r as i64);
        let r_n1 = pow(&rr, n - 1);
        let u = Rat::one() - &b.beta;
        Ok(IntersectionInputs {
            n,
            r,
            l_n: pow(&rr, n) * &vol,
            l_n1_minus_k: &r_n1 * (&vol + &u * &s),
            l_n1_d: r_n1 * s,
        })
    }
}

fn check_r(r: u64) -> Result<()> {
    if r == 0 {
        return Err(Error::InvalidInput("r must be a positive integer".into()));
    }
    Ok(())
}

fn pow(x: &Rat, e: usize) -> Rat {
    (0..e).fold(Rat::one(), |a, _| a * x)
}

fn factorial(n: usize) -> Rat {
    (1..=n).fold(Rat::one(), |a, k| a * int(k as i64))
}

/// `-K_X - (1-β)D`
pub fn l_beta(s: &SurfaceData, beta: &Rat) -> DivisorClass {
    &s.anticanonical() - &s.boundary.scale(&(Rat::one() - beta))
}

/// Smallest `r ≥ 1` with `r(-K_X - (1-β)D)` integral in the given basis.
pub fn auto_r_surface(s: &SurfaceData, beta: &Rat) -> u64 {
    lcm_denominators(&l_beta(s, beta).0).to_u64().expect("small r")
}

/// Smallest `r ≥ 1` clearing the denominators of `1-β` and `τ_β`.
pub fn auto_r_bundle(b: &GeographyBundle) -> u64 {
    let u = Rat::one() - &b.beta;
    lcm_denominators([&u, &b.tau_beta()]).to_u64().expect("small r")
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DFReport {
    pub r: u64,
    pub l_n: Rat,
    pub a0: Rat,
    pub a1: Rat,
    pub a0_tilde: Rat,
    pub b0: Rat,
    pub b1: Rat,
    pub b0_tilde: Rat,
    pub v0: Rat,
    pub v1: Rat,
    pub df_value: Rat,
    pub eta: Rat,
    /// True when `df = rⁿ(L_βⁿ)/(n!)² · η_β` was verified exactly.
    pub proportionality_checked: bool,
}

/// `η_β = β·vol(0) - ∫_0^{τ_β} vol(x) dx` in the shifted variable.
pub fn eta_from_bundle(b: &GeographyBundle) -> Result<Rat> {
    let seg = b
        .segments
        .first()
        .ok_or_else(|| Error::InvalidInput("bundle has no segments".into()))?;
    let integral = b
        .segments
        .iter()
        .fold(Rat::zero(), |a, s| a + s.vol.integrate(&s.lo, &s.hi));
    Ok(&b.beta * seg.vol.eval(&Rat::zero()) - integral)
}

/// Donaldson-Futaki coefficients and `DF_β` for the given data.
pub fn df_invariant(b: &GeographyBundle, inputs: &IntersectionInputs, beta: &Rat) -> Result<DFReport> {
    check_beta(beta)?;
    if *beta != b.beta {
        return Err(Error::InvalidInput(format!(
            "bundle was built for beta = {}, not {}",
            fmt_rat(&b.beta),
            fmt_rat(beta)
        )));
    }
    if inputs.n != b.dimension_n {
        return Err(Error::InvalidInput("dimension of bundle and intersection data differ".into()));
    }
    let n = inputs.n;
    let r = int(inputs.r as i64);
    let u = Rat::one() - beta;
    let tau_beta = b.tau_beta();
    let n_fact = factorial(n);
    let n1_fact = factorial(n - 1);

    let a0 = &inputs.l_n / &n_fact;
    let a1 = &inputs.l_n1_minus_k / (int(2) * &n1_fact);
    let a0_tilde = &inputs.l_n1_d / &n1_fact;
    let b0_tilde = -&r * &tau_beta * &a0_tilde;

    let mut vol_int = Rat::zero();
    let mut kappa_int = Rat::zero();
    for (i, seg) in b.segments.iter().enumerate() {
        vol_int += seg.vol.integrate(&seg.lo, &seg.hi);
        let kappa = seg.kappa.as_ref().ok_or(Error::MissingKappa(i))?;
        kappa_int += kappa.integrate(&seg.lo, &seg.hi);
    }
    let v0 = pow(&r, n + 1) / &n_fact * vol_int;
    let v1 = -pow(&r, n) / (int(2) * &n1_fact) * kappa_int;
    let b0 = &v0 - &r * &tau_beta * &a0;
    let b1 = &v1 - &r * &tau_beta * &a1;
    let df_value = int(2) * (&b0 * &a1 - &b1 * &a0) + &u * (&a0 * &b0_tilde - &b0 * &a0_tilde);

    let eta = eta_from_bundle(b)?;
    let expected = pow(&r, n) * &inputs.l_n / (&n_fact * &n_fact) * &eta;
    Ok(DFReport {
        r: inputs.r,
        l_n: inputs.l_n.clone(),
        a0,
        a1,
        a0_tilde,
        b0,
        b1,
        b0_tilde,
        v0,
        v1,
        proportionality_checked: df_value == expected,
        df_value,
        eta,
    })
}

/// Checks `η_β = n·Σ ∫ (β - x)·s(x) dx` against the direct integral form.
pub fn lemma_vol_check(b: &GeographyBundle, beta: &Rat) -> bool {
    let Some(first) = b.segments.first() else {
        return false;
    };
    let direct = beta * first.vol.eval(&Rat::zero())
        - b.segments
            .iter()
            .fold(Rat::zero(), |a, s| a + s.vol.integrate(&s.lo, &s.hi));
    let weight = Poly::linear(beta.clone(), -Rat::one());
    let weighted = b
        .segments
        .iter()
        .fold(Rat::zero(), |a, s| a + (&weight * &s.s).integrate(&s.lo, &s.hi));
    direct == int(b.dimension_n as i64) * weighted
}
