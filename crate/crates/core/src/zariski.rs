//! Zariski decomposition on surfaces, volumes, and the chamber structure of
//! `t ↦ vol(-K_X - tD)`.
//!
//! Decompositions run Bauer's iteration over classes that depend affinely on a
//! parameter `t`. Signs are taken either at a point or just to the right of a
//! point, so the support of the negative part on `(t, t + ε)` is computed
//! exactly instead of by sampling.

use crate::error::{Error, Result};
use crate::exactnum::{isolate_roots, matrix, AlgReal, PiecewisePoly, Poly, Rat, Sign};
use crate::lattice::{DivisorClass, SurfaceData};
use num_traits::{One, Zero};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ZariskiResult {
    pub positive: DivisorClass,
    /// `(index into negative_curves, coefficient > 0)`
    pub negative: Vec<(usize, Rat)>,
}

impl ZariskiResult {
    /// Checks the defining conditions against `input`: `P = A - N`, `P` nef on
    /// the curve list, `N ≥ 0`, `P·Cᵢ = 0` on the support, negative-definite
    /// support. Returns the first violated condition.
    pub fn check_axioms(&self, s: &SurfaceData, input: &DivisorClass) -> Result<(), String> {
        let l = &s.lattice;
        let mut n = DivisorClass::zero(l.rank());
        for (i, c) in &self.negative {
            n = &n + &s.negative_curves[*i].scale(c);
        }
        if &(&self.positive + &n) != input {
            return Err("P + N differs from the input class".into());
        }
        if !s.is_nef_against(&self.positive) {
            return Err("positive part is not nef on the curve list".into());
        }
        if self.negative.iter().any(|(_, c)| *c < Rat::zero()) {
            return Err("negative part has a negative coefficient".into());
        }
        for (i, _) in &self.negative {
            if !l.pair(&self.positive.0, &s.negative_curves[*i].0).is_zero() {
                return Err(format!("P·{} ≠ 0", s.curve_labels[*i]));
            }
        }
        let idx: Vec<usize> = self.negative.iter().map(|(i, _)| *i).collect();
        if !matrix::is_negative_definite(&support_gram(s, &idx)) {
            return Err("support Gram matrix is not negative definite".into());
        }
        Ok(())
    }

    pub fn volume(&self, s: &SurfaceData) -> Rat {
        s.lattice.pair(&self.positive.0, &self.positive.0)
    }
}

#[derive(Clone, Debug)]
enum Probe {
    At(Rat),
    RightOf(Rat),
}

impl Probe {
    fn sign(&self, p: &Poly) -> Sign {
        match self {
            Probe::At(t) => p.sign_at(t),
            Probe::RightOf(t) => p.sign_right_of(t),
        }
    }
}

/// Decomposition of a class depending affinely on `t`, valid near the probe.
#[derive(Clone, Debug)]
struct ParamDecomp {
    support: Vec<usize>,
    coeffs: Vec<Poly>,
    positive: Vec<Poly>,
}

fn support_gram(s: &SurfaceData, support: &[usize]) -> matrix::Matrix {
    support
        .iter()
        .map(|&i| {
            support
                .iter()
                .map(|&j| s.lattice.pair(&s.negative_curves[i].0, &s.negative_curves[j].0))
                .collect()
        })
        .collect()
}

fn pair_poly(s: &SurfaceData, p: &[Poly], c: &[Rat]) -> Poly {
    let g = &s.lattice.gram;
    let mut acc = Poly::zero();
    for (i, pi) in p.iter().enumerate() {
        let w = c.iter().enumerate().fold(Rat::zero(), |a, (j, cj)| a + &g[i][j] * cj);
        if !w.is_zero() {
            acc = &acc + &pi.scale(&w);
        }
    }
    acc
}

fn self_pair_poly(s: &SurfaceData, p: &[Poly]) -> Poly {
    let g = &s.lattice.gram;
    let mut acc = Poly::zero();
    for (i, pi) in p.iter().enumerate() {
        for (j, pj) in p.iter().enumerate() {
            if !g[i][j].is_zero() {
                acc = &acc + &(pi * pj).scale(&g[i][j]);
            }
        }
    }
    acc
}

fn solve_support(s: &SurfaceData, a: &[Poly], support: &[usize]) -> Result<(Vec<Poly>, Vec<Poly>)> {
    if support.is_empty() {
        return Ok((Vec::new(), a.to_vec()));
    }
    let gram = support_gram(s, support);
    if !matrix::is_negative_definite(&gram) {
        return Err(Error::SingularSupport { curves: support.to_vec() });
    }
    let inv = matrix::inverse(&gram).ok_or(Error::SingularSupport { curves: support.to_vec() })?;
    let rhs: Vec<Poly> = support
        .iter()
        .map(|&i| pair_poly(s, a, &s.negative_curves[i].0))
        .collect();
    let coeffs: Vec<Poly> = inv
        .iter()
        .map(|row| {
            row.iter()
                .zip(&rhs)
                .fold(Poly::zero(), |acc, (w, b)| &acc + &b.scale(w))
        })
        .collect();
    let mut positive = a.to_vec();
    for (x, &i) in coeffs.iter().zip(support) {
        for (k, c) in s.negative_curves[i].0.iter().enumerate() {
            if !c.is_zero() {
                positive[k] = &positive[k] - &x.scale(c);
            }
        }
    }
    Ok((coeffs, positive))
}

fn bauer(s: &SurfaceData, a: &[Poly], probe: &Probe) -> Result<ParamDecomp> {
    let mut support: Vec<usize> = Vec::new();
    loop {
        let (coeffs, positive) = solve_support(s, a, &support)?;
        if coeffs.iter().any(|x| probe.sign(x) == Sign::Negative) {
            return Err(Error::NotPseudoeffective(
                "negative part acquires a negative coefficient".into(),
            ));
        }
        let fresh: Vec<usize> = (0..s.negative_curves.len())
            .filter(|i| !support.contains(i))
            .filter(|&i| probe.sign(&pair_poly(s, &positive, &s.negative_curves[i].0)) == Sign::Negative)
            .collect();
        if fresh.is_empty() {
            if s
                .test_curves
                .iter()
                .any(|c| probe.sign(&pair_poly(s, &positive, &c.0)) == Sign::Negative)
            {
                return Err(Error::NotPseudoeffective(
                    "positive part fails nefness on a non-contractible curve".into(),
                ));
            }
            if probe.sign(&self_pair_poly(s, &positive)) == Sign::Negative {
                return Err(Error::NotPseudoeffective("P·P < 0".into()));
            }
            let h = s.ample_reference();
            if probe.sign(&pair_poly(s, &positive, &h.0)) == Sign::Negative {
                return Err(Error::NotPseudoeffective(
                    "positive part pairs negatively with the ample reference".into(),
                ));
            }
            return Ok(ParamDecomp { support, coeffs, positive });
        }
        support.extend(fresh);
        support.sort_unstable();
    }
}

fn constant_class(a: &DivisorClass) -> Vec<Poly> {
    a.0.iter().map(|c| Poly::constant(c.clone())).collect()
}

/// Zariski decomposition `A = P + N` relative to the supplied curve list.
pub fn zariski_decompose(s: &SurfaceData, a: &DivisorClass) -> Result<ZariskiResult> {
    s.lattice.check(a)?;
    let dec = bauer(s, &constant_class(a), &Probe::At(Rat::zero()))?;
    let zero = Rat::zero();
    let positive = DivisorClass(dec.positive.iter().map(|p| p.eval(&zero)).collect());
    let negative = dec
        .support
        .iter()
        .zip(&dec.coeffs)
        .map(|(&i, x)| (i, x.eval(&zero)))
        .filter(|(_, x)| !x.is_zero())
        .collect();
    Ok(ZariskiResult { positive, negative })
}

/// `P·P` for pseudoeffective classes, `0` otherwise. Only a rank mismatch errors.
pub fn volume_of(s: &SurfaceData, a: &DivisorClass) -> Result<Rat> {
    s.lattice.check(a)?;
    Ok(zariski_decompose(s, a)
        .map(|z| z.volume(s))
        .unwrap_or_else(|_| Rat::zero()))
}

/// `t ↦ vol(-K_X - tD)` on `[0, τ(D)]` with its chamber data.
#[derive(Clone, Debug)]
pub struct VolumeProfile {
    pub dimension_n: usize,
    pub volume: PiecewisePoly,
    pub tau: AlgReal,
    /// Contracted curves per chamber; `None` when the profile was supplied as
    /// raw segments.
    pub chamber_models: Vec<Option<Vec<usize>>>,
    /// `s(t) = (P_t^{n-1} · D)` per chamber.
    pub derivative_data: Vec<Poly>,
    /// `κ(t) = (P_t^{n-1} · (K + D))` per chamber, when known.
    pub log_data: Vec<Option<Poly>>,
}

/// One chamber of a profile in the unshifted variable `t`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ProfileSegment {
    pub t_lo: Rat,
    pub t_hi: Rat,
    pub vol: Poly,
    pub s: Poly,
    pub kappa: Option<Poly>,
}

impl VolumeProfile {
    pub fn chamber_breaks(&self) -> &[AlgReal] {
        self.volume.breakpoints()
    }

    pub fn chamber_count(&self) -> usize {
        self.volume.pieces().len()
    }

    /// True when every breakpoint (including τ) is rational.
    pub fn has_rational_walls(&self) -> bool {
        self.chamber_breaks().iter().all(AlgReal::is_rational)
    }

    pub fn rational_breaks(&self) -> Option<Vec<Rat>> {
        self.chamber_breaks()
            .iter()
            .map(|b| b.as_rat().cloned())
            .collect()
    }

    /// `V(t)`, zero past τ; `None` for negative `t`.
    pub fn volume_at(&self, t: &Rat) -> Option<Rat> {
        if self.tau.cmp_rat(t).is_lt() {
            return (t >= &Rat::zero()).then(Rat::zero);
        }
        self.volume.eval(t)
    }

    /// Builds a profile from raw chamber segments (a higher-dimensional
    /// geography supplied directly, or an exported surface profile).
    pub fn from_segments(dimension_n: usize, segments: Vec<ProfileSegment>) -> Result<VolumeProfile> {
        if dimension_n == 0 {
            return Err(Error::InvalidInput("dimension must be positive".into()));
        }
        let first = segments
            .first()
            .ok_or_else(|| Error::InvalidInput("bundle has no segments".into()))?;
        if !first.t_lo.is_zero() {
            return Err(Error::InvalidInput("first segment must start at t = 0".into()));
        }
        for (i, seg) in segments.iter().enumerate() {
            if seg.t_lo >= seg.t_hi {
                return Err(Error::InvalidInput(format!("segment {i} is empty or reversed")));
            }
            if seg.vol.degree().unwrap_or(0) > dimension_n {
                return Err(Error::InvalidInput(format!(
                    "segment {i}: volume polynomial degree exceeds n = {dimension_n}"
                )));
            }
            if i > 0 {
                let prev = &segments[i - 1];
                if prev.t_hi != seg.t_lo {
                    return Err(Error::InvalidInput(format!(
                        "segments {} and {i} are not contiguous",
                        i - 1
                    )));
                }
                if prev.vol.eval(&prev.t_hi) != seg.vol.eval(&seg.t_lo) {
                    return Err(Error::InvalidInput(format!(
                        "volume is discontinuous between segments {} and {i}",
                        i - 1
                    )));
                }
            }
        }
        let last = segments.last().expect("nonempty");
        if !last.vol.eval(&last.t_hi).is_zero() {
            return Err(Error::InvalidInput(
                "volume must vanish at the end of the last segment".into(),
            ));
        }
        if first.vol.eval(&first.t_lo) <= Rat::zero() {
            return Err(Error::InvalidInput("volume at t = 0 must be positive".into()));
        }
        let mut breaks: Vec<AlgReal> = segments.iter().map(|s| s.t_lo.clone().into()).collect();
        breaks.push(last.t_hi.clone().into());
        let volume = PiecewisePoly::new(breaks, segments.iter().map(|s| s.vol.clone()).collect())?;
        Ok(VolumeProfile {
            dimension_n,
            tau: last.t_hi.clone().into(),
            volume,
            chamber_models: vec![None; segments.len()],
            derivative_data: segments.iter().map(|s| s.s.clone()).collect(),
            log_data: segments.iter().map(|s| s.kappa.clone()).collect(),
        })
    }

    /// The chambers as rational segments in `t`; errors when τ is irrational.
    pub fn segments(&self) -> Result<Vec<ProfileSegment>> {
        let breaks = self
            .rational_breaks()
            .ok_or_else(|| Error::IrrationalThreshold(format!("tau = {}", self.tau)))?;
        Ok((0..self.chamber_count())
            .map(|i| ProfileSegment {
                t_lo: breaks[i].clone(),
                t_hi: breaks[i + 1].clone(),
                vol: self.volume.pieces()[i].clone(),
                s: self.derivative_data[i].clone(),
                kappa: self.log_data[i].clone(),
            })
            .collect())
    }
}

/// Options for [`build_profile_with`].
#[derive(Clone, Debug)]
pub struct ProfileOptions {
    /// Largest degree allowed for the defining polynomial of an irrational
    /// breakpoint.
    pub max_wall_degree: usize,
}

impl Default for ProfileOptions {
    fn default() -> Self {
        ProfileOptions { max_wall_degree: 2 }
    }
}

pub fn build_profile(s: &SurfaceData) -> Result<VolumeProfile> {
    build_profile_with(s, &ProfileOptions::default())
}

struct Chamber {
    lo: AlgReal,
    hi: AlgReal,
    vol: Poly,
    s: Poly,
    kappa: Poly,
    contracted: Vec<usize>,
}

/// Smallest root of `p` strictly greater than `t0`.
fn next_root(p: &Poly, t0: &Rat) -> Option<AlgReal> {
    if p.degree().unwrap_or(0) == 0 {
        return None;
    }
    let bound = p.cauchy_bound();
    if bound <= *t0 {
        return None;
    }
    isolate_roots(p, t0, &bound)
        .into_iter()
        .find(|r| r.cmp_rat(t0).is_gt())
}

/// Walks `t` upward from 0, re-solving the Zariski system whenever the support
/// of the negative part changes.
pub fn build_profile_with(s: &SurfaceData, opts: &ProfileOptions) -> Result<VolumeProfile> {
    let mk = s.anticanonical();
    if !s.is_ample_against(&mk) {
        return Err(Error::NotAmpleAtZero(
            "-K_X is not ample against the supplied curves".into(),
        ));
    }
    let d = &s.boundary;
    let a: Vec<Poly> = mk
        .0
        .iter()
        .zip(&d.0)
        .map(|(k, dd)| Poly::linear(k.clone(), -dd))
        .collect();
    let k_plus_d = &s.canonical + d;
    let h = s.ample_reference();
    let max_steps = 4 * (s.negative_curves.len() + s.test_curves.len() + 4);

    let mut chambers: Vec<Chamber> = Vec::new();
    let mut t0 = Rat::zero();
    let tau = loop {
        if chambers.len() > max_steps {
            return Err(Error::Computation("chamber walk did not terminate".into()));
        }
        let dec = bauer(s, &a, &Probe::RightOf(t0.clone())).map_err(|e| {
            Error::Computation(format!(
                "volume is positive at t = {t0} but the decomposition fails just after it: {e}"
            ))
        })?;
        let vol = self_pair_poly(s, &dec.positive);
        let sd = pair_poly(s, &dec.positive, &d.0);
        let kappa = pair_poly(s, &dec.positive, &k_plus_d.0);
        let contracted: Vec<usize> = dec
            .support
            .iter()
            .zip(&dec.coeffs)
            .filter(|(_, x)| x.sign_right_of(&t0) == Sign::Positive)
            .map(|(&i, _)| i)
            .collect();

        let mut events: Vec<Poly> = dec.coeffs.clone();
        events.extend(
            (0..s.negative_curves.len())
                .filter(|i| !dec.support.contains(i))
                .map(|i| pair_poly(s, &dec.positive, &s.negative_curves[i].0)),
        );
        events.extend(s.test_curves.iter().map(|c| pair_poly(s, &dec.positive, &c.0)));
        events.push(pair_poly(s, &dec.positive, &h.0));
        events.push(vol.clone());
        let t_end = events
            .iter()
            .filter_map(|p| next_root(p, &t0))
            .min()
            .ok_or_else(|| Error::Computation("volume never vanishes along -K - tD".into()))?;

        let vanishes = vol.eval_at(&t_end).sign() == Sign::Zero;
        if !t_end.is_rational() {
            let deg = t_end.defining_poly().degree().unwrap_or(0);
            if !vanishes || deg > opts.max_wall_degree {
                return Err(Error::IrrationalWall(format!(
                    "wall {t_end} (degree {deg}, limit {})",
                    opts.max_wall_degree
                )));
            }
        }
        chambers.push(Chamber {
            lo: t0.clone().into(),
            hi: t_end.clone(),
            vol,
            s: sd,
            kappa,
            contracted,
        });
        if vanishes {
            break t_end;
        }
        t0 = t_end.as_rat().expect("rational wall").clone();
    };

    // Events that change nothing leave identical neighbours; fuse them.
    let mut merged: Vec<Chamber> = Vec::new();
    for c in chambers {
        match merged.last_mut() {
            Some(prev) if prev.contracted == c.contracted && prev.vol == c.vol && prev.s == c.s => {
                prev.hi = c.hi;
            }
            _ => merged.push(c),
        }
    }
    let mut breaks: Vec<AlgReal> = merged.iter().map(|c| c.lo.clone()).collect();
    breaks.push(tau.clone());
    Ok(VolumeProfile {
        dimension_n: 2,
        volume: PiecewisePoly::new(breaks, merged.iter().map(|c| c.vol.clone()).collect())?,
        tau,
        chamber_models: merged.iter().map(|c| Some(c.contracted.clone())).collect(),
        derivative_data: merged.iter().map(|c| c.s.clone()).collect(),
        log_data: merged.into_iter().map(|c| Some(c.kappa)).collect(),
    })
}

pub fn check_beta(beta: &Rat) -> Result<()> {
    if *beta < Rat::zero() || *beta > Rat::one() {
        return Err(Error::BetaOutOfRange(crate::exactnum::fmt_rat(beta)));
    }
    Ok(())
}

/// `(τ(D), τ_β(D) = τ(D) - (1 - β))`.
pub fn thresholds(p: &VolumeProfile, beta: &Rat) -> Result<(AlgReal, AlgReal)> {
    check_beta(beta)?;
    let shift = Rat::one() - beta;
    Ok((p.tau.clone(), p.tau.add_rat(&-shift)))
}

/// One chamber re-expressed in `x = t - (1 - β)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BundleSegment {
    pub lo: Rat,
    pub hi: Rat,
    pub vol: Poly,
    pub s: Poly,
    pub kappa: Option<Poly>,
}

/// Chamber data over `x ∈ [0, τ_β(D)]` for a fixed β.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GeographyBundle {
    pub dimension_n: usize,
    pub beta: Rat,
    pub segments: Vec<BundleSegment>,
}

impl GeographyBundle {
    pub fn tau_beta(&self) -> Rat {
        self.segments.last().map(|s| s.hi.clone()).unwrap_or_else(Rat::zero)
    }
}

pub fn bundle_from_profile(p: &VolumeProfile, beta: &Rat) -> Result<GeographyBundle> {
    check_beta(beta)?;
    let u = Rat::one() - beta;
    let breaks = p
        .rational_breaks()
        .ok_or_else(|| Error::IrrationalThreshold(format!("tau = {}", p.tau)))?;
    if breaks.last().expect("nonempty") <= &u {
        return Err(Error::NotBig(crate::exactnum::fmt_rat(beta)));
    }
    let mut segments = Vec::new();
    for i in 0..p.chamber_count() {
        let lo = breaks[i].clone().max(u.clone());
        let hi = breaks[i + 1].clone();
        if lo >= hi {
            continue;
        }
        segments.push(BundleSegment {
            lo: &lo - &u,
            hi: &hi - &u,
            vol: p.volume.pieces()[i].shift(&u),
            s: p.derivative_data[i].shift(&u),
            kappa: p.log_data[i].as_ref().map(|k| k.shift(&u)),
        });
    }
    Ok(GeographyBundle { dimension_n: p.dimension_n, beta: beta.clone(), segments })
}
