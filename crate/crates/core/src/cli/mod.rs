//! The pipeline behind the command-line tool: document in, report out.

pub mod document;
pub mod report;

use crate::error::{Error, Result};
use crate::exactnum::{fmt_rat, int, rat_to_decimal, Rat, Sign};
use crate::lattice::{SurfaceData, NEF_CAVEAT};
use crate::stability::{self, IntersectionInputs};
use crate::toric::{self, TDivisor, ToricSurface};
use crate::zariski::{self, VolumeProfile};
use document::{InputDocument, RChoice, Resolved};
use num_traits::{One, Signed, Zero};
use rayon::prelude::*;
use report::{alg_json, destabilizing_json, piecewise_json, poly_json, rat_json};
use serde_json::{json, Map, Value};

pub use document::{parse_document, validate, Diagnostic};
pub use report::render_text;

pub const R_CAVEAT: &str = "DF values describe the basic test configuration only if r satisfies the finite-generation condition on the section ring, which is not verified; sign verdicts do not depend on r";
pub const VERDICT_CAVEAT: &str =
    "the eta test is a necessary condition only; no report asserts K-stability";

pub struct RunOutput {
    pub report: Value,
    pub profile: VolumeProfile,
    /// Some β could not be evaluated.
    pub had_errors: bool,
}

struct Context<'a> {
    profile: &'a VolumeProfile,
    surface: Option<&'a SurfaceData>,
    toric: Option<(&'a ToricSurface, &'a TDivisor)>,
    r: RChoice,
    verify_toric: Option<u64>,
}

pub fn run(doc: &InputDocument) -> Result<RunOutput> {
    let resolved = doc.resolve()?;
    let (profile, surface, fan) = match resolved {
        Resolved::Surface(s) => (zariski::build_profile(&s)?, Some(s), None),
        Resolved::Toric(t, d, s) => (zariski::build_profile(&s)?, Some(s), Some((t, d))),
        Resolved::Bundle(p) => (p, None, None),
    };
    let ctx = Context {
        profile: &profile,
        surface: surface.as_ref(),
        toric: fan.as_ref().map(|(t, d)| (t, d)),
        r: doc.options.r,
        verify_toric: doc.options.verify_toric,
    };

    let evaluations: Vec<Value> = doc
        .options
        .betas()
        .par_iter()
        .map(|b| evaluate(&ctx, b))
        .collect();
    let had_errors = evaluations.iter().any(|e| e.get("error").is_some());

    let eta_polynomial = match stability::eta_polynomials(&profile) {
        Ok(p) => json!({
            "eta": piecewise_json(&p.eta, "beta"),
            "eta_plus": piecewise_json(&p.eta_plus, "beta"),
            "eta_minus": rat_json(&p.eta_minus),
        }),
        Err(_) => Value::Null,
    };
    let mut caveats = Vec::new();
    if surface.is_some() {
        caveats.push(NEF_CAVEAT);
    }
    caveats.push(R_CAVEAT);
    caveats.push(VERDICT_CAVEAT);

    let report = json!({
        "input_kind": doc.kind(),
        "profile": profile_json(&profile, surface.as_ref()),
        "eta_polynomial": eta_polynomial,
        "destabilizing_betas": destabilizing_json(&stability::destabilizing_betas(&profile)?),
        "evaluations": evaluations,
        "caveats": caveats,
    });
    Ok(RunOutput { report, profile, had_errors })
}

fn profile_json(p: &VolumeProfile, s: Option<&SurfaceData>) -> Value {
    let pieces: Vec<Value> = (0..p.chamber_count())
        .map(|i| {
            let (lo, hi) = p.volume.piece_interval(i);
            let mut m = Map::new();
            m.insert("lo".into(), alg_json(lo));
            m.insert("hi".into(), alg_json(hi));
            m.insert("vol".into(), poly_json(&p.volume.pieces()[i]));
            m.insert("text".into(), json!(p.volume.pieces()[i].render("t")));
            m.insert("s".into(), poly_json(&p.derivative_data[i]));
            if let Some(k) = &p.log_data[i] {
                m.insert("kappa".into(), poly_json(k));
            }
            if let (Some(c), Some(s)) = (&p.chamber_models[i], s) {
                let names: Vec<&str> = c.iter().map(|&j| s.curve_labels[j].as_str()).collect();
                m.insert("contracted".into(), json!(names));
            }
            Value::Object(m)
        })
        .collect();
    json!({
        "dimension_n": p.dimension_n,
        "variable": "t",
        "pieces": pieces,
        "tau": alg_json(&p.tau),
    })
}

fn sign_certificate(v: &crate::exactnum::AlgReal) -> String {
    match v.as_rat() {
        Some(r) => format!("exact rational value {}", fmt_rat(r)),
        None => {
            let (lo, hi) = v.interval();
            match v.sign() {
                Sign::Negative => format!("isolating interval with upper end {} < 0", fmt_rat(&hi)),
                Sign::Positive => format!("isolating interval with lower end {} > 0", fmt_rat(&lo)),
                Sign::Zero => "zero".into(),
            }
        }
    }
}

fn evaluate(ctx: &Context, beta: &Rat) -> Value {
    match evaluate_inner(ctx, beta) {
        Ok(v) => v,
        Err(e) => json!({ "beta": fmt_rat(beta), "error": e.to_string() }),
    }
}

fn evaluate_inner(ctx: &Context, beta: &Rat) -> Result<Value> {
    let (_, tau_beta) = zariski::thresholds(ctx.profile, beta)?;
    let e = stability::eta(ctx.profile, beta)?;
    let eta = json!({
        "value": alg_json(&e.value),
        "eta_plus": alg_json(&e.eta_plus),
        "eta_minus": alg_json(&e.eta_minus),
        "sign": e.sign.as_str(),
        "sign_certificate": sign_certificate(&e.value),
        "verdict": e.verdict.as_str(),
        "verdict_text": e.verdict.explanation(),
    });
    let mut out = Map::new();
    out.insert("beta".into(), json!(fmt_rat(beta)));
    out.insert("tau_beta".into(), alg_json(&tau_beta));
    out.insert("eta".into(), eta);

    let bundle = zariski::bundle_from_profile(ctx.profile, beta);
    match &bundle {
        Ok(b) => {
            out.insert("lemma_vol_check".into(), json!(stability::lemma_vol_check(b, beta)));
            let df = df_block(ctx, b, beta);
            if let (Some(v), Some(k)) = (df.as_ref().ok(), ctx.verify_toric) {
                out.insert("toric_check".into(), toric_block(ctx, beta, v, k));
            }
            out.insert(
                "df".into(),
                match df {
                    Ok(d) => df_json(&d),
                    Err(e) => json!({ "error": e.to_string() }),
                },
            );
        }
        Err(e) => {
            out.insert("df".into(), json!({ "error": e.to_string() }));
        }
    }
    Ok(Value::Object(out))
}

fn resolve_r(ctx: &Context, b: &zariski::GeographyBundle, beta: &Rat) -> u64 {
    match (ctx.r, ctx.surface) {
        (RChoice::Fixed(r), _) => r,
        (RChoice::Auto, Some(s)) => stability::auto_r_surface(s, beta),
        (RChoice::Auto, None) => stability::auto_r_bundle(b),
    }
}

fn df_block(ctx: &Context, b: &zariski::GeographyBundle, beta: &Rat) -> Result<stability::DFReport> {
    let r = resolve_r(ctx, b, beta);
    let inputs = match ctx.surface {
        Some(s) => IntersectionInputs::from_surface(s, beta, r)?,
        None => IntersectionInputs::from_bundle(b, r)?,
    };
    stability::df_invariant(b, &inputs, beta)
}

fn df_json(d: &stability::DFReport) -> Value {
    json!({
        "r": d.r,
        "l_beta_power_n": rat_json(&d.l_n),
        "a0": rat_json(&d.a0),
        "a1": rat_json(&d.a1),
        "a0_tilde": rat_json(&d.a0_tilde),
        "b0": rat_json(&d.b0),
        "b1": rat_json(&d.b1),
        "b0_tilde": rat_json(&d.b0_tilde),
        "v0": rat_json(&d.v0),
        "v1": rat_json(&d.v1),
        "df_value": rat_json(&d.df_value),
        "df_sign": Sign::of(&d.df_value).as_str(),
        "proportionality_checked": d.proportionality_checked,
        "r_caveat": R_CAVEAT,
    })
}

fn rel_error(est: &Rat, exact: &Rat) -> Rat {
    if exact.is_zero() {
        est.abs()
    } else {
        ((est - exact) / exact).abs()
    }
}

/// Section-count estimates of `v0`, `v1` for a toric input, next to the
/// integral formulas.
fn toric_block(ctx: &Context, beta: &Rat, df: &stability::DFReport, k_max: u64) -> Value {
    let Some((fan, d)) = ctx.toric else {
        return json!({ "error": "toric verification needs a toric input" });
    };
    let result = (|| -> Result<Value> {
        let u = Rat::one() - beta;
        let r = int(df.r as i64);
        let l = fan.canonical().scale(&-Rat::one()).sub(&d.scale(&u)).scale(&r);
        let (_, tau_beta) = zariski::thresholds(ctx.profile, beta)?;
        let tau_beta = tau_beta
            .as_rat()
            .ok_or_else(|| Error::IrrationalThreshold("toric check".into()))?
            .clone();
        let rt = &r * &tau_beta;
        let period = toric::congruence_period(&l, &rt);
        let tables = (1..=k_max)
            .filter(|k| l.scale(&int(*k as i64)).is_integral())
            .map(|k| toric::weight_table(fan, &l, d, &rt, k))
            .collect::<Result<Vec<_>>>()?;
        let (v0, v1) = toric::fit_leading_coeffs(&tables, period)?;
        let (e0, e1) = (rel_error(&v0, &df.v0), rel_error(&v1, &df.v1));
        Ok(json!({
            "k_max": k_max,
            "period": period,
            "v0_est": fmt_rat(&v0),
            "v1_est": fmt_rat(&v1),
            "v0_rel_error": rat_to_decimal(&e0, 6),
            "v1_rel_error": rat_to_decimal(&e1, 6),
        }))
    })();
    result.unwrap_or_else(|e| json!({ "error": e.to_string() }))
}

/// Serializes a report deterministically.
pub fn to_json_string(v: &Value) -> String {
    serde_json::to_string_pretty(v).expect("serializable") + "\n"
}
