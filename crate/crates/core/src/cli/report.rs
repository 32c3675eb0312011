//! JSON encodings of exact values and the plain-text rendering of a report.

use crate::exactnum::{fmt_rat, AlgReal, PiecewisePoly, Poly, Rat};
use crate::stability::{BetaInterval, DestabilizingSet};
use serde_json::{json, Value};
use std::fmt::Write;

pub const DECIMAL_DIGITS: usize = 12;

/// Width of isolating intervals in reports.
fn interval_width() -> Rat {
    Rat::new(1.into(), num_bigint::BigInt::from(1u64 << 40))
}

pub fn rat_json(r: &Rat) -> Value {
    json!(fmt_rat(r))
}

pub fn poly_json(p: &Poly) -> Value {
    json!(p.to_strings())
}

/// `{value, defining_poly, interval, decimal_hint}`; `value` is null for
/// irrational numbers.
pub fn alg_json(a: &AlgReal) -> Value {
    let (lo, hi) = a.refined(&interval_width()).interval();
    json!({
        "value": a.as_rat().map(fmt_rat),
        "defining_poly": a.defining_poly().to_strings(),
        "interval": [fmt_rat(&lo), fmt_rat(&hi)],
        "decimal_hint": a.decimal(DECIMAL_DIGITS),
    })
}

pub fn piecewise_json(f: &PiecewisePoly, var: &str) -> Value {
    let pieces: Vec<Value> = (0..f.pieces().len())
        .map(|i| {
            let (lo, hi) = f.piece_interval(i);
            json!({
                "lo": alg_json(lo),
                "hi": alg_json(hi),
                "poly": poly_json(&f.pieces()[i]),
                "text": f.pieces()[i].render(var),
            })
        })
        .collect();
    json!({ "variable": var, "pieces": pieces })
}

fn interval_json(iv: &BetaInterval) -> Value {
    json!({
        "lo": alg_json(&iv.lo),
        "hi": alg_json(&iv.hi),
        "lo_closed": iv.lo_closed,
        "hi_closed": iv.hi_closed,
    })
}

pub fn destabilizing_json(d: &DestabilizingSet) -> Value {
    match d {
        DestabilizingSet::Exact(ivs) => json!({
            "kind": "exact",
            "intervals": ivs.iter().map(interval_json).collect::<Vec<_>>(),
        }),
        DestabilizingSet::Grid(pts) => json!({
            "kind": "grid",
            "negative_at": pts
                .iter()
                .filter(|(_, s)| *s == crate::exactnum::Sign::Negative)
                .map(|(b, _)| fmt_rat(b))
                .collect::<Vec<_>>(),
            "points": pts.iter().map(|(b, s)| json!([fmt_rat(b), s.as_str()])).collect::<Vec<_>>(),
        }),
    }
}

fn alg_text(v: &Value) -> String {
    match v.get("value").and_then(Value::as_str) {
        Some(s) => s.to_string(),
        None => {
            let poly: Vec<&str> = v["defining_poly"]
                .as_array()
                .map(|a| a.iter().filter_map(Value::as_str).collect())
                .unwrap_or_default();
            format!(
                "~{} (root of [{}] in [{}, {}])",
                v["decimal_hint"].as_str().unwrap_or("?"),
                poly.join(", "),
                v["interval"][0].as_str().unwrap_or("?"),
                v["interval"][1].as_str().unwrap_or("?")
            )
        }
    }
}

fn str_of(v: &Value) -> &str {
    v.as_str().unwrap_or("?")
}

/// Human-readable rendering of a JSON report.
pub fn render_text(r: &Value) -> String {
    let mut out = String::new();
    let w = &mut out;
    let _ = writeln!(w, "input: {}", str_of(&r["input_kind"]));
    let prof = &r["profile"];
    let _ = writeln!(w, "volume profile V(t) = vol(-K_X - tD):");
    for p in prof["pieces"].as_array().into_iter().flatten() {
        let _ = write!(w, "  [{}, {}]  {}", alg_text(&p["lo"]), alg_text(&p["hi"]), str_of(&p["text"]));
        if let Some(c) = p.get("contracted").and_then(Value::as_array) {
            let names: Vec<&str> = c.iter().map(str_of).collect();
            let _ = write!(w, "  contracted: {{{}}}", names.join(", "));
        }
        let _ = writeln!(w);
    }
    let _ = writeln!(w, "tau(D) = {}", alg_text(&prof["tau"]));
    if let Some(ep) = r.get("eta_polynomial").filter(|v| !v.is_null()) {
        let _ = writeln!(w, "eta as a function of beta:");
        for p in ep["eta"]["pieces"].as_array().into_iter().flatten() {
            let _ = writeln!(w, "  [{}, {}]  {}", alg_text(&p["lo"]), alg_text(&p["hi"]), str_of(&p["text"]));
        }
        let _ = writeln!(w, "eta_minus = {}", str_of(&ep["eta_minus"]));
    }
    let d = &r["destabilizing_betas"];
    match str_of(&d["kind"]) {
        "exact" => {
            let ivs: Vec<String> = d["intervals"]
                .as_array()
                .into_iter()
                .flatten()
                .map(|iv| {
                    format!(
                        "{}{}, {}{}",
                        if iv["lo_closed"] == json!(true) { "[" } else { "(" },
                        alg_text(&iv["lo"]),
                        alg_text(&iv["hi"]),
                        if iv["hi_closed"] == json!(true) { "]" } else { ")" }
                    )
                })
                .collect();
            let body = if ivs.is_empty() { "none".to_string() } else { ivs.join(" u ") };
            let _ = writeln!(w, "destabilizing beta: {body}");
        }
        "grid" => {
            let pts: Vec<&str> = d["negative_at"].as_array().into_iter().flatten().map(str_of).collect();
            let _ = writeln!(w, "destabilizing beta (grid): {}", pts.join(", "));
        }
        _ => {}
    }
    for e in r["evaluations"].as_array().into_iter().flatten() {
        let _ = writeln!(w, "\nbeta = {}", str_of(&e["beta"]));
        if let Some(err) = e.get("error") {
            let _ = writeln!(w, "  error: {}", str_of(err));
            continue;
        }
        let _ = writeln!(w, "  tau_beta = {}", alg_text(&e["tau_beta"]));
        let eta = &e["eta"];
        let _ = writeln!(w, "  eta = {}  (eta_plus = {}, eta_minus = {})", alg_text(&eta["value"]), alg_text(&eta["eta_plus"]), alg_text(&eta["eta_minus"]));
        let _ = writeln!(w, "  verdict: {}", str_of(&eta["verdict"]));
        let _ = writeln!(w, "    {}", str_of(&eta["verdict_text"]));
        if let Some(l) = e.get("lemma_vol_check") {
            let _ = writeln!(w, "  partial-integration identity: {}", if *l == json!(true) { "holds" } else { "FAILS" });
        }
        let df = &e["df"];
        if let Some(err) = df.get("error") {
            let _ = writeln!(w, "  df: unavailable ({})", str_of(err));
        } else if !df.is_null() {
            let _ = writeln!(w, "  df (r = {}): {}", df["r"], str_of(&df["df_value"]));
            for k in ["a0", "a1", "a0_tilde", "b0", "b1", "b0_tilde", "v0", "v1"] {
                let _ = writeln!(w, "    {k} = {}", str_of(&df[k]));
            }
            let _ = writeln!(w, "    proportional to eta: {}", df["proportionality_checked"]);
        }
        if let Some(t) = e.get("toric_check") {
            if let Some(err) = t.get("error") {
                let _ = writeln!(w, "  toric check: {}", str_of(err));
            } else {
                let _ = writeln!(
                    w,
                    "  toric check (k <= {}): v0 ~ {} (rel. err {}), v1 ~ {} (rel. err {})",
                    t["k_max"],
                    str_of(&t["v0_est"]),
                    str_of(&t["v0_rel_error"]),
                    str_of(&t["v1_est"]),
                    str_of(&t["v1_rel_error"])
                );
            }
        }
    }
    let _ = writeln!(w, "\ncaveats:");
    for c in r["caveats"].as_array().into_iter().flatten() {
        let _ = writeln!(w, "  - {}", str_of(c));
    }
    out
}
