//! Input documents: parsing with field-path diagnostics and the data checks
//! that can be made before any computation.

use crate::exactnum::{fmt_rat, parse_rat, Poly, Rat};
use crate::lattice::{DivisorClass, IntersectionLattice, SurfaceData};
use crate::toric::{TDivisor, ToricSurface};
use crate::zariski::{ProfileSegment, VolumeProfile};
use num_traits::{One, Zero};
use serde_json::{json, Map, Value};
use std::fmt;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Diagnostic {
    pub path: String,
    pub message: String,
}

impl fmt::Display for Diagnostic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}: {}", self.path, self.message)
    }
}

#[derive(Clone, Debug)]
pub struct SurfaceBlock {
    pub basis: Vec<String>,
    pub gram: Vec<Vec<Rat>>,
    pub canonical: Vec<Rat>,
    pub boundary: Vec<Rat>,
    pub negative_curves: Vec<Vec<Rat>>,
    pub curve_labels: Option<Vec<String>>,
    pub test_curves: Vec<Vec<Rat>>,
    pub ample: Option<Vec<Rat>>,
}

#[derive(Clone, Debug)]
pub struct ToricBlock {
    pub rays: Vec<(i64, i64)>,
    pub boundary: Vec<Rat>,
}

#[derive(Clone, Debug)]
pub struct BundleBlock {
    pub n: usize,
    pub segments: Vec<ProfileSegment>,
}

#[derive(Clone, Debug)]
pub enum Geometry {
    Surface(SurfaceBlock),
    Toric(ToricBlock),
    Bundle(BundleBlock),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub enum RChoice {
    #[default]
    Auto,
    Fixed(u64),
}

#[derive(Clone, Debug, Default)]
pub struct Options {
    pub beta: Option<Rat>,
    pub beta_scan: Option<Vec<Rat>>,
    pub r: RChoice,
    pub verify_toric: Option<u64>,
}

impl Options {
    /// Every β to evaluate, `beta` first, in input order without repeats.
    pub fn betas(&self) -> Vec<Rat> {
        let mut out: Vec<Rat> = Vec::new();
        for b in self.beta.iter().chain(self.beta_scan.iter().flatten()) {
            if !out.contains(b) {
                out.push(b.clone());
            }
        }
        out
    }
}

#[derive(Clone, Debug)]
pub struct InputDocument {
    pub geometry: Geometry,
    pub options: Options,
    /// The options object exactly as given, echoed into exported bundles.
    pub raw_options: Map<String, Value>,
}

/// The geometry resolved into the objects the pipeline works on.
pub enum Resolved {
    Surface(SurfaceData),
    Toric(ToricSurface, TDivisor, SurfaceData),
    Bundle(VolumeProfile),
}

impl InputDocument {
    pub fn kind(&self) -> &'static str {
        match self.geometry {
            Geometry::Surface(_) => "surface",
            Geometry::Toric(_) => "toric",
            Geometry::Bundle(_) => "bundle",
        }
    }

    pub fn resolve(&self) -> crate::Result<Resolved> {
        Ok(match &self.geometry {
            Geometry::Surface(s) => Resolved::Surface(surface_data(s)?),
            Geometry::Toric(t) => {
                let fan = ToricSurface::new(t.rays.clone())?;
                let d = TDivisor(t.boundary.clone());
                let s = fan.to_surface_data(&d)?;
                Resolved::Toric(fan, d, s)
            }
            Geometry::Bundle(b) => Resolved::Bundle(VolumeProfile::from_segments(b.n, b.segments.clone())?),
        })
    }
}

fn surface_data(s: &SurfaceBlock) -> crate::Result<SurfaceData> {
    let lattice = IntersectionLattice::new(s.basis.clone(), s.gram.clone(), 2)?;
    let cls = |v: &Vec<Rat>| DivisorClass(v.clone());
    let mut out = SurfaceData::new(
        lattice,
        cls(&s.canonical),
        cls(&s.boundary),
        s.negative_curves.iter().map(cls).collect(),
    )?
    .with_test_curves(s.test_curves.iter().map(cls).collect())?;
    if let Some(l) = &s.curve_labels {
        out = out.with_labels(l.clone())?;
    }
    if let Some(h) = &s.ample {
        out = out.with_ample(cls(h))?;
    }
    Ok(out)
}

struct Parser {
    diags: Vec<Diagnostic>,
}

impl Parser {
    fn err(&mut self, path: &str, msg: impl Into<String>) {
        self.diags.push(Diagnostic { path: path.to_string(), message: msg.into() });
    }

    fn rat(&mut self, v: &Value, path: &str) -> Option<Rat> {
        match v {
            Value::String(s) => {
                let r = parse_rat(s);
                if r.is_none() {
                    self.err(path, format!("cannot read {s:?} as a rational; use \"p/q\""));
                }
                r
            }
            Value::Number(n) if n.is_i64() => Some(Rat::from_integer(n.as_i64().expect("i64").into())),
            Value::Number(_) => {
                self.err(path, "non-integer numbers must be given as \"p/q\" strings");
                None
            }
            _ => {
                self.err(path, "expected a rational as a \"p/q\" string");
                None
            }
        }
    }

    fn rat_list(&mut self, v: &Value, path: &str) -> Option<Vec<Rat>> {
        let Some(items) = v.as_array() else {
            self.err(path, "expected a list of rationals");
            return None;
        };
        let out: Vec<Option<Rat>> = items
            .iter()
            .enumerate()
            .map(|(i, x)| self.rat(x, &format!("{path}[{i}]")))
            .collect();
        out.into_iter().collect()
    }

    fn rat_matrix(&mut self, v: &Value, path: &str) -> Option<Vec<Vec<Rat>>> {
        let Some(rows) = v.as_array() else {
            self.err(path, "expected a list of lists");
            return None;
        };
        let out: Vec<Option<Vec<Rat>>> = rows
            .iter()
            .enumerate()
            .map(|(i, r)| self.rat_list(r, &format!("{path}[{i}]")))
            .collect();
        out.into_iter().collect()
    }

    fn strings(&mut self, v: &Value, path: &str) -> Option<Vec<String>> {
        let out: Option<Vec<String>> = v
            .as_array()
            .and_then(|a| a.iter().map(|x| x.as_str().map(str::to_string)).collect());
        if out.is_none() {
            self.err(path, "expected a list of strings");
        }
        out
    }

    fn uint(&mut self, v: &Value, path: &str) -> Option<u64> {
        let out = v.as_u64().filter(|n| *n > 0);
        if out.is_none() {
            self.err(path, "expected a positive integer");
        }
        out
    }

    fn required<'a>(&mut self, obj: &'a Map<String, Value>, key: &str, path: &str) -> Option<&'a Value> {
        let v = obj.get(key);
        if v.is_none() {
            self.err(&format!("{path}.{key}"), "required field is missing");
        }
        v
    }

    fn unknown_keys(&mut self, obj: &Map<String, Value>, allowed: &[&str], path: &str) {
        for k in obj.keys() {
            if !allowed.contains(&k.as_str()) {
                self.err(&format!("{path}.{k}"), "unknown field");
            }
        }
    }

    fn surface(&mut self, v: &Value) -> Option<SurfaceBlock> {
        let p = "$.surface";
        let Some(o) = v.as_object() else {
            self.err(p, "expected an object");
            return None;
        };
        self.unknown_keys(
            o,
            &["basis", "gram", "canonical", "boundary", "negative_curves", "curve_labels", "test_curves", "ample"],
            p,
        );
        let basis = self.required(o, "basis", p).and_then(|v| self.strings(v, &format!("{p}.basis")));
        let gram = self.required(o, "gram", p).and_then(|v| self.rat_matrix(v, &format!("{p}.gram")));
        let canonical = self
            .required(o, "canonical", p)
            .and_then(|v| self.rat_list(v, &format!("{p}.canonical")));
        let boundary = self
            .required(o, "boundary", p)
            .and_then(|v| self.rat_list(v, &format!("{p}.boundary")));
        let negative_curves = match o.get("negative_curves") {
            Some(v) => self.rat_matrix(v, &format!("{p}.negative_curves")),
            None => Some(Vec::new()),
        };
        let test_curves = match o.get("test_curves") {
            Some(v) => self.rat_matrix(v, &format!("{p}.test_curves")),
            None => Some(Vec::new()),
        };
        let curve_labels = o.get("curve_labels").map(|v| self.strings(v, &format!("{p}.curve_labels")));
        let ample = o.get("ample").map(|v| self.rat_list(v, &format!("{p}.ample")));
        let block = SurfaceBlock {
            basis: basis?,
            gram: gram?,
            canonical: canonical?,
            boundary: boundary?,
            negative_curves: negative_curves?,
            curve_labels: curve_labels.map_or(Some(None), |l| l.map(Some))?,
            test_curves: test_curves?,
            ample: ample.map_or(Some(None), |a| a.map(Some))?,
        };
        self.check_surface(&block);
        Some(block)
    }

    fn check_surface(&mut self, s: &SurfaceBlock) {
        let p = "$.surface";
        let r = s.basis.len();
        if s.gram.len() != r {
            self.err(&format!("{p}.gram"), format!("expected {r} rows to match the basis, got {}", s.gram.len()));
            return;
        }
        for (i, row) in s.gram.iter().enumerate() {
            if row.len() != r {
                self.err(&format!("{p}.gram[{i}]"), format!("expected {r} entries, got {}", row.len()));
                return;
            }
        }
        for i in 0..r {
            for j in i + 1..r {
                if s.gram[i][j] != s.gram[j][i] {
                    self.err(
                        &format!("{p}.gram[{i}][{j}]"),
                        format!(
                            "gram is not symmetric: ({}, {}) = {} but ({}, {}) = {}",
                            s.basis[i],
                            s.basis[j],
                            fmt_rat(&s.gram[i][j]),
                            s.basis[j],
                            s.basis[i],
                            fmt_rat(&s.gram[j][i])
                        ),
                    );
                }
            }
        }
        let mut len_ok = true;
        let mut check_len = |this: &mut Parser, v: &[Rat], path: String| {
            if v.len() != r {
                this.err(&path, format!("class has {} coefficients, basis has {r}", v.len()));
                len_ok = false;
            }
        };
        check_len(self, &s.canonical, format!("{p}.canonical"));
        check_len(self, &s.boundary, format!("{p}.boundary"));
        for (i, c) in s.negative_curves.iter().enumerate() {
            check_len(self, c, format!("{p}.negative_curves[{i}]"));
        }
        for (i, c) in s.test_curves.iter().enumerate() {
            check_len(self, c, format!("{p}.test_curves[{i}]"));
        }
        if let Some(h) = &s.ample {
            check_len(self, h, format!("{p}.ample"));
        }
        if let Some(l) = &s.curve_labels {
            if l.len() != s.negative_curves.len() {
                self.err(&format!("{p}.curve_labels"), "one label per negative curve is required");
            }
        }
        if !len_ok {
            return;
        }
        if s.boundary.iter().all(Zero::is_zero) {
            self.err(
                &format!("{p}.boundary"),
                "boundary divisor D must be nonzero (the pair needs a nonzero reduced boundary)",
            );
        }
        let pair = |a: &[Rat], b: &[Rat]| -> Rat {
            let mut acc = Rat::zero();
            for (i, x) in a.iter().enumerate() {
                for (j, y) in b.iter().enumerate() {
                    acc += x * &s.gram[i][j] * y;
                }
            }
            acc
        };
        for (i, c) in s.negative_curves.iter().enumerate() {
            if pair(c, c) >= Rat::zero() {
                self.err(
                    &format!("{p}.negative_curves[{i}]"),
                    format!("self-intersection is {}, must be negative", fmt_rat(&pair(c, c))),
                );
            }
        }
    }

    fn toric(&mut self, v: &Value) -> Option<ToricBlock> {
        let p = "$.toric";
        let Some(o) = v.as_object() else {
            self.err(p, "expected an object");
            return None;
        };
        self.unknown_keys(o, &["rays", "boundary_ray_coeffs", "boundary_class"], p);
        let rays = self.required(o, "rays", p).and_then(|v| {
            let out: Option<Vec<(i64, i64)>> = v.as_array().and_then(|a| {
                a.iter()
                    .map(|r| match r.as_array().map(Vec::as_slice) {
                        Some([x, y]) => Some((x.as_i64()?, y.as_i64()?)),
                        _ => None,
                    })
                    .collect()
            });
            if out.is_none() {
                self.err(&format!("{p}.rays"), "expected a list of integer pairs [a, b]");
            }
            out
        });
        let boundary = match (o.get("boundary_ray_coeffs"), o.get("boundary_class")) {
            (Some(v), None) => self.rat_list(v, &format!("{p}.boundary_ray_coeffs")),
            (None, Some(v)) => self.rat_list(v, &format!("{p}.boundary_class")),
            (Some(_), Some(_)) => {
                self.err(p, "give exactly one of boundary_ray_coeffs and boundary_class");
                None
            }
            (None, None) => {
                self.err(&format!("{p}.boundary_ray_coeffs"), "required field is missing");
                None
            }
        };
        let (rays, boundary) = (rays?, boundary?);
        if rays.len() != boundary.len() {
            self.err(
                &format!("{p}.boundary_ray_coeffs"),
                format!("{} coefficients for {} rays", boundary.len(), rays.len()),
            );
        } else if boundary.iter().all(Zero::is_zero) {
            self.err(&format!("{p}.boundary_ray_coeffs"), "boundary divisor D must be nonzero");
        } else if let Err(e) = ToricSurface::new(rays.clone()) {
            self.err(&format!("{p}.rays"), e.to_string());
        }
        Some(ToricBlock { rays, boundary })
    }

    fn poly(&mut self, v: &Value, path: &str) -> Option<Poly> {
        self.rat_list(v, path).map(Poly::new)
    }

    fn bundle(&mut self, v: &Value) -> Option<BundleBlock> {
        let p = "$.bundle";
        let Some(o) = v.as_object() else {
            self.err(p, "expected an object");
            return None;
        };
        self.unknown_keys(o, &["n", "variable", "segments"], p);
        if let Some(var) = o.get("variable") {
            if var.as_str() != Some("t") {
                self.err(&format!("{p}.variable"), "only the unshifted variable \"t\" is supported");
            }
        }
        let n = self.required(o, "n", p).and_then(|v| self.uint(v, &format!("{p}.n")));
        let segs = self.required(o, "segments", p).and_then(|v| {
            let a = v.as_array();
            if a.is_none() {
                self.err(&format!("{p}.segments"), "expected a list of segments");
            }
            a
        })?;
        let mut segments = Vec::new();
        for (i, s) in segs.iter().enumerate() {
            let sp = format!("{p}.segments[{i}]");
            let Some(so) = s.as_object() else {
                self.err(&sp, "expected an object");
                continue;
            };
            self.unknown_keys(so, &["t_lo", "t_hi", "vol", "s", "kappa"], &sp);
            let t_lo = self.required(so, "t_lo", &sp).and_then(|v| self.rat(v, &format!("{sp}.t_lo")));
            let t_hi = self.required(so, "t_hi", &sp).and_then(|v| self.rat(v, &format!("{sp}.t_hi")));
            let vol = self.required(so, "vol", &sp).and_then(|v| self.poly(v, &format!("{sp}.vol")));
            let sd = self.required(so, "s", &sp).and_then(|v| self.poly(v, &format!("{sp}.s")));
            let kappa = so.get("kappa").map(|v| self.poly(v, &format!("{sp}.kappa")));
            if let (Some(t_lo), Some(t_hi), Some(vol), Some(s)) = (t_lo, t_hi, vol, sd) {
                segments.push(ProfileSegment { t_lo, t_hi, vol, s, kappa: kappa.flatten() });
            }
        }
        let n = n?;
        if segments.len() == segs.len() {
            if let Err(e) = VolumeProfile::from_segments(n as usize, segments.clone()) {
                self.err(&format!("{p}.segments"), e.to_string());
            }
        }
        Some(BundleBlock { n: n as usize, segments })
    }

    fn beta(&mut self, v: &Value, path: &str) -> Option<Rat> {
        let b = self.rat(v, path)?;
        if b < Rat::zero() || b > Rat::one() {
            self.err(path, format!("beta = {} is outside the range [0, 1]", fmt_rat(&b)));
            return None;
        }
        Some(b)
    }

    fn options(&mut self, o: &Map<String, Value>) -> Options {
        let mut opts = Options::default();
        if let Some(v) = o.get("beta") {
            opts.beta = self.beta(v, "$.beta");
        }
        if let Some(v) = o.get("beta_scan") {
            opts.beta_scan = match v {
                Value::Array(items) => items
                    .iter()
                    .enumerate()
                    .map(|(i, x)| self.beta(x, &format!("$.beta_scan[{i}]")))
                    .collect(),
                Value::String(s) => match parse_scan(s) {
                    Ok(list) => Some(list),
                    Err(m) => {
                        self.err("$.beta_scan", m);
                        None
                    }
                },
                _ => {
                    self.err("$.beta_scan", "expected a list of rationals or \"lo:hi:step\"");
                    None
                }
            };
        }
        if let Some(v) = o.get("r") {
            match v {
                Value::String(s) if s == "auto" => opts.r = RChoice::Auto,
                _ => {
                    if let Some(r) = self.uint(v, "$.r") {
                        opts.r = RChoice::Fixed(r);
                    }
                }
            }
        }
        if let Some(v) = o.get("verify_toric") {
            if !v.is_null() {
                opts.verify_toric = self.uint(v, "$.verify_toric");
            }
        }
        opts
    }
}

pub const OPTION_KEYS: [&str; 4] = ["beta", "beta_scan", "r", "verify_toric"];

/// `lo:hi:step`, inclusive of `hi` when it lies on the grid.
pub fn parse_scan(s: &str) -> Result<Vec<Rat>, String> {
    let parts: Vec<&str> = s.split(':').collect();
    let [lo, hi, step] = parts.as_slice() else {
        return Err(format!("{s:?} is not of the form lo:hi:step"));
    };
    let read = |x: &str| parse_rat(x).ok_or_else(|| format!("cannot read {x:?} as a rational"));
    let (lo, hi, step) = (read(lo)?, read(hi)?, read(step)?);
    if step <= Rat::zero() {
        return Err("scan step must be positive".into());
    }
    if lo < Rat::zero() || hi > Rat::one() || lo > hi {
        return Err(format!("scan range {}:{} must lie in [0, 1]", fmt_rat(&lo), fmt_rat(&hi)));
    }
    let mut out = Vec::new();
    let mut b = lo;
    while b <= hi {
        out.push(b.clone());
        b += &step;
    }
    Ok(out)
}

/// Parses a document. On failure, every problem found is returned.
pub fn parse_document(v: &Value) -> Result<InputDocument, Vec<Diagnostic>> {
    let mut p = Parser { diags: Vec::new() };
    let Some(o) = v.as_object() else {
        return Err(vec![Diagnostic { path: "$".into(), message: "expected a JSON object".into() }]);
    };
    let mut allowed: Vec<&str> = vec!["surface", "toric", "bundle"];
    allowed.extend(OPTION_KEYS);
    p.unknown_keys(o, &allowed, "$");
    let present: Vec<&str> = ["surface", "toric", "bundle"]
        .into_iter()
        .filter(|k| o.contains_key(*k))
        .collect();
    let geometry = match present.as_slice() {
        ["surface"] => p.surface(&o["surface"]).map(Geometry::Surface),
        ["toric"] => p.toric(&o["toric"]).map(Geometry::Toric),
        ["bundle"] => p.bundle(&o["bundle"]).map(Geometry::Bundle),
        [] => {
            p.err("$", "exactly one of surface, toric or bundle is required");
            None
        }
        _ => {
            p.err("$", format!("exactly one geometry block is allowed, found {}", present.join(", ")));
            None
        }
    };
    let options = p.options(o);
    let raw_options = OPTION_KEYS
        .iter()
        .filter_map(|k| o.get(*k).map(|v| (k.to_string(), v.clone())))
        .collect();
    match geometry {
        Some(geometry) if p.diags.is_empty() => Ok(InputDocument { geometry, options, raw_options }),
        _ => Err(p.diags),
    }
}

/// Checks that need the whole document: the positivity of `-K - (1-β)D`
/// against the supplied curves at each requested β, and option/geometry
/// compatibility.
pub fn semantic_checks(doc: &InputDocument) -> Vec<Diagnostic> {
    let mut out = Vec::new();
    if doc.options.verify_toric.is_some() && !matches!(doc.geometry, Geometry::Toric(_)) {
        out.push(Diagnostic {
            path: "$.verify_toric".into(),
            message: "toric verification needs a toric input".into(),
        });
    }
    let surface = match doc.resolve() {
        Ok(Resolved::Surface(s)) | Ok(Resolved::Toric(_, _, s)) => s,
        Ok(Resolved::Bundle(_)) => return out,
        Err(e) => {
            out.push(Diagnostic { path: format!("$.{}", doc.kind()), message: e.to_string() });
            return out;
        }
    };
    for b in doc.options.betas() {
        let l = crate::stability::l_beta(&surface, &b);
        if !surface.is_ample_against(&l) {
            out.push(Diagnostic {
                path: "$.beta".into(),
                message: format!(
                    "-K_X - (1-beta)D is not positive against the supplied curves at beta = {}",
                    fmt_rat(&b)
                ),
            });
        }
    }
    out
}

/// Full validation: empty iff [`crate::cli::run`] raises no schema error.
pub fn validate(v: &Value) -> Vec<Diagnostic> {
    match parse_document(v) {
        Ok(doc) => semantic_checks(&doc),
        Err(d) => d,
    }
}

/// A bundle document (unshifted variable `t`) for a computed profile, carrying
/// the original options so it can be fed back as input.
pub fn bundle_document(p: &VolumeProfile, options: &Map<String, Value>) -> crate::Result<Value> {
    let segs: Vec<Value> = p
        .segments()?
        .iter()
        .map(|s| {
            let mut m = Map::new();
            m.insert("t_lo".into(), json!(fmt_rat(&s.t_lo)));
            m.insert("t_hi".into(), json!(fmt_rat(&s.t_hi)));
            m.insert("vol".into(), json!(s.vol.to_strings()));
            m.insert("s".into(), json!(s.s.to_strings()));
            if let Some(k) = &s.kappa {
                m.insert("kappa".into(), json!(k.to_strings()));
            }
            Value::Object(m)
        })
        .collect();
    let mut doc = Map::new();
    doc.insert(
        "bundle".into(),
        json!({ "n": p.dimension_n, "variable": "t", "segments": segs }),
    );
    for (k, v) in options {
        doc.insert(k.clone(), v.clone());
    }
    Ok(Value::Object(doc))
}
