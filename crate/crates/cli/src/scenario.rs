//! Scenario configuration: a flat `key = value` text format with dotted
//! keys (a JSON object with the same keys, nested or flat, is also
//! accepted), plus the built-in preset library.
//!
//! Numeric values understand multiples of pi (`pi`, `-pi/3`, `2pi/256`),
//! `gamma` additionally accepts the token `h^(-1/4)`, `eta0` the token
//! `pi-split`, and radii accept window fractions like `L/16`.

use gridwave_core::evolution::PhaseSign;
use serde_json::Value;
use std::collections::BTreeMap;
use std::f64::consts::PI;
use std::fmt;

/// Concentration parameter: fixed, or tied to the mesh step.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum GammaSpec {
    Fixed(f64),
    /// The token `h^(-1/4)`.
    InverseQuarterRoot,
}

impl GammaSpec {
    pub fn resolve(&self, h: f64) -> f64 {
        match *self {
            GammaSpec::Fixed(g) => g,
            GammaSpec::InverseQuarterRoot => h.powf(-0.25),
        }
    }
}

impl fmt::Display for GammaSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            GammaSpec::Fixed(g) => write!(f, "{g}"),
            GammaSpec::InverseQuarterRoot => write!(f, "h^(-1/4)"),
        }
    }
}

/// Carrier wavenumber: the edge datum or an interior carrier.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Eta0Spec {
    /// The token `pi-split` (also chosen when `eta0 = pi` is given): the
    /// two-half-pick datum at the window edge.
    PiSplit,
    Centered(f64),
}

impl Eta0Spec {
    /// The scalar carrier used by the predictor.
    pub fn carrier(&self) -> f64 {
        match *self {
            Eta0Spec::PiSplit => PI,
            Eta0Spec::Centered(e) => e,
        }
    }
}

impl fmt::Display for Eta0Spec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Eta0Spec::PiSplit => write!(f, "pi-split"),
            Eta0Spec::Centered(e) => write!(f, "{e}"),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SymbolKind {
    Continuous,
    SemiDiscrete,
}

impl fmt::Display for SymbolKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SymbolKind::Continuous => write!(f, "continuous"),
            SymbolKind::SemiDiscrete => write!(f, "semidiscrete"),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ProjectionChoice {
    None,
    Restrict,
    Average,
}

impl ProjectionChoice {
    pub fn as_option(&self) -> Option<gridwave_core::bigrid::Projection> {
        match self {
            ProjectionChoice::None => None,
            ProjectionChoice::Restrict => Some(gridwave_core::bigrid::Projection::Restrict),
            ProjectionChoice::Average => Some(gridwave_core::bigrid::Projection::Average),
        }
    }
}

impl fmt::Display for ProjectionChoice {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ProjectionChoice::None => write!(f, "none"),
            ProjectionChoice::Restrict => write!(f, "restrict"),
            ProjectionChoice::Average => write!(f, "average"),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub enum OutputKind {
    Timeseries,
    Snapshots,
    Norms,
    Prediction,
    Comparison,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum RadiusSpec {
    /// Fraction of the window length, `L/den`.
    WindowFraction(f64),
    Absolute(f64),
}

impl RadiusSpec {
    pub fn resolve(&self, window_length: f64) -> f64 {
        match *self {
            RadiusSpec::WindowFraction(den) => window_length / den,
            RadiusSpec::Absolute(r) => r,
        }
    }
}

/// Relative tolerances applied by `compare --strict`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CompareTolerances {
    pub velocity: f64,
    pub amplitude: f64,
    pub width: f64,
}

impl Default for CompareTolerances {
    fn default() -> Self {
        CompareTolerances {
            velocity: 0.02,
            amplitude: 0.07,
            width: 0.15,
        }
    }
}

/// A fully described experiment.
#[derive(Debug, Clone, PartialEq)]
pub struct Scenario {
    pub scenario_id: String,
    pub h: f64,
    pub m: usize,
    pub gamma: GammaSpec,
    pub eta0: Eta0Spec,
    pub band: (f64, f64),
    pub symbol: SymbolKind,
    pub k: u32,
    pub projection: ProjectionChoice,
    pub t_final: f64,
    pub n_samples: usize,
    pub sign: PhaseSign,
    pub outputs: Vec<OutputKind>,
    pub norms_p: f64,
    pub radii: Vec<RadiusSpec>,
    pub tolerances: CompareTolerances,
}

impl Scenario {
    /// A desk-scale template: `h = 2*pi/256`, `M = 2048`, `gamma = h^(-1/4)`.
    pub fn desk(scenario_id: &str, eta0: Eta0Spec) -> Scenario {
        Scenario {
            scenario_id: scenario_id.to_string(),
            h: 2.0 * PI / 256.0,
            m: 2048,
            gamma: GammaSpec::InverseQuarterRoot,
            eta0,
            band: (-PI, PI),
            symbol: SymbolKind::SemiDiscrete,
            k: 0,
            projection: ProjectionChoice::None,
            t_final: 0.2,
            n_samples: 41,
            sign: PhaseSign::Plus,
            outputs: vec![
                OutputKind::Timeseries,
                OutputKind::Snapshots,
                OutputKind::Prediction,
                OutputKind::Comparison,
            ],
            norms_p: 6.0,
            radii: vec![
                RadiusSpec::WindowFraction(16.0),
                RadiusSpec::WindowFraction(8.0),
                RadiusSpec::WindowFraction(4.0),
            ],
            tolerances: CompareTolerances::default(),
        }
    }

    pub fn resolved_gamma(&self) -> f64 {
        self.gamma.resolve(self.h)
    }

    /// Metadata embedded in every output file.
    pub fn meta(&self) -> Vec<(String, String)> {
        vec![
            ("scenario_id".into(), self.scenario_id.clone()),
            ("h".into(), format!("{:.16e}", self.h)),
            ("M".into(), self.m.to_string()),
            ("gamma".into(), format!("{:.16e}", self.resolved_gamma())),
            ("k".into(), self.k.to_string()),
            ("projection".into(), self.projection.to_string()),
            (
                "sign".into(),
                match self.sign {
                    PhaseSign::Plus => "+".into(),
                    PhaseSign::Minus => "-".into(),
                },
            ),
            ("version".into(), env!("CARGO_PKG_VERSION").into()),
        ]
    }

    /// Checks every module precondition up front; all violations are
    /// reported together.
    pub fn validate(&self) -> Result<(), Vec<String>> {
        let mut bad = Vec::new();
        if !(self.h > 0.0) || !self.h.is_finite() {
            bad.push(format!("h must be positive and finite, got {}", self.h));
        }
        if self.m < 4 || !self.m.is_power_of_two() {
            bad.push(format!("M must be a power of two >= 4, got {}", self.m));
        }
        let gamma = self.resolved_gamma();
        if !(gamma > 0.0) || !gamma.is_finite() {
            bad.push(format!(
                "gamma must resolve to a positive number, got {gamma}"
            ));
        }
        match self.eta0 {
            Eta0Spec::Centered(e) => {
                if !(-PI < e && e < PI) {
                    bad.push(format!(
                        "eta0 must lie in (-pi, pi) or be pi/pi-split, got {e}"
                    ));
                }
            }
            Eta0Spec::PiSplit => {
                if (self.band.0 + PI).abs() > 1e-12 || (self.band.1 - PI).abs() > 1e-12 {
                    bad.push("the pi-split datum fixes band = (-pi, pi)".into());
                }
            }
        }
        if !(self.band.0 < self.band.1) {
            bad.push(format!("band ({}, {}) is empty", self.band.0, self.band.1));
        }
        if self.band.0 < -PI - 1e-12 || self.band.1 > PI + 1e-12 {
            bad.push(format!(
                "band ({}, {}) exceeds the Brillouin window",
                self.band.0, self.band.1
            ));
        }
        if self.k > 0 && self.projection != ProjectionChoice::None {
            let n = 1usize << self.k.min(63);
            if !self.m.is_multiple_of(n) || self.m / n < 4 {
                bad.push(format!(
                    "M = {} cannot host bigrid level k = {} (coarse grid needs >= 4 nodes)",
                    self.m, self.k
                ));
            }
        }
        if !(self.t_final > 0.0) {
            bad.push(format!("time.T must be positive, got {}", self.t_final));
        }
        if self.n_samples < 2 {
            bad.push(format!(
                "time.n_samples must be >= 2, got {}",
                self.n_samples
            ));
        }
        if self.outputs.contains(&OutputKind::Norms) && self.n_samples < 16 {
            bad.push(format!(
                "norm measurements need time.n_samples >= 16, got {}",
                self.n_samples
            ));
        }
        if !(self.norms_p >= 2.0) {
            bad.push(format!("norms.p must be >= 2, got {}", self.norms_p));
        }
        if self.radii.is_empty() {
            bad.push("norms.radii must not be empty".into());
        }
        let half_window = 0.5 * self.m as f64 * self.h;
        for r in &self.radii {
            let v = r.resolve(self.m as f64 * self.h);
            if !(v > 0.0) || v > half_window + 1e-12 {
                bad.push(format!("radius {v} outside (0, L/2]"));
            }
        }
        for (name, tol) in [
            ("compare.tol_velocity", self.tolerances.velocity),
            ("compare.tol_amplitude", self.tolerances.amplitude),
            ("compare.tol_width", self.tolerances.width),
        ] {
            if !(tol > 0.0) {
                bad.push(format!("{name} must be positive, got {tol}"));
            }
        }
        if bad.is_empty() {
            Ok(())
        } else {
            Err(bad)
        }
    }
}

/// Parses decimals and pi-multiples: `0.5`, `pi`, `-pi/3`, `2pi/256`.
pub fn parse_number(text: &str) -> Result<f64, String> {
    let t = text.trim();
    if let Some(idx) = t.find("pi") {
        let coef_str = &t[..idx];
        let rest = &t[idx + 2..];
        let coef = match coef_str.trim() {
            "" | "+" => 1.0,
            "-" => -1.0,
            c => c
                .parse::<f64>()
                .map_err(|_| format!("bad coefficient in '{t}'"))?,
        };
        let den = match rest.trim() {
            "" => 1.0,
            r => r
                .strip_prefix('/')
                .ok_or_else(|| format!("expected '/denominator' after pi in '{t}'"))?
                .trim()
                .parse::<f64>()
                .map_err(|_| format!("bad denominator in '{t}'"))?,
        };
        if den == 0.0 {
            return Err(format!("zero denominator in '{t}'"));
        }
        Ok(coef * PI / den)
    } else {
        t.parse::<f64>()
            .map_err(|_| format!("cannot parse number '{t}'"))
    }
}

fn parse_radius(text: &str) -> Result<RadiusSpec, String> {
    let t = text.trim();
    if let Some(rest) = t.strip_prefix("L/") {
        let den = rest
            .trim()
            .parse::<f64>()
            .map_err(|_| format!("bad window fraction '{t}'"))?;
        if !(den > 0.0) {
            return Err(format!(
                "window fraction denominator must be positive in '{t}'"
            ));
        }
        Ok(RadiusSpec::WindowFraction(den))
    } else {
        Ok(RadiusSpec::Absolute(parse_number(t)?))
    }
}

fn parse_outputs(text: &str) -> Result<Vec<OutputKind>, String> {
    let mut outputs = Vec::new();
    for token in text.split(',') {
        let kind = match token.trim() {
            "" => continue,
            "timeseries" => OutputKind::Timeseries,
            "snapshots" => OutputKind::Snapshots,
            "norms" => OutputKind::Norms,
            "prediction" => OutputKind::Prediction,
            "comparison" => OutputKind::Comparison,
            other => return Err(format!("unknown output kind '{other}'")),
        };
        if !outputs.contains(&kind) {
            outputs.push(kind);
        }
    }
    if outputs.is_empty() {
        return Err("outputs list is empty".into());
    }
    Ok(outputs)
}

/// Builds a scenario from flat key/value pairs; unknown keys and malformed
/// values are all reported together.
pub fn scenario_from_pairs(pairs: &BTreeMap<String, String>) -> Result<Scenario, Vec<String>> {
    let mut bad = Vec::new();
    let mut sc = Scenario::desk("unnamed", Eta0Spec::Centered(0.0));
    let mut n_samples_given = false;
    let have = |key: &str| pairs.contains_key(key);

    for (key, value) in pairs {
        let r: Result<(), String> = (|| {
            match key.as_str() {
                "scenario_id" => sc.scenario_id = value.clone(),
                "h" => sc.h = parse_number(value)?,
                "M" | "m" => {
                    sc.m = value
                        .trim()
                        .parse::<usize>()
                        .map_err(|_| format!("bad node count '{value}'"))?
                }
                "gamma" => {
                    sc.gamma = if value.trim() == "h^(-1/4)" {
                        GammaSpec::InverseQuarterRoot
                    } else {
                        GammaSpec::Fixed(parse_number(value)?)
                    }
                }
                "eta0" => {
                    sc.eta0 = if value.trim() == "pi-split" {
                        Eta0Spec::PiSplit
                    } else {
                        let e = parse_number(value)?;
                        if (e - PI).abs() <= 1e-12 {
                            Eta0Spec::PiSplit
                        } else {
                            Eta0Spec::Centered(e)
                        }
                    }
                }
                "band" => {
                    let parts: Vec<&str> = value.split(',').collect();
                    if parts.len() != 2 {
                        return Err(format!("band needs two numbers, got '{value}'"));
                    }
                    sc.band = (parse_number(parts[0])?, parse_number(parts[1])?);
                }
                "symbol" => {
                    sc.symbol = match value.trim() {
                        "continuous" => SymbolKind::Continuous,
                        "semidiscrete" => SymbolKind::SemiDiscrete,
                        other => return Err(format!("unknown symbol '{other}'")),
                    }
                }
                "bigrid.k" => {
                    sc.k = value
                        .trim()
                        .parse::<u32>()
                        .map_err(|_| format!("bad bigrid.k '{value}'"))?
                }
                "bigrid.projection" => {
                    sc.projection = match value.trim() {
                        "none" => ProjectionChoice::None,
                        "restrict" => ProjectionChoice::Restrict,
                        "average" => ProjectionChoice::Average,
                        other => return Err(format!("unknown projection '{other}'")),
                    }
                }
                "time.T" => sc.t_final = parse_number(value)?,
                "time.n_samples" => {
                    sc.n_samples = value
                        .trim()
                        .parse::<usize>()
                        .map_err(|_| format!("bad time.n_samples '{value}'"))?;
                    n_samples_given = true;
                }
                "sign" => {
                    sc.sign = match value.trim() {
                        "+" => PhaseSign::Plus,
                        "-" => PhaseSign::Minus,
                        other => return Err(format!("sign must be + or -, got '{other}'")),
                    }
                }
                "outputs" => sc.outputs = parse_outputs(value)?,
                "norms.p" => sc.norms_p = parse_number(value)?,
                "norms.radii" => {
                    let radii: Result<Vec<RadiusSpec>, String> =
                        value.split(',').map(parse_radius).collect();
                    sc.radii = radii?;
                }
                "compare.tol_velocity" => sc.tolerances.velocity = parse_number(value)?,
                "compare.tol_amplitude" => sc.tolerances.amplitude = parse_number(value)?,
                "compare.tol_width" => sc.tolerances.width = parse_number(value)?,
                other => return Err(format!("unknown key '{other}'")),
            }
            Ok(())
        })();
        if let Err(msg) = r {
            bad.push(msg);
        }
    }

    for required in ["scenario_id", "h", "M", "gamma", "eta0"] {
        if !have(required) && !(required == "M" && have("m")) {
            bad.push(format!("missing required key '{required}'"));
        }
    }
    if !n_samples_given {
        // default sampling density: 64 samples per unit time
        sc.n_samples = ((64.0 * sc.t_final).ceil() as usize).max(16);
    }

    if bad.is_empty() {
        Ok(sc)
    } else {
        Err(bad)
    }
}

/// Parses the `key = value` text format (full-line and trailing `#`
/// comments allowed).
pub fn parse_scenario_text(text: &str) -> Result<Scenario, Vec<String>> {
    let mut pairs = BTreeMap::new();
    let mut bad = Vec::new();
    for (lineno, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        match line.split_once('=') {
            Some((key, value)) => {
                if pairs
                    .insert(key.trim().to_string(), value.trim().to_string())
                    .is_some()
                {
                    bad.push(format!(
                        "line {}: duplicate key '{}'",
                        lineno + 1,
                        key.trim()
                    ));
                }
            }
            None => bad.push(format!(
                "line {}: expected 'key = value', got '{line}'",
                lineno + 1
            )),
        }
    }
    if !bad.is_empty() {
        return Err(bad);
    }
    scenario_from_pairs(&pairs)
}

fn flatten_json(prefix: &str, value: &Value, out: &mut BTreeMap<String, String>) {
    match value {
        Value::Object(map) => {
            for (k, v) in map {
                let key = if prefix.is_empty() {
                    k.clone()
                } else {
                    format!("{prefix}.{k}")
                };
                flatten_json(&key, v, out);
            }
        }
        Value::Array(items) => {
            let joined: Vec<String> = items
                .iter()
                .map(|v| match v {
                    Value::String(s) => s.clone(),
                    other => other.to_string(),
                })
                .collect();
            out.insert(prefix.to_string(), joined.join(","));
        }
        Value::String(s) => {
            out.insert(prefix.to_string(), s.clone());
        }
        other => {
            out.insert(prefix.to_string(), other.to_string());
        }
    }
}

/// Parses the JSON equivalent of the text format: one object, flat dotted
/// keys or nested sections.
pub fn parse_scenario_json(text: &str) -> Result<Scenario, Vec<String>> {
    let value: Value =
        serde_json::from_str(text).map_err(|e| vec![format!("invalid JSON: {e}")])?;
    if !value.is_object() {
        return Err(vec!["scenario JSON must be an object".into()]);
    }
    let mut pairs = BTreeMap::new();
    flatten_json("", &value, &mut pairs);
    scenario_from_pairs(&pairs)
}

/// Dispatches on the payload: JSON when it starts with `{`, text otherwise.
pub fn parse_scenario(text: &str) -> Result<Scenario, Vec<String>> {
    if text.trim_start().starts_with('{') {
        parse_scenario_json(text)
    } else {
        parse_scenario_text(text)
    }
}

/// The named preset library: projection snapshots of the three reference
/// data at both mesh ratios, and the four evolution comparisons.
pub fn preset_names() -> Vec<&'static str> {
    vec!["fig1-k1", "fig1-k2", "fig3-a", "fig3-b", "fig3-c", "fig3-d"]
}

pub fn preset(name: &str) -> Option<Vec<Scenario>> {
    let data = [
        ("pi", Eta0Spec::PiSplit),
        ("pi2", Eta0Spec::Centered(PI / 2.0)),
        ("2pi3", Eta0Spec::Centered(2.0 * PI / 3.0)),
    ];
    let projection_set = |tag: &str, k: u32| -> Vec<Scenario> {
        data.iter()
            .map(|(suffix, eta0)| {
                let mut sc = Scenario::desk(&format!("{tag}-{suffix}"), *eta0);
                sc.k = k;
                sc.projection = ProjectionChoice::Restrict;
                sc.outputs = vec![OutputKind::Snapshots, OutputKind::Prediction];
                sc
            })
            .collect()
    };
    let evolution_set =
        |tag: &str, eta0: Eta0Spec, projection: ProjectionChoice| -> Vec<Scenario> {
            (0..=2u32)
                .map(|k| {
                    let mut sc = Scenario::desk(&format!("{tag}-k{k}"), eta0);
                    sc.k = k;
                    sc.projection = if k == 0 {
                        ProjectionChoice::None
                    } else {
                        projection
                    };
                    sc
                })
                .collect()
        };
    match name {
        "fig1-k1" => Some(projection_set("fig1-k1", 1)),
        "fig1-k2" => Some(projection_set("fig1-k2", 2)),
        "fig3-a" => Some(evolution_set(
            "fig3-a",
            Eta0Spec::Centered(PI / 2.0),
            ProjectionChoice::Restrict,
        )),
        "fig3-b" => Some(evolution_set(
            "fig3-b",
            Eta0Spec::Centered(PI / 2.0),
            ProjectionChoice::Average,
        )),
        "fig3-c" => Some(evolution_set(
            "fig3-c",
            Eta0Spec::PiSplit,
            ProjectionChoice::Restrict,
        )),
        "fig3-d" => Some(evolution_set(
            "fig3-d",
            Eta0Spec::Centered(2.0 * PI / 3.0),
            ProjectionChoice::Restrict,
        )),
        _ => None,
    }
}

/// Every scenario shipped in the preset library.
pub fn all_preset_scenarios() -> Vec<Scenario> {
    preset_names()
        .into_iter()
        .flat_map(|name| preset(name).expect("library presets exist"))
        .collect()
}
