//! Command dispatch for the `qfact` binary. Every command renders one JSON
//! report; the text format is a flattened projection of the same value.

use std::fs;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use qfact::certify::{self, ConstructiveParams, ConstructivePlan, Route, RunOptions, SpecJson, ThreefoldSpec, DEFAULT_SEED};
use qfact::conditions;
use qfact::models;
use qfact::planar::{self, StarParams};
use qfact::pointgeom::{PointSet, PointSetJson, DEFAULT_ENUM_BUDGET};
use qfact::scalar::{FieldSpec, RootChoice};
use qfact::{Error, Result};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde_json::{json, Map, Value};

pub const EXIT_OK: i32 = 0;
pub const EXIT_ERROR: i32 = 1;
pub const EXIT_HYPOTHESIS: i32 = 30;

#[derive(Debug, Parser)]
#[command(name = "qfact", version, about = "Defect computation and Q-factoriality certificates for nodal threefolds")]
pub struct Cli {
    #[command(flatten)]
    pub global: GlobalArgs,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Args)]
pub struct GlobalArgs {
    /// Seed for every randomized choice.
    #[arg(long, global = true, default_value_t = DEFAULT_SEED)]
    pub seed: u64,
    /// Field override: rational, quadratic:D, prime:p or approx:eps.
    #[arg(long, global = true, value_parser = parse_backend)]
    pub backend: Option<FieldSpec>,
    /// Cap on points visited by finite-field enumeration.
    #[arg(long, global = true, default_value_t = DEFAULT_ENUM_BUDGET)]
    pub budget_enum: u128,
    /// Cap on subsets visited by plane-curve searches.
    #[arg(long, global = true, default_value_t = planar::DEFAULT_SUBSET_BUDGET)]
    pub budget_subsets: u64,
    /// Number of Newton starts for the numeric node search.
    #[arg(long, global = true)]
    pub newton_starts: Option<usize>,
    /// Skip the ordinary-double-point check on given nodes.
    #[arg(long, global = true)]
    pub trust_nodes: bool,
    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    pub format: Format,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Text,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum RouteArg {
    Auto,
    Bound,
    Rank,
    Constructive,
    BaseLocus,
}

impl From<RouteArg> for Route {
    fn from(r: RouteArg) -> Self {
        match r {
            RouteArg::Auto => Route::Auto,
            RouteArg::Bound => Route::Bound,
            RouteArg::Rank => Route::Rank,
            RouteArg::Constructive => Route::Constructive,
            RouteArg::BaseLocus => Route::BaseLocus,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum PlanarMode {
    Star,
    Bese,
    Dg,
    Partition,
    Separate,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Find and check the nodes of a threefold spec.
    Nodes { spec: PathBuf },
    /// Rank and defect of a point set in a given degree.
    Defect {
        #[arg(long)]
        degree: u32,
        points: PathBuf,
    },
    /// Constructive separators for a spec, or for a point set with explicit parameters.
    Separate {
        input: PathBuf,
        /// Property ★ multiplier (point-set input).
        #[arg(long)]
        m: Option<usize>,
        /// Separator degree (point-set input).
        #[arg(long)]
        degree: Option<u32>,
        /// Degrees charged per cluster degree above one; defaults to 5 on P⁵ and 4 on P⁴.
        #[arg(long)]
        scale: Option<u32>,
        /// Smallest admissible residual degree; defaults to 5 on P⁵ and 3 on P⁴.
        #[arg(long)]
        gate: Option<u32>,
        /// Separate only this node.
        #[arg(long)]
        index: Option<usize>,
    },
    /// Plane point-set checks.
    Planar {
        points: PathBuf,
        #[arg(long, value_enum)]
        mode: PlanarMode,
        #[arg(long)]
        d: Option<u32>,
        #[arg(long)]
        m: Option<usize>,
        /// Highest curve degree for star and partition.
        #[arg(long, default_value_t = 2)]
        t_max: u32,
        /// Separate only this point.
        #[arg(long)]
        index: Option<usize>,
    },
    /// Certify (or refute) Q-factoriality of a threefold spec.
    Certify {
        spec: PathBuf,
        #[arg(long, value_enum, default_value_t = RouteArg::Auto)]
        route: RouteArg,
    },
    /// Write a named example's spec, or list the examples.
    Examples {
        name: Option<String>,
        #[arg(long)]
        list: bool,
    },
}

/// `rational`, `quadratic:D`, `prime:p` or `approx[:eps]`, or the same as
/// a JSON object.
pub fn parse_backend(s: &str) -> std::result::Result<FieldSpec, String> {
    let t = s.trim();
    if t.starts_with('{') {
        return serde_json::from_str(t).map_err(|e| e.to_string());
    }
    let (name, arg) = t.split_once(':').map_or((t, None), |(a, b)| (a, Some(b)));
    let field = match (name, arg) {
        ("rational", None) => FieldSpec::Rational,
        ("quadratic", Some(d)) => FieldSpec::Quadratic { d: d.parse().map_err(|_| format!("bad discriminant {d:?}"))? },
        ("prime", Some(p)) => FieldSpec::Prime { p: p.parse().map_err(|_| format!("bad prime {p:?}"))? },
        ("approx", None) => FieldSpec::Approx { eps: qfact::scalar::DEFAULT_EPS },
        ("approx", Some(e)) => FieldSpec::Approx { eps: e.parse().map_err(|_| format!("bad eps {e:?}"))? },
        _ => return Err(format!("unknown backend {t:?}")),
    };
    field.validate().map_err(|e| e.to_string())?;
    Ok(field)
}

/// Exit code and rendered report.
#[derive(Debug, Clone, PartialEq)]
pub struct Outcome {
    pub code: i32,
    pub report: Value,
}

impl Outcome {
    pub fn render(&self, format: Format) -> String {
        match format {
            Format::Json => serde_json::to_string_pretty(&self.report).expect("JSON values serialize"),
            Format::Text => {
                let mut out = String::new();
                render_text(&self.report, "", &mut out);
                out
            }
        }
    }
}

fn render_text(v: &Value, prefix: &str, out: &mut String) {
    match v {
        Value::Object(m) => {
            for (k, x) in m {
                let p = if prefix.is_empty() { k.clone() } else { format!("{prefix}.{k}") };
                render_text(x, &p, out);
            }
        }
        Value::Array(a) if a.iter().any(|x| x.is_object() || x.is_array()) => {
            for (i, x) in a.iter().enumerate() {
                render_text(x, &format!("{prefix}[{i}]"), out);
            }
        }
        _ => {
            out.push_str(prefix);
            out.push_str(": ");
            out.push_str(&match v {
                Value::String(s) => s.clone(),
                other => other.to_string(),
            });
            out.push('\n');
        }
    }
}

/// Error object for arguments that do not parse.
pub fn usage_error(message: &str) -> String {
    let v = json!({ "tool": "qfact", "version": env!("CARGO_PKG_VERSION"), "error": { "kind": "Usage", "message": message.trim_end() } });
    serde_json::to_string_pretty(&v).expect("JSON values serialize")
}

fn error_code(e: &Error) -> i32 {
    match e {
        Error::HypothesisViolated(_) => EXIT_HYPOTHESIS,
        _ => EXIT_ERROR,
    }
}

fn read_json(path: &Path) -> Result<Value> {
    let text = fs::read_to_string(path).map_err(|e| Error::InvalidInput(format!("{}: {e}", path.display())))?;
    serde_json::from_str(&text).map_err(|e| Error::Parse(format!("{}: {e}", path.display())))
}

fn from_value<T: serde::de::DeserializeOwned>(v: Value, what: &str) -> Result<T> {
    serde_json::from_value(v).map_err(|e| Error::Parse(format!("{what}: {e}")))
}

fn load_spec(path: &Path, g: &GlobalArgs) -> Result<ThreefoldSpec> {
    let spec = ThreefoldSpec::from_json(&from_value::<SpecJson>(read_json(path)?, "threefold spec")?)?;
    match g.backend {
        Some(target) if target != spec.field => spec.with_backend(target, RootChoice::Smaller),
        _ => Ok(spec),
    }
}

fn load_points(path: &Path, g: &GlobalArgs) -> Result<PointSet> {
    let set = PointSet::from_json(&from_value::<PointSetJson>(read_json(path)?, "point set")?)?;
    match g.backend {
        Some(target) if target != set.field() => set.convert(target, RootChoice::Smaller),
        _ => Ok(set),
    }
}

fn to_value<T: serde::Serialize>(x: &T) -> Value {
    serde_json::to_value(x).expect("reports serialize")
}

fn options(g: &GlobalArgs, route: Route) -> RunOptions {
    RunOptions {
        seed: g.seed,
        budget_enum: g.budget_enum,
        budget_subsets: g.budget_subsets,
        newton_starts: g.newton_starts,
        route,
        trust_nodes: g.trust_nodes,
    }
}

/// Runs one command; errors become an `{"error": {...}}` report.
pub fn run(cli: &Cli) -> Outcome {
    let (code, body) = match dispatch(cli) {
        Ok(ok) => ok,
        Err(e) => (error_code(&e), json!({ "error": { "kind": e.kind(), "message": e.to_string() } })),
    };
    let mut report = Map::new();
    report.insert("tool".into(), json!("qfact"));
    report.insert("version".into(), json!(env!("CARGO_PKG_VERSION")));
    report.insert("command".into(), json!(command_name(&cli.command)));
    report.insert("seed".into(), json!(cli.global.seed));
    if let Value::Object(m) = body {
        report.extend(m);
    }
    Outcome { code, report: Value::Object(report) }
}

fn command_name(c: &Command) -> &'static str {
    match c {
        Command::Nodes { .. } => "nodes",
        Command::Defect { .. } => "defect",
        Command::Separate { .. } => "separate",
        Command::Planar { .. } => "planar",
        Command::Certify { .. } => "certify",
        Command::Examples { .. } => "examples",
    }
}

fn dispatch(cli: &Cli) -> Result<(i32, Value)> {
    let g = &cli.global;
    match &cli.command {
        Command::Nodes { spec } => nodes(&load_spec(spec, g)?, g),
        Command::Defect { degree, points } => {
            let set = load_points(points, g)?;
            let rep = conditions::defect(&set, *degree)?;
            let mut v = to_value(&rep);
            v["field"] = to_value(&set.field());
            Ok((EXIT_OK, v))
        }
        Command::Separate { input, m, degree, scale, gate, index } => {
            let raw = read_json(input)?;
            if raw.get("variant").is_some() {
                if m.is_some() || degree.is_some() || scale.is_some() || gate.is_some() || index.is_some() {
                    return Err(Error::InvalidInput("separator parameters come from the threefold file; drop --m/--degree/--scale/--gate/--index".into()));
                }
                let spec = load_spec(input, g)?;
                let cert = certify::certify(&spec, &options(g, Route::Constructive))?;
                let v = json!({
                    "field": to_value(&cert.field),
                    "verdict": to_value(&cert.verdict),
                    "target_degree": cert.target_degree,
                    "nodes": cert.nodes,
                    "separators": to_value(&cert.separators),
                    "hypothesis_log": to_value(&cert.hypothesis_log),
                });
                Ok((EXIT_OK, v))
            } else {
                let set = load_points(input, g)?;
                let (Some(m), Some(target)) = (*m, *degree) else {
                    return Err(Error::InvalidInput("point-set input needs --m and --degree".into()));
                };
                let p5 = set.ambient() == 5;
                let params = ConstructiveParams {
                    m,
                    s: scale.unwrap_or(if p5 { 5 } else { 4 }),
                    target,
                    gate_min: gate.unwrap_or(if p5 { 5 } else { 3 }),
                    budget_subsets: g.budget_subsets,
                };
                let mut rng = ChaCha8Rng::seed_from_u64(g.seed);
                let plan = ConstructivePlan::new(&set, params, None, &mut rng)?;
                let mut v = match index {
                    Some(i) => {
                        if *i >= set.len() {
                            return Err(Error::InvalidInput(format!("node index {i} out of range")));
                        }
                        json!({ "entry": to_value(&plan.separator(*i, &mut rng)?) })
                    }
                    None => to_value(&plan.bundle(g.seed)),
                };
                v["field"] = to_value(&set.field());
                Ok((EXIT_OK, v))
            }
        }
        Command::Planar { points, mode, d, m, t_max, index } => planar_cmd(&load_points(points, g)?, *mode, *d, *m, *t_max, *index, g),
        Command::Certify { spec, route } => {
            let spec = load_spec(spec, g)?;
            let cert = certify::certify(&spec, &options(g, (*route).into()))?;
            Ok((cert.verdict.exit_code(), to_value(&cert)))
        }
        Command::Examples { name, list } => examples(name.as_deref(), *list, g),
    }
}

fn nodes(spec: &ThreefoldSpec, g: &GlobalArgs) -> Result<(i32, Value)> {
    let mut rng = ChaCha8Rng::seed_from_u64(g.seed);
    let data = certify::acquire_nodes(spec, &options(g, Route::Auto), &mut rng)?;
    let v = json!({
        "field": to_value(&spec.field),
        "variant": to_value(&spec.variant),
        "backend": to_value(&data.backend),
        "nodes": data.sets[0].len(),
        "checked": data.checked,
        "primes": data.primes,
        "node_set": to_value(&data.sets[0].to_json()),
        "reports": to_value(&data.reports),
        "warnings": data.warnings,
    });
    Ok((EXIT_OK, v))
}

fn planar_cmd(set: &PointSet, mode: PlanarMode, d: Option<u32>, m: Option<usize>, t_max: u32, index: Option<usize>, g: &GlobalArgs) -> Result<(i32, Value)> {
    if set.ambient() != 2 {
        return Err(Error::InvalidInput(format!("planar commands take points of P², got P^{}", set.ambient())));
    }
    let need_d = || d.ok_or_else(|| Error::InvalidInput("this mode needs --d".into()));
    let need_m = || m.ok_or_else(|| Error::InvalidInput("this mode needs --m".into()));
    let budget = g.budget_subsets;
    let mut v = match mode {
        PlanarMode::Star => to_value(&planar::star_property(set, StarParams::new(need_m()?, t_max)?, budget)?),
        PlanarMode::Bese => to_value(&planar::bese_hypothesis(set, need_d()?, budget)?),
        PlanarMode::Dg => to_value(&planar::davis_geramita_hypothesis(set, need_d()?, budget)?),
        PlanarMode::Partition => {
            let pre: Vec<usize> = (0..set.len()).collect();
            planar::cluster_partition(set, &pre, StarParams::new(need_m()?, t_max)?, budget)?.to_json()
        }
        PlanarMode::Separate => {
            let d = need_d()?;
            let which: Vec<usize> = match index {
                Some(i) => vec![i],
                None => (0..set.len()).collect(),
            };
            let curves = which
                .iter()
                .map(|&i| Ok(json!({ "index": i, "curve": to_value(&planar::separating_curve(set, i, d, budget)?.to_json()) })))
                .collect::<Result<Vec<_>>>()?;
            json!({ "d": d, "separators": curves })
        }
    };
    v["field"] = to_value(&set.field());
    Ok((EXIT_OK, v))
}

fn examples(name: Option<&str>, list: bool, g: &GlobalArgs) -> Result<(i32, Value)> {
    if list || name.is_none() {
        let mut out = Vec::new();
        for n in models::NAMES {
            let ex = models::by_name(n, g.seed)?;
            out.push(json!({ "name": ex.name, "summary": ex.summary, "expected": to_value(&ex.expected) }));
        }
        return Ok((EXIT_OK, json!({ "examples": out })));
    }
    let ex = models::by_name(name.expect("checked"), g.seed)?;
    let spec = match g.backend {
        Some(target) if target != ex.spec.field => ex.spec.with_backend(target, RootChoice::Smaller)?,
        _ => ex.spec.clone(),
    };
    // Threefold keys sit at the top level so the output feeds `certify` directly.
    let mut v = to_value(&spec.to_json());
    v["name"] = json!(ex.name);
    v["summary"] = json!(ex.summary);
    v["expected"] = to_value(&ex.expected);
    Ok((EXIT_OK, v))
}
