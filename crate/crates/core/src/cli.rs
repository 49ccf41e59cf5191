//! The `gsp4` command line: argument parsing, fixtures, and JSON/table/DOT reports.

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use serde_json::{json, Value};

use crate::adjacency::{bfs_chain, build_graph, steered_chain, DepthFloors, WeightGraph};
use crate::admissible::{adm_eta, adm_set, is_regular};
use crate::affine_weyl::{up_box, uparrow_leq, A0, A1, A2, A3};
use crate::bm_cycles::{bm_cycle, bm_pullback, colength_one_components};
use crate::error::{Error, Result};
use crate::gsp4_base::{self_check, Weight};
use crate::local_model::{
    build_regcolone_matrix, dominated_by, e_divisor_pattern, monodromy_defect, shape_of, symplectic_similitude, Clause,
    ExactField, PolyMat, RegColOneParams, Similitude,
};
use crate::serre_weights::{
    enumerate_ap, enumerate_ap_prime, intersect_w_jh, jh_factors, w_question, PresentationKind, SerreWeight,
    TamePresentation,
};

pub const EXIT_OK: i32 = 0;
pub const EXIT_VALIDATION: i32 = 2;
pub const EXIT_INVARIANT: i32 = 3;
pub const EXIT_USAGE: i32 = 64;

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Json,
    Table,
    Dot,
}

#[derive(Parser, Debug)]
#[command(name = "gsp4", about = "Affine Weyl, Serre weight and local-model computations for GSp4")]
struct Cli {
    #[command(flatten)]
    config: ConfigArgs,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Debug, Clone)]
struct ConfigArgs {
    /// The prime p (at least 5).
    #[arg(long, global = true, default_value_t = 37)]
    p: i64,
    /// Number of embeddings f.
    #[arg(long, global = true, default_value_t = 1)]
    f: usize,
    /// Radius of the upper-arrow box (at least 8).
    #[arg(long = "box", global = true, default_value_t = 12)]
    radius: i64,
    /// Seed for random draws.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    /// Output format. table applies to adm, dot to graph; other commands print JSON.
    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    format: Format,
    /// Override the depth floor for ρ̄ in graph construction.
    #[arg(long, global = true)]
    rhobar_depth: Option<i64>,
    /// Override the depth floor for derived types.
    #[arg(long, global = true)]
    tau_depth: Option<i64>,
}

/// Validated run configuration.
#[derive(Clone, Debug, Serialize)]
pub struct RunConfig {
    pub p: i64,
    pub f: usize,
    pub radius: i64,
    pub seed: u64,
    pub format: Format,
    pub floors: DepthFloorsOut,
}

#[derive(Clone, Copy, Debug, Serialize)]
pub struct DepthFloorsOut {
    pub rhobar: i64,
    pub tau: i64,
}

impl RunConfig {
    fn from_args(a: &ConfigArgs) -> Result<RunConfig> {
        if a.p < 5 || !(2..a.p).take_while(|d| d * d <= a.p).all(|d| a.p % d != 0) {
            return Err(Error::Validation(format!("p = {} must be a prime ≥ 5", a.p)));
        }
        if a.f == 0 {
            return Err(Error::Validation("f must be positive".into()));
        }
        if a.radius < 8 {
            return Err(Error::Validation(format!("box radius {} must be at least 8", a.radius)));
        }
        let d = default_floors(a.p);
        Ok(RunConfig {
            p: a.p,
            f: a.f,
            radius: a.radius,
            seed: a.seed,
            format: a.format,
            floors: DepthFloorsOut { rhobar: a.rhobar_depth.unwrap_or(d.rhobar), tau: a.tau_depth.unwrap_or(d.tau) },
        })
    }

    fn floors(&self) -> DepthFloors {
        DepthFloors { rhobar: self.floors.rhobar, tau: self.floors.tau }
    }
}

/// 9 for ρ̄ when p allows it; below p = 41 the deepest presentation has depth 8.
pub fn default_floors(p: i64) -> DepthFloors {
    let d = DepthFloors::default();
    DepthFloors { rhobar: if p < 41 { 8 } else { d.rhobar }, tau: d.tau }
}

#[derive(Subcommand, Debug)]
enum Command {
    /// The admissible set Adm(λ).
    Adm {
        #[arg(long, default_value = "2,1,0")]
        lambda: String,
        #[arg(long, conflicts_with = "table")]
        json: bool,
        #[arg(long)]
        table: bool,
    },
    /// AP(η) or AP′(η) pairs for f embeddings.
    Ap {
        #[arg(long)]
        prime: bool,
    },
    /// W?(ρ̄), JH(σ̄(τ)) or their intersection.
    Weights {
        #[arg(long)]
        rhobar: Option<String>,
        #[arg(long)]
        tau: Option<String>,
        #[arg(long)]
        jh: bool,
        #[arg(long)]
        wq: bool,
        #[arg(long)]
        intersect: bool,
    },
    /// The adjacency graph on W?(ρ̄).
    Graph {
        #[arg(long)]
        rhobar: String,
        /// Write Graphviz output here ("-" for stdout).
        #[arg(long)]
        dot: Option<PathBuf>,
        /// A Serre weight (JSON file or inline) to steer to an obvious weight.
        #[arg(long)]
        chain: Option<String>,
    },
    /// Breuil–Mézard cycles and colength-one component counts.
    Cycles {
        #[arg(long)]
        sigma: Option<String>,
        #[arg(long)]
        bm: bool,
        #[arg(long)]
        rhobar: Option<String>,
        #[arg(long)]
        tau: Option<String>,
        #[arg(long)]
        colength_one: bool,
    },
    /// Local-model matrix checks.
    Localmodel {
        #[arg(long)]
        verify_regcolone: bool,
        #[arg(long, default_value_t = 100)]
        draws: usize,
        /// Path to a matrix JSON file.
        #[arg(long)]
        shape: Option<PathBuf>,
        /// Field size for --shape.
        #[arg(long, default_value_t = 37)]
        q: u64,
    },
    /// Root-datum assertions and module smoke tests.
    Selfcheck,
}

/// Runs the command line and returns the process exit code.
pub fn run<I, S>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = S>,
    S: Into<std::ffi::OsString> + Clone,
{
    use clap::error::ErrorKind;
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => {
                    let _ = write!(out, "{}", e.render());
                    return EXIT_OK;
                }
                ErrorKind::InvalidSubcommand
                | ErrorKind::MissingSubcommand
                | ErrorKind::DisplayHelpOnMissingArgumentOrSubcommand => EXIT_USAGE,
                _ => EXIT_VALIDATION,
            };
            let _ = write!(err, "{}", e.render());
            return code;
        }
    };
    let result = RunConfig::from_args(&cli.config).and_then(|cfg| dispatch(&cli.command, &cfg));
    match result {
        Ok(Outcome { text, code }) => {
            let _ = out.write_all(text.as_bytes());
            code
        }
        Err(e) => {
            let _ = writeln!(err, "gsp4: {e}");
            if e.is_validation() {
                EXIT_VALIDATION
            } else {
                EXIT_INVARIANT
            }
        }
    }
}

struct Outcome {
    text: String,
    code: i32,
}

impl Outcome {
    fn ok(text: String) -> Outcome {
        Outcome { text, code: EXIT_OK }
    }

    /// Report printed in full, exit 3 if a check failed.
    fn checked(text: String, passed: bool) -> Outcome {
        Outcome { text, code: if passed { EXIT_OK } else { EXIT_INVARIANT } }
    }
}

fn to_json(v: &Value) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("JSON values serialize");
    s.push('\n');
    s
}

fn dispatch(cmd: &Command, cfg: &RunConfig) -> Result<Outcome> {
    match cmd {
        Command::Adm { lambda, json: _, table } => cmd_adm(lambda, *table || cfg.format == Format::Table),
        Command::Ap { prime } => cmd_ap(cfg, *prime),
        Command::Weights { rhobar, tau, jh, wq, intersect } => {
            cmd_weights(cfg, rhobar.as_deref(), tau.as_deref(), *jh, *wq, *intersect)
        }
        Command::Graph { rhobar, dot, chain } => cmd_graph(cfg, rhobar, dot.as_deref(), chain.as_deref()),
        Command::Cycles { sigma, bm, rhobar, tau, colength_one } => {
            cmd_cycles(cfg, sigma.as_deref(), *bm, rhobar.as_deref(), tau.as_deref(), *colength_one)
        }
        Command::Localmodel { verify_regcolone, draws, shape, q } => {
            if *verify_regcolone {
                cmd_verify_regcolone(cfg, *draws)
            } else if let Some(path) = shape {
                cmd_shape(path, *q)
            } else {
                Err(Error::Validation("localmodel needs --verify-regcolone or --shape".into()))
            }
        }
        Command::Selfcheck => cmd_selfcheck(cfg),
    }
}

fn parse_ints<const N: usize>(s: &str) -> Result<[i64; N]> {
    let v: Vec<i64> = s
        .split(',')
        .map(|x| x.trim().parse::<i64>().map_err(|_| Error::Validation(format!("not an integer: {x:?}"))))
        .collect::<Result<_>>()?;
    v.try_into().map_err(|_| Error::Validation(format!("expected {N} comma-separated integers in {s:?}")))
}

fn read_file(path: &Path) -> Result<String> {
    std::fs::read_to_string(path).map_err(|e| Error::Validation(format!("cannot read {}: {e}", path.display())))
}

fn parse_json<T: serde::de::DeserializeOwned>(text: &str, what: &str) -> Result<T> {
    serde_json::from_str(text).map_err(|e| Error::Validation(format!("malformed {what}: {e}")))
}

/// A presentation: a JSON fixture path, or inline "s,a,b,c" per embedding joined by '/'.
pub fn parse_presentation(arg: &str, p: i64, kind: PresentationKind) -> Result<TamePresentation> {
    let t = if arg.ends_with(".json") {
        let mut t: TamePresentation = parse_json(&read_file(Path::new(arg))?, "presentation")?;
        t.kind = kind;
        t
    } else {
        let mut s = Vec::new();
        let mut mu = Vec::new();
        for part in arg.split('/') {
            let (w, rest) =
                part.split_once(',').ok_or_else(|| Error::Validation(format!("expected s,a,b,c in {part:?}")))?;
            s.push(crate::gsp4_base::FiniteWeyl::from_word(w)?);
            let [a, b, c] = parse_ints::<3>(rest)?;
            mu.push(Weight::new(a, b, c));
        }
        TamePresentation { p, s, mu, kind }
    };
    if t.p != p {
        return Err(Error::Validation(format!("presentation has p = {}, run has p = {p}", t.p)));
    }
    t.validate()?;
    Ok(t)
}

/// A Serre weight: a JSON file, or inline "a,b,c" per embedding joined by '/'.
pub fn parse_serre_weight(arg: &str, p: i64) -> Result<SerreWeight> {
    if arg.ends_with(".json") {
        let s: SerreWeight = parse_json(&read_file(Path::new(arg))?, "Serre weight")?;
        if s.p != p {
            return Err(Error::Validation(format!("weight has p = {}, run has p = {p}", s.p)));
        }
        return SerreWeight::new(s.lambda, p);
    }
    let lam =
        arg.split('/').map(|x| parse_ints::<3>(x).map(|[a, b, c]| Weight::new(a, b, c))).collect::<Result<Vec<_>>>()?;
    SerreWeight::new(lam, p)
}

fn presentation_header(t: &TamePresentation) -> Value {
    json!({ "presentation": t, "depth": t.depth() })
}

fn weight_json(s: &SerreWeight) -> Value {
    json!({
        "weight": s.to_string(),
        "lambda": s.lambda,
        "depth": s.depth(),
        "alcoves": s.alcoves(),
    })
}

fn cmd_adm(lambda: &str, table: bool) -> Result<Outcome> {
    let [a, b, c] = parse_ints::<3>(lambda)?;
    let l = Weight::new(a, b, c);
    let adm = adm_set(l)?;
    let top = adm.top_length();
    let mut by_len: BTreeMap<usize, usize> = BTreeMap::new();
    let mut rows = Vec::new();
    for &x in &adm.elements {
        *by_len.entry(x.length()).or_default() += 1;
        rows.push((x.length(), x));
    }
    rows.sort();
    if table {
        let mut s = String::new();
        let _ = writeln!(s, "# Adm({l}): {} elements", adm.elements.len());
        let _ = writeln!(s, "{:>6}  {:>8}  {:<7}  element", "length", "colength", "regular");
        for (len, x) in &rows {
            let _ = writeln!(s, "{len:>6}  {:>8}  {:<7}  {x}", top - len, is_regular(*x));
        }
        return Ok(Outcome::ok(s));
    }
    let elements: Vec<Value> = rows
        .iter()
        .map(|(len, x)| json!({ "element": x.to_string(), "t": x.t, "w": x.w, "length": len, "colength": top - len, "regular": is_regular(*x) }))
        .collect();
    Ok(Outcome::ok(to_json(&json!({
        "schema": "gsp4.adm.v1",
        "lambda": l,
        "count": adm.elements.len(),
        "regular_count": adm.regular().len(),
        "by_length": by_len,
        "elements": elements,
    }))))
}

fn cmd_ap(cfg: &RunConfig, prime: bool) -> Result<Outcome> {
    let pairs = if prime { enumerate_ap_prime(cfg.f) } else { enumerate_ap(cfg.f) };
    let rows: Vec<Value> = pairs
        .iter()
        .map(|pr| {
            json!({
                "w1": pr.w1.iter().map(|x| x.to_string()).collect::<Vec<_>>(),
                "w2": pr.w2.iter().map(|x| x.to_string()).collect::<Vec<_>>(),
            })
        })
        .collect();
    Ok(Outcome::ok(to_json(&json!({
        "schema": "gsp4.ap.v1",
        "set": if prime { "AP'" } else { "AP" },
        "f": cfg.f,
        "count": pairs.len(),
        "adm_reg_count": adm_eta().regular().len().pow(cfg.f as u32),
        "pairs": rows,
    }))))
}

fn cmd_weights(
    cfg: &RunConfig,
    rhobar: Option<&str>,
    tau: Option<&str>,
    jh: bool,
    wq: bool,
    intersect: bool,
) -> Result<Outcome> {
    let rb = rhobar.map(|s| parse_presentation(s, cfg.p, PresentationKind::Parameter)).transpose()?;
    let tt = tau.map(|s| parse_presentation(s, cfg.p, PresentationKind::Type)).transpose()?;
    let mode = match (jh, wq, intersect) {
        (true, false, false) => "jh",
        (false, true, false) => "wq",
        (false, false, true) => "intersect",
        (false, false, false) => match (&rb, &tt) {
            (Some(_), Some(_)) => "intersect",
            (Some(_), None) => "wq",
            (None, Some(_)) => "jh",
            (None, None) => return Err(Error::Validation("weights needs --rhobar and/or --tau".into())),
        },
        _ => return Err(Error::Validation("choose at most one of --jh, --wq, --intersect".into())),
    };
    let need = |x: &Option<TamePresentation>, name: &str| {
        x.clone().ok_or_else(|| Error::Validation(format!("--{mode} needs --{name}")))
    };
    let (weights, header): (Vec<Value>, Value) = match mode {
        "jh" => {
            let t = need(&tt, "tau")?;
            let w = jh_factors(&t)?.iter().map(|(_, s)| weight_json(s)).collect();
            (w, json!({ "tau": presentation_header(&t) }))
        }
        "wq" => {
            let r = need(&rb, "rhobar")?;
            let w = w_question(&r)?.iter().map(|(_, s)| weight_json(s)).collect();
            (w, json!({ "rhobar": presentation_header(&r) }))
        }
        _ => {
            let (r, t) = (need(&rb, "rhobar")?, need(&tt, "tau")?);
            let w = intersect_w_jh(&r, &t)?.iter().map(weight_json).collect();
            (w, json!({ "rhobar": presentation_header(&r), "tau": presentation_header(&t) }))
        }
    };
    Ok(Outcome::ok(to_json(&json!({
        "schema": "gsp4.weights.v1",
        "mode": mode,
        "p": cfg.p,
        "inputs": header,
        "count": weights.len(),
        "weights": weights,
    }))))
}

fn dot_escape(s: &str) -> String {
    s.replace('\\', "\\\\").replace('"', "\\\"")
}

/// Graphviz rendering: obvious weights boxed, edges labelled by their first witness.
pub fn graph_to_dot(g: &WeightGraph) -> String {
    let mut s = String::from("graph W {\n  node [fontname=\"monospace\"];\n");
    let idx: BTreeMap<&SerreWeight, usize> = g.vertices.iter().enumerate().map(|(i, v)| (v, i)).collect();
    for (i, v) in g.vertices.iter().enumerate() {
        let shape = if g.obvious.contains(v) { "box" } else { "ellipse" };
        let _ = writeln!(s, "  n{i} [label=\"{}\", shape={shape}];", dot_escape(&v.to_string()));
    }
    for ((a, b), ws) in &g.edges {
        let labels: Vec<String> = ws.iter().map(|w| w.s.to_string()).collect();
        let _ = writeln!(s, "  n{} -- n{} [label=\"{}\"];", idx[a], idx[b], dot_escape(&labels.join(" ")));
    }
    s.push_str("}\n");
    s
}

fn cmd_graph(cfg: &RunConfig, rhobar: &str, dot: Option<&Path>, chain: Option<&str>) -> Result<Outcome> {
    let rb = parse_presentation(rhobar, cfg.p, PresentationKind::Parameter)?;
    let g = build_graph(&rb, cfg.floors())?;
    let dot_text = graph_to_dot(&g);
    let mut text = String::new();
    match dot {
        Some(path) if path == Path::new("-") => text.push_str(&dot_text),
        Some(path) => std::fs::write(path, &dot_text)
            .map_err(|e| Error::Validation(format!("cannot write {}: {e}", path.display())))?,
        None => {}
    }
    if cfg.format == Format::Dot {
        if dot.is_none() {
            text.push_str(&dot_text);
        }
        return Ok(Outcome::checked(text, g.is_connected()));
    }
    let chain_json = match chain {
        Some(c) => {
            let sigma = parse_serre_weight(c, cfg.p)?;
            let steps = |v: Vec<crate::adjacency::ChainStep>| -> Vec<Value> {
                v.iter()
                    .map(|st| json!({ "from": st.from.to_string(), "to": st.to.to_string(), "s": st.s.to_string() }))
                    .collect()
            };
            json!({
                "sigma": sigma.to_string(),
                "steered": steps(steered_chain(&g, &sigma)?),
                "shortest": steps(bfs_chain(&g, &sigma)?),
            })
        }
        None => Value::Null,
    };
    let edges: Vec<Value> = g
        .edges
        .iter()
        .map(|((a, b), ws)| json!({ "a": a.to_string(), "b": b.to_string(), "witnesses": ws.iter().map(|w| w.s.to_string()).collect::<Vec<_>>() }))
        .collect();
    let connected = g.is_connected();
    text.push_str(&to_json(&json!({
        "schema": "gsp4.graph.v1",
        "config": cfg,
        "rhobar": presentation_header(&rb),
        "vertices": g.vertices.iter().map(|v| v.to_string()).collect::<Vec<_>>(),
        "obvious": g.obvious.iter().map(|v| v.to_string()).collect::<Vec<_>>(),
        "edge_count": g.edges.len(),
        "edges": edges,
        "instances": g.instances.len(),
        "min_derived_depth": g.instances.iter().map(|i| i.tau_depth.min(i.rhobar0_depth)).min(),
        "derived_below_floor": g.instances.iter().filter(|i| !i.derived_generic).count(),
        "inclusion_holds": g.instances.iter().all(|i| i.inclusion_holds),
        "connected": connected,
        "components": g.component_count(),
        "obvious_subgraph_connected": g.obvious_subgraph_connected(),
        "chain": chain_json,
    })));
    Ok(Outcome::checked(text, connected))
}

fn cmd_cycles(
    cfg: &RunConfig,
    sigma: Option<&str>,
    bm: bool,
    rhobar: Option<&str>,
    tau: Option<&str>,
    colength_one: bool,
) -> Result<Outcome> {
    if let (Some(s), true) = (sigma, bm || !colength_one) {
        let sw = parse_serre_weight(s, cfg.p)?;
        let z = bm_cycle(&sw)?;
        return Ok(Outcome::ok(to_json(&json!({
            "schema": "gsp4.cycles.bm.v1",
            "sigma": weight_json(&sw),
            "support_size": z.support().len(),
            "cycle": z,
        }))));
    }
    let (Some(r), Some(t)) = (rhobar, tau) else {
        return Err(Error::Validation("cycles needs --sigma --bm, or --rhobar --tau --colength-one".into()));
    };
    let rb = parse_presentation(r, cfg.p, PresentationKind::Parameter)?;
    let tt = parse_presentation(t, cfg.p, PresentationKind::Type)?;
    let rep = colength_one_components(&rb, &tt)?;
    let pull = bm_pullback(&rb, &tt)?;
    Ok(Outcome::ok(to_json(&json!({
        "schema": "gsp4.cycles.colength_one.v1",
        "rhobar": presentation_header(&rb),
        "tau": presentation_header(&tt),
        "cases": rep.cases,
        "j2": rep.j2,
        "expected": rep.expected,
        "components": rep.components.iter().map(|s| s.to_string()).collect::<Vec<_>>(),
        "pullback": {
            "cycle": pull.cycle,
            "restricted": pull.restricted,
            "discrepancy": pull.discrepancy.iter().map(|s| s.to_string()).collect::<Vec<_>>(),
        },
        "assumptions": ["n_sigma(0, tau) = 1 on JH(tau)"],
    }))))
}

/// Outcome of the regular colength-one checks on one draw.
#[derive(Clone, Debug, Serialize)]
pub struct RegColOneCheck {
    pub field: String,
    pub params: BTreeMap<&'static str, String>,
    pub similitude: bool,
    pub e_power: Option<i64>,
    pub pattern: [i64; 4],
    pub pattern_ok: bool,
    pub monodromy: bool,
    /// None when the draw has no unit perturbation (c00 = 0 branch).
    pub perturbed_fails_i: Option<bool>,
}

impl RegColOneCheck {
    pub fn passed(&self) -> bool {
        self.similitude && self.pattern_ok && self.monodromy && self.perturbed_fails_i != Some(false)
    }
}

/// Similitude, divisor pattern, monodromy and perturbation checks on one parameter draw.
pub fn check_regcolone(x: &RegColOneParams, p: u64) -> Result<RegColOneCheck> {
    let a = build_regcolone_matrix(x, p)?;
    let (similitude, e_power) = match symplectic_similitude(&a, p)? {
        Similitude::Pass { e_power, .. } => (true, Some(e_power)),
        Similitude::Fail { .. } => (false, None),
    };
    let pattern = e_divisor_pattern(&a, p)?;
    let mp = x.monodromy_params(p)?;
    let monodromy = monodromy_defect(&a, &mp)?.passed() && x.relation_defect(p)?.is_zero();
    let perturbed_fails_i = if x.c00.is_zero() {
        None
    } else {
        let b = build_regcolone_matrix(&x.perturbed(p)?, p)?;
        Some(monodromy_defect(&b, &mp)?.first_failure() == Some(Clause::Poles))
    };
    Ok(RegColOneCheck {
        field: x.field().to_string(),
        params: x.to_map(),
        similitude,
        e_power,
        pattern,
        pattern_ok: pattern.iter().sum::<i64>() == 6 && dominated_by(pattern, [3, 2, 1, 0]),
        monodromy,
        perturbed_fails_i,
    })
}

fn cmd_verify_regcolone(cfg: &RunConfig, draws: usize) -> Result<Outcome> {
    let p = cfg.p as u64;
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let mut checks = Vec::new();
    for field in [ExactField::Rational, ExactField::prime(p)?] {
        for _ in 0..draws {
            let x = RegColOneParams::random(field, p, &mut rng)?;
            checks.push(check_regcolone(&x, p)?);
        }
    }
    let failed = checks.iter().filter(|c| !c.passed()).count();
    let text = to_json(&json!({
        "schema": "gsp4.localmodel.regcolone.v1",
        "p": cfg.p,
        "seed": cfg.seed,
        "draws_per_field": draws,
        "failed": failed,
        "checks": checks,
    }));
    Ok(Outcome::checked(text, failed == 0))
}

fn cmd_shape(path: &Path, q: u64) -> Result<Outcome> {
    let field = ExactField::prime(q)?;
    let rows: Vec<Vec<crate::local_model::matrix::EntryJson>> = parse_json(&read_file(path)?, "matrix")?;
    let a = PolyMat::from_json(field, &rows)?;
    let z = shape_of(&a)?;
    Ok(Outcome::ok(to_json(&json!({
        "schema": "gsp4.localmodel.shape.v1",
        "q": q,
        "shape": z.to_string(),
        "t": z.t,
        "w": z.w,
        "in_adm_dual_eta": adm_eta().contains_dual(z),
        "similitude": symplectic_similitude(&a, q)?.passed(),
    }))))
}

fn cmd_selfcheck(cfg: &RunConfig) -> Result<Outcome> {
    let mut lines = Vec::new();
    let mut all = true;
    let mut check = |name: &str, ok: bool| {
        all &= ok;
        lines.push(json!({ "check": name, "ok": ok }));
    };
    check("root datum", self_check().is_ok());
    check("|Adm(η)| = 63", adm_eta().elements.len() == 63);
    check("|AP(η)| = |Adm^reg(η)| = 20", enumerate_ap(1).len() == 20 && adm_eta().regular().len() == 20);
    let chain = [A0, A1, A2, A3];
    check("A0 ↑ A1 ↑ A2 ↑ A3", chain.windows(2).all(|w| uparrow_leq(w[0], w[1]).unwrap_or(false)));
    let bx = up_box(cfg.radius);
    check("box is nonempty", !bx.alcoves().is_empty());
    let id = PolyMat::identity(ExactField::Prime(5), 4);
    check(
        "shape(identity) = e",
        shape_of(&id).map(|z| z == crate::affine_weyl::ExtAffineElement::E.star()).unwrap_or(false),
    );
    let text = to_json(&json!({ "schema": "gsp4.selfcheck.v1", "config": cfg, "checks": lines, "ok": all }));
    Ok(Outcome::checked(text, all))
}
