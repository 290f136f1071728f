//! The `capoff` command line: argument parsing, the five verbs, and report
//! rendering. Every verb returns a [`Report`] so it can be tested without a
//! process boundary.

pub mod problem;
pub mod svg;

use std::ffi::OsString;
use std::fmt::Write;
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand, ValueEnum};
use serde_json::json;

use crate::error::{Error, Result};
use crate::fat_graph::{self, Pairing, ThickeningGenus};
use crate::homology::{self, SurfaceClass};
use crate::norm_ball;
use crate::surgery_verdict::{self as sv, ExceptionalSet, LayerOptions, MemberReason, Outcome, Reason, Rule, SearchExtent, Verdict};

pub use problem::{parse_class, parse_problem, read_problem, to_canonical_json, NormSpec, Problem, ProblemFile, TableOracle};

pub const EXIT_OK: i32 = 0;
pub const EXIT_INPUT: i32 = 2;
pub const EXIT_HYPOTHESIS: i32 = 3;
pub const EXIT_INDETERMINATE: i32 = 4;

#[derive(Parser, Debug)]
#[command(name = "capoff", version, about = "Thurston norm balls, boundary slopes and capped-off surfaces after Dehn filling")]
pub struct Cli {
    /// Print a JSON report instead of text.
    #[arg(long, global = true)]
    pub json: bool,
    #[command(subcommand)]
    pub command: Command,
}

/// Which exceptional set to build.
#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
pub enum SetKind {
    /// Corners and bisectors; orders 1, |lk| = 1, unimodular faces.
    Unimodular,
    /// Combinations up to |lk| + 1; orders 1.
    UnitOrders,
    /// Combinations up to 2|lk|m1²m2²; any orders.
    General,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Norm, boundary slopes and genus of a class.
    NormEval {
        file: PathBuf,
        /// Class as comma-separated integers, e.g. 2,1.
        #[arg(long, allow_hyphen_values = true)]
        class: String,
    },
    /// List an exceptional set with reasons and its cardinality bound.
    Exceptional {
        file: PathBuf,
        #[arg(long, value_enum, default_value = "general")]
        set: SetKind,
        /// Also write an SVG of the ball with the set marked.
        #[arg(long)]
        svg: Option<PathBuf>,
    },
    /// Decide whether the capped-off surface is guaranteed norm-minimizing.
    Verdict {
        file: PathBuf,
        #[arg(long, allow_hyphen_values = true)]
        class: String,
        /// Fill only these components (1-based, comma-separated).
        #[arg(long)]
        fill: Option<String>,
        /// Filled-norm table for the layered rule on 3 or more components.
        #[arg(long)]
        oracle: Option<PathBuf>,
        /// Use the cone-genus rule with this coefficient bound (3 or more
        /// components).
        #[arg(long)]
        search_bound: Option<u64>,
        /// Relabel components before the layered rule; new k is old order[k]
        /// (1-based, comma-separated).
        #[arg(long)]
        order: Option<String>,
    },
    /// Build the ribbon graph of product disks for a·c1 + b·c2.
    Fatgraph {
        file: PathBuf,
        a: i64,
        b: i64,
        /// Face of the ball (index into the listed faces).
        #[arg(long, default_value_t = 0)]
        face: usize,
        /// offset:K, explicit:i,j,..., or enumerate.
        #[arg(long, default_value = "offset:0")]
        pairing: String,
    },
    /// SVG of the norm ball with an exceptional set marked.
    Plot {
        file: PathBuf,
        #[arg(long, value_enum, default_value = "general")]
        set: SetKind,
        /// Output path; standard output when absent.
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
}

/// Output of one invocation.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Report {
    pub stdout: String,
    pub stderr: String,
    pub code: i32,
}

impl Report {
    fn ok(stdout: String) -> Report {
        Report { stdout, stderr: String::new(), code: EXIT_OK }
    }

    fn error(e: &Error) -> Report {
        let code = if e.is_input_error() { EXIT_INPUT } else { EXIT_HYPOTHESIS };
        Report { stdout: String::new(), stderr: format!("error: {e}\n"), code }
    }
}

/// Parse arguments and run. Argument errors exit 2, like input errors.
pub fn run<I, T>(args: I) -> Report
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    match Cli::try_parse_from(args) {
        Ok(cli) => execute(&cli),
        Err(e) => {
            let code = if e.use_stderr() { EXIT_INPUT } else { EXIT_OK };
            let text = e.render().to_string();
            if code == EXIT_OK {
                Report::ok(text)
            } else {
                Report { stdout: String::new(), stderr: text, code }
            }
        }
    }
}

pub fn execute(cli: &Cli) -> Report {
    let r = match &cli.command {
        Command::NormEval { file, class } => cmd_norm_eval(file, class, cli.json),
        Command::Exceptional { file, set, svg } => cmd_exceptional(file, *set, svg.as_deref(), cli.json),
        Command::Verdict { file, class, fill, oracle, search_bound, order } => {
            let opts = VerdictArgs { fill: fill.clone(), oracle: oracle.clone(), search_bound: *search_bound, order: order.clone() };
            cmd_verdict(file, class, &opts, cli.json)
        }
        Command::Fatgraph { file, a, b, face, pairing } => cmd_fatgraph(file, *a, *b, *face, pairing, cli.json),
        Command::Plot { file, set, output } => cmd_plot(file, *set, output.as_deref()),
    };
    r.unwrap_or_else(|e| Report::error(&e))
}

fn json_out(v: &serde_json::Value) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("reports serialize");
    s.push('\n');
    s
}

pub fn cmd_norm_eval(file: &Path, class: &str, json: bool) -> Result<Report> {
    let p = read_problem(file)?;
    let s = parse_class(class)?;
    let link = p.link();
    let x = p.ball.norm(&s)?;
    let mut tori = Vec::new();
    for i in 0..link.n() {
        let c = homology::boundary_class_on(link, &s, i)?;
        let slope = if c.is_zero() { None } else { Some(c.slope()?) };
        tori.push((i, c, slope, c.multiplicity()));
    }
    let total: u64 = tori.iter().map(|t| t.3).sum();
    let genus = norm_ball::genus_of_class(link, &p.ball, &s)?;
    if json {
        let t: Vec<_> = tori
            .iter()
            .map(|(i, c, slope, n)| json!({"torus": format!("P{}", i + 1), "boundary": c, "slope": slope, "components": n}))
            .collect();
        return Ok(Report::ok(json_out(&json!({
            "problem": p.name(), "class": s, "norm": x, "tori": t, "boundary_components": total, "genus": genus,
        }))));
    }
    let mut o = String::new();
    writeln!(o, "problem: {}", p.name()).unwrap();
    writeln!(o, "class: {s}").unwrap();
    writeln!(o, "norm: {x}").unwrap();
    for (i, c, slope, n) in &tori {
        let slope = slope.map_or_else(|| "none (class misses this torus)".to_string(), |q| q.to_string());
        writeln!(o, "P{}: boundary {c}, slope {slope}, components {n}", i + 1).unwrap();
    }
    writeln!(o, "boundary components: {total}").unwrap();
    writeln!(o, "genus: {genus}").unwrap();
    Ok(Report::ok(o))
}

fn exceptional_set(p: &Problem, kind: SetKind) -> Result<ExceptionalSet> {
    match kind {
        SetKind::Unimodular => sv::exceptional_set_det1(p.link(), &p.ball),
        SetKind::UnitOrders => sv::exceptional_set_nullhomologous(p.link(), &p.ball),
        SetKind::General => sv::exceptional_set_general(p.link(), &p.ball),
    }
}

fn member_reason(r: &MemberReason) -> String {
    match r {
        MemberReason::Corner => "corner".into(),
        MemberReason::Bisector => "bisector".into(),
        MemberReason::ParallelogramInterior => "parallelogram interior".into(),
        MemberReason::Combination { a, b, beta1, beta2 } => format!("{a}·{beta1} + {b}·{beta2}"),
    }
}

pub fn cmd_exceptional(file: &Path, kind: SetKind, svg_path: Option<&Path>, json: bool) -> Result<Report> {
    let p = read_problem(file)?;
    let e = exceptional_set(&p, kind)?;
    if let Some(path) = svg_path {
        let svg = svg::ball_svg(p.name(), &p.ball, Some(&e))?;
        std::fs::write(path, svg).map_err(|err| Error::Parse(format!("{}: {err}", path.display())))?;
    }
    if json {
        return Ok(Report::ok(json_out(&json!({
            "problem": p.name(), "set": e, "size": e.members.len(), "within_bound": e.within_bound(),
        }))));
    }
    let mut o = String::new();
    writeln!(o, "problem: {}", p.name()).unwrap();
    writeln!(o, "set: {:?}, combinations up to a + b = {}", kind, e.combination_limit).unwrap();
    writeln!(o, "members: {}", e.members.len()).unwrap();
    for m in &e.members {
        writeln!(o, "  {}  {}", m.class, member_reason(&m.reason)).unwrap();
    }
    let verdict = if e.within_bound() { "holds" } else { "EXCEEDED" };
    writeln!(o, "closed-form bound: {} ({verdict})", e.bound).unwrap();
    writeln!(o, "construction count: {}", e.construction_count).unwrap();
    Ok(Report::ok(o))
}

#[derive(Clone, Debug, Default)]
pub struct VerdictArgs {
    pub fill: Option<String>,
    pub oracle: Option<PathBuf>,
    pub search_bound: Option<u64>,
    pub order: Option<String>,
}

fn rule_statement(r: Rule) -> &'static str {
    match r {
        Rule::FullFillingTwoComponent => {
            "two components, both filled: a non-corner class whose genus exceeds 1 and the minimal genus of its face cone caps off to a norm-minimizing surface"
        }
        Rule::PartialFilling => "some components filled: a non-corner class meeting every boundary torus caps off to a norm-minimizing surface",
        Rule::ConeGenusAnyComponents => {
            "any number of components: a non-corner class whose genus exceeds 1 and the minimal genus of its cone caps off to a norm-minimizing surface"
        }
        Rule::RayLayers => "layered rule: away from corners and the degenerate slopes on the last component, induct on the filled link",
        Rule::ExceptionalSetMembership => "two components: a class outside the general exceptional set caps off to a norm-minimizing surface",
    }
}

fn reason_text(r: &Reason) -> String {
    match r {
        Reason::DegenerateLayer { pair: None } => "DegenerateLayer(slope 0 on the last component)".into(),
        Reason::DegenerateLayer { pair: Some((i, j)) } => format!("DegenerateLayer(surgered lk{i}{j} = 0)"),
        other => format!("{other:?}"),
    }
}

fn render_verdict(o: &mut String, v: &Verdict, indent: &str) {
    writeln!(o, "{indent}outcome: {:?}", v.outcome).unwrap();
    writeln!(o, "{indent}rule: {}", rule_statement(v.rule)).unwrap();
    if !v.reasons.is_empty() {
        let r: Vec<String> = v.reasons.iter().map(reason_text).collect();
        writeln!(o, "{indent}reasons: {}", r.join(", ")).unwrap();
    }
    if let Some(g) = v.genus {
        writeln!(o, "{indent}genus: {g}").unwrap();
    }
    if let Some(m) = &v.cone_minimum {
        let extent = match &v.search {
            Some(SearchExtent::Bounded { bound }) => format!("bounded search, |coeff| <= {bound}"),
            _ => "exhaustive".into(),
        };
        writeln!(o, "{indent}cone minimum: genus {} at {} ({extent})", m.genus, m.witness).unwrap();
    }
    for l in &v.layers {
        writeln!(o, "{indent}layer {:?}: {} ({})", l.layer, if l.fired { "fired" } else { "passed" }, l.detail).unwrap();
    }
    if let Some(f) = &v.filled {
        writeln!(o, "{indent}filled link:").unwrap();
        render_verdict(o, f, &format!("{indent}  "));
    }
}

pub fn cmd_verdict(file: &Path, class: &str, args: &VerdictArgs, json: bool) -> Result<Report> {
    let p = read_problem(file)?;
    let s = parse_class(class)?;
    let (link, ball) = (p.link(), &p.ball);
    let n = link.n();
    let v = if let Some(fill) = &args.fill {
        sv::verdict_partial_fill(link, ball, &s, &problem::parse_components(fill, n)?)?
    } else if n == 2 {
        sv::verdict_full_fill_2comp(link, ball, &s)?
    } else if n < 2 {
        return Err(Error::Unsupported("verdicts need at least 2 components".into()));
    } else if args.search_bound.is_some() {
        sv::verdict_ncomp(link, ball, &s, args.search_bound)?
    } else {
        let oracle = args.oracle.as_deref().map(TableOracle::read).transpose()?;
        let order = args.order.as_deref().map(|o| problem::parse_components(o, n)).transpose()?;
        let dyn_oracle = oracle.as_ref().map(|o| o as &dyn sv::FilledNormOracle);
        sv::exceptional_ray_layers_ncomp(link, ball, &s, dyn_oracle, &LayerOptions { order })?
    };
    let code = if v.outcome == Outcome::Indeterminate { EXIT_INDETERMINATE } else { EXIT_OK };
    let stdout = if json {
        json_out(&json!({"problem": p.name(), "class": s, "verdict": v}))
    } else {
        let mut o = String::new();
        writeln!(o, "problem: {}", p.name()).unwrap();
        writeln!(o, "class: {s}").unwrap();
        render_verdict(&mut o, &v, "");
        o
    };
    Ok(Report { stdout, stderr: String::new(), code })
}

fn parse_pairing(spec: &str) -> Result<Option<Pairing>> {
    if spec == "enumerate" {
        return Ok(None);
    }
    if let Some(k) = spec.strip_prefix("offset:") {
        return k.trim().parse().map(|k| Some(Pairing::Offset(k))).map_err(|e| Error::Parse(format!("pairing {spec:?}: {e}")));
    }
    if let Some(list) = spec.strip_prefix("explicit:") {
        let perm = list
            .split(',')
            .map(|t| t.trim().parse::<usize>().map_err(|e| Error::Parse(format!("pairing {spec:?}: {t:?}: {e}"))))
            .collect::<Result<Vec<_>>>()?;
        return Ok(Some(Pairing::Explicit(perm)));
    }
    Err(Error::Parse(format!("pairing {spec:?}: expected offset:K, explicit:i,j,... or enumerate")))
}

fn genus_text(g: &ThickeningGenus) -> String {
    match g {
        ThickeningGenus::Connected(g) => g.to_string(),
        ThickeningGenus::PerComponent(v) => format!("{v:?} (disconnected)"),
    }
}

pub fn cmd_fatgraph(file: &Path, a: i64, b: i64, face: usize, pairing: &str, json: bool) -> Result<Report> {
    let p = read_problem(file)?;
    let faces = p.ball.faces()?;
    let f = faces.get(face).ok_or(Error::IndexOutOfRange { index: face, len: faces.len() })?;
    let pattern = fat_graph::boundary_intersection_pattern(p.link(), a, &f.c1, b, &f.c2)?;
    let pairings: Vec<Pairing> = match parse_pairing(pairing)? {
        Some(pr) => vec![pr],
        None => fat_graph::enumerate_pairings(pattern.arc_count())?.into_iter().map(Pairing::Explicit).collect(),
    };
    let mut graphs = Vec::new();
    for pr in &pairings {
        let g = fat_graph::build_fat_graph(&pattern, pr)?;
        let fs = fat_graph::faces(&g);
        let tags = fat_graph::classify_faces(&g, &pattern)?;
        let genus = fat_graph::thickening_genus(&g)?;
        graphs.push((pr.resolve(pattern.arc_count())?, g, fs, tags, genus));
    }
    if json {
        let gs: Vec<_> = graphs
            .iter()
            .map(|(perm, g, fs, tags, genus)| {
                json!({"pairing": perm, "graph": g, "faces": fs, "face_tags": tags, "thickening_genus": genus})
            })
            .collect();
        return Ok(Report::ok(json_out(&json!({"problem": p.name(), "face": f, "pattern": pattern, "graphs": gs}))));
    }
    let mut o = String::new();
    writeln!(o, "problem: {}", p.name()).unwrap();
    writeln!(o, "surface: {a}·{} + {b}·{}", f.c1, f.c2).unwrap();
    for t in &pattern.tori {
        writeln!(
            o,
            "P{}: sutures {}, intersections {}, corner regions {}",
            t.torus + 1,
            t.suture_count,
            t.intersection_count,
            t.corner_regions
        )
        .unwrap();
    }
    for (perm, g, fs, tags, genus) in &graphs {
        writeln!(o, "pairing {perm:?}").unwrap();
        writeln!(o, "  vertices {}, edges {}, faces {}, thickening genus {}", g.vertex_count(), g.edge_count(), fs.len(), genus_text(genus)).unwrap();
        if pairings.len() == 1 {
            for (v, cyc) in g.vertices().iter().enumerate() {
                let label = g.labels().get(&v).map_or_else(String::new, |l| format!(" {l}"));
                writeln!(o, "  vertex {v}{label}: rotation {cyc:?}").unwrap();
            }
            for [h, k] in g.edges() {
                writeln!(o, "  edge {h}-{k}").unwrap();
            }
            for (fc, tag) in fs.iter().zip(tags) {
                writeln!(o, "  face {fc:?} {tag:?}").unwrap();
            }
        } else {
            let corner = tags.iter().filter(|t| **t == fat_graph::FaceTag::CornerAnnulus).count();
            writeln!(o, "  corner faces {corner}, noncorner faces {}", tags.len() - corner).unwrap();
        }
    }
    Ok(Report::ok(o))
}

pub fn cmd_plot(file: &Path, kind: SetKind, output: Option<&Path>) -> Result<Report> {
    let p = read_problem(file)?;
    let e = exceptional_set(&p, kind)?;
    let svg = svg::ball_svg(p.name(), &p.ball, Some(&e))?;
    match output {
        Some(path) => {
            std::fs::write(path, svg).map_err(|err| Error::Parse(format!("{}: {err}", path.display())))?;
            Ok(Report::ok(String::new()))
        }
        None => Ok(Report::ok(svg)),
    }
}

/// Class arguments that start with `-` would otherwise be read as flags.
pub fn class_arg(s: &SurfaceClass) -> String {
    s.coeffs().iter().map(i64::to_string).collect::<Vec<_>>().join(",")
}
