//! `scatterlab`: build, mutate, verify and explore cluster scattering diagrams.
//!
//! Exit codes: 0 on success, 1 when a verification fails, 2 on a usage or input error.

mod render;

use clap::{Args, Parser, Subcommand};
use scatterlab::cones::Cone;
use scatterlab::csd::{admissible_region_check, build_csd, check_consistency, g_cones, ScatteringDiagram};
use scatterlab::dilogprod::{badlands_normals, display_product, exponent_of, order, Factor};
use scatterlab::io;
use scatterlab::lattice::{FixedData, MTilde, Seed};
use scatterlab::mutation::{csd_equivalent, mutate_csd};
use scatterlab::theta::{broken_lines, sum_lines};
use scatterlab::{presets, suites, Error, Q};
use serde_json::{json, Value};
use std::io::{Read, Write};
use std::path::PathBuf;
use std::process::ExitCode;

#[derive(Parser)]
#[command(name = "scatterlab", version, about = "Exact computations with cluster scattering diagrams")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Order a rank-2 dilogarithm product modulo degree > L.
    Order {
        #[arg(long, short = 'L')]
        degree: i64,
        /// Factors as `[[n1,n2,c],...]`; `c` may be a fraction such as `1/2`.
        #[arg(long)]
        product: String,
        /// Output style: `json` (rationals as [num,den]) or `list` (plain nested list).
        #[arg(long, default_value = "json")]
        format: String,
    },
    /// Build the consistent diagram of a seed up to degree L and print it as JSON.
    Build {
        #[command(flatten)]
        seed: SeedArgs,
        #[arg(long, short = 'L')]
        degree: i64,
        #[arg(long, short = 'o')]
        output: Option<PathBuf>,
    },
    /// Check a diagram for consistency, or run a randomized identity suite.
    Verify {
        /// One of `pentagon`, `bracket`, `oracle`, `conjugation`; omit to check a diagram.
        suite: Option<String>,
        /// Diagram file (`-` or absent reads standard input).
        #[arg(long)]
        diagram: Option<PathBuf>,
        #[arg(long, default_value_t = 50)]
        count: usize,
        #[arg(long, short = 'L')]
        degree: Option<i64>,
    },
    /// Mutate a diagram in direction k (1-based).
    Mutate {
        #[arg(long)]
        diagram: Option<PathBuf>,
        #[arg(long, short = 'k')]
        direction: usize,
        /// Also rebuild the mutated seed's diagram and compare.
        #[arg(long)]
        verify: bool,
        #[arg(long, short = 'o')]
        output: Option<PathBuf>,
    },
    /// Theta function at an endpoint Q, computed from broken lines.
    Theta {
        #[arg(long)]
        diagram: Option<PathBuf>,
        /// The m-part of the initial exponent, in f-coordinates.
        #[arg(long, allow_hyphen_values = true)]
        m0: String,
        /// The N-part of the initial exponent (defaults to zero).
        #[arg(long, allow_hyphen_values = true)]
        n0: Option<String>,
        #[arg(long = "Q", allow_hyphen_values = true)]
        q: String,
        #[arg(long, short = 'L')]
        degree: i64,
        /// Also list the broken lines.
        #[arg(long)]
        lines: bool,
    },
    /// Enumerate G-cones reachable by mutation words up to a given length.
    Gfan {
        #[command(flatten)]
        seed: SeedArgs,
        #[arg(long, default_value_t = 4)]
        depth: usize,
    },
    /// Render a rank-3 diagram as SVG.
    Render {
        #[command(flatten)]
        seed: SeedArgs,
        #[arg(long, short = 'L')]
        degree: Option<i64>,
        #[arg(long)]
        diagram: Option<PathBuf>,
        #[arg(long, short = 'o')]
        output: Option<PathBuf>,
        #[arg(long, default_value_t = 600.0)]
        size: f64,
        #[arg(long, default_value_t = 4.0)]
        clip: f64,
        /// Draw walls outside the G-cones of this mutation depth thick.
        #[arg(long)]
        gfan_depth: Option<usize>,
    },
    /// Normals in the non-affine rank-2 region that appear in the ordered product.
    Badlands {
        /// `d1,d2` with d1 d2 > 4.
        #[arg(long)]
        delta: String,
        #[arg(long, short = 'L', default_value_t = 7)]
        degree: i64,
    },
    /// List the bundled seeds.
    Presets,
}

#[derive(Args)]
struct SeedArgs {
    /// Bundled seed name (see `presets`), or `custom` with --b and --delta.
    #[arg(long = "type")]
    kind: Option<String>,
    /// Exchange matrix `[[...],...]` for a custom seed.
    #[arg(long = "b")]
    b: Option<String>,
    /// Skew-symmetrizer `[...]` for a custom seed.
    #[arg(long)]
    delta: Option<String>,
    /// Mutation directions (1-based) applied to the seed first, e.g. `1,2`.
    #[arg(long)]
    mutations: Option<String>,
}

enum Failure {
    Usage(String),
    Check(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match &e {
            Error::Inconsistent(_) | Error::Internal(_) => Failure::Check(e.to_string()),
            Error::NotGeneral { suggestion: Some(z), .. } => {
                let pt: Vec<String> = z.iter().map(scatterlab::rat::fmt_q).collect();
                Failure::Usage(format!("{e}; try the nearby point [{}]", pt.join(",")))
            }
            _ => Failure::Usage(e.to_string()),
        }
    }
}

type CmdResult = std::result::Result<bool, Failure>;

fn usage<T>(msg: impl Into<String>) -> std::result::Result<T, Failure> {
    Err(Failure::Usage(msg.into()))
}

fn parse_json_list(text: &str, what: &str) -> std::result::Result<Value, Failure> {
    io::parse_list(text).map_err(|e| Failure::Usage(format!("--{what}: {e}")))
}

fn int_rows(v: &Value, what: &str) -> std::result::Result<Vec<Vec<i64>>, Failure> {
    let rows = v.as_array().ok_or_else(|| Failure::Usage(format!("--{what} must be a list of lists")))?;
    rows.iter()
        .map(|r| {
            r.as_array()
                .and_then(|r| r.iter().map(|x| x.as_i64()).collect::<Option<Vec<i64>>>())
                .ok_or_else(|| Failure::Usage(format!("--{what} must contain integers")))
        })
        .collect()
}

/// Reads `[1/2,-3]` or `1/2,-3` as rationals.
fn rationals(text: &str, what: &str) -> std::result::Result<Vec<Q>, Failure> {
    let t = text.trim();
    let v = if t.starts_with('[') { parse_json_list(t, what)? } else { parse_json_list(&format!("[{t}]"), what)? };
    let items = v.as_array().ok_or_else(|| Failure::Usage(format!("--{what} must be a list")))?;
    items.iter().map(|x| io::q_from_json(x).map_err(|e| Failure::Usage(format!("--{what}: {e}")))).collect()
}

/// Reads `[1,2,3]` or `1,2,3` as integers.
fn int_list(text: &str, what: &str) -> std::result::Result<Vec<i64>, Failure> {
    text.trim()
        .trim_start_matches('[')
        .trim_end_matches(']')
        .split(',')
        .filter(|s| !s.trim().is_empty())
        .map(|s| s.trim().parse().map_err(|_| Failure::Usage(format!("--{what}: '{s}' is not an integer"))))
        .collect()
}

fn directions(text: &str, rank: usize) -> std::result::Result<Vec<usize>, Failure> {
    text.split(',')
        .filter(|s| !s.trim().is_empty())
        .map(|s| match s.trim().parse::<usize>() {
            Ok(k) if (1..=rank).contains(&k) => Ok(k - 1),
            _ => usage(format!("mutation direction '{s}' must be between 1 and {rank}")),
        })
        .collect()
}

fn seed_from_args(a: &SeedArgs) -> std::result::Result<Seed, Failure> {
    let custom = a.kind.as_deref().is_none_or(|k| k.eq_ignore_ascii_case("custom"));
    let mut seed = if custom {
        let (Some(b), Some(delta)) = (&a.b, &a.delta) else {
            return usage("give --type NAME or --b and --delta");
        };
        let b = int_rows(&parse_json_list(b, "b")?, "b")?;
        let delta = int_list(delta, "delta")?;
        Seed::initial(FixedData::from_exchange_matrix(&b, &delta)?)
    } else {
        presets::seed(a.kind.as_deref().unwrap_or_default())?
    };
    if let Some(m) = &a.mutations {
        for k in directions(m, seed.rank())? {
            seed = seed.mutate(k)?;
        }
    }
    Ok(seed)
}

fn read_input(path: &Option<PathBuf>) -> std::result::Result<String, Failure> {
    match path {
        Some(p) if p.as_os_str() != "-" => {
            std::fs::read_to_string(p).map_err(|e| Failure::Usage(format!("cannot read {}: {e}", p.display())))
        }
        _ => {
            let mut s = String::new();
            std::io::stdin().read_to_string(&mut s).map_err(|e| Failure::Usage(format!("cannot read stdin: {e}")))?;
            Ok(s)
        }
    }
}

fn read_diagram(path: &Option<PathBuf>) -> std::result::Result<ScatteringDiagram, Failure> {
    let text = read_input(path)?;
    let v: Value =
        serde_json::from_str(&text).map_err(|e| Failure::Usage(format!("diagram is not valid JSON: {e}")))?;
    Ok(io::diagram_from_json(&v)?)
}

fn emit(text: &str, output: &Option<PathBuf>) -> std::result::Result<(), Failure> {
    match output {
        Some(p) => std::fs::write(p, text).map_err(|e| Failure::Usage(format!("cannot write {}: {e}", p.display()))),
        None => {
            let mut out = std::io::stdout().lock();
            let _ = out.write_all(text.as_bytes());
            Ok(())
        }
    }
}

fn pretty(v: &Value) -> String {
    serde_json::to_string_pretty(v).expect("values serialize") + "\n"
}

fn cmd_order(degree: i64, product: &str, format: &str) -> CmdResult {
    let input = io::product_from_json(&parse_json_list(product, "product")?)?;
    if input.iter().any(|f| f.n.len() != 2) {
        return usage("order works with rank-2 normals [n1,n2,c]");
    }
    let out = order(degree, &input)?;
    let text = match format {
        "json" => {
            let rows: Vec<String> = io::product_to_json(&out)
                .as_array()
                .expect("products serialize as arrays")
                .iter()
                .map(|r| r.to_string())
                .collect();
            format!("[\n  {}\n]\n", rows.join(",\n  "))
        }
        "list" => io::product_to_list_text(&out) + "\n",
        other => return usage(format!("unknown format '{other}'; use json or list")),
    };
    emit(&text, &None)?;
    Ok(true)
}

fn cmd_build(seed: &SeedArgs, degree: i64, output: &Option<PathBuf>) -> CmdResult {
    if degree < 1 {
        return usage("--degree must be positive");
    }
    let d = build_csd(&seed_from_args(seed)?, degree)?;
    emit(&pretty(&io::diagram_to_json(&d)), output)?;
    Ok(true)
}

/// Consistency and admissible-region report for a diagram.
fn verify_diagram(d: &ScatteringDiagram, level: i64) -> std::result::Result<(bool, Value), Failure> {
    let cons = check_consistency(d, level)?;
    let adm = admissible_region_check(d)?;
    let ok = cons.passed() && adm.passed();
    let report = json!({
        "format": io::FORMAT,
        "cutoff": level,
        "walls": d.walls.len(),
        "joints_checked": cons.checked,
        "consistent": cons.passed(),
        "failures": cons.failures.iter().map(|f| f.to_string()).collect::<Vec<_>>(),
        "admissible": adm.passed(),
        "admissible_violations": adm.violations.iter()
            .map(|v| json!({"wall": v.wall, "direction": v.k + 1, "value": v.value}))
            .collect::<Vec<_>>(),
    });
    Ok((ok, report))
}

fn cmd_verify(suite: &Option<String>, diagram: &Option<PathBuf>, count: usize, degree: Option<i64>) -> CmdResult {
    if let Some(name) = suite {
        let salt = 0;
        let report = match name.as_str() {
            "pentagon" => suites::pentagon_suite(count, degree.unwrap_or(6), salt)?,
            "bracket" => suites::bracket_suite(count, degree.unwrap_or(6), salt)?,
            "oracle" => suites::oracle_suite(count, degree.unwrap_or(5), salt)?,
            "conjugation" => suites::conjugation_suite(count, degree.unwrap_or(6), salt)?,
            other => return usage(format!("unknown suite '{other}'; use pentagon, bracket, oracle or conjugation")),
        };
        println!("{report}");
        return Ok(report.passed());
    }
    let d = read_diagram(diagram)?;
    let level = degree.unwrap_or(d.cutoff).min(d.cutoff);
    let (ok, report) = verify_diagram(&d, level)?;
    emit(&pretty(&report), &None)?;
    Ok(ok)
}

fn cmd_mutate(diagram: &Option<PathBuf>, direction: usize, verify: bool, output: &Option<PathBuf>) -> CmdResult {
    let d = read_diagram(diagram)?;
    if direction == 0 || direction > d.rank() {
        return usage(format!("--direction must be between 1 and {}", d.rank()));
    }
    let k = direction - 1;
    let m = mutate_csd(&d, k)?;
    let mut ok = true;
    if verify {
        let rebuilt = build_csd(&m.seed, m.cutoff)?;
        ok = csd_equivalent(&m, &rebuilt, m.cutoff)?;
        eprintln!(
            "mutated diagram (cutoff {}) {} the diagram rebuilt for the mutated seed",
            m.cutoff,
            if ok { "is equivalent to" } else { "differs from" }
        );
    }
    emit(&pretty(&io::diagram_to_json(&m)), output)?;
    Ok(ok)
}

fn cmd_theta(diagram: &Option<PathBuf>, m0: &str, n0: &Option<String>, q: &str, degree: i64, lines: bool) -> CmdResult {
    let d = read_diagram(diagram)?;
    let r = d.rank();
    let m = rationals(m0, "m0")?;
    let n = match n0 {
        Some(t) => int_list(t, "n0")?,
        None => vec![0; r],
    };
    let qv = rationals(q, "Q")?;
    if m.len() != r || n.len() != r || qv.len() != r {
        return usage(format!("--m0, --n0 and --Q need {r} entries"));
    }
    if degree > d.cutoff {
        return usage(format!("--degree {degree} exceeds the diagram cutoff {}", d.cutoff));
    }
    let start = MTilde::new(m, n);
    let found = broken_lines(&d, &start, &qv, degree)?;
    let series = sum_lines(&start, &found, degree);
    let mut v = io::series_to_json(&series);
    v["positive"] = json!(series.has_positive_integer_coefficients());
    if lines {
        v["broken_lines"] = json!(found.iter().map(|l| l.to_string()).collect::<Vec<_>>());
    }
    emit(&pretty(&v), &None)?;
    Ok(true)
}

fn cmd_gfan(seed: &SeedArgs, depth: usize) -> CmdResult {
    let s = seed_from_args(seed)?;
    let cones = g_cones(&s, depth)?;
    let v = json!({
        "format": io::FORMAT,
        "depth": depth,
        "cones": cones.iter().map(|(w, c)| {
            let mut o = io::cone_to_json(c);
            o["word"] = json!(w.iter().map(|k| k + 1).collect::<Vec<_>>());
            o
        }).collect::<Vec<_>>(),
    });
    emit(&pretty(&v), &None)?;
    Ok(true)
}

#[allow(clippy::too_many_arguments)]
fn cmd_render(
    seed: &SeedArgs,
    degree: Option<i64>,
    diagram: &Option<PathBuf>,
    output: &Option<PathBuf>,
    size: f64,
    clip: f64,
    gfan_depth: Option<usize>,
) -> CmdResult {
    let d = match (diagram, degree) {
        (Some(_), _) => read_diagram(diagram)?,
        (None, Some(l)) => build_csd(&seed_from_args(seed)?, l)?,
        (None, None) => return usage("give --diagram, or a seed with --degree"),
    };
    let chambers: Option<Vec<Cone>> = match gfan_depth {
        Some(depth) => Some(g_cones(&d.seed, depth)?.into_iter().map(|(_, c)| c).collect()),
        None => None,
    };
    let spec = render::RenderSpec { diagram: &d, size, clip, chambers: chambers.as_deref() };
    emit(&render::render_svg(&spec)?, output)?;
    Ok(true)
}

fn cmd_badlands(delta: &str, degree: i64) -> CmdResult {
    let parts = int_list(delta, "delta")?;
    let [d1, d2] = parts[..] else {
        return usage("--delta must be d1,d2");
    };
    if d1 < 1 || d2 < 1 {
        return usage("--delta entries must be positive");
    }
    let input =
        vec![Factor::new(vec![0, 1], Q::from_integer(d2.into())), Factor::new(vec![1, 0], Q::from_integer(d1.into()))];
    let out = order(degree, &input)?;
    let region = badlands_normals(d1, d2, degree);
    let present: Vec<&Vec<i64>> = region.iter().filter(|n| exponent_of(&out, n) != Q::from_integer(0.into())).collect();
    let missing: Vec<&Vec<i64>> = region.iter().filter(|n| exponent_of(&out, n) == Q::from_integer(0.into())).collect();
    let v = json!({
        "format": io::FORMAT,
        "delta": [d1, d2],
        "degree": degree,
        "product": display_product(&out),
        "region_normals": region,
        "present": present,
        "missing": missing,
    });
    emit(&pretty(&v), &None)?;
    Ok(missing.is_empty())
}

fn cmd_presets() -> CmdResult {
    for p in presets::all() {
        println!("{:<8} delta={:?} B={:?}  {}", p.name, p.delta, p.b, p.summary);
    }
    Ok(true)
}

fn run(cli: Cli) -> CmdResult {
    match &cli.command {
        Command::Order { degree, product, format } => cmd_order(*degree, product, format),
        Command::Build { seed, degree, output } => cmd_build(seed, *degree, output),
        Command::Verify { suite, diagram, count, degree } => cmd_verify(suite, diagram, *count, *degree),
        Command::Mutate { diagram, direction, verify, output } => cmd_mutate(diagram, *direction, *verify, output),
        Command::Theta { diagram, m0, n0, q, degree, lines } => cmd_theta(diagram, m0, n0, q, *degree, *lines),
        Command::Gfan { seed, depth } => cmd_gfan(seed, *depth),
        Command::Render { seed, degree, diagram, output, size, clip, gfan_depth } => {
            cmd_render(seed, *degree, diagram, output, *size, *clip, *gfan_depth)
        }
        Command::Badlands { delta, degree } => cmd_badlands(delta, *degree),
        Command::Presets => cmd_presets(),
    }
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(Failure::Check(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(1)
        }
        Err(Failure::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
    }
}
