//! Command-line surface over `cusp-cm`.
//!
//! [`run`] is the whole program: it takes argv and a stdin reader and returns
//! the exit code with both output streams, so tests drive it in-process.

use std::collections::BTreeMap;
use std::io::BufRead;

use clap::{Args, Parser, Subcommand, ValueEnum};
use cusp_cm::{
    apply_sigma, classify_label, cohom_dims, cusp_quiver, descend, enumerate_canonical,
    enumerate_rank, export_dot, family_counts, geometry_of, is_sigma_symmetric, tpq_quiver,
    tpq_special_tube, validate_cusp, verify_formula, ARQuiver, BundleTriple, CmModuleLabel,
    CuspGeometry, Error, SSeq, Scalar, TpqGeometry,
};
use serde::Serialize;
use serde_json::{json, Value};

pub const EXIT_OK: i32 = 0;
pub const EXIT_USAGE: i32 = 2;

#[derive(Parser, Debug)]
#[command(
    name = "cusp-cm",
    version,
    about = "Cohen-Macaulay modules over cusp and T_pq singularities"
)]
struct Cli {
    /// Output format; quiver commands default to dot, everything else to json.
    #[arg(long, global = true, value_enum)]
    format: Option<Format>,
    /// Read one JSON request per stdin line, write one JSON result per line.
    #[arg(long)]
    batch: bool,
    #[command(subcommand)]
    command: Option<Command>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Dot,
    Table,
}

#[derive(Args, Debug, Clone)]
struct SeqArgs {
    /// Number of components of the exceptional cycle.
    #[arg(long, value_parser = clap::value_parser!(u64).range(1..=64))]
    s: u64,
    /// Comma-separated integers, e.g. `2,-1`.
    #[arg(long, allow_hyphen_values = true)]
    seq: String,
}

#[derive(Args, Debug, Clone)]
struct TripleArgs {
    #[command(flatten)]
    seq: SeqArgs,
    #[arg(long, default_value_t = 1, value_parser = clap::value_parser!(u32).range(1..=1000))]
    m: u32,
    /// Nonzero rational, `n` or `n/d`.
    #[arg(long, allow_hyphen_values = true)]
    lambda: String,
}

#[derive(Args, Debug, Clone)]
struct GeomArgs {
    #[arg(long, value_parser = clap::value_parser!(u64).range(1..=64))]
    s: u64,
    /// The b-vector, comma-separated non-negative integers, not all zero.
    #[arg(long)]
    b: String,
}

#[derive(Args, Debug, Clone)]
struct TpqArgs {
    #[arg(long, value_parser = clap::value_parser!(u32).range(3..=200))]
    p: u32,
    #[arg(long, value_parser = clap::value_parser!(u32).range(3..=200))]
    q: u32,
}

#[derive(Args, Debug, Clone)]
struct QuiverArgs {
    /// Largest rank of a tube base `M(d, 1, λ)`.
    #[arg(long, default_value_t = 2, value_parser = clap::value_parser!(u64).range(1..=8))]
    max_rank: u64,
    /// Largest tube level `m`.
    #[arg(long, default_value_t = 3, value_parser = clap::value_parser!(u32).range(1..=32))]
    depth: u32,
    /// Scalars `λ` to materialize, comma-separated.
    #[arg(long, default_value = "1,2", allow_hyphen_values = true)]
    lambdas: String,
    /// Attach the arrow-multiplicity rule for a hypersurface of this dimension.
    #[arg(long, value_parser = clap::value_parser!(u32).range(1..=64))]
    dimension: Option<u32>,
}

#[derive(Subcommand, Debug, Clone)]
enum Command {
    /// Canonical representative of an s-shift orbit.
    Canon(SeqArgs),
    /// θ, δ, h⁰, h¹ of the bundle `(d, m, λ)`.
    Cohom(TripleArgs),
    /// Compare the closed formulas with exact linear algebra.
    Verify(VerifyArgs),
    /// Label and rank of the cusp module `M(d, m, λ)`.
    Classify {
        #[command(flatten)]
        geom: GeomArgs,
        #[arg(long, allow_hyphen_values = true)]
        seq: String,
        #[arg(long, default_value_t = 1, value_parser = clap::value_parser!(u32).range(1..=1000))]
        m: u32,
        #[arg(long, allow_hyphen_values = true)]
        lambda: String,
    },
    /// Families and isolated modules of a given rank.
    Enumerate {
        #[command(flatten)]
        geom: GeomArgs,
        #[arg(long, value_parser = clap::value_parser!(u64).range(1..=12))]
        rank: u64,
    },
    /// Family counts d(r) for r = 1..r_max.
    Growth {
        #[command(flatten)]
        geom: GeomArgs,
        #[arg(long, value_parser = clap::value_parser!(u64).range(1..=12))]
        r_max: u64,
    },
    /// Truncated Auslander-Reiten quiver of a cusp.
    Quiver {
        #[command(flatten)]
        geom: GeomArgs,
        #[command(flatten)]
        opts: QuiverArgs,
    },
    /// Resolution data of `T_{pq2}`.
    TpqGeometry(TpqArgs),
    /// The involution σ on a sequence.
    TpqSigma {
        #[command(flatten)]
        tpq: TpqArgs,
        #[arg(long, allow_hyphen_values = true)]
        seq: String,
    },
    /// Images of a cusp module over the `T_pq` curve.
    TpqDescend {
        #[command(flatten)]
        tpq: TpqArgs,
        /// Descend the free module instead of `M(d, m, λ)`.
        #[arg(long, conflicts_with_all = ["seq", "lambda"])]
        free: bool,
        #[arg(long, allow_hyphen_values = true, required_unless_present = "free")]
        seq: Option<String>,
        #[arg(long, default_value_t = 1, value_parser = clap::value_parser!(u32).range(1..=1000))]
        m: u32,
        #[arg(long, allow_hyphen_values = true, required_unless_present = "free")]
        lambda: Option<String>,
    },
    /// Truncated Auslander-Reiten quiver of a `T_pq` curve.
    TpqQuiver {
        #[command(flatten)]
        tpq: TpqArgs,
        #[command(flatten)]
        opts: QuiverArgs,
        /// Only the tube containing `A'`.
        #[arg(long)]
        special: bool,
    },
}

#[derive(Args, Debug, Clone)]
struct VerifyArgs {
    #[arg(long, value_parser = clap::value_parser!(u64).range(1..=64), required_unless_present = "grid")]
    s: Option<u64>,
    #[arg(long, allow_hyphen_values = true, requires_all = ["s", "lambda"], conflicts_with = "grid")]
    seq: Option<String>,
    #[arg(long, default_value_t = 1, value_parser = clap::value_parser!(u32).range(1..=1000))]
    m: u32,
    #[arg(long, allow_hyphen_values = true)]
    lambda: Option<String>,
    /// `key=value` items: rs_max=N entries=LO..HI m_max=N lambdas=L,.. [s=S,..]
    #[arg(long, num_args = 1.., allow_hyphen_values = true)]
    grid: Option<Vec<String>>,
}

/// Result of one invocation.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Output {
    pub code: i32,
    pub stdout: String,
    pub stderr: String,
}

#[derive(Debug, Clone, PartialEq, Eq)]
struct Failure {
    kind: String,
    message: String,
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure {
            kind: e.kind().to_string(),
            message: e.to_string(),
        }
    }
}

impl Failure {
    fn usage(message: impl Into<String>) -> Self {
        Failure {
            kind: "usage".into(),
            message: message.into(),
        }
    }

    fn to_json(&self) -> Value {
        json!({"error": {"kind": self.kind, "message": self.message}})
    }
}

type CmdResult = Result<Rendered, Failure>;

enum Rendered {
    Value(Value),
    Quiver(ARQuiver),
}

fn parse_ints(what: &str, text: &str) -> Result<Vec<i64>, Failure> {
    let bad = || Failure::from(Error::Parse(format!("malformed {what} literal {text:?}")));
    if text.trim().is_empty() {
        return Err(bad());
    }
    text.split(',')
        .map(|t| t.trim().parse::<i64>().map_err(|_| bad()))
        .collect()
}

fn parse_seq(s: u64, text: &str) -> Result<SSeq, Failure> {
    Ok(SSeq::new(s as usize, parse_ints("sequence", text)?)?)
}

fn parse_scalar(text: &str) -> Result<Scalar, Failure> {
    Ok(text.parse::<Scalar>()?)
}

fn parse_scalars(text: &str) -> Result<Vec<Scalar>, Failure> {
    text.split(',').map(parse_scalar).collect()
}

fn parse_geom(g: &GeomArgs) -> Result<CuspGeometry, Failure> {
    Ok(validate_cusp(g.s as i64, parse_ints("b-vector", &g.b)?)?)
}

fn parse_tpq(t: &TpqArgs) -> Result<TpqGeometry, Failure> {
    Ok(geometry_of(t.p, t.q)?)
}

fn to_value<T: Serialize>(v: &T) -> Value {
    serde_json::to_value(v).expect("output types serialize")
}

fn label_value(label: &CmModuleLabel) -> Value {
    json!({"label": label.to_string(), "rank": label.rank(), "free": label.is_free()})
}

struct Grid {
    s: Vec<usize>,
    rs_max: usize,
    lo: i64,
    hi: i64,
    m_max: u32,
    lambdas: Vec<Scalar>,
}

fn parse_grid(items: &[String]) -> Result<Grid, Failure> {
    let mut kv = BTreeMap::new();
    for item in items.iter().flat_map(|i| i.split_whitespace()) {
        let (k, v) = item
            .split_once('=')
            .ok_or_else(|| Failure::usage(format!("grid item {item:?} is not key=value")))?;
        kv.insert(k.to_string(), v.to_string());
    }
    let num = |key: &str, default: usize| -> Result<usize, Failure> {
        match kv.get(key) {
            None => Ok(default),
            Some(v) => v
                .parse::<usize>()
                .ok()
                .filter(|&n| (1..=12).contains(&n))
                .ok_or_else(|| {
                    Failure::usage(format!("grid {key}={v} must be an integer in 1..=12"))
                }),
        }
    };
    let rs_max = num("rs_max", 4)?;
    let m_max = num("m_max", 2)? as u32;
    let (lo, hi) = match kv.get("entries") {
        None => (-2, 2),
        Some(v) => {
            let (a, b) = v
                .split_once("..")
                .ok_or_else(|| Failure::usage(format!("grid entries={v} must be LO..HI")))?;
            let p = |x: &str| {
                x.parse::<i64>()
                    .map_err(|_| Failure::usage(format!("grid entries={v} must be LO..HI")))
            };
            (p(a)?, p(b)?)
        }
    };
    let lambdas = parse_scalars(kv.get("lambdas").map_or("1,-1,2", String::as_str))?;
    let s = match kv.get("s") {
        None => (1..=rs_max.min(3)).collect(),
        Some(v) => parse_ints("s", v)?
            .into_iter()
            .map(|x| {
                usize::try_from(x)
                    .ok()
                    .filter(|&x| x >= 1)
                    .ok_or_else(|| Failure::from(Error::ZeroComponents))
            })
            .collect::<Result<_, _>>()?,
    };
    if let Some(k) = kv
        .keys()
        .find(|k| !["s", "rs_max", "entries", "m_max", "lambdas"].contains(&k.as_str()))
    {
        return Err(Failure::usage(format!("unknown grid key {k:?}")));
    }
    Ok(Grid {
        s,
        rs_max,
        lo,
        hi,
        m_max,
        lambdas,
    })
}

fn verify_grid(grid: &Grid) -> CmdResult {
    let mut cases = 0u64;
    let mut mismatches = Vec::new();
    for &s in &grid.s {
        for seq in enumerate_canonical(s, grid.rs_max / s, grid.lo, grid.hi)? {
            for m in 1..=grid.m_max {
                for &l in &grid.lambdas {
                    let t = BundleTriple::new(seq.clone(), m, l)?;
                    cases += 1;
                    if !verify_formula(&t).agree {
                        mismatches.push(t.to_string());
                    }
                }
            }
        }
    }
    Ok(Rendered::Value(json!({
        "cases": cases,
        "mismatches": mismatches.len(),
        "first_mismatches": mismatches.iter().take(5).collect::<Vec<_>>(),
    })))
}

fn finish_quiver(mut q: ARQuiver, opts: &QuiverArgs) -> CmdResult {
    if let Some(n) = opts.dimension {
        q.decorate(n)?;
    }
    Ok(Rendered::Quiver(q))
}

fn execute(cmd: &Command) -> CmdResult {
    match cmd {
        Command::Canon(a) => {
            let seq = parse_seq(a.s, &a.seq)?;
            Ok(Rendered::Value(json!({
                "canonical": seq.canonical_form().entries(),
                "aperiodic": seq.is_aperiodic(),
            })))
        }
        Command::Cohom(a) => {
            let t = BundleTriple::any_sequence(
                parse_seq(a.seq.s, &a.seq.seq)?,
                a.m,
                parse_scalar(&a.lambda)?,
            )?;
            Ok(Rendered::Value(to_value(&cohom_dims(&t))))
        }
        Command::Verify(a) => match &a.grid {
            Some(items) => verify_grid(&parse_grid(items)?),
            None => {
                let s = a.s.expect("clap requires --s without --grid");
                let seq = a
                    .seq
                    .as_deref()
                    .ok_or_else(|| Failure::usage("verify needs --seq or --grid"))?;
                let lambda = a
                    .lambda
                    .as_deref()
                    .ok_or_else(|| Failure::usage("verify needs --lambda"))?;
                let t = BundleTriple::any_sequence(parse_seq(s, seq)?, a.m, parse_scalar(lambda)?)?;
                Ok(Rendered::Value(to_value(&verify_formula(&t))))
            }
        },
        Command::Classify {
            geom,
            seq,
            m,
            lambda,
        } => {
            let g = parse_geom(geom)?;
            let t = BundleTriple::new(parse_seq(geom.s, seq)?, *m, parse_scalar(lambda)?)?;
            Ok(Rendered::Value(label_value(&classify_label(&t, &g)?)))
        }
        Command::Enumerate { geom, rank } => {
            let e = enumerate_rank(&parse_geom(geom)?, *rank)?;
            let families: Vec<Value> = e
                .families
                .iter()
                .map(|f| json!({"seq": f.seq.entries(), "m": f.m, "base": f.base, "rank": f.rank}))
                .collect();
            let exceptional: Vec<Value> = e.exceptional.iter().map(label_value).collect();
            Ok(Rendered::Value(json!({
                "rank": e.rank,
                "free": e.free,
                "count": families.len(),
                "families": families,
                "exceptional": exceptional,
            })))
        }
        Command::Growth { geom, r_max } => {
            let t = family_counts(&parse_geom(geom)?, *r_max)?;
            let exceptional: BTreeMap<u64, Vec<String>> = t
                .exceptional
                .iter()
                .map(|(r, v)| (*r, v.iter().map(ToString::to_string).collect()))
                .collect();
            Ok(Rendered::Value(
                json!({"counts": t.counts, "exceptional": exceptional}),
            ))
        }
        Command::Quiver { geom, opts } => {
            let g = parse_geom(geom)?;
            finish_quiver(
                cusp_quiver(
                    &g,
                    opts.max_rank,
                    opts.depth,
                    &parse_scalars(&opts.lambdas)?,
                )?,
                opts,
            )
        }
        Command::TpqGeometry(a) => {
            let g = parse_tpq(a)?;
            Ok(Rendered::Value(json!({
                "p": g.p,
                "q": g.q,
                "case": g.case,
                "s": g.cusp.s(),
                "b": g.cusp.b(),
                "t": g.t,
            })))
        }
        Command::TpqSigma { tpq, seq } => {
            let g = parse_tpq(tpq)?;
            let x = parse_seq(g.cusp.s() as u64, seq)?;
            let sx = apply_sigma(&g, &x)?;
            Ok(Rendered::Value(json!({
                "sigma": sx.entries(),
                "canonical": sx.canonical_form().entries(),
                "sigma_symmetric": is_sigma_symmetric(&g, &x)?,
            })))
        }
        Command::TpqDescend {
            tpq,
            free,
            seq,
            m,
            lambda,
        } => {
            let g = parse_tpq(tpq)?;
            let label = if *free {
                CmModuleLabel::free(&g.cusp)
            } else {
                let (seq, lambda) = (
                    seq.as_deref().unwrap_or_default(),
                    lambda.as_deref().unwrap_or_default(),
                );
                let t = BundleTriple::new(
                    parse_seq(g.cusp.s() as u64, seq)?,
                    *m,
                    parse_scalar(lambda)?,
                )?;
                classify_label(&t, &g.cusp)?
            };
            let images: Vec<String> = descend(&g, &label)?
                .iter()
                .map(ToString::to_string)
                .collect();
            Ok(Rendered::Value(
                json!({"source": label.to_string(), "images": images}),
            ))
        }
        Command::TpqQuiver { tpq, opts, special } => {
            let g = parse_tpq(tpq)?;
            let q = if *special {
                tpq_special_tube(&g, opts.depth)?
            } else {
                tpq_quiver(
                    &g,
                    opts.max_rank,
                    opts.depth,
                    &parse_scalars(&opts.lambdas)?,
                )?
            };
            finish_quiver(q, opts)
        }
    }
}

fn is_quiver(cmd: &Command) -> bool {
    matches!(cmd, Command::Quiver { .. } | Command::TpqQuiver { .. })
}

fn table_cell(v: &Value) -> String {
    match v {
        Value::String(s) => s.clone(),
        other => other.to_string(),
    }
}

fn render(out: Rendered, format: Format) -> Result<String, Failure> {
    match (out, format) {
        (Rendered::Value(v), Format::Json) => Ok(v.to_string()),
        (Rendered::Value(Value::Object(map)), Format::Table) => Ok(map
            .iter()
            .map(|(k, v)| format!("{k}={}", table_cell(v)))
            .collect::<Vec<_>>()
            .join(" ")),
        (Rendered::Value(_), _) => Err(Failure::usage(
            "dot output is only available for quiver commands",
        )),
        (Rendered::Quiver(q), Format::Dot) => Ok(export_dot(&q).trim_end().to_string()),
        (Rendered::Quiver(q), Format::Json) => Ok(to_value(&q.export()).to_string()),
        (Rendered::Quiver(q), Format::Table) => {
            let e = q.export();
            let mut lines = Vec::new();
            for t in &e.tubes {
                lines.push(format!(
                    "{} period={} members={}",
                    t.name,
                    t.period,
                    t.members.join(" ")
                ));
            }
            lines.push(format!(
                "nodes={} arrows={} tubes={}",
                e.nodes.len(),
                e.arrows.len(),
                e.tubes.len()
            ));
            Ok(lines.join("\n"))
        }
    }
}

/// Converts one batch record into argv: `cmd` names the subcommand, every
/// other key becomes `--key=value` with `_` read as `-`.
fn record_to_args(line: &str) -> Result<Vec<String>, Failure> {
    let v: Value = serde_json::from_str(line)
        .map_err(|e| Failure::usage(format!("malformed JSON record: {e}")))?;
    let Value::Object(map) = v else {
        return Err(Failure::usage("batch record must be a JSON object"));
    };
    let cmd = map
        .get("cmd")
        .and_then(Value::as_str)
        .ok_or_else(|| Failure::usage("batch record needs a string \"cmd\""))?;
    let mut args = vec!["cusp-cm".to_string(), cmd.to_string()];
    for (k, v) in map.iter().filter(|(k, _)| k.as_str() != "cmd") {
        let flag = format!("--{}", k.replace('_', "-"));
        let scalar = |v: &Value| match v {
            Value::String(s) => Ok(s.clone()),
            Value::Number(n) => Ok(n.to_string()),
            _ => Err(Failure::usage(format!("unsupported value for {k:?}"))),
        };
        match v {
            Value::Bool(true) => args.push(flag),
            Value::Bool(false) | Value::Null => {}
            Value::Array(items) if k == "grid" => {
                args.push(flag);
                args.extend(items.iter().map(scalar).collect::<Result<Vec<_>, _>>()?);
            }
            Value::String(s) if k == "grid" => {
                args.push(flag);
                args.extend(s.split_whitespace().map(str::to_string));
            }
            Value::Array(items) => {
                let parts = items.iter().map(scalar).collect::<Result<Vec<_>, _>>()?;
                args.push(format!("{flag}={}", parts.join(",")));
            }
            other => args.push(format!("{flag}={}", scalar(other)?)),
        }
    }
    Ok(args)
}

fn batch_line(line: &str) -> String {
    let result = record_to_args(line).and_then(|args| {
        let cli =
            Cli::try_parse_from(&args).map_err(|e| Failure::usage(first_line(&e.to_string())))?;
        let cmd = cli
            .command
            .ok_or_else(|| Failure::usage("missing subcommand"))?;
        render(execute(&cmd)?, Format::Json)
    });
    result.unwrap_or_else(|f| f.to_json().to_string())
}

fn first_line(s: &str) -> String {
    s.lines()
        .next()
        .unwrap_or_default()
        .trim_start_matches("error: ")
        .to_string()
}

fn failure_output(f: &Failure, json_mode: bool) -> Output {
    Output {
        code: EXIT_USAGE,
        stdout: if json_mode {
            format!("{}\n", f.to_json())
        } else {
            String::new()
        },
        stderr: format!("error: {}\n", f.message),
    }
}

/// Runs one invocation; `args[0]` is the program name.
pub fn run<I, T>(args: I, stdin: &mut dyn BufRead) -> Output
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            use clap::error::ErrorKind;
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => Output {
                    code: EXIT_OK,
                    stdout: e.to_string(),
                    stderr: String::new(),
                },
                _ => Output {
                    code: EXIT_USAGE,
                    stdout: String::new(),
                    stderr: format!("error: {}\n", first_line(&e.render().to_string())),
                },
            };
        }
    };

    if cli.batch {
        if cli.command.is_some() {
            return failure_output(
                &Failure::usage("--batch takes requests on stdin, not a subcommand"),
                false,
            );
        }
        let mut stdout = String::new();
        for line in stdin.lines() {
            let line = match line {
                Ok(l) => l,
                Err(e) => {
                    return failure_output(&Failure::usage(format!("reading stdin: {e}")), false)
                }
            };
            if line.trim().is_empty() {
                continue;
            }
            stdout.push_str(&batch_line(&line));
            stdout.push('\n');
        }
        return Output {
            code: EXIT_OK,
            stdout,
            stderr: String::new(),
        };
    }

    let Some(cmd) = cli.command else {
        return failure_output(&Failure::usage("missing subcommand (see --help)"), false);
    };
    let format = cli.format.unwrap_or(if is_quiver(&cmd) {
        Format::Dot
    } else {
        Format::Json
    });
    match execute(&cmd).and_then(|r| render(r, format)) {
        Ok(text) => Output {
            code: EXIT_OK,
            stdout: format!("{text}\n"),
            stderr: String::new(),
        },
        Err(f) => failure_output(&f, format == Format::Json),
    }
}
