//! Command implementations behind the `lietk` binary.

use std::fmt;
use std::str::FromStr;
use std::sync::Arc;

use clap::{Args, Parser, Subcommand};
use serde_json::{json, Value};

use lietk::algebra::{build_classical, is_compact_type, is_semisimple, Family, LieAlgebra};
use lietk::cartan::{
    choose_positive, root_decomposition, standard_cartan, DecompositionOptions, PositiveChoice, RootSystem,
};
use lietk::dynkin::{diagram_of, render_ascii};
use lietk::geometry::{orbit_shape_operator, parallel_orbit_check, OrbitReportJson};
use lietk::weyl::generate;
use lietk::LieError;

pub const EXIT_OK: i32 = 0;
pub const EXIT_PARSE: i32 = 2;
pub const EXIT_STRUCTURE: i32 = 3;
pub const EXIT_INPUT: i32 = 4;
pub const EXIT_INTERNAL: i32 = 5;

/// A classical algebra written as `su3`, `so7`, `sp2`, `u2`, `sl2_r`, `gl3_c`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct GroupSpec {
    pub family: Family,
    pub n: usize,
}

impl FromStr for GroupSpec {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let bad = || format!("cannot parse '{s}': expected e.g. su3, so7, sp2, u2, sl2_r, gl3_c");
        let letters: String = s.chars().take_while(|c| c.is_ascii_alphabetic()).collect();
        let rest = &s[letters.len()..];
        let digits: String = rest.chars().take_while(|c| c.is_ascii_digit()).collect();
        let suffix = &rest[digits.len()..];
        let n: usize = digits.parse().map_err(|_| bad())?;
        let family = match (letters.as_str(), suffix) {
            ("su", "") => Family::Su,
            ("so", "") => Family::So,
            ("sp", "") => Family::Sp,
            ("u", "") => Family::U,
            ("sl", "_r") => Family::SlR,
            ("sl", "_c") => Family::SlC,
            ("gl", "_r") => Family::GlR,
            ("gl", "_c") => Family::GlC,
            _ => return Err(bad()),
        };
        Ok(Self { family, n })
    }
}

impl fmt::Display for GroupSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.family {
            Family::SlR => write!(f, "sl{}_r", self.n),
            Family::SlC => write!(f, "sl{}_c", self.n),
            Family::GlR => write!(f, "gl{}_r", self.n),
            Family::GlC => write!(f, "gl{}_c", self.n),
            other => write!(f, "{}{}", other.short_name(), self.n),
        }
    }
}

#[derive(Debug, Parser)]
#[command(name = "lietk", version, about = "Roots, Weyl groups, Dynkin diagrams and orbit geometry of classical Lie algebras")]
pub struct Cli {
    /// Emit JSON instead of text.
    #[arg(long, global = true)]
    pub json: bool,
    /// Seed for every randomised step.
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,
    /// Weight clustering tolerance of the root decomposition.
    #[arg(long, global = true)]
    pub tol: Option<f64>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Dimension, Killing signature, semisimplicity and rank.
    Algebra { spec: GroupSpec },
    /// Roots, positive and simple roots, coroots.
    Roots { spec: GroupSpec },
    /// Dynkin diagram and its classification.
    Dynkin {
        spec: GroupSpec,
        /// Print only the diagram.
        #[arg(long)]
        ascii: bool,
    },
    /// Weyl group order or full element list.
    Weyl {
        spec: GroupSpec,
        /// Print only the order.
        #[arg(long)]
        order_only: bool,
    },
    /// Principal curvatures and parallel orbits of a regular adjoint orbit.
    Orbit(OrbitArgs),
}

#[derive(Debug, Args)]
pub struct OrbitArgs {
    pub spec: GroupSpec,
    /// Regular point of the Cartan subalgebra (comma-separated coordinates).
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true, required = true)]
    pub z: Vec<f64>,
    /// Normal direction in the Cartan subalgebra; defaults to zero.
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
    pub n: Vec<f64>,
    /// Number of random group elements in the parallel-orbit check.
    #[arg(long, default_value_t = 5)]
    pub samples: usize,
}

/// Failure of a command, with its exit code.
#[derive(Debug, Clone, PartialEq)]
pub struct CliError {
    pub code: i32,
    pub message: String,
}

impl CliError {
    fn new(code: i32, message: impl Into<String>) -> Self {
        Self {
            code,
            message: message.into(),
        }
    }
}

impl From<LieError> for CliError {
    fn from(e: LieError) -> Self {
        let code = match &e {
            LieError::Precondition(_) => EXIT_STRUCTURE,
            LieError::Regularity { .. } | LieError::Dimension { .. } => EXIT_INPUT,
            LieError::Construction(_) => EXIT_PARSE,
            _ => EXIT_INTERNAL,
        };
        Self::new(code, e.to_string())
    }
}

type CmdResult = Result<String, CliError>;

/// Rounds to 12 significant digits and clears negative zero.
pub fn round12(x: f64) -> f64 {
    if !x.is_finite() || x == 0.0 {
        return if x == 0.0 { 0.0 } else { x };
    }
    let r: f64 = format!("{x:.11e}").parse().unwrap_or(x);
    if r == 0.0 {
        0.0
    } else {
        r
    }
}

fn round_value(v: Value) -> Value {
    match v {
        Value::Number(n) if !(n.is_i64() || n.is_u64()) => {
            n.as_f64().map(|f| json!(round12(f))).unwrap_or(Value::Number(n))
        }
        Value::Array(a) => Value::Array(a.into_iter().map(round_value).collect()),
        Value::Object(o) => Value::Object(o.into_iter().map(|(k, v)| (k, round_value(v))).collect()),
        other => other,
    }
}

fn to_json_text(v: Value) -> String {
    serde_json::to_string_pretty(&round_value(v)).expect("JSON values always serialize")
}

fn fmt_vec(v: &[f64]) -> String {
    let parts: Vec<String> = v.iter().map(|x| format!("{}", round12(*x))).collect();
    format!("[{}]", parts.join(", "))
}

fn build(spec: GroupSpec) -> Result<Arc<LieAlgebra>, CliError> {
    build_classical(spec.family, spec.n)
        .map(Arc::new)
        .map_err(|e| CliError::new(EXIT_PARSE, e.to_string()))
}

fn require_compact_semisimple(l: &LieAlgebra) -> Result<(), CliError> {
    match is_compact_type(l) {
        Ok(true) => Ok(()),
        Ok(false) => Err(CliError::new(EXIT_STRUCTURE, format!("{} is not of compact type", l.name()))),
        Err(_) => Err(CliError::new(EXIT_STRUCTURE, format!("{} is not semisimple", l.name()))),
    }
}

fn root_system(cli: &Cli, spec: GroupSpec) -> Result<RootSystem, CliError> {
    let l = build(spec)?;
    require_compact_semisimple(&l)?;
    let t = standard_cartan(l)?;
    let opts = DecompositionOptions {
        cluster_tol: cli.tol.unwrap_or(DecompositionOptions::default().cluster_tol),
        seed: cli.seed,
    };
    let rs = root_decomposition(&t, opts)?;
    Ok(choose_positive(&rs, PositiveChoice::Auto { seed: cli.seed })?)
}

/// Runs a parsed command and returns its stdout.
pub fn run(cli: &Cli) -> CmdResult {
    match &cli.command {
        Command::Algebra { spec } => cmd_algebra(cli, *spec),
        Command::Roots { spec } => cmd_roots(cli, *spec),
        Command::Dynkin { spec, ascii } => cmd_dynkin(cli, *spec, *ascii),
        Command::Weyl { spec, order_only } => cmd_weyl(cli, *spec, *order_only),
        Command::Orbit(args) => cmd_orbit(cli, args),
    }
}

fn cmd_algebra(cli: &Cli, spec: GroupSpec) -> CmdResult {
    let l = build(spec)?;
    let semisimple = is_semisimple(&l);
    let compact = matches!(is_compact_type(&l), Ok(true));
    let rank = if compact {
        Some(standard_cartan(l.clone())?.rank())
    } else {
        None
    };
    let sig = l.killing().signature;
    if cli.json {
        let mut v = serde_json::to_value(l.to_json()).expect("algebra JSON");
        let obj = v.as_object_mut().expect("object");
        obj.insert("rank".into(), json!(rank));
        obj.insert("semisimple".into(), json!(semisimple));
        obj.insert("compact_type".into(), json!(compact));
        return Ok(to_json_text(v));
    }
    let mut out = format!(
        "algebra: {}\ndimension: {}\nkilling signature: {} positive, {} zero, {} negative\nsemisimple: {}\ncompact type: {}\n",
        l.name(),
        l.dim(),
        sig.positive,
        sig.zero,
        sig.negative,
        semisimple,
        compact
    );
    if let Some(r) = rank {
        out.push_str(&format!("rank: {r}\n"));
    }
    Ok(out)
}

fn cmd_roots(cli: &Cli, spec: GroupSpec) -> CmdResult {
    let rs = root_system(cli, spec)?;
    if cli.json {
        return Ok(to_json_text(serde_json::to_value(rs.to_json()).expect("roots JSON")));
    }
    let mut out = format!(
        "{}: rank {}, {} roots, {} positive\nregular element: {}\nsimple roots:\n",
        rs.algebra().name(),
        rs.rank(),
        rs.roots().len(),
        rs.positive().len(),
        fmt_vec(rs.regular_element().unwrap_or(&[]))
    );
    for (k, &i) in rs.simple().iter().enumerate() {
        out.push_str(&format!("  a{} = {}\n", k + 1, fmt_vec(&rs.root(i).coords)));
    }
    out.push_str("positive roots:\n");
    for &i in rs.positive() {
        out.push_str(&format!("  {}\n", fmt_vec(&rs.root(i).coords)));
    }
    Ok(out)
}

fn cmd_dynkin(cli: &Cli, spec: GroupSpec, ascii_only: bool) -> CmdResult {
    let rs = root_system(cli, spec)?;
    let dg = diagram_of(&rs)?;
    if cli.json && !ascii_only {
        return Ok(to_json_text(serde_json::to_value(&dg).expect("diagram JSON")));
    }
    let picture = render_ascii(&dg);
    if ascii_only {
        return Ok(format!("{picture}\n"));
    }
    Ok(format!("{picture}\nlabel: {}\n", dg.label()))
}

fn cmd_weyl(cli: &Cli, spec: GroupSpec, order_only: bool) -> CmdResult {
    let rs = root_system(cli, spec)?;
    let w = generate(&rs)?;
    if cli.json {
        let mut j = w.to_json();
        if order_only {
            j.elements = None;
        }
        return Ok(to_json_text(serde_json::to_value(j).expect("Weyl JSON")));
    }
    if order_only {
        return Ok(format!("{}\n", w.order()));
    }
    Ok(format!(
        "{}: Weyl group of order {} generated by {} simple reflections\n",
        rs.algebra().name(),
        w.order(),
        w.generators().len()
    ))
}

fn cmd_orbit(cli: &Cli, args: &OrbitArgs) -> CmdResult {
    let rs = root_system(cli, args.spec)?;
    let r = rs.rank();
    let n = if args.n.is_empty() { vec![0.0; r] } else { args.n.clone() };
    if args.z.len() != r || n.len() != r {
        return Err(CliError::new(
            EXIT_PARSE,
            format!("--z and --n need {r} coordinates for {}", rs.algebra().name()),
        ));
    }
    let shape = match orbit_shape_operator(&rs, &args.z, &n) {
        Err(LieError::Regularity { vanishing }) => {
            let roots: Vec<String> = vanishing.iter().map(|&i| fmt_vec(&rs.root(i).coords)).collect();
            return Err(CliError::new(
                EXIT_INPUT,
                format!("z is not regular: roots {} vanish on it", roots.join(", ")),
            ));
        }
        other => other?,
    };
    let w = generate(&rs)?;
    let check = parallel_orbit_check(&rs, &w, &args.z, &n, args.samples, cli.seed)?;
    let failed = !check.passed;
    let out = if cli.json {
        to_json_text(serde_json::to_value(OrbitReportJson::new(&rs, &shape, &check)).expect("orbit JSON"))
    } else {
        let mut out = format!(
            "orbit of Z = {} in {}\norbit dimension: {}\nprincipal curvatures for N = {}:\n",
            fmt_vec(&args.z),
            rs.algebra().name(),
            check.orbit_dim_z,
            fmt_vec(&n)
        );
        for pc in &shape.curvatures {
            out.push_str(&format!(
                "  root {}: {} (multiplicity 2)\n",
                fmt_vec(&rs.root(pc.root).coords),
                round12(pc.value)
            ));
        }
        out.push_str(&format!("canonical Z + N: {}\n", fmt_vec(&check.canonical)));
        match check.dimension_drop() {
            Some((a, b)) => out.push_str(&format!("orbit dimension of Z + N: {b} (drop {a} -> {b})\n")),
            None => out.push_str(&format!("orbit dimension of Z + N: {}\n", check.orbit_dim_z_plus_n)),
        }
        out.push_str(&format!(
            "parallel orbit check: {} ({} samples, max deviation {:e})\n",
            if check.passed { "PASS" } else { "FAIL" },
            check.samples,
            round12(check.max_deviation)
        ));
        if let Some(f) = &check.failure {
            out.push_str(&format!("failure: {f}\n"));
        }
        out
    };
    if failed {
        return Err(CliError::new(EXIT_INTERNAL, out));
    }
    Ok(out)
}
