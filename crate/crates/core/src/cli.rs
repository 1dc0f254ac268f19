//! Command-line front end: argument grammar, run configuration and report
//! emission.  `run` never panics on bad input and never calls `exit`.

use crate::contours::{default_abscissa, perron_envelope, perron_mv, winding_number, ContourSpec, WindingTarget};
use crate::dirichlet::{
    default_cauchy_radius, f_v, g_deriv_cauchy, g_deriv_series, g_uv, GSpec, MollifierSpec, Variant,
};
use crate::error::{Error, Result};
use crate::experiments::{
    build_params, check_bound, check_expansion, check_lemma1, final_report, taylor_identity_check, BoundReport,
    Overrides, ParamSet, Probe, Regime,
};
use crate::format::{decimal, double};
use crate::precision::{float, parse_float, CValue, PrecisionContext, RValue};
use crate::roots::{find_mollifier_root, find_zeta_zero, RootResult};
use crate::sieve::{coeff_table, mobius_table};
use crate::zetafn::{zero_free_boundary, zeta_em};
use clap::{Args, Parser, Subcommand, ValueEnum};
use num_complex::Complex64;
use rug::Float;
use serde::ser::{SerializeMap, Serializer};
use serde::Serialize;
use std::ffi::OsString;
use std::io::Write;
use std::path::{Path, PathBuf};

pub const THREADS_ENV: &str = "ZETALAB_THREADS";

/// First nontrivial zero ordinate, used when `--gamma` is not given.
const GAMMA1_BRACKET: (f64, f64) = (14.0, 14.2);

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum OutputFormat {
    Json,
    Csv,
    Text,
}

impl std::str::FromStr for OutputFormat {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        <Self as ValueEnum>::from_str(s, true)
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct RunConfig {
    pub precision_bits: u32,
    pub threads: usize,
    pub output_format: OutputFormat,
    pub output_path: Option<PathBuf>,
    pub strict: bool,
}

impl Default for RunConfig {
    fn default() -> Self {
        Self { precision_bits: 256, threads: 1, output_format: OutputFormat::Json, output_path: None, strict: false }
    }
}

#[derive(Parser, Debug)]
#[command(name = "zetalab", version, about = "Mollified zeta-function laboratory")]
struct Cli {
    /// Working precision in bits (at least 64).
    #[arg(long, global = true)]
    precision: Option<u32>,
    #[arg(long, global = true)]
    threads: Option<usize>,
    #[arg(long, global = true, value_enum)]
    format: Option<OutputFormat>,
    /// Write output here instead of stdout.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    /// Turn regime-hypothesis violations into errors.
    #[arg(long, global = true)]
    strict: bool,
    /// key=value file with precision_bits, threads, output_format, strict.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Moebius and divisor-count table as CSV n,mu,d.
    Sieve {
        #[arg(long)]
        limit: usize,
    },
    /// zeta(s) or zeta'(s).
    Zeta(ZetaArgs),
    /// F_V(s) = zeta(s) M_V(s + s_V - 1).
    Fv {
        #[arg(long = "v")]
        length: usize,
        #[arg(long)]
        sigma: String,
        #[arg(long, default_value = "0")]
        t: String,
        #[arg(long)]
        tilde: bool,
    },
    /// D^j G(sigma) for G built from F_V, U and the ordinate gamma.
    Guv {
        #[arg(long = "u")]
        scale: u64,
        #[arg(long = "v")]
        length: usize,
        #[arg(long)]
        gamma: Option<f64>,
        #[arg(long, default_value_t = 0)]
        j: u32,
        #[arg(long, value_enum, default_value = "cauchy")]
        method: DerivMethod,
        #[arg(long, default_value_t = 1.5)]
        sigma: f64,
        /// Anchor s0 of the factor U^(s - s0).
        #[arg(long, default_value_t = 1.0)]
        anchor: f64,
    },
    /// M_V(s) through Perron's integral on Re z = c, |Im z| <= W.
    Perron {
        #[arg(long)]
        sigma: f64,
        #[arg(long, default_value_t = 0.0)]
        t: f64,
        #[arg(long = "v")]
        length: usize,
        #[arg(long)]
        c: Option<f64>,
        #[arg(long = "w")]
        half_height: f64,
    },
    /// Zeros minus poles of 1/zeta or M_V inside a circle.
    Winding {
        #[arg(long = "fn", value_enum)]
        target: WindingFn,
        /// Center as "re" or "re,im".
        #[arg(long, allow_hyphen_values = true)]
        center: String,
        #[arg(long)]
        radius: f64,
        #[arg(long = "v", default_value_t = 2)]
        length: usize,
    },
    #[command(subcommand)]
    Root(RootCommand),
    #[command(subcommand)]
    Check(CheckCommand),
    /// The closing chain evaluated at desk-scale parameters, report only.
    Final {
        #[arg(long, value_enum)]
        regime: RegimeArg,
        #[command(flatten)]
        params: ParamArgs,
    },
}

#[derive(Args, Debug)]
#[command(args_conflicts_with_subcommands = true)]
struct ZetaArgs {
    #[command(subcommand)]
    sub: Option<ZetaSub>,
    #[arg(long, allow_hyphen_values = true)]
    re: Option<String>,
    #[arg(long, allow_hyphen_values = true, default_value = "0")]
    im: String,
    #[arg(long, default_value_t = 0, value_parser = clap::value_parser!(u8).range(0..=1))]
    order: u8,
}

#[derive(Subcommand, Debug)]
enum ZetaSub {
    /// 1 - 0.034666/log(max(|t|, 705)/47.886).
    ZeroFreeBoundary {
        #[arg(long)]
        t: f64,
    },
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum DerivMethod {
    Series,
    Cauchy,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum WindingFn {
    Invzeta,
    Mv,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum RegimeArg {
    Star,
    Doublestar,
}

impl From<RegimeArg> for Regime {
    fn from(r: RegimeArg) -> Self {
        match r {
            RegimeArg::Star => Regime::Star,
            RegimeArg::Doublestar => Regime::Doublestar,
        }
    }
}

#[derive(Subcommand, Debug)]
enum RootCommand {
    /// Real root of M_V nearest 1.
    Sv {
        #[arg(long = "v")]
        length: usize,
        #[arg(long, default_value_t = 0.5)]
        radius: f64,
    },
    /// Zero of Z(t) in a sign-change bracket.
    Zeta {
        #[arg(long)]
        lo: f64,
        #[arg(long)]
        hi: f64,
    },
}

#[derive(Subcommand, Debug)]
enum CheckCommand {
    /// Poisson-weight inequalities on a u-grid.
    Lemma1 {
        #[arg(long = "J")]
        big_j: u32,
        #[arg(long, default_value_t = 1e-3)]
        step: f64,
    },
    /// Decay (3, 5) or growth (6, 7) bounds for F_V on a grid.
    Bound {
        #[arg(long)]
        lemma: u8,
        /// Real parts of the grid for lemmas 3 and 5.
        #[arg(long, value_delimiter = ',', default_values_t = [1.2, 1.5, 2.0, 3.0])]
        sigma: Vec<f64>,
        #[arg(long, default_value_t = 0.0)]
        t: f64,
        /// omega values for lemmas 6 and 7; z = 0.
        #[arg(long, value_delimiter = ',', default_values_t = [0.0, 0.05, 0.1])]
        omega: Vec<f64>,
        /// Also write the grid rows as CSV.
        #[arg(long)]
        csv: Option<PathBuf>,
        #[command(flatten)]
        params: ParamArgs,
    },
    /// Derivative-expansion bounds (8, 9).
    Expansion {
        #[arg(long)]
        lemma: u8,
        #[arg(long)]
        csv: Option<PathBuf>,
        #[command(flatten)]
        params: ParamArgs,
    },
    /// Taylor identity with integral remainder.
    Taylor {
        #[arg(long, value_enum, default_value = "doublestar")]
        regime: RegimeArg,
        #[command(flatten)]
        params: ParamArgs,
    },
}

#[derive(Args, Debug, Clone)]
struct ParamArgs {
    #[arg(long = "v", default_value_t = 10_000)]
    length: u64,
    /// Ordinate gamma0; defaults to the first zero.
    #[arg(long)]
    gamma0: Option<f64>,
    #[arg(long, default_value_t = 0.5)]
    beta0: f64,
    #[arg(long)]
    b: Option<f64>,
    #[arg(long)]
    epsilon: Option<f64>,
    #[arg(long)]
    r: Option<f64>,
    #[arg(long)]
    a: Option<f64>,
    #[arg(long)]
    z0: Option<f64>,
    #[arg(long)]
    z1: Option<f64>,
    #[arg(long = "u")]
    scale: Option<u64>,
    #[arg(long = "J")]
    big_j: Option<u32>,
    #[arg(long)]
    c0: Option<f64>,
}

/// Parses and runs one invocation; returns the process exit status.
pub fn run<I, T>(argv: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return e.exit_code();
        }
    };
    let config = match resolve_config(&cli) {
        Ok(c) => c,
        Err(msg) => {
            eprintln!("error: {msg}");
            return 2;
        }
    };
    let pool = match rayon::ThreadPoolBuilder::new().num_threads(config.threads).build() {
        Ok(p) => p,
        Err(e) => {
            emit_error(&Error::Domain(format!("cannot start {} worker threads: {e}", config.threads)));
            return 1;
        }
    };
    let outcome = pool.install(|| dispatch(&cli.command, &config)).and_then(|out| write_output(&out, &config));
    match outcome {
        Ok(()) => 0,
        Err(e) => {
            emit_error(&e);
            1
        }
    }
}

fn emit_error(e: &Error) {
    let body = serde_json::json!({ "error": e.kind(), "message": e.to_string() });
    eprintln!("{body}");
}

/// Flags over config file over environment (threads only) over defaults.
fn resolve_config(cli: &Cli) -> std::result::Result<RunConfig, String> {
    let mut cfg = RunConfig::default();
    let mut file_keys = Vec::new();
    if let Some(path) = &cli.config {
        file_keys = apply_config_file(&mut cfg, path)?;
    }
    if cli.threads.is_none() && !file_keys.iter().any(|k| k == "threads") {
        if let Ok(raw) = std::env::var(THREADS_ENV) {
            cfg.threads = raw.trim().parse().map_err(|_| format!("{THREADS_ENV}='{raw}' is not a thread count"))?;
        }
    }
    if let Some(bits) = cli.precision {
        cfg.precision_bits = bits;
    }
    if let Some(n) = cli.threads {
        cfg.threads = n;
    }
    if let Some(f) = cli.format {
        cfg.output_format = f;
    }
    if cli.strict {
        cfg.strict = true;
    }
    cfg.output_path = cli.out.clone();
    if cfg.precision_bits < 64 {
        return Err(format!("precision must be at least 64 bits, got {}", cfg.precision_bits));
    }
    if cfg.threads < 1 {
        return Err("threads must be at least 1".into());
    }
    Ok(cfg)
}

/// Applies a key=value file; returns the keys it set.
pub fn apply_config_file(cfg: &mut RunConfig, path: &Path) -> std::result::Result<Vec<String>, String> {
    let mut keys = Vec::new();
    let text = std::fs::read_to_string(path).map_err(|e| format!("cannot read config {}: {e}", path.display()))?;
    for (lineno, line) in text.lines().enumerate() {
        let line = line.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let (key, value) =
            line.split_once('=').ok_or_else(|| format!("{}:{}: expected key=value", path.display(), lineno + 1))?;
        let (key, value) = (key.trim(), value.trim());
        let bad = || format!("{}:{}: bad value '{value}' for {key}", path.display(), lineno + 1);
        match key {
            "precision_bits" => cfg.precision_bits = value.parse().map_err(|_| bad())?,
            "threads" => cfg.threads = value.parse().map_err(|_| bad())?,
            "output_format" => cfg.output_format = value.parse().map_err(|_| bad())?,
            "strict" => cfg.strict = value.parse().map_err(|_| bad())?,
            _ => return Err(format!("{}:{}: unknown key '{key}'", path.display(), lineno + 1)),
        }
        keys.push(key.to_string());
    }
    Ok(keys)
}

/// Ordered name/value pairs; serialized as a JSON object in insertion order.
#[derive(Default)]
struct Record(Vec<(&'static str, serde_json::Value)>);

impl Record {
    fn put(mut self, key: &'static str, value: impl Into<serde_json::Value>) -> Self {
        self.0.push((key, value.into()));
        self
    }

    fn real(self, key: &'static str, x: &RValue) -> Self {
        self.put(key, decimal(&x.value, x.err_bound))
    }

    fn complex(self, x: &CValue) -> Self {
        self.put("re", decimal(&x.re, x.err_bound))
            .put("im", decimal(&x.im, x.err_bound))
            .put("err_bound", double(x.err_bound))
    }
}

impl Serialize for Record {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let mut map = s.serialize_map(Some(self.0.len()))?;
        for (k, v) in &self.0 {
            map.serialize_entry(k, v)?;
        }
        map.end()
    }
}

enum Output {
    Record(Record),
    Report(Box<BoundReport>),
    Csv(String),
}

fn plain(v: &serde_json::Value) -> String {
    match v {
        serde_json::Value::String(s) => s.clone(),
        other => other.to_string(),
    }
}

fn render(out: &Output, format: OutputFormat) -> Result<String> {
    Ok(match (out, format) {
        (Output::Csv(text), _) => text.clone(),
        (Output::Record(r), OutputFormat::Json) => to_json(r)? + "\n",
        (Output::Record(r), OutputFormat::Csv) => {
            let head: Vec<&str> = r.0.iter().map(|(k, _)| *k).collect();
            let row: Vec<String> = r.0.iter().map(|(_, v)| plain(v).replace(',', ";")).collect();
            format!("{}\n{}\n", head.join(","), row.join(","))
        }
        (Output::Record(r), OutputFormat::Text) => r.0.iter().map(|(k, v)| format!("{k}: {}\n", plain(v))).collect(),
        (Output::Report(rep), OutputFormat::Json) => to_json(rep.as_ref())? + "\n",
        (Output::Report(rep), OutputFormat::Csv) => {
            if rep.rows.is_empty() {
                let mut text = String::from("name,value\n");
                for e in &rep.extra {
                    text.push_str(&format!("{},{}\n", e.name, e.value));
                }
                text
            } else {
                rep.rows_csv()
            }
        }
        (Output::Report(rep), OutputFormat::Text) => report_text(rep),
    })
}

fn to_json<T: Serialize + ?Sized>(value: &T) -> Result<String> {
    serde_json::to_string_pretty(value).map_err(|e| Error::Io(e.to_string()))
}

fn report_text(rep: &BoundReport) -> String {
    let mut t = format!(
        "{}: lhs {} rhs {} ratio {}\nhypotheses satisfied: {}\n",
        rep.lemma_id,
        double(rep.lhs),
        double(rep.rhs_envelope),
        double(rep.ratio),
        rep.hypotheses_satisfied
    );
    if let Some(v) = rep.violations {
        t.push_str(&format!("violations: {v}\n"));
    }
    for e in &rep.extra {
        t.push_str(&format!("  {:<32} {}\n", e.name, e.value));
    }
    for r in &rep.rows {
        let flag = if r.in_domain { "" } else { "  (outside domain)" };
        t.push_str(&format!("  {:<40} {} / {} = {}{flag}\n", r.label, double(r.lhs), double(r.rhs), double(r.ratio)));
    }
    for n in &rep.notes {
        t.push_str(&format!("note: {n}\n"));
    }
    t
}

fn write_output(out: &Output, cfg: &RunConfig) -> Result<()> {
    let text = render(out, cfg.output_format)?;
    match &cfg.output_path {
        Some(path) => std::fs::write(path, text)?,
        None => {
            let mut stdout = std::io::stdout().lock();
            stdout.write_all(text.as_bytes())?;
            stdout.flush()?;
        }
    }
    Ok(())
}

fn root_record(r: &RootResult) -> Record {
    Record::default()
        .put("value", decimal(&r.value, r.residual.max(crate::precision::unit(r.value.prec()))))
        .put("residual", double(r.residual))
        .put("bracket", vec![double(r.bracket.0), double(r.bracket.1)])
        .put("within_stated_bound", r.within_stated_bound)
        .put("status", serde_json::to_value(r.status).unwrap_or_default())
        .put("sign_changes", r.sign_changes)
}

fn first_zero(ctx: &PrecisionContext) -> Result<f64> {
    Ok(find_zeta_zero(GAMMA1_BRACKET.0, GAMMA1_BRACKET.1, ctx)?.value.to_f64())
}

fn params_for(regime: Regime, p: &ParamArgs, cfg: &RunConfig, ctx: &PrecisionContext) -> Result<ParamSet> {
    let gamma0 = match p.gamma0 {
        Some(g) => g,
        None => first_zero(ctx)?,
    };
    let over = Overrides {
        b: p.b,
        epsilon: p.epsilon,
        r: p.r,
        a: p.a,
        z0: p.z0,
        z1: p.z1,
        scale: p.scale,
        big_j: p.big_j,
        c0: p.c0,
        strict: cfg.strict,
    };
    build_params(regime, p.length, gamma0, p.beta0, &over)
}

fn parse_center(text: &str) -> Result<Complex64> {
    let parse =
        |s: &str| s.trim().parse::<f64>().map_err(|_| Error::Domain(format!("cannot parse center component '{s}'")));
    match text.split_once(',') {
        Some((re, im)) => Ok(Complex64::new(parse(re)?, parse(im)?)),
        None => Ok(Complex64::new(parse(text)?, 0.0)),
    }
}

fn with_csv(rep: BoundReport, csv: &Option<PathBuf>) -> Result<Output> {
    if let Some(path) = csv {
        std::fs::write(path, rep.rows_csv())?;
    }
    Ok(Output::Report(Box::new(rep)))
}

fn dispatch(cmd: &Command, cfg: &RunConfig) -> Result<Output> {
    let bits = cfg.precision_bits;
    let ctx = PrecisionContext::new(bits);
    match cmd {
        Command::Sieve { limit } => {
            let table = mobius_table(*limit)?;
            let mut text = String::with_capacity(limit * 12);
            text.push_str("n,mu,d\n");
            for (n, mu, d) in table.iter() {
                text.push_str(&format!("{n},{mu},{d}\n"));
            }
            Ok(Output::Csv(text))
        }
        Command::Zeta(args) => match (&args.sub, &args.re) {
            (Some(ZetaSub::ZeroFreeBoundary { t }), _) => {
                Ok(Output::Record(Record::default().put("t", double(*t)).put("sigma", double(zero_free_boundary(*t)))))
            }
            (None, Some(re)) => {
                let s = CValue::new(parse_float(re, bits)?, parse_float(&args.im, bits)?, 0.0);
                Ok(Output::Record(Record::default().complex(&zeta_em(&s, args.order, &ctx)?)))
            }
            (None, None) => Err(Error::Domain("zeta needs --re (or the zero-free-boundary subcommand)".into())),
        },
        Command::Fv { length, sigma, t, tilde } => {
            let table = mobius_table(*length)?;
            let root = find_mollifier_root(*length, 0.5, &table, &ctx)?;
            if root.status != crate::roots::RootStatus::Found {
                return Err(Error::NoSignChange(root.bracket.0, root.bracket.1));
            }
            let variant = if *tilde { Variant::Tilde } else { Variant::Standard };
            let spec = MollifierSpec::new(*length, root.value.clone(), variant)?;
            let s = CValue::new(parse_float(sigma, bits)?, parse_float(t, bits)?, 0.0);
            let value = f_v(&s, &spec, &table, &ctx)?;
            Ok(Output::Record(
                Record::default()
                    .complex(&value)
                    .real("root", &RValue::new(root.value, root.residual.max(f64::MIN_POSITIVE))),
            ))
        }
        Command::Guv { scale, length, gamma, j, method, sigma, anchor } => {
            let table = mobius_table(*length)?;
            let root = find_mollifier_root(*length, 0.5, &table, &ctx)?;
            if root.status != crate::roots::RootStatus::Found {
                return Err(Error::NoSignChange(root.bracket.0, root.bracket.1));
            }
            let gamma = match gamma {
                Some(g) => *g,
                None => first_zero(&ctx)?,
            };
            let spec = MollifierSpec::new(*length, root.value.clone(), Variant::Standard)?;
            let g = GSpec::new(spec.clone(), *scale, float(bits, gamma), float(bits, *anchor))?;
            let s = CValue::real(float(bits, *sigma));
            let value = match (j, method) {
                (0, _) => g_uv(&s, &g, &table, &ctx)?,
                (_, DerivMethod::Cauchy) => g_deriv_cauchy(*j, &s, &g, default_cauchy_radius(&s), &table, &ctx)?,
                (_, DerivMethod::Series) => {
                    // The series returns (-z0)^j/j! D^j G; z0 = 1 leaves (-1)^j/j! D^j G.
                    let coeffs = coeff_table(*length, &spec.shift(), length * length)?;
                    let weighted = g_deriv_series(*j, &s, &g, &coeffs, 1.0, &ctx)?;
                    let mut k = Float::with_val(bits, Float::factorial(*j));
                    if j % 2 == 1 {
                        k = -k;
                    }
                    weighted.scale(&k)
                }
            };
            Ok(Output::Record(
                Record::default()
                    .put("j", *j)
                    .complex(&value)
                    .real("root", &RValue::new(root.value, root.residual.max(f64::MIN_POSITIVE))),
            ))
        }
        Command::Perron { sigma, t, length, c, half_height } => {
            let c = c.unwrap_or_else(|| default_abscissa(*sigma, *length));
            let s = CValue::from_f64(*sigma, *t, bits);
            let value = perron_mv(&s, *length, &ContourSpec::vertical(c, *half_height)?, &ctx)?;
            let table = mobius_table(*length)?;
            let direct = crate::dirichlet::m_v(&s, *length, &table, &ctx)?;
            Ok(Output::Record(
                Record::default()
                    .complex(&value)
                    .put("direct_re", decimal(&direct.re, direct.err_bound))
                    .put("direct_im", decimal(&direct.im, direct.err_bound))
                    .put("gap", double((&value - &direct).abs_f64()))
                    .put("envelope", double(perron_envelope(*sigma, *length, c, *half_height)))
                    .put("c", double(c)),
            ))
        }
        Command::Winding { target, center, radius, length } => {
            let circle = ContourSpec::circle(parse_center(center)?, *radius)?;
            let (target, table) = match target {
                WindingFn::Invzeta => (WindingTarget::InvZeta, None),
                WindingFn::Mv => (WindingTarget::Mollifier, Some(mobius_table(*length)?)),
            };
            let w = winding_number(target, &circle, *length, table.as_ref(), &ctx)?;
            Ok(Output::Record(
                Record::default()
                    .put("count", w.count)
                    .put("raw_re", double(w.raw_re))
                    .put("raw_im", double(w.raw_im))
                    .put("nodes", w.nodes),
            ))
        }
        Command::Root(RootCommand::Sv { length, radius }) => {
            let table = mobius_table(*length)?;
            Ok(Output::Record(root_record(&find_mollifier_root(*length, *radius, &table, &ctx)?)))
        }
        Command::Root(RootCommand::Zeta { lo, hi }) => {
            Ok(Output::Record(root_record(&find_zeta_zero(*lo, *hi, &ctx)?)))
        }
        Command::Check(CheckCommand::Lemma1 { big_j, step }) => {
            Ok(Output::Report(Box::new(check_lemma1(*big_j, *step)?)))
        }
        Command::Check(CheckCommand::Bound { lemma, sigma, t, omega, csv, params }) => {
            let regime = if matches!(lemma, 5 | 7) { Regime::Star } else { Regime::Doublestar };
            let p = params_for(regime, params, cfg, &ctx)?;
            let grid: Vec<Probe> = if matches!(lemma, 6 | 7) {
                omega
                    .iter()
                    .map(|&w| Probe::Shifted { omega: Complex64::new(w, 0.0), z: Complex64::new(0.0, 0.0) })
                    .collect()
            } else {
                sigma.iter().map(|&x| Probe::At(Complex64::new(x, *t))).collect()
            };
            with_csv(check_bound(*lemma, &p, &grid, &ctx)?, csv)
        }
        Command::Check(CheckCommand::Expansion { lemma, csv, params }) => {
            let regime = if *lemma == 9 { Regime::Star } else { Regime::Doublestar };
            let p = params_for(regime, params, cfg, &ctx)?;
            with_csv(check_expansion(*lemma, &p, &ctx)?, csv)
        }
        Command::Check(CheckCommand::Taylor { regime, params }) => {
            let p = params_for((*regime).into(), params, cfg, &ctx)?;
            Ok(Output::Report(Box::new(taylor_identity_check(&p, &ctx)?)))
        }
        Command::Final { regime, params } => {
            let p = params_for((*regime).into(), params, cfg, &ctx)?;
            Ok(Output::Report(Box::new(final_report(&p, &ctx)?)))
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn config_file_keys() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("run.conf");
        std::fs::write(&path, "# comment\nprecision_bits = 128\nthreads=2\noutput_format=text\nstrict=true\n").unwrap();
        let mut cfg = RunConfig::default();
        apply_config_file(&mut cfg, &path).unwrap();
        assert_eq!(cfg.precision_bits, 128);
        assert_eq!(cfg.threads, 2);
        assert_eq!(cfg.output_format, OutputFormat::Text);
        assert!(cfg.strict);
        std::fs::write(&path, "colour=blue\n").unwrap();
        assert!(apply_config_file(&mut cfg, &path).is_err());
    }
}
