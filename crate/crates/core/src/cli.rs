//! The `tourney` command line: argument definitions and command bodies.
//!
//! Machine output (files, JSON, CSV) goes to stdout; human-readable notes go
//! to stderr. Exit codes: 0 success, 1 validation error, 2 I/O or parse error.

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{ArgGroup, Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use crate::analysis::{
    maximize_phi_t, parse_seed, phi_t_argmax_closed_form, phi_t_grid, quasi_carousel_report,
    quasi_random_report, simulate_layered_w4, Profile, ReportConfig,
};
use crate::counting::{
    arc_flag_distribution, ks_distance, quad_counts, sampled_quad_densities, triple_counts,
    FlagSelector, ReferenceDistribution,
};
use crate::error::Error;
use crate::generators::{carousel, digraphon_sample, layered, random_uniform, transitive, LayeredSpec};
use crate::loctrans::{brouwer_order, carousel_isomorphism, find_obstruction};
use crate::tournament::{SmallClass4, Tournament};

#[derive(Debug)]
pub enum CliError {
    Validation(String),
    Io(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            Self::Validation(_) => 1,
            Self::Io(_) => 2,
        }
    }

    pub fn message(&self) -> &str {
        match self {
            Self::Validation(m) | Self::Io(m) => m,
        }
    }
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        match e {
            Error::Parse { .. } => Self::Io(e.to_string()),
            other => Self::Validation(other.to_string()),
        }
    }
}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        Self::Io(e.to_string())
    }
}

type CliResult<T = ()> = std::result::Result<T, CliError>;

fn seed_arg(s: &str) -> Result<u64, String> {
    parse_seed(s).map_err(|e| format!("invalid seed {s:?}: {e}"))
}

#[derive(Debug, Parser)]
#[command(name = "tourney", version, about = "Tournament density counting and quasi-carousel diagnostics")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Generate a tournament and write it as .trn
    Gen(GenArgs),
    /// Order-3 and order-4 subtournament counts as JSON
    Stats(StatsArgs),
    /// Per-arc flag distribution as CSV, moments as JSON
    Arcflags(ArcflagsArgs),
    /// Quasi-carousel or quasi-random diagnostic report
    Check(CheckArgs),
    /// Local transitivity, cyclic order and carousel labelling
    Loctrans(LoctransArgs),
    /// The W4 density curve of the layered construction
    #[command(name = "sweep-w4")]
    SweepW4(SweepArgs),
    /// Convert between .trn and arc-list formats
    Convert(ConvertArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum GenKind {
    Carousel,
    Transitive,
    Random,
    Layered,
    Digraphon,
}

#[derive(Debug, Args)]
pub struct GenArgs {
    #[arg(long, value_enum)]
    pub kind: GenKind,
    #[arg(long)]
    pub n: usize,
    /// Shrink ratio for the layered construction
    #[arg(long)]
    pub t: Option<f64>,
    #[arg(long, value_parser = seed_arg, default_value = "0")]
    pub seed: u64,
    /// Output path; the .trn text goes to stdout when omitted
    #[arg(short, long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct StatsArgs {
    pub input: PathBuf,
    /// Subtournament orders to count (3, 4)
    #[arg(long = "order", value_delimiter = ',', default_values_t = vec![3, 4])]
    pub orders: Vec<u8>,
    /// Estimate order-4 densities from this many sampled 4-sets
    #[arg(long)]
    pub sample: Option<u64>,
    #[arg(long, value_parser = seed_arg, default_value = "0")]
    pub seed: u64,
    #[arg(long, default_value_t = 4000)]
    pub exact_limit: usize,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum FlagArg {
    O,
    I,
    Tr,
    C,
    Oi,
    Ctr,
}

impl From<FlagArg> for FlagSelector {
    fn from(f: FlagArg) -> Self {
        match f {
            FlagArg::O => FlagSelector::O,
            FlagArg::I => FlagSelector::I,
            FlagArg::Tr => FlagSelector::Tr,
            FlagArg::C => FlagSelector::C,
            FlagArg::Oi => FlagSelector::OI,
            FlagArg::Ctr => FlagSelector::CTr,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum ProfileArg {
    Carousel,
    Random,
}

impl From<ProfileArg> for Profile {
    fn from(p: ProfileArg) -> Self {
        match p {
            ProfileArg::Carousel => Profile::Carousel,
            ProfileArg::Random => Profile::Random,
        }
    }
}

#[derive(Debug, Args)]
pub struct ArcflagsArgs {
    pub input: PathBuf,
    #[arg(long, value_enum)]
    pub flag: FlagArg,
    /// Write a binned histogram instead of one row per distinct value
    #[arg(long)]
    pub bins: Option<usize>,
    /// Limit profile supplying the KS reference
    #[arg(long, value_enum, default_value = "carousel")]
    pub reference: ProfileArg,
    /// CSV output path
    #[arg(short, long)]
    pub out: PathBuf,
}

#[derive(Debug, Args)]
pub struct CheckArgs {
    pub input: PathBuf,
    #[arg(long, value_enum)]
    pub profile: ProfileArg,
    /// key=value file with eps, delta, samples, seed, bins
    #[arg(long)]
    pub config: Option<PathBuf>,
    #[arg(long)]
    pub eps: Option<f64>,
    #[arg(long)]
    pub delta: Option<f64>,
    #[arg(long)]
    pub samples: Option<u64>,
    #[arg(long, value_parser = seed_arg)]
    pub seed: Option<u64>,
    #[arg(long)]
    pub bins: Option<usize>,
    #[arg(long)]
    pub exact_limit: Option<usize>,
    #[arg(long)]
    pub threshold: Option<f64>,
}

#[derive(Debug, Args)]
pub struct LoctransArgs {
    pub input: PathBuf,
}

#[derive(Debug, Args)]
#[command(group(ArgGroup::new("mode").required(true).args(["grid", "optimize", "simulate"])))]
pub struct SweepArgs {
    /// Evaluate the curve at this many evenly spaced points
    #[arg(long)]
    pub grid: Option<usize>,
    /// Maximize the curve to this bracket tolerance
    #[arg(long)]
    pub optimize: Option<f64>,
    /// Build a layered tournament of this order and sample its W4 density
    #[arg(long)]
    pub simulate: Option<usize>,
    /// Shrink ratio for --simulate (defaults to the maximizer)
    #[arg(long)]
    pub t: Option<f64>,
    #[arg(long, value_parser = seed_arg, default_value = "0")]
    pub seed: u64,
    #[arg(long, default_value_t = 1_000_000)]
    pub samples: u64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Trn,
    Arcs,
}

impl Format {
    fn infer(path: &Path) -> Self {
        match path.extension().and_then(|e| e.to_str()) {
            Some("trn") => Self::Trn,
            _ => Self::Arcs,
        }
    }
}

#[derive(Debug, Args)]
pub struct ConvertArgs {
    pub input: PathBuf,
    #[arg(short, long)]
    pub out: PathBuf,
    /// Input format, inferred from the extension when omitted
    #[arg(long, value_enum)]
    pub from: Option<Format>,
    /// Output format, inferred from the extension when omitted
    #[arg(long, value_enum)]
    pub to: Option<Format>,
    /// Vertex count for arc-list input
    #[arg(long)]
    pub n: Option<usize>,
}

fn read_text(path: &Path) -> CliResult<String> {
    fs::read_to_string(path).map_err(|e| CliError::Io(format!("{}: {e}", path.display())))
}

fn write_text(path: &Path, text: &str) -> CliResult {
    fs::write(path, text).map_err(|e| CliError::Io(format!("{}: {e}", path.display())))
}

fn parse_error(path: &Path, e: Error) -> CliError {
    CliError::Io(format!("{}: {e}", path.display()))
}

/// Reads a tournament; any defect in the file is an I/O-class error.
pub fn read_tournament(path: &Path, format: Option<Format>, n: Option<usize>) -> CliResult<Tournament> {
    let text = read_text(path)?;
    let parsed = match format.unwrap_or_else(|| Format::infer(path)) {
        Format::Trn => Tournament::parse_trn(&text),
        Format::Arcs => Tournament::parse_arc_list(&text, n),
    };
    parsed.map_err(|e| parse_error(path, e))
}

fn emit_json(out: &mut dyn Write, value: &Value) -> CliResult {
    writeln!(out, "{}", serde_json::to_string(value).expect("json serializes"))?;
    Ok(())
}

/// Runs one parsed command.
pub fn run(cli: Cli, out: &mut dyn Write, err: &mut dyn Write) -> CliResult {
    match cli.command {
        Command::Gen(a) => gen(a, out, err),
        Command::Stats(a) => stats(a, out),
        Command::Arcflags(a) => arcflags(a, out),
        Command::Check(a) => check(a, out, err),
        Command::Loctrans(a) => loctrans(a, out),
        Command::SweepW4(a) => sweep_w4(a, out),
        Command::Convert(a) => convert(a, out),
    }
}

/// Parses `args` (including the program name), runs the command and returns
/// the process exit code.
pub fn main_with_args<I, S>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = S>,
    S: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = write!(err, "{e}");
            return if e.use_stderr() { 1 } else { 0 };
        }
    };
    match run(cli, out, err) {
        Ok(()) => 0,
        Err(e) => {
            let _ = writeln!(err, "error: {}", e.message());
            e.exit_code()
        }
    }
}

fn gen(a: GenArgs, out: &mut dyn Write, err: &mut dyn Write) -> CliResult {
    let mut provenance = json!({
        "schema": 1,
        "kind": format!("{:?}", a.kind).to_lowercase(),
        "n": a.n,
    });
    let seeded = |prov: &mut Value| prov["seed"] = a.seed.into();
    let t = match a.kind {
        GenKind::Carousel => carousel(a.n)?,
        GenKind::Transitive => transitive(a.n)?,
        GenKind::Random => {
            seeded(&mut provenance);
            random_uniform(a.n, a.seed)?
        }
        GenKind::Digraphon => {
            seeded(&mut provenance);
            digraphon_sample(a.n, a.seed)?
        }
        GenKind::Layered => {
            let ratio = a
                .t
                .ok_or_else(|| CliError::Validation("layered generation needs --t".into()))?;
            let spec = LayeredSpec::new(a.n, ratio, a.seed)?;
            seeded(&mut provenance);
            provenance["t"] = ratio.into();
            provenance["layer_sizes"] = json!(spec.layer_sizes()?);
            layered(&spec)?
        }
    };
    let text = t.to_trn();
    match &a.out {
        Some(path) => {
            write_text(path, &text)?;
            provenance["out"] = path.display().to_string().into();
            emit_json(out, &provenance)
        }
        None => {
            out.write_all(text.as_bytes())?;
            emit_json(err, &provenance)
        }
    }
}

fn stats(a: StatsArgs, out: &mut dyn Write) -> CliResult {
    let t = read_tournament(&a.input, Some(Format::Trn), None)?;
    if let Some(bad) = a.orders.iter().find(|&&o| o != 3 && o != 4) {
        return Err(CliError::Validation(format!("unsupported order {bad}, use 3 or 4")));
    }
    let mut doc = json!({ "schema": 1, "n": t.order() });
    if a.orders.contains(&3) {
        let tri = triple_counts(&t)?;
        doc["tr3"] = tri.tr3.into();
        doc["c3"] = tri.c3.into();
        doc["binom3"] = tri.triples.into();
        doc["p_tr3"] = tri.p_tr3().value().into();
        doc["p_c3"] = tri.p_c3().value().into();
    }
    if a.orders.contains(&4) {
        if a.sample.is_none() && t.order() <= a.exact_limit {
            let q = quad_counts(&t)?;
            doc["mode"] = "exact".into();
            for c in SmallClass4::ALL {
                let key = c.to_string().to_lowercase();
                doc[key.as_str()] = q.count(c).into();
                doc[format!("p_{key}").as_str()] = q.density(c).value().into();
            }
            doc["binom4"] = q.quads.into();
        } else {
            let samples = a.sample.unwrap_or(ReportConfig::DEFAULT_SAMPLES);
            let s = sampled_quad_densities(&t, samples, a.seed)?;
            if let (Value::Object(dst), Value::Object(src)) = (&mut doc, s.to_json(t.order())) {
                dst.extend(src);
            }
        }
    }
    emit_json(out, &doc)
}

fn reference_for(profile: ProfileArg, sel: FlagSelector) -> ReferenceDistribution {
    match (profile, sel.is_combined()) {
        (ProfileArg::Carousel, false) => ReferenceDistribution::UniformOnInterval { q: 0.5 },
        (ProfileArg::Carousel, true) => ReferenceDistribution::UniformOnInterval { q: 1.0 },
        (ProfileArg::Random, false) => ReferenceDistribution::PointMass { p: 0.25 },
        (ProfileArg::Random, true) => ReferenceDistribution::PointMass { p: 0.5 },
    }
}

fn arcflags(a: ArcflagsArgs, out: &mut dyn Write) -> CliResult {
    let t = read_tournament(&a.input, Some(Format::Trn), None)?;
    let sel = FlagSelector::from(a.flag);
    let d = arc_flag_distribution(&t, sel)?;
    let csv = match a.bins {
        Some(bins) => d.to_histogram_csv(bins)?,
        None => d.to_value_csv(),
    };
    write_text(&a.out, &csv)?;
    let reference = reference_for(a.reference, sel);
    let doc = json!({
        "schema": 1,
        "n": t.order(),
        "flag": sel.name(),
        "arcs": d.len(),
        "mean": d.mean(),
        "m2": d.second_moment(),
        "factorial_m2": d.factorial_second_moment(),
        "ks": ks_distance(&d, &reference)?,
        "reference": reference,
        "out": a.out.display().to_string(),
    });
    emit_json(out, &doc)
}

fn check(a: CheckArgs, out: &mut dyn Write, err: &mut dyn Write) -> CliResult {
    let mut config = ReportConfig::default();
    if let Some(path) = &a.config {
        config.apply_kv(&read_text(path)?).map_err(|e| parse_error(path, e))?;
    }
    if let Some(v) = a.eps {
        config.eps = v;
    }
    if let Some(v) = a.delta {
        config.delta = v;
    }
    if let Some(v) = a.samples {
        config.samples = Some(v);
    }
    if let Some(v) = a.seed {
        config.seed = v;
    }
    if let Some(v) = a.bins {
        config.bins = v;
    }
    if let Some(v) = a.exact_limit {
        config.exact_limit = v;
    }
    if a.threshold.is_some() {
        config.threshold = a.threshold;
    }
    let t = read_tournament(&a.input, Some(Format::Trn), None)?;
    let mut report = match Profile::from(a.profile) {
        Profile::Carousel => quasi_carousel_report(&t, &config)?,
        Profile::Random => quasi_random_report(&t, &config)?,
    };
    report
        .provenance
        .insert("input".into(), a.input.display().to_string().into());
    writeln!(out, "{}", report.to_json())?;
    if report.pass {
        writeln!(err, "{} profile: PASS (threshold {:.4})", report.profile, report.threshold)?;
    } else {
        writeln!(
            err,
            "{} profile: FAIL (threshold {:.4}): {}",
            report.profile,
            report.threshold,
            report.failures().join(", ")
        )?;
    }
    Ok(())
}

fn loctrans(a: LoctransArgs, out: &mut dyn Write) -> CliResult {
    let t = read_tournament(&a.input, Some(Format::Trn), None)?;
    let mut doc = json!({ "schema": 1, "n": t.order() });
    match find_obstruction(&t) {
        Some(ob) => {
            doc["locally_transitive"] = false.into();
            doc["obstruction"] = serde_json::to_value(ob).expect("json serializes");
        }
        None => {
            doc["locally_transitive"] = true.into();
            doc["cyclic_order"] = json!(brouwer_order(&t)?.as_slice());
            match carousel_isomorphism(&t) {
                Ok(map) => doc["carousel_isomorphism"] = json!(map),
                Err(e) => doc["carousel_isomorphism_error"] = e.to_string().into(),
            }
        }
    }
    emit_json(out, &doc)
}

fn sweep_w4(a: SweepArgs, out: &mut dyn Write) -> CliResult {
    if let Some(k) = a.grid {
        if k == 0 {
            return Err(CliError::Validation("--grid needs at least one point".into()));
        }
        writeln!(out, "t,phi_t")?;
        for p in phi_t_grid(k) {
            writeln!(out, "{},{}", p.t, p.value)?;
        }
        return Ok(());
    }
    if let Some(tol) = a.optimize {
        let best = maximize_phi_t(tol)?;
        return emit_json(
            out,
            &json!({ "schema": 1, "tolerance": tol, "t_star": best.t, "value": best.value }),
        );
    }
    if let Some(n) = a.simulate {
        let t = a.t.unwrap_or_else(phi_t_argmax_closed_form);
        let sim = simulate_layered_w4(n, t, a.seed, a.samples)?;
        let mut doc = serde_json::to_value(sim).expect("json serializes");
        doc["schema"] = 1.into();
        return emit_json(out, &doc);
    }
    Err(CliError::Validation("one of --grid, --optimize, --simulate is required".into()))
}

fn convert(a: ConvertArgs, out: &mut dyn Write) -> CliResult {
    let t = read_tournament(&a.input, a.from, a.n)?;
    let to = a.to.unwrap_or_else(|| Format::infer(&a.out));
    let text = match to {
        Format::Trn => t.to_trn(),
        Format::Arcs => t.to_arc_list(),
    };
    write_text(&a.out, &text)?;
    emit_json(
        out,
        &json!({
            "schema": 1,
            "n": t.order(),
            "format": format!("{to:?}").to_lowercase(),
            "out": a.out.display().to_string(),
        }),
    )
}
