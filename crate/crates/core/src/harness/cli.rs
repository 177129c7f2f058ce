//! The `binpack` command line.

use std::ffi::OsString;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};

use super::{
    exit, generate_family, oracle_limit, sweep, verify_random, FamilyParams, HarnessError,
    RandomInstanceSpec, SizeModel, SweepConfig, VerifyConfig, DEFAULT_DENOMINATOR,
};
use crate::adversary::{adversary_unbounded, AdversaryOptions, AdversaryOutcome, Family};
use crate::algorithms::{
    run_mm, AlgorithmId, AlgorithmKind, CardinalityCap, HeadPolicy, MmPolicy, RandomPolicy,
    SpaceBound, TailPolicy,
};
use crate::analysis::{rows_to_csv, rows_to_json, BoundContext, BoundId, ReportRow};
use crate::model::{parse_rational, Instance};
use crate::oracle::opt_exact_with_limit;

#[derive(Parser, Debug)]
#[command(name = "binpack", version, about = "Exact-arithmetic bin packing toolkit")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Pack an instance file with one algorithm.
    Pack(PackArgs),
    /// Exact optimum of a small instance.
    Opt(OptArgs),
    /// Write a lower-bound instance and its certificate.
    Generate(GenerateArgs),
    /// Check a bound on random instances or a generated family.
    Verify(VerifyArgs),
    /// Ratio table for a family over a range of m.
    Sweep(SweepArgs),
    /// Play the adaptive adversary against a max-min procedure.
    Adversary(AdversaryArgs),
}

#[derive(Args, Debug)]
struct PackArgs {
    /// nf, nfd, ff, ffd or mm; `mm_3` is shorthand for `--alg mm --k 3`.
    #[arg(long)]
    alg: String,
    #[arg(long)]
    k: Option<usize>,
    #[arg(long)]
    input: PathBuf,
    /// Print the packing as JSON.
    #[arg(long)]
    packing: bool,
    /// Print head/tail events (mm only).
    #[arg(long)]
    trace: bool,
}

#[derive(Args, Debug)]
struct OptArgs {
    #[arg(long)]
    input: PathBuf,
    #[arg(long)]
    k: Option<usize>,
    #[arg(long)]
    oracle_limit: Option<usize>,
    #[arg(long)]
    packing: bool,
}

#[derive(Args, Debug, Clone)]
struct FamilyArgs {
    #[arg(long)]
    family: String,
    #[arg(long)]
    k: Option<usize>,
    #[arg(long = "B")]
    space: Option<usize>,
    #[arg(long = "K")]
    classes: Option<usize>,
    /// The k = 3 reading of the max-min unit family.
    #[arg(long)]
    cap3: bool,
    /// Override the family's ε, as `p/q` or a decimal.
    #[arg(long)]
    eps: Option<String>,
}

impl FamilyArgs {
    fn resolve(&self, m: usize) -> Result<(Family, FamilyParams), HarnessError> {
        let family: Family = self
            .family
            .parse()
            .map_err(|e: crate::adversary::AdversaryError| HarnessError::Usage(e.to_string()))?;
        let eps = self.eps.as_deref().map(parse_rational).transpose()?;
        Ok((
            family,
            FamilyParams {
                m,
                k: self.k,
                space: self.space,
                classes: self.classes,
                cap3: self.cap3,
                eps,
            },
        ))
    }
}

#[derive(Args, Debug)]
struct GenerateArgs {
    #[command(flatten)]
    family: FamilyArgs,
    #[arg(long)]
    m: usize,
    /// Instance file; the certificate goes next to it as `<stem>.cert.json`.
    /// Without it the instance is written to standard output.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum Format {
    Csv,
    Json,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum ModelArg {
    Grid,
    Anchored,
}

#[derive(Args, Debug)]
struct OutputArgs {
    #[arg(long, value_enum, default_value = "csv")]
    format: Format,
    /// Write rows here instead of standard output.
    #[arg(long)]
    output: Option<PathBuf>,
}

#[derive(Args, Debug)]
struct VerifyArgs {
    #[arg(long)]
    bound: String,
    /// Algorithm to check; defaults to the bound's own subject.
    #[arg(long)]
    alg: Option<String>,
    #[arg(long)]
    k: Option<usize>,
    #[arg(long = "B")]
    space: Option<usize>,
    #[arg(long = "K")]
    classes: Option<usize>,
    #[arg(long, default_value_t = 100)]
    trials: usize,
    #[arg(long, default_value_t = 1)]
    min_n: usize,
    #[arg(long, default_value_t = 12)]
    max_n: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, value_enum, default_value = "grid")]
    model: ModelArg,
    #[arg(long, default_value_t = DEFAULT_DENOMINATOR)]
    denominator: u64,
    #[arg(long, default_value_t = 9)]
    max_class: u64,
    #[arg(long)]
    oracle_limit: Option<usize>,
    /// Use a generated family instead of random instances.
    #[arg(long)]
    family: Option<String>,
    #[arg(long, value_delimiter = ',')]
    m: Vec<usize>,
    #[arg(long)]
    cap3: bool,
    #[command(flatten)]
    output: OutputArgs,
}

#[derive(Args, Debug)]
struct SweepArgs {
    #[command(flatten)]
    family: FamilyArgs,
    #[arg(long, value_delimiter = ',', required = true)]
    m: Vec<usize>,
    /// Comma-separated algorithm ids such as `mm,nfd,nf_2`.
    #[arg(long, value_delimiter = ',', required = true)]
    alg: Vec<String>,
    /// Bound to check; defaults to the family's lower bound.
    #[arg(long)]
    bound: Option<String>,
    #[command(flatten)]
    output: OutputArgs,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum ProcArg {
    Mm,
    AlwaysHead,
    AlwaysTail,
    Random,
}

#[derive(Args, Debug)]
struct AdversaryArgs {
    #[arg(long = "proc", value_enum)]
    procedure: ProcArg,
    #[arg(long)]
    m: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long)]
    eps: Option<String>,
    /// Open-bin limit; unbounded when absent.
    #[arg(long)]
    space: Option<usize>,
    #[arg(long)]
    oracle_limit: Option<usize>,
    #[arg(long)]
    json: bool,
    /// Write the chosen instance here.
    #[arg(long)]
    out: Option<PathBuf>,
}

/// Parses `args` (program name first) and runs one subcommand. Returns the
/// process exit code.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { exit::USAGE } else { exit::OK };
            let target: &mut dyn Write = if e.use_stderr() { err } else { out };
            let _ = write!(target, "{}", e.render());
            return code;
        }
    };
    let result = match cli.command {
        Command::Pack(a) => pack(a, out),
        Command::Opt(a) => opt(a, out),
        Command::Generate(a) => generate(a, out),
        Command::Verify(a) => verify(a, out, err),
        Command::Sweep(a) => run_sweep(a, out),
        Command::Adversary(a) => adversary(a, out),
    };
    match result {
        Ok(code) => code,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            e.exit_code()
        }
    }
}

fn io_err(path: &Path, e: std::io::Error) -> HarnessError {
    HarnessError::Io {
        path: path.display().to_string(),
        message: e.to_string(),
    }
}

fn emit(out: &mut dyn Write, text: &str) -> Result<(), HarnessError> {
    out.write_all(text.as_bytes())
        .map_err(|e| io_err(Path::new("<stdout>"), e))
}

fn read_instance(path: &Path) -> Result<Instance, HarnessError> {
    let text = std::fs::read_to_string(path).map_err(|e| io_err(path, e))?;
    Instance::parse_text(&text).map_err(|e| HarnessError::Usage(format!("{}: {e}", path.display())))
}

fn write_file(path: &Path, text: &str) -> Result<(), HarnessError> {
    std::fs::write(path, text).map_err(|e| io_err(path, e))
}

fn cap_from(k: Option<usize>) -> Result<CardinalityCap, HarnessError> {
    Ok(CardinalityCap::from_option(k)?)
}

/// `--alg mm --k 3` and `--alg mm_3` name the same algorithm.
fn algorithm(name: &str, k: Option<usize>) -> Result<AlgorithmId, HarnessError> {
    let id: AlgorithmId = name.parse()?;
    match (id.cap.limit(), k) {
        (_, None) => Ok(id),
        (None, Some(k)) => Ok(AlgorithmId::new(id.kind, CardinalityCap::at_most(k)?)),
        (Some(a), Some(b)) if a == b => Ok(id),
        (Some(a), Some(b)) => Err(HarnessError::Usage(format!(
            "--alg {name} has k = {a} but --k {b} was given"
        ))),
    }
}

fn bound(name: &str) -> Result<BoundId, HarnessError> {
    Ok(name.parse()?)
}

fn pack(a: PackArgs, out: &mut dyn Write) -> Result<i32, HarnessError> {
    let alg = algorithm(&a.alg, a.k)?;
    if a.trace && alg.kind != AlgorithmKind::Mm {
        return Err(HarnessError::Usage("--trace is only available for mm".into()));
    }
    let inst = read_instance(&a.input)?;
    let mut text = String::new();
    let packing = if alg.kind == AlgorithmKind::Mm {
        let (packing, trace) = run_mm(&inst, alg.cap);
        if a.trace {
            for e in &trace.events {
                text.push_str(&format!("{} item {} -> bin {}\n", e.end, e.item, e.bin));
            }
        }
        packing
    } else {
        alg.run(&inst)
    };
    text.insert_str(0, &format!("bins: {}\n", packing.num_bins()));
    if a.packing {
        text.push_str(&format!("packing: {}\n", packing.to_json()));
    }
    emit(out, &text)?;
    Ok(exit::OK)
}

fn opt(a: OptArgs, out: &mut dyn Write) -> Result<i32, HarnessError> {
    let cap = cap_from(a.k)?;
    let inst = read_instance(&a.input)?;
    let limit = a.oracle_limit.unwrap_or_else(|| oracle_limit(cap));
    let result = opt_exact_with_limit(&inst, cap, limit)?;
    let mut text = format!("opt: {}\nnodes: {}\n", result.opt, result.nodes_explored);
    if a.packing {
        text.push_str(&format!("packing: {}\n", result.witness.to_json()));
    }
    emit(out, &text)?;
    Ok(exit::OK)
}

fn generate(a: GenerateArgs, out: &mut dyn Write) -> Result<i32, HarnessError> {
    let (family, params) = a.family.resolve(a.m)?;
    let cert = generate_family(family, &params)?;
    let sidecar = serde_json::to_string_pretty(&cert.sidecar_json()).expect("json value");
    match &a.out {
        Some(path) => {
            write_file(path, &cert.instance.to_text())?;
            let side = path.with_extension("cert.json");
            write_file(&side, &format!("{sidecar}\n"))?;
            emit(
                out,
                &format!(
                    "items: {}\nclaimed_opt: {}\ninstance: {}\ncertificate: {}\n",
                    cert.instance.len(),
                    cert.claimed_opt,
                    path.display(),
                    side.display()
                ),
            )?;
        }
        None => emit(out, &cert.instance.to_text())?,
    }
    Ok(exit::OK)
}

fn write_rows(rows: &[ReportRow], o: &OutputArgs, out: &mut dyn Write) -> Result<(), HarnessError> {
    let text = match o.format {
        Format::Csv => rows_to_csv(rows),
        Format::Json => format!("{}\n", rows_to_json(rows)),
    };
    match &o.output {
        Some(path) => write_file(path, &text),
        None => emit(out, &text),
    }
}

fn violation_code(rows: &[ReportRow]) -> i32 {
    if rows.iter().any(ReportRow::is_violation) {
        exit::VIOLATION
    } else {
        exit::OK
    }
}

fn verify(a: VerifyArgs, out: &mut dyn Write, err: &mut dyn Write) -> Result<i32, HarnessError> {
    let bound = bound(&a.bound)?;
    let alg = match &a.alg {
        Some(name) => algorithm(name, a.k)?,
        None => bound.subject(a.k)?,
    };
    if !bound.applies_to(&alg) {
        return Err(HarnessError::Usage(format!("bound {bound} does not apply to {alg}")));
    }

    if let Some(family) = &a.family {
        if a.m.is_empty() {
            return Err(HarnessError::Usage("--family needs --m".into()));
        }
        let family_args = FamilyArgs {
            family: family.clone(),
            k: a.k,
            space: a.space,
            classes: a.classes,
            cap3: a.cap3,
            eps: None,
        };
        let (family, params) = family_args.resolve(0)?;
        let rows = sweep(&SweepConfig {
            family,
            ms: a.m.clone(),
            algorithms: vec![alg],
            params,
            bound: Some(bound),
        })?;
        write_rows(&rows, &a.output, out)?;
        let bad = rows.iter().filter(|r| r.is_violation()).count();
        let _ = writeln!(err, "{bound} on {alg}: {} checked, {bad} violations", rows.len());
        return Ok(violation_code(&rows));
    }

    let model = match a.model {
        ModelArg::Grid => SizeModel::Grid {
            denominator: a.denominator,
        },
        ModelArg::Anchored => SizeModel::Anchored {
            denominator: a.denominator,
            max_class: a.max_class,
        },
    };
    if a.denominator == 0 || a.max_n == 0 {
        return Err(HarnessError::Usage("--denominator and --max-n must be positive".into()));
    }
    let cfg = VerifyConfig {
        bound,
        algorithm: alg,
        spec: RandomInstanceSpec {
            min_items: a.min_n,
            max_items: a.max_n,
            model,
        },
        trials: a.trials,
        seed: a.seed,
        oracle_limit: a.oracle_limit.unwrap_or_else(|| oracle_limit(alg.cap)),
        ctx: BoundContext {
            k: a.k.or(alg.cap.limit()),
            space: a.space,
            classes: a.classes,
        },
    };
    let summary = verify_random(&cfg)?;
    write_rows(&summary.rows, &a.output, out)?;
    let _ = writeln!(
        err,
        "{bound} on {alg}: {} checked, {} skipped, {} violations",
        summary.rows.len(),
        summary.skipped.len(),
        summary.violations()
    );
    for s in &summary.skipped {
        let _ = writeln!(err, "skipped trial {}: {}", s.trial, s.reason);
    }
    Ok(violation_code(&summary.rows))
}

fn run_sweep(a: SweepArgs, out: &mut dyn Write) -> Result<i32, HarnessError> {
    let (family, params) = a.family.resolve(0)?;
    let algorithms = a
        .alg
        .iter()
        .map(|s| algorithm(s, None))
        .collect::<Result<Vec<_>, _>>()?;
    let rows = sweep(&SweepConfig {
        family,
        ms: a.m,
        algorithms,
        params,
        bound: a.bound.as_deref().map(bound).transpose()?,
    })?;
    write_rows(&rows, &a.output, out)?;
    Ok(violation_code(&rows))
}

fn adversary(a: AdversaryArgs, out: &mut dyn Write) -> Result<i32, HarnessError> {
    let mut options = AdversaryOptions::default();
    if let Some(eps) = &a.eps {
        options.eps = parse_rational(eps)?;
    }
    if let Some(b) = a.space {
        options.space = SpaceBound::bins(b)?;
    }
    if let Some(limit) = a.oracle_limit {
        options.oracle_limit = limit;
    }
    let cap = CardinalityCap::UNBOUNDED;
    let outcome = match a.procedure {
        ProcArg::Mm => adversary_unbounded(MmPolicy::new(cap), a.m, &options),
        ProcArg::AlwaysHead => adversary_unbounded(HeadPolicy::new(cap), a.m, &options),
        ProcArg::AlwaysTail => adversary_unbounded(TailPolicy::new(cap), a.m, &options),
        ProcArg::Random => {
            adversary_unbounded(RandomPolicy::new(a.seed, options.space, cap), a.m, &options)
        }
    }?;
    if let Some(path) = &a.out {
        write_file(path, &outcome.instance.to_text())?;
    }
    emit(out, &render_outcome(&outcome, a.json))?;
    Ok(if outcome.inequality_ok {
        exit::OK
    } else {
        exit::VIOLATION
    })
}

fn render_outcome(o: &AdversaryOutcome, json: bool) -> String {
    if json {
        let v = serde_json::json!({
            "chosen": o.chosen.to_string(),
            "items": o.instance.len(),
            "n1": o.n1,
            "n2": o.n2,
            "alg_bins": o.alg_bins,
            "opt_bins": o.opt_bins,
            "inequality_ok": o.inequality_ok,
            "opt_confirmed": o.opt_confirmed,
        });
        return format!("{}\n", serde_json::to_string_pretty(&v).expect("json value"));
    }
    format!(
        "chosen: {}\nitems: {}\nn1: {}\nn2: {}\nalg_bins: {}\nopt_bins: {}\ninequality_ok: {}\nopt_confirmed: {}\n",
        o.chosen,
        o.instance.len(),
        o.n1,
        o.n2,
        o.alg_bins,
        o.opt_bins,
        o.inequality_ok,
        o.opt_confirmed
    )
}
