//! `cutcat`: verification, LUT synthesis, Monte-Carlo sweeps and resource counts.

mod config;

use std::fmt;
use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{anyhow, Context};
use clap::{Parser, Subcommand, ValueEnum};
use serde::Serialize;

use cutcat::decoders::{build_cut_cat_lut, rule_decoder_for, CutCatLut, LutDecoder, LutError};
use cutcat::experiments::{decoder_for, sweep_block, sweep_gadget, BlockConfig, GadgetAssignment, SweepResult};
use cutcat::gadget::resource_report;
use cutcat::pauli::steane_code;
use cutcat::{eval_upper_bound, parse_css_code, verify_gadget, CatDecoder, GadgetSpec, PrepModel};

use config::{load_config, BlockArgs, GadgetArgs, Manifest, Sweep, SweepArgs};

#[derive(Parser)]
#[command(name = "cutcat", version, about = "Cut-cat syndrome extraction toolkit")]
struct Cli {
    /// Worker threads; defaults to the available parallelism.
    #[arg(long, global = true)]
    jobs: Option<usize>,
    /// JSON config or a previous run's manifest (mc-gadget, mc-block).
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Exhaustively check a gadget against every fault set of weight up to t.
    Verify(VerifyArgs),
    /// Lookup-table decoders.
    #[command(subcommand)]
    Lut(LutCommand),
    /// Monte-Carlo failure rate of a single gadget.
    McGadget(GadgetArgs),
    /// Monte-Carlo logical failure rate of a code block.
    McBlock(BlockArgs),
    /// Gate, depth and qubit counts as JSON.
    Resources(ResourceArgs),
    /// Evaluate the analytic failure bound.
    Bound(BoundArgs),
}

#[derive(Subcommand)]
enum LutCommand {
    /// Synthesize a LUT and write it as JSON.
    Build(LutBuildArgs),
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum DecoderChoice {
    Auto,
    Rules,
    Lut,
}

#[derive(clap::Args)]
struct VerifyArgs {
    #[arg(long)]
    gamma: usize,
    #[arg(long)]
    distance: usize,
    #[arg(long)]
    rounds: Option<usize>,
    #[arg(long, value_enum, default_value = "auto")]
    decoder: DecoderChoice,
    /// Use this LUT instead of synthesizing one.
    #[arg(long)]
    lut: Option<PathBuf>,
    /// Check fault sets up to this weight instead of t.
    #[arg(long)]
    max_weight: Option<usize>,
}

#[derive(clap::Args)]
struct LutBuildArgs {
    #[arg(long)]
    gamma: usize,
    #[arg(long)]
    distance: usize,
    #[arg(long)]
    rounds: Option<usize>,
    #[arg(long)]
    out: PathBuf,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum SchemeArg {
    Cutcat,
    Fullcat,
}

#[derive(clap::Args)]
struct ResourceArgs {
    #[arg(long, value_enum)]
    scheme: SchemeArg,
    #[arg(long)]
    gamma: usize,
    #[arg(long)]
    distance: usize,
    /// CNOTs charged to cat preparation; defaults to 2(m-1).
    #[arg(long)]
    prep_cnots: Option<usize>,
    /// Extra preparation ancillas; defaults to 1.
    #[arg(long)]
    prep_extra: Option<usize>,
    /// Treat cat preparation as free.
    #[arg(long, conflicts_with_all = ["prep_cnots", "prep_extra"])]
    ideal_prep: bool,
}

#[derive(clap::Args)]
struct BoundArgs {
    #[arg(long)]
    gamma: usize,
    #[arg(long)]
    t: usize,
    #[arg(long)]
    p: f64,
}

/// Bad input: exit code 2.
#[derive(Debug)]
struct Usage(String);

impl fmt::Display for Usage {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl std::error::Error for Usage {}

fn usage(e: impl fmt::Display) -> anyhow::Error {
    anyhow!(Usage(e.to_string()))
}

type Outcome = anyhow::Result<bool>;

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(if e.is::<Usage>() { 2 } else { 1 })
        }
    }
}

fn run(cli: Cli) -> Outcome {
    if let Some(jobs) = cli.jobs {
        if jobs == 0 {
            return Err(usage("--jobs must be at least 1"));
        }
        rayon::ThreadPoolBuilder::new().num_threads(jobs).build_global()?;
    }
    let config = cli.config.as_deref();
    if config.is_some() && !matches!(cli.command, Command::McGadget(_) | Command::McBlock(_)) {
        return Err(usage("--config applies to mc-gadget and mc-block only"));
    }
    match cli.command {
        Command::Verify(a) => verify(a),
        Command::Lut(LutCommand::Build(a)) => lut_build(a),
        Command::McGadget(a) => mc_gadget(a, config),
        Command::McBlock(a) => mc_block(a, config),
        Command::Resources(a) => resources(a),
        Command::Bound(a) => bound(a),
    }
}

fn gadget_spec(gamma: usize, d: usize, rounds: Option<usize>) -> anyhow::Result<GadgetSpec> {
    match rounds {
        Some(r) => GadgetSpec::with_rounds(gamma, d, r),
        None => GadgetSpec::cut_cat(gamma, d),
    }
    .map_err(usage)
}

fn read_lut(path: &Path, spec: &GadgetSpec) -> anyhow::Result<CutCatLut> {
    let text = fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    let lut = CutCatLut::from_json(&text).map_err(usage)?;
    if (lut.gamma, lut.t, lut.rounds, lut.m) != (spec.gamma, spec.t, spec.base_rounds, spec.cat_count) {
        return Err(usage(format!("{} was built for a different gadget", path.display())));
    }
    Ok(lut)
}

fn lut_or_usage(spec: &GadgetSpec) -> anyhow::Result<CutCatLut> {
    build_cut_cat_lut(spec).map_err(|e| match e {
        LutError::NoCorrection { .. } => anyhow!(e),
        other => usage(other),
    })
}

#[derive(Serialize)]
struct VerifyOutput<'a> {
    gamma: usize,
    distance: usize,
    rounds: usize,
    adaptive: bool,
    decoder: &'a str,
    max_weight: usize,
    #[serde(flatten)]
    report: cutcat::VerificationReport,
}

fn verify(a: VerifyArgs) -> Outcome {
    let mut spec = gadget_spec(a.gamma, a.distance, a.rounds)?;
    let choice = match (a.decoder, &a.lut) {
        (DecoderChoice::Rules, Some(_)) => return Err(usage("--lut conflicts with --decoder rules")),
        (DecoderChoice::Auto, Some(_)) => DecoderChoice::Lut,
        (c, _) => c,
    };
    if choice == DecoderChoice::Lut && spec.adaptive {
        spec = GadgetSpec::non_adaptive(a.gamma, a.distance).map_err(usage)?;
    }
    let decoder: Box<dyn CatDecoder> = match choice {
        DecoderChoice::Rules => rule_decoder_for(&spec)
            .ok_or_else(|| usage(format!("no rule decoder for distance {} with these rounds", a.distance)))?,
        DecoderChoice::Lut => Box::new(LutDecoder {
            lut: match &a.lut {
                Some(path) => read_lut(path, &spec)?,
                None => lut_or_usage(&spec)?,
            },
        }),
        DecoderChoice::Auto => decoder_for(&spec).map_err(usage)?,
    };
    let max_weight = a.max_weight.unwrap_or(spec.t);
    let report = verify_gadget(&spec.build(), decoder.as_ref(), max_weight);
    let pass = report.pass;
    let out = VerifyOutput {
        gamma: spec.gamma,
        distance: spec.d,
        rounds: spec.base_rounds,
        adaptive: spec.adaptive,
        decoder: decoder.name(),
        max_weight,
        report,
    };
    println!("{}", serde_json::to_string_pretty(&out)?);
    Ok(pass)
}

fn lut_build(a: LutBuildArgs) -> Outcome {
    let spec = match a.rounds {
        Some(r) => GadgetSpec::with_rounds(a.gamma, a.distance, r),
        None => GadgetSpec::non_adaptive(a.gamma, a.distance),
    }
    .map_err(usage)?;
    let lut = match build_cut_cat_lut(&spec) {
        Ok(lut) => lut,
        Err(e @ LutError::NoCorrection { .. }) => {
            eprintln!("{e}");
            return Ok(false);
        }
        Err(e) => return Err(usage(e)),
    };
    fs::write(&a.out, lut.to_json()?).with_context(|| format!("writing {}", a.out.display()))?;
    eprintln!("{} entries written to {}", lut.len(), a.out.display());
    Ok(true)
}

fn resolve_sweep(args: &SweepArgs, default_name: String) -> anyhow::Result<Sweep> {
    args.resolve(default_name).map_err(usage)
}

fn write_outputs<T: Serialize>(command: &str, dir: &Path, sweep: &Sweep, config: T, result: &SweepResult) -> Outcome {
    fs::create_dir_all(dir).with_context(|| format!("creating {}", dir.display()))?;
    let csv_name = format!("{}.csv", sweep.name);
    let mut csv = Vec::new();
    result.write_csv(&mut csv)?;
    let csv_path = dir.join(&csv_name);
    fs::write(&csv_path, csv).with_context(|| format!("writing {}", csv_path.display()))?;
    let manifest = Manifest::new(command, config, csv_name);
    let manifest_path = dir.join(format!("{}.manifest.json", sweep.name));
    fs::write(&manifest_path, serde_json::to_string_pretty(&manifest)?)
        .with_context(|| format!("writing {}", manifest_path.display()))?;
    let summary = serde_json::json!({
        "csv": csv_path,
        "manifest": manifest_path,
        "slope": result.slope.map(|(s, se)| serde_json::json!({ "slope": s, "stderr": se })),
    });
    println!("{}", serde_json::to_string_pretty(&summary)?);
    Ok(true)
}

/// Flags as a fully resolved sweep, suitable for a manifest.
fn pinned(args: SweepArgs, sweep: &Sweep) -> SweepArgs {
    SweepArgs {
        p: Some(sweep.ps.clone()),
        sweep: None,
        seed: Some(sweep.seed),
        min_failures: Some(sweep.mc.min_failures),
        max_trials: Some(sweep.mc.max_trials),
        name: Some(sweep.name.clone()),
        out_dir: args.out_dir,
    }
}

fn mc_gadget(flags: GadgetArgs, config: Option<&Path>) -> Outcome {
    let file: GadgetArgs = match config {
        Some(path) => load_config(path, "mc-gadget").map_err(usage)?,
        None => GadgetArgs::default(),
    };
    let gamma = flags.gamma.or(file.gamma).ok_or_else(|| usage("--gamma is required"))?;
    let distance = flags.distance.or(file.distance).ok_or_else(|| usage("--distance is required"))?;
    let rounds = flags.rounds.or(file.rounds);
    let args = flags.sweep.overlay(file.sweep);
    let spec = gadget_spec(gamma, distance, rounds)?;
    let sweep = resolve_sweep(&args, format!("gadget_d{distance}_g{gamma}"))?;
    let result = sweep_gadget(&spec, &sweep.ps, &sweep.mc, sweep.seed).map_err(usage)?;
    let dir = args.out_dir();
    let config = GadgetArgs { gamma: Some(gamma), distance: Some(distance), rounds, sweep: pinned(args, &sweep) };
    write_outputs("mc-gadget", &dir, &sweep, config, &result)
}

fn mc_block(flags: BlockArgs, config: Option<&Path>) -> Outcome {
    let file: BlockArgs = match config {
        Some(path) => load_config(path, "mc-block").map_err(usage)?,
        None => BlockArgs::default(),
    };
    let code_arg = flags.code.or(file.code).ok_or_else(|| usage("--code is required"))?;
    let defaults = BlockConfig::default();
    let block = BlockConfig {
        ratio: flags.ratio.or(file.ratio).unwrap_or(defaults.ratio),
        assignment: GadgetAssignment {
            cut_cat_min_weight: flags
                .cut_cat_min_weight
                .or(file.cut_cat_min_weight)
                .unwrap_or(defaults.assignment.cut_cat_min_weight),
        },
        max_rounds: flags.max_rounds.or(file.max_rounds),
    };
    if !(block.ratio > 0.0 && block.ratio.is_finite()) {
        return Err(usage("--ratio must be positive"));
    }
    let (code, code_ref, stem) = if code_arg == "steane" {
        (steane_code(), code_arg.clone(), "steane".to_string())
    } else {
        let path = fs::canonicalize(&code_arg).with_context(|| format!("reading {code_arg}"))?;
        let text = fs::read_to_string(&path).with_context(|| format!("reading {}", path.display()))?;
        let code = parse_css_code(&text).map_err(usage)?;
        let stem = path.file_stem().map_or("code".into(), |s| s.to_string_lossy().into_owned());
        (code, path.to_string_lossy().into_owned(), stem)
    };
    let args = flags.sweep.overlay(file.sweep);
    let sweep = resolve_sweep(&args, format!("block_{stem}_r{}", block.ratio))?;
    let result = sweep_block(&code, &sweep.ps, &block, &sweep.mc, sweep.seed).map_err(usage)?;
    let dir = args.out_dir();
    let config = BlockArgs {
        code: Some(code_ref),
        ratio: Some(block.ratio),
        cut_cat_min_weight: Some(block.assignment.cut_cat_min_weight),
        max_rounds: block.max_rounds,
        sweep: pinned(args, &sweep),
    };
    write_outputs("mc-block", &dir, &sweep, config, &result)
}

fn resources(a: ResourceArgs) -> Outcome {
    let spec = match a.scheme {
        SchemeArg::Cutcat => GadgetSpec::cut_cat(a.gamma, a.distance),
        SchemeArg::Fullcat => GadgetSpec::full_cat(a.gamma, a.distance),
    }
    .map_err(usage)?;
    let prep = if a.ideal_prep {
        PrepModel::Ideal
    } else {
        let default = PrepModel::default_for(spec.cat_count);
        PrepModel::Parameterized {
            prep_cnots: a.prep_cnots.unwrap_or(default.cnots()),
            prep_extra_qubits: a.prep_extra.unwrap_or(default.extra_qubits()),
        }
    };
    let report = resource_report(&spec.with_prep(prep));
    println!("{}", serde_json::to_string_pretty(&report)?);
    Ok(true)
}

fn bound(a: BoundArgs) -> Outcome {
    if !(0.0..=1.0).contains(&a.p) {
        return Err(usage("--p must lie in [0, 1]"));
    }
    if a.gamma == 0 {
        return Err(usage("--gamma must be at least 1"));
    }
    println!("{}", eval_upper_bound(a.gamma, a.t, a.p));
    Ok(true)
}
