use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::sync::Arc;

use clap::{Parser, Subcommand, ValueEnum};
use serde::Deserialize;

use confine_core::dynamics::{confinement_probe, default_epsilon, ConjugatorSequence, DecayReport};
use confine_core::expectation::{two_projection_blocks, SubalgebraDescriptor};
use confine_core::group::{GroupAutomorphism, GroupContext, GroupElement, Subgroup};
use confine_core::scenarios::{catalog, run_scenario, ScenarioParams, ScenarioReport};
use confine_core::Error;

const EXIT_FAIL: u8 = 1;
const EXIT_USAGE: u8 = 2;
const EXIT_RESOURCE: u8 = 3;

#[derive(Parser, Debug)]
#[command(name = "confine", version, about = "Exact subalgebra-state scenarios and conjugation probes")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum, Deserialize)]
#[serde(rename_all = "lowercase")]
enum Format {
    Json,
    Csv,
}

#[derive(clap::Args, Debug, Default, Clone)]
struct Common {
    /// Window radius.
    #[arg(long)]
    radius: Option<usize>,
    /// Number of sequence steps.
    #[arg(long)]
    steps: Option<usize>,
    /// Conjugator ball radius.
    #[arg(long = "conj-radius")]
    conj_radius: Option<usize>,
    /// Free rank, cycle length or factor count, depending on the scenario.
    #[arg(long)]
    rank: Option<u32>,
    #[arg(long)]
    seed: Option<u64>,
    #[arg(long, value_enum)]
    format: Option<Format>,
    /// Write the report here instead of standard output.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Flat TOML file with any of: id, radius, steps, conj_radius, rank, seed, format, out.
    #[arg(long)]
    config: Option<PathBuf>,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// List the scenario catalog.
    List,
    /// Run one scenario, or `all`.
    Run {
        id: Option<String>,
        #[command(flatten)]
        common: Common,
    },
    /// Probe a descriptor along a conjugator sequence.
    Probe {
        /// trivial | radial | subgroup:<word> | swap | shift | flip | two-projection | semidirect-radial
        #[arg(long)]
        descriptor: String,
        /// icc | generator | powers:<g> | product:<x>,<y> | list:<g>,<g>,...
        #[arg(long)]
        sequence: String,
        #[command(flatten)]
        common: Common,
    },
}

#[derive(Deserialize, Debug, Default)]
#[serde(deny_unknown_fields)]
struct FileConfig {
    id: Option<String>,
    radius: Option<usize>,
    steps: Option<usize>,
    conj_radius: Option<usize>,
    rank: Option<u32>,
    seed: Option<u64>,
    format: Option<Format>,
    out: Option<PathBuf>,
}

/// Flags after merging the config file; command-line values win.
struct RunConfig {
    id: Option<String>,
    params: ScenarioParams,
    format: Format,
    out: Option<PathBuf>,
}

enum Failure {
    Usage(String),
    Resource(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::Resource { .. } | Error::Overflow(_) => Failure::Resource(e.to_string()),
            _ => Failure::Usage(e.to_string()),
        }
    }
}

fn load_config(common: &Common, id: Option<String>) -> Result<RunConfig, Failure> {
    let file = match &common.config {
        Some(path) => {
            let text = std::fs::read_to_string(path)
                .map_err(|e| Failure::Usage(format!("cannot read {}: {e}", path.display())))?;
            toml::from_str::<FileConfig>(&text).map_err(|e| Failure::Usage(format!("bad config: {e}")))?
        }
        None => FileConfig::default(),
    };
    Ok(RunConfig {
        id: id.or(file.id),
        params: ScenarioParams {
            radius: common.radius.or(file.radius),
            steps: common.steps.or(file.steps),
            conj_radius: common.conj_radius.or(file.conj_radius),
            rank: common.rank.or(file.rank),
            seed: common.seed.or(file.seed),
        },
        format: common.format.or(file.format).unwrap_or(Format::Json),
        out: common.out.clone().or(file.out),
    })
}

fn emit(text: &str, out: Option<&Path>) -> Result<(), Failure> {
    match out {
        Some(path) => std::fs::write(path, text).map_err(|e| Failure::Usage(format!("cannot write {}: {e}", path.display()))),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn json<T: serde::Serialize>(value: &T) -> Result<String, Failure> {
    serde_json::to_string_pretty(value)
        .map(|s| s + "\n")
        .map_err(|e| Failure::Usage(e.to_string()))
}

fn reports_csv(reports: &[ScenarioReport]) -> Result<String, Failure> {
    let mut out = String::new();
    for r in reports {
        for p in &r.probes {
            if !out.is_empty() {
                out.push('\n');
            }
            out.push_str(&format!("# {} | {} | {}\n", r.id, p.descriptor, p.sequence));
            out.push_str(&p.to_csv()?);
        }
    }
    if out.is_empty() {
        out.push_str("step,conjugator,value_exact,value_decimal\n");
    }
    Ok(out)
}

fn run(common: &Common, id: Option<String>) -> Result<u8, Failure> {
    let cfg = load_config(common, id)?;
    let id = cfg.id.ok_or_else(|| Failure::Usage("missing scenario id (or `all`)".into()))?;
    let ids: Vec<String> = if id == "all" {
        catalog().into_iter().map(|(i, _)| i.to_string()).collect()
    } else {
        vec![id.clone()]
    };
    let mut reports = Vec::new();
    for i in &ids {
        let r = run_scenario(i, &cfg.params)?;
        let passed = r.assertions.iter().filter(|a| a.pass).count();
        eprintln!("{}: {} ({}/{} assertions)", r.id, if r.pass { "pass" } else { "FAIL" }, passed, r.assertions.len());
        for a in r.failures() {
            eprintln!("  failed {}: expected {}, got {}", a.name, a.expected, a.actual);
        }
        reports.push(r);
    }
    let text = match cfg.format {
        Format::Json if id == "all" => json(&reports)?,
        Format::Json => json(&reports[0])?,
        Format::Csv => reports_csv(&reports)?,
    };
    emit(&text, cfg.out.as_deref())?;
    Ok(if reports.iter().all(|r| r.pass) { 0 } else { EXIT_FAIL })
}

/// Splits at `sep` outside parentheses and brackets.
fn split_top(text: &str, sep: char) -> Vec<&str> {
    let mut parts = Vec::new();
    let mut depth = 0i32;
    let mut start = 0;
    for (i, ch) in text.char_indices() {
        match ch {
            '(' | '[' => depth += 1,
            ')' | ']' => depth -= 1,
            c if c == sep && depth == 0 => {
                parts.push(text[start..i].trim());
                start = i + ch.len_utf8();
            }
            _ => {}
        }
    }
    parts.push(text[start..].trim());
    parts
}

fn descriptor(spec: &str, rank: u32) -> Result<SubalgebraDescriptor, Failure> {
    let free = || GroupContext::free(rank);
    let (kind, arg) = spec.split_once(':').map(|(k, a)| (k, Some(a))).unwrap_or((spec, None));
    Ok(match (kind, arg) {
        ("trivial", None) => SubalgebraDescriptor::trivial(&Arc::new(free()?)),
        ("radial", None) => SubalgebraDescriptor::radial(rank)?,
        ("subgroup", Some(w)) => {
            let ctx = free()?;
            let g = ctx.parse(w)?;
            SubalgebraDescriptor::subgroup(Subgroup::cyclic(ctx, g)?)
        }
        ("swap", None) => SubalgebraDescriptor::fixed_point(GroupAutomorphism::generator_swap()),
        ("shift", None) => SubalgebraDescriptor::fixed_point(GroupAutomorphism::cyclic_shift(rank)?),
        ("flip", None) => {
            SubalgebraDescriptor::fixed_point(GroupAutomorphism::coordinate_cycle(GroupContext::power(free()?, 2)?)?)
        }
        ("two-projection", None) => {
            SubalgebraDescriptor::finite_dimensional(two_projection_blocks(&Arc::new(GroupContext::z_star_z2()))?)
        }
        ("semidirect-radial", None) => SubalgebraDescriptor::radial_tensor_finite(&Arc::new(GroupContext::semidirect(
            GroupAutomorphism::generator_swap(),
        )?))?,
        _ => return Err(Failure::Usage(format!("unknown descriptor {spec:?}"))),
    })
}

fn sequence(spec: &str, ctx: &GroupContext, radius: usize, steps: usize, conj_radius: usize) -> Result<ConjugatorSequence, Failure> {
    let parse_all = |text: &str| -> Result<Vec<GroupElement>, Failure> {
        split_top(text, ',').into_iter().map(|w| ctx.parse(w).map_err(Failure::from)).collect()
    };
    let (kind, arg) = spec.split_once(':').map(|(k, a)| (k, Some(a))).unwrap_or((spec, None));
    Ok(match (kind, arg) {
        ("icc", None) => ConjugatorSequence::IccSeparation { radius, bound: radius + steps + 4 },
        ("generator", None) => ConjugatorSequence::GeneratorSeparation {
            radius,
            outer_cap: conj_radius,
            bound: (4 * (radius + conj_radius) + 8) as u32,
        },
        ("powers", Some(w)) => ConjugatorSequence::PowersOf(ctx.parse(w)?),
        ("product", Some(ws)) => {
            let v = parse_all(ws)?;
            if v.len() != 2 {
                return Err(Failure::Usage("product:<x>,<y> takes exactly two elements".into()));
            }
            ConjugatorSequence::ProductPowers(v[0].clone(), v[1].clone())
        }
        ("list", Some(ws)) => ConjugatorSequence::Explicit(parse_all(ws)?),
        _ => return Err(Failure::Usage(format!("unknown sequence {spec:?}"))),
    })
}

fn probe(common: &Common, descriptor_spec: &str, sequence_spec: &str) -> Result<u8, Failure> {
    let cfg = load_config(common, None)?;
    let p = &cfg.params;
    let m = descriptor(descriptor_spec, p.rank.unwrap_or(2))?;
    let ctx = m.context().clone();
    let default_radius = if matches!(ctx.as_ref(), GroupContext::Free { .. }) { 3 } else { 2 };
    let radius = p.radius.unwrap_or(default_radius);
    let steps = p.steps.unwrap_or(8);
    let seq = sequence(sequence_spec, &ctx, radius, steps, p.conj_radius.unwrap_or(2))?;
    let report: DecayReport = confinement_probe(&m, &seq, radius, steps, &default_epsilon())?.with_scenario("probe");
    eprintln!("{}: {}", report.descriptor, report.verdicts.summary());
    let text = match cfg.format {
        Format::Json => json(&report)?,
        Format::Csv => report.to_csv()?,
    };
    emit(&text, cfg.out.as_deref())?;
    Ok(0)
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    let outcome = match &cli.command {
        Command::List => {
            for (id, description) in catalog() {
                println!("{id:<28} {description}");
            }
            Ok(0)
        }
        Command::Run { id, common } => run(common, id.clone()),
        Command::Probe { descriptor, sequence, common } => probe(common, descriptor, sequence),
    };
    match outcome {
        Ok(code) => ExitCode::from(code),
        Err(Failure::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(EXIT_USAGE)
        }
        Err(Failure::Resource(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(EXIT_RESOURCE)
        }
    }
}
