use std::io::Read;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use coxdiag::{with_jobs, AgreementScope, CoxeterSystem, LabelSet, LemmaMode};
use coxdiag_cli::commands::{
    classify_command, enumerate_command, hyperbolic_command, parabolics_command, threshold_command,
    threshold_for_rank_command, verify_command, Campaign, EnumerateArgs, EnumerateMode, Output,
};
use coxdiag_cli::parse_diagram;

/// Coxeter diagram classification, hyperbolicity and verification campaigns.
#[derive(Parser)]
#[command(name = "coxdiag", version)]
struct Cli {
    /// Output format.
    #[arg(long, value_enum, default_value_t = Format::Text, global = true)]
    format: Format,

    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Text,
    Json,
}

#[derive(Args)]
#[group(required = true, multiple = false)]
struct Input {
    /// Read the diagram from a file.
    #[arg(long)]
    input: Option<PathBuf>,
    /// Read the diagram from standard input.
    #[arg(long)]
    stdin: bool,
}

#[derive(Args)]
#[group(required = false, multiple = false)]
struct OptionalInput {
    /// Read the diagram from a file.
    #[arg(long)]
    input: Option<PathBuf>,
    /// Read the diagram from standard input.
    #[arg(long)]
    stdin: bool,
}

#[derive(Subcommand)]
enum Command {
    /// Irreducible components and their types.
    Classify(#[command(flatten)] Input),
    /// Gromov hyperbolicity with a witness for Z x Z.
    Hyperbolic(#[command(flatten)] Input),
    /// Finite, affine and minimal infinite special subgroups.
    Parabolics(#[command(flatten)] Input),
    /// Smallest admissible field size for property (T).
    Threshold {
        #[command(flatten)]
        input: OptionalInput,
        /// Use this rank of the largest finite special subgroup instead of a
        /// diagram.
        #[arg(long, conflicts_with_all = ["input", "stdin"])]
        d: Option<usize>,
    },
    /// Diagrams up to isomorphism.
    Enumerate {
        #[arg(long)]
        max_rank: usize,
        /// Comma-separated labels, for example `2,3,4,inf`.
        #[arg(long, default_value = "2,3")]
        labels: LabelSet,
        #[arg(long, value_enum, default_value_t = EnumMode::Connected)]
        mode: EnumMode,
        /// Require every special subgroup of this rank to be finite.
        #[arg(long)]
        k_spherical: Option<usize>,
        /// List the classes, not only their counts.
        #[arg(long)]
        list: bool,
        /// Worker threads.
        #[arg(long)]
        jobs: Option<usize>,
    },
    /// Run a verification campaign.
    Verify {
        #[arg(long, value_enum)]
        campaign: CampaignName,
        #[arg(long)]
        max_rank: Option<usize>,
        /// Comma-separated labels; the lemma campaign fixes its own.
        #[arg(long)]
        labels: Option<LabelSet>,
        /// `simply-laced` or `three-spherical` for the lemma campaign,
        /// `exhaustive` or `frontier` for engine agreement.
        #[arg(long)]
        mode: Option<String>,
        /// Worker threads.
        #[arg(long)]
        jobs: Option<usize>,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum EnumMode {
    All,
    Connected,
    MinimalInfinite,
    QuasiMinimal,
}

#[derive(Clone, Copy, ValueEnum)]
enum CampaignName {
    LemmaDynkin,
    EngineAgreement,
    SizeBounds,
}

/// An input error; exits with status 2.
struct Usage(String);

impl<E: std::fmt::Display> From<E> for Usage {
    fn from(e: E) -> Self {
        Usage(e.to_string())
    }
}

fn read_diagram(input: Option<&PathBuf>, stdin: bool) -> Result<CoxeterSystem, Usage> {
    let (name, text) = match input {
        Some(path) => (
            path.display().to_string(),
            std::fs::read_to_string(path).map_err(|e| Usage(format!("{}: {e}", path.display())))?,
        ),
        None => {
            debug_assert!(stdin);
            let mut text = String::new();
            std::io::stdin().read_to_string(&mut text)?;
            ("<stdin>".to_string(), text)
        }
    };
    parse_diagram(&text).map_err(|e| Usage(format!("{name}: {e}")))
}

fn campaign(name: CampaignName, mode: Option<&str>) -> Result<Campaign, Usage> {
    let bad = |m: &str| Usage(format!("mode '{m}' does not apply to this campaign"));
    Ok(match (name, mode) {
        (CampaignName::LemmaDynkin, None | Some("simply-laced")) => {
            Campaign::LemmaDynkin(LemmaMode::SimplyLaced)
        }
        (CampaignName::LemmaDynkin, Some("three-spherical")) => {
            Campaign::LemmaDynkin(LemmaMode::ThreeSphericalCrystallographic)
        }
        (CampaignName::EngineAgreement, None | Some("exhaustive")) => {
            Campaign::EngineAgreement(AgreementScope::Exhaustive)
        }
        (CampaignName::EngineAgreement, Some("frontier")) => {
            Campaign::EngineAgreement(AgreementScope::Frontier)
        }
        (CampaignName::SizeBounds, None) => Campaign::SizeBounds,
        (_, Some(m)) => return Err(bad(m)),
    })
}

fn jobs<R: Send>(jobs: Option<usize>, f: impl FnOnce() -> R + Send) -> R {
    match jobs {
        Some(n) => with_jobs(n, f),
        None => f(),
    }
}

fn run(cli: Cli) -> Result<Output, Usage> {
    Ok(match cli.command {
        Command::Classify(i) => classify_command(&read_diagram(i.input.as_ref(), i.stdin)?),
        Command::Hyperbolic(i) => hyperbolic_command(&read_diagram(i.input.as_ref(), i.stdin)?),
        Command::Parabolics(i) => parabolics_command(&read_diagram(i.input.as_ref(), i.stdin)?),
        Command::Threshold { input, d } => match d {
            Some(d) => threshold_for_rank_command(d)?,
            None if input.input.is_some() || input.stdin => {
                threshold_command(&read_diagram(input.input.as_ref(), input.stdin)?)?
            }
            None => {
                return Err(Usage(
                    "give a diagram with --input or --stdin, or --d".into(),
                ))
            }
        },
        Command::Enumerate {
            max_rank,
            labels,
            mode,
            k_spherical,
            list,
            jobs: j,
        } => {
            if j == Some(0) {
                return Err(Usage("--jobs must be at least 1".into()));
            }
            let args = EnumerateArgs {
                max_rank,
                labels,
                mode: match mode {
                    EnumMode::All => EnumerateMode::All,
                    EnumMode::Connected => EnumerateMode::Connected,
                    EnumMode::MinimalInfinite => EnumerateMode::MinimalInfinite,
                    EnumMode::QuasiMinimal => EnumerateMode::QuasiMinimal,
                },
                k_spherical,
                list,
            };
            jobs(j, || enumerate_command(&args))?
        }
        Command::Verify {
            campaign: name,
            max_rank,
            labels,
            mode,
            jobs: j,
        } => {
            if j == Some(0) {
                return Err(Usage("--jobs must be at least 1".into()));
            }
            let campaign = campaign(name, mode.as_deref())?;
            let labels = match (campaign.default_labels(), labels) {
                (None, Some(_)) => {
                    return Err(Usage(
                        "the lemma campaign fixes its labels through --mode".into(),
                    ))
                }
                (None, None) => LabelSet::simply_laced(),
                (Some(default), given) => given.unwrap_or(default),
            };
            let max_rank = max_rank.unwrap_or_else(|| campaign.default_max_rank());
            jobs(j, || verify_command(&campaign, max_rank, &labels))?
        }
    })
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let format = cli.format;
    match run(cli) {
        Ok(out) => {
            match format {
                Format::Json => println!("{}", out.json),
                Format::Text => print!("{}", out.text),
            }
            if out.success {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            }
        }
        Err(Usage(message)) => {
            eprintln!("error: {message}");
            ExitCode::from(2)
        }
    }
}
