use std::io::{self, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use delpezzo_core::census::{census_table, to_json_lines, to_tsv, FamilyKind};
use delpezzo_core::classifier::classify_class;
use delpezzo_core::geometry::{enumerate_conics, enumerate_lines};
use delpezzo_core::sweep::property_suite;
use delpezzo_core::threefold::{QualityPolicy, ThreefoldContext};
use delpezzo_core::{DivisorClass, Error, SurfaceModel};

/// Curves on del Pezzo surfaces and the Hilbert schemes of del Pezzo threefolds.
#[derive(Parser)]
#[command(name = "delpezzo", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum Output {
    Tsv,
    Json,
}

#[derive(Subcommand)]
enum Command {
    /// List the (-1)-curves of a del Pezzo surface.
    Lines {
        #[command(flatten)]
        surface: SurfaceArgs,
        #[arg(long, value_enum, default_value = "tsv")]
        output: Output,
    },
    /// List the conic classes (C^2 = 0, -K.C = 2).
    Conics {
        #[command(flatten)]
        surface: SurfaceArgs,
        #[arg(long, value_enum, default_value = "tsv")]
        output: Output,
    },
    /// Classify a curve class on a hyperplane section of V_n; prints JSON.
    Classify {
        #[command(flatten)]
        surface: SurfaceArgs,
        /// `a;b1,...,br` on blow-ups of P^2, `p,q` on the quadric.
        #[arg(long, allow_hyphen_values = true)]
        class: String,
        /// JSON object mapping line classes to good / bad / bad(k,-k).
        #[arg(long)]
        quality_file: Option<PathBuf>,
    },
    /// Tabulate a named family of curves.
    Census {
        #[arg(long)]
        family: String,
        #[arg(long)]
        max: i128,
        #[arg(long, value_enum, default_value = "tsv")]
        output: Output,
    },
    /// Run the consistency checks over a box of classes; prints violations.
    Sweep {
        #[command(flatten)]
        surface: SurfaceArgs,
        #[arg(long, default_value_t = 4)]
        coeff_bound: i128,
    },
}

#[derive(clap::Args)]
struct SurfaceArgs {
    /// Degree n; the surface is P^2 blown up at 9 - n points.
    #[arg(long)]
    degree: i64,
    /// Use P^1 x P^1 (degree 8) instead of the blow-up.
    #[arg(long)]
    quadric: bool,
}

impl SurfaceArgs {
    fn model(&self) -> Result<SurfaceModel, Error> {
        if self.quadric {
            if self.degree != 8 {
                return Err(Error::InvalidModel(format!(
                    "--quadric needs --degree 8, got {}",
                    self.degree
                )));
            }
            return Ok(SurfaceModel::Quadric);
        }
        SurfaceModel::of_degree(self.degree)
    }

    fn context(&self, policy: QualityPolicy) -> Result<ThreefoldContext, Error> {
        if self.degree == 8 && !self.quadric {
            return Err(Error::InvalidContext(
                "hyperplane sections of V8 are quadrics; pass --quadric".to_string(),
            ));
        }
        ThreefoldContext::new(self.degree, self.model()?, policy)
    }
}

enum Failure {
    Input(String),
    Internal(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        if e.is_internal() {
            Failure::Internal(e.to_string())
        } else {
            Failure::Input(e.to_string())
        }
    }
}

impl From<io::Error> for Failure {
    fn from(e: io::Error) -> Self {
        Failure::Input(e.to_string())
    }
}

fn print_classes(out: &mut impl Write, classes: &[DivisorClass], format: Output) -> io::Result<()> {
    match format {
        Output::Tsv => {
            for c in classes {
                writeln!(out, "{c}")?;
            }
        }
        Output::Json => {
            let names: Vec<String> = classes.iter().map(ToString::to_string).collect();
            writeln!(out, "{}", serde_json::to_string(&names).expect("strings serialize"))?;
        }
    }
    Ok(())
}

fn run(cli: Cli, out: &mut impl Write) -> Result<(), Failure> {
    match cli.command {
        Command::Lines { surface, output } => {
            let lines: Vec<_> = enumerate_lines(surface.model()?).iter().map(|l| *l.class()).collect();
            print_classes(out, &lines, output)?;
        }
        Command::Conics { surface, output } => {
            let conics: Vec<_> = enumerate_conics(surface.model()?).iter().map(|q| *q.class()).collect();
            print_classes(out, &conics, output)?;
        }
        Command::Classify {
            surface,
            class,
            quality_file,
        } => {
            let model = surface.model()?;
            let policy = match quality_file {
                None => QualityPolicy::GeneralSection,
                Some(path) => {
                    let text = std::fs::read_to_string(&path)
                        .map_err(|e| Failure::Input(format!("cannot read `{}`: {e}", path.display())))?;
                    ThreefoldContext::parse_quality_map(model, &text)?
                }
            };
            let ctx = surface.context(policy)?;
            let cls = DivisorClass::parse(model, &class)?;
            let report = classify_class(&ctx, &cls)?;
            writeln!(out, "{}", report.to_json())?;
        }
        Command::Census { family, max, output } => {
            let kind: FamilyKind = family.parse()?;
            let rows = census_table(kind, max)?;
            match output {
                Output::Tsv => out.write_all(to_tsv(&rows).as_bytes())?,
                Output::Json => out.write_all(to_json_lines(&rows).as_bytes())?,
            }
        }
        Command::Sweep { surface, coeff_bound } => {
            if coeff_bound < 0 {
                return Err(Failure::Input(format!("--coeff-bound must be >= 0, got {coeff_bound}")));
            }
            let ctx = surface.context(QualityPolicy::GeneralSection)?;
            let mut violations = 0;
            for (name, summary) in property_suite(&ctx, coeff_bound)? {
                writeln!(out, "# {name}: {} checked, {} violations", summary.checked, summary.violations.len())?;
                for v in &summary.violations {
                    writeln!(out, "{v}")?;
                }
                violations += summary.violations.len();
            }
            if violations > 0 {
                out.flush()?;
                return Err(Failure::Internal(format!("{violations} violations")));
            }
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let stdout = io::stdout();
    let mut out = io::BufWriter::new(stdout.lock());
    let result = run(cli, &mut out);
    let flushed = out.flush();
    match (result, flushed) {
        (Ok(()), Ok(())) => ExitCode::SUCCESS,
        (Err(Failure::Input(msg)), _) => {
            eprintln!("error: {msg}");
            ExitCode::from(1)
        }
        (Err(Failure::Internal(msg)), _) => {
            eprintln!("internal inconsistency: {msg}");
            ExitCode::from(2)
        }
        (Ok(()), Err(e)) if e.kind() == io::ErrorKind::BrokenPipe => ExitCode::SUCCESS,
        (Ok(()), Err(e)) => {
            eprintln!("error: {e}");
            ExitCode::from(1)
        }
    }
}
