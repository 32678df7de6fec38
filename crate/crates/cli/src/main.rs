use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use catprop_core::algebra::{Budget, FiniteAlgebra};
use catprop_core::corpus;
use catprop_core::fincat::{FiniteCategory, MissingPolicy, Mode, Property};
use catprop_core::format::{
    parse_algebra, parse_category, write_category, DEFAULT_MAX_COMPOSE_LINES,
};
use catprop_core::report::{self, CategoryMethod, Report, ReportError, Status, TermKind};
use catprop_core::varcat::{
    audit_fragment, build_free_subcategory, build_model_category, CrossValidationOptions,
    FragmentOptions, VarcatError, DEFAULT_MAX_MORPHISMS,
};
use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::json;

const EXIT_INPUT: u8 = 3;

/// Decide unitality, subtractivity and strong unitality for varieties
/// generated by finite pointed algebras and for finite pointed categories.
#[derive(Parser)]
#[command(name = "catprop", version)]
struct Cli {
    /// Output format.
    #[arg(long, value_enum, global = true, default_value_t = Format::Json)]
    format: Format,
    /// Cap on the number of elements any closure may reach.
    #[arg(long, global = true, env = "CATPROP_BUDGET")]
    budget: Option<usize>,
    #[command(subcommand)]
    command: Cmd,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Text,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum PropertyArg {
    All,
    Unital,
    Subtractive,
    StronglyUnital,
}

impl PropertyArg {
    fn properties(self) -> Vec<Property> {
        match self {
            PropertyArg::All => Property::ALL.to_vec(),
            PropertyArg::Unital => vec![Property::Unital],
            PropertyArg::Subtractive => vec![Property::Subtractive],
            PropertyArg::StronglyUnital => vec![Property::StronglyUnital],
        }
    }
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum KindArg {
    Jt,
    Sub,
    P,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum ModeArg {
    Strict,
    Weak,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum ViaArg {
    Definition,
    Punctual,
    Coproducts,
}

#[derive(Subcommand)]
enum Cmd {
    /// Decide the properties for the variety generated by an algebra.
    CheckAlgebra {
        /// Algebra file, or `corpus:<name>`.
        file: String,
        #[arg(long, value_enum, default_value_t = PropertyArg::All)]
        property: PropertyArg,
    },
    /// Search the clone for a characteristic term.
    FindTerm {
        /// Algebra file, or `corpus:<name>`.
        file: String,
        /// `jt` for x+0 = x = 0+x, `sub` for s(x,0) = x and s(x,x) = 0,
        /// `p` for p(x,0,0) = x and p(x,x,y) = y.
        #[arg(long, value_enum)]
        kind: KindArg,
    },
    /// Build a model fragment or a free subcategory as a category file.
    BuildCategory(BuildArgs),
    /// Check properties of a finite pointed category.
    CheckCategory {
        /// Category file, or `corpus:<name>`.
        file: String,
        #[arg(long, value_enum, default_value_t = PropertyArg::All)]
        property: PropertyArg,
        /// Strict limits, or weak limits without uniqueness.
        #[arg(long, value_enum, default_value_t = ModeArg::Strict)]
        mode: ModeArg,
        /// Which characterization to evaluate.
        #[arg(long, value_enum, default_value_t = ViaArg::Definition)]
        via: ViaArg,
        /// Skip object pairs without a product instead of failing.
        #[arg(long)]
        skip_missing: bool,
    },
    /// Audit weak limits or designated structure of a category.
    Audit {
        /// Category file, or `corpus:<name>`.
        file: String,
        /// Weak products, weak equalizers and the zigzag weak limits.
        #[arg(long, required_unless_present = "designations")]
        weak_limits: bool,
        /// Check that the designated zero, products, coproducts and regular
        /// epis have their universal properties.
        #[arg(long)]
        designations: bool,
    },
    /// Compare every route to each property on one algebra.
    CrossValidate {
        /// Algebra file, or `corpus:<name>`.
        file: String,
        /// Largest free algebra in the free subcategory.
        #[arg(long, default_value_t = 3)]
        free_rank: usize,
        /// Largest number of factors in a model-fragment product.
        #[arg(long, default_value_t = 2)]
        max_power: usize,
        /// Cap on the morphisms of each built category.
        #[arg(long, default_value_t = DEFAULT_MAX_MORPHISMS)]
        max_morphisms: usize,
    },
    /// Work with the bundled inputs.
    Corpus {
        #[command(subcommand)]
        action: CorpusCmd,
    },
    /// Re-verify every witness in a report file (or a list of reports).
    Replay {
        /// JSON report, or a JSON array of reports.
        report: PathBuf,
    },
}

#[derive(Args)]
struct BuildArgs {
    /// Algebra file, or `corpus:<name>`.
    file: String,
    /// Free subcategory on F(0), ..., F(N).
    #[arg(
        long,
        value_name = "N",
        conflicts_with = "models",
        required_unless_present = "models"
    )]
    free: Option<usize>,
    /// Model fragment generated by the algebra.
    #[arg(long)]
    models: bool,
    /// Largest number of factors in a model-fragment product.
    #[arg(long, value_name = "K", default_value_t = 2)]
    max_power: usize,
    /// Largest carrier in the model fragment.
    #[arg(long)]
    max_size: Option<usize>,
    /// Leave subalgebras out of the model fragment.
    #[arg(long)]
    no_subalgebras: bool,
    /// Cap on the morphisms of the built category.
    #[arg(long, default_value_t = DEFAULT_MAX_MORPHISMS)]
    max_morphisms: usize,
    /// Where to write the category file (standard output if omitted).
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Subcommand)]
enum CorpusCmd {
    /// List bundled files.
    List,
    /// Cross-validate every bundled algebra and check every bundled category.
    Run,
    /// Write the bundled files into a directory.
    Export { dir: PathBuf },
}

/// A failure that maps to the input-error exit code.
struct InputError(String);

impl<E: std::fmt::Display> From<E> for InputError {
    fn from(e: E) -> Self {
        InputError(e.to_string())
    }
}

fn read_source(file: &str) -> Result<(String, String), InputError> {
    if let Some(name) = file.strip_prefix("corpus:") {
        let f = corpus::find(name)
            .ok_or_else(|| InputError(format!("no bundled input named `{name}`")))?;
        return Ok((f.file.to_string(), f.text.to_string()));
    }
    let text = fs::read_to_string(file).map_err(|e| InputError(format!("{file}: {e}")))?;
    Ok((file.to_string(), text))
}

fn load_algebra(file: &str) -> Result<FiniteAlgebra, InputError> {
    let (label, text) = read_source(file)?;
    parse_algebra(&text).map_err(|d| InputError(prefix_lines(&label, &d.to_string())))
}

fn load_category(file: &str) -> Result<FiniteCategory, InputError> {
    let (label, text) = read_source(file)?;
    parse_category(&text).map_err(|d| InputError(prefix_lines(&label, &d.to_string())))
}

fn prefix_lines(label: &str, text: &str) -> String {
    text.lines()
        .map(|l| format!("{label}: {l}"))
        .collect::<Vec<_>>()
        .join("\n")
}

fn budget(cli: &Cli) -> Budget {
    let mut b = Budget::default();
    if let Some(n) = cli.budget {
        b.max_elements = n;
    }
    b
}

fn emit(format: Format, report: &Report) {
    match format {
        Format::Json => print!("{}", report.to_json()),
        Format::Text => print!("{}", report::render_text(report)),
    }
}

fn emit_value(format: Format, value: &serde_json::Value, text: impl FnOnce() -> String) {
    match format {
        Format::Json => println!("{}", serde_json::to_string_pretty(value).expect("json")),
        Format::Text => print!("{}", text()),
    }
}

fn finish(format: Format, result: Result<Report, ReportError>) -> Result<u8, InputError> {
    let report = result?;
    emit(format, &report);
    Ok(report.status.exit_code() as u8)
}

fn cross_options(
    cli: &Cli,
    free_rank: usize,
    max_power: usize,
    max_morphisms: usize,
) -> CrossValidationOptions {
    CrossValidationOptions {
        budget: budget(cli),
        free_rank,
        max_morphisms,
        fragment: FragmentOptions {
            max_power,
            max_morphisms,
            ..FragmentOptions::default()
        },
    }
}

fn build(cli: &Cli, args: &BuildArgs) -> Result<u8, InputError> {
    let a = load_algebra(&args.file)?;
    let built = match args.free {
        Some(n) => build_free_subcategory(&a, n, &budget(cli), args.max_morphisms),
        None => {
            let mut options = FragmentOptions {
                max_power: args.max_power,
                include_subalgebras: !args.no_subalgebras,
                max_morphisms: args.max_morphisms,
                ..FragmentOptions::default()
            };
            if let Some(s) = args.max_size {
                options.max_size = s;
            }
            build_model_category(std::slice::from_ref(&a), options)
        }
    };
    let fragment = match built {
        Ok(f) => f,
        Err(e @ VarcatError::BudgetExceeded { .. }) => {
            eprintln!("{e}");
            return Ok(Status::Inconclusive.exit_code() as u8);
        }
        Err(
            e @ VarcatError::Algebra(catprop_core::algebra::AlgebraError::BudgetExceeded { .. }),
        ) => {
            eprintln!("{e}");
            return Ok(Status::Inconclusive.exit_code() as u8);
        }
        Err(e) => return Err(e.into()),
    };
    let text = write_category(&fragment.category, DEFAULT_MAX_COMPOSE_LINES)?;
    match &args.out {
        Some(path) => {
            fs::write(path, &text).map_err(|e| InputError(format!("{}: {e}", path.display())))?
        }
        None => print!("{text}"),
    }
    let audit = audit_fragment(&fragment);
    if args.out.is_some() {
        let value = json!({ "bounds": fragment.bounds, "audit": audit });
        emit_value(cli.format, &value, || {
            format!(
                "{} objects, {} morphisms, designations audited: {}\n",
                fragment.bounds.objects, fragment.bounds.morphisms, audit.all_ok
            )
        });
    }
    Ok(0)
}

fn corpus_run(cli: &Cli) -> Result<u8, InputError> {
    let options = cross_options(cli, 3, 2, DEFAULT_MAX_MORPHISMS);
    let algebras = corpus::algebras();
    let categories = corpus::categories();
    let mut reports: Vec<Report> = std::thread::scope(|s| {
        let handles: Vec<_> = algebras
            .iter()
            .map(|a| s.spawn(move || report::cross_validate_report(a, &options)))
            .collect();
        handles
            .into_iter()
            .map(|h| h.join().expect("cross-validation"))
            .collect()
    });
    for cat in &categories {
        for mode in [Mode::Strict, Mode::Weak] {
            match report::check_category(
                cat,
                &Property::ALL,
                mode,
                CategoryMethod::Definition,
                MissingPolicy::Skip,
            ) {
                Ok(r) => reports.push(r),
                Err(e) => eprintln!("{} ({mode:?}): {e}", cat.name()),
            }
        }
    }
    let consistent = reports.iter().all(|r| r.consistent != Some(false));
    match cli.format {
        Format::Json => println!("{}", serde_json::to_string_pretty(&reports).expect("json")),
        Format::Text => {
            for r in &reports {
                print!("{}", report::render_text(r));
            }
        }
    }
    Ok(if consistent { 0 } else { 1 })
}

fn replay_file(cli: &Cli, path: &Path) -> Result<u8, InputError> {
    let text =
        fs::read_to_string(path).map_err(|e| InputError(format!("{}: {e}", path.display())))?;
    let value: serde_json::Value = serde_json::from_str(&text)?;
    let reports: Vec<Report> = if value.is_array() {
        serde_json::from_value(value)?
    } else {
        vec![serde_json::from_value(value)?]
    };
    let mut results = Vec::new();
    let mut ok = true;
    for r in &reports {
        match report::replay(r) {
            Ok(summary) => {
                results.push(json!({ "input": r.input.name, "ok": true, "replayed": summary }))
            }
            Err(e) => {
                ok = false;
                results.push(json!({ "input": r.input.name, "ok": false, "errors": e.0 }));
            }
        }
    }
    let value = json!({ "ok": ok, "reports": results });
    emit_value(cli.format, &value, || {
        let mut out = String::new();
        for r in &results {
            let verdict = if r["ok"] == true { "ok" } else { "FAILED" };
            out.push_str(&format!(
                "{}: {verdict}\n",
                r["input"].as_str().unwrap_or_default()
            ));
            for e in r["errors"].as_array().into_iter().flatten() {
                out.push_str(&format!("  {}\n", e.as_str().unwrap_or_default()));
            }
        }
        out
    });
    Ok(if ok { 0 } else { 1 })
}

fn run(cli: &Cli) -> Result<u8, InputError> {
    let format = cli.format;
    match &cli.command {
        Cmd::CheckAlgebra { file, property } => {
            let a = load_algebra(file)?;
            finish(
                format,
                report::check_algebra(&a, &property.properties(), &budget(cli)),
            )
        }
        Cmd::FindTerm { file, kind } => {
            let a = load_algebra(file)?;
            let kind = match kind {
                KindArg::Jt => TermKind::Jt,
                KindArg::Sub => TermKind::Sub,
                KindArg::P => TermKind::P,
            };
            finish(format, report::find_term(&a, kind, &budget(cli)))
        }
        Cmd::BuildCategory(args) => build(cli, args),
        Cmd::CheckCategory {
            file,
            property,
            mode,
            via,
            skip_missing,
        } => {
            let cat = load_category(file)?;
            let mode = match mode {
                ModeArg::Strict => Mode::Strict,
                ModeArg::Weak => Mode::Weak,
            };
            let method = match via {
                ViaArg::Definition => CategoryMethod::Definition,
                ViaArg::Punctual => CategoryMethod::Punctual,
                ViaArg::Coproducts => CategoryMethod::Coproducts,
            };
            let missing = if *skip_missing {
                MissingPolicy::Skip
            } else {
                MissingPolicy::Error
            };
            finish(
                format,
                report::check_category(&cat, &property.properties(), mode, method, missing),
            )
        }
        Cmd::Audit {
            file,
            weak_limits,
            designations,
        } => {
            let cat = load_category(file)?;
            finish(format, report::audit(&cat, *weak_limits, *designations))
        }
        Cmd::CrossValidate {
            file,
            free_rank,
            max_power,
            max_morphisms,
        } => {
            let a = load_algebra(file)?;
            let options = cross_options(cli, *free_rank, *max_power, *max_morphisms);
            let r = report::cross_validate_report(&a, &options);
            emit(format, &r);
            Ok(r.status.exit_code() as u8)
        }
        Cmd::Corpus { action } => match action {
            CorpusCmd::List => {
                for f in corpus::files() {
                    println!("{}", f.file);
                }
                Ok(0)
            }
            CorpusCmd::Run => corpus_run(cli),
            CorpusCmd::Export { dir } => {
                fs::create_dir_all(dir)
                    .map_err(|e| InputError(format!("{}: {e}", dir.display())))?;
                for f in corpus::files() {
                    let path = dir.join(f.file);
                    fs::write(&path, f.text)
                        .map_err(|e| InputError(format!("{}: {e}", path.display())))?;
                }
                Ok(0)
            }
        },
        Cmd::Replay { report } => replay_file(cli, report),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) if e.use_stderr() => {
            let _ = e.print();
            return ExitCode::from(EXIT_INPUT);
        }
        Err(e) => {
            let _ = e.print();
            return ExitCode::SUCCESS;
        }
    };
    match run(&cli) {
        Ok(code) => ExitCode::from(code),
        Err(InputError(message)) => {
            eprintln!("error: {message}");
            ExitCode::from(EXIT_INPUT)
        }
    }
}
