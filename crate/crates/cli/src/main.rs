//! `hkz`: command-line front end for the divisor-lattice toolkit.
//!
//! Every report is a single JSON document on standard output (or `--output`);
//! every failure is a single JSON object with `"error"` and `"detail"`
//! fields. Exit codes: 0 success, 1 usage/parse error, 2 domain error,
//! 3 internal-consistency failure. Output is byte-deterministic for
//! identical inputs.

use clap::{Args, Parser, Subcommand};
use hkz_core::cones::{self, ConesError};
use hkz_core::model::{
    catalog_model, load_model, parse_class, serialize_model, DivisorClass, HKModel, ModelError,
    Violation, CATALOG_NAMES,
};
use hkz_core::zariski::{self, ZariskiError};
use serde_json::{json, Value};
use std::fs;
use std::path::PathBuf;
use std::process::ExitCode;

#[derive(Parser)]
#[command(
    name = "hkz",
    version,
    about = "Exact decompositions and cone analysis on hyperbolic divisor lattices",
    disable_help_subcommand = true
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct ModelSource {
    /// Path to a model JSON file.
    #[arg(long, value_name = "PATH", conflicts_with = "catalog")]
    model: Option<PathBuf>,
    /// Name of a built-in catalog model.
    #[arg(long, value_name = "NAME")]
    catalog: Option<String>,
}

#[derive(Args)]
struct OutputOpts {
    /// Pretty-print the JSON report.
    #[arg(long)]
    pretty: bool,
    /// Write the report to this file instead of standard output.
    #[arg(long, value_name = "PATH")]
    output: Option<PathBuf>,
}

#[derive(Subcommand)]
enum Command {
    /// Decompose a class into its positive part and prime combination.
    Decompose {
        #[command(flatten)]
        model: ModelSource,
        /// Comma-separated rational coordinates, e.g. "5/2,5/2,2".
        #[arg(long, value_name = "CSV", allow_hyphen_values = true)]
        class: String,
        /// Cross-check against the brute-force subset oracle.
        #[arg(long)]
        check_oracle: bool,
        #[command(flatten)]
        out: OutputOpts,
    },
    /// Decompose a class and verify the result against the defining checks.
    Verify {
        #[command(flatten)]
        model: ModelSource,
        #[arg(long, value_name = "CSV", allow_hyphen_values = true)]
        class: String,
        #[command(flatten)]
        out: OutputOpts,
    },
    /// Cone memberships of a class; with --class2, also classify the pair.
    Cone {
        #[command(flatten)]
        model: ModelSource,
        /// The class L whose memberships are reported.
        #[arg(long, value_name = "CSV", allow_hyphen_values = true)]
        class: String,
        /// Second class D: reports the parallel-or-negative-square
        /// classification of (L, D), with q(L, D) = 0 required.
        #[arg(long, value_name = "CSV", allow_hyphen_values = true)]
        class2: Option<String>,
        #[command(flatten)]
        out: OutputOpts,
    },
    /// Dimension-regime classification from the decomposition.
    Classify {
        #[command(flatten)]
        model: ModelSource,
        #[arg(long, value_name = "CSV", allow_hyphen_values = true)]
        class: String,
        #[command(flatten)]
        out: OutputOpts,
    },
    /// Extremal-ray test of a class against an explicit generator list.
    Extremal {
        /// JSON file holding a list of coordinate lists, e.g. [["1","0"],["0","1"]].
        #[arg(long, value_name = "PATH")]
        generators: PathBuf,
        /// The candidate ray class L (alias of --class2).
        #[arg(long, value_name = "CSV", allow_hyphen_values = true)]
        class: Option<String>,
        /// The candidate ray class L.
        #[arg(long, value_name = "CSV", allow_hyphen_values = true)]
        class2: Option<String>,
        #[command(flatten)]
        out: OutputOpts,
    },
    /// Validate a model file and list every violation.
    Validate {
        #[command(flatten)]
        model: ModelSource,
        #[command(flatten)]
        out: OutputOpts,
    },
    /// List built-in models, or print one in normalized form.
    Catalog {
        /// Print this catalog model instead of listing the names.
        #[arg(long, value_name = "NAME")]
        catalog: Option<String>,
        #[command(flatten)]
        out: OutputOpts,
    },
    /// Decompose every class in a file (one CSV per line; blank lines and
    /// '#' comments are skipped); summary counts go to standard error.
    Batch {
        /// File of class coordinate lines.
        file: PathBuf,
        #[command(flatten)]
        model: ModelSource,
        #[command(flatten)]
        out: OutputOpts,
    },
}

/// An error ready for emission: JSON body plus process exit code.
struct CliError {
    code: &'static str,
    detail: String,
    violations: Option<Vec<Value>>,
    exit: u8,
}

impl CliError {
    fn new(code: &'static str, detail: impl Into<String>, exit: u8) -> Self {
        CliError {
            code,
            detail: detail.into(),
            violations: None,
            exit,
        }
    }

    fn usage(detail: impl Into<String>) -> Self {
        CliError::new("UsageError", detail, 1)
    }

    fn body(&self) -> Value {
        let mut v = json!({ "error": self.code, "detail": self.detail });
        if let Some(violations) = &self.violations {
            v["violations"] = Value::Array(violations.clone());
        }
        v
    }
}

fn violation_values(violations: &[Violation]) -> Vec<Value> {
    violations
        .iter()
        .map(|v| json!({ "kind": v.kind(), "detail": v.to_string() }))
        .collect()
}

impl From<ModelError> for CliError {
    fn from(e: ModelError) -> Self {
        match e {
            ModelError::Parse(detail) => CliError::new("ParseError", detail, 1),
            ModelError::Invalid(ref violations) => CliError {
                code: "InvalidModel",
                detail: e.to_string(),
                violations: Some(violation_values(violations)),
                exit: 2,
            },
            ModelError::UnknownCatalogName(_) => CliError::new("UnknownCatalogName", e.to_string(), 2),
            ModelError::UnknownPrime(_) => CliError::new("UnknownPrime", e.to_string(), 2),
            ModelError::DimensionMismatch { .. } => {
                CliError::new("DimensionMismatch", e.to_string(), 2)
            }
            ModelError::InvalidExpression(_) => CliError::new("InvalidExpression", e.to_string(), 2),
        }
    }
}

impl From<ZariskiError> for CliError {
    fn from(e: ZariskiError) -> Self {
        // The middle three are unreachable on validated models; if one fires
        // the engine itself is inconsistent, which is exit 3 territory.
        let (code, exit) = match e {
            ZariskiError::DimensionMismatch { .. } => ("DimensionMismatch", 2),
            ZariskiError::SupportNotNegativeDefinite(_) => ("SupportNotNegativeDefinite", 2),
            ZariskiError::NegativeCoefficient { .. } => ("NegativeCoefficient", 3),
            ZariskiError::SingularSupportGram => ("SingularSupportGram", 3),
            ZariskiError::MultipleDistinctDecompositions => ("MultipleDistinctDecompositions", 3),
            ZariskiError::PrimeCountTooLarge(_) => ("PrimeCountTooLarge", 2),
            ZariskiError::NoValidSubset => ("NoValidSubset", 2),
            ZariskiError::PreconditionFailed(_) => ("PreconditionFailed", 2),
        };
        CliError::new(code, e.to_string(), exit)
    }
}

impl From<ConesError> for CliError {
    fn from(e: ConesError) -> Self {
        match e {
            ConesError::InternalConsistencyFailure(_) => {
                CliError::new("InternalConsistencyFailure", e.to_string(), 3)
            }
            ConesError::DimensionMismatch { .. } => {
                CliError::new("DimensionMismatch", e.to_string(), 2)
            }
            ConesError::PreconditionFailed(_) => {
                CliError::new("PreconditionFailed", e.to_string(), 2)
            }
            ConesError::NotInCone => CliError::new("NotInCone", e.to_string(), 2),
            ConesError::ProportionalityContradiction => {
                CliError::new("ProportionalityContradiction", e.to_string(), 2)
            }
        }
    }
}

impl From<serde_json::Error> for CliError {
    fn from(e: serde_json::Error) -> Self {
        CliError::new("ParseError", e.to_string(), 1)
    }
}

impl ModelSource {
    fn load(&self) -> Result<HKModel, CliError> {
        match (&self.model, &self.catalog) {
            (Some(path), None) => {
                let text = fs::read_to_string(path).map_err(|e| {
                    CliError::new("IoError", format!("cannot read {}: {e}", path.display()), 1)
                })?;
                Ok(load_model(&text)?)
            }
            (None, Some(name)) => Ok(catalog_model(name)?),
            (None, None) => Err(CliError::usage("either --model or --catalog is required")),
            (Some(_), Some(_)) => unreachable!("clap conflicts_with enforces exclusivity"),
        }
    }
}

fn parse_operand(text: &str) -> Result<DivisorClass, CliError> {
    Ok(parse_class(text)?)
}

fn render(value: &Value, pretty: bool) -> String {
    if pretty {
        serde_json::to_string_pretty(value).expect("report serializes")
    } else {
        serde_json::to_string(value).expect("report serializes")
    }
}

fn emit(out: &OutputOpts, text: &str) -> Result<(), CliError> {
    match &out.output {
        Some(path) => fs::write(path, format!("{text}\n")).map_err(|e| {
            CliError::new("IoError", format!("cannot write {}: {e}", path.display()), 1)
        }),
        None => {
            println!("{text}");
            Ok(())
        }
    }
}

fn decompose_report(m: &HKModel, d: &DivisorClass, check_oracle: bool) -> Result<Value, CliError> {
    let dec = zariski::decompose(m, d)?;
    let mut report = serde_json::to_value(&dec).expect("decomposition serializes");
    if check_oracle {
        let oracle = zariski::decompose_bruteforce(m, d)?;
        if !dec.agrees_with(&oracle) {
            return Err(CliError::new(
                "OracleMismatch",
                "brute-force oracle disagrees with the decomposition engine",
                3,
            ));
        }
        report["oracle_agrees"] = Value::Bool(true);
    }
    Ok(report)
}

fn run_command(command: Command) -> Result<(), CliError> {
    match command {
        Command::Decompose {
            model,
            class,
            check_oracle,
            out,
        } => {
            let m = model.load()?;
            let d = parse_operand(&class)?;
            let report = decompose_report(&m, &d, check_oracle)?;
            emit(&out, &render(&report, out.pretty))
        }
        Command::Verify { model, class, out } => {
            let m = model.load()?;
            let d = parse_operand(&class)?;
            let dec = zariski::decompose(&m, &d)?;
            let report = zariski::verify(&m, &d, &dec);
            let value = serde_json::to_value(&report).expect("verify report serializes");
            emit(&out, &render(&value, out.pretty))
        }
        Command::Cone {
            model,
            class,
            class2,
            out,
        } => {
            let m = model.load()?;
            let l = parse_operand(&class)?;
            let mut report = json!({
                "positive_cone": serde_json::to_value(cones::in_positive_cone(&m, &l)?)?,
                "closed_positive_cone":
                    serde_json::to_value(cones::in_closed_positive_cone(&m, &l)?)?,
                "dual_bk_cone": serde_json::to_value(cones::in_dual_bk_cone(&m, &l)?)?,
            });
            if let Some(second) = class2 {
                let d = parse_operand(&second)?;
                let pair = cones::null_pair_classify(&m, &l, &d, None)?;
                report["null_pair"] = serde_json::to_value(&pair)?;
            }
            emit(&out, &render(&report, out.pretty))
        }
        Command::Classify { model, class, out } => {
            let m = model.load()?;
            let d = parse_operand(&class)?;
            let report = hkz_core::classify::d_dimension_class(&m, &d)?;
            let value = serde_json::to_value(&report).expect("class report serializes");
            emit(&out, &render(&value, out.pretty))
        }
        Command::Extremal {
            generators,
            class,
            class2,
            out,
        } => {
            let operand = match (class, class2) {
                (Some(c), None) | (None, Some(c)) => c,
                (Some(_), Some(_)) => {
                    return Err(CliError::usage(
                        "pass the ray class via --class or --class2, not both",
                    ))
                }
                (None, None) => {
                    return Err(CliError::usage(
                        "extremal requires the ray class via --class or --class2",
                    ))
                }
            };
            let l = parse_operand(&operand)?;
            let text = fs::read_to_string(&generators).map_err(|e| {
                CliError::new(
                    "IoError",
                    format!("cannot read {}: {e}", generators.display()),
                    1,
                )
            })?;
            let lists: Vec<Vec<String>> = serde_json::from_str(&text)?;
            let gens = lists
                .iter()
                .map(|coords| {
                    coords
                        .iter()
                        .map(|c| hkz_core::rat::parse_rat(c))
                        .collect::<Result<Vec<_>, _>>()
                        .map(DivisorClass::new)
                })
                .collect::<Result<Vec<_>, _>>()
                .map_err(|e| CliError::new("ParseError", e.to_string(), 1))?;
            let result = cones::extremal_ray_test(&gens, &l)?;
            let value = serde_json::to_value(&result)?;
            emit(&out, &render(&value, out.pretty))
        }
        Command::Validate { model, out } => {
            model.load()?; // load_model rejects invalid models with the violation list
            let value = json!({ "valid": true, "violations": [] });
            emit(&out, &render(&value, out.pretty))
        }
        Command::Catalog { catalog, out } => match catalog {
            Some(name) => {
                let m = catalog_model(&name)?;
                let text = serialize_model(&m, out.pretty);
                emit(&out, &text)
            }
            None => {
                let names: Vec<Value> = CATALOG_NAMES
                    .iter()
                    .map(|n| Value::String(n.to_string()))
                    .collect();
                emit(&out, &render(&Value::Array(names), out.pretty))
            }
        },
        Command::Batch { file, model, out } => {
            let m = model.load()?;
            let text = fs::read_to_string(&file).map_err(|e| {
                CliError::new("IoError", format!("cannot read {}: {e}", file.display()), 1)
            })?;
            let mut blocks = Vec::new();
            let mut processed = 0usize;
            let mut ok = 0usize;
            let mut errors = 0usize;
            let mut worst: u8 = 0;
            for line in text.lines() {
                let line = line.trim();
                if line.is_empty() || line.starts_with('#') {
                    continue;
                }
                processed += 1;
                let report = parse_operand(line).and_then(|d| decompose_report(&m, &d, false));
                match report {
                    Ok(value) => {
                        ok += 1;
                        blocks.push(render(&value, out.pretty));
                    }
                    Err(e) => {
                        errors += 1;
                        worst = worst.max(e.exit);
                        blocks.push(render(&e.body(), out.pretty));
                    }
                }
            }
            eprintln!("{processed} processed, {ok} ok, {errors} errors");
            if !blocks.is_empty() {
                emit(&out, &blocks.join("\n"))?;
            } else if let Some(path) = &out.output {
                fs::write(path, "").map_err(|e| {
                    CliError::new("IoError", format!("cannot write {}: {e}", path.display()), 1)
                })?;
            }
            if worst > 0 {
                // Per-line failures surface in the exit status without
                // aborting the batch.
                return Err(CliError {
                    code: "BatchLineErrors",
                    detail: format!("{errors} of {processed} lines failed"),
                    violations: None,
                    exit: worst,
                });
            }
            Ok(())
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind;
            if matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion) {
                print!("{e}");
                return ExitCode::SUCCESS;
            }
            let err = CliError::usage(e.to_string());
            println!("{}", render(&err.body(), false));
            return ExitCode::from(err.exit);
        }
    };
    match run_command(cli.command) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            // Batch already emitted its per-line reports; its terminal
            // error only carries the exit status.
            if e.code != "BatchLineErrors" {
                println!("{}", render(&e.body(), false));
            }
            ExitCode::from(e.exit)
        }
    }
}
