//! Command-line front end: instance parsing, command dispatch and report
//! rendering. [`run`] is the whole program minus process exit, so it can be
//! driven from tests.

pub mod instance;
pub mod report;

use std::io::Read;

use clap::{Parser, Subcommand, ValueEnum};
use num_bigint::BigInt;
use rayon::prelude::*;
use serde::Serialize;

use instance::{ints, load_instance, Instance, InstanceError};
use report::{
    AnalyzeReport, BundleReport, CaseReport, Header, IsotropicReport, MismatchReport, OracleReport,
    QuasiNefOutput, ReduceReport, RootEntry, RootPairing, RootsReport,
};

use crate::oracle;
use crate::surface::LineBundleClass;
use crate::vanishing::{self, SearchOptions, VanishingError};

pub const EXIT_OK: i32 = 0;
pub const EXIT_INTERNAL: i32 = 1;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_INVALID: i32 = 3;

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Text,
    Json,
}

#[derive(Debug, Parser)]
#[command(name = "h1vanish", version, about = "Decide h^1 vanishing for line bundles on K3 and Enriques surfaces")]
pub struct Cli {
    /// Output format; json is versioned and byte-stable.
    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    pub format: Format,
    /// Worker threads for per-bundle analysis.
    #[arg(long, global = true, value_parser = clap::value_parser!(u16).range(1..))]
    pub threads: Option<u16>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Classify every bundle of the instance.
    Analyze {
        /// Instance file, or `-` for standard input.
        file: String,
        /// Cap on root degrees searched (marks the report as bounded).
        #[arg(long)]
        max_degree: Option<BigInt>,
    },
    /// List roots of degree 1 to D.
    Roots {
        file: String,
        #[arg(long)]
        max_degree: BigInt,
    },
    /// Show the nef-reduction chain of one bundle.
    Reduce {
        file: String,
        label: String,
        #[arg(long)]
        max_degree: Option<BigInt>,
    },
    /// Decide quasi-nefness of one bundle.
    Quasinef {
        file: String,
        label: String,
        #[arg(long)]
        max_degree: Option<BigInt>,
    },
    /// Cross-validate the classifier against brute-force searches.
    OracleCheck {
        file: String,
        /// Largest bundle degree enumerated.
        #[arg(long, value_parser = clap::value_parser!(u32).range(1..))]
        cap: u32,
    },
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Outcome {
    pub stdout: String,
    pub stderr: String,
    pub code: i32,
}

impl Outcome {
    fn out(stdout: String) -> Self {
        Outcome {
            stdout,
            stderr: String::new(),
            code: EXIT_OK,
        }
    }

    fn fail(code: i32, stderr: String) -> Self {
        Outcome {
            stdout: String::new(),
            stderr,
            code,
        }
    }
}

/// Parses `args` (including the program name) and runs the command.
pub fn run<I, T>(args: I) -> Outcome
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let text = e.render().to_string();
            return if e.use_stderr() {
                Outcome::fail(EXIT_USAGE, text)
            } else {
                Outcome::out(text)
            };
        }
    };
    match cli.threads {
        Some(n) => match rayon::ThreadPoolBuilder::new().num_threads(n as usize).build() {
            Ok(pool) => pool.install(|| execute(&cli)),
            Err(e) => Outcome::fail(EXIT_INTERNAL, format!("error: cannot start thread pool: {e}\n")),
        },
        None => execute(&cli),
    }
}

fn read_input(file: &str) -> Result<String, String> {
    let mut text = String::new();
    if file == "-" {
        std::io::stdin()
            .read_to_string(&mut text)
            .map_err(|e| format!("error: reading standard input: {e}\n"))?;
    } else {
        text = std::fs::read_to_string(file).map_err(|e| format!("error: reading {file}: {e}\n"))?;
    }
    Ok(text)
}

fn load(file: &str) -> Result<Instance, Outcome> {
    let text = read_input(file).map_err(|e| Outcome::fail(EXIT_USAGE, e))?;
    load_instance(&text).map_err(|e: InstanceError| Outcome::fail(e.exit_code(), format!("error: {file}: {e}\n")))
}

fn render<T: Serialize>(format: Format, value: &T, text: impl FnOnce(&T) -> String) -> String {
    match format {
        Format::Json => {
            let mut s = serde_json::to_string_pretty(value).expect("report serializes");
            s.push('\n');
            s
        }
        Format::Text => text(value),
    }
}

fn options(max_degree: &Option<BigInt>) -> SearchOptions {
    SearchOptions {
        max_degree: max_degree.clone(),
    }
}

fn vanishing_failure(label: &str, e: &VanishingError) -> Outcome {
    let code = if e.is_internal() { EXIT_INTERNAL } else { EXIT_INVALID };
    Outcome::fail(code, format!("error: bundle {label}: {e}\n"))
}

fn execute(cli: &Cli) -> Outcome {
    match &cli.command {
        Command::Analyze { file, max_degree } => analyze(cli.format, file, max_degree),
        Command::Roots { file, max_degree } => roots(cli.format, file, max_degree),
        Command::Reduce {
            file,
            label,
            max_degree,
        } => reduce(cli.format, file, label, max_degree),
        Command::Quasinef {
            file,
            label,
            max_degree,
        } => quasinef(cli.format, file, label, max_degree),
        Command::OracleCheck { file, cap } => oracle_check(cli.format, file, *cap),
    }
}

fn lookup<'a>(inst: &'a Instance, file: &str, label: &str) -> Result<&'a LineBundleClass, Outcome> {
    inst.bundle(label).ok_or_else(|| {
        let known: Vec<&str> = inst.bundles.iter().map(|(l, _)| l.as_str()).collect();
        Outcome::fail(
            EXIT_USAGE,
            format!("error: {file}: no bundle labelled {label:?} (known: {})\n", known.join(", ")),
        )
    })
}

fn analyze(format: Format, file: &str, max_degree: &Option<BigInt>) -> Outcome {
    let inst = match load(file) {
        Ok(i) => i,
        Err(o) => return o,
    };
    let ctx = &inst.context;
    let opts = options(max_degree);
    let results: Vec<(BundleReport, bool)> = inst
        .bundles
        .par_iter()
        .map(|(label, l)| {
            let mut b = BundleReport::skeleton(ctx, label, l);
            if let Ok(status) = ctx.is_nef_bounded(l, max_degree.as_ref()) {
                b.nef = Some(status.nef);
                b.nef_violator = status.violator.map(|(root, p)| RootPairing {
                    root: ints(&root),
                    pairing: p.into(),
                });
            }
            match vanishing::classify_h1_with(ctx, l, &opts) {
                Ok(c) => {
                    b.fill(&c);
                    (b, false)
                }
                Err(e) => {
                    b.error = Some(e.to_string());
                    (b, e.is_internal())
                }
            }
        })
        .collect();
    let internal = results.iter().any(|(_, bad)| *bad);
    let report = AnalyzeReport {
        header: Header::new("analyze", ctx, max_degree.as_ref()),
        bundles: results.into_iter().map(|(b, _)| b).collect(),
    };
    let mut o = Outcome::out(render(format, &report, report::analyze_text));
    if internal {
        o.code = EXIT_INTERNAL;
        o.stderr = "error: internal consistency failure during classification\n".into();
    }
    o
}

fn roots(format: Format, file: &str, max_degree: &BigInt) -> Outcome {
    let inst = match load(file) {
        Ok(i) => i,
        Err(o) => return o,
    };
    let ctx = &inst.context;
    let mut entries = Vec::new();
    let mut d = BigInt::from(1);
    while &d <= max_degree {
        let found = match ctx.root_query().roots_of_degree(&d) {
            Ok(r) => r,
            Err(e) => return Outcome::fail(EXIT_INTERNAL, format!("error: root enumeration: {e}\n")),
        };
        for r in found {
            let eff = ctx.is_effective(&LineBundleClass::untwisted(r.clone()));
            entries.push(RootEntry {
                degree: (&d).into(),
                root: ints(&r),
                effectivity: report::effectivity_name(eff).into(),
            });
        }
        d += 1;
    }
    let mut header = Header::new("roots", ctx, Some(max_degree));
    header.bounded_search = false;
    let report = RootsReport {
        header,
        roots: entries,
    };
    Outcome::out(render(format, &report, report::roots_text))
}

fn reduce(format: Format, file: &str, label: &str, max_degree: &Option<BigInt>) -> Outcome {
    let inst = match load(file) {
        Ok(i) => i,
        Err(o) => return o,
    };
    let l = match lookup(&inst, file, label) {
        Ok(l) => l,
        Err(o) => return o,
    };
    let ctx = &inst.context;
    let chain = match vanishing::nef_reduce_with(ctx, l, &options(max_degree)) {
        Ok(c) => c,
        Err(e) => return vanishing_failure(label, &e),
    };
    let report = ReduceReport {
        header: Header::new("reduce", ctx, max_degree.as_ref()),
        label: label.into(),
        bundle: ints(&l.cls),
        torsion: l.torsion as u8,
        steps: report::steps(&chain),
        final_class: ints(&chain.final_class.cls),
    };
    Outcome::out(render(format, &report, report::reduce_text))
}

fn quasinef(format: Format, file: &str, label: &str, max_degree: &Option<BigInt>) -> Outcome {
    let inst = match load(file) {
        Ok(i) => i,
        Err(o) => return o,
    };
    let l = match lookup(&inst, file, label) {
        Ok(l) => l,
        Err(o) => return o,
    };
    let ctx = &inst.context;
    let q = match vanishing::is_quasi_nef_with(ctx, l, &options(max_degree)) {
        Ok(q) => q,
        Err(e) => return vanishing_failure(label, &e),
    };
    let report = QuasiNefOutput {
        header: Header::new("quasinef", ctx, max_degree.as_ref()),
        label: label.into(),
        bundle: ints(&l.cls),
        torsion: l.torsion as u8,
        quasi_nef: q.quasi_nef,
        witness: q.witness.as_ref().map(ints),
        isotropic: q.isotropic.as_ref().map(|(n, e)| IsotropicReport {
            n: n.into(),
            e: ints(e),
        }),
        classification: CaseReport::from_case(&q.classification.case),
        h1: (&q.classification.h1).into(),
    };
    Outcome::out(render(format, &report, report::quasinef_text))
}

fn oracle_check(format: Format, file: &str, cap: u32) -> Outcome {
    let inst = match load(file) {
        Ok(i) => i,
        Err(o) => return o,
    };
    let ctx = &inst.context;
    let cv = oracle::cross_validate(ctx, cap);
    let report = OracleReport {
        header: Header::new("oracle-check", ctx, None),
        cap,
        checked: cv.checked,
        counts: cv.counts.iter().map(|(k, v)| (k.to_string(), *v)).collect(),
        mismatches: cv
            .mismatches
            .iter()
            .map(|m| MismatchReport {
                bundle: ints(&m.bundle.cls),
                torsion: m.bundle.torsion as u8,
                detail: m.detail.clone(),
            })
            .collect(),
    };
    let mut o = Outcome::out(render(format, &report, report::oracle_text));
    if !report.mismatches.is_empty() {
        o.code = EXIT_INTERNAL;
        o.stderr = format!("error: {} oracle mismatches\n", report.mismatches.len());
    }
    o
}
