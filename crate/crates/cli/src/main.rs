use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde_json::json;

use deform_audit::cohomology::{self, GModule, ModuleKind, Variant};
use deform_audit::deformation;
use deform_audit::groups;
use deform_audit::matrices::MatSpace;
use deform_audit::report::{Report, Verdict, SCHEMA_VERSION};
use deform_audit::rings::preset;
use deform_audit::suites::{self, Config, Over, SweepMode, SUITES};
use deform_audit::Error;

#[derive(Parser)]
#[command(name = "deform-audit", version, about = "Machine checks for SL_n over finite local rings and its square-zero deformations")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run a verification suite, or `all`
    Run {
        suite: String,
        #[command(flatten)]
        flags: SuiteFlags,
        /// Run independent suites concurrently
        #[arg(long)]
        parallel: bool,
        #[command(flatten)]
        out: Output,
    },
    Verify {
        #[command(subcommand)]
        what: VerifyCmd,
    },
    Cohomology {
        #[command(subcommand)]
        what: CohomologyCmd,
    },
    Extension {
        #[command(subcommand)]
        what: ExtensionCmd,
    },
    Deformation {
        #[command(subcommand)]
        what: DeformationCmd,
    },
}

#[derive(Subcommand)]
enum VerifyCmd {
    /// Steinberg relations over one ring
    Steinberg {
        #[command(flatten)]
        flags: SuiteFlags,
        #[command(flatten)]
        out: Output,
    },
}

#[derive(Subcommand)]
enum CohomologyCmd {
    /// dim H^1(SL_n(k), module)
    H1 {
        /// `sl<n>`, e.g. `sl3`
        #[arg(long, default_value = "sl3")]
        group: String,
        #[arg(long, default_value = "f3")]
        field: String,
        /// m, m0, s, v or trivial
        #[arg(long, default_value = "m0")]
        module: String,
        #[command(flatten)]
        out: Output,
    },
}

#[derive(Subcommand)]
enum ExtensionCmd {
    /// Does SL_n(W_2(k)) -> SL_n(k) (or a variant) split?
    Split {
        #[arg(long, default_value = "f3")]
        field: String,
        #[arg(long, default_value_t = 3)]
        n: usize,
        /// full, general or scalar_quotient
        #[arg(long, default_value = "full")]
        variant: String,
        #[arg(long, value_enum, default_value_t = SubgroupArg::Auto)]
        subgroup: SubgroupArg,
        #[command(flatten)]
        out: Output,
    },
}

#[derive(Subcommand)]
enum DeformationCmd {
    /// Lift classes into each target versus ring homomorphisms out of k
    Audit {
        #[arg(long, default_value = "f3")]
        k: String,
        #[arg(long, default_value_t = 3)]
        n: usize,
        /// Comma-separated ring keys; defaults to k, its dual numbers and W_2(k)
        #[arg(long, value_delimiter = ',')]
        targets: Option<Vec<String>>,
        #[command(flatten)]
        out: Output,
    },
    /// Section reconstruction on the constant copy and random twists
    Reconstruct {
        #[arg(long = "R", default_value = "f3_dual")]
        ring: String,
        #[arg(long, default_value_t = 3)]
        n: usize,
        #[arg(long, default_value_t = 0)]
        twist_seed: u64,
        #[arg(long, default_value_t = 1)]
        twists: usize,
        #[command(flatten)]
        out: Output,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum SubgroupArg {
    Auto,
    Full,
    Sylow,
}

#[derive(Clone, Copy, ValueEnum)]
enum ModeArg {
    Exhaustive,
    Sampled,
}

#[derive(Args)]
struct SuiteFlags {
    #[arg(long)]
    ring: Option<String>,
    #[arg(long)]
    field: Option<String>,
    #[arg(long)]
    n: Option<usize>,
    #[arg(long, value_enum, default_value_t = ModeArg::Exhaustive)]
    mode: ModeArg,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Cap on exhaustive sweeps
    #[arg(long)]
    budget: Option<u64>,
}

impl SuiteFlags {
    fn config(&self) -> Config {
        Config {
            ring: self.ring.clone(),
            field: self.field.clone(),
            n: self.n,
            mode: match self.mode {
                ModeArg::Exhaustive => SweepMode::Exhaustive,
                ModeArg::Sampled => SweepMode::Sampled,
            },
            seed: self.seed,
            budget: self.budget,
        }
    }
}

#[derive(Args)]
struct Output {
    /// Write the full reports as JSON
    #[arg(long)]
    json: Option<PathBuf>,
    /// Write the summary table as CSV
    #[arg(long)]
    csv: Option<PathBuf>,
    /// Exit 0 even if some suite was skipped for budget
    #[arg(long)]
    allow_skip: bool,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match dispatch(cli.command) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {}", e);
            ExitCode::from(2)
        }
    }
}

fn dispatch(command: Command) -> Result<ExitCode, Error> {
    match command {
        Command::Run { suite, flags, parallel, out } => {
            let names: Vec<&str> = if suite == "all" { SUITES.to_vec() } else { vec![suite.as_str()] };
            let cfg = flags.config();
            let reports = suites::run_many(&names, &cfg, parallel)?;
            emit(&reports, Some(cfg.seed), &out)
        }
        Command::Verify { what: VerifyCmd::Steinberg { flags, out } } => {
            let cfg = flags.config();
            let reports = vec![suites::run_suite("steinberg", &cfg)?];
            emit(&reports, Some(cfg.seed), &out)
        }
        Command::Cohomology { what: CohomologyCmd::H1 { group, field, module, out } } => {
            let n: usize = group
                .strip_prefix("sl")
                .and_then(|s| s.parse().ok())
                .ok_or_else(|| Error::Usage(format!("group must look like sl3, got {:?}", group)))?;
            let k = preset(&field)?;
            let start = std::time::Instant::now();
            let mut report = Report::new("h1", suites::anchor("h1"));
            match GModule::new(ModuleKind::parse(&module)?, &k, n, 1)
                .and_then(|m| Ok((m, groups::special_linear(&MatSpace::new(&k, n)?, groups::DEFAULT_CAP)?)))
                .and_then(|(m, g)| cohomology::h1_dim(&g, &m, cohomology::DEFAULT_H1_BUDGET))
            {
                Ok(h) => {
                    report.checks = 1;
                    report.certificate = json!({ "group": group, "field": field, "module": module, "h1": h });
                }
                Err(Error::Budget { needed, budget }) => report.skip(&format!("needs {} unknowns, budget is {}", needed, budget)),
                Err(e @ Error::Module(_)) => return Err(e),
                Err(e) => report.fail(json!({ "error": e.to_string() })),
            }
            report.wall_time_ms = start.elapsed().as_millis() as u64;
            emit(&[report], None, &out)
        }
        Command::Extension { what: ExtensionCmd::Split { field, n, variant, subgroup, out } } => {
            let big = preset(&suites::w2_of(&field)?)?;
            let variant = Variant::parse(&variant)?;
            let over = match subgroup {
                SubgroupArg::Auto => Over::Auto,
                SubgroupArg::Full => Over::Full,
                SubgroupArg::Sylow => Over::Sylow,
            };
            let start = std::time::Instant::now();
            let mut report = Report::new("split", suites::anchor("split"));
            match suites::decide(&big, n, variant, over) {
                Ok((verdict, mut cert)) => {
                    cert["verdict"] = json!(verdict);
                    report.checks = 1;
                    report.certificate = cert;
                }
                Err(e) => report.fail(json!({ "error": e.to_string() })),
            }
            report.wall_time_ms = start.elapsed().as_millis() as u64;
            emit(&[report], None, &out)
        }
        Command::Deformation { what: DeformationCmd::Audit { k, n, targets, out } } => {
            let kr = preset(&k)?;
            let targets = match targets {
                Some(keys) => keys.iter().map(|t| preset(t)).collect::<Result<Vec<_>, _>>()?,
                None => suites::audit_targets(&k)?,
            };
            let start = std::time::Instant::now();
            let mut report = Report::new("deformation-audit", suites::anchor("deformation-audit"));
            match deformation::universal_property_audit(&kr, n, &targets) {
                Ok(rows) => {
                    report.checks = rows.len() as u64;
                    for row in rows.iter().filter(|r| !r.agree) {
                        report.fail(json!(row));
                    }
                    report.certificate = json!({ "k": k, "n": n, "rows": rows });
                }
                Err(e) => report.fail(json!({ "error": e.to_string() })),
            }
            report.wall_time_ms = start.elapsed().as_millis() as u64;
            emit(&[report], None, &out)
        }
        Command::Deformation { what: DeformationCmd::Reconstruct { ring, n, twist_seed, twists, out } } => {
            preset(&ring)?;
            let start = std::time::Instant::now();
            let mut rng = ChaCha8Rng::seed_from_u64(twist_seed);
            let mut report = match suites::reconstruct_run(&ring, n, twists, &mut rng) {
                Ok((mut report, rows)) => {
                    report.certificate = json!({ "ring": ring, "n": n, "instances": rows });
                    report
                }
                Err(e) => {
                    let mut r = Report::new("reconstruct", suites::anchor("reconstruct"));
                    r.fail(json!({ "error": e.to_string() }));
                    r
                }
            };
            report.seed = Some(twist_seed);
            report.wall_time_ms = start.elapsed().as_millis() as u64;
            emit(&[report], Some(twist_seed), &out)
        }
    }
}

fn emit(reports: &[Report], seed: Option<u64>, out: &Output) -> Result<ExitCode, Error> {
    println!("{:<18} {:<8} {:>10} {:>9}  anchor", "suite", "verdict", "checks", "ms");
    for r in reports {
        println!("{:<18} {:<8} {:>10} {:>9}  {}", r.suite, verdict_str(r.verdict), r.checks, r.wall_time_ms, r.anchor);
        if let Some(c) = &r.counterexample {
            println!("  {}", c);
        }
    }
    if let Some(path) = &out.json {
        let doc = json!({ "schema_version": SCHEMA_VERSION, "seed": seed, "reports": reports });
        let text = serde_json::to_string_pretty(&doc).map_err(|e| Error::Parse(e.to_string()))?;
        std::fs::write(path, text + "\n")?;
    }
    if let Some(path) = &out.csv {
        let mut text = String::from("suite,verdict,checks,wall_time_ms,anchor\n");
        for r in reports {
            text.push_str(&format!("{},{},{},{},\"{}\"\n", r.suite, verdict_str(r.verdict), r.checks, r.wall_time_ms, r.anchor.replace('"', "\"\"")));
        }
        std::fs::write(path, text)?;
    }
    let code = if reports.iter().any(|r| r.verdict == Verdict::Fail) {
        1
    } else if reports.iter().any(|r| r.verdict == Verdict::Skipped) && !out.allow_skip {
        3
    } else {
        0
    };
    Ok(ExitCode::from(code))
}

fn verdict_str(v: Verdict) -> &'static str {
    match v {
        Verdict::Pass => "pass",
        Verdict::Fail => "fail",
        Verdict::Skipped => "skipped",
    }
}
