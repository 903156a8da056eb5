use std::fs;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use serde_json::{json, Value};

use wronskian_cli::commands::{self, SeriesKind};
use wronskian_cli::config::{check_precision, parse_suites, ConfigError, Format, RunConfig};
use wronskian_cli::suite::{exit_code, report_csv, run_suite, Status, SCHEMA};
use wronskian_core::rankzero::Verdict;

#[derive(Parser, Debug)]
#[command(name = "wronskian", version, about = "Exact Wronskian and rank-zero span checks for Gamma_1(l)")]
struct Cli {
    #[command(flatten)]
    common: Common,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Debug)]
struct Common {
    /// Number of q-expansion coefficients (default depends on the level)
    #[arg(long, global = true, env = "WRONSKIAN_PRECISION")]
    precision: Option<usize>,
    /// Largest n used for the Hecke-cyclic span (default: the precision)
    #[arg(long, global = true, env = "WRONSKIAN_N_MAX")]
    n_max: Option<usize>,
    /// json or csv
    #[arg(long, global = true, env = "WRONSKIAN_FORMAT", default_value = "json")]
    format: String,
    /// Write the report here instead of stdout
    #[arg(long, global = true, env = "WRONSKIAN_OUT")]
    out: Option<PathBuf>,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Modular symbol spaces
    Modsym {
        #[command(subcommand)]
        action: ModsymAction,
    },
    /// Eisenstein series coefficients
    Eis {
        #[command(subcommand)]
        action: EisAction,
    },
    /// Heilbronn tuples H(n)
    Heilbronn {
        #[command(subcommand)]
        action: HeilbronnAction,
    },
    /// Euclid tuples I(n) and their runs
    Euclid {
        #[command(subcommand)]
        action: EuclidAction,
    },
    /// Span of all W(s_a, s_b)
    WronskianSpan {
        #[arg(long, env = "WRONSKIAN_LEVEL")]
        level: u64,
    },
    /// Span of the diamond-averaged Wronskians
    Gamma0Span {
        #[arg(long, env = "WRONSKIAN_LEVEL")]
        level: u64,
    },
    /// Run verification suites
    Verify {
        /// Suites to run when --suite is not given
        #[arg(value_name = "SUITE")]
        only: Vec<String>,
        #[arg(long, env = "WRONSKIAN_LEVEL", value_delimiter = ',', required = true)]
        level: Vec<u64>,
        /// all, or a comma-separated list of dims,relations,pd,composition,euclid,theorem,gamma0
        #[arg(long, env = "WRONSKIAN_SUITE")]
        suite: Option<String>,
    },
    /// Compare the Wronskian span with the Hecke side
    TheoremCheck {
        #[arg(long, env = "WRONSKIAN_LEVEL", value_delimiter = ',', required = true)]
        level: Vec<u64>,
    },
}

#[derive(Subcommand, Debug)]
enum ModsymAction {
    Dims {
        #[arg(long, env = "WRONSKIAN_LEVEL")]
        level: u64,
    },
}

#[derive(Subcommand, Debug)]
enum EisAction {
    Dump {
        #[arg(long, env = "WRONSKIAN_LEVEL")]
        level: u64,
        /// s, t or r
        #[arg(long, default_value = "s")]
        series: SeriesKind,
        #[arg(long, allow_hyphen_values = true)]
        index: i64,
    },
}

#[derive(Subcommand, Debug)]
enum HeilbronnAction {
    Dump {
        #[arg(long)]
        n: i64,
    },
}

#[derive(Subcommand, Debug)]
enum EuclidAction {
    Runs {
        #[arg(long)]
        n: i64,
    },
}

enum Failure {
    Config(String),
    Run(String),
}

impl From<ConfigError> for Failure {
    fn from(e: ConfigError) -> Self {
        Failure::Config(e.to_string())
    }
}

impl From<wronskian_core::error::Error> for Failure {
    fn from(e: wronskian_core::error::Error) -> Self {
        use wronskian_core::error::Error::*;
        match e {
            LevelTooSmall(_) | InvalidConfig(_) => Failure::Config(e.to_string()),
            other => Failure::Run(other.to_string()),
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => ExitCode::from(code as u8),
        Err(Failure::Config(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(1)
        }
        Err(Failure::Run(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
    }
}

fn check_level(l: u64) -> Result<(), ConfigError> {
    if l < 2 {
        return Err(ConfigError::Level(l));
    }
    Ok(())
}

fn json_only(format: Format) -> Result<(), ConfigError> {
    if format == Format::Csv {
        return Err(ConfigError::Other("csv output is only available for verify and theorem-check".into()));
    }
    Ok(())
}

fn positive(n: i64) -> Result<(), ConfigError> {
    if n < 1 {
        return Err(ConfigError::Other(format!("n must be positive, got {n}")));
    }
    Ok(())
}

fn run(cli: Cli) -> Result<i32, Failure> {
    let common = cli.common;
    let format: Format = common.format.parse()?;
    check_precision(common.precision)?;
    if common.n_max == Some(0) {
        return Err(ConfigError::NMax.into());
    }
    let precision_for = |l| common.precision.unwrap_or_else(|| wronskian_core::eisenstein::default_precision(l));
    let progress = |msg: &str| eprintln!("[wronskian] {msg}");

    let (body, code) = match cli.command {
        Command::Modsym { action: ModsymAction::Dims { level } } => {
            check_level(level)?;
            json_only(format)?;
            (to_text(&commands::modsym_dims(level)?), 0)
        }
        Command::Eis { action: EisAction::Dump { level, series, index } } => {
            check_level(level)?;
            json_only(format)?;
            (to_text(&commands::eis_dump(level, precision_for(level), series, index)?), 0)
        }
        Command::Heilbronn { action: HeilbronnAction::Dump { n } } => {
            positive(n)?;
            json_only(format)?;
            (to_text(&commands::heilbronn_dump(n)), 0)
        }
        Command::Euclid { action: EuclidAction::Runs { n } } => {
            positive(n)?;
            json_only(format)?;
            let doc = commands::euclid_runs(n);
            let ok = doc["partition"] == json!(true) && doc["bijection"] == json!(true);
            (to_text(&doc), if ok { 0 } else { 2 })
        }
        Command::WronskianSpan { level } => {
            check_level(level)?;
            json_only(format)?;
            (to_text(&commands::wronskian_span_doc(level, precision_for(level))?), 0)
        }
        Command::Gamma0Span { level } => {
            check_level(level)?;
            json_only(format)?;
            let doc = commands::gamma0_span_doc(level, precision_for(level))?;
            let ok = doc["containedInWronskianSpan"] == json!(true);
            (to_text(&doc), if ok { 0 } else { 2 })
        }
        Command::Verify { only, level, suite } => {
            let spec = match (suite, only.is_empty()) {
                (Some(s), _) => s,
                (None, false) => only.join(","),
                (None, true) => "all".to_string(),
            };
            let config = RunConfig {
                levels: level,
                precision: common.precision,
                n_max: common.n_max,
                format,
                suites: parse_suites(&spec)?,
            };
            config.validate()?;
            let report = run_suite(&config, &progress)?;
            let body = match format {
                Format::Json => to_text(&serde_json::to_value(&report).expect("serializable")),
                Format::Csv => report_csv(&report),
            };
            (body, report.exit_code())
        }
        Command::TheoremCheck { level } => {
            let mut config = RunConfig::new(level);
            config.precision = common.precision;
            config.n_max = common.n_max;
            config.validate()?;
            let mut levels = config.levels.clone();
            levels.sort_unstable();
            levels.dedup();
            let jobs: Vec<_> = levels
                .iter()
                .map(|&l| (l, config.precision_for(l), config.n_max_for(l)))
                .collect();
            for (l, n, m) in &jobs {
                progress(&format!("theorem-check: level {l}, precision {n}, n-max {m}"));
            }
            let reports = commands::theorem_reports(&jobs)?;
            let status = reports
                .iter()
                .map(|r| match r.verdict {
                    Verdict::Match => Status::Pass,
                    Verdict::Mismatch => Status::Fail,
                    Verdict::Indeterminate => Status::Indeterminate,
                })
                .max()
                .unwrap_or(Status::Pass);
            let body = match format {
                Format::Json => to_text(&json!({ "schema": SCHEMA, "reports": reports })),
                Format::Csv => commands::theorem_csv(&reports),
            };
            (body, exit_code(status))
        }
    };

    match common.out {
        Some(path) => fs::write(&path, body)
            .map_err(|e| Failure::Run(format!("cannot write {}: {e}", path.display())))?,
        None => print!("{body}"),
    }
    Ok(code)
}

fn to_text(v: &Value) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("serializable");
    s.push('\n');
    s
}
