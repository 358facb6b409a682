use std::path::PathBuf;
use std::process::ExitCode;

use bianchi_amalgam::config::{Format, RunConfig, DEFAULT_Q_MAX, MIN_Q_MAX};
use bianchi_amalgam::report::{run, STAGES};
use clap::{Parser, ValueEnum};

#[derive(Clone, Copy, ValueEnum)]
enum FormatArg {
    Json,
    Markdown,
}

/// Runs the verification pipeline and writes a report.
#[derive(Parser)]
#[command(name = "amalgam-report", version)]
struct Cli {
    /// Run a single stage (arithmetic, groups, geometry, complex, abelianization, e2, comparison, les) or all
    #[arg(long)]
    stage: Option<String>,
    /// Highest cohomological degree q computed
    #[arg(long)]
    q_max: Option<u32>,
    #[arg(long, value_enum, default_value = "json")]
    format: FormatArg,
    /// Write the report here instead of stdout
    #[arg(long)]
    out: Option<PathBuf>,
    /// TOML file with q_max, restrictions and golden fixture path
    #[arg(long)]
    config: Option<PathBuf>,
}

fn usage(msg: impl std::fmt::Display) -> ExitCode {
    eprintln!("amalgam-report: {msg}");
    ExitCode::from(2)
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { ExitCode::from(2) } else { ExitCode::SUCCESS };
        }
    };
    let mut cfg = match &cli.config {
        Some(p) => match RunConfig::load(p) {
            Ok(c) => c,
            Err(e) => return usage(e),
        },
        None => RunConfig::default(),
    };
    if let Some(q) = cli.q_max {
        cfg.q_max = q;
    }
    if cfg.q_max < MIN_Q_MAX {
        return usage(format!("--q-max must be at least {MIN_Q_MAX} (default {DEFAULT_Q_MAX})"));
    }
    if let Some(s) = &cli.stage {
        if s != "all" && !STAGES.contains(&s.as_str()) {
            return usage(format!("unknown stage {s:?}; expected one of {} or all", STAGES.join(", ")));
        }
        cfg.stage = Some(s.clone());
    }
    cfg.format = match cli.format {
        FormatArg::Json => Format::Json,
        FormatArg::Markdown => Format::Markdown,
    };
    cfg.out = cli.out.clone();

    let report = run(&cfg);
    let text = match cfg.format {
        Format::Json => report.to_json(),
        Format::Markdown => report.to_markdown(),
    };
    match &cfg.out {
        Some(p) => {
            if let Err(e) = std::fs::write(p, &text) {
                return usage(format!("cannot write {}: {e}", p.display()));
            }
        }
        None => print!("{text}"),
    }
    for sec in report.sections.iter().filter(|s| s.status.as_str() == "fail") {
        for c in sec.checks.iter().filter(|c| c.status.as_str() == "fail") {
            eprintln!("FAIL {}/{}: {}", sec.stage, c.name, c.detail);
        }
        if let Some(f) = sec.payload.get("forensics").and_then(|v| v.as_str()) {
            eprintln!("{f}");
        }
    }
    eprintln!("overall: {}", report.overall.as_str());
    if report.passed() {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(1)
    }
}
