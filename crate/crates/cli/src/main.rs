//! `hakdyn` command-line front end.

mod commands;
mod config;
mod error;
mod fixtures;
mod levels;

use std::io::Write;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use crate::commands::Report;
use crate::config::RunConfig;
use crate::error::{config, CliError, CliResult};

const FORMAT_VERSION: u32 = 1;

#[derive(Parser)]
#[command(name = "hakdyn", about = "Pseudo-suspension and chain-cover laboratory", disable_version_flag = true)]
struct Cli {
    /// Print the artifact and output-format versions.
    #[arg(long)]
    version: bool,
    /// List the embedded fixtures usable as `fixture:<name>`.
    #[arg(long)]
    list_fixtures: bool,
    #[command(subcommand)]
    command: Option<Command>,
}

#[derive(Args, Default)]
struct Common {
    /// INI config file, or `fixture:<name>`.
    #[arg(long)]
    config: Option<String>,
    /// Override `section.key=value`; repeatable.
    #[arg(long = "set", value_name = "SECTION.KEY=VALUE")]
    sets: Vec<String>,
    #[arg(long)]
    seed: Option<u64>,
    #[arg(long)]
    eps: Option<String>,
    #[arg(long)]
    n: Option<String>,
    #[arg(long)]
    budget: Option<u64>,
    #[arg(long)]
    horizon: Option<u64>,
    #[arg(long)]
    grid: Option<u64>,
    /// Write the CSV artifact here instead of standard output.
    #[arg(long)]
    out: Option<String>,
}

#[derive(Subcommand)]
enum Command {
    /// Rotation-number estimates of the annulus map.
    Rotation(Common),
    /// Rigidity times of the annulus map, or of the suspension when `[cantor]` is set.
    Rigidity(Common),
    /// Check a staged HAK scheme against its conditions.
    HakVerify(Common),
    /// Bowen entropy brackets of the pseudo-suspension.
    SuspendEntropy(Common),
    /// Orbit of one seeded point of the pseudo-suspension.
    SuspendOrbit(Common),
    /// Search for a weak-mixing witness between two balls.
    MixingWitness(Common),
    /// Search for a dense-orbit witness.
    DenseOrbit(Common),
    /// Rotation numbers of every bit word under the family schedule.
    RotationFamily(Common),
    /// Print a chain pattern.
    Pattern {
        #[arg(long, conflicts_with = "values")]
        kfold: Option<usize>,
        #[arg(long)]
        values: Option<String>,
    },
    /// Certify a horseshoe for a piecewise-linear interval map.
    Horseshoe {
        /// Map file with `[map] breakpoints` and `[chain] links`, or `fixture:<name>`.
        #[arg(long)]
        map: String,
        #[arg(long)]
        k: usize,
        #[arg(long)]
        depth: usize,
        #[arg(long, default_value_t = 4)]
        m_bound: usize,
        #[arg(long)]
        out: Option<String>,
    },
    /// Render nested chain covers as SVG.
    Render {
        /// Levels file, or `fixture:<name>`.
        #[arg(long)]
        levels: String,
        #[arg(long)]
        out: Option<String>,
    },
}

fn load(common: &Common) -> CliResult<RunConfig> {
    let mut cfg = match &common.config {
        Some(src) => RunConfig::load(src)?,
        None => RunConfig::empty(),
    };
    for item in &common.sets {
        let (path, value) =
            item.split_once('=').ok_or_else(|| config(format!("--set `{item}` is not `section.key=value`")))?;
        let (section, key) =
            path.split_once('.').ok_or_else(|| config(format!("--set `{item}` is not `section.key=value`")))?;
        cfg.set(section.trim(), key.trim(), value.trim());
    }
    let flags = [
        ("seed", common.seed.map(|v| v.to_string())),
        ("eps", common.eps.clone()),
        ("n", common.n.clone()),
        ("budget", common.budget.map(|v| v.to_string())),
        ("horizon", common.horizon.map(|v| v.to_string())),
        ("grid", common.grid.map(|v| v.to_string())),
        ("out", common.out.clone()),
    ];
    for (key, value) in flags {
        if let Some(v) = value {
            cfg.set("experiment", key, v);
        }
    }
    Ok(cfg)
}

fn run(command: Command) -> CliResult<(Report, Option<String>)> {
    let with_config = |common: Common, f: fn(&RunConfig) -> CliResult<Report>| -> CliResult<(Report, Option<String>)> {
        let cfg = load(&common)?;
        let out = cfg.get("experiment", "out").map(str::to_string);
        Ok((f(&cfg)?, out))
    };
    match command {
        Command::Rotation(c) => with_config(c, commands::rotation),
        Command::Rigidity(c) => with_config(c, commands::rigidity),
        Command::HakVerify(c) => with_config(c, commands::hak_verify_cmd),
        Command::SuspendEntropy(c) => with_config(c, commands::suspend_entropy),
        Command::SuspendOrbit(c) => with_config(c, commands::suspend_orbit),
        Command::MixingWitness(c) => with_config(c, commands::mixing_witness),
        Command::DenseOrbit(c) => with_config(c, commands::dense_orbit),
        Command::RotationFamily(c) => with_config(c, commands::rotation_family_cmd),
        Command::Pattern { kfold, values } => Ok((commands::pattern(kfold, values.as_deref())?, None)),
        Command::Horseshoe { map, k, depth, m_bound, out } => Ok((commands::horseshoe(&map, k, depth, m_bound)?, out)),
        Command::Render { levels, out } => Ok((commands::render(&levels)?, out)),
    }
}

fn emit(report: &Report, out: Option<&str>) -> CliResult<()> {
    let stdout = std::io::stdout();
    let mut handle = stdout.lock();
    let io = |source| CliError::Io { path: "<stdout>".into(), source };
    match out {
        Some(path) => {
            std::fs::write(path, &report.artifact).map_err(|source| CliError::Io { path: path.to_string(), source })?;
            for line in &report.summary {
                writeln!(handle, "{line}").map_err(io)?;
            }
            writeln!(handle, "wrote {path}").map_err(io)?;
        }
        None => {
            handle.write_all(report.artifact.as_bytes()).map_err(io)?;
            for line in &report.summary {
                writeln!(handle, "# {line}").map_err(io)?;
            }
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 3 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    if cli.version {
        println!("hakdyn {} (format {FORMAT_VERSION})", env!("CARGO_PKG_VERSION"));
        return ExitCode::SUCCESS;
    }
    if cli.list_fixtures {
        print!("{}", fixtures::listing());
        return ExitCode::SUCCESS;
    }
    let Some(command) = cli.command else {
        eprintln!("error: no subcommand given (try --help)");
        return ExitCode::from(3);
    };
    let result = run(command).and_then(|(report, out)| {
        emit(&report, out.as_deref())?;
        match report.failure {
            Some(msg) => Err(CliError::Check(msg)),
            None => Ok(()),
        }
    });
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
