//! Command-line front end. [`run`] parses arguments, executes one subcommand
//! on a dedicated thread pool and returns the process exit code: 0 on
//! success, 2 for parameter errors and 3 for malformed input data.

mod args;
mod commands;
mod error;
mod manifest;

use std::ffi::OsString;
use std::time::{Instant, SystemTime, UNIX_EPOCH};

use clap::Parser;

pub use args::{Cli, Command};
pub use error::{CliError, EXIT_DATA, EXIT_PARAMETER};
pub use manifest::{manifest_path, FileDigest, RunManifest};

/// What a command read and wrote, for its manifest.
#[derive(Debug, Default)]
pub(crate) struct RunFiles {
    pub inputs: Vec<std::path::PathBuf>,
    pub outputs: Vec<std::path::PathBuf>,
}

pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let argv: Vec<OsString> = args.into_iter().map(Into::into).collect();
    let cli = match Cli::try_parse_from(&argv) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_PARAMETER } else { 0 };
            let _ = e.print();
            return code;
        }
    };
    let recorded: Vec<String> = argv.iter().skip(1).map(|a| a.to_string_lossy().into_owned()).collect();
    match execute(&cli, &recorded) {
        Ok(()) => 0,
        Err(e) => {
            eprintln!("error: {e}");
            e.exit_code()
        }
    }
}

fn execute(cli: &Cli, argv: &[String]) -> Result<(), CliError> {
    if let Command::Replay(replay) = &cli.command {
        return commands::replay(replay, cli.threads);
    }
    let mut builder = rayon::ThreadPoolBuilder::new();
    if let Some(t) = cli.threads {
        if t == 0 {
            return Err(CliError::Usage("--threads must be at least 1".into()));
        }
        builder = builder.num_threads(t);
    }
    let pool = builder.build().map_err(|e| CliError::Usage(format!("thread pool: {e}")))?;
    let started = SystemTime::now().duration_since(UNIX_EPOCH).map(|d| d.as_secs()).unwrap_or(0);
    let clock = Instant::now();
    let files = pool.install(|| commands::dispatch(cli))?;
    let Some(primary) = files.outputs.first() else {
        return Ok(());
    };
    let manifest = RunManifest {
        tool: "crows".into(),
        version: env!("CARGO_PKG_VERSION").into(),
        command: cli.command.name().into(),
        argv: manifest::strip_threads(argv),
        params: serde_json::to_value(&cli.command).expect("arguments serialize"),
        seed: cli.seed,
        threads: cli.threads,
        inputs: files.inputs.iter().map(|p| FileDigest::of(p)).collect::<Result<_, _>>()?,
        outputs: files.outputs.iter().map(|p| FileDigest::of(p)).collect::<Result<_, _>>()?,
        started_unix_secs: started,
        elapsed_ms: clock.elapsed().as_millis() as u64,
    };
    manifest.write(primary)?;
    Ok(())
}
