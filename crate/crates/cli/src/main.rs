mod cmd;
mod family;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use rankwave::io::Config;

/// Evaluates and verifies rank-two Riemann waves of the rotating Euler equations.
#[derive(Parser)]
#[command(name = "rankwave", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Construct a simple element at a state and check it.
    Elements(Common),
    /// Sample a field family on a grid and write the field CSV.
    Field(Common),
    /// Run the verification suite on a field family.
    Verify(Common),
    /// Estimate the gradient catastrophe time.
    Catastrophe(Common),
    /// Solve the Cauchy problem from data on a curve.
    Cauchy(Common),
}

#[derive(Args)]
struct Common {
    /// key=value config file
    #[arg(long, short)]
    config: Option<PathBuf>,
    /// Override a config key (repeatable)
    #[arg(long = "set", value_name = "KEY=VALUE")]
    set: Vec<String>,
    /// Further overrides as `--key value` or `--key=value`
    #[arg(trailing_var_arg = true, allow_hyphen_values = true, value_name = "OVERRIDES")]
    rest: Vec<String>,
}

/// Failure with its exit code: 1 for config problems, 2 for violated
/// preconditions, 3 for failed verification.
#[derive(Debug)]
pub struct CliError {
    pub code: u8,
    pub msg: String,
}

impl CliError {
    pub fn config(msg: impl Into<String>) -> Self {
        Self { code: 1, msg: msg.into() }
    }

    pub fn precondition(msg: impl Into<String>) -> Self {
        Self { code: 2, msg: msg.into() }
    }

    pub fn verification(msg: impl Into<String>) -> Self {
        Self { code: 3, msg: msg.into() }
    }
}

impl From<rankwave::Error> for CliError {
    fn from(e: rankwave::Error) -> Self {
        Self { code: if e.is_precondition() { 2 } else { 1 }, msg: e.to_string() }
    }
}

pub type CliResult<T = ()> = Result<T, CliError>;

/// Context shared by the commands: the merged config and where relative paths resolve.
pub struct Ctx {
    pub cfg: Config,
    pub base_dir: PathBuf,
}

impl Ctx {
    pub fn path(&self, p: &str) -> PathBuf {
        let p = PathBuf::from(p);
        if p.is_absolute() { p } else { self.base_dir.join(p) }
    }
}

fn overrides(rest: &[String]) -> CliResult<Vec<String>> {
    let mut out = Vec::new();
    let mut it = rest.iter();
    while let Some(a) = it.next() {
        let key = a.strip_prefix("--").ok_or_else(|| CliError::config(format!("unexpected argument {a:?}")))?;
        if key.contains('=') {
            out.push(key.to_string());
        } else {
            let v = it.next().ok_or_else(|| CliError::config(format!("--{key} needs a value")))?;
            out.push(format!("{key}={v}"));
        }
    }
    Ok(out)
}

fn load(c: &Common) -> CliResult<Ctx> {
    let (text, base_dir) = match &c.config {
        Some(p) => {
            let text = std::fs::read_to_string(p).map_err(|e| CliError::config(format!("{}: {e}", p.display())))?;
            let dir = p.parent().map(PathBuf::from).unwrap_or_default();
            (text, dir)
        }
        None => (String::new(), PathBuf::new()),
    };
    let mut cfg = Config::parse(&text)?;
    for s in c.set.iter().cloned().chain(overrides(&c.rest)?) {
        cfg.set_override(&s)?;
    }
    Ok(Ctx { cfg, base_dir })
}

fn init_threads() -> CliResult {
    if let Ok(v) = std::env::var("RANKWAVE_THREADS") {
        let n: usize = v.trim().parse().map_err(|_| CliError::config(format!("RANKWAVE_THREADS: not a count: {v:?}")))?;
        rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build_global()
            .map_err(|e| CliError::config(format!("thread pool: {e}")))?;
    }
    Ok(())
}

fn run(cli: Cli) -> CliResult {
    init_threads()?;
    match cli.command {
        Command::Elements(c) => cmd::elements::run(load(&c)?),
        Command::Field(c) => cmd::field::run(load(&c)?),
        Command::Verify(c) => cmd::verify::run(load(&c)?),
        Command::Catastrophe(c) => cmd::catastrophe::run(load(&c)?),
        Command::Cauchy(c) => cmd::cauchy::run(load(&c)?),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { ExitCode::from(1) } else { ExitCode::SUCCESS };
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {}", e.msg);
            ExitCode::from(e.code)
        }
    }
}
