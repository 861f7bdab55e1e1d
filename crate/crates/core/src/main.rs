use std::io::{IsTerminal, Write};
use std::net::SocketAddr;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};

use cnd::error::{InputError, LayoutError};
use cnd::pipeline::{self, Pins};
use cnd::{Instance, LayoutParams};

#[derive(Parser)]
#[command(name = "cnd", version, about = "Lay out relational instances under constraint-based diagram specs")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Svg,
    Json,
    Both,
}

#[derive(Subcommand)]
enum Command {
    /// Render an instance under a spec.
    Layout {
        #[arg(short, long)]
        instance: PathBuf,
        #[arg(short, long)]
        spec: PathBuf,
        #[arg(short, long)]
        out: PathBuf,
        #[arg(long, value_enum, default_value = "svg")]
        format: Format,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        params: Option<PathBuf>,
    },
    /// Check a spec, and optionally its feasibility on an instance.
    Check {
        #[arg(short, long)]
        spec: PathBuf,
        #[arg(short, long)]
        instance: Option<PathBuf>,
        #[arg(long)]
        params: Option<PathBuf>,
    },
    /// Serve the HTTP API.
    Serve {
        #[arg(long, default_value_t = 3000)]
        port: u16,
    },
}

fn read(path: &Path) -> Result<String, LayoutError> {
    std::fs::read_to_string(path)
        .map_err(|e| InputError::new(format!("cannot read {}: {e}", path.display())).into())
}

fn load_params(path: Option<&Path>, seed: Option<u64>) -> Result<LayoutParams, LayoutError> {
    let mut params = match path {
        Some(p) => LayoutParams::from_file(p)?,
        None => LayoutParams::default(),
    };
    if let Some(seed) = seed {
        params.seed = seed;
    }
    Ok(params)
}

fn write(path: &Path, text: &str) -> Result<(), LayoutError> {
    std::fs::write(path, text).map_err(|e| InputError::new(format!("cannot write {}: {e}", path.display())).into())
}

fn layout(
    instance: &Path,
    spec: &Path,
    out: &Path,
    format: Format,
    seed: u64,
    params: Option<&Path>,
) -> Result<(), LayoutError> {
    let params = load_params(params, Some(seed))?;
    let source = read(spec)?;
    let instance = Instance::parse(&read(instance)?)?;
    let base = spec.canonicalize().ok().and_then(|p| p.parent().map(Path::to_path_buf));
    let outcome = pipeline::run_full(&instance, &source, &params, &Pins::new(), base.as_deref())?;
    let d = &outcome.diagram;
    match format {
        Format::Svg => write(out, &d.to_svg()),
        Format::Json => write(out, &d.to_json()),
        Format::Both => {
            write(&out.with_extension("svg"), &d.to_svg())?;
            write(&out.with_extension("json"), &d.to_json())
        }
    }
}

fn check(spec: &Path, instance: Option<&Path>, params: Option<&Path>) -> Result<(), LayoutError> {
    let params = load_params(params, None)?;
    let source = read(spec)?;
    let instance = instance.map(|p| read(p).and_then(|t| Ok(Instance::parse(&t)?))).transpose()?;
    pipeline::check(&source, instance.as_ref(), &params)
}

fn report(err: &LayoutError) {
    let mut stderr = std::io::stderr();
    let color = stderr.is_terminal() && std::env::var_os("CND_NO_COLOR").is_none();
    let _ = if color {
        writeln!(stderr, "\x1b[1;31m{err}\x1b[0m")
    } else {
        write!(stderr, "{err}")
    };
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Layout {
            instance,
            spec,
            out,
            format,
            seed,
            params,
        } => layout(&instance, &spec, &out, format, seed, params.as_deref()),
        Command::Check { spec, instance, params } => check(&spec, instance.as_deref(), params.as_deref()),
        Command::Serve { port } => {
            let runtime = tokio::runtime::Runtime::new().expect("tokio runtime");
            let addr = SocketAddr::from(([0, 0, 0, 0], port));
            eprintln!("listening on http://{addr}");
            return match runtime.block_on(cnd::service::serve(addr)) {
                Ok(()) => ExitCode::SUCCESS,
                Err(e) => {
                    eprintln!("{e}");
                    ExitCode::from(3)
                }
            };
        }
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(err) => {
            report(&err);
            ExitCode::from(err.exit_code() as u8)
        }
    }
}
