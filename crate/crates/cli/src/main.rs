mod cache;
mod commands;
mod description;

use std::path::PathBuf;
use std::process::ExitCode;
use std::sync::Arc;
use std::time::Instant;

use clap::{Parser, ValueEnum};
use perftower::PresentedAlgebra;

use crate::commands::{Command, Settings};
use crate::description::{parse_description, Body, Description, Parameters};

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Json,
}

/// Decide tower, pair and tilt conditions described in a `.tower` file.
#[derive(Parser, Debug)]
#[command(name = "perftower", version)]
struct Cli {
    #[arg(value_enum)]
    command: Command,
    /// Description file; omit with `--pair`.
    file: Option<PathBuf>,
    /// Inline pair presentation such as `Z[y]/(3y,y^2)`.
    #[arg(long, requires = "f", conflicts_with = "file")]
    pair: Option<String>,
    /// The element `f` of an inline pair.
    #[arg(long)]
    f: Option<String>,
    /// Largest degree checked.
    #[arg(long, visible_alias = "n")]
    n_max: Option<u32>,
    /// Tilt depth.
    #[arg(long)]
    depth: Option<usize>,
    /// Base level for `gr`, `tilt` and `lemmas`.
    #[arg(long)]
    level: Option<usize>,
    #[arg(long)]
    seed: Option<u64>,
    #[arg(long)]
    sample_size: Option<usize>,
    #[arg(long, value_enum, default_value = "text")]
    format: Format,
    /// Skip the on-disk Gröbner basis cache.
    #[arg(long)]
    no_cache: bool,
}

fn fail(message: impl std::fmt::Display) -> ExitCode {
    eprintln!("error: {message}");
    ExitCode::from(2)
}

fn load(cli: &Cli) -> Result<(String, Description), String> {
    if let Some(text) = &cli.pair {
        let f = cli.f.as_deref().expect("clap enforces --f");
        let algebra = PresentedAlgebra::from_presentation(text).map_err(|e| e.to_string())?;
        let f_poly = algebra.ring().parse(f).map_err(|e| format!("--f: {e}"))?;
        let pair = perftower::PrincipalPair::new(algebra, f_poly).map_err(|e| e.to_string())?;
        return Ok((format!("{text} f={f}"), Description { body: Body::Pair(pair), parameters: Parameters::default() }));
    }
    let path = cli.file.as_ref().ok_or("missing description file (or --pair with --f)")?;
    let src = std::fs::read_to_string(path).map_err(|e| format!("{}: {e}", path.display()))?;
    let desc = parse_description(&src).map_err(|e| format!("{}:{e}", path.display()))?;
    Ok((path.display().to_string(), desc))
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let (input, desc) = match load(&cli) {
        Ok(v) => v,
        Err(e) => return fail(e),
    };
    let fp = &desc.parameters;
    let settings = Settings {
        n_max: cli.n_max.or(fp.n_max).unwrap_or(4),
        depth: cli.depth.or(fp.depth).unwrap_or(3),
        level: cli.level.or(fp.level),
        sample_size: cli.sample_size.or(fp.sample_size).unwrap_or(50),
        seed: cli.seed.or(fp.seed).unwrap_or(0),
    };
    if !cli.no_cache {
        match cache::DiskCache::open(&cache::DiskCache::default_dir()) {
            Ok(c) => perftower::groebner::set_basis_store(Some(Arc::new(c))),
            Err(e) => eprintln!("warning: cache disabled: {e}"),
        }
    }
    let start = Instant::now();
    let out = match commands::execute(cli.command, &input, &desc, &settings) {
        Ok(o) => o,
        Err(e) => return fail(e),
    };
    match cli.format {
        Format::Json => print!("{}", commands::render_json(&out)),
        Format::Text => print!("{}", commands::render_text(&out, start.elapsed().as_secs_f64())),
    }
    ExitCode::from(out.exit_status as u8)
}
