//! `analyze <file>`: prints a NO/MAYBE certificate for a TRS or LP file.

use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Duration;

use clap::{Parser, ValueEnum};

use nonterm::frontend::{
    analyze, emit_certificate, parse_lp, parse_trs, render_unfolded, unfold_for, AnalysisConfig, Format, Technique,
};
use nonterm::{Error, Mode};

#[derive(Debug, Clone, Copy, ValueEnum)]
enum FileFormat {
    Trs,
    Lp,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum TechniqueArg {
    Loop,
    Recpair,
}

#[derive(Debug, Parser)]
#[command(name = "analyze", about = "Prove non-termination of a rewrite system or logic program")]
struct Args {
    file: PathBuf,
    /// Input format; inferred from `.trs` / `.pl` when absent.
    #[arg(long, value_enum)]
    format: Option<FileFormat>,
    #[arg(long, value_enum, value_delimiter = ',')]
    technique: Vec<TechniqueArg>,
    /// Unfolding depth bound.
    #[arg(long, default_value_t = 4)]
    depth: usize,
    /// Maximal word length (default 1 on unfolded rules, 3 with --raw).
    #[arg(long)]
    max_word: Option<usize>,
    /// Loop iterations or macro-steps to simulate.
    #[arg(long, default_value_t = 5)]
    simulate: usize,
    /// Search the input rules directly, without unfolding.
    #[arg(long)]
    raw: bool,
    /// Wall-clock seconds per technique.
    #[arg(long, default_value_t = 10.0)]
    timeout: f64,
    #[arg(long)]
    json: bool,
    /// Also write the unfolded rules to this file.
    #[arg(long)]
    emit_unfolded: Option<PathBuf>,
}

fn run(args: Args) -> Result<String, Error> {
    let mode = match (args.format, args.file.extension().and_then(|e| e.to_str())) {
        (Some(FileFormat::Trs), _) | (None, Some("trs")) => Mode::Trs,
        (Some(FileFormat::Lp), _) | (None, Some("pl")) => Mode::Lp,
        _ => return Err(Error::InvalidArgument("cannot infer the format; pass --format trs|lp".into())),
    };
    let text = std::fs::read_to_string(&args.file)
        .map_err(|e| Error::InvalidArgument(format!("{}: {e}", args.file.display())))?;
    let program = match mode {
        Mode::Trs => parse_trs(&text)?,
        Mode::Lp => parse_lp(&text)?,
    };
    if !(args.timeout.is_finite() && args.timeout > 0.0) {
        return Err(Error::InvalidArgument("--timeout must be positive".into()));
    }
    let mut config = AnalysisConfig {
        depth: args.depth,
        max_word: args.max_word,
        simulate: args.simulate,
        raw: args.raw,
        timeout: Duration::from_secs_f64(args.timeout),
        ..AnalysisConfig::default()
    };
    if !args.technique.is_empty() {
        config.techniques = args
            .technique
            .iter()
            .map(|t| match t {
                TechniqueArg::Loop => Technique::Loop,
                TechniqueArg::Recpair => Technique::RecurrentPair,
            })
            .collect();
    }
    if let Some(path) = &args.emit_unfolded {
        let unfolded = match unfold_for(&program, &AnalysisConfig { raw: false, ..config.clone() }, config.depth) {
            Ok(u) => u,
            Err(Error::Truncated { partial, .. }) => *partial,
            Err(e) => return Err(e),
        };
        std::fs::write(path, render_unfolded(mode, &unfolded.rules))
            .map_err(|e| Error::InvalidArgument(format!("{}: {e}", path.display())))?;
    }
    let verdict = analyze(&program, &config);
    Ok(emit_certificate(&verdict, if args.json { Format::Json } else { Format::Text }))
}

fn main() -> ExitCode {
    match run(Args::parse()) {
        Ok(out) => {
            print!("{out}");
            ExitCode::SUCCESS
        }
        Err(e) => {
            eprintln!("analyze: {e}");
            ExitCode::FAILURE
        }
    }
}
