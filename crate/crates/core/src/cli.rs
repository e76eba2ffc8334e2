//! Command-line front end.
//!
//! Exit codes: 0 on success, 1 when a pipeline or I/O step fails, 2 for
//! invalid arguments. Every failure prints exactly one line to stderr.

use std::ffi::OsString;
use std::io::Write;
use std::path::PathBuf;

use clap::{Parser, Subcommand, ValueEnum};

use crate::bridge::{load_config, run_demo, run_pipeline, DemoConfig, StageConfig};
use crate::endpoint::{fft_execute, FftConfig};
use crate::error::Result;
use crate::fft::Direction;
use crate::imageio::{read_pgm, write_image, ImageConfig, Scaling};
use crate::Mesh64;

#[derive(Debug, Parser)]
#[command(name = "insitu-fft", version, about = "In situ FFT analysis pipeline")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Run a pipeline described by a <sensei> XML file.
    Run {
        #[arg(long)]
        config: PathBuf,
        #[arg(long, default_value_t = 1, value_parser = positive)]
        steps: usize,
        #[arg(long, default_value = "./out")]
        out: PathBuf,
        /// Override the rank count of every fft stage.
        #[arg(long, value_parser = positive)]
        ranks: Option<usize>,
    },
    /// Noisy field -> FFT -> bandpass -> inverse FFT, one image per stage.
    Demo {
        #[arg(long, default_value = "200x200", value_parser = grid)]
        grid: (usize, usize),
        #[arg(long, default_value_t = 42)]
        seed: u64,
        #[arg(long, default_value_t = 0.0075, value_parser = fraction)]
        keep: f64,
        #[arg(long, default_value_t = 1, value_parser = positive)]
        ranks: usize,
        #[arg(long, default_value_t = 1, value_parser = positive)]
        steps: usize,
        #[arg(long, default_value = "./out")]
        out: PathBuf,
    },
    /// Transform a PGM image and write its log-magnitude spectrum.
    Fft {
        #[arg(long)]
        input: PathBuf,
        #[arg(long)]
        output: PathBuf,
        #[arg(long, value_enum, default_value_t = CliDirection::Forward)]
        direction: CliDirection,
        #[arg(long, default_value_t = 1, value_parser = positive)]
        ranks: usize,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum CliDirection {
    Forward,
    Backward,
}

impl From<CliDirection> for Direction {
    fn from(d: CliDirection) -> Self {
        match d {
            CliDirection::Forward => Direction::Forward,
            CliDirection::Backward => Direction::Backward,
        }
    }
}

fn positive(s: &str) -> std::result::Result<usize, String> {
    match s.parse::<usize>() {
        Ok(n) if n >= 1 => Ok(n),
        _ => Err(format!("expected a positive integer, got {s:?}")),
    }
}

fn fraction(s: &str) -> std::result::Result<f64, String> {
    match s.parse::<f64>() {
        Ok(f) if (0.0..=1.0).contains(&f) => Ok(f),
        _ => Err(format!("expected a number in [0, 1], got {s:?}")),
    }
}

fn grid(s: &str) -> std::result::Result<(usize, usize), String> {
    let (a, b) = s
        .split_once(['x', 'X'])
        .ok_or_else(|| format!("expected ROWSxCOLS, got {s:?}"))?;
    Ok((positive(a)?, positive(b)?))
}

/// Parses `args` (program name first) and runs the selected subcommand.
pub fn run<I, A>(args: I, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = A>,
    A: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            if !e.use_stderr() {
                let _ = write!(stdout, "{e}");
                return 0;
            }
            let text = e.to_string();
            let line = text
                .lines()
                .find(|l| !l.trim().is_empty())
                .unwrap_or("invalid arguments");
            let _ = writeln!(stderr, "{}", line.trim_end());
            return 2;
        }
    };
    match execute(cli.command, stdout) {
        Ok(()) => 0,
        Err(e) => {
            let _ = writeln!(stderr, "error: {}", e.to_string().replace('\n', " "));
            1
        }
    }
}

fn execute(command: Command, stdout: &mut dyn Write) -> Result<()> {
    match command {
        Command::Run {
            config,
            steps,
            out,
            ranks,
        } => {
            let mut spec = load_config(&config)?;
            if let Some(ranks) = ranks {
                for stage in &mut spec.stages {
                    if let StageConfig::Fft(f) = stage {
                        f.ranks = ranks;
                    }
                }
            }
            let report = run_pipeline(&spec, steps, &out)?;
            let _ = write!(stdout, "{report}");
        }
        Command::Demo {
            grid: (ny0, ny1),
            seed,
            keep,
            ranks,
            steps,
            out,
        } => {
            let cfg = DemoConfig {
                ny0,
                ny1,
                seed,
                keep_fraction: keep,
                ranks,
                steps,
            };
            let outcome = run_demo(&cfg, &out)?;
            let _ = write!(stdout, "{}", outcome.report);
            let _ = writeln!(
                stdout,
                "rmse_noisy={:.6} rmse_denoised={:.6} kept={}",
                outcome.rmse_noisy()?,
                outcome.rmse_denoised()?,
                outcome.surviving_coefficients()?
            );
        }
        Command::Fft {
            input,
            output,
            direction,
            ranks,
        } => {
            let field = read_pgm::<f64>(&input, "pixels")?;
            let (ny0, ny1) = field.dims();
            let mesh = Mesh64::new("image", ny0, ny1)?.with_field(field)?;
            let cfg = FftConfig::new("image", "pixels", direction.into()).with_ranks(ranks);
            let spectrum = fft_execute(mesh, &cfg)?;
            let written = write_image(
                &spectrum,
                &ImageConfig::new("image", "pixels", &output, Scaling::LogMagnitude),
            )?;
            let _ = writeln!(stdout, "wrote {}", written.display());
        }
    }
    Ok(())
}
