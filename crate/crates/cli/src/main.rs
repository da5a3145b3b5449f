use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use clap::{Parser, Subcommand, ValueEnum};
use qkit::MonoidTable;
use qkit_cli::carrier::CarrierChoice;
use qkit_cli::compress::{compress, Coefficients, CompressOptions, Method, PartitionFile};
use qkit_cli::metrics::compare;
use qkit_cli::morph::{morph, parse_mode, MorphOp, MorphOptions, SeFile};
use qkit_cli::pgm::{PgmFormat, PgmImage};
use qkit_cli::suites::{self, LawsOptions};

#[derive(Parser)]
#[command(name = "qkit", version, about = "Quantale-valued transforms, fuzzy compression and morphology")]
struct Cli {
    /// Seed for randomized suites.
    #[arg(long, global = true, env = "QKIT_SEED", default_value_t = 0)]
    seed: u64,

    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    P2,
    P5,
}

impl From<Format> for PgmFormat {
    fn from(f: Format) -> Self {
        match f {
            Format::P2 => PgmFormat::Plain,
            Format::P5 => PgmFormat::Raw,
        }
    }
}

#[derive(Subcommand)]
enum Cmd {
    /// Compress a PGM image into F-transform coefficients.
    Compress {
        input: PathBuf,
        #[arg(short, long)]
        output: PathBuf,
        /// luk or partition.
        #[arg(long, default_value = "luk")]
        method: Method,
        /// Basis functions per axis (luk method).
        #[arg(long, default_value_t = 9)]
        n: usize,
        /// Partition file for the partition method.
        #[arg(long)]
        partition: Option<PathBuf>,
        /// chain:<d> or float; defaults to a chain fitted to maxval.
        #[arg(long)]
        carrier: Option<CarrierChoice>,
    },
    /// Rebuild an image from a coefficient file.
    Reconstruct {
        input: PathBuf,
        #[arg(short, long)]
        output: PathBuf,
        #[arg(long, value_enum, default_value = "p2")]
        format: Format,
    },
    /// Dilate, erode, open or close an image by a structuring element.
    Morph {
        /// dilate, erode, open or close.
        op: MorphOp,
        input: PathBuf,
        #[arg(long)]
        se: PathBuf,
        #[arg(short, long)]
        output: PathBuf,
        /// wrap or bounded.
        #[arg(long, default_value = "wrap", value_parser = parse_mode)]
        mode: qkit::morphology::GridMode,
        #[arg(long)]
        carrier: Option<CarrierChoice>,
        /// Verify the dilation/erosion adjunction on this image.
        #[arg(long)]
        check_adjunction: bool,
    },
    /// Run law suites; exits non-zero if any law fails.
    Laws {
        /// Comma-separated: quantale, module, transform, morphology, or all.
        #[arg(long, default_value = "all")]
        suite: String,
        #[arg(long)]
        carrier: Option<CarrierChoice>,
        /// Samples per randomized family.
        #[arg(long, default_value_t = 2000)]
        samples: usize,
        /// Also check the powerset quantale of this monoid table.
        #[arg(long)]
        monoid: Option<PathBuf>,
    },
    /// Compare two images: PSNR, maximum and mean absolute error.
    Metrics {
        original: PathBuf,
        reconstructed: PathBuf,
        #[arg(long)]
        csv: bool,
    },
}

fn run(cli: Cli) -> Result<bool> {
    match cli.cmd {
        Cmd::Compress { input, output, method, n, partition, carrier } => {
            let img = PgmImage::read(&input)?;
            let partition = match (method, partition) {
                (Method::Partition, Some(p)) => Some(PartitionFile::read(&p)?),
                (Method::Partition, None) => bail!("--method partition needs --partition <file>"),
                (Method::Luk, _) => None,
            };
            let (coeffs, warnings) = compress(&img, &CompressOptions { method, n, carrier, partition })?;
            for w in warnings {
                eprintln!("warning: {w}");
            }
            std::fs::write(&output, coeffs.to_text()).with_context(|| format!("writing {}", output.display()))?;
        }
        Cmd::Reconstruct { input, output, format } => {
            Coefficients::read(&input)?.reconstruct()?.write(&output, format.into())?;
        }
        Cmd::Morph { op, input, se, output, mode, carrier, check_adjunction } => {
            let img = PgmImage::read(&input)?;
            let se = SeFile::read(&se)?;
            let out = morph(&img, &se, &MorphOptions { op, mode, carrier, check_adjunction })?;
            for w in &out.warnings {
                eprintln!("warning: {w}");
            }
            out.image.write(&output, img.format)?;
            if let Some(rep) = out.check {
                print!("{rep}");
                println!("adjunction: {}", if rep.is_ok() { "pass" } else { "FAIL" });
                return Ok(rep.is_ok());
            }
        }
        Cmd::Laws { suite, carrier, samples, monoid } => {
            let monoid = match monoid {
                Some(p) => {
                    let text = std::fs::read_to_string(&p).with_context(|| format!("reading {}", p.display()))?;
                    Some(MonoidTable::parse(&text)?)
                }
                None => None,
            };
            let opts = LawsOptions { suites: suites::parse_suites(&suite)?, carrier, seed: cli.seed, samples, monoid };
            let secs = suites::run(&opts)?;
            print!("{}", suites::render(&secs));
            return Ok(suites::all_pass(&secs));
        }
        Cmd::Metrics { original, reconstructed, csv } => {
            let m = compare(&PgmImage::read(&original)?, &PgmImage::read(&reconstructed)?)?;
            print!("{}", if csv { m.to_csv() } else { m.to_text() });
        }
    }
    Ok(true)
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}
