//! Command-line front end for the deviqa library.
//!
//! Exit codes: 0 success, 1 runtime/data error, 2 usage error.

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use deviqa::bench::{run_pooling_bench, write_bench_csv, BenchConfig, DEFAULT_SEED, MAX_LS_SIZE};
use deviqa::dataset::{evaluate_dataset, DatasetManifest};
use deviqa::index::expected_polarity;
use deviqa::{
    find_index, load_image, score_pair, IndexConfig, IndexSpec, MapKind, Mct, Polarity,
    PoolingSpec,
};

mod weighted;

#[derive(Parser)]
#[command(name = "deviqa", version, about = "Full-reference image quality assessment with deviation pooling")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Score a (reference, distorted) image pair with an index
    Score {
        /// Reference image (8-bit PNG or BMP)
        reference: PathBuf,
        /// Distorted image with the same dimensions
        distorted: PathBuf,
        #[command(flatten)]
        index: IndexArgs,
    },
    /// Evaluate an index against a `ref,dist,mos[,tag]` manifest
    Evaluate {
        /// Manifest CSV; image paths are relative to its directory
        manifest: PathBuf,
        #[command(flatten)]
        index: IndexArgs,
        /// Where to write the JSON report
        #[arg(long)]
        output: PathBuf,
        /// Optional flat CSV of per-entry scores
        #[arg(long)]
        scores_csv: Option<PathBuf>,
        /// Polarity of the subjective scale (MOS: higher, DMOS: lower)
        #[arg(long, default_value = "higher-is-better")]
        mos_polarity: PolarityArg,
    },
    /// Time mean/SD/MAD/joint pooling over synthetic LS buffers
    Bench {
        /// Comma-separated buffer sizes in elements (default 2^20..2^24)
        #[arg(long, value_delimiter = ',')]
        sizes: Option<Vec<usize>>,
        /// Timed runs per size and strategy (median is reported)
        #[arg(long, default_value_t = 20)]
        runs: usize,
        /// Seed for the synthetic buffer
        #[arg(long, default_value_t = DEFAULT_SEED)]
        seed: u64,
        /// Write the CSV here instead of stdout
        #[arg(long)]
        output: Option<PathBuf>,
    },
    /// Combine evaluation reports into weighted average SRC/PCC
    WeightedAvg {
        /// JSON reports produced by `evaluate`
        #[arg(required = true)]
        reports: Vec<PathBuf>,
        /// Comma-separated positive weights, one per report
        /// (dataset image counts by convention, e.g. 779,886,1700)
        #[arg(long, value_delimiter = ',', required = true)]
        weights: Vec<f64>,
    },
}

#[derive(Args)]
struct IndexArgs {
    /// Built-in index name (mse, mse-sd, mse-mad, ssim, ssim-sd, ssim-mad,
    /// gms-mean, gmsd, gms-mad, gms-dd)
    #[arg(long)]
    index: Option<String>,
    /// JSON file describing a custom index (alternative to --index)
    #[arg(long, value_name = "FILE", conflicts_with = "index")]
    index_config: Option<PathBuf>,
    /// Override the pooling strategy
    #[arg(long, value_enum)]
    pooling: Option<PoolingArg>,
    /// Blend factor for dd pooling (0 = MAD, 1 = SD)
    #[arg(long)]
    alpha: Option<f64>,
    /// Deviation order for minkowski pooling
    #[arg(long)]
    rho: Option<f64>,
    /// Central tendency for minkowski pooling
    #[arg(long, value_enum)]
    mct: Option<MctArg>,
    /// Stability constant of the gms map
    #[arg(long)]
    c: Option<f64>,
    /// Skip the 2x downsampling preprocessing step
    #[arg(long)]
    no_downsample: bool,
}

#[derive(Clone, Copy, ValueEnum)]
enum PoolingArg {
    Mean,
    Sd,
    Mad,
    Dd,
    Minkowski,
}

#[derive(Clone, Copy, ValueEnum)]
enum MctArg {
    Mean,
    Median,
}

#[derive(Clone, Copy, ValueEnum)]
enum PolarityArg {
    #[value(name = "higher-is-better", alias = "higher")]
    Higher,
    #[value(name = "lower-is-better", alias = "lower")]
    Lower,
}

impl From<PolarityArg> for Polarity {
    fn from(p: PolarityArg) -> Self {
        match p {
            PolarityArg::Higher => Polarity::HigherIsBetter,
            PolarityArg::Lower => Polarity::LowerIsBetter,
        }
    }
}

enum CliError {
    Usage(String),
    Runtime(String),
}

impl CliError {
    fn code(&self) -> u8 {
        match self {
            CliError::Usage(_) => 2,
            CliError::Runtime(_) => 1,
        }
    }

    fn message(&self) -> &str {
        match self {
            CliError::Usage(m) | CliError::Runtime(m) => m,
        }
    }
}

impl From<deviqa::Error> for CliError {
    fn from(e: deviqa::Error) -> Self {
        match e {
            // asking for an index that does not exist is a usage problem
            deviqa::Error::UnknownIndex(_) => CliError::Usage(e.to_string()),
            other => CliError::Runtime(other.to_string()),
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {}", e.message());
            ExitCode::from(e.code())
        }
    }
}

fn run(cli: Cli) -> Result<(), CliError> {
    match cli.command {
        Command::Score {
            reference,
            distorted,
            index,
        } => {
            let spec = resolve_index(&index)?;
            let r = load_image(&reference)?;
            let d = load_image(&distorted)?;
            let score = score_pair(&r, &d, &spec)?;
            println!("{} {} {}", score.index_name, score.value, spec.polarity);
            Ok(())
        }
        Command::Evaluate {
            manifest,
            index,
            output,
            scores_csv,
            mos_polarity,
        } => {
            let spec = resolve_index(&index)?;
            let (manifest, malformed) =
                DatasetManifest::from_csv_path(&manifest, mos_polarity.into())?;
            for bad in &malformed {
                eprintln!("manifest row {} skipped: {}", bad.row, bad.message);
            }
            if manifest.entries.is_empty() {
                return Err(CliError::Runtime("no usable manifest rows".to_string()));
            }
            let report = evaluate_dataset(&manifest, &spec)?;
            std::fs::write(&output, report.to_json())
                .map_err(|e| CliError::Runtime(format!("writing {}: {e}", output.display())))?;
            if let Some(csv_path) = scores_csv {
                let mut buf = Vec::new();
                report
                    .write_scores_csv(&mut buf)
                    .map_err(|e| CliError::Runtime(e.to_string()))?;
                std::fs::write(&csv_path, buf)
                    .map_err(|e| CliError::Runtime(format!("writing {}: {e}", csv_path.display())))?;
            }
            println!(
                "{} SRC {:.4} PCC {:.4} RMSE {:.4} (entries {}, excluded {})",
                report.index_name,
                report.src,
                report.pcc,
                report.rmse,
                report.entries.len(),
                report.excluded.len()
            );
            Ok(())
        }
        Command::Bench {
            sizes,
            runs,
            seed,
            output,
        } => {
            let config = BenchConfig {
                sizes: sizes.unwrap_or_else(|| BenchConfig::default().sizes),
                runs,
                seed,
            };
            // config problems (too few runs, non-increasing or oversized
            // sizes) are usage errors; the library refuses them pre-allocation
            config
                .validate()
                .map_err(|e| CliError::Usage(format!("{e} (maximum LS size is {MAX_LS_SIZE})")))?;
            let rows = run_pooling_bench(&config)?;
            match output {
                Some(path) => {
                    let mut buf = Vec::new();
                    write_bench_csv(&rows, &mut buf).map_err(|e| CliError::Runtime(e.to_string()))?;
                    std::fs::write(&path, buf)
                        .map_err(|e| CliError::Runtime(format!("writing {}: {e}", path.display())))?;
                }
                None => {
                    write_bench_csv(&rows, std::io::stdout().lock())
                        .map_err(|e| CliError::Runtime(e.to_string()))?;
                }
            }
            Ok(())
        }
        Command::WeightedAvg { reports, weights } => weighted::run(&reports, &weights),
    }
}

fn resolve_index(args: &IndexArgs) -> Result<IndexSpec, CliError> {
    let base = match (&args.index, &args.index_config) {
        (Some(name), None) => find_index(name)?,
        (None, Some(path)) => {
            let text = std::fs::read_to_string(path)
                .map_err(|e| CliError::Runtime(format!("reading {}: {e}", path.display())))?;
            IndexConfig::from_json(&text)
                .and_then(IndexConfig::into_spec)
                .map_err(|e| CliError::Usage(e.to_string()))?
        }
        _ => {
            return Err(CliError::Usage(
                "exactly one of --index or --index-config is required".to_string(),
            ))
        }
    };
    apply_overrides(base, args)
}

fn apply_overrides(mut spec: IndexSpec, args: &IndexArgs) -> Result<IndexSpec, CliError> {
    if let Some(pooling) = args.pooling {
        spec.pooling = match pooling {
            PoolingArg::Mean => PoolingSpec::Mean,
            PoolingArg::Sd => PoolingSpec::Sd,
            PoolingArg::Mad => PoolingSpec::Mad,
            PoolingArg::Dd => PoolingSpec::Dd { alpha: 0.5 },
            PoolingArg::Minkowski => PoolingSpec::MinkowskiDeviation {
                rho: args
                    .rho
                    .ok_or_else(|| CliError::Usage("--pooling minkowski requires --rho".to_string()))?,
                mct: match args.mct {
                    None | Some(MctArg::Mean) => Mct::Mean,
                    Some(MctArg::Median) => Mct::Median,
                },
            },
        };
    }
    if let Some(alpha) = args.alpha {
        match &mut spec.pooling {
            PoolingSpec::Dd { alpha: a } => *a = alpha,
            _ => return Err(CliError::Usage("--alpha only applies to dd pooling".to_string())),
        }
    }
    if args.rho.is_some() || args.mct.is_some() {
        match &mut spec.pooling {
            PoolingSpec::MinkowskiDeviation { rho, mct } => {
                if let Some(r) = args.rho {
                    *rho = r;
                }
                if let Some(m) = args.mct {
                    *mct = match m {
                        MctArg::Mean => Mct::Mean,
                        MctArg::Median => Mct::Median,
                    };
                }
            }
            _ => {
                return Err(CliError::Usage(
                    "--rho/--mct only apply to minkowski pooling".to_string(),
                ))
            }
        }
    }
    if let Some(c) = args.c {
        if spec.map_kind != MapKind::Gms {
            return Err(CliError::Usage("--c only applies to gms-map indices".to_string()));
        }
        spec.gms.c = c;
    }
    if args.no_downsample {
        spec.preprocess.downsample2 = false;
    }
    spec.polarity = expected_polarity(spec.map_kind, &spec.pooling);
    spec.validate().map_err(|e| CliError::Usage(e.to_string()))?;
    Ok(spec)
}
