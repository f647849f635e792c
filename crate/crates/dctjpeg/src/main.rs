//! Command-line front end: encode, decode, metrics, and per-stage
//! inspection. All diagnostics go to stderr; stdout carries only the
//! requested data. Exit codes: 0 success, 1 pipeline error, 2 usage error.

use std::fs;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

use dctjpeg::{
    codec, metrics, read_pnm, write_pnm, EncodeParams, InspectData, InspectStage, QualityReport,
    RasterImage,
};

#[derive(Parser)]
#[command(name = "dctjpeg", version, about = "Baseline JPEG codec and quality metrics")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Compress a PGM/PPM file to baseline JFIF and report quality
    Encode(EncodeArgs),
    /// Decompress a baseline JFIF file to PGM/PPM
    Decode(DecodeArgs),
    /// Compare images (MSE/PSNR) and/or sizes (CR)
    Metrics(MetricsArgs),
    /// Dump one 8x8 luminance block at a chosen pipeline stage
    Inspect(InspectArgs),
}

#[derive(Args)]
struct EncodeArgs {
    /// Input image (binary PGM or PPM, maxval 255)
    input: String,
    /// Output JFIF file
    output: String,
    /// Quality 1..=100 (50 keeps the base quantization tables)
    #[arg(long, default_value_t = 50, value_parser = clap::value_parser!(u8).range(1..=100))]
    quality: u8,
    /// Chroma subsampling
    #[arg(long, value_enum, default_value_t = SubsampleArg::S444)]
    subsample: SubsampleArg,
    /// Transform blocks on a thread pool (same bytes, more cores)
    #[arg(long)]
    parallel: bool,
    /// Print the quality report as JSON instead of key=value lines
    #[arg(long)]
    json: bool,
}

#[derive(Args)]
struct DecodeArgs {
    /// Input JFIF file
    input: String,
    /// Output image (PGM for grayscale, PPM for color)
    output: String,
}

#[derive(Args)]
struct MetricsArgs {
    /// Reference image (PGM/PPM)
    a: Option<String>,
    /// Image to compare against the reference
    b: Option<String>,
    /// Report a compression ratio for these two byte counts
    #[arg(long, num_args = 2, value_names = ["N1", "N2"])]
    sizes: Option<Vec<u64>>,
    /// Print JSON instead of key=value lines
    #[arg(long)]
    json: bool,
}

#[derive(Args)]
struct InspectArgs {
    /// Input image (PGM/PPM)
    input: String,
    /// Pipeline stage to dump
    #[arg(long, value_enum)]
    stage: StageArg,
    /// Block coordinates as ROW,COL
    #[arg(long, default_value = "0,0", value_parser = parse_block)]
    block: (usize, usize),
    /// Quality used for the quantized stages
    #[arg(long, default_value_t = 50, value_parser = clap::value_parser!(u8).range(1..=100))]
    quality: u8,
}

#[derive(Clone, Copy, ValueEnum)]
enum SubsampleArg {
    #[value(name = "444")]
    S444,
    #[value(name = "420")]
    S420,
}

#[derive(Clone, Copy, ValueEnum)]
enum StageArg {
    Dct,
    Quant,
    Zigzag,
}

fn parse_block(s: &str) -> Result<(usize, usize), String> {
    let (r, c) = s.split_once(',').ok_or_else(|| format!("`{s}` is not ROW,COL"))?;
    let row = r.trim().parse().map_err(|_| format!("bad row `{r}`"))?;
    let col = c.trim().parse().map_err(|_| format!("bad column `{c}`"))?;
    Ok((row, col))
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(message) => {
            eprintln!("error: {message}");
            ExitCode::FAILURE
        }
    }
}

fn run(cli: Cli) -> Result<(), String> {
    match cli.command {
        Command::Encode(args) => encode(args),
        Command::Decode(args) => decode(args),
        Command::Metrics(args) => report_metrics(args),
        Command::Inspect(args) => inspect(args),
    }
}

fn load_image(path: &str) -> Result<RasterImage, String> {
    let bytes = fs::read(path).map_err(|e| format!("{path}: {e}"))?;
    read_pnm(&bytes).map_err(|e| format!("{path}: {e}"))
}

fn encode(args: EncodeArgs) -> Result<(), String> {
    let image = load_image(&args.input)?;
    let params = EncodeParams {
        quality: args.quality,
        subsampling: match args.subsample {
            SubsampleArg::S444 => codec::Subsampling::S444,
            SubsampleArg::S420 => codec::Subsampling::S420,
        },
        parallel: args.parallel,
    };
    let bytes = codec::encode_image(&image, &params).map_err(|e| e.to_string())?;
    fs::write(&args.output, &bytes).map_err(|e| format!("{}: {e}", args.output))?;

    let decoded = codec::decode_image(&bytes).map_err(|e| e.to_string())?;
    let report =
        QualityReport::new(&image, &decoded, bytes.len() as u64).map_err(|e| e.to_string())?;
    print_report(&report, args.json);
    Ok(())
}

fn decode(args: DecodeArgs) -> Result<(), String> {
    let bytes = fs::read(&args.input).map_err(|e| format!("{}: {e}", args.input))?;
    let image = codec::decode_image(&bytes).map_err(|e| e.to_string())?;
    fs::write(&args.output, write_pnm(&image)).map_err(|e| format!("{}: {e}", args.output))
}

fn report_metrics(args: MetricsArgs) -> Result<(), String> {
    let images = match (&args.a, &args.b) {
        (Some(a), Some(b)) => Some((load_image(a)?, load_image(b)?)),
        (None, None) => None,
        _ => return Err("metrics needs two image paths (or --sizes alone)".to_string()),
    };
    if images.is_none() && args.sizes.is_none() {
        return Err("metrics needs two image paths and/or --sizes N1 N2".to_string());
    }

    let mut lines: Vec<(&str, String)> = Vec::new();
    if let Some(sizes) = &args.sizes {
        let cr = metrics::compression_ratio(sizes[0], sizes[1]).map_err(|e| e.to_string())?;
        lines.push(("n1", sizes[0].to_string()));
        lines.push(("n2", sizes[1].to_string()));
        lines.push(("cr", format!("{cr:.6}")));
    }
    if let Some((a, b)) = &images {
        let mse = metrics::mse(a, b).map_err(|e| e.to_string())?;
        let psnr = metrics::psnr(a, b).map_err(|e| e.to_string())?;
        lines.push(("mse", format!("{mse:.6}")));
        lines.push(("psnr", fmt_db(psnr)));
    }
    if args.json {
        println!("{}", json_object(&lines));
    } else {
        for (k, v) in lines {
            println!("{k}={v}");
        }
    }
    Ok(())
}

fn fmt_db(psnr: f64) -> String {
    if psnr.is_infinite() {
        "inf".to_string()
    } else {
        format!("{psnr:.6}")
    }
}

fn print_report(report: &QualityReport, json: bool) {
    let lines: Vec<(&str, String)> = vec![
        ("n1", report.n1.to_string()),
        ("n2", report.n2.to_string()),
        ("cr", format!("{:.6}", report.cr)),
        ("mse", format!("{:.6}", report.mse)),
        ("psnr", fmt_db(report.psnr)),
    ];
    if json {
        println!("{}", json_object(&lines));
    } else {
        for (k, v) in lines {
            println!("{k}={v}");
        }
    }
}

/// Tiny JSON formatter for flat reports; "inf" stays a string.
fn json_object(lines: &[(&str, String)]) -> String {
    let fields: Vec<String> = lines
        .iter()
        .map(|(k, v)| {
            if v.parse::<f64>().map(f64::is_finite).unwrap_or(false) {
                format!("\"{k}\": {v}")
            } else {
                format!("\"{k}\": \"{v}\"")
            }
        })
        .collect();
    format!("{{{}}}", fields.join(", "))
}

fn inspect(args: InspectArgs) -> Result<(), String> {
    let image = load_image(&args.input)?;
    let stage = match args.stage {
        StageArg::Dct => InspectStage::Dct,
        StageArg::Quant => InspectStage::Quant,
        StageArg::Zigzag => InspectStage::Zigzag,
    };
    let (row, col) = args.block;
    let data =
        codec::inspect_block(&image, args.quality, stage, row, col).map_err(|e| e.to_string())?;
    match data {
        InspectData::Coefficients(m) => {
            for row in m {
                let cells: Vec<String> = row.iter().map(|v| format!("{v:.3}")).collect();
                println!("{}", cells.join(" "));
            }
        }
        InspectData::Quantized(m) => {
            for row in m {
                let cells: Vec<String> = row.iter().map(|v| v.to_string()).collect();
                println!("{}", cells.join(" "));
            }
        }
        InspectData::Sequence(seq) => {
            for chunk in seq.chunks(8) {
                let cells: Vec<String> = chunk.iter().map(|v| v.to_string()).collect();
                println!("{}", cells.join(" "));
            }
        }
    }
    Ok(())
}
