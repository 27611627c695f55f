use std::fs::File;
use std::io::BufWriter;
use std::num::NonZeroUsize;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use fse::csv::{format_db, write_sweep};
use fse::parallel::conceal_parallel;
use fse::pgm::{read_pgm, write_pgm};
use fse_core::{
    gen_mask, loss_rate, mask_from_image, psnr, sweep, ConcealConfig, LossMask, Method,
    PatternKind, PatternSpec,
};

#[derive(Parser)]
#[command(name = "fse", version, about = "Frequency selective extrapolation for lost image blocks")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Generate a block-loss mask (0 = lost, 255 = known).
    GenMask(GenMaskArgs),
    /// Conceal the lost blocks of an image.
    Conceal(ConcealArgs),
    /// PSNR against iteration count, written as CSV.
    Sweep(SweepArgs),
    /// Whole-image PSNR between two images.
    Psnr(PsnrArgs),
}

#[derive(Clone, Copy, ValueEnum)]
enum Pattern {
    Dispersed,
    Consecutive,
}

impl From<Pattern> for PatternKind {
    fn from(p: Pattern) -> Self {
        match p {
            Pattern::Dispersed => PatternKind::Dispersed,
            Pattern::Consecutive => PatternKind::Consecutive,
        }
    }
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum MethodArg {
    Fse,
    Xfse,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum SweepMethod {
    Fse,
    Xfse,
    Both,
}

#[derive(Args)]
struct GenMaskArgs {
    #[arg(long, value_enum)]
    pattern: Pattern,
    #[arg(long)]
    width: usize,
    #[arg(long)]
    height: usize,
    #[arg(long, default_value_t = 16)]
    block_size: usize,
    /// Randomize the dispersed grid phases.
    #[arg(long)]
    seed: Option<u64>,
    #[arg(short, long)]
    output: PathBuf,
}

#[derive(Args, Clone)]
struct ModelArgs {
    #[arg(long, default_value_t = 16)]
    block_size: usize,
    #[arg(long, default_value_t = 48)]
    area_size: usize,
    /// Transform size; the area is zero-weight padded to it.
    #[arg(long)]
    transform_size: Option<usize>,
    #[arg(long, default_value_t = 1000)]
    iterations: usize,
    #[arg(long, default_value_t = 0.25)]
    gamma: f64,
    #[arg(long, default_value_t = 0.8)]
    rho_hat: f64,
    #[arg(long, default_value_t = 0.5)]
    delta: f64,
    #[arg(long = "filter-g", default_value_t = fse_core::filter::DEFAULT_GAIN)]
    filter_gain: f64,
    #[arg(long = "filter-f0", default_value_t = fse_core::filter::DEFAULT_F0)]
    filter_f0: f64,
    /// Force the unit response (XFSE reduces to FSE).
    #[arg(long)]
    no_filter: bool,
    /// Subtract the undamped projection from the residual.
    #[arg(long)]
    undamped_residual: bool,
    #[arg(long, default_value = "1")]
    threads: NonZeroUsize,
}

impl ModelArgs {
    fn config(&self, method: Method) -> ConcealConfig {
        ConcealConfig {
            block_size: self.block_size,
            area_size: self.area_size,
            transform_size: self.transform_size,
            method,
            iterations: self.iterations,
            gamma: self.gamma,
            rho_hat: self.rho_hat,
            delta: self.delta,
            filter_gain: self.filter_gain,
            filter_f0: self.filter_f0,
            unit_filter: self.no_filter,
            gamma_on_residual: !self.undamped_residual,
        }
    }
}

#[derive(Args)]
struct ConcealArgs {
    #[arg(short, long)]
    input: PathBuf,
    #[arg(short, long)]
    mask: PathBuf,
    #[arg(long, value_enum, default_value = "xfse")]
    method: MethodArg,
    /// Print the PSNR of the output against this image.
    #[arg(long)]
    reference: Option<PathBuf>,
    #[arg(short, long)]
    output: PathBuf,
    #[command(flatten)]
    model: ModelArgs,
}

#[derive(Args)]
struct SweepArgs {
    /// Original (reference) image.
    #[arg(short, long)]
    input: PathBuf,
    #[arg(short, long, required_unless_present = "pattern", conflicts_with = "pattern")]
    mask: Option<PathBuf>,
    /// Generate the mask instead of reading one.
    #[arg(long, value_enum)]
    pattern: Option<Pattern>,
    #[arg(long, value_enum, default_value = "both")]
    method: SweepMethod,
    /// `start:step:stop` or a comma-separated list of iteration counts.
    #[arg(long, value_parser = parse_grid)]
    grid: IterationGrid,
    /// CSV path; with `--method both` the method name is appended to the stem.
    #[arg(short, long)]
    output: PathBuf,
    #[command(flatten)]
    model: ModelArgs,
}

#[derive(Args)]
struct PsnrArgs {
    reference: PathBuf,
    test: PathBuf,
}

#[derive(Clone, Debug)]
struct IterationGrid(Vec<usize>);

fn parse_grid(s: &str) -> Result<IterationGrid, String> {
    let parse = |v: &str| v.trim().parse::<usize>().map_err(|e| format!("bad count {v:?}: {e}"));
    let grid: Vec<usize> = match s.split(':').collect::<Vec<_>>().as_slice() {
        [start, step, stop] => {
            let (start, step, stop) = (parse(start)?, parse(step)?, parse(stop)?);
            if step == 0 {
                return Err("grid step must be positive".into());
            }
            (start..=stop).step_by(step).collect()
        }
        [_] => s.split(',').filter(|v| !v.trim().is_empty()).map(parse).collect::<Result<_, _>>()?,
        _ => return Err("expected start:step:stop or a comma-separated list".into()),
    };
    if grid.is_empty() || grid.contains(&0) {
        return Err("iteration grid must be non-empty with positive counts".into());
    }
    if grid.windows(2).any(|w| w[0] >= w[1]) {
        return Err("iteration grid must be strictly ascending".into());
    }
    Ok(IterationGrid(grid))
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::GenMask(args) => cmd_gen_mask(args),
        Command::Conceal(args) => cmd_conceal(args),
        Command::Sweep(args) => cmd_sweep(args),
        Command::Psnr(args) => cmd_psnr(args),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(1)
        }
    }
}

type CmdResult = Result<(), Box<dyn std::error::Error>>;

fn cmd_gen_mask(args: GenMaskArgs) -> CmdResult {
    let spec = PatternSpec { kind: args.pattern.into(), block_size: args.block_size, seed: args.seed };
    let mask = gen_mask(&spec, args.width, args.height)?;
    write_pgm(&mask.to_image(), &args.output)?;
    println!("{:.4}", loss_rate(&mask));
    Ok(())
}

fn load_mask(path: &Path) -> Result<LossMask, Box<dyn std::error::Error>> {
    Ok(mask_from_image(&read_pgm(path)?)?)
}

fn cmd_conceal(args: ConcealArgs) -> CmdResult {
    let img = read_pgm(&args.input)?;
    let mask = load_mask(&args.mask)?;
    let reference = args.reference.as_deref().map(read_pgm).transpose()?;
    let method = match args.method {
        MethodArg::Fse => Method::Fse,
        MethodArg::Xfse => Method::Xfse,
    };
    let cfg = args.model.config(method);
    let out = conceal_parallel(&img, &mask, &cfg, args.model.threads)?;
    for b in &out.isolated {
        eprintln!("warning: block at ({}, {}) has no usable support, filled with 128", b.x, b.y);
    }
    write_pgm(&out.image, &args.output)?;
    eprintln!(
        "concealed {} blocks, mean weighted residual {:.6e}",
        out.blocks, out.mean_weighted_error
    );
    if let Some(reference) = reference {
        println!("{}", format_db(psnr(&reference, &out.image.quantized())?, 2));
    }
    Ok(())
}

fn cmd_sweep(args: SweepArgs) -> CmdResult {
    let img = read_pgm(&args.input)?;
    let mask = match (&args.mask, args.pattern) {
        (Some(path), _) => load_mask(path)?,
        (None, Some(p)) => {
            let spec = PatternSpec { kind: p.into(), block_size: args.model.block_size, seed: None };
            gen_mask(&spec, img.width(), img.height())?
        }
        (None, None) => unreachable!("clap requires a mask or a pattern"),
    };
    let methods: &[(Method, &str)] = match args.method {
        SweepMethod::Fse => &[(Method::Fse, "fse")],
        SweepMethod::Xfse => &[(Method::Xfse, "xfse")],
        SweepMethod::Both => &[(Method::Fse, "fse"), (Method::Xfse, "xfse")],
    };
    for &(method, name) in methods {
        let cfg = args.model.config(method);
        let records = sweep(&img, &mask, &cfg, &args.grid.0)?;
        let path = if methods.len() > 1 { suffixed(&args.output, name) } else { args.output.clone() };
        write_sweep(BufWriter::new(File::create(&path)?), &records)?;
        if let Some(best) = records.iter().max_by(|a, b| a.psnr.total_cmp(&b.psnr)) {
            eprintln!(
                "{name}: best {} dB at {} iterations -> {}",
                format_db(best.psnr, 2),
                best.iteration,
                path.display()
            );
        }
    }
    Ok(())
}

fn suffixed(path: &Path, method: &str) -> PathBuf {
    let stem = path.file_stem().and_then(|s| s.to_str()).unwrap_or("sweep");
    let ext = path.extension().and_then(|s| s.to_str()).unwrap_or("csv");
    path.with_file_name(format!("{stem}.{method}.{ext}"))
}

fn cmd_psnr(args: PsnrArgs) -> CmdResult {
    let a = read_pgm(&args.reference)?;
    let b = read_pgm(&args.test)?;
    println!("{}", format_db(psnr(&a, &b)?, 2));
    Ok(())
}
