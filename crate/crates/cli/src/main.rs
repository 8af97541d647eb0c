use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::sync::Arc;

use clap::{Parser, Subcommand};
use mvfconley::pipeline::{
    disk, env_seed, exit_code, gen_hopf_fields_on, hopf_grid, parse_lambdas, read_complex,
    read_field, read_set, render_barcode, run_persist, write_complex, write_field, write_set,
    Format, RunConfig, RunMode, DEFAULT_EXTENT,
};
use mvfconley::{validate_index_pair, IndexPair, Mode, Result};

#[derive(Parser)]
#[command(
    name = "mvfconley",
    version,
    about = "Conley index persistence for multivector fields"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Build the zigzag of index pairs for a field sequence and write its barcode.
    Persist {
        #[arg(long)]
        complex: PathBuf,
        /// Field files in sequence order, comma separated.
        #[arg(long, value_delimiter = ',', required = true)]
        fields: Vec<PathBuf>,
        #[arg(long)]
        neighborhood: PathBuf,
        #[arg(long)]
        delta: Option<usize>,
        #[arg(long, default_value = "fixed")]
        mode: RunMode,
        #[arg(long)]
        out: PathBuf,
        #[arg(long)]
        svg: Option<PathBuf>,
        /// Shuffles simplex operations inside each arrow; overridden by MVF_SEED.
        #[arg(long)]
        seed: Option<u64>,
        /// Also print the barcode: text or steps.
        #[arg(long)]
        print: Option<Format>,
    },
    /// Sample the Hopf normal form on a grid and write a complex, one field per λ, and a disk N.
    GenHopf {
        #[arg(long, default_value_t = 30)]
        grid: usize,
        /// `a:b:steps` or a comma list.
        #[arg(long, allow_hyphen_values = true)]
        lambdas: String,
        #[arg(long)]
        out_dir: PathBuf,
        #[arg(long, default_value_t = DEFAULT_EXTENT)]
        extent: f64,
        /// Radius of the disk written as the neighborhood.
        #[arg(long, default_value_t = 1.4)]
        radius: f64,
        /// Relative size of the uniform perturbation added to each sample.
        #[arg(long, default_value_t = 0.0)]
        noise: f64,
        /// Seeds the noise; overridden by MVF_SEED.
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Validate a pair against the invariant part of `P \ E`.
    CheckPair {
        #[arg(long)]
        complex: PathBuf,
        #[arg(long)]
        field: PathBuf,
        #[arg(long)]
        p: PathBuf,
        #[arg(long)]
        e: PathBuf,
        /// Validate as a pair in this neighborhood.
        #[arg(long)]
        n: Option<PathBuf>,
        /// Also require every exit simplex to be reachable from S (needs --n).
        #[arg(long, requires = "n")]
        strong: bool,
    },
    /// Print the invariant part of a set.
    Inv {
        #[arg(long)]
        complex: PathBuf,
        #[arg(long)]
        field: PathBuf,
        #[arg(long)]
        set: PathBuf,
    },
}

fn gen_hopf(
    grid: usize,
    lambdas: &str,
    out_dir: &Path,
    extent: f64,
    radius: f64,
    noise: f64,
    seed: u64,
) -> Result<()> {
    let lambdas = parse_lambdas(lambdas)?;
    let seed = env_seed()?.unwrap_or(seed);
    let grid = hopf_grid(grid, extent)?;
    let fields = gen_hopf_fields_on(&grid, &lambdas, noise, seed)?;
    fs::create_dir_all(out_dir)?;
    fs::write(out_dir.join("complex.txt"), write_complex(&grid.complex))?;
    fs::write(
        out_dir.join("neighborhood.txt"),
        write_set(&grid.complex, &disk(&grid, radius)),
    )?;
    for (f, l) in fields.iter().zip(&lambdas) {
        fs::write(
            out_dir.join(format!("{}.txt", f.name())),
            format!("# lambda = {l}\n{}", write_field(f)),
        )?;
        println!("{}\tlambda = {l}", f.name());
    }
    Ok(())
}

/// Returns whether the pair is valid.
fn check_pair(
    complex: &Path,
    field: &Path,
    p: &Path,
    e: &Path,
    n: Option<&Path>,
    strong: bool,
) -> Result<bool> {
    let k = Arc::new(read_complex(complex)?);
    let f = read_field(k.clone(), field)?;
    let p = read_set(&k, p)?;
    let e = read_set(&k, e)?;
    let n = n.map(|n| read_set(&k, n)).transpose()?;
    let mode = match (&n, strong) {
        (None, _) => Mode::Plain,
        (Some(_), false) => Mode::InN,
        (Some(_), true) => Mode::Strong,
    };
    let pair = IndexPair::new(p, e, f.name(), n);
    let s = f.invariant_part(&pair.difference());
    match validate_index_pair(&f, &pair, &s, mode) {
        Ok(()) => {
            println!("valid {mode:?} pair; |S| = {}", s.len());
            Ok(true)
        }
        Err(v) => {
            println!("invalid: {v}");
            Ok(false)
        }
    }
}

fn inv(complex: &Path, field: &Path, set: &Path) -> Result<()> {
    let k = Arc::new(read_complex(complex)?);
    let f = read_field(k.clone(), field)?;
    let a = read_set(&k, set)?;
    print!("{}", write_set(&k, &f.invariant_part(&a)));
    Ok(())
}

fn run(command: Command) -> Result<ExitCode> {
    match command {
        Command::Persist {
            complex,
            fields,
            neighborhood,
            delta,
            mode,
            out,
            svg,
            seed,
            print,
        } => {
            let config = RunConfig {
                complex,
                fields,
                neighborhood,
                delta,
                mode,
                out,
                svg,
                seed,
            };
            let output = run_persist(&config)?;
            if let Some(format) = print {
                print!("{}", render_barcode(&output.barcode, format));
            }
        }
        Command::GenHopf {
            grid,
            lambdas,
            out_dir,
            extent,
            radius,
            noise,
            seed,
        } => gen_hopf(grid, &lambdas, &out_dir, extent, radius, noise, seed)?,
        Command::CheckPair {
            complex,
            field,
            p,
            e,
            n,
            strong,
        } => {
            if !check_pair(&complex, &field, &p, &e, n.as_deref(), strong)? {
                return Ok(ExitCode::from(2));
            }
        }
        Command::Inv {
            complex,
            field,
            set,
        } => inv(&complex, &field, &set)?,
    }
    Ok(ExitCode::SUCCESS)
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() {
                ExitCode::from(1)
            } else {
                ExitCode::SUCCESS
            };
        }
    };
    match run(cli.command) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(exit_code(&e) as u8)
        }
    }
}
