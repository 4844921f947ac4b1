//! The `metamono` command line.

use std::collections::BTreeMap;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use clap::{Args, Parser, Subcommand};
use rayon::prelude::*;

use crate::basis::{BasisFunction, BasisIndex, DiskPoint, FieldFunction, StandardFunction};
use crate::bessel::bessel_zero;
use crate::config::RunConfig;
use crate::error::{Error, Result};
use crate::evolution::{square_grid, TimeField, WaveState};
use crate::expansion::Projector;
use crate::gram::{gram_matrix, index_grid};
use crate::io;
use crate::quatnum::Quaternion;
use crate::verify::{run_verify, Family};

/// Exit status when every verification check passed or a command succeeded.
pub const EXIT_OK: u8 = 0;
/// Some verification check failed.
pub const EXIT_CHECK_FAILED: u8 = 1;
/// Bad arguments, configuration or input files.
pub const EXIT_USAGE: u8 = 2;
/// A numerical routine failed (non-convergence, ill-conditioning, overflow guard).
pub const EXIT_NUMERICAL: u8 = 3;
/// Reading or writing a file failed.
pub const EXIT_IO: u8 = 4;

pub fn exit_code(err: &Error) -> u8 {
    match err {
        Error::Config(_) | Error::Domain(_) | Error::Format(_) => EXIT_USAGE,
        Error::ZeroNonconvergence { .. }
        | Error::NonFinite { .. }
        | Error::IllConditioned { .. }
        | Error::Degenerate { .. }
        | Error::GrowthGuard { .. } => EXIT_NUMERICAL,
        Error::Io(_) => EXIT_IO,
    }
}

#[derive(Debug, Parser)]
#[command(
    name = "metamono",
    version,
    about = "Quaternionic metamonogenic basis functions on the unit disk"
)]
pub struct Cli {
    /// Configuration file of `key = value` lines; METAMONO_* variables override it.
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Tabulate Bessel zeros j_{n,m} as n,m,j.
    Zeros {
        #[arg(long)]
        n_max: usize,
        #[arg(long)]
        m_max: usize,
        #[arg(long)]
        out: PathBuf,
    },
    /// Sample F_{n,m} (or F_n[lambda]) on a square grid or on the quadrature nodes.
    Eval(EvalArgs),
    /// Quadrature Gram matrix of F_{n,m}, n <= n-max, m <= m-max, next to its closed form.
    Gram {
        #[arg(long)]
        n_max: usize,
        #[arg(long)]
        m_max: usize,
        #[arg(long)]
        out: PathBuf,
    },
    /// Expand a field in F_{n,m} with right quaternionic coefficients.
    Expand(ExpandArgs),
    /// Render v(z, t) = sum F_{n,m} c_{n,m} e^{j_{n,m} t / K} at several times.
    Evolve(EvolveArgs),
    /// Run the verification suite and emit a JSON report.
    Verify {
        /// Comma-separated check families to run (default: all).
        #[arg(long, value_delimiter = ',')]
        only: Vec<Family>,
        /// Write the report here instead of stdout.
        #[arg(long)]
        report: Option<PathBuf>,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Grid {
    pub width: usize,
    pub height: usize,
}

impl FromStr for Grid {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        let (w, h) = s
            .split_once(['x', 'X'])
            .ok_or_else(|| format!("grid must look like 256x256, got `{s}`"))?;
        let parse = |v: &str| {
            v.trim()
                .parse::<usize>()
                .map_err(|_| format!("bad grid size `{v}`"))
        };
        let (width, height) = (parse(w)?, parse(h)?);
        if width < 2 || height < 2 {
            return Err(format!("grid must be at least 2x2, got {width}x{height}"));
        }
        Ok(Grid { width, height })
    }
}

impl FromStr for Family {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        crate::verify::parse_family(s)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum ComponentName {
    S,
    I,
    J,
    K,
}

impl ComponentName {
    const ALL: [ComponentName; 4] = [
        ComponentName::S,
        ComponentName::I,
        ComponentName::J,
        ComponentName::K,
    ];

    fn index(self) -> usize {
        self as usize
    }

    fn label(self) -> &'static str {
        ["s", "i", "j", "k"][self.index()]
    }
}

#[derive(Debug, Args)]
pub struct EvalArgs {
    #[arg(long)]
    pub n: usize,
    /// Radial index; evaluates F_{n,m} = F_n[j_{n,m}].
    #[arg(long, required_unless_present = "lambda", conflicts_with = "lambda")]
    pub m: Option<usize>,
    /// Evaluate the standard function F_n[lambda] instead of a basis element.
    #[arg(long, allow_negative_numbers = true)]
    pub lambda: Option<f64>,
    /// Square grid WxH over [-1, 1]^2; only in-disk points are written to CSV.
    #[arg(
        long,
        required_unless_present = "at_quadrature_nodes",
        conflicts_with = "at_quadrature_nodes"
    )]
    pub grid: Option<Grid>,
    /// Sample exactly on the configured quadrature nodes.
    #[arg(long)]
    pub at_quadrature_nodes: bool,
    #[arg(long)]
    pub out: PathBuf,
    /// Component rendered by --pgm.
    #[arg(long, value_enum, default_value = "s")]
    pub component: ComponentName,
    /// Also write the chosen component as a PGM image (grid mode only).
    #[arg(long, requires = "grid")]
    pub pgm: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct ExpandArgs {
    #[arg(long, allow_negative_numbers = true)]
    pub lambda: f64,
    #[arg(long)]
    pub n_max: usize,
    #[arg(long)]
    pub m_max: usize,
    /// Field samples x,y,s,i,j,k on the configured quadrature nodes.
    #[arg(long, required_unless_present = "builtin", conflicts_with = "builtin")]
    pub input: Option<PathBuf>,
    /// Built-in field `F<n>`, the standard function F_n[lambda].
    #[arg(long)]
    pub builtin: Option<String>,
    #[arg(long)]
    pub out: PathBuf,
}

#[derive(Debug, Args)]
pub struct EvolveArgs {
    /// Coefficient file n,m,s,i,j,k.
    #[arg(long)]
    pub coeffs: PathBuf,
    #[arg(long, default_value_t = 1.0)]
    pub k: f64,
    /// Comma-separated times.
    #[arg(long, value_delimiter = ',', required = true)]
    pub times: Vec<f64>,
    #[arg(long)]
    pub grid: Grid,
    #[arg(long)]
    pub out_dir: PathBuf,
    /// Also write one PGM per component and time.
    #[arg(long)]
    pub pgm: bool,
}

/// Runs one parsed invocation and returns the process exit status.
pub fn run(cli: Cli) -> Result<u8> {
    let config = RunConfig::load(cli.config.as_deref())?;
    match cli.command {
        Command::Zeros { n_max, m_max, out } => {
            config.check_basis_bounds(n_max, m_max)?;
            let mut rows = Vec::new();
            for n in 0..=n_max {
                for m in 1..=m_max {
                    rows.push((n, m, bessel_zero(n, m)?));
                }
            }
            io::write_zeros_csv(io::create(&out)?, &rows)?;
        }
        Command::Eval(args) => eval(&config, &args)?,
        Command::Gram { n_max, m_max, out } => {
            config.check_basis_bounds(n_max, m_max)?;
            let report = gram_matrix(&index_grid(n_max, m_max), &config.rule()?)?;
            io::write_gram_csv(io::create(&out)?, &report)?;
            eprintln!(
                "gram {}x{}: max off-diagonal (relative) {:e}, max cross deviation {:e}, max norm deviation {:e}",
                report.size(),
                report.size(),
                report.max_offdiag_rel,
                report.max_cross_dev,
                report.max_norm_rel_dev
            );
        }
        Command::Expand(args) => expand(&config, &args)?,
        Command::Evolve(args) => evolve(&config, &args)?,
        Command::Verify { only, report } => {
            let rep = run_verify(&config, &only);
            let json = rep.to_json();
            match report.or(config.report_path.clone()) {
                Some(path) => {
                    let mut w = io::create(&path)?;
                    writeln!(w, "{json}")?;
                    w.flush()?;
                }
                None => println!("{json}"),
            }
            for c in rep.checks.iter().filter(|c| !c.passed) {
                eprintln!("FAILED [{}] {}", c.family, c.name);
            }
            return Ok(if rep.passed {
                EXIT_OK
            } else {
                EXIT_CHECK_FAILED
            });
        }
    }
    Ok(EXIT_OK)
}

fn eval(config: &RunConfig, args: &EvalArgs) -> Result<()> {
    let field: Box<dyn FieldFunction> = match (args.m, args.lambda) {
        (Some(m), _) => {
            config.check_basis_bounds(args.n, m)?;
            Box::new(BasisFunction::new(BasisIndex::new(args.n, m))?)
        }
        (None, Some(lambda)) => Box::new(StandardFunction::new(args.n, lambda)?),
        (None, None) => return Err(Error::Config("eval needs --m or --lambda".into())),
    };
    if args.at_quadrature_nodes {
        let rule = config.rule()?;
        let samples = rule.sample(field.as_ref())?;
        let rows: Vec<(DiskPoint, Quaternion)> = rule
            .nodes()
            .iter()
            .map(|n| n.point)
            .zip(samples.values)
            .collect();
        return io::write_field_csv(io::create(&args.out)?, &rows);
    }
    let grid = args
        .grid
        .ok_or_else(|| Error::Config("eval needs --grid or --at-quadrature-nodes".into()))?;
    let points = square_grid(grid.width, grid.height);
    let values: Vec<Option<Quaternion>> = points
        .par_iter()
        .map(|p| p.in_closed_disk().then(|| field.eval(p)))
        .collect();
    let rows: Vec<(DiskPoint, Quaternion)> = points
        .iter()
        .zip(&values)
        .filter_map(|(p, v)| v.map(|v| (*p, v)))
        .collect();
    io::write_field_csv(io::create(&args.out)?, &rows)?;
    if let Some(path) = &args.pgm {
        let c = args.component.index();
        let pixels: Vec<Option<f64>> = values.iter().map(|v| v.map(|q| q.to_array()[c])).collect();
        io::write_pgm(io::create(path)?, grid.width, grid.height, &pixels)?;
    }
    Ok(())
}

fn builtin_order(name: &str) -> Result<usize> {
    name.strip_prefix('F')
        .and_then(|n| n.parse().ok())
        .ok_or_else(|| {
            Error::Config(format!(
                "builtin field must look like F0, F1, ...; got `{name}`"
            ))
        })
}

fn expand(config: &RunConfig, args: &ExpandArgs) -> Result<()> {
    config.check_basis_bounds(args.n_max, args.m_max)?;
    let rule = config.rule()?;
    let samples = match (&args.input, &args.builtin) {
        (Some(path), _) => io::parse_field_csv(path, &rule)?,
        (None, Some(name)) => {
            rule.sample(&StandardFunction::new(builtin_order(name)?, args.lambda)?)?
        }
        (None, None) => return Err(Error::Config("expand needs --input or --builtin".into())),
    };
    let state = Projector::new(&rule)
        .with_solver(config.block_solver)
        .project_samples(&samples, args.lambda, args.n_max, args.m_max)?;
    io::write_coeffs_csv(io::create(&args.out)?, &state.coeffs)?;
    eprintln!(
        "expand: residual {:e} (relative {:e}), block condition {:e}",
        state.residual_l2,
        state.relative_residual(),
        state.block_condition
    );
    Ok(())
}

fn evolve(config: &RunConfig, args: &EvolveArgs) -> Result<()> {
    let coeffs: BTreeMap<BasisIndex, Quaternion> = io::read_coeffs_csv(&args.coeffs)?;
    if let Some(bad) = coeffs
        .keys()
        .find(|i| config.check_basis_bounds(i.n, i.m).is_err())
    {
        config.check_basis_bounds(bad.n, bad.m)?;
    }
    let state = WaveState::new(&coeffs, args.k)?;
    for &t in &args.times {
        if !(t >= 0.0) {
            return Err(Error::Domain(format!(
                "times must be non-negative, got {t}"
            )));
        }
        state.check_time(t)?;
    }
    let out_dir = args.out_dir.as_path();
    std::fs::create_dir_all(out_dir)?;
    let points = square_grid(args.grid.width, args.grid.height);
    let mut index = io::create(&out_dir.join("frames.csv"))?;
    writeln!(index, "frame,t,file")?;
    for (frame, &t) in args.times.iter().enumerate() {
        let values: Vec<Option<Quaternion>> = points
            .par_iter()
            .map(|p| p.in_closed_disk().then(|| state.eval_at(p, t)))
            .collect();
        let name = format!("frame_{frame:03}.csv");
        let rows: Vec<(DiskPoint, Quaternion)> = points
            .iter()
            .zip(&values)
            .filter_map(|(p, v)| v.map(|v| (*p, v)))
            .collect();
        io::write_field_csv(io::create(&out_dir.join(&name))?, &rows)?;
        writeln!(index, "{frame},{},{name}", io::fmt_f64(t))?;
        if args.pgm {
            for c in ComponentName::ALL {
                let pixels: Vec<Option<f64>> = values
                    .iter()
                    .map(|v| v.map(|q| q.to_array()[c.index()]))
                    .collect();
                let path = pgm_path(out_dir, frame, c);
                io::write_pgm(
                    io::create(&path)?,
                    args.grid.width,
                    args.grid.height,
                    &pixels,
                )?;
            }
        }
    }
    index.flush()?;
    Ok(())
}

fn pgm_path(dir: &Path, frame: usize, c: ComponentName) -> PathBuf {
    dir.join(format!("frame_{frame:03}_{}.pgm", c.label()))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn grid_parsing() {
        assert_eq!(
            "256x128".parse::<Grid>().unwrap(),
            Grid {
                width: 256,
                height: 128
            }
        );
        assert!("256".parse::<Grid>().is_err());
        assert!("1x4".parse::<Grid>().is_err());
        assert!("ax4".parse::<Grid>().is_err());
    }

    #[test]
    fn builtin_names() {
        assert_eq!(builtin_order("F0").unwrap(), 0);
        assert_eq!(builtin_order("F12").unwrap(), 12);
        assert!(builtin_order("G1").is_err());
        assert!(builtin_order("F").is_err());
    }

    #[test]
    fn exit_codes() {
        assert_eq!(exit_code(&Error::Format("x".into())), EXIT_USAGE);
        assert_eq!(
            exit_code(&Error::IllConditioned { m: 3, cond: 1e13 }),
            EXIT_NUMERICAL
        );
        assert_eq!(exit_code(&Error::Io(std::io::Error::other("x"))), EXIT_IO);
    }

    #[test]
    fn arguments_parse() {
        let cli = Cli::try_parse_from(["metamono", "verify", "--only", "norms,cross"]).unwrap();
        match cli.command {
            Command::Verify { only, .. } => assert_eq!(only, vec![Family::Norms, Family::Cross]),
            _ => panic!(),
        }
        assert!(Cli::try_parse_from(["metamono", "verify", "--only", "bogus"]).is_err());
        assert!(
            Cli::try_parse_from(["metamono", "eval", "--n", "1", "--m", "1", "--out", "x"])
                .is_err()
        );
        assert!(Cli::try_parse_from([
            "metamono", "eval", "--n", "1", "--m", "1", "--lambda", "2", "--grid", "4x4", "--out",
            "x"
        ])
        .is_err());
        assert!(Cli::try_parse_from([
            "metamono", "expand", "--lambda", "2", "--n-max", "1", "--m-max", "1", "--out", "x"
        ])
        .is_err());
    }
}
