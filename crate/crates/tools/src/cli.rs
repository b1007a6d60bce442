//! Command-line front end.
//!
//! Exit codes: 0 on success, 1 when a computation fails or an asserted
//! equality does not hold, 2 on malformed arguments.

use std::io::Write;
use std::path::Path;

use clap::{Parser, Subcommand, ValueEnum};
use jacobi_core::dimension::{dim_weak, generator_weights, hilbert_table, LaurentPolyT};
use jacobi_core::forms::FormSpec;
use jacobi_core::structure::{
    decompose, enumerate_monomials, recombine, verify_dimension_with, Decomposition, Expander,
    GeneratorCatalog,
};
use jacobi_core::{IndexMatrix, JacobiSeries, SeriesIndex};

use crate::checks::{self, Config};
use crate::json::{self, JsonError};

/// Overrides the default precision, in q-orders.
pub const PREC_ENV: &str = "JACOBI_PREC";
const DEFAULT_PREC: i64 = 6;

#[derive(Parser, Debug)]
#[command(
    name = "jacobi",
    version,
    about = "Weak Jacobi forms of rank-two lattice index"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Json,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Print the Fourier expansion of a named form or of a JSON series.
    Expand {
        /// Form name such as `Phi_0_313|sub1` or `phi_0_1@zw`.
        #[arg(long, conflicts_with = "input", required_unless_present = "input")]
        form: Option<String>,
        /// Read a series in the JSON format instead.
        #[arg(long)]
        input: Option<String>,
        /// Precision in q-orders.
        #[arg(long, value_parser = clap::value_parser!(i64).range(1..))]
        prec: Option<i64>,
        #[arg(long, value_enum, default_value_t = Format::Text)]
        format: Format,
    },
    /// Dimension of the space of weak forms of weight k and index a,b,c.
    Dim {
        #[arg(short, allow_negative_numbers = true)]
        k: i64,
        #[arg(short, value_name = "a,b,c")]
        i: IndexMatrix,
    },
    /// Weights of a free basis over E4, E6 as a Laurent polynomial in t.
    Weights {
        #[arg(short, value_name = "a,b,c")]
        i: IndexMatrix,
        #[arg(long, value_enum, default_value_t = Format::Text)]
        format: Format,
    },
    /// Hilbert-series coefficients for all indices up to (a, b, c).
    Hilbert {
        #[arg(short)]
        a: u32,
        #[arg(short)]
        b: u32,
        #[arg(short)]
        c: u32,
        #[arg(long, value_enum, default_value_t = Format::Text)]
        format: Format,
    },
    /// Span rank of the generator monomials against the dimension.
    Span {
        #[arg(short, allow_negative_numbers = true)]
        k: i64,
        #[arg(short, value_name = "a,b,c")]
        i: IndexMatrix,
        /// Use the even-subring generators only.
        #[arg(long)]
        even: bool,
        #[arg(long, value_parser = clap::value_parser!(i64).range(1..))]
        prec: Option<i64>,
    },
    /// Write a form as a combination of generator monomials.
    Decompose {
        /// A JSON series file or a form name.
        #[arg(long)]
        target: String,
        #[arg(short, allow_negative_numbers = true)]
        k: i64,
        #[arg(short, value_name = "a,b,c")]
        i: IndexMatrix,
        #[arg(long)]
        even: bool,
        #[arg(long, value_parser = clap::value_parser!(i64).range(1..))]
        prec: Option<i64>,
    },
    /// Run the acceptance suite.
    Verify {
        /// Largest a+b+c in the structure grids; also prints every case.
        #[arg(long, value_name = "S")]
        grid: Option<u32>,
    },
}

#[derive(Debug, thiserror::Error)]
enum CliError {
    #[error("{0}")]
    Core(#[from] jacobi_core::Error),
    #[error("{0}")]
    Json(#[from] JsonError),
    #[error("{0}")]
    Io(#[from] std::io::Error),
    #[error("{0}")]
    Usage(String),
    /// A computation finished but an asserted property failed; the report
    /// has already been written.
    #[error("{0}")]
    Failed(String),
}

impl CliError {
    fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) => 2,
            _ => 1,
        }
    }
}

/// Parses `args` (including the program name) and runs the command.
/// Returns the exit code.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let text = e.render().to_string();
            if e.use_stderr() {
                let _ = write!(err, "{text}");
            } else {
                let _ = write!(out, "{text}");
            }
            return e.exit_code();
        }
    };
    match execute(cli.command, out) {
        Ok(()) => 0,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            e.exit_code()
        }
    }
}

fn default_prec() -> Result<i64, CliError> {
    match std::env::var(PREC_ENV) {
        Ok(v) => match v.trim().parse::<i64>() {
            Ok(p) if p >= 1 => Ok(p),
            _ => Err(CliError::Usage(format!(
                "{PREC_ENV} must be a positive integer, got {v:?}"
            ))),
        },
        Err(_) => Ok(DEFAULT_PREC),
    }
}

fn prec24(prec: Option<i64>) -> Result<i64, CliError> {
    Ok(24 * prec.map_or_else(default_prec, Ok)?)
}

fn catalog(even: bool) -> GeneratorCatalog {
    if even {
        GeneratorCatalog::even()
    } else {
        GeneratorCatalog::full()
    }
}

fn poly_json(p: &LaurentPolyT) -> serde_json::Value {
    p.terms()
        .map(|(e, c)| (e.to_string(), serde_json::Value::from(c)))
        .collect()
}

fn execute(command: Command, out: &mut dyn Write) -> Result<(), CliError> {
    match command {
        Command::Expand {
            form,
            input,
            prec,
            format,
        } => {
            let f = match (form, input) {
                (Some(name), _) => {
                    let spec: FormSpec = name.parse()?;
                    spec.build(prec24(prec)?)?
                }
                (None, Some(path)) => {
                    let f = read_json(Path::new(&path))?;
                    match prec {
                        Some(p) => f.truncate(24 * p),
                        None => f,
                    }
                }
                (None, None) => {
                    return Err(CliError::Usage(
                        "one of --form or --input is required".into(),
                    ))
                }
            };
            match format {
                Format::Text => writeln!(out, "{f}")?,
                Format::Json => write!(out, "{}", json::write_series(&f)?)?,
            }
        }
        Command::Dim { k, i } => writeln!(out, "{}", dim_weak(k, i))?,
        Command::Weights { i, format } => {
            let p = generator_weights(i);
            match format {
                Format::Text => write!(out, "{}", p.lines())?,
                Format::Json => writeln!(out, "{}", poly_json(&p))?,
            }
        }
        Command::Hilbert { a, b, c, format } => {
            let table = hilbert_table(IndexMatrix::new(a, b, c));
            match format {
                Format::Text => {
                    for (m, p) in &table {
                        writeln!(out, "[{m}]")?;
                        write!(out, "{}", p.lines())?;
                    }
                }
                Format::Json => {
                    let doc: serde_json::Map<_, _> = table
                        .iter()
                        .map(|(m, p)| (m.to_string(), poly_json(p)))
                        .collect();
                    writeln!(
                        out,
                        "{}",
                        serde_json::to_string_pretty(&doc).map_err(JsonError::from)?
                    )?;
                }
            }
        }
        Command::Span { k, i, even, prec } => {
            let p = prec24(prec)?;
            let cat = catalog(even);
            let mut ex = Expander::new(&cat, p + 24);
            let report = verify_dimension_with(k, i, p, &mut ex)?;
            writeln!(out, "{report}")?;
            if !report.passed() {
                return Err(CliError::Failed(format!(
                    "span rank {} differs from dimension {}",
                    report.rank, report.dim
                )));
            }
        }
        Command::Decompose {
            target,
            k,
            i,
            even,
            prec,
        } => {
            let p = prec24(prec)?;
            run_decompose(&target, k, i, even, p, out)?;
        }
        Command::Verify { grid } => {
            let config = Config {
                grid: grid.unwrap_or(Config::default().grid),
            };
            let verbose = grid.is_some();
            let mut io_err = None;
            let outcomes = checks::run_all(
                &config,
                |o| {
                    if let Err(e) = writeln!(out, "{o}").and_then(|_| out.flush()) {
                        io_err.get_or_insert(e);
                    }
                },
                |_| {},
            );
            if let Some(e) = io_err {
                return Err(e.into());
            }
            if verbose {
                print_grids(config, out)?;
            }
            let failed = outcomes.iter().filter(|o| !o.passed).count();
            if failed > 0 {
                return Err(CliError::Failed(format!(
                    "{failed} of {} checks failed",
                    outcomes.len()
                )));
            }
        }
    }
    Ok(())
}

fn print_grids(config: Config, out: &mut dyn Write) -> Result<(), CliError> {
    for even in [false, true] {
        writeln!(
            out,
            "# {} catalog, a+b+c <= {}",
            if even { "even" } else { "full" },
            config.grid
        )?;
        let opts = jacobi_core::structure::GridOptions {
            max_sum: config.grid,
            even,
            ..Default::default()
        };
        let mut io_err = None;
        jacobi_core::structure::verify_grid(opts, |r| {
            if let Err(e) = writeln!(out, "{r}") {
                io_err.get_or_insert(e);
            }
        })?;
        if let Some(e) = io_err {
            return Err(e.into());
        }
    }
    Ok(())
}

fn read_json(path: &Path) -> Result<JacobiSeries, CliError> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| std::io::Error::new(e.kind(), format!("{}: {e}", path.display())))?;
    Ok(json::read_series(&text)?)
}

fn load_target(target: &str, prec24: i64) -> Result<JacobiSeries, CliError> {
    let path = Path::new(target);
    if path.is_file() || target.ends_with(".json") {
        return read_json(path);
    }
    let spec: FormSpec = target.parse()?;
    Ok(spec.build(prec24)?)
}

fn run_decompose(
    target: &str,
    k: i64,
    m: IndexMatrix,
    even: bool,
    prec24: i64,
    out: &mut dyn Write,
) -> Result<(), CliError> {
    let f = load_target(target, prec24)?;
    if f.weight2() != 2 * k {
        return Err(CliError::Failed(format!(
            "target has weight {}, not {k}",
            f.weight()
        )));
    }
    if f.index() != SeriesIndex::from(m) {
        return Err(CliError::Failed(format!(
            "target index {:?} is not ({m})",
            f.index()
        )));
    }
    let prec24 = prec24.min(f.prec24());
    let cat = catalog(even);
    let monomials = enumerate_monomials(k, m, &cat);
    let mut ex = Expander::new(&cat, prec24);
    let basis = monomials
        .iter()
        .map(|mono| ex.expand(mono))
        .collect::<Result<Vec<_>, _>>()?;
    match decompose(&f, &basis, prec24)? {
        Decomposition::Solved(coeffs) => {
            for (mono, c) in monomials.iter().zip(&coeffs) {
                if !c.is_zero() {
                    writeln!(out, "{} * {}", c.to_fraction_string(), mono.display(&cat))?;
                }
            }
            let back = recombine(&basis, &coeffs)?
                .unwrap_or_else(|| JacobiSeries::zero(prec24, f.weight2(), f.index()));
            if !back.equals_to_precision(&f, prec24) {
                return Err(CliError::Failed(
                    "recombination does not reproduce the target".into(),
                ));
            }
            writeln!(
                out,
                "# exact through O(q^{})",
                jacobi_core::Rational::new(prec24, 24)
            )?;
        }
        Decomposition::Inconsistent { key } => {
            writeln!(
                out,
                "inconsistent: no combination of the {} monomials matches the coefficient at n24={} r2={} s2={}",
                monomials.len(),
                key.n24,
                key.r2,
                key.s2
            )?;
            return Err(CliError::Failed(
                "target is not in the span of the generator monomials".into(),
            ));
        }
    }
    Ok(())
}
