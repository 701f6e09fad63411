use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use spencer_core::report::{self, GridSpec, Manifest};
use spencer_core::sampling::seed_from_env;
use spencer_core::{
    DualFunctional, Error, LeibnizMode, LieAlgebra, ModeFlags, PairingMode, SpencerOperator,
};

/// Exact Spencer operator kernels, audits and degenerate cohomology bookkeeping.
#[derive(Parser)]
#[command(name = "spencer", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run the full pipeline described by a manifest.
    Analyze {
        #[arg(long)]
        manifest: PathBuf,
        /// Exit with code 3 when the report has findings.
        #[arg(long)]
        strict: bool,
        /// Write the JSON report here and print text tables to stdout.
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long, value_enum, default_value_t = Format::Json)]
        format: Format,
    },
    /// Kernel dimensions of δ^λ per grade.
    Kernel {
        #[command(flatten)]
        algebra: AlgebraSource,
        #[arg(long)]
        lambda: PathBuf,
        #[arg(long)]
        kmax: usize,
        #[command(flatten)]
        modes: ModeArgs,
        #[arg(long, value_enum, default_value_t = Format::Text)]
        format: Format,
    },
    /// Kernel dimensions over a grid of covectors, with mirrored samples.
    Sweep {
        #[command(flatten)]
        algebra: AlgebraSource,
        /// `ray:d1,..,dn@c1,..`, `box:R` or `points:a1,..,an;b1,..`
        #[arg(long)]
        grid: String,
        #[arg(long)]
        kmax: usize,
        #[command(flatten)]
        modes: ModeArgs,
        #[arg(long, value_enum, default_value_t = Format::Text)]
        format: Format,
    },
    /// Total-complex checks over a cochain model.
    Complex {
        /// Complex file, or `point`, `circle`, `interval`.
        #[arg(long)]
        complex: String,
        #[command(flatten)]
        algebra: AlgebraSource,
        #[arg(long)]
        lambda: PathBuf,
        #[arg(long)]
        q: usize,
        #[command(flatten)]
        modes: ModeArgs,
        #[arg(long, value_enum, default_value_t = Format::Text)]
        format: Format,
    },
    /// Check antisymmetry, Jacobi, center and Killing form of an algebra.
    Validate {
        /// Algebra file or built-in name.
        #[arg(long)]
        algebra: String,
        #[arg(long, value_enum, default_value_t = Format::Text)]
        format: Format,
    },
}

#[derive(Args)]
#[group(required = true, multiple = false)]
struct AlgebraSource {
    #[arg(long)]
    algebra: Option<PathBuf>,
    #[arg(long)]
    builtin: Option<String>,
}

impl AlgebraSource {
    fn load(&self) -> Result<LieAlgebra, Error> {
        match (&self.algebra, &self.builtin) {
            (Some(path), _) => Ok(LieAlgebra::load(path, true)?.0),
            (None, Some(name)) => LieAlgebra::builtin(name),
            (None, None) => Err(Error::InvalidInput("give --algebra or --builtin".into())),
        }
    }
}

#[derive(Args)]
struct ModeArgs {
    #[arg(long, value_enum, default_value_t = Pairing::Plain)]
    pairing_mode: Pairing,
    #[arg(long, value_enum, default_value_t = Leibniz::Signed)]
    leibniz_mode: Leibniz,
}

impl ModeArgs {
    fn flags(&self) -> ModeFlags {
        ModeFlags {
            pairing_mode: match self.pairing_mode {
                Pairing::Plain => PairingMode::Plain,
                Pairing::Killing => PairingMode::Killing,
            },
            leibniz_mode: match self.leibniz_mode {
                Leibniz::Signed => LeibnizMode::Signed,
                Leibniz::Unsigned => LeibnizMode::Unsigned,
            },
        }
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum Pairing {
    Plain,
    Killing,
}

#[derive(Clone, Copy, ValueEnum)]
enum Leibniz {
    Signed,
    Unsigned,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Text,
}

fn json<T: serde::Serialize>(value: &T) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("serializable");
    s.push('\n');
    s
}

fn write_file(path: &Path, text: &str) -> Result<(), Error> {
    std::fs::write(path, text).map_err(|e| Error::Io {
        path: path.display().to_string(),
        source: e,
    })
}

fn operator(
    algebra: &AlgebraSource,
    lambda: &Path,
    modes: &ModeArgs,
) -> Result<SpencerOperator, Error> {
    SpencerOperator::new(
        algebra.load()?,
        DualFunctional::load(lambda)?,
        modes.flags(),
    )
}

fn run(command: Command) -> Result<u8, Error> {
    let seed = seed_from_env();
    match command {
        Command::Analyze {
            manifest,
            strict,
            out,
            format,
        } => {
            let m = Manifest::load(&manifest)?;
            let r = report::analyze(&m, seed)?;
            match out {
                Some(path) => {
                    write_file(&path, &r.to_json_string())?;
                    print!("{}", r.render_text());
                }
                None if format == Format::Text => print!("{}", r.render_text()),
                None => print!("{}", r.to_json_string()),
            }
            Ok(if strict && r.has_findings() { 3 } else { 0 })
        }
        Command::Kernel {
            algebra,
            lambda,
            kmax,
            modes,
            format,
        } => {
            let op = operator(&algebra, &lambda, &modes)?;
            let t = report::kernel_table(&op, kmax)?;
            match format {
                Format::Json => print!("{}", json(&t)),
                Format::Text => print!("{}", report::render_kernel_table(&t)),
            }
            Ok(0)
        }
        Command::Sweep {
            algebra,
            grid,
            kmax,
            modes,
            format,
        } => {
            let g = algebra.load()?;
            let r = report::sweep(&g, modes.flags(), &GridSpec::parse(&grid)?, kmax)?;
            match format {
                Format::Json => print!("{}", json(&r)),
                Format::Text => print!("{}", render_sweep(&r)),
            }
            Ok(0)
        }
        Command::Complex {
            complex,
            algebra,
            lambda,
            q,
            modes,
            format,
        } => {
            let (source, cx) = report::resolve_complex(&complex, None)?;
            let op = operator(&algebra, &lambda, &modes)?;
            let c = report::complex_analysis(&source, &cx, &op, q, seed)?;
            match format {
                Format::Json => print!("{}", json(&c)),
                Format::Text => print!("{}", report::render_complex(&c)),
            }
            Ok(0)
        }
        Command::Validate { algebra, format } => {
            let g = match LieAlgebra::builtin(&algebra) {
                Ok(g) => g,
                Err(_) => LieAlgebra::load(&algebra, false)?.0,
            };
            let d = g.validate();
            match format {
                Format::Json => print!("{}", json(&d)),
                Format::Text => {
                    println!(
                        "algebra {} (dim {}), Killing rank {}",
                        d.name, d.dimension, d.killing_rank
                    );
                    let findings = d.findings();
                    if findings.is_empty() {
                        println!("valid");
                    }
                    for f in findings {
                        println!("  - {f}");
                    }
                }
            }
            Ok(if d.is_valid() { 0 } else { 1 })
        }
    }
}

fn render_sweep(r: &report::SweepReport) -> String {
    let mut headers = vec!["#".to_string(), "lambda".to_string()];
    headers.extend((0..=r.k_max).map(|k| format!("K^{k}")));
    let refs: Vec<&str> = headers.iter().map(String::as_str).collect();
    let mut t = report::Table::new(format!("sweep over {}", r.algebra), &refs);
    for row in &r.rows {
        let mut cells = vec![
            row.index.to_string(),
            format!("({})", row.lambda.join(", ")),
        ];
        cells.extend(row.dims.iter().map(|d| d.to_string()));
        t.row(cells);
    }
    let mut out = t.render();
    out.push_str("\nstrata (mirrored samples agree on every row):\n");
    for s in &r.strata {
        out.push_str(&format!(
            "  {:?}: {} sample(s), first #{}\n",
            s.dims, s.count, s.first_index
        ));
    }
    if let Some(z) = r.zero_dominates {
        out.push_str(&format!("lambda = 0 dominates every row: {z}\n"));
    }
    out
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(cli.command) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
