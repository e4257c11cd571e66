//! `bpc`: derive, integrate, audit, self-test and plot conformal
//! bi-para-complex mechanical systems.
//!
//! Exit codes: 0 ok, 1 self-test failure, 2 input error, 3 runtime
//! singularity, 4 audit breach.

mod plot;
mod problem;

use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use bpc_core::dynamics::{
    el_rhs, ham_rhs, hamiltonian_energy, integrate, lagrangian_energy, residual_series, write_csv,
    IntegrationError, Method, PhaseState, RhsError, Trajectory,
};
use bpc_core::eom::{derive_hamilton, derive_lagrange, synthesize_el, synthesize_ham, Problem};
use bpc_core::verify;

use problem::{Loaded, ProblemFile};

#[derive(Parser)]
#[command(name = "bpc", version, about = "Conformal bi-para-complex mechanics")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Print the synthesized equations of motion.
    Derive { file: PathBuf },
    /// Integrate a problem and write the trajectory as CSV.
    Integrate {
        file: PathBuf,
        #[arg(short, long)]
        output: PathBuf,
        /// Append the finite-difference Euler-Lagrange residual column (rk4 only).
        #[arg(long)]
        residual: bool,
    },
    /// Check the synthesized equations against their defining identities.
    Audit {
        file: PathBuf,
        #[arg(long, default_value_t = 100)]
        samples: usize,
        #[arg(long, env = "BPC_SEED", default_value_t = 42)]
        seed: u64,
        /// Negate the synthesized right-hand side before auditing.
        #[arg(long, hide = true)]
        inject_sign_flip: bool,
    },
    /// Run every verification suite.
    Selftest {
        #[arg(long, env = "BPC_SEED", default_value_t = 42)]
        seed: u64,
    },
    /// Plot CSV columns against t as an SVG line chart.
    Plot {
        csv: PathBuf,
        #[arg(short, long)]
        output: PathBuf,
        /// Comma-separated column names.
        #[arg(long, value_delimiter = ',', required = true)]
        cols: Vec<String>,
        #[arg(long, default_value_t = 800)]
        width: u32,
        #[arg(long, default_value_t = 500)]
        height: u32,
    },
}

#[derive(Debug)]
enum Failure {
    Selftest,
    Input(String),
    Singular(String),
    Audit(String),
}

impl Failure {
    fn code(&self) -> u8 {
        match self {
            Failure::Selftest => 1,
            Failure::Input(_) => 2,
            Failure::Singular(_) => 3,
            Failure::Audit(_) => 4,
        }
    }
}

fn load(file: &PathBuf) -> Result<Loaded, Failure> {
    ProblemFile::read(file).and_then(|f| f.load()).map_err(Failure::Input)
}

fn create(path: &PathBuf) -> Result<BufWriter<File>, Failure> {
    File::create(path).map(BufWriter::new).map_err(|e| Failure::Input(format!("{}: {e}", path.display())))
}

fn derive(file: &PathBuf) -> Result<(), Failure> {
    let lines = match load(file)?.problem {
        Problem::Lagrangian(p) => derive_lagrange(&p),
        Problem::Hamiltonian(p) => derive_hamilton(&p),
    };
    for l in lines {
        println!("{l}");
    }
    Ok(())
}

fn runtime_failure(e: IntegrationError<RhsError>) -> Failure {
    match e {
        IntegrationError::InvalidConfig(m) => Failure::Input(m),
        IntegrationError::Rhs { t, source, .. } => Failure::Singular(format!("at t = {t}: {source}")),
        other => Failure::Singular(other.to_string()),
    }
}

fn run(loaded: &Loaded) -> Result<Trajectory, Failure> {
    let r = match &loaded.problem {
        Problem::Lagrangian(p) => {
            let ode = synthesize_el(p);
            integrate(|s: &PhaseState| el_rhs(&ode, s), &loaded.start, &loaded.config)
        }
        Problem::Hamiltonian(p) => {
            let ode = synthesize_ham(p);
            integrate(|s: &PhaseState| ham_rhs(&ode, s), &loaded.start, &loaded.config)
        }
    };
    r.map_err(runtime_failure)
}

fn integrate_cmd(file: &PathBuf, output: &PathBuf, residual: bool) -> Result<(), Failure> {
    let loaded = load(file)?;
    if residual && (loaded.config.method != Method::Rk4 || !matches!(loaded.problem, Problem::Lagrangian(_))) {
        return Err(Failure::Input("--residual needs a lagrangian problem integrated with rk4".into()));
    }
    let mut tr = run(&loaded)?;
    if loaded.emit_energy {
        match &loaded.problem {
            Problem::Hamiltonian(p) => hamiltonian_energy(p, &mut tr).map_err(|e| Failure::Singular(e.to_string()))?,
            Problem::Lagrangian(p) => lagrangian_energy(p, &mut tr).map_err(|e| Failure::Singular(e.to_string()))?,
        }
    }
    if let (true, Problem::Lagrangian(p)) = (residual, &loaded.problem) {
        let r = residual_series(p, &tr, loaded.config.dt).map_err(|e| Failure::Singular(e.to_string()))?;
        for (d, v) in tr.diagnostics.iter_mut().zip(r) {
            d.residual = v;
        }
    }
    let mut out = create(output)?;
    write_csv(&tr, &mut out, loaded.emit_energy, residual)
        .and_then(|_| out.flush())
        .map_err(|e| Failure::Input(format!("{}: {e}", output.display())))?;
    eprintln!("wrote {} samples to {}", tr.len(), output.display());
    Ok(())
}

fn audit(file: &PathBuf, samples: usize, seed: u64, flip: bool) -> Result<(), Failure> {
    let loaded = load(file)?;
    let report = verify::audit_report(&loaded.problem, samples, seed, flip);
    print!("{report}");
    let c = &report.checks[0];
    println!("max residual {:e} over {samples} states (seed {seed})", c.measured);
    if report.all_passed() {
        Ok(())
    } else {
        Err(Failure::Audit(format!("audit residual {:e} exceeds {:e}", c.measured, c.threshold)))
    }
}

fn selftest(seed: u64) -> Result<(), Failure> {
    let report = verify::selftest_all(seed);
    print!("{report}");
    let failed = report.failures().count();
    println!("{} of {} checks passed (seed {seed})", report.checks.len() - failed, report.checks.len());
    if failed == 0 {
        Ok(())
    } else {
        Err(Failure::Selftest)
    }
}

fn plot_cmd(csv: &PathBuf, output: &PathBuf, cols: &[String], width: u32, height: u32) -> Result<(), Failure> {
    if width == 0 || height == 0 {
        return Err(Failure::Input("width and height must be positive".into()));
    }
    let input = File::open(csv).map_err(|e| Failure::Input(format!("{}: {e}", csv.display())))?;
    let series = plot::read_columns(input, cols).map_err(|e| Failure::Input(format!("{}: {e}", csv.display())))?;
    let mut out = create(output)?;
    out.write_all(plot::render(&series, width, height).as_bytes())
        .and_then(|_| out.flush())
        .map_err(|e| Failure::Input(format!("{}: {e}", output.display())))
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match &cli.command {
        Command::Derive { file } => derive(file),
        Command::Integrate { file, output, residual } => integrate_cmd(file, output, *residual),
        Command::Audit { file, samples, seed, inject_sign_flip } => audit(file, *samples, *seed, *inject_sign_flip),
        Command::Selftest { seed } => selftest(*seed),
        Command::Plot { csv, output, cols, width, height } => plot_cmd(csv, output, cols, *width, *height),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            match &f {
                Failure::Selftest => eprintln!("selftest failed"),
                Failure::Input(m) => eprintln!("input error: {m}"),
                Failure::Singular(m) => eprintln!("singularity: {m}"),
                Failure::Audit(m) => eprintln!("audit breach: {m}"),
            }
            let _ = io::stderr().flush();
            ExitCode::from(f.code())
        }
    }
}
