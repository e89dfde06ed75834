//! `majorana` command-line tool.
//!
//! State-consuming commands read a state document from a file argument or,
//! when it is absent or `-`, from standard input. Every state-producing
//! command writes a state document to standard output (or `--out`), so
//! commands compose through pipes.

use std::fs;
use std::io::{self, Read, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use majorana::geomeasure::{geometric_measure, landscape, GeometricOptions};
use majorana::io::{self as docs, State};
use majorana::majorana::su2_from_euler;
use majorana::marginals::{
    dicke_bitstrings, dnk_state, generalized_dicke_state, marginal_match_search, rdm_full, rdm_symmetric,
    reconstruct_from_two_marginals, uniqueness_conditions, Reconstruction, ReconstructOptions, SearchOptions,
};
use majorana::slocc::{apply_ilo, classify, LocalOperation};
use majorana::table::check_table;
use majorana::{dicke_state, expand_to_full, ghz_state, majorana_points, su2_rotate, FullState, SymmetricState};

const DEFAULT_CLUSTER_TOL: f64 = 1e-6;
const TABLE_TOL: f64 = 1e-9;

#[derive(Parser)]
#[command(name = "majorana", version, about = "Majorana constellations of symmetric multiqubit states")]
struct Cli {
    #[command(flatten)]
    global: Global,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Clone, Copy)]
struct Global {
    /// Numerical tolerance; each command documents what it controls.
    #[arg(long, global = true)]
    tol: Option<f64>,
    /// Seed for every stochastic step.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    /// Grid points per axis for the entanglement search.
    #[arg(long, global = true)]
    grid: Option<usize>,
    /// Number of local refinements or optimizer restarts.
    #[arg(long, global = true)]
    restarts: Option<usize>,
    /// Run grid scans and restarts on all cores.
    #[arg(long, global = true)]
    parallel: bool,
}

#[derive(Subcommand)]
enum Command {
    /// Generate a state document.
    Gen {
        #[command(subcommand)]
        kind: GenKind,
        /// Write to this file instead of standard output.
        #[arg(long, global = true)]
        out: Option<PathBuf>,
    },
    /// Constellation of a symmetric state as JSON; `--tol` is the clustering tolerance.
    Points {
        input: Option<PathBuf>,
        /// Also write `alpha,beta,mult` rows to this file.
        #[arg(long)]
        csv: Option<PathBuf>,
        /// Print the CSV rows instead of JSON.
        #[arg(long)]
        csv_only: bool,
    },
    /// Degeneracy configuration label and diversity; `--tol` is the clustering tolerance.
    Classify {
        input: Option<PathBuf>,
        #[arg(long)]
        json: bool,
    },
    /// Apply the rotation R_z(a) R_y(b) R_z(c) to every qubit.
    Rotate {
        input: Option<PathBuf>,
        #[arg(long, num_args = 3, allow_negative_numbers = true, value_names = ["A", "B", "C"])]
        euler: Vec<f64>,
    },
    /// Apply an invertible 2x2 matrix to every qubit; entries like `1`, `-0.5+0.866i`.
    Ilo {
        input: Option<PathBuf>,
        #[arg(long, value_delimiter = ',', required = true, allow_hyphen_values = true)]
        matrix: Vec<Complex64>,
    },
    /// Reduced density matrix over the listed qubits (1-based).
    Rdm {
        input: Option<PathBuf>,
        #[arg(long, value_delimiter = ',', required = true)]
        keep: Vec<usize>,
        /// For symmetric input, write the marginal in the Dicke basis of the kept qubits.
        #[arg(long)]
        symmetric: bool,
    },
    /// Recover a state from its marginals over qubits 1..N-1 and 2..N;
    /// prints a state document or `AMBIGUOUS`. `--tol` is the accepted residual.
    Reconstruct { rho_a: PathBuf, rho_b: PathBuf },
    /// List states sharing the given marginals of the input, one JSON array.
    /// `--tol` is the accepted residual.
    Falsify {
        input: Option<PathBuf>,
        /// Qubit groups separated by `;`, qubits by `,`; e.g. `1,2;1,3`.
        #[arg(long, required = true)]
        marginals: String,
    },
    /// Geometric measure of entanglement and closest product points.
    Entangle {
        input: Option<PathBuf>,
        #[arg(long)]
        json: bool,
    },
    /// Overlap landscape as CSV rows `alpha,beta,fidelity`.
    Landscape { input: Option<PathBuf> },
    /// Recompute the reference table of two- and three-qubit constellations.
    Table1,
}

#[derive(Subcommand)]
enum GenKind {
    /// (|0...0> + |1...1>)/sqrt2.
    Ghz {
        #[arg(long)]
        n: usize,
    },
    /// Dicke state with `l` qubits in |1>.
    Dicke {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        l: usize,
    },
    /// Symmetrized |1>^(n-k) (d0|0> + d1|1>)^k family member.
    Dnk {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        k: usize,
        #[arg(long, allow_hyphen_values = true)]
        d0: Complex64,
        #[arg(long, allow_hyphen_values = true)]
        d1: Complex64,
    },
    /// Generalized Dicke superposition up to weight `k` with seeded Gaussian coefficients.
    Gdicke {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        k: usize,
        /// Redraw until the state is fixed by its two (N-1)-qubit marginals.
        #[arg(long)]
        unique: bool,
    },
    /// Seeded Gaussian-random state.
    Random {
        #[arg(long)]
        n: usize,
        /// Non-symmetric state in the computational basis.
        #[arg(long)]
        full: bool,
    },
}

/// Failure with the exit code it maps to.
enum Failure {
    /// Unreadable or malformed input.
    Input(String),
    /// Any numerical or domain error.
    Numerical(String),
    /// Reference table mismatch.
    Mismatch,
}

impl From<majorana::Error> for Failure {
    fn from(e: majorana::Error) -> Self {
        use majorana::Error as E;
        match e {
            E::Format(_) | E::DimensionMismatch { .. } | E::InvalidDensityMatrix(_) => Failure::Input(e.to_string()),
            _ => Failure::Numerical(e.to_string()),
        }
    }
}

type CliResult<T> = std::result::Result<T, Failure>;

fn read_text(path: Option<&PathBuf>) -> CliResult<String> {
    let mut text = String::new();
    match path {
        Some(p) if p.as_os_str() != "-" => {
            text = fs::read_to_string(p).map_err(|e| Failure::Input(format!("{}: {e}", p.display())))?
        }
        _ => {
            io::stdin()
                .read_to_string(&mut text)
                .map_err(|e| Failure::Input(format!("stdin: {e}")))?;
        }
    }
    Ok(text)
}

fn read_state(path: Option<&PathBuf>) -> CliResult<State> {
    Ok(docs::state_from_json(&read_text(path)?)?)
}

fn read_symmetric(path: Option<&PathBuf>) -> CliResult<SymmetricState> {
    match read_state(path)? {
        State::Symmetric(s) => Ok(s),
        State::Full(_) => Err(Failure::Input("command needs a state in the dicke basis".into())),
    }
}

fn full_of(state: &State) -> CliResult<FullState> {
    match state {
        State::Symmetric(s) => Ok(expand_to_full(s)?),
        State::Full(f) => Ok(f.clone()),
    }
}

fn emit(text: &str, out: Option<&PathBuf>) -> CliResult<()> {
    match out {
        Some(p) => fs::write(p, format!("{text}\n")).map_err(|e| Failure::Numerical(format!("{}: {e}", p.display()))),
        None => {
            let mut stdout = io::stdout().lock();
            match writeln!(stdout, "{text}") {
                Err(e) if e.kind() != io::ErrorKind::BrokenPipe => Err(Failure::Numerical(e.to_string())),
                _ => Ok(()),
            }
        }
    }
}

fn gaussian(rng: &mut ChaCha8Rng) -> Complex64 {
    Complex64::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0))
}

fn generate(kind: &GenKind, g: &Global) -> CliResult<State> {
    let mut rng = ChaCha8Rng::seed_from_u64(g.seed);
    Ok(match *kind {
        GenKind::Ghz { n } => State::Symmetric(ghz_state(n)?),
        GenKind::Dicke { n, l } => State::Symmetric(dicke_state(n, l)?),
        GenKind::Dnk { n, k, d0, d1 } => State::Symmetric(dnk_state(n, k, d0, d1)?),
        GenKind::Gdicke { n, k, unique } => {
            for _ in 0..1000 {
                let alphas: Vec<Complex64> = (0..=k).map(|_| gaussian(&mut rng)).collect();
                let a: Vec<Vec<Complex64>> = (0..=k)
                    .map(|r| dicke_bitstrings(n, r).iter().map(|_| gaussian(&mut rng)).collect())
                    .collect();
                if !unique || uniqueness_conditions(n, k, &a) {
                    return Ok(State::Full(generalized_dicke_state(n, k, &alphas, &a)?));
                }
            }
            return Err(Failure::Numerical(format!(
                "no generalized Dicke state with n = {n}, k = {k} meets the uniqueness conditions"
            )));
        }
        GenKind::Random { n, full: false } => State::Symmetric(SymmetricState::random(n, &mut rng)?),
        GenKind::Random { n, full: true } => State::Full(FullState::random(n, &mut rng)?),
    })
}

fn parse_groups(text: &str) -> CliResult<Vec<Vec<usize>>> {
    text.split(';')
        .map(|group| {
            group
                .split(',')
                .map(|q| {
                    q.trim()
                        .parse::<usize>()
                        .map_err(|e| Failure::Input(format!("bad qubit index {q:?}: {e}")))
                })
                .collect()
        })
        .collect()
}

fn run(cli: Cli) -> CliResult<()> {
    let g = cli.global;
    let cluster_tol = g.tol.unwrap_or(DEFAULT_CLUSTER_TOL);
    match &cli.command {
        Command::Gen { kind, out } => emit(&docs::state_to_json(&generate(kind, &g)?), out.as_ref()),
        Command::Points { input, csv, csv_only } => {
            let c = majorana_points(&read_symmetric(input.as_ref())?, cluster_tol);
            let rows = docs::constellation_csv(&c);
            if let Some(path) = csv {
                fs::write(path, &rows).map_err(|e| Failure::Numerical(format!("{}: {e}", path.display())))?;
            }
            if *csv_only {
                emit(rows.trim_end(), None)
            } else {
                emit(&docs::constellation_to_json(&c), None)
            }
        }
        Command::Classify { input, json } => {
            let config = classify(&read_symmetric(input.as_ref())?, cluster_tol);
            if *json {
                let text = serde_json::to_string_pretty(&config).map_err(|e| Failure::Numerical(e.to_string()))?;
                emit(&text, None)
            } else {
                emit(&format!("{}\ndiversity {}", config.label(), config.diversity()), None)
            }
        }
        Command::Rotate { input, euler } => {
            let s = read_symmetric(input.as_ref())?;
            let rotated = su2_rotate(&s, &su2_from_euler(euler[0], euler[1], euler[2]))?;
            emit(&docs::state_to_json(&State::Symmetric(rotated)), None)
        }
        Command::Ilo { input, matrix } => {
            if matrix.len() != 4 {
                return Err(Failure::Input(format!("--matrix needs 4 entries, got {}", matrix.len())));
            }
            let s = read_symmetric(input.as_ref())?;
            let a = LocalOperation::new([[matrix[0], matrix[1]], [matrix[2], matrix[3]]])?;
            let out = apply_ilo(&s, &a)?;
            if out.ill_conditioned {
                eprintln!("warning: condition number {:.3e}", out.condition_number);
            }
            emit(&docs::state_to_json(&State::Symmetric(out.state)), None)
        }
        Command::Rdm { input, keep, symmetric } => {
            let state = read_state(input.as_ref())?;
            let rho = match (&state, symmetric) {
                (State::Symmetric(s), true) => {
                    let mut sorted = keep.clone();
                    sorted.sort_unstable();
                    sorted.dedup();
                    if sorted.len() != keep.len() || sorted.iter().any(|&q| q == 0 || q > s.n()) {
                        return Err(Failure::Numerical(format!("invalid qubit list {keep:?}")));
                    }
                    rdm_symmetric(s, keep.len())?
                }
                (State::Full(_), true) => return Err(Failure::Input("--symmetric needs a dicke-basis state".into())),
                _ => rdm_full(&full_of(&state)?, keep)?,
            };
            emit(&docs::density_to_json(&rho), None)
        }
        Command::Reconstruct { rho_a, rho_b } => {
            let a = docs::density_from_json(&read_text(Some(rho_a))?)?;
            let b = docs::density_from_json(&read_text(Some(rho_b))?)?;
            let defaults = ReconstructOptions::default();
            let opts = ReconstructOptions {
                tol: g.tol.unwrap_or(defaults.tol),
                restarts: g.restarts.unwrap_or(defaults.restarts),
                seed: g.seed,
                parallel: g.parallel,
                ..defaults
            };
            match reconstruct_from_two_marginals(&a, &b, &opts)? {
                Reconstruction::Unique(f) => emit(&docs::state_to_json(&State::Full(f)), None),
                Reconstruction::Ambiguous(classes) => {
                    eprintln!("{} inequivalent states share these marginals", classes.len());
                    emit("AMBIGUOUS", None)
                }
            }
        }
        Command::Falsify { input, marginals } => {
            let f = full_of(&read_state(input.as_ref())?)?;
            let targets = parse_groups(marginals)?
                .into_iter()
                .map(|keep| rdm_full(&f, &keep).map(|rho| (keep, rho)))
                .collect::<majorana::Result<Vec<_>>>()?;
            let defaults = SearchOptions::default();
            let opts = SearchOptions {
                tol: g.tol.unwrap_or(defaults.tol),
                restarts: g.restarts.unwrap_or(defaults.restarts),
                seed: g.seed,
                parallel: g.parallel,
            };
            let found = marginal_match_search(&targets, f.n(), &opts)?;
            let list: Vec<serde_json::Value> = found
                .iter()
                .map(|m| {
                    serde_json::json!({
                        "state": docs::StateDocument::from(&State::Full(m.state.clone())),
                        "residual": m.residual,
                        "fidelity_with_input": m.state.fidelity(&f),
                    })
                })
                .collect();
            let text = serde_json::to_string_pretty(&list).map_err(|e| Failure::Numerical(e.to_string()))?;
            emit(&text, None)
        }
        Command::Entangle { input, json } => {
            let defaults = GeometricOptions::default();
            let opts = GeometricOptions {
                grid: g.grid.unwrap_or(defaults.grid),
                restarts: g.restarts.unwrap_or(defaults.restarts),
                keep_landscape: false,
                parallel: g.parallel,
            };
            let report = geometric_measure(&read_symmetric(input.as_ref())?, &opts);
            if *json {
                let text = serde_json::to_string_pretty(&report).map_err(|e| Failure::Numerical(e.to_string()))?;
                return emit(&text, None);
            }
            let mut text = format!("eg = {}\nlog_eg = {}\nring = {}", report.eg, report.log_eg, report.ring);
            for p in &report.cpps {
                text.push_str(&format!("\ncpp alpha = {} beta = {}", p.alpha(), p.beta()));
            }
            emit(&text, None)
        }
        Command::Landscape { input } => {
            let s = read_symmetric(input.as_ref())?;
            let samples = landscape(&s, g.grid.unwrap_or(GeometricOptions::default().grid), g.parallel);
            let mut text = String::from("alpha,beta,fidelity");
            for p in samples {
                text.push_str(&format!("\n{:.17e},{:.17e},{:.17e}", p.alpha, p.beta, p.fidelity));
            }
            emit(&text, None)
        }
        Command::Table1 => {
            let tol = g.tol.unwrap_or(TABLE_TOL);
            let checks = check_table(DEFAULT_CLUSTER_TOL);
            let mut text = String::new();
            for c in &checks {
                let verdict = if c.passed(tol) { "ok" } else { "MISMATCH" };
                text.push_str(&format!("{verdict:8} {:32} max deviation {:.2e}\n", c.label, c.worst()));
            }
            emit(text.trim_end(), None)?;
            if checks.iter().all(|c| c.passed(tol)) {
                Ok(())
            } else {
                Err(Failure::Mismatch)
            }
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Input(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
        Err(Failure::Numerical(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(3)
        }
        Err(Failure::Mismatch) => ExitCode::from(1),
    }
}
