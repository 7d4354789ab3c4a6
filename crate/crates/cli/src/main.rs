//! `circlepaint`: colour circle graphs from the command line.
//!
//! JSON goes to stdout, summaries to stderr. Exit codes: 0 ok, 1 verification
//! failed, 2 bad input, 3 internal invariant violation.

use std::fmt;
use std::fs;
use std::io::{Read, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Instant;

use clap::{Parser, Subcommand};
use rayon::prelude::*;
use serde::Serialize;
use serde_json::{json, Value};

use circlepaint::format::{self, ColouringOutput};
use circlepaint::graph::overlap_graph;
use circlepaint::lowerbound::{generate_d, verify_lower_bound_instance};
use circlepaint::oracle::{self, ChiResult, DEFAULT_NODE_BUDGET};
use circlepaint::pillar::{build_colouring, permutation_colouring, ColourSet, GapInterval};
use circlepaint::solver::{self, SolveError};
use circlepaint::system::{
    permutation_example, pillar_example, PERMUTATION_EXAMPLE_GAP, PILLAR_EXAMPLE_ORDER,
};
use circlepaint::{chords_to_intervals, omega, IntervalSystem};

#[derive(Parser)]
#[command(
    name = "circlepaint",
    version,
    about = "Colour circle graphs given as interval overlap systems"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Colour a system (or chord diagram) and print the colouring.
    Color {
        /// Input file, or `-` for stdin.
        #[arg(long)]
        input: PathBuf,
        /// Re-check properness and the colour bound independently.
        #[arg(long)]
        assert_bounds: bool,
    },
    /// Print the clique number and a witness clique.
    Omega {
        #[arg(long)]
        input: PathBuf,
    },
    /// Check a colouring against a system.
    Verify {
        #[arg(long)]
        input: PathBuf,
        /// JSON document with a `colors` object.
        #[arg(long)]
        colors: PathBuf,
    },
    /// Exact chromatic number by branch and bound.
    ExactChi {
        #[arg(long)]
        input: PathBuf,
        /// Maximum number of search nodes.
        #[arg(long, default_value_t = DEFAULT_NODE_BUDGET)]
        budget: u64,
    },
    /// Generate the lower-bound chord diagram D(n, w).
    GenLower {
        #[arg(long)]
        n: u32,
        #[arg(long)]
        omega: u32,
        /// Also check size, clique and stable-set bounds.
        #[arg(long)]
        verify: bool,
        /// Largest expanded chord count checked by brute force.
        #[arg(long, default_value_t = 64)]
        brute_limit: usize,
    },
    /// Generate a seeded random interval system.
    GenRandom {
        #[arg(long)]
        m: usize,
        #[arg(long)]
        seed: u64,
    },
    /// Reproduce the two worked examples exactly.
    Selftest,
    /// Time the solver on random systems.
    Bench {
        /// Comma-separated system sizes.
        #[arg(long, value_delimiter = ',', default_value = "1000,10000")]
        sizes: Vec<usize>,
        /// Seeds 0..K per size.
        #[arg(long, default_value_t = 3)]
        seeds: u64,
    },
}

#[derive(Debug)]
enum CliError {
    Input(String),
    Verification(String),
    Invariant(String),
}

impl CliError {
    fn code(&self) -> u8 {
        match self {
            CliError::Verification(_) => 1,
            CliError::Input(_) => 2,
            CliError::Invariant(_) => 3,
        }
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Input(m) => write!(f, "bad input: {m}"),
            CliError::Verification(m) => write!(f, "verification failed: {m}"),
            CliError::Invariant(m) => write!(f, "internal invariant violated: {m}"),
        }
    }
}

impl From<SolveError> for CliError {
    fn from(e: SolveError) -> Self {
        CliError::Invariant(e.to_string())
    }
}

fn read_input(path: &Path) -> Result<String, CliError> {
    if path == Path::new("-") {
        let mut s = String::new();
        std::io::stdin()
            .read_to_string(&mut s)
            .map_err(|e| CliError::Input(format!("stdin: {e}")))?;
        return Ok(s);
    }
    fs::read_to_string(path).map_err(|e| CliError::Input(format!("{}: {e}", path.display())))
}

/// Loads an interval system, a chord diagram, or the `diagram` field of a
/// `gen-lower` document.
fn load_system(path: &Path) -> Result<IntervalSystem, CliError> {
    let text = read_input(path)?;
    let value: Value = serde_json::from_str(&text).map_err(|e| CliError::Input(e.to_string()))?;
    let bad = |e: format::FormatError| CliError::Input(e.to_string());
    if value.get("intervals").is_some() {
        format::parse_system(&text).map_err(bad)
    } else if value.get("chords").is_some() {
        Ok(chords_to_intervals(
            &format::parse_diagram(&text).map_err(bad)?,
        ))
    } else if let Some(d) = value.get("diagram") {
        Ok(chords_to_intervals(
            &format::parse_diagram(&d.to_string()).map_err(bad)?,
        ))
    } else {
        Err(CliError::Input(
            "expected an \"intervals\", \"chords\" or \"diagram\" field".into(),
        ))
    }
}

fn print_json(v: &impl Serialize) {
    let text = serde_json::to_string_pretty(v).expect("output serializes");
    // A closed pipe (e.g. `| head`) is not an error worth reporting.
    let _ = writeln!(std::io::stdout().lock(), "{text}");
}

fn cmd_color(input: &Path, assert_bounds: bool) -> Result<(), CliError> {
    let sys = load_system(input)?;
    let sol = solver::colour(&sys)?;
    if assert_bounds {
        let g = overlap_graph(&sys);
        if !oracle::verify_colouring(&g, &sol.colour_map(&sys)) {
            return Err(CliError::Invariant(
                "independent verifier rejected the colouring".into(),
            ));
        }
        let st = &sol.stats;
        if st.omega >= 2 && st.colors_used > st.bound as usize {
            return Err(CliError::Invariant(format!(
                "{} colours exceed bound {}",
                st.colors_used, st.bound
            )));
        }
    }
    eprintln!(
        "{} intervals, omega {}, {} colours (bound {}), {} pillars",
        sys.len(),
        sol.stats.omega,
        sol.stats.colors_used,
        sol.stats.bound,
        sol.stats.pillar_count
    );
    print_json(&ColouringOutput::from_solution(&sys, &sol));
    Ok(())
}

fn cmd_omega(input: &Path) -> Result<(), CliError> {
    let sys = load_system(input)?;
    let clique = omega(&sys);
    let witness: Vec<&str> = clique
        .members
        .iter()
        .map(|&i| sys.interval(i).id.as_str())
        .collect();
    eprintln!("omega = {}", clique.size);
    print_json(&json!({ "omega": clique.size, "witness": witness }));
    Ok(())
}

fn cmd_verify(input: &Path, colors: &Path) -> Result<(), CliError> {
    let sys = load_system(input)?;
    let colours =
        format::parse_colours(&read_input(colors)?).map_err(|e| CliError::Input(e.to_string()))?;
    let g = overlap_graph(&sys);
    let valid = oracle::verify_colouring(&g, &colours);
    let uncoloured: Vec<&str> = g
        .ids()
        .iter()
        .filter(|id| !colours.contains_key(*id))
        .map(String::as_str)
        .collect();
    let conflicts: Vec<[&str; 2]> = g
        .edges()
        .filter(|&(u, v)| {
            let (a, b) = (colours.get(&g.ids()[u]), colours.get(&g.ids()[v]));
            a.is_some() && a == b
        })
        .map(|(u, v)| [g.ids()[u].as_str(), g.ids()[v].as_str()])
        .collect();
    print_json(&json!({ "valid": valid, "uncoloured": uncoloured, "conflicts": conflicts }));
    if valid {
        eprintln!("colouring is proper and total");
        Ok(())
    } else {
        Err(CliError::Verification(format!(
            "{} uncoloured, {} monochromatic edges",
            uncoloured.len(),
            conflicts.len()
        )))
    }
}

fn cmd_exact_chi(input: &Path, budget: u64) -> Result<(), CliError> {
    let sys = load_system(input)?;
    let g = overlap_graph(&sys);
    match oracle::exact_chi(&g, budget) {
        ChiResult::Exact(v) => {
            eprintln!("chi = {v}");
            print_json(&json!({ "chi": v }));
        }
        ChiResult::Exhausted => {
            eprintln!("search exhausted after {budget} nodes");
            print_json(&json!({ "chi": "exhausted", "budget": budget }));
        }
    }
    Ok(())
}

fn cmd_gen_lower(n: u32, w: u32, verify: bool, brute_limit: usize) -> Result<(), CliError> {
    let d = generate_d(n, w).map_err(|e| CliError::Input(e.to_string()))?;
    let mut out = json!({ "diagram": format::diagram_to_json(&d) });
    let mut failed = false;
    if verify {
        let r = verify_lower_bound_instance(n, w, brute_limit)
            .map_err(|e| CliError::Input(e.to_string()))?;
        eprintln!(
            "D({n}, {w}): {} chords, clique {}, stable {}, {}",
            r.chord_count,
            r.clique_checked,
            r.stable_checked
                .map_or("skipped".to_string(), |s| s.to_string()),
            if r.passed {
                "all checks pass"
            } else {
                "CHECK FAILED"
            }
        );
        failed = !r.passed;
        out["report"] = serde_json::to_value(&r).expect("report serializes");
    } else {
        eprintln!("D({n}, {w}): {} chords", d.chord_count());
    }
    print_json(&out);
    if failed {
        return Err(CliError::Verification(format!(
            "D({n}, {w}) failed a structural check"
        )));
    }
    Ok(())
}

fn cmd_gen_random(m: usize, seed: u64) -> Result<(), CliError> {
    let sys = oracle::random_system(m, seed);
    eprintln!("random system: m = {m}, seed = {seed}");
    print_json(&format::system_to_json(&sys));
    Ok(())
}

fn cmd_selftest() -> Result<(), CliError> {
    let f1 = permutation_example();
    let all: Vec<usize> = (0..f1.len()).collect();
    let phi = permutation_colouring(
        &f1,
        &all,
        PERMUTATION_EXAMPLE_GAP,
        &ColourSet::new(vec![1, 2, 3]),
    )
    .map_err(|e| CliError::Invariant(e.to_string()))?;
    let permutation_example_colours: std::collections::BTreeMap<&str, u32> = phi
        .iter()
        .map(|&(i, c)| (f1.interval(i).id.as_str(), c))
        .collect();
    let permutation_example_want: std::collections::BTreeMap<&str, u32> =
        [("A", 1), ("B", 2), ("C", 2), ("D", 1), ("E", 3)]
            .into_iter()
            .collect();

    let f2 = pillar_example();
    let state = build_colouring(&f2, &PILLAR_EXAMPLE_ORDER)
        .map_err(|e| CliError::Invariant(e.to_string()))?;
    let pillar_example_out = ColouringOutput::from_state(&state);
    let sets: Vec<Vec<u32>> = state
        .colour_sets()
        .iter()
        .map(|c| c.as_slice().to_vec())
        .collect();
    let sets_ok = sets == vec![vec![1, 2, 3], vec![4], vec![5], vec![2, 6], vec![1, 3]];
    let pillar_example_want = [
        ("I1", 1),
        ("I2", 1),
        ("I3", 2),
        ("I4", 3),
        ("I5", 5),
        ("I6", 2),
        ("I7", 2),
        ("I8", 6),
        ("I9", 1),
        ("I10", 3),
        ("I11", 4),
    ];
    let colours_ok = pillar_example_want
        .iter()
        .all(|&(id, c)| pillar_example_out.colors.get(id) == Some(&c));
    let degree = state
        .degree(GapInterval::new(7, 13))
        .map_err(|e| CliError::Invariant(e.to_string()))?;

    let permutation_example_ok = permutation_example_colours == permutation_example_want;
    let passed = permutation_example_ok && sets_ok && colours_ok && degree == 5;
    print_json(&json!({
        "permutation_example": { "colors": permutation_example_colours, "pass": permutation_example_ok },
        "pillar_example": {
            "colour_sets": sets,
            "colors": pillar_example_out.colors,
            "pass": sets_ok && colours_ok,
        },
        "degree_7_13": degree,
        "passed": passed,
    }));
    if passed {
        eprintln!("selftest passed");
        Ok(())
    } else {
        Err(CliError::Verification(
            "worked examples do not reproduce".into(),
        ))
    }
}

#[derive(Serialize)]
struct BenchRow {
    m: usize,
    seed: u64,
    omega: u32,
    colors_used: usize,
    bound: u32,
    pillars: usize,
    seconds: f64,
}

fn cmd_bench(sizes: &[usize], seeds: u64) -> Result<(), CliError> {
    let jobs: Vec<(usize, u64)> = sizes
        .iter()
        .flat_map(|&m| (0..seeds).map(move |s| (m, s)))
        .collect();
    let rows: Vec<BenchRow> = jobs
        .par_iter()
        .map(|&(m, seed)| {
            let sys = oracle::random_system(m, seed);
            let start = Instant::now();
            let sol = solver::colour(&sys)?;
            Ok(BenchRow {
                m,
                seed,
                omega: sol.stats.omega,
                colors_used: sol.stats.colors_used,
                bound: sol.stats.bound,
                pillars: sol.stats.pillar_count,
                seconds: start.elapsed().as_secs_f64(),
            })
        })
        .collect::<Result<_, SolveError>>()?;
    eprintln!(
        "{:>8} {:>6} {:>6} {:>8} {:>7} {:>9}",
        "m", "seed", "omega", "colours", "bound", "seconds"
    );
    for r in &rows {
        eprintln!(
            "{:>8} {:>6} {:>6} {:>8} {:>7} {:>9.3}",
            r.m, r.seed, r.omega, r.colors_used, r.bound, r.seconds
        );
    }
    print_json(&rows);
    Ok(())
}

fn run(cli: Cli) -> Result<(), CliError> {
    match cli.command {
        Command::Color {
            input,
            assert_bounds,
        } => cmd_color(&input, assert_bounds),
        Command::Omega { input } => cmd_omega(&input),
        Command::Verify { input, colors } => cmd_verify(&input, &colors),
        Command::ExactChi { input, budget } => cmd_exact_chi(&input, budget),
        Command::GenLower {
            n,
            omega,
            verify,
            brute_limit,
        } => cmd_gen_lower(n, omega, verify, brute_limit),
        Command::GenRandom { m, seed } => cmd_gen_random(m, seed),
        Command::Selftest => cmd_selftest(),
        Command::Bench { sizes, seeds } => cmd_bench(&sizes, seeds),
    }
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::new().filter("CIRCLEPAINT_LOG")).init();
    match run(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.code())
        }
    }
}
