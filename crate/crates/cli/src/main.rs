use anyhow::Context;
use clap::{Parser, Subcommand};
use morsegrad::analysis::{inequalities, perfectness};
use morsegrad::io::{parse_gradient, write_cell_complex};
use morsegrad::random::{random_filtration, RandomShape};
use morsegrad::report::{
    betti_section, gradient_section, morse_numbers_section, persistence_section, Meta, Options,
    Report,
};
use morsegrad::{
    check_consistency, parse_input, validate_gradient, DiscreteGradient, Filtration, Graded,
    Prepared,
};
use serde::Serialize;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

#[derive(Parser)]
#[command(
    name = "morsegrad",
    version,
    about = "Discrete gradients and Morse complexes for multi-parameter filtrations"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
    /// Write the JSON report here.
    #[arg(long, global = true, value_name = "OUT")]
    json: Option<PathBuf>,
    /// Replace colliding vertex values by ranks instead of rejecting them.
    #[arg(long, global = true)]
    tiebreak: bool,
    /// Size of the worker pool.
    #[arg(long, global = true, value_name = "N")]
    threads: Option<usize>,
    /// Seed for `verify --random`.
    #[arg(long, global = true, value_name = "S")]
    seed: Option<u64>,
    /// Use the vector field in this file instead of computing one.
    #[arg(long, global = true, value_name = "FILE")]
    gradient: Option<PathBuf>,
}

#[derive(Subcommand)]
enum Command {
    /// Check that the vector field is an acyclic matching consistent with the grades.
    Validate { file: PathBuf },
    /// Compute a consistent discrete gradient.
    Gradient { file: PathBuf },
    /// Print the Morse complex in the cell-complex text format.
    Reduce { file: PathBuf },
    /// Critical cells per grade and degree.
    MorseNumbers { file: PathBuf },
    /// Betti tables of the persistence modules (one or two parameters).
    Betti { file: PathBuf },
    /// Persistence pairs (one parameter).
    Persistence { file: PathBuf },
    /// Compare Morse numbers with relative homology at every grade.
    CheckPerfect { file: PathBuf },
    /// Evaluate every inequality, or run the checks on random instances.
    Verify {
        #[arg(required_unless_present = "random")]
        file: Option<PathBuf>,
        /// Number of random two-dimensional bifiltered complexes.
        #[arg(long, value_name = "COUNT", num_args = 0..=1, default_missing_value = "100")]
        random: Option<usize>,
    },
}

impl Command {
    fn name(&self) -> &'static str {
        match self {
            Command::Validate { .. } => "validate",
            Command::Gradient { .. } => "gradient",
            Command::Reduce { .. } => "reduce",
            Command::MorseNumbers { .. } => "morse-numbers",
            Command::Betti { .. } => "betti",
            Command::Persistence { .. } => "persistence",
            Command::CheckPerfect { .. } => "check-perfect",
            Command::Verify { .. } => "verify",
        }
    }
}

/// Input problems exit with 2, failed checks with 1.
enum Failure {
    Input(anyhow::Error),
    Internal(anyhow::Error),
}

impl<E: Into<anyhow::Error>> From<E> for Failure {
    fn from(e: E) -> Self {
        Failure::Input(e.into())
    }
}

struct Loaded {
    filtration: Filtration,
    meta: Meta,
    gradient: Option<DiscreteGradient>,
}

fn load(cli: &Cli, file: &Path) -> Result<Loaded, Failure> {
    let text =
        std::fs::read_to_string(file).with_context(|| format!("reading {}", file.display()))?;
    let input = parse_input(&text).with_context(|| file.display().to_string())?;
    let (filtration, perturbations) = input
        .filtration(cli.tiebreak)
        .with_context(|| file.display().to_string())?;
    let mut meta = Meta::new(text.as_bytes(), options(cli));
    meta.params = Some(filtration.params());
    meta.cells = Some(filtration.complex().len());
    meta.perturbations = perturbations;
    let gradient = match &cli.gradient {
        Some(path) => {
            let g = std::fs::read_to_string(path)
                .with_context(|| format!("reading {}", path.display()))?;
            Some(
                parse_gradient(&g, filtration.complex())
                    .with_context(|| path.display().to_string())?,
            )
        }
        None if !filtration.is_max_extension() => {
            // explicit grades: only the invariants are meaningful
            Some(DiscreteGradient::trivial(filtration.complex()))
        }
        None => None,
    };
    Ok(Loaded {
        filtration,
        meta,
        gradient,
    })
}

fn options(cli: &Cli) -> Options {
    Options {
        command: cli.command.name().into(),
        tiebreak: cli.tiebreak,
        seed: cli.seed,
    }
}

/// Checks a supplied field before anything is built on it.
fn checked(l: &Loaded, report: &mut Report) -> Result<Option<Prepared>, Failure> {
    if let Some(v) = &l.gradient {
        let verdict = validate_gradient(l.filtration.complex(), v);
        let consistent = check_consistency(&l.filtration, v).consistent;
        if !verdict.valid || !consistent {
            report.gradient = Some(morsegrad::report::GradientSection {
                valid: verdict.valid,
                consistent,
                issues: verdict.issues,
                pairs: v
                    .pair_simplices(l.filtration.complex())
                    .map(|(s, t)| [s.clone(), t.clone()])
                    .collect(),
                critical: v
                    .critical_simplices(l.filtration.complex())
                    .cloned()
                    .collect(),
                critical_by_dim: v.morse_counts(l.filtration.complex()),
            });
            return Ok(None);
        }
    }
    let p =
        Prepared::new(&l.filtration, l.gradient.clone()).map_err(|e| Failure::Input(e.into()))?;
    Ok(Some(p))
}

fn write_json(cli: &Cli, json: &str) -> Result<(), Failure> {
    if let Some(out) = &cli.json {
        std::fs::write(out, json).with_context(|| format!("writing {}", out.display()))?;
    }
    Ok(())
}

fn run(cli: &Cli) -> Result<bool, Failure> {
    let file = match &cli.command {
        Command::Verify {
            random: Some(count),
            ..
        } => return verify_random(cli, *count),
        Command::Validate { file }
        | Command::Gradient { file }
        | Command::Reduce { file }
        | Command::MorseNumbers { file }
        | Command::Betti { file }
        | Command::Persistence { file }
        | Command::CheckPerfect { file } => file,
        Command::Verify { file, .. } => file.as_ref().expect("required by clap"),
    };
    let l = load(cli, file)?;
    let mut report = Report::new(l.meta.clone());
    let Some(p) = checked(&l, &mut report)? else {
        let g = report.gradient.as_ref().expect("set on failure");
        println!(
            "vector field invalid or inconsistent: {} issue(s)",
            g.issues.len()
        );
        for issue in &g.issues {
            println!("  {issue:?}");
        }
        if !g.consistent {
            println!("  a pair joins cells of different grades");
        }
        write_json(cli, &report.to_json())?;
        return Ok(false);
    };
    let ok = match &cli.command {
        Command::Validate { .. } | Command::Gradient { .. } => {
            let g = gradient_section(&p);
            println!(
                "{} pairs, critical cells by dimension {:?}",
                g.pairs.len(),
                g.critical_by_dim
            );
            let ok = g.valid && g.consistent;
            println!("valid: {}, consistent: {}", g.valid, g.consistent);
            report.gradient = Some(g);
            ok
        }
        Command::Reduce { .. } => {
            let m = p.morse();
            let grades: Vec<_> = m.grades().iter().map(|u| p.decompress(u)).collect();
            print!("{}", write_cell_complex(m.cells(), &grades, m.params()));
            report.add_gradient(&p);
            report.add_morse_numbers(&p);
            true
        }
        Command::MorseNumbers { .. } => {
            let s = morse_numbers_section(&p);
            for r in &s.records {
                println!("m_{}{} = {}", r.degree, r.grade, r.count);
            }
            println!("totals {:?}", s.totals);
            report.morse_numbers = Some(s);
            true
        }
        Command::Betti { .. } => {
            if p.filtration().params() > 2 {
                return Err(Failure::Input(anyhow::anyhow!(
                    "Betti tables need one or two parameters, input has {}",
                    p.filtration().params()
                )));
            }
            let s = betti_section(&p).map_err(|e| Failure::Internal(e.into()))?;
            for r in &s.records {
                println!("q={} {} xi={:?}", r.degree, r.grade, r.xi);
            }
            report.betti_tables = Some(s);
            true
        }
        Command::Persistence { .. } => {
            if p.filtration().params() != 1 {
                return Err(Failure::Input(anyhow::anyhow!(
                    "persistence pairs need one parameter, input has {}",
                    p.filtration().params()
                )));
            }
            let s = persistence_section(&p).map_err(|e| Failure::Internal(e.into()))?;
            for r in &s.pairs {
                let death = r.death.as_ref().map_or("inf".into(), |d| d.to_string());
                println!("q={} [{}, {death})", r.degree, r.birth);
            }
            println!("{} ephemeral pairs", s.ephemeral.len());
            report.persistence_pairs = Some(s);
            true
        }
        Command::CheckPerfect { .. } => {
            let r = perfectness(&p).map_err(|e| Failure::Internal(e.into()))?;
            println!("relative-perfect: {}", r.relative_perfect);
            for w in &r.witnesses {
                println!(
                    "  witness u={} q={}: m={} > {}",
                    w.grade, w.degree, w.morse, w.relative
                );
            }
            let ok = r.relative_perfect;
            report.perfectness = Some(r);
            ok
        }
        Command::Verify { .. } => {
            report = morsegrad::report::full_report(&p, l.meta.clone())
                .map_err(|e| Failure::Internal(e.into()))?;
            let r = report.inequalities.as_ref().expect("full report");
            println!("relative-perfect: {}", r.relative_perfect);
            println!("all inequalities hold: {}", r.all_hold);
            let sharp = r
                .bounds
                .iter()
                .flatten()
                .filter(|b| b.lower_equal || b.upper_equal == Some(true))
                .count();
            if r.bounds.is_some() {
                println!("{sharp} sharp Betti bound(s)");
            }
            r.all_hold
        }
    };
    write_json(cli, &report.to_json())?;
    Ok(ok)
}

#[derive(Serialize)]
struct RandomRun {
    meta: Meta,
    instances: usize,
    first_seed: u64,
    shape: String,
    failures: Vec<RandomFailure>,
}

#[derive(Serialize)]
struct RandomFailure {
    seed: u64,
    reason: String,
}

/// Every computed field on a two-dimensional complex should be
/// relative-perfect and satisfy both Betti bounds.
fn verify_random(cli: &Cli, count: usize) -> Result<bool, Failure> {
    let first_seed = cli.seed.unwrap_or(0);
    let shape = RandomShape::surface_like(2);
    let mut failures = Vec::new();
    for seed in first_seed..first_seed + count as u64 {
        let f = random_filtration(seed, shape);
        let reason = match check_instance(&f) {
            Ok(None) => continue,
            Ok(Some(r)) => r,
            Err(e) => format!("error: {e}"),
        };
        println!("seed {seed}: {reason}");
        failures.push(RandomFailure { seed, reason });
    }
    println!("{} of {count} instances passed", count - failures.len());
    let run = RandomRun {
        meta: Meta::new(b"", options(cli)),
        instances: count,
        first_seed,
        shape: format!("{shape:?}"),
        failures,
    };
    let mut json = serde_json::to_string_pretty(&run).context("serializing report")?;
    json.push('\n');
    write_json(cli, &json)?;
    Ok(run.failures.is_empty())
}

fn check_instance(f: &Filtration) -> anyhow::Result<Option<String>> {
    let p = Prepared::new(f, None)?;
    let g = gradient_section(&p);
    if !g.valid || !g.consistent {
        return Ok(Some("computed field invalid or inconsistent".into()));
    }
    let r = inequalities(&p, true)?;
    if !r.relative_perfect {
        return Ok(Some("computed field not relative-perfect".into()));
    }
    if !r.all_hold {
        return Ok(Some("an inequality fails".into()));
    }
    Ok(None)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Some(n) = cli.threads {
        if n == 0 {
            eprintln!("error: --threads must be at least 1");
            return ExitCode::from(2);
        }
        if let Err(e) = rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build_global()
        {
            eprintln!("error: {e}");
            return ExitCode::from(2);
        }
    }
    match run(&cli) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(Failure::Input(e)) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
        Err(Failure::Internal(e)) => {
            eprintln!("internal error: {e:#}");
            ExitCode::from(1)
        }
    }
}
