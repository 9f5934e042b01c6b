//! `subsum`: generate, solve and benchmark Subset-Sum instances, emit exponent
//! curves, run statistical checks and unrank bin elements.

use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Duration;

use anyhow::{bail, Context};
use clap::{Args, Parser, Subcommand, ValueEnum};
use num_bigint::BigUint;
use serde_json::{json, Value};

use subsum::bench::{rows_to_csv, run_bench, BenchSpec};
use subsum::costmodel::{sig9, CurveKind, ExponentCurve};
use subsum::gen::{generate, witness_path, write_generated, GenSpec};
use subsum::io::{parse_decimal, read_instance, InstanceFile};
use subsum::solve::{solve_instance, Algorithm};
use subsum::statslab::{
    bin_mean_check, bin_product_check, binomial_bounds_check, birthday_sim, split_check, value_hash_check, StatReport,
};
use subsum::{verify, BigItems, BigTable, Error, SolveResult, SolverBudget, WordItems, VERSION};

#[derive(Parser, Debug)]
#[command(name = "subsum", version, about = "Exact algorithms for Subset-Sum and its variants")]
struct Cli {
    #[command(flatten)]
    global: Global,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Debug)]
struct Global {
    /// Master seed; every command is deterministic given it.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    /// Cap on random samples in the sampling pre-filters.
    #[arg(long, global = true)]
    budget_samples: Option<u64>,
    /// Cap on modulus or bin draws per solver call.
    #[arg(long, global = true)]
    budget_repeats: Option<u64>,
    /// Wall-clock cap per solve, in milliseconds.
    #[arg(long, global = true)]
    time_cap_ms: Option<u64>,
    /// Skip the random-pair pre-filter of the Shifted-Sums representation solver.
    #[arg(long, global = true)]
    no_prefilter: bool,
    /// Output file; standard output when absent. For `gen` this is the instance path.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    #[arg(long, global = true, value_enum)]
    format: Option<Format>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Csv,
    Human,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Generate a random instance, optionally with a planted solution.
    Gen {
        variant: String,
        #[arg(long)]
        n: usize,
        #[arg(long)]
        bits: u64,
        /// Plant a solution with `plant · n` elements.
        #[arg(long)]
        plant: Option<f64>,
        /// Modulus for the modular variants, in decimal.
        #[arg(long)]
        modulus: Option<String>,
    },
    /// Solve an instance file.
    Solve {
        path: PathBuf,
        #[arg(long, default_value = "auto")]
        algo: String,
    },
    /// Time algorithms over a range of sizes.
    Bench {
        variant: String,
        #[arg(long)]
        n_min: usize,
        #[arg(long)]
        n_max: usize,
        #[arg(long, default_value_t = 2)]
        n_step: usize,
        /// Comma-separated algorithm names.
        #[arg(long, default_value = "mitm,rep")]
        algos: String,
        #[arg(long, default_value_t = 3)]
        reps: usize,
        /// Item width; the default depends on the variant.
        #[arg(long)]
        bits: Option<u64>,
    },
    /// Sample an exponent curve on a grid of ratios.
    Curve {
        kind: String,
        #[arg(long, default_value_t = 0.001)]
        step: f64,
    },
    /// Run one statistical check.
    Stats {
        #[command(subcommand)]
        check: StatsCheck,
    },
    /// Print the I-th element (1-based) of the bin T_{p,k} in χ order.
    Unrank {
        path: PathBuf,
        #[arg(long)]
        p: u64,
        #[arg(long)]
        k: u64,
        #[arg(long)]
        index: String,
    },
}

#[derive(Subcommand, Debug)]
enum StatsCheck {
    /// Mean bin size against 2^{(1-b)n}.
    BinMean {
        instance: PathBuf,
        #[arg(long)]
        b: f64,
        #[arg(long, default_value_t = 200)]
        trials: u64,
    },
    /// Mean product of the sizes of bins k and k + s.
    BinProduct {
        instance: PathBuf,
        #[arg(long, default_value = "0")]
        shift: String,
        #[arg(long)]
        b: f64,
        #[arg(long, default_value_t = 200)]
        trials: u64,
    },
    /// Frequency with which a random bin receives enough collision values.
    ValueHash {
        instance: PathBuf,
        #[arg(long, default_value = "0")]
        shift: String,
        #[arg(long)]
        ell: f64,
        #[arg(long)]
        b: f64,
        #[arg(long, default_value_t = 200)]
        trials: u64,
    },
    /// Probability of a marked pair among r draws from [N] and r from [M].
    Birthday {
        #[arg(long = "N")]
        big_n: u64,
        #[arg(long = "M")]
        big_m: u64,
        #[arg(long = "K")]
        big_k: u64,
        #[arg(long)]
        r: u64,
        #[arg(long, default_value_t = 200)]
        trials: u64,
    },
    /// Frequency of a 1:2 split of a solution by a random third.
    Split {
        #[arg(long)]
        n: u64,
        #[arg(long)]
        ell: f64,
        #[arg(long, default_value_t = 200)]
        trials: u64,
    },
    /// Entropy bounds on binomial coefficients over a fixed grid.
    Binomial,
}

/// Text to write and the process exit code.
struct Report {
    text: String,
    code: u8,
}

impl Report {
    fn ok(text: String) -> Self {
        Self { text, code: 0 }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 3 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(&cli) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(error_code(&e))
        }
    }
}

/// 3 for bad input, 4 for resource limits, 5 for internal failures.
fn error_code(e: &anyhow::Error) -> u8 {
    match e.downcast_ref::<Error>() {
        Some(Error::ResourceLimit(_)) => 4,
        Some(Error::ContractViolation(_)) => 5,
        _ => 3,
    }
}

fn run(cli: &Cli) -> anyhow::Result<u8> {
    let g = &cli.global;
    let report = match &cli.command {
        Command::Gen { variant, n, bits, plant, modulus } => {
            // --out names the instance file here, so the summary always goes to stdout
            let r = cmd_gen(g, variant, *n, *bits, *plant, modulus.as_deref())?;
            print!("{}", r.text);
            return Ok(r.code);
        }
        Command::Solve { path, algo } => cmd_solve(g, path, algo)?,
        Command::Bench { variant, n_min, n_max, n_step, algos, reps, bits } => {
            cmd_bench(g, variant, (*n_min, *n_max, *n_step), algos, *reps, *bits)?
        }
        Command::Curve { kind, step } => cmd_curve(g, kind, *step)?,
        Command::Stats { check } => cmd_stats(g, check)?,
        Command::Unrank { path, p, k, index } => cmd_unrank(g, path, *p, *k, index)?,
    };
    match &g.out {
        Some(path) => std::fs::write(path, &report.text).with_context(|| format!("writing {}", path.display()))?,
        None => print!("{}", report.text),
    }
    Ok(report.code)
}

fn budget(g: &Global) -> SolverBudget {
    let mut b = SolverBudget::with_seed(g.seed);
    if let Some(s) = g.budget_samples {
        b.sample_cap = s;
    }
    b.repeat_cap = g.budget_repeats;
    b.time_cap = g.time_cap_ms.map(Duration::from_millis);
    b.prefilter = !g.no_prefilter;
    b
}

fn format_or(g: &Global, default: Format, allowed: &[Format]) -> anyhow::Result<Format> {
    let f = g.format.unwrap_or(default);
    if !allowed.contains(&f) {
        bail!(Error::InvalidParameter(format!("format {f:?} is not available for this command").to_lowercase()));
    }
    Ok(f)
}

fn pretty(v: &Value) -> String {
    serde_json::to_string_pretty(v).expect("JSON values serialize") + "\n"
}

fn cmd_gen(
    g: &Global,
    variant: &str,
    n: usize,
    bits: u64,
    plant: Option<f64>,
    modulus: Option<&str>,
) -> anyhow::Result<Report> {
    let format = format_or(g, Format::Json, &[Format::Json, Format::Human])?;
    let mut spec = GenSpec::new(variant, n, bits, g.seed);
    spec.plant = plant;
    spec.modulus = modulus.map(parse_decimal).transpose()?;
    let generated = generate(&spec)?;
    let Some(path) = &g.out else {
        // without a path the instance itself is the output and no witness is kept
        let file = InstanceFile::from_instance(&generated.instance);
        return Ok(Report::ok(serde_json::to_string_pretty(&file)? + "\n"));
    };
    write_generated(path, &generated)?;
    let witness = generated.witness.as_ref().map(|_| witness_path(path));
    let text = match format {
        Format::Human => format!(
            "wrote {} ({variant}, n = {n}, seed {}){}\n",
            path.display(),
            g.seed,
            witness.map(|w| format!(", witness {}", w.display())).unwrap_or_default()
        ),
        _ => pretty(&json!({
            "command": "gen",
            "version": VERSION,
            "seed": g.seed,
            "variant": variant,
            "n": n,
            "bits": bits,
            "plant": plant,
            "instance": path.display().to_string(),
            "witness": witness.map(|w| w.display().to_string()),
        })),
    };
    Ok(Report::ok(text))
}

fn cmd_solve(g: &Global, path: &Path, algo: &str) -> anyhow::Result<Report> {
    let format = format_or(g, Format::Json, &[Format::Json, Format::Human])?;
    let instance = read_instance(path)?;
    let algo: Algorithm = algo.parse()?;
    let outcome = solve_instance(&instance, algo, &budget(g))?;
    let (code, verified) = match &outcome.result {
        SolveResult::Found(solution) => {
            if !verify(&instance, solution)? {
                bail!(Error::ContractViolation(format!("{} returned a solution that does not verify", algo.name())));
            }
            (0, Some(true))
        }
        SolveResult::NotFound => (1, None),
        SolveResult::Inconclusive => (2, None),
    };
    let text = match format {
        Format::Human => {
            let status = match &outcome.result {
                SolveResult::Found(s) => format!("found {}", serde_json::to_string(s)?),
                SolveResult::NotFound => "no solution".to_string(),
                SolveResult::Inconclusive => "inconclusive".to_string(),
            };
            format!("{}: {status} ({}, seed {})\n", path.display(), algo.name(), g.seed)
        }
        _ => pretty(&json!({
            "command": "solve",
            "version": VERSION,
            "seed": g.seed,
            "instance": path.display().to_string(),
            "variant": instance.variant().name(),
            "algorithm": algo.name(),
            "result": outcome.result,
            "trace": outcome.trace,
            "verified": verified,
        })),
    };
    Ok(Report { text, code })
}

fn cmd_bench(
    g: &Global,
    variant: &str,
    (n_min, n_max, n_step): (usize, usize, usize),
    algos: &str,
    reps: usize,
    bits: Option<u64>,
) -> anyhow::Result<Report> {
    let format = format_or(g, Format::Csv, &[Format::Csv, Format::Json])?;
    if n_step == 0 || n_min > n_max {
        bail!(Error::InvalidParameter("need n-min ≤ n-max and n-step ≥ 1".into()));
    }
    let algos = algos.split(',').map(|a| a.trim().parse()).collect::<Result<Vec<Algorithm>, _>>()?;
    let ns = (n_min..=n_max).step_by(n_step).collect();
    let mut spec = BenchSpec::new(variant, ns, algos, reps, g.seed);
    spec.bits = bits;
    spec.budget = budget(g);
    let rows = run_bench(&spec)?;
    let text = match format {
        Format::Json => pretty(&json!({ "command": "bench", "version": VERSION, "seed": g.seed, "rows": rows })),
        _ => rows_to_csv(&rows),
    };
    Ok(Report::ok(text))
}

fn cmd_curve(g: &Global, kind: &str, step: f64) -> anyhow::Result<Report> {
    let format = format_or(g, Format::Csv, &[Format::Csv, Format::Json, Format::Human])?;
    let curve = ExponentCurve::<f64>::sample(CurveKind::parse(kind)?, step)?;
    let max = curve.max();
    let text = match format {
        Format::Csv => curve.to_csv(),
        Format::Json => pretty(&json!({
            "command": "curve",
            "version": VERSION,
            "seed": g.seed,
            "kind": kind,
            "step": step,
            "max": max.map(|(l, gamma)| json!({ "l": l, "gamma": gamma })),
            "crossovers": curve.crossovers.iter().map(|(name, l)| json!({ "name": name, "l": l })).collect::<Vec<_>>(),
            "samples": curve.samples.iter().map(|(l, gamma)| [l, gamma]).collect::<Vec<_>>(),
        })),
        Format::Human => {
            let mut out = format!("{kind}: {} samples\n", curve.samples.len());
            if let Some((l, gamma)) = max {
                out += &format!("max gamma = {} at l = {}\n", sig9(gamma), sig9(l));
            }
            for (name, l) in &curve.crossovers {
                out += &format!("{name} = {}\n", sig9(*l));
            }
            out
        }
    };
    Ok(Report::ok(text))
}

/// Items of an instance file, narrowed to `u64` when every sum fits.
enum LoadedItems {
    Word(WordItems),
    Big(BigItems),
}

fn load_items(path: &Path) -> anyhow::Result<LoadedItems> {
    let items = read_instance(path)?.items().clone();
    Ok(match items.narrow::<u64>(2) {
        Some(small) => LoadedItems::Word(small),
        None => LoadedItems::Big(items),
    })
}

fn shift_u64(shift: &str) -> anyhow::Result<(BigUint, Option<u64>)> {
    let s = parse_decimal(shift)?;
    let small = u64::try_from(&s).ok();
    Ok((s, small))
}

fn run_stats(g: &Global, check: &StatsCheck) -> anyhow::Result<StatReport> {
    let seed = g.seed;
    Ok(match check {
        StatsCheck::BinMean { instance, b, trials } => match load_items(instance)? {
            LoadedItems::Word(items) => bin_mean_check(&items, *b, *trials, seed)?,
            LoadedItems::Big(items) => bin_mean_check(&items, *b, *trials, seed)?,
        },
        StatsCheck::BinProduct { instance, shift, b, trials } => {
            let (big, small) = shift_u64(shift)?;
            match (load_items(instance)?, small) {
                (LoadedItems::Word(items), Some(s)) => bin_product_check(&items, &s, *b, *trials, seed)?,
                (LoadedItems::Word(items), None) => bin_product_check(&items.to_big(), &big, *b, *trials, seed)?,
                (LoadedItems::Big(items), _) => bin_product_check(&items, &big, *b, *trials, seed)?,
            }
        }
        StatsCheck::ValueHash { instance, shift, ell, b, trials } => {
            let (big, small) = shift_u64(shift)?;
            match (load_items(instance)?, small) {
                (LoadedItems::Word(items), Some(s)) => value_hash_check(&items, &s, *ell, *b, *trials, seed)?,
                (LoadedItems::Word(items), None) => value_hash_check(&items.to_big(), &big, *ell, *b, *trials, seed)?,
                (LoadedItems::Big(items), _) => value_hash_check(&items, &big, *ell, *b, *trials, seed)?,
            }
        }
        StatsCheck::Birthday { big_n, big_m, big_k, r, trials } => {
            birthday_sim(*big_n, *big_m, *big_k, *r, *trials, seed)?
        }
        StatsCheck::Split { n, ell, trials } => split_check(*n, *ell, *trials, seed)?,
        StatsCheck::Binomial => binomial_bounds_check()?,
    })
}

fn cmd_stats(g: &Global, check: &StatsCheck) -> anyhow::Result<Report> {
    let format = format_or(g, Format::Json, &[Format::Json, Format::Human])?;
    let report = run_stats(g, check)?;
    let code = if report.verdict() { 0 } else { 1 };
    let text = match format {
        Format::Human => {
            let mut out = format!(
                "{}: {} (estimate {} vs bound {}, {} trials, seed {})\n",
                report.quantity,
                if report.verdict() { "pass" } else { "fail" },
                sig9(report.estimate),
                sig9(report.bound),
                report.trials,
                report.seed
            );
            for w in &report.warnings {
                out += &format!("warning: {w}\n");
            }
            out
        }
        _ => {
            let mut value = serde_json::to_value(&report)?;
            if let Value::Object(map) = &mut value {
                map.insert("version".into(), json!(VERSION));
            }
            pretty(&value)
        }
    };
    Ok(Report { text, code })
}

fn cmd_unrank(g: &Global, path: &Path, p: u64, k: u64, index: &str) -> anyhow::Result<Report> {
    let format = format_or(g, Format::Json, &[Format::Json, Format::Human])?;
    let items = read_instance(path)?.items().clone();
    let index = parse_decimal(index)?;
    let table = BigTable::build(&items, p)?;
    let subset = table.unrank(k, &index)?;
    let sum = items.sum(&subset);
    let text = match format {
        Format::Human => format!(
            "{{{}}} (sum {sum}, bin size {})\n",
            subset.members().iter().map(|i| i.to_string()).collect::<Vec<_>>().join(", "),
            table.bin_size(k % p.max(1))
        ),
        _ => pretty(&json!({
            "command": "unrank",
            "version": VERSION,
            "seed": g.seed,
            "p": p,
            "k": k,
            "index": index.to_string(),
            "bin_size": table.bin_size(k % p.max(1)).to_string(),
            "subset": subset.members(),
            "sum": sum.to_string(),
        })),
    };
    Ok(Report::ok(text))
}
