use std::io::{self, Write};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use serde::Serialize;
use serde_json::{json, Value};

use diagmon::cells::{analyze_within, Params};
use diagmon::diagram::{enumerate_within, Budget};
use diagmon::dims::DimTable;
use diagmon::nonss::{asymptotic_ratio, simple_dims, Family};
use diagmon::suite::{run_criterion, suite_id, SUITES};
use diagmon::twist::{
    canonical_twisting_from, tightness_report, twisted_product, verify_green_product, verify_idempotent_formula,
    verify_main_theorem, verify_simple_dims, verify_zero_twisted_green, CommutativeMonoid,
};
use diagmon::walks::{approx, exact_distribution, gaussian_prediction, gaussian_profile_check, plancherel_walk, tail_mass, CharacterTable};
use diagmon::{cells::At, DiagramProducts, Error, EvaluationMap, Flavor};

/// Exact computations for diagram monoids.
#[derive(Parser)]
#[command(name = "diagmon", version)]
struct Cli {
    /// Seed for randomized procedures.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    /// Emit tabular payloads as CSV instead of JSON.
    #[arg(long, global = true)]
    csv: bool,
    /// Largest n to enumerate, for every flavor (default 6 for partitions, 8 otherwise).
    #[arg(long, global = true)]
    budget: Option<usize>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// List the diagrams of one flavor.
    Enumerate {
        #[command(flatten)]
        target: Target,
        #[arg(long)]
        count_only: bool,
    },
    /// Green's structure, Gram ranks and simple dimensions.
    Analyze {
        #[command(flatten)]
        target: Target,
        /// `classical`, `zero`, `aI=V`, `prefix=1,0;period=1` or `generic`.
        #[arg(long, default_value = "classical")]
        params: Params,
    },
    /// Cell module dimensions from the closed formulas.
    CellDims {
        #[command(flatten)]
        target: Target,
    },
    /// Tightness and the twisted-product theorem checks.
    TwistCheck {
        #[command(flatten)]
        target: Target,
        #[arg(long, default_value = "classical")]
        params: EvaluationMap,
        /// Commutative monoid, `saturating:<m>`.
        #[arg(long = "M", default_value = "saturating:3")]
        m: String,
        #[arg(long, default_value_t = 1)]
        q: usize,
    },
    /// Simple dimensions at a root of unity of order l.
    Nonss {
        #[arg(long)]
        family: Family,
        #[arg(long)]
        n: usize,
        #[arg(long)]
        l: usize,
    },
    /// Weight distribution of the walk against its Gaussian prediction.
    Concentrate {
        #[command(flatten)]
        target: Target,
        /// Half-width of the fitted window, in units of sqrt(n).
        #[arg(long, default_value_t = 3.0)]
        window: f64,
    },
    /// Total variation distance of the tensor walk on S(t) from Plancherel.
    Plancherel {
        #[arg(long, default_value_t = 5)]
        t: usize,
        #[arg(long, default_value_t = 200)]
        steps: usize,
        /// Index of the starting irreducible.
        #[arg(long, default_value_t = 0)]
        start: usize,
    },
    /// Run acceptance criteria.
    VerifyAll {
        /// One suite by name or number; all when omitted.
        #[arg(long)]
        suite: Option<String>,
    },
}

#[derive(Args)]
struct Target {
    #[arg(long)]
    flavor: Flavor,
    #[arg(long)]
    n: usize,
}

enum Failure {
    Usage(String),
    Verification(String),
    Budget(String),
    Io(io::Error),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::BudgetExceeded { .. } => Failure::Budget(e.to_string()),
            Error::NotTight(_) | Error::HypothesisFailed(_) | Error::CocycleViolation(..) => {
                Failure::Verification(e.to_string())
            }
            _ => Failure::Usage(e.to_string()),
        }
    }
}

impl From<io::Error> for Failure {
    fn from(e: io::Error) -> Self {
        Failure::Io(e)
    }
}

impl From<csv::Error> for Failure {
    fn from(e: csv::Error) -> Self {
        Failure::Io(e.into())
    }
}

type Outcome = std::result::Result<(), Failure>;

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(&cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            let (code, msg) = match f {
                Failure::Usage(m) => (1, m),
                Failure::Verification(m) => (2, m),
                Failure::Budget(m) => (3, m),
                Failure::Io(e) if e.kind() == io::ErrorKind::BrokenPipe => return ExitCode::SUCCESS,
                Failure::Io(e) => (1, e.to_string()),
            };
            eprintln!("diagmon: {msg}");
            ExitCode::from(code)
        }
    }
}

fn budget(cli: &Cli) -> Budget {
    match cli.budget {
        Some(n) => Budget { partition_max_n: n, other_max_n: n },
        None => Budget::default(),
    }
}

fn emit_json<T: Serialize>(value: &T) -> Outcome {
    let mut out = io::stdout().lock();
    serde_json::to_writer_pretty(&mut out, value).map_err(io::Error::from)?;
    writeln!(out)?;
    Ok(())
}

fn emit_csv(header: &[&str], rows: impl IntoIterator<Item = Vec<String>>) -> Outcome {
    let mut w = csv::Writer::from_writer(io::stdout().lock());
    w.write_record(header)?;
    for row in rows {
        w.write_record(&row)?;
    }
    w.flush()?;
    Ok(())
}

fn run(cli: &Cli) -> Outcome {
    match &cli.command {
        Command::Enumerate { target, count_only } => {
            let ds = enumerate_within(target.flavor, target.n, &budget(cli))?;
            match (*count_only, cli.csv) {
                (true, false) => emit_json(&json!({ "count": ds.len() })),
                (true, true) => emit_csv(&["count"], [vec![ds.len().to_string()]]),
                (false, false) => emit_json(&json!({
                    "flavor": target.flavor.short(),
                    "n": target.n,
                    "count": ds.len(),
                    "diagrams": ds.iter().map(|d| d.to_string()).collect::<Vec<_>>(),
                })),
                (false, true) => emit_csv(
                    &["index", "diagram", "through_strands"],
                    ds.iter().enumerate().map(|(i, d)| vec![i.to_string(), d.to_string(), d.through_strands().to_string()]),
                ),
            }
        }
        Command::Analyze { target, params } => {
            let a = analyze_within(target.flavor, target.n, params, cli.seed, &budget(cli))?;
            if cli.csv {
                emit_csv(
                    &["j", "apex", "size", "rows", "cols", "h_size", "idempotents", "rank"],
                    a.j_classes.iter().map(|c| {
                        vec![
                            c.j.to_string(),
                            c.apex.map_or_else(String::new, |k| k.to_string()),
                            c.size.to_string(),
                            c.rows.to_string(),
                            c.cols.to_string(),
                            c.h_size.to_string(),
                            c.idempotents.to_string(),
                            c.rank.map_or_else(String::new, |r| r.to_string()),
                        ]
                    }),
                )
            } else {
                emit_json(&a)
            }
        }
        Command::CellDims { target } => {
            let b = budget(cli);
            let max = if target.flavor == Flavor::Partition { b.partition_max_n } else { b.other_max_n };
            // The formulas need no enumeration, so the budget only guards absurd sizes.
            if target.n > 4 * max {
                return Err(Failure::Budget(format!("n = {} is above 4 x the budget {max}", target.n)));
            }
            let table = DimTable::new(target.flavor, target.n);
            if cli.csv {
                emit_csv(&["flavor", "n", "k", "lambda", "dim"], table.csv_rows().into_iter().map(Vec::from))
            } else {
                emit_json(&json!({ "table": table, "sum_of_squares": table.sum_of_squares().to_string() }))
            }
        }
        Command::TwistCheck { target, params, m, q } => twist_check(cli, target, params, m, *q),
        Command::Nonss { family, n, l } => {
            let dims = simple_dims(*family, *n, *l)?;
            if cli.csv {
                emit_csv(&["n", "k", "b"], dims.iter().map(|(k, b)| vec![n.to_string(), k.to_string(), b.to_string()]))
            } else {
                let report = asymptotic_ratio(*family, *n, *l)?;
                emit_json(&json!({
                    "family": family.to_string(),
                    "n": n,
                    "l": l,
                    "rows": dims.iter().map(|(k, b)| json!({ "k": k, "b": b.to_string() })).collect::<Vec<_>>(),
                    "asymptotic": {
                        "n": report.n,
                        "scaled": report.scaled,
                        "ratio": report.ratio,
                        "lower": report.lower,
                        "upper": report.upper,
                        "bounds_ok": report.bounds_ok,
                    },
                }))
            }
        }
        Command::Concentrate { target, window } => {
            let d = exact_distribution(target.flavor, target.n)?;
            let pred = gaussian_prediction(&d)?;
            if cli.csv {
                emit_csv(
                    &["k", "prob", "gaussian_pred"],
                    d.numerators.keys().map(|&k| vec![k.to_string(), format!("{:e}", approx(&d.prob(k))), format!("{:e}", pred[&k])]),
                )
            } else {
                let profile = gaussian_profile_check(&d, *window)?;
                let tail = tail_mass(&d, *window)?;
                emit_json(&json!({
                    "flavor": target.flavor.short(),
                    "n": target.n,
                    "window": window,
                    "profile": profile,
                    "tail_outside_window": approx(&tail),
                }))
            }
        }
        Command::Plancherel { t, steps, start } => {
            let table = CharacterTable::new(*t);
            if *start >= table.len() {
                return Err(Failure::Usage(format!("start {start} is not an irreducible of S({t}) ({} of them)", table.len())));
            }
            let tv: Vec<f64> = plancherel_walk(&table, *start, *steps).iter().map(approx).collect();
            if cli.csv {
                emit_csv(&["step", "tv"], tv.iter().enumerate().map(|(i, v)| vec![(i + 1).to_string(), format!("{v:e}")]))
            } else {
                emit_json(&json!({ "t": t, "start": start, "steps": steps, "tv": tv }))
            }
        }
        Command::VerifyAll { suite } => verify_all(cli, suite.as_deref()),
    }
}

fn parse_commutative(spec: &str) -> Result<CommutativeMonoid, Failure> {
    let (kind, arg) = spec.split_once(':').unwrap_or((spec, ""));
    let m: usize = arg.parse().map_err(|_| Failure::Usage(format!("bad --M `{spec}`, expected saturating:<m>")))?;
    match kind {
        "saturating" => Ok(CommutativeMonoid::saturating(m)),
        "cyclic" => Ok(CommutativeMonoid::cyclic(m)?),
        _ => Err(Failure::Usage(format!("unknown commutative monoid `{kind}`"))),
    }
}

fn twist_check(cli: &Cli, target: &Target, a: &EvaluationMap, m: &str, q: usize) -> Outcome {
    let m = parse_commutative(m)?;
    let products = DiagramProducts::within(target.flavor, target.n, &budget(cli))?;
    let t = canonical_twisting_from(&products, a)?;
    let label = format!("{}({}) at {a}", target.flavor.short(), target.n);
    let tightness = tightness_report(&label, &t);
    let tm = twisted_product(&m, &t, q)?;
    let checks = [
        ("idempotents", verify_idempotent_formula(&tm)),
        ("green-product", verify_green_product(&tm)),
        ("d-class", verify_main_theorem(&tm)),
        ("simple-dims", verify_simple_dims(&tm, &At::Table)),
        ("zero-twisted-green", verify_zero_twisted_green(&t)),
    ];
    let mut failed = !tightness.holds();
    let mut reports = vec![serde_json::to_value(&tightness).map_err(io::Error::from)?];
    for (name, r) in checks {
        match r {
            Ok(r) => {
                failed |= !r.holds();
                reports.push(serde_json::to_value(&r).map_err(io::Error::from)?);
            }
            Err(e) => {
                failed = true;
                reports.push(json!({ "theorem": name, "refused": e.to_string() }));
            }
        }
    }
    emit_json(&json!({
        "monoid": label,
        "M": m.name(),
        "q": q,
        "twisted_size": tm.monoid.size(),
        "tight": t.is_tight(),
        "reports": reports,
    }))?;
    if failed {
        return Err(Failure::Verification("some checks failed or were refused".into()));
    }
    Ok(())
}

fn verify_all(cli: &Cli, suite: Option<&str>) -> Outcome {
    let ids: Vec<usize> = match suite {
        Some(s) => vec![suite_id(s).ok_or_else(|| Failure::Usage(format!("unknown suite `{s}`; known: {}", SUITES.join(", "))))?],
        None => (1..=SUITES.len()).collect(),
    };
    let mut reports = Vec::new();
    for id in ids {
        let r = run_criterion(id, cli.seed).expect("known criterion");
        eprintln!("{}", r.summary_line());
        reports.push(r);
    }
    if cli.csv {
        emit_csv(
            &["criterion", "suite", "check", "pass", "informational", "detail"],
            reports.iter().flat_map(|r| {
                r.checks.iter().map(move |c| {
                    vec![r.id.to_string(), r.suite.to_string(), c.name.clone(), c.pass.to_string(), c.informational.to_string(), c.detail.clone()]
                })
            }),
        )?;
    } else {
        let summary: Vec<Value> = reports.iter().map(|r| json!({ "pass": r.pass(), "report": r })).collect();
        emit_json(&summary)?;
    }
    if reports.iter().any(|r| !r.failures().is_empty()) {
        Err(Failure::Verification("acceptance checks failed".into()))
    } else if !reports.iter().all(|r| r.pass()) {
        Err(Failure::Budget("a criterion exceeded its time budget".into()))
    } else {
        Ok(())
    }
}
