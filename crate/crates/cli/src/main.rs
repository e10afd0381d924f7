use std::collections::BTreeMap;
use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use dualgroup::arith::format_rational;
use dualgroup::borel::{
    braid_sigma, braid_word, in_dual_group, same_torus_element, tau, weyl_reflect, BorelPair,
    Field, GroupMode,
};
use dualgroup::expr::{self, parse_ratfunc};
use dualgroup::green::{search_mgs_for_seed, verify_mgs};
use dualgroup::json::{CertificateJson, PairJson, QScalarJson, QuiverJson, SeedJson};
use dualgroup::qtorus::{quantum_mutate_check, QTorus};
use dualgroup::quiver::{punctured_disk_quiver, quiver_to_seed, triangle_quiver};
use dualgroup::random;
use dualgroup::seed::Seed;
use dualgroup::upper_bound::upper_bound_member;
use dualgroup::uq::{expand_in_theta, is_positive_integral, UqElement};
use dualgroup::verify::{self, location_section, Options};

/// Exact computations with cluster Poisson seeds, quantum tori, braid
/// actions on Borel pairs and the U_q(sl2) theta basis. Vertex and root
/// indices are 1-based.
#[derive(Parser)]
#[command(name = "dualgroup", version)]
struct Cli {
    /// Worker threads for parallel stages.
    #[arg(long, global = true, env = "DUALGROUP_THREADS")]
    threads: Option<usize>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Mutate a seed along a sequence of vertices.
    Mutate {
        #[arg(long)]
        seed: PathBuf,
        /// Comma-separated 1-based vertices, applied left to right.
        #[arg(long, value_delimiter = ',')]
        sequence: Vec<usize>,
    },
    /// Decide membership of a rational function in the upper bound of a seed.
    CheckLaurent {
        #[arg(long)]
        seed: PathBuf,
        #[arg(long)]
        expr: String,
    },
    /// Search for a maximal green sequence.
    GreenSearch {
        #[arg(long, conflicts_with = "quiver", required_unless_present = "quiver")]
        seed: Option<PathBuf>,
        #[arg(long)]
        quiver: Option<PathBuf>,
        #[arg(long, default_value_t = 10_000)]
        budget: usize,
    },
    /// Build a triangle or once-punctured-disk quiver.
    BuildQuiver {
        #[arg(long, value_enum)]
        shape: Shape,
        #[arg(long)]
        rank: usize,
        /// Print the seed instead of the quiver.
        #[arg(long)]
        as_seed: bool,
    },
    /// Apply braid generators to a Borel pair, or check the braid relation
    /// on random pairs when no input is given.
    Braid {
        #[arg(long, value_enum)]
        group: Group,
        /// Comma-separated 1-based simple roots, applied left to right.
        #[arg(long, value_delimiter = ',')]
        word: Vec<usize>,
        #[arg(long)]
        input: Option<PathBuf>,
        /// Entries are expressions over the pair's declared symbols.
        #[arg(long)]
        symbolic: bool,
        #[arg(long, default_value_t = 100)]
        samples: usize,
        #[arg(long, default_value_t = 0)]
        rng_seed: u64,
    },
    /// Check quantum mutation at one direction.
    QuantumCheck {
        #[arg(long)]
        seed: PathBuf,
        /// 1-based mutable vertex.
        #[arg(long)]
        direction: usize,
    },
    /// U_q(sl2) computations.
    Uqsl2 {
        #[command(subcommand)]
        action: UqAction,
    },
    /// Run the reproduction checks and print a pass/fail table.
    VerifyPaper {
        /// Restrict to one section, e.g. 4.3.
        #[arg(long)]
        section: Option<String>,
        #[arg(long)]
        samples: Option<usize>,
        #[arg(long, default_value_t = 0)]
        rng_seed: u64,
        #[arg(long)]
        json: bool,
        /// Append elapsed time per criterion.
        #[arg(long)]
        timings: bool,
    },
}

#[derive(Subcommand)]
enum UqAction {
    /// Expand a PBW expression in the theta basis.
    Expand {
        #[arg(long)]
        expr: String,
        /// Degree bound for the expansion; defaults to the degree of the input.
        #[arg(long)]
        bound: Option<u32>,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum Shape {
    Triangle,
    PuncturedDisk,
}

#[derive(Clone, Copy, ValueEnum)]
enum Group {
    Sl2,
    Sl3,
    Pgl3,
}

impl Group {
    fn mode(self) -> GroupMode {
        match self {
            Group::Sl2 | Group::Sl3 => GroupMode::Sl,
            Group::Pgl3 => GroupMode::Pgl,
        }
    }

    fn n(self) -> usize {
        match self {
            Group::Sl2 => 2,
            Group::Sl3 | Group::Pgl3 => 3,
        }
    }
}

/// Malformed input (exit 2) or a negative verdict (exit 1).
enum Failure {
    Input(String),
    Negative(Value),
}

type Outcome = Result<Value, Failure>;

fn bad<E: std::fmt::Display>(e: E) -> Failure {
    Failure::Input(e.to_string())
}

fn read(path: &Path) -> Result<String, Failure> {
    fs::read_to_string(path).map_err(|e| Failure::Input(format!("{}: {}", path.display(), e)))
}

fn load_seed(path: &Path) -> Result<Seed, Failure> {
    dualgroup::json::seed_from_str(&read(path)?).map_err(bad)
}

fn zero_based(xs: &[usize], what: &str) -> Result<Vec<usize>, Failure> {
    xs.iter()
        .map(|&x| {
            x.checked_sub(1)
                .ok_or_else(|| Failure::Input(format!("{} indices are 1-based", what)))
        })
        .collect()
}

fn one_based(xs: &[usize]) -> Vec<usize> {
    xs.iter().map(|x| x + 1).collect()
}

fn verdict(ok: bool, v: Value) -> Outcome {
    if ok {
        Ok(v)
    } else {
        Err(Failure::Negative(v))
    }
}

fn mutate(seed: &Path, sequence: &[usize]) -> Outcome {
    let s = load_seed(seed)?;
    let t = s
        .apply_sequence(&zero_based(sequence, "vertex")?)
        .map_err(bad)?;
    Ok(serde_json::to_value(SeedJson::from_seed(&t, true)).expect("serializable"))
}

fn check_laurent(seed: &Path, src: &str) -> Outcome {
    let s = load_seed(seed)?;
    let f = parse_ratfunc(src, Some(&s.label_strings())).map_err(bad)?;
    let cert = upper_bound_member(&f, &s).map_err(bad)?;
    verdict(
        cert.is_member(),
        serde_json::to_value(CertificateJson::from_certificate(&cert)).expect("serializable"),
    )
}

fn green_search(seed: Option<&Path>, quiver: Option<&Path>, budget: usize) -> Outcome {
    if budget == 0 {
        return Err(Failure::Input("budget must be positive".into()));
    }
    let s = match (seed, quiver) {
        (Some(p), _) => load_seed(p)?,
        (None, Some(p)) => {
            let q: QuiverJson = serde_json::from_str(&read(p)?).map_err(bad)?;
            quiver_to_seed(&q.to_quiver().map_err(bad)?).map_err(bad)?
        }
        (None, None) => return Err(Failure::Input("pass --seed or --quiver".into())),
    };
    let r = search_mgs_for_seed(&s, budget).map_err(bad)?;
    if let Some(seq) = &r.sequence {
        let check = verify_mgs(s.exchange(), seq).map_err(bad)?;
        assert!(
            check.valid,
            "search returned a sequence that does not replay"
        );
    }
    let counts: BTreeMap<String, String> = r
        .counts_by_length
        .iter()
        .map(|(l, c)| (l.to_string(), c.to_string()))
        .collect();
    let v = json!({
        "found": r.found(),
        "sequence": r.sequence.as_deref().map(one_based),
        "length": r.sequence.as_ref().map(|s| s.len()),
        "explored": r.explored,
        "complete": r.complete,
        "counts_by_length": counts,
    });
    verdict(r.found(), v)
}

fn build_quiver(shape: Shape, rank: usize, as_seed: bool) -> Outcome {
    let q = match shape {
        Shape::Triangle => triangle_quiver(rank),
        Shape::PuncturedDisk => punctured_disk_quiver(rank),
    }
    .map_err(bad)?;
    if as_seed {
        let s = quiver_to_seed(&q).map_err(bad)?;
        Ok(serde_json::to_value(SeedJson::from_seed(&s, false)).expect("serializable"))
    } else {
        Ok(serde_json::to_value(QuiverJson::from_quiver(&q)).expect("serializable"))
    }
}

/// The image pair plus its outer monodromy.
fn pair_report<S: Field>(
    image: &BorelPair<S>,
    word: &[usize],
    out: PairJson,
    show: impl Fn(&S) -> String,
) -> Outcome {
    let mut v = serde_json::to_value(out).expect("serializable");
    let fields = v.as_object_mut().expect("object");
    fields.insert("word".into(), json!(one_based(word)));
    fields.insert(
        "tau".into(),
        json!(tau(image).iter().map(show).collect::<Vec<_>>()),
    );
    fields.insert("in_dual_group".into(), json!(in_dual_group(image)));
    Ok(v)
}

fn braid(
    group: Group,
    word: &[usize],
    input: Option<&Path>,
    symbolic: bool,
    samples: usize,
    rng_seed: u64,
) -> Outcome {
    let word = zero_based(word, "root")?;
    let n = group.n();
    if let Some(&i) = word.iter().find(|&&i| i + 1 >= n) {
        return Err(Failure::Input(format!(
            "root {} out of range for rank {}",
            i + 1,
            n - 1
        )));
    }
    let Some(path) = input else {
        return braid_random(group, samples, rng_seed);
    };
    let pj: PairJson = serde_json::from_str(&read(path)?).map_err(bad)?;
    if pj.b1.len() != n {
        return Err(Failure::Input(format!("expected {}x{} matrices", n, n)));
    }
    if symbolic {
        let p = pj.to_symbolic(group.mode()).map_err(bad)?;
        let image = braid_word(&word, &p).map_err(bad)?;
        let symbols = pj.symbols.clone().unwrap_or_default();
        pair_report(
            &image,
            &word,
            PairJson::from_symbolic(&image, symbols),
            |x| x.to_string(),
        )
    } else {
        let p = pj.to_rational(group.mode()).map_err(bad)?;
        let image = braid_word(&word, &p).map_err(bad)?;
        pair_report(
            &image,
            &word,
            PairJson::from_rational(&image),
            format_rational,
        )
    }
}

/// Braid relation and equivariance on random pairs.
fn braid_random(group: Group, samples: usize, rng_seed: u64) -> Outcome {
    let mut rng = random::rng(rng_seed);
    let (mode, n) = (group.mode(), group.n());
    let (mut relation_failures, mut tau_failures, mut dual_failures) = (0usize, 0usize, 0usize);
    for _ in 0..samples {
        let p = random::random_pair(&mut rng, mode, n);
        let d = random::random_dual_pair(&mut rng, mode, n);
        for i in 0..n - 1 {
            if !matches!(braid_sigma(i, &p), Ok(s) if same_torus_element(mode, &tau(&s), &weyl_reflect(i, &tau(&p))))
            {
                tau_failures += 1;
            }
            if !matches!(braid_sigma(i, &d), Ok(s) if in_dual_group(&s)) {
                dual_failures += 1;
            }
        }
        if n == 3 {
            let lhs = braid_word(&[0, 1, 0], &p);
            let rhs = braid_word(&[1, 0, 1], &p);
            if !matches!((lhs, rhs), (Ok(a), Ok(b)) if a == b) {
                relation_failures += 1;
            }
        }
    }
    let v = json!({
        "samples": samples,
        "rng_seed": rng_seed,
        "braid_relation_failures": relation_failures,
        "equivariance_failures": tau_failures,
        "dual_group_failures": dual_failures,
    });
    verdict(relation_failures + tau_failures + dual_failures == 0, v)
}

fn quantum_check(seed: &Path, direction: usize) -> Outcome {
    let s = load_seed(seed)?;
    let k = direction
        .checked_sub(1)
        .ok_or_else(|| Failure::Input("directions are 1-based".into()))?;
    let t = QTorus::new(&s).map_err(bad)?;
    let r = quantum_mutate_check(&t, k).map_err(bad)?;
    let relations: Vec<Value> = r
        .relations
        .iter()
        .map(|c| json!({"i": c.i + 1, "j": c.j + 1, "eps_hat": format_rational(&c.eps_hat), "holds": c.holds}))
        .collect();
    let v = json!({
        "direction": direction,
        "d": t.d(),
        "classical_limit": r.classical_limit,
        "relations": relations,
        "counterexample": r.counterexample.map(|(i, j)| [i + 1, j + 1]),
        "passed": r.passed(),
    });
    verdict(r.passed(), v)
}

fn uq_expand(src: &str, bound: Option<u32>) -> Outcome {
    let x: UqElement = expr::parse(src).map_err(bad)?.eval().map_err(bad)?;
    let e = expand_in_theta(&x, bound.unwrap_or_else(|| x.degree())).map_err(bad)?;
    let coefficients: BTreeMap<String, QScalarJson> = e
        .iter()
        .map(|(i, c)| (i.to_string(), QScalarJson::from_qscalar(c)))
        .collect();
    Ok(json!({
        "input": x.to_string(),
        "coefficients": coefficients,
        "positive": e.values().all(is_positive_integral),
    }))
}

fn verify_paper(
    section: Option<&str>,
    samples: Option<usize>,
    rng_seed: u64,
    as_json: bool,
    timings: bool,
) -> Result<(String, bool), Failure> {
    let opts = Options { samples, rng_seed };
    let reports = match section {
        Some(s) => {
            let r = verify::run_section(s, &opts);
            if r.is_empty() {
                return Err(Failure::Input(format!(
                    "no checks located in section {}",
                    s
                )));
            }
            r
        }
        None => verify::run_all(&opts),
    };
    let ok = reports.iter().all(|r| r.acceptable());
    if as_json {
        let v: Vec<Value> = reports
            .iter()
            .map(|r| {
                let checks: Vec<Value> = r
                    .checks
                    .iter()
                    .map(|c| {
                        json!({
                            "location": c.location,
                            "section": location_section(c.location),
                            "name": c.name,
                            "passed": c.passed,
                            "detail": c.detail,
                            "known_deviation": c.deviation,
                        })
                    })
                    .collect();
                json!({"criterion": r.id, "title": r.title, "passed": r.passed(), "checks": checks})
            })
            .collect();
        return Ok((serde_json::to_string_pretty(&v).expect("serializable"), ok));
    }
    let mut out = String::new();
    for r in &reports {
        out.push_str(&format!(
            "criterion {} {}: {}",
            r.id,
            r.title,
            if r.passed() { "PASS" } else { "FAIL" }
        ));
        if timings {
            out.push_str(&format!(" [{:.2?}]", r.elapsed));
        }
        out.push('\n');
        for c in &r.checks {
            out.push_str(&format!("  {}\n", c));
        }
    }
    Ok((out.trim_end().to_string(), ok))
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Some(t) = cli.threads {
        if let Err(e) = rayon::ThreadPoolBuilder::new()
            .num_threads(t)
            .build_global()
        {
            eprintln!("error: {}", e);
            return ExitCode::from(2);
        }
    }
    let outcome = match &cli.command {
        Command::Mutate { seed, sequence } => mutate(seed, sequence),
        Command::CheckLaurent { seed, expr } => check_laurent(seed, expr),
        Command::GreenSearch {
            seed,
            quiver,
            budget,
        } => green_search(seed.as_deref(), quiver.as_deref(), *budget),
        Command::BuildQuiver {
            shape,
            rank,
            as_seed,
        } => build_quiver(*shape, *rank, *as_seed),
        Command::Braid {
            group,
            word,
            input,
            symbolic,
            samples,
            rng_seed,
        } => braid(
            *group,
            word,
            input.as_deref(),
            *symbolic,
            *samples,
            *rng_seed,
        ),
        Command::QuantumCheck { seed, direction } => quantum_check(seed, *direction),
        Command::Uqsl2 {
            action: UqAction::Expand { expr, bound },
        } => uq_expand(expr, *bound),
        Command::VerifyPaper {
            section,
            samples,
            rng_seed,
            json,
            timings,
        } => match verify_paper(section.as_deref(), *samples, *rng_seed, *json, *timings) {
            Ok((text, ok)) => {
                println!("{}", text);
                return if ok {
                    ExitCode::SUCCESS
                } else {
                    ExitCode::from(1)
                };
            }
            Err(f) => Err(f),
        },
    };
    match outcome {
        Ok(v) => {
            println!(
                "{}",
                serde_json::to_string_pretty(&v).expect("serializable")
            );
            ExitCode::SUCCESS
        }
        Err(Failure::Negative(v)) => {
            println!(
                "{}",
                serde_json::to_string_pretty(&v).expect("serializable")
            );
            ExitCode::from(1)
        }
        Err(Failure::Input(msg)) => {
            eprintln!("error: {}", msg);
            ExitCode::from(2)
        }
    }
}
