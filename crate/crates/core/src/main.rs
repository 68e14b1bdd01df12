use clap::{Args, Parser, Subcommand, ValueEnum};
use protobound::bounds::{self, BoundReport, MiniEnsembleStats};
use protobound::config::RunConfig;
use protobound::error::Error;
use protobound::gf2::SparseBinMatrix;
use protobound::io;
use protobound::lift::lift;
use protobound::protograph::{degree_histogram, Protograph};
use protobound::unwrap::{self, UnwrappedPair};
use protobound::verify;
use protobound::wenum::{self, GrowthProblem};
use protobound::IntMatrix;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

/// Free-distance growth-rate bounds for protograph LDPC convolutional codes.
#[derive(Parser)]
#[command(name = "protobound", version)]
struct Cli {
    /// JSON run configuration; command-line flags override it.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    /// Worker threads (default: all cores).
    #[arg(long, global = true, env = "PROTOBOUND_THREADS")]
    threads: Option<usize>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Print dimensions, rate, gcd and degree profile of a protograph.
    Info { file: PathBuf },
    /// Locate delta_min of the block ensemble.
    Deltamin {
        file: PathBuf,
        /// Write the sampled growth curve as CSV.
        #[arg(long)]
        curve: Option<PathBuf>,
        #[command(flatten)]
        tune: Tuning,
    },
    /// Sweep tail-biting unwrappings and report the free-distance bound.
    Bound {
        file: PathBuf,
        #[command(flatten)]
        cut: CutArgs,
        #[arg(long)]
        lambda_max: Option<usize>,
        /// With --mcover: draw this many distinct covers and report statistics.
        #[arg(long)]
        mini_samples: Option<usize>,
        /// Write the sweep (or per-member bounds) as CSV.
        #[arg(long)]
        csv: Option<PathBuf>,
        #[command(flatten)]
        tune: Tuning,
    },
    /// Write a constructed matrix.
    Export {
        file: PathBuf,
        #[command(flatten)]
        cut: CutArgs,
        /// Tail-biting matrix with this unwrapping factor.
        #[arg(long, group = "what")]
        lambda: Option<usize>,
        /// Window of this many periods of the convolutional matrix.
        #[arg(long, group = "what")]
        periods: Option<usize>,
        /// Base with zero columns inserted so every cut step is equally wide (needs --xi).
        #[arg(long, group = "what")]
        pad_xi: bool,
        /// Lift the exported matrix by this degree before writing.
        #[arg(long)]
        lift: Option<usize>,
        #[arg(long, value_enum, default_value_t = Format::Text)]
        format: Format,
        /// Output file (default: stdout).
        #[arg(long, short)]
        output: Option<PathBuf>,
        #[arg(long)]
        seed: Option<u64>,
    },
    /// Run the oracle and fold-property checks on small cases.
    Verify {
        #[arg(long)]
        seed: Option<u64>,
    },
}

#[derive(Args)]
#[group(multiple = false)]
struct CutArgs {
    /// Cut along the gcd block diagonal.
    #[arg(long)]
    uniform: bool,
    /// Nonuniform cut with the given steps.
    #[arg(long, value_delimiter = ',')]
    xi: Option<Vec<usize>>,
    /// Uniform cut of an M-fold cover.
    #[arg(long)]
    mcover: Option<usize>,
}

#[derive(Args, Default)]
struct Tuning {
    #[arg(long)]
    grid_step: Option<f64>,
    #[arg(long)]
    bisect_tol: Option<f64>,
    #[arg(long)]
    tol_neg: Option<f64>,
    /// Random starts of the outer search.
    #[arg(long)]
    starts: Option<usize>,
    #[arg(long)]
    seed: Option<u64>,
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Text,
    Alist,
}

struct Failure {
    code: u8,
    message: String,
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let code = match e.root() {
            Error::Parse(_)
            | Error::Io(_)
            | Error::InvalidArgument(_)
            | Error::InvalidProtograph(_)
            | Error::InvalidRegular { .. } => 1,
            Error::NoUniformCut { .. }
            | Error::InvalidCut(_)
            | Error::LiftTooSmall { .. }
            | Error::LiftDisjointness { .. }
            | Error::InsufficientMembers { .. }
            | Error::SegmentLength { .. }
            | Error::GuardLimit { .. } => 2,
            _ => 3,
        };
        Failure {
            code,
            message: e.to_string(),
        }
    }
}

impl From<std::io::Error> for Failure {
    fn from(e: std::io::Error) -> Self {
        Error::from(e).into()
    }
}

type CmdResult = std::result::Result<(), Failure>;

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 1 } else { 0 });
        }
    };
    if let Some(n) = cli.threads {
        // fails only if a pool exists already, which cannot happen this early
        let _ = rayon::ThreadPoolBuilder::new()
            .num_threads(n.max(1))
            .build_global();
    }
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            eprintln!("error: {}", f.message);
            ExitCode::from(f.code)
        }
    }
}

fn run(cli: Cli) -> CmdResult {
    let mut cfg = match &cli.config {
        Some(path) => RunConfig::from_file(path)?,
        None => RunConfig::default(),
    };
    match cli.command {
        Command::Info { file } => info(&io::read_protograph(&file)?),
        Command::Deltamin { file, curve, tune } => {
            apply(&mut cfg, &tune);
            deltamin(&io::read_protograph(&file)?, curve.as_deref(), &cfg)
        }
        Command::Bound {
            file,
            cut,
            lambda_max,
            mini_samples,
            csv,
            tune,
        } => {
            apply(&mut cfg, &tune);
            if let Some(l) = lambda_max {
                cfg.lambda_max = l;
            }
            cfg.validate()?;
            bound(
                &io::read_protograph(&file)?,
                &cut,
                mini_samples,
                csv.as_deref(),
                &cfg,
            )
        }
        Command::Export {
            file,
            cut,
            lambda,
            periods,
            pad_xi,
            lift,
            format,
            output,
            seed,
        } => {
            if let Some(s) = seed {
                cfg.seed = s;
            }
            let p = io::read_protograph(&file)?;
            let text = export(&p, &cut, lambda, periods, pad_xi, lift, format, cfg.seed)?;
            match output {
                Some(path) => std::fs::write(path, text)?,
                None => print!("{text}"),
            }
            Ok(())
        }
        Command::Verify { seed } => verify_cmd(seed.unwrap_or(cfg.seed)),
    }
}

fn apply(cfg: &mut RunConfig, t: &Tuning) {
    if let Some(v) = t.grid_step {
        cfg.grid_step = v;
    }
    if let Some(v) = t.bisect_tol {
        cfg.bisect_tol = v;
    }
    if let Some(v) = t.tol_neg {
        cfg.tol_neg = v;
    }
    if let Some(v) = t.starts {
        cfg.random_starts = v;
    }
    if let Some(v) = t.seed {
        cfg.seed = v;
    }
}

fn print_json<T: Serialize>(doc: &T) {
    println!(
        "{}",
        serde_json::to_string_pretty(doc).expect("plain data serializes")
    );
}

fn info(p: &Protograph) -> CmdResult {
    let g = p.gcd_partition();
    println!("name: {}", p.name());
    println!("n_c: {}", p.n_c());
    println!("n_v: {}", p.n_v());
    println!("transmitted: {}", p.m());
    println!("rate: {}", p.rate());
    println!("gcd: {g}");
    let fmt = |h: Vec<(u32, usize)>| {
        h.iter()
            .map(|(d, n)| format!("{d}x{n}"))
            .collect::<Vec<_>>()
            .join(" ")
    };
    println!(
        "variable degrees: {}",
        fmt(degree_histogram(&p.variable_degrees()))
    );
    println!(
        "check degrees: {}",
        fmt(degree_histogram(&p.check_degrees()))
    );
    if g == 1 {
        println!("hint: gcd is 1, so no uniform cut exists; use --xi or --mcover");
    }
    Ok(())
}

#[derive(Serialize)]
struct DeltaMinDoc<'a> {
    protograph: &'a str,
    delta_min: Option<f64>,
    certificate: bool,
    min_r: f64,
    r_at_delta_min: Option<f64>,
    bracket: Option<(f64, f64)>,
    config: &'a RunConfig,
}

fn deltamin(p: &Protograph, curve_path: Option<&Path>, cfg: &RunConfig) -> CmdResult {
    cfg.validate()?;
    let curve = wenum::scan(&GrowthProblem::new(p), &cfg.search())?;
    if let Some(path) = curve_path {
        std::fs::write(path, curve.to_csv())?;
    }
    print_json(&DeltaMinDoc {
        protograph: p.name(),
        delta_min: curve.delta_min,
        certificate: curve.certificate,
        min_r: curve.min_r,
        r_at_delta_min: curve.r_at_delta_min,
        bracket: curve.bracket,
        config: cfg,
    });
    if curve.delta_min.is_none() || !curve.certificate {
        return Err(Error::NoCrossing {
            upper: cfg.delta_upper,
            step: cfg.grid_step,
        }
        .into());
    }
    Ok(())
}

fn make_pair(p: &Protograph, cut: &CutArgs, seed: u64) -> protobound::Result<UnwrappedPair> {
    if let Some(xi) = &cut.xi {
        unwrap::nonuniform_cut(p, xi)
    } else if let Some(m) = cut.mcover {
        unwrap::uniform_cut(&unwrap::m_cover(p, m, seed)?)
    } else if cut.uniform {
        unwrap::uniform_cut(p)
    } else {
        Err(Error::InvalidArgument(
            "choose a cut: --uniform, --xi or --mcover".into(),
        ))
    }
}

#[derive(Serialize)]
struct BoundDoc<'a> {
    report: &'a BoundReport,
    config: &'a RunConfig,
}

#[derive(Serialize)]
struct MiniDoc<'a> {
    protograph: &'a str,
    m: usize,
    stats: &'a MiniEnsembleStats,
    config: &'a RunConfig,
}

fn bound(
    p: &Protograph,
    cut: &CutArgs,
    mini: Option<usize>,
    csv: Option<&Path>,
    cfg: &RunConfig,
) -> CmdResult {
    if let Some(n) = mini {
        let m = cut
            .mcover
            .ok_or_else(|| Error::InvalidArgument("--mini-samples needs --mcover".into()))?;
        let stats = bounds::mini_ensemble(p, m, n, cfg.lambda_max, cfg.seed, cfg)?;
        if let Some(path) = csv {
            std::fs::write(path, stats.to_csv())?;
        }
        print_json(&MiniDoc {
            protograph: p.name(),
            m,
            stats: &stats,
            config: cfg,
        });
        return Ok(());
    }
    let pair = make_pair(p, cut, cfg.seed)?;
    let report = bounds::delta_free_bound(&pair, cfg.lambda_max, cfg)?;
    if let Some(path) = csv {
        std::fs::write(path, report.to_csv())?;
    }
    print_json(&BoundDoc {
        report: &report,
        config: cfg,
    });
    Ok(())
}

#[allow(clippy::too_many_arguments)]
fn export(
    p: &Protograph,
    cut: &CutArgs,
    lambda: Option<usize>,
    periods: Option<usize>,
    pad_xi: bool,
    lift_degree: Option<usize>,
    format: Format,
    seed: u64,
) -> std::result::Result<String, Failure> {
    let (matrix, transmitted, what): (IntMatrix, Vec<bool>, String) = if pad_xi {
        let xi = cut
            .xi
            .as_ref()
            .ok_or_else(|| Error::InvalidArgument("--pad-xi needs --xi".into()))?;
        let padded = unwrap::pad_zero_columns(p, xi)?;
        let what = format!("{} (xi_max = {})", padded.name(), unwrap::xi_max(xi));
        (padded.base().clone(), padded.transmitted().to_vec(), what)
    } else if let Some(l) = lambda {
        let tb = unwrap::tail_biting(&make_pair(p, cut, seed)?, l)?;
        let tp = tb.as_protograph();
        (
            tp.base().clone(),
            tp.transmitted().to_vec(),
            tp.name().to_string(),
        )
    } else if let Some(q) = periods {
        let pair = make_pair(p, cut, seed)?;
        let conv = unwrap::unroll(&pair, q)?;
        let what = format!(
            "{} window, {q} periods, {}, m_s = {}, nu_s = {}",
            p.name(),
            pair.cut().describe(),
            conv.m_s,
            conv.nu_s
        );
        let t = (0..q)
            .flat_map(|_| p.transmitted().iter().copied())
            .collect();
        (conv.h_window, t, what)
    } else {
        return Err(
            Error::InvalidArgument("choose one of --lambda, --periods or --pad-xi".into()).into(),
        );
    };
    let binary: Option<SparseBinMatrix> = match lift_degree {
        Some(n) => {
            let proto = Protograph::new(what.clone(), matrix.clone(), transmitted)?;
            Some(lift(&proto, n, seed)?.parity_matrix().clone())
        }
        None => SparseBinMatrix::from_int(&matrix),
    };
    Ok(match (format, lift_degree) {
        (Format::Alist, _) => {
            let h = binary.ok_or_else(|| {
                Error::InvalidArgument("alist needs a 0/1 matrix; add --lift N".into())
            })?;
            io::write_alist(&h)
        }
        (Format::Text, Some(_)) => {
            io::write_text_matrix(&binary.expect("lifted").to_int(), Some(&what))
        }
        (Format::Text, None) => io::write_text_matrix(&matrix, Some(&what)),
    })
}

#[derive(Serialize)]
struct Counterexample<T: Serialize> {
    property: &'static str,
    detail: T,
}

fn verify_cmd(seed: u64) -> CmdResult {
    use protobound::wenum::ensemble_enum_exact;
    let mut failed = false;
    let mut report = |name: &str, ok: bool, detail: String| {
        println!("{} {name}: {detail}", if ok { "PASS" } else { "FAIL" });
        failed |= !ok;
    };

    // exact enumerator against the brute-force lifting average
    let cases: Vec<Vec<Vec<u32>>> = vec![
        vec![vec![1, 1]],
        vec![vec![1, 1, 1]],
        vec![vec![1, 1, 0], vec![0, 1, 1]],
        vec![vec![1, 1, 1, 1], vec![1, 1, 0, 1]],
        vec![vec![1, 0, 1, 1], vec![0, 1, 1, 1], vec![1, 1, 0, 0]],
    ];
    let mut oracle_ok = true;
    for rows in &cases {
        let p = Protograph::from_rows("case", rows)?;
        let exact = ensemble_enum_exact(&p, 2, protobound::wenum::DEFAULT_GUARD_LIMIT)?;
        let brute = verify::brute_force_average(&p, 2)?;
        let lhs: Vec<_> = exact
            .entries
            .iter()
            .filter(|(_, v)| **v != num_rational::BigRational::from_integer(0.into()))
            .collect();
        let rhs: Vec<_> = brute.iter().collect();
        if lhs != rhs {
            oracle_ok = false;
            let diff: Vec<String> = (0..=2 * p.m())
                .map(|d| {
                    format!(
                        "{d}: exact {} brute {}",
                        exact.get(d),
                        brute.get(&d).cloned().unwrap_or_default()
                    )
                })
                .collect();
            eprintln!(
                "{}",
                serde_json::to_string(&Counterexample {
                    property: "oracle",
                    detail: (rows, diff)
                })
                .unwrap()
            );
        }
    }
    report(
        "exact enumerator = brute-force average (N = 2)",
        oracle_ok,
        format!("{} protographs", cases.len()),
    );

    // fold property
    let p36 = protobound::regular_protograph(3, 6)?;
    let pair = unwrap::uniform_cut(&p36)?;
    let mut tested = 0;
    let mut fold_ok = true;
    for (lambda, n) in [(1, 3), (2, 3), (3, 2)] {
        let tb = unwrap::tail_biting(&pair, lambda)?;
        let r = verify::fold_check(&tb, n, 3, 50, seed)?;
        tested += r.tested;
        if let Some(word) = r.counterexample {
            fold_ok = false;
            eprintln!(
                "{}",
                serde_json::to_string(&Counterexample {
                    property: "fold",
                    detail: (lambda, n, word)
                })
                .unwrap()
            );
        }
    }
    report(
        "unwrapped codewords fold onto tail-biting codewords",
        fold_ok,
        format!("{tested} codewords"),
    );

    // stationarity of the inner solver
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut worst = 0.0f64;
    for i in 0..200 {
        let prob = verify::random_check_problem(&mut rng, 3 + i % 6, i % 5 == 0);
        let s = verify::stationarity_by_enumeration(&prob)?;
        if !(s <= 1e-6) {
            eprintln!(
                "{}",
                serde_json::to_string(&Counterexample {
                    property: "stationarity",
                    detail: (&prob.deltas, prob.parity_flip, s)
                })
                .unwrap()
            );
        }
        worst = worst.max(if s.is_nan() { f64::INFINITY } else { s });
    }
    report(
        "inner solver stationarity <= 1e-6",
        worst <= 1e-6,
        format!("worst residual {worst:.2e} over 200 problems"),
    );

    // growth rate at zero weight
    let r0 = wenum::growth_rate(&p36, 0.0)?;
    report("r(0) = 0", r0.abs() <= 1e-9, format!("r(0) = {r0:e}"));

    if failed {
        Err(Failure {
            code: 3,
            message: "verification failed".into(),
        })
    } else {
        Ok(())
    }
}
