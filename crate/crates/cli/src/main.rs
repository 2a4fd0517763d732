use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Instant;

use clap::{Parser, Subcommand, ValueEnum};
use serde_json::json;

use autspine::freegroup::{compose_all, expand_w};
use autspine::natural_maps::{restrict_traced, BasisEmbedding};
use autspine::spine::{build_loop, BuiltLoop, MarkedGraphJson, Mode, SimplicialLoop, SpineVertex};
use autspine::verify::{verify_area, verify_growth, verify_rho, verify_square, VerificationReport};

/// Constructors, checkers and exporters for marked graphs and the spines of Out(F_n) and Aut(F_n).
///
/// Exit codes: 0 when every check passes, 1 when a check fails, 2 on usage or I/O errors.
#[derive(Parser)]
#[command(name = "autspine", version)]
struct Cli {
    /// Write the output here instead of stdout.
    #[arg(long, global = true, value_name = "PATH")]
    out: Option<PathBuf>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// List the transvections of w_i and check that they compose to the identity.
    Word {
        #[arg(long = "i", value_parser = clap::value_parser!(u64).range(1..))]
        i: u64,
    },
    /// Build the loop ℓ_i in L_3 and check closure and adjacency.
    Loop {
        #[arg(long = "i", value_parser = clap::value_parser!(u64).range(1..))]
        i: u64,
        #[arg(long, value_enum, default_value_t = Emit::Json)]
        emit: Emit,
    },
    /// Run a seeded verification suite and write its JSON report.
    Verify {
        #[arg(value_enum)]
        suite: SuiteArg,
        #[arg(long, default_value_t = 100)]
        samples: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 2)]
        m: usize,
        #[arg(long, default_value_t = 3)]
        n: usize,
        /// Area search budget (area suite only).
        #[arg(long, default_value_t = 8)]
        budget: usize,
        /// Largest exponent (growth suite only).
        #[arg(long = "i", default_value_t = 20)]
        i: usize,
        /// Record wall time in the report; reports are then no longer reproducible byte for byte.
        #[arg(long)]
        timing: bool,
    },
    /// Restrict a K_n vertex, given as marked-graph JSON, to K_m.
    Restrict {
        /// Input file, or `-` for stdin.
        input: PathBuf,
        #[arg(long)]
        m: usize,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum Emit {
    Json,
    Dot,
}

#[derive(Clone, Copy, ValueEnum)]
enum SuiteArg {
    Square,
    Rho,
    Area,
    Growth,
}

/// `Ok(true)`: all checks passed; `Ok(false)`: a check failed; `Err`: usage or I/O error.
type Outcome = Result<bool, String>;

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Word { i } => cmd_word(i as usize, cli.out.as_deref()),
        Command::Loop { i, emit } => cmd_loop(i as usize, emit, cli.out.as_deref()),
        Command::Verify { suite, samples, seed, m, n, budget, i, timing } => {
            cmd_verify(suite, samples, seed, m, n, budget, i, timing, cli.out.as_deref())
        }
        Command::Restrict { input, m } => cmd_restrict(&input, m, cli.out.as_deref()),
    };
    match result {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(msg) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
    }
}

fn write_output(out: Option<&Path>, text: &str) -> Result<(), String> {
    match out {
        Some(p) => fs::write(p, text).map_err(|e| format!("cannot write {}: {e}", p.display())),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn to_pretty(value: &serde_json::Value) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("serializable");
    s.push('\n');
    s
}

fn cmd_word(i: usize, out: Option<&Path>) -> Outcome {
    let ts = expand_w(i);
    let closes = compose_all(&ts, 3).map_err(|e| e.to_string())?.is_identity();
    let listing: Vec<String> = ts.iter().map(ToString::to_string).collect();
    let report = json!({ "i": i, "length": ts.len(), "closes": closes, "transvections": listing });
    write_output(out, &to_pretty(&report))?;
    Ok(closes)
}

fn cmd_loop(i: usize, emit: Emit, out: Option<&Path>) -> Outcome {
    let (closed, vertices) = match build_loop(&expand_w(i), 3).map_err(|e| e.to_string())? {
        BuiltLoop::Closed(l) => (true, l.vertices),
        BuiltLoop::Open(vs) => (false, vs),
    };
    let l = SimplicialLoop { vertices };
    let broken = if closed { l.first_non_adjacent() } else { None };
    let text = match emit {
        Emit::Json => to_pretty(&json!({
            "i": i,
            "length": l.len(),
            "closed": closed,
            "first_non_adjacent": broken,
            "vertices": l.to_json(),
        })),
        Emit::Dot => l.to_dot(),
    };
    write_output(out, &text)?;
    if !closed {
        eprintln!("loop does not close");
    }
    if let Some(j) = broken {
        eprintln!("vertices {j} and {} are not adjacent", (j + 1) % l.len());
    }
    Ok(closed && broken.is_none())
}

#[allow(clippy::too_many_arguments)]
fn cmd_verify(
    suite: SuiteArg,
    samples: usize,
    seed: u64,
    m: usize,
    n: usize,
    budget: usize,
    i: usize,
    timing: bool,
    out: Option<&Path>,
) -> Outcome {
    if matches!(suite, SuiteArg::Square | SuiteArg::Rho) && !(2 <= m && m < n && n <= 5) {
        return Err(format!("need 2 <= m < n <= 5, got m = {m}, n = {n}"));
    }
    let start = Instant::now();
    let mut report: VerificationReport = match suite {
        SuiteArg::Square => verify_square(m, n, samples, seed),
        SuiteArg::Rho => verify_rho(m, n, samples, seed),
        SuiteArg::Area => verify_area(budget),
        SuiteArg::Growth => verify_growth(i),
    }
    .map_err(|e| e.to_string())?;
    if timing {
        report.wall_time_ms = Some(start.elapsed().as_millis() as u64);
    }
    write_output(out, &to_pretty(&json!(report)))?;
    Ok(report.pass)
}

fn cmd_restrict(input: &Path, m: usize, out: Option<&Path>) -> Outcome {
    let text = if input == Path::new("-") {
        std::io::read_to_string(std::io::stdin()).map_err(|e| format!("cannot read stdin: {e}"))?
    } else {
        fs::read_to_string(input).map_err(|e| format!("cannot read {}: {e}", input.display()))?
    };
    let parsed: MarkedGraphJson =
        serde_json::from_str(&text).map_err(|e| format!("invalid JSON in {}: {e}", input.display()))?;
    let v = SpineVertex::from_json(&parsed).map_err(|e| format!("invalid marked graph: {e}"))?;
    if v.mode() != Mode::K {
        return Err("restrict takes a K_n vertex (no basepoint, mode K)".into());
    }
    let emb = BasisEmbedding::new(m, v.rank()).map_err(|e| e.to_string())?;
    let (r, trace) = restrict_traced(&v, emb).map_err(|e| e.to_string())?;
    let report = json!({ "n": v.rank(), "m": m, "result": r.to_json(), "trace": trace });
    write_output(out, &to_pretty(&report))?;
    Ok(true)
}
