//! `wheeling`: diagram bases, the wheels element and identity checks from the command line.

mod registry;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use serde_json::{json, Value};
use wheeling_core::rational::format_q;
use wheeling_core::spaces::{quotient_basis, CACHE_ENV};
use wheeling_core::wheels::{describe, omega};
use wheeling_core::{Engine, EngineConfig, Error, Filter, Signature};

const SPACE_HELP: &str = "Diagram space, `A:` or `B:` followed by comma separated atoms: \
`up:<label>` (interval), `circle:<label>`, `*<label>` (unordered legs), `@<label>` (unordered legs \
with link relations). A bare `up` or `circle` is labelled x. `A:` spaces need a skeleton \
component, `B:` spaces must have none. Example: \"B:*x,@y\"";

#[derive(Parser)]
#[command(
    name = "wheeling",
    version,
    about = "Exact Jacobi diagram calculus and wheeling checks"
)]
struct Cli {
    /// Directory for cached strata
    #[arg(long, global = true, env = CACHE_ENV, default_value = ".wheeling-cache")]
    cache_dir: PathBuf,
    /// Largest degree the engine accepts
    #[arg(long, global = true, default_value_t = 8)]
    degree_cap: usize,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Print a quotient basis and its dimension
    Basis {
        #[arg(long, help = SPACE_HELP)]
        space: String,
        #[arg(long)]
        degree: usize,
        /// bc (no vacuum components), all or connected
        #[arg(long, default_value = "bc")]
        filter: String,
        #[arg(long)]
        json: bool,
    },
    /// Print Ω to the given degree
    Omega {
        #[arg(long, default_value_t = 4)]
        max_degree: usize,
        #[arg(long)]
        json: bool,
    },
    /// Run an identity check; exit code 1 if it fails
    Verify {
        /// Identity name, or `list`
        identity: String,
        /// Truncation degree (defaults per identity)
        #[arg(long)]
        max_degree: Option<usize>,
        /// Size parameter: n for the sl2 suites, D's degree for pseudo-linear, k for wheels-lemma
        #[arg(long)]
        n: Option<usize>,
        /// Coiling at every n in 1..=2d+1
        #[arg(long)]
        complete: bool,
        /// Perturb b2 by 1/1000
        #[arg(long)]
        inject_fault: bool,
        /// Perturb this coefficient instead of b2 (implies --inject-fault)
        #[arg(long)]
        fault_index: Option<usize>,
        /// Include wall time in JSON output
        #[arg(long)]
        timing: bool,
        #[arg(long)]
        json: bool,
    },
}

fn parse_space(spec: &str) -> Result<Signature, Error> {
    let (kind, rest) = match spec.split_once(':') {
        Some((k @ ("A" | "B"), rest)) => (Some(k), rest),
        _ => (None, spec),
    };
    let sig: Signature = rest.parse()?;
    match kind {
        Some("A") if !sig.has_skeleton() => {
            Err(Error::Parse(format!("{spec:?} has no skeleton component")))
        }
        Some("B") if sig.has_skeleton() => {
            Err(Error::Parse(format!("{spec:?} has a skeleton component")))
        }
        _ => Ok(sig),
    }
}

fn parse_filter(s: &str) -> Result<Filter, Error> {
    match s {
        "all" => Ok(Filter::All),
        "bc" => Ok(Filter::BoundaryConnected),
        "connected" => Ok(Filter::Connected),
        _ => Err(Error::Parse(format!("unknown filter {s:?}"))),
    }
}

fn print_json(v: &Value) {
    println!(
        "{}",
        serde_json::to_string_pretty(v).expect("json values serialize")
    );
}

fn basis(
    engine: &Engine,
    space: &str,
    degree: usize,
    filter: &str,
    as_json: bool,
) -> Result<ExitCode, Error> {
    let sig = parse_space(space)?;
    let filter = parse_filter(filter)?;
    engine.check_degree(degree)?;
    let q = quotient_basis(engine, &sig, degree, filter)?;
    let basis: Vec<String> = q.basis().into_iter().map(|d| describe(&sig, d)).collect();
    if as_json {
        let relations: serde_json::Map<String, Value> = q
            .relation_counts()
            .iter()
            .map(|(k, n)| (format!("{k:?}").to_lowercase(), json!(n)))
            .collect();
        print_json(&json!({
            "space": space,
            "signature": sig.to_string(),
            "degree": degree,
            "filter": format!("{filter:?}"),
            "spanning": q.spanning().len(),
            "rank": q.rank(),
            "dimension": q.dim(),
            "relations": relations,
            "basis": basis,
        }));
    } else {
        println!("space [{sig}] degree {degree}");
        println!(
            "spanning diagrams {}, relation rank {}",
            q.spanning().len(),
            q.rank()
        );
        println!("dimension {}", q.dim());
        for b in basis {
            println!("  {b}");
        }
    }
    Ok(ExitCode::SUCCESS)
}

fn omega_cmd(engine: &Engine, max: usize, as_json: bool) -> Result<ExitCode, Error> {
    engine.check_degree(max)?;
    let om = omega(max)?;
    let sig = om.lincomb.signature().clone();
    let coefficients: Vec<(usize, String)> = (2..=max)
        .step_by(2)
        .map(|n| (n, format_q(&om.table.get(n))))
        .collect();
    let mut terms: Vec<(usize, String, String)> = om
        .lincomb
        .terms()
        .map(|(d, c)| (d.degree(), describe(&sig, d), format_q(c)))
        .collect();
    terms.sort();
    if as_json {
        let coeffs: serde_json::Map<String, Value> = coefficients
            .iter()
            .map(|(n, c)| (format!("b{n}"), json!(c)))
            .collect();
        let terms: Vec<Value> = terms
            .iter()
            .map(|(deg, d, c)| json!({"degree": deg, "diagram": d, "coefficient": c}))
            .collect();
        print_json(&json!({"max_degree": max, "coefficients": coeffs, "terms": terms}));
    } else {
        for (n, c) in &coefficients {
            println!("b{n} = {c}");
        }
        for (deg, d, c) in &terms {
            println!("[{deg}] {c}  {d}");
        }
    }
    Ok(ExitCode::SUCCESS)
}

fn verify(
    engine: &Engine,
    identity: &str,
    opts: registry::Options,
    timing: bool,
    as_json: bool,
) -> Result<ExitCode, Error> {
    if identity == "list" {
        for id in registry::REGISTRY {
            println!("{:<14} {}", id.name, id.summary);
        }
        return Ok(ExitCode::SUCCESS);
    }
    let Some(id) = registry::lookup(identity) else {
        return Err(Error::Parse(format!(
            "unknown identity {identity:?}; try `verify list`"
        )));
    };
    if let Some(m) = opts.max_degree {
        engine.check_degree(m)?;
    }
    let report = registry::run(engine, id, &opts)?;
    if as_json {
        let mut v = serde_json::to_value(&report).map_err(|e| Error::Invariant(e.to_string()))?;
        if !timing {
            v.as_object_mut().map(|o| o.remove("seconds"));
        }
        print_json(&v);
    } else {
        println!(
            "{}: {} (degree {}, {} cases, {} strata, {:.2}s)",
            report.identity,
            if report.holds { "holds" } else { "VIOLATED" },
            report.max_degree,
            report.cases,
            report.strata.len(),
            report.seconds
        );
        for (k, x) in &report.values {
            println!("  {k} = {x}");
        }
        for n in &report.notes {
            println!("  note: {n}");
        }
        for v in report.violations.iter().take(10) {
            println!("  violation at {}", v.input);
            for (k, x) in &v.difference {
                println!("    {k}: {x}");
            }
        }
        if report.violations.len() > 10 {
            println!("  ... {} more", report.violations.len() - 10);
        }
    }
    Ok(if report.holds {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(1)
    })
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let engine = Engine::new(EngineConfig {
        max_degree: cli.degree_cap,
        cache_dir: Some(cli.cache_dir.clone()),
        ..Default::default()
    });
    let out = match cli.command {
        Command::Basis {
            space,
            degree,
            filter,
            json,
        } => basis(&engine, &space, degree, &filter, json),
        Command::Omega { max_degree, json } => omega_cmd(&engine, max_degree, json),
        Command::Verify {
            identity,
            max_degree,
            n,
            complete,
            inject_fault,
            fault_index,
            timing,
            json,
        } => {
            let fault = fault_index.or(inject_fault.then_some(2));
            let opts = registry::Options {
                max_degree,
                n,
                complete,
                fault,
            };
            verify(&engine, &identity, opts, timing, json)
        }
    };
    match out {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}
