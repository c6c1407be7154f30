use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::sync::Arc;
use std::time::Duration;

use clap::{Args, Parser, Subcommand, ValueEnum};

use genplan::analysis::{asymptotic_complexity, certify_termination};
use genplan::benchmarks::{self, BenchmarkId};
use genplan::codegen;
use genplan::interpreter::{execute, Fuel, Undefined};
use genplan::model::{parse_domain, parse_instance, Domain, GpProblem, Instance};
use genplan::program::{Program, ProgramLimits};
use genplan::report::{validate, SynthesisReport};
use genplan::synthesis::{synthesize, SynthesisConfig, TieBreak};

#[derive(Debug, thiserror::Error)]
enum CliError {
    #[error("{path}: {source}")]
    Io { path: PathBuf, source: std::io::Error },
    #[error("{path}: {msg}")]
    Input { path: PathBuf, msg: String },
    #[error("{0}")]
    Usage(String),
}

fn read(path: &Path) -> Result<String, CliError> {
    std::fs::read_to_string(path).map_err(|source| CliError::Io {
        path: path.to_path_buf(),
        source,
    })
}

fn write(path: &Path, text: &str) -> Result<(), CliError> {
    std::fs::write(path, text).map_err(|source| CliError::Io {
        path: path.to_path_buf(),
        source,
    })
}

fn input_err(path: &Path, e: impl ToString) -> CliError {
    CliError::Input {
        path: path.to_path_buf(),
        msg: e.to_string(),
    }
}

fn load_domain(path: &Path) -> Result<Arc<Domain>, CliError> {
    parse_domain(&read(path)?).map(Arc::new).map_err(|e| input_err(path, e))
}

fn load_instances(dom: &Domain, paths: &[PathBuf]) -> Result<Vec<Instance>, CliError> {
    paths
        .iter()
        .map(|p| parse_instance(&read(p)?, dom).map_err(|e| input_err(p, e)))
        .collect()
}

fn load_program(dom: &Domain, path: &Path) -> Result<Program, CliError> {
    Program::parse(&read(path)?, dom).map_err(|e| input_err(path, e))
}

fn json(v: &impl serde::Serialize) -> String {
    serde_json::to_string_pretty(v).expect("documents serialize")
}

#[derive(Parser)]
#[command(name = "genplan", version, about = "Synthesize, run, validate and compile structured planning programs")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum Tie {
    MaxLoops,
    MinLoops,
}

#[derive(Clone, Copy, ValueEnum)]
enum Evaluation {
    CloseOpen,
    Halt,
}

#[derive(Args)]
struct SynthArgs {
    /// Domain file; omit when using --benchmark.
    domain: Option<PathBuf>,
    /// Instance files forming the generalized planning problem.
    instances: Vec<PathBuf>,
    /// Use a built-in benchmark's domain and generated training instances.
    #[arg(long, conflicts_with_all = ["domain", "instances"])]
    benchmark: Option<BenchmarkId>,
    /// Maximum number of program lines.
    #[arg(long)]
    lines: Option<usize>,
    /// Pointer budget: a count, or `type=count,...`.
    #[arg(long)]
    pointers: Option<String>,
    #[arg(long, value_enum, default_value = "max-loops")]
    tie: Tie,
    /// Wall-clock limit in seconds.
    #[arg(long, default_value_t = 3600.0)]
    time_limit: f64,
    /// Maximum number of evaluated nodes.
    #[arg(long, default_value_t = 10_000_000)]
    node_limit: u64,
    /// Open-list memory limit in MiB.
    #[arg(long, default_value_t = 3072)]
    memory_limit: usize,
    /// Disable loop-symmetry pruning.
    #[arg(long)]
    no_tabu: bool,
    /// Treatment of the first undefined line when evaluating partial programs.
    #[arg(long, value_enum, default_value = "close-open")]
    evaluation: Evaluation,
    /// Evaluation threads; 0 uses every core.
    #[arg(long, default_value_t = 0)]
    threads: usize,
    /// Seed for generated benchmark instances.
    #[arg(long, default_value_t = 1)]
    seed: u64,
    /// Write the program text here.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Print the synthesis report as JSON.
    #[arg(long)]
    json: bool,
}

#[derive(Subcommand)]
enum Command {
    /// Search for a program solving every given instance.
    Synth(SynthArgs),
    /// Execute a program on one instance and print the induced plan.
    Run {
        program: PathBuf,
        domain: PathBuf,
        instance: PathBuf,
        /// Cap on instruction visits.
        #[arg(long)]
        fuel: Option<u64>,
        #[arg(long)]
        json: bool,
    },
    /// Check that a program solves each instance; exits 0 iff all pass.
    Validate {
        program: PathBuf,
        domain: PathBuf,
        #[arg(required = true)]
        instances: Vec<PathBuf>,
        #[arg(long)]
        json: bool,
    },
    /// Write a C++ validator bundle for a program on one instance.
    Emit {
        program: PathBuf,
        domain: PathBuf,
        instance: PathBuf,
        /// Output directory.
        #[arg(long)]
        out: PathBuf,
        /// Print the manifest as JSON.
        #[arg(long)]
        json: bool,
    },
    /// Certify termination and report asymptotic complexity.
    Complexity {
        program: PathBuf,
        domain: PathBuf,
        /// Instances for numeric bounds.
        instances: Vec<PathBuf>,
        #[arg(long)]
        json: bool,
    },
    /// Generate benchmark instances, the domain and its reference program.
    Gen {
        benchmark: BenchmarkId,
        /// Instance sizes, e.g. `5` or `2,4,8`; defaults to the training sizes.
        #[arg(long, value_delimiter = ',')]
        size: Vec<usize>,
        #[arg(long, default_value_t = 1)]
        seed: u64,
        /// Output directory.
        #[arg(long)]
        out: PathBuf,
        #[arg(long)]
        json: bool,
    },
}

fn cmd_synth(a: SynthArgs) -> Result<u8, CliError> {
    let (prob, default_lines, default_budget) = match a.benchmark {
        Some(id) => {
            let prob = benchmarks::training_problem(id, a.seed).map_err(|e| CliError::Usage(e.to_string()))?;
            let (lines, budget) = benchmarks::synthesis_config(id);
            let budget: Vec<String> = budget.iter().map(|(t, c)| format!("{t}={c}")).collect();
            (prob, Some(lines), Some(budget.join(",")))
        }
        None => {
            let dpath = a
                .domain
                .as_deref()
                .ok_or_else(|| CliError::Usage("a domain file or --benchmark is required".into()))?;
            let dom = load_domain(dpath)?;
            let insts = load_instances(&dom, &a.instances)?;
            let prob = GpProblem::new(dom, insts).map_err(|e| CliError::Usage(e.to_string()))?;
            (prob, None, None)
        }
    };
    let dom = &prob.domain;
    let lines = a
        .lines
        .or(default_lines)
        .ok_or_else(|| CliError::Usage("--lines is required".into()))?;
    let spec = a
        .pointers
        .or(default_budget)
        .ok_or_else(|| CliError::Usage("--pointers is required".into()))?;
    let limits = ProgramLimits::parse_budget(dom, &spec)
        .and_then(|b| ProgramLimits::with_budget(dom, lines, &b))
        .map_err(|e| CliError::Usage(e.to_string()))?;
    let mut cfg = SynthesisConfig::new(limits);
    cfg.tie = match a.tie {
        Tie::MaxLoops => TieBreak::MaxLoops,
        Tie::MinLoops => TieBreak::MinLoops,
    };
    cfg.time_limit = Some(Duration::from_secs_f64(a.time_limit.max(0.0)));
    cfg.node_limit = Some(a.node_limit);
    cfg.memory_limit = Some(a.memory_limit << 20);
    cfg.use_tabu = !a.no_tabu;
    cfg.evaluation = match a.evaluation {
        Evaluation::CloseOpen => Undefined::CloseOpen,
        Evaluation::Halt => Undefined::Halt,
    };
    cfg.threads = a.threads;
    let run = synthesize(&prob, &cfg);
    let report = SynthesisReport::new(&prob, &cfg, &run);
    if let (Some(path), Some(text)) = (&a.out, &report.program) {
        write(path, text)?;
    }
    if a.json {
        println!("{}", json(&report));
    } else {
        let s = &report.stats;
        println!(
            "outcome: {}{}",
            report.outcome,
            report.limit.map(|l| format!(" ({})", json(&l).trim_matches('"'))).unwrap_or_default()
        );
        println!(
            "expanded: {}  evaluated: {}  time: {:.3}s",
            s.expanded,
            s.evaluated,
            s.wall_time.as_secs_f64()
        );
        if let Some(text) = &report.program {
            print!("{text}");
        }
    }
    Ok(report.exit_code())
}

fn cmd_run(program: &Path, domain: &Path, instance: &Path, fuel: Option<u64>, as_json: bool) -> Result<u8, CliError> {
    let dom = load_domain(domain)?;
    let prog = load_program(&dom, program)?;
    let inst = load_instances(&dom, &[instance.to_path_buf()])?.remove(0);
    let t = execute(&prog, &dom, &inst, Fuel(fuel));
    if as_json {
        println!("{}", json(&t.to_json(&dom, &inst)));
    } else {
        print!("{}", t.to_text(&dom, &inst));
        if let Some(e) = &t.error {
            eprintln!("error: {e}");
        }
    }
    Ok(if t.goal_reached(&inst) { 0 } else { 1 })
}

fn cmd_validate(program: &Path, domain: &Path, instances: &[PathBuf], as_json: bool) -> Result<u8, CliError> {
    let dom = load_domain(domain)?;
    let prog = load_program(&dom, program)?;
    let insts = load_instances(&dom, instances)?;
    let r = validate(&prog, &dom, &insts, Fuel::UNLIMITED);
    if as_json {
        println!("{}", json(&r));
    } else {
        for v in &r.instances {
            println!(
                "{} {} applied={} attempted={} time={:.3}s",
                if v.solved { "PASS" } else { "FAIL" },
                v.instance,
                v.applied,
                v.attempted,
                v.seconds
            );
        }
    }
    Ok(if r.all_solved { 0 } else { 1 })
}

fn cmd_emit(program: &Path, domain: &Path, instance: &Path, out: &Path, as_json: bool) -> Result<u8, CliError> {
    let dom = load_domain(domain)?;
    let prog = load_program(&dom, program)?;
    let inst = load_instances(&dom, &[instance.to_path_buf()])?.remove(0);
    let b = codegen::bundle(&dom, &inst, &prog).map_err(|e| input_err(program, e))?;
    let src = b.write_to(out).map_err(|source| CliError::Io {
        path: out.to_path_buf(),
        source,
    })?;
    if as_json {
        println!("{}", json(&b.manifest));
    } else {
        println!("wrote {}", src.display());
        println!(
            "build: g++ {}",
            b.compile_args(out, &out.join("validator")).join(" ")
        );
    }
    Ok(0)
}

fn cmd_complexity(program: &Path, domain: &Path, instances: &[PathBuf], as_json: bool) -> Result<u8, CliError> {
    let dom = load_domain(domain)?;
    let prog = load_program(&dom, program)?;
    let cert = certify_termination(&prog);
    if !cert.is_valid() {
        if as_json {
            println!("{}", json(&cert));
        } else {
            for v in &cert.violations {
                println!("{v}");
            }
        }
        return Ok(1);
    }
    let insts = load_instances(&dom, instances)?;
    let prob = GpProblem {
        domain: Arc::clone(&dom),
        instances: insts,
    };
    let r = asymptotic_complexity(&prog, &prob).map_err(|e| input_err(program, e))?;
    if as_json {
        #[derive(serde::Serialize)]
        struct Doc<'a> {
            termination: &'a genplan::analysis::TerminationCertificate,
            complexity: &'a genplan::analysis::ComplexityReport,
        }
        println!(
            "{}",
            json(&Doc {
                termination: &cert,
                complexity: &r,
            })
        );
    } else {
        println!("{}", r.expression);
        for b in &r.instances {
            println!(
                "{}: dominant={} plan_length_bound={} visit_bound={}",
                b.instance, b.dominant, b.plan_length_bound, b.visit_bound
            );
        }
    }
    Ok(0)
}

fn cmd_gen(id: BenchmarkId, sizes: Vec<usize>, seed: u64, out: &Path, as_json: bool) -> Result<u8, CliError> {
    let sizes = if sizes.is_empty() {
        benchmarks::training_sizes(id)
    } else {
        sizes
    };
    std::fs::create_dir_all(out).map_err(|source| CliError::Io {
        path: out.to_path_buf(),
        source,
    })?;
    let dom = benchmarks::domain(id);
    write(&out.join("domain.pddl"), benchmarks::domain_text(id))?;
    write(&out.join("reference.prog"), benchmarks::reference_program_text(id))?;
    let mut files = Vec::new();
    for (k, &size) in sizes.iter().enumerate() {
        let inst = benchmarks::generate(id, size, seed.wrapping_add(k as u64)).map_err(|e| CliError::Usage(e.to_string()))?;
        let path = out.join(format!("{}.pddl", inst.name));
        write(&path, &inst.to_pddl(&dom))?;
        files.push(path.display().to_string());
    }
    if as_json {
        println!("{}", json(&files));
    } else {
        for f in files {
            println!("{f}");
        }
    }
    Ok(0)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let r = match cli.command {
        Command::Synth(a) => cmd_synth(a),
        Command::Run {
            program,
            domain,
            instance,
            fuel,
            json,
        } => cmd_run(&program, &domain, &instance, fuel, json),
        Command::Validate {
            program,
            domain,
            instances,
            json,
        } => cmd_validate(&program, &domain, &instances, json),
        Command::Emit {
            program,
            domain,
            instance,
            out,
            json,
        } => cmd_emit(&program, &domain, &instance, &out, json),
        Command::Complexity {
            program,
            domain,
            instances,
            json,
        } => cmd_complexity(&program, &domain, &instances, json),
        Command::Gen {
            benchmark,
            size,
            seed,
            out,
            json,
        } => cmd_gen(benchmark, size, seed, &out, json),
    };
    match r {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(1)
        }
    }
}
