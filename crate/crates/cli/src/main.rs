//! Command-line front end: file IO, checks, operations, synthesis, DOT
//! export, and machine-readable reports.
//!
//! Exit codes: 0 = computed (even when a check is false), 1 = input or
//! validation error, 2 = resource limit exceeded.

use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use descoord_core::coordination::{
    build_coordinator, conditionally_independent, is_conditionally_closed,
    is_conditionally_controllable, is_conditionally_decomposable, refine_doublestar, solve,
    synthesize_star, CoordinationProblem,
};
use descoord_core::json;
use descoord_core::minext::{
    exact_min_extension_threads, greedy_min_extension, setcover_to_cd, SetCoverInstance,
};
use descoord_core::nonblocking::nonblocking_coordinator;
use descoord_core::observer::{is_lcc, is_observer};
use descoord_core::ops::{inverse_project, project_onto, sync_product_all};
use descoord_core::supervisory::{is_controllable, sup_c};
use descoord_core::{Error as CoreError, EventSet, Generator, Limits, Mode, ProjectionSpec};

mod output;
use output::{print_or_write, OutputTarget, Report};

#[derive(Parser)]
#[command(
    name = "descoord",
    version,
    about = "Coordination supervisory control of discrete-event systems"
)]
struct Cli {
    /// Determinization cap (maximum subset states per projection).
    #[arg(long, global = true)]
    cap: Option<usize>,
    /// Maximum length for bounded word enumeration.
    #[arg(long, global = true)]
    bound: Option<usize>,
    /// Emit machine-readable JSON reports.
    #[arg(long, global = true)]
    json: bool,
    /// Worker threads for candidate searches (minext exact).
    #[arg(long, global = true)]
    threads: Option<usize>,
    #[command(subcommand)]
    command: Command,
}

impl Cli {
    fn limits(&self) -> Limits {
        let mut limits = Limits::default();
        if let Some(cap) = self.cap {
            limits.determinization_cap = cap;
        }
        if let Some(bound) = self.bound {
            limits.max_word_bound = bound;
        }
        limits
    }
}

#[derive(Subcommand)]
enum Command {
    /// Decide a property and report the verdict with witnesses.
    #[command(subcommand)]
    Check(CheckCmd),
    /// Generator-algebra operations producing generators.
    #[command(subcommand)]
    Op(OpCmd),
    /// Coordinator construction.
    #[command(subcommand)]
    Coordinator(CoordinatorCmd),
    /// Supervisor synthesis pipelines.
    #[command(subcommand)]
    Synth(SynthCmd),
    /// Minimal coordinator-alphabet extension solvers.
    #[command(subcommand)]
    Minext(MinextCmd),
    /// Instance generators.
    #[command(subcommand)]
    Gen(GenCmd),
}

#[derive(Subcommand)]
enum CheckCmd {
    /// Conditional decomposability of a specification language.
    Cd(CdArgs),
    /// Monolithic controllability of a specification against a plant.
    Controllable(ControllableArgs),
    /// Conditional controllability (three-level) for a problem file.
    Cc(ProblemCheckArgs),
    /// Conditional closedness (three-level) for a problem file.
    Closed(ProblemCheckArgs),
    /// The observer property of a projection for a generator's marked language.
    Observer(ProjectionArgs),
    /// Local control consistency of a projection for a generator's closed language.
    Lcc(LccArgs),
    /// Nonblockingness of a generator.
    Nonblocking(InputArg),
    /// Conditional independence of plants with respect to a coordinator.
    Independent(IndependentArgs),
}

#[derive(Args)]
struct CdArgs {
    /// Specification generator (JSON).
    #[arg(long)]
    spec: PathBuf,
    /// Alphabets file listing the component event sets.
    #[arg(long)]
    alphabets: PathBuf,
    /// Coordinator events, comma separated.
    #[arg(long, default_value = "")]
    sigma_k: String,
    /// Check the prefix closure instead of the marked language.
    #[arg(long)]
    closure: bool,
}

#[derive(Args)]
struct ControllableArgs {
    #[arg(long)]
    spec: PathBuf,
    /// Plant generator; repeat to compose several.
    #[arg(long, required = true)]
    plant: Vec<PathBuf>,
    /// Uncontrollable events, comma separated; flags are the default.
    #[arg(long)]
    uncontrollable: Option<String>,
}

#[derive(Args)]
struct ProblemCheckArgs {
    #[arg(long)]
    problem: PathBuf,
    /// Explicit coordinator generator; the built one is the default.
    #[arg(long)]
    coordinator: Option<PathBuf>,
}

#[derive(Args)]
struct ProjectionArgs {
    #[arg(long)]
    plant: PathBuf,
    /// Projection target events, comma separated.
    #[arg(long)]
    target: String,
}

#[derive(Args)]
struct LccArgs {
    #[arg(long)]
    plant: PathBuf,
    #[arg(long)]
    target: String,
    #[arg(long)]
    uncontrollable: Option<String>,
}

#[derive(Args)]
struct InputArg {
    #[arg(long)]
    plant: PathBuf,
}

#[derive(Args)]
struct IndependentArgs {
    #[arg(long, required = true)]
    plant: Vec<PathBuf>,
    #[arg(long)]
    coordinator: PathBuf,
}

#[derive(Subcommand)]
enum OpCmd {
    /// Synchronous product of two or more generators.
    Product(ProductArgs),
    /// Natural projection onto a subalphabet.
    Project(ProjectArgs),
    /// Inverse projection onto a larger alphabet.
    Invproject(InvprojectArgs),
    /// Prefix closure (trim, then mark every state).
    Closure(UnaryArgs),
    /// Accessible and coaccessible part.
    Trim(UnaryArgs),
    /// Supremal controllable sublanguage.
    Supc(SupcArgs),
}

#[derive(Args)]
struct ProductArgs {
    /// Input generators (two or more).
    #[arg(required = true, num_args = 2..)]
    inputs: Vec<PathBuf>,
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long)]
    dot: Option<PathBuf>,
}

#[derive(Args)]
struct ProjectArgs {
    #[arg(long)]
    input: PathBuf,
    #[arg(long)]
    target: String,
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long)]
    dot: Option<PathBuf>,
}

#[derive(Args)]
struct InvprojectArgs {
    #[arg(long)]
    input: PathBuf,
    /// Full alphabet; events absent from the input alphabet are added as
    /// controllable unless listed in --uncontrollable.
    #[arg(long)]
    full: String,
    #[arg(long)]
    uncontrollable: Option<String>,
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long)]
    dot: Option<PathBuf>,
}

#[derive(Args)]
struct UnaryArgs {
    #[arg(long)]
    input: PathBuf,
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long)]
    dot: Option<PathBuf>,
}

#[derive(Args)]
struct SupcArgs {
    #[arg(long)]
    spec: PathBuf,
    #[arg(long, required = true)]
    plant: Vec<PathBuf>,
    #[arg(long)]
    uncontrollable: Option<String>,
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long)]
    dot: Option<PathBuf>,
}

#[derive(Subcommand)]
enum CoordinatorCmd {
    /// Product of the plant projections onto the coordinator alphabet.
    Build(CoordinatorBuildArgs),
    /// Coordinator for nonblockingness from two local supervisors.
    Nonblocking(CoordinatorNonblockingArgs),
}

#[derive(Args)]
struct CoordinatorBuildArgs {
    #[arg(long)]
    problem: PathBuf,
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long)]
    dot: Option<PathBuf>,
}

#[derive(Args)]
struct CoordinatorNonblockingArgs {
    /// Local supervisor; pass exactly twice.
    #[arg(long, required = true)]
    local: Vec<PathBuf>,
    #[arg(long, default_value = "")]
    sigma_k: String,
    #[arg(long)]
    uncontrollable: Option<String>,
    /// Where to write the coordinator generator.
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long)]
    dot: Option<PathBuf>,
}

#[derive(Subcommand)]
enum SynthCmd {
    /// Full pipeline: decomposability, coordinator, synthesis, hypothesis
    /// checks, optional refinement.
    Solve(SynthArgs),
    /// The synthesis equations only.
    Star(SynthArgs),
    /// Synthesis followed by the refinement recursion.
    Refine(SynthArgs),
}

#[derive(Args)]
struct SynthArgs {
    #[arg(long)]
    problem: PathBuf,
    /// Write the JSON report here instead of stdout.
    #[arg(long)]
    report: Option<PathBuf>,
    /// Directory for DOT exports of the synthesized generators.
    #[arg(long)]
    dot: Option<PathBuf>,
}

#[derive(Subcommand)]
enum MinextCmd {
    /// Exhaustive minimal extension (certified).
    Exact(MinextArgs),
    /// Greedy extension (fast, not certified minimal).
    Greedy(MinextArgs),
}

#[derive(Args)]
struct MinextArgs {
    #[arg(long)]
    spec: PathBuf,
    #[arg(long)]
    alphabets: PathBuf,
}

#[derive(Subcommand)]
enum GenCmd {
    /// Emit the decomposability instance of a set-cover instance.
    Setcover(SetcoverArgs),
}

#[derive(Args)]
struct SetcoverArgs {
    #[arg(long)]
    instance: PathBuf,
    /// Output directory for spec.json and alphabets.json.
    #[arg(long)]
    out: PathBuf,
}

// ---------------------------------------------------------------------------

pub(crate) enum CliError {
    Input(String),
    Limit(String),
}

impl From<CoreError> for CliError {
    fn from(e: CoreError) -> Self {
        if e.is_resource_limit() {
            CliError::Limit(e.to_string())
        } else {
            CliError::Input(e.to_string())
        }
    }
}

type CliResult = Result<(), CliError>;

fn parse_names(s: &str) -> Vec<String> {
    s.split(',')
        .map(str::trim)
        .filter(|p| !p.is_empty())
        .map(str::to_string)
        .collect()
}

fn load_generator(path: &Path) -> Result<Generator, CliError> {
    Ok(json::load_generator_file(path)?)
}

fn subalphabet(g: &Generator, names: &[String]) -> Result<EventSet, CliError> {
    Ok(g.alphabet()
        .restrict_to(names.iter().map(|s| s.as_str()))?)
}

fn uncontrollable_set(g: &Generator, arg: &Option<String>) -> Result<EventSet, CliError> {
    match arg {
        Some(s) => subalphabet(g, &parse_names(s)),
        None => Ok(g.alphabet().uncontrollable_subset()),
    }
}

fn write_generator(g: &Generator, out: &Option<PathBuf>, dot: &Option<PathBuf>) -> CliResult {
    let text = json::generator_to_json(g);
    match out {
        Some(path) => std::fs::write(path, text)
            .map_err(|e| CliError::Input(format!("cannot write `{}`: {e}", path.display())))?,
        None => print!("{text}"),
    }
    if let Some(path) = dot {
        std::fs::write(path, descoord_core::dot::export_dot(g))
            .map_err(|e| CliError::Input(format!("cannot write `{}`: {e}", path.display())))?;
    }
    Ok(())
}

fn load_problem(path: &Path, cli: &Cli) -> Result<(CoordinationProblem, Limits), CliError> {
    let loaded = json::load_problem_file(path)?;
    let mut limits = cli.limits();
    if cli.cap.is_none() {
        if let Some(cap) = loaded.determinization_cap {
            limits.determinization_cap = cap;
        }
    }
    Ok((loaded.problem, limits))
}

// Die quietly on a closed pipe instead of panicking mid-print.
#[cfg(unix)]
fn reset_sigpipe() {
    unsafe {
        libc::signal(libc::SIGPIPE, libc::SIG_DFL);
    }
}

#[cfg(not(unix))]
fn reset_sigpipe() {}

fn main() -> ExitCode {
    reset_sigpipe();
    let cli = Cli::parse();
    match run(&cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(CliError::Input(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(1)
        }
        Err(CliError::Limit(msg)) => {
            eprintln!("resource limit: {msg}");
            ExitCode::from(2)
        }
    }
}

fn run(cli: &Cli) -> CliResult {
    match &cli.command {
        Command::Check(cmd) => run_check(cli, cmd),
        Command::Op(cmd) => run_op(cli, cmd),
        Command::Coordinator(cmd) => run_coordinator(cli, cmd),
        Command::Synth(cmd) => run_synth(cli, cmd),
        Command::Minext(cmd) => run_minext(cli, cmd),
        Command::Gen(cmd) => run_gen(cmd),
    }
}

fn run_check(cli: &Cli, cmd: &CheckCmd) -> CliResult {
    let limits = cli.limits();
    match cmd {
        CheckCmd::Cd(args) => {
            let spec = load_generator(&args.spec)?;
            let defs = json::load_alphabets_file(&args.alphabets)?;
            let alphabets = defs
                .alphabets
                .iter()
                .map(|names| subalphabet(&spec, names))
                .collect::<Result<Vec<_>, _>>()?;
            let sigma_k = subalphabet(&spec, &parse_names(&args.sigma_k))?;
            let mode = if args.closure { Mode::Closed } else { Mode::Marked };
            let v = is_conditionally_decomposable(&spec, &alphabets, &sigma_k, mode, &limits)?;
            Report::cd(args.closure, &v).emit(cli.json);
        }
        CheckCmd::Controllable(args) => {
            let spec = load_generator(&args.spec)?;
            let plants = args
                .plant
                .iter()
                .map(|p| load_generator(p))
                .collect::<Result<Vec<_>, _>>()?;
            let refs: Vec<&Generator> = plants.iter().collect();
            let plant = sync_product_all(&refs)?;
            let unctrl = uncontrollable_set(&plant, &args.uncontrollable)?;
            let v = is_controllable(&spec, &plant, &unctrl, &limits)?;
            Report::controllable(&v).emit(cli.json);
        }
        CheckCmd::Cc(args) => {
            let (problem, limits) = load_problem(&args.problem, cli)?;
            let plants: Vec<&Generator> = problem.plants.iter().collect();
            let coordinator = match &args.coordinator {
                Some(path) => load_generator(path)?,
                None => build_coordinator(&plants, &problem.sigma_k, &limits)?,
            };
            let unctrl = problem.uncontrollable();
            let v = is_conditionally_controllable(
                &problem.spec,
                &plants,
                &coordinator,
                &unctrl,
                &limits,
            )?;
            Report::conditionally_controllable(&v).emit(cli.json);
        }
        CheckCmd::Closed(args) => {
            let (problem, limits) = load_problem(&args.problem, cli)?;
            let plants: Vec<&Generator> = problem.plants.iter().collect();
            let coordinator = match &args.coordinator {
                Some(path) => load_generator(path)?,
                None => build_coordinator(&plants, &problem.sigma_k, &limits)?,
            };
            let v = is_conditionally_closed(&problem.spec, &plants, &coordinator, &limits)?;
            Report::conditionally_closed(&v).emit(cli.json);
        }
        CheckCmd::Observer(args) => {
            let plant = load_generator(&args.plant)?;
            let target = subalphabet(&plant, &parse_names(&args.target))?;
            let spec = ProjectionSpec::new(plant.alphabet().clone(), &target)?;
            let v = is_observer(&plant, &spec, &limits)?;
            Report::observer(&v).emit(cli.json);
        }
        CheckCmd::Lcc(args) => {
            let plant = load_generator(&args.plant)?;
            let target = subalphabet(&plant, &parse_names(&args.target))?;
            let spec = ProjectionSpec::new(plant.alphabet().clone(), &target)?;
            let unctrl = uncontrollable_set(&plant, &args.uncontrollable)?;
            let v = is_lcc(&plant, &spec, &unctrl, &limits)?;
            Report::lcc(&v).emit(cli.json);
        }
        CheckCmd::Nonblocking(args) => {
            let plant = load_generator(&args.plant)?;
            Report::nonblocking(plant.is_nonblocking()).emit(cli.json);
        }
        CheckCmd::Independent(args) => {
            let plants = args
                .plant
                .iter()
                .map(|p| load_generator(p))
                .collect::<Result<Vec<_>, _>>()?;
            let refs: Vec<&Generator> = plants.iter().collect();
            let coordinator = load_generator(&args.coordinator)?;
            let v = conditionally_independent(&refs, &coordinator);
            Report::independent(&v).emit(cli.json);
        }
    }
    Ok(())
}

fn run_op(cli: &Cli, cmd: &OpCmd) -> CliResult {
    let limits = cli.limits();
    match cmd {
        OpCmd::Product(args) => {
            let gens = args
                .inputs
                .iter()
                .map(|p| load_generator(p))
                .collect::<Result<Vec<_>, _>>()?;
            let refs: Vec<&Generator> = gens.iter().collect();
            let product = sync_product_all(&refs)?;
            write_generator(&product, &args.out, &args.dot)
        }
        OpCmd::Project(args) => {
            let g = load_generator(&args.input)?;
            let names = parse_names(&args.target);
            let p = project_onto(&g, names.iter().map(|s| s.as_str()), &limits)?;
            write_generator(&p, &args.out, &args.dot)
        }
        OpCmd::Invproject(args) => {
            let g = load_generator(&args.input)?;
            let unctrl: Vec<String> = args
                .uncontrollable
                .as_deref()
                .map(parse_names)
                .unwrap_or_default();
            let mut full = EventSet::new();
            for name in parse_names(&args.full) {
                let event = match g.alphabet().by_name(&name) {
                    Some(e) => e.clone(),
                    None => descoord_core::Event::new(name.clone(), !unctrl.contains(&name)),
                };
                full.insert(event)?;
            }
            let lifted = inverse_project(&g, &full)?;
            write_generator(&lifted, &args.out, &args.dot)
        }
        OpCmd::Closure(args) => {
            let g = load_generator(&args.input)?;
            write_generator(&g.prefix_closure(), &args.out, &args.dot)
        }
        OpCmd::Trim(args) => {
            let g = load_generator(&args.input)?;
            write_generator(&g.trim(), &args.out, &args.dot)
        }
        OpCmd::Supc(args) => {
            let spec = load_generator(&args.spec)?;
            let plants = args
                .plant
                .iter()
                .map(|p| load_generator(p))
                .collect::<Result<Vec<_>, _>>()?;
            let refs: Vec<&Generator> = plants.iter().collect();
            let plant = sync_product_all(&refs)?;
            let unctrl = uncontrollable_set(&plant, &args.uncontrollable)?;
            let s = sup_c(&spec, &plant, &unctrl, &limits)?;
            write_generator(&s, &args.out, &args.dot)
        }
    }
}

fn run_coordinator(cli: &Cli, cmd: &CoordinatorCmd) -> CliResult {
    match cmd {
        CoordinatorCmd::Build(args) => {
            let (problem, limits) = load_problem(&args.problem, cli)?;
            let plants: Vec<&Generator> = problem.plants.iter().collect();
            let gk = build_coordinator(&plants, &problem.sigma_k, &limits)?;
            write_generator(&gk, &args.out, &args.dot)
        }
        CoordinatorCmd::Nonblocking(args) => {
            let limits = cli.limits();
            if args.local.len() != 2 {
                return Err(CliError::Input(
                    "coordinator nonblocking needs exactly two --local supervisors".into(),
                ));
            }
            let s1 = load_generator(&args.local[0])?;
            let s2 = load_generator(&args.local[1])?;
            let union = s1.alphabet().union(s2.alphabet())?;
            let sigma_k =
                union.restrict_to(parse_names(&args.sigma_k).iter().map(|s| s.as_str()))?;
            let unctrl = match &args.uncontrollable {
                Some(s) => union.restrict_to(parse_names(s).iter().map(|x| x.as_str()))?,
                None => union.uncontrollable_subset(),
            };
            let res = nonblocking_coordinator(&s1, &s2, &sigma_k, &unctrl, &limits)?;
            if args.out.is_some() || args.dot.is_some() {
                write_generator(&res.coordinator, &args.out, &args.dot)?;
            }
            Report::nonblocking_coordinator(&res).emit(cli.json);
            Ok(())
        }
    }
}

fn run_synth(cli: &Cli, cmd: &SynthCmd) -> CliResult {
    let (args, kind) = match cmd {
        SynthCmd::Solve(a) => (a, output::SynthKind::Solve),
        SynthCmd::Star(a) => (a, output::SynthKind::Star),
        SynthCmd::Refine(a) => (a, output::SynthKind::Refine),
    };
    let (problem, limits) = load_problem(&args.problem, cli)?;
    let target = OutputTarget::new(args.report.clone());
    match kind {
        output::SynthKind::Solve => {
            let report = solve(&problem, &limits)?;
            if let Some(dir) = &args.dot {
                let mut gens: Vec<(String, &Generator)> = vec![
                    ("coordinator".into(), &report.star.coordinator),
                    ("sup_k".into(), &report.star.sup_k),
                    ("composed".into(), &report.composed_locals),
                ];
                for (i, g) in report.star.sup_locals.iter().enumerate() {
                    gens.push((format!("sup_{}k", i + 1), g));
                }
                if let Some(refined) = &report.refine {
                    gens.push(("refined_sup_k".into(), &refined.sup_k));
                    for (i, g) in refined.sup_locals.iter().enumerate() {
                        gens.push((format!("refined_sup_{}k", i + 1), g));
                    }
                }
                write_dot_dir(dir, &gens)?;
            }
            print_or_write(&report, target, cli.json, output::summarize_solve)
        }
        output::SynthKind::Star => {
            let star = synthesize_star(&problem, &limits)?;
            if let Some(dir) = &args.dot {
                let mut gens: Vec<(String, &Generator)> = vec![
                    ("coordinator".into(), &star.coordinator),
                    ("sup_k".into(), &star.sup_k),
                ];
                for (i, g) in star.sup_locals.iter().enumerate() {
                    gens.push((format!("sup_{}k", i + 1), g));
                }
                write_dot_dir(dir, &gens)?;
            }
            print_or_write(&star, target, cli.json, output::summarize_star)
        }
        output::SynthKind::Refine => {
            let star = synthesize_star(&problem, &limits)?;
            let refined = refine_doublestar(&problem, &star, &limits)?;
            if let Some(dir) = &args.dot {
                let mut gens: Vec<(String, &Generator)> =
                    vec![("refined_sup_k".into(), &refined.sup_k)];
                for (i, g) in refined.sup_locals.iter().enumerate() {
                    gens.push((format!("refined_sup_{}k", i + 1), g));
                }
                write_dot_dir(dir, &gens)?;
            }
            print_or_write(&refined, target, cli.json, output::summarize_refine)
        }
    }
}

fn write_dot_dir(dir: &Path, gens: &[(String, &Generator)]) -> CliResult {
    std::fs::create_dir_all(dir)
        .map_err(|e| CliError::Input(format!("cannot create `{}`: {e}", dir.display())))?;
    for (name, g) in gens {
        // Minimized for readable diagrams; the JSON report keeps the
        // synthesized automata as computed.
        let path = dir.join(format!("{name}.dot"));
        std::fs::write(&path, descoord_core::dot::export_dot(&g.minimize()))
            .map_err(|e| CliError::Input(format!("cannot write `{}`: {e}", path.display())))?;
    }
    Ok(())
}

fn run_minext(cli: &Cli, cmd: &MinextCmd) -> CliResult {
    let limits = cli.limits();
    let (args, exact) = match cmd {
        MinextCmd::Exact(a) => (a, true),
        MinextCmd::Greedy(a) => (a, false),
    };
    let spec = load_generator(&args.spec)?;
    let defs = json::load_alphabets_file(&args.alphabets)?;
    let alphabets = defs
        .alphabets
        .iter()
        .map(|names| subalphabet(&spec, names))
        .collect::<Result<Vec<_>, _>>()?;
    let result = if exact {
        exact_min_extension_threads(&spec, &alphabets, &limits, cli.threads.unwrap_or(1))?
    } else {
        greedy_min_extension(&spec, &alphabets, &limits)?
    };
    Report::minext(exact, &result).emit(cli.json);
    Ok(())
}

fn run_gen(cmd: &GenCmd) -> CliResult {
    match cmd {
        GenCmd::Setcover(args) => {
            let def = json::load_setcover_file(&args.instance)?;
            let instance = SetCoverInstance::from_def(def)?;
            let (k, alphabets) = setcover_to_cd(&instance)?;
            std::fs::create_dir_all(&args.out).map_err(|e| {
                CliError::Input(format!("cannot create `{}`: {e}", args.out.display()))
            })?;
            let spec_path = args.out.join("spec.json");
            std::fs::write(&spec_path, json::generator_to_json(&k)).map_err(|e| {
                CliError::Input(format!("cannot write `{}`: {e}", spec_path.display()))
            })?;
            let alphabets_path = args.out.join("alphabets.json");
            let def = json::AlphabetsDef {
                alphabets: alphabets.iter().map(|a| a.names()).collect(),
            };
            let mut text = serde_json::to_string_pretty(&def).expect("serializable");
            text.push('\n');
            std::fs::write(&alphabets_path, text).map_err(|e| {
                CliError::Input(format!("cannot write `{}`: {e}", alphabets_path.display()))
            })?;
            println!("{}", spec_path.display());
            println!("{}", alphabets_path.display());
            Ok(())
        }
    }
}
