use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::sync::Mutex;
use std::thread;

use clap::{Args, Parser, Subcommand};
use semslice::engine::{
    emit_metrics, generate_first_responder, load_scenario_with, render_comparison, run,
    scenario_from_file, scenario_schema, DirSink, EmitError, GeneratorParams, Scenario, Summary,
    COMPARISON_FILE,
};
use semslice::policy::PolicyKind;

#[derive(Parser)]
#[command(name = "semslice", version, about = "Semantics-driven network slicing simulator")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run one policy and write its artifacts.
    Run(RunArgs),
    /// Run several policies on one scenario and write a comparison table.
    Compare(CompareArgs),
    /// Check a scenario file without running it.
    Validate(ScenarioArgs),
    /// Write the built-in first-responder scenario.
    Generate(GenerateArgs),
    /// Print the scenario file schema as JSON.
    EmitSchema,
}

#[derive(Args)]
struct ScenarioArgs {
    #[arg(long)]
    scenario: PathBuf,
    /// Override the scenario seed.
    #[arg(long)]
    seed: Option<u64>,
    /// Dotted-key override, e.g. `policy_params.gamma=3`. Repeatable.
    #[arg(long = "set", value_name = "KEY=VALUE")]
    set: Vec<String>,
}

#[derive(Args)]
struct RunArgs {
    #[command(flatten)]
    scenario: ScenarioArgs,
    /// static, dns, context or semantic; defaults to the scenario's choice.
    #[arg(long)]
    policy: Option<PolicyKind>,
    #[arg(long, env = "SEMSLICE_OUT_DIR", default_value = "out")]
    out: PathBuf,
}

#[derive(Args)]
struct CompareArgs {
    #[command(flatten)]
    scenario: ScenarioArgs,
    /// Comma-separated subset of policies.
    #[arg(long, value_delimiter = ',')]
    policies: Option<Vec<PolicyKind>>,
    #[arg(long, env = "SEMSLICE_OUT_DIR", default_value = "out")]
    out: PathBuf,
}

#[derive(Args)]
struct GenerateArgs {
    #[arg(long, default_value_t = 6)]
    ues: u32,
    #[arg(long, default_value_t = 200)]
    duration: u64,
    #[arg(long = "t-accident", default_value_t = 50)]
    t_accident: u64,
    #[arg(long, default_value_t = 42)]
    seed: u64,
    /// Output file; standard output when absent.
    #[arg(long)]
    out: Option<PathBuf>,
}

enum Failure {
    Input(String),
    Io(String),
}

impl Failure {
    fn exit(self) -> ExitCode {
        match self {
            Failure::Input(m) => {
                eprintln!("error: {m}");
                ExitCode::from(1)
            }
            Failure::Io(m) => {
                eprintln!("error: {m}");
                ExitCode::from(2)
            }
        }
    }
}

impl From<EmitError> for Failure {
    fn from(e: EmitError) -> Self {
        Failure::Io(e.to_string())
    }
}

fn load(args: &ScenarioArgs) -> Result<Scenario, Failure> {
    let text = fs::read_to_string(&args.scenario)
        .map_err(|e| Failure::Io(format!("{}: {e}", args.scenario.display())))?;
    let mut overrides = args.set.clone();
    if let Some(seed) = args.seed {
        overrides.push(format!("seed={seed}"));
    }
    load_scenario_with(&text, &overrides)
        .map_err(|e| Failure::Input(format!("{}:\n{e}", args.scenario.display())))
}

fn print_summary(s: &Summary) {
    println!("policy                 {}", s.policy);
    println!("qos_satisfaction_rate  {:.6}", s.qos_satisfaction_rate);
    println!("sla_violation_count    {}", s.sla_violation_count);
    println!("mean_allocation        {:.6}", s.mean_allocation_fraction);
    println!(
        "switches               {} requested, {} accepted, {} denied",
        s.switch_requested, s.switch_accepted, s.switch_denied
    );
    println!("mean_switch_latency    {:.3}", s.mean_switch_latency);
    println!("admission_denials      {}", s.admission_denials);
    println!(
        "actions                {} applied, {} dropped",
        s.actions_applied, s.actions_dropped
    );
}

fn cmd_run(args: RunArgs) -> Result<(), Failure> {
    let scn = load(&args.scenario)?;
    let policy = args
        .policy
        .or(scn.file.policy)
        .unwrap_or(PolicyKind::Semantic);
    let report = run(&scn, policy);
    emit_metrics(&report, &mut DirSink::new(&args.out))?;
    print_summary(&report.summary());
    Ok(())
}

fn cmd_compare(args: CompareArgs) -> Result<(), Failure> {
    let scn = load(&args.scenario)?;
    let mut policies = args.policies.unwrap_or_else(|| PolicyKind::ALL.to_vec());
    policies.sort();
    policies.dedup();
    let console = Mutex::new(());
    let results: Vec<Result<Summary, Failure>> = thread::scope(|s| {
        let handles: Vec<_> = policies
            .iter()
            .map(|&p| {
                let (scn, out, console) = (&scn, &args.out, &console);
                s.spawn(move || {
                    let report = run(scn, p);
                    emit_metrics(&report, &mut DirSink::new(out.join(p.as_str())))?;
                    let _guard = console.lock().unwrap_or_else(|e| e.into_inner());
                    println!("{}: done", p.label());
                    Ok(report.summary())
                })
            })
            .collect();
        handles
            .into_iter()
            .map(|h| h.join().expect("simulation threads do not panic"))
            .collect()
    });
    let summaries = results.into_iter().collect::<Result<Vec<_>, _>>()?;
    write_file(&args.out.join(COMPARISON_FILE), &render_comparison(&summaries))?;
    for s in &summaries {
        println!();
        print_summary(s);
    }
    Ok(())
}

fn write_file(path: &Path, bytes: &[u8]) -> Result<(), Failure> {
    if let Some(dir) = path.parent() {
        fs::create_dir_all(dir).map_err(|e| Failure::Io(format!("{}: {e}", dir.display())))?;
    }
    fs::write(path, bytes).map_err(|e| Failure::Io(format!("{}: {e}", path.display())))
}

fn cmd_validate(args: ScenarioArgs) -> Result<(), Failure> {
    let scn = load(&args)?;
    println!(
        "{}: ok ({} slices, {} UEs, {} events, {} ticks)",
        args.scenario.display(),
        scn.file.slices.len(),
        scn.file.ues.len(),
        scn.file.timeline.len(),
        scn.file.duration_ticks
    );
    Ok(())
}

fn cmd_generate(args: GenerateArgs) -> Result<(), Failure> {
    let file = generate_first_responder(GeneratorParams {
        ues: args.ues,
        duration: args.duration,
        t_accident: args.t_accident,
        seed: args.seed,
    })
    .map_err(|e| Failure::Input(e.to_string()))?;
    scenario_from_file(file.clone())
        .map_err(|e| Failure::Input(format!("generated scenario is invalid:\n{e}")))?;
    let text = file.to_toml();
    match args.out {
        Some(path) => write_file(&path, text.as_bytes()),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { ExitCode::from(1) } else { ExitCode::SUCCESS };
        }
    };
    let result = match cli.command {
        Command::Run(a) => cmd_run(a),
        Command::Compare(a) => cmd_compare(a),
        Command::Validate(a) => cmd_validate(a),
        Command::Generate(a) => cmd_generate(a),
        Command::EmitSchema => {
            println!(
                "{}",
                serde_json::to_string_pretty(&scenario_schema()).expect("schema serializes")
            );
            Ok(())
        }
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => f.exit(),
    }
}
