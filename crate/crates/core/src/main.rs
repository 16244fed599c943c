use std::path::Path;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use serde::Serialize;

use hqcl::harness::{builtin, builtin_cases, run_suite, SuiteConfig, SuiteName};
use hqcl::semantics::{check_classical_consequence, search_counterexample, Strategy};
use hqcl::tensor::{classify_entanglement, Matrix2c};
use hqcl::{
    parse, Error, Formula, ModelSpec, Partition, ScopedModel, StateVector, SyntacticalTree,
    TruthPerspective,
};

#[derive(Parser)]
#[command(
    name = "hqcl",
    version,
    about = "Holistic quantum computational logic toolkit"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Text,
    Json,
}

#[derive(Subcommand)]
enum Command {
    /// Parse a formula and show its syntactical tree or gate tree.
    Parse {
        formula: String,
        #[arg(long)]
        tree: bool,
        #[arg(long)]
        gate_tree: bool,
        /// Truth-perspective used for the gate tree (identity or hadamard).
        #[arg(long, default_value = "identity")]
        perspective: String,
    },
    /// Validate a model spec and print every occurrence's probability.
    Eval {
        /// Path to a model-spec JSON file, or `builtin:<id>`.
        model: String,
        #[arg(long, value_enum, default_value = "text")]
        report: Format,
        /// Print the spec itself instead of evaluating it.
        #[arg(long)]
        dump_spec: bool,
    },
    /// Run a named suite: valbool, nval, genui, gates, entangle or all.
    Suite {
        name: String,
        #[arg(long, default_value_t = 300)]
        trials: usize,
        #[arg(long, default_value_t = 1)]
        seed: u64,
        #[arg(long, value_enum, default_value = "text")]
        report: Format,
    },
    /// Search for a model in which alpha is more probable than beta.
    Consequence {
        #[arg(long)]
        alpha: String,
        #[arg(long)]
        beta: String,
        /// Context formula; repeatable. Defaults to `alpha & beta`.
        #[arg(long)]
        context: Vec<String>,
        #[arg(long, default_value_t = 200)]
        trials: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value = "both")]
        strategy: String,
        /// Enumerate register models instead (Boolean formulas only).
        #[arg(long)]
        classical: bool,
        #[arg(long, value_enum, default_value = "text")]
        report: Format,
    },
    /// Classify a quregister's entanglement with respect to a partition.
    Entangle {
        /// Amplitudes as JSON `[[re, im], ...]`, a file holding them, or one
        /// of `ghz`, `bell`, `w2` (for (|000> + |110>)/sqrt 2).
        state: String,
        /// Block sizes, e.g. `1,2`. Defaults to single qubits.
        #[arg(long, value_delimiter = ',')]
        blocks: Vec<usize>,
        #[arg(long, value_enum, default_value = "text")]
        report: Format,
    },
}

struct Failure {
    code: u8,
    message: String,
}

impl Failure {
    fn usage(message: impl Into<String>) -> Self {
        Self {
            code: 2,
            message: message.into(),
        }
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::usage(e.to_string())
    }
}

fn parse_formula(text: &str) -> Result<Formula, Failure> {
    parse(text).map_err(|e| Failure::usage(e.render(text)))
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Parse {
            formula,
            tree,
            gate_tree,
            perspective,
        } => cmd_parse(&formula, tree, gate_tree, &perspective),
        Command::Eval {
            model,
            report,
            dump_spec,
        } => cmd_eval(&model, report, dump_spec),
        Command::Suite {
            name,
            trials,
            seed,
            report,
        } => cmd_suite(&name, trials, seed, report),
        Command::Consequence {
            alpha,
            beta,
            context,
            trials,
            seed,
            strategy,
            classical,
            report,
        } => cmd_consequence(
            &alpha, &beta, &context, trials, seed, &strategy, classical, report,
        ),
        Command::Entangle {
            state,
            blocks,
            report,
        } => cmd_entangle(&state, &blocks, report),
    };
    match result {
        Ok(code) => ExitCode::from(code),
        Err(f) => {
            eprintln!("error: {}", f.message);
            ExitCode::from(f.code)
        }
    }
}

fn cmd_parse(text: &str, tree: bool, gate_tree: bool, perspective: &str) -> Result<u8, Failure> {
    let f = parse_formula(text)?;
    let t = TruthPerspective::by_name(perspective)?;
    let st = SyntacticalTree::new(&f);
    println!("{f}");
    println!(
        "atomic complexity {}, height {}",
        st.n_qubits(),
        st.height()
    );
    if tree {
        print!("{st}");
    }
    if gate_tree {
        print!("{}", st.gate_tree(&t));
    }
    Ok(0)
}

fn load_spec(source: &str) -> Result<ModelSpec, Failure> {
    if let Some(id) = source.strip_prefix("builtin:") {
        return builtin(id).map(|c| c.spec).ok_or_else(|| {
            let ids: Vec<&str> = builtin_cases().iter().map(|c| c.id).collect();
            Failure::usage(format!(
                "unknown built-in `{id}` (available: {})",
                ids.join(", ")
            ))
        });
    }
    let text = std::fs::read_to_string(Path::new(source))
        .map_err(|e| Failure::usage(format!("cannot read {source}: {e}")))?;
    let spec = ModelSpec::from_json(&text)?;
    parse(&spec.formula).map_err(|e| Failure::usage(e.render(&spec.formula)))?;
    Ok(spec)
}

#[derive(Serialize)]
struct OccurrenceRow {
    level: usize,
    position: usize,
    formula: String,
    probability: f64,
}

#[derive(Serialize)]
struct EvalReport {
    formula: String,
    perspective: TruthPerspective,
    n_qubits: usize,
    valid: bool,
    compositional: bool,
    probability: f64,
    /// Reduced state of the last qubit of the whole formula.
    truth_value: [[[f64; 2]; 2]; 2],
    occurrences: Vec<OccurrenceRow>,
}

fn truth_value(m: &ScopedModel) -> Matrix2c {
    m.meaning().single_qubit_state(m.n_qubits() - 1)
}

fn cmd_eval(source: &str, format: Format, dump: bool) -> Result<u8, Failure> {
    let spec = load_spec(source)?;
    if dump {
        println!("{}", spec.to_json());
        return Ok(0);
    }
    let model = spec.build()?;
    let d = model.validate();
    if !d.is_model() {
        eprintln!("{}", d.summary());
        return Err(Failure {
            code: 3,
            message: format!("`{}` is not a model", spec.formula),
        });
    }
    let tree = model.tree();
    let mut rows = Vec::new();
    for occ in tree.primary_occurrences() {
        rows.push(OccurrenceRow {
            level: occ.level,
            position: occ.position,
            formula: tree.node_formula(occ.node).to_string(),
            probability: model.probability_at(&occ)?,
        });
    }
    let tv = truth_value(&model);
    let entry = |i: usize, j: usize| [tv[(i, j)].re, tv[(i, j)].im];
    let report = EvalReport {
        formula: model.formula().to_string(),
        perspective: model.perspective().clone(),
        n_qubits: model.n_qubits(),
        valid: true,
        compositional: d.compositional,
        probability: model.probability(),
        truth_value: [[entry(0, 0), entry(0, 1)], [entry(1, 0), entry(1, 1)]],
        occurrences: rows,
    };
    match format {
        Format::Json => println!(
            "{}",
            serde_json::to_string_pretty(&report).expect("serializable")
        ),
        Format::Text => {
            println!("context {} ({} qubits)", report.formula, report.n_qubits);
            println!(
                "model valid, {}compositional",
                if report.compositional { "" } else { "not " }
            );
            println!("probability {:.12}", report.probability);
            println!(
                "truth value [[{:.6}, {:.6}{:+.6}i], [{:.6}{:+.6}i, {:.6}]]",
                tv[(0, 0)].re + 0.0,
                tv[(0, 1)].re + 0.0,
                tv[(0, 1)].im + 0.0,
                tv[(1, 0)].re + 0.0,
                tv[(1, 0)].im + 0.0,
                tv[(1, 1)].re + 0.0
            );
            for r in &report.occurrences {
                println!(
                    "  L{} #{}  p = {:.12}  {}",
                    r.level, r.position, r.probability, r.formula
                );
            }
        }
    }
    Ok(0)
}

fn cmd_suite(name: &str, trials: usize, seed: u64, format: Format) -> Result<u8, Failure> {
    let suite: SuiteName = name.parse().map_err(Failure::usage)?;
    let report = run_suite(suite, &SuiteConfig { trials, seed });
    match format {
        Format::Text => print!("{}", report.to_text()),
        Format::Json => println!("{}", report.to_json()),
    }
    Ok(if report.passed { 0 } else { 1 })
}

#[allow(clippy::too_many_arguments)]
fn cmd_consequence(
    alpha: &str,
    beta: &str,
    contexts: &[String],
    trials: usize,
    seed: u64,
    strategy: &str,
    classical: bool,
    format: Format,
) -> Result<u8, Failure> {
    let a = parse_formula(alpha)?;
    let b = parse_formula(beta)?;
    let verdict = if classical {
        if !contexts.is_empty() {
            return Err(Failure::usage(
                "--classical uses the context alpha & beta only",
            ));
        }
        check_classical_consequence(&a, &b)?
    } else {
        let strategy: Strategy = strategy.parse().map_err(Failure::usage)?;
        let ctxs = contexts
            .iter()
            .map(|c| parse_formula(c))
            .collect::<Result<Vec<_>, _>>()?;
        search_counterexample(&a, &b, &ctxs, strategy, trials, seed)?
    };
    match format {
        Format::Text => {
            println!("{verdict}");
            if let hqcl::Verdict::Counterexample(c) = &verdict {
                println!("{}", c.model.to_json());
            }
        }
        Format::Json => println!(
            "{}",
            serde_json::to_string_pretty(&verdict).expect("serializable")
        ),
    }
    Ok(0)
}

fn preset(name: &str) -> Option<StateVector> {
    let s = std::f64::consts::FRAC_1_SQRT_2;
    let (n, idx): (usize, &[usize]) = match name {
        "ghz" => (3, &[0b000, 0b111]),
        "bell" => (2, &[0b00, 0b11]),
        "w2" => (3, &[0b000, 0b110]),
        _ => return None,
    };
    let mut amps = vec![hqcl::tensor::C64::from(0.0); 1 << n];
    idx.iter()
        .for_each(|&i| amps[i] = hqcl::tensor::C64::from(s));
    StateVector::new(amps).ok()
}

fn cmd_entangle(state: &str, blocks: &[usize], format: Format) -> Result<u8, Failure> {
    let psi = match preset(state) {
        Some(p) => p,
        None => {
            let text = if Path::new(state).is_file() {
                std::fs::read_to_string(state)
                    .map_err(|e| Failure::usage(format!("cannot read {state}: {e}")))?
            } else {
                state.to_string()
            };
            let v: StateVector = serde_json::from_str(&text)
                .map_err(|e| Failure::usage(format!("bad state: {e}")))?;
            v
        }
    };
    let part = if blocks.is_empty() {
        Partition::singletons(psi.n_qubits())
    } else {
        Partition::new(blocks.to_vec())?
    };
    let report = classify_entanglement(&psi, &part)?;
    match format {
        Format::Json => println!(
            "{}",
            serde_json::to_string_pretty(&report).expect("serializable")
        ),
        Format::Text => {
            for (i, p) in report.purities.iter().enumerate() {
                println!(
                    "block {} ({} qubits): purity {:.12}{}",
                    i + 1,
                    part.blocks()[i],
                    p,
                    if report.properly_mixed[i] {
                        ", proper mixture"
                    } else {
                        ""
                    }
                );
            }
            println!("entangled w.r.t. parts {:?}", report.entangled_wrt);
            println!(
                "{}-partite entangled: {}",
                part.len(),
                report.t_partite_entangled
            );
            println!("maximally entangled: {}", report.maximally_entangled);
        }
    }
    Ok(0)
}
