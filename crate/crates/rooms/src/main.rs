//! Command-line front end. Decision commands print `YES` or `NO` on the
//! first stdout line, optionally followed by a witness block. Exit codes:
//! 0 on clean completion (either answer), 2 on input errors, 3 when the
//! search budget runs out.

use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Duration;

use anyhow::{Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};

use rooms::covers::{
    directed_triangle_cover, perfect_3dm, triangle_cover, unary_bin_pack, CoverError,
};
use rooms::dictatorship::{sd_best_triples, sd_worst, DictatorOrder};
use rooms::exact::{
    enumerate_feasible, enumerate_poa, find_feasible, find_poa_brute, find_unanimous_best,
    improve_to_poa, verify_poa, SearchBudget, SearchError, Verdict, VerifyMethod,
};
use rooms::format::{
    parse_assignment, parse_binpack, parse_digraph, parse_graph, parse_hypergraph,
    parse_instance, write_assignment, write_certificate, write_digraph, write_instance,
};
use rooms::generate::{gen_random_instance, GeneratorParams};
use rooms::model::{validate_instance, Assignment, ComparisonMode, Instance};
use rooms::reductions::{
    dtc_from_3dm, feasibility_instance, poa_instance_binpack, poa_instance_ties_best,
    poa_instance_ties_worst, verification_instance_best, verification_instance_worst,
};

const DEFAULT_NODE_LIMIT: u64 = 1_000_000_000;

#[derive(Parser)]
#[command(name = "rooms", version, about = "Pareto-optimal room assignment toolkit")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct BudgetArgs {
    /// Search node limit; 0 means unlimited.
    #[arg(long, default_value_t = DEFAULT_NODE_LIMIT)]
    node_limit: u64,
    /// Wall-clock limit in seconds.
    #[arg(long)]
    time_limit: Option<f64>,
}

impl BudgetArgs {
    fn budget(&self) -> SearchBudget {
        SearchBudget {
            node_limit: (self.node_limit > 0).then_some(self.node_limit),
            time_limit: self.time_limit.map(Duration::from_secs_f64),
        }
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum FindMethod {
    /// Serial dictatorship (strict complete lists only).
    Sd,
    /// Exhaustive scan for a Pareto-optimal assignment.
    Brute,
    /// Pareto-improvement chain from a feasible start.
    Improve,
}

#[derive(Clone, Copy, ValueEnum)]
enum VerifyMode {
    Pruned,
    Brute,
}

#[derive(Clone, Copy, ValueEnum)]
enum Construction {
    /// Worst-mode verification instance from a graph.
    Verw,
    /// Best-mode verification instance from a digraph.
    Verb,
    /// Feasibility instance from a graph.
    Feas,
    /// Cyclic first-choice instance from a packing input.
    Binpack,
    /// Ties instance (Best) from a digraph.
    Tiesbest,
    /// Ties instance (Worst) from a graph.
    Tiesworst,
    /// Directed triangle cover digraph from a 3-dimensional hypergraph.
    Dtc3dm,
}

#[derive(Clone, Copy, ValueEnum)]
enum OracleProblem {
    /// Triangle cover of a graph.
    Tc,
    /// Directed triangle cover of a digraph.
    Dtc,
    /// Perfect matching of a 3-dimensional hypergraph.
    #[value(name = "3dm")]
    Tdm,
    /// Unary bin packing.
    Bin,
}

#[derive(Clone, Copy, ValueEnum)]
enum ModeArg {
    Best,
    Worst,
}

#[derive(Subcommand)]
enum Command {
    /// Decide whether an assignment is Pareto optimal (NO prints a
    /// dominating assignment).
    Verify {
        #[arg(short, long)]
        instance: PathBuf,
        #[arg(short, long)]
        assignment: PathBuf,
        #[arg(long, value_enum, default_value_t = VerifyMode::Pruned)]
        method: VerifyMode,
        #[command(flatten)]
        budget: BudgetArgs,
    },
    /// Find a Pareto-optimal assignment.
    Find {
        #[arg(short, long)]
        instance: PathBuf,
        #[arg(long, value_enum)]
        method: FindMethod,
        /// Dictator order as 1-based ids, e.g. "3 1 2" (sd method).
        #[arg(long)]
        order: Option<String>,
        /// Feasible starting assignment (improve method; found if omitted).
        #[arg(short, long)]
        assignment: Option<PathBuf>,
        #[command(flatten)]
        budget: BudgetArgs,
    },
    /// Decide whether any feasible assignment exists.
    Feasible {
        #[arg(short, long)]
        instance: PathBuf,
        #[command(flatten)]
        budget: BudgetArgs,
    },
    /// List all feasible (or all Pareto-optimal) assignments.
    Enumerate {
        #[arg(short, long)]
        instance: PathBuf,
        #[arg(long)]
        poa_only: bool,
        #[command(flatten)]
        budget: BudgetArgs,
    },
    /// Decide whether an assignment giving every player rank 1 exists.
    Unanimous {
        #[arg(short, long)]
        instance: PathBuf,
        #[command(flatten)]
        budget: BudgetArgs,
    },
    /// Build an instance (or digraph) from a cover/packing input.
    Reduce {
        #[arg(long, value_enum)]
        construction: Construction,
        /// Input file: graph, digraph, hypergraph, or binpack as needed.
        #[arg(short = 'g', long)]
        input: PathBuf,
        /// Base path: writes <out> and, when defined, <out>.assign.
        #[arg(short, long)]
        out: Option<PathBuf>,
    },
    /// Run a cover/packing oracle directly (YES prints a certificate).
    Oracle {
        #[arg(long, value_enum)]
        problem: OracleProblem,
        #[arg(short = 'g', long)]
        input: PathBuf,
        #[command(flatten)]
        budget: BudgetArgs,
    },
    /// Generate a seeded random instance.
    Gen {
        #[arg(long)]
        n: usize,
        /// Room capacities, e.g. "3 3 3".
        #[arg(long)]
        rooms: String,
        #[arg(long, value_enum, default_value_t = ModeArg::Best)]
        mode: ModeArg,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Allow ties (implied by a positive tie density).
        #[arg(long)]
        weak: bool,
        /// Allow unranked players (implied by acceptability < 1).
        #[arg(long)]
        incomplete: bool,
        #[arg(long, default_value_t = 1.0)]
        acceptability: f64,
        #[arg(long, default_value_t = 0.0)]
        tie_density: f64,
        #[arg(short, long)]
        out: Option<PathBuf>,
    },
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            let budget_hit = e.downcast_ref::<SearchError>().is_some_and(budget_exhausted)
                || e.downcast_ref::<CoverError>()
                    .is_some_and(|c| matches!(c, CoverError::Search(s) if budget_exhausted(s)));
            eprintln!("error: {e:#}");
            ExitCode::from(if budget_hit { 3 } else { 2 })
        }
    }
}

fn budget_exhausted(e: &SearchError) -> bool {
    matches!(e, SearchError::Budget { .. })
}

fn load_instance(path: &Path) -> Result<Instance> {
    let text = fs::read_to_string(path)
        .with_context(|| format!("reading {}", path.display()))?;
    let inst = parse_instance(&text)
        .with_context(|| format!("parsing {}", path.display()))?;
    let report = validate_instance(&inst);
    if !report.ok() {
        anyhow::bail!("invalid instance {}: {}", path.display(), report.violations.join("; "));
    }
    Ok(inst)
}

fn read_to_string(path: &Path) -> Result<String> {
    fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))
}

fn parse_order(spec: Option<&str>, n: usize) -> Result<DictatorOrder> {
    let Some(spec) = spec else {
        return Ok(DictatorOrder::identity(n));
    };
    let ids: Vec<usize> = spec
        .split([' ', ','])
        .filter(|t| !t.is_empty())
        .map(|t| {
            let id: usize = t.parse().with_context(|| format!("invalid order entry `{t}`"))?;
            anyhow::ensure!((1..=n).contains(&id), "order entry {id} out of range 1..={n}");
            Ok(id - 1)
        })
        .collect::<Result<_>>()?;
    Ok(DictatorOrder::new(ids)?)
}

fn print_decision(witness: Option<&Assignment>) {
    match witness {
        Some(a) => {
            println!("YES");
            print!("{}", write_assignment(a));
        }
        None => println!("NO"),
    }
}

fn run(cli: Cli) -> Result<()> {
    match cli.command {
        Command::Verify { instance, assignment, method, budget } => {
            let inst = load_instance(&instance)?;
            let a = parse_assignment(&read_to_string(&assignment)?, &inst)
                .with_context(|| format!("parsing {}", assignment.display()))?;
            let method = match method {
                VerifyMode::Pruned => VerifyMethod::Pruned,
                VerifyMode::Brute => VerifyMethod::Brute,
            };
            match verify_poa(&inst, &a, method, &budget.budget())? {
                Verdict::ParetoOptimal => println!("YES"),
                Verdict::DominatedBy(w) => {
                    println!("NO");
                    print!("{}", write_assignment(&w));
                }
            }
        }
        Command::Find { instance, method, order, assignment, budget } => {
            let inst = load_instance(&instance)?;
            let budget = budget.budget();
            let found = match method {
                FindMethod::Sd => {
                    let order = parse_order(order.as_deref(), inst.n)?;
                    let (a, _) = match inst.mode {
                        ComparisonMode::Best => sd_best_triples(&inst, &order)?,
                        ComparisonMode::Worst => sd_worst(&inst, &order)?,
                    };
                    Some(a)
                }
                FindMethod::Brute => find_poa_brute(&inst, &budget)?,
                FindMethod::Improve => {
                    let start = match assignment {
                        Some(path) => Some(
                            parse_assignment(&read_to_string(&path)?, &inst)
                                .with_context(|| format!("parsing {}", path.display()))?,
                        ),
                        None => find_feasible(&inst, &budget)?,
                    };
                    match start {
                        Some(start) => Some(improve_to_poa(&inst, &start, &budget)?.0),
                        None => None,
                    }
                }
            };
            print_decision(found.as_ref());
        }
        Command::Feasible { instance, budget } => {
            let inst = load_instance(&instance)?;
            print_decision(find_feasible(&inst, &budget.budget())?.as_ref());
        }
        Command::Enumerate { instance, poa_only, budget } => {
            let inst = load_instance(&instance)?;
            let budget = budget.budget();
            let all = if poa_only {
                enumerate_poa(&inst, &budget)?
            } else {
                enumerate_feasible(&inst, &budget)?
            };
            println!("count {}", all.len());
            for a in &all {
                print!("{}---\n", write_assignment(a));
            }
        }
        Command::Unanimous { instance, budget } => {
            let inst = load_instance(&instance)?;
            print_decision(find_unanimous_best(&inst, &budget.budget())?.as_ref());
        }
        Command::Reduce { construction, input, out } => {
            let text = read_to_string(&input)?;
            let ctx = || format!("parsing {}", input.display());
            let (instance, distinguished) = match construction {
                Construction::Verw => {
                    let out = verification_instance_worst(&parse_graph(&text).with_context(ctx)?)?;
                    (out.instance, out.distinguished)
                }
                Construction::Verb => {
                    let out = verification_instance_best(&parse_digraph(&text).with_context(ctx)?)?;
                    (out.instance, out.distinguished)
                }
                Construction::Feas => {
                    (feasibility_instance(&parse_graph(&text).with_context(ctx)?), None)
                }
                Construction::Binpack => {
                    (poa_instance_binpack(&parse_binpack(&text).with_context(ctx)?)?, None)
                }
                Construction::Tiesbest => {
                    (poa_instance_ties_best(&parse_digraph(&text).with_context(ctx)?)?, None)
                }
                Construction::Tiesworst => {
                    (poa_instance_ties_worst(&parse_graph(&text).with_context(ctx)?)?, None)
                }
                Construction::Dtc3dm => {
                    let d = dtc_from_3dm(&parse_hypergraph(&text).with_context(ctx)?);
                    emit(out.as_deref(), &write_digraph(&d))?;
                    return Ok(());
                }
            };
            match out {
                Some(base) => {
                    fs::write(&base, write_instance(&instance))
                        .with_context(|| format!("writing {}", base.display()))?;
                    if let Some(a) = &distinguished {
                        let mut assign = base.into_os_string();
                        assign.push(".assign");
                        let assign = PathBuf::from(assign);
                        fs::write(&assign, write_assignment(a))
                            .with_context(|| format!("writing {}", assign.display()))?;
                    }
                }
                None => {
                    print!("{}", write_instance(&instance));
                    if let Some(a) = &distinguished {
                        println!("---");
                        print!("{}", write_assignment(a));
                    }
                }
            }
        }
        Command::Oracle { problem, input, budget } => {
            let text = read_to_string(&input)?;
            let budget = budget.budget();
            let ctx = || format!("parsing {}", input.display());
            let cert = match problem {
                OracleProblem::Tc => triangle_cover(&parse_graph(&text).with_context(ctx)?, &budget)?,
                OracleProblem::Dtc => {
                    directed_triangle_cover(&parse_digraph(&text).with_context(ctx)?, &budget)?
                }
                OracleProblem::Tdm => perfect_3dm(&parse_hypergraph(&text).with_context(ctx)?, &budget)?,
                OracleProblem::Bin => unary_bin_pack(&parse_binpack(&text).with_context(ctx)?, &budget)?,
            };
            match cert {
                Some(c) => {
                    println!("YES");
                    print!("{}", write_certificate(&c));
                }
                None => println!("NO"),
            }
        }
        Command::Gen { n, rooms, mode, seed, weak, incomplete, acceptability, tie_density, out } => {
            let capacities: Vec<usize> = rooms
                .split([' ', ','])
                .filter(|t| !t.is_empty())
                .map(|t| t.parse().with_context(|| format!("invalid capacity `{t}`")))
                .collect::<Result<_>>()?;
            let params = GeneratorParams {
                n,
                capacities,
                mode: match mode {
                    ModeArg::Best => ComparisonMode::Best,
                    ModeArg::Worst => ComparisonMode::Worst,
                },
                strict: !weak && tie_density == 0.0,
                complete: !incomplete && acceptability >= 1.0,
                acceptability,
                tie_density,
                seed,
            };
            emit(out.as_deref(), &write_instance(&gen_random_instance(&params)?))?;
        }
    }
    Ok(())
}

fn emit(out: Option<&Path>, text: &str) -> Result<()> {
    match out {
        Some(path) => {
            fs::write(path, text).with_context(|| format!("writing {}", path.display()))
        }
        None => {
            print!("{text}");
            Ok(())
        }
    }
}
