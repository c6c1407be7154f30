//! Frontier best-first search over partially specified programs.

mod search;

pub use search::{expand, synthesize, EvaluationKey, Outcome, ResourceLimit, SearchNode, SearchStats, Synthesis, TabuList};

use std::time::Duration;

use serde::Serialize;

use crate::interpreter::{execute_with, ExecOptions, Executable, Fuel, HaltReason, Undefined};
use crate::model::{goal_distance, GpProblem};
use crate::program::{structural_validate, PartialProgram, Program, ProgramLimits};

/// Secondary ordering of nodes with equal goal distance.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum TieBreak {
    /// Prefer programs with more loops.
    #[default]
    MaxLoops,
    /// Prefer programs with fewer loops.
    MinLoops,
}

impl std::str::FromStr for TieBreak {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "max-loops" => Ok(TieBreak::MaxLoops),
            "min-loops" => Ok(TieBreak::MinLoops),
            other => Err(format!("unknown tie-breaker '{other}' (expected max-loops or min-loops)")),
        }
    }
}

#[derive(Clone, Debug)]
pub struct SynthesisConfig {
    pub limits: ProgramLimits,
    pub tie: TieBreak,
    pub time_limit: Option<Duration>,
    pub node_limit: Option<u64>,
    /// Abort once the open list is estimated to use more than this many bytes.
    pub memory_limit: Option<usize>,
    pub use_tabu: bool,
    /// How partial programs are evaluated.
    pub evaluation: Undefined,
    /// Worker threads for node evaluation; 0 uses every core.
    pub threads: usize,
}

impl SynthesisConfig {
    pub fn new(limits: ProgramLimits) -> Self {
        SynthesisConfig {
            limits,
            tie: TieBreak::MaxLoops,
            time_limit: Some(Duration::from_secs(3600)),
            node_limit: Some(10_000_000),
            memory_limit: Some(3 << 30),
            use_tabu: true,
            evaluation: Undefined::CloseOpen,
            threads: 0,
        }
    }
}

/// Sum over instances of the squared distance between the reached state and
/// the goal values, or `None` when an execution fails.
pub fn f_euclidean<P: Executable + ?Sized>(prog: &P, prob: &GpProblem, evaluation: Undefined) -> Option<u64> {
    let opts = ExecOptions {
        fuel: Fuel::UNLIMITED,
        undefined: evaluation,
        record: false,
    };
    let mut total = 0u64;
    for inst in &prob.instances {
        let t = execute_with(prog, &prob.domain, inst, opts);
        if matches!(t.halt, HaltReason::RuntimeError | HaltReason::FuelExhausted) {
            return None;
        }
        total = total.saturating_add(goal_distance(&t.final_state, inst));
    }
    Some(total)
}

pub fn f_min_loops(p: &PartialProgram) -> i64 {
    p.loop_count() as i64
}

pub fn f_max_loops(p: &PartialProgram) -> i64 {
    -f_min_loops(p)
}

/// True iff `prog` is structurally valid and reaches every goal, ending
/// normally, on every instance.
pub fn program_solves(prog: &Program, prob: &GpProblem) -> bool {
    structural_validate(prog).is_ok()
        && crate::interpreter::solves(prog, &prob.domain, &prob.instances, Fuel::UNLIMITED)
}

/// True iff the node's program is complete and solves `prob`.
pub fn is_solution(p: &PartialProgram, prob: &GpProblem) -> bool {
    p.to_program().is_some_and(|prog| program_solves(&prog, prob))
}
