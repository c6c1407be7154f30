//! Structured documents for synthesis runs and program validation.

use std::time::Instant;

use rayon::prelude::*;
use serde::Serialize;

use crate::interpreter::{execute_with, ExecOptions, Fuel, HaltReason, Undefined};
use crate::model::{Domain, GpProblem, Instance};
use crate::program::Program;
use crate::synthesis::{Outcome, ResourceLimit, SearchStats, Synthesis, SynthesisConfig, TieBreak};

/// The search configuration as it was run.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ConfigEcho {
    pub lines: usize,
    pub pointers: Vec<(String, String)>,
    pub tie: TieBreak,
    pub time_limit_secs: Option<f64>,
    pub node_limit: Option<u64>,
    pub memory_limit_bytes: Option<usize>,
    pub tabu: bool,
    pub evaluation: &'static str,
    pub threads: usize,
}

impl ConfigEcho {
    pub fn new(cfg: &SynthesisConfig, dom: &Domain) -> Self {
        ConfigEcho {
            lines: cfg.limits.max_lines,
            pointers: cfg
                .limits
                .pointers
                .iter()
                .map(|p| (p.name.clone(), dom.types[p.ty].clone()))
                .collect(),
            tie: cfg.tie,
            time_limit_secs: cfg.time_limit.map(|d| d.as_secs_f64()),
            node_limit: cfg.node_limit,
            memory_limit_bytes: cfg.memory_limit,
            tabu: cfg.use_tabu,
            evaluation: evaluation_name(cfg.evaluation),
            threads: cfg.threads,
        }
    }
}

pub fn evaluation_name(u: Undefined) -> &'static str {
    match u {
        Undefined::Halt => "halt",
        Undefined::CloseOpen => "close-open",
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct PlanLength {
    pub instance: String,
    pub applied: usize,
    pub attempted: u64,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SynthesisReport {
    pub solved: bool,
    /// `solved`, `exhausted` or `resource_limit`.
    pub outcome: &'static str,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub limit: Option<ResourceLimit>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub program: Option<String>,
    pub stats: SearchStats,
    pub plan_lengths: Vec<PlanLength>,
    pub config: ConfigEcho,
}

impl SynthesisReport {
    pub fn new(prob: &GpProblem, cfg: &SynthesisConfig, run: &Synthesis) -> Self {
        let dom = &prob.domain;
        let (outcome, limit) = match &run.outcome {
            Outcome::Solved(_) => ("solved", None),
            Outcome::Exhausted => ("exhausted", None),
            Outcome::ResourceLimit(l) => ("resource_limit", Some(*l)),
        };
        let (program, plan_lengths) = match &run.outcome {
            Outcome::Solved(p) => {
                let lengths = prob
                    .instances
                    .iter()
                    .map(|inst| {
                        let t = crate::interpreter::execute(p, dom, inst, Fuel::UNLIMITED);
                        PlanLength {
                            instance: inst.name.clone(),
                            applied: t.applied.len(),
                            attempted: t.attempted,
                        }
                    })
                    .collect();
                (Some(p.to_text(dom)), lengths)
            }
            _ => (None, Vec::new()),
        };
        SynthesisReport {
            solved: program.is_some(),
            outcome,
            limit,
            program,
            stats: run.stats.clone(),
            plan_lengths,
            config: ConfigEcho::new(cfg, dom),
        }
    }

    /// Process exit status: 0 solved, 2 exhausted, 3 resource limit.
    pub fn exit_code(&self) -> u8 {
        match (self.solved, self.limit) {
            (true, _) => 0,
            (false, None) => 2,
            (false, Some(_)) => 3,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct InstanceVerdict {
    pub instance: String,
    pub solved: bool,
    pub halt: HaltReason,
    pub applied: usize,
    pub attempted: u64,
    pub seconds: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ValidationReport {
    pub all_solved: bool,
    pub instances: Vec<InstanceVerdict>,
}

/// Runs `prog` on every instance in parallel; verdicts keep instance order.
pub fn validate(prog: &Program, dom: &Domain, instances: &[Instance], fuel: Fuel) -> ValidationReport {
    let instances: Vec<InstanceVerdict> = instances
        .par_iter()
        .map(|inst| {
            let start = Instant::now();
            let t = execute_with(
                prog,
                dom,
                inst,
                ExecOptions {
                    fuel,
                    undefined: Undefined::Halt,
                    record: true,
                },
            );
            InstanceVerdict {
                instance: inst.name.clone(),
                solved: t.halt == HaltReason::End && t.goal_reached(inst),
                halt: t.halt,
                applied: t.applied.len(),
                attempted: t.attempted,
                seconds: start.elapsed().as_secs_f64(),
            }
        })
        .collect();
    ValidationReport {
        all_solved: instances.iter().all(|v| v.solved),
        instances,
    }
}
