use std::cmp::Reverse;
use std::collections::BinaryHeap;
use std::time::{Duration, Instant};

use rayon::prelude::*;
use rustc_hash::FxHashSet;
use serde::Serialize;

use super::{f_euclidean, program_solves, SynthesisConfig, TieBreak};
use crate::interpreter::Undefined;
use crate::model::GpProblem;
use crate::program::{
    candidate_instructions, loop_abstraction, Instruction, LoopAbstraction, PartialProgram, Program,
};

/// Lexicographic node key: goal distance, tie-breaker, insertion order.
pub type EvaluationKey = (u64, i64, u64);

#[derive(Clone, Debug)]
pub struct SearchNode {
    pub program: PartialProgram,
    pub key: EvaluationKey,
}

impl SearchNode {
    pub fn h(&self) -> u64 {
        self.key.0
    }
}

/// Loop abstractions of already expanded programs.
#[derive(Clone, Debug, Default)]
pub struct TabuList(FxHashSet<LoopAbstraction>);

impl TabuList {
    pub fn contains(&self, a: &LoopAbstraction) -> bool {
        self.0.contains(a)
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct SearchStats {
    pub expanded: u64,
    pub evaluated: u64,
    #[serde(serialize_with = "secs")]
    pub wall_time: Duration,
    pub peak_open: usize,
}

fn secs<S: serde::Serializer>(d: &Duration, s: S) -> Result<S::Ok, S::Error> {
    s.serialize_f64(d.as_secs_f64())
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum ResourceLimit {
    Time,
    Nodes,
    Memory,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Outcome {
    Solved(Program),
    Exhausted,
    ResourceLimit(ResourceLimit),
}

#[derive(Clone, Debug)]
pub struct Synthesis {
    pub outcome: Outcome,
    pub stats: SearchStats,
}

/// Goal distance of a node. A node whose implicit closing fails at runtime
/// is kept if its plain prefix runs cleanly, since that prefix is shared by
/// every extension.
fn evaluate(p: &PartialProgram, prob: &GpProblem, cfg: &SynthesisConfig) -> Option<u64> {
    f_euclidean(p, prob, cfg.evaluation).or_else(|| match cfg.evaluation {
        Undefined::CloseOpen => f_euclidean(p, prob, Undefined::Halt),
        Undefined::Halt => None,
    })
}

fn tie_value(tie: TieBreak, p: &PartialProgram) -> i64 {
    match tie {
        TieBreak::MaxLoops => super::f_max_loops(p),
        TieBreak::MinLoops => super::f_min_loops(p),
    }
}

/// Generates and evaluates the successors of `node`. The node's loop
/// abstraction enters the tabu list first; successors that program a loop
/// whose abstraction is already tabu are dropped, as are successors whose
/// defined prefix fails at runtime. Keys take consecutive values of `counter`.
pub fn expand(
    node: &SearchNode,
    prob: &GpProblem,
    cfg: &SynthesisConfig,
    tabu: &mut TabuList,
    counter: &mut u64,
) -> Vec<SearchNode> {
    let p = &node.program;
    if p.is_complete() || p.next_line() >= p.capacity() {
        return Vec::new();
    }
    if cfg.use_tabu {
        let a = loop_abstraction(p);
        if !a.is_empty() {
            tabu.0.insert(a);
        }
    }
    let children: Vec<PartialProgram> = candidate_instructions(p, &prob.domain, &cfg.limits, prob)
        .into_iter()
        .filter_map(|ins| {
            let opens_loop = matches!(ins, Instruction::ForStart { .. });
            let child = p.program_line(ins).ok()?;
            if cfg.use_tabu && opens_loop && tabu.contains(&loop_abstraction(&child)) {
                return None;
            }
            Some(child)
        })
        .collect();
    let scores: Vec<Option<u64>> = children
        .par_iter()
        .map(|c| evaluate(c, prob, cfg))
        .collect();
    children
        .into_iter()
        .zip(scores)
        .filter_map(|(program, h)| {
            let h = h?;
            let key = (h, tie_value(cfg.tie, &program), *counter);
            *counter += 1;
            Some(SearchNode { program, key })
        })
        .collect()
}

/// The complete program a freshly evaluated node stands for, if it solves
/// every instance. Under [`Undefined::CloseOpen`] a node with zero distance
/// is completed with its closers and `End` before the check.
fn solution_of(node: &SearchNode, prob: &GpProblem, cfg: &SynthesisConfig) -> Option<Program> {
    let prog = if node.program.is_complete() {
        node.program.to_program()?
    } else if node.h() == 0 && cfg.evaluation == Undefined::CloseOpen {
        node.program.completed()?
    } else {
        return None;
    };
    (node.h() == 0 && program_solves(&prog, prob)).then_some(prog)
}

struct Entry {
    key: EvaluationKey,
    lines: Box<[Instruction]>,
}

impl PartialEq for Entry {
    fn eq(&self, other: &Self) -> bool {
        self.key == other.key
    }
}
impl Eq for Entry {}
impl PartialOrd for Entry {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}
impl Ord for Entry {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        self.key.cmp(&other.key)
    }
}

fn entry_bytes(e: &Entry) -> usize {
    std::mem::size_of::<Entry>() + e.lines.len() * std::mem::size_of::<Instruction>() + 16
}

fn rebuild(empty: &PartialProgram, lines: &[Instruction]) -> PartialProgram {
    let mut p = empty.clone();
    for ins in lines {
        p = p.program_line(ins.clone()).expect("stored prefix replays");
    }
    p
}

fn search(prob: &GpProblem, cfg: &SynthesisConfig) -> Synthesis {
    let start = Instant::now();
    let mut stats = SearchStats::default();
    let done = |outcome, mut stats: SearchStats| {
        stats.wall_time = start.elapsed();
        Synthesis { outcome, stats }
    };
    let empty = PartialProgram::empty(&cfg.limits);
    let mut counter = 0u64;
    let Some(h0) = evaluate(&empty, prob, cfg) else {
        stats.evaluated = 1;
        return done(Outcome::Exhausted, stats);
    };
    stats.evaluated = 1;
    let root = SearchNode {
        program: empty.clone(),
        key: (h0, tie_value(cfg.tie, &empty), counter),
    };
    counter += 1;
    if let Some(p) = solution_of(&root, prob, cfg) {
        return done(Outcome::Solved(p), stats);
    }
    let mut tabu = TabuList::default();
    let mut open: BinaryHeap<Reverse<Entry>> = BinaryHeap::new();
    let mut open_bytes = 0usize;
    let e = Entry {
        key: root.key,
        lines: Box::new([]),
    };
    open_bytes += entry_bytes(&e);
    open.push(Reverse(e));
    stats.peak_open = 1;
    while let Some(Reverse(entry)) = open.pop() {
        open_bytes -= entry_bytes(&entry);
        if cfg.time_limit.is_some_and(|t| start.elapsed() > t) {
            return done(Outcome::ResourceLimit(ResourceLimit::Time), stats);
        }
        let node = SearchNode {
            program: rebuild(&empty, &entry.lines),
            key: entry.key,
        };
        let children = expand(&node, prob, cfg, &mut tabu, &mut counter);
        stats.expanded += 1;
        stats.evaluated += children.len() as u64;
        for child in &children {
            if let Some(p) = solution_of(child, prob, cfg) {
                return done(Outcome::Solved(p), stats);
            }
        }
        for child in children {
            if child.program.is_complete() || child.program.next_line() >= child.program.capacity() {
                continue;
            }
            let lines: Box<[Instruction]> = child.program.lines()[..child.program.next_line()]
                .iter()
                .map(|l| l.clone().expect("defined prefix"))
                .collect();
            let e = Entry { key: child.key, lines };
            open_bytes += entry_bytes(&e);
            open.push(Reverse(e));
        }
        stats.peak_open = stats.peak_open.max(open.len());
        if cfg.node_limit.is_some_and(|n| stats.evaluated >= n) {
            return done(Outcome::ResourceLimit(ResourceLimit::Nodes), stats);
        }
        if cfg.memory_limit.is_some_and(|m| open_bytes > m) {
            return done(Outcome::ResourceLimit(ResourceLimit::Memory), stats);
        }
    }
    done(Outcome::Exhausted, stats)
}

/// Searches for a program of at most `cfg.limits.max_lines` lines that
/// solves every instance of `prob`.
pub fn synthesize(prob: &GpProblem, cfg: &SynthesisConfig) -> Synthesis {
    if cfg.threads == 0 {
        return search(prob, cfg);
    }
    match rayon::ThreadPoolBuilder::new().num_threads(cfg.threads).build() {
        Ok(pool) => pool.install(|| search(prob, cfg)),
        Err(_) => search(prob, cfg),
    }
}
