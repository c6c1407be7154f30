//! The bundled benchmark domains: domain files, reference programs,
//! synthesis configurations and seeded instance generators.

mod generate;

pub use generate::{generate, GenError};

use std::fmt;
use std::str::FromStr;
use std::sync::{Arc, OnceLock};

use crate::model::{parse_domain, Domain, GpProblem, TypeId};
use crate::program::{LimitsError, Program, ProgramLimits};

pub const BLOCKS_DOMAIN: &str = include_str!("../../benchmarks/blocks-ontable.pddl");
/// The three-block tower `b0` on `b1` on `b2`.
pub const TOWER3_INSTANCE: &str = include_str!("../../benchmarks/tower3.pddl");

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum BenchmarkId {
    BlocksOntable,
    Corridor,
    Fibonacci,
    Find,
    Floyd,
    Gripper,
    Intrusion,
    Reverse,
    Select,
    Sorting,
    Spanner,
    TriangularSum,
    Visitall,
}

impl BenchmarkId {
    pub const ALL: [BenchmarkId; 13] = [
        BenchmarkId::BlocksOntable,
        BenchmarkId::Corridor,
        BenchmarkId::Fibonacci,
        BenchmarkId::Find,
        BenchmarkId::Floyd,
        BenchmarkId::Gripper,
        BenchmarkId::Intrusion,
        BenchmarkId::Reverse,
        BenchmarkId::Select,
        BenchmarkId::Sorting,
        BenchmarkId::Spanner,
        BenchmarkId::TriangularSum,
        BenchmarkId::Visitall,
    ];

    pub fn name(self) -> &'static str {
        match self {
            BenchmarkId::BlocksOntable => "blocks-ontable",
            BenchmarkId::Corridor => "corridor",
            BenchmarkId::Fibonacci => "fibonacci",
            BenchmarkId::Find => "find",
            BenchmarkId::Floyd => "floyd",
            BenchmarkId::Gripper => "gripper",
            BenchmarkId::Intrusion => "intrusion",
            BenchmarkId::Reverse => "reverse",
            BenchmarkId::Select => "select",
            BenchmarkId::Sorting => "sorting",
            BenchmarkId::Spanner => "spanner",
            BenchmarkId::TriangularSum => "triangular-sum",
            BenchmarkId::Visitall => "visitall",
        }
    }

    fn index(self) -> usize {
        BenchmarkId::ALL.iter().position(|&b| b == self).unwrap()
    }
}

impl fmt::Display for BenchmarkId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("unknown benchmark '{0}'")]
pub struct UnknownBenchmark(pub String);

impl FromStr for BenchmarkId {
    type Err = UnknownBenchmark;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        BenchmarkId::ALL
            .into_iter()
            .find(|b| b.name() == s)
            .ok_or_else(|| UnknownBenchmark(s.to_string()))
    }
}

pub fn domain_text(id: BenchmarkId) -> &'static str {
    match id {
        BenchmarkId::BlocksOntable => BLOCKS_DOMAIN,
        BenchmarkId::Corridor => include_str!("../../benchmarks/corridor.pddl"),
        BenchmarkId::Fibonacci => include_str!("../../benchmarks/fibonacci.pddl"),
        BenchmarkId::Find => include_str!("../../benchmarks/find.pddl"),
        BenchmarkId::Floyd => include_str!("../../benchmarks/floyd.pddl"),
        BenchmarkId::Gripper => include_str!("../../benchmarks/gripper.pddl"),
        BenchmarkId::Intrusion => include_str!("../../benchmarks/intrusion.pddl"),
        BenchmarkId::Reverse => include_str!("../../benchmarks/reverse.pddl"),
        BenchmarkId::Select => include_str!("../../benchmarks/select.pddl"),
        BenchmarkId::Sorting => include_str!("../../benchmarks/sorting.pddl"),
        BenchmarkId::Spanner => include_str!("../../benchmarks/spanner.pddl"),
        BenchmarkId::TriangularSum => include_str!("../../benchmarks/triangular-sum.pddl"),
        BenchmarkId::Visitall => include_str!("../../benchmarks/visitall.pddl"),
    }
}

/// Reference solution in the canonical program text form.
pub fn reference_program_text(id: BenchmarkId) -> &'static str {
    match id {
        BenchmarkId::BlocksOntable => include_str!("../../benchmarks/blocks-ontable.prog"),
        BenchmarkId::Corridor => include_str!("../../benchmarks/corridor.prog"),
        BenchmarkId::Fibonacci => include_str!("../../benchmarks/fibonacci.prog"),
        BenchmarkId::Find => include_str!("../../benchmarks/find.prog"),
        BenchmarkId::Floyd => include_str!("../../benchmarks/floyd.prog"),
        BenchmarkId::Gripper => include_str!("../../benchmarks/gripper.prog"),
        BenchmarkId::Intrusion => include_str!("../../benchmarks/intrusion.prog"),
        BenchmarkId::Reverse => include_str!("../../benchmarks/reverse.prog"),
        BenchmarkId::Select => include_str!("../../benchmarks/select.prog"),
        BenchmarkId::Sorting => include_str!("../../benchmarks/sorting.prog"),
        BenchmarkId::Spanner => include_str!("../../benchmarks/spanner.prog"),
        BenchmarkId::TriangularSum => include_str!("../../benchmarks/triangular-sum.prog"),
        BenchmarkId::Visitall => include_str!("../../benchmarks/visitall.prog"),
    }
}

/// The parsed domain, shared across calls.
pub fn domain(id: BenchmarkId) -> Arc<Domain> {
    static CACHE: OnceLock<Vec<Arc<Domain>>> = OnceLock::new();
    let all = CACHE.get_or_init(|| {
        BenchmarkId::ALL
            .iter()
            .map(|&b| Arc::new(parse_domain(domain_text(b)).expect("bundled domain parses")))
            .collect()
    });
    all[id.index()].clone()
}

pub fn reference_program(id: BenchmarkId) -> Program {
    Program::parse(reference_program_text(id), &domain(id)).expect("bundled program parses")
}

/// Program lines and per-type pointer budget used to synthesize `id`.
pub fn synthesis_config(id: BenchmarkId) -> (usize, &'static [(&'static str, usize)]) {
    match id {
        BenchmarkId::BlocksOntable => (9, &[("block", 3)]),
        BenchmarkId::Corridor => (11, &[("loc", 2)]),
        BenchmarkId::Fibonacci => (7, &[("pos", 2)]),
        BenchmarkId::Find => (6, &[("pos", 3)]),
        BenchmarkId::Floyd => (8, &[("node", 3)]),
        BenchmarkId::Gripper => (8, &[("room", 2), ("ball", 1), ("gripper", 1)]),
        BenchmarkId::Intrusion => (9, &[("host", 1)]),
        BenchmarkId::Reverse => (7, &[("pos", 2)]),
        BenchmarkId::Select => (7, &[("pos", 2)]),
        BenchmarkId::Sorting => (8, &[("pos", 2)]),
        BenchmarkId::Spanner => (12, &[("loc", 2), ("man", 1), ("nut", 1), ("spanner", 1)]),
        BenchmarkId::TriangularSum => (5, &[("pos", 2)]),
        BenchmarkId::Visitall => (15, &[("row", 2), ("col", 2)]),
    }
}

pub fn synthesis_limits(id: BenchmarkId) -> Result<ProgramLimits, LimitsError> {
    let dom = domain(id);
    let (lines, budget) = synthesis_config(id);
    let typed: Vec<(TypeId, usize)> = budget
        .iter()
        .map(|(t, c)| dom.type_id(t).map(|ty| (ty, *c)).ok_or_else(|| LimitsError::UnknownType(t.to_string())))
        .collect::<Result<_, _>>()?;
    ProgramLimits::with_budget(&dom, lines, &typed)
}

/// Sizes of the ten training instances, in increasing difficulty.
pub fn training_sizes(id: BenchmarkId) -> Vec<usize> {
    match id {
        BenchmarkId::BlocksOntable => (2..=11).collect(),
        BenchmarkId::Corridor => (2..=11).collect(),
        BenchmarkId::Fibonacci => (2..=11).collect(),
        BenchmarkId::Find => (2..=11).collect(),
        BenchmarkId::Floyd => (3..=12).collect(),
        BenchmarkId::Gripper => (1..=10).collect(),
        BenchmarkId::Intrusion => (1..=10).collect(),
        BenchmarkId::Reverse => (2..=11).collect(),
        BenchmarkId::Select => (2..=11).collect(),
        BenchmarkId::Sorting => (2..=11).collect(),
        BenchmarkId::Spanner => (1..=10).collect(),
        BenchmarkId::TriangularSum => (2..=11).collect(),
        BenchmarkId::Visitall => (2..=11).collect(),
    }
}

/// Sizes of ten larger instances used to check that a solution generalizes.
pub fn held_out_sizes(id: BenchmarkId) -> Vec<usize> {
    match id {
        BenchmarkId::Fibonacci => vec![12, 15, 20, 25, 30, 40, 50, 60, 75, 90],
        BenchmarkId::Floyd | BenchmarkId::Visitall | BenchmarkId::Spanner => {
            vec![13, 14, 15, 16, 18, 20, 22, 25, 28, 30]
        }
        _ => vec![12, 15, 20, 30, 50, 75, 100, 150, 200, 300],
    }
}

fn problem(id: BenchmarkId, sizes: &[usize], seed: u64) -> Result<GpProblem, GenError> {
    let instances = sizes
        .iter()
        .enumerate()
        .map(|(k, &s)| generate(id, s, seed.wrapping_add(k as u64)))
        .collect::<Result<Vec<_>, _>>()?;
    GpProblem::new(domain(id), instances).map_err(|e| GenError::Invalid(e.to_string()))
}

pub fn training_problem(id: BenchmarkId, seed: u64) -> Result<GpProblem, GenError> {
    problem(id, &training_sizes(id), seed)
}

pub fn held_out_problem(id: BenchmarkId, seed: u64) -> Result<GpProblem, GenError> {
    problem(id, &held_out_sizes(id), seed.wrapping_add(1_000))
}
