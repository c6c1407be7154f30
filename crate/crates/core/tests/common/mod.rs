#![allow(dead_code)]

pub mod checks;
pub mod cpp;

use genplan::benchmarks::{self, BenchmarkId};
use genplan::model::{Domain, FluentKind, GpProblem, Instance};
use genplan::program::{
    candidate_instructions, Args, Cmp3, Condition, Direction, FluentAtom, Instruction, PartialProgram, Program,
    ProgramLimits, OPEN,
};
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// A few small generated instances of `id`.
pub fn small_problem(id: BenchmarkId, seed: u64, count: usize) -> GpProblem {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let sizes = benchmarks::training_sizes(id);
    let instances: Vec<Instance> = (0..count)
        .map(|k| {
            let size = sizes[rng.gen_range(0..3.min(sizes.len()))];
            benchmarks::generate(id, size, seed.wrapping_mul(31).wrapping_add(k as u64)).unwrap()
        })
        .collect();
    GpProblem::new(benchmarks::domain(id), instances).unwrap()
}

/// Builds a complete program by programming uniformly random candidate
/// instructions from the empty program.
pub fn random_program(limits: &ProgramLimits, prob: &GpProblem, rng: &mut impl Rng) -> Program {
    let mut p = PartialProgram::empty(limits);
    loop {
        let cands = candidate_instructions(&p, &prob.domain, limits, prob);
        let Some(ins) = cands.choose(rng) else { break };
        p = p.program_line(ins.clone()).unwrap();
    }
    p.to_program().expect("random walk ends with End")
}

fn tuples(limits: &ProgramLimits, arity: usize) -> Vec<Args> {
    let n = limits.pointers.len();
    let mut out = vec![Args::new()];
    for _ in 0..arity {
        out = out
            .into_iter()
            .flat_map(|a| {
                (0..n).map(move |z| {
                    let mut b = a.clone();
                    b.push(z as u8);
                    b
                })
            })
            .collect();
    }
    out
}

/// Every instruction the grammar can form: all arities, types unchecked.
pub fn all_instructions(dom: &Domain, limits: &ProgramLimits, line: usize) -> Vec<Instruction> {
    let n = limits.pointers.len() as u8;
    let mut out = Vec::new();
    for (scheme, s) in dom.schemes.iter().enumerate() {
        for args in tuples(limits, s.params.len()) {
            out.push(Instruction::Act { scheme, args });
        }
    }
    for z in 0..n {
        out.push(Instruction::Inc(z));
        out.push(Instruction::Dec(z));
        for dir in [Direction::Asc, Direction::Desc] {
            out.push(Instruction::ForStart { ptr: z, dir, end: OPEN });
        }
    }
    let mut atoms = Vec::new();
    for (fluent, f) in dom.fluents.iter().enumerate() {
        for args in tuples(limits, f.params.len()) {
            atoms.push(FluentAtom { fluent, args });
        }
    }
    for a in &atoms {
        out.push(Instruction::IfStart { cond: Condition::IsZero(a.clone()), end: OPEN });
        out.push(Instruction::IfStart { cond: Condition::NonZero(a.clone()), end: OPEN });
        for b in &atoms {
            for c in Cmp3::ALL {
                out.push(Instruction::IfStart {
                    cond: Condition::Fluents(c, a.clone(), b.clone()),
                    end: OPEN,
                });
            }
        }
    }
    for x in 0..n {
        for y in 0..n {
            for c in Cmp3::ALL {
                out.push(Instruction::IfStart { cond: Condition::Pointers(c, x, y), end: OPEN });
            }
        }
    }
    for start in 0..line {
        out.push(Instruction::ForEnd { start });
        out.push(Instruction::IfEnd { start });
    }
    out.push(Instruction::End);
    out
}

fn well_typed(dom: &Domain, limits: &ProgramLimits, ins: &Instruction) -> bool {
    let ty = |z: u8| limits.pointers[z as usize].ty;
    let atom_ok = |a: &FluentAtom| {
        let f = &dom.fluents[a.fluent];
        a.args.len() == f.params.len() && a.args.iter().zip(&f.params).all(|(&z, &t)| ty(z) == t)
    };
    match ins {
        Instruction::Act { scheme, args } => {
            let s = &dom.schemes[*scheme];
            args.iter().zip(&s.params).all(|(&z, p)| ty(z) == p.ty)
        }
        Instruction::IfStart { cond, .. } => match cond {
            Condition::IsZero(a) | Condition::NonZero(a) => atom_ok(a),
            // canonical form: ordered, distinct, same type
            Condition::Pointers(_, x, y) => x < y && ty(*x) == ty(*y),
            Condition::Fluents(_, a, b) => {
                let numeric = |a: &FluentAtom| dom.fluents[a.fluent].kind == FluentKind::Numeric;
                atom_ok(a) && atom_ok(b) && numeric(a) && numeric(b) && a < b
            }
        },
        _ => true,
    }
}

/// Open structures of a prefix, outermost first, by rescanning its lines.
fn open_structures(lines: &[Instruction]) -> Vec<usize> {
    let mut stack = Vec::new();
    for (i, ins) in lines.iter().enumerate() {
        if ins.opens() {
            stack.push(i);
        } else if ins.closes() {
            stack.pop();
        }
    }
    stack
}

/// The legal next instructions of a prefix, decided from the grammar and
/// the pruning rules alone.
pub fn oracle_candidates(
    dom: &Domain,
    limits: &ProgramLimits,
    prob: &GpProblem,
    prefix: &[Instruction],
) -> Vec<Instruction> {
    let n = limits.max_lines;
    let i = prefix.len();
    if i >= n || prefix.contains(&Instruction::End) {
        return Vec::new();
    }
    let stack = open_structures(prefix);
    let loop_ptrs: Vec<u8> = stack
        .iter()
        .filter_map(|&s| match prefix[s] {
            Instruction::ForStart { ptr, .. } => Some(ptr),
            _ => None,
        })
        .collect();
    let max_count = |t: usize| prob.instances.iter().map(|x| x.count(t)).max().unwrap_or(0);
    all_instructions(dom, limits, i)
        .into_iter()
        .filter(|ins| well_typed(dom, limits, ins))
        .filter(|ins| match ins {
            Instruction::Inc(z) | Instruction::Dec(z) => !loop_ptrs.contains(z),
            Instruction::ForStart { ptr, .. } => {
                !loop_ptrs.contains(ptr) && max_count(limits.pointers[*ptr as usize].ty) > 1
            }
            Instruction::ForEnd { start } => {
                stack.last() == Some(start) && matches!(prefix[*start], Instruction::ForStart { .. })
            }
            Instruction::IfEnd { start } => {
                stack.last() == Some(start) && matches!(prefix[*start], Instruction::IfStart { .. }) && start + 1 < i
            }
            Instruction::End => stack.is_empty(),
            _ => true,
        })
        .filter(|ins| {
            if *ins == Instruction::End {
                return true;
            }
            // shortest completion: a body line for a fresh If, closers, End
            let mut after: Vec<Instruction> = prefix.to_vec();
            after.push(ins.clone());
            let open = open_structures(&after);
            let fresh_if = matches!(ins, Instruction::IfStart { .. });
            let needed = open.len() + 1 + usize::from(fresh_if);
            i + 1 + needed <= n
        })
        .collect()
}

/// Strips back-patched end lines so prefixes compare structurally.
pub fn normalize(ins: &Instruction) -> Instruction {
    match ins {
        Instruction::ForStart { ptr, dir, .. } => Instruction::ForStart { ptr: *ptr, dir: *dir, end: OPEN },
        Instruction::IfStart { cond, .. } => Instruction::IfStart { cond: cond.clone(), end: OPEN },
        other => other.clone(),
    }
}

/// Every complete program of the pruned space, found by depth-first
/// enumeration with the oracle.
pub fn enumerate_programs(dom: &Domain, limits: &ProgramLimits, prob: &GpProblem, visit: &mut impl FnMut(&Program)) {
    fn rec(
        dom: &Domain,
        limits: &ProgramLimits,
        prob: &GpProblem,
        p: &PartialProgram,
        prefix: &mut Vec<Instruction>,
        visit: &mut impl FnMut(&Program),
    ) {
        for ins in oracle_candidates(dom, limits, prob, prefix) {
            let next = p.program_line(ins.clone()).expect("oracle candidates are programmable");
            if let Some(prog) = next.to_program() {
                visit(&prog);
                continue;
            }
            prefix.push(ins);
            rec(dom, limits, prob, &next, prefix, visit);
            prefix.pop();
        }
    }
    rec(dom, limits, prob, &PartialProgram::empty(limits), &mut Vec::new(), visit);
}
