//! Checks shared by the property suites, the oracle tests and the
//! acceptance harness. Each returns a description of the first failure.

use std::collections::{BTreeMap, HashSet};
use std::sync::{Arc, OnceLock};

use genplan::analysis::{certify_termination, plan_length_bound, visit_bound};
use genplan::benchmarks::{self, BenchmarkId, BLOCKS_DOMAIN, TOWER3_INSTANCE};
use genplan::interpreter::{
    apply_action, execute, plan_from_actions, validate_plan, Fuel, GroundAction, HaltReason, Trace, Undefined,
};
use genplan::model::{goals_hold, initial_state, parse_domain, parse_instance, Domain, GpProblem, Instance, TypeId};
use genplan::program::{
    candidate_instructions, structural_validate, Condition, FluentAtom, Instruction, PartialProgram, PointerId,
    Program, ProgramLimits,
};
use genplan::synthesis::{program_solves, synthesize, Outcome, SynthesisConfig};
use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use super::{enumerate_programs, normalize, oracle_candidates, random_program, small_problem};

macro_rules! ensure {
    ($cond:expr, $($fmt:tt)+) => {
        if !$cond {
            return Err(format!($($fmt)+));
        }
    };
}

/// A benchmark's synthesis limits with three small generated instances.
pub struct Fixture {
    pub id: BenchmarkId,
    pub prob: GpProblem,
    pub limits: ProgramLimits,
}

pub fn fixtures() -> &'static [Fixture] {
    static CELL: OnceLock<Vec<Fixture>> = OnceLock::new();
    CELL.get_or_init(|| {
        BenchmarkId::ALL
            .iter()
            .map(|&id| Fixture {
                id,
                prob: small_problem(id, 5, 3),
                limits: benchmarks::synthesis_limits(id).unwrap(),
            })
            .collect()
    })
}

fn same_run(a: &Trace, b: &Trace) -> bool {
    a.applied == b.applied
        && a.attempted == b.attempted
        && a.visits == b.visits
        && a.final_state == b.final_state
        && a.halt == b.halt
}

/// Certification, structure, text round trip, termination within the
/// visit bound, the plan-length bound and determinism.
pub fn check_generated(f: &Fixture, prog: &Program) -> Result<(), String> {
    let dom = &f.prob.domain;
    let text = prog.to_text(dom);
    let cert = certify_termination(prog);
    ensure!(cert.is_valid(), "{}: not certified {:?}\n{text}", f.id, cert.violations);
    ensure!(structural_validate(prog).is_ok(), "{}: structural violations\n{text}", f.id);

    let lines = prog.lines();
    let mut starts = Vec::new();
    let mut closers = Vec::new();
    for (i, ins) in lines.iter().enumerate() {
        match ins {
            Instruction::ForStart { end, .. } => {
                ensure!(lines[*end] == Instruction::ForEnd { start: i }, "{}: loop at {i} closes badly", f.id);
                starts.push(i);
            }
            Instruction::ForEnd { start } => closers.push(*start),
            _ => {}
        }
    }
    closers.sort_unstable();
    ensure!(starts == closers, "{}: loop openers {starts:?} vs closers {closers:?}", f.id);
    ensure!(Program::parse(&text, dom).as_ref() == Ok(prog), "{}: text round trip\n{text}", f.id);

    for inst in &f.prob.instances {
        let vb = visit_bound(prog, inst).map_err(|e| e.to_string())?;
        let pb = plan_length_bound(prog, inst).map_err(|e| e.to_string())?;
        let fuel = Fuel::limit(u64::try_from(vb).unwrap_or(u64::MAX));
        let t = execute(prog, dom, inst, fuel);
        ensure!(
            matches!(t.halt, HaltReason::End | HaltReason::RuntimeError),
            "{}: halted with {:?} under {vb} visits\n{text}",
            f.id,
            t.halt
        );
        ensure!(u128::from(t.visits) <= vb, "{}: {} visits > {vb}", f.id, t.visits);
        ensure!(u128::from(t.attempted) <= pb, "{}: {} attempts > {pb}", f.id, t.attempted);
        ensure!(same_run(&t, &execute(prog, dom, inst, fuel)), "{}: nondeterministic\n{text}", f.id);
    }
    Ok(())
}

/// Applies a permutation of pointer ids to every instruction.
pub fn rename(prog: &Program, perm: &[PointerId]) -> Program {
    let r = |z: &PointerId| perm[*z as usize];
    let atom = |a: &FluentAtom| FluentAtom {
        fluent: a.fluent,
        args: a.args.iter().map(r).collect(),
    };
    let lines = prog
        .lines()
        .iter()
        .map(|ins| match ins {
            Instruction::Act { scheme, args } => Instruction::Act {
                scheme: *scheme,
                args: args.iter().map(r).collect(),
            },
            Instruction::Inc(z) => Instruction::Inc(r(z)),
            Instruction::Dec(z) => Instruction::Dec(r(z)),
            Instruction::ForStart { ptr, dir, end } => Instruction::ForStart {
                ptr: r(ptr),
                dir: *dir,
                end: *end,
            },
            Instruction::IfStart { cond, end } => Instruction::IfStart {
                cond: match cond {
                    Condition::IsZero(a) => Condition::IsZero(atom(a)),
                    Condition::NonZero(a) => Condition::NonZero(atom(a)),
                    Condition::Pointers(c, x, y) => Condition::Pointers(*c, r(x), r(y)),
                    Condition::Fluents(c, a, b) => Condition::Fluents(*c, atom(a), atom(b)),
                },
                end: *end,
            },
            other => other.clone(),
        })
        .collect();
    Program::from_lines(prog.pointers().clone(), lines)
}

/// A random permutation that maps every pointer to one of its own type.
pub fn type_preserving_permutation(limits: &ProgramLimits, rng: &mut ChaCha8Rng) -> Vec<PointerId> {
    let mut by_type: BTreeMap<TypeId, Vec<PointerId>> = BTreeMap::new();
    for (z, p) in limits.pointers.iter().enumerate() {
        by_type.entry(p.ty).or_default().push(z as PointerId);
    }
    let mut perm = vec![0; limits.pointers.len()];
    for ids in by_type.values() {
        let mut shuffled = ids.clone();
        shuffled.shuffle(rng);
        for (&from, &to) in ids.iter().zip(&shuffled) {
            perm[from as usize] = to;
        }
    }
    perm
}

/// Renaming pointers within their types changes neither the loop
/// abstraction nor any execution.
pub fn check_renaming(f: &Fixture, seed: u64) -> Result<(), String> {
    let dom = &f.prob.domain;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let prog = random_program(&f.limits, &f.prob, &mut rng);
    let perm = type_preserving_permutation(&f.limits, &mut rng);
    let renamed = rename(&prog, &perm);
    ensure!(
        prog.loop_abstraction() == renamed.loop_abstraction(),
        "{}: abstraction changed under {perm:?}",
        f.id
    );
    for inst in &f.prob.instances {
        let a = execute(&prog, dom, inst, Fuel::UNLIMITED);
        let b = execute(&renamed, dom, inst, Fuel::UNLIMITED);
        ensure!(
            a.applied == b.applied && a.final_state == b.final_state && a.halt == b.halt,
            "{}: execution changed under {perm:?}",
            f.id
        );
    }
    Ok(())
}

pub fn ground_actions(dom: &Domain, inst: &Instance) -> Vec<GroundAction> {
    let mut out = Vec::new();
    for (scheme, s) in dom.schemes.iter().enumerate() {
        let mut tuples: Vec<Vec<usize>> = vec![Vec::new()];
        for p in &s.params {
            tuples = tuples
                .into_iter()
                .flat_map(|t| {
                    (0..inst.count(p.ty)).map(move |o| {
                        let mut u = t.clone();
                        u.push(o);
                        u
                    })
                })
                .collect();
        }
        out.extend(tuples.into_iter().map(|args| GroundAction { scheme, args }));
    }
    out
}

/// Enough pointers of each type to name every argument of any action.
pub fn plan_limits(dom: &Domain, lines: usize) -> ProgramLimits {
    let budget: Vec<(TypeId, usize)> = (0..dom.types.len())
        .map(|t| {
            let need = dom
                .schemes
                .iter()
                .map(|s| s.params.iter().filter(|p| p.ty == t).count())
                .max()
                .unwrap_or(0);
            (t, need)
        })
        .filter(|&(_, c)| c > 0)
        .collect();
    ProgramLimits::with_budget(dom, lines, &budget).unwrap()
}

/// A random walk of up to `len` applicable actions, encoded as a program and
/// executed: the induced plan, final state and goal verdict must match.
pub fn check_plan_round_trip(f: &Fixture, seed: u64, len: usize) -> Result<usize, String> {
    let dom = &f.prob.domain;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let inst = f.prob.instances.choose(&mut rng).unwrap();
    let ground = ground_actions(dom, inst);
    let mut state = initial_state(inst);
    let mut plan = Vec::new();
    for _ in 0..len {
        let applicable: Vec<(&GroundAction, _)> = ground
            .iter()
            .filter_map(|a| {
                let mut s = state.clone();
                matches!(apply_action(dom, inst, &mut s, a.scheme, &a.args), Ok(true)).then_some((a, s))
            })
            .collect();
        let Some((a, next)) = applicable.choose(&mut rng) else { break };
        plan.push((*a).clone());
        state = next.clone();
    }
    let limits = plan_limits(dom, 100_000);
    let prog = plan_from_actions(&plan, dom, &limits).map_err(|e| e.to_string())?;
    ensure!(certify_termination(&prog).is_valid(), "{}: encoded plan not certified", f.id);
    let t = execute(&prog, dom, inst, Fuel::UNLIMITED);
    ensure!(t.halt == HaltReason::End, "{}: encoded plan halted with {:?}", f.id, t.halt);
    ensure!(t.applied == plan, "{}: induced plan differs from {plan:?}", f.id);
    ensure!(t.attempted == plan.len() as u64, "{}: {} attempts for {} steps", f.id, t.attempted, plan.len());
    ensure!(t.final_state == state, "{}: final state differs", f.id);
    let goal = goals_hold(&state, inst);
    ensure!(t.goal_reached(inst) == goal, "{}: goal verdict differs", f.id);
    ensure!(validate_plan(&plan, dom, inst) == goal, "{}: plan validation differs", f.id);
    Ok(plan.len())
}

/// A search problem small enough to enumerate exhaustively.
pub struct Micro {
    pub name: &'static str,
    pub prob: GpProblem,
    pub limits: ProgramLimits,
}

fn budget(dom: &Domain, lines: usize, spec: &str) -> ProgramLimits {
    let b = ProgramLimits::parse_budget(dom, spec).unwrap();
    ProgramLimits::with_budget(dom, lines, &b).unwrap()
}

fn generated(id: BenchmarkId, sizes: &[usize], lines: usize, spec: &str, name: &'static str) -> Micro {
    let dom = benchmarks::domain(id);
    // prefer a seed whose goal does not already hold initially
    let instances = sizes
        .iter()
        .map(|&s| {
            let pick = |seed| benchmarks::generate(id, s, seed).unwrap();
            (11u64..75)
                .map(pick)
                .find(|inst| !goals_hold(&initial_state(inst), inst))
                .unwrap_or_else(|| pick(11))
        })
        .collect();
    let limits = budget(&dom, lines, spec);
    Micro {
        name,
        prob: GpProblem::new(dom, instances).unwrap(),
        limits,
    }
}

fn tower(lines: usize, spec: &str) -> Micro {
    let dom = Arc::new(parse_domain(BLOCKS_DOMAIN).unwrap());
    let inst = parse_instance(TOWER3_INSTANCE, &dom).unwrap();
    let limits = budget(&dom, lines, spec);
    Micro {
        name: "blocks-tower3",
        prob: GpProblem::new(dom, vec![inst]).unwrap(),
        limits,
    }
}

pub fn candidate_configs() -> Vec<Micro> {
    vec![
        tower(4, "2"),
        generated(BenchmarkId::Reverse, &[2, 3], 5, "2", "reverse"),
        generated(BenchmarkId::Find, &[2, 3], 4, "2", "find"),
        generated(BenchmarkId::Gripper, &[1], 4, "room=2,ball=1,gripper=1", "gripper-singleton-ball"),
        generated(BenchmarkId::Fibonacci, &[2, 3], 5, "2", "fibonacci"),
        generated(BenchmarkId::Sorting, &[1], 4, "2", "sorting-singleton"),
    ]
}

/// Walks every reachable prefix comparing the engine's candidate set with
/// the grammar oracle; returns the number of prefixes compared.
pub fn check_candidates(m: &Micro) -> Result<usize, String> {
    let dom = &m.prob.domain;
    let mut frontier = vec![(PartialProgram::empty(&m.limits), Vec::<Instruction>::new())];
    let mut checked = 0usize;
    while let Some((p, prefix)) = frontier.pop() {
        let got = candidate_instructions(&p, dom, &m.limits, &m.prob);
        let got_set: HashSet<Instruction> = got.iter().map(normalize).collect();
        ensure!(got_set.len() == got.len(), "{}: duplicate candidates after {prefix:?}", m.name);
        let want: HashSet<Instruction> = oracle_candidates(dom, &m.limits, &m.prob, &prefix)
            .iter()
            .map(normalize)
            .collect();
        if got_set != want {
            let extra: Vec<_> = got_set.difference(&want).collect();
            let missing: Vec<_> = want.difference(&got_set).collect();
            return Err(format!("{}: after {prefix:?}\n extra {extra:?}\n missing {missing:?}", m.name));
        }
        checked += 1;
        for ins in got {
            let next = p.program_line(ins.clone()).map_err(|e| e.to_string())?;
            if !next.is_complete() {
                let mut pre = prefix.clone();
                pre.push(ins);
                frontier.push((next, pre));
            }
        }
    }
    ensure!(checked > 10, "{}: only {checked} prefixes", m.name);
    Ok(checked)
}

pub fn micro_configs() -> Vec<Micro> {
    vec![
        generated(BenchmarkId::TriangularSum, &[2, 3, 4], 5, "2", "triangular-sum"),
        generated(BenchmarkId::TriangularSum, &[2, 3, 4], 4, "2", "triangular-sum-short"),
        generated(BenchmarkId::Select, &[2, 3], 5, "2", "select"),
        generated(BenchmarkId::Find, &[2, 3], 5, "2", "find"),
        generated(BenchmarkId::Sorting, &[2, 3], 5, "2", "sorting"),
        generated(BenchmarkId::Corridor, &[2, 3], 5, "2", "corridor"),
        generated(BenchmarkId::Intrusion, &[1, 2], 5, "1", "intrusion"),
        generated(BenchmarkId::Fibonacci, &[2, 3, 4], 5, "2", "fibonacci"),
        tower(5, "2"),
    ]
}

fn unbounded(limits: &ProgramLimits, tabu: bool, evaluation: Undefined) -> SynthesisConfig {
    let mut cfg = SynthesisConfig::new(limits.clone());
    cfg.time_limit = None;
    cfg.node_limit = None;
    cfg.memory_limit = None;
    cfg.use_tabu = tabu;
    cfg.evaluation = evaluation;
    cfg.threads = 1;
    cfg
}

/// Enumerates the whole pruned space, then requires every search variant to
/// be sound and to find a solution exactly when one exists. Returns the
/// number of programs and of solutions.
pub fn check_micro_search(m: &Micro) -> Result<(u64, u64), String> {
    let dom = &m.prob.domain;
    let mut programs = 0u64;
    let mut solutions = 0u64;
    enumerate_programs(dom, &m.limits, &m.prob, &mut |p| {
        programs += 1;
        if program_solves(p, &m.prob) {
            solutions += 1;
        }
    });
    let exists = solutions > 0;
    for evaluation in [Undefined::CloseOpen, Undefined::Halt] {
        for tabu in [false, true] {
            let run = synthesize(&m.prob, &unbounded(&m.limits, tabu, evaluation));
            match &run.outcome {
                Outcome::Solved(p) => {
                    ensure!(program_solves(p, &m.prob), "{}: unsound solution", m.name);
                    ensure!(exists, "{}: solution outside the enumerated space", m.name);
                }
                Outcome::Exhausted => ensure!(
                    !exists,
                    "{}: {solutions} of {programs} programs solve, but search (tabu={tabu}, {evaluation:?}) exhausted",
                    m.name
                ),
                other => return Err(format!("{}: unexpected {other:?}", m.name)),
            }
        }
    }
    Ok((programs, solutions))
}
