//! Deterministic, grounding-free execution of (partial) programs.

mod plan;

pub use plan::{plan_from_actions, validate_plan, PlanError};

use serde::Serialize;
use smallvec::SmallVec;

use crate::model::{AssignOp, Domain, FluentRef, Instance, SchemeId, State, Term, initial_state};
use crate::program::{Condition, Direction, FluentAtom, Instruction, PartialProgram, Pointer, Program, OPEN};

/// An action scheme instantiated with per-type object indices.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct GroundAction {
    pub scheme: SchemeId,
    pub args: Vec<usize>,
}

impl GroundAction {
    /// `(name o1 o2)` using the instance's object names.
    pub fn display(&self, dom: &Domain, inst: &Instance) -> String {
        let s = &dom.schemes[self.scheme];
        let mut out = format!("({}", s.name);
        for (p, &a) in s.params.iter().zip(&self.args) {
            out.push(' ');
            out.push_str(inst.object_name(p.ty, a));
        }
        out.push(')');
        out
    }

    /// Parses `(name o1 o2 ...)` against `inst`.
    pub fn parse(text: &str, dom: &Domain, inst: &Instance) -> Result<GroundAction, String> {
        let body = text
            .trim()
            .strip_prefix('(')
            .and_then(|t| t.strip_suffix(')'))
            .ok_or_else(|| format!("expected '(action args...)', found '{text}'"))?;
        let mut toks = body.split_whitespace();
        let name = toks.next().ok_or("empty action")?;
        let scheme = dom.scheme_id(name).ok_or_else(|| format!("unknown action '{name}'"))?;
        let params = &dom.schemes[scheme].params;
        let objs: Vec<&str> = toks.collect();
        if objs.len() != params.len() {
            return Err(format!("'{name}' expects {} arguments, got {}", params.len(), objs.len()));
        }
        let args = objs
            .iter()
            .zip(params)
            .map(|(o, p)| match inst.find_object(o) {
                Some((t, i)) if t == p.ty => Ok(i),
                Some(_) => Err(format!("object '{o}' has the wrong type for '{name}'")),
                None => Err(format!("unknown object '{o}'")),
            })
            .collect::<Result<_, _>>()?;
        Ok(GroundAction { scheme, args })
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum RuntimeError {
    #[error("integer overflow while applying '{action}'")]
    Overflow { action: String },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum HaltReason {
    End,
    UndefinedLine,
    FuelExhausted,
    RuntimeError,
}

/// Optional cap on instruction visits.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct Fuel(pub Option<u64>);

impl Fuel {
    pub const UNLIMITED: Fuel = Fuel(None);

    pub fn limit(visits: u64) -> Fuel {
        Fuel(Some(visits))
    }
}

/// How execution treats the first undefined line.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum Undefined {
    /// Stop immediately.
    #[default]
    Halt,
    /// Treat the undefined line as the closer of every open structure, so
    /// open loops keep iterating, then stop.
    CloseOpen,
}

#[derive(Clone, Copy, Debug, Default)]
pub struct ExecOptions {
    pub fuel: Fuel,
    pub undefined: Undefined,
    /// Keep the applied actions; off when only the final state matters.
    pub record: bool,
}

#[derive(Clone, Debug)]
pub struct Trace {
    pub applied: Vec<GroundAction>,
    pub attempted: u64,
    pub visits: u64,
    pub final_state: State,
    pub halt: HaltReason,
    pub error: Option<RuntimeError>,
}

/// Anything with numbered lines that may be executed.
pub trait Executable {
    fn pointers(&self) -> &[Pointer];
    fn line(&self, i: usize) -> Option<&Instruction>;
    /// Lines of structures that are still open, outermost first.
    fn open_structures(&self) -> &[usize];
}

impl Executable for Program {
    fn pointers(&self) -> &[Pointer] {
        Program::pointers(self)
    }

    fn line(&self, i: usize) -> Option<&Instruction> {
        self.lines().get(i)
    }

    fn open_structures(&self) -> &[usize] {
        &[]
    }
}

impl Executable for PartialProgram {
    fn pointers(&self) -> &[Pointer] {
        PartialProgram::pointers(self)
    }

    fn line(&self, i: usize) -> Option<&Instruction> {
        self.lines().get(i).and_then(Option::as_ref)
    }

    fn open_structures(&self) -> &[usize] {
        self.open_stack()
    }
}

#[inline]
fn ref_offset(inst: &Instance, r: &FluentRef, objs: &[usize]) -> usize {
    let layout = inst.layout();
    layout.base(r.fluent)
        + r.args
            .iter()
            .zip(layout.strides(r.fluent))
            .map(|(&a, &s)| objs[a] * s)
            .sum::<usize>()
}

#[inline]
fn term_value(s: &State, inst: &Instance, t: &Term, objs: &[usize]) -> i64 {
    match t {
        Term::Const(v) => *v,
        Term::Fluent(r) => s.at(ref_offset(inst, r, objs)),
    }
}

/// Applies `scheme(objs)` to `s` if its precondition holds. All effects read
/// the pre-state; on failure or overflow `s` is left unchanged.
pub fn apply_action(
    dom: &Domain,
    inst: &Instance,
    s: &mut State,
    scheme: SchemeId,
    objs: &[usize],
) -> Result<bool, RuntimeError> {
    let sc = &dom.schemes[scheme];
    for a in &sc.precondition {
        if !a.cmp.holds(term_value(s, inst, &a.lhs, objs), term_value(s, inst, &a.rhs, objs)) {
            return Ok(false);
        }
    }
    let mut writes: SmallVec<[(usize, i64); 8]> = SmallVec::new();
    let mut deletes: SmallVec<[usize; 8]> = SmallVec::new();
    for e in &sc.effects {
        let o = ref_offset(inst, &e.target, objs);
        let x = term_value(s, inst, &e.operand, objs);
        if e.is_delete(dom) {
            deletes.push(o);
            continue;
        }
        let v = match e.op {
            AssignOp::Assign => Some(x),
            AssignOp::Increase => s.at(o).checked_add(x),
            AssignOp::Decrease => s.at(o).checked_sub(x),
        };
        match v {
            Some(v) => writes.push((o, v)),
            None => {
                let action = GroundAction {
                    scheme,
                    args: objs.to_vec(),
                }
                .display(dom, inst);
                return Err(RuntimeError::Overflow { action });
            }
        }
    }
    for o in deletes {
        s.set_at(o, 0);
    }
    for (o, v) in writes {
        s.set_at(o, v);
    }
    Ok(true)
}

struct Machine<'a, P: Executable + ?Sized> {
    prog: &'a P,
    dom: &'a Domain,
    inst: &'a Instance,
    /// Object count of each pointer's type in this instance.
    ranges: SmallVec<[usize; 8]>,
    z: SmallVec<[usize; 8]>,
    state: State,
    opts: ExecOptions,
    applied: Vec<GroundAction>,
    attempted: u64,
    visits: u64,
}

impl<P: Executable + ?Sized> Machine<'_, P> {
    #[inline]
    fn atom_value(&self, a: &FluentAtom) -> i64 {
        let layout = self.inst.layout();
        let mut o = layout.base(a.fluent);
        for (&p, &s) in a.args.iter().zip(layout.strides(a.fluent)) {
            let p = p as usize;
            if self.ranges[p] == 0 {
                return 0;
            }
            o += self.z[p] * s;
        }
        self.state.at(o)
    }

    #[inline]
    fn holds(&self, c: &Condition) -> bool {
        match c {
            Condition::IsZero(a) => self.atom_value(a) == 0,
            Condition::NonZero(a) => self.atom_value(a) != 0,
            Condition::Pointers(cmp, x, y) => {
                cmp.holds(self.z[*x as usize] as i64, self.z[*y as usize] as i64)
            }
            Condition::Fluents(cmp, a, b) => cmp.holds(self.atom_value(a), self.atom_value(b)),
        }
    }

    /// Steps loop `start` to its next index; false once the range is exhausted.
    #[inline]
    fn advance(&mut self, start: usize) -> bool {
        let Some(Instruction::ForStart { ptr, dir, .. }) = self.prog.line(start) else {
            return false;
        };
        let p = *ptr as usize;
        match dir {
            Direction::Asc if self.z[p] + 1 < self.ranges[p] => {
                self.z[p] += 1;
                true
            }
            Direction::Desc if self.z[p] > 0 => {
                self.z[p] -= 1;
                true
            }
            _ => false,
        }
    }

    fn finish(self, halt: HaltReason, error: Option<RuntimeError>) -> Trace {
        Trace {
            applied: self.applied,
            attempted: self.attempted,
            visits: self.visits,
            final_state: self.state,
            halt,
            error,
        }
    }

    fn run(mut self) -> Trace {
        let open = self.prog.open_structures();
        let mut pc = 0usize;
        // nesting level when reaching the undefined line
        let mut level = open.len();
        loop {
            self.visits += 1;
            if let Some(max) = self.opts.fuel.0 {
                if self.visits > max {
                    return self.finish(HaltReason::FuelExhausted, None);
                }
            }
            let Some(ins) = self.prog.line(pc) else {
                if self.opts.undefined == Undefined::CloseOpen {
                    while level > 0 {
                        let s = open[level - 1];
                        if self.advance(s) {
                            break;
                        }
                        level -= 1;
                    }
                    if level > 0 {
                        pc = open[level - 1] + 1;
                        level = open.len();
                        continue;
                    }
                }
                return self.finish(HaltReason::UndefinedLine, None);
            };
            match ins {
                Instruction::Act { scheme, args } => {
                    self.attempted += 1;
                    if args.iter().all(|&p| self.ranges[p as usize] > 0) {
                        let objs: SmallVec<[usize; 8]> = args.iter().map(|&p| self.z[p as usize]).collect();
                        match apply_action(self.dom, self.inst, &mut self.state, *scheme, &objs) {
                            Ok(true) if self.opts.record => self.applied.push(GroundAction {
                                scheme: *scheme,
                                args: objs.to_vec(),
                            }),
                            Ok(_) => {}
                            Err(e) => return self.finish(HaltReason::RuntimeError, Some(e)),
                        }
                    }
                    pc += 1;
                }
                Instruction::Inc(p) => {
                    let p = *p as usize;
                    if self.z[p] + 1 < self.ranges[p] {
                        self.z[p] += 1;
                    }
                    pc += 1;
                }
                Instruction::Dec(p) => {
                    let p = *p as usize;
                    self.z[p] = self.z[p].saturating_sub(1);
                    pc += 1;
                }
                Instruction::ForStart { ptr, dir, end } => {
                    let p = *ptr as usize;
                    let n = self.ranges[p];
                    self.z[p] = match dir {
                        Direction::Asc => 0,
                        Direction::Desc => n.saturating_sub(1),
                    };
                    if n > 0 {
                        pc += 1;
                    } else if *end == OPEN {
                        level = open.iter().position(|&l| l == pc).unwrap_or(level);
                        pc = usize::MAX;
                    } else {
                        pc = end + 1;
                    }
                }
                Instruction::ForEnd { start } => {
                    if self.advance(*start) {
                        pc = start + 1;
                    } else {
                        pc += 1;
                    }
                }
                Instruction::IfStart { cond, end } => {
                    if self.holds(cond) {
                        pc += 1;
                    } else if *end == OPEN {
                        level = open.iter().position(|&l| l == pc).unwrap_or(level);
                        pc = usize::MAX;
                    } else {
                        pc = end + 1;
                    }
                }
                Instruction::IfEnd { .. } => pc += 1,
                Instruction::End => return self.finish(HaltReason::End, None),
            }
        }
    }
}

/// Runs `prog` on `inst` from its initial state.
pub fn execute_with<P: Executable + ?Sized>(prog: &P, dom: &Domain, inst: &Instance, opts: ExecOptions) -> Trace {
    let ranges = prog.pointers().iter().map(|p| inst.count(p.ty)).collect();
    let z = SmallVec::from_elem(0, prog.pointers().len());
    Machine {
        prog,
        dom,
        inst,
        ranges,
        z,
        state: initial_state(inst),
        opts,
        applied: Vec::new(),
        attempted: 0,
        visits: 0,
    }
    .run()
}

/// Runs `prog` recording the induced plan; stops at `End` or at the first
/// undefined line.
pub fn execute<P: Executable + ?Sized>(prog: &P, dom: &Domain, inst: &Instance, fuel: Fuel) -> Trace {
    execute_with(
        prog,
        dom,
        inst,
        ExecOptions {
            fuel,
            undefined: Undefined::Halt,
            record: true,
        },
    )
}

/// True iff `prog` ends normally on every instance with the goals achieved.
pub fn solves(prog: &Program, dom: &Domain, instances: &[Instance], fuel: Fuel) -> bool {
    instances.iter().all(|inst| {
        let t = execute_with(
            prog,
            dom,
            inst,
            ExecOptions {
                fuel,
                undefined: Undefined::Halt,
                record: false,
            },
        );
        t.halt == HaltReason::End && crate::model::goals_hold(&t.final_state, inst)
    })
}

#[derive(Serialize)]
struct TraceDoc<'a> {
    instance: &'a str,
    plan: Vec<String>,
    attempted: u64,
    goal: bool,
    halt: HaltReason,
    #[serde(skip_serializing_if = "Option::is_none")]
    error: Option<String>,
}

impl Trace {
    pub fn goal_reached(&self, inst: &Instance) -> bool {
        crate::model::goals_hold(&self.final_state, inst)
    }

    pub fn plan_lines(&self, dom: &Domain, inst: &Instance) -> Vec<String> {
        self.applied.iter().map(|a| a.display(dom, inst)).collect()
    }

    /// Structured document: plan steps, attempted count, goal verdict and
    /// halt reason.
    pub fn to_json(&self, dom: &Domain, inst: &Instance) -> serde_json::Value {
        serde_json::to_value(TraceDoc {
            instance: &inst.name,
            plan: self.plan_lines(dom, inst),
            attempted: self.attempted,
            goal: self.goal_reached(inst),
            halt: self.halt,
            error: self.error.as_ref().map(ToString::to_string),
        })
        .expect("trace serializes")
    }

    /// The validator's stdout format, without the timing line.
    pub fn to_text(&self, dom: &Domain, inst: &Instance) -> String {
        let mut out = String::new();
        for l in self.plan_lines(dom, inst) {
            out.push_str(&l);
            out.push('\n');
        }
        out.push_str(&format!("attempted={}\n", self.attempted));
        out.push_str(&format!("goal={}\n", self.goal_reached(inst)));
        out
    }
}
