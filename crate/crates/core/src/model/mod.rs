//! Planning-domain data model: typed signatures, action schemes, instances
//! and the integer-valued state.

mod parse;
mod print;
mod state;

pub use parse::{parse_domain, parse_instance};
pub use state::{goal_distance, goals_hold, initial_state, Layout, State};

use std::fmt;
use std::sync::Arc;

use crate::sexpr::{Pos, SyntaxError};

pub type TypeId = usize;
pub type FluentId = usize;
pub type SchemeId = usize;

/// Name of the built-in root type. Always type id 0.
pub const OBJECT_TYPE: &str = "object";

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum ModelError {
    #[error("syntax error at {0}")]
    Syntax(#[from] SyntaxError),
    #[error("{pos}: {msg}")]
    Semantic { pos: Pos, msg: String },
}

impl ModelError {
    pub(crate) fn semantic(pos: Pos, msg: impl Into<String>) -> Self {
        ModelError::Semantic {
            pos,
            msg: msg.into(),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum FluentKind {
    Boolean,
    Numeric,
}

/// A predicate (boolean) or function (numeric) signature.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FluentSig {
    pub name: String,
    pub params: Vec<TypeId>,
    pub kind: FluentKind,
}

impl FluentSig {
    pub fn arity(&self) -> usize {
        self.params.len()
    }
}

/// Fluent reference inside an action scheme; `args` index the scheme parameters.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct FluentRef {
    pub fluent: FluentId,
    pub args: Vec<usize>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Term {
    Fluent(FluentRef),
    Const(i64),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Comparator {
    Eq,
    Ne,
    Lt,
    Gt,
}

impl Comparator {
    pub fn holds(self, a: i64, b: i64) -> bool {
        match self {
            Comparator::Eq => a == b,
            Comparator::Ne => a != b,
            Comparator::Lt => a < b,
            Comparator::Gt => a > b,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Assertion {
    pub lhs: Term,
    pub cmp: Comparator,
    pub rhs: Term,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum AssignOp {
    Assign,
    Increase,
    Decrease,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Assignment {
    pub target: FluentRef,
    pub op: AssignOp,
    pub operand: Term,
}

impl Assignment {
    /// Boolean deletes are applied before every other effect when targets collide.
    pub fn is_delete(&self, dom: &Domain) -> bool {
        dom.fluents[self.target.fluent].kind == FluentKind::Boolean
            && self.op == AssignOp::Assign
            && self.operand == Term::Const(0)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Parameter {
    pub name: String,
    pub ty: TypeId,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ActionScheme {
    pub name: String,
    pub params: Vec<Parameter>,
    pub precondition: Vec<Assertion>,
    pub effects: Vec<Assignment>,
}

impl ActionScheme {
    /// Effect indices in application order: deletes first, then the rest
    /// in declaration order.
    pub fn effect_order(&self, dom: &Domain) -> Vec<usize> {
        let (mut dels, rest): (Vec<usize>, Vec<usize>) =
            (0..self.effects.len()).partition(|&i| self.effects[i].is_delete(dom));
        dels.extend(rest);
        dels
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Domain {
    pub name: String,
    /// `types[0]` is always [`OBJECT_TYPE`].
    pub types: Vec<String>,
    pub fluents: Vec<FluentSig>,
    pub schemes: Vec<ActionScheme>,
}

impl Domain {
    pub fn type_id(&self, name: &str) -> Option<TypeId> {
        self.types.iter().position(|t| t == name)
    }

    pub fn fluent_id(&self, name: &str) -> Option<FluentId> {
        self.fluents.iter().position(|f| f.name == name)
    }

    pub fn scheme_id(&self, name: &str) -> Option<SchemeId> {
        self.schemes.iter().position(|s| s.name == name)
    }

    /// True when the domain declares no types besides `object`.
    pub fn is_untyped(&self) -> bool {
        self.types.len() == 1
    }
}

/// A grounded fluent; `args` are per-type object indices.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct GroundFluent {
    pub fluent: FluentId,
    pub args: Vec<usize>,
}

#[derive(Clone, Debug)]
pub struct Instance {
    pub name: String,
    pub domain_name: String,
    /// Objects partitioned by type id, in declaration order.
    pub objects: Vec<Vec<String>>,
    pub init: Vec<(GroundFluent, i64)>,
    pub goal: Vec<(GroundFluent, i64)>,
    layout: Arc<Layout>,
    goal_offsets: Vec<(usize, i64)>,
}

impl PartialEq for Instance {
    fn eq(&self, other: &Self) -> bool {
        self.name == other.name
            && self.domain_name == other.domain_name
            && self.objects == other.objects
            && self.init == other.init
            && self.goal == other.goal
    }
}

impl Instance {
    /// Builds and validates an instance against `dom`.
    pub fn new(
        dom: &Domain,
        name: impl Into<String>,
        objects: Vec<Vec<String>>,
        init: Vec<(GroundFluent, i64)>,
        goal: Vec<(GroundFluent, i64)>,
    ) -> Result<Self, ModelError> {
        let nowhere = Pos::default();
        if objects.len() != dom.types.len() {
            return Err(ModelError::semantic(nowhere, "object partition does not match domain types"));
        }
        let mut seen = std::collections::HashSet::new();
        for o in objects.iter().flatten() {
            if !seen.insert(o.as_str()) {
                return Err(ModelError::semantic(nowhere, format!("duplicate object '{o}'")));
            }
        }
        let counts: Vec<usize> = objects.iter().map(Vec::len).collect();
        let layout = Arc::new(Layout::new(dom, &counts).map_err(|m| ModelError::semantic(nowhere, m))?);
        let check = |gf: &GroundFluent, v: i64, what: &str| -> Result<(), ModelError> {
            let sig = dom
                .fluents
                .get(gf.fluent)
                .ok_or_else(|| ModelError::semantic(nowhere, format!("unknown fluent in {what}")))?;
            if sig.arity() != gf.args.len() {
                return Err(ModelError::semantic(
                    nowhere,
                    format!("{what}: '{}' expects {} arguments, got {}", sig.name, sig.arity(), gf.args.len()),
                ));
            }
            for (k, &a) in gf.args.iter().enumerate() {
                if a >= counts[sig.params[k]] {
                    return Err(ModelError::semantic(nowhere, format!("{what}: object index out of range for '{}'", sig.name)));
                }
            }
            if sig.kind == FluentKind::Boolean && v != 0 && v != 1 {
                return Err(ModelError::semantic(nowhere, format!("{what}: boolean '{}' set to {v}", sig.name)));
            }
            Ok(())
        };
        for (gf, v) in &init {
            check(gf, *v, "init")?;
        }
        for (gf, v) in &goal {
            check(gf, *v, "goal")?;
        }
        let goal_offsets = goal.iter().map(|(gf, v)| (layout.offset(gf), *v)).collect();
        Ok(Instance {
            name: name.into(),
            domain_name: dom.name.clone(),
            objects,
            init,
            goal,
            layout,
            goal_offsets,
        })
    }

    pub fn layout(&self) -> &Arc<Layout> {
        &self.layout
    }

    pub(crate) fn goal_offsets(&self) -> &[(usize, i64)] {
        &self.goal_offsets
    }

    pub fn count(&self, ty: TypeId) -> usize {
        self.objects[ty].len()
    }

    pub fn object_name(&self, ty: TypeId, idx: usize) -> &str {
        &self.objects[ty][idx]
    }

    pub fn total_objects(&self) -> usize {
        self.objects.iter().map(Vec::len).sum()
    }

    /// Looks an object up by name, returning its type and per-type index.
    pub fn find_object(&self, name: &str) -> Option<(TypeId, usize)> {
        self.objects
            .iter()
            .enumerate()
            .find_map(|(t, objs)| objs.iter().position(|o| o == name).map(|i| (t, i)))
    }

    pub fn display_fluent(&self, dom: &Domain, gf: &GroundFluent) -> String {
        let sig = &dom.fluents[gf.fluent];
        let mut s = format!("({}", sig.name);
        for (k, &a) in gf.args.iter().enumerate() {
            s.push(' ');
            s.push_str(self.object_name(sig.params[k], a));
        }
        s.push(')');
        s
    }
}

/// A non-empty, ordered set of instances over a single domain.
#[derive(Clone, Debug)]
pub struct GpProblem {
    pub domain: Arc<Domain>,
    pub instances: Vec<Instance>,
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum ProblemError {
    #[error("a generalized planning problem needs at least one instance")]
    Empty,
    #[error("instance '{instance}' belongs to domain '{found}', expected '{expected}'")]
    DomainMismatch {
        instance: String,
        found: String,
        expected: String,
    },
}

impl GpProblem {
    pub fn new(domain: Arc<Domain>, instances: Vec<Instance>) -> Result<Self, ProblemError> {
        if instances.is_empty() {
            return Err(ProblemError::Empty);
        }
        for inst in &instances {
            if inst.domain_name != domain.name {
                return Err(ProblemError::DomainMismatch {
                    instance: inst.name.clone(),
                    found: inst.domain_name.clone(),
                    expected: domain.name.clone(),
                });
            }
        }
        Ok(GpProblem { domain, instances })
    }

    /// Largest object count of `ty` over all instances.
    pub fn max_count(&self, ty: TypeId) -> usize {
        self.instances.iter().map(|i| i.count(ty)).max().unwrap_or(0)
    }
}

impl fmt::Display for Domain {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&print::domain_to_string(self))
    }
}

impl Instance {
    pub fn to_pddl(&self, dom: &Domain) -> String {
        print::instance_to_string(self, dom)
    }
}
