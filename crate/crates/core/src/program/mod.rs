//! Structured planning programs: pointers, instructions, partially specified
//! programs and the grammar-driven successor generator.

mod candidates;
mod partial;
mod text;
mod validate;

pub use candidates::candidate_instructions;
pub use partial::{IllegalInstruction, PartialProgram};
pub use text::ProgramParseError;
pub use validate::{structural_validate, Violation, ViolationKind};

use std::collections::BTreeSet;
use std::fmt;
use std::sync::Arc;

use smallvec::SmallVec;

use crate::model::{Domain, FluentId, SchemeId, TypeId};

pub type PointerId = u8;
pub type Args = SmallVec<[PointerId; 4]>;

/// End line of a structure that has not been closed yet.
pub const OPEN: usize = usize::MAX;

/// A bounded index variable ranging over the objects of one type.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Pointer {
    pub name: String,
    pub ty: TypeId,
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum LimitsError {
    #[error("a program needs at least one line")]
    NoLines,
    #[error("unknown type '{0}' in pointer budget")]
    UnknownType(String),
    #[error("malformed pointer budget '{0}'")]
    Malformed(String),
    #[error("a single pointer count is ambiguous for a domain with several types; use type=count,...")]
    Ambiguous,
    #[error("at most {} pointers are supported", PointerId::MAX)]
    TooMany,
}

/// Search-space bounds: program length and the pointer set.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ProgramLimits {
    pub max_lines: usize,
    pub pointers: Arc<Vec<Pointer>>,
}

impl ProgramLimits {
    pub fn new(max_lines: usize, pointers: Vec<Pointer>) -> Result<Self, LimitsError> {
        if max_lines == 0 {
            return Err(LimitsError::NoLines);
        }
        if pointers.len() > PointerId::MAX as usize {
            return Err(LimitsError::TooMany);
        }
        Ok(ProgramLimits {
            max_lines,
            pointers: Arc::new(pointers),
        })
    }

    /// Builds limits from per-type budgets, naming pointers after their type.
    pub fn with_budget(dom: &Domain, max_lines: usize, budget: &[(TypeId, usize)]) -> Result<Self, LimitsError> {
        let single = budget.iter().filter(|(_, c)| *c > 0).count() <= 1;
        let mut prefixes: Vec<String> = Vec::new();
        for &(t, _) in budget {
            let first: String = dom.types[t].chars().take(1).collect();
            prefixes.push(first);
        }
        let mut pointers = Vec::new();
        for (i, &(t, count)) in budget.iter().enumerate() {
            let clash = prefixes.iter().enumerate().any(|(j, p)| j != i && *p == prefixes[i]);
            let prefix = if single {
                "z".to_string()
            } else if clash {
                dom.types[t].clone()
            } else {
                prefixes[i].clone()
            };
            for k in 1..=count {
                pointers.push(Pointer {
                    name: format!("{prefix}{k}"),
                    ty: t,
                });
            }
        }
        ProgramLimits::new(max_lines, pointers)
    }

    /// Parses `3` or `loc=2,man=1`. A bare count needs a domain whose
    /// action parameters use a single type.
    pub fn parse_budget(dom: &Domain, spec: &str) -> Result<Vec<(TypeId, usize)>, LimitsError> {
        let spec = spec.trim();
        if let Ok(k) = spec.parse::<usize>() {
            let mut used: Vec<TypeId> = dom
                .schemes
                .iter()
                .flat_map(|s| s.params.iter().map(|p| p.ty))
                .chain(dom.fluents.iter().flat_map(|f| f.params.iter().copied()))
                .collect();
            used.sort_unstable();
            used.dedup();
            return match used.as_slice() {
                [] => Ok(vec![(0, k)]),
                [t] => Ok(vec![(*t, k)]),
                _ => Err(LimitsError::Ambiguous),
            };
        }
        spec.split(',')
            .map(|part| {
                let (t, c) = part
                    .split_once('=')
                    .ok_or_else(|| LimitsError::Malformed(part.to_string()))?;
                let ty = dom
                    .type_id(t.trim())
                    .ok_or_else(|| LimitsError::UnknownType(t.trim().to_string()))?;
                let c = c
                    .trim()
                    .parse::<usize>()
                    .map_err(|_| LimitsError::Malformed(part.to_string()))?;
                Ok((ty, c))
            })
            .collect()
    }

    pub fn pointer_count(&self) -> usize {
        self.pointers.len()
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Direction {
    Asc,
    Desc,
}

/// Three-way comparison used by conditions.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Cmp3 {
    Lt,
    Eq,
    Gt,
}

impl Cmp3 {
    pub const ALL: [Cmp3; 3] = [Cmp3::Lt, Cmp3::Eq, Cmp3::Gt];

    #[inline]
    pub fn holds(self, a: i64, b: i64) -> bool {
        match self {
            Cmp3::Lt => a < b,
            Cmp3::Eq => a == b,
            Cmp3::Gt => a > b,
        }
    }

    pub fn symbol(self) -> &'static str {
        match self {
            Cmp3::Lt => "<",
            Cmp3::Eq => "==",
            Cmp3::Gt => ">",
        }
    }
}

/// A fluent instantiated with pointers.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct FluentAtom {
    pub fluent: FluentId,
    pub args: Args,
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Condition {
    IsZero(FluentAtom),
    NonZero(FluentAtom),
    Pointers(Cmp3, PointerId, PointerId),
    Fluents(Cmp3, FluentAtom, FluentAtom),
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Instruction {
    Act { scheme: SchemeId, args: Args },
    Inc(PointerId),
    Dec(PointerId),
    ForStart { ptr: PointerId, dir: Direction, end: usize },
    ForEnd { start: usize },
    IfStart { cond: Condition, end: usize },
    IfEnd { start: usize },
    End,
}

impl Instruction {
    pub fn opens(&self) -> bool {
        matches!(self, Instruction::ForStart { .. } | Instruction::IfStart { .. })
    }

    pub fn closes(&self) -> bool {
        matches!(self, Instruction::ForEnd { .. } | Instruction::IfEnd { .. })
    }
}

/// A complete program: every structure closed and a terminal `End`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Program {
    pointers: Arc<Vec<Pointer>>,
    lines: Vec<Instruction>,
}

impl Program {
    /// Wraps raw lines without checking them; see [`structural_validate`].
    pub fn from_lines(pointers: Arc<Vec<Pointer>>, lines: Vec<Instruction>) -> Self {
        Program { pointers, lines }
    }

    pub fn pointers(&self) -> &Arc<Vec<Pointer>> {
        &self.pointers
    }

    pub fn lines(&self) -> &[Instruction] {
        &self.lines
    }

    pub fn len(&self) -> usize {
        self.lines.len()
    }

    pub fn is_empty(&self) -> bool {
        self.lines.is_empty()
    }

    pub fn loop_count(&self) -> usize {
        self.lines
            .iter()
            .filter(|i| matches!(i, Instruction::ForStart { .. }))
            .count()
    }

    /// The abstraction of this program's loops, for symmetry breaking.
    pub fn loop_abstraction(&self) -> LoopAbstraction {
        LoopAbstraction::from_lines(&self.pointers, self.lines.iter().map(Some))
    }

    /// Canonical one-instruction-per-line text form.
    pub fn to_text(&self, dom: &Domain) -> String {
        text::print(dom, &self.pointers, &self.lines)
    }

    pub fn parse(text: &str, dom: &Domain) -> Result<Self, ProgramParseError> {
        text::parse(text, dom)
    }

    /// A display adapter that prints the canonical text form.
    pub fn display<'a>(&'a self, dom: &'a Domain) -> impl fmt::Display + 'a {
        struct D<'a>(&'a Program, &'a Domain);
        impl fmt::Display for D<'_> {
            fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
                f.write_str(&self.0.to_text(self.1))
            }
        }
        D(self, dom)
    }
}

/// One loop reduced to (pointer type, direction, first line, last line).
pub type LoopKey = (TypeId, Direction, usize, usize);

/// The set of loop tuples of a program, ignoring pointer identity and every
/// non-loop instruction. Open loops carry [`OPEN`] as their last line.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct LoopAbstraction(pub BTreeSet<LoopKey>);

impl LoopAbstraction {
    fn from_lines<'a>(pointers: &[Pointer], lines: impl Iterator<Item = Option<&'a Instruction>>) -> Self {
        LoopAbstraction(
            lines
                .enumerate()
                .filter_map(|(i, ins)| match ins {
                    Some(Instruction::ForStart { ptr, dir, end }) => {
                        Some((pointers[*ptr as usize].ty, *dir, i, *end))
                    }
                    _ => None,
                })
                .collect(),
        )
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }
}

pub fn loop_abstraction(p: &PartialProgram) -> LoopAbstraction {
    LoopAbstraction::from_lines(p.pointers(), p.lines().iter().map(Option::as_ref))
}
