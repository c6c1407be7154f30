//! Termination certificates and worst-case complexity of complete programs.

use std::collections::BTreeMap;

use serde::Serialize;

use crate::model::{Domain, GpProblem, Instance, TypeId};
use crate::program::{structural_validate, Direction, Instruction, PointerId, Program, Violation, ViolationKind};

/// A loop of a program together with the loops nested directly inside it.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct LoopNode {
    pub line: usize,
    pub pointer: PointerId,
    pub ty: TypeId,
    #[serde(serialize_with = "dir_name")]
    pub dir: Direction,
    /// No instruction in the body steps or re-initialises the loop pointer.
    pub index_immutable: bool,
    pub children: Vec<LoopNode>,
}

fn dir_name<S: serde::Serializer>(d: &Direction, s: S) -> Result<S::Ok, S::Error> {
    s.serialize_str(match d {
        Direction::Asc => "asc",
        Direction::Desc => "desc",
    })
}

impl LoopNode {
    fn depth(&self) -> usize {
        1 + self.children.iter().map(LoopNode::depth).max().unwrap_or(0)
    }

    fn all_immutable(&self) -> bool {
        self.index_immutable && self.children.iter().all(LoopNode::all_immutable)
    }
}

/// The proof obligations for termination: every structure is properly
/// nested and closed, and no loop body modifies its own index.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct TerminationCertificate {
    pub structured: bool,
    pub loops: Vec<LoopNode>,
    pub violations: Vec<Violation>,
}

impl TerminationCertificate {
    pub fn is_valid(&self) -> bool {
        self.structured && self.loops.iter().all(LoopNode::all_immutable)
    }

    /// Maximum loop nesting depth.
    pub fn depth(&self) -> usize {
        self.loops.iter().map(LoopNode::depth).max().unwrap_or(0)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum AnalysisError {
    #[error("program is not certified terminating: {}", .0.iter().map(|v| v.to_string()).collect::<Vec<_>>().join("; "))]
    NotTerminating(Vec<Violation>),
}

pub fn certify_termination(p: &Program) -> TerminationCertificate {
    let violations = structural_validate(p).err().unwrap_or_default();
    let structured = violations.iter().all(|v| v.kind == ViolationKind::LoopIndexModified);
    let lines = p.lines();
    let np = p.pointers().len();
    // (node, body still open) stack; If blocks only matter for nesting.
    let mut stack: Vec<Option<LoopNode>> = Vec::new();
    let mut roots: Vec<LoopNode> = Vec::new();
    let mut attach = |stack: &mut Vec<Option<LoopNode>>, node: LoopNode| {
        match stack.iter_mut().rev().find_map(Option::as_mut) {
            Some(parent) => parent.children.push(node),
            None => roots.push(node),
        }
    };
    for (i, ins) in lines.iter().enumerate() {
        match ins {
            Instruction::Inc(z) | Instruction::Dec(z) | Instruction::ForStart { ptr: z, .. } => {
                for n in stack.iter_mut().flatten() {
                    if n.pointer == *z {
                        n.index_immutable = false;
                    }
                }
            }
            _ => {}
        }
        match ins {
            Instruction::ForStart { ptr, dir, .. } if (*ptr as usize) < np => stack.push(Some(LoopNode {
                line: i,
                pointer: *ptr,
                ty: p.pointers()[*ptr as usize].ty,
                dir: *dir,
                index_immutable: true,
                children: Vec::new(),
            })),
            Instruction::ForStart { .. } | Instruction::IfStart { .. } => stack.push(None),
            Instruction::ForEnd { .. } | Instruction::IfEnd { .. } => {
                if let Some(Some(node)) = stack.pop() {
                    attach(&mut stack, node);
                }
            }
            _ => {}
        }
    }
    while let Some(top) = stack.pop() {
        if let Some(node) = top {
            attach(&mut stack, node);
        }
    }
    TerminationCertificate {
        structured,
        loops: roots,
        violations,
    }
}

/// Enclosing loop pointers of every line, outermost first.
fn enclosing_loops(p: &Program) -> Vec<Vec<PointerId>> {
    let mut stack: Vec<Option<PointerId>> = Vec::new();
    let mut out = Vec::with_capacity(p.len());
    for ins in p.lines() {
        if ins.closes() {
            let popped = stack.pop();
            // the closer of a loop runs once per iteration
            let mut here: Vec<PointerId> = stack.iter().flatten().copied().collect();
            if let Some(Some(z)) = popped {
                if matches!(ins, Instruction::ForEnd { .. }) {
                    here.push(z);
                }
            }
            out.push(here);
            continue;
        }
        out.push(stack.iter().flatten().copied().collect());
        match ins {
            Instruction::ForStart { ptr, .. } => stack.push(Some(*ptr)),
            Instruction::IfStart { .. } => stack.push(None),
            _ => {}
        }
    }
    out
}

fn range_product(p: &Program, inst: &Instance, ptrs: &[PointerId], floor: u64) -> u128 {
    ptrs.iter()
        .map(|&z| (inst.count(p.pointers()[z as usize].ty) as u128).max(floor as u128))
        .product()
}

/// Worst-case number of action attempts: every action line counted once per
/// iteration of its enclosing loops, ignoring conditionals.
pub fn plan_length_bound(p: &Program, inst: &Instance) -> Result<u128, AnalysisError> {
    require_valid(p)?;
    Ok(p.lines()
        .iter()
        .zip(enclosing_loops(p))
        .filter(|(ins, _)| matches!(ins, Instruction::Act { .. }))
        .map(|(_, enc)| range_product(p, inst, &enc, 0))
        .sum())
}

/// Upper bound on instruction visits of a full execution, usable as fuel.
pub fn visit_bound(p: &Program, inst: &Instance) -> Result<u128, AnalysisError> {
    require_valid(p)?;
    Ok(enclosing_loops(p).iter().map(|enc| range_product(p, inst, enc, 1)).sum())
}

fn require_valid(p: &Program) -> Result<TerminationCertificate, AnalysisError> {
    let c = certify_termination(p);
    if c.is_valid() {
        Ok(c)
    } else {
        Err(AnalysisError::NotTerminating(c.violations))
    }
}

/// One factor of a complexity term: a type's object count to a power.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Factor {
    pub ty: String,
    pub power: u32,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct InstanceBound {
    pub instance: String,
    /// The dominant term evaluated on this instance.
    pub dominant: u128,
    pub plan_length_bound: u128,
    pub visit_bound: u128,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ComplexityReport {
    pub degree: usize,
    /// Distinct products of loop ranges along the deepest nesting paths.
    pub terms: Vec<Vec<Factor>>,
    pub expression: String,
    pub instances: Vec<InstanceBound>,
}

fn deepest_paths(nodes: &[LoopNode], depth: usize, prefix: &mut Vec<TypeId>, out: &mut Vec<Vec<TypeId>>) {
    for n in nodes {
        prefix.push(n.ty);
        if depth == 1 {
            out.push(prefix.clone());
        } else if n.depth() >= depth {
            deepest_paths(&n.children, depth - 1, prefix, out);
        }
        prefix.pop();
    }
}

fn term_text(term: &[Factor]) -> String {
    term.iter()
        .map(|f| {
            if f.power == 1 {
                format!("|{}|", f.ty)
            } else {
                format!("|{}|^{}", f.ty, f.power)
            }
        })
        .collect::<Vec<_>>()
        .join("*")
}

/// The dominant term of the worst-case execution length: the product of the
/// object counts iterated by the deepest loop nests, over type names.
pub fn asymptotic_complexity(p: &Program, prob: &GpProblem) -> Result<ComplexityReport, AnalysisError> {
    let cert = require_valid(p)?;
    let dom: &Domain = &prob.domain;
    let degree = cert.depth();
    let mut paths = Vec::new();
    if degree > 0 {
        deepest_paths(&cert.loops, degree, &mut Vec::new(), &mut paths);
    }
    let mut terms: Vec<Vec<Factor>> = paths
        .iter()
        .map(|path| {
            let mut powers: BTreeMap<&str, u32> = BTreeMap::new();
            for &t in path {
                *powers.entry(dom.types[t].as_str()).or_default() += 1;
            }
            powers
                .into_iter()
                .map(|(ty, power)| Factor { ty: ty.to_string(), power })
                .collect()
        })
        .collect();
    terms.sort_by_key(|t| term_text(t));
    terms.dedup();
    let body = if terms.is_empty() {
        "1".to_string()
    } else {
        terms.iter().map(|t| term_text(t)).collect::<Vec<_>>().join(" + ")
    };
    let instances = prob
        .instances
        .iter()
        .map(|inst| {
            let dominant = terms
                .iter()
                .map(|t| {
                    t.iter()
                        .map(|f| {
                            let n = dom.type_id(&f.ty).map_or(0, |ty| inst.count(ty)) as u128;
                            n.pow(f.power)
                        })
                        .product::<u128>()
                })
                .sum::<u128>()
                .max(u128::from(terms.is_empty()));
            Ok(InstanceBound {
                instance: inst.name.clone(),
                dominant,
                plan_length_bound: plan_length_bound(p, inst)?,
                visit_bound: visit_bound(p, inst)?,
            })
        })
        .collect::<Result<_, AnalysisError>>()?;
    Ok(ComplexityReport {
        degree,
        terms,
        expression: format!("O({body})"),
        instances,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::benchmarks::{self, BenchmarkId, BLOCKS_DOMAIN, TOWER3_INSTANCE};
    use crate::interpreter::{execute, Fuel};
    use crate::model::{parse_domain, parse_instance};

    fn ontable() -> (Domain, Instance, Program) {
        let d = parse_domain(BLOCKS_DOMAIN).unwrap();
        let i = parse_instance(TOWER3_INSTANCE, &d).unwrap();
        let p = Program::parse(benchmarks::reference_program_text(BenchmarkId::BlocksOntable), &d).unwrap();
        (d, i, p)
    }

    #[test]
    fn ontable_certificate_and_bounds() {
        let (d, i, p) = ontable();
        let c = certify_termination(&p);
        assert!(c.is_valid());
        assert_eq!(c.depth(), 3);
        assert_eq!(plan_length_bound(&p, &i).unwrap(), 54);
        let t = execute(&p, &d, &i, Fuel::UNLIMITED);
        assert!(u128::from(t.visits) <= visit_bound(&p, &i).unwrap());
    }

    #[test]
    fn end_only_program() {
        let (d, i, _) = ontable();
        let p = Program::parse("pointers z1 - block\nend\n", &d).unwrap();
        let c = certify_termination(&p);
        assert!(c.is_valid());
        assert_eq!(c.depth(), 0);
        assert_eq!(plan_length_bound(&p, &i).unwrap(), 0);
        let prob = GpProblem::new(std::sync::Arc::new(d), vec![i]).unwrap();
        assert_eq!(asymptotic_complexity(&p, &prob).unwrap().expression, "O(1)");
    }

    #[test]
    fn modified_loop_index_is_rejected() {
        let (d, i, _) = ontable();
        let text = "pointers z1 - block\nfor(z1,asc)\ninc(z1)\nendfor\nend\n";
        let p = Program::parse(text, &d).unwrap();
        let c = certify_termination(&p);
        assert!(c.structured);
        assert!(!c.is_valid());
        assert!(!c.loops[0].index_immutable);
        assert_eq!(c.violations, vec![Violation { line: 1, kind: ViolationKind::LoopIndexModified }]);
        assert!(plan_length_bound(&p, &i).is_err());
    }

    #[test]
    fn parallel_nests_of_equal_depth_are_summed() {
        let (d, _, _) = ontable();
        let text = "pointers z1 z2 - block\nfor(z1,asc)\nfor(z2,asc)\nendfor\nendfor\nfor(z2,desc)\nendfor\nend\n";
        let p = Program::parse(text, &d).unwrap();
        let c = certify_termination(&p);
        assert_eq!(c.loops.len(), 2);
        assert_eq!(c.depth(), 2);
    }
}
