use std::sync::Arc;

use super::{apply_action, GroundAction};
use crate::model::{goals_hold, initial_state, Domain, Instance};
use crate::program::{Args, Instruction, PointerId, Program, ProgramLimits};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum PlanError {
    #[error("action '{action}' needs {needed} pointers of type '{ty}', only {available} available")]
    InsufficientPointers {
        action: String,
        ty: String,
        needed: usize,
        available: usize,
    },
    #[error("the encoded plan needs {needed} lines, limit is {limit}")]
    TooLong { needed: usize, limit: usize },
    #[error("plan step {0} has the wrong number of arguments")]
    Arity(usize),
}

/// Encodes a sequential plan as a loop-free program: before each action the
/// pointers are stepped onto its arguments, the k-th argument of a type using
/// the k-th pointer of that type.
pub fn plan_from_actions(plan: &[GroundAction], dom: &Domain, limits: &ProgramLimits) -> Result<Program, PlanError> {
    let ptrs = &limits.pointers;
    let mut pos = vec![0usize; ptrs.len()];
    let mut lines = Vec::new();
    for (step, a) in plan.iter().enumerate() {
        let s = &dom.schemes[a.scheme];
        if s.params.len() != a.args.len() {
            return Err(PlanError::Arity(step));
        }
        let mut args = Args::new();
        let mut used = vec![0usize; dom.types.len()];
        for (param, &obj) in s.params.iter().zip(&a.args) {
            let k = used[param.ty];
            used[param.ty] += 1;
            let of_type: Vec<usize> = (0..ptrs.len()).filter(|&p| ptrs[p].ty == param.ty).collect();
            let Some(&z) = of_type.get(k) else {
                let needed = s.params.iter().filter(|q| q.ty == param.ty).count();
                return Err(PlanError::InsufficientPointers {
                    action: s.name.clone(),
                    ty: dom.types[param.ty].clone(),
                    needed,
                    available: of_type.len(),
                });
            };
            while pos[z] < obj {
                lines.push(Instruction::Inc(z as PointerId));
                pos[z] += 1;
            }
            while pos[z] > obj {
                lines.push(Instruction::Dec(z as PointerId));
                pos[z] -= 1;
            }
            args.push(z as PointerId);
        }
        lines.push(Instruction::Act { scheme: a.scheme, args });
    }
    lines.push(Instruction::End);
    if lines.len() > limits.max_lines {
        return Err(PlanError::TooLong {
            needed: lines.len(),
            limit: limits.max_lines,
        });
    }
    Ok(Program::from_lines(Arc::clone(ptrs), lines))
}

/// Replays `plan` from the initial state: every action must be applicable
/// and the goals must hold at the end.
pub fn validate_plan(plan: &[GroundAction], dom: &Domain, inst: &Instance) -> bool {
    let mut s = initial_state(inst);
    for a in plan {
        let s_def = &dom.schemes[a.scheme];
        let ok_args = a.args.len() == s_def.params.len()
            && a.args.iter().zip(&s_def.params).all(|(&o, p)| o < inst.count(p.ty));
        if !ok_args || !matches!(apply_action(dom, inst, &mut s, a.scheme, &a.args), Ok(true)) {
            return false;
        }
    }
    goals_hold(&s, inst)
}
