use crate::model::{Domain, FluentKind, GpProblem, TypeId};

use super::{
    Args, Cmp3, Condition, Direction, FluentAtom, Instruction, PartialProgram, Pointer, PointerId,
    ProgramLimits, OPEN,
};

/// All pointer tuples whose types match `types`, in lexicographic order.
pub(crate) fn pointer_tuples(pointers: &[Pointer], types: &[TypeId]) -> Vec<Args> {
    let mut out = vec![Args::new()];
    for &t in types {
        let fits: Vec<PointerId> = (0..pointers.len())
            .filter(|&p| pointers[p].ty == t)
            .map(|p| p as PointerId)
            .collect();
        out = out
            .into_iter()
            .flat_map(|prefix| {
                fits.iter().map(move |&p| {
                    let mut a = prefix.clone();
                    a.push(p);
                    a
                })
            })
            .collect();
    }
    out
}

fn atoms(dom: &Domain, pointers: &[Pointer], kind: Option<FluentKind>) -> Vec<FluentAtom> {
    dom.fluents
        .iter()
        .enumerate()
        .filter(|(_, f)| kind.is_none_or(|k| f.kind == k))
        .flat_map(|(fluent, f)| {
            pointer_tuples(pointers, &f.params)
                .into_iter()
                .map(move |args| FluentAtom { fluent, args })
        })
        .collect()
}

/// Every condition the grammar can build over `pointers`.
pub(crate) fn all_conditions(dom: &Domain, pointers: &[Pointer]) -> Vec<Condition> {
    let mut out = Vec::new();
    for a in atoms(dom, pointers, None) {
        out.push(Condition::IsZero(a.clone()));
        out.push(Condition::NonZero(a));
    }
    for x in 0..pointers.len() {
        for y in x + 1..pointers.len() {
            if pointers[x].ty == pointers[y].ty {
                for c in Cmp3::ALL {
                    out.push(Condition::Pointers(c, x as PointerId, y as PointerId));
                }
            }
        }
    }
    let nums = atoms(dom, pointers, Some(FluentKind::Numeric));
    for (k, a) in nums.iter().enumerate() {
        for b in &nums[k + 1..] {
            for c in Cmp3::ALL {
                out.push(Condition::Fluents(c, a.clone(), b.clone()));
            }
        }
    }
    out
}

/// Instructions that may be programmed at the next undefined line of `p`.
///
/// Besides the grammar this applies the pruning rules: no structure opens
/// at the last line, no loop over a type with at most one object in every
/// instance, enclosing loop indices are immutable, closers match the
/// innermost structure, `End` only at nesting depth zero, nothing after
/// `End`, no empty `If` body, and the program must remain completable
/// within the line budget.
pub fn candidate_instructions(
    p: &PartialProgram,
    dom: &Domain,
    limits: &ProgramLimits,
    prob: &GpProblem,
) -> Vec<Instruction> {
    let n = limits.max_lines.min(p.capacity());
    let i = p.next_line();
    if p.is_complete() || i >= n {
        return Vec::new();
    }
    let pointers = &limits.pointers[..];
    let depth = p.open_stack().len();
    let remaining = n - i - 1;
    // lines still needed after this one: closers plus End
    let fits_plain = remaining > depth;
    let fits_for = remaining > depth + 1;
    let fits_if = remaining > depth + 2;
    let locked: Vec<PointerId> = p.open_loop_pointers().collect();
    let free = |z: PointerId| !locked.contains(&z);

    let mut out = Vec::new();
    if fits_for {
        for (z, ptr) in pointers.iter().enumerate() {
            let z = z as PointerId;
            if free(z) && prob.max_count(ptr.ty) > 1 {
                for dir in [Direction::Asc, Direction::Desc] {
                    out.push(Instruction::ForStart { ptr: z, dir, end: OPEN });
                }
            }
        }
    }
    if fits_plain {
        for (scheme, s) in dom.schemes.iter().enumerate() {
            let types: Vec<TypeId> = s.params.iter().map(|q| q.ty).collect();
            for args in pointer_tuples(pointers, &types) {
                out.push(Instruction::Act { scheme, args });
            }
        }
        for z in 0..pointers.len() as PointerId {
            if free(z) {
                out.push(Instruction::Inc(z));
            }
        }
        for z in 0..pointers.len() as PointerId {
            if free(z) {
                out.push(Instruction::Dec(z));
            }
        }
    }
    if fits_if {
        for cond in all_conditions(dom, pointers) {
            out.push(Instruction::IfStart { cond, end: OPEN });
        }
    }
    if let Some(&start) = p.open_stack().last() {
        // remaining >= depth - 1 always holds for reachable programs
        match p.lines()[start] {
            Some(Instruction::ForStart { .. }) => out.push(Instruction::ForEnd { start }),
            Some(Instruction::IfStart { .. }) if start + 1 < i => out.push(Instruction::IfEnd { start }),
            _ => {}
        }
    } else {
        out.push(Instruction::End);
    }
    out
}
