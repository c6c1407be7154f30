use std::fmt;

use serde::Serialize;

use super::{Instruction, Program};

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum ViolationKind {
    /// Opener and closer line references disagree or cross.
    Unmatched,
    /// Loop index stepped or re-iterated inside its own loop body.
    LoopIndexModified,
    MissingEnd,
    /// An instruction follows `End`.
    AfterEnd,
    /// `End` inside an open structure.
    EndInsideStructure,
    UnknownPointer,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Violation {
    pub line: usize,
    pub kind: ViolationKind,
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let what = match self.kind {
            ViolationKind::Unmatched => "unmatched structure",
            ViolationKind::LoopIndexModified => "loop index modified inside its loop",
            ViolationKind::MissingEnd => "missing end",
            ViolationKind::AfterEnd => "instruction after end",
            ViolationKind::EndInsideStructure => "end inside an open structure",
            ViolationKind::UnknownPointer => "unknown pointer",
        };
        write!(f, "line {}: {what}", self.line)
    }
}

/// Checks nesting, loop-index immutability and the terminal `End`.
pub fn structural_validate(p: &Program) -> Result<(), Vec<Violation>> {
    let mut out = Vec::new();
    let lines = p.lines();
    let np = p.pointers().len();
    let mut stack: Vec<usize> = Vec::new();
    let mut end_seen: Option<usize> = None;
    let mut push = |line, kind| out.push(Violation { line, kind });
    for (i, ins) in lines.iter().enumerate() {
        if end_seen.is_some() {
            push(i, ViolationKind::AfterEnd);
        }
        let ptrs: &[u8] = match ins {
            Instruction::Act { args, .. } => args,
            Instruction::Inc(z) | Instruction::Dec(z) | Instruction::ForStart { ptr: z, .. } => {
                std::slice::from_ref(z)
            }
            _ => &[],
        };
        if ptrs.iter().any(|&z| z as usize >= np) {
            push(i, ViolationKind::UnknownPointer);
            continue;
        }
        match ins {
            Instruction::Inc(z) | Instruction::Dec(z) | Instruction::ForStart { ptr: z, .. } => {
                let enclosing = stack.iter().any(|&s| matches!(lines[s], Instruction::ForStart { ptr, .. } if ptr == *z));
                if enclosing {
                    push(i, ViolationKind::LoopIndexModified);
                }
            }
            _ => {}
        }
        match ins {
            Instruction::ForStart { end, .. } | Instruction::IfStart { end, .. } => {
                let closer_ok = match (ins, lines.get(*end)) {
                    (Instruction::ForStart { .. }, Some(Instruction::ForEnd { start })) => *start == i,
                    (Instruction::IfStart { .. }, Some(Instruction::IfEnd { start })) => *start == i,
                    _ => false,
                };
                if !closer_ok {
                    push(i, ViolationKind::Unmatched);
                }
                stack.push(i);
            }
            Instruction::ForEnd { start } | Instruction::IfEnd { start } => {
                let top = stack.pop();
                let opener_ok = top == Some(*start)
                    && match (ins, lines.get(*start)) {
                        (Instruction::ForEnd { .. }, Some(Instruction::ForStart { end, .. })) => *end == i,
                        (Instruction::IfEnd { .. }, Some(Instruction::IfStart { end, .. })) => *end == i,
                        _ => false,
                    };
                if !opener_ok {
                    push(i, ViolationKind::Unmatched);
                }
            }
            Instruction::End => {
                if !stack.is_empty() {
                    push(i, ViolationKind::EndInsideStructure);
                }
                if end_seen.is_none() {
                    end_seen = Some(i);
                }
            }
            _ => {}
        }
    }
    for &s in &stack {
        push(s, ViolationKind::Unmatched);
    }
    if end_seen.is_none() {
        push(lines.len(), ViolationKind::MissingEnd);
    }
    if out.is_empty() {
        Ok(())
    } else {
        Err(out)
    }
}
