use std::sync::Arc;

use super::{Instruction, Pointer, Program, ProgramLimits, OPEN};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum IllegalInstruction {
    #[error("program is already complete")]
    Complete,
    #[error("no undefined line left")]
    Full,
    #[error("unknown pointer index {0}")]
    UnknownPointer(u8),
    #[error("closer does not match the innermost open structure")]
    Mismatched,
    #[error("end with open structures")]
    OpenAtEnd,
    #[error("structure opened at the last line")]
    OpensAtLastLine,
    #[error("pointer '{0}' is the index of an enclosing loop")]
    LoopIndexModified(String),
}

/// A program whose lines `[0, next_line)` are defined and the rest are not.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct PartialProgram {
    pointers: Arc<Vec<Pointer>>,
    lines: Vec<Option<Instruction>>,
    next: usize,
    open: Vec<usize>,
    ended: bool,
}

impl PartialProgram {
    /// The empty program: all `limits.max_lines` lines undefined.
    pub fn empty(limits: &ProgramLimits) -> Self {
        PartialProgram {
            pointers: limits.pointers.clone(),
            lines: vec![None; limits.max_lines],
            next: 0,
            open: Vec::new(),
            ended: false,
        }
    }

    pub fn pointers(&self) -> &Arc<Vec<Pointer>> {
        &self.pointers
    }

    pub fn lines(&self) -> &[Option<Instruction>] {
        &self.lines
    }

    pub fn capacity(&self) -> usize {
        self.lines.len()
    }

    pub fn next_line(&self) -> usize {
        self.next
    }

    pub fn open_stack(&self) -> &[usize] {
        &self.open
    }

    /// True once `End` has been programmed.
    pub fn is_complete(&self) -> bool {
        self.ended
    }

    pub fn loop_count(&self) -> usize {
        self.lines[..self.next]
            .iter()
            .filter(|i| matches!(i, Some(Instruction::ForStart { .. })))
            .count()
    }

    /// Pointers iterated by currently open loops.
    pub fn open_loop_pointers(&self) -> impl Iterator<Item = u8> + '_ {
        self.open.iter().filter_map(|&l| match &self.lines[l] {
            Some(Instruction::ForStart { ptr, .. }) => Some(*ptr),
            _ => None,
        })
    }

    /// Programs `ins` at the next line. Domain-independent grammar rules are
    /// enforced here; see [`super::candidate_instructions`] for the rest.
    pub fn program_line(&self, ins: Instruction) -> Result<PartialProgram, IllegalInstruction> {
        if self.ended {
            return Err(IllegalInstruction::Complete);
        }
        if self.next >= self.lines.len() {
            return Err(IllegalInstruction::Full);
        }
        let np = self.pointers.len();
        let check_ptr = |p: u8| {
            if (p as usize) < np {
                Ok(())
            } else {
                Err(IllegalInstruction::UnknownPointer(p))
            }
        };
        let in_loop = |p: u8| self.open_loop_pointers().any(|q| q == p);
        let mut out = self.clone();
        let i = self.next;
        let ins = match ins {
            Instruction::Act { ref args, .. } => {
                args.iter().try_for_each(|&p| check_ptr(p))?;
                ins
            }
            Instruction::Inc(p) | Instruction::Dec(p) => {
                check_ptr(p)?;
                if in_loop(p) {
                    return Err(IllegalInstruction::LoopIndexModified(self.pointers[p as usize].name.clone()));
                }
                ins
            }
            Instruction::ForStart { ptr, dir, .. } => {
                check_ptr(ptr)?;
                if in_loop(ptr) {
                    return Err(IllegalInstruction::LoopIndexModified(self.pointers[ptr as usize].name.clone()));
                }
                if i + 1 == self.lines.len() {
                    return Err(IllegalInstruction::OpensAtLastLine);
                }
                out.open.push(i);
                Instruction::ForStart { ptr, dir, end: OPEN }
            }
            Instruction::IfStart { cond, .. } => {
                if i + 1 == self.lines.len() {
                    return Err(IllegalInstruction::OpensAtLastLine);
                }
                out.open.push(i);
                Instruction::IfStart { cond, end: OPEN }
            }
            Instruction::ForEnd { .. } | Instruction::IfEnd { .. } => {
                let start = *self.open.last().ok_or(IllegalInstruction::Mismatched)?;
                let is_for = matches!(ins, Instruction::ForEnd { .. });
                match out.lines[start].as_mut() {
                    Some(Instruction::ForStart { end, .. }) if is_for => *end = i,
                    Some(Instruction::IfStart { end, .. }) if !is_for => *end = i,
                    _ => return Err(IllegalInstruction::Mismatched),
                }
                out.open.pop();
                if is_for {
                    Instruction::ForEnd { start }
                } else {
                    Instruction::IfEnd { start }
                }
            }
            Instruction::End => {
                if !self.open.is_empty() {
                    return Err(IllegalInstruction::OpenAtEnd);
                }
                out.ended = true;
                ins
            }
        };
        out.lines[i] = Some(ins);
        out.next = i + 1;
        Ok(out)
    }

    /// The complete program, once `End` has been programmed.
    pub fn to_program(&self) -> Option<Program> {
        if !self.ended {
            return None;
        }
        let lines = self.lines[..self.next].iter().map(|l| l.clone().unwrap()).collect();
        Some(Program::from_lines(self.pointers.clone(), lines))
    }

    /// Closes every open structure innermost first and programs `End`, if
    /// enough lines remain.
    pub fn completed(&self) -> Option<Program> {
        let mut p = self.clone();
        for &start in self.open.iter().rev() {
            let closer = match self.lines[start] {
                Some(Instruction::ForStart { .. }) => Instruction::ForEnd { start },
                _ => Instruction::IfEnd { start },
            };
            p = p.program_line(closer).ok()?;
        }
        p.program_line(Instruction::End).ok()?.to_program()
    }

    /// Reopens a complete program as a partial one with `capacity` lines.
    pub fn from_program(prog: &Program, capacity: usize) -> Option<Self> {
        if prog.len() > capacity {
            return None;
        }
        let mut lines: Vec<Option<Instruction>> = prog.lines().iter().cloned().map(Some).collect();
        lines.resize(capacity, None);
        Some(PartialProgram {
            pointers: prog.pointers().clone(),
            lines,
            next: prog.len(),
            open: Vec::new(),
            ended: matches!(prog.lines().last(), Some(Instruction::End)),
        })
    }
}
