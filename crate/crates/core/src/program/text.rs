use std::fmt::Write;
use std::sync::Arc;

use crate::model::{Domain, FluentKind, TypeId, OBJECT_TYPE};

use super::{Args, Cmp3, Condition, Direction, FluentAtom, Instruction, Pointer, PointerId, Program, OPEN};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("line {line}: {msg}")]
pub struct ProgramParseError {
    /// 1-based line in the source text.
    pub line: usize,
    pub msg: String,
}

fn atom_text(dom: &Domain, ptrs: &[Pointer], a: &FluentAtom) -> String {
    let args: Vec<&str> = a.args.iter().map(|&p| ptrs[p as usize].name.as_str()).collect();
    format!("{}[{}]", dom.fluents[a.fluent].name, args.join(","))
}

fn cond_text(dom: &Domain, ptrs: &[Pointer], c: &Condition) -> String {
    match c {
        Condition::IsZero(a) => format!("{}==0", atom_text(dom, ptrs, a)),
        Condition::NonZero(a) => format!("{}!=0", atom_text(dom, ptrs, a)),
        Condition::Pointers(cmp, x, y) => {
            format!("{}{}{}", ptrs[*x as usize].name, cmp.symbol(), ptrs[*y as usize].name)
        }
        Condition::Fluents(cmp, a, b) => {
            format!("{}{}{}", atom_text(dom, ptrs, a), cmp.symbol(), atom_text(dom, ptrs, b))
        }
    }
}

pub(crate) fn instruction_text(dom: &Domain, ptrs: &[Pointer], ins: &Instruction) -> String {
    let name = |p: &PointerId| ptrs[*p as usize].name.as_str();
    match ins {
        Instruction::Act { scheme, args } => {
            let a: Vec<&str> = args.iter().map(name).collect();
            format!("act {}({})", dom.schemes[*scheme].name, a.join(","))
        }
        Instruction::Inc(p) => format!("inc({})", name(p)),
        Instruction::Dec(p) => format!("dec({})", name(p)),
        Instruction::ForStart { ptr, dir, .. } => {
            let d = match dir {
                Direction::Asc => "asc",
                Direction::Desc => "desc",
            };
            format!("for({},{d})", name(ptr))
        }
        Instruction::ForEnd { .. } => "endfor".into(),
        Instruction::IfStart { cond, .. } => format!("if({})", cond_text(dom, ptrs, cond)),
        Instruction::IfEnd { .. } => "endif".into(),
        Instruction::End => "end".into(),
    }
}

pub(crate) fn header_text(dom: &Domain, ptrs: &[Pointer]) -> String {
    let mut s = String::from("pointers");
    let mut k = 0;
    while k < ptrs.len() {
        let ty = ptrs[k].ty;
        while k < ptrs.len() && ptrs[k].ty == ty {
            s.push(' ');
            s.push_str(&ptrs[k].name);
            k += 1;
        }
        if !dom.is_untyped() {
            let _ = write!(s, " - {}", dom.types[ty]);
        }
    }
    s
}

pub(super) fn print(dom: &Domain, ptrs: &[Pointer], lines: &[Instruction]) -> String {
    let mut out = header_text(dom, ptrs);
    out.push('\n');
    for ins in lines {
        out.push_str(&instruction_text(dom, ptrs, ins));
        out.push('\n');
    }
    out
}

struct LineParser<'a> {
    dom: &'a Domain,
    ptrs: &'a [Pointer],
    line: usize,
}

fn is_ident(s: &str) -> bool {
    !s.is_empty()
        && s.chars()
            .all(|c| c.is_alphanumeric() || c == '_' || c == '-')
}

impl LineParser<'_> {
    fn err<T>(&self, msg: impl Into<String>) -> Result<T, ProgramParseError> {
        Err(ProgramParseError {
            line: self.line,
            msg: msg.into(),
        })
    }

    fn pointer(&self, name: &str) -> Result<PointerId, ProgramParseError> {
        match self.ptrs.iter().position(|p| p.name == name) {
            Some(i) => Ok(i as PointerId),
            None => self.err(format!("unknown pointer '{name}'")),
        }
    }

    fn pointer_list(&self, inner: &str) -> Result<Args, ProgramParseError> {
        if inner.trim().is_empty() {
            return Ok(Args::new());
        }
        inner.split(',').map(|s| self.pointer(s.trim())).collect()
    }

    fn typed_args(&self, what: &str, inner: &str, types: &[TypeId]) -> Result<Args, ProgramParseError> {
        let args = self.pointer_list(inner)?;
        if args.len() != types.len() {
            return self.err(format!("'{what}' expects {} arguments, got {}", types.len(), args.len()));
        }
        for (k, (&a, &t)) in args.iter().zip(types).enumerate() {
            if self.ptrs[a as usize].ty != t {
                return self.err(format!(
                    "argument {} of '{what}' must have type '{}'",
                    k + 1,
                    self.dom.types[t]
                ));
            }
        }
        Ok(args)
    }

    /// `name(args)` with the trailing paren already verified by the caller.
    fn call<'s>(&self, s: &'s str) -> Result<(&'s str, &'s str), ProgramParseError> {
        let open = s.find('(');
        match open {
            Some(o) if s.ends_with(')') => Ok((s[..o].trim(), &s[o + 1..s.len() - 1])),
            _ => self.err(format!("expected 'name(...)', found '{s}'")),
        }
    }

    fn atom(&self, s: &str) -> Result<Option<FluentAtom>, ProgramParseError> {
        let s = s.trim();
        let Some(o) = s.find('[') else { return Ok(None) };
        if !s.ends_with(']') {
            return self.err(format!("malformed fluent reference '{s}'"));
        }
        let name = &s[..o];
        let Some(fluent) = self.dom.fluent_id(name) else {
            return self.err(format!("unknown fluent '{name}'"));
        };
        let args = self.typed_args(name, &s[o + 1..s.len() - 1], &self.dom.fluents[fluent].params)?;
        Ok(Some(FluentAtom { fluent, args }))
    }

    fn condition(&self, s: &str) -> Result<Condition, ProgramParseError> {
        let (op, cmp) = if let Some(k) = s.find("!=") {
            ((k, 2), None)
        } else if let Some(k) = s.find("==") {
            ((k, 2), Some(Cmp3::Eq))
        } else if let Some(k) = s.find('<') {
            ((k, 1), Some(Cmp3::Lt))
        } else if let Some(k) = s.find('>') {
            ((k, 1), Some(Cmp3::Gt))
        } else {
            return self.err(format!("condition '{s}' has no comparator"));
        };
        let lhs = s[..op.0].trim();
        let rhs = s[op.0 + op.1..].trim();
        let la = self.atom(lhs)?;
        if rhs == "0" {
            if let Some(a) = la {
                return match cmp {
                    None => Ok(Condition::NonZero(a)),
                    Some(Cmp3::Eq) => Ok(Condition::IsZero(a)),
                    Some(_) => self.err("fluents compare to 0 only with == or !="),
                };
            }
        }
        let Some(cmp) = cmp else {
            return self.err("'!=' is only allowed against 0");
        };
        let ra = self.atom(rhs)?;
        match (la, ra) {
            (Some(a), Some(b)) => {
                let numeric = |x: &FluentAtom| self.dom.fluents[x.fluent].kind == FluentKind::Numeric;
                if !numeric(&a) || !numeric(&b) {
                    return self.err("only numeric fluents can be compared with each other");
                }
                if a == b {
                    return self.err("a fluent cannot be compared with itself");
                }
                Ok(if a < b {
                    Condition::Fluents(cmp, a, b)
                } else {
                    Condition::Fluents(flip(cmp), b, a)
                })
            }
            (None, None) => {
                let (x, y) = (self.pointer(lhs)?, self.pointer(rhs)?);
                if self.ptrs[x as usize].ty != self.ptrs[y as usize].ty {
                    return self.err("compared pointers must share a type");
                }
                if x == y {
                    return self.err("a pointer cannot be compared with itself");
                }
                Ok(if x < y {
                    Condition::Pointers(cmp, x, y)
                } else {
                    Condition::Pointers(flip(cmp), y, x)
                })
            }
            _ => self.err("cannot compare a pointer with a fluent"),
        }
    }

    fn instruction(&self, s: &str) -> Result<Instruction, ProgramParseError> {
        let compact: String = s.split_whitespace().collect::<Vec<_>>().join(" ");
        let s = compact.as_str();
        match s {
            "endfor" => return Ok(Instruction::ForEnd { start: OPEN }),
            "endif" => return Ok(Instruction::IfEnd { start: OPEN }),
            "end" => return Ok(Instruction::End),
            _ => {}
        }
        if let Some(rest) = s.strip_prefix("act ") {
            let (name, inner) = self.call(rest.trim())?;
            let Some(scheme) = self.dom.scheme_id(name) else {
                return self.err(format!("unknown action '{name}'"));
            };
            let types: Vec<TypeId> = self.dom.schemes[scheme].params.iter().map(|p| p.ty).collect();
            let args = self.typed_args(name, inner, &types)?;
            return Ok(Instruction::Act { scheme, args });
        }
        let (head, inner) = self.call(s)?;
        match head {
            "inc" => Ok(Instruction::Inc(self.pointer(inner.trim())?)),
            "dec" => Ok(Instruction::Dec(self.pointer(inner.trim())?)),
            "for" => {
                let Some((z, d)) = inner.split_once(',') else {
                    return self.err("expected 'for(pointer,asc|desc)'");
                };
                let dir = match d.trim() {
                    "asc" => Direction::Asc,
                    "desc" => Direction::Desc,
                    other => return self.err(format!("unknown loop direction '{other}'")),
                };
                Ok(Instruction::ForStart {
                    ptr: self.pointer(z.trim())?,
                    dir,
                    end: OPEN,
                })
            }
            "if" => Ok(Instruction::IfStart {
                cond: self.condition(inner)?,
                end: OPEN,
            }),
            other => self.err(format!("unknown instruction '{other}'")),
        }
    }
}

fn flip(c: Cmp3) -> Cmp3 {
    match c {
        Cmp3::Lt => Cmp3::Gt,
        Cmp3::Gt => Cmp3::Lt,
        Cmp3::Eq => Cmp3::Eq,
    }
}

fn parse_header(dom: &Domain, body: &str, line: usize) -> Result<Vec<Pointer>, ProgramParseError> {
    let err = |msg: String| ProgramParseError { line, msg };
    let mut out: Vec<Pointer> = Vec::new();
    let mut pending: Vec<String> = Vec::new();
    let mut toks = body.split_whitespace();
    while let Some(t) = toks.next() {
        if t == "-" {
            let ty_name = toks.next().ok_or_else(|| err("missing type after '-'".into()))?;
            let ty = dom
                .type_id(ty_name)
                .ok_or_else(|| err(format!("unknown type '{ty_name}'")))?;
            out.extend(pending.drain(..).map(|name| Pointer { name, ty }));
        } else if is_ident(t) {
            pending.push(t.to_string());
        } else {
            return Err(err(format!("invalid pointer name '{t}'")));
        }
    }
    if !pending.is_empty() {
        if !dom.is_untyped() {
            return Err(err(format!("pointers {} need a type", pending.join(" "))));
        }
        let ty = dom.type_id(OBJECT_TYPE).unwrap_or(0);
        out.extend(pending.into_iter().map(|name| Pointer { name, ty }));
    }
    for (k, p) in out.iter().enumerate() {
        if out[..k].iter().any(|q| q.name == p.name) {
            return Err(err(format!("duplicate pointer '{}'", p.name)));
        }
    }
    if out.len() > PointerId::MAX as usize {
        return Err(err("too many pointers".into()));
    }
    Ok(out)
}

pub(super) fn parse(text: &str, dom: &Domain) -> Result<Program, ProgramParseError> {
    let mut ptrs: Option<Arc<Vec<Pointer>>> = None;
    let mut lines: Vec<Instruction> = Vec::new();
    let mut stack: Vec<usize> = Vec::new();
    for (k, raw) in text.lines().enumerate() {
        let src = raw.split('#').next().unwrap_or("").trim();
        if src.is_empty() {
            continue;
        }
        let Some(pointers) = &ptrs else {
            let body = src.strip_prefix("pointers").filter(|r| r.is_empty() || r.starts_with(' '));
            let Some(body) = body else {
                return Err(ProgramParseError {
                    line: k + 1,
                    msg: "expected a 'pointers' header".into(),
                });
            };
            ptrs = Some(Arc::new(parse_header(dom, body, k + 1)?));
            continue;
        };
        let lp = LineParser {
            dom,
            ptrs: pointers,
            line: k + 1,
        };
        let i = lines.len();
        let ins = match lp.instruction(src)? {
            ins @ (Instruction::ForStart { .. } | Instruction::IfStart { .. }) => {
                stack.push(i);
                ins
            }
            closer @ (Instruction::ForEnd { .. } | Instruction::IfEnd { .. }) => {
                let is_for = matches!(closer, Instruction::ForEnd { .. });
                let Some(start) = stack.pop() else {
                    return lp.err("closer without an open structure");
                };
                match &mut lines[start] {
                    Instruction::ForStart { end, .. } if is_for => *end = i,
                    Instruction::IfStart { end, .. } if !is_for => *end = i,
                    _ => return lp.err("closer does not match the innermost open structure"),
                }
                if is_for {
                    Instruction::ForEnd { start }
                } else {
                    Instruction::IfEnd { start }
                }
            }
            ins => ins,
        };
        lines.push(ins);
    }
    let Some(ptrs) = ptrs else {
        return Err(ProgramParseError {
            line: 1,
            msg: "expected a 'pointers' header".into(),
        });
    };
    if let Some(&open) = stack.last() {
        return Err(ProgramParseError {
            line: text.lines().count(),
            msg: format!("structure opened at program line {open} is never closed"),
        });
    }
    Ok(Program::from_lines(ptrs, lines))
}
