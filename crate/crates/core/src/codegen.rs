//! Emission of standalone C++17 validators for a program on one instance.

use std::fmt::Write as _;
use std::io;
use std::path::{Path, PathBuf};

use serde::Serialize;

use crate::analysis::certify_termination;
use crate::model::{AssignOp, Comparator, Domain, FluentKind, FluentRef, Instance, Term};
use crate::program::{Condition, Direction, FluentAtom, Instruction, Program, Violation};

/// The support header every bundle includes.
pub const RUNTIME_HEADER: &str = include_str!("../cpp/genplan_runtime.hpp");
pub const RUNTIME_HEADER_NAME: &str = "genplan_runtime.hpp";
pub const SOURCE_NAME: &str = "validator.cpp";
pub const MANIFEST_NAME: &str = "manifest.json";
pub const COMPILE_FLAGS: [&str; 2] = ["-O2", "-std=c++17"];

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum CodegenError {
    #[error("program is not certified terminating: {}", .0.iter().map(|v| v.to_string()).collect::<Vec<_>>().join("; "))]
    NotTerminating(Vec<Violation>),
    #[error("pointer '{0}' ranges over a type the domain does not declare")]
    UnknownPointerType(String),
}

/// Encodes a name into identifier characters injectively: letters and
/// digits are kept, `_` becomes `_u`, `-` becomes `_h`, anything else `_xHEX_`.
pub fn mangle(name: &str) -> String {
    let mut out = String::with_capacity(name.len());
    for c in name.chars() {
        match c {
            'a'..='z' | 'A'..='Z' | '0'..='9' => out.push(c),
            '_' => out.push_str("_u"),
            '-' => out.push_str("_h"),
            c => {
                let _ = write!(out, "_x{:x}_", c as u32);
            }
        }
    }
    out
}

fn fluent_ident(dom: &Domain, f: usize) -> String {
    let sig = &dom.fluents[f];
    let prefix = match sig.kind {
        FluentKind::Boolean => "pred_",
        FluentKind::Numeric => "fn_",
    };
    format!("{prefix}{}", mangle(&sig.name))
}

fn scheme_ident(dom: &Domain, s: usize) -> String {
    format!("act_{}", mangle(&dom.schemes[s].name))
}

fn count_ident(dom: &Domain, t: usize) -> String {
    format!("n_{}", mangle(&dom.types[t]))
}

fn objects_ident(dom: &Domain, t: usize) -> String {
    format!("obj_{}", mangle(&dom.types[t]))
}

fn pointer_ident(name: &str) -> String {
    format!("z_{}", mangle(name))
}

fn param_ident(name: &str) -> String {
    format!("p_{}", mangle(name.trim_start_matches('?')))
}

fn c_string(s: &str) -> String {
    let mut out = String::from("\"");
    for c in s.chars() {
        match c {
            '"' => out.push_str("\\\""),
            '\\' => out.push_str("\\\\"),
            c if c.is_ascii_graphic() || c == ' ' => out.push(c),
            c => {
                let mut buf = [0u8; 4];
                for b in c.encode_utf8(&mut buf).bytes() {
                    let _ = write!(out, "\\{b:03o}");
                }
            }
        }
    }
    out.push('"');
    out
}

fn int_literal(v: i64) -> String {
    if v == i64::MIN {
        "(-9223372036854775807LL - 1)".to_string()
    } else {
        format!("{v}LL")
    }
}

fn key(args: impl IntoIterator<Item = String>) -> String {
    format!("{{{}}}", args.into_iter().collect::<Vec<_>>().join(", "))
}

fn cmp_symbol(c: Comparator) -> &'static str {
    match c {
        Comparator::Eq => "==",
        Comparator::Ne => "!=",
        Comparator::Lt => "<",
        Comparator::Gt => ">",
    }
}

/// Symbol table of a bundle: source names mapped to emitted identifiers.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Manifest {
    pub header: String,
    pub source: String,
    pub compile_flags: Vec<String>,
    pub types: Vec<(String, String)>,
    pub fluents: Vec<(String, String)>,
    pub schemes: Vec<(String, String)>,
    pub pointers: Vec<(String, String)>,
}

impl Manifest {
    fn new(dom: &Domain, prog: &Program) -> Self {
        Manifest {
            header: RUNTIME_HEADER_NAME.to_string(),
            source: SOURCE_NAME.to_string(),
            compile_flags: COMPILE_FLAGS.iter().map(|s| s.to_string()).collect(),
            types: (0..dom.types.len()).map(|t| (dom.types[t].clone(), count_ident(dom, t))).collect(),
            fluents: (0..dom.fluents.len())
                .map(|f| (dom.fluents[f].name.clone(), fluent_ident(dom, f)))
                .collect(),
            schemes: (0..dom.schemes.len())
                .map(|s| (dom.schemes[s].name.clone(), scheme_ident(dom, s)))
                .collect(),
            pointers: prog.pointers().iter().map(|p| (p.name.clone(), pointer_ident(&p.name))).collect(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EmittedBundle {
    pub source_text: String,
    pub manifest: Manifest,
}

impl EmittedBundle {
    /// Writes the source, the runtime header and the manifest into `dir`
    /// and returns the source path.
    pub fn write_to(&self, dir: &Path) -> io::Result<PathBuf> {
        std::fs::create_dir_all(dir)?;
        let src = dir.join(&self.manifest.source);
        std::fs::write(&src, &self.source_text)?;
        std::fs::write(dir.join(&self.manifest.header), RUNTIME_HEADER)?;
        let manifest = serde_json::to_string_pretty(&self.manifest).map_err(io::Error::other)?;
        std::fs::write(dir.join(MANIFEST_NAME), manifest + "\n")?;
        Ok(src)
    }

    /// Compiler arguments (after the compiler itself) building `out` from a
    /// bundle written to `dir`.
    pub fn compile_args(&self, dir: &Path, out: &Path) -> Vec<String> {
        let mut args: Vec<String> = self.manifest.compile_flags.clone();
        args.push(format!("-I{}", dir.display()));
        args.push(dir.join(&self.manifest.source).display().to_string());
        args.push("-o".to_string());
        args.push(out.display().to_string());
        args
    }
}

/// One table declaration per fluent, sized by the per-type count constants.
pub fn emit_state_decls(dom: &Domain) -> String {
    let mut out = String::new();
    for (f, sig) in dom.fluents.iter().enumerate() {
        let dims = key(sig.params.iter().map(|&t| count_ident(dom, t)));
        let _ = writeln!(out, "genplan::Table {}({dims});", fluent_ident(dom, f));
    }
    out
}

fn scheme_ref(dom: &Domain, params: &[String], r: &FluentRef) -> String {
    format!(
        "{}.get({})",
        fluent_ident(dom, r.fluent),
        key(r.args.iter().map(|&a| params[a].clone()))
    )
}

fn scheme_term(dom: &Domain, params: &[String], t: &Term) -> String {
    match t {
        Term::Const(v) => int_literal(*v),
        Term::Fluent(r) => scheme_ref(dom, params, r),
    }
}

/// One boolean function per action scheme. Every value an effect writes is
/// computed from the pre-state before any write.
pub fn emit_action_fns(dom: &Domain) -> String {
    let mut out = String::new();
    for (si, s) in dom.schemes.iter().enumerate() {
        let params: Vec<String> = s.params.iter().map(|p| param_ident(&p.name)).collect();
        let sig = params.iter().map(|p| format!("int {p}")).collect::<Vec<_>>().join(", ");
        let _ = writeln!(out, "bool {}({sig}) {{", scheme_ident(dom, si));
        let guard = if s.precondition.is_empty() {
            "true".to_string()
        } else {
            s.precondition
                .iter()
                .map(|a| {
                    format!(
                        "{} {} {}",
                        scheme_term(dom, &params, &a.lhs),
                        cmp_symbol(a.cmp),
                        scheme_term(dom, &params, &a.rhs)
                    )
                })
                .collect::<Vec<_>>()
                .join(" && ")
        };
        let _ = writeln!(out, "  if ({guard}) {{");
        let name = c_string(&s.name);
        let mut values = Vec::with_capacity(s.effects.len());
        for (i, e) in s.effects.iter().enumerate() {
            if e.is_delete(dom) {
                values.push(None);
                continue;
            }
            let operand = scheme_term(dom, &params, &e.operand);
            let value = match (e.op, &e.operand) {
                (AssignOp::Assign, Term::Const(_)) => {
                    values.push(Some(operand));
                    continue;
                }
                (AssignOp::Assign, _) => operand,
                (AssignOp::Increase, _) => {
                    format!("genplan::add({}, {operand}, {name})", scheme_ref(dom, &params, &e.target))
                }
                (AssignOp::Decrease, _) => {
                    format!("genplan::sub({}, {operand}, {name})", scheme_ref(dom, &params, &e.target))
                }
            };
            let _ = writeln!(out, "    const long long t{i} = {value};");
            values.push(Some(format!("t{i}")));
        }
        let target = |e: &crate::model::Assignment| {
            format!(
                "{}.set({}",
                fluent_ident(dom, e.target.fluent),
                key(e.target.args.iter().map(|&a| params[a].clone()))
            )
        };
        for e in s.effects.iter().filter(|e| e.is_delete(dom)) {
            let _ = writeln!(out, "    {}, 0);", target(e));
        }
        for (e, v) in s.effects.iter().zip(&values) {
            if let Some(v) = v {
                let _ = writeln!(out, "    {}, {v});", target(e));
            }
        }
        out.push_str("    return true;\n  }\n  return false;\n}\n\n");
    }
    out
}

/// Object counts and object-name tables of one instance.
pub fn emit_instance_consts(dom: &Domain, inst: &Instance) -> String {
    let mut out = String::new();
    for t in 0..dom.types.len() {
        let _ = writeln!(out, "constexpr int {} = {};", count_ident(dom, t), inst.count(t));
    }
    for t in 0..dom.types.len() {
        let names = &inst.objects[t];
        if names.is_empty() {
            continue;
        }
        let list = names.iter().map(|n| c_string(n)).collect::<Vec<_>>().join(", ");
        let _ = writeln!(out, "const char* const {}[] = {{{list}}};", objects_ident(dom, t));
    }
    out
}

/// The `init` procedure writing every non-zero initial value and the `goals`
/// predicate conjoining the goal equalities.
pub fn emit_instance_fns(dom: &Domain, inst: &Instance) -> String {
    let mut out = String::from("void init() {\n");
    for (gf, v) in &inst.init {
        if *v != 0 {
            let k = key(gf.args.iter().map(|a| a.to_string()));
            let _ = writeln!(out, "  {}.set({k}, {});", fluent_ident(dom, gf.fluent), int_literal(*v));
        }
    }
    out.push_str("}\n\nbool goals() {\n");
    if inst.goal.is_empty() {
        out.push_str("  return true;\n");
    } else {
        let conj = inst
            .goal
            .iter()
            .map(|(gf, v)| {
                let k = key(gf.args.iter().map(|a| a.to_string()));
                format!("({}.get({k}) == {})", fluent_ident(dom, gf.fluent), int_literal(*v))
            })
            .collect::<Vec<_>>()
            .join(" &&\n         ");
        let _ = writeln!(out, "  return {conj};");
    }
    out.push_str("}\n");
    out
}

fn program_atom(dom: &Domain, prog: &Program, a: &FluentAtom) -> String {
    format!(
        "{}.get({})",
        fluent_ident(dom, a.fluent),
        key(a.args.iter().map(|&z| pointer_ident(&prog.pointers()[z as usize].name)))
    )
}

fn condition_text(dom: &Domain, prog: &Program, c: &Condition) -> String {
    let z = |p: u8| pointer_ident(&prog.pointers()[p as usize].name);
    match c {
        Condition::IsZero(a) => format!("{} == 0", program_atom(dom, prog, a)),
        Condition::NonZero(a) => format!("{} != 0", program_atom(dom, prog, a)),
        Condition::Pointers(cmp, x, y) => format!("{} {} {}", z(*x), cmp.symbol(), z(*y)),
        Condition::Fluents(cmp, a, b) => format!(
            "{} {} {}",
            program_atom(dom, prog, a),
            cmp.symbol(),
            program_atom(dom, prog, b)
        ),
    }
}

/// The program as a procedure over zero-initialised pointer variables.
/// Loop bounds are the instance's object counts.
pub fn emit_program_fn(dom: &Domain, inst: &Instance, prog: &Program) -> Result<String, CodegenError> {
    let cert = certify_termination(prog);
    if !cert.is_valid() {
        return Err(CodegenError::NotTerminating(cert.violations));
    }
    for p in prog.pointers().iter() {
        if p.ty >= dom.types.len() {
            return Err(CodegenError::UnknownPointerType(p.name.clone()));
        }
    }
    let ptrs = prog.pointers();
    let z = |p: u8| pointer_ident(&ptrs[p as usize].name);
    let n = |p: u8| count_ident(dom, ptrs[p as usize].ty);
    let mut out = String::from("long long attempted = 0;\n\nvoid program() {\n");
    for p in ptrs.iter() {
        let _ = writeln!(out, "  int {} = 0;", pointer_ident(&p.name));
    }
    if !ptrs.is_empty() {
        let unused = ptrs.iter().map(|p| pointer_ident(&p.name)).collect::<Vec<_>>();
        let _ = writeln!(out, "  (void){};", unused.join(";\n  (void)"));
    }
    let mut depth = 1usize;
    let lines = prog.lines();
    for ins in lines {
        if ins.closes() {
            depth -= 1;
        }
        let pad = "  ".repeat(depth);
        match ins {
            Instruction::Act { scheme, args } => {
                let _ = writeln!(out, "{pad}attempted++;");
                let empty = args.iter().any(|&p| inst.count(ptrs[p as usize].ty) == 0);
                if !empty {
                    let call = args.iter().map(|&p| z(p)).collect::<Vec<_>>().join(", ");
                    let objs = args
                        .iter()
                        .map(|&p| format!("{}[{}]", objects_ident(dom, ptrs[p as usize].ty), z(p)))
                        .collect::<Vec<_>>()
                        .join(", ");
                    let _ = writeln!(
                        out,
                        "{pad}if ({}({call})) genplan::record({}, {{{objs}}});",
                        scheme_ident(dom, *scheme),
                        c_string(&dom.schemes[*scheme].name)
                    );
                }
            }
            Instruction::Inc(p) => {
                let _ = writeln!(out, "{pad}if ({} + 1 < {}) {}++;", z(*p), n(*p), z(*p));
            }
            Instruction::Dec(p) => {
                let _ = writeln!(out, "{pad}if ({} > 0) {}--;", z(*p), z(*p));
            }
            Instruction::ForStart { ptr, dir, .. } => {
                let (zp, np) = (z(*ptr), n(*ptr));
                let head = match dir {
                    Direction::Asc => format!("for ({zp} = 0; {zp} < {np}; {zp}++) {{"),
                    Direction::Desc => format!("for ({zp} = {np} - 1; {zp} >= 0; {zp}--) {{"),
                };
                let _ = writeln!(out, "{pad}{head}");
                depth += 1;
            }
            Instruction::ForEnd { start } => {
                let Instruction::ForStart { ptr, dir, .. } = &lines[*start] else {
                    unreachable!("certified program has matched loops");
                };
                let last = match dir {
                    Direction::Asc => inst.count(ptrs[*ptr as usize].ty).saturating_sub(1),
                    Direction::Desc => 0,
                };
                let _ = writeln!(out, "{pad}}}");
                let _ = writeln!(out, "{pad}{} = {last};", z(*ptr));
            }
            Instruction::IfStart { cond, .. } => {
                let _ = writeln!(out, "{pad}if ({}) {{", condition_text(dom, prog, cond));
                depth += 1;
            }
            Instruction::IfEnd { .. } => {
                let _ = writeln!(out, "{pad}}}");
            }
            Instruction::End => {
                let _ = writeln!(out, "{pad}return;");
            }
        }
    }
    out.push_str("}\n");
    Ok(out)
}

const MAIN_FN: &str = "int main() {
  init();
  const auto start = genplan::Clock::now();
  program();
  const bool reached = goals();
  genplan::report(attempted, reached, genplan::elapsed_ms(start));
  return 0;
}
";

/// The complete validator translation unit for `prog` on `inst`.
pub fn bundle(dom: &Domain, inst: &Instance, prog: &Program) -> Result<EmittedBundle, CodegenError> {
    let program = emit_program_fn(dom, inst, prog)?;
    let mut src = format!("#include \"{RUNTIME_HEADER_NAME}\"\n\n");
    for part in [
        emit_instance_consts(dom, inst),
        emit_state_decls(dom),
        emit_action_fns(dom),
        emit_instance_fns(dom, inst),
        program,
        MAIN_FN.to_string(),
    ] {
        if part.is_empty() {
            continue;
        }
        src.push_str(part.trim_end());
        src.push_str("\n\n");
    }
    src.truncate(src.trim_end().len());
    src.push('\n');
    Ok(EmittedBundle {
        source_text: src,
        manifest: Manifest::new(dom, prog),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::benchmarks::{self, BenchmarkId, BLOCKS_DOMAIN, TOWER3_INSTANCE};
    use crate::model::{parse_domain, parse_instance};

    #[test]
    fn mangling_is_injective_on_tricky_names() {
        let names = ["at-row", "at_row", "at_hrow", "a_h", "a-", "a_u", "a__", "x.y", "x_x2e_y"];
        let mut out: Vec<String> = names.iter().map(|n| mangle(n)).collect();
        out.sort();
        out.dedup();
        assert_eq!(out.len(), names.len());
        assert!(out.iter().all(|s| s.chars().all(|c| c.is_ascii_alphanumeric() || c == '_')));
    }

    #[test]
    fn blocks_declarations_and_unstack() {
        let d = parse_domain(BLOCKS_DOMAIN).unwrap();
        let decls = emit_state_decls(&d);
        assert_eq!(decls.lines().count(), 5);
        assert!(decls.contains("genplan::Table pred_on({n_block, n_block});"));
        assert!(decls.contains("genplan::Table pred_handempty({});"));
        let acts = emit_action_fns(&d);
        let unstack = acts.split("\n\n").find(|f| f.starts_with("bool act_unstack")).unwrap();
        assert!(unstack.contains("pred_on.get({p_x, p_y}) == 1LL"));
        assert!(unstack.contains("pred_holding.set({p_x}, 1LL);"));
        assert!(unstack.contains("pred_on.set({p_x, p_y}, 0);"));
        assert!(unstack.ends_with("return false;\n}"));
    }

    #[test]
    fn tower_instance_functions() {
        let d = parse_domain(BLOCKS_DOMAIN).unwrap();
        let i = parse_instance(TOWER3_INSTANCE, &d).unwrap();
        let f = emit_instance_fns(&d, &i);
        assert!(f.contains("pred_on.set({0, 1}, 1LL);"));
        assert!(f.contains("pred_handempty.set({}, 1LL);"));
        assert_eq!(f.matches("pred_ontable.get(").count(), 3);
    }

    #[test]
    fn emission_is_deterministic_and_rejects_unsafe_programs() {
        let d = parse_domain(BLOCKS_DOMAIN).unwrap();
        let i = parse_instance(TOWER3_INSTANCE, &d).unwrap();
        let p = benchmarks::reference_program(BenchmarkId::BlocksOntable);
        let a = bundle(&d, &i, &p).unwrap();
        assert_eq!(a, bundle(&d, &i, &p).unwrap());
        assert!(a.source_text.starts_with("#include \"genplan_runtime.hpp\""));
        assert!(a.source_text.contains("for (z_z1 = 0; z_z1 < n_block; z_z1++) {"));
        let bad = Program::parse("pointers z1 - block\nfor(z1,asc)\ninc(z1)\nendfor\nend\n", &d).unwrap();
        assert!(matches!(bundle(&d, &i, &bad), Err(CodegenError::NotTerminating(_))));
    }

    #[test]
    fn end_only_program_has_empty_body() {
        let d = parse_domain(BLOCKS_DOMAIN).unwrap();
        let i = parse_instance(TOWER3_INSTANCE, &d).unwrap();
        let p = Program::parse("pointers\nend\n", &d).unwrap();
        let f = emit_program_fn(&d, &i, &p).unwrap();
        assert_eq!(f, "long long attempted = 0;\n\nvoid program() {\n  return;\n}\n");
    }
}
