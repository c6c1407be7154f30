use std::collections::{HashMap, HashSet};

use super::{
    ActionScheme, AssignOp, Assertion, Assignment, Comparator, Domain, FluentKind, FluentRef,
    FluentSig, GroundFluent, Instance, ModelError, Parameter, Term, TypeId, OBJECT_TYPE,
};
use crate::sexpr::{parse_all, Pos, Sexpr};

type Result<T> = std::result::Result<T, ModelError>;

fn err<T>(pos: Pos, msg: impl Into<String>) -> Result<T> {
    Err(ModelError::semantic(pos, msg))
}

fn atom(e: &Sexpr) -> Result<&str> {
    e.as_atom()
        .ok_or_else(|| ModelError::semantic(e.pos(), "expected a name"))
}

fn list(e: &Sexpr) -> Result<&[Sexpr]> {
    e.as_list()
        .ok_or_else(|| ModelError::semantic(e.pos(), "expected a list"))
}

fn is_ident(s: &str) -> bool {
    let mut chars = s.chars();
    matches!(chars.next(), Some(c) if c.is_alphabetic() || c == '_')
        && chars.all(|c| c.is_alphanumeric() || c == '-' || c == '_')
}

fn ident(e: &Sexpr) -> Result<String> {
    let s = atom(e)?;
    if !is_ident(s) {
        return err(e.pos(), format!("'{s}' is not a valid identifier"));
    }
    Ok(s.to_string())
}

/// Splits a typed list `a b - t c - u d` into (name, type-name) pairs.
fn typed_list(items: &[Sexpr]) -> Result<Vec<(String, Option<String>, Pos)>> {
    let mut out = Vec::new();
    let mut pending: Vec<(String, Pos)> = Vec::new();
    let mut i = 0;
    while i < items.len() {
        let s = atom(&items[i])?;
        if s == "-" {
            let ty = items
                .get(i + 1)
                .ok_or_else(|| ModelError::semantic(items[i].pos(), "missing type after '-'"))?;
            let ty = ident(ty)?;
            if pending.is_empty() {
                return err(items[i].pos(), "'-' without preceding names");
            }
            for (n, p) in pending.drain(..) {
                out.push((n, Some(ty.clone()), p));
            }
            i += 2;
        } else {
            let name = s.strip_prefix('?').unwrap_or(s);
            if !is_ident(name) {
                return err(items[i].pos(), format!("'{s}' is not a valid identifier"));
            }
            pending.push((s.to_string(), items[i].pos()));
            i += 1;
        }
    }
    for (n, p) in pending {
        out.push((n, None, p));
    }
    Ok(out)
}

fn parse_int(e: &Sexpr) -> Option<i64> {
    e.as_atom().and_then(|s| s.parse::<i64>().ok())
}

/// Unwraps `(and ...)` into its conjuncts; any other expression is a single conjunct.
fn conjuncts(e: &Sexpr) -> Result<Vec<&Sexpr>> {
    let l = list(e)?;
    if l.is_empty() {
        return Ok(vec![]);
    }
    if e.head().as_deref() == Some("and") {
        Ok(l[1..].iter().collect())
    } else {
        Ok(vec![e])
    }
}

struct DomainBuilder {
    types: Vec<String>,
    fluents: Vec<FluentSig>,
}

impl DomainBuilder {
    fn type_of(&self, name: &Option<String>, pos: Pos) -> Result<TypeId> {
        match name {
            None => Ok(0),
            Some(n) => self
                .types
                .iter()
                .position(|t| t == n)
                .ok_or_else(|| ModelError::semantic(pos, format!("undeclared type '{n}'"))),
        }
    }

    fn fluent(&self, name: &str, pos: Pos) -> Result<usize> {
        self.fluents
            .iter()
            .position(|f| f.name == name)
            .ok_or_else(|| ModelError::semantic(pos, format!("undeclared predicate or function '{name}'")))
    }

    fn signature(&self, e: &Sexpr, kind: FluentKind) -> Result<FluentSig> {
        let l = list(e)?;
        let name = ident(l.first().ok_or_else(|| ModelError::semantic(e.pos(), "empty signature"))?)?;
        let mut params = Vec::new();
        for (v, ty, p) in typed_list(&l[1..])? {
            if !v.starts_with('?') {
                return err(p, format!("parameter '{v}' must start with '?'"));
            }
            params.push(self.type_of(&ty, p)?);
        }
        Ok(FluentSig { name, params, kind })
    }

    fn fluent_ref(&self, e: &Sexpr, params: &[Parameter]) -> Result<FluentRef> {
        let l = list(e)?;
        let head = l.first().ok_or_else(|| ModelError::semantic(e.pos(), "empty fluent reference"))?;
        let name = atom(head)?;
        let f = self.fluent(name, head.pos())?;
        let sig = &self.fluents[f];
        if sig.arity() != l.len() - 1 {
            return err(
                e.pos(),
                format!("'{name}' expects {} arguments, got {}", sig.arity(), l.len() - 1),
            );
        }
        let mut args = Vec::new();
        for (k, a) in l[1..].iter().enumerate() {
            let v = atom(a)?;
            let idx = params
                .iter()
                .position(|p| p.name == v)
                .ok_or_else(|| ModelError::semantic(a.pos(), format!("unknown variable '{v}'")))?;
            if params[idx].ty != sig.params[k] {
                return err(
                    a.pos(),
                    format!("variable '{v}' has type '{}', '{name}' expects '{}'", self.types[params[idx].ty], self.types[sig.params[k]]),
                );
            }
            args.push(idx);
        }
        Ok(FluentRef { fluent: f, args })
    }

    fn term(&self, e: &Sexpr, params: &[Parameter]) -> Result<Term> {
        if let Some(v) = parse_int(e) {
            return Ok(Term::Const(v));
        }
        if e.as_atom().is_some() {
            return err(e.pos(), "expected an integer or a fluent");
        }
        Ok(Term::Fluent(self.fluent_ref(e, params)?))
    }

    fn term_kind(&self, t: &Term) -> Option<FluentKind> {
        match t {
            Term::Fluent(r) => Some(self.fluents[r.fluent].kind),
            Term::Const(_) => None,
        }
    }

    fn check_assertion(&self, a: &Assertion, pos: Pos) -> Result<()> {
        for (side, other) in [(&a.lhs, &a.rhs), (&a.rhs, &a.lhs)] {
            if self.term_kind(side) == Some(FluentKind::Boolean) {
                let ok = matches!(other, Term::Const(0) | Term::Const(1))
                    && matches!(a.cmp, Comparator::Eq | Comparator::Ne);
                if !ok {
                    return err(pos, "boolean fluents may only be compared for equality with 0 or 1");
                }
            }
        }
        Ok(())
    }

    fn assertion(&self, e: &Sexpr, params: &[Parameter]) -> Result<Assertion> {
        let l = list(e)?;
        match e.head().as_deref() {
            Some("not") => {
                if l.len() != 2 {
                    return err(e.pos(), "'not' takes one argument");
                }
                let inner = &l[1];
                match inner.head().as_deref() {
                    Some("=") => {
                        let mut a = self.assertion(inner, params)?;
                        a.cmp = Comparator::Ne;
                        self.check_assertion(&a, e.pos())?;
                        Ok(a)
                    }
                    Some("<") | Some(">") => err(e.pos(), "negated inequalities are not supported"),
                    _ => {
                        let r = self.fluent_ref(inner, params)?;
                        self.bool_literal(r, 0, inner.pos())
                    }
                }
            }
            Some(op @ ("=" | "<" | ">")) => {
                if l.len() != 3 {
                    return err(e.pos(), format!("'{op}' takes two arguments"));
                }
                let cmp = match op {
                    "=" => Comparator::Eq,
                    "<" => Comparator::Lt,
                    _ => Comparator::Gt,
                };
                let a = Assertion {
                    lhs: self.term(&l[1], params)?,
                    cmp,
                    rhs: self.term(&l[2], params)?,
                };
                self.check_assertion(&a, e.pos())?;
                Ok(a)
            }
            _ => {
                let r = self.fluent_ref(e, params)?;
                self.bool_literal(r, 1, e.pos())
            }
        }
    }

    fn bool_literal(&self, r: FluentRef, v: i64, pos: Pos) -> Result<Assertion> {
        if self.fluents[r.fluent].kind != FluentKind::Boolean {
            return err(pos, format!("'{}' is numeric and cannot be used as a literal", self.fluents[r.fluent].name));
        }
        Ok(Assertion {
            lhs: Term::Fluent(r),
            cmp: Comparator::Eq,
            rhs: Term::Const(v),
        })
    }

    fn effect(&self, e: &Sexpr, params: &[Parameter]) -> Result<Assignment> {
        let l = list(e)?;
        let literal = |inner: &Sexpr, v: i64| -> Result<Assignment> {
            let r = self.fluent_ref(inner, params)?;
            if self.fluents[r.fluent].kind != FluentKind::Boolean {
                return err(inner.pos(), format!("'{}' is numeric; use assign/increase/decrease", self.fluents[r.fluent].name));
            }
            Ok(Assignment {
                target: r,
                op: AssignOp::Assign,
                operand: Term::Const(v),
            })
        };
        match e.head().as_deref() {
            Some("not") => {
                if l.len() != 2 {
                    return err(e.pos(), "'not' takes one argument");
                }
                literal(&l[1], 0)
            }
            Some(op @ ("assign" | "increase" | "decrease")) => {
                if l.len() != 3 {
                    return err(e.pos(), format!("'{op}' takes two arguments"));
                }
                let target = self.fluent_ref(&l[1], params)?;
                if self.fluents[target.fluent].kind != FluentKind::Numeric {
                    return err(l[1].pos(), format!("'{op}' target must be a numeric function"));
                }
                let operand = self.term(&l[2], params)?;
                if self.term_kind(&operand) == Some(FluentKind::Boolean) {
                    return err(l[2].pos(), "numeric effects cannot read boolean fluents");
                }
                let op = match op {
                    "assign" => AssignOp::Assign,
                    "increase" => AssignOp::Increase,
                    _ => AssignOp::Decrease,
                };
                Ok(Assignment { target, op, operand })
            }
            Some("when") | Some("forall") => err(e.pos(), "conditional and quantified effects are not supported"),
            _ => literal(e, 1),
        }
    }

    fn action(&self, items: &[Sexpr], pos: Pos) -> Result<ActionScheme> {
        let name = ident(items.get(1).ok_or_else(|| ModelError::semantic(pos, "action without a name"))?)?;
        let mut params = Vec::new();
        let mut pre = None;
        let mut eff = None;
        let mut i = 2;
        while i < items.len() {
            let key = atom(&items[i])?.to_ascii_lowercase();
            let val = items
                .get(i + 1)
                .ok_or_else(|| ModelError::semantic(items[i].pos(), format!("missing value for {key}")))?;
            match key.as_str() {
                ":parameters" => {
                    for (v, ty, p) in typed_list(list(val)?)? {
                        if !v.starts_with('?') {
                            return err(p, format!("parameter '{v}' must start with '?'"));
                        }
                        if params.iter().any(|q: &Parameter| q.name == v) {
                            return err(p, format!("duplicate parameter '{v}'"));
                        }
                        params.push(Parameter {
                            name: v,
                            ty: self.type_of(&ty, p)?,
                        });
                    }
                }
                ":precondition" => pre = Some(val),
                ":effect" => eff = Some(val),
                _ => return err(items[i].pos(), format!("unknown action field '{key}'")),
            }
            i += 2;
        }
        let precondition = match pre {
            Some(e) => conjuncts(e)?
                .into_iter()
                .map(|c| self.assertion(c, &params))
                .collect::<Result<Vec<_>>>()?,
            None => vec![],
        };
        let effects = match eff {
            Some(e) => conjuncts(e)?
                .into_iter()
                .map(|c| self.effect(c, &params))
                .collect::<Result<Vec<_>>>()?,
            None => vec![],
        };
        let mut targets = HashSet::new();
        for a in &effects {
            if !targets.insert(&a.target) {
                return err(pos, format!("action '{name}' assigns the same fluent twice"));
            }
        }
        Ok(ActionScheme {
            name,
            params,
            precondition,
            effects,
        })
    }
}

fn define_body<'a>(doc: &'a [Sexpr], kind: &str) -> Result<(&'a [Sexpr], String)> {
    let root = match doc {
        [one] => one,
        [] => return err(Pos { line: 1, col: 1 }, "empty document"),
        [_, second, ..] => return err(second.pos(), "expected a single (define ...) form"),
    };
    let l = list(root)?;
    if root.head().as_deref() != Some("define") || l.len() < 2 {
        return err(root.pos(), "expected (define ...)");
    }
    let header = list(&l[1])?;
    if l[1].head().as_deref() != Some(kind) || header.len() != 2 {
        return err(l[1].pos(), format!("expected ({kind} <name>)"));
    }
    Ok((&l[2..], ident(&header[1])?))
}

pub fn parse_domain(text: &str) -> Result<Domain> {
    let doc = parse_all(text)?;
    let (sections, name) = define_body(&doc, "domain")?;
    let mut b = DomainBuilder {
        types: vec![OBJECT_TYPE.to_string()],
        fluents: vec![],
    };
    let mut schemes: Vec<ActionScheme> = Vec::new();
    for sec in sections {
        let l = list(sec)?;
        let head = sec.head().unwrap_or_default();
        match head.as_str() {
            ":requirements" => {}
            ":types" => {
                for (t, parent, p) in typed_list(&l[1..])? {
                    if let Some(parent) = parent {
                        if parent != OBJECT_TYPE {
                            return err(p, format!("type '{t}': only 'object' is supported as a parent type"));
                        }
                    }
                    if !is_ident(&t) {
                        return err(p, format!("'{t}' is not a valid type name"));
                    }
                    if t == OBJECT_TYPE {
                        continue;
                    }
                    if b.types.contains(&t) {
                        return err(p, format!("duplicate type '{t}'"));
                    }
                    b.types.push(t);
                }
            }
            ":predicates" | ":functions" => {
                let kind = if head == ":predicates" {
                    FluentKind::Boolean
                } else {
                    FluentKind::Numeric
                };
                let mut i = 1;
                while i < l.len() {
                    let sig = b.signature(&l[i], kind)?;
                    if b.fluents.iter().any(|f| f.name == sig.name) {
                        return err(l[i].pos(), format!("duplicate predicate or function '{}'", sig.name));
                    }
                    b.fluents.push(sig);
                    i += 1;
                    // optional `- number` result type after a function signature
                    if kind == FluentKind::Numeric && l.get(i).and_then(Sexpr::as_atom) == Some("-") {
                        match l.get(i + 1).and_then(Sexpr::as_atom) {
                            Some("number") | Some("int") => i += 2,
                            _ => return err(l[i].pos(), "function result type must be 'number'"),
                        }
                    }
                }
            }
            ":action" => {
                let a = b.action(l, sec.pos())?;
                if schemes.iter().any(|s| s.name == a.name) {
                    return err(sec.pos(), format!("duplicate action '{}'", a.name));
                }
                schemes.push(a);
            }
            ":constants" => return err(sec.pos(), "domain constants are not supported"),
            other => return err(sec.pos(), format!("unknown domain section '{other}'")),
        }
    }
    Ok(Domain {
        name,
        types: b.types,
        fluents: b.fluents,
        schemes,
    })
}

struct Objects<'a> {
    dom: &'a Domain,
    by_name: HashMap<String, (TypeId, usize)>,
}

impl Objects<'_> {
    fn ground(&self, e: &Sexpr) -> Result<GroundFluent> {
        let l = list(e)?;
        let head = l.first().ok_or_else(|| ModelError::semantic(e.pos(), "empty atom"))?;
        let name = atom(head)?;
        let f = self
            .dom
            .fluent_id(name)
            .ok_or_else(|| ModelError::semantic(head.pos(), format!("undeclared predicate or function '{name}'")))?;
        let sig = &self.dom.fluents[f];
        if sig.arity() != l.len() - 1 {
            return err(
                e.pos(),
                format!("'{name}' expects {} arguments, got {}", sig.arity(), l.len() - 1),
            );
        }
        let mut args = Vec::new();
        for (k, a) in l[1..].iter().enumerate() {
            let o = atom(a)?;
            let &(ty, idx) = self
                .by_name
                .get(o)
                .ok_or_else(|| ModelError::semantic(a.pos(), format!("unknown object '{o}'")))?;
            if ty != sig.params[k] {
                return err(
                    a.pos(),
                    format!("object '{o}' has type '{}', '{name}' expects '{}'", self.dom.types[ty], self.dom.types[sig.params[k]]),
                );
            }
            args.push(idx);
        }
        Ok(GroundFluent { fluent: f, args })
    }

    /// `(p o..)`, `(not (p o..))` or `(= (f o..) c)` as a fluent/value pair.
    fn valued(&self, e: &Sexpr, allow_negation: bool) -> Result<(GroundFluent, i64)> {
        let l = list(e)?;
        match e.head().as_deref() {
            Some("not") if allow_negation => {
                if l.len() != 2 {
                    return err(e.pos(), "'not' takes one argument");
                }
                let gf = self.ground(&l[1])?;
                self.expect_kind(&gf, FluentKind::Boolean, l[1].pos())?;
                Ok((gf, 0))
            }
            Some("=") => {
                if l.len() != 3 {
                    return err(e.pos(), "'=' takes two arguments");
                }
                let gf = self.ground(&l[1])?;
                let v = parse_int(&l[2]).ok_or_else(|| ModelError::semantic(l[2].pos(), "expected an integer"))?;
                if self.dom.fluents[gf.fluent].kind == FluentKind::Boolean && v != 0 && v != 1 {
                    return err(l[2].pos(), "boolean fluents take values 0 or 1");
                }
                Ok((gf, v))
            }
            _ => {
                let gf = self.ground(e)?;
                self.expect_kind(&gf, FluentKind::Boolean, e.pos())?;
                Ok((gf, 1))
            }
        }
    }

    fn expect_kind(&self, gf: &GroundFluent, kind: FluentKind, pos: Pos) -> Result<()> {
        if self.dom.fluents[gf.fluent].kind != kind {
            return err(pos, format!("'{}' is numeric; use (= (f ...) value)", self.dom.fluents[gf.fluent].name));
        }
        Ok(())
    }
}

pub fn parse_instance(text: &str, dom: &Domain) -> Result<Instance> {
    let doc = parse_all(text)?;
    let (sections, name) = define_body(&doc, "problem")?;
    let mut objects: Vec<Vec<String>> = vec![vec![]; dom.types.len()];
    let mut by_name = HashMap::new();
    let mut init_sec = None;
    let mut goal_sec = None;
    let mut domain_seen = false;
    for sec in sections {
        let l = list(sec)?;
        match sec.head().unwrap_or_default().as_str() {
            ":domain" => {
                let d = l.get(1).map(atom).transpose()?.unwrap_or_default();
                if d != dom.name {
                    return err(sec.pos(), format!("instance is for domain '{d}', expected '{}'", dom.name));
                }
                domain_seen = true;
            }
            ":objects" => {
                for (o, ty, p) in typed_list(&l[1..])? {
                    if o.starts_with('?') {
                        return err(p, format!("'{o}' is not a valid object name"));
                    }
                    let t = match ty {
                        None => 0,
                        Some(t) => dom
                            .type_id(&t)
                            .ok_or_else(|| ModelError::semantic(p, format!("undeclared type '{t}'")))?,
                    };
                    if by_name.insert(o.clone(), (t, objects[t].len())).is_some() {
                        return err(p, format!("duplicate object '{o}'"));
                    }
                    objects[t].push(o);
                }
            }
            ":init" => init_sec = Some(sec),
            ":goal" => goal_sec = Some(sec),
            ":requirements" => {}
            other => return err(sec.pos(), format!("unknown problem section '{other}'")),
        }
    }
    if !domain_seen {
        return err(Pos { line: 1, col: 1 }, "instance lacks a (:domain ...) section");
    }
    let objs = Objects { dom, by_name };
    let mut init: Vec<(GroundFluent, i64)> = Vec::new();
    if let Some(sec) = init_sec {
        for e in &list(sec)?[1..] {
            let (gf, v) = objs.valued(e, false)?;
            if init.iter().any(|(g, _)| *g == gf) {
                return err(e.pos(), "fluent initialised twice");
            }
            init.push((gf, v));
        }
    }
    let mut goal: Vec<(GroundFluent, i64)> = Vec::new();
    if let Some(sec) = goal_sec {
        let l = list(sec)?;
        if l.len() > 2 {
            return err(sec.pos(), "(:goal ...) takes a single condition");
        }
        if let Some(g) = l.get(1) {
            for c in conjuncts(g)? {
                let (gf, v) = objs.valued(c, true)?;
                if let Some((_, prev)) = goal.iter().find(|(g, _)| *g == gf) {
                    if *prev != v {
                        return err(c.pos(), "contradictory goal values");
                    }
                    continue;
                }
                goal.push((gf, v));
            }
        }
    }
    Instance::new(dom, name, objects, init, goal)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::benchmarks::{BLOCKS_DOMAIN, TOWER3_INSTANCE};

    #[test]
    fn blocksworld_domain() {
        let d = parse_domain(BLOCKS_DOMAIN).unwrap();
        assert_eq!(d.fluents.len(), 5);
        assert!(d.fluents.iter().all(|f| f.kind == FluentKind::Boolean));
        assert_eq!(d.schemes.len(), 4);
        let unstack = &d.schemes[d.scheme_id("unstack").unwrap()];
        assert_eq!(unstack.precondition.len(), 3);
        assert_eq!(unstack.effects.len(), 5);
    }

    #[test]
    fn minimal_domain() {
        let d = parse_domain("(define (domain tiny) (:predicates) (:action noop :parameters ()))").unwrap();
        assert!(d.fluents.is_empty());
        assert_eq!(d.schemes.len(), 1);
        assert!(d.schemes[0].precondition.is_empty());
    }

    #[test]
    fn undeclared_predicate_is_rejected() {
        let e = parse_domain(
            "(define (domain t) (:predicates (p ?x))\n (:action a :parameters (?x) :precondition (q ?x)))",
        )
        .unwrap_err();
        match e {
            ModelError::Semantic { pos, msg } => {
                assert!(msg.contains("'q'"), "{msg}");
                assert_eq!(pos.line, 2);
            }
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn syntax_error_has_position() {
        let e = parse_domain("(define (domain t)\n  (:predicates (p ?x)").unwrap_err();
        assert!(matches!(e, ModelError::Syntax(_)));
    }

    #[test]
    fn undeclared_type_is_rejected() {
        let e = parse_domain("(define (domain t) (:predicates (p ?x - thing)))").unwrap_err();
        assert!(e.to_string().contains("undeclared type 'thing'"));
    }

    #[test]
    fn tower_instance() {
        let d = parse_domain(BLOCKS_DOMAIN).unwrap();
        let i = parse_instance(TOWER3_INSTANCE, &d).unwrap();
        let block = d.type_id("block").unwrap();
        assert_eq!(i.objects[block], vec!["b0", "b1", "b2"]);
        let shown: Vec<String> = i.init.iter().map(|(g, _)| i.display_fluent(&d, g)).collect();
        assert_eq!(
            shown,
            vec!["(clear b0)", "(handempty)", "(on b0 b1)", "(on b1 b2)", "(ontable b2)"]
        );
        let goals: Vec<String> = i.goal.iter().map(|(g, _)| i.display_fluent(&d, g)).collect();
        assert_eq!(goals, vec!["(ontable b0)", "(ontable b1)", "(ontable b2)"]);
        assert!(i.goal.iter().all(|(_, v)| *v == 1));
    }

    #[test]
    fn empty_partition_is_valid() {
        let d = parse_domain(
            "(define (domain t) (:types a b) (:predicates (p ?x - a)) (:action n :parameters ()))",
        )
        .unwrap();
        let i = parse_instance("(define (problem p) (:domain t) (:objects x - a) (:init (p x)) (:goal (p x)))", &d).unwrap();
        assert_eq!(i.count(d.type_id("b").unwrap()), 0);
    }

    #[test]
    fn arity_mismatch_and_unknown_object() {
        let d = parse_domain(BLOCKS_DOMAIN).unwrap();
        let bad_arity = "(define (problem p) (:domain blocksworld) (:objects b0 - block) (:init) (:goal (on b0)))";
        assert!(parse_instance(bad_arity, &d).unwrap_err().to_string().contains("expects 2"));
        let bad_obj = "(define (problem p) (:domain blocksworld) (:objects b0 - block) (:init (clear b9)) (:goal (and)))";
        assert!(parse_instance(bad_obj, &d).unwrap_err().to_string().contains("unknown object 'b9'"));
    }

    #[test]
    fn numeric_init_and_goal() {
        let d = parse_domain(
            "(define (domain n) (:types blk) (:functions (distance ?a ?b - blk) (x) - number) (:action a :parameters ()))",
        )
        .unwrap();
        let i = parse_instance(
            "(define (problem p) (:domain n) (:objects b0 b1 - blk) (:init (= (distance b0 b1) 7)) (:goal (= (x) 5)))",
            &d,
        )
        .unwrap();
        assert_eq!(i.init[0].1, 7);
        assert_eq!(i.goal, vec![(GroundFluent { fluent: 1, args: vec![] }, 5)]);
    }

    #[test]
    fn negative_goal_is_stored_as_zero_target() {
        let d = parse_domain(BLOCKS_DOMAIN).unwrap();
        let i = parse_instance(
            "(define (problem p) (:domain blocksworld) (:objects b0 - block) (:init (holding b0)) (:goal (not (holding b0))))",
            &d,
        )
        .unwrap();
        assert_eq!(i.goal[0].1, 0);
    }
}
