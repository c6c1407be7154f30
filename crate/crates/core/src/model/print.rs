use std::fmt::Write;

use super::{
    ActionScheme, AssignOp, Comparator, Domain, FluentKind, FluentRef, Instance, Term,
};

fn typed(dom: &Domain, name: &str, ty: usize) -> String {
    if dom.is_untyped() {
        name.to_string()
    } else {
        format!("{name} - {}", dom.types[ty])
    }
}

fn fluent_ref(scheme: &ActionScheme, dom: &Domain, r: &FluentRef) -> String {
    let mut s = format!("({}", dom.fluents[r.fluent].name);
    for &a in &r.args {
        s.push(' ');
        s.push_str(&scheme.params[a].name);
    }
    s.push(')');
    s
}

fn term(scheme: &ActionScheme, dom: &Domain, t: &Term) -> String {
    match t {
        Term::Const(v) => v.to_string(),
        Term::Fluent(r) => fluent_ref(scheme, dom, r),
    }
}

fn is_bool(dom: &Domain, t: &Term) -> bool {
    matches!(t, Term::Fluent(r) if dom.fluents[r.fluent].kind == FluentKind::Boolean)
}

fn assertion(scheme: &ActionScheme, dom: &Domain, a: &super::Assertion) -> String {
    // boolean literals print in their PDDL form
    if is_bool(dom, &a.lhs) {
        if let Term::Const(v) = a.rhs {
            let positive = (v == 1) == (a.cmp == Comparator::Eq);
            let lit = term(scheme, dom, &a.lhs);
            return if positive { lit } else { format!("(not {lit})") };
        }
    }
    let (l, r) = (term(scheme, dom, &a.lhs), term(scheme, dom, &a.rhs));
    match a.cmp {
        Comparator::Eq => format!("(= {l} {r})"),
        Comparator::Ne => format!("(not (= {l} {r}))"),
        Comparator::Lt => format!("(< {l} {r})"),
        Comparator::Gt => format!("(> {l} {r})"),
    }
}

pub(super) fn domain_to_string(dom: &Domain) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "(define (domain {})", dom.name);
    if !dom.is_untyped() {
        let _ = writeln!(out, "  (:types {})", dom.types[1..].join(" "));
    }
    let sigs = |kind: FluentKind| -> Vec<String> {
        dom.fluents
            .iter()
            .filter(|f| f.kind == kind)
            .map(|f| {
                let mut s = format!("({}", f.name);
                for (k, &t) in f.params.iter().enumerate() {
                    s.push(' ');
                    s.push_str(&typed(dom, &format!("?a{k}"), t));
                }
                s.push(')');
                s
            })
            .collect()
    };
    let preds = sigs(FluentKind::Boolean);
    let funcs = sigs(FluentKind::Numeric);
    let _ = writeln!(out, "  (:predicates {})", preds.join(" "));
    if !funcs.is_empty() {
        let _ = writeln!(out, "  (:functions {})", funcs.join(" "));
    }
    for a in &dom.schemes {
        let params: Vec<String> = a.params.iter().map(|p| typed(dom, &p.name, p.ty)).collect();
        let _ = writeln!(out, "  (:action {}", a.name);
        let _ = writeln!(out, "    :parameters ({})", params.join(" "));
        let pre: Vec<String> = a.precondition.iter().map(|c| assertion(a, dom, c)).collect();
        let _ = writeln!(out, "    :precondition (and {})", pre.join(" "));
        let eff: Vec<String> = a
            .effects
            .iter()
            .map(|e| {
                let target = fluent_ref(a, dom, &e.target);
                match (dom.fluents[e.target.fluent].kind, e.op, &e.operand) {
                    (FluentKind::Boolean, _, Term::Const(0)) => format!("(not {target})"),
                    (FluentKind::Boolean, _, _) => target,
                    (_, op, operand) => {
                        let kw = match op {
                            AssignOp::Assign => "assign",
                            AssignOp::Increase => "increase",
                            AssignOp::Decrease => "decrease",
                        };
                        format!("({kw} {target} {})", term(a, dom, operand))
                    }
                }
            })
            .collect();
        let _ = writeln!(out, "    :effect (and {}))", eff.join(" "));
    }
    out.push_str(")\n");
    out
}

pub(super) fn instance_to_string(inst: &Instance, dom: &Domain) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "(define (problem {})", inst.name);
    let _ = writeln!(out, "  (:domain {})", inst.domain_name);
    let mut objs = Vec::new();
    for (t, names) in inst.objects.iter().enumerate() {
        if names.is_empty() {
            continue;
        }
        if dom.is_untyped() {
            objs.push(names.join(" "));
        } else {
            objs.push(format!("{} - {}", names.join(" "), dom.types[t]));
        }
    }
    let _ = writeln!(out, "  (:objects {})", objs.join(" "));
    let valued = |gf: &super::GroundFluent, v: i64, goal: bool| -> String {
        let atom = inst.display_fluent(dom, gf);
        match dom.fluents[gf.fluent].kind {
            FluentKind::Boolean if v == 1 => atom,
            FluentKind::Boolean if goal => format!("(not {atom})"),
            _ => format!("(= {atom} {v})"),
        }
    };
    let init: Vec<String> = inst.init.iter().map(|(g, v)| valued(g, *v, false)).collect();
    let _ = writeln!(out, "  (:init {})", init.join(" "));
    let goal: Vec<String> = inst.goal.iter().map(|(g, v)| valued(g, *v, true)).collect();
    let _ = writeln!(out, "  (:goal (and {})))", goal.join(" "));
    out
}

#[cfg(test)]
mod tests {
    use crate::benchmarks::{self, BenchmarkId};
    use crate::model::{parse_domain, parse_instance};

    #[test]
    fn every_benchmark_domain_round_trips() {
        for id in BenchmarkId::ALL {
            let d = parse_domain(benchmarks::domain_text(id)).unwrap();
            let again = parse_domain(&d.to_string()).unwrap();
            assert_eq!(d, again, "{id:?}");
            let inst = benchmarks::generate(id, 3, 7).unwrap();
            let back = parse_instance(&inst.to_pddl(&d), &d).unwrap();
            assert_eq!(inst, back, "{id:?}");
        }
    }
}
