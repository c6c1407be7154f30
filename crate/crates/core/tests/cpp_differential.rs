mod common;

use std::path::Path;
use std::process::Command;

use common::cpp::have_compiler;
use genplan::benchmarks::{self, BenchmarkId, BLOCKS_DOMAIN, TOWER3_INSTANCE};
use genplan::codegen::{COMPILE_FLAGS, RUNTIME_HEADER};
use genplan::interpreter::{execute, Fuel};
use genplan::model::{parse_domain, parse_instance, Domain, Instance};
use genplan::program::Program;

fn compile_and_run(dir: &Path, dom: &Domain, inst: &Instance, prog: &Program) -> String {
    common::cpp::compile_and_run(dir, dom, inst, prog).unwrap_or_else(|e| panic!("{e}"))
}

#[test]
fn ontable_bundle_prints_four_step_plan() {
    if !have_compiler() {
        eprintln!("g++ not available; skipping");
        return;
    }
    let d = parse_domain(BLOCKS_DOMAIN).unwrap();
    let i = parse_instance(TOWER3_INSTANCE, &d).unwrap();
    let p = benchmarks::reference_program(BenchmarkId::BlocksOntable);
    let dir = tempfile::tempdir().unwrap();
    let out = compile_and_run(dir.path(), &d, &i, &p);
    assert_eq!(
        out,
        "(unstack b0 b1)\n(putdown b0)\n(unstack b1 b2)\n(putdown b1)\nattempted=54\ngoal=true\n"
    );
}

#[test]
fn reference_bundles_match_interpreter_traces() {
    if !have_compiler() {
        eprintln!("g++ not available; skipping");
        return;
    }
    std::thread::scope(|s| {
        for id in BenchmarkId::ALL {
            s.spawn(move || {
                let d = benchmarks::domain(id);
                let p = benchmarks::reference_program(id);
                let size = if id == BenchmarkId::Floyd { 4 } else { 3 };
                let inst = benchmarks::generate(id, size, 7).unwrap();
                let dir = tempfile::tempdir().unwrap();
                let got = compile_and_run(dir.path(), &d, &inst, &p);
                let want = execute(&p, &d, &inst, Fuel::UNLIMITED).to_text(&d, &inst);
                assert_eq!(got, want, "{id}");
                assert!(got.ends_with("goal=true\n"), "{id}");
            });
        }
    });
}

#[test]
fn failing_run_reports_goal_false() {
    if !have_compiler() {
        eprintln!("g++ not available; skipping");
        return;
    }
    let d = parse_domain(BLOCKS_DOMAIN).unwrap();
    let i = parse_instance(TOWER3_INSTANCE, &d).unwrap();
    let p = Program::parse("pointers z1 z2 - block\ninc(z2)\nact unstack(z1,z2)\nend\n", &d).unwrap();
    let dir = tempfile::tempdir().unwrap();
    let out = compile_and_run(dir.path(), &d, &i, &p);
    assert_eq!(out, "(unstack b0 b1)\nattempted=1\ngoal=false\n");
}

#[test]
fn numeric_effects_read_the_pre_state() {
    if !have_compiler() {
        eprintln!("g++ not available; skipping");
        return;
    }
    let dom = "(define (domain rot)
  (:types cell)
  (:functions (v ?c - cell))
  (:action rotate
    :parameters (?a - cell ?b - cell ?c - cell)
    :effect (and (assign (v ?a) (v ?b)) (assign (v ?b) (v ?c)) (assign (v ?c) (v ?a)))))";
    let inst = "(define (problem rot3) (:domain rot)
  (:objects c0 c1 c2 - cell)
  (:init (= (v c0) 1) (= (v c1) 2) (= (v c2) 3))
  (:goal (and (= (v c0) 2) (= (v c1) 3) (= (v c2) 1))))";
    let d = parse_domain(dom).unwrap();
    let i = parse_instance(inst, &d).unwrap();
    let p = Program::parse("pointers z1 z2 z3 - cell\ninc(z2)\ninc(z3)\ninc(z3)\nact rotate(z1,z2,z3)\nend\n", &d)
        .unwrap();
    let want = execute(&p, &d, &i, Fuel::UNLIMITED).to_text(&d, &i);
    let dir = tempfile::tempdir().unwrap();
    assert_eq!(compile_and_run(dir.path(), &d, &i, &p), want);
}

#[test]
fn runtime_header_compiles_standalone() {
    if !have_compiler() {
        eprintln!("g++ not available; skipping");
        return;
    }
    let dir = tempfile::tempdir().unwrap();
    std::fs::write(dir.path().join("genplan_runtime.hpp"), RUNTIME_HEADER).unwrap();
    let src = dir.path().join("t.cpp");
    std::fs::write(
        &src,
        "#include \"genplan_runtime.hpp\"\nint main() {\n  genplan::Table t({2, 3});\n  t.set({1, 2}, 5);\n  \
         if (t.get({1, 2}) != 5 || t.get({2, 0}) != 0 || t.get({-1, 0}) != 0) return 1;\n  \
         genplan::record(\"a\", {\"x\", \"y\"});\n  genplan::record(\"b\", {});\n  \
         genplan::report(2, true, 0);\n  return 0;\n}\n",
    )
    .unwrap();
    let exe = dir.path().join("t");
    let st = Command::new("g++")
        .args(COMPILE_FLAGS)
        .args(["-Wall", "-Wextra", "-Werror"])
        .arg(&src)
        .arg("-o")
        .arg(&exe)
        .output()
        .unwrap();
    assert!(st.status.success(), "{}", String::from_utf8_lossy(&st.stderr));
    let out = Command::new(&exe).output().unwrap();
    assert!(out.status.success());
    assert_eq!(
        String::from_utf8(out.stdout).unwrap(),
        "(a x y)\n(b)\nattempted=2\ngoal=true\ntime_ms=0\n"
    );
}
