use genplan::benchmarks::{self, BenchmarkId};
use genplan::interpreter::{execute, Fuel, HaltReason};
use genplan::program::structural_validate;

#[test]
fn reference_programs_solve_training_and_held_out_instances() {
    for id in BenchmarkId::ALL {
        let dom = benchmarks::domain(id);
        let prog = benchmarks::reference_program(id);
        structural_validate(&prog).unwrap_or_else(|v| panic!("{id}: {v:?}"));
        let train = benchmarks::training_problem(id, 1).unwrap();
        let held = benchmarks::held_out_problem(id, 1).unwrap();
        for inst in train.instances.iter().chain(&held.instances) {
            let t = execute(&prog, &dom, inst, Fuel::UNLIMITED);
            assert_eq!(t.halt, HaltReason::End, "{id} on {}", inst.name);
            assert!(t.goal_reached(inst), "{id} fails on {}", inst.name);
        }
    }
}

#[test]
fn reference_programs_solve_many_random_instances() {
    for id in BenchmarkId::ALL {
        let dom = benchmarks::domain(id);
        let prog = benchmarks::reference_program(id);
        for seed in 0..40u64 {
            let size = 2 + (seed as usize % 9);
            let inst = benchmarks::generate(id, size, seed).unwrap();
            let t = execute(&prog, &dom, &inst, Fuel::UNLIMITED);
            assert!(t.goal_reached(&inst), "{id} fails on {}", inst.name);
        }
    }
}

#[test]
fn single_element_sorting_is_solved_by_empty_plan() {
    let inst = benchmarks::generate(BenchmarkId::Sorting, 1, 0).unwrap();
    let dom = benchmarks::domain(BenchmarkId::Sorting);
    assert!(genplan::interpreter::validate_plan(&[], &dom, &inst));
}
