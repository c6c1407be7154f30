mod common;

use common::checks::{check_generated, check_plan_round_trip, check_renaming, fixtures};
use common::random_program;
use genplan::analysis::certify_termination;
use genplan::benchmarks::BenchmarkId;
use genplan::program::Instruction;
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

proptest! {
    #![proptest_config(ProptestConfig::with_cases(10_000))]

    #[test]
    fn generated_programs_are_certified_and_bounded(bench in 0..BenchmarkId::ALL.len(), seed in any::<u64>()) {
        let f = &fixtures()[bench];
        let prog = random_program(&f.limits, &f.prob, &mut ChaCha8Rng::seed_from_u64(seed));
        check_generated(f, &prog).map_err(TestCaseError::fail)?;
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(1_000))]

    #[test]
    fn plans_round_trip_through_programs(bench in 0..BenchmarkId::ALL.len(), seed in any::<u64>(), len in 0usize..25) {
        check_plan_round_trip(&fixtures()[bench], seed, len).map_err(TestCaseError::fail)?;
    }

    #[test]
    fn loop_abstraction_ignores_pointer_names(bench in 0..BenchmarkId::ALL.len(), seed in any::<u64>()) {
        check_renaming(&fixtures()[bench], seed).map_err(TestCaseError::fail)?;
    }
}

#[test]
fn random_programs_cover_nested_loops_and_actions() {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let (mut total, mut looping, mut nested, mut acting) = (0, 0, 0, 0);
    for f in fixtures() {
        for _ in 0..200 {
            let prog = random_program(&f.limits, &f.prob, &mut rng);
            let depth = certify_termination(&prog).depth();
            total += 1;
            looping += usize::from(depth >= 1);
            nested += usize::from(depth >= 2);
            acting += usize::from(prog.lines().iter().any(|i| matches!(i, Instruction::Act { .. })));
        }
    }
    eprintln!("{total} programs: {looping} with loops, {nested} nested, {acting} with actions");
    assert!(looping * 4 >= total, "too few loops: {looping}/{total}");
    assert!(nested * 20 >= total, "too few nested loops: {nested}/{total}");
    assert!(acting * 2 >= total, "too few actions: {acting}/{total}");
}

#[test]
fn random_plans_are_not_all_empty() {
    let lengths: Vec<usize> = (0..200u64)
        .map(|k| check_plan_round_trip(&fixtures()[k as usize % fixtures().len()], k, 20).unwrap())
        .collect();
    let nonempty = lengths.iter().filter(|&&l| l > 0).count();
    assert!(nonempty * 10 >= lengths.len() * 9, "{nonempty}/200 plans non-empty");
}
