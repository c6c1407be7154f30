mod common;

use std::time::Instant;

use common::checks::{candidate_configs, check_candidates, check_micro_search, micro_configs};

#[test]
fn candidate_sets_match_grammar_oracle() {
    for m in candidate_configs() {
        let checked = check_candidates(&m).unwrap_or_else(|e| panic!("{e}"));
        eprintln!("{}: {checked} prefixes", m.name);
    }
}

#[test]
fn micro_search_is_complete_and_tabu_preserves_solutions() {
    let mut solvable = 0;
    for m in micro_configs() {
        let started = Instant::now();
        let (programs, solutions) = check_micro_search(&m).unwrap_or_else(|e| panic!("{e}"));
        solvable += usize::from(solutions > 0);
        eprintln!(
            "{}: {programs} programs, {solutions} solutions, {:.1}s",
            m.name,
            started.elapsed().as_secs_f64()
        );
    }
    assert!(solvable >= 2, "micro suite needs solvable configurations");
}
