//! Cross-module scenarios: generated instances surviving a DIMACS round
//! trip, the GNN policy driving the caching engine to exact counts, and the
//! training loop on instances the solver finishes without branching.

use countess::counting::{
    count_relsat, count_sharp, ComponentCache, OccurrenceHeuristic, SolveLimits,
};
use countess::formula::{parse_dimacs, serialize_dimacs};
use countess::generators::{gen_arith, gen_cell, gen_grid, gen_sudoku, CellRule, Instance};
use countess::policy::{GnnPolicy, PolicyConfig, PolicyParams};
use countess::training::{EsConfig, Trainer};

fn sample_instances() -> Vec<Instance> {
    vec![
        gen_cell(CellRule(49), 6, 3, 5),
        gen_grid(3, 2, 5).expect("terrain sampling succeeds"),
        gen_sudoku(4, 8, 5),
        gen_arith(2, 2, 3, 5),
    ]
}

#[test]
fn dimacs_round_trip_preserves_counts_and_annotations() {
    for inst in sample_instances() {
        let text = serialize_dimacs(&inst.formula);
        let parsed = parse_dimacs(&text).expect("own output must parse");
        assert_eq!(parsed.num_vars(), inst.formula.num_vars());
        for v in 1..=inst.formula.num_vars() {
            assert_eq!(parsed.time(v), inst.formula.time(v));
            assert_eq!(parsed.coord(v), inst.formula.coord(v));
        }
        let limits = SolveLimits::default();
        let before = count_relsat(&inst.formula, &mut OccurrenceHeuristic, &limits);
        let after = count_relsat(&parsed, &mut OccurrenceHeuristic, &limits);
        assert_eq!(before.count, after.count, "{}", inst.file_stem());
    }
}

#[test]
fn gnn_policy_drives_the_caching_engine_to_exact_counts() {
    let limits = SolveLimits::default();
    for inst in sample_instances() {
        let expected = count_relsat(&inst.formula, &mut OccurrenceHeuristic, &limits).count;
        let mut policy = GnnPolicy::new(PolicyParams::init(PolicyConfig::default(), 9));
        policy
            .check_formula(&inst.formula)
            .expect("no time feature requested");
        let mut cache = ComponentCache::unbounded();
        let got = count_sharp(&inst.formula, &mut policy, &mut cache, &limits);
        assert!(!got.aborted);
        assert_eq!(got.count, expected, "{}", inst.file_stem());
    }
}

#[test]
fn time_only_policy_counts_time_annotated_instances_exactly() {
    let limits = SolveLimits::default();
    for inst in [gen_cell(CellRule(35), 7, 3, 2), gen_grid(3, 3, 2).unwrap()] {
        let expected = count_relsat(&inst.formula, &mut OccurrenceHeuristic, &limits).count;
        let mut policy = GnnPolicy::new(PolicyParams::init(PolicyConfig::time_only(), 4));
        policy.check_formula(&inst.formula).expect("time present");
        let mut cache = ComponentCache::unbounded();
        let got = count_sharp(&inst.formula, &mut policy, &mut cache, &limits);
        assert_eq!(got.count, expected, "{}", inst.file_stem());
    }
}

#[test]
fn identity_rule_training_logs_perfect_fitness_throughout() {
    // Rule 204 instances collapse under initial unit propagation, so every
    // offspring solves every episode in zero decisions and fitness is pinned
    // at exactly 1.0 from the very first iteration.
    let dataset: Vec<_> = (0..6)
        .map(|seed| gen_cell(CellRule(204), 6, 3, seed).formula)
        .collect();
    let es = EsConfig {
        n_directions: 3,
        batch_size: 2,
        iterations: 3,
        train_step_cap: 10,
        ..EsConfig::default()
    };
    let mut trainer = Trainer::new(PolicyConfig::time_only(), es);
    let logs = trainer.train(&dataset, |_, _| {});
    assert_eq!(logs.len(), 3);
    for log in logs {
        assert_eq!(log.mean_fitness, 1.0);
        assert_eq!(log.max_fitness, 1.0);
        assert_eq!(log.mean_decisions, 0.0);
        assert_eq!(log.solved_frac, 1.0);
    }
}
