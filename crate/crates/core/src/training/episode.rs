//! Episode rollout: one solver run under the policy, scored as a reward.

use crate::counting::{count_sharp, ComponentCache, SolveLimits};
use crate::formula::CnfFormula;
use crate::policy::{GnnPolicy, PolicyConfig, PolicyParams};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EpisodeTrace {
    pub solved: bool,
    pub decisions: u64,
    pub reward: f64,
}

/// Solves `formula` with the policy (fresh component cache), capping the
/// number of heuristic invocations. Every invocation costs `r_penalty`; the
/// termination reward +1 is granted only if the run finishes within the cap.
pub fn run_episode(
    formula: &CnfFormula,
    params: &PolicyParams,
    r_penalty: f64,
    cap: u64,
) -> EpisodeTrace {
    let mut policy = GnnPolicy::new(params.clone());
    let mut cache = ComponentCache::unbounded();
    let result = count_sharp(formula, &mut policy, &mut cache, &SolveLimits::capped(cap));
    let solved = result.solved();
    EpisodeTrace {
        solved,
        decisions: result.decisions,
        reward: result.decisions as f64 * r_penalty + if solved { 1.0 } else { 0.0 },
    }
}

/// Mean episodic reward of one parameter vector over a formula batch.
pub fn fitness(
    flat: &[f64],
    policy_config: PolicyConfig,
    batch: &[&CnfFormula],
    r_penalty: f64,
    cap: u64,
) -> f64 {
    assert!(!batch.is_empty(), "fitness needs a nonempty batch");
    let params = PolicyParams::unflatten(flat, policy_config).expect("flat length matches config");
    let total: f64 = batch
        .iter()
        .map(|f| run_episode(f, &params, r_penalty, cap).reward)
        .sum();
    total / batch.len() as f64
}
