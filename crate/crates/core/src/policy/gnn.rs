//! GNN forward pass over a literal-clause incidence graph and the branching
//! heuristic that wraps it.
//!
//! Each round runs literal-to-clause then clause-to-literal GIN updates (the
//! literal update already sees the refreshed clause embeddings). A clause
//! aggregates, for every residual literal, the concatenation of that
//! literal's embedding with its complement's; the clause's own 32-wide
//! embedding is zero-padded into that 64-wide space. Final literal embeddings
//! (time-augmented if configured) go through the decision MLP, one scalar per
//! literal node.

use super::lig::{build_lig, Lig};
use super::mlp::gin_aggregate;
use super::params::{PolicyConfig, PolicyError, PolicyParams, EMBED_DIM};
use crate::counting::{BranchingHeuristic, Component};
use crate::formula::{CnfFormula, Literal, Trail};
use std::collections::HashMap;

/// Per-node input features, extracted from the trail once per forward pass.
#[derive(Debug, Clone, PartialEq)]
pub struct LigFeatures {
    /// Per literal node: own and complement occurrence counts among the
    /// component's active clauses, both divided by the largest count in the
    /// component (at least 1). Empty unless the score feature is enabled.
    pub occ: Vec<[f64; 2]>,
    /// Per variable (in `lig.vars` order): the time annotation, defaulting to
    /// 0 for unannotated variables. Empty unless time is enabled.
    pub time: Vec<f64>,
}

/// Gathers features for one graph. Fails if the time feature is on but the
/// formula carries no time annotations at all, naming the first variable the
/// policy would have needed one for.
pub fn build_features(
    lig: &Lig,
    trail: &Trail<'_>,
    config: &PolicyConfig,
) -> Result<LigFeatures, PolicyError> {
    let occ = if config.use_score_feature {
        let max = lig
            .literal_adj
            .iter()
            .map(|a| a.len())
            .max()
            .unwrap_or(0)
            .max(1) as f64;
        (0..lig.num_literal_nodes())
            .map(|node| {
                [
                    lig.literal_adj[node].len() as f64 / max,
                    lig.literal_adj[node ^ 1].len() as f64 / max,
                ]
            })
            .collect()
    } else {
        Vec::new()
    };
    let time = if config.use_time {
        let formula = trail.formula();
        if !formula.has_time_annotations() {
            return Err(PolicyError::MissingTime(lig.vars[0]));
        }
        lig.vars
            .iter()
            .map(|&v| formula.time(v).unwrap_or(0.0))
            .collect()
    } else {
        Vec::new()
    };
    Ok(LigFeatures { occ, time })
}

/// Runs the configured forward pass, returning one score per literal node.
pub fn gnn_forward(lig: &Lig, params: &PolicyParams, features: &LigFeatures) -> Vec<f64> {
    let config = &params.config;
    let nl = lig.num_literal_nodes();
    if config.time_only {
        return (0..nl)
            .map(|node| params.decision.forward(&[features.time[node / 2]])[0])
            .collect();
    }

    let mut hl: Vec<Vec<f64>> = if let Some(score_mlp) = &params.score_mlp {
        (0..nl).map(|node| score_mlp.forward(&features.occ[node])).collect()
    } else {
        vec![params.h0_literal.clone().expect("literal embedding"); nl]
    };
    let mut hc: Vec<Vec<f64>> =
        vec![params.h0_clause.clone().expect("clause embedding"); lig.num_clause_nodes()];

    for round in &params.rounds {
        for (cnode, adj) in lig.clause_adj.iter().enumerate() {
            let mut nsum = vec![0.0; 2 * EMBED_DIM];
            for &lnode in adj {
                let lnode = lnode as usize;
                for d in 0..EMBED_DIM {
                    nsum[d] += hl[lnode][d];
                    nsum[EMBED_DIM + d] += hl[lnode ^ 1][d];
                }
            }
            let mut padded = vec![0.0; 2 * EMBED_DIM];
            padded[..EMBED_DIM].copy_from_slice(&hc[cnode]);
            hc[cnode] = gin_aggregate(&padded, &nsum, &round.clause_update, round.eps_clause);
        }
        for (lnode, adj) in lig.literal_adj.iter().enumerate() {
            let mut nsum = vec![0.0; EMBED_DIM];
            for &cnode in adj {
                for d in 0..EMBED_DIM {
                    nsum[d] += hc[cnode as usize][d];
                }
            }
            hl[lnode] = gin_aggregate(&hl[lnode], &nsum, &round.literal_update, round.eps_literal);
        }
    }

    (0..nl)
        .map(|node| {
            if config.use_time {
                let mut input = Vec::with_capacity(EMBED_DIM + 1);
                input.extend_from_slice(&hl[node]);
                input.push(features.time[node / 2]);
                params.decision.forward(&input)[0]
            } else {
                params.decision.forward(&hl[node])[0]
            }
        })
        .collect()
}

/// Argmax over the graph's literal-node order. Ties fall to the earliest
/// node, i.e. the smallest variable and, within it, the positive polarity.
pub fn select_literal(lig: &Lig, scores: &[f64]) -> Literal {
    assert_eq!(scores.len(), lig.num_literal_nodes());
    assert!(!scores.is_empty(), "no literals to select from");
    let mut best = 0;
    for (node, &s) in scores.iter().enumerate() {
        if s > scores[best] {
            best = node;
        }
    }
    lig.literal_of_node(best)
}

/// The learned branching heuristic.
pub struct GnnPolicy {
    params: PolicyParams,
    /// Time-only mode evaluates the decision MLP on a handful of distinct
    /// time values; memoize per policy instance (times are per-formula
    /// constants, and episodes construct a fresh policy).
    time_only_memo: HashMap<u64, f64>,
}

impl GnnPolicy {
    pub fn new(params: PolicyParams) -> GnnPolicy {
        params.config.assert_valid();
        GnnPolicy {
            params,
            time_only_memo: HashMap::new(),
        }
    }

    pub fn params(&self) -> &PolicyParams {
        &self.params
    }

    /// Checks that `pick` will be able to featurize this formula.
    pub fn check_formula(&self, formula: &CnfFormula) -> Result<(), PolicyError> {
        if self.params.config.use_time && !formula.has_time_annotations() {
            return Err(PolicyError::MissingTime(1));
        }
        Ok(())
    }

    fn pick_time_only(&mut self, trail: &Trail<'_>, component: &Component) -> Literal {
        let formula = trail.formula();
        let decision = &self.params.decision;
        let mut best_var = component.vars[0];
        let mut best_score = f64::NEG_INFINITY;
        for &var in &component.vars {
            let t = formula.time(var).unwrap_or(0.0);
            let score = *self
                .time_only_memo
                .entry(t.to_bits())
                .or_insert_with(|| decision.forward(&[t])[0]);
            if score > best_score {
                best_score = score;
                best_var = var;
            }
        }
        Literal::positive(best_var)
    }
}

impl BranchingHeuristic for GnnPolicy {
    /// Panics if the formula lacks time annotations the config requires;
    /// callers validate once up front with [`GnnPolicy::check_formula`].
    fn pick(&mut self, trail: &Trail<'_>, component: &Component, _step: u64) -> Literal {
        if self.params.config.time_only {
            return self.pick_time_only(trail, component);
        }
        let lig = build_lig(component, trail);
        let features = build_features(&lig, trail, &self.params.config)
            .expect("formula featurization was validated before solving");
        let scores = gnn_forward(&lig, &self.params, &features);
        select_literal(&lig, &scores)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::counting::{count_sharp, find_components, ComponentCache, SolveLimits};
    use crate::formula::parse_dimacs;
    use crate::generators::oracle_count;
    use rand::seq::SliceRandom;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn root_lig(f: &CnfFormula) -> (Trail<'_>, Lig) {
        let trail = Trail::new(f);
        let root = Component::root(&trail);
        let comps = find_components(&trail, &root);
        assert_eq!(comps.len(), 1, "test formulas here must be connected");
        let lig = build_lig(&comps[0], &trail);
        (trail, lig)
    }

    fn random_connected_formula(rng: &mut ChaCha8Rng) -> CnfFormula {
        // A random cycle of binary clauses keeps the graph connected, plus a
        // few extra random clauses for texture.
        let n = rng.random_range(3..=8u32);
        let mut clauses: Vec<Vec<Literal>> = (0..n)
            .map(|i| {
                vec![
                    Literal::new(i + 1, rng.random_bool(0.5)),
                    Literal::new((i + 1) % n + 1, rng.random_bool(0.5)),
                ]
            })
            .collect();
        for _ in 0..rng.random_range(0..3usize) {
            let w = rng.random_range(2..=3.min(n) as usize);
            let vars = rand::seq::index::sample(rng, n as usize, w);
            clauses.push(
                vars.into_iter()
                    .map(|v| Literal::new(v as u32 + 1, rng.random_bool(0.5)))
                    .collect(),
            );
        }
        CnfFormula::new(n, clauses)
    }

    #[test]
    fn zero_params_tie_break_to_first_positive_literal() {
        let f = parse_dimacs("p cnf 3 2\n1 2 0\n-2 3 0\n").unwrap();
        let (trail, lig) = root_lig(&f);
        let params = PolicyParams::zeros(PolicyConfig::default());
        let features = build_features(&lig, &trail, &params.config).unwrap();
        let scores = gnn_forward(&lig, &params, &features);
        assert!(scores.iter().all(|&s| s == scores[0]));
        assert_eq!(select_literal(&lig, &scores), Literal::positive(1));
    }

    #[test]
    fn select_literal_prefers_highest_then_tie_breaks() {
        let f = parse_dimacs("p cnf 2 1\n1 2 0\n").unwrap();
        let (_trail, lig) = root_lig(&f);
        assert_eq!(
            select_literal(&lig, &[0.1, 0.9, 0.0, 0.0]),
            Literal::negative(1)
        );
        assert_eq!(
            select_literal(&lig, &[1.0, 1.0, 1.0, 1.0]),
            Literal::positive(1)
        );
        // Positive scaling never changes the winner.
        let scores = [0.3, -0.2, 0.7, 0.1];
        let scaled: Vec<f64> = scores.iter().map(|s| s * 42.0).collect();
        assert_eq!(select_literal(&lig, &scores), select_literal(&lig, &scaled));
    }

    #[test]
    fn negating_every_literal_swaps_scores_within_each_variable() {
        let mut rng = ChaCha8Rng::seed_from_u64(20);
        for case in 0..100 {
            let f = random_connected_formula(&mut rng);
            let negated = CnfFormula::new(
                f.num_vars(),
                f.clauses()
                    .iter()
                    .map(|c| c.literals().iter().map(|&l| !l).collect())
                    .collect::<Vec<_>>(),
            );
            let config = if case % 2 == 0 {
                PolicyConfig::default()
            } else {
                PolicyConfig {
                    use_score_feature: true,
                    ..PolicyConfig::default()
                }
            };
            let params = PolicyParams::init(config, case);
            let (ta, la) = root_lig(&f);
            let (tb, lb) = root_lig(&negated);
            let sa = gnn_forward(&la, &params, &build_features(&la, &ta, &config).unwrap());
            let sb = gnn_forward(&lb, &params, &build_features(&lb, &tb, &config).unwrap());
            for node in 0..sa.len() {
                assert!(
                    (sa[node] - sb[node ^ 1]).abs() <= 1e-9,
                    "case {case}: node {node} score {} vs negated complement {}",
                    sa[node],
                    sb[node ^ 1]
                );
            }
        }
    }

    #[test]
    fn permuting_variables_permutes_scores() {
        let mut rng = ChaCha8Rng::seed_from_u64(21);
        for case in 0..100 {
            let f = random_connected_formula(&mut rng);
            let n = f.num_vars();
            let mut perm: Vec<u32> = (1..=n).collect();
            perm.shuffle(&mut rng);
            // var v in f becomes perm[v-1] in g
            let g = CnfFormula::new(
                n,
                f.clauses()
                    .iter()
                    .map(|c| {
                        c.literals()
                            .iter()
                            .map(|l| Literal::new(perm[l.var() as usize - 1], l.is_positive()))
                            .collect()
                    })
                    .collect::<Vec<_>>(),
            );
            let config = PolicyConfig::default();
            let params = PolicyParams::init(config, 1000 + case);
            let (ta, la) = root_lig(&f);
            let (tb, lb) = root_lig(&g);
            let sa = gnn_forward(&la, &params, &build_features(&la, &ta, &config).unwrap());
            let sb = gnn_forward(&lb, &params, &build_features(&lb, &tb, &config).unwrap());
            for node in 0..sa.len() {
                let lit = la.literal_of_node(node);
                let mapped = Literal::new(perm[lit.var() as usize - 1], lit.is_positive());
                let there = lb.node_of_literal(mapped);
                assert!(
                    (sa[node] - sb[there]).abs() <= 1e-9,
                    "case {case}: literal {lit} vs {mapped}"
                );
            }
        }
    }

    #[test]
    fn forward_is_deterministic() {
        let f = parse_dimacs("p cnf 4 3\n1 -2 0\n2 3 0\n-3 4 0\n").unwrap();
        let params = PolicyParams::init(PolicyConfig::default(), 5);
        let (trail, lig) = root_lig(&f);
        let features = build_features(&lig, &trail, &params.config).unwrap();
        let a = gnn_forward(&lig, &params, &features);
        let b = gnn_forward(&lig, &params, &features);
        assert_eq!(a, b);
    }

    #[test]
    fn missing_time_annotations_error_names_a_variable() {
        let f = parse_dimacs("p cnf 3 1\n1 2 0\n").unwrap();
        let config = PolicyConfig {
            use_time: true,
            ..PolicyConfig::default()
        };
        let (trail, lig) = root_lig(&f);
        assert_eq!(
            build_features(&lig, &trail, &config).unwrap_err(),
            PolicyError::MissingTime(1)
        );
        let policy = GnnPolicy::new(PolicyParams::zeros(config));
        assert!(policy.check_formula(&f).is_err());
    }

    #[test]
    fn partially_annotated_formulas_default_missing_times_to_zero() {
        let mut f = parse_dimacs("p cnf 3 1\n1 2 0\n").unwrap();
        f.set_time(2, 0.5);
        let config = PolicyConfig {
            use_time: true,
            ..PolicyConfig::default()
        };
        let (trail, lig) = root_lig(&f);
        let features = build_features(&lig, &trail, &config).unwrap();
        assert_eq!(features.time, vec![0.0, 0.5]);
    }

    #[test]
    fn time_only_selection_ignores_clause_shuffles_and_matches_generic_path() {
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        for case in 0..20 {
            let mut f = random_connected_formula(&mut rng);
            for v in 1..=f.num_vars() {
                f.set_time(v, rng.random_range(0.0..1.0));
            }
            let params = PolicyParams::init(PolicyConfig::time_only(), case);
            let (trail, lig) = root_lig(&f);
            let features = build_features(&lig, &trail, &params.config).unwrap();
            let generic = select_literal(&lig, &gnn_forward(&lig, &params, &features));
            let mut policy = GnnPolicy::new(params.clone());
            let root = Component::root(&trail);
            let comps = find_components(&trail, &root);
            let fast = policy.pick(&trail, &comps[0], 0);
            assert_eq!(fast, generic);

            // Shuffle clause order: clause ids change, selection must not.
            let mut clauses: Vec<Vec<Literal>> =
                f.clauses().iter().map(|c| c.literals().to_vec()).collect();
            clauses.shuffle(&mut rng);
            let mut g = CnfFormula::new(f.num_vars(), clauses);
            for v in 1..=f.num_vars() {
                g.set_time(v, f.time(v).unwrap());
            }
            let trail_g = Trail::new(&g);
            let root_g = Component::root(&trail_g);
            let comps_g = find_components(&trail_g, &root_g);
            let mut policy_g = GnnPolicy::new(params);
            assert_eq!(policy_g.pick(&trail_g, &comps_g[0], 0), fast);
        }
    }

    #[test]
    fn policy_heuristic_counts_exactly() {
        let mut rng = ChaCha8Rng::seed_from_u64(30);
        for case in 0..20 {
            let f = random_connected_formula(&mut rng);
            let expected = oracle_count(&f).unwrap();
            let config = if case % 2 == 0 {
                PolicyConfig::default()
            } else {
                PolicyConfig {
                    use_score_feature: true,
                    ..PolicyConfig::default()
                }
            };
            let mut policy = GnnPolicy::new(PolicyParams::init(config, case));
            let got = count_sharp(
                &f,
                &mut policy,
                &mut ComponentCache::unbounded(),
                &SolveLimits::default(),
            );
            assert_eq!(got.count, expected, "case {case}");
        }
    }
}
