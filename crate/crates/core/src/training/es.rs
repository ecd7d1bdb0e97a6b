//! Evolution-strategies machinery: rank normalization and the gradient
//! estimate from mirrored perturbations.

/// Maps fitnesses to centered uniform ranks: worst gets -0.5, best +0.5,
/// rank/(n-1) - 0.5 in between; ties share the average of their ranks. The
/// output always sums to zero, which makes the update invariant to adding a
/// constant to every fitness.
pub fn rank_normalize(fitnesses: &[f64]) -> Vec<f64> {
    let n = fitnesses.len();
    assert!(n >= 2, "rank normalization needs at least two fitnesses");
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| fitnesses[a].total_cmp(&fitnesses[b]));
    let mut weights = vec![0.0; n];
    let mut start = 0;
    while start < n {
        let mut end = start + 1;
        while end < n && fitnesses[order[end]] == fitnesses[order[start]] {
            end += 1;
        }
        let avg_rank = (start + end - 1) as f64 / 2.0;
        let w = avg_rank / (n - 1) as f64 - 0.5;
        for &i in &order[start..end] {
            weights[i] = w;
        }
        start = end;
    }
    weights
}

/// Gradient estimate from mirrored sampling: offspring `2j` evaluated at
/// `theta + sigma*eps_j`, offspring `2j+1` at `theta - sigma*eps_j`, so
/// `g = (1/(n*sigma)) * sum_j (w_{2j} - w_{2j+1}) * eps_j` with `n` the total
/// offspring count.
pub fn es_gradient(directions: &[Vec<f64>], weights: &[f64], sigma: f64) -> Vec<f64> {
    assert!(!directions.is_empty(), "need at least one direction");
    assert_eq!(
        weights.len(),
        2 * directions.len(),
        "one weight per mirrored offspring"
    );
    assert!(sigma > 0.0);
    let dim = directions[0].len();
    let n = weights.len() as f64;
    let mut g = vec![0.0; dim];
    for (j, eps) in directions.iter().enumerate() {
        assert_eq!(eps.len(), dim, "direction {j} has the wrong length");
        let w = weights[2 * j] - weights[2 * j + 1];
        if w == 0.0 {
            continue;
        }
        for (gi, ei) in g.iter_mut().zip(eps) {
            *gi += w * ei;
        }
    }
    for gi in g.iter_mut() {
        *gi /= n * sigma;
    }
    g
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;
    use rand_distr::{Distribution, StandardNormal};

    #[test]
    fn rank_normalize_matches_worked_example() {
        assert_eq!(rank_normalize(&[3.0, 1.0, 2.0]), vec![0.5, -0.5, 0.0]);
    }

    #[test]
    fn equal_fitnesses_normalize_to_zeros() {
        assert_eq!(rank_normalize(&[0.7; 5]), vec![0.0; 5]);
    }

    #[test]
    fn tied_pair_shares_average_rank() {
        // Ranks: 1.0 and 1.0 tie for ranks {1,2} -> 1.5; n=4.
        let w = rank_normalize(&[0.0, 1.0, 1.0, 2.0]);
        assert_eq!(w[0], -0.5);
        assert_eq!(w[1], 0.0);
        assert_eq!(w[2], 0.0);
        assert_eq!(w[3], 0.5);
    }

    #[test]
    fn rank_weights_sum_to_zero_and_stay_bounded() {
        let mut rng = ChaCha8Rng::seed_from_u64(8);
        for _ in 0..50 {
            let n = rand::Rng::random_range(&mut rng, 2..40usize);
            let f: Vec<f64> = (0..n)
                .map(|_| StandardNormal.sample(&mut rng))
                .collect();
            let w = rank_normalize(&f);
            let sum: f64 = w.iter().sum();
            assert!(sum.abs() < 1e-12);
            assert!(w.iter().all(|x| (-0.5..=0.5).contains(x)));
        }
    }

    #[test]
    #[should_panic(expected = "at least two")]
    fn rank_normalize_rejects_singletons() {
        rank_normalize(&[1.0]);
    }

    #[test]
    fn equal_mirror_fitness_contributes_nothing() {
        let directions = vec![vec![1.0, -2.0], vec![0.5, 0.5]];
        // First pair tied, second pair split.
        let weights = rank_normalize(&[1.0, 1.0, 2.0, 0.0]);
        let g = es_gradient(&directions, &weights, 0.1);
        // Only direction 1 contributes: (0.5 - (-0.5))/ (4*0.1) * eps.
        assert!((g[0] - 0.5 / 0.4).abs() < 1e-12);
        assert!((g[1] - 0.5 / 0.4).abs() < 1e-12);
    }

    #[test]
    fn single_pair_basis_vector_example() {
        let g = es_gradient(&[vec![1.0, 0.0]], &[0.5, -0.5], 0.02);
        // (1/(2*sigma)) * (0.5 - (-0.5)) * e1 = e1 / (2*sigma)
        assert_eq!(g, vec![1.0 / 0.04, 0.0]);
    }

    #[test]
    fn gradient_points_toward_origin_on_quadratic_fitness() {
        let mut rng = ChaCha8Rng::seed_from_u64(77);
        let dim = 6;
        let theta: Vec<f64> = (0..dim).map(|i| (i as f64) - 2.5).collect();
        let sigma = 0.1;
        let fitness = |x: &[f64]| -x.iter().map(|v| v * v).sum::<f64>();
        let mut directions = Vec::new();
        let mut fits = Vec::new();
        for _ in 0..1000 {
            let eps: Vec<f64> = (0..dim).map(|_| StandardNormal.sample(&mut rng)).collect();
            let plus: Vec<f64> = theta.iter().zip(&eps).map(|(t, e)| t + sigma * e).collect();
            let minus: Vec<f64> = theta.iter().zip(&eps).map(|(t, e)| t - sigma * e).collect();
            fits.push(fitness(&plus));
            fits.push(fitness(&minus));
            directions.push(eps);
        }
        let g = es_gradient(&directions, &rank_normalize(&fits), sigma);
        let dot: f64 = g.iter().zip(&theta).map(|(a, b)| a * b).sum();
        assert!(dot < 0.0, "ascent direction must reduce the norm, dot = {dot}");
    }

    #[test]
    fn offspring_order_within_pairs_is_what_matters() {
        // Permuting the direction list (with its weight pairs) leaves g unchanged.
        let d1 = vec![vec![1.0, 0.0], vec![0.0, 1.0]];
        let w1 = vec![0.5, -0.5, -0.1, 0.1];
        let d2 = vec![vec![0.0, 1.0], vec![1.0, 0.0]];
        let w2 = vec![-0.1, 0.1, 0.5, -0.5];
        assert_eq!(es_gradient(&d1, &w1, 0.5), es_gradient(&d2, &w2, 0.5));
    }
}
