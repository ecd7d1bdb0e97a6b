//! Dense multilayer perceptrons in f64, forward only.
//!
//! ReLU on hidden layers, linear output. ES never needs gradients, so there
//! is no backward pass anywhere in this crate.

/// One dense layer; weights are row-major `out_dim x in_dim`.
#[derive(Debug, Clone, PartialEq)]
pub struct Layer {
    pub w: Vec<f64>,
    pub b: Vec<f64>,
    pub in_dim: usize,
    pub out_dim: usize,
}

impl Layer {
    pub fn zeros(in_dim: usize, out_dim: usize) -> Layer {
        Layer {
            w: vec![0.0; in_dim * out_dim],
            b: vec![0.0; out_dim],
            in_dim,
            out_dim,
        }
    }

    fn forward(&self, input: &[f64], out: &mut Vec<f64>) {
        debug_assert_eq!(input.len(), self.in_dim);
        out.clear();
        for o in 0..self.out_dim {
            let row = &self.w[o * self.in_dim..(o + 1) * self.in_dim];
            let mut acc = self.b[o];
            for (wi, xi) in row.iter().zip(input) {
                acc += wi * xi;
            }
            out.push(acc);
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Mlp {
    pub layers: Vec<Layer>,
}

impl Mlp {
    /// Zero-initialized MLP with the given layer widths, e.g. `[64, 32, 32]`.
    pub fn zeros(dims: &[usize]) -> Mlp {
        assert!(dims.len() >= 2, "an MLP needs at least one layer");
        Mlp {
            layers: dims.windows(2).map(|d| Layer::zeros(d[0], d[1])).collect(),
        }
    }

    pub fn in_dim(&self) -> usize {
        self.layers[0].in_dim
    }

    pub fn out_dim(&self) -> usize {
        self.layers.last().unwrap().out_dim
    }

    pub fn param_count(&self) -> usize {
        self.layers.iter().map(|l| l.w.len() + l.b.len()).sum()
    }

    pub fn forward(&self, input: &[f64]) -> Vec<f64> {
        assert_eq!(
            input.len(),
            self.in_dim(),
            "MLP input width {} does not match layer width {}",
            input.len(),
            self.in_dim()
        );
        let mut cur = input.to_vec();
        let mut next = Vec::new();
        for (i, layer) in self.layers.iter().enumerate() {
            layer.forward(&cur, &mut next);
            if i + 1 < self.layers.len() {
                for v in next.iter_mut() {
                    if *v < 0.0 {
                        *v = 0.0;
                    }
                }
            }
            std::mem::swap(&mut cur, &mut next);
        }
        cur
    }
}

/// GIN aggregation: `MLP((1+epsilon) * self + neighbor_sum)`.
pub fn gin_aggregate(self_vec: &[f64], neighbor_sum: &[f64], mlp: &Mlp, epsilon: f64) -> Vec<f64> {
    assert_eq!(
        self_vec.len(),
        neighbor_sum.len(),
        "gin_aggregate: self and neighbor widths differ"
    );
    let combined: Vec<f64> = self_vec
        .iter()
        .zip(neighbor_sum)
        .map(|(s, n)| (1.0 + epsilon) * s + n)
        .collect();
    mlp.forward(&combined)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn zero_mlp_maps_everything_to_zero() {
        let mlp = Mlp::zeros(&[3, 4, 2]);
        assert_eq!(mlp.forward(&[1.0, -2.0, 3.0]), vec![0.0, 0.0]);
        assert_eq!(gin_aggregate(&[1.0; 3], &[2.0; 3], &mlp, 0.5), vec![0.0, 0.0]);
    }

    #[test]
    fn relu_applies_to_hidden_layers_only() {
        // Hidden layer negates, output layer passes through: a positive input
        // is clamped at the hidden layer, a negative one survives to the end.
        let mut mlp = Mlp::zeros(&[1, 1, 1]);
        mlp.layers[0].w[0] = -1.0;
        mlp.layers[1].w[0] = 1.0;
        assert_eq!(mlp.forward(&[5.0]), vec![0.0]);
        assert_eq!(mlp.forward(&[-5.0]), vec![5.0]);
        // Output layer itself is linear: negative outputs are possible.
        mlp.layers[1].w[0] = -1.0;
        assert_eq!(mlp.forward(&[-5.0]), vec![-5.0]);
    }

    #[test]
    fn gin_aggregate_with_no_neighbors_scales_self() {
        let mut mlp = Mlp::zeros(&[2, 2]);
        mlp.layers[0].w.copy_from_slice(&[1.0, 0.0, 0.0, 1.0]);
        let out = gin_aggregate(&[2.0, -4.0], &[0.0, 0.0], &mlp, 0.5);
        assert_eq!(out, vec![3.0, -6.0]);
    }

    #[test]
    fn gin_aggregate_identity_mlp_adds_self_and_neighbors() {
        let mut mlp = Mlp::zeros(&[2, 2]);
        mlp.layers[0].w.copy_from_slice(&[1.0, 0.0, 0.0, 1.0]);
        let out = gin_aggregate(&[1.0, 2.0], &[10.0, 20.0], &mlp, 0.0);
        assert_eq!(out, vec![11.0, 22.0]);
        // Same through a two-layer identity on nonnegative values (ReLU is
        // the identity there).
        let mut deep = Mlp::zeros(&[2, 2, 2]);
        deep.layers[0].w.copy_from_slice(&[1.0, 0.0, 0.0, 1.0]);
        deep.layers[1].w.copy_from_slice(&[1.0, 0.0, 0.0, 1.0]);
        assert_eq!(gin_aggregate(&[1.0, 2.0], &[10.0, 20.0], &deep, 0.0), vec![11.0, 22.0]);
    }

    #[test]
    fn bias_reaches_output() {
        let mut mlp = Mlp::zeros(&[2, 3, 1]);
        mlp.layers[1].b[0] = 7.5;
        assert_eq!(mlp.forward(&[0.0, 0.0]), vec![7.5]);
    }

    #[test]
    #[should_panic(expected = "does not match")]
    fn input_width_mismatch_panics() {
        Mlp::zeros(&[3, 1]).forward(&[1.0]);
    }

    #[test]
    #[should_panic(expected = "widths differ")]
    fn gin_dimension_mismatch_panics() {
        gin_aggregate(&[0.0; 2], &[0.0; 3], &Mlp::zeros(&[2, 1]), 0.0);
    }
}
