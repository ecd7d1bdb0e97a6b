//! Adam with decoupled weight decay, ascent convention.

pub const ADAM_BETA1: f64 = 0.9;
pub const ADAM_BETA2: f64 = 0.999;
pub const ADAM_EPS: f64 = 1e-8;

#[derive(Debug, Clone, PartialEq)]
pub struct AdamState {
    pub m: Vec<f64>,
    pub v: Vec<f64>,
    pub t: u64,
}

impl AdamState {
    pub fn new(len: usize) -> AdamState {
        AdamState {
            m: vec![0.0; len],
            v: vec![0.0; len],
            t: 0,
        }
    }

    /// One ascent step along gradient estimate `g`, followed by the decoupled
    /// decay `theta *= 1 - lr * weight_decay`.
    pub fn step(&mut self, theta: &mut [f64], g: &[f64], lr: f64, weight_decay: f64) {
        assert_eq!(theta.len(), self.m.len(), "Adam state length mismatch");
        assert_eq!(g.len(), self.m.len(), "gradient length mismatch");
        self.t += 1;
        let bc1 = 1.0 - ADAM_BETA1.powi(self.t as i32);
        let bc2 = 1.0 - ADAM_BETA2.powi(self.t as i32);
        let shrink = 1.0 - lr * weight_decay;
        for i in 0..theta.len() {
            self.m[i] = ADAM_BETA1 * self.m[i] + (1.0 - ADAM_BETA1) * g[i];
            self.v[i] = ADAM_BETA2 * self.v[i] + (1.0 - ADAM_BETA2) * g[i] * g[i];
            let m_hat = self.m[i] / bc1;
            let v_hat = self.v[i] / bc2;
            theta[i] += lr * m_hat / (v_hat.sqrt() + ADAM_EPS);
            theta[i] *= shrink;
        }
    }
}
