//! Adam optimizer with bias correction and an ascent mode.

use serde::{Deserialize, Serialize};

use super::mlp::{Gradients, MlpParams};
use crate::error::{Result, SimError};

/// First/second moment accumulators plus hyper-parameters.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct AdamState {
    pub learning_rate: f64,
    pub beta1: f64,
    pub beta2: f64,
    pub epsilon: f64,
    pub step_count: u64,
    m_weights: Vec<Vec<f64>>,
    v_weights: Vec<Vec<f64>>,
    m_biases: Vec<Vec<f64>>,
    v_biases: Vec<Vec<f64>>,
}

impl AdamState {
    pub fn new(params: &MlpParams, learning_rate: f64) -> Self {
        Self {
            learning_rate,
            beta1: 0.9,
            beta2: 0.999,
            epsilon: 1e-8,
            step_count: 0,
            m_weights: params.weights.iter().map(|w| vec![0.0; w.len()]).collect(),
            v_weights: params.weights.iter().map(|w| vec![0.0; w.len()]).collect(),
            m_biases: params.biases.iter().map(|b| vec![0.0; b.len()]).collect(),
            v_biases: params.biases.iter().map(|b| vec![0.0; b.len()]).collect(),
        }
    }
}

/// One bias-corrected Adam update. `maximize` flips the gradient so the step
/// ascends the objective instead of descending it.
pub fn adam_step(
    params: &mut MlpParams,
    grads: &Gradients,
    state: &mut AdamState,
    maximize: bool,
) -> Result<()> {
    if grads.d_weights.len() != params.weights.len() {
        return Err(SimError::Contract("gradient/parameter layer mismatch".into()));
    }
    state.step_count += 1;
    let t = state.step_count as i32;
    let bc1 = 1.0 - state.beta1.powi(t);
    let bc2 = 1.0 - state.beta2.powi(t);
    let sign = if maximize { -1.0 } else { 1.0 };

    let mut update = |theta: &mut [f64], g: &[f64], m: &mut [f64], v: &mut [f64]| {
        for i in 0..theta.len() {
            let grad = sign * g[i];
            m[i] = state.beta1 * m[i] + (1.0 - state.beta1) * grad;
            v[i] = state.beta2 * v[i] + (1.0 - state.beta2) * grad * grad;
            let m_hat = m[i] / bc1;
            let v_hat = v[i] / bc2;
            theta[i] -= state.learning_rate * m_hat / (v_hat.sqrt() + state.epsilon);
        }
    };

    for l in 0..params.weights.len() {
        update(
            &mut params.weights[l],
            &grads.d_weights[l],
            &mut state.m_weights[l],
            &mut state.v_weights[l],
        );
        update(
            &mut params.biases[l],
            &grads.d_biases[l],
            &mut state.m_biases[l],
            &mut state.v_biases[l],
        );
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn zero_gradient_keeps_parameters() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let mut params = MlpParams::init(3, 2, &mut rng);
        let before = params.clone();
        let grads = Gradients::zeros_like(&params);
        let mut state = AdamState::new(&params, 1e-4);
        adam_step(&mut params, &grads, &mut state, false).unwrap();
        assert_eq!(state.step_count, 1);
        for l in 0..3 {
            assert_eq!(params.weights[l], before.weights[l]);
            assert_eq!(params.biases[l], before.biases[l]);
        }
    }

    #[test]
    fn first_step_moves_against_gradient_sign() {
        // One-step Adam arithmetic: m_hat = g, v_hat = g^2, so the update is
        // -lr * g / (|g| + eps), i.e. approximately -lr * sign(g).
        let mut params = MlpParams::zeros(2, 1);
        let mut grads = Gradients::zeros_like(&params);
        grads.d_weights[0][0] = 0.37;
        grads.d_weights[0][1] = -4.1;
        let mut state = AdamState::new(&params, 1e-4);
        adam_step(&mut params, &grads, &mut state, false).unwrap();
        assert!((params.weights[0][0] - (-1e-4)).abs() < 1e-9);
        assert!((params.weights[0][1] - 1e-4).abs() < 1e-9);
    }

    #[test]
    fn maximize_flips_first_step() {
        let mut params = MlpParams::zeros(2, 1);
        let mut grads = Gradients::zeros_like(&params);
        grads.d_weights[0][0] = 0.37;
        let mut state = AdamState::new(&params, 1e-4);
        adam_step(&mut params, &grads, &mut state, true).unwrap();
        assert!((params.weights[0][0] - 1e-4).abs() < 1e-9);
    }

    #[test]
    fn first_step_sign_invariant_to_gradient_scale() {
        for scale in [1e-6, 1.0, 1e6] {
            let mut params = MlpParams::zeros(2, 1);
            let mut grads = Gradients::zeros_like(&params);
            grads.d_weights[0][0] = 2.0 * scale;
            grads.d_weights[0][1] = -0.5 * scale;
            let mut state = AdamState::new(&params, 1e-4);
            adam_step(&mut params, &grads, &mut state, false).unwrap();
            assert!(params.weights[0][0] < 0.0);
            assert!(params.weights[0][1] > 0.0);
        }
    }
}
