//! Dense feed-forward network with manual forward and reverse passes.
//!
//! The architecture is fixed to two rectified hidden layers of 64 and 128
//! units between linear input and output layers. Weights are row-major
//! `(out, in)`. A batched path exists for minibatch regression; it computes
//! the same quantities as the per-sample path with cache-friendlier loops.

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Result, SimError};

/// Hidden layer widths used by every function approximator in the framework.
pub const HIDDEN_DIMS: [usize; 2] = [64, 128];

/// Weights and biases of a dense network.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct MlpParams {
    /// Layer dimensions: input, hidden..., output.
    pub dims: Vec<usize>,
    /// Row-major weight matrices, one per layer, shape (dims[l+1], dims[l]).
    pub weights: Vec<Vec<f64>>,
    /// Bias vectors, one per layer.
    pub biases: Vec<Vec<f64>>,
}

impl MlpParams {
    /// Glorot-uniform initialization in +-sqrt(6 / (fan_in + fan_out)).
    pub fn init<R: Rng>(input: usize, output: usize, rng: &mut R) -> Self {
        let dims = vec![input, HIDDEN_DIMS[0], HIDDEN_DIMS[1], output];
        let mut weights = Vec::new();
        let mut biases = Vec::new();
        for l in 0..dims.len() - 1 {
            let (fan_in, fan_out) = (dims[l], dims[l + 1]);
            let bound = (6.0 / (fan_in + fan_out) as f64).sqrt();
            weights.push(
                (0..fan_in * fan_out)
                    .map(|_| rng.gen_range(-bound..bound))
                    .collect(),
            );
            biases.push(vec![0.0; fan_out]);
        }
        Self { dims, weights, biases }
    }

    pub fn zeros(input: usize, output: usize) -> Self {
        let dims = vec![input, HIDDEN_DIMS[0], HIDDEN_DIMS[1], output];
        let weights = (0..3).map(|l| vec![0.0; dims[l] * dims[l + 1]]).collect();
        let biases = (0..3).map(|l| vec![0.0; dims[l + 1]]).collect();
        Self { dims, weights, biases }
    }

    pub fn num_layers(&self) -> usize {
        self.dims.len() - 1
    }

    pub fn num_params(&self) -> usize {
        self.weights.iter().map(Vec::len).sum::<usize>()
            + self.biases.iter().map(Vec::len).sum::<usize>()
    }

    fn check_input(&self, input: &[f64]) -> Result<()> {
        if input.len() != self.dims[0] {
            return Err(SimError::Contract(format!(
                "input length {} does not match network input dim {}",
                input.len(),
                self.dims[0]
            )));
        }
        Ok(())
    }
}

/// Parameter gradients shaped like [`MlpParams`].
#[derive(Debug, Clone)]
pub struct Gradients {
    pub d_weights: Vec<Vec<f64>>,
    pub d_biases: Vec<Vec<f64>>,
}

impl Gradients {
    pub fn zeros_like(params: &MlpParams) -> Self {
        Self {
            d_weights: params.weights.iter().map(|w| vec![0.0; w.len()]).collect(),
            d_biases: params.biases.iter().map(|b| vec![0.0; b.len()]).collect(),
        }
    }

    pub fn scale(&mut self, c: f64) {
        for w in &mut self.d_weights {
            for v in w {
                *v *= c;
            }
        }
        for b in &mut self.d_biases {
            for v in b {
                *v *= c;
            }
        }
    }
}

/// Forward pass: rectified hidden layers, linear output.
pub fn forward(params: &MlpParams, input: &[f64]) -> Result<Vec<f64>> {
    params.check_input(input)?;
    let mut act = input.to_vec();
    let layers = params.num_layers();
    for l in 0..layers {
        act = layer_forward(params, l, &act, l + 1 < layers);
    }
    Ok(act)
}

fn layer_forward(params: &MlpParams, l: usize, input: &[f64], relu: bool) -> Vec<f64> {
    let (n_in, n_out) = (params.dims[l], params.dims[l + 1]);
    let w = &params.weights[l];
    let mut out = params.biases[l].clone();
    for (o, out_v) in out.iter_mut().enumerate().take(n_out) {
        let row = &w[o * n_in..(o + 1) * n_in];
        let mut acc = 0.0;
        for (x, wv) in input.iter().zip(row) {
            acc += x * wv;
        }
        *out_v += acc;
        if relu && *out_v < 0.0 {
            *out_v = 0.0;
        }
    }
    out
}

/// Reverse pass: exact gradients of the forward map. Recomputes the forward
/// activations internally, then backpropagates `upstream` (the gradient of a
/// scalar objective with respect to the network output). Returns parameter
/// gradients and the gradient with respect to the input.
pub fn backward(
    params: &MlpParams,
    input: &[f64],
    upstream: &[f64],
) -> Result<(Gradients, Vec<f64>)> {
    params.check_input(input)?;
    let layers = params.num_layers();
    if upstream.len() != params.dims[layers] {
        return Err(SimError::Contract(format!(
            "upstream length {} does not match output dim {}",
            upstream.len(),
            params.dims[layers]
        )));
    }

    // forward with stored pre-activation signs / activations
    let mut acts: Vec<Vec<f64>> = vec![input.to_vec()];
    for l in 0..layers {
        let a = layer_forward(params, l, &acts[l], l + 1 < layers);
        acts.push(a);
    }

    let mut grads = Gradients::zeros_like(params);
    let mut delta = upstream.to_vec();
    for l in (0..layers).rev() {
        let (n_in, n_out) = (params.dims[l], params.dims[l + 1]);
        // hidden layers: gate by the rectifier (activation 0 means inactive)
        if l + 1 < layers {
            for (d, &a) in delta.iter_mut().zip(&acts[l + 1]) {
                if a <= 0.0 {
                    *d = 0.0;
                }
            }
        }
        let dw = &mut grads.d_weights[l];
        let input_act = &acts[l];
        for o in 0..n_out {
            let d = delta[o];
            grads.d_biases[l][o] = d;
            if d != 0.0 {
                let row = &mut dw[o * n_in..(o + 1) * n_in];
                for (slot, &x) in row.iter_mut().zip(input_act) {
                    *slot = d * x;
                }
            }
        }
        // propagate to the layer input
        let mut next = vec![0.0; n_in];
        let w = &params.weights[l];
        for o in 0..n_out {
            let d = delta[o];
            if d != 0.0 {
                let row = &w[o * n_in..(o + 1) * n_in];
                for (nv, &wv) in next.iter_mut().zip(row) {
                    *nv += d * wv;
                }
            }
        }
        delta = next;
    }
    Ok((grads, delta))
}

/// Batched forward pass over `inputs` laid out row-major (rows, input_dim).
/// Returns outputs (rows, output_dim) plus all intermediate activations for
/// the matching [`backward_batch`] call.
pub struct BatchTrace {
    pub rows: usize,
    /// Activations per layer boundary; acts[0] is the input matrix.
    pub acts: Vec<Vec<f64>>,
}

pub fn forward_batch(params: &MlpParams, inputs: &[f64], rows: usize) -> Result<BatchTrace> {
    if inputs.len() != rows * params.dims[0] {
        return Err(SimError::Contract("batched input shape mismatch".into()));
    }
    let layers = params.num_layers();
    let mut acts = vec![inputs.to_vec()];
    for l in 0..layers {
        let (n_in, n_out) = (params.dims[l], params.dims[l + 1]);
        let prev = &acts[l];
        let w = &params.weights[l];
        let b = &params.biases[l];
        let mut out = vec![0.0; rows * n_out];
        for r in 0..rows {
            let x = &prev[r * n_in..(r + 1) * n_in];
            let y = &mut out[r * n_out..(r + 1) * n_out];
            y.copy_from_slice(b);
            for (i, &xv) in x.iter().enumerate() {
                if xv != 0.0 {
                    // column walk: w[o * n_in + i]
                    for (o, yv) in y.iter_mut().enumerate() {
                        *yv += xv * w[o * n_in + i];
                    }
                }
            }
            if l + 1 < layers {
                for yv in y.iter_mut() {
                    if *yv < 0.0 {
                        *yv = 0.0;
                    }
                }
            }
        }
        acts.push(out);
    }
    Ok(BatchTrace { rows, acts })
}

/// Batched reverse pass; `upstream` is (rows, output_dim). Returns gradient
/// sums over the batch (callers scale by 1/rows for a mean).
pub fn backward_batch(
    params: &MlpParams,
    trace: &BatchTrace,
    upstream: &[f64],
) -> Result<Gradients> {
    let layers = params.num_layers();
    let rows = trace.rows;
    if upstream.len() != rows * params.dims[layers] {
        return Err(SimError::Contract("batched upstream shape mismatch".into()));
    }
    let mut grads = Gradients::zeros_like(params);
    let mut delta = upstream.to_vec();
    for l in (0..layers).rev() {
        let (n_in, n_out) = (params.dims[l], params.dims[l + 1]);
        if l + 1 < layers {
            for (d, &a) in delta.iter_mut().zip(&trace.acts[l + 1]) {
                if a <= 0.0 {
                    *d = 0.0;
                }
            }
        }
        let dw = &mut grads.d_weights[l];
        let db = &mut grads.d_biases[l];
        let prev = &trace.acts[l];
        for r in 0..rows {
            let d_row = &delta[r * n_out..(r + 1) * n_out];
            let x = &prev[r * n_in..(r + 1) * n_in];
            for (o, &d) in d_row.iter().enumerate() {
                if d != 0.0 {
                    db[o] += d;
                    let slot = &mut dw[o * n_in..(o + 1) * n_in];
                    for (sv, &xv) in slot.iter_mut().zip(x) {
                        *sv += d * xv;
                    }
                }
            }
        }
        let w = &params.weights[l];
        let mut next = vec![0.0; rows * n_in];
        for r in 0..rows {
            let d_row = &delta[r * n_out..(r + 1) * n_out];
            let n_row = &mut next[r * n_in..(r + 1) * n_in];
            for (o, &d) in d_row.iter().enumerate() {
                if d != 0.0 {
                    let w_row = &w[o * n_in..(o + 1) * n_in];
                    for (nv, &wv) in n_row.iter_mut().zip(w_row) {
                        *nv += d * wv;
                    }
                }
            }
        }
        delta = next;
    }
    Ok(grads)
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    /// Straight-line matrix-arithmetic oracle for the forward pass.
    fn forward_oracle(params: &MlpParams, input: &[f64]) -> Vec<f64> {
        let mut act = input.to_vec();
        for l in 0..params.num_layers() {
            let (n_in, n_out) = (params.dims[l], params.dims[l + 1]);
            let mut out = vec![0.0; n_out];
            for o in 0..n_out {
                let mut acc = params.biases[l][o];
                for i in 0..n_in {
                    acc += params.weights[l][o * n_in + i] * act[i];
                }
                out[o] = if l + 1 < params.num_layers() { acc.max(0.0) } else { acc };
            }
            act = out;
        }
        act
    }

    #[test]
    fn zero_params_zero_output() {
        let params = MlpParams::zeros(4, 3);
        let out = forward(&params, &[1.0, -2.0, 0.5, 3.0]).unwrap();
        assert_eq!(out, vec![0.0; 3]);
    }

    #[test]
    fn linear_composition_in_active_region() {
        // Single positive path: weight 2 through both hidden layers, 0.5 out.
        let mut params = MlpParams::zeros(1, 1);
        params.weights[0][0] = 2.0;
        params.weights[1][0] = 2.0;
        params.weights[2][0] = 0.5;
        let out = forward(&params, &[3.0]).unwrap();
        assert!((out[0] - 3.0 * 2.0 * 2.0 * 0.5).abs() < 1e-15);
    }

    #[test]
    fn forward_matches_oracle() {
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        let params = MlpParams::init(6, 4, &mut rng);
        for _ in 0..20 {
            let input: Vec<f64> = (0..6).map(|_| rng.gen_range(-2.0..2.0)).collect();
            let ours = forward(&params, &input).unwrap();
            let oracle = forward_oracle(&params, &input);
            for (a, b) in ours.iter().zip(&oracle) {
                assert!((a - b).abs() <= 1e-12 * (1.0 + b.abs()));
            }
        }
    }

    #[test]
    fn forward_rejects_bad_input_dim() {
        let params = MlpParams::zeros(4, 2);
        assert!(forward(&params, &[0.0; 3]).is_err());
    }

    #[test]
    fn backward_zero_upstream_zero_grads() {
        let mut rng = ChaCha8Rng::seed_from_u64(10);
        let params = MlpParams::init(5, 3, &mut rng);
        let input: Vec<f64> = (0..5).map(|_| rng.gen_range(-1.0..1.0)).collect();
        let (grads, din) = backward(&params, &input, &[0.0; 3]).unwrap();
        assert!(grads.d_weights.iter().flatten().all(|&g| g == 0.0));
        assert!(grads.d_biases.iter().flatten().all(|&g| g == 0.0));
        assert!(din.iter().all(|&g| g == 0.0));
    }

    #[test]
    fn backward_is_linear_in_upstream() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        let params = MlpParams::init(5, 2, &mut rng);
        let input: Vec<f64> = (0..5).map(|_| rng.gen_range(-1.0..1.0)).collect();
        let (g1, _) = backward(&params, &input, &[0.3, -0.7]).unwrap();
        let (g2, _) = backward(&params, &input, &[0.6, -1.4]).unwrap();
        for (a, b) in g1.d_weights.iter().flatten().zip(g2.d_weights.iter().flatten()) {
            assert!((2.0 * a - b).abs() < 1e-12 * (1.0 + b.abs()));
        }
    }

    #[test]
    fn backward_matches_central_differences() {
        let mut rng = ChaCha8Rng::seed_from_u64(12);
        let mut params = MlpParams::init(4, 1, &mut rng);
        let input: Vec<f64> = (0..4).map(|_| rng.gen_range(-1.0..1.0)).collect();
        let (grads, _) = backward(&params, &input, &[1.0]).unwrap();
        let h = 1e-5;
        let mut worst: f64 = 0.0;
        for l in 0..3 {
            for k in (0..params.weights[l].len()).step_by(17) {
                let orig = params.weights[l][k];
                params.weights[l][k] = orig + h;
                let fp = forward(&params, &input).unwrap()[0];
                params.weights[l][k] = orig - h;
                let fm = forward(&params, &input).unwrap()[0];
                params.weights[l][k] = orig;
                let numeric = (fp - fm) / (2.0 * h);
                let analytic = grads.d_weights[l][k];
                let denom = analytic.abs().max(numeric.abs()).max(1e-6);
                worst = worst.max((analytic - numeric).abs() / denom);
            }
        }
        assert!(worst <= 1e-4, "max relative error {worst}");
    }

    #[test]
    fn batch_paths_match_per_sample() {
        let mut rng = ChaCha8Rng::seed_from_u64(13);
        let params = MlpParams::init(5, 3, &mut rng);
        let rows = 7;
        let inputs: Vec<f64> = (0..rows * 5).map(|_| rng.gen_range(-1.5..1.5)).collect();
        let upstream: Vec<f64> = (0..rows * 3).map(|_| rng.gen_range(-1.0..1.0)).collect();

        let trace = forward_batch(&params, &inputs, rows).unwrap();
        let batched = backward_batch(&params, &trace, &upstream).unwrap();

        let mut summed = Gradients::zeros_like(&params);
        for r in 0..rows {
            let x = &inputs[r * 5..(r + 1) * 5];
            let out = forward(&params, x).unwrap();
            let bout = &trace.acts[3][r * 3..(r + 1) * 3];
            for (a, b) in out.iter().zip(bout) {
                assert!((a - b).abs() < 1e-12);
            }
            let (g, _) = backward(&params, x, &upstream[r * 3..(r + 1) * 3]).unwrap();
            for l in 0..3 {
                for (s, v) in summed.d_weights[l].iter_mut().zip(&g.d_weights[l]) {
                    *s += v;
                }
                for (s, v) in summed.d_biases[l].iter_mut().zip(&g.d_biases[l]) {
                    *s += v;
                }
            }
        }
        for l in 0..3 {
            for (a, b) in batched.d_weights[l].iter().zip(&summed.d_weights[l]) {
                assert!((a - b).abs() < 1e-9 * (1.0 + b.abs()), "{a} vs {b}");
            }
        }
    }
}
