//! Central-difference validation of the reverse pass.

use rand::Rng;

use super::mlp::{backward, forward, MlpParams};
use crate::error::Result;

/// Perturbation used by the probes.
pub const GRADCHECK_STEP: f64 = 1e-5;

#[derive(Clone, Copy)]
struct Coord {
    layer: usize,
    weight: bool,
    index: usize,
}

fn read(params: &MlpParams, c: Coord) -> f64 {
    if c.weight {
        params.weights[c.layer][c.index]
    } else {
        params.biases[c.layer][c.index]
    }
}

fn write(params: &mut MlpParams, c: Coord, v: f64) {
    if c.weight {
        params.weights[c.layer][c.index] = v;
    } else {
        params.biases[c.layer][c.index] = v;
    }
}

/// Probe random parameter coordinates of the scalar objective
/// J(params) = sum_k upstream[k] * output[k] and compare the analytic
/// gradient against central differences. Returns the worst relative error
/// over `probes` random coordinates.
pub fn gradient_check<R: Rng>(
    params: &MlpParams,
    input: &[f64],
    upstream: &[f64],
    probes: usize,
    rng: &mut R,
) -> Result<f64> {
    let (grads, _) = backward(params, input, upstream)?;
    let objective = |p: &MlpParams| -> Result<f64> {
        let out = forward(p, input)?;
        Ok(out.iter().zip(upstream).map(|(o, u)| o * u).sum())
    };

    let mut probed = params.clone();
    let mut worst: f64 = 0.0;
    for _ in 0..probes {
        let layer = rng.gen_range(0..params.num_layers());
        let weight = rng.gen_bool(0.8);
        let len = if weight { params.weights[layer].len() } else { params.biases[layer].len() };
        let c = Coord { layer, weight, index: rng.gen_range(0..len) };

        let orig = read(&probed, c);
        write(&mut probed, c, orig + GRADCHECK_STEP);
        let fp = objective(&probed)?;
        write(&mut probed, c, orig - GRADCHECK_STEP);
        let fm = objective(&probed)?;
        write(&mut probed, c, orig);

        let numeric = (fp - fm) / (2.0 * GRADCHECK_STEP);
        let analytic = if c.weight {
            grads.d_weights[c.layer][c.index]
        } else {
            grads.d_biases[c.layer][c.index]
        };
        let denom = analytic.abs().max(numeric.abs()).max(1e-6);
        worst = worst.max((analytic - numeric).abs() / denom);
    }
    Ok(worst)
}
