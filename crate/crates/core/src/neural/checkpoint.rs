//! Portable network checkpoints: a one-line JSON header followed by the
//! parameters as little-endian 64-bit floats in layer-major order (layer 0
//! weights row-major, layer 0 biases, layer 1 weights, ...).

use std::io::{Read, Write};

use serde::{Deserialize, Serialize};

use super::mlp::MlpParams;
use crate::error::{Result, SimError};

/// Header describing the flat parameter payload. `extra` carries optional
/// consumer metadata (input normalizers, action bounds) untouched.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct CheckpointHeader {
    pub version: u32,
    pub dims: Vec<usize>,
    pub param_count: usize,
    #[serde(default, skip_serializing_if = "serde_json::Value::is_null")]
    pub extra: serde_json::Value,
}

pub fn save_params<W: Write>(params: &MlpParams, extra: serde_json::Value, w: &mut W) -> Result<()> {
    let header = CheckpointHeader {
        version: 1,
        dims: params.dims.clone(),
        param_count: params.num_params(),
        extra,
    };
    let mut line = serde_json::to_string(&header)?;
    line.push('\n');
    w.write_all(line.as_bytes())?;
    for l in 0..params.num_layers() {
        for &v in &params.weights[l] {
            w.write_all(&v.to_le_bytes())?;
        }
        for &v in &params.biases[l] {
            w.write_all(&v.to_le_bytes())?;
        }
    }
    Ok(())
}

pub fn load_params<R: Read>(r: &mut R) -> Result<(MlpParams, serde_json::Value)> {
    let mut bytes = Vec::new();
    r.read_to_end(&mut bytes)?;
    let newline = bytes
        .iter()
        .position(|&b| b == b'\n')
        .ok_or_else(|| SimError::Config("checkpoint missing header line".into()))?;
    let header: CheckpointHeader = serde_json::from_slice(&bytes[..newline])?;
    if header.version != 1 {
        return Err(SimError::Config(format!(
            "unsupported checkpoint version {}",
            header.version
        )));
    }
    let payload = &bytes[newline + 1..];
    if payload.len() != header.param_count * 8 {
        return Err(SimError::Config(format!(
            "checkpoint payload {} bytes, expected {}",
            payload.len(),
            header.param_count * 8
        )));
    }
    let mut values = payload
        .chunks_exact(8)
        .map(|c| f64::from_le_bytes(c.try_into().unwrap()));

    let dims = header.dims;
    if dims.len() < 2 {
        return Err(SimError::Config("checkpoint dims too short".into()));
    }
    let mut weights = Vec::new();
    let mut biases = Vec::new();
    for l in 0..dims.len() - 1 {
        let w: Vec<f64> = values.by_ref().take(dims[l] * dims[l + 1]).collect();
        let b: Vec<f64> = values.by_ref().take(dims[l + 1]).collect();
        if w.len() != dims[l] * dims[l + 1] || b.len() != dims[l + 1] {
            return Err(SimError::Config("checkpoint payload truncated".into()));
        }
        weights.push(w);
        biases.push(b);
    }
    Ok((MlpParams { dims, weights, biases }, header.extra))
}
