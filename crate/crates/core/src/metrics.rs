//! Throughput metrics (arithmetic / geometric / harmonic mean), delay
//! accounting, and per-timeslot computational latency measurement.
//!
//! Link rates in bits/symbol are scaled to bits/s by N_S / T_S per timeslot,
//! then the three means are taken across devices and averaged over the
//! timeslots of a realization. A zero rate anywhere collapses that
//! timeslot's geometric and harmonic terms to zero (the infinite-delay
//! convention).

use serde::{Deserialize, Serialize};

use crate::error::{Result, SimError};
use crate::units::{SLOT_DURATION_S, SYMBOLS_PER_SLOT};

/// Per-realization metrics record.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct MetricsRecord {
    pub realization_id: String,
    /// Arithmetic-mean throughput, bits/s.
    pub am: f64,
    /// Geometric-mean throughput, bits/s.
    pub gm: f64,
    /// Harmonic-mean throughput, bits/s.
    pub hm: f64,
    /// Number of (device, timeslot) entries with zero rate.
    pub zero_rate_count: usize,
    /// Mean retransmission frames per transmission (0 when the scheduler
    /// never retransmits).
    pub avg_delay_frames: f64,
    /// Median computational latency per timeslot, training phase.
    pub latency_train_ms: Option<f64>,
    /// Median computational latency per timeslot, testing phase.
    pub latency_test_ms: Option<f64>,
}

/// AM/GM/HM throughput from a complete (timeslot, device) rate grid in
/// bits/symbol.
pub fn compute_metrics(
    realization_id: &str,
    rates: &[Vec<f64>],
    n_symbols: f64,
    slot_s: f64,
) -> Result<MetricsRecord> {
    if rates.is_empty() || rates[0].is_empty() {
        return Err(SimError::Contract("metrics need a non-empty rate grid".into()));
    }
    let n = rates[0].len();
    if rates.iter().any(|row| row.len() != n) {
        return Err(SimError::Contract("incomplete rate grid".into()));
    }
    let scale = n_symbols / slot_s;
    let t_slots = rates.len() as f64;

    let mut am_sum = 0.0;
    let mut gm_sum = 0.0;
    let mut hm_sum = 0.0;
    let mut zero_rate_count = 0;
    for row in rates {
        let mut am_t = 0.0;
        let mut log_sum = 0.0;
        let mut inv_sum = 0.0;
        let mut any_zero = false;
        for &rate in row {
            if rate < 0.0 || !rate.is_finite() {
                return Err(SimError::Contract(format!("invalid rate {rate}")));
            }
            let bps = rate * scale;
            am_t += bps;
            if bps == 0.0 {
                any_zero = true;
                zero_rate_count += 1;
            } else {
                log_sum += bps.ln();
                inv_sum += 1.0 / bps;
            }
        }
        am_t /= n as f64;
        // Mathematically HM <= GM <= AM per timeslot; the clamps only absorb
        // last-ulp rounding so emitted records satisfy the chain exactly.
        let gm_t = if any_zero { 0.0 } else { (log_sum / n as f64).exp().min(am_t) };
        let hm_t = if any_zero { 0.0 } else { (n as f64 / inv_sum).min(gm_t) };
        am_sum += am_t;
        gm_sum += gm_t;
        hm_sum += hm_t;
    }

    Ok(MetricsRecord {
        realization_id: realization_id.to_string(),
        am: am_sum / t_slots,
        gm: gm_sum / t_slots,
        hm: hm_sum / t_slots,
        zero_rate_count,
        avg_delay_frames: 0.0,
        latency_train_ms: None,
        latency_test_ms: None,
    })
}

/// Convenience wrapper with the frame defaults N_S = 14, T_S = 0.5 ms.
pub fn compute_metrics_default(realization_id: &str, rates: &[Vec<f64>]) -> Result<MetricsRecord> {
    compute_metrics(realization_id, rates, SYMBOLS_PER_SLOT, SLOT_DURATION_S)
}

/// Median wall-clock milliseconds per timeslot over `repetitions` runs of
/// `run_fn`, which executes some work and reports how many timeslots it
/// covered.
pub fn measure_latency<F: FnMut() -> usize>(mut run_fn: F, repetitions: usize) -> Result<f64> {
    if repetitions < 10 {
        return Err(SimError::Contract(format!(
            "latency measurement needs >= 10 repetitions, got {repetitions}"
        )));
    }
    let mut per_slot = Vec::with_capacity(repetitions);
    for _ in 0..repetitions {
        let start = std::time::Instant::now();
        let slots = run_fn();
        let elapsed = start.elapsed().as_secs_f64() * 1e3;
        per_slot.push(if slots == 0 { 0.0 } else { elapsed / slots as f64 });
    }
    per_slot.sort_by(|a, b| a.partial_cmp(b).unwrap());
    let mid = per_slot.len() / 2;
    Ok(if per_slot.len() % 2 == 1 {
        per_slot[mid]
    } else {
        (per_slot[mid - 1] + per_slot[mid]) / 2.0
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn equal_rates_collapse_all_means() {
        let rates = vec![vec![1.18; 5]; 3];
        let rec = compute_metrics_default("w", &rates).unwrap();
        let expect = 1.18 * 14.0 / 0.0005;
        assert!((expect - 33040.0).abs() < 1e-9);
        assert!((rec.am - expect).abs() < 1e-6);
        assert_eq!(rec.am, rec.gm);
        assert_eq!(rec.gm, rec.hm);
        assert_eq!(rec.zero_rate_count, 0);
    }

    #[test]
    fn two_rate_hand_arithmetic() {
        // Rates {2, 8} pre-scaled: use unit scaling to check the raw means.
        let rates = vec![vec![2.0, 8.0]];
        let rec = compute_metrics("w", &rates, 1.0, 1.0).unwrap();
        assert!((rec.am - 5.0).abs() < 1e-12);
        assert!((rec.gm - 4.0).abs() < 1e-12);
        assert!((rec.hm - 3.2).abs() < 1e-12);
        assert!(rec.hm < rec.gm && rec.gm < rec.am);
    }

    #[test]
    fn zero_rate_annihilates_gm_hm() {
        let rates = vec![vec![2.0, 0.0, 8.0]];
        let rec = compute_metrics("w", &rates, 1.0, 1.0).unwrap();
        assert!(rec.am > 0.0);
        assert_eq!(rec.gm, 0.0);
        assert_eq!(rec.hm, 0.0);
        assert_eq!(rec.zero_rate_count, 1);
    }

    #[test]
    fn means_are_permutation_invariant_and_scale_linearly() {
        let a = compute_metrics("w", &[vec![1.0, 3.0, 7.0]], 1.0, 1.0).unwrap();
        let b = compute_metrics("w", &[vec![7.0, 1.0, 3.0]], 1.0, 1.0).unwrap();
        assert!((a.am - b.am).abs() < 1e-12);
        assert!((a.gm - b.gm).abs() < 1e-12);
        assert!((a.hm - b.hm).abs() < 1e-12);

        let c = compute_metrics("w", &[vec![2.0, 6.0, 14.0]], 1.0, 1.0).unwrap();
        assert!((c.am - 2.0 * a.am).abs() < 1e-9);
        assert!((c.gm - 2.0 * a.gm).abs() < 1e-9);
        assert!((c.hm - 2.0 * a.hm).abs() < 1e-9);
    }

    #[test]
    fn incomplete_grid_rejected() {
        let rates = vec![vec![1.0, 2.0], vec![1.0]];
        assert!(matches!(
            compute_metrics("w", &rates, 1.0, 1.0),
            Err(SimError::Contract(_))
        ));
    }

    #[test]
    fn latency_noop_near_zero() {
        let ms = measure_latency(|| 20, 11).unwrap();
        assert!(ms < 0.5, "no-op latency {ms} ms");
        assert!(measure_latency(|| 20, 9).is_err());
    }
}
