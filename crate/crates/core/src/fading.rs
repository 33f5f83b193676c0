//! Temporally correlated small-scale fading.
//!
//! Each link carries a first-order complex Gauss-Markov process
//! h(t+1) = rho * h(t) + sqrt(1 - rho^2) * w with w standard complex
//! Gaussian, so |h|^2 has unit mean and the lag-1 autocorrelation equals
//! rho = J0(2 pi f_d T_f) under Jakes' model.

use rand::Rng;
use rand_distr::StandardNormal;

/// Default maximum Doppler frequency in Hz.
pub const DOPPLER_HZ: f64 = 10.0;

/// Default interval between fading steps: one 10 ms frame.
pub const FRAME_INTERVAL_S: f64 = 0.010;

/// Minimal complex value for the fading state.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Cplx {
    pub re: f64,
    pub im: f64,
}

impl Cplx {
    pub fn abs2(self) -> f64 {
        self.re * self.re + self.im * self.im
    }
}

/// Zero-order Bessel function of the first kind, evaluated by its power
/// series sum_k (-x^2/4)^k / (k!)^2 truncated once terms fall below 1e-18.
pub fn bessel_j0(x: f64) -> f64 {
    let q = x * x / 4.0;
    let mut term = 1.0;
    let mut sum = 1.0;
    for k in 1..64 {
        term *= -q / ((k * k) as f64);
        sum += term;
        if term.abs() < 1e-18 {
            break;
        }
    }
    sum
}

/// Gauss-Markov correlation coefficient rho = J0(2 pi f_d T_f).
pub fn correlation_coefficient(doppler_hz: f64, frame_interval_s: f64) -> f64 {
    bessel_j0(2.0 * std::f64::consts::PI * doppler_hz * frame_interval_s)
}

/// Per-link fading process state for a whole realization.
#[derive(Debug, Clone)]
pub struct FadingProcess {
    pub rho: f64,
    pub doppler_hz: f64,
    pub frame_interval_s: f64,
    /// One complex amplitude per link.
    pub state: Vec<Cplx>,
}

impl FadingProcess {
    /// Initialize `links` processes in the stationary distribution CN(0, 1).
    pub fn new<R: Rng>(doppler_hz: f64, frame_interval_s: f64, links: usize, rng: &mut R) -> Self {
        let rho = correlation_coefficient(doppler_hz, frame_interval_s);
        let state = (0..links).map(|_| standard_complex(rng)).collect();
        Self { rho, doppler_hz, frame_interval_s, state }
    }

    pub fn gain_sq(&self, link: usize) -> f64 {
        self.state[link].abs2()
    }
}

fn standard_complex<R: Rng>(rng: &mut R) -> Cplx {
    // Unit total power: real and imaginary parts each N(0, 1/2).
    let s = std::f64::consts::FRAC_1_SQRT_2;
    let re: f64 = rng.sample(StandardNormal);
    let im: f64 = rng.sample(StandardNormal);
    Cplx { re: re * s, im: im * s }
}

/// Advance every link one frame: h <- rho h + sqrt(1 - rho^2) w.
pub fn jakes_step<R: Rng>(process: &mut FadingProcess, rng: &mut R) {
    let rho = process.rho;
    let innov = (1.0 - rho * rho).max(0.0).sqrt();
    for h in process.state.iter_mut() {
        let w = standard_complex(rng);
        h.re = rho * h.re + innov * w.re;
        h.im = rho * h.im + innov * w.im;
    }
}
