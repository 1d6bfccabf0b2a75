use std::f64::consts::TAU;

use rustfft::FftPlanner;
use serde::{Deserialize, Serialize};

use crate::protocol::TimeSeries;
use crate::{Error, Result, C64};

/// Taper applied to the series before transforming.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Window {
    #[default]
    Rectangular,
    Hann,
}

/// Transform options.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DftOptions {
    #[serde(default)]
    pub window: Window,
    /// Scale magnitudes so the largest is 1.
    #[serde(default)]
    pub normalize: bool,
}

/// Two-sided spectrum on `ω_m = m·Δω`, `Δω = 2π/(N·dt)`, for
/// `m = -⌊N/2⌋, …, ⌈N/2⌉-1`.
#[derive(Debug, Clone, PartialEq)]
pub struct PowerSpectrum {
    frequencies: Vec<f64>,
    coefficients: Vec<C64>,
    magnitudes: Vec<f64>,
    spacing: f64,
    pub normalized: bool,
}

impl PowerSpectrum {
    pub fn frequencies(&self) -> &[f64] {
        &self.frequencies
    }

    /// `ũ(ω_m) = dt Σ_k u_k e^{iω_m t_k}`, before any normalisation.
    pub fn coefficients(&self) -> &[C64] {
        &self.coefficients
    }

    pub fn magnitudes(&self) -> &[f64] {
        &self.magnitudes
    }

    /// `Δω`.
    pub fn spacing(&self) -> f64 {
        self.spacing
    }

    pub fn len(&self) -> usize {
        self.frequencies.len()
    }

    pub fn is_empty(&self) -> bool {
        self.frequencies.is_empty()
    }

    /// Bin whose frequency is closest to `omega`.
    pub fn bin_of(&self, omega: f64) -> usize {
        let first = self.frequencies[0];
        let k = ((omega - first) / self.spacing).round();
        k.clamp(0.0, (self.len() - 1) as f64) as usize
    }

    /// CSV with header `omega,magnitude`.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("omega,magnitude\n");
        for (w, m) in self.frequencies.iter().zip(&self.magnitudes) {
            out.push_str(&format!("{w:?},{m:?}\n"));
        }
        out
    }
}

/// Discrete Fourier transform of a uniform complex series.
///
/// The sign convention `e^{+iωt}` puts a component `e^{-iλt}` at `ω = λ`,
/// and the factor `dt` approximates the continuous transform, so that
/// `Σ|u_k|² dt = Σ|ũ_m|² Δω / 2π`.
pub fn dft(series: &TimeSeries, options: DftOptions) -> Result<PowerSpectrum> {
    let n = series.len();
    if n < 4 {
        return Err(Error::invalid(format!("DFT needs at least 4 samples, got {n}")));
    }
    let dt = series.dt();
    let mut buf: Vec<C64> = series.values().to_vec();
    if options.window == Window::Hann {
        for (k, v) in buf.iter_mut().enumerate() {
            *v *= 0.5 * (1.0 - (TAU * k as f64 / (n - 1) as f64).cos());
        }
    }
    FftPlanner::new().plan_fft_inverse(n).process(&mut buf);

    let spacing = TAU / (n as f64 * dt);
    let lo = -((n / 2) as i64);
    let t0 = series.start();
    let (mut frequencies, mut coefficients) = (Vec::with_capacity(n), Vec::with_capacity(n));
    for m in lo..lo + n as i64 {
        let omega = m as f64 * spacing;
        let raw = buf[m.rem_euclid(n as i64) as usize];
        frequencies.push(omega);
        coefficients.push(raw * C64::from_polar(dt, omega * t0));
    }
    let mut magnitudes: Vec<f64> = coefficients.iter().map(|c| c.norm()).collect();
    let max = magnitudes.iter().copied().fold(0.0, f64::max);
    let normalized = options.normalize && max > 0.0;
    if normalized {
        magnitudes.iter_mut().for_each(|m| *m /= max);
    }
    Ok(PowerSpectrum { frequencies, coefficients, magnitudes, spacing, normalized })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::protocol::{uniform_grid, SeriesMeta};

    fn series(t_max: f64, dt: f64, f: impl Fn(f64) -> C64) -> TimeSeries {
        let times = uniform_grid(t_max, dt).unwrap();
        let values = times.iter().map(|&t| f(t)).collect();
        TimeSeries::new(times, values, SeriesMeta::default()).unwrap()
    }

    /// Direct `O(N²)` evaluation of the same sum.
    fn naive(s: &TimeSeries, omega: f64) -> C64 {
        s.times().iter().zip(s.values()).map(|(&t, &u)| u * C64::from_polar(s.dt(), omega * t)).sum()
    }

    #[test]
    fn matches_direct_summation() {
        for (t_max, dt) in [(1.0, 0.1), (2.0, 0.25), (3.0, 0.1)] {
            let s = series(t_max, dt, |t| C64::new((1.3 * t).cos(), (0.4 * t * t).sin()));
            let spec = dft(&s, DftOptions::default()).unwrap();
            assert_eq!(spec.len(), s.len());
            for (w, c) in spec.frequencies().iter().zip(spec.coefficients()) {
                assert!((naive(&s, *w) - c).norm() < 1e-10);
            }
        }
    }

    #[test]
    fn grid_layout() {
        let s = series(0.9, 0.1, |_| C64::new(1.0, 0.0));
        let spec = dft(&s, DftOptions::default()).unwrap();
        let dw = TAU / 1.0;
        assert!((spec.spacing() - dw).abs() < 1e-12);
        assert!((spec.frequencies()[0] + 5.0 * dw).abs() < 1e-12);
        assert!((spec.frequencies()[9] - 4.0 * dw).abs() < 1e-12);
        assert_eq!(spec.bin_of(0.0), 5);
    }

    #[test]
    fn on_grid_exponential_fills_one_bin() {
        let (n, dt) = (64usize, 0.05);
        let dw = TAU / (n as f64 * dt);
        let lambda = 7.0 * dw;
        let s = series((n - 1) as f64 * dt, dt, |t| C64::from_polar(1.0, -lambda * t));
        let spec = dft(&s, DftOptions { normalize: true, ..DftOptions::default() }).unwrap();
        let k = spec.bin_of(lambda);
        assert!((spec.magnitudes()[k] - 1.0).abs() < 1e-12);
        for (j, m) in spec.magnitudes().iter().enumerate() {
            if j != k {
                assert!(*m < 1e-10);
            }
        }
    }

    #[test]
    fn parseval() {
        let s = series(4.0, 0.05, |t| C64::new((2.0 * t).sin(), 0.3 * t));
        let spec = dft(&s, DftOptions::default()).unwrap();
        let time: f64 = s.values().iter().map(|v| v.norm_sqr()).sum::<f64>() * s.dt();
        let freq: f64 = spec.coefficients().iter().map(|c| c.norm_sqr()).sum::<f64>() * spec.spacing() / TAU;
        assert!((time - freq).abs() < 1e-10 * time.max(1.0));
    }

    #[test]
    fn hann_window_tapers_ends() {
        let s = series(3.0, 0.1, |_| C64::new(1.0, 0.0));
        let rect = dft(&s, DftOptions::default()).unwrap();
        let hann = dft(&s, DftOptions { window: Window::Hann, normalize: false }).unwrap();
        let k = rect.bin_of(0.0);
        assert!(hann.magnitudes()[k] < rect.magnitudes()[k]);
        assert!(dft(&series(0.2, 0.1, |_| C64::default()), DftOptions::default()).is_err());
    }
}
