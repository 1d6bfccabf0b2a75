use serde::Serialize;

use super::transform::PowerSpectrum;
use crate::{Error, Result};

/// A detected spectral line.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Peak {
    /// Frequency after sub-bin refinement.
    pub omega: f64,
    pub magnitude: f64,
    pub bin: usize,
}

/// Peaks in ascending frequency order.
#[derive(Debug, Clone, Default, PartialEq, Serialize)]
pub struct PeakSet {
    pub peaks: Vec<Peak>,
}

impl PeakSet {
    pub fn len(&self) -> usize {
        self.peaks.len()
    }

    pub fn is_empty(&self) -> bool {
        self.peaks.is_empty()
    }

    pub fn frequencies(&self) -> Vec<f64> {
        self.peaks.iter().map(|p| p.omega).collect()
    }

    /// CSV with header `omega_est,magnitude,bin`.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("omega_est,magnitude,bin\n");
        for p in &self.peaks {
            out.push_str(&format!("{:?},{:?},{}\n", p.omega, p.magnitude, p.bin));
        }
        out
    }
}

/// Local maxima of the magnitude above `threshold · max`.
///
/// Neighbours wrap around the ends of the frequency axis, as the DFT is
/// periodic. Each maximum is refined by the vertex of the parabola through
/// it and its two neighbours, with the offset clamped to half a bin.
pub fn find_peaks(spec: &PowerSpectrum, threshold: f64) -> Result<PeakSet> {
    if !(threshold > 0.0 && threshold < 1.0) {
        return Err(Error::invalid(format!("peak threshold {threshold} outside (0, 1)")));
    }
    let m = spec.magnitudes();
    let n = m.len();
    let max = m.iter().copied().fold(0.0, f64::max);
    if max <= 0.0 || n < 3 {
        return Ok(PeakSet::default());
    }
    let cut = threshold * max;
    let mut peaks = Vec::new();
    for k in 0..n {
        let (y_prev, y0, y_next) = (m[(k + n - 1) % n], m[k], m[(k + 1) % n]);
        if y0 < cut || y0 <= y_prev || y0 < y_next {
            continue;
        }
        let curvature = y_prev - 2.0 * y0 + y_next;
        let delta = if curvature < 0.0 { (0.5 * (y_prev - y_next) / curvature).clamp(-0.5, 0.5) } else { 0.0 };
        peaks.push(Peak {
            omega: spec.frequencies()[k] + delta * spec.spacing(),
            magnitude: y0 - 0.25 * (y_prev - y_next) * delta,
            bin: k,
        });
    }
    Ok(PeakSet { peaks })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::protocol::{uniform_grid, SeriesMeta, TimeSeries};
    use crate::spectral::{dft, DftOptions};
    use crate::C64;

    fn spectrum(lambdas: &[f64]) -> PowerSpectrum {
        let times = uniform_grid(6.0, 0.04).unwrap();
        let values = times.iter().map(|&t| lambdas.iter().map(|&l| C64::from_polar(1.0, -l * t)).sum()).collect();
        dft(&TimeSeries::new(times, values, SeriesMeta::default()).unwrap(), DftOptions::default()).unwrap()
    }

    #[test]
    fn single_line_within_half_bin() {
        for lambda in [0.0, 2.3, -4.1] {
            let spec = spectrum(&[lambda]);
            let peaks = find_peaks(&spec, 0.3).unwrap();
            assert_eq!(peaks.len(), 1);
            assert!((peaks.peaks[0].omega - lambda).abs() < 0.5 * spec.spacing());
        }
    }

    #[test]
    fn four_lines() {
        let spec = spectrum(&[-3.0, -1.0, 1.0, 3.0]);
        let peaks = find_peaks(&spec, 0.2).unwrap();
        assert_eq!(peaks.len(), 4);
        for (p, want) in peaks.frequencies().iter().zip([-3.0, -1.0, 1.0, 3.0]) {
            assert!((p - want).abs() < spec.spacing());
        }
        assert!(peaks.to_csv().starts_with("omega_est,magnitude,bin\n"));
    }

    #[test]
    fn silence_and_bad_threshold() {
        let spec = spectrum(&[]);
        assert!(find_peaks(&spec, 0.2).unwrap().is_empty());
        assert!(find_peaks(&spec, 0.0).is_err());
        assert!(find_peaks(&spec, 1.0).is_err());
    }
}
