//! Power spectra of time series, peak extraction and resampling.

mod interpolate;
mod peaks;
mod transform;

pub use interpolate::interpolate_quadratic;
pub use peaks::{find_peaks, Peak, PeakSet};
pub use transform::{dft, DftOptions, PowerSpectrum, Window};
