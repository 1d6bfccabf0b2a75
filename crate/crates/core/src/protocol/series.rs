use serde::Serialize;

use crate::synthesis::SynthesisVariant;
use crate::{Error, Result, C64};

const GRID_TOL: f64 = 1e-9;

/// Provenance of a time series.
#[derive(Debug, Clone, Default, PartialEq, Serialize)]
pub struct SeriesMeta {
    pub dt: f64,
    pub t_max: f64,
    /// `None` for exact expectation values.
    pub shots: Option<u64>,
    pub trotter_steps: Option<usize>,
    pub variant: Option<SynthesisVariant>,
    pub seed: Option<u64>,
    /// Number of stochastic samples averaged.
    pub samples: Option<usize>,
}

/// Complex samples on the uniform grid `0, dt, …, T`.
#[derive(Debug, Clone, PartialEq)]
pub struct TimeSeries {
    times: Vec<f64>,
    values: Vec<C64>,
    /// Standard errors of the real and imaginary parts, when known.
    std_errors: Option<Vec<C64>>,
    pub meta: SeriesMeta,
}

/// `0, dt, …, T` with `T / dt` rounded to the nearest integer step count.
///
/// Fails unless `T > 0`, `0 < dt ≤ T` and `T` is a whole number of steps
/// to within `1e-9` relative.
pub fn uniform_grid(t_max: f64, dt: f64) -> Result<Vec<f64>> {
    if !(t_max > 0.0) || !t_max.is_finite() {
        return Err(Error::invalid(format!("total time must be positive, got {t_max}")));
    }
    if !(dt > 0.0) || dt > t_max * (1.0 + GRID_TOL) {
        return Err(Error::invalid(format!("time step {dt} must lie in (0, {t_max}]")));
    }
    let steps = (t_max / dt).round();
    if (steps * dt - t_max).abs() > GRID_TOL * t_max {
        return Err(Error::invalid(format!("T = {t_max} is not a whole number of steps of {dt}")));
    }
    let steps = steps as usize;
    Ok((0..=steps).map(|k| t_max * k as f64 / steps as f64).collect())
}

impl TimeSeries {
    /// Checks that `times` is a strictly increasing uniform grid and that
    /// every value is finite. `meta.dt` and `meta.t_max` are filled in from
    /// the grid.
    pub fn new(times: Vec<f64>, values: Vec<C64>, mut meta: SeriesMeta) -> Result<Self> {
        if times.len() != values.len() {
            return Err(Error::WidthMismatch { expected: times.len(), found: values.len() });
        }
        if times.len() < 2 {
            return Err(Error::invalid("time series needs at least two points"));
        }
        let span = times[times.len() - 1] - times[0];
        let dt = span / (times.len() - 1) as f64;
        if !(dt > 0.0) {
            return Err(Error::invalid("time grid is not increasing"));
        }
        for (k, &t) in times.iter().enumerate() {
            if (t - (times[0] + dt * k as f64)).abs() > GRID_TOL * span.max(1.0) {
                return Err(Error::invalid(format!("time grid is not uniform at index {k}")));
            }
        }
        if let Some(k) = values.iter().position(|v| !v.re.is_finite() || !v.im.is_finite()) {
            return Err(Error::Numerical(format!("non-finite value at index {k}")));
        }
        meta.dt = dt;
        meta.t_max = times[times.len() - 1];
        Ok(TimeSeries { times, values, std_errors: None, meta })
    }

    pub fn with_std_errors(mut self, errors: Vec<C64>) -> Result<Self> {
        if errors.len() != self.values.len() {
            return Err(Error::WidthMismatch { expected: self.values.len(), found: errors.len() });
        }
        self.std_errors = Some(errors);
        Ok(self)
    }

    pub fn len(&self) -> usize {
        self.times.len()
    }

    pub fn is_empty(&self) -> bool {
        self.times.is_empty()
    }

    pub fn times(&self) -> &[f64] {
        &self.times
    }

    pub fn values(&self) -> &[C64] {
        &self.values
    }

    pub fn std_errors(&self) -> Option<&[C64]> {
        self.std_errors.as_deref()
    }

    pub fn dt(&self) -> f64 {
        self.meta.dt
    }

    pub fn start(&self) -> f64 {
        self.times[0]
    }

    /// Largest pointwise modulus of the difference to another series on the
    /// same grid.
    pub fn max_abs_diff(&self, other: &TimeSeries) -> Result<f64> {
        if self.len() != other.len() {
            return Err(Error::WidthMismatch { expected: self.len(), found: other.len() });
        }
        Ok(self.values.iter().zip(&other.values).map(|(a, b)| (a - b).norm()).fold(0.0, f64::max))
    }

    /// CSV with header `t,re,im` or `t,re,im,re_err,im_err`.
    pub fn to_csv(&self) -> String {
        let mut out = String::new();
        match &self.std_errors {
            None => {
                out.push_str("t,re,im\n");
                for (t, v) in self.times.iter().zip(&self.values) {
                    out.push_str(&format!("{t:?},{:?},{:?}\n", v.re, v.im));
                }
            }
            Some(errs) => {
                out.push_str("t,re,im,re_err,im_err\n");
                for ((t, v), e) in self.times.iter().zip(&self.values).zip(errs) {
                    out.push_str(&format!("{t:?},{:?},{:?},{:?},{:?}\n", v.re, v.im, e.re, e.im));
                }
            }
        }
        out
    }

    /// Parses the CSV written by [`TimeSeries::to_csv`]; error columns are
    /// optional.
    pub fn from_csv(text: &str) -> Result<Self> {
        let mut lines = text.lines().enumerate().filter(|(_, l)| !l.trim().is_empty());
        let (_, header) = lines.next().ok_or(Error::Parse { line: 0, msg: "empty series file".into() })?;
        let cols: Vec<&str> = header.split(',').map(str::trim).collect();
        let with_err = match cols[..] {
            ["t", "re", "im"] => false,
            ["t", "re", "im", "re_err", "im_err"] => true,
            _ => return Err(Error::Parse { line: 1, msg: format!("unexpected header {header:?}") }),
        };
        let (mut times, mut values, mut errs) = (Vec::new(), Vec::new(), Vec::new());
        for (k, line) in lines {
            let fields: Result<Vec<f64>> = line
                .split(',')
                .map(|f| f.trim().parse::<f64>().map_err(|e| Error::Parse { line: k + 1, msg: format!("{f:?}: {e}") }))
                .collect();
            let fields = fields?;
            if fields.len() != cols.len() {
                return Err(Error::Parse { line: k + 1, msg: format!("expected {} columns", cols.len()) });
            }
            times.push(fields[0]);
            values.push(C64::new(fields[1], fields[2]));
            if with_err {
                errs.push(C64::new(fields[3], fields[4]));
            }
        }
        let s = TimeSeries::new(times, values, SeriesMeta::default())?;
        if with_err {
            s.with_std_errors(errs)
        } else {
            Ok(s)
        }
    }
}
