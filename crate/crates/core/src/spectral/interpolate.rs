use crate::protocol::TimeSeries;
use crate::{Error, Result, C64};

/// Resamples `series` onto `target` by the quadratic through the three
/// source points nearest each target time.
///
/// The window is centred on the nearest source point and shifted inwards
/// at the ends. Target times outside the source span are rejected.
pub fn interpolate_quadratic(series: &TimeSeries, target: &[f64]) -> Result<TimeSeries> {
    let src_t = series.times();
    let src_v = series.values();
    let n = src_t.len();
    if n < 3 {
        return Err(Error::invalid("quadratic interpolation needs at least three points"));
    }
    let (t0, dt) = (src_t[0], series.dt());
    let (lo, hi) = (src_t[0], src_t[n - 1]);
    let slack = 1e-12 * (hi - lo).max(1.0);
    let values = target
        .iter()
        .map(|&t| {
            if !(t >= lo - slack && t <= hi + slack) {
                return Err(Error::invalid(format!("target time {t} outside [{lo}, {hi}]")));
            }
            let nearest = ((t - t0) / dt).round() as usize;
            let i = nearest.clamp(1, n - 2) - 1;
            let (x0, x1, x2) = (src_t[i], src_t[i + 1], src_t[i + 2]);
            let l0 = (t - x1) * (t - x2) / ((x0 - x1) * (x0 - x2));
            let l1 = (t - x0) * (t - x2) / ((x1 - x0) * (x1 - x2));
            let l2 = (t - x0) * (t - x1) / ((x2 - x0) * (x2 - x1));
            Ok(src_v[i] * l0 + src_v[i + 1] * l1 + src_v[i + 2] * l2)
        })
        .collect::<Result<Vec<C64>>>()?;
    TimeSeries::new(target.to_vec(), values, series.meta.clone())
}
