use crate::error::{Error, Result};

/// Least-squares slope of `ln(error)` against `ln(n)`.
///
/// Points with a nonpositive error are dropped; at least four must survive.
pub fn rate_estimate(points: &[(usize, f64)]) -> Result<f64> {
    if points.windows(2).any(|w| w[0].0 >= w[1].0) {
        return Err(Error::InvalidArgument(
            "rate estimation needs strictly increasing degrees".into(),
        ));
    }
    let logs: Vec<(f64, f64)> = points
        .iter()
        .filter(|&&(_, e)| e > 0.0)
        .map(|&(n, e)| ((n as f64).ln(), e.ln()))
        .collect();
    if logs.len() < 4 {
        return Err(Error::InsufficientData {
            have: logs.len(),
            need: 4,
        });
    }
    let count = logs.len() as f64;
    let mean_x = logs.iter().map(|p| p.0).sum::<f64>() / count;
    let mean_y = logs.iter().map(|p| p.1).sum::<f64>() / count;
    let (mut sxy, mut sxx) = (0.0, 0.0);
    for &(x, y) in &logs {
        sxy += (x - mean_x) * (y - mean_y);
        sxx += (x - mean_x) * (x - mean_x);
    }
    Ok(sxy / sxx)
}
