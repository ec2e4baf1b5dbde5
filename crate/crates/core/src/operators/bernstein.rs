use crate::error::{Error, Result};

/// All `n + 1` Bernstein basis values `p_{n,k}(x)`.
///
/// The row is built by the ratio recurrence
/// `p_{n,k+1} / p_{n,k} = (n - k) / (k + 1) * x / (1 - x)` outward from the
/// mode, where the unnormalized value is pinned to 1, and then divided by its
/// sum. Nothing overflows, terms far in the tails underflow to zero, and the
/// row sums to one up to rounding for any `n`.
pub fn bernstein_row(n: usize, x: f64) -> Vec<f64> {
    let mut row = vec![0.0; n + 1];
    if x <= 0.0 {
        row[0] = 1.0;
        return row;
    }
    if x >= 1.0 {
        row[n] = 1.0;
        return row;
    }
    let ratio = x / (1.0 - x);
    let mode = (((n + 1) as f64 * x).floor() as usize).min(n);
    row[mode] = 1.0;
    for k in mode + 1..=n {
        row[k] = row[k - 1] * ((n - k + 1) as f64 / k as f64) * ratio;
        if row[k] == 0.0 {
            break;
        }
    }
    for k in (0..mode).rev() {
        row[k] = row[k + 1] * ((k + 1) as f64 / (n - k) as f64) / ratio;
        if row[k] == 0.0 {
            break;
        }
    }
    let total: f64 = row.iter().sum();
    row.iter_mut().for_each(|p| *p /= total);
    row
}

/// `p_{n,k}(x) = C(n,k) x^k (1-x)^(n-k)`.
pub fn bernstein_basis(n: usize, k: usize, x: f64) -> Result<f64> {
    if k > n {
        return Err(Error::InvalidArgument(format!(
            "basis index k = {k} is outside 0..={n}"
        )));
    }
    if !(0.0..=1.0).contains(&x) {
        return Err(Error::Domain {
            what: "x",
            value: x,
            domain: "[0, 1]".into(),
        });
    }
    Ok(bernstein_row(n, x)[k])
}
