//! Ordinary least squares on log-log data.

use crate::scalar::Real;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LineFit<T> {
    pub slope: T,
    pub intercept: T,
    /// Root-mean-square of the residuals.
    pub rms_residual: T,
}

/// Least-squares line through `(x_i, y_i)`. Needs two distinct abscissae.
pub fn fit_line<T: Real>(xs: &[T], ys: &[T]) -> Option<LineFit<T>> {
    let n = xs.len();
    if n < 2 || ys.len() != n {
        return None;
    }
    let nf = T::from_usize_lossy(n);
    let mx = xs.iter().copied().sum::<T>() / nf;
    let my = ys.iter().copied().sum::<T>() / nf;
    let sxx: T = xs.iter().map(|&x| (x - mx) * (x - mx)).sum();
    if sxx <= T::zero() {
        return None;
    }
    let sxy: T = xs.iter().zip(ys).map(|(&x, &y)| (x - mx) * (y - my)).sum();
    let slope = sxy / sxx;
    let intercept = my - slope * mx;
    let ss: T = xs
        .iter()
        .zip(ys)
        .map(|(&x, &y)| {
            let r = y - (intercept + slope * x);
            r * r
        })
        .sum();
    Some(LineFit { slope, intercept, rms_residual: (ss / nf).sqrt() })
}

/// Fit `log y = slope · log x + c`. Non-positive samples are rejected.
pub fn fit_power_law<T: Real>(xs: &[T], ys: &[T]) -> Option<LineFit<T>> {
    if xs.iter().chain(ys).any(|v| !(*v > T::zero()) || !v.is_finite()) {
        return None;
    }
    let lx: Vec<T> = xs.iter().map(|x| x.ln()).collect();
    let ly: Vec<T> = ys.iter().map(|y| y.ln()).collect();
    fit_line(&lx, &ly)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn exact_power_law() {
        let xs: Vec<f64> = (0..8).map(|k| 2f64.powi(k)).collect();
        let ys: Vec<f64> = xs.iter().map(|x| 3.0 * x.powf(0.5)).collect();
        let fit = fit_power_law(&xs, &ys).unwrap();
        assert!((fit.slope - 0.5).abs() < 1e-12);
        assert!((fit.intercept - 3f64.ln()).abs() < 1e-12);
        assert!(fit.rms_residual < 1e-12);
    }

    #[test]
    fn degenerate_inputs() {
        assert!(fit_line(&[1.0], &[2.0]).is_none());
        assert!(fit_line(&[1.0, 1.0], &[2.0, 3.0]).is_none());
        assert!(fit_power_law(&[1.0, 2.0], &[0.0, 1.0]).is_none());
        assert!(fit_power_law(&[1.0f32, 2.0], &[1.0, 2.0]).is_some());
    }
}
