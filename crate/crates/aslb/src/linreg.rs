//! Ordinary least squares on (x, y) pairs — the workhorse behind every
//! log-log exponent fit in the crate.

use serde::{Deserialize, Serialize};

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct LineFit {
    pub slope: f64,
    pub intercept: f64,
    pub r_squared: f64,
    pub n: usize,
}

pub fn fit_line(xs: &[f64], ys: &[f64]) -> LineFit {
    let n = xs.len().min(ys.len());
    if n < 2 {
        return LineFit {
            slope: 0.0,
            intercept: if n == 1 { ys[0] } else { 0.0 },
            r_squared: 0.0,
            n,
        };
    }
    let nf = n as f64;
    let sum_x: f64 = xs[..n].iter().sum();
    let sum_y: f64 = ys[..n].iter().sum();
    let mean_x = sum_x / nf;
    let mean_y = sum_y / nf;
    let mut sxx = 0.0;
    let mut sxy = 0.0;
    let mut syy = 0.0;
    for i in 0..n {
        let dx = xs[i] - mean_x;
        let dy = ys[i] - mean_y;
        sxx += dx * dx;
        sxy += dx * dy;
        syy += dy * dy;
    }
    if sxx <= 0.0 {
        return LineFit {
            slope: 0.0,
            intercept: mean_y,
            r_squared: 0.0,
            n,
        };
    }
    let slope = sxy / sxx;
    let intercept = mean_y - slope * mean_x;
    let ss_res = (syy - slope * sxy).max(0.0);
    let r_squared = if syy <= 0.0 { 1.0 } else { 1.0 - ss_res / syy };
    LineFit {
        slope,
        intercept,
        r_squared,
        n,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn exact_line_recovers_coefficients() {
        let xs: Vec<f64> = (0..20).map(|i| i as f64 * 0.25).collect();
        let ys: Vec<f64> = xs.iter().map(|x| 3.0 * x - 1.5).collect();
        let fit = fit_line(&xs, &ys);
        assert!((fit.slope - 3.0).abs() < 1e-12);
        assert!((fit.intercept + 1.5).abs() < 1e-12);
        assert!(fit.r_squared > 1.0 - 1e-12);
    }

    #[test]
    fn degenerate_inputs() {
        assert_eq!(fit_line(&[], &[]).n, 0);
        let fit = fit_line(&[1.0, 1.0], &[2.0, 4.0]);
        assert_eq!(fit.slope, 0.0);
    }
}
