//! Least-squares slopes for scaling laws.

use serde::Serialize;
use statrs::distribution::{ContinuousCDF, StudentsT};

/// Ordinary least-squares line with a 95% confidence half-width on the slope
/// (absent with fewer than three points).
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SlopeFit {
    #[serde(serialize_with = "crate::export::sig17")]
    pub slope: f64,
    #[serde(skip)]
    pub intercept: f64,
    #[serde(serialize_with = "crate::export::sig17_opt")]
    pub half_width: Option<f64>,
}

pub fn fit_line(x: &[f64], y: &[f64]) -> SlopeFit {
    assert_eq!(x.len(), y.len(), "x and y must pair up");
    assert!(x.len() >= 2, "need two points for a slope");
    let n = x.len() as f64;
    let mx = x.iter().sum::<f64>() / n;
    let my = y.iter().sum::<f64>() / n;
    let sxx: f64 = x.iter().map(|a| (a - mx).powi(2)).sum();
    let sxy: f64 = x.iter().zip(y).map(|(a, b)| (a - mx) * (b - my)).sum();
    let slope = sxy / sxx;
    let intercept = my - slope * mx;
    let half_width = if x.len() > 2 {
        let dof = n - 2.0;
        let rss: f64 = x
            .iter()
            .zip(y)
            .map(|(a, b)| (b - intercept - slope * a).powi(2))
            .sum();
        let se = (rss / dof / sxx).sqrt();
        let quantile = StudentsT::new(0.0, 1.0, dof)
            .expect("positive degrees of freedom")
            .inverse_cdf(0.975);
        Some(quantile * se)
    } else {
        None
    };
    SlopeFit {
        slope,
        intercept,
        half_width,
    }
}

/// Fit of `ln y` against `ln x`.
pub fn fit_log_log(x: &[f64], y: &[f64]) -> SlopeFit {
    let lx: Vec<f64> = x.iter().map(|v| v.ln()).collect();
    let ly: Vec<f64> = y.iter().map(|v| v.ln()).collect();
    fit_line(&lx, &ly)
}
