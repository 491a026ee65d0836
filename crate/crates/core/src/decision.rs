//! Picks one operating point from a Pareto front by averaged fuzzy
//! membership.

use crate::error::{Error, Result};
use crate::metrics::ParetoFront;

#[derive(Debug, Clone, PartialEq)]
pub struct AfmfResult {
    /// Index of the selected point in the front.
    pub selected: usize,
    /// Average membership of the selected point.
    pub lambda_max: f64,
    /// Membership in `f1` of every point.
    pub lambda1: Vec<f64>,
    /// Membership in `f2` of every point.
    pub lambda2: Vec<f64>,
}

impl AfmfResult {
    /// Average membership of every point.
    pub fn lambda(&self) -> Vec<f64> {
        self.lambda1.iter().zip(&self.lambda2).map(|(a, b)| 0.5 * (a + b)).collect()
    }
}

/// Linear membership `(max - f) / (max - min)`; 1 for every point when the
/// objective is constant.
fn membership(values: impl Iterator<Item = f64> + Clone) -> Vec<f64> {
    let lo = values.clone().fold(f64::INFINITY, f64::min);
    let hi = values.clone().fold(f64::NEG_INFINITY, f64::max);
    let span = hi - lo;
    values.map(|f| if span > 0.0 { (hi - f) / span } else { 1.0 }).collect()
}

/// Selects the point with the largest average membership. Ties go to the
/// smaller `f1`, i.e. the earlier point.
pub fn afmf_select(front: &ParetoFront) -> Result<AfmfResult> {
    if front.is_empty() {
        return Err(Error::InvalidInput("cannot select from an empty front".into()));
    }
    let lambda1 = membership(front.points().iter().map(|p| p[0]));
    let lambda2 = membership(front.points().iter().map(|p| p[1]));
    let mut selected = 0;
    let mut lambda_max = f64::NEG_INFINITY;
    for (i, (a, b)) in lambda1.iter().zip(&lambda2).enumerate() {
        let l = 0.5 * (a + b);
        if l > lambda_max {
            lambda_max = l;
            selected = i;
        }
    }
    Ok(AfmfResult { selected, lambda_max, lambda1, lambda2 })
}
