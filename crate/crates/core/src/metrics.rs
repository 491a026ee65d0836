//! Pareto front quality indicators and cross-run statistics.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Nondominated objective pairs sorted by strictly increasing `f1` (and so
/// strictly decreasing `f2`).
#[derive(Debug, Clone, Default, PartialEq)]
pub struct ParetoFront {
    points: Vec<[f64; 2]>,
}

impl ParetoFront {
    /// Validates an already nondominated, sorted point list.
    pub fn new(points: Vec<[f64; 2]>) -> Result<Self> {
        if let Some(p) = points.iter().find(|p| !(p[0].is_finite() && p[1].is_finite())) {
            return Err(Error::InvalidInput(format!("non-finite front point {p:?}")));
        }
        for w in points.windows(2) {
            if !(w[0][0] < w[1][0] && w[0][1] > w[1][1]) {
                return Err(Error::InvalidInput(format!(
                    "front points {:?} and {:?} are unsorted or dominated",
                    w[0], w[1]
                )));
            }
        }
        Ok(Self { points })
    }

    /// Nondominated subset of arbitrary finite points, with the index of each
    /// kept point in the input. Duplicates keep their first occurrence.
    pub fn extract(points: &[[f64; 2]]) -> (Self, Vec<usize>) {
        let mut order: Vec<usize> =
            (0..points.len()).filter(|&i| points[i][0].is_finite() && points[i][1].is_finite()).collect();
        order.sort_by(|&a, &b| {
            points[a][0].total_cmp(&points[b][0]).then(points[a][1].total_cmp(&points[b][1])).then(a.cmp(&b))
        });
        let mut kept = Vec::new();
        let mut best_f2 = f64::INFINITY;
        for i in order {
            if points[i][1] < best_f2 {
                best_f2 = points[i][1];
                kept.push(i);
            }
        }
        let front = Self { points: kept.iter().map(|&i| points[i]).collect() };
        (front, kept)
    }

    pub fn points(&self) -> &[[f64; 2]] {
        &self.points
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    /// `(f1_min, f2_max)` and `(f1_max, f2_min)`.
    pub fn extremes(&self) -> Option<([f64; 2], [f64; 2])> {
        Some((*self.points.first()?, *self.points.last()?))
    }
}

/// Per-objective scales applied before computing indicators.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Normalization {
    pub f1_scale: f64,
    pub f2_scale: f64,
}

impl Normalization {
    pub const IDENTITY: Normalization = Normalization { f1_scale: 1.0, f2_scale: 1.0 };

    pub fn new(f1_scale: f64, f2_scale: f64) -> Self {
        Self { f1_scale, f2_scale }
    }

    pub fn apply(&self, p: [f64; 2]) -> [f64; 2] {
        [p[0] / self.f1_scale, p[1] / self.f2_scale]
    }
}

/// Area dominated by the normalized front and bounded by `reference`.
///
/// Every normalized point must lie in `[0, reference]`.
pub fn hyperarea(front: &ParetoFront, reference: [f64; 2], norm: &Normalization) -> Result<f64> {
    let pts: Vec<[f64; 2]> = front.points().iter().map(|&p| norm.apply(p)).collect();
    if let Some(p) = pts.iter().find(|p| !(0.0..=reference[0]).contains(&p[0]) || !(0.0..=reference[1]).contains(&p[1]))
    {
        return Err(Error::MetricDomain(format!("normalized point {p:?} outside [0, {reference:?}]")));
    }
    // sorted by f1 ascending with f2 descending: sweep left to right
    let area = pts.iter().enumerate().fold(0.0, |acc, (i, p)| {
        let right = pts.get(i + 1).map_or(reference[0], |q| q[0]);
        acc + (right - p[0]) * (reference[1] - p[1])
    });
    Ok(area)
}

/// Spread uniformity: sample standard deviation of each point's Manhattan
/// distance to its nearest neighbour, on normalized objectives. Zero for
/// fronts with fewer than two points.
pub fn spacing(front: &ParetoFront, norm: &Normalization) -> f64 {
    let n = front.len();
    if n < 2 {
        return 0.0;
    }
    let pts: Vec<[f64; 2]> = front.points().iter().map(|&p| norm.apply(p)).collect();
    let d: Vec<f64> = (0..n)
        .map(|i| {
            (0..n)
                .filter(|&j| j != i)
                .map(|j| (pts[i][0] - pts[j][0]).abs() + (pts[i][1] - pts[j][1]).abs())
                .fold(f64::INFINITY, f64::min)
        })
        .collect();
    let mean = d.iter().sum::<f64>() / n as f64;
    (d.iter().map(|di| (mean - di).powi(2)).sum::<f64>() / (n - 1) as f64).sqrt()
}

/// Smallest evaluation count at which the hyperarea reaches
/// `(1 - epsilon)` of its final value. `history` holds
/// `(evaluations, hyperarea)` pairs in run order and must be non-empty.
pub fn fe_to_converge(history: &[(usize, f64)], epsilon: f64) -> Result<usize> {
    let &(last_fe, final_ha) = history.last().ok_or_else(|| Error::MetricDomain("empty convergence history".into()))?;
    let threshold = (1.0 - epsilon) * final_ha;
    Ok(history.iter().find(|(_, ha)| *ha >= threshold).map_or(last_fe, |&(fe, _)| fe))
}

/// Mean, sample standard deviation and quartiles of one metric over runs.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RunStats {
    pub mean: f64,
    pub std: f64,
    /// Minimum, lower quartile, median, upper quartile, maximum.
    pub quartiles: [f64; 5],
}

impl RunStats {
    pub fn median(&self) -> f64 {
        self.quartiles[2]
    }
}

/// Quantile by linear interpolation between order statistics.
pub fn quantile(sorted: &[f64], q: f64) -> f64 {
    let pos = q * (sorted.len() - 1) as f64;
    let lo = pos.floor() as usize;
    let hi = pos.ceil() as usize;
    sorted[lo] + (sorted[hi] - sorted[lo]) * (pos - lo as f64)
}

pub fn aggregate_stats(values: &[f64]) -> Result<RunStats> {
    let n = values.len();
    if n < 2 {
        return Err(Error::StatsDomain(n));
    }
    let mean = values.iter().sum::<f64>() / n as f64;
    let std = (values.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / (n - 1) as f64).sqrt();
    let mut sorted = values.to_vec();
    sorted.sort_by(f64::total_cmp);
    let quartiles = [0.0, 0.25, 0.5, 0.75, 1.0].map(|q| quantile(&sorted, q));
    Ok(RunStats { mean, std, quartiles })
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    const UNIT: [f64; 2] = [1.0, 1.0];

    #[test]
    fn single_point_area() {
        let f = ParetoFront::new(vec![[0.5, 0.5]]).unwrap();
        assert_relative_eq!(hyperarea(&f, UNIT, &Normalization::IDENTITY).unwrap(), 0.25, epsilon = 1e-15);
    }

    #[test]
    fn empty_front_area() {
        assert_eq!(hyperarea(&ParetoFront::default(), UNIT, &Normalization::IDENTITY).unwrap(), 0.0);
    }

    #[test]
    fn two_point_area() {
        let f = ParetoFront::new(vec![[0.2, 0.8], [0.8, 0.2]]).unwrap();
        // union of [0.2,1]x[0.8,1] and [0.8,1]x[0.2,1]: 0.16 + 0.16 - 0.04
        assert_relative_eq!(hyperarea(&f, UNIT, &Normalization::IDENTITY).unwrap(), 0.28, epsilon = 1e-12);
    }

    #[test]
    fn area_rejects_points_outside_box() {
        let f = ParetoFront::new(vec![[9.0, 0.5]]).unwrap();
        assert!(matches!(hyperarea(&f, UNIT, &Normalization::new(8.0, 2.0)), Err(Error::MetricDomain(_))));
        assert!(hyperarea(&f, UNIT, &Normalization::new(10.0, 2.0)).is_ok());
    }

    #[test]
    fn front_validation() {
        assert!(ParetoFront::new(vec![[0.1, 0.5], [0.2, 0.6]]).is_err());
        assert!(ParetoFront::new(vec![[0.2, 0.5], [0.1, 0.6]]).is_err());
        assert!(ParetoFront::new(vec![[0.1, 0.6], [0.1, 0.5]]).is_err());
    }

    #[test]
    fn extract_drops_dominated_and_duplicates() {
        let pts = [[3.0, 1.0], [1.0, 3.0], [2.0, 2.0], [2.0, 2.5], [1.0, 3.0], [4.0, 1.0], [f64::INFINITY, 0.0]];
        let (f, idx) = ParetoFront::extract(&pts);
        assert_eq!(f.points(), &[[1.0, 3.0], [2.0, 2.0], [3.0, 1.0]]);
        assert_eq!(idx, vec![1, 2, 0]);
    }

    #[test]
    fn spacing_examples() {
        let n = Normalization::IDENTITY;
        let even = ParetoFront::new(vec![[0.0, 0.3], [0.1, 0.2], [0.2, 0.1], [0.3, 0.0]]).unwrap();
        let uneven = ParetoFront::new(vec![[0.0, 1.0], [0.25, 0.75], [0.5, 0.5], [1.0, 0.0]]).unwrap();
        assert!(spacing(&even, &n) < 1e-15);
        assert!(spacing(&uneven, &n) > 0.0);
        assert_eq!(spacing(&ParetoFront::new(vec![[0.1, 0.1]]).unwrap(), &n), 0.0);

        // nearest-neighbour gaps (0.1, 0.1, 0.3)
        let f = ParetoFront::new(vec![[0.0, 0.3], [0.05, 0.25], [0.2, 0.1]]).unwrap();
        let d = [0.1, 0.1, 0.3];
        let mean: f64 = d.iter().sum::<f64>() / 3.0;
        let oracle = (d.iter().map(|x| (mean - x).powi(2)).sum::<f64>() / 2.0).sqrt();
        assert_relative_eq!(spacing(&f, &n), oracle, epsilon = 1e-9);
        assert_relative_eq!(oracle, 0.11547005383792514, epsilon = 1e-9);
    }

    #[test]
    fn convergence_count() {
        assert_eq!(fe_to_converge(&[(100, 0.3), (200, 0.3)], 0.01).unwrap(), 100);
        let hist: Vec<(usize, f64)> =
            (0..10).map(|g| (100 * (g + 1), [0.1, 0.2, 0.3, 0.35, 0.398, 0.399, 0.4, 0.4, 0.4, 0.4][g])).collect();
        assert_eq!(fe_to_converge(&hist, 0.01).unwrap(), 500);
        assert!(fe_to_converge(&[], 0.01).is_err());
    }

    #[test]
    fn textbook_stats() {
        let s = aggregate_stats(&[1.0, 2.0, 3.0, 4.0, 5.0]).unwrap();
        assert_eq!(s.mean, 3.0);
        assert_relative_eq!(s.std, 2.5f64.sqrt(), epsilon = 1e-15);
        assert_eq!(s.quartiles, [1.0, 2.0, 3.0, 4.0, 5.0]);
        let c = aggregate_stats(&[2.0; 4]).unwrap();
        assert_eq!(c.std, 0.0);
        assert_eq!(c.quartiles[0], c.quartiles[4]);
        assert!(matches!(aggregate_stats(&[1.0]), Err(Error::StatsDomain(1))));
    }

    #[test]
    fn interpolated_quartiles() {
        let s = aggregate_stats(&[4.0, 1.0, 3.0, 2.0]).unwrap();
        assert_eq!(s.quartiles, [1.0, 1.75, 2.5, 3.25, 4.0]);
    }
}
