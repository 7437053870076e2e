//! Relief-family instance-based feature weighting: ReliefF with a fixed
//! neighborhood size and MultiSURF with per-instance adaptive thresholds.
//!
//! Features are min-max scaled internally so the diff metric is not
//! dominated by wide-range features. Miss contributions are weighted by
//! class priors, hits subtract, misses add; a feature that separates
//! classes accumulates positive weight.

use super::SelectionReport;
use crate::dataset::FeatureMatrix;
use crate::error::SelectionError;
use rayon::prelude::*;
use std::collections::BTreeMap;

/// Min-max scaled row-major copy of the matrix; constant features become
/// all-zero and thus contribute no diff.
struct ScaledView {
    values: Vec<f64>,
    width: usize,
}

impl ScaledView {
    fn new(m: &FeatureMatrix) -> Self {
        let n = m.n_rows();
        let width = m.n_features();
        let mut values = vec![0.0; n * width];
        for f in 0..width {
            let column = m.column(f);
            let min = column.iter().copied().fold(f64::INFINITY, f64::min);
            let max = column.iter().copied().fold(f64::NEG_INFINITY, f64::max);
            let range = max - min;
            if range > 0.0 {
                for (r, &v) in column.iter().enumerate() {
                    values[r * width + f] = (v - min) / range;
                }
            }
        }
        ScaledView { values, width }
    }

    fn row(&self, r: usize) -> &[f64] {
        &self.values[r * self.width..(r + 1) * self.width]
    }

    fn distance(&self, a: usize, b: usize) -> f64 {
        self.row(a)
            .iter()
            .zip(self.row(b))
            .map(|(x, y)| (x - y).abs())
            .sum()
    }
}

fn class_priors(labels: &[usize], n_classes: usize) -> Vec<f64> {
    let mut counts = vec![0usize; n_classes];
    for &l in labels {
        counts[l] += 1;
    }
    counts.iter().map(|&c| c as f64 / labels.len() as f64).collect()
}

fn better_than_mean(ids: &[String], weights: &[f64]) -> Vec<String> {
    let mean = weights.iter().sum::<f64>() / weights.len() as f64;
    ids.iter()
        .zip(weights)
        .filter(|(_, &w)| w > mean)
        .map(|(id, _)| id.clone())
        .collect()
}

/// Standard multiclass ReliefF over all instances with `k_neighbors`
/// nearest hits and, per other class, `k_neighbors` nearest misses.
/// Selects the features scoring strictly above the mean weight.
pub fn relieff(m: &FeatureMatrix, k_neighbors: usize) -> Result<SelectionReport, SelectionError> {
    let n = m.n_rows();
    let width = m.n_features();
    let n_classes = m.labels().iter().max().map_or(0, |l| l + 1);
    let counts = {
        let mut c = vec![0usize; n_classes];
        for &l in m.labels() {
            c[l] += 1;
        }
        c
    };
    for (class, &count) in counts.iter().enumerate() {
        if count <= k_neighbors {
            return Err(SelectionError::ClassTooSmall { class, count, need: k_neighbors });
        }
    }

    let scaled = ScaledView::new(m);
    let priors = class_priors(m.labels(), n_classes);
    let labels = m.labels();

    let per_instance: Vec<Vec<f64>> = (0..n)
        .into_par_iter()
        .map(|i| {
            let mut by_class: Vec<Vec<(f64, usize)>> = vec![Vec::new(); n_classes];
            for j in 0..n {
                if j != i {
                    by_class[labels[j]].push((scaled.distance(i, j), j));
                }
            }
            for bucket in &mut by_class {
                bucket.sort_by(|a, b| a.0.total_cmp(&b.0).then(a.1.cmp(&b.1)));
            }

            let mut delta = vec![0.0; width];
            let own = labels[i];
            let norm = (n * k_neighbors) as f64;
            for (class, bucket) in by_class.iter().enumerate() {
                let factor = if class == own {
                    -1.0 / norm
                } else {
                    priors[class] / (1.0 - priors[own]) / norm
                };
                for &(_, j) in bucket.iter().take(k_neighbors) {
                    let (a, b) = (scaled.row(i), scaled.row(j));
                    for (d, (x, y)) in delta.iter_mut().zip(a.iter().zip(b)) {
                        *d += factor * (x - y).abs();
                    }
                }
            }
            delta
        })
        .collect();

    let mut weights = vec![0.0; width];
    for delta in per_instance {
        for (w, d) in weights.iter_mut().zip(delta) {
            *w += d;
        }
    }

    let selected_ids = better_than_mean(m.feature_ids(), &weights);
    let mut parameters = BTreeMap::new();
    parameters.insert("k_neighbors".into(), k_neighbors.to_string());
    Ok(SelectionReport {
        method: "relieff".into(),
        parameters,
        feature_ids: m.feature_ids().to_vec(),
        scores: weights,
        selected_ids,
    })
}

/// MultiSURF: the neighborhood of each instance is everything closer than
/// its mean pairwise distance minus half the standard deviation. No
/// execution parameters to tune.
pub fn multisurf(m: &FeatureMatrix) -> Result<SelectionReport, SelectionError> {
    let n = m.n_rows();
    let width = m.n_features();
    let n_classes = m.labels().iter().max().map_or(0, |l| l + 1);
    {
        let mut counts = vec![0usize; n_classes];
        for &l in m.labels() {
            counts[l] += 1;
        }
        for (class, &count) in counts.iter().enumerate() {
            if count < 3 {
                return Err(SelectionError::ClassTooSmall { class, count, need: 2 });
            }
        }
    }

    let scaled = ScaledView::new(m);
    let priors = class_priors(m.labels(), n_classes);
    let labels = m.labels();

    let per_instance: Vec<Vec<f64>> = (0..n)
        .into_par_iter()
        .map(|i| {
            let distances: Vec<(f64, usize)> = (0..n)
                .filter(|&j| j != i)
                .map(|j| (scaled.distance(i, j), j))
                .collect();
            let mean = distances.iter().map(|d| d.0).sum::<f64>() / distances.len() as f64;
            let var = distances
                .iter()
                .map(|d| (d.0 - mean) * (d.0 - mean))
                .sum::<f64>()
                / distances.len() as f64;
            let threshold = mean - var.sqrt() / 2.0;

            let mut near_by_class: Vec<Vec<usize>> = vec![Vec::new(); n_classes];
            for &(d, j) in &distances {
                if d < threshold {
                    near_by_class[labels[j]].push(j);
                }
            }

            let mut delta = vec![0.0; width];
            let own = labels[i];
            for (class, near) in near_by_class.iter().enumerate() {
                if near.is_empty() {
                    continue;
                }
                let factor = if class == own {
                    -1.0 / (n as f64 * near.len() as f64)
                } else {
                    priors[class] / (1.0 - priors[own]) / (n as f64 * near.len() as f64)
                };
                for &j in near {
                    let (a, b) = (scaled.row(i), scaled.row(j));
                    for (d, (x, y)) in delta.iter_mut().zip(a.iter().zip(b)) {
                        *d += factor * (x - y).abs();
                    }
                }
            }
            delta
        })
        .collect();

    let mut weights = vec![0.0; width];
    for delta in per_instance {
        for (w, d) in weights.iter_mut().zip(delta) {
            *w += d;
        }
    }

    let selected_ids = better_than_mean(m.feature_ids(), &weights);
    Ok(SelectionReport {
        method: "multisurf".into(),
        parameters: BTreeMap::new(),
        feature_ids: m.feature_ids().to_vec(),
        scores: weights,
        selected_ids,
    })
}
