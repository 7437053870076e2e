//! Multicollinearity collapse: average-linkage clustering on Spearman
//! rank-correlation distances, keeping one feature per cluster.

use super::SelectionReport;
use crate::dataset::FeatureMatrix;
use crate::error::SelectionError;
use std::collections::BTreeMap;

/// Average ranks (ties share the mean rank), 1-based.
fn rank_transform(column: &[f64]) -> Vec<f64> {
    let n = column.len();
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| column[a].total_cmp(&column[b]));
    let mut ranks = vec![0.0; n];
    let mut i = 0;
    while i < n {
        let mut j = i;
        while j < n && column[order[j]] == column[order[i]] {
            j += 1;
        }
        let mean_rank = (i + 1 + j) as f64 / 2.0; // mean of ranks i+1 ..= j
        for &row in &order[i..j] {
            ranks[row] = mean_rank;
        }
        i = j;
    }
    ranks
}

fn pearson(a: &[f64], b: &[f64]) -> f64 {
    let n = a.len() as f64;
    let mean_a = a.iter().sum::<f64>() / n;
    let mean_b = b.iter().sum::<f64>() / n;
    let mut cov = 0.0;
    let mut var_a = 0.0;
    let mut var_b = 0.0;
    for (&x, &y) in a.iter().zip(b) {
        cov += (x - mean_a) * (y - mean_b);
        var_a += (x - mean_a) * (x - mean_a);
        var_b += (y - mean_b) * (y - mean_b);
    }
    if var_a == 0.0 || var_b == 0.0 {
        return 0.0;
    }
    (cov / (var_a * var_b).sqrt()).clamp(-1.0, 1.0)
}

/// Spearman rank correlation of two feature columns.
pub fn spearman_rho(a: &[f64], b: &[f64]) -> f64 {
    pearson(&rank_transform(a), &rank_transform(b))
}

/// Collapses correlated features: distance `1 - |rho|`, average-linkage
/// agglomerative clustering cut at `target_clusters` clusters, keeping the
/// member with the highest MDI score per cluster. Reports the cut
/// threshold (the height of the last merge performed).
pub fn spearman_collapse(
    m: &FeatureMatrix,
    target_clusters: usize,
    mdi_scores: &[f64],
) -> Result<SelectionReport, SelectionError> {
    let width = m.n_features();
    if width < 2 {
        return Err(SelectionError::BadMatrix("collapse needs >= 2 features".into()));
    }
    if mdi_scores.len() != width {
        return Err(SelectionError::BadMatrix(format!(
            "{} MDI scores for {width} features",
            mdi_scores.len()
        )));
    }
    let target = target_clusters.clamp(1, width);

    let ranks: Vec<Vec<f64>> = (0..width).map(|f| rank_transform(&m.column(f))).collect();
    let mut distance = vec![vec![0.0; width]; width];
    for i in 0..width {
        for j in i + 1..width {
            let d = 1.0 - pearson(&ranks[i], &ranks[j]).abs();
            distance[i][j] = d;
            distance[j][i] = d;
        }
    }

    let mut clusters: Vec<Vec<usize>> = (0..width).map(|f| vec![f]).collect();
    let mut threshold = 0.0;
    while clusters.len() > target {
        let mut best = (0, 1);
        let mut best_d = f64::INFINITY;
        for i in 0..clusters.len() {
            for j in i + 1..clusters.len() {
                let mut sum = 0.0;
                for &a in &clusters[i] {
                    for &b in &clusters[j] {
                        sum += distance[a][b];
                    }
                }
                let avg = sum / (clusters[i].len() * clusters[j].len()) as f64;
                if avg < best_d {
                    best_d = avg;
                    best = (i, j);
                }
            }
        }
        let merged = clusters.remove(best.1);
        clusters[best.0].extend(merged);
        threshold = best_d;
    }

    let mut kept: Vec<usize> = clusters
        .iter()
        .map(|members| {
            let mut best = members[0];
            for &f in members {
                if mdi_scores[f] > mdi_scores[best] {
                    best = f;
                }
            }
            best
        })
        .collect();
    kept.sort_unstable();

    let mut parameters = BTreeMap::new();
    parameters.insert("target_clusters".into(), target.to_string());
    parameters.insert("threshold".into(), format!("{threshold:.6}"));
    Ok(SelectionReport {
        method: "spearman-collapse".into(),
        parameters,
        feature_ids: m.feature_ids().to_vec(),
        scores: mdi_scores.to_vec(),
        selected_ids: kept.iter().map(|&f| m.feature_ids()[f].clone()).collect(),
    })
}
