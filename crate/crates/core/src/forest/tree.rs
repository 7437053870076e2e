//! CART decision-tree induction with weighted samples.

use super::{HyperParams, SplitCriterion};
use rand::Rng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

/// One tree node. `weight` is the weighted fraction of training samples
/// reaching the node (root = 1), kept for importance and attribution.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub enum Node {
    Split {
        feature: usize,
        threshold: f64,
        left: usize,
        right: usize,
        weight: f64,
        impurity: f64,
    },
    Leaf {
        weight: f64,
        impurity: f64,
        /// Weighted class distribution; sums to 1.
        distribution: Vec<f64>,
    },
}

/// A trained binary decision tree over numeric features.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DecisionTree {
    nodes: Vec<Node>,
    n_classes: usize,
    depth: usize,
}

impl DecisionTree {
    pub fn nodes(&self) -> &[Node] {
        &self.nodes
    }

    pub fn depth(&self) -> usize {
        self.depth
    }

    pub fn n_classes(&self) -> usize {
        self.n_classes
    }

    /// Leaf class distribution for an input row.
    pub fn predict_distribution(&self, x: &[f64]) -> &[f64] {
        let mut i = 0;
        loop {
            match &self.nodes[i] {
                Node::Split { feature, threshold, left, right, .. } => {
                    i = if x[*feature] <= *threshold { *left } else { *right };
                }
                Node::Leaf { distribution, .. } => return distribution,
            }
        }
    }

    /// Adds each split's weighted impurity decrease to `acc[feature]`.
    pub(crate) fn accumulate_importances(&self, acc: &mut [f64]) {
        for node in &self.nodes {
            if let Node::Split { feature, left, right, weight, impurity, .. } = node {
                let decrease =
                    weight * impurity - self.node_mass(*left) - self.node_mass(*right);
                acc[*feature] += decrease.max(0.0);
            }
        }
    }

    /// Adds the impurity decrease of every split on the decision path of
    /// `x` to `acc[feature]`.
    pub(crate) fn accumulate_path_attribution(&self, x: &[f64], acc: &mut [f64]) {
        let mut i = 0;
        loop {
            match &self.nodes[i] {
                Node::Split { feature, threshold, left, right, weight, impurity } => {
                    let decrease =
                        weight * impurity - self.node_mass(*left) - self.node_mass(*right);
                    acc[*feature] += decrease.max(0.0);
                    i = if x[*feature] <= *threshold { *left } else { *right };
                }
                Node::Leaf { .. } => return,
            }
        }
    }

    /// weight * impurity of a node.
    fn node_mass(&self, i: usize) -> f64 {
        match &self.nodes[i] {
            Node::Split { weight, impurity, .. } => weight * impurity,
            Node::Leaf { weight, impurity, .. } => weight * impurity,
        }
    }
}

/// Column-major training view shared by all trees of a forest.
pub(crate) struct TrainingData<'a> {
    pub columns: &'a [Vec<f64>],
    pub labels: &'a [usize],
    pub sample_weights: &'a [f64],
    pub n_classes: usize,
}

impl TrainingData<'_> {
    fn n_features(&self) -> usize {
        self.columns.len()
    }
}

fn impurity(criterion: SplitCriterion, counts: &[f64], total: f64) -> f64 {
    match criterion {
        SplitCriterion::Gini => {
            let mut sum_sq = 0.0;
            for &c in counts {
                let p = c / total;
                sum_sq += p * p;
            }
            1.0 - sum_sq
        }
        SplitCriterion::Entropy => {
            let mut h = 0.0;
            for &c in counts {
                if c > 0.0 {
                    let p = c / total;
                    h -= p * p.log2();
                }
            }
            h.max(0.0)
        }
    }
}

struct TreeBuilder<'a, 'b> {
    data: &'a TrainingData<'a>,
    hp: &'a HyperParams,
    rng: &'b mut ChaCha8Rng,
    nodes: Vec<Node>,
    root_weight: f64,
    max_depth_seen: usize,
    k_features: usize,
}

impl TreeBuilder<'_, '_> {
    fn weighted_counts(&self, rows: &[usize]) -> (Vec<f64>, f64) {
        let mut counts = vec![0.0; self.data.n_classes];
        for &r in rows {
            counts[self.data.labels[r]] += self.data.sample_weights[r];
        }
        let total = counts.iter().sum();
        (counts, total)
    }

    fn candidate_features(&mut self) -> Vec<usize> {
        let n = self.data.n_features();
        let mut order: Vec<usize> = (0..n).collect();
        for i in 0..self.k_features {
            let j = self.rng.gen_range(i..n);
            order.swap(i, j);
        }
        order.truncate(self.k_features);
        order
    }

    /// Best (gain, feature, threshold) over the candidate features, with
    /// splits at midpoints between consecutive distinct sorted values.
    fn best_split(
        &mut self,
        rows: &[usize],
        parent_counts: &[f64],
        parent_total: f64,
        parent_impurity: f64,
    ) -> Option<(f64, usize, f64)> {
        let candidates = self.candidate_features();
        let criterion = self.hp.criterion;
        let parent_mass = parent_total * parent_impurity;

        let n_classes = self.data.n_classes;
        let mut best: Option<(f64, usize, f64)> = None;
        let mut sorted: Vec<(f64, usize)> = Vec::with_capacity(rows.len());
        let mut left_counts = vec![0.0; n_classes];
        let mut right_counts = vec![0.0; n_classes];
        for feature in candidates {
            let column = &self.data.columns[feature];
            sorted.clear();
            sorted.extend(rows.iter().map(|&r| (column[r], r)));
            sorted.sort_by(|a, b| a.0.total_cmp(&b.0));
            if sorted[0].0 == sorted[sorted.len() - 1].0 {
                continue; // single distinct value
            }

            left_counts.iter_mut().for_each(|c| *c = 0.0);
            let mut left_total = 0.0;
            for i in 0..sorted.len() - 1 {
                let (value, row) = sorted[i];
                let w = self.data.sample_weights[row];
                left_counts[self.data.labels[row]] += w;
                left_total += w;
                let next_value = sorted[i + 1].0;
                if value == next_value {
                    continue;
                }
                let right_total = parent_total - left_total;
                for c in 0..n_classes {
                    right_counts[c] = parent_counts[c] - left_counts[c];
                }
                let left_imp = impurity(criterion, &left_counts, left_total);
                let right_imp = impurity(criterion, &right_counts, right_total);
                // Concavity keeps the true gain >= 0; clamp float noise.
                // Zero-gain splits on impure nodes are taken (XOR-style
                // targets need them), so any valid boundary beats none.
                let gain =
                    (parent_mass - left_total * left_imp - right_total * right_imp).max(0.0);
                if best.is_none_or(|(g, _, _)| gain > g) {
                    // The midpoint of two adjacent floats can round up to
                    // the larger one, which would leave the right child
                    // empty under `x <= threshold`; fall back to the
                    // smaller value in that case.
                    let mut threshold = (value + next_value) / 2.0;
                    if threshold >= next_value {
                        threshold = value;
                    }
                    best = Some((gain, feature, threshold));
                }
            }
        }
        best
    }

    fn build(&mut self, rows: Vec<usize>, depth: usize) -> usize {
        let (counts, total) = self.weighted_counts(&rows);
        debug_assert!(total > 0.0, "node without weighted samples");
        let node_impurity = impurity(self.hp.criterion, &counts, total);
        let weight = total / self.root_weight;
        self.max_depth_seen = self.max_depth_seen.max(depth);

        let depth_reached = self.hp.max_depth.is_some_and(|d| depth >= d);
        let split = if node_impurity <= 0.0 || depth_reached || rows.len() < 2 {
            None
        } else {
            self.best_split(&rows, &counts, total, node_impurity)
        };

        match split {
            None => {
                let distribution = counts.iter().map(|c| c / total).collect();
                self.nodes.push(Node::Leaf { weight, impurity: node_impurity, distribution });
                self.nodes.len() - 1
            }
            Some((_, feature, threshold)) => {
                let column = &self.data.columns[feature];
                let (left_rows, right_rows): (Vec<usize>, Vec<usize>) =
                    rows.into_iter().partition(|&r| column[r] <= threshold);
                let index = self.nodes.len();
                // Placeholder, patched once the children exist.
                self.nodes.push(Node::Split {
                    feature,
                    threshold,
                    left: 0,
                    right: 0,
                    weight,
                    impurity: node_impurity,
                });
                let left = self.build(left_rows, depth + 1);
                let right = self.build(right_rows, depth + 1);
                if let Node::Split { left: l, right: r, .. } = &mut self.nodes[index] {
                    *l = left;
                    *r = right;
                }
                index
            }
        }
    }
}

/// Trains one CART tree on the given row indices (duplicates act as
/// repeated samples, which is how bootstrap resampling enters).
pub(crate) fn train_tree(
    data: &TrainingData,
    rows: Vec<usize>,
    hp: &HyperParams,
    rng: &mut ChaCha8Rng,
) -> DecisionTree {
    debug_assert!(!rows.is_empty());
    let root_weight: f64 = rows.iter().map(|&r| data.sample_weights[r]).sum();
    let k_features = hp.max_features.resolve(data.n_features());
    let mut builder = TreeBuilder {
        data,
        hp,
        rng,
        nodes: Vec::new(),
        root_weight,
        max_depth_seen: 0,
        k_features,
    };
    builder.build(rows, 0);
    DecisionTree {
        nodes: builder.nodes,
        n_classes: data.n_classes,
        depth: builder.max_depth_seen,
    }
}
