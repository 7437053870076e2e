//! Shared data containers: labeled domain sets and extracted feature
//! matrices.

use std::collections::BTreeSet;
use std::io::{self, BufRead, Write};

/// Domains plus class labels with a stable, sorted class index.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LabeledDataset {
    domains: Vec<String>,
    labels: Vec<usize>,
    class_names: Vec<String>,
}

impl LabeledDataset {
    /// Builds a dataset from (domain, class-name) pairs. Class indices are
    /// assigned by sorting the distinct class names.
    pub fn from_pairs(pairs: Vec<(String, String)>) -> Self {
        let class_names: Vec<String> = pairs
            .iter()
            .map(|(_, c)| c.clone())
            .collect::<BTreeSet<_>>()
            .into_iter()
            .collect();
        let index = |name: &str| class_names.iter().position(|c| c == name).unwrap();
        let mut domains = Vec::with_capacity(pairs.len());
        let mut labels = Vec::with_capacity(pairs.len());
        for (domain, class) in pairs {
            labels.push(index(&class));
            domains.push(domain);
        }
        LabeledDataset { domains, labels, class_names }
    }

    pub fn domains(&self) -> &[String] {
        &self.domains
    }

    pub fn labels(&self) -> &[usize] {
        &self.labels
    }

    pub fn class_names(&self) -> &[String] {
        &self.class_names
    }

    pub fn n_classes(&self) -> usize {
        self.class_names.len()
    }

    pub fn len(&self) -> usize {
        self.domains.len()
    }

    pub fn is_empty(&self) -> bool {
        self.domains.is_empty()
    }

    /// Per-class sample counts.
    pub fn class_counts(&self) -> Vec<usize> {
        let mut counts = vec![0usize; self.class_names.len()];
        for &l in &self.labels {
            counts[l] += 1;
        }
        counts
    }

    /// Writes the dataset file: a `domain,label` header then one row per
    /// sample with the class name as label.
    pub fn write_csv<W: Write>(&self, mut w: W) -> io::Result<()> {
        writeln!(w, "domain,label")?;
        for (domain, &label) in self.domains.iter().zip(&self.labels) {
            writeln!(w, "{domain},{}", self.class_names[label])?;
        }
        Ok(())
    }

    /// Reads a dataset file written by [`Self::write_csv`].
    pub fn read_csv<R: BufRead>(r: R) -> io::Result<Self> {
        let mut pairs = Vec::new();
        for (lineno, line) in r.lines().enumerate() {
            let line = line?;
            let line = line.trim();
            if line.is_empty() {
                continue;
            }
            if lineno == 0 && line == "domain,label" {
                continue;
            }
            let (domain, label) = line.split_once(',').ok_or_else(|| {
                io::Error::new(
                    io::ErrorKind::InvalidData,
                    format!("line {}: expected 'domain,label', got {line:?}", lineno + 1),
                )
            })?;
            pairs.push((domain.to_string(), label.to_string()));
        }
        Ok(LabeledDataset::from_pairs(pairs))
    }
}

/// A rectangular matrix of extracted feature values with aligned labels.
#[derive(Debug, Clone, PartialEq)]
pub struct FeatureMatrix {
    feature_ids: Vec<String>,
    class_names: Vec<String>,
    /// Row-major values, `rows * width` long.
    values: Vec<f64>,
    labels: Vec<usize>,
    width: usize,
}

impl FeatureMatrix {
    pub fn from_rows(
        feature_ids: Vec<String>,
        class_names: Vec<String>,
        rows: Vec<Vec<f64>>,
        labels: Vec<usize>,
    ) -> Self {
        let width = feature_ids.len();
        assert_eq!(rows.len(), labels.len(), "rows and labels must align");
        let mut values = Vec::with_capacity(rows.len() * width);
        for row in rows {
            assert_eq!(row.len(), width, "all rows must have catalog width");
            values.extend(row);
        }
        FeatureMatrix { feature_ids, class_names, values, labels, width }
    }

    pub fn feature_ids(&self) -> &[String] {
        &self.feature_ids
    }

    pub fn class_names(&self) -> &[String] {
        &self.class_names
    }

    pub fn labels(&self) -> &[usize] {
        &self.labels
    }

    pub fn n_rows(&self) -> usize {
        self.labels.len()
    }

    pub fn n_features(&self) -> usize {
        self.width
    }

    pub fn n_classes(&self) -> usize {
        self.class_names.len()
    }

    pub fn is_empty(&self) -> bool {
        self.labels.is_empty()
    }

    pub fn row(&self, i: usize) -> &[f64] {
        &self.values[i * self.width..(i + 1) * self.width]
    }

    pub fn value(&self, row: usize, col: usize) -> f64 {
        self.values[row * self.width + col]
    }

    pub fn column(&self, col: usize) -> Vec<f64> {
        (0..self.n_rows()).map(|r| self.value(r, col)).collect()
    }

    pub fn class_counts(&self) -> Vec<usize> {
        let mut counts = vec![0usize; self.class_names.len().max(self.labels.iter().map(|&l| l + 1).max().unwrap_or(0))];
        for &l in &self.labels {
            counts[l] += 1;
        }
        counts
    }

    /// A new matrix holding only the given feature columns, in the given
    /// order.
    pub fn select_columns(&self, cols: &[usize]) -> FeatureMatrix {
        let feature_ids = cols.iter().map(|&c| self.feature_ids[c].clone()).collect();
        let mut values = Vec::with_capacity(self.n_rows() * cols.len());
        for r in 0..self.n_rows() {
            for &c in cols {
                values.push(self.value(r, c));
            }
        }
        FeatureMatrix {
            feature_ids,
            class_names: self.class_names.clone(),
            values,
            labels: self.labels.clone(),
            width: cols.len(),
        }
    }

    /// A new matrix holding only the given rows, in the given order.
    pub fn select_rows(&self, rows: &[usize]) -> FeatureMatrix {
        let mut values = Vec::with_capacity(rows.len() * self.width);
        let mut labels = Vec::with_capacity(rows.len());
        for &r in rows {
            values.extend_from_slice(self.row(r));
            labels.push(self.labels[r]);
        }
        FeatureMatrix {
            feature_ids: self.feature_ids.clone(),
            class_names: self.class_names.clone(),
            values,
            labels,
            width: self.width,
        }
    }

    /// Replaces one column's values; used by permutation importance.
    pub(crate) fn set_column(&mut self, col: usize, values: &[f64]) {
        assert_eq!(values.len(), self.n_rows());
        for (r, &v) in values.iter().enumerate() {
            self.values[r * self.width + col] = v;
        }
    }
}
