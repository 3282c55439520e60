use std::collections::BTreeMap;

use serde::Serialize;

/// Precision, recall and F1 of one class, as percentages.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ClassMetrics {
    pub precision: f64,
    pub recall: f64,
    pub f1: f64,
    /// Test images of this class that were classified.
    pub count: usize,
}

/// Aggregate scores over a confusion matrix, weighted by class support.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Metrics {
    pub accuracy: f64,
    pub precision: f64,
    pub recall: f64,
    pub f1: f64,
    pub per_class: BTreeMap<String, ClassMetrics>,
}

/// Square confusion matrix: rows are true classes, columns predictions.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Confusion {
    pub classes: Vec<String>,
    pub counts: Vec<Vec<usize>>,
}

impl Confusion {
    pub fn new(classes: Vec<String>) -> Self {
        let n = classes.len();
        Confusion { classes, counts: vec![vec![0; n]; n] }
    }

    fn index(&self, class: &str) -> Option<usize> {
        self.classes.iter().position(|c| c == class)
    }

    /// Records one outcome. Classes outside the matrix are ignored and
    /// reported as `false`.
    pub fn add(&mut self, truth: &str, predicted: &str) -> bool {
        match (self.index(truth), self.index(predicted)) {
            (Some(t), Some(p)) => {
                self.counts[t][p] += 1;
                true
            }
            _ => false,
        }
    }

    pub fn get(&self, truth: &str, predicted: &str) -> usize {
        match (self.index(truth), self.index(predicted)) {
            (Some(t), Some(p)) => self.counts[t][p],
            _ => 0,
        }
    }

    pub fn total(&self) -> usize {
        self.counts.iter().flatten().sum()
    }

    /// CSV with a header row of predicted classes and one row per true class.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("true\\predicted");
        for c in &self.classes {
            out.push(',');
            out.push_str(c);
        }
        out.push('\n');
        for (c, row) in self.classes.iter().zip(&self.counts) {
            out.push_str(c);
            for v in row {
                out.push_str(&format!(",{v}"));
            }
            out.push('\n');
        }
        out
    }

    pub fn metrics(&self) -> Metrics {
        let n = self.classes.len();
        let total = self.total();
        let pct = |num: usize, den: usize| if den == 0 { 0.0 } else { 100.0 * num as f64 / den as f64 };
        let mut per_class = BTreeMap::new();
        let (mut wp, mut wr, mut wf) = (0.0, 0.0, 0.0);
        let mut correct = 0;
        for i in 0..n {
            let tp = self.counts[i][i];
            correct += tp;
            let support: usize = self.counts[i].iter().sum();
            let predicted: usize = (0..n).map(|r| self.counts[r][i]).sum();
            let (precision, recall) = (pct(tp, predicted), pct(tp, support));
            let f1 = if precision + recall > 0.0 { 2.0 * precision * recall / (precision + recall) } else { 0.0 };
            let w = support as f64;
            wp += w * precision;
            wr += w * recall;
            wf += w * f1;
            per_class.insert(self.classes[i].clone(), ClassMetrics { precision, recall, f1, count: support });
        }
        let avg = |s: f64| if total == 0 { 0.0 } else { s / total as f64 };
        Metrics { accuracy: pct(correct, total), precision: avg(wp), recall: avg(wr), f1: avg(wf), per_class }
    }
}
