//! Random forest of Gini-split decision trees.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::{ClassifierError, Result};
use crate::rng::XorShift64Star;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct ForestParams {
    pub n_trees: usize,
    /// `None` grows until leaves are pure or too small to split.
    pub max_depth: Option<usize>,
    pub min_leaf: usize,
    /// `None` means `ceil(sqrt(d))`.
    pub features_per_split: Option<usize>,
    pub bootstrap: bool,
}

impl Default for ForestParams {
    fn default() -> Self {
        Self { n_trees: 100, max_depth: None, min_leaf: 1, features_per_split: None, bootstrap: true }
    }
}

impl ForestParams {
    pub fn resolved_features(&self, dim: usize) -> usize {
        self.features_per_split.unwrap_or_else(|| (dim as f64).sqrt().ceil() as usize).clamp(1, dim.max(1))
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum Node {
    Split {
        feature: usize,
        threshold: f64,
        left: usize,
        right: usize,
    },
    /// Class fractions `[p0, p1]` of the training samples reaching the leaf.
    Leaf {
        fractions: [f64; 2],
    },
}

/// Nodes are stored in preorder; node 0 is the root.
#[derive(Debug, Clone, PartialEq)]
pub struct DecisionTree {
    pub nodes: Vec<Node>,
}

impl DecisionTree {
    pub fn score(&self, x: &[f64]) -> f64 {
        let mut i = 0;
        loop {
            match &self.nodes[i] {
                Node::Split { feature, threshold, left, right } => {
                    i = if x[*feature] <= *threshold { *left } else { *right };
                }
                Node::Leaf { fractions } => return fractions[1],
            }
        }
    }

    pub fn depth(&self) -> usize {
        fn walk(nodes: &[Node], i: usize) -> usize {
            match &nodes[i] {
                Node::Split { left, right, .. } => 1 + walk(nodes, *left).max(walk(nodes, *right)),
                Node::Leaf { .. } => 0,
            }
        }
        walk(&self.nodes, 0)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ForestModel {
    pub trees: Vec<DecisionTree>,
}

impl ForestModel {
    pub fn score(&self, x: &[f64]) -> f64 {
        self.trees.iter().map(|t| t.score(x)).sum::<f64>() / self.trees.len() as f64
    }
}

fn gini(n0: usize, n1: usize) -> f64 {
    let n = (n0 + n1) as f64;
    if n == 0.0 {
        return 0.0;
    }
    let p0 = n0 as f64 / n;
    let p1 = n1 as f64 / n;
    1.0 - p0 * p0 - p1 * p1
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SplitCandidate {
    pub feature: usize,
    pub threshold: f64,
    /// Parent impurity minus the size-weighted child impurity.
    pub gain: f64,
}

/// Best threshold over `features` for the samples in `indices`. Thresholds are
/// midpoints between consecutive distinct values; both sides must keep at
/// least `min_leaf` samples. Earlier features win exact gain ties.
pub fn best_split(
    rows: &[Vec<f64>],
    labels: &[u8],
    indices: &[usize],
    features: &[usize],
    min_leaf: usize,
) -> Option<SplitCandidate> {
    let n = indices.len();
    let total1 = indices.iter().filter(|&&i| labels[i] == 1).count();
    let parent = gini(n - total1, total1);
    let mut best: Option<SplitCandidate> = None;
    let mut order: Vec<(f64, u8)> = Vec::with_capacity(n);
    for &f in features {
        order.clear();
        order.extend(indices.iter().map(|&i| (rows[i][f], labels[i])));
        order.sort_by(|a, b| a.0.total_cmp(&b.0));
        let mut left1 = 0;
        for k in 1..n {
            left1 += order[k - 1].1 as usize;
            let (lo, hi) = (order[k - 1].0, order[k].0);
            if lo == hi || k < min_leaf || n - k < min_leaf {
                continue;
            }
            let right1 = total1 - left1;
            let weighted =
                (k as f64 * gini(k - left1, left1) + (n - k) as f64 * gini(n - k - right1, right1)) / n as f64;
            let gain = parent - weighted;
            if best.is_none_or(|b| gain > b.gain) {
                let mut threshold = lo + (hi - lo) / 2.0;
                if threshold >= hi {
                    threshold = lo;
                }
                best = Some(SplitCandidate { feature: f, threshold, gain });
            }
        }
    }
    best
}

struct Grower<'a> {
    rows: &'a [Vec<f64>],
    labels: &'a [u8],
    params: &'a ForestParams,
    mtry: usize,
    rng: XorShift64Star,
    nodes: Vec<Node>,
}

impl Grower<'_> {
    fn leaf(&self, indices: &[usize]) -> Node {
        let n1 = indices.iter().filter(|&&i| self.labels[i] == 1).count();
        let p1 = n1 as f64 / indices.len() as f64;
        Node::Leaf { fractions: [1.0 - p1, p1] }
    }

    /// Features are visited in a random order; the search stops after `mtry`
    /// of them once a valid split has been seen.
    fn choose_split(&mut self, indices: &[usize]) -> Option<SplitCandidate> {
        let dim = self.rows[0].len();
        let mut features: Vec<usize> = (0..dim).collect();
        self.rng.shuffle(&mut features);
        let mut best: Option<SplitCandidate> = None;
        for (visited, &f) in features.iter().enumerate() {
            if visited >= self.mtry && best.is_some() {
                break;
            }
            if let Some(c) = best_split(self.rows, self.labels, indices, &[f], self.params.min_leaf) {
                if best.is_none_or(|b| c.gain > b.gain) {
                    best = Some(c);
                }
            }
        }
        best
    }

    fn grow(&mut self, indices: Vec<usize>, depth: usize) -> usize {
        let id = self.nodes.len();
        let n1 = indices.iter().filter(|&&i| self.labels[i] == 1).count();
        let pure = n1 == 0 || n1 == indices.len();
        let capped = self.params.max_depth.is_some_and(|d| depth >= d);
        if pure || capped || indices.len() < 2 * self.params.min_leaf.max(1) {
            let leaf = self.leaf(&indices);
            self.nodes.push(leaf);
            return id;
        }
        let Some(split) = self.choose_split(&indices) else {
            let leaf = self.leaf(&indices);
            self.nodes.push(leaf);
            return id;
        };
        self.nodes.push(Node::Leaf { fractions: [0.0, 0.0] });
        let (l, r): (Vec<usize>, Vec<usize>) =
            indices.into_iter().partition(|&i| self.rows[i][split.feature] <= split.threshold);
        let left = self.grow(l, depth + 1);
        let right = self.grow(r, depth + 1);
        self.nodes[id] = Node::Split { feature: split.feature, threshold: split.threshold, left, right };
        id
    }
}

fn grow_tree(rows: &[Vec<f64>], labels: &[u8], params: &ForestParams, seed: u64, t: usize) -> DecisionTree {
    let mut rng = XorShift64Star::substream(seed, &format!("rf-tree/{t}"));
    let n = rows.len();
    let indices: Vec<usize> =
        if params.bootstrap { (0..n).map(|_| rng.below_usize(n)).collect() } else { (0..n).collect() };
    let mut g = Grower { rows, labels, params, mtry: params.resolved_features(rows[0].len()), rng, nodes: Vec::new() };
    g.grow(indices, 0);
    DecisionTree { nodes: g.nodes }
}

/// Trees are grown in parallel; each draws from its own sub-stream, so the
/// result does not depend on scheduling.
pub(crate) fn fit_forest(rows: &[Vec<f64>], labels: &[u8], params: &ForestParams, seed: u64) -> Result<ForestModel> {
    if params.n_trees == 0 {
        return Err(ClassifierError::InvalidHyperparameter("n_trees must be at least 1".into()));
    }
    if params.min_leaf == 0 {
        return Err(ClassifierError::InvalidHyperparameter("min_leaf must be at least 1".into()));
    }
    let trees = (0..params.n_trees).into_par_iter().map(|t| grow_tree(rows, labels, params, seed, t)).collect();
    Ok(ForestModel { trees })
}
