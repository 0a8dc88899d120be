use alloc::vec::Vec;

use super::{dist2, ParamPoint};
use crate::error::{GravityError, Result};

/// One agglomeration. Leaves are `0..n`; the cluster formed at step `s` gets id `n + s`.
#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct MergeStep {
    /// Smaller cluster id.
    pub a: usize,
    /// Larger cluster id.
    pub b: usize,
    /// Ward distance `sqrt(2 · ΔSSE)`; equals the Euclidean distance for two leaves.
    pub distance: f64,
    /// Points in the merged cluster.
    pub size: usize,
}

/// Full merge history, `n - 1` steps.
#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct MergeTree {
    /// Number of leaves.
    pub n_leaves: usize,
    /// Merges in order.
    pub steps: Vec<MergeStep>,
}

impl MergeTree {
    /// Flat labels obtained by undoing the last `k - 1` merges, numbered by first leaf.
    pub fn cut(&self, k: usize) -> Vec<usize> {
        let n = self.n_leaves;
        let k = k.clamp(1, n.max(1));
        let mut parent: Vec<usize> = (0..2 * n).collect();
        fn root(parent: &mut [usize], mut x: usize) -> usize {
            while parent[x] != x {
                parent[x] = parent[parent[x]];
                x = parent[x];
            }
            x
        }
        for (s, step) in self.steps.iter().take(n - k).enumerate() {
            let id = n + s;
            parent[step.a] = id;
            parent[step.b] = id;
        }
        let mut labels = alloc::vec![usize::MAX; n];
        let mut roots: Vec<usize> = Vec::new();
        for (leaf, label) in labels.iter_mut().enumerate() {
            let r = root(&mut parent, leaf);
            *label = match roots.iter().position(|&x| x == r) {
                Some(p) => p,
                None => {
                    roots.push(r);
                    roots.len() - 1
                }
            };
        }
        labels
    }
}

/// Ward-linkage agglomerative clustering on Euclidean (δ, β).
///
/// Cluster distances are updated with the Lance–Williams recurrence. The pair with
/// the smallest distance merges first; ties go to the lowest `(a, b)` ids.
pub fn agglomerate(points: &[ParamPoint]) -> Result<MergeTree> {
    let n = points.len();
    if n < 2 {
        return Err(GravityError::TooFewObservations { needed: 2, got: n });
    }
    if let Some(i) = points.iter().position(|p| !(p.delta.is_finite() && p.beta.is_finite())) {
        return Err(GravityError::NonFinite(i));
    }
    // active clusters: (id, size); dist is indexed by slot in `active`
    let mut active: Vec<(usize, usize)> = (0..n).map(|i| (i, 1)).collect();
    let mut dist: Vec<Vec<f64>> = (0..n)
        .map(|i| (0..n).map(|j| libm::sqrt(dist2(points[i].coords(), points[j].coords()))).collect())
        .collect();
    let mut steps = Vec::with_capacity(n - 1);

    for s in 0..n - 1 {
        let mut best = (f64::INFINITY, usize::MAX, usize::MAX, 0, 0);
        for u in 0..active.len() {
            for v in u + 1..active.len() {
                let (a, b) = min_max(active[u].0, active[v].0);
                let d = dist[u][v];
                if d < best.0 || (d == best.0 && (a, b) < (best.1, best.2)) {
                    best = (d, a, b, u, v);
                }
            }
        }
        let (d, a, b, u, v) = best;
        let (nu, nv) = (active[u].1 as f64, active[v].1 as f64);
        let size = active[u].1 + active[v].1;

        let mut merged = Vec::with_capacity(active.len() - 1);
        for w in 0..active.len() {
            if w == u || w == v {
                continue;
            }
            let nw = active[w].1 as f64;
            let (duw, dvw) = (dist[u][w], dist[v][w]);
            let sq = ((nu + nw) * duw * duw + (nv + nw) * dvw * dvw - nw * d * d) / (nu + nv + nw);
            merged.push(libm::sqrt(sq.max(0.0)));
        }

        // slot u becomes the new cluster, slot v is removed
        let mut k = 0;
        for w in 0..active.len() {
            if w == u || w == v {
                continue;
            }
            dist[u][w] = merged[k];
            dist[w][u] = merged[k];
            k += 1;
        }
        dist[u][u] = 0.0;
        active[u] = (n + s, size);
        active.remove(v);
        dist.remove(v);
        for row in &mut dist {
            row.remove(v);
        }
        steps.push(MergeStep { a, b, distance: d, size });
    }
    Ok(MergeTree { n_leaves: n, steps })
}

fn min_max(a: usize, b: usize) -> (usize, usize) {
    if a < b {
        (a, b)
    } else {
        (b, a)
    }
}
