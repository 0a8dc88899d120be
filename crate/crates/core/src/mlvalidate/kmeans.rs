use alloc::vec;
use alloc::vec::Vec;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::{dist2, ParamPoint};
use crate::error::{GravityError, Result};
use crate::sum::sum;

/// Lloyd iterations per run.
pub const MAX_LLOYD_ITERATIONS: usize = 300;

/// Seed and restart count.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct KMeansConfig {
    /// RNG seed for k-means++ seeding.
    pub seed: u64,
    /// Independent runs; the lowest inertia wins.
    pub restarts: usize,
}

impl Default for KMeansConfig {
    fn default() -> Self {
        Self { seed: 0, restarts: 10 }
    }
}

/// A k-means partition with canonical labels.
///
/// Labels are ordered by centroid, lexicographically on (δ, β).
#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct ClusterModel {
    /// Number of clusters.
    pub k: usize,
    /// Cluster centres.
    pub centroids: Vec<[f64; 2]>,
    /// Cluster of each input point.
    pub assignments: Vec<usize>,
    /// Sum of squared distances to the assigned centroid.
    pub inertia: f64,
}

impl ClusterModel {
    /// Index of the closest centroid, lowest index on ties.
    pub fn nearest(&self, p: [f64; 2]) -> usize {
        nearest(&self.centroids, p)
    }
}

fn nearest(centroids: &[[f64; 2]], p: [f64; 2]) -> usize {
    let mut best = (f64::INFINITY, 0);
    for (c, &centre) in centroids.iter().enumerate() {
        let d = dist2(p, centre);
        if d < best.0 {
            best = (d, c);
        }
    }
    best.1
}

fn inertia(points: &[[f64; 2]], centroids: &[[f64; 2]], assignments: &[usize]) -> f64 {
    sum(points.iter().zip(assignments).map(|(&p, &a)| dist2(p, centroids[a])))
}

fn plus_plus(points: &[[f64; 2]], k: usize, rng: &mut ChaCha8Rng) -> Vec<[f64; 2]> {
    let mut centroids = Vec::with_capacity(k);
    centroids.push(points[rng.random_range(0..points.len())]);
    let mut d2: Vec<f64> = points.iter().map(|&p| dist2(p, centroids[0])).collect();
    while centroids.len() < k {
        let total = sum(d2.iter().copied());
        let pick = if total > 0.0 {
            let target = rng.random::<f64>() * total;
            let mut acc = 0.0;
            let mut chosen = points.len() - 1;
            for (i, &w) in d2.iter().enumerate() {
                acc += w;
                if w > 0.0 && acc > target {
                    chosen = i;
                    break;
                }
            }
            chosen
        } else {
            rng.random_range(0..points.len())
        };
        let c = points[pick];
        centroids.push(c);
        for (w, &p) in d2.iter_mut().zip(points) {
            *w = w.min(dist2(p, c));
        }
    }
    centroids
}

/// Lloyd iterations from the given centres until assignments stop changing.
fn lloyd(points: &[[f64; 2]], mut centroids: Vec<[f64; 2]>) -> (Vec<[f64; 2]>, Vec<usize>) {
    let k = centroids.len();
    let mut assignments: Vec<usize> = points.iter().map(|&p| nearest(&centroids, p)).collect();
    for _ in 0..MAX_LLOYD_ITERATIONS {
        let mut sums = vec![[0.0f64; 2]; k];
        let mut counts = vec![0usize; k];
        for (&p, &a) in points.iter().zip(&assignments) {
            sums[a][0] += p[0];
            sums[a][1] += p[1];
            counts[a] += 1;
        }
        for c in 0..k {
            // an empty cluster keeps its previous centre
            if counts[c] > 0 {
                let n = counts[c] as f64;
                centroids[c] = [sums[c][0] / n, sums[c][1] / n];
            }
        }
        let next: Vec<usize> = points.iter().map(|&p| nearest(&centroids, p)).collect();
        if next == assignments {
            break;
        }
        assignments = next;
    }
    (centroids, assignments)
}

fn canonical(points: &[[f64; 2]], centroids: Vec<[f64; 2]>, assignments: Vec<usize>) -> ClusterModel {
    let k = centroids.len();
    let mut order: Vec<usize> = (0..k).collect();
    order.sort_by(|&a, &b| {
        centroids[a][0].total_cmp(&centroids[b][0]).then(centroids[a][1].total_cmp(&centroids[b][1])).then(a.cmp(&b))
    });
    let mut relabel = vec![0; k];
    for (new, &old) in order.iter().enumerate() {
        relabel[old] = new;
    }
    let centroids: Vec<[f64; 2]> = order.iter().map(|&c| centroids[c]).collect();
    let assignments: Vec<usize> = assignments.iter().map(|&a| relabel[a]).collect();
    let inertia = inertia(points, &centroids, &assignments);
    ClusterModel { k, centroids, assignments, inertia }
}

fn validate(n: usize, k: usize, cfg: &KMeansConfig) -> Result<()> {
    if k == 0 || cfg.restarts == 0 {
        return Err(GravityError::InvalidConfig(alloc::format!(
            "k and restarts must be >= 1, got {k} and {}",
            cfg.restarts
        )));
    }
    if k > n {
        return Err(GravityError::TooManyClusters { k, points: n });
    }
    Ok(())
}

fn coords(points: &[ParamPoint]) -> Result<Vec<[f64; 2]>> {
    points
        .iter()
        .enumerate()
        .map(|(i, p)| if p.delta.is_finite() && p.beta.is_finite() { Ok(p.coords()) } else { Err(GravityError::NonFinite(i)) })
        .collect()
}

fn best_of(points: &[[f64; 2]], k: usize, rng: &mut ChaCha8Rng, restarts: usize) -> ClusterModel {
    let mut best: Option<ClusterModel> = None;
    for _ in 0..restarts {
        let (c, a) = lloyd(points, plus_plus(points, k, rng));
        let model = canonical(points, c, a);
        if best.as_ref().is_none_or(|b| model.inertia < b.inertia) {
            best = Some(model);
        }
    }
    best.expect("restarts >= 1")
}

/// Best-of-restarts Lloyd's algorithm with k-means++ seeding.
pub fn kmeans(points: &[ParamPoint], k: usize, cfg: &KMeansConfig) -> Result<ClusterModel> {
    validate(points.len(), k, cfg)?;
    let xy = coords(points)?;
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    Ok(best_of(&xy, k, &mut rng, cfg.restarts))
}

/// `(k, inertia)` for `k = 1..=k_max`.
///
/// Besides the random restarts, each `k > 1` also tries the `k - 1` optimum
/// plus a centre on its worst-served point, which keeps the curve non-increasing.
pub fn elbow_curve(points: &[ParamPoint], k_max: usize, cfg: &KMeansConfig) -> Result<Vec<(usize, f64)>> {
    validate(points.len(), k_max, cfg)?;
    let xy = coords(points)?;
    let mut curve = Vec::with_capacity(k_max);
    let mut previous: Option<ClusterModel> = None;
    for k in 1..=k_max {
        let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
        let mut model = best_of(&xy, k, &mut rng, cfg.restarts);
        if let Some(prev) = &previous {
            let worst = (0..xy.len())
                .max_by(|&a, &b| {
                    dist2(xy[a], prev.centroids[prev.assignments[a]])
                        .total_cmp(&dist2(xy[b], prev.centroids[prev.assignments[b]]))
                        .then(b.cmp(&a))
                })
                .unwrap_or(0);
            let mut seeds = prev.centroids.clone();
            seeds.push(xy[worst]);
            let (c, a) = lloyd(&xy, seeds);
            let warm = canonical(&xy, c, a);
            if warm.inertia < model.inertia {
                model = warm;
            }
        }
        curve.push((k, model.inertia));
        previous = Some(model);
    }
    Ok(curve)
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::format;

    fn pts(xy: &[(f64, f64)]) -> Vec<ParamPoint> {
        xy.iter().enumerate().map(|(i, &(d, b))| ParamPoint::new(format!("p{i}"), d, b)).collect()
    }

    #[test]
    fn one_cluster_per_point() {
        let p = pts(&[(0.0, 0.0), (1.0, 5.0), (-2.0, 3.0), (4.0, 4.0)]);
        let m = kmeans(&p, 4, &KMeansConfig::default()).unwrap();
        assert_eq!(m.inertia, 0.0);
        let mut seen = m.assignments.clone();
        seen.sort();
        assert_eq!(seen, [0, 1, 2, 3]);
        // canonical labels follow centroid order
        assert_eq!(m.assignments, [1, 2, 0, 3]);
    }

    #[test]
    fn separated_pairs() {
        let p = pts(&[(0.0, 0.0), (0.0, 1.0), (10.0, 10.0), (10.0, 11.0)]);
        let m = kmeans(&p, 2, &KMeansConfig::default()).unwrap();
        assert_eq!(m.assignments, [0, 0, 1, 1]);
        assert_eq!(m.centroids, [[0.0, 0.5], [10.0, 10.5]]);
        assert!((m.inertia - 1.0).abs() < 1e-15);
    }

    #[test]
    fn k1_labels_all_zero() {
        let p = pts(&[(0.0, 0.0), (3.0, 1.0), (10.0, 10.0)]);
        let m = kmeans(&p, 1, &KMeansConfig::default()).unwrap();
        assert_eq!(m.assignments, [0, 0, 0]);
    }

    #[test]
    fn errors() {
        let p = pts(&[(0.0, 0.0)]);
        assert_eq!(kmeans(&p, 2, &KMeansConfig::default()), Err(GravityError::TooManyClusters { k: 2, points: 1 }));
        assert!(kmeans(&p, 0, &KMeansConfig::default()).is_err());
        assert!(kmeans(&pts(&[(f64::NAN, 0.0)]), 1, &KMeansConfig::default()).is_err());
    }

    #[test]
    fn identical_points_flat_curve() {
        let p = pts(&[(1.0, -1.0); 5]);
        let curve = elbow_curve(&p, 5, &KMeansConfig::default()).unwrap();
        assert!(curve.iter().all(|&(_, i)| i == 0.0));
        assert_eq!(curve.iter().map(|c| c.0).collect::<Vec<_>>(), [1, 2, 3, 4, 5]);
    }

    #[test]
    fn deterministic() {
        let p = pts(&[(0.0, 0.0), (0.3, 1.0), (5.0, 5.0), (5.5, 4.0), (9.0, 0.0), (8.0, 1.0), (2.0, 2.0)]);
        let cfg = KMeansConfig { seed: 7, restarts: 3 };
        assert_eq!(kmeans(&p, 3, &cfg).unwrap(), kmeans(&p, 3, &cfg).unwrap());
    }
}
