//! Acceptance checks, one line per criterion. Runs without the libtest harness so
//! the report is printed whether or not every criterion passes.

mod common;

use std::process::ExitCode;
use std::time::{Duration, Instant};

use common::fixture;
use gravity_core::mlvalidate::{
    confusion, elbow_curve, kmeans, knn_classify, split_train_test, KMeansConfig, ParamPoint,
};
use gravity_core::{
    estimate, haversine_km, impute_zeros, normalize_and_vectorize, ols2, predictor_values, symmetrize, EstimateConfig,
    GeoPoint, ImputeConfig, PairVector,
};
use gravity_toolkit::ingest::{load_dataset, InputFiles};
use gravity_toolkit::params_file::load_params;
use gravity_toolkit::pipeline::{run_files, vectorize};
use gravity_toolkit::synth::{generate, WorldSpec};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

const EPS: f64 = 1e-3;

/// Separate numpy implementation of the same loop, run on
/// fixtures/synthetic50_censored from (δ, β) = (1, −1): it stops at the
/// 100-iteration cap without meeting the ε test. Its first four iterates:
const SYNTH_ORACLE_CONVERGED: bool = false;
const SYNTH_ORACLE_FIRST_ITERATES: [(f64, f64); 4] = [
    (0.8354131110637811, -0.9101496256886522),
    (0.7590013829915633, -0.8493767774882379),
    (0.8239893227488968, -0.913413851736622),
    (0.7809065115721174, -0.8702121911972472),
];

/// fixtures/mini10 from the default start: frozen golden output and the separate numpy result.
const MINI10_GOLDEN: (f64, f64) = (1.0071423348763155, -1.1681467844551);
const MINI10_ORACLE: (f64, f64) = (1.0071423348763193, -1.1681467844550952);

struct Outcome {
    pass: bool,
    detail: String,
}

fn outcome(pass: bool, detail: impl Into<String>) -> Outcome {
    Outcome { pass, detail: detail.into() }
}

fn files(dir: &str) -> InputFiles {
    let d = fixture(dir);
    InputFiles { gdp: d.join("gdp.csv"), capitals: d.join("capitals.csv"), trade: d.join("trade.csv") }
}

fn censored_pairs() -> PairVector {
    vectorize(&load_dataset(&files("synthetic50_censored"), 2014).unwrap()).unwrap()
}

fn start(delta_init: f64, beta_init: f64) -> EstimateConfig {
    EstimateConfig { delta_init, beta_init, ..EstimateConfig::default() }
}

fn uncensored_pairs() -> PairVector {
    let (table, ex) = generate(&WorldSpec::default()).unwrap();
    let d = table.distance_matrix().unwrap();
    normalize_and_vectorize(&symmetrize(&ex), &table, &d).unwrap()
}

fn c1_exact_recovery() -> Outcome {
    let pv = uncensored_pairs();
    let p = estimate(&pv, &EstimateConfig::default()).unwrap().params;
    let (dd, db) = ((p.delta - 1.0).abs(), (p.beta + 1.1).abs());
    outcome(
        p.converged && dd <= 1e-8 && db <= 1e-8 && p.trace.len() <= 2,
        format!("|δ−1| = {dd:.1e}, |β+1.1| = {db:.1e}, trace length {}", p.trace.len()),
    )
}

fn c2_censored_oracle() -> Outcome {
    let pv = censored_pairs();
    let p = estimate(&pv, &start(1.0, -1.0)).unwrap().params;
    let early = p
        .trace
        .iter()
        .zip(SYNTH_ORACLE_FIRST_ITERATES)
        .map(|(e, (d, b))| (e.delta - d).abs().max((e.beta - b).abs()))
        .fold(0.0, f64::max);
    let detail = format!(
        "{} zero pairs; ours: converged={} after {} iterations (δ={}, β={}); reference converged={}; \
         first {} iterates agree to {early:.1e}",
        pv.zero_count(),
        p.converged,
        p.iterations,
        p.delta,
        p.beta,
        SYNTH_ORACLE_CONVERGED,
        SYNTH_ORACLE_FIRST_ITERATES.len(),
    );
    // the criterion compares converged values; there are none to compare unless both runs converge
    outcome(p.converged && SYNTH_ORACLE_CONVERGED && early <= 1e-9, detail)
}

fn c3_initial_values() -> Outcome {
    let pv = censored_pairs();
    let runs: Vec<_> = [(1.0, -1.0), (1.0, -0.5), (2.0, -1.0)]
        .iter()
        .map(|&(d, b)| estimate(&pv, &start(d, b)).unwrap().params)
        .collect();
    let all_converged = runs.iter().all(|p| p.converged);
    let spread = |f: fn(&gravity_core::GravityParams) -> f64| {
        let v: Vec<f64> = runs.iter().map(f).collect();
        v.iter().cloned().fold(f64::MIN, f64::max) - v.iter().cloned().fold(f64::MAX, f64::min)
    };
    let (sd, sb) = (spread(|p| p.delta), spread(|p| p.beta));
    let summary: Vec<String> =
        runs.iter().map(|p| format!("({:.4}, {:.4}) conv={} it={}", p.delta, p.beta, p.converged, p.iterations)).collect();
    outcome(
        all_converged && sd <= 2.0 * EPS && sb <= 2.0 * EPS,
        format!("{}; spread δ {sd:.2e}, β {sb:.2e}", summary.join(", ")),
    )
}

fn c4_imputation() -> Outcome {
    let sets = [("mini10", vectorize(&load_dataset(&files("mini10"), 2014).unwrap()).unwrap()),
        ("synthetic50_censored", censored_pairs()),
        ("synthetic50", uncensored_pairs())];
    let mut ok = true;
    let mut checked = 0;
    for (_, pv) in &sets {
        let mut vectors = Vec::new();
        for (d, b) in [(1.0, -1.0), (1.0, -0.5), (2.0, -1.0), (0.7, -1.3)] {
            let x = predictor_values(pv, d, b).unwrap();
            vectors.push(impute_zeros(pv, &x, &ImputeConfig::default()).unwrap());
        }
        vectors.push(estimate(pv, &EstimateConfig::default()).unwrap().filled);
        for filled in &vectors {
            for (k, (&before, &after)) in pv.t().iter().zip(filled).enumerate() {
                let kept = pv.zero_mask()[k] || before.to_bits() == after.to_bits();
                ok &= kept && after > 0.0 && after.is_finite();
            }
            checked += 1;
        }
    }
    outcome(ok, format!("{checked} imputed vectors over {} fixtures", sets.len()))
}

fn c5_haversine() -> Outcome {
    let anti = haversine_km(GeoPoint::new(0.0, 0.0).unwrap(), GeoPoint::new(0.0, 180.0).unwrap()).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let mut ok = (anti - 20015.087).abs() <= 1e-3;
    for _ in 0..1000 {
        let mut p = || GeoPoint::new(rng.random_range(-90.0..=90.0), 180.0 - rng.random_range(0.0..360.0)).unwrap();
        let (a, b) = (p(), p());
        let ab = haversine_km(a, b).unwrap();
        ok &= ab == haversine_km(b, a).unwrap() && haversine_km(a, a).unwrap() == 0.0 && ab >= 0.0;
    }
    outcome(ok, format!("antipodes {anti:.6} km; 1000 random pairs symmetric with zero self-distance"))
}

/// (X'X)^{-1} X'y via the adjugate; deliberately unrelated to the library's elimination.
fn cofactor_solve(y: &[f64], x1: &[f64], x2: &[f64]) -> [f64; 3] {
    let rows: Vec<[f64; 3]> = x1.iter().zip(x2).map(|(&a, &b)| [1.0, a, b]).collect();
    let mut m = [[0.0; 3]; 3];
    let mut v = [0.0; 3];
    for (r, &yi) in rows.iter().zip(y) {
        for i in 0..3 {
            v[i] += r[i] * yi;
            for j in 0..3 {
                m[i][j] += r[i] * r[j];
            }
        }
    }
    let c = |i: usize, j: usize| {
        let (r0, r1) = ((i + 1) % 3, (i + 2) % 3);
        let (c0, c1) = ((j + 1) % 3, (j + 2) % 3);
        m[r0][c0] * m[r1][c1] - m[r0][c1] * m[r1][c0]
    };
    let det = m[0][0] * c(0, 0) + m[0][1] * c(0, 1) + m[0][2] * c(0, 2);
    let mut out = [0.0; 3];
    for (i, o) in out.iter_mut().enumerate() {
        // inverse[i][j] = cofactor(j, i) / det
        *o = (0..3).map(|j| c(j, i) * v[j]).sum::<f64>() / det;
    }
    out
}

fn c6_ols() -> Outcome {
    let mut worst_coef = 0.0f64;
    let mut worst_orth = 0.0f64;
    for seed in 0..10 {
        let mut rng = ChaCha8Rng::seed_from_u64(600 + seed);
        let x1: Vec<f64> = (0..20).map(|_| rng.random_range(-3.0..3.0)).collect();
        let x2: Vec<f64> = (0..20).map(|_| rng.random_range(-2.0..5.0)).collect();
        let y: Vec<f64> =
            x1.iter().zip(&x2).map(|(a, b)| 1.5 + 0.8 * a - 1.2 * b + rng.random_range(-0.5..0.5)).collect();
        let fit = ols2(&y, &x1, &x2).unwrap();
        let want = cofactor_solve(&y, &x1, &x2);
        for (got, w) in [fit.intercept, fit.b1, fit.b2].iter().zip(want) {
            worst_coef = worst_coef.max((got - w).abs());
        }
        let resid: Vec<f64> = (0..20).map(|k| y[k] - fit.predict(x1[k], x2[k])).collect();
        let scale = 20.0 * y.iter().fold(0.0f64, |m, v| m.max(v.abs()));
        for col in [vec![1.0; 20], x1.clone(), x2.clone()] {
            let dot: f64 = col.iter().zip(&resid).map(|(a, r)| a * r).sum();
            worst_orth = worst_orth.max(dot.abs() / scale);
        }
    }
    outcome(
        worst_coef <= 1e-10 && worst_orth <= 1e-9,
        format!("10 fixtures × 20 points: max coefficient gap {worst_coef:.1e}, max relative X'e {worst_orth:.1e}"),
    )
}

fn brute_force_sse(points: &[[f64; 2]], k: usize) -> f64 {
    let n = points.len();
    let mut labels = vec![0usize; n];
    let mut best = f64::INFINITY;
    'outer: loop {
        let mut sums = vec![[0.0; 3]; k];
        for (p, &l) in points.iter().zip(&labels) {
            sums[l][0] += p[0];
            sums[l][1] += p[1];
            sums[l][2] += 1.0;
        }
        let sse: f64 = points
            .iter()
            .zip(&labels)
            .map(|(p, &l)| {
                let s = sums[l];
                (p[0] - s[0] / s[2]).powi(2) + (p[1] - s[1] / s[2]).powi(2)
            })
            .sum();
        best = best.min(sse);
        for pos in (0..n).rev() {
            labels[pos] += 1;
            if labels[pos] < k {
                continue 'outer;
            }
            labels[pos] = 0;
        }
        return best;
    }
}

fn c7_kmeans() -> Outcome {
    let pts = load_params(&fixture("kmeans12_params.csv")).unwrap().literature;
    let xy: Vec<[f64; 2]> = pts.iter().map(ParamPoint::coords).collect();
    let optimum = brute_force_sse(&xy, 3);
    let model = kmeans(&pts, 3, &KMeansConfig::default()).unwrap();
    let curve = elbow_curve(&pts, 12, &KMeansConfig::default()).unwrap();
    let monotone = curve.windows(2).all(|w| w[1].1 <= w[0].1);
    outcome(
        (model.inertia - optimum).abs() <= 1e-12 * optimum.max(1.0) && monotone,
        format!("k=3 inertia {} vs exhaustive {optimum} (3^12 labellings); elbow non-increasing: {monotone}", model.inertia),
    )
}

fn c8_co_cluster() -> Outcome {
    let set = load_params(&fixture("literature_params.csv")).unwrap();
    let model = kmeans(&set.literature, 4, &KMeansConfig::default()).unwrap();
    let own_estimates = [(0.988, -1.178), (1.022, -1.079), (0.983, -1.113), (1.218, -1.374), (1.0, -1.0)];
    let labels: Vec<usize> = own_estimates.iter().map(|&(d, b)| model.nearest([d, b])).collect();
    let own: Vec<usize> = set.own.iter().map(|p| model.nearest(p.coords())).collect();
    let same = labels.iter().chain(&own).all(|&l| l == labels[0]);
    outcome(
        same && own.len() == 4,
        format!("{} literature points clustered; labels of the 2004–2019 estimates and (1, −1): {labels:?}", set.literature.len()),
    )
}

fn self_accuracy(xy: &[[f64; 2]], labels: &[usize]) -> f64 {
    let hits = xy.iter().zip(labels).filter(|(p, &l)| knn_classify(xy, labels, 1, **p).unwrap() == l).count();
    hits as f64 / xy.len() as f64
}

fn c9_knn() -> Outcome {
    let mut self_ok = true;
    let mut rng = ChaCha8Rng::seed_from_u64(9);
    for _ in 0..20 {
        let xy: Vec<[f64; 2]> = (0..30).map(|_| [rng.random_range(0.0..2.0), rng.random_range(-2.0..0.0)]).collect();
        let labels: Vec<usize> = (0..30).map(|_| rng.random_range(0..4)).collect();
        self_ok &= self_accuracy(&xy, &labels) == 1.0;
    }
    let lit = load_params(&fixture("literature_params.csv")).unwrap().literature;
    let lit_xy: Vec<[f64; 2]> = lit.iter().map(ParamPoint::coords).collect();
    let lit_model = kmeans(&lit, 4, &KMeansConfig::default()).unwrap();
    self_ok &= self_accuracy(&lit_xy, &lit_model.assignments) == 1.0;

    let sep = load_params(&fixture("separated_params.csv")).unwrap().literature;
    let model = kmeans(&sep, 4, &KMeansConfig::default()).unwrap();
    let split = split_train_test(&model.assignments, 0.8, 0).unwrap();
    let train: Vec<[f64; 2]> = split.train.iter().map(|&i| sep[i].coords()).collect();
    let train_labels: Vec<usize> = split.train.iter().map(|&i| model.assignments[i]).collect();
    let actual: Vec<usize> = split.test.iter().map(|&i| model.assignments[i]).collect();
    let predicted: Vec<usize> =
        split.test.iter().map(|&i| knn_classify(&train, &train_labels, 4, sep[i].coords()).unwrap()).collect();
    let cm = confusion(&actual, &predicted, 4).unwrap();
    outcome(
        self_ok && cm.accuracy == 1.0,
        format!(
            "k=1 self-accuracy 1.0 on 21 training sets: {self_ok}; separated fixture {}/{} split, knn=4 accuracy {}",
            split.train.len(),
            split.test.len(),
            cm.accuracy
        ),
    )
}

fn c10_mini10() -> Outcome {
    let run = run_files(&files("mini10"), 2014, &EstimateConfig::default()).unwrap();
    let p = &run.estimation.params;
    let golden = (p.delta - MINI10_GOLDEN.0).abs().max((p.beta - MINI10_GOLDEN.1).abs());
    let oracle = (p.delta - MINI10_ORACLE.0).abs().max((p.beta - MINI10_ORACLE.1).abs());
    outcome(
        p.converged && golden <= 1e-12 && oracle <= 1e-9,
        format!(
            "δ = {}, β = {} in {} iterations; golden gap {golden:.1e}, reference gap {oracle:.1e}",
            p.delta, p.beta, p.iterations
        ),
    )
}

fn main() -> ExitCode {
    let criteria: [(u32, &str, Duration, fn() -> Outcome); 10] = [
        (1, "exact recovery, no zeros", Duration::from_secs(1), c1_exact_recovery),
        (2, "censored recovery matches reference loop", Duration::from_secs(5), c2_censored_oracle),
        (3, "initial-value independence", Duration::from_secs(15), c3_initial_values),
        (4, "imputation keeps non-zero flows, fills positive", Duration::MAX, c4_imputation),
        (5, "haversine antipodes, symmetry, identity", Duration::MAX, c5_haversine),
        (6, "ols2 vs explicit normal equations", Duration::MAX, c6_ols),
        (7, "k-means vs exhaustive partition, monotone elbow", Duration::MAX, c7_kmeans),
        (8, "2004–2019 estimates co-cluster with (1, −1)", Duration::MAX, c8_co_cluster),
        (9, "KNN self-accuracy and separated fixture", Duration::MAX, c9_knn),
        (10, "10-country stand-in golden estimate", Duration::MAX, c10_mini10),
    ];
    let mut failed = Vec::new();
    for (n, name, limit, check) in criteria {
        let t0 = Instant::now();
        let out = check();
        let took = t0.elapsed();
        let in_time = took <= limit;
        let pass = out.pass && in_time;
        let budget = if limit == Duration::MAX { String::new() } else { format!(" (limit {limit:?})") };
        println!(
            "criterion {n:>2} {}: {name} — {}; {:.3}s{budget}",
            if pass { "PASS" } else { "FAIL" },
            out.detail,
            took.as_secs_f64()
        );
        if !pass {
            failed.push(n);
        }
    }
    if failed.is_empty() {
        println!("acceptance: all 10 criteria pass");
        ExitCode::SUCCESS
    } else {
        println!("acceptance: {} of 10 criteria fail: {failed:?}", failed.len());
        ExitCode::FAILURE
    }
}
