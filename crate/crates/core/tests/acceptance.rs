//! End-to-end acceptance checks.
//!
//! Each test prints one `PASS`/`FAIL` line before asserting, so
//! `cargo test --test acceptance -- --nocapture` gives a readable report.
//! The experiment checks run the configs shipped in `configs/`.

use std::collections::{BTreeMap, HashMap};
use std::io::Write;
use std::path::PathBuf;
use std::sync::Arc;

use nalgebra::{DMatrix, DVector};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use bax_core::acquisition::{AbcPolicy, ConditionedBundle};
use bax_core::algorithms::{run_dijkstra, AlgorithmOutput};
use bax_core::bax::{draw_bundle, evaluate_acquisition, Acquisition, TopKAlgorithm};
use bax_core::domain::BoxDomain;
use bax_core::gp::{kernel_eval, Evidence, GPModel, KernelSpec, LazyFunctionSample, Posterior};
use bax_core::harness::{
    build_instance, execute_experiment, parse_config, ExperimentConfig, Method, ResultsTable,
};
use bax_core::metrics::{area_between, shoelace_area};
use bax_core::problems::{eval_benchmark, grid_edge_count, make_grid_graph, BenchmarkFn};

fn report(criterion: &str, pass: bool, detail: impl AsRef<str>) {
    let tag = if pass { "PASS" } else { "FAIL" };
    // written to the raw stream so the line shows even when output is captured
    let _ = writeln!(
        std::io::stderr().lock(),
        "{tag} {criterion}: {}",
        detail.as_ref()
    );
}

fn shipped_config(name: &str, methods: &[Method]) -> ExperimentConfig {
    let path = PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("../../configs")
        .join(name);
    let mut cfg = parse_config(&path).unwrap();
    cfg.methods = methods.to_vec();
    cfg.resolve().unwrap()
}

/// `trial -> iteration -> value`
fn per_trial(
    table: &ResultsTable,
    method: &str,
    metric: &str,
) -> BTreeMap<usize, BTreeMap<usize, f64>> {
    let mut out: BTreeMap<usize, BTreeMap<usize, f64>> = BTreeMap::new();
    for r in table
        .rows
        .iter()
        .filter(|r| r.method == method && r.metric == metric)
    {
        out.entry(r.trial).or_default().insert(r.iteration, r.value);
    }
    out
}

fn first_zero(series: &BTreeMap<usize, f64>) -> Option<usize> {
    series.iter().find(|(_, v)| **v == 0.0).map(|(i, _)| *i)
}

const EIGV: Method = Method::Bax(Acquisition::EIGv);
const RANDOM: Method = Method::Bax(Acquisition::Random);

#[test]
fn grid_shortest_path_query_efficiency() {
    let cfg = shipped_config("grid.toml", &[EIGV, RANDOM]);
    assert_eq!(cfg.trials, 5);
    let instance = build_instance(&cfg).unwrap();

    let mut calls = 0usize;
    let objective = Arc::clone(&instance.problem.objective);
    let mut counted = |x: &[f64]| {
        calls += 1;
        objective(x)
    };
    let (path, _) = instance.algorithm.execute(&mut counted, 0).unwrap();
    let path_len = match &instance.ground_truth {
        AlgorithmOutput::GraphPath { edge_points, .. } => edge_points.len(),
        _ => unreachable!(),
    };
    let pass_a = calls == path.len() && calls <= 684 && calls >= path_len;
    report(
        "1a grid full Dijkstra query count",
        pass_a,
        format!("{calls} edge queries, shortest path has {path_len} edges, graph has 684"),
    );

    let table = execute_experiment(&cfg).unwrap();
    assert!(table.failures.is_empty(), "{:?}", table.failures);
    let eigv = per_trial(&table, "EIGv", "area");
    let random = per_trial(&table, "Random", "area");
    let hits: Vec<Option<usize>> = eigv.values().map(first_zero).collect();
    let reached = hits.iter().filter(|h| h.is_some_and(|i| i <= 150)).count();
    let pass_b = reached >= 4;
    report(
        "1b grid EIGv reaches zero area error within 150 queries",
        pass_b,
        format!("{reached}/5 seeds, first zero at {hits:?}"),
    );

    let mean_at = |s: &BTreeMap<usize, BTreeMap<usize, f64>>, it: usize| {
        s.values().map(|t| t[&it]).sum::<f64>() / s.len() as f64
    };
    let mut violations = Vec::new();
    for it in 30..=cfg.budget {
        let (e, r) = (mean_at(&eigv, it), mean_at(&random, it));
        // areas of congruent regions can differ in the last bits
        if e > r + 1e-12 {
            violations.push((it, e, r));
        }
    }
    let pass_c = violations.is_empty();
    report(
        "1c grid EIGv mean area error <= Random from iteration 30",
        pass_c,
        format!(
            "{} violating iterations {:?}",
            violations.len(),
            violations.iter().take(5).collect::<Vec<_>>()
        ),
    );
    assert!(pass_a && pass_b && pass_c);
}

#[test]
fn top_k_efficiency() {
    let cfg = shipped_config("topk.toml", &[EIGV, RANDOM]);
    assert_eq!((cfg.trials, cfg.budget), (5, 150));
    let table = execute_experiment(&cfg).unwrap();
    assert!(table.failures.is_empty(), "{:?}", table.failures);
    let hits: Vec<Option<usize>> = per_trial(&table, "EIGv", "jaccard")
        .values()
        .map(first_zero)
        .collect();
    let mut iters: Vec<usize> = hits.iter().map(|h| h.unwrap_or(usize::MAX)).collect();
    iters.sort_unstable();
    let median = iters[iters.len() / 2];
    let pass = hits.len() == 5 && median <= 110 && iters.iter().all(|i| *i < 150);
    report(
        "2 top-k EIGv first zero Jaccard distance",
        pass,
        format!("median {median} (limit 110), per seed {hits:?}"),
    );

    let eigv = table.summarize("EIGv", "jaccard");
    let random = table.summarize("Random", "jaccard");
    let behind: Vec<usize> = eigv
        .iter()
        .zip(&random)
        .filter(|(e, r)| e.iteration >= 20 && e.mean > r.mean)
        .map(|(e, _)| e.iteration)
        .collect();
    let pass_curve = behind.is_empty();
    report(
        "2 top-k EIGv mean Jaccard <= Random from iteration 20",
        pass_curve,
        format!(
            "{} iterations where EIGv is worse {:?}",
            behind.len(),
            behind
        ),
    );
    assert!(pass && pass_curve);
}

#[test]
fn branin_local_optimization() {
    let cfg = shipped_config("branin.toml", &[EIGV, Method::FullAlgorithm]);
    let table = execute_experiment(&cfg).unwrap();
    assert!(table.failures.is_empty(), "{:?}", table.failures);
    let eigv = per_trial(&table, "EIGv", "regret");
    let full = per_trial(&table, "FullAlgorithm", "regret");
    let mut wins = 0;
    let mut details = Vec::new();
    for (trial, es) in &full {
        let (&t_es, &es_regret) = es.iter().next().unwrap();
        let allowance = t_es / 5;
        let hit = eigv[trial]
            .iter()
            .find(|(i, v)| **i <= allowance && **v <= es_regret)
            .map(|(i, _)| *i);
        if hit.is_some() {
            wins += 1;
        }
        details.push(format!("seed {trial}: ES {t_es} queries regret {es_regret:.4}, EIGv matched at {hit:?} (allowance {allowance})"));
    }
    let pass = full.len() == 5 && wins >= 3;
    report(
        "3 Branin EIGv regret vs full ES",
        pass,
        format!("{wins}/5 seeds; {}", details.join("; ")),
    );
    assert!(pass);
}

#[test]
fn eigv_tracks_eigout_on_one_dimensional_top_k() {
    let objective = BenchmarkFn::SkewedSin { dim: 1 };
    let domain = BoxDomain::from_bounds(&[(-10.0, 10.0)]).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let elements: Vec<Vec<f64>> = (0..20).map(|_| domain.sample_uniform(&mut rng)).collect();
    let model = GPModel::new(
        KernelSpec::squared_exponential(2.0, 100.0).unwrap(),
        0.0,
        0.01,
    )
    .unwrap();
    let mut data = Evidence::new();
    for i in 0..4 {
        let x = -9.5 + 19.0 * i as f64 / 3.0;
        data.push_noisy(vec![x], eval_benchmark(&objective, &[x]).unwrap());
    }
    let posterior = Arc::new(Posterior::new(&model, &data).unwrap());
    let algorithm = TopKAlgorithm { elements, k: 2 };
    let bundle = draw_bundle(&posterior, &algorithm, 100, 11).unwrap();
    let grid: Vec<Vec<f64>> = (0..200)
        .map(|i| vec![-10.0 + 20.0 * i as f64 / 199.0])
        .collect();
    let abc = AbcPolicy::default();
    let v = evaluate_acquisition(Acquisition::EIGv, &posterior, &bundle, &grid, &abc, 3).unwrap();
    let out =
        evaluate_acquisition(Acquisition::EIGout, &posterior, &bundle, &grid, &abc, 3).unwrap();
    let argmax = |a: &[f64]| (0..a.len()).fold(0, |b, i| if a[i] > a[b] { i } else { b });
    let gap_x = (grid[argmax(&v)][0] - grid[argmax(&out)][0]).abs();
    let sup = v
        .iter()
        .zip(&out)
        .map(|(a, b)| (a - b).abs())
        .fold(0.0, f64::max);
    let pass_argmax = gap_x <= 0.05 * 20.0;
    let pass_sup = sup <= 0.15;
    report(
        "4a EIGv argmax near EIGout argmax",
        pass_argmax,
        format!("distance {gap_x:.3} (limit 1.0)"),
    );
    report(
        "4b EIGv curve near EIGout curve",
        pass_sup,
        format!("sup gap {sup:.4} nats (limit 0.15)"),
    );
    assert!(pass_argmax && pass_sup);
}

fn random_model(rng: &mut ChaCha8Rng, dim: usize) -> GPModel {
    let ls: Vec<f64> = (0..dim).map(|_| rng.gen_range(0.5..2.0)).collect();
    let kernel = KernelSpec::new(
        bax_core::gp::KernelKind::SquaredExponential,
        ls,
        rng.gen_range(0.5..3.0),
    )
    .unwrap();
    GPModel::new(kernel, rng.gen_range(-1.0..1.0), rng.gen_range(0.01..0.5)).unwrap()
}

fn random_point(rng: &mut ChaCha8Rng, dim: usize) -> Vec<f64> {
    (0..dim).map(|_| rng.gen_range(0.0..10.0)).collect()
}

fn dist(a: &[f64], b: &[f64]) -> f64 {
    a.iter()
        .zip(b)
        .map(|(x, y)| (x - y).powi(2))
        .sum::<f64>()
        .sqrt()
}

/// Posterior mean and variance by one dense solve with per-row noise.
fn heteroscedastic_oracle(model: &GPModel, evidence: &Evidence, x: &[f64]) -> (f64, f64) {
    let jitter = 1e-8 * model.kernel.signal_variance;
    let rows: Vec<(&Vec<f64>, f64, f64)> = evidence
        .noisy
        .iter()
        .map(|(p, y)| (p, *y, model.noise_variance))
        .chain(evidence.noiseless.iter().map(|(p, y)| (p, *y, 0.0)))
        .collect();
    let n = rows.len();
    let k = |a: &[f64], b: &[f64]| kernel_eval(&model.kernel, a, b).unwrap();
    let gram = DMatrix::from_fn(n, n, |i, j| {
        k(rows[i].0, rows[j].0) + if i == j { rows[i].2 + jitter } else { 0.0 }
    });
    let kx = DVector::from_fn(n, |i, _| k(rows[i].0, x));
    let resid = DVector::from_fn(n, |i, _| rows[i].1 - model.prior_mean);
    let lu = gram.lu();
    let alpha = lu.solve(&resid).unwrap();
    let v = lu.solve(&kx).unwrap();
    (model.prior_mean + kx.dot(&alpha), k(x, x) - kx.dot(&v))
}

fn mixed_noise_matches_block_solve() -> (bool, String) {
    let mut rng = ChaCha8Rng::seed_from_u64(2024);
    let mut worst = 0.0f64;
    for _ in 0..200 {
        let dim = rng.gen_range(1..=3);
        let model = random_model(&mut rng, dim);
        let mut ev = Evidence::new();
        let n = rng.gen_range(1..=40);
        // noiseless inputs closer than half a lengthscale make the Gram matrix
        // so ill-conditioned that any two solvers disagree well above 1e-8
        let min_ls = model
            .kernel
            .lengthscale
            .iter()
            .copied()
            .fold(f64::INFINITY, f64::min);
        while ev.len() < n {
            let p = random_point(&mut rng, dim);
            let y = rng.gen_range(-3.0..3.0);
            if rng.gen_bool(0.5) {
                ev.push_noisy(p, y);
            } else if ev
                .noiseless
                .iter()
                .all(|(q, _)| dist(q, &p) >= 0.5 * min_ls)
            {
                ev.push_noiseless(p, y);
            }
        }
        let post = Posterior::new(&model, &ev).unwrap();
        for _ in 0..5 {
            let x = random_point(&mut rng, dim);
            let m = post.marginal(&x, false).unwrap();
            let (om, ov) = heteroscedastic_oracle(&model, &ev, &x);
            let scale = model.kernel.signal_variance;
            worst = worst
                .max((m.mean - om).abs() / scale.sqrt())
                .max((m.variance - ov).abs() / scale);
        }
    }
    (
        worst <= 1e-8,
        format!("200 instances, worst scaled deviation {worst:.2e}"),
    )
}

fn lazy_sampler_joint_moments() -> (bool, String) {
    let model = GPModel::new(
        KernelSpec::squared_exponential(1.0, 1.0).unwrap(),
        0.5,
        0.05,
    )
    .unwrap();
    let ev = Evidence::from_noisy(vec![(vec![0.0], 1.0), (vec![2.0], -0.5)]);
    let post = Arc::new(Posterior::new(&model, &ev).unwrap());
    let pts = [vec![-1.0], vec![0.5], vec![1.2], vec![3.0]];
    let n = 2000usize;
    let d = pts.len();
    let mut sum = vec![0.0; d];
    let mut cross = vec![vec![0.0; d]; d];
    for seed in 0..n as u64 {
        let mut s = LazyFunctionSample::from_posterior(Arc::clone(&post), seed);
        let v: Vec<f64> = pts.iter().map(|p| s.query(p).unwrap()).collect();
        for i in 0..d {
            sum[i] += v[i];
            for j in 0..d {
                cross[i][j] += v[i] * v[j];
            }
        }
    }
    let resolved: Vec<_> = pts.iter().map(|p| post.resolve(p).unwrap()).collect();
    let mut ok = true;
    let mut worst_z = 0.0f64;
    for i in 0..d {
        let mean = sum[i] / n as f64;
        let var_i = post.covariance(&resolved[i], &resolved[i]);
        let z = (mean - resolved[i].mean).abs() / (var_i / n as f64).sqrt();
        worst_z = worst_z.max(z);
        ok &= z < 4.5;
        for j in 0..d {
            let emp = cross[i][j] / n as f64 - (sum[i] / n as f64) * (sum[j] / n as f64);
            let want = post.covariance(&resolved[i], &resolved[j]);
            let var_j = post.covariance(&resolved[j], &resolved[j]);
            // sd of a sample covariance of jointly normal variables
            let sd = ((var_i * var_j + want * want) / n as f64).sqrt();
            let z = (emp - want).abs() / sd.max(1e-12);
            worst_z = worst_z.max(z);
            ok &= z < 4.5;
        }
    }
    (
        ok,
        format!("2000 seeds over 4 points, worst z-score {worst_z:.2}"),
    )
}

fn eige_equals_eigv_on_full_paths() -> (bool, String) {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let model = GPModel::new(
        KernelSpec::squared_exponential(1.5, 2.0).unwrap(),
        0.0,
        0.05,
    )
    .unwrap();
    let ev = Evidence::from_noisy(
        (0..4)
            .map(|_| (random_point(&mut rng, 1), rng.gen_range(-1.0..1.0)))
            .collect(),
    );
    let post = Arc::new(Posterior::new(&model, &ev).unwrap());
    let elements: Vec<Vec<f64>> = (0..8).map(|_| random_point(&mut rng, 1)).collect();
    let probes: Vec<Vec<f64>> = (0..100).map(|_| random_point(&mut rng, 1)).collect();

    let full = TopKAlgorithm {
        elements: elements.clone(),
        k: elements.len(),
    };
    let bundle = draw_bundle(&post, &full, 20, 9).unwrap();
    let e = ConditionedBundle::on_paths(&post, &bundle).unwrap();
    let v = ConditionedBundle::on_subsequences(&post, &bundle).unwrap();
    let mut max_gap = 0.0f64;
    let mut min_val = f64::INFINITY;
    for p in &probes {
        let (a, b) = (e.eig(p).unwrap(), v.eig(p).unwrap());
        max_gap = max_gap.max((a - b).abs());
        min_val = min_val.min(a).min(b);
    }

    let partial = TopKAlgorithm { elements, k: 3 };
    let bundle = draw_bundle(&post, &partial, 20, 10).unwrap();
    let e = ConditionedBundle::on_paths(&post, &bundle).unwrap();
    let v = ConditionedBundle::on_subsequences(&post, &bundle).unwrap();
    for p in &probes {
        min_val = min_val.min(e.eig(p).unwrap()).min(v.eig(p).unwrap());
    }
    (
        max_gap <= 1e-10 && min_val >= -1e-9,
        format!("max |EIGe - EIGv| {max_gap:.2e}, min value {min_val:.2e}"),
    )
}

fn simple_paths(
    adj: &[Vec<(usize, usize)>],
    at: usize,
    dest: usize,
    seen: &mut Vec<bool>,
    edges: &mut Vec<usize>,
    out: &mut Vec<Vec<usize>>,
) {
    if at == dest {
        out.push(edges.clone());
        return;
    }
    for &(next, e) in &adj[at] {
        if !seen[next] {
            seen[next] = true;
            edges.push(e);
            simple_paths(adj, next, dest, seen, edges, out);
            edges.pop();
            seen[next] = false;
        }
    }
}

fn dijkstra_matches_enumeration() -> (bool, String) {
    let unit = BoxDomain::from_bounds(&[(0.0, 1.0), (0.0, 1.0)]).unwrap();
    let graph = make_grid_graph(3, 3, &unit).unwrap();
    let slot: HashMap<usize, usize> = graph
        .vertices()
        .iter()
        .enumerate()
        .map(|(i, v)| (v.id, i))
        .collect();
    let mut adj = vec![Vec::new(); graph.num_vertices()];
    for (e, edge) in graph.edges().iter().enumerate() {
        adj[slot[&edge.from]].push((slot[&edge.to], e));
    }
    let (src, dst) = (graph.vertices()[0].id, graph.vertices()[8].id);
    let mut paths = Vec::new();
    let mut seen = vec![false; graph.num_vertices()];
    seen[slot[&src]] = true;
    simple_paths(
        &adj,
        slot[&src],
        slot[&dst],
        &mut seen,
        &mut Vec::new(),
        &mut paths,
    );

    let mut rng = ChaCha8Rng::seed_from_u64(99);
    let mut mismatches = 0;
    for _ in 0..100 {
        let mut cost_of: HashMap<[u64; 2], f64> = HashMap::new();
        for edge in graph.edges() {
            let key = [edge.midpoint[0].to_bits(), edge.midpoint[1].to_bits()];
            cost_of
                .entry(key)
                .or_insert_with(|| rng.gen_range(0.0..1.0));
        }
        let edge_cost = |e: usize| {
            let m = graph.edges()[e].midpoint;
            cost_of[&[m[0].to_bits(), m[1].to_bits()]]
        };
        let best = paths
            .iter()
            .map(|p| p.iter().map(|e| edge_cost(*e)).sum::<f64>())
            .fold(f64::INFINITY, f64::min);
        let (_, out) = run_dijkstra(&graph, src, dst, |x: &[f64]| {
            Ok(cost_of[&[x[0].to_bits(), x[1].to_bits()]])
        })
        .unwrap();
        let found = match out {
            AlgorithmOutput::GraphPath { edge_costs, .. } => edge_costs.iter().sum::<f64>(),
            _ => unreachable!(),
        };
        if (found - best).abs() > 1e-12 {
            mismatches += 1;
        }
    }
    (
        mismatches == 0,
        format!(
            "100 random 3x3 grids over {} simple paths, {mismatches} mismatches",
            paths.len()
        ),
    )
}

#[test]
fn property_suites() {
    let mut all = true;
    for (name, (pass, detail)) in [
        (
            "5 mixed-noise conditioning vs block solve",
            mixed_noise_matches_block_solve(),
        ),
        ("5 lazy sampler joint moments", lazy_sampler_joint_moments()),
        (
            "5 EIGe equals EIGv on full paths, both nonnegative",
            eige_equals_eigv_on_full_paths(),
        ),
        (
            "5 Dijkstra vs brute-force enumeration",
            dijkstra_matches_enumeration(),
        ),
    ] {
        report(name, pass, detail);
        all &= pass;
    }

    let unit = [[0.0, 0.0], [1.0, 0.0], [1.0, 1.0], [0.0, 1.0]];
    let path = [[0.0, 0.0], [0.5, 0.7], [1.0, 0.2], [2.0, 1.0]];
    let raw = shoelace_area(&unit).abs();
    let same = area_between(&path, &path).unwrap();
    let pass = (raw - 1.0).abs() < 1e-15 && same == 0.0;
    report(
        "5 shoelace unit square and identical paths",
        pass,
        format!("unit square {raw}, identical paths {same}"),
    );
    all &= pass;
    assert!(all);
}

#[test]
fn grid_edge_counts() {
    let small = grid_edge_count(10, 10);
    let large = grid_edge_count(20, 10);
    let built = make_grid_graph(
        10,
        10,
        &BoxDomain::from_bounds(&[(0.0, 1.0), (0.0, 1.0)]).unwrap(),
    )
    .unwrap()
    .num_edges();
    let pass = small == 684 && built == 684 && large == 2736;
    report(
        "5 grid edge counts 684 and 2736",
        pass,
        format!("10x10 gives {small} (built graph {built}), 20x10 gives {large}"),
    );
    assert!(pass);
}
