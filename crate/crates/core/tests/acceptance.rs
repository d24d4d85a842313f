//! Acceptance suite. Prints one PASS/FAIL line per criterion and exits
//! non-zero if any criterion fails.

mod common;

use std::panic::{catch_unwind, AssertUnwindSafe};
use std::time::{Duration, Instant};

use common::*;
use neuromat::experiment::*;
use neuromat::graphhd::{encode_graphhd, node_memory, ElementCodebook};
use neuromat::readout::*;
use neuromat::reservoir::{LifParams, Reservoir, ReservoirConfig};
use neuromat::rng::SeededRng;
use neuromat::spike::{encode_graph, SpikeFrame, FRAME_LEN};
use neuromat::sspgraphd::*;
use neuromat::structures::MoleculeGraph;
use neuromat::vsa::{fft, MapHypervector, UnitaryHypervector};

type Check = Result<String, String>;

macro_rules! ensure {
    ($cond:expr, $($msg:tt)+) => {
        if !$cond {
            return Err(format!($($msg)+));
        }
    };
}

// Pilot run on the seed-1, 54-record synthetic set with base_seed 1:
// regression, linear readout, default settings.
const PILOT_SSP_MAE: f64 = 0.568948642962267;
const PILOT_GRAPHHD_MAE: f64 = 0.7811374302216776;
const PILOT_RESERVOIR_400_MAE: f64 = 0.8262507437937583;
const PILOT_BASELINE_MAE: f64 = 0.8915969070150199;
const PILOT_TOLERANCE: f64 = 1e-6;
const SSP_BASELINE_RATIO: f64 = 0.8;

fn synthetic_54() -> Vec<MoleculeGraph> {
    synthetic_dataset(&SyntheticParams::default()).unwrap()
}

fn synthetic_graphs(seed: u64, n: usize) -> Vec<MoleculeGraph> {
    synthetic_dataset(&SyntheticParams {
        seed,
        n,
        max_atoms: 12,
    })
    .unwrap()
}

fn within(elapsed: Duration, limit: Duration, what: &str) -> Result<(), String> {
    if elapsed < limit {
        Ok(())
    } else {
        Err(format!("{what} took {elapsed:.1?}, limit {limit:?}"))
    }
}

fn vsa_algebra() -> Check {
    let start = Instant::now();
    let mut rng = SeededRng::new(1);
    let a = MapHypervector::sample(&mut rng, 10_000).unwrap();
    let b = MapHypervector::sample(&mut rng, 10_000).unwrap();
    let c = MapHypervector::sample(&mut rng, 10_000).unwrap();
    ensure!(a.bind(&a).unwrap() == MapHypervector::ones(10_000), "MAP bind is not self-inverse");
    ensure!(a.bind(&b).unwrap().bind(&b).unwrap() == a, "MAP unbinding failed");
    let lhs = a.bind(&(&b + &c)).unwrap();
    let rhs = &a.bind(&b).unwrap() + &a.bind(&c).unwrap();
    ensure!(lhs == rhs, "MAP binding does not distribute over bundling");

    let mut worst_conv: f64 = 0.0;
    for d in [2, 3, 4, 5, 8, 16, 17, 30, 31, 64] {
        let x: Vec<f64> = (0..d).map(|_| rng.standard_normal()).collect();
        let y: Vec<f64> = (0..d).map(|_| rng.standard_normal()).collect();
        let got = fft::circular_convolve(&x, &y).unwrap();
        worst_conv = worst_conv.max(max_abs_diff(&got, &naive_convolve(&x, &y)));
    }
    ensure!(worst_conv <= 1e-12, "convolution off by {worst_conv:e}");

    let u = UnitaryHypervector::sample(&mut rng, 10_000).unwrap();
    let mut worst_power: f64 = 0.0;
    let mut worst_norm: f64 = (u.norm() - 1.0).abs();
    for (s, t) in [(0.3, 1.7), (-2.25, 0.5), (1.0, 1.0), (3.9, -4.4)] {
        let split = u.frac_power(s).bind(&u.frac_power(t)).unwrap();
        let joint = u.frac_power(s + t);
        worst_power = worst_power.max(max_abs_diff(split.values(), joint.values()));
        worst_norm = worst_norm.max((joint.norm() - 1.0).abs()).max((split.norm() - 1.0).abs());
    }
    ensure!(worst_power <= 1e-9, "fractional powers not additive: {worst_power:e}");
    ensure!(worst_norm <= 1e-9, "unitary norm off by {worst_norm:e}");
    within(start.elapsed(), Duration::from_secs(10), "suite")?;
    Ok(format!(
        "conv err {worst_conv:.1e}, power err {worst_power:.1e}, norm err {worst_norm:.1e}, {:.2?}",
        start.elapsed()
    ))
}

fn figure_one_frames() -> Check {
    let frames = encode_graph(&pbb2()).unwrap();
    let bits = |slots: &[usize]| -> String {
        (0..FRAME_LEN)
            .map(|k| if slots.contains(&k) { '1' } else { '0' })
            .collect()
    };
    let want = [bits(&[0, 1, 147]), bits(&[0, 2, 147]), bits(&[1, 2, 148])];
    ensure!(frames.len() == 3, "{} frames", frames.len());
    for (k, (f, w)) in frames.iter().zip(&want).enumerate() {
        ensure!(&f.to_string() == w, "frame {k} is {f}");
    }
    Ok("3 frames, d1 frames share bin 147, d2 frame uses bin 148".into())
}

fn graphhd_permutation_invariance() -> Check {
    let start = Instant::now();
    let graphs = synthetic_graphs(101, 100);
    let cb = ElementCodebook::new(1, 10_000, 25).unwrap();
    let mut rng = SeededRng::new(2);
    for g in &graphs {
        let mut order: Vec<usize> = (0..g.atom_count()).collect();
        rng.shuffle(&mut order);
        let h = g.reordered(&order).unwrap();
        ensure!(
            encode_graphhd(g, &cb).unwrap() == encode_graphhd(&h, &cb).unwrap(),
            "{} changed under relabeling",
            g.id()
        );
    }
    within(start.elapsed(), Duration::from_secs(30), "100 graphs")?;
    Ok(format!("100 graphs bit-identical, {:.2?}", start.elapsed()))
}

fn ssp_translation_equivariance() -> Check {
    let start = Instant::now();
    let graphs = synthetic_graphs(102, 50);
    let enc = SspEncoder::new(1, 10_000, 1.0).unwrap();
    let mut rng = SeededRng::new(3);
    let mut worst: f64 = 1.0;
    for g in &graphs {
        let delta = [0; 3].map(|_: i32| 6.0 * rng.uniform() - 3.0);
        let moved = enc.encode(&g.translated(delta)).unwrap();
        let shift = encode_position(delta, &enc.basis).unwrap();
        let want = enc.encode(g).unwrap().bind(shift.values()).unwrap();
        worst = worst.min(cosine(moved.values(), want.values()));
    }
    ensure!(worst >= 1.0 - 1e-9, "minimum cosine {worst}");
    within(start.elapsed(), Duration::from_secs(60), "50 graphs")?;
    Ok(format!("min cosine 1 - {:.1e}, {:.2?}", 1.0 - worst, start.elapsed()))
}

fn spatial_memory_decoding() -> Check {
    let basis = AxisBasis::new(11, 10_000, 1.0).unwrap();
    let mut rng = SeededRng::new(99);
    let objects: Vec<(UnitaryHypervector, [f64; 3])> = (0..5)
        .map(|_| {
            let o = UnitaryHypervector::sample(&mut rng, 10_000).unwrap();
            (o, [0; 3].map(|_: i32| 6.0 * rng.uniform()))
        })
        .collect();
    let pairs: Vec<(Vec<f64>, [f64; 3])> = objects
        .iter()
        .map(|(o, p)| (o.values().to_vec(), *p))
        .collect();
    let memory = encode_spatial_memory(&pairs, &basis).unwrap();
    let (mut min_hit, mut max_decoy, mut min_cos) = (f64::INFINITY, f64::NEG_INFINITY, f64::INFINITY);
    for (k, (obj, p)) in objects.iter().enumerate() {
        let q = query_spatial_memory(&memory, obj).unwrap();
        let s = encode_position(*p, &basis).unwrap();
        // projection onto the unit-norm position code
        let hit = dot(q.values(), s.values());
        let hit_cos = cosine(q.values(), s.values());
        ensure!(hit > 0.5, "object {k}: similarity {hit}");
        for axis in 0..3 {
            for sign in [-1.0, 1.0] {
                let mut decoy = *p;
                decoy[axis] += sign * 3.0;
                let d = encode_position(decoy, &basis).unwrap();
                let miss = dot(q.values(), d.values());
                ensure!(miss < hit, "object {k}: decoy {decoy:?} scores {miss} ≥ {hit}");
                ensure!(cosine(q.values(), d.values()) < hit_cos, "object {k}: decoy cosine");
                max_decoy = max_decoy.max(miss);
            }
        }
        min_hit = min_hit.min(hit);
        min_cos = min_cos.min(hit_cos);
    }
    Ok(format!(
        "min similarity {min_hit:.3} (cosine {min_cos:.3}), max decoy {max_decoy:.3}"
    ))
}

fn tiny_dimension_equivalence() -> Check {
    let cb = ElementCodebook::new(7, 8, 25).unwrap();
    let v = cb.edge().values();
    let (hb, hpb) = (cb.element(5).values(), cb.element(82).values());
    let g = pbb2();
    let (d1, d2) = pbb2_distances();
    let (s1, s2) = ((d1 / 6.0 * 24.0).round() as i64, (d2 / 6.0 * 24.0).round() as i64);
    let prod = |a: &[i32], b: &[i32]| a.iter().zip(b).map(|(x, y)| x * y).collect::<Vec<i32>>();
    let add = |a: &[i32], b: &[i32]| a.iter().zip(b).map(|(x, y)| x + y).collect::<Vec<i32>>();
    let nm = [
        add(&prod(&permute_oracle(v, s1), hb), &prod(&permute_oracle(v, s1), hb)),
        add(&prod(&permute_oracle(v, s1), hpb), &prod(&permute_oracle(v, s2), hb)),
        add(&prod(&permute_oracle(v, s1), hpb), &prod(&permute_oracle(v, s2), hb)),
    ];
    for (i, want) in nm.iter().enumerate() {
        ensure!(node_memory(&g, i, &cb).unwrap().values() == want.as_slice(), "node memory {i}");
    }
    let h = [hpb, hb, hb];
    let graph: Vec<f64> = (0..8)
        .map(|k| 0.5 * f64::from((0..3).map(|i| h[i][k] * nm[i][k]).sum::<i32>()))
        .collect();
    let eq2 = max_abs_diff(encode_graphhd(&g, &cb).unwrap().values(), &graph);
    ensure!(eq2 == 0.0, "graph vector off by {eq2}");

    let enc = SspEncoder::new(7, 8, 1.0).unwrap();
    let (ub, upb) = (enc.codebook.element(5).values(), enc.codebook.element(82).values());
    let unit = |terms: &[&[f64]]| {
        let s: Vec<f64> = (0..8).map(|k| terms.iter().map(|t| t[k]).sum()).collect();
        let n = norm(&s);
        s.into_iter().map(|x| x / n).collect::<Vec<f64>>()
    };
    let objects = [
        naive_convolve(upb, &unit(&[ub, ub])),
        naive_convolve(ub, &unit(&[upb, ub])),
        naive_convolve(ub, &unit(&[upb, ub])),
    ];
    let mut eq6: f64 = 0.0;
    for (i, want) in objects.iter().enumerate() {
        eq6 = eq6.max(max_abs_diff(object_vector(&g, i, &enc.codebook).unwrap().values(), want));
    }
    let axes = [0, 1, 2].map(|k| enc.basis.axis(k).values());
    let mut expected = vec![0.0; 8];
    for (atom, obj) in g.atoms().iter().zip(&objects) {
        let s = position_oracle(axes, atom.position(), 1.0);
        for (e, x) in expected.iter_mut().zip(naive_convolve(obj, &s)) {
            *e += 0.5 * x;
        }
    }
    let eq5 = max_abs_diff(enc.encode(&g).unwrap().values(), &expected);
    ensure!(eq6 <= 1e-12, "object vectors off by {eq6:e}");
    ensure!(eq5 <= 1e-12, "SSP graph vector off by {eq5:e}");
    Ok(format!("node memories and graph vector exact, OBJ err {eq6:.1e}, SSP graph err {eq5:.1e}"))
}

fn readout_numerics() -> Check {
    let mut rng = SeededRng::new(17);
    let rows: Vec<Vec<f64>> = (0..6)
        .map(|_| (0..4).map(|_| rng.standard_normal()).collect())
        .collect();
    let labels: Vec<f64> = (0..6).map(|_| rng.standard_normal()).collect();
    let data = FeatureMatrix::new(rows, labels).unwrap();
    let mut worst_mlp: f64 = 0.0;
    for hidden in [vec![10], vec![64, 32]] {
        let model = MlpModel::init(4, &MlpConfig { hidden, seed: 4, ..Default::default() });
        let (_, grads) = model.loss_and_gradients(&data);
        let numeric = finite_difference(&model.parameters(), 1e-6, |p| {
            let mut m = model.clone();
            m.set_parameters(p);
            m.loss_and_gradients(&data).0
        });
        let mut at = 0;
        for g in &grads {
            for tensor in [g.weights.as_slice(), g.bias.as_slice()] {
                worst_mlp = worst_mlp.max(relative_error(tensor, &numeric[at..at + tensor.len()]));
                at += tensor.len();
            }
        }
    }
    ensure!(worst_mlp <= 1e-5, "MLP gradient relative error {worst_mlp:e}");

    let mut worst_hinge: f64 = 0.0;
    let mut checked = 0;
    while checked < 5 {
        let weights: Vec<f64> = (0..6).map(|_| rng.standard_normal()).collect();
        let bias = rng.standard_normal();
        let x: Vec<f64> = (0..6).map(|_| rng.standard_normal()).collect();
        let y = if rng.bernoulli(0.5) { 1.0 } else { -1.0 };
        let model = LinearModel { weights: weights.clone(), bias };
        if (1.0 - y * model.decision(&x)).abs() < 1e-3 {
            continue;
        }
        let (_, mut analytic, gb) = hinge_loss_and_grad(&model, &x, y, 1e-4);
        analytic.push(gb);
        let mut params = weights;
        params.push(bias);
        let numeric = finite_difference(&params, 1e-6, |p| {
            let m = LinearModel { weights: p[..6].to_vec(), bias: p[6] };
            hinge_loss_and_grad(&m, &x, y, 1e-4).0
        });
        worst_hinge = worst_hinge.max(relative_error(&analytic, &numeric));
        checked += 1;
    }
    ensure!(worst_hinge <= 1e-5, "hinge gradient relative error {worst_hinge:e}");

    let mut worst_residual: f64 = 0.0;
    for (n, p, ridge) in [(30, 8, 1e-6), (12, 40, 1e-6), (38, 200, 1e-6)] {
        let rows: Vec<Vec<f64>> = (0..n)
            .map(|_| (0..p).map(|_| rng.standard_normal()).collect())
            .collect();
        let labels: Vec<f64> = (0..n).map(|_| rng.standard_normal()).collect();
        let m = train_linear_regressor(&FeatureMatrix::new(rows.clone(), labels.clone()).unwrap(), ridge)
            .unwrap();
        let xm: Vec<f64> = (0..p).map(|j| rows.iter().map(|r| r[j]).sum::<f64>() / n as f64).collect();
        let ym = labels.iter().sum::<f64>() / n as f64;
        let x = nalgebra::DMatrix::from_fn(n, p, |i, j| rows[i][j] - xm[j]);
        let yv = nalgebra::DVector::from_iterator(n, labels.iter().map(|v| v - ym));
        let xty = x.transpose() * &yv;
        let w = nalgebra::DVector::from_column_slice(&m.weights);
        let lhs = (x.transpose() * &x + nalgebra::DMatrix::identity(p, p) * ridge) * w;
        worst_residual = worst_residual.max((lhs - &xty).norm() / xty.norm());
    }
    ensure!(worst_residual <= 1e-8, "ridge residual {worst_residual:e}");
    Ok(format!(
        "MLP grad err {worst_mlp:.1e}, hinge grad err {worst_hinge:.1e}, ridge residual {worst_residual:.1e}"
    ))
}

fn hand_chain() -> Result<(), String> {
    let config = ReservoirConfig {
        size: 3,
        frame_dwell: 2,
        settle: 16,
        lif: LifParams {
            tau_m: 4.0,
            v_thresh: 1.0,
            v_reset: 0.0,
            refractory: 2.0,
            dt: 1.0,
        },
        ..Default::default()
    };
    let mut input = vec![Vec::new(); FRAME_LEN];
    input[0] = vec![(0, 0.6)];
    let recurrent = vec![vec![(1, 1.2)], vec![(2, 0.7)], vec![]];
    let r = Reservoir::from_parts(config, vec![true; 3], recurrent, input).unwrap();
    let record = r.run_recorded(&[SpikeFrame::from_slots(&[0])]).unwrap();
    let (mut v, mut blocked, mut prev) = ([0.0f64; 3], [0usize; 3], [false; 3]);
    let mut spikes: Vec<Vec<usize>> = vec![Vec::new(); 3];
    for t in 0..18 {
        let current = [
            if t < 2 { 0.6 } else { 0.0 },
            if prev[0] { 1.2 } else { 0.0 },
            if prev[1] { 0.7 } else { 0.0 },
        ];
        let mut now = [false; 3];
        for k in 0..3 {
            if blocked[k] > 0 {
                blocked[k] -= 1;
                v[k] = 0.0;
                continue;
            }
            v[k] = v[k] * 0.75 + current[k];
            if v[k] >= 1.0 {
                v[k] = 0.0;
                blocked[k] = 2;
                now[k] = true;
                spikes[k].push(t);
            }
        }
        prev = now;
        ensure!(record.voltages[t].as_slice() == v.as_slice(), "trace differs at step {t}");
    }
    ensure!(record.spike_steps == spikes, "spike times {:?}", record.spike_steps);
    ensure!(spikes == vec![vec![1], vec![2], vec![]], "hand spike times {spikes:?}");
    Ok(())
}

fn reservoir_structure() -> Check {
    let graphs = synthetic_54();
    let frames: Vec<Vec<SpikeFrame>> = graphs
        .iter()
        .map(|g| {
            let f = encode_graph(g).unwrap();
            if f.is_empty() { vec![SpikeFrame::zero()] } else { f }
        })
        .collect();
    let mut timings = Vec::new();
    for (size, limit) in [(400, 120), (1650, 120), (10_000, 1200)] {
        let start = Instant::now();
        let cfg = ReservoirConfig { size, seed: 5, ..Default::default() };
        let r = Reservoir::build(&cfg).unwrap();
        let exc = r.excitatory().iter().filter(|&&e| e).count();
        let (want_exc, want_inh) = ((0.8 * size as f64).ceil() as usize, (0.2 * size as f64).floor() as usize);
        ensure!(exc == want_exc && size - exc == want_inh, "size {size}: {exc} excitatory");
        for f in &frames {
            ensure!(r.run(f).unwrap().rates.len() == size, "state width");
        }
        within(start.elapsed(), Duration::from_secs(limit), &format!("size {size}"))?;
        timings.push(format!("{size}: {:.1?}", start.elapsed()));
        if size == 400 {
            let again = Reservoir::build(&cfg).unwrap();
            ensure!(again == r, "rebuild differs");
            ensure!(again.run(&frames[0]).unwrap() == r.run(&frames[0]).unwrap(), "rerun differs");
            let silent = r.run(&[SpikeFrame::zero(); 3]).unwrap();
            ensure!(silent.rates.iter().all(|&x| x == 0.0), "zero input produced spikes");
        }
    }
    hand_chain()?;
    Ok(format!("E/I split exact, hand trace exact, {}", timings.join(", ")))
}

fn end_to_end_ordering(reservoir: &ExperimentOutcome) -> Check {
    let run = |method| {
        run_experiment(&ExperimentConfig {
            method,
            task: Task::Regression,
            ..Default::default()
        })
        .unwrap()
    };
    let ssp = run(Method::SspGraphHd);
    let graphhd = run(Method::GraphHd);
    let (s, g, r) = (ssp.row.mean, graphhd.row.mean, reservoir.row.mean);
    let baseline = ssp.baseline_mean();
    for (name, got, want) in [
        ("ssp-graphhd", s, PILOT_SSP_MAE),
        ("graphhd", g, PILOT_GRAPHHD_MAE),
        ("reservoir-400", r, PILOT_RESERVOIR_400_MAE),
        ("baseline", baseline, PILOT_BASELINE_MAE),
    ] {
        ensure!((got - want).abs() <= PILOT_TOLERANCE, "{name} MAE {got} differs from pilot {want}");
    }
    ensure!(s <= SSP_BASELINE_RATIO * baseline, "SSP MAE {s:.4} vs baseline {baseline:.4}");
    ensure!(s <= g && g <= r, "ordering violated: {s:.4}, {g:.4}, {r:.4}");
    Ok(format!(
        "MAE ssp {s:.4} ({:.2}x baseline {baseline:.4}) <= graphhd {g:.4} <= reservoir-400 {r:.4}",
        s / baseline
    ))
}

fn protocol_conformance(reservoir: &ExperimentOutcome) -> Check {
    let (train, test) = split_indices(54, 0.7, &mut SeededRng::new(1)).unwrap();
    ensure!((train.len(), test.len()) == (38, 16), "split {}/{}", train.len(), test.len());
    ensure!(reservoir.runs.len() == 25, "{} runs", reservoir.runs.len());
    let seeds: Vec<u64> = reservoir.runs.iter().map(|r| r.seed).collect();
    ensure!(seeds == (1..=25).collect::<Vec<_>>(), "seeds {seeds:?}");
    let (mean, std) = mean_std(&reservoir.runs.iter().map(|r| r.metric).collect::<Vec<_>>());
    ensure!(mean == reservoir.row.mean && std == reservoir.row.std, "mean/std mismatch");
    ensure!(std > 0.0, "25 distinct seeds gave zero spread");

    let dir = tempfile::tempdir().map_err(|e| e.to_string())?;
    let mut files = Vec::new();
    for name in ["first.csv", "second.csv"] {
        let cfg = ExperimentConfig {
            method: Method::Reservoir,
            runs: Some(3),
            timestamp: Some("2024-01-01T00:00:00Z".into()),
            output_path: Some(dir.path().join(name)),
            ..Default::default()
        };
        run_experiment(&cfg).map_err(|e| e.to_string())?;
        run_experiment(&ExperimentConfig { method: Method::GraphHd, runs: None, ..cfg })
            .map_err(|e| e.to_string())?;
        files.push(std::fs::read(dir.path().join(name)).map_err(|e| e.to_string())?);
    }
    ensure!(files[0] == files[1], "results CSV differs between identical runs");
    ensure!(
        String::from_utf8_lossy(&files[0]).lines().next() == Some(CSV_HEADER),
        "header"
    );
    Ok(format!("38/16 split, 25 runs {mean:.4} ± {std:.4}, CSV byte-identical"))
}

fn main() {
    let reservoir_400 = || {
        run_experiment(&ExperimentConfig {
            method: Method::Reservoir,
            task: Task::Regression,
            reservoir_size: 400,
            ..Default::default()
        })
        .unwrap()
    };
    let shared = catch_unwind(reservoir_400).ok();
    let needs_reservoir = |f: fn(&ExperimentOutcome) -> Check| -> Check {
        match &shared {
            Some(out) => f(out),
            None => Err("25-run reservoir experiment failed".into()),
        }
    };

    let criteria: Vec<(&str, Box<dyn Fn() -> Check>)> = vec![
        ("vsa-algebra", Box::new(vsa_algebra)),
        ("spike-frames-pbb2", Box::new(figure_one_frames)),
        ("graphhd-permutation-invariance", Box::new(graphhd_permutation_invariance)),
        ("ssp-translation-equivariance", Box::new(ssp_translation_equivariance)),
        ("spatial-memory-decoding", Box::new(spatial_memory_decoding)),
        ("tiny-dimension-oracles", Box::new(tiny_dimension_equivalence)),
        ("readout-numerics", Box::new(readout_numerics)),
        ("reservoir-structure", Box::new(reservoir_structure)),
        ("end-to-end-ordering", Box::new(|| needs_reservoir(end_to_end_ordering))),
        ("protocol-conformance", Box::new(|| needs_reservoir(protocol_conformance))),
    ];
    let mut failed = 0;
    for (name, check) in &criteria {
        let outcome = catch_unwind(AssertUnwindSafe(check))
            .unwrap_or_else(|_| Err("panicked".to_string()));
        match outcome {
            Ok(detail) => println!("PASS {name}: {detail}"),
            Err(reason) => {
                failed += 1;
                println!("FAIL {name}: {reason}");
            }
        }
    }
    println!("{} of {} criteria passed", criteria.len() - failed, criteria.len());
    if failed > 0 {
        std::process::exit(1);
    }
}
