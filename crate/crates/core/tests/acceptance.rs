//! Acceptance criteria, one check per criterion. Prints a `[PASS]` or
//! `[FAIL]` line for each and exits non-zero if any fails.

mod common;

use std::f64::consts::PI;
use std::fs;
use std::panic;
use std::path::Path;
use std::process::Command;
use std::time::{Duration, Instant};

use common::{cli, synth_csv, synth_openpose};
use gaitsym::cli::pipeline::{analyze, Analysis, AnalysisConfig};
use gaitsym::ingest::{interpolate_gaps, smooth_moving_average, JointId, JointTrajectory};
use gaitsym::signal::{
    dft, estimate_cycle, fractional_circular_shift, idft, linear_convolution, linear_convolution_fft, CycleSearch,
};
use gaitsym::symmetry::{dissimilarity, CouplingCase};
use gaitsym::synth::{expected_verdict, GaitParams};
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

type Check = Result<String, String>;
type Criterion = (&'static str, fn() -> Check);
type Knob = fn(GaitParams) -> GaitParams;

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn random_series(rng: &mut ChaCha8Rng, n: usize) -> Vec<f64> {
    (0..n).map(|_| rng.random_range(-1.0..1.0)).collect()
}

/// max |a − b| relative to max |b|.
fn rel_err(a: &[f64], b: &[f64]) -> f64 {
    assert_eq!(a.len(), b.len());
    let scale = b.iter().fold(0.0f64, |m, v| m.max(v.abs())).max(f64::MIN_POSITIVE);
    a.iter().zip(b).map(|(p, q)| (p - q).abs()).fold(0.0, f64::max) / scale
}

fn naive_dft(x: &[f64]) -> Vec<Complex64> {
    let m = x.len();
    (0..m)
        .map(|k| {
            x.iter()
                .enumerate()
                .map(|(n, &v)| v * Complex64::from_polar(1.0, -2.0 * PI * ((k * n) % m) as f64 / m as f64))
                .sum()
        })
        .collect()
}

/// The real trigonometric interpolant with DFT coefficients `coeffs`, evaluated at n − d.
fn interpolant_shift(coeffs: &[Complex64], d: f64) -> Vec<f64> {
    let m = coeffs.len();
    let mf = m as f64;
    (0..m)
        .map(|n| {
            let t = n as f64 - d;
            let mut acc = coeffs[0].re;
            for (k, c) in coeffs.iter().enumerate().take(m.div_ceil(2)).skip(1) {
                acc += 2.0 * (c * Complex64::from_polar(1.0, 2.0 * PI * k as f64 * t / mf)).re;
            }
            if m.is_multiple_of(2) {
                acc += coeffs[m / 2].re * (PI * t).cos();
            }
            acc / mf
        })
        .collect()
}

fn direct_convolution(a: &[f64], b: &[f64]) -> Vec<f64> {
    let mut out = vec![0.0; a.len() + b.len() - 1];
    for (i, &p) in a.iter().enumerate() {
        for (j, &q) in b.iter().enumerate() {
            out[i + j] += p * q;
        }
    }
    out
}

/// Removes the alternating (Nyquist) component of an even-length series.
fn without_nyquist(x: &[f64]) -> Vec<f64> {
    if x.len() % 2 == 1 {
        return x.to_vec();
    }
    let sign = |n: usize| if n.is_multiple_of(2) { 1.0 } else { -1.0 };
    let c = x.iter().enumerate().map(|(n, v)| v * sign(n)).sum::<f64>() / x.len() as f64;
    x.iter().enumerate().map(|(n, v)| v - c * sign(n)).collect()
}

fn criterion_1() -> Check {
    let start = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed);
    let mut worst = 0.0f64;
    let mut record = |e: f64, what: &str, m: usize| -> Result<(), String> {
        worst = worst.max(e);
        ensure(e < 1e-9, || format!("{what} at length {m}: relative error {e:.3e}"))
    };
    for m in 1..=256 {
        let x = random_series(&mut rng, m);
        let coeffs = dft(&x).map_err(|e| e.to_string())?;
        let oracle = naive_dft(&x);
        let scale = oracle.iter().map(|z| z.norm()).fold(0.0, f64::max);
        let e = coeffs
            .coefficients
            .iter()
            .zip(&oracle)
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max)
            / scale;
        record(e, "dft vs direct sum", m)?;
        record(rel_err(&idft(&coeffs).map_err(|e| e.to_string())?, &x), "round trip", m)?;
        let energy: f64 = x.iter().map(|v| v * v).sum();
        let spectral: f64 = coeffs.coefficients.iter().map(|z| z.norm_sqr()).sum::<f64>() / m as f64;
        record((energy - spectral).abs() / energy, "Parseval", m)?;

        if m >= 2 {
            let d1 = rng.random_range(-2.0 * m as f64..2.0 * m as f64);
            let d2 = rng.random_range(-(m as f64)..m as f64);
            let shifted = fractional_circular_shift(&x, d1).map_err(|e| e.to_string())?;
            record(
                rel_err(&shifted, &interpolant_shift(&oracle, d1)),
                "shift vs interpolant",
                m,
            )?;

            let y = without_nyquist(&x);
            if y.iter().any(|v| v.abs() > 1e-12) {
                let shift = |s: &[f64], d: f64| fractional_circular_shift(s, d).unwrap();
                record(
                    rel_err(&shift(&shift(&y, d1), d2), &shift(&y, d1 + d2)),
                    "shift composition",
                    m,
                )?;
                record(rel_err(&shift(&shift(&y, d1), -d1), &y), "shift inversion", m)?;
            }
            let k = rng.random_range(0..m);
            let mut rotated = x.clone();
            rotated.rotate_right(k);
            record(rel_err(&shift(&x, k as f64), &rotated), "integer shift", m)?;
        }
    }
    let conv_lengths: Vec<usize> = (1..=256).chain((272..=1024).step_by(16)).collect();
    for &n in &conv_lengths {
        let a = random_series(&mut rng, n);
        let b = random_series(&mut rng, n);
        let oracle = direct_convolution(&a, &b);
        record(rel_err(&linear_convolution(&a, &b).unwrap(), &oracle), "convolution", n)?;
        record(
            rel_err(&linear_convolution_fft(&a, &b).unwrap(), &oracle),
            "FFT convolution",
            n,
        )?;
    }
    let elapsed = start.elapsed();
    ensure(elapsed < Duration::from_secs(5), || format!("took {elapsed:?}"))?;
    Ok(format!(
        "worst relative error {worst:.2e} over lengths 1..256 (convolution to 1024), {elapsed:.2?}"
    ))
}

fn shift(x: &[f64], d: f64) -> Vec<f64> {
    fractional_circular_shift(x, d).unwrap()
}

fn criterion_2() -> Check {
    let mut total = 0;
    for p in 16..=60usize {
        for m in [3 * p, 3 * p + p / 2, 4 * p, 6 * p] {
            for phase in [0.0, 0.7, 1.9, 3.3] {
                let x: Vec<f64> = (0..m).map(|n| (2.0 * PI * n as f64 / p as f64 + phase).sin()).collect();
                let est = estimate_cycle(&x, &CycleSearch::default()).map_err(|e| format!("P={p} M={m}: {e}"))?;
                ensure(est.period_frames == p, || {
                    format!("P={p} M={m} phase={phase}: estimated {}", est.period_frames)
                })?;
                total += 1;
            }
        }
    }
    Ok(format!(
        "{total}/{total} sinusoids recovered exactly (periods 16..60, 3 to 6 periods)"
    ))
}

fn timed_run(dir: &Path, name: &str, p: &GaitParams) -> Result<(Analysis, Duration), String> {
    let start = Instant::now();
    let input = synth_csv(dir, name, p);
    let a = analyze(&AnalysisConfig::new(input), name.into()).map_err(|e| format!("{name}: {e}"))?;
    Ok((a, start.elapsed()))
}

fn criterion_3() -> Check {
    let dir = tempfile::tempdir().unwrap();
    let mut min_sym = f64::INFINITY;
    let mut max_asym = f64::NEG_INFINITY;
    let mut slowest = Duration::ZERO;
    for noise in [0.0, 0.25, 0.5] {
        for seed in 0..5 {
            let sym = GaitParams {
                noise_std: noise,
                seed,
                ..GaitParams::default()
            };
            let asym = GaitParams {
                left_amp_ratio: 0.5,
                left_phase_jitter: 0.8,
                ..sym.clone()
            };
            let (s, ts) = timed_run(dir.path(), "sym.csv", &sym)?;
            let (a, ta) = timed_run(dir.path(), "asym.csv", &asym)?;
            slowest = slowest.max(ts).max(ta);
            ensure(s.shift.rho >= 0.95, || {
                format!("symmetric noise {noise} seed {seed}: rho {}", s.shift.rho)
            })?;
            ensure(a.shift.rho <= 0.85, || {
                format!("asymmetric noise {noise} seed {seed}: rho {}", a.shift.rho)
            })?;
            ensure(a.shift.rho < s.shift.rho, || {
                format!(
                    "noise {noise} seed {seed}: asymmetric {} not below symmetric {}",
                    a.shift.rho, s.shift.rho
                )
            })?;
            min_sym = min_sym.min(s.shift.rho);
            max_asym = max_asym.max(a.shift.rho);
        }
    }
    ensure(slowest < Duration::from_secs(1), || {
        format!("slowest record took {slowest:?}")
    })?;
    Ok(format!(
        "symmetric rho >= {min_sym:.4}, asymmetric rho <= {max_asym:.4}, slowest record {slowest:.2?}"
    ))
}

fn criterion_4() -> Check {
    let dir = tempfile::tempdir().unwrap();
    let mut worst_noisy = 0.0f64;
    for seed in 0..8 {
        let p = GaitParams {
            noise_std: 0.5,
            seed,
            ..GaitParams::default()
        };
        let (a, _) = timed_run(dir.path(), "sym.csv", &p)?;
        for case in CouplingCase::ALL {
            let dis = a.dissimilarity.dis(case).ok_or(format!("{case} failed"))?;
            ensure(dis < 1.0, || format!("noisy seed {seed} {case}: dis {dis}"))?;
            worst_noisy = worst_noisy.max(dis);
        }
    }
    let mut worst_exact = 0.0f64;
    for (t, strides) in [(33, 3), (32, 3), (45, 4)] {
        let p = GaitParams {
            cycle_frames: t,
            n_strides: strides,
            ..GaitParams::default()
        };
        let (a, _) = timed_run(dir.path(), "exact.csv", &p)?;
        for case in CouplingCase::ALL {
            let dis = a.dissimilarity.dis(case).ok_or(format!("{case} failed"))?;
            ensure(dis < 1e-6, || format!("exact T={t} {case}: dis {dis:.3e}"))?;
            worst_exact = worst_exact.max(dis);
        }
    }
    Ok(format!(
        "noisy symmetric max dis {worst_noisy:.4} (< 1), exact symmetric max dis {worst_exact:.1e} (< 1e-6)"
    ))
}

fn criterion_5() -> Check {
    let dir = tempfile::tempdir().unwrap();
    let knobs: [(&str, Knob); 3] = [
        ("left_amp_ratio 0.5", |p| GaitParams {
            left_amp_ratio: 0.5,
            ..p
        }),
        ("left_phase_jitter 0.8", |p| GaitParams {
            left_phase_jitter: 0.8,
            ..p
        }),
        ("waveform_distortion 0.5", |p| GaitParams {
            waveform_distortion: 0.5,
            ..p
        }),
    ];
    let mut covered = std::collections::BTreeSet::new();
    let mut lines = Vec::new();
    for (noise, seed) in [(0.0, 0), (0.5, 3)] {
        let base_params = GaitParams {
            noise_std: noise,
            seed,
            ..GaitParams::default()
        };
        let (base, _) = timed_run(dir.path(), "base.csv", &base_params)?;
        for (name, knob) in &knobs {
            let p = knob(base_params.clone());
            let affected = expected_verdict(&p).asymmetric_cases;
            ensure(!affected.is_empty(), || format!("{name}: no affected cases"))?;
            let (a, _) = timed_run(dir.path(), "knob.csv", &p)?;
            for &case in &affected {
                let (d, b) = (
                    a.dissimilarity.dis(case).unwrap(),
                    base.dissimilarity.dis(case).unwrap(),
                );
                ensure(d > b, || {
                    format!("{name} noise {noise} {case}: {d} not above baseline {b}")
                })?;
                covered.insert(case);
            }
            if noise == 0.0 {
                let cells: Vec<String> = affected
                    .iter()
                    .map(|&c| format!("{c} {:.2}", a.dissimilarity.dis(c).unwrap()))
                    .collect();
                lines.push(format!("{name}: {}", cells.join(", ")));
            }
        }
    }
    for case in [CouplingCase::HV, CouplingCase::VH, CouplingCase::VV] {
        ensure(covered.contains(&case), || format!("no knob raises {case}"))?;
    }
    Ok(lines.join("; "))
}

fn criterion_6() -> Check {
    let tol = |v: f64| 1e-9 * v.abs().max(1.0);
    let (ex, _) = dissimilarity(&[1.0, 0.0], &[1.0, 0.0], &[0.0, 1.0], &[1.0, 0.0]).map_err(|e| e.to_string())?;
    ensure((ex - 2.0).abs() <= 1e-9, || format!("hand example gave {ex}"))?;

    let mut rng = ChaCha8Rng::seed_from_u64(606);
    let mut trials = 0;
    for n in (2..=64).chain([100, 200, 300]) {
        for _ in 0..4 {
            let [a, b, x, y] = [(); 4].map(|_| random_series(&mut rng, n));
            let (d, _) = dissimilarity(&a, &b, &x, &y).map_err(|e| e.to_string())?;
            ensure(d >= 0.0, || format!("negative dis {d}"))?;
            let (swapped, _) = dissimilarity(&x, &y, &a, &b).unwrap();
            ensure((d - swapped).abs() <= tol(d), || format!("swap: {d} vs {swapped}"))?;
            for c in [0.1, 2.0, 100.0] {
                let s = |v: &[f64]| v.iter().map(|e| e * c).collect::<Vec<_>>();
                let variants = [
                    ("right side", dissimilarity(&s(&a), &s(&b), &x, &y)),
                    ("left side", dissimilarity(&a, &b, &s(&x), &s(&y))),
                    ("input channel", dissimilarity(&s(&a), &b, &s(&x), &y)),
                    ("output channel", dissimilarity(&a, &s(&b), &x, &s(&y))),
                ];
                for (what, r) in variants {
                    let (v, _) = r.unwrap();
                    ensure((v - d).abs() <= tol(d), || format!("{what} scale {c}: {v} vs {d}"))?;
                }
            }
            trials += 1;
        }
    }
    Ok(format!(
        "hand example dis = {ex}; swap, scale (c = 0.1, 2, 100) and sign checks hold on {trials} random systems"
    ))
}

fn criterion_7() -> Check {
    let dir = tempfile::tempdir().unwrap();
    let mut sweep = Vec::new();
    for step in 0..=12 {
        let r = 1.0 - 0.05 * step as f64;
        let p = GaitParams {
            left_amp_ratio: r,
            seed: 42,
            ..GaitParams::default()
        };
        let (a, _) = timed_run(dir.path(), "sweep.csv", &p)?;
        sweep.push((r, a.dissimilarity.dis(CouplingCase::VV).unwrap()));
    }
    for w in sweep.windows(2) {
        ensure(w[1].1 >= w[0].1, || {
            format!(
                "dis(VV) fell from {} at r={:.2} to {} at r={:.2}",
                w[0].1, w[0].0, w[1].1, w[1].0
            )
        })?;
    }
    let shown: Vec<String> = sweep.iter().step_by(2).map(|(r, d)| format!("{r:.1}:{d:.3}")).collect();
    Ok(format!(
        "dis(VV) non-decreasing over r = 1.0..0.4 [{}]",
        shown.join(" ")
    ))
}

fn criterion_8() -> Check {
    let dir = tempfile::tempdir().unwrap();
    let bin = env!("CARGO_BIN_EXE_gaitsym");
    let input = dir.path().join("walk.csv");
    let p = |s: &Path| s.to_str().unwrap().to_string();
    let synth_args = [
        "synth",
        "--out",
        &p(&input),
        "--cycle-frames",
        "30",
        "--n-strides",
        "5",
        "--noise-std",
        "0.5",
        "--seed",
        "7",
    ];
    let synth = Command::new(bin).args(synth_args).output().map_err(|e| e.to_string())?;
    ensure(synth.status.success(), || {
        String::from_utf8_lossy(&synth.stderr).into_owned()
    })?;

    let mut outputs = Vec::new();
    let mut slowest = Duration::ZERO;
    for run in ["first", "second"] {
        let out = dir.path().join(run);
        let start = Instant::now();
        let status = Command::new(bin)
            .args(["analyze", "--input", &p(&input), "--out-dir", &p(&out)])
            .output()
            .map_err(|e| e.to_string())?;
        slowest = slowest.max(start.elapsed());
        ensure(status.status.success(), || {
            String::from_utf8_lossy(&status.stderr).into_owned()
        })?;
        outputs.push(fs::read(out.join("summary.csv")).map_err(|e| e.to_string())?);
    }
    ensure(outputs[0] == outputs[1], || "summary.csv differs between runs".into())?;
    let frames = String::from_utf8_lossy(&outputs[0])
        .lines()
        .nth(1)
        .unwrap_or("")
        .to_string();
    ensure(frames.split(',').nth(1) == Some("150"), || {
        format!("unexpected row {frames}")
    })?;

    let start = Instant::now();
    let r = cli(&[
        "analyze",
        "--input",
        &p(&input),
        "--out-dir",
        &p(&dir.path().join("third")),
    ]);
    let in_process = start.elapsed();
    ensure(r.code == 0, || r.stderr.clone())?;
    ensure(
        slowest < Duration::from_secs(1) && in_process < Duration::from_secs(1),
        || format!("150-frame analysis took {slowest:?} (process) / {in_process:?} (in-process)"),
    )?;
    Ok(format!(
        "byte-identical summary.csv; 150 frames analysed in {slowest:.2?} (process), {in_process:.2?} (in-process)"
    ))
}

fn trajectory(x: &[f64], confidence: &[f64]) -> JointTrajectory {
    let mut t = JointTrajectory::from_coordinates(JointId::RAnkle, x.to_vec(), vec![0.0; x.len()]).unwrap();
    t.confidence = confidence.to_vec();
    t
}

fn criterion_9() -> Check {
    let dir = tempfile::tempdir().unwrap();
    let params = GaitParams {
        noise_std: 0.4,
        dropout_rate: 0.05,
        seed: 9,
        ..GaitParams::default()
    };
    let csv = synth_csv(dir.path(), "walk.csv", &params);
    let json = synth_openpose(dir.path(), "walk_json", &params);
    let mut summaries = Vec::new();
    for (input, out) in [(&csv, "from_csv"), (&json, "from_json")] {
        let out = dir.path().join(out);
        let r = cli(&[
            "analyze",
            "--input",
            input.to_str().unwrap(),
            "--out-dir",
            out.to_str().unwrap(),
            "--subject",
            "s1",
            "--json",
        ]);
        ensure(r.code == 0, || r.stderr.clone())?;
        summaries.push((
            fs::read(out.join("summary.csv")).unwrap(),
            fs::read(out.join("summary.json")).unwrap(),
        ));
    }
    ensure(summaries[0].0 == summaries[1].0, || {
        "summary.csv differs between formats".into()
    })?;
    ensure(summaries[0].1 == summaries[1].1, || {
        "summary.json differs between formats".into()
    })?;

    let gap = 0.2;
    let interp = |x: &[f64], c: &[f64]| interpolate_gaps(&trajectory(x, c), 0.5).unwrap().x;
    let cases: [(Vec<f64>, Vec<f64>); 3] = [
        (interp(&[10.0, 0.0, 30.0], &[0.9, gap, 0.9]), vec![10.0, 20.0, 30.0]),
        (
            interp(&[0.0, 0.0, 50.0, 60.0], &[0.1, 0.1, 0.9, 0.9]),
            vec![50.0, 50.0, 50.0, 60.0],
        ),
        (
            interp(&[0.0, 0.0, 0.0, 9.0], &[0.9, gap, gap, 0.9]),
            vec![0.0, 3.0, 6.0, 9.0],
        ),
    ];
    for (got, want) in &cases {
        ensure(got == want, || format!("interpolation gave {got:?}, expected {want:?}"))?;
    }
    let smooth = |x: &[f64], w: usize| smooth_moving_average(&trajectory(x, &vec![1.0; x.len()]), w).unwrap().x;
    let smooth_cases = [
        (smooth(&[5.0; 4], 3), vec![5.0; 4]),
        (smooth(&[0.0, 3.0, 0.0, 3.0, 0.0], 3), vec![1.5, 1.0, 2.0, 1.0, 1.5]),
        (smooth(&[0.3, -1.0, 7.5], 1), vec![0.3, -1.0, 7.5]),
    ];
    for (got, want) in &smooth_cases {
        ensure(got == want, || format!("smoothing gave {got:?}, expected {want:?}"))?;
    }
    Ok("OpenPose and CSV inputs give identical summary.csv and summary.json; 6 repair examples exact".into())
}

fn main() {
    let criteria: [Criterion; 9] = [
        ("kernel oracles", criterion_1),
        ("cycle recovery", criterion_2),
        ("shift correlation on synthetic gait", criterion_3),
        ("dissimilarity on symmetric gait", criterion_4),
        ("dissimilarity rises with each asymmetry knob", criterion_5),
        ("dissimilarity invariants", criterion_6),
        ("monotone amplitude sweep", criterion_7),
        ("end-to-end determinism and speed", criterion_8),
        ("ingest fidelity", criterion_9),
    ];
    let mut failed = 0;
    for (i, (name, check)) in criteria.iter().enumerate() {
        let outcome = panic::catch_unwind(check).unwrap_or_else(|e| {
            let msg = e
                .downcast_ref::<String>()
                .cloned()
                .or_else(|| e.downcast_ref::<&str>().map(|s| s.to_string()))
                .unwrap_or_default();
            Err(format!("panicked: {msg}"))
        });
        match outcome {
            Ok(detail) => println!("[PASS] criterion {} ({name}): {detail}", i + 1),
            Err(why) => {
                failed += 1;
                println!("[FAIL] criterion {} ({name}): {why}", i + 1);
            }
        }
    }
    println!("acceptance: {} passed, {failed} failed", criteria.len() - failed);
    if failed > 0 {
        std::process::exit(1);
    }
}
