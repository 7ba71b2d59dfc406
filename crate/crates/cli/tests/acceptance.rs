//! Acceptance suite: one test per shipping criterion, each printing a
//! single `criterion N: ...` line (visible with `--show-output` or
//! `--nocapture`) in addition to its assertions.
//!
//! Criterion 6 needs real speech: point `AN4_TEST_DIR` at a directory of
//! 16 kHz WAV files to enable it; otherwise it reports SKIPPED and the
//! synthetic criteria govern.

use std::f64::consts::PI;
use std::path::PathBuf;
use std::process::Command;

use ndarray::Array2;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use submel_core::{
    aliased_spectrum, build_filterbank, build_modified_filterbank, compare_case1, compare_case2,
    corpus_report, dct_mfcc, decimate, dft, mfcc_pipeline, mfcc_subsampled_pipeline, AudioSignal,
    Case, MelBankSpec, MelLogSpectrum, PipelineConfig,
};

fn random_frame(rng: &mut ChaCha8Rng, len: usize) -> Vec<f64> {
    (0..len).map(|_| rng.random_range(-1.0..1.0)).collect()
}

/// Spectral folding must agree with decimation exactly: the two-sided DFT
/// of every alpha-th sample equals the 1/alpha-scaled sum of the alpha
/// aliased segments of the original DFT. Relative error is measured
/// against the peak magnitude of the expected spectrum.
#[test]
fn criterion_1_aliasing_identity() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    let mut worst = 0.0f64;
    for &(n, alpha) in &[(512usize, 2usize), (512, 4), (480, 2), (480, 3), (480, 4)] {
        for _ in 0..200 {
            let frame = random_frame(&mut rng, n);
            let folded = aliased_spectrum(&dft(&frame).unwrap(), alpha).unwrap();
            let decimated = decimate(&AudioSignal::new(frame, 48_000), alpha).unwrap();
            let direct = dft(&decimated.samples).unwrap();
            assert_eq!(folded.len(), direct.len());
            let peak = direct.iter().map(|c| c.norm()).fold(0.0, f64::max);
            for (got, want) in folded.iter().zip(&direct) {
                worst = worst.max((got - want).norm() / peak);
            }
        }
    }
    assert!(
        worst < 1e-9,
        "aliasing identity drifted: max relative error {worst:e}"
    );
    println!(
        "criterion 1: PASS - folding identity on 1000 random frames \
         (N=512 a=2,4; N=480 a=2,3,4), max relative error {worst:.2e} < 1e-9"
    );
}

/// With no subsampling the modified bank and the subsampled pipeline must
/// collapse onto the standard ones.
#[test]
fn criterion_2_alpha_one_degeneracy() {
    let spec = MelBankSpec {
        n_filters: 30,
        f_min_hz: 130.0,
        f_max_hz: 6_800.0,
        sample_rate: 16_000,
        n_bins: 257,
    };
    let standard = build_filterbank(&spec).unwrap();
    let degenerate = build_modified_filterbank(&spec, 1).unwrap();
    let bank_diff = (&standard.weights - &degenerate.weights)
        .iter()
        .fold(0.0f64, |acc, d| acc.max(d.abs()));
    assert!(bank_diff <= 1e-12, "banks differ by {bank_diff:e}");

    let config = PipelineConfig {
        alpha: 1,
        ..PipelineConfig::default()
    };
    let mut rng = ChaCha8Rng::seed_from_u64(22);
    let mut worst = 0.0f64;
    for _ in 0..10 {
        let samples: Vec<f64> = (0..16_000).map(|_| rng.random_range(-0.5..0.5)).collect();
        let signal = AudioSignal::new(samples, 16_000);
        let full = mfcc_pipeline(&signal, &config).unwrap();
        let sub = mfcc_subsampled_pipeline(&signal, &config).unwrap();
        let diff = (&full.coeffs - &sub.coeffs)
            .iter()
            .fold(0.0f64, |acc, d| acc.max(d.abs()));
        worst = worst.max(diff);
    }
    assert!(worst <= 1e-12, "alpha=1 pipelines diverge by {worst:e}");
    println!(
        "criterion 2: PASS - alpha=1 bank and pipeline match the standard ones \
         on 10 random signals, max deviation {worst:.2e} <= 1e-12"
    );
}

/// Triangular-bank geometry: bounded weights, unimodal rows, zero outside
/// support, complementary overlaps, increasing centers, and 24 active
/// filters on the halved grid.
#[test]
fn criterion_3_filterbank_geometry() {
    let spec = MelBankSpec {
        n_filters: 30,
        f_min_hz: 130.0,
        f_max_hz: 6_800.0,
        sample_rate: 16_000,
        n_bins: 257,
    };
    let bank = build_filterbank(&spec).unwrap();
    let grid = &bank.edges_hz; // filter i spans [grid[i], grid[i+2]] with peak at grid[i+1]

    for (i, row) in bank.weights.rows().into_iter().enumerate() {
        let row: Vec<f64> = row.iter().copied().collect();
        assert!(
            row.iter().all(|&w| (0.0..=1.0).contains(&w)),
            "row {i} leaves [0,1]"
        );
        let peak = row
            .iter()
            .enumerate()
            .max_by(|a, b| a.1.total_cmp(b.1))
            .map(|(k, _)| k)
            .unwrap();
        assert!(
            row.windows(2).take(peak).all(|w| w[0] <= w[1])
                && row.windows(2).skip(peak).all(|w| w[0] >= w[1]),
            "row {i} is not unimodal"
        );
        for (k, &w) in row.iter().enumerate() {
            let f = k as f64 * bank.bin_hz;
            if f < grid[i] || f >= grid[i + 2] {
                assert_eq!(w, 0.0, "row {i} has weight outside its support at bin {k}");
            }
        }
    }

    for pair in grid.windows(2) {
        assert!(pair[0] < pair[1], "grid points must increase strictly");
    }
    for pair in bank.centers_hz.windows(2) {
        assert!(pair[0] < pair[1], "centers must increase strictly");
    }

    let mut overlaps = 0usize;
    for i in 0..spec.n_filters - 1 {
        for k in 0..spec.n_bins {
            let f = k as f64 * bank.bin_hz;
            if f >= grid[i + 1] && f < grid[i + 2] {
                let sum = bank.weights[[i, k]] + bank.weights[[i + 1, k]];
                assert!(
                    (sum - 1.0).abs() <= 1e-12,
                    "rows {i},{} sum to {sum} at bin {k}",
                    i + 1
                );
                overlaps += 1;
            }
        }
    }
    assert!(overlaps > 150, "overlap check covered only {overlaps} bins");

    let modified = build_modified_filterbank(&spec, 2).unwrap();
    assert_eq!(modified.active_count, 24);
    println!(
        "criterion 3: PASS - weights in [0,1], unimodal rows, zero outside support, \
         {overlaps} overlap bins complementary to 1e-12, centers increasing, \
         24 active filters at alpha=2"
    );
}

/// Direct evaluation of the cepstral sum, used as the oracle below.
fn dct_oracle(log_energies: &[f64]) -> Vec<f64> {
    let f = log_energies.len();
    (1..=f)
        .map(|r| {
            (1..=f)
                .map(|m| {
                    log_energies[m - 1]
                        * ((r as f64) * (2 * m - 1) as f64 * PI / (2.0 * f as f64)).cos()
                })
                .sum()
        })
        .collect()
}

/// Cepstral transform analytics: constants vanish, a cosine basis vector
/// concentrates onto its own index with value F/2, and the map is linear.
#[test]
fn criterion_4_dct_analytics() {
    let f = 30usize;

    let constant = MelLogSpectrum {
        values: Array2::from_elem((f, 1), 3.7),
    };
    let coeffs = dct_mfcc(&constant).unwrap().coeffs;
    let worst_const = coeffs.iter().fold(0.0f64, |acc, c| acc.max(c.abs()));
    assert!(
        worst_const < 1e-9,
        "constant input should vanish, saw {worst_const:e}"
    );

    for &r0 in &[1usize, 2, 15, 29] {
        let column: Vec<f64> = (1..=f)
            .map(|m| ((r0 as f64) * (2 * m - 1) as f64 * PI / (2.0 * f as f64)).cos())
            .collect();
        let input = MelLogSpectrum {
            values: Array2::from_shape_vec((f, 1), column.clone()).unwrap(),
        };
        let got = dct_mfcc(&input).unwrap().coeffs;
        assert!(
            (got[[r0 - 1, 0]] - f as f64 / 2.0).abs() < 1e-9,
            "cosine index {r0} should map to F/2"
        );
        let oracle = dct_oracle(&column);
        for r in 0..f {
            assert!(
                (got[[r, 0]] - oracle[r]).abs() < 1e-9,
                "coefficient {r} disagrees with the direct sum"
            );
        }
    }

    let mut rng = ChaCha8Rng::seed_from_u64(44);
    let x: Vec<f64> = (0..f).map(|_| rng.random_range(-2.0..2.0)).collect();
    let y: Vec<f64> = (0..f).map(|_| rng.random_range(-2.0..2.0)).collect();
    let (a, b) = (0.7, -1.3);
    let mixed: Vec<f64> = x.iter().zip(&y).map(|(xi, yi)| a * xi + b * yi).collect();
    let transform = |v: &[f64]| {
        dct_mfcc(&MelLogSpectrum {
            values: Array2::from_shape_vec((f, 1), v.to_vec()).unwrap(),
        })
        .unwrap()
        .coeffs
    };
    let (tx, ty, tm) = (transform(&x), transform(&y), transform(&mixed));
    let worst_lin = tm
        .iter()
        .zip(tx.iter().zip(ty.iter()))
        .fold(0.0f64, |acc, (m, (xi, yi))| {
            acc.max((m - (a * xi + b * yi)).abs())
        });
    assert!(worst_lin < 1e-9, "linearity violated by {worst_lin:e}");
    println!(
        "criterion 4: PASS - constants vanish ({worst_const:.1e}), cosine bases \
         recover F/2 against the direct-sum oracle, linearity within {worst_lin:.1e}"
    );
}

/// A tone mixture stratified over 200-3500 Hz (all below the subsampled
/// Nyquist minus 400 Hz) with noise 40 dB down.
fn band_limited_mixture(seed: u64) -> AudioSignal {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let k = rng.random_range(4usize..=8);
    let components: Vec<(f64, f64)> = (0..k)
        .map(|i| {
            let lo = 200.0 + 3_300.0 * i as f64 / k as f64;
            let hi = 200.0 + 3_300.0 * (i + 1) as f64 / k as f64;
            (rng.random_range(lo..hi), rng.random_range(0.12..0.25))
        })
        .collect();
    let samples: Vec<f64> = (0..16_000)
        .map(|t| {
            let tones: f64 = components
                .iter()
                .map(|&(freq, amp)| amp * (2.0 * PI * freq * t as f64 / 16_000.0).sin())
                .sum();
            tones + rng.random_range(-0.01..0.01)
        })
        .collect();
    AudioSignal::new(samples, 16_000)
}

/// When the signal has no energy above the subsampled Nyquist, folding is
/// a pure rescale on the kept bins and both protocols must report high
/// agreement.
#[test]
fn criterion_5_band_limited_fidelity() {
    let config = PipelineConfig::default(); // alpha = 2
    let (mut min_case1, mut min_case2) = (f64::INFINITY, f64::INFINITY);
    for seed in 0..10u64 {
        let signal = band_limited_mixture(seed);
        let full = mfcc_pipeline(&signal, &config).unwrap();
        let reduced = decimate(&signal, config.alpha).unwrap();
        let sub = mfcc_subsampled_pipeline(&reduced, &config).unwrap();
        let r1 = compare_case1(&full, &sub).unwrap();
        let r2 = compare_case2(&full, &sub).unwrap().mean;
        assert!(r1 >= 0.99, "seed {seed}: whole-file r {r1} < 0.99");
        assert!(r2 >= 0.97, "seed {seed}: per-frame mean r {r2} < 0.97");
        min_case1 = min_case1.min(r1);
        min_case2 = min_case2.min(r2);
    }
    println!(
        "criterion 5: PASS - 10 band-limited mixtures, \
         min whole-file r {min_case1:.6} >= 0.99, min per-frame mean r {min_case2:.6} >= 0.97"
    );
}

/// Real-speech agreement at alpha = 2. Runs only when `AN4_TEST_DIR`
/// points at a directory of WAV files; otherwise reports SKIPPED so the
/// synthetic criteria govern.
#[test]
fn criterion_6_speech_corpus_agreement() {
    let Some(dir) = std::env::var_os("AN4_TEST_DIR") else {
        println!("criterion 6: SKIPPED - AN4_TEST_DIR is not set; no speech corpus available");
        return;
    };
    let root = PathBuf::from(dir);
    if !root.is_dir() {
        println!(
            "criterion 6: SKIPPED - AN4_TEST_DIR={} is not a directory",
            root.display()
        );
        return;
    }
    let mut files: Vec<PathBuf> = walkdir::WalkDir::new(&root)
        .into_iter()
        .filter_map(|e| e.ok())
        .filter(|e| e.file_type().is_file())
        .map(|e| e.into_path())
        .filter(|p| {
            p.extension()
                .map(|e| e.to_string_lossy().eq_ignore_ascii_case("wav"))
                .unwrap_or(false)
        })
        .collect();
    files.sort();
    if files.is_empty() {
        println!(
            "criterion 6: SKIPPED - no .wav files under {}",
            root.display()
        );
        return;
    }

    let config = PipelineConfig::default();
    let whole = corpus_report(&files, &config, Case::I).unwrap();
    let framed = corpus_report(&files, &config, Case::II).unwrap();
    assert!(
        (whole.mean - 0.986).abs() <= 0.03,
        "whole-file mean r {} outside 0.986 +/- 0.03",
        whole.mean
    );
    assert!(
        (framed.mean - 0.961).abs() <= 0.05,
        "per-frame mean r {} outside 0.961 +/- 0.05",
        framed.mean
    );
    println!(
        "criterion 6: PASS - {} files: whole-file mean r {:.4} (target 0.986 +/- 0.03), \
         per-frame mean r {:.4} (target 0.961 +/- 0.05)",
        whole.per_file.len(),
        whole.mean,
        framed.mean
    );
}

/// Word-recognition accuracy tables require training an external HMM
/// recognizer on ~950 utterances; that is out of scope for this library,
/// so the criterion is recorded rather than tested.
#[test]
fn criterion_7_recognition_accuracy_out_of_scope() {
    println!(
        "criterion 7: NOT APPLICABLE - recognition-accuracy comparisons need an external \
         recognizer trained on a full speech corpus; covered instead by criteria 1-6"
    );
}

/// Two identical report runs must produce byte-identical artifacts.
#[test]
fn criterion_8_reports_are_replayable() {
    let dir = tempfile::TempDir::new().unwrap();
    let corpus = dir.path().join("corpus");
    std::fs::create_dir(&corpus).unwrap();
    for (name, seed) in [("a.wav", 1u64), ("b.wav", 2), ("c.wav", 3)] {
        submel_core::write_wav(&corpus.join(name), &band_limited_mixture(seed)).unwrap();
    }
    let out = dir.path().join("report.json");
    let manifest = dir.path().join("report.json.manifest.json");

    let mut artifacts: Vec<(Vec<u8>, Vec<u8>, Vec<u8>)> = Vec::new();
    for _ in 0..2 {
        let run = Command::new(env!("CARGO_BIN_EXE_submel"))
            .args([
                "report",
                corpus.to_str().unwrap(),
                "--out",
                out.to_str().unwrap(),
            ])
            .output()
            .expect("binary spawns");
        assert!(
            run.status.success(),
            "report failed: {}",
            String::from_utf8_lossy(&run.stderr)
        );
        artifacts.push((
            std::fs::read(&out).unwrap(),
            std::fs::read(&manifest).unwrap(),
            run.stdout.clone(),
        ));
    }
    assert_eq!(artifacts[0].0, artifacts[0].0);
    assert_eq!(
        artifacts[0].0, artifacts[1].0,
        "report bytes changed between identical runs"
    );
    assert_eq!(
        artifacts[0].1, artifacts[1].1,
        "manifest bytes changed between identical runs"
    );
    assert_eq!(
        artifacts[0].2, artifacts[1].2,
        "summary output changed between identical runs"
    );
    println!(
        "criterion 8: PASS - repeated report runs are byte-identical \
         (report {} bytes, manifest {} bytes)",
        artifacts[0].0.len(),
        artifacts[0].1.len()
    );
}
