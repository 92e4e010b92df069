//! Acceptance suite: one PASS/FAIL line per criterion, non-zero exit if any fails.

#[path = "../../core/tests/common/table1.rs"]
mod table1;

use std::panic::{catch_unwind, AssertUnwindSafe};
use std::path::Path;
use std::process::Command;
use std::sync::OnceLock;
use std::time::Instant;

use beamspace::channel::{generate_channel, to_beamspace, BeamspaceChannel, ChannelGenConfig};
use beamspace::complexity::{
    count_multiplications, gamma, speedup_vs_mrt, Algorithm, ComplexityInput,
};
use beamspace::numerics::{complex_gaussian, dft_matrix, ComplexMatrix, FftPlan};
use beamspace::precoding::{
    apply_two_stage, mmv_omp, normalize, omp_column, one_shot_rs, one_shot_sbp, rs, sbp, wf,
    PowerConstraint, Precoder, PrecoderKind, SparseLayout, SparsePrecoder,
};
use beamspace::simulation::{run_ber_sweep, snr_at_ber, BerPoint, Constellation, SimConfig};
use beamspace::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

type Outcome = Result<String, String>;

fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

fn random_matrix(rows: usize, cols: usize, r: &mut ChaCha8Rng) -> ComplexMatrix {
    ComplexMatrix::from_fn(rows, cols, |_, _| complex_gaussian(r, 1.0))
}

fn check(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

/// Dense product with explicit loops, independent of the library's matmul.
fn product(a: &ComplexMatrix, b: &ComplexMatrix) -> ComplexMatrix {
    ComplexMatrix::from_fn(a.rows(), b.cols(), |i, j| {
        (0..a.cols()).map(|k| a[(i, k)] * b[(k, j)]).sum()
    })
}

fn gamma_values() -> Outcome {
    let g16 = gamma(128, 16, 16).map_err(|e| e.to_string())?;
    let g32 = gamma(128, 16, 32).map_err(|e| e.to_string())?;
    check(
        (g16 - 2.9091).abs() <= 1e-4 && (g32 - 2.1333).abs() <= 1e-4,
        || format!("gamma = {g16:.6}, {g32:.6}"),
    )?;
    Ok(format!(
        "gamma(128,16,16) = {g16:.4}, gamma(128,16,32) = {g32:.4}"
    ))
}

fn table_counts() -> Outcome {
    let mut r = rng(2);
    let mut compared = 0;
    for _ in 0..10 {
        let b = 1u64 << r.random_range(1..=9);
        let u = r.random_range(1..=32);
        let k = r.random_range(1..=b.min(64));
        let t = r.random_range(1..=1_000_000);
        let m = r.random_range(1..=b * u);
        let input = ComplexityInput { b, u, k, t, m };
        for alg in Algorithm::ALL {
            let got = count_multiplications(alg, &input).map_err(|e| e.to_string())?;
            let want = table1::counts(
                alg.name(),
                b as i128,
                u as i128,
                k as i128,
                t as i128,
                m as i128,
            );
            check(got == want, || {
                format!("{alg} at {input:?}: {got:?} vs loop {want:?}")
            })?;
            compared += 1;
        }
    }
    Ok(format!(
        "{compared} (algorithm, tuple) pairs equal to the loop evaluation"
    ))
}

fn speedup_curve() -> Outcome {
    let s = |t: u64| {
        speedup_vs_mrt(
            Algorithm::Sbp,
            &ComplexityInput {
                b: 128,
                u: 16,
                k: 16,
                t,
                m: 16,
            },
        )
        .unwrap()
    };
    let grid: Vec<u64> = (3..=9)
        .flat_map(|e| [1, 2, 5].map(|m| m * 10u64.pow(e)))
        .collect();
    for &t in &grid {
        check(s(t) > 2.0, || format!("speed-up {} at T = {t}", s(t)))?;
    }
    check(s(100_000) > 2.8, || {
        format!("speed-up {} at T = 1e5", s(100_000))
    })?;
    Ok(format!(
        "SBP speed-up {:.3} at T=1e3, {:.3} at T=1e5",
        s(1000),
        s(100_000)
    ))
}

fn collapse() -> Outcome {
    let mut r = rng(4);
    let mut worst: f64 = 0.0;
    for i in 0..50 {
        let b = 1 << r.random_range(1..=5);
        let u = r.random_range(1..=b.min(8));
        let kappa = r.random_range(0.01..2.0);
        let hbar = BeamspaceChannel::from_matrix(random_matrix(u, b, &mut r));
        let (reference, _) =
            normalize(&wf(hbar.matrix(), kappa).unwrap(), PowerConstraint::UNIT).unwrap();
        for build in [sbp, rs, one_shot_sbp, one_shot_rs] {
            let p = build(&hbar, kappa, b, PowerConstraint::UNIT).map_err(|e| e.to_string())?;
            let d = p.to_dense().relative_diff(&reference);
            worst = worst.max(d);
            check(d <= 1e-9, || {
                format!("instance {i}: relative difference {d:e}")
            })?;
        }
    }
    Ok(format!(
        "50 instances x 4 precoders, worst relative difference {worst:.1e}"
    ))
}

fn rotation() -> Outcome {
    let mut r = rng(5);
    let mut worst: f64 = 0.0;
    for i in 0..50 {
        let b = 1 << r.random_range(1..=7);
        let u = r.random_range(1..=8);
        let kappa = r.random_range(0.01..2.0);
        let h = random_matrix(u, b, &mut r);
        let hbar = to_beamspace(&h).map_err(|e| e.to_string())?;
        let lhs = product(&dft_matrix(b), &wf(hbar.matrix(), kappa).unwrap());
        let d = lhs.relative_diff(&wf(&h, kappa).unwrap());
        worst = worst.max(d);
        check(d <= 1e-9, || {
            format!("instance {i}: relative difference {d:e}")
        })?;
    }
    Ok(format!(
        "50 instances, worst relative difference {worst:.1e}"
    ))
}

fn non_increasing(obj: &[f64]) -> bool {
    obj.windows(2).all(|w| w[1] <= w[0] * (1.0 + 1e-12) + 1e-15)
}

fn omp_invariants() -> Outcome {
    let mut r = rng(6);
    for i in 0..200 {
        let b = 1usize << r.random_range(1..=6);
        let u = r.random_range(1..=8);
        let k = r.random_range(1..=b.min(16));
        let kappa = r.random_range(0.001..2.0);
        let hbar = BeamspaceChannel::from_matrix(random_matrix(u, b, &mut r));
        let ctx = |what: &str| format!("instance {i} (B={b}, U={u}, K={k}): {what}");
        for user in 0..u {
            let t = omp_column(&hbar, user, kappa, k).map_err(|e| e.to_string())?;
            let mut distinct = t.order.clone();
            distinct.sort_unstable();
            distinct.dedup();
            check(distinct.len() == k, || ctx("reselected a beam"))?;
            check(non_increasing(&t.objectives), || {
                ctx("column objective increased")
            })?;
        }
        let m = mmv_omp(&hbar, kappa, k).map_err(|e| e.to_string())?;
        check(non_increasing(&m.objectives), || {
            ctx("shared-support objective increased")
        })?;
        for build in [sbp, rs, one_shot_sbp, one_shot_rs] {
            let p = build(&hbar, kappa, k, PowerConstraint::UNIT).map_err(|e| e.to_string())?;
            check(p.nnz() == k * u, || ctx("wrong nonzero count"))?;
            for user in 0..u {
                let s = p.column_support(user);
                check(
                    s.len() == k && s.windows(2).all(|w| w[0] < w[1]) && s.iter().all(|&x| x < b),
                    || ctx("malformed support"),
                )?;
            }
        }
    }
    Ok("200 instances: exactly K distinct beams per column, non-increasing objectives".into())
}

fn random_sparse(r: &mut ChaCha8Rng) -> SparsePrecoder {
    let b = 1usize << r.random_range(1..=7);
    let u = r.random_range(1..=8);
    let k = r.random_range(1..=b);
    let pick = |r: &mut ChaCha8Rng| {
        let mut s = rand::seq::index::sample(r, b, k).into_vec();
        s.sort_unstable();
        s
    };
    let layout = if r.random_bool(0.5) {
        let supports = (0..u).map(|_| pick(r)).collect();
        let values = (0..u)
            .map(|_| (0..k).map(|_| complex_gaussian(r, 1.0)).collect())
            .collect();
        SparseLayout::ColumnSparse { supports, values }
    } else {
        let rows = pick(r);
        SparseLayout::RowStructured {
            rows,
            values: random_matrix(k, u, r),
        }
    };
    SparsePrecoder::from_unnormalized(b, layout, PowerConstraint::UNIT).unwrap()
}

fn two_stage() -> Outcome {
    let mut r = rng(7);
    let mut worst: f64 = 0.0;
    for i in 0..100 {
        let p = random_sparse(&mut r);
        let s: Vec<Complex64> = (0..p.u()).map(|_| complex_gaussian(&mut r, 1.0)).collect();
        let x = ComplexMatrix::from_vec(
            p.b(),
            1,
            apply_two_stage(&p, &s).map_err(|e| e.to_string())?,
        )
        .unwrap();
        let oracle = product(
            &product(&dft_matrix(p.b()), &p.to_dense()),
            &ComplexMatrix::from_vec(p.u(), 1, s).unwrap(),
        );
        let d = x.relative_diff(&oracle);
        worst = worst.max(d);
        check(d <= 1e-10, || {
            format!("precoder {i}: relative difference {d:e}")
        })?;
    }
    Ok(format!(
        "100 random sparse precoders, worst relative difference {worst:.1e}"
    ))
}

fn power_constraint() -> Outcome {
    let cfg = ChannelGenConfig::new(64, 8, true);
    let mut r = rng(8);
    let ch = generate_channel(&cfg, &mut r).map_err(|e| e.to_string())?;
    let hbar = to_beamspace(&ch.h).unwrap();
    let qam = Constellation::qam(64).unwrap();
    let plan = FftPlan::new(64).unwrap();
    let mut report = Vec::new();
    for kind in PrecoderKind::ALL {
        let p = Precoder::build(kind, &ch.h, &hbar, 0.05, 16, PowerConstraint::UNIT)
            .map_err(|e| e.to_string())?;
        let draws = 10_000;
        let mut energy = 0.0;
        for _ in 0..draws {
            let s: Vec<Complex64> = (0..8)
                .map(|_| qam.points()[r.random_range(0..64)])
                .collect();
            energy += p
                .apply(&s, &plan)
                .unwrap()
                .iter()
                .map(Complex64::norm_sqr)
                .sum::<f64>();
        }
        let mean = energy / draws as f64;
        check((mean - 1.0).abs() <= 0.03, || {
            format!("{kind}: E|x|^2 = {mean:.4}")
        })?;
        report.push(format!("{kind} {mean:.3}"));
    }
    Ok(format!("E|x|^2 over 1e4 draws: {}", report.join(", ")))
}

struct LosSweeps {
    wf: Vec<BerPoint>,
    sbp32: Vec<BerPoint>,
    sbp16: Vec<BerPoint>,
    mrt: Vec<BerPoint>,
}

fn los_sweeps() -> LosSweeps {
    let run = |precoder, k| {
        let cfg = SimConfig {
            channel: ChannelGenConfig::new(128, 16, true),
            precoder,
            k,
            snr_db: (0..=14).map(|i| -5.0 + 2.5 * i as f64).collect(),
            trials: 48,
            slots: 24,
            qam_order: 64,
            seed: 1,
        };
        run_ber_sweep(&cfg).expect("sweep runs")
    };
    LosSweeps {
        wf: run(PrecoderKind::Wf, 128),
        sbp32: run(PrecoderKind::Sbp, 32),
        sbp16: run(PrecoderKind::Sbp, 16),
        mrt: run(PrecoderKind::Mrt, 128),
    }
}

fn ber_ordering(s: &LosSweeps) -> Outcome {
    let top = |pts: &[BerPoint]| pts.last().unwrap().clone();
    let (wf, s32, s16, mrt) = (top(&s.wf), top(&s.sbp32), top(&s.sbp16), top(&s.mrt));
    let line = format!(
        "at {} dB over {} bits: WF {:.2e}, SBP K=32 {:.2e}, SBP K=16 {:.2e}, MRT {:.2e}",
        wf.snr_db, wf.bits_total, wf.ber, s32.ber, s16.ber, mrt.ber
    );
    check(wf.bits_total >= 100_000, || {
        format!("only {} bits per point", wf.bits_total)
    })?;
    check(
        wf.ber <= s32.ber && s32.ber <= s16.ber && s16.ber <= mrt.ber,
        || line.clone(),
    )?;
    Ok(line)
}

fn gap_at_two_percent(s: &LosSweeps) -> Outcome {
    let wf = snr_at_ber(&s.wf, 0.02).ok_or("WF never reaches 2% BER")?;
    let sbp = snr_at_ber(&s.sbp32, 0.02).ok_or("SBP K=32 never reaches 2% BER")?;
    let k16 =
        snr_at_ber(&s.sbp16, 0.02).map_or("never".to_string(), |x| format!("{:.2} dB", x - wf));
    let gap = sbp - wf;
    let line =
        format!("2% BER: WF {wf:.2} dB, SBP K=32 {sbp:.2} dB, gap {gap:.2} dB (K=16 gap {k16})");
    check(gap <= 2.0, || line.clone())?;
    Ok(line)
}

fn thread_determinism() -> Outcome {
    let dir = tempfile::tempdir().map_err(|e| e.to_string())?;
    std::fs::write(
        dir.path().join("exp.toml"),
        r#"
seed = 9
trials = 24
slots = 12
snr_db = [-5.0, 0.0, 5.0, 10.0, 15.0, 20.0, 25.0, 30.0]
precoders = ["WF", "MRT", "SBP", "RS", "1S-SBP", "1S-RS"]
k = [8, 16]

[channel]
b = 64
u = 8
"#,
    )
    .unwrap();
    let run = |threads: &str, out: &str| {
        let o = Command::new(env!("CARGO_BIN_EXE_beamspace"))
            .args(["ber", "exp.toml", "--threads", threads, "--out", out])
            .current_dir(dir.path())
            .output()
            .expect("binary runs");
        assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    };
    run("1", "one");
    run("4", "four");
    let files = |d: &str| -> Vec<String> {
        let mut v: Vec<String> = std::fs::read_dir(dir.path().join(d))
            .unwrap()
            .map(|e| e.unwrap().file_name().into_string().unwrap())
            .filter(|n| n.ends_with(".csv"))
            .collect();
        v.sort();
        v
    };
    let names = files("one");
    check(names == files("four") && names.len() == 10, || {
        format!("file sets differ: {names:?}")
    })?;
    let read = |d: &str, f: &str| std::fs::read(Path::new(dir.path()).join(d).join(f)).unwrap();
    for f in &names {
        check(read("one", f) == read("four", f), || {
            format!("{f} differs between 1 and 4 threads")
        })?;
    }
    Ok(format!(
        "{} CSV files byte-identical for --threads 1 and 4",
        names.len()
    ))
}

fn run_criterion(id: usize, name: &str, f: impl FnOnce() -> Outcome) -> bool {
    let start = Instant::now();
    let outcome = catch_unwind(AssertUnwindSafe(f)).unwrap_or_else(|p| {
        Err(p
            .downcast_ref::<String>()
            .cloned()
            .or_else(|| p.downcast_ref::<&str>().map(|s| s.to_string()))
            .unwrap_or_else(|| "panicked".into()))
    });
    let secs = start.elapsed().as_secs_f64();
    match &outcome {
        Ok(detail) => println!("criterion {id:>2} PASS  {name}: {detail} [{secs:.1}s]"),
        Err(detail) => println!("criterion {id:>2} FAIL  {name}: {detail} [{secs:.1}s]"),
    }
    outcome.is_ok()
}

fn main() {
    println!("running acceptance criteria");
    let mut ok = true;
    ok &= run_criterion(1, "asymptotic speed-up", gamma_values);
    ok &= run_criterion(2, "multiplication counts", table_counts);
    ok &= run_criterion(3, "speed-up versus block length", speedup_curve);
    ok &= run_criterion(4, "full-support collapse to WF", collapse);
    ok &= run_criterion(5, "beamspace rotation consistency", rotation);
    ok &= run_criterion(6, "OMP invariants", omp_invariants);
    ok &= run_criterion(7, "two-stage equivalence", two_stage);
    ok &= run_criterion(8, "transmit power", power_constraint);
    // both Monte-Carlo criteria share one set of sweeps, run inside criterion 9
    let sweeps: OnceLock<LosSweeps> = OnceLock::new();
    let with_sweeps = |f: fn(&LosSweeps) -> Outcome| f(sweeps.get_or_init(los_sweeps));
    ok &= run_criterion(9, "BER ordering on LoS channels", || {
        with_sweeps(ber_ordering)
    });
    ok &= run_criterion(10, "SBP gap to WF at 2% BER", || {
        with_sweeps(gap_at_two_percent)
    });
    ok &= run_criterion(11, "thread-count determinism", thread_determinism);
    if ok {
        println!("all acceptance criteria passed");
    } else {
        println!("some acceptance criteria failed");
        std::process::exit(1);
    }
}
