//! Acceptance suite. Runs every criterion, prints one PASS/FAIL line each,
//! and exits non-zero if any criterion fails.

mod common;

use std::fs;
use std::panic::{self, AssertUnwindSafe};
use std::path::Path;
use std::process::Command;
use std::sync::{Arc, Mutex};
use std::time::{Duration, Instant};

use common::*;
use insitu_fft::bridge::{
    parse_config_in, run_demo, AnalysisAdaptor, DemoConfig, Pipeline, StageConfig, StageKind,
    StageOutput, StepContext, DEMO_IMAGES,
};
use insitu_fft::datagen::GenConfig;
use insitu_fft::distributed::distributed_fft_2d;
use insitu_fft::{Complex64, Direction, Error, Mesh64, Plan64};

const ORACLE_REL_TOL: f64 = 1e-9;
const ORACLE_BUDGET: Duration = Duration::from_secs(10);
const ROUND_TRIP_REL_TOL: f64 = 1e-10;
const ROUND_TRIP_BUDGET: Duration = Duration::from_secs(1);
const PARSEVAL_REL_TOL: f64 = 1e-10;
const RANK_ABS_TOL: f64 = 1e-12;
const DEMO_BUDGET: Duration = Duration::from_secs(2);
const DEMO_KEPT: usize = 25;
const DEMO_GRID: usize = 200;

type Outcome = Result<String, String>;
type Criterion = (&'static str, &'static str, fn() -> Outcome);

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn ac1_oracle_equivalence() -> Outcome {
    let started = Instant::now();
    let mut r = rng(101);
    let mut worst = 0.0f64;
    for &n0 in &ORACLE_SIZES {
        for &n1 in &ORACLE_SIZES {
            let plan = Plan64::new(n0, n1, Direction::Forward).map_err(|e| e.to_string())?;
            for _ in 0..5 {
                let x = random_complex(&mut r, n0 * n1);
                let mut got = x.clone();
                plan.execute(&mut got).map_err(|e| e.to_string())?;
                let err = rel_sup(&got, &naive_2d(&x, n0, n1, Direction::Forward), &x);
                worst = worst.max(err);
                ensure(err <= ORACLE_REL_TOL, || {
                    format!("{n0}x{n1}: rel err {err:e}")
                })?;
            }
        }
    }
    let elapsed = started.elapsed();
    ensure(elapsed < ORACLE_BUDGET, || format!("took {elapsed:?}"))?;
    Ok(format!(
        "worst rel err {worst:.2e} over 361 sizes x 5 inputs in {elapsed:.2?}"
    ))
}

fn ac2_round_trip() -> Outcome {
    let n = DEMO_GRID;
    let x: Vec<Complex64> = random_real(&mut rng(202), n * n)
        .into_iter()
        .map(|v| Complex64::new(v, 0.0))
        .collect();
    let started = Instant::now();
    let mut data = x.clone();
    Plan64::new(n, n, Direction::Forward)
        .unwrap()
        .execute(&mut data)
        .map_err(|e| e.to_string())?;
    Plan64::new(n, n, Direction::Backward)
        .unwrap()
        .execute(&mut data)
        .map_err(|e| e.to_string())?;
    let scale = 1.0 / (n * n) as f64;
    data.iter_mut().for_each(|z| *z = z.scale(scale));
    let elapsed = started.elapsed();
    let max_in = x.iter().map(|z| z.norm()).fold(0.0, f64::max);
    let err = sup_diff(&data, &x) / max_in;
    ensure(err <= ROUND_TRIP_REL_TOL, || format!("rel err {err:e}"))?;
    ensure(elapsed < ROUND_TRIP_BUDGET, || format!("took {elapsed:?}"))?;
    Ok(format!("200x200 rel err {err:.2e} in {elapsed:.2?}"))
}

fn ac3_parseval() -> Outcome {
    use rand::Rng;
    let mut r = rng(303);
    let mut worst = 0.0f64;
    for _ in 0..50 {
        let (ny0, ny1) = (r.gen_range(1..=64), r.gen_range(1..=64));
        let x = random_complex(&mut r, ny0 * ny1);
        let mut spec = x.clone();
        Plan64::new(ny0, ny1, Direction::Forward)
            .unwrap()
            .execute(&mut spec)
            .map_err(|e| e.to_string())?;
        let lhs: f64 = spec.iter().map(|z| z.norm_sqr()).sum();
        let rhs = (ny0 * ny1) as f64 * x.iter().map(|z| z.norm_sqr()).sum::<f64>();
        let err = (lhs - rhs).abs() / rhs;
        worst = worst.max(err);
        ensure(err <= PARSEVAL_REL_TOL, || {
            format!("{ny0}x{ny1}: rel err {err:e}")
        })?;
    }
    Ok(format!("50 fields, worst rel err {worst:.2e}"))
}

fn ac4_rank_invariance() -> Outcome {
    let mut r = rng(404);
    let mut cases = 0;
    let mut zero_row_cases = 0;
    let mut check = |ny0: usize, ny1: usize, ranks: &[usize]| -> Result<(), String> {
        let x = random_complex(&mut r, ny0 * ny1);
        let base =
            distributed_fft_2d(&x, ny0, ny1, Direction::Forward, 1).map_err(|e| e.to_string())?;
        let mut serial = x.clone();
        Plan64::new(ny0, ny1, Direction::Forward)
            .unwrap()
            .execute(&mut serial)
            .unwrap();
        ensure(sup_diff(&base, &serial) <= RANK_ABS_TOL, || {
            format!("{ny0}x{ny1}: ranks=1 vs serial")
        })?;
        for &w in ranks {
            let got = distributed_fft_2d(&x, ny0, ny1, Direction::Forward, w)
                .map_err(|e| e.to_string())?;
            let err = sup_diff(&got, &base);
            ensure(err <= RANK_ABS_TOL, || {
                format!("{ny0}x{ny1} ranks={w}: abs err {err:e}")
            })?;
            cases += 1;
            if w > ny0 {
                zero_row_cases += 1;
            }
        }
        Ok(())
    };
    for ny0 in 1..=12 {
        for ny1 in 1..=12 {
            check(ny0, ny1, &[1, 2, 3, 4, 7])?;
        }
    }
    check(DEMO_GRID, DEMO_GRID, &[1, 4])?;
    ensure(zero_row_cases > 0, || {
        "no zero-row slab case exercised".into()
    })?;
    Ok(format!(
        "{cases} decompositions agree, {zero_row_cases} with zero-row slabs"
    ))
}

fn ac5_demo_reproduction() -> Outcome {
    let dir = tempfile::tempdir().map_err(|e| e.to_string())?;
    let started = Instant::now();
    let out = run_demo(&DemoConfig::default(), dir.path()).map_err(|e| e.to_string())?;
    let elapsed = started.elapsed();
    let noisy = out.rmse_noisy().map_err(|e| e.to_string())?;
    let denoised = out.rmse_denoised().map_err(|e| e.to_string())?;
    let kept = out.surviving_coefficients().map_err(|e| e.to_string())?;
    ensure(denoised < noisy, || {
        format!("rmse denoised {denoised} >= noisy {noisy}")
    })?;
    ensure(kept == DEMO_KEPT, || {
        format!("{kept} coefficients survived, expected {DEMO_KEPT}")
    })?;
    ensure(elapsed < DEMO_BUDGET, || format!("took {elapsed:?}"))?;
    Ok(format!(
        "rmse noisy {noisy:.3} -> denoised {denoised:.3}, {kept} coefficients kept, {elapsed:.2?}"
    ))
}

fn ac6_config_fidelity() -> Outcome {
    let fft_xml = r#"<sensei>
  <analysis type="fft" mesh="mesh" array="dataArray" direction="FFTW_FORWARD"  python_xml="python_spectral_config.xml"/>
</sensei>"#;
    let dir = tempfile::tempdir().map_err(|e| e.to_string())?;
    fs::write(
        dir.path().join("python_spectral_config.xml"),
        r#"<sensei><analysis type="scale" mesh="mesh" array="dataArray" factor="1"/></sensei>"#,
    )
    .map_err(|e| e.to_string())?;
    let spec = parse_config_in(fft_xml, dir.path()).map_err(|e| e.to_string())?;
    match spec.stages.first() {
        Some(StageConfig::Fft(f)) => {
            ensure(f.direction == Direction::Forward, || {
                "direction not Forward".into()
            })?;
            ensure(f.mesh_name == "mesh" && f.array_name == "dataArray", || {
                "wrong names".into()
            })?;
            ensure(
                f.downstream_config.as_deref() == Some(Path::new("python_spectral_config.xml")),
                || format!("downstream {:?}", f.downstream_config),
            )?;
        }
        other => return Err(format!("first stage {other:?}")),
    }
    ensure(
        spec.stages.first().map(StageConfig::kind) == Some(StageKind::Fft),
        || "kind".into(),
    )?;

    let attrs = [
        ("type", "fft"),
        ("mesh", "mesh"),
        ("array", "dataArray"),
        ("direction", "FFTW_FORWARD"),
    ];
    for drop in 0..attrs.len() {
        let rest: String = attrs
            .iter()
            .enumerate()
            .filter(|(i, _)| *i != drop)
            .map(|(_, (k, v))| format!(" {k}=\"{v}\""))
            .collect();
        let xml = format!("<sensei><analysis{rest}/></sensei>");
        match parse_config_in(&xml, dir.path()) {
            Err(Error::Config(msg)) if msg.contains(&format!("\"{}\"", attrs[drop].0)) => {}
            other => return Err(format!("dropping {}: {other:?}", attrs[drop].0)),
        }
    }
    Ok("fft config accepted; each dropped attribute named in its config error".into())
}

struct Recorder(Arc<Mutex<Vec<&'static str>>>);

impl AnalysisAdaptor for Recorder {
    fn kind(&self) -> &str {
        "recorder"
    }
    fn initialize(&mut self) -> insitu_fft::Result<()> {
        self.0.lock().unwrap().push("Initialize");
        Ok(())
    }
    fn execute(&mut self, mesh: Mesh64, _ctx: &StepContext) -> insitu_fft::Result<StageOutput> {
        self.0.lock().unwrap().push("Execute");
        Ok(StageOutput::mesh(mesh))
    }
    fn finalize(&mut self) -> insitu_fft::Result<()> {
        self.0.lock().unwrap().push("Finalize");
        Ok(())
    }
}

fn ac7_lifecycle() -> Outcome {
    let dir = tempfile::tempdir().map_err(|e| e.to_string())?;
    let log = Arc::new(Mutex::new(Vec::new()));
    let mut pipeline = Pipeline::new(
        GenConfig::default().with_dims(16, 16),
        vec![Box::new(Recorder(log.clone()))],
    );
    pipeline.run(3, dir.path()).map_err(|e| e.to_string())?;
    let calls = log.lock().unwrap().clone();
    let expected = ["Initialize", "Execute", "Execute", "Execute", "Finalize"];
    ensure(calls == expected, || format!("observed {calls:?}"))?;
    Ok(calls.join(", "))
}

fn demo_cli(out: &Path, ranks: &str) -> Result<(), String> {
    let o = Command::new(env!("CARGO_BIN_EXE_insitu-fft"))
        .args([
            "demo", "--grid", "200x200", "--seed", "42", "--keep", "0.0075", "--ranks", ranks,
            "--out",
        ])
        .arg(out)
        .output()
        .map_err(|e| e.to_string())?;
    ensure(o.status.success(), || {
        String::from_utf8_lossy(&o.stderr).into_owned()
    })
}

fn ac8_determinism() -> Outcome {
    let dirs: Vec<_> = (0..3).map(|_| tempfile::tempdir().unwrap()).collect();
    demo_cli(dirs[0].path(), "1")?;
    demo_cli(dirs[1].path(), "1")?;
    demo_cli(dirs[2].path(), "4")?;
    for name in DEMO_IMAGES {
        let a = fs::read(dirs[0].path().join(name)).map_err(|e| e.to_string())?;
        let b = fs::read(dirs[1].path().join(name)).map_err(|e| e.to_string())?;
        let c = fs::read(dirs[2].path().join(name)).map_err(|e| e.to_string())?;
        ensure(a == b, || format!("{name} differs between identical runs"))?;
        ensure(a == c, || format!("{name} differs between ranks 1 and 4"))?;
    }
    Ok("repeat runs and ranks 1/4 bitwise-identical".into())
}

fn ac9_image_format() -> Outcome {
    let dir = tempfile::tempdir().map_err(|e| e.to_string())?;
    demo_cli(dir.path(), "1")?;
    let header = b"P5\n200 200\n255\n";
    for name in DEMO_IMAGES {
        let bytes = fs::read(dir.path().join(name)).map_err(|e| e.to_string())?;
        ensure(bytes.starts_with(header), || format!("{name}: bad header"))?;
        let payload = bytes.len() - header.len();
        ensure(payload == 40_000, || {
            format!("{name}: payload {payload} bytes")
        })?;
    }
    Ok("4 images, header P5 200 200 255, 40000-byte payloads".into())
}

fn main() {
    let criteria: [Criterion; 9] = [
        ("AC1", "oracle equivalence", ac1_oracle_equivalence),
        ("AC2", "round trip at 200x200", ac2_round_trip),
        ("AC3", "Parseval", ac3_parseval),
        ("AC4", "rank invariance", ac4_rank_invariance),
        ("AC5", "demo reproduction", ac5_demo_reproduction),
        ("AC6", "config fidelity", ac6_config_fidelity),
        ("AC7", "lifecycle", ac7_lifecycle),
        ("AC8", "determinism", ac8_determinism),
        ("AC9", "image format", ac9_image_format),
    ];
    panic::set_hook(Box::new(|_| {}));
    let mut failed = 0;
    for (id, name, check) in criteria {
        let result =
            panic::catch_unwind(AssertUnwindSafe(check)).unwrap_or_else(|_| Err("panicked".into()));
        match result {
            Ok(detail) => println!("[PASS] {id} {name}: {detail}"),
            Err(why) => {
                failed += 1;
                println!("[FAIL] {id} {name}: {why}");
            }
        }
    }
    println!(
        "acceptance: {} passed, {failed} failed",
        criteria.len() - failed
    );
    if failed > 0 {
        std::process::exit(1);
    }
}
