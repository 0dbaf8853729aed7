#![allow(dead_code)]

pub mod formulas;

use std::panic::{self, AssertUnwindSafe};
use std::path::PathBuf;
use std::time::{Duration, Instant};

use fairstream::schema::Record;
use fairstream::{Attribute, Instance, StreamSchema};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub type Check = (&'static str, fn());

pub fn record(pairs: &[(&str, &str)]) -> Record {
    pairs.iter().map(|(k, v)| (k.to_string(), v.to_string())).collect()
}

/// color (nominal), sex (sensitive, protected "F"), x (continuous), y (label, positive "1").
pub fn toy_schema() -> StreamSchema {
    StreamSchema::new(
        vec![Attribute::nominal("color"), Attribute::nominal("sex"), Attribute::continuous("x"), Attribute::nominal("y")],
        "y",
        "1",
        "sex",
        "F",
    )
    .unwrap()
}

pub fn toy(color: &str, sex: &str, x: f64, y: &str) -> Instance {
    toy_schema().instance(&record(&[("color", color), ("sex", sex), ("x", &x.to_string()), ("y", y)])).unwrap()
}

/// Deterministic mixed-type stream with group-dependent label rates and a
/// mid-stream prevalence change, so every pipeline component gets exercised.
pub fn synthetic_stream(n: usize, seed: u64) -> (StreamSchema, Vec<Instance>) {
    let schema = toy_schema();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let colors = ["red", "green", "blue", "grey"];
    let instances = (0..n)
        .map(|i| {
            let protected = rng.gen_bool(0.4);
            let late = i > n / 2;
            let base = if protected { 0.15 } else { 0.45 };
            let p = if late { base * 0.5 } else { base };
            let y = rng.gen_bool(p);
            let color = colors[(rng.gen_range(0..3) + y as usize) % 4];
            let x = if y { 3.0 } else { 0.0 } + rng.gen_range(-2.0..2.0);
            let r = record(&[
                ("color", color),
                ("sex", if protected { "F" } else { "M" }),
                ("x", &x.to_string()),
                ("y", if y { "1" } else { "0" }),
            ]);
            schema.instance(&r).unwrap()
        })
        .collect();
    (schema, instances)
}

pub fn close(a: f64, b: f64, tol: f64) -> bool {
    (a - b).abs() <= tol
}

pub fn rel_close(a: f64, b: f64, rel: f64) -> bool {
    (a - b).abs() <= rel * b.abs().max(1.0)
}

pub fn workspace_root() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../..")
}

pub fn manifest(name: &str) -> PathBuf {
    workspace_root().join("data/manifests").join(format!("{name}.toml"))
}

/// Outcome of running a list of checks.
pub struct SuiteOutcome {
    pub failures: Vec<(&'static str, String)>,
    pub elapsed: Duration,
    pub total: usize,
}

/// Run every check, catching panics so one failure does not hide the rest.
pub fn run_checks(checks: &[Check], verbose: bool) -> SuiteOutcome {
    let hook = panic::take_hook();
    panic::set_hook(Box::new(|_| {}));
    let start = Instant::now();
    let mut failures = Vec::new();
    for (name, check) in checks {
        let result = panic::catch_unwind(AssertUnwindSafe(check));
        match result {
            Ok(()) => {
                if verbose {
                    println!("  ok    {name}");
                }
            }
            Err(payload) => {
                let msg = payload
                    .downcast_ref::<String>()
                    .cloned()
                    .or_else(|| payload.downcast_ref::<&str>().map(|s| s.to_string()))
                    .unwrap_or_else(|| "panic".to_string());
                if verbose {
                    println!("  FAIL  {name}: {msg}");
                }
                failures.push((*name, msg));
            }
        }
    }
    let elapsed = start.elapsed();
    panic::set_hook(hook);
    SuiteOutcome { failures, elapsed, total: checks.len() }
}
