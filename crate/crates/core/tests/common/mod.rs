#![allow(dead_code)]

use std::path::PathBuf;
use std::sync::Mutex;

use bottomk::report::{Fixture, FixtureStore};
use serde_json::Value;

pub fn fixture_path() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("fixtures/oracles.json")
}

/// Compares a freshly computed oracle value with its frozen copy.
///
/// `BOTTOMK_FIXTURES=write` stores missing keys; `overwrite` replaces
/// differing ones. Otherwise a missing or differing key fails.
static LOCK: Mutex<()> = Mutex::new(());

pub fn frozen(key: &str, oracle: Value, provenance: &str, same: impl Fn(&Value, &Value) -> bool) -> Value {
    let mode = std::env::var("BOTTOMK_FIXTURES").unwrap_or_default();
    let _guard = LOCK.lock().unwrap_or_else(|e| e.into_inner());
    let mut store = FixtureStore::open(fixture_path(), mode == "overwrite").expect("fixture file");
    match store.get(key) {
        Some(f) if same(&f.value, &oracle) => f.value.clone(),
        existing if mode == "write" || mode == "overwrite" => {
            if let Some(f) = existing.filter(|_| mode != "overwrite") {
                panic!("fixture {key} differs from its oracle: {} vs {oracle}", f.value);
            }
            store.insert(key, Fixture { value: oracle.clone(), provenance: provenance.into() }).unwrap();
            store.save().unwrap();
            oracle
        }
        Some(f) => panic!("fixture {key} differs from its oracle: {} vs {oracle}", f.value),
        None => panic!("fixture {key} missing; run with BOTTOMK_FIXTURES=write"),
    }
}

pub fn exact(a: &Value, b: &Value) -> bool {
    a == b
}

pub fn close(tol: f64) -> impl Fn(&Value, &Value) -> bool {
    move |a, b| match (a.as_f64(), b.as_f64()) {
        (Some(x), Some(y)) => (x - y).abs() <= tol * x.abs().max(1.0),
        _ => false,
    }
}

/// Reads a frozen value without an oracle.
pub fn stored(key: &str) -> Value {
    let store = FixtureStore::open(fixture_path(), false).expect("fixture file");
    store.get(key).unwrap_or_else(|| panic!("fixture {key} missing")).value.clone()
}
