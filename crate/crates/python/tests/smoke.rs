//! Runs `python/smoke_test.py` against the extension built by this cargo invocation.

use std::path::{Path, PathBuf};
use std::process::Command;

fn built_extension() -> Option<PathBuf> {
    // target/<profile>/deps/smoke-<hash> -> target/<profile>/libahlab.so
    let exe = std::env::current_exe().ok()?;
    let profile_dir = exe.parent()?.parent()?;
    let name = if cfg!(target_os = "macos") {
        "libahlab.dylib"
    } else {
        "libahlab.so"
    };
    let p = profile_dir.join(name);
    p.exists().then_some(p)
}

#[test]
fn python_smoke_test() {
    if Command::new("python3").arg("--version").output().is_err() {
        eprintln!("python3 not found; skipping");
        return;
    }
    let Some(lib) = built_extension() else {
        eprintln!("extension module not built; skipping");
        return;
    };
    let dir = tempfile::tempdir().unwrap();
    std::fs::copy(&lib, dir.path().join("ahlab.so")).unwrap();
    let script = Path::new(env!("CARGO_MANIFEST_DIR")).join("../../python/smoke_test.py");
    let out = Command::new("python3")
        .arg(&script)
        .env("PYTHONPATH", dir.path())
        .env("PYTHONNOUSERSITE", "1")
        .output()
        .unwrap();
    let stdout = String::from_utf8_lossy(&out.stdout);
    assert!(
        out.status.success(),
        "smoke test failed\nstdout: {stdout}\nstderr: {}",
        String::from_utf8_lossy(&out.stderr)
    );
    assert!(stdout.contains("python smoke test: ok"));
}
