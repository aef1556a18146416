//! Compiles and runs a small C program against the generated header and the
//! static library.

use std::path::{Path, PathBuf};
use std::process::Command;

const PROGRAM: &str = r#"
#include <stdio.h>
#include "greendecay.h"

int main(void) {
    double values[4] = {2.0, 0.0, 1.0, 2.0};
    GdMatrix *m = NULL;
    GdGenerators *g = NULL;
    double v = 0.0, big_m = 0.0, gamma = 0.0;
    if (gd_matrix_new(2, 1, 0, values, &m) != GdStatus_Ok) return 1;
    if (gd_inverse_generators(m, &g) != GdStatus_Ok) return 2;
    if (gd_generators_entry(g, 2, 1, &v) != GdStatus_Ok || v != -0.25) return 3;
    if (gd_generators_entry(g, 1, 2, &v) != GdStatus_NotRepresented) return 4;
    if (gd_lu_bound(m, &big_m, &gamma) != GdStatus_Ok) return 5;
    printf("%.17g %.17g\n", big_m, gamma);
    gd_generators_free(g);
    gd_matrix_free(m);
    return 0;
}
"#;

/// `target/<profile>`, two levels above this test executable.
fn artifact_dir() -> PathBuf {
    let exe = std::env::current_exe().unwrap();
    exe.parent().unwrap().parent().unwrap().to_path_buf()
}

#[test]
fn c_program_links_and_runs() {
    let include = Path::new(env!("CARGO_MANIFEST_DIR")).join("include");
    assert!(include.join("greendecay.h").exists());
    // `cargo test` only builds the rlib; the static library needs its own build
    let status = Command::new(env!("CARGO"))
        .args(["build", "--lib", "-p", "greendecay-ffi"])
        .status()
        .unwrap();
    assert!(status.success());
    let lib = artifact_dir().join("libgreendecay_ffi.a");
    assert!(lib.exists(), "missing {}", lib.display());

    let dir = tempfile::tempdir().unwrap();
    let src = dir.path().join("smoke.c");
    let exe = dir.path().join("smoke");
    std::fs::write(&src, PROGRAM).unwrap();
    let status = Command::new("cc")
        .arg("-std=c99")
        .arg("-Wall")
        .arg("-Werror")
        .arg("-I")
        .arg(&include)
        .arg(&src)
        .arg(&lib)
        .args(["-lpthread", "-ldl", "-lm", "-o"])
        .arg(&exe)
        .status()
        .expect("a C compiler is available");
    assert!(status.success());

    let out = Command::new(&exe).output().unwrap();
    assert_eq!(out.status.code(), Some(0));
    // A = [[2,0],[1,2]]: mu = 0.5, M = 1.25 / (0.5 * 0.75 * 2), gamma = 0.5
    let text = String::from_utf8(out.stdout).unwrap();
    let nums: Vec<f64> = text.split_whitespace().map(|s| s.parse().unwrap()).collect();
    assert_eq!(nums, vec![1.25 / 0.75, 0.5]);
}
