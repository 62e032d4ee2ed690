//! Compiles and runs a small C program against the generated header and the
//! static library. Skipped when no C compiler is on the PATH.

use std::path::PathBuf;
use std::process::Command;

const PROGRAM: &str = r#"
#include <stdio.h>
#include "prar.h"

int main(void) {
    PrarGraph *g = NULL;
    if (prar_graph_generate("path:2", &g) != PRAR_STATUS_OK) return 1;
    PrarSampler *s = NULL;
    if (prar_sampler_new(g, "hardcore:lambda=1", NULL, 7, 0, &s) != PRAR_STATUS_OK) return 2;
    unsigned char x[2];
    for (int i = 0; i < 1000; i++) {
        if (prar_sampler_sample_bits(s, NULL, 0, x, 2) != PRAR_STATUS_OK) return 3;
        if (x[0] && x[1]) return 4;
    }
    PrarStats st;
    prar_sampler_last_stats(s, &st);
    if (st.attempts < 1) return 5;
    if (prar_graph_generate("cycle:1", &g) != PRAR_STATUS_INVALID_GRAPH) return 6;
    if (prar_last_error() == NULL) return 7;
    prar_sampler_free(s);
    prar_graph_free(g);
    printf("ok\n");
    return 0;
}
"#;

fn compiler() -> Option<String> {
    ["cc", "gcc", "clang"]
        .into_iter()
        .find(|c| Command::new(c).arg("--version").output().is_ok())
        .map(String::from)
}

#[test]
fn c_program_links_and_runs() {
    let Some(cc) = compiler() else {
        eprintln!("no C compiler found; skipping");
        return;
    };
    let crate_dir = PathBuf::from(env!("CARGO_MANIFEST_DIR"));
    // target/<profile>/deps/<test binary> -> target/<profile>
    let exe = std::env::current_exe().unwrap();
    let profile_dir = exe.parent().unwrap().parent().unwrap();
    let lib = profile_dir.join("libprar_ffi.a");
    if !lib.exists() {
        eprintln!("{} not built; skipping", lib.display());
        return;
    }
    let dir = tempfile::tempdir().unwrap();
    let src = dir.path().join("main.c");
    let bin = dir.path().join("main");
    std::fs::write(&src, PROGRAM).unwrap();
    let status = Command::new(&cc)
        .arg("-std=c99")
        .arg("-Wall")
        .arg("-Werror")
        .arg("-I")
        .arg(crate_dir.join("include"))
        .arg(&src)
        .arg(&lib)
        .args(["-lpthread", "-ldl", "-lm", "-o"])
        .arg(&bin)
        .status()
        .unwrap();
    assert!(status.success(), "C build failed");
    let out = Command::new(&bin).output().unwrap();
    assert!(out.status.success(), "C program exited with {:?}", out.status.code());
    assert_eq!(String::from_utf8_lossy(&out.stdout).trim(), "ok");
}
