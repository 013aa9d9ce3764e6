// Links the reference BLAS and LAPACK statically. The distribution OpenBLAS
// picks kernels by CPU at load time, and on some AVX-512 parts its choice
// returns wrong eigenvectors for matrices past a couple hundred rows.
use std::env;
use std::path::Path;

const DEFAULT_DIRS: &[&str] = &[
    "/usr/lib/x86_64-linux-gnu/lapack",
    "/usr/lib/x86_64-linux-gnu/blas",
    "/usr/lib/aarch64-linux-gnu/lapack",
    "/usr/lib/aarch64-linux-gnu/blas",
    "/usr/lib64",
    "/usr/lib",
];

fn main() {
    println!("cargo:rerun-if-env-changed=DPSBM_LAPACK_DIR");
    println!("cargo:rerun-if-env-changed=DPSBM_LAPACK_LIBS");
    // DPSBM_LAPACK_LIBS="openblas" (comma separated) links those dynamic
    // libraries instead of the static reference pair.
    if let Ok(libs) = env::var("DPSBM_LAPACK_LIBS") {
        if let Ok(dir) = env::var("DPSBM_LAPACK_DIR") {
            println!("cargo:rustc-link-search=native={dir}");
        }
        for lib in libs.split(',').filter(|s| !s.is_empty()) {
            println!("cargo:rustc-link-lib=dylib={lib}");
        }
        return;
    }
    let mut dirs: Vec<String> = env::var("DPSBM_LAPACK_DIR").into_iter().collect();
    dirs.extend(DEFAULT_DIRS.iter().map(|s| s.to_string()));
    let find = |name: &str| dirs.iter().find(|d| Path::new(d).join(name).exists()).cloned();
    let lapack = find("liblapack.a").expect("liblapack.a not found; set DPSBM_LAPACK_DIR");
    let blas = find("libblas.a").expect("libblas.a not found; set DPSBM_LAPACK_DIR");
    println!("cargo:rustc-link-search=native={lapack}");
    println!("cargo:rustc-link-search=native={blas}");
    println!("cargo:rustc-link-lib=static=lapack");
    println!("cargo:rustc-link-lib=static=blas");
    println!("cargo:rustc-link-lib=dylib=gfortran");
}
