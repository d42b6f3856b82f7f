use std::path::PathBuf;

use sharpineq::cli::{run, OUT_DIR_ENV};

fn main() {
    let out_dir = std::env::var_os(OUT_DIR_ENV).filter(|v| !v.is_empty()).map(PathBuf::from);
    let code = run(std::env::args_os(), out_dir.as_deref(), &mut std::io::stdout().lock(), &mut std::io::stderr().lock());
    std::process::exit(code);
}
