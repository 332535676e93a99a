use std::io::Write;

use f1kit::cli::{run_args, Cache};

fn main() {
    let out = run_args(std::env::args_os(), &Cache::from_env());
    std::io::stdout()
        .write_all(&out.stdout)
        .and_then(|_| std::io::stdout().flush())
        .expect("stdout is writable");
    eprint!("{}", out.stderr);
    std::process::exit(out.status);
}
