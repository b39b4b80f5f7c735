use std::io::Write;

fn main() {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("info"))
        .target(env_logger::Target::Stderr)
        .init();
    let stdout = std::io::stdout();
    let mut lock = stdout.lock();
    let code = cusplab::cli::execute(std::env::args_os(), &mut lock);
    let _ = lock.flush();
    std::process::exit(code);
}
