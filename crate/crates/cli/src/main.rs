use env_logger::Env;

fn main() {
    env_logger::Builder::from_env(Env::new().filter("PADIC_DYNAMICS_LOG")).init();
    let code = padic_dynamics_cli::run(std::env::args_os(), &mut std::io::stdout(), &mut std::io::stderr());
    std::process::exit(code);
}
