use clap::Parser;

fn main() {
    env_logger::Builder::from_env(env_logger::Env::new().filter_or("MFRISK_LOG", "warn")).init();
    let cli = mfrisk::Cli::parse();
    std::process::exit(mfrisk::run(&cli));
}
