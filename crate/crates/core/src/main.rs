use clap::Parser;

fn main() {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let args = twapert::cli::Args::parse();
    match twapert::cli::run(&args) {
        Ok(art) => println!("wrote {} files to {}", art.files.len(), art.dir.display()),
        Err(e) => {
            eprintln!("twapert: {e}");
            std::process::exit(e.exit_code());
        }
    }
}
