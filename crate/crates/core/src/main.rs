use clap::Parser;

fn main() {
    let cli = hypermoments::cli::Cli::parse();
    std::process::exit(hypermoments::cli::run(cli));
}
