fn main() {
    std::process::exit(moto::cli::run_from_env());
}
