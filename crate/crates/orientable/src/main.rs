fn main() {
    std::process::exit(orientable::cli::run_from_env());
}
