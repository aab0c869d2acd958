fn main() {
    std::process::exit(uniqcert::cli::run_from_env());
}
