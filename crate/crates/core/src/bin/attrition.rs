fn main() {
    std::process::exit(attrition::cli::run(std::env::args_os()));
}
