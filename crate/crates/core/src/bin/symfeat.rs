fn main() {
    std::process::exit(symfeat::cli::main());
}
