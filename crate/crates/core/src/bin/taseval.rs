fn main() {
    std::process::exit(taseval::cli::main());
}
