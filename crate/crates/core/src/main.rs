fn main() {
    std::process::exit(kuramoto_er::cli::main());
}
