fn main() {
    std::process::exit(growthlift::cli::main());
}
