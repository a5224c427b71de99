fn main() {
    std::process::exit(panelforge::cli::main());
}
