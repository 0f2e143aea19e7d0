fn main() {
    std::process::exit(pt_lattice_cli::main_entry());
}
