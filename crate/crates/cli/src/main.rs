fn main() {
    std::process::exit(sphconvex_cli::main_entry());
}
