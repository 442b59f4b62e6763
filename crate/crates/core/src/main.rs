fn main() {
    std::process::exit(fracdarboux::cli::main_entry());
}
