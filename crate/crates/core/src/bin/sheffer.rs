fn main() {
    std::process::exit(sheffer::cli::main_with(std::env::args_os()));
}
