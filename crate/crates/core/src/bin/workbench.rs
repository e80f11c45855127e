fn main() {
    let (code, text) = gain_workbench::cli::run(std::env::args_os());
    print!("{text}");
    std::process::exit(code);
}
