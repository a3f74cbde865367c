fn main() {
    std::process::exit(impwalk::cli::run(std::env::args_os()));
}
