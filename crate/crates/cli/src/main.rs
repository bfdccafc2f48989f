fn main() {
    std::process::exit(cdwlab::run(std::env::args_os()));
}
