fn main() {
    std::process::exit(seedrl::bench::cli_main(std::env::args_os()));
}
