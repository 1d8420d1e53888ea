fn main() {
    std::process::exit(gevrey_cli::run(std::env::args_os()));
}
