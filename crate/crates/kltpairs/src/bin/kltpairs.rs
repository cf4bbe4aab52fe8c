fn main() {
    std::process::exit(kltpairs::cli::run());
}
