fn main() {
    std::process::exit(aoi_link::cli::main());
}
