fn main() {
    std::process::exit(ddu_planner::cli::main_with(std::env::args_os()));
}
