fn main() {
    std::process::exit(hrw_tool::app::main_with_args(std::env::args_os()));
}
