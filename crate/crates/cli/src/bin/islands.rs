fn main() {
    islands_cli::main_for(islands_cli::Tool::Islands)
}
