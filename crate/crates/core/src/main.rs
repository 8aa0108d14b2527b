use std::io::IsTerminal;

fn main() {
    let color = std::io::stdout().is_terminal();
    let code = exgrad::cli::run_with_color(
        std::env::args_os(),
        &mut std::io::stdout().lock(),
        &mut std::io::stderr().lock(),
        color,
    );
    std::process::exit(code);
}
