use std::io::Write;
use std::process::ExitCode;

fn main() -> ExitCode {
    let (report, code) = orbikit_cli::run_command(std::env::args_os());
    let out = report.render();
    let ok = if report.json || code == 0 {
        std::io::stdout().write_all(out.as_bytes())
    } else {
        std::io::stderr().write_all(out.as_bytes())
    };
    if ok.is_err() {
        return ExitCode::from(2);
    }
    ExitCode::from(code as u8)
}
