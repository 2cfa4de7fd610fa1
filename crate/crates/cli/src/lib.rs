//! Command-line front end: the `islands`, `mc` and `suite` tools share one
//! dispatcher and one report format.

pub mod islands_cmd;
pub mod mc_cmd;
pub mod report;
pub mod suite;

use std::io::Write;

use clap::Parser;

use report::{Ctx, Failure, EXIT_USAGE};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Tool {
    Islands,
    Mc,
    Suite,
}

/// Output of one invocation.
pub struct Outcome {
    pub code: i32,
    pub stdout: String,
    pub stderr: String,
}

fn init_logging(verbose: bool) {
    let level = if verbose { log::LevelFilter::Debug } else { log::LevelFilter::Warn };
    let _ = env_logger::Builder::new().filter_level(level).try_init();
}

/// Parses `argv` (program name first) for `tool` and runs it.
pub fn dispatch(tool: Tool, argv: &[String]) -> Outcome {
    let parsed = match tool {
        Tool::Islands => islands_cmd::IslandsCli::try_parse_from(argv).map(|c| (c.json, c.verbose, Cmd::Islands(c))),
        Tool::Mc => mc_cmd::McCli::try_parse_from(argv).map(|c| (c.json, c.verbose, Cmd::Mc(c))),
        Tool::Suite => suite::SuiteCli::try_parse_from(argv).map(|c| (c.json, c.verbose, Cmd::Suite(c))),
    };
    let (json, verbose, cmd) = match parsed {
        Ok(p) => p,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { 0 };
            let text = e.render().to_string();
            return if code == 0 {
                Outcome { code, stdout: text, stderr: String::new() }
            } else {
                Outcome { code, stdout: String::new(), stderr: text }
            };
        }
    };
    init_logging(verbose);
    let mut ctx = Ctx::new(argv, json);
    let result = match cmd {
        Cmd::Islands(c) => islands_cmd::run(c, &mut ctx),
        Cmd::Mc(c) => mc_cmd::run(c, &mut ctx),
        Cmd::Suite(c) => suite::run(c, &mut ctx),
    };
    let (code, stderr) = match result {
        Ok(code) => (code, String::new()),
        Err(Failure::Exit(code)) => (code, String::new()),
        Err(Failure::Usage(msg)) => (EXIT_USAGE, format!("error: {msg}\n")),
    };
    ctx.report.exit_code = code;
    let stdout = if json {
        let mut s = serde_json::to_string_pretty(&ctx.report).expect("report serializes");
        s.push('\n');
        s
    } else {
        ctx.text().to_string()
    };
    Outcome { code, stdout, stderr }
}

enum Cmd {
    Islands(islands_cmd::IslandsCli),
    Mc(mc_cmd::McCli),
    Suite(suite::SuiteCli),
}

/// Entry point for the binaries.
pub fn main_for(tool: Tool) -> ! {
    let argv: Vec<String> = std::env::args().collect();
    let out = dispatch(tool, &argv);
    let _ = std::io::stdout().write_all(out.stdout.as_bytes());
    let _ = std::io::stderr().write_all(out.stderr.as_bytes());
    std::process::exit(out.code)
}
