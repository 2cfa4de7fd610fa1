use std::collections::BTreeMap;
use std::path::{Path, PathBuf};
use std::time::Instant;

use serde::Serialize;
use serde_json::Value;
use sha2::{Digest, Sha256};

/// Process exit codes.
pub const EXIT_OK: i32 = 0;
pub const EXIT_NO: i32 = 1;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_VIOLATION: i32 = 3;

/// Machine-readable record of one command.
#[derive(Debug, Clone, Serialize)]
pub struct RunReport {
    pub command: Vec<String>,
    /// SHA-256 of every input file, keyed by path.
    pub inputs: BTreeMap<String, String>,
    pub verdict: Value,
    pub timings_ms: BTreeMap<String, f64>,
    pub outputs: Vec<String>,
    pub exit_code: i32,
}

impl RunReport {
    pub fn new(command: &[String]) -> Self {
        RunReport {
            command: command.to_vec(),
            inputs: BTreeMap::new(),
            verdict: Value::Null,
            timings_ms: BTreeMap::new(),
            outputs: Vec::new(),
            exit_code: EXIT_OK,
        }
    }
}

/// Command context: the report being built and the text sink.
pub struct Ctx {
    pub report: RunReport,
    pub json: bool,
    text: String,
}

#[derive(Debug)]
pub enum Failure {
    Usage(String),
    /// Already reported; exit with this code.
    Exit(i32),
}

impl From<islands_core::Error> for Failure {
    fn from(e: islands_core::Error) -> Self {
        Failure::Usage(e.to_string())
    }
}

pub type CmdResult = Result<i32, Failure>;

impl Ctx {
    pub fn new(argv: &[String], json: bool) -> Self {
        Ctx {
            report: RunReport::new(argv),
            json,
            text: String::new(),
        }
    }

    pub fn say(&mut self, line: impl AsRef<str>) {
        self.text.push_str(line.as_ref());
        if !line.as_ref().ends_with('\n') {
            self.text.push('\n');
        }
    }

    pub fn text(&self) -> &str {
        &self.text
    }

    pub fn read(&mut self, path: &Path) -> Result<String, Failure> {
        let bytes = std::fs::read(path)
            .map_err(|e| Failure::Usage(format!("cannot read {}: {e}", path.display())))?;
        self.report
            .inputs
            .insert(path.display().to_string(), hex_digest(&bytes));
        String::from_utf8(bytes).map_err(|_| Failure::Usage(format!("{} is not UTF-8", path.display())))
    }

    pub fn write(&mut self, path: &Path, contents: &str) -> Result<(), Failure> {
        std::fs::write(path, contents)
            .map_err(|e| Failure::Usage(format!("cannot write {}: {e}", path.display())))?;
        self.report.outputs.push(path.display().to_string());
        Ok(())
    }

    pub fn timed<T>(&mut self, label: &str, f: impl FnOnce() -> T) -> T {
        let start = Instant::now();
        let out = f();
        self.report
            .timings_ms
            .insert(label.to_string(), start.elapsed().as_secs_f64() * 1e3);
        out
    }

    pub fn verdict(&mut self, v: impl Serialize) {
        self.report.verdict = serde_json::to_value(v).unwrap_or(Value::Null);
    }
}

pub fn hex_digest(bytes: &[u8]) -> String {
    Sha256::digest(bytes).iter().map(|b| format!("{b:02x}")).collect()
}

/// Writes a residual counterexample as a graph file and returns its path.
pub fn dump_violation(ctx: &mut Ctx, dir: &Path, v: &islands_core::TheoremViolation) -> Result<PathBuf, Failure> {
    let text = format!(
        "# residual component, original ids: {}\n{}",
        v.vertices.iter().map(usize::to_string).collect::<Vec<_>>().join(" "),
        v.residual.to_text()
    );
    let name = format!("violation-{}.g", &hex_digest(text.as_bytes())[..12]);
    let path = dir.join(name);
    ctx.write(&path, &text)?;
    Ok(path)
}
