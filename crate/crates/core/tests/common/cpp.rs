//! Compiling and running emitted validator bundles with the host g++.

use std::path::Path;
use std::process::Command;

use genplan::codegen::bundle;
use genplan::model::{Domain, Instance};
use genplan::program::Program;

pub fn have_compiler() -> bool {
    Command::new("g++").arg("--version").output().is_ok_and(|o| o.status.success())
}

/// Compiles and runs the bundle with `-Wall -Werror`, returning stdout
/// without the timing line.
pub fn compile_and_run(dir: &Path, dom: &Domain, inst: &Instance, prog: &Program) -> Result<String, String> {
    let b = bundle(dom, inst, prog).map_err(|e| e.to_string())?;
    b.write_to(dir).map_err(|e| e.to_string())?;
    let exe = dir.join("validator");
    let mut args = b.compile_args(dir, &exe);
    args.push("-Wall".into());
    args.push("-Werror".into());
    let out = Command::new("g++").args(&args).output().map_err(|e| e.to_string())?;
    if !out.status.success() {
        return Err(format!(
            "compilation failed for {}:\n{}",
            inst.name,
            String::from_utf8_lossy(&out.stderr)
        ));
    }
    let run = Command::new(&exe).output().map_err(|e| e.to_string())?;
    if !run.status.success() {
        return Err(format!("validator for {} exited with {}", inst.name, run.status));
    }
    let text = String::from_utf8(run.stdout).map_err(|e| e.to_string())?;
    let (body, timing) = text.trim_end().rsplit_once('\n').ok_or("missing timing line")?;
    let ms = timing
        .strip_prefix("time_ms=")
        .ok_or_else(|| format!("missing timing line: {timing}"))?;
    ms.parse::<u64>().map_err(|_| format!("bad timing line: {timing}"))?;
    Ok(format!("{body}\n"))
}
