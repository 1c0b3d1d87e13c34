//! Helpers shared by the integration tests.

#![allow(dead_code)]

use std::path::{Path, PathBuf};
use std::process::Command;

pub fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

pub fn golden_dir() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("tests/golden")
}

pub fn workspace_root() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("../..").canonicalize().unwrap()
}

/// Splits a documented command line into words; double quotes group.
pub fn shell_words(line: &str) -> Vec<String> {
    let mut words = Vec::new();
    let mut cur = String::new();
    let (mut quoted, mut any) = (false, false);
    for c in line.chars() {
        match c {
            '"' => {
                quoted = !quoted;
                any = true;
            }
            c if c.is_whitespace() && !quoted => {
                if any {
                    words.push(std::mem::take(&mut cur));
                    any = false;
                }
            }
            c => {
                cur.push(c);
                any = true;
            }
        }
    }
    if any {
        words.push(cur);
    }
    words
}

/// `$ bnumber ...` lines and their expected output from the README's
/// console blocks.
pub fn documented_invocations(readme: &str) -> Vec<(String, String)> {
    let mut out = Vec::new();
    let mut in_block = false;
    let mut current: Option<(String, String)> = None;
    for line in readme.lines() {
        if line.trim_start().starts_with("```") {
            if let Some(done) = current.take() {
                out.push(done);
            }
            in_block = line.trim() == "```console";
            continue;
        }
        if !in_block {
            continue;
        }
        if let Some(cmd) = line.strip_prefix("$ ") {
            if let Some(done) = current.take() {
                out.push(done);
            }
            current = Some((cmd.to_string(), String::new()));
        } else if let Some((_, expected)) = current.as_mut() {
            expected.push_str(line);
            expected.push('\n');
        }
    }
    out
}

pub fn run_documented(cmd: &str, root: &Path) -> Result<String, String> {
    let words = shell_words(cmd);
    let (prog, args) = words.split_first().ok_or("empty command")?;
    if prog != "bnumber" {
        return Err(format!("unexpected program {prog}"));
    }
    let output = Command::new(env!("CARGO_BIN_EXE_bnumber"))
        .args(args)
        .current_dir(root)
        .output()
        .map_err(|e| e.to_string())?;
    ensure(output.status.success(), || format!("`{cmd}` exited with {}", output.status))?;
    String::from_utf8(output.stdout).map_err(|e| e.to_string())
}

/// Sweep sizes used by the committed CSV files and by `--max-n 64 --max-b 10`.
pub fn golden_csvs() -> Vec<(&'static str, String)> {
    use bnumber::experiments::{computation_baseline, csv_string, theorem3_sweep, theorem4_sweep};
    let m = bnumber::machine::parse_machine(bnumber::machine::ENDS_IN_ONE).unwrap();
    let (efficient, length) = theorem3_sweep(64).unwrap();
    vec![
        ("theorem4.csv", csv_string(&theorem4_sweep(10, computation_baseline(&m), Some(&m)).unwrap())),
        ("theorem3_efficient.csv", csv_string(&efficient)),
        ("theorem3_length.csv", csv_string(&length)),
    ]
}
