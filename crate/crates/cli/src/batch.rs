//! RunBatch: one command per line, executed in order.
//!
//! ```text
//! # comment
//! CheckFile a.FA...txt b.RA...nq
//! ProcessFile data.bin
//! TransformRdf np.trig http://example.org/np1 [RA|RB]
//! TransformLargeRdf big.nq http://example.org/big [RA|RB]
//! CheckLargeRdf big.RA...nq
//! CheckSortedRdf big.RA...nq
//! ```
//!
//! Verbs also accept kebab-case (`check-file`). Relative paths resolve
//! against the batch file's directory.

use std::fs;
use std::path::{Path, PathBuf};

use serde::Serialize;
use thiserror::Error;
use trustyuri::{ModuleId, Verdict};

use crate::commands::{self, ItemResult, Options};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Verb {
    CheckFile,
    ProcessFile,
    TransformRdf,
    TransformLargeRdf,
    CheckLargeRdf,
    CheckSortedRdf,
}

impl Verb {
    pub fn parse(s: &str) -> Option<Verb> {
        Some(match s {
            "CheckFile" | "check-file" => Verb::CheckFile,
            "ProcessFile" | "process-file" => Verb::ProcessFile,
            "TransformRdf" | "transform-rdf" => Verb::TransformRdf,
            "TransformLargeRdf" | "transform-large-rdf" => Verb::TransformLargeRdf,
            "CheckLargeRdf" | "check-large-rdf" => Verb::CheckLargeRdf,
            "CheckSortedRdf" | "check-sorted-rdf" => Verb::CheckSortedRdf,
            _ => return None,
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BatchCommand {
    pub verb: Verb,
    pub args: Vec<String>,
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum BatchError {
    #[error("unknown verb {0:?}")]
    UnknownVerb(String),
    #[error("{verb:?} expects {expected}, got {got} argument(s)")]
    Arity {
        verb: Verb,
        expected: &'static str,
        got: usize,
    },
    #[error("invalid module {0:?}")]
    Module(String),
}

impl BatchCommand {
    /// Parses one non-blank, non-comment line.
    pub fn parse(line: &str) -> Result<Self, BatchError> {
        let mut words = line.split_whitespace();
        let verb_word = words.next().unwrap_or("");
        let verb = Verb::parse(verb_word).ok_or_else(|| BatchError::UnknownVerb(verb_word.to_string()))?;
        let args: Vec<String> = words.map(str::to_string).collect();
        let (ok, expected) = match verb {
            Verb::CheckFile => (!args.is_empty(), "at least 1"),
            Verb::ProcessFile | Verb::CheckLargeRdf | Verb::CheckSortedRdf => (args.len() == 1, "1"),
            Verb::TransformRdf | Verb::TransformLargeRdf => ((2..=3).contains(&args.len()), "2 or 3"),
        };
        if !ok {
            return Err(BatchError::Arity {
                verb,
                expected,
                got: args.len(),
            });
        }
        if let Some(m) = args.get(2) {
            match m.parse::<ModuleId>() {
                Ok(ModuleId::RA | ModuleId::RB) => {}
                _ => return Err(BatchError::Module(m.clone())),
            }
        }
        Ok(BatchCommand { verb, args })
    }

    fn run(&self, base_dir: &Path, opts: &Options) -> Vec<ItemResult> {
        let path = |s: &str| -> PathBuf {
            let p = Path::new(s);
            if p.is_absolute() {
                p.to_path_buf()
            } else {
                base_dir.join(p)
            }
        };
        match self.verb {
            Verb::CheckFile => self.args.iter().map(|a| commands::check_file(&path(a), opts)).collect(),
            Verb::ProcessFile => vec![commands::process_file(&path(&self.args[0]))],
            Verb::CheckLargeRdf => vec![commands::check_large_rdf(&path(&self.args[0]), opts)],
            Verb::CheckSortedRdf => vec![commands::check_sorted_rdf(&path(&self.args[0]), opts)],
            Verb::TransformRdf | Verb::TransformLargeRdf => {
                let module = self
                    .args
                    .get(2)
                    .map(|m| m.parse().expect("validated at parse time"))
                    .unwrap_or(ModuleId::RA);
                vec![commands::transform_rdf(
                    &path(&self.args[0]),
                    &self.args[1],
                    module,
                    self.verb == Verb::TransformLargeRdf,
                    opts,
                )]
            }
        }
    }
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize)]
pub struct Summary {
    pub valid: usize,
    pub invalid: usize,
    pub error: usize,
}

impl Summary {
    pub fn add(&mut self, v: Verdict) {
        match v {
            Verdict::Valid => self.valid += 1,
            Verdict::Invalid => self.invalid += 1,
            Verdict::Error => self.error += 1,
        }
    }

    pub fn verdict(&self) -> Verdict {
        if self.error > 0 {
            Verdict::Error
        } else if self.invalid > 0 {
            Verdict::Invalid
        } else {
            Verdict::Valid
        }
    }
}

/// Result of one batch line.
#[derive(Debug, Clone, Serialize)]
pub struct LineResult {
    pub line: usize,
    pub results: Vec<ItemResult>,
}

#[derive(Debug, Clone, Serialize)]
pub struct BatchReport {
    pub lines: Vec<LineResult>,
    pub summary: Summary,
}

/// Runs every command of `text` in order. Malformed lines count as errors
/// and do not stop the batch.
pub fn run_batch_text(text: &str, base_dir: &Path, opts: &Options) -> BatchReport {
    let mut lines = Vec::new();
    let mut summary = Summary::default();
    for (i, raw) in text.lines().enumerate() {
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let results = match BatchCommand::parse(line) {
            Ok(cmd) => cmd.run(base_dir, opts),
            Err(e) => vec![ItemResult {
                verb: "RunBatch",
                path: line.to_string(),
                verdict: Verdict::Error,
                expected_code: None,
                computed_code: None,
                output: None,
                uri: None,
                message: e.to_string(),
            }],
        };
        for r in &results {
            summary.add(r.verdict);
        }
        lines.push(LineResult { line: i + 1, results });
    }
    BatchReport { lines, summary }
}

pub fn run_batch(batch_file: &Path, opts: &Options) -> std::io::Result<BatchReport> {
    let text = fs::read_to_string(batch_file)?;
    let base = batch_file.parent().unwrap_or(Path::new("."));
    Ok(run_batch_text(&text, base, opts))
}
