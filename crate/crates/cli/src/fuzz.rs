//! Corruption experiment: single-byte mutants of valid trusty files.

use std::collections::BTreeMap;
use std::fs;
use std::io;
use std::path::{Path, PathBuf};

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use trustyuri::rdf::{self, RdfFormat};
use trustyuri::{ModuleId, Verdict};

use crate::commands::{self, Options};

const ALNUM: &[u8] = b"ABCDEFGHIJKLMNOPQRSTUVWXYZabcdefghijklmnopqrstuvwxyz0123456789";

/// Seeded single-byte substitution over ASCII letters and digits. A byte
/// is never replaced by itself or by its other-case letter.
#[derive(Debug, Clone)]
pub struct MutationSpec {
    rng: ChaCha8Rng,
}

/// One applied mutation.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct Mutation {
    pub offset: usize,
    pub from: u8,
    pub to: u8,
}

impl MutationSpec {
    pub fn new(seed: u64) -> Self {
        MutationSpec {
            rng: ChaCha8Rng::seed_from_u64(seed),
        }
    }

    pub fn rng(&mut self) -> &mut ChaCha8Rng {
        &mut self.rng
    }

    /// Mutates one letter or digit of `content` in place; `None` if there
    /// is none.
    pub fn mutate(&mut self, content: &mut [u8]) -> Option<Mutation> {
        let candidates: Vec<usize> = (0..content.len()).filter(|&i| content[i].is_ascii_alphanumeric()).collect();
        let &offset = candidates.choose(&mut self.rng)?;
        let from = content[offset];
        let allowed: Vec<u8> = ALNUM
            .iter()
            .copied()
            .filter(|&c| c != from && !(c.is_ascii_alphabetic() && c.eq_ignore_ascii_case(&from)))
            .collect();
        let to = allowed[self.rng.gen_range(0..allowed.len())];
        content[offset] = to;
        Some(Mutation { offset, from, to })
    }
}

/// Outcome counts for one file kind.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize)]
pub struct Tally {
    pub mutants: usize,
    pub valid: usize,
    pub invalid: usize,
    pub error: usize,
    /// Mutants that are still well-formed RDF, split by verdict.
    pub invalid_parsed: usize,
    pub error_parsed: usize,
}

impl Tally {
    fn add(&mut self, verdict: Verdict, parses: bool) {
        self.mutants += 1;
        match verdict {
            Verdict::Valid => self.valid += 1,
            Verdict::Invalid => {
                self.invalid += 1;
                self.invalid_parsed += usize::from(parses);
            }
            Verdict::Error => {
                self.error += 1;
                self.error_parsed += usize::from(parses);
            }
        }
    }

    fn percent(&self, n: usize) -> f64 {
        if self.mutants == 0 {
            0.0
        } else {
            100.0 * n as f64 / self.mutants as f64
        }
    }

    pub fn valid_percent(&self) -> f64 {
        self.percent(self.valid)
    }

    pub fn invalid_percent(&self) -> f64 {
        self.percent(self.invalid)
    }

    pub fn error_percent(&self) -> f64 {
        self.percent(self.error)
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct FuzzReport {
    pub seed: u64,
    pub files: usize,
    /// Keyed by `nq`, `trig` or `bytes`.
    pub by_kind: BTreeMap<&'static str, Tally>,
    pub total: Tally,
}

impl FuzzReport {
    pub fn table(&self) -> String {
        let mut s = format!(
            "{:<6} {:>8} {:>8} {:>8} {:>8}  parsed(invalid/error)\n",
            "kind", "mutants", "valid%", "invalid%", "error%"
        );
        let rows = self.by_kind.iter().map(|(k, t)| (*k, t)).chain([("total", &self.total)]);
        for (kind, t) in rows {
            s.push_str(&format!(
                "{:<6} {:>8} {:>8.1} {:>8.1} {:>8.1}  {}/{}\n",
                kind,
                t.mutants,
                t.valid_percent(),
                t.invalid_percent(),
                t.error_percent(),
                t.invalid_parsed,
                t.error_parsed
            ));
        }
        s
    }
}

fn kind_of(path: &Path, opts: &Options) -> (&'static str, Option<RdfFormat>) {
    let module = commands::code_from_file_name(path).map(|c| c.module()).ok();
    if module == Some(ModuleId::FA) {
        return ("bytes", None);
    }
    match opts.format.or_else(|| rdf::format_for_path(path)).unwrap_or(RdfFormat::NQuads) {
        RdfFormat::NQuads => ("nq", Some(RdfFormat::NQuads)),
        RdfFormat::TriG => ("trig", Some(RdfFormat::TriG)),
    }
}

/// Checks `n` mutants of files drawn uniformly from `corpus`. Fully
/// determined by `seed` and the corpus contents.
pub fn fuzz_files(corpus: &[PathBuf], n: usize, seed: u64, opts: &Options) -> io::Result<FuzzReport> {
    let mut contents = Vec::with_capacity(corpus.len());
    for p in corpus {
        contents.push(fs::read(p)?);
    }
    let mut spec = MutationSpec::new(seed);
    let mut report = FuzzReport {
        seed,
        files: corpus.len(),
        by_kind: BTreeMap::new(),
        total: Tally::default(),
    };
    let usable: Vec<usize> = (0..corpus.len()).filter(|&i| contents[i].iter().any(u8::is_ascii_alphanumeric)).collect();
    if usable.is_empty() {
        return Ok(report);
    }
    for _ in 0..n {
        let i = usable[spec.rng().gen_range(0..usable.len())];
        let path = &corpus[i];
        let mut mutant = contents[i].clone();
        spec.mutate(&mut mutant).expect("usable files contain letters or digits");
        let name = path.file_name().and_then(|n| n.to_str()).unwrap_or_default();
        let verdict = commands::check_content(name, &mutant, opts).verdict;
        let (kind, format) = kind_of(path, opts);
        let parses = format.is_none_or(|f| rdf::parse(mutant.as_slice(), f).is_ok());
        report.by_kind.entry(kind).or_default().add(verdict, parses);
        report.total.add(verdict, parses);
    }
    Ok(report)
}

/// [`fuzz_files`] over every file in `dir`.
pub fn fuzz_check(dir: &Path, n: usize, seed: u64, opts: &Options) -> io::Result<FuzzReport> {
    fuzz_files(&commands::list_files(dir)?, n, seed, opts)
}
