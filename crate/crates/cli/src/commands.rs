//! The command implementations shared by the binary and batch mode.

use std::fs;
use std::io;
use std::path::{Path, PathBuf};

use serde::Serialize;
use trustyuri::extsort::SortConfig;
use trustyuri::module_r::{self, CheckTarget};
use trustyuri::rdf::{self, RdfFormat};
use trustyuri::{large, module_fa, strip_extension, to_ni_uri, ArtifactCode, CheckReport, ModuleId, Verdict};

/// Options shared by all commands.
#[derive(Debug, Clone, Default)]
pub struct Options {
    /// Overrides extension-based RDF format detection.
    pub format: Option<RdfFormat>,
    pub sort: SortConfig,
}

/// One line of command output.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ItemResult {
    pub verb: &'static str,
    pub path: String,
    pub verdict: Verdict,
    pub expected_code: Option<ArtifactCode>,
    pub computed_code: Option<ArtifactCode>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub output: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub uri: Option<String>,
    pub message: String,
}

impl ItemResult {
    fn from_report(verb: &'static str, path: &Path, report: CheckReport) -> Self {
        ItemResult {
            verb,
            path: path.display().to_string(),
            verdict: report.verdict,
            expected_code: report.expected_code,
            computed_code: report.computed_code,
            output: None,
            uri: None,
            message: report.message,
        }
    }

    fn error(verb: &'static str, path: &Path, message: impl Into<String>) -> Self {
        ItemResult::from_report(verb, path, CheckReport::error(None, message))
    }

    /// Line-oriented rendering.
    pub fn to_line(&self) -> String {
        let mut line = format!("{} {} {}", self.verdict, self.verb, self.path);
        if let Some(out) = &self.output {
            line.push_str(" -> ");
            line.push_str(out);
        }
        if let Some(uri) = &self.uri {
            line.push_str(" <");
            line.push_str(uri);
            line.push('>');
        }
        if !self.message.is_empty() {
            line.push_str(": ");
            line.push_str(&self.message);
        }
        line
    }
}

/// Worst verdict of a set of results; `Valid` for none.
pub fn overall(results: &[ItemResult]) -> Verdict {
    results.iter().fold(Verdict::Valid, |acc, r| acc.worst(r.verdict))
}

/// The artifact code a trusty file name carries.
pub fn code_from_file_name(path: &Path) -> Result<ArtifactCode, String> {
    let name = path
        .file_name()
        .and_then(|n| n.to_str())
        .ok_or_else(|| format!("{} has no file name", path.display()))?;
    let stem = strip_extension(name).map_err(|e| e.to_string())?;
    trustyuri::extract_artifact_code(stem)
        .code()
        .cloned()
        .ok_or_else(|| format!("{name} does not carry an artifact code"))
}

fn rdf_format(path: &Path, opts: &Options) -> RdfFormat {
    opts.format
        .or_else(|| rdf::format_for_path(path))
        .unwrap_or(RdfFormat::NQuads)
}

/// CheckFile: verifies a trusty file with the module named in its code.
pub fn check_file(path: &Path, opts: &Options) -> ItemResult {
    const VERB: &str = "CheckFile";
    let code = match code_from_file_name(path) {
        Ok(c) => c,
        Err(m) => return ItemResult::error(VERB, path, m),
    };
    let report = match code.module() {
        ModuleId::FA => module_fa::check_file(path, &code),
        ModuleId::RA | ModuleId::RB => {
            module_r::check_rdf_file(path, &CheckTarget::from_code(code), Some(rdf_format(path, opts)))
        }
    };
    ItemResult::from_report(VERB, path, report)
}

/// CheckFile on in-memory content named `name`; used by the fuzzer.
pub fn check_content(name: &str, content: &[u8], opts: &Options) -> ItemResult {
    const VERB: &str = "CheckFile";
    let path = Path::new(name);
    let code = match code_from_file_name(path) {
        Ok(c) => c,
        Err(m) => return ItemResult::error(VERB, path, m),
    };
    let report = match code.module() {
        ModuleId::FA => module_fa::check_reader(content, &code),
        ModuleId::RA | ModuleId::RB => {
            let reader = rdf::quad_reader(content, rdf_format(path, opts));
            module_r::check_quads(reader, &CheckTarget::from_code(code))
        }
    };
    ItemResult::from_report(VERB, path, report)
}

fn rdf_code(path: &Path) -> Result<CheckTarget, String> {
    let code = code_from_file_name(path)?;
    if !code.module().is_rdf() {
        return Err(format!("module {} is not an RDF module", code.module()));
    }
    Ok(CheckTarget::from_code(code))
}

/// CheckLargeRdf: verification through an external sort.
pub fn check_large_rdf(path: &Path, opts: &Options) -> ItemResult {
    const VERB: &str = "CheckLargeRdf";
    match rdf_code(path) {
        Ok(target) => ItemResult::from_report(
            VERB,
            path,
            large::check_large_rdf(path, &target, Some(rdf_format(path, opts)), &opts.sort),
        ),
        Err(m) => ItemResult::error(VERB, path, m),
    }
}

/// CheckSortedRdf: single-pass verification of canonically sorted input.
pub fn check_sorted_rdf(path: &Path, opts: &Options) -> ItemResult {
    const VERB: &str = "CheckSortedRdf";
    match rdf_code(path) {
        Ok(target) => ItemResult::from_report(
            VERB,
            path,
            large::check_sorted_rdf(path, &target, Some(rdf_format(path, opts))),
        ),
        Err(m) => ItemResult::error(VERB, path, m),
    }
}

/// ProcessFile: renames a file to its FA trusty name.
pub fn process_file(path: &Path) -> ItemResult {
    const VERB: &str = "ProcessFile";
    match module_fa::process_file(path) {
        Ok(target) => {
            let code = code_from_file_name(&target).ok();
            ItemResult {
                verb: VERB,
                path: path.display().to_string(),
                verdict: Verdict::Valid,
                expected_code: None,
                computed_code: code,
                output: Some(target.display().to_string()),
                uri: None,
                message: String::new(),
            }
        }
        Err(e) => ItemResult::error(VERB, path, e.to_string()),
    }
}

/// TransformRdf and TransformLargeRdf.
pub fn transform_rdf(path: &Path, base_uri: &str, module: ModuleId, large_mode: bool, opts: &Options) -> ItemResult {
    let verb = if large_mode { "TransformLargeRdf" } else { "TransformRdf" };
    let format = Some(rdf_format(path, opts));
    let result = if large_mode {
        large::transform_large_rdf(path, base_uri, module, format, &opts.sort).map(|t| t.file)
    } else {
        module_r::transform_rdf_file(path, base_uri, module, format)
    };
    match result {
        Ok(file) => ItemResult {
            verb,
            path: path.display().to_string(),
            verdict: Verdict::Valid,
            expected_code: None,
            computed_code: Some(file.code),
            output: Some(file.path.display().to_string()),
            uri: Some(file.uri),
            message: String::new(),
        },
        Err(e) => ItemResult::error(verb, path, e.to_string()),
    }
}

/// ni-URI conversion.
pub fn ni_convert(uri: &str, authority: Option<&str>, module_param: bool) -> Result<String, String> {
    to_ni_uri(uri, authority, module_param).map_err(|e| e.to_string())
}

/// Files directly inside `dir`, sorted by name.
pub fn list_files(dir: &Path) -> io::Result<Vec<PathBuf>> {
    let mut files = Vec::new();
    for entry in fs::read_dir(dir)? {
        let entry = entry?;
        if entry.file_type()?.is_file() {
            files.push(entry.path());
        }
    }
    files.sort();
    Ok(files)
}
