//! Transform and check RDF files that do not fit in memory.
//!
//! Quads are streamed from the input, preprocessed, encoded as
//! order-preserving sort keys and sorted externally. Hashing consumes the
//! merged stream. A transform needs a second pass over the sorted keys to
//! write the output with the final artifact code in place, which gives the
//! same bytes as [`module_r::transform_rdf_file`](crate::module_r::transform_rdf_file).

use std::fs::File;
use std::io::{self, BufReader, BufWriter, Read, Write};
use std::path::Path;

use crate::codec::ModuleId;
use crate::extsort::{ExternalSorter, SortConfig, SortStats, SortedRecords};
use crate::module_r::canon::{from_sort_key, sort_key};
use crate::module_r::{
    code_for, trusty_rdf_path, CheckPreprocessor, CheckTarget, DatasetHasher, PreprocessedQuad, Rejection,
    TransformError, TransformPlan, TransformedFile,
};
use crate::rdf::nquads::NQuadsWriter;
use crate::rdf::{self, ParseError, RdfFormat};
use crate::report::CheckReport;

#[derive(Debug)]
enum PipeError {
    Parse(ParseError),
    Reject(Rejection),
    Transform(TransformError),
    Io(io::Error),
}

impl From<io::Error> for PipeError {
    fn from(e: io::Error) -> Self {
        PipeError::Io(e)
    }
}

fn open_reader(path: &Path, format: Option<RdfFormat>) -> io::Result<rdf::QuadReader<'static>> {
    let format = format.or_else(|| rdf::format_for_path(path)).unwrap_or(RdfFormat::NQuads);
    let file = File::open(path)?;
    Ok(rdf::quad_reader(BufReader::with_capacity(256 * 1024, file), format))
}

fn decode(key: &[u8]) -> io::Result<PreprocessedQuad> {
    from_sort_key(key).map_err(|e| io::Error::new(io::ErrorKind::InvalidData, e))
}

/// Feeds distinct sorted keys to the hasher, calling `each` on every key
/// kept.
fn hash_sorted(
    sorted: &mut SortedRecords,
    mut each: impl FnMut(&[u8]) -> io::Result<()>,
) -> io::Result<DatasetHasher> {
    let mut hasher = DatasetHasher::new();
    let mut prev: Option<Vec<u8>> = None;
    for key in sorted {
        let key = key?;
        if prev.as_deref() == Some(key.as_slice()) {
            continue;
        }
        hasher.push(&decode(&key)?);
        each(&key)?;
        prev = Some(key);
    }
    Ok(hasher)
}

/// Result of [`transform_large_rdf`].
#[derive(Debug, Clone)]
pub struct LargeTransform {
    pub file: TransformedFile,
    pub stats: SortStats,
}

/// Out-of-memory variant of
/// [`transform_rdf_file`](crate::module_r::transform_rdf_file); the output
/// file is byte-identical.
pub fn transform_large_rdf(
    input: &Path,
    base_uri: &str,
    module: ModuleId,
    format: Option<RdfFormat>,
    cfg: &SortConfig,
) -> Result<LargeTransform, TransformError> {
    let mut plan = TransformPlan::new(base_uri, module)?;
    let sorter = ExternalSorter::new(cfg.clone())?;
    let reader = open_reader(input, format)?;
    let keys = reader.map(|q| {
        let q = q.map_err(PipeError::Parse)?;
        plan.preprocess(&q).map(|p| sort_key(&p)).map_err(PipeError::Transform)
    });
    let mut sorted = match sorter.sort(keys) {
        Ok(s) => s,
        Err(PipeError::Parse(e)) => return Err(e.into()),
        Err(PipeError::Transform(e)) => return Err(e),
        Err(PipeError::Io(e)) => return Err(e.into()),
        Err(PipeError::Reject(_)) => unreachable!("no rejections while transforming"),
    };
    let stats = sorted.stats();

    // pass 1: hash, keeping the distinct sorted keys for pass 2
    let scratch = tempfile::Builder::new()
        .prefix("trustyuri-sorted-")
        .tempfile_in(&cfg.temp_dir)?;
    let mut keys_out = BufWriter::with_capacity(256 * 1024, scratch.reopen()?);
    let hasher = hash_sorted(&mut sorted, |key| {
        keys_out.write_all(&(key.len() as u32).to_le_bytes())?;
        keys_out.write_all(key)
    })?;
    keys_out.flush()?;
    drop(keys_out);
    drop(sorted);
    let code = code_for(module, hasher.finish());

    // pass 2: substitute the code and write N-Quads
    let target = trusty_rdf_path(input, &code);
    let dir = target.parent().filter(|p| !p.as_os_str().is_empty()).unwrap_or(Path::new("."));
    let out_tmp = tempfile::Builder::new().prefix(".trustyuri-").tempfile_in(dir)?;
    let mut writer = NQuadsWriter::new(BufWriter::with_capacity(256 * 1024, out_tmp.reopen()?));
    let mut keys_in = BufReader::with_capacity(256 * 1024, scratch.reopen()?);
    let mut len = [0u8; 4];
    let mut key = Vec::new();
    loop {
        match keys_in.read_exact(&mut len) {
            Ok(()) => {}
            Err(e) if e.kind() == io::ErrorKind::UnexpectedEof => break,
            Err(e) => return Err(e.into()),
        }
        key.resize(u32::from_le_bytes(len) as usize, 0);
        keys_in.read_exact(&mut key)?;
        writer.write_quad(&plan.finalize(&decode(&key)?, &code))?;
    }
    writer.finish()?;
    out_tmp.persist(&target).map_err(|e| e.error)?;
    Ok(LargeTransform {
        file: TransformedFile {
            path: target,
            uri: plan.trusty_uri(&code),
            code,
        },
        stats,
    })
}

/// Verifies a file with bounded memory. The verdict equals that of
/// [`check_rdf_file`](crate::module_r::check_rdf_file).
pub fn check_large_rdf(path: &Path, target: &CheckTarget, format: Option<RdfFormat>, cfg: &SortConfig) -> CheckReport {
    check_large_rdf_with_stats(path, target, format, cfg).0
}

pub fn check_large_rdf_with_stats(
    path: &Path,
    target: &CheckTarget,
    format: Option<RdfFormat>,
    cfg: &SortConfig,
) -> (CheckReport, Option<SortStats>) {
    let expected = &target.code;
    let io_error = |e: io::Error| CheckReport::error(Some(expected.clone()), format!("{}: {e}", path.display()));
    let mut pre = match CheckPreprocessor::new(target) {
        Ok(p) => p,
        Err(r) => return (r.into_report(expected), None),
    };
    let sorter = match ExternalSorter::new(cfg.clone()) {
        Ok(s) => s,
        Err(e) => return (io_error(e), None),
    };
    let reader = match open_reader(path, format) {
        Ok(r) => r,
        Err(e) => return (io_error(e), None),
    };
    let keys = reader.map(|q| {
        let q = q.map_err(PipeError::Parse)?;
        pre.apply(&q).map(|p| sort_key(&p)).map_err(PipeError::Reject)
    });
    let mut sorted = match sorter.sort(keys) {
        Ok(s) => s,
        Err(PipeError::Parse(e)) => {
            return (CheckReport::error(Some(expected.clone()), format!("parse error: {e}")), None)
        }
        Err(PipeError::Reject(r)) => return (r.into_report(expected), None),
        Err(PipeError::Io(e)) => return (io_error(e), None),
        Err(PipeError::Transform(_)) => unreachable!("no transform while checking"),
    };
    let stats = sorted.stats();
    let report = match hash_sorted(&mut sorted, |_| Ok(())) {
        Ok(hasher) => CheckReport::compare(expected.clone(), code_for(expected.module(), hasher.finish())),
        Err(e) => io_error(e),
    };
    (report, Some(stats))
}

/// Verifies a file that is already in canonical order, in one pass with
/// constant memory. Out-of-order statements give an `error` verdict.
pub fn check_sorted_rdf(path: &Path, target: &CheckTarget, format: Option<RdfFormat>) -> CheckReport {
    let expected = &target.code;
    let reader = match open_reader(path, format) {
        Ok(r) => r,
        Err(e) => return CheckReport::error(Some(expected.clone()), format!("{}: {e}", path.display())),
    };
    check_sorted_quads(reader, target)
}

/// [`check_sorted_rdf`] over any quad stream.
pub fn check_sorted_quads<I>(quads: I, target: &CheckTarget) -> CheckReport
where
    I: IntoIterator<Item = Result<rdf::Quad, ParseError>>,
{
    let expected = &target.code;
    let mut pre = match CheckPreprocessor::new(target) {
        Ok(p) => p,
        Err(r) => return r.into_report(expected),
    };
    let mut hasher = DatasetHasher::new();
    let mut prev: Option<PreprocessedQuad> = None;
    for (i, quad) in quads.into_iter().enumerate() {
        let quad = match quad {
            Ok(q) => q,
            Err(e) => return CheckReport::error(Some(expected.clone()), format!("parse error: {e}")),
        };
        let q = match pre.apply(&quad) {
            Ok(q) => q,
            Err(r) => return r.into_report(expected),
        };
        match prev.as_ref().map(|p| p.cmp(&q)) {
            Some(std::cmp::Ordering::Greater) => {
                return CheckReport::error(
                    Some(expected.clone()),
                    format!("statement {} is out of order", i + 1),
                )
            }
            Some(std::cmp::Ordering::Equal) => continue,
            _ => {}
        }
        hasher.push(&q);
        prev = Some(q);
    }
    CheckReport::compare(expected.clone(), code_for(expected.module(), hasher.finish()))
}
