//! Module FA: trusty URIs over the byte content of files.

use std::fs::{self, File};
use std::io::{self, Read};
use std::path::{Path, PathBuf};

use sha2::{Digest, Sha256};
use thiserror::Error;

use crate::codec::{append_artifact_code, extract_artifact_code, ArtifactCode, ModuleId};
use crate::report::CheckReport;

#[derive(Debug, Error)]
pub enum FaError {
    #[error("{0} already carries a trusty artifact code")]
    AlreadyTrusty(PathBuf),
    #[error("{0} has no usable file name")]
    BadName(PathBuf),
    #[error("target {0} already exists")]
    Collision(PathBuf),
    #[error(transparent)]
    Io(#[from] io::Error),
}

/// Code plus the number of bytes hashed.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FileDigestResult {
    pub artifact_code: ArtifactCode,
    pub byte_count: u64,
}

/// Streams `input` through SHA-256 and returns its FA code.
pub fn hash_reader<R: Read>(mut input: R) -> io::Result<FileDigestResult> {
    let mut hasher = Sha256::new();
    let mut buf = vec![0u8; 64 * 1024];
    let mut byte_count = 0u64;
    loop {
        let n = match input.read(&mut buf) {
            Ok(0) => break,
            Ok(n) => n,
            Err(e) if e.kind() == io::ErrorKind::Interrupted => continue,
            Err(e) => return Err(e),
        };
        hasher.update(&buf[..n]);
        byte_count += n as u64;
    }
    let artifact_code =
        ArtifactCode::from_digest(ModuleId::FA, &hasher.finalize()).expect("SHA-256 digests are 32 bytes");
    Ok(FileDigestResult {
        artifact_code,
        byte_count,
    })
}

pub fn hash_bytes(bytes: &[u8]) -> ArtifactCode {
    ArtifactCode::from_digest(ModuleId::FA, &Sha256::digest(bytes)).expect("SHA-256 digests are 32 bytes")
}

pub fn hash_file(path: &Path) -> io::Result<FileDigestResult> {
    hash_reader(File::open(path)?)
}

pub fn check_reader<R: Read>(input: R, expected: &ArtifactCode) -> CheckReport {
    if expected.module() != ModuleId::FA {
        return CheckReport::error(Some(expected.clone()), format!("module {} is not FA", expected.module()));
    }
    match hash_reader(input) {
        Ok(result) => CheckReport::compare(expected.clone(), result.artifact_code),
        Err(e) => CheckReport::error(Some(expected.clone()), format!("read failed: {e}")),
    }
}

pub fn check_file(path: &Path, expected: &ArtifactCode) -> CheckReport {
    match File::open(path) {
        Ok(f) => check_reader(f, expected),
        Err(e) => CheckReport::error(Some(expected.clone()), format!("{}: {e}", path.display())),
    }
}

/// Trusty file name for `name` and `code`: the code goes before the last
/// extension, `name.ext` becoming `name.<code>.ext`.
pub fn trusty_file_name(name: &str, code: &ArtifactCode) -> String {
    match name.rfind('.').filter(|&i| i > 0) {
        Some(dot) => {
            let (stem, ext) = name.split_at(dot);
            format!("{}{ext}", append_artifact_code(stem, code))
        }
        None => append_artifact_code(name, code),
    }
}

/// Hashes the file with module FA and renames it to its trusty name.
/// The content is not touched.
pub fn process_file(path: &Path) -> Result<PathBuf, FaError> {
    let name = path
        .file_name()
        .and_then(|n| n.to_str())
        .ok_or_else(|| FaError::BadName(path.to_path_buf()))?;
    let stem = match name.rfind('.').filter(|&i| i > 0) {
        Some(dot) => &name[..dot],
        None => name,
    };
    if extract_artifact_code(stem).is_potential() || extract_artifact_code(name).is_potential() {
        return Err(FaError::AlreadyTrusty(path.to_path_buf()));
    }
    let code = hash_file(path)?.artifact_code;
    let target = path.with_file_name(trusty_file_name(name, &code));
    if target.exists() {
        return Err(FaError::Collision(target));
    }
    fs::rename(path, &target)?;
    Ok(target)
}
