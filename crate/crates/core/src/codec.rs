//! The trusty URI grammar.
//!
//! A trusty URI ends in an *artifact code*: the run of Base64 characters
//! after the last non-Base64 character. The first two characters name the
//! module (`FA`, `RA`, `RB`), the remaining 43 encode a SHA-256 digest
//! followed by two zero bits.

use std::fmt;
use std::str::FromStr;

use serde::{Serialize, Serializer};
use thiserror::Error;

/// Minimum length of the trailing Base64 run of any trusty URI.
pub const MIN_TAIL_LEN: usize = 25;
/// Length of the hash part for modules FA, RA and RB.
pub const HASH_PART_LEN: usize = 43;
/// Length of a full artifact code for modules FA, RA and RB.
pub const ARTIFACT_CODE_LEN: usize = 2 + HASH_PART_LEN;

const ALPHABET: &[u8; 64] = b"ABCDEFGHIJKLMNOPQRSTUVWXYZabcdefghijklmnopqrstuvwxyz0123456789-_";

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum CodecError {
    #[error("digest must be 32 bytes, got {0}")]
    DigestLength(usize),
    #[error("not a Base64 character: {0:?}")]
    NotBase64(char),
    #[error("malformed artifact code {code:?}: {reason}")]
    MalformedCode { code: String, reason: NotPotential },
    #[error("{0:?} does not end in a trusty artifact code")]
    NotTrusty(String),
    #[error("module {from} is not transferable to {to}")]
    NotTransferable { from: ModuleId, to: ModuleId },
}

/// Whether `c` belongs to the URI-safe Base64 alphabet.
pub fn is_base64_char(c: char) -> bool {
    c.is_ascii_alphanumeric() || c == '-' || c == '_'
}

/// The 6-bit value of a Base64 character.
pub fn base64_value(c: char) -> Option<u8> {
    match c {
        'A'..='Z' => Some(c as u8 - b'A'),
        'a'..='z' => Some(c as u8 - b'a' + 26),
        '0'..='9' => Some(c as u8 - b'0' + 52),
        '-' => Some(62),
        '_' => Some(63),
        _ => None,
    }
}

/// The Base64 character for a 6-bit value.
pub fn base64_char(value: u8) -> char {
    ALPHABET[(value & 0x3f) as usize] as char
}

/// Encodes a SHA-256 digest as the 43-character hash tail: the 256 digest
/// bits plus two zero bits, six bits per character, most significant first.
pub fn encode_hash_tail(digest: &[u8]) -> Result<String, CodecError> {
    if digest.len() != 32 {
        return Err(CodecError::DigestLength(digest.len()));
    }
    let mut out = String::with_capacity(HASH_PART_LEN);
    let mut acc: u32 = 0;
    let mut bits = 0u32;
    for &byte in digest {
        acc = (acc << 8) | byte as u32;
        bits += 8;
        while bits >= 6 {
            bits -= 6;
            out.push(base64_char(((acc >> bits) & 0x3f) as u8));
        }
    }
    // 256 = 42 * 6 + 4: the last four bits are padded with two zero bits.
    debug_assert_eq!(bits, 4);
    out.push(base64_char(((acc << 2) & 0x3f) as u8));
    Ok(out)
}

/// Decodes a Base64 string into its bit string (one `bool` per bit).
pub fn decode_bits(text: &str) -> Result<Vec<bool>, CodecError> {
    let mut bits = Vec::with_capacity(text.len() * 6);
    for c in text.chars() {
        let v = base64_value(c).ok_or(CodecError::NotBase64(c))?;
        bits.extend((0..6).rev().map(|i| (v >> i) & 1 == 1));
    }
    Ok(bits)
}

/// Inverse of [`encode_hash_tail`]. Fails unless the input is 43 Base64
/// characters whose final two bits are zero.
pub fn decode_hash_tail(tail: &str) -> Result<[u8; 32], CodecError> {
    check_hash_part(tail).map_err(|reason| CodecError::MalformedCode {
        code: tail.to_string(),
        reason,
    })?;
    let bits = decode_bits(tail)?;
    let mut digest = [0u8; 32];
    for (i, chunk) in bits[..256].chunks(8).enumerate() {
        digest[i] = chunk.iter().fold(0u8, |b, &bit| (b << 1) | bit as u8);
    }
    Ok(digest)
}

/// A module identifier: content type character plus version character.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum ModuleId {
    /// Byte content of files.
    FA,
    /// RDF content, any number of named graphs.
    RA,
    /// RDF content, a single graph named by the trusty URI itself.
    RB,
}

impl ModuleId {
    pub const ALL: [ModuleId; 3] = [ModuleId::FA, ModuleId::RA, ModuleId::RB];

    pub fn as_str(self) -> &'static str {
        match self {
            ModuleId::FA => "FA",
            ModuleId::RA => "RA",
            ModuleId::RB => "RB",
        }
    }

    pub fn type_char(self) -> char {
        self.as_str().as_bytes()[0] as char
    }

    pub fn version_char(self) -> char {
        self.as_str().as_bytes()[1] as char
    }

    /// Length of the data part this module produces.
    pub fn data_part_len(self) -> usize {
        HASH_PART_LEN
    }

    pub fn is_rdf(self) -> bool {
        matches!(self, ModuleId::RA | ModuleId::RB)
    }
}

impl fmt::Display for ModuleId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for ModuleId {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "FA" => Ok(ModuleId::FA),
            "RA" => Ok(ModuleId::RA),
            "RB" => Ok(ModuleId::RB),
            other => Err(format!("unknown module identifier {other:?}")),
        }
    }
}

impl Serialize for ModuleId {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(self.as_str())
    }
}

/// Why a string is not a potential trusty URI.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "reason", rename_all = "kebab-case")]
pub enum NotPotential {
    /// Fewer than 25 trailing Base64 characters.
    NoTail { tail_len: usize },
    /// The module identifier is not a defined module.
    UnknownModule { module: String },
    /// The data part length does not match the module.
    BadLength { module: ModuleId, data_len: usize },
    /// The two padding bits after the digest are not zero.
    NonZeroPadding,
}

impl fmt::Display for NotPotential {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            NotPotential::NoTail { tail_len } => {
                write!(f, "only {tail_len} trailing Base64 characters (need at least {MIN_TAIL_LEN})")
            }
            NotPotential::UnknownModule { module } => write!(f, "unknown module {module:?}"),
            NotPotential::BadLength { module, data_len } => write!(
                f,
                "data part of {data_len} characters does not fit module {module} ({} expected)",
                module.data_part_len()
            ),
            NotPotential::NonZeroPadding => f.write_str("padding bits of the hash part are not zero"),
        }
    }
}

fn check_hash_part(hash: &str) -> Result<(), NotPotential> {
    let last = hash.chars().last().and_then(base64_value);
    match last {
        Some(v) if hash.len() == HASH_PART_LEN && v & 0b11 == 0 => Ok(()),
        Some(_) if hash.len() == HASH_PART_LEN => Err(NotPotential::NonZeroPadding),
        _ => Err(NotPotential::BadLength {
            module: ModuleId::FA,
            data_len: hash.len(),
        }),
    }
}

/// A well-formed artifact code of a defined module.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct ArtifactCode {
    module: ModuleId,
    hash: String,
}

impl ArtifactCode {
    /// Builds a code from a module and a 43-character hash part.
    pub fn new(module: ModuleId, hash_part: impl Into<String>) -> Result<Self, CodecError> {
        let hash = hash_part.into();
        Self::parse(&format!("{module}{hash}"))
    }

    /// Builds the code for a raw SHA-256 digest.
    pub fn from_digest(module: ModuleId, digest: &[u8]) -> Result<Self, CodecError> {
        Ok(ArtifactCode {
            module,
            hash: encode_hash_tail(digest)?,
        })
    }

    /// Parses a complete artifact code (module identifier and data part).
    pub fn parse(code: &str) -> Result<Self, CodecError> {
        classify_tail(code).map_err(|reason| CodecError::MalformedCode {
            code: code.to_string(),
            reason,
        })
    }

    pub fn module(&self) -> ModuleId {
        self.module
    }

    /// The data part; identical to the hash part for the defined modules.
    pub fn data_part(&self) -> &str {
        &self.hash
    }

    pub fn hash_part(&self) -> &str {
        &self.hash
    }

    /// Returns the code with its module identifier swapped. Only RB to RA
    /// preserves verification.
    pub fn transfer(&self, target: ModuleId) -> Result<Self, CodecError> {
        if self.module == target {
            return Ok(self.clone());
        }
        match (self.module, target) {
            (ModuleId::RB, ModuleId::RA) => Ok(ArtifactCode {
                module: target,
                hash: self.hash.clone(),
            }),
            (from, to) => Err(CodecError::NotTransferable { from, to }),
        }
    }
}

impl fmt::Display for ArtifactCode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}{}", self.module, self.hash)
    }
}

impl FromStr for ArtifactCode {
    type Err = CodecError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Self::parse(s)
    }
}

impl Serialize for ArtifactCode {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

/// Swaps the module identifier of `code`; see [`ArtifactCode::transfer`].
pub fn transfer_module(code: &ArtifactCode, target: ModuleId) -> Result<ArtifactCode, CodecError> {
    code.transfer(target)
}

// `tail` is a complete trailing Base64 run.
fn classify_tail(tail: &str) -> Result<ArtifactCode, NotPotential> {
    if tail.len() < MIN_TAIL_LEN || !tail.chars().all(is_base64_char) {
        return Err(NotPotential::NoTail {
            tail_len: tail.chars().rev().take_while(|&c| is_base64_char(c)).count(),
        });
    }
    let (module, data) = tail.split_at(2);
    let module = module.parse::<ModuleId>().map_err(|_| NotPotential::UnknownModule {
        module: module.to_string(),
    })?;
    if data.len() != module.data_part_len() {
        return Err(NotPotential::BadLength {
            module,
            data_len: data.len(),
        });
    }
    check_hash_part(data)?;
    Ok(ArtifactCode {
        module,
        hash: data.to_string(),
    })
}

/// Index where the trailing Base64 run of `uri` starts.
fn tail_start(uri: &str) -> usize {
    uri.char_indices()
        .rev()
        .find(|&(_, c)| !is_base64_char(c))
        .map(|(i, c)| i + c.len_utf8())
        .unwrap_or(0)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "classification", rename_all = "kebab-case")]
pub enum Classification {
    NotPotential(NotPotential),
    Potential { code: ArtifactCode },
    Verified { code: ArtifactCode },
}

/// A URI together with its trusty URI classification.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct TrustyUriCandidate {
    pub uri: String,
    #[serde(flatten)]
    pub classification: Classification,
}

impl TrustyUriCandidate {
    pub fn code(&self) -> Option<&ArtifactCode> {
        match &self.classification {
            Classification::Potential { code } | Classification::Verified { code } => Some(code),
            Classification::NotPotential(_) => None,
        }
    }

    pub fn is_potential(&self) -> bool {
        self.code().is_some()
    }

    /// The URI with the artifact code removed (everything before the tail).
    pub fn prefix(&self) -> &str {
        match self.code() {
            Some(code) => &self.uri[..self.uri.len() - code.to_string().len()],
            None => &self.uri,
        }
    }

    /// Promotes a potential candidate after its content was verified.
    pub fn into_verified(self) -> Self {
        let classification = match self.classification {
            Classification::Potential { code } => Classification::Verified { code },
            other => other,
        };
        TrustyUriCandidate { uri: self.uri, classification }
    }
}

/// Classifies `uri` by its trailing Base64 run.
pub fn extract_artifact_code(uri: &str) -> TrustyUriCandidate {
    let tail = &uri[tail_start(uri)..];
    let classification = match classify_tail(tail) {
        Ok(code) => Classification::Potential { code },
        Err(reason) => Classification::NotPotential(reason),
    };
    TrustyUriCandidate {
        uri: uri.to_string(),
        classification,
    }
}

const MAX_STRIPPED_EXTENSIONS: usize = 3;
const MAX_EXTENSION_LEN: usize = 10;

/// Removes up to three trailing file extensions (`.nq`, `.trig.gz`, ...)
/// so that the result ends in an artifact code.
pub fn strip_extension(name: &str) -> Result<&str, CodecError> {
    let mut current = name;
    for _ in 0..=MAX_STRIPPED_EXTENSIONS {
        if extract_artifact_code(current).is_potential() {
            return Ok(current);
        }
        let Some(dot) = current.rfind('.') else { break };
        let ext = &current[dot + 1..];
        if ext.is_empty()
            || ext.len() > MAX_EXTENSION_LEN
            || !ext.chars().all(|c| c.is_ascii_alphanumeric())
        {
            break;
        }
        current = &current[..dot];
    }
    Err(CodecError::NotTrusty(name.to_string()))
}

/// The separator needed between `base` and an artifact code: a dot if
/// `base` ends in a Base64 character, nothing otherwise.
pub fn code_delimiter(base: &str) -> &'static str {
    match base.chars().last() {
        Some(c) if is_base64_char(c) => ".",
        _ => "",
    }
}

/// Appends `code` to `base`, inserting a dot when needed.
pub fn append_artifact_code(base: &str, code: &ArtifactCode) -> String {
    format!("{base}{}{code}", code_delimiter(base))
}

/// Renders a trusty URI as a Named Information (ni) URI.
pub fn to_ni_uri(
    trusty_uri: &str,
    authority: Option<&str>,
    include_module: bool,
) -> Result<String, CodecError> {
    let candidate = extract_artifact_code(trusty_uri);
    let code = candidate
        .code()
        .ok_or_else(|| CodecError::NotTrusty(trusty_uri.to_string()))?;
    let mut ni = format!("ni://{}/sha-256;{}", authority.unwrap_or(""), code.hash_part());
    if include_module {
        ni.push_str("?module=");
        ni.push_str(code.module().as_str());
    }
    Ok(ni)
}
