//! Canonical ordering, serialization and hashing of preprocessed quads.

use std::cmp::Ordering;
use std::fmt;

use sha2::{Digest, Sha256};
use thiserror::Error;

use crate::codec::encode_hash_tail;
use crate::rdf::{GraphName, Literal, LiteralKind, Quad, Term};

/// Object of a preprocessed quad.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum PreObject {
    Iri(String),
    Literal { label: String, kind: LiteralKind },
}

/// A blank-free quad whose IRIs have the artifact code (or the transform
/// placeholder) replaced by a single space. The default graph is `""`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct PreprocessedQuad {
    pub graph: String,
    pub subject: String,
    pub predicate: String,
    pub object: PreObject,
}

impl PreprocessedQuad {
    /// Builds the quad, replacing every occurrence of `code` in its IRIs.
    /// Returns `None` if a blank node is present.
    pub fn from_quad(quad: &Quad, code: &str) -> Option<Self> {
        let map = |iri: &str| iri.replace(code, " ");
        let subject = match &quad.subject {
            Term::Iri(iri) => map(iri),
            _ => return None,
        };
        let object = match &quad.object {
            Term::Iri(iri) => PreObject::Iri(map(iri)),
            Term::Literal(lit) => PreObject::Literal {
                label: lit.lexical.clone(),
                kind: match &lit.kind {
                    LiteralKind::Lang(tag) => LiteralKind::Lang(tag.to_ascii_lowercase()),
                    typed => typed.clone(),
                },
            },
            Term::Blank(_) => return None,
        };
        Some(PreprocessedQuad {
            graph: map(quad.graph.as_str()),
            subject,
            predicate: map(&quad.predicate),
            object,
        })
    }

    /// Maps the IRIs with `f` to reconstruct a quad.
    pub fn to_quad(&self, f: impl Fn(&str) -> String) -> Quad {
        let object = match &self.object {
            PreObject::Iri(iri) => Term::Iri(f(iri)),
            PreObject::Literal { label, kind } => Term::Literal(Literal {
                lexical: label.clone(),
                kind: kind.clone(),
            }),
        };
        Quad {
            graph: GraphName::from_sentinel(f(&self.graph)),
            subject: Term::Iri(f(&self.subject)),
            predicate: f(&self.predicate),
            object,
        }
    }
}

impl Ord for PreprocessedQuad {
    fn cmp(&self, other: &Self) -> Ordering {
        compare_quads(self, other)
    }
}

impl PartialOrd for PreprocessedQuad {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// Total order over preprocessed quads. The first rule that distinguishes
/// the two quads decides:
///
/// 1. graph, 2. subject, 3. predicate;
/// 4. IRI objects before literal objects;
/// 5. object IRI;
/// 6. literal label;
/// 7. a literal without datatype (language-tagged) before one with;
/// 8. a literal without language tag before one with;
/// 9. datatype IRI or language tag.
///
/// Strings compare by code point, a proper prefix first. Since plain
/// literals carry `xsd:string`, rule 7 separates language-tagged from
/// typed literals and rule 8 never fires.
pub fn compare_quads(a: &PreprocessedQuad, b: &PreprocessedQuad) -> Ordering {
    a.graph
        .cmp(&b.graph)
        .then_with(|| a.subject.cmp(&b.subject))
        .then_with(|| a.predicate.cmp(&b.predicate))
        .then_with(|| compare_objects(&a.object, &b.object))
}

fn compare_objects(a: &PreObject, b: &PreObject) -> Ordering {
    match (a, b) {
        (PreObject::Iri(x), PreObject::Iri(y)) => x.cmp(y),
        (PreObject::Iri(_), PreObject::Literal { .. }) => Ordering::Less,
        (PreObject::Literal { .. }, PreObject::Iri(_)) => Ordering::Greater,
        (PreObject::Literal { label: la, kind: ka }, PreObject::Literal { label: lb, kind: kb }) => {
            la.cmp(lb).then_with(|| match (ka, kb) {
                (LiteralKind::Lang(_), LiteralKind::Typed(_)) => Ordering::Less,
                (LiteralKind::Typed(_), LiteralKind::Lang(_)) => Ordering::Greater,
                (LiteralKind::Typed(x), LiteralKind::Typed(y)) | (LiteralKind::Lang(x), LiteralKind::Lang(y)) => {
                    x.cmp(y)
                }
            })
        }
    }
}

/// The four newline-terminated lines that one quad contributes to the
/// hash input.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct SerializedStatement(String);

impl SerializedStatement {
    pub fn as_str(&self) -> &str {
        &self.0
    }

    pub fn into_string(self) -> String {
        self.0
    }
}

impl fmt::Display for SerializedStatement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

fn push_escaped(out: &mut String, label: &str) {
    for c in label.chars() {
        match c {
            '\\' => out.push_str("\\\\"),
            '\n' => out.push_str("\\n"),
            c => out.push(c),
        }
    }
}

/// Appends the serialization of `q` to `out`.
pub fn push_statement(out: &mut String, q: &PreprocessedQuad) {
    for part in [&q.graph, &q.subject, &q.predicate] {
        out.push_str(part);
        out.push('\n');
    }
    match &q.object {
        PreObject::Iri(iri) => out.push_str(iri),
        PreObject::Literal { label, kind } => {
            match kind {
                LiteralKind::Typed(dt) => {
                    out.push('^');
                    out.push_str(dt);
                }
                LiteralKind::Lang(tag) => {
                    out.push('@');
                    out.push_str(&tag.to_ascii_lowercase());
                }
            }
            out.push(' ');
            push_escaped(out, label);
        }
    }
    out.push('\n');
}

pub fn serialize_statement(q: &PreprocessedQuad) -> SerializedStatement {
    let mut s = String::new();
    push_statement(&mut s, q);
    SerializedStatement(s)
}

/// Incremental SHA-256 over serialized statements fed in sorted order.
#[derive(Default)]
pub struct DatasetHasher {
    sha: Sha256,
    buf: String,
    count: u64,
}

impl DatasetHasher {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn push(&mut self, q: &PreprocessedQuad) {
        self.buf.clear();
        push_statement(&mut self.buf, q);
        self.sha.update(self.buf.as_bytes());
        self.count += 1;
    }

    /// Number of statements hashed so far.
    pub fn count(&self) -> u64 {
        self.count
    }

    /// The 43-character hash tail.
    pub fn finish(self) -> String {
        encode_hash_tail(&self.sha.finalize()).expect("SHA-256 digests are 32 bytes")
    }
}

/// Sorts in place by [`compare_quads`] and removes duplicates; an RDF
/// dataset is a set.
pub fn sort_dedup(quads: &mut Vec<PreprocessedQuad>) {
    quads.sort_unstable_by(compare_quads);
    quads.dedup();
}

/// Hash tail of a blank-free, preprocessed dataset.
pub fn hash_preprocessed_dataset(quads: impl IntoIterator<Item = PreprocessedQuad>) -> String {
    let mut quads: Vec<_> = quads.into_iter().collect();
    sort_dedup(&mut quads);
    let mut hasher = DatasetHasher::new();
    for q in &quads {
        hasher.push(q);
    }
    hasher.finish()
}

// Sort keys. Strings are written with 0x00 escaped as 0x00 0xFF and
// terminated by 0x00 0x01, so bytewise order of keys equals
// `compare_quads` order.

const TERMINATOR: [u8; 2] = [0x00, 0x01];
const TAG_IRI: u8 = 1;
const TAG_LITERAL: u8 = 2;
const KIND_LANG: u8 = 1;
const KIND_TYPED: u8 = 2;

#[derive(Debug, Error, PartialEq, Eq)]
#[error("corrupt sort key: {0}")]
pub struct SortKeyError(&'static str);

fn push_key_str(out: &mut Vec<u8>, s: &str) {
    for &b in s.as_bytes() {
        out.push(b);
        if b == 0 {
            out.push(0xff);
        }
    }
    out.extend_from_slice(&TERMINATOR);
}

/// Order-preserving byte encoding of a preprocessed quad.
pub fn sort_key(q: &PreprocessedQuad) -> Vec<u8> {
    let mut out = Vec::with_capacity(q.graph.len() + q.subject.len() + q.predicate.len() + 64);
    push_key_str(&mut out, &q.graph);
    push_key_str(&mut out, &q.subject);
    push_key_str(&mut out, &q.predicate);
    match &q.object {
        PreObject::Iri(iri) => {
            out.push(TAG_IRI);
            push_key_str(&mut out, iri);
        }
        PreObject::Literal { label, kind } => {
            out.push(TAG_LITERAL);
            push_key_str(&mut out, label);
            let (tag, s) = match kind {
                LiteralKind::Lang(l) => (KIND_LANG, l),
                LiteralKind::Typed(d) => (KIND_TYPED, d),
            };
            out.push(tag);
            push_key_str(&mut out, s);
        }
    }
    out
}

struct KeyReader<'a> {
    bytes: &'a [u8],
    pos: usize,
}

impl KeyReader<'_> {
    fn byte(&mut self) -> Result<u8, SortKeyError> {
        let b = *self.bytes.get(self.pos).ok_or(SortKeyError("truncated"))?;
        self.pos += 1;
        Ok(b)
    }

    fn string(&mut self) -> Result<String, SortKeyError> {
        let mut raw = Vec::new();
        loop {
            match self.byte()? {
                0 => match self.byte()? {
                    0x01 => break,
                    0xff => raw.push(0),
                    _ => return Err(SortKeyError("bad escape")),
                },
                b => raw.push(b),
            }
        }
        String::from_utf8(raw).map_err(|_| SortKeyError("invalid UTF-8"))
    }
}

/// Inverse of [`sort_key`].
pub fn from_sort_key(bytes: &[u8]) -> Result<PreprocessedQuad, SortKeyError> {
    let mut r = KeyReader { bytes, pos: 0 };
    let graph = r.string()?;
    let subject = r.string()?;
    let predicate = r.string()?;
    let object = match r.byte()? {
        TAG_IRI => PreObject::Iri(r.string()?),
        TAG_LITERAL => {
            let label = r.string()?;
            let kind = match r.byte()? {
                KIND_LANG => LiteralKind::Lang(r.string()?),
                KIND_TYPED => LiteralKind::Typed(r.string()?),
                _ => return Err(SortKeyError("bad literal kind")),
            };
            PreObject::Literal { label, kind }
        }
        _ => return Err(SortKeyError("bad object tag")),
    };
    if r.pos != bytes.len() {
        return Err(SortKeyError("trailing bytes"));
    }
    Ok(PreprocessedQuad {
        graph,
        subject,
        predicate,
        object,
    })
}
