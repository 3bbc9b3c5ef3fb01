//! Modules RA and RB: trusty URIs for RDF datasets, independent of the
//! serialization format.
//!
//! Hashing works on *preprocessed* quads: every occurrence of the artifact
//! code inside an IRI is replaced by one space, which makes
//! self-references possible. Blank nodes must be skolemized first, which
//! [`transform_rdf`] does while it inserts the artifact code.

pub mod canon;

use std::collections::HashMap;
use std::fs::File;
use std::io::{self, BufWriter};
use std::path::{Path, PathBuf};

use thiserror::Error;

use crate::codec::{code_delimiter, is_base64_char, ArtifactCode, CodecError, ModuleId, TrustyUriCandidate};
use crate::rdf::{self, nquads::NQuadsWriter, LiteralKind, ParseError, Quad, QuadDocument, RdfFormat, Term};
use crate::report::CheckReport;

pub use canon::{
    compare_quads, hash_preprocessed_dataset, serialize_statement, sort_dedup, DatasetHasher, PreObject,
    PreprocessedQuad, SerializedStatement,
};

/// The placeholder for the artifact code while it is still unknown. It
/// cannot occur in a parsed IRI and hashes exactly like the space that
/// replaces the code during verification.
pub const PLACEHOLDER: char = ' ';

#[derive(Debug, Error)]
pub enum TransformError {
    #[error("module {0} does not apply to RDF")]
    NotRdfModule(ModuleId),
    #[error("invalid base URI {0:?}")]
    BadBaseUri(String),
    #[error("IRI {0:?} contains whitespace")]
    InvalidIri(String),
    #[error("module RB constraint violated: {0}")]
    ModuleConstraint(String),
    #[error("literals cannot be subjects")]
    LiteralSubject,
    #[error(transparent)]
    Parse(#[from] ParseError),
    #[error(transparent)]
    Codec(#[from] CodecError),
    #[error(transparent)]
    Io(#[from] io::Error),
}

/// How a document is rewritten before hashing: the base URI, the
/// delimiter in front of the placeholder, and the numbering of blank nodes
/// in order of first appearance.
#[derive(Debug, Clone)]
pub struct TransformPlan {
    base_uri: String,
    delimiter: &'static str,
    blank_nodes: HashMap<String, usize>,
    module: ModuleId,
}

impl TransformPlan {
    pub fn new(base_uri: &str, module: ModuleId) -> Result<Self, TransformError> {
        if !module.is_rdf() {
            return Err(TransformError::NotRdfModule(module));
        }
        if base_uri.is_empty() || base_uri.chars().any(rdf::is_forbidden_iri_char) {
            return Err(TransformError::BadBaseUri(base_uri.to_string()));
        }
        Ok(TransformPlan {
            base_uri: base_uri.to_string(),
            delimiter: code_delimiter(base_uri),
            blank_nodes: HashMap::new(),
            module,
        })
    }

    pub fn module(&self) -> ModuleId {
        self.module
    }

    pub fn base_uri(&self) -> &str {
        &self.base_uri
    }

    /// The trusty URI with the placeholder in place of the code.
    pub fn placeholder_uri(&self) -> String {
        format!("{}{}{PLACEHOLDER}", self.base_uri, self.delimiter)
    }

    /// The final trusty URI for `code`.
    pub fn trusty_uri(&self, code: &ArtifactCode) -> String {
        format!("{}{}{code}", self.base_uri, self.delimiter)
    }

    /// Blank node labels and their 1-based suffix numbers.
    pub fn blank_nodes(&self) -> &HashMap<String, usize> {
        &self.blank_nodes
    }

    /// Rewrites the base URI and suffixed forms of it (`base#x`, `base/y`)
    /// to carry the placeholder. Other IRIs pass through unchanged.
    pub fn rewrite_iri(&self, iri: &str) -> Result<String, TransformError> {
        if iri.contains(PLACEHOLDER) {
            return Err(TransformError::InvalidIri(iri.to_string()));
        }
        match iri.strip_prefix(self.base_uri.as_str()) {
            Some(rest) if rest.chars().next().is_none_or(|c| !is_base64_char(c)) => {
                Ok(format!("{}{rest}", self.placeholder_uri()))
            }
            _ => Ok(iri.to_string()),
        }
    }

    fn skolem_iri(&mut self, label: &str) -> String {
        let next = self.blank_nodes.len() + 1;
        let n = *self.blank_nodes.entry(label.to_string()).or_insert(next);
        format!("{}#_{n}", self.placeholder_uri())
    }

    fn resource(&mut self, term: &Term) -> Result<String, TransformError> {
        match term {
            Term::Iri(iri) => self.rewrite_iri(iri),
            Term::Blank(label) => Ok(self.skolem_iri(label)),
            Term::Literal(_) => Err(TransformError::LiteralSubject),
        }
    }

    /// Skolemizes and rewrites one quad. Call in document order.
    pub fn preprocess(&mut self, quad: &Quad) -> Result<PreprocessedQuad, TransformError> {
        let graph = match &quad.graph {
            rdf::GraphName::Default => String::new(),
            rdf::GraphName::Iri(g) => self.rewrite_iri(g)?,
        };
        if self.module == ModuleId::RB && graph != self.placeholder_uri() {
            return Err(TransformError::ModuleConstraint(format!(
                "graph {:?} is not the base URI {:?}",
                quad.graph.as_str(),
                self.base_uri
            )));
        }
        let subject = self.resource(&quad.subject)?;
        let predicate = self.rewrite_iri(&quad.predicate)?;
        let object = match &quad.object {
            Term::Literal(lit) => PreObject::Literal {
                label: lit.lexical.clone(),
                kind: match &lit.kind {
                    LiteralKind::Lang(tag) => LiteralKind::Lang(tag.to_ascii_lowercase()),
                    typed => typed.clone(),
                },
            },
            other => PreObject::Iri(self.resource(other)?),
        };
        Ok(PreprocessedQuad {
            graph,
            subject,
            predicate,
            object,
        })
    }

    /// Replaces the placeholder by `code` in a preprocessed quad.
    pub fn finalize(&self, quad: &PreprocessedQuad, code: &ArtifactCode) -> Quad {
        let code = code.to_string();
        quad.to_quad(|iri| iri.replace(PLACEHOLDER, &code))
    }
}

/// Result of [`transform_rdf`]: the new trusty URI and the quads in sorted
/// order with the artifact code in place.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TransformOutput {
    pub uri: String,
    pub code: ArtifactCode,
    pub quads: Vec<Quad>,
}

impl TransformOutput {
    pub fn document(&self) -> QuadDocument {
        QuadDocument::new(self.quads.clone(), RdfFormat::NQuads)
    }

    /// Sorted canonical N-Quads.
    pub fn to_nquads(&self) -> Vec<u8> {
        let mut s = String::new();
        for q in &self.quads {
            rdf::nquads::push_quad(&mut s, q);
        }
        s.into_bytes()
    }
}

pub(crate) fn code_for(module: ModuleId, hash_tail: String) -> ArtifactCode {
    ArtifactCode::new(module, hash_tail).expect("hash tails are well-formed")
}

/// Turns `doc` into a trusty artifact under `base_uri`.
pub fn transform_rdf(doc: &QuadDocument, base_uri: &str, module: ModuleId) -> Result<TransformOutput, TransformError> {
    transform_quads(doc.quads.iter().cloned().map(Ok), base_uri, module)
}

/// Like [`transform_rdf`] over a stream of quads.
pub fn transform_quads<I>(quads: I, base_uri: &str, module: ModuleId) -> Result<TransformOutput, TransformError>
where
    I: IntoIterator<Item = Result<Quad, ParseError>>,
{
    let mut plan = TransformPlan::new(base_uri, module)?;
    let mut pre = Vec::new();
    for quad in quads {
        pre.push(plan.preprocess(&quad?)?);
    }
    sort_dedup(&mut pre);
    let mut hasher = DatasetHasher::new();
    for q in &pre {
        hasher.push(q);
    }
    let code = code_for(module, hasher.finish());
    let quads = pre.iter().map(|q| plan.finalize(q, &code)).collect();
    Ok(TransformOutput {
        uri: plan.trusty_uri(&code),
        code,
        quads,
    })
}

/// What a document is verified against: the artifact code and, when
/// known, the full trusty URI (needed for the exact RB graph check).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CheckTarget {
    pub code: ArtifactCode,
    pub uri: Option<String>,
}

impl CheckTarget {
    pub fn from_code(code: ArtifactCode) -> Self {
        CheckTarget { code, uri: None }
    }

    pub fn from_uri(uri: &str) -> Result<Self, CodecError> {
        let candidate = crate::codec::extract_artifact_code(uri);
        Self::from_candidate(&candidate).ok_or_else(|| CodecError::NotTrusty(uri.to_string()))
    }

    pub fn from_candidate(candidate: &TrustyUriCandidate) -> Option<Self> {
        candidate.code().map(|code| CheckTarget {
            code: code.clone(),
            uri: Some(candidate.uri.clone()),
        })
    }
}

/// Why a quad could not be preprocessed during verification.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Rejection {
    Error(String),
    Invalid(String),
}

impl Rejection {
    pub fn into_report(self, expected: &ArtifactCode) -> CheckReport {
        match self {
            Rejection::Error(m) => CheckReport::error(Some(expected.clone()), m),
            Rejection::Invalid(m) => CheckReport::invalid(Some(expected.clone()), m),
        }
    }
}

/// Verification-side preprocessing with the RB graph constraint.
#[derive(Debug, Clone)]
pub struct CheckPreprocessor {
    code: String,
    module: ModuleId,
    rb_graph: Option<String>,
    rb_graph_from_uri: bool,
}

impl CheckPreprocessor {
    pub fn new(target: &CheckTarget) -> Result<Self, Rejection> {
        let module = target.code.module();
        if !module.is_rdf() {
            return Err(Rejection::Error(format!("module {module} does not apply to RDF")));
        }
        let code = target.code.to_string();
        let rb_graph = match (&target.uri, module) {
            (Some(uri), ModuleId::RB) => Some(uri.replace(&code, " ")),
            _ => None,
        };
        Ok(CheckPreprocessor {
            rb_graph_from_uri: rb_graph.is_some(),
            code,
            module,
            rb_graph,
        })
    }

    pub fn apply(&mut self, quad: &Quad) -> Result<PreprocessedQuad, Rejection> {
        let pre = PreprocessedQuad::from_quad(quad, &self.code).ok_or_else(|| {
            Rejection::Error("blank nodes are not supported in trusty RDF; skolemize first".to_string())
        })?;
        if self.module == ModuleId::RB {
            match &self.rb_graph {
                Some(expected) if *expected != pre.graph => {
                    let wanted = if self.rb_graph_from_uri { "the trusty URI" } else { "a single graph" };
                    return Err(Rejection::Invalid(format!(
                        "module RB requires {wanted} as graph, found {:?}",
                        quad.graph.as_str()
                    )));
                }
                Some(_) => {}
                None => {
                    if !pre.graph.ends_with(' ') {
                        return Err(Rejection::Invalid(format!(
                            "module RB requires the graph to be the trusty URI, found {:?}",
                            quad.graph.as_str()
                        )));
                    }
                    self.rb_graph = Some(pre.graph.clone());
                }
            }
        }
        Ok(pre)
    }
}

/// Verifies `doc` against `target`.
pub fn check_rdf(doc: &QuadDocument, target: &CheckTarget) -> CheckReport {
    check_quads(doc.quads.iter().cloned().map(Ok), target)
}

/// Verifies a quad stream; parse errors yield an `error` verdict.
pub fn check_quads<I>(quads: I, target: &CheckTarget) -> CheckReport
where
    I: IntoIterator<Item = Result<Quad, ParseError>>,
{
    let expected = &target.code;
    let mut pre = match CheckPreprocessor::new(target) {
        Ok(p) => p,
        Err(r) => return r.into_report(expected),
    };
    let mut out = Vec::new();
    for quad in quads {
        let quad = match quad {
            Ok(q) => q,
            Err(e) => return CheckReport::error(Some(expected.clone()), format!("parse error: {e}")),
        };
        match pre.apply(&quad) {
            Ok(q) => out.push(q),
            Err(r) => return r.into_report(expected),
        }
    }
    let computed = code_for(expected.module(), hash_preprocessed_dataset(out));
    CheckReport::compare(expected.clone(), computed)
}

/// Path of the trusty file written for `input`: `<stem>.<code>.nq` in the
/// same directory.
pub fn trusty_rdf_path(input: &Path, code: &ArtifactCode) -> PathBuf {
    let stem = input.file_stem().and_then(|s| s.to_str()).unwrap_or("out");
    input.with_file_name(format!("{stem}.{code}.nq"))
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TransformedFile {
    pub path: PathBuf,
    pub uri: String,
    pub code: ArtifactCode,
}

/// Parses `input`, transforms it in memory and writes the trusty file
/// beside it.
pub fn transform_rdf_file(
    input: &Path,
    base_uri: &str,
    module: ModuleId,
    format: Option<RdfFormat>,
) -> Result<TransformedFile, TransformError> {
    let doc = rdf::parse_file(input, format)?;
    let out = transform_rdf(&doc, base_uri, module)?;
    let path = trusty_rdf_path(input, &out.code);
    let mut writer = NQuadsWriter::new(BufWriter::new(File::create(&path)?));
    for q in &out.quads {
        writer.write_quad(q)?;
    }
    writer.finish()?;
    Ok(TransformedFile {
        path,
        uri: out.uri,
        code: out.code,
    })
}

/// Loads `path` fully and verifies it against `target`.
pub fn check_rdf_file(path: &Path, target: &CheckTarget, format: Option<RdfFormat>) -> CheckReport {
    let format = format.or_else(|| rdf::format_for_path(path)).unwrap_or(RdfFormat::NQuads);
    match File::open(path) {
        Ok(f) => check_quads(rdf::quad_reader(io::BufReader::new(f), format), target),
        Err(e) => CheckReport::error(Some(target.code.clone()), format!("{}: {e}", path.display())),
    }
}
