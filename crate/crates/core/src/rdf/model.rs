use std::fmt;

pub const XSD_STRING: &str = "http://www.w3.org/2001/XMLSchema#string";
pub const XSD_INTEGER: &str = "http://www.w3.org/2001/XMLSchema#integer";
pub const XSD_DECIMAL: &str = "http://www.w3.org/2001/XMLSchema#decimal";
pub const XSD_DOUBLE: &str = "http://www.w3.org/2001/XMLSchema#double";
pub const XSD_BOOLEAN: &str = "http://www.w3.org/2001/XMLSchema#boolean";
pub const RDF_TYPE: &str = "http://www.w3.org/1999/02/22-rdf-syntax-ns#type";

/// Datatype or language tag of a literal. Plain literals carry `xsd:string`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum LiteralKind {
    Typed(String),
    /// Lowercased language tag.
    Lang(String),
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Literal {
    pub lexical: String,
    pub kind: LiteralKind,
}

impl Literal {
    pub fn simple(lexical: impl Into<String>) -> Self {
        Literal {
            lexical: lexical.into(),
            kind: LiteralKind::Typed(XSD_STRING.to_string()),
        }
    }

    pub fn typed(lexical: impl Into<String>, datatype: impl Into<String>) -> Self {
        Literal {
            lexical: lexical.into(),
            kind: LiteralKind::Typed(datatype.into()),
        }
    }

    pub fn lang(lexical: impl Into<String>, tag: &str) -> Self {
        Literal {
            lexical: lexical.into(),
            kind: LiteralKind::Lang(tag.to_ascii_lowercase()),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Term {
    Iri(String),
    Blank(String),
    Literal(Literal),
}

impl Term {
    pub fn iri(iri: impl Into<String>) -> Self {
        Term::Iri(iri.into())
    }

    pub fn as_iri(&self) -> Option<&str> {
        match self {
            Term::Iri(iri) => Some(iri),
            _ => None,
        }
    }

    pub fn is_blank(&self) -> bool {
        matches!(self, Term::Blank(_))
    }
}

/// Graph label of a quad. The default graph hashes as the empty string.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub enum GraphName {
    #[default]
    Default,
    Iri(String),
}

impl GraphName {
    pub fn as_str(&self) -> &str {
        match self {
            GraphName::Default => "",
            GraphName::Iri(iri) => iri,
        }
    }

    pub fn from_sentinel(s: impl Into<String>) -> Self {
        let s = s.into();
        if s.is_empty() {
            GraphName::Default
        } else {
            GraphName::Iri(s)
        }
    }
}

/// One RDF statement. `subject` is an IRI or blank node.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Quad {
    pub graph: GraphName,
    pub subject: Term,
    pub predicate: String,
    pub object: Term,
}

impl Quad {
    pub fn new(graph: GraphName, subject: Term, predicate: impl Into<String>, object: Term) -> Self {
        Quad {
            graph,
            subject,
            predicate: predicate.into(),
            object,
        }
    }

    pub fn has_blank(&self) -> bool {
        self.subject.is_blank() || self.object.is_blank()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum RdfFormat {
    NQuads,
    TriG,
}

impl RdfFormat {
    /// Picks the format from a file extension; `None` if unrecognized.
    pub fn from_extension(ext: &str) -> Option<Self> {
        match ext.to_ascii_lowercase().as_str() {
            "nq" | "nquads" | "nt" => Some(RdfFormat::NQuads),
            "trig" => Some(RdfFormat::TriG),
            _ => None,
        }
    }

    pub fn extension(self) -> &'static str {
        match self {
            RdfFormat::NQuads => "nq",
            RdfFormat::TriG => "trig",
        }
    }
}

impl fmt::Display for RdfFormat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.extension())
    }
}

impl std::str::FromStr for RdfFormat {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        RdfFormat::from_extension(s).ok_or_else(|| format!("unsupported RDF format {s:?}"))
    }
}

/// Quads in document order.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct QuadDocument {
    pub quads: Vec<Quad>,
    pub format: RdfFormat,
}

impl QuadDocument {
    pub fn new(quads: Vec<Quad>, format: RdfFormat) -> Self {
        QuadDocument { quads, format }
    }

    pub fn len(&self) -> usize {
        self.quads.len()
    }

    pub fn is_empty(&self) -> bool {
        self.quads.is_empty()
    }
}
