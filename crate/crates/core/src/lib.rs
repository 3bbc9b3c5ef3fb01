//! Trusty URIs: identifiers that end in a cryptographic hash of the
//! content they name.
//!
//! ```text
//! http://example.org/r1.RA5AbXdpz5DcaYXCh9l3eI9ruBosiL5XDU3rxBbBaUO70
//!                       ^^ module
//!                         ^^^^^^^^^^^^^^^^^^^^^^^^^^^^^^^^^^^^^^^^^^^ SHA-256
//! ```
//!
//! Three modules are defined:
//!
//! * `FA` hashes the raw bytes of a file ([`module_fa`]);
//! * `RA` hashes an RDF dataset independent of its serialization, any
//!   number of named graphs ([`module_r`]);
//! * `RB` is `RA` restricted to a single graph named by the trusty URI.
//!
//! RDF artifacts may refer to themselves: [`module_r::transform_rdf`]
//! inserts the artifact code into the content it is computed from, and
//! skolemizes blank nodes on the way. [`large`] does the same for inputs
//! that do not fit in memory, sorting through temporary files.

pub mod codec;
pub mod extsort;
pub mod large;
pub mod module_fa;
pub mod module_r;
pub mod rdf;
pub mod report;

pub use codec::{
    append_artifact_code, extract_artifact_code, strip_extension, to_ni_uri, transfer_module, ArtifactCode,
    Classification, CodecError, ModuleId, TrustyUriCandidate,
};
pub use module_r::{check_rdf, transform_rdf, CheckTarget, TransformError};
pub use rdf::{QuadDocument, RdfFormat};
pub use report::{CheckReport, Verdict};
