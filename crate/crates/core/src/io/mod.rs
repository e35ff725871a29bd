//! Text documents, random corpora and manifests.

mod manifest;
mod random;
mod text;

pub use manifest::{CorpusManifest, DecisionRecord, ManifestDocument, ManifestError, Verdict};
pub use random::{gen_random, random_lattice, random_unimodular, RandomError, MAX_RANDOM_GENUS};
pub use text::{
    emit_descended, emit_document, emit_lattice, parse_documents, parse_lattice, DescendedDocument, Document,
    DocumentError, LatticeDocument, ParseError, parse_field_spec,
};
