use std::fmt;
use std::path::PathBuf;

use serde::Serialize;
use thiserror::Error;

use crate::avm::{AvmError, Clash};
use crate::gorn::GornAddress;

/// Faults: malformed input, inconsistent resources, violated preconditions.
/// Unification failures are not faults and never appear here.
#[derive(Debug, Error)]
pub enum Error {
    #[error(transparent)]
    Avm(#[from] AvmError),
    #[error("tree `{tree}` has no node at address {address}")]
    DanglingAddress { tree: String, address: GornAddress },
    #[error("node {address} of `{tree}` is not a substitution node")]
    NotSubstitutionNode { tree: String, address: GornAddress },
    #[error("node {address} of `{tree}` does not accept adjunction")]
    NotAdjoinable { tree: String, address: GornAddress },
    #[error("node {address} of `{tree}` already received an adjunction")]
    AlreadyAdjoined { tree: String, address: GornAddress },
    #[error(
        "category mismatch at {address} of `{tree}`: node is {expected}, tree root is {found}"
    )]
    CategoryMismatch {
        tree: String,
        address: GornAddress,
        expected: String,
        found: String,
    },
    #[error("`{tree}` is {found}, expected {expected}")]
    TreeKindMismatch {
        tree: String,
        expected: &'static str,
        found: &'static str,
    },
    #[error("unfilled substitution slot {address} in `{tree}` anchored by `{lemma}`")]
    UnfilledSlot {
        tree: String,
        lemma: String,
        address: GornAddress,
    },
    #[error("empty input")]
    EmptyInput,
    #[error("unknown token `{token}` at position {position}")]
    UnknownToken { token: String, position: usize },
    #[error("unknown tree `{0}`")]
    UnknownTree(String),
    #[error("tree `{tree}` is not selected by lemma `{lemma}`")]
    TreeNotSelected { lemma: String, tree: String },
    #[error("no lexical entry for lemma `{lemma}` anchoring tree `{tree}`")]
    MissingEntry { lemma: String, tree: String },
    #[error("anchoring `{lemma}` in `{tree}` clashes at {address}: {clash}")]
    AnchorClash {
        lemma: String,
        tree: String,
        address: GornAddress,
        clash: Box<Clash>,
    },
    #[error("lemma `{0}` does not occur in any transfer concept")]
    UnknownLemma(String),
    #[error("lemma `{0}` has an empty candidate set")]
    EmptyCandidates(String),
    #[error("no tree link for source tree `{0}`")]
    MissingTreeLink(String),
    #[error("tree link for `{tree}` does not map address {address}")]
    MissingAddressLink { tree: String, address: GornAddress },
    #[error("source tree `{tree}` is dropped in the target but {reason}")]
    IllegalDeletion { tree: String, reason: &'static str },
    #[error("{size} candidate derivations exceed the expansion cap of {cap}; narrow the transfer table's concept sets")]
    ExpansionCap { size: u128, cap: usize },
    #[error("derivation size bound {0} exceeded during enumeration")]
    BoundExceeded(usize),
    #[error("language mismatch: expected `{expected}`, found `{found}`")]
    LanguageMismatch { expected: String, found: String },
    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        source: std::io::Error,
    },
    #[error("{path}: {source}")]
    Json {
        path: PathBuf,
        source: serde_json::Error,
    },
    #[error("{0}")]
    Format(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;

/// A resource well-formedness problem. Validation returns these as data.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Violation {
    pub kind: ViolationKind,
    /// Resource-relative location, e.g. `tree en_det @ 0.2` or `lexicon huapin`.
    pub location: String,
    pub detail: String,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum ViolationKind {
    MissingAnchor,
    MultipleAnchors,
    MissingFoot,
    MultipleFeet,
    UnexpectedFoot,
    FootCategory,
    LeafWithChildren,
    EmptyInterior,
    MissingWord,
    BadFeatures,
    DuplicateTree,
    UnknownTree,
    DanglingAddress,
    UndeclaredFeature,
    UndeclaredAtom,
    MissingSelectional,
    AnchorClash,
    Ontology,
    UnknownLemma,
    LinkKind,
    LanguageMismatch,
    MissingGrammar,
}

impl ViolationKind {
    pub fn class(self) -> &'static str {
        use ViolationKind::*;
        match self {
            MissingAnchor => "missing-anchor",
            MultipleAnchors => "multiple-anchors",
            MissingFoot => "missing-foot",
            MultipleFeet => "multiple-feet",
            UnexpectedFoot => "unexpected-foot",
            FootCategory => "foot-category",
            LeafWithChildren => "leaf-with-children",
            EmptyInterior => "empty-interior",
            MissingWord => "missing-word",
            BadFeatures => "bad-features",
            DuplicateTree => "duplicate-tree",
            UnknownTree => "unknown-tree",
            DanglingAddress => "dangling-address",
            UndeclaredFeature => "undeclared-feature",
            UndeclaredAtom => "undeclared-atom",
            MissingSelectional => "missing-selectional",
            AnchorClash => "anchor-clash",
            Ontology => "ontology",
            UnknownLemma => "unknown-lemma",
            LinkKind => "link-kind",
            LanguageMismatch => "language-mismatch",
            MissingGrammar => "missing-grammar",
        }
    }
}

impl Violation {
    pub fn new(
        kind: ViolationKind,
        location: impl Into<String>,
        detail: impl Into<String>,
    ) -> Self {
        Violation {
            kind,
            location: location.into(),
            detail: detail.into(),
        }
    }
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "[{}] {}: {}",
            self.kind.class(),
            self.location,
            self.detail
        )
    }
}
