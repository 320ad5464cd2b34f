//! Synchronous lexicalized tree adjoining grammar engine with feature
//! unification, concept-keyed lexical transfer and constraint-filtered
//! generation.

pub mod avm;
pub mod corpus;
pub mod derivation;
pub mod derived;
pub mod error;
pub mod generator;
pub mod gorn;
pub mod grammar;
pub mod lexicon;
pub mod parser;
pub mod resources;
pub mod transfer;

pub use avm::{unify, Bindings, Clash, FeatureStructure, FeatureValue, Unifier};
pub use corpus::{run_corpus, CorpusReport};
pub use derivation::{DerivationTree, Operation};
pub use derived::{Failure, Schedule, Stage};
pub use error::{Error, Result, Violation, ViolationKind};
pub use generator::{
    realize, translate, CandidateResult, OutcomeClass, Status, TranslateOptions, Translation,
};
pub use gorn::GornAddress;
pub use grammar::{ElementaryTree, Grammar};
pub use lexicon::{LexicalEntry, Lexicon, Ontology};
pub use parser::{parse, tokenize, Parse, ParseOptions};
pub use resources::LanguageResources;
pub use transfer::{TargetSkeleton, TransferTable};
