//! Shared test support: fixture loading, reference implementations and
//! random input generators.
#![allow(dead_code)]

pub mod gen;
pub mod oracle;

use std::path::PathBuf;

use lextag_core::{LanguageResources, TransferTable};

pub fn fixture(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("../../fixtures")
        .join(name)
}

pub fn grammar(lang: &str) -> LanguageResources {
    LanguageResources::load(fixture(&format!("{lang}.json"))).expect("fixture grammar loads")
}

pub fn table(pair: &str) -> TransferTable {
    TransferTable::load(fixture(&format!("{pair}.json"))).expect("fixture table loads")
}

pub fn toks(s: &str) -> Vec<String> {
    s.split_whitespace().map(str::to_owned).collect()
}

/// Grammatical and ungrammatical sentences per fixture language.
pub const SENTENCES: &[(&str, &str)] = &[
    ("en", "John broke the vase"),
    ("en", "John broke the journey"),
    ("en", "John shattered the vase"),
    ("en", "John crumbled the vase"),
    ("en", "he broke a vase"),
    ("en", "he wears a hat"),
    ("en", "he wears socks"),
    ("en", "he wears a socks"),
    ("en", "John wore the hat"),
    ("en", "the vase broke the journey"),
    ("en", "vase the"),
    ("en", "vase the John"),
    ("en", "the the vase"),
    ("zh", "Ji-Yong da sui huapin"),
    ("zh", "Ji-Yong da puneig lucheng"),
    ("zh", "Ji-Yong da puneig huapin"),
    ("zh", "Ji-Yong da hui lucheng"),
    ("zh", "huapin da sui Ji-Yong"),
    ("zh", "da sui huapin"),
    ("ja", "kare wa boushi wo kaburu"),
    ("ja", "kare wa kutsushita wo haku"),
    ("ja", "kare wa kutsushita wo kaburu"),
    ("ja", "kare wa boushi wo haku"),
    ("ja", "kare boushi wo kaburu"),
];
