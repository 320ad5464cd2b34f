//! Seeded random inputs.

use rand::seq::SliceRandom;
use rand::Rng;

use lextag_core::{FeatureStructure, FeatureValue, LanguageResources};

const NAMES: &[&str] = &["a", "b", "c", "d"];
const ATOMS: &[&str] = &["+", "-", "x"];

/// A ground structure over a small alphabet, so random pairs overlap.
pub fn ground_fs(rng: &mut impl Rng, depth: usize) -> FeatureStructure {
    let mut fs = FeatureStructure::new();
    for name in NAMES {
        if !rng.gen_bool(0.5) {
            continue;
        }
        let v = if depth > 1 && rng.gen_bool(0.3) {
            FeatureValue::Struct(ground_fs(rng, depth - 1))
        } else {
            FeatureValue::atom(*ATOMS.choose(rng).unwrap())
        };
        fs.insert(*name, v);
    }
    fs
}

/// Like `ground_fs` but some values are variables drawn from a small pool.
pub fn open_fs(rng: &mut impl Rng, depth: usize) -> FeatureStructure {
    let mut fs = FeatureStructure::new();
    for name in NAMES {
        if !rng.gen_bool(0.5) {
            continue;
        }
        let roll: f64 = rng.gen();
        let v = if roll < 0.25 {
            FeatureValue::var(format!("?v{}", rng.gen_range(0..3)))
        } else if depth > 1 && roll < 0.5 {
            FeatureValue::Struct(open_fs(rng, depth - 1))
        } else {
            FeatureValue::atom(*ATOMS.choose(rng).unwrap())
        };
        fs.insert(*name, v);
    }
    fs
}

/// Lexical surfaces and co-anchor words of a language, as token units.
pub fn vocabulary(res: &LanguageResources) -> Vec<Vec<String>> {
    let mut units: Vec<Vec<String>> = res
        .lexicon
        .entries()
        .iter()
        .map(|e| e.surface.clone())
        .collect();
    units.extend(res.terminal_words().iter().map(|w| vec![w.clone()]));
    units.sort();
    units.dedup();
    units
}

/// A token sequence of at most `max_len` tokens: a known sentence with its
/// units shuffled, a known sentence with one unit replaced, or units drawn
/// at random.
pub fn token_sequence(
    rng: &mut impl Rng,
    units: &[Vec<String>],
    sentences: &[Vec<Vec<String>>],
    max_len: usize,
) -> Vec<String> {
    let mode = if sentences.is_empty() {
        2
    } else {
        rng.gen_range(0..3)
    };
    let mut picked: Vec<Vec<String>> = match mode {
        0 => {
            let mut s = sentences.choose(rng).unwrap().clone();
            s.shuffle(rng);
            s
        }
        1 => {
            let mut s = sentences.choose(rng).unwrap().clone();
            let i = rng.gen_range(0..s.len());
            s[i] = units.choose(rng).unwrap().clone();
            s
        }
        _ => {
            let n = rng.gen_range(1..=max_len);
            (0..n).map(|_| units.choose(rng).unwrap().clone()).collect()
        }
    };
    let mut out = Vec::new();
    for u in picked.drain(..) {
        if out.len() + u.len() > max_len {
            break;
        }
        out.extend(u);
    }
    if out.is_empty() {
        out = units.iter().find(|u| u.len() <= max_len).unwrap().clone();
    }
    out
}

/// Splits a sentence into lexicon units by greedy longest match.
pub fn units_of(sentence: &[String], units: &[Vec<String>]) -> Vec<Vec<String>> {
    let mut out = Vec::new();
    let mut i = 0;
    while i < sentence.len() {
        let best = units
            .iter()
            .filter(|u| sentence.len() - i >= u.len() && sentence[i..i + u.len()] == u[..])
            .max_by_key(|u| u.len())
            .expect("sentence uses fixture vocabulary");
        out.push(best.clone());
        i += best.len();
    }
    out
}
