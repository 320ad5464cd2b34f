mod common;

use lextag_core::avm::Bindings;
use lextag_core::derived::{adjoin, finalize, substitute, DerivedTree};
use lextag_core::grammar::NodeKind;
use lextag_core::lexicon::{anchor, Segment};
use lextag_core::{
    Error, FeatureStructure, FeatureValue, GornAddress, LanguageResources, Schedule, Stage,
    ViolationKind,
};

use common::{fixture, grammar, toks};

fn addr(s: &str) -> GornAddress {
    s.parse().unwrap()
}

fn fs(pairs: &[(&str, &str)]) -> FeatureStructure {
    pairs
        .iter()
        .map(|(k, v)| (*k, FeatureValue::atom(*v)))
        .collect()
}

/// Anchors `lemma` in `tree` as instance `instance`.
fn instance(res: &LanguageResources, lemma: &str, tree: &str, instance: usize) -> DerivedTree {
    let entry = res.lexicon.entries_for(lemma, tree).next().expect("entry");
    let anchored = anchor(entry, res.grammar.tree(tree).unwrap(), instance).unwrap();
    DerivedTree::from_elementary(&anchored, instance, lemma)
}

fn subst(
    host: &DerivedTree,
    at: &str,
    sub: &DerivedTree,
    env: &Bindings,
) -> (DerivedTree, Bindings) {
    substitute(host, &addr(at), sub, env, Schedule::Eager)
        .unwrap()
        .unwrap()
}

#[test]
fn fixture_grammars_validate() {
    for lang in ["en", "zh", "ja"] {
        assert_eq!(grammar(lang).validate(), vec![], "{lang}");
    }
}

#[test]
fn corrupted_grammars_are_rejected_with_their_class() {
    for (file, kind) in [
        ("invalid/missing-foot.json", ViolationKind::MissingFoot),
        (
            "invalid/undeclared-atom.json",
            ViolationKind::UndeclaredAtom,
        ),
        (
            "invalid/dangling-address.json",
            ViolationKind::DanglingAddress,
        ),
        (
            "invalid/missing-selectional.json",
            ViolationKind::MissingSelectional,
        ),
    ] {
        let res = LanguageResources::load(fixture(file)).unwrap();
        let kinds: Vec<_> = res.validate().iter().map(|v| v.kind).collect();
        assert_eq!(kinds, [kind], "{file}");
    }
}

#[test]
fn corrupted_table_is_rejected() {
    let t = lextag_core::TransferTable::load(fixture("invalid/unknown-lemma.json")).unwrap();
    let v = t.validate(&grammar("en"), &grammar("zh"));
    assert_eq!(v.len(), 1);
    assert_eq!(v[0].kind, ViolationKind::UnknownLemma);
    assert!(v[0].detail.contains("smash"));
}

#[test]
fn node_addressing() {
    let en = grammar("en");
    let t = en.grammar.tree("en_transitive").unwrap();
    assert_eq!(t.node_at(&addr("0")).unwrap().cat.as_str(), "S");
    let obj = t.node_at(&addr("0.2.2")).unwrap();
    assert_eq!((obj.cat.as_str(), obj.kind), ("NP", NodeKind::Substitution));
    assert!(matches!(
        t.node_at(&addr("0.9")),
        Err(Error::DanglingAddress { .. })
    ));
}

#[test]
fn lookup() {
    let en = grammar("en");
    let segs = en
        .lexicon
        .lookup(&toks("broke"), en.terminal_words())
        .unwrap();
    let Segment::Entries { entries, .. } = &segs[0] else {
        panic!("entries expected")
    };
    assert!(entries
        .iter()
        .all(|e| e.lemma == "break" && e.syn == fs(&[("tense", "past")])));

    let zh = grammar("zh");
    let segs = zh
        .lexicon
        .lookup(&toks("Ji-Yong da sui huapin"), zh.terminal_words())
        .unwrap();
    assert_eq!(segs.len(), 3);
    let Segment::Entries { len, entries, .. } = &segs[1] else {
        panic!("entries expected")
    };
    assert_eq!(
        (*len, entries.len(), entries[0].lemma.as_str()),
        (2, 1, "da sui")
    );

    assert!(matches!(
        en.lexicon.lookup(&toks("qwzx"), en.terminal_words()),
        Err(Error::UnknownToken { position: 0, .. })
    ));
}

#[test]
fn lookup_round_trip() {
    for (lang, s) in common::SENTENCES {
        let res = grammar(lang);
        let t = toks(s);
        let mut rebuilt = Vec::new();
        for seg in res.lexicon.lookup(&t, res.terminal_words()).unwrap() {
            match seg {
                Segment::Entries { entries, .. } => rebuilt.extend(entries[0].surface.clone()),
                Segment::Terminal { position } => rebuilt.push(t[position].clone()),
            }
        }
        assert_eq!(rebuilt, t);
    }
}

#[test]
fn anchoring_places_restrictions_and_semantic_features() {
    let zh = grammar("zh");
    let top = |lemma: &str| {
        let e = zh
            .lexicon
            .entries_for(lemma, "zh_transitive")
            .next()
            .unwrap();
        anchor(e, zh.grammar.tree("zh_transitive").unwrap(), 0)
            .unwrap()
            .node_at(&addr("0.2.2"))
            .unwrap()
            .top
            .clone()
    };
    assert_eq!(top("da sui"), fs(&[("physical", "+"), ("brittle", "+")]));
    assert_eq!(
        top("da puneig"),
        fs(&[("abstract", "+"), ("continuous", "+")])
    );

    let e = zh.lexicon.entries_for("huapin", "zh_np").next().unwrap();
    let np = anchor(e, zh.grammar.tree("zh_np").unwrap(), 3).unwrap();
    let bottom = &np.node_at(&addr("0")).unwrap().bottom;
    for (k, v) in [
        ("physical", "+"),
        ("brittle", "+"),
        ("shape", "irregular"),
        ("form", "bulky"),
    ] {
        assert_eq!(bottom.get(k), Some(&FeatureValue::atom(v)), "{k}");
    }
    assert_eq!(np.node_at(&addr("0.1")).unwrap().words, ["huapin"]);
}

#[test]
fn anchoring_is_pure() {
    let en = grammar("en");
    let e = en.lexicon.entries_for("vase", "en_np").next().unwrap();
    let t = en.grammar.tree("en_np").unwrap();
    let strip = |i: usize| {
        let mut a = anchor(e, t, i).unwrap();
        for n in [&addr("0"), &addr("0.1")] {
            let node = a.node_at_mut(n).unwrap();
            let suffix = format!("#{i}");
            node.top = node
                .top
                .rename_vars(&|v| v.trim_end_matches(&suffix).to_owned());
            node.bottom = node
                .bottom
                .rename_vars(&|v| v.trim_end_matches(&suffix).to_owned());
        }
        a
    };
    assert_eq!(anchor(e, t, 1).unwrap(), anchor(e, t, 1).unwrap());
    assert_eq!(strip(1), strip(2));
}

#[test]
fn substitution_checks_selectional_restrictions() {
    let zh = grammar("zh");
    let huapin = instance(&zh, "huapin", "zh_np", 1);
    let da_sui = instance(&zh, "da sui", "zh_transitive", 0);
    let (t, _) = subst(&da_sui, "0.2.2", &huapin, &Bindings::new());
    assert_eq!(
        t.node_count(),
        da_sui.node_count() + huapin.node_count() - 1
    );

    let da_puneig = instance(&zh, "da puneig", "zh_transitive", 0);
    let f = substitute(
        &da_puneig,
        &addr("0.2.2"),
        &huapin,
        &Bindings::new(),
        Schedule::Eager,
    )
    .unwrap()
    .unwrap_err();
    assert_eq!(
        (f.stage, f.clash.path_string().as_str()),
        (Stage::Substitution, "abstract")
    );
    assert_eq!(f.lemma, "da puneig");

    let err = substitute(
        &da_sui,
        &addr("0.2"),
        &huapin,
        &Bindings::new(),
        Schedule::Eager,
    )
    .unwrap_err();
    assert!(matches!(err, Error::NotSubstitutionNode { .. }));
}

#[test]
fn determiner_adjunction() {
    let en = grammar("en");
    let vase = instance(&en, "vase", "en_np", 0);
    let the = instance(&en, "the", "en_det", 1);
    let (np, env) = adjoin(&vase, &addr("0"), &the, &Bindings::new(), Schedule::Eager)
        .unwrap()
        .unwrap();
    assert_eq!(np.yield_tokens(), ["the", "vase"]);
    let cats: Vec<_> = np.root.children.iter().map(|c| c.cat.as_str()).collect();
    assert_eq!((np.root.cat.as_str(), cats), ("NP", vec!["Det", "NP"]));
    assert_eq!(np.root.children[1].children[0].cat.as_str(), "N");

    let again = instance(&en, "a", "en_det", 2);
    assert!(matches!(
        adjoin(&np, &addr("0"), &again, &env, Schedule::Eager),
        Err(Error::AlreadyAdjoined { .. })
    ));
    let john = instance(&en, "John", "en_pn", 3);
    assert!(matches!(
        adjoin(&john, &addr("0"), &the, &Bindings::new(), Schedule::Eager),
        Err(Error::NotAdjoinable { .. })
    ));
}

#[test]
fn finalization_and_yield() {
    let zh = grammar("zh");
    let host = instance(&zh, "da sui", "zh_transitive", 0);
    let (t, env) = subst(
        &host,
        "0.1",
        &instance(&zh, "Ji-Yong", "zh_pn", 1),
        &Bindings::new(),
    );
    assert!(matches!(
        finalize(&t, &env),
        Err(Error::UnfilledSlot { .. })
    ));
    let (t, env) = subst(&t, "0.2.2", &instance(&zh, "huapin", "zh_np", 2), &env);
    let checked = finalize(&t, &env).unwrap().unwrap();
    assert_eq!(checked.yield_tokens(), toks("Ji-Yong da sui huapin"));
    assert_eq!(
        instance(&zh, "huapin", "zh_np", 5).yield_tokens(),
        ["huapin"]
    );

    let deferred = instance(&zh, "da puneig", "zh_transitive", 0);
    let step = |h: &DerivedTree, at: &str, s: &DerivedTree, e: &Bindings| {
        substitute(h, &addr(at), s, e, Schedule::Deferred)
            .unwrap()
            .unwrap()
    };
    let (t, env) = step(
        &deferred,
        "0.1",
        &instance(&zh, "Ji-Yong", "zh_pn", 1),
        &Bindings::new(),
    );
    let (t, env) = step(&t, "0.2.2", &instance(&zh, "huapin", "zh_np", 2), &env);
    let f = finalize(&t, &env).unwrap().unwrap_err();
    assert_eq!(f.clash.path_string(), "abstract");

    let ja = grammar("ja");
    let host = instance(&ja, "kaburu", "ja_transitive", 0);
    let (t, env) = subst(
        &host,
        "0.1",
        &instance(&ja, "kare", "ja_pn", 1),
        &Bindings::new(),
    );
    let (t, env) = subst(&t, "0.3.1", &instance(&ja, "boushi", "ja_np", 2), &env);
    let checked = finalize(&t, &env).unwrap().unwrap();
    assert_eq!(checked.yield_tokens(), toks("kare wa boushi wo kaburu"));
}

#[test]
fn finalize_is_deterministic() {
    let ja = grammar("ja");
    let build = || {
        let host = instance(&ja, "haku", "ja_transitive", 0);
        let (t, env) = subst(
            &host,
            "0.1",
            &instance(&ja, "kare", "ja_pn", 1),
            &Bindings::new(),
        );
        let (t, env) = subst(&t, "0.3.1", &instance(&ja, "kutsushita", "ja_np", 2), &env);
        finalize(&t, &env).unwrap().unwrap()
    };
    assert_eq!(build(), build());
}
