//! Attribute-value feature structures.
//!
//! Structures are open-world: a feature absent from one side of a unification
//! is simply copied from the other. Values are atoms, variables (`?name`), or
//! nested structures. Variables are bound in an explicit [`Bindings`]
//! environment that is threaded through by value, so a failed unification
//! never leaks partial bindings into the caller's environment.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use serde::de::{self, MapAccess, Visitor};
use serde::ser::SerializeMap;
use serde::{Deserialize, Deserializer, Serialize, Serializer};
use thiserror::Error;

/// Nesting depth allowed unless a [`Unifier`] is configured otherwise.
pub const DEFAULT_MAX_DEPTH: usize = 8;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum AvmError {
    #[error("feature structure nesting exceeds depth limit {limit} at `{path}`")]
    DepthExceeded { limit: usize, path: String },
    #[error("empty feature name at `{path}`")]
    EmptyFeatureName { path: String },
    #[error("structure is not ground: variable {var} at `{path}`")]
    NotGround { var: String, path: String },
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum FeatureValue {
    Atom(String),
    /// Variable name, including the leading `?`.
    Var(String),
    Struct(FeatureStructure),
}

impl FeatureValue {
    pub fn atom(s: impl Into<String>) -> Self {
        FeatureValue::Atom(s.into())
    }

    pub fn var(name: impl Into<String>) -> Self {
        let name = name.into();
        if name.starts_with('?') {
            FeatureValue::Var(name)
        } else {
            FeatureValue::Var(format!("?{name}"))
        }
    }

    pub fn as_atom(&self) -> Option<&str> {
        match self {
            FeatureValue::Atom(a) => Some(a),
            _ => None,
        }
    }
}

impl fmt::Display for FeatureValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FeatureValue::Atom(a) => f.write_str(a),
            FeatureValue::Var(v) => f.write_str(v),
            FeatureValue::Struct(s) => write!(f, "{s}"),
        }
    }
}

/// A map from feature names to values, kept sorted by name.
#[derive(Debug, Clone, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct FeatureStructure(BTreeMap<String, FeatureValue>);

impl FeatureStructure {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn get(&self, name: &str) -> Option<&FeatureValue> {
        self.0.get(name)
    }

    pub fn insert(&mut self, name: impl Into<String>, value: FeatureValue) -> Option<FeatureValue> {
        self.0.insert(name.into(), value)
    }

    pub fn with(mut self, name: impl Into<String>, value: FeatureValue) -> Self {
        self.insert(name, value);
        self
    }

    pub fn iter(&self) -> impl Iterator<Item = (&String, &FeatureValue)> {
        self.0.iter()
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// Nesting depth; a flat structure has depth 1 and the empty structure 0.
    pub fn depth(&self) -> usize {
        self.0
            .values()
            .map(|v| match v {
                FeatureValue::Struct(s) => 1 + s.depth(),
                _ => 1,
            })
            .max()
            .unwrap_or(0)
    }

    /// Number of atom- or variable-valued paths.
    pub fn path_count(&self) -> usize {
        self.0
            .values()
            .map(|v| match v {
                FeatureValue::Struct(s) => s.path_count(),
                _ => 1,
            })
            .sum()
    }

    pub fn is_ground(&self) -> bool {
        self.first_variable(&mut Vec::new()).is_none()
    }

    pub fn variables(&self) -> BTreeSet<String> {
        let mut out = BTreeSet::new();
        self.collect_vars(&mut out);
        out
    }

    fn collect_vars(&self, out: &mut BTreeSet<String>) {
        for v in self.0.values() {
            match v {
                FeatureValue::Var(n) => {
                    out.insert(n.clone());
                }
                FeatureValue::Struct(s) => s.collect_vars(out),
                FeatureValue::Atom(_) => {}
            }
        }
    }

    fn first_variable(&self, path: &mut Vec<String>) -> Option<(String, String)> {
        for (k, v) in &self.0 {
            path.push(k.clone());
            let found = match v {
                FeatureValue::Var(n) => Some((n.clone(), path.join("."))),
                FeatureValue::Struct(s) => s.first_variable(path),
                FeatureValue::Atom(_) => None,
            };
            path.pop();
            if found.is_some() {
                return found;
            }
        }
        None
    }

    /// Applies `f` to every variable name.
    pub fn rename_vars(&self, f: &impl Fn(&str) -> String) -> Self {
        FeatureStructure(
            self.0
                .iter()
                .map(|(k, v)| {
                    let v = match v {
                        FeatureValue::Var(n) => FeatureValue::Var(f(n)),
                        FeatureValue::Struct(s) => FeatureValue::Struct(s.rename_vars(f)),
                        a => a.clone(),
                    };
                    (k.clone(), v)
                })
                .collect(),
        )
    }

    /// Rejects empty feature names and nesting beyond `max_depth`.
    pub fn check(&self, max_depth: usize) -> Result<(), AvmError> {
        self.check_at(max_depth, &mut Vec::new())
    }

    fn check_at(&self, max_depth: usize, path: &mut Vec<String>) -> Result<(), AvmError> {
        if path.len() >= max_depth && !self.is_empty() {
            return Err(AvmError::DepthExceeded {
                limit: max_depth,
                path: path.join("."),
            });
        }
        for (k, v) in &self.0 {
            if k.is_empty() {
                return Err(AvmError::EmptyFeatureName {
                    path: path.join("."),
                });
            }
            if let FeatureValue::Struct(s) = v {
                path.push(k.clone());
                s.check_at(max_depth, path)?;
                path.pop();
            }
        }
        Ok(())
    }

    /// Every `(feature name, atom)` pair at any depth.
    pub fn atoms(&self) -> Vec<(&str, &str)> {
        let mut out = Vec::new();
        self.collect_atoms(&mut out);
        out
    }

    fn collect_atoms<'a>(&'a self, out: &mut Vec<(&'a str, &'a str)>) {
        for (k, v) in &self.0 {
            match v {
                FeatureValue::Atom(a) => out.push((k, a)),
                FeatureValue::Struct(s) => s.collect_atoms(out),
                FeatureValue::Var(_) => {}
            }
        }
    }
}

impl<K: Into<String>> FromIterator<(K, FeatureValue)> for FeatureStructure {
    fn from_iter<I: IntoIterator<Item = (K, FeatureValue)>>(iter: I) -> Self {
        FeatureStructure(iter.into_iter().map(|(k, v)| (k.into(), v)).collect())
    }
}

impl fmt::Display for FeatureStructure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("{")?;
        for (i, (k, v)) in self.0.iter().enumerate() {
            if i > 0 {
                f.write_str(", ")?;
            }
            write!(f, "{k}:{v}")?;
        }
        f.write_str("}")
    }
}

impl Serialize for FeatureStructure {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        let mut map = serializer.serialize_map(Some(self.0.len()))?;
        for (k, v) in &self.0 {
            map.serialize_entry(k, v)?;
        }
        map.end()
    }
}

impl Serialize for FeatureValue {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        match self {
            FeatureValue::Atom(a) => serializer.serialize_str(a),
            FeatureValue::Var(v) => serializer.serialize_str(v),
            FeatureValue::Struct(s) => s.serialize(serializer),
        }
    }
}

struct ValueVisitor;

impl<'de> Visitor<'de> for ValueVisitor {
    type Value = FeatureValue;

    fn expecting(&self, f: &mut fmt::Formatter) -> fmt::Result {
        f.write_str("an atom string, a `?variable` string, or a feature structure object")
    }

    fn visit_str<E: de::Error>(self, v: &str) -> Result<FeatureValue, E> {
        if v.is_empty() {
            return Err(E::custom("empty atom"));
        }
        if v.starts_with('?') {
            if v.len() == 1 {
                return Err(E::custom("variable without a name"));
            }
            Ok(FeatureValue::Var(v.to_owned()))
        } else {
            Ok(FeatureValue::Atom(v.to_owned()))
        }
    }

    fn visit_map<A: MapAccess<'de>>(self, mut access: A) -> Result<FeatureValue, A::Error> {
        let mut map = BTreeMap::new();
        while let Some((k, v)) = access.next_entry::<String, FeatureValue>()? {
            if map.insert(k.clone(), v).is_some() {
                return Err(de::Error::custom(format!("duplicate feature `{k}`")));
            }
        }
        Ok(FeatureValue::Struct(FeatureStructure(map)))
    }
}

impl<'de> Deserialize<'de> for FeatureValue {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        deserializer.deserialize_any(ValueVisitor)
    }
}

impl<'de> Deserialize<'de> for FeatureStructure {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        match deserializer.deserialize_map(ValueVisitor)? {
            FeatureValue::Struct(s) => Ok(s),
            _ => Err(de::Error::custom("expected a feature structure object")),
        }
    }
}

/// Variable bindings. Acyclic by construction: every bind goes through an
/// occurs check.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Bindings(BTreeMap<String, FeatureValue>);

impl Bindings {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn get(&self, var: &str) -> Option<&FeatureValue> {
        self.0.get(var)
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = (&String, &FeatureValue)> {
        self.0.iter()
    }

    /// Follows a variable chain. Returns the last variable seen (if any) and
    /// the non-variable value it ends in (if bound).
    fn walk(&self, value: &FeatureValue) -> (Option<String>, Option<FeatureValue>) {
        let mut last = None;
        let mut cur = value;
        loop {
            match cur {
                FeatureValue::Var(n) => {
                    last = Some(n.clone());
                    match self.0.get(n) {
                        Some(next) => cur = next,
                        None => return (last, None),
                    }
                }
                other => return (last, Some(other.clone())),
            }
        }
    }

    fn occurs(&self, var: &str, value: &FeatureValue) -> bool {
        match value {
            FeatureValue::Atom(_) => false,
            FeatureValue::Var(n) => n == var || self.0.get(n).is_some_and(|b| self.occurs(var, b)),
            FeatureValue::Struct(s) => s.0.values().any(|v| self.occurs(var, v)),
        }
    }

    fn set(&mut self, var: String, value: FeatureValue) {
        self.0.insert(var, value);
    }
}

/// Where and why a unification failed.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Clash {
    /// Feature path from the root of the unified structures.
    pub path: Vec<String>,
    pub left: String,
    pub right: String,
}

impl Clash {
    pub fn path_string(&self) -> String {
        self.path.join(".")
    }
}

impl fmt::Display for Clash {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "clash at `{}`: {} vs {}",
            self.path_string(),
            self.left,
            self.right
        )
    }
}

/// Outer `Result` is a fault (depth overflow); inner is the normal
/// success/failure outcome.
pub type Unification<T> = Result<Result<T, Clash>, AvmError>;

enum Stop {
    Clash(Clash),
    Fault(AvmError),
}

impl From<AvmError> for Stop {
    fn from(e: AvmError) -> Self {
        Stop::Fault(e)
    }
}

fn split<T>(r: Result<T, Stop>) -> Unification<T> {
    match r {
        Ok(v) => Ok(Ok(v)),
        Err(Stop::Clash(c)) => Ok(Err(c)),
        Err(Stop::Fault(e)) => Err(e),
    }
}

#[derive(Debug, Clone, Copy)]
pub struct Unifier {
    pub max_depth: usize,
}

impl Default for Unifier {
    fn default() -> Self {
        Unifier {
            max_depth: DEFAULT_MAX_DEPTH,
        }
    }
}

impl Unifier {
    pub fn with_max_depth(max_depth: usize) -> Self {
        Unifier { max_depth }
    }

    pub fn unify(
        &self,
        a: &FeatureStructure,
        b: &FeatureStructure,
        env: &Bindings,
    ) -> Unification<(FeatureStructure, Bindings)> {
        let mut env = env.clone();
        let mut path = Vec::new();
        split(
            self.unify_structs(a, b, &mut env, &mut path)
                .map(|fs| (fs, env)),
        )
    }

    /// Combines two environments as if every binding of `other` were
    /// unified into `base`.
    pub fn merge_bindings(&self, base: &Bindings, other: &Bindings) -> Unification<Bindings> {
        let mut env = base.clone();
        let result = other.0.iter().try_for_each(|(var, value)| {
            let mut path = vec![var.clone()];
            self.unify_values(&FeatureValue::Var(var.clone()), value, &mut env, &mut path)
                .map(|_| ())
        });
        split(result.map(|()| env))
    }

    fn unify_structs(
        &self,
        a: &FeatureStructure,
        b: &FeatureStructure,
        env: &mut Bindings,
        path: &mut Vec<String>,
    ) -> Result<FeatureStructure, Stop> {
        if path.len() >= self.max_depth && !(a.is_empty() && b.is_empty()) {
            return Err(AvmError::DepthExceeded {
                limit: self.max_depth,
                path: path.join("."),
            }
            .into());
        }
        let mut out = BTreeMap::new();
        // BTreeMap iteration keeps the first reported clash in lexicographic path order.
        let names: BTreeSet<&String> = a.0.keys().chain(b.0.keys()).collect();
        for name in names {
            let value = match (a.0.get(name), b.0.get(name)) {
                (Some(x), Some(y)) => {
                    path.push(name.clone());
                    let v = self.unify_values(x, y, env, path)?;
                    path.pop();
                    v
                }
                (Some(x), None) | (None, Some(x)) => x.clone(),
                (None, None) => unreachable!(),
            };
            out.insert(name.clone(), value);
        }
        Ok(FeatureStructure(out))
    }

    fn unify_values(
        &self,
        a: &FeatureValue,
        b: &FeatureValue,
        env: &mut Bindings,
        path: &mut Vec<String>,
    ) -> Result<FeatureValue, Stop> {
        let (avar, aval) = env.walk(a);
        let (bvar, bval) = env.walk(b);
        if let Some(v) = avar.as_ref().filter(|_| avar == bvar) {
            return Ok(FeatureValue::Var(v.clone()));
        }
        let merged = match (aval, bval) {
            (None, None) => None,
            (Some(x), None) | (None, Some(x)) => Some(x),
            (Some(x), Some(y)) => Some(self.unify_heads(&x, &y, env, path)?),
        };
        let cycle = |var: &str| {
            Stop::Clash(Clash {
                path: path.clone(),
                left: var.to_owned(),
                right: "cyclic structure".to_owned(),
            })
        };
        match (avar, bvar) {
            (Some(av), Some(bv)) => {
                if let Some(m) = merged {
                    if env.occurs(&av, &m) {
                        return Err(cycle(&av));
                    }
                    if env.occurs(&bv, &m) {
                        return Err(cycle(&bv));
                    }
                    env.set(av.clone(), m);
                }
                env.set(bv, FeatureValue::Var(av.clone()));
                Ok(FeatureValue::Var(av))
            }
            (Some(v), None) | (None, Some(v)) => {
                let m = merged.expect("a non-variable side is always present");
                if env.occurs(&v, &m) {
                    return Err(cycle(&v));
                }
                env.set(v.clone(), m);
                Ok(FeatureValue::Var(v))
            }
            (None, None) => Ok(merged.expect("both sides are non-variables")),
        }
    }

    fn unify_heads(
        &self,
        x: &FeatureValue,
        y: &FeatureValue,
        env: &mut Bindings,
        path: &mut Vec<String>,
    ) -> Result<FeatureValue, Stop> {
        match (x, y) {
            (FeatureValue::Atom(p), FeatureValue::Atom(q)) if p == q => Ok(x.clone()),
            (FeatureValue::Struct(s), FeatureValue::Struct(t)) => {
                Ok(FeatureValue::Struct(self.unify_structs(s, t, env, path)?))
            }
            _ => Err(Stop::Clash(Clash {
                path: path.clone(),
                left: x.to_string(),
                right: y.to_string(),
            })),
        }
    }
}

/// Unifies with the default depth limit.
pub fn unify(
    a: &FeatureStructure,
    b: &FeatureStructure,
    env: &Bindings,
) -> Unification<(FeatureStructure, Bindings)> {
    Unifier::default().unify(a, b, env)
}

/// Replaces every bound variable by its value. Unbound variables stay, named
/// by the last variable in their chain.
pub fn resolve(fs: &FeatureStructure, env: &Bindings) -> FeatureStructure {
    FeatureStructure(
        fs.0.iter()
            .map(|(k, v)| (k.clone(), resolve_value(v, env)))
            .collect(),
    )
}

fn resolve_value(v: &FeatureValue, env: &Bindings) -> FeatureValue {
    match v {
        FeatureValue::Atom(_) => v.clone(),
        FeatureValue::Struct(s) => FeatureValue::Struct(resolve(s, env)),
        FeatureValue::Var(_) => match env.walk(v) {
            (_, Some(bound)) => resolve_value(&bound, env),
            (Some(last), None) => FeatureValue::Var(last),
            (None, None) => unreachable!(),
        },
    }
}

/// True iff every path and atom of `a` occurs identically in `b`.
pub fn subsumes(a: &FeatureStructure, b: &FeatureStructure) -> Result<bool, AvmError> {
    for fs in [a, b] {
        if let Some((var, path)) = fs.first_variable(&mut Vec::new()) {
            return Err(AvmError::NotGround { var, path });
        }
    }
    Ok(subsumes_ground(a, b))
}

fn subsumes_ground(a: &FeatureStructure, b: &FeatureStructure) -> bool {
    a.0.iter().all(|(k, av)| match (av, b.0.get(k)) {
        (FeatureValue::Atom(x), Some(FeatureValue::Atom(y))) => x == y,
        (FeatureValue::Struct(s), Some(FeatureValue::Struct(t))) => subsumes_ground(s, t),
        _ => false,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use serde_json::json;

    fn fs(v: serde_json::Value) -> FeatureStructure {
        serde_json::from_value(v).unwrap()
    }

    fn ok(r: Unification<(FeatureStructure, Bindings)>) -> (FeatureStructure, Bindings) {
        r.unwrap().unwrap()
    }

    #[test]
    fn empty_is_identity() {
        let x = fs(json!({"physical": "+", "shape": {"kind": "irregular"}}));
        let (r, _) = ok(unify(&FeatureStructure::new(), &x, &Bindings::new()));
        assert_eq!(r, x);
        let (r, _) = ok(unify(&x, &FeatureStructure::new(), &Bindings::new()));
        assert_eq!(r, x);
    }

    #[test]
    fn da_sui_restriction_meets_huapin() {
        let restriction = fs(json!({"physical": "+", "brittle": "+"}));
        let noun = fs(json!({"physical": "+", "brittle": "+", "shape": "irregular"}));
        let (r, _) = ok(unify(&restriction, &noun, &Bindings::new()));
        assert_eq!(r, noun);
    }

    #[test]
    fn da_puneig_restriction_clashes_on_abstract() {
        let restriction = fs(json!({"abstract": "+", "continuous": "+"}));
        let noun = fs(json!({"physical": "+", "abstract": "-", "brittle": "+", "continuous": "-"}));
        let clash = unify(&restriction, &noun, &Bindings::new())
            .unwrap()
            .unwrap_err();
        assert_eq!(clash.path_string(), "abstract");
        assert_eq!((clash.left.as_str(), clash.right.as_str()), ("+", "-"));
    }

    #[test]
    fn first_clash_is_lexicographic() {
        let a = fs(json!({"b": "x", "a": {"z": "1", "c": "1"}}));
        let b = fs(json!({"b": "y", "a": {"z": "2", "c": "2"}}));
        let clash = unify(&a, &b, &Bindings::new()).unwrap().unwrap_err();
        assert_eq!(clash.path, vec!["a", "c"]);
    }

    #[test]
    fn atom_against_struct_clashes() {
        let clash = unify(
            &fs(json!({"f": "a"})),
            &fs(json!({"f": {"g": "a"}})),
            &Bindings::new(),
        )
        .unwrap()
        .unwrap_err();
        assert_eq!(clash.path_string(), "f");
    }

    #[test]
    fn variables_share_values() {
        let a = fs(json!({"x": "?v", "y": "?v"}));
        let b = fs(json!({"x": "+"}));
        let (r, env) = ok(unify(&a, &b, &Bindings::new()));
        assert_eq!(resolve(&r, &env), fs(json!({"x": "+", "y": "+"})));
        // The shared variable now blocks a conflicting value on `y`.
        let clash = unify(&r, &fs(json!({"y": "-"})), &env)
            .unwrap()
            .unwrap_err();
        assert_eq!(clash.path_string(), "y");
    }

    #[test]
    fn variable_bound_struct_grows_through_later_unifications() {
        let a = fs(json!({"agr": "?a", "subj": {"agr": "?a"}}));
        let (r, env) = ok(unify(
            &a,
            &fs(json!({"agr": {"num": "sg"}})),
            &Bindings::new(),
        ));
        let (r, env) = ok(unify(&r, &fs(json!({"subj": {"agr": {"per": "3"}}})), &env));
        assert_eq!(
            resolve(&r, &env),
            fs(
                json!({"agr": {"num": "sg", "per": "3"}, "subj": {"agr": {"num": "sg", "per": "3"}}})
            )
        );
    }

    #[test]
    fn occurs_check_rejects_cycles() {
        let a = fs(json!({"f": "?x", "g": "?x"}));
        let b = fs(json!({"g": {"h": "?x"}}));
        assert!(unify(&a, &b, &Bindings::new()).unwrap().is_err());
    }

    #[test]
    fn failed_unification_leaves_caller_env_untouched() {
        let env = Bindings::new();
        let a = fs(json!({"a": "?v", "b": "+"}));
        let b = fs(json!({"a": "+", "b": "-"}));
        assert!(unify(&a, &b, &env).unwrap().is_err());
        assert!(env.is_empty());
    }

    #[test]
    fn resolve_examples() {
        let mut env = Bindings::new();
        env.set("?v".into(), FeatureValue::atom("+"));
        assert_eq!(
            resolve(&fs(json!({"x": "?v"})), &env),
            fs(json!({"x": "+"}))
        );
        assert_eq!(
            resolve(&fs(json!({"x": "?v"})), &Bindings::new()),
            fs(json!({"x": "?v"}))
        );
    }

    #[test]
    fn subsumption() {
        let e = FeatureStructure::new();
        let x = fs(json!({"physical": "+", "brittle": "+"}));
        assert!(subsumes(&e, &x).unwrap());
        assert!(subsumes(&fs(json!({"physical": "+"})), &x).unwrap());
        assert!(!subsumes(&x, &fs(json!({"physical": "+"}))).unwrap());
        assert!(matches!(
            subsumes(&fs(json!({"a": "?x"})), &x),
            Err(AvmError::NotGround { .. })
        ));
    }

    #[test]
    fn depth_limit_is_a_fault() {
        let deep = fs(json!({"a": {"b": {"c": "+"}}}));
        let u = Unifier::with_max_depth(2);
        assert!(matches!(
            u.unify(&deep, &deep, &Bindings::new()),
            Err(AvmError::DepthExceeded { .. })
        ));
        assert!(deep.check(2).is_err());
        assert!(deep.check(3).is_ok());
        assert_eq!(deep.depth(), 3);
    }

    #[test]
    fn json_encoding() {
        let x = fs(json!({"abstract": "?a", "form": {"kind": "linear"}, "physical": "+"}));
        assert_eq!(x.get("abstract"), Some(&FeatureValue::var("a")));
        assert_eq!(
            serde_json::to_string(&x).unwrap(),
            r#"{"abstract":"?a","form":{"kind":"linear"},"physical":"+"}"#
        );
        assert!(serde_json::from_str::<FeatureStructure>(r#"{"a": 1}"#).is_err());
        assert!(serde_json::from_str::<FeatureStructure>(r#"{"a": "?"}"#).is_err());
        assert_eq!(
            fs(json!({"": "+"})).check(DEFAULT_MAX_DEPTH),
            Err(AvmError::EmptyFeatureName {
                path: String::new()
            })
        );
    }

    #[test]
    fn merge_bindings_detects_conflicts() {
        let (_, e1) = ok(unify(
            &fs(json!({"a": "?x"})),
            &fs(json!({"a": "+"})),
            &Bindings::new(),
        ));
        let (_, e2) = ok(unify(
            &fs(json!({"a": "?x"})),
            &fs(json!({"a": "-"})),
            &Bindings::new(),
        ));
        let (_, e3) = ok(unify(
            &fs(json!({"a": "?y"})),
            &fs(json!({"a": "-"})),
            &Bindings::new(),
        ));
        let u = Unifier::default();
        assert!(u.merge_bindings(&e1, &e2).unwrap().is_err());
        let merged = u.merge_bindings(&e1, &e3).unwrap().unwrap();
        assert_eq!(merged.len(), 2);
    }
}
