//! The operad-file format: one JSON document.
//!
//! ```json
//! {
//!   "name": "assoc",
//!   "ring": "integers",
//!   "arities": [{"arity": 0, "generators": [{"name": "a0", "grading": 0}]}, ...],
//!   "id": [["1", "a1"]],
//!   "e": [["1", "a0"]],
//!   "mu": [["1", "a2"]],
//!   "compose": [{"x": "a2", "i": 1, "y": "a2", "out": [["1", "a3"]]}, ...],
//!   "tau": [{"arity": 0, "entries": [[0, 0, "1"]]}, ...],
//!   "sparse": false,
//!   "metadata": {"source": "..."}
//! }
//! ```
//!
//! Linear combinations are arrays of `[coefficient, generator]` with the
//! coefficient an exact decimal integer or `"p/q"` string. A generator name
//! may be qualified as `name@arity`; it must be wherever a bare name is
//! ambiguous. `tau` entries are `[row, column, coefficient]` triples on the
//! sorted basis, column `c` holding the image of generator `c`. Omitted
//! composition entries are zero only when `sparse` is true.

use std::collections::{BTreeMap, BTreeSet};
use std::str::FromStr;

use num_rational::BigRational;
use num_traits::Zero;
use serde::Deserialize;
use serde_json::{json, Map, Value};

use crate::error::{Error, Result};
use crate::linalg::RatMatrix;
use crate::operad::{ComposeKey, OperadElement, OperadSpec, Ring};

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct ParseOptions {
    /// Ignore unknown top-level keys instead of rejecting them.
    pub lenient: bool,
}

const TOP_LEVEL_KEYS: &[&str] = &["arities", "compose", "e", "id", "metadata", "mu", "name", "ring", "sparse", "tau"];

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawGenerator {
    name: String,
    grading: i64,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawArity {
    arity: usize,
    generators: Vec<RawGenerator>,
}

type RawCombination = Vec<(String, String)>;

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawCompose {
    x: String,
    i: usize,
    y: String,
    out: RawCombination,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawTau {
    arity: usize,
    entries: Vec<(usize, usize, String)>,
}

fn field<T: for<'de> Deserialize<'de>>(obj: &Map<String, Value>, key: &str) -> Result<Option<T>> {
    match obj.get(key) {
        None | Some(Value::Null) => Ok(None),
        Some(v) => T::deserialize(v).map(Some).map_err(|e| Error::semantic(key, e.to_string())),
    }
}

struct Reader {
    ring: Ring,
}

impl Reader {
    fn coefficient(&self, entry: &str, s: &str) -> Result<BigRational> {
        let q = BigRational::from_str(s.trim())
            .map_err(|_| Error::semantic(entry, format!("coefficient {s:?} is not an integer or p/q fraction")))?;
        if self.ring == Ring::Integers && !q.is_integer() {
            return Err(Error::semantic(entry, format!("coefficient {s} is not an integer, but the ring is integers")));
        }
        Ok(q)
    }

    /// Resolves a generator reference; `expected` is the arity the context requires.
    fn generator(&self, spec: &OperadSpec, entry: &str, name: &str, expected: Option<usize>) -> Result<(usize, usize)> {
        let (base, qualified) = match name.rsplit_once('@') {
            Some((base, ar)) => {
                let arity =
                    ar.parse::<usize>().map_err(|_| Error::semantic(entry, format!("bad arity in {name:?}")))?;
                (base, Some(arity))
            }
            None => (name, None),
        };
        let found: Vec<usize> = (0..=spec.arity_cap()).filter(|&k| spec.index_of(k, base).is_some()).collect();
        let arity = match (qualified, expected) {
            (Some(q), _) => q,
            (None, Some(e)) if found.contains(&e) => e,
            (None, Some(e)) => {
                return Err(match found.first() {
                    Some(k) => Error::semantic(entry, format!("generator {base:?} has arity {k}, expected arity {e}")),
                    None => Error::semantic(entry, format!("undeclared generator {base:?}")),
                })
            }
            (None, None) => match found.as_slice() {
                [k] => *k,
                [] => return Err(Error::semantic(entry, format!("undeclared generator {base:?}"))),
                _ => {
                    return Err(Error::semantic(
                        entry,
                        format!("generator name {base:?} occurs in several arities; qualify it as {base}@<arity>"),
                    ))
                }
            },
        };
        if let Some(e) = expected {
            if arity != e {
                return Err(Error::semantic(
                    entry,
                    format!("generator {name:?} has arity {arity}, expected arity {e}"),
                ));
            }
        }
        let idx = spec
            .index_of(arity, base)
            .ok_or_else(|| Error::semantic(entry, format!("undeclared generator {base:?} in arity {arity}")))?;
        Ok((arity, idx))
    }

    fn combination(&self, spec: &OperadSpec, entry: &str, raw: &RawCombination, arity: usize) -> Result<OperadElement> {
        let mut el = OperadElement::zero(arity);
        for (coef, name) in raw {
            let c = self.coefficient(entry, coef)?;
            let (_, i) = self.generator(spec, entry, name, Some(arity))?;
            el.add_term(i, &c);
        }
        Ok(el)
    }
}

pub fn parse_operad_file(document: &str) -> Result<OperadSpec> {
    parse_operad_file_with(document, ParseOptions::default())
}

/// Parses an operad file. The result is not validated.
pub fn parse_operad_file_with(document: &str, options: ParseOptions) -> Result<OperadSpec> {
    let value: Value = serde_json::from_str(document).map_err(|e| Error::Syntax {
        line: e.line(),
        column: e.column(),
        message: e.to_string().split(" at line").next().unwrap_or_default().to_string(),
    })?;
    let Value::Object(obj) = value else {
        return Err(Error::semantic("document", "the top level must be a JSON object"));
    };
    if !options.lenient {
        if let Some(k) = obj.keys().find(|k| !TOP_LEVEL_KEYS.contains(&k.as_str())) {
            return Err(Error::semantic(k.clone(), "unknown top-level key (use lenient mode to ignore it)"));
        }
    }

    let name: String = field(&obj, "name")?.ok_or_else(|| Error::semantic("name", "name required"))?;
    let ring_tag: String = field(&obj, "ring")?.ok_or_else(|| Error::semantic("ring", "ring required"))?;
    let ring = match ring_tag.as_str() {
        "integers" => Ring::Integers,
        "rationals" => Ring::Rationals,
        other => return Err(Error::semantic("ring", format!("unknown ring {other:?}; use integers or rationals"))),
    };
    let arities: Vec<RawArity> =
        field(&obj, "arities")?.ok_or_else(|| Error::semantic("arities", "arities required"))?;
    let id: RawCombination = field(&obj, "id")?.ok_or_else(|| Error::semantic("id", "identity required"))?;
    let e: RawCombination = field(&obj, "e")?.ok_or_else(|| Error::semantic("e", "unit required"))?;
    let mu: RawCombination = field(&obj, "mu")?.ok_or_else(|| Error::semantic("mu", "multiplication required"))?;
    let compose: Vec<RawCompose> = field(&obj, "compose")?.unwrap_or_default();
    let tau: Option<Vec<RawTau>> = field(&obj, "tau")?;
    let sparse: bool = field(&obj, "sparse")?.unwrap_or(false);
    let metadata: BTreeMap<String, String> = field(&obj, "metadata")?.unwrap_or_default();

    let mut by_arity: BTreeMap<usize, Vec<(String, i64)>> = BTreeMap::new();
    for a in arities {
        let gens = a.generators.into_iter().map(|g| (g.name, g.grading)).collect();
        if by_arity.insert(a.arity, gens).is_some() {
            return Err(Error::semantic(format!("arities[{}]", a.arity), "arity declared twice"));
        }
    }
    let cap = by_arity.keys().next_back().copied().unwrap_or(0);
    if by_arity.len() != cap + 1 {
        let missing = (0..=cap).find(|k| !by_arity.contains_key(k)).unwrap_or(0);
        return Err(Error::semantic("arities", format!("arity {missing} missing; arities must run from 0 to the cap")));
    }
    for (k, gens) in &by_arity {
        if let Some((bad, _)) =
            gens.iter().find(|(n, _)| n.is_empty() || n.contains('@') || n.contains(char::is_whitespace))
        {
            return Err(Error::semantic(format!("arity {k}"), format!("invalid generator name {bad:?}")));
        }
    }
    let mut spec = OperadSpec::new(name, ring, by_arity.into_values().collect())?;
    let reader = Reader { ring };

    spec.set_identity(reader.combination(&spec, "id", &id, 1)?)?;
    spec.set_unit(reader.combination(&spec, "e", &e, 0)?)?;
    spec.set_multiplication(reader.combination(&spec, "mu", &mu, 2)?)?;

    let mut seen = BTreeSet::new();
    for (n, c) in compose.iter().enumerate() {
        let entry = format!("compose[{n}] ({} o{} {})", c.x, c.i, c.y);
        let (l, x) = reader.generator(&spec, &entry, &c.x, None)?;
        let (m, y) = reader.generator(&spec, &entry, &c.y, None)?;
        if c.i == 0 || c.i > l {
            return Err(Error::semantic(entry, format!("slot {} out of range for arity {l}", c.i)));
        }
        if l + m - 1 > spec.arity_cap() {
            return Err(Error::semantic(entry, format!("output arity {} exceeds the arity cap", l + m - 1)));
        }
        let key = ComposeKey { x_arity: l, x, slot: c.i, y_arity: m, y };
        if !seen.insert(key) {
            return Err(Error::semantic(entry, "composition given twice"));
        }
        let out = reader.combination(&spec, &entry, &c.out, l + m - 1)?;
        let expected = spec.grading(l, x) + spec.grading(m, y);
        if let Some((t, _)) = out.terms().find(|(t, _)| spec.grading(l + m - 1, *t) != expected) {
            return Err(Error::semantic(
                entry,
                format!(
                    "grading mismatch: output {} has grading {}, expected {expected}",
                    spec.generator(l + m - 1, t).name,
                    spec.grading(l + m - 1, t)
                ),
            ));
        }
        spec.set_composition(key, out.terms().map(|(i, c)| (i, c.clone())).collect())?;
    }
    if !sparse {
        if let Some(key) = spec.compose_keys().find(|k| !seen.contains(k)) {
            return Err(Error::semantic(
                "compose",
                format!(
                    "missing entry {} o{} {} (set \"sparse\": true to default omitted entries to zero)",
                    spec.generator(key.x_arity, key.x).name,
                    key.slot,
                    spec.generator(key.y_arity, key.y).name
                ),
            ));
        }
    }

    if let Some(raw) = tau {
        let mut mats: BTreeMap<usize, RatMatrix> = BTreeMap::new();
        for t in raw {
            let entry = format!("tau (arity {})", t.arity);
            if t.arity > spec.arity_cap() {
                return Err(Error::semantic(entry, "arity beyond the declared arities"));
            }
            let n = spec.rank(t.arity);
            let mut triplets = Vec::with_capacity(t.entries.len());
            for (r, c, v) in &t.entries {
                if *r >= n || *c >= n {
                    return Err(Error::semantic(entry, format!("entry ({r}, {c}) outside the {n}x{n} matrix")));
                }
                triplets.push((*r, *c, reader.coefficient(&entry, v)?));
            }
            let m = RatMatrix::from_triplets(n, n, triplets)?;
            if mats.insert(t.arity, m).is_some() {
                return Err(Error::semantic(entry, "tau given twice for this arity"));
            }
        }
        if mats.len() != spec.arity_cap() + 1 {
            let missing = (0..=spec.arity_cap()).find(|k| !mats.contains_key(k)).unwrap_or(0);
            return Err(Error::semantic("tau", format!("no matrix for arity {missing}")));
        }
        spec.set_tau(Some(mats.into_values().collect()))?;
    }
    spec.set_sparse(sparse);
    for (k, v) in metadata {
        spec.set_metadata(k, v);
    }
    Ok(spec)
}

fn coefficient_string(c: &BigRational) -> String {
    c.to_string()
}

/// Canonical operad file: sorted keys, generators sorted by name, exact
/// coefficient strings.
pub fn serialize_operad(spec: &OperadSpec) -> String {
    let cap = spec.arity_cap();
    let ambiguous = |name: &str| (0..=cap).filter(|&k| spec.index_of(k, name).is_some()).count() > 1;
    let reference = |arity: usize, idx: usize| {
        let name = &spec.generator(arity, idx).name;
        if ambiguous(name) {
            format!("{name}@{arity}")
        } else {
            name.clone()
        }
    };
    let combination = |el: &OperadElement, arity: usize| -> Value {
        Value::Array(
            el.terms().map(|(i, c)| json!([coefficient_string(c), spec.generator(arity, i).name.clone()])).collect(),
        )
    };
    let arities: Vec<Value> = (0..=cap)
        .map(|k| {
            json!({
                "arity": k,
                "generators": spec.generators(k).iter().map(|g| json!({"name": g.name, "grading": g.grading})).collect::<Vec<_>>(),
            })
        })
        .collect();
    let compose: Vec<Value> = spec
        .compose_keys()
        .filter_map(|key| {
            let out = spec.composition(&key).expect("key from the spec");
            if spec.sparse() && out.is_empty() {
                return None;
            }
            let el = OperadElement::from_terms(key.out_arity(), out.iter().cloned());
            Some(json!({
                "x": reference(key.x_arity, key.x),
                "i": key.slot,
                "y": reference(key.y_arity, key.y),
                "out": combination(&el, key.out_arity()),
            }))
        })
        .collect();
    let tau = match spec.tau_matrices() {
        None => Value::Null,
        Some(mats) => Value::Array(
            mats.iter()
                .enumerate()
                .map(|(k, m)| {
                    let mut entries: Vec<(usize, usize, BigRational)> =
                        m.iter().filter(|(_, _, v)| !v.is_zero()).map(|(r, c, v)| (r, c, v.clone())).collect();
                    entries.sort_by_key(|&(r, c, _)| (c, r));
                    json!({
                        "arity": k,
                        "entries": entries.iter().map(|(r, c, v)| json!([r, c, coefficient_string(v)])).collect::<Vec<_>>(),
                    })
                })
                .collect(),
        ),
    };
    let mut doc = Map::new();
    doc.insert("name".into(), json!(spec.name()));
    doc.insert("ring".into(), json!(spec.ring().tag()));
    doc.insert("arities".into(), Value::Array(arities));
    doc.insert("id".into(), combination(spec.identity(), 1));
    doc.insert("e".into(), combination(spec.unit(), 0));
    doc.insert("mu".into(), combination(spec.multiplication(), 2));
    doc.insert("compose".into(), Value::Array(compose));
    doc.insert("tau".into(), tau);
    doc.insert("sparse".into(), json!(spec.sparse()));
    doc.insert("metadata".into(), json!(spec.metadata()));
    let mut s = serde_json::to_string_pretty(&Value::Object(doc)).expect("json values serialize");
    s.push('\n');
    s
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::defs::builtin_assoc;

    #[test]
    fn assoc_round_trip() {
        let spec = builtin_assoc(6).unwrap();
        let text = serialize_operad(&spec);
        let back = parse_operad_file(&text).unwrap();
        assert_eq!(back, spec);
        assert_eq!(serialize_operad(&back), text);
    }

    #[test]
    fn syntax_error_has_position() {
        let err = parse_operad_file("{\n  \"name\": }").unwrap_err();
        assert!(matches!(err, Error::Syntax { line: 2, .. }), "{err:?}");
    }

    fn assoc_doc() -> Value {
        serde_json::from_str(&serialize_operad(&builtin_assoc(3).unwrap())).unwrap()
    }

    #[test]
    fn missing_mu_is_semantic() {
        let mut doc = assoc_doc();
        doc.as_object_mut().unwrap().remove("mu");
        let err = parse_operad_file(&doc.to_string()).unwrap_err();
        assert_eq!(err, Error::semantic("mu", "multiplication required"));
    }

    #[test]
    fn wrong_output_arity_names_the_entry() {
        let mut doc = assoc_doc();
        doc["compose"][0]["out"] = json!([["1", "a2"]]);
        match parse_operad_file(&doc.to_string()).unwrap_err() {
            Error::Semantic { entry, message } => {
                assert!(entry.starts_with("compose[0]"), "{entry}");
                assert!(message.contains("expected arity"), "{message}");
            }
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn omitted_entries_need_sparse() {
        let mut doc = assoc_doc();
        doc["compose"].as_array_mut().unwrap().pop();
        assert!(matches!(parse_operad_file(&doc.to_string()), Err(Error::Semantic { .. })));
        doc["sparse"] = json!(true);
        assert!(parse_operad_file(&doc.to_string()).is_ok());
    }

    #[test]
    fn unknown_keys_strict_and_lenient() {
        let mut doc = assoc_doc();
        doc["extra"] = json!(1);
        assert!(parse_operad_file(&doc.to_string()).is_err());
        assert!(parse_operad_file_with(&doc.to_string(), ParseOptions { lenient: true }).is_ok());
    }

    #[test]
    fn integer_ring_rejects_fractions() {
        let mut doc = assoc_doc();
        doc["mu"] = json!([["1/2", "a2"]]);
        assert!(matches!(parse_operad_file(&doc.to_string()), Err(Error::Semantic { .. })));
        doc["ring"] = json!("rationals");
        assert!(parse_operad_file(&doc.to_string()).is_ok());
    }
}
