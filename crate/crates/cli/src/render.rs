//! Text and JSON rendering of homology tables and elements.

use std::collections::BTreeSet;
use std::fmt::Write;

use ophh_core::report::SCHEMA_VERSION;
use ophh_core::{HomologyTable, OperadElement, OperadSpec};
use serde_json::{json, Value};

fn terms(spec: &OperadSpec, x: &OperadElement) -> Value {
    Value::Array(x.terms().map(|(i, c)| json!([c.to_string(), spec.generator(x.arity(), i).name.clone()])).collect())
}

fn gradings(spec: &OperadSpec, x: &OperadElement) -> Vec<i64> {
    let set: BTreeSet<i64> = x.terms().map(|(i, _)| spec.grading(x.arity(), i)).collect();
    set.into_iter().collect()
}

pub fn homology_text(table: &HomologyTable<'_>, reps: bool) -> String {
    let spec = table.spec();
    let mut s = String::new();
    let _ = writeln!(
        s,
        "Hochschild homology of {} ({} complex, over the {}, arities 0..={})",
        spec.name(),
        table.flavor(),
        table.coefficients().tag(),
        table.cap() - 1
    );
    let _ = writeln!(s, "{:>6} {:>8} {:>7} {:>6}  torsion", "arity", "grading", "degree", "betti");
    let mut any = false;
    for e in table.nonzero() {
        any = true;
        let torsion = if e.torsion.is_empty() {
            "-".to_string()
        } else {
            e.torsion.iter().map(|t| format!("Z/{t}")).collect::<Vec<_>>().join(" + ")
        };
        let _ = writeln!(s, "{:>6} {:>8} {:>7} {:>6}  {torsion}", e.arity, e.grading, e.degree(), e.betti);
        if reps {
            for r in &e.representatives {
                let _ = writeln!(s, "         rep: {}", spec.display(r));
            }
        }
    }
    if !any {
        let _ = writeln!(s, "(homology vanishes in every bidegree)");
    } else {
        let _ = writeln!(s, "all other bidegrees vanish");
    }
    s
}

pub fn homology_json(table: &HomologyTable<'_>) -> String {
    let spec = table.spec();
    let entries: Vec<Value> = table
        .entries()
        .map(|e| {
            json!({
                "arity": e.arity,
                "grading": e.grading,
                "degree": e.degree(),
                "chains": e.chains,
                "cycles": e.cycles,
                "boundaries": e.boundaries,
                "betti": e.betti,
                "torsion": e.torsion.iter().map(ToString::to_string).collect::<Vec<_>>(),
                "representatives": e.representatives.iter().map(|r| terms(spec, r)).collect::<Vec<_>>(),
            })
        })
        .collect();
    let doc = json!({
        "schema": SCHEMA_VERSION,
        "operad": spec.name(),
        "flavor": table.flavor().to_string(),
        "coefficients": table.coefficients().tag(),
        "cap": table.cap(),
        "entries": entries,
    });
    serde_json::to_string_pretty(&doc).expect("serializable")
}

pub fn element_text(spec: &OperadSpec, x: &OperadElement) -> String {
    if x.is_zero() {
        return "0\n".to_string();
    }
    let g = gradings(spec, x);
    let grading = match g.as_slice() {
        [one] => format!("grading {one}"),
        many => format!("gradings {}", many.iter().map(ToString::to_string).collect::<Vec<_>>().join(", ")),
    };
    format!("{}\narity {}, {grading}\n", spec.display(x), x.arity())
}

pub fn element_json(spec: &OperadSpec, expression: &str, x: &OperadElement) -> String {
    let doc = json!({
        "schema": SCHEMA_VERSION,
        "expression": expression,
        "value": spec.display(x),
        "arity": if x.is_zero() { Value::Null } else { json!(x.arity()) },
        "gradings": gradings(spec, x),
        "terms": terms(spec, x),
    });
    serde_json::to_string_pretty(&doc).expect("serializable")
}
