//! JSON input documents and report rendering.
//!
//! ```json
//! {"kind": "bell",
//!  "labels": {"a1": ["Horse", "Bear"], "b1": ["Growls", "Whinnies"]},
//!  "contexts": {
//!    "a1b1": {"table": {"pp": ".049", "pm": ".630", "mp": ".259", "mm": ".062"}},
//!    "a1b2": {"counts": {"pp": 48, "pm": 2, "mp": 24, "mm": 7}},
//!    "a2b1": {"expectations": {"ab": "0.655", "a": "0.729", "b": "0.729"}},
//!    ...}}
//! ```
//!
//! LG documents use the context keys `xy`, `xz`, `yz`; each context may name
//! its two singles with `"s1"`/`"s2"` (e.g. `"x12"`, `"y12"`), and naming
//! them in reverse order transposes the payload. Decimal strings are read
//! exactly; JSON numbers are read through their shortest decimal form.
//! Within a document every context uses the same payload kind. Label lists
//! are informational; their first entry is the +1 outcome.

use std::fmt::Write as _;

use serde::Serialize;
use serde_json::{Map, Value};

use crate::error::{Error, Result};
use crate::measures::{self, BellReport, LGReport};
use crate::model::{
    BellObservables, ContextTable, LGObservables, Observables, SystemKind, BELL_CONTEXT_KEYS,
    LG_CONTEXT_KEYS,
};
use crate::rational::Rational;

/// Tolerance on the cell sum of decimal tables.
pub const TABLE_TOLERANCE: &str = "0.002";

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PayloadKind {
    Counts,
    Table,
    Expectations,
}

impl PayloadKind {
    fn key(self) -> &'static str {
        match self {
            PayloadKind::Counts => "counts",
            PayloadKind::Table => "table",
            PayloadKind::Expectations => "expectations",
        }
    }
}

/// One context, reduced to its (product, first single, second single)
/// expectations in the declared orientation.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ContextInput {
    pub key: &'static str,
    pub expectations: [Rational; 3],
}

#[derive(Debug, Clone, PartialEq)]
pub struct InputDocument {
    pub kind: SystemKind,
    pub payload: PayloadKind,
    pub contexts: Vec<ContextInput>,
    pub labels: Option<Map<String, Value>>,
}

impl InputDocument {
    pub fn observables(&self) -> Result<Observables> {
        let rows: Vec<[Rational; 3]> = self.contexts.iter().map(|c| c.expectations.clone()).collect();
        let prefix = |e: Error| match e {
            Error::Validation { path, message } => Error::Validation {
                path: format!("contexts.{path}"),
                message,
            },
            other => other,
        };
        Ok(match self.kind {
            SystemKind::Bell => {
                let rows: [[Rational; 3]; 4] = rows.try_into().expect("four contexts");
                BellObservables::from_contexts(&rows).map_err(prefix)?.into()
            }
            SystemKind::Lg => {
                let rows: [[Rational; 3]; 3] = rows.try_into().expect("three contexts");
                LGObservables::from_contexts(&rows).map_err(prefix)?.into()
            }
        })
    }
}

fn invalid(path: impl Into<String>, message: impl Into<String>) -> Error {
    Error::Validation {
        path: path.into(),
        message: message.into(),
    }
}

fn decimal(v: &Value, path: &str) -> Result<Rational> {
    match v {
        Value::String(s) => s.trim().parse().map_err(|_| invalid(path, format!("not a number: {s:?}"))),
        Value::Number(n) => n
            .to_string()
            .parse()
            .map_err(|_| invalid(path, format!("not a number: {n}"))),
        _ => Err(invalid(path, "expected a decimal string")),
    }
}

fn field<'a>(obj: &'a Map<String, Value>, key: &str, path: &str) -> Result<&'a Value> {
    obj.get(key).ok_or_else(|| invalid(format!("{path}.{key}"), "missing field"))
}

fn object<'a>(v: &'a Value, path: &str) -> Result<&'a Map<String, Value>> {
    v.as_object().ok_or_else(|| invalid(path, "expected an object"))
}

const CELLS: [&str; 4] = ["pp", "pm", "mp", "mm"];

fn parse_counts(v: &Value, path: &str) -> Result<ContextTable> {
    let obj = object(v, path)?;
    let mut n = [0i64; 4];
    for (slot, key) in n.iter_mut().zip(CELLS) {
        let p = format!("{path}.{key}");
        let raw = field(obj, key, path)?;
        *slot = raw
            .as_i64()
            .ok_or_else(|| invalid(&p, "expected an integer count"))?;
        if *slot < 0 {
            return Err(invalid(&p, "negative count"));
        }
    }
    let total: i64 = n.iter().sum();
    if total == 0 {
        return Err(invalid(path, "counts sum to zero"));
    }
    let [pp, pm, mp, mm] = n.map(|x| Rational::new(x, total));
    ContextTable::new(pp, pm, mp, mm)
}

fn parse_table(v: &Value, path: &str) -> Result<ContextTable> {
    let obj = object(v, path)?;
    let mut cells = Vec::with_capacity(4);
    for key in CELLS {
        cells.push(decimal(field(obj, key, path)?, &format!("{path}.{key}"))?);
    }
    let [pp, pm, mp, mm]: [Rational; 4] = cells.try_into().expect("four cells");
    let tol: Rational = TABLE_TOLERANCE.parse().expect("constant");
    ContextTable::with_tolerance(pp, pm, mp, mm, &tol).map_err(|e| match e {
        Error::Validation { path: p, message } => invalid(format!("{path}.{p}"), message),
        other => other,
    })
}

fn parse_expectations(v: &Value, path: &str) -> Result<[Rational; 3]> {
    let obj = object(v, path)?;
    let mut out = Vec::with_capacity(3);
    for key in ["ab", "a", "b"] {
        out.push(decimal(field(obj, key, path)?, &format!("{path}.{key}"))?);
    }
    Ok(out.try_into().expect("three values"))
}

/// The two single names of each LG context, in canonical orientation.
const LG_SINGLES: [(&str, &str); 3] = [("x12", "y12"), ("x13", "z13"), ("y23", "z23")];

pub fn parse_input(text: &str) -> Result<InputDocument> {
    let root: Value = serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))?;
    let root = object(&root, "document")?;
    let kind: SystemKind = match field(root, "kind", "document")? {
        Value::String(s) => s.parse().map_err(|_| invalid("kind", format!("unknown kind {s:?}")))?,
        _ => return Err(invalid("kind", "expected a string")),
    };
    let labels = match root.get("labels") {
        None | Some(Value::Null) => None,
        Some(Value::Object(m)) => Some(m.clone()),
        Some(_) => return Err(invalid("labels", "expected an object")),
    };
    let contexts = object(field(root, "contexts", "document")?, "contexts")?;
    let keys: &[&'static str] = match kind {
        SystemKind::Bell => &BELL_CONTEXT_KEYS,
        SystemKind::Lg => &LG_CONTEXT_KEYS,
    };
    if let Some(extra) = contexts.keys().find(|k| !keys.contains(&k.as_str())) {
        return Err(invalid(format!("contexts.{extra}"), "unknown context key"));
    }

    let mut payload: Option<PayloadKind> = None;
    let mut out = Vec::with_capacity(keys.len());
    for (k, &key) in keys.iter().enumerate() {
        let path = format!("contexts.{key}");
        let ctx = object(
            contexts
                .get(key)
                .ok_or_else(|| invalid(&path, "missing context"))?,
            &path,
        )?;
        let present: Vec<PayloadKind> = [PayloadKind::Counts, PayloadKind::Table, PayloadKind::Expectations]
            .into_iter()
            .filter(|p| ctx.contains_key(p.key()))
            .collect();
        let this = match present[..] {
            [p] => p,
            [] => return Err(invalid(&path, "expected one of counts, table, expectations")),
            _ => return Err(invalid(&path, "more than one payload")),
        };
        match payload {
            None => payload = Some(this),
            Some(p) if p != this => {
                return Err(invalid(
                    &path,
                    format!("mixed payload kinds: {} after {}", this.key(), p.key()),
                ))
            }
            _ => {}
        }
        let inner_path = format!("{path}.{}", this.key());
        let inner = &ctx[this.key()];
        let mut expectations = match this {
            PayloadKind::Counts => {
                let (ab, a, b) = parse_counts(inner, &inner_path)?.expectations();
                [ab, a, b]
            }
            PayloadKind::Table => {
                let (ab, a, b) = parse_table(inner, &inner_path)?.expectations();
                [ab, a, b]
            }
            PayloadKind::Expectations => parse_expectations(inner, &inner_path)?,
        };
        if kind == SystemKind::Lg {
            if lg_orientation(ctx, k, &path)? {
                expectations.swap(1, 2);
            }
        } else if ctx.contains_key("s1") || ctx.contains_key("s2") {
            return Err(invalid(&path, "single names are only used by LG contexts"));
        }
        out.push(ContextInput { key, expectations });
    }
    Ok(InputDocument {
        kind,
        payload: payload.expect("at least one context"),
        contexts: out,
        labels,
    })
}

/// `true` when the context names its singles in reverse order.
fn lg_orientation(ctx: &Map<String, Value>, k: usize, path: &str) -> Result<bool> {
    let name = |key: &str| -> Result<Option<String>> {
        match ctx.get(key) {
            None => Ok(None),
            Some(Value::String(s)) => Ok(Some(s.to_ascii_lowercase())),
            Some(_) => Err(invalid(format!("{path}.{key}"), "expected a variable name")),
        }
    };
    let (first, second) = LG_SINGLES[k];
    match (name("s1")?, name("s2")?) {
        (None, None) => Ok(false),
        (Some(a), Some(b)) if a == first && b == second => Ok(false),
        (Some(a), Some(b)) if a == second && b == first => Ok(true),
        (Some(a), Some(b)) => Err(invalid(
            path,
            format!("singles {a}/{b} do not belong here; expected {first} and {second}"),
        )),
        _ => Err(invalid(path, "give both s1 and s2 or neither")),
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Report {
    Bell(BellReport),
    Lg(LGReport),
}

pub fn analyze(obs: &Observables) -> Report {
    match obs {
        Observables::Bell(b) => Report::Bell(measures::contextuality_degree_bell(b)),
        Observables::Lg(l) => Report::Lg(measures::delta_min_lg(l)),
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Format {
    Json,
    Text,
}

impl std::str::FromStr for Format {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "json" => Ok(Format::Json),
            "text" => Ok(Format::Text),
            _ => Err(Error::Parse(format!("unknown format {s:?}"))),
        }
    }
}

pub const DEFAULT_PRECISION: usize = 6;

/// Integers print as integers, everything else as a rounded decimal.
fn number(r: &Rational, precision: usize) -> String {
    if r.is_integer() {
        r.to_string()
    } else {
        r.to_decimal(precision)
    }
}

#[derive(Serialize)]
struct Value2 {
    exact: String,
    decimal: String,
}

fn value(r: &Rational, precision: usize) -> Value2 {
    Value2 {
        exact: r.to_string(),
        decimal: r.to_decimal(precision),
    }
}

#[derive(Serialize)]
struct InequalityJson {
    lhs: String,
    value: Value2,
    bound: Value2,
    holds: bool,
}

#[derive(Serialize)]
struct BellJson {
    kind: &'static str,
    delta0: Value2,
    delta_chsh: Value2,
    delta_min: Value2,
    degree: Value2,
    contextual: bool,
    marginal_selectivity: bool,
    delta_lower: Value2,
    delta_upper: Value2,
    inequalities: Vec<InequalityJson>,
}

#[derive(Serialize)]
struct LgJson {
    kind: &'static str,
    delta0: Value2,
    delta_sz: Value2,
    delta_min: Value2,
    degree: Value2,
    contextual: bool,
    marginal_selectivity: bool,
    delta_lower: Value2,
    delta_upper: Value2,
    two_sided_holds: bool,
    inequalities: Vec<InequalityJson>,
}

const CHSH_LABELS: [&str; 4] = [
    "|ab11 + ab12 + ab21 - ab22|",
    "|ab11 + ab12 - ab21 + ab22|",
    "|ab11 - ab12 + ab21 + ab22|",
    "|-ab11 + ab12 + ab21 + ab22|",
];

const SZ_LABELS: [&str; 4] = [
    "xy + yz - xz",
    "xy - yz + xz",
    "-xy + yz + xz",
    "-xy - yz - xz",
];

fn inequalities(labels: &[&str; 4], lhs: &[Rational; 4], bound: &Rational, precision: usize) -> Vec<InequalityJson> {
    labels
        .iter()
        .zip(lhs)
        .map(|(l, v)| InequalityJson {
            lhs: l.to_string(),
            value: value(v, precision),
            bound: value(bound, precision),
            holds: v <= bound,
        })
        .collect()
}

fn text_table(out: &mut String, labels: &[&str; 4], lhs: &[Rational; 4], bound: &Rational, precision: usize) {
    let _ = writeln!(out, "{:<30} {:>12} {:>12}  verdict", "inequality", "lhs", "bound");
    for (l, v) in labels.iter().zip(lhs) {
        let verdict = if v <= bound { "holds" } else { "violated" };
        let _ = writeln!(
            out,
            "{:<30} {:>12} {:>12}  {verdict}",
            l,
            number(v, precision),
            number(bound, precision)
        );
    }
}

/// Deterministic rendering of a report. JSON carries exact fractions and
/// decimals; text lists the measures, the inequality table and a summary.
pub fn serialize_report(r: &Report, format: Format, precision: usize) -> String {
    match (r, format) {
        (Report::Bell(b), Format::Json) => {
            let doc = BellJson {
                kind: "bell",
                delta0: value(&b.delta0, precision),
                delta_chsh: value(&b.delta_chsh, precision),
                delta_min: value(&b.delta_min, precision),
                degree: value(&b.degree, precision),
                contextual: b.is_contextual(),
                marginal_selectivity: b.marginal_selectivity,
                delta_lower: value(&b.delta_lower, precision),
                delta_upper: value(&b.delta_upper, precision),
                inequalities: inequalities(&CHSH_LABELS, &b.chsh_lhs, &b.bound, precision),
            };
            serde_json::to_string_pretty(&doc).expect("serializable") + "\n"
        }
        (Report::Lg(l), Format::Json) => {
            let doc = LgJson {
                kind: "lg",
                delta0: value(&l.delta0, precision),
                delta_sz: value(&l.delta_sz, precision),
                delta_min: value(&l.delta_min, precision),
                degree: value(&l.degree, precision),
                contextual: l.is_contextual(),
                marginal_selectivity: l.marginal_selectivity,
                delta_lower: value(&l.delta_lower, precision),
                delta_upper: value(&l.delta_upper, precision),
                two_sided_holds: l.two_sided_holds,
                inequalities: inequalities(&SZ_LABELS, &l.sz_lhs, &l.bound, precision),
            };
            serde_json::to_string_pretty(&doc).expect("serializable") + "\n"
        }
        (Report::Bell(b), Format::Text) => {
            let mut out = String::new();
            let n = |r: &Rational| number(r, precision);
            let _ = writeln!(out, "system: bell");
            let _ = writeln!(out, "contextuality degree: {}", n(&b.degree));
            let _ = writeln!(out, "Delta0: {}", n(&b.delta0));
            let _ = writeln!(out, "Delta_CHSH: {}", n(&b.delta_chsh));
            let _ = writeln!(out, "Delta_min: {}", n(&b.delta_min));
            let _ = writeln!(out, "marginal selectivity: {}", yes_no(b.marginal_selectivity));
            let _ = writeln!(out, "Delta range over couplings: [{}, {}]", n(&b.delta_lower), n(&b.delta_upper));
            let _ = writeln!(out);
            text_table(&mut out, &CHSH_LABELS, &b.chsh_lhs, &b.bound, precision);
            let _ = writeln!(out);
            let _ = writeln!(out, "summary: degree = {}, Delta0 = {}", n(&b.degree), n(&b.delta0));
            out
        }
        (Report::Lg(l), Format::Text) => {
            let mut out = String::new();
            let n = |r: &Rational| number(r, precision);
            let _ = writeln!(out, "system: lg");
            let _ = writeln!(out, "contextuality degree: {}", n(&l.degree));
            let _ = writeln!(out, "Delta0: {}", n(&l.delta0));
            let _ = writeln!(out, "Delta_SZ: {}", n(&l.delta_sz));
            let _ = writeln!(out, "Delta_min: {}", n(&l.delta_min));
            let _ = writeln!(out, "marginal selectivity: {}", yes_no(l.marginal_selectivity));
            let _ = writeln!(out, "Delta range over couplings: [{}, {}]", n(&l.delta_lower), n(&l.delta_upper));
            let _ = writeln!(out);
            text_table(&mut out, &SZ_LABELS, &l.sz_lhs, &l.bound, precision);
            let _ = writeln!(out);
            let _ = writeln!(out, "summary: degree = {}, Delta0 = {}", n(&l.degree), n(&l.delta0));
            out
        }
    }
}

fn yes_no(b: bool) -> &'static str {
    if b {
        "yes"
    } else {
        "no"
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::q;

    fn bell_doc(contexts: &str) -> String {
        format!(r#"{{"kind": "bell", "contexts": {{{contexts}}}}}"#)
    }

    const UNIFORM_COUNTS: &str = r#"{"counts": {"pp": 25, "pm": 25, "mp": 25, "mm": 25}}"#;

    fn uniform_counts() -> String {
        bell_doc(
            &BELL_CONTEXT_KEYS
                .iter()
                .map(|k| format!("\"{k}\": {UNIFORM_COUNTS}"))
                .collect::<Vec<_>>()
                .join(", "),
        )
    }

    #[test]
    fn counts_become_exact_fractions() {
        let doc = parse_input(&uniform_counts()).unwrap();
        assert_eq!(doc.payload, PayloadKind::Counts);
        assert!(doc.contexts.iter().all(|c| c.expectations == [q("0"), q("0"), q("0")]));
    }

    #[test]
    fn error_paths() {
        let text = uniform_counts().replace("\"a2b2\"", "\"zz\"");
        let Err(Error::Validation { path, .. }) = parse_input(&text) else { panic!() };
        assert_eq!(path, "contexts.zz");

        let text = bell_doc(r#""a1b1": {"counts": {"pp": 1, "pm": 1, "mp": 1, "mm": 1}}"#);
        let Err(Error::Validation { path, message }) = parse_input(&text) else { panic!() };
        assert_eq!((path.as_str(), message.as_str()), ("contexts.a1b2", "missing context"));

        let text = uniform_counts().replacen("\"pm\": 25", "\"pm\": -1", 1);
        let Err(Error::Validation { path, message }) = parse_input(&text) else { panic!() };
        assert_eq!((path.as_str(), message.as_str()), ("contexts.a1b1.counts.pm", "negative count"));

        let table = r#"{"table": {"pp": ".25", "pm": ".25", "mp": ".25", "mm": ".20"}}"#;
        let text = uniform_counts().replacen(UNIFORM_COUNTS, table, 1);
        let Err(Error::Validation { path, message }) = parse_input(&text) else { panic!() };
        assert_eq!(path, "contexts.a1b1.table.sum");
        assert!(message.starts_with("table sum out of tolerance"), "{message}");

        let table = r#"{"table": {"pp": ".25", "pm": ".25", "mp": ".25", "mm": ".25"}}"#;
        let text = uniform_counts().replacen(UNIFORM_COUNTS, table, 1);
        let Err(Error::Validation { path, message }) = parse_input(&text) else { panic!() };
        assert_eq!(path, "contexts.a1b2");
        assert!(message.starts_with("mixed payload kinds"), "{message}");
    }

    #[test]
    fn lg_single_names_orient_the_context() {
        let ctx = |s1: &str, s2: &str, a: &str, b: &str| {
            format!(r#"{{"s1": "{s1}", "s2": "{s2}", "expectations": {{"ab": "0", "a": "{a}", "b": "{b}"}}}}"#)
        };
        let text = format!(
            r#"{{"kind": "lg", "contexts": {{"xy": {}, "xz": {}, "yz": {}}}}}"#,
            ctx("y12", "x12", "0.5", "0.25"),
            ctx("x13", "z13", "0", "0"),
            ctx("y23", "z23", "0", "0"),
        );
        let doc = parse_input(&text).unwrap();
        let Observables::Lg(l) = doc.observables().unwrap() else { panic!() };
        assert_eq!((l.x12().clone(), l.y12().clone()), (q("1/4"), q("1/2")));

        let bad = text.replace("\"x13\"", "\"x12\"");
        assert!(matches!(parse_input(&bad), Err(Error::Validation { .. })));
    }

    #[test]
    fn invalid_expectations_name_the_context() {
        let ctx = r#"{"expectations": {"ab": "1", "a": "1", "b": "-1"}}"#;
        let ok = r#"{"expectations": {"ab": "0", "a": "0", "b": "0"}}"#;
        let text = bell_doc(&format!(r#""a1b1": {ok}, "a1b2": {ctx}, "a2b1": {ok}, "a2b2": {ok}"#));
        let doc = parse_input(&text).unwrap();
        let Err(Error::Validation { path, .. }) = doc.observables() else { panic!() };
        assert_eq!(path, "contexts.a1b2");
    }

    #[test]
    fn reports_are_deterministic() {
        let doc = parse_input(&uniform_counts()).unwrap();
        let r = analyze(&doc.observables().unwrap());
        for f in [Format::Json, Format::Text] {
            assert_eq!(serialize_report(&r, f, 6), serialize_report(&r, f, 6));
        }
        let text = serialize_report(&r, Format::Text, 6);
        assert!(text.contains("contextuality degree: 0\n"));
        assert!(text.contains("Delta_CHSH: -1\n"));
    }

    #[test]
    fn tsirelson_json() {
        let x = Rational::from_f64(0.7071067811865475).unwrap();
        let z = || [[q("0"), q("0")], [q("0"), q("0")]];
        let o = BellObservables::new([[x.clone(), x.clone()], [x.clone(), -&x]], z(), z()).unwrap();
        let r = analyze(&o.into());
        let json: Value = serde_json::from_str(&serialize_report(&r, Format::Json, 6)).unwrap();
        assert_eq!(json["delta_min"]["decimal"], "0.414214");
        assert_eq!(json["inequalities"][0]["holds"], false);
    }
}
