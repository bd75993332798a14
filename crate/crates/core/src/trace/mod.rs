//! Multidimensional trace data model.
//!
//! A [`TraceSet`] is a corpus of traces over a shared [`AttributeSchema`].
//! Every event carries one dense integer code per attribute; string values
//! live only in the per-attribute dictionaries. Downstream analysis works on
//! symbol sequences obtained through [`TraceSet::project`], which interns
//! attribute-value tuples into a dense composite alphabet.

mod csv_io;
mod jsonl;
mod xes;

pub use csv_io::{export_csv, parse_csv_log, CsvColumns};
pub use jsonl::{dump_jsonl, parse_jsonl_log};
pub use xes::{parse_xes_log, XesConfig, MISSING_LABEL};

use std::collections::HashMap;
use std::fmt::Write as _;

use crate::error::{Error, Result};

/// Ordered attribute names plus one value dictionary per attribute.
///
/// Dictionary codes are dense: code `c` for attribute `a` decodes to
/// `values[a][c]`, and every distinct value holds exactly one code.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AttributeSchema {
    names: Vec<String>,
    values: Vec<Vec<String>>,
    lookup: Vec<HashMap<String, u32>>,
}

impl AttributeSchema {
    pub fn new(names: Vec<String>) -> Result<Self> {
        if names.is_empty() {
            return Err(Error::Schema("schema needs at least one attribute".into()));
        }
        let mut seen = HashMap::new();
        for (i, n) in names.iter().enumerate() {
            if n.is_empty() {
                return Err(Error::Schema("attribute names must be non-empty".into()));
            }
            if seen.insert(n.clone(), i).is_some() {
                return Err(Error::Schema(format!("duplicate attribute name {n:?}")));
            }
        }
        let k = names.len();
        Ok(Self {
            names,
            values: vec![Vec::new(); k],
            lookup: vec![HashMap::new(); k],
        })
    }

    pub fn attribute_names(&self) -> &[String] {
        &self.names
    }

    pub fn attribute_count(&self) -> usize {
        self.names.len()
    }

    pub fn attribute_index(&self, name: &str) -> Result<usize> {
        self.names
            .iter()
            .position(|n| n == name)
            .ok_or_else(|| Error::Schema(format!("unknown attribute {name:?}")))
    }

    /// Number of distinct values recorded for attribute `attr`.
    pub fn cardinality(&self, attr: usize) -> usize {
        self.values[attr].len()
    }

    /// Interns `value` for attribute `attr`, assigning codes in first-seen order.
    pub fn intern(&mut self, attr: usize, value: &str) -> u32 {
        if let Some(&c) = self.lookup[attr].get(value) {
            return c;
        }
        let code = self.values[attr].len() as u32;
        self.values[attr].push(value.to_string());
        self.lookup[attr].insert(value.to_string(), code);
        code
    }

    pub fn code_of(&self, attr: usize, value: &str) -> Option<u32> {
        self.lookup[attr].get(value).copied()
    }

    pub fn value_of(&self, attr: usize, code: u32) -> &str {
        &self.values[attr][code as usize]
    }

    pub fn values_of(&self, attr: usize) -> &[String] {
        &self.values[attr]
    }
}

/// One event: a tuple of dictionary codes, one per schema attribute.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Event {
    pub values: Vec<u32>,
}

impl Event {
    pub fn new(values: Vec<u32>) -> Self {
        Self { values }
    }
}

/// An ordered, non-empty list of events. The 1-based list position of an
/// event is its index.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Trace {
    pub id: String,
    pub events: Vec<Event>,
}

impl Trace {
    pub fn len(&self) -> usize {
        self.events.len()
    }

    pub fn is_empty(&self) -> bool {
        self.events.is_empty()
    }
}

/// A corpus of traces conforming to one schema, with unique trace ids.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TraceSet {
    pub schema: AttributeSchema,
    pub traces: Vec<Trace>,
}

impl TraceSet {
    pub fn new(schema: AttributeSchema, traces: Vec<Trace>) -> Result<Self> {
        let mut ids = HashMap::new();
        for (i, t) in traces.iter().enumerate() {
            if t.events.is_empty() {
                return Err(Error::Consistency(format!("trace {:?} has no events", t.id)));
            }
            if ids.insert(t.id.clone(), i).is_some() {
                return Err(Error::Consistency(format!("duplicate trace id {:?}", t.id)));
            }
            for e in &t.events {
                if e.values.len() != schema.attribute_count() {
                    return Err(Error::Consistency(format!(
                        "trace {:?}: event arity {} does not match schema arity {}",
                        t.id,
                        e.values.len(),
                        schema.attribute_count()
                    )));
                }
                for (a, &c) in e.values.iter().enumerate() {
                    if c as usize >= schema.cardinality(a) {
                        return Err(Error::Consistency(format!(
                            "trace {:?}: code {} out of range for attribute {:?}",
                            t.id,
                            c,
                            schema.attribute_names()[a]
                        )));
                    }
                }
            }
        }
        Ok(Self { schema, traces })
    }

    pub fn len(&self) -> usize {
        self.traces.len()
    }

    pub fn is_empty(&self) -> bool {
        self.traces.is_empty()
    }

    pub fn trace_by_id(&self, id: &str) -> Option<&Trace> {
        self.traces.iter().find(|t| t.id == id)
    }

    /// Keeps the first `n` traces; the schema (and its dictionaries) is shared.
    pub fn head(&self, n: usize) -> TraceSet {
        TraceSet {
            schema: self.schema.clone(),
            traces: self.traces.iter().take(n).cloned().collect(),
        }
    }

    /// Projects every event onto `attrs`, interning the value tuples into a
    /// dense composite alphabet. Output sequences stay aligned 1:1 with the
    /// input events.
    pub fn project(&self, attrs: &[&str]) -> Result<SymbolCorpus> {
        if attrs.is_empty() {
            return Err(Error::Schema("projection needs at least one attribute".into()));
        }
        let idx: Vec<usize> = attrs
            .iter()
            .map(|a| self.schema.attribute_index(a))
            .collect::<Result<_>>()?;

        let mut alphabet: Vec<Vec<u32>> = Vec::new();
        let mut interner: HashMap<Vec<u32>, u32> = HashMap::new();
        let mut sequences = Vec::with_capacity(self.traces.len());
        let mut trace_ids = Vec::with_capacity(self.traces.len());

        for t in &self.traces {
            let mut seq = Vec::with_capacity(t.events.len());
            for e in &t.events {
                let tuple: Vec<u32> = idx.iter().map(|&a| e.values[a]).collect();
                let code = match interner.get(&tuple) {
                    Some(&c) => c,
                    None => {
                        let c = alphabet.len() as u32;
                        interner.insert(tuple.clone(), c);
                        alphabet.push(tuple);
                        c
                    }
                };
                seq.push(code);
            }
            sequences.push(seq);
            trace_ids.push(t.id.clone());
        }

        let attr_names: Vec<String> = idx.iter().map(|&a| self.schema.names[a].clone()).collect();
        let attr_values: Vec<Vec<String>> = idx.iter().map(|&a| self.schema.values[a].clone()).collect();
        let labels = alphabet
            .iter()
            .map(|tuple| {
                let mut s = String::new();
                for (slot, &code) in tuple.iter().enumerate() {
                    if slot > 0 {
                        s.push('|');
                    }
                    let _ = write!(s, "{}", attr_values[slot][code as usize]);
                }
                s
            })
            .collect();

        Ok(SymbolCorpus {
            attr_names,
            attr_values,
            alphabet,
            labels,
            trace_ids,
            sequences,
        })
    }

    /// Projection onto all attributes: the canonical original symbol space.
    pub fn full_symbols(&self) -> SymbolCorpus {
        let names: Vec<&str> = self.schema.names.iter().map(|s| s.as_str()).collect();
        self.project(&names).expect("schema has at least one attribute")
    }
}

/// Traces rewritten as sequences over a dense composite alphabet.
///
/// `alphabet[c]` is the attribute-code tuple behind composite code `c`;
/// `labels[c]` is its human-readable form (`|`-joined attribute values).
#[derive(Debug, Clone, PartialEq)]
pub struct SymbolCorpus {
    pub attr_names: Vec<String>,
    pub attr_values: Vec<Vec<String>>,
    pub alphabet: Vec<Vec<u32>>,
    pub labels: Vec<String>,
    pub trace_ids: Vec<String>,
    pub sequences: Vec<Vec<u32>>,
}

impl SymbolCorpus {
    pub fn alphabet_size(&self) -> usize {
        self.alphabet.len()
    }

    pub fn len(&self) -> usize {
        self.sequences.len()
    }

    pub fn is_empty(&self) -> bool {
        self.sequences.is_empty()
    }

    pub fn attr_index(&self, name: &str) -> Result<usize> {
        self.attr_names
            .iter()
            .position(|n| n == name)
            .ok_or_else(|| Error::Schema(format!("unknown attribute {name:?}")))
    }

    pub fn sequence_by_id(&self, id: &str) -> Option<&[u32]> {
        self.trace_ids
            .iter()
            .position(|t| t == id)
            .map(|i| self.sequences[i].as_slice())
    }

    /// Corpus content digest (hex); stable across runs for identical data.
    pub fn digest(&self) -> String {
        use sha2::{Digest, Sha256};
        let mut h = Sha256::new();
        for (id, seq) in self.trace_ids.iter().zip(&self.sequences) {
            h.update(id.as_bytes());
            h.update([0u8]);
            for &s in seq {
                h.update(s.to_le_bytes());
            }
            h.update([1u8]);
        }
        for l in &self.labels {
            h.update(l.as_bytes());
            h.update([2u8]);
        }
        hex_string(&h.finalize())
    }
}

pub(crate) fn hex_string(bytes: &[u8]) -> String {
    let mut s = String::with_capacity(bytes.len() * 2);
    for b in bytes {
        let _ = write!(s, "{b:02x}");
    }
    s
}

#[cfg(test)]
mod tests {
    use super::*;

    fn two_attr_set() -> TraceSet {
        let mut schema = AttributeSchema::new(vec!["act".into(), "sec".into()]).unwrap();
        let a = schema.intern(0, "a");
        let b = schema.intern(0, "b");
        let x = schema.intern(1, "X");
        let y = schema.intern(1, "Y");
        let t1 = Trace {
            id: "t1".into(),
            events: vec![Event::new(vec![a, x]), Event::new(vec![b, x])],
        };
        let t2 = Trace {
            id: "t2".into(),
            events: vec![Event::new(vec![a, y])],
        };
        TraceSet::new(schema, vec![t1, t2]).unwrap()
    }

    #[test]
    fn projection_single_attribute() {
        let ts = two_attr_set();
        let c = ts.project(&["sec"]).unwrap();
        assert_eq!(c.sequences[0], vec![0, 0]);
        assert_eq!(c.labels, vec!["X", "Y"]);
    }

    #[test]
    fn projection_tuple_identity() {
        let ts = two_attr_set();
        let c = ts.project(&["act", "sec"]).unwrap();
        assert_eq!(c.alphabet_size(), 3);
        assert_eq!(c.sequences[0], vec![0, 1]);
        assert_eq!(c.labels[0], "a|X");
    }

    #[test]
    fn projection_preserves_length() {
        let ts = two_attr_set();
        let c = ts.full_symbols();
        for (t, seq) in ts.traces.iter().zip(&c.sequences) {
            assert_eq!(t.len(), seq.len());
        }
    }

    #[test]
    fn empty_projection_rejected() {
        let ts = two_attr_set();
        assert!(matches!(ts.project(&[]), Err(Error::Schema(_))));
    }

    #[test]
    fn unknown_attribute_rejected() {
        let ts = two_attr_set();
        assert!(matches!(ts.project(&["nope"]), Err(Error::Schema(_))));
    }

    #[test]
    fn duplicate_trace_ids_rejected() {
        let mut schema = AttributeSchema::new(vec!["act".into()]).unwrap();
        let a = schema.intern(0, "a");
        let t = Trace {
            id: "t".into(),
            events: vec![Event::new(vec![a])],
        };
        let err = TraceSet::new(schema, vec![t.clone(), t]);
        assert!(matches!(err, Err(Error::Consistency(_))));
    }
}
