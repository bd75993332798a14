//! Canonical JSON-lines dump format: a schema header line followed by one
//! trace per line.

use std::io::{BufRead, Write};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::trace::{AttributeSchema, Event, Trace, TraceSet};

#[derive(Serialize, Deserialize)]
struct SchemaLine {
    attributes: Vec<String>,
    dictionaries: Vec<Vec<String>>,
}

#[derive(Serialize, Deserialize)]
struct TraceLine {
    id: String,
    events: Vec<Vec<u32>>,
}

/// Writes the schema header line and one line per trace.
pub fn dump_jsonl<W: Write>(ts: &TraceSet, mut sink: W) -> Result<()> {
    let header = SchemaLine {
        attributes: ts.schema.attribute_names().to_vec(),
        dictionaries: (0..ts.schema.attribute_count())
            .map(|a| ts.schema.values_of(a).to_vec())
            .collect(),
    };
    serde_json::to_writer(&mut sink, &header)?;
    sink.write_all(b"\n")?;
    for t in &ts.traces {
        let line = TraceLine {
            id: t.id.clone(),
            events: t.events.iter().map(|e| e.values.clone()).collect(),
        };
        serde_json::to_writer(&mut sink, &line)?;
        sink.write_all(b"\n")?;
    }
    Ok(())
}

/// Reads a dump produced by [`dump_jsonl`]. Codes are preserved exactly.
pub fn parse_jsonl_log<R: BufRead>(source: R) -> Result<TraceSet> {
    let mut lines = source.lines();
    let header_line = loop {
        match lines.next() {
            None => return Err(Error::EmptyInput("no schema header line".into())),
            Some(l) => {
                let l = l?;
                if !l.trim().is_empty() {
                    break l;
                }
            }
        }
    };
    let header: SchemaLine = serde_json::from_str(&header_line)?;
    let mut schema = AttributeSchema::new(header.attributes)?;
    if header.dictionaries.len() != schema.attribute_count() {
        return Err(Error::Consistency(
            "dictionary count does not match attribute count".into(),
        ));
    }
    for (a, dict) in header.dictionaries.iter().enumerate() {
        for v in dict {
            schema.intern(a, v);
        }
        if schema.cardinality(a) != dict.len() {
            return Err(Error::Consistency(format!(
                "dictionary for attribute {:?} has duplicate values",
                schema.attribute_names()[a]
            )));
        }
    }

    let mut traces = Vec::new();
    for l in lines {
        let l = l?;
        if l.trim().is_empty() {
            continue;
        }
        let line: TraceLine = serde_json::from_str(&l)?;
        traces.push(Trace {
            id: line.id,
            events: line.events.into_iter().map(Event::new).collect(),
        });
    }
    if traces.is_empty() {
        return Err(Error::EmptyInput("no trace lines".into()));
    }
    TraceSet::new(schema, traces)
}
