//! CSV ingestion (RFC 4180) and export.

use std::collections::HashMap;
use std::io::{Read, Write};

use crate::error::{Error, Result};
use crate::trace::{AttributeSchema, Event, Trace, TraceSet};

/// Column roles for CSV ingestion.
#[derive(Debug, Clone)]
pub struct CsvColumns {
    pub trace_id: String,
    /// Ordering column: integer positions or RFC 3339 timestamps.
    pub order: String,
    pub attributes: Vec<String>,
}

/// Sort key for the ordering column. Integers sort before timestamps so a
/// mixed file still orders deterministically.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
enum OrderKey {
    Int(i64),
    Timestamp(i64),
}

fn parse_order_key(raw: &str, line: u64) -> Result<OrderKey> {
    let raw = raw.trim();
    if let Ok(v) = raw.parse::<i64>() {
        return Ok(OrderKey::Int(v));
    }
    if let Ok(dt) = chrono::DateTime::parse_from_rfc3339(raw) {
        return Ok(OrderKey::Timestamp(dt.timestamp_nanos_opt().unwrap_or(i64::MAX)));
    }
    for fmt in ["%Y-%m-%dT%H:%M:%S%.f", "%Y-%m-%d %H:%M:%S%.f"] {
        if let Ok(dt) = chrono::NaiveDateTime::parse_from_str(raw, fmt) {
            return Ok(OrderKey::Timestamp(
                dt.and_utc().timestamp_nanos_opt().unwrap_or(i64::MAX),
            ));
        }
    }
    Err(Error::Row {
        line,
        msg: format!("ordering value {raw:?} is neither an integer nor a timestamp"),
    })
}

/// Parses a CSV event log into a [`TraceSet`].
///
/// Events are grouped by trace id (traces in first-seen order), sorted by the
/// ordering column ascending with ties keeping file order. Dictionaries are
/// built in first-seen row order.
pub fn parse_csv_log<R: Read>(source: R, config: &CsvColumns) -> Result<TraceSet> {
    if config.attributes.is_empty() {
        return Err(Error::Schema("at least one attribute column is required".into()));
    }
    let mut rdr = csv::ReaderBuilder::new().has_headers(true).from_reader(source);
    let headers = rdr.headers()?.clone();
    if headers.is_empty() || (headers.len() == 1 && headers[0].is_empty()) {
        return Err(Error::EmptyInput("no header row".into()));
    }
    let col = |name: &str| -> Result<usize> {
        headers
            .iter()
            .position(|h| h == name)
            .ok_or_else(|| Error::Schema(format!("missing column {name:?}")))
    };
    let id_col = col(&config.trace_id)?;
    let order_col = col(&config.order)?;
    let attr_cols: Vec<usize> = config.attributes.iter().map(|a| col(a)).collect::<Result<_>>()?;

    let mut schema = AttributeSchema::new(config.attributes.clone())?;
    // trace id -> (first-seen rank, rows of (order key, file order, event))
    let mut groups: HashMap<String, usize> = HashMap::new();
    let mut rows: Vec<Vec<(OrderKey, usize, Event)>> = Vec::new();
    let mut ids: Vec<String> = Vec::new();

    for (file_order, rec) in rdr.records().enumerate() {
        let rec = rec?;
        let line = rec.position().map(|p| p.line()).unwrap_or(0);
        let id = rec
            .get(id_col)
            .ok_or_else(|| Error::Row { line, msg: "short record: missing trace id".into() })?
            .to_string();
        let order_raw = rec
            .get(order_col)
            .ok_or_else(|| Error::Row { line, msg: "short record: missing ordering value".into() })?;
        let key = parse_order_key(order_raw, line)?;
        let mut values = Vec::with_capacity(attr_cols.len());
        for (slot, &c) in attr_cols.iter().enumerate() {
            let raw = rec
                .get(c)
                .ok_or_else(|| Error::Row { line, msg: format!("short record: missing column {:?}", config.attributes[slot]) })?;
            values.push(schema.intern(slot, raw));
        }
        let slot = *groups.entry(id.clone()).or_insert_with(|| {
            ids.push(id.clone());
            rows.push(Vec::new());
            rows.len() - 1
        });
        rows[slot].push((key, file_order, Event::new(values)));
    }

    if ids.is_empty() {
        return Err(Error::EmptyInput("no data rows".into()));
    }

    let mut traces = Vec::with_capacity(ids.len());
    for (id, mut group) in ids.into_iter().zip(rows) {
        group.sort_by(|a, b| a.0.cmp(&b.0).then(a.1.cmp(&b.1)));
        traces.push(Trace {
            id,
            events: group.into_iter().map(|(_, _, e)| e).collect(),
        });
    }
    TraceSet::new(schema, traces)
}

/// Writes a trace set back to CSV with columns `trace_id,position,<attrs...>`.
pub fn export_csv<W: Write>(ts: &TraceSet, sink: W) -> Result<()> {
    let mut w = csv::Writer::from_writer(sink);
    let mut header = vec!["trace_id".to_string(), "position".to_string()];
    header.extend(ts.schema.attribute_names().iter().cloned());
    w.write_record(&header)?;
    for t in &ts.traces {
        for (i, e) in t.events.iter().enumerate() {
            let mut rec = vec![t.id.clone(), (i + 1).to_string()];
            for (a, &c) in e.values.iter().enumerate() {
                rec.push(ts.schema.value_of(a, c).to_string());
            }
            w.write_record(&rec)?;
        }
    }
    w.flush()?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cols(attrs: &[&str]) -> CsvColumns {
        CsvColumns {
            trace_id: "case".into(),
            order: "pos".into(),
            attributes: attrs.iter().map(|s| s.to_string()).collect(),
        }
    }

    #[test]
    fn groups_and_builds_dictionaries() {
        let data = "case,pos,act\nt1,1,a\nt1,2,b\nt2,1,a\n";
        let ts = parse_csv_log(data.as_bytes(), &cols(&["act"])).unwrap();
        assert_eq!(ts.len(), 2);
        assert_eq!(ts.schema.values_of(0), ["a", "b"]);
        assert_eq!(ts.traces[0].events.len(), 2);
    }

    #[test]
    fn reorders_by_position() {
        let data = "case,pos,act\nt1,2,b\nt1,1,a\n";
        let ts = parse_csv_log(data.as_bytes(), &cols(&["act"])).unwrap();
        let t = &ts.traces[0];
        assert_eq!(ts.schema.value_of(0, t.events[0].values[0]), "a");
        assert_eq!(ts.schema.value_of(0, t.events[1].values[0]), "b");
    }

    #[test]
    fn header_only_is_empty_input() {
        let data = "case,pos,act\n";
        assert!(matches!(
            parse_csv_log(data.as_bytes(), &cols(&["act"])),
            Err(Error::EmptyInput(_))
        ));
    }

    #[test]
    fn missing_column_names_it() {
        let data = "case,pos\nt1,1\n";
        match parse_csv_log(data.as_bytes(), &cols(&["act"])) {
            Err(Error::Schema(msg)) => assert!(msg.contains("act")),
            other => panic!("expected schema error, got {other:?}"),
        }
    }

    #[test]
    fn bad_order_value_reports_line() {
        let data = "case,pos,act\nt1,1,a\nt1,oops,b\n";
        match parse_csv_log(data.as_bytes(), &cols(&["act"])) {
            Err(Error::Row { line, .. }) => assert_eq!(line, 3),
            other => panic!("expected row error, got {other:?}"),
        }
    }

    #[test]
    fn timestamp_ordering() {
        let data = "case,pos,act\n\
                    t1,2024-01-02T00:00:00Z,b\n\
                    t1,2024-01-01T23:59:59Z,a\n";
        let ts = parse_csv_log(data.as_bytes(), &cols(&["act"])).unwrap();
        let t = &ts.traces[0];
        assert_eq!(ts.schema.value_of(0, t.events[0].values[0]), "a");
    }

    #[test]
    fn tie_order_keeps_file_order() {
        let data = "case,pos,act\nt1,1,first\nt1,1,second\n";
        let ts = parse_csv_log(data.as_bytes(), &cols(&["act"])).unwrap();
        let t = &ts.traces[0];
        assert_eq!(ts.schema.value_of(0, t.events[0].values[0]), "first");
        assert_eq!(ts.schema.value_of(0, t.events[1].values[0]), "second");
    }

    #[test]
    fn round_trip_preserves_structure() {
        let data = "case,pos,act,sec\nt1,1,a,X\nt2,1,b,Y\nt1,2,b,\"X,1\"\n";
        let ts = parse_csv_log(data.as_bytes(), &cols(&["act", "sec"])).unwrap();
        let mut buf = Vec::new();
        export_csv(&ts, &mut buf).unwrap();
        let cols2 = CsvColumns {
            trace_id: "trace_id".into(),
            order: "position".into(),
            attributes: vec!["act".into(), "sec".into()],
        };
        let ts2 = parse_csv_log(buf.as_slice(), &cols2).unwrap();
        assert_eq!(ts.len(), ts2.len());
        for (a, b) in ts.traces.iter().zip(&ts2.traces) {
            assert_eq!(a.id, b.id);
            assert_eq!(a.len(), b.len());
            for (ea, eb) in a.events.iter().zip(&b.events) {
                for at in 0..2 {
                    assert_eq!(
                        ts.schema.value_of(at, ea.values[at]),
                        ts2.schema.value_of(at, eb.values[at])
                    );
                }
            }
        }
    }

    #[test]
    fn dictionary_determinism() {
        let data = "case,pos,act\nt1,1,z\nt1,2,a\nt2,1,q\n";
        let a = parse_csv_log(data.as_bytes(), &cols(&["act"])).unwrap();
        let b = parse_csv_log(data.as_bytes(), &cols(&["act"])).unwrap();
        assert_eq!(a, b);
    }
}
