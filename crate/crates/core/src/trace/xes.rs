//! XES ingestion: the `<log><trace><event><string .../></event></trace></log>`
//! skeleton with string attributes on events. Extensions, globals, and
//! non-string attribute types are ignored.

use std::io::BufRead;

use quick_xml::events::Event as XmlEvent;
use quick_xml::Reader;

use crate::error::{Error, Result};
use crate::trace::{AttributeSchema, Event, Trace, TraceSet};

/// Label interned for events that lack a configured key.
pub const MISSING_LABEL: &str = "\u{27e8}missing\u{27e9}";

/// Which event keys become attributes.
#[derive(Debug, Clone)]
pub struct XesConfig {
    pub attribute_keys: Vec<String>,
}

impl Default for XesConfig {
    fn default() -> Self {
        Self {
            attribute_keys: vec!["concept:name".into()],
        }
    }
}

fn xml_err(reader: &Reader<impl BufRead>, e: impl std::fmt::Display) -> Error {
    Error::Xml {
        offset: reader.buffer_position(),
        msg: e.to_string(),
    }
}

/// Parses an XES log into a [`TraceSet`]. One trace per `<trace>`, events in
/// document order; the trace-level `concept:name` becomes the trace id
/// (falling back to `t<index>`).
pub fn parse_xes_log<R: BufRead>(source: R, config: &XesConfig) -> Result<TraceSet> {
    if config.attribute_keys.is_empty() {
        return Err(Error::Schema("at least one attribute key is required".into()));
    }
    let mut schema = AttributeSchema::new(config.attribute_keys.clone())?;
    let n_attrs = config.attribute_keys.len();

    let mut reader = Reader::from_reader(source);
    reader.config_mut().trim_text(true);

    let mut buf = Vec::new();
    let mut traces: Vec<Trace> = Vec::new();

    // Parser state: inside a trace / inside an event.
    let mut in_trace = false;
    let mut in_event = false;
    let mut trace_name: Option<String> = None;
    let mut events: Vec<Event> = Vec::new();
    let mut current: Vec<Option<String>> = vec![None; n_attrs];

    loop {
        match reader.read_event_into(&mut buf) {
            Err(e) => return Err(xml_err(&reader, e)),
            Ok(XmlEvent::Eof) => break,
            Ok(XmlEvent::Start(ref el)) => match el.local_name().as_ref() {
                b"trace" => {
                    in_trace = true;
                    trace_name = None;
                    events.clear();
                }
                b"event" if in_trace => {
                    in_event = true;
                    current = vec![None; n_attrs];
                }
                b"string" => {
                    let (key, value) = string_attrs(&reader, el)?;
                    record_string(
                        in_trace,
                        in_event,
                        &key,
                        value,
                        config,
                        &mut trace_name,
                        &mut current,
                    );
                }
                _ => {}
            },
            Ok(XmlEvent::Empty(ref el)) => {
                if el.local_name().as_ref() == b"string" {
                    let (key, value) = string_attrs(&reader, el)?;
                    record_string(
                        in_trace,
                        in_event,
                        &key,
                        value,
                        config,
                        &mut trace_name,
                        &mut current,
                    );
                }
            }
            Ok(XmlEvent::End(ref el)) => match el.local_name().as_ref() {
                b"event" if in_event => {
                    in_event = false;
                    let values = current
                        .iter()
                        .enumerate()
                        .map(|(slot, v)| {
                            schema.intern(slot, v.as_deref().unwrap_or(MISSING_LABEL))
                        })
                        .collect();
                    events.push(Event::new(values));
                }
                b"trace" if in_trace => {
                    in_trace = false;
                    if events.is_empty() {
                        continue; // empty traces carry no information
                    }
                    let id = trace_name
                        .take()
                        .unwrap_or_else(|| format!("t{}", traces.len()));
                    traces.push(Trace {
                        id,
                        events: std::mem::take(&mut events),
                    });
                }
                _ => {}
            },
            Ok(_) => {}
        }
        buf.clear();
    }

    if traces.is_empty() {
        return Err(Error::EmptyInput("no trace elements".into()));
    }
    TraceSet::new(schema, traces)
}

fn string_attrs<R: BufRead>(
    reader: &Reader<R>,
    el: &quick_xml::events::BytesStart,
) -> Result<(String, String)> {
    let mut key = String::new();
    let mut value = String::new();
    for attr in el.attributes() {
        let attr = attr.map_err(|e| xml_err(reader, e))?;
        let v = attr
            .decode_and_unescape_value(reader.decoder())
            .map_err(|e| xml_err(reader, e))?;
        match attr.key.as_ref() {
            b"key" => key = v.into_owned(),
            b"value" => value = v.into_owned(),
            _ => {}
        }
    }
    Ok((key, value))
}

fn record_string(
    in_trace: bool,
    in_event: bool,
    key: &str,
    value: String,
    config: &XesConfig,
    trace_name: &mut Option<String>,
    current: &mut [Option<String>],
) {
    if in_event {
        if let Some(slot) = config.attribute_keys.iter().position(|k| k == key) {
            current[slot] = Some(value);
        }
    } else if in_trace && key == "concept:name" {
        *trace_name = Some(value);
    }
}
