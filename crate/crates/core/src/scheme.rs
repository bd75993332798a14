//! Unified construction of summarization mappings from a scheme description.

use serde::Serialize;

use crate::error::Result;
use crate::summary::{build_attribute_mapping, build_random_mapping, MappingFunction};
use crate::topic::{build_topic_model, ReductionMethod, TopicConfig, TopicModel};
use crate::trace::{SymbolCorpus, TraceSet};

/// A summarization scheme and its parameters.
#[derive(Debug, Clone, Serialize)]
#[serde(tag = "scheme", rename_all = "lowercase")]
pub enum Scheme {
    Identity,
    Attribute {
        attrs: Vec<String>,
    },
    Topic {
        base_attribute: Option<String>,
        k: usize,
        lambda: f64,
        method: ReductionMethod,
        seed: u64,
    },
    Random {
        k: usize,
        seed: u64,
    },
}

impl Scheme {
    pub fn name(&self) -> &'static str {
        match self {
            Scheme::Identity => "identity",
            Scheme::Attribute { .. } => "attribute",
            Scheme::Topic { .. } => "topic",
            Scheme::Random { .. } => "random",
        }
    }
}

/// A mapping over the corpus's composite alphabet, plus the topic model that
/// produced it when the scheme is topic-based.
pub struct BuiltMapping {
    pub mapping: MappingFunction,
    pub topic_model: Option<TopicModel>,
}

/// Builds the mapping for `scheme` against `corpus` (the full-composite
/// symbol space of `ts`).
pub fn build_mapping(ts: &TraceSet, corpus: &SymbolCorpus, scheme: &Scheme) -> Result<BuiltMapping> {
    match scheme {
        Scheme::Identity => Ok(BuiltMapping {
            mapping: MappingFunction::identity(corpus.alphabet_size(), corpus.labels.clone()),
            topic_model: None,
        }),
        Scheme::Attribute { attrs } => {
            let names: Vec<&str> = attrs.iter().map(|s| s.as_str()).collect();
            Ok(BuiltMapping {
                mapping: build_attribute_mapping(corpus, &names)?,
                topic_model: None,
            })
        }
        Scheme::Random { k, seed } => Ok(BuiltMapping {
            mapping: build_random_mapping(corpus.alphabet_size(), *k, *seed)?,
            topic_model: None,
        }),
        Scheme::Topic {
            base_attribute,
            k,
            lambda,
            method,
            seed,
        } => {
            let model = build_topic_model(
                ts,
                &TopicConfig {
                    base_attribute: base_attribute.clone(),
                    k: *k,
                    lambda: *lambda,
                    method: *method,
                    seed: *seed,
                },
            )?;
            let mapping = model.composite_mapping(corpus)?;
            Ok(BuiltMapping {
                mapping,
                topic_model: Some(model),
            })
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::synth::{generate_synthetic_log, SynthConfig};

    #[test]
    fn all_schemes_build_total_mappings() {
        let ts = generate_synthetic_log(&SynthConfig {
            traces: 30,
            activities: 24,
            variants: 2,
            noise: 0.1,
            seed: 3,
        })
        .unwrap();
        let corpus = ts.full_symbols();
        let schemes = [
            Scheme::Identity,
            Scheme::Attribute { attrs: vec!["sector".into()] },
            Scheme::Random { k: 4, seed: 1 },
            Scheme::Topic {
                base_attribute: None,
                k: 4,
                lambda: 0.5,
                method: ReductionMethod::Svd,
                seed: 1,
            },
        ];
        for scheme in &schemes {
            let built = build_mapping(&ts, &corpus, scheme).unwrap();
            assert_eq!(built.mapping.domain_size(), corpus.alphabet_size(), "{}", scheme.name());
            for seq in &corpus.sequences {
                for &s in seq {
                    built.mapping.map(s).unwrap();
                }
            }
        }
    }

    #[test]
    fn attribute_resolution_ordering() {
        // finer attribute subsets give finer summary alphabets
        let ts = generate_synthetic_log(&SynthConfig {
            traces: 50,
            activities: 36,
            variants: 3,
            noise: 0.05,
            seed: 8,
        })
        .unwrap();
        let corpus = ts.full_symbols();
        let by = |attrs: &[&str]| crate::summary::build_attribute_mapping(&corpus, attrs).unwrap().k;
        let act = by(&["activity"]);
        let sector = by(&["sector"]);
        let resource = by(&["resource"]);
        assert!(act >= sector && sector >= resource);
        assert!(act > resource);
    }
}
