use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use super::{ConceptError, ConceptGraph};
use crate::graph::{from_document, to_document, to_dot, validate, GraphDocument};
use crate::Scalar;

pub const LIBRARY_FORMAT_VERSION: u32 = 1;

/// Trained concepts in a fixed order, with the class each one votes for.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct ConceptLibrary<F> {
    concepts: Vec<ConceptGraph<F>>,
    class_map: BTreeMap<String, String>,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct LibraryDocument {
    format_version: u32,
    concepts: Vec<ConceptEntry>,
    class_map: BTreeMap<String, String>,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct ConceptEntry {
    label: String,
    samples_absorbed: u32,
    graph: GraphDocument,
}

impl<F: Scalar> ConceptLibrary<F> {
    pub fn new() -> Self {
        ConceptLibrary { concepts: Vec::new(), class_map: BTreeMap::new() }
    }

    pub fn push(&mut self, concept: ConceptGraph<F>, class: &str) -> Result<(), ConceptError> {
        if self.class_map.contains_key(&concept.label) {
            return Err(ConceptError::DuplicateLabel(concept.label));
        }
        let report = validate(&concept.graph);
        if !report.is_ok() {
            return Err(ConceptError::InvalidGraph(report));
        }
        self.class_map.insert(concept.label.clone(), class.to_string());
        self.concepts.push(concept);
        Ok(())
    }

    pub fn concepts(&self) -> &[ConceptGraph<F>] {
        &self.concepts
    }

    pub fn get(&self, label: &str) -> Option<&ConceptGraph<F>> {
        self.concepts.iter().find(|c| c.label == label)
    }

    pub fn class_of(&self, label: &str) -> Option<&str> {
        self.class_map.get(label).map(String::as_str)
    }

    pub fn class_map(&self) -> &BTreeMap<String, String> {
        &self.class_map
    }

    pub fn len(&self) -> usize {
        self.concepts.len()
    }

    pub fn is_empty(&self) -> bool {
        self.concepts.is_empty()
    }

    pub fn to_json(&self) -> String {
        let doc = LibraryDocument {
            format_version: LIBRARY_FORMAT_VERSION,
            concepts: self
                .concepts
                .iter()
                .map(|c| ConceptEntry {
                    label: c.label.clone(),
                    samples_absorbed: c.samples_absorbed,
                    graph: to_document(&c.graph),
                })
                .collect(),
            class_map: self.class_map.clone(),
        };
        serde_json::to_string_pretty(&doc).expect("library documents always serialize")
    }

    pub fn from_json(text: &str) -> Result<Self, ConceptError> {
        let doc: LibraryDocument =
            serde_json::from_str(text).map_err(|e| ConceptError::MalformedLibrary(e.to_string()))?;
        if doc.format_version != LIBRARY_FORMAT_VERSION {
            return Err(ConceptError::MalformedLibrary(format!("unsupported format_version {}", doc.format_version)));
        }
        let mut lib = ConceptLibrary::new();
        for entry in doc.concepts {
            let class = doc
                .class_map
                .get(&entry.label)
                .ok_or_else(|| ConceptError::MalformedLibrary(format!("no class for concept {:?}", entry.label)))?
                .clone();
            if entry.samples_absorbed == 0 {
                return Err(ConceptError::MalformedLibrary(format!("concept {:?} absorbed no samples", entry.label)));
            }
            let graph = from_document(entry.graph)?;
            lib.push(ConceptGraph { graph, label: entry.label, samples_absorbed: entry.samples_absorbed }, &class)?;
        }
        Ok(lib)
    }

    /// One DOT document per concept, keyed by label.
    pub fn to_dot(&self) -> Vec<(String, String)> {
        self.concepts.iter().map(|c| (c.label.clone(), to_dot(&c.graph, &c.label))).collect()
    }
}
