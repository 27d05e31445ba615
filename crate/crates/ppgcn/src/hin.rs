//! Typed heterogeneous graph with a validating meta-schema.
//!
//! Nodes carry per-type dense integer indices assigned in insertion order,
//! so per-type adjacency matrices need no global remapping. Edges are binary
//! (duplicates collapse) and must conform to a declared relation type.
//! Construction is single-writer; once built the graph is immutable and can
//! be shared freely across threads.

use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::io::{BufRead, Write};

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::sparse::SparseMatrix;

pub const EVENT_INSTANCE: &str = "EventInstance";
pub const KEYWORD: &str = "Keyword";
pub const ENTITY: &str = "Entity";
pub const TOPIC: &str = "Topic";
pub const USER: &str = "User";

#[derive(Debug, Error)]
pub enum HinError {
    #[error("unknown node type `{0}`")]
    UnknownNodeType(String),
    #[error("unknown relation `{name}` from `{src}` to `{dst}`")]
    UnknownRelation {
        name: String,
        src: String,
        dst: String,
    },
    #[error("duplicate node type `{0}` in schema")]
    DuplicateNodeType(String),
    #[error("duplicate relation `{0}` in schema")]
    DuplicateRelation(String),
    #[error("relation `{relation}` endpoint `{node_type}` is not a declared node type")]
    UndeclaredEndpoint {
        relation: String,
        node_type: String,
    },
    #[error("missing node `{id}` of type `{node_type}`")]
    MissingNode { node_type: String, id: String },
    #[error("duplicate document id `{0}` in corpus")]
    DuplicateDocumentId(String),
    #[error("malformed relations row at line {line}: {reason}")]
    MalformedRow { line: usize, reason: String },
    #[error("corpus line {line}: {reason}")]
    CorpusParse { line: usize, reason: String },
    #[error("snapshot: {0}")]
    Snapshot(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

/// A node type tag. Names are unique within a schema.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct NodeType {
    pub name: String,
}

impl NodeType {
    pub fn new(name: impl Into<String>) -> Self {
        NodeType { name: name.into() }
    }
}

/// A relation type with declared endpoints. `(name, src, dst)` is unique
/// within a schema. Symmetric relations are stored once and traversed in
/// both directions; directed relations expose an implicit inverse.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct RelationType {
    pub name: String,
    pub src: String,
    pub dst: String,
    pub symmetric: bool,
}

impl RelationType {
    pub fn new(
        name: impl Into<String>,
        src: impl Into<String>,
        dst: impl Into<String>,
        symmetric: bool,
    ) -> Self {
        RelationType {
            name: name.into(),
            src: src.into(),
            dst: dst.into(),
            symmetric,
        }
    }

    fn key(&self) -> (String, String, String) {
        (self.name.clone(), self.src.clone(), self.dst.clone())
    }
}

/// Type-level description of a graph: which node types exist and which
/// relations may connect them.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MetaSchema {
    node_types: Vec<NodeType>,
    relation_types: Vec<RelationType>,
}

impl MetaSchema {
    pub fn new(
        node_types: Vec<NodeType>,
        relation_types: Vec<RelationType>,
    ) -> Result<Self, HinError> {
        let mut seen = BTreeSet::new();
        for nt in &node_types {
            if !seen.insert(nt.name.clone()) {
                return Err(HinError::DuplicateNodeType(nt.name.clone()));
            }
        }
        let mut rel_seen = BTreeSet::new();
        for rt in &relation_types {
            if !rel_seen.insert(rt.key()) {
                return Err(HinError::DuplicateRelation(rt.name.clone()));
            }
            for endpoint in [&rt.src, &rt.dst] {
                if !seen.contains(endpoint) {
                    return Err(HinError::UndeclaredEndpoint {
                        relation: rt.name.clone(),
                        node_type: endpoint.clone(),
                    });
                }
            }
        }
        Ok(MetaSchema {
            node_types,
            relation_types,
        })
    }

    pub fn node_types(&self) -> &[NodeType] {
        &self.node_types
    }

    pub fn relation_types(&self) -> &[RelationType] {
        &self.relation_types
    }

    pub fn has_node_type(&self, name: &str) -> bool {
        self.node_types.iter().any(|nt| nt.name == name)
    }

    pub fn find_relation(&self, name: &str, src: &str, dst: &str) -> Option<&RelationType> {
        self.relation_types
            .iter()
            .find(|rt| rt.name == name && rt.src == src && rt.dst == dst)
    }

    /// Relation lookup by name alone; unambiguous in the default schema.
    pub fn relation_by_name(&self, name: &str) -> Option<&RelationType> {
        self.relation_types.iter().find(|rt| rt.name == name)
    }
}

/// The default event schema: event instances connected to keywords,
/// entities, topics and users, plus element-element relations loaded from
/// pre-extracted files.
pub fn default_schema() -> MetaSchema {
    let node_types = vec![
        NodeType::new(EVENT_INSTANCE),
        NodeType::new(KEYWORD),
        NodeType::new(ENTITY),
        NodeType::new(TOPIC),
        NodeType::new(USER),
    ];
    let relation_types = vec![
        RelationType::new("contains", EVENT_INSTANCE, KEYWORD, true),
        RelationType::new("mentions", EVENT_INSTANCE, ENTITY, true),
        RelationType::new("about", EVENT_INSTANCE, TOPIC, true),
        RelationType::new("posted_by", EVENT_INSTANCE, USER, true),
        RelationType::new("synonym", KEYWORD, KEYWORD, true),
        RelationType::new("related_to", ENTITY, ENTITY, true),
        RelationType::new("located_in", ENTITY, ENTITY, false),
        RelationType::new("subtopic_of", TOPIC, TOPIC, false),
        RelationType::new("friend", USER, USER, true),
    ];
    MetaSchema::new(node_types, relation_types).expect("default schema is valid")
}

/// One social message with its extracted event-oriented elements.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EventDocument {
    pub id: String,
    pub text: String,
    #[serde(default)]
    pub keywords: Vec<String>,
    #[serde(default)]
    pub entities: Vec<String>,
    #[serde(default)]
    pub topics: Vec<String>,
    /// Posting user; empty string means unknown (no user node created).
    #[serde(default)]
    pub user: String,
    /// Event class; absent for unlabeled instances.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub label: Option<String>,
}

/// One row of a relations file: an edge between two typed, named nodes.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RelationRow {
    pub src_type: String,
    pub src_id: String,
    pub relation: String,
    pub dst_type: String,
    pub dst_id: String,
}

#[derive(Debug, Clone, Default, Serialize, Deserialize)]
struct NodeTable {
    ids: Vec<String>,
    #[serde(skip)]
    index: HashMap<String, usize>,
}

impl NodeTable {
    fn rebuild_index(&mut self) {
        self.index = self
            .ids
            .iter()
            .enumerate()
            .map(|(i, id)| (id.clone(), i))
            .collect();
    }
}

type RelKey = (String, String, String);

/// A heterogeneous information network instance conforming to a schema.
#[derive(Debug, Clone)]
pub struct Hin {
    schema: MetaSchema,
    tables: BTreeMap<String, NodeTable>,
    edges: BTreeMap<RelKey, BTreeSet<(usize, usize)>>,
}

impl Hin {
    pub fn new(schema: MetaSchema) -> Self {
        let tables = schema
            .node_types()
            .iter()
            .map(|nt| (nt.name.clone(), NodeTable::default()))
            .collect();
        Hin {
            schema,
            tables,
            edges: BTreeMap::new(),
        }
    }

    pub fn schema(&self) -> &MetaSchema {
        &self.schema
    }

    /// Add (or find) a node; indices are dense per type in insertion order.
    pub fn add_node(&mut self, node_type: &str, id: &str) -> Result<usize, HinError> {
        let table = self
            .tables
            .get_mut(node_type)
            .ok_or_else(|| HinError::UnknownNodeType(node_type.to_string()))?;
        if let Some(&idx) = table.index.get(id) {
            return Ok(idx);
        }
        let idx = table.ids.len();
        table.ids.push(id.to_string());
        table.index.insert(id.to_string(), idx);
        Ok(idx)
    }

    pub fn node_count(&self, node_type: &str) -> usize {
        self.tables.get(node_type).map_or(0, |t| t.ids.len())
    }

    pub fn total_node_count(&self) -> usize {
        self.tables.values().map(|t| t.ids.len()).sum()
    }

    pub fn node_index(&self, node_type: &str, id: &str) -> Option<usize> {
        self.tables.get(node_type)?.index.get(id).copied()
    }

    pub fn node_id(&self, node_type: &str, index: usize) -> Option<&str> {
        self.tables
            .get(node_type)?
            .ids
            .get(index)
            .map(String::as_str)
    }

    pub fn node_ids(&self, node_type: &str) -> &[String] {
        self.tables
            .get(node_type)
            .map(|t| t.ids.as_slice())
            .unwrap_or(&[])
    }

    /// Add an edge under a declared relation. Both endpoints must already
    /// exist; duplicates collapse to multiplicity one. Returns true when the
    /// edge is new.
    pub fn add_edge(
        &mut self,
        relation: &RelationType,
        src_id: &str,
        dst_id: &str,
    ) -> Result<bool, HinError> {
        let declared = self
            .schema
            .find_relation(&relation.name, &relation.src, &relation.dst)
            .ok_or_else(|| HinError::UnknownRelation {
                name: relation.name.clone(),
                src: relation.src.clone(),
                dst: relation.dst.clone(),
            })?
            .clone();
        let src_idx =
            self.node_index(&declared.src, src_id)
                .ok_or_else(|| HinError::MissingNode {
                    node_type: declared.src.clone(),
                    id: src_id.to_string(),
                })?;
        let dst_idx =
            self.node_index(&declared.dst, dst_id)
                .ok_or_else(|| HinError::MissingNode {
                    node_type: declared.dst.clone(),
                    id: dst_id.to_string(),
                })?;
        Ok(self
            .edges
            .entry(declared.key())
            .or_default()
            .insert((src_idx, dst_idx)))
    }

    pub fn edge_count(&self, relation: &RelationType) -> usize {
        self.edges.get(&relation.key()).map_or(0, |s| s.len())
    }

    pub fn total_edge_count(&self) -> usize {
        self.edges.values().map(|s| s.len()).sum()
    }

    /// Degree of a node under one relation, counting both stored directions
    /// for symmetric relations.
    pub fn degree(&self, relation: &RelationType, node_type: &str, index: usize) -> usize {
        let Some(set) = self.edges.get(&relation.key()) else {
            return 0;
        };
        let mut n = 0;
        for &(s, d) in set {
            if node_type == relation.src && s == index {
                n += 1;
            } else if relation.symmetric && node_type == relation.dst && d == index {
                // avoid double counting self-loops within one type
                if !(relation.src == relation.dst && s == index && d == index) {
                    n += 1;
                }
            }
        }
        n
    }

    /// Typed 0/1 adjacency for one relation. `inverse` selects the dst->src
    /// orientation. Symmetric same-type relations are symmetrized.
    pub fn typed_adjacency(&self, relation: &RelationType, inverse: bool) -> SparseMatrix {
        let (row_type, col_type) = if inverse {
            (&relation.dst, &relation.src)
        } else {
            (&relation.src, &relation.dst)
        };
        let rows = self.node_count(row_type);
        let cols = self.node_count(col_type);
        let mut triplets = Vec::new();
        if let Some(set) = self.edges.get(&relation.key()) {
            for &(s, d) in set {
                let (r, c) = if inverse { (d, s) } else { (s, d) };
                triplets.push((r, c, 1.0));
                if relation.symmetric && relation.src == relation.dst && s != d {
                    triplets.push(if inverse { (s, d, 1.0) } else { (d, s, 1.0) });
                }
            }
        }
        SparseMatrix::from_triplets(rows, cols, triplets)
            .expect("edges validated on insertion")
    }

    /// Schema closure: every stored edge conforms to a declared relation and
    /// endpoint indices are in range.
    pub fn check_schema_closure(&self) -> bool {
        self.edges.iter().all(|((name, src, dst), set)| {
            self.schema.find_relation(name, src, dst).is_some()
                && set.iter().all(|&(s, d)| {
                    s < self.node_count(src) && d < self.node_count(dst)
                })
        })
    }

    /// Load pre-extracted element-element relation rows, auto-creating
    /// nodes. Returns the number of new edges.
    pub fn load_relations(&mut self, rows: &[RelationRow]) -> Result<usize, HinError> {
        let mut added = 0;
        for row in rows {
            let relation = self
                .schema
                .find_relation(&row.relation, &row.src_type, &row.dst_type)
                .ok_or_else(|| HinError::UnknownRelation {
                    name: row.relation.clone(),
                    src: row.src_type.clone(),
                    dst: row.dst_type.clone(),
                })?
                .clone();
            self.add_node(&row.src_type, &row.src_id)?;
            self.add_node(&row.dst_type, &row.dst_id)?;
            if self.add_edge(&relation, &row.src_id, &row.dst_id)? {
                added += 1;
            }
        }
        Ok(added)
    }
}

/// Build a graph from documents under the default schema: one event node per
/// document, one node per distinct element string, incidence edges for every
/// element occurrence.
pub fn ingest_corpus(documents: &[EventDocument]) -> Result<Hin, HinError> {
    let schema = default_schema();
    let incidence: Vec<RelationType> = ["contains", "mentions", "about", "posted_by"]
        .iter()
        .map(|n| schema.relation_by_name(n).unwrap().clone())
        .collect();
    let mut hin = Hin::new(schema);
    let mut seen = BTreeSet::new();
    for doc in documents {
        if !seen.insert(doc.id.clone()) {
            return Err(HinError::DuplicateDocumentId(doc.id.clone()));
        }
        hin.add_node(EVENT_INSTANCE, &doc.id)?;
    }
    for doc in documents {
        for kw in &doc.keywords {
            hin.add_node(KEYWORD, kw)?;
            hin.add_edge(&incidence[0], &doc.id, kw)?;
        }
        for ent in &doc.entities {
            hin.add_node(ENTITY, ent)?;
            hin.add_edge(&incidence[1], &doc.id, ent)?;
        }
        for topic in &doc.topics {
            hin.add_node(TOPIC, topic)?;
            hin.add_edge(&incidence[2], &doc.id, topic)?;
        }
        if !doc.user.is_empty() {
            hin.add_node(USER, &doc.user)?;
            hin.add_edge(&incidence[3], &doc.id, &doc.user)?;
        }
    }
    Ok(hin)
}

// ---------------------------------------------------------------------------
// File formats
// ---------------------------------------------------------------------------

/// Read a JSON-lines corpus, one document per line.
pub fn read_corpus_jsonl(reader: impl BufRead) -> Result<Vec<EventDocument>, HinError> {
    let mut docs = Vec::new();
    for (i, line) in reader.lines().enumerate() {
        let line = line?;
        if line.trim().is_empty() {
            continue;
        }
        let doc: EventDocument =
            serde_json::from_str(&line).map_err(|e| HinError::CorpusParse {
                line: i + 1,
                reason: e.to_string(),
            })?;
        docs.push(doc);
    }
    Ok(docs)
}

pub fn write_corpus_jsonl(
    mut writer: impl Write,
    documents: &[EventDocument],
) -> Result<(), HinError> {
    for doc in documents {
        let line = serde_json::to_string(doc).map_err(|e| HinError::CorpusParse {
            line: 0,
            reason: e.to_string(),
        })?;
        writeln!(writer, "{line}")?;
    }
    Ok(())
}

/// Read a 5-column TSV of relation rows; `#` starts a comment line.
pub fn read_relations_tsv(reader: impl BufRead) -> Result<Vec<RelationRow>, HinError> {
    let mut rows = Vec::new();
    for (i, line) in reader.lines().enumerate() {
        let line = line?;
        let trimmed = line.trim();
        if trimmed.is_empty() || trimmed.starts_with('#') {
            continue;
        }
        let fields: Vec<&str> = trimmed.split('\t').collect();
        if fields.len() != 5 {
            return Err(HinError::MalformedRow {
                line: i + 1,
                reason: format!("expected 5 tab-separated fields, got {}", fields.len()),
            });
        }
        rows.push(RelationRow {
            src_type: fields[0].to_string(),
            src_id: fields[1].to_string(),
            relation: fields[2].to_string(),
            dst_type: fields[3].to_string(),
            dst_id: fields[4].to_string(),
        });
    }
    Ok(rows)
}

pub fn write_relations_tsv(
    mut writer: impl Write,
    rows: &[RelationRow],
) -> Result<(), HinError> {
    for r in rows {
        writeln!(
            writer,
            "{}\t{}\t{}\t{}\t{}",
            r.src_type, r.src_id, r.relation, r.dst_type, r.dst_id
        )?;
    }
    Ok(())
}

// ---------------------------------------------------------------------------
// Snapshot
// ---------------------------------------------------------------------------

#[derive(Serialize, Deserialize)]
struct SnapshotV1 {
    version: u32,
    schema: MetaSchema,
    tables: BTreeMap<String, NodeTable>,
    edges: BTreeMap<String, Vec<(usize, usize)>>,
}

const SNAPSHOT_VERSION: u32 = 1;

fn rel_key_to_string(key: &RelKey) -> String {
    format!("{}\u{1f}{}\u{1f}{}", key.0, key.1, key.2)
}

fn rel_key_from_string(s: &str) -> Result<RelKey, HinError> {
    let parts: Vec<&str> = s.split('\u{1f}').collect();
    if parts.len() != 3 {
        return Err(HinError::Snapshot(format!("bad relation key `{s}`")));
    }
    Ok((
        parts[0].to_string(),
        parts[1].to_string(),
        parts[2].to_string(),
    ))
}

impl Hin {
    /// Versioned JSON snapshot of schema, node tables and edge lists.
    pub fn to_snapshot_json(&self) -> String {
        let snap = SnapshotV1 {
            version: SNAPSHOT_VERSION,
            schema: self.schema.clone(),
            tables: self.tables.clone(),
            edges: self
                .edges
                .iter()
                .map(|(k, v)| (rel_key_to_string(k), v.iter().copied().collect()))
                .collect(),
        };
        serde_json::to_string_pretty(&snap).expect("snapshot serializes")
    }

    pub fn from_snapshot_json(json: &str) -> Result<Self, HinError> {
        let snap: SnapshotV1 =
            serde_json::from_str(json).map_err(|e| HinError::Snapshot(e.to_string()))?;
        if snap.version != SNAPSHOT_VERSION {
            return Err(HinError::Snapshot(format!(
                "unsupported snapshot version {}",
                snap.version
            )));
        }
        let mut tables = snap.tables;
        for table in tables.values_mut() {
            table.rebuild_index();
        }
        let mut edges = BTreeMap::new();
        for (k, list) in snap.edges {
            edges.insert(rel_key_from_string(&k)?, list.into_iter().collect());
        }
        let hin = Hin {
            schema: snap.schema,
            tables,
            edges,
        };
        if !hin.check_schema_closure() {
            return Err(HinError::Snapshot(
                "snapshot violates schema closure".to_string(),
            ));
        }
        Ok(hin)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn doc(id: &str, keywords: &[&str], entities: &[&str], user: &str) -> EventDocument {
        EventDocument {
            id: id.to_string(),
            text: String::new(),
            keywords: keywords.iter().map(|s| s.to_string()).collect(),
            entities: entities.iter().map(|s| s.to_string()).collect(),
            topics: vec![],
            user: user.to_string(),
            label: None,
        }
    }

    #[test]
    fn add_node_is_idempotent_and_dense() {
        let mut hin = Hin::new(default_schema());
        assert_eq!(hin.add_node(KEYWORD, "quake").unwrap(), 0);
        assert_eq!(hin.add_node(KEYWORD, "quake").unwrap(), 0);
        assert_eq!(hin.add_node(KEYWORD, "china").unwrap(), 1);
        assert_eq!(hin.node_count(KEYWORD), 2);
    }

    #[test]
    fn add_node_unknown_type() {
        let mut hin = Hin::new(default_schema());
        assert!(matches!(
            hin.add_node("Venue", "x"),
            Err(HinError::UnknownNodeType(_))
        ));
    }

    #[test]
    fn add_edge_dedups_and_checks_schema() {
        let mut hin = Hin::new(default_schema());
        hin.add_node(EVENT_INSTANCE, "e1").unwrap();
        hin.add_node(KEYWORD, "quake").unwrap();
        let contains = hin.schema().relation_by_name("contains").unwrap().clone();
        assert!(hin.add_edge(&contains, "e1", "quake").unwrap());
        assert!(!hin.add_edge(&contains, "e1", "quake").unwrap());
        assert_eq!(hin.degree(&contains, EVENT_INSTANCE, 0), 1);

        // relation with mismatched endpoint types is not declared
        let bogus = RelationType::new("contains", EVENT_INSTANCE, USER, true);
        hin.add_node(USER, "alice").unwrap();
        assert!(matches!(
            hin.add_edge(&bogus, "e1", "alice"),
            Err(HinError::UnknownRelation { .. })
        ));
    }

    #[test]
    fn add_edge_missing_endpoint() {
        let mut hin = Hin::new(default_schema());
        hin.add_node(EVENT_INSTANCE, "e1").unwrap();
        let contains = hin.schema().relation_by_name("contains").unwrap().clone();
        assert!(matches!(
            hin.add_edge(&contains, "e1", "quake"),
            Err(HinError::MissingNode { .. })
        ));
    }

    #[test]
    fn ingest_counts_match_incidence_lists() {
        let docs = vec![
            doc("d1", &["quake", "china"], &["CN-Net"], "alice"),
            doc("d2", &["china"], &["CN-Net"], "alice"),
        ];
        let hin = ingest_corpus(&docs).unwrap();
        assert_eq!(hin.node_count(EVENT_INSTANCE), 2);
        assert_eq!(hin.node_count(KEYWORD), 2);
        assert_eq!(hin.node_count(ENTITY), 1);
        assert_eq!(hin.node_count(USER), 1);
        // d1 contributes 4 incidence edges, d2 contributes 3
        assert_eq!(hin.total_edge_count(), 7);
        assert!(hin.check_schema_closure());
    }

    #[test]
    fn ingest_empty_elements_yields_isolated_event() {
        let docs = vec![doc("d1", &[], &[], "")];
        let hin = ingest_corpus(&docs).unwrap();
        assert_eq!(hin.node_count(EVENT_INSTANCE), 1);
        assert_eq!(hin.total_edge_count(), 0);
    }

    #[test]
    fn ingest_rejects_duplicate_ids() {
        let docs = vec![doc("d1", &[], &[], ""), doc("d1", &[], &[], "")];
        assert!(matches!(
            ingest_corpus(&docs),
            Err(HinError::DuplicateDocumentId(_))
        ));
    }

    #[test]
    fn ingest_is_deterministic() {
        let docs = vec![
            doc("d1", &["a", "b"], &["x"], "u1"),
            doc("d2", &["b", "c"], &["y"], "u2"),
        ];
        let h1 = ingest_corpus(&docs).unwrap();
        let h2 = ingest_corpus(&docs).unwrap();
        assert_eq!(h1.to_snapshot_json(), h2.to_snapshot_json());
    }

    #[test]
    fn load_relations_auto_creates_and_dedups() {
        let mut hin = Hin::new(default_schema());
        let row = RelationRow {
            src_type: ENTITY.into(),
            src_id: "Jiuzhaigou".into(),
            relation: "located_in".into(),
            dst_type: ENTITY.into(),
            dst_id: "China".into(),
        };
        assert_eq!(hin.load_relations(&[row.clone()]).unwrap(), 1);
        assert_eq!(hin.node_count(ENTITY), 2);
        assert_eq!(hin.load_relations(&[row]).unwrap(), 0);
    }

    #[test]
    fn synonym_rows_build_undirected_adjacency() {
        let mut hin = Hin::new(default_schema());
        let rows: Vec<RelationRow> = [("k1", "k2"), ("k2", "k3"), ("k3", "k4")]
            .iter()
            .map(|(a, b)| RelationRow {
                src_type: KEYWORD.into(),
                src_id: a.to_string(),
                relation: "synonym".into(),
                dst_type: KEYWORD.into(),
                dst_id: b.to_string(),
            })
            .collect();
        assert_eq!(hin.load_relations(&rows).unwrap(), 3);
        let synonym = hin.schema().relation_by_name("synonym").unwrap().clone();
        let adj = hin.typed_adjacency(&synonym, false);
        assert_eq!(adj.nnz(), 6); // 3 undirected edges, both orientations
        assert!(adj.is_symmetric());
    }

    #[test]
    fn default_schema_is_heterogeneous() {
        let schema = default_schema();
        assert!(schema.node_types().len() > 1 || schema.relation_types().len() > 1);
        for name in [EVENT_INSTANCE, KEYWORD, ENTITY, TOPIC, USER] {
            assert!(schema.has_node_type(name));
        }
    }

    #[test]
    fn snapshot_roundtrip_preserves_graph() {
        let docs = vec![
            doc("d1", &["quake", "china"], &["CN-Net"], "alice"),
            doc("d2", &["china"], &["CN-Net"], "bob"),
        ];
        let mut hin = ingest_corpus(&docs).unwrap();
        hin.load_relations(&[RelationRow {
            src_type: KEYWORD.into(),
            src_id: "quake".into(),
            relation: "synonym".into(),
            dst_type: KEYWORD.into(),
            dst_id: "china".into(),
        }])
        .unwrap();
        let json = hin.to_snapshot_json();
        let restored = Hin::from_snapshot_json(&json).unwrap();
        assert_eq!(restored.to_snapshot_json(), json);
        assert_eq!(restored.total_edge_count(), hin.total_edge_count());
        assert_eq!(restored.node_index(KEYWORD, "china"), hin.node_index(KEYWORD, "china"));
    }

    #[test]
    fn relations_tsv_roundtrip_with_comments() {
        let text = "# comment line\nEntity\tA\tlocated_in\tEntity\tB\n\nKeyword\tk1\tsynonym\tKeyword\tk2\n";
        let rows = read_relations_tsv(text.as_bytes()).unwrap();
        assert_eq!(rows.len(), 2);
        let mut out = Vec::new();
        write_relations_tsv(&mut out, &rows).unwrap();
        let rows2 = read_relations_tsv(out.as_slice()).unwrap();
        assert_eq!(rows, rows2);
    }

    #[test]
    fn malformed_tsv_row_reports_line() {
        let text = "Entity\tA\tlocated_in\tEntity\n";
        match read_relations_tsv(text.as_bytes()) {
            Err(HinError::MalformedRow { line, .. }) => assert_eq!(line, 1),
            other => panic!("expected malformed row, got {other:?}"),
        }
    }

    #[test]
    fn corpus_jsonl_roundtrip() {
        let docs = vec![
            EventDocument {
                id: "d1".into(),
                text: "quake hits".into(),
                keywords: vec!["quake".into()],
                entities: vec![],
                topics: vec!["disaster".into()],
                user: "alice".into(),
                label: Some("ev0".into()),
            },
            doc("d2", &[], &[], ""),
        ];
        let mut buf = Vec::new();
        write_corpus_jsonl(&mut buf, &docs).unwrap();
        let parsed = read_corpus_jsonl(buf.as_slice()).unwrap();
        assert_eq!(parsed, docs);
    }
}
