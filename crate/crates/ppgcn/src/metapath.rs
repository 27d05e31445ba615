//! Meta-path catalogs and meta-path-instance event similarity.
//!
//! A meta-path is a type-level template; its instance count between two
//! events is the corresponding entry of a chain product of typed adjacency
//! matrices. Per-path counts are Dice-normalized so paths of different
//! lengths become comparable, and the weighted sum of normalized counts is
//! the event similarity used everywhere else in the crate.
//!
//! The default catalog enumerates round-trip templates `Q` then `Q` reversed
//! (event out, same relations back). Those paths have symmetric positive
//! semidefinite count matrices, which keeps every normalized entry in
//! `[0, 1]` and makes the weighted similarity a proper symmetric measure.

use std::collections::{BTreeMap, HashMap};

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::hin::{Hin, MetaSchema, RelationType, EVENT_INSTANCE};
use crate::sparse::{SparseError, SparseMatrix};

#[derive(Debug, Error)]
pub enum MetaPathError {
    #[error(transparent)]
    Sparse(#[from] SparseError),
    #[error("empty meta-path")]
    EmptyPath,
    #[error("step {index} does not chain: `{from}` does not match previous `{to}`")]
    BrokenChain {
        index: usize,
        from: String,
        to: String,
    },
    #[error("relation `{name}` ({src} -> {dst}) not declared in schema")]
    UnknownRelation {
        name: String,
        src: String,
        dst: String,
    },
    #[error("bad meta-path signature `{signature}`: {reason}")]
    BadSignature { signature: String, reason: String },
    #[error("duplicate meta-path signature `{0}`")]
    DuplicateSignature(String),
    #[error("expected {expected} weights, got {got}")]
    WeightCountMismatch { expected: usize, got: usize },
    #[error("negative meta-path weight {value} at index {index}")]
    NegativeWeight { index: usize, value: f64 },
    #[error("weights marked normalized but sum to {0}")]
    NotNormalized(f64),
    #[error("matrices do not share square event dimensions")]
    InconsistentDimensions,
    #[error("event index {index} out of range for {n} events")]
    EventIndexOutOfRange { index: usize, n: usize },
    #[error("weights file is missing meta-path `{0}`")]
    MissingSignature(String),
    #[error("weights file has meta-path `{0}` not present in the catalog")]
    UnexpectedSignature(String),
    #[error("weights file: {0}")]
    WeightsFile(String),
}

/// One traversal step of a meta-path: a declared relation walked either
/// src->dst or dst->src.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PathStep {
    pub relation: RelationType,
    pub inverse: bool,
}

impl PathStep {
    pub fn new(relation: RelationType, inverse: bool) -> Self {
        PathStep { relation, inverse }
    }

    pub fn from_type(&self) -> &str {
        if self.inverse {
            &self.relation.dst
        } else {
            &self.relation.src
        }
    }

    pub fn to_type(&self) -> &str {
        if self.inverse {
            &self.relation.src
        } else {
            &self.relation.dst
        }
    }

    pub fn inverted(&self) -> PathStep {
        PathStep {
            relation: self.relation.clone(),
            inverse: !self.inverse,
        }
    }

    fn signature_part(&self) -> String {
        if self.inverse {
            format!("{}^-1", self.relation.name)
        } else {
            self.relation.name.clone()
        }
    }

    /// Step equivalence as composite relations: a symmetric relation is its
    /// own inverse, so direction is ignored for it.
    fn same_composite(&self, other: &PathStep) -> bool {
        self.relation == other.relation
            && (self.relation.symmetric || self.inverse == other.inverse)
    }
}

/// A type-level path template over a meta-schema.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MetaPath {
    steps: Vec<PathStep>,
}

impl MetaPath {
    pub fn new(steps: Vec<PathStep>) -> Result<Self, MetaPathError> {
        if steps.is_empty() {
            return Err(MetaPathError::EmptyPath);
        }
        for i in 1..steps.len() {
            if steps[i].from_type() != steps[i - 1].to_type() {
                return Err(MetaPathError::BrokenChain {
                    index: i,
                    from: steps[i].from_type().to_string(),
                    to: steps[i - 1].to_type().to_string(),
                });
            }
        }
        Ok(MetaPath { steps })
    }

    pub fn steps(&self) -> &[PathStep] {
        &self.steps
    }

    pub fn len(&self) -> usize {
        self.steps.len()
    }

    pub fn is_empty(&self) -> bool {
        self.steps.is_empty()
    }

    /// Node type sequence, length `len() + 1`.
    pub fn node_types(&self) -> Vec<&str> {
        let mut types = vec![self.steps[0].from_type()];
        types.extend(self.steps.iter().map(|s| s.to_type()));
        types
    }

    /// Canonical string, e.g.
    /// `EventInstance-contains-Keyword-contains^-1-EventInstance`.
    pub fn signature(&self) -> String {
        let mut out = String::from(self.steps[0].from_type());
        for step in &self.steps {
            out.push('-');
            out.push_str(&step.signature_part());
            out.push('-');
            out.push_str(step.to_type());
        }
        out
    }

    /// True when the relation sequence equals its own reversed inverse.
    pub fn is_palindromic(&self) -> bool {
        let n = self.steps.len();
        (0..n).all(|i| self.steps[i].same_composite(&self.steps[n - 1 - i].inverted()))
    }

    /// Parse a signature against a schema. Relations are resolved by name
    /// and the surrounding node types; `^-1` marks a dst->src traversal.
    pub fn parse(schema: &MetaSchema, signature: &str) -> Result<Self, MetaPathError> {
        let bad = |reason: &str| MetaPathError::BadSignature {
            signature: signature.to_string(),
            reason: reason.to_string(),
        };
        // merge the "^-1" marker that the '-' split tears apart
        let raw: Vec<&str> = signature.split('-').collect();
        let mut tokens: Vec<(String, bool)> = Vec::new();
        let mut i = 0;
        while i < raw.len() {
            let tok = raw[i];
            if tok.ends_with('^') && i + 1 < raw.len() && raw[i + 1] == "1" {
                tokens.push((tok[..tok.len() - 1].to_string(), true));
                i += 2;
            } else {
                tokens.push((tok.to_string(), false));
                i += 1;
            }
        }
        if tokens.len() < 3 || tokens.len() % 2 == 0 {
            return Err(bad("expected alternating type-relation-type sequence"));
        }
        let mut steps = Vec::new();
        for w in (0..tokens.len() - 2).step_by(2) {
            let (cur_ty, _) = &tokens[w];
            let (rel_name, inverse) = &tokens[w + 1];
            let (next_ty, _) = &tokens[w + 2];
            if !schema.has_node_type(cur_ty) {
                return Err(bad(&format!("unknown node type `{cur_ty}`")));
            }
            if !schema.has_node_type(next_ty) {
                return Err(bad(&format!("unknown node type `{next_ty}`")));
            }
            let relation = if *inverse {
                schema.find_relation(rel_name, next_ty, cur_ty)
            } else {
                schema.find_relation(rel_name, cur_ty, next_ty)
            }
            .ok_or_else(|| MetaPathError::UnknownRelation {
                name: rel_name.clone(),
                src: if *inverse {
                    next_ty.clone()
                } else {
                    cur_ty.clone()
                },
                dst: if *inverse {
                    cur_ty.clone()
                } else {
                    next_ty.clone()
                },
            })?;
            steps.push(PathStep::new(relation.clone(), *inverse));
        }
        MetaPath::new(steps)
    }
}

/// Ordered, signature-unique collection of meta-paths. Weight vectors align
/// with catalog order, so the order is fixed and persisted.
#[derive(Debug, Clone, PartialEq)]
pub struct MetaPathCatalog {
    paths: Vec<MetaPath>,
}

impl MetaPathCatalog {
    pub fn new(paths: Vec<MetaPath>) -> Result<Self, MetaPathError> {
        let mut seen = BTreeMap::new();
        for p in &paths {
            if seen.insert(p.signature(), ()).is_some() {
                return Err(MetaPathError::DuplicateSignature(p.signature()));
            }
        }
        Ok(MetaPathCatalog { paths })
    }

    pub fn paths(&self) -> &[MetaPath] {
        &self.paths
    }

    pub fn len(&self) -> usize {
        self.paths.len()
    }

    pub fn is_empty(&self) -> bool {
        self.paths.is_empty()
    }

    pub fn signatures(&self) -> Vec<String> {
        self.paths.iter().map(|p| p.signature()).collect()
    }

    /// One signature per line.
    pub fn to_file_string(&self) -> String {
        let mut out = String::new();
        for p in &self.paths {
            out.push_str(&p.signature());
            out.push('\n');
        }
        out
    }

    pub fn from_file_string(schema: &MetaSchema, text: &str) -> Result<Self, MetaPathError> {
        let mut paths = Vec::new();
        for line in text.lines() {
            let line = line.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            paths.push(MetaPath::parse(schema, line)?);
        }
        MetaPathCatalog::new(paths)
    }
}

fn outgoing_steps(schema: &MetaSchema, from: &str) -> Vec<PathStep> {
    let mut steps = Vec::new();
    for rt in schema.relation_types() {
        if rt.src == from {
            steps.push(PathStep::new(rt.clone(), false));
        }
        // A symmetric self-relation walked backwards duplicates the forward
        // step, so only the forward orientation is enumerated for it.
        if rt.dst == from && !(rt.symmetric && rt.src == rt.dst) {
            steps.push(PathStep::new(rt.clone(), true));
        }
    }
    steps
}

fn enumerate_from(
    schema: &MetaSchema,
    at: &str,
    depth: usize,
    max_hops: usize,
    stack: &mut Vec<PathStep>,
    found: &mut BTreeMap<String, MetaPath>,
) {
    if depth == max_hops {
        return;
    }
    for step in outgoing_steps(schema, at) {
        stack.push(step.clone());
        let mut steps = stack.clone();
        steps.extend(stack.iter().rev().map(PathStep::inverted));
        let path = MetaPath::new(steps).expect("round-trip construction chains");
        debug_assert!(path.is_palindromic());
        found.entry(path.signature()).or_insert(path);
        enumerate_from(schema, step.to_type(), depth + 1, max_hops, stack, found);
        stack.pop();
    }
}

/// Enumerate every event-to-event meta-path of the round-trip form: an
/// outgoing template of at most `max_hops` steps starting at
/// `EventInstance`, followed by the same template reversed and inverted.
/// Paths are returned in lexicographic signature order.
pub fn enumerate_metapaths(schema: &MetaSchema, max_hops: usize) -> MetaPathCatalog {
    let mut found: BTreeMap<String, MetaPath> = BTreeMap::new();
    if schema.has_node_type(EVENT_INSTANCE) {
        let mut stack = Vec::new();
        enumerate_from(schema, EVENT_INSTANCE, 0, max_hops, &mut stack, &mut found);
    }
    MetaPathCatalog {
        paths: found.into_values().collect(),
    }
}

fn resolve_step<'a>(hin: &'a Hin, step: &PathStep) -> Result<&'a RelationType, MetaPathError> {
    hin.schema()
        .find_relation(&step.relation.name, &step.relation.src, &step.relation.dst)
        .ok_or_else(|| MetaPathError::UnknownRelation {
            name: step.relation.name.clone(),
            src: step.relation.src.clone(),
            dst: step.relation.dst.clone(),
        })
}

/// Count matrix of a meta-path: the chain product of its typed adjacency
/// matrices, associated left to right. Entry (i, j) is the number of path
/// instances from node i of the start type to node j of the end type.
pub fn coup_matrix(hin: &Hin, path: &MetaPath) -> Result<SparseMatrix, MetaPathError> {
    let mut product: Option<SparseMatrix> = None;
    for step in path.steps() {
        let relation = resolve_step(hin, step)?;
        let adj = hin.typed_adjacency(relation, step.inverse);
        product = Some(match product {
            None => adj,
            Some(p) => p.matmul(&adj)?,
        });
    }
    Ok(product.expect("meta-path is non-empty"))
}

/// Count matrices for a whole catalog, sharing intermediate chain products
/// across paths with a common step prefix.
pub fn coup_matrices(
    hin: &Hin,
    catalog: &MetaPathCatalog,
) -> Result<Vec<SparseMatrix>, MetaPathError> {
    let mut cache: HashMap<String, SparseMatrix> = HashMap::new();
    let mut out = Vec::with_capacity(catalog.len());
    for path in catalog.paths() {
        let mut key = String::new();
        let mut product: Option<SparseMatrix> = None;
        for step in path.steps() {
            key.push('|');
            key.push_str(&step.signature_part());
            if let Some(cached) = cache.get(&key) {
                product = Some(cached.clone());
                continue;
            }
            let relation = resolve_step(hin, step)?;
            let adj = hin.typed_adjacency(relation, step.inverse);
            let next = match product {
                None => adj,
                Some(p) => p.matmul(&adj)?,
            };
            cache.insert(key.clone(), next.clone());
            product = Some(next);
        }
        out.push(product.expect("meta-path is non-empty"));
    }
    Ok(out)
}

/// Dice-normalize a square count matrix on its own support:
/// `S[i,j] = 2 M[i,j] / (M[i,i] + M[j,j])`, taken as 0 when the denominator
/// is 0. The diagonal is materialized densely first because every entry's
/// denominator needs it.
pub fn dice_matrix(m: &SparseMatrix) -> Result<SparseMatrix, MetaPathError> {
    if !m.is_square() {
        return Err(SparseError::NotSquare {
            rows: m.rows(),
            cols: m.cols(),
        }
        .into());
    }
    let diag = m.diagonal();
    let mut triplets = Vec::with_capacity(m.nnz());
    for (i, j, v) in m.iter() {
        let denom = diag[i] + diag[j];
        if denom > 0.0 {
            triplets.push((i, j, 2.0 * v / denom));
        }
    }
    Ok(SparseMatrix::from_triplets(m.rows(), m.cols(), triplets)?)
}

/// Dice matrices for every count matrix of a catalog.
pub fn dice_matrices(counts: &[SparseMatrix]) -> Result<Vec<SparseMatrix>, MetaPathError> {
    counts.iter().map(dice_matrix).collect()
}

/// Learnable per-meta-path weights, aligned with catalog order.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct KiesWeights {
    pub values: Vec<f64>,
    pub normalized: bool,
}

impl KiesWeights {
    pub fn new(values: Vec<f64>, normalized: bool) -> Result<Self, MetaPathError> {
        for (index, &value) in values.iter().enumerate() {
            if !(value >= 0.0) {
                return Err(MetaPathError::NegativeWeight { index, value });
            }
        }
        if normalized {
            let sum: f64 = values.iter().sum();
            if (sum - 1.0).abs() > 1e-9 {
                return Err(MetaPathError::NotNormalized(sum));
            }
        }
        Ok(KiesWeights { values, normalized })
    }

    /// Uniform simplex weights, one per catalog path.
    pub fn uniform(n: usize) -> Self {
        KiesWeights {
            values: vec![1.0 / n as f64; n],
            normalized: true,
        }
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    /// Rescale to sum 1. Weights that sum to 0 are left untouched.
    pub fn normalize(mut self) -> Self {
        let sum: f64 = self.values.iter().sum();
        if sum > 0.0 {
            for v in &mut self.values {
                *v /= sum;
            }
            self.normalized = true;
        }
        self
    }
}

fn check_event_matrices(s_all: &[SparseMatrix]) -> Result<usize, MetaPathError> {
    let mut n = None;
    for s in s_all {
        if !s.is_square() {
            return Err(MetaPathError::InconsistentDimensions);
        }
        match n {
            None => n = Some(s.rows()),
            Some(existing) if existing != s.rows() => {
                return Err(MetaPathError::InconsistentDimensions)
            }
            _ => {}
        }
    }
    n.ok_or(MetaPathError::InconsistentDimensions)
}

/// Weighted meta-path similarity between two events: the weight-sum of the
/// Dice-normalized counts, accumulated in catalog order so that
/// `kies(i, j) == kies(j, i)` exactly.
pub fn kies(
    i: usize,
    j: usize,
    s_all: &[SparseMatrix],
    weights: &KiesWeights,
) -> Result<f64, MetaPathError> {
    let n = check_event_matrices(s_all)?;
    if weights.len() != s_all.len() {
        return Err(MetaPathError::WeightCountMismatch {
            expected: s_all.len(),
            got: weights.len(),
        });
    }
    for index in [i, j] {
        if index >= n {
            return Err(MetaPathError::EventIndexOutOfRange { index, n });
        }
    }
    let mut sum = 0.0;
    for (s, &w) in s_all.iter().zip(weights.values.iter()) {
        sum += w * s.get(i, j);
    }
    Ok(sum)
}

/// Symmetric event adjacency with zero diagonal: `A[i,j]` is the weighted
/// similarity for `i != j` on the union of the per-path supports. Self-loops
/// are added later by the propagation normalizer.
pub fn build_event_adjacency(
    s_all: &[SparseMatrix],
    weights: &KiesWeights,
) -> Result<SparseMatrix, MetaPathError> {
    let n = check_event_matrices(s_all)?;
    if weights.len() != s_all.len() {
        return Err(MetaPathError::WeightCountMismatch {
            expected: s_all.len(),
            got: weights.len(),
        });
    }
    let mut acc: BTreeMap<(usize, usize), f64> = BTreeMap::new();
    for (s, &w) in s_all.iter().zip(weights.values.iter()) {
        for (i, j, v) in s.iter() {
            if i != j {
                *acc.entry((i, j)).or_insert(0.0) += w * v;
            }
        }
    }
    Ok(SparseMatrix::from_triplets(
        n,
        n,
        acc.into_iter().map(|((i, j), v)| (i, j, v)),
    )?)
}

// ---------------------------------------------------------------------------
// Weights file
// ---------------------------------------------------------------------------

#[derive(Serialize, Deserialize)]
struct WeightsFile {
    normalized: bool,
    weights: BTreeMap<String, f64>,
}

/// Serialize weights keyed by meta-path signature.
pub fn weights_to_json(
    signatures: &[String],
    weights: &KiesWeights,
) -> Result<String, MetaPathError> {
    if signatures.len() != weights.len() {
        return Err(MetaPathError::WeightCountMismatch {
            expected: signatures.len(),
            got: weights.len(),
        });
    }
    let file = WeightsFile {
        normalized: weights.normalized,
        weights: signatures
            .iter()
            .cloned()
            .zip(weights.values.iter().copied())
            .collect(),
    };
    serde_json::to_string_pretty(&file).map_err(|e| MetaPathError::WeightsFile(e.to_string()))
}

/// Load signature-keyed weights and align them with a catalog. The file must
/// cover exactly the catalog's signatures; the first mismatch is reported.
pub fn weights_from_json(json: &str, signatures: &[String]) -> Result<KiesWeights, MetaPathError> {
    let file: WeightsFile =
        serde_json::from_str(json).map_err(|e| MetaPathError::WeightsFile(e.to_string()))?;
    let mut values = Vec::with_capacity(signatures.len());
    for sig in signatures {
        match file.weights.get(sig) {
            Some(&w) => values.push(w),
            None => return Err(MetaPathError::MissingSignature(sig.clone())),
        }
    }
    for sig in file.weights.keys() {
        if !signatures.contains(sig) {
            return Err(MetaPathError::UnexpectedSignature(sig.clone()));
        }
    }
    KiesWeights::new(values, file.normalized)
}
