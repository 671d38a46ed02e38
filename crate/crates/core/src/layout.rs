//! Geometric stabilizer-code layouts: qubits with coordinates, stabilizer
//! generators, boundary and defect metadata, named logical operators and
//! idle strings, plus validation and the JSON interchange format.

use std::collections::BTreeMap;
use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::gf2::RowBasis;
use crate::pauli::{in_group, PauliKind, PauliString};

/// Plaquette classification.
#[derive(Copy, Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum StabKind {
    X,
    Z,
    /// Merged plaquette along a dislocation line or at a twist defect.
    Twist,
}

/// Boundary type: `e` condenses Z-string endpoints, `m` condenses X-string
/// endpoints.
#[derive(Copy, Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum BoundaryKind {
    E,
    M,
}

/// A straight piece of code edge with a single boundary type.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct BoundarySegment {
    pub from: (f64, f64),
    pub to: (f64, f64),
    pub kind: BoundaryKind,
}

/// Bulk or boundary defects that carry encoded qubits.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub enum Defect {
    Twist {
        /// Coordinate of the plaquette carrying the Pauli-Y.
        position: (f64, f64),
        /// Removed-qubit path of the dislocation line this twist terminates.
        line: Vec<(f64, f64)>,
    },
    Hole {
        /// Rectangle (x0, y0, x1, y1) of detached qubits.
        region: (f64, f64, f64, f64),
        kind: BoundaryKind,
    },
    BoundaryDefect {
        position: (f64, f64),
    },
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct Qubit {
    pub id: usize,
    pub x: f64,
    pub y: f64,
    /// Holes keep their interior qubits in the layout but detached from
    /// every stabilizer.
    #[serde(default, skip_serializing_if = "std::ops::Not::not")]
    pub detached: bool,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct Stabilizer {
    pub id: usize,
    pub op: PauliString,
    pub kind: StabKind,
}

/// A complete code layout. Immutable after construction and validation.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct CodeLayout {
    pub name: String,
    pub qubits: Vec<Qubit>,
    pub stabilizers: Vec<Stabilizer>,
    pub boundaries: Vec<BoundarySegment>,
    pub defects: Vec<Defect>,
    /// Named logical operators, labels like "X1", "Z1", "Xa", "Ya", "Za".
    pub logicals: BTreeMap<String, PauliString>,
    /// Non-trivial loops carrying no data, initialized to +1 by protocols.
    pub idle_strings: BTreeMap<String, PauliString>,
    pub declared_distance: u32,
}

impl CodeLayout {
    pub fn num_qubits(&self) -> usize {
        self.qubits.len()
    }

    pub fn stabilizer_ops(&self) -> Vec<PauliString> {
        self.stabilizers.iter().map(|s| s.op.clone()).collect()
    }

    /// Rank of the stabilizer group over GF(2).
    pub fn stabilizer_rank(&self) -> usize {
        let mut basis = RowBasis::new(self.symplectic_width());
        for s in &self.stabilizers {
            basis.insert(&s.op.symplectic_bits());
        }
        basis.rank()
    }

    pub fn num_logical_qubits(&self) -> usize {
        self.num_qubits() - self.stabilizer_rank()
    }

    fn symplectic_width(&self) -> usize {
        2 * self.num_qubits().div_ceil(64) * 64
    }

    pub fn logical(&self, label: &str) -> Option<&PauliString> {
        self.logicals.get(label)
    }

    /// Logical labels grouped by qubit name: "X1"/"Z1" → "1".
    pub fn logical_qubit_names(&self) -> Vec<String> {
        let mut names: Vec<String> = Vec::new();
        for label in self.logicals.keys() {
            if let Some(rest) = label.strip_prefix('X') {
                if self.logicals.contains_key(&format!("Z{rest}")) && !names.contains(&rest.to_string()) {
                    names.push(rest.to_string());
                }
            }
        }
        names
    }
}

/// One failed validation check.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub enum ValidationFailure {
    NonCommutingStabilizers { a: usize, b: usize },
    NonHermitianStabilizer { id: usize },
    StabilizerTouchesDetachedQubit { id: usize, qubit: usize },
    LogicalAnticommutesStabilizer { label: String, stabilizer: usize },
    LogicalPairMismatch { a: String, b: String, expected_anticommute: bool },
    LogicalInStabilizerGroup { label: String },
    IdleStringInvalid { label: String, reason: String },
    TwistPlaquetteYCount { id: usize, y_count: usize },
}

impl fmt::Display for ValidationFailure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self:?}")
    }
}

/// Structured validation report; never aborts.
#[derive(Clone, Debug, Serialize)]
pub struct ValidationReport {
    pub n: usize,
    pub stabilizer_count: usize,
    pub rank: usize,
    pub logical_qubits: usize,
    pub named_logicals: usize,
    /// (label_a, label_b) → anticommute
    pub commutation_table: Vec<(String, String, bool)>,
    pub failures: Vec<ValidationFailure>,
}

impl ValidationReport {
    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }
}

/// Check every layout invariant: stabilizer commutativity and hermiticity,
/// rank (duplicated generators are reported unless the layout is known to
/// be redundant, e.g. toric), named-logical algebra, idle strings, and the
/// single-Y rule for twist plaquettes.
pub fn validate(layout: &CodeLayout) -> ValidationReport {
    let mut failures = Vec::new();
    let stabs = &layout.stabilizers;
    let detached: Vec<usize> =
        layout.qubits.iter().filter(|q| q.detached).map(|q| q.id).collect();

    for (i, a) in stabs.iter().enumerate() {
        if !a.op.is_hermitian() {
            failures.push(ValidationFailure::NonHermitianStabilizer { id: a.id });
        }
        for q in &detached {
            if a.op.letter(*q) != PauliKind::I {
                failures.push(ValidationFailure::StabilizerTouchesDetachedQubit {
                    id: a.id,
                    qubit: *q,
                });
            }
        }
        if a.kind == StabKind::Twist {
            // Merged plaquettes along a dislocation carry no Y; the two at
            // the twist endpoints carry exactly one.
            let y_count = a.op.y_weight();
            if y_count > 1 {
                failures.push(ValidationFailure::TwistPlaquetteYCount { id: a.id, y_count });
            }
        }
        for b in stabs.iter().skip(i + 1) {
            if a.op.anticommutes_with(&b.op) {
                failures.push(ValidationFailure::NonCommutingStabilizers { a: a.id, b: b.id });
            }
        }
    }

    let rank = layout.stabilizer_rank();
    let stab_ops = layout.stabilizer_ops();
    let logical_qubits = layout.num_qubits() - rank;

    let mut commutation_table = Vec::new();
    let labels: Vec<&String> = layout.logicals.keys().collect();
    for (i, la) in labels.iter().enumerate() {
        let op_a = &layout.logicals[*la];
        for s in stabs {
            if op_a.anticommutes_with(&s.op) {
                failures.push(ValidationFailure::LogicalAnticommutesStabilizer {
                    label: (*la).clone(),
                    stabilizer: s.id,
                });
            }
        }
        if in_group(op_a, &stab_ops) {
            failures.push(ValidationFailure::LogicalInStabilizerGroup { label: (*la).clone() });
        }
        for lb in labels.iter().skip(i + 1) {
            let op_b = &layout.logicals[*lb];
            let anti = op_a.anticommutes_with(op_b);
            commutation_table.push(((*la).clone(), (*lb).clone(), anti));
            // X<name> and Z<name> must anticommute; all other named pairs
            // must commute. Y<name> anticommutes with both partners.
            let expected = expected_anticommutation(la, lb);
            if anti != expected {
                failures.push(ValidationFailure::LogicalPairMismatch {
                    a: (*la).clone(),
                    b: (*lb).clone(),
                    expected_anticommute: expected,
                });
            }
        }
    }

    for (label, idle) in &layout.idle_strings {
        for s in stabs {
            if idle.anticommutes_with(&s.op) {
                failures.push(ValidationFailure::IdleStringInvalid {
                    label: label.clone(),
                    reason: format!("anticommutes with stabilizer {}", s.id),
                });
            }
        }
        for (llabel, lop) in &layout.logicals {
            if idle.anticommutes_with(lop) {
                failures.push(ValidationFailure::IdleStringInvalid {
                    label: label.clone(),
                    reason: format!("anticommutes with logical {llabel}"),
                });
            }
        }
    }

    ValidationReport {
        n: layout.num_qubits(),
        stabilizer_count: stabs.len(),
        rank,
        logical_qubits,
        named_logicals: layout.logicals.len(),
        commutation_table,
        failures,
    }
}

/// Labels follow "X<name>"/"Y<name>"/"Z<name>". Same name: X–Z, X–Y and
/// Y–Z all anticommute. Different names always commute.
fn expected_anticommutation(a: &str, b: &str) -> bool {
    let (ka, na) = a.split_at(1);
    let (kb, nb) = b.split_at(1);
    na == nb && ka != kb
}

#[derive(Debug, Error)]
pub enum LayoutIoError {
    #[error("JSON error: {0}")]
    Json(#[from] serde_json::Error),
    #[error("layout schema violation: {0}")]
    Schema(String),
    #[error("stabilizers {a} and {b} do not commute")]
    NonCommuting { a: usize, b: usize },
}

/// Interchange document. Field names are part of the stable disk format.
#[derive(Serialize, Deserialize)]
struct LayoutDoc {
    n: usize,
    qubits: Vec<QubitDoc>,
    stabilizers: Vec<StabilizerDoc>,
    logicals: Vec<NamedOpDoc>,
    idle: Vec<NamedOpDoc>,
    distance: u32,
}

#[derive(Serialize, Deserialize)]
struct QubitDoc {
    id: usize,
    x: f64,
    y: f64,
}

#[derive(Serialize, Deserialize)]
struct StabilizerDoc {
    id: usize,
    paulis: BTreeMap<String, String>,
    kind: String,
}

#[derive(Serialize, Deserialize)]
struct NamedOpDoc {
    label: String,
    paulis: BTreeMap<String, String>,
}

fn letters_to_doc(op: &PauliString) -> BTreeMap<String, String> {
    let mut m = BTreeMap::new();
    for q in op.support() {
        m.insert(q.to_string(), op.letter(q).letter().to_string());
    }
    m
}

fn doc_to_pauli(n: usize, doc: &BTreeMap<String, String>) -> Result<PauliString, LayoutIoError> {
    let mut letters = Vec::new();
    for (k, v) in doc {
        let q: usize = k
            .parse()
            .map_err(|_| LayoutIoError::Schema(format!("bad qubit id key {k:?}")))?;
        if q >= n {
            return Err(LayoutIoError::Schema(format!("qubit id {q} out of range (n={n})")));
        }
        let kind = match v.as_str() {
            "X" => PauliKind::X,
            "Y" => PauliKind::Y,
            "Z" => PauliKind::Z,
            other => return Err(LayoutIoError::Schema(format!("bad Pauli letter {other:?}"))),
        };
        letters.push((q, kind));
    }
    PauliString::from_sparse(n, &letters)
        .map_err(|e| LayoutIoError::Schema(format!("bad operator: {e}")))
}

/// Serialize a layout to the interchange JSON (canonical, deterministic).
pub fn export_json(layout: &CodeLayout) -> String {
    let doc = LayoutDoc {
        n: layout.num_qubits(),
        qubits: layout
            .qubits
            .iter()
            .map(|q| QubitDoc { id: q.id, x: q.x, y: q.y })
            .collect(),
        stabilizers: layout
            .stabilizers
            .iter()
            .map(|s| StabilizerDoc {
                id: s.id,
                paulis: letters_to_doc(&s.op),
                kind: match s.kind {
                    StabKind::X => "X".to_string(),
                    StabKind::Z => "Z".to_string(),
                    StabKind::Twist => "twist".to_string(),
                },
            })
            .collect(),
        logicals: layout
            .logicals
            .iter()
            .map(|(label, op)| NamedOpDoc { label: label.clone(), paulis: letters_to_doc(op) })
            .collect(),
        idle: layout
            .idle_strings
            .iter()
            .map(|(label, op)| NamedOpDoc { label: label.clone(), paulis: letters_to_doc(op) })
            .collect(),
        distance: layout.declared_distance,
    };
    serde_json::to_string_pretty(&doc).expect("layout serialization cannot fail")
}

/// Load a generic CSS (or any stabilizer) layout from interchange JSON.
///
/// Stabilizer commutativity is enforced. A declared distance that later
/// turns out inconsistent is a warning left to `distance_up_to`, not an
/// error here.
pub fn load_json(text: &str) -> Result<CodeLayout, LayoutIoError> {
    let doc: LayoutDoc = serde_json::from_str(text)?;
    if doc.qubits.len() != doc.n {
        return Err(LayoutIoError::Schema(format!(
            "n={} but {} qubits listed",
            doc.n,
            doc.qubits.len()
        )));
    }
    for (i, q) in doc.qubits.iter().enumerate() {
        if q.id != i {
            return Err(LayoutIoError::Schema(format!(
                "qubit ids must be 0..n in order; saw {} at position {i}",
                q.id
            )));
        }
    }
    let mut stabilizers = Vec::new();
    for s in &doc.stabilizers {
        let op = doc_to_pauli(doc.n, &s.paulis)?;
        let kind = match s.kind.as_str() {
            "X" => StabKind::X,
            "Z" => StabKind::Z,
            "twist" => StabKind::Twist,
            other => return Err(LayoutIoError::Schema(format!("bad stabilizer kind {other:?}"))),
        };
        stabilizers.push(Stabilizer { id: s.id, op, kind });
    }
    for (i, a) in stabilizers.iter().enumerate() {
        for b in stabilizers.iter().skip(i + 1) {
            if a.op.anticommutes_with(&b.op) {
                return Err(LayoutIoError::NonCommuting { a: a.id, b: b.id });
            }
        }
    }
    let mut logicals = BTreeMap::new();
    for l in &doc.logicals {
        logicals.insert(l.label.clone(), doc_to_pauli(doc.n, &l.paulis)?);
    }
    let mut idle_strings = BTreeMap::new();
    for l in &doc.idle {
        idle_strings.insert(l.label.clone(), doc_to_pauli(doc.n, &l.paulis)?);
    }
    Ok(CodeLayout {
        name: "loaded".to_string(),
        qubits: doc
            .qubits
            .iter()
            .map(|q| Qubit { id: q.id, x: q.x, y: q.y, detached: false })
            .collect(),
        stabilizers,
        boundaries: Vec::new(),
        defects: Vec::new(),
        logicals,
        idle_strings,
        declared_distance: doc.distance,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn toy_layout() -> CodeLayout {
        // 4-qubit code with stabilizers XXXX, ZZZZ: 2 logical qubits.
        let xxxx = PauliString::parse("XXXX").unwrap();
        let zzzz = PauliString::parse("ZZZZ").unwrap();
        CodeLayout {
            name: "toy".into(),
            qubits: (0..4)
                .map(|id| Qubit { id, x: id as f64, y: 0.0, detached: false })
                .collect(),
            stabilizers: vec![
                Stabilizer { id: 0, op: xxxx, kind: StabKind::X },
                Stabilizer { id: 1, op: zzzz, kind: StabKind::Z },
            ],
            boundaries: Vec::new(),
            defects: Vec::new(),
            logicals: BTreeMap::new(),
            idle_strings: BTreeMap::new(),
            declared_distance: 2,
        }
    }

    #[test]
    fn four_qubit_code_counts() {
        let layout = toy_layout();
        let report = validate(&layout);
        assert!(report.passed(), "{:?}", report.failures);
        assert_eq!(report.rank, 2);
        assert_eq!(report.logical_qubits, 2);
    }

    #[test]
    fn json_round_trip_is_bit_exact() {
        let layout = toy_layout();
        let text = export_json(&layout);
        let loaded = load_json(&text).unwrap();
        assert_eq!(export_json(&loaded), text);
        assert_eq!(loaded.num_qubits(), 4);
        assert_eq!(loaded.stabilizers.len(), 2);
    }

    #[test]
    fn anticommuting_input_rejected() {
        let text = r#"{
            "n": 2,
            "qubits": [{"id":0,"x":0.0,"y":0.0},{"id":1,"x":1.0,"y":0.0}],
            "stabilizers": [
                {"id":0,"paulis":{"0":"X"},"kind":"X"},
                {"id":1,"paulis":{"0":"Z"},"kind":"Z"}
            ],
            "logicals": [],
            "idle": [],
            "distance": 1
        }"#;
        match load_json(text) {
            Err(LayoutIoError::NonCommuting { a: 0, b: 1 }) => {}
            other => panic!("expected commutation failure, got {other:?}"),
        }
    }

    #[test]
    fn duplicated_stabilizer_is_rank_deficient() {
        let mut layout = toy_layout();
        let dup = layout.stabilizers[0].clone();
        layout.stabilizers.push(Stabilizer { id: 2, ..dup });
        assert_eq!(layout.stabilizer_rank(), 2);
        assert_eq!(layout.stabilizers.len(), 3);
    }
}
