//! Checkerboard-patch machinery shared by every rectangular scheme: the
//! plain planar patch, boundary-defect patches, hole pairs, dislocation
//! lines with twist defects, the compact one- and two-qubit gate designs and
//! the dislocation lattice.
//!
//! Convention: data qubits sit on vertices of a `width × height` grid.
//! Plaquettes are unit squares with lower-left corner `(px, py)`, colored X
//! when `px + py + parity` is even and Z otherwise. Edges carry weight-2
//! semicircle stabilizers continuing the checkerboard: Z-semicircles on the
//! top and bottom edges (`e` boundaries), X-semicircles on the left and
//! right edges (`m` boundaries).

use std::collections::{BTreeMap, BTreeSet};

use crate::layout::{
    BoundaryKind, BoundarySegment, CodeLayout, Defect, Qubit, StabKind, Stabilizer,
};
use crate::pauli::{PauliKind, PauliString};

use super::BuildError;

/// A horizontal dislocation line: qubits `(c1..=c2, row)` removed,
/// plaquette pairs straddling the line merged, twist defects at
/// `(c1-1, row)` and `(c2+1, row)`.
#[derive(Copy, Clone, Debug)]
pub struct HLine {
    pub row: i64,
    pub c1: i64,
    pub c2: i64,
}

impl HLine {
    pub fn len(&self) -> i64 {
        self.c2 - self.c1 + 1
    }

    fn merged_columns(&self) -> std::ops::RangeInclusive<i64> {
        self.c1 - 1..=self.c2
    }

    pub fn left_twist(&self) -> (i64, i64) {
        (self.c1 - 1, self.row)
    }

    pub fn right_twist(&self) -> (i64, i64) {
        (self.c2 + 1, self.row)
    }
}

/// A rectangular hole: qubits inside `(x0..=x1, y0..=y1)` are detached.
#[derive(Copy, Clone, Debug)]
pub struct HoleSpec {
    pub x0: i64,
    pub y0: i64,
    pub x1: i64,
    pub y1: i64,
    pub kind: BoundaryKind,
}

impl HoleSpec {
    fn contains(&self, x: i64, y: i64) -> bool {
        x >= self.x0 && x <= self.x1 && y >= self.y0 && y <= self.y1
    }
}

/// A span of the top edge re-typed from `e` to `m`.
#[derive(Copy, Clone, Debug)]
pub struct TopSpan {
    pub x0: i64,
    pub x1: i64,
}

/// Edge order: top, bottom, left, right.
pub type EdgeKinds = [BoundaryKind; 4];

/// Patch description consumed by [`build_patch`].
#[derive(Clone, Debug)]
pub struct PatchSpec {
    pub width: i64,
    pub height: i64,
    /// Checkerboard offset: color X iff `px + py + parity` even.
    pub parity: i64,
    /// Boundary types (top, bottom, left, right). An `e` edge hosts
    /// Z-semicircles, an `m` edge X-semicircles, each where the virtual
    /// plaquette color matches. Corners where both adjacent edges have the
    /// same kind host a weight-1 stabilizer when the diagonal virtual
    /// plaquette color matches too.
    pub edges: EdgeKinds,
    pub lines: Vec<HLine>,
    pub holes: Vec<HoleSpec>,
    pub top_spans: Vec<TopSpan>,
}

impl Default for PatchSpec {
    fn default() -> Self {
        PatchSpec {
            width: 0,
            height: 0,
            parity: 0,
            edges: [BoundaryKind::E, BoundaryKind::E, BoundaryKind::M, BoundaryKind::M],
            lines: Vec::new(),
            holes: Vec::new(),
            top_spans: Vec::new(),
        }
    }
}

pub struct Patch {
    pub spec: PatchSpec,
    /// Retained (non-removed) grid vertices in row-major order.
    pub index: BTreeMap<(i64, i64), usize>,
    pub layout: CodeLayout,
}

impl Patch {
    pub fn qubit(&self, x: i64, y: i64) -> Option<usize> {
        self.index.get(&(x, y)).copied()
    }

    pub fn n(&self) -> usize {
        self.index.len()
    }

    /// Pauli string from (x, y, letter) triples.
    pub fn op(&self, letters: &[((i64, i64), PauliKind)]) -> Result<PauliString, BuildError> {
        let mut sparse = Vec::with_capacity(letters.len());
        for &((x, y), kind) in letters {
            let q = self
                .qubit(x, y)
                .ok_or(BuildError::Geometry(format!("no qubit at ({x}, {y})")))?;
            sparse.push((q, kind));
        }
        PauliString::from_sparse(self.n(), &sparse)
            .map_err(|e| BuildError::Geometry(format!("bad operator: {e}")))
    }

    /// Uniform-letter string along explicit coordinates.
    pub fn string(
        &self,
        coords: impl IntoIterator<Item = (i64, i64)>,
        kind: PauliKind,
    ) -> Result<PauliString, BuildError> {
        let letters: Vec<_> = coords.into_iter().map(|c| (c, kind)).collect();
        self.op(&letters)
    }
}

fn color(spec: &PatchSpec, px: i64, py: i64) -> StabKind {
    if (px + py + spec.parity).rem_euclid(2) == 0 {
        StabKind::X
    } else {
        StabKind::Z
    }
}

fn kind_letter(kind: StabKind) -> PauliKind {
    match kind {
        StabKind::X => PauliKind::X,
        StabKind::Z => PauliKind::Z,
        StabKind::Twist => unreachable!("twist plaquettes assemble their own letters"),
    }
}

/// Build the full layout for a patch specification.
pub fn build_patch(spec: PatchSpec, name: &str, declared_distance: u32) -> Result<Patch, BuildError> {
    let w = spec.width;
    let h = spec.height;
    if w < 2 || h < 2 {
        return Err(BuildError::Geometry(format!("patch {w}x{h} too small")));
    }
    let mut removed: BTreeSet<(i64, i64)> = BTreeSet::new();
    for line in &spec.lines {
        if line.row < 1 || line.row > h - 2 || line.c1 < 2 || line.c2 > w - 3 || line.c1 > line.c2 {
            return Err(BuildError::Geometry(format!("dislocation line {line:?} out of bounds")));
        }
        for c in line.c1..=line.c2 {
            removed.insert((c, line.row));
        }
    }

    // Merged plaquette positions claimed by dislocation lines.
    let mut merged_positions: BTreeSet<(i64, i64)> = BTreeSet::new();
    for line in &spec.lines {
        for px in line.merged_columns() {
            merged_positions.insert((px, line.row));
            merged_positions.insert((px, line.row - 1));
        }
    }

    // Detached hole interiors.
    let mut detached: BTreeSet<(i64, i64)> = BTreeSet::new();
    for hole in &spec.holes {
        for x in hole.x0..=hole.x1 {
            for y in hole.y0..=hole.y1 {
                detached.insert((x, y));
            }
        }
    }

    // Qubits: all grid vertices minus removed ones (detached stay, flagged).
    let mut index = BTreeMap::new();
    let mut qubits = Vec::new();
    for y in 0..h {
        for x in 0..w {
            if removed.contains(&(x, y)) {
                continue;
            }
            let id = qubits.len();
            index.insert((x, y), id);
            qubits.push(Qubit {
                id,
                x: x as f64,
                y: y as f64,
                detached: detached.contains(&(x, y)),
            });
        }
    }
    let n = qubits.len();

    let corners = |px: i64, py: i64| -> Vec<(i64, i64)> {
        vec![(px, py), (px + 1, py), (px, py + 1), (px + 1, py + 1)]
    };
    let make_op = |letters: &[((i64, i64), PauliKind)]| -> PauliString {
        let sparse: Vec<(usize, PauliKind)> =
            letters.iter().map(|&((x, y), k)| (index[&(x, y)], k)).collect();
        PauliString::from_sparse(n, &sparse).expect("indices valid")
    };

    let mut stabilizers: Vec<Stabilizer> = Vec::new();
    let push = |op: PauliString, kind: StabKind, stabs: &mut Vec<Stabilizer>| {
        let id = stabs.len();
        stabs.push(Stabilizer { id, op, kind });
    };

    let in_top_span = |px: i64| spec.top_spans.iter().any(|s| px >= s.x0 && px <= s.x1);
    let hole_at = |x: i64, y: i64| spec.holes.iter().find(|hole| hole.contains(x, y));

    // Bulk plaquettes.
    for py in 0..h - 1 {
        for px in 0..w - 1 {
            if merged_positions.contains(&(px, py)) {
                continue;
            }
            let kind = color(&spec, px, py);
            let letter = kind_letter(kind);
            let cs = corners(px, py);
            let has_detached = cs.iter().any(|&(x, y)| detached.contains(&(x, y)));
            if has_detached {
                // Hole rim: the hole's own kind decides which plaquettes are
                // truncated (kept on their outside qubits) and which are
                // dropped entirely.
                let hole = cs
                    .iter()
                    .find_map(|&(x, y)| hole_at(x, y))
                    .expect("detached qubit must belong to a hole");
                let keep = match hole.kind {
                    // m-hole: X-plaquettes truncate (X condenses on the rim),
                    // Z-plaquettes touching the interior are dropped.
                    BoundaryKind::M => kind == StabKind::X,
                    BoundaryKind::E => kind == StabKind::Z,
                };
                if keep {
                    let letters: Vec<_> = cs
                        .iter()
                        .filter(|&&(x, y)| !detached.contains(&(x, y)))
                        .map(|&c| (c, letter))
                        .collect();
                    if !letters.is_empty() {
                        push(make_op(&letters), kind, &mut stabilizers);
                    }
                }
                continue;
            }
            let letters: Vec<_> = cs.iter().map(|&c| (c, letter)).collect();
            push(make_op(&letters), kind, &mut stabilizers);
        }
    }

    // Merged plaquettes along dislocation lines.
    for line in &spec.lines {
        for px in line.merged_columns() {
            let up_kind = color(&spec, px, line.row);
            let down_kind = color(&spec, px, line.row - 1);
            debug_assert_ne!(up_kind, down_kind);
            let mut letters: BTreeMap<(i64, i64), PauliKind> = BTreeMap::new();
            for (plq_py, plq_kind) in [(line.row, up_kind), (line.row - 1, down_kind)] {
                for c in corners(px, plq_py) {
                    if removed.contains(&c) {
                        continue;
                    }
                    let letter = kind_letter(plq_kind);
                    letters
                        .entry(c)
                        .and_modify(|existing| {
                            // shared survivor carries both X and Z: a Y
                            debug_assert_ne!(*existing, letter);
                            *existing = PauliKind::Y;
                        })
                        .or_insert(letter);
                }
            }
            let letter_vec: Vec<_> = letters.into_iter().collect();
            push(make_op(&letter_vec), StabKind::Twist, &mut stabilizers);
        }
    }

    // Boundary semicircles. Virtual plaquettes continue the checkerboard;
    // an edge of kind K hosts weight-2 stabilizers of K's letter wherever
    // the virtual color matches K.
    let edge_letter = |kind: BoundaryKind| match kind {
        BoundaryKind::E => (StabKind::Z, PauliKind::Z),
        BoundaryKind::M => (StabKind::X, PauliKind::X),
    };
    let [top_kind, bottom_kind, left_kind, right_kind] = spec.edges;

    // Top edge, honoring re-typed spans.
    {
        let (skind, letter) = edge_letter(top_kind);
        for px in 0..w - 1 {
            let c = color(&spec, px, h - 1);
            if in_top_span(px) {
                // Re-typed m-span: X-semicircles where the checkerboard is
                // X, strictly inside the span so each defect point is a
                // one-plaquette gap with no shared qubit.
                if c == StabKind::X && in_top_span(px - 1) && in_top_span(px + 1) {
                    let op = make_op(&[
                        ((px, h - 1), PauliKind::X),
                        ((px + 1, h - 1), PauliKind::X),
                    ]);
                    push(op, StabKind::X, &mut stabilizers);
                }
            } else if c == skind && !in_top_span(px - 1) && !in_top_span(px + 1) {
                let op = make_op(&[((px, h - 1), letter), ((px + 1, h - 1), letter)]);
                push(op, skind, &mut stabilizers);
            }
        }
    }
    {
        let (skind, letter) = edge_letter(bottom_kind);
        for px in 0..w - 1 {
            if color(&spec, px, -1) == skind {
                let op = make_op(&[((px, 0), letter), ((px + 1, 0), letter)]);
                push(op, skind, &mut stabilizers);
            }
        }
    }
    {
        let (skind, letter) = edge_letter(left_kind);
        for py in 0..h - 1 {
            if color(&spec, -1, py) == skind {
                let op = make_op(&[((0, py), letter), ((0, py + 1), letter)]);
                push(op, skind, &mut stabilizers);
            }
        }
    }
    {
        let (skind, letter) = edge_letter(right_kind);
        for py in 0..h - 1 {
            if color(&spec, w - 1, py) == skind {
                let op = make_op(&[((w - 1, py), letter), ((w - 1, py + 1), letter)]);
                push(op, skind, &mut stabilizers);
            }
        }
    }
    // Corner singles where two same-kind edges meet.
    let corner_specs = [
        ((0i64, h - 1), (-1i64, h - 1), top_kind, left_kind),
        ((w - 1, h - 1), (w - 1, h - 1), top_kind, right_kind),
        ((0, 0), (-1, -1), bottom_kind, left_kind),
        ((w - 1, 0), (w - 1, -1), bottom_kind, right_kind),
    ];
    for (qubit, virt, ka, kb) in corner_specs {
        if ka == kb {
            let (skind, letter) = edge_letter(ka);
            if color(&spec, virt.0, virt.1) == skind {
                let op = make_op(&[(qubit, letter)]);
                push(op, skind, &mut stabilizers);
            }
        }
    }

    let mut boundaries = vec![
        BoundarySegment { from: (0.0, (h - 1) as f64), to: ((w - 1) as f64, (h - 1) as f64), kind: spec.edges[0] },
        BoundarySegment { from: (0.0, 0.0), to: ((w - 1) as f64, 0.0), kind: spec.edges[1] },
        BoundarySegment { from: (0.0, 0.0), to: (0.0, (h - 1) as f64), kind: spec.edges[2] },
        BoundarySegment { from: ((w - 1) as f64, 0.0), to: ((w - 1) as f64, (h - 1) as f64), kind: spec.edges[3] },
    ];
    for span in &spec.top_spans {
        boundaries.push(BoundarySegment {
            from: (span.x0 as f64, (h - 1) as f64),
            to: (span.x1 as f64, (h - 1) as f64),
            kind: BoundaryKind::M,
        });
    }

    let mut defects = Vec::new();
    for line in &spec.lines {
        let path: Vec<(f64, f64)> =
            (line.c1..=line.c2).map(|c| (c as f64, line.row as f64)).collect();
        for pos in [line.left_twist(), line.right_twist()] {
            defects.push(Defect::Twist {
                position: (pos.0 as f64, pos.1 as f64),
                line: path.clone(),
            });
        }
    }
    for hole in &spec.holes {
        defects.push(Defect::Hole {
            region: (hole.x0 as f64, hole.y0 as f64, hole.x1 as f64, hole.y1 as f64),
            kind: hole.kind,
        });
    }
    for span in &spec.top_spans {
        defects.push(Defect::BoundaryDefect { position: (span.x0 as f64, (h - 1) as f64) });
        defects.push(Defect::BoundaryDefect { position: (span.x1 as f64, (h - 1) as f64) });
    }

    let layout = CodeLayout {
        name: name.to_string(),
        qubits,
        stabilizers,
        boundaries,
        defects,
        logicals: BTreeMap::new(),
        idle_strings: BTreeMap::new(),
        declared_distance,
    };
    Ok(Patch { spec, index, layout })
}
