//! String-operator walker for dislocation geometry: assigns Pauli letters
//! along an explicit closed path, flipping the letter type every time the
//! path crosses a dislocation cut. Used to realize the loop identities of
//! twist defects (double loops, equivalent loop representatives) as honest
//! geometric operators rather than algebraic by-products.

use crate::builders::rect::{HLine, Patch};
use crate::builders::BuildError;
use crate::pauli::{PauliKind, PauliString};

fn flip(kind: PauliKind) -> PauliKind {
    match kind {
        PauliKind::X => PauliKind::Z,
        PauliKind::Z => PauliKind::X,
        other => other,
    }
}

/// Does the straight step `a → b` cross the cut of `line`? Steps are short
/// (|Δy| ≤ 2); the cut occupies the removed columns of the line's row, and
/// passing the row through an existing qubit column (at or beyond a twist)
/// is not a crossing.
fn crosses_cut(a: (i64, i64), b: (i64, i64), line: &HLine) -> bool {
    let (lo, hi) = (a.1.min(b.1), a.1.max(b.1));
    if !(lo < line.row && line.row < hi) {
        return false;
    }
    // mid-column of a skip step; vertical skips only
    debug_assert_eq!(a.0, b.0, "cut skips must be vertical");
    a.0 >= line.c1 && a.0 <= line.c2
}

/// Build the Pauli string along a closed path. Consecutive points must be
/// king-move adjacent or a vertical skip over a removed qubit. The letter
/// starts as `start` and flips at every cut crossing. Closure requires an
/// even number of crossings in total.
pub fn closed_string(
    patch: &Patch,
    path: &[(i64, i64)],
    start: PauliKind,
) -> Result<PauliString, BuildError> {
    let lines = &patch.spec.lines;
    let mut kind = start;
    let mut letters: Vec<((i64, i64), PauliKind)> = Vec::with_capacity(path.len());
    let mut crossings = 0usize;
    for (i, &p) in path.iter().enumerate() {
        letters.push((p, kind));
        let next = path[(i + 1) % path.len()];
        let dx = (next.0 - p.0).abs();
        let dy = (next.1 - p.1).abs();
        if dx > 1 || dy > 2 || (dy == 2 && dx != 0) {
            return Err(BuildError::Geometry(format!(
                "path step {p:?} -> {next:?} is not king-move or vertical skip"
            )));
        }
        for line in lines {
            if crosses_cut(p, next, line) {
                kind = flip(kind);
                crossings += 1;
            }
        }
    }
    if kind != start {
        return Err(BuildError::Geometry(format!(
            "path does not close: {crossings} cut crossings (odd)"
        )));
    }
    patch.op(&letters)
}

/// Counter-clockwise rectangle path with beveled corners, from `x0..=x1`
/// horizontally and `y0..=y1` vertically: the horizontal runs sit on the
/// extreme rows, the vertical runs one column outside would leave the
/// rectangle, so runs are inset by one and corners take diagonal steps.
/// Skips qubits removed by dislocation lines (vertical skip steps).
pub fn bevel_rectangle(patch: &Patch, x0: i64, x1: i64, y0: i64, y1: i64) -> Vec<(i64, i64)> {
    let removed = |x: i64, y: i64| patch.qubit(x, y).is_none();
    let mut path = Vec::new();
    // bottom run, left to right
    for x in x0 + 1..x1 {
        if !removed(x, y0) {
            path.push((x, y0));
        }
    }
    // right side, bottom to top
    for y in y0 + 1..y1 {
        if !removed(x1, y) {
            path.push((x1, y));
        }
    }
    // top run, right to left
    for x in (x0 + 1..x1).rev() {
        if !removed(x, y1) {
            path.push((x, y1));
        }
    }
    // left side, top to bottom
    for y in (y0 + 1..y1).rev() {
        if !removed(x0, y) {
            path.push((x0, y));
        }
    }
    path
}

/// Candidate double-loop paths around one twist, to be filtered by
/// commutation with the stabilizer group. Different candidates vary the
/// corner bevels; the first one that lands in the normalizer is used by the
/// identity tests.
pub fn double_loop_candidates(
    patch: &Patch,
    line: &HLine,
    left_twist: bool,
) -> Vec<PauliString> {
    let (tx, ty) = if left_twist { line.left_twist() } else { line.right_twist() };
    let away: i64 = if left_twist { -1 } else { 1 };
    let cut = -away;
    let mut results = Vec::new();
    // Spiral: inner ring from the seam, out along the away side, outer ring,
    // back to the seam. The seam sits on the away side at row ty.
    let inner_ring = vec![
        (tx + away, ty),      // seam start (inner radius, away side)
        (tx + away, ty + 1),
        (tx, ty + 1),
        (tx + cut, ty + 1),
        (tx + cut, ty - 1),   // vertical skip across the cut (flip)
        (tx, ty - 1),
        (tx + away, ty - 1),
    ];
    let outer_ring = vec![
        (tx + 2 * away, ty - 1),
        (tx + 2 * away, ty - 2),
        (tx + away, ty - 2),
        (tx, ty - 2),
        (tx + cut, ty - 2),
        (tx + 2 * cut, ty - 2),
        (tx + 2 * cut, ty - 1),
        (tx + 2 * cut, ty),     // passes the cut row outside? no: this is the
        // removed region only between c1..c2; mid column may be removed
        (tx + 2 * cut, ty + 1),
        (tx + 2 * cut, ty + 2),
        (tx + cut, ty + 2),
        (tx, ty + 2),
        (tx + away, ty + 2),
        (tx + 2 * away, ty + 2),
        (tx + 2 * away, ty + 1),
        (tx + 2 * away, ty),
    ];
    let mut spiral: Vec<(i64, i64)> = Vec::new();
    spiral.extend(&inner_ring);
    spiral.extend(&outer_ring);
    // Remove points that fell on removed qubits; vertical skips remain valid
    // only across the cut.
    let spiral: Vec<(i64, i64)> = spiral
        .into_iter()
        .filter(|&(x, y)| patch.qubit(x, y).is_some())
        .collect();
    for start in [PauliKind::X, PauliKind::Z] {
        if let Ok(op) = closed_string(patch, &spiral, start) {
            results.push(op);
        }
    }
    results
}
