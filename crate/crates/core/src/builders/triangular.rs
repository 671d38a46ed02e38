//! Triangular code: three d×d square faces glued around a central qubit.
//! The checkerboard two-coloring is frustrated on one of the three seams,
//! which therefore carries a dislocation: its qubits are removed and the
//! plaquette pairs straddling it are merged. The dislocation terminates on
//! the central bulk twist, whose plaquette involves four qubits with a
//! single Pauli-Y (`Y` on the center, `Z` on the rest), and exits through
//! the outer boundary where the `e` and `m` arcs meet.
//!
//! 3d² + 2d + 1 data qubits, one logical qubit, distance d (d odd).

use std::collections::BTreeMap;

use crate::layout::{
    BoundaryKind, BoundarySegment, CodeLayout, Defect, Qubit, StabKind, Stabilizer,
};
use crate::logical::complete_pair;
use crate::pauli::{PauliKind, PauliString, Phase};

use super::BuildError;

/// Canonical qubit key on the cone.
#[derive(Copy, Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
enum Key {
    Center,
    /// `Seam(k, t)`: t-th qubit (1..=d) along the seam between face k and
    /// face k+1. Seam 1 is the dislocation; its qubits are removed.
    Seam(u8, i64),
    /// `Face(k, u, v)` with u, v in 1..=d.
    Face(u8, i64, i64),
}

fn canonical(face: u8, u: i64, v: i64) -> Key {
    match (u, v) {
        (0, 0) => Key::Center,
        (u, 0) => Key::Seam(face, u),
        (0, v) => Key::Seam((face + 2) % 3, v),
        (u, v) => Key::Face(face, u, v),
    }
}

/// Face colors: face 0 plaquettes are Z when (u+v) is even; faces 1 and 2
/// are X when (u+v) is even. Seams 0 and 2 then alternate normally while
/// seam 1 is frustrated (the dislocation).
fn face_color(face: u8, pu: i64, pv: i64) -> StabKind {
    let even = (pu + pv).rem_euclid(2) == 0;
    match (face, even) {
        (0, true) => StabKind::Z,
        (0, false) => StabKind::X,
        (_, true) => StabKind::X,
        (_, false) => StabKind::Z,
    }
}

fn letter_of(kind: StabKind) -> PauliKind {
    match kind {
        StabKind::X => PauliKind::X,
        _ => PauliKind::Z,
    }
}

pub fn build_triangular(d: u32) -> Result<CodeLayout, BuildError> {
    if d < 3 || d % 2 == 0 {
        return Err(BuildError::Unsupported(format!("triangular needs odd d >= 3, got {d}")));
    }
    let di = i64::from(d);

    // Coordinates: faces drawn 120° apart (cosmetic only).
    let place = |face: u8, u: i64, v: i64| -> (f64, f64) {
        let theta = f64::from(face) * 2.0 * std::f64::consts::PI / 3.0;
        let (s, c) = theta.sin_cos();
        let (ux, uy) = (c, s);
        let phi = theta + 2.0 * std::f64::consts::PI / 3.0;
        let (s2, c2) = phi.sin_cos();
        (u as f64 * ux + v as f64 * c2, u as f64 * uy + v as f64 * s2)
    };

    // Qubit ids: all keys except removed seam-1 qubits, in Key order.
    let mut index: BTreeMap<Key, usize> = BTreeMap::new();
    let mut positions: Vec<(f64, f64)> = Vec::new();
    let mut add = |key: Key, pos: (f64, f64), index: &mut BTreeMap<Key, usize>, positions: &mut Vec<(f64, f64)>| {
        index.entry(key).or_insert_with(|| {
            positions.push(pos);
            positions.len() - 1
        });
    };
    add(Key::Center, (0.0, 0.0), &mut index, &mut positions);
    for seam in [0u8, 2] {
        for t in 1..=di {
            add(Key::Seam(seam, t), place(seam, t, 0), &mut index, &mut positions);
        }
    }
    for face in 0..3u8 {
        for u in 1..=di {
            for v in 1..=di {
                add(Key::Face(face, u, v), place(face, u, v), &mut index, &mut positions);
            }
        }
    }
    let n = index.len();
    debug_assert_eq!(n as i64, 3 * di * di + 2 * di + 1);

    let lookup = |face: u8, u: i64, v: i64| -> Option<usize> {
        index.get(&canonical(face, u, v)).copied()
    };
    let q = |face: u8, u: i64, v: i64| -> usize {
        lookup(face, u, v).unwrap_or_else(|| panic!("no qubit at face {face} ({u},{v})"))
    };

    let mut stabilizers: Vec<Stabilizer> = Vec::new();
    let mut push = |letters: Vec<(usize, PauliKind)>, kind: StabKind, stabs: &mut Vec<Stabilizer>| {
        let op = PauliString::from_sparse(n, &letters).expect("valid indices");
        let id = stabs.len();
        stabs.push(Stabilizer { id, op, kind });
    };

    // Central twist plaquette: Y on the center, Z on its face-0 neighbors.
    push(
        vec![
            (q(0, 0, 0), PauliKind::Y),
            (q(0, 1, 0), PauliKind::Z),
            (q(0, 0, 1), PauliKind::Z),
            (q(0, 1, 1), PauliKind::Z),
        ],
        StabKind::Twist,
        &mut stabilizers,
    );
    // Face plaquettes. Face 0 keeps everything except its (0,0) corner
    // (replaced by the twist above). Faces 1 and 2 skip the row/column along
    // the removed seam; those are merged below.
    for face in 0..3u8 {
        for pu in 0..di {
            for pv in 0..di {
                if face == 0 && pu == 0 && pv == 0 {
                    continue;
                }
                if face == 1 && pv == 0 {
                    continue;
                }
                if face == 2 && pu == 0 {
                    continue;
                }
                let kind = face_color(face, pu, pv);
                let letter = letter_of(kind);
                let letters = vec![
                    (q(face, pu, pv), letter),
                    (q(face, pu + 1, pv), letter),
                    (q(face, pu, pv + 1), letter),
                    (q(face, pu + 1, pv + 1), letter),
                ];
                push(letters, kind, &mut stabilizers);
            }
        }
    }

    // Merged plaquette pairs along the removed seam: face-1 plaquette
    // (t, 0) with face-2 plaquette (0, t) share two removed qubits and the
    // same color, leaving a pure 4-qubit stabilizer bridging the faces.
    for t in 1..di {
        let kind = face_color(1, t, 0);
        debug_assert_eq!(kind, face_color(2, 0, t));
        let letter = letter_of(kind);
        let letters = vec![
            (q(1, t, 1), letter),
            (q(1, t + 1, 1), letter),
            (q(2, 1, t), letter),
            (q(2, 1, t + 1), letter),
        ];
        push(letters, StabKind::Twist, &mut stabilizers);
    }

    // Outer boundary: face 1's edges and face 0's u=d edge form the m arc;
    // face 2's edges and face 0's v=d edge form the e arc. Semicircles
    // follow the virtual checkerboard; any touching a removed qubit is
    // dropped (the dislocation exit).
    let edge_semis = |face: u8,
                      along_u: bool,
                      kind: BoundaryKind,
                      stabs: &mut Vec<Stabilizer>,
                      push: &mut dyn FnMut(Vec<(usize, PauliKind)>, StabKind, &mut Vec<Stabilizer>)| {
        let want = match kind {
            BoundaryKind::E => StabKind::Z,
            BoundaryKind::M => StabKind::X,
        };
        let letter = letter_of(want);
        for t in 0..di {
            let (virt_u, virt_v, a, b) = if along_u {
                (di, t, (di, t), (di, t + 1))
            } else {
                (t, di, (t, di), (t + 1, di))
            };
            if face_color(face, virt_u, virt_v) != want {
                continue;
            }
            match (lookup(face, a.0, a.1), lookup(face, b.0, b.1)) {
                (Some(qa), Some(qb)) => {
                    push(vec![(qa, letter), (qb, letter)], want, stabs);
                }
                _ => {} // touches the removed seam end; dropped
            }
        }
    };
    let mut push_fn = |letters: Vec<(usize, PauliKind)>, kind: StabKind, stabs: &mut Vec<Stabilizer>| {
        let op = PauliString::from_sparse(n, &letters).expect("valid indices");
        let id = stabs.len();
        stabs.push(Stabilizer { id, op, kind });
    };
    edge_semis(0, true, BoundaryKind::M, &mut stabilizers, &mut push_fn);
    edge_semis(1, false, BoundaryKind::M, &mut stabilizers, &mut push_fn);
    edge_semis(1, true, BoundaryKind::M, &mut stabilizers, &mut push_fn);
    edge_semis(0, false, BoundaryKind::E, &mut stabilizers, &mut push_fn);
    edge_semis(2, true, BoundaryKind::E, &mut stabilizers, &mut push_fn);
    edge_semis(2, false, BoundaryKind::E, &mut stabilizers, &mut push_fn);

    // Corner single where two m edges of face 1 meet, if the diagonal
    // virtual plaquette is X-colored (and mirrored for face 2's e corner).
    if face_color(1, di, di) == StabKind::X {
        push_fn(vec![(q(1, di, di), PauliKind::X)], StabKind::X, &mut stabilizers);
    }
    if face_color(2, di, di) == StabKind::Z {
        push_fn(vec![(q(2, di, di), PauliKind::Z)], StabKind::Z, &mut stabilizers);
    }

    // The seam region is under-determined: complete the stabilizer group
    // with the lowest-weight operators commuting with everything chosen so
    // far, until only the encoded qubit remains. This discovers the merged
    // plaquettes along the dislocation and the second twist plaquette at
    // the center.
    {
        let mut ops: Vec<PauliString> = stabilizers.iter().map(|s| s.op.clone()).collect();
        let width = 2 * n.div_ceil(64) * 64;
        loop {
            let mut basis = crate::gf2::RowBasis::new(width);
            for op in &ops {
                basis.insert(&op.symplectic_bits());
            }
            if n - basis.rank() <= 1 {
                break;
            }
            match crate::logical::lowest_weight_normalizer_element(n, &ops, 8) {
                Some(op) => {
                    let letters: Vec<(usize, PauliKind)> =
                        op.support().iter().map(|&qi| (qi, op.letter(qi))).collect();
                    push(letters, StabKind::Twist, &mut stabilizers);
                    ops.push(op);
                }
                None => {
                    return Err(BuildError::Geometry(
                        "triangular completion ran out of low-weight stabilizers".into(),
                    ))
                }
            }
        }
    }

    let qubits: Vec<Qubit> = positions
        .iter()
        .enumerate()
        .map(|(id, &(x, y))| Qubit { id, x, y, detached: false })
        .collect();

    let mut layout = CodeLayout {
        name: format!("triangular_d{d}"),
        qubits,
        stabilizers,
        boundaries: vec![
            BoundarySegment { from: place(1, di, 0), to: place(1, di, di), kind: BoundaryKind::M },
            BoundarySegment { from: place(2, di, 0), to: place(2, di, di), kind: BoundaryKind::E },
        ],
        defects: vec![Defect::Twist {
            position: (0.0, 0.0),
            line: (1..=di).map(|t| place(1, t, 0)).collect(),
        }],
        logicals: BTreeMap::new(),
        idle_strings: BTreeMap::new(),
        declared_distance: d,
    };

    let (a, b) = complete_pair(&layout, &[])
        .ok_or_else(|| BuildError::Geometry("triangular code encodes no qubit".into()))?;
    let (x1, z1) = super::orient_pair(a, b);
    let mut y1 = x1.mul(&z1).expect("same length");
    y1.set_phase(y1.phase().mul(Phase::PLUS_I));
    layout.logicals.insert("X1".into(), x1);
    layout.logicals.insert("Z1".into(), z1);
    layout.logicals.insert("Y1".into(), y1);
    Ok(layout)
}
