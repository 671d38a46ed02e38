//! Toric code on an L×L periodic lattice: qubits on edges, X star
//! operators on vertices, Z plaquette operators on faces, two logical
//! qubits of distance L.

use std::collections::BTreeMap;

use crate::layout::{CodeLayout, Qubit, StabKind, Stabilizer};
use crate::pauli::{PauliKind, PauliString};

use super::BuildError;

pub fn build_torus(l: u32) -> Result<CodeLayout, BuildError> {
    if l < 2 {
        return Err(BuildError::Unsupported(format!("torus needs L >= 2, got {l}")));
    }
    let l = l as usize;
    let n = 2 * l * l;
    // horizontal edge (x,y): from (x,y) to (x+1,y), id y*l + x
    // vertical edge (x,y): from (x,y) to (x,y+1), id l² + y*l + x
    let he = |x: usize, y: usize| (y % l) * l + (x % l);
    let ve = |x: usize, y: usize| l * l + (y % l) * l + (x % l);

    let mut qubits = Vec::with_capacity(n);
    for y in 0..l {
        for x in 0..l {
            qubits.push(Qubit { id: he(x, y), x: x as f64 + 0.5, y: y as f64, detached: false });
        }
    }
    for y in 0..l {
        for x in 0..l {
            qubits.push(Qubit { id: ve(x, y), x: x as f64, y: y as f64 + 0.5, detached: false });
        }
    }

    let mut stabilizers = Vec::new();
    // Star (vertex) X operators.
    for y in 0..l {
        for x in 0..l {
            let support = [he(x, y), he((x + l - 1) % l, y), ve(x, y), ve(x, (y + l - 1) % l)];
            let op = PauliString::from_sparse(
                n,
                &support.map(|q| (q, PauliKind::X)),
            )
            .expect("valid indices");
            stabilizers.push(Stabilizer { id: stabilizers.len(), op, kind: StabKind::X });
        }
    }
    // Face (plaquette) Z operators.
    for y in 0..l {
        for x in 0..l {
            let support = [he(x, y), he(x, (y + 1) % l), ve(x, y), ve((x + 1) % l, y)];
            let op = PauliString::from_sparse(
                n,
                &support.map(|q| (q, PauliKind::Z)),
            )
            .expect("valid indices");
            stabilizers.push(Stabilizer { id: stabilizers.len(), op, kind: StabKind::Z });
        }
    }

    // Logical loops: X̄1 on the horizontal edges of one column (a vertical
    // dual cycle), Z̄1 on the horizontal edges of one row; X̄2/Z̄2 mirrored
    // onto vertical edges.
    let mut logicals = BTreeMap::new();
    let x1 = PauliString::from_sparse(n, &(0..l).map(|y| (he(0, y), PauliKind::X)).collect::<Vec<_>>())
        .unwrap();
    let z1 = PauliString::from_sparse(n, &(0..l).map(|x| (he(x, 0), PauliKind::Z)).collect::<Vec<_>>())
        .unwrap();
    let x2 = PauliString::from_sparse(n, &(0..l).map(|x| (ve(x, 0), PauliKind::X)).collect::<Vec<_>>())
        .unwrap();
    let z2 = PauliString::from_sparse(n, &(0..l).map(|y| (ve(0, y), PauliKind::Z)).collect::<Vec<_>>())
        .unwrap();
    logicals.insert("X1".to_string(), x1);
    logicals.insert("Z1".to_string(), z1);
    logicals.insert("X2".to_string(), x2);
    logicals.insert("Z2".to_string(), z2);

    Ok(CodeLayout {
        name: format!("torus_L{l}"),
        qubits,
        stabilizers,
        boundaries: Vec::new(),
        defects: Vec::new(),
        logicals,
        idle_strings: BTreeMap::new(),
        declared_distance: l as u32,
    })
}
