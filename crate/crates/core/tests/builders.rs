//! Layout-builder checks: qubit counts, rank and logical counts, golden d=3
//! structure, and bounded exhaustive distance certification.

use qeclab::builders::{build, BuildSpec, CutKind};
use qeclab::layout::{validate, StabKind};
use qeclab::logical::{distance_up_to, DistanceOptions, DistanceResult};

#[test]
fn planar_counts_and_distance() {
    for d in [2u32, 3, 5] {
        let layout = build(&BuildSpec::Planar { d }).unwrap();
        assert_eq!(layout.num_qubits(), (d * d) as usize, "d={d}");
        assert_eq!(layout.stabilizers.len(), (d * d - 1) as usize, "d={d}");
        let report = validate(&layout);
        assert!(report.passed(), "d={d}: {:?}", report.failures);
        assert_eq!(report.logical_qubits, 1, "d={d}");
    }
    let layout = build(&BuildSpec::Planar { d: 3 }).unwrap();
    let d = distance_up_to(&layout, 3, DistanceOptions::default()).unwrap();
    assert_eq!(d, DistanceResult::Found(3));
}

#[test]
fn torus_counts_and_distance() {
    let layout = build(&BuildSpec::Torus { l: 3 }).unwrap();
    assert_eq!(layout.num_qubits(), 18);
    let report = validate(&layout);
    assert!(report.passed(), "{:?}", report.failures);
    assert_eq!(report.logical_qubits, 2);
    // two redundant generators (product of all stars, product of all faces)
    assert_eq!(report.stabilizer_count - report.rank, 2);
    let d = distance_up_to(&layout, 3, DistanceOptions::default()).unwrap();
    assert_eq!(d, DistanceResult::Found(3));
}

#[test]
fn single_qubit_design_counts() {
    for (d, expect) in [(3u32, 40usize), (5, 106), (7, 204)] {
        let layout = build(&BuildSpec::SingleQubitDesign { d }).unwrap();
        assert_eq!(layout.num_qubits(), expect, "d={d}");
        let report = validate(&layout);
        assert!(report.passed(), "d={d}: {:?}", report.failures);
        // data + ancilla pairs plus the idle patch pair
        assert_eq!(report.logical_qubits, 3, "d={d}");
        assert_eq!(layout.logicals.len(), 5, "d={d}: X1 Z1 Xa Ya Za");
        assert_eq!(layout.idle_strings.len(), 2, "d={d}");
        // twist plaquettes: one Y per dislocation end
        let y_twists = layout
            .stabilizers
            .iter()
            .filter(|s| s.kind == StabKind::Twist && s.op.y_weight() == 1)
            .count();
        assert_eq!(y_twists, 4, "d={d}");
    }
}

#[test]
fn single_qubit_design_distance_three() {
    let layout = build(&BuildSpec::SingleQubitDesign { d: 3 }).unwrap();
    let d = distance_up_to(&layout, 3, DistanceOptions::default()).unwrap();
    assert_eq!(d, DistanceResult::Found(3));
}

#[test]
fn two_qubit_design_counts() {
    for (d, expect) in [(3u32, 60usize), (5, 160), (7, 308)] {
        let layout = build(&BuildSpec::TwoQubitDesign { d }).unwrap();
        assert_eq!(layout.num_qubits(), expect, "d={d}");
        let report = validate(&layout);
        assert!(report.passed(), "d={d}: {:?}", report.failures);
        assert_eq!(report.logical_qubits, 4, "d={d}");
        assert_eq!(layout.logicals.len(), 7, "d={d}");
        let y_twists = layout
            .stabilizers
            .iter()
            .filter(|s| s.kind == StabKind::Twist && s.op.y_weight() == 1)
            .count();
        assert_eq!(y_twists, 6, "d={d}");
    }
}

#[test]
fn two_qubit_design_distance_three() {
    let layout = build(&BuildSpec::TwoQubitDesign { d: 3 }).unwrap();
    let d = distance_up_to(&layout, 3, DistanceOptions::default()).unwrap();
    assert_eq!(d, DistanceResult::Found(3));
}

#[test]
fn triangular_counts() {
    for d in [3u32, 5, 7] {
        let layout = build(&BuildSpec::Triangular { d }).unwrap();
        assert_eq!(layout.num_qubits(), (3 * d * d + 2 * d + 1) as usize, "d={d}");
        let report = validate(&layout);
        assert!(report.passed(), "d={d}: {:?}", report.failures);
        assert_eq!(report.logical_qubits, 1, "d={d}");
        // central twist stabilizer has the form Y Z Z Z
        let twist = layout
            .stabilizers
            .iter()
            .find(|s| s.kind == StabKind::Twist)
            .expect("twist plaquette present");
        assert_eq!(twist.op.weight(), 4, "d={d}");
        assert_eq!(twist.op.y_weight(), 1, "d={d}");
        let z_count = twist
            .op
            .support()
            .iter()
            .filter(|&&q| twist.op.letter(q) == qeclab::pauli::PauliKind::Z)
            .count();
        assert_eq!(z_count, 3, "d={d}");
    }
    assert!(build(&BuildSpec::Triangular { d: 4 }).is_err());
}

#[test]
fn triangular_distance_three() {
    let layout = build(&BuildSpec::Triangular { d: 3 }).unwrap();
    let d = distance_up_to(&layout, 3, DistanceOptions::default()).unwrap();
    assert_eq!(d, DistanceResult::Found(3));
}

#[test]
fn hole_pair_encodes_one_qubit() {
    for cut in [CutKind::ZCut, CutKind::XCut] {
        let layout = build(&BuildSpec::HolePair { d: 3, cut, twist_ancilla: false }).unwrap();
        let report = validate(&layout);
        assert!(report.passed(), "{cut:?}: {:?}", report.failures);
        assert!(report.logical_qubits >= 1, "{cut:?}");
        assert!(layout.logicals.contains_key("X1"));
        assert!(layout.idle_strings.contains_key("W"));
        // detached interiors present and untouched
        assert!(layout.qubits.iter().any(|q| q.detached));
    }
}

#[test]
fn hole_pair_with_twist_ancilla() {
    let layout =
        build(&BuildSpec::HolePair { d: 3, cut: CutKind::ZCut, twist_ancilla: true }).unwrap();
    let report = validate(&layout);
    assert!(report.passed(), "{:?}", report.failures);
    for label in ["X1", "Z1", "Xa", "Ya", "Za"] {
        assert!(layout.logicals.contains_key(label), "{label}");
    }
}

#[test]
fn boundary_defect_patch() {
    let layout = build(&BuildSpec::PlanarBoundaryDefects { d: 3, extra_qubits: 1 }).unwrap();
    let report = validate(&layout);
    assert!(report.passed(), "{:?}", report.failures);
    assert_eq!(report.logical_qubits, 2);
    assert!(layout.logicals.contains_key("X2"));
}

#[test]
fn dislocation_lattice_valid() {
    for d in [3u32, 5] {
        let layout = build(&BuildSpec::DislocationLattice { d, lines: 3 }).unwrap();
        let report = validate(&layout);
        assert!(report.passed(), "d={d}: {:?}", report.failures);
        // three lines: 1 patch pair + 3 twist pairs
        assert_eq!(report.logical_qubits, 4, "d={d}");
        assert_eq!(layout.logical_qubit_names().len(), 2, "d={d}");
        assert!(layout.idle_strings.contains_key("W"), "d={d}");
        // every twist plaquette carries at most one Y; exactly two per line
        // carry one
        let y_twists = layout
            .stabilizers
            .iter()
            .filter(|s| s.kind == StabKind::Twist && s.op.y_weight() == 1)
            .count();
        assert_eq!(y_twists, 6, "d={d}");
    }
}

#[test]
fn dislocation_lattice_distance_at_d3() {
    let layout = build(&BuildSpec::DislocationLattice { d: 3, lines: 3 }).unwrap();
    // no logical lighter than d
    let found = distance_up_to(&layout, 2, DistanceOptions::default()).unwrap();
    assert_eq!(found, DistanceResult::AtLeast(3));
}
