//! Layout builders for every supported encoding scheme.

pub mod paths;
pub mod rect;
pub mod torus;
pub mod triangular;

use thiserror::Error;

use crate::layout::{BoundaryKind, CodeLayout};
use crate::logical::{complete_pair, reduce_weight};
use crate::pauli::{PauliKind, PauliString, Phase};

use rect::{build_patch, HLine, HoleSpec, PatchSpec, TopSpan};

#[derive(Debug, Error)]
pub enum BuildError {
    #[error("unsupported parameters: {0}")]
    Unsupported(String),
    #[error("geometry error: {0}")]
    Geometry(String),
    #[error("constructed layout failed validation: {0:?}")]
    Validation(Vec<crate::layout::ValidationFailure>),
}

/// Hole boundary flavor: `ZCut` holes stop measuring Z plaquettes (an `m`
/// boundary), `XCut` holes stop measuring X plaquettes (an `e` boundary).
#[derive(Copy, Clone, Debug, PartialEq, Eq)]
pub enum CutKind {
    ZCut,
    XCut,
}

/// Scheme selector for [`build`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum BuildSpec {
    /// d×d rotated planar patch, one logical qubit.
    Planar { d: u32 },
    /// Planar patch with extra boundary defects on the top edge encoding
    /// additional logical qubits.
    PlanarBoundaryDefects { d: u32, extra_qubits: u32 },
    /// Two holes of the given cut in a uniform-boundary patch; optional
    /// twist-defect ancilla alongside.
    HolePair { d: u32, cut: CutKind, twist_ancilla: bool },
    /// Horizontal dislocation lines whose twist ends sit on a rotated
    /// square lattice; three twists per logical qubit plus idle strings.
    DislocationLattice { d: u32, lines: u32 },
    /// Triangular code: three square faces around a central Y-carrying
    /// twist plaquette. Odd d only.
    Triangular { d: u32 },
    /// Toric code on an L×L periodic lattice (2L² qubits, 2 logical).
    Torus { l: u32 },
    /// Compact design for all single-qubit Cliffords: one boundary-encoded
    /// data qubit plus a twist-encoded ancilla; 4d²+d+1 data qubits.
    SingleQubitDesign { d: u32 },
    /// Compact design for the full two-qubit Clifford group: 6d²+2d data
    /// qubits, two data logicals plus a twist ancilla.
    TwoQubitDesign { d: u32 },
}

impl BuildSpec {
    pub fn name(&self) -> String {
        match self {
            BuildSpec::Planar { d } => format!("planar_d{d}"),
            BuildSpec::PlanarBoundaryDefects { d, extra_qubits } => {
                format!("planar_boundary_defects_d{d}_q{extra_qubits}")
            }
            BuildSpec::HolePair { d, cut, twist_ancilla } => format!(
                "hole_pair_{}_d{d}{}",
                match cut {
                    CutKind::ZCut => "zcut",
                    CutKind::XCut => "xcut",
                },
                if *twist_ancilla { "_twist" } else { "" }
            ),
            BuildSpec::DislocationLattice { d, lines } => {
                format!("dislocation_lattice_d{d}_l{lines}")
            }
            BuildSpec::Triangular { d } => format!("triangular_d{d}"),
            BuildSpec::Torus { l } => format!("torus_L{l}"),
            BuildSpec::SingleQubitDesign { d } => format!("single_qubit_design_d{d}"),
            BuildSpec::TwoQubitDesign { d } => format!("two_qubit_design_d{d}"),
        }
    }
}

fn require(cond: bool, msg: &str) -> Result<(), BuildError> {
    if cond {
        Ok(())
    } else {
        Err(BuildError::Unsupported(msg.to_string()))
    }
}

fn odd_distance(d: u32, scheme: &str) -> Result<(), BuildError> {
    require(d >= 3 && d % 2 == 1, &format!("{scheme} needs odd d >= 3, got {d}"))
}

/// Construct the layout for a scheme. The result passes
/// [`crate::layout::validate`]; builders run it themselves and refuse to
/// return broken geometry.
pub fn build(spec: &BuildSpec) -> Result<CodeLayout, BuildError> {
    let layout = match spec {
        BuildSpec::Planar { d } => build_planar(*d)?,
        BuildSpec::PlanarBoundaryDefects { d, extra_qubits } => {
            build_boundary_defects(*d, *extra_qubits)?
        }
        BuildSpec::HolePair { d, cut, twist_ancilla } => build_hole_pair(*d, *cut, *twist_ancilla)?,
        BuildSpec::DislocationLattice { d, lines } => build_dislocation_lattice(*d, *lines)?,
        BuildSpec::Triangular { d } => triangular::build_triangular(*d)?,
        BuildSpec::Torus { l } => torus::build_torus(*l)?,
        BuildSpec::SingleQubitDesign { d } => build_single_qubit_design(*d)?,
        BuildSpec::TwoQubitDesign { d } => build_two_qubit_design(*d)?,
    };
    let report = crate::layout::validate(&layout);
    if !report.passed() {
        return Err(BuildError::Validation(report.failures));
    }
    Ok(layout)
}

fn build_planar(d: u32) -> Result<CodeLayout, BuildError> {
    require(d >= 2, "planar needs d >= 2")?;
    let d = i64::from(d);
    let spec = PatchSpec { width: d, height: d, ..Default::default() };
    let mut patch = build_patch(spec, &format!("planar_d{d}"), d as u32)?;
    let x1 = patch.string((0..d).map(|x| (x, 0)), PauliKind::X)?;
    let z1 = patch.string((0..d).map(|y| (0, y)), PauliKind::Z)?;
    patch.layout.logicals.insert("X1".into(), x1);
    patch.layout.logicals.insert("Z1".into(), z1);
    Ok(patch.layout)
}

fn build_single_qubit_design(d: u32) -> Result<CodeLayout, BuildError> {
    odd_distance(d, "single_qubit_design")?;
    let di = i64::from(d);
    let width = 4 * di + 3;
    let height = di;
    let row = (di - 1) / 2;
    // Data qubit on a dislocation of length d+1, ancilla on one of length
    // d-2 whose twist-to-twist string has weight exactly d. The patch
    // boundary qubit carries no data; its strings become protected idle
    // strings.
    let line_a = HLine { row, c1: 2, c2: 2 + di };
    let cb = 2 * di + 4;
    let line_b = HLine { row, c1: cb, c2: cb + di - 3 };
    let spec = PatchSpec { width, height, lines: vec![line_a, line_b], ..Default::default() };
    let mut patch = build_patch(spec, &format!("single_qubit_design_d{d}"), d)?;
    name_line_logicals(&mut patch, 1)?;
    Ok(patch.layout)
}

fn build_two_qubit_design(d: u32) -> Result<CodeLayout, BuildError> {
    odd_distance(d, "two_qubit_design")?;
    let di = i64::from(d);
    let width = 6 * di + 5;
    let height = di;
    let row = (di - 1) / 2;
    // Three dislocations: two data qubits (length d+1) and the ancilla
    // (length d-2); adjacent twists of different lines sit at least d
    // columns apart so no twist-to-twist string undercuts the distance.
    let la = di + 1;
    let line_a = HLine { row, c1: 2, c2: 2 + la - 1 };
    let cb = la + di + 3;
    let line_b = HLine { row, c1: cb, c2: cb + la - 1 };
    let cc = 2 * la + 2 * di + 4;
    let line_c = HLine { row, c1: cc, c2: cc + di - 3 };
    let spec = PatchSpec {
        width,
        height,
        lines: vec![line_a, line_b, line_c],
        ..Default::default()
    };
    let mut patch = build_patch(spec, &format!("two_qubit_design_d{d}"), d)?;
    name_line_logicals(&mut patch, 2)?;
    Ok(patch.layout)
}

/// Name the twist-encoded logical qubits of a lined patch: the patch
/// boundary strings become idle strings (protected but carrying no data),
/// each dislocation line contributes one localized logical pair, the last
/// line is the ancilla.
fn name_line_logicals(patch: &mut rect::Patch, data_qubits: usize) -> Result<(), BuildError> {
    let width = patch.spec.width;
    let height = patch.spec.height;
    let x_idle = patch.string((0..width).map(|x| (x, 0)), PauliKind::X)?;
    let z_idle = patch.string((0..height).map(|y| (width - 1, y)), PauliKind::Z)?;
    patch.layout.idle_strings.insert("W1".into(), x_idle);
    patch.layout.idle_strings.insert("W2".into(), z_idle);

    let lines = patch.spec.lines.clone();
    assert_eq!(lines.len(), data_qubits + 1);
    for (i, line) in lines.iter().enumerate() {
        let mut window = Vec::new();
        for x in line.c1 - 2..=line.c2 + 2 {
            for y in 0..height {
                if let Some(q) = patch.qubit(x, y) {
                    window.push(q);
                }
            }
        }
        let (a, b) = crate::logical::local_pair(&patch.layout, &window).ok_or_else(|| {
            BuildError::Geometry(format!("no localized logical pair on line {i}"))
        })?;
        let (x, z) = orient_pair(a, b);
        if i < data_qubits {
            let name = format!("{}", i + 1);
            patch.layout.logicals.insert(format!("X{name}"), x);
            patch.layout.logicals.insert(format!("Z{name}"), z);
        } else {
            let mut ya = x.mul(&z).expect("same length");
            ya.set_phase(ya.phase().mul(Phase::PLUS_I));
            patch.layout.logicals.insert("Xa".into(), x);
            patch.layout.logicals.insert("Za".into(), z);
            patch.layout.logicals.insert("Ya".into(), ya);
        }
    }
    Ok(())
}

fn build_hole_pair(d: u32, cut: CutKind, twist_ancilla: bool) -> Result<CodeLayout, BuildError> {
    odd_distance(d, "hole_pair")?;
    let di = i64::from(d);
    // Uniform outer boundary matching the hole kind, so the only encoded
    // qubits come from the holes (and the optional dislocation).
    let hole_kind = match cut {
        CutKind::ZCut => BoundaryKind::M,
        CutKind::XCut => BoundaryKind::E,
    };
    let side = (di + 3) / 4; // hole edge length in detached qubits
    let sep = di; // qubit columns between hole rims
    let margin = di;
    let extra = if twist_ancilla { 2 * di + 2 } else { 0 };
    let width = 2 * margin + 2 * side + sep + extra;
    let height = 2 * margin + side;
    let hx0 = margin;
    let hy0 = margin;
    let hole1 = HoleSpec { x0: hx0, y0: hy0, x1: hx0 + side - 1, y1: hy0 + side - 1, kind: hole_kind };
    let hole2 = HoleSpec {
        x0: hx0 + side + sep,
        y0: hy0,
        x1: hx0 + 2 * side + sep - 1,
        y1: hy0 + side - 1,
        kind: hole_kind,
    };
    let mut lines = Vec::new();
    if twist_ancilla {
        let c1 = hole2.x1 + 1 + di / 2 + 2;
        lines.push(HLine { row: hy0 + side / 2, c1, c2: c1 + di - 2 });
    }
    let spec = PatchSpec {
        width,
        height,
        edges: [hole_kind; 4],
        holes: vec![hole1, hole2],
        lines,
        ..Default::default()
    };
    let mut patch = build_patch(
        spec,
        &format!(
            "hole_pair_{}_d{d}",
            match cut {
                CutKind::ZCut => "zcut",
                CutKind::XCut => "xcut",
            }
        ),
        d,
    )?;

    // Logical pair of the hole-pair qubit plus the loop idle string, all
    // found algebraically and weight-reduced.
    let (a, b) = complete_pair(&patch.layout, &[])
        .ok_or_else(|| BuildError::Geometry("hole pair encodes no logical qubit".into()))?;
    let (x1, z1) = orient_pair(a, b);
    patch.layout.logicals.insert("X1".into(), x1.clone());
    patch.layout.logicals.insert("Z1".into(), z1.clone());

    if twist_ancilla {
        attach_twist_ancilla(&mut patch.layout, &[(x1.clone(), z1.clone())])?;
    }

    // Idle string: the loop around both holes. Nontrivial, commutes with
    // every named logical.
    if let Some((w1, w2)) = complete_pair(
        &patch.layout,
        &patch
            .layout
            .logical_qubit_names()
            .iter()
            .map(|name| {
                (
                    patch.layout.logicals[&format!("X{name}")].clone(),
                    patch.layout.logicals[&format!("Z{name}")].clone(),
                )
            })
            .collect::<Vec<_>>(),
    ) {
        let idle = if w1.weight() <= w2.weight() { w1 } else { w2 };
        patch.layout.idle_strings.insert("W".into(), idle);
    }
    Ok(patch.layout)
}

fn build_boundary_defects(d: u32, extra_qubits: u32) -> Result<CodeLayout, BuildError> {
    odd_distance(d, "planar_boundary_defects")?;
    require(extra_qubits >= 1, "need at least one extra boundary-defect qubit")?;
    let di = i64::from(d);
    let k = i64::from(extra_qubits);
    // Top edge: k m-spans of length ~d separated by e-gaps of length d.
    let width = (2 * k + 1) * di + 2 * k;
    let height = di;
    let mut top_spans = Vec::new();
    for i in 0..k {
        let x0 = di + i * (2 * di + 2);
        top_spans.push(TopSpan { x0, x1: x0 + di + 1 });
    }
    let spec = PatchSpec { width, height, top_spans, ..Default::default() };
    let mut patch = build_patch(spec, &format!("planar_boundary_defects_d{d}_q{extra_qubits}"), d)?;

    let x1 = patch.string((0..width).map(|x| (x, 0)), PauliKind::X)?;
    let z1 = patch.string((0..height).map(|y| (0, y)), PauliKind::Z)?;
    patch.layout.logicals.insert("X1".into(), x1.clone());
    patch.layout.logicals.insert("Z1".into(), z1.clone());

    let mut protected = vec![(x1, z1)];
    for i in 0..extra_qubits {
        let (a, b) = complete_pair(&patch.layout, &protected).ok_or_else(|| {
            BuildError::Geometry(format!("boundary-defect qubit {} not found", i + 2))
        })?;
        let (x, z) = orient_pair(a, b);
        let name = format!("{}", i + 2);
        patch.layout.logicals.insert(format!("X{name}"), x.clone());
        patch.layout.logicals.insert(format!("Z{name}"), z.clone());
        protected.push((x, z));
    }
    Ok(patch.layout)
}

fn build_dislocation_lattice(d: u32, lines: u32) -> Result<CodeLayout, BuildError> {
    odd_distance(d, "dislocation_lattice")?;
    require((2..=4).contains(&lines), "dislocation_lattice supports 2..=4 lines")?;
    let di = i64::from(d);
    let hd = (di + 1) / 2; // rotated-lattice half step
    let base_col = 4;
    let base_row = 2;
    let mut hlines = Vec::new();
    for k in 0..i64::from(lines) {
        // Twists on a rotated square lattice: consecutive lines offset by
        // (hd, hd); every second line returns to the base row.
        let row = base_row + (k % 2) * hd;
        let c1 = base_col + k * (di + 1) - (k % 2) * hd;
        hlines.push(HLine { row, c1, c2: c1 + di - 2 });
    }
    let width = hlines.iter().map(|l| l.c2 + 4).max().unwrap().max(base_col + 2 * di);
    let height = base_row + hd + di.max(4);
    let spec = PatchSpec { width, height, lines: hlines.clone(), ..Default::default() };
    let mut patch = build_patch(spec, &format!("dislocation_lattice_d{d}_l{lines}"), d)?;

    // Patch-boundary qubit strings (kept unnamed; the encoded qubits of
    // interest live on the twists, three per logical qubit).
    let x_patch = patch.string((0..width).map(|x| (x, 0)), PauliKind::X)?;
    let z_patch = patch.string((0..height).map(|y| (0, y)), PauliKind::Z)?;

    let mut protected = vec![(x_patch, z_patch)];
    let qubit_count = lines - 1;
    for q in 0..qubit_count {
        let (a, b) = complete_pair(&patch.layout, &protected)
            .ok_or_else(|| BuildError::Geometry(format!("twist qubit {} not found", q + 1)))?;
        let (x, z) = orient_pair(a, b);
        let name = format!("{}", q + 1);
        patch.layout.logicals.insert(format!("X{name}"), x.clone());
        patch.layout.logicals.insert(format!("Z{name}"), z.clone());
        protected.push((x, z));
    }
    // Idle string around the remaining twist sector.
    if let Some((w1, w2)) = complete_pair(&patch.layout, &protected) {
        let idle = if w1.weight() <= w2.weight() { w1 } else { w2 };
        let idle = reduce_weight(&idle, &patch.layout.stabilizer_ops());
        patch.layout.idle_strings.insert("W".into(), idle);
    }
    Ok(patch.layout)
}
