//! Logical-operator machinery: symplectic kernel extraction, canonical
//! anticommuting pairs, bounded exhaustive distance search, string
//! deformation modulo stabilizers and triviality checks.

use std::collections::BTreeMap;

use thiserror::Error;

use crate::gf2;
use crate::layout::CodeLayout;
use crate::pauli::{in_group, PauliKind, PauliString};

#[derive(Debug, Error, PartialEq, Eq)]
pub enum LogicalError {
    #[error("operator anticommutes with stabilizer {0}")]
    NotInNormalizer(usize),
    #[error("enumeration budget exceeded: {candidates} candidates > {budget}")]
    BudgetExceeded { candidates: u64, budget: u64 },
    #[error("operators act on different layouts ({0} vs {1} qubits)")]
    LayoutMismatch(usize, usize),
}

/// Canonical symplectic basis of the logical algebra: `pairs[i] = (X̄ᵢ, Z̄ᵢ)`
/// anticommute with each other and commute with everything else in the basis
/// and with all stabilizers.
#[derive(Clone, Debug)]
pub struct LogicalBasis {
    pub pairs: Vec<(PauliString, PauliString)>,
}

impl LogicalBasis {
    /// Ȳᵢ as the phase-corrected product i·X̄ᵢ·Z̄ᵢ (Hermitian).
    pub fn y_op(&self, i: usize) -> PauliString {
        let mut y = self.pairs[i].0.mul(&self.pairs[i].1).unwrap();
        y.set_phase(y.phase().mul(crate::pauli::Phase::PLUS_I));
        debug_assert!(y.is_hermitian());
        y
    }

    pub fn flattened(&self) -> Vec<PauliString> {
        let mut v = Vec::new();
        for (x, z) in &self.pairs {
            v.push(x.clone());
            v.push(z.clone());
        }
        v
    }
}

fn symplectic_swap(bits: &[u64]) -> Vec<u64> {
    // (x | z) → (z | x) so the standard dot computes the symplectic product
    let w = bits.len() / 2;
    let mut v = Vec::with_capacity(bits.len());
    v.extend_from_slice(&bits[w..]);
    v.extend_from_slice(&bits[..w]);
    v
}

fn symplectic_dot(a: &[u64], b: &[u64]) -> bool {
    let sb = symplectic_swap(b);
    let mut acc = 0u32;
    for (x, y) in a.iter().zip(&sb) {
        acc ^= (x & y).count_ones();
    }
    acc & 1 == 1
}

/// Compute a canonical logical basis from the stabilizer group: the kernel
/// of the symplectic form restricted to the stabilizers, reduced modulo the
/// stabilizer row space, then paired by symplectic Gram–Schmidt.
pub fn find_logicals(layout: &CodeLayout) -> LogicalBasis {
    let n = layout.num_qubits();
    let w = n.div_ceil(64);
    let width = 2 * w * 64;

    let stab_bits: Vec<Vec<u64>> =
        layout.stabilizers.iter().map(|s| s.op.symplectic_bits()).collect();

    // Constraints: symplectic orthogonality to every stabilizer, plus unit
    // constraints pinning the padding columns (bits n..64w of each half).
    let mut constraints: Vec<Vec<u64>> = stab_bits.iter().map(|b| symplectic_swap(b)).collect();
    for half in 0..2 {
        for bit in n..w * 64 {
            let mut row = vec![0u64; 2 * w];
            gf2::set_bit(&mut row, half * w * 64 + bit, true);
            constraints.push(row);
        }
    }
    let kernel = gf2::kernel_basis(&constraints, width);

    // Quotient by the stabilizer rowspace.
    let mut stab_basis = gf2::RowBasis::new(width);
    for b in &stab_bits {
        stab_basis.insert(b);
    }
    let mut reps: Vec<Vec<u64>> = Vec::new();
    let mut seen = gf2::RowBasis::new(width);
    for b in &stab_bits {
        seen.insert(b);
    }
    for v in kernel {
        let reduced = seen.reduce(&v);
        if !gf2::is_zero(&reduced) {
            seen.insert(&reduced);
            reps.push(reduced);
        }
    }

    // Symplectic Gram–Schmidt.
    let mut pairs = Vec::new();
    let mut pool = reps;
    while let Some(a) = pool.pop() {
        let partner_idx = pool.iter().position(|b| symplectic_dot(&a, b));
        match partner_idx {
            None => {
                // commutes with the whole remaining pool: must pair with an
                // earlier element; fold it into the pool-cleanup below.
                // (cannot happen for a nondegenerate quotient)
                continue;
            }
            Some(idx) => {
                let b = pool.remove(idx);
                for c in pool.iter_mut() {
                    let ca = symplectic_dot(c, &a);
                    let cb = symplectic_dot(c, &b);
                    if cb {
                        gf2::xor_into(c, &a);
                    }
                    if ca {
                        gf2::xor_into(c, &b);
                    }
                }
                pairs.push((
                    PauliString::from_symplectic_bits(n, &a),
                    PauliString::from_symplectic_bits(n, &b),
                ));
            }
        }
    }
    pairs.reverse();
    LogicalBasis { pairs }
}

/// Result of the bounded distance search.
#[derive(Copy, Clone, Debug, PartialEq, Eq)]
pub enum DistanceResult {
    Found(usize),
    /// No nontrivial logical with weight ≤ the searched bound.
    AtLeast(usize),
}

#[derive(Copy, Clone, Debug)]
pub struct DistanceOptions {
    /// Restrict candidate supports to connected subgraphs of the qubit
    /// adjacency graph (minimal logicals are string-like in these codes).
    pub connected_only: bool,
    /// Abort when more than this many (support, letters) candidates would be
    /// visited.
    pub budget: u64,
}

impl Default for DistanceOptions {
    fn default() -> Self {
        DistanceOptions { connected_only: true, budget: 200_000_000 }
    }
}

/// Exhaustive search for the minimum weight of an operator that commutes
/// with all `stabilizers` but is not generated by them, optionally required
/// to anticommute with at least one of `must_touch`.
pub fn distance_search(
    n: usize,
    stabilizers: &[PauliString],
    must_touch: Option<&[PauliString]>,
    w_max: usize,
    opts: DistanceOptions,
) -> Result<DistanceResult, LogicalError> {
    let width = 2 * n.div_ceil(64) * 64;
    let mut stab_basis = gf2::RowBasis::new(width);
    for s in stabilizers {
        stab_basis.insert(&s.symplectic_bits());
    }

    // Per-qubit incidence: which stabilizers touch a qubit, with what letter.
    let mut incidence: Vec<Vec<(usize, PauliKind)>> = vec![Vec::new(); n];
    for (si, s) in stabilizers.iter().enumerate() {
        for q in s.support() {
            incidence[q].push((si, s.letter(q)));
        }
    }
    // Adjacency for connectivity pruning.
    let mut adjacency: Vec<Vec<usize>> = vec![Vec::new(); n];
    if opts.connected_only {
        let mut neighbor_sets: Vec<std::collections::BTreeSet<usize>> =
            vec![std::collections::BTreeSet::new(); n];
        for s in stabilizers {
            let sup = s.support();
            for &a in &sup {
                for &b in &sup {
                    if a != b {
                        neighbor_sets[a].insert(b);
                    }
                }
            }
        }
        for (q, set) in neighbor_sets.into_iter().enumerate() {
            adjacency[q] = set.into_iter().collect();
        }
    }

    let mut candidates: u64 = 0;
    for weight in 1..=w_max {
        let found;
        let mut visit = |support: &[usize]| -> Result<bool, LogicalError> {
            candidates += 3u64.pow(support.len() as u32);
            if candidates > opts.budget {
                return Err(LogicalError::BudgetExceeded {
                    candidates,
                    budget: opts.budget,
                });
            }
            Ok(check_support(
                n,
                support,
                &incidence,
                &stab_basis,
                stabilizers,
                must_touch,
            ))
        };
        if opts.connected_only {
            found = enumerate_connected(n, &adjacency, weight, &mut visit)?;
        } else {
            let mut support = Vec::with_capacity(weight);
            found = enumerate_all(n, 0, weight, &mut support, &mut visit)?;
        }
        if found {
            return Ok(DistanceResult::Found(weight));
        }
    }
    Ok(DistanceResult::AtLeast(w_max + 1))
}

/// Does any letter assignment on `support` commute with all stabilizers
/// while being logically nontrivial (and touching `must_touch` if given)?
fn check_support(
    n: usize,
    support: &[usize],
    incidence: &[Vec<(usize, PauliKind)>],
    stab_basis: &gf2::RowBasis,
    _stabilizers: &[PauliString],
    must_touch: Option<&[PauliString]>,
) -> bool {
    first_valid_assignment(n, support, incidence, stab_basis, must_touch).is_some()
}

/// First (in letter order X, Y, Z per qubit) assignment on `support` that
/// commutes with all stabilizers and is outside their span, optionally
/// anticommuting with one of `must_touch`.
fn first_valid_assignment(
    n: usize,
    support: &[usize],
    incidence: &[Vec<(usize, PauliKind)>],
    stab_basis: &gf2::RowBasis,
    must_touch: Option<&[PauliString]>,
) -> Option<PauliString> {
    let w = support.len();
    let kinds = [PauliKind::X, PauliKind::Y, PauliKind::Z];
    let mut assignment = vec![0usize; w];
    loop {
        // Build and test this assignment.
        let letters: Vec<(usize, PauliKind)> = support
            .iter()
            .enumerate()
            .map(|(i, &q)| (q, kinds[assignment[i]]))
            .collect();
        // Commutation with every touched stabilizer.
        let mut parities: Vec<(usize, bool)> = Vec::new();
        for &(q, kind) in &letters {
            for &(si, skind) in &incidence[q] {
                if kind.anticommutes(skind) {
                    match parities.iter_mut().find(|(i, _)| *i == si) {
                        Some((_, p)) => *p = !*p,
                        None => parities.push((si, true)),
                    }
                }
            }
        }
        let commutes = parities.iter().all(|&(_, p)| !p);
        if commutes {
            let p = PauliString::from_sparse(n, &letters).expect("valid support");
            if !stab_basis.contains(&p.symplectic_bits()) {
                match must_touch {
                    None => return Some(p),
                    Some(ops) => {
                        if ops.iter().any(|op| op.anticommutes_with(&p)) {
                            return Some(p);
                        }
                    }
                }
            }
        }
        // Next assignment (all qubits must be non-identity at this weight).
        let mut i = 0;
        loop {
            if i == w {
                return None;
            }
            assignment[i] += 1;
            if assignment[i] == 3 {
                assignment[i] = 0;
                i += 1;
            } else {
                break;
            }
        }
    }
}

/// Enumerate connected subsets of exactly `size` vertices. Standard scheme:
/// grow from each root, only allowing extensions with a larger vertex id
/// than the root to avoid duplicates.
fn enumerate_connected(
    n: usize,
    adjacency: &[Vec<usize>],
    size: usize,
    visit: &mut impl FnMut(&[usize]) -> Result<bool, LogicalError>,
) -> Result<bool, LogicalError> {
    fn grow(
        root: usize,
        subset: &mut Vec<usize>,
        frontier: &[usize],
        forbidden: &mut Vec<bool>,
        size: usize,
        adjacency: &[Vec<usize>],
        visit: &mut impl FnMut(&[usize]) -> Result<bool, LogicalError>,
    ) -> Result<bool, LogicalError> {
        if subset.len() == size {
            return visit(subset);
        }
        // Choose each frontier vertex in turn as the next member; forbid it
        // for later choices at this level to avoid duplicates.
        let mut newly_forbidden = Vec::new();
        let mut found = false;
        for (idx, &v) in frontier.iter().enumerate() {
            if forbidden[v] {
                continue;
            }
            subset.push(v);
            let mut next_frontier: Vec<usize> = frontier[idx + 1..].to_vec();
            for &nb in &adjacency[v] {
                if nb > root && !subset.contains(&nb) && !forbidden[nb] && !next_frontier.contains(&nb)
                {
                    next_frontier.push(nb);
                }
            }
            if grow(root, subset, &next_frontier, forbidden, size, adjacency, visit)? {
                found = true;
            }
            subset.pop();
            if found {
                return Ok(true);
            }
            forbidden[v] = true;
            newly_forbidden.push(v);
        }
        for v in newly_forbidden {
            forbidden[v] = false;
        }
        Ok(found)
    }

    let mut forbidden = vec![false; n];
    for root in 0..n {
        let mut subset = vec![root];
        if size == 1 {
            if visit(&subset)? {
                return Ok(true);
            }
            continue;
        }
        let frontier: Vec<usize> = adjacency[root].iter().copied().filter(|&v| v > root).collect();
        if grow(root, &mut subset, &frontier, &mut forbidden, size, adjacency, visit)? {
            return Ok(true);
        }
    }
    Ok(false)
}

fn enumerate_all(
    n: usize,
    start: usize,
    remaining: usize,
    support: &mut Vec<usize>,
    visit: &mut impl FnMut(&[usize]) -> Result<bool, LogicalError>,
) -> Result<bool, LogicalError> {
    if remaining == 0 {
        return visit(support);
    }
    for q in start..n {
        if n - q < remaining {
            break;
        }
        support.push(q);
        if enumerate_all(n, q + 1, remaining - 1, support, visit)? {
            support.pop();
            return Ok(true);
        }
        support.pop();
    }
    Ok(false)
}

/// Find the lowest-weight connected-support operator that commutes with all
/// `stabilizers` but lies outside their span: the next candidate for
/// completing an under-determined stabilizer group (gauge fixing around
/// defects) or the minimal logical representative.
pub fn lowest_weight_normalizer_element(
    n: usize,
    stabilizers: &[PauliString],
    w_max: usize,
) -> Option<PauliString> {
    let width = 2 * n.div_ceil(64) * 64;
    let mut stab_basis = gf2::RowBasis::new(width);
    for s in stabilizers {
        stab_basis.insert(&s.symplectic_bits());
    }
    let mut incidence: Vec<Vec<(usize, PauliKind)>> = vec![Vec::new(); n];
    for (si, s) in stabilizers.iter().enumerate() {
        for q in s.support() {
            incidence[q].push((si, s.letter(q)));
        }
    }
    let mut neighbor_sets: Vec<std::collections::BTreeSet<usize>> =
        vec![std::collections::BTreeSet::new(); n];
    for s in stabilizers {
        let sup = s.support();
        for &a in &sup {
            for &b in &sup {
                if a != b {
                    neighbor_sets[a].insert(b);
                }
            }
        }
    }
    let adjacency: Vec<Vec<usize>> =
        neighbor_sets.into_iter().map(|s| s.into_iter().collect()).collect();

    let mut result: Option<PauliString> = None;
    for weight in 1..=w_max {
        let mut visit = |support: &[usize]| -> Result<bool, LogicalError> {
            if let Some(op) =
                first_valid_assignment(n, support, &incidence, &stab_basis, None)
            {
                result = Some(op);
                return Ok(true);
            }
            Ok(false)
        };
        if enumerate_connected(n, &adjacency, weight, &mut visit).unwrap_or(false) {
            return result;
        }
    }
    None
}

/// Bounded exhaustive distance certification of a layout.
pub fn distance_up_to(
    layout: &CodeLayout,
    w_max: usize,
    opts: DistanceOptions,
) -> Result<DistanceResult, LogicalError> {
    distance_search(layout.num_qubits(), &layout.stabilizer_ops(), None, w_max, opts)
}

/// True iff `p` is a product of stabilizers (acts as the identity on the
/// code space). Errors if `p` is not even in the normalizer.
pub fn is_logically_trivial(layout: &CodeLayout, p: &PauliString) -> Result<bool, LogicalError> {
    for s in &layout.stabilizers {
        if p.anticommutes_with(&s.op) {
            return Err(LogicalError::NotInNormalizer(s.id));
        }
    }
    Ok(in_group(p, &layout.stabilizer_ops()))
}

/// Greedy weight reduction: repeatedly multiply by whichever generator
/// decreases the weight the most (ties broken by the lowest generator
/// index) until no generator helps.
pub fn reduce_weight(op: &PauliString, generators: &[PauliString]) -> PauliString {
    let mut r = op.clone();
    loop {
        let current = r.weight();
        let mut best: Option<(usize, usize)> = None;
        for (gi, g) in generators.iter().enumerate() {
            let w = r.mul(g).expect("same length").weight();
            if w < current && best.map_or(true, |(bw, _)| w < bw) {
                best = Some((w, gi));
            }
        }
        match best {
            None => break,
            Some((_, gi)) => r.mul_assign(&generators[gi]),
        }
    }
    r
}

/// Complete the named logical set of a layout by one more anticommuting
/// pair, chosen outside the span of the stabilizers and `protected`
/// operators, orthogonalized against every protected pair and greedily
/// weight-reduced. Protected operators must be listed as (X-like, Z-like)
/// pairs.
pub fn complete_pair(
    layout: &CodeLayout,
    protected_pairs: &[(PauliString, PauliString)],
) -> Option<(PauliString, PauliString)> {
    let n = layout.num_qubits();
    let width = 2 * n.div_ceil(64) * 64;
    let stabs = layout.stabilizer_ops();
    let mut span = gf2::RowBasis::new(width);
    for s in &stabs {
        span.insert(&s.symplectic_bits());
    }
    for (a, b) in protected_pairs {
        span.insert(&a.symplectic_bits());
        span.insert(&b.symplectic_bits());
    }
    let basis = find_logicals(layout);
    // Collect basis elements with independent residuals outside the
    // protected span, orthogonalized against every protected pair.
    let mut residual_span = span.clone();
    let mut candidates: Vec<PauliString> = Vec::new();
    for e in basis.flattened() {
        let mut op = e;
        for (px, pz) in protected_pairs {
            if op.anticommutes_with(px) {
                op.mul_assign(pz);
            }
            if op.anticommutes_with(pz) {
                op.mul_assign(px);
            }
        }
        if residual_span.insert(&op.symplectic_bits()) {
            candidates.push(op);
        }
    }
    let u = candidates.first()?.clone();
    let v = candidates[1..].iter().find(|c| c.anticommutes_with(&u))?.clone();
    let mut u = reduce_weight(&u, &stabs);
    let mut v = reduce_weight(&v, &stabs);
    u.normalize_hermitian();
    v.normalize_hermitian();
    debug_assert!(u.anticommutes_with(&v));
    Some((u, v))
}

/// The logical pair localized inside a qubit window: kernel of the
/// symplectic form restricted to operators supported on `window`, reduced
/// modulo the stabilizer group. Exactly one anticommuting pair must remain
/// (e.g. the loop and twist-to-twist string of one dislocation line).
pub fn local_pair(
    layout: &CodeLayout,
    window: &[usize],
) -> Option<(PauliString, PauliString)> {
    let n = layout.num_qubits();
    let w = n.div_ceil(64);
    let width = 2 * w * 64;
    let in_window: std::collections::BTreeSet<usize> = window.iter().copied().collect();

    let stab_bits: Vec<Vec<u64>> =
        layout.stabilizers.iter().map(|s| s.op.symplectic_bits()).collect();
    let mut constraints: Vec<Vec<u64>> = stab_bits
        .iter()
        .map(|b| {
            let mut v = Vec::with_capacity(b.len());
            v.extend_from_slice(&b[w..]);
            v.extend_from_slice(&b[..w]);
            v
        })
        .collect();
    // Pin every bit outside the window (and the padding) to zero.
    for half in 0..2 {
        for bit in 0..w * 64 {
            if bit >= n || !in_window.contains(&bit) {
                let mut row = vec![0u64; 2 * w];
                gf2::set_bit(&mut row, half * w * 64 + bit, true);
                constraints.push(row);
            }
        }
    }
    let kernel = gf2::kernel_basis(&constraints, width);

    let mut seen = gf2::RowBasis::new(width);
    for b in &stab_bits {
        seen.insert(b);
    }
    let mut reps: Vec<PauliString> = Vec::new();
    for v in kernel {
        let reduced = seen.reduce(&v);
        if !gf2::is_zero(&reduced) {
            seen.insert(&reduced);
            reps.push(PauliString::from_symplectic_bits(n, &v));
        }
    }
    if reps.len() != 2 {
        return None;
    }
    let (u, v) = (reps[0].clone(), reps[1].clone());
    if !u.anticommutes_with(&v) {
        return None;
    }
    let stabs = layout.stabilizer_ops();
    let mut u = reduce_weight(&u, &stabs);
    let mut v = reduce_weight(&v, &stabs);
    u.normalize_hermitian();
    v.normalize_hermitian();
    Some((u, v))
}

/// Deform `A·B` by stabilizers (and +1-initialized idle strings) to a
/// lower-weight representative: greedy, multiplying at each step by the
/// generator that decreases the weight the most, ties broken by the lowest
/// generator index. Returns an operator logically equal to `A·B`.
pub fn joint_string(
    layout: &CodeLayout,
    a: &PauliString,
    b: &PauliString,
    initialized_idles: &[String],
) -> Result<PauliString, LogicalError> {
    if a.len() != b.len() || a.len() != layout.num_qubits() {
        return Err(LogicalError::LayoutMismatch(a.len(), b.len()));
    }
    let mut generators: Vec<PauliString> = layout.stabilizer_ops();
    for label in initialized_idles {
        if let Some(idle) = layout.idle_strings.get(label) {
            generators.push(idle.clone());
        }
    }
    let mut r = a.mul(b).expect("same length");
    loop {
        let current = r.weight();
        let mut best: Option<(usize, usize)> = None; // (weight, generator idx)
        for (gi, g) in generators.iter().enumerate() {
            let candidate = r.mul(g).expect("same length");
            let w = candidate.weight();
            if w < current && best.map_or(true, |(bw, _)| w < bw) {
                best = Some((w, gi));
            }
        }
        match best {
            None => break,
            Some((_, gi)) => r.mul_assign(&generators[gi]),
        }
    }
    // Certificate: R·A·B must be generated by stabilizers and idles.
    debug_assert!({
        let cert = r.mul(a).unwrap().mul(b).unwrap();
        in_group(&cert, &generators) || in_group(&cert.negated(), &generators)
    });
    Ok(r)
}

/// Verify that each named logical of the layout lies in the span of the
/// computed basis and the stabilizer group. Returns the offending labels.
pub fn named_logicals_in_span(layout: &CodeLayout, basis: &LogicalBasis) -> Vec<String> {
    let mut gens = layout.stabilizer_ops();
    gens.extend(basis.flattened());
    let mut bad = Vec::new();
    for (label, op) in &layout.logicals {
        if !in_group(op, &gens) && !in_group(&op.negated(), &gens) {
            bad.push(label.clone());
        }
    }
    bad
}

/// Span-equality of two generating sets modulo nothing (used by the
/// gauge-stability property test).
pub fn same_span(a: &[PauliString], b: &[PauliString], n: usize) -> bool {
    let width = 2 * n.div_ceil(64) * 64;
    let mut basis_a = gf2::RowBasis::new(width);
    for p in a {
        basis_a.insert(&p.symplectic_bits());
    }
    let mut basis_b = gf2::RowBasis::new(width);
    for p in b {
        basis_b.insert(&p.symplectic_bits());
    }
    a.iter().all(|p| basis_b.contains(&p.symplectic_bits()))
        && b.iter().all(|p| basis_a.contains(&p.symplectic_bits()))
}

/// Named map helper: the canonical generators of the logical Pauli group for
/// verification (X̄ᵢ, Z̄ᵢ per named qubit).
pub fn named_generators(layout: &CodeLayout) -> BTreeMap<String, PauliString> {
    layout.logicals.clone()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::layout::{CodeLayout, Qubit, StabKind, Stabilizer};

    fn toy(stabs: &[&str]) -> CodeLayout {
        let n = stabs[0].len();
        CodeLayout {
            name: "toy".into(),
            qubits: (0..n).map(|id| Qubit { id, x: id as f64, y: 0.0, detached: false }).collect(),
            stabilizers: stabs
                .iter()
                .enumerate()
                .map(|(id, s)| Stabilizer {
                    id,
                    op: PauliString::parse(s).unwrap(),
                    kind: StabKind::Z,
                })
                .collect(),
            boundaries: Vec::new(),
            defects: Vec::new(),
            logicals: Default::default(),
            idle_strings: Default::default(),
            declared_distance: 1,
        }
    }

    #[test]
    fn four_qubit_css_has_two_pairs_distance_two() {
        let layout = toy(&["XXXX", "ZZZZ"]);
        let basis = find_logicals(&layout);
        assert_eq!(basis.pairs.len(), 2);
        for (i, (x, z)) in basis.pairs.iter().enumerate() {
            assert!(x.anticommutes_with(z));
            for s in &layout.stabilizers {
                assert!(x.commutes_with(&s.op));
                assert!(z.commutes_with(&s.op));
            }
            for (j, (x2, z2)) in basis.pairs.iter().enumerate() {
                if i != j {
                    assert!(x.commutes_with(x2));
                    assert!(x.commutes_with(z2));
                    assert!(z.commutes_with(x2));
                }
            }
        }
        let d = distance_up_to(&layout, 4, DistanceOptions::default()).unwrap();
        assert_eq!(d, DistanceResult::Found(2));
    }

    #[test]
    fn repetition_toy_distance_one() {
        // {ZZ} on 2 qubits: logical X̄ = X₁ has weight 1
        let layout = toy(&["ZZ"]);
        let d = distance_up_to(&layout, 2, DistanceOptions::default()).unwrap();
        assert_eq!(d, DistanceResult::Found(1));
    }

    #[test]
    fn zero_logical_code_empty_basis() {
        let layout = toy(&["ZI", "IZ"]);
        let basis = find_logicals(&layout);
        assert!(basis.pairs.is_empty());
    }

    #[test]
    fn triviality_check() {
        let layout = toy(&["ZZII", "IIZZ"]);
        let p = PauliString::parse("ZZZZ").unwrap();
        assert_eq!(is_logically_trivial(&layout, &p), Ok(true));
        let q = PauliString::parse("ZIII").unwrap();
        assert_eq!(is_logically_trivial(&layout, &q), Ok(false));
        let x = PauliString::parse("XIII").unwrap();
        assert!(is_logically_trivial(&layout, &x).is_err());
    }

    #[test]
    fn joint_string_identity_passthrough() {
        let layout = toy(&["ZZII", "IIZZ"]);
        let a = PauliString::parse("XXXX").unwrap();
        let b = PauliString::identity(4);
        let r = joint_string(&layout, &a, &b, &[]).unwrap();
        assert_eq!(r, a);
    }

    #[test]
    fn budget_guard_fires() {
        let layout = toy(&["ZZZZZZZZ"]);
        let err = distance_search(
            8,
            &layout.stabilizer_ops(),
            None,
            8,
            DistanceOptions { connected_only: false, budget: 2 },
        )
        .unwrap_err();
        assert!(matches!(err, LogicalError::BudgetExceeded { .. }));
    }
}
