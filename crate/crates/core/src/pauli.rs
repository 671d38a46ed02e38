//! *n*-qubit Pauli operators in bit-packed symplectic form.
//!
//! A Pauli operator is stored as two bit masks (`x`, `z`) plus a phase that is
//! a power of the imaginary unit.  Qubit `q` carries `X` if only its x-bit is
//! set, `Z` if only its z-bit is set and `Y` if both are.  The operator value
//! is `i^k · (X-part) · (Z-part)` with the X factors written to the left of
//! the Z factors, so a single `Y` is stored as `i · X·Z` with `k = 1`.
//!
//! Masks are packed into `u64` words, which keeps products, commutation
//! checks and syndrome extraction cheap enough for layouts with hundreds of
//! qubits and 10⁵+ Monte Carlo shots.

use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

/// Phase of a Pauli operator, a power of `i`: `Exp(k)` means `i^k`.
#[derive(Copy, Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Phase(u8);

impl Phase {
    pub const PLUS_ONE: Phase = Phase(0);
    pub const PLUS_I: Phase = Phase(1);
    pub const MINUS_ONE: Phase = Phase(2);
    pub const MINUS_I: Phase = Phase(3);

    pub fn from_exponent(k: u8) -> Phase {
        Phase(k & 3)
    }

    pub fn exponent(self) -> u8 {
        self.0
    }

    pub fn mul(self, other: Phase) -> Phase {
        Phase((self.0 + other.0) & 3)
    }

    pub fn negate(self) -> Phase {
        Phase((self.0 + 2) & 3)
    }

    /// True for the real phases ±1.
    pub fn is_real(self) -> bool {
        self.0 & 1 == 0
    }

    /// +1 or −1; panics on an imaginary phase.
    pub fn sign(self) -> i8 {
        match self.0 {
            0 => 1,
            2 => -1,
            _ => panic!("imaginary phase has no sign"),
        }
    }
}

impl fmt::Display for Phase {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.0 {
            0 => write!(f, "+"),
            1 => write!(f, "+i"),
            2 => write!(f, "-"),
            _ => write!(f, "-i"),
        }
    }
}

/// Single-qubit Pauli letter.
#[derive(Copy, Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum PauliKind {
    I,
    X,
    Y,
    Z,
}

impl PauliKind {
    pub fn from_bits(x: bool, z: bool) -> PauliKind {
        match (x, z) {
            (false, false) => PauliKind::I,
            (true, false) => PauliKind::X,
            (true, true) => PauliKind::Y,
            (false, true) => PauliKind::Z,
        }
    }

    pub fn bits(self) -> (bool, bool) {
        match self {
            PauliKind::I => (false, false),
            PauliKind::X => (true, false),
            PauliKind::Y => (true, true),
            PauliKind::Z => (false, true),
        }
    }

    pub fn anticommutes(self, other: PauliKind) -> bool {
        let (x1, z1) = self.bits();
        let (x2, z2) = other.bits();
        (x1 & z2) ^ (z1 & x2)
    }

    pub fn letter(self) -> char {
        match self {
            PauliKind::I => 'I',
            PauliKind::X => 'X',
            PauliKind::Y => 'Y',
            PauliKind::Z => 'Z',
        }
    }
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum PauliError {
    #[error("operator length mismatch: {0} vs {1}")]
    LengthMismatch(usize, usize),
    #[error("qubit index {index} out of range for {n} qubits")]
    IndexOutOfRange { index: usize, n: usize },
    #[error("cannot parse Pauli string: {0}")]
    Parse(String),
}

fn words_for(n: usize) -> usize {
    n.div_ceil(64)
}

/// An `n`-qubit Pauli operator with phase.
///
/// The universal currency for stabilizers, logical operators, error strings
/// and measured strings.
#[derive(Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct PauliString {
    n: usize,
    x: Vec<u64>,
    z: Vec<u64>,
    phase: Phase,
}

impl PauliString {
    pub fn identity(n: usize) -> PauliString {
        PauliString {
            n,
            x: vec![0; words_for(n)],
            z: vec![0; words_for(n)],
            phase: Phase::PLUS_ONE,
        }
    }

    /// Build from sparse (qubit, letter) pairs; phase is chosen so the
    /// operator equals the plain tensor product of the letters (Hermitian).
    pub fn from_sparse(n: usize, letters: &[(usize, PauliKind)]) -> Result<PauliString, PauliError> {
        let mut p = PauliString::identity(n);
        for &(q, kind) in letters {
            if q >= n {
                return Err(PauliError::IndexOutOfRange { index: q, n });
            }
            p.set_letter(q, kind);
        }
        p.phase = Phase::from_exponent(p.y_weight() as u8);
        Ok(p)
    }

    /// Parse strings like `"XIZY"`, `"+XIZY"`, `"-iXX"`.
    pub fn parse(s: &str) -> Result<PauliString, PauliError> {
        let mut rest = s;
        let mut phase = Phase::PLUS_ONE;
        for (prefix, ph) in [
            ("+i", Phase::PLUS_I),
            ("-i", Phase::MINUS_I),
            ("+", Phase::PLUS_ONE),
            ("-", Phase::MINUS_ONE),
        ] {
            if let Some(r) = rest.strip_prefix(prefix) {
                rest = r;
                phase = ph;
                break;
            }
        }
        let mut letters = Vec::new();
        for (q, c) in rest.chars().enumerate() {
            let kind = match c {
                'I' | '_' | '.' => PauliKind::I,
                'X' => PauliKind::X,
                'Y' => PauliKind::Y,
                'Z' => PauliKind::Z,
                other => return Err(PauliError::Parse(format!("bad letter {other:?}"))),
            };
            letters.push((q, kind));
        }
        let mut p = PauliString::from_sparse(rest.chars().count(), &letters)?;
        p.phase = p.phase.mul(phase);
        Ok(p)
    }

    pub fn len(&self) -> usize {
        self.n
    }

    pub fn is_empty(&self) -> bool {
        self.n == 0
    }

    pub fn phase(&self) -> Phase {
        self.phase
    }

    pub fn set_phase(&mut self, phase: Phase) {
        self.phase = phase;
    }

    pub fn negate(&mut self) {
        self.phase = self.phase.negate();
    }

    pub fn negated(&self) -> PauliString {
        let mut p = self.clone();
        p.negate();
        p
    }

    pub fn x_bit(&self, q: usize) -> bool {
        self.x[q / 64] >> (q % 64) & 1 == 1
    }

    pub fn z_bit(&self, q: usize) -> bool {
        self.z[q / 64] >> (q % 64) & 1 == 1
    }

    pub fn letter(&self, q: usize) -> PauliKind {
        PauliKind::from_bits(self.x_bit(q), self.z_bit(q))
    }

    /// Overwrite the letter on one qubit without adjusting the phase.
    pub fn set_letter(&mut self, q: usize, kind: PauliKind) {
        let (xb, zb) = kind.bits();
        let (w, b) = (q / 64, q % 64);
        self.x[w] = self.x[w] & !(1 << b) | (u64::from(xb) << b);
        self.z[w] = self.z[w] & !(1 << b) | (u64::from(zb) << b);
    }

    /// Number of qubits acted on non-trivially.
    pub fn weight(&self) -> usize {
        self.x
            .iter()
            .zip(&self.z)
            .map(|(&x, &z)| (x | z).count_ones() as usize)
            .sum()
    }

    /// Number of qubits carrying `Y`.
    pub fn y_weight(&self) -> usize {
        self.x
            .iter()
            .zip(&self.z)
            .map(|(&x, &z)| (x & z).count_ones() as usize)
            .sum()
    }

    pub fn support(&self) -> Vec<usize> {
        (0..self.n).filter(|&q| self.letter(q) != PauliKind::I).collect()
    }

    pub fn is_identity_up_to_phase(&self) -> bool {
        self.x.iter().all(|&w| w == 0) && self.z.iter().all(|&w| w == 0)
    }

    /// Hermitian (self-adjoint) iff the phase exponent matches the Y-count
    /// parity; such operators square to +1 and have eigenvalues ±1.
    pub fn is_hermitian(&self) -> bool {
        (self.phase.exponent() as usize).is_multiple_of(2) == self.y_weight().is_multiple_of(2)
    }

    /// Put the phase into the canonical Hermitian form `i^(y-weight)`.
    pub fn normalize_hermitian(&mut self) {
        self.phase = Phase::from_exponent((self.y_weight() % 4) as u8);
    }

    /// The ±1 sign relative to the canonical Hermitian representative,
    /// i.e. `self = sign · i^(y_weight) X^a Z^b`. Panics if not Hermitian.
    pub fn hermitian_sign(&self) -> i8 {
        assert!(self.is_hermitian(), "operator is not Hermitian");
        let canonical = (self.y_weight() % 4) as u8;
        if self.phase.exponent() == canonical {
            1
        } else {
            -1
        }
    }

    /// Symplectic inner product: true iff the operators anticommute.
    pub fn anticommutes_with(&self, other: &PauliString) -> bool {
        debug_assert_eq!(self.n, other.n);
        let mut acc = 0u32;
        for i in 0..self.x.len() {
            acc ^= (self.x[i] & other.z[i]).count_ones() ^ (self.z[i] & other.x[i]).count_ones();
        }
        acc & 1 == 1
    }

    pub fn commutes_with(&self, other: &PauliString) -> bool {
        !self.anticommutes_with(other)
    }

    /// In-place product `self ← self · other` with exact phase tracking.
    ///
    /// Writing each operator as `i^k X^a Z^b`, moving `other`'s X-part across
    /// `self`'s Z-part contributes `(−1)^(b_self · a_other)`.
    pub fn mul_assign(&mut self, other: &PauliString) {
        debug_assert_eq!(self.n, other.n);
        let mut swaps = 0u32;
        for i in 0..self.x.len() {
            swaps ^= (self.z[i] & other.x[i]).count_ones();
        }
        let mut k = self.phase.exponent() + other.phase.exponent();
        if swaps & 1 == 1 {
            k += 2;
        }
        for i in 0..self.x.len() {
            self.x[i] ^= other.x[i];
            self.z[i] ^= other.z[i];
        }
        self.phase = Phase::from_exponent(k);
    }

    pub fn mul(&self, other: &PauliString) -> Result<PauliString, PauliError> {
        if self.n != other.n {
            return Err(PauliError::LengthMismatch(self.n, other.n));
        }
        let mut p = self.clone();
        p.mul_assign(other);
        Ok(p)
    }

    /// Restriction to a qubit subset: letters kept on `keep`, identity
    /// elsewhere, canonical Hermitian phase.
    pub fn restricted_to(&self, keep: &[usize]) -> PauliString {
        let letters: Vec<(usize, PauliKind)> =
            keep.iter().map(|&q| (q, self.letter(q))).collect();
        PauliString::from_sparse(self.n, &letters).expect("indices already validated")
    }

    /// Raw symplectic bit vector `(x | z)` of length `2n`, used by the GF(2)
    /// linear algebra layer.
    pub fn symplectic_bits(&self) -> Vec<u64> {
        let mut v = Vec::with_capacity(self.x.len() + self.z.len());
        v.extend_from_slice(&self.x);
        v.extend_from_slice(&self.z);
        v
    }

    pub fn from_symplectic_bits(n: usize, bits: &[u64]) -> PauliString {
        let w = words_for(n);
        assert_eq!(bits.len(), 2 * w);
        let mut p = PauliString {
            n,
            x: bits[..w].to_vec(),
            z: bits[w..].to_vec(),
            phase: Phase::PLUS_ONE,
        };
        p.normalize_hermitian();
        p
    }
}

impl fmt::Display for PauliString {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        // Phase shown relative to the Hermitian letters, so `Y` prints as
        // "+Y" even though it is stored as i·X·Z.
        let rel = (self.phase.exponent() + 4 - (self.y_weight() % 4) as u8) & 3;
        write!(f, "{}", Phase::from_exponent(rel))?;
        for q in 0..self.n {
            write!(f, "{}", self.letter(q).letter())?;
        }
        Ok(())
    }
}

impl fmt::Debug for PauliString {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

/// True iff `p` equals a product of the generators *including phase*.
///
/// Solves the symplectic linear system over GF(2) and then verifies the
/// phase of the reconstructed product.
pub fn in_group(p: &PauliString, generators: &[PauliString]) -> bool {
    if generators.is_empty() {
        return p.is_identity_up_to_phase() && p.phase() == Phase::PLUS_ONE;
    }
    let n = p.len();
    let rows: Vec<Vec<u64>> = generators.iter().map(|g| g.symplectic_bits()).collect();
    let target = p.symplectic_bits();
    // The symplectic vector is word-aligned: x words then z words.
    let width = target.len() * 64;
    match crate::gf2::solve(&rows, &target, width) {
        None => false,
        Some(selection) => {
            let mut q = PauliString::identity(n);
            for (i, g) in generators.iter().enumerate() {
                if selection[i] {
                    q.mul_assign(g);
                }
            }
            q == *p
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn single_qubit_products() {
        let x = PauliString::parse("X").unwrap();
        let y = PauliString::parse("Y").unwrap();
        let z = PauliString::parse("Z").unwrap();
        // X·Z = −iY and Z·X = +iY
        let minus_i_y = {
            let mut p = y.clone();
            p.set_phase(p.phase().mul(Phase::MINUS_I));
            p
        };
        assert_eq!(x.mul(&z).unwrap(), minus_i_y);
        let plus_i_y = {
            let mut p = y;
            p.set_phase(p.phase().mul(Phase::PLUS_I));
            p
        };
        assert_eq!(z.mul(&x).unwrap(), plus_i_y);
    }

    #[test]
    fn hermitian_squares_to_identity() {
        for s in ["X", "Y", "Z", "XY", "YZXX", "-YY"] {
            let p = PauliString::parse(s).unwrap();
            assert!(p.is_hermitian(), "{s}");
            let sq = p.mul(&p).unwrap();
            assert!(sq.is_identity_up_to_phase());
            assert_eq!(sq.phase(), Phase::PLUS_ONE, "{s} squared");
        }
    }

    #[test]
    fn commutation_basics() {
        let x = PauliString::parse("X").unwrap();
        let z = PauliString::parse("Z").unwrap();
        assert!(x.anticommutes_with(&z));
        let s = PauliString::parse("XYZZIIX").unwrap();
        let s2 = PauliString::parse("IIIXXZZ").unwrap();
        // overlaps: qubit 3 (Z vs X) and qubit 6 (X vs Z) anticommute pairwise
        assert!(s.commutes_with(&s2));
    }

    #[test]
    fn parse_display_roundtrip() {
        for s in ["+XIZY", "-IIXX", "+iXZ", "-iYYY"] {
            let p = PauliString::parse(s).unwrap();
            assert_eq!(format!("{p}"), s.replace("+i", "+i"));
        }
    }

    #[test]
    fn in_group_basics() {
        let g1 = PauliString::parse("ZZII").unwrap();
        let g2 = PauliString::parse("IIZZ").unwrap();
        let p = PauliString::parse("ZZZZ").unwrap();
        assert!(in_group(&p, &[g1.clone(), g2.clone()]));
        assert!(!in_group(&p, &[g1.clone()]));
        assert!(in_group(&PauliString::identity(4), &[g1.clone(), g2.clone()]));
        // -ZZZZ is not in the group even though its bits are
        assert!(!in_group(&p.negated(), &[g1, g2]));
    }
}
