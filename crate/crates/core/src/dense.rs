//! Brute-force dense statevector reference.
//!
//! A plain `2^n` complex statevector with Pauli application, unitary gates
//! and projective measurement. Exponentially slow on purpose: it exists so
//! the tableau simulator, gate conjugation rules and protocol corrections can
//! be checked against an implementation that shares no code path with them.
//! Keep it for oracles and derivations only.

use num_complex::Complex64;

use crate::pauli::{PauliKind, PauliString};

const EPS: f64 = 1e-9;

#[derive(Clone, Debug)]
pub struct DenseState {
    n: usize,
    amps: Vec<Complex64>,
}

impl DenseState {
    /// |0…0⟩ on `n` qubits (n ≤ 20 or so).
    pub fn zero(n: usize) -> DenseState {
        let mut amps = vec![Complex64::new(0.0, 0.0); 1 << n];
        amps[0] = Complex64::new(1.0, 0.0);
        DenseState { n, amps }
    }

    pub fn num_qubits(&self) -> usize {
        self.n
    }

    pub fn amplitudes(&self) -> &[Complex64] {
        &self.amps
    }

    /// Apply a full Pauli operator (with its phase).
    pub fn apply_pauli(&mut self, p: &PauliString) {
        assert_eq!(p.len(), self.n);
        let phase = match p.phase().exponent() {
            0 => Complex64::new(1.0, 0.0),
            1 => Complex64::new(0.0, 1.0),
            2 => Complex64::new(-1.0, 0.0),
            _ => Complex64::new(0.0, -1.0),
        };
        // value = phase · X^a Z^b (X factors left of Z factors); acting on a
        // basis state |s⟩ gives phase · (−1)^(b·s) |s ⊕ a⟩ — note Z acts
        // first on |s⟩, then X flips.
        let mut a_mask = 0usize;
        let mut b_mask = 0usize;
        for q in 0..self.n {
            if p.x_bit(q) {
                a_mask |= 1 << q;
            }
            if p.z_bit(q) {
                b_mask |= 1 << q;
            }
        }
        let mut out = vec![Complex64::new(0.0, 0.0); self.amps.len()];
        for (s, &amp) in self.amps.iter().enumerate() {
            let sign = if ((s & b_mask).count_ones()) % 2 == 1 { -1.0 } else { 1.0 };
            out[s ^ a_mask] += amp * phase * sign;
        }
        self.amps = out;
    }

    /// Apply a single-qubit unitary given as a 2×2 matrix.
    pub fn apply_1q(&mut self, q: usize, m: [[Complex64; 2]; 2]) {
        let bit = 1usize << q;
        for s in 0..self.amps.len() {
            if s & bit == 0 {
                let a0 = self.amps[s];
                let a1 = self.amps[s | bit];
                self.amps[s] = m[0][0] * a0 + m[0][1] * a1;
                self.amps[s | bit] = m[1][0] * a0 + m[1][1] * a1;
            }
        }
    }

    /// Apply a controlled single-qubit Pauli from `control` to `target`.
    pub fn apply_controlled_pauli(&mut self, control: usize, target: usize, kind: PauliKind) {
        let cbit = 1usize << control;
        let tbit = 1usize << target;
        let i = Complex64::new(0.0, 1.0);
        let mut out = self.amps.clone();
        for s in 0..self.amps.len() {
            if s & cbit != 0 {
                match kind {
                    PauliKind::I => {}
                    PauliKind::X => {
                        out[s ^ tbit] = self.amps[s];
                    }
                    PauliKind::Z => {
                        if s & tbit != 0 {
                            out[s] = -self.amps[s];
                        }
                    }
                    PauliKind::Y => {
                        // Y|0⟩ = i|1⟩, Y|1⟩ = −i|0⟩
                        let sign = if s & tbit == 0 { i } else { -i };
                        out[s ^ tbit] = sign * self.amps[s];
                    }
                }
            }
        }
        self.amps = out;
    }

    pub fn apply_h(&mut self, q: usize) {
        let r = Complex64::new(std::f64::consts::FRAC_1_SQRT_2, 0.0);
        self.apply_1q(q, [[r, r], [r, -r]]);
    }

    pub fn apply_s(&mut self, q: usize) {
        let zero = Complex64::new(0.0, 0.0);
        let one = Complex64::new(1.0, 0.0);
        let i = Complex64::new(0.0, 1.0);
        self.apply_1q(q, [[one, zero], [zero, i]]);
    }

    pub fn apply_sdg(&mut self, q: usize) {
        let zero = Complex64::new(0.0, 0.0);
        let one = Complex64::new(1.0, 0.0);
        let i = Complex64::new(0.0, 1.0);
        self.apply_1q(q, [[one, zero], [zero, -i]]);
    }

    pub fn apply_cnot(&mut self, control: usize, target: usize) {
        self.apply_controlled_pauli(control, target, PauliKind::X);
    }

    /// ⟨ψ| P |ψ⟩ (real part; imaginary part must vanish for Hermitian P).
    pub fn expectation(&self, p: &PauliString) -> f64 {
        let mut phi = self.clone();
        phi.apply_pauli(p);
        let mut acc = Complex64::new(0.0, 0.0);
        for (a, b) in self.amps.iter().zip(&phi.amps) {
            acc += a.conj() * b;
        }
        assert!(acc.im.abs() < 1e-7, "non-real expectation for {p}");
        acc.re
    }

    /// Probability that measuring Hermitian `p` yields +1.
    pub fn prob_plus(&self, p: &PauliString) -> f64 {
        (1.0 + self.expectation(p)) / 2.0
    }

    /// Project onto the `outcome` eigenspace of Hermitian `p` and
    /// renormalize. Returns the pre-projection probability of that outcome.
    pub fn project(&mut self, p: &PauliString, outcome: i8) -> f64 {
        assert!(p.is_hermitian());
        let mut phi = self.clone();
        phi.apply_pauli(p);
        let sgn = f64::from(outcome);
        for (a, b) in self.amps.iter_mut().zip(&phi.amps) {
            *a = (*a + sgn * b) / 2.0;
        }
        let norm2: f64 = self.amps.iter().map(|a| a.norm_sqr()).sum();
        if norm2 > EPS {
            let scale = norm2.sqrt().recip();
            for a in &mut self.amps {
                *a *= scale;
            }
        }
        norm2
    }

    /// Overlap |⟨other|self⟩|.
    pub fn fidelity(&self, other: &DenseState) -> f64 {
        let mut acc = Complex64::new(0.0, 0.0);
        for (a, b) in other.amps.iter().zip(&self.amps) {
            acc += a.conj() * b;
        }
        acc.norm()
    }
}

/// Dense matrix of a Pauli operator, for conjugation oracles on few qubits.
pub fn pauli_matrix(p: &PauliString) -> Vec<Vec<Complex64>> {
    let dim = 1usize << p.len();
    let mut m = vec![vec![Complex64::new(0.0, 0.0); dim]; dim];
    for col in 0..dim {
        let mut state = DenseState::zero(p.len());
        state.amps = vec![Complex64::new(0.0, 0.0); dim];
        state.amps[col] = Complex64::new(1.0, 0.0);
        state.apply_pauli(p);
        for (row, entry) in m.iter_mut().enumerate() {
            entry[col] = state.amps[row];
        }
    }
    m
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn pauli_action_on_plus_state() {
        let mut st = DenseState::zero(1);
        st.apply_h(0);
        let x = PauliString::parse("X").unwrap();
        assert!((st.expectation(&x) - 1.0).abs() < EPS);
        let z = PauliString::parse("Z").unwrap();
        assert!(st.expectation(&z).abs() < EPS);
    }

    #[test]
    fn y_is_ixz() {
        // Y|0⟩ = i|1⟩, Y|1⟩ = −i|0⟩
        let y = PauliString::parse("Y").unwrap();
        let mut st = DenseState::zero(1);
        st.apply_pauli(&y);
        assert!((st.amps[1] - Complex64::new(0.0, 1.0)).norm() < EPS);
        let m = pauli_matrix(&y);
        assert!((m[0][1] - Complex64::new(0.0, -1.0)).norm() < EPS);
    }

    #[test]
    fn projection_splits_plus() {
        let mut st = DenseState::zero(1);
        st.apply_h(0);
        let z = PauliString::parse("Z").unwrap();
        let p = st.project(&z, -1);
        assert!((p - 0.5).abs() < EPS);
        assert!((st.expectation(&z) + 1.0).abs() < EPS);
    }

    #[test]
    fn controlled_y_conjugation() {
        // controlled-Y maps X⊗I → X⊗Y on (control, target)
        let mut a = DenseState::zero(2);
        a.apply_h(0);
        a.apply_h(1);
        a.apply_s(1); // |+i⟩ on target: eigenstate of Y
        let mut b = a.clone();
        b.apply_controlled_pauli(0, 1, PauliKind::Y);
        let xi = PauliString::from_sparse(2, &[(0, PauliKind::X)]).unwrap();
        // expectation transport: ⟨CY a| X⊗Y |CY a⟩ == ⟨a| X⊗I |a⟩
        let xy = PauliString::from_sparse(2, &[(0, PauliKind::X), (1, PauliKind::Y)]).unwrap();
        assert!((b.expectation(&xy) - a.expectation(&xi)).abs() < EPS);
    }
}
