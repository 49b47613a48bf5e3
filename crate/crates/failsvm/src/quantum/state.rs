//! Dense statevector simulation of few-qubit circuits.
//!
//! Basis indices are big-endian bitstrings: qubit 0 is the leftmost bit of
//! the ket label, so on 4 qubits the state `|1000>` has amplitude index 8.

use crate::error::{Error, Result};
use num_complex::Complex64;
use std::f64::consts::FRAC_1_SQRT_2;
use std::fmt::Write as _;

/// Widest supported register; 2^20 amplitudes keeps desk-scale memory bounded.
pub const MAX_QUBITS: usize = 20;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum GateKind {
    H,
    RX,
    RY,
    RZ,
    CNOT,
    CZ,
    RZZ,
}

impl GateKind {
    pub fn arity(self) -> usize {
        match self {
            GateKind::H | GateKind::RX | GateKind::RY | GateKind::RZ => 1,
            GateKind::CNOT | GateKind::CZ | GateKind::RZZ => 2,
        }
    }

    pub fn takes_angle(self) -> bool {
        matches!(
            self,
            GateKind::RX | GateKind::RY | GateKind::RZ | GateKind::RZZ
        )
    }
}

/// One gate application: kind, target qubits and rotation angle where
/// applicable. For `CNOT` the first target is the control.
#[derive(Debug, Clone, PartialEq)]
pub struct Gate {
    pub kind: GateKind,
    pub targets: Vec<usize>,
    pub angle: Option<f64>,
}

impl Gate {
    pub fn h(q: usize) -> Gate {
        Gate {
            kind: GateKind::H,
            targets: vec![q],
            angle: None,
        }
    }

    pub fn rx(q: usize, angle: f64) -> Gate {
        Gate {
            kind: GateKind::RX,
            targets: vec![q],
            angle: Some(angle),
        }
    }

    pub fn ry(q: usize, angle: f64) -> Gate {
        Gate {
            kind: GateKind::RY,
            targets: vec![q],
            angle: Some(angle),
        }
    }

    pub fn rz(q: usize, angle: f64) -> Gate {
        Gate {
            kind: GateKind::RZ,
            targets: vec![q],
            angle: Some(angle),
        }
    }

    pub fn cnot(control: usize, target: usize) -> Gate {
        Gate {
            kind: GateKind::CNOT,
            targets: vec![control, target],
            angle: None,
        }
    }

    pub fn cz(a: usize, b: usize) -> Gate {
        Gate {
            kind: GateKind::CZ,
            targets: vec![a, b],
            angle: None,
        }
    }

    pub fn rzz(a: usize, b: usize, angle: f64) -> Gate {
        Gate {
            kind: GateKind::RZZ,
            targets: vec![a, b],
            angle: Some(angle),
        }
    }

    /// Inverse gate; self-inverse kinds are returned as-is, rotations negate
    /// their angle.
    pub fn inverse(&self) -> Gate {
        Gate {
            kind: self.kind,
            targets: self.targets.clone(),
            angle: self.angle.map(|a| -a),
        }
    }

    fn validate(&self, n_qubits: usize) -> Result<()> {
        if self.targets.len() != self.kind.arity() {
            return Err(Error::Shape(format!(
                "{:?} takes {} target(s), got {:?}",
                self.kind,
                self.kind.arity(),
                self.targets
            )));
        }
        if self.targets.iter().any(|&q| q >= n_qubits) {
            return Err(Error::Shape(format!(
                "gate targets {:?} out of range for {n_qubits} qubit(s)",
                self.targets
            )));
        }
        if self.targets.len() == 2 && self.targets[0] == self.targets[1] {
            return Err(Error::Shape(format!(
                "two-qubit gate targets must be distinct, got {:?}",
                self.targets
            )));
        }
        match (self.kind.takes_angle(), self.angle) {
            (true, Some(a)) if a.is_finite() => Ok(()),
            (true, _) => Err(Error::Shape(format!(
                "{:?} requires a finite rotation angle",
                self.kind
            ))),
            (false, None) => Ok(()),
            (false, Some(_)) => Err(Error::Shape(format!(
                "{:?} takes no rotation angle",
                self.kind
            ))),
        }
    }
}

/// Dense complex amplitude vector over `2^n` basis states.
#[derive(Debug, Clone, PartialEq)]
pub struct Statevector {
    n_qubits: usize,
    amps: Vec<Complex64>,
}

impl Statevector {
    /// The reference state `|0...0>`.
    pub fn zero_state(n_qubits: usize) -> Result<Self> {
        if !(1..=MAX_QUBITS).contains(&n_qubits) {
            return Err(Error::Capacity(n_qubits));
        }
        let mut amps = vec![Complex64::new(0.0, 0.0); 1 << n_qubits];
        amps[0] = Complex64::new(1.0, 0.0);
        Ok(Statevector { n_qubits, amps })
    }

    pub fn n_qubits(&self) -> usize {
        self.n_qubits
    }

    pub fn amps(&self) -> &[Complex64] {
        &self.amps
    }

    pub fn norm(&self) -> f64 {
        self.amps.iter().map(|a| a.norm_sqr()).sum::<f64>().sqrt()
    }

    /// Bit mask selecting qubit `q` in an amplitude index (big-endian).
    fn mask(&self, q: usize) -> usize {
        1 << (self.n_qubits - 1 - q)
    }

    /// Applies a gate in place.
    pub fn apply(&mut self, gate: &Gate) -> Result<()> {
        gate.validate(self.n_qubits)?;
        match gate.kind {
            GateKind::H => {
                let s = Complex64::new(FRAC_1_SQRT_2, 0.0);
                self.single_qubit(gate.targets[0], [s, s, s, -s]);
            }
            GateKind::RX => {
                let half = gate.angle.unwrap() / 2.0;
                let c = Complex64::new(half.cos(), 0.0);
                let ms = Complex64::new(0.0, -half.sin());
                self.single_qubit(gate.targets[0], [c, ms, ms, c]);
            }
            GateKind::RY => {
                let half = gate.angle.unwrap() / 2.0;
                let c = Complex64::new(half.cos(), 0.0);
                let s = Complex64::new(half.sin(), 0.0);
                self.single_qubit(gate.targets[0], [c, -s, s, c]);
            }
            GateKind::RZ => {
                let half = gate.angle.unwrap() / 2.0;
                let phase0 = Complex64::from_polar(1.0, -half);
                let phase1 = Complex64::from_polar(1.0, half);
                let m = self.mask(gate.targets[0]);
                for (i, a) in self.amps.iter_mut().enumerate() {
                    *a *= if i & m == 0 { phase0 } else { phase1 };
                }
            }
            GateKind::CNOT => {
                let c = self.mask(gate.targets[0]);
                let t = self.mask(gate.targets[1]);
                for i in 0..self.amps.len() {
                    if i & c != 0 && i & t == 0 {
                        self.amps.swap(i, i | t);
                    }
                }
            }
            GateKind::CZ => {
                let a = self.mask(gate.targets[0]);
                let b = self.mask(gate.targets[1]);
                for (i, amp) in self.amps.iter_mut().enumerate() {
                    if i & a != 0 && i & b != 0 {
                        *amp = -*amp;
                    }
                }
            }
            GateKind::RZZ => {
                let half = gate.angle.unwrap() / 2.0;
                let even = Complex64::from_polar(1.0, -half);
                let odd = Complex64::from_polar(1.0, half);
                let a = self.mask(gate.targets[0]);
                let b = self.mask(gate.targets[1]);
                for (i, amp) in self.amps.iter_mut().enumerate() {
                    let parity = ((i & a != 0) as u8) ^ ((i & b != 0) as u8);
                    *amp *= if parity == 0 { even } else { odd };
                }
            }
        }
        Ok(())
    }

    fn single_qubit(&mut self, q: usize, u: [Complex64; 4]) {
        let m = self.mask(q);
        for i in 0..self.amps.len() {
            if i & m == 0 {
                let j = i | m;
                let x = self.amps[i];
                let y = self.amps[j];
                self.amps[i] = u[0] * x + u[1] * y;
                self.amps[j] = u[2] * x + u[3] * y;
            }
        }
    }

    /// Applies a gate sequence in order.
    pub fn apply_circuit(&mut self, gates: &[Gate]) -> Result<()> {
        for g in gates {
            self.apply(g)?;
        }
        Ok(())
    }

    /// `<self|other>`.
    pub fn inner_product(&self, other: &Statevector) -> Result<Complex64> {
        if self.n_qubits != other.n_qubits {
            return Err(Error::Shape(format!(
                "statevector widths differ: {} vs {}",
                self.n_qubits, other.n_qubits
            )));
        }
        Ok(self
            .amps
            .iter()
            .zip(&other.amps)
            .map(|(a, b)| a.conj() * b)
            .sum())
    }

    /// Probability of measuring the all-zeros bitstring.
    pub fn prob_all_zeros(&self) -> f64 {
        self.amps[0].norm_sqr()
    }

    /// Basis-state probabilities.
    pub fn probabilities(&self) -> Vec<f64> {
        self.amps.iter().map(|a| a.norm_sqr()).collect()
    }

    /// Debug dump: `index,re,im` rows.
    pub fn amplitudes_csv(&self) -> String {
        let mut out = String::from("index,re,im\n");
        for (i, a) in self.amps.iter().enumerate() {
            let _ = writeln!(out, "{},{},{}", i, a.re, a.im);
        }
        out
    }
}

/// The reference state `|0...0>` on `n_qubits` qubits.
pub fn init_state(n_qubits: usize) -> Result<Statevector> {
    Statevector::zero_state(n_qubits)
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::Rng;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn ghz4() -> Statevector {
        let mut st = Statevector::zero_state(4).unwrap();
        st.apply(&Gate::h(0)).unwrap();
        for q in 0..3 {
            st.apply(&Gate::cnot(q, q + 1)).unwrap();
        }
        st
    }

    #[test]
    fn zero_states() {
        let st = Statevector::zero_state(1).unwrap();
        assert_eq!(
            st.amps(),
            &[Complex64::new(1.0, 0.0), Complex64::new(0.0, 0.0)]
        );
        let st2 = Statevector::zero_state(2).unwrap();
        assert_eq!(st2.amps()[0], Complex64::new(1.0, 0.0));
        assert!(st2.amps()[1..].iter().all(|a| a.norm_sqr() == 0.0));
    }

    #[test]
    fn capacity_guard() {
        assert!(matches!(
            Statevector::zero_state(21),
            Err(Error::Capacity(21))
        ));
        assert!(matches!(
            Statevector::zero_state(0),
            Err(Error::Capacity(0))
        ));
    }

    #[test]
    fn hadamard_on_zero() {
        let mut st = Statevector::zero_state(1).unwrap();
        st.apply(&Gate::h(0)).unwrap();
        assert!((st.amps()[0].re - FRAC_1_SQRT_2).abs() < 1e-15);
        assert!((st.amps()[1].re - FRAC_1_SQRT_2).abs() < 1e-15);
    }

    #[test]
    fn cnot_truth_table() {
        // |10> (index 2) flips the target: -> |11> (index 3).
        let mut st = Statevector::zero_state(2).unwrap();
        // prepare |10> by swapping amplitude via X = H Z H; simpler: set with CNOT on H basis.
        // Build directly: apply RX(pi) up to phase would do, use explicit construction instead.
        let mut amps = vec![Complex64::new(0.0, 0.0); 4];
        amps[2] = Complex64::new(1.0, 0.0);
        st.amps = amps;
        st.apply(&Gate::cnot(0, 1)).unwrap();
        assert!((st.amps()[3].re - 1.0).abs() < 1e-15);
        assert!(st.amps()[2].norm_sqr() < 1e-30);
    }

    #[test]
    fn ghz_amplitudes() {
        let st = ghz4();
        assert!((st.amps()[0].re - FRAC_1_SQRT_2).abs() < 1e-12);
        assert!((st.amps()[15].re - FRAC_1_SQRT_2).abs() < 1e-12);
        for i in 1..15 {
            assert!(st.amps()[i].norm_sqr() < 1e-24);
        }
        assert!((st.prob_all_zeros() - 0.5).abs() < 1e-12);
    }

    #[test]
    fn inner_products() {
        let st = ghz4();
        let ip = st.inner_product(&st).unwrap();
        assert!((ip.re - 1.0).abs() < 1e-12 && ip.im.abs() < 1e-15);

        let zero1 = Statevector::zero_state(1).unwrap();
        let mut one1 = Statevector::zero_state(1).unwrap();
        one1.amps = vec![Complex64::new(0.0, 0.0), Complex64::new(1.0, 0.0)];
        assert_eq!(
            zero1.inner_product(&one1).unwrap(),
            Complex64::new(0.0, 0.0)
        );

        let zero4 = Statevector::zero_state(4).unwrap();
        let ghz_zero = st.inner_product(&zero4).unwrap();
        assert!((ghz_zero.re - FRAC_1_SQRT_2).abs() < 1e-12);
    }

    #[test]
    fn width_mismatch_is_shape_error() {
        let a = Statevector::zero_state(2).unwrap();
        let b = Statevector::zero_state(3).unwrap();
        assert!(matches!(a.inner_product(&b), Err(Error::Shape(_))));
    }

    #[test]
    fn uniform_superposition_probability() {
        for n in [1usize, 3, 5] {
            let mut st = Statevector::zero_state(n).unwrap();
            for q in 0..n {
                st.apply(&Gate::h(q)).unwrap();
            }
            let expected = 1.0 / (1 << n) as f64;
            assert!((st.prob_all_zeros() - expected).abs() < 1e-12);
            for p in st.probabilities() {
                assert!((p - expected).abs() < 1e-12);
            }
        }
    }

    fn random_gate(rng: &mut ChaCha8Rng, n: usize) -> Gate {
        let q = rng.gen_range(0..n);
        let mut q2 = rng.gen_range(0..n);
        while q2 == q {
            q2 = rng.gen_range(0..n);
        }
        let angle = rng.gen_range(-std::f64::consts::PI..std::f64::consts::PI);
        match rng.gen_range(0..7) {
            0 => Gate::h(q),
            1 => Gate::rx(q, angle),
            2 => Gate::ry(q, angle),
            3 => Gate::rz(q, angle),
            4 => Gate::cnot(q, q2),
            5 => Gate::cz(q, q2),
            _ => Gate::rzz(q, q2, angle),
        }
    }

    #[test]
    fn unitarity_over_long_random_circuits() {
        let mut rng = ChaCha8Rng::seed_from_u64(99);
        for &n in &[2usize, 5, 8] {
            let mut st = Statevector::zero_state(n).unwrap();
            for _ in 0..1000 {
                st.apply(&random_gate(&mut rng, n)).unwrap();
            }
            assert!((st.norm() - 1.0).abs() < 1e-12, "n = {n}");
        }
    }

    #[test]
    fn involutions_restore_state() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        let mut st = Statevector::zero_state(3).unwrap();
        for _ in 0..50 {
            st.apply(&random_gate(&mut rng, 3)).unwrap();
        }
        let reference = st.clone();
        st.apply(&Gate::h(1)).unwrap();
        st.apply(&Gate::h(1)).unwrap();
        st.apply(&Gate::cnot(0, 2)).unwrap();
        st.apply(&Gate::cnot(0, 2)).unwrap();
        for (a, b) in st.amps().iter().zip(reference.amps()) {
            assert!((a - b).norm() < 1e-12);
        }
    }

    #[test]
    fn rz_leaves_probabilities_invariant() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        let mut st = Statevector::zero_state(4).unwrap();
        for _ in 0..30 {
            st.apply(&random_gate(&mut rng, 4)).unwrap();
        }
        let before = st.probabilities();
        st.apply(&Gate::rz(2, 1.234)).unwrap();
        let after = st.probabilities();
        for (a, b) in before.iter().zip(&after) {
            assert!((a - b).abs() < 1e-12);
        }
    }

    #[test]
    fn gate_validation() {
        let mut st = Statevector::zero_state(2).unwrap();
        assert!(matches!(st.apply(&Gate::h(2)), Err(Error::Shape(_))));
        assert!(matches!(st.apply(&Gate::cnot(1, 1)), Err(Error::Shape(_))));
        assert!(matches!(
            st.apply(&Gate {
                kind: GateKind::RX,
                targets: vec![0],
                angle: None
            }),
            Err(Error::Shape(_))
        ));
    }

    #[test]
    fn amplitudes_csv_dump() {
        let st = Statevector::zero_state(1).unwrap();
        assert_eq!(st.amplitudes_csv(), "index,re,im\n0,1,0\n1,0,0\n");
    }
}
