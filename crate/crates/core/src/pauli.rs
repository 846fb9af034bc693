//! Pauli strings in symplectic form.

use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::gf2::BitVec;

/// Index bit of qubit `q` in an `n`-qubit basis state; qubit 0 is the most
/// significant bit.
#[inline]
pub fn qubit_bit(n: usize, q: usize) -> usize {
    debug_assert!(q < n);
    1 << (n - 1 - q)
}

/// Converts a per-qubit bit vector into a basis-state index mask.
pub fn bitvec_to_index(v: &BitVec) -> usize {
    let n = v.len();
    (0..n).filter(|&q| v.get(q)).map(|q| qubit_bit(n, q)).sum()
}

/// Converts a basis-state index into its per-qubit bit vector.
pub fn index_to_bitvec(n: usize, index: usize) -> BitVec {
    let mut v = BitVec::zeros(n);
    for q in 0..n {
        if index & qubit_bit(n, q) != 0 {
            v.set(q);
        }
    }
    v
}

/// The operator `i^phase · X^x · Z^z` on `n` qubits.
#[derive(Clone, Copy, PartialEq, Eq, Hash)]
pub struct PauliString {
    x: BitVec,
    z: BitVec,
    phase: u8,
}

impl PauliString {
    pub fn new(x: BitVec, z: BitVec, phase_i_power: u8) -> Result<Self> {
        if x.len() != z.len() {
            return Err(Error::DimensionMismatch {
                expected: x.len(),
                found: z.len(),
            });
        }
        Ok(Self {
            x,
            z,
            phase: phase_i_power % 4,
        })
    }

    pub fn identity(n: usize) -> Self {
        Self {
            x: BitVec::zeros(n),
            z: BitVec::zeros(n),
            phase: 0,
        }
    }

    pub fn x_on(n: usize, q: usize) -> Self {
        Self {
            x: BitVec::unit(n, q),
            z: BitVec::zeros(n),
            phase: 0,
        }
    }

    pub fn z_on(n: usize, q: usize) -> Self {
        Self {
            x: BitVec::zeros(n),
            z: BitVec::unit(n, q),
            phase: 0,
        }
    }

    /// `Y = i X Z`.
    pub fn y_on(n: usize, q: usize) -> Self {
        Self {
            x: BitVec::unit(n, q),
            z: BitVec::unit(n, q),
            phase: 1,
        }
    }

    /// Builds the phase-free Pauli `X^x Z^z` from basis-index masks.
    pub fn from_index_masks(n: usize, x_mask: usize, z_mask: usize) -> Self {
        Self {
            x: index_to_bitvec(n, x_mask),
            z: index_to_bitvec(n, z_mask),
            phase: 0,
        }
    }

    /// The `2n` generators `X_0..X_{n-1}, Z_0..Z_{n-1}`.
    pub fn generators(n: usize) -> Vec<PauliString> {
        (0..n)
            .map(|q| Self::x_on(n, q))
            .chain((0..n).map(|q| Self::z_on(n, q)))
            .collect()
    }

    pub fn num_qubits(&self) -> usize {
        self.x.len()
    }

    pub fn x(&self) -> &BitVec {
        &self.x
    }

    pub fn z(&self) -> &BitVec {
        &self.z
    }

    pub fn phase_i_power(&self) -> u8 {
        self.phase
    }

    pub fn x_index_mask(&self) -> usize {
        bitvec_to_index(&self.x)
    }

    pub fn z_index_mask(&self) -> usize {
        bitvec_to_index(&self.z)
    }

    /// The symplectic vector `(x|z)`.
    pub fn symplectic(&self) -> BitVec {
        BitVec::symplectic(&self.x, &self.z)
    }

    pub fn with_phase(mut self, phase_i_power: u8) -> Self {
        self.phase = phase_i_power % 4;
        self
    }

    /// Equality ignoring the `i`-power.
    pub fn same_up_to_phase(&self, other: &PauliString) -> bool {
        self.x == other.x && self.z == other.z
    }

    pub fn commutes_with(&self, other: &PauliString) -> bool {
        !crate::gf2::symplectic_form(&self.symplectic(), &other.symplectic())
    }
}

impl fmt::Debug for PauliString {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

/// Renders as a sign prefix followed by one letter per qubit, in the
/// Hermitian convention: `Y` absorbs the `i` of `XZ`.
impl fmt::Display for PauliString {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let ys = (0..self.num_qubits())
            .filter(|&q| self.x.get(q) && self.z.get(q))
            .count() as u8;
        let shown = (self.phase + 4 - ys % 4) % 4;
        let prefix = ["+", "+i", "-", "-i"][shown as usize];
        write!(f, "{prefix}")?;
        for q in 0..self.num_qubits() {
            let c = match (self.x.get(q), self.z.get(q)) {
                (false, false) => 'I',
                (true, false) => 'X',
                (false, true) => 'Z',
                (true, true) => 'Y',
            };
            write!(f, "{c}")?;
        }
        Ok(())
    }
}

impl FromStr for PauliString {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        let (shown, body) = if let Some(rest) = s.strip_prefix("-i") {
            (3u8, rest)
        } else if let Some(rest) = s.strip_prefix("+i") {
            (1, rest)
        } else if let Some(rest) = s.strip_prefix('i') {
            (1, rest)
        } else if let Some(rest) = s.strip_prefix('-') {
            (2, rest)
        } else if let Some(rest) = s.strip_prefix('+') {
            (0, rest)
        } else {
            (0, s)
        };
        let n = body.chars().count();
        let mut x = BitVec::zeros(n);
        let mut z = BitVec::zeros(n);
        let mut ys = 0u8;
        for (q, c) in body.chars().enumerate() {
            match c {
                'I' => {}
                'X' => x.set(q),
                'Z' => z.set(q),
                'Y' => {
                    x.set(q);
                    z.set(q);
                    ys += 1;
                }
                other => {
                    return Err(Error::Parse {
                        line: 1,
                        column: q + 1 + (s.len() - body.len()),
                        message: format!("unexpected Pauli letter {other:?}"),
                    })
                }
            }
        }
        Ok(Self {
            x,
            z,
            phase: (shown + ys) % 4,
        })
    }
}
