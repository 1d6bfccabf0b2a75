use std::fmt;
use std::str::FromStr;

use crate::{Error, Result, C64};

/// Single-qubit Pauli operator.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Pauli {
    I,
    X,
    Y,
    Z,
}

impl Pauli {
    pub const ALL: [Pauli; 4] = [Pauli::I, Pauli::X, Pauli::Y, Pauli::Z];

    pub fn from_char(c: char) -> Option<Self> {
        match c {
            'I' => Some(Pauli::I),
            'X' => Some(Pauli::X),
            'Y' => Some(Pauli::Y),
            'Z' => Some(Pauli::Z),
            _ => None,
        }
    }

    pub fn as_char(self) -> char {
        match self {
            Pauli::I => 'I',
            Pauli::X => 'X',
            Pauli::Y => 'Y',
            Pauli::Z => 'Z',
        }
    }

    /// 2×2 matrix, row-major.
    pub fn matrix(self) -> [[C64; 2]; 2] {
        let o = C64::new(0.0, 0.0);
        let l = C64::new(1.0, 0.0);
        let i = C64::new(0.0, 1.0);
        match self {
            Pauli::I => [[l, o], [o, l]],
            Pauli::X => [[o, l], [l, o]],
            Pauli::Y => [[o, -i], [i, o]],
            Pauli::Z => [[l, o], [o, -l]],
        }
    }
}

/// Tensor product of single-qubit Paulis, one per qubit.
///
/// `ops[q]` acts on qubit `q`, and qubit 0 is the least significant bit of a
/// computational-basis index. The text form lists qubit 0 first, so `"XZ"`
/// is X on qubit 0 and Z on qubit 1.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct PauliString {
    ops: Vec<Pauli>,
}

impl PauliString {
    pub fn new(ops: Vec<Pauli>) -> Result<Self> {
        if ops.is_empty() {
            return Err(Error::invalid("Pauli string must cover at least one qubit"));
        }
        Ok(PauliString { ops })
    }

    pub fn identity(len: usize) -> Result<Self> {
        Self::new(vec![Pauli::I; len])
    }

    /// String with `op` on the listed qubits and identity elsewhere.
    pub fn from_sparse(len: usize, entries: &[(usize, Pauli)]) -> Result<Self> {
        let mut ops = vec![Pauli::I; len];
        for &(q, p) in entries {
            if q >= len {
                return Err(Error::invalid(format!("qubit {q} outside string of length {len}")));
            }
            ops[q] = p;
        }
        Self::new(ops)
    }

    pub fn len(&self) -> usize {
        self.ops.len()
    }

    pub fn is_empty(&self) -> bool {
        self.ops.is_empty()
    }

    pub fn ops(&self) -> &[Pauli] {
        &self.ops
    }

    pub fn get(&self, qubit: usize) -> Pauli {
        self.ops[qubit]
    }

    pub fn is_identity(&self) -> bool {
        self.ops.iter().all(|&p| p == Pauli::I)
    }

    /// Qubits carrying a non-identity letter, ascending.
    pub fn support(&self) -> Vec<usize> {
        self.ops.iter().enumerate().filter(|(_, &p)| p != Pauli::I).map(|(q, _)| q).collect()
    }

    pub fn weight(&self) -> usize {
        self.ops.iter().filter(|&&p| p != Pauli::I).count()
    }

    /// Bits flipped by the string (X or Y letters).
    pub fn x_mask(&self) -> usize {
        self.mask(|p| matches!(p, Pauli::X | Pauli::Y))
    }

    /// Bits picking up a sign (Y or Z letters).
    pub fn z_mask(&self) -> usize {
        self.mask(|p| matches!(p, Pauli::Y | Pauli::Z))
    }

    fn mask(&self, pick: impl Fn(Pauli) -> bool) -> usize {
        self.ops.iter().enumerate().filter(|(_, &p)| pick(p)).fold(0, |m, (q, _)| m | (1 << q))
    }

    /// Image of basis state `|b⟩`: `P|b⟩ = phase · |b'⟩`.
    pub fn apply_to_basis(&self, b: usize) -> (usize, C64) {
        let n_y = self.ops.iter().filter(|&&p| p == Pauli::Y).count();
        let i_pow = match n_y % 4 {
            0 => C64::new(1.0, 0.0),
            1 => C64::new(0.0, 1.0),
            2 => C64::new(-1.0, 0.0),
            _ => C64::new(0.0, -1.0),
        };
        let sign = if (b & self.z_mask()).count_ones().is_multiple_of(2) { 1.0 } else { -1.0 };
        (b ^ self.x_mask(), i_pow * sign)
    }
}

impl fmt::Display for PauliString {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for p in &self.ops {
            write!(f, "{}", p.as_char())?;
        }
        Ok(())
    }
}

impl FromStr for PauliString {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let ops = s
            .chars()
            .map(|c| Pauli::from_char(c).ok_or_else(|| Error::invalid(format!("'{c}' is not one of I, X, Y, Z"))))
            .collect::<Result<Vec<_>>>()?;
        Self::new(ops)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_and_display() {
        let p: PauliString = "XIZY".parse().unwrap();
        assert_eq!(p.len(), 4);
        assert_eq!(p.get(0), Pauli::X);
        assert_eq!(p.get(3), Pauli::Y);
        assert_eq!(p.support(), vec![0, 2, 3]);
        assert_eq!(p.to_string(), "XIZY");
        assert!("".parse::<PauliString>().is_err());
        assert!("XA".parse::<PauliString>().is_err());
        assert!("III".parse::<PauliString>().unwrap().is_identity());
    }

    #[test]
    fn basis_action_matches_single_qubit_matrices() {
        for p in Pauli::ALL {
            let s = PauliString::new(vec![p]).unwrap();
            let m = p.matrix();
            for (b, _) in m.iter().enumerate() {
                let (b2, ph) = s.apply_to_basis(b);
                assert_eq!(m[b2][b], ph);
                assert_eq!(m[1 - b2][b], C64::new(0.0, 0.0));
            }
        }
    }
}
