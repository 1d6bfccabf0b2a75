//! Small dense kernels shared by the circuit and simulator modules.

use crate::{CMatrix, C64};

/// Applies `m` (a `2^k × 2^k` matrix) to the qubits `targets` of a flat
/// amplitude vector over `n` qubits. `targets[0]` is the least significant
/// bit of the local index of `m`.
pub(crate) fn apply_local(amps: &mut [C64], n: usize, targets: &[usize], m: &CMatrix) {
    let k = targets.len();
    let local = 1usize << k;
    debug_assert_eq!(amps.len(), 1 << n);
    debug_assert_eq!(m.nrows(), local);
    let target_mask = targets.iter().fold(0usize, |acc, &q| acc | (1 << q));
    let offsets: Vec<usize> = (0..local)
        .map(|l| targets.iter().enumerate().filter(|(bit, _)| l >> bit & 1 == 1).fold(0, |acc, (_, &q)| acc | (1 << q)))
        .collect();
    let mut buf = vec![C64::new(0.0, 0.0); local];
    for base in 0..amps.len() {
        if base & target_mask != 0 {
            continue;
        }
        for (l, off) in offsets.iter().enumerate() {
            buf[l] = amps[base | off];
        }
        for (r, off) in offsets.iter().enumerate() {
            let mut acc = C64::new(0.0, 0.0);
            for (c, v) in buf.iter().enumerate() {
                acc += m[(r, c)] * v;
            }
            amps[base | off] = acc;
        }
    }
}

/// Largest entrywise deviation between `a` and `b` after removing the
/// global phase read off the largest-magnitude entry of `a`.
pub fn phase_insensitive_distance(a: &CMatrix, b: &CMatrix) -> f64 {
    if a.shape() != b.shape() {
        return f64::INFINITY;
    }
    let (mut best, mut idx) = (0.0, 0);
    for (k, z) in a.iter().enumerate() {
        if z.norm() > best {
            best = z.norm();
            idx = k;
        }
    }
    if best == 0.0 {
        return b.iter().fold(0.0, |acc, z| acc.max(z.norm()));
    }
    let ratio = b.as_slice()[idx] / a.as_slice()[idx];
    let phase = if ratio.norm() > 0.0 { ratio / ratio.norm() } else { C64::new(1.0, 0.0) };
    a.iter().zip(b.iter()).fold(0.0, |acc, (x, y)| acc.max((x * phase - y).norm()))
}

/// True when `a` and `b` agree up to one global phase within `tol`.
pub fn equal_up_to_phase(a: &CMatrix, b: &CMatrix, tol: f64) -> bool {
    phase_insensitive_distance(a, b) <= tol
}
