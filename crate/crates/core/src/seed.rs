//! Counter-based seed derivation.
//!
//! Every stochastic work unit (a time point, a stochastic sample, a
//! measurement basis) gets its own seed computed from the experiment's root
//! seed and a path of integer keys. The result depends only on the keys,
//! never on execution order, so work units may run in any order or in
//! parallel and still reproduce bit for bit.
//!
//! The mixing function is SplitMix64's finalizer applied along the path:
//! `s₀ = mix(root)`, `sₖ₊₁ = mix(sₖ ⊕ mix(keyₖ + GOLDEN))`.

const GOLDEN: u64 = 0x9E37_79B9_7F4A_7C15;

fn mix(mut z: u64) -> u64 {
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Seed for the work unit identified by `path` under `root`.
pub fn derive(root: u64, path: &[u64]) -> u64 {
    path.iter().fold(mix(root), |s, &k| mix(s ^ mix(k.wrapping_add(GOLDEN))))
}

/// Stream tags used as the first path element.
pub mod stream {
    pub const HADAMARD_POINT: u64 = 1;
    pub const STOCHASTIC_SAMPLE: u64 = 2;
    pub const ROUTING: u64 = 3;
    pub const MEASURE_X: u64 = 0;
    pub const MEASURE_Y: u64 = 1;
}
