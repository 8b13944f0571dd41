//! 2×2 rational matrices, Hermite decomposition and Γ(N) coset bookkeeping.

mod coset;
mod mat;

pub use coset::{
    coset_key, gamma_membership, hecke_coset_reps, hnf_decompose, lift_sl2, orbit_guard, right_orbit, set_orbit_guard,
    CongruenceLevel, CosetKey, Triangular, Upper, DEFAULT_ORBIT_GUARD,
};
pub use mat::{Mat2Q, Mat2Z};
