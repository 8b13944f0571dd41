//! Operators on forms lifted pointwise to Hecke operators.

use super::TwistedHeckeOp;
use crate::forms::{mu_form, nu_form};
use crate::quasimod::{self, QuasiModularForm};
use crate::Result;

/// Applies a ‖-compatible operator on forms to every value, shifting the weight by `shift`.
pub fn lift_qm(f: &TwistedHeckeOp, shift: i64, op: impl Fn(&QuasiModularForm) -> QuasiModularForm) -> TwistedHeckeOp {
    f.map_values(f.weight() + shift, |v| Ok(op(v))).expect("pointwise operators cannot fail")
}

pub fn lift_d(f: &TwistedHeckeOp) -> TwistedHeckeOp {
    lift_qm(f, 2, quasimod::op_d)
}

pub fn lift_w(k: u32, f: &TwistedHeckeOp) -> TwistedHeckeOp {
    lift_qm(f, 2 * k as i64 - 4, |v| quasimod::op_w(k, v))
}

pub fn lift_e(f: &TwistedHeckeOp) -> TwistedHeckeOp {
    lift_qm(f, 4, quasimod::op_e)
}

pub fn lift_t(k: u32, l: u32, f: &TwistedHeckeOp) -> TwistedHeckeOp {
    lift_qm(f, 2 * k as i64 - 4 + 4 * l as i64, |v| quasimod::op_t(k, l, v))
}

pub fn lift_x(f: &TwistedHeckeOp) -> TwistedHeckeOp {
    lift_qm(f, 2, quasimod::op_x)
}

pub fn lift_y(f: &TwistedHeckeOp) -> TwistedHeckeOp {
    lift_qm(f, 0, quasimod::op_y)
}

/// φ^(m)(F)_α = ν_α^(m)·F_α.
pub fn lift_phi(m: u32, f: &TwistedHeckeOp) -> Result<TwistedHeckeOp> {
    f.map_keyed(f.weight() + 4 * m as i64, f.twist(), |k, v| Ok(v.mul_form(&nu_form(&k.reconstruct(), m)?)))
}

/// δ_n(F)_α = X^(n−1)(μ_{ασ⁻¹})·F_α.
pub fn lift_delta(n: u32, f: &TwistedHeckeOp) -> Result<TwistedHeckeOp> {
    assert!(n >= 1, "δ_n needs n ≥ 1");
    let sigma_inv = f.twist().inv_sl2().to_q();
    f.map_keyed(f.weight() + 2 * n as i64, f.twist(), |k, v| {
        let mut mu = mu_form(&k.reconstruct().mul(&sigma_inv))?;
        for _ in 1..n {
            mu = mu.serre();
        }
        Ok(v.mul_form(&mu))
    })
}
