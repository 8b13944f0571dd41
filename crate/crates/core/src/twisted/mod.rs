//! Twisted quasimodular Hecke operators: the pairing, the right module structure
//! over the untwisted algebra, the twisting maps X_τ and the graded tower.

mod tower;

pub use tower::{op_xn, op_z, rho, tower_pair, GradedTower};

use crate::heckealg::{assemble, TwistedHeckeOp};
use crate::lattice::{Mat2Q, Mat2Z};
use crate::quasimod::{self, QuasiModularForm};
use crate::{Error, Result};

fn same_level(f: &TwistedHeckeOp, g: &TwistedHeckeOp) -> Result<()> {
    if f.level() != g.level() {
        return Err(Error::LevelMismatch(f.level(), g.level()));
    }
    Ok(())
}

fn sum(level: u64, weight: i64, terms: Vec<QuasiModularForm>) -> Result<QuasiModularForm> {
    terms.into_iter().try_fold(QuasiModularForm::zero(level, weight), |acc, t| acc.try_add(&t))
}

/// Γ\SL₂(ℤ) representatives β with F_{βσ} ≠ 0, paired with that value.
fn live_cosets(f: &TwistedHeckeOp, sigma: &Mat2Z) -> Result<Vec<(Mat2Z, QuasiModularForm)>> {
    let mut out = Vec::new();
    for u in f.congruence().sl2_coset_lifts() {
        let v = f.evaluate(&u.mul(sigma).to_q())?;
        if !v.is_zero() {
            out.push((u, v));
        }
    }
    Ok(out)
}

fn pair_candidates(f1: &TwistedHeckeOp, f2: &TwistedHeckeOp, sigma: &Mat2Z) -> Result<Vec<Mat2Q>> {
    let t2 = f2.sorted_table()?;
    let mut c = Vec::new();
    for (u, _) in live_cosets(f1, sigma)? {
        let us = u.mul(sigma).to_q();
        for (_, g, _) in &t2 {
            c.push(g.mul(&us));
        }
    }
    Ok(c)
}

/// (F¹,F²)_α = Σ_{β ∈ Γ\SL₂(ℤ)} F¹_{βσ}·(F²_{ασ⁻¹β⁻¹}‖σβ).
pub fn pair_value(f1: &TwistedHeckeOp, f2: &TwistedHeckeOp, alpha: &Mat2Q) -> Result<QuasiModularForm> {
    let s = f1.twist();
    let mut terms = Vec::new();
    for (u, v1) in live_cosets(f1, &s)? {
        let arg = alpha.mul(&u.mul(&s).inv_sl2().to_q());
        let v2 = f2.evaluate(&arg)?;
        if !v2.is_zero() {
            terms.push(v1.mul(&v2.dslash(&s.mul(&u).to_q())?));
        }
    }
    sum(f1.level(), f1.weight() + f2.weight(), terms)
}

pub fn pair(f1: &TwistedHeckeOp, f2: &TwistedHeckeOp) -> Result<TwistedHeckeOp> {
    same_level(f1, f2)?;
    if f1.twist() != f2.twist() {
        return Err(Error::TwistMismatch);
    }
    let s = f1.twist();
    let cands = pair_candidates(f1, f2, &s)?;
    assemble(f1.level(), s, f1.weight() + f2.weight(), &cands, |a| pair_value(f1, f2, a))
}

/// (F¹∗F²)_α = Σ_β F¹_{βσ}·(F²_{ασ⁻¹β⁻¹}‖β) for F² untwisted; the slash on F² is ‖.
pub fn right_act_value(f1: &TwistedHeckeOp, f2: &TwistedHeckeOp, alpha: &Mat2Q) -> Result<QuasiModularForm> {
    let s_inv = f1.twist().inv_sl2().to_q();
    let mut terms = Vec::new();
    if !f2.is_zero() {
        for (_, b, v1) in f1.sorted_table()? {
            let beta = b.mul(&s_inv);
            let v2 = f2.evaluate(&alpha.mul(&b.inv()?))?;
            if !v2.is_zero() {
                terms.push(v1.mul(&v2.dslash(&beta)?));
            }
        }
    }
    sum(f1.level(), f1.weight() + f2.weight(), terms)
}

pub fn right_act(f1: &TwistedHeckeOp, f2: &TwistedHeckeOp) -> Result<TwistedHeckeOp> {
    same_level(f1, f2)?;
    if f2.twist() != Mat2Z::identity() {
        return Err(Error::TwistMismatch);
    }
    let t1 = f1.sorted_table()?;
    let t2 = f2.sorted_table()?;
    let mut cands = Vec::new();
    for (_, b, _) in &t1 {
        for (_, g, _) in &t2 {
            cands.push(g.mul(b));
        }
    }
    assemble(f1.level(), f1.twist(), f1.weight() + f2.weight(), &cands, |a| right_act_value(f1, f2, a))
}

/// X_τ(F)_α = X(F_α)‖τ⁻¹, landing in twist τσ.
pub fn x_tau(f: &TwistedHeckeOp, tau: &Mat2Z) -> Result<TwistedHeckeOp> {
    if tau.det() != 1 {
        return Err(Error::NotUnimodular);
    }
    let ti = tau.inv_sl2().to_q();
    let identity = *tau == Mat2Z::identity();
    f.map_keyed(f.weight() + 2, tau.mul(&f.twist()), |_, v| {
        let x = quasimod::op_x(v);
        if identity {
            Ok(x)
        } else {
            x.dslash(&ti)
        }
    })
}

/// τ₁ and τ₂ with twist(F¹) = τ₁σ and twist(F²) = τ₂σ; they must commute.
pub fn relative_twists(f1: &TwistedHeckeOp, f2: &TwistedHeckeOp, sigma: &Mat2Z) -> Result<(Mat2Z, Mat2Z)> {
    if sigma.det() != 1 {
        return Err(Error::NotUnimodular);
    }
    let si = sigma.inv_sl2();
    let t1 = f1.twist().mul(&si);
    let t2 = f2.twist().mul(&si);
    if t1.mul(&t2) != t2.mul(&t1) {
        return Err(Error::NonCommutingTwists);
    }
    Ok((t1, t2))
}

/// (F¹,F²)_α = Σ_β (F¹_{βσ}‖τ₂⁻¹)·(F²_{ασ⁻¹β⁻¹}‖τ₂σβτ₁⁻¹τ₂⁻¹).
pub fn graded_pair_value(
    f1: &TwistedHeckeOp,
    f2: &TwistedHeckeOp,
    sigma: &Mat2Z,
    alpha: &Mat2Q,
) -> Result<QuasiModularForm> {
    let (t1, t2) = relative_twists(f1, f2, sigma)?;
    let (t1i, t2i) = (t1.inv_sl2(), t2.inv_sl2());
    let mut terms = Vec::new();
    for (u, v1) in live_cosets(f1, sigma)? {
        let arg = alpha.mul(&u.mul(sigma).inv_sl2().to_q());
        let v2 = f2.evaluate(&arg)?;
        if v2.is_zero() {
            continue;
        }
        let left = v1.dslash(&t2i.to_q())?;
        let right = v2.dslash(&t2.mul(sigma).mul(&u).mul(&t1i).mul(&t2i).to_q())?;
        terms.push(left.mul(&right));
    }
    sum(f1.level(), f1.weight() + f2.weight(), terms)
}

pub fn graded_pair(f1: &TwistedHeckeOp, f2: &TwistedHeckeOp, sigma: &Mat2Z) -> Result<TwistedHeckeOp> {
    same_level(f1, f2)?;
    let (t1, t2) = relative_twists(f1, f2, sigma)?;
    let cands = pair_candidates(f1, f2, sigma)?;
    assemble(f1.level(), t1.mul(&t2).mul(sigma), f1.weight() + f2.weight(), &cands, |a| {
        graded_pair_value(f1, f2, sigma, a)
    })
}
