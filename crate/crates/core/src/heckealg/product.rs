use super::{double_coset_base, TwistedHeckeOp};
use crate::lattice::{coset_key, CongruenceLevel, CosetKey, Mat2Q, Mat2Z};
use crate::quasimod::QuasiModularForm;
use crate::{Error, Result};
use rayon::prelude::*;
use std::collections::{BTreeMap, BTreeSet};

/// Evaluates `value` at the base of every double coset met by `candidates`
/// and collects the results into an operator.
pub fn assemble<F>(level: u64, twist: Mat2Z, weight: i64, candidates: &[Mat2Q], value: F) -> Result<TwistedHeckeOp>
where
    F: Fn(&Mat2Q) -> Result<QuasiModularForm> + Sync,
{
    let cl = CongruenceLevel::new(level);
    let mut bases = BTreeSet::new();
    let mut seen = BTreeSet::new();
    for m in candidates {
        let k = coset_key(m, &cl)?;
        if seen.insert(k.clone()) {
            bases.insert(double_coset_base(&k)?.0);
        }
    }
    let bases: Vec<CosetKey> = bases.into_iter().collect();
    let values = bases.par_iter().map(|b| value(&b.reconstruct())).collect::<Result<Vec<_>>>()?;
    let support: BTreeMap<_, _> = bases.into_iter().zip(values).collect();
    Ok(TwistedHeckeOp::from_bases(level, twist, weight, support))
}

fn sum_values(level: u64, weight: i64, terms: Vec<QuasiModularForm>) -> Result<QuasiModularForm> {
    terms.into_iter().try_fold(QuasiModularForm::zero(level, weight), |acc, t| acc.try_add(&t))
}

fn untwisted(f: &TwistedHeckeOp, g: &TwistedHeckeOp) -> Result<()> {
    if f.level() != g.level() {
        return Err(Error::LevelMismatch(f.level(), g.level()));
    }
    if f.twist() != Mat2Z::identity() || g.twist() != Mat2Z::identity() {
        return Err(Error::TwistMismatch);
    }
    Ok(())
}

/// (F∗G)_α = Σ_β F_β·(G_{αβ⁻¹}‖β) over the support of F.
pub fn star_value(f: &TwistedHeckeOp, g: &TwistedHeckeOp, alpha: &Mat2Q) -> Result<QuasiModularForm> {
    let mut terms = Vec::new();
    if !g.is_zero() {
        for (_, beta, fb) in f.sorted_table()? {
            let gv = g.evaluate(&alpha.mul(&beta.inv()?))?;
            if !gv.is_zero() {
                terms.push(fb.mul(&gv.dslash(&beta)?));
            }
        }
    }
    sum_values(f.level(), f.weight() + g.weight(), terms)
}

pub fn star(f: &TwistedHeckeOp, g: &TwistedHeckeOp) -> Result<TwistedHeckeOp> {
    untwisted(f, g)?;
    let ft = f.sorted_table()?;
    let gt = g.sorted_table()?;
    let mut cands = Vec::new();
    for (_, b, _) in &ft {
        for (_, c, _) in &gt {
            cands.push(c.mul(b));
        }
    }
    assemble(f.level(), Mat2Z::identity(), f.weight() + g.weight(), &cands, |a| star_value(f, g, a))
}

/// (F∗ʳG)_α = Σ_{β ∈ Γ\SL₂(ℤ)} F_β·(G_{αβ⁻¹}‖β).
pub fn star_r_value(f: &TwistedHeckeOp, g: &TwistedHeckeOp, alpha: &Mat2Q) -> Result<QuasiModularForm> {
    let mut terms = Vec::new();
    for u in f.congruence().sl2_coset_lifts() {
        let beta = u.to_q();
        let fb = f.evaluate(&beta)?;
        if fb.is_zero() {
            continue;
        }
        let gv = g.evaluate(&alpha.mul(&u.inv_sl2().to_q()))?;
        if !gv.is_zero() {
            terms.push(fb.mul(&gv.dslash(&beta)?));
        }
    }
    sum_values(f.level(), f.weight() + g.weight(), terms)
}

pub fn star_r(f: &TwistedHeckeOp, g: &TwistedHeckeOp) -> Result<TwistedHeckeOp> {
    untwisted(f, g)?;
    let gt = g.sorted_table()?;
    let mut cands = Vec::new();
    for u in f.congruence().sl2_coset_lifts() {
        if f.evaluate(&u.to_q())?.is_zero() {
            continue;
        }
        for (_, c, _) in &gt {
            cands.push(c.mul(&u.to_q()));
        }
    }
    assemble(f.level(), Mat2Z::identity(), f.weight() + g.weight(), &cands, |a| star_r_value(f, g, a))
}

/// F∗f = Σ_β F_β·(f‖β) for f of level dividing N.
pub fn act_on_form(op: &TwistedHeckeOp, f: &QuasiModularForm) -> Result<QuasiModularForm> {
    if op.twist() != Mat2Z::identity() {
        return Err(Error::TwistMismatch);
    }
    if !op.level().is_multiple_of(f.level()) {
        return Err(Error::LevelMismatch(op.level(), f.level()));
    }
    let mut terms = Vec::new();
    for (_, beta, fb) in op.sorted_table()? {
        terms.push(fb.mul(&f.dslash(&beta)?));
    }
    Ok(sum_values(f.level(), op.weight() + f.weight(), terms)?.with_level(f.level()))
}
