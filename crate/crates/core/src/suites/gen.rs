//! Seeded random generators for forms, matrices and operators.

use crate::exactq::CycRational;
use crate::forms::{self, FormExpr};
use crate::heckealg::{lift_d, lift_t, lift_x, tn_op, TwistedHeckeOp};
use crate::lattice::{CongruenceLevel, Mat2Q, Mat2Z};
use crate::quasimod::QuasiModularForm;
use crate::twisted::{rho, right_act, x_tau, GradedTower};
use num_rational::BigRational;
use rand::Rng;
use std::collections::BTreeMap;

pub fn small_rational<R: Rng>(rng: &mut R) -> BigRational {
    let n = rng.gen_range(-9i64..=9);
    let d = rng.gen_range(1i64..=4);
    BigRational::new(n.into(), d.into())
}

fn nonzero_rational<R: Rng>(rng: &mut R) -> BigRational {
    loop {
        let r = small_rational(rng);
        if r != BigRational::from_integer(0.into()) {
            return r;
        }
    }
}

/// Monomials G₄^a·G₆^b of weight w.
pub fn level_one_monomials(w: i64) -> Vec<FormExpr> {
    let mut out = Vec::new();
    if w < 0 || w % 2 != 0 {
        return out;
    }
    for b in 0..=(w / 6) {
        let rest = w - 6 * b;
        if rest % 4 == 0 {
            out.push(FormExpr::product(vec![forms::g4().pow((rest / 4) as u32), forms::g6().pow(b as u32)]));
        }
    }
    out
}

/// A nonzero level-1 modular form of weight w (None when the space is zero).
pub fn random_modular<R: Rng>(rng: &mut R, w: i64) -> Option<FormExpr> {
    let basis = level_one_monomials(w);
    if basis.is_empty() {
        return None;
    }
    loop {
        let mut terms = Vec::new();
        for m in &basis {
            if rng.gen_bool(0.7) {
                terms.push(m.scale_q(&nonzero_rational(rng)));
            }
        }
        let f = FormExpr::sum(w, terms);
        if !f.is_zero() {
            return Some(f);
        }
    }
}

/// A level-1 quasimodular form with weight ≤ max_weight and depth ≤ max_depth.
pub fn random_qmf<R: Rng>(rng: &mut R, max_weight: i64, max_depth: usize) -> QuasiModularForm {
    loop {
        let k = 2 * rng.gen_range(0..=max_weight / 2);
        let s = rng.gen_range(0..=max_depth.min((k / 2) as usize));
        let Some(top) = random_modular(rng, k - 2 * s as i64) else {
            continue;
        };
        let mut coeffs: Vec<FormExpr> = (0..s)
            .map(|i| {
                let w = k - 2 * i as i64;
                if rng.gen_bool(0.75) {
                    random_modular(rng, w).unwrap_or_else(|| FormExpr::zero(w))
                } else {
                    FormExpr::zero(w)
                }
            })
            .collect();
        coeffs.push(top);
        return QuasiModularForm::new(1, k, coeffs).expect("weights are consistent");
    }
}

/// A random quasimodular form of exactly weight k and depth ≤ max_depth.
pub fn random_qmf_of_weight<R: Rng>(rng: &mut R, k: i64, max_depth: usize) -> QuasiModularForm {
    let mut coeffs = Vec::new();
    for i in 0..=max_depth.min((k.max(0) / 2) as usize) {
        let w = k - 2 * i as i64;
        coeffs.push(random_modular(rng, w).filter(|_| rng.gen_bool(0.8)).unwrap_or_else(|| FormExpr::zero(w)));
    }
    QuasiModularForm::new(1, k, coeffs).expect("weights are consistent")
}

/// Upper-triangular rational matrix with positive diagonal.
pub fn random_upper<R: Rng>(rng: &mut R) -> Mat2Q {
    let q = |n: i64, d: i64| BigRational::new(n.into(), d.into());
    Mat2Q::new(
        q(rng.gen_range(1..=4), rng.gen_range(1..=2)),
        q(rng.gen_range(-3..=3), rng.gen_range(1..=2)),
        q(0, 1),
        q(rng.gen_range(1..=4), rng.gen_range(1..=2)),
    )
}

pub fn random_sl2<R: Rng>(rng: &mut R) -> Mat2Z {
    let len = rng.gen_range(1..=4);
    CongruenceLevel::random_sl2(rng, len)
}

/// γ·T with γ ∈ SL₂(ℤ) and T upper triangular.
pub fn random_gl2<R: Rng>(rng: &mut R) -> Mat2Q {
    random_sl2(rng).to_q().mul(&random_upper(rng))
}

pub fn rational_constant(r: BigRational) -> QuasiModularForm {
    QuasiModularForm::constant(CycRational::from_rational(r))
}

/// A homogeneous operator of level N: random multiples of one value (1, G₂ or G₄)
/// on a random set of double cosets of integral matrices with determinant ≤ max_det.
pub fn random_op<R: Rng>(rng: &mut R, level: u64, max_det: u64) -> TwistedHeckeOp {
    let value = match rng.gen_range(0..3) {
        0 => QuasiModularForm::one(),
        1 => QuasiModularForm::g2(),
        _ => QuasiModularForm::modular(1, forms::g4()),
    };
    random_op_with(rng, level, max_det, &value)
}

/// Random nonzero multiples of `value` on a random set of double cosets.
/// One determinant-1 coset is always present: ∗ʳ, the pairing and the right
/// action only read the left factor there.
pub fn random_op_with<R: Rng>(rng: &mut R, level: u64, max_det: u64, value: &QuasiModularForm) -> TwistedHeckeOp {
    let cl = CongruenceLevel::new(level);
    let mut bases = Vec::new();
    for n in 1..=max_det {
        let t = tn_op(n, &cl).expect("small Hecke supports fit the guard");
        bases.extend(t.support().keys().cloned());
    }
    let unimodular = tn_op(1, &cl).expect("the identity coset fits the guard").support().len();
    let mut support = BTreeMap::new();
    let first = bases[rng.gen_range(0..unimodular)].clone();
    support.insert(first, value.scale_q(&nonzero_rational(rng)));
    for b in &bases {
        if rng.gen_bool(0.4) {
            support.insert(b.clone(), value.scale_q(&nonzero_rational(rng)));
        }
    }
    TwistedHeckeOp::from_bases(level, Mat2Z::identity(), value.weight(), support)
}

/// A random operator with values of positive depth and nonconstant modular parts.
/// The seed values are G₂ʲG₄ with j = 1, 2: X kills constants and G₂, and
/// D, T kill depth zero.
pub fn random_deep_op<R: Rng>(rng: &mut R, level: u64, max_det: u64) -> TwistedHeckeOp {
    let g4 = QuasiModularForm::modular(1, forms::g4());
    let value = QuasiModularForm::g2().pow(rng.gen_range(1..=2)).mul(&g4);
    let x = lift_x(&random_op_with(rng, level, max_det, &value));
    lift_d(&x).add(&lift_t(3, 0, &x))
}

/// A σ-twisted operator whose values are not all level one: a random twisted
/// operator acted on by a random untwisted one of positive weight.
pub fn random_rich_twisted_op<R: Rng>(rng: &mut R, level: u64, sigma: Mat2Z) -> TwistedHeckeOp {
    let a = random_twisted_op(rng, level, 2, sigma);
    let value = if rng.gen_bool(0.5) { QuasiModularForm::g2() } else { QuasiModularForm::modular(1, forms::g4()) };
    let b = random_op_with(rng, level, 2, &value);
    right_act(&a, &b).expect("operands share level and the second is untwisted")
}

/// A tower with components m ∈ {−1, 0, 1}, each X_{ρ_m} of a rich twisted operator.
pub fn random_tower<R: Rng>(rng: &mut R, level: u64, sigma: Mat2Z) -> GradedTower {
    let mut t = GradedTower::new(level, sigma).expect("σ is unimodular");
    for m in [-1i64, 0, 1] {
        let f = random_rich_twisted_op(rng, level, sigma);
        let f = if m == 0 { f } else { x_tau(&f, &rho(m)).expect("ρ_m is unimodular") };
        t.insert(m, f).expect("twists match by construction");
    }
    t
}

/// Like `random_op` but with twist σ; level-1 values make every twist admissible.
pub fn random_twisted_op<R: Rng>(rng: &mut R, level: u64, max_det: u64, sigma: Mat2Z) -> TwistedHeckeOp {
    let f = random_op(rng, level, max_det);
    TwistedHeckeOp::from_bases(level, sigma, f.weight(), f.support().clone())
}
