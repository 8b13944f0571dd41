//! Interpreting enveloping-algebra elements as operators and checking Hopf actions.

use super::{word_to_string, Coeff, Gen, HopfAlgebra, UEAElement, Word};
use crate::exactq::Q;
use crate::heckealg::{lift_d, lift_delta, lift_phi, lift_t, lift_x, lift_y, TwistedHeckeOp};
use crate::twisted::{op_xn, op_z, GradedTower};
use crate::{Error, Result};
use num_traits::Zero;
use rayon::prelude::*;
use serde::Serialize;

/// Things the generators act on.
pub trait ActionTarget: Clone + Send + Sync {
    fn plus(&self, o: &Self) -> Result<Self>;
    fn times(&self, c: &Coeff) -> Self;
    /// Where `self` and `o` first differ to precision `prec`, if anywhere.
    fn disagreement(&self, o: &Self, prec: Q) -> Result<Option<String>>;
}

impl ActionTarget for TwistedHeckeOp {
    fn plus(&self, o: &Self) -> Result<Self> {
        self.try_add(o)
    }

    fn times(&self, c: &Coeff) -> Self {
        self.scale_q(c)
    }

    fn disagreement(&self, o: &Self, prec: Q) -> Result<Option<String>> {
        Ok(self.first_disagreement(o, prec)?.map(|k| format!("coset {}", k.to_json())))
    }
}

impl ActionTarget for GradedTower {
    fn plus(&self, o: &Self) -> Result<Self> {
        self.try_add(o)
    }

    fn times(&self, c: &Coeff) -> Self {
        self.scale_q(c)
    }

    fn disagreement(&self, o: &Self, prec: Q) -> Result<Option<String>> {
        Ok(self.first_disagreement(o, prec)?.map(|(m, w)| format!("component {} weight {}", m, w)))
    }
}

pub trait Interpretation<T>: Sync {
    fn apply(&self, g: &Gen, x: &T) -> Result<T>;
}

/// D, T, φ, X, Y, δ as the lifted operators on 𝒬(Γ) and its twisted variants.
pub struct OperatorAction;

impl Interpretation<TwistedHeckeOp> for OperatorAction {
    fn apply(&self, g: &Gen, f: &TwistedHeckeOp) -> Result<TwistedHeckeOp> {
        match g {
            Gen::D => Ok(lift_d(f)),
            Gen::T(k, l) => Ok(lift_t(*k, *l, f)),
            Gen::Phi(m) => lift_phi(*m, f),
            Gen::X => Ok(lift_x(f)),
            Gen::Y => Ok(lift_y(f)),
            Gen::Delta(n) => lift_delta(*n, f),
            _ => Err(Error::MissingInterpretation(g.to_string())),
        }
    }
}

/// Z and X_n on the graded tower.
pub struct TowerAction;

impl Interpretation<GradedTower> for TowerAction {
    fn apply(&self, g: &Gen, t: &GradedTower) -> Result<GradedTower> {
        match g {
            Gen::Z => op_z(t),
            Gen::Xn(n) => op_xn(t, *n),
            _ => Err(Error::MissingInterpretation(g.to_string())),
        }
    }
}

fn apply_word<T: Clone, I: Interpretation<T>>(w: &[Gen], interp: &I, f: &T) -> Result<T> {
    let mut x = f.clone();
    for g in w.iter().rev() {
        x = interp.apply(g, &x)?;
    }
    Ok(x)
}

/// Linear extension of the word action g₁⋯g_k(F) = g₁(⋯g_k(F)).
pub fn interpret<T: ActionTarget, I: Interpretation<T>>(e: &UEAElement, interp: &I, f: &T) -> Result<T> {
    let mut acc: Option<T> = None;
    for (w, c) in e.terms() {
        let t = apply_word(w, interp, f)?.times(c);
        acc = Some(match acc {
            None => t,
            Some(a) => a.plus(&t)?,
        });
    }
    Ok(acc.unwrap_or_else(|| f.times(&Coeff::zero())))
}

/// Normal-ordered words of length 1..=degree in the given generators.
pub fn pbw_words(gens: &[Gen], degree: usize) -> Vec<Word> {
    let mut gens = gens.to_vec();
    gens.sort();
    gens.dedup();
    let mut out = Vec::new();
    let mut layer: Vec<Word> = vec![Vec::new()];
    for _ in 0..degree {
        let mut next = Vec::new();
        for w in &layer {
            for g in &gens {
                if w.last().is_none_or(|l| l <= g) {
                    let mut nw = w.clone();
                    nw.push(g.clone());
                    next.push(nw);
                }
            }
        }
        out.extend(next.iter().cloned());
        layer = next;
    }
    out
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CheckResult {
    pub identity: String,
    pub word: String,
    pub sample: usize,
    pub passed: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness: Option<String>,
}

fn check_one<T, I, P>(
    alg: &HopfAlgebra,
    product: &P,
    interp: &I,
    a: &T,
    b: &T,
    w: &[Gen],
    prec: Q,
) -> Result<Option<String>>
where
    T: ActionTarget,
    I: Interpretation<T>,
    P: Fn(&T, &T) -> Result<T>,
{
    let h = alg.normalize(w)?;
    let lhs = interpret(&h, interp, &product(a, b)?)?;
    let mut rhs: Option<T> = None;
    for ((l, r), c) in alg.coproduct(&h)?.terms() {
        let t = product(&apply_word(l, interp, a)?, &apply_word(r, interp, b)?)?.times(c);
        rhs = Some(match rhs {
            None => t,
            Some(x) => x.plus(&t)?,
        });
    }
    let rhs = rhs.unwrap_or_else(|| lhs.times(&Coeff::zero()));
    lhs.disagreement(&rhs, prec)
}

/// Checks h(a·b) = Σ h₍₁₎(a)·h₍₂₎(b) for every word and sample pair.
/// Failures, including evaluation errors, are recorded rather than raised.
pub fn verify_hopf_action<T, I, P>(
    alg: &HopfAlgebra,
    product_name: &str,
    product: P,
    interp: &I,
    samples: &[(T, T)],
    words: &[Word],
    prec: Q,
) -> Vec<CheckResult>
where
    T: ActionTarget,
    I: Interpretation<T>,
    P: Fn(&T, &T) -> Result<T> + Sync,
{
    let jobs: Vec<(usize, usize)> = (0..words.len()).flat_map(|i| (0..samples.len()).map(move |j| (i, j))).collect();
    jobs.par_iter()
        .map(|&(i, j)| {
            let (a, b) = &samples[j];
            let outcome = check_one(alg, &product, interp, a, b, &words[i], prec);
            let (passed, witness) = match outcome {
                Ok(None) => (true, None),
                Ok(Some(w)) => (false, Some(w)),
                Err(e) => (false, Some(format!("error: {}", e))),
            };
            CheckResult {
                identity: format!("{} acts on {}", alg.name, product_name),
                word: word_to_string(&words[i]),
                sample: j,
                passed,
                witness,
            }
        })
        .collect()
}
