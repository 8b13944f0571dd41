//! Quasimodular forms as polynomials in a formal G₂ with modular coefficients,
//! the ‖ operation, and the operators D, W_k, E, T_k^l, X, Y.

mod decompose;

pub use decompose::decompose;

use crate::exactq::arith::lcm_u64;
use crate::exactq::{CycRational, PuiseuxSeries, Q};
use crate::forms::{self, FormExpr};
use crate::lattice::Mat2Q;
use crate::{Error, Result};
use num_rational::BigRational;
use serde_json::{json, Value};
use std::fmt;

/// f = Σ aᵢ·G₂ⁱ with aᵢ of weight k − 2i.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct QuasiModularForm {
    level: u64,
    weight: i64,
    coeffs: Vec<FormExpr>,
}

fn qr(n: i64, d: i64) -> BigRational {
    BigRational::new(n.into(), d.into())
}

impl QuasiModularForm {
    pub fn new(level: u64, weight: i64, coeffs: Vec<FormExpr>) -> Result<Self> {
        for (i, a) in coeffs.iter().enumerate() {
            let w = weight - 2 * i as i64;
            if !a.is_zero() && a.weight() != w {
                return Err(Error::WeightMismatch(w, a.weight()));
            }
        }
        Ok(Self::raw(level, weight, coeffs))
    }

    fn raw(level: u64, weight: i64, mut coeffs: Vec<FormExpr>) -> Self {
        while coeffs.last().is_some_and(|c| c.is_zero()) {
            coeffs.pop();
        }
        let coeffs = coeffs
            .into_iter()
            .enumerate()
            .map(|(i, c)| if c.is_zero() { FormExpr::zero(weight - 2 * i as i64) } else { c })
            .collect();
        QuasiModularForm { level, weight, coeffs }
    }

    pub fn zero(level: u64, weight: i64) -> Self {
        Self::raw(level, weight, vec![])
    }

    /// Depth-0 form.
    pub fn modular(level: u64, f: FormExpr) -> Self {
        Self::raw(level, f.weight(), vec![f])
    }

    pub fn constant(c: CycRational) -> Self {
        Self::modular(1, FormExpr::constant(c))
    }

    pub fn one() -> Self {
        Self::modular(1, FormExpr::one())
    }

    /// The formal variable G₂.
    pub fn g2() -> Self {
        Self::raw(1, 2, vec![FormExpr::zero(2), FormExpr::one()])
    }

    pub fn level(&self) -> u64 {
        self.level
    }

    pub fn weight(&self) -> i64 {
        self.weight
    }

    pub fn depth(&self) -> usize {
        self.coeffs.len().saturating_sub(1)
    }

    pub fn coeffs(&self) -> &[FormExpr] {
        &self.coeffs
    }

    /// aᵢ(f), zero beyond the depth.
    pub fn coeff(&self, i: usize) -> FormExpr {
        self.coeffs.get(i).cloned().unwrap_or_else(|| FormExpr::zero(self.weight - 2 * i as i64))
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn with_level(&self, level: u64) -> Self {
        QuasiModularForm { level, ..self.clone() }
    }

    fn check_weight(&self, other: &Self) -> Result<i64> {
        if self.is_zero() {
            return Ok(other.weight);
        }
        if other.is_zero() || self.weight == other.weight {
            return Ok(self.weight);
        }
        Err(Error::WeightMismatch(self.weight, other.weight))
    }

    pub fn try_add(&self, other: &Self) -> Result<Self> {
        let w = self.check_weight(other)?;
        let n = self.coeffs.len().max(other.coeffs.len());
        let coeffs = (0..n)
            .map(|i| {
                let z = FormExpr::zero(w - 2 * i as i64);
                let a = self.coeffs.get(i).unwrap_or(&z);
                let b = other.coeffs.get(i).unwrap_or(&z);
                a.add(b)
            })
            .collect();
        Ok(Self::raw(lcm_u64(self.level, other.level), w, coeffs))
    }

    pub fn add(&self, other: &Self) -> Self {
        self.try_add(other).expect("sum of quasimodular forms with different weights")
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> Self {
        self.scale(&CycRational::from_int(-1))
    }

    pub fn scale(&self, c: &CycRational) -> Self {
        Self::raw(self.level, self.weight, self.coeffs.iter().map(|a| a.scale(c)).collect())
    }

    pub fn scale_q(&self, r: &BigRational) -> Self {
        self.scale(&CycRational::from_rational(r.clone()))
    }

    /// Multiplies every coefficient by a modular form g.
    pub fn mul_form(&self, g: &FormExpr) -> Self {
        let w = self.weight + g.weight();
        Self::raw(self.level, w, self.coeffs.iter().map(|a| a.mul(g)).collect())
    }

    pub fn mul(&self, other: &Self) -> Self {
        let w = self.weight + other.weight;
        let level = lcm_u64(self.level, other.level);
        if self.is_zero() || other.is_zero() {
            return Self::zero(level, w);
        }
        let n = self.coeffs.len() + other.coeffs.len() - 1;
        let mut buckets: Vec<Vec<FormExpr>> = vec![Vec::new(); n];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in other.coeffs.iter().enumerate() {
                if !b.is_zero() {
                    buckets[i + j].push(a.mul(b));
                }
            }
        }
        let coeffs = buckets.into_iter().enumerate().map(|(i, t)| FormExpr::sum(w - 2 * i as i64, t)).collect();
        Self::raw(level, w, coeffs)
    }

    pub fn pow(&self, e: u32) -> Self {
        let mut r = Self::one().with_level(self.level);
        for _ in 0..e {
            r = r.mul(self);
        }
        r
    }

    /// f‖α = Σ (aᵢ|_{k−2i}α)·G₂ⁱ.
    pub fn dslash(&self, alpha: &Mat2Q) -> Result<Self> {
        let coeffs = self.coeffs.iter().map(|a| a.slash(alpha)).collect::<Result<Vec<_>>>()?;
        Ok(Self::raw(self.level, self.weight, coeffs))
    }

    /// Σ aᵢ·G₂ⁱ as a single expression.
    pub fn to_expr(&self) -> FormExpr {
        let g2 = forms::g2();
        let terms = self.coeffs.iter().enumerate().map(|(i, a)| a.mul(&g2.pow(i as u32))).collect();
        FormExpr::sum(self.weight, terms)
    }

    pub fn expand(&self, p: Q) -> Result<PuiseuxSeries> {
        self.to_expr().expand(p)
    }

    /// Coefficient-wise agreement of expansions below `p`.
    pub fn agrees(&self, other: &Self, p: Q) -> Result<bool> {
        if self == other {
            return Ok(true);
        }
        let n = self.coeffs.len().max(other.coeffs.len());
        for i in 0..n {
            let d = self.coeff(i).sub(&other.coeff(i));
            if !d.is_zero() && !d.expand(p)?.is_zero() {
                return Ok(false);
            }
        }
        Ok(true)
    }

    /// First index i whose coefficient differs below `p`, if any.
    pub fn first_disagreement(&self, other: &Self, p: Q) -> Result<Option<usize>> {
        let n = self.coeffs.len().max(other.coeffs.len());
        for i in 0..n {
            let d = self.coeff(i).sub(&other.coeff(i));
            if !d.is_zero() && !d.expand(p)?.is_zero() {
                return Ok(Some(i));
            }
        }
        Ok(None)
    }

    pub fn to_json(&self) -> Value {
        json!({
            "level": self.level,
            "weight": self.weight,
            "depth": self.depth(),
            "coeffs": self.coeffs.iter().map(|c| c.to_json()).collect::<Vec<_>>(),
        })
    }

    pub fn from_json(v: &Value) -> Result<Self> {
        let bad = || Error::Parse("malformed quasimodular form".into());
        let level = v["level"].as_u64().ok_or_else(bad)?;
        let weight = v["weight"].as_i64().ok_or_else(bad)?;
        let coeffs =
            v["coeffs"].as_array().ok_or_else(bad)?.iter().map(FormExpr::from_json).collect::<Result<Vec<_>>>()?;
        Self::new(level, weight, coeffs)
    }
}

impl fmt::Display for QuasiModularForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            match i {
                0 => write!(f, "{}", a)?,
                1 => write!(f, "{}*G2", a)?,
                _ => write!(f, "{}*G2^{}", a, i)?,
            }
        }
        Ok(())
    }
}

/// D(f) = Σ i·aᵢ·G₂^(i−1)·(−(5/24)G₄ + (1/2)G₂²).
pub fn op_d(f: &QuasiModularForm) -> QuasiModularForm {
    let w = f.weight + 2;
    let n = f.coeffs.len() + 1;
    let mut buckets: Vec<Vec<FormExpr>> = vec![Vec::new(); n];
    let g4 = forms::g4();
    for (i, a) in f.coeffs.iter().enumerate().skip(1) {
        let ia = a.scale_q(&qr(i as i64, 1));
        buckets[i - 1].push(ia.mul(&g4).scale_q(&qr(-5, 24)));
        buckets[i + 1].push(ia.scale_q(&qr(1, 2)));
    }
    let coeffs = buckets.into_iter().enumerate().map(|(i, t)| FormExpr::sum(w - 2 * i as i64, t)).collect();
    QuasiModularForm::raw(f.level, w, coeffs)
}

/// W_k(f) = Σ i·aᵢ·G₂^(i+k−2), k ≥ 1.
pub fn op_w(k: u32, f: &QuasiModularForm) -> QuasiModularForm {
    let k = k as i64;
    let w = f.weight + 2 * k - 4;
    let n = (f.coeffs.len() as i64 + k - 2).max(0) as usize;
    let mut coeffs: Vec<FormExpr> = (0..n).map(|i| FormExpr::zero(w - 2 * i as i64)).collect();
    for (i, a) in f.coeffs.iter().enumerate().skip(1) {
        let j = (i as i64 + k - 2) as usize;
        coeffs[j] = a.scale_q(&qr(i as i64, 1));
    }
    QuasiModularForm::raw(f.level, w, coeffs)
}

/// E(f) = G₄·f.
pub fn op_e(f: &QuasiModularForm) -> QuasiModularForm {
    f.mul_form(&forms::g4())
}

/// T_k^l = E^l·W_k.
pub fn op_t(k: u32, l: u32, f: &QuasiModularForm) -> QuasiModularForm {
    let w = op_w(k, f);
    if l == 0 {
        w
    } else {
        w.mul_form(&forms::g4().pow(l))
    }
}

/// X acts on each coefficient by the Serre-type derivative, G₂ held formal.
pub fn op_x(f: &QuasiModularForm) -> QuasiModularForm {
    QuasiModularForm::raw(f.level, f.weight + 2, f.coeffs.iter().map(|a| a.serre()).collect())
}

/// Y(f) = Σ ((k − 2i)/2)·aᵢ·G₂ⁱ.
pub fn op_y(f: &QuasiModularForm) -> QuasiModularForm {
    let coeffs = f.coeffs.iter().enumerate().map(|(i, a)| a.scale_q(&qr(f.weight - 2 * i as i64, 2))).collect();
    QuasiModularForm::raw(f.level, f.weight, coeffs)
}

pub fn qm_dslash(f: &QuasiModularForm, alpha: &Mat2Q) -> Result<QuasiModularForm> {
    f.dslash(alpha)
}

pub fn qm_mul(f: &QuasiModularForm, g: &QuasiModularForm) -> QuasiModularForm {
    f.mul(g)
}
