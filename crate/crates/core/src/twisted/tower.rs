use super::{graded_pair, x_tau};
use crate::exactq::Q;
use crate::heckealg::{lift_y, TwistedHeckeOp};
use crate::lattice::Mat2Z;
use crate::{Error, Result};
use num_rational::BigRational;
use serde_json::{json, Value};
use std::collections::BTreeMap;

/// ρ_m = (1 m; 0 1).
pub fn rho(m: i64) -> Mat2Z {
    Mat2Z::new(1, m, 0, 1)
}

/// ⊕_m 𝒬_{ρ_m·σ}(Γ), finitely many components, each split into homogeneous
/// pieces keyed by (m, weight).
#[derive(Clone, Debug, PartialEq)]
pub struct GradedTower {
    level: u64,
    sigma: Mat2Z,
    components: BTreeMap<(i64, i64), TwistedHeckeOp>,
}

impl GradedTower {
    pub fn new(level: u64, sigma: Mat2Z) -> Result<Self> {
        if sigma.det() != 1 {
            return Err(Error::NotUnimodular);
        }
        Ok(GradedTower { level, sigma, components: BTreeMap::new() })
    }

    pub fn sigma(&self) -> Mat2Z {
        self.sigma
    }

    pub fn level(&self) -> u64 {
        self.level
    }

    pub fn components(&self) -> &BTreeMap<(i64, i64), TwistedHeckeOp> {
        &self.components
    }

    pub fn component(&self, m: i64, weight: i64) -> Option<&TwistedHeckeOp> {
        self.components.get(&(m, weight))
    }

    pub fn twist_of(&self, m: i64) -> Mat2Z {
        rho(m).mul(&self.sigma)
    }

    /// Adds `f` into component m; its twist must be ρ_m·σ.
    pub fn insert(&mut self, m: i64, f: TwistedHeckeOp) -> Result<()> {
        if f.level() != self.level {
            return Err(Error::LevelMismatch(self.level, f.level()));
        }
        if f.twist() != self.twist_of(m) {
            return Err(Error::TwistMismatch);
        }
        if f.is_zero() {
            return Ok(());
        }
        let key = (m, f.weight());
        let v = match self.components.remove(&key) {
            Some(prev) => prev.try_add(&f)?,
            None => f,
        };
        if !v.is_zero() {
            self.components.insert(key, v);
        }
        Ok(())
    }

    pub fn is_zero(&self) -> bool {
        self.components.is_empty()
    }

    pub fn try_add(&self, o: &Self) -> Result<Self> {
        if o.sigma != self.sigma || o.level != self.level {
            return Err(Error::TwistMismatch);
        }
        let mut out = self.clone();
        for ((m, _), f) in &o.components {
            out.insert(*m, f.clone())?;
        }
        Ok(out)
    }

    pub fn add(&self, o: &Self) -> Self {
        self.try_add(o).expect("incompatible towers")
    }

    pub fn scale_q(&self, r: &BigRational) -> Self {
        let mut out = self.clone();
        for f in out.components.values_mut() {
            *f = f.scale_q(r);
        }
        out.components.retain(|_, f| !f.is_zero());
        out
    }

    pub fn sub(&self, o: &Self) -> Self {
        self.add(&o.scale_q(&BigRational::from_integer((-1).into())))
    }

    fn map(&self, shift: i64, f: impl Fn(i64, &TwistedHeckeOp) -> Result<TwistedHeckeOp>) -> Result<Self> {
        let mut out = GradedTower::new(self.level, self.sigma)?;
        for ((m, _), c) in &self.components {
            out.insert(m + shift, f(*m, c)?)?;
        }
        Ok(out)
    }

    /// First (m, weight) where two towers differ below `prec`.
    pub fn first_disagreement(&self, o: &Self, prec: Q) -> Result<Option<(i64, i64)>> {
        let mut ms: Vec<(i64, i64)> = self.components.keys().chain(o.components.keys()).copied().collect();
        ms.sort();
        ms.dedup();
        for m in ms {
            let z = TwistedHeckeOp::zero(self.level, self.twist_of(m.0), m.1);
            let a = self.components.get(&m).unwrap_or(&z);
            let b = o.components.get(&m).unwrap_or(&z);
            if !a.agrees(b, prec)? {
                return Ok(Some(m));
            }
        }
        Ok(None)
    }

    pub fn agrees(&self, o: &Self, prec: Q) -> Result<bool> {
        Ok(self.first_disagreement(o, prec)?.is_none())
    }

    pub fn to_json(&self) -> Value {
        let s = self.sigma;
        json!({
            "level": self.level,
            "sigma": [s.a, s.b, s.c, s.d],
            "components": self
                .components
                .iter()
                .map(|((m, _), f)| json!([m, f.to_json()]))
                .collect::<Vec<_>>(),
        })
    }

    pub fn from_json(v: &Value) -> Result<Self> {
        let bad = || Error::Parse("malformed tower".into());
        let level = v["level"].as_u64().ok_or_else(bad)?;
        let s: Vec<i64> = v["sigma"].as_array().ok_or_else(bad)?.iter().filter_map(|x| x.as_i64()).collect();
        if s.len() != 4 {
            return Err(bad());
        }
        let mut t = GradedTower::new(level, Mat2Z::new(s[0], s[1], s[2], s[3]))?;
        for e in v["components"].as_array().ok_or_else(bad)? {
            let m = e[0].as_i64().ok_or_else(bad)?;
            t.insert(m, TwistedHeckeOp::from_json(&e[1])?)?;
        }
        Ok(t)
    }
}

/// Z(F)_α = m·F_α + Y(F_α) on component m.
pub fn op_z(t: &GradedTower) -> Result<GradedTower> {
    t.map(0, |m, f| Ok(f.scale_q(&BigRational::from_integer(m.into())).add(&lift_y(f))))
}

/// X_n = X_{ρ_n}, moving component m to m + n.
pub fn op_xn(t: &GradedTower, n: i64) -> Result<GradedTower> {
    t.map(n, |_, f| x_tau(f, &rho(n)))
}

/// The pairing of towers: components m and m' pair into m + m'.
pub fn tower_pair(a: &GradedTower, b: &GradedTower) -> Result<GradedTower> {
    if a.sigma != b.sigma || a.level != b.level {
        return Err(Error::TwistMismatch);
    }
    let mut out = GradedTower::new(a.level, a.sigma)?;
    for ((m, _), f) in &a.components {
        for ((m2, _), g) in &b.components {
            out.insert(m + m2, graded_pair(f, g, &a.sigma)?)?;
        }
    }
    Ok(out)
}
