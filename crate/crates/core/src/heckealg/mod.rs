//! The quasimodular Hecke algebra: finite-support covariant functions on
//! Γ(N)\GL₂⁺(ℚ) with values in quasimodular forms, their products, the module
//! action on forms, the classical embedding and the lifted operators.

mod lifts;
mod product;

pub use lifts::{lift_d, lift_delta, lift_e, lift_phi, lift_qm, lift_t, lift_w, lift_x, lift_y};
pub use product::{act_on_form, assemble, star, star_r, star_r_value, star_value};

use crate::exactq::Q;
use crate::lattice::{coset_key, right_orbit, CongruenceLevel, CosetKey, Mat2Q, Mat2Z};
use crate::quasimod::QuasiModularForm;
use crate::{Error, Result};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde_json::{json, Value};
use std::collections::{BTreeMap, HashMap};
use std::sync::{Arc, Mutex, OnceLock};

/// Settings for sampled covariance checks.
#[derive(Clone, Debug)]
pub struct Validation {
    pub samples: usize,
    pub seed: u64,
    pub prec: Q,
    pub word_len: usize,
}

impl Default for Validation {
    fn default() -> Self {
        Validation { samples: 25, seed: 0, prec: Q::from_integer(8), word_len: 3 }
    }
}

type Table = HashMap<CosetKey, (Mat2Q, QuasiModularForm)>;

/// F with F_{αγ} = F_α‖σγσ⁻¹ for γ ∈ Γ(N); σ = 1 is the untwisted case.
#[derive(Clone, Debug)]
pub struct TwistedHeckeOp {
    level: u64,
    twist: Mat2Z,
    weight: i64,
    support: BTreeMap<CosetKey, QuasiModularForm>,
    table: Arc<OnceLock<Arc<Table>>>,
}

impl PartialEq for TwistedHeckeOp {
    fn eq(&self, o: &Self) -> bool {
        self.level == o.level && self.twist == o.twist && self.support == o.support
    }
}

type BaseIndex = Mutex<HashMap<CosetKey, (CosetKey, Mat2Z)>>;

/// The canonical base of the double coset Γ·S·Γ (its least left coset) and a
/// witness γ ∈ Γ(N) with Γ·base·γ = Γ·S.
pub fn double_coset_base(key: &CosetKey) -> Result<(CosetKey, Mat2Z)> {
    static INDEX: OnceLock<BaseIndex> = OnceLock::new();
    let index = INDEX.get_or_init(|| Mutex::new(HashMap::new()));
    if let Some(r) = index.lock().unwrap().get(key) {
        return Ok(r.clone());
    }
    let level = key.level();
    let orbit = right_orbit(key, &level)?;
    let base = orbit[0].0.clone();
    let from_base = right_orbit(&base, &level)?;
    let mut idx = index.lock().unwrap();
    for (k, w) in from_base.iter() {
        idx.insert(k.clone(), (base.clone(), *w));
    }
    idx.get(key).cloned().ok_or_else(|| Error::CovarianceViolation(format!("{} missing from its own orbit", key)))
}

pub(crate) fn conj(sigma: &Mat2Z, g: &Mat2Z) -> Mat2Q {
    sigma.mul(g).mul(&sigma.inv_sl2()).to_q()
}

impl TwistedHeckeOp {
    /// The zero operator of the given weight.
    pub fn zero(level: u64, twist: Mat2Z, weight: i64) -> Self {
        Self::from_bases(level, twist, weight, BTreeMap::new())
    }

    /// Builds from values at double-coset bases; structurally zero values are dropped.
    pub(crate) fn from_bases(
        level: u64,
        twist: Mat2Z,
        weight: i64,
        mut support: BTreeMap<CosetKey, QuasiModularForm>,
    ) -> Self {
        support.retain(|_, v| !v.is_zero());
        TwistedHeckeOp { level, twist, weight, support, table: Arc::new(OnceLock::new()) }
    }

    /// The unit e: value 1 on the trivial coset.
    pub fn unit(level: u64) -> Self {
        let key = CosetKey::identity(&CongruenceLevel::new(level));
        let mut s = BTreeMap::new();
        s.insert(key, QuasiModularForm::one());
        Self::from_bases(level, Mat2Z::identity(), 0, s)
    }

    pub fn level(&self) -> u64 {
        self.level
    }

    pub fn congruence(&self) -> CongruenceLevel {
        CongruenceLevel::new(self.level)
    }

    pub fn twist(&self) -> Mat2Z {
        self.twist
    }

    pub fn weight(&self) -> i64 {
        self.weight
    }

    /// Values at the double-coset bases.
    pub fn support(&self) -> &BTreeMap<CosetKey, QuasiModularForm> {
        &self.support
    }

    pub fn is_zero(&self) -> bool {
        self.support.is_empty()
    }

    pub fn max_depth(&self) -> usize {
        self.support.values().map(|v| v.depth()).max().unwrap_or(0)
    }

    /// Every left coset in the support with a representative and its value.
    pub fn table(&self) -> Result<Arc<Table>> {
        if let Some(t) = self.table.get() {
            return Ok(t.clone());
        }
        let level = self.congruence();
        let mut t = HashMap::new();
        for (base, v) in &self.support {
            for (k, g) in right_orbit(base, &level)?.iter() {
                let val = if *g == Mat2Z::identity() { v.clone() } else { v.dslash(&conj(&self.twist, g))? };
                t.insert(k.clone(), (k.reconstruct(), val));
            }
        }
        let t = Arc::new(t);
        let _ = self.table.set(t.clone());
        Ok(t)
    }

    /// Left cosets in the support, sorted, with representative and value.
    pub fn sorted_table(&self) -> Result<Vec<(CosetKey, Mat2Q, QuasiModularForm)>> {
        let t = self.table()?;
        let mut v: Vec<_> = t.iter().map(|(k, (m, f))| (k.clone(), m.clone(), f.clone())).collect();
        v.sort_by(|a, b| a.0.cmp(&b.0));
        Ok(v)
    }

    pub fn value_at(&self, key: &CosetKey) -> Result<QuasiModularForm> {
        Ok(match self.table()?.get(key) {
            Some((_, v)) => v.clone(),
            None => QuasiModularForm::zero(self.level, self.weight),
        })
    }

    /// F_α; zero off the support.
    pub fn evaluate(&self, alpha: &Mat2Q) -> Result<QuasiModularForm> {
        if self.is_zero() {
            return Ok(QuasiModularForm::zero(self.level, self.weight));
        }
        self.value_at(&coset_key(alpha, &self.congruence())?)
    }

    fn check_compatible(&self, o: &Self) -> Result<()> {
        if self.level != o.level {
            return Err(Error::LevelMismatch(self.level, o.level));
        }
        if self.twist != o.twist {
            return Err(Error::TwistMismatch);
        }
        Ok(())
    }

    fn combined_weight(&self, o: &Self) -> Result<i64> {
        if self.is_zero() {
            Ok(o.weight)
        } else if o.is_zero() || self.weight == o.weight {
            Ok(self.weight)
        } else {
            Err(Error::WeightMismatch(self.weight, o.weight))
        }
    }

    pub fn try_add(&self, o: &Self) -> Result<Self> {
        self.check_compatible(o)?;
        let w = self.combined_weight(o)?;
        let mut s = self.support.clone();
        for (k, v) in &o.support {
            let nv = match s.get(k) {
                Some(a) => a.try_add(v)?,
                None => v.clone(),
            };
            s.insert(k.clone(), nv);
        }
        Ok(Self::from_bases(self.level, self.twist, w, s))
    }

    pub fn add(&self, o: &Self) -> Self {
        self.try_add(o).expect("incompatible Hecke operators")
    }

    pub fn sub(&self, o: &Self) -> Self {
        self.add(&o.scale_q(&(-num_rational::BigRational::from_integer(1.into()))))
    }

    pub fn scale_q(&self, r: &num_rational::BigRational) -> Self {
        self.map_values(self.weight, |v| Ok(v.scale_q(r))).expect("scaling cannot fail")
    }

    /// Applies `f` to every stored base value.
    pub fn map_values(&self, weight: i64, f: impl Fn(&QuasiModularForm) -> Result<QuasiModularForm>) -> Result<Self> {
        let s = self.support.iter().map(|(k, v)| Ok((k.clone(), f(v)?))).collect::<Result<BTreeMap<_, _>>>()?;
        Ok(Self::from_bases(self.level, self.twist, weight, s))
    }

    pub(crate) fn map_keyed(
        &self,
        weight: i64,
        twist: Mat2Z,
        f: impl Fn(&CosetKey, &QuasiModularForm) -> Result<QuasiModularForm>,
    ) -> Result<Self> {
        let s = self.support.iter().map(|(k, v)| Ok((k.clone(), f(k, v)?))).collect::<Result<BTreeMap<_, _>>>()?;
        Ok(Self::from_bases(self.level, twist, weight, s))
    }

    /// First base key where the two operators differ below `prec`.
    pub fn first_disagreement(&self, o: &Self, prec: Q) -> Result<Option<CosetKey>> {
        if self.level != o.level || self.twist != o.twist {
            return Ok(Some(CosetKey::identity(&self.congruence())));
        }
        let mut keys: Vec<&CosetKey> = self.support.keys().chain(o.support.keys()).collect();
        keys.sort();
        keys.dedup();
        for k in keys {
            let z = QuasiModularForm::zero(self.level, self.weight);
            let a = self.support.get(k).unwrap_or(&z);
            let b = o.support.get(k).unwrap_or(&z);
            if !a.agrees(b, prec)? {
                return Ok(Some(k.clone()));
            }
        }
        Ok(None)
    }

    /// Equality of the support tables on expansions below `prec`.
    pub fn agrees(&self, o: &Self, prec: Q) -> Result<bool> {
        Ok(self.first_disagreement(o, prec)?.is_none())
    }

    /// Sampled stabilizer check: value(S)‖σsσ⁻¹ = value(S) for s ∈ Γ(N) fixing Γ·S.
    pub fn check_stabilizers(&self, v: &Validation) -> Result<()> {
        let level = self.congruence();
        let mut rng = ChaCha8Rng::seed_from_u64(v.seed);
        for (base, val) in &self.support {
            let rep = base.reconstruct();
            let orbit = right_orbit(base, &level)?;
            for _ in 0..v.samples {
                let g = level.random_element(&mut rng, v.word_len);
                let k = coset_key(&rep.mul(&g.to_q()), &level)?;
                let i = orbit
                    .binary_search_by(|(x, _)| x.cmp(&k))
                    .map_err(|_| Error::CovarianceViolation(format!("{} left the orbit of {}", k, base)))?;
                let s = g.mul(&orbit[i].1.inv_sl2());
                if !val.dslash(&conj(&self.twist, &s))?.agrees(val, v.prec)? {
                    return Err(Error::CovarianceViolation(format!("value at {} is not fixed by {}", base, s)));
                }
            }
        }
        Ok(())
    }

    pub fn to_json(&self) -> Value {
        let t = self.twist;
        json!({
            "level": self.level,
            "twist": [t.a, t.b, t.c, t.d],
            "weight": self.weight,
            "support": self
                .support
                .iter()
                .map(|(k, v)| json!([k.to_json(), v.to_json()]))
                .collect::<Vec<_>>(),
        })
    }

    pub fn from_json(v: &Value) -> Result<Self> {
        let bad = || Error::Parse("malformed Hecke operator".into());
        let level = v["level"].as_u64().ok_or_else(bad)?;
        let weight = v["weight"].as_i64().unwrap_or(0);
        let t: Vec<i64> = v["twist"].as_array().ok_or_else(bad)?.iter().filter_map(|x| x.as_i64()).collect();
        if t.len() != 4 {
            return Err(bad());
        }
        let twist = Mat2Z::new(t[0], t[1], t[2], t[3]);
        if twist.det() != 1 {
            return Err(Error::NotUnimodular);
        }
        let mut support = BTreeMap::new();
        for e in v["support"].as_array().ok_or_else(bad)? {
            let key = CosetKey::from_json(&e[0])?;
            let (base, _) = double_coset_base(&key)?;
            if base != key {
                return Err(Error::Parse(format!("{} is not a double-coset base", key)));
            }
            support.insert(key, QuasiModularForm::from_json(&e[1])?);
        }
        Ok(Self::from_bases(level, twist, weight, support))
    }
}

/// Builds an operator from values at arbitrary matrices, moving each to its
/// double-coset base and validating stabilizers by sampling.
pub fn make_op(
    level: u64,
    twist: Mat2Z,
    assignments: &[(Mat2Q, QuasiModularForm)],
    v: &Validation,
) -> Result<TwistedHeckeOp> {
    if twist.det() != 1 {
        return Err(Error::NotUnimodular);
    }
    let cl = CongruenceLevel::new(level);
    let mut weight = None;
    let mut support: BTreeMap<CosetKey, QuasiModularForm> = BTreeMap::new();
    for (alpha, val) in assignments {
        if val.is_zero() {
            continue;
        }
        match weight {
            None => weight = Some(val.weight()),
            Some(w) if w != val.weight() => return Err(Error::WeightMismatch(w, val.weight())),
            _ => {}
        }
        let key = coset_key(alpha, &cl)?;
        let (base, g) = double_coset_base(&key)?;
        let bv = if g == Mat2Z::identity() { val.clone() } else { val.dslash(&conj(&twist, &g.inv_sl2()))? };
        if let Some(prev) = support.get(&base) {
            if !prev.agrees(&bv, v.prec)? {
                return Err(Error::CovarianceViolation(format!(
                    "two assignments in the double coset of {} disagree",
                    base
                )));
            }
            continue;
        }
        support.insert(base, bv);
    }
    let op = TwistedHeckeOp::from_bases(level, twist, weight.unwrap_or(0), support);
    op.check_stabilizers(v)?;
    Ok(op)
}

/// Embeds operators with modular (depth-0) values.
pub fn embed_modular(level: u64, assignments: &[(Mat2Q, QuasiModularForm)], v: &Validation) -> Result<TwistedHeckeOp> {
    if assignments.iter().any(|(_, f)| f.depth() > 0) {
        return Err(Error::DepthNotZero);
    }
    make_op(level, Mat2Z::identity(), assignments, v)
}

/// The classical T_n: value 1 on every left coset of integral determinant-n matrices.
pub fn tn_op(n: u64, level: &CongruenceLevel) -> Result<TwistedHeckeOp> {
    let reps = crate::lattice::hecke_coset_reps(n, level)?;
    let mut support = BTreeMap::new();
    for k in reps {
        let (base, _) = double_coset_base(&k)?;
        support.insert(base, QuasiModularForm::one());
    }
    Ok(TwistedHeckeOp::from_bases(level.n, Mat2Z::identity(), 0, support))
}
