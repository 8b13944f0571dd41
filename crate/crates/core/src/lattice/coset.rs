use super::mat::{content_split, Mat2Q, Mat2Z};
use crate::exactq::arith::{divisors, ext_gcd, gcd_u64, sigma, sl2_order};
use crate::{Error, Result};
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use rand::Rng;
use serde_json::{json, Value};
use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::sync::atomic::{AtomicU64, Ordering as AtomicOrdering};
use std::sync::{Arc, Mutex, OnceLock};

pub const DEFAULT_ORBIT_GUARD: u64 = 20_000;

static ORBIT_GUARD: AtomicU64 = AtomicU64::new(DEFAULT_ORBIT_GUARD);

/// Guard used by `CongruenceLevel::new`; process-wide so that levels rebuilt
/// from operators pick it up too.
pub fn set_orbit_guard(guard: u64) {
    ORBIT_GUARD.store(guard, AtomicOrdering::Relaxed);
}

pub fn orbit_guard() -> u64 {
    ORBIT_GUARD.load(AtomicOrdering::Relaxed)
}

/// Primitive upper-triangular integer matrix (a b; 0 d), a, d > 0, 0 ≤ b < d.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Upper {
    pub a: i64,
    pub b: i64,
    pub d: i64,
}

impl Upper {
    pub fn identity() -> Self {
        Upper { a: 1, b: 0, d: 1 }
    }

    pub fn det(&self) -> i64 {
        self.a * self.d
    }

    pub fn to_z(&self) -> Mat2Z {
        Mat2Z::new(self.a, self.b, 0, self.d)
    }
}

/// r·(a b; 0 d) with r > 0.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Triangular {
    pub scale: BigRational,
    pub hnf: Upper,
}

impl Triangular {
    pub fn to_q(&self) -> Mat2Q {
        let r = &self.scale;
        let q = |x: i64| r * BigRational::from_integer(BigInt::from(x));
        Mat2Q::new(q(self.hnf.a), q(self.hnf.b), BigRational::zero(), q(self.hnf.d))
    }
}

/// Row reduction of a primitive integer matrix of positive determinant:
/// returns (U, H) with P = U·H, U ∈ SL₂(ℤ), H canonical.
pub(crate) fn hnf_int(p: [i128; 4]) -> Result<(Mat2Z, Upper)> {
    let [p11, p12, p21, p22] = p;
    let det = p11 * p22 - p12 * p21;
    if det <= 0 {
        return Err(Error::NotPositiveDet);
    }
    let (g, x, y) = ext_gcd(p11, p21);
    // V = (x y; −p21/g p11/g), V·P = (g h; 0 e)
    let (v11, v12, v21, v22) = (x, y, -p21 / g, p11 / g);
    let mut h12 = v11 * p12 + v12 * p22;
    let e = v21 * p12 + v22 * p22;
    debug_assert!(e > 0);
    let k = h12.div_euclid(e);
    h12 -= k * e;
    let (w11, w12) = (v11 - k * v21, v12 - k * v22);
    // U = V⁻¹ with V = (w11 w12; v21 v22), det V = 1
    let conv = |z: i128| i64::try_from(z).map_err(|_| Error::Overflow("hnf"));
    let u = Mat2Z::new(conv(v22)?, conv(-w12)?, conv(-v21)?, conv(w11)?);
    let h = Upper { a: conv(g)?, b: conv(h12)?, d: conv(e)? };
    Ok((u, h))
}

/// m = U·T with U ∈ SL₂(ℤ) and T = r·(a b; 0 d) canonical.
pub fn hnf_decompose(m: &Mat2Q) -> Result<(Mat2Z, Triangular)> {
    if !m.det().is_positive() {
        return Err(Error::NotPositiveDet);
    }
    let (scale, p) = content_split(m)?;
    let (u, hnf) = hnf_int(p)?;
    Ok((u, Triangular { scale, hnf }))
}

/// Γ(N) for a fixed N, with the quotient SL₂(ℤ/N) and an enumeration guard.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CongruenceLevel {
    pub n: u64,
    pub guard: u64,
}

struct Sl2Table {
    elems: Vec<Mat2Z>,
    lifts: Vec<Mat2Z>,
}

fn sl2_table(n: u64) -> Arc<Sl2Table> {
    static CACHE: OnceLock<Mutex<HashMap<u64, Arc<Sl2Table>>>> = OnceLock::new();
    let cache = CACHE.get_or_init(|| Mutex::new(HashMap::new()));
    if let Some(t) = cache.lock().unwrap().get(&n) {
        return t.clone();
    }
    let ni = n as i64;
    let mut elems = Vec::new();
    for a in 0..ni {
        for b in 0..ni {
            for c in 0..ni {
                for d in 0..ni {
                    if (a * d - b * c - 1).rem_euclid(ni) == 0 {
                        elems.push(Mat2Z::new(a, b, c, d));
                    }
                }
            }
        }
    }
    if n == 1 {
        elems = vec![Mat2Z::new(0, 0, 0, 0)];
    }
    let lifts = elems.iter().map(|e| lift_sl2(e, n)).collect();
    let t = Arc::new(Sl2Table { elems, lifts });
    cache.lock().unwrap().insert(n, t.clone());
    t
}

/// A matrix in SL₂(ℤ) congruent to `x` modulo m (x must have determinant 1 mod m).
pub fn lift_sl2(x: &Mat2Z, m: u64) -> Mat2Z {
    if m == 1 {
        return Mat2Z::identity();
    }
    let mi = m as i64;
    let x = x.reduce_mod(mi);
    let (c2, d2) = if x.c == 0 {
        (mi, x.d)
    } else {
        let mut d = x.d;
        while gcd_u64(x.c as u64, d.unsigned_abs()) != 1 {
            d += mi;
        }
        (x.c, d)
    };
    let (g, s, t0) = ext_gcd(d2 as i128, c2 as i128);
    debug_assert_eq!(g, 1);
    let (a0, b0) = (s, -t0);
    let xx = (x.a as i128 - a0).rem_euclid(m as i128);
    let yy = (x.b as i128 - b0).rem_euclid(m as i128);
    let t = (yy * s + xx * t0).rem_euclid(m as i128);
    let a = a0 + t * c2 as i128;
    let b = b0 + t * d2 as i128;
    let out = Mat2Z::new(a as i64, b as i64, c2, d2);
    debug_assert_eq!(out.det(), 1);
    debug_assert_eq!(out.reduce_mod(mi), x);
    out
}

impl CongruenceLevel {
    pub fn new(n: u64) -> Self {
        assert!(n >= 1, "level must be positive");
        CongruenceLevel { n, guard: orbit_guard() }
    }

    pub fn with_guard(n: u64, guard: u64) -> Self {
        CongruenceLevel { n, guard }
    }

    pub fn sl2_order(&self) -> u64 {
        sl2_order(self.n)
    }

    /// Elements of SL₂(ℤ/N), entries in [0, N), sorted.
    pub fn sl2_elements(&self) -> Vec<Mat2Z> {
        sl2_table(self.n).elems.clone()
    }

    /// Representatives of Γ(N)\SL₂(ℤ), in the order of `sl2_elements`.
    pub fn sl2_coset_lifts(&self) -> Vec<Mat2Z> {
        sl2_table(self.n).lifts.clone()
    }

    pub fn uclass_of(&self, u: &Mat2Z) -> Mat2Z {
        if self.n == 1 {
            Mat2Z::new(0, 0, 0, 0)
        } else {
            u.reduce_mod(self.n as i64)
        }
    }

    pub fn uclass_index(&self, u: &Mat2Z) -> usize {
        let t = sl2_table(self.n);
        t.elems.binary_search(&self.uclass_of(u)).expect("not an element of SL2(Z/N)")
    }

    pub fn lift_uclass(&self, u: &Mat2Z) -> Mat2Z {
        let t = sl2_table(self.n);
        t.lifts[self.uclass_index(u)]
    }

    /// True iff m is integral, det 1, and m ≡ I mod N.
    pub fn contains(&self, m: &Mat2Q) -> bool {
        match m.to_int() {
            Some(z) => z.det() == 1 && self.contains_z(&z),
            None => false,
        }
    }

    pub fn contains_z(&self, z: &Mat2Z) -> bool {
        let n = self.n as i64;
        z.det() == 1 && z.reduce_mod(n) == Mat2Z::identity().reduce_mod(n)
    }

    /// A random element of Γ(N): a word in (1 N·t; 0 1), (1 0; N·t 1), times −I when N ≤ 2.
    pub fn random_element<R: Rng>(&self, rng: &mut R, len: usize) -> Mat2Z {
        let n = self.n as i64;
        let mut g = Mat2Z::identity();
        for i in 0..len {
            let mut t = rng.gen_range(-2i64..=2);
            if t == 0 {
                t = 1;
            }
            let f = if i % 2 == rng.gen_range(0..2) { Mat2Z::new(1, n * t, 0, 1) } else { Mat2Z::new(1, 0, n * t, 1) };
            g = g.mul(&f);
        }
        if self.n <= 2 && rng.gen_bool(0.5) {
            g = g.neg();
        }
        g
    }

    /// A random element of SL₂(ℤ).
    pub fn random_sl2<R: Rng>(rng: &mut R, len: usize) -> Mat2Z {
        CongruenceLevel::new(1).random_element(rng, len)
    }
}

/// Canonical name of a left coset Γ(N)·m.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct CosetKey {
    pub scale: BigRational,
    pub hnf: Upper,
    pub uclass: Mat2Z,
    pub level: u64,
}

impl fmt::Display for CosetKey {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "[{}·({} {}; 0 {}) | {} mod {}]",
            self.scale, self.hnf.a, self.hnf.b, self.hnf.d, self.uclass, self.level
        )
    }
}

pub fn coset_key(m: &Mat2Q, level: &CongruenceLevel) -> Result<CosetKey> {
    let (u, t) = hnf_decompose(m)?;
    Ok(CosetKey { scale: t.scale, hnf: t.hnf, uclass: level.uclass_of(&u), level: level.n })
}

impl CosetKey {
    pub fn identity(level: &CongruenceLevel) -> Self {
        CosetKey {
            scale: BigRational::one(),
            hnf: Upper::identity(),
            uclass: level.uclass_of(&Mat2Z::identity()),
            level: level.n,
        }
    }

    pub fn level(&self) -> CongruenceLevel {
        CongruenceLevel::new(self.level)
    }

    /// The unimodular factor used by `reconstruct`.
    pub fn unimodular(&self) -> Mat2Z {
        self.level().lift_uclass(&self.uclass)
    }

    pub fn triangular(&self) -> Triangular {
        Triangular { scale: self.scale.clone(), hnf: self.hnf }
    }

    /// A representative matrix U·r·H of the coset.
    pub fn reconstruct(&self) -> Mat2Q {
        self.unimodular().to_q().mul(&self.triangular().to_q())
    }

    /// True when the coset lies in SL₂(ℤ).
    pub fn is_unimodular(&self) -> bool {
        self.scale.is_one() && self.hnf == Upper::identity()
    }

    pub fn to_json(&self) -> Value {
        json!({
            "scale": self.scale.to_string(),
            "hnf": [self.hnf.a, self.hnf.b, self.hnf.d],
            "uclass_index": self.level().uclass_index(&self.uclass),
            "N": self.level,
        })
    }

    pub fn from_json(v: &Value) -> Result<CosetKey> {
        let bad = || Error::Parse("malformed coset key".into());
        let scale: BigRational = v["scale"].as_str().ok_or_else(bad)?.parse().map_err(|_| bad())?;
        let h = v["hnf"].as_array().filter(|h| h.len() == 3).ok_or_else(bad)?;
        let hv: Vec<i64> = h.iter().filter_map(|x| x.as_i64()).collect();
        if hv.len() != 3 {
            return Err(bad());
        }
        let n = v["N"].as_u64().ok_or_else(bad)?;
        let idx = v["uclass_index"].as_u64().ok_or_else(bad)? as usize;
        let t = sl2_table(n);
        let uclass = *t.elems.get(idx).ok_or_else(bad)?;
        let m = Mat2Q::new(scale.clone(), BigRational::zero(), BigRational::zero(), scale)
            .mul(&Mat2Z::new(hv[0], hv[1], 0, hv[2]).to_q());
        let level = CongruenceLevel::new(n);
        let key = coset_key(&t.lifts[idx].to_q().mul(&m), &level)?;
        if key.uclass != uclass {
            return Err(bad());
        }
        Ok(key)
    }
}

/// Left cosets Γ(N)\{integral matrices of determinant n}.
pub fn hecke_coset_reps(n: u64, level: &CongruenceLevel) -> Result<Vec<CosetKey>> {
    let count = sigma(1, n).to_u64().unwrap_or(u64::MAX) * level.sl2_order();
    if count > level.guard {
        return Err(Error::GuardExceeded { size: count, guard: level.guard });
    }
    let t = sl2_table(level.n);
    let mut out = Vec::new();
    for a in divisors(n) {
        let d = n / a;
        for b in 0..d {
            let g = gcd_u64(gcd_u64(a, b), d) as i64;
            let hnf = Upper { a: a as i64 / g, b: b as i64 / g, d: d as i64 / g };
            for u in &t.elems {
                out.push(CosetKey {
                    scale: BigRational::from_integer(BigInt::from(g)),
                    hnf,
                    uclass: *u,
                    level: level.n,
                });
            }
        }
    }
    out.sort();
    Ok(out)
}

/// Elements of ker(SL₂(ℤ/M) → SL₂(ℤ/N)), lifted to Γ(N).
fn congruence_kernel_lifts(n: u64, m: u64) -> Vec<Mat2Z> {
    let (ni, mi) = (n as i64, m as i64);
    let steps = mi / ni;
    let mut out = Vec::new();
    for i in 0..steps {
        let a = 1 + ni * i;
        let a_inv = modinv(a, mi);
        for j in 0..steps {
            let b = ni * j;
            for k in 0..steps {
                let c = ni * k;
                let rhs = (1 + (b as i128 * c as i128 % mi as i128) as i64).rem_euclid(mi);
                match a_inv {
                    Some(ai) => {
                        let d = (ai as i128 * rhs as i128).rem_euclid(mi as i128) as i64;
                        out.push(lift_sl2(&Mat2Z::new(a, b, c, d), m));
                    }
                    None => {
                        for t in 0..steps {
                            let d = 1 + ni * t;
                            if (a as i128 * d as i128 - rhs as i128).rem_euclid(mi as i128) == 0 {
                                out.push(lift_sl2(&Mat2Z::new(a, b, c, d), m));
                            }
                        }
                    }
                }
            }
        }
    }
    out
}

fn modinv(a: i64, m: i64) -> Option<i64> {
    let (g, x, _) = ext_gcd(a as i128, m as i128);
    if g == 1 {
        Some(x.rem_euclid(m as i128) as i64)
    } else {
        None
    }
}

type OrbitCache = Mutex<HashMap<CosetKey, Arc<Vec<(CosetKey, Mat2Z)>>>>;

/// The right Γ(N)-orbit {Γ·S·γ}, each coset with a witness γ ∈ Γ(N); sorted by key.
pub fn right_orbit(key: &CosetKey, level: &CongruenceLevel) -> Result<Arc<Vec<(CosetKey, Mat2Z)>>> {
    static CACHE: OnceLock<OrbitCache> = OnceLock::new();
    let cache = CACHE.get_or_init(|| Mutex::new(HashMap::new()));
    let n = level.n;
    let m = n * key.hnf.det() as u64;
    let size = sl2_order(m) / sl2_order(n);
    if size > level.guard {
        return Err(Error::GuardExceeded { size, guard: level.guard });
    }
    if let Some(o) = cache.lock().unwrap().get(key) {
        return Ok(o.clone());
    }
    let lift = key.unimodular();
    let h = key.hnf.to_z();
    let mut found: BTreeMap<CosetKey, Mat2Z> = BTreeMap::new();
    for g in congruence_kernel_lifts(n, m) {
        let hg = h.mul(&g);
        let (u2, h2) = hnf_int([hg.a as i128, hg.b as i128, hg.c as i128, hg.d as i128])?;
        let k = CosetKey { scale: key.scale.clone(), hnf: h2, uclass: level.uclass_of(&lift.mul(&u2)), level: n };
        found.entry(k).or_insert(g);
    }
    let out = Arc::new(found.into_iter().collect::<Vec<_>>());
    cache.lock().unwrap().insert(key.clone(), out.clone());
    Ok(out)
}

pub fn gamma_membership(m: &Mat2Q, level: &CongruenceLevel) -> bool {
    level.contains(m)
}
