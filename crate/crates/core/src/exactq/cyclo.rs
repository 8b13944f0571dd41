//! Elements of ℚ(ζ_M) in the power basis modulo the M-th cyclotomic polynomial.

use super::arith::{divisors, euler_phi, factorize, gcd_u64, lcm_u64};
use super::linalg::rref;
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use std::collections::HashMap;
use std::fmt;
use std::hash::{Hash, Hasher};
use std::sync::{Arc, Mutex, OnceLock};

pub(crate) struct CycloData {
    pub phi: usize,
    /// x^j mod Φ_m for 0 ≤ j < m, as sparse (index, coefficient) lists.
    pub pow: Vec<Vec<(usize, i64)>>,
    /// Largest ℓ¹ norm among the entries of `pow`.
    pub max_l1: u64,
}

fn poly_mul(a: &[i128], b: &[i128]) -> Vec<i128> {
    let mut out = vec![0i128; a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        if *x == 0 {
            continue;
        }
        for (j, y) in b.iter().enumerate() {
            out[i + j] += x * y;
        }
    }
    out
}

/// Exact division by a monic polynomial.
fn poly_div_monic(num: &[i128], den: &[i128]) -> Vec<i128> {
    let mut r = num.to_vec();
    let dn = den.len() - 1;
    let qn = r.len() - 1 - dn;
    let mut q = vec![0i128; qn + 1];
    for i in (0..=qn).rev() {
        let c = r[i + dn];
        q[i] = c;
        if c != 0 {
            for (j, d) in den.iter().enumerate() {
                r[i + j] -= c * d;
            }
        }
    }
    debug_assert!(r.iter().all(|&x| x == 0));
    q
}

fn cyclotomic_poly(m: u64) -> Vec<i128> {
    let mut known: HashMap<u64, Vec<i128>> = HashMap::new();
    for d in divisors(m) {
        let mut num = vec![0i128; d as usize + 1];
        num[0] = -1;
        num[d as usize] = 1;
        let mut den = vec![1i128];
        for e in divisors(d) {
            if e < d {
                den = poly_mul(&den, &known[&e]);
            }
        }
        known.insert(d, poly_div_monic(&num, &den));
    }
    known.remove(&m).unwrap()
}

pub(crate) fn cyclo(m: u64) -> Arc<CycloData> {
    static CACHE: OnceLock<Mutex<HashMap<u64, Arc<CycloData>>>> = OnceLock::new();
    let cache = CACHE.get_or_init(|| Mutex::new(HashMap::new()));
    if let Some(d) = cache.lock().unwrap().get(&m) {
        return d.clone();
    }
    let poly = cyclotomic_poly(m);
    let phi = poly.len() - 1;
    debug_assert_eq!(phi as u64, euler_phi(m));
    let mut pow = Vec::with_capacity(m as usize);
    let mut v = vec![0i128; phi];
    v[0] = 1;
    for _ in 0..m {
        pow.push(
            v.iter()
                .enumerate()
                .filter(|(_, c)| **c != 0)
                .map(|(i, c)| (i, i64::try_from(*c).expect("cyclotomic coefficient")))
                .collect::<Vec<_>>(),
        );
        let top = v[phi - 1];
        for i in (1..phi).rev() {
            v[i] = v[i - 1] - top * poly[i];
        }
        v[0] = -top * poly[0];
    }
    let max_l1 =
        pow.iter().map(|p: &Vec<(usize, i64)>| p.iter().map(|(_, c)| c.unsigned_abs()).sum::<u64>()).max().unwrap_or(1);
    let data = Arc::new(CycloData { phi, pow, max_l1 });
    cache.lock().unwrap().insert(m, data.clone());
    data
}

/// Left inverse of the embedding ℚ(ζ_small) → ℚ(ζ_big), as a φ(small) × φ(big) matrix.
fn projection(big: u64, small: u64) -> Arc<Vec<Vec<BigRational>>> {
    type Key = (u64, u64);
    static CACHE: OnceLock<Mutex<HashMap<Key, Arc<Vec<Vec<BigRational>>>>>> = OnceLock::new();
    let cache = CACHE.get_or_init(|| Mutex::new(HashMap::new()));
    if let Some(p) = cache.lock().unwrap().get(&(big, small)) {
        return p.clone();
    }
    let cb = cyclo(big);
    let cs = cyclo(small);
    let step = big / small;
    // Augmented [E | I] with E the embedding matrix (φ(big) × φ(small)).
    let rows = cb.phi;
    let mut aug = vec![vec![BigRational::zero(); cs.phi + rows]; rows];
    for i in 0..cs.phi {
        for &(r, c) in &cb.pow[(i as u64 * step % big) as usize] {
            aug[r][i] = BigRational::from_integer(c.into());
        }
    }
    for (r, row) in aug.iter_mut().enumerate() {
        row[cs.phi + r] = BigRational::one();
    }
    let piv = rref(&mut aug);
    debug_assert!(piv.len() >= cs.phi && piv[cs.phi - 1] == cs.phi - 1);
    let p: Vec<Vec<BigRational>> = aug[..cs.phi].iter().map(|row| row[cs.phi..].to_vec()).collect();
    let p = Arc::new(p);
    cache.lock().unwrap().insert((big, small), p.clone());
    p
}

/// An element of the cyclotomic field ℚ(ζ_M).
#[derive(Clone, Debug)]
pub struct CycRational {
    conductor: u64,
    coords: Vec<BigRational>,
}

impl CycRational {
    pub fn zero(conductor: u64) -> Self {
        let phi = cyclo(conductor).phi;
        CycRational { conductor, coords: vec![BigRational::zero(); phi] }
    }

    pub fn one() -> Self {
        Self::from_rational(BigRational::one())
    }

    pub fn from_rational(q: BigRational) -> Self {
        CycRational { conductor: 1, coords: vec![q] }
    }

    pub fn from_int(n: i64) -> Self {
        Self::from_rational(BigRational::from_integer(n.into()))
    }

    pub fn from_coords(conductor: u64, coords: Vec<BigRational>) -> Self {
        assert_eq!(coords.len(), cyclo(conductor).phi, "coordinate count");
        CycRational { conductor, coords }
    }

    /// ζ_m^j.
    pub fn zeta(m: u64, j: i64) -> Self {
        let data = cyclo(m);
        let idx = j.rem_euclid(m as i64) as usize;
        let mut coords = vec![BigRational::zero(); data.phi];
        for &(i, c) in &data.pow[idx] {
            coords[i] = BigRational::from_integer(c.into());
        }
        CycRational { conductor: m, coords }
    }

    pub fn conductor(&self) -> u64 {
        self.conductor
    }

    pub fn coords(&self) -> &[BigRational] {
        &self.coords
    }

    pub fn is_zero(&self) -> bool {
        self.coords.iter().all(|c| c.is_zero())
    }

    pub fn is_one(&self) -> bool {
        self.coords[0].is_one() && self.coords[1..].iter().all(|c| c.is_zero())
    }

    /// Returns the rational value if the element lies in ℚ.
    pub fn as_rational(&self) -> Option<&BigRational> {
        if self.coords[1..].iter().all(|c| c.is_zero()) {
            Some(&self.coords[0])
        } else {
            None
        }
    }

    /// Embeds into ℚ(ζ_big); `big` must be a multiple of the conductor.
    pub fn embed(&self, big: u64) -> Self {
        if big == self.conductor {
            return self.clone();
        }
        assert!(big.is_multiple_of(self.conductor), "embedding into non-multiple conductor");
        let data = cyclo(big);
        let step = big / self.conductor;
        let mut coords = vec![BigRational::zero(); data.phi];
        for (i, c) in self.coords.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            for &(r, k) in &data.pow[(i as u64 * step % big) as usize] {
                coords[r] += c * BigRational::from_integer(k.into());
            }
        }
        CycRational { conductor: big, coords }
    }

    fn aligned(&self, other: &Self) -> (Self, Self) {
        let m = lcm_u64(self.conductor, other.conductor);
        (self.embed(m), other.embed(m))
    }

    pub fn scale(&self, q: &BigRational) -> Self {
        CycRational { conductor: self.conductor, coords: self.coords.iter().map(|c| c * q).collect() }
    }

    /// Multiplies by ζ_M^j where M is the current conductor.
    pub fn mul_zeta(&self, j: i64) -> Self {
        let m = self.conductor;
        let data = cyclo(m);
        let mut coords = vec![BigRational::zero(); data.phi];
        for (i, c) in self.coords.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let idx = (i as i64 + j).rem_euclid(m as i64) as usize;
            for &(r, k) in &data.pow[idx] {
                coords[r] += c * BigRational::from_integer(k.into());
            }
        }
        CycRational { conductor: m, coords }
    }

    /// Galois conjugate σ_a: ζ ↦ ζ^a, for a coprime to the conductor.
    pub fn galois(&self, a: u64) -> Self {
        let m = self.conductor;
        let data = cyclo(m);
        let mut coords = vec![BigRational::zero(); data.phi];
        for (i, c) in self.coords.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            for &(r, k) in &data.pow[(i as u64 * a % m) as usize] {
                coords[r] += c * BigRational::from_integer(k.into());
            }
        }
        CycRational { conductor: m, coords }
    }

    /// True when the element lies in the subfield ℚ(ζ_small).
    pub fn lies_in(&self, small: u64) -> bool {
        let m = self.conductor;
        if !m.is_multiple_of(small) {
            return false;
        }
        if self.as_rational().is_some() {
            return true;
        }
        (1..m).filter(|&a| gcd_u64(a, m) == 1 && a % small == 1 % small && a != 1).all(|a| &self.galois(a) == self)
    }

    /// Rewrites the element over ℚ(ζ_small), assuming it lies there.
    pub fn project(&self, small: u64) -> Self {
        if small == self.conductor {
            return self.clone();
        }
        if let Some(q) = self.as_rational() {
            return CycRational::from_rational(q.clone()).embed(small);
        }
        let p = projection(self.conductor, small);
        let coords = p
            .iter()
            .map(|row| {
                row.iter()
                    .zip(&self.coords)
                    .filter(|(_, c)| !c.is_zero())
                    .map(|(a, c)| a * c)
                    .fold(BigRational::zero(), |s, x| s + x)
            })
            .collect();
        CycRational { conductor: small, coords }
    }

    /// Smallest conductor whose field contains this element.
    pub fn minimal_conductor(&self) -> u64 {
        minimal_common_conductor(std::iter::once(self), self.conductor)
    }

    /// Rewritten over its minimal conductor.
    pub fn reduce(&self) -> Self {
        self.project(self.minimal_conductor())
    }

    pub fn inv(&self) -> crate::Result<Self> {
        if self.is_zero() {
            return Err(crate::Error::NotInvertible);
        }
        if let Some(q) = self.as_rational() {
            return Ok(CycRational::from_rational(BigRational::one() / q).embed(self.conductor));
        }
        // Columns: coordinates of self·ζ^j; solve for y with self·y = 1.
        let phi = self.coords.len();
        let cols: Vec<CycRational> = (0..phi as i64).map(|j| self.mul_zeta(j)).collect();
        let mut aug = vec![vec![BigRational::zero(); phi + 1]; phi];
        for (j, col) in cols.iter().enumerate() {
            for (i, c) in col.coords.iter().enumerate() {
                aug[i][j] = c.clone();
            }
        }
        aug[0][phi] = BigRational::one();
        let piv = rref(&mut aug);
        if piv.len() != phi {
            return Err(crate::Error::NotInvertible);
        }
        Ok(CycRational { conductor: self.conductor, coords: aug.into_iter().map(|r| r[phi].clone()).collect() })
    }

    pub fn pow(&self, e: u32) -> Self {
        let mut r = CycRational::one().embed(self.conductor);
        for _ in 0..e {
            r = &r * self;
        }
        r
    }
}

/// Smallest conductor containing every element of the iterator (all given over `m`).
pub(crate) fn minimal_common_conductor<'a, I>(items: I, m: u64) -> u64
where
    I: Iterator<Item = &'a CycRational> + Clone,
{
    if items.clone().all(|x| x.as_rational().is_some()) {
        return 1;
    }
    let mut cur = m;
    'search: loop {
        for (p, _) in factorize(cur) {
            let small = cur / p;
            let ok = if cur % 4 == 2 && p == 2 {
                true
            } else {
                let subgroup: Vec<u64> = (2..m).filter(|&a| gcd_u64(a, m) == 1 && a % small == 1 % small).collect();
                items.clone().all(|x| {
                    let x = x.embed(m);
                    subgroup.iter().all(|&a| x.galois(a) == x)
                })
            };
            if ok {
                cur = small;
                continue 'search;
            }
        }
        return cur;
    }
}

impl PartialEq for CycRational {
    fn eq(&self, other: &Self) -> bool {
        if self.conductor == other.conductor {
            return self.coords == other.coords;
        }
        let (a, b) = self.aligned(other);
        a.coords == b.coords
    }
}

impl Eq for CycRational {}

impl Hash for CycRational {
    fn hash<H: Hasher>(&self, state: &mut H) {
        let r = self.reduce();
        r.conductor.hash(state);
        for c in &r.coords {
            c.numer().hash(state);
            c.denom().hash(state);
        }
    }
}

impl<'a> std::ops::Add<&'a CycRational> for &'a CycRational {
    type Output = CycRational;
    fn add(self, rhs: &CycRational) -> CycRational {
        if self.conductor == rhs.conductor {
            return CycRational {
                conductor: self.conductor,
                coords: self.coords.iter().zip(&rhs.coords).map(|(a, b)| a + b).collect(),
            };
        }
        let (a, b) = self.aligned(rhs);
        &a + &b
    }
}

impl<'a> std::ops::Sub<&'a CycRational> for &'a CycRational {
    type Output = CycRational;
    fn sub(self, rhs: &CycRational) -> CycRational {
        self + &(-rhs)
    }
}

impl std::ops::Neg for &CycRational {
    type Output = CycRational;
    fn neg(self) -> CycRational {
        CycRational { conductor: self.conductor, coords: self.coords.iter().map(|c| -c).collect() }
    }
}

impl<'a> std::ops::Mul<&'a CycRational> for &'a CycRational {
    type Output = CycRational;
    fn mul(self, rhs: &CycRational) -> CycRational {
        if let Some(q) = rhs.as_rational() {
            return self.scale(q);
        }
        if let Some(q) = self.as_rational() {
            return rhs.scale(q);
        }
        if self.conductor != rhs.conductor {
            let (a, b) = self.aligned(rhs);
            return &a * &b;
        }
        let m = self.conductor;
        let data = cyclo(m);
        let phi = data.phi;
        let mut raw = vec![BigRational::zero(); 2 * phi - 1];
        for (i, a) in self.coords.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in rhs.coords.iter().enumerate() {
                if !b.is_zero() {
                    raw[i + j] += a * b;
                }
            }
        }
        let mut coords = vec![BigRational::zero(); phi];
        for (j, c) in raw.into_iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            if j < phi {
                coords[j] += c;
            } else {
                for &(r, k) in &data.pow[j % m as usize] {
                    coords[r] += &c * BigRational::from_integer(k.into());
                }
            }
        }
        CycRational { conductor: m, coords }
    }
}

impl fmt::Display for CycRational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if let Some(q) = self.as_rational() {
            return write!(f, "{}", q);
        }
        let mut first = true;
        write!(f, "(")?;
        for (i, c) in self.coords.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let (sign, mag) = if c.is_negative() { ("-", -c) } else { ("+", c.clone()) };
            if first {
                if sign == "-" {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {} ", sign)?;
            }
            first = false;
            match i {
                0 => write!(f, "{}", mag)?,
                _ => {
                    if !mag.is_one() {
                        write!(f, "{}*", mag)?;
                    }
                    write!(f, "z{}", self.conductor)?;
                    if i > 1 {
                        write!(f, "^{}", i)?;
                    }
                }
            }
        }
        write!(f, ")")
    }
}

/// Parses the `Display` form: a rational, or a parenthesized sum of terms `c*zM^i`.
pub fn parse_cyc(s: &str) -> crate::Result<CycRational> {
    let s = s.trim();
    let err = || crate::Error::Parse(format!("bad cyclotomic literal {s:?}"));
    if !s.starts_with('(') {
        let q: BigRational = s.parse().map_err(|_| err())?;
        return Ok(CycRational::from_rational(q));
    }
    let body = s.strip_prefix('(').and_then(|b| b.strip_suffix(')')).ok_or_else(err)?;
    let mut acc = CycRational::from_int(0);
    let mut sign = BigInt::one();
    for tok in body.split_whitespace() {
        match tok {
            "+" => sign = BigInt::one(),
            "-" => sign = -BigInt::one(),
            t => {
                let (neg, t) = match t.strip_prefix('-') {
                    Some(r) => (true, r),
                    None => (false, t),
                };
                let (coef, root) = match t.find('z') {
                    None => (t, None),
                    Some(p) => {
                        let c = t[..p].trim_end_matches('*');
                        (if c.is_empty() { "1" } else { c }, Some(&t[p + 1..]))
                    }
                };
                let mut c: BigRational = coef.parse().map_err(|_| err())?;
                c *= BigRational::from_integer(sign.clone());
                if neg {
                    c = -c;
                }
                let term = match root {
                    None => CycRational::from_rational(c),
                    Some(r) => {
                        let (m, e) = match r.split_once('^') {
                            Some((m, e)) => (m, e),
                            None => (r, "1"),
                        };
                        let m: u64 = m.parse().map_err(|_| err())?;
                        let e: i64 = e.parse().map_err(|_| err())?;
                        CycRational::zeta(m, e).scale(&c)
                    }
                };
                acc = &acc + &term;
                sign = BigInt::one();
            }
        }
    }
    Ok(acc)
}
