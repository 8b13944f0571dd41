use crate::{Error, Result};
use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde_json::{json, Value};
use std::fmt;

/// A 2×2 matrix over ℚ, rows (a b; c d).
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Mat2Q {
    pub a: BigRational,
    pub b: BigRational,
    pub c: BigRational,
    pub d: BigRational,
}

fn qi(n: i64) -> BigRational {
    BigRational::from_integer(BigInt::from(n))
}

impl Mat2Q {
    pub fn new(a: BigRational, b: BigRational, c: BigRational, d: BigRational) -> Self {
        Mat2Q { a, b, c, d }
    }

    pub fn from_ints(a: i64, b: i64, c: i64, d: i64) -> Self {
        Mat2Q::new(qi(a), qi(b), qi(c), qi(d))
    }

    pub fn identity() -> Self {
        Self::from_ints(1, 0, 0, 1)
    }

    pub fn scalar(r: BigRational) -> Self {
        Mat2Q::new(r.clone(), BigRational::zero(), BigRational::zero(), r)
    }

    /// ρ_n = (1 n; 0 1).
    pub fn translation(n: i64) -> Self {
        Self::from_ints(1, n, 0, 1)
    }

    pub fn det(&self) -> BigRational {
        &self.a * &self.d - &self.b * &self.c
    }

    pub fn mul(&self, o: &Mat2Q) -> Mat2Q {
        Mat2Q {
            a: &self.a * &o.a + &self.b * &o.c,
            b: &self.a * &o.b + &self.b * &o.d,
            c: &self.c * &o.a + &self.d * &o.c,
            d: &self.c * &o.b + &self.d * &o.d,
        }
    }

    pub fn inv(&self) -> Result<Mat2Q> {
        let det = self.det();
        if det.is_zero() {
            return Err(Error::NotInvertible);
        }
        Ok(Mat2Q { a: &self.d / &det, b: -&self.b / &det, c: -&self.c / &det, d: &self.a / &det })
    }

    pub fn is_integral(&self) -> bool {
        [&self.a, &self.b, &self.c, &self.d].iter().all(|x| x.is_integer())
    }

    pub fn to_int(&self) -> Option<Mat2Z> {
        if !self.is_integral() {
            return None;
        }
        let f = |x: &BigRational| x.to_integer().to_i64();
        Some(Mat2Z::new(f(&self.a)?, f(&self.b)?, f(&self.c)?, f(&self.d)?))
    }

    pub fn is_upper_triangular(&self) -> bool {
        self.c.is_zero()
    }

    pub fn to_json(&self) -> Value {
        json!([self.a.to_string(), self.b.to_string(), self.c.to_string(), self.d.to_string()])
    }

    pub fn from_json(v: &Value) -> Result<Mat2Q> {
        let bad = || Error::Parse("matrix must be four rational strings".into());
        let arr = v.as_array().filter(|a| a.len() == 4).ok_or_else(bad)?;
        let mut e = Vec::new();
        for x in arr {
            let s = match x {
                Value::String(s) => s.clone(),
                Value::Number(n) => n.to_string(),
                _ => return Err(bad()),
            };
            e.push(s.parse::<BigRational>().map_err(|_| bad())?);
        }
        let d = e.pop().unwrap();
        let c = e.pop().unwrap();
        let b = e.pop().unwrap();
        let a = e.pop().unwrap();
        Ok(Mat2Q::new(a, b, c, d))
    }
}

impl fmt::Display for Mat2Q {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({} {}; {} {})", self.a, self.b, self.c, self.d)
    }
}

/// A 2×2 integer matrix with small entries (used for SL₂(ℤ) elements).
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Mat2Z {
    pub a: i64,
    pub b: i64,
    pub c: i64,
    pub d: i64,
}

impl Mat2Z {
    pub const fn new(a: i64, b: i64, c: i64, d: i64) -> Self {
        Mat2Z { a, b, c, d }
    }

    pub const fn identity() -> Self {
        Mat2Z::new(1, 0, 0, 1)
    }

    pub fn det(&self) -> i64 {
        self.a * self.d - self.b * self.c
    }

    pub fn mul(&self, o: &Mat2Z) -> Mat2Z {
        let m = |x: i64, y: i64, z: i64, w: i64| {
            x.checked_mul(y)
                .and_then(|p| z.checked_mul(w).and_then(|q| p.checked_add(q)))
                .expect("integer matrix overflow")
        };
        Mat2Z::new(
            m(self.a, o.a, self.b, o.c),
            m(self.a, o.b, self.b, o.d),
            m(self.c, o.a, self.d, o.c),
            m(self.c, o.b, self.d, o.d),
        )
    }

    /// Inverse of a determinant-one matrix.
    pub fn inv_sl2(&self) -> Mat2Z {
        debug_assert_eq!(self.det(), 1);
        Mat2Z::new(self.d, -self.b, -self.c, self.a)
    }

    pub fn neg(&self) -> Mat2Z {
        Mat2Z::new(-self.a, -self.b, -self.c, -self.d)
    }

    pub fn to_q(&self) -> Mat2Q {
        Mat2Q::from_ints(self.a, self.b, self.c, self.d)
    }

    /// Entries reduced into [0, n).
    pub fn reduce_mod(&self, n: i64) -> Mat2Z {
        Mat2Z::new(self.a.rem_euclid(n), self.b.rem_euclid(n), self.c.rem_euclid(n), self.d.rem_euclid(n))
    }

    pub fn is_unimodular(&self) -> bool {
        self.det() == 1
    }
}

impl fmt::Display for Mat2Z {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({} {}; {} {})", self.a, self.b, self.c, self.d)
    }
}

/// Writes m = r·P with r > 0 rational and P a primitive integer matrix.
pub(crate) fn content_split(m: &Mat2Q) -> Result<(BigRational, [i128; 4])> {
    let entries = [&m.a, &m.b, &m.c, &m.d];
    let l = entries.iter().fold(BigInt::one(), |acc, x| acc.lcm(x.denom()));
    let ints: Vec<BigInt> = entries.iter().map(|x| x.numer() * (&l / x.denom())).collect();
    let g = ints.iter().fold(BigInt::zero(), |acc, x| acc.gcd(x));
    if g.is_zero() {
        return Err(Error::NotPositiveDet);
    }
    let g = g.abs();
    let mut p = [0i128; 4];
    for (i, x) in ints.iter().enumerate() {
        p[i] = (x / &g).to_i128().ok_or(Error::Overflow("content split"))?;
    }
    Ok((BigRational::new(g, l), p))
}
