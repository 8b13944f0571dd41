//! Truncated Puiseux series in q^(1/L) with coefficients in ℚ(ζ_M).

use super::arith::lcm_u64;
use super::cyclo::{minimal_common_conductor, CycRational};
use super::kernel::{self, IntView};
use crate::{Error, Result};
use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::{BigRational, Ratio};
use num_traits::{One, Signed, Zero};
use serde_json::{json, Value};
use std::cmp::Ordering;
use std::fmt;
use std::sync::{Arc, OnceLock};

/// Rational exponent.
pub type Q = Ratio<i64>;

pub fn q(n: i64, d: i64) -> Q {
    Ratio::new(n, d)
}

/// Precision of a series: every exponent below the bound is known.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Prec {
    Upto(Q),
    Exact,
}

impl Prec {
    pub fn upto(n: i64) -> Prec {
        Prec::Upto(Q::from_integer(n))
    }

    pub fn shift(self, by: Q) -> Prec {
        match self {
            Prec::Exact => Prec::Exact,
            Prec::Upto(p) => Prec::Upto(p + by),
        }
    }

    pub fn scale(self, by: Q) -> Prec {
        match self {
            Prec::Exact => Prec::Exact,
            Prec::Upto(p) => Prec::Upto(p * by),
        }
    }

    pub fn bound(self) -> Option<Q> {
        match self {
            Prec::Exact => None,
            Prec::Upto(p) => Some(p),
        }
    }

    pub fn admits(self, e: Q) -> bool {
        match self {
            Prec::Exact => true,
            Prec::Upto(p) => e < p,
        }
    }
}

impl PartialOrd for Prec {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Prec {
    fn cmp(&self, other: &Self) -> Ordering {
        match (self, other) {
            (Prec::Exact, Prec::Exact) => Ordering::Equal,
            (Prec::Exact, _) => Ordering::Greater,
            (_, Prec::Exact) => Ordering::Less,
            (Prec::Upto(a), Prec::Upto(b)) => a.cmp(b),
        }
    }
}

impl fmt::Display for Prec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Prec::Exact => write!(f, "exact"),
            Prec::Upto(p) => write!(f, "O(q^{})", p),
        }
    }
}

/// A truncated series Σ c_n q^(n/denom) + O(q^prec).
#[derive(Clone)]
pub struct PuiseuxSeries {
    denom: u64,
    conductor: u64,
    terms: Vec<(i64, CycRational)>,
    prec: Prec,
    ints: OnceLock<Arc<IntView>>,
}

impl fmt::Debug for PuiseuxSeries {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self)
    }
}

impl PuiseuxSeries {
    pub(crate) fn raw(denom: u64, conductor: u64, terms: Vec<(i64, CycRational)>, prec: Prec) -> Self {
        PuiseuxSeries { denom, conductor, terms, prec, ints: OnceLock::new() }.normalized()
    }

    pub fn zero(prec: Prec) -> Self {
        PuiseuxSeries { denom: 1, conductor: 1, terms: Vec::new(), prec, ints: OnceLock::new() }
    }

    pub fn constant(c: CycRational) -> Self {
        Self::monomial(c, Q::zero())
    }

    pub fn one() -> Self {
        Self::constant(CycRational::one())
    }

    pub fn monomial(c: CycRational, e: Q) -> Self {
        Self::from_terms(vec![(e, c)], Prec::Exact)
    }

    /// q^e with coefficient 1.
    pub fn q_pow(e: Q) -> Self {
        Self::monomial(CycRational::one(), e)
    }

    /// Builds a series from arbitrary (exponent, coefficient) pairs, summing duplicates.
    pub fn from_terms(terms: Vec<(Q, CycRational)>, prec: Prec) -> Self {
        let denom = terms.iter().fold(1u64, |l, (e, _)| lcm_u64(l, *e.denom() as u64));
        let conductor = terms.iter().fold(1u64, |l, (_, c)| lcm_u64(l, c.conductor()));
        let mut v: Vec<(i64, CycRational)> = terms
            .into_iter()
            .filter(|(e, c)| prec.admits(*e) && !c.is_zero())
            .map(|(e, c)| (e.numer() * (denom as i64 / e.denom()), c.embed(conductor)))
            .collect();
        v.sort_by_key(|(n, _)| *n);
        let mut merged: Vec<(i64, CycRational)> = Vec::with_capacity(v.len());
        for (n, c) in v {
            match merged.last_mut() {
                Some((m, acc)) if *m == n => *acc = &*acc + &c,
                _ => merged.push((n, c)),
            }
        }
        merged.retain(|(_, c)| !c.is_zero());
        Self::raw(denom, conductor, merged, prec)
    }

    /// Σ c_n q^n for integer coefficients, known below `prec`.
    pub fn from_integers(coeffs: &[BigInt], offset: i64, prec: Prec) -> Self {
        let terms = coeffs
            .iter()
            .enumerate()
            .filter(|(_, c)| !c.is_zero())
            .map(|(i, c)| (i as i64 + offset, CycRational::from_rational(BigRational::from_integer(c.clone()))))
            .filter(|(n, _)| prec.admits(Q::from_integer(*n)))
            .collect();
        Self::raw(1, 1, terms, prec)
    }

    fn normalized(mut self) -> Self {
        if let Prec::Upto(p) = self.prec {
            let d = self.denom as i64;
            self.terms.retain(|(n, _)| Q::new(*n, d) < p);
        }
        if self.terms.is_empty() {
            self.denom = 1;
            self.conductor = 1;
            return self;
        }
        let g = self.terms.iter().fold(self.denom as i64, |g, (n, _)| g.gcd(n));
        if g > 1 {
            for (n, _) in self.terms.iter_mut() {
                *n /= g;
            }
            self.denom /= g as u64;
        }
        if self.conductor > 1 {
            let m = minimal_common_conductor(self.terms.iter().map(|(_, c)| c), self.conductor);
            if m != self.conductor {
                for (_, c) in self.terms.iter_mut() {
                    *c = c.project(m);
                }
                self.conductor = m;
            }
        }
        self
    }

    pub fn denom(&self) -> u64 {
        self.denom
    }

    pub fn conductor(&self) -> u64 {
        self.conductor
    }

    pub fn prec(&self) -> Prec {
        self.prec
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    /// No known nonzero terms (the series may still be nonzero beyond its precision).
    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (Q, &CycRational)> + '_ {
        let d = self.denom as i64;
        self.terms.iter().map(move |(n, c)| (Q::new(*n, d), c))
    }

    pub(crate) fn raw_terms(&self) -> &[(i64, CycRational)] {
        &self.terms
    }

    pub fn coeff(&self, e: Q) -> CycRational {
        let scaled = e * Q::from_integer(self.denom as i64);
        if !scaled.is_integer() {
            return CycRational::zero(1);
        }
        let n = scaled.to_integer();
        match self.terms.binary_search_by_key(&n, |(m, _)| *m) {
            Ok(i) => self.terms[i].1.clone(),
            Err(_) => CycRational::zero(1),
        }
    }

    /// Lowest exponent with a nonzero coefficient.
    pub fn valuation(&self) -> Option<Q> {
        self.terms.first().map(|(n, _)| Q::new(*n, self.denom as i64))
    }

    /// Lower bound on the valuation of the true series.
    pub(crate) fn valuation_bound(&self) -> Option<Q> {
        self.valuation().or(self.prec.bound())
    }

    pub fn truncate(&self, p: Prec) -> Self {
        let prec = self.prec.min(p);
        Self::raw(self.denom, self.conductor, self.terms.clone(), prec)
    }

    pub(crate) fn int_view(&self) -> Arc<IntView> {
        self.ints.get_or_init(|| Arc::new(IntView::build(&self.terms))).clone()
    }

    pub fn add(&self, other: &Self) -> Self {
        self.add_scaled(other, false)
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add_scaled(other, true)
    }

    fn add_scaled(&self, other: &Self, negate: bool) -> Self {
        let prec = self.prec.min(other.prec);
        let l = lcm_u64(self.denom, other.denom);
        let m = lcm_u64(self.conductor, other.conductor);
        let (sa, sb) = ((l / self.denom) as i64, (l / other.denom) as i64);
        let mut out = Vec::with_capacity(self.terms.len() + other.terms.len());
        let (mut i, mut j) = (0, 0);
        let (a, b) = (&self.terms, &other.terms);
        let fix = |c: &CycRational| {
            let c = c.embed(m);
            if negate {
                -&c
            } else {
                c
            }
        };
        while i < a.len() || j < b.len() {
            let ea = a.get(i).map(|t| t.0 * sa);
            let eb = b.get(j).map(|t| t.0 * sb);
            match (ea, eb) {
                (Some(x), Some(y)) if x == y => {
                    let c = &a[i].1.embed(m) + &fix(&b[j].1);
                    if !c.is_zero() {
                        out.push((x, c));
                    }
                    i += 1;
                    j += 1;
                }
                (Some(x), Some(y)) if x < y => {
                    out.push((x, a[i].1.embed(m)));
                    i += 1;
                }
                (Some(x), None) => {
                    out.push((x, a[i].1.embed(m)));
                    i += 1;
                }
                (_, Some(y)) => {
                    out.push((y, fix(&b[j].1)));
                    j += 1;
                }
                (None, None) => unreachable!(),
            }
        }
        Self::raw(l, m, out, prec)
    }

    pub fn neg(&self) -> Self {
        PuiseuxSeries {
            denom: self.denom,
            conductor: self.conductor,
            terms: self.terms.iter().map(|(n, c)| (*n, -c)).collect(),
            prec: self.prec,
            ints: OnceLock::new(),
        }
    }

    pub fn scale(&self, c: &CycRational) -> Self {
        if c.is_zero() {
            return Self::zero(self.prec);
        }
        if let Some(r) = c.as_rational() {
            return self.scale_q(r);
        }
        let m = lcm_u64(self.conductor, c.conductor());
        let terms = self.terms.iter().map(|(n, x)| (*n, &x.embed(m) * &c.embed(m))).collect();
        Self::raw(self.denom, m, terms, self.prec)
    }

    pub fn scale_q(&self, r: &BigRational) -> Self {
        if r.is_zero() {
            return Self::zero(self.prec);
        }
        PuiseuxSeries {
            denom: self.denom,
            conductor: self.conductor,
            terms: self.terms.iter().map(|(n, c)| (*n, c.scale(r))).collect(),
            prec: self.prec,
            ints: OnceLock::new(),
        }
    }

    pub fn mul(&self, other: &Self) -> Self {
        kernel::mul(self, other)
    }

    pub fn pow(&self, e: u32) -> Self {
        let mut r = PuiseuxSeries::one();
        for _ in 0..e {
            r = r.mul(self);
        }
        r
    }

    /// θ = q·d/dq.
    pub fn theta(&self) -> Self {
        let d = self.denom as i64;
        let terms = self
            .terms
            .iter()
            .filter(|(n, _)| *n != 0)
            .map(|(n, c)| (*n, c.scale(&BigRational::new(BigInt::from(*n), BigInt::from(d)))))
            .collect();
        Self::raw(self.denom, self.conductor, terms, self.prec)
    }

    /// Substitution q ↦ ζ_d^b·q^r, acting on q^e by c·q^e ↦ c·ζ_d^(b·e)·q^(r·e).
    pub fn compose_scale(&self, r: Q, b: i64, d: u64) -> Self {
        assert!(r > Q::zero(), "substitution exponent must be positive");
        let l = self.denom;
        let new_denom = l * *r.denom() as u64;
        let rn = *r.numer();
        let root = d * l;
        let b = b.rem_euclid(root as i64);
        let m = if b == 0 { self.conductor } else { lcm_u64(self.conductor, root) };
        let step = (m / root) as i64;
        let terms = self
            .terms
            .iter()
            .map(|(n, c)| {
                let c = c.embed(m);
                let c = if b == 0 { c } else { c.mul_zeta((b * n).rem_euclid(root as i64) * step) };
                (n * rn, c)
            })
            .collect();
        Self::raw(new_denom, m, terms, self.prec.scale(r))
    }

    /// Quotient a/b, valid to the precision the operands determine.
    pub fn div(&self, other: &Self) -> Result<Self> {
        let vb = other.valuation().ok_or(Error::DivisionByZeroSeries)?;
        let va = self.valuation_bound();
        let prec = match (self.prec, other.prec) {
            (Prec::Exact, Prec::Exact) => {
                if other.terms.len() == 1 {
                    Prec::Exact
                } else if self.terms.is_empty() {
                    return Ok(Self::zero(Prec::Exact));
                } else {
                    return Err(Error::UnboundedPrecision);
                }
            }
            (pa, pb) => {
                let x = pa.shift(-vb);
                let y = match va {
                    Some(va) => pb.shift(va - vb - vb),
                    None => Prec::Exact,
                };
                x.min(y)
            }
        };
        if self.terms.is_empty() {
            return Ok(Self::zero(prec));
        }
        let l = lcm_u64(self.denom, other.denom) as i64;
        let m = lcm_u64(self.conductor, other.conductor);
        let a: Vec<(i64, CycRational)> =
            self.terms.iter().map(|(n, c)| (n * (l / self.denom as i64), c.embed(m))).collect();
        let b: Vec<(i64, CycRational)> =
            other.terms.iter().map(|(n, c)| (n * (l / other.denom as i64), c.embed(m))).collect();
        let b0 = b[0].0;
        let inv0 = b[0].1.inv()?;
        let start = a[0].0 - b0;
        if prec == Prec::Exact {
            // single-term divisor
            let terms = a.iter().map(|(n, c)| (n - b0, c * &inv0)).collect();
            return Ok(Self::raw(l as u64, m, terms, Prec::Exact));
        }
        let p = prec.bound().unwrap();
        let end = (p * Q::from_integer(l)).ceil().to_integer();
        let len = (end - start).max(0) as usize;
        let mut r: Vec<CycRational> = Vec::with_capacity(len);
        let mut ai = 0;
        for idx in 0..len {
            let e = start + idx as i64;
            let mut acc = CycRational::zero(m);
            while ai < a.len() && a[ai].0 < e + b0 {
                ai += 1;
            }
            if ai < a.len() && a[ai].0 == e + b0 {
                acc = a[ai].1.clone();
            }
            for (bn, bc) in b.iter().skip(1) {
                let j = bn - b0;
                if j as usize > idx {
                    break;
                }
                let prev = &r[idx - j as usize];
                if !prev.is_zero() {
                    acc = &acc - &(prev * bc);
                }
            }
            r.push(&acc * &inv0);
        }
        let terms =
            r.into_iter().enumerate().filter(|(_, c)| !c.is_zero()).map(|(i, c)| (start + i as i64, c)).collect();
        Ok(Self::raw(l as u64, m, terms, prec))
    }

    /// Agreement below the smaller of the two precisions.
    pub fn agrees_with(&self, other: &Self) -> bool {
        let p = self.prec.min(other.prec);
        self.truncate(p).sub(&other.truncate(p)).is_zero()
    }

    /// Agreement below `p`; fails if either operand is known less far.
    pub fn agrees_to(&self, other: &Self, p: Prec) -> Result<bool> {
        let have = self.prec.min(other.prec);
        if have < p {
            return Err(Error::InsufficientPrecision { needed: p.to_string(), available: have.to_string() });
        }
        Ok(self.truncate(p).sub(&other.truncate(p)).is_zero())
    }

    /// First exponent at which the two series differ (below their shared precision).
    pub fn first_difference(&self, other: &Self) -> Option<Q> {
        let p = self.prec.min(other.prec);
        self.truncate(p).sub(&other.truncate(p)).valuation()
    }

    pub fn to_json(&self) -> Value {
        json!({
            "denom": self.denom,
            "prec": match self.prec {
                Prec::Exact => Value::Null,
                Prec::Upto(p) => Value::String(p.to_string()),
            },
            "terms": self.terms.iter().map(|(n, c)| json!([n, c.to_string()])).collect::<Vec<_>>(),
        })
    }

    pub fn from_json(v: &Value) -> Result<Self> {
        let bad = || Error::Parse("malformed series".into());
        let denom = v["denom"].as_u64().ok_or_else(bad)?;
        let prec = match &v["prec"] {
            Value::Null => Prec::Exact,
            Value::String(s) => Prec::Upto(s.parse().map_err(|_| bad())?),
            _ => return Err(bad()),
        };
        let mut terms = Vec::new();
        for t in v["terms"].as_array().ok_or_else(bad)? {
            let n = t[0].as_i64().ok_or_else(bad)?;
            let c = super::cyclo::parse_cyc(t[1].as_str().ok_or_else(bad)?)?;
            terms.push((Q::new(n, denom as i64), c));
        }
        Ok(Self::from_terms(terms, prec))
    }
}

impl PartialEq for PuiseuxSeries {
    /// Structural equality: same precision and same terms.
    fn eq(&self, other: &Self) -> bool {
        self.prec == other.prec && self.denom == other.denom && self.terms == other.terms
    }
}

fn fmt_exp(e: Q) -> String {
    if e.is_integer() {
        e.to_string()
    } else {
        format!("({})", e)
    }
}

struct Terms<'a>(&'a PuiseuxSeries);

impl fmt::Display for Terms<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.0.write_terms(f)
    }
}

impl PuiseuxSeries {
    /// The terms without the trailing O(q^p).
    pub fn terms_to_string(&self) -> String {
        Terms(self).to_string()
    }

    fn write_terms(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (e, c) in self.terms() {
            let (neg, mag) = match c.as_rational() {
                Some(r) if r.is_negative() => (true, CycRational::from_rational(-r)),
                _ => (false, c.clone()),
            };
            if first {
                if neg {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {} ", if neg { "-" } else { "+" })?;
            }
            first = false;
            let is_one = mag.is_one();
            if e.is_zero() {
                write!(f, "{}", mag)?;
            } else {
                if !is_one {
                    write!(f, "{}", mag)?;
                }
                write!(f, "q")?;
                if !e.is_one() {
                    write!(f, "^{}", fmt_exp(e))?;
                }
            }
        }
        if first {
            write!(f, "0")?;
        }
        Ok(())
    }
}

impl fmt::Display for PuiseuxSeries {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.write_terms(f)?;
        if let Prec::Upto(p) = self.prec {
            write!(f, " + O(q^{})", fmt_exp(p))?;
        }
        Ok(())
    }
}

pub fn qs_add(a: &PuiseuxSeries, b: &PuiseuxSeries) -> PuiseuxSeries {
    a.add(b)
}

pub fn qs_mul(a: &PuiseuxSeries, b: &PuiseuxSeries) -> PuiseuxSeries {
    a.mul(b)
}

pub fn qs_theta(a: &PuiseuxSeries) -> PuiseuxSeries {
    a.theta()
}

pub fn qs_div(a: &PuiseuxSeries, b: &PuiseuxSeries) -> Result<PuiseuxSeries> {
    a.div(b)
}

pub fn qs_compose_scale(a: &PuiseuxSeries, r: Q, root: (i64, u64)) -> PuiseuxSeries {
    a.compose_scale(r, root.0, root.1)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn int_series(c: &[i64], prec: i64) -> PuiseuxSeries {
        let v: Vec<BigInt> = c.iter().map(|&x| BigInt::from(x)).collect();
        PuiseuxSeries::from_integers(&v, 0, Prec::upto(prec))
    }

    fn naive_delta(n: usize) -> Vec<i128> {
        let mut p = vec![0i128; n];
        p[1] = 1;
        for k in 1..n {
            for _ in 0..24 {
                for i in (k..n).rev() {
                    p[i] -= p[i - k];
                }
            }
        }
        p
    }

    #[test]
    fn addition() {
        let a = PuiseuxSeries::from_integers(&[1.into(), 1.into()], 0, Prec::Exact);
        let b = PuiseuxSeries::from_integers(&[0.into(), 2.into()], 0, Prec::Exact);
        assert_eq!(a.add(&b).to_string(), "1 + 3q");
        let g = int_series(&[0, 1, 3, 4, 7], 5);
        assert_eq!(g.add(&PuiseuxSeries::zero(Prec::Exact)), g);
        let z = g.sub(&g);
        assert!(z.is_zero());
        assert_eq!(z.prec(), Prec::upto(5));
    }

    #[test]
    fn geometric_inverse() {
        let one_minus_q = PuiseuxSeries::from_integers(&[1.into(), (-1).into()], 0, Prec::Exact);
        let geo = int_series(&[1; 10], 10);
        let prod = one_minus_q.mul(&geo);
        assert_eq!(prod.to_string(), "1 + O(q^10)");
        let inv = PuiseuxSeries::one().truncate(Prec::upto(8)).div(&one_minus_q).unwrap();
        assert!(inv.agrees_with(&geo));
        assert_eq!(inv.prec(), Prec::upto(8));
        assert!(PuiseuxSeries::one().div(&one_minus_q).is_err());
    }

    #[test]
    fn delta_square_matches_convolution() {
        let n = 30;
        let d = naive_delta(n);
        let ds = int_series(&d.iter().map(|&x| x as i64).collect::<Vec<_>>(), n as i64);
        let sq = ds.mul(&ds);
        // oracle: direct convolution
        for k in 0..n {
            let want: i128 = (0..=k).map(|i| d[i] * d[k - i]).sum();
            let got = sq.coeff(Q::from_integer(k as i64));
            assert_eq!(got, CycRational::from_rational(BigRational::from_integer(want.into())), "q^{k}");
        }
        assert_eq!(sq.coeff(Q::from_integer(2)), CycRational::from_int(1));
        assert_eq!(sq.coeff(Q::from_integer(3)), CycRational::from_int(-48));
        // precision: min(p1 + e2, p2 + e1) = 30 + 1
        assert_eq!(sq.prec(), Prec::upto(31));
    }

    #[test]
    fn half_powers_normalize() {
        let h = PuiseuxSeries::q_pow(q(1, 2));
        let p = h.mul(&h);
        assert_eq!(p.denom(), 1);
        assert_eq!(p.to_string(), "q");
    }

    #[test]
    fn theta_and_substitution() {
        assert!(PuiseuxSeries::constant(CycRational::from_int(5)).theta().is_zero());
        let q3 = PuiseuxSeries::q_pow(Q::from_integer(3));
        assert_eq!(q3.theta().to_string(), "3q^3");
        let q1 = PuiseuxSeries::q_pow(Q::one());
        assert_eq!(q1.compose_scale(q(1, 2), 1, 2).to_string(), "-q^(1/2)");
        let g2 = PuiseuxSeries::from_terms(
            vec![
                (Q::zero(), CycRational::from_rational(BigRational::new((-1).into(), 24.into()))),
                (Q::one(), CycRational::from_int(1)),
                (Q::from_integer(2), CycRational::from_int(3)),
            ],
            Prec::upto(3),
        );
        let sub = g2.compose_scale(Q::from_integer(2), 0, 1);
        assert_eq!(sub.to_string(), "-1/24 + q^2 + 3q^4 + O(q^6)");
        assert_eq!(g2.compose_scale(Q::one(), 0, 1), g2);
    }

    #[test]
    fn division_of_substituted_delta() {
        let n = 20;
        let d = naive_delta(n);
        let ds = int_series(&d.iter().map(|&x| x as i64).collect::<Vec<_>>(), n as i64);
        let half = ds.compose_scale(q(1, 2), 0, 1);
        let quo = half.div(&ds).unwrap();
        assert_eq!(quo.valuation(), Some(q(-1, 2)));
        assert_eq!(quo.coeff(q(-1, 2)), CycRational::from_int(1));
        assert!(quo.mul(&ds).agrees_with(&half));
    }

    #[test]
    fn cyclotomic_products() {
        let a = PuiseuxSeries::q_pow(Q::one()).compose_scale(q(1, 3), 1, 3);
        let b = a.mul(&a).mul(&a);
        // (ζ₃ q^(1/3))³ = q
        assert_eq!(b.to_string(), "q");
        let c = PuiseuxSeries::q_pow(Q::one()).compose_scale(q(1, 4), 1, 4);
        let c2 = c.mul(&c);
        assert_eq!(c.conductor(), 4);
        assert_eq!(c2.conductor(), 1);
        assert_eq!(c2.coeff(q(1, 2)), CycRational::from_int(-1));
    }

    #[test]
    fn json_round_trip() {
        let a = PuiseuxSeries::q_pow(Q::one())
            .compose_scale(q(1, 3), 1, 3)
            .add(&PuiseuxSeries::one())
            .truncate(Prec::upto(4));
        let back = PuiseuxSeries::from_json(&a.to_json()).unwrap();
        assert_eq!(back, a);
    }
}
