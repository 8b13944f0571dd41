//! q-expansions of expression trees, memoized by structure and precision.

use super::expr::{FormExpr, Node};
use crate::exactq::arith::{bernoulli, bernoulli_poly, divisors, sigma};
use crate::exactq::{CycRational, Prec, PuiseuxSeries, Q};
use crate::{Error, Result};
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Pow, Zero};
use std::collections::HashMap;
use std::sync::{Mutex, OnceLock};

fn cache() -> &'static Mutex<HashMap<FormExpr, PuiseuxSeries>> {
    static CACHE: OnceLock<Mutex<HashMap<FormExpr, PuiseuxSeries>>> = OnceLock::new();
    CACHE.get_or_init(|| Mutex::new(HashMap::new()))
}

/// Drops all memoized expansions.
pub fn clear_expansion_cache() {
    cache().lock().unwrap().clear();
}

fn ceil_q(p: Q) -> i64 {
    p.ceil().to_integer()
}

fn qr(n: i64, d: i64) -> BigRational {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

/// Coefficients of G_K below q^P.
pub(crate) fn eisenstein_series(k: i64, p: Q) -> PuiseuxSeries {
    let top = ceil_q(p);
    let mut terms = Vec::new();
    if top > 0 {
        let c0 = -bernoulli(k as usize) / BigRational::from_integer(BigInt::from(2 * k));
        terms.push((Q::from_integer(0), CycRational::from_rational(c0)));
    }
    for n in 1..top.max(0) {
        let s = sigma((k - 1) as u32, n as u64);
        terms.push((Q::from_integer(n), CycRational::from_rational(BigRational::from_integer(s))));
    }
    PuiseuxSeries::from_terms(terms, Prec::Upto(p))
}

/// Coefficients of ∏(1 − qⁿ)²⁴, extended on demand.
fn eta24(count: usize) -> Vec<BigInt> {
    static TABLE: OnceLock<Mutex<Vec<BigInt>>> = OnceLock::new();
    let table = TABLE.get_or_init(|| Mutex::new(vec![BigInt::one()]));
    let mut t = table.lock().unwrap();
    while t.len() < count {
        // n·c_n = −24·Σ_{j=1}^{n} σ₁(j)·c_{n−j}, from θ log ∏(1−qⁿ)²⁴ = −24Σσ₁(n)qⁿ
        let n = t.len();
        let mut acc = BigInt::zero();
        for j in 1..=n {
            acc += sigma(1, j as u64) * &t[n - j];
        }
        let c = -acc * 24 / BigInt::from(n);
        t.push(c);
    }
    t[..count].to_vec()
}

pub(crate) fn delta_series(p: Q) -> PuiseuxSeries {
    let top = ceil_q(p);
    if top <= 1 {
        return PuiseuxSeries::zero(Prec::Upto(p));
    }
    let coeffs = eta24((top - 1) as usize);
    PuiseuxSeries::from_integers(&coeffs, 1, Prec::Upto(p))
}

/// τ(n) for n ≥ 1.
pub fn ramanujan_tau(n: u64) -> BigInt {
    eta24(n as usize)[n as usize - 1].clone()
}

/// Expansion in q^(1/N) of the level-N Eisenstein series attached to (c, d).
pub(crate) fn eisn_series(k: i64, c: u64, d: u64, n: u64, p: Q) -> PuiseuxSeries {
    let ni = n as i64;
    let top = ceil_q(p * Q::from_integer(ni));
    let mut terms = Vec::new();
    if top > 0 && c.is_multiple_of(n) {
        let mut acc = CycRational::zero(n);
        for a in 0..n {
            let b = bernoulli_poly(k as usize, &qr(a as i64, ni));
            acc = &acc + &CycRational::zeta(n, -((a * d) as i64)).scale(&b);
        }
        let f = -BigRational::from_integer(BigInt::from(ni).pow((k - 1) as u32))
            / BigRational::from_integer(BigInt::from(k));
        terms.push((Q::from_integer(0), acc.scale(&f)));
    }
    for e in 1..top.max(0) {
        let mut acc = CycRational::zero(n);
        for m in divisors(e as u64) {
            let r = (e as u64 / m) % n;
            let w = BigRational::from_integer(BigInt::from(m).pow((k - 1) as u32));
            let md = (m % n * d % n) as i64;
            if r == c % n {
                acc = &acc + &CycRational::zeta(n, md).scale(&w);
            }
            if (r + c).is_multiple_of(n) {
                acc = &acc + &CycRational::zeta(n, -md).scale(&w);
            }
        }
        if !acc.is_zero() {
            terms.push((Q::new(e, ni), acc));
        }
    }
    PuiseuxSeries::from_terms(terms, Prec::Upto(p))
}

impl FormExpr {
    /// Lower bound on the valuation of the q-expansion.
    pub(crate) fn valuation_lb(&self) -> Q {
        match self.node() {
            Node::Delta => Q::from_integer(1),
            Node::DeltaInverse => Q::from_integer(-1),
            Node::Expansion { leaf, .. } => {
                leaf.series.valuation().map_or(Q::from_integer(0), |v| v.min(Q::from_integer(0)))
            }
            Node::Sum { terms, .. } => terms.iter().map(|t| t.valuation_lb()).min().unwrap_or(Q::from_integer(0)),
            Node::Product(fs) => fs.iter().map(|f| f.valuation_lb()).sum(),
            Node::Scale(_, f) | Node::Serre(f) => f.valuation_lb(),
            Node::Slash { atom, a, d, .. } => atom.valuation_lb() * Q::new(*a, *d),
            _ => Q::from_integer(0),
        }
    }

    /// q-expansion with every exponent below `p` exact.
    pub fn expand(&self, p: Q) -> Result<PuiseuxSeries> {
        let want = Prec::Upto(p);
        if let Some(s) = cache().lock().unwrap().get(self) {
            if s.prec() >= want {
                return Ok(s.truncate(want));
            }
        }
        let s = self.compute(p)?;
        if s.prec() < want {
            return Err(Error::InsufficientPrecision { needed: want.to_string(), available: s.prec().to_string() });
        }
        let s = s.truncate(want);
        let mut c = cache().lock().unwrap();
        let keep = match c.get(self) {
            Some(old) => old.prec() < s.prec(),
            None => true,
        };
        if keep {
            c.insert(self.clone(), s.clone());
        }
        Ok(s)
    }

    pub fn expand_to(&self, p: i64) -> Result<PuiseuxSeries> {
        self.expand(Q::from_integer(p))
    }

    fn compute(&self, p: Q) -> Result<PuiseuxSeries> {
        Ok(match self.node() {
            Node::Eis1(k) => eisenstein_series(*k, p),
            Node::Delta => delta_series(p),
            Node::DeltaInverse => {
                let d = delta_series(p + Q::from_integer(2));
                PuiseuxSeries::one().div(&d)?
            }
            Node::EisN { k, c, d, n } => eisn_series(*k, *c, *d, *n, p),
            Node::Expansion { leaf, .. } => leaf.series.clone(),
            Node::Const(c) => PuiseuxSeries::constant(c.clone()).truncate(Prec::Upto(p)),
            Node::Sum { terms, .. } => {
                let mut acc = PuiseuxSeries::zero(Prec::Upto(p));
                for t in terms {
                    acc = acc.add(&t.expand(p)?);
                }
                acc
            }
            Node::Product(fs) => {
                let lbs: Vec<Q> = fs.iter().map(|f| f.valuation_lb()).collect();
                let total: Q = lbs.iter().copied().sum();
                let mut acc: Option<PuiseuxSeries> = None;
                for (f, lb) in fs.iter().zip(&lbs) {
                    let s = f.expand(p - (total - lb))?;
                    acc = Some(match acc {
                        None => s,
                        Some(a) => a.mul(&s),
                    });
                }
                acc.unwrap_or_else(PuiseuxSeries::one)
            }
            Node::Scale(c, f) => f.expand(p)?.scale(c),
            Node::Slash { atom, a, b, d } => {
                let r = Q::new(*a, *d);
                let inner = atom.expand(p / r)?;
                let k = atom.weight();
                let half = (k / 2).unsigned_abs() as u32;
                let f = if k >= 0 { qr(*a, *d).pow(half) } else { qr(*d, *a).pow(half) };
                inner.compose_scale(r, *b, *d as u64).scale_q(&f)
            }
            Node::Mu { a, b, d } => {
                // μ = (1/6)(E₂|₂T − E₂) = −4(G₂|T − G₂)
                let g2 = FormExpr::from_node(Node::Eis1(2));
                let t = FormExpr::slash_node(g2.clone(), *a, *b, *d);
                t.sub(&g2).scale_q(&qr(-4, 1)).expand(p)?
            }
            Node::Serre(g) => {
                let k = g.weight();
                let lb = g.valuation_lb();
                let s = g.expand(p)?;
                let g2 = eisenstein_series(2, p - lb.min(Q::from_integer(0)));
                s.theta().add(&g2.mul(&s).scale_q(&qr(2 * k, 1)))
            }
        })
    }
}
