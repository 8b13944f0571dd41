//! Series multiplication by multi-modular convolution.
//!
//! Coefficients are cleared to a common integer denominator, the product is
//! computed modulo enough 62-bit primes to exceed an ℓ¹ bound on the result,
//! and the exact integers are recovered by CRT.

use super::arith::{is_prime_u64, lcm_u64};
use super::cyclo::{cyclo, CycRational};
use super::series::{Prec, PuiseuxSeries, Q};
use num_bigint::{BigInt, Sign};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use std::sync::OnceLock;

/// Integer form of a series: coefficients = numerators / den.
pub(crate) struct IntView {
    den: BigInt,
    terms: Vec<(i64, Vec<(usize, BigInt)>)>,
    l1: BigInt,
}

impl IntView {
    pub(crate) fn build(terms: &[(i64, CycRational)]) -> IntView {
        let mut den = BigInt::one();
        for (_, c) in terms {
            for x in c.coords() {
                if !x.is_zero() {
                    den = den.lcm(x.denom());
                }
            }
        }
        let mut l1 = BigInt::zero();
        let terms = terms
            .iter()
            .map(|(n, c)| {
                let coords = c
                    .coords()
                    .iter()
                    .enumerate()
                    .filter(|(_, x)| !x.is_zero())
                    .map(|(i, x)| {
                        let v = x.numer() * (&den / x.denom());
                        l1 += v.abs();
                        (i, v)
                    })
                    .collect();
                (*n, coords)
            })
            .collect();
        IntView { den, terms, l1 }
    }
}

fn primes() -> &'static [u64] {
    static PRIMES: OnceLock<Vec<u64>> = OnceLock::new();
    PRIMES.get_or_init(|| {
        let mut v = Vec::new();
        let mut p = (1u64 << 62) - 1;
        while v.len() < 64 {
            if is_prime_u64(p) {
                v.push(p);
            }
            p -= 2;
        }
        v
    })
}

#[inline]
fn mulmod(a: u64, b: u64, p: u64) -> u64 {
    ((a as u128 * b as u128) % p as u128) as u64
}

fn residue(x: &BigInt, p: u64) -> u64 {
    let r = x.mod_floor(&BigInt::from(p));
    r.to_u64().unwrap()
}

fn inv_mod(a: u64, p: u64) -> u64 {
    super::arith::mod_pow(a, p - 2, p)
}

/// Residues of a view's terms modulo p, embedded into conductor `m` and exponents scaled by `s`.
fn residues(v: &IntView, own_m: u64, m: u64, s: i64, p: u64, phi: usize) -> Vec<(i64, Vec<(usize, u64)>)> {
    let data = cyclo(m);
    let step = m / own_m;
    let mut dense = vec![0u64; phi];
    v.terms
        .iter()
        .map(|(n, coords)| {
            for (i, x) in coords {
                let r = residue(x, p);
                if step == 1 {
                    dense[*i] = (dense[*i] + r) % p;
                } else {
                    for &(j, k) in &data.pow[(*i as u64 * step % m) as usize] {
                        let kk = if k >= 0 { k as u64 } else { p - (-k) as u64 };
                        dense[j] = (dense[j] + mulmod(r, kk, p)) % p;
                    }
                }
            }
            let sparse: Vec<(usize, u64)> = dense
                .iter_mut()
                .enumerate()
                .filter(|(_, x)| **x != 0)
                .map(|(i, x)| {
                    let r = (i, *x);
                    *x = 0;
                    r
                })
                .collect();
            (n * s, sparse)
        })
        .collect()
}

pub(crate) fn mul(a: &PuiseuxSeries, b: &PuiseuxSeries) -> PuiseuxSeries {
    let (pa, pb) = (a.prec(), b.prec());
    if a.is_zero() && b.is_zero() && pa == Prec::Exact && pb == Prec::Exact {
        return PuiseuxSeries::zero(Prec::Exact);
    }
    let lo_a = a.valuation_bound();
    let lo_b = b.valuation_bound();
    let prec = {
        let x = match lo_b {
            Some(v) => pa.shift(v),
            None => Prec::Exact,
        };
        let y = match lo_a {
            Some(v) => pb.shift(v),
            None => Prec::Exact,
        };
        x.min(y)
    };
    if a.is_zero() || b.is_zero() {
        return PuiseuxSeries::zero(prec);
    }
    let l = lcm_u64(a.denom(), b.denom());
    let m = lcm_u64(a.conductor(), b.conductor());
    let (sa, sb) = ((l / a.denom()) as i64, (l / b.denom()) as i64);
    let va = a.int_view();
    let vb = b.int_view();
    let data = cyclo(m);
    let phi = data.phi;
    let width = 2 * phi - 1;

    let emin = a.raw_terms()[0].0 * sa + b.raw_terms()[0].0 * sb;
    let emax_excl = match prec {
        Prec::Exact => a.raw_terms().last().unwrap().0 * sa + b.raw_terms().last().unwrap().0 * sb + 1,
        Prec::Upto(p) => (p * Q::from_integer(l as i64)).ceil().to_integer(),
    };
    if emax_excl <= emin {
        return PuiseuxSeries::zero(prec);
    }
    let slots = (emax_excl - emin) as usize;

    let r = BigInt::from(data.max_l1);
    let bound = &va.l1 * &vb.l1 * &r * &r * &r;
    let need_bits = bound.bits() + 2;
    let ps = primes();
    let mut nprimes = 0;
    let mut bits = 0u64;
    while bits < need_bits {
        bits += 61;
        nprimes += 1;
    }
    assert!(nprimes <= ps.len(), "coefficient bound too large for prime table");

    let mut per_prime: Vec<Vec<u64>> = Vec::with_capacity(nprimes);
    for &p in &ps[..nprimes] {
        let ra = residues(&va, a.conductor(), m, sa, p, phi);
        let rb = residues(&vb, b.conductor(), m, sb, p, phi);
        let mut acc = vec![0u64; slots * width];
        for (ea, ca) in &ra {
            for (eb, cb) in &rb {
                let e = ea + eb;
                if e >= emax_excl {
                    break;
                }
                let base = (e - emin) as usize * width;
                for &(i, x) in ca {
                    for &(j, y) in cb {
                        let cell = &mut acc[base + i + j];
                        *cell = (*cell + mulmod(x, y, p)) % p;
                    }
                }
            }
        }
        let mut out = vec![0u64; slots * phi];
        for s in 0..slots {
            let src = &acc[s * width..(s + 1) * width];
            let dst = &mut out[s * phi..(s + 1) * phi];
            for (j, &c) in src.iter().enumerate() {
                if c == 0 {
                    continue;
                }
                if j < phi {
                    dst[j] = (dst[j] + c) % p;
                } else {
                    for &(t, k) in &data.pow[j % m as usize] {
                        let kk = if k >= 0 { k as u64 } else { p - (-k) as u64 };
                        dst[t] = (dst[t] + mulmod(c, kk, p)) % p;
                    }
                }
            }
        }
        per_prime.push(out);
    }

    let den = BigRational::from_integer(&va.den * &vb.den);
    let modulus: BigInt = ps[..nprimes].iter().map(|&p| BigInt::from(p)).product();
    let half = &modulus >> 1;
    let mut terms = Vec::new();
    for s in 0..slots {
        let mut coords: Option<Vec<BigRational>> = None;
        for i in 0..phi {
            let idx = s * phi + i;
            if per_prime.iter().all(|v| v[idx] == 0) {
                continue;
            }
            let x = crt(&per_prime, idx, &ps[..nprimes], &modulus, &half);
            let c = coords.get_or_insert_with(|| vec![BigRational::zero(); phi]);
            c[i] = BigRational::from_integer(x) / &den;
        }
        if let Some(c) = coords {
            terms.push((emin + s as i64, CycRational::from_coords(m, c)));
        }
    }
    PuiseuxSeries::raw(l, m, terms, prec)
}

fn crt(per_prime: &[Vec<u64>], idx: usize, ps: &[u64], modulus: &BigInt, half: &BigInt) -> BigInt {
    if ps.len() == 1 {
        let p = ps[0];
        let r = per_prime[0][idx];
        return if r > p / 2 { BigInt::from(r as i128 - p as i128) } else { BigInt::from(r) };
    }
    // Garner's algorithm.
    let mut x = BigInt::from(per_prime[0][idx]);
    let mut mprod = BigInt::from(ps[0]);
    for (k, &p) in ps.iter().enumerate().skip(1) {
        let r = per_prime[k][idx];
        let xm = residue(&x, p);
        let diff = (r + p - xm) % p;
        let inv = inv_mod(residue(&mprod, p), p);
        let t = mulmod(diff, inv, p);
        x += &mprod * BigInt::from(t);
        mprod *= BigInt::from(p);
    }
    debug_assert_eq!(&mprod, modulus);
    if &x > half {
        x -= modulus;
    }
    if x.sign() == Sign::NoSign {
        BigInt::zero()
    } else {
        x
    }
}
