//! The normalized weight-k slash f|α = det(α)^{k/2}(cz+d)^{−k}f(αz), pushed to the leaves.

use super::expr::{FormExpr, Node};
use crate::lattice::{hnf_decompose, Mat2Q, Mat2Z, Upper};
use crate::{Error, Result};
use num_rational::BigRational;
use std::collections::HashMap;
use std::sync::{Mutex, OnceLock};

/// Result of a slash; `exact` is false when a stored expansion had to be substituted.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SlashResult {
    pub expr: FormExpr,
    pub exact: bool,
}

pub fn slash(f: &FormExpr, alpha: &Mat2Q) -> Result<SlashResult> {
    let mut exact = true;
    let expr = slash_rec(f, alpha, &mut exact)?;
    Ok(SlashResult { expr, exact })
}

type SlashCache = Mutex<HashMap<(FormExpr, Mat2Q), FormExpr>>;

fn cache() -> &'static SlashCache {
    static CACHE: OnceLock<SlashCache> = OnceLock::new();
    CACHE.get_or_init(|| Mutex::new(HashMap::new()))
}

impl FormExpr {
    /// f|α in the weight of f.
    pub fn slash(&self, alpha: &Mat2Q) -> Result<FormExpr> {
        if self.weight() % 2 != 0 {
            return Err(Error::OddWeight(self.weight()));
        }
        let key = (self.clone(), alpha.clone());
        if let Some(r) = cache().lock().unwrap().get(&key) {
            return Ok(r.clone());
        }
        let r = slash(self, alpha)?.expr;
        cache().lock().unwrap().insert(key, r.clone());
        Ok(r)
    }
}

fn decompose(m: &Mat2Q) -> Result<(Mat2Z, Upper)> {
    let (u, t) = hnf_decompose(m)?;
    Ok((u, t.hnf))
}

fn upper_q(a: i64, b: i64, d: i64) -> Mat2Q {
    Mat2Q::from_ints(a, b, 0, d)
}

/// μ_M as an expression; depends only on the triangular part of M.
pub(crate) fn mu_of(m: &Mat2Q) -> Result<FormExpr> {
    let (_, h) = decompose(m)?;
    Ok(FormExpr::mu_node(h.a, h.b, h.d))
}

fn slash_rec(f: &FormExpr, alpha: &Mat2Q, exact: &mut bool) -> Result<FormExpr> {
    if f.weight() % 2 != 0 && !f.is_zero() {
        return Err(Error::OddWeight(f.weight()));
    }
    Ok(match f.node() {
        Node::Const(_) => f.clone(),
        Node::Sum { weight, terms } => {
            let ts = terms.iter().map(|t| slash_rec(t, alpha, exact)).collect::<Result<Vec<_>>>()?;
            FormExpr::sum(*weight, ts)
        }
        Node::Product(fs) => {
            FormExpr::product(fs.iter().map(|t| slash_rec(t, alpha, exact)).collect::<Result<Vec<_>>>()?)
        }
        Node::Scale(c, g) => slash_rec(g, alpha, exact)?.scale(c),
        Node::Slash { atom, a, b, d } => {
            let m = upper_q(*a, *b, *d).mul(alpha);
            let (u, h) = decompose(&m)?;
            leaf_slash(atom, u, h, exact)?
        }
        Node::Mu { a, b, d } => {
            // μ_{Tα} = μ_T|α + μ_α
            let m = upper_q(*a, *b, *d).mul(alpha);
            mu_of(&m)?.sub(&mu_of(alpha)?)
        }
        Node::Serre(g) => {
            // X(g)|α = X(g|α) − (k/2)·μ_α·(g|α)
            let k = g.weight();
            let gs = slash_rec(g, alpha, exact)?;
            let corr = mu_of(alpha)?.mul(&gs).scale_q(&BigRational::new((k / 2).into(), 1.into()));
            gs.serre().sub(&corr)
        }
        _ => {
            let (u, h) = decompose(alpha)?;
            leaf_slash(f, u, h, exact)?
        }
    })
}

/// atom|(U·H) for a leaf atom, U ∈ SL₂(ℤ), H canonical.
fn leaf_slash(atom: &FormExpr, u: Mat2Z, h: Upper, exact: &mut bool) -> Result<FormExpr> {
    let Upper { a, b, d } = h;
    match atom.node() {
        Node::Eis1(2) => {
            if u.c != 0 {
                return Err(Error::UnknownTransformation(format!("G2 is not modular under {}", u)));
            }
            let t = u.a * u.b;
            Ok(FormExpr::slash_node(atom.clone(), a, (b + t * d).rem_euclid(d), d))
        }
        Node::Eis1(_) | Node::Delta | Node::DeltaInverse => Ok(FormExpr::slash_node(atom.clone(), a, b, d)),
        Node::EisN { k, c, d: dd, n } => {
            let ni = *n as i64;
            let (c0, d0) = (*c as i64, *dd as i64);
            let c1 = (c0 * u.a + d0 * u.c).rem_euclid(ni) as u64;
            let d1 = (c0 * u.b + d0 * u.d).rem_euclid(ni) as u64;
            let e = FormExpr::from_node(Node::EisN { k: *k, c: c1, d: d1, n: *n });
            Ok(FormExpr::slash_node(e, a, b, d))
        }
        Node::Expansion { level, .. } => {
            let l = *level as i64;
            let um = u.reduce_mod(l);
            let s: i64 = if l == 1 || um.a == 1 % l {
                1
            } else if um.a == (l - 1) {
                -1
            } else {
                0
            };
            let ok = s != 0 && um.c == 0 && um.d == s.rem_euclid(l);
            if !ok {
                return Err(Error::UnknownTransformation(format!("expansion of level {} under {}", level, u)));
            }
            *exact = false;
            let t = s * u.b;
            Ok(FormExpr::slash_node(atom.clone(), a, (b + t * d).rem_euclid(d * l), d))
        }
        _ => unreachable!("leaf_slash on a non-leaf node"),
    }
}
