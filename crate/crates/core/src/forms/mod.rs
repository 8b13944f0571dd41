//! Modular forms as slash-aware expression trees, and the cocycles μ and ν.
//!
//! Slashes use the determinant-normalized action, so scalar matrices act
//! trivially and only even weights are supported.

mod cocycle;
mod expand;
mod expr;
mod json;
mod slash;

pub use cocycle::{mu, mu_form, nu, nu_form};
pub use expand::{clear_expansion_cache, ramanujan_tau};
pub use expr::{FormExpr, Node, SeriesLeaf};
pub use slash::{slash, SlashResult};

use crate::{Error, Result};

/// G_K for even K ≥ 2 (K = 2 is only quasimodular).
pub fn eisenstein(k: i64) -> Result<FormExpr> {
    if k % 2 != 0 {
        return Err(Error::OddWeight(k));
    }
    if k < 2 {
        return Err(Error::Parse(format!("Eisenstein weight must be at least 2, got {}", k)));
    }
    Ok(FormExpr::from_node(Node::Eis1(k)))
}

pub fn g2() -> FormExpr {
    FormExpr::from_node(Node::Eis1(2))
}

pub fn g4() -> FormExpr {
    FormExpr::from_node(Node::Eis1(4))
}

pub fn g6() -> FormExpr {
    FormExpr::from_node(Node::Eis1(6))
}

/// Δ = q∏(1 − qⁿ)²⁴, without the (2π)¹² constant.
pub fn delta() -> FormExpr {
    FormExpr::from_node(Node::Delta)
}

pub fn delta_inverse() -> FormExpr {
    FormExpr::from_node(Node::DeltaInverse)
}

/// Level-N Eisenstein series of even weight k ≥ 4 attached to (c, d) mod N.
pub fn eis_n(k: i64, c: i64, d: i64, n: u64) -> Result<FormExpr> {
    if k % 2 != 0 {
        return Err(Error::OddWeight(k));
    }
    if k < 4 || n == 0 {
        return Err(Error::Parse(format!("EISN needs even k >= 4 and N >= 1, got k={} N={}", k, n)));
    }
    let ni = n as i64;
    Ok(FormExpr::from_node(Node::EisN { k, c: c.rem_euclid(ni) as u64, d: d.rem_euclid(ni) as u64, n }))
}
