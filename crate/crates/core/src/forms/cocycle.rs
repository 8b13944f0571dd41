//! The cocycles μ_α (weight 2) and ν_α^(m) (weight 4m).

use super::expr::FormExpr;
use super::slash::mu_of;
use crate::exactq::{PuiseuxSeries, Q};
use crate::lattice::Mat2Q;
use crate::{Error, Result};
use num_rational::BigRational;
use num_traits::Signed;

fn check_det(alpha: &Mat2Q) -> Result<()> {
    if !alpha.det().is_positive() {
        return Err(Error::NotPositiveDet);
    }
    Ok(())
}

/// μ_α = (1/6)·θ log(Δ|α / Δ), as a weight-2 expression.
pub fn mu_form(alpha: &Mat2Q) -> Result<FormExpr> {
    check_det(alpha)?;
    mu_of(alpha)
}

pub fn mu(alpha: &Mat2Q, prec: Q) -> Result<PuiseuxSeries> {
    mu_form(alpha)?.expand(prec)
}

/// ν_α^(m) = −(5/24)(G₄^m|α − G₄^m).
pub fn nu_form(alpha: &Mat2Q, m: u32) -> Result<FormExpr> {
    check_det(alpha)?;
    let g = super::g4().pow(m);
    let diff = g.slash(alpha)?.sub(&g);
    Ok(diff.scale_q(&BigRational::new((-5).into(), 24.into())))
}

pub fn nu(alpha: &Mat2Q, m: u32, prec: Q) -> Result<PuiseuxSeries> {
    nu_form(alpha, m)?.expand(prec)
}
