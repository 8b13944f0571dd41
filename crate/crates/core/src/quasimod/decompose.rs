use super::QuasiModularForm;
use crate::exactq::linalg::{rank, solve};
use crate::exactq::{CycRational, Prec, PuiseuxSeries, Q};
use crate::forms::{self, FormExpr};
use crate::{Error, Result};
use num_rational::BigRational;
use num_traits::Zero;

/// Monomials G₄^a·G₆^b of weight w.
fn monomials(w: i64) -> Vec<(u32, u32)> {
    let mut out = Vec::new();
    if w < 0 || w % 2 != 0 {
        return out;
    }
    for b in 0..=(w / 6) {
        let rest = w - 6 * b;
        if rest % 4 == 0 {
            out.push(((rest / 4) as u32, b as u32));
        }
    }
    out
}

/// Writes a level-1 series of weight k as Σ_{i≤s} aᵢG₂ⁱ with aᵢ ∈ ℚ[G₄, G₆].
pub fn decompose(series: &PuiseuxSeries, k: i64, s: usize) -> Result<QuasiModularForm> {
    let mut unknowns: Vec<(usize, u32, u32)> = Vec::new();
    for i in 0..=s {
        for (a, b) in monomials(k - 2 * i as i64) {
            unknowns.push((i, a, b));
        }
    }
    if series.terms().any(|(e, c)| !e.is_integer() || e < Q::from_integer(0) || c.as_rational().is_none()) {
        return Err(Error::NotDecomposable);
    }
    if unknowns.is_empty() {
        return if series.is_zero() { Ok(QuasiModularForm::zero(1, k)) } else { Err(Error::NotDecomposable) };
    }
    let top = match series.prec() {
        Prec::Exact => {
            return Err(Error::InsufficientPrecision {
                needed: format!("a truncated series with at least {} terms", unknowns.len()),
                available: "exact polynomial".into(),
            })
        }
        Prec::Upto(p) => p.ceil().to_integer(),
    };
    let rows = top.max(0) as usize;
    let p = Q::from_integer(top);
    let g2 = forms::g2();
    let cols: Vec<PuiseuxSeries> = unknowns
        .iter()
        .map(|&(i, a, b)| FormExpr::product(vec![forms::g4().pow(a), forms::g6().pow(b), g2.pow(i as u32)]).expand(p))
        .collect::<Result<_>>()?;
    let rat = |c: CycRational| c.as_rational().cloned().unwrap_or_else(BigRational::zero);
    let matrix: Vec<Vec<BigRational>> =
        (0..rows).map(|n| cols.iter().map(|c| rat(c.coeff(Q::from_integer(n as i64)))).collect()).collect();
    let rhs: Vec<BigRational> = (0..rows).map(|n| rat(series.coeff(Q::from_integer(n as i64)))).collect();
    if rank(&matrix) < unknowns.len() {
        return Err(Error::InsufficientPrecision {
            needed: format!("enough coefficients to separate {} monomials", unknowns.len()),
            available: series.prec().to_string(),
        });
    }
    let x = solve(&matrix, &rhs).ok_or(Error::NotDecomposable)?;
    let mut coeffs: Vec<Vec<FormExpr>> = vec![Vec::new(); s + 1];
    for (&(i, a, b), c) in unknowns.iter().zip(x) {
        if !c.is_zero() {
            let m = FormExpr::product(vec![forms::g4().pow(a), forms::g6().pow(b)]);
            coeffs[i].push(m.scale_q(&c));
        }
    }
    let coeffs = coeffs.into_iter().enumerate().map(|(i, t)| FormExpr::sum(k - 2 * i as i64, t)).collect();
    QuasiModularForm::new(1, k, coeffs)
}
