use num_rational::BigRational;
use proptest::prelude::*;
use quasihecke::exactq::{CycRational, Prec, PuiseuxSeries, Q};
use quasihecke::forms::{self, FormExpr};
use quasihecke::lattice::Mat2Q;
use quasihecke::quasimod::{decompose, op_d, op_e, op_t, op_w, op_x, op_y, QuasiModularForm};
use quasihecke::suites::gen;
use quasihecke::Error;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn qr(n: i64, d: i64) -> BigRational {
    BigRational::new(n.into(), d.into())
}

fn p() -> Q {
    Q::from_integer(10)
}

fn modular(f: FormExpr) -> QuasiModularForm {
    QuasiModularForm::modular(1, f)
}

fn g2() -> QuasiModularForm {
    QuasiModularForm::g2()
}

fn same(a: &QuasiModularForm, b: &QuasiModularForm) -> bool {
    a.agrees(b, p()).unwrap() && a.expand(p()).unwrap().agrees_with(&b.expand(p()).unwrap())
}

#[test]
fn g2_derivative_identity_to_q40() {
    // θG₂ = (5/6)G₄ − 2G₂², computed from raw σ₁ coefficients
    let top = 41;
    let mut t = vec![(Q::from_integer(0), CycRational::from_rational(qr(-1, 24)))];
    for n in 1..top {
        let s: i64 = (1..=n).filter(|d| n % d == 0).sum();
        t.push((Q::from_integer(n), CycRational::from_int(s)));
    }
    let g2s = PuiseuxSeries::from_terms(t, Prec::upto(top));
    let lhs = g2s.theta();
    let rhs = forms::g4().expand_to(top).unwrap().scale_q(&qr(5, 6)).sub(&g2s.mul(&g2s).scale_q(&qr(2, 1)));
    assert!(lhs.agrees_to(&rhs, Prec::upto(top)).unwrap());
}

#[test]
fn product_example() {
    let f = modular(forms::g4()).add(&g2().pow(2));
    let prod = f.mul(&g2());
    assert_eq!(prod.weight(), 6);
    assert_eq!(prod.depth(), 3);
    assert!(prod.coeff(0).is_zero());
    assert_eq!(prod.coeff(1), forms::g4());
    assert!(prod.coeff(2).is_zero());
    assert_eq!(prod.coeff(3), FormExpr::one());
    let sq = g2().mul(&g2());
    assert_eq!((sq.weight(), sq.depth()), (4, 2));
}

#[test]
fn decompose_examples() {
    let sq = decompose(&g2().pow(2).expand(p()).unwrap(), 4, 2).unwrap();
    assert!(same(&sq, &g2().pow(2)));
    assert_eq!(sq.depth(), 2);
    let g4 = decompose(&forms::g4().expand(p()).unwrap(), 4, 0).unwrap();
    assert!(same(&g4, &modular(forms::g4())));
    // θG₂ = (5/6)G₄ − 2G₂²
    let th = forms::g2().expand(p()).unwrap().theta();
    let d = decompose(&th, 4, 2).unwrap();
    let want = modular(forms::g4().scale_q(&qr(5, 6))).sub(&g2().pow(2).scale_q(&qr(2, 1)));
    assert!(same(&d, &want));
    // perturbed G₄ is rejected
    let bad =
        forms::g4().expand(p()).unwrap().add(&PuiseuxSeries::monomial(CycRational::from_int(1), Q::from_integer(7)));
    assert!(matches!(decompose(&bad, 4, 2), Err(Error::NotDecomposable)));
    let short = forms::g6().expand_to(2).unwrap();
    assert!(matches!(decompose(&short, 12, 3), Err(Error::InsufficientPrecision { .. })));
}

#[test]
fn operator_examples() {
    let g4 = modular(forms::g4());
    assert!(op_d(&g4).is_zero());
    let d2 = op_d(&g2());
    let want = modular(forms::g4().scale_q(&qr(-5, 24))).add(&g2().pow(2).scale_q(&qr(1, 2)));
    assert!(same(&d2, &want));
    assert!(same(&op_d(&g2().pow(2)), &g2().mul(&d2).scale_q(&qr(2, 1))));
    assert!(op_w(3, &g4).is_zero());
    assert!(same(&op_w(1, &g2()), &QuasiModularForm::one()));
    assert!(same(&op_w(2, &g2()), &g2()));
    assert!(same(&op_t(3, 1, &g2()), &g2().pow(2).mul(&g4)));
    assert!(same(&op_y(&g4), &g4.scale_q(&qr(2, 1))));
    assert!(same(&op_x(&g4), &modular(forms::g6().scale_q(&qr(7, 10)))));
    assert!(op_x(&QuasiModularForm::one()).is_zero());
    assert!(same(&op_e(&g2()), &g2().mul(&g4)));
}

#[test]
fn d_matches_chain_rule_through_theta_g2() {
    // D(f) = −(1/4)·(∂f/∂G₂)·θG₂ on expansions
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    for _ in 0..6 {
        let f = gen::random_qmf(&mut rng, 12, 3);
        let g2s = forms::g2().expand(p()).unwrap();
        let mut partial = PuiseuxSeries::zero(Prec::Upto(p()));
        for (i, a) in f.coeffs().iter().enumerate().skip(1) {
            let t = a.expand(p()).unwrap().mul(&g2s.pow(i as u32 - 1)).scale_q(&qr(i as i64, 1));
            partial = partial.add(&t);
        }
        let want = partial.mul(&g2s.theta()).scale_q(&qr(-1, 4));
        assert!(op_d(&f).expand(p()).unwrap().agrees_with(&want));
    }
}

fn commutator(
    a: &dyn Fn(&QuasiModularForm) -> QuasiModularForm,
    b: &dyn Fn(&QuasiModularForm) -> QuasiModularForm,
    f: &QuasiModularForm,
) -> QuasiModularForm {
    a(&b(f)).sub(&b(&a(f)))
}

fn nu_q(alpha: &Mat2Q, m: u32) -> FormExpr {
    forms::nu_form(alpha, m).unwrap()
}

fn arb_alpha() -> impl Strategy<Value = Mat2Q> {
    any::<u64>().prop_map(|s| {
        let mut rng = ChaCha8Rng::seed_from_u64(s);
        if s % 3 == 0 {
            gen::random_sl2(&mut rng).to_q()
        } else if s % 3 == 1 {
            gen::random_upper(&mut rng)
        } else {
            gen::random_gl2(&mut rng)
        }
    })
}

fn arb_qmf() -> impl Strategy<Value = QuasiModularForm> {
    any::<u64>().prop_map(|s| gen::random_qmf(&mut ChaCha8Rng::seed_from_u64(s), 12, 3))
}

fn small() -> Q {
    Q::from_integer(4)
}

fn close(a: &QuasiModularForm, b: &QuasiModularForm) -> bool {
    a.agrees(b, small()).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(16))]

    #[test]
    fn decompose_round_trip(f in arb_qmf()) {
        let s = f.expand(Q::from_integer(30)).unwrap();
        let back = decompose(&s, f.weight(), 3).unwrap();
        prop_assert!(back.agrees(&f, Q::from_integer(30)).unwrap());
    }

    #[test]
    fn operators_are_derivations(f in arb_qmf(), g in arb_qmf(), k in 1u32..4) {
        let fg = f.mul(&g);
        let ops: Vec<Box<dyn Fn(&QuasiModularForm) -> QuasiModularForm>> = vec![
            Box::new(op_d),
            Box::new(move |h| op_w(k, h)),
            Box::new(op_x),
            Box::new(op_y),
        ];
        for op in &ops {
            let lhs = op(&fg);
            let rhs = op(&f).mul(&g).add(&f.mul(&op(&g)));
            prop_assert!(same(&lhs, &rhs));
        }
    }

    #[test]
    fn dslash_is_multiplicative_and_an_action(f in arb_qmf(), g in arb_qmf(), a in arb_alpha(), b in arb_alpha()) {
        let lhs = f.mul(&g).dslash(&a).unwrap();
        let rhs = f.dslash(&a).unwrap().mul(&g.dslash(&a).unwrap());
        prop_assert!(close(&lhs, &rhs));
        let l2 = f.dslash(&a).unwrap().dslash(&b).unwrap();
        let r2 = f.dslash(&a.mul(&b)).unwrap();
        prop_assert!(close(&l2, &r2));
        prop_assert_eq!(f.dslash(&Mat2Q::identity()).unwrap(), f.clone());
    }

    #[test]
    fn operators_versus_dslash(f in arb_qmf(), a in arb_alpha(), k in 1u32..4, l in 0u32..3) {
        let fa = f.dslash(&a).unwrap();
        // D(f)‖α = D(f‖α) + ν_α^(1)·(W₁(f)‖α)
        let lhs = op_d(&f).dslash(&a).unwrap();
        let rhs = op_d(&fa).add(&op_w(1, &f).dslash(&a).unwrap().mul_form(&nu_q(&a, 1)));
        prop_assert!(close(&lhs, &rhs));
        // W_k(f)‖α = W_k(f‖α)
        prop_assert!(close(&op_w(k, &f).dslash(&a).unwrap(), &op_w(k, &fa)));
        // T_k^l(f)‖α = T_k^l(f‖α) − (24/5)·ν_α^(l)·(T_k⁰(f)‖α)
        let lhs = op_t(k, l, &f).dslash(&a).unwrap();
        let mut rhs = op_t(k, l, &fa);
        if l > 0 {
            let corr = op_t(k, 0, &f).dslash(&a).unwrap().mul_form(&nu_q(&a, l)).scale_q(&qr(24, 5));
            rhs = rhs.sub(&corr);
        }
        prop_assert!(close(&lhs, &rhs));
        // X(f)‖α = X(f‖α) + (μ_{α⁻¹}·Y(f))‖α, and Y commutes with ‖
        let mu_inv = forms::mu_form(&a.inv().unwrap()).unwrap();
        let lhs = op_x(&f).dslash(&a).unwrap();
        let rhs = op_x(&fa).add(&op_y(&f).mul_form(&mu_inv).dslash(&a).unwrap());
        prop_assert!(close(&lhs, &rhs));
        prop_assert!(close(&op_y(&fa), &op_y(&f).dslash(&a).unwrap()));
    }

    #[test]
    fn commutator_relations(f in arb_qmf(), k in 1u32..5, k2 in 1u32..5, l in 0u32..3, l2 in 0u32..3) {
        // [Y, X] = X
        prop_assert!(same(&commutator(&op_y, &op_x, &f), &op_x(&f)));
        // [W_k, D] = (5/24)(k−1)·E·W_{k−1} − (1/2)(k−3)·W_{k+1}
        let lhs = commutator(&|h| op_w(k, h), &op_d, &f);
        let mut rhs = op_w(k + 1, &f).scale_q(&qr(-(k as i64 - 3), 2));
        if k > 1 {
            rhs = rhs.add(&op_e(&op_w(k - 1, &f)).scale_q(&qr(5 * (k as i64 - 1), 24)));
        }
        prop_assert!(same(&lhs, &rhs));
        // [T_k^l, T_k'^l'] = (k' − k)·T_{k+k'−2}^{l+l'}
        let lhs = commutator(&|h| op_t(k, l, h), &|h| op_t(k2, l2, h), &f);
        let rhs = if k + k2 >= 3 {
            op_t(k + k2 - 2, l + l2, &f).scale_q(&qr(k2 as i64 - k as i64, 1))
        } else {
            QuasiModularForm::zero(1, lhs.weight())
        };
        prop_assert!(same(&lhs, &rhs));
    }
}

#[test]
fn t1_t3_commutator_is_twice_t2() {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    for _ in 0..5 {
        let f = gen::random_qmf(&mut rng, 12, 3);
        let c = commutator(&|h| op_t(1, 0, h), &|h| op_t(3, 0, h), &f);
        assert!(same(&c, &op_t(2, 0, &f).scale_q(&qr(2, 1))));
    }
}

#[test]
fn json_round_trip() {
    let f = modular(forms::g4()).add(&g2().pow(2)).mul(&g2());
    let back = QuasiModularForm::from_json(&f.to_json()).unwrap();
    assert_eq!(back, f);
}

#[test]
fn correction_terms_are_needed() {
    let a = Mat2Q::from_ints(1, 0, 0, 2);
    let f = g2().pow(2).add(&modular(forms::g4()));
    let lhs = op_d(&f).dslash(&a).unwrap();
    assert!(!close(&lhs, &op_d(&f.dslash(&a).unwrap())));
    let lhs = op_x(&f).dslash(&a).unwrap();
    assert!(!close(&lhs, &op_x(&f.dslash(&a).unwrap())));
    let lhs = op_t(2, 1, &f).dslash(&a).unwrap();
    assert!(!close(&lhs, &op_t(2, 1, &f.dslash(&a).unwrap())));
}
