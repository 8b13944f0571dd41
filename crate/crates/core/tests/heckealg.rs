use num_bigint::BigInt;
use num_rational::BigRational;
use proptest::prelude::*;
use quasihecke::exactq::{CycRational, Q};
use quasihecke::forms;
use quasihecke::heckealg::*;
use quasihecke::lattice::{hecke_coset_reps, CongruenceLevel, Mat2Q, Mat2Z};
use quasihecke::quasimod::QuasiModularForm;
use quasihecke::suites::gen;
use quasihecke::Error;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn qr(n: i64, d: i64) -> BigRational {
    BigRational::new(n.into(), d.into())
}

fn prec() -> Q {
    Q::from_integer(6)
}

fn cl(n: u64) -> CongruenceLevel {
    CongruenceLevel::new(n)
}

fn same(a: &TwistedHeckeOp, b: &TwistedHeckeOp) -> bool {
    a.agrees(b, prec()).unwrap()
}

/// Δ = q·Π(1 − qⁿ)²⁴ by direct multiplication.
fn delta_oracle(top: usize) -> Vec<BigInt> {
    let mut c = vec![BigInt::from(0); top];
    c[1] = BigInt::from(1);
    for n in 1..top {
        for _ in 0..24 {
            for i in (n..top).rev() {
                let t = c[i - n].clone();
                c[i] -= t;
            }
        }
    }
    c
}

#[test]
fn zero_and_unit() {
    let z = TwistedHeckeOp::zero(1, Mat2Z::identity(), 0);
    assert!(z.evaluate(&Mat2Q::from_ints(1, 1, 0, 2)).unwrap().is_zero());
    let e = TwistedHeckeOp::unit(1);
    assert_eq!(tn_op(1, &cl(1)).unwrap(), e);
    let v = e.evaluate(&Mat2Q::from_ints(2, 1, 1, 1)).unwrap();
    assert_eq!(v, QuasiModularForm::one());
    assert!(e.evaluate(&Mat2Q::from_ints(1, 0, 0, 2)).unwrap().is_zero());
}

#[test]
fn hecke_supports() {
    for (n, count) in [(2u64, 3usize), (3, 4), (4, 7)] {
        let t = tn_op(n, &cl(1)).unwrap();
        assert_eq!(t.table().unwrap().len(), count);
        assert_eq!(hecke_coset_reps(n, &cl(1)).unwrap().len(), count);
    }
    let t2 = tn_op(2, &cl(1)).unwrap();
    assert_eq!(t2.evaluate(&Mat2Q::from_ints(1, 1, 0, 2)).unwrap(), QuasiModularForm::one());
    assert!(t2.evaluate(&Mat2Q::from_ints(1, 0, 0, 3)).unwrap().is_zero());
    let t2_2 = tn_op(2, &cl(2)).unwrap();
    assert_eq!(t2_2.table().unwrap().len(), 18);
    // round trip through make_op
    let assignments: Vec<_> = t2_2.sorted_table().unwrap().into_iter().map(|(_, m, v)| (m, v)).collect();
    let back = make_op(2, Mat2Z::identity(), &assignments, &Validation::default()).unwrap();
    assert_eq!(back, t2_2);
}

#[test]
fn make_op_validates_stabilizers() {
    let v = Validation::default();
    let g2_op = make_op(1, Mat2Z::identity(), &[(Mat2Q::from_ints(1, 0, 0, 2), QuasiModularForm::g2())], &v).unwrap();
    assert_eq!(g2_op.table().unwrap().len(), 3);
    let level3 = QuasiModularForm::modular(3, forms::eis_n(4, 0, 1, 3).unwrap());
    let bad = make_op(1, Mat2Z::identity(), &[(Mat2Q::identity(), level3)], &v);
    assert!(matches!(bad, Err(Error::CovarianceViolation(_))));
    let clash = make_op(
        1,
        Mat2Z::identity(),
        &[
            (Mat2Q::from_ints(1, 0, 0, 2), QuasiModularForm::one()),
            (Mat2Q::from_ints(2, 0, 0, 1), QuasiModularForm::one().scale_q(&qr(2, 1))),
        ],
        &v,
    );
    assert!(matches!(clash, Err(Error::CovarianceViolation(_))));
    let deep = embed_modular(1, &[(Mat2Q::identity(), QuasiModularForm::g2())], &v);
    assert!(matches!(deep, Err(Error::DepthNotZero)));
}

#[test]
fn evaluation_is_left_invariant_and_covariant() {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let level = cl(2);
    let f = gen::random_op(&mut rng, 2, 2);
    for (_, m, v) in f.sorted_table().unwrap() {
        for _ in 0..4 {
            let g = level.random_element(&mut rng, 3);
            assert_eq!(f.evaluate(&g.to_q().mul(&m)).unwrap(), v);
            let right = f.evaluate(&m.mul(&g.to_q())).unwrap();
            assert!(right.agrees(&v.dslash(&g.to_q()).unwrap(), prec()).unwrap());
        }
    }
    f.check_stabilizers(&Validation::default()).unwrap();
}

#[test]
fn unit_and_embedding() {
    let mut rng = ChaCha8Rng::seed_from_u64(9);
    for level in [1, 2] {
        let e = TwistedHeckeOp::unit(level);
        let f = gen::random_op(&mut rng, level, 2);
        assert!(same(&star(&f, &e).unwrap(), &f));
        assert!(same(&star(&e, &f).unwrap(), &f));
        assert!(same(&star_r(&e, &f).unwrap(), &f));
    }
    let t2 = tn_op(2, &cl(1)).unwrap();
    let t3 = tn_op(3, &cl(1)).unwrap();
    let t6 = tn_op(6, &cl(1)).unwrap();
    let p = star(&t2, &t3).unwrap();
    assert!(same(&p, &t6));
    assert!(p.support().values().all(|v| v.depth() == 0));
    let e2 =
        embed_modular(1, &[(Mat2Q::from_ints(1, 0, 0, 2), QuasiModularForm::one())], &Validation::default()).unwrap();
    assert_eq!(e2, t2);
}

#[test]
fn star_r_degenerates_at_level_one() {
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    let f = gen::random_op(&mut rng, 1, 2);
    let g = gen::random_op(&mut rng, 1, 2);
    let fr = star_r(&f, &g).unwrap();
    let f1 = f.evaluate(&Mat2Q::identity()).unwrap();
    for (k, v) in g.support() {
        let want = f1.mul(v);
        assert!(fr.value_at(k).unwrap().agrees(&want, prec()).unwrap());
    }
    let z = TwistedHeckeOp::zero(1, Mat2Z::identity(), 0);
    assert!(star_r(&z, &g).unwrap().is_zero());
}

/// Classical (T_n f)(q) coefficients: Σ_{d|(m,n)} d^{k−1}·a(mn/d²).
fn classical_hecke(a: &[BigInt], n: usize, k: u32, top: usize) -> Vec<BigInt> {
    (0..top)
        .map(|m| {
            let mut s = BigInt::from(0);
            for d in 1..=n {
                if n.is_multiple_of(d) && m % d == 0 {
                    s += BigInt::from(d).pow(k - 1) * &a[m * n / (d * d)];
                }
            }
            s
        })
        .collect()
}

#[test]
fn hecke_action_on_delta() {
    let delta = QuasiModularForm::modular(1, forms::delta());
    let top = 8usize;
    let oracle = delta_oracle(top * 6 + 1);
    assert_eq!(oracle[2], BigInt::from(-24));
    assert_eq!(oracle[3], BigInt::from(252));
    assert_eq!(oracle[6], BigInt::from(-6048));
    for n in [2usize, 3, 6] {
        let t = tn_op(n as u64, &cl(1)).unwrap();
        let r = act_on_form(&t, &delta).unwrap();
        // n^{k/2−1} undoes the determinant normalization of the slash
        let s =
            r.expand(Q::from_integer(top as i64)).unwrap().scale_q(&BigRational::from_integer(BigInt::from(n).pow(5)));
        let want = classical_hecke(&oracle, n, 12, top);
        for m in 0..top {
            let c = s.coeff(Q::from_integer(m as i64));
            assert_eq!(c, CycRational::from_rational(BigRational::from_integer(want[m].clone())), "n={} m={}", n, m);
        }
        assert_eq!(want[1], oracle[n]);
    }
    let g4 = QuasiModularForm::modular(1, forms::g4());
    assert_eq!(act_on_form(&TwistedHeckeOp::unit(1), &g4).unwrap(), g4);
}

#[test]
fn lifted_operator_examples() {
    let e = TwistedHeckeOp::unit(1);
    assert!(lift_delta(1, &e).unwrap().is_zero());
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    let f = gen::random_op(&mut rng, 2, 1);
    assert!(lift_phi(2, &f).unwrap().is_zero());
    assert!(lift_y(&tn_op(2, &cl(1)).unwrap()).is_zero());
    let t2 = tn_op(2, &cl(1)).unwrap();
    assert!(!lift_delta(1, &t2).unwrap().is_zero());
}

#[test]
fn json_round_trip() {
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    let f = lift_x(&gen::random_op(&mut rng, 2, 2));
    let back = TwistedHeckeOp::from_json(&f.to_json()).unwrap();
    assert_eq!(back, f);
}

#[test]
fn products_are_covariant() {
    let mut rng = ChaCha8Rng::seed_from_u64(21);
    let level = cl(2);
    let f = gen::random_op(&mut rng, 2, 2);
    let g = gen::random_op(&mut rng, 2, 2);
    let fg = star(&f, &g).unwrap();
    let fgr = star_r(&f, &g).unwrap();
    for (k, _) in fg.support().iter().take(4) {
        let m = k.reconstruct();
        for _ in 0..2 {
            let gam = level.random_element(&mut rng, 3).to_q();
            let direct = star_value(&f, &g, &m.mul(&gam)).unwrap();
            assert!(direct.agrees(&fg.evaluate(&m.mul(&gam)).unwrap(), prec()).unwrap());
        }
    }
    for (k, _) in fgr.support().iter().take(4) {
        let m = k.reconstruct();
        let gam = level.random_element(&mut rng, 3).to_q();
        let direct = star_r_value(&f, &g, &m.mul(&gam)).unwrap();
        assert!(direct.agrees(&fgr.evaluate(&m.mul(&gam)).unwrap(), prec()).unwrap());
    }
}

fn arb_op(level: u64, max_det: u64) -> impl Strategy<Value = TwistedHeckeOp> {
    any::<u64>().prop_map(move |s| gen::random_op(&mut ChaCha8Rng::seed_from_u64(s), level, max_det))
}

fn lifts_of(k: u32, l: u32) -> Vec<(String, Box<dyn Fn(&TwistedHeckeOp) -> TwistedHeckeOp>)> {
    vec![
        ("D".into(), Box::new(lift_d)),
        (format!("T{}^{}", k, l), Box::new(move |f| lift_t(k, l, f))),
        ("X".into(), Box::new(lift_x)),
        ("Y".into(), Box::new(lift_y)),
        ("E".into(), Box::new(lift_e)),
    ]
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(4))]

    #[test]
    fn star_is_associative(f in arb_op(1, 2), g in arb_op(1, 2), h in arb_op(1, 2)) {
        let l = star(&star(&f, &g).unwrap(), &h).unwrap();
        let r = star(&f, &star(&g, &h).unwrap()).unwrap();
        prop_assert!(same(&l, &r));
    }

    #[test]
    fn star_r_is_associative(f in arb_op(2, 2), g in arb_op(2, 2), h in arb_op(2, 1)) {
        let l = star_r(&star_r(&f, &g).unwrap(), &h).unwrap();
        let r = star_r(&f, &star_r(&g, &h).unwrap()).unwrap();
        prop_assert!(same(&l, &r));
    }

    #[test]
    fn module_law(f in arb_op(1, 2), g in arb_op(1, 2), s in any::<u64>()) {
        let form = gen::random_qmf(&mut ChaCha8Rng::seed_from_u64(s), 8, 2);
        let l = act_on_form(&star(&f, &g).unwrap(), &form).unwrap();
        let r = act_on_form(&f, &act_on_form(&g, &form).unwrap()).unwrap();
        prop_assert!(l.agrees(&r, prec()).unwrap());
    }

    #[test]
    fn derivation_laws_for_star(f in arb_op(1, 2), g in arb_op(1, 2), k in 1u32..4, l in 0u32..3, m in 1u32..3) {
        let fg = star(&f, &g).unwrap();
        let leib = |op: &dyn Fn(&TwistedHeckeOp) -> TwistedHeckeOp| {
            star(&op(&f), &g).unwrap().add(&star(&f, &op(&g)).unwrap())
        };
        // D with the φ^(1)·T₁⁰ correction
        let rhs = leib(&lift_d).sub(&star(&lift_phi(1, &f).unwrap(), &lift_t(1, 0, &g)).unwrap());
        prop_assert!(same(&lift_d(&fg), &rhs));
        // T_k^l with the (24/5)·φ^(l)·T_k⁰ correction
        let mut rhs = leib(&|x| lift_t(k, l, x));
        if l > 0 {
            let c = star(&lift_phi(l, &f).unwrap(), &lift_t(k, 0, &g)).unwrap();
            rhs = rhs.add(&c.scale_q(&qr(24, 5)));
        }
        prop_assert!(same(&lift_t(k, l, &fg), &rhs));
        // X with the δ₁·Y correction
        let rhs = leib(&lift_x).add(&star(&lift_delta(1, &f).unwrap(), &lift_y(&g)).unwrap());
        prop_assert!(same(&lift_x(&fg), &rhs));
        // plain derivations
        prop_assert!(same(&lift_delta(1, &fg).unwrap(), &leib(&|x| lift_delta(1, x).unwrap())));
        prop_assert!(same(&lift_w(k, &fg), &leib(&|x| lift_w(k, x))));
        prop_assert!(same(&lift_phi(m, &fg).unwrap(), &leib(&|x| lift_phi(m, x).unwrap())));
        prop_assert!(same(&lift_y(&fg), &leib(&lift_y)));
    }

    #[test]
    fn plain_derivations_for_star_r(f in arb_op(2, 2), g in arb_op(2, 2), k in 1u32..4, l in 0u32..3) {
        let fg = star_r(&f, &g).unwrap();
        for (name, op) in lifts_of(k, l) {
            if name == "E" {
                continue;
            }
            let rhs = star_r(&op(&f), &g).unwrap().add(&star_r(&f, &op(&g)).unwrap());
            prop_assert!(same(&op(&fg), &rhs), "{}", name);
        }
        let rhs = star_r(&lift_phi(1, &f).unwrap(), &g).unwrap().add(&star_r(&f, &lift_phi(1, &g).unwrap()).unwrap());
        prop_assert!(same(&lift_phi(1, &fg).unwrap(), &rhs));
    }

    #[test]
    fn lifted_commutators(f in arb_op(2, 2), k in 1u32..5, k2 in 1u32..5, l in 0u32..3, l2 in 0u32..3, m in 1u32..4, n in 1u32..3) {
        let f = lift_d(&lift_x(&f)).add(&lift_t(3, 0, &lift_x(&f)));
        let com = |a: &dyn Fn(&TwistedHeckeOp) -> TwistedHeckeOp, b: &dyn Fn(&TwistedHeckeOp) -> TwistedHeckeOp| {
            a(&b(&f)).sub(&b(&a(&f)))
        };
        let phi = |x: &TwistedHeckeOp| lift_phi(m, x).unwrap();
        let t = |x: &TwistedHeckeOp| lift_t(k, l, x);
        let zero = |w: i64| TwistedHeckeOp::zero(2, Mat2Z::identity(), w);
        prop_assert!(same(&com(&lift_e, &t), &zero(0)));
        prop_assert!(same(&com(&lift_e, &lift_d), &zero(0)));
        prop_assert!(same(&com(&lift_e, &phi), &zero(0)));
        prop_assert!(same(&com(&lift_d, &phi), &zero(0)));
        prop_assert!(same(&com(&|x| lift_w(k, x), &phi), &zero(0)));
        prop_assert!(same(&com(&phi, &|x| lift_phi(m + 1, x).unwrap()), &zero(0)));
        // [T_k^l, D]
        let mut want = lift_t(k + 1, l, &f).scale_q(&qr(-(k as i64 - 3), 2));
        if k > 1 {
            want = want.add(&lift_t(k - 1, l + 1, &f).scale_q(&qr(5 * (k as i64 - 1), 24)));
        }
        prop_assert!(same(&com(&t, &lift_d), &want));
        // [T_k^l, T_k'^l']
        let got = com(&t, &|x| lift_t(k2, l2, x));
        let want = if k + k2 >= 3 {
            lift_t(k + k2 - 2, l + l2, &f).scale_q(&qr(k2 as i64 - k as i64, 1))
        } else {
            zero(0)
        };
        prop_assert!(same(&got, &want));
        // ℒ₁
        let d = |j: u32| move |x: &TwistedHeckeOp| lift_delta(j, x).unwrap();
        prop_assert!(same(&com(&lift_y, &lift_x), &lift_x(&f)));
        prop_assert!(same(&com(&lift_x, &d(n)), &d(n + 1)(&f)));
        prop_assert!(same(&com(&lift_y, &d(n)), &d(n)(&f).scale_q(&qr(n as i64, 1))));
        prop_assert!(same(&com(&d(n), &d(n + 1)), &zero(0)));
    }
}

#[test]
fn derivation_corrections_are_needed() {
    // at level 1 the det-2 support makes ν and μ nonzero
    let f = tn_op(2, &cl(1)).unwrap();
    let g = make_op(
        1,
        Mat2Z::identity(),
        &[(Mat2Q::from_ints(1, 0, 0, 2), QuasiModularForm::g2())],
        &Validation::default(),
    )
    .unwrap();
    let fg = star(&f, &g).unwrap();
    let plain = star(&lift_d(&f), &g).unwrap().add(&star(&f, &lift_d(&g)).unwrap());
    assert!(!same(&lift_d(&fg), &plain));
    let g4 = lift_e(&g);
    let fg = star(&f, &g4).unwrap();
    let plain = star(&lift_x(&f), &g4).unwrap().add(&star(&f, &lift_x(&g4)).unwrap());
    assert!(!same(&lift_x(&fg), &plain));
}
