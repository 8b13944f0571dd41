//! Verification suites and their reports.

pub mod gen;

use crate::exactq::{Prec, PuiseuxSeries, Q};
use crate::forms;
use crate::heckealg::{act_on_form, embed_modular, lift_e, star, star_r, tn_op, TwistedHeckeOp, Validation};
use crate::hopfsym::{
    interpret, pbw_words, verify_hopf_action, word_to_string, ActionTarget, CheckResult, Gen, HopfAlgebra,
    Interpretation, LiePresentation, OperatorAction, TowerAction, UEAElement,
};
use crate::lattice::{CongruenceLevel, Mat2Q, Mat2Z, DEFAULT_ORBIT_GUARD};
use crate::quasimod::{decompose, QuasiModularForm};
use crate::twisted::{
    graded_pair, graded_pair_value, op_xn, op_z, pair, pair_value, rho, right_act, right_act_value, tower_pair, x_tau,
};
use crate::{Error, Result};
use num_bigint::BigInt;
use num_rational::BigRational;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

pub const FORMAT_VERSION: u32 = 1;

pub const SUITES: [&str; 9] = [
    "qm-structure",
    "star-assoc",
    "embedding",
    "lie-L",
    "hopf-H",
    "hopf-H1",
    "twisted-pairing",
    "right-module",
    "graded-hZ",
];

pub const NEGATIVE_CONTROLS: [&str; 1] = ["drop-delta-term"];

/// The twists exercised by the twisted suites.
pub const SIGMAS: [Mat2Z; 3] = [Mat2Z::new(1, 0, 0, 1), Mat2Z::new(1, 1, 0, 1), Mat2Z::new(0, -1, 1, 0)];

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SuiteConfig {
    pub suite: String,
    pub level: u64,
    pub prec: i64,
    pub samples: usize,
    pub seed: u64,
    pub guard_orbit: u64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub negative_control: Option<String>,
}

impl SuiteConfig {
    pub fn new(suite: &str) -> Self {
        SuiteConfig {
            suite: suite.to_string(),
            level: 1,
            prec: 12,
            samples: 5,
            seed: 0,
            guard_orbit: DEFAULT_ORBIT_GUARD,
            negative_control: None,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if !SUITES.contains(&self.suite.as_str()) {
            return Err(Error::Config(format!("unknown suite {:?}", self.suite)));
        }
        if self.prec < 8 {
            return Err(Error::Config("precision must be at least 8".into()));
        }
        if self.samples == 0 {
            return Err(Error::Config("at least one sample is required".into()));
        }
        if !(1..=3).contains(&self.level) {
            return Err(Error::Config("level must be 1, 2 or 3".into()));
        }
        if let Some(nc) = &self.negative_control {
            if !NEGATIVE_CONTROLS.contains(&nc.as_str()) {
                return Err(Error::Config(format!("unknown negative control {:?}", nc)));
            }
            if self.suite != "hopf-H1" {
                return Err(Error::Config(format!("negative control {} applies to hopf-H1 only", nc)));
            }
        }
        Ok(())
    }

    fn p(&self) -> Q {
        Q::from_integer(self.prec)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Entry {
    pub suite: String,
    pub identity: String,
    pub word: String,
    pub sample: usize,
    pub status: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness: Option<String>,
}

impl Entry {
    pub fn passed(&self) -> bool {
        self.status == "pass"
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct RunReport {
    pub format_version: u32,
    pub config: SuiteConfig,
    pub status: String,
    pub checks: usize,
    pub failures: usize,
    pub results: Vec<Entry>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub timing_ms: Option<u128>,
}

impl RunReport {
    pub fn passed(&self) -> bool {
        self.failures == 0
    }

    pub fn to_json_string(&self) -> String {
        serde_json::to_string_pretty(self).expect("reports serialize")
    }
}

struct Collector {
    suite: String,
    entries: Vec<Entry>,
}

impl Collector {
    fn outcome(&mut self, identity: &str, word: &str, sample: usize, r: Result<Option<String>>) {
        let (status, witness) = match r {
            Ok(None) => ("pass", None),
            Ok(Some(w)) => ("fail", Some(w)),
            Err(e) => ("fail", Some(format!("error: {}", e))),
        };
        self.entries.push(Entry {
            suite: self.suite.clone(),
            identity: identity.to_string(),
            word: word.to_string(),
            sample,
            status: status.to_string(),
            witness,
        });
    }

    fn holds(&mut self, identity: &str, word: &str, sample: usize, r: Result<bool>) {
        self.outcome(identity, word, sample, r.map(|ok| (!ok).then(|| "mismatch".to_string())));
    }

    fn hopf(&mut self, checks: Vec<CheckResult>) {
        for c in checks {
            let r = Ok(c.witness.clone().filter(|_| !c.passed));
            self.outcome(&c.identity, &c.word, c.sample, r);
        }
    }
}

/// Runs one suite. The caller sets the orbit guard and the worker pool.
pub fn run_suite(cfg: &SuiteConfig) -> Result<RunReport> {
    cfg.validate()?;
    let mut c = Collector { suite: cfg.suite.clone(), entries: Vec::new() };
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    match cfg.suite.as_str() {
        "qm-structure" => qm_structure(cfg, &mut rng, &mut c),
        "star-assoc" => star_assoc(cfg, &mut rng, &mut c)?,
        "embedding" => embedding(cfg, &mut c)?,
        "lie-L" => lie_l(cfg, &mut rng, &mut c),
        "hopf-H" => hopf_h(cfg, &mut rng, &mut c),
        "hopf-H1" => hopf_h1(cfg, &mut rng, &mut c),
        "twisted-pairing" => twisted_pairing(cfg, &mut rng, &mut c),
        "right-module" => right_module(cfg, &mut rng, &mut c),
        "graded-hZ" => graded_hz(cfg, &mut rng, &mut c),
        _ => unreachable!("validated above"),
    }
    let mut results = c.entries;
    results.sort_by(|a, b| (&a.identity, &a.word, a.sample).cmp(&(&b.identity, &b.word, b.sample)));
    let failures = results.iter().filter(|e| !e.passed()).count();
    Ok(RunReport {
        format_version: FORMAT_VERSION,
        config: cfg.clone(),
        status: if failures == 0 { "pass" } else { "fail" }.to_string(),
        checks: results.len(),
        failures,
        results,
        timing_ms: None,
    })
}

fn qr(n: i64, d: i64) -> BigRational {
    BigRational::new(n.into(), d.into())
}

fn same<T: ActionTarget>(a: &T, b: &T, p: Q) -> Result<Option<String>> {
    a.disagreement(b, p)
}

fn qm_structure(cfg: &SuiteConfig, rng: &mut ChaCha8Rng, c: &mut Collector) {
    let p = cfg.p();
    let top = cfg.prec.max(40);
    let g2_identity = || -> Result<bool> {
        let g2 = forms::g2().expand_to(top + 1)?;
        let rhs = forms::g4().expand_to(top + 1)?.scale_q(&qr(5, 6)).sub(&g2.mul(&g2).scale_q(&qr(2, 1)));
        g2.theta().agrees_to(&rhs, Prec::upto(top + 1))
    };
    c.holds("theta G2 = (5/6) G4 - 2 G2^2", &format!("through q^{}", top), 0, g2_identity());

    let dp = Q::from_integer(cfg.prec.max(30));
    for i in 0..cfg.samples {
        let f = gen::random_qmf(rng, 12, 3);
        let r = f.expand(dp).and_then(|s| decompose(&s, f.weight(), 3)).and_then(|b| b.agrees(&f, dp));
        c.holds("decompose(expand(f)) = f", &format!("weight {} depth {}", f.weight(), f.depth()), i, r);
    }
    let bad = forms::g4()
        .expand(dp)
        .map(|s| s.add(&PuiseuxSeries::monomial(crate::exactq::CycRational::from_int(1), Q::from_integer(7))));
    let r = bad.map(|s| match decompose(&s, 4, 2) {
        Err(Error::NotDecomposable) => None,
        Ok(_) => Some("perturbed series was accepted".to_string()),
        Err(e) => Some(format!("unexpected error: {}", e)),
    });
    c.outcome("decompose rejects a perturbed G4", "q^7 + 1", 0, r);

    for i in 0..cfg.samples {
        let a = gen::random_upper(rng);
        let b = gen::random_upper(rng);
        let word = format!("{} {}", a, b);
        let ab = a.mul(&b);
        let mu = || -> Result<bool> {
            let rhs = forms::mu_form(&a)?.slash(&b)?.expand(p)?.add(&forms::mu(&b, p)?);
            Ok(forms::mu(&ab, p)?.agrees_with(&rhs))
        };
        c.holds("mu(ab) = mu(a)|b + mu(b)", &word, i, mu());
        for m in 1..=3 {
            let nu = || -> Result<bool> {
                let rhs = forms::nu_form(&a, m)?.slash(&b)?.expand(p)?.add(&forms::nu(&b, m, p)?);
                Ok(forms::nu(&ab, m, p)?.agrees_with(&rhs))
            };
            c.holds(&format!("nu{}(ab) = nu{}(a)|b + nu{}(b)", m, m, m), &word, i, nu());
        }
    }
    for i in 0..cfg.samples {
        let g = gen::random_sl2(rng).to_q();
        let r = (|| -> Result<bool> {
            let mut ok = forms::mu(&g, p)?.is_zero();
            for m in 1..=3 {
                ok &= forms::nu(&g, m, p)?.is_zero();
            }
            Ok(ok)
        })();
        c.holds("mu and nu vanish on SL2(Z)", &g.to_string(), i, r);
    }
}

fn star_assoc(cfg: &SuiteConfig, rng: &mut ChaCha8Rng, c: &mut Collector) -> Result<()> {
    let p = cfg.p();
    let cl = CongruenceLevel::new(cfg.level);
    let t2 = tn_op(2, &cl)?;
    let t3 = tn_op(3, &cl)?;
    let g2 = QuasiModularForm::g2();
    let g4 = QuasiModularForm::modular(1, forms::g4());
    let pick = |rng: &mut ChaCha8Rng| -> (String, TwistedHeckeOp) {
        use rand::Rng;
        match rng.gen_range(0..4) {
            0 => ("T2".into(), t2.clone()),
            1 => ("T3".into(), t3.clone()),
            2 => ("G2-op".into(), gen::random_op_with(rng, cfg.level, 2, &g2)),
            _ => ("G4-op".into(), gen::random_op_with(rng, cfg.level, 2, &g4)),
        }
    };
    for i in 0..cfg.samples {
        let (nf, f) = pick(rng);
        let (ng, g) = pick(rng);
        let (nh, h) = pick(rng);
        let r = (|| {
            let l = star(&star(&f, &g)?, &h)?;
            let r = star(&f, &star(&g, &h)?)?;
            same(&l, &r, p)
        })();
        c.outcome("(F*G)*H = F*(G*H)", &format!("{} {} {}", nf, ng, nh), i, r);
    }
    if cfg.level > 1 {
        for i in 0..cfg.samples {
            let f = gen::random_op(rng, cfg.level, 2);
            let g = gen::random_op(rng, cfg.level, 2);
            let h = gen::random_op(rng, cfg.level, 1);
            let r = (|| {
                let l = star_r(&star_r(&f, &g)?, &h)?;
                let r = star_r(&f, &star_r(&g, &h)?)?;
                same(&l, &r, p)
            })();
            c.outcome("(F*rG)*rH = F*r(G*rH)", "random", i, r);
        }
    }
    Ok(())
}

fn embedding(cfg: &SuiteConfig, c: &mut Collector) -> Result<()> {
    let p = cfg.p();
    let cl = CongruenceLevel::new(cfg.level);
    let index = qr(cl.sl2_order() as i64, 1);
    for (m, n) in [(2u64, 3u64), (3, 2)] {
        let r = (|| {
            let lhs = star(&tn_op(m, &cl)?, &tn_op(n, &cl)?)?;
            same(&lhs, &tn_op(m * n, &cl)?.scale_q(&index), p)
        })();
        c.outcome("T_m*T_n = [SL2(Z):Gamma(N)] T_mn", &format!("m={} n={} N={}", m, n, cfg.level), 0, r);
    }
    let one = CongruenceLevel::new(1);
    let r = (|| {
        let e = embed_modular(1, &[(Mat2Q::from_ints(1, 0, 0, 2), QuasiModularForm::one())], &Validation::default())?;
        same(&e, &tn_op(2, &one)?, p)
    })();
    c.outcome("embed(T2) = T2", "N=1", 0, r);

    // Hecke eigenvalues of Δ, rescaled by n^5 to undo the determinant normalization
    let delta = QuasiModularForm::modular(1, forms::delta());
    let dp = Q::from_integer(cfg.prec);
    let mut eig = std::collections::BTreeMap::new();
    for n in [2u64, 3, 6] {
        let r = (|| -> Result<Option<String>> {
            let image = act_on_form(&tn_op(n, &one)?, &delta)?;
            let s = image.expand(dp)?.scale_q(&BigRational::from_integer(BigInt::from(n).pow(5)));
            let lambda = s.coeff(Q::from_integer(1));
            let want = forms::ramanujan_tau(n);
            eig.insert(n, lambda.clone());
            let tau = crate::exactq::CycRational::from_rational(BigRational::from_integer(want.clone()));
            if lambda != tau {
                return Ok(Some(format!("eigenvalue {} vs tau = {}", lambda, want)));
            }
            let expect = forms::delta().expand(dp)?.scale(&tau);
            Ok((!s.agrees_with(&expect)).then(|| "not an eigenform".to_string()))
        })();
        c.outcome("T_n Delta = n^(-5) tau(n) Delta", &format!("n={}", n), 0, r);
    }
    let r = match (eig.get(&2), eig.get(&3), eig.get(&6)) {
        (Some(a), Some(b), Some(d)) => Ok((&(a * b) != d).then(|| format!("{} * {} vs {}", a, b, d))),
        _ => Ok(Some("eigenvalue missing".to_string())),
    };
    c.outcome("tau(2) tau(3) = tau(6)", "N=1", 0, r);
    Ok(())
}

fn commutator<T: ActionTarget, I: Interpretation<T>>(
    alg: &HopfAlgebra,
    interp: &I,
    a: &Gen,
    b: &Gen,
    f: &T,
    p: Q,
) -> Result<Option<String>> {
    let ab = interpret(&alg.normalize(&[a.clone(), b.clone()])?, interp, f)?;
    let ba = interpret(&alg.normalize(&[b.clone(), a.clone()])?, interp, f)?;
    // apply the words literally, not through the normal form
    let lit = |x: &Gen, y: &Gen| -> Result<T> { interp.apply(x, &interp.apply(y, f)?) };
    let lhs = lit(a, b)?.plus(&lit(b, a)?.times(&qr(-1, 1)))?;
    let mut rhs = UEAElement::zero();
    for (g, k) in alg.lie.bracket(a, b)? {
        rhs = rhs.add(&alg.normalize(&[g])?.scale(&k));
    }
    let rhs = interpret(&rhs, interp, f)?;
    if let Some(w) = same(&lhs, &rhs, p)? {
        return Ok(Some(w));
    }
    // the normal forms must also agree with the literal products
    same(&ab.plus(&ba.times(&qr(-1, 1)))?, &lhs, p)
}

fn lie_l(cfg: &SuiteConfig, rng: &mut ChaCha8Rng, c: &mut Collector) {
    let p = cfg.p();
    for lie in [LiePresentation::L, LiePresentation::L1, LiePresentation::SmallL1, LiePresentation::LZ] {
        let r = lie
            .jacobi_failures(&lie.test_generators())
            .map(|bad| (!bad.is_empty()).then(|| format!("{} failing triples, first {:?}", bad.len(), bad[0])));
        c.outcome("Jacobi identity", lie.name(), 0, r);
    }
    let mut l_gens = vec![Gen::D];
    for k in 1..=4 {
        for l in 0..=2 {
            l_gens.push(Gen::T(k, l));
        }
    }
    l_gens.extend((1..=3).map(Gen::Phi));
    let l1_gens = vec![Gen::X, Gen::Y, Gen::Delta(1), Gen::Delta(2), Gen::Delta(3)];
    let h = HopfAlgebra::h();
    let h1 = HopfAlgebra::h1();
    for i in 0..cfg.samples {
        let f = gen::random_deep_op(rng, cfg.level, 2);
        c.holds("sample is nonzero", "", i, Ok(!f.is_zero()));
        for (alg, gens) in [(&h, &l_gens), (&h1, &l1_gens)] {
            for (j, a) in gens.iter().enumerate() {
                for b in &gens[j + 1..] {
                    let r = commutator(alg, &OperatorAction, a, b, &f, p);
                    c.outcome(&format!("commutator table of {}", alg.lie.name()), &format!("[{},{}]", a, b), i, r);
                }
            }
        }
        for g in &l_gens {
            let r = (|| {
                let ge = OperatorAction.apply(g, &lift_e(&f))?;
                let eg = lift_e(&OperatorAction.apply(g, &f)?);
                same(&ge, &eg, p)
            })();
            c.outcome("[E,g] = 0", &format!("[E,{}]", g), i, r);
        }
    }
}

fn symbolic_hopf_checks(alg: &HopfAlgebra, gens: &[Gen], c: &mut Collector) {
    for w in pbw_words(gens, 2) {
        c.holds("coassociativity", &word_to_string(&w), 0, alg.is_coassociative_on(&w));
    }
    for g in gens {
        c.holds("antipode axiom", &g.to_string(), 0, alg.antipode_axiom_holds(g));
    }
}

fn hopf_h(cfg: &SuiteConfig, rng: &mut ChaCha8Rng, c: &mut Collector) {
    let alg = HopfAlgebra::h();
    let gens = [Gen::D, Gen::T(1, 0), Gen::T(2, 1), Gen::Phi(1)];
    symbolic_hopf_checks(&alg, &gens, c);
    let samples: Vec<_> =
        (0..cfg.samples).map(|_| (gen::random_deep_op(rng, cfg.level, 2), gen::random_op(rng, cfg.level, 2))).collect();
    let words = pbw_words(&gens, 2);
    c.hopf(verify_hopf_action(&alg, "star_r", star_r, &OperatorAction, &samples, &words, cfg.p()));
}

fn hopf_h1(cfg: &SuiteConfig, rng: &mut ChaCha8Rng, c: &mut Collector) {
    let alg = match cfg.negative_control.as_deref() {
        Some("drop-delta-term") => HopfAlgebra::h1_without_delta_term(),
        _ => HopfAlgebra::h1(),
    };
    let gens = [Gen::X, Gen::Y, Gen::Delta(1)];
    symbolic_hopf_checks(&alg, &gens, c);
    let samples: Vec<_> = (0..cfg.samples)
        .map(|_| (gen::random_op(rng, cfg.level, 2), lift_e(&gen::random_op(rng, cfg.level, 2))))
        .collect();
    let words = pbw_words(&gens, 2);
    c.hopf(verify_hopf_action(&alg, "star", star, &OperatorAction, &samples, &words, cfg.p()));
}

/// Evaluates `result` at α·γ for a few support keys α and random γ ∈ Γ(N) and
/// compares with the defining formula evaluated there.
fn covariance(
    result: &TwistedHeckeOp,
    direct: impl Fn(&Mat2Q) -> Result<QuasiModularForm>,
    rng: &mut ChaCha8Rng,
    p: Q,
) -> Result<Option<String>> {
    let level = result.congruence();
    for (k, _) in result.support().iter().take(3) {
        let m = k.reconstruct();
        for _ in 0..2 {
            let g = level.random_element(rng, 3).to_q();
            let at = m.mul(&g);
            if !direct(&at)?.agrees(&result.evaluate(&at)?, p)? {
                return Ok(Some(format!("at {}", at)));
            }
        }
    }
    Ok(None)
}

fn twisted_pairing(cfg: &SuiteConfig, rng: &mut ChaCha8Rng, c: &mut Collector) {
    let p = cfg.p();
    let n = cfg.level;
    for sigma in SIGMAS {
        let mut samples = Vec::new();
        for i in 0..cfg.samples {
            let a = gen::random_rich_twisted_op(rng, n, sigma);
            let b = gen::random_rich_twisted_op(rng, n, sigma);
            let word = format!("sigma={}", sigma);
            let r = pair(&a, &b).and_then(|ab| covariance(&ab, |m| pair_value(&a, &b, m), rng, p));
            c.outcome("pairing output is covariant", &word, i, r);
            let r = (|| same(&graded_pair(&a, &b, &sigma)?, &pair(&a, &b)?, p))();
            c.outcome("graded pairing at tau=1 is the pairing", &word, i, r);
            let r = (|| {
                let a1 = x_tau(&a, &rho(1))?;
                let b2 = x_tau(&b, &rho(2))?;
                let g = graded_pair(&a1, &b2, &sigma)?;
                covariance(&g, |m| graded_pair_value(&a1, &b2, &sigma, m), rng, p)
            })();
            c.outcome("graded pairing output is covariant", &word, i, r);
            samples.push((a, b));
        }
        let words = pbw_words(&[Gen::X, Gen::Y], 2);
        let name = format!("pair[sigma={}]", sigma);
        c.hopf(verify_hopf_action(&HopfAlgebra::small_h1(), &name, pair, &OperatorAction, &samples, &words, p));
    }
}

fn right_module(cfg: &SuiteConfig, rng: &mut ChaCha8Rng, c: &mut Collector) {
    let p = cfg.p();
    let n = cfg.level;
    let e = TwistedHeckeOp::unit(n);
    for sigma in SIGMAS {
        let word = format!("sigma={}", sigma);
        let mut samples = Vec::new();
        for i in 0..cfg.samples {
            let f = gen::random_rich_twisted_op(rng, n, sigma);
            let g = gen::random_op(rng, n, 2);
            let h = gen::random_op(rng, n, 1);
            c.outcome("F*e = F", &word, i, right_act(&f, &e).and_then(|fe| same(&fe, &f, p)));
            let r = (|| same(&right_act(&right_act(&f, &g)?, &h)?, &right_act(&f, &star(&g, &h)?)?, p))();
            c.outcome("(F*G)*H = F*(G*H)", &word, i, r);
            let r = right_act(&f, &g).and_then(|fg| covariance(&fg, |m| right_act_value(&f, &g, m), rng, p));
            c.outcome("right action output is covariant", &word, i, r);
            samples.push((f, lift_e(&gen::random_op(rng, n, 2))));
        }
        let words = pbw_words(&[Gen::X, Gen::Y, Gen::Delta(1)], 2);
        let name = format!("right_act[sigma={}]", sigma);
        c.hopf(verify_hopf_action(&HopfAlgebra::h1(), &name, right_act, &OperatorAction, &samples, &words, p));
    }
    for i in 0..cfg.samples {
        let f = gen::random_op(rng, n, 2);
        let g = gen::random_op(rng, n, 2);
        let r = (|| same(&right_act(&f, &g)?, &star(&f, &g)?, p))();
        c.outcome("untwisted right action is the star product", "sigma=1", i, r);
    }
}

fn graded_hz(cfg: &SuiteConfig, rng: &mut ChaCha8Rng, c: &mut Collector) {
    let p = cfg.p();
    let n = cfg.level;
    let hz = HopfAlgebra::hz();
    for sigma in SIGMAS {
        let word = format!("sigma={}", sigma);
        let mut samples = Vec::new();
        for i in 0..cfg.samples {
            let t = gen::random_tower(rng, n, sigma);
            for a in -2i64..=2 {
                let r = (|| {
                    let zx = op_z(&op_xn(&t, a)?)?;
                    let xz = op_xn(&op_z(&t)?, a)?;
                    let want = op_xn(&t, a)?.scale_q(&qr(a + 1, 1));
                    same(&zx.try_add(&xz.scale_q(&qr(-1, 1)))?, &want, p)
                })();
                c.outcome("[Z,X_n] = (n+1) X_n", &format!("{} n={}", word, a), i, r);
                for b in (a + 1)..=2 {
                    let r = (|| same(&op_xn(&op_xn(&t, b)?, a)?, &op_xn(&op_xn(&t, a)?, b)?, p))();
                    c.outcome("[X_n,X_m] = 0", &format!("{} n={} m={}", word, a, b), i, r);
                }
            }
            let a = gen::random_rich_twisted_op(rng, n, sigma);
            let b = gen::random_rich_twisted_op(rng, n, sigma);
            let r = (|| same(&graded_pair(&a, &b, &sigma)?, &pair(&a, &b)?, p))();
            c.outcome("graded pairing at tau=1 is the pairing", &word, i, r);
            samples.push((t, gen::random_tower(rng, n, sigma)));
        }
        let words = pbw_words(&[Gen::Z, Gen::Xn(-1), Gen::Xn(0), Gen::Xn(1)], 2);
        let name = format!("tower_pair[sigma={}]", sigma);
        c.hopf(verify_hopf_action(&hz, &name, tower_pair, &TowerAction, &samples, &words, p));
    }
}
