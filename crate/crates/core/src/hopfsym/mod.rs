//! Lie presentations ℒ, ℒ₁, 𝔩₁, 𝔩_ℤ, their enveloping algebras in PBW form,
//! coproducts and antipodes, and the check that a Hopf algebra acts on a product
//! of operators.

mod action;

pub use action::{
    interpret, pbw_words, verify_hopf_action, ActionTarget, CheckResult, Interpretation, OperatorAction, TowerAction,
};

use crate::{Error, Result};
use num_rational::BigRational;
use num_traits::{One, Zero};
use std::collections::btree_map::Entry;
use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

pub type Coeff = BigRational;

/// Generators in PBW order: D < T(k,l) < φ(m) < X < X_n < δ_n < Y < Z.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Gen {
    D,
    T(u32, u32),
    Phi(u32),
    X,
    Xn(i64),
    Delta(u32),
    Y,
    Z,
}

impl fmt::Display for Gen {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Gen::D => write!(f, "D"),
            Gen::T(k, l) => write!(f, "T({},{})", k, l),
            Gen::Phi(m) => write!(f, "phi({})", m),
            Gen::X => write!(f, "X"),
            Gen::Xn(n) => write!(f, "X_{}", n),
            Gen::Delta(n) => write!(f, "delta({})", n),
            Gen::Y => write!(f, "Y"),
            Gen::Z => write!(f, "Z"),
        }
    }
}

fn int_args(s: &str, head: &str, n: usize) -> Option<Vec<i64>> {
    let body = s.strip_prefix(head)?.strip_prefix('(')?.strip_suffix(')')?;
    let v: Vec<i64> = body.split(',').map(|t| t.trim().parse().ok()).collect::<Option<_>>()?;
    (v.len() == n).then_some(v)
}

impl FromStr for Gen {
    type Err = Error;

    fn from_str(s: &str) -> Result<Gen> {
        let s = s.trim();
        let bad = || Error::UnknownGenerator(s.to_string());
        let g = match s {
            "D" => Gen::D,
            "X" => Gen::X,
            "Y" => Gen::Y,
            "Z" => Gen::Z,
            _ => {
                if let Some(n) = s.strip_prefix("X_") {
                    Gen::Xn(n.parse().map_err(|_| bad())?)
                } else if let Some(v) = int_args(s, "T", 2) {
                    Gen::T(v[0].try_into().map_err(|_| bad())?, v[1].try_into().map_err(|_| bad())?)
                } else if let Some(v) = int_args(s, "phi", 1) {
                    Gen::Phi(v[0].try_into().map_err(|_| bad())?)
                } else if let Some(v) = int_args(s, "delta", 1) {
                    Gen::Delta(v[0].try_into().map_err(|_| bad())?)
                } else {
                    return Err(bad());
                }
            }
        };
        Ok(g)
    }
}

pub type Word = Vec<Gen>;

pub fn word_to_string(w: &[Gen]) -> String {
    if w.is_empty() {
        "1".to_string()
    } else {
        w.iter().map(|g| g.to_string()).collect::<Vec<_>>().join("·")
    }
}

/// Parses words like `X·delta(1)`, `X*Y` or `1`.
pub fn parse_word(s: &str) -> Result<Word> {
    let s = s.trim();
    if s == "1" || s.is_empty() {
        return Ok(Vec::new());
    }
    s.split(['·', '*', ' ']).filter(|t| !t.is_empty()).map(Gen::from_str).collect()
}

pub type LieElem = BTreeMap<Gen, Coeff>;

fn add_to<K: Ord>(m: &mut BTreeMap<K, Coeff>, k: K, c: Coeff) {
    if c.is_zero() {
        return;
    }
    match m.entry(k) {
        Entry::Occupied(mut e) => {
            *e.get_mut() += c;
            if e.get().is_zero() {
                e.remove();
            }
        }
        Entry::Vacant(e) => {
            e.insert(c);
        }
    }
}

fn q(n: i64, d: i64) -> Coeff {
    Coeff::new(n.into(), d.into())
}

/// Bracket tables, given intensionally on the generator families.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum LiePresentation {
    /// D, T(k≥1, l≥0), φ(m≥1)
    L,
    /// X, Y, δ(n≥1)
    L1,
    /// X, Y
    SmallL1,
    /// Z, X_n (n ∈ ℤ)
    LZ,
}

impl LiePresentation {
    pub fn name(&self) -> &'static str {
        match self {
            LiePresentation::L => "L",
            LiePresentation::L1 => "L1",
            LiePresentation::SmallL1 => "l1",
            LiePresentation::LZ => "lZ",
        }
    }

    pub fn contains(&self, g: &Gen) -> bool {
        match self {
            LiePresentation::L => {
                matches!(g, Gen::D) || matches!(g, Gen::T(k, _) if *k >= 1) || matches!(g, Gen::Phi(m) if *m >= 1)
            }
            LiePresentation::L1 => matches!(g, Gen::X | Gen::Y) || matches!(g, Gen::Delta(n) if *n >= 1),
            LiePresentation::SmallL1 => matches!(g, Gen::X | Gen::Y),
            LiePresentation::LZ => matches!(g, Gen::Z | Gen::Xn(_)),
        }
    }

    pub fn check(&self, g: &Gen) -> Result<()> {
        if self.contains(g) {
            Ok(())
        } else {
            Err(Error::UnknownGenerator(format!("{} in {}", g, self.name())))
        }
    }

    /// Generators in the default test window: k, l ≤ 4, m ≤ 3, |n| ≤ 3.
    pub fn test_generators(&self) -> Vec<Gen> {
        let mut v = Vec::new();
        match self {
            LiePresentation::L => {
                v.push(Gen::D);
                for k in 1..=4 {
                    for l in 0..=4 {
                        v.push(Gen::T(k, l));
                    }
                }
                v.extend((1..=3).map(Gen::Phi));
            }
            LiePresentation::L1 => {
                v.extend([Gen::X, Gen::Y]);
                v.extend((1..=3).map(Gen::Delta));
            }
            LiePresentation::SmallL1 => v.extend([Gen::X, Gen::Y]),
            LiePresentation::LZ => {
                v.push(Gen::Z);
                v.extend((-3..=3).map(Gen::Xn));
            }
        }
        v.sort();
        v
    }

    /// [a, b] for a < b.
    fn ordered_bracket(a: &Gen, b: &Gen) -> LieElem {
        let mut out = LieElem::new();
        match (a, b) {
            (Gen::D, Gen::T(k, l)) => {
                let k = *k as i64;
                if k > 1 {
                    add_to(&mut out, Gen::T(k as u32 - 1, l + 1), q(-5 * (k - 1), 24));
                }
                add_to(&mut out, Gen::T(k as u32 + 1, *l), q(k - 3, 2));
            }
            (Gen::T(k, l), Gen::T(k2, l2)) => {
                if k != k2 {
                    add_to(&mut out, Gen::T(k + k2 - 2, l + l2), q(*k2 as i64 - *k as i64, 1));
                }
            }
            (Gen::X, Gen::Delta(n)) => add_to(&mut out, Gen::Delta(n + 1), q(1, 1)),
            (Gen::X, Gen::Y) => add_to(&mut out, Gen::X, q(-1, 1)),
            (Gen::Delta(n), Gen::Y) => add_to(&mut out, Gen::Delta(*n), q(-(*n as i64), 1)),
            (Gen::Xn(n), Gen::Z) => add_to(&mut out, Gen::Xn(*n), q(-(n + 1), 1)),
            _ => {}
        }
        out
    }

    pub fn bracket(&self, a: &Gen, b: &Gen) -> Result<LieElem> {
        self.check(a)?;
        self.check(b)?;
        Ok(match a.cmp(b) {
            std::cmp::Ordering::Equal => LieElem::new(),
            std::cmp::Ordering::Less => Self::ordered_bracket(a, b),
            std::cmp::Ordering::Greater => Self::ordered_bracket(b, a).into_iter().map(|(g, c)| (g, -c)).collect(),
        })
    }

    pub fn bracket_elems(&self, a: &LieElem, b: &LieElem) -> Result<LieElem> {
        let mut out = LieElem::new();
        for (ga, ca) in a {
            for (gb, cb) in b {
                for (g, c) in self.bracket(ga, gb)? {
                    add_to(&mut out, g, c * ca * cb);
                }
            }
        }
        Ok(out)
    }

    /// Triples from `gens` on which the Jacobi identity fails.
    pub fn jacobi_failures(&self, gens: &[Gen]) -> Result<Vec<(Gen, Gen, Gen)>> {
        let one = |g: &Gen| LieElem::from([(g.clone(), Coeff::one())]);
        let mut bad = Vec::new();
        for (i, a) in gens.iter().enumerate() {
            for (j, b) in gens.iter().enumerate().skip(i + 1) {
                for c in gens.iter().skip(j + 1) {
                    let (ea, eb, ec) = (one(a), one(b), one(c));
                    let mut total = LieElem::new();
                    for (x, y, z) in [(&ea, &eb, &ec), (&eb, &ec, &ea), (&ec, &ea, &eb)] {
                        for (g, v) in self.bracket_elems(x, &self.bracket_elems(y, z)?)? {
                            add_to(&mut total, g, v);
                        }
                    }
                    if !total.is_empty() {
                        bad.push((a.clone(), b.clone(), c.clone()));
                    }
                }
            }
        }
        Ok(bad)
    }
}

/// A ℚ-linear combination of normal-ordered words.
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct UEAElement {
    terms: BTreeMap<Word, Coeff>,
}

impl UEAElement {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn one() -> Self {
        Self { terms: BTreeMap::from([(Vec::new(), Coeff::one())]) }
    }

    pub fn terms(&self) -> &BTreeMap<Word, Coeff> {
        &self.terms
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn add(&self, o: &Self) -> Self {
        let mut t = self.terms.clone();
        for (w, c) in &o.terms {
            add_to(&mut t, w.clone(), c.clone());
        }
        Self { terms: t }
    }

    pub fn scale(&self, c: &Coeff) -> Self {
        let terms = self.terms.iter().map(|(w, v)| (w.clone(), v * c)).filter(|(_, v)| !v.is_zero()).collect();
        Self { terms }
    }

    pub fn mul(&self, o: &Self, lie: &LiePresentation) -> Result<Self> {
        let mut raw = Vec::new();
        for (a, ca) in &self.terms {
            for (b, cb) in &o.terms {
                let mut w = a.clone();
                w.extend(b.iter().cloned());
                raw.push((w, ca * cb));
            }
        }
        normalize_terms(lie, raw)
    }

    /// The counit: the coefficient of the empty word.
    pub fn counit(&self) -> Coeff {
        self.terms.get(&Vec::new()).cloned().unwrap_or_else(Coeff::zero)
    }
}

impl fmt::Display for UEAElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let parts: Vec<String> = self.terms.iter().map(|(w, c)| format!("{}·{}", c, word_to_string(w))).collect();
        write!(f, "{}", parts.join(" + "))
    }
}

fn normalize_terms(lie: &LiePresentation, input: Vec<(Word, Coeff)>) -> Result<UEAElement> {
    for (w, _) in &input {
        for g in w {
            lie.check(g)?;
        }
    }
    let mut out = BTreeMap::new();
    let mut pending: BTreeMap<Word, Coeff> = BTreeMap::new();
    for (w, c) in input {
        add_to(&mut pending, w, c);
    }
    while let Some((w, c)) = pending.pop_first() {
        match (0..w.len().saturating_sub(1)).find(|&i| w[i] > w[i + 1]) {
            None => add_to(&mut out, w, c),
            Some(i) => {
                let mut swapped = w.clone();
                swapped.swap(i, i + 1);
                add_to(&mut pending, swapped, c.clone());
                for (g, b) in lie.bracket(&w[i], &w[i + 1])? {
                    let mut nw = w[..i].to_vec();
                    nw.push(g);
                    nw.extend_from_slice(&w[i + 2..]);
                    add_to(&mut pending, nw, &c * b);
                }
            }
        }
    }
    Ok(UEAElement { terms: out })
}

/// Normal-ordered expansion of a word.
pub fn pbw_normalize(lie: &LiePresentation, word: &[Gen]) -> Result<UEAElement> {
    normalize_terms(lie, vec![(word.to_vec(), Coeff::one())])
}

/// An element of H⊗H as a combination of pairs of normal-ordered words.
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct Tensor {
    terms: BTreeMap<(Word, Word), Coeff>,
}

impl Tensor {
    pub fn unit() -> Self {
        Self { terms: BTreeMap::from([((Vec::new(), Vec::new()), Coeff::one())]) }
    }

    pub fn primitive(g: &Gen) -> Self {
        let mut t = BTreeMap::new();
        add_to(&mut t, (vec![g.clone()], Vec::new()), Coeff::one());
        add_to(&mut t, (Vec::new(), vec![g.clone()]), Coeff::one());
        Self { terms: t }
    }

    pub fn terms(&self) -> &BTreeMap<(Word, Word), Coeff> {
        &self.terms
    }

    pub fn add_term(&mut self, a: Word, b: Word, c: Coeff) {
        add_to(&mut self.terms, (a, b), c);
    }

    pub fn add(&self, o: &Self) -> Self {
        let mut t = self.clone();
        for ((a, b), c) in &o.terms {
            t.add_term(a.clone(), b.clone(), c.clone());
        }
        t
    }

    pub fn scale(&self, c: &Coeff) -> Self {
        let mut t = Self::default();
        for ((a, b), v) in &self.terms {
            t.add_term(a.clone(), b.clone(), v * c);
        }
        t
    }

    pub fn mul(&self, o: &Self, lie: &LiePresentation) -> Result<Self> {
        let mut t = Self::default();
        for ((a1, b1), c1) in &self.terms {
            for ((a2, b2), c2) in &o.terms {
                let l = pbw_normalize(lie, &[a1.as_slice(), a2.as_slice()].concat())?;
                let r = pbw_normalize(lie, &[b1.as_slice(), b2.as_slice()].concat())?;
                for (wl, cl) in l.terms() {
                    for (wr, cr) in r.terms() {
                        t.add_term(wl.clone(), wr.clone(), c1 * c2 * cl * cr);
                    }
                }
            }
        }
        Ok(t)
    }
}

/// Δ on generators: primitive unless overridden. With `delta_ladder`,
/// Δ(δ_n) for n ≥ 2 is [Δ(X), Δ(δ_{n−1})].
#[derive(Clone, Debug, Default)]
pub struct CoproductRule {
    extra: BTreeMap<Gen, Vec<(Word, Word, Coeff)>>,
    delta_ladder: bool,
}

impl CoproductRule {
    pub fn primitive() -> Self {
        Self::default()
    }

    /// Δ(X) = X⊗1 + 1⊗X + δ₁⊗Y.
    pub fn h1() -> Self {
        let mut extra = BTreeMap::new();
        extra.insert(Gen::X, vec![(vec![Gen::Delta(1)], vec![Gen::Y], Coeff::one())]);
        Self { extra, delta_ladder: true }
    }

    /// The ℋ₁ rule with the δ₁⊗Y term removed; a negative control.
    pub fn h1_without_delta_term() -> Self {
        Self { extra: BTreeMap::new(), delta_ladder: true }
    }

    pub fn generator(&self, lie: &LiePresentation, g: &Gen) -> Result<Tensor> {
        lie.check(g)?;
        if let (true, Gen::Delta(n)) = (self.delta_ladder, g) {
            if *n >= 2 {
                let x = self.generator(lie, &Gen::X)?;
                let d = self.generator(lie, &Gen::Delta(n - 1))?;
                return Ok(x.mul(&d, lie)?.add(&d.mul(&x, lie)?.scale(&q(-1, 1))));
            }
        }
        let mut t = Tensor::primitive(g);
        for (a, b, c) in self.extra.get(g).into_iter().flatten() {
            t.add_term(a.clone(), b.clone(), c.clone());
        }
        Ok(t)
    }
}

/// S on generators, −g unless overridden; extended as an anti-homomorphism.
#[derive(Clone, Debug, Default)]
pub struct AntipodeRule {
    images: BTreeMap<Gen, Vec<(Word, Coeff)>>,
    delta_ladder: bool,
}

impl AntipodeRule {
    pub fn primitive() -> Self {
        Self::default()
    }

    /// S(X) = −X + δ₁Y, S(Y) = −Y, S(δ₁) = −δ₁.
    pub fn h1() -> Self {
        let mut images = BTreeMap::new();
        images.insert(Gen::X, vec![(vec![Gen::X], q(-1, 1)), (vec![Gen::Delta(1), Gen::Y], q(1, 1))]);
        Self { images, delta_ladder: true }
    }

    pub fn generator(&self, lie: &LiePresentation, g: &Gen) -> Result<UEAElement> {
        lie.check(g)?;
        if let (true, Gen::Delta(n)) = (self.delta_ladder, g) {
            if *n >= 2 {
                // S([X, δ]) = [S(δ), S(X)]
                let x = self.generator(lie, &Gen::X)?;
                let d = self.generator(lie, &Gen::Delta(n - 1))?;
                return Ok(d.mul(&x, lie)?.add(&x.mul(&d, lie)?.scale(&q(-1, 1))));
            }
        }
        match self.images.get(g) {
            Some(im) => normalize_terms(lie, im.clone()),
            None => normalize_terms(lie, vec![(vec![g.clone()], q(-1, 1))]),
        }
    }
}

/// An enveloping algebra with its coproduct and antipode.
#[derive(Clone, Debug)]
pub struct HopfAlgebra {
    pub name: &'static str,
    pub lie: LiePresentation,
    pub coproduct: CoproductRule,
    pub antipode: AntipodeRule,
}

impl HopfAlgebra {
    /// ℋ = 𝒰(ℒ), all generators primitive.
    pub fn h() -> Self {
        Self {
            name: "H",
            lie: LiePresentation::L,
            coproduct: CoproductRule::primitive(),
            antipode: AntipodeRule::primitive(),
        }
    }

    pub fn h1() -> Self {
        Self { name: "H1", lie: LiePresentation::L1, coproduct: CoproductRule::h1(), antipode: AntipodeRule::h1() }
    }

    /// ℋ₁ with Δ(X) primitive: a deliberately wrong coproduct.
    pub fn h1_without_delta_term() -> Self {
        Self { name: "H1-drop-delta", coproduct: CoproductRule::h1_without_delta_term(), ..Self::h1() }
    }

    /// 𝔥₁ = 𝒰(𝔩₁).
    pub fn small_h1() -> Self {
        Self {
            name: "h1",
            lie: LiePresentation::SmallL1,
            coproduct: CoproductRule::primitive(),
            antipode: AntipodeRule::primitive(),
        }
    }

    /// 𝔥_ℤ = 𝒰(𝔩_ℤ).
    pub fn hz() -> Self {
        Self {
            name: "hZ",
            lie: LiePresentation::LZ,
            coproduct: CoproductRule::primitive(),
            antipode: AntipodeRule::primitive(),
        }
    }

    pub fn normalize(&self, word: &[Gen]) -> Result<UEAElement> {
        pbw_normalize(&self.lie, word)
    }

    pub fn coproduct(&self, e: &UEAElement) -> Result<Tensor> {
        let mut out = Tensor::default();
        for (w, c) in e.terms() {
            let mut t = Tensor::unit();
            for g in w {
                t = t.mul(&self.coproduct.generator(&self.lie, g)?, &self.lie)?;
            }
            out = out.add(&t.scale(c));
        }
        Ok(out)
    }

    pub fn coproduct_word(&self, w: &[Gen]) -> Result<Tensor> {
        self.coproduct(&self.normalize(w)?)
    }

    pub fn antipode(&self, e: &UEAElement) -> Result<UEAElement> {
        let mut out = UEAElement::zero();
        for (w, c) in e.terms() {
            let mut s = UEAElement::one();
            for g in w.iter().rev() {
                s = s.mul(&self.antipode.generator(&self.lie, g)?, &self.lie)?;
            }
            out = out.add(&s.scale(c));
        }
        Ok(out)
    }

    /// (Δ⊗id)Δ(w) = (id⊗Δ)Δ(w).
    pub fn is_coassociative_on(&self, w: &[Gen]) -> Result<bool> {
        let mut left: BTreeMap<(Word, Word, Word), Coeff> = BTreeMap::new();
        let mut right = left.clone();
        for ((a, b), c) in self.coproduct_word(w)?.terms() {
            for ((a1, a2), c1) in self.coproduct_word(a)?.terms() {
                add_to(&mut left, (a1.clone(), a2.clone(), b.clone()), c * c1);
            }
            for ((b1, b2), c2) in self.coproduct_word(b)?.terms() {
                add_to(&mut right, (a.clone(), b1.clone(), b2.clone()), c * c2);
            }
        }
        Ok(left == right)
    }

    /// m(S⊗id)Δ(g) = ε(g)·1 = m(id⊗S)Δ(g).
    pub fn antipode_axiom_holds(&self, g: &Gen) -> Result<bool> {
        let t = self.coproduct_word(std::slice::from_ref(g))?;
        let mut l = UEAElement::zero();
        let mut r = UEAElement::zero();
        for ((a, b), c) in t.terms() {
            let (ea, eb) = (self.normalize(a)?, self.normalize(b)?);
            l = l.add(&self.antipode(&ea)?.mul(&eb, &self.lie)?.scale(c));
            r = r.add(&ea.mul(&self.antipode(&eb)?, &self.lie)?.scale(c));
        }
        Ok(l.is_zero() && r.is_zero())
    }
}
