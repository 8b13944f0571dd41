use crate::exactq::arith::lcm_u64;
use crate::exactq::{CycRational, PuiseuxSeries};
use crate::{Error, Result};
use num_rational::BigRational;
use std::collections::hash_map::DefaultHasher;
use std::collections::BTreeMap;
use std::fmt;
use std::hash::{Hash, Hasher};
use std::sync::Arc;

/// A stored q-expansion used as an expression leaf.
#[derive(Clone, Debug)]
pub struct SeriesLeaf {
    pub series: PuiseuxSeries,
    text: String,
}

impl SeriesLeaf {
    pub fn new(series: PuiseuxSeries) -> Self {
        let text = series.to_json().to_string();
        SeriesLeaf { series, text }
    }
}

impl PartialEq for SeriesLeaf {
    fn eq(&self, other: &Self) -> bool {
        self.text == other.text
    }
}

impl Eq for SeriesLeaf {}

impl Hash for SeriesLeaf {
    fn hash<H: Hasher>(&self, state: &mut H) {
        self.text.hash(state)
    }
}

/// Node kinds. Upper-triangular matrices (a b; 0 d) are stored as triples.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Node {
    /// G_K = −B_K/2K + Σσ_{K−1}(n)qⁿ.
    Eis1(i64),
    Delta,
    DeltaInverse,
    /// Level-N Eisenstein series attached to (c, d) mod N.
    EisN {
        k: i64,
        c: u64,
        d: u64,
        n: u64,
    },
    Expansion {
        leaf: SeriesLeaf,
        weight: i64,
        level: u64,
    },
    Const(CycRational),
    Sum {
        weight: i64,
        terms: Vec<FormExpr>,
    },
    Product(Vec<FormExpr>),
    Scale(CycRational, FormExpr),
    /// atom|(a b; 0 d).
    Slash {
        atom: FormExpr,
        a: i64,
        b: i64,
        d: i64,
    },
    /// μ of (a b; 0 d).
    Mu {
        a: i64,
        b: i64,
        d: i64,
    },
    /// θg + 2k·G₂·g for g of weight k.
    Serre(FormExpr),
}

struct Inner {
    node: Node,
    weight: i64,
    level: u64,
    hash: u64,
}

/// Immutable, cheaply cloned expression for a (possibly slashed) modular form.
#[derive(Clone)]
pub struct FormExpr(Arc<Inner>);

impl PartialEq for FormExpr {
    fn eq(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.0, &other.0) || (self.0.hash == other.0.hash && self.0.node == other.0.node)
    }
}

impl Eq for FormExpr {}

impl Hash for FormExpr {
    fn hash<H: Hasher>(&self, state: &mut H) {
        state.write_u64(self.0.hash)
    }
}

impl fmt::Debug for FormExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self)
    }
}

impl FormExpr {
    fn build(node: Node) -> FormExpr {
        let (weight, level) = match &node {
            Node::Eis1(k) => (*k, 1),
            Node::Delta => (12, 1),
            Node::DeltaInverse => (-12, 1),
            Node::EisN { k, n, .. } => (*k, *n),
            Node::Expansion { weight, level, .. } => (*weight, *level),
            Node::Const(_) => (0, 1),
            Node::Sum { weight, terms } => (*weight, terms.iter().fold(1, |l, t| lcm_u64(l, t.level()))),
            Node::Product(fs) => (fs.iter().map(|f| f.weight()).sum(), fs.iter().fold(1, |l, t| lcm_u64(l, t.level()))),
            Node::Scale(_, f) => (f.weight(), f.level()),
            Node::Slash { atom, a, d, .. } => (atom.weight(), atom.level() * (*a * *d) as u64),
            Node::Mu { a, d, .. } => (2, (*a * *d) as u64),
            Node::Serre(g) => (g.weight() + 2, g.level()),
        };
        let mut h = DefaultHasher::new();
        node.hash(&mut h);
        let hash = h.finish();
        FormExpr(Arc::new(Inner { node, weight, level, hash }))
    }

    pub(crate) fn from_node(node: Node) -> FormExpr {
        FormExpr::build(node)
    }

    pub fn node(&self) -> &Node {
        &self.0.node
    }

    pub fn weight(&self) -> i64 {
        self.0.weight
    }

    /// A level N such that the expression is invariant under Γ(N) when it is modular.
    pub fn level(&self) -> u64 {
        self.0.level
    }

    pub(crate) fn structural_hash(&self) -> u64 {
        self.0.hash
    }

    pub fn zero(weight: i64) -> FormExpr {
        FormExpr::build(Node::Sum { weight, terms: vec![] })
    }

    pub fn constant(c: CycRational) -> FormExpr {
        if c.is_zero() {
            return FormExpr::zero(0);
        }
        FormExpr::build(Node::Const(c.reduce()))
    }

    pub fn one() -> FormExpr {
        FormExpr::constant(CycRational::one())
    }

    pub fn rational(r: BigRational) -> FormExpr {
        FormExpr::constant(CycRational::from_rational(r))
    }

    pub fn expansion(series: PuiseuxSeries, weight: i64, level: u64) -> FormExpr {
        FormExpr::build(Node::Expansion { leaf: SeriesLeaf::new(series), weight, level })
    }

    pub fn is_zero(&self) -> bool {
        matches!(self.node(), Node::Sum { terms, .. } if terms.is_empty())
    }

    pub fn as_constant(&self) -> Option<&CycRational> {
        match self.node() {
            Node::Const(c) => Some(c),
            _ => None,
        }
    }

    /// Splits off a scalar factor: self = c·rest.
    fn split_scale(&self) -> (CycRational, FormExpr) {
        match self.node() {
            Node::Scale(c, f) => (c.clone(), f.clone()),
            Node::Const(c) => (c.clone(), FormExpr::one()),
            _ => (CycRational::one(), self.clone()),
        }
    }

    pub fn scale(&self, c: &CycRational) -> FormExpr {
        if c.is_zero() || self.is_zero() {
            return FormExpr::zero(self.weight());
        }
        if c.is_one() {
            return self.clone();
        }
        match self.node() {
            Node::Const(x) => FormExpr::constant(c * x),
            Node::Scale(x, f) => f.scale(&(c * x)),
            Node::Sum { weight, terms } => {
                let terms = terms.iter().map(|t| t.scale(c)).collect();
                FormExpr::sum(*weight, terms)
            }
            _ => FormExpr::build(Node::Scale(c.reduce(), self.clone())),
        }
    }

    pub fn scale_q(&self, r: &BigRational) -> FormExpr {
        self.scale(&CycRational::from_rational(r.clone()))
    }

    pub fn neg(&self) -> FormExpr {
        self.scale(&CycRational::from_int(-1))
    }

    /// Sum of same-weight expressions, with like terms collected.
    pub fn sum(weight: i64, terms: Vec<FormExpr>) -> FormExpr {
        let mut acc: BTreeMap<(u64, usize), (FormExpr, CycRational)> = BTreeMap::new();
        let mut stack = terms;
        let mut flat = Vec::new();
        while let Some(t) = stack.pop() {
            if t.is_zero() {
                continue;
            }
            assert_eq!(t.weight(), weight, "sum of forms with different weights");
            match t.node() {
                Node::Sum { terms, .. } => stack.extend(terms.iter().cloned()),
                _ => flat.push(t),
            }
        }
        for t in flat {
            let (c, base) = t.split_scale();
            let h = base.structural_hash();
            let mut slot = 0;
            loop {
                match acc.get_mut(&(h, slot)) {
                    Some((b, x)) if *b == base => {
                        *x = &*x + &c;
                        break;
                    }
                    Some(_) => slot += 1,
                    None => {
                        acc.insert((h, slot), (base, c));
                        break;
                    }
                }
            }
        }
        let mut out: Vec<FormExpr> =
            acc.into_values().filter(|(_, c)| !c.is_zero()).map(|(b, c)| b.scale(&c)).collect();
        match out.len() {
            0 => FormExpr::zero(weight),
            1 => out.pop().unwrap(),
            _ => FormExpr::build(Node::Sum { weight, terms: out }),
        }
    }

    pub fn try_add(&self, other: &FormExpr) -> Result<FormExpr> {
        if self.weight() != other.weight() {
            if self.is_zero() {
                return Ok(other.clone());
            }
            if other.is_zero() {
                return Ok(self.clone());
            }
            return Err(Error::WeightMismatch(self.weight(), other.weight()));
        }
        Ok(FormExpr::sum(self.weight(), vec![self.clone(), other.clone()]))
    }

    /// Sum; a zero of any weight is absorbed.
    pub fn add(&self, other: &FormExpr) -> FormExpr {
        self.try_add(other).expect("sum of forms with different weights")
    }

    pub fn sub(&self, other: &FormExpr) -> FormExpr {
        self.add(&other.neg())
    }

    pub fn product(factors: Vec<FormExpr>) -> FormExpr {
        let weight: i64 = factors.iter().map(|f| f.weight()).sum();
        let mut c = CycRational::one();
        let mut out = Vec::new();
        let mut stack = factors;
        while let Some(f) = stack.pop() {
            if f.is_zero() {
                return FormExpr::zero(weight);
            }
            match f.node() {
                Node::Product(fs) => stack.extend(fs.iter().cloned()),
                Node::Const(x) => c = &c * x,
                Node::Scale(x, g) => {
                    c = &c * x;
                    stack.push(g.clone());
                }
                _ => out.push(f),
            }
        }
        out.sort_by_key(|f| f.structural_hash());
        let base = match out.len() {
            0 => FormExpr::one(),
            1 => out.pop().unwrap(),
            _ => FormExpr::build(Node::Product(out)),
        };
        base.scale(&c)
    }

    pub fn mul(&self, other: &FormExpr) -> FormExpr {
        FormExpr::product(vec![self.clone(), other.clone()])
    }

    pub fn pow(&self, e: u32) -> FormExpr {
        FormExpr::product(vec![self.clone(); e as usize])
    }

    /// X(g) = θg + 2k·G₂·g.
    pub fn serre(&self) -> FormExpr {
        match self.node() {
            Node::Sum { weight, terms } => FormExpr::sum(weight + 2, terms.iter().map(|t| t.serre()).collect()),
            Node::Scale(c, f) => f.serre().scale(c),
            Node::Const(_) => FormExpr::zero(2),
            _ => FormExpr::build(Node::Serre(self.clone())),
        }
    }

    pub(crate) fn slash_node(atom: FormExpr, a: i64, b: i64, d: i64) -> FormExpr {
        if a == 1 && b == 0 && d == 1 {
            return atom;
        }
        FormExpr::build(Node::Slash { atom, a, b, d })
    }

    pub(crate) fn mu_node(a: i64, b: i64, d: i64) -> FormExpr {
        if a == 1 && b == 0 && d == 1 {
            return FormExpr::zero(2);
        }
        FormExpr::build(Node::Mu { a, b, d })
    }

    /// Number of nodes, counting shared subtrees repeatedly.
    pub fn size(&self) -> usize {
        1 + match self.node() {
            Node::Sum { terms, .. } => terms.iter().map(|t| t.size()).sum(),
            Node::Product(fs) => fs.iter().map(|t| t.size()).sum(),
            Node::Scale(_, f) | Node::Serre(f) => f.size(),
            Node::Slash { atom, .. } => atom.size(),
            _ => 0,
        }
    }
}

impl fmt::Display for FormExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.node() {
            Node::Eis1(k) => write!(f, "G{}", k),
            Node::Delta => write!(f, "DELTA"),
            Node::DeltaInverse => write!(f, "DELTA^-1"),
            Node::EisN { k, c, d, n } => write!(f, "EISN({},{},{},{})", k, c, d, n),
            Node::Expansion { weight, level, .. } => write!(f, "SERIES[k={},N={}]", weight, level),
            Node::Const(c) => write!(f, "{}", c),
            Node::Sum { terms, .. } => {
                if terms.is_empty() {
                    return write!(f, "0");
                }
                write!(f, "(")?;
                for (i, t) in terms.iter().enumerate() {
                    if i > 0 {
                        write!(f, " + ")?;
                    }
                    write!(f, "{}", t)?;
                }
                write!(f, ")")
            }
            Node::Product(fs) => {
                for (i, t) in fs.iter().enumerate() {
                    if i > 0 {
                        write!(f, "*")?;
                    }
                    write!(f, "{}", t)?;
                }
                Ok(())
            }
            Node::Scale(c, x) => write!(f, "{}*{}", c, x),
            Node::Slash { atom, a, b, d } => write!(f, "{}|({} {}; 0 {})", atom, a, b, d),
            Node::Mu { a, b, d } => write!(f, "MU({} {}; 0 {})", a, b, d),
            Node::Serre(g) => write!(f, "SERRE({})", g),
        }
    }
}
