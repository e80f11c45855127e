//! CMSO₁ formulas over hypergraphs: syntax, construction rules, satisfaction
//! and the Λ bound on the number of equivalence classes.

mod parse;

use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigUint;
use num_traits::{One, ToPrimitive};

use crate::bits::{self, Set};
use crate::error::invalid;
use crate::matroid::Hypergraph;
use crate::{Error, Result};

pub use parse::{parse_formula, parse_formula_with, suggest_renaming};

/// Set variable `Z_k`, `1 <= k <= 64`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Var(u8);

impl Var {
    pub fn new(k: u32) -> Result<Var> {
        if (1..=64).contains(&k) {
            Ok(Var(k as u8))
        } else {
            invalid(format!("variable index {k} outside 1..=64"))
        }
    }

    pub fn index(self) -> u32 {
        self.0 as u32
    }

    fn mask(self) -> VarSet {
        1u64 << (self.0 - 1)
    }
}

impl fmt::Display for Var {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Z{}", self.0)
    }
}

/// Set of variables, bit `k-1` for `Z_k`.
pub type VarSet = u64;

pub fn var_list(s: VarSet) -> Vec<Var> {
    (0..64).filter(|i| s >> i & 1 == 1).map(|i| Var(i as u8 + 1)).collect()
}

fn var_names(s: VarSet) -> String {
    var_list(s).iter().map(Var::to_string).collect::<Vec<_>>().join(",")
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Node {
    Subset(Var, Var),
    Hyp(Var),
    Count { var: Var, p: u32, q: u32 },
    Not(Box<Formula>),
    And(Box<Formula>, Box<Formula>),
    Exists(Var, Box<Formula>),
}

/// A formula built only through the construction rules, so every value of
/// this type is well formed.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Formula {
    node: Node,
    vars: VarSet,
    free: VarSet,
    min_delta: u32,
    nodes: usize,
}

impl Formula {
    fn atom(node: Node, vars: VarSet, min_delta: u32) -> Formula {
        Formula { node, vars, free: vars, min_delta, nodes: 1 }
    }

    pub fn subset(i: Var, j: Var) -> Formula {
        Formula::atom(Node::Subset(i, j), i.mask() | j.mask(), 1)
    }

    pub fn hyp(i: Var) -> Formula {
        Formula::atom(Node::Hyp(i), i.mask(), 1)
    }

    pub fn count(var: Var, p: u32, q: u32) -> Result<Formula> {
        if q <= 1 || p >= q {
            return invalid(format!("count atom needs q > 1 and 0 <= p < q, got p={p}, q={q}"));
        }
        Ok(Formula::atom(Node::Count { var, p, q }, var.mask(), q))
    }

    pub fn not(psi: Formula) -> Formula {
        Formula {
            vars: psi.vars,
            free: psi.free,
            min_delta: psi.min_delta,
            nodes: psi.nodes + 1,
            node: Node::Not(Box::new(psi)),
        }
    }

    pub fn and(a: Formula, b: Formula) -> Result<Formula> {
        for (x, y) in [(&a, &b), (&b, &a)] {
            let clash = x.bound() & y.free;
            if clash != 0 {
                return invalid(format!("conjunction: {} bound on one side and free on the other", var_names(clash)));
            }
        }
        Ok(Formula {
            vars: a.vars | b.vars,
            free: a.free | b.free,
            min_delta: a.min_delta.max(b.min_delta),
            nodes: a.nodes + b.nodes + 1,
            node: Node::And(Box::new(a), Box::new(b)),
        })
    }

    pub fn exists(s: Var, psi: Formula) -> Result<Formula> {
        if psi.free & s.mask() == 0 {
            return invalid(format!("exists {s}: {s} is not free in its body"));
        }
        Ok(Formula {
            vars: psi.vars,
            free: psi.free & !s.mask(),
            min_delta: psi.min_delta,
            nodes: psi.nodes + 1,
            node: Node::Exists(s, Box::new(psi)),
        })
    }

    pub fn node(&self) -> &Node {
        &self.node
    }

    pub fn vars(&self) -> VarSet {
        self.vars
    }

    pub fn free(&self) -> VarSet {
        self.free
    }

    pub fn bound(&self) -> VarSet {
        self.vars & !self.free
    }

    pub fn is_sentence(&self) -> bool {
        self.free == 0
    }

    /// Largest modulus among count atoms, or 1.
    pub fn min_delta(&self) -> u32 {
        self.min_delta
    }

    pub fn is_confined(&self, delta: u32) -> bool {
        self.min_delta <= delta
    }

    pub fn size(&self) -> usize {
        self.nodes
    }

    pub fn var_count(&self) -> usize {
        self.vars.count_ones() as usize
    }

    /// Calls `f` on every subformula, parents first.
    pub fn visit(&self, f: &mut impl FnMut(&Formula)) {
        f(self);
        match &self.node {
            Node::Not(c) | Node::Exists(_, c) => c.visit(f),
            Node::And(a, b) => {
                a.visit(f);
                b.visit(f);
            }
            _ => {}
        }
    }

    fn write(&self, f: &mut fmt::Formatter<'_>, followed: bool) -> fmt::Result {
        match &self.node {
            Node::Subset(i, j) => write!(f, "{i} <= {j}"),
            Node::Hyp(i) => write!(f, "hyp({i})"),
            Node::Count { var, p, q } => write!(f, "|{var}| = {p} mod {q}"),
            Node::Not(c) => {
                f.write_str("~")?;
                if matches!(c.node, Node::And(..)) {
                    f.write_str("(")?;
                    c.write(f, false)?;
                    f.write_str(")")
                } else {
                    c.write(f, followed)
                }
            }
            Node::And(a, b) => {
                a.write(f, true)?;
                f.write_str(" & ")?;
                if matches!(b.node, Node::And(..)) {
                    f.write_str("(")?;
                    b.write(f, false)?;
                    f.write_str(")")
                } else {
                    b.write(f, followed)
                }
            }
            Node::Exists(s, c) => {
                if followed {
                    write!(f, "(exists {s} ")?;
                    c.write(f, false)?;
                    f.write_str(")")
                } else {
                    write!(f, "exists {s} ")?;
                    c.write(f, false)
                }
            }
        }
    }
}

impl fmt::Display for Formula {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.write(f, false)
    }
}

impl std::str::FromStr for Formula {
    type Err = Error;

    fn from_str(s: &str) -> Result<Formula> {
        parse_formula(s)
    }
}

/// Assignment of subsets of the ground set to free variables.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Interpretation(pub BTreeMap<Var, Set>);

impl Interpretation {
    pub fn empty() -> Self {
        Interpretation::default()
    }

    pub fn with(mut self, v: Var, x: Set) -> Self {
        self.0.insert(v, x);
        self
    }

    pub fn domain(&self) -> VarSet {
        self.0.keys().fold(0, |acc, v| acc | v.mask())
    }

    pub fn get(&self, v: Var) -> Option<Set> {
        self.0.get(&v).copied()
    }

    /// Restriction to the variables in `s`.
    pub fn restrict(&self, s: VarSet) -> Self {
        Interpretation(self.0.iter().filter(|(v, _)| v.mask() & s != 0).map(|(&v, &x)| (v, x)).collect())
    }
}

/// Satisfaction of `f` by `(h, theta)`.
pub fn satisfies(h: &Hypergraph, f: &Formula, theta: &Interpretation) -> Result<bool> {
    if theta.domain() != f.free {
        return invalid(format!(
            "interpretation covers {{{}}} but the free variables are {{{}}}",
            var_names(theta.domain()),
            var_names(f.free)
        ));
    }
    let full = h.full();
    let mut env = [0 as Set; 64];
    for (&v, &x) in &theta.0 {
        if !bits::is_subset(x, full) {
            return invalid(format!("{v} is not a subset of the ground set"));
        }
        env[v.0 as usize - 1] = x;
    }
    Ok(eval(h, f, &mut env))
}

// Only free variables are ever read, so the restriction in the conjunction
// case needs no copying.
fn eval(h: &Hypergraph, f: &Formula, env: &mut [Set; 64]) -> bool {
    let at = |v: Var, env: &[Set; 64]| env[v.0 as usize - 1];
    match &f.node {
        Node::Subset(i, j) => bits::is_subset(at(*i, env), at(*j, env)),
        Node::Hyp(i) => h.contains(at(*i, env)),
        Node::Count { var, p, q } => bits::size(at(*var, env)) as u32 % q == *p,
        Node::Not(c) => !eval(h, c, env),
        Node::And(a, b) => eval(h, a, env) && eval(h, b, env),
        Node::Exists(s, c) => {
            let slot = s.0 as usize - 1;
            let saved = env[slot];
            let found = bits::subsets(h.full()).any(|x| {
                env[slot] = x;
                eval(h, c, env)
            });
            env[slot] = saved;
            found
        }
    }
}

/// Λ_φ(s, t, δ), computed exactly.
pub fn lambda_bound(f: &Formula, s: u32, t: u32, delta: u32) -> Result<BigUint> {
    if !f.is_confined(delta) {
        return Err(Error::NotConfined { delta, needed: f.min_delta });
    }
    if (s as usize) < f.var_count() {
        return invalid(format!("s = {s} is less than the {} variables of the formula", f.var_count()));
    }
    if s == 0 || t == 0 || delta == 0 {
        return invalid("s, t and delta must be positive");
    }
    lambda(f, s, t, delta)
}

/// Largest exponent accepted in `2^Λ`.
const MAX_EXPONENT_BITS: u64 = 1 << 24;

fn lambda(f: &Formula, s: u32, t: u32, delta: u32) -> Result<BigUint> {
    Ok(match &f.node {
        Node::Count { .. } => {
            let fact: BigUint = (1..=delta).map(BigUint::from).product();
            fact.pow(s)
        }
        Node::Hyp(_) => BigUint::from(t).pow(s),
        Node::Subset(..) => BigUint::one() << (s as u64 * s as u64),
        Node::Not(c) => lambda(c, s, t, delta)?,
        Node::And(a, b) => lambda(a, s, t, delta)? * lambda(b, s, t, delta)?,
        Node::Exists(_, c) => {
            let inner = lambda(c, s, t, delta)?;
            match inner.to_u64() {
                Some(e) if e <= MAX_EXPONENT_BITS => BigUint::one() << e,
                _ => return Err(Error::Budget { what: "Λ exponent bits", cap: MAX_EXPONENT_BITS }),
            }
        }
    })
}
