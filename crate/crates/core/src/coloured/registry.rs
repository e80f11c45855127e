use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use num_bigint::BigUint;

use super::{ColouredComplement, ColouredSystem};
use crate::bits::{self, Set};
use crate::error::invalid;
use crate::logic::{lambda_bound, var_list, Formula, Interpretation, Node, Var, VarSet};
use crate::{Error, Limits, Result};

/// Output of the registry map. Tables are indexed by the variables of `S` in
/// ascending order; `Inclusions` is the `|S| x |S|` table, row-major.
///
/// The derived order compares the variant first, then contents, so sorted
/// `Set`s give a canonical form and structural equality decides equality.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Registry {
    Residues(Vec<u64>),
    Colours(Vec<usize>),
    Inclusions(Vec<bool>),
    Pair(Box<Registry>, Box<Registry>),
    Set(Vec<Registry>),
}

impl fmt::Display for Registry {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let list = |f: &mut fmt::Formatter<'_>, xs: Vec<String>| f.write_str(&xs.join(","));
        match self {
            Registry::Residues(v) => {
                f.write_str("r1[")?;
                list(f, v.iter().map(u64::to_string).collect())?;
                f.write_str("]")
            }
            Registry::Colours(v) => {
                f.write_str("r2[")?;
                list(f, v.iter().map(usize::to_string).collect())?;
                f.write_str("]")
            }
            Registry::Inclusions(v) => {
                f.write_str("r3[")?;
                list(f, v.iter().map(|&b| (b as u8).to_string()).collect())?;
                f.write_str("]")
            }
            Registry::Pair(a, b) => write!(f, "({a};{b})"),
            Registry::Set(xs) => {
                f.write_str("{")?;
                list(f, xs.iter().map(Registry::to_string).collect())?;
                f.write_str("}")
            }
        }
    }
}

struct Ctx<'a> {
    svars: Vec<Var>,
    fact: u64,
    steps: u64,
    cap: u64,
    system: &'a ColouredSystem,
}

fn slot(v: Var) -> usize {
    v.index() as usize - 1
}

fn factorial(delta: u32) -> u64 {
    (1..=delta as u64).product()
}

/// `R_{S,C,δ}(M, φ, σ)`, with `σ` defined on `S - Bound(φ)`.
pub fn registry(
    m: &ColouredSystem,
    f: &Formula,
    sigma: &Interpretation,
    s: VarSet,
    delta: u32,
    limits: &Limits,
) -> Result<Registry> {
    if f.vars() & !s != 0 {
        return invalid("the variable set S must contain every variable of the formula");
    }
    if sigma.domain() != s & !f.bound() {
        return invalid("the interpretation must cover exactly S minus the bound variables");
    }
    if !f.is_confined(delta) {
        return Err(Error::NotConfined { delta, needed: f.min_delta() });
    }
    if delta > limits.max_delta {
        return Err(Error::Budget { what: "delta", cap: limits.max_delta as u64 });
    }
    if m.ground().len() > limits.max_system_ground {
        return Err(Error::Budget { what: "system ground size", cap: limits.max_system_ground as u64 });
    }
    if m.colours().len() > limits.max_colours {
        return Err(Error::Budget { what: "colours", cap: limits.max_colours as u64 });
    }
    let mut env = [0 as Set; 64];
    for (&v, &x) in &sigma.0 {
        if !bits::is_subset(x, m.full()) {
            return invalid(format!("{v} is not a subset of the system's ground set"));
        }
        env[slot(v)] = x;
    }
    let svars = var_list(s);
    let mut ctx = Ctx { svars, fact: factorial(delta), steps: 0, cap: limits.search_states, system: m };
    build(&mut ctx, f, &mut env)
}

fn build(ctx: &mut Ctx<'_>, f: &Formula, env: &mut [Set; 64]) -> Result<Registry> {
    ctx.steps += 1;
    if ctx.steps > ctx.cap {
        return Err(Error::Budget { what: "registry steps", cap: ctx.cap });
    }
    Ok(match f.node() {
        Node::Count { .. } => {
            Registry::Residues(ctx.svars.iter().map(|&z| bits::size(env[slot(z)]) as u64 % ctx.fact).collect())
        }
        Node::Hyp(_) => Registry::Colours(ctx.svars.iter().map(|&z| ctx.system.colour(env[slot(z)])).collect()),
        Node::Subset(..) => {
            let mut t = Vec::with_capacity(ctx.svars.len() * ctx.svars.len());
            for &a in &ctx.svars {
                for &b in &ctx.svars {
                    t.push(bits::is_subset(env[slot(a)], env[slot(b)]));
                }
            }
            Registry::Inclusions(t)
        }
        Node::Not(c) => build(ctx, c, env)?,
        Node::And(a, b) => {
            let ra = with_padding(env, b.bound() & !a.bound(), |env| build(ctx, a, env))?;
            let rb = with_padding(env, a.bound() & !b.bound(), |env| build(ctx, b, env))?;
            Registry::Pair(Box::new(ra), Box::new(rb))
        }
        Node::Exists(z, c) => {
            let i = slot(*z);
            let saved = env[i];
            let mut out = BTreeSet::new();
            for x in bits::subsets(ctx.system.full()) {
                env[i] = x;
                out.insert(build(ctx, c, env)?);
            }
            env[i] = saved;
            Registry::Set(out.into_iter().collect())
        }
    })
}

/// Runs `f` with the variables of `pad` set to the empty set.
fn with_padding<T>(env: &mut [Set; 64], pad: VarSet, f: impl FnOnce(&mut [Set; 64]) -> T) -> T {
    let vars = var_list(pad);
    let saved: Vec<Set> = vars.iter().map(|&v| env[slot(v)]).collect();
    for &v in &vars {
        env[slot(v)] = 0;
    }
    let out = f(env);
    for (&v, x) in vars.iter().zip(saved) {
        env[slot(v)] = x;
    }
    out
}

/// Whether `r` and `(Π, τ)` are sympathetic, with `τ` defined on `Free(φ)`.
pub fn sympathetic(
    r: &Registry,
    f: &Formula,
    pi: &ColouredComplement,
    tau: &Interpretation,
    s: VarSet,
    delta: u32,
) -> Result<bool> {
    if f.vars() & !s != 0 {
        return invalid("the variable set S must contain every variable of the formula");
    }
    if tau.domain() != f.free() {
        return invalid("tau must cover exactly the free variables");
    }
    if !f.is_confined(delta) {
        return Err(Error::NotConfined { delta, needed: f.min_delta() });
    }
    let mut env = [0 as Set; 64];
    for (&v, &y) in &tau.0 {
        if !bits::is_subset(y, pi.full()) {
            return invalid(format!("{v} is not a subset of the complement's ground set"));
        }
        env[slot(v)] = y;
    }
    let svars = var_list(s);
    let pos: BTreeMap<Var, usize> = svars.iter().enumerate().map(|(i, &v)| (v, i)).collect();
    check(r, f, pi, &pos, &mut env)
}

fn check(
    r: &Registry,
    f: &Formula,
    pi: &ColouredComplement,
    pos: &BTreeMap<Var, usize>,
    env: &mut [Set; 64],
) -> Result<bool> {
    let k = pos.len();
    let at = |v: &Var| pos[v];
    match (f.node(), r) {
        (Node::Count { var, p, q }, Registry::Residues(t)) if t.len() == k => {
            Ok((t[at(var)] + bits::size(env[slot(*var)]) as u64) % *q as u64 == *p as u64)
        }
        (Node::Hyp(var), Registry::Colours(t)) if t.len() == k => {
            let c = t[at(var)];
            if c >= pi.colours().len() {
                return Err(Error::Shape);
            }
            Ok(pi.accepts(env[slot(*var)], c))
        }
        (Node::Subset(a, b), Registry::Inclusions(t)) if t.len() == k * k => {
            Ok(t[at(a) * k + at(b)] && bits::is_subset(env[slot(*a)], env[slot(*b)]))
        }
        (Node::Not(c), _) => Ok(!check(r, c, pi, pos, env)?),
        (Node::And(a, b), Registry::Pair(ra, rb)) => Ok(check(ra, a, pi, pos, env)? && check(rb, b, pi, pos, env)?),
        (Node::Exists(z, c), Registry::Set(children)) => {
            let i = slot(*z);
            let saved = env[i];
            let mut found = false;
            'outer: for child in children {
                for y in bits::subsets(pi.full()) {
                    env[i] = y;
                    if check(child, c, pi, pos, env)? {
                        found = true;
                        break 'outer;
                    }
                }
            }
            env[i] = saved;
            Ok(found)
        }
        _ => Err(Error::Shape),
    }
}

/// Systems grouped by registry value for a sentence, with `S = Var(φ)`.
#[derive(Clone, Debug)]
pub struct Classification {
    /// Indices into the input, each class ascending, classes by least member.
    pub classes: Vec<Vec<usize>>,
    /// One registry per class.
    pub registries: Vec<Registry>,
    /// `Λ_φ(|S|, |C|, δ)`; `None` when it exceeds `2^(2^24)`.
    pub bound: Option<BigUint>,
}

impl Classification {
    pub fn within_bound(&self) -> bool {
        self.bound.as_ref().is_none_or(|b| BigUint::from(self.classes.len()) <= *b)
    }
}

pub fn classify_systems(
    systems: &[ColouredSystem],
    f: &Formula,
    delta: u32,
    limits: &Limits,
) -> Result<Classification> {
    if !f.is_sentence() {
        return invalid("classification needs a sentence");
    }
    let Some(first) = systems.first() else {
        return Ok(Classification { classes: Vec::new(), registries: Vec::new(), bound: None });
    };
    if systems.iter().any(|m| m.colours() != first.colours()) {
        return invalid("all systems must share one colour set");
    }
    let regs: Vec<Registry> = if limits.parallel {
        use rayon::prelude::*;
        systems
            .par_iter()
            .map(|m| registry(m, f, &Interpretation::empty(), f.vars(), delta, limits))
            .collect::<Result<_>>()?
    } else {
        systems
            .iter()
            .map(|m| registry(m, f, &Interpretation::empty(), f.vars(), delta, limits))
            .collect::<Result<_>>()?
    };
    let mut index: BTreeMap<&Registry, usize> = BTreeMap::new();
    let mut classes: Vec<Vec<usize>> = Vec::new();
    let mut registries = Vec::new();
    for (i, r) in regs.iter().enumerate() {
        let k = *index.entry(r).or_insert_with(|| {
            classes.push(Vec::new());
            registries.push(r.clone());
            classes.len() - 1
        });
        classes[k].push(i);
    }
    let bound = match lambda_bound(f, f.var_count().max(1) as u32, first.colours().len() as u32, delta) {
        Ok(b) => Some(b),
        Err(Error::Budget { .. }) => None,
        Err(e) => return Err(e),
    };
    Ok(Classification { classes, registries, bound })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::coloured::coloured_sum;
    use crate::logic::{parse_formula, satisfies};

    fn names(v: &[&str]) -> Vec<String> {
        v.iter().map(|s| s.to_string()).collect()
    }

    fn z(k: u32) -> Var {
        Var::new(k).unwrap()
    }

    fn system(table: Vec<usize>) -> ColouredSystem {
        let n = table.len().trailing_zeros() as usize;
        let ground = (1..=n).map(|i| format!("u{i}")).collect();
        ColouredSystem::new(ground, names(&["1", "2"]), table, &Limits::default()).unwrap()
    }

    #[test]
    fn registry_examples() {
        let lim = Limits::default();
        let m = system(vec![1, 0]);
        let hyp = parse_formula("hyp(Z1)").unwrap();
        let sigma = Interpretation::empty().with(z(1), 1);
        assert_eq!(registry(&m, &hyp, &sigma, 1, 1, &lim).unwrap(), Registry::Colours(vec![0]));

        let m3 = ColouredSystem::from_fn(names(&["a", "b", "c"]), names(&["1"]), &lim, |_| 0).unwrap();
        let cnt = parse_formula("|Z1| = 0 mod 2").unwrap();
        let sigma = Interpretation::empty().with(z(1), 0b111);
        assert_eq!(registry(&m3, &cnt, &sigma, 1, 2, &lim).unwrap(), Registry::Residues(vec![1]));

        let ex = parse_formula("exists Z1 hyp(Z1)").unwrap();
        let r = registry(&m, &ex, &Interpretation::empty(), 1, 1, &lim).unwrap();
        assert_eq!(r, Registry::Set(vec![Registry::Colours(vec![0]), Registry::Colours(vec![1])]));
        let flat = system(vec![1, 1]);
        assert_ne!(registry(&flat, &ex, &Interpretation::empty(), 1, 1, &lim).unwrap(), r);
    }

    #[test]
    fn conjunction_pads_with_empty() {
        let lim = Limits::default();
        let m = system(vec![0, 1]);
        // Z2 is bound on the right, so the left table sees Z2 = ∅.
        let f = parse_formula("hyp(Z1) & exists Z2 hyp(Z2)").unwrap();
        let sigma = Interpretation::empty().with(z(1), 1);
        let r = registry(&m, &f, &sigma, 0b11, 1, &lim).unwrap();
        let Registry::Pair(left, right) = r else { panic!() };
        assert_eq!(*left, Registry::Colours(vec![1, 0]));
        assert_eq!(*right, Registry::Set(vec![Registry::Colours(vec![1, 0]), Registry::Colours(vec![1, 1])]));
    }

    #[test]
    fn sympathy_matches_satisfaction() {
        let lim = Limits::default();
        let m = system(vec![1, 0, 0, 1]);
        let pi = ColouredComplement::from_fn(names(&["v"]), names(&["1", "2"]), &lim, |y, c| y == 0 || c == 1).unwrap();
        let h = coloured_sum(&m, &pi, &lim).unwrap();
        for text in [
            "hyp(Z1)",
            "~hyp(Z1)",
            "Z1 <= Z2 & hyp(Z2)",
            "exists Z2 (Z1 <= Z2 & ~hyp(Z2))",
            "|Z1| = 1 mod 2 & exists Z3 (hyp(Z3) & |Z3| = 2 mod 3)",
            "exists Z1 exists Z2 (hyp(Z1) & ~Z1 <= Z2 & Z2 <= Z1)",
        ] {
            let f = parse_formula(text).unwrap();
            let free = var_list(f.free());
            let combos = 1usize << (3 * free.len());
            for k in 0..combos {
                let mut sigma = Interpretation::empty();
                let mut tau = Interpretation::empty();
                let mut theta = Interpretation::empty();
                for (i, &v) in free.iter().enumerate() {
                    let bits3 = (k >> (3 * i)) as u128 & 7;
                    let (x, y) = (bits3 & 3, bits3 >> 2);
                    sigma = sigma.with(v, x);
                    tau = tau.with(v, y);
                    theta = theta.with(v, x | y << 2);
                }
                let r = registry(&m, &f, &sigma, f.vars(), 3, &lim).unwrap();
                let lhs = sympathetic(&r, &f, &pi, &tau, f.vars(), 3).unwrap();
                assert_eq!(lhs, satisfies(&h, &f, &theta).unwrap(), "{text} k={k}");
            }
        }
    }

    #[test]
    fn shape_mismatch_is_an_error() {
        let f = parse_formula("hyp(Z1)").unwrap();
        let pi = ColouredComplement::from_fn(vec![], names(&["1", "2"]), &Limits::default(), |_, _| true).unwrap();
        let tau = Interpretation::empty().with(z(1), 0);
        assert!(matches!(sympathetic(&Registry::Residues(vec![0]), &f, &pi, &tau, 1, 1), Err(Error::Shape)));
    }

    #[test]
    fn classification_respects_bound() {
        let lim = Limits::default();
        let systems: Vec<_> =
            ColouredSystem::enumerate(names(&["u", "w"]), names(&["1", "2"]), &lim).unwrap().collect();
        let f = parse_formula("exists Z1 exists Z2 (Z1 <= Z2 & hyp(Z1) & ~hyp(Z2))").unwrap();
        let c = classify_systems(&systems, &f, 1, &lim).unwrap();
        assert!(c.bound.is_none() && c.within_bound());
        assert_eq!(c.classes.iter().map(Vec::len).sum::<usize>(), 16);
        let swapped = systems[5].relabel(names(&["p", "q"])).unwrap();
        let c2 = classify_systems(&[systems[5].clone(), swapped], &f, 1, &lim).unwrap();
        assert_eq!(c2.classes.len(), 1);
        let g = parse_formula("exists Z1 (hyp(Z1) & |Z1| = 1 mod 2)").unwrap();
        let c3 = classify_systems(&systems, &g, 2, &lim).unwrap();
        assert!(c3.bound.is_some() && c3.within_bound());
    }
}
