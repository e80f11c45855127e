//! Finite groups given by Cayley tables.
//!
//! Elements are indices `0..order`; index 0 is always the identity.

use std::collections::VecDeque;
use std::fmt;

use crate::error::invalid;
use crate::{Error, Limits, Result};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FiniteGroup {
    order: usize,
    table: Vec<usize>,
    inv: Vec<usize>,
    names: Vec<String>,
}

impl FiniteGroup {
    /// Builds a group from a table, checking identity, Latin square and
    /// (up to `limits.assoc_check_order`) associativity.
    pub fn from_table(names: Vec<String>, rows: Vec<Vec<usize>>, limits: &Limits) -> Result<Self> {
        let n = names.len();
        if n == 0 {
            return invalid("group has no elements");
        }
        if rows.len() != n || rows.iter().any(|r| r.len() != n) {
            return invalid("table must be order x order");
        }
        for (i, a) in names.iter().enumerate() {
            if names[..i].contains(a) {
                return invalid(format!("duplicate element name `{a}`"));
            }
        }
        let table: Vec<usize> = rows.into_iter().flatten().collect();
        if table.iter().any(|&x| x >= n) {
            return invalid("table entry out of range");
        }
        for g in 0..n {
            if table[g] != g || table[g * n] != g {
                return invalid(format!("element 0 (`{}`) is not the identity", names[0]));
            }
        }
        for g in 0..n {
            let mut in_row = vec![false; n];
            let mut in_col = vec![false; n];
            for h in 0..n {
                let (r, c) = (table[g * n + h], table[h * n + g]);
                if std::mem::replace(&mut in_row[r], true) || std::mem::replace(&mut in_col[c], true) {
                    return invalid(format!("table is not a Latin square at `{}`", names[g]));
                }
            }
        }
        if n <= limits.assoc_check_order {
            for a in 0..n {
                for b in 0..n {
                    let ab = table[a * n + b];
                    for c in 0..n {
                        if table[ab * n + c] != table[a * n + table[b * n + c]] {
                            return invalid(format!("not associative on ({}, {}, {})", names[a], names[b], names[c]));
                        }
                    }
                }
            }
        }
        let inv = (0..n).map(|g| (0..n).find(|&h| table[g * n + h] == 0).expect("Latin square has inverses")).collect();
        Ok(FiniteGroup { order: n, table, inv, names })
    }

    fn from_fn(names: Vec<String>, mul: impl Fn(usize, usize) -> usize) -> Self {
        let n = names.len();
        let table: Vec<usize> = (0..n * n).map(|k| mul(k / n, k % n)).collect();
        let inv = (0..n).map(|g| (0..n).find(|&h| table[g * n + h] == 0).unwrap()).collect();
        FiniteGroup { order: n, table, inv, names }
    }

    pub fn trivial() -> Self {
        Self::cyclic(1).unwrap()
    }

    /// Integers mod `n`; element `k` is named `k`.
    pub fn cyclic(n: usize) -> Result<Self> {
        if n == 0 {
            return invalid("cyclic group needs n >= 1");
        }
        Ok(Self::from_fn((0..n).map(|k| k.to_string()).collect(), |a, b| (a + b) % n))
    }

    /// Symmetries of the `n`-gon, order `2n`. Index `i` is the rotation `r{i}`,
    /// index `n + i` is the reflection `s{i}` = r^i s.
    pub fn dihedral(n: usize) -> Result<Self> {
        if n == 0 {
            return invalid("dihedral group needs n >= 1");
        }
        let mut names: Vec<String> = (0..n).map(|i| format!("r{i}")).collect();
        names.extend((0..n).map(|i| format!("s{i}")));
        Ok(Self::from_fn(names, |x, y| {
            let (a, f) = (x % n, x / n);
            let (b, g) = (y % n, y / n);
            let rot = if f == 0 { (a + b) % n } else { (a + n - b) % n };
            rot + n * ((f + g) % 2)
        }))
    }

    /// Permutations of `1..=n` in lexicographic order of one-line notation,
    /// with `(g·h)(x) = g(h(x))`.
    pub fn symmetric(n: usize) -> Result<Self> {
        if n == 0 || n > 5 {
            return invalid("symmetric group supported for 1 <= n <= 5");
        }
        let mut perms: Vec<Vec<usize>> = vec![(0..n).collect()];
        loop {
            let mut p = perms.last().unwrap().clone();
            let Some(i) = (0..n.saturating_sub(1)).rev().find(|&i| p[i] < p[i + 1]) else { break };
            let j = (i + 1..n).rev().find(|&j| p[j] > p[i]).unwrap();
            p.swap(i, j);
            p[i + 1..].reverse();
            perms.push(p);
        }
        let names = perms.iter().map(|p| p.iter().map(|x| char::from(b'1' + *x as u8)).collect()).collect();
        let index = |q: &Vec<usize>| perms.iter().position(|p| p == q).unwrap();
        Ok(Self::from_fn(names, |a, b| {
            let c: Vec<usize> = (0..n).map(|x| perms[a][perms[b][x]]).collect();
            index(&c)
        }))
    }

    /// Direct product; element `(x,y)` has index `x * |b| + y`.
    pub fn product(a: &FiniteGroup, b: &FiniteGroup) -> Self {
        let m = b.order;
        let mut names = Vec::with_capacity(a.order * m);
        for x in &a.names {
            for y in &b.names {
                names.push(format!("({x},{y})"));
            }
        }
        Self::from_fn(names, |p, q| a.mul(p / m, q / m) * m + b.mul(p % m, q % m))
    }

    pub fn order(&self) -> usize {
        self.order
    }

    #[inline]
    pub fn mul(&self, a: usize, b: usize) -> usize {
        self.table[a * self.order + b]
    }

    #[inline]
    pub fn inv(&self, a: usize) -> usize {
        self.inv[a]
    }

    pub fn identity(&self) -> usize {
        0
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn name(&self, g: usize) -> &str {
        &self.names[g]
    }

    pub fn index_of(&self, name: &str) -> Option<usize> {
        self.names.iter().position(|n| n == name)
    }

    pub fn element(&self, name: &str) -> Result<usize> {
        self.index_of(name).ok_or_else(|| Error::Invalid(format!("`{name}` is not an element of the group")))
    }

    pub fn row(&self, g: usize) -> &[usize] {
        &self.table[g * self.order..(g + 1) * self.order]
    }

    pub fn element_order(&self, g: usize) -> usize {
        let mut x = g;
        let mut k = 1;
        while x != 0 {
            x = self.mul(x, g);
            k += 1;
        }
        k
    }

    pub fn is_abelian(&self) -> bool {
        (0..self.order).all(|a| (0..a).all(|b| self.mul(a, b) == self.mul(b, a)))
    }

    /// Smallest subgroup containing `seeds`, sorted ascending.
    pub fn subgroup_generate(&self, seeds: &[usize]) -> Vec<usize> {
        let mut inside = vec![false; self.order];
        inside[0] = true;
        let mut queue = VecDeque::from([0]);
        while let Some(x) = queue.pop_front() {
            for &s in seeds {
                let y = self.mul(x, s);
                if !inside[y] {
                    inside[y] = true;
                    queue.push_back(y);
                }
            }
        }
        (0..self.order).filter(|&g| inside[g]).collect()
    }

    pub fn is_subgroup(&self, elements: &[usize]) -> bool {
        let mut inside = vec![false; self.order];
        for &g in elements {
            if g >= self.order {
                return false;
            }
            inside[g] = true;
        }
        inside[0] && elements.iter().all(|&a| elements.iter().all(|&b| inside[self.mul(a, self.inv(b))]))
    }

    /// The subgroup on `elements` as a group in its own right, re-indexed in
    /// ascending order of the ambient indices (so the identity stays first).
    pub fn subgroup(&self, elements: &[usize]) -> Result<FiniteGroup> {
        let mut els = elements.to_vec();
        els.sort_unstable();
        els.dedup();
        if !self.is_subgroup(&els) {
            return invalid("element set is not a subgroup");
        }
        let pos = |g: usize| els.binary_search(&g).unwrap();
        let names = els.iter().map(|&g| self.names[g].clone()).collect();
        Ok(Self::from_fn(names, |a, b| pos(self.mul(els[a], els[b]))))
    }

    /// The finite shadow of g_Γ(k): the largest subgroup generated by at most `k` elements.
    pub fn max_generated_order(&self, k: usize, limits: &Limits) -> Result<usize> {
        let k = k.min(self.order);
        let states = (self.order as u128).saturating_pow(k as u32);
        if states > limits.search_states as u128 {
            return Err(Error::Budget { what: "seed sets for max_generated_order", cap: limits.search_states });
        }
        let mut best = 1;
        let mut seeds = Vec::with_capacity(k);
        fn rec(g: &FiniteGroup, start: usize, k: usize, seeds: &mut Vec<usize>, best: &mut usize) {
            *best = (*best).max(g.subgroup_generate(seeds).len());
            if seeds.len() == k {
                return;
            }
            for x in start..g.order {
                seeds.push(x);
                rec(g, x + 1, k, seeds, best);
                seeds.pop();
            }
        }
        rec(self, 1, k, &mut seeds, &mut best);
        Ok(best)
    }
}

/// An inverse-closed list of elements, the alphabet for word lengths.
#[derive(Clone, Debug)]
pub struct GeneratingSet<'g> {
    group: &'g FiniteGroup,
    elements: Vec<usize>,
}

impl<'g> GeneratingSet<'g> {
    pub fn new(group: &'g FiniteGroup, elements: Vec<usize>) -> Result<Self> {
        if let Some(&g) = elements.iter().find(|&&g| g >= group.order()) {
            return invalid(format!("generator index {g} out of range"));
        }
        if let Some(&g) = elements.iter().find(|&&g| !elements.contains(&group.inv(g))) {
            return invalid(format!("generating set not closed under inverses: `{}`", group.name(g)));
        }
        Ok(GeneratingSet { group, elements })
    }

    pub fn group(&self) -> &'g FiniteGroup {
        self.group
    }

    pub fn elements(&self) -> &[usize] {
        &self.elements
    }

    /// Cayley-graph distance from the identity for every element.
    pub fn word_lengths(&self) -> Vec<Option<usize>> {
        let g = self.group;
        let mut dist = vec![None; g.order()];
        dist[0] = Some(0);
        let mut queue = VecDeque::from([0]);
        while let Some(x) = queue.pop_front() {
            let d = dist[x].unwrap();
            for &a in &self.elements {
                let y = g.mul(x, a);
                if dist[y].is_none() {
                    dist[y] = Some(d + 1);
                    queue.push_back(y);
                }
            }
        }
        dist
    }

    pub fn word_length(&self, g: usize) -> Option<usize> {
        self.word_lengths().get(g).copied().flatten()
    }
}

/// An injective homomorphism, stored as the image of each source index.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Monomorphism {
    pub map: Vec<usize>,
}

impl Monomorphism {
    pub fn identity(order: usize) -> Self {
        Monomorphism { map: (0..order).collect() }
    }

    /// `self ∘ first`.
    pub fn after(&self, first: &Monomorphism) -> Monomorphism {
        Monomorphism { map: first.map.iter().map(|&x| self.map[x]).collect() }
    }

    /// Checks the homomorphism equation on all pairs and injectivity.
    pub fn verify(&self, source: &FiniteGroup, target: &FiniteGroup) -> bool {
        let n = source.order();
        if self.map.len() != n || self.map.iter().any(|&x| x >= target.order()) {
            return false;
        }
        let mut hit = vec![false; target.order()];
        for &x in &self.map {
            if std::mem::replace(&mut hit[x], true) {
                return false;
            }
        }
        (0..n).all(|a| (0..n).all(|b| self.map[source.mul(a, b)] == target.mul(self.map[a], self.map[b])))
    }
}

/// Greedy generating sequence: ascending elements that enlarge the span.
fn greedy_generators(g: &FiniteGroup) -> Vec<usize> {
    let mut gens = Vec::new();
    let mut span = vec![0];
    for x in 1..g.order() {
        if span.binary_search(&x).is_err() {
            gens.push(x);
            span = g.subgroup_generate(&gens);
        }
    }
    gens
}

/// All monomorphisms `source -> target`, sorted lexicographically by map.
pub fn enumerate_monomorphisms(
    source: &FiniteGroup,
    target: &FiniteGroup,
    limits: &Limits,
) -> Result<Vec<Monomorphism>> {
    if !target.order().is_multiple_of(source.order()) {
        return Ok(Vec::new());
    }
    let gens = greedy_generators(source);
    let candidates: Vec<Vec<usize>> = gens
        .iter()
        .map(|&a| {
            let k = source.element_order(a);
            (0..target.order()).filter(|&b| target.element_order(b) == k).collect()
        })
        .collect();
    let states = candidates.iter().fold(1u128, |acc, c| acc.saturating_mul(c.len() as u128));
    if states > limits.search_states as u128 {
        return Err(Error::Budget { what: "monomorphism candidates", cap: limits.search_states });
    }
    let mut out = Vec::new();
    let mut images = vec![0; gens.len()];
    let n = source.order();
    fn rec(
        depth: usize,
        images: &mut Vec<usize>,
        candidates: &[Vec<usize>],
        extend: &dyn Fn(&[usize]) -> Option<Vec<usize>>,
        out: &mut Vec<Monomorphism>,
    ) {
        if depth == candidates.len() {
            if let Some(map) = extend(images) {
                out.push(Monomorphism { map });
            }
            return;
        }
        for &c in &candidates[depth] {
            images[depth] = c;
            rec(depth + 1, images, candidates, extend, out);
        }
    }
    let extend = |images: &[usize]| -> Option<Vec<usize>> {
        let mut map = vec![usize::MAX; n];
        map[0] = 0;
        let mut queue = VecDeque::from([0]);
        while let Some(x) = queue.pop_front() {
            for (j, &a) in gens.iter().enumerate() {
                let y = source.mul(x, a);
                let img = target.mul(map[x], images[j]);
                if map[y] == usize::MAX {
                    map[y] = img;
                    queue.push_back(y);
                } else if map[y] != img {
                    return None;
                }
            }
        }
        let mut hit = vec![false; target.order()];
        for &x in &map {
            if std::mem::replace(&mut hit[x], true) {
                return None;
            }
        }
        Some(map)
    };
    rec(0, &mut images, &candidates, &extend, &mut out);
    out.sort();
    out.dedup();
    Ok(out)
}

/// A letter `x_k` or its inverse `x_k'`; `var` is 1-based.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Letter {
    pub var: usize,
    pub inverse: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct Word(pub Vec<Letter>);

impl Word {
    /// Parses words such as `x1x1'`, `x1*x2'` or `x1 x2`; `1` and `e` denote the empty word.
    pub fn parse(text: &str) -> Result<Word> {
        let t = text.trim();
        if t == "1" || t == "e" || t.is_empty() {
            return Ok(Word::default());
        }
        let bytes = t.as_bytes();
        let mut i = 0;
        let mut letters = Vec::new();
        while i < bytes.len() {
            match bytes[i] {
                b' ' | b'*' => i += 1,
                b'x' => {
                    let start = i + 1;
                    let mut j = start;
                    while j < bytes.len() && bytes[j].is_ascii_digit() {
                        j += 1;
                    }
                    let var: usize = t[start..j]
                        .parse()
                        .map_err(|_| Error::Invalid(format!("word `{t}`: expected a variable index")))?;
                    let inverse = j < bytes.len() && bytes[j] == b'\'';
                    letters.push(Letter { var, inverse });
                    i = j + inverse as usize;
                }
                _ => return invalid(format!("word `{t}`: unexpected `{}`", &t[i..i + 1])),
            }
        }
        Ok(Word(letters))
    }

    pub fn eval(&self, group: &FiniteGroup, values: &[usize]) -> usize {
        self.0.iter().fold(0, |acc, l| {
            let g = values[l.var - 1];
            group.mul(acc, if l.inverse { group.inv(g) } else { g })
        })
    }
}

impl fmt::Display for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            return write!(f, "1");
        }
        for l in &self.0 {
            write!(f, "x{}{}", l.var, if l.inverse { "'" } else { "" })?;
        }
        Ok(())
    }
}

/// Equalities `s = 1` and inequalities `t != 1` over variables `x_1..x_arity`.
#[derive(Clone, Debug)]
pub struct WordSystem {
    arity: usize,
    equalities: Vec<Word>,
    inequalities: Vec<Word>,
}

impl WordSystem {
    pub fn new(arity: usize, equalities: Vec<Word>, inequalities: Vec<Word>) -> Result<Self> {
        if arity == 0 {
            return invalid("word system needs arity >= 1");
        }
        for w in equalities.iter().chain(&inequalities) {
            if w.0.iter().any(|l| l.var == 0 || l.var > arity) {
                return invalid(format!("word `{w}` uses a variable outside x1..x{arity}"));
            }
        }
        Ok(WordSystem { arity, equalities, inequalities })
    }

    /// Arity taken as the largest variable index mentioned (at least 1).
    pub fn inferred(equalities: Vec<Word>, inequalities: Vec<Word>) -> Result<Self> {
        let arity =
            equalities.iter().chain(&inequalities).flat_map(|w| w.0.iter().map(|l| l.var)).max().unwrap_or(1).max(1);
        Self::new(arity, equalities, inequalities)
    }

    pub fn arity(&self) -> usize {
        self.arity
    }
}

/// Lexicographically least assignment solving the system, if any.
pub fn solves_pair(group: &FiniteGroup, system: &WordSystem, limits: &Limits) -> Result<Option<Vec<usize>>> {
    let n = group.order();
    let states = (n as u128).saturating_pow(system.arity as u32);
    if states > limits.search_states as u128 {
        return Err(Error::Budget { what: "word-equation assignments", cap: limits.search_states });
    }
    let mut values = vec![0; system.arity];
    loop {
        if system.equalities.iter().all(|w| w.eval(group, &values) == 0)
            && system.inequalities.iter().all(|w| w.eval(group, &values) != 0)
        {
            return Ok(Some(values));
        }
        // last coordinate varies fastest, so the scan is lexicographic
        let mut i = system.arity;
        loop {
            if i == 0 {
                return Ok(None);
            }
            i -= 1;
            values[i] += 1;
            if values[i] < n {
                break;
            }
            values[i] = 0;
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn lim() -> Limits {
        Limits::default()
    }

    fn s3() -> FiniteGroup {
        FiniteGroup::symmetric(3).unwrap()
    }

    #[test]
    fn generate_examples() {
        let z6 = FiniteGroup::cyclic(6).unwrap();
        assert_eq!(z6.subgroup_generate(&[2, 4]), vec![0, 2, 4]);
        assert_eq!(z6.subgroup_generate(&[1]), (0..6).collect::<Vec<_>>());
        let g = s3();
        let t1 = g.element("213").unwrap();
        let t2 = g.element("321").unwrap();
        assert_eq!(g.subgroup_generate(&[t1, t2]).len(), 6);
    }

    #[test]
    fn word_length_examples() {
        let z10 = FiniteGroup::cyclic(10).unwrap();
        let gens = GeneratingSet::new(&z10, vec![1, 9]).unwrap();
        assert_eq!(gens.word_length(0), Some(0));
        assert_eq!(gens.word_length(5), Some(5));
        let g = s3();
        let t12 = g.element("213").unwrap();
        let t13 = g.element("321").unwrap();
        let gens = GeneratingSet::new(&g, vec![t12, t13]).unwrap();
        assert_eq!(gens.word_length(g.element("231").unwrap()), Some(2));
        assert_eq!(gens.word_length(g.element("312").unwrap()), Some(2));
        assert!(GeneratingSet::new(&z10, vec![1]).is_err());
    }

    #[test]
    fn word_length_absent_outside_span() {
        let z6 = FiniteGroup::cyclic(6).unwrap();
        let gens = GeneratingSet::new(&z6, vec![2, 4]).unwrap();
        assert_eq!(gens.word_length(1), None);
    }

    #[test]
    fn monomorphism_examples() {
        let z2 = FiniteGroup::cyclic(2).unwrap();
        let z3 = FiniteGroup::cyclic(3).unwrap();
        let z4 = FiniteGroup::cyclic(4).unwrap();
        let v4 = FiniteGroup::product(&z2, &z2);
        assert_eq!(enumerate_monomorphisms(&z2, &z4, &lim()).unwrap(), vec![Monomorphism { map: vec![0, 2] }]);
        assert!(enumerate_monomorphisms(&z2, &z3, &lim()).unwrap().is_empty());
        assert_eq!(enumerate_monomorphisms(&z2, &v4, &lim()).unwrap().len(), 3);
        assert_eq!(enumerate_monomorphisms(&s3(), &s3(), &lim()).unwrap().len(), 6);
        let d4 = FiniteGroup::dihedral(4).unwrap();
        assert_eq!(enumerate_monomorphisms(&d4, &d4, &lim()).unwrap().len(), 8);
    }

    #[test]
    fn solves_pair_examples() {
        let z2 = FiniteGroup::cyclic(2).unwrap();
        let z3 = FiniteGroup::cyclic(3).unwrap();
        let sys = WordSystem::new(1, vec![Word::parse("x1x1").unwrap()], vec![Word::parse("x1").unwrap()]).unwrap();
        assert_eq!(solves_pair(&z2, &sys, &lim()).unwrap(), Some(vec![1]));
        assert_eq!(solves_pair(&z3, &sys, &lim()).unwrap(), None);
        let sys = WordSystem::new(1, vec![], vec![Word::parse("x1x1'").unwrap()]).unwrap();
        assert_eq!(solves_pair(&s3(), &sys, &lim()).unwrap(), None);
    }

    #[test]
    fn non_commuting_pair_in_s3() {
        let sys = WordSystem::inferred(vec![], vec![Word::parse("x1 x2 x1' x2'").unwrap()]).unwrap();
        let w = solves_pair(&s3(), &sys, &lim()).unwrap().unwrap();
        let g = s3();
        assert_ne!(g.mul(w[0], w[1]), g.mul(w[1], w[0]));
        assert!(solves_pair(&FiniteGroup::cyclic(12).unwrap(), &sys, &lim()).unwrap().is_none());
    }

    #[test]
    fn bad_tables_rejected() {
        let names = vec!["e".to_string(), "a".to_string()];
        assert!(FiniteGroup::from_table(names.clone(), vec![vec![0, 1], vec![1, 1]], &lim()).is_err());
        assert!(FiniteGroup::from_table(names.clone(), vec![vec![1, 0], vec![0, 1]], &lim()).is_err());
        assert!(FiniteGroup::from_table(names, vec![vec![0, 1], vec![1, 0]], &lim()).is_ok());
    }

    #[test]
    fn builtins_are_groups() {
        for g in [
            FiniteGroup::dihedral(5).unwrap(),
            FiniteGroup::symmetric(4).unwrap(),
            FiniteGroup::product(&FiniteGroup::cyclic(2).unwrap(), &s3()),
        ] {
            let rows = (0..g.order()).map(|x| g.row(x).to_vec()).collect();
            let again = FiniteGroup::from_table(g.names().to_vec(), rows, &lim()).unwrap();
            assert_eq!(again, g);
        }
        assert!(!FiniteGroup::dihedral(3).unwrap().is_abelian());
        assert_eq!(FiniteGroup::symmetric(5).unwrap().order(), 120);
    }

    #[test]
    fn g_gamma_monotone() {
        let g = FiniteGroup::product(&FiniteGroup::cyclic(2).unwrap(), &FiniteGroup::cyclic(4).unwrap());
        let vals: Vec<usize> = (0..4).map(|k| g.max_generated_order(k, &lim()).unwrap()).collect();
        assert_eq!(vals, vec![1, 4, 8, 8]);
    }
}
