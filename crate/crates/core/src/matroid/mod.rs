//! Matroids as explicit independence tables over all subsets of a small ground set.

mod amalgam;

use std::fmt;

pub use amalgam::{dependence_cases, proper_amalgam, Amalgam, Case, RankOracle, Verdict};

use crate::bits::{self, bit, members, Set};
use crate::error::invalid;
use crate::{Error, Limits, Result};

/// A ground list plus a membership table indexed by subset mask.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Hypergraph {
    ground: Vec<String>,
    table: Vec<bool>,
}

impl Hypergraph {
    pub fn new(ground: Vec<String>, table: Vec<bool>, limits: &Limits) -> Result<Self> {
        check_ground(&ground, limits)?;
        if table.len() != 1 << ground.len() {
            return invalid("hyperedge table must cover every subset");
        }
        Ok(Hypergraph { ground, table })
    }

    pub fn from_fn(ground: Vec<String>, limits: &Limits, f: impl Fn(Set) -> bool) -> Result<Self> {
        check_ground(&ground, limits)?;
        let table = (0..1usize << ground.len()).map(|x| f(x as Set)).collect();
        Ok(Hypergraph { ground, table })
    }

    pub fn from_sets(ground: Vec<String>, sets: &[Set], limits: &Limits) -> Result<Self> {
        check_ground(&ground, limits)?;
        let mut table = vec![false; 1 << ground.len()];
        for &s in sets {
            if s >> ground.len() != 0 {
                return invalid("hyperedge outside the ground set");
            }
            table[s as usize] = true;
        }
        Ok(Hypergraph { ground, table })
    }

    pub fn ground(&self) -> &[String] {
        &self.ground
    }

    pub fn len(&self) -> usize {
        self.ground.len()
    }

    pub fn is_empty(&self) -> bool {
        self.ground.is_empty()
    }

    pub fn full(&self) -> Set {
        bits::full(self.ground.len())
    }

    #[inline]
    pub fn contains(&self, x: Set) -> bool {
        self.table[x as usize]
    }

    pub fn hyperedges(&self) -> impl Iterator<Item = Set> + '_ {
        (0..self.table.len()).filter(|&x| self.table[x]).map(|x| x as Set)
    }

    pub fn set<S: AsRef<str>>(&self, labels: &[S]) -> Result<Set> {
        bits::from_labels(labels, &self.ground)
    }

    pub fn labels(&self, x: Set) -> Vec<String> {
        members(x).map(|i| self.ground[i].clone()).collect()
    }

    /// The same family over a reordering of the ground list.
    pub fn reordered(&self, ground: &[String]) -> Result<Hypergraph> {
        if ground.len() != self.ground.len() {
            return invalid("reordering must keep the ground set");
        }
        let map: Vec<usize> = ground
            .iter()
            .map(|l| self.ground.iter().position(|g| g == l).ok_or_else(|| Error::UnknownLabel(l.clone())))
            .collect::<Result<_>>()?;
        let table = (0..self.table.len())
            .map(|x| self.table[members(x as Set).fold(0usize, |acc, i| acc | 1 << map[i])])
            .collect();
        Ok(Hypergraph { ground: ground.to_vec(), table })
    }

    /// Equality as families of label sets, ignoring ground order.
    pub fn same_family(&self, other: &Hypergraph) -> bool {
        let mut a = self.ground.clone();
        let mut b = other.ground.clone();
        a.sort();
        b.sort();
        a == b && other.reordered(&self.ground).map(|o| o.table == self.table).unwrap_or(false)
    }
}

fn check_ground(ground: &[String], limits: &Limits) -> Result<()> {
    if ground.len() > limits.max_ground {
        return Err(Error::Budget { what: "ground set size", cap: limits.max_ground as u64 });
    }
    for (i, a) in ground.iter().enumerate() {
        if ground[..i].contains(a) {
            return invalid(format!("duplicate ground label `{a}`"));
        }
    }
    Ok(())
}

/// The first axiom a hypergraph fails, with witnessing label sets.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Violation {
    Empty,
    Downward { missing: Vec<String>, present: Vec<String> },
    Augmentation { smaller: Vec<String>, larger: Vec<String> },
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let show = |v: &[String]| format!("{{{}}}", v.join(","));
        match self {
            Violation::Empty => write!(f, "no independent sets"),
            Violation::Downward { missing, present } => {
                write!(f, "{} is independent but its subset {} is not", show(present), show(missing))
            }
            Violation::Augmentation { smaller, larger } => {
                write!(f, "{} cannot be augmented from {}", show(smaller), show(larger))
            }
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Matroid {
    hyper: Hypergraph,
    rank: Vec<u8>,
}

fn rank_table(h: &Hypergraph) -> Vec<u8> {
    let mut rank = vec![0u8; h.table.len()];
    for x in 1..h.table.len() {
        rank[x] = if h.table[x] {
            (x as u64).count_ones() as u8
        } else {
            members(x as Set).map(|i| rank[x & !(1 << i)]).max().unwrap_or(0)
        };
    }
    rank
}

impl Matroid {
    /// Checks non-emptiness, downward closure and augmentation, in that order.
    pub fn validate(h: Hypergraph) -> Result<Matroid> {
        let labels = |x: Set| h.labels(x);
        if !h.hyperedges().any(|_| true) {
            return Err(Error::Axiom(Violation::Empty));
        }
        for j in h.hyperedges() {
            let mut subs: Vec<Set> = members(j).map(|i| j & !bit(i)).collect();
            subs.sort_unstable();
            if let Some(&sub) = subs.iter().find(|&&s| !h.contains(s)) {
                return Err(Error::Axiom(Violation::Downward { missing: labels(sub), present: labels(j) }));
            }
        }
        let rank = rank_table(&h);
        // A downward-closed family is a matroid iff no independent I has a larger
        // independent set inside {x : I + x dependent} ∪ I.
        let full = h.full();
        for i in h.hyperedges() {
            let span = i | members(full & !i).filter(|&x| !h.contains(i | bit(x))).fold(0, |a, x| a | bit(x));
            if rank[span as usize] as usize > bits::size(i) {
                let want = bits::size(i) + 1;
                let larger =
                    bits::subsets(span).find(|&j| bits::size(j) == want && h.contains(j)).expect("rank exceeds |I|");
                return Err(Error::Axiom(Violation::Augmentation { smaller: labels(i), larger: labels(larger) }));
            }
        }
        Ok(Matroid { hyper: h, rank })
    }

    /// Independent sets are those containing no listed circuit.
    pub fn from_circuits(ground: Vec<String>, circuits: &[Set], limits: &Limits) -> Result<Matroid> {
        let h = Hypergraph::from_fn(ground, limits, |x| !circuits.iter().any(|&c| bits::is_subset(c, x)))?;
        Matroid::validate(h)
    }

    pub fn uniform(r: usize, labels: &[&str]) -> Matroid {
        let ground: Vec<String> = labels.iter().map(|s| s.to_string()).collect();
        let h = Hypergraph::from_fn(ground, &Limits::default(), |x| bits::size(x) <= r).unwrap();
        Matroid::validate(h).unwrap()
    }

    pub fn free(labels: &[&str]) -> Matroid {
        Matroid::uniform(labels.len(), labels)
    }

    /// Column matroid of vectors over GF(p).
    pub fn from_vectors(ground: Vec<String>, vectors: &[Vec<u64>], p: u64, limits: &Limits) -> Result<Matroid> {
        if ground.len() != vectors.len() {
            return invalid("one vector per ground element");
        }
        if !is_prime(p) {
            return invalid(format!("{p} is not prime"));
        }
        let h = Hypergraph::from_fn(ground, limits, |x| {
            let rows: Vec<Vec<u64>> = members(x).map(|i| vectors[i].clone()).collect();
            gf_rank(rows, p) == bits::size(x)
        })?;
        Matroid::validate(h)
    }

    /// PG(2,p): projective points of GF(p)^3, labelled by normalized coordinates.
    pub fn projective_plane(p: u64, limits: &Limits) -> Result<Matroid> {
        if !is_prime(p) {
            return invalid(format!("projective planes need a prime field; {p} is not prime"));
        }
        let points = p * p + p + 1;
        if points > limits.max_ground as u64 {
            return Err(Error::Budget { what: "projective plane points", cap: limits.max_ground as u64 });
        }
        let mut vectors = Vec::new();
        for a in 0..p {
            for b in 0..p {
                for c in 0..p {
                    let v = vec![a, b, c];
                    if v.iter().find(|&&x| x != 0) == Some(&1) {
                        vectors.push(v);
                    }
                }
            }
        }
        vectors.sort_by(|a, b| b.cmp(a));
        let ground = vectors.iter().map(|v| v.iter().map(|x| x.to_string()).collect::<String>()).collect();
        Matroid::from_vectors(ground, &vectors, p, limits)
    }

    pub fn hypergraph(&self) -> &Hypergraph {
        &self.hyper
    }

    pub fn into_hypergraph(self) -> Hypergraph {
        self.hyper
    }

    pub fn ground(&self) -> &[String] {
        &self.hyper.ground
    }

    pub fn len(&self) -> usize {
        self.hyper.len()
    }

    pub fn is_empty(&self) -> bool {
        self.hyper.is_empty()
    }

    pub fn full(&self) -> Set {
        self.hyper.full()
    }

    pub fn set<S: AsRef<str>>(&self, labels: &[S]) -> Result<Set> {
        self.hyper.set(labels)
    }

    pub fn labels(&self, x: Set) -> Vec<String> {
        self.hyper.labels(x)
    }

    #[inline]
    pub fn is_independent(&self, x: Set) -> bool {
        self.hyper.contains(x)
    }

    #[inline]
    pub fn rank(&self, x: Set) -> usize {
        self.rank[x as usize] as usize
    }

    pub fn closure(&self, x: Set) -> Set {
        let r = self.rank(x);
        x | members(self.full() & !x).filter(|&e| self.rank(x | bit(e)) == r).fold(0, |a, e| a | bit(e))
    }

    pub fn rank_closure(&self, x: Set) -> (usize, Set) {
        (self.rank(x), self.closure(x))
    }

    pub fn is_loop(&self, e: usize) -> bool {
        self.rank(bit(e)) == 0
    }

    pub fn is_coloop(&self, e: usize) -> bool {
        self.rank(self.full() & !bit(e)) < self.rank(self.full())
    }

    /// Ranks of disjoint sets add.
    pub fn is_skew(&self, a: Set, b: Set) -> bool {
        self.rank(a) + self.rank(b) == self.rank(a | b)
    }

    fn canonical(&self, mut sets: Vec<Set>) -> Vec<Set> {
        sets.sort_by_cached_key(|&x| (bits::size(x), bits::sorted_labels(x, self.ground())));
        sets
    }

    pub fn flats(&self) -> Vec<Set> {
        let all = (0..1usize << self.len()).map(|x| x as Set).filter(|&x| self.closure(x) == x).collect();
        self.canonical(all)
    }

    pub fn circuits(&self) -> Vec<Set> {
        let all = (0..1usize << self.len())
            .map(|x| x as Set)
            .filter(|&x| !self.is_independent(x) && members(x).all(|i| self.is_independent(x & !bit(i))))
            .collect();
        self.canonical(all)
    }

    /// Number of rank-1 flats inside a flat.
    pub fn points_on(&self, flat: Set) -> usize {
        let mut points: Vec<Set> = members(flat).filter(|&e| !self.is_loop(e)).map(|e| self.closure(bit(e))).collect();
        points.sort_unstable();
        points.dedup();
        points.len()
    }

    /// Rank-2 flats with at least four rank-1 flats.
    pub fn long_lines(&self) -> Vec<Set> {
        self.flats().into_iter().filter(|&f| self.rank(f) == 2 && self.points_on(f) >= 4).collect()
    }

    pub fn circuits_lines(&self) -> (Vec<Set>, Vec<Set>) {
        (self.circuits(), self.long_lines())
    }

    /// Modular: r(F)+r(G) = r(F∩G)+r(F∪G) for all pairs of flats.
    /// Returns the first failing pair of flats.
    pub fn modularity_witness(&self) -> Option<(Set, Set)> {
        let flats = self.flats();
        for (i, &f) in flats.iter().enumerate() {
            for &g in &flats[i + 1..] {
                if self.rank(f) + self.rank(g) != self.rank(f & g) + self.rank(f | g) {
                    return Some((f, g));
                }
            }
        }
        None
    }

    pub fn is_modular(&self) -> bool {
        self.modularity_witness().is_none()
    }

    pub fn restrict_set(&self, x: Set) -> Matroid {
        let ground: Vec<String> = self.labels(x);
        let idx: Vec<usize> = members(x).collect();
        let lift = |y: Set| members(y).fold(0 as Set, |a, i| a | bit(idx[i]));
        let table = (0..1usize << idx.len()).map(|y| self.is_independent(lift(y as Set))).collect();
        let rank = (0..1usize << idx.len()).map(|y| self.rank[lift(y as Set) as usize]).collect();
        Matroid { hyper: Hypergraph { ground, table }, rank }
    }

    pub fn restrict<S: AsRef<str>>(&self, labels: &[S]) -> Result<Matroid> {
        Ok(self.restrict_set(self.set(labels)?))
    }

    pub fn direct_sum(&self, other: &Matroid, limits: &Limits) -> Result<Matroid> {
        if let Some(l) = self.ground().iter().find(|l| other.ground().contains(l)) {
            return invalid(format!("direct sum grounds overlap at `{l}`"));
        }
        let n = self.len();
        let mut ground = self.ground().to_vec();
        ground.extend_from_slice(other.ground());
        let left = self.full();
        let h = Hypergraph::from_fn(ground, limits, |x| self.is_independent(x & left) && other.is_independent(x >> n))?;
        Matroid::validate(h)
    }

    pub fn relabel(&self, f: impl Fn(&str) -> String) -> Result<Matroid> {
        let ground: Vec<String> = self.ground().iter().map(|l| f(l)).collect();
        check_ground(&ground, &Limits { max_ground: usize::MAX, ..Limits::default() })?;
        Ok(Matroid { hyper: Hypergraph { ground, table: self.hyper.table.clone() }, rank: self.rank.clone() })
    }

    pub fn same_family(&self, other: &Matroid) -> bool {
        self.hyper.same_family(&other.hyper)
    }
}

/// Which combination `combine` performs.
pub enum Combine<'a> {
    Restriction(&'a Matroid, Set),
    DirectSum(&'a Matroid, &'a Matroid),
}

pub fn combine(kind: Combine<'_>, limits: &Limits) -> Result<Matroid> {
    match kind {
        Combine::Restriction(m, x) => {
            if x & !m.full() != 0 {
                return invalid("restriction set outside the ground set");
            }
            Ok(m.restrict_set(x))
        }
        Combine::DirectSum(a, b) => a.direct_sum(b, limits),
    }
}

pub fn is_prime(p: u64) -> bool {
    p >= 2 && (2..).take_while(|d| d * d <= p).all(|d| !p.is_multiple_of(d))
}

fn gf_rank(mut rows: Vec<Vec<u64>>, p: u64) -> usize {
    let cols = rows.first().map_or(0, |r| r.len());
    let pow = |mut b: u64, mut e: u64| {
        let mut r = 1;
        while e > 0 {
            if e & 1 == 1 {
                r = r * b % p;
            }
            b = b * b % p;
            e >>= 1;
        }
        r
    };
    let mut rank = 0;
    for c in 0..cols {
        let Some(piv) = (rank..rows.len()).find(|&r| !rows[r][c].is_multiple_of(p)) else { continue };
        rows.swap(rank, piv);
        let inv = pow(rows[rank][c] % p, p - 2);
        for r in 0..rows.len() {
            if r != rank && !rows[r][c].is_multiple_of(p) {
                let factor = rows[r][c] * inv % p;
                for k in 0..cols {
                    rows[r][k] = (rows[r][k] + p * p - factor * rows[rank][k] % p) % p;
                }
            }
        }
        rank += 1;
    }
    rank
}

#[cfg(test)]
mod tests {
    use super::*;

    fn strs(v: &[&str]) -> Vec<String> {
        v.iter().map(|s| s.to_string()).collect()
    }

    #[test]
    fn validate_examples() {
        let lim = Limits::default();
        assert!(Matroid::validate(Matroid::uniform(2, &["a", "b", "c"]).into_hypergraph()).is_ok());
        let h = Hypergraph::from_sets(strs(&["a", "b"]), &[0, 0b11], &lim).unwrap();
        match Matroid::validate(h) {
            Err(Error::Axiom(Violation::Downward { missing, present })) => {
                assert_eq!((missing, present), (strs(&["a"]), strs(&["a", "b"])));
            }
            other => panic!("{other:?}"),
        }
        let h = Hypergraph::from_sets(strs(&["a", "b"]), &[0b01, 0b10], &lim).unwrap();
        assert!(matches!(Matroid::validate(h), Err(Error::Axiom(Violation::Downward { .. }))));
        let h = Hypergraph::from_sets(strs(&["a", "b"]), &[], &lim).unwrap();
        assert!(matches!(Matroid::validate(h), Err(Error::Axiom(Violation::Empty))));
        // {a,b} and {c} maximal: fails augmentation
        let h = Hypergraph::from_sets(strs(&["a", "b", "c"]), &[0, 1, 2, 4, 3], &lim).unwrap();
        assert!(matches!(Matroid::validate(h), Err(Error::Axiom(Violation::Augmentation { .. }))));
        let big: Vec<String> = (0..21).map(|i| format!("e{i}")).collect();
        assert!(matches!(Hypergraph::from_fn(big, &lim, |_| true), Err(Error::Budget { .. })));
    }

    #[test]
    fn rank_closure_examples() {
        let u23 = Matroid::uniform(2, &["a", "b", "c"]);
        assert_eq!(u23.rank_closure(0b001), (1, 0b001));
        let lim = Limits::default();
        let m = Matroid::from_circuits(strs(&["l", "x"]), &[0b01], &lim).unwrap();
        assert!(bits::contains(m.closure(0), 0));
        let fano = Matroid::projective_plane(2, &lim).unwrap();
        let (r, cl) = fano.rank_closure(0b11);
        assert_eq!((r, bits::size(cl)), (2, 3));
    }

    #[test]
    fn circuits_lines_examples() {
        let u24 = Matroid::uniform(2, &["a", "b", "c", "d"]);
        let (c, l) = u24.circuits_lines();
        assert_eq!(c.len(), 4);
        assert!(c.iter().all(|&x| bits::size(x) == 3));
        assert_eq!(l, vec![0b1111]);
        let u12 = Matroid::uniform(1, &["a", "b"]);
        assert_eq!(u12.circuits(), vec![0b11]);
        let fano = Matroid::projective_plane(2, &Limits::default()).unwrap();
        let lines: Vec<Set> = fano.flats().into_iter().filter(|&f| fano.rank(f) == 2).collect();
        assert_eq!(lines.len(), 7);
        assert!(fano.long_lines().is_empty());
    }

    #[test]
    fn combine_examples() {
        let lim = Limits::default();
        let a = Matroid::free(&["a"]);
        let b = Matroid::free(&["b"]);
        let s = combine(Combine::DirectSum(&a, &b), &lim).unwrap();
        assert_eq!(s, Matroid::free(&["a", "b"]));
        assert!(combine(Combine::DirectSum(&a, &a), &lim).is_err());
        let u = Matroid::uniform(2, &["a", "b", "c", "d"]);
        let x = u.restrict(&["a", "b", "c"]).unwrap();
        assert_eq!(x.restrict(&["a", "c"]).unwrap(), u.restrict(&["a", "c"]).unwrap());
        assert_eq!(x, Matroid::uniform(2, &["a", "b", "c"]));
    }

    #[test]
    fn projective_planes() {
        let lim = Limits::default();
        let p2 = Matroid::projective_plane(2, &lim).unwrap();
        assert_eq!((p2.len(), p2.rank(p2.full())), (7, 3));
        assert_eq!(Matroid::projective_plane(3, &lim).unwrap().len(), 13);
        assert!(Matroid::projective_plane(4, &lim).is_err());
        assert!(Matroid::projective_plane(5, &lim).is_err());
        assert!(p2.modularity_witness().is_none());
    }

    #[test]
    fn non_modular_example() {
        // two skew lines in rank 4 (free matroid on 4 elements is modular; U_{3,4} is not)
        let u34 = Matroid::uniform(3, &["a", "b", "c", "d"]);
        assert!(!u34.is_modular());
        assert!(Matroid::uniform(2, &["a", "b", "c", "d", "e"]).is_modular());
    }

    #[test]
    fn reorder_round_trip() {
        let m = Matroid::from_circuits(strs(&["a", "b", "c"]), &[0b011], &Limits::default()).unwrap();
        let h = m.hypergraph().reordered(&strs(&["c", "b", "a"])).unwrap();
        assert!(h.same_family(m.hypergraph()));
        assert!(!h.contains(0b110));
    }
}
