//! Proper amalgams over a modular shared restriction, and the rank-2 case analysis.

use crate::bits::{self, bit, members, Set};
use crate::error::invalid;
use crate::{Error, Limits, Result};

use super::{Hypergraph, Matroid};

/// Anything with a labelled ground set and a rank function on subsets.
pub trait RankOracle {
    fn ground(&self) -> &[String];
    fn rank(&self, x: Set) -> usize;

    fn closure(&self, x: Set) -> Set {
        let r = self.rank(x);
        let rest = bits::full(self.ground().len()) & !x;
        x | members(rest).filter(|&e| self.rank(x | bit(e)) == r).fold(0, |a, e| a | bit(e))
    }

    fn is_independent(&self, x: Set) -> bool {
        self.rank(x) == bits::size(x)
    }
}

impl RankOracle for Matroid {
    fn ground(&self) -> &[String] {
        Matroid::ground(self)
    }

    fn rank(&self, x: Set) -> usize {
        Matroid::rank(self, x)
    }

    fn closure(&self, x: Set) -> Set {
        Matroid::closure(self, x)
    }
}

/// Two rank oracles glued along their common labels ℓ. The union ground lists
/// the left ground first, then the right-only labels.
pub struct Amalgam<'a, A: ?Sized, B: ?Sized> {
    left: &'a A,
    right: &'a B,
    ground: Vec<String>,
    to_left: Vec<Option<usize>>,
    to_right: Vec<Option<usize>>,
    shared: Set,
    left_part: Set,
    right_part: Set,
}

/// Which clause of the rank-2 characterization decided dependence.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Case {
    SideDependence,
    First,
    Second,
    Third,
    None,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Verdict {
    pub dependent: bool,
    pub case: Case,
}

impl<'a, A: RankOracle + ?Sized, B: RankOracle + ?Sized> Amalgam<'a, A, B> {
    pub fn new(left: &'a A, right: &'a B) -> Result<Self> {
        let mut ground: Vec<String> = left.ground().to_vec();
        ground.extend(right.ground().iter().filter(|l| !left.ground().contains(l)).cloned());
        if ground.len() > 128 {
            return invalid("amalgam ground exceeds 128 elements");
        }
        let pos = |side: &[String], l: &String| side.iter().position(|x| x == l);
        let to_left: Vec<Option<usize>> = ground.iter().map(|l| pos(left.ground(), l)).collect();
        let to_right: Vec<Option<usize>> = ground.iter().map(|l| pos(right.ground(), l)).collect();
        let mask = |f: &dyn Fn(usize) -> bool| (0..ground.len()).filter(|&i| f(i)).fold(0, |a, i| a | bit(i));
        let left_part = mask(&|i| to_left[i].is_some());
        let right_part = mask(&|i| to_right[i].is_some());
        Ok(Amalgam { shared: left_part & right_part, left, right, to_left, to_right, left_part, right_part, ground })
    }

    pub fn shared(&self) -> Set {
        self.shared
    }

    pub fn left_part(&self) -> Set {
        self.left_part
    }

    pub fn right_part(&self) -> Set {
        self.right_part
    }

    fn on_left(&self, x: Set) -> Set {
        members(x & self.left_part).fold(0, |a, i| a | bit(self.to_left[i].unwrap()))
    }

    fn on_right(&self, x: Set) -> Set {
        members(x & self.right_part).fold(0, |a, i| a | bit(self.to_right[i].unwrap()))
    }

    pub fn left_rank(&self, x: Set) -> usize {
        self.left.rank(self.on_left(x))
    }

    pub fn right_rank(&self, x: Set) -> usize {
        self.right.rank(self.on_right(x))
    }

    /// r₁(Y∩E₁) + r₂(Y∩E₂) − r_N(Y∩ℓ), with N read off the left side.
    pub fn split_rank(&self, y: Set) -> usize {
        self.left_rank(y) + self.right_rank(y) - self.left_rank(y & self.shared)
    }

    /// Left closure, as a set of union indices.
    fn left_closure(&self, x: Set) -> Set {
        let cl = self.left.closure(self.on_left(x));
        (0..self.ground.len())
            .filter(|&i| self.to_left[i].is_some_and(|j| bits::contains(cl, j)))
            .fold(0, |a, i| a | bit(i))
    }

    fn right_closure(&self, x: Set) -> Set {
        let cl = self.right.closure(self.on_right(x));
        (0..self.ground.len())
            .filter(|&i| self.to_right[i].is_some_and(|j| bits::contains(cl, j)))
            .fold(0, |a, i| a | bit(i))
    }

    /// Dependence of `x` in the amalgam by the rank-2 case analysis.
    /// Requires r₁(ℓ) = 2.
    pub fn dependence_cases(&self, x: Set) -> Result<Verdict> {
        let ell = self.shared;
        if self.left_rank(ell) != 2 {
            return invalid("case analysis needs the shared set to have rank 2");
        }
        let verdict = |case| Ok(Verdict { dependent: case != Case::None, case });
        let (x1, x2) = (x & self.left_part, x & self.right_part);
        if self.left_rank(x1) < bits::size(x1) || self.right_rank(x2) < bits::size(x2) {
            return verdict(Case::SideDependence);
        }
        let (only1, only2) = (x & !self.right_part, x & !self.left_part);
        let skew2 = |a: Set| self.right_rank(a) + self.right_rank(ell) == self.right_rank(a | ell);
        let skew1 = |a: Set| self.left_rank(a) + self.left_rank(ell) == self.left_rank(a | ell);
        if bits::is_subset(ell, self.left_closure(x1)) && !skew2(only2) {
            return verdict(Case::First);
        }
        if bits::is_subset(ell, self.right_closure(x2)) && !skew1(only1) {
            return verdict(Case::Second);
        }
        let meet = self.left_closure(only1) & self.right_closure(only2);
        if members(meet).any(|e| self.left_rank(bit(e)) == 1) {
            return verdict(Case::Third);
        }
        verdict(Case::None)
    }
}

impl<A: RankOracle + ?Sized, B: RankOracle + ?Sized> RankOracle for Amalgam<'_, A, B> {
    fn ground(&self) -> &[String] {
        &self.ground
    }

    /// `split_rank` minimised over Y ⊇ X. Elements outside ℓ never lower the
    /// expression (they add to one side's rank only), so only Y = X ∪ Z with
    /// Z ⊆ ℓ − X need be tried.
    fn rank(&self, x: Set) -> usize {
        bits::subsets(self.shared & !x).map(|z| self.split_rank(x | z)).min().unwrap()
    }
}

/// Checks the shared restriction agrees on both sides and is modular.
fn check_shared(m1: &Matroid, m2: &Matroid) -> Result<Matroid> {
    let shared: Vec<String> = m1.ground().iter().filter(|l| m2.ground().contains(l)).cloned().collect();
    let n1 = m1.restrict(&shared)?;
    let n2 = m2.restrict(&shared)?;
    if !n1.same_family(&n2) {
        return Err(Error::RestrictionMismatch);
    }
    if let Some((f, g)) = n1.modularity_witness() {
        return Err(Error::NotModular(bits::braces(f, n1.ground()), bits::braces(g, n1.ground())));
    }
    Ok(n1)
}

/// The proper amalgam on E₁ ∪ E₂ (left ground first, then right-only labels).
pub fn proper_amalgam(m1: &Matroid, m2: &Matroid, limits: &Limits) -> Result<Matroid> {
    check_shared(m1, m2)?;
    let am = Amalgam::new(m1, m2)?;
    let n = am.ground.len();
    if n > limits.max_ground {
        return Err(Error::Budget { what: "amalgam ground set size", cap: limits.max_ground as u64 });
    }
    // g(X) = min(f(X), min over x ∉ X of g(X + x)); supersets have larger masks.
    let size = 1usize << n;
    let mut g = vec![0u8; size];
    for x in (0..size).rev() {
        let mut best = am.split_rank(x as Set) as u8;
        for e in 0..n {
            if x >> e & 1 == 0 {
                best = best.min(g[x | 1 << e]);
            }
        }
        g[x] = best;
    }
    let h = Hypergraph::from_fn(am.ground.clone(), limits, |x| g[x as usize] as usize == bits::size(x))?;
    let m = Matroid::validate(h)?;
    debug_assert!(m.restrict(m1.ground()).unwrap().same_family(m1));
    debug_assert!(m.restrict(m2.ground()).unwrap().same_family(m2));
    Ok(m)
}

/// Rank-2 case analysis on an explicit pair; `x` indexes the amalgam ground.
pub fn dependence_cases(m1: &Matroid, m2: &Matroid, x: Set) -> Result<Verdict> {
    check_shared(m1, m2)?;
    Amalgam::new(m1, m2)?.dependence_cases(x)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::Limits;

    fn strs(v: &[&str]) -> Vec<String> {
        v.iter().map(|s| s.to_string()).collect()
    }

    #[test]
    fn u23_pair_gives_u24() {
        let lim = Limits::default();
        let m1 = Matroid::uniform(2, &["a", "b", "c"]);
        let m2 = Matroid::uniform(2, &["a", "b", "d"]);
        let am = proper_amalgam(&m1, &m2, &lim).unwrap();
        assert_eq!(am, Matroid::uniform(2, &["a", "b", "c", "d"]));
        let cd = am.set(&["c", "d"]).unwrap();
        assert_eq!(dependence_cases(&m1, &m2, cd).unwrap(), Verdict { dependent: false, case: Case::None });
    }

    #[test]
    fn self_amalgam_of_modular_matroid() {
        let m = Matroid::uniform(2, &["a", "b", "c"]);
        assert_eq!(proper_amalgam(&m, &m, &Limits::default()).unwrap(), m);
    }

    #[test]
    fn mismatched_restrictions_rejected() {
        let m1 = Matroid::uniform(2, &["a", "b", "c"]);
        let m2 = Matroid::uniform(1, &["a", "b", "d"]);
        assert!(matches!(proper_amalgam(&m1, &m2, &Limits::default()), Err(Error::RestrictionMismatch)));
    }

    #[test]
    fn non_modular_base_rejected() {
        let m = Matroid::uniform(3, &["a", "b", "c", "d"]);
        assert!(matches!(proper_amalgam(&m, &m, &Limits::default()), Err(Error::NotModular(..))));
    }

    #[test]
    fn parallel_elements_trigger_third_case() {
        let lim = Limits::default();
        // ℓ = {x, y} free; c ∥ x on the left, d ∥ x on the right
        let m1 = Matroid::from_circuits(strs(&["x", "y", "c"]), &[0b101], &lim).unwrap();
        let m2 = Matroid::from_circuits(strs(&["x", "y", "d"]), &[0b101], &lim).unwrap();
        let am = Amalgam::new(&m1, &m2).unwrap();
        let cd = bits::from_labels(&["c", "d"], am.ground()).unwrap();
        assert_eq!(am.dependence_cases(cd).unwrap(), Verdict { dependent: true, case: Case::Third });
        let full = proper_amalgam(&m1, &m2, &lim).unwrap();
        assert!(!full.is_independent(full.set(&["c", "d"]).unwrap()));
        let side = bits::from_labels(&["x", "c"], am.ground()).unwrap();
        assert_eq!(am.dependence_cases(side).unwrap().case, Case::SideDependence);
    }

    #[test]
    fn oracle_rank_matches_table() {
        let lim = Limits::default();
        let v = |s: &[u64]| s.to_vec();
        let m1 = Matroid::from_vectors(
            strs(&["x", "y", "c", "e"]),
            &[v(&[1, 0, 0]), v(&[0, 1, 0]), v(&[1, 1, 0]), v(&[0, 0, 1])],
            3,
            &lim,
        )
        .unwrap();
        let m2 = Matroid::from_vectors(
            strs(&["x", "y", "d", "z"]),
            &[v(&[1, 0]), v(&[0, 1]), v(&[1, 2]), v(&[0, 0])],
            3,
            &lim,
        )
        .unwrap();
        let table = proper_amalgam(&m1, &m2, &lim).unwrap();
        let am = Amalgam::new(&m1, &m2).unwrap();
        for x in 0..(1u128 << table.len()) {
            assert_eq!(am.rank(x), table.rank(x));
            assert_eq!(am.dependence_cases(x).unwrap().dependent, !table.is_independent(x));
        }
    }
}
