//! Coloured systems and complements, coloured sums, registries and clefts.

mod cleft;
mod encode;
mod registry;

use std::collections::BTreeSet;

use crate::bits::{self, Set};
use crate::error::invalid;
use crate::matroid::Hypergraph;
use crate::{Error, Limits, Result};

pub use cleft::{cleft_search, is_cleft, Cleft};
pub use encode::{
    amalgam_colour_name, amalgam_complement, amalgam_side, basic, direct_sum_complement, two_sum_complement,
    two_sum_system,
};
pub use registry::{classify_systems, registry, sympathetic, Classification, Registry};

fn check_names(what: &str, names: &[String]) -> Result<()> {
    let mut seen = BTreeSet::new();
    for n in names {
        if n.is_empty() || n.contains(char::is_whitespace) || n == "-" {
            return invalid(format!("bad {what} name `{n}`"));
        }
        if !seen.insert(n) {
            return invalid(format!("duplicate {what} `{n}`"));
        }
    }
    Ok(())
}

/// `(U, c)` with `c : 2^U -> C` stored as colour indices.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct ColouredSystem {
    ground: Vec<String>,
    colours: Vec<String>,
    table: Vec<usize>,
}

impl ColouredSystem {
    pub fn new(ground: Vec<String>, colours: Vec<String>, table: Vec<usize>, limits: &Limits) -> Result<Self> {
        check_names("element", &ground)?;
        check_names("colour", &colours)?;
        if colours.is_empty() {
            return invalid("a coloured system needs at least one colour");
        }
        if ground.len() > limits.max_ground {
            return Err(Error::Budget { what: "system ground size", cap: limits.max_ground as u64 });
        }
        if table.len() != 1 << ground.len() || table.iter().any(|&c| c >= colours.len()) {
            return invalid("colour table must assign a listed colour to every subset");
        }
        Ok(ColouredSystem { ground, colours, table })
    }

    pub fn from_fn(
        ground: Vec<String>,
        colours: Vec<String>,
        limits: &Limits,
        f: impl Fn(Set) -> usize,
    ) -> Result<Self> {
        if ground.len() > limits.max_ground {
            return Err(Error::Budget { what: "system ground size", cap: limits.max_ground as u64 });
        }
        let table = (0..1u128 << ground.len()).map(f).collect();
        ColouredSystem::new(ground, colours, table, limits)
    }

    /// Every system on `ground` over `colours`, in counter order.
    pub fn enumerate(
        ground: Vec<String>,
        colours: Vec<String>,
        limits: &Limits,
    ) -> Result<impl Iterator<Item = ColouredSystem>> {
        let cells = 1u32 << ground.len().min(31);
        let total = (colours.len() as u64).checked_pow(cells).filter(|&t| t <= limits.search_states);
        let Some(total) = total else {
            return Err(Error::Budget { what: "coloured systems", cap: limits.search_states });
        };
        ColouredSystem::new(ground.clone(), colours.clone(), vec![0; cells as usize], limits)?;
        let k = colours.len() as u64;
        Ok((0..total).map(move |mut n| {
            let table = (0..cells)
                .map(|_| {
                    let c = (n % k) as usize;
                    n /= k;
                    c
                })
                .collect();
            ColouredSystem { ground: ground.clone(), colours: colours.clone(), table }
        }))
    }

    pub fn ground(&self) -> &[String] {
        &self.ground
    }

    pub fn colours(&self) -> &[String] {
        &self.colours
    }

    pub fn full(&self) -> Set {
        bits::full(self.ground.len())
    }

    pub fn colour(&self, x: Set) -> usize {
        self.table[x as usize]
    }

    pub fn colour_name(&self, x: Set) -> &str {
        &self.colours[self.colour(x)]
    }

    pub fn table(&self) -> &[usize] {
        &self.table
    }

    /// Same table under new element names.
    pub fn relabel(&self, ground: Vec<String>) -> Result<Self> {
        if ground.len() != self.ground.len() {
            return invalid("relabelling must keep the ground size");
        }
        check_names("element", &ground)?;
        Ok(ColouredSystem { ground, ..self.clone() })
    }
}

/// `(V, d)` with `d : 2^V x C -> {0,1}`; cell `(Y, i)` is at `Y·|C| + i`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct ColouredComplement {
    ground: Vec<String>,
    colours: Vec<String>,
    table: Vec<bool>,
}

impl ColouredComplement {
    pub fn new(ground: Vec<String>, colours: Vec<String>, table: Vec<bool>, limits: &Limits) -> Result<Self> {
        check_names("element", &ground)?;
        check_names("colour", &colours)?;
        if ground.len() > limits.max_ground {
            return Err(Error::Budget { what: "complement ground size", cap: limits.max_ground as u64 });
        }
        if table.len() != (1 << ground.len()) * colours.len() {
            return invalid("acceptance table must cover every (subset, colour) pair");
        }
        Ok(ColouredComplement { ground, colours, table })
    }

    pub fn from_fn(
        ground: Vec<String>,
        colours: Vec<String>,
        limits: &Limits,
        f: impl Fn(Set, usize) -> bool,
    ) -> Result<Self> {
        if ground.len() > limits.max_ground {
            return Err(Error::Budget { what: "complement ground size", cap: limits.max_ground as u64 });
        }
        let k = colours.len();
        let table = (0..(1usize << ground.len()) * k).map(|i| f((i / k) as Set, i % k)).collect();
        ColouredComplement::new(ground, colours, table, limits)
    }

    pub fn ground(&self) -> &[String] {
        &self.ground
    }

    pub fn colours(&self) -> &[String] {
        &self.colours
    }

    pub fn full(&self) -> Set {
        bits::full(self.ground.len())
    }

    pub fn accepts(&self, y: Set, colour: usize) -> bool {
        self.table[y as usize * self.colours.len() + colour]
    }

    pub fn table(&self) -> &[bool] {
        &self.table
    }

    /// Accepted pairs as `(Y, colour)`, in table order.
    pub fn accepted(&self) -> impl Iterator<Item = (Set, usize)> + '_ {
        let k = self.colours.len();
        self.table.iter().enumerate().filter(|(_, &b)| b).map(move |(i, _)| ((i / k) as Set, i % k))
    }
}

fn check_compatible(m: &ColouredSystem, pi: &ColouredComplement) -> Result<()> {
    if m.colours != pi.colours {
        return invalid("system and complement use different colour sets");
    }
    if let Some(x) = m.ground.iter().find(|x| pi.ground.contains(x)) {
        return invalid(format!("`{x}` is in both the system and the complement"));
    }
    Ok(())
}

/// `(U, c) ⊞ (V, d)` on the ground `U` followed by `V`.
pub fn coloured_sum(m: &ColouredSystem, pi: &ColouredComplement, limits: &Limits) -> Result<Hypergraph> {
    check_compatible(m, pi)?;
    if pi.ground.len() > limits.max_sum_ground {
        return Err(Error::Budget { what: "complement ground size", cap: limits.max_sum_ground as u64 });
    }
    let shift = m.ground.len();
    let ground: Vec<String> = m.ground.iter().chain(&pi.ground).cloned().collect();
    Hypergraph::from_fn(ground, limits, |z| {
        let x = z & m.full();
        let y = z >> shift;
        pi.accepts(y, m.colour(x))
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::matroid::Matroid;

    fn names(v: &[&str]) -> Vec<String> {
        v.iter().map(|s| s.to_string()).collect()
    }

    #[test]
    fn sum_examples() {
        let lim = Limits::default();
        let m = ColouredSystem::from_fn(names(&["a", "b"]), names(&["1", "2"]), &lim, |x| (x == 3) as usize).unwrap();
        let zero = ColouredComplement::from_fn(names(&["v"]), names(&["1", "2"]), &lim, |_, _| false).unwrap();
        assert_eq!(coloured_sum(&m, &zero, &lim).unwrap().hyperedges().count(), 0);
        let only_empty = ColouredComplement::from_fn(names(&["v"]), names(&["1", "2"]), &lim, |y, _| y == 0).unwrap();
        let h = coloured_sum(&m, &only_empty, &lim).unwrap();
        assert_eq!(h.hyperedges().collect::<Vec<_>>(), vec![0, 1, 2, 3]);

        let m1 = Matroid::uniform(1, &["a", "b"]);
        let m2 = Matroid::uniform(1, &["x", "y"]);
        let h = coloured_sum(&basic(&m1, &lim).unwrap(), &direct_sum_complement(&m2, &lim).unwrap(), &lim).unwrap();
        let ds = m1.direct_sum(&m2, &lim).unwrap();
        assert!(h.same_family(ds.hypergraph()));
    }

    #[test]
    fn sum_rejects_overlap_and_colour_mismatch() {
        let lim = Limits::default();
        let m = ColouredSystem::from_fn(names(&["a"]), names(&["1", "2"]), &lim, |_| 0).unwrap();
        let clash = ColouredComplement::from_fn(names(&["a"]), names(&["1", "2"]), &lim, |_, _| true).unwrap();
        assert!(coloured_sum(&m, &clash, &lim).is_err());
        let other = ColouredComplement::from_fn(names(&["v"]), names(&["1", "3"]), &lim, |_, _| true).unwrap();
        assert!(coloured_sum(&m, &other, &lim).is_err());
    }

    #[test]
    fn enumeration_counts() {
        let lim = Limits::default();
        let all: Vec<_> = ColouredSystem::enumerate(names(&["u", "w"]), names(&["1", "2"]), &lim).unwrap().collect();
        assert_eq!(all.len(), 16);
        let distinct: BTreeSet<Vec<usize>> = all.iter().map(|s| s.table().to_vec()).collect();
        assert_eq!(distinct.len(), 16);
    }
}
