//! Gain graphs, biased graphs, switching and frame matroids.

use std::collections::BTreeSet;

use crate::bits::{self, bit, members, Set};
use crate::error::invalid;
use crate::groups::FiniteGroup;
use crate::matroid::{Hypergraph, Matroid, RankOracle};
use crate::multigraph::{Cycle, Multigraph};
use crate::{Error, Limits, Result};

/// A multigraph with one group element per edge, read along the edge's
/// stored orientation `(u, v)`. The reverse reading is the inverse; loops
/// read the same both ways.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Gaining {
    graph: Multigraph,
    group: FiniteGroup,
    gains: Vec<usize>,
}

/// Alternating vertex/edge sequence `v0 e0 v1 e1 ... vk`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Walk {
    pub vertices: Vec<usize>,
    pub edges: Vec<usize>,
}

impl Walk {
    /// Reads `["v0", "e0", "v1", ...]`.
    pub fn from_labels<S: AsRef<str>>(g: &Multigraph, seq: &[S]) -> Result<Walk> {
        if seq.len().is_multiple_of(2) {
            return invalid("a walk alternates vertices and edges, starting and ending at a vertex");
        }
        let mut w = Walk { vertices: Vec::new(), edges: Vec::new() };
        for (i, s) in seq.iter().enumerate() {
            if i % 2 == 0 {
                w.vertices.push(g.vertex(s.as_ref())?);
            } else {
                w.edges.push(g.edge_index(s.as_ref())?);
            }
        }
        Ok(w)
    }

    pub fn from_cycle(c: &Cycle, g: &Multigraph) -> Walk {
        let mut vertices: Vec<usize> = c.traversal.iter().map(|&(v, _)| v).collect();
        let edges: Vec<usize> = c.traversal.iter().map(|&(_, e)| e).collect();
        let (v, e) = *c.traversal.last().unwrap();
        vertices.push(g.edges()[e].other(v));
        Walk { vertices, edges }
    }
}

/// Vertex values for switching, or a request to normalize on a maximal forest.
#[derive(Clone, Debug)]
pub enum Switching {
    Values(Vec<usize>),
    Forest,
}

impl Gaining {
    pub fn new(graph: Multigraph, group: FiniteGroup, gains: Vec<usize>) -> Result<Self> {
        if gains.len() != graph.edges().len() {
            return invalid("one gain per edge");
        }
        if gains.iter().any(|&g| g >= group.order()) {
            return invalid("gain outside the group");
        }
        Ok(Gaining { graph, group, gains })
    }

    /// Gaining with every edge at the identity.
    pub fn trivial(graph: Multigraph, group: FiniteGroup) -> Self {
        let gains = vec![0; graph.edges().len()];
        Gaining { graph, group, gains }
    }

    pub fn graph(&self) -> &Multigraph {
        &self.graph
    }

    pub fn group(&self) -> &FiniteGroup {
        &self.group
    }

    /// Gain along the stored orientation.
    pub fn gain(&self, e: usize) -> usize {
        self.gains[e]
    }

    pub fn gains(&self) -> &[usize] {
        &self.gains
    }

    /// σ(e, from, to).
    pub fn oriented(&self, e: usize, from: usize) -> usize {
        let ed = &self.graph.edges()[e];
        if ed.is_loop() || ed.u == from {
            self.gains[e]
        } else {
            self.group.inv(self.gains[e])
        }
    }

    pub fn walk_gain(&self, w: &Walk) -> Result<usize> {
        if w.vertices.len() != w.edges.len() + 1 {
            return invalid("walk must have one more vertex than edges");
        }
        let mut acc = 0;
        for (i, &e) in w.edges.iter().enumerate() {
            let (a, b) = (w.vertices[i], w.vertices[i + 1]);
            let ed = self.graph.edges().get(e).ok_or_else(|| Error::Invalid(format!("no edge {e}")))?;
            if !((ed.u == a && ed.v == b) || (ed.u == b && ed.v == a)) {
                return invalid(format!("edge `{}` does not join the walk's vertices", ed.label));
            }
            acc = self.group.mul(acc, self.oriented(e, a));
        }
        Ok(acc)
    }

    pub fn cycle_gain(&self, c: &Cycle) -> usize {
        c.traversal.iter().fold(0, |acc, &(v, e)| self.group.mul(acc, self.oriented(e, v)))
    }

    /// Balance of an arbitrary edge set: some switching makes every edge the identity.
    pub fn is_balanced_set(&self, x: Set) -> bool {
        let n = self.graph.vertices().len();
        let mut pot: Vec<Option<usize>> = vec![None; n];
        let edges = self.graph.edges();
        let mut adj: Vec<Vec<usize>> = vec![Vec::new(); n];
        for e in members(x) {
            let ed = &edges[e];
            if ed.is_loop() {
                if self.gains[e] != 0 {
                    return false;
                }
                continue;
            }
            adj[ed.u].push(e);
            adj[ed.v].push(e);
        }
        let g = &self.group;
        for root in members(self.graph.vertex_set(x)) {
            if pot[root].is_some() {
                continue;
            }
            pot[root] = Some(0);
            let mut stack = vec![root];
            while let Some(a) = stack.pop() {
                let pa = pot[a].unwrap();
                for &e in &adj[a] {
                    let b = edges[e].other(a);
                    // want pot(a)^-1 · σ(e,a,b) · pot(b) = 1
                    let want = g.mul(g.inv(self.oriented(e, a)), pa);
                    match pot[b] {
                        None => {
                            pot[b] = Some(want);
                            stack.push(b);
                        }
                        Some(pb) if pb != want => return false,
                        _ => {}
                    }
                }
            }
        }
        true
    }

    /// |V(X)| minus the number of balanced components of G[X].
    pub fn frame_rank(&self, x: Set) -> usize {
        let balanced = self.graph.components(x).into_iter().filter(|&(_, es)| self.is_balanced_set(es)).count();
        bits::size(self.graph.vertex_set(x)) - balanced
    }

    pub fn balanced_cycles(&self, limits: &Limits) -> Result<BiasedGraph> {
        let cycles = self.graph.enumerate_cycles(limits)?;
        let balanced = cycles.iter().filter(|c| self.cycle_gain(c) == 0).map(|c| c.edges).collect();
        BiasedGraph::new(self.graph.clone(), balanced, limits)
    }

    pub fn switch(&self, rho: &Switching) -> Result<Gaining> {
        let g = &self.group;
        let values = match rho {
            Switching::Values(v) => {
                if v.len() != self.graph.vertices().len() || v.iter().any(|&x| x >= g.order()) {
                    return invalid("switching function must give a group element per vertex");
                }
                v.clone()
            }
            Switching::Forest => self.forest_potential(),
        };
        let gains = self
            .graph
            .edges()
            .iter()
            .zip(&self.gains)
            .map(|(ed, &s)| if ed.is_loop() { s } else { g.mul(g.mul(g.inv(values[ed.u]), s), values[ed.v]) })
            .collect();
        Ok(Gaining { graph: self.graph.clone(), group: g.clone(), gains })
    }

    fn forest_potential(&self) -> Vec<usize> {
        let g = &self.group;
        let forest = self.graph.maximal_forest();
        let edges = self.graph.edges();
        let mut pot: Vec<Option<usize>> = vec![None; self.graph.vertices().len()];
        for root in 0..pot.len() {
            if pot[root].is_some() {
                continue;
            }
            pot[root] = Some(0);
            let mut stack = vec![root];
            while let Some(a) = stack.pop() {
                for e in members(forest) {
                    let ed = &edges[e];
                    if ed.u != a && ed.v != a {
                        continue;
                    }
                    let b = ed.other(a);
                    if pot[b].is_none() {
                        pot[b] = Some(g.mul(g.inv(self.oriented(e, a)), pot[a].unwrap()));
                        stack.push(b);
                    }
                }
            }
        }
        pot.into_iter().map(Option::unwrap).collect()
    }

    pub fn frame_matroid(&self, limits: &Limits) -> Result<Matroid> {
        frame_matroid(&self.balanced_cycles(limits)?, limits)
    }

    /// Rank oracle for frame matroids too large for an explicit table.
    pub fn frame_oracle(&self) -> FrameOracle<'_> {
        FrameOracle { gaining: self, labels: self.graph.edge_labels() }
    }
}

/// The frame matroid of a gaining, evaluated on demand.
pub struct FrameOracle<'a> {
    gaining: &'a Gaining,
    labels: Vec<String>,
}

impl RankOracle for FrameOracle<'_> {
    fn ground(&self) -> &[String] {
        &self.labels
    }

    fn rank(&self, x: Set) -> usize {
        self.gaining.frame_rank(x)
    }
}

/// A multigraph with a linear class of balanced cycles.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BiasedGraph {
    graph: Multigraph,
    balanced: Vec<Set>,
}

impl BiasedGraph {
    pub fn new(graph: Multigraph, mut balanced: Vec<Set>, limits: &Limits) -> Result<Self> {
        if let Some(&c) = balanced.iter().find(|&&c| !graph.is_cycle(c)) {
            return invalid(format!("{} is not a cycle", bits::braces(c, &graph.edge_labels())));
        }
        balanced.sort_by_cached_key(|&c| (bits::size(c), bits::sorted_labels(c, &graph.edge_labels())));
        balanced.dedup();
        check_linear_class(&graph, &balanced, limits)?;
        Ok(BiasedGraph { graph, balanced })
    }

    pub fn graph(&self) -> &Multigraph {
        &self.graph
    }

    pub fn balanced(&self) -> &[Set] {
        &self.balanced
    }

    pub fn is_balanced(&self, c: Set) -> bool {
        self.balanced.contains(&c)
    }
}

/// No theta may contain exactly two balanced cycles. Two balanced cycles
/// forming a theta force the third (their symmetric difference) to be balanced.
fn check_linear_class(graph: &Multigraph, balanced: &[Set], limits: &Limits) -> Result<()> {
    let set: BTreeSet<Set> = balanced.iter().copied().collect();
    let pairs = (balanced.len() as u64).saturating_mul(balanced.len() as u64);
    if pairs > limits.search_states {
        return Err(Error::Budget { what: "balanced cycle pairs", cap: limits.search_states });
    }
    for (i, &a) in balanced.iter().enumerate() {
        for &b in &balanced[i + 1..] {
            if a & b != 0 && graph.corank(a | b) == 2 && !set.contains(&(a ^ b)) {
                return Err(Error::LinearClass(bits::braces(a | b, &graph.edge_labels())));
            }
        }
    }
    Ok(())
}

/// Frame matroid as an explicit table: X is independent when every component
/// of G[X] is a tree or contains exactly one cycle, that cycle unbalanced.
pub fn frame_matroid(b: &BiasedGraph, limits: &Limits) -> Result<Matroid> {
    let g = &b.graph;
    let h = Hypergraph::from_fn(g.edge_labels(), limits, |x| {
        g.components(x).into_iter().all(|(vs, es)| match bits::size(es) + 1 - bits::size(vs) {
            0 => true,
            1 => !b.balanced.iter().any(|&c| bits::is_subset(c, es)),
            _ => false,
        })
    })?;
    Matroid::validate(h)
}

/// Union of two gainings meeting exactly in the vertices `u`, `v`.
pub fn gain_graph_amalgam(a: &Gaining, b: &Gaining, u: &str, v: &str) -> Result<Gaining> {
    if a.group != b.group {
        return invalid("gain-graph amalgam needs identical groups");
    }
    let (ga, gb) = (&a.graph, &b.graph);
    let mut common: Vec<&String> = ga.vertices().iter().filter(|x| gb.vertices().contains(x)).collect();
    common.sort();
    let mut want = [u, v];
    want.sort();
    if common.len() != 2 || common[0] != want[0] || common[1] != want[1] {
        return invalid(format!("vertex sets must meet exactly in {{{u},{v}}}"));
    }
    let mut out = ga.clone();
    let mut gains = a.gains.clone();
    for (j, ed) in gb.edges().iter().enumerate() {
        let (bu, bv) = (&gb.vertices()[ed.u], &gb.vertices()[ed.v]);
        match ga.edge_index(&ed.label) {
            Ok(i) => {
                let ea = &ga.edges()[i];
                let (au, av) = (&ga.vertices()[ea.u], &ga.vertices()[ea.v]);
                let same = (au == bu && av == bv) || (au == bv && av == bu);
                if !same {
                    return invalid(format!("shared edge `{}` has different ends on the two sides", ed.label));
                }
                let from_b = gb.vertex(au).unwrap();
                if b.oriented(j, from_b) != a.gains[i] {
                    return Err(Error::GainDisagreement(ed.label.clone()));
                }
            }
            Err(_) => {
                for w in [bu, bv] {
                    if ga.vertex(w).is_err() && out.vertex(w).is_err() {
                        out.add_vertex(w.clone())?;
                    }
                }
                out.add_edge(ed.label.clone(), bu, bv)?;
                gains.push(b.gains[j]);
            }
        }
    }
    Gaining::new(out, a.group.clone(), gains)
}

/// Gains σ(P) of all simple u→v paths.
pub fn path_gains(g: &Gaining, u: usize, v: usize, limits: &Limits) -> Result<BTreeSet<usize>> {
    path_gains_within(g, u, v, g.graph.all_edges(), limits)
}

/// [`path_gains`] using only the edges in `within`.
pub fn path_gains_within(g: &Gaining, u: usize, v: usize, within: Set, limits: &Limits) -> Result<BTreeSet<usize>> {
    let mut out = BTreeSet::new();
    let mut count = 0u64;
    fn dfs(
        g: &Gaining,
        cur: usize,
        target: usize,
        within: Set,
        visited: Set,
        acc: usize,
        out: &mut BTreeSet<usize>,
        count: &mut u64,
        cap: u64,
    ) -> Result<()> {
        for (e, ed) in g.graph.edges().iter().enumerate() {
            if ed.is_loop() || (ed.u != cur && ed.v != cur) || !bits::contains(within, e) {
                continue;
            }
            let nxt = ed.other(cur);
            if bits::contains(visited, nxt) {
                continue;
            }
            let val = g.group.mul(acc, g.oriented(e, cur));
            if nxt == target {
                *count += 1;
                if *count > cap {
                    return Err(Error::Budget { what: "paths", cap });
                }
                out.insert(val);
            } else {
                dfs(g, nxt, target, within, visited | bit(nxt), val, out, count, cap)?;
            }
        }
        Ok(())
    }
    dfs(g, u, v, within, bit(u), 0, &mut out, &mut count, limits.max_cycles)?;
    Ok(out)
}

/// Checks the four hypotheses under which a gain-graph amalgam's frame matroid
/// is the proper amalgam. Returns the first failure, or `None`.
pub fn amalgam_conditions(a: &Gaining, b: &Gaining, u: &str, v: &str, limits: &Limits) -> Result<Option<String>> {
    match gain_graph_amalgam(a, b, u, v) {
        Ok(_) => {}
        Err(e @ (Error::Invalid(_) | Error::GainDisagreement(_))) => return Ok(Some(format!("(i)/(ii): {e}"))),
        Err(e) => return Err(e),
    }
    let (ga, gb) = (&a.graph, &b.graph);
    let shared: Vec<usize> = (0..ga.edges().len()).filter(|&i| gb.edge_index(&ga.edges()[i].label).is_ok()).collect();
    let (iu, iv) = (ga.vertex(u)?, ga.vertex(v)?);
    for w in [iu, iv] {
        let ok = shared.iter().any(|&i| {
            let ed = &ga.edges()[i];
            ed.is_loop() && ed.u == w && a.gains[i] != 0
        });
        if !ok {
            return Ok(Some(format!("(iii): no unbalanced shared loop at `{}`", ga.vertices()[w])));
        }
    }
    let links: BTreeSet<usize> =
        shared.iter().filter(|&&i| !ga.edges()[i].is_loop()).map(|&i| a.oriented(i, iu)).collect();
    let pa = path_gains(a, iu, iv, limits)?;
    let pb = path_gains(b, gb.vertex(u)?, gb.vertex(v)?, limits)?;
    if let Some(&g) = pa.intersection(&pb).find(|g| !links.contains(g)) {
        return Ok(Some(format!("(iv): paths on both sides reach gain `{}` with no shared link", a.group.name(g))));
    }
    Ok(None)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::multigraph::Multigraph;

    fn z(n: usize) -> FiniteGroup {
        FiniteGroup::cyclic(n).unwrap()
    }

    fn gaining(group: FiniteGroup, vs: &[&str], es: &[(&str, &str, &str, usize)]) -> Gaining {
        let mut g = Multigraph::new(vs.iter().copied()).unwrap();
        for (l, u, v, _) in es {
            g.add_edge(*l, u, v).unwrap();
        }
        Gaining::new(g, group, es.iter().map(|e| e.3).collect()).unwrap()
    }

    #[test]
    fn walk_gain_examples() {
        let g = gaining(z(3), &["a", "b", "c"], &[("e", "a", "b", 1), ("f", "b", "c", 1), ("h", "c", "a", 1)]);
        let back = Walk::from_labels(g.graph(), &["a", "e", "b", "e", "a"]).unwrap();
        assert_eq!(g.walk_gain(&back).unwrap(), 0);
        let tri = Walk::from_labels(g.graph(), &["a", "e", "b", "f", "c", "h", "a"]).unwrap();
        assert_eq!(g.walk_gain(&tri).unwrap(), 0);
        let bad = Walk::from_labels(g.graph(), &["a", "f", "c"]).unwrap();
        assert!(g.walk_gain(&bad).is_err());
        let t = Gaining::trivial(g.graph().clone(), z(3));
        assert_eq!(t.walk_gain(&tri).unwrap(), 0);
    }

    #[test]
    fn balanced_cycle_examples() {
        let lim = Limits::default();
        let t = Gaining::trivial(
            gaining(
                z(2),
                &["a", "b", "c"],
                &[("e", "a", "b", 0), ("f", "b", "c", 0), ("h", "c", "a", 0), ("p", "a", "b", 0)],
            )
            .graph()
            .clone(),
            z(2),
        );
        let b = t.balanced_cycles(&lim).unwrap();
        assert_eq!(b.balanced().len(), t.graph().enumerate_cycles(&lim).unwrap().len());
        let par = gaining(z(2), &["u", "v"], &[("e", "u", "v", 0), ("f", "u", "v", 1)]);
        assert!(par.balanced_cycles(&lim).unwrap().balanced().is_empty());
        let lp = gaining(z(2), &["u"], &[("q", "u", "u", 1)]);
        assert!(lp.balanced_cycles(&lim).unwrap().balanced().is_empty());
    }

    #[test]
    fn linear_class_violation_detected() {
        let mut g = Multigraph::new(["u", "v"]).unwrap();
        for l in ["a", "b", "c"] {
            g.add_edge(l, "u", "v").unwrap();
        }
        let res = BiasedGraph::new(g, vec![0b011, 0b110], &Limits::default());
        assert!(matches!(res, Err(Error::LinearClass(_))));
    }

    #[test]
    fn switching_examples() {
        let lim = Limits::default();
        let g = gaining(
            z(4),
            &["a", "b", "c"],
            &[("e", "a", "b", 1), ("f", "b", "c", 3), ("h", "c", "a", 2), ("q", "a", "a", 1)],
        );
        assert_eq!(g.switch(&Switching::Values(vec![0, 0, 0])).unwrap(), g);
        let n = g.switch(&Switching::Forest).unwrap();
        for e in members(g.graph().maximal_forest()) {
            assert_eq!(n.gain(e), 0);
        }
        assert_eq!(n.gain(3), 1);
        assert_eq!(n.balanced_cycles(&lim).unwrap(), g.balanced_cycles(&lim).unwrap());
        let s = g.switch(&Switching::Values(vec![1, 2, 3])).unwrap();
        assert_eq!(s.balanced_cycles(&lim).unwrap(), g.balanced_cycles(&lim).unwrap());
    }

    #[test]
    fn frame_matroid_examples() {
        let lim = Limits::default();
        let bl = gaining(z(2), &["u"], &[("q", "u", "u", 0)]);
        let m = bl.frame_matroid(&lim).unwrap();
        assert!(m.is_loop(0));
        let two = gaining(z(3), &["u"], &[("q1", "u", "u", 1), ("q2", "u", "u", 2)]);
        let m = two.frame_matroid(&lim).unwrap();
        assert_eq!(m, Matroid::uniform(1, &["q1", "q2"]));
        let lh = gaining(z(2), &["u", "v"], &[("q1", "u", "u", 1), ("e", "u", "v", 0), ("q2", "v", "v", 1)]);
        let m = lh.frame_matroid(&lim).unwrap();
        assert_eq!(m.rank(m.full()), 2);
        assert_eq!(lh.frame_rank(m.full()), 2);
    }

    #[test]
    fn amalgam_examples() {
        let a = gaining(
            z(3),
            &["u", "v", "x"],
            &[("qu", "u", "u", 1), ("qv", "v", "v", 2), ("e", "u", "x", 1), ("f", "x", "v", 0)],
        );
        let shared = gaining(z(3), &["u", "v"], &[("qu", "u", "u", 1), ("qv", "v", "v", 2)]);
        assert_eq!(gain_graph_amalgam(&a, &shared, "u", "v").unwrap(), a);
        let b = gaining(
            z(3),
            &["u", "v", "y"],
            &[("qu", "u", "u", 1), ("qv", "v", "v", 2), ("g", "u", "y", 2), ("h", "v", "y", 0)],
        );
        let ab = gain_graph_amalgam(&a, &b, "u", "v").unwrap();
        assert_eq!(ab.graph().edges().len(), 4 + 4 - 2);
        let bad = gaining(z(3), &["u", "v"], &[("qu", "u", "u", 2), ("qv", "v", "v", 2)]);
        assert!(matches!(gain_graph_amalgam(&a, &bad, "u", "v"), Err(Error::GainDisagreement(_))));
        let lim = Limits::default();
        // paths u→v: gain 1 on the left, 2·0⁻¹ = 2 on the right; no clash
        assert_eq!(amalgam_conditions(&a, &b, "u", "v", &lim).unwrap(), None);
        let m = ab.frame_matroid(&lim).unwrap();
        let am = crate::matroid::proper_amalgam(&a.frame_matroid(&lim).unwrap(), &b.frame_matroid(&lim).unwrap(), &lim)
            .unwrap();
        assert_eq!(m, am);
    }

    #[test]
    fn reversed_edge_reads_inverse() {
        let g = gaining(z(5), &["u", "v"], &[("e", "u", "v", 2)]);
        assert_eq!(g.oriented(0, 0), 2);
        assert_eq!(g.oriented(0, 1), 3);
    }
}
