//! Undirected multigraphs with loops and parallel edges.

use std::collections::BTreeMap;

use crate::bits::{self, bit, members, Set};
use crate::error::invalid;
use crate::{Error, Limits, Result};

/// Hard cap imposed by the `u128` edge and vertex sets.
pub const MAX_EDGES: usize = 128;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Edge {
    pub label: String,
    pub u: usize,
    pub v: usize,
}

impl Edge {
    pub fn is_loop(&self) -> bool {
        self.u == self.v
    }

    /// The endpoint opposite `x`.
    pub fn other(&self, x: usize) -> usize {
        if self.u == x {
            self.v
        } else {
            self.u
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct Multigraph {
    vertices: Vec<String>,
    edges: Vec<Edge>,
}

impl Multigraph {
    pub fn new<S: Into<String>>(vertices: impl IntoIterator<Item = S>) -> Result<Self> {
        let mut g = Multigraph::default();
        for v in vertices {
            g.add_vertex(v)?;
        }
        Ok(g)
    }

    pub fn add_vertex(&mut self, label: impl Into<String>) -> Result<usize> {
        let label = label.into();
        if self.vertices.contains(&label) {
            return invalid(format!("duplicate vertex `{label}`"));
        }
        if self.vertices.len() == MAX_EDGES {
            return invalid(format!("more than {MAX_EDGES} vertices"));
        }
        self.vertices.push(label);
        Ok(self.vertices.len() - 1)
    }

    pub fn add_edge(&mut self, label: impl Into<String>, u: &str, v: &str) -> Result<usize> {
        let label = label.into();
        if self.edges.iter().any(|e| e.label == label) {
            return invalid(format!("duplicate edge `{label}`"));
        }
        if self.edges.len() == MAX_EDGES {
            return invalid(format!("more than {MAX_EDGES} edges"));
        }
        let (u, v) = (self.vertex(u)?, self.vertex(v)?);
        self.edges.push(Edge { label, u, v });
        Ok(self.edges.len() - 1)
    }

    pub fn vertices(&self) -> &[String] {
        &self.vertices
    }

    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    pub fn edge_labels(&self) -> Vec<String> {
        self.edges.iter().map(|e| e.label.clone()).collect()
    }

    pub fn vertex(&self, label: &str) -> Result<usize> {
        self.vertices.iter().position(|v| v == label).ok_or_else(|| Error::UnknownLabel(label.to_string()))
    }

    pub fn edge_index(&self, label: &str) -> Result<usize> {
        self.edges.iter().position(|e| e.label == label).ok_or_else(|| Error::UnknownLabel(label.to_string()))
    }

    pub fn edge_set<S: AsRef<str>>(&self, labels: &[S]) -> Result<Set> {
        labels.iter().try_fold(0, |acc, l| Ok(acc | bit(self.edge_index(l.as_ref())?)))
    }

    pub fn all_edges(&self) -> Set {
        bits::full(self.edges.len())
    }

    /// Vertices incident with at least one edge of `x`.
    pub fn vertex_set(&self, x: Set) -> Set {
        members(x).fold(0, |acc, e| acc | bit(self.edges[e].u) | bit(self.edges[e].v))
    }

    pub fn labels_of(&self, x: Set) -> Vec<String> {
        members(x).map(|e| self.edges[e].label.clone()).collect()
    }

    /// Connected components of G[x] as (vertex set, edge set), ordered by least vertex.
    pub fn components(&self, x: Set) -> Vec<(Set, Set)> {
        let n = self.vertices.len();
        let mut parent: Vec<usize> = (0..n).collect();
        fn find(p: &mut [usize], mut a: usize) -> usize {
            while p[a] != a {
                p[a] = p[p[a]];
                a = p[a];
            }
            a
        }
        for e in members(x) {
            let (a, b) = (find(&mut parent, self.edges[e].u), find(&mut parent, self.edges[e].v));
            if a != b {
                parent[a.max(b)] = a.min(b);
            }
        }
        let mut comps: BTreeMap<usize, (Set, Set)> = BTreeMap::new();
        for e in members(x) {
            let r = find(&mut parent, self.edges[e].u);
            let c = comps.entry(r).or_default();
            c.0 |= bit(self.edges[e].u) | bit(self.edges[e].v);
            c.1 |= bit(e);
        }
        comps.into_values().collect()
    }

    /// G[X] for a set of edge labels, keeping vertex and edge order.
    pub fn induced_subgraph<S: AsRef<str>>(&self, labels: &[S]) -> Result<Multigraph> {
        Ok(self.induced_by_set(self.edge_set(labels)?))
    }

    pub fn induced_by_set(&self, x: Set) -> Multigraph {
        let vs = self.vertex_set(x);
        let keep: Vec<usize> = members(vs).collect();
        let pos = |v: usize| keep.iter().position(|&k| k == v).unwrap();
        Multigraph {
            vertices: keep.iter().map(|&v| self.vertices[v].clone()).collect(),
            edges: members(x)
                .map(|e| {
                    let ed = &self.edges[e];
                    Edge { label: ed.label.clone(), u: pos(ed.u), v: pos(ed.v) }
                })
                .collect(),
        }
    }

    pub fn component_count(&self) -> usize {
        let covered = self.vertex_set(self.all_edges());
        let isolated = (0..self.vertices.len()).filter(|&v| !bits::contains(covered, v)).count();
        self.components(self.all_edges()).len() + isolated
    }

    /// A maximal spanning forest: breadth-first from the least unvisited vertex,
    /// scanning edges in index order.
    pub fn maximal_forest(&self) -> Set {
        let n = self.vertices.len();
        let mut seen = vec![false; n];
        let mut forest = 0;
        for root in 0..n {
            if seen[root] {
                continue;
            }
            seen[root] = true;
            let mut queue = std::collections::VecDeque::from([root]);
            while let Some(x) = queue.pop_front() {
                for (i, e) in self.edges.iter().enumerate() {
                    if e.is_loop() || (e.u != x && e.v != x) {
                        continue;
                    }
                    let y = e.other(x);
                    if !seen[y] {
                        seen[y] = true;
                        forest |= bit(i);
                        queue.push_back(y);
                    }
                }
            }
        }
        forest
    }

    fn degree_in(&self, x: Set, v: usize) -> usize {
        members(x)
            .map(|e| {
                let ed = &self.edges[e];
                (ed.u == v) as usize + (ed.v == v) as usize
            })
            .sum()
    }

    /// Connected and 2-regular (a loop contributes 2).
    pub fn is_cycle(&self, x: Set) -> bool {
        x != 0 && self.components(x).len() == 1 && members(self.vertex_set(x)).all(|v| self.degree_in(x, v) == 2)
    }

    /// |X| − |V(X)| + #components of G[X].
    pub fn corank(&self, x: Set) -> usize {
        bits::size(x) + self.components(x).len() - bits::size(self.vertex_set(x))
    }

    fn check_size(&self, limits: &Limits) -> Result<()> {
        if self.edges.len() > limits.max_graph_edges {
            return Err(Error::Budget { what: "graph edges for enumeration", cap: limits.max_graph_edges as u64 });
        }
        Ok(())
    }

    /// Edge sets of all cycles inside `within`, in discovery order.
    pub fn cycle_sets(&self, within: Set, limits: &Limits) -> Result<Vec<Set>> {
        let n = self.vertices.len();
        let mut adj: Vec<Vec<(usize, usize)>> = vec![Vec::new(); n];
        let mut out = Vec::new();
        let cap = limits.max_cycles;
        for e in members(within) {
            let ed = &self.edges[e];
            if ed.is_loop() {
                out.push(bit(e));
            } else {
                adj[ed.u].push((e, ed.v));
                adj[ed.v].push((e, ed.u));
            }
        }
        struct Walk<'a> {
            adj: &'a [Vec<(usize, usize)>],
            start: usize,
            out: &'a mut Vec<Set>,
            cap: u64,
        }
        fn dfs(w: &mut Walk, cur: usize, first: Option<usize>, visited: Set, path: Set) -> Result<()> {
            for &(e, y) in &w.adj[cur] {
                if bits::contains(path, e) {
                    continue;
                }
                if y == w.start {
                    // each cycle is met in both directions; keep the one leaving on the smaller edge
                    if let Some(f) = first {
                        if f < e {
                            if w.out.len() as u64 >= w.cap {
                                return Err(Error::Budget { what: "cycles", cap: w.cap });
                            }
                            w.out.push(path | bit(e));
                        }
                    }
                    continue;
                }
                if y < w.start || bits::contains(visited, y) {
                    continue;
                }
                dfs(w, y, first.or(Some(e)), visited | bit(y), path | bit(e))?;
            }
            Ok(())
        }
        if out.len() as u64 > cap {
            return Err(Error::Budget { what: "cycles", cap });
        }
        for s in 0..n {
            let mut w = Walk { adj: &adj, start: s, out: &mut out, cap };
            dfs(&mut w, s, None, bit(s), 0)?;
        }
        Ok(out)
    }

    fn sort_key(&self, x: Set) -> (usize, Vec<String>) {
        (bits::size(x), bits::sorted_labels(x, &self.edge_labels()))
    }

    /// Canonical traversal of a cycle edge set.
    pub fn cycle(&self, x: Set) -> Cycle {
        let vs: Vec<usize> = members(self.vertex_set(x)).collect();
        let start = *vs.iter().min_by_key(|&&v| &self.vertices[v]).unwrap();
        let at = |v: usize, used: Set| -> Vec<usize> {
            let mut es: Vec<usize> =
                members(x & !used).filter(|&e| self.edges[e].u == v || self.edges[e].v == v).collect();
            es.sort_by(|&a, &b| self.edges[a].label.cmp(&self.edges[b].label));
            es
        };
        let mut traversal = Vec::new();
        let mut used = 0;
        let mut cur = start;
        while used != x {
            let e = at(cur, used)[0];
            traversal.push((cur, e));
            used |= bit(e);
            cur = self.edges[e].other(cur);
        }
        Cycle { edges: x, traversal }
    }

    /// All cycles in canonical order: by size, then lexicographic edge labels.
    pub fn enumerate_cycles(&self, limits: &Limits) -> Result<Vec<Cycle>> {
        self.check_size(limits)?;
        let mut sets = self.cycle_sets(self.all_edges(), limits)?;
        sets.sort_by_cached_key(|&c| self.sort_key(c));
        Ok(sets.into_iter().map(|c| self.cycle(c)).collect())
    }

    /// All bicycles in canonical order.
    pub fn enumerate_bicycles(&self, limits: &Limits) -> Result<Vec<Bicycle>> {
        let cycles = self.enumerate_cycles(limits)?;
        let vsets: Vec<Set> = cycles.iter().map(|c| self.vertex_set(c.edges)).collect();
        let mut found: BTreeMap<Set, (BicycleKind, usize, usize)> = BTreeMap::new();
        let record = |found: &mut BTreeMap<Set, _>, x: Set, entry| -> Result<()> {
            found.entry(x).or_insert(entry);
            if found.len() as u64 > limits.max_cycles {
                return Err(Error::Budget { what: "bicycles", cap: limits.max_cycles });
            }
            Ok(())
        };
        for i in 0..cycles.len() {
            for j in i + 1..cycles.len() {
                let (ci, cj) = (cycles[i].edges, cycles[j].edges);
                let shared = vsets[i] & vsets[j];
                if shared != 0 {
                    let u = ci | cj;
                    if self.corank(u) == 2 {
                        let kind = if ci & cj != 0 { BicycleKind::Theta } else { BicycleKind::TightHandcuff };
                        record(&mut found, u, (kind, i, j))?;
                    }
                    continue;
                }
                for path in self.connecting_paths(vsets[i], vsets[j]) {
                    record(&mut found, ci | cj | path, (BicycleKind::LooseHandcuff, i, j))?;
                }
            }
        }
        let mut out: Vec<Bicycle> = found
            .into_iter()
            .map(|(x, (kind, i, j))| Bicycle { edges: x, kind, cycles: [cycles[i].clone(), cycles[j].clone()] })
            .collect();
        out.sort_by_cached_key(|b| self.sort_key(b.edges));
        Ok(out)
    }

    /// Paths from a vertex of `a` to a vertex of `b` whose interior avoids both.
    fn connecting_paths(&self, a: Set, b: Set) -> Vec<Set> {
        let mut out = Vec::new();
        fn dfs(g: &Multigraph, cur: usize, b: Set, blocked: Set, path: Set, out: &mut Vec<Set>) {
            for (e, ed) in g.edges.iter().enumerate() {
                if ed.is_loop() || (ed.u != cur && ed.v != cur) || bits::contains(path, e) {
                    continue;
                }
                let y = ed.other(cur);
                if bits::contains(b, y) {
                    out.push(path | bit(e));
                } else if !bits::contains(blocked, y) {
                    dfs(g, y, b, blocked | bit(y), path | bit(e), out);
                }
            }
        }
        for s in members(a) {
            dfs(self, s, b, a | b, 0, &mut out);
        }
        out
    }
}

/// A cycle with one fixed traversal: `(vertex, edge leaving it)` pairs.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Cycle {
    pub edges: Set,
    pub traversal: Vec<(usize, usize)>,
}

impl Cycle {
    pub fn len(&self) -> usize {
        bits::size(self.edges)
    }

    pub fn is_empty(&self) -> bool {
        self.edges == 0
    }

    pub fn labels(&self, g: &Multigraph) -> Vec<String> {
        bits::sorted_labels(self.edges, &g.edge_labels())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub enum BicycleKind {
    Theta,
    TightHandcuff,
    LooseHandcuff,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Bicycle {
    pub edges: Set,
    pub kind: BicycleKind,
    pub cycles: [Cycle; 2],
}

#[cfg(test)]
mod tests {
    use super::*;

    fn graph(vs: &[&str], es: &[(&str, &str, &str)]) -> Multigraph {
        let mut g = Multigraph::new(vs.iter().copied()).unwrap();
        for (l, u, v) in es {
            g.add_edge(*l, u, v).unwrap();
        }
        g
    }

    fn k4() -> Multigraph {
        graph(
            &["a", "b", "c", "d"],
            &[
                ("ab", "a", "b"),
                ("ac", "a", "c"),
                ("ad", "a", "d"),
                ("bc", "b", "c"),
                ("bd", "b", "d"),
                ("cd", "c", "d"),
            ],
        )
    }

    #[test]
    fn induced_subgraph_examples() {
        let g = graph(
            &["a", "b", "c", "x", "y", "z"],
            &[("1", "a", "b"), ("2", "b", "c"), ("3", "c", "a"), ("4", "x", "y"), ("5", "y", "z"), ("6", "z", "x")],
        );
        let h = g.induced_subgraph(&["1", "2", "3"]).unwrap();
        assert_eq!((h.vertices().len(), h.component_count()), (3, 1));
        let empty: [&str; 0] = [];
        assert_eq!(g.induced_subgraph(&empty).unwrap().vertices().len(), 0);
        let l = graph(&["v", "w"], &[("q", "v", "v")]).induced_subgraph(&["q"]).unwrap();
        assert_eq!((l.vertices(), l.component_count()), (&["v".to_string()][..], 1));
        assert!(matches!(g.induced_subgraph(&["nope"]), Err(Error::UnknownLabel(_))));
    }

    #[test]
    fn cycle_examples() {
        let lim = Limits::default();
        let par = graph(&["u", "v"], &[("e", "u", "v"), ("f", "u", "v")]);
        assert_eq!(par.enumerate_cycles(&lim).unwrap().len(), 1);
        let lp = graph(&["u"], &[("q", "u", "u")]);
        assert_eq!(lp.enumerate_cycles(&lim).unwrap()[0].len(), 1);
        let cs = k4().enumerate_cycles(&lim).unwrap();
        assert_eq!(cs.len(), 7);
        assert_eq!(cs.iter().filter(|c| c.len() == 3).count(), 4);
        assert!(cs.iter().all(|c| k4().is_cycle(c.edges)));
    }

    #[test]
    fn canonical_traversal() {
        let g = k4();
        let c = g.cycle(g.edge_set(&["ab", "bd", "cd", "ac"]).unwrap());
        let labels: Vec<&str> = c.traversal.iter().map(|&(_, e)| g.edges()[e].label.as_str()).collect();
        assert_eq!(labels, vec!["ab", "bd", "cd", "ac"]);
        assert_eq!(c.traversal[0].0, 0);
    }

    #[test]
    fn bicycle_examples() {
        let lim = Limits::default();
        let two_loops = graph(&["u"], &[("q1", "u", "u"), ("q2", "u", "u")]);
        let b = two_loops.enumerate_bicycles(&lim).unwrap();
        assert_eq!(b.len(), 1);
        assert_eq!(b[0].kind, BicycleKind::TightHandcuff);

        let three = graph(&["u", "v"], &[("a", "u", "v"), ("b", "u", "v"), ("c", "u", "v")]);
        assert_eq!(three.enumerate_cycles(&lim).unwrap().len(), 3);
        let b = three.enumerate_bicycles(&lim).unwrap();
        assert_eq!(b.len(), 1);
        assert_eq!(b[0].kind, BicycleKind::Theta);

        let loose = graph(&["u", "v"], &[("q1", "u", "u"), ("e", "u", "v"), ("q2", "v", "v")]);
        let b = loose.enumerate_bicycles(&lim).unwrap();
        assert_eq!(b.len(), 1);
        assert_eq!(b[0].kind, BicycleKind::LooseHandcuff);
        assert_eq!(b[0].edges, 0b111);
    }

    #[test]
    fn bicycles_have_right_cycle_counts_and_are_minimal() {
        let lim = Limits::default();
        let g = graph(
            &["a", "b", "c", "d"],
            &[
                ("1", "a", "b"),
                ("2", "b", "c"),
                ("3", "c", "a"),
                ("4", "c", "d"),
                ("5", "d", "d"),
                ("6", "a", "b"),
                ("7", "a", "a"),
            ],
        );
        let bicycles = g.enumerate_bicycles(&lim).unwrap();
        assert!(!bicycles.is_empty());
        for b in bicycles {
            let inner = g.cycle_sets(b.edges, &lim).unwrap().len();
            let want = if b.kind == BicycleKind::Theta { 3 } else { 2 };
            assert_eq!(inner, want, "{:?}", g.labels_of(b.edges));
            for e in members(b.edges) {
                let rest = b.edges & !bit(e);
                assert!(g.components(rest).iter().all(|&(_, c)| g.corank(c) < 2));
            }
        }
    }

    #[test]
    fn forest_spans_components() {
        let g = graph(
            &["a", "b", "c", "d", "e"],
            &[("1", "a", "b"), ("2", "b", "c"), ("3", "c", "a"), ("4", "d", "e"), ("5", "d", "d")],
        );
        let f = g.maximal_forest();
        assert_eq!(bits::size(f), 3);
        assert!(g.cycle_sets(f, &Limits::default()).unwrap().is_empty());
        assert_eq!(g.components(f).len(), g.components(g.all_edges()).len());
    }

    #[test]
    fn edge_cap_enforced() {
        let mut g = Multigraph::new(["u", "v"]).unwrap();
        for i in 0..31 {
            g.add_edge(format!("e{i}"), "u", "v").unwrap();
        }
        assert!(matches!(g.enumerate_cycles(&Limits::default()), Err(Error::Budget { .. })));
    }
}
