//! The H and Λ gadget families: construction, the dagger conditions, parameter
//! search and the closing-cycle witness.
//!
//! Vertex names are `alpha1`, `beta1`, `gamma1`, ...; edge labels follow the
//! collections (`A_Id`, `B2_1`, `K1`, `T3`, `D4_2`, `Q7`, ...). The bold
//! connectors are `T1..T5` on β₁→α₁, α₂→β₂, γ_last→β₂, β₁→δ₁, δ₂→β₂.

use std::collections::BTreeSet;
use std::fmt::Write as _;

use rayon::prelude::*;

use crate::bits::{self, bit, members, Set};
use crate::error::invalid;
use crate::gain::{amalgam_conditions, path_gains, path_gains_within, Gaining, Walk};
use crate::groups::{FiniteGroup, GeneratingSet};
use crate::multigraph::Multigraph;
use crate::{Error, Limits, Result};

/// A gaining with named edge collections and a two-vertex base.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Gadget {
    gaining: Gaining,
    collections: Vec<(String, Vec<usize>)>,
    base: Set,
    base_vertices: [usize; 2],
}

impl Gadget {
    pub fn gaining(&self) -> &Gaining {
        &self.gaining
    }

    pub fn collections(&self) -> &[(String, Vec<usize>)] {
        &self.collections
    }

    pub fn collection(&self, name: &str) -> Option<&[usize]> {
        self.collections.iter().find(|(n, _)| n == name).map(|(_, v)| v.as_slice())
    }

    fn edges_of(&self, prefix: &str) -> Set {
        self.collections
            .iter()
            .filter(|(n, _)| n.starts_with(prefix) && n[prefix.len()..].chars().all(|c| c.is_ascii_digit()))
            .flat_map(|(_, v)| v.iter().copied())
            .fold(0, |a, e| a | bit(e))
    }

    /// The shared edge set ℓ used for amalgamation.
    pub fn base(&self) -> Set {
        self.base
    }

    /// δ₁ and δ₂.
    pub fn base_vertices(&self) -> [usize; 2] {
        self.base_vertices
    }

    /// One `collection NAME: e1 e2 ...` line per collection, then the base.
    pub fn manifest(&self) -> String {
        let labels = self.gaining.graph().edge_labels();
        let mut out = String::new();
        for (name, es) in &self.collections {
            let names: Vec<&str> = es.iter().map(|&e| labels[e].as_str()).collect();
            writeln!(out, "collection {name}: {}", names.join(" ")).unwrap();
        }
        writeln!(out, "collection base: {}", bits::render(self.base, &labels)).unwrap();
        out
    }
}

struct Builder {
    graph: Multigraph,
    gains: Vec<usize>,
    collections: Vec<(String, Vec<usize>)>,
}

impl Builder {
    fn new(vertices: Vec<String>) -> Result<Self> {
        Ok(Builder { graph: Multigraph::new(vertices)?, gains: Vec::new(), collections: Vec::new() })
    }

    fn edge(&mut self, coll: &str, label: String, u: &str, v: &str, gain: usize) -> Result<usize> {
        let e = self.graph.add_edge(label, u, v)?;
        self.gains.push(gain);
        match self.collections.iter_mut().find(|(n, _)| n == coll) {
            Some((_, v)) => v.push(e),
            None => self.collections.push((coll.to_string(), vec![e])),
        }
        Ok(e)
    }

    fn tag(&mut self, coll: &str, edges: Vec<usize>) {
        self.collections.push((coll.to_string(), edges));
    }

    /// Adds `D{i}` pairs and `Q{i}` loops; `keep` selects by 0-based index,
    /// labels keep their full-layer numbering.
    fn layer(
        &mut self,
        pairs: &[(&str, &str)],
        loops: &[String],
        d: &[[usize; 2]],
        q: &[usize],
        keep: Option<(&[usize], &[usize])>,
    ) -> Result<()> {
        if d.len() != pairs.len() || q.len() != loops.len() {
            return invalid(format!("expected {} d-value pairs and {} q-values", pairs.len(), loops.len()));
        }
        let keep_d = |i: usize| keep.is_none_or(|(kd, _)| kd.contains(&i));
        let keep_q = |i: usize| keep.is_none_or(|(_, kq)| kq.contains(&i));
        for (i, (&(u, v), vals)) in pairs.iter().zip(d).enumerate().filter(|(i, _)| keep_d(*i)) {
            for (j, &x) in vals.iter().enumerate() {
                self.edge(&format!("D{}", i + 1), format!("D{}_{}", i + 1, j + 1), u, v, x)?;
            }
        }
        for (i, (w, &x)) in loops.iter().zip(q).enumerate().filter(|(i, _)| keep_q(*i)) {
            self.edge("Q", format!("Q{}", i + 1), w, w, x)?;
        }
        Ok(())
    }

    fn finish(self, group: &FiniteGroup, base: Set) -> Result<Gadget> {
        let base_vertices = [self.graph.vertex("delta1")?, self.graph.vertex("delta2")?];
        let gaining = Gaining::new(self.graph, group.clone(), self.gains)?;
        Ok(Gadget { gaining, collections: self.collections, base, base_vertices })
    }
}

fn coll(b: &Builder, name: &str) -> Vec<usize> {
    b.collections.iter().find(|(n, _)| n == name).map(|(_, v)| v.clone()).unwrap_or_default()
}

fn check_elements(group: &FiniteGroup, xs: &[usize], what: &str) -> Result<()> {
    match xs.iter().find(|&&x| x >= group.order()) {
        Some(x) => invalid(format!("{what} index {x} is outside the group")),
        None => Ok(()),
    }
}

/// Parameters of an H gadget. `d` and `q` are empty for a star-only build.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HParams {
    pub gens: Vec<usize>,
    pub s: usize,
    pub m: usize,
    pub d: Vec<[usize; 2]>,
    pub q: Vec<usize>,
    /// N, the word length of `s`.
    pub length: usize,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HGadget {
    pub gadget: Gadget,
    pub params: HParams,
}

fn h_vertices(len: usize) -> Vec<String> {
    let mut v: Vec<String> = ["alpha1", "alpha2", "beta1", "beta2"].iter().map(|s| s.to_string()).collect();
    v.extend((1..=len + 1).map(|i| format!("gamma{i}")));
    v.extend(["delta1".to_string(), "delta2".to_string()]);
    v
}

fn h_star(group: &FiniteGroup, p: &HParams) -> Result<Builder> {
    let len = p.length;
    let mut b = Builder::new(h_vertices(len))?;
    let id = group.identity();
    let last = format!("gamma{}", len + 1);
    let letters = |prefix: &str| {
        let mut v = vec![(format!("{prefix}_Id"), id)];
        v.extend(p.gens.iter().enumerate().map(|(j, &a)| (format!("{prefix}_{}", j + 1), a)));
        v
    };
    for (l, g) in letters("A").into_iter().chain([("A_s".to_string(), p.s)]) {
        b.edge("A", l, "alpha1", "alpha2", g)?;
    }
    for i in 1..=len {
        for (l, g) in letters(&format!("B{i}")) {
            b.edge(&format!("B{i}"), l, &format!("gamma{i}"), &format!("gamma{}", i + 1), g)?;
        }
    }
    for (l, g) in letters("C").into_iter().chain([("C_s".to_string(), p.s)]) {
        b.edge("C", l, "delta1", "delta2", g)?;
    }
    b.edge("K", "K1".into(), "beta1", "alpha1", p.m)?;
    b.edge("K", "K2".into(), "beta1", "gamma1", p.m)?;
    let connectors =
        [("beta1", "alpha1"), ("alpha2", "beta2"), (last.as_str(), "beta2"), ("beta1", "delta1"), ("delta2", "beta2")];
    let mut bold = Vec::new();
    for (i, (u, v)) in connectors.iter().enumerate() {
        bold.push(b.edge("connectors", format!("T{}", i + 1), u, v, id)?);
    }
    bold.push(coll(&b, "A")[0]);
    bold.extend((1..=len).map(|i| coll(&b, &format!("B{i}"))[0]));
    bold.push(coll(&b, "C")[0]);
    b.collections.retain(|(n, _)| n != "connectors");
    b.tag("T", bold);
    Ok(b)
}

fn h_pairs(len: usize) -> Vec<(String, String)> {
    let last = format!("gamma{}", len + 1);
    [
        ("beta1", "alpha1"),
        ("alpha2", "beta2"),
        ("beta1", "gamma1"),
        (last.as_str(), "beta2"),
        ("beta1", "delta1"),
        ("delta2", "beta2"),
    ]
    .iter()
    .map(|(u, v)| (u.to_string(), v.to_string()))
    .collect()
}

/// Q₁..Q_{N+7} sit on α₁, α₂, β₁, β₂, γ₁..γ_{N+1}, δ₁, δ₂ in that order.
fn h_loops(len: usize) -> Vec<String> {
    h_vertices(len)
}

fn h_base(b: &Builder, len: usize, layer: Layer) -> Result<Set> {
    let mut base = coll(b, "C").into_iter().fold(0, |a, e| a | bit(e));
    if layer != Layer::Star {
        for q in [len + 6, len + 7] {
            base |= bit(b.graph.edge_index(&format!("Q{q}"))?);
        }
    }
    Ok(base)
}

/// How much of the D/Q layer a build includes.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Layer {
    /// The starred gadget: no D edges, no Q loops.
    Star,
    /// Only the layer edges inside the base (the two base loops, and 𝒟₁₀ for Λ).
    Base,
    Full,
}

fn kept<'a>(layer: Layer, d: &'a [usize], q: &'a [usize]) -> Option<(&'a [usize], &'a [usize])> {
    (layer == Layer::Base).then_some((d, q))
}

/// Builds H*_{n,N} (`Layer::Star`) or H_{n,N}, checking every part of the dagger condition.
pub fn build_h_gadget(group: &FiniteGroup, p: &HParams, layer: Layer, limits: &Limits) -> Result<HGadget> {
    let gens = GeneratingSet::new(group, p.gens.clone())?;
    check_elements(group, &[p.s, p.m], "parameter")?;
    if p.gens.is_empty() || p.length == 0 {
        return invalid("need at least one generator and N >= 1");
    }
    if (1..p.gens.len()).any(|i| p.gens[..i].contains(&p.gens[i])) {
        return invalid("generators must be distinct");
    }
    let f = gens.word_lengths();
    if f[p.s] != Some(p.length) {
        return Err(Error::Dagger(format!("f(s) = {} but N = {}", fmt_len(f[p.s]), p.length)));
    }
    if f[p.m].is_some_and(|l| l < 2 * p.length + 1) {
        return Err(Error::Dagger(format!("f(M) = {} < 2N+1 = {}", fmt_len(f[p.m]), 2 * p.length + 1)));
    }
    let mut b = h_star(group, p)?;
    if layer != Layer::Star {
        check_elements(group, &p.d.iter().flatten().copied().collect::<Vec<_>>(), "d-value")?;
        check_elements(group, &p.q, "q-value")?;
        let pairs = h_pairs(p.length);
        let refs: Vec<(&str, &str)> = pairs.iter().map(|(u, v)| (u.as_str(), v.as_str())).collect();
        b.layer(&refs, &h_loops(p.length), &p.d, &p.q, kept(layer, &[], &[p.length + 5, p.length + 6]))?;
    }
    let base = h_base(&b, p.length, layer)?;
    let gadget = b.finish(group, base)?;
    if layer != Layer::Star {
        verify_layer(&gadget, limits)?;
    }
    Ok(HGadget { gadget, params: p.clone() })
}

fn fmt_len(l: Option<usize>) -> String {
    l.map_or("infinity".into(), |l| l.to_string())
}

impl HGadget {
    /// The closing walk C_η for a row choice (`row[i]` indexes ℬ_{i+1}, 0 = Id):
    /// γ₁ along the row to γ_{N+1}, then T3, T2 back, A_s back, K1 back, K2.
    pub fn closing_walk(&self, row: &[usize]) -> Result<Walk> {
        let g = &self.gadget;
        let len = self.params.length;
        if row.len() != len {
            return invalid("one letter per row position");
        }
        let graph = g.gaining.graph();
        let mut seq: Vec<String> = vec!["gamma1".into()];
        for (i, &j) in row.iter().enumerate() {
            let bs = g.collection(&format!("B{}", i + 1)).unwrap();
            let e = *bs.get(j).ok_or_else(|| Error::Invalid(format!("no letter {j} in row {}", i + 1)))?;
            seq.push(graph.edges()[e].label.clone());
            seq.push(format!("gamma{}", i + 2));
        }
        for s in ["T3", "beta2", "T2", "alpha2", "A_s", "alpha1", "K1", "beta1", "K2", "gamma1"] {
            seq.push(s.into());
        }
        Walk::from_labels(graph, &seq)
    }

    /// Least number of non-identity letters over balanced closing cycles.
    pub fn min_balanced_closing(&self, limits: &Limits) -> Result<Option<usize>> {
        let len = self.params.length;
        let k = self.params.gens.len() + 1;
        let total = (k as u64).checked_pow(len as u32).filter(|&t| t <= limits.search_states);
        let Some(total) = total else {
            return Err(Error::Budget { what: "closing cycles", cap: limits.search_states });
        };
        let mut best: Option<usize> = None;
        for mut n in 0..total {
            let row: Vec<usize> = (0..len)
                .map(|_| {
                    let j = (n % k as u64) as usize;
                    n /= k as u64;
                    j
                })
                .collect();
            let w = self.closing_walk(&row)?;
            if self.gadget.gaining.walk_gain(&w)? == self.gadget.gaining.group().identity() {
                let letters = row.iter().filter(|&&j| j != 0).count();
                best = Some(best.map_or(letters, |b| b.min(letters)));
            }
        }
        Ok(best)
    }
}

/// Parameters of a Λ gadget; `gamma1` and `gamma2` list element indices.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LambdaParams {
    pub gamma1: Vec<usize>,
    pub gamma2: Vec<usize>,
    pub m: usize,
    pub d: Vec<[usize; 2]>,
    pub q: Vec<usize>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LambdaGadget {
    pub gadget: Gadget,
    pub params: LambdaParams,
}

const LAMBDA_VERTICES: [&str; 9] =
    ["alpha1", "alpha2", "beta1", "beta2", "gamma1", "gamma2", "gamma3", "delta1", "delta2"];

const LAMBDA_PAIRS: [(&str, &str); 11] = [
    ("beta1", "alpha1"),
    ("alpha1", "alpha2"),
    ("alpha2", "beta2"),
    ("beta1", "gamma1"),
    ("gamma1", "gamma2"),
    ("gamma2", "gamma3"),
    ("gamma1", "gamma3"),
    ("gamma3", "beta2"),
    ("beta1", "delta1"),
    ("delta1", "delta2"),
    ("delta2", "beta2"),
];

const LAMBDA_LOOPS: [&str; 9] =
    ["alpha1", "alpha2", "gamma2", "beta1", "beta2", "gamma1", "gamma3", "delta1", "delta2"];

fn sorted_subgroup(group: &FiniteGroup, xs: &[usize], what: &str) -> Result<Vec<usize>> {
    check_elements(group, xs, what)?;
    let mut v = xs.to_vec();
    v.sort_unstable();
    v.dedup();
    if !group.is_subgroup(&v) {
        return invalid(format!("{what} is not a subgroup"));
    }
    Ok(v)
}

fn lambda_star(group: &FiniteGroup, g1: &[usize], g2: &[usize], m: usize) -> Result<Builder> {
    let mut b = Builder::new(LAMBDA_VERTICES.iter().map(|s| s.to_string()).collect())?;
    let id = group.identity();
    for &g in g1 {
        b.edge("A", format!("A_{}", group.name(g)), "alpha1", "alpha2", g)?;
    }
    // orientation as drawn: γ₂→γ₁, γ₃→γ₂, γ₁→γ₃
    for (i, (u, v)) in [("gamma2", "gamma1"), ("gamma3", "gamma2"), ("gamma1", "gamma3")].iter().enumerate() {
        for &g in g2 {
            b.edge(&format!("B{}", i + 1), format!("B{}_{}", i + 1, group.name(g)), u, v, g)?;
        }
    }
    for &g in g1 {
        b.edge("C", format!("C_{}", group.name(g)), "delta1", "delta2", g)?;
    }
    b.edge("K", "K1".into(), "beta1", "alpha1", m)?;
    b.edge("K", "K2".into(), "beta1", "gamma1", m)?;
    let connectors =
        [("beta1", "alpha1"), ("alpha2", "beta2"), ("gamma3", "beta2"), ("beta1", "delta1"), ("delta2", "beta2")];
    let mut bold = Vec::new();
    for (i, (u, v)) in connectors.iter().enumerate() {
        bold.push(b.edge("connectors", format!("T{}", i + 1), u, v, id)?);
    }
    let id_edge = |b: &Builder, name: &str| {
        let labels = b.graph.edge_labels();
        coll(b, name).into_iter().find(|&e| labels[e].ends_with(&format!("_{}", group.name(id))))
    };
    for name in ["A", "B1", "B2", "B3", "C"] {
        bold.extend(id_edge(&b, name));
    }
    b.collections.retain(|(n, _)| n != "connectors");
    b.tag("T", bold);
    Ok(b)
}

/// Builds Λ*_{Γ₁,Γ₂} (`Layer::Star`) or Λ_{Γ₁,Γ₂}, checking the dagger condition.
pub fn build_lambda_gadget(
    group: &FiniteGroup,
    p: &LambdaParams,
    layer: Layer,
    limits: &Limits,
) -> Result<LambdaGadget> {
    let g1 = sorted_subgroup(group, &p.gamma1, "Gamma1")?;
    let g2 = sorted_subgroup(group, &p.gamma2, "Gamma2")?;
    if let Some(&x) = g1.iter().find(|x| !g2.contains(x)) {
        return invalid(format!("Gamma1 is not contained in Gamma2 (`{}`)", group.name(x)));
    }
    check_elements(group, &[p.m], "M")?;
    if g2.contains(&p.m) {
        return Err(Error::Dagger(format!("M = `{}` lies in Gamma2", group.name(p.m))));
    }
    let mut b = lambda_star(group, &g1, &g2, p.m)?;
    let mut base = coll(&b, "C").into_iter().fold(0, |a, e| a | bit(e));
    if layer != Layer::Star {
        check_elements(group, &p.d.iter().flatten().copied().collect::<Vec<_>>(), "d-value")?;
        check_elements(group, &p.q, "q-value")?;
        let loops: Vec<String> = LAMBDA_LOOPS.iter().map(|s| s.to_string()).collect();
        b.layer(&LAMBDA_PAIRS, &loops, &p.d, &p.q, kept(layer, &[9], &[7, 8]))?;
        for l in ["Q8", "Q9", "D10_1", "D10_2"] {
            base |= bit(b.graph.edge_index(l)?);
        }
    }
    let gadget = b.finish(group, base)?;
    if layer != Layer::Star {
        verify_layer(&gadget, limits)?;
    }
    Ok(LambdaGadget { gadget, params: LambdaParams { gamma1: g1, gamma2: g2, ..p.clone() } })
}

/// A simple `from → to` path inside `within` with the given gain.
fn path_with_gain(g: &Gaining, from: usize, to: usize, within: Set, target: usize) -> Option<Vec<usize>> {
    fn dfs(
        g: &Gaining,
        cur: usize,
        to: usize,
        within: Set,
        seen: Set,
        acc: usize,
        target: usize,
        path: &mut Vec<usize>,
    ) -> bool {
        for e in members(within) {
            let ed = &g.graph().edges()[e];
            if ed.is_loop() || (ed.u != cur && ed.v != cur) {
                continue;
            }
            let nxt = ed.other(cur);
            if bits::contains(seen, nxt) {
                continue;
            }
            let val = g.group().mul(acc, g.oriented(e, cur));
            path.push(e);
            if (nxt == to && val == target)
                || (nxt != to && dfs(g, nxt, to, within, seen | bit(nxt), val, target, path))
            {
                return true;
            }
            path.pop();
        }
        false
    }
    let mut path = Vec::new();
    dfs(g, from, to, within, bit(from), g.group().identity(), target, &mut path).then_some(path)
}

/// No cycle through a D or Q edge is balanced. A cycle through `e = uv` is
/// `e` plus a `v → u` path avoiding `e`, so one path search per edge suffices.
fn verify_layer(g: &Gadget, limits: &Limits) -> Result<()> {
    let gn = &g.gaining;
    let labels = gn.graph().edge_labels();
    let id = gn.group().identity();
    for &e in g.collection("Q").unwrap_or(&[]) {
        if gn.gain(e) == id {
            return Err(Error::Dagger(format!("loop `{}` is balanced", labels[e])));
        }
    }
    let ds: Vec<usize> = members(g.edges_of("D")).collect();
    let all = gn.graph().all_edges();
    let check = |&e: &usize| -> Option<String> {
        let ed = &gn.graph().edges()[e];
        let need = gn.group().inv(gn.gain(e));
        path_with_gain(gn, ed.v, ed.u, all & !bit(e), need).map(|p| {
            let mut c = vec![labels[e].clone()];
            c.extend(p.iter().map(|&x| labels[x].clone()));
            format!("cycle {{{}}} is balanced", c.join(","))
        })
    };
    let bad = if limits.parallel { ds.par_iter().find_map_first(check) } else { ds.iter().find_map(check) };
    match bad {
        Some(msg) => Err(Error::Dagger(msg)),
        None => Ok(()),
    }
}

/// Extra values edge `e` may not take, given current gains and the edges in play.
type Constraint<'a> = dyn Fn(&Gaining, Set, usize) -> Result<BTreeSet<usize>> + 'a;

/// Greedy D/Q assignment on a gaining whose layer edges are present but not
/// yet trusted: D edges in collection order take the least value closing no
/// balanced cycle (and not excluded by `extra`), then Q loops take the least
/// non-identity value. Returns the completed gains.
fn greedy_layer(
    g: &Gaining,
    start: Set,
    ds: &[usize],
    qs: &[usize],
    limits: &Limits,
    extra: &Constraint,
) -> Result<Option<Vec<usize>>> {
    let group = g.group();
    let mut gains = g.gains().to_vec();
    let mut active = start;
    for &e in ds {
        let ed = &g.graph().edges()[e];
        let cur = Gaining::new(g.graph().clone(), group.clone(), gains.clone())?;
        let closing = path_gains_within(&cur, ed.v, ed.u, active, limits)?;
        let mut forbidden: BTreeSet<usize> = closing.iter().map(|&p| group.inv(p)).collect();
        active |= bit(e);
        forbidden.extend(extra(&cur, active, e)?);
        match (0..group.order()).find(|x| !forbidden.contains(x)) {
            Some(x) => gains[e] = x,
            None => return Ok(None),
        }
    }
    let Some(q) = (0..group.order()).find(|&x| x != group.identity()) else {
        return Ok(if qs.is_empty() { Some(gains) } else { None });
    };
    for &e in qs {
        gains[e] = q;
    }
    Ok(Some(gains))
}

/// `(gain before e, e read forwards?, gain after e)` over simple `from → to`
/// paths inside `within` that use `e`.
fn splits_through(
    g: &Gaining,
    from: usize,
    to: usize,
    e: usize,
    within: Set,
    limits: &Limits,
) -> Result<BTreeSet<(usize, bool, usize)>> {
    struct Walker<'a> {
        g: &'a Gaining,
        to: usize,
        e: usize,
        within: Set,
        out: BTreeSet<(usize, bool, usize)>,
        count: u64,
        cap: u64,
    }
    impl Walker<'_> {
        fn go(&mut self, cur: usize, seen: Set, pre: usize, split: Option<bool>, post: usize) -> Result<()> {
            let (g, to, e) = (self.g, self.to, self.e);
            for f in members(self.within) {
                let ed = &g.graph().edges()[f];
                if ed.is_loop() || (ed.u != cur && ed.v != cur) {
                    continue;
                }
                let nxt = ed.other(cur);
                if bits::contains(seen, nxt) {
                    continue;
                }
                let (mut pre2, mut split2, mut post2) = (pre, split, post);
                if f == e {
                    split2 = Some(ed.u == cur);
                } else if split.is_some() {
                    post2 = g.group().mul(post, g.oriented(f, cur));
                } else {
                    pre2 = g.group().mul(pre, g.oriented(f, cur));
                }
                if nxt == to {
                    if let Some(fwd) = split2 {
                        self.count += 1;
                        if self.count > self.cap {
                            return Err(Error::Budget { what: "paths", cap: self.cap });
                        }
                        self.out.insert((pre2, fwd, post2));
                    }
                } else {
                    self.go(nxt, seen | bit(nxt), pre2, split2, post2)?;
                }
            }
            Ok(())
        }
    }
    let id = g.group().identity();
    let mut w = Walker { g, to, e, within, out: BTreeSet::new(), count: 0, cap: limits.max_cycles };
    w.go(from, bit(from), id, None, id)?;
    Ok(w.out)
}

/// Which family to search parameters for.
#[derive(Clone, Debug)]
pub enum Family {
    H { gens: Vec<usize>, length: usize },
    Lambda { gamma1: Vec<usize>, gamma2: Vec<usize> },
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum DaggerParams {
    H(HParams),
    Lambda(LambdaParams),
}

fn layer_of(g: &Gadget) -> (Vec<usize>, Vec<usize>) {
    (members(g.edges_of("D")).collect(), g.collection("Q").unwrap_or(&[]).to_vec())
}

fn d_pairs(gains: &[usize], ds: &[usize]) -> Vec<[usize; 2]> {
    ds.chunks(2).map(|c| [gains[c[0]], gains[c[1]]]).collect()
}

/// `s` and `M` (H) or `M` (Λ) by ascending index, with placeholder D/Q values.
/// Enough for a `Layer::Star` build.
pub fn find_star_params(group: &FiniteGroup, family: &Family) -> Result<Option<DaggerParams>> {
    let q1 = 1 % group.order();
    Ok(match family {
        Family::H { gens, length } => {
            let f = GeneratingSet::new(group, gens.clone())?.word_lengths();
            let s = (0..group.order()).find(|&x| f[x] == Some(*length));
            let m = (0..group.order()).find(|&x| f[x].is_none_or(|l| l > 2 * length));
            s.zip(m).map(|(s, m)| {
                DaggerParams::H(HParams {
                    gens: gens.clone(),
                    s,
                    m,
                    d: vec![[0, 0]; 6],
                    q: vec![q1; length + 7],
                    length: *length,
                })
            })
        }
        Family::Lambda { gamma1, gamma2 } => {
            let g2 = sorted_subgroup(group, gamma2, "Gamma2")?;
            sorted_subgroup(group, gamma1, "Gamma1")?;
            (0..group.order()).find(|x| !g2.contains(x)).map(|m| {
                DaggerParams::Lambda(LambdaParams {
                    gamma1: gamma1.clone(),
                    gamma2: gamma2.clone(),
                    m,
                    d: vec![[0, 0]; 11],
                    q: vec![q1; 9],
                })
            })
        }
    })
}

impl DaggerParams {
    /// The same parameters inside `group × Z_k`, each `x` sent to `(x, 0)`.
    pub fn lifted(&self, k: usize) -> DaggerParams {
        let up = |xs: &[usize]| xs.iter().map(|&x| x * k).collect::<Vec<_>>();
        let ups = |xs: &[[usize; 2]]| xs.iter().map(|&[a, b]| [a * k, b * k]).collect::<Vec<_>>();
        match self {
            DaggerParams::H(h) => DaggerParams::H(HParams {
                gens: up(&h.gens),
                s: h.s * k,
                m: h.m * k,
                d: ups(&h.d),
                q: up(&h.q),
                length: h.length,
            }),
            DaggerParams::Lambda(l) => DaggerParams::Lambda(LambdaParams {
                gamma1: up(&l.gamma1),
                gamma2: up(&l.gamma2),
                m: l.m * k,
                d: ups(&l.d),
                q: up(&l.q),
            }),
        }
    }
}

/// Greedy D/Q values for star parameters already valid in `group`.
fn complete_layer(group: &FiniteGroup, p: &DaggerParams, limits: &Limits) -> Result<Option<DaggerParams>> {
    let none = |_: &Gaining, _: Set, _: usize| Ok(BTreeSet::new());
    let draft = match p {
        DaggerParams::H(p) => {
            let mut b = h_star(group, p)?;
            let pairs = h_pairs(p.length);
            let refs: Vec<(&str, &str)> = pairs.iter().map(|(u, v)| (u.as_str(), v.as_str())).collect();
            b.layer(&refs, &h_loops(p.length), &p.d, &p.q, None)?;
            b.finish(group, 0)?
        }
        DaggerParams::Lambda(p) => {
            let g1 = sorted_subgroup(group, &p.gamma1, "Gamma1")?;
            let g2 = sorted_subgroup(group, &p.gamma2, "Gamma2")?;
            let mut b = lambda_star(group, &g1, &g2, p.m)?;
            let loops: Vec<String> = LAMBDA_LOOPS.iter().map(|s| s.to_string()).collect();
            b.layer(&LAMBDA_PAIRS, &loops, &p.d, &p.q, None)?;
            b.finish(group, 0)?
        }
    };
    let (ds, qs) = layer_of(&draft);
    let start = draft.gaining.graph().all_edges() & !bits::from_indices(ds.iter().chain(&qs).copied());
    let Some(gains) = greedy_layer(&draft.gaining, start, &ds, &qs, limits, &none)? else { return Ok(None) };
    let d = d_pairs(&gains, &ds);
    let q: Vec<usize> = qs.iter().map(|&e| gains[e]).collect();
    Ok(Some(match p {
        DaggerParams::H(p) => {
            let p = HParams { d, q, ..p.clone() };
            build_h_gadget(group, &p, Layer::Full, limits)?;
            DaggerParams::H(p)
        }
        DaggerParams::Lambda(p) => {
            let p = LambdaParams { d, q, ..p.clone() };
            build_lambda_gadget(group, &p, Layer::Full, limits)?;
            DaggerParams::Lambda(p)
        }
    }))
}

/// Scans ascending element indices for `s` and `M`, then assigns D/Q values
/// greedily. `None` when the group is too small.
pub fn find_dagger_params(group: &FiniteGroup, family: &Family, limits: &Limits) -> Result<Option<DaggerParams>> {
    match find_star_params(group, family)? {
        Some(p) => complete_layer(group, &p, limits),
        None => Ok(None),
    }
}

/// Like [`find_dagger_params`], but when only the D/Q layer fails, retries in
/// `group × Z_k` for `k = 2..=max_k`, with `s`, `M`, the generators and the
/// subgroups embedded as `(x, 0)`. Returns the gain group actually used.
pub fn find_dagger_params_extended(
    group: &FiniteGroup,
    family: &Family,
    max_k: usize,
    limits: &Limits,
) -> Result<Option<(FiniteGroup, DaggerParams)>> {
    let Some(p) = find_star_params(group, family)? else { return Ok(None) };
    if let Some(done) = complete_layer(group, &p, limits)? {
        return Ok(Some((group.clone(), done)));
    }
    for k in 2..=max_k {
        let ext = FiniteGroup::product(group, &FiniteGroup::cyclic(k)?);
        let lifted = p.lifted(k);
        if let Some(done) = complete_layer(&ext, &lifted, limits)? {
            return Ok(Some((ext, done)));
        }
    }
    Ok(None)
}

/// A second copy of a full gadget for amalgamation along its base: every
/// vertex other than δ₁, δ₂ and every edge outside the base gets a `'`
/// suffix, K₁' and K₂' take the first of `m_candidates` that works, and the
/// D/Q layer outside the base is reassigned greedily so that the copy
/// satisfies the dagger condition and the pair satisfies all four gain-graph amalgam
/// conditions. `None` if no assignment is found.
pub fn amalgam_partner(g: &Gadget, m_candidates: &[usize], limits: &Limits) -> Result<Option<Gaining>> {
    let gn = &g.gaining;
    let group = gn.group();
    let gr = gn.graph();
    let [u, v] = g.base_vertices;
    let vname = |w: usize| if w == u || w == v { gr.vertices()[w].clone() } else { format!("{}'", gr.vertices()[w]) };
    let mut graph = Multigraph::new((0..gr.vertices().len()).map(vname))?;
    for (e, ed) in gr.edges().iter().enumerate() {
        let l = if bits::contains(g.base, e) { ed.label.clone() } else { format!("{}'", ed.label) };
        graph.add_edge(l, &vname(ed.u), &vname(ed.v))?;
    }
    let (ds, qs) = layer_of(g);
    let ds: Vec<usize> = ds.into_iter().filter(|&e| !bits::contains(g.base, e)).collect();
    let qs: Vec<usize> = qs.into_iter().filter(|&e| !bits::contains(g.base, e)).collect();
    let ks = g.collection("K").unwrap_or(&[]).to_vec();
    let start = gr.all_edges() & !bits::from_indices(ds.iter().chain(&qs).copied());
    // condition (iv): a u→v gain reached on both sides must be a shared link
    let links: BTreeSet<usize> =
        members(g.base).filter(|&e| !gr.edges()[e].is_loop()).map(|e| gn.oriented(e, u)).collect();
    let bad: Vec<usize> = path_gains(gn, u, v, limits)?.into_iter().filter(|x| !links.contains(x)).collect();
    let extra = |cur: &Gaining, active: Set, e: usize| -> Result<BTreeSet<usize>> {
        let mut out = BTreeSet::new();
        for (pre, fwd, post) in splits_through(cur, u, v, e, active, limits)? {
            for &y in &bad {
                let sigma = group.mul(group.mul(group.inv(pre), y), group.inv(post));
                out.insert(if fwd { sigma } else { group.inv(sigma) });
            }
        }
        Ok(out)
    };
    let (ul, vl) = (gr.vertices()[u].clone(), gr.vertices()[v].clone());
    for &m in m_candidates {
        let mut gains = gn.gains().to_vec();
        for &k in &ks {
            gains[k] = m;
        }
        let draft = Gaining::new(graph.clone(), group.clone(), gains)?;
        if path_gains_within(&draft, u, v, start, limits)?.iter().any(|x| bad.contains(x)) {
            continue;
        }

        if let Some(gains) = greedy_layer(&draft, start, &ds, &qs, limits, &extra)? {
            let partner = Gaining::new(graph, group.clone(), gains)?;
            if let Some(msg) = amalgam_conditions(gn, &partner, &ul, &vl, limits)? {
                return Err(Error::Invalid(format!("partner search produced a pair violating {msg}")));
            }
            return Ok(Some(partner));
        }
    }
    Ok(None)
}
