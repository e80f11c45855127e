//! Random instance generators and brute-force oracles shared by the
//! integration tests. Everything is seeded; nothing here calls the code under
//! test to decide an expected answer.

#![allow(dead_code)]

use gain_workbench::bits::{self, Set};
use gain_workbench::coloured::{ColouredComplement, ColouredSystem};
use gain_workbench::gain::{amalgam_conditions, Gaining};
use gain_workbench::groups::FiniteGroup;
use gain_workbench::logic::{Formula, Var};
use gain_workbench::matroid::Matroid;
use gain_workbench::multigraph::Multigraph;
use gain_workbench::Limits;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn names(prefix: &str, n: usize) -> Vec<String> {
    (0..n).map(|i| format!("{prefix}{i}")).collect()
}

pub fn colours(k: usize) -> Vec<String> {
    (1..=k).map(|i| i.to_string()).collect()
}

/// Groups of order at most 6.
pub fn small_groups() -> Vec<FiniteGroup> {
    let mut gs: Vec<FiniteGroup> = (1..=6).map(|n| FiniteGroup::cyclic(n).unwrap()).collect();
    gs.push(FiniteGroup::symmetric(3).unwrap());
    gs.push(FiniteGroup::product(&gs[1], &gs[1]));
    gs
}

pub fn random_gaining(r: &mut ChaCha8Rng, group: &FiniteGroup, max_v: usize, max_e: usize) -> Gaining {
    let nv = r.gen_range(1..=max_v);
    let vs = names("v", nv);
    let mut g = Multigraph::new(vs.clone()).unwrap();
    let ne = r.gen_range(0..=max_e);
    let mut gains = Vec::new();
    for i in 0..ne {
        let a = r.gen_range(0..nv);
        let b = if r.gen_bool(0.2) { a } else { r.gen_range(0..nv) };
        g.add_edge(format!("e{i}"), &vs[a], &vs[b]).unwrap();
        gains.push(r.gen_range(0..group.order()));
    }
    Gaining::new(g, group.clone(), gains).unwrap()
}

/// Per connected component (isolated vertices included): vertex count, edge
/// count, and whether some potential makes every gain trivial, found by
/// spanning-tree propagation.
pub fn component_balance(g: &Gaining) -> Vec<(usize, usize, bool)> {
    let gr = g.graph();
    let grp = g.group();
    let n = gr.vertices().len();
    let mut pot: Vec<Option<usize>> = vec![None; n];
    let mut out = Vec::new();
    for root in 0..n {
        if pot[root].is_some() {
            continue;
        }
        pot[root] = Some(0);
        let mut comp = vec![root];
        let mut stack = vec![root];
        while let Some(a) = stack.pop() {
            for (e, ed) in gr.edges().iter().enumerate() {
                if ed.u != a && ed.v != a || ed.is_loop() {
                    continue;
                }
                let b = ed.other(a);
                if pot[b].is_none() {
                    // want g(e, a→b) = pot(a) pot(b)^-1
                    pot[b] = Some(grp.mul(grp.inv(g.oriented(e, a)), pot[a].unwrap()));
                    comp.push(b);
                    stack.push(b);
                }
            }
        }
        let edges: Vec<usize> = (0..gr.edges().len()).filter(|&e| comp.contains(&gr.edges()[e].u)).collect();
        let balanced = edges.iter().all(|&e| {
            let ed = &gr.edges()[e];
            let (pu, pv) = (pot[ed.u].unwrap(), pot[ed.v].unwrap());
            grp.mul(pu, grp.inv(pv)) == g.gain(e)
        });
        out.push((comp.len(), edges.len(), balanced));
    }
    out
}

pub fn balanced_components(g: &Gaining) -> usize {
    component_balance(g).iter().filter(|c| c.2).count()
}

/// Frame independence from first principles: every component of the edge
/// set has at most as many edges as vertices, with equality only when it is
/// unbalanced.
pub fn frame_independent(g: &Gaining, x: Set) -> bool {
    let gr = g.graph();
    let mut sub = Multigraph::new(gr.vertices().to_vec()).unwrap();
    let mut gains = Vec::new();
    for e in bits::members(x) {
        let ed = &gr.edges()[e];
        sub.add_edge(ed.label.clone(), &gr.vertices()[ed.u], &gr.vertices()[ed.v]).unwrap();
        gains.push(g.gain(e));
    }
    let sub = Gaining::new(sub, g.group().clone(), gains).unwrap();
    component_balance(&sub).iter().all(|&(v, e, balanced)| e < v || (e == v && !balanced))
}

pub fn random_system(r: &mut ChaCha8Rng, prefix: &str, u: usize, k: usize) -> ColouredSystem {
    let table = (0..1usize << u).map(|_| r.gen_range(0..k)).collect();
    ColouredSystem::new(names(prefix, u), colours(k), table, &Limits::default()).unwrap()
}

pub fn random_complement(r: &mut ChaCha8Rng, prefix: &str, v: usize, k: usize) -> ColouredComplement {
    let density = r.gen_range(0.2..0.8);
    let table = (0..(1usize << v) * k).map(|_| r.gen_bool(density)).collect();
    ColouredComplement::new(names(prefix, v), colours(k), table, &Limits::default()).unwrap()
}

fn var(r: &mut ChaCha8Rng, nvars: u32) -> Var {
    Var::new(r.gen_range(1..=nvars)).unwrap()
}

fn try_formula(r: &mut ChaCha8Rng, budget: usize, nvars: u32, max_q: u32) -> Option<Formula> {
    if budget == 1 || r.gen_bool(0.3) {
        return Some(match r.gen_range(0..3) {
            0 => Formula::subset(var(r, nvars), var(r, nvars)),
            1 => Formula::hyp(var(r, nvars)),
            _ if max_q >= 2 => {
                let q = r.gen_range(2..=max_q);
                Formula::count(var(r, nvars), r.gen_range(0..q), q).ok()?
            }
            _ => Formula::hyp(var(r, nvars)),
        });
    }
    match r.gen_range(0..3) {
        0 => Some(Formula::not(try_formula(r, budget - 1, nvars, max_q)?)),
        1 if budget >= 3 => {
            let left = r.gen_range(1..=budget - 2);
            let a = try_formula(r, left, nvars, max_q)?;
            let b = try_formula(r, budget - 1 - left, nvars, max_q)?;
            Formula::and(a, b).ok()
        }
        _ => {
            let body = try_formula(r, budget - 1, nvars, max_q)?;
            let free: Vec<u32> = (1..=nvars).filter(|&k| body.free() >> (k - 1) & 1 == 1).collect();
            let k = *free.choose(r)?;
            Formula::exists(Var::new(k).unwrap(), body).ok()
        }
    }
}

/// A well-formed formula with at most `max_nodes` nodes over `Z1..Z{nvars}`.
pub fn random_formula(r: &mut ChaCha8Rng, max_nodes: usize, nvars: u32, max_q: u32) -> Formula {
    loop {
        let budget = r.gen_range(1..=max_nodes);
        if let Some(f) = try_formula(r, budget, nvars, max_q) {
            return f;
        }
    }
}

pub fn random_sentence(r: &mut ChaCha8Rng, max_nodes: usize, nvars: u32, max_q: u32) -> Formula {
    loop {
        let f = random_formula(r, max_nodes, nvars, max_q);
        if f.is_sentence() {
            return f;
        }
    }
}

fn random_vector(r: &mut ChaCha8Rng, dim: usize, p: u64) -> Vec<u64> {
    (0..dim).map(|_| r.gen_range(0..p)).collect()
}

/// Two GF(p)-represented matroids whose shared elements `x y [z]` carry
/// identical vectors spanning a plane, so the shared restriction has rank 2.
pub fn random_amalgam_pair(r: &mut ChaCha8Rng, max_side: usize) -> (Matroid, Matroid) {
    let p = *[2u64, 3].choose(r).unwrap();
    let k = r.gen_range(2..=3);
    let mut shared = vec![vec![1, 0], vec![0, 1]];
    if k == 3 {
        shared.push(random_vector(r, 2, p));
    }
    shared.shuffle(r);
    let labels: Vec<String> = ["x", "y", "z"][..k].iter().map(|s| s.to_string()).collect();
    let mut side = |prefix: &str| {
        let dim = r.gen_range(2..=4);
        let n = r.gen_range(k..=max_side);
        let mut vectors: Vec<Vec<u64>> =
            shared.iter().map(|v| v.iter().copied().chain(std::iter::repeat(0)).take(dim).collect()).collect();
        let mut ground = labels.clone();
        for i in 0..n - k {
            vectors.push(random_vector(r, dim, p));
            ground.push(format!("{prefix}{i}"));
        }
        Matroid::from_vectors(ground, &vectors, p, &Limits::default()).unwrap()
    };
    let m1 = side("a");
    let m2 = side("b");
    (m1, m2)
}

/// Builds one side of a gain-graph amalgam: unbalanced loops `Lu`, `Lv`, an
/// optional `u→v` link, and random private edges.
fn amalgam_side(
    r: &mut ChaCha8Rng,
    group: &FiniteGroup,
    prefix: &str,
    shared: &[(&str, &str, &str, usize)],
) -> Gaining {
    let extra = r.gen_range(1..=2);
    let mut vs = vec!["u".to_string(), "v".to_string()];
    vs.extend(names(prefix, extra));
    let mut g = Multigraph::new(vs.clone()).unwrap();
    let mut gains = Vec::new();
    for &(l, a, b, x) in shared {
        g.add_edge(l, a, b).unwrap();
        gains.push(x);
    }
    for i in 0..r.gen_range(2..=5) {
        let a = r.gen_range(0..vs.len());
        let b = if r.gen_bool(0.15) { a } else { r.gen_range(0..vs.len()) };
        g.add_edge(format!("{prefix}e{i}"), &vs[a], &vs[b]).unwrap();
        gains.push(r.gen_range(0..group.order()));
    }
    Gaining::new(g, group.clone(), gains).unwrap()
}

/// A pair satisfying all four gain-graph amalgam conditions, by rejection.
pub fn random_gain_amalgam_pair(r: &mut ChaCha8Rng, group: &FiniteGroup) -> (Gaining, Gaining) {
    let lim = Limits::default();
    loop {
        let nonid = |r: &mut ChaCha8Rng| r.gen_range(1..group.order());
        let mut shared = vec![("Lu", "u", "u", nonid(r)), ("Lv", "v", "v", nonid(r))];
        if r.gen_bool(0.5) {
            shared.push(("Luv", "u", "v", r.gen_range(0..group.order())));
        }
        let a = amalgam_side(r, group, "p", &shared);
        let b = amalgam_side(r, group, "q", &shared);
        if amalgam_conditions(&a, &b, "u", "v", &lim).unwrap().is_none() {
            return (a, b);
        }
    }
}

/// Circuits by brute force from the independence table.
pub fn circuits_oracle(m: &Matroid) -> Vec<Set> {
    bits::subsets(m.full())
        .filter(|&c| !m.is_independent(c) && bits::members(c).all(|i| m.is_independent(c & !bits::bit(i))))
        .collect()
}
