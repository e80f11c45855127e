//! Elementary and quotient F-conviviality graphs of a finite ambient group.
//!
//! Only the finite restriction is computed: the groups Γ are the subgroups of
//! H taken up to isomorphism, which covers every finite group embeddable in H.

use std::collections::BTreeSet;
use std::fmt::Write as _;

use rayon::prelude::*;

use crate::groups::{enumerate_monomorphisms, FiniteGroup, Monomorphism};
use crate::{Error, Limits, Result};

/// A class representative `(Γ, ψ : F → Γ)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ConvVertex {
    pub gamma: FiniteGroup,
    /// Γ as a subgroup of the ambient group (ascending indices).
    pub elements: Vec<usize>,
    pub psi: Monomorphism,
}

impl ConvVertex {
    /// `(|Γ|, [ψ(f) for f in F])`, with Γ's element names.
    pub fn label(&self) -> String {
        let imgs: Vec<&str> = self.psi.map.iter().map(|&x| self.gamma.name(x)).collect();
        format!("({}, [{}])", self.gamma.order(), imgs.join(","))
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ConvivialityGraph {
    pub vertices: Vec<ConvVertex>,
    /// Symmetric, with a true diagonal.
    pub adjacency: Vec<Vec<bool>>,
    /// Elementary vertices merged into each vertex (singletons before quotienting).
    pub cells: Vec<Vec<usize>>,
}

/// All subgroups of `h`, sorted by (order, elements).
pub fn subgroups(h: &FiniteGroup, limits: &Limits) -> Result<Vec<Vec<usize>>> {
    let mut found: BTreeSet<(usize, Vec<usize>)> = BTreeSet::new();
    let mut frontier = vec![vec![0usize]];
    found.insert((1, vec![0]));
    let mut steps = 0u64;
    while let Some(s) = frontier.pop() {
        for x in 0..h.order() {
            if s.binary_search(&x).is_ok() {
                continue;
            }
            steps += 1;
            if steps > limits.search_states {
                return Err(Error::Budget { what: "subgroup enumeration", cap: limits.search_states });
            }
            let mut seeds = s.clone();
            seeds.push(x);
            let t = h.subgroup_generate(&seeds);
            if found.insert((t.len(), t.clone())) {
                frontier.push(t);
            }
        }
    }
    Ok(found.into_iter().map(|(_, s)| s).collect())
}

fn isomorphic(a: &FiniteGroup, b: &FiniteGroup, limits: &Limits) -> Result<bool> {
    Ok(a.order() == b.order() && !enumerate_monomorphisms(a, b, limits)?.is_empty())
}

/// Whether `(Γ₁, ψ₁)` and `(Γ₂, ψ₂)` are F-convivial in `h`: some monos
/// θᵢ : Γᵢ → H satisfy θ₁∘ψ₁ = θ₂∘ψ₂.
pub fn convivial(
    h: &FiniteGroup,
    a: (&FiniteGroup, &Monomorphism),
    b: (&FiniteGroup, &Monomorphism),
    limits: &Limits,
) -> Result<bool> {
    let composed = |g: &FiniteGroup, psi: &Monomorphism| -> Result<BTreeSet<Vec<usize>>> {
        Ok(enumerate_monomorphisms(g, h, limits)?.iter().map(|t| t.after(psi).map).collect())
    };
    let left = composed(a.0, a.1)?;
    Ok(composed(b.0, b.1)?.iter().any(|m| left.contains(m)))
}

/// Vertices are ∼-classes of `(Γ, ψ)`, ordered by the subgroup class
/// representative and then by the lexicographically least ψ in the class.
pub fn elementary_conviviality_graph(h: &FiniteGroup, f: &FiniteGroup, limits: &Limits) -> Result<ConvivialityGraph> {
    if h.order() > limits.max_conviviality_order {
        return Err(Error::Budget { what: "ambient group order", cap: limits.max_conviviality_order as u64 });
    }
    let mut reps: Vec<(Vec<usize>, FiniteGroup)> = Vec::new();
    for s in subgroups(h, limits)? {
        let g = h.subgroup(&s)?;
        let mut fresh = true;
        for (_, r) in &reps {
            if isomorphic(r, &g, limits)? {
                fresh = false;
                break;
            }
        }
        if fresh {
            reps.push((s, g));
        }
    }
    let mut vertices = Vec::new();
    for (elements, gamma) in reps {
        let autos = enumerate_monomorphisms(&gamma, &gamma, limits)?;
        let mut seen: BTreeSet<Vec<usize>> = BTreeSet::new();
        for psi in enumerate_monomorphisms(f, &gamma, limits)? {
            if seen.contains(&psi.map) {
                continue;
            }
            for t in &autos {
                seen.insert(t.after(&psi).map);
            }
            // monomorphisms arrive sorted, so the first of each orbit is least
            vertices.push(ConvVertex { gamma: gamma.clone(), elements: elements.clone(), psi });
        }
    }
    let images: Vec<BTreeSet<Vec<usize>>> = vertices
        .iter()
        .map(|v| Ok(enumerate_monomorphisms(&v.gamma, h, limits)?.iter().map(|t| t.after(&v.psi).map).collect()))
        .collect::<Result<_>>()?;
    let n = vertices.len();
    let row = |i: usize| (0..n).map(|j| images[i].iter().any(|m| images[j].contains(m))).collect::<Vec<bool>>();
    let adjacency = if limits.parallel { (0..n).into_par_iter().map(row).collect() } else { (0..n).map(row).collect() };
    Ok(ConvivialityGraph { vertices, adjacency, cells: (0..n).map(|i| vec![i]).collect() })
}

/// Merges vertices with identical neighbourhoods; cells keep first-appearance
/// order and each is represented by its first member.
pub fn quotient_conviviality_graph(g: &ConvivialityGraph) -> ConvivialityGraph {
    let mut cells: Vec<Vec<usize>> = Vec::new();
    for i in 0..g.vertices.len() {
        match cells.iter_mut().find(|c| g.adjacency[c[0]] == g.adjacency[i]) {
            Some(c) => c.push(i),
            None => cells.push(vec![i]),
        }
    }
    let vertices = cells.iter().map(|c| g.vertices[c[0]].clone()).collect();
    let adjacency = cells.iter().map(|a| cells.iter().map(|b| g.adjacency[a[0]][b[0]]).collect()).collect();
    let cells = cells.iter().map(|c| c.iter().flat_map(|&i| g.cells[i].iter().copied()).collect()).collect();
    ConvivialityGraph { vertices, adjacency, cells }
}

impl ConvivialityGraph {
    pub fn to_dot(&self, name: &str) -> String {
        let mut out = String::new();
        writeln!(out, "// finite restriction: Gamma ranges over subgroups of the ambient group up to isomorphism")
            .unwrap();
        writeln!(out, "graph {name} {{").unwrap();
        for (i, v) in self.vertices.iter().enumerate() {
            writeln!(out, "  v{i} [label=\"{}\"];", v.label()).unwrap();
        }
        for i in 0..self.vertices.len() {
            for j in i..self.vertices.len() {
                if self.adjacency[i][j] {
                    writeln!(out, "  v{i} -- v{j};").unwrap();
                }
            }
        }
        out.push_str("}\n");
        out
    }

    pub fn to_csv(&self) -> String {
        let n = self.vertices.len();
        let mut out = String::from("vertex");
        for i in 0..n {
            write!(out, ",v{i}").unwrap();
        }
        out.push('\n');
        for (i, row) in self.adjacency.iter().enumerate() {
            write!(out, "v{i}").unwrap();
            for &b in row {
                write!(out, ",{}", b as u8).unwrap();
            }
            out.push('\n');
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn z(n: usize) -> FiniteGroup {
        FiniteGroup::cyclic(n).unwrap()
    }

    #[test]
    fn z4_over_z2() {
        let lim = Limits::default();
        let g = elementary_conviviality_graph(&z(4), &z(2), &lim).unwrap();
        assert_eq!(g.vertices.len(), 2);
        assert_eq!(g.vertices[0].gamma.order(), 2);
        assert_eq!(g.vertices[1].gamma.order(), 4);
        assert_eq!(g.vertices[1].psi.map, vec![0, 2]);
        assert!(g.adjacency.iter().flatten().all(|&b| b));
        let q = quotient_conviviality_graph(&g);
        assert_eq!(q.vertices.len(), 1);
        assert_eq!(q.cells, vec![vec![0, 1]]);
        assert_eq!(g.to_csv(), "vertex,v0,v1\nv0,1,1\nv1,1,1\n");
        assert!(g.to_dot("g").contains("v1 [label=\"(4, [0,2])\"]"));
    }

    #[test]
    fn trivial_cases() {
        let lim = Limits::default();
        let s3 = FiniteGroup::symmetric(3).unwrap();
        assert_eq!(elementary_conviviality_graph(&s3, &s3, &lim).unwrap().vertices.len(), 1);
        let g = elementary_conviviality_graph(&s3, &FiniteGroup::trivial(), &lim).unwrap();
        // subgroup classes of S3: 1, Z2, Z3, S3
        assert_eq!(g.vertices.len(), 4);
        assert!(g.adjacency.iter().flatten().all(|&b| b));
        assert_eq!(quotient_conviviality_graph(&g).vertices.len(), 1);
    }

    #[test]
    fn symmetric_with_true_diagonal_and_representative_independence() {
        let lim = Limits::default();
        let h = FiniteGroup::product(&z(2), &z(4));
        let g = elementary_conviviality_graph(&h, &z(2), &lim).unwrap();
        let n = g.vertices.len();
        for i in 0..n {
            assert!(g.adjacency[i][i]);
            for j in 0..n {
                assert_eq!(g.adjacency[i][j], g.adjacency[j][i]);
            }
        }
        // Z2 into Z2 x Z4 separates (Z2, id) from the order-4 vertices
        assert!(n >= 3);
        for i in 0..n {
            let vi = &g.vertices[i];
            for t in enumerate_monomorphisms(&vi.gamma, &vi.gamma, &lim).unwrap() {
                let moved = t.after(&vi.psi);
                for j in 0..n {
                    let vj = &g.vertices[j];
                    let e = convivial(&h, (&vi.gamma, &moved), (&vj.gamma, &vj.psi), &lim).unwrap();
                    assert_eq!(e, g.adjacency[i][j]);
                }
            }
        }
        let q = quotient_conviviality_graph(&g);
        for a in 0..q.vertices.len() {
            for b in a + 1..q.vertices.len() {
                assert_ne!(q.adjacency[a], q.adjacency[b]);
            }
        }
    }

    #[test]
    fn order_cap() {
        let mut lim = Limits::default();
        lim.max_conviviality_order = 3;
        assert!(matches!(elementary_conviviality_graph(&z(4), &z(2), &lim), Err(Error::Budget { .. })));
    }
}
