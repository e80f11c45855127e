//! A Z3-gain graph on a triangle with a parallel edge and a loop: its frame
//! matroid, circuits, long lines, and invariance under switching.

use gain_workbench::gain::{Gaining, Switching};
use gain_workbench::groups::FiniteGroup;
use gain_workbench::multigraph::Multigraph;
use gain_workbench::{bits, Limits};

fn main() -> gain_workbench::Result<()> {
    let lim = Limits::default();
    let mut g = Multigraph::new(["a", "b", "c"])?;
    for (label, u, v) in [("ab", "a", "b"), ("bc", "b", "c"), ("ca", "c", "a"), ("ab2", "a", "b"), ("La", "a", "a")] {
        g.add_edge(label, u, v)?;
    }
    let gn = Gaining::new(g, FiniteGroup::cyclic(3)?, vec![0, 0, 0, 1, 2])?;
    let m = gn.frame_matroid(&lim)?;
    println!("elements {}, rank {}", m.len(), m.rank(m.full()));
    for c in m.circuits() {
        println!("circuit {}", bits::render(c, m.ground()));
    }
    for l in m.long_lines() {
        println!("long line {}", bits::render(l, m.ground()));
    }

    let switched = gn.switch(&Switching::Values(vec![1, 2, 0]))?;
    println!("gains after switching {:?}", switched.gains());
    println!("same frame matroid: {}", switched.frame_matroid(&lim)?.same_family(&m));
    Ok(())
}
