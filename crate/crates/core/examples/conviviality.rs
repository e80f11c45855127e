//! Elementary and quotient conviviality graphs of Z2 in Z2 x Z4.

use gain_workbench::conviviality::{elementary_conviviality_graph, quotient_conviviality_graph};
use gain_workbench::groups::FiniteGroup;
use gain_workbench::Limits;

fn main() -> gain_workbench::Result<()> {
    let lim = Limits::default();
    let z2 = FiniteGroup::cyclic(2)?;
    let h = FiniteGroup::product(&z2, &FiniteGroup::cyclic(4)?);
    let g = elementary_conviviality_graph(&h, &z2, &lim)?;
    for (i, v) in g.vertices.iter().enumerate() {
        println!("v{i} {}", v.label());
    }
    print!("{}", g.to_csv());
    let q = quotient_conviviality_graph(&g);
    println!("quotient cells {:?}", q.cells);
    print!("{}", q.to_dot("quotient"));
    Ok(())
}
