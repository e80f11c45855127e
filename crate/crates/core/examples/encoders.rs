//! The coloured encoding of a direct sum: PG(2,2) as a basic system summed
//! with the complement encoding a relabelled copy, against the direct sum.

use gain_workbench::coloured::{basic, coloured_sum, direct_sum_complement};
use gain_workbench::matroid::{combine, Combine, Matroid};
use gain_workbench::Limits;

fn main() -> gain_workbench::Result<()> {
    let mut lim = Limits::default();
    lim.max_sum_ground = 7;
    let p = Matroid::projective_plane(2, &lim)?;
    let q = p.relabel(|l| format!("{l}'"))?;
    let sum = coloured_sum(&basic(&p, &lim)?, &direct_sum_complement(&q, &lim)?, &lim)?;
    let direct = combine(Combine::DirectSum(&p, &q), &lim)?;
    println!("coloured sum: {} elements, {} hyperedges", sum.len(), sum.hyperedges().count());
    println!("direct sum:   {} elements, rank {}", direct.len(), direct.rank(direct.full()));
    println!("equal: {}", sum.same_family(direct.hypergraph()));
    Ok(())
}
