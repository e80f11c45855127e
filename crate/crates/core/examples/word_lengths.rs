//! Word lengths in Z20 under the generators {1, 19}, then a small system of
//! word equations checked against S3 and Z5.

use gain_workbench::groups::{solves_pair, FiniteGroup, GeneratingSet, Word, WordSystem};
use gain_workbench::Limits;

fn main() -> gain_workbench::Result<()> {
    let lim = Limits::default();
    let z20 = FiniteGroup::cyclic(20)?;
    let gens = GeneratingSet::new(&z20, vec![1, 19])?;
    for (g, len) in gens.word_lengths().iter().enumerate() {
        println!("|{}| = {}", z20.name(g), len.map_or("-".to_string(), |l| l.to_string()));
    }

    // x1 is a non-trivial involution that does not commute with x2
    let system =
        WordSystem::inferred(vec![Word::parse("x1x1")?], vec![Word::parse("x1")?, Word::parse("x1x2x1'x2'")?])?;
    for g in [FiniteGroup::symmetric(3)?, FiniteGroup::cyclic(5)?] {
        match solves_pair(&g, &system, &lim)? {
            Some(values) => {
                let names: Vec<&str> = values.iter().map(|&v| g.name(v)).collect();
                println!("order {}: solvable with {:?}", g.order(), names);
            }
            None => println!("order {}: unsolvable", g.order()),
        }
    }
    Ok(())
}
