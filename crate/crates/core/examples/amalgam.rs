//! Proper amalgam of two rank-2 uniform matroids, with the case that decides
//! each dependent set, and the gain-graph amalgam of two Z3-gain graphs.

use gain_workbench::gain::{amalgam_conditions, gain_graph_amalgam, Gaining};
use gain_workbench::groups::FiniteGroup;
use gain_workbench::matroid::{dependence_cases, proper_amalgam, Matroid};
use gain_workbench::multigraph::Multigraph;
use gain_workbench::{bits, Limits};

fn side(private: &str, gains: [usize; 4]) -> gain_workbench::Result<Gaining> {
    let mut g = Multigraph::new(["u", "v", private])?;
    g.add_edge("Lu", "u", "u")?;
    g.add_edge("Lv", "v", "v")?;
    g.add_edge(format!("{private}1"), "u", private)?;
    g.add_edge(format!("{private}2"), private, "v")?;
    Gaining::new(g, FiniteGroup::cyclic(3)?, gains.to_vec())
}

fn main() -> gain_workbench::Result<()> {
    let lim = Limits::default();
    let m1 = Matroid::uniform(2, &["a", "x", "y"]);
    let m2 = Matroid::uniform(2, &["b", "x", "y"]);
    let am = proper_amalgam(&m1, &m2, &lim)?;
    println!("amalgam rank {} on {:?}", am.rank(am.full()), am.ground());
    for x in bits::subsets(am.full()).filter(|&x| !am.is_independent(x) && bits::size(x) == 3) {
        let v = dependence_cases(&m1, &m2, x)?;
        println!("{} dependent via {:?}", bits::render(x, am.ground()), v.case);
    }

    let a = side("p", [1, 2, 1, 0])?;
    let b = side("q", [1, 2, 0, 0])?;
    match amalgam_conditions(&a, &b, "u", "v", &lim)? {
        Some(why) => println!("conditions fail: {why}"),
        None => {
            let glued = gain_graph_amalgam(&a, &b, "u", "v")?;
            let fm = glued.frame_matroid(&lim)?;
            println!("glued graph: {} edges, frame rank {}", fm.len(), fm.rank(fm.full()));
        }
    }
    Ok(())
}
