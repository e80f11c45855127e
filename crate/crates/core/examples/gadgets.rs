//! H gadgets over Z20 with generators {1, 19}: star builds for N = 1..3 and
//! their minimal balanced closing length, then a full build in Z20 x Zk.

use gain_workbench::gadgets::{
    build_h_gadget, find_dagger_params_extended, find_star_params, DaggerParams, Family, Layer,
};
use gain_workbench::groups::FiniteGroup;
use gain_workbench::Limits;

fn main() -> gain_workbench::Result<()> {
    let lim = Limits::default();
    let z20 = FiniteGroup::cyclic(20)?;
    for n in 1..=3 {
        let fam = Family::H { gens: vec![1, 19], length: n };
        let Some(DaggerParams::H(p)) = find_star_params(&z20, &fam)? else {
            println!("N={n}: no parameters");
            continue;
        };
        let h = build_h_gadget(&z20, &p, Layer::Star, &lim)?;
        println!(
            "N={n}: s={} M={} edges={} closing={:?}",
            z20.name(p.s),
            z20.name(p.m),
            h.gadget.gaining().graph().edges().len(),
            h.min_balanced_closing(&lim)?
        );
    }

    let fam = Family::H { gens: vec![1, 19], length: 2 };
    if let Some((group, DaggerParams::H(p))) = find_dagger_params_extended(&z20, &fam, 32, &lim)? {
        let h = build_h_gadget(&group, &p, Layer::Full, &lim)?;
        println!("full layer needs order {}", group.order());
        print!("{}", h.gadget.manifest());
    }
    Ok(())
}
