//! Registries of small coloured systems: classes under one sentence, the
//! bound on their number, and a cleft separating two systems.

use gain_workbench::coloured::{classify_systems, cleft_search, registry, ColouredSystem};
use gain_workbench::logic::{parse_formula, Interpretation};
use gain_workbench::{bits, Limits};

fn main() -> gain_workbench::Result<()> {
    let lim = Limits::default();
    let colours = vec!["1".to_string(), "2".to_string()];
    let systems = ColouredSystem::enumerate(vec!["u".into()], colours.clone(), &lim)?.collect::<Vec<_>>();
    let f = parse_formula("exists Z1 hyp(Z1)")?;
    let delta = f.min_delta().max(1);
    let e = Interpretation::empty();
    for m in &systems {
        println!("table {:?} registry {}", m.table(), registry(m, &f, &e, f.vars(), delta, &lim)?);
    }
    let c = classify_systems(&systems, &f, delta, &lim)?;
    println!("{} classes, bound {:?}", c.classes.len(), c.bound);

    let one = ColouredSystem::new(vec![], colours.clone(), vec![0], &lim)?;
    let two = ColouredSystem::new(vec![], colours, vec![1], &lim)?;
    if let Some(cl) = cleft_search([&one, &two], &f, [&e, &e], 2, &lim)? {
        let accepted: Vec<String> = cl
            .complement
            .accepted()
            .map(|(y, c)| format!("{}:{}", bits::render(y, cl.complement.ground()), cl.complement.colours()[c]))
            .collect();
        println!(
            "cleft with |V|={} accepting {:?}, satisfied {:?}",
            cl.complement.ground().len(),
            accepted,
            cl.satisfied
        );
    }
    Ok(())
}
