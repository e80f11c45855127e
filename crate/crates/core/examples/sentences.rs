//! Checking CMSO sentences on the Fano plane and on U(2,4).

use gain_workbench::logic::{parse_formula, satisfies, Interpretation};
use gain_workbench::matroid::Matroid;
use gain_workbench::Limits;

fn main() -> gain_workbench::Result<()> {
    let lim = Limits::default();
    let fano = Matroid::projective_plane(2, &lim)?;
    let u24 = Matroid::uniform(2, &["a", "b", "c", "d"]);
    let sentences = [
        "exists Z1 (hyp(Z1) & |Z1| = 3 mod 4)",
        "exists Z1 (hyp(Z1) & |Z1| = 1 mod 2)",
        "exists Z1 exists Z2 (hyp(Z1) & hyp(Z2) & Z1 <= Z2 & ~(Z2 <= Z1))",
    ];
    for text in sentences {
        let f = parse_formula(text)?;
        let e = Interpretation::empty();
        println!(
            "{f}\n  Fano: {}  U24: {}",
            satisfies(fano.hypergraph(), &f, &e)?,
            satisfies(u24.hypergraph(), &f, &e)?
        );
    }
    Ok(())
}
