use rayon::prelude::*;

use super::{check_compatible, coloured_sum, ColouredComplement, ColouredSystem};
use crate::bits::Set;
use crate::error::invalid;
use crate::logic::{satisfies, var_list, Formula, Interpretation};
use crate::{Error, Limits, Result};

/// A complement and `τ` on which exactly one side satisfies the formula.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Cleft {
    pub complement: ColouredComplement,
    pub tau: Interpretation,
    /// Satisfaction of the first and second sum.
    pub satisfied: [bool; 2],
}

fn side(
    m: &ColouredSystem,
    sigma: &Interpretation,
    pi: &ColouredComplement,
    f: &Formula,
    tau: &Interpretation,
    limits: &Limits,
) -> Result<bool> {
    let h = coloured_sum(m, pi, limits)?;
    let shift = m.ground().len();
    let theta = Interpretation(sigma.0.iter().map(|(&v, &x)| (v, x | tau.get(v).unwrap_or(0) << shift)).collect());
    satisfies(&h, f, &theta)
}

fn check_inputs(ms: [&ColouredSystem; 2], f: &Formula, sigmas: [&Interpretation; 2]) -> Result<()> {
    if ms[0].colours() != ms[1].colours() {
        return invalid("the two systems use different colour sets");
    }
    for s in sigmas {
        if s.domain() != f.free() {
            return invalid("each sigma must cover exactly the free variables");
        }
    }
    Ok(())
}

/// Evaluates both sums; `Ok(Some(..))` exactly when `(pi, tau)` is a cleft.
pub fn is_cleft(
    ms: [&ColouredSystem; 2],
    f: &Formula,
    sigmas: [&Interpretation; 2],
    pi: &ColouredComplement,
    tau: &Interpretation,
    limits: &Limits,
) -> Result<Option<[bool; 2]>> {
    check_inputs(ms, f, sigmas)?;
    if tau.domain() != f.free() {
        return invalid("tau must cover exactly the free variables");
    }
    check_compatible(ms[0], pi)?;
    check_compatible(ms[1], pi)?;
    let a = side(ms[0], sigmas[0], pi, f, tau, limits)?;
    let b = side(ms[1], sigmas[1], pi, f, tau, limits)?;
    Ok((a != b).then_some([a, b]))
}

fn fresh_labels(n: usize, taken: &[&String]) -> Vec<String> {
    (1..).map(|i| format!("v{i}")).filter(|l| !taken.contains(&l)).take(n).collect()
}

/// Exhaustive search over complements with `|V| <= max_v`: sizes ascending,
/// acceptance tables in binary-counter order (cell `Y·|C| + i` is bit
/// `Y·|C| + i`), then `τ` with the lowest free variable varying fastest.
pub fn cleft_search(
    ms: [&ColouredSystem; 2],
    f: &Formula,
    sigmas: [&Interpretation; 2],
    max_v: usize,
    limits: &Limits,
) -> Result<Option<Cleft>> {
    check_inputs(ms, f, sigmas)?;
    if max_v > limits.max_cleft_ground {
        return Err(Error::Budget { what: "cleft complement size", cap: limits.max_cleft_ground as u64 });
    }
    let colours = ms[0].colours().to_vec();
    let taken: Vec<&String> = ms[0].ground().iter().chain(ms[1].ground()).collect();
    let free = var_list(f.free());
    let mut spent = 0u64;
    for v in 0..=max_v {
        let cells = (1usize << v) * colours.len();
        let taus = 1u64.checked_shl((v * free.len()) as u32).unwrap_or(u64::MAX);
        let tables = 1u64.checked_shl(cells as u32).filter(|_| cells < 64);
        let states = tables.and_then(|t| t.checked_mul(taus));
        spent = match states.and_then(|s| s.checked_add(spent)).filter(|&s| s <= limits.cleft_states) {
            Some(s) => s,
            None => return Err(Error::Budget { what: "cleft states", cap: limits.cleft_states }),
        };
        let labels = fresh_labels(v, &taken);
        let try_table = |n: u64| -> Result<Option<Cleft>> {
            let table = (0..cells).map(|i| n >> i & 1 == 1).collect();
            let pi = ColouredComplement::new(labels.clone(), colours.clone(), table, limits)?;
            let h = [coloured_sum(ms[0], &pi, limits)?, coloured_sum(ms[1], &pi, limits)?];
            let shifts = [ms[0].ground().len(), ms[1].ground().len()];
            for k in 0..taus {
                let tau = Interpretation(
                    free.iter().enumerate().map(|(i, &z)| (z, (k >> (v * i)) as Set & ((1 << v) - 1))).collect(),
                );
                let mut sat = [false; 2];
                for s in 0..2 {
                    let theta = Interpretation(
                        sigmas[s].0.iter().map(|(&z, &x)| (z, x | tau.get(z).unwrap_or(0) << shifts[s])).collect(),
                    );
                    sat[s] = satisfies(&h[s], f, &theta)?;
                }
                if sat[0] != sat[1] {
                    return Ok(Some(Cleft { complement: pi, tau, satisfied: sat }));
                }
            }
            Ok(None)
        };
        let n = tables.unwrap();
        let hit = if limits.parallel {
            (0..n).into_par_iter().map(try_table).find_map_first(|r| r.transpose())
        } else {
            (0..n).map(try_table).find_map(|r| r.transpose())
        };
        if let Some(r) = hit {
            return r.map(Some);
        }
    }
    Ok(None)
}
