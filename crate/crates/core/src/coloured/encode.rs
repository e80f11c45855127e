//! Matroid operations written as coloured sums.

use super::{ColouredComplement, ColouredSystem};
use crate::bits::{self, members, Set};
use crate::error::invalid;
use crate::matroid::Matroid;
use crate::{Limits, Result};

fn two_colours() -> Vec<String> {
    vec!["1".into(), "2".into()]
}

/// Maps a mask over `idx` positions to the matroid's own indices.
fn embed(x: Set, idx: &[usize]) -> Set {
    members(x).fold(0, |acc, i| acc | bits::bit(idx[i]))
}

/// Dependent sets to colour `1`, independent sets to `2`.
pub fn basic(m: &Matroid, limits: &Limits) -> Result<ColouredSystem> {
    ColouredSystem::from_fn(m.ground().to_vec(), two_colours(), limits, |x| m.is_independent(x) as usize)
}

/// Accepts `(Y, 2)` for `Y` independent in `n`; summed with [`basic`] this is
/// the direct sum.
pub fn direct_sum_complement(n: &Matroid, limits: &Limits) -> Result<ColouredComplement> {
    ColouredComplement::from_fn(n.ground().to_vec(), two_colours(), limits, |y, i| i == 1 && n.is_independent(y))
}

fn basepoint(m: &Matroid, p: &str) -> Result<(usize, Vec<usize>)> {
    let pi = m.set(&[p])?.trailing_zeros() as usize;
    if m.is_loop(pi) || m.is_coloop(pi) {
        return invalid(format!("basepoint `{p}` must be neither a loop nor a coloop"));
    }
    Ok((pi, (0..m.len()).filter(|&i| i != pi).collect()))
}

/// `[3]`-coloured system on `E(M) - p`: dependent, spans `p`, or neither.
pub fn two_sum_system(m: &Matroid, p: &str, limits: &Limits) -> Result<ColouredSystem> {
    let (pi, idx) = basepoint(m, p)?;
    let ground = idx.iter().map(|&i| m.ground()[i].clone()).collect();
    ColouredSystem::from_fn(ground, vec!["1".into(), "2".into(), "3".into()], limits, |x| {
        let x = embed(x, &idx);
        if !m.is_independent(x) {
            0
        } else if bits::contains(m.closure(x), pi) {
            1
        } else {
            2
        }
    })
}

/// Complement on `E(N) - p` matching [`two_sum_system`]; the sum is the 2-sum along `p`.
pub fn two_sum_complement(n: &Matroid, p: &str, limits: &Limits) -> Result<ColouredComplement> {
    let (pi, idx) = basepoint(n, p)?;
    let ground = idx.iter().map(|&i| n.ground()[i].clone()).collect();
    let colours = vec!["1".into(), "2".into(), "3".into()];
    ColouredComplement::from_fn(ground, colours, limits, |y, i| {
        let y = embed(y, &idx);
        n.is_independent(y) && (i == 2 || (i == 1 && !bits::contains(n.closure(y), pi)))
    })
}

struct Shared {
    /// Matroid index of each shared element, in the order given.
    idx: Vec<usize>,
    mask: Set,
}

fn shared(m: &Matroid, labels: &[String]) -> Result<Shared> {
    let idx = labels.iter().map(|l| m.set(&[l]).map(|s| s.trailing_zeros() as usize)).collect::<Result<Vec<_>>>()?;
    let mask = bits::from_indices(idx.iter().copied());
    if bits::size(mask) != labels.len() {
        return invalid("shared labels must be distinct");
    }
    if m.rank(mask) != 2 {
        return invalid("the amalgam base must have rank 2");
    }
    Ok(Shared { idx, mask })
}

fn local(x: Set, sh: &Shared) -> Set {
    sh.idx.iter().enumerate().filter(|(_, &g)| bits::contains(x, g)).fold(0, |acc, (i, _)| acc | bits::bit(i))
}

fn colour_index(k: usize, a: Set, b: Set, dep: bool, skew: bool) -> usize {
    ((((a as usize) << k | b as usize) << 1 | dep as usize) << 1) | skew as usize
}

fn decode(k: usize, c: usize) -> (Set, Set, bool, bool) {
    let skew = c & 1 == 1;
    let dep = c >> 1 & 1 == 1;
    let b = (c >> 2) & ((1 << k) - 1);
    let a = c >> (2 + k);
    (a as Set, b as Set, dep, skew)
}

/// Readable name of an amalgam colour, e.g. `{x,y}|{}|I|S`.
pub fn amalgam_colour_name(shared: &[String], c: usize) -> String {
    let (a, b, dep, skew) = decode(shared.len(), c);
    format!(
        "{}|{}|{}|{}",
        bits::braces(a, shared),
        bits::braces(b, shared),
        if dep { "D" } else { "I" },
        if skew { "S" } else { "N" }
    )
}

fn amalgam_colours(shared: &[String]) -> Vec<String> {
    (0..4usize << (2 * shared.len())).map(|c| amalgam_colour_name(shared, c)).collect()
}

/// Colours every `X ⊆ E(M)` by
/// `(cl(X) ∩ ℓ, cl(X - ℓ) ∩ ℓ, X dependent?, X - ℓ skew with ℓ?)`.
pub fn amalgam_side(m: &Matroid, shared_labels: &[String], limits: &Limits) -> Result<ColouredSystem> {
    let sh = shared(m, shared_labels)?;
    let k = shared_labels.len();
    ColouredSystem::from_fn(m.ground().to_vec(), amalgam_colours(shared_labels), limits, |x| {
        let outside = x & !sh.mask;
        colour_index(
            k,
            local(m.closure(x), &sh),
            local(m.closure(outside), &sh),
            !m.is_independent(x),
            m.is_skew(outside, sh.mask),
        )
    })
}

/// Acceptance table on `E(M) - ℓ` such that [`amalgam_side`] of the other
/// matroid summed with it is the proper amalgam's independence hypergraph.
pub fn amalgam_complement(m: &Matroid, shared_labels: &[String], limits: &Limits) -> Result<ColouredComplement> {
    let sh = shared(m, shared_labels)?;
    let k = shared_labels.len();
    let idx: Vec<usize> = (0..m.len()).filter(|&i| !bits::contains(sh.mask, i)).collect();
    let ground = idx.iter().map(|&i| m.ground()[i].clone()).collect();
    let global = |s: Set| embed(s, &sh.idx);
    let non_loop = |s: Set| members(s).any(|i| !m.is_loop(i));
    ColouredComplement::from_fn(ground, amalgam_colours(shared_labels), limits, |y, c| {
        let (a, b, dep, skew) = decode(k, c);
        let y = embed(y, &idx);
        if dep || !m.is_independent(y) {
            return false;
        }
        // X ∩ ℓ matters only through its closure in the shared restriction.
        let (a, b) = (global(a), global(b));
        let meet = if a == b {
            0
        } else if skew {
            members(a).fold(0, |i, e| if m.is_independent(i | bits::bit(e)) { i | bits::bit(e) } else { i })
        } else {
            members(a & !b).find(|&e| !m.is_loop(e)).map_or(0, bits::bit)
        };
        let iy = meet | y;
        let dependent = !m.is_independent(iy)
            || (a == sh.mask && !m.is_skew(y, sh.mask))
            || (!skew && bits::is_subset(sh.mask, m.closure(iy)))
            || non_loop(b & m.closure(y));
        !dependent
    })
}
