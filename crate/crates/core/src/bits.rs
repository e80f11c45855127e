//! Subset-as-integer helpers. Bit `i` stands for the `i`-th element of a ground list.

pub type Set = u128;

#[inline]
pub fn bit(i: usize) -> Set {
    1 << i
}

#[inline]
pub fn full(n: usize) -> Set {
    if n >= 128 {
        Set::MAX
    } else {
        (1 << n) - 1
    }
}

#[inline]
pub fn size(s: Set) -> usize {
    s.count_ones() as usize
}

#[inline]
pub fn contains(s: Set, i: usize) -> bool {
    s >> i & 1 == 1
}

#[inline]
pub fn is_subset(a: Set, b: Set) -> bool {
    a & !b == 0
}

/// Indices of the set bits, ascending.
pub fn members(mut s: Set) -> impl Iterator<Item = usize> {
    std::iter::from_fn(move || {
        if s == 0 {
            return None;
        }
        let i = s.trailing_zeros() as usize;
        s &= s - 1;
        Some(i)
    })
}

/// All subsets of `s`, in increasing numeric order, starting from the empty set.
pub fn subsets(s: Set) -> impl Iterator<Item = Set> {
    let mut next = Some(0);
    std::iter::from_fn(move || {
        let cur = next?;
        next = if cur == s { None } else { Some((cur.wrapping_sub(s)) & s) };
        Some(cur)
    })
}

pub fn from_indices<I: IntoIterator<Item = usize>>(it: I) -> Set {
    it.into_iter().fold(0, |acc, i| acc | bit(i))
}

/// Renders a set as space-separated labels, or `-` when empty.
pub fn render(s: Set, labels: &[String]) -> String {
    if s == 0 {
        return "-".to_string();
    }
    members(s).map(|i| labels[i].as_str()).collect::<Vec<_>>().join(" ")
}

/// Renders a set as `{a,b}`.
pub fn braces(s: Set, labels: &[String]) -> String {
    let inner: Vec<&str> = members(s).map(|i| labels[i].as_str()).collect();
    format!("{{{}}}", inner.join(","))
}

/// Looks labels up in a ground list.
pub fn from_labels<S: AsRef<str>>(labels: &[S], ground: &[String]) -> crate::Result<Set> {
    let mut s = 0;
    for l in labels {
        let l = l.as_ref();
        match ground.iter().position(|g| g == l) {
            Some(i) => s |= bit(i),
            None => return Err(crate::Error::UnknownLabel(l.to_string())),
        }
    }
    Ok(s)
}

/// Sorted label list for a set, used for canonical orderings.
pub fn sorted_labels(s: Set, labels: &[String]) -> Vec<String> {
    let mut v: Vec<String> = members(s).map(|i| labels[i].clone()).collect();
    v.sort();
    v
}
