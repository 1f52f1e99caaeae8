//! Counting solutions and extremal square-difference-free subsets.
//!
//! Three counters work over explicit sets:
//!
//! * [`count_per_class`] — monochromatic solutions of `x - y = z^2` per
//!   colour class of a colouring, by sweeping `(z, y)` pairs.
//! * [`sqdiff_count`] — how many of the multiples `r, 2r, ..., L*r` have
//!   their square inside the difference set `A - A`.
//! * [`trilinear_count`] — the number of triples `(x, y, z)` with `x, y`
//!   in `A`, `z` among `r, 2r, ..., Z*r`, and `x - y = z^2`.
//!
//! Two independent algorithms compute the size of a largest subset of
//! `{1..n}` containing no pair at square distance: a branch-and-bound
//! over bitsets ([`extremal_subset`], budgeted, witness-producing) and a
//! half-split subset dynamic programme ([`extremal_subset_split`],
//! always exact, capped at `n <= 44` by its `2^(n/2)` tables). They
//! cross-check each other in the test suite.

use std::collections::HashSet;

use crate::colouring::Colouring;
use crate::error::{Error, Result};
use crate::search::Budget;

/// Largest `n` accepted by [`count_per_class`] (explicit sweep).
pub const COUNT_LIMIT: u64 = 1 << 20;
/// Largest `n` accepted by [`extremal_subset`] (single-word bitsets).
pub const EXTREMAL_LIMIT: u64 = 128;
/// Largest `n` accepted by [`extremal_subset_split`] (`2^(n/2)` tables).
pub const EXTREMAL_SPLIT_LIMIT: u64 = 44;

/// Monochromatic solution counts, one entry per colour.
///
/// Entry `c` is the number of solutions `(x, y, z)` in `{1..n}` whose
/// three members all have colour `c`. All zeros exactly when the
/// colouring is clean.
pub fn count_per_class(colouring: &Colouring) -> Result<Vec<u64>> {
    let n = colouring.n_u64().ok_or_else(|| {
        Error::Capacity(format!(
            "per-class counting sweeps points explicitly; n exceeds {COUNT_LIMIT}"
        ))
    })?;
    if n > COUNT_LIMIT {
        return Err(Error::Capacity(format!(
            "per-class counting sweeps points explicitly; n = {n} exceeds {COUNT_LIMIT}"
        )));
    }
    let colours = colouring.to_explicit_colours_with_limit(COUNT_LIMIT as usize)?;
    let at = |p: u64| colours[(p - 1) as usize]; // 1-based point access
    let mut counts = vec![0u64; colouring.k() as usize];
    let mut z = 1u64;
    while z * z < n {
        let d = z * z;
        let cz = at(z);
        for y in 1..=(n - d) {
            if at(y) == cz && at(y + d) == cz {
                counts[cz as usize] += 1;
            }
        }
        z += 1;
    }
    Ok(counts)
}

pub(crate) fn validate_set(a: &[u64]) -> Result<()> {
    if let Some(&first) = a.first() {
        if first == 0 {
            return Err(Error::Domain("set elements must be at least 1".into()));
        }
    }
    if !a.windows(2).all(|w| w[0] < w[1]) {
        return Err(Error::Domain(
            "set must be strictly ascending with no duplicates".into(),
        ));
    }
    Ok(())
}

/// How many of `r, 2r, ..., terms*r` square into the difference set.
///
/// Counts the multiples `m` with `m^2 = a - a'` for some `a, a'` in `a`.
/// The set must be strictly ascending with elements at least 1.
pub fn sqdiff_count(a: &[u64], r: u64, terms: u64) -> Result<u64> {
    if r == 0 {
        return Err(Error::Domain("step r must be at least 1".into()));
    }
    validate_set(a)?;
    let members: HashSet<u64> = a.iter().copied().collect();
    let span = match (a.first(), a.last()) {
        (Some(&lo), Some(&hi)) => hi - lo,
        _ => return Ok(0),
    };
    let mut count = 0;
    for i in 1..=terms {
        let m = match i.checked_mul(r) {
            Some(m) => m,
            None => break, // larger multiples only grow
        };
        let d = match m.checked_mul(m) {
            Some(d) if d <= span => d,
            _ => break, // squares exceed every difference from here on
        };
        if a.iter().any(|&x| x.checked_add(d).is_some_and(|s| members.contains(&s))) {
            count += 1;
        }
    }
    Ok(count)
}

/// Number of triples `(x, y, z)`: `x, y` in `a`, `z` in
/// `{r, 2r, ..., terms*r}`, with `x - y = z^2`.
///
/// The set must be strictly ascending with elements at least 1.
pub fn trilinear_count(a: &[u64], r: u64, terms: u64) -> Result<u64> {
    if r == 0 {
        return Err(Error::Domain("step r must be at least 1".into()));
    }
    validate_set(a)?;
    let members: HashSet<u64> = a.iter().copied().collect();
    let span = match (a.first(), a.last()) {
        (Some(&lo), Some(&hi)) => hi - lo,
        _ => return Ok(0),
    };
    let mut count = 0u64;
    for i in 1..=terms {
        let d = match i.checked_mul(r).and_then(|m| m.checked_mul(m)) {
            Some(d) if d <= span => d,
            _ => break,
        };
        count += a
            .iter()
            .filter(|&&y| y.checked_add(d).is_some_and(|s| members.contains(&s)))
            .count() as u64;
    }
    Ok(count)
}

/// A largest square-difference-free subset and how it was certified.
#[derive(Debug, Clone)]
pub struct ExtremalOutcome {
    /// Elements of the subset, ascending.
    pub witness: Vec<u64>,
    /// `witness.len()`, as claimed maximum when `optimal` holds.
    pub size: u64,
    /// The search ran to completion, so no larger subset exists.
    pub optimal: bool,
    /// Branch nodes visited (0 for the split algorithm).
    pub nodes: u64,
}

/// Bit `p - 1` set for every point that sits at square distance from `p`.
fn square_neighbour_masks(n: usize) -> Vec<u128> {
    let mut nbr = vec![0u128; n + 1];
    for (p, mask) in nbr.iter_mut().enumerate().skip(1) {
        let mut z = 1usize;
        while z * z < n {
            let d = z * z;
            if p > d {
                *mask |= 1u128 << (p - d - 1);
            }
            if p + d <= n {
                *mask |= 1u128 << (p + d - 1);
            }
            z += 1;
        }
    }
    nbr
}

/// Largest subset of `{1..n}` with no two elements at square distance,
/// by branch and bound over bitsets.
///
/// Branches on the vertex of highest remaining degree, prunes when even
/// taking everything left cannot beat the incumbent, and force-includes
/// isolated vertices. If the budget runs out the incumbent is returned
/// with `optimal = false`; it is still a valid subset and hence a lower
/// bound.
pub fn extremal_subset(n: u64, budget: &Budget) -> Result<ExtremalOutcome> {
    if n == 0 {
        return Err(Error::Domain("n must be at least 1".into()));
    }
    if n > EXTREMAL_LIMIT {
        return Err(Error::Capacity(format!(
            "branch and bound uses single-word bitsets; n = {n} exceeds {EXTREMAL_LIMIT}"
        )));
    }
    let n_us = n as usize;
    let nbr = square_neighbour_masks(n_us);
    let full: u128 = if n_us == 128 {
        u128::MAX
    } else {
        (1u128 << n_us) - 1
    };

    struct Ctx<'a> {
        nbr: &'a [u128],
        best_size: u32,
        best_mask: u128,
        nodes: u64,
        max_nodes: u64,
        exhausted: bool,
        deadline: Option<std::time::Instant>,
    }
    fn go(ctx: &mut Ctx, mut allowed: u128, mut chosen: u128, mut size: u32) {
        if ctx.exhausted {
            return;
        }
        ctx.nodes += 1;
        if ctx.nodes > ctx.max_nodes {
            ctx.exhausted = true;
            return;
        }
        if ctx.nodes & 0xFFF == 0 {
            if let Some(deadline) = ctx.deadline {
                if std::time::Instant::now() >= deadline {
                    ctx.exhausted = true;
                    return;
                }
            }
        }
        // Force in every vertex with no remaining neighbour, then pick the
        // busiest vertex to branch on.
        let (mut branch_v, mut branch_deg) = (0usize, -1i64);
        let mut scan = allowed;
        while scan != 0 {
            let v = scan.trailing_zeros() as usize + 1;
            scan &= scan - 1;
            let deg = (ctx.nbr[v] & allowed).count_ones() as i64;
            if deg == 0 {
                chosen |= 1u128 << (v - 1);
                allowed &= !(1u128 << (v - 1));
                size += 1;
            } else if deg > branch_deg {
                (branch_v, branch_deg) = (v, deg);
            }
        }
        if size > ctx.best_size {
            ctx.best_size = size;
            ctx.best_mask = chosen;
        }
        if allowed == 0 || size + allowed.count_ones() <= ctx.best_size {
            return;
        }
        let vbit = 1u128 << (branch_v - 1);
        go(
            ctx,
            allowed & !ctx.nbr[branch_v] & !vbit,
            chosen | vbit,
            size + 1,
        );
        go(ctx, allowed & !vbit, chosen, size);
    }

    let mut ctx = Ctx {
        nbr: &nbr,
        best_size: 0,
        best_mask: 0,
        nodes: 0,
        max_nodes: budget.max_nodes.unwrap_or(u64::MAX),
        exhausted: false,
        deadline: budget.max_time.map(|t| std::time::Instant::now() + t),
    };
    go(&mut ctx, full, 0, 0);
    let witness: Vec<u64> = (1..=n).filter(|p| ctx.best_mask >> (p - 1) & 1 == 1).collect();
    debug_assert!(square_difference_free(&witness));
    Ok(ExtremalOutcome {
        size: witness.len() as u64,
        witness,
        optimal: !ctx.exhausted,
        nodes: ctx.nodes,
    })
}

/// Does the ascending set contain no pair at square distance?
pub fn square_difference_free(a: &[u64]) -> bool {
    let members: HashSet<u64> = a.iter().copied().collect();
    let mut z = 1u64;
    loop {
        let d = match z.checked_mul(z) {
            Some(d) => d,
            None => return true,
        };
        match (a.first(), a.last()) {
            (Some(&lo), Some(&hi)) if d <= hi - lo => {}
            _ => return true,
        }
        if a.iter().any(|&x| x.checked_add(d).is_some_and(|s| members.contains(&s))) {
            return false;
        }
        z += 1;
    }
}

/// Largest square-difference-free subset of `{1..n}` by splitting into
/// halves and tabulating every subset of each half.
///
/// For each independent subset of the right half, the compatible left
/// points form a mask whose best independent sub-subset is read from a
/// `2^(left)` table. Always exact; `n` is capped at
/// [`EXTREMAL_SPLIT_LIMIT`] by the table sizes. An algorithm with no
/// shared machinery with [`extremal_subset`], used to cross-check it.
pub fn extremal_subset_split(n: u64) -> Result<ExtremalOutcome> {
    if n == 0 {
        return Err(Error::Domain("n must be at least 1".into()));
    }
    if n > EXTREMAL_SPLIT_LIMIT {
        return Err(Error::Capacity(format!(
            "split tabulation stores 2^(n/2) entries; n = {n} exceeds {EXTREMAL_SPLIT_LIMIT}"
        )));
    }
    let n_us = n as usize;
    let left = n_us.div_ceil(2); // points 1..=left -> bits 0..left
    let right = n_us - left; // points left+1..=n -> bits 0..right
    let square = |d: usize| -> bool {
        let r = (d as f64).sqrt().round() as usize;
        r * r == d
    };
    // Adjacency inside the left half.
    let lnbr: Vec<u32> = (0..left)
        .map(|i| {
            (0..left)
                .filter(|&j| j != i && square(i.abs_diff(j)))
                .fold(0u32, |m, j| m | 1 << j)
        })
        .collect();
    // For a right point, which left points remain compatible.
    let rallow: Vec<u32> = (0..right)
        .map(|i| {
            let p = left + i + 1;
            (0..left)
                .filter(|&j| !square(p - (j + 1)))
                .fold(0u32, |m, j| m | 1 << j)
        })
        .collect();
    // Adjacency inside the right half.
    let rnbr: Vec<u32> = (0..right)
        .map(|i| {
            (0..right)
                .filter(|&j| j != i && square(i.abs_diff(j)))
                .fold(0u32, |m, j| m | 1 << j)
        })
        .collect();

    // best[m]: largest independent subset of left-mask m.
    let mut best = vec![0u8; 1 << left];
    for m in 1u32..(1 << left) as u32 {
        let v = m.trailing_zeros() as usize;
        let without = best[(m & (m - 1)) as usize];
        let with = 1 + best[(m & !lnbr[v] & !(1 << v)) as usize];
        best[m as usize] = without.max(with);
    }
    // Independence of each right-mask, incrementally by lowest bit.
    let mut r_ok = vec![false; 1 << right];
    r_ok[0] = true;
    let mut top: (u8, u32) = (best[(1usize << left) - 1], 0); // (total, right mask)
    for m in 1u32..(1u64 << right) as u32 {
        let v = m.trailing_zeros() as usize;
        let rest = m & (m - 1);
        let ok = r_ok[rest as usize] && rest & rnbr[v] == 0;
        r_ok[m as usize] = ok;
        if !ok {
            continue;
        }
        let mut allowed = (1u32 << left) - 1;
        let mut bits = m;
        while bits != 0 {
            allowed &= rallow[bits.trailing_zeros() as usize];
            bits &= bits - 1;
        }
        let total = m.count_ones() as u8 + best[allowed as usize];
        if total > top.0 {
            top = (total, m);
        }
    }

    // Rebuild the witness: right part from the mask, left part by walking
    // the table decisions back down.
    let (_, rmask) = top;
    let mut witness: Vec<u64> = Vec::new();
    let mut allowed = (1u32 << left) - 1;
    let mut bits = rmask;
    while bits != 0 {
        let i = bits.trailing_zeros() as usize;
        witness.push((left + i + 1) as u64);
        allowed &= rallow[i];
        bits &= bits - 1;
    }
    let mut m = allowed;
    while m != 0 {
        let v = m.trailing_zeros() as usize;
        if best[m as usize] == best[(m & (m - 1)) as usize]
            && best[m as usize] != 1 + best[(m & !lnbr[v] & !(1u32 << v)) as usize]
        {
            m &= m - 1;
        } else {
            witness.push((v + 1) as u64);
            m &= !lnbr[v] & !(1u32 << v);
        }
    }
    witness.sort_unstable();
    assert!(square_difference_free(&witness));
    assert_eq!(witness.len(), top.0 as usize);
    Ok(ExtremalOutcome {
        size: witness.len() as u64,
        witness,
        optimal: true,
        nodes: 0,
    })
}
