//! The doubly-exponential solution-free colouring and cover-to-partition
//! normalisation.
//!
//! For `k >= 2` colours the colouring partitions `{1..2^(2^(k-1))}` into
//! `{1}` and the blocks `[2^(2^i), 2^(2^(i+1))]` for `0 <= i <= k-2`,
//! with each doubled endpoint `2^(2^(i+1))` resolved to the lower-indexed
//! block. Every class is solution-free:
//!
//! * in `{1}` the only candidate difference is `0 < 1 = 1^2`;
//! * in a block starting at `a = 2^(2^i)` and ending at `a^2`, any member
//!   `z` has `z^2 >= a^2`, while achievable differences stay strictly
//!   below `a^2` — so no difference is the square of a member.
//!
//! `k = 1` is refused: a single colour already fails at `n = 2` because of
//! `(2, 1, 1)`, so the blueprint value `2^(2^0) = 2` would overstate what
//! one colour can do.

use num_bigint::BigUint;
use num_traits::One;

use crate::colouring::{Colouring, Run};
use crate::error::{Error, Result};

/// Largest accepted `k`: the colouring of `{1..2^(2^(k-1))}` needs
/// `2^(k-1)`-bit endpoints and verification squares them, so this keeps the
/// worst case around megabyte-sized integers.
pub const MAX_CONSTRUCT_K: u32 = 24;

/// Builds the `k`-colouring of `{1..2^(2^(k-1))}` described in the module
/// docs, in run form (one run per colour).
///
/// Errors: `Domain` for `k < 2`, `Capacity` for `k > MAX_CONSTRUCT_K`.
pub fn construct_lower_bound(k: u32) -> Result<Colouring> {
    if k < 2 {
        return Err(Error::Domain(format!(
            "the block colouring needs k >= 2 (a single colour fails at n = 2), got {k}"
        )));
    }
    if k > MAX_CONSTRUCT_K {
        return Err(Error::Capacity(format!(
            "k = {k} would need 2^{} -bit endpoints; the limit is k = {MAX_CONSTRUCT_K}",
            (k - 1)
        )));
    }
    let mut runs = vec![Run::new(1u32, 1u32, 0)];
    // Block i + 1 covers [2^(2^i), 2^(2^(i+1))]; after assigning the shared
    // endpoint downwards, run i + 1 is [2^(2^i) + 1, 2^(2^(i+1))] for i >= 1
    // and [2, 4] for i = 0.
    for i in 0..=(k - 2) {
        let lo = if i == 0 {
            BigUint::from(2u32)
        } else {
            (BigUint::one() << (1u64 << i)) + BigUint::one()
        };
        let hi = BigUint::one() << (1u64 << (i + 1));
        runs.push(Run {
            lo,
            hi,
            colour: i + 1,
        });
    }
    Colouring::from_runs(k, runs)
}

/// The `n` that [`construct_lower_bound`] colours for a given `k`:
/// `2^(2^(k-1))`.
pub fn construct_extent(k: u32) -> Result<BigUint> {
    if k < 2 {
        return Err(Error::Domain(format!("need k >= 2, got {k}")));
    }
    if k > MAX_CONSTRUCT_K {
        return Err(Error::Capacity(format!(
            "k = {k} exceeds the limit of {MAX_CONSTRUCT_K}"
        )));
    }
    Ok(BigUint::one() << (1u64 << (k - 1)))
}

/// Turns a family of classes that may overlap into a partition of
/// `{1..n}`: each point goes to the lowest-indexed class covering it.
///
/// Classes are given as run lists (inclusive `[lo, hi]` pairs, not
/// necessarily sorted or disjoint). If some point of `{1..n}` is covered
/// by no class the result is a `Coverage` error carrying the least
/// uncovered point.
pub fn cover_to_partition(n: &BigUint, classes: &[Vec<(BigUint, BigUint)>]) -> Result<Colouring> {
    if n < &BigUint::one() {
        return Err(Error::Domain("n must be at least 1".into()));
    }
    if classes.is_empty() {
        return Err(Error::Domain("need at least one class".into()));
    }
    let k = u32::try_from(classes.len())
        .map_err(|_| Error::Capacity("more classes than u32 colours".into()))?;

    // Sweep classes in priority order, clipping each run against the
    // region already claimed by lower-indexed classes.
    let one = BigUint::one();
    let mut claimed: Vec<(BigUint, BigUint, u32)> = Vec::new(); // sorted, disjoint
    for (colour, class) in classes.iter().enumerate() {
        let mut sorted: Vec<(BigUint, BigUint)> = class
            .iter()
            .filter(|(lo, hi)| lo <= hi && lo <= n && *hi >= one)
            .map(|(lo, hi)| (lo.clone().max(one.clone()), hi.clone().min(n.clone())))
            .collect();
        sorted.sort();
        for (lo, hi) in sorted {
            // Subtract `claimed` from [lo, hi], claim what remains.
            let mut cursor = lo.clone();
            let mut fresh: Vec<(BigUint, BigUint, u32)> = Vec::new();
            for (clo, chi, _) in claimed.iter() {
                if *chi < cursor {
                    continue;
                }
                if *clo > hi {
                    break;
                }
                if *clo > cursor {
                    fresh.push((cursor.clone(), clo - &one, colour as u32));
                }
                cursor = chi + &one;
                if cursor > hi {
                    break;
                }
            }
            if cursor <= hi {
                fresh.push((cursor, hi.clone(), colour as u32));
            }
            claimed.extend(fresh);
            claimed.sort();
        }
    }

    // Contiguity check: the claimed region must be exactly {1..n}.
    let mut expected = one.clone();
    for (lo, hi, _) in claimed.iter() {
        if *lo > expected {
            return Err(Error::Coverage { witness: expected });
        }
        expected = hi + &one;
    }
    if expected <= *n {
        return Err(Error::Coverage { witness: expected });
    }

    // Merge touching same-colour pieces so the result has maximal runs.
    let mut runs: Vec<Run> = Vec::new();
    for (lo, hi, colour) in claimed {
        if let Some(last) = runs.last_mut() {
            if last.colour == colour && &last.hi + &one == lo {
                last.hi = hi;
                continue;
            }
        }
        runs.push(Run { lo, hi, colour });
    }
    Colouring::from_runs(k, runs)
}
