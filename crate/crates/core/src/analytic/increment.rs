//! The density-increment trichotomy and its iterated driver.
//!
//! [`increment_search`] inspects one set at one scale and returns a
//! certificate: the inspection range is already too coarse, or the set
//! carries many square-difference solutions, or some arithmetic
//! progression of square common difference sees the set at visibly
//! higher density. [`density_increment_iterate`] chains increments,
//! rescaling onto each denser progression until one of the terminal
//! branches fires.
//!
//! All decisions compare exact integer counts; the reported thresholds
//! and densities are floats for display only.

use num_integer::Roots;

use crate::counting::{trilinear_count, validate_set, COUNT_LIMIT};
use crate::error::{Error, Result};

/// Tunable exponents and constants of the increment engine.
///
/// Every scale rule is a monomial in the current density `alpha`:
/// ranges below `alpha^threshold_exponent * n` are too coarse to
/// subdivide, a progression counts as denser when it beats `alpha +
/// alpha^increment_exponent`, candidate progressions have
/// `max(window_floor, alpha^window_exponent * nprime / ln(nprime))`
/// terms, the iterated driver probes ranges of size
/// `alpha^nprime_exponent * window`, and moduli run up to
/// `ceil((q0_constant * alpha)^-2)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct IncrementConfig {
    /// Coarseness cutoff exponent: below `alpha^this * n` the range is
    /// declared too large to use.
    pub threshold_exponent: f64,
    /// Density gain demanded of an increment: `alpha^this` over `alpha`.
    pub increment_exponent: f64,
    /// Progression length exponent in the candidate window rule.
    pub window_exponent: f64,
    /// Minimum progression length ever considered.
    pub window_floor: u64,
    /// Exponent of the iterated driver's range rule.
    pub nprime_exponent: f64,
    /// Scale constant inside the modulus cap `ceil((c * alpha)^-2)`.
    pub q0_constant: f64,
}

impl Default for IncrementConfig {
    fn default() -> Self {
        IncrementConfig {
            threshold_exponent: 3.0,
            increment_exponent: 3.0,
            window_exponent: 3.0,
            window_floor: 2,
            nprime_exponent: 6.0,
            q0_constant: 1.0,
        }
    }
}

/// Verdict of one increment search.
#[derive(Debug, Clone, PartialEq)]
pub enum IncrementOutcome {
    /// `nprime` is at least `alpha^threshold_exponent * n`: the range
    /// offers no room to subdivide.
    FurtherTooLarge {
        /// The cutoff `alpha^threshold_exponent * n` that was met.
        threshold: f64,
    },
    /// The set already contains many square-difference solutions.
    ManySolutions {
        /// Pairs `(x, y)` in the set with `x - y = z^2`,
        /// `z <= floor(sqrt(nprime))`.
        solutions: u64,
        /// The demanded count `alpha^2 * n * floor(sqrt(nprime)) / 2`.
        threshold: f64,
    },
    /// A progression of square common difference sees the set at
    /// density exceeding `alpha + alpha^increment_exponent`.
    Increment {
        /// Common difference root: the progression steps by `q^2`.
        q: u64,
        /// Number of progression terms.
        window: u64,
        /// The progression is `offset + q^2 * t` for `t` in `1..=window`.
        offset: i64,
        /// Fraction of the progression inside the set.
        new_density: f64,
    },
    /// No branch fired: few solutions, but no progression beat the bar.
    Inconclusive {
        /// Solution pairs found (below the bar).
        solutions: u64,
        /// The many-solutions bar that was missed.
        threshold: f64,
        /// Densest progression seen, as `(q, offset, density)`.
        best: Option<(u64, i64, f64)>,
    },
}

/// Smallest offset in `[lo, hi]` maximising the members among
/// `{offset + step * t : t in 1..=terms}`, with the count.
///
/// `member` must answer for every integer (out-of-range points are
/// simply non-members). Runs in `O(min(step, hi - lo) * terms +
/// (hi - lo))` by sliding each residue class of offsets.
pub(crate) fn best_alignment<F: Fn(i64) -> bool>(
    member: &F,
    step: u64,
    terms: u64,
    lo: i64,
    hi: i64,
) -> (i64, u64) {
    debug_assert!(step >= 1 && terms >= 1 && lo <= hi);
    let step = step as i64;
    let terms_i = terms as i64;
    let mut best_x = i64::MAX;
    let mut best_hits = 0u64;
    let classes = step.min(hi - lo + 1);
    for r in 0..classes {
        let start = lo + r;
        let mut hits = 0u64;
        for t in 1..=terms_i {
            if member(start + step * t) {
                hits += 1;
            }
        }
        let mut x = start;
        loop {
            if hits > best_hits || (hits == best_hits && x < best_x) {
                best_hits = hits;
                best_x = x;
            }
            let next = x + step;
            if next > hi {
                break;
            }
            // The window loses its first point and gains one past its end.
            if member(next) {
                hits -= 1;
            }
            if member(x + step * (terms_i + 1)) {
                hits += 1;
            }
            x = next;
        }
    }
    (best_x, best_hits)
}

fn validate_bounded_set(a: &[u64], n: u64) -> Result<()> {
    if n == 0 {
        return Err(Error::Domain("ground interval must be nonempty".into()));
    }
    if n > COUNT_LIMIT {
        return Err(Error::Capacity(format!(
            "increment search is limited to intervals of {COUNT_LIMIT} points, got {n}"
        )));
    }
    validate_set(a)?;
    if a.is_empty() {
        return Err(Error::Domain("the set must be nonempty".into()));
    }
    if a.last().is_some_and(|&hi| hi > n) {
        return Err(Error::Domain("set exceeds the ground interval".into()));
    }
    Ok(())
}

/// Runs the increment trichotomy for `a` inside `{1, ..., n}` at range
/// parameter `nprime`, trying moduli up to `q0`.
///
/// Deterministic; all branch decisions compare exact integer counts.
pub fn increment_search(
    a: &[u64],
    n: u64,
    nprime: u64,
    q0: u64,
    cfg: &IncrementConfig,
) -> Result<IncrementOutcome> {
    validate_bounded_set(a, n)?;
    if nprime == 0 || nprime > n {
        return Err(Error::Domain(format!(
            "range parameter must lie in 1..={n}, got {nprime}"
        )));
    }
    if q0 == 0 {
        return Err(Error::Domain("modulus cap must be at least 1".into()));
    }
    let size = a.len() as u64;
    let alpha = size as f64 / n as f64;

    let coarse = alpha.powf(cfg.threshold_exponent) * n as f64;
    if nprime as f64 >= coarse {
        return Ok(IncrementOutcome::FurtherTooLarge { threshold: coarse });
    }

    let zmax = nprime.sqrt();
    let solutions = trilinear_count(a, 1, zmax)?;
    let ms_threshold = 0.5 * alpha * alpha * n as f64 * zmax as f64;
    // Exact form of solutions >= alpha^2 * n * zmax / 2.
    if solutions as u128 * 2 * n as u128 >= (size as u128) * (size as u128) * zmax as u128 {
        return Ok(IncrementOutcome::ManySolutions {
            solutions,
            threshold: ms_threshold,
        });
    }

    let nprime_f = nprime as f64;
    let window = (alpha.powf(cfg.window_exponent) * nprime_f / nprime_f.ln().max(1.0)) as u64;
    let window = window.max(cfg.window_floor).max(1);

    let mut member = vec![false; n as usize + 1];
    for &x in a {
        member[x as usize] = true;
    }
    let is_member = |p: i64| p >= 1 && member[p as usize];

    // Densest progression over all moduli: ties resolved toward the
    // smaller q (scan order) and then the smaller offset (within a q,
    // best_alignment already returns the smallest maximiser).
    let mut best: Option<(u64, u64, i64)> = None; // (hits, q, offset)
    for q in 1..=q0 {
        let q2 = match q.checked_mul(q) {
            Some(v) => v,
            None => break,
        };
        let span = match q2.checked_mul(window) {
            Some(v) => v,
            None => break,
        };
        let lo = 1i64 - q2 as i64;
        let hi = n as i64 - span as i64;
        if hi < lo {
            break; // larger moduli only widen the span
        }
        let (offset, hits) = best_alignment(&is_member, q2, window, lo, hi);
        if best.is_none_or(|(bh, _, _)| hits > bh) {
            best = Some((hits, q, offset));
        }
    }

    let bar = alpha + alpha.powf(cfg.increment_exponent);
    match best {
        Some((hits, q, offset)) => {
            let new_density = hits as f64 / window as f64;
            if new_density > bar {
                Ok(IncrementOutcome::Increment {
                    q,
                    window,
                    offset,
                    new_density,
                })
            } else {
                Ok(IncrementOutcome::Inconclusive {
                    solutions,
                    threshold: ms_threshold,
                    best: Some((q, offset, new_density)),
                })
            }
        }
        None => Ok(IncrementOutcome::Inconclusive {
            solutions,
            threshold: ms_threshold,
            best: None,
        }),
    }
}

/// One recorded scale of the iterated increment driver.
#[derive(Debug, Clone, PartialEq)]
pub struct IterateStage {
    /// Stage number, from 0.
    pub index: u32,
    /// Current rescaling step: the stage looks at `offset + step^2 * t`.
    pub step: u64,
    /// Number of progression terms at this scale.
    pub window: u64,
    /// Best-aligned progression offset at this scale.
    pub offset: i64,
    /// Set members among the progression terms.
    pub hits: u64,
    /// `hits / window`.
    pub density: f64,
}

/// Why the iterated driver stopped.
#[derive(Debug, Clone, PartialEq)]
pub enum IterateTermination {
    /// The current scale exhibited many square-difference solutions.
    ManySolutions {
        /// Rescaling step at that point.
        step: u64,
        /// Window length at that point.
        window: u64,
        /// Range parameter used for the final search.
        further: u64,
        /// The dense sub-progression's members, in original coordinates.
        subset: Vec<u64>,
        /// Solutions counted inside the window.
        solutions: u64,
        /// The count that had to be met.
        threshold: f64,
    },
    /// The range rule exceeded the coarseness cutoff.
    FurtherTooLarge,
    /// The search came back inconclusive: no branch fired.
    NoIncrement,
    /// The window shrank below 4 points, too small to subdivide.
    Degenerate,
    /// Defensive stage cap reached (densities should preclude this).
    StageLimit,
}

/// Trajectory of the iterated driver: every scale it visited and why it
/// stopped.
#[derive(Debug, Clone, PartialEq)]
pub struct IterateOutcome {
    pub stages: Vec<IterateStage>,
    pub termination: IterateTermination,
}

/// Iterates the increment search on `a` inside `{1, ..., n}`:
/// realigns, searches, and rescales onto the denser progression until
/// a terminal branch fires.
///
/// Each increment multiplies the step by the found modulus and shrinks
/// the window, so the stage count is bounded by the density gain rule;
/// a defensive cap of `ceil(alpha^-increment_exponent) + 1` stages
/// backs that up.
pub fn density_increment_iterate(
    a: &[u64],
    n: u64,
    cfg: &IncrementConfig,
) -> Result<IterateOutcome> {
    validate_bounded_set(a, n)?;
    let mut member = vec![false; n as usize + 1];
    for &x in a {
        member[x as usize] = true;
    }
    let is_member = |p: i64| p >= 1 && member[p as usize];

    let alpha0 = a.len() as f64 / n as f64;
    let stage_cap = (1.0 / alpha0.powf(cfg.increment_exponent)).ceil() as u64 + 1;

    let mut stages: Vec<IterateStage> = Vec::new();
    let mut step = 1u64;
    let mut window = n;
    let termination = loop {
        if stages.len() as u64 >= stage_cap {
            break IterateTermination::StageLimit;
        }
        let step2 = step
            .checked_mul(step)
            .ok_or_else(|| Error::Capacity("rescaling step exceeds u64".into()))?;
        let span = step2
            .checked_mul(window)
            .ok_or_else(|| Error::Capacity("window span exceeds u64".into()))?;
        let lo = 1i64 - step2 as i64;
        let hi = n as i64 - span as i64;
        // Every increment satisfies q^2 * (window - 1) <= old window - 1,
        // so by induction step^2 * (window - 1) <= n - 1 and the
        // alignment range is never empty.
        debug_assert!(hi >= lo);
        if hi < lo {
            return Err(Error::Capacity("alignment range collapsed".into()));
        }
        let (offset, hits) = best_alignment(&is_member, step2, window, lo, hi);
        let density = hits as f64 / window as f64;
        stages.push(IterateStage {
            index: (stages.len()) as u32,
            step,
            window,
            offset,
            hits,
            density,
        });
        if window < 4 {
            break IterateTermination::Degenerate;
        }
        debug_assert!(hits >= 1, "alignment always catches a member");
        let alpha = density;
        let nprime = ((alpha.powf(cfg.nprime_exponent) * window as f64) as u64)
            .clamp(1, window - 1);
        let q0 = ((cfg.q0_constant * alpha).powi(-2).ceil() as u64)
            .clamp(1, window.sqrt() + 1);
        let pulled: Vec<u64> = (1..=window)
            .filter(|&t| is_member(offset + (step2 * t) as i64))
            .collect();
        debug_assert_eq!(pulled.len() as u64, hits);
        match increment_search(&pulled, window, nprime, q0, cfg)? {
            IncrementOutcome::FurtherTooLarge { .. } => {
                break IterateTermination::FurtherTooLarge;
            }
            IncrementOutcome::ManySolutions {
                solutions,
                threshold,
            } => {
                let subset = pulled
                    .iter()
                    .map(|&t| (offset + (step2 * t) as i64) as u64)
                    .collect();
                break IterateTermination::ManySolutions {
                    step,
                    window,
                    further: nprime,
                    subset,
                    solutions,
                    threshold,
                };
            }
            IncrementOutcome::Increment {
                q, window: terms, ..
            } => {
                step = step
                    .checked_mul(q)
                    .ok_or_else(|| Error::Capacity("rescaling step exceeds u64".into()))?;
                window = terms;
            }
            IncrementOutcome::Inconclusive { .. } => {
                break IterateTermination::NoIncrement;
            }
        }
    };
    Ok(IterateOutcome {
        stages,
        termination,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn interval(n: u64) -> Vec<u64> {
        (1..=n).collect()
    }

    /// 1 mod 3 inside [3000]: no square difference is divisible by 3
    /// unless the root is, so small-z solutions vanish.
    fn residue_one_mod_three() -> Vec<u64> {
        (1..=3000).filter(|x| x % 3 == 1).collect()
    }

    #[test]
    fn full_interval_has_many_solutions() {
        // [100] at nprime = 9: zmax = 3, pair counts 99 + 96 + 91 = 286
        // against the demanded 0.5 * 1 * 100 * 3 = 150.
        let got = increment_search(&interval(100), 100, 9, 5, &IncrementConfig::default())
            .unwrap();
        assert_eq!(
            got,
            IncrementOutcome::ManySolutions {
                solutions: 286,
                threshold: 150.0
            }
        );
    }

    #[test]
    fn residue_class_yields_increment() {
        // alpha = 1/3, nprime = 8: zmax = 2 and no solutions (squares
        // 1 and 4 are nonzero mod 3). Window = max(2, floor((1/27) *
        // 8 / ln 8)) = 2. Modulus 3 at offset -8 hits {1, 10}, density
        // 1, beating 1/3 + 1/27.
        let a = residue_one_mod_three();
        for q0 in [3u64, 5, 9] {
            let got = increment_search(&a, 3000, 8, q0, &IncrementConfig::default()).unwrap();
            assert_eq!(
                got,
                IncrementOutcome::Increment {
                    q: 3,
                    window: 2,
                    offset: -8,
                    new_density: 1.0
                },
                "q0 = {q0}"
            );
        }
    }

    #[test]
    fn full_range_parameter_is_too_coarse() {
        // alpha = 1 makes the cutoff exactly n, and nprime = n meets it.
        for n in [4u64, 10, 64] {
            let got =
                increment_search(&interval(n), n, n, 2, &IncrementConfig::default()).unwrap();
            assert_eq!(
                got,
                IncrementOutcome::FurtherTooLarge {
                    threshold: n as f64
                }
            );
        }
    }

    #[test]
    fn unreachable_bar_reports_inconclusive_with_best() {
        // Same residue-class instance, but demanding a gain of
        // alpha^0 = 1 over alpha makes any increment impossible; the
        // densest window found must still be reported.
        let a = residue_one_mod_three();
        let cfg = IncrementConfig {
            increment_exponent: 0.0,
            ..IncrementConfig::default()
        };
        let got = increment_search(&a, 3000, 8, 3, &cfg).unwrap();
        match got {
            IncrementOutcome::Inconclusive {
                solutions,
                threshold,
                best,
            } => {
                assert_eq!(solutions, 0);
                // 0.5 * (1/3)^2 * 3000 * 2
                assert!((threshold - 1000.0 / 3.0).abs() < 1e-9);
                assert_eq!(best, Some((3, -8, 1.0)));
            }
            other => panic!("expected Inconclusive, got {other:?}"),
        }
    }

    #[test]
    fn search_validates_inputs() {
        let cfg = IncrementConfig::default();
        assert!(increment_search(&[], 10, 2, 1, &cfg).is_err());
        assert!(increment_search(&[0], 10, 2, 1, &cfg).is_err());
        assert!(increment_search(&[11], 10, 2, 1, &cfg).is_err());
        assert!(increment_search(&[3, 2], 10, 2, 1, &cfg).is_err());
        assert!(increment_search(&[1], 10, 0, 1, &cfg).is_err());
        assert!(increment_search(&[1], 10, 11, 1, &cfg).is_err());
        assert!(increment_search(&[1], 10, 2, 0, &cfg).is_err());
        assert!(matches!(
            increment_search(&[1], COUNT_LIMIT + 1, 2, 1, &cfg),
            Err(Error::Capacity(_))
        ));
    }

    #[test]
    fn iterate_on_dense_block_stops_at_many_solutions() {
        // {5..16} in [16]: alpha = 3/4, range rule gives nprime =
        // floor(0.75^6 * 16) = 2, so zmax = 1 and the 11 consecutive
        // pairs beat 0.5 * 0.5625 * 16 * 1 = 4.5.
        let a: Vec<u64> = (5..=16).collect();
        let got = density_increment_iterate(&a, 16, &IncrementConfig::default()).unwrap();
        assert_eq!(
            got.stages,
            vec![IterateStage {
                index: 0,
                step: 1,
                window: 16,
                offset: 0,
                hits: 12,
                density: 0.75
            }]
        );
        assert_eq!(
            got.termination,
            IterateTermination::ManySolutions {
                step: 1,
                window: 16,
                further: 2,
                subset: a,
                solutions: 11,
                threshold: 4.5
            }
        );
    }

    #[test]
    fn iterate_on_residue_class_rescales_then_degenerates() {
        // Stage 0 sees density 1/3 and rescales onto step 3 with a
        // 2-term window at offset -8 ({1, 10}); the window is then too
        // small to subdivide.
        let got = density_increment_iterate(
            &residue_one_mod_three(),
            3000,
            &IncrementConfig::default(),
        )
        .unwrap();
        assert_eq!(got.stages.len(), 2);
        assert_eq!(got.stages[0].step, 1);
        assert_eq!(got.stages[0].window, 3000);
        assert_eq!(got.stages[0].offset, 0);
        assert_eq!(got.stages[0].hits, 1000);
        assert_eq!(
            got.stages[1],
            IterateStage {
                index: 1,
                step: 3,
                window: 2,
                offset: -8,
                hits: 2,
                density: 1.0
            }
        );
        assert_eq!(got.termination, IterateTermination::Degenerate);
    }

    #[test]
    fn iterate_on_full_interval_finds_solutions_immediately() {
        // For [n], n >= 4: nprime = n - 1, zmax = floor(sqrt(n-1)),
        // and sum (n - z^2) over z <= zmax always meets the bar
        // (equivalent to (zmax - 1)(zmax - 2) >= 0).
        for n in (4u64..=100).chain([500, 1000]) {
            let got =
                density_increment_iterate(&interval(n), n, &IncrementConfig::default()).unwrap();
            assert_eq!(got.stages.len(), 1, "n = {n}");
            match got.termination {
                IterateTermination::ManySolutions { subset, .. } => {
                    assert_eq!(subset, interval(n), "n = {n}");
                }
                other => panic!("expected ManySolutions for n = {n}, got {other:?}"),
            }
        }
    }

    #[test]
    fn iterate_degenerates_below_four_points() {
        for n in 1u64..=3 {
            let got =
                density_increment_iterate(&interval(n), n, &IncrementConfig::default()).unwrap();
            assert_eq!(got.stages.len(), 1);
            assert_eq!(got.stages[0].hits, n);
            assert_eq!(got.termination, IterateTermination::Degenerate);
        }
    }

    #[test]
    fn iterate_is_deterministic() {
        let a = residue_one_mod_three();
        let cfg = IncrementConfig::default();
        let first = density_increment_iterate(&a, 3000, &cfg).unwrap();
        let second = density_increment_iterate(&a, 3000, &cfg).unwrap();
        assert_eq!(first, second);
    }

    #[test]
    fn alignment_prefers_smallest_offset() {
        // Members {3, 7}: a 1-term window of step 4 catches 3 at
        // offset -1 and 7 at offset 3; the maximum count is 1 and the
        // smallest offset achieving it must win.
        let member = |p: i64| p == 3 || p == 7;
        let (offset, hits) = best_alignment(&member, 4, 1, -3, 3);
        assert_eq!((offset, hits), (-1, 1));
    }

    #[test]
    fn alignment_slides_correctly_against_brute_force() {
        // Pseudo-random fixed membership; compare the sliding-window
        // maximum against direct evaluation at every offset.
        let member = |p: i64| (1..=200).contains(&p) && (p * p + 3 * p) % 7 < 2;
        for step in [1u64, 2, 3, 5] {
            for terms in [1u64, 2, 4, 9] {
                let lo = 1 - (step * step) as i64;
                let hi = 200 - (step * step * terms) as i64;
                if hi < lo {
                    continue;
                }
                let (got_x, got_h) = best_alignment(&member, step * step, terms, lo, hi);
                let mut want_x = i64::MAX;
                let mut want_h = 0u64;
                for x in lo..=hi {
                    let h = (1..=terms)
                        .filter(|&t| member(x + (step * step * t) as i64))
                        .count() as u64;
                    if h > want_h || (h == want_h && x < want_x) {
                        want_h = h;
                        want_x = x;
                    }
                }
                assert_eq!(
                    (got_x, got_h),
                    (want_x, want_h),
                    "step = {step}, terms = {terms}"
                );
            }
        }
    }
}
