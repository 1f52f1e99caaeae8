//! Replays the colour-elimination iteration on a clean colouring.
//!
//! Starting from the full interval, each round runs the iterated
//! increment driver on the current intersection set until it certifies
//! many square-difference solutions. The roots of those solutions land
//! in colour classes not yet eliminated (a root in an already-used
//! class would complete a monochromatic solution, contradicting
//! cleanness); the round descends into the class that absorbs the most
//! roots, realigns onto it, and intersects. Densities along the way
//! profile how fast a clean colouring must thin out.

use std::collections::{BTreeSet, HashMap, HashSet};

use num_integer::Roots;

use crate::analytic::increment::{
    best_alignment, density_increment_iterate, IncrementConfig, IterateTermination,
};
use crate::colouring::{Colouring, Verdict};
use crate::counting::COUNT_LIMIT;
use crate::error::{Error, Result};

/// One recorded round of the elimination iteration.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TraceStage {
    /// Round number, from 0.
    pub index: u32,
    /// Colours eliminated before this round, in elimination order.
    pub colours_used: Vec<u32>,
    /// Rescaling step: the round looks at points `step^2 * t`.
    pub step: u64,
    /// Number of grid points `t` in play.
    pub window: u64,
    /// Alignment shift applied when the previous round intersected.
    pub offset: i64,
    /// Grid points still in the intersection set.
    pub hits: u64,
}

impl TraceStage {
    /// `hits / window`.
    pub fn density(&self) -> f64 {
        self.hits as f64 / self.window as f64
    }
}

/// Why the iteration stopped.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum TraceTermination {
    /// Every colour absorbed solution roots; nothing is left to descend
    /// into.
    AllColoursUsed,
    /// The increment driver could not certify many solutions at the
    /// current scale.
    NoUsableBranch,
}

/// The full elimination trajectory of a colouring.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IterationTrace {
    pub stages: Vec<TraceStage>,
    pub termination: TraceTermination,
}

/// Replays the elimination iteration on `colouring`, which must verify
/// clean.
///
/// Deterministic: ties in the colour choice go to the smallest colour,
/// and every alignment picks the smallest maximising offset. At most
/// `k` rounds are recorded, one per colour elimination.
pub fn iteration_trace(
    colouring: &Colouring,
    cfg: &IncrementConfig,
) -> Result<IterationTrace> {
    if let Verdict::Violation { x, y, z, colour } = colouring.verify() {
        return Err(Error::Precondition(format!(
            "colouring has the monochromatic solution {x} - {y} = {z}^2 in colour {colour}"
        )));
    }
    let n = colouring
        .n_u64()
        .filter(|&v| v <= COUNT_LIMIT)
        .ok_or_else(|| {
            Error::Capacity(format!(
                "tracing is limited to {COUNT_LIMIT} points, colouring has {}",
                colouring.n()
            ))
        })?;
    let colours = colouring.to_explicit_colours_with_limit(COUNT_LIMIT as usize)?;
    let k = colouring.k() as usize;
    let mut classes: Vec<Vec<u64>> = vec![Vec::new(); k];
    for (i, &c) in colours.iter().enumerate() {
        classes[c as usize].push(i as u64 + 1);
    }

    // The intersection set lives on the grid step^2 * [1..window],
    // stored as shifted values; `None` is the full starting interval.
    let mut shifted: Option<BTreeSet<i64>> = None;
    let mut used: Vec<u32> = Vec::new();
    let mut step = 1u64;
    let mut window = n;
    let mut offset = 0i64;
    let mut stages: Vec<TraceStage> = Vec::new();

    let termination = loop {
        if used.len() == k {
            break TraceTermination::AllColoursUsed;
        }
        let step2 = step
            .checked_mul(step)
            .ok_or_else(|| Error::Capacity("rescaling step exceeds u64".into()))?;
        let grid_points: Vec<u64> = match &shifted {
            None => (1..=window).collect(),
            Some(t) => (1..=window)
                .filter(|&tt| t.contains(&((step2 * tt) as i64)))
                .collect(),
        };
        let hits = grid_points.len() as u64;
        stages.push(TraceStage {
            index: stages.len() as u32,
            colours_used: used.clone(),
            step,
            window,
            offset,
            hits,
        });
        debug_assert!(hits >= 1, "alignment always leaves a grid point");

        let inner = density_increment_iterate(&grid_points, window, cfg)?;
        let (inner_step, inner_window, further, subset) = match inner.termination {
            IterateTermination::ManySolutions {
                step: s,
                window: w,
                further,
                subset,
                ..
            } => (s, w, further, subset),
            _ => break TraceTermination::NoUsableBranch,
        };

        // Roots of the certified solutions, in original coordinates: a
        // grid pair differing by (inner_step * w)^2 is an original pair
        // differing by (step * inner_step * w)^2.
        let in_subset: HashSet<u64> = subset.iter().copied().collect();
        let mut counts = vec![0u64; k];
        let mut any = false;
        for w in 1..=further.sqrt() {
            let gap = inner_step * w;
            let diff = gap * gap;
            if subset
                .iter()
                .any(|&a| a.checked_add(diff).is_some_and(|s| in_subset.contains(&s)))
            {
                let root = step * gap;
                debug_assert!(root >= 1 && root <= n);
                let colour = colours[root as usize - 1];
                debug_assert!(
                    !used.contains(&colour),
                    "a used colour absorbing a root would contradict cleanness"
                );
                counts[colour as usize] += 1;
                any = true;
            }
        }
        debug_assert!(any, "many solutions certify at least one root");
        if !any {
            break TraceTermination::NoUsableBranch;
        }

        // Descend into the unused colour absorbing the most roots;
        // ties toward the smaller colour.
        let mut pick = usize::MAX;
        let mut pick_count = 0u64;
        for (c, &count) in counts.iter().enumerate() {
            if used.contains(&(c as u32)) {
                continue;
            }
            if pick == usize::MAX || count > pick_count {
                pick = c;
                pick_count = count;
            }
        }
        let class = &classes[pick];

        let next_step = step
            .checked_mul(inner_step)
            .ok_or_else(|| Error::Capacity("rescaling step exceeds u64".into()))?;
        let next_step2 = next_step
            .checked_mul(next_step)
            .ok_or_else(|| Error::Capacity("rescaling step exceeds u64".into()))?;
        let next_window = (inner_window / (inner_step * next_step)).max(1);

        // Realign the new grid onto the chosen class, allowing partial
        // overlap at either end.
        let span = next_step2
            .checked_mul(next_window)
            .ok_or_else(|| Error::Capacity("window span exceeds u64".into()))?;
        let lo = 1i64 - span as i64;
        let hi = n as i64 - next_step2 as i64;
        let in_class =
            |p: i64| p >= 1 && p <= n as i64 && colours[p as usize - 1] == pick as u32;
        let (shift, _) = best_alignment(&in_class, next_step2, next_window, lo, hi);
        let grid_in_class: Vec<i64> = (1..=next_window)
            .map(|t| (next_step2 * t) as i64)
            .filter(|&u| in_class(shift + u))
            .collect();

        // Slide the previous intersection set against the class grid
        // and keep the overlap at the best shift.
        let best_shift = match &shifted {
            None => 0,
            Some(t) => {
                let mut tally: HashMap<i64, u64> = HashMap::new();
                for &u in &grid_in_class {
                    for &v in t.iter() {
                        *tally.entry(u - v).or_insert(0) += 1;
                    }
                }
                let mut best_x = 0i64;
                let mut best_count = 0u64;
                for (&x, &count) in &tally {
                    if count > best_count || (count == best_count && x < best_x) {
                        best_x = x;
                        best_count = count;
                    }
                }
                debug_assert!(best_count >= 1);
                best_x
            }
        };
        let next_shifted: BTreeSet<i64> = match &shifted {
            None => class.iter().map(|&c| c as i64 - shift).collect(),
            Some(t) => class
                .iter()
                .map(|&c| c as i64 - shift)
                .filter(|&v| t.contains(&(v - best_shift)))
                .collect(),
        };

        used.push(pick as u32);
        shifted = Some(next_shifted);
        step = next_step;
        window = next_window;
        offset = best_shift;
    };

    Ok(IterationTrace {
        stages,
        termination,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::construct::construct_lower_bound;

    fn trace_of(k: u32) -> IterationTrace {
        let c = construct_lower_bound(k).unwrap();
        iteration_trace(&c, &IncrementConfig::default()).unwrap()
    }

    #[test]
    fn two_block_trace_matches_hand_derivation() {
        // n = 4, classes {1} and {2, 3, 4}. Round 0 certifies the 3
        // consecutive pairs of [4]; the only root is 1, colour 0; the
        // class {1} realigns to shift -3, leaving grid point 4. Round 1
        // has density 1/4, and the singleton is immediately too coarse.
        let got = trace_of(2);
        assert_eq!(
            got.stages,
            vec![
                TraceStage {
                    index: 0,
                    colours_used: vec![],
                    step: 1,
                    window: 4,
                    offset: 0,
                    hits: 4
                },
                TraceStage {
                    index: 1,
                    colours_used: vec![0],
                    step: 1,
                    window: 4,
                    offset: 0,
                    hits: 1
                },
            ]
        );
        assert_eq!(got.termination, TraceTermination::NoUsableBranch);
    }

    #[test]
    fn three_block_trace_descends_into_middle_class() {
        // n = 16: roots {1, 2, 3} have colours 0, 1, 1, so colour 1
        // wins; its class {2, 3, 4} aligns at shift -12 onto grid
        // points {14, 15, 16}, density 3/16.
        let got = trace_of(3);
        assert_eq!(got.stages.len(), 2);
        assert_eq!(
            got.stages[1],
            TraceStage {
                index: 1,
                colours_used: vec![1],
                step: 1,
                window: 16,
                offset: 0,
                hits: 3
            }
        );
        assert!((got.stages[1].density() - 0.1875).abs() < 1e-15);
        assert_eq!(got.termination, TraceTermination::NoUsableBranch);
    }

    #[test]
    fn four_block_trace_descends_into_third_class() {
        // n = 256: roots {1..15} split 1/3/11/0 across the colours, so
        // colour 2 wins; {5..16} aligns at shift -240 onto {245..256},
        // density 12/256.
        let got = trace_of(4);
        assert_eq!(got.stages.len(), 2);
        assert_eq!(
            got.stages[1],
            TraceStage {
                index: 1,
                colours_used: vec![2],
                step: 1,
                window: 256,
                offset: 0,
                hits: 12
            }
        );
        assert!((got.stages[1].density() - 12.0 / 256.0).abs() < 1e-15);
        assert_eq!(got.termination, TraceTermination::NoUsableBranch);
    }

    #[test]
    fn single_point_trace_stops_after_one_round() {
        let c = Colouring::from_explicit(1, vec![0]).unwrap();
        let got = iteration_trace(&c, &IncrementConfig::default()).unwrap();
        assert_eq!(got.stages.len(), 1);
        assert_eq!(got.stages[0].hits, 1);
        assert_eq!(got.termination, TraceTermination::NoUsableBranch);
    }

    #[test]
    fn trace_rejects_dirty_colourings() {
        // All of [5] in one colour contains 2 - 1 = 1^2.
        let c = Colouring::from_explicit(1, vec![0; 5]).unwrap();
        assert!(matches!(
            iteration_trace(&c, &IncrementConfig::default()),
            Err(Error::Precondition(_))
        ));
    }

    #[test]
    fn trace_structural_invariants() {
        for k in 2..=4u32 {
            let got = trace_of(k);
            assert!(got.stages.len() <= k as usize);
            for (i, stage) in got.stages.iter().enumerate() {
                assert_eq!(stage.index as usize, i);
                assert_eq!(stage.colours_used.len(), i);
                let d = stage.density();
                assert!(d > 0.0 && d <= 1.0, "k = {k}, stage {i}: density {d}");
            }
            // Eliminated colours never repeat.
            if let Some(last) = got.stages.last() {
                let mut seen = last.colours_used.clone();
                seen.sort_unstable();
                seen.dedup();
                assert_eq!(seen.len(), last.colours_used.len());
            }
        }
    }

    #[test]
    fn trace_is_deterministic() {
        for k in 2..=4u32 {
            let c = construct_lower_bound(k).unwrap();
            let cfg = IncrementConfig::default();
            assert_eq!(
                iteration_trace(&c, &cfg).unwrap(),
                iteration_trace(&c, &cfg).unwrap()
            );
        }
    }
}
