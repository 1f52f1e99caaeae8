//! Exact feasibility search and the largest-`n` computation.
//!
//! [`feasible`] decides by backtracking whether `{1..n}` admits a clean
//! `k`-colouring. Points are assigned in increasing order; when point `p`
//! receives colour `c`, the only new solutions that involve no unassigned
//! point are those with largest member `p`, i.e. `(p, p - z^2, z)` for
//! each `z` with `z^2 < p` — a solution with `y = p` or `z = p` has
//! `x > p`. The per-step conflict test is therefore a sweep over `z` up to
//! `sqrt(p - 1)`.
//!
//! Symmetry breaking (on by default) fixes the canonical colour order:
//! a colour may be tried at a point only if every smaller colour has
//! already appeared. Branching ascends through colours, so the first
//! complete assignment found is the lexicographically least clean
//! colouring; with symmetry breaking disabled the verdict is unchanged
//! but the work multiplies by permutations of the colour set.
//!
//! Budgets count *nodes* — attempted point/colour assignments — which
//! makes runs bit-reproducible; an optional wall-clock limit is checked
//! coarsely. A search cut short returns `Unknown`: `NotColourable` is
//! only ever reported after exhausting the tree.
//!
//! [`compute_s`] ascends from the largest certified-colourable `n` (the
//! block colouring's extent for `k >= 2`, the singleton for `k = 1`) one
//! point at a time, so its exactness claim rests on two adjacent
//! verdicts: `Colourable` at the returned value and an exhaustive
//! `NotColourable` one past it.
//!
//! [`encode_cnf`] and [`dpll_sat`] provide an independent route to the
//! same verdicts through a DIMACS encoding and a deliberately simple
//! DPLL solver (unit propagation plus first-unassigned branching), used
//! by the test suite as a cross-checking oracle.

use std::time::{Duration, Instant};

use num_bigint::BigUint;
use num_integer::Roots;

use crate::colouring::{Colouring, DEFAULT_EXPLICIT_LIMIT};
use crate::construct::{construct_extent, construct_lower_bound};
use crate::error::{Error, Result};

/// Resource ceiling for a search. `None` means unlimited.
#[derive(Debug, Clone, Default)]
pub struct Budget {
    /// Maximum attempted assignments.
    pub max_nodes: Option<u64>,
    /// Coarse wall-clock limit.
    pub max_time: Option<Duration>,
}

impl Budget {
    pub fn unlimited() -> Self {
        Budget::default()
    }

    pub fn nodes(max: u64) -> Self {
        Budget {
            max_nodes: Some(max),
            ..Budget::default()
        }
    }

    pub fn millis(ms: u64) -> Self {
        Budget {
            max_time: Some(Duration::from_millis(ms)),
            ..Budget::default()
        }
    }

    /// The budget left after `nodes` and `elapsed` have been spent.
    fn remaining(&self, nodes: u64, elapsed: Duration) -> Budget {
        Budget {
            max_nodes: self.max_nodes.map(|m| m.saturating_sub(nodes)),
            max_time: self.max_time.map(|t| t.saturating_sub(elapsed)),
        }
    }
}

/// Verdict of a feasibility search.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SearchStatus {
    /// A clean colouring exists (witness attached).
    Colourable,
    /// The whole tree was exhausted without finding one.
    NotColourable,
    /// The budget ran out first.
    Unknown,
}

/// Result of [`feasible`].
#[derive(Debug, Clone)]
pub struct SearchOutcome {
    pub status: SearchStatus,
    /// A clean colouring when `status` is `Colourable`.
    pub witness: Option<Colouring>,
    /// Attempted assignments.
    pub nodes: u64,
    pub elapsed: Duration,
}

/// Knobs for [`feasible_with_options`].
#[derive(Debug, Clone)]
pub struct SearchOptions {
    /// Canonical colour order (see module docs). Disabling it changes
    /// node counts but never verdicts.
    pub symmetry_breaking: bool,
}

impl Default for SearchOptions {
    fn default() -> Self {
        SearchOptions {
            symmetry_breaking: true,
        }
    }
}

const UNSET: u32 = u32::MAX;
/// How often the wall-clock is consulted, in nodes.
const TIME_CHECK_MASK: u64 = 0xFFF;

/// Can `{1..n}` be cleanly `k`-coloured? Default options.
pub fn feasible(k: u32, n: u64, budget: &Budget) -> Result<SearchOutcome> {
    feasible_with_options(k, n, budget, &SearchOptions::default())
}

/// Can `{1..n}` be cleanly `k`-coloured?
pub fn feasible_with_options(
    k: u32,
    n: u64,
    budget: &Budget,
    opts: &SearchOptions,
) -> Result<SearchOutcome> {
    if k == 0 {
        return Err(Error::Domain("k must be at least 1".into()));
    }
    if n == 0 {
        return Err(Error::Domain("n must be at least 1".into()));
    }
    if n > DEFAULT_EXPLICIT_LIMIT as u64 {
        return Err(Error::Capacity(format!(
            "search needs explicit assignments; n = {n} exceeds {DEFAULT_EXPLICIT_LIMIT}"
        )));
    }
    let start = Instant::now();
    let n_us = n as usize;
    let mut colour: Vec<u32> = vec![UNSET; n_us + 1]; // 1-based
    let mut trial: Vec<u32> = vec![0; n_us + 2]; // next colour to try at depth p
    let mut fresh: Vec<u32> = vec![0; n_us + 2]; // least never-used colour entering depth p
    let mut nodes: u64 = 0;
    let mut p: usize = 1;

    let conflict = |colour: &[u32], p: usize, c: u32| -> bool {
        let mut z = 1usize;
        while z * z < p {
            if colour[z] == c && colour[p - z * z] == c {
                return true;
            }
            z += 1;
        }
        false
    };

    let outcome = |status: SearchStatus, witness, nodes, start: Instant| SearchOutcome {
        status,
        witness,
        nodes,
        elapsed: start.elapsed(),
    };

    loop {
        let cap = if opts.symmetry_breaking {
            fresh[p].min(k - 1)
        } else {
            k - 1
        };
        let mut placed = None;
        let mut c = trial[p];
        while c <= cap {
            if let Some(max) = budget.max_nodes {
                if nodes >= max {
                    return Ok(outcome(SearchStatus::Unknown, None, nodes, start));
                }
            }
            nodes += 1;
            if nodes & TIME_CHECK_MASK == 0 {
                if let Some(limit) = budget.max_time {
                    if start.elapsed() >= limit {
                        return Ok(outcome(SearchStatus::Unknown, None, nodes, start));
                    }
                }
            }
            if !conflict(&colour, p, c) {
                placed = Some(c);
                break;
            }
            c += 1;
        }
        match placed {
            Some(c) => {
                colour[p] = c;
                trial[p] = c + 1;
                if p == n_us {
                    let witness = Colouring::from_explicit(k, colour[1..].to_vec())
                        .expect("search assigns in-range colours");
                    debug_assert!(witness.verify().is_clean());
                    return Ok(outcome(
                        SearchStatus::Colourable,
                        Some(witness),
                        nodes,
                        start,
                    ));
                }
                fresh[p + 1] = fresh[p].max(c + 1);
                p += 1;
                trial[p] = 0;
            }
            None => {
                colour[p] = UNSET;
                if p == 1 {
                    return Ok(outcome(SearchStatus::NotColourable, None, nodes, start));
                }
                p -= 1;
                colour[p] = UNSET;
            }
        }
    }
}

/// One feasibility probe made by [`compute_s`].
#[derive(Debug, Clone)]
pub struct ProbeRecord {
    pub n: u64,
    pub status: SearchStatus,
    pub nodes: u64,
}

/// Why a non-exact [`ComputeSOutcome`] stopped where it did.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Cut {
    /// The node or time budget ran out mid-probe.
    Budget,
    /// The next probe would not fit explicit representation.
    Capacity,
}

/// Result of [`compute_s`].
#[derive(Debug, Clone)]
pub struct ComputeSOutcome {
    /// The largest `n` certified cleanly `k`-colourable; exact answer when
    /// `exact` holds, otherwise a lower bound.
    pub value: BigUint,
    /// Both neighbouring verdicts were established: colourable at `value`,
    /// exhaustively not colourable at `value + 1`.
    pub exact: bool,
    /// Present exactly when `exact` is false.
    pub cut: Option<Cut>,
    /// Clean colouring of `{1..value}` backing the bound.
    pub witness: Option<Colouring>,
    /// Every search probe, in the order performed.
    pub probes: Vec<ProbeRecord>,
    /// Total attempted assignments across probes.
    pub nodes: u64,
}

/// Largest `n` admitting a clean `k`-colouring, by ascending search.
///
/// The starting point is already certified without search: `n = 1` for a
/// single colour, the block colouring's extent `2^(2^(k-1))` otherwise.
/// Each further point is probed with whatever budget remains. When the
/// start exceeds explicit range the certified bound is returned as-is.
pub fn compute_s(k: u32, budget: &Budget) -> Result<ComputeSOutcome> {
    if k == 0 {
        return Err(Error::Domain("k must be at least 1".into()));
    }
    let start_time = Instant::now();
    let (mut value, mut witness): (BigUint, Colouring) = if k == 1 {
        (
            BigUint::from(1u32),
            Colouring::from_explicit(1, vec![0]).unwrap(),
        )
    } else {
        let c = construct_lower_bound(k)?;
        assert!(c.verify().is_clean(), "block colouring must verify");
        (construct_extent(k)?, c)
    };
    let mut probes = Vec::new();
    let mut nodes = 0u64;

    loop {
        let next = match value_plus_one_in_range(&value) {
            Some(next) => next,
            None => {
                return Ok(ComputeSOutcome {
                    value,
                    exact: false,
                    cut: Some(Cut::Capacity),
                    witness: Some(witness),
                    probes,
                    nodes,
                })
            }
        };
        let remaining = budget.remaining(nodes, start_time.elapsed());
        let probe = feasible(k, next, &remaining)?;
        nodes += probe.nodes;
        probes.push(ProbeRecord {
            n: next,
            status: probe.status,
            nodes: probe.nodes,
        });
        match probe.status {
            SearchStatus::Colourable => {
                value = BigUint::from(next);
                witness = probe.witness.expect("colourable outcomes carry witnesses");
            }
            SearchStatus::NotColourable => {
                return Ok(ComputeSOutcome {
                    value,
                    exact: true,
                    cut: None,
                    witness: Some(witness),
                    probes,
                    nodes,
                });
            }
            SearchStatus::Unknown => {
                return Ok(ComputeSOutcome {
                    value,
                    exact: false,
                    cut: Some(Cut::Budget),
                    witness: Some(witness),
                    probes,
                    nodes,
                });
            }
        }
    }
}

fn value_plus_one_in_range(value: &BigUint) -> Option<u64> {
    use num_traits::ToPrimitive;
    let v = value.to_u64()?;
    let next = v.checked_add(1)?;
    (next <= DEFAULT_EXPLICIT_LIMIT as u64).then_some(next)
}

// ---------------------------------------------------------------------------
// CNF encoding and the DPLL oracle
// ---------------------------------------------------------------------------

/// A CNF formula over variables `1..=num_vars`; clauses are lists of
/// non-zero literals.
#[derive(Debug, Clone)]
pub struct CnfFormula {
    pub num_vars: u64,
    pub clauses: Vec<Vec<i64>>,
}

impl CnfFormula {
    /// DIMACS text: `p cnf <vars> <clauses>` then one zero-terminated
    /// clause per line, in stored order.
    pub fn to_dimacs(&self) -> String {
        let mut out = format!("p cnf {} {}\n", self.num_vars, self.clauses.len());
        for clause in &self.clauses {
            for lit in clause {
                out.push_str(&lit.to_string());
                out.push(' ');
            }
            out.push_str("0\n");
        }
        out
    }
}

/// The propositional variable stating "point `x` has colour `c`":
/// `(x - 1) * k + c + 1`.
pub fn cnf_var(x: u64, c: u32, k: u32) -> i64 {
    ((x - 1) * k as u64 + c as u64 + 1) as i64
}

/// Encodes "some clean `k`-colouring of `{1..n}` exists" as CNF.
///
/// Clause order: for each point ascending, one at-least-one-colour clause
/// (followed, when `pairwise_at_most_one` is set, by its pairwise
/// at-most-one clauses); then for each solution triple in lexicographic
/// order and each colour ascending, the clause forbidding that triple in
/// that colour, with duplicate literals collapsed (e.g. `(2, 1, 1)` gives
/// a binary clause).
pub fn encode_cnf(k: u32, n: u64, pairwise_at_most_one: bool) -> Result<CnfFormula> {
    if k == 0 || n == 0 {
        return Err(Error::Domain("need k >= 1 and n >= 1".into()));
    }
    let num_vars = n
        .checked_mul(k as u64)
        .filter(|&v| v <= 1 << 22)
        .ok_or_else(|| Error::Capacity(format!("n * k = {n} * {k} variables is too large")))?;
    let mut clauses = Vec::new();
    for x in 1..=n {
        clauses.push((0..k).map(|c| cnf_var(x, c, k)).collect());
        if pairwise_at_most_one {
            for c1 in 0..k {
                for c2 in (c1 + 1)..k {
                    clauses.push(vec![-cnf_var(x, c1, k), -cnf_var(x, c2, k)]);
                }
            }
        }
    }
    for x in 2..=n {
        let zmax = (x - 1).sqrt();
        for z in (1..=zmax).rev() {
            let y = x - z * z;
            for c in 0..k {
                let mut clause: Vec<i64> = Vec::with_capacity(3);
                for lit in [-cnf_var(x, c, k), -cnf_var(y, c, k), -cnf_var(z, c, k)] {
                    if !clause.contains(&lit) {
                        clause.push(lit);
                    }
                }
                clauses.push(clause);
            }
        }
    }
    Ok(CnfFormula { num_vars, clauses })
}

/// Satisfiability by textbook DPLL: unit propagation to fixpoint, then
/// branch on the first unassigned variable, `true` first. Deterministic;
/// returns a model (`model[v - 1]` is variable `v`) or `None`.
///
/// This is a correctness oracle, kept simple on purpose; it is fast
/// enough for the instance sizes the tests cross-check.
pub fn dpll_sat(f: &CnfFormula) -> Option<Vec<bool>> {
    let nv = f.num_vars as usize;
    let mut assign: Vec<i8> = vec![0; nv + 1];
    if dpll(&f.clauses, &mut assign) {
        Some((1..=nv).map(|v| assign[v] == 1).collect())
    } else {
        None
    }
}

fn lit_value(assign: &[i8], lit: i64) -> i8 {
    let v = assign[lit.unsigned_abs() as usize];
    if lit > 0 {
        v
    } else {
        -v
    }
}

/// Repeated full-scan unit propagation. Pushes assignments to `trail`;
/// returns false on conflict (empty clause under the assignment).
fn unit_propagate(clauses: &[Vec<i64>], assign: &mut [i8], trail: &mut Vec<usize>) -> bool {
    loop {
        let mut changed = false;
        for clause in clauses {
            let mut unassigned: Option<i64> = None;
            let mut count = 0;
            let mut satisfied = false;
            for &lit in clause {
                match lit_value(assign, lit) {
                    1 => {
                        satisfied = true;
                        break;
                    }
                    0 => {
                        count += 1;
                        unassigned = Some(lit);
                    }
                    _ => {}
                }
            }
            if satisfied {
                continue;
            }
            match count {
                0 => return false,
                1 => {
                    let lit = unassigned.unwrap();
                    let var = lit.unsigned_abs() as usize;
                    assign[var] = if lit > 0 { 1 } else { -1 };
                    trail.push(var);
                    changed = true;
                }
                _ => {}
            }
        }
        if !changed {
            return true;
        }
    }
}

fn dpll(clauses: &[Vec<i64>], assign: &mut Vec<i8>) -> bool {
    let mut trail = Vec::new();
    if !unit_propagate(clauses, assign, &mut trail) {
        for var in trail {
            assign[var] = 0;
        }
        return false;
    }
    let branch = (1..assign.len()).find(|&v| assign[v] == 0);
    let var = match branch {
        None => return true, // fully assigned and conflict-free
        Some(v) => v,
    };
    for val in [1i8, -1] {
        assign[var] = val;
        if dpll(clauses, assign) {
            return true;
        }
        assign[var] = 0;
    }
    for var in trail {
        assign[var] = 0;
    }
    false
}

/// Reads a clean colouring out of a model of [`encode_cnf`]'s formula:
/// each point takes its lowest asserted colour. Sound because the
/// forbidden-triple clauses make any asserted combination clean.
pub fn decode_model(model: &[bool], k: u32, n: u64) -> Result<Colouring> {
    let mut colours = Vec::with_capacity(n as usize);
    for x in 1..=n {
        let c = (0..k)
            .find(|&c| model[(cnf_var(x, c, k) - 1) as usize])
            .ok_or_else(|| Error::Precondition(format!("model asserts no colour at {x}")))?;
        colours.push(c);
    }
    Colouring::from_explicit(k, colours)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn singleton_is_feasible_one_colour() {
        let out = feasible(1, 1, &Budget::unlimited()).unwrap();
        assert_eq!(out.status, SearchStatus::Colourable);
        assert!(out.witness.unwrap().verify().is_clean());
    }

    #[test]
    fn two_points_need_two_colours() {
        let out = feasible(1, 2, &Budget::unlimited()).unwrap();
        assert_eq!(out.status, SearchStatus::NotColourable);
        let out = feasible(2, 2, &Budget::unlimited()).unwrap();
        assert_eq!(out.status, SearchStatus::Colourable);
    }

    #[test]
    fn block_extent_is_feasible_for_two_colours() {
        let out = feasible(2, 4, &Budget::unlimited()).unwrap();
        assert_eq!(out.status, SearchStatus::Colourable);
        // beyond the block bound, still fine for a while
        let out = feasible(2, 5, &Budget::unlimited()).unwrap();
        assert_eq!(out.status, SearchStatus::Colourable);
    }

    #[test]
    fn witness_is_lexicographically_least_assignment() {
        // With symmetry breaking and ascending colour trials the first
        // complete assignment is lexicographically least. For k = 2,
        // n = 5: point 2 clashes with (2,1,1) so takes colour 1; point 3
        // may reuse colour 0 because (3,2,1) has point 2 coloured 1;
        // point 4 clashes with (4,3,1); point 5 passes both (5,4,1) and
        // (5,1,2). Hence 0 1 0 1 0.
        let out = feasible(2, 5, &Budget::unlimited()).unwrap();
        let w = out.witness.unwrap();
        assert_eq!(w.to_explicit_colours().unwrap(), vec![0, 1, 0, 1, 0]);
    }

    #[test]
    fn zero_budget_is_unknown() {
        let out = feasible(2, 10, &Budget::nodes(0)).unwrap();
        assert_eq!(out.status, SearchStatus::Unknown);
        assert_eq!(out.nodes, 0);
    }

    #[test]
    fn node_counts_are_reproducible() {
        let a = feasible(2, 12, &Budget::unlimited()).unwrap();
        let b = feasible(2, 12, &Budget::unlimited()).unwrap();
        assert_eq!(a.nodes, b.nodes);
    }

    #[test]
    fn symmetry_breaking_preserves_verdicts() {
        let plain = SearchOptions {
            symmetry_breaking: false,
        };
        for k in 1..=3u32 {
            for n in 1..=14u64 {
                let with = feasible(k, n, &Budget::unlimited()).unwrap();
                let without =
                    feasible_with_options(k, n, &Budget::unlimited(), &plain).unwrap();
                assert_eq!(with.status, without.status, "k = {k}, n = {n}");
            }
        }
    }

    #[test]
    fn domain_and_capacity_errors() {
        assert!(matches!(
            feasible(0, 3, &Budget::unlimited()),
            Err(Error::Domain(_))
        ));
        assert!(matches!(
            feasible(2, 0, &Budget::unlimited()),
            Err(Error::Domain(_))
        ));
        assert!(matches!(
            feasible(2, DEFAULT_EXPLICIT_LIMIT as u64 + 1, &Budget::unlimited()),
            Err(Error::Capacity(_))
        ));
    }

    #[test]
    fn single_colour_value_is_exact() {
        let out = compute_s(1, &Budget::unlimited()).unwrap();
        assert!(out.exact);
        assert_eq!(out.value, BigUint::from(1u32));
        assert_eq!(out.probes.len(), 1); // the refutation at n = 2
    }

    #[test]
    fn two_colour_value_is_eight() {
        // Computed by this search and confirmed by hand: with colour(1) = A,
        // triples (x, x-1, 1) forbid consecutive pairs inside A, and since
        // (2,1,1) forces 2 into B, triples (x, x-4, 2) forbid difference 4
        // inside B. In {1..9} the difference-4 chains {1,5,9},{2,6},{3,7},
        // {4,8} with 1 outside B cap |B| at 4, while |A| = 5 forces
        // A = {1,3,5,7,9}, B = {2,4,6,8} which contains the pair (2,6).
        // Either way |A| + |B| < 9, so 9 is not 2-colourable; 8 is.
        let out = compute_s(2, &Budget::unlimited()).unwrap();
        assert!(out.exact);
        assert_eq!(out.value, BigUint::from(8u32));
        assert!(out.witness.unwrap().verify().is_clean());
        let probed: Vec<(u64, SearchStatus)> =
            out.probes.iter().map(|p| (p.n, p.status)).collect();
        assert_eq!(
            probed,
            vec![
                (5, SearchStatus::Colourable),
                (6, SearchStatus::Colourable),
                (7, SearchStatus::Colourable),
                (8, SearchStatus::Colourable),
                (9, SearchStatus::NotColourable),
            ]
        );
    }

    #[test]
    fn budgeted_value_is_flagged_lower_bound() {
        let out = compute_s(2, &Budget::nodes(1)).unwrap();
        assert!(!out.exact);
        assert_eq!(out.cut, Some(Cut::Budget));
        assert_eq!(out.value, BigUint::from(4u32)); // block colouring bound
        assert!(out.witness.unwrap().verify().is_clean());
    }

    #[test]
    fn oversized_start_reports_capacity_cut() {
        // k = 6 starts at 2^32, beyond explicit range.
        let out = compute_s(6, &Budget::nodes(10)).unwrap();
        assert!(!out.exact);
        assert_eq!(out.cut, Some(Cut::Capacity));
        assert_eq!(out.value, BigUint::from(1u64) << 32);
    }

    #[test]
    fn tiny_cnf_matches_frozen_dimacs() {
        let f = encode_cnf(1, 2, false).unwrap();
        assert_eq!(f.to_dimacs(), "p cnf 2 3\n1 0\n2 0\n-2 -1 0\n");
    }

    #[test]
    fn pairwise_at_most_one_clauses_appear() {
        let f = encode_cnf(2, 1, true).unwrap();
        assert_eq!(f.to_dimacs(), "p cnf 2 2\n1 2 0\n-1 -2 0\n");
    }

    #[test]
    fn dpll_basics() {
        let sat = CnfFormula {
            num_vars: 2,
            clauses: vec![vec![1, 2], vec![-1]],
        };
        let model = dpll_sat(&sat).unwrap();
        assert!(!model[0] && model[1]);
        let unsat = CnfFormula {
            num_vars: 1,
            clauses: vec![vec![1], vec![-1]],
        };
        assert!(dpll_sat(&unsat).is_none());
        let empty_clause = CnfFormula {
            num_vars: 1,
            clauses: vec![vec![]],
        };
        assert!(dpll_sat(&empty_clause).is_none());
    }

    #[test]
    fn dpll_agrees_with_search_on_small_instances() {
        for k in 1..=2u32 {
            for n in 1..=12u64 {
                let direct = feasible(k, n, &Budget::unlimited()).unwrap();
                let f = encode_cnf(k, n, false).unwrap();
                let model = dpll_sat(&f);
                assert_eq!(
                    direct.status == SearchStatus::Colourable,
                    model.is_some(),
                    "k = {k}, n = {n}"
                );
                if let Some(m) = model {
                    let decoded = decode_model(&m, k, n).unwrap();
                    assert!(decoded.verify().is_clean(), "k = {k}, n = {n}");
                }
            }
        }
    }
}

