//! Colourings of `{1..n}` and detection of monochromatic solutions of
//! `x - y = z^2`.
//!
//! A *solution* is a triple `(x, y, z)` of points in `{1..n}` with
//! `x - y = z^2`; since `z >= 1` this forces `x > y`, but `x = z` and
//! `y = z` are admitted (so `(2, 1, 1)` counts). A colouring is *clean*
//! when no colour class contains all three members of a solution.
//!
//! Two representations are kept side by side:
//!
//! * [`Colouring::from_explicit`] stores one colour index per point and is
//!   bounded by [`DEFAULT_EXPLICIT_LIMIT`];
//! * [`Colouring::from_runs`] stores maximal-interval runs with
//!   arbitrary-precision endpoints, so colourings of `{1..2^(2^19)}` and
//!   beyond stay cheap to hold and to verify.
//!
//! Verification never enumerates `{1..n}` in run form. The scan works
//! per colour class on run pairs: for `x` in run `Rx` and `y` in run `Ry`
//! the achievable differences form the integer interval
//! `[max(1, Rx.lo - Ry.hi), Rx.hi - Ry.lo]`, and the class contains a
//! solution using that pair of runs iff some member `z` of a class run has
//! `z^2` inside the interval. Intersecting a square range with an interval
//! only needs integer square roots, so the cost is cubic in the number of
//! runs of the class and independent of `n`.

use num_bigint::BigUint;
use num_integer::Roots;
use num_traits::{One, ToPrimitive, Zero};

use crate::error::{Error, Result};

/// Explicit-assignment ceiling: conversions to one-colour-per-point form
/// refuse colourings with more points than this.
pub const DEFAULT_EXPLICIT_LIMIT: usize = 1 << 28;

/// Ceiling for materialising the full solution list; the list has
/// `~(2/3) n^(3/2)` entries, so this keeps allocations in the tens of
/// millions of bytes at worst.
pub const ENUMERATION_LIMIT: u64 = 10_000;

/// A solution triple `(x, y, z)` with `x - y = z^2`.
///
/// The derived ordering is lexicographic in `(x, y, z)`, which is the
/// order [`enumerate_solutions`] emits and the order in which violation
/// witnesses are minimal.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub struct SolutionTriple {
    pub x: BigUint,
    pub y: BigUint,
    pub z: BigUint,
}

impl SolutionTriple {
    fn from_u64(x: u64, y: u64, z: u64) -> Self {
        SolutionTriple {
            x: BigUint::from(x),
            y: BigUint::from(y),
            z: BigUint::from(z),
        }
    }
}

impl std::fmt::Display for SolutionTriple {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "({}, {}, {})", self.x, self.y, self.z)
    }
}

/// Does `(x, y, z)` solve `x - y = z^2` inside `{1..n}`?
///
/// Out-of-range inputs (including zero) return `false`; this never fails.
pub fn is_solution(x: &BigUint, y: &BigUint, z: &BigUint, n: &BigUint) -> bool {
    let one = BigUint::one();
    if x < &one || y < &one || z < &one || x > n || y > n || z > n {
        return false;
    }
    if x <= y {
        return false; // z >= 1 forces x - y = z^2 >= 1
    }
    x - y == z * z
}

/// All solutions inside `{1..n}`, sorted lexicographically by `(x, y, z)`.
///
/// For fixed `x` the solutions are `(x, x - z^2, z)` for each `z` with
/// `z^2 < x`, and `y` grows as `z` shrinks, so descending `z` yields
/// ascending `y` and the list is produced already sorted.
pub fn enumerate_solutions(n: u64) -> Result<Vec<SolutionTriple>> {
    if n == 0 {
        return Err(Error::Domain("n must be at least 1".into()));
    }
    if n > ENUMERATION_LIMIT {
        return Err(Error::Capacity(format!(
            "explicit solution enumeration is limited to n <= {ENUMERATION_LIMIT}, got {n}"
        )));
    }
    let mut out = Vec::new();
    for x in 2..=n {
        let zmax = (x - 1).sqrt();
        for z in (1..=zmax).rev() {
            out.push(SolutionTriple::from_u64(x, x - z * z, z));
        }
    }
    Ok(out)
}

/// Number of solutions inside `{1..n}`: `sum over z^2 <= n-1 of (n - z^2)`.
///
/// Closed-form companion of [`enumerate_solutions`], usable far beyond the
/// materialisation limit.
pub fn solution_count(n: u64) -> u64 {
    if n == 0 {
        return 0;
    }
    let zmax = (n - 1).sqrt();
    (1..=zmax).map(|z| n - z * z).sum()
}

/// One maximal-interval run `[lo, hi]` of a single colour.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Run {
    pub lo: BigUint,
    pub hi: BigUint,
    pub colour: u32,
}

impl Run {
    pub fn new(lo: impl Into<BigUint>, hi: impl Into<BigUint>, colour: u32) -> Self {
        Run {
            lo: lo.into(),
            hi: hi.into(),
            colour,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
enum Body {
    Explicit(Vec<u32>),
    Runs(Vec<Run>),
}

/// A total colouring of `{1..n}` with colours `0..k`.
///
/// Values of this type always satisfy the structural invariants (total,
/// in-range colours, contiguous runs); the constructors are the only way
/// to build one and they validate.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Colouring {
    n: BigUint,
    k: u32,
    body: Body,
}

/// Outcome of [`Colouring::verify`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Verdict {
    /// No colour class contains a solution.
    Clean,
    /// Some class does; the witness is the lexicographically least
    /// monochromatic `(x, y, z)` over the whole colouring.
    Violation {
        x: BigUint,
        y: BigUint,
        z: BigUint,
        colour: u32,
    },
}

impl Verdict {
    pub fn is_clean(&self) -> bool {
        matches!(self, Verdict::Clean)
    }
}

impl Colouring {
    /// Builds an explicit colouring; `colours[i]` is the colour of point
    /// `i + 1`. Requires `k >= 1`, a non-empty vector and all entries `< k`.
    pub fn from_explicit(k: u32, colours: Vec<u32>) -> Result<Self> {
        if k == 0 {
            return Err(Error::InvalidColouring("k must be at least 1".into()));
        }
        if colours.is_empty() {
            return Err(Error::InvalidColouring(
                "a colouring needs at least one point".into(),
            ));
        }
        if let Some(pos) = colours.iter().position(|&c| c >= k) {
            return Err(Error::InvalidColouring(format!(
                "point {} has colour {} but k = {}",
                pos + 1,
                colours[pos],
                k
            )));
        }
        Ok(Colouring {
            n: BigUint::from(colours.len()),
            k,
            body: Body::Explicit(colours),
        })
    }

    /// Builds a run-form colouring. Runs must start at 1, be contiguous
    /// (`next.lo = prev.hi + 1`), have `lo <= hi` and colours `< k`;
    /// `n` is the last run's upper endpoint.
    pub fn from_runs(k: u32, runs: Vec<Run>) -> Result<Self> {
        if k == 0 {
            return Err(Error::InvalidColouring("k must be at least 1".into()));
        }
        if runs.is_empty() {
            return Err(Error::InvalidColouring(
                "a colouring needs at least one run".into(),
            ));
        }
        if runs[0].lo != BigUint::one() {
            return Err(Error::InvalidColouring(format!(
                "first run must start at 1, starts at {}",
                runs[0].lo
            )));
        }
        for (i, run) in runs.iter().enumerate() {
            if run.lo > run.hi {
                return Err(Error::InvalidColouring(format!(
                    "run {} has lo {} > hi {}",
                    i, run.lo, run.hi
                )));
            }
            if run.colour >= k {
                return Err(Error::InvalidColouring(format!(
                    "run {} has colour {} but k = {}",
                    i, run.colour, k
                )));
            }
            if i > 0 {
                let expected = &runs[i - 1].hi + BigUint::one();
                if run.lo != expected {
                    return Err(Error::InvalidColouring(format!(
                        "run {} starts at {} but the previous run ends at {}",
                        i,
                        run.lo,
                        runs[i - 1].hi
                    )));
                }
            }
        }
        let n = runs.last().unwrap().hi.clone();
        Ok(Colouring {
            n,
            k,
            body: Body::Runs(runs),
        })
    }

    pub fn n(&self) -> &BigUint {
        &self.n
    }

    /// `n` as a machine integer, when it fits.
    pub fn n_u64(&self) -> Option<u64> {
        self.n.to_u64()
    }

    pub fn k(&self) -> u32 {
        self.k
    }

    pub fn is_explicit(&self) -> bool {
        matches!(self.body, Body::Explicit(_))
    }

    /// The runs, when stored in run form.
    pub fn runs(&self) -> Option<&[Run]> {
        match &self.body {
            Body::Runs(r) => Some(r),
            Body::Explicit(_) => None,
        }
    }

    /// The colour of `point` (1-based). `Domain` error outside `{1..n}`.
    pub fn colour_of(&self, point: &BigUint) -> Result<u32> {
        if point < &BigUint::one() || point > &self.n {
            return Err(Error::Domain(format!(
                "point {point} outside 1..={}",
                self.n
            )));
        }
        match &self.body {
            Body::Explicit(cols) => {
                let idx = point.to_usize().expect("explicit n fits usize") - 1;
                Ok(cols[idx])
            }
            Body::Runs(runs) => {
                let at = runs.partition_point(|r| r.hi < *point);
                Ok(runs[at].colour)
            }
        }
    }

    /// One-colour-per-point form, refusing more than `limit` points.
    pub fn to_explicit_colours_with_limit(&self, limit: usize) -> Result<Vec<u32>> {
        let n = self.n.to_usize().filter(|&n| n <= limit).ok_or_else(|| {
            Error::Capacity(format!(
                "explicit form is limited to {} points, colouring has {}",
                limit, self.n
            ))
        })?;
        match &self.body {
            Body::Explicit(cols) => Ok(cols.clone()),
            Body::Runs(runs) => {
                let mut cols = Vec::with_capacity(n);
                for run in runs {
                    let lo = run.lo.to_usize().unwrap();
                    let hi = run.hi.to_usize().unwrap();
                    cols.extend(std::iter::repeat_n(run.colour, hi - lo + 1));
                }
                Ok(cols)
            }
        }
    }

    /// One-colour-per-point form under [`DEFAULT_EXPLICIT_LIMIT`].
    pub fn to_explicit_colours(&self) -> Result<Vec<u32>> {
        self.to_explicit_colours_with_limit(DEFAULT_EXPLICIT_LIMIT)
    }

    /// The same colouring in run form (maximal runs); lossless.
    pub fn to_runs(&self) -> Colouring {
        match &self.body {
            Body::Runs(_) => self.clone(),
            Body::Explicit(cols) => {
                let mut runs = Vec::new();
                let mut start = 1u64;
                for i in 1..=cols.len() {
                    if i == cols.len() || cols[i] != cols[i - 1] {
                        runs.push(Run::new(start, i as u64, cols[i - 1]));
                        start = i as u64 + 1;
                    }
                }
                Colouring {
                    n: self.n.clone(),
                    k: self.k,
                    body: Body::Runs(runs),
                }
            }
        }
    }

    /// Checks cleanness and reports the least witness on failure.
    ///
    /// Run-form colourings are scanned per class over run pairs as
    /// described in the module docs; explicit colourings take the same
    /// scan after grouping equal-coloured intervals, expressed over `u64`
    /// whenever `n` permits so that huge-endpoint arithmetic is reserved
    /// for colourings that need it.
    pub fn verify(&self) -> Verdict {
        // u64 endpoints are safe while lo + z^2 cannot overflow: z^2 <= n,
        // so anything up to 2^62 is comfortably in range.
        const U64_SAFE: u64 = 1 << 62;
        if let Some(n) = self.n.to_u64().filter(|&n| n <= U64_SAFE) {
            let _ = n;
            let classes = self.class_runs_u64();
            match scan_classes(&classes) {
                None => Verdict::Clean,
                Some((colour, (x, y, z))) => Verdict::Violation {
                    x: BigUint::from(x),
                    y: BigUint::from(y),
                    z: BigUint::from(z),
                    colour,
                },
            }
        } else {
            let classes = self.class_runs_big();
            match scan_classes(&classes) {
                None => Verdict::Clean,
                Some((colour, (x, y, z))) => Verdict::Violation { x, y, z, colour },
            }
        }
    }

    fn class_runs_u64(&self) -> Vec<Vec<(u64, u64)>> {
        let mut classes = vec![Vec::new(); self.k as usize];
        match &self.body {
            Body::Runs(runs) => {
                for run in runs {
                    classes[run.colour as usize]
                        .push((run.lo.to_u64().unwrap(), run.hi.to_u64().unwrap()));
                }
            }
            Body::Explicit(cols) => {
                let mut start = 1u64;
                for i in 1..=cols.len() {
                    if i == cols.len() || cols[i] != cols[i - 1] {
                        classes[cols[i - 1] as usize].push((start, i as u64));
                        start = i as u64 + 1;
                    }
                }
            }
        }
        classes
    }

    fn class_runs_big(&self) -> Vec<Vec<(BigUint, BigUint)>> {
        let mut classes = vec![Vec::new(); self.k as usize];
        if let Body::Runs(runs) = &self.body {
            for run in runs {
                classes[run.colour as usize].push((run.lo.clone(), run.hi.clone()));
            }
        } else {
            unreachable!("explicit bodies always fit the u64 scan");
        }
        classes
    }
}

fn ceil_sqrt<T: Roots + Clone>(v: &T) -> T {
    let s = v.sqrt();
    if s.clone() * s.clone() == *v {
        s
    } else {
        s + T::one()
    }
}

/// Least monochromatic solution per class, then lexicographically least
/// across classes; `classes[c]` lists the (sorted, disjoint) runs of
/// colour `c`.
fn scan_classes<T>(classes: &[Vec<(T, T)>]) -> Option<(u32, (T, T, T))>
where
    T: Roots + Clone + Ord,
{
    let mut best: Option<(u32, (T, T, T))> = None;
    for (colour, runs) in classes.iter().enumerate() {
        if let Some(w) = scan_one_class(runs) {
            let better = match &best {
                None => true,
                Some((_, cur)) => w < *cur,
            };
            if better {
                best = Some((colour as u32, w));
            }
        }
    }
    best
}

/// Least `(x, y, z)` with all three points inside the class, if any.
fn scan_one_class<T>(runs: &[(T, T)]) -> Option<(T, T, T)>
where
    T: Roots + Clone + Ord,
{
    let one = T::one();

    // Pass 1: the least achievable x. For a run pair (Rx, Ry) and a z-run
    // Rz, x is minimised by the least feasible z, and grows with z.
    let mut best_x: Option<T> = None;
    for (rx_lo, rx_hi) in runs {
        for (ry_lo, ry_hi) in runs {
            if rx_hi <= ry_lo {
                continue; // x > y is impossible with this pair
            }
            let dhi = rx_hi.clone() - ry_lo.clone();
            let dlo = if rx_lo > ry_hi {
                rx_lo.clone() - ry_hi.clone()
            } else {
                one.clone()
            };
            if dlo > dhi {
                continue;
            }
            let sq_lo = ceil_sqrt(&dlo);
            let sq_hi = dhi.sqrt();
            if sq_lo > sq_hi {
                continue;
            }
            for (rz_lo, rz_hi) in runs {
                let zlo = sq_lo.clone().max(rz_lo.clone());
                let zhi = sq_hi.clone().min(rz_hi.clone());
                if zlo > zhi {
                    continue;
                }
                // Feasibility of z in [zlo, zhi] guarantees a matching
                // (x, y); the least x for this combination:
                let cand = (ry_lo.clone() + zlo.clone() * zlo).max(rx_lo.clone());
                if best_x.as_ref().is_none_or(|b| cand < *b) {
                    best_x = Some(cand);
                }
            }
        }
    }
    let x = best_x?;

    // Pass 2: with x fixed, the least y means the greatest z such that
    // y = x - z^2 still lands in a class run.
    let mut best_z: Option<T> = None;
    for (ry_lo, ry_hi) in runs {
        if x <= *ry_lo {
            continue;
        }
        let dhi = x.clone() - ry_lo.clone();
        let dlo = if x > *ry_hi {
            x.clone() - ry_hi.clone()
        } else {
            one.clone()
        };
        let sq_lo = ceil_sqrt(&dlo);
        let sq_hi = dhi.sqrt();
        if sq_lo > sq_hi {
            continue;
        }
        for (rz_lo, rz_hi) in runs {
            let zlo = sq_lo.clone().max(rz_lo.clone());
            let zhi = sq_hi.clone().min(rz_hi.clone());
            if zlo > zhi {
                continue;
            }
            if best_z.as_ref().is_none_or(|b| zhi > *b) {
                best_z = Some(zhi);
            }
        }
    }
    let z = best_z.expect("pass 1 found a solution, so pass 2 must");
    let y = x.clone() - z.clone() * z.clone();
    Some((x, y, z))
}

// ---------------------------------------------------------------------------
// Text format
// ---------------------------------------------------------------------------

/// Serialises to the interchange format: header `n k`, then either an `E`
/// line followed by `n` whitespace-separated colour indices or an `R` line
/// followed by one `lo hi colour` line per run. All integers are decimal
/// without leading zeros, so emit-parse round trips are byte-exact.
impl Colouring {
    pub fn to_text(&self) -> String {
        let mut out = format!("{} {}\n", self.n, self.k);
        match &self.body {
            Body::Explicit(cols) => {
                out.push_str("E\n");
                let mut first = true;
                for c in cols {
                    if !first {
                        out.push(' ');
                    }
                    out.push_str(&c.to_string());
                    first = false;
                }
                out.push('\n');
            }
            Body::Runs(runs) => {
                out.push_str("R\n");
                for run in runs {
                    out.push_str(&format!("{} {} {}\n", run.lo, run.hi, run.colour));
                }
            }
        }
        out
    }

    pub fn parse_text(input: &str) -> Result<Colouring> {
        let mut lines = input.lines();
        let header = lines.next().ok_or_else(|| parse_err(1, "missing header"))?;
        let mut it = header.split_whitespace();
        let n_tok = it
            .next()
            .ok_or_else(|| parse_err(1, "header must be `n k`"))?;
        let k_tok = it
            .next()
            .ok_or_else(|| parse_err(1, "header must be `n k`"))?;
        if it.next().is_some() {
            return Err(parse_err(1, "header must be exactly `n k`"));
        }
        let n = parse_natural(n_tok, 1)?;
        let k: u32 = parse_natural(k_tok, 1)?
            .to_u32()
            .ok_or_else(|| parse_err(1, "k does not fit u32"))?;

        let tag = lines
            .next()
            .ok_or_else(|| parse_err(2, "missing body tag (E or R)"))?;
        match tag.trim() {
            "E" => {
                let n_usize = n.to_usize().filter(|&v| v <= DEFAULT_EXPLICIT_LIMIT).ok_or_else(
                    || {
                        Error::Capacity(format!(
                            "explicit body with n = {n} exceeds the limit of {DEFAULT_EXPLICIT_LIMIT}"
                        ))
                    },
                )?;
                let mut cols = Vec::with_capacity(n_usize);
                for (off, line) in lines.enumerate() {
                    for tok in line.split_whitespace() {
                        let c: u32 = parse_natural_or_zero(tok, off + 3)?
                            .to_u32()
                            .ok_or_else(|| parse_err(off + 3, "colour does not fit u32"))?;
                        cols.push(c);
                    }
                }
                if cols.len() != n_usize {
                    return Err(parse_err(
                        3,
                        &format!("expected {} colour entries, found {}", n_usize, cols.len()),
                    ));
                }
                let c = Colouring::from_explicit(k, cols)
                    .map_err(|e| parse_err(3, &e.to_string()))?;
                debug_assert_eq!(c.n, n);
                Ok(c)
            }
            "R" => {
                let mut runs = Vec::new();
                for (off, line) in lines.enumerate() {
                    let lineno = off + 3;
                    if line.trim().is_empty() {
                        continue;
                    }
                    let toks: Vec<&str> = line.split_whitespace().collect();
                    if toks.len() != 3 {
                        return Err(parse_err(lineno, "run lines are `lo hi colour`"));
                    }
                    let lo = parse_natural(toks[0], lineno)?;
                    let hi = parse_natural(toks[1], lineno)?;
                    let colour = parse_natural_or_zero(toks[2], lineno)?
                        .to_u32()
                        .ok_or_else(|| parse_err(lineno, "colour does not fit u32"))?;
                    runs.push(Run { lo, hi, colour });
                }
                let c = Colouring::from_runs(k, runs).map_err(|e| parse_err(3, &e.to_string()))?;
                if c.n != n {
                    return Err(parse_err(
                        1,
                        &format!("header says n = {n} but runs end at {}", c.n),
                    ));
                }
                Ok(c)
            }
            other => Err(parse_err(2, &format!("unknown body tag {other:?}"))),
        }
    }
}

fn parse_err(line: usize, message: &str) -> Error {
    Error::Parse {
        line,
        message: message.to_string(),
    }
}

/// Strict decimal: digits only, no leading zeros, value >= 1.
fn parse_natural(tok: &str, line: usize) -> Result<BigUint> {
    let v = parse_natural_or_zero(tok, line)?;
    if v.is_zero() {
        return Err(parse_err(line, "value must be at least 1"));
    }
    Ok(v)
}

/// Strict decimal: digits only, no leading zeros, zero allowed.
fn parse_natural_or_zero(tok: &str, line: usize) -> Result<BigUint> {
    if tok.is_empty() || !tok.bytes().all(|b| b.is_ascii_digit()) {
        return Err(parse_err(line, &format!("not a decimal integer: {tok:?}")));
    }
    if tok.len() > 1 && tok.starts_with('0') {
        return Err(parse_err(line, &format!("leading zero in {tok:?}")));
    }
    Ok(tok.parse::<BigUint>().expect("digits parse"))
}
