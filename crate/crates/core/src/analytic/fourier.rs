//! Exponential sums over squares and their diagnostic cross-checks.
//!
//! Everything here evaluates or audits a finite trigonometric quantity:
//! the square-phase exponential sum, best rational approximations by
//! continued fractions, major-arc membership, the Dirichlet-kernel
//! transform of an arithmetic-progression measure, and Parseval
//! identities for balanced indicator functions. All routines are
//! deterministic; frequencies can be given exactly as rationals so that
//! grid evaluations never accumulate phase drift.

use std::f64::consts::PI;

use num_integer::{gcd, Roots};
use rustfft::num_complex::Complex64;
use rustfft::FftPlanner;

use crate::error::{Error, Result};

/// A frequency on the unit circle, exact when possible.
///
/// Rational frequencies evaluate with integer phase reduction, so
/// `e(theta * z^2)` at a rational `theta` is computed from the exact
/// residue of `num * z^2` modulo `den` rather than from a rounded
/// product. Use [`Theta::Real`] only when the frequency genuinely is a
/// float.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Theta {
    /// `num / den` with `den >= 1`; not required to be in lowest terms.
    Rational { num: i64, den: u64 },
    /// An arbitrary float frequency.
    Real(f64),
}

impl Theta {
    /// Exact rational frequency `num / den`.
    pub fn rational(num: i64, den: u64) -> Result<Self> {
        if den == 0 {
            return Err(Error::Domain("denominator must be at least 1".into()));
        }
        Ok(Theta::Rational { num, den })
    }

    /// Float frequency; must be finite.
    pub fn real(value: f64) -> Result<Self> {
        if !value.is_finite() {
            return Err(Error::Domain("frequency must be finite".into()));
        }
        Ok(Theta::Real(value))
    }

    /// The frequency as a float.
    pub fn value(&self) -> f64 {
        match *self {
            Theta::Rational { num, den } => num as f64 / den as f64,
            Theta::Real(x) => x,
        }
    }
}

/// `e(x) = exp(2 pi i x)`.
fn e(x: f64) -> Complex64 {
    Complex64::new((2.0 * PI * x).cos(), (2.0 * PI * x).sin())
}

/// The square-phase exponential sum `sum_{z=1}^{floor(sqrt(nprime))}
/// e(-theta * z^2)`.
///
/// For rational `theta` the phase of each term is reduced exactly
/// modulo 1 before any float enters, so the result is stable across the
/// whole summation range.
pub fn weyl_sum(theta: &Theta, nprime: u64) -> Result<Complex64> {
    if nprime == 0 {
        return Err(Error::Domain("nprime must be at least 1".into()));
    }
    let zmax = nprime.sqrt();
    let mut total = Complex64::new(0.0, 0.0);
    match *theta {
        Theta::Rational { num, den } => {
            let den128 = den as u128;
            let num_mod = (num as i128).rem_euclid(den as i128) as u128;
            for z in 1..=zmax {
                let zz = (z as u128 * z as u128) % den128;
                let frac = (num_mod * zz) % den128;
                total += e(-(frac as f64) / den as f64);
            }
        }
        Theta::Real(x) => {
            if !x.is_finite() {
                return Err(Error::Domain("frequency must be finite".into()));
            }
            for z in 1..=zmax {
                let zf = z as f64;
                total += e(-x * zf * zf);
            }
        }
    }
    Ok(total)
}

/// Best rational approximation `(a, q)` to `theta` with `1 <= q <=
/// q_cap`, by continued-fraction convergents.
///
/// The returned fraction is in lowest terms and satisfies
/// `|theta - a/q| <= 1 / (q * (q_cap + 1))` up to float rounding, the
/// classical pigeonhole guarantee.
pub fn diophantine_approx(theta: f64, q_cap: u64) -> Result<(i64, u64)> {
    if !theta.is_finite() {
        return Err(Error::Domain("frequency must be finite".into()));
    }
    if q_cap == 0 {
        return Err(Error::Domain("q_cap must be at least 1".into()));
    }
    let a0 = theta.floor();
    if a0.abs() >= 9.0e18 {
        return Err(Error::Domain("frequency magnitude too large".into()));
    }
    let (mut p_prev, mut q_prev): (i128, i128) = (1, 0);
    let (mut p, mut q): (i128, i128) = (a0 as i128, 1);
    let mut x = theta - a0;
    // Convergents of the continued fraction, stopping at the last
    // denominator within the cap. 1e-15 absorbs the float noise of an
    // exactly rational input; beyond it the expansion is fiction anyway.
    while x.abs() >= 1e-15 {
        let recip = 1.0 / x;
        let a = recip.floor();
        if a >= 9.0e18 {
            break;
        }
        let a = a as i128;
        let q_next = match a.checked_mul(q).and_then(|t| t.checked_add(q_prev)) {
            Some(v) => v,
            None => break,
        };
        if q_next as u128 > q_cap as u128 {
            break;
        }
        let p_next = match a.checked_mul(p).and_then(|t| t.checked_add(p_prev)) {
            Some(v) => v,
            None => break,
        };
        p_prev = p;
        q_prev = q;
        p = p_next;
        q = q_next;
        x = recip - a as f64;
    }
    let num = i64::try_from(p)
        .map_err(|_| Error::Domain("approximation numerator exceeds i64".into()))?;
    Ok((num, q as u64))
}

/// Whether `theta` lies within `1/(q * big_q)` of a reduced fraction
/// with denominator exactly `q`.
///
/// Requires `1 <= q <= big_q`. Both the floor and ceiling candidates
/// for the numerator are inspected.
pub fn major_arc_membership(theta: f64, q: u64, big_q: u64) -> Result<bool> {
    if !theta.is_finite() {
        return Err(Error::Domain("frequency must be finite".into()));
    }
    if q == 0 || big_q == 0 || q > big_q {
        return Err(Error::Domain(
            "arc parameters require 1 <= q <= big_q".into(),
        ));
    }
    let scaled = theta * q as f64;
    if !scaled.is_finite() || scaled.abs() >= 9.0e18 {
        return Err(Error::Domain("frequency magnitude too large".into()));
    }
    let radius = 1.0 / (q as f64 * big_q as f64);
    let base = scaled.floor() as i64;
    for a in [base, base + 1] {
        if (theta - a as f64 / q as f64).abs() <= radius {
            let residue = a.rem_euclid(q as i64) as u64;
            if gcd(residue, q) == 1 {
                return Ok(true);
            }
        }
    }
    Ok(false)
}

/// Fourier transform of the normalised counting measure of an
/// arithmetic progression with common difference `q^2` and `2*big_q + 1`
/// terms, evaluated at frequency `theta`: a Dirichlet kernel in
/// `q^2 * theta`.
///
/// Returns exactly `1` when `q^2 * theta` is an integer (decided
/// exactly for rational `theta`); the value is always real.
pub fn progression_measure_hat(theta: &Theta, q: u64, big_q: u64) -> Complex64 {
    // Fractional part of q^2 * theta in [0, 1).
    let frac = match *theta {
        Theta::Rational { num, den } => {
            let den128 = den as u128;
            let num_mod = (num as i128).rem_euclid(den as i128) as u128;
            let qq = ((q as u128) % den128) * ((q as u128) % den128) % den128;
            let r = (num_mod * qq) % den128;
            if r == 0 {
                return Complex64::new(1.0, 0.0);
            }
            r as f64 / den as f64
        }
        Theta::Real(x) => {
            let t = x * (q as f64) * (q as f64);
            let f = t - t.floor();
            if f == 0.0 {
                return Complex64::new(1.0, 0.0);
            }
            f
        }
    };
    let terms = 2.0 * big_q as f64 + 1.0;
    // sin(terms * pi * frac) / (terms * sin(pi * frac)): the integer
    // part of terms * frac contributes (-1)^k to both numerator and the
    // periodic extension, and terms is odd, so evaluating at the
    // fractional part directly is sign-correct.
    let value = (terms * PI * frac).sin() / (terms * (PI * frac).sin());
    Complex64::new(value, 0.0)
}

/// Indicator of a subset of `{1, ..., n}` recentred to mean zero:
/// `1 - |A|/n` on the subset, `-|A|/n` off it.
#[derive(Debug, Clone)]
pub struct BalancedIndicator {
    points: Vec<u64>,
    n: u64,
}

impl BalancedIndicator {
    /// Balanced indicator of `points` inside `{1, ..., n}`; the set must
    /// be strictly ascending within range (empty is allowed).
    pub fn new(points: Vec<u64>, n: u64) -> Result<Self> {
        if n == 0 {
            return Err(Error::Domain("ground interval must be nonempty".into()));
        }
        crate::counting::validate_set(&points)?;
        if points.last().is_some_and(|&hi| hi > n) {
            return Err(Error::Domain("set exceeds the ground interval".into()));
        }
        Ok(BalancedIndicator { points, n })
    }

    /// The subset, ascending.
    pub fn points(&self) -> &[u64] {
        &self.points
    }

    /// Size of the ground interval.
    pub fn n(&self) -> u64 {
        self.n
    }

    /// `|A| / n`.
    pub fn density(&self) -> f64 {
        self.points.len() as f64 / self.n as f64
    }

    /// Value at a point: `1 - density` on the set, `-density` on the
    /// rest of the interval, `0` outside it.
    pub fn value_at(&self, t: u64) -> f64 {
        if t == 0 || t > self.n {
            return 0.0;
        }
        let alpha = self.density();
        if self.points.binary_search(&t).is_ok() {
            1.0 - alpha
        } else {
            -alpha
        }
    }

    /// Exact energy `sum_t f(t)^2 = |A| (1-alpha)^2 + (n-|A|) alpha^2`.
    pub fn energy(&self) -> f64 {
        let alpha = self.density();
        let inside = self.points.len() as f64;
        let outside = (self.n - self.points.len() as u64) as f64;
        inside * (1.0 - alpha) * (1.0 - alpha) + outside * alpha * alpha
    }
}

/// Both sides of a Parseval identity and their relative gap.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ParsevalReport {
    /// Time-domain energy, from the closed form.
    pub lhs: f64,
    /// Frequency-domain energy `sum_j |X_j|^2 / m`.
    pub rhs: f64,
    /// `|lhs - rhs| / max(lhs, 1)`.
    pub relative_error: f64,
}

/// Checks Parseval's identity for a balanced indicator embedded in a
/// length-`m` transform, `m >= 2n` (padding so the embedding is
/// injective on differences).
pub fn parseval_check(f: &BalancedIndicator, m: usize) -> Result<ParsevalReport> {
    let n = f.n();
    if (m as u128) < 2 * n as u128 {
        return Err(Error::Precondition(
            "transform length must be at least twice the interval".into(),
        ));
    }
    let mut buffer: Vec<Complex64> = vec![Complex64::new(0.0, 0.0); m];
    for t in 1..=n {
        buffer[t as usize] = Complex64::new(f.value_at(t), 0.0);
    }
    FftPlanner::new().plan_fft_forward(m).process(&mut buffer);
    let rhs = buffer.iter().map(|c| c.norm_sqr()).sum::<f64>() / m as f64;
    let lhs = f.energy();
    let relative_error = (lhs - rhs).abs() / lhs.max(1.0);
    Ok(ParsevalReport {
        lhs,
        rhs,
        relative_error,
    })
}

/// One grid frequency whose exponential sum exceeded its envelope.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EnvelopePoint {
    /// Grid index `j` (frequency `j / grid`).
    pub index: u64,
    /// `|S(j/grid)|`.
    pub magnitude: f64,
    /// The envelope value it was compared against.
    pub envelope: f64,
}

/// Outcome of sweeping the exponential sum over a full frequency grid
/// against a square-root cancellation envelope.
#[derive(Debug, Clone)]
pub struct EnvelopeReport {
    /// Number of grid points, frequencies `j / grid` for `j` in `0..grid`.
    pub grid: u64,
    /// Range parameter of the sum (summation runs to `floor(sqrt(nprime))`).
    pub nprime: u64,
    /// Multiplicative constant of the envelope.
    pub constant: f64,
    /// Grid points checked.
    pub checked: u64,
    /// Frequencies where the magnitude exceeded the envelope.
    pub violations: Vec<EnvelopePoint>,
    /// Largest magnitude/envelope ratio seen.
    pub max_ratio: f64,
    /// Largest magnitude seen.
    pub max_magnitude: f64,
    /// The trivial bound `floor(sqrt(nprime))`.
    pub trivial_bound: f64,
}

/// Sweeps `|S(j/grid)|` for `j` in `0..grid` against the envelope
/// `constant * (sqrt(nprime/q) + sqrt(sqrt(nprime) * ln(q+1)) +
/// sqrt(q * ln(q+1)))`, where `a/q` is the best rational approximation
/// to `j/grid` with denominator at most `floor(sqrt(nprime))`.
pub fn weyl_envelope_report(nprime: u64, grid: u64, constant: f64) -> Result<EnvelopeReport> {
    if grid == 0 {
        return Err(Error::Domain("grid must have at least one point".into()));
    }
    if nprime == 0 {
        return Err(Error::Domain("nprime must be at least 1".into()));
    }
    if !(constant.is_finite() && constant > 0.0) {
        return Err(Error::Domain("constant must be positive".into()));
    }
    let zmax = nprime.sqrt();
    let nf = nprime as f64;
    let mut violations = Vec::new();
    let mut max_ratio: f64 = 0.0;
    let mut max_magnitude: f64 = 0.0;
    for j in 0..grid {
        let theta = Theta::Rational {
            num: j as i64,
            den: grid,
        };
        let magnitude = weyl_sum(&theta, nprime)?.norm();
        let (_, q) = diophantine_approx(j as f64 / grid as f64, zmax.max(1))?;
        let qf = q as f64;
        let log_term = (qf + 1.0).ln();
        let envelope =
            constant * ((nf / qf).sqrt() + (nf.sqrt() * log_term).sqrt() + (qf * log_term).sqrt());
        let ratio = magnitude / envelope;
        max_ratio = max_ratio.max(ratio);
        max_magnitude = max_magnitude.max(magnitude);
        if magnitude > envelope {
            violations.push(EnvelopePoint {
                index: j,
                magnitude,
                envelope,
            });
        }
    }
    Ok(EnvelopeReport {
        grid,
        nprime,
        constant,
        checked: grid,
        violations,
        max_ratio,
        max_magnitude,
        trivial_bound: zmax as f64,
    })
}

/// Dirichlet-kernel magnitudes sampled across major arcs.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct KernelArcReport {
    /// Number of reduced fractions `a/q` whose arcs were sampled.
    pub arcs_sampled: u64,
    /// Total sample points evaluated.
    pub points: u64,
    /// Samples where `|m_hat| < constant / q`.
    pub below_bound: u64,
    /// Smallest `|m_hat| * q` observed.
    pub min_scaled: f64,
}

/// Samples `|m_hat(theta)|` on each arc `[a/q, a/q + 1/(q*big_q))` at
/// `samples_per_arc` exact rational offsets and tallies how often the
/// magnitude drops below `constant / q`.
///
/// The kernel has genuine zeros inside the arcs, so a nonzero
/// `below_bound` is expected; this is a diagnostic profile, not a
/// verified inequality.
pub fn kernel_arc_report(
    q_max: u64,
    big_q: u64,
    samples_per_arc: u64,
    constant: f64,
) -> Result<KernelArcReport> {
    if q_max == 0 || big_q == 0 || samples_per_arc == 0 {
        return Err(Error::Domain(
            "arc sweep needs q_max, big_q, samples_per_arc >= 1".into(),
        ));
    }
    if q_max > big_q {
        return Err(Error::Domain("q_max must not exceed big_q".into()));
    }
    let mut arcs = 0u64;
    let mut points = 0u64;
    let mut below = 0u64;
    let mut min_scaled = f64::INFINITY;
    for q in 1..=q_max {
        let numerators: Vec<u64> = if q == 1 {
            vec![0]
        } else {
            (1..q).filter(|&a| gcd(a, q) == 1).collect()
        };
        for a in numerators {
            arcs += 1;
            for s in 0..samples_per_arc {
                // theta = a/q + s / (q * samples * big_q), exactly.
                let den = q
                    .checked_mul(samples_per_arc)
                    .and_then(|v| v.checked_mul(big_q))
                    .ok_or_else(|| Error::Capacity("arc denominator exceeds u64".into()))?;
                let num = a
                    .checked_mul(samples_per_arc)
                    .and_then(|v| v.checked_mul(big_q))
                    .and_then(|v| v.checked_add(s))
                    .ok_or_else(|| Error::Capacity("arc numerator exceeds u64".into()))?;
                let num = i64::try_from(num)
                    .map_err(|_| Error::Capacity("arc numerator exceeds i64".into()))?;
                let theta = Theta::Rational { num, den };
                let magnitude = progression_measure_hat(&theta, q, big_q).norm();
                points += 1;
                if magnitude < constant / q as f64 {
                    below += 1;
                }
                min_scaled = min_scaled.min(magnitude * q as f64);
            }
        }
    }
    Ok(KernelArcReport {
        arcs_sampled: arcs,
        points,
        below_bound: below,
        min_scaled,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn close(a: Complex64, b: Complex64) -> bool {
        (a - b).norm() < 1e-9
    }

    #[test]
    fn weyl_sum_at_zero_counts_terms() {
        // theta = 0: every term is 1, so the sum is floor(sqrt(100)) = 10.
        let s = weyl_sum(&Theta::Rational { num: 0, den: 1 }, 100).unwrap();
        assert!(close(s, Complex64::new(10.0, 0.0)));
    }

    #[test]
    fn weyl_sum_at_one_half_cancels_in_pairs() {
        // theta = 1/2, range 4: e(-1/2) + e(-2) = -1 + 1 = 0.
        let s = weyl_sum(&Theta::Rational { num: 1, den: 2 }, 4).unwrap();
        assert!(close(s, Complex64::new(0.0, 0.0)));
    }

    #[test]
    fn weyl_sum_single_term_quarter_turn() {
        // theta = 1/4, range 1: e(-1/4) = -i.
        let s = weyl_sum(&Theta::Rational { num: 1, den: 4 }, 1).unwrap();
        assert!(close(s, Complex64::new(0.0, -1.0)));
    }

    #[test]
    fn weyl_sum_rational_and_real_paths_agree() {
        for (num, den) in [(1i64, 7u64), (3, 8), (5, 12), (-2, 9)] {
            let exact = weyl_sum(&Theta::Rational { num, den }, 500).unwrap();
            let float = weyl_sum(&Theta::Real(num as f64 / den as f64), 500).unwrap();
            assert!(
                (exact - float).norm() < 1e-8,
                "paths disagree at {num}/{den}"
            );
        }
    }

    #[test]
    fn weyl_sum_conjugate_symmetry() {
        // S(1 - theta) = conj(S(theta)) since e(-(1-theta) z^2) =
        // e(theta z^2) up to a full turn.
        for num in 1..20i64 {
            let s = weyl_sum(&Theta::Rational { num, den: 20 }, 300).unwrap();
            let t = weyl_sum(
                &Theta::Rational {
                    num: 20 - num,
                    den: 20,
                },
                300,
            )
            .unwrap();
            assert!(close(t, s.conj()), "asymmetry at {num}/20");
        }
    }

    #[test]
    fn weyl_sum_respects_trivial_bound() {
        for j in 0..64u64 {
            let s = weyl_sum(&Theta::Rational { num: j as i64, den: 64 }, 2000).unwrap();
            let zmax = 2000u64.sqrt() as f64;
            assert!(s.norm() <= zmax + 1e-9);
        }
    }

    #[test]
    fn diophantine_matches_known_fractions() {
        assert_eq!(diophantine_approx(0.5, 10).unwrap(), (1, 2));
        assert_eq!(diophantine_approx(1.0 / 3.0, 10).unwrap(), (1, 3));
        // Golden ratio minus one: convergents 1/1, 1/2, 2/3, 3/5, 5/8,
        // 8/13; the last within cap 10 is 5/8.
        assert_eq!(diophantine_approx(0.6180339887, 10).unwrap(), (5, 8));
    }

    #[test]
    fn diophantine_postconditions_on_grid() {
        // Every frequency j/997 must be approximated within the
        // pigeonhole guarantee, with a denominator in range and in
        // lowest terms.
        for cap in [5u64, 31, 100] {
            for j in 0..997u64 {
                let theta = j as f64 / 997.0;
                let (a, q) = diophantine_approx(theta, cap).unwrap();
                assert!(q >= 1 && q <= cap, "q out of range at j={j} cap={cap}");
                assert_eq!(gcd(a.unsigned_abs(), q), 1, "not reduced at j={j}");
                let err = (theta - a as f64 / q as f64).abs();
                assert!(
                    err <= 1.0 / (q as f64 * cap as f64) + 1e-12,
                    "approximation too loose at j={j} cap={cap}: err={err}"
                );
            }
        }
    }

    #[test]
    fn diophantine_handles_integers_and_negatives() {
        assert_eq!(diophantine_approx(3.0, 10).unwrap(), (3, 1));
        assert_eq!(diophantine_approx(-0.5, 10).unwrap(), (-1, 2));
        assert_eq!(diophantine_approx(0.0, 7).unwrap(), (0, 1));
    }

    #[test]
    fn major_arc_membership_matches_hand_checks() {
        // 1/2 is the reduced fraction 1/2 itself: inside its own arc.
        assert!(major_arc_membership(0.5, 2, 10).unwrap());
        // 1/2 is 1/6 away from both thirds, far beyond 1/300.
        assert!(!major_arc_membership(0.5, 3, 100).unwrap());
        // 0 = 0/1 and gcd(0, 1) = 1.
        assert!(major_arc_membership(0.0, 1, 5).unwrap());
    }

    #[test]
    fn major_arc_rejects_unreduced_candidates() {
        // 1/2 = 2/4 but gcd(2, 4) > 1, so the q = 4 arc around it
        // requires |1/2 - a/4| <= 1/40 with a odd; both odd candidates
        // are 1/4 away.
        assert!(!major_arc_membership(0.5, 4, 10).unwrap());
    }

    #[test]
    fn major_arc_parameter_validation() {
        assert!(major_arc_membership(0.5, 0, 10).is_err());
        assert!(major_arc_membership(0.5, 11, 10).is_err());
    }

    #[test]
    fn measure_hat_is_one_at_integer_phase() {
        let one = Complex64::new(1.0, 0.0);
        assert_eq!(
            progression_measure_hat(&Theta::Rational { num: 0, den: 1 }, 5, 7),
            one
        );
        // q^2 * theta = 9 * (2/3) = 6, an integer.
        assert_eq!(
            progression_measure_hat(&Theta::Rational { num: 2, den: 3 }, 3, 4),
            one
        );
        assert_eq!(progression_measure_hat(&Theta::Real(2.0), 1, 3), one);
    }

    #[test]
    fn measure_hat_kernel_zero() {
        // q = 1, big_q = 1, theta = 1/3: sin(pi) / (3 sin(pi/3)) = 0.
        let v = progression_measure_hat(&Theta::Rational { num: 1, den: 3 }, 1, 1);
        assert!(v.norm() < 1e-12);
    }

    #[test]
    fn measure_hat_matches_direct_average() {
        // The transform is the average of e(q^2 theta j) over the 2Q+1
        // progression offsets j in [-Q, Q].
        for (num, den, q, big_q) in [(1i64, 7u64, 2u64, 3u64), (3, 11, 1, 5), (2, 9, 3, 4)] {
            let theta = num as f64 / den as f64;
            let mut direct = Complex64::new(0.0, 0.0);
            for j in -(big_q as i64)..=(big_q as i64) {
                let phase = 2.0 * PI * theta * (q * q) as f64 * j as f64;
                direct += Complex64::new(phase.cos(), phase.sin());
            }
            direct /= 2.0 * big_q as f64 + 1.0;
            let kernel = progression_measure_hat(&Theta::Rational { num, den }, q, big_q);
            assert!(
                (kernel - direct).norm() < 1e-9,
                "kernel mismatch at {num}/{den}, q={q}, Q={big_q}"
            );
        }
    }

    #[test]
    fn balanced_indicator_full_set_has_zero_energy() {
        let f = BalancedIndicator::new((1..=32).collect(), 32).unwrap();
        let report = parseval_check(&f, 64).unwrap();
        assert!(report.lhs.abs() < 1e-12);
        assert!(report.rhs.abs() < 1e-9);
    }

    #[test]
    fn parseval_singleton_energy_is_half() {
        // A = {1} in [2]: alpha = 1/2, energy = (1/2)^2 + (1/2)^2 = 1/2.
        let f = BalancedIndicator::new(vec![1], 2).unwrap();
        let report = parseval_check(&f, 4).unwrap();
        assert!((report.lhs - 0.5).abs() < 1e-12);
        assert!(report.relative_error < 1e-12);
    }

    #[test]
    fn parseval_agrees_with_naive_dft() {
        let f = BalancedIndicator::new(vec![2, 3, 5, 7, 11], 12).unwrap();
        let m = 32usize;
        let report = parseval_check(&f, m).unwrap();
        // Naive O(m^2) transform as an independent oracle.
        let samples: Vec<f64> = (0..m).map(|t| f.value_at(t as u64)).collect();
        let mut rhs = 0.0;
        for j in 0..m {
            let mut x = Complex64::new(0.0, 0.0);
            for (t, &v) in samples.iter().enumerate() {
                let phase = -2.0 * PI * (j * t) as f64 / m as f64;
                x += v * Complex64::new(phase.cos(), phase.sin());
            }
            rhs += x.norm_sqr();
        }
        rhs /= m as f64;
        assert!((report.rhs - rhs).abs() < 1e-9);
        assert!(report.relative_error < 1e-12);
    }

    #[test]
    fn parseval_requires_padding() {
        let f = BalancedIndicator::new(vec![1], 8).unwrap();
        assert!(matches!(
            parseval_check(&f, 15),
            Err(crate::error::Error::Precondition(_))
        ));
    }

    #[test]
    fn balanced_indicator_validates_range() {
        assert!(BalancedIndicator::new(vec![3], 2).is_err());
        assert!(BalancedIndicator::new(vec![0], 2).is_err());
        assert!(BalancedIndicator::new(vec![], 5).is_ok());
    }

    #[test]
    fn envelope_holds_on_coarse_grid() {
        let report = weyl_envelope_report(10_000, 256, 10.0).unwrap();
        assert_eq!(report.checked, 256);
        assert!(
            report.violations.is_empty(),
            "unexpected envelope violations: {:?}",
            report.violations
        );
        assert!(report.max_ratio > 0.0 && report.max_ratio <= 1.0);
        assert!(report.max_magnitude <= report.trivial_bound + 1e-9);
    }

    #[test]
    fn kernel_arc_sweep_profiles_magnitudes() {
        let report = kernel_arc_report(6, 40, 8, 0.3).unwrap();
        // Arcs: one per reduced fraction; q = 1..6 contribute
        // 1+1+2+2+4+2 = 12 arcs.
        assert_eq!(report.arcs_sampled, 12);
        assert_eq!(report.points, 12 * 8);
        assert!(report.min_scaled.is_finite());
        // At the arc centre the kernel is exactly 1, so not every
        // sample can fall below the bound.
        assert!(report.below_bound < report.points);
    }
}
