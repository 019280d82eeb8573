//! Statistical weights, microstate probabilities and the fractal von Neumann
//! entropy per state.
//!
//! Everything is in nats with `K = 1`. Weights are handled as logarithms of
//! gamma functions, since `y` is non-integer for `1 < h < 2` and the counts
//! overflow long before the sizes used in the large-`G` checks.

use libm::lgamma;

use crate::error::{domain, Error, Result};
use crate::solver::SolverPoint;

/// `G` states holding `N` particles of class `h`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct WeightParams {
    pub states: u64,
    pub particles: u64,
    pub h: f64,
}

impl WeightParams {
    pub fn new(states: u64, particles: u64, h: f64) -> Result<Self> {
        if states == 0 {
            return Err(domain("number of states G must be positive"));
        }
        if !h.is_finite() || !(1.0..=2.0).contains(&h) {
            return Err(domain(format!("Hausdorff dimension h = {h} outside [1, 2]")));
        }
        Ok(Self { states, particles, h })
    }

    /// Mean occupation `n = N / G`.
    pub fn occupation(&self) -> f64 {
        self.particles as f64 / self.states as f64
    }

    /// `x = N`.
    pub fn x(&self) -> f64 {
        self.particles as f64
    }

    /// `y = G + (N - 1)(h - 1) - N`.
    pub fn y(&self) -> f64 {
        let g = self.states as f64;
        let n = self.particles as f64;
        // G - (h - 1) - N (2 - h); exact at h = 1 and h = 2
        g - (self.h - 1.0) - n * (2.0 - self.h)
    }

    pub fn is_feasible(&self) -> bool {
        self.y() >= 0.0
    }
}

/// `ln W = lnGamma(x + y + 1) - lnGamma(x + 1) - lnGamma(y + 1)`.
///
/// Reduces to `ln C(G, N)` at `h = 1` and `ln C(N + G - 1, N)` at `h = 2`.
pub fn log_weight(params: &WeightParams) -> Result<f64> {
    let (x, y) = (params.x(), params.y());
    if y < 0.0 {
        return Err(Error::InfeasibleOccupancy {
            states: params.states,
            particles: params.particles,
            h: params.h,
            y,
        });
    }
    Ok(lgamma(x + y + 1.0) - lgamma(x + 1.0) - lgamma(y + 1.0))
}

/// `a ln a` with `0 ln 0 = 0`.
fn x_ln_x(a: f64) -> f64 {
    if a == 0.0 {
        0.0
    } else {
        a * a.ln()
    }
}

/// Entropy per state as a function of the mean occupation:
///
/// ```text
/// S/K = [1 + (h-1)n] ln{[1 + (h-1)n] / n} - [1 + (h-2)n] ln{[1 + (h-2)n] / n}
/// ```
pub fn entropy_from_n(h: f64, n: f64) -> Result<f64> {
    if !h.is_finite() || !(1.0..=2.0).contains(&h) {
        return Err(domain(format!("Hausdorff dimension h = {h} outside [1, 2]")));
    }
    if !n.is_finite() || n <= 0.0 {
        return Err(domain(format!("occupation must be positive and finite, got {n}")));
    }
    let upper = 1.0 + (h - 1.0) * n;
    let lower = 1.0 + (h - 2.0) * n;
    if lower <= 0.0 {
        return Err(domain(format!(
            "occupation n = {n} at or beyond the class cap 1/(2 - h) = {}",
            1.0 / (2.0 - h)
        )));
    }
    // upper - lower = n, so the ln n terms collapse into -n ln n.
    let s = x_ln_x(upper) - x_ln_x(lower) - x_ln_x(n);
    Ok(s.max(0.0))
}

/// Entropy per state from the solved `Y`: `S/K = n [(Y-1) ln(Y-1) - (Y-2) ln(Y-2)]`.
pub fn entropy_from_y(point: &SolverPoint) -> f64 {
    let t = point.y_minus_two();
    let bracket = (1.0 + t) * point.log_y_minus_one() - t * point.log_y_minus_two();
    point.occupation() * bracket
}

/// Entropy per state in terms of the microstate probabilities:
/// `S/K = (-p ln p - q ln q) / (q + (2 - h) p)`.
pub fn entropy_from_pq(point: &SolverPoint) -> f64 {
    let (p, q) = (point.p(), point.q());
    let shannon = -p * point.log_p() - q * point.log_q();
    shannon / (q + (2.0 - point.h()) * p)
}

/// `ln P = N ln p + ([n(h - 2) + 1] G - (h - 1)) ln q` with `q = 1 - p`.
pub fn microstate_log_probability(params: &WeightParams, p: f64) -> Result<f64> {
    if !(p > 0.0 && p < 1.0) {
        return Err(domain(format!("p must lie in (0, 1), got {p}")));
    }
    let h = params.h;
    let g = params.states as f64;
    let n = params.particles as f64;
    // [n(h - 2) + 1] G = N (h - 2) + G
    let q_exponent = n * (h - 2.0) + g - (h - 1.0);
    Ok(n * p.ln() + q_exponent * (-p).ln_1p())
}

/// Largest feasible particle number (`y >= 0`), or `None` when unbounded (`h = 2`).
pub fn max_particles(h: f64, states: u64) -> Option<u64> {
    if h >= 2.0 {
        return None;
    }
    let g = states as f64;
    let mut n = ((g + 1.0 - h) / (2.0 - h)).floor().max(0.0) as u64;
    // floor of a rounded quotient can land one past the boundary
    while n > 0 && (WeightParams { states, particles: n, h }).y() < 0.0 {
        n -= 1;
    }
    while (WeightParams { states, particles: n + 1, h }).y() >= 0.0 {
        n += 1;
    }
    Some(n)
}

/// Running `ln(sum exp(x_i))`.
#[derive(Debug, Clone, Copy)]
pub struct LogSumExp {
    max: f64,
    scaled: f64,
}

impl Default for LogSumExp {
    fn default() -> Self {
        Self {
            max: f64::NEG_INFINITY,
            scaled: 0.0,
        }
    }
}

impl LogSumExp {
    pub fn add(&mut self, x: f64) {
        if x == f64::NEG_INFINITY {
            return;
        }
        if x > self.max {
            self.scaled = self.scaled * (self.max - x).exp() + 1.0;
            self.max = x;
        } else {
            self.scaled += (x - self.max).exp();
        }
    }

    pub fn merge(&mut self, other: &LogSumExp) {
        if other.max == f64::NEG_INFINITY {
            return;
        }
        if other.max > self.max {
            self.scaled = self.scaled * (self.max - other.max).exp() + other.scaled;
            self.max = other.max;
        } else {
            self.scaled += other.scaled * (other.max - self.max).exp();
        }
    }

    pub fn value(&self) -> f64 {
        self.max + self.scaled.ln()
    }
}

/// `sum_N W(N) P(N) - 1` over every feasible `N`.
///
/// Exact (to rounding) at `h = 1`. At `h = 2` the series runs over all `N`
/// and sums to `1/q`; it is truncated once the remaining geometric tail is
/// below double precision.
pub fn normalization_defect(h: f64, p: f64, states: u64) -> Result<f64> {
    if !(p > 0.0 && p < 1.0) {
        return Err(domain(format!("p must lie in (0, 1), got {p}")));
    }
    WeightParams::new(states, 0, h)?;
    let term = |n: u64| -> Result<f64> {
        let params = WeightParams { states, particles: n, h };
        Ok(log_weight(&params)? + microstate_log_probability(&params, p)?)
    };
    let mut acc = LogSumExp::default();
    match max_particles(h, states) {
        Some(max_n) => {
            for n in 0..=max_n {
                acc.add(term(n)?);
            }
        }
        None => {
            // Terms behave like C(N + G - 1, N) p^N: they rise to a peak near
            // N ~ pG/q, then fall with ratio tending to p.
            let peak = (p * states as f64 / (1.0 - p)).ceil() as u64;
            let mut n = 0u64;
            loop {
                let t = term(n)?;
                acc.add(t);
                if n > peak && t < acc.value() + (f64::EPSILON * (1.0 - p)).ln() - 2.0 {
                    break;
                }
                n += 1;
            }
        }
    }
    Ok(acc.value().exp_m1())
}

/// `|ln W(G, round(nG), h) / G - S(h, n)|`, which vanishes as `G -> infinity`.
pub fn boltzmann_consistency(h: f64, n: f64, states: u64) -> Result<f64> {
    let entropy = entropy_from_n(h, n)?;
    let particles = (n * states as f64).round();
    if particles < 0.0 {
        return Err(domain("negative particle number"));
    }
    let params = WeightParams::new(states, particles as u64, h)?;
    let per_state = log_weight(&params)? / states as f64;
    Ok((per_state - entropy).abs())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::solver::solve_y;

    fn close(a: f64, b: f64, tol: f64) -> bool {
        (a - b).abs() <= tol * b.abs().max(1.0)
    }

    #[test]
    fn weight_examples() {
        let w = |g, n, h| log_weight(&WeightParams::new(g, n, h).unwrap()).unwrap();
        assert!(close(w(5, 2, 1.0), 10f64.ln(), 1e-14));
        assert!(close(w(5, 2, 2.0), 15f64.ln(), 1e-14));
        // x = 2, y = 5/2: Gamma(11/2) / (Gamma(3) Gamma(7/2)) from half-integer values
        let sqrt_pi = std::f64::consts::PI.sqrt();
        let gamma_11_2 = 945.0 / 32.0 * sqrt_pi;
        let gamma_7_2 = 15.0 / 8.0 * sqrt_pi;
        let expected = (gamma_11_2 / (2.0 * gamma_7_2)).ln();
        assert!(close(w(4, 2, 1.5), expected, 1e-14));
        assert!(close(w(4, 2, 1.5), (63.0f64 / 8.0).ln(), 1e-14));
    }

    #[test]
    fn infeasible_weight() {
        let err = log_weight(&WeightParams::new(3, 4, 1.0).unwrap()).unwrap_err();
        assert!(matches!(err, Error::InfeasibleOccupancy { .. }));
        // cap 2 at h = 3/2: y = G - 1/2 - N/2
        assert!(log_weight(&WeightParams::new(3, 5, 1.5).unwrap()).is_ok());
        assert!(log_weight(&WeightParams::new(3, 6, 1.5).unwrap()).is_err());
        assert!(WeightParams::new(0, 0, 1.0).is_err());
    }

    #[test]
    fn entropy_examples() {
        let ln2 = std::f64::consts::LN_2;
        assert!(close(entropy_from_n(1.0, 0.5).unwrap(), ln2, 1e-15));
        assert!(close(entropy_from_n(2.0, 1.0).unwrap(), 2.0 * ln2, 1e-15));
        assert!(entropy_from_n(1.5, 1e-300).unwrap() < 1e-290);
        assert!(entropy_from_n(1.0, 1.0).is_err());
        assert!(entropy_from_n(1.5, 2.0).is_err());
        assert!(entropy_from_n(1.5, 0.0).is_err());
    }

    #[test]
    fn entropy_forms_at_fermi_point() {
        let pt = solve_y(1.0, 1.0).unwrap();
        let ln2 = std::f64::consts::LN_2;
        assert!(close(entropy_from_y(&pt), ln2, 1e-15));
        assert!(close(entropy_from_pq(&pt), ln2, 1e-15));
        let pt = solve_y(1.5, 1.0).unwrap();
        let by_n = entropy_from_n(1.5, pt.occupation()).unwrap();
        assert!(close(entropy_from_y(&pt), by_n, 1e-12));
        assert!(close(entropy_from_pq(&pt), by_n, 1e-12));
        assert!(entropy_from_y(&solve_y(1.3, 1e12).unwrap()) < 1e-9);
    }

    #[test]
    fn microstate_examples() {
        let lp = |g, n, h, p| microstate_log_probability(&WeightParams::new(g, n, h).unwrap(), p).unwrap();
        let ln_half = 0.5f64.ln();
        assert!(close(lp(3, 1, 1.0, 0.5), 3.0 * ln_half, 1e-15));
        assert!(close(lp(3, 2, 2.0, 1.0 / 3.0), 2.0 * (1.0f64 / 3.0).ln() + 2.0 * (2.0f64 / 3.0).ln(), 1e-15));
        assert!(close(lp(4, 2, 1.5, 0.5), 2.0 * ln_half + 2.5 * ln_half, 1e-15));
        assert!(microstate_log_probability(&WeightParams::new(3, 1, 1.0).unwrap(), 1.0).is_err());
    }

    #[test]
    fn normalization_examples() {
        assert!(normalization_defect(1.0, 0.3, 20).unwrap().abs() <= 1e-12);
        assert!(normalization_defect(1.0, 0.5, 1).unwrap().abs() <= 1e-15);
        assert!(normalization_defect(1.5, 0.3, 200).unwrap().is_finite());
        // At h = 2 the negative binomial series sums to 1/q.
        let d = normalization_defect(2.0, 0.3, 10).unwrap();
        assert!(close(d, 0.3 / 0.7, 1e-12), "{d}");
    }

    #[test]
    fn feasible_range() {
        assert_eq!(max_particles(1.0, 7), Some(7));
        // y = G - 1/2 - N/2 >= 0  =>  N <= 2G - 1
        assert_eq!(max_particles(1.5, 3), Some(5));
        assert_eq!(max_particles(4.0 / 3.0, 10), Some(14));
        assert_eq!(max_particles(2.0, 3), None);
    }

    #[test]
    fn log_sum_exp_merge() {
        let xs = [-3.0, 0.5, 2.0, -700.0, 1.0];
        let mut whole = LogSumExp::default();
        xs.iter().for_each(|&x| whole.add(x));
        let (mut a, mut b) = (LogSumExp::default(), LogSumExp::default());
        xs[..2].iter().for_each(|&x| a.add(x));
        xs[2..].iter().for_each(|&x| b.add(x));
        a.merge(&b);
        let direct: f64 = xs.iter().map(|x| x.exp()).sum::<f64>().ln();
        assert!(close(whole.value(), direct, 1e-15));
        assert!(close(a.value(), direct, 1e-15));
    }

    #[test]
    fn boltzmann_examples() {
        for (h, n) in [(1.5, 0.5), (1.0, 0.5), (2.0, 1.0)] {
            let d = boltzmann_consistency(h, n, 10_000_000).unwrap();
            assert!(d <= 1e-5, "h={h} n={n} d={d}");
        }
        assert!(boltzmann_consistency(1.0, 1.5, 10).is_err());
    }
}
