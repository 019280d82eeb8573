//! Fractal distribution function.
//!
//! For a class `h` and fugacity variable `xi = exp((epsilon - mu) / kT)` the
//! mean occupation is `n = 1 / (Y - h)`, where `Y > 2` is the unique root of
//!
//! ```text
//! (Y - 1)^(h - 1) (Y - 2)^(2 - h) = xi.
//! ```
//!
//! The root is found in the variable `u = ln(Y - 2)`, where the equation reads
//! `(h - 1) ln(1 + e^u) + (2 - h) u = ln xi`. The left side is convex and
//! strictly increasing in `u`, so a bracketed Newton iteration converges from
//! any starting bracket, and `Y - 2` keeps full relative precision even when
//! it is far below the spacing of doubles around 2.

use crate::error::{domain, Error, Result};

/// Default relative residual in `xi` at which the root-finder stops.
pub const DEFAULT_TOLERANCE: f64 = 1e-12;

/// A single-particle state at energy `epsilon`, chemical potential `mu` and
/// temperature `kT` (all in the same units).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StatisticalPoint {
    epsilon: f64,
    mu: f64,
    kt: f64,
}

impl StatisticalPoint {
    pub fn new(epsilon: f64, mu: f64, kt: f64) -> Result<Self> {
        if !(epsilon.is_finite() && mu.is_finite() && kt.is_finite()) {
            return Err(domain("statistical point has non-finite fields"));
        }
        if kt <= 0.0 {
            return Err(domain(format!("kT must be positive, got {kt}")));
        }
        Ok(Self { epsilon, mu, kt })
    }

    /// `(epsilon - mu) / kT`, i.e. `ln xi`.
    pub fn log_xi(&self) -> f64 {
        (self.epsilon - self.mu) / self.kt
    }

    pub fn xi(&self) -> f64 {
        self.log_xi().exp()
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SolverOptions {
    /// Stop once `|ln(lhs / xi)|` falls below this.
    pub tolerance: f64,
    pub max_iterations: usize,
    /// Use the root-finder even where a closed form exists (h = 1, 3/2, 2).
    pub force_generic: bool,
    /// Take one Newton step after the tolerance is met.
    pub polish: bool,
}

impl Default for SolverOptions {
    fn default() -> Self {
        Self {
            tolerance: DEFAULT_TOLERANCE,
            max_iterations: 500,
            force_generic: false,
            polish: true,
        }
    }
}

impl SolverOptions {
    pub fn generic() -> Self {
        Self {
            force_generic: true,
            ..Self::default()
        }
    }
}

/// The solved state at one fugacity.
///
/// `Y - 2` and its logarithm are stored alongside `Y` because near `Y = 2`
/// the difference is not representable as `Y - 2.0`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SolverPoint {
    h: f64,
    log_xi: f64,
    log_y_minus_two: f64,
    y_minus_two: f64,
    iterations: usize,
}

impl SolverPoint {
    fn from_log_root(h: f64, log_xi: f64, log_y_minus_two: f64, iterations: usize) -> Self {
        Self {
            h,
            log_xi,
            log_y_minus_two,
            y_minus_two: log_y_minus_two.exp(),
            iterations,
        }
    }

    pub fn h(&self) -> f64 {
        self.h
    }

    pub fn xi(&self) -> f64 {
        self.log_xi.exp()
    }

    pub fn log_xi(&self) -> f64 {
        self.log_xi
    }

    /// `Y[xi]`, always `> 2`.
    pub fn y(&self) -> f64 {
        2.0 + self.y_minus_two
    }

    pub fn y_minus_two(&self) -> f64 {
        self.y_minus_two
    }

    pub fn log_y_minus_two(&self) -> f64 {
        self.log_y_minus_two
    }

    /// `ln(Y - 1)`.
    pub fn log_y_minus_one(&self) -> f64 {
        softplus(self.log_y_minus_two)
    }

    /// Mean occupation `n = 1 / (Y - h)`.
    pub fn occupation(&self) -> f64 {
        1.0 / (self.y_minus_two + (2.0 - self.h))
    }

    /// Single-particle partition function `Theta = (Y - 2) / (Y - 1)`; equals `q`.
    pub fn theta(&self) -> f64 {
        self.q()
    }

    /// `p = 1 / (Y - 1)`.
    pub fn p(&self) -> f64 {
        1.0 / (1.0 + self.y_minus_two)
    }

    /// `q = (Y - 2) / (Y - 1)`.
    pub fn q(&self) -> f64 {
        let t = self.y_minus_two;
        if t.is_infinite() {
            1.0
        } else {
            t / (1.0 + t)
        }
    }

    /// `ln p`, accurate when `p` is tiny.
    pub fn log_p(&self) -> f64 {
        -softplus(self.log_y_minus_two)
    }

    /// `ln q`, accurate when `q` underflows.
    pub fn log_q(&self) -> f64 {
        self.log_y_minus_two - softplus(self.log_y_minus_two)
    }

    /// Root-finder iterations spent (0 for closed forms).
    pub fn iterations(&self) -> usize {
        self.iterations
    }
}

/// `ln(1 + e^u)` without overflow or loss of precision.
fn softplus(u: f64) -> f64 {
    if u > 0.0 {
        u + (-u).exp().ln_1p()
    } else {
        u.exp().ln_1p()
    }
}

fn logistic(u: f64) -> f64 {
    1.0 / (1.0 + (-u).exp())
}

fn check_class(h: f64) -> Result<()> {
    if !h.is_finite() || !(1.0..=2.0).contains(&h) {
        return Err(domain(format!("Hausdorff dimension h = {h} outside [1, 2]")));
    }
    Ok(())
}

/// Solves for `Y[xi]` with default options.
pub fn solve_y(h: f64, xi: f64) -> Result<SolverPoint> {
    solve_y_with(h, xi, &SolverOptions::default())
}

pub fn solve_y_with(h: f64, xi: f64, options: &SolverOptions) -> Result<SolverPoint> {
    if !xi.is_finite() || xi <= 0.0 {
        return Err(domain(format!("xi must be positive and finite, got {xi}")));
    }
    solve_log_xi(h, xi.ln(), options)
}

/// Solves for `Y` given `ln xi = (epsilon - mu) / kT` directly, which keeps
/// fugacities beyond the range of `f64` usable.
pub fn solve_log_xi(h: f64, log_xi: f64, options: &SolverOptions) -> Result<SolverPoint> {
    check_class(h)?;
    if !log_xi.is_finite() {
        return Err(domain(format!("ln xi must be finite, got {log_xi}")));
    }
    if h == 2.0 && log_xi <= 0.0 {
        return Err(Error::BoseDivergence { xi: log_xi.exp() });
    }
    if !options.force_generic {
        if let Some(u) = closed_form(h, log_xi) {
            return Ok(SolverPoint::from_log_root(h, log_xi, u, 0));
        }
    }
    let (u, iterations) = find_root(h, log_xi, options)?;
    Ok(SolverPoint::from_log_root(h, log_xi, u, iterations))
}

/// `ln(Y - 2)` in closed form at h = 1, 3/2 and 2.
fn closed_form(h: f64, log_xi: f64) -> Option<f64> {
    if h == 1.0 {
        // Y = xi + 2
        Some(log_xi)
    } else if h == 2.0 {
        // Y = xi + 1
        Some(log_xi.exp_m1().ln())
    } else if h == 1.5 {
        // (Y - 1)(Y - 2) = xi^2, so Y - 2 = (sqrt(1 + 4 xi^2) - 1) / 2
        let xi = log_xi.exp();
        if xi.is_infinite() {
            return None;
        }
        let root = 1.0f64.hypot(2.0 * xi);
        let t = if xi >= 1.0 {
            (root - 1.0) / 2.0
        } else {
            2.0 * xi * xi / (1.0 + root)
        };
        if t > 0.0 && t.is_finite() {
            Some(t.ln())
        } else {
            // xi^2 underflowed; fall back to the root-finder
            None
        }
    } else {
        None
    }
}

/// Residual `(h - 1) ln(1 + e^u) + (2 - h) u - ln xi` and its derivative.
fn residual(h: f64, log_xi: f64, u: f64) -> (f64, f64) {
    let value = (h - 1.0) * softplus(u) + (2.0 - h) * u - log_xi;
    let slope = (h - 1.0) * logistic(u) + (2.0 - h);
    (value, slope)
}

/// Bracketed Newton iteration on `u = ln(Y - 2)`.
fn find_root(h: f64, log_xi: f64, options: &SolverOptions) -> Result<(f64, usize)> {
    let not_converged = |iterations, residual| Error::NotConverged {
        h,
        xi: log_xi.exp(),
        iterations,
        residual,
    };

    // At u = ln xi (Y = xi + 2) the residual is (h - 1) ln(1 + 1/xi) >= 0.
    let mut hi = log_xi;
    let (f_hi, _) = residual(h, log_xi, hi);
    if f_hi == 0.0 {
        return Ok((hi, 0));
    }
    let mut step = 1.0;
    let mut lo = hi - step;
    let mut bracket_steps = 0;
    while residual(h, log_xi, lo).0 >= 0.0 {
        hi = lo;
        step *= 2.0;
        lo = hi - step;
        bracket_steps += 1;
        if bracket_steps > 1100 || !lo.is_finite() {
            return Err(not_converged(bracket_steps, f_hi));
        }
    }

    // Newton from the right endpoint; the residual is convex so Newton steps
    // from above stay above the root, but keep the bracket as a safeguard.
    let mut u = hi;
    let (mut f, mut df) = residual(h, log_xi, u);
    for iteration in 1..=options.max_iterations {
        if f.abs() <= options.tolerance {
            if options.polish && df > 0.0 {
                let polished = u - f / df;
                if polished > lo && polished < hi || polished == u {
                    u = polished;
                }
            }
            return Ok((u, iteration - 1));
        }
        if f > 0.0 {
            hi = u;
        } else {
            lo = u;
        }
        let newton = u - f / df;
        u = if df > 0.0 && newton > lo && newton < hi {
            newton
        } else {
            0.5 * (lo + hi)
        };
        (f, df) = residual(h, log_xi, u);
        if hi - lo <= f64::EPSILON * hi.abs().max(1.0) {
            // Bracket exhausted at machine resolution.
            if f.abs() <= options.tolerance {
                return Ok((u, iteration));
            }
            return Err(not_converged(iteration, f.abs()));
        }
    }
    Err(not_converged(options.max_iterations, f.abs()))
}

/// Mean occupation of a state at `point` for class `h`.
pub fn occupation(h: f64, point: &StatisticalPoint) -> Result<f64> {
    Ok(solve_log_xi(h, point.log_xi(), &SolverOptions::default())?.occupation())
}

/// Relative defect of the partition-function identity
/// `1/xi = Theta^(h - 2) - Theta^(h - 1)`.
///
/// The right side is evaluated as `Theta^(h - 2) (1 - Theta)` in log space.
pub fn partition_identity_defect(point: &SolverPoint) -> f64 {
    let h = point.h();
    let log_rhs = (h - 2.0) * point.log_q() + point.log_p();
    // |1/xi - rhs| / (1/xi) = |1 - xi * rhs|
    (-(point.log_xi() + log_rhs).exp_m1()).abs()
}

/// Zero-temperature occupation: `1 / (2 - h)` below the Fermi energy, 0 above.
///
/// At `epsilon == fermi_energy` the lower value is returned.
pub fn step_distribution(h: f64, epsilon: f64, fermi_energy: f64) -> Result<f64> {
    check_class(h)?;
    if h == 2.0 {
        return Err(Error::Divergent(
            "h = 2 has n = infinity below the Fermi energy".into(),
        ));
    }
    if epsilon.is_nan() || fermi_energy.is_nan() {
        return Err(domain("energies must not be NaN"));
    }
    Ok(if epsilon <= fermi_energy {
        1.0 / (2.0 - h)
    } else {
        0.0
    })
}
