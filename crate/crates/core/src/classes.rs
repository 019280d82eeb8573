//! Exact algebra of universal classes.
//!
//! A class is labelled by its Hausdorff dimension `h` in `[1, 2]`: `h = 1`
//! are fermions, `h = 2` bosons, and the open interval holds fractons. The
//! filling factor (statistical parameter) `nu` maps onto `h` through a banded
//! mirror spectrum, with period 2 in `nu`:
//!
//! ```text
//! h - 1 = 1 - nu   on (0, 1)      h - 1 = nu - 1   on (1, 2)
//! h - 1 = 3 - nu   on (2, 3)      h - 1 = nu - 3   on (3, 4)   ...
//! ```
//!
//! Everything here is exact rational arithmetic. The only way out to floating
//! point is [`FractonClass::to_f64`].

use std::fmt;
use std::str::FromStr;

use num_integer::Integer;
use num_rational::Rational64;
use num_traits::{One, ToPrimitive, Zero};

use crate::error::{domain, Error, Result};

/// A universal class, labelled by its Hausdorff dimension `h` in `[1, 2]`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct FractonClass(Rational64);

impl FractonClass {
    pub fn new(h: Rational64) -> Result<Self> {
        if h < Rational64::one() || h > Rational64::from_integer(2) {
            return Err(domain(format!("Hausdorff dimension h = {h} outside [1, 2]")));
        }
        Ok(Self(h))
    }

    pub fn from_ratio(numer: i64, denom: i64) -> Result<Self> {
        if denom == 0 {
            return Err(domain("zero denominator"));
        }
        Self::new(Rational64::new(numer, denom))
    }

    pub fn fermion() -> Self {
        Self(Rational64::one())
    }

    pub fn boson() -> Self {
        Self(Rational64::from_integer(2))
    }

    /// The class of spin `s`, `h = 2 - 2s`, for `0 <= s <= 1/2`.
    pub fn from_spin(s: Rational64) -> Result<Self> {
        if s < Rational64::zero() || s > Rational64::new(1, 2) {
            return Err(domain(format!("spin s = {s} outside [0, 1/2]")));
        }
        Self::new(Rational64::from_integer(2) - s * 2)
    }

    pub fn h(&self) -> Rational64 {
        self.0
    }

    /// Spin `s = (2 - h) / 2`, in `[0, 1/2]`.
    pub fn spin(&self) -> Rational64 {
        (Rational64::from_integer(2) - self.0) / 2
    }

    /// Band-0 statistical parameter `nu0 = 2 - h`, in `[0, 1]`.
    pub fn base_statistics(&self) -> Rational64 {
        Rational64::from_integer(2) - self.0
    }

    /// True for the fermion and boson limits.
    pub fn is_boundary(&self) -> bool {
        self.0.is_integer()
    }

    /// Low-temperature occupation per state, `1 / (2 - h)`; `None` for bosons.
    pub fn cap(&self) -> Option<Rational64> {
        let gap = self.base_statistics();
        if gap.is_zero() {
            None
        } else {
            Some(gap.recip())
        }
    }

    /// The per-mode cap when it is a positive integer (`h = 2 - 1/m`).
    pub fn integer_cap(&self) -> Option<u32> {
        self.cap()
            .filter(|c| c.is_integer())
            .and_then(|c| c.to_integer().to_u32())
    }

    /// Narrowing conversion used by the floating-point modules.
    pub fn to_f64(&self) -> f64 {
        ratio_to_f64(self.0)
    }
}

impl fmt::Display for FractonClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

impl FromStr for FractonClass {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Self::new(parse_rational(s)?)
    }
}

/// A reduced, strictly positive filling factor `nu = p/q`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct FillingFactor(Rational64);

impl FillingFactor {
    pub fn new(numer: i64, denom: i64) -> Result<Self> {
        if denom == 0 {
            return Err(domain("zero denominator"));
        }
        Self::from_ratio(Rational64::new(numer, denom))
    }

    pub fn from_ratio(nu: Rational64) -> Result<Self> {
        if nu <= Rational64::zero() {
            return Err(domain(format!("filling factor must be positive, got {nu}")));
        }
        Ok(Self(nu))
    }

    pub fn value(&self) -> Rational64 {
        self.0
    }

    pub fn numer(&self) -> i64 {
        *self.0.numer()
    }

    pub fn denom(&self) -> i64 {
        *self.0.denom()
    }

    /// Index `k` of the band `(k, k + 1)` holding `nu` (for integers, `nu` itself).
    pub fn band(&self) -> i64 {
        self.0.floor().to_integer()
    }

    pub fn is_integer(&self) -> bool {
        self.0.is_integer()
    }

    pub fn to_f64(&self) -> f64 {
        ratio_to_f64(self.0)
    }
}

impl fmt::Display for FillingFactor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}/{}", self.numer(), self.denom())
    }
}

impl FromStr for FillingFactor {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Self::from_ratio(parse_rational(s)?)
    }
}

/// Parses `"a/b"`, `"a"`, or a plain decimal such as `"1.25"` into an exact rational.
pub fn parse_rational(s: &str) -> Result<Rational64> {
    let s = s.trim();
    let bad = || Error::Parse(format!("not a rational number: {s:?}"));
    if let Some((n, d)) = s.split_once('/') {
        let n: i64 = n.trim().parse().map_err(|_| bad())?;
        let d: i64 = d.trim().parse().map_err(|_| bad())?;
        if d == 0 {
            return Err(bad());
        }
        return Ok(Rational64::new(n, d));
    }
    let (negative, body) = match s.strip_prefix('-') {
        Some(rest) => (true, rest),
        None => (false, s.strip_prefix('+').unwrap_or(s)),
    };
    let (int_part, frac_part) = body.split_once('.').unwrap_or((body, ""));
    if int_part.is_empty() && frac_part.is_empty() {
        return Err(bad());
    }
    if !int_part.chars().chain(frac_part.chars()).all(|c| c.is_ascii_digit()) {
        return Err(bad());
    }
    // 18 decimal digits keep the numerator inside i64.
    if int_part.len() + frac_part.len() > 18 {
        return Err(bad());
    }
    let digits: i64 = format!("{int_part}{frac_part}").parse().unwrap_or(0);
    let scale = 10i64.pow(frac_part.len() as u32);
    let value = Rational64::new(digits, scale);
    Ok(if negative { -value } else { value })
}

pub(crate) fn ratio_to_f64(r: Rational64) -> f64 {
    *r.numer() as f64 / *r.denom() as f64
}

/// Class of a filling factor under the banded mirror spectrum.
///
/// Integer filling factors sit on band boundaries; both one-sided limits
/// agree there, giving `h = 1` for odd and `h = 2` for even integers.
pub fn class_from_nu(nu: FillingFactor) -> FractonClass {
    let v = nu.value();
    let k = nu.band();
    let h = if v.is_integer() {
        if k.is_odd() {
            Rational64::one()
        } else {
            Rational64::from_integer(2)
        }
    } else if k.is_even() {
        // h - 1 = (k + 1) - nu
        Rational64::from_integer(k + 2) - v
    } else {
        // h - 1 = nu - k
        v - Rational64::from_integer(k - 1)
    };
    FractonClass(h)
}

/// The member of `class` in each band `(k, k + 1)`, for `k = 0 .. band_count`.
///
/// For the boundary classes `h = 1` and `h = 2` the members are integers
/// (band endpoints) rather than interior points; see
/// [`FractonClass::is_boundary`].
pub fn class_members(class: FractonClass, band_count: usize) -> Vec<FillingFactor> {
    let h = class.h();
    (0..band_count as i64)
        .map(|k| {
            let nu = if k.is_even() {
                Rational64::from_integer(k + 2) - h
            } else {
                h + Rational64::from_integer(k - 1)
            };
            FillingFactor(nu)
        })
        .collect()
}

/// Duality `h -> 3 - h`. Fermions and bosons are dual; `h = 3/2` is self-dual.
pub fn dual_class(class: FractonClass) -> FractonClass {
    FractonClass(Rational64::from_integer(3) - class.h())
}

/// The band-0 filling factor of the dual class, `1 - nu`, for `nu` in `(0, 1)`.
pub fn dual_filling(nu: FillingFactor) -> Result<FillingFactor> {
    if nu.value() >= Rational64::one() {
        return Err(domain(format!(
            "dual_filling takes nu in (0, 1), got {nu}; for higher bands take \
             class_members of the dual class"
        )));
    }
    let dual = dual_class(class_from_nu(nu));
    Ok(class_members(dual, 1)[0])
}

/// Supersymmetric partner spin `s + 1/2`, for `s` in `(0, 1/2)`.
///
/// The classes of `nu = 2s` and `nu = 2s + 1` are dual to each other.
pub fn susy_partner_spin(s: Rational64) -> Result<Rational64> {
    let half = Rational64::new(1, 2);
    if s <= Rational64::zero() || s >= half {
        return Err(domain(format!("spin s = {s} outside (0, 1/2)")));
    }
    Ok(s + half)
}
