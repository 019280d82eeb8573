//! Occupation-number entanglement for universal classes.
//!
//! The measure is the binary Shannon entropy of a configuration probability,
//! enhanced by the class factor `1 / (1 - (h - 1) p)`:
//!
//! ```text
//! E[h, p] = [-p log2 p - (1 - p) log2(1 - p)] / [1 - (h - 1) p]
//! ```
//!
//! Output is in bits. A state's total is the sum of the kernel over its
//! configuration probabilities `|c_i|^2`.

use std::collections::HashSet;
use std::fmt;
use std::str::FromStr;

use num_complex::Complex64;

use crate::classes::FractonClass;
use crate::error::{domain, Error, Result};

/// Amplitude vectors must satisfy `|sum |c_i|^2 - 1| <= NORMALIZATION_TOLERANCE`.
pub const NORMALIZATION_TOLERANCE: f64 = 1e-9;

/// `H2(p) = -p log2 p - (1 - p) log2(1 - p)`, with `0 log 0 = 0`.
pub fn binary_entropy_bits(p: f64) -> f64 {
    let term = |x: f64| if x <= 0.0 { 0.0 } else { -x * x.log2() };
    term(p) + term(1.0 - p)
}

fn check_probability(p: f64) -> Result<()> {
    if !(0.0..=1.0).contains(&p) {
        return Err(domain(format!("probability p = {p} outside [0, 1]")));
    }
    Ok(())
}

/// Kernel parameterized by the excess `h - 1`.
fn kernel(excess: f64, p: f64) -> Result<f64> {
    check_probability(p)?;
    let denominator = 1.0 - excess * p;
    if denominator <= 0.0 {
        return Err(domain(format!(
            "E[h, p] has a pole at (h - 1) p = 1 (h = {}, p = {p})",
            1.0 + excess
        )));
    }
    Ok(binary_entropy_bits(p) / denominator)
}

/// Entanglement measure `E[h, p]` in bits.
pub fn measure(h: f64, p: f64) -> Result<f64> {
    if !h.is_finite() || !(1.0..=2.0).contains(&h) {
        return Err(domain(format!("Hausdorff dimension h = {h} outside [1, 2]")));
    }
    kernel(h - 1.0, p)
}

/// `|E[h, p] - E[h, 1 - p]|`. Zero for fermions only.
pub fn symmetry_defect(h: f64, p: f64) -> Result<f64> {
    Ok((measure(h, p)? - measure(h, 1.0 - p)?).abs())
}

/// The measure written through the band-0 filling factor, `E[2 - nu, p]`.
///
/// `nu = 1` is the fermion limit. Higher bands must be mapped onto their
/// class first.
pub fn measure_by_filling(nu: f64, p: f64) -> Result<f64> {
    if !(nu > 0.0 && nu <= 1.0) {
        return Err(domain(format!(
            "filling factor nu = {nu} outside (0, 1]; map it through the fractal \
             spectrum (class_from_nu) and call measure"
        )));
    }
    kernel(1.0 - nu, p)
}

/// Per-mode occupation counts, written as a digit string such as `121`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct OccupationState(Vec<u32>);

impl OccupationState {
    pub fn new(counts: Vec<u32>) -> Self {
        Self(counts)
    }

    pub fn counts(&self) -> &[u32] {
        &self.0
    }

    pub fn modes(&self) -> usize {
        self.0.len()
    }

    pub fn particles(&self) -> u32 {
        self.0.iter().sum()
    }
}

impl fmt::Display for OccupationState {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.iter().all(|&c| c < 10) {
            for c in &self.0 {
                write!(f, "{c}")?;
            }
            Ok(())
        } else {
            let parts: Vec<String> = self.0.iter().map(|c| c.to_string()).collect();
            write!(f, "{}", parts.join(","))
        }
    }
}

impl FromStr for OccupationState {
    type Err = Error;

    /// Accepts `121`, `|121>`, or comma-separated counts for caps above 9.
    fn from_str(s: &str) -> Result<Self> {
        let body = s.trim().trim_start_matches('|').trim_end_matches(['>', '⟩']);
        let bad = || Error::Parse(format!("invalid occupation string {s:?}"));
        if body.is_empty() {
            return Err(bad());
        }
        let counts = if body.contains(',') {
            body.split(',')
                .map(|c| c.trim().parse::<u32>().map_err(|_| bad()))
                .collect::<Result<Vec<_>>>()?
        } else {
            body.chars()
                .map(|c| c.to_digit(10).ok_or_else(bad))
                .collect::<Result<Vec<_>>>()?
        };
        Ok(Self(counts))
    }
}

/// Every occupation vector of length `modes` with entries in `[0, cap]`
/// summing to `particles`, in ascending lexicographic order.
///
/// Only classes with a positive integer cap `1/(2 - h)` are supported.
pub fn enumerate_basis(
    class: FractonClass,
    modes: usize,
    particles: u32,
) -> Result<Vec<OccupationState>> {
    let cap = class
        .integer_cap()
        .ok_or_else(|| Error::UnsupportedClass(class.to_string()))?;
    Ok(bounded_compositions(modes, particles, cap)
        .into_iter()
        .map(OccupationState)
        .collect())
}

fn bounded_compositions(modes: usize, particles: u32, cap: u32) -> Vec<Vec<u32>> {
    fn fill(slot: usize, remaining: u32, cap: u32, current: &mut Vec<u32>, out: &mut Vec<Vec<u32>>) {
        let modes = current.len();
        if slot == modes {
            if remaining == 0 {
                out.push(current.clone());
            }
            return;
        }
        let rest = (modes - slot - 1) as u64 * cap as u64;
        // smallest count that still lets the remaining slots absorb the rest
        let low = (remaining as u64).saturating_sub(rest) as u32;
        let high = remaining.min(cap);
        for c in low..=high {
            current[slot] = c;
            fill(slot + 1, remaining - c, cap, current, out);
        }
    }

    let mut out = Vec::new();
    if modes as u64 * cap as u64 >= particles as u64 {
        fill(0, particles, cap, &mut vec![0; modes], &mut out);
    }
    out
}

/// Normalized complex amplitudes, one per basis state.
#[derive(Debug, Clone, PartialEq)]
pub struct AmplitudeVector(Vec<Complex64>);

impl AmplitudeVector {
    pub fn new(amplitudes: Vec<Complex64>) -> Result<Self> {
        let total: f64 = amplitudes.iter().map(|c| c.norm_sqr()).sum();
        if !total.is_finite() || (total - 1.0).abs() > NORMALIZATION_TOLERANCE {
            return Err(Error::NotNormalized(total));
        }
        Ok(Self(amplitudes))
    }

    /// Equal real amplitudes `1/sqrt(len)`.
    pub fn uniform(len: usize) -> Result<Self> {
        let c = Complex64::new(1.0 / (len as f64).sqrt(), 0.0);
        Self::new(vec![c; len])
    }

    pub fn amplitudes(&self) -> &[Complex64] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// `|c_i|^2`, clamped into `[0, 1]` against rounding.
    pub fn probabilities(&self) -> impl Iterator<Item = f64> + '_ {
        self.0.iter().map(|c| c.norm_sqr().min(1.0))
    }
}

/// Per-configuration terms `E[h, |c_i|^2]`.
pub fn state_entanglement_terms(h: f64, state: &AmplitudeVector) -> Result<Vec<f64>> {
    state.probabilities().map(|p| measure(h, p)).collect()
}

/// Total entanglement `sum_i E[h, |c_i|^2]` in bits.
pub fn state_entanglement(h: f64, state: &AmplitudeVector) -> Result<f64> {
    Ok(state_entanglement_terms(h, state)?.iter().sum())
}

/// One parsed line of an amplitude file.
#[derive(Debug, Clone, PartialEq)]
pub struct AmplitudeEntry {
    pub line: usize,
    pub state: OccupationState,
    pub amplitude: Complex64,
}

/// Parses `<occupation> <re> <im>` lines. Blank lines and `#` comments are skipped.
pub fn parse_amplitude_lines(text: &str) -> Result<Vec<AmplitudeEntry>> {
    let mut entries = Vec::new();
    for (index, raw) in text.lines().enumerate() {
        let line = index + 1;
        let content = raw.split('#').next().unwrap_or("").trim();
        if content.is_empty() {
            continue;
        }
        let fields: Vec<&str> = content.split_whitespace().collect();
        if fields.len() != 3 {
            return Err(Error::Parse(format!(
                "line {line}: expected `<occupation> <re> <im>`, got {raw:?}"
            )));
        }
        let state: OccupationState = fields[0]
            .parse()
            .map_err(|e| Error::Parse(format!("line {line}: {e}")))?;
        let number = |s: &str| {
            s.parse::<f64>()
                .ok()
                .filter(|v| v.is_finite())
                .ok_or_else(|| Error::Parse(format!("line {line}: invalid number {s:?}")))
        };
        let amplitude = Complex64::new(number(fields[1])?, number(fields[2])?);
        entries.push(AmplitudeEntry { line, state, amplitude });
    }
    Ok(entries)
}

/// Lays parsed amplitudes onto `basis`, rejecting kets outside it and
/// duplicates. Basis states absent from the file get amplitude zero.
pub fn amplitudes_on_basis(
    entries: &[AmplitudeEntry],
    basis: &[OccupationState],
) -> Result<AmplitudeVector> {
    let mut amplitudes = vec![Complex64::new(0.0, 0.0); basis.len()];
    let mut seen = HashSet::new();
    for entry in entries {
        let index = basis.iter().position(|b| *b == entry.state).ok_or_else(|| {
            let modes = basis.first().map_or(0, OccupationState::modes);
            let particles = basis.first().map_or(0, OccupationState::particles);
            Error::Parse(format!(
                "line {}: ket |{}> is not in the basis ({} modes, {} particles; ket has {} modes, {} particles)",
                entry.line,
                entry.state,
                modes,
                particles,
                entry.state.modes(),
                entry.state.particles()
            ))
        })?;
        if !seen.insert(index) {
            return Err(Error::Parse(format!(
                "line {}: duplicate ket |{}>",
                entry.line, entry.state
            )));
        }
        amplitudes[index] = entry.amplitude;
    }
    AmplitudeVector::new(amplitudes)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn class(n: i64, d: i64) -> FractonClass {
        FractonClass::from_ratio(n, d).unwrap()
    }

    fn kets(states: &[OccupationState]) -> Vec<String> {
        states.iter().map(|s| s.to_string()).collect()
    }

    #[test]
    fn measure_examples() {
        assert_eq!(measure(1.0, 0.5).unwrap(), 1.0);
        assert!((measure(1.5, 0.5).unwrap() - 4.0 / 3.0).abs() < 1e-15);
        assert_eq!(measure(1.0, 0.0).unwrap(), 0.0);
        assert_eq!(measure(1.7, 1.0).unwrap(), 0.0);
        assert!(measure(2.0, 1.0).is_err());
        assert!(measure(1.5, -0.1).is_err());
        assert!(measure(1.5, 1.1).is_err());
        assert!(measure(1.5, f64::NAN).is_err());
    }

    #[test]
    fn filling_form() {
        assert!((measure_by_filling(0.5, 0.5).unwrap() - 4.0 / 3.0).abs() < 1e-15);
        for p in [0.0, 0.2, 0.5, 0.9] {
            assert_eq!(measure_by_filling(1.0, p).unwrap(), binary_entropy_bits(p));
        }
        assert!((measure_by_filling(2.0 / 3.0, 0.5).unwrap() - 1.2).abs() < 1e-12);
        assert!((measure_by_filling(1.0 / 3.0, 0.5).unwrap() - 1.5).abs() < 1e-12);
        assert!(measure_by_filling(0.0, 0.5).is_err());
        assert!(measure_by_filling(4.0 / 3.0, 0.5).is_err());
    }

    #[test]
    fn symmetry_only_for_fermions() {
        assert_eq!(symmetry_defect(1.0, 0.25).unwrap(), 0.0);
        assert!(symmetry_defect(1.5, 0.25).unwrap() > 0.1);
    }

    #[test]
    fn semion_basis_matches_listed_kets() {
        let basis = enumerate_basis(class(3, 2), 3, 4).unwrap();
        assert_eq!(kets(&basis), ["022", "112", "121", "202", "211", "220"]);
    }

    #[test]
    fn fermion_single_particle_basis() {
        let basis = enumerate_basis(FractonClass::fermion(), 3, 1).unwrap();
        assert_eq!(kets(&basis), ["001", "010", "100"]);
        let basis = enumerate_basis(FractonClass::fermion(), 3, 2).unwrap();
        assert_eq!(kets(&basis), ["011", "101", "110"]);
    }

    #[test]
    fn basis_edge_cases() {
        assert!(enumerate_basis(class(3, 2), 2, 5).unwrap().is_empty());
        assert!(matches!(enumerate_basis(class(4, 3), 3, 2), Err(Error::UnsupportedClass(_))));
        assert!(enumerate_basis(FractonClass::boson(), 3, 2).is_err());
        assert_eq!(kets(&enumerate_basis(class(3, 2), 0, 0).unwrap()), [""]);
        assert!(enumerate_basis(class(3, 2), 0, 1).unwrap().is_empty());
    }

    #[test]
    fn fermion_state_value() {
        let state = AmplitudeVector::uniform(3).unwrap();
        let total = state_entanglement(1.0, &state).unwrap();
        let expected = 3.0 * 3f64.log2() - 2.0;
        assert!((total - expected).abs() < 1e-12);
        assert!((total - 2.7548875).abs() < 1e-7);
        let product = AmplitudeVector::new(vec![
            Complex64::new(1.0, 0.0),
            Complex64::new(0.0, 0.0),
            Complex64::new(0.0, 0.0),
        ])
        .unwrap();
        assert_eq!(state_entanglement(1.0, &product).unwrap(), 0.0);
    }

    #[test]
    fn semion_state_value() {
        let state = AmplitudeVector::uniform(6).unwrap();
        let total = state_entanglement(1.5, &state).unwrap();
        let p = 1.0 / 6.0;
        let term = 2.0 / (2.0 - p) * binary_entropy_bits(p);
        assert!((total - 6.0 * term).abs() < 1e-12);
        assert!((total - 72.0 / 11.0 * binary_entropy_bits(p)).abs() < 1e-12);
        assert!((total - 4.2546922).abs() < 1e-6);
    }

    #[test]
    fn rejects_unnormalized() {
        let c = Complex64::new(0.5, 0.0);
        assert!(matches!(AmplitudeVector::new(vec![c, c]), Err(Error::NotNormalized(_))));
    }

    #[test]
    fn occupation_strings() {
        assert_eq!("|121>".parse::<OccupationState>().unwrap().counts(), [1, 2, 1]);
        assert_eq!("10,0,2".parse::<OccupationState>().unwrap().to_string(), "10,0,2");
        assert!("1a1".parse::<OccupationState>().is_err());
        assert!("".parse::<OccupationState>().is_err());
    }

    #[test]
    fn amplitude_file_round() {
        let basis = enumerate_basis(class(3, 2), 3, 4).unwrap();
        let text = "# six kets\n121 0.40824829046386302 0.0\n022 0.40824829046386302 0.0\n\
                    211 0.40824829046386302 0.0\n202 0.40824829046386302 0.0\n\
                    112 0.0 0.40824829046386302\n220 -0.40824829046386302 0.0\n";
        let entries = parse_amplitude_lines(text).unwrap();
        let state = amplitudes_on_basis(&entries, &basis).unwrap();
        let expected = 72.0 / 11.0 * binary_entropy_bits(1.0 / 6.0);
        assert!((state_entanglement(1.5, &state).unwrap() - expected).abs() < 1e-9);

        let bad = parse_amplitude_lines("121 0.5 0\n221 0.5 0\n").unwrap();
        let err = amplitudes_on_basis(&bad, &basis).unwrap_err().to_string();
        assert!(err.contains("line 2") && err.contains("221"), "{err}");

        let dup = parse_amplitude_lines("121 0.5 0\n121 0.5 0\n").unwrap();
        assert!(amplitudes_on_basis(&dup, &basis).unwrap_err().to_string().contains("duplicate"));
        assert!(parse_amplitude_lines("121 0.5\n").is_err());
        assert!(parse_amplitude_lines("121 x 0\n").is_err());
    }
}
