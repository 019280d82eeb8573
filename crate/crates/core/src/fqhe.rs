//! Filling-factor classification: allowed transitions, Farey transition
//! graphs, dual pairs and lowest-Landau-level occupations.
//!
//! Integer arithmetic only. Two filling factors `p1/q1` and `p2/q2` are
//! connected by an allowed transition iff `|p2 q1 - p1 q2| = 1`.

use std::collections::HashMap;
use std::fmt::Write as _;

use num_integer::Integer;
use num_rational::Rational64;
use num_traits::{Signed, Zero};

use crate::classes::{class_from_nu, class_members, dual_class, FillingFactor, FractonClass};
use crate::error::{domain, Error, Result};

pub fn transition_allowed(nu1: FillingFactor, nu2: FillingFactor) -> bool {
    let det = nu2.numer() as i128 * nu1.denom() as i128 - nu1.numer() as i128 * nu2.denom() as i128;
    det.abs() == 1
}

/// Undirected graph of allowed transitions between filling factors.
#[derive(Debug, Clone, PartialEq)]
pub struct TransitionGraph {
    vertices: Vec<FillingFactor>,
    edges: Vec<(usize, usize)>,
    class_labels: Vec<FractonClass>,
}

impl TransitionGraph {
    /// Vertices in ascending order.
    pub fn vertices(&self) -> &[FillingFactor] {
        &self.vertices
    }

    /// Index pairs `(i, j)` with `i < j`, sorted.
    pub fn edges(&self) -> &[(usize, usize)] {
        &self.edges
    }

    pub fn edge_pairs(&self) -> impl Iterator<Item = (FillingFactor, FillingFactor)> + '_ {
        self.edges
            .iter()
            .map(|&(i, j)| (self.vertices[i], self.vertices[j]))
    }

    pub fn class_of(&self, index: usize) -> FractonClass {
        self.class_labels[index]
    }

    pub fn class_labels(&self) -> &[FractonClass] {
        &self.class_labels
    }

    pub fn is_empty(&self) -> bool {
        self.vertices.is_empty()
    }

    pub fn contains(&self, nu: FillingFactor) -> bool {
        self.vertices.binary_search(&nu).is_ok()
    }

    /// Graphviz rendering; vertex labels read `p/q [h=a/b]`.
    pub fn to_dot(&self) -> String {
        let mut out = String::from("graph transitions {\n");
        for (nu, class) in self.vertices.iter().zip(&self.class_labels) {
            let _ = writeln!(out, "  \"{nu}\" [label=\"{nu} [h={}]\"];", ratio_label(class.h()));
        }
        for (a, b) in self.edge_pairs() {
            let _ = writeln!(out, "  \"{a}\" -- \"{b}\";");
        }
        out.push_str("}\n");
        out
    }
}

/// Rationals always printed as `a/b`, integers included.
fn ratio_label(r: Rational64) -> String {
    format!("{}/{}", r.numer(), r.denom())
}

/// Reduced rationals strictly inside `(band, band + 1)` with denominator at most `max_denominator`.
pub fn band_vertices(max_denominator: u32, band: u32) -> Vec<FillingFactor> {
    let k = band as i64;
    let mut vertices = Vec::new();
    for q in 1..=max_denominator as i64 {
        for p in (k * q + 1)..((k + 1) * q) {
            if p.gcd(&q) == 1 {
                vertices.push(FillingFactor::new(p, q).expect("positive"));
            }
        }
    }
    vertices.sort();
    vertices
}

/// Transition graph of band `(band, band + 1)` up to denominator `max_denominator`.
///
/// Neighbours are found by solving `p2 q1 - p1 q2 = +-1` for `p2` at each
/// candidate denominator, rather than by testing all vertex pairs.
pub fn farey_graph(max_denominator: u32, band: u32) -> TransitionGraph {
    let vertices = band_vertices(max_denominator, band);
    let index: HashMap<FillingFactor, usize> =
        vertices.iter().enumerate().map(|(i, &v)| (v, i)).collect();
    let mut edges = Vec::new();
    for (i, nu) in vertices.iter().enumerate() {
        let (p1, q1) = (nu.numer(), nu.denom());
        for q2 in 1..=max_denominator as i64 {
            for sign in [-1i64, 1] {
                let target = p1 * q2 + sign;
                if target <= 0 || target % q1 != 0 {
                    continue;
                }
                let Ok(other) = FillingFactor::new(target / q1, q2) else {
                    continue;
                };
                // a determinant of +-1 forces p2/q2 to be reduced already
                if other.denom() != q2 {
                    continue;
                }
                if let Some(&j) = index.get(&other) {
                    if i < j {
                        edges.push((i, j));
                    }
                }
            }
        }
    }
    edges.sort_unstable();
    edges.dedup();
    let class_labels = vertices.iter().map(|&v| class_from_nu(v)).collect();
    TransitionGraph {
        vertices,
        edges,
        class_labels,
    }
}

/// Order-`order` Farey sequence on `[0, 1]`, by the next-term recurrence.
pub fn farey_sequence(order: u32) -> Vec<(i64, i64)> {
    let n = order as i64;
    let mut out = vec![(0, 1)];
    if n < 1 {
        return out;
    }
    let (mut a, mut b, mut c, mut d) = (0i64, 1i64, 1i64, n);
    out.push((c, d));
    while c <= n && !(c == 1 && d == 1) {
        let k = (n + b) / d;
        let next = (k * c - a, k * d - b);
        (a, b, c, d) = (c, d, next.0, next.1);
        out.push((c, d));
    }
    out
}

/// Low-temperature occupation as a function of the filling factor:
/// `1/nu` on (0,1), `1/(2 - nu)` on (1,2), `1/(nu - 2)` on (2,3), and so on,
/// i.e. the reciprocal distance from `nu` to the nearest even integer.
pub fn lll_occupation(nu: FillingFactor) -> Result<Rational64> {
    let v = nu.value();
    let nearest_even = (v / 2).round() * 2;
    let distance = (v - nearest_even).abs();
    if distance.is_zero() {
        return Err(Error::Divergent(format!(
            "nu = {nu} is an even integer; the occupation diverges there"
        )));
    }
    Ok(distance.recip())
}

/// The member of the dual class lying in the same band as `nu`.
///
/// In every band this is the reflection `2k + 1 - nu` about the band centre;
/// in band 0 it is `1 - nu`.
pub fn band_dual(nu: FillingFactor) -> Result<FillingFactor> {
    if nu.is_integer() {
        return Err(domain(format!("nu = {nu} is a band boundary and has no band dual")));
    }
    let band = nu.band() as usize;
    let dual = dual_class(class_from_nu(nu));
    Ok(class_members(dual, band + 1)[band])
}

/// One `(h, nu, n)` row of a class occupation table.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct OccupationRow {
    pub class: FractonClass,
    pub nu: FillingFactor,
    pub n: Rational64,
}

/// `(h, nu, n)` for each class and each of the first `bands` bands.
pub fn class_occupation_table(classes: &[FractonClass], bands: usize) -> Result<Vec<OccupationRow>> {
    let mut rows = Vec::with_capacity(classes.len() * bands);
    for &class in classes {
        if class.is_boundary() {
            return Err(domain(format!(
                "class h = {class} is a boundary class; the table takes 1 < h < 2"
            )));
        }
        for nu in class_members(class, bands) {
            rows.push(OccupationRow {
                class,
                nu,
                n: lll_occupation(nu)?,
            });
        }
    }
    Ok(rows)
}

/// CSV with header `h,nu,n`; rationals as `a/b`.
pub fn table_csv(rows: &[OccupationRow]) -> String {
    let mut out = String::from("h,nu,n\n");
    for row in rows {
        let _ = writeln!(out, "{},{},{}", ratio_label(row.class.h()), row.nu, ratio_label(row.n));
    }
    out
}

/// Each vertex paired with its band dual: CSV header `nu,dual_nu,h,dual_h`.
pub fn dual_pairs_csv(graph: &TransitionGraph) -> Result<String> {
    let mut out = String::from("nu,dual_nu,h,dual_h\n");
    for &nu in graph.vertices() {
        let dual = band_dual(nu)?;
        let _ = writeln!(
            out,
            "{nu},{dual},{},{}",
            ratio_label(class_from_nu(nu).h()),
            ratio_label(class_from_nu(dual).h())
        );
    }
    Ok(out)
}
