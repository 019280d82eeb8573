use std::fmt::Write as _;

use anyhow::Result;
use clap::{Args, ValueEnum};
use fracton::classes::{class_from_nu, dual_class, susy_partner_spin};
use fracton::entanglement::{enumerate_basis, measure, state_entanglement, symmetry_defect, AmplitudeVector};
use fracton::entropy::{
    boltzmann_consistency, entropy_from_n, entropy_from_pq, entropy_from_y, log_weight,
    normalization_defect, WeightParams,
};
use fracton::fqhe::{band_dual, farey_graph, lll_occupation};
use fracton::solver::{partition_identity_defect, solve_y_with, SolverOptions};
use fracton::{FillingFactor, FractonClass};
use num_rational::Rational64;

use crate::commands::Report;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, ValueEnum)]
pub enum Module {
    Classes,
    Solver,
    Entropy,
    Entanglement,
    Fqhe,
}

#[derive(Debug, Args)]
pub struct VerifyArgs {
    /// Run only the checks of these modules.
    #[arg(long, value_enum, value_delimiter = ',')]
    only: Vec<Module>,
    /// Stopping tolerance for the root-finder (disables the final polish step).
    #[arg(long, hide = true)]
    solver_tol: Option<f64>,
}

enum Status {
    Pass,
    Fail,
    Info,
}

struct Line {
    status: Status,
    name: String,
    detail: String,
}

#[derive(Default)]
struct Suite {
    lines: Vec<Line>,
}

impl Suite {
    fn check(&mut self, name: &str, pass: bool, detail: impl Into<String>) {
        let status = if pass { Status::Pass } else { Status::Fail };
        self.lines.push(Line { status, name: name.into(), detail: detail.into() });
    }

    fn info(&mut self, name: &str, detail: impl Into<String>) {
        self.lines.push(Line { status: Status::Info, name: name.into(), detail: detail.into() });
    }
}

fn log_grid(min: f64, max: f64, count: usize) -> impl Iterator<Item = f64> {
    let (a, b) = (min.ln(), max.ln());
    (0..count).map(move |i| (a + (b - a) * i as f64 / (count - 1) as f64).exp())
}

/// Reduced rationals strictly between `lo` and `hi` with denominator `<= max_den`.
fn rationals_between(lo: Rational64, hi: Rational64, max_den: i64) -> Vec<Rational64> {
    let mut out: Vec<Rational64> = (1..=max_den)
        .flat_map(|q| {
            let start = (lo * q).floor().to_integer();
            let end = (hi * q).ceil().to_integer();
            (start..=end).map(move |p| Rational64::new(p, q))
        })
        .filter(|r| *r > lo && *r < hi)
        .collect();
    out.sort();
    out.dedup();
    out
}

fn r(n: i64, d: i64) -> Rational64 {
    Rational64::new(n, d)
}

fn classes(suite: &mut Suite) {
    let (one, two) = (r(1, 1), r(2, 1));
    let mut hs = rationals_between(one, two, 20);
    hs.extend([one, two]);
    let involution = hs.iter().all(|&h| {
        let c = FractonClass::new(h).unwrap();
        dual_class(dual_class(c)) == c && c.h() + dual_class(c).h() == r(3, 1)
    });
    suite.check("classes/dual-involution", involution, format!("{} classes", hs.len()));

    let nus = rationals_between(r(0, 1), two, 20);
    let mirror = nus.iter().all(|&nu| {
        let a = class_from_nu(FillingFactor::from_ratio(nu).unwrap());
        let b = class_from_nu(FillingFactor::from_ratio(two - nu).unwrap());
        let shifted = class_from_nu(FillingFactor::from_ratio(nu + two).unwrap());
        a == b && a == shifted
    });
    suite.check("classes/mirror-and-period", mirror, format!("{} filling factors", nus.len()));

    let spins = rationals_between(r(0, 1), r(1, 2), 20);
    let spin_statistics = spins.iter().all(|&s| {
        FractonClass::from_spin(s).unwrap() == class_from_nu(FillingFactor::from_ratio(s * 2).unwrap())
    });
    suite.check("classes/spin-statistics", spin_statistics, format!("{} spins", spins.len()));

    let susy = spins.iter().all(|&s| {
        let partner = susy_partner_spin(s).unwrap();
        let c = class_from_nu(FillingFactor::from_ratio(s * 2).unwrap());
        let d = class_from_nu(FillingFactor::from_ratio(partner * 2).unwrap());
        partner == s + r(1, 2) && d == dual_class(c)
    });
    suite.check("classes/susy-duality", susy, format!("{} pairs", spins.len()));
}

fn solver(suite: &mut Suite, options: &SolverOptions) {
    let mut worst_closed: f64 = 0.0;
    for h in [1.0, 1.5, 2.0] {
        let lo = if h == 2.0 { 1.0 + 1e-9 } else { 1e-3 };
        for xi in log_grid(lo, 1e3, 100) {
            let closed = solve_y_with(h, xi, &SolverOptions::default()).unwrap();
            let generic = solve_y_with(h, xi, &SolverOptions { force_generic: true, ..*options });
            let rel = match generic {
                Ok(g) => ((g.y_minus_two() - closed.y_minus_two()) / closed.y_minus_two()).abs(),
                Err(_) => f64::INFINITY,
            };
            worst_closed = worst_closed.max(rel);
        }
    }
    suite.check(
        "solver/closed-forms",
        worst_closed <= 1e-10,
        format!("max relative error {worst_closed:.2e} (tolerance 1e-10)"),
    );

    let mut worst_defect: f64 = 0.0;
    for k in 1..=9 {
        let h = 1.0 + k as f64 / 10.0;
        for xi in log_grid(1e-3, 1e3, 100) {
            let defect = solve_y_with(h, xi, options).map_or(f64::INFINITY, |pt| partition_identity_defect(&pt));
            worst_defect = worst_defect.max(defect);
        }
    }
    suite.check(
        "solver/partition-identity",
        worst_defect <= 1e-10,
        format!("max defect {worst_defect:.2e} (tolerance 1e-10)"),
    );

    let exact = (1.0f64 / (0.25 + 1.0f64).sqrt(), solve_y_with(1.5, 1.0, options).map(|p| p.occupation()));
    let semion_ok = matches!(exact.1, Ok(n) if (n - exact.0).abs() <= 1e-12);
    suite.check("solver/semion-point", semion_ok, format!("n(h=3/2, xi=1) = {:?}", exact.1.ok()));
}

fn entropy(suite: &mut Suite) {
    let mut worst: f64 = 0.0;
    let mut points = 0;
    for k in 1..=9 {
        let h = 1.0 + k as f64 / 10.0;
        for xi in log_grid(1e-3, 1e3, 100) {
            let pt = solve_y_with(h, xi, &SolverOptions::default()).unwrap();
            if pt.y_minus_two() < 1e-6 {
                continue;
            }
            let forms = [entropy_from_n(h, pt.occupation()).unwrap(), entropy_from_y(&pt), entropy_from_pq(&pt)];
            let max = forms.iter().cloned().fold(f64::MIN, f64::max);
            let min = forms.iter().cloned().fold(f64::MAX, f64::min);
            worst = worst.max((max - min) / max);
            points += 1;
        }
    }
    suite.check(
        "entropy/three-forms",
        worst <= 1e-10,
        format!("max relative spread {worst:.2e} over {points} points with Y - 2 >= 1e-6"),
    );

    let mut binomial_ok = true;
    for g in 1..=30u64 {
        let mut c: u128 = 1;
        for n in 0..=g {
            if n > 0 {
                c = c * (g - n + 1) as u128 / n as u128;
            }
            let w = log_weight(&WeightParams::new(g, n, 1.0).unwrap()).unwrap();
            binomial_ok &= (w - (c as f64).ln()).abs() <= 1e-12 * w.abs().max(1.0);
        }
    }
    suite.check("entropy/fermion-weights", binomial_ok, "ln W = ln C(G, N) for G <= 30");

    let mut worst_norm: f64 = 0.0;
    for p in [0.1, 0.3, 0.5, 0.7] {
        for g in [10, 20, 50] {
            worst_norm = worst_norm.max(normalization_defect(1.0, p, g).unwrap().abs());
        }
    }
    suite.check(
        "entropy/fermion-normalization",
        worst_norm <= 1e-12,
        format!("max |defect| {worst_norm:.2e} (tolerance 1e-12)"),
    );
    for h in [1.5, 2.0] {
        let d = normalization_defect(h, 0.3, 20).unwrap();
        suite.info("entropy/normalization", format!("h={h} p=0.3 G=20: sum W P - 1 = {d:.6e}"));
    }

    let mut boltzmann_ok = true;
    let mut at_top = Vec::new();
    for (h, n) in [(1.0, 0.5), (1.5, 0.5), (2.0, 1.0)] {
        let values: Vec<f64> = (3..=7).map(|e| boltzmann_consistency(h, n, 10u64.pow(e)).unwrap()).collect();
        boltzmann_ok &= values[4] <= 1e-5 && values.windows(2).all(|w| w[1] < w[0]);
        at_top.push(format!("{:.2e}", values[4]));
    }
    suite.check(
        "entropy/boltzmann-limit",
        boltzmann_ok,
        format!("G=1e7 defects {} (tolerance 1e-5, decreasing in G)", at_top.join(", ")),
    );
}

fn entanglement(suite: &mut Suite) {
    let grid: Vec<f64> = (1..=19).map(|k| k as f64 * 0.05).collect();
    let hs = [4.0 / 3.0, 1.5, 5.0 / 3.0];
    let ordered = grid.iter().all(|&p| {
        let e: Vec<f64> = hs.iter().map(|&h| measure(h, p).unwrap()).collect();
        e[0] < e[1] && e[1] < e[2]
    });
    let half_ok = hs
        .iter()
        .zip([1.2, 4.0 / 3.0, 1.5])
        .all(|(&h, e)| (measure(h, 0.5).unwrap() - e).abs() <= 1e-12);
    suite.check("entanglement/ordering", ordered && half_ok, "E[4/3] < E[3/2] < E[5/3]; E(0.5) = 6/5, 4/3, 3/2");

    let mut worst = f64::MIN;
    for &h in &hs {
        let e: Vec<f64> = grid.iter().map(|&p| measure(h, p).unwrap()).collect();
        for w in e.windows(3) {
            worst = worst.max(w[0] - 2.0 * w[1] + w[2]);
        }
    }
    suite.check("entanglement/concavity", worst <= 0.0, format!("max second difference {worst:.4e}"));

    let symmetric = (0..=100).all(|k| symmetry_defect(1.0, k as f64 / 100.0).unwrap() <= 1e-12);
    suite.check("entanglement/fermion-symmetry", symmetric, "E[1, p] = E[1, 1 - p]");
    suite.info(
        "entanglement/symmetry",
        format!("h=3/2: |E(0.25) - E(0.75)| = {:.6e}", symmetry_defect(1.5, 0.25).unwrap()),
    );

    let semion = FractonClass::from_ratio(3, 2).unwrap();
    let basis: Vec<String> = enumerate_basis(semion, 3, 4).unwrap().iter().map(|s| s.to_string()).collect();
    let mut sorted = basis.clone();
    sorted.sort();
    suite.check(
        "entanglement/basis",
        sorted == ["022", "112", "121", "202", "211", "220"],
        format!("(3/2, 3 modes, 4 particles): {}", basis.join(",")),
    );

    let total = state_entanglement(1.0, &AmplitudeVector::uniform(3).unwrap()).unwrap();
    let expected = 3.0 * 3f64.log2() - 2.0;
    suite.check(
        "entanglement/fermion-state",
        (total - expected).abs() <= 1e-9,
        format!("{total:.10} bits (expected 3 log2 3 - 2)"),
    );
}

fn fqhe(suite: &mut Suite) {
    let pairs = [
        ((2, 3), (3, 2)),
        ((1, 2), (2, 1)),
        ((1, 3), (3, 1)),
        ((4, 3), (3, 2)),
        ((3, 2), (2, 1)),
        ((5, 3), (3, 1)),
        ((8, 3), (3, 2)),
        ((5, 2), (2, 1)),
        ((7, 3), (3, 1)),
    ];
    let pairs_ok = pairs.iter().all(|&((a, b), (c, d))| {
        lll_occupation(FillingFactor::new(a, b).unwrap()).ok() == Some(r(c, d))
    });
    suite.check("fqhe/occupation-pairs", pairs_ok, "9 (nu, n) pairs");

    let mut unimodular = true;
    let mut duals = true;
    let mut edges = 0;
    for q in 1..=12 {
        for band in 0..=3 {
            let g = farey_graph(q, band);
            for (a, b) in g.edge_pairs() {
                unimodular &= (b.numer() * a.denom() - a.numer() * b.denom()).abs() == 1;
                edges += 1;
            }
            duals &= g.vertices().iter().all(|&nu| band_dual(nu).is_ok_and(|d| g.contains(d)));
        }
    }
    suite.check("fqhe/unimodular-edges", unimodular, format!("{edges} edges, max denominator 12, bands 0-3"));
    suite.check("fqhe/dual-closure", duals, "every vertex's band dual is a vertex");
    let g3 = farey_graph(3, 0);
    suite.check(
        "fqhe/small-graph",
        g3.vertices().len() == 3 && g3.edges().len() == 2 && farey_graph(1, 0).is_empty(),
        format!("max denominator 3: {} vertices, {} edges", g3.vertices().len(), g3.edges().len()),
    );
}

pub fn verify(args: &VerifyArgs) -> Result<Report> {
    let mut options = SolverOptions::default();
    if let Some(tol) = args.solver_tol {
        if !(tol > 0.0 && tol.is_finite()) {
            anyhow::bail!("--solver-tol must be positive, got {tol}");
        }
        options.tolerance = tol;
        options.polish = false;
    }
    let selected = |m: Module| args.only.is_empty() || args.only.contains(&m);

    let mut suite = Suite::default();
    if selected(Module::Classes) {
        classes(&mut suite);
    }
    if selected(Module::Solver) {
        solver(&mut suite, &options);
    }
    if selected(Module::Entropy) {
        entropy(&mut suite);
    }
    if selected(Module::Entanglement) {
        entanglement(&mut suite);
    }
    if selected(Module::Fqhe) {
        fqhe(&mut suite);
    }

    let mut body = String::new();
    let (mut passed, mut failed) = (0, 0);
    for line in &suite.lines {
        let tag = match line.status {
            Status::Pass => {
                passed += 1;
                "PASS"
            }
            Status::Fail => {
                failed += 1;
                "FAIL"
            }
            Status::Info => "INFO",
        };
        let _ = writeln!(body, "{tag}  {:<32} {}", line.name, line.detail);
    }
    let _ = writeln!(body, "{passed} passed, {failed} failed");
    Ok(Report { body, exit: if failed > 0 { 1 } else { 0 } })
}
