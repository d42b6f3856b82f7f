//! Acceptance criteria 1–10. Each test prints one `PASS`/`FAIL` line to
//! stderr (visible without `--nocapture`) and then asserts every check.

use std::f64::consts::PI;
use std::io::Write;

use sharpineq::constants::{
    aubin_talenti, fk_constant, gn_constant, gn_sharp_constant, noncollapse_lower_bound, sobolev_constant,
    SobolevParams,
};
use sharpineq::rearrange::{
    euclidean_model, euclidean_rearrangement, layer_cake_report, lq_norm, polya_szego_check,
};
use sharpineq::sandbox::{brunn_minkowski_report, z_inclusion_trials, Fraction, LatticeRegion};
use sharpineq::spaces::{geometric_grid, ModelSpace, WarpingProfile};
use sharpineq::specfun::{bessel_first_zero, Precision};
use sharpineq::verify::{
    bessel_orthogonality, extremal_check, fk_check, fk_eigenvalue, fk_sharpness_sweep, function_suite, gn_suite,
    MARGIN_TOLERANCE,
};

const J0: f64 = 2.404825557695773;
const J1: f64 = 3.831705970207512;

struct Checks {
    items: Vec<(String, bool)>,
}

impl Checks {
    fn new() -> Self {
        Self { items: Vec::new() }
    }

    fn check(&mut self, ok: bool, what: impl Into<String>) {
        self.items.push((what.into(), ok));
    }

    fn finish(self, id: u32, name: &str) {
        let failed: Vec<&String> = self.items.iter().filter(|(_, ok)| !ok).map(|(w, _)| w).collect();
        let verdict = if failed.is_empty() { "PASS" } else { "FAIL" };
        let line = format!(
            "acceptance criterion {id:>2} [{name}]: {verdict} ({} checks, {} failed)\n",
            self.items.len(),
            failed.len()
        );
        let _ = std::io::stderr().write_all(line.as_bytes());
        assert!(failed.is_empty(), "criterion {id} failed: {failed:#?}");
    }
}

fn rel(a: f64, b: f64) -> f64 {
    ((a - b) / b).abs()
}

fn warped_spaces() -> Vec<ModelSpace> {
    let mut out = Vec::new();
    for n in [2, 3] {
        for a in [0.25, 0.5, 0.9] {
            out.push(ModelSpace::warped_exponential(n, a, 1.0).unwrap());
        }
    }
    out
}

#[test]
fn criterion_01_constants() {
    let mut c = Checks::new();
    let at = aubin_talenti(&SobolevParams::sobolev(3.0, 2.0).unwrap());
    let closed = 3f64.sqrt().recip() * (2.0 / PI).powf(2.0 / 3.0);
    c.check(rel(at, closed) <= 1e-10, format!("AT(3,2) = {at} vs {closed}"));
    let grid = [
        (3.0, 2.0),
        (3.0, 1.5),
        (4.0, 2.0),
        (4.0, 3.0),
        (5.0, 2.0),
        (5.0, 1.2),
        (6.0, 4.5),
        (2.5, 1.5),
        (7.0, 3.0),
        (10.0, 2.0),
        (3.5, 2.5),
        (8.0, 6.0),
    ];
    for (n, p) in grid {
        let params = SobolevParams::sobolev(n, p).unwrap();
        let (g, a) = (gn_constant(&params).unwrap(), aubin_talenti(&params));
        c.check(rel(g, a) <= 1e-10, format!("G at alpha=n/(n-p), (n,p)=({n},{p}): {g} vs AT {a}"));
    }
    let fk = fk_constant(2.0, 1.0).unwrap();
    c.check(rel(fk, PI * J0 * J0) <= 1e-9, format!("fk_constant(2,1) = {fk}"));
    c.finish(1, "sharp constants");
}

#[test]
fn criterion_02_bessel_zeros() {
    let mut c = Checks::new();
    let j0 = bessel_first_zero(0.0).unwrap();
    let j1 = bessel_first_zero(1.0).unwrap();
    let jh = bessel_first_zero(0.5).unwrap();
    c.check((j0 - J0).abs() <= 1e-10, format!("j_0 = {j0}"));
    c.check((j1 - J1).abs() <= 1e-10, format!("j_1 = {j1}"));
    c.check((jh - PI).abs() <= 1e-11, format!("j_1/2 = {jh}"));
    c.finish(2, "Bessel zeros");
}

#[test]
fn criterion_03_isoperimetric() {
    let mut c = Checks::new();
    let radii = geometric_grid(1e-3, 1e3, 120);
    for space in warped_spaces() {
        let sweep = space.isoperimetric_sharpness_sweep(&radii).unwrap();
        let worst = sweep.rows.iter().map(|r| r.ratio / r.sharp_bound).fold(f64::INFINITY, f64::min);
        c.check(worst >= 1.0 - 1e-9, format!("{}: min ratio/bound {worst}", space.label()));
        let last = sweep.rows.last().unwrap();
        c.check(
            rel(last.ratio, last.sharp_bound) <= 0.01,
            format!("{}: ratio at r=1e3 is {} vs bound {}", space.label(), last.ratio, last.sharp_bound),
        );
    }
    for (n, m) in [(2, 6.0), (3, 10.0), (2, 4.0 * PI)] {
        let cone = ModelSpace::cone(n, m).unwrap();
        let sweep = cone.isoperimetric_sharpness_sweep(&radii).unwrap();
        let worst = sweep.rows.iter().map(|r| rel(r.ratio, r.sharp_bound)).fold(0.0, f64::max);
        c.check(worst <= 1e-12, format!("{}: max |ratio/bound - 1| = {worst}", cone.label()));
    }
    c.finish(3, "isoperimetric inequality and equality on cones");
}

#[test]
fn criterion_04_bishop_gromov() {
    let mut c = Checks::new();
    let grid = geometric_grid(1e-2, 1e3, 150);
    let mut spaces = vec![
        ModelSpace::euclidean(2.0).unwrap(),
        ModelSpace::euclidean(3.5).unwrap(),
        ModelSpace::cone(2, 6.0).unwrap(),
        ModelSpace::cone(3, 1.0).unwrap(),
        ModelSpace::monomial(2, 1.5).unwrap(),
        ModelSpace::monomial(3, 0.5).unwrap(),
        ModelSpace::warped(2, WarpingProfile::sampled(vec![0.0, 1.0, 2.0, 5.0], vec![1.0, 0.9, 0.6, 0.4]).unwrap())
            .unwrap(),
    ];
    spaces.extend(warped_spaces());
    for space in &spaces {
        let bg = space.bishop_gromov_check(&grid).unwrap();
        c.check(
            bg.pass,
            format!("{}: worst relative increase {}", space.label(), bg.worst_relative_increase),
        );
    }
    let control = ModelSpace::warped(
        2,
        WarpingProfile::sampled(vec![0.0, 1.0, 2.0], vec![1.0, 1.3, 1.6]).unwrap(),
    )
    .unwrap();
    let bg = control.bishop_gromov_check(&grid).unwrap();
    c.check(!bg.pass, "negative control with increasing F' must fail");
    c.finish(4, "Bishop-Gromov monotonicity");
}

#[test]
fn criterion_05_polya_szego() {
    let mut c = Checks::new();
    let spaces = [
        ModelSpace::euclidean(3.0).unwrap(),
        ModelSpace::warped_exponential(2, 0.5, 1.0).unwrap(),
        ModelSpace::cone(2, 6.0).unwrap(),
        ModelSpace::monomial(2, 1.5).unwrap(),
    ];
    for space in &spaces {
        let suite = function_suite(space.dimension(), 2.0, 2.0).unwrap();
        c.check(suite.len() >= 10, format!("suite has {} functions", suite.len()));
        for p in [1.5, 2.0, 3.0] {
            for f in &suite {
                let ps = polya_szego_check(space, &f.function, p).unwrap();
                c.check(ps.ratio >= 1.0 - 1e-6, format!("{} {} p={p}: ratio {}", space.label(), f.name, ps.ratio));
                if space.is_euclidean() {
                    c.check(
                        (ps.ratio - 1.0).abs() <= 1e-8,
                        format!("euclidean {} p={p}: ratio {}", f.name, ps.ratio),
                    );
                }
            }
        }
    }
    c.finish(5, "Polya-Szego");
}

#[test]
fn criterion_06_gagliardo_nirenberg() {
    let mut c = Checks::new();
    let params = SobolevParams::new(3.0, 2.0, 2.0).unwrap();
    let x = extremal_check(&params, 1.0, 200.0).unwrap();
    c.check(
        x.relative_error <= 1e-5,
        format!("truncated h^1 quotient {} vs G {}: rel {}", x.corrected, x.constant, x.relative_error),
    );
    for lambda in [0.25, 0.5, 2.0, 4.0] {
        let y = extremal_check(&params, lambda, 200.0).unwrap();
        c.check(
            rel(y.truncated, x.truncated) <= 1e-8,
            format!("lambda={lambda}: {} vs {}", y.truncated, x.truncated),
        );
    }
    for space in warped_spaces() {
        let gp = SobolevParams::new(space.dimension(), 1.5, 1.2).unwrap();
        let k = gn_sharp_constant(&gp, space.avr()).unwrap();
        for r in gn_suite(&space, &gp).unwrap() {
            c.check(
                r.margin >= -MARGIN_TOLERANCE * k && r.quotient <= k * (1.0 + MARGIN_TOLERANCE),
                format!("{} {}: quotient {} vs K {}", space.label(), r.function, r.quotient, k),
            );
        }
    }
    c.finish(6, "Gagliardo-Nirenberg");
}

#[test]
fn criterion_07_faber_krahn() {
    let mut c = Checks::new();
    for n in 2..=5 {
        let e = ModelSpace::euclidean(n as f64).unwrap();
        let lam = fk_eigenvalue(&e, 1.0, &Precision::default()).unwrap().lambda_1;
        let j = bessel_first_zero(n as f64 / 2.0 - 1.0).unwrap();
        c.check(rel(lam, j * j) <= 1e-7, format!("n={n}: lambda_1 = {lam} vs {}", j * j));
    }
    let e = ModelSpace::euclidean(3.0).unwrap();
    for radius in [0.3, 1.0, 7.5] {
        let r = fk_check(&e, radius).unwrap();
        c.check(
            rel(r.quotient, r.rhs_constant) <= 1e-6,
            format!("euclidean R={radius}: {} vs {}", r.quotient, r.rhs_constant),
        );
    }
    for (n, a) in [(2, 0.5), (2, 0.25), (3, 0.5)] {
        let space = ModelSpace::warped_exponential(n, a, 1.0).unwrap();
        for radius in [1.0, 5.0] {
            let r = fk_check(&space, radius).unwrap();
            c.check(r.margin > 0.0, format!("{} R={radius}: margin {}", space.label(), r.margin));
        }
    }
    c.finish(7, "Faber-Krahn");
}

#[test]
fn criterion_08_sharpness_sweep() {
    let mut c = Checks::new();
    let space = ModelSpace::warped_exponential(2, 0.5, 1.0).unwrap();
    let sweep = fk_sharpness_sweep(&space, &[10.0, 50.0, 500.0]).unwrap();
    c.check(
        sweep.grad_limit_error <= 0.01,
        format!("gradient integral limit error {}", sweep.grad_limit_error),
    );
    c.check(sweep.l2_limit_error <= 0.01, format!("L2 integral limit error {}", sweep.l2_limit_error));
    c.check(sweep.holds, "Q(R) >= Lambda_g along the sweep");
    for nu in [0.0, 0.5, 1.0] {
        let b = bessel_orthogonality(nu).unwrap();
        c.check(
            (b.quadrature - b.closed_form).abs() <= 1e-9,
            format!("nu={nu}: {} vs {}", b.quadrature, b.closed_form),
        );
    }
    c.finish(8, "Faber-Krahn sharpness sweep");
}

#[test]
fn criterion_09_sandbox() {
    let mut c = Checks::new();
    let trials = z_inclusion_trials(0..200, Some(0.0), 0.0).unwrap();
    let failures = trials.iter().filter(|t| !t.pass).count();
    c.check(failures == 0, format!("{failures} of {} z-inclusion checks failed", trials.len()));
    let seeds: std::collections::BTreeSet<u64> = trials.iter().map(|t| t.seed).collect();
    c.check(seeds.len() == 200, format!("{} seeded spaces", seeds.len()));

    let half = Fraction::new(1, 2).unwrap();
    for (cells, s) in [(64, half), (128, Fraction::new(1, 4).unwrap()), (96, Fraction::new(2, 3).unwrap())] {
        let a = LatticeRegion::cube(0.0, 0.25, 1);
        let b = LatticeRegion::cube(0.5, 1.0, 1);
        let r = brunn_minkowski_report(1, cells, &a, &b, s, 1.0).unwrap();
        c.check(r.deficit.abs() <= 1e-12, format!("1-D cells={cells} s={s}: deficit {}", r.deficit));
    }
    let a = LatticeRegion::cube(0.1, 0.3, 2);
    let b = LatticeRegion::Box {
        lo: vec![0.45, 0.35],
        hi: vec![0.95, 0.85],
    };
    let deficits: Vec<f64> = [64, 128, 256]
        .iter()
        .map(|&m| brunn_minkowski_report(2, m, &a, &b, half, 2.0).unwrap().deficit)
        .collect();
    c.check(deficits[0] >= -0.05, format!("2-D deficit at h=1/64: {}", deficits[0]));
    c.check(
        deficits[1] >= deficits[0] && deficits[2] >= deficits[1],
        format!("2-D deficits under refinement: {deficits:?}"),
    );
    c.finish(9, "metric sandbox");
}

#[test]
fn criterion_10_round_trips() {
    let mut c = Checks::new();
    for (n, p) in [(3.0, 2.0), (4.0, 1.5), (5.0, 3.0), (2.5, 1.2)] {
        let params = SobolevParams::sobolev(n, p).unwrap();
        for avr in [1.0, 0.5, 0.1, 1e-3] {
            let back = noncollapse_lower_bound(&params, sobolev_constant(&params, avr).unwrap()).unwrap();
            c.check(rel(back, avr) <= 1e-12, format!("(n,p)=({n},{p}) avr={avr}: {back}"));
        }
    }

    let spaces = [
        ModelSpace::euclidean(3.0).unwrap(),
        ModelSpace::warped_exponential(2, 0.5, 1.0).unwrap(),
        ModelSpace::cone(2, 6.0).unwrap(),
        ModelSpace::monomial(2, 1.5).unwrap(),
    ];
    for space in &spaces {
        let model = euclidean_model(space).unwrap();
        for f in function_suite(space.dimension(), 2.0, 2.0).unwrap() {
            let star = euclidean_rearrangement(space, &f.function).unwrap();
            for q in [1.0, 2.0, 4.0] {
                let a = lq_norm(space, &f.function, q).unwrap();
                let b = lq_norm(&model, &star, q).unwrap();
                c.check(rel(a, b) <= 1e-7, format!("{} {} q={q}: {a} vs {b}", space.label(), f.name));
            }
        }
    }

    let cases: Vec<(ModelSpace, f64)> = vec![
        (ModelSpace::euclidean(2.0).unwrap(), 1.0),
        (ModelSpace::euclidean(3.0).unwrap(), 2.5),
        (ModelSpace::warped_exponential(2, 0.5, 1.0).unwrap(), 3.0),
        (ModelSpace::warped_exponential(3, 0.25, 2.0).unwrap(), 10.0),
        (ModelSpace::cone(2, 6.0).unwrap(), 1.5),
        (ModelSpace::monomial(2, 1.5).unwrap(), 2.0),
    ];
    let mut count = 0;
    for (space, radius) in &cases {
        let gap_gauss = layer_cake_report(space, |r| (-r * r).exp(), |r| -2.0 * r * (-r * r).exp(), *radius)
            .unwrap()
            .relative_gap;
        let gap_poly = layer_cake_report(space, |r| 1.0 + r * r * r, |r| 3.0 * r * r, *radius)
            .unwrap()
            .relative_gap;
        for (name, gap) in [("gaussian", gap_gauss), ("cubic", gap_poly)] {
            count += 1;
            c.check(gap <= 1e-8, format!("{} {name} R={radius}: gap {gap}", space.label()));
        }
    }
    c.check(count == 12, format!("{count} layer-cake cases"));
    c.finish(10, "round trips");
}
