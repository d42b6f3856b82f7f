use proptest::prelude::*;
use sharpineq::rearrange::*;
use sharpineq::spaces::ModelSpace;

fn spaces() -> Vec<ModelSpace> {
    vec![
        ModelSpace::euclidean(3.0).unwrap(),
        ModelSpace::warped_exponential(2, 0.5, 1.0).unwrap(),
        ModelSpace::warped_exponential(3, 0.25, 2.0).unwrap(),
        ModelSpace::cone(2, 6.0).unwrap(),
        ModelSpace::monomial(2, 1.5).unwrap(),
    ]
}

fn functions() -> Vec<RadialFunction> {
    vec![
        RadialFunction::tent(1.0, 2.0).unwrap(),
        RadialFunction::trapezoid(2.0, 0.5, 3.0).unwrap(),
        RadialFunction::gaussian(1.0, 1.0, 5.0).unwrap(),
        RadialFunction::bump(1.0, 2.5, 2.0).unwrap(),
        RadialFunction::extremal_shifted(2.0, 2.0, 1.0, 30.0).unwrap(),
        RadialFunction::sampled(vec![0.0, 0.4, 1.0, 2.0, 4.0], vec![3.0, 2.5, 1.0, 0.2, 0.0]).unwrap(),
    ]
}

#[test]
fn equimeasurability_and_norm_preservation() {
    for space in spaces() {
        let model = euclidean_model(&space).unwrap();
        for u in functions() {
            let star = euclidean_rearrangement(&space, &u).unwrap();
            let l = u.sup();
            let t: Vec<f64> = (1..50).map(|i| l * i as f64 / 50.0).collect();
            let d = distribution(&space, &u, &t).unwrap();
            let ds = distribution(&model, &star, &t).unwrap();
            for (a, b) in d.v.iter().zip(&ds.v) {
                assert!((a - b).abs() <= 1e-8 * a.abs().max(1e-300), "{a} vs {b}");
            }
            let vs = model.vol_ball(star.support()).unwrap();
            let v = space.vol_ball(u.support()).unwrap();
            assert!(((vs - v) / v).abs() < 1e-8);
            for q in [1.0, 2.0, 6.0] {
                let a = lq_norm(&space, &u, q).unwrap();
                let b = lq_norm(&model, &star, q).unwrap();
                assert!(((a - b) / a).abs() < 1e-7, "{} q={q}: {a} vs {b}", space.label());
            }
        }
    }
}

#[test]
fn polya_szego_across_spaces() {
    for space in spaces() {
        for u in functions() {
            for p in [1.5, 2.0, 3.0] {
                let ps = polya_szego_check(&space, &u, p).unwrap();
                assert!(ps.holds, "{} {:?} p={p}: {ps:?}", space.label(), u.profile());
                if space.is_euclidean() {
                    assert!((ps.ratio - 1.0).abs() < 1e-8);
                }
            }
        }
    }
}

#[test]
fn round_cone_is_an_equality_case() {
    let cone = ModelSpace::cone(2, ModelSpace::round_link_measure(2)).unwrap();
    for u in functions() {
        let ps = polya_szego_check(&cone, &u, 2.0).unwrap();
        assert!((ps.ratio - 1.0).abs() < 1e-6, "{ps:?}");
    }
}

#[test]
fn warped_gaussian_is_strict() {
    let w = ModelSpace::warped_exponential(2, 0.5, 1.0).unwrap();
    let u = RadialFunction::gaussian(1.0, 1.0, 6.0).unwrap();
    let ps = polya_szego_check(&w, &u, 2.0).unwrap();
    assert!(ps.ratio > 1.0, "{ps:?}");
}

#[test]
fn idempotent_on_euclidean() {
    let e = ModelSpace::euclidean(3.0).unwrap();
    let u = RadialFunction::sampled(vec![0.0, 1.0, 2.0], vec![1.0, 0.5, 0.0]).unwrap();
    let star = euclidean_rearrangement(&e, &u).unwrap();
    for i in 0..=40 {
        let r = 0.05 * i as f64;
        assert!((star.value(r) - u.value(r)).abs() <= 1e-12);
    }
}

#[test]
fn rearrangement_of_flat_warped_product_is_the_identity() {
    let w = ModelSpace::warped_exponential(2, 1.0, 1.0).unwrap();
    let u = RadialFunction::tent(1.0, 2.0).unwrap();
    let star = euclidean_rearrangement(&w, &u).unwrap();
    for i in 0..20 {
        let r = 0.1 * i as f64;
        assert!((star.value(r) - u.value(r)).abs() < 1e-10);
    }
}

#[test]
fn coarea_on_warped_product() {
    let w = ModelSpace::warped_exponential(3, 0.5, 1.0).unwrap();
    let u = RadialFunction::gaussian(1.0, 1.5, 6.0).unwrap();
    let t: Vec<f64> = (1..20).map(|i| i as f64 / 20.0 * u.sup()).collect();
    let rep = coarea_derivative_check(&w, &u, &t).unwrap();
    assert!(rep.pass, "{rep:?}");
    assert!(rep.checked >= 17);
}

#[test]
fn layer_cake_matches_direct() {
    let cases: Vec<(ModelSpace, f64)> = vec![
        (ModelSpace::euclidean(2.0).unwrap(), 1.0),
        (ModelSpace::warped_exponential(2, 0.5, 1.0).unwrap(), 50.0),
        (ModelSpace::monomial(3, 0.5).unwrap(), 2.0),
    ];
    for (space, r) in cases {
        let lc = layer_cake_report(&space, |x| (-x).exp(), |x| -(-x).exp(), r).unwrap();
        assert!(lc.relative_gap < 1e-8, "{lc:?}");
        let one = layer_cake_radial_integral(&space, |_| 1.0, |_| 0.0, r).unwrap();
        assert!((one - space.vol_ball(r).unwrap()).abs() < 1e-12 * one);
    }
}

#[test]
fn distribution_csv() {
    let e = ModelSpace::euclidean(2.0).unwrap();
    let u = RadialFunction::tent(1.0, 1.0).unwrap();
    let d = distribution(&e, &u, &[0.75, 0.25]).unwrap();
    let csv = d.to_csv();
    let mut lines = csv.lines();
    assert_eq!(lines.next(), Some("t,V"));
    let row: Vec<f64> = lines.next().unwrap().split(',').map(|x| x.parse().unwrap()).collect();
    assert_eq!(row[0], 0.75);
    assert_eq!(row[1], d.v[0]);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn gradient_norm_is_homogeneous(c in 0.1f64..10.0, h in 0.5f64..3.0, r in 0.5f64..4.0) {
        let w = ModelSpace::warped_exponential(2, 0.5, 1.0).unwrap();
        let u = RadialFunction::trapezoid(h, 0.3 * r, r).unwrap();
        let cu = RadialFunction::trapezoid(c * h, 0.3 * r, r).unwrap();
        let a = grad_lp_norm(&w, &u, 2.0).unwrap();
        let b = grad_lp_norm(&w, &cu, 2.0).unwrap();
        prop_assert!(((b - c * a) / b).abs() < 1e-12);
    }

    #[test]
    fn distribution_is_nonincreasing(
        vals in proptest::collection::vec(0.0f64..1.0, 2..8),
        top in 1.0f64..5.0,
    ) {
        let mut u: Vec<f64> = vals.iter().map(|v| v * top).collect();
        u.sort_by(|a, b| b.total_cmp(a));
        u.insert(0, top);
        let r: Vec<f64> = (0..u.len()).map(|i| i as f64 * 0.7).collect();
        let f = RadialFunction::sampled(r, u).unwrap();
        let space = ModelSpace::cone(3, 10.0).unwrap();
        let t: Vec<f64> = (0..40).map(|i| top * i as f64 / 40.0).collect();
        let d = distribution(&space, &f, &t).unwrap();
        for w in d.v.windows(2) {
            prop_assert!(w[1] <= w[0]);
        }
    }
}
