mod common;

use common::*;
use impact_games::*;
use impact_games::Strategy;
use proptest::prelude::*;
use proptest::strategy::Strategy as _;
use rand::rngs::StdRng;
use rand::SeedableRng;

fn cost(a: &impl Strategy, b: &impl Strategy, p: &ImpactParams, side: Side, g: &TimeGrid) -> f64 {
    total_cost(a, b, p, side, g).unwrap().total
}

/// First derivative and second difference of ε ↦ cost when the trader on
/// `side` moves along `δ`.
fn variation(pair: &EquilibriumPair<AnalyticStrategy>, delta: &SineSeries, side: Side, g: &TimeGrid) -> (f64, f64) {
    let p = &pair.params;
    let eps = 1e-3;
    let at = |e: f64| match side {
        Side::A => cost(&shifted(&pair.a, delta, e, g), &pair.b, p, side, g),
        Side::B => cost(&pair.a, &shifted(&pair.b, delta, e, g), p, side, g),
    };
    let (lo, mid, hi) = (at(-eps), at(0.0), at(eps));
    ((hi - lo) / (2.0 * eps), hi - 2.0 * mid + lo)
}

#[test]
fn equilibria_are_stationary_for_both_traders() {
    let g = TimeGrid::default();
    let mut rng = StdRng::seed_from_u64(7);
    for (k, l) in [(0.1, 1.0), (1.0, 5.0), (5.0, 5.0), (25.0, 5.0), (5.0, 25.0)] {
        let pair = two_trader(&ImpactParams::new(k, l).unwrap()).unwrap();
        for _ in 0..20 {
            let delta = SineSeries::random(&mut rng, 6, 1.0);
            for side in [Side::A, Side::B] {
                let (d1, d2) = variation(&pair, &delta, side, &g);
                assert!(d1.abs() < 1e-5, "κ={k} λ={l} {side:?}: {d1}");
                assert!(d2 >= 0.0, "κ={k} λ={l} {side:?}: {d2}");
            }
        }
    }
}

#[test]
fn linear_pair_is_not_an_equilibrium_with_permanent_impact() {
    let g = TimeGrid::default();
    let linear = analytic(Family::RiskNeutral);
    let pair = EquilibriumPair {
        a: linear,
        b: linear,
        params: ImpactParams::new(1.0, 1.0).unwrap(),
    };
    let delta = SineSeries(vec![1.0]);
    let (d1, _) = variation(&pair, &delta, Side::A, &g);
    assert!(d1.abs() > 1e-2);
}

#[test]
fn best_responses_beat_random_strategies() {
    let g = TimeGrid::default();
    let mut rng = StdRng::seed_from_u64(11);
    let cases: [(Family, fn(&ImpactParams) -> Result<AnalyticStrategy>, f64); 3] = [
        (Family::RiskAverse { sigma: 1.0 }, br_to_risk_averse, 1.0),
        (Family::RiskNeutral, br_to_risk_neutral, 0.0),
        (Family::Eager { sigma: 4.0 }, br_to_eager, 4.0),
    ];
    for (family, closed, sigma) in cases {
        for (k, l) in [(0.1, 1.0), (1.0, 5.0), (10.0, 10.0)] {
            let p = ImpactParams::new(k, l).unwrap().with_sigma(sigma).unwrap();
            let adversary = analytic(family);
            let br = closed(&p).unwrap();
            let best = cost(&br, &adversary, &p, Side::A, &g);
            for _ in 0..50 {
                let x = random_unit(&mut rng, &g);
                assert!(cost(&x, &adversary, &p, Side::A, &g) > best, "{family:?} κ={k} λ={l}");
            }
        }
    }
}

#[test]
fn inverse_certifies_optimality() {
    let g = TimeGrid::default();
    let mut rng = StdRng::seed_from_u64(13);
    for (k, l) in [(0.5, 2.0), (3.0, 5.0)] {
        let p = ImpactParams::new(k, l).unwrap();
        for family in [Family::Eager { sigma: 2.0 }, Family::RiskAverse { sigma: 1.5 }] {
            let a = analytic(family);
            let b_star = inverse_for_b(&a, &p, &g).unwrap();
            let base = cost(&a, &b_star, &p, Side::A, &g);
            for _ in 0..50 {
                let x = random_unit(&mut rng, &g);
                assert!(cost(&x, &b_star, &p, Side::A, &g) > base);
            }
        }
    }
}

#[test]
fn cumulative_curve_ends_at_total() {
    let g = TimeGrid::default();
    for (k, l) in [(0.1, 1.0), (25.0, 5.0), (100.0, 25.0)] {
        let p = ImpactParams::new(k, l).unwrap();
        let pair = two_trader(&p).unwrap();
        for side in [Side::A, Side::B] {
            let c = cumulative_cost(&pair.a, &pair.b, &p, side, &g).unwrap();
            let total = cost(&pair.a, &pair.b, &p, side, &g);
            assert_eq!(c[0], 0.0);
            assert!((c[c.len() - 1] - total).abs() < 1e-10 * (1.0 + total.abs()));
        }
    }
}

fn any_family() -> impl proptest::strategy::Strategy<Value = Family> {
    prop_oneof![
        Just(Family::RiskNeutral),
        (0.01..8.0f64).prop_map(|sigma| Family::RiskAverse { sigma }),
        (0.01..8.0f64).prop_map(|sigma| Family::Eager { sigma }),
        (-5.0..0.9f64).prop_map(|c| Family::Parabolic { c }),
        (0.0..100.0f64, 0.1..25.0f64).prop_map(|(kappa, lambda)| Family::TwoTraderEqUnit { kappa, lambda }),
        (0.0..100.0f64, 0.1..25.0f64).prop_map(|(kappa, lambda)| Family::TwoTraderEqScaled { kappa, lambda }),
        (0.0..100.0f64, 0.1..25.0f64, 0.1..8.0f64)
            .prop_map(|(kappa, lambda, sigma)| Family::BestResponseToEager { kappa, lambda, sigma }),
        (0.0..100.0f64).prop_map(|kappa| Family::MultiTraderLimit { kappa }),
    ]
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn doubling_the_grid_barely_moves_library_pairs(
        k in 0.0..100.0f64,
        l in 0.1..25.0f64,
        sigma in 0.1..8.0f64,
        which in 0usize..6,
    ) {
        let p = ImpactParams::new(k, l).unwrap().with_sigma(sigma).unwrap();
        let (a, b) = match which {
            0 => { let e = two_trader(&p).unwrap(); (e.a, e.b) }
            1 => (br_to_eager(&p).unwrap(), analytic(Family::Eager { sigma })),
            2 => (br_to_risk_averse(&p).unwrap(), analytic(Family::RiskAverse { sigma })),
            3 => (br_to_risk_neutral(&p).unwrap(), analytic(Family::RiskNeutral)),
            4 => { let s = uncertainty_strategies(&p).unwrap(); (s.a1b, s.b1b) }
            _ => { let s = uncertainty_strategies(&p).unwrap(); (s.a1b, s.b1a) }
        };
        let g = TimeGrid::default();
        for side in [Side::A, Side::B] {
            let coarse = cost(&a, &b, &p, side, &g);
            let fine = cost(&a, &b, &p, side, &g.refined());
            prop_assert!((coarse - fine).abs() < 1e-8, "{side:?}: {coarse} vs {fine}");
        }
    }

    // Arbitrary mixtures reach costs of 1e5..1e8 with e^{κ(t-1)} layers priced at
    // unrelated λ; only a relative bound is meaningful there.
    #[test]
    fn doubling_the_grid_barely_moves_any_pair(
        fa in any_family(),
        fb in any_family(),
        k in 0.0..100.0f64,
        l in 0.1..25.0f64,
    ) {
        let g = TimeGrid::default();
        let p = ImpactParams::new(k, l).unwrap();
        let (a, b) = (analytic(fa), analytic(fb));
        for side in [Side::A, Side::B] {
            let coarse = cost(&a, &b, &p, side, &g);
            let fine = cost(&a, &b, &p, side, &g.refined());
            prop_assert!((coarse - fine).abs() < 1e-11 * fine.abs().max(1e3), "{side:?}: {coarse} vs {fine}");
        }
    }

    // Eagerness measured as ∫(a - t); no threshold is claimed, only the ordering.
    #[test]
    fn best_responses_grow_more_eager_with_kappa(
        k in 0.0..100.0f64,
        dk in 0.01..10.0f64,
        l in 0.1..25.0f64,
        sigma in 0.1..8.0f64,
        which in 0usize..3,
    ) {
        let br = [br_to_risk_averse, br_to_risk_neutral, br_to_eager][which];
        let eagerness = |k: f64| {
            let p = ImpactParams::new(k, l).unwrap().with_sigma(sigma).unwrap();
            br(&p).unwrap().integral(1.0) - 0.5
        };
        prop_assert!(eagerness(k + dk) > eagerness(k));
    }

    #[test]
    fn self_play_temporary_cost_is_at_least_linear(f in any_family(), l in 0.1..25.0f64) {
        let g = TimeGrid::default();
        let p = ImpactParams::new(0.0, l).unwrap();
        let a = analytic(f);
        let c = total_cost(&a, &a, &p, Side::A, &g).unwrap();
        prop_assert!(c.temporary >= (1.0 + l) * (1.0 - 1e-12));
        prop_assert_eq!(c.permanent, 0.0);
    }

    #[test]
    fn linear_trader_pays_one_plus_lambda(f in any_family(), k in 0.0..100.0f64, l in 0.1..25.0f64) {
        let g = TimeGrid::default();
        let p = ImpactParams::new(k, l).unwrap();
        let c = total_cost(&analytic(Family::RiskNeutral), &analytic(f), &p, Side::A, &g).unwrap();
        prop_assert!((c.temporary - (1.0 + l)).abs() < 1e-9);
        prop_assert!((c.total - c.temporary - c.permanent).abs() < 1e-12 * c.total.abs().max(1.0));
    }
}
