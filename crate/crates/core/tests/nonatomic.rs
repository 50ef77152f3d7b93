use crowdcast::analysis::fixed_point_solve;
use crowdcast::environments::{nonatomic_response_closed, nonatomic_response_numeric, NonatomicPopulation};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn random_population(rng: &mut ChaCha8Rng) -> NonatomicPopulation {
    let delta = rng.random_range(0.01..0.49);
    let x = rng.random_range(delta..=1.0 - delta);
    NonatomicPopulation::new(rng.random_range(-2.0..2.0), rng.random_range(-1.5..0.5), delta, x).unwrap()
}

#[test]
fn closed_form_agrees_with_quadrature() {
    let mut rng = ChaCha8Rng::seed_from_u64(17);
    for _ in 0..1000 {
        let pop = random_population(&mut rng);
        let mean = rng.random_range(0.0..=1.0);
        let closed = nonatomic_response_closed(&pop, mean);
        let numeric = nonatomic_response_numeric(&pop, mean);
        // midpoint counting is off by at most half a cell
        assert!((closed - numeric).abs() <= 0.5 / pop.grid_n as f64 + 1e-12, "{pop:?} at {mean}");
    }
}

#[test]
fn solver_finds_the_interior_fixed_point() {
    let mut rng = ChaCha8Rng::seed_from_u64(99);
    let mut solved = 0;
    while solved < 200 {
        let delta = rng.random_range(0.05..0.45);
        let x = rng.random_range(delta..=1.0 - delta);
        let phi = rng.random_range(-1.0..-0.01);
        let chi = rng.random_range(-1.5..0.5);
        let analytic = (x + delta + chi) / (2.0 * delta - phi);
        if !(0.01..0.99).contains(&analytic) {
            continue;
        }
        let pop = NonatomicPopulation::new(phi, chi, delta, x).unwrap();
        let found = fixed_point_solve(|a| nonatomic_response_closed(&pop, a), 0.0, 1.0, 1e-12, 200).unwrap();
        assert!((found - analytic).abs() <= 1e-9, "{pop:?}: {found} vs {analytic}");
        solved += 1;
    }
}
