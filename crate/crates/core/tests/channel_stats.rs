use ddf_core::channel::{draw_fading, norm_sqr, trial_stream, FadingDraw, LinkBudget};
use ddf_core::schemes::{compose_monostream, Transmitter};

const DRAWS: u64 = 100_000;

fn draws(n_rx: usize, seed: u64) -> Vec<FadingDraw> {
    (0..DRAWS)
        .map(|i| draw_fading(n_rx, &mut trial_stream(seed, i)).unwrap())
        .collect()
}

#[test]
fn fading_moments() {
    let d = draws(2, 1);
    let n = DRAWS as f64;
    let energy: f64 = d.iter().map(|x| norm_sqr(&x.h_sd)).sum::<f64>() / n;
    assert!((energy - 2.0).abs() < 0.02, "E|h|^2 = {energy}");
    let mean_re: f64 = d.iter().map(|x| x.h_rd[0].re).sum::<f64>() / n;
    let mean_im: f64 = d.iter().map(|x| x.h_rd[1].im).sum::<f64>() / n;
    assert!(mean_re.abs() < 0.01 && mean_im.abs() < 0.01);
}

#[test]
fn source_relay_gain_is_exponential() {
    let d = draws(2, 2);
    let tail = d.iter().filter(|x| x.h_sr.norm_sqr() > 1.0).count() as f64 / DRAWS as f64;
    assert!((tail - (-1f64).exp()).abs() < 0.005, "tail {tail}");
}

#[test]
fn coherent_sum_of_independent_links() {
    let d = draws(1, 3);
    let b = LinkBudget::new(0.0, 0.0, 0.0, 1).unwrap();
    let mean: f64 = d
        .iter()
        .map(|x| {
            norm_sqr(&compose_monostream(
                x,
                &b,
                &[Transmitter::Source, Transmitter::Relay],
            ))
        })
        .sum::<f64>()
        / DRAWS as f64;
    assert!((mean - 2.0).abs() < 0.05, "mean {mean}");
}

#[test]
fn draws_depend_only_on_seed_and_index() {
    let forward: Vec<FadingDraw> = (0..50)
        .map(|i| draw_fading(2, &mut trial_stream(9, i)).unwrap())
        .collect();
    let backward: Vec<FadingDraw> = (0..50)
        .rev()
        .map(|i| draw_fading(2, &mut trial_stream(9, i)).unwrap())
        .collect();
    for (a, b) in forward.iter().zip(backward.iter().rev()) {
        assert_eq!(a, b);
    }
}
