use ddf_core::diversity::*;
use ddf_core::frame::FrameConfig;
use ddf_core::schemes::{PatchSlots, RelayOrder, Scheme};
use proptest::prelude::*;

const K: u64 = 240;

fn open_loop() -> FrameConfig {
    FrameConfig::open_loop(K, 2).unwrap()
}

fn single_relay_schemes() -> Vec<Scheme> {
    vec![
        Scheme::Monostream,
        Scheme::MonostreamAdaptedMod,
        Scheme::PatchedMonostream {
            m_r: 4,
            slots: PatchSlots::Full,
        },
        Scheme::PatchedMonostream {
            m_r: 6,
            slots: PatchSlots::Full,
        },
        Scheme::PatchedMonostream {
            m_r: 4,
            slots: PatchSlots::Count(10),
        },
        Scheme::PatchedMonostreamMu,
        Scheme::DistributedAlamouti,
        Scheme::AlamoutiAdaptedMod,
        Scheme::PatchedAlamouti {
            m_r: RelayOrder::Fixed(4),
        },
        Scheme::PatchedAlamouti {
            m_r: RelayOrder::Adaptive,
        },
        Scheme::PatchedGolden { m_r: 4 },
        Scheme::PatchedSilver { m_r: 2 },
    ]
}

#[test]
fn monostream_macro_order_by_start() {
    let f = open_loop();
    for (start, want) in [(3, 2), (4, 2), (5, 2), (6, 1), (7, 1)] {
        let ch = monostream_snr_channel(&f, &[start], 7).unwrap();
        assert_eq!(
            matryoshka_bound(&ch, f.coding_rate()).unwrap(),
            want,
            "start {start}"
        );
    }
}

#[test]
fn full_macro_matches_the_bound_for_every_start() {
    let frames = [open_loop(), FrameConfig::closed_loop(0.7, 10, 2).unwrap()];
    for f in &frames {
        for scheme in single_relay_schemes() {
            for start in 2..=f.n_max() {
                let fm = full_macro(&scheme, f, Some(start)).unwrap();
                let order = macro_diversity_order(&scheme, f, Some(start)).unwrap();
                assert_eq!(fm, order == 2, "{scheme:?} start {start}");
            }
            assert!(!full_macro(&scheme, f, None).unwrap());
        }
    }
}

#[test]
fn micro_implies_macro_for_space_time_codes() {
    let f = open_loop();
    for scheme in single_relay_schemes() {
        for start in 2..=7 {
            if full_micro(&scheme, &f, Some(start)).unwrap() {
                assert!(
                    full_macro(&scheme, &f, Some(start)).unwrap(),
                    "{scheme:?} {start}"
                );
            }
        }
    }
}

#[test]
fn minimal_use_is_minimal() {
    let f = open_loop();
    for start in 2..=7 {
        let mu = minimal_use_params(&f, start).unwrap();
        let s1 = f.symbols_through(start - 1);
        let s2 = f.symbols_between(start, 7);
        let (l1, l2) = (2 * s1, 2 * s2);
        let (_, l2p) = patched_blocks(l1, l2, mu.p, 2, mu.m_r).unwrap();
        assert!(mu.feasible);
        assert!(l2p >= K);
        if mu.p > 0 {
            let (_, fewer) = patched_blocks(l1, l2, mu.p - 1, 2, mu.m_r).unwrap();
            assert!(fewer < K, "start {start}: p - 1 already suffices");
        }
    }
}

#[test]
fn adaptive_patched_alamouti_reaches_full_diversity_when_possible() {
    let f = open_loop();
    let s = Scheme::PatchedAlamouti {
        m_r: RelayOrder::Adaptive,
    };
    for start in 2..=7 {
        assert!(full_micro(&s, &f, Some(start)).unwrap(), "start {start}");
    }
}

fn channel_strategy() -> impl Strategy<Value = (Vec<u64>, f64)> {
    (prop::collection::vec(0u64..1000, 1..5), 0.01f64..=1.0)
}

proptest! {
    #[test]
    fn bound_is_monotone_in_top_block_bits((l, r_c) in channel_strategy(), extra in 1u64..500, j in 0usize..4) {
        prop_assume!(l.iter().sum::<u64>() > 0);
        let n = l.len();
        let d: Vec<u32> = (1..=n as u32).rev().collect();
        let j = j % n;
        let base = MatryoshkaChannel::new(d.clone(), l.clone()).unwrap();
        let mut more = l.clone();
        more[j] += extra;
        let grown = MatryoshkaChannel::new(d, more).unwrap();
        // Adding bits to a block while keeping the rate fixed in bits
        // (the rate is rescaled to the new total) never lowers the order.
        let k = r_c * base.total_bits() as f64;
        let a = matryoshka_bound(&base, r_c).unwrap();
        let b = matryoshka_bound(&grown, (k / grown.total_bits() as f64).min(1.0)).unwrap();
        prop_assert!(b >= a);
    }

    #[test]
    fn full_order_iff_top_block_covers_the_rate((l, r_c) in channel_strategy()) {
        prop_assume!(l[0] > 0);
        let n = l.len();
        let d: Vec<u32> = (1..=n as u32).rev().collect();
        let ch = MatryoshkaChannel::new(d.clone(), l.clone()).unwrap();
        let full = matryoshka_bound(&ch, r_c).unwrap() == d[0];
        let covers = r_c * ch.total_bits() as f64 <= l[0] as f64 * (1.0 + 1e-9);
        prop_assert_eq!(full, covers);
    }

    #[test]
    fn patching_never_loses_bits(l1 in 0u64..2000, s2 in 0u64..500, p_frac in 0.0f64..=1.0, m_r in prop::sample::select(vec![2u32, 4, 6])) {
        let l2 = 2 * s2;
        let p = (p_frac * s2 as f64).floor() as u64;
        let (a, b) = patched_blocks(l1, l2, p, 2, m_r).unwrap();
        prop_assert!(a + b >= l1 + l2);
        prop_assert!(b >= l2);
    }
}
