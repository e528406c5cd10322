use proptest::prelude::*;

use valsgp::gapcert::{certify_gap, h_values, recheck, ExtensionSpec};
use valsgp::scenario::{state_at_center, ScenarioConfig};
use valsgp::{GenSeqState, Limits, Rat};

fn chain_from(config: &ScenarioConfig, advance: usize) -> Vec<GenSeqState> {
    let start = state_at_center(config, advance).unwrap();
    let (states, terminated) = start.quadratic_chain(Some(6)).unwrap();
    assert!(terminated || states.len() == 7);
    states
}

#[test]
fn depth_three_audits_along_the_chain() {
    let config = ScenarioConfig {
        characteristic: 0,
        prime_count: 4,
        depth: 3,
        l: 1,
        bound: Rat::int(8),
    };
    for s in chain_from(&config, 1) {
        let report = s.audit();
        assert!(report.passed, "{:?}", report.failures().collect::<Vec<_>>());
    }
}

#[test]
fn states_round_trip_through_json() {
    for s in chain_from(&ScenarioConfig::default(), 1) {
        let json = s.to_json().unwrap();
        let back = GenSeqState::from_json(&json).unwrap();
        assert_eq!(back, s);
        assert_eq!(back.to_json().unwrap(), json);
    }
}

#[test]
fn gaps_issue_and_decrease_along_the_default_chain() {
    let limits = Limits::default();
    let mut previous: Option<Rat> = None;
    for s in chain_from(&ScenarioConfig::default(), 1) {
        let ext = ExtensionSpec::for_state(&s).unwrap();
        let h = h_values(&s, &ext).unwrap();
        assert_eq!(h.iter().cloned().sum::<Rat>(), s.nu_q(2).unwrap());
        let out = certify_gap(&s, &ext, &limits).unwrap();
        assert!(out.is_issued());
        let cert = out.certificate();
        assert!(cert.gap < s.nu_q(2).unwrap());
        assert!(recheck(&cert.to_json().unwrap(), &limits).unwrap());
        if let Some(p) = &previous {
            assert!(cert.gap < *p);
        }
        previous = Some(cert.gap.clone());
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn chains_from_random_centers_stay_consistent(
        characteristic in prop_oneof![Just(0u64), Just(2), Just(3)],
        advance in 0usize..3,
        depth in 2usize..4,
    ) {
        let config = ScenarioConfig {
            characteristic,
            prime_count: advance + depth,
            depth,
            l: advance,
            bound: Rat::int(8),
        };
        let start = state_at_center(&config, advance).unwrap();
        let (states, _) = start.quadratic_chain(Some(12)).unwrap();
        let limits = Limits::default();
        for pair in states.windows(2) {
            let (a, b) = (&pair[0], &pair[1]);
            prop_assert!(b.nuz.clone().max(b.nuw.clone()) < a.nuz.clone().max(a.nuw.clone()));
            for i in 2..=a.depth() {
                prop_assert!(b.nu_q(i).unwrap() < a.nu_q(i).unwrap());
            }
        }
        for s in &states {
            let report = s.audit();
            prop_assert!(report.passed, "{:?}", report.failures().collect::<Vec<_>>());
            let ext = ExtensionSpec::for_state(s).unwrap();
            let out = certify_gap(s, &ext, &limits).unwrap();
            prop_assert!(recheck(&out.certificate().to_json().unwrap(), &limits).unwrap() == out.is_issued());
        }
    }
}
