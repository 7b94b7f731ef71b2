use std::collections::BTreeMap;

use num_traits::{One, Zero};
use pvd_core::harness::{
    abort_probability, hybrid_chain_report, other_preimage_game, run_evpke, run_game, run_hyb,
    tv_distance, AdversaryStrategy, CertificatePolicy, CircuitSpec, ExperimentConfig, Game,
    HarnessError, Mode, Outcome, PreimageAdversary, PreimageConfig, Retained, SchemeConfig,
    Transcript, WrapperKind,
};
use pvd_core::primitives::{OwfParams, OwsgParams, PkeSpec};
use pvd_core::qstate::{BitString, ExactProb};

fn honest() -> AdversaryStrategy {
    AdversaryStrategy::HonestDeleter
}

fn inverter(retained: Retained) -> AdversaryStrategy {
    AdversaryStrategy::ClassicalInverter {
        target: 0,
        retained,
    }
}

fn retainer() -> AdversaryStrategy {
    AdversaryStrategy::HadamardRetainer {
        certificate: CertificatePolicy::KnownInvalid,
    }
}

fn enumerable_strategies() -> Vec<AdversaryStrategy> {
    vec![
        honest(),
        inverter(Retained::Computational),
        inverter(Retained::Hadamard),
        inverter(Retained::Discard),
        AdversaryStrategy::ClassicalInverter {
            target: 1,
            retained: Retained::Hadamard,
        },
        retainer(),
        AdversaryStrategy::HadamardRetainer {
            certificate: CertificatePolicy::Guess,
        },
    ]
}

fn toy(adv: AdversaryStrategy) -> ExperimentConfig {
    ExperimentConfig::toy_owf(6, 12, 5, adv)
        .with_trials(200)
        .with_seed(17)
}

fn half() -> ExactProb {
    ExactProb::new(1, 2)
}

#[test]
fn honest_deletion_never_aborts_and_leaks_nothing() {
    let cfg = toy(honest());
    let d0 = run_evpke(&cfg, false).unwrap();
    let d1 = run_evpke(&cfg, true).unwrap();
    assert!(d0.bottom_mass().is_zero());
    assert_eq!(tv_distance(&d0, &d1).unwrap().exact, ExactProb::zero());
    // every trial contributes {x0: 1/2, x1: 1/2}
    for w in d0.weights().values() {
        assert_eq!((*w * ExactProb::from_integer(400)).denom(), &1);
    }
}

#[test]
fn garbage_certificates_always_fail_for_hash_owf() {
    let adv = AdversaryStrategy::HadamardRetainer {
        certificate: CertificatePolicy::Fixed {
            value: BitString::zeros(64).unwrap(),
        },
    };
    let cfg = ExperimentConfig::hash_owf(64, 64, adv)
        .with_mode(Mode::Empirical)
        .with_trials(100_000);
    let d = run_evpke(&cfg, true).unwrap();
    assert!(d.bottom_mass().is_one());
}

#[test]
fn hyb2_advantage_is_exactly_zero() {
    for adv in enumerable_strategies() {
        let cfg = toy(adv.clone());
        let d0 = run_hyb(&cfg, 2, false).unwrap();
        let d1 = run_hyb(&cfg, 2, true).unwrap();
        assert_eq!(d0, d1, "{adv:?}");
        assert!(tv_distance(&d0, &d1).unwrap().exact.is_zero());
    }
}

#[test]
fn hyb1_is_half_bottom_plus_hyb0() {
    for adv in enumerable_strategies() {
        let cfg = toy(adv.clone());
        for b in [false, true] {
            let h0 = run_hyb(&cfg, 0, b).unwrap();
            let h1 = run_hyb(&cfg, 1, b).unwrap();
            assert_eq!(
                h1.weights(),
                h0.half_bottom_mixture().weights(),
                "{adv:?} b={b}"
            );
        }
    }
}

#[test]
fn honest_hyb2_equals_hyb1() {
    let cfg = toy(honest());
    for b in [false, true] {
        let h1 = run_hyb(&cfg, 1, b).unwrap();
        let h2 = run_hyb(&cfg, 2, b).unwrap();
        assert_eq!(h1.weights(), h2.weights());
        assert!(h2.hadamard_abort().is_zero());
    }
}

#[test]
fn commuting_the_hadamard_measurement_changes_nothing() {
    for adv in enumerable_strategies() {
        let cfg = toy(adv.clone());
        for b in [false, true] {
            let h2 = run_game(&cfg, Game::Hyb2, b).unwrap();
            let hc = run_game(&cfg, Game::Hyb2Commuted, b).unwrap();
            assert_eq!(h2, hc, "{adv:?}");
        }
    }
}

#[test]
fn abort_probability_tracks_whether_a_was_measured() {
    let honest = abort_probability(&toy(honest())).unwrap();
    assert_eq!(honest.exact, Some(ExactProb::zero()));
    for retained in [
        Retained::Discard,
        Retained::Hadamard,
        Retained::Computational,
    ] {
        let est = abort_probability(&toy(inverter(retained))).unwrap();
        assert_eq!(est.exact, Some(half()), "{retained:?}");
    }
    // certificates that never verify stop before the Hadamard check
    assert_eq!(
        abort_probability(&toy(retainer())).unwrap().exact,
        Some(ExactProb::zero())
    );
}

#[test]
fn empirical_abort_frequency_of_untouched_inverter() {
    let cfg = ExperimentConfig::toy_owf(8, 16, 9, inverter(Retained::Discard))
        .with_mode(Mode::Empirical)
        .with_trials(100_000);
    let est = abort_probability(&cfg).unwrap();
    assert!((est.probability - 0.5).abs() < 0.02, "{}", est.probability);
    assert!(est.ci.0 < 0.5 && 0.5 < est.ci.1);
}

#[test]
fn chain_for_honest_deleter_is_all_zero() {
    let r = hybrid_chain_report(&toy(honest())).unwrap();
    for a in r.advantages {
        assert!(a.exact.is_zero());
    }
    assert!(r.inequalities.iter().all(|i| i.satisfied && i.lhs == 0.0));
}

#[test]
fn chain_for_inverter_shows_the_hadamard_abort() {
    // one instance: w is confined to {w : (x0 ^ x1) . w = b}, so Hyb0 separates the bits
    let r = hybrid_chain_report(&toy(inverter(Retained::Hadamard)).with_trials(1)).unwrap();
    assert!(r.advantages[0].exact.is_one());
    assert_eq!(r.advantages[1].exact, half());
    assert!(r.advantages[2].exact.is_zero());
    assert_eq!(r.abort.exact, Some(half()));
    assert!(
        r.inequalities.iter().all(|i| i.satisfied),
        "{:?}",
        r.inequalities
    );
    // across many instances the sets for different x0 ^ x1 overlap
    let r = hybrid_chain_report(&toy(inverter(Retained::Hadamard))).unwrap();
    let a0 = r.advantages[0].value;
    assert!(a0 > 0.0 && a0 < 1.0, "{a0}");
    assert_eq!(
        r.advantages[1].exact,
        r.advantages[0].exact / ExactProb::from_integer(2)
    );
    assert!(
        r.inequalities.iter().all(|i| i.satisfied),
        "{:?}",
        r.inequalities
    );
}

#[test]
fn retainer_with_invalid_certificate_only_sees_bottom() {
    let cfg = toy(retainer());
    let r = hybrid_chain_report(&cfg).unwrap();
    for pair in &r.hybrids {
        for d in pair {
            assert!(d.bottom_mass().is_one());
        }
    }
    assert!(r.advantages.iter().all(|a| a.exact.is_zero()));
}

#[test]
fn guessed_certificates_on_toy_owf_sometimes_verify() {
    let adv = AdversaryStrategy::HadamardRetainer {
        certificate: CertificatePolicy::Guess,
    };
    let cfg = ExperimentConfig::toy_owf(3, 6, 1, adv).with_trials(500);
    let d0 = run_hyb(&cfg, 0, false).unwrap();
    let d1 = run_hyb(&cfg, 0, true).unwrap();
    // a guess verifies about 2/8 of the time; averaged over x0 ^ x1 the
    // conditional residuals are 1/4 apart, so the advantage is near 1/16
    let adv0 = tv_distance(&d0, &d1).unwrap().value;
    assert!(adv0 > 0.03 && adv0 < 0.12, "{adv0}");
}

#[test]
fn empirical_and_exact_modes_agree() {
    for adv in [honest(), inverter(Retained::Hadamard)] {
        let exact = ExperimentConfig::toy_owf(2, 8, 3, adv.clone()).with_trials(2000);
        let emp = exact.clone().with_mode(Mode::Empirical);
        for game in [Game::Hyb0, Game::Hyb1, Game::Hyb2] {
            let de = run_game(&exact, game, true).unwrap();
            let dm = run_game(&emp, game, true).unwrap();
            let tv = tv_distance(&de, &dm).unwrap();
            assert!(
                tv.value <= tv.error_bound,
                "{adv:?} {game:?}: {} > {}",
                tv.value,
                tv.error_bound
            );
        }
    }
}

#[test]
fn wrapped_secret_and_pke_choice_do_not_matter_to_these_adversaries() {
    for adv in enumerable_strategies() {
        let base = toy(adv.clone());
        let reference = run_hyb(&base, 0, true).unwrap();
        let variants = [
            base.clone().with_zero_secret(true),
            base.clone().with_pke(PkeSpec::Transparent),
            base.clone().with_wrapper(WrapperKind::Commitment),
            base.clone().with_wrapper(WrapperKind::Identity),
        ];
        for v in variants {
            assert_eq!(run_hyb(&v, 0, true).unwrap(), reference, "{adv:?}");
        }
        let e1 = run_evpke(&base, true).unwrap();
        let e2 = run_evpke(&base.clone().with_pke(PkeSpec::Transparent), true).unwrap();
        assert_eq!(e1, e2);
    }
}

fn circuit_cfg() -> ExperimentConfig {
    let adv = AdversaryStrategy::Circuit {
        circuit: CircuitSpec::Random { layers: 2, seed: 4 },
        workspace: 1,
    };
    ExperimentConfig::toy_owf(3, 8, 2, adv).with_mode(Mode::Empirical)
}

#[test]
fn circuit_adversary_requires_empirical_mode() {
    let cfg = circuit_cfg().with_mode(Mode::Exact);
    assert!(matches!(
        run_hyb(&cfg, 2, false),
        Err(HarnessError::Infeasible(_))
    ));
    let big = AdversaryStrategy::Circuit {
        circuit: CircuitSpec::Random { layers: 1, seed: 0 },
        workspace: 8,
    };
    let cfg = ExperimentConfig::toy_owf(8, 8, 0, big).with_mode(Mode::Empirical);
    assert!(matches!(
        run_hyb(&cfg, 2, false),
        Err(HarnessError::Infeasible(_))
    ));
}

#[test]
fn circuit_adversary_hyb2_and_commuted_hyb2_agree() {
    let cfg = circuit_cfg().with_trials(50_000);
    for b in [false, true] {
        let h2 = run_game(&cfg, Game::Hyb2, b).unwrap();
        let hc = run_game(&cfg, Game::Hyb2Commuted, b).unwrap();
        let tv = tv_distance(&h2, &hc).unwrap();
        assert!(
            tv.value <= tv.error_bound,
            "{} > {}",
            tv.value,
            tv.error_bound
        );
        assert_eq!(h2.residual_bits(), 1);
    }
}

#[test]
fn owsg_exact_mode_works_when_fidelities_are_certain() {
    // one-bit keys are siblings, so their states are orthogonal
    let scheme = SchemeConfig::Owsg {
        owsg: OwsgParams {
            n: 1,
            m: 3,
            seed: 2,
            layers: 3,
        },
        t: 1,
    };
    let cfg = ExperimentConfig::new(scheme, honest()).with_trials(100);
    let d0 = run_evpke(&cfg, false).unwrap();
    assert!(d0.bottom_mass().is_zero());
    let d1 = run_evpke(&cfg, true).unwrap();
    assert!(tv_distance(&d0, &d1).unwrap().exact.is_zero());
    let r = hybrid_chain_report(&cfg).unwrap();
    assert!(r.inequalities.iter().all(|i| i.satisfied));
}

#[test]
fn owsg_guessing_needs_empirical_mode() {
    let scheme = SchemeConfig::Owsg {
        owsg: OwsgParams {
            n: 4,
            m: 2,
            seed: 2,
            layers: 3,
        },
        t: 1,
    };
    let adv = AdversaryStrategy::HadamardRetainer {
        certificate: CertificatePolicy::Guess,
    };
    let cfg = ExperimentConfig::new(scheme, adv).with_trials(200);
    assert!(matches!(
        run_hyb(&cfg, 0, false),
        Err(HarnessError::Infeasible(_))
    ));
    let cfg = cfg.with_mode(Mode::Empirical).with_trials(5000);
    let r = hybrid_chain_report(&cfg).unwrap();
    assert!(
        r.inequalities.iter().all(|i| i.satisfied),
        "{:?}",
        r.inequalities
    );
    assert!(matches!(
        run_hyb(
            &ExperimentConfig {
                adversary: inverter(Retained::Discard),
                ..cfg
            },
            0,
            false
        ),
        Err(HarnessError::Infeasible(_))
    ));
}

#[test]
fn runs_are_deterministic_and_thread_independent() {
    let cfg = toy(inverter(Retained::Hadamard))
        .with_mode(Mode::Empirical)
        .with_trials(3000);
    let one = rayon::ThreadPoolBuilder::new()
        .num_threads(1)
        .build()
        .unwrap();
    let four = rayon::ThreadPoolBuilder::new()
        .num_threads(4)
        .build()
        .unwrap();
    let a = one.install(|| run_hyb(&cfg, 1, true)).unwrap();
    let b = four.install(|| run_hyb(&cfg, 1, true)).unwrap();
    assert_eq!(a, b);
    let c = run_hyb(&cfg.clone().with_seed(18), 1, true).unwrap();
    assert_ne!(a, c);
}

#[test]
fn other_preimage_reduction() {
    let brute = PreimageConfig {
        owf: OwfParams::Toy {
            n: 8,
            m: 16,
            seed: 4,
        },
        adversary: PreimageAdversary::BruteForce,
        zero_secret: true,
        trials: 10_000,
        seed: 1,
        confidence: 0.99,
    };
    assert!(other_preimage_game(&brute).unwrap().frequency >= 0.99);
    let guess = PreimageConfig {
        owf: OwfParams::Hash { n: 64, m: 64 },
        adversary: PreimageAdversary::RandomGuess,
        trials: 100_000,
        ..brute
    };
    assert_eq!(other_preimage_game(&guess).unwrap().successes, 0);
}

#[test]
fn invalid_configs_are_rejected() {
    assert!(run_hyb(&toy(honest()).with_trials(0), 0, false).is_err());
    assert!(run_hyb(&toy(honest()), 3, false).is_err());
    let bad = AdversaryStrategy::HadamardRetainer {
        certificate: CertificatePolicy::Fixed {
            value: BitString::zeros(3).unwrap(),
        },
    };
    assert!(run_hyb(&toy(bad), 0, false).is_err());
    let big = ExperimentConfig::hash_owf(32, 32, retainer());
    assert!(matches!(
        run_hyb(&big, 0, false),
        Err(HarnessError::Infeasible(_))
    ));
}

#[test]
fn distributions_use_the_declared_alphabet() {
    let d = run_hyb(&toy(inverter(Retained::Discard)), 0, false).unwrap();
    assert_eq!(d.residual_bits(), 0);
    let expected: BTreeMap<Outcome, ExactProb> =
        [(Outcome::Residual(Transcript::empty()), ExactProb::one())]
            .into_iter()
            .collect();
    assert_eq!(d.weights(), &expected);
}
