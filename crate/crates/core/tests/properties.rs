use proptest::prelude::*;
use qmem_core::channels::{Instrument, Povm};
use qmem_core::games::{strategy_correlation, OutcomeTensor, Strategy};
use qmem_core::operator::frobenius_norm;
use qmem_core::random::Sampler;
use qmem_core::*;

fn phi_witness(d: usize) -> Witness {
    let w = max_entangled(d).hermitian().shifted(-1.0 / d as f64);
    Witness::new(w, BipartiteDims::new(d, d).unwrap()).unwrap()
}

#[test]
fn witness_is_nonpositive_on_separable_states() {
    let mut s = Sampler::seeded(101);
    for (da, db) in [(2, 2), (2, 3), (3, 3)] {
        let choi = kraus_to_choi(&s.channel(da, db, 1));
        let w = build_witness(&choi).unwrap();
        assert!(w.value(choi.hermitian()) > 0.0);
        let worst = (0..300)
            .map(|_| w.value(s.separable_state(da, db, 3).hermitian()))
            .fold(f64::NEG_INFINITY, f64::max);
        assert!(worst <= 1e-9, "({da},{db}) worst {worst}");
    }
}

#[test]
fn sparse_decomposition_bound_on_random_witnesses() {
    let mut s = Sampler::seeded(202);
    for (dx, dy) in [(2, 2), (3, 3), (2, 3), (3, 2)] {
        for _ in 0..25 {
            let w = Witness::new(s.hermitian(dx * dy), BipartiteDims::new(dx, dy).unwrap()).unwrap();
            let dec = sparse_decompose(&w).unwrap();
            let d = dx.min(dy);
            assert!(dec.nonzero_count() <= d * d + 3);
            assert!(dec.residual(&w) <= 1e-9);
        }
    }
}

#[test]
fn tomographic_decomposition_of_random_witness() {
    let mut s = Sampler::seeded(303);
    let sig = signature_scenario(3, 2);
    let w = Witness::new(s.hermitian(6), BipartiteDims::new(3, 2).unwrap()).unwrap();
    let dec = tomographic_decompose(&w, sig.scenario().inputs_x(), sig.scenario().inputs_y()).unwrap();
    assert!(dec.residual(&w) <= 1e-9);
}

#[test]
fn witness_games_score_trace_on_source_channel() {
    let mut s = Sampler::seeded(404);
    for (da, db) in [(2, 2), (2, 3), (3, 2)] {
        let channel = s.channel(da, db, 1);
        let choi = kraus_to_choi(&channel);
        let report = ppt_check(&choi);
        if report.verdict != PptVerdict::QuantumDomainCertified {
            continue;
        }
        let w = build_witness(&choi).unwrap();
        let expected = w.value(choi.hermitian());
        assert!((expected + report.min_eigenvalue).abs() < 1e-9);
        let game = game_from_witness(&sparse_decompose(&w).unwrap(), db * db).unwrap();
        let p = signature_correlation(&channel, game.scenario()).unwrap();
        assert!((expected_payoff(&game, &p).unwrap() - expected).abs() < 1e-9);
    }
}

#[test]
fn eb_adversaries_do_not_score() {
    let mut s = Sampler::seeded(505);
    let game = game_from_witness(&sparse_decompose(&phi_witness(2)).unwrap(), 4).unwrap();
    for _ in 0..200 {
        let n = 2 + s.index(3);
        let first = s.povm(2, n);
        let responses: Vec<Povm> = (0..n).map(|_| s.povm(2, 4)).collect();
        let p = eb_strategy_correlation(game.scenario(), &first, &responses).unwrap();
        assert!(expected_payoff(&game, &p).unwrap() <= 1e-9);
    }
    for _ in 0..50 {
        let channel = s.measure_and_prepare(2, 2, 3);
        let p = signature_correlation(&channel, game.scenario()).unwrap();
        assert!(expected_payoff(&game, &p).unwrap() <= 1e-9);
    }
}

#[test]
fn composed_strategies_reproduce_transformed_channels() {
    let mut s = Sampler::seeded(606);
    for _ in 0..10 {
        let channel = s.channel(2, 3, 2);
        let map = s.supermap(2, 2, 3, 2, 2);
        let transformed = apply_supermap(&map, &channel).unwrap();
        let scenario = signature_scenario(2, 2);
        let strategy = Strategy::new(
            s.instrument(2, 2, 2, 1),
            vec![s.povm(4, 4), s.povm(4, 4)],
        )
        .unwrap();
        let direct = strategy_correlation(&transformed, scenario.scenario(), &strategy).unwrap();
        let composed = strategy.through_supermap(&map).unwrap();
        let via = strategy_correlation(&channel, scenario.scenario(), &composed).unwrap();
        assert!(direct.max_difference(&via).unwrap() <= 1e-9);
    }
}

#[test]
fn mixed_strategies_mix_correlations() {
    let mut s = Sampler::seeded(707);
    let channel = s.channel(2, 2, 2);
    let sig = signature_scenario(2, 2);
    let a = Strategy::new(s.instrument(2, 2, 1, 2), vec![s.povm(4, 4)]).unwrap();
    let b = Strategy::new(s.instrument(2, 2, 1, 2), vec![s.povm(4, 4)]).unwrap();
    let mixed_instrument: Instrument = a.instrument().mix(b.instrument(), 0.3).unwrap();
    let responses = vec![a.responses()[0].clone(), b.responses()[0].clone()];
    let mixed = admissible_correlation(&channel, sig.scenario(), &mixed_instrument, &responses).unwrap();
    let pa = strategy_correlation(&channel, sig.scenario(), &a).unwrap();
    let pb = strategy_correlation(&channel, sig.scenario(), &b).unwrap();
    assert!(mixed.max_difference(&pa.mix(&pb, 0.3).unwrap()).unwrap() <= 1e-9);
}

#[test]
fn tomography_round_trip_random_channels() {
    let mut s = Sampler::seeded(808);
    for d in [2, 3] {
        let sig = signature_scenario(d, d);
        for _ in 0..10 {
            let rank = 1 + s.index(d * d);
            let channel = s.channel(d, d, rank);
            let j = reconstruct_choi(&signature_correlation(&channel, &sig).unwrap(), &sig).unwrap();
            assert!(frobenius_norm(&(j.matrix() - kraus_to_choi(&channel).matrix())) <= 1e-9);
        }
    }
}

#[test]
fn lossy_data_is_conditioned_before_tomography() {
    let channel = depolarizing_channel(0.6).unwrap();
    let sig = signature_scenario(2, 2);
    let p = signature_correlation(&channel, &sig).unwrap();
    let game = game_from_witness(&sparse_decompose(&phi_witness(2)).unwrap(), 4).unwrap();
    let zero = Payoff::new(OutcomeTensor::zeros(1, 4, 4, 4)).unwrap();
    let trivial = Game::new(sig.scenario().clone(), zero, 0.0).unwrap();
    let (_, lossy) = loss_extend(&trivial, &p, 0.25).unwrap();
    let j = reconstruct_choi(&lossy, &sig).unwrap();
    assert!(frobenius_norm(&(j.matrix() - kraus_to_choi(&channel).matrix())) <= 1e-9);
    assert_eq!(game.eb_threshold(), 0.0);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn depolarizing_partial_transpose_minimum(nu in 0.0f64..=1.0) {
        let report = ppt_check(&kraus_to_choi(&depolarizing_channel(nu).unwrap()));
        prop_assert!((report.min_eigenvalue - (1.0 - 3.0 * nu) / 4.0).abs() <= 1e-10);
        let expected = if nu > 1.0 / 3.0 + 4e-9 { PptVerdict::QuantumDomainCertified } else { PptVerdict::EbCompatible };
        if (nu - 1.0 / 3.0).abs() > 4e-9 {
            prop_assert_eq!(report.verdict, expected);
        }
    }

    #[test]
    fn loss_scaling_is_exact(nu in 0.0f64..=1.0, eta in 0.01f64..=1.0) {
        let sig = signature_scenario(2, 2);
        let game = game_from_witness(&sparse_decompose(&phi_witness(2)).unwrap(), 4).unwrap();
        let p = signature_correlation(&depolarizing_channel(nu).unwrap(), game.scenario()).unwrap();
        let (g2, p2) = loss_extend(&game, &p, eta).unwrap();
        let before = expected_payoff(&game, &p).unwrap();
        prop_assert!((expected_payoff(&g2, &p2).unwrap() - eta * before).abs() <= 1e-12);
        prop_assert!((before - (3.0 * nu - 1.0) / 4.0).abs() <= 1e-9);
        prop_assert_eq!(sig.scenario().outcome_count(), 4);
    }

    #[test]
    fn kraus_choi_round_trip(seed in any::<u64>(), d in 2usize..=3, r in 1usize..=4) {
        let mut s = Sampler::seeded(seed);
        let channel = s.channel(d, d, r);
        let choi = kraus_to_choi(&channel);
        let back = kraus_to_choi(&choi_to_kraus(&choi).unwrap());
        prop_assert!(frobenius_norm(&(back.matrix() - choi.matrix())) <= 1e-9);
    }
}
