use super::*;
use crate::logic::parse_formula;

fn at_least_two() -> (Vocabulary, Dataset) {
    let v = Vocabulary::new(["a", "b", "c"]).unwrap();
    let f = parse_formula("(a&b)|(a&c)|(b&c)", &v).unwrap();
    let d = Dataset::from_formula(&f, &v).unwrap();
    (v, d)
}

/// A 2-2-1 model with every hidden pre-activation away from zero on all
/// four inputs.
fn probe_221() -> AnnModel {
    AnnModel {
        layers: vec![
            Layer {
                inputs: 2,
                outputs: 2,
                weights: vec![0.7, -0.4, 0.3, 0.9],
                bias: vec![0.2, 0.15],
                activation: Activation::Relu,
            },
            Layer {
                inputs: 2,
                outputs: 1,
                weights: vec![1.3, -0.8],
                bias: vec![-0.1],
                activation: Activation::Sigmoid,
            },
        ],
    }
}

fn xor_data() -> Dataset {
    let samples = [(false, false, 0), (true, false, 1), (false, true, 1), (true, true, 0)]
        .into_iter()
        .map(|(a, b, l)| Sample {
            input: vec![a, b],
            label: l,
        })
        .collect();
    Dataset { samples }
}

#[test]
fn init_is_deterministic() {
    let mut cfg = AnnConfig::new(3, vec![100]);
    cfg.seed = 42;
    let a = init_model(&cfg).unwrap();
    let b = init_model(&cfg).unwrap();
    assert_eq!(a, b);
    cfg.seed = 43;
    assert_ne!(a, init_model(&cfg).unwrap());
}

#[test]
fn init_shapes_and_bounds() {
    let m = init_model(&AnnConfig::new(3, vec![100])).unwrap();
    assert_eq!(m.shapes(), vec![(3, 100), (100, 1)]);
    assert_eq!(m.layers[1].activation, Activation::Sigmoid);
    assert!(m.layers[0].weights.iter().all(|w| w.abs() <= 1.0 / 3f64.sqrt()));
    assert!(m.layers.iter().all(|l| l.bias.iter().all(|&b| b == 0.0)));
    let m = init_model(&AnnConfig::new(100, vec![10])).unwrap();
    assert_eq!(m.shapes(), vec![(100, 10), (10, 1)]);
}

#[test]
fn bad_configs() {
    let ok = AnnConfig::new(3, vec![4]);
    let cases = [
        AnnConfig { n: 0, ..ok.clone() },
        AnnConfig { hidden: vec![0], ..ok.clone() },
        AnnConfig { tau: 1.5, ..ok.clone() },
        AnnConfig { lr: -1.0, ..ok.clone() },
        AnnConfig { lr: f64::NAN, ..ok.clone() },
        AnnConfig {
            optimizer: Optimizer::Adam { beta1: 1.0, beta2: 0.999, eps: 1e-8 },
            ..ok.clone()
        },
    ];
    for c in cases {
        assert!(matches!(init_model(&c), Err(AnnError::BadConfig(_))), "{c:?}");
    }
}

#[test]
fn zero_model_outputs_half() {
    let mut m = init_model(&AnnConfig::new(3, vec![5])).unwrap();
    m.set_parameters(&vec![0.0; m.num_parameters()]);
    assert_eq!(m.forward(&[true, false, true]).unwrap(), 0.5);
    assert!(matches!(
        m.forward(&[true]),
        Err(AnnError::DimensionMismatch { expected: 3, got: 1 })
    ));
}

#[test]
fn forward_matches_hand_computation() {
    let m = probe_221();
    for (a, b) in [(0.0, 0.0), (1.0, 0.0), (0.0, 1.0), (1.0, 1.0f64)] {
        let h1 = (0.7 * a - 0.4 * b + 0.2f64).max(0.0);
        let h2 = (0.3 * a + 0.9 * b + 0.15f64).max(0.0);
        let z = 1.3 * h1 - 0.8 * h2 - 0.1;
        let y = 1.0 / (1.0 + (-z).exp());
        let got = m.forward(&[a == 1.0, b == 1.0]).unwrap();
        assert!((got - y).abs() < 1e-15);
    }
}

#[test]
fn binarize_boundary() {
    assert!(binarize(0.5, 0.5));
    assert!(!binarize(0.49, 0.5));
    assert!(binarize(1.0, 0.0));
}

#[test]
fn bce_is_stable() {
    assert!((bce_logit(0.0, 1.0) - std::f64::consts::LN_2).abs() < 1e-15);
    let cap = -(PROB_CLAMP.ln());
    assert!((bce_logit(-1e6, 1.0) - cap).abs() < 1e-6);
    assert!(bce_logit(1e6, 1.0) >= 0.0);
    assert_eq!(bce_logit_grad(1e6, 1.0), 0.0);
}

#[test]
fn gradient_check_probe() {
    let err = gradient_check(&probe_221(), &xor_data());
    assert!(err < 1e-6, "{err}");
}

#[test]
fn gradient_check_seeded_with_offset_biases() {
    let mut cfg = AnnConfig::new(2, vec![2]);
    cfg.seed = 7;
    let mut m = init_model(&cfg).unwrap();
    m.layers[0].bias = vec![0.3, -0.25];
    m.layers[1].bias = vec![0.05];
    assert!(gradient_check(&m, &xor_data()) < 1e-4);
}

#[test]
fn gradient_check_clamped_fit() {
    let mut m = probe_221();
    m.layers[1].bias[0] = 100.0;
    let all_one = Dataset {
        samples: xor_data()
            .samples
            .into_iter()
            .map(|s| Sample { label: 1, ..s })
            .collect(),
    };
    assert!(m.gradient(&all_one).iter().all(|&g| g == 0.0));
    assert!(gradient_check(&m, &all_one) < 1e-6);
}

#[test]
fn loss_does_not_increase_at_small_lr() {
    let (_, d) = at_least_two();
    let cfg = AnnConfig::new(3, vec![100]);
    let mut t = Trainer::new(init_model(&cfg).unwrap(), &d, &cfg).unwrap();
    let mut prev = t.loss();
    for _ in 0..50 {
        t.step();
        let l = t.loss();
        assert!(l >= 0.0 && l <= prev + 1e-12, "{l} > {prev}");
        prev = l;
    }
}

#[test]
fn extraction_matches_direct_enumeration() {
    let v = Vocabulary::new(["a", "b", "c"]).unwrap();
    for seed in 0..5 {
        let mut cfg = AnnConfig::new(3, vec![6]);
        cfg.seed = seed;
        let mut m = init_model(&cfg).unwrap();
        m.layers[1].bias[0] = 0.1 * seed as f64 - 0.2;
        let got = extract_belief_set(&m, &v, 0.5).unwrap();
        for w in 0..8usize {
            // independent evaluation straight from the weights
            let x: Vec<f64> = (0..3).map(|i| (w >> i & 1) as f64).collect();
            let h: Vec<f64> = (0..6)
                .map(|j| {
                    let l = &m.layers[0];
                    (l.bias[j] + (0..3).map(|i| l.weights[j * 3 + i] * x[i]).sum::<f64>()).max(0.0)
                })
                .collect();
            let o = &m.layers[1];
            let z = o.bias[0] + (0..6).map(|j| o.weights[j] * h[j]).sum::<f64>();
            assert_eq!(got.contains(w), 1.0 / (1.0 + (-z).exp()) >= 0.5);
        }
    }
}

#[test]
fn huge_bias_gives_every_world() {
    let v = Vocabulary::new(["a", "b", "c"]).unwrap();
    let mut m = init_model(&AnnConfig::new(3, vec![4])).unwrap();
    m.layers[1].bias[0] = 1e3;
    assert!(extract_belief_set(&m, &v, 0.5).unwrap().is_all());
}

#[test]
fn extraction_errors() {
    let v = Vocabulary::numbered("x", 21).unwrap();
    let m = init_model(&AnnConfig::new(21, vec![2])).unwrap();
    assert!(matches!(extract_belief_set(&m, &v, 0.5), Err(AnnError::UniverseTooLarge(21))));
    let m = init_model(&AnnConfig::new(2, vec![2])).unwrap();
    let u = vec![vec![true, false], vec![false, true], vec![true, false]];
    assert!(matches!(
        extract_belief_set_observed(&m, &u, 0.5),
        Err(AnnError::DuplicateInput { index: 2 })
    ));
    assert!(extract_belief_set_observed(&m, &u[..2], 0.0).unwrap().is_all());
}

#[test]
fn non_binary_labels_rejected() {
    let mut d = xor_data();
    d.samples[1].label = 2;
    let cfg = AnnConfig::new(2, vec![2]);
    let v = Vocabulary::new(["a", "b"]).unwrap();
    let r = train(init_model(&cfg).unwrap(), &d, &cfg, &v, UniverseMode::Full);
    assert!(matches!(r, Err(AnnError::NonBinaryLabel { index: 1, label: 2 })));
}

#[test]
fn zero_lr_gives_one_stage() {
    let (v, d) = at_least_two();
    let mut cfg = AnnConfig::new(3, vec![100]);
    cfg.lr = 0.0;
    cfg.epochs = 20;
    let (_, t) = train(init_model(&cfg).unwrap(), &d, &cfg, &v, UniverseMode::Full).unwrap();
    assert_eq!(t.stages.len(), 1);
    assert_eq!(t.stages[0].step, 0);
    cfg.epochs = 0;
    cfg.lr = 1e-3;
    let (_, t) = train(init_model(&cfg).unwrap(), &d, &cfg, &v, UniverseMode::Full).unwrap();
    assert_eq!(t.stages.len(), 1);
    let a = analyze_trajectory(&t);
    assert!(a.sd.holds && a.db.holds);
}

#[test]
fn training_is_deterministic_and_learns() {
    let (v, d) = at_least_two();
    let mut cfg = AnnConfig::new(3, vec![100]);
    cfg.seed = 3;
    let run = || train(init_model(&cfg).unwrap(), &d, &cfg, &v, UniverseMode::Full).unwrap();
    let (m1, t1) = run();
    let (m2, t2) = run();
    assert_eq!(m1, m2);
    assert_eq!(t1, t2);
    let last = t1.stages.last().unwrap();
    assert_eq!(last.accuracy, Some(1.0));
    assert_eq!(last.belief.iter().collect::<Vec<_>>(), vec![3, 5, 6, 7]);
    assert!(t1.stages.windows(2).all(|w| w[0].step < w[1].step && w[0].belief != w[1].belief));
}

#[test]
fn trajectory_record_round_trip() {
    let (v, d) = at_least_two();
    let mut cfg = AnnConfig::new(3, vec![8]);
    cfg.epochs = 200;
    cfg.lr = 0.05;
    let (_, t) = train(init_model(&cfg).unwrap(), &d, &cfg, &v, UniverseMode::Full).unwrap();
    let json = serde_json::to_string(&t.to_record()).unwrap();
    let back: TrajectoryRecord = serde_json::from_str(&json).unwrap();
    assert_eq!(Trajectory::from_record(&back).unwrap(), t);

    let (_, t) = train(init_model(&cfg).unwrap(), &d, &cfg, &v, UniverseMode::Observed).unwrap();
    let rec = t.to_record();
    assert_eq!(rec.universe.as_ref().unwrap()[1], "100");
    let back = Trajectory::from_record(&rec).unwrap();
    assert_eq!(back.beliefs(), t.beliefs());
}

#[test]
fn oscillating_trajectory_fails_sd() {
    let v = Vocabulary::new(["a", "b"]).unwrap();
    let u = v.full_universe().unwrap();
    let mut t = Trajectory::new(v, u.clone(), Cadence::Step);
    for (step, w) in [(0, 3), (1, 0), (2, 3)] {
        t.record(step, WorldSet::from_indices(&u, [w]), None);
    }
    let a = analyze_trajectory(&t);
    assert_eq!(a.sd.violation, Some((1, 2, 3)));
    assert!(a.da.is_some());
}
