use hakdyn::cantor::*;
use hakdyn::Error;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn systems() -> Vec<CantorSystem> {
    vec![
        CantorSystem::full_shift(2).unwrap(),
        CantorSystem::full_shift(3).unwrap(),
        CantorSystem::golden_mean(),
        CantorSystem::sft(Adjacency::parse("1,1,0;0,1,1;1,0,1").unwrap()).unwrap(),
        CantorSystem::thue_morse(),
        CantorSystem::odometer(vec![2, 3, 2]).unwrap(),
    ]
}

/// Point `...000.1000...` of the full 2-shift with window radius `w`.
fn single_one(w: usize) -> SymbolSequence {
    let mut window = vec![0; 2 * w + 1];
    window[w] = 1;
    SymbolSequence::periodic(window, vec![0], vec![0], 2)
}

#[test]
fn shift_examples() {
    let fs2 = CantorSystem::full_shift(2).unwrap();
    let c = single_one(8);
    let h = fs2.shift_forward(&c).unwrap();
    assert_eq!(h.symbol(-1), Some(1));
    assert_eq!(h.symbol(0), Some(0));
    assert!((-8..=8).filter(|&i| i != -1).all(|i| h.symbol(i) == Some(0)));

    let od = CantorSystem::odometer(vec![2, 2, 2]).unwrap();
    let x = SymbolSequence::digits(vec![1, 1, 1], vec![2, 2, 2]);
    assert_eq!(od.shift_forward(&x).unwrap().window(), vec![0, 0, 0]);
    let od23 = CantorSystem::odometer(vec![2, 3]).unwrap();
    let y = SymbolSequence::digits(vec![1, 2], vec![2, 3]);
    assert_eq!(od23.shift_forward(&y).unwrap().window(), vec![0, 0]);
    let od22 = CantorSystem::odometer(vec![2, 2]).unwrap();
    let z = SymbolSequence::digits(vec![0, 0], vec![2, 2]);
    assert_eq!(od22.shift_backward(&z).unwrap().window(), vec![1, 1]);

    let gm = CantorSystem::golden_mean();
    let p = gm.random_point(5, 16);
    let back = gm.shift_backward(&p).unwrap();
    assert!(gm.validate_point(&back).is_ok());
    assert!(back.window().windows(2).all(|w| !(w[0] == 1 && w[1] == 1)));
}

#[test]
fn inadmissible_points_are_rejected() {
    let gm = CantorSystem::golden_mean();
    let bad = SymbolSequence::periodic(vec![0, 1, 1, 0, 0], vec![0], vec![0], 2);
    assert!(matches!(gm.shift_forward(&bad), Err(Error::InvalidPoint(_))));
    let fs2 = CantorSystem::full_shift(2).unwrap();
    let big = SymbolSequence::periodic(vec![0, 2, 0], vec![0], vec![0], 2);
    assert!(matches!(fs2.shift_forward(&big), Err(Error::InvalidPoint(_))));
}

#[test]
fn forward_backward_round_trip_on_1000_points() {
    for (s, sys) in systems().iter().enumerate() {
        let per = if s == 0 { 1000 } else { 1000 / 5 };
        for seed in 0..per as u64 {
            let c = sys.random_point(seed, 12);
            let f = sys.shift_forward(&c).unwrap();
            let b = sys.shift_backward(&f).unwrap();
            let (lo, hi) = c.index_range();
            for i in lo + 1..hi {
                assert_eq!(b.symbol(i), c.symbol(i), "{} seed {seed} index {i}", sys.label());
            }
            assert!(b.extension_consistent());
        }
    }
}

#[test]
fn metric_examples_and_ultrametric() {
    let a = single_one(8);
    assert_eq!(cantor_metric(&a, &a, 8), 0.0);
    let zero = SymbolSequence::periodic(vec![0; 17], vec![0], vec![0], 2);
    assert_eq!(cantor_metric(&a, &zero, 8), 1.0);
    let mut w = vec![0; 17];
    w[8 + 3] = 1;
    let b = SymbolSequence::periodic(w, vec![0], vec![0], 2);
    assert_eq!(cantor_metric(&b, &zero, 8), 0.125);

    for sys in systems() {
        let pts: Vec<SymbolSequence> = (0..30).map(|s| sys.random_point(s, 10)).collect();
        for x in &pts {
            for y in &pts {
                let dxy = cantor_metric(x, y, 10);
                assert_eq!(dxy, cantor_metric(y, x, 10));
                for z in pts.iter().take(10) {
                    assert!(dxy <= cantor_metric(x, z, 10).max(cantor_metric(z, y, 10)));
                }
            }
        }
    }
}

#[test]
fn entropy_examples() {
    assert_eq!(entropy_exact(&CantorSystem::full_shift(2).unwrap()).value, 2f64.ln());
    for k in 2..=6 {
        assert_eq!(entropy_exact(&CantorSystem::full_shift(k).unwrap()).value, (k as f64).ln());
    }
    let golden = ((1.0 + 5f64.sqrt()) / 2.0).ln();
    let gm = entropy_exact(&CantorSystem::golden_mean());
    assert!((gm.value - golden).abs() < 1e-9 && !gm.reducible);
    assert!((gm.value - 0.481212).abs() < 1e-6);
    assert_eq!(entropy_exact(&CantorSystem::odometer(vec![2, 3, 2]).unwrap()).value, 0.0);
    assert_eq!(entropy_exact(&CantorSystem::thue_morse()).value, 0.0);
    let reducible = CantorSystem::sft(Adjacency::parse("1,1;0,1").unwrap()).unwrap();
    let e = entropy_exact(&reducible);
    assert!(e.reducible && e.value.abs() < 1e-3);
}

/// Number of admissible words of length `n`, by dynamic programming.
fn word_count(adj: &Adjacency, n: usize) -> f64 {
    let k = adj.size();
    let mut ends = vec![1.0; k];
    for _ in 1..n {
        ends =
            (0..k).map(|b| (0..k).filter(|&a| adj.allows(a as Symbol, b as Symbol)).map(|a| ends[a]).sum()).collect();
    }
    ends.iter().sum()
}

fn random_irreducible(rng: &mut ChaCha8Rng) -> Adjacency {
    loop {
        let k = rng.gen_range(2..=4);
        let rows: Vec<Vec<bool>> = (0..k).map(|_| (0..k).map(|_| rng.gen_bool(0.6)).collect()).collect();
        if let Ok(adj) = Adjacency::new(rows) {
            if adj.is_irreducible() {
                return adj;
            }
        }
    }
}

#[test]
fn sft_entropy_matches_word_growth() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    let n = 14;
    let mut literal_misses = 0;
    for _ in 0..40 {
        let adj = random_irreducible(&mut rng);
        let sys = CantorSystem::sft(adj.clone()).unwrap();
        let h = entropy_exact(&sys).value;
        assert!(h >= 0.0);
        assert_eq!(sys.language(6, 1 << 16).unwrap().len() as f64, word_count(&adj, 6));
        let literal = word_count(&adj, n).ln() / n as f64;
        if (literal - h).abs() > 0.02 {
            literal_misses += 1;
        }
        let differenced = (word_count(&adj, 2 * n) / word_count(&adj, n)).ln() / n as f64;
        assert!((differenced - h).abs() <= 0.02, "{adj:?}: growth {differenced} vs entropy {h}");
    }
    println!("literal (1/n) ln N_n misses the 0.02 band on {literal_misses} of 40 matrices");
    for sys in [CantorSystem::golden_mean(), CantorSystem::full_shift(3).unwrap()] {
        let count = sys.language(n, 1 << 23).unwrap().len() as f64;
        assert!((count.ln() / n as f64 - entropy_exact(&sys).value).abs() <= 0.02);
    }
}

#[test]
fn literal_word_growth_overshoots_by_a_boundary_constant() {
    let adj = Adjacency::parse("1,1,0,1;0,0,0,1;1,0,1,0;1,0,1,0").unwrap();
    let h = entropy_exact(&CantorSystem::sft(adj.clone()).unwrap()).value;
    let literal = word_count(&adj, 14).ln() / 14.0;
    assert!(literal - h > 0.02);
    let constant = word_count(&adj, 14).ln() - 14.0 * h;
    let constant_later = word_count(&adj, 28).ln() - 28.0 * h;
    assert!((constant - constant_later).abs() < 0.05);
}

#[test]
fn random_points_are_deterministic_and_admissible() {
    for sys in systems() {
        assert_eq!(sys.random_point(3, 8), sys.random_point(3, 8));
    }
    let fs2 = CantorSystem::full_shift(2).unwrap();
    assert_eq!(fs2.random_point(1, 8).window().len(), 17);
    let gm = CantorSystem::golden_mean();
    for seed in 0..50 {
        let p = gm.random_point(seed, 20);
        assert!(p.window().windows(2).all(|w| w != [1, 1]));
    }
}

#[test]
fn odometer_period_is_the_product_of_bases() {
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    let mut cases: Vec<Vec<u32>> = vec![vec![2, 2, 2], vec![2, 3, 2], vec![10, 10, 10, 10], vec![7, 11, 13]];
    for _ in 0..20 {
        let len = rng.gen_range(1..=5);
        let bases: Vec<u32> = (0..len).map(|_| rng.gen_range(2..=9)).collect();
        if bases.iter().product::<u32>() <= 10_000 {
            cases.push(bases);
        }
    }
    for bases in cases {
        let total: u32 = bases.iter().product();
        let sys = CantorSystem::odometer(bases.clone()).unwrap();
        let zero = SymbolSequence::digits(vec![0; bases.len()], bases.clone());
        let mut x = zero.clone();
        for step in 1..=total {
            x = sys.shift_forward(&x).unwrap();
            assert_eq!(x == zero, step == total, "bases {bases:?} step {step}");
        }
    }
}

#[test]
fn recurrence_profiles() {
    let fs2 = CantorSystem::full_shift(2).unwrap();
    let w = 8;
    let mut window = vec![0; 2 * w + 1];
    let period = [0u8, 0, 1, 1];
    for (i, s) in window.iter_mut().enumerate() {
        *s = period[i % 4];
    }
    let c = SymbolSequence::periodic(window, vec![1, 1, 0, 0], vec![1, 0, 0, 1], 2);
    let profile = recurrence_profile(&fs2, &c, 2, 32).unwrap();
    assert_eq!(profile.len(), 4);
    assert!(profile.values().all(Gap::is_finite));

    let od = CantorSystem::odometer(vec![2, 3, 2]).unwrap();
    let zero = SymbolSequence::digits(vec![0, 0, 0], vec![2, 3, 2]);
    let profile = recurrence_profile(&od, &zero, 3, 48).unwrap();
    assert_eq!(profile.len(), 12);
    assert!(profile.values().all(|g| matches!(g, Gap::Finite(n) if *n <= 12)));

    let constant = SymbolSequence::periodic(vec![0; 17], vec![0], vec![0], 2);
    let profile = recurrence_profile(&fs2, &constant, 3, 50).unwrap();
    assert_eq!(profile.values().filter(|g| g.is_finite()).count(), 1);
}

#[test]
fn symbolic_mixing_witnesses() {
    let fs2 = CantorSystem::full_shift(2).unwrap();
    assert_eq!(mixing_witness_symbolic(&fs2, &[0], &[1], 10), Some(1));
    assert_eq!(mixing_witness_symbolic(&CantorSystem::golden_mean(), &[1], &[1], 10), Some(2));
    let tm = CantorSystem::thue_morse();
    let n = mixing_witness_symbolic(&tm, &[0, 0], &[1, 1], 32);
    assert!(matches!(n, Some(n) if n <= 32));
    assert!(tm.admits(&[0, 1, 1, 0, 1, 0, 0, 1]));
    assert!(!tm.admits(&[0, 0, 0]));
}

#[test]
fn system_validation() {
    assert!(matches!(Adjacency::parse("1,0;1,0"), Err(Error::Config(_))));
    assert!(CantorSystem::full_shift(1).is_err());
    assert!(CantorSystem::odometer(vec![2, 1]).is_err());
    assert!(CantorSystem::odometer(vec![]).is_err());
    assert!(CantorSystem::substitution(CantorSystem::parse_rules("0:00;1:11").unwrap()).is_err());
    assert!(CantorSystem::substitution(CantorSystem::parse_rules("0:01;1:10").unwrap()).is_ok());
}

#[test]
fn agreement_radius_halves() {
    assert_eq!(agreement_radius(1.0 / 16.0), 4);
    for e in [0.3, 0.1, 0.05, 1.0 / 16.0, 0.01] {
        assert_eq!(agreement_radius(e / 2.0), agreement_radius(e) + 1);
    }
}

mod properties {
    use super::*;
    use proptest::prelude::*;

    proptest! {
        #[test]
        fn odometer_steps_invert(digits in proptest::collection::vec(0u8..6, 1..6), n in -50i64..50) {
            let bases: Vec<u32> = digits.iter().map(|&d| d as u32 + 2).collect();
            let sys = CantorSystem::odometer(bases.clone()).unwrap();
            let x = SymbolSequence::digits(digits.clone(), bases);
            prop_assert_eq!(sys.iterate(&sys.iterate(&x, n), -n), x);
        }

        #[test]
        fn shift_metric_is_an_ultrametric(a in 0u64..500, b in 0u64..500, c in 0u64..500) {
            let sys = CantorSystem::golden_mean();
            let (x, y, z) = (sys.random_point(a, 10), sys.random_point(b, 10), sys.random_point(c, 10));
            let dxy = cantor_metric(&x, &y, 10);
            prop_assert_eq!(dxy, cantor_metric(&y, &x, 10));
            prop_assert!(dxy <= cantor_metric(&x, &z, 10).max(cantor_metric(&z, &y, 10)));
        }
    }
}
