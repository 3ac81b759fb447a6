use hakdyn::cantor::spectral_radius;
use hakdyn::chains::*;
use hakdyn::num::Rational;
use hakdyn::{Error, ExactChain, ExactMap};

fn q(n: i128, d: i128) -> Rational {
    Rational::new(n, d)
}

fn uniform7() -> IntervalChain<Rational> {
    IntervalChain::uniform(7, q(1, 50))
}

/// Flat 0 up to the top of U3, `k` full branches across U4, flat 1 from the bottom of U5.
fn full_branch_map(k: usize) -> ExactMap {
    let (a, b) = (q(3, 7) + q(1, 50), q(4, 7) - q(1, 50));
    let mut pts = vec![(q(0, 1), q(0, 1)), (a, q(0, 1))];
    for i in 1..=k as i128 {
        pts.push((a + (b - a) * q(i, k as i128), q(i % 2, 1)));
    }
    pts.push((q(1, 1), q(1, 1)));
    PLMap::new(pts).unwrap()
}

fn tent() -> ExactMap {
    PLMap::parse("0,0;1/2,1;1,0").unwrap()
}

fn tent_chain() -> IntervalChain<Rational> {
    parse_links("0,1/10; 9/100,49/100; 48/100,52/100; 51/100,74/100; 73/100,77/100; 76/100,91/100; 9/10,1").unwrap()
}

/// Entropy of a Markov PL map from its lap transition matrix.
fn markov_entropy(g: &ExactMap) -> f64 {
    let pts = g.points();
    let xs: Vec<Rational> = pts.iter().map(|p| p.0).collect();
    assert!(pts.iter().all(|(_, y)| xs.contains(y)), "breakpoint values must be breakpoints");
    let laps = pts.len() - 1;
    let a: Vec<Vec<f64>> = (0..laps)
        .map(|i| {
            let img = g.image(&(xs[i], xs[i + 1]));
            (0..laps).map(|j| if img.0 < img.1 && img.0 <= xs[j] && xs[j + 1] <= img.1 { 1.0 } else { 0.0 }).collect()
        })
        .collect();
    spectral_radius(&a).ln()
}

fn kfold_oracle(k: usize) -> Vec<usize> {
    let m = 2 * k + 5;
    let mut v = vec![1, 2, 3, 4, 5];
    let mut up = false;
    let mut cur = 5;
    while v.len() < m - 2 {
        cur = if up { cur + 1 } else { cur - 1 };
        v.push(cur);
        if cur == 3 || cur == 5 {
            up = cur == 3;
        }
    }
    v.extend([6, 7]);
    v
}

#[test]
fn pattern_examples() {
    assert!(Pattern::new(vec![1, 2, 3, 2, 1]).is_ok());
    assert!(matches!(Pattern::new(vec![1, 3]), Err(Error::PatternStep { index: 1 })));
    assert!(Pattern::new(vec![1, 1, 1]).is_ok());
    assert_eq!(kfold(3).unwrap().values(), &[1, 2, 3, 4, 5, 4, 3, 4, 5, 6, 7]);
    let k5 = kfold(5).unwrap();
    assert_eq!(k5.len(), 15);
    assert_eq!(&k5.values()[..5], &[1, 2, 3, 4, 5]);
    assert_eq!(&k5.values()[5..13], &[4, 3, 4, 5, 4, 3, 4, 5]);
    assert!(matches!(kfold(4), Err(Error::Domain(_))));
    assert_eq!(kfold(3).unwrap().to_string(), "1,2,3,4,5,4,3,4,5,6,7");
}

#[test]
fn kfold_properties_for_odd_k() {
    for k in (3..=21).step_by(2) {
        let f = kfold(k).unwrap();
        assert_eq!(f.values(), kfold_oracle(k).as_slice(), "k = {k}");
        assert!(Pattern::new(f.values().to_vec()).is_ok());
        assert_eq!((f.at(1), f.at(2 * k + 4), f.at(2 * k + 5)), (1, 6, 7));
        assert_eq!(f.range(), 7);
        let interior = &f.values()[1..f.len() - 1];
        assert_eq!(interior.iter().filter(|&&v| v == 3).count(), k.div_ceil(2));
        assert_eq!(interior.iter().filter(|&&v| v == 5).count(), k.div_ceil(2));
    }
}

#[test]
fn identity_refinement_is_a_shrunk_copy() {
    let parent = ExactChain::essential(7, q(1, 50)).unwrap();
    let child = refine_chain(&parent, &Pattern::identity(7)).unwrap();
    assert_eq!(child.len(), 7);
    assert!(child.is_closed() && child.is_taut());
    assert!(child.follows(&parent, &Pattern::identity(7)));
}

#[test]
fn iterated_kfold_refinement() {
    let f = kfold(3).unwrap();
    let mut levels = vec![ExactChain::essential(7, q(1, 50)).unwrap()];
    for _ in 0..3 {
        let child = refine_chain(levels.last().unwrap(), &f).unwrap();
        assert_eq!(child.len(), 11);
        assert!(child.is_taut());
        assert!(child.follows(levels.last().unwrap(), &f));
        assert!(child.links()[0].inside(&levels.last().unwrap().links()[0]));
        assert!(child.links()[10].inside(&levels.last().unwrap().links()[6]));
        levels.push(child);
    }
    assert!(levels[1].is_closed());
    assert!(!levels[2].is_closed());
    let sizes: Vec<usize> = levels.iter().map(ExactChain::len).collect();
    assert_eq!(sizes, vec![7, 11, 11, 11]);
}

#[test]
fn refinement_in_floating_point_agrees() {
    let parent = ChainCover::<f64>::essential(7, 0.02).unwrap();
    let f = kfold(3).unwrap();
    let child = refine_chain(&parent, &f).unwrap();
    assert!(child.is_taut() && child.follows(&parent, &f));
}

#[test]
fn refinement_errors() {
    let parent = ExactChain::essential(7, q(1, 50)).unwrap();
    assert!(matches!(refine_chain(&parent, &Pattern::identity(8)), Err(Error::Domain(_))));
    let thin = ExactChain::essential(7, q(1, 100_000_000)).unwrap();
    assert!(matches!(refine_chain(&thin, &kfold(3).unwrap()), Err(Error::Resolution(_))));
}

#[test]
fn taut_check_on_the_annulus() {
    let r = |t0, t1, r0, r1| Rect::new(q(t0, 10), q(t1, 10), q(r0, 10), q(r1, 10));
    let open = ChainCover::new(vec![r(0, 10, 0, 4), r(0, 10, 3, 7), r(0, 10, 6, 9)], false);
    assert!(open.is_ok());
    // the last link wraps onto the first one
    let wrapping = ChainCover::new(vec![r(0, 10, 0, 4), r(0, 10, 3, 7), r(0, 10, 6, 10)], false);
    assert!(matches!(wrapping, Err(Error::NotTaut(_))));
    assert!(ChainCover::new(vec![r(0, 10, 0, 4), r(0, 10, 3, 7), r(0, 10, 6, 10)], true).is_ok());
    assert!(matches!(ExactChain::essential(7, q(1, 10)), Err(Error::NotTaut(_))));
}

#[test]
fn stretch_examples() {
    let uniform = uniform7();
    assert_eq!(
        stretch_check(&full_branch_map(3), &uniform, 1).unwrap(),
        Some(Stretch { m: 1, orientation: Orientation::Direct })
    );
    assert_eq!(stretch_check(&ExactMap::identity(), &uniform, 10).unwrap(), None);
    let shift_like = PLMap::parse("0,1/3;2/3,1;1,1/3").unwrap();
    assert_eq!(stretch_check(&shift_like, &uniform, 20).unwrap(), None);
    assert_eq!(stretch_check(&tent(), &uniform, 5).unwrap(), None);
    assert_eq!(stretch_check(&tent(), &tent_chain(), 5).unwrap().map(|s| s.m), Some(2));
    let flip = PLMap::parse("0,1;3/7,1;4/7,0;1,0").unwrap();
    assert_eq!(stretch_check(&flip, &uniform, 1).unwrap().map(|s| s.orientation), Some(Orientation::Reversed));
    let not_taut = IntervalChain::uniform(7, q(1, 5));
    assert!(matches!(stretch_check(&tent(), &not_taut, 1), Err(Error::NotTaut(_))));
    let short = IntervalChain::uniform(5, q(1, 50));
    assert!(matches!(stretch_check(&tent(), &short, 1), Err(Error::NotTaut(_))));
}

#[test]
fn three_branch_certificate() {
    let g = full_branch_map(3);
    let cert = horseshoe_extract(&g, &uniform7(), 3, 5, 4).unwrap();
    assert_eq!(cert.m, 1);
    assert_eq!(cert.words.len(), 729);
    assert_eq!(cert.nonempty_count(), 729);
    assert!(cert.words.windows(2).all(|w| w[0].0 < w[1].0));
    assert!(cert.passes.windows(2).all(|w| w[0].1 < w[1].0));
    let oracle = markov_entropy(&g);
    assert!((cert.bound() - 3f64.ln()).abs() < 1e-12);
    assert!((cert.bound() - oracle).abs() < 1e-9, "oracle {oracle}");
}

#[test]
fn five_branch_certificate() {
    let g = full_branch_map(5);
    let cert = horseshoe_extract(&g, &uniform7(), 5, 4, 4).unwrap();
    assert_eq!(cert.nonempty_count(), 5usize.pow(5));
    assert!((cert.bound() - markov_entropy(&g)).abs() < 1e-9);
    let k3 = horseshoe_extract(&g, &uniform7(), 3, 3, 4).unwrap();
    assert!(k3.bound() <= markov_entropy(&g) + 1e-9);
}

#[test]
fn tent_certificate_fails_with_named_branch() {
    match horseshoe_extract(&tent(), &tent_chain(), 3, 5, 4) {
        Err(Error::EmptyBranch { word }) => assert_eq!(word, vec![1, 1]),
        other => panic!("expected an empty branch, got {other:?}"),
    }
    assert!((markov_entropy(&tent()) - 2f64.ln()).abs() < 1e-9);
}

#[test]
fn horseshoe_preconditions() {
    assert!(matches!(horseshoe_extract(&ExactMap::identity(), &uniform7(), 3, 2, 3), Err(Error::Precondition(_))));
    assert!(matches!(horseshoe_extract(&full_branch_map(3), &uniform7(), 4, 2, 3), Err(Error::Domain(_))));
}

#[test]
fn link_lists_parse() {
    assert_eq!(tent_chain().links()[2], (q(12, 25), q(13, 25)));
    assert!(matches!(parse_links("0,1/2; 1/3"), Err(Error::Config(_))));
    assert!(matches!(parse_links("0,x"), Err(Error::Config(_))));
    assert!(matches!(PLMap::parse("0,0;1,2"), Err(Error::Config(_))));
}

#[test]
fn rendering_structure() {
    let style = RenderStyle::default();
    let parent = ExactChain::essential(7, q(1, 50)).unwrap();
    let one = render_chains(std::slice::from_ref(&parent), &style);
    assert_eq!(one.matches("<polygon").count(), 7);
    let f = kfold(3).unwrap();
    let l1 = refine_chain(&parent, &f).unwrap();
    let l2 = refine_chain(&l1, &f).unwrap();
    let doc = render_chains(&[parent, l1, l2], &style);
    let counts: Vec<usize> = doc.split("<g id=").skip(1).map(|layer| layer.matches("<polygon").count()).collect();
    assert_eq!(counts, vec![7, 11, 11]);
    assert!(doc.contains(r#"id="level-2-link-11""#));
    let again = render_chains(&[ExactChain::essential(7, q(1, 50)).unwrap()], &style);
    assert_eq!(again, one);
    let empty = render_chains::<Rational>(&[], &style);
    assert!(empty.starts_with("<svg") && empty.trim_end().ends_with("</svg>"));
    assert_eq!(empty.matches("<polygon").count(), 0);
}
