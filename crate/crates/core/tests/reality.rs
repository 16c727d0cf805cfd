use orthoreal::algebra::{Field, Fq, FqMatrix};
use orthoreal::constructions;
use orthoreal::decomp;
use orthoreal::forms::{FormType, QuadSpace};
use orthoreal::group::MatrixGroup;
use orthoreal::ogroup::{self, GroupKind};
use orthoreal::reality::{self, GroupSpec, SearchOptions};
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn opts() -> SearchOptions {
    SearchOptions::default()
}

/// Dimension of {X : Xg = s·g⁻¹X} from the Kronecker form
/// (gᵀ ⊗ I − s·I ⊗ g⁻¹) vec(X) = 0, vec stacking columns.
fn kronecker_nullity(f: &Field, g: &FqMatrix, sign: i32) -> usize {
    let n = g.rows();
    let ginv = g.inverse(f).unwrap();
    let s = if sign > 0 { Fq::ONE } else { f.neg(Fq::ONE) };
    let mut m = FqMatrix::zeros(n * n, n * n);
    for a in 0..n {
        for b in 0..n {
            for c in 0..n {
                for d in 0..n {
                    let row = a * n + c;
                    let col = b * n + d;
                    let mut v = Fq::ZERO;
                    if c == d {
                        v = f.add(v, g[(b, a)]);
                    }
                    if a == b {
                        v = f.sub(v, f.mul(s, ginv[(c, d)]));
                    }
                    m[(row, col)] = v;
                }
            }
        }
    }
    n * n - m.rank(f)
}

fn check_twisted(f: &Field, g: &FqMatrix, sign: i32) {
    let tc = reality::twisted_centralizer(f, g, sign).unwrap();
    assert_eq!(tc.dim(), kronecker_nullity(f, g, sign));
    let ginv = g.inverse(f).unwrap();
    let target = if sign > 0 { ginv } else { ginv.neg(f) };
    for x in &tc.basis {
        assert_eq!(x.mul(g, f), target.mul(x, f));
    }
}

#[test]
fn twisted_centralizer_matches_kronecker_system() {
    let f = Field::new(3).unwrap();
    let h = constructions::h_matrix(&f);
    check_twisted(&f, &h, 1);
    check_twisted(&f, &h, -1);
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    for (q, n) in [(3u64, 4usize), (5, 3), (4, 4), (9, 2)] {
        let f = Field::new(q).unwrap();
        let space = QuadSpace::standard(&f, n, FormType::Split).unwrap();
        for _ in 0..20 {
            let g = ogroup::random_element(&space, GroupKind::O, &mut rng).unwrap();
            check_twisted(&f, &g, 1);
            check_twisted(&f, &g, -1);
        }
    }
}

#[test]
fn disjoint_spectra_give_zero_space() {
    let f = Field::new(3).unwrap();
    let u = constructions::u_matrix(&f);
    assert_eq!(reality::twisted_centralizer(&f, &u, -1).unwrap().dim(), 0);
    // divisors (t−1)², t+1: g and −g⁻¹ share both eigenvalues
    let g = FqMatrix::from_ints(&f, 3, 3, &[1, 1, 0, 0, 1, 0, 0, 0, -1]);
    assert_eq!(reality::twisted_centralizer(&f, &g, -1).unwrap().dim(), 2);
    assert_eq!(kronecker_nullity(&f, &g, -1), 2);
}

#[test]
fn certificates_verify() {
    let mut rng = ChaCha8Rng::seed_from_u64(17);
    let cases = [
        (3u64, 6usize, FormType::NonSplit, GroupKind::Omega),
        (3, 6, FormType::Split, GroupKind::POmega),
        (5, 4, FormType::NonSplit, GroupKind::K),
        (3, 5, FormType::Split, GroupKind::T),
        (2, 6, FormType::NonSplit, GroupKind::Omega),
        (4, 4, FormType::Split, GroupKind::O),
    ];
    for (q, n, ty, kind) in cases {
        let spec = GroupSpec::standard(q, n, ty, kind).unwrap();
        for _ in 0..40 {
            let g = ogroup::random_element(&spec.space, kind, &mut rng).unwrap();
            let v = reality::decide_reality(&spec, &g, false, &opts()).unwrap();
            assert!(v.verify(&spec, &g).unwrap(), "{}", spec.label());
            assert!(!v.is_strongly_real || v.is_real);
        }
    }
}

#[test]
fn parallel_search_agrees_with_sequential() {
    let mut rng = ChaCha8Rng::seed_from_u64(23);
    let spec = GroupSpec::standard(3, 6, FormType::NonSplit, GroupKind::POmega).unwrap();
    let par = SearchOptions { threads: 4, ..opts() };
    for _ in 0..30 {
        let g = ogroup::random_element(&spec.space, GroupKind::Omega, &mut rng).unwrap();
        let a = reality::decide_reality(&spec, &g, true, &opts()).unwrap();
        let b = reality::decide_reality(&spec, &g, true, &par).unwrap();
        assert_eq!((a.is_real, a.is_strongly_real), (b.is_real, b.is_strongly_real));
        assert!(b.verify(&spec, &g).unwrap());
    }
    let h = constructions::build_h(3, &opts()).unwrap();
    let spec = GroupSpec::new(h.space.clone(), GroupKind::POmega).unwrap();
    let v = reality::decide_reality(&spec, &h.matrix, true, &par).unwrap();
    assert!(v.is_weakly_real());
}

#[test]
fn orthogonal_group_census_is_strongly_real() {
    let spec = GroupSpec::standard(3, 4, FormType::Split, GroupKind::O).unwrap();
    let r = reality::census(&spec, 1 << 20, &opts()).unwrap();
    assert_eq!(r.order, 1152);
    assert!(r.is_strongly_real_group());
    assert!(r.checks_hold() && !r.checks.is_empty());
}

/// Group-level oracle: real when some group element inverts g, strongly
/// real when an element with x² = 1 does.
fn brute_reality(group: &MatrixGroup, g: &FqMatrix) -> (bool, bool) {
    let f = group.field();
    let ginv = g.inverse(f).unwrap();
    let mut real = false;
    for x in group.elements() {
        if x.mul(g, f) == ginv.mul(x, f) {
            real = true;
            if x.mul(x, f).is_identity() {
                return (true, true);
            }
        }
    }
    (real, false)
}

/// Census of Ω(6,2); returns the classes where the literal criterion
/// disagrees with the search.
fn char_two_census(ty: FormType, order: usize) -> Vec<reality::ClassInfo> {
    let spec = GroupSpec::standard(2, 6, ty, GroupKind::Omega).unwrap();
    let r = reality::census(&spec, 1 << 20, &opts()).unwrap();
    assert_eq!(r.order, order);
    let holds = |name: &str| r.checks.iter().find(|c| c.name == name).unwrap().holds;
    assert!(holds("char-2 real classes strongly real"));
    assert!(holds("char-2 criterion on real classes"));
    assert_eq!(r.real_classes, r.strongly_real_classes);
    let group = ogroup::enumerate(&spec.space, GroupKind::Omega, 1 << 20).unwrap();
    let f = spec.field().clone();
    for c in &r.classes {
        assert_eq!(brute_reality(&group, &c.representative), (c.real, c.strongly_real));
        // an involution of O outside Ω inverts every element
        let mut twist = false;
        reality::for_each_inverting_isometry(&spec.space, &c.representative, 1, u64::MAX, |x| {
            twist = x.mul(x, &f).is_identity() && !ogroup::member(&spec.space, x, GroupKind::Omega)?;
            Ok(twist)
        })
        .unwrap();
        assert!(twist);
    }
    assert_eq!(r.classes.iter().map(|c| c.size).sum::<usize>(), order);
    let bad: Vec<reality::ClassInfo> = r
        .classes
        .into_iter()
        .filter(|c| {
            let d = decomp::decompose(&spec.space, &c.representative).unwrap();
            decomp::strongly_real_sufficient(&d, &spec.space).unwrap().verdict != Some(c.strongly_real)
        })
        .collect();
    assert_eq!(holds("char-2 criterion"), bad.is_empty());
    bad
}

#[test]
fn omega_minus_6_2_census() {
    assert!(char_two_census(FormType::NonSplit, 25920).is_empty());
}

/// Ω⁺(6,2) ≅ A8: the elements of order 7 (7-cycles) are not real, yet have
/// no self-reciprocal divisor, so the criterion alone calls them strongly real.
#[test]
fn omega_plus_6_2_census() {
    let bad = char_two_census(FormType::Split, 20160);
    assert_eq!(bad.len(), 2);
    for c in bad {
        assert!(!c.real);
        assert_eq!(c.element_order, 7);
        assert_eq!(c.size, 2880);
    }
}

fn has_outer_inverting_involution(space: &QuadSpace, g: &FqMatrix) -> bool {
    let f = space.field();
    let mut found = false;
    reality::for_each_inverting_isometry(space, g, 1, 50_000_000, |x| {
        found = x.mul(x, f).is_identity() && !ogroup::member(space, x, GroupKind::Omega)?;
        Ok(found)
    })
    .unwrap();
    found
}

/// Single-divisor elements of Ω(4,2) and Ω(8,2): none of the sampled ones
/// has an inverting involution outside Ω. At n = 4 the search is checked
/// against all of O.
#[test]
fn cyclic_elements_and_outer_inverting_involutions() {
    let mut rng = ChaCha8Rng::seed_from_u64(29);
    let mut seen = 0;
    for n in [4usize, 8] {
        for ty in [FormType::Split, FormType::NonSplit] {
            let space = QuadSpace::standard(&Field::new(2).unwrap(), n, ty).unwrap();
            let f = space.field().clone();
            let all = (n == 4).then(|| ogroup::enumerate(&space, GroupKind::O, 1 << 20).unwrap());
            for _ in 0..1000 {
                let g = ogroup::random_element(&space, GroupKind::Omega, &mut rng).unwrap();
                if g.elementary_divisors(&f).len() != 1 {
                    continue;
                }
                seen += 1;
                let found = has_outer_inverting_involution(&space, &g);
                if let Some(all) = &all {
                    let ginv = g.inverse(&f).unwrap();
                    let brute = all.elements().iter().any(|x| {
                        x.mul(&g, &f) == ginv.mul(x, &f)
                            && x.mul(x, &f).is_identity()
                            && !ogroup::member(&space, x, GroupKind::Omega).unwrap()
                    });
                    assert_eq!(found, brute);
                }
                assert!(!found, "n={n} {ty:?}");
            }
        }
    }
    assert!(seen > 20);
}

/// A cyclic unipotent element has rank(g + 1) = n − 1, odd, so it is never in Ω.
#[test]
fn cyclic_unipotent_elements_lie_outside_omega() {
    let mut rng = ChaCha8Rng::seed_from_u64(30);
    for n in [4usize, 6, 8] {
        let space = QuadSpace::standard(&Field::new(2).unwrap(), n, FormType::Split).unwrap();
        let f = space.field().clone();
        let one = orthoreal::algebra::FqPoly::linear(&f, Fq::ONE);
        for _ in 0..2000 {
            let g = ogroup::random_element(&space, GroupKind::O, &mut rng).unwrap();
            if g.elementary_divisors(&f) == vec![(one.clone(), n)] {
                assert!(!ogroup::member(&space, &g, GroupKind::Omega).unwrap());
            }
        }
    }
}

/// Ω⁻(4,2) ≅ A5: an element with the single divisor t⁴+t³+t²+t+1 is a
/// 5-cycle, and all its inverting involutions are even.
#[test]
fn cyclic_element_of_order_five_has_no_outer_inverting_involution() {
    let f = Field::new(2).unwrap();
    let space = QuadSpace::standard(&f, 4, FormType::NonSplit).unwrap();
    let phi5 = orthoreal::algebra::FqPoly::from_ints(&f, &[1, 1, 1, 1, 1]);
    let group = ogroup::enumerate(&space, GroupKind::Omega, 1 << 20).unwrap();
    assert_eq!(group.len(), 60);
    let g = group.elements().iter().find(|g| g.elementary_divisors(&f) == vec![(phi5.clone(), 1)]).unwrap();
    assert!(!has_outer_inverting_involution(&space, g));
    let all = ogroup::enumerate(&space, GroupKind::O, 1 << 20).unwrap();
    let ginv = g.inverse(&f).unwrap();
    for x in all.elements() {
        if x.mul(g, &f) == ginv.mul(x, &f) && x.mul(x, &f).is_identity() {
            assert!(ogroup::member(&space, x, GroupKind::Omega).unwrap());
        }
    }
}

#[test]
fn reality_is_monotone_up_the_lattice() {
    for (q, n, ty) in [(3u64, 4usize, FormType::NonSplit), (5, 3, FormType::Split), (3, 5, FormType::Split)] {
        let omega = GroupSpec::standard(q, n, ty, GroupKind::Omega).unwrap();
        let r = reality::census(&omega, 1 << 20, &opts()).unwrap();
        for c in r.classes.iter().filter(|c| c.real) {
            for kind in [GroupKind::SO, GroupKind::K, GroupKind::T, GroupKind::O] {
                let spec = GroupSpec::new(omega.space.clone(), kind).unwrap();
                let v = reality::decide_reality(&spec, &c.representative, false, &opts()).unwrap();
                assert!(v.is_real, "{}", spec.label());
                if c.strongly_real {
                    assert!(v.is_strongly_real, "{}", spec.label());
                }
            }
        }
    }
}

#[test]
fn structural_criterion_matches_search() {
    let mut rng = ChaCha8Rng::seed_from_u64(31);
    for ty in [FormType::Split, FormType::NonSplit] {
        let spec = GroupSpec::standard(3, 6, ty, GroupKind::SO).unwrap();
        let mut nonreal = 0;
        for _ in 0..500 {
            let g = ogroup::random_element(&spec.space, GroupKind::SO, &mut rng).unwrap();
            let v = reality::decide_reality(&spec, &g, false, &opts()).unwrap();
            assert_eq!(reality::structural_real_so(&spec.space, &g).unwrap(), v.is_real);
            assert!(!v.is_real || v.is_strongly_real);
            nonreal += usize::from(!v.is_real);
        }
        assert!(nonreal > 0);
    }
}

#[test]
fn structural_criterion_examples() {
    let f = Field::new(3).unwrap();
    let space = constructions::h_space(&f).unwrap();
    assert!(reality::structural_real_so(&space, &constructions::h_matrix(&f)).unwrap());
    assert!(reality::structural_real_so(&space, &FqMatrix::identity(6)).unwrap());
    let rot = FqMatrix::from_ints(&f, 2, 2, &[0, -1, 1, 0]);
    let g = FqMatrix::block_diag(&[&constructions::u_matrix(&f), &rot]);
    assert!(!reality::structural_real_so(&space, &g).unwrap());
    let spec = GroupSpec::new(space.clone(), GroupKind::SO).unwrap();
    assert!(!reality::decide_reality(&spec, &g, false, &opts()).unwrap().is_real);
    let eight = constructions::eta_space(&f).unwrap();
    assert!(reality::structural_real_so(&eight, &FqMatrix::identity(8)).is_err());
}

#[test]
fn omega_plus_6_5_real_elements_are_strongly_real() {
    let mut rng = ChaCha8Rng::seed_from_u64(37);
    let spec = GroupSpec::standard(5, 6, FormType::Split, GroupKind::Omega).unwrap();
    for _ in 0..200 {
        let g = ogroup::random_element(&spec.space, GroupKind::Omega, &mut rng).unwrap();
        let v = reality::decide_reality(&spec, &g, false, &opts()).unwrap();
        assert!(!v.is_real || v.is_strongly_real);
    }
}

#[test]
fn minus_type_k_and_t_have_nonreal_elements_at_6_3() {
    let mut rng = ChaCha8Rng::seed_from_u64(41);
    for kind in [GroupKind::K, GroupKind::T] {
        let spec = GroupSpec::standard(3, 6, FormType::NonSplit, kind).unwrap();
        let mut found = false;
        for _ in 0..300 {
            let g = ogroup::random_element(&spec.space, kind, &mut rng).unwrap();
            if !reality::decide_reality(&spec, &g, false, &opts()).unwrap().is_real {
                found = true;
                break;
            }
        }
        assert!(found, "{}", spec.label());
    }
}

#[test]
fn small_censuses_satisfy_classification() {
    let cases = [
        (5u64, 3usize, FormType::Split, GroupKind::Omega),
        (5, 3, FormType::Split, GroupKind::SO),
        (3, 3, FormType::Split, GroupKind::O),
        (3, 4, FormType::NonSplit, GroupKind::O),
        (5, 4, FormType::Split, GroupKind::Omega),
        (5, 4, FormType::NonSplit, GroupKind::Omega),
        (5, 4, FormType::Split, GroupKind::K),
        (3, 5, FormType::Split, GroupKind::SO),
        (2, 6, FormType::NonSplit, GroupKind::SO),
    ];
    for (q, n, ty, kind) in cases {
        let spec = GroupSpec::standard(q, n, ty, kind).unwrap();
        let r = reality::census(&spec, 1 << 20, &opts()).unwrap();
        assert!(!r.checks.is_empty(), "{}", spec.label());
        assert!(r.checks_hold(), "{}: {:?}", spec.label(), r.checks);
    }
}

#[test]
fn identity_is_strongly_real_everywhere() {
    for kind in GroupKind::ALL {
        let Ok(spec) = GroupSpec::standard(3, 4, FormType::NonSplit, kind) else { continue };
        let v = reality::decide_reality(&spec, &FqMatrix::identity(4), false, &opts()).unwrap();
        assert!(v.is_strongly_real);
        assert!(v.certificate.as_ref().unwrap().is_identity());
        assert!(v.involution.as_ref().unwrap().is_identity());
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(40))]

    #[test]
    fn verdicts_are_conjugation_invariant(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let spec = GroupSpec::standard(3, 4, FormType::Split, GroupKind::Omega).unwrap();
        let f = spec.field().clone();
        let g = ogroup::random_element(&spec.space, GroupKind::Omega, &mut rng).unwrap();
        let y = ogroup::random_element(&spec.space, GroupKind::Omega, &mut rng).unwrap();
        let h = y.mul(&g, &f).mul(&y.inverse(&f).unwrap(), &f);
        let a = reality::decide_reality(&spec, &g, false, &opts()).unwrap();
        let b = reality::decide_reality(&spec, &h, false, &opts()).unwrap();
        prop_assert_eq!((a.is_real, a.is_strongly_real), (b.is_real, b.is_strongly_real));
        prop_assert!(a.verify(&spec, &g).unwrap());
    }
}
