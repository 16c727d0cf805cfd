use orthoreal::algebra::{Field, FqMatrix, SquareClass};
use orthoreal::forms::{FormType, QuadSpace};
use orthoreal::group::MatrixGroup;
use orthoreal::ogroup::{self, GroupKind};
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

const TYPES: [FormType; 2] = [FormType::Split, FormType::NonSplit];

/// [O, O] computed as the normal closure of the commutators of a generating set
/// of O. The generating set is drawn at random from the enumerated group.
fn derived_subgroup(o: &MatrixGroup) -> MatrixGroup {
    let f = o.field();
    let n = o.dim();
    let mut rng = ChaCha8Rng::seed_from_u64(99);
    let gens: Vec<FqMatrix> = loop {
        let pick: Vec<FqMatrix> = (0..4).map(|_| o.element(rng.gen_range(0..o.len())).clone()).collect();
        if MatrixGroup::closure(f, n, &pick, false, u128::MAX).unwrap().len() == o.len() {
            break pick;
        }
    };
    let mut cgens: Vec<FqMatrix> = Vec::new();
    let mut h = MatrixGroup::closure(f, n, &cgens, false, u128::MAX).unwrap();
    let grow = |cgens: &mut Vec<FqMatrix>, h: &mut MatrixGroup, c: FqMatrix| {
        if !h.contains(&c) {
            cgens.push(c);
            *h = MatrixGroup::closure(f, n, cgens, false, u128::MAX).unwrap();
        }
    };
    for a in &gens {
        for b in &gens {
            let c = a.mul(b, f).mul(&a.inverse(f).unwrap(), f).mul(&b.inverse(f).unwrap(), f);
            grow(&mut cgens, &mut h, c);
        }
    }
    let mut k = 0;
    while k < cgens.len() {
        let c = cgens[k].clone();
        for r in &gens {
            let conj = r.mul(&c, f).mul(&r.inverse(f).unwrap(), f);
            grow(&mut cgens, &mut h, conj);
        }
        k += 1;
    }
    h
}

#[test]
fn lattice_indices_small_spaces() {
    for (n, q) in [(2usize, 3u64), (2, 5), (4, 3), (3, 3), (4, 2), (2, 2)] {
        let f = Field::new(q).unwrap();
        for ty in TYPES {
            if n % 2 == 1 && ty == FormType::NonSplit {
                continue;
            }
            let s = QuadSpace::standard(&f, n, ty).unwrap();
            let o = ogroup::enumerate(&s, GroupKind::O, 1 << 20).unwrap();
            assert_eq!(o.len() as u128, ogroup::orthogonal_order(n, q, ty));
            let omega = o.filter(|m| ogroup::member(&s, m, GroupKind::Omega).unwrap());
            if f.is_odd() {
                for kind in [GroupKind::SO, GroupKind::K, GroupKind::T] {
                    let sub = o.filter(|m| ogroup::member(&s, m, kind).unwrap());
                    assert_eq!(o.len(), 2 * sub.len(), "{kind} n={n} q={q} {ty}");
                }
                assert_eq!(o.len(), 4 * omega.len());
            } else {
                assert_eq!(o.len(), 2 * omega.len());
            }
        }
    }
}

#[test]
fn cosets_of_omega_equinumerous() {
    let f = Field::new(3).unwrap();
    for ty in TYPES {
        let s = QuadSpace::standard(&f, 4, ty).unwrap();
        let o = ogroup::enumerate(&s, GroupKind::O, 1 << 20).unwrap();
        let mut counts = std::collections::HashMap::new();
        for m in o.elements() {
            let flags = ogroup::lattice_flags(&s, m).unwrap();
            *counts.entry((flags.det, flags.spinor_norm.unwrap())).or_insert(0usize) += 1;
        }
        assert_eq!(counts.len(), 4);
        assert!(counts.values().all(|&c| c == o.len() / 4));
    }
}

#[test]
fn omega_is_derived_subgroup() {
    for (n, q) in [(2usize, 3u64), (2, 5), (3, 3), (4, 3), (4, 2)] {
        let f = Field::new(q).unwrap();
        for ty in TYPES {
            if n % 2 == 1 && ty == FormType::NonSplit {
                continue;
            }
            let s = QuadSpace::standard(&f, n, ty).unwrap();
            let o = ogroup::enumerate(&s, GroupKind::O, 1 << 20).unwrap();
            let omega = o.filter(|m| ogroup::member(&s, m, GroupKind::Omega).unwrap());
            let derived = derived_subgroup(&o);
            assert!(derived.elements().iter().all(|m| omega.contains(m)));
            if (n, q, ty) == (4, 2, FormType::Split) {
                // O⁺(4,2) ≅ S₃ ≀ 2: here Ω has index 2 over the commutator subgroup
                assert_eq!(2 * derived.len(), omega.len());
            } else {
                assert_eq!(derived.len(), omega.len(), "n={n} q={q} {ty}");
            }
        }
    }
}

#[test]
fn so_minus_two_is_cyclic_of_order_q_plus_one() {
    for q in [3u64, 5, 7] {
        let f = Field::new(q).unwrap();
        let s = QuadSpace::nonsplit(&f, 2).unwrap();
        let so = ogroup::enumerate(&s, GroupKind::SO, 1000).unwrap();
        assert_eq!(so.len() as u64, q + 1);
        let generator = so.elements().iter().any(|g| {
            let mut x = g.clone();
            let mut ord = 1;
            while !x.is_identity() {
                x = x.mul(g, &f);
                ord += 1;
            }
            ord as u64 == q + 1
        });
        assert!(generator);
    }
}

#[test]
fn enumerate_reports_exact_order_over_cap() {
    let f = Field::new(3).unwrap();
    let s = QuadSpace::split(&f, 6).unwrap();
    match ogroup::enumerate(&s, GroupKind::Omega, 1000) {
        Err(orthoreal::Error::GroupTooLarge { order, .. }) => {
            assert_eq!(order, ogroup::orthogonal_order(6, 3, FormType::Split) / 4)
        }
        other => panic!("expected GroupTooLarge, got {other:?}"),
    }
}

/// Wall form oracle: on W = im(1 − g), χ(x, y) = B(x, v) where y = (1 − g)v.
/// θ(g) = class(det χ) · class(2)^{dim W}.
fn wall_spinor_norm(s: &QuadSpace, g: &FqMatrix) -> SquareClass {
    let f = s.field();
    let n = s.dim();
    let a = FqMatrix::identity(n).sub(g, f);
    let (_, pivots) = a.rref(f);
    let w: Vec<Vec<_>> = pivots.iter().map(|&c| a.col(c)).collect();
    if w.is_empty() {
        return SquareClass::Trivial;
    }
    let pre: Vec<Vec<_>> = w.iter().map(|y| a.solve(y, f).unwrap()).collect();
    let k = w.len();
    let mut chi = FqMatrix::zeros(k, k);
    for i in 0..k {
        for j in 0..k {
            chi[(i, j)] = s.bilinear(&w[i], &pre[j]);
        }
    }
    let det = f.square_class(chi.det(f)).unwrap();
    let two = f.square_class(f.from_int(2)).unwrap();
    let mut out = det;
    if k % 2 == 1 {
        out = out.mul(two);
    }
    out
}

#[test]
fn spinor_norm_matches_wall_form() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    for q in [3u64, 5, 7, 9] {
        let f = Field::new(q).unwrap();
        for n in 2..=5 {
            for ty in TYPES {
                let s = QuadSpace::standard(&f, n, ty).unwrap();
                for _ in 0..20 {
                    let g = ogroup::random_element(&s, GroupKind::O, &mut rng).unwrap();
                    assert_eq!(ogroup::spinor_norm(&s, &g).unwrap(), wall_spinor_norm(&s, &g), "q={q} n={n} {ty}");
                }
            }
        }
    }
}

#[test]
fn direct_sum_laws() {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let f = Field::new(5).unwrap();
    let s1 = QuadSpace::split(&f, 3).unwrap();
    let s2 = QuadSpace::nonsplit(&f, 2).unwrap();
    let s = s1.direct_sum(&s2).unwrap();
    assert_eq!(s.discriminant().unwrap(), s1.discriminant().unwrap().mul(s2.discriminant().unwrap()));
    for _ in 0..30 {
        let g1 = ogroup::random_element(&s1, GroupKind::O, &mut rng).unwrap();
        let g2 = ogroup::random_element(&s2, GroupKind::O, &mut rng).unwrap();
        let g = FqMatrix::block_diag(&[&g1, &g2]);
        let t = ogroup::spinor_norm(&s, &g).unwrap();
        assert_eq!(t, ogroup::spinor_norm(&s1, &g1).unwrap().mul(ogroup::spinor_norm(&s2, &g2).unwrap()));
        let d = ogroup::det_sign(&s, &g).unwrap();
        assert_eq!(d, ogroup::det_sign(&s1, &g1).unwrap() * ogroup::det_sign(&s2, &g2).unwrap());
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn spinor_norm_is_a_conjugation_invariant_homomorphism(
        seed in any::<u64>(),
        qi in 0usize..4,
        n in 2usize..=6,
        split in any::<bool>(),
    ) {
        let q = [3u64, 5, 7, 9][qi];
        let f = Field::new(q).unwrap();
        let ty = if split { FormType::Split } else { FormType::NonSplit };
        let s = QuadSpace::standard(&f, n, ty).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let a = ogroup::random_element(&s, GroupKind::O, &mut rng).unwrap();
        let b = ogroup::random_element(&s, GroupKind::O, &mut rng).unwrap();
        let ta = ogroup::spinor_norm(&s, &a).unwrap();
        let tb = ogroup::spinor_norm(&s, &b).unwrap();
        prop_assert_eq!(ogroup::spinor_norm(&s, &a.mul(&b, &f)).unwrap(), ta.mul(tb));
        let conj = b.mul(&a, &f).mul(&b.inverse(&f).unwrap(), &f);
        prop_assert_eq!(ogroup::spinor_norm(&s, &conj).unwrap(), ta);
    }

    #[test]
    fn form_type_is_basis_invariant(seed in any::<u64>(), qi in 0usize..3, n in 2usize..=5, split in any::<bool>()) {
        let q = [3u64, 5, 9][qi];
        let f = Field::new(q).unwrap();
        let ty = if split { FormType::Split } else { FormType::NonSplit };
        let s = QuadSpace::standard(&f, n, ty).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let p = loop {
            let data = (0..n * n).map(|_| f.elem(rng.gen_range(0..f.q()))).collect();
            let p = FqMatrix::from_data(n, n, data);
            if !p.det(&f).is_zero() { break p; }
        };
        let g2 = p.transpose().mul(s.gram(), &f).mul(&p, &f);
        let t = QuadSpace::from_gram(&f, g2).unwrap();
        prop_assert_eq!(t.form_type().unwrap(), ty);
    }
}

#[test]
fn two_congruence_classes_of_diagonal_forms() {
    for q in [3u64, 5] {
        let f = Field::new(q).unwrap();
        let nonzero: Vec<_> = f.elements().filter(|a| !a.is_zero()).collect();
        for n in 1..=4usize {
            let mut classes = std::collections::HashSet::new();
            let mut idx = vec![0usize; n];
            loop {
                let mut g = FqMatrix::zeros(n, n);
                for i in 0..n {
                    g[(i, i)] = nonzero[idx[i]];
                }
                let s = QuadSpace::from_gram(&f, g).unwrap();
                // the Witt index together with the discriminant pins the class
                classes.insert((s.discriminant().unwrap(), s.form_type().unwrap(), s.witt_index()));
                let mut k = 0;
                while k < n {
                    idx[k] += 1;
                    if idx[k] < nonzero.len() {
                        break;
                    }
                    idx[k] = 0;
                    k += 1;
                }
                if k == n {
                    break;
                }
            }
            assert_eq!(classes.len(), 2, "q={q} n={n}");
        }
    }
}
