use orthoreal::algebra::{Field, Fq, FqMatrix, FqPoly, Vector};
use orthoreal::decomp::{self, BlockType, Decomposition};
use orthoreal::forms::{FormType, QuadSpace};
use orthoreal::ogroup::{self, GroupKind};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn spaces() -> Vec<QuadSpace> {
    let mut out = Vec::new();
    for q in [2u64, 3, 4, 5] {
        let f = Field::new(q).unwrap();
        for n in 1..=8 {
            if q % 2 == 0 && n % 2 == 1 {
                continue;
            }
            for ty in [FormType::Split, FormType::NonSplit] {
                if q % 2 == 1 && n % 2 == 1 && ty == FormType::NonSplit {
                    continue;
                }
                out.push(QuadSpace::standard(&f, n, ty).unwrap());
            }
        }
    }
    out
}

fn sorted(mut v: Vec<(FqPoly, usize)>) -> Vec<(FqPoly, usize)> {
    v.sort_by(|a, b| a.0.total_cmp(&b.0).then(a.1.cmp(&b.1)));
    v
}

fn check(space: &QuadSpace, g: &FqMatrix, d: &Decomposition) {
    let f = space.field();
    let n = space.dim();
    let all: Vec<Vector> = d.blocks.iter().flat_map(|b| b.basis.iter().cloned()).collect();
    assert_eq!(FqMatrix::from_cols(n, &all).rank(f), n);
    for (i, a) in d.blocks.iter().enumerate() {
        assert!(a.space.is_nondegenerate());
        let p = FqMatrix::from_cols(n, &a.basis);
        assert_eq!(g.mul(&p, f), p.mul(&a.action, f));
        assert_eq!(sorted(a.action.elementary_divisors(f)), sorted(a.elementary_divisors()));
        for b in &d.blocks[i + 1..] {
            for u in &a.basis {
                for w in &b.basis {
                    assert!(space.bilinear(u, w).is_zero());
                }
            }
        }
        if a.kind.is_bicyclic() && f.is_odd() {
            let k = a.dim() / 2;
            for half in [&a.basis[..k], &a.basis[k..]] {
                for u in half {
                    assert!(space.q_value(u).is_zero());
                    for w in half {
                        assert!(space.bilinear(u, w).is_zero());
                    }
                }
            }
        }
        if f.is_odd() {
            assert!(decomp::classify_block_membership(a).unwrap().facts_hold, "block {:?}", a.kind);
        }
    }
    assert_eq!(sorted(g.elementary_divisors(f)), d.elementary_divisors());
}

#[test]
fn random_elements_decompose_orthogonally() {
    let mut rng = ChaCha8Rng::seed_from_u64(2024);
    for space in spaces() {
        for _ in 0..300 {
            let g = ogroup::random_element(&space, GroupKind::O, &mut rng).unwrap();
            let d = decomp::decompose(&space, &g)
                .unwrap_or_else(|e| panic!("q={} n={}: {e}\n{:?}", space.field().q(), space.dim(), g));
            check(&space, &g, &d);
        }
    }
}

#[test]
fn eigenvalue_one_elements_decompose() {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    for space in spaces() {
        let f = space.field();
        let lin = [FqPoly::linear(f, Fq::ONE), FqPoly::linear(f, f.neg(Fq::ONE))];
        for _ in 0..2000 {
            let g = ogroup::random_element(&space, GroupKind::O, &mut rng).unwrap();
            if g.char_poly(f).factorize(f).iter().all(|(p, _)| lin.contains(p)) {
                check(&space, &g, &decomp::decompose(&space, &g).unwrap());
            }
        }
    }
}

/// Whether some proper nonzero g-invariant subspace generated by at most two
/// vectors is nondegenerate.
fn has_nondegenerate_invariant_subspace(space: &QuadSpace, g: &FqMatrix) -> bool {
    let f = space.field();
    let n = space.dim();
    let q = f.q() as u64;
    let vecs: Vec<Vector> = (1..q.pow(n as u32))
        .map(|mut idx| {
            (0..n)
                .map(|_| {
                    let c = f.elem((idx % q) as u32);
                    idx /= q;
                    c
                })
                .collect()
        })
        .collect();
    let orbit = |v: &Vector| -> Vec<Vector> {
        let mut out = vec![v.clone()];
        for _ in 1..n {
            out.push(g.mul_vec(out.last().unwrap(), f));
        }
        out
    };
    for (i, v) in vecs.iter().enumerate() {
        for w in &vecs[i..] {
            let mut gens = orbit(v);
            gens.extend(orbit(w));
            let m = FqMatrix::from_cols(n, &gens);
            let (r, piv) = m.rref(f);
            let _ = r;
            let basis: Vec<Vector> = piv.iter().map(|&j| gens[j].clone()).collect();
            if basis.len() == n {
                continue;
            }
            if space.restrict(&basis).unwrap().is_nondegenerate() {
                return true;
            }
        }
    }
    false
}

#[test]
fn blocks_are_indecomposable_in_small_cases() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    for q in [2u64, 3] {
        let f = Field::new(q).unwrap();
        for n in 2..=4 {
            for ty in [FormType::Split, FormType::NonSplit] {
                let Ok(space) = QuadSpace::standard(&f, n, ty) else { continue };
                for _ in 0..40 {
                    let g = ogroup::random_element(&space, GroupKind::O, &mut rng).unwrap();
                    let d = decomp::decompose(&space, &g).unwrap();
                    for b in &d.blocks {
                        if b.dim() > 1 {
                            assert!(
                                !has_nondegenerate_invariant_subspace(&b.space, &b.action),
                                "q={q} n={n} block {:?} splits further",
                                b.kind
                            );
                        }
                    }
                }
            }
        }
    }
}

#[test]
fn block_type_tags_follow_divisors() {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let f = Field::new(5).unwrap();
    let space = QuadSpace::standard(&f, 6, FormType::NonSplit).unwrap();
    let minus = FqPoly::linear(&f, Fq::ONE);
    let plus = FqPoly::linear(&f, f.neg(Fq::ONE));
    for _ in 0..200 {
        let g = ogroup::random_element(&space, GroupKind::O, &mut rng).unwrap();
        for b in decomp::decompose(&space, &g).unwrap().blocks {
            let (p, e) = &b.divisor;
            match b.kind {
                BlockType::T1minus => assert!(p == &minus && e % 2 == 0),
                BlockType::T1plus => assert!(p == &plus && e % 2 == 0),
                BlockType::T2minus => assert!(p == &minus && e % 2 == 1),
                BlockType::T2plus => assert!(p == &plus && e % 2 == 1),
                BlockType::T2star => assert!(p.is_self_reciprocal(&f) && p != &minus && p != &plus),
                BlockType::T3 => assert!(!p.is_self_reciprocal(&f)),
                _ => panic!("characteristic-2 tag over F5"),
            }
        }
    }
}

#[test]
fn non_isometry_is_rejected() {
    let f = Field::new(3).unwrap();
    let space = QuadSpace::split(&f, 2).unwrap();
    let g = FqMatrix::from_ints(&f, 2, 2, &[1, 1, 0, 1]);
    assert!(decomp::decompose(&space, &g).is_err());
}
