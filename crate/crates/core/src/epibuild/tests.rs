use std::collections::BTreeMap;

use super::*;
use crate::exactlin::{ExactMatrix, Field, PrimeField, Rationals};
use crate::freealg::{
    certificate_value, ideal_membership, Alphabet, FreeMat, FreePoly, IdealGens, MembershipResult,
};
use crate::quiver::{DimVector, Quiver};
use crate::quiverrep::{direct_sum, end_dim, Representation};
use proptest::prelude::*;

type Q = Rationals;

fn a2() -> Quiver {
    Quiver::parse("vertices 1 2\narrow a 1 2").unwrap()
}

fn kronecker() -> Quiver {
    Quiver::parse("vertices 1 2\narrow a 1 2\narrow b 1 2").unwrap()
}

fn m(rows: &[&[i64]]) -> ExactMatrix<Q> {
    ExactMatrix::from_i64(Rationals, rows)
}

fn rep(q: Quiver, dims: &[usize], maps: Vec<ExactMatrix<Q>>) -> Representation<Q> {
    Representation::new(Rationals, q, dims.to_vec(), maps).unwrap()
}

fn brick_a2() -> Representation<Q> {
    rep(a2(), &[1, 1], vec![m(&[&[1]])])
}

fn s1s1() -> Representation<Q> {
    let s1 = Representation::simple(Rationals, a2(), "1").unwrap();
    direct_sum(&s1, &s1).unwrap()
}

fn kronecker_12() -> Representation<Q> {
    rep(
        kronecker(),
        &[1, 2],
        vec![m(&[&[1], &[0]]), m(&[&[0], &[1]])],
    )
}

/// `Σ c_ij E_ij` with scalar entries, over `alphabet`.
fn scalar(alphabet: &std::sync::Arc<Alphabet>, rows: &[&[i64]]) -> FreeMat<Q> {
    FreeMat::from_scalar(alphabet, &m(rows))
}

fn poly(alphabet: &std::sync::Arc<Alphabet>, text: &str) -> FreePoly<Q> {
    FreePoly::parse(Rationals, alphabet, text).unwrap()
}

fn kronecker_extension_hom() -> AlgebraHom<Q> {
    extend_add_arrows(&brick_a2(), &kronecker()).unwrap()
}

#[test]
fn brick_hom_on_a2() {
    let h = build_brick_hom(&brick_a2(), false).unwrap();
    let e = Alphabet::empty();
    assert_eq!(h.size(), 2);
    assert_eq!(h.idempotent("1").unwrap(), &scalar(&e, &[&[1, 0], &[0, 0]]));
    assert_eq!(h.idempotent("2").unwrap(), &scalar(&e, &[&[0, 0], &[0, 1]]));
    assert_eq!(
        h.arrow_image("a").unwrap(),
        &scalar(&e, &[&[0, 0], &[1, 0]])
    );
    assert!(h.notes().is_empty());

    let s1 = Representation::simple(Rationals, a2(), "1").unwrap();
    let h = build_brick_hom(&s1, false).unwrap();
    assert_eq!(h.size(), 1);
    assert_eq!(h.idempotent("1").unwrap(), &scalar(&e, &[&[1]]));
    assert!(h.idempotent("2").unwrap().is_zero());
}

#[test]
fn brick_hom_errors() {
    assert_eq!(
        build_brick_hom(&s1s1(), false),
        Err(EpiError::NotABrick { end_dim: 4 })
    );
    let h = build_brick_hom(&s1s1(), true).unwrap();
    let e = Alphabet::empty();
    assert_eq!(h.idempotent("1").unwrap(), &scalar(&e, &[&[1, 0], &[0, 1]]));
    assert!(h.arrow_image("a").unwrap().is_zero());
    assert_eq!(h.notes().len(), 1);
    let zero = Representation::zero_maps(Rationals, a2(), vec![0, 0]).unwrap();
    assert!(matches!(
        build_brick_hom(&zero, false),
        Err(EpiError::Rep(_))
    ));
}

#[test]
fn arrow_extension_on_kronecker() {
    let h = kronecker_extension_hom();
    assert_eq!(h.alphabet().letters(), ["x_b_1_1"]);
    let al = h.alphabet();
    let expected = FreeMat::unit(Rationals, al, 2, 1, 0)
        .left_mul_poly(&poly(al, "x_b_1_1"))
        .unwrap();
    assert_eq!(h.arrow_image("b").unwrap(), &expected);
    assert_eq!(
        h.arrow_image("a").unwrap(),
        &scalar(al, &[&[0, 0], &[1, 0]])
    );
    assert!(generation_identity_check(&h).unwrap());
    assert!(h.notes().is_empty());
}

#[test]
fn extension_errors_and_degenerate_block() {
    let cyclic = Quiver::with_cycles(&["1", "2"], &[("a", "1", "2"), ("c", "2", "1")]).unwrap();
    assert!(matches!(
        extend_add_arrows(&brick_a2(), &cyclic),
        Err(EpiError::Quiver(crate::quiver::QuiverError::Cycle(_)))
    ));
    let other = Quiver::parse("vertices 1 3\narrow a 1 3").unwrap();
    assert!(matches!(
        extend_add_arrows(&brick_a2(), &other),
        Err(EpiError::QuiverNotExtension(_))
    ));
    let moved = Quiver::parse("vertices 1 2\narrow a 2 1").unwrap();
    assert!(matches!(
        extend_add_arrows(&brick_a2(), &moved),
        Err(EpiError::QuiverNotExtension(_))
    ));
    assert!(matches!(
        extend_add_arrows(&s1s1(), &kronecker()),
        Err(EpiError::NotABrick { .. })
    ));

    let s1 = Representation::simple(Rationals, a2(), "1").unwrap();
    let h = extend_add_arrows(&s1, &kronecker()).unwrap();
    assert!(h.alphabet().is_empty());
    assert_eq!(h.size(), 1);
    assert!(h.arrow_image("b").unwrap().is_zero());
}

#[test]
fn brick_with_self_extensions_gets_a_note() {
    // Kronecker (1,1) with a = 1, b = 0 is a brick with Ext¹ ≠ 0; add a third arrow.
    let m1 = rep(kronecker(), &[1, 1], vec![m(&[&[1]]), m(&[&[0]])]);
    let q3 = Quiver::parse("vertices 1 2\narrow a 1 2\narrow b 1 2\narrow c 1 2").unwrap();
    let h = extend_add_arrows(&m1, &q3).unwrap();
    assert_eq!(h.alphabet().letters(), ["x_c_1_1"]);
    assert_eq!(h.notes().len(), 1);
}

#[test]
fn generation_identity_detects_mutation() {
    let h = kronecker_extension_hom();
    let al = h.alphabet().clone();
    let mut b = h.arrow_image("b").unwrap().clone();
    b.set(1, 0, poly(&al, "2*x_b_1_1"));
    let arrows = vec![h.arrow_image("a").unwrap().clone(), b];
    let bad = AlgebraHom::new(
        Rationals,
        kronecker(),
        al,
        2,
        h.idempotents().to_vec(),
        arrows,
    )
    .unwrap()
    .with_sites(h.letter_sites().to_vec())
    .unwrap();
    assert!(!generation_identity_check(&bad).unwrap());

    assert!(generation_identity_check(&build_brick_hom(&brick_a2(), false).unwrap()).unwrap());
    let glued = glue_vertex(&kronecker_12(), "2").unwrap();
    assert_eq!(
        generation_identity_check(&glued),
        Err(EpiError::WrongProvenance)
    );
}

#[test]
fn invariant_extension_matches_arrow_extension() {
    let m1 = rep(kronecker(), &[1, 1], vec![m(&[&[1]]), m(&[&[0]])]);
    let h = extend_invariant(&m1, "b", InvariantCase::I).unwrap();
    assert_eq!(h.alphabet().letters(), ["x21_b_1_1"]);
    let renamed = h.rename_letters(|l| l.replacen("x21_", "x_", 1)).unwrap();
    assert_eq!(renamed, kronecker_extension_hom());
    for case in [InvariantCase::II, InvariantCase::III, InvariantCase::IV] {
        let hc = extend_invariant(&m1, "b", case).unwrap();
        assert_eq!(hc.alphabet().letters(), ["x21_b_1_1"], "{case}");
    }
}

#[test]
fn invariant_extension_errors() {
    // Preprojective (2,3): a includes k² in the first coordinates; Im φ_b = span{e2, e3}.
    let p = rep(
        kronecker(),
        &[2, 3],
        vec![
            m(&[&[1, 0], &[0, 1], &[0, 0]]),
            m(&[&[0, 0], &[1, 0], &[0, 1]]),
        ],
    );
    assert_eq!(end_dim(&p).unwrap(), 1);
    match extend_invariant(&p, "b", InvariantCase::I) {
        Err(EpiError::InvarianceFailure { subspace, .. }) => assert!(subspace.starts_with("Im")),
        other => panic!("{other:?}"),
    }
    let iso = rep(kronecker(), &[1, 1], vec![m(&[&[1]]), m(&[&[1]])]);
    assert_eq!(
        extend_invariant(&iso, "b", InvariantCase::I),
        Err(EpiError::FullRank("b".into()))
    );
    assert!(matches!(
        extend_invariant(&iso, "c", InvariantCase::I),
        Err(EpiError::UnknownArrow(_))
    ));

    let s1 = Representation::simple(Rationals, kronecker(), "1").unwrap();
    let h = extend_invariant(&s1, "b", InvariantCase::IV).unwrap();
    assert!(h.alphabet().is_empty());
    assert_eq!(h.size(), 1);
}

#[test]
fn invariant_extension_on_a3_with_shortcut() {
    // 1 --a--> 2 --c--> 3 and 1 --e--> 3; M' = k at every vertex, a = c = 1, e = 0.
    // Restriction to {a, c} is the indecomposable P1 of A3, so End = k and
    // every subspace is invariant; e has Ker = k and Im = 0.
    let q = Quiver::parse("vertices 1 2 3\narrow a 1 2\narrow c 2 3\narrow e 1 3").unwrap();
    let mp = rep(q, &[1, 1, 1], vec![m(&[&[1]]), m(&[&[1]]), m(&[&[0]])]);
    let h = extend_invariant(&mp, "e", InvariantCase::I).unwrap();
    let al = h.alphabet().clone();
    assert_eq!(al.letters(), ["x21_e_1_1"]);
    let expected = FreeMat::unit(Rationals, &al, 3, 2, 0)
        .left_mul_poly(&poly(&al, "x21_e_1_1"))
        .unwrap();
    assert_eq!(h.arrow_image("e").unwrap(), &expected);
    assert_eq!(
        verify_epimorphism(&h, 3).unwrap().verdict,
        Verdict::Verified { degree: 2 }
    );
}

#[test]
fn invariant_case_names() {
    assert_eq!("iii".parse::<InvariantCase>(), Ok(InvariantCase::III));
    assert_eq!("IV".parse::<InvariantCase>(), Ok(InvariantCase::IV));
    assert!("v".parse::<InvariantCase>().is_err());
    assert_eq!(InvariantCase::II.to_string(), "ii");
}

#[test]
fn glue_on_kronecker_preprojective() {
    let h = glue_vertex(&kronecker_12(), "2").unwrap();
    let al = h.alphabet().clone();
    assert_eq!(al.letters(), ["x_1"]);
    assert_eq!(h.size(), 4);
    assert_eq!(h.quiver().vertices(), ["1", "2", "2'"]);
    let g = h.arrow_image("e'").unwrap();
    let column: Vec<String> = (0..4).map(|i| g.get(i, 3).to_text()).collect();
    assert_eq!(column, ["0", "1", "x_1", "0"]);
    assert_eq!(
        h.idempotent("2'").unwrap(),
        &FreeMat::unit(Rationals, &al, 4, 3, 3)
    );

    let s1 = Representation::simple(Rationals, kronecker(), "1").unwrap();
    assert_eq!(
        glue_vertex(&s1, "1"),
        Err(EpiError::DimensionTooSmall {
            vertex: "1".into(),
            dim: 1
        })
    );
    let sum = direct_sum(&kronecker_12(), &kronecker_12()).unwrap();
    assert!(matches!(
        glue_vertex(&sum, "2"),
        Err(EpiError::NotABrick { .. })
    ));
}

#[test]
fn canonical_examples() {
    let h =
        canonical_generic_hom(Rationals, &a2(), &DimVector::parse("1=1, 2=1").unwrap()).unwrap();
    let al = h.alphabet().clone();
    assert_eq!(al.letters(), ["x_a_1_1"]);
    let expected = FreeMat::unit(Rationals, &al, 2, 1, 0)
        .left_mul_poly(&poly(&al, "x_a_1_1"))
        .unwrap();
    assert_eq!(h.arrow_image("a").unwrap(), &expected);

    let k = canonical_generic_hom(
        Rationals,
        &kronecker(),
        &DimVector::parse("1=1, 2=1").unwrap(),
    )
    .unwrap();
    assert_eq!(k.alphabet().len(), 2);
    let big = canonical_generic_hom(
        Rationals,
        &kronecker(),
        &DimVector::parse("1=2, 2=3").unwrap(),
    )
    .unwrap();
    assert_eq!(big.alphabet().len(), 12);
    assert!(generation_identity_check(&big).unwrap());

    let z = canonical_generic_hom(
        Rationals,
        &kronecker(),
        &DimVector::parse("1=0, 2=0").unwrap(),
    )
    .unwrap();
    assert_eq!(z.size(), 0);
    assert!(z.alphabet().is_empty());
}

#[test]
fn factorization_examples() {
    let f = factor_through_canonical(&kronecker_extension_hom()).unwrap();
    let texts: Vec<(String, String)> = f
        .images
        .iter()
        .map(|(l, p)| (l.clone(), p.to_text()))
        .collect();
    assert_eq!(
        texts,
        [
            ("x_a_1_1".to_string(), "1".to_string()),
            ("x_b_1_1".to_string(), "x_b_1_1".to_string())
        ]
    );

    let c = canonical_generic_hom(
        Rationals,
        &kronecker(),
        &DimVector::parse("1=1, 2=2").unwrap(),
    )
    .unwrap();
    let f = factor_through_canonical(&c).unwrap();
    assert_eq!(f.canonical, c);
    for (l, p) in &f.images {
        assert_eq!(p.to_text(), *l);
    }

    let e = Alphabet::empty();
    let swapped = AlgebraHom::new(
        Rationals,
        a2(),
        e.clone(),
        2,
        vec![
            scalar(&e, &[&[0, 0], &[0, 1]]),
            scalar(&e, &[&[1, 0], &[0, 0]]),
        ],
        vec![scalar(&e, &[&[0, 1], &[0, 0]])],
    )
    .unwrap();
    assert!(matches!(
        factor_through_canonical(&swapped),
        Err(EpiError::LayoutMismatch(_))
    ));
}

fn sub_a2_embedding() -> BTreeMap<String, Vec<String>> {
    BTreeMap::from([("a".to_string(), vec!["a".to_string()])])
}

#[test]
fn presentation_of_kronecker_from_a2() {
    let p = localisation_presentation(&kronecker(), &sub_a2_embedding(), &brick_a2()).unwrap();
    let gens: Vec<String> = p.ideal.generators().iter().map(FreePoly::to_text).collect();
    assert_eq!(gens, ["x_a_1_1 - 1"]);
    assert_eq!(p.sources, ["a[2,1]"]);
    let el = eliminate_linear_generators(&p.canonical, &p.ideal).unwrap();
    assert!(el.remaining.is_empty());
    assert_eq!(el.assignments.len(), 1);
    assert_eq!(el.hom, kronecker_extension_hom());
}

#[test]
fn presentation_identity_and_empty() {
    let kb = rep(kronecker(), &[1, 1], vec![m(&[&[1]]), m(&[&[2]])]);
    // Not exceptional: every (1,1) Kronecker brick has a self-extension.
    let id = BTreeMap::from([
        ("a".to_string(), vec!["a".to_string()]),
        ("b".to_string(), vec!["b".to_string()]),
    ]);
    assert_eq!(
        localisation_presentation(&kronecker(), &id, &kb).unwrap_err(),
        EpiError::NotExceptional
    );

    let p12 = kronecker_12();
    let p = localisation_presentation(&kronecker(), &id, &p12).unwrap();
    let el = eliminate_linear_generators(&p.canonical, &p.ideal).unwrap();
    assert!(el.hom.alphabet().is_empty());
    assert!(el.remaining.is_empty());
    assert_eq!(el.hom, build_brick_hom(&p12, false).unwrap());

    let bare = Quiver::parse("vertices 1 2").unwrap();
    let s = Representation::simple(Rationals, bare, "1").unwrap();
    let p = localisation_presentation(&kronecker(), &BTreeMap::new(), &s).unwrap();
    assert!(p.ideal.generators().is_empty());
}

#[test]
fn presentation_path_checks() {
    let wrong = BTreeMap::from([("a".to_string(), vec!["z".to_string()])]);
    assert!(matches!(
        localisation_presentation(&kronecker(), &wrong, &brick_a2()),
        Err(EpiError::PathMismatch { .. })
    ));
    let missing = BTreeMap::new();
    assert!(matches!(
        localisation_presentation(&kronecker(), &missing, &brick_a2()),
        Err(EpiError::PathMismatch { .. })
    ));
    // Path a2 → b into A3 with a composite path.
    let a3 = Quiver::parse("vertices 1 2 3\narrow a 1 3").unwrap();
    let path_q = Quiver::parse("vertices 1 2 3\narrow p 1 2\narrow r 2 3").unwrap();
    let m13 = rep(a3, &[1, 0, 1], vec![m(&[&[1]])]);
    let emb = BTreeMap::from([("a".to_string(), vec!["p".to_string(), "r".to_string()])]);
    let p = localisation_presentation(&path_q, &emb, &m13).unwrap();
    // α_2 = 0, so both canonical blocks are empty and q(r)q(p) = 0 ≠ 1.
    let gens: Vec<String> = p.ideal.generators().iter().map(FreePoly::to_text).collect();
    assert_eq!(gens, ["-1"]);
    let backwards = BTreeMap::from([("a".to_string(), vec!["r".to_string(), "p".to_string()])]);
    assert!(matches!(
        localisation_presentation(
            &path_q,
            &backwards,
            &rep(
                Quiver::parse("vertices 1 2 3\narrow a 1 3").unwrap(),
                &[1, 0, 1],
                vec![m(&[&[1]])]
            )
        ),
        Err(EpiError::PathMismatch { .. })
    ));
}

#[test]
fn verification_examples() {
    let brick = build_brick_hom(&brick_a2(), false).unwrap();
    let r = verify_epimorphism(&brick, 1).unwrap();
    assert_eq!(r.verdict, Verdict::Verified { degree: 1 });
    assert_eq!(r.required.len(), 3);

    let r = verify_epimorphism(&kronecker_extension_hom(), 3).unwrap();
    assert!(matches!(r.verdict, Verdict::Verified { degree } if degree <= 3));

    let flagged = build_brick_hom(&s1s1(), true).unwrap();
    let r = verify_epimorphism(&flagged, 4).unwrap();
    assert_eq!(r.verdict, Verdict::Undetermined { degree_bound: 4 });
    assert!(r.required.iter().any(|m| m.element == "v_1_2" && !m.member));
}

#[test]
fn certificates_reconstruct_targets() {
    let h = kronecker_extension_hom();
    let ci = CommutatorIdeal::new(&h).unwrap();
    for target in ci.required() {
        match ideal_membership(&ci.ideal, &target, 3).unwrap() {
            MembershipResult::Member { certificate, .. } => {
                assert_eq!(certificate_value(&ci.ideal, &certificate), target)
            }
            other => panic!("{} not found: {other:?}", target.to_text()),
        }
    }
}

#[test]
fn commutator_prefix_avoids_existing_letters() {
    let al = Alphabet::new(&["v"]).unwrap();
    let base = build_brick_hom(&brick_a2(), false).unwrap();
    let h = AlgebraHom::new(
        Rationals,
        a2(),
        al.clone(),
        2,
        base.idempotents()
            .iter()
            .map(|x| x.embed(&al).unwrap())
            .collect(),
        base.arrow_images()
            .iter()
            .map(|x| x.embed(&al).unwrap())
            .collect(),
    )
    .unwrap();
    let ci = CommutatorIdeal::new(&h).unwrap();
    assert_eq!(ci.prefix, "v2");
    assert_eq!(ci.required().len(), 4);
}

#[test]
fn glue_verifies() {
    let h = glue_vertex(&kronecker_12(), "2").unwrap();
    let r = verify_epimorphism(&h, 3).unwrap();
    assert!(
        matches!(r.verdict, Verdict::Verified { .. }),
        "{:?}",
        r.verdict
    );
}

/// Oracle: the span of `v_ij` relations annihilating End, by brute-force comparison.
fn annihilates(m: &Representation<Q>, p: &FreePoly<Q>) -> bool {
    let n = m.total_dim();
    let basis = crate::quiverrep::hom_basis(m, m).unwrap();
    basis.maps.iter().all(|f| {
        let mut full = ExactMatrix::zeros(Rationals, n, n);
        let mut o = 0;
        for b in f {
            full.set_block(o, o, b);
            o += b.rows();
        }
        let mut acc = Rationals.zero();
        for (w, c) in p.terms() {
            let k = w.0[0] as usize;
            acc = Rationals.add(&acc, &Rationals.mul(c, full.get(k / n, k % n)));
        }
        acc == Rationals.zero()
    })
}

#[test]
fn linear_relations_examples() {
    let rels = linear_relations_from_end(&brick_a2()).unwrap();
    assert_eq!(rels.len(), 3);
    let al = rels[0].alphabet().clone();
    let expected = ["v_1_2", "v_2_1", "v_1_1 - v_2_2"];
    // Same span: stacking the expected elements adds no rank.
    let rows = |ps: &[FreePoly<Q>]| -> Vec<Vec<<Q as Field>::Elem>> {
        ps.iter()
            .map(|p| {
                (0..4)
                    .map(|k| p.coefficient(&crate::freealg::Word(vec![k])))
                    .collect()
            })
            .collect()
    };
    let ours = rows(&rels);
    let mut both = ours.clone();
    both.extend(rows(
        &expected.iter().map(|t| poly(&al, t)).collect::<Vec<_>>(),
    ));
    assert_eq!(
        ExactMatrix::from_rows(Rationals, 4, ours).unwrap().rank(),
        3
    );
    assert_eq!(
        ExactMatrix::from_rows(Rationals, 4, both).unwrap().rank(),
        3
    );
    assert!(rels.iter().all(|p| annihilates(&brick_a2(), p)));

    assert!(linear_relations_from_end(&s1s1()).unwrap().is_empty());
    let rels = linear_relations_from_end(&kronecker_12()).unwrap();
    assert_eq!(rels.len(), 8);
    assert!(rels.iter().all(|p| annihilates(&kronecker_12(), p)));
}

#[test]
fn linear_relations_are_members() {
    let m12 = kronecker_12();
    let h = build_brick_hom(&m12, false).unwrap();
    let ci = CommutatorIdeal::new(&h).unwrap();
    let gens = IdealGens::new(Rationals, &ci.alphabet, ci.ideal.generators().to_vec()).unwrap();
    for r in linear_relations_from_end(&m12).unwrap() {
        let target = r.rename(&ci.alphabet, |l| Some(l.to_string())).unwrap();
        assert!(
            ideal_membership(&gens, &target, 1).unwrap().is_member(),
            "{}",
            r.to_text()
        );
    }
}

#[test]
fn specialization_examples() {
    let h = kronecker_extension_hom();
    let s = specialize(&h, &[m(&[&[2]])], 1).unwrap();
    assert_eq!(
        s.rep,
        rep(kronecker(), &[1, 1], vec![m(&[&[1]]), m(&[&[2]])])
    );
    let s = specialize(&h, &[m(&[&[1, 0], &[0, 1]])], 2).unwrap();
    assert_eq!(s.dims, DimVector::parse("1=2, 2=2").unwrap());

    let b = build_brick_hom(&kronecker_12(), false).unwrap();
    assert_eq!(specialize(&b, &[], 1).unwrap().rep, kronecker_12());
    assert!(matches!(
        specialize(&h, &[], 1),
        Err(EpiError::SizeMismatch { .. })
    ));
    assert!(matches!(
        specialize(&h, &[m(&[&[1]])], 2),
        Err(EpiError::SizeMismatch { .. })
    ));
}

#[test]
fn refutation_examples() {
    let brick = build_brick_hom(&brick_a2(), false).unwrap();
    let r = specialization_refutation_test(&brick, 20, &[1, 2], 7).unwrap();
    assert_eq!(r.outcome, RefutationOutcome::Pass);
    assert_eq!(r.trials.len(), 40);

    let flagged = build_brick_hom(&s1s1(), true).unwrap();
    let r = specialization_refutation_test(&flagged, 20, &[1], 7).unwrap();
    match r.outcome {
        RefutationOutcome::Refuted(w) => {
            assert_eq!((w.path_end_dim, w.target_end_dim), (4, 1));
            assert_eq!(w.size, 1);
        }
        other => panic!("{other:?}"),
    }

    let empty_q = Quiver::new::<&str>(&[], &[]).unwrap();
    let h = AlgebraHom::new(Rationals, empty_q, Alphabet::empty(), 0, vec![], vec![]).unwrap();
    let r = specialization_refutation_test(&h, 5, &[1, 2], 1).unwrap();
    assert_eq!(r.outcome, RefutationOutcome::Pass);
    assert_eq!(
        verify_epimorphism(&h, 2).unwrap().verdict,
        Verdict::Verified { degree: 0 }
    );
}

#[test]
fn refutation_over_prime_field() {
    let f = PrimeField::new(7).unwrap();
    let s1 = Representation::simple(f, a2(), "1").unwrap();
    let h = build_brick_hom(&direct_sum(&s1, &s1).unwrap(), true).unwrap();
    // F_7 does not reduce into F_101, so trials run over F_7 itself.
    let r = specialization_refutation_test(&h, 3, &[1], 0).unwrap();
    assert_eq!(r.screening_field, "fp:7");
    assert!(matches!(r.outcome, RefutationOutcome::Refuted(_)));
    assert!(r.trials[0].confirmed.is_none());

    let q = build_brick_hom(&s1s1(), true).unwrap();
    let r = specialization_refutation_test(&q, 3, &[1], 0).unwrap();
    assert_eq!(r.screening_field, "fp:101");
    assert_eq!(r.trials[0].confirmed, Some((4, 1)));
}

#[test]
fn combined_verdicts() {
    let w = Witness {
        size: 1,
        trial: 0,
        assignment: vec![],
        path_end_dim: 2,
        target_end_dim: 1,
    };
    let refuted = RefutationOutcome::Refuted(w.clone());
    let verified = Verdict::Verified { degree: 1 };
    let open = Verdict::Undetermined { degree_bound: 2 };
    assert_eq!(
        combine(&verified, Some(&refuted)),
        Verdict::Refuted { witness: w }
    );
    assert_eq!(combine(&verified, Some(&RefutationOutcome::Pass)), verified);
    assert_eq!(combine(&open, Some(&RefutationOutcome::Pass)), open);
    assert_eq!(combine(&open, None), open);
}

#[test]
fn report_json_is_deterministic() {
    let h = build_brick_hom(&s1s1(), true).unwrap();
    let run = || {
        let ideal = verify_epimorphism(&h, 2).unwrap();
        let spec = specialization_refutation_test(&h, 20, &[1, 2], 42).unwrap();
        EpiReport::new(&h, ideal, Some(spec)).to_json()
    };
    let a = run();
    assert_eq!(a, run());
    assert!(a.contains("\"schema\": 1"));
    assert!(a.contains("\"status\": \"refuted\""));
}

#[test]
fn hom_json_round_trip() {
    for h in [
        kronecker_extension_hom(),
        glue_vertex(&kronecker_12(), "2").unwrap(),
        build_brick_hom(&s1s1(), true).unwrap(),
    ] {
        let text = h.to_json();
        assert_eq!(field_of_hom_json(&text).unwrap(), Rationals.kind());
        let back = AlgebraHom::from_json(Rationals, &text).unwrap();
        assert_eq!(back, h);
        assert_eq!(back.to_json(), text);
    }
    let f = PrimeField::new(5).unwrap();
    assert!(matches!(
        AlgebraHom::from_json(f, &kronecker_extension_hom().to_json()),
        Err(EpiError::Json(_))
    ));
    let broken = kronecker_extension_hom()
        .to_json()
        .replace("\"x_b_1_1\"\n", "\"x_b_1_1 + 1\"\n");
    assert!(AlgebraHom::from_json(Rationals, &broken).is_err());
}

#[test]
fn glued_quiver_examples() {
    let one = DimVector::parse("s=1").unwrap();
    let one_t = DimVector::parse("t=1").unwrap();
    let c = |s: &str, t: &str| Connector {
        source: s.into(),
        target: t.into(),
        direction: ConnectorDirection::OneToTwo,
    };
    let q = glued_quiver(0, 0, &one, &one_t, &[c("s", "t")]).unwrap();
    assert_eq!(q.vertices(), ["v1", "v2"]);
    assert_eq!(q.arrows().len(), 1);
    assert!(q.is_acyclic());

    let q = glued_quiver(
        1,
        0,
        &DimVector::parse("s=2").unwrap(),
        &DimVector::parse("t=3").unwrap(),
        &[c("s", "t")],
    )
    .unwrap();
    let loops = q.arrows().iter().filter(|a| a.source == a.target).count();
    let forward = q
        .arrows()
        .iter()
        .filter(|a| a.source == 0 && a.target == 1)
        .count();
    assert_eq!((loops, forward), (1, 6));

    let q = glued_quiver(2, 1, &one, &one_t, &[]).unwrap();
    assert_eq!(q.arrows().len(), 3);
    assert!(!q.is_acyclic());

    assert_eq!(
        glued_quiver(0, 0, &one, &one_t, &[c("t", "t")]),
        Err(EpiError::EndpointMismatch("t".into()))
    );
    let back = Connector {
        direction: ConnectorDirection::TwoToOne,
        ..c("t", "s")
    };
    let q = glued_quiver(0, 0, &DimVector::parse("s=2").unwrap(), &one_t, &[back]).unwrap();
    assert!(q.arrows().iter().all(|a| a.source == 1 && a.target == 0));
    assert_eq!(q.arrows().len(), 2);
}

fn small_brick() -> impl Strategy<Value = Representation<PrimeField>> {
    (0u64..1000, 1usize..=2, 1usize..=3).prop_filter_map("brick", |(seed, d1, d2)| {
        use rand::SeedableRng;
        let f = PrimeField::new(101).unwrap();
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
        let m =
            crate::quiverrep::random_representation(f, &kronecker(), &[d1, d2], &mut rng).ok()?;
        (end_dim(&m).ok()? == 1).then_some(m)
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn brick_homs_verify_at_degree_one(m in small_brick()) {
        let h = build_brick_hom(&m, false).unwrap();
        prop_assert_eq!(verify_epimorphism(&h, 1).unwrap().verdict, Verdict::Verified { degree: 1 });
        prop_assert_eq!(linear_relations_from_end(&m).unwrap().len(), m.total_dim().pow(2) - 1);
    }

    #[test]
    fn specializations_scale_dimensions(m in small_brick(), seed in 0u64..100, ell in 1usize..=2) {
        use rand::{Rng, SeedableRng};
        let h = glue_vertex(&m, "2");
        prop_assume!(h.is_ok());
        let h = h.unwrap();
        let f = h.field();
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
        let mats: Vec<_> = (0..h.alphabet().len())
            .map(|_| {
                let data = (0..ell * ell).map(|_| f.from_i64(rng.random_range(-2..=2))).collect();
                ExactMatrix::new(f, ell, ell, data).unwrap()
            })
            .collect();
        let s = specialize(&h, &mats, ell).unwrap();
        let mut alpha: Vec<usize> = m.dims().to_vec();
        alpha.push(1);
        let expected: Vec<usize> = alpha.iter().map(|d| d * ell).collect();
        prop_assert_eq!(s.rep.dims(), &expected[..]);
    }

    #[test]
    fn extension_structure_and_generation(m in small_brick()) {
        let q3 = Quiver::parse("vertices 1 2\narrow a 1 2\narrow b 1 2\narrow c 1 2").unwrap();
        let h = extend_add_arrows(&m, &q3).unwrap();
        prop_assert!(h.check_structure().is_ok());
        prop_assert!(generation_identity_check(&h).unwrap());
        prop_assert_eq!(h.alphabet().len(), m.dims()[0] * m.dims()[1]);
    }
}

#[test]
fn default_degree_bounds() {
    // Constant images: generators and targets are linear in the v letters.
    assert_eq!(
        default_degree_bound(&build_brick_hom(&brick_a2(), false).unwrap()).unwrap(),
        4
    );
    // One letter: V·x − x·V and x·v_11 − v_11·x are quadratic.
    assert_eq!(default_degree_bound(&kronecker_extension_hom()).unwrap(), 6);
    // Every commutator vanishes, so only the targets count.
    assert_eq!(
        default_degree_bound(&build_brick_hom(&s1s1(), true).unwrap()).unwrap(),
        3
    );
}
