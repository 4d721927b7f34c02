use submax_core::liealg::{AlgebraParams, BasisIndex, GVector, LieAlgebra};
use submax_core::linalg::Echelon;
use submax_core::lwv::{annihilator_basis, closed_form_lwv, ModuleId};
use submax_core::tanaka::*;

fn alg(n: usize, m: usize) -> LieAlgebra {
    LieAlgebra::try_new(n, m).unwrap()
}

fn grid() -> Vec<(ModuleId, usize, usize)> {
    let mut out = Vec::new();
    for id in ModuleId::ALL {
        for n in 2..=6 {
            for m in 2..=4 {
                if id.supports(n) {
                    out.push((id, n, m));
                }
            }
        }
    }
    out
}

fn same_span(a: &[GVector], b: &[GVector]) -> bool {
    let ea = Echelon::from_vectors(a.iter().map(|v| v.to_sparse()).collect::<Vec<_>>().iter());
    let eb = Echelon::from_vectors(b.iter().map(|v| v.to_sparse()).collect::<Vec<_>>().iter());
    a.iter().all(|v| eb.contains(&v.to_sparse()))
        && b.iter().all(|v| ea.contains(&v.to_sparse()))
        && ea.rank() == eb.rank()
}

#[test]
fn computed_annihilator_matches_generators() {
    for (id, n, m) in grid() {
        let g = alg(n, m);
        let phi = closed_form_lwv(&g, id).unwrap().cochain;
        let computed = annihilator(&g, &phi).unwrap();
        let listed = annihilator_basis(&g, id).unwrap();
        assert!(same_span(&computed, &listed), "{id} ({n},{m})");
    }
}

#[test]
fn bounds_and_rigidity() {
    for (id, n, m) in grid() {
        let g = alg(n, m);
        let phi = closed_form_lwv(&g, id).unwrap().cochain;
        let a = a_phi(&g, &phi).unwrap();
        assert_eq!(
            a.total_dim(),
            submax_bound(g.params(), id).unwrap(),
            "{id} ({n},{m})"
        );
        assert_eq!(submax_bound_computed(&g, id).unwrap(), a.total_dim());
        let rigid = is_prolongation_rigid(g.params(), id).unwrap();
        assert_eq!(rigid, a.a_one().is_empty(), "{id} ({n},{m})");
        if !rigid {
            assert_eq!(a.a_one(), &[GVector::basis(BasisIndex::Y)]);
        }
        assert!(is_subalgebra(&g, &a.basis()), "{id} ({n},{m})");
    }
}

#[test]
fn prolongation_examples() {
    let g = alg(4, 2);
    let p = tanaka_prolongation(&g, &annihilator_basis(&g, ModuleId::A2tr).unwrap()).unwrap();
    assert!(p.a_one().is_empty());
    let g = alg(2, 3);
    let p = tanaka_prolongation(&g, &annihilator_basis(&g, ModuleId::B4).unwrap()).unwrap();
    assert_eq!(p.a_one().len(), 1);
    assert_eq!(
        submax_bound(AlgebraParams::new(2, 3).unwrap(), ModuleId::B4).unwrap(),
        18
    );
}

#[test]
fn complements() {
    for (id, n, m) in grid() {
        let g = alg(n, m);
        let r = verify_complement(&g, id).unwrap();
        assert!(r.passed(), "{id} ({n},{m}): {:?}", r.failures());
    }
    let g = alg(4, 3);
    assert!(complement(&g, ModuleId::A2tr)
        .unwrap()
        .contains(&GVector::basis(BasisIndex::Y)));
    let g = alg(3, 3);
    assert!(complement(&g, ModuleId::A2tf)
        .unwrap()
        .contains(&GVector::basis(BasisIndex::e(2, 3))));
}

#[test]
fn orbit_dimension_invariant() {
    for (id, n, m) in [
        (ModuleId::B4, 2, 3),
        (ModuleId::A2tr, 4, 3),
        (ModuleId::A2tf, 3, 3),
    ] {
        let (a, b) = orbit_spot_check(&alg(n, m), id).unwrap();
        assert_eq!(a, b);
    }
}
