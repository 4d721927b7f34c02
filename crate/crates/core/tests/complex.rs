use num_traits::{One, Zero};
use proptest::prelude::*;
use submax_core::cochain::{ArgDomain, Cochain, Complex, Mono};
use submax_core::liealg::{BasisIndex, LieAlgebra};
use submax_core::scalar::{int, Scalar};

fn alg(n: usize, m: usize) -> LieAlgebra {
    LieAlgebra::try_new(n, m).unwrap()
}

fn unit(g: &LieAlgebra, mo: &Mono) -> Cochain {
    Cochain::monomial(g.params(), mo.clone(), <Scalar as One>::one())
}

/// ∂* built column by column from ∂ and the diagonal Gram matrices.
fn transpose_oracle(cx: &Complex, g: &LieAlgebra, lower: &[Mono], nu: &Mono) -> Cochain {
    let target = unit(g, nu);
    let mut out = Cochain::zero(g.params(), nu.args.len() - 1);
    for mu in lower {
        let c = cx.inner_product(&cx.differential(&unit(g, mu)), &target) / cx.norm2(mu);
        if !c.is_zero() {
            out.add_sorted(mu.clone(), c);
        }
    }
    out
}

#[test]
fn codifferential_matches_dense_transpose() {
    for (n, m) in [(2, 2), (3, 2)] {
        let g = alg(n, m);
        let cx = Complex::new(&g);
        for k in 1..=2 {
            let lower = cx.monomial_basis(k, None, ArgDomain::Negative);
            for nu in cx.monomial_basis(k + 1, None, ArgDomain::Negative) {
                let got = cx.codifferential(&unit(&g, &nu)).unwrap();
                assert_eq!(
                    got,
                    transpose_oracle(&cx, &g, &lower, &nu),
                    "({n},{m}) {nu:?}"
                );
            }
        }
    }
}

#[test]
fn codifferential_squares_to_zero() {
    let g = alg(3, 2);
    let cx = Complex::new(&g);
    for nu in cx
        .monomial_basis(3, None, ArgDomain::Negative)
        .iter()
        .step_by(7)
    {
        let once = cx.codifferential(&unit(&g, nu)).unwrap();
        assert!(cx.codifferential(&once).unwrap().is_zero(), "{nu:?}");
    }
}

#[test]
fn laplacian_not_identically_zero() {
    let g = alg(3, 2);
    let cx = Complex::new(&g);
    let mo = Mono::new(
        &[BasisIndex::v(0, 1), BasisIndex::v(1, 1)],
        BasisIndex::v(0, 1),
    );
    assert!(!cx.laplacian(&unit(&g, &mo)).unwrap().is_zero());
}

#[test]
fn hodge_dimensions_add_up() {
    for (n, m) in [(2, 2), (3, 2), (4, 2)] {
        let g = alg(n, m);
        let cx = Complex::new(&g);
        for k in 1..=2 {
            for b in cx.bigrades(k, ArgDomain::Negative) {
                let h = cx.hodge_dims(k, b).unwrap();
                assert!(h.balanced(), "({n},{m}) k={k} {h:?}");
            }
        }
    }
}

fn combo(g: &LieAlgebra, basis: &[Mono], picks: &[(usize, i64)], k: usize) -> Cochain {
    let mut c = Cochain::zero(g.params(), k);
    for &(i, x) in picks {
        c.add_sorted(basis[i % basis.len()].clone(), int(x));
    }
    c
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn codifferential_is_adjoint(
        n in 2usize..=4,
        m in 2usize..=3,
        k in 1usize..=2,
        a in prop::collection::vec((0usize..10_000, -4i64..=4), 1..5),
        b in prop::collection::vec((0usize..10_000, -4i64..=4), 1..5),
    ) {
        let g = alg(n, m);
        let cx = Complex::new(&g);
        let phi = combo(&g, &cx.monomial_basis(k, None, ArgDomain::Negative), &a, k);
        let psi = combo(&g, &cx.monomial_basis(k + 1, None, ArgDomain::Negative), &b, k + 1);
        let lhs = cx.inner_product(&cx.differential(&phi), &psi);
        let rhs = cx.inner_product(&phi, &cx.codifferential(&psi).unwrap());
        prop_assert_eq!(lhs, rhs);
    }
}
