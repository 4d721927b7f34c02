use proptest::prelude::*;
use submax_core::jet::fields::{is_symmetry, span_report, symmetry_span};
use submax_core::jet::invariants::{a2_trace, a2_tracefree, b4, nonvanishing_c_class, wilczynski};
use submax_core::jet::*;
use submax_core::liealg::AlgebraParams;
use submax_core::lwv::ModuleId;
use submax_core::models::Branch;
use submax_core::poly::RatFunc;
use submax_core::scalar::{frac, int, Scalar};

fn params(n: usize, m: usize) -> AlgebraParams {
    AlgebraParams::new(n, m).unwrap()
}

fn model(n: usize, m: usize, id: ModuleId, br: Option<Branch>) -> OdeSystem {
    OdeSystem::builtin(params(n, m), id, br).unwrap()
}

#[test]
fn tracefree_model_component() {
    for (n, m) in [(2, 2), (3, 3), (4, 2)] {
        let ode = model(n, m, ModuleId::A2tf, None);
        let tf = a2_tracefree(&ode);
        assert_eq!(tf.get(&[1, 2, 2]), RatFunc::constant(int(2)));
        if n >= 3 {
            assert!(a2_trace(&ode).unwrap().is_zero());
        }
    }
}

#[test]
fn trace_model_trace() {
    for (n, m) in [(3, 2), (4, 3), (5, 4)] {
        let ode = model(n, m, ModuleId::A2tr, None);
        let s = *ode.space();
        let tr = a2_trace(&ode).unwrap();
        let k = frac(((m + 1) * (n + 1)) as i64, n as i64);
        assert_eq!(
            tr.get(&[1]),
            RatFunc::one()
                .checked_div(&s.u(n - 1, 1))
                .unwrap()
                .scale(&k)
        );
        assert_eq!(tr.components.len(), 1);
        assert!(a2_tracefree(&ode).is_zero());
    }
}

#[test]
fn b4_models() {
    for m in 2..=4 {
        for br in [Branch::Plus, Branch::Minus] {
            let ode = model(2, m, ModuleId::B4, Some(br));
            assert!(
                !b4(&ode).unwrap().get("B4").unwrap().is_zero(),
                "{br} m={m}"
            );
            assert!(a2_tracefree(&ode).is_zero());
        }
    }
}

#[test]
fn branch_verdicts() {
    let mut cases = Vec::new();
    for m in 2..=4 {
        cases.push((model(2, m, ModuleId::B4, Some(Branch::Plus)), ModuleId::B4));
        cases.push((model(2, m, ModuleId::B4, Some(Branch::Minus)), ModuleId::B4));
        for n in 2..=5 {
            cases.push((model(n, m, ModuleId::A2tf, None), ModuleId::A2tf));
            if n >= 3 {
                cases.push((model(n, m, ModuleId::A2tr, None), ModuleId::A2tr));
            }
        }
    }
    for (ode, id) in cases {
        assert_eq!(
            nonvanishing_c_class(&ode).unwrap(),
            vec![id],
            "{}",
            ode.to_text()
        );
    }
    for n in 2..=4 {
        assert!(nonvanishing_c_class(&OdeSystem::trivial(n, 3).unwrap())
            .unwrap()
            .is_empty());
    }
}

#[test]
fn wilczynski_on_linear_forms() {
    // u_4 = −P_1 u_1 − P_0 u with constant P's: Laguerre–Forsyth form
    let s = JetSpace::new(2, 3).unwrap();
    let p1 = [[int(1), int(2)], [int(-3), int(5)]];
    let p0 = [[int(7), int(0)], [int(1), int(-2)]];
    let rhs: Vec<RatFunc> = (0..2)
        .map(|a| {
            let mut f = RatFunc::zero();
            for b in 0..2 {
                f = &f - &s.u(1, b + 1).scale(&p1[a][b]);
                f = &f - &s.u(0, b + 1).scale(&p0[a][b]);
            }
            f
        })
        .collect();
    let ode = OdeSystem::new(3, 2, rhs).unwrap();
    let w = wilczynski(&ode).unwrap();
    assert_eq!(w.normalized, Some(true));
    assert!(w.get("Theta_2").unwrap().is_zero());
    for a in 0..2 {
        for b in 0..2 {
            let idx = [a + 1, b + 1];
            assert_eq!(
                w.get("Theta_3").unwrap().get(&idx),
                RatFunc::constant(&p1[a][b] * int(12))
            );
            assert_eq!(
                w.get("Theta_4").unwrap().get(&idx),
                RatFunc::constant(&p0[a][b] * int(120))
            );
        }
    }
    let mut rhs = vec![s.u(1, 1), RatFunc::zero()];
    let ode = OdeSystem::new(3, 2, rhs.clone()).unwrap();
    let w = wilczynski(&ode).unwrap();
    assert_eq!(
        w.get("Theta_3").unwrap().get(&[1, 1]),
        RatFunc::constant(int(-12))
    );
    rhs[1] = s.u(3, 2);
    let w = wilczynski(&OdeSystem::new(3, 2, rhs).unwrap()).unwrap();
    assert_eq!(w.normalized, Some(false));
}

#[test]
fn point_symmetry_examples() {
    let plus = model(2, 2, ModuleId::B4, Some(Branch::Plus));
    let s = JetSpace::new(2, 0).unwrap();
    assert!(is_symmetry(&plus, &PointVectorField::d_u(2, 1, RatFunc::one())).unwrap());
    assert!(is_symmetry(&plus, &PointVectorField::d_t(2)).unwrap());
    // u_k has weight −k under t∂_t and both sides of u₃ = 3u₂u₂/(2u₁) weigh −3
    let mut t_dt = PointVectorField::zero(2);
    t_dt.tau = s.t();
    assert!(is_symmetry(&plus, &t_dt).unwrap());
    // t²∂_{u¹}: the linearized residual −2t∂f¹/∂u₁¹ − 2∂f¹/∂u₂¹ is nonzero
    let bad = PointVectorField::d_u(2, 1, s.t().pow(2));
    assert!(!is_symmetry(&plus, &bad).unwrap());
    assert!(symmetry_span(&plus, &[t_dt, bad]).is_err());
}

#[test]
fn minus_model_symmetry_algebra() {
    for m in 2..=4 {
        let ode = model(2, m, ModuleId::B4, Some(Branch::Minus));
        let fields = minus_model_symmetries(m);
        let r = symmetry_span(&ode, &fields).unwrap();
        assert_eq!(r.dim, m * m + 2 * m + 3);
        assert_eq!(r.dim, params(2, m).dim() - m);
        assert!(r.closed, "{:?}", r.open_pairs);
        assert_eq!(transitivity_rank(m).unwrap(), (2 * m + 1, 2 * m + 1));
    }
}

#[test]
fn field_counts() {
    assert_eq!(span_report(&minus_model_symmetries(2)).dim, 11);
    assert_eq!(span_report(&minus_model_symmetries(3)).dim, 18);
}

fn space() -> JetSpace {
    JetSpace::new(2, 4).unwrap()
}

/// Random polynomial over the variables of order ≤ 3 in m = 2.
fn poly_strategy() -> impl Strategy<Value = RatFunc> {
    let factor = (0usize..9, 1u32..=2);
    prop::collection::vec((-3i64..=3, prop::collection::vec(factor, 0..3)), 1..4).prop_map(
        |terms| {
            let mut acc = RatFunc::zero();
            for (c, factors) in terms {
                let mut mono = RatFunc::constant(int(c));
                for (v, e) in factors {
                    mono = &mono * &RatFunc::var(v).pow(e);
                }
                acc = &acc + &mono;
            }
            acc
        },
    )
}

fn expr_strategy() -> impl Strategy<Value = RatFunc> {
    (poly_strategy(), poly_strategy()).prop_map(|(a, b)| {
        let den = &b * &b + RatFunc::one();
        debug_assert!(!den.is_zero());
        a.checked_div(&den).unwrap()
    })
}

fn field_strategy() -> impl Strategy<Value = PointVectorField> {
    let zero_jet = || {
        prop::collection::vec((-3i64..=3, prop::collection::vec(0u16..=2, 3)), 1..3).prop_map(
            |terms| {
                let mut acc = RatFunc::zero();
                for (c, exps) in terms {
                    let mut mono = RatFunc::constant(int(c));
                    for (v, e) in exps.iter().enumerate() {
                        mono = &mono * &RatFunc::var(v).pow(*e as u32);
                    }
                    acc = &acc + &mono;
                }
                acc
            },
        )
    };
    (zero_jet(), zero_jet(), zero_jet())
        .prop_map(|(tau, p1, p2)| PointVectorField::new(2, tau, vec![p1, p2]).unwrap())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn total_derivative_is_a_derivation(a in expr_strategy(), b in expr_strategy()) {
        let ode = model(3, 2, ModuleId::A2tr, None);
        let d = |e: &RatFunc| ode.total_derivative(e).unwrap();
        prop_assert_eq!(d(&(&a * &b)), &(&d(&a) * &b) + &(&a * &d(&b)));
        prop_assert_eq!(d(&(&a + &b)), &d(&a) + &d(&b));
    }

    #[test]
    fn prolongation_is_linear(x in field_strategy(), y in field_strategy(), c in -4i64..=4) {
        let c = Scalar::from_integer(c.into());
        let lhs = x.add(&y.scale(&c)).prolong(3).unwrap();
        let (px, py) = (x.prolong(3).unwrap(), y.prolong(3).unwrap());
        for k in 0..=3 {
            for a in 0..2 {
                prop_assert_eq!(&lhs.phi[k][a], &(&px.phi[k][a] + &py.phi[k][a].scale(&c)));
            }
        }
    }

    #[test]
    fn print_parse_roundtrip(e in expr_strategy()) {
        let s = space();
        prop_assert_eq!(s.parse(&s.format(&e)).unwrap(), e);
    }
}
