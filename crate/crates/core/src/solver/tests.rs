use super::*;
use crate::equation::tests::{worked_example, tau_basis};
use crate::equation::CloudPoint;
use crate::scalar::SymbolId;
use crate::series::OperatorKind;

fn sc(id: SymbolId, k: i64) -> Scalar {
    Scalar::symbol(id).sub(&Scalar::from_int(k))
}

fn series(b: &ExponentBasis, terms: Vec<(Exponent, Scalar)>) -> GenSeries {
    GenSeries::from_terms(terms, b).unwrap()
}

fn r2(b: &ExponentBasis, tau: SymbolId) -> GenSeries {
    series(b, vec![(Exponent::from_int(1), Scalar::one()), (Exponent::generator(tau), Scalar::one())])
}

fn z_bar(b: &ExponentBasis, tau: SymbolId) -> GenSeries {
    let t = Scalar::symbol(tau);
    let c5 = sc(tau, 5).mul(&Scalar::from_int(3).sub(&t)).inv().unwrap();
    let c4t = t.add(&Scalar::one()).div(&sc(tau, 3).mul(&Scalar::from_int(4))).unwrap();
    series(
        b,
        vec![
            (Exponent::from_int(1), Scalar::one()),
            (Exponent::generator(tau), Scalar::one()),
            (Exponent::from_int(2), Scalar::one()),
            (Exponent::from_int(3), Scalar::one()),
            (Exponent::from_int(5), c5),
            (Exponent::from_int(4).add(&Exponent::generator(tau)), c4t),
        ],
    )
}

fn w_bar(b: &ExponentBasis, tau: SymbolId) -> GenSeries {
    let t = Scalar::symbol(tau);
    let d5 = sc(tau, 4).mul(&sc(tau, 4)).div(&sc(tau, 3).mul(&sc(tau, 5))).unwrap();
    let c4t = t.add(&Scalar::one()).div(&sc(tau, 3).mul(&Scalar::from_int(4))).unwrap().neg();
    let c6 = Scalar::from_int(3).div(&sc(tau, 6).mul(&sc(tau, 3))).unwrap();
    series(
        b,
        vec![
            (Exponent::from_int(1), Scalar::one()),
            (Exponent::generator(tau), Scalar::one()),
            (Exponent::from_int(2), Scalar::one()),
            (Exponent::from_int(5), d5),
            (Exponent::from_int(4).add(&Exponent::generator(tau)), c4t),
            (Exponent::from_int(6), c6),
        ],
    )
}

fn starts_with(s: &GenSeries, p: &GenSeries) -> bool {
    s.len() >= p.len() && s.terms()[..p.len()] == *p.terms()
}

#[test]
fn worked_example_admissible_and_branches() {
    let (b, tau) = tau_basis();
    let p = worked_example(&b, tau);
    assert!(check_admissible(&p, &r2(&b, tau), &b).unwrap().admissible);
    let bad = series(&b, vec![(Exponent::from_int(1), Scalar::from_int(2))]);
    let rep = check_admissible(&p, &bad, &b).unwrap();
    assert!(!rep.admissible);
    assert_eq!(rep.first_failure, Some(0));

    let c = complete(&p, &r2(&b, tau), &CompleteOptions::default(), &b).unwrap();
    let surv: Vec<_> = c.survivors().collect();
    assert_eq!(surv.len(), 2, "{:#?}", c.branches.iter().map(|x| x.branch.prefix.to_string_with(&b.table)).collect::<Vec<_>>());
    let z = z_bar(&b, tau);
    let w = w_bar(&b, tau);
    assert!(surv.iter().any(|r| starts_with(&r.branch.prefix, &z)));
    assert!(surv.iter().any(|r| starts_with(&r.branch.prefix, &w)));
    for r in &surv {
        assert!(check_admissible(&p, &r.branch.prefix, &b).unwrap().admissible);
        assert!(rank_audit(&p, &r.branch.prefix, &b).ok);
    }
}

#[test]
fn worked_example_steps() {
    let (b, tau) = tau_basis();
    let p = worked_example(&b, tau);
    let r3 = r2(&b, tau).add(&GenSeries::monomial(Scalar::one(), Exponent::from_int(2)), &b).unwrap();
    let st = BranchState::from_prefix(&p, &r3, &b).unwrap();
    let StepOutcome::Extensions { list, .. } = newton_step(&st, Policy::SidesAndVertexRoots, &Scalar::one(), &b).unwrap() else {
        panic!("expected extensions")
    };
    let got: Vec<(Exponent, Scalar)> = list.iter().map(|e| (e.nu.clone(), e.c.clone())).collect();
    let d5 = sc(tau, 4).mul(&sc(tau, 4)).div(&sc(tau, 3).mul(&sc(tau, 5))).unwrap();
    assert_eq!(got, vec![(Exponent::from_int(3), Scalar::one()), (Exponent::from_int(5), d5)]);

    let r1 = GenSeries::monomial(Scalar::one(), Exponent::from_int(1));
    let st = BranchState::from_prefix(&p, &r1, &b).unwrap();
    let StepOutcome::Extensions { list, .. } = newton_step(&st, Policy::SidesAndVertexRoots, &Scalar::one(), &b).unwrap() else {
        panic!("expected extensions")
    };
    assert!(list
        .iter()
        .any(|e| e.nu == Exponent::generator(tau) && e.multiplicity == Multiplicity::Free && e.source == Source::VertexIndicial));
}

#[test]
fn worked_example_stabilization() {
    let (b, tau) = tau_basis();
    let p = worked_example(&b, tau);
    let rep = stabilization_check(&p, &r2(&b, tau), &b).unwrap();
    assert!(!rep.stabilized);
    assert_eq!(rep.pivot.unwrap().height, 2);

    let z = z_bar(&b, tau);
    let z4 = series(&b, z.terms()[..4].to_vec());
    let rep = stabilization_check(&p, &z4, &b).unwrap();
    assert!(rep.stabilized, "{:?}", rep.witness);
    assert_eq!(rep.pivot, Some(CloudPoint::new(Exponent::from_int(3), 1)));
    assert_eq!(rep.sigma, vec![Scalar::symbol(tau)]);

    let st = BranchState::from_prefix(&p, &z4, &b).unwrap();
    let ext = stabilized_extend(&st, 2, &b).unwrap();
    assert_eq!(ext.prefix, z);
}

#[test]
fn obstruction() {
    let b = ExponentBasis::new(6);
    for (op, k, c) in [
        (OperatorKind::Euler, 2, Scalar::one()),
        (OperatorKind::QDifference(Scalar::from_int(2)), 4, Scalar::from_ratio(1, 2)),
    ] {
        let y0 = Equation::y(1, op.clone(), 0);
        let y1 = Equation::y(1, op.clone(), 1);
        let f = series(&b, vec![(Exponent::from_int(1), Scalar::from_int(-1)), (Exponent::from_int(2), Scalar::one())]);
        let p = Equation::constant(1, op.clone(), GenSeries::constant(Scalar::from_int(k)))
            .mul(&y0, &b)
            .unwrap()
            .sub(&y1, &b)
            .unwrap()
            .add(&Equation::constant(1, op.clone(), f), &b)
            .unwrap();
        let r = GenSeries::monomial(c, Exponent::from_int(1));
        assert!(check_admissible(&p, &r, &b).unwrap().admissible);
        let done = complete(&p, &r, &CompleteOptions::default(), &b).unwrap();
        assert_eq!(done.branches.len(), 1);
        match &done.branches[0].outcome {
            BranchOutcome::Obstruction(o) => {
                assert_eq!(o.nu, Some(Exponent::from_int(2)));
                assert_eq!(o.phi, Some(UniPoly::constant(Scalar::one())));
            }
            o => panic!("{o:?}"),
        }
    }
}

#[test]
fn algebraic_and_autonomous() {
    let b = ExponentBasis::new(6);
    let op = OperatorKind::Euler;
    let y0 = Equation::y(0, op.clone(), 0);
    let p = y0.mul(&y0, &b).unwrap().sub(&Equation::constant(0, op, GenSeries::monomial(Scalar::one(), Exponent::from_int(3))), &b).unwrap();
    let opts = CompleteOptions { policy: Policy::SidesOnly, ..Default::default() };
    let c = complete(&p, &GenSeries::zero(), &opts, &b).unwrap();
    let got: Vec<String> = c.branches.iter().map(|r| r.branch.prefix.to_string_with(&b.table)).collect();
    assert_eq!(got, vec!["-x^(3/2)", "x^(3/2)"]);
    assert!(c.branches.iter().all(|r| r.outcome == BranchOutcome::ExactSolution && r.residual.is_exact_zero()));

    let dx = OperatorKind::OrdinaryDx;
    let y0 = Equation::y(1, dx.clone(), 0);
    let y1 = Equation::y(1, dx.clone(), 1);
    let four = Equation::constant(1, dx.clone(), GenSeries::constant(Scalar::from_int(4)));
    let p = y1.mul(&y1, &b).unwrap().sub(&four.mul(&y0, &b).unwrap(), &b).unwrap();
    let res = autonomous_first_order(&p, &Scalar::zero(), &Scalar::zero(), &CompleteOptions::default(), &b).unwrap();
    let s = res.primary().unwrap();
    assert_eq!(s.outcome, BranchOutcome::ExactSolution);
    assert_eq!(s.branch.prefix, GenSeries::monomial(Scalar::one(), Exponent::from_int(2)));
    assert!(convergence_certificate(&p, &s.branch.prefix, &b).unwrap().is_regular());

    let lin = y1.sub(&y0, &b).unwrap();
    let res = autonomous_first_order(&lin, &Scalar::zero(), &Scalar::zero(), &CompleteOptions::default(), &b).unwrap();
    assert!(res.primary().unwrap().branch.prefix.is_zero());
}

#[test]
fn certificates() {
    let b = ExponentBasis::new(6);
    let x = |e: i64| GenSeries::monomial(Scalar::one(), Exponent::from_int(e));
    // Euler's series sum n! x^(n+1), truncated
    let mut terms = Vec::new();
    let mut f = Scalar::one();
    for n in 0..6i64 {
        if n > 0 {
            f = f.mul(&Scalar::from_int(n));
        }
        terms.push((Exponent::from_int(n + 1), f.clone()));
    }
    let s = series(&b, terms).with_valid_to(Some(Exponent::from_int(7)), &b).unwrap();
    // x^2 y' - y + x = 0 written with d/dx and with x d/dx
    for (op, xk, orders) in [(OperatorKind::OrdinaryDx, 2, [0, 1]), (OperatorKind::Euler, 1, [0, 1])] {
        let y0 = Equation::y(1, op.clone(), 0);
        let y1 = Equation::y(1, op.clone(), 1);
        let p = y0
            .sub(&Equation::constant(1, op.clone(), x(xk)).mul(&y1, &b).unwrap(), &b)
            .unwrap()
            .sub(&Equation::constant(1, op.clone(), x(1)), &b)
            .unwrap();
        let res = p.evaluate_residual(&series(&b, s.terms().to_vec()), &b).unwrap();
        assert_eq!(res.ord().unwrap(), &Exponent::from_int(7));
        let cert = convergence_certificate(&p, &s, &b).unwrap();
        assert!(!cert.is_regular());
        let want: Vec<_> = orders.iter().map(|&k| Some(Exponent::from_int(k))).collect();
        assert_eq!(cert.orders(), want.as_slice());
    }

    let trivial = Equation::y(1, OperatorKind::OrdinaryDx, 1);
    match convergence_certificate(&trivial, &GenSeries::zero(), &b).unwrap() {
        Certificate::RegularSingular { lambda, .. } => assert_eq!(lambda, Exponent::from_int(-1)),
        c => panic!("{c:?}"),
    }
}
