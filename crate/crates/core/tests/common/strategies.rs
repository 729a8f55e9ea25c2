use std::collections::BTreeMap;

use num_rational::BigRational;
use proptest::prelude::*;

use puiseux_core::equation::{CloudPoint, Equation, MultiIndex};
use puiseux_core::exponent::{Exponent, ExponentBasis};
use puiseux_core::scalar::{Scalar, SymbolId};
use puiseux_core::series::{GenSeries, OperatorKind};

use super::fixtures::rat;

pub fn small_rat(num: i64, den: i64) -> impl Strategy<Value = BigRational> + Clone {
    (-num..=num, 1..=den).prop_map(|(n, d)| rat(n, d))
}

/// `a + b tau + c tau^2 + d i` with small integer parts.
pub fn scalar_poly(tau: SymbolId) -> impl Strategy<Value = Scalar> + Clone {
    (-3i64..=3, -2i64..=2, prop_oneof![4 => Just(0i64), 1 => -1i64..=1], prop_oneof![4 => Just(0i64), 1 => -1i64..=1]).prop_map(
        move |(a, b, c, d)| {
            let t = Scalar::symbol(tau);
            Scalar::from_int(a)
                .add(&t.mul(&Scalar::from_int(b)))
                .add(&t.mul(&t).mul(&Scalar::from_int(c)))
                .add(&Scalar::i().mul(&Scalar::from_int(d)))
        },
    )
}

pub fn nonzero_scalar(tau: SymbolId) -> impl Strategy<Value = Scalar> + Clone {
    scalar_poly(tau).prop_filter("nonzero", |s| !s.is_zero())
}

/// Element of `Q(i)(tau)`: a ratio of small polynomials.
pub fn field_scalar(tau: SymbolId) -> impl Strategy<Value = Scalar> + Clone {
    (scalar_poly(tau), nonzero_scalar(tau)).prop_map(|(a, b)| a.div(&b).unwrap())
}

/// Rational scalars only: keeps solver runs inside roots it can extract exactly.
pub fn rational_scalar() -> impl Strategy<Value = Scalar> + Clone {
    small_rat(4, 2).prop_map(Scalar::from_rational)
}

pub fn exponent(tau: SymbolId) -> impl Strategy<Value = Exponent> + Clone {
    (small_rat(8, 3), prop_oneof![2 => Just(0i64), 1 => -1i64..=2])
        .prop_map(move |(q, k)| Exponent::new(q, [(tau, rat(k, 1))]))
}

/// `q0 + q1 tau` with `q0, q1 >= 0`, not both zero.
pub fn positive_exponent(tau: SymbolId) -> impl Strategy<Value = Exponent> + Clone {
    ((0i64..=8, 1i64..=3), prop_oneof![2 => Just(0i64), 1 => Just(1i64)])
        .prop_filter("positive", |((n, _), k)| *n > 0 || *k > 0)
        .prop_map(move |((n, d), k)| Exponent::new(rat(n, d), [(tau, rat(k, 1))]))
}

pub fn rational_exponent(max: i64) -> impl Strategy<Value = Exponent> + Clone {
    (0..=max, 1i64..=2).prop_map(|(n, d)| Exponent::from_ratio(n, d))
}

pub fn series_with(
    exps: impl Strategy<Value = Exponent> + Clone,
    coeffs: impl Strategy<Value = Scalar> + Clone,
    max_terms: usize,
    basis: ExponentBasis,
) -> impl Strategy<Value = GenSeries> + Clone {
    prop::collection::vec((exps, coeffs), 1..=max_terms).prop_map(move |t| GenSeries::from_terms(t, &basis).unwrap())
}

pub fn series(tau: SymbolId, basis: ExponentBasis) -> impl Strategy<Value = GenSeries> + Clone {
    series_with(exponent(tau), nonzero_scalar(tau), 3, basis)
}

/// Generalized polynomial with positive exponents over `{1, tau}`.
pub fn segment(tau: SymbolId, basis: ExponentBasis) -> impl Strategy<Value = GenSeries> + Clone {
    series_with(positive_exponent(tau), nonzero_scalar(tau), 3, basis)
}

pub fn multi_index(order: usize, max_degree: u32) -> impl Strategy<Value = MultiIndex> + Clone {
    prop::collection::vec(0..=max_degree, order + 1)
        .prop_filter("degree", move |v| v.iter().sum::<u32>() <= max_degree)
        .prop_map(MultiIndex)
}

pub fn operator() -> impl Strategy<Value = OperatorKind> + Clone {
    prop_oneof![Just(OperatorKind::Euler), Just(OperatorKind::OrdinaryDx)]
}

/// Sum of `coeff * y^rho` with rationally supported coefficients.
pub fn equation_with(
    order: usize,
    op: OperatorKind,
    coeffs: impl Strategy<Value = Scalar> + Clone,
    basis: ExponentBasis,
) -> impl Strategy<Value = Equation> + Clone {
    let term = (multi_index(order, 2), series_with(rational_exponent(4), coeffs, 2, basis.clone()));
    prop::collection::vec(term, 1..=4).prop_filter_map("nonconstant equation", move |terms| {
        let mut map: BTreeMap<MultiIndex, GenSeries> = BTreeMap::new();
        for (rho, s) in terms {
            let v = match map.get(&rho) {
                Some(old) => old.add(&s, &basis).unwrap(),
                None => s,
            };
            map.insert(rho, v);
        }
        let p = Equation::new(order, op.clone(), map).unwrap();
        (p.degree() >= 1).then_some(p)
    })
}

pub fn equation(tau: SymbolId, basis: ExponentBasis) -> impl Strategy<Value = Equation> + Clone {
    (0usize..=1, operator()).prop_flat_map(move |(n, op)| equation_with(n, op, nonzero_scalar(tau), basis.clone()))
}

pub fn rational_equation(basis: ExponentBasis) -> impl Strategy<Value = Equation> + Clone {
    (0usize..=1, operator()).prop_flat_map(move |(n, op)| {
        equation_with(n, op, rational_scalar().prop_filter("nonzero", |s| !s.is_zero()), basis.clone())
    })
}

pub fn cloud(tau: SymbolId) -> impl Strategy<Value = Vec<CloudPoint>> + Clone {
    prop::collection::vec((exponent(tau), 0u32..=4), 1..=7)
        .prop_map(|v| v.into_iter().map(|(a, h)| CloudPoint::new(a, h)).collect())
}
