use num_bigint::BigInt;
use num_rational::BigRational;

use puiseux_core::dsl::{parse_problem, Problem};
use puiseux_core::exponent::{Exponent, ExponentBasis};
use puiseux_core::scalar::{RatInterval, RefineHint, Scalar, SymbolId};
use puiseux_core::series::GenSeries;

pub const WORKED: &str = include_str!("../../../../problems/worked.pf");
pub const OBSTRUCTION: &str = include_str!("../../../../problems/obstruction.pf");
pub const QDIFF: &str = include_str!("../../../../problems/qdiff.pf");
pub const ALGEBRAIC: &str = include_str!("../../../../problems/algebraic.pf");
pub const AUTONOMOUS: &str = include_str!("../../../../problems/autonomous.pf");
pub const RANK_PI: &str = include_str!("../../../../problems/rank_pi.pf");

pub const CORPUS: [&str; 6] = [WORKED, OBSTRUCTION, QDIFF, ALGEBRAIC, AUTONOMOUS, RANK_PI];

pub fn rat(n: i64, d: i64) -> BigRational {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

/// `tau` enclosing pi/2.
pub fn tau_basis() -> (ExponentBasis, SymbolId) {
    let mut b = ExponentBasis::new(6);
    let id = b
        .declare("tau", RatInterval::new(rat(1570796, 1_000_000), rat(1570797, 1_000_000)), Some(RefineHint::PiMultiple(rat(1, 2))))
        .unwrap();
    (b, id)
}

pub fn worked() -> (Problem, SymbolId) {
    let p = parse_problem(WORKED).unwrap();
    let tau = p.basis.lookup("tau").unwrap();
    (p, tau)
}

pub fn tau_minus(tau: SymbolId, k: i64) -> Scalar {
    Scalar::symbol(tau).sub(&Scalar::from_int(k))
}

pub fn series(b: &ExponentBasis, terms: Vec<(Exponent, Scalar)>) -> GenSeries {
    GenSeries::from_terms(terms, b).unwrap()
}

pub fn xt(k: i64, tau: SymbolId) -> Exponent {
    Exponent::from_int(k).add(&Exponent::generator(tau))
}

/// `x + x^tau`
pub fn r2(b: &ExponentBasis, tau: SymbolId) -> GenSeries {
    series(b, vec![(Exponent::from_int(1), Scalar::one()), (Exponent::generator(tau), Scalar::one())])
}

/// `x + x^tau + x^2 + x^3`
pub fn z4(b: &ExponentBasis, tau: SymbolId) -> GenSeries {
    let mut t = r2(b, tau).into_terms();
    t.push((Exponent::from_int(2), Scalar::one()));
    t.push((Exponent::from_int(3), Scalar::one()));
    series(b, t)
}

/// `z(x) = x + x^tau + x^2 + x^3 + x^5/((tau-5)(3-tau)) + (tau+1)/(4(tau-3)) x^(4+tau) + ...`
pub fn z_bar(b: &ExponentBasis, tau: SymbolId) -> GenSeries {
    let t = Scalar::symbol(tau);
    let c5 = tau_minus(tau, 5).mul(&Scalar::from_int(3).sub(&t)).inv().unwrap();
    let c4t = t.add(&Scalar::one()).div(&tau_minus(tau, 3).mul(&Scalar::from_int(4))).unwrap();
    let mut terms = z4(b, tau).into_terms();
    terms.push((Exponent::from_int(5), c5));
    terms.push((xt(4, tau), c4t));
    series(b, terms)
}

/// `w(x) = x + x^tau + x^2 + d5 x^5 - (tau+1)/(4(tau-3)) x^(4+tau) + 3/((tau-6)(tau-3)) x^6 + ...`
pub fn w_bar(b: &ExponentBasis, tau: SymbolId) -> GenSeries {
    let t = Scalar::symbol(tau);
    let c4t = t.add(&Scalar::one()).div(&tau_minus(tau, 3).mul(&Scalar::from_int(4))).unwrap().neg();
    let c6 = Scalar::from_int(3).div(&tau_minus(tau, 6).mul(&tau_minus(tau, 3))).unwrap();
    let mut terms = r2(b, tau).into_terms();
    terms.push((Exponent::from_int(2), Scalar::one()));
    terms.push((Exponent::from_int(5), d5(tau)));
    terms.push((xt(4, tau), c4t));
    terms.push((Exponent::from_int(6), c6));
    series(b, terms)
}

/// `(tau-4)^2 / ((tau-3)(tau-5))`
pub fn d5(tau: SymbolId) -> Scalar {
    tau_minus(tau, 4).mul(&tau_minus(tau, 4)).div(&tau_minus(tau, 3).mul(&tau_minus(tau, 5))).unwrap()
}

pub fn starts_with(s: &GenSeries, p: &GenSeries) -> bool {
    s.len() >= p.len() && s.terms()[..p.len()] == *p.terms()
}
