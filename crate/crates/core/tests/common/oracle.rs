//! Direct expansion of `P(s)` from the operator definition, independent of the
//! substitution machinery; it only multiplies series.

use num_rational::BigRational;

use puiseux_core::equation::{CloudPoint, Equation};
use puiseux_core::exponent::{Exponent, ExponentBasis};
use puiseux_core::scalar::{RatInterval, Scalar, SymbolId};
use puiseux_core::series::GenSeries;

/// `P(s) = sum_rho P_rho * prod_k (s^(k))^rho_k`.
pub fn expand(p: &Equation, s: &GenSeries, basis: &ExponentBasis) -> GenSeries {
    let derivs: Vec<GenSeries> = (0..=p.order()).map(|k| s.apply_operator(p.op(), k, basis).unwrap()).collect();
    let mut acc = GenSeries::zero();
    for (rho, c) in p.coeffs() {
        let mut term = c.clone();
        for (k, &e) in rho.0.iter().enumerate() {
            for _ in 0..e {
                term = term.mul(&derivs[k], basis).unwrap();
            }
        }
        acc = acc.add(&term, basis).unwrap();
    }
    acc
}

/// A copy of `basis` with a fresh symbol `name`, enclosed in `[lo, hi]`.
pub fn with_symbol(basis: &ExponentBasis, name: &str, lo: i64, hi: i64) -> (ExponentBasis, SymbolId) {
    let mut b = basis.clone();
    let id = b
        .declare(name, RatInterval::new(BigRational::from_integer(lo.into()), BigRational::from_integer(hi.into())), None)
        .unwrap();
    (b, id)
}

/// Lowest term of `P(r + C x^mu)` for a fresh symbol `C`: `(alpha_0, Phi(C))`.
pub fn phi_at(p: &Equation, r: &GenSeries, mu: &Exponent, basis: &ExponentBasis) -> (Exponent, Scalar, SymbolId) {
    let (b, c) = with_symbol(basis, "C_oracle", 7, 8);
    let s = r.add(&GenSeries::monomial(Scalar::symbol(c), mu.clone()), &b).unwrap();
    let v = expand(p, &s, &b);
    let (e, coeff) = v.leading().cloned().expect("nonzero expansion");
    (e, coeff, c)
}

/// Coefficient of `x^(alpha + h M)` in `P(r + x^M)` for a fresh generator `M`,
/// i.e. `Psi_(P[r]; V)(<M>)`, together with `<M>`.
pub fn psi_at(p: &Equation, r: &GenSeries, v: &CloudPoint, basis: &ExponentBasis) -> (Scalar, Scalar) {
    let (b, m) = with_symbol(basis, "M_oracle", 20, 21);
    let mexp = Exponent::generator(m);
    let s = r.add(&GenSeries::monomial(Scalar::one(), mexp.clone()), &b).unwrap();
    let e = expand(p, &s, &b);
    let at = v.alpha.add(&mexp.scale_int(v.height as i64));
    let bracket = p.op().bracket_one(&mexp, &b).unwrap();
    (e.coeff_at(&at), bracket)
}
