//! Exact constants of the strata `Q(nu, -1^(|nu|+4))` of genus-zero
//! quadratic differentials: volumes, one-cylinder contributions, and the
//! leading coefficients of meander counts.
//!
//! Everything is a rational multiple of a power of `pi`, kept exact in
//! [`PiExpression`]. Floats appear only in [`PiExpression::to_f64`],
//! [`stirling_approx`] and [`zeta_weighted`].

mod pi;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use serde::Serialize;
use thiserror::Error;

use crate::arccore::Partition;
use crate::planetree::SeparatrixDiagram;
pub use pi::{ln_abs_bigint, ln_abs_rational, PiExpression};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ConstError {
    #[error("{what} needs {need}, got {got}")]
    Domain { what: &'static str, need: &'static str, got: String },
}

pub fn factorial(n: u64) -> BigInt {
    (2..=n).fold(BigInt::one(), |acc, i| acc * i)
}

pub fn binomial(n: u64, k: u64) -> BigInt {
    if k > n {
        return BigInt::zero();
    }
    let k = k.min(n - k);
    (0..k).fold(BigInt::one(), |acc, i| acc * (n - i) / (i + 1))
}

/// `n!!` with `0!! = 1!! = 1`.
pub fn double_factorial(n: u64) -> BigInt {
    (1..=n).rev().step_by(2).fold(BigInt::one(), |acc, i| acc * i)
}

fn ratio(a: BigInt, b: BigInt) -> BigRational {
    BigRational::new(a, b)
}

/// `f(d) = d!!/(d+1)!! * pi^d`, times `pi` for odd `d` and `2` for even `d`.
pub fn f(d: u32) -> PiExpression {
    let q = ratio(double_factorial(d as u64), double_factorial(d as u64 + 1));
    if d % 2 == 1 {
        PiExpression::monomial(q, d as i32 + 1)
    } else {
        PiExpression::monomial(q * BigInt::from(2), d as i32)
    }
}

/// Masur-Veech volume `2 pi^2 prod_d f(d)^nu_d`.
pub fn volume(nu: &Partition) -> PiExpression {
    let mut v = PiExpression::frac(2, 1, 2);
    for (d, k) in nu.multiplicities() {
        v = &v * &f(d).pow(k);
    }
    v
}

/// One-cylinder contribution `2 sum_{iota <= nu} prod_d C(nu_d, iota_d) C(|nu|+4, |iota|+2)`.
pub fn cyl1(nu: &Partition) -> BigInt {
    let top = nu.weight() + 4;
    let mut total = BigInt::zero();
    for iota in nu.subpartitions() {
        let mut term = binomial(top, iota.weight() + 2);
        for (d, k) in nu.multiplicities() {
            term *= binomial(k as u64, iota.multiplicity(d) as u64);
        }
        total += term;
    }
    total * 2
}

/// `2 C(2k+4, k+2)`, equal to `cyl1([1^k])`.
pub fn cyl1_principal(k: u64) -> BigInt {
    binomial(2 * k + 4, k + 2) * 2
}

/// `cyl1(nu)^2 / Vol(nu)`.
pub fn cyl11(nu: &Partition) -> PiExpression {
    let c = cyl1(nu);
    PiExpression::integer(&c * &c).div_monomial(&volume(nu)).expect("volume is a monomial")
}

/// Probability that a random square-tiled surface of the stratum has one
/// horizontal cylinder: `cyl1(nu) / Vol(nu)`.
pub fn p1(nu: &Partition) -> PiExpression {
    PiExpression::integer(cyl1(nu)).div_monomial(&volume(nu)).expect("volume is a monomial")
}

/// Leading term `leading * N^exponent` of a meander count.
#[derive(Clone, PartialEq, Eq, Serialize)]
pub struct AsymptoticCoefficient {
    pub leading: PiExpression,
    pub exponent: u32,
    pub description: String,
}

impl std::fmt::Debug for AsymptoticCoefficient {
    fn fmt(&self, fm: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(fm, "{} ~ {} * N^{}", self.description, self.leading, self.exponent)
    }
}

fn domain(what: &'static str, need: &'static str, got: impl ToString) -> ConstError {
    ConstError::Domain { what, need, got: got.to_string() }
}

/// Closed form for meanders with a maximal arc and `p` minimal arcs:
/// `2/(p!(p-3)!) (2/pi^2)^(p-2) C(2p-2, p-1)^2 / (4p-8)`.
pub fn mplus_closed_form(p: u32) -> Result<PiExpression, ConstError> {
    if p < 3 {
        return Err(domain("mplus coefficient", "p >= 3", p));
    }
    let p = p as u64;
    let b = binomial(2 * p - 2, p - 1);
    let num = BigInt::from(2) * &b * &b * BigInt::from(2).pow(p as u32 - 2);
    let den = factorial(p) * factorial(p - 3) * BigInt::from(4 * p - 8);
    Ok(PiExpression::monomial(ratio(num, den), -2 * (p as i32 - 2)))
}

/// Closed form for meanders without a maximal arc and with `p` minimal arcs:
/// `4/(p!(p-4)!) (2/pi^2)^(p-3) C(2p-4, p-2)^2 / (4p-10)`.
pub fn mminus_closed_form(p: u32) -> Result<PiExpression, ConstError> {
    if p < 4 {
        return Err(domain("mminus coefficient", "p >= 4", p));
    }
    let p = p as u64;
    let b = binomial(2 * p - 4, p - 2);
    let num = BigInt::from(4) * &b * &b * BigInt::from(2).pow(p as u32 - 3);
    let den = factorial(p) * factorial(p - 4) * BigInt::from(4 * p - 10);
    Ok(PiExpression::monomial(ratio(num, den), -2 * (p as i32 - 3)))
}

/// The same coefficient assembled from `cyl11([1^(p-3)])`.
pub fn mplus_via_cyl11(p: u32) -> Result<PiExpression, ConstError> {
    if p < 3 {
        return Err(domain("mplus coefficient", "p >= 3", p));
    }
    let p = p as u64;
    let c = cyl11(&Partition::power(1, p as u32 - 3));
    let q = ratio(BigInt::from(2 * (p + 1)), factorial(p + 1) * factorial(p - 3) * BigInt::from(4 * p - 8));
    Ok(c.scale(&q))
}

/// The same coefficient assembled from `cyl11([1^(p-4), 0])`.
pub fn mminus_via_cyl11(p: u32) -> Result<PiExpression, ConstError> {
    if p < 4 {
        return Err(domain("mminus coefficient", "p >= 4", p));
    }
    let p = p as u64;
    let mut nu = Partition::power(1, p as u32 - 4);
    nu.add_part(0, 1);
    let q = ratio(BigInt::from(2), factorial(p) * factorial(p - 4) * BigInt::from(4 * p - 10));
    Ok(cyl11(&nu).scale(&q))
}

/// Leading term of the number of meanders with at most `2N` crossings, a
/// maximal arc and exactly `p` minimal arcs.
pub fn mplus_coefficient(p: u32) -> Result<AsymptoticCoefficient, ConstError> {
    let leading = mplus_closed_form(p)?;
    assert_eq!(leading, mplus_via_cyl11(p)?, "two routes disagree at p={p}");
    Ok(AsymptoticCoefficient {
        leading,
        exponent: 2 * p - 4,
        description: format!("meanders with a maximal arc and {p} minimal arcs"),
    })
}

/// As [`mplus_coefficient`] for meanders without a maximal arc.
pub fn mminus_coefficient(p: u32) -> Result<AsymptoticCoefficient, ConstError> {
    let leading = mminus_closed_form(p)?;
    assert_eq!(leading, mminus_via_cyl11(p)?, "two routes disagree at p={p}");
    Ok(AsymptoticCoefficient {
        leading,
        exponent: 2 * p - 5,
        description: format!("meanders without a maximal arc and {p} minimal arcs"),
    })
}

fn nu_denominator(nu: &Partition) -> BigInt {
    let mut den = factorial(nu.weight() + 4);
    for (_, k) in nu.multiplicities() {
        den *= factorial(k as u64);
    }
    den
}

fn check_no_zeros(nu: &Partition) -> Result<(), ConstError> {
    if nu.multiplicity(0) > 0 {
        return Err(domain("per-stratum coefficient", "nu_0 = 0", nu));
    }
    Ok(())
}

/// Per-stratum coefficient for meanders with a maximal arc whose
/// singularity pattern is `nu`: `2(|nu|+4) cyl11(nu) / ((|nu|+4)! prod nu_j!)`
/// divided by twice the exponent.
pub fn mplus_nu_coefficient(nu: &Partition) -> Result<AsymptoticCoefficient, ConstError> {
    check_no_zeros(nu)?;
    let exponent = (nu.length() + nu.weight() + 2) as u32;
    let q = ratio(BigInt::from(2 * (nu.weight() + 4)), nu_denominator(nu) * BigInt::from(2 * exponent));
    Ok(AsymptoticCoefficient {
        leading: cyl11(nu).scale(&q),
        exponent,
        description: format!("meanders with a maximal arc in Q({}, -1^{})", nu.to_compact(), nu.weight() + 4),
    })
}

/// Per-stratum coefficient for meanders without a maximal arc; the extra
/// marked point doubles `cyl11`.
pub fn mminus_nu_coefficient(nu: &Partition) -> Result<AsymptoticCoefficient, ConstError> {
    check_no_zeros(nu)?;
    let exponent = (nu.length() + nu.weight() + 3) as u32;
    let mut with_zero = nu.clone();
    with_zero.add_part(0, 1);
    let q = ratio(BigInt::from(2), nu_denominator(nu) * BigInt::from(2 * exponent));
    Ok(AsymptoticCoefficient {
        leading: cyl11(&with_zero).scale(&q),
        exponent,
        description: format!("meanders without a maximal arc in Q({}, -1^{})", nu.to_compact(), nu.weight() + 4),
    })
}

/// Contribution of one separatrix diagram `D = T(iota) + T(nu - iota)` to
/// `cyl1(nu)`: `4/|Aut D| (|nu|+4)! prod nu_d! / ((|iota|+l(iota))! (|nu-iota|+l(nu-iota))!)`.
pub fn cyl1_diagram(d: &SeparatrixDiagram) -> BigRational {
    let (a, b) = d.trees();
    let nu = d.zeros();
    let mut num = factorial(nu.weight() + 4) * 4;
    for (_, k) in nu.multiplicities() {
        num *= factorial(k as u64);
    }
    let edges = |p: &Partition| factorial(p.weight() + p.length());
    let den = edges(a.profile()) * edges(b.profile()) * BigInt::from(d.aut_order());
    ratio(num, den)
}

/// `cyl1_diagram(D) / Vol(nu)`.
pub fn p1_diagram(d: &SeparatrixDiagram) -> PiExpression {
    PiExpression::rational(cyl1_diagram(d)).div_monomial(&volume(&d.zeros())).expect("volume is a monomial")
}

/// Multiplies an unlabeled weighted count by `prod nu_d! (|nu|+4)!`.
pub fn labeled_conversion(nu: &Partition, unlabeled: &BigRational) -> BigRational {
    unlabeled * BigRational::from_integer(nu_denominator(nu))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Variant {
    Plus,
    Minus,
}

/// Large-`p` approximations of the coefficients:
/// plus `pi^2/256 (32e^2/(pi^2 p^2))^p`, minus
/// `pi^2 e^2/(128 p) (32e^2/(pi^2 p^2))^(p-1)`.
pub fn stirling_approx(p: u32, variant: Variant) -> f64 {
    stirling_ln(p, variant).exp()
}

/// Natural log of [`stirling_approx`], usable where the value underflows.
pub fn stirling_ln(p: u32, variant: Variant) -> f64 {
    use std::f64::consts::PI;
    let p = p as f64;
    let base = (32.0f64).ln() + 2.0 - 2.0 * PI.ln() - 2.0 * p.ln();
    match variant {
        Variant::Plus => 2.0 * PI.ln() - 256f64.ln() + p * base,
        Variant::Minus => 2.0 * PI.ln() + 2.0 - (128.0 * p).ln() + (p - 1.0) * base,
    }
}

/// `zeta(d) * c`, the one-cylinder contribution when cylinder heights are
/// unrestricted. Needs `d >= 2`.
pub fn zeta_weighted(c: &BigRational, d: u32) -> f64 {
    assert!(d >= 2, "zeta diverges at d = {d}");
    let d = d as i32;
    let cutoff = 10_000u32;
    let head: f64 = (1..cutoff).rev().map(|k| (k as f64).powi(-d)).sum();
    let k = cutoff as f64;
    // Euler-Maclaurin tail from the cutoff onwards.
    let tail = k.powi(1 - d) / (d - 1) as f64 + 0.5 * k.powi(-d) + d as f64 / 12.0 * k.powi(-d - 1);
    num_traits::ToPrimitive::to_f64(c).unwrap_or(f64::NAN) * (head + tail)
}
