//! Finite sums `sum_k q_k pi^k` with rational coefficients.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::{BigInt, Sign};
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Serialize, Serializer};

#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct PiExpression {
    terms: BTreeMap<i32, BigRational>,
}

impl PiExpression {
    pub fn zero() -> Self {
        Self::default()
    }

    /// `q * pi^k`.
    pub fn monomial(q: BigRational, k: i32) -> Self {
        let mut e = Self::zero();
        e.add_term(k, q);
        e
    }

    pub fn rational(q: BigRational) -> Self {
        Self::monomial(q, 0)
    }

    pub fn integer<T: Into<BigInt>>(n: T) -> Self {
        Self::rational(BigRational::from_integer(n.into()))
    }

    /// `(a/b) pi^k` from machine integers.
    pub fn frac(a: i64, b: i64, k: i32) -> Self {
        Self::monomial(BigRational::new(a.into(), b.into()), k)
    }

    pub fn pi_power(k: i32) -> Self {
        Self::monomial(BigRational::one(), k)
    }

    fn add_term(&mut self, k: i32, q: BigRational) {
        if q.is_zero() {
            return;
        }
        let entry = self.terms.entry(k).or_insert_with(BigRational::zero);
        *entry += q;
        if entry.is_zero() {
            self.terms.remove(&k);
        }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// Coefficient of `pi^k`.
    pub fn coefficient(&self, k: i32) -> BigRational {
        self.terms.get(&k).cloned().unwrap_or_else(BigRational::zero)
    }

    pub fn terms(&self) -> impl Iterator<Item = (i32, &BigRational)> {
        self.terms.iter().map(|(&k, q)| (k, q))
    }

    /// `(q, k)` when the expression is a single term `q pi^k`.
    pub fn as_monomial(&self) -> Option<(&BigRational, i32)> {
        if self.terms.len() == 1 {
            self.terms.iter().next().map(|(&k, q)| (q, k))
        } else {
            None
        }
    }

    pub fn scale(&self, q: &BigRational) -> Self {
        let mut e = Self::zero();
        for (&k, c) in &self.terms {
            e.add_term(k, c * q);
        }
        e
    }

    /// Exact division by a single term; `None` if `rhs` is zero or has
    /// several terms.
    pub fn div_monomial(&self, rhs: &PiExpression) -> Option<Self> {
        let (q, k) = rhs.as_monomial()?;
        let inv = q.recip();
        let mut e = Self::zero();
        for (&j, c) in &self.terms {
            e.add_term(j - k, c * &inv);
        }
        Some(e)
    }

    pub fn pow(&self, exp: u32) -> Self {
        let mut acc = Self::integer(1);
        for _ in 0..exp {
            acc = &acc * self;
        }
        acc
    }

    /// Floating value, each term evaluated in log space so that very large
    /// or small factors do not overflow before they cancel.
    pub fn to_f64(&self) -> f64 {
        self.terms
            .iter()
            .map(|(&k, q)| {
                let sign = if q.is_negative() { -1.0 } else { 1.0 };
                sign * (ln_abs_rational(q) + k as f64 * std::f64::consts::PI.ln()).exp()
            })
            .sum()
    }

    /// `ln |q pi^k|` of a single-term expression.
    pub fn ln_abs(&self) -> Option<f64> {
        let (q, k) = self.as_monomial()?;
        Some(ln_abs_rational(q) + k as f64 * std::f64::consts::PI.ln())
    }
}

/// `ln |x|` for a nonzero big integer.
pub fn ln_abs_bigint(x: &BigInt) -> f64 {
    let bits = x.bits();
    if bits <= 1000 {
        return x.abs().to_f64().expect("finite").ln();
    }
    let shift = bits - 60;
    let top = (x.abs() >> shift).to_f64().expect("finite");
    top.ln() + shift as f64 * std::f64::consts::LN_2
}

pub fn ln_abs_rational(q: &BigRational) -> f64 {
    ln_abs_bigint(q.numer()) - ln_abs_bigint(q.denom())
}

impl Add for &PiExpression {
    type Output = PiExpression;

    fn add(self, rhs: &PiExpression) -> PiExpression {
        let mut e = self.clone();
        for (&k, q) in &rhs.terms {
            e.add_term(k, q.clone());
        }
        e
    }
}

impl Sub for &PiExpression {
    type Output = PiExpression;

    fn sub(self, rhs: &PiExpression) -> PiExpression {
        self + &(-rhs)
    }
}

impl Neg for &PiExpression {
    type Output = PiExpression;

    fn neg(self) -> PiExpression {
        PiExpression { terms: self.terms.iter().map(|(&k, q)| (k, -q)).collect() }
    }
}

impl Mul for &PiExpression {
    type Output = PiExpression;

    fn mul(self, rhs: &PiExpression) -> PiExpression {
        let mut e = PiExpression::zero();
        for (&a, p) in &self.terms {
            for (&b, q) in &rhs.terms {
                e.add_term(a + b, p * q);
            }
        }
        e
    }
}

macro_rules! owned_ops {
    ($($tr:ident $f:ident),*) => {$(
        impl $tr for PiExpression {
            type Output = PiExpression;
            fn $f(self, rhs: PiExpression) -> PiExpression {
                (&self).$f(&rhs)
            }
        }
    )*};
}
owned_ops!(Add add, Sub sub, Mul mul);

impl Neg for PiExpression {
    type Output = PiExpression;

    fn neg(self) -> PiExpression {
        -&self
    }
}

fn render_rational(q: &BigRational) -> String {
    if q.is_integer() {
        q.numer().to_string()
    } else {
        format!("{}/{}", q.numer(), q.denom())
    }
}

impl fmt::Display for PiExpression {
    /// Terms as `q * pi^k` in decreasing `k`; integers carry no `/1`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return f.write_str("0");
        }
        for (i, (&k, q)) in self.terms.iter().rev().enumerate() {
            if i == 0 {
                write!(f, "{} * pi^{k}", render_rational(q))?;
            } else if q.numer().sign() == Sign::Minus {
                write!(f, " - {} * pi^{k}", render_rational(&-q))?;
            } else {
                write!(f, " + {} * pi^{k}", render_rational(q))?;
            }
        }
        Ok(())
    }
}

impl fmt::Debug for PiExpression {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "PiExpression({self})")
    }
}

impl Serialize for PiExpression {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}
