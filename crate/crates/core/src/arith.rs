//! Exact integer and rational helpers shared by every counting module.

use std::sync::RwLock;

use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

pub type Rational = BigRational;

static FACTORIALS: RwLock<Vec<BigUint>> = RwLock::new(Vec::new());

/// `n!`, served from a process-wide table that grows on demand.
pub fn factorial(n: u64) -> BigUint {
    let idx = n as usize;
    {
        let table = FACTORIALS.read().expect("factorial table poisoned");
        if let Some(v) = table.get(idx) {
            return v.clone();
        }
    }
    let mut table = FACTORIALS.write().expect("factorial table poisoned");
    if table.is_empty() {
        table.push(BigUint::one());
    }
    while table.len() <= idx {
        let next = table.last().unwrap() * BigUint::from(table.len());
        table.push(next);
    }
    table[idx].clone()
}

pub fn binomial(n: u64, k: u64) -> BigUint {
    if k > n {
        return BigUint::zero();
    }
    factorial(n) / (factorial(k) * factorial(n - k))
}

pub fn rational_from_uint(v: BigUint) -> Rational {
    Rational::from_integer(BigInt::from(v))
}

pub fn rational_from_int(v: i64) -> Rational {
    Rational::from_integer(BigInt::from(v))
}

/// Ratio of two unsigned integers as a reduced rational.
pub fn ratio(num: BigUint, den: BigUint) -> Rational {
    Rational::new(BigInt::from(num), BigInt::from(den))
}

/// Renders `p/q` reduced, or just `p` for integers.
pub fn format_rational(r: &Rational) -> String {
    if r.is_integer() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

/// Integer value of a rational whose denominator is 1, if nonnegative.
pub fn rational_to_uint(r: &Rational) -> Option<BigUint> {
    if r.is_integer() && !r.is_negative() {
        r.numer().to_biguint()
    } else {
        None
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn factorial_table_grows() {
        assert_eq!(factorial(0), BigUint::one());
        assert_eq!(factorial(5), BigUint::from(120u32));
        assert_eq!(factorial(20), BigUint::from(2_432_902_008_176_640_000u64));
        assert_eq!(factorial(3), BigUint::from(6u32));
    }

    #[test]
    fn rational_formatting() {
        assert_eq!(format_rational(&ratio(6u32.into(), 4u32.into())), "3/2");
        assert_eq!(format_rational(&ratio(4u32.into(), 2u32.into())), "2");
        assert_eq!(format_rational(&rational_from_int(-3)), "-3");
        assert_eq!(binomial(5, 2), BigUint::from(10u32));
        assert_eq!(binomial(2, 5), BigUint::zero());
    }
}
