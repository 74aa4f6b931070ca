//! Exact rational helpers shared by every module.

use num_rational::Ratio;
use num_traits::{One, Zero};

use crate::error::{Error, Result};

/// Exact rational used for reported quantities (l1 distances, marginals,
/// edit-distance bounds).
pub type Rational = Ratio<i128>;

/// Parses `<num>/<den>` or a bare integer.
pub fn parse_rational(s: &str) -> Result<Rational> {
    let bad = || Error::Usage(format!("not a rational: {s:?}"));
    let (num, den) = match s.split_once('/') {
        Some((n, d)) => (n.trim(), d.trim()),
        None => (s.trim(), "1"),
    };
    let num: i128 = num.parse().map_err(|_| bad())?;
    let den: i128 = den.parse().map_err(|_| bad())?;
    if den <= 0 {
        return Err(bad());
    }
    Ok(Rational::new(num, den))
}

/// Formats as `num/den` in lowest terms (always with a slash).
pub fn format_rational(q: &Rational) -> String {
    format!("{}/{}", q.numer(), q.denom())
}

pub fn ratio(num: u128, den: u128) -> Rational {
    Rational::new(num as i128, den as i128)
}

pub fn zero() -> Rational {
    Rational::zero()
}

pub fn one() -> Rational {
    Rational::one()
}

/// Smallest integer `>= q` for nonnegative `q`.
pub fn ceil_u64(q: &Rational) -> Result<u64> {
    let c = q.ceil().to_integer();
    u64::try_from(c).map_err(|_| Error::Overflow("rational ceiling"))
}

/// `lcm` that reports overflow instead of wrapping.
pub fn checked_lcm(a: u64, b: u64) -> Option<u64> {
    let g = num_integer::gcd(a, b);
    (a / g).checked_mul(b)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_fractions_and_integers() {
        assert_eq!(parse_rational("3/10").unwrap(), Rational::new(3, 10));
        assert_eq!(parse_rational("6/4").unwrap(), Rational::new(3, 2));
        assert_eq!(parse_rational("2").unwrap(), Rational::from_integer(2));
        assert!(parse_rational("1/0").is_err());
        assert!(parse_rational("x").is_err());
        assert_eq!(format_rational(&Rational::new(4, 8)), "1/2");
        assert_eq!(format_rational(&Rational::from_integer(0)), "0/1");
    }

    #[test]
    fn ceiling_and_lcm() {
        assert_eq!(ceil_u64(&Rational::new(4420, 1)).unwrap(), 4420);
        assert_eq!(ceil_u64(&Rational::new(9, 2)).unwrap(), 5);
        assert_eq!(checked_lcm(4, 6), Some(12));
        assert_eq!(checked_lcm(u64::MAX, u64::MAX - 1), None);
    }
}
