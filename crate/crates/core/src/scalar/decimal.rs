//! Fixed-precision decimal numbers.
//!
//! A value is `mantissa * 10^exponent` with at most `precision` significant
//! digits in the mantissa. Every constructor and arithmetic result is rounded
//! to that precision with round-half-even, so repeated runs produce identical
//! digit strings.

use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};

use num_bigint::{BigInt, BigUint, Sign};
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct DecimalContext {
    pub precision: u32,
}

impl DecimalContext {
    pub fn new(precision: u32) -> Result<Self> {
        if precision < 10 {
            return Err(Error::Precision(precision));
        }
        Ok(Self { precision })
    }
}

#[derive(Clone, Debug)]
pub struct Decimal {
    mantissa: BigInt,
    exponent: i64,
    precision: u32,
}

pub(crate) fn pow10(n: u64) -> BigUint {
    BigUint::from(10u32).pow(n as u32)
}

fn digit_count(m: &BigUint) -> u64 {
    if m.is_zero() {
        1
    } else {
        m.to_str_radix(10).len() as u64
    }
}

/// Round `magnitude * 10^exponent` to `precision` significant digits, ties to even.
fn round_magnitude(magnitude: BigUint, exponent: i64, precision: u32) -> (BigUint, i64) {
    let digits = digit_count(&magnitude);
    if digits <= precision as u64 {
        return (magnitude, exponent);
    }
    let drop = digits - precision as u64;
    let divisor = pow10(drop);
    let (mut q, r) = magnitude.div_rem(&divisor);
    let twice = r << 1usize;
    match twice.cmp(&divisor) {
        Ordering::Greater => q += 1u32,
        Ordering::Equal if q.is_odd() => q += 1u32,
        _ => {}
    }
    let mut exponent = exponent + drop as i64;
    if digit_count(&q) > precision as u64 {
        // carried into a new digit: q is a power of ten
        q /= 10u32;
        exponent += 1;
    }
    (q, exponent)
}

impl Decimal {
    fn from_parts(sign: Sign, magnitude: BigUint, exponent: i64, precision: u32) -> Self {
        let (magnitude, exponent) = round_magnitude(magnitude, exponent, precision);
        if magnitude.is_zero() {
            return Self {
                mantissa: BigInt::zero(),
                exponent: 0,
                precision,
            };
        }
        let sign = if sign == Sign::NoSign {
            Sign::Plus
        } else {
            sign
        };
        Self {
            mantissa: BigInt::from_biguint(sign, magnitude),
            exponent,
            precision,
        }
    }

    pub fn new(mantissa: BigInt, exponent: i64, ctx: &DecimalContext) -> Self {
        let (sign, magnitude) = mantissa.into_parts();
        Self::from_parts(sign, magnitude, exponent, ctx.precision)
    }

    pub fn from_int(value: &BigInt, ctx: &DecimalContext) -> Self {
        Self::new(value.clone(), 0, ctx)
    }

    /// `num / den` rounded to the context precision.
    pub fn from_ratio(num: &BigInt, den: &BigInt, ctx: &DecimalContext) -> Self {
        Self::from_int(num, ctx) / Self::from_int(den, ctx)
    }

    pub fn precision(&self) -> u32 {
        self.precision
    }

    pub fn mantissa(&self) -> &BigInt {
        &self.mantissa
    }

    pub fn exponent(&self) -> i64 {
        self.exponent
    }

    pub fn is_zero(&self) -> bool {
        self.mantissa.is_zero()
    }

    /// Parse a plain decimal literal such as `-1.25`, `0.4` or `3e-2`.
    pub fn parse_literal(text: &str, ctx: &DecimalContext) -> Result<Self> {
        let (mantissa, exponent) = parse_decimal_parts(text)?;
        Ok(Self::new(mantissa, exponent, ctx))
    }

    pub fn to_f64(&self) -> f64 {
        format!("{}e{}", self.mantissa, self.exponent)
            .parse()
            .unwrap_or(f64::NAN)
    }

    /// Fixed-point rendering with at least `precision` fractional digits.
    pub fn to_fixed_string(&self) -> String {
        let negative = self.mantissa.is_negative();
        let digits = self.mantissa.magnitude().to_str_radix(10);
        let mut out = String::new();
        if negative {
            out.push('-');
        }
        let frac_len = self.precision as usize;
        if self.exponent >= 0 {
            out.push_str(&digits);
            out.extend(std::iter::repeat_n('0', self.exponent as usize));
            out.push('.');
            out.extend(std::iter::repeat_n('0', frac_len));
            return out;
        }
        let shift = (-self.exponent) as usize;
        let (int_part, frac_part) = if digits.len() > shift {
            let split = digits.len() - shift;
            (digits[..split].to_string(), digits[split..].to_string())
        } else {
            (
                "0".to_string(),
                format!("{}{}", "0".repeat(shift - digits.len()), digits),
            )
        };
        out.push_str(&int_part);
        out.push('.');
        out.push_str(&frac_part);
        if frac_part.len() < frac_len {
            out.extend(std::iter::repeat_n('0', frac_len - frac_part.len()));
        }
        out
    }

    fn aligned(&self, other: &Self) -> (BigInt, BigInt, i64) {
        let exponent = self.exponent.min(other.exponent);
        let lhs = &self.mantissa * BigInt::from(pow10((self.exponent - exponent) as u64));
        let rhs = &other.mantissa * BigInt::from(pow10((other.exponent - exponent) as u64));
        (lhs, rhs, exponent)
    }
}

/// Split a decimal literal into an exact integer mantissa and power-of-ten exponent.
pub(crate) fn parse_decimal_parts(text: &str) -> Result<(BigInt, i64)> {
    let malformed = || Error::Malformed(text.to_string());
    let trimmed = text.trim();
    let (body, exp) = match trimmed.find(['e', 'E']) {
        Some(i) => {
            let exp: i64 = trimmed[i + 1..].parse().map_err(|_| malformed())?;
            (&trimmed[..i], exp)
        }
        None => (trimmed, 0),
    };
    let (negative, body) = match body.as_bytes().first() {
        Some(b'-') => (true, &body[1..]),
        Some(b'+') => (false, &body[1..]),
        _ => (false, body),
    };
    let (int_part, frac_part) = match body.split_once('.') {
        Some((i, f)) => (i, f),
        None => (body, ""),
    };
    if int_part.is_empty() && frac_part.is_empty() {
        return Err(malformed());
    }
    if !int_part
        .bytes()
        .chain(frac_part.bytes())
        .all(|b| b.is_ascii_digit())
    {
        return Err(malformed());
    }
    let digits = format!("{int_part}{frac_part}");
    let magnitude = BigUint::parse_bytes(digits.as_bytes(), 10).ok_or_else(malformed)?;
    let sign = if negative { Sign::Minus } else { Sign::Plus };
    Ok((
        BigInt::from_biguint(sign, magnitude),
        exp - frac_part.len() as i64,
    ))
}

impl PartialEq for Decimal {
    fn eq(&self, other: &Self) -> bool {
        self.cmp(other) == Ordering::Equal
    }
}

impl Eq for Decimal {}

impl PartialOrd for Decimal {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Decimal {
    fn cmp(&self, other: &Self) -> Ordering {
        let sign_order = self.mantissa.sign().cmp(&other.mantissa.sign());
        if sign_order != Ordering::Equal {
            return sign_order;
        }
        let (lhs, rhs, _) = self.aligned(other);
        lhs.cmp(&rhs)
    }
}

impl fmt::Display for Decimal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_fixed_string())
    }
}

impl Add for Decimal {
    type Output = Decimal;
    fn add(self, rhs: Decimal) -> Decimal {
        let precision = self.precision.min(rhs.precision);
        let (lhs, rhs, exponent) = self.aligned(&rhs);
        let (sign, magnitude) = (lhs + rhs).into_parts();
        Decimal::from_parts(sign, magnitude, exponent, precision)
    }
}

impl Sub for Decimal {
    type Output = Decimal;
    fn sub(self, rhs: Decimal) -> Decimal {
        self + (-rhs)
    }
}

impl Mul for Decimal {
    type Output = Decimal;
    fn mul(self, rhs: Decimal) -> Decimal {
        let precision = self.precision.min(rhs.precision);
        let (sign, magnitude) = (self.mantissa * rhs.mantissa).into_parts();
        Decimal::from_parts(sign, magnitude, self.exponent + rhs.exponent, precision)
    }
}

impl Div for Decimal {
    type Output = Decimal;
    fn div(self, rhs: Decimal) -> Decimal {
        assert!(!rhs.is_zero(), "decimal division by zero");
        let precision = self.precision.min(rhs.precision);
        if self.is_zero() {
            return Decimal::from_parts(Sign::NoSign, BigUint::zero(), 0, precision);
        }
        let negative = self.mantissa.is_negative() != rhs.mantissa.is_negative();
        let num = self.mantissa.magnitude();
        let den = rhs.mantissa.magnitude();
        // enough quotient digits that the final rounding sees a guard digit
        let shift =
            (precision as i64 + digit_count(den) as i64 - digit_count(num) as i64 + 2).max(0);
        let scaled = num * pow10(shift as u64);
        let (mut q, r) = scaled.div_rem(den);
        let mut exponent = self.exponent - rhs.exponent - shift;
        if !r.is_zero() {
            // sticky digit: strictly above any tie
            q = q * 10u32 + BigUint::one();
            exponent -= 1;
        }
        let sign = if negative { Sign::Minus } else { Sign::Plus };
        Decimal::from_parts(sign, q, exponent, precision)
    }
}

impl Neg for Decimal {
    type Output = Decimal;
    fn neg(self) -> Decimal {
        Decimal {
            mantissa: -self.mantissa,
            ..self
        }
    }
}
