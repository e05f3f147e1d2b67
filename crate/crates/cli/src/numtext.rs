//! Text forms of numbers.
//!
//! Input literals are either decimals (`-0.25`, `1e-3`) or fractions
//! (`3/4`). In rational mode both parse exactly; `0.1` is `1/10`.

use std::str::FromStr;

use ksn_core::{Rational, Scalar};
use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

/// Number types with a textual form for datasets, files and CLI output.
pub trait NumText: Scalar {
    fn parse_literal(text: &str) -> Option<Self>;

    /// Lossless form written to network files: shortest round-trip decimal
    /// for floats, `p/q` for rationals.
    fn to_canonical(&self) -> String;

    /// Human-facing form: `precision` significant digits for floats, exact
    /// `p` or `p/q` for rationals.
    fn to_display(&self, precision: usize) -> String;
}

impl NumText for f64 {
    fn parse_literal(text: &str) -> Option<Self> {
        let text = text.trim();
        let value = if text.contains('/') { parse_exact(text)?.to_f64() } else { parse_decimal(text)?.1 };
        value.is_finite().then_some(value)
    }

    fn to_canonical(&self) -> String {
        format!("{self:?}")
    }

    fn to_display(&self, precision: usize) -> String {
        format_significant(*self, precision)
    }
}

impl NumText for Rational {
    fn parse_literal(text: &str) -> Option<Self> {
        parse_exact(text)
    }

    fn to_canonical(&self) -> String {
        format!("{}/{}", self.numer(), self.denom())
    }

    fn to_display(&self, _precision: usize) -> String {
        self.to_string()
    }
}

/// Exact value of a decimal or fraction literal.
pub fn parse_exact(text: &str) -> Option<Rational> {
    let text = text.trim();
    if let Some((num, den)) = text.split_once('/') {
        let num = BigInt::from_str(num.trim()).ok()?;
        let den = BigInt::from_str(den.trim()).ok()?;
        if den.is_zero() {
            return None;
        }
        return Some(Rational::new(num, den));
    }
    parse_decimal(text).map(|(exact, _)| exact)
}

/// Validates decimal syntax and returns both the exact and the nearest
/// float value.
fn parse_decimal(text: &str) -> Option<(Rational, f64)> {
    let (negative, body) = match text.as_bytes().first()? {
        b'-' => (true, &text[1..]),
        b'+' => (false, &text[1..]),
        _ => (false, text),
    };
    let (mantissa, exponent) = match body.find(['e', 'E']) {
        Some(i) => (&body[..i], body[i + 1..].parse::<i64>().ok()?),
        None => (body, 0),
    };
    let (int_part, frac_part) = mantissa.split_once('.').unwrap_or((mantissa, ""));
    let all_digits = |s: &str| s.bytes().all(|b| b.is_ascii_digit());
    if int_part.len() + frac_part.len() == 0 || !all_digits(int_part) || !all_digits(frac_part) {
        return None;
    }
    let digits = BigInt::from_str(&format!("0{int_part}{frac_part}")).ok()?;
    let scale = exponent.checked_sub(frac_part.len() as i64)?;
    if scale.unsigned_abs() > 100_000 {
        return None;
    }
    let power = num_traits::pow(BigInt::from(10), scale.unsigned_abs() as usize);
    let mut exact = if scale >= 0 { Rational::from_integer(digits * power) } else { Rational::new(digits, power) };
    if negative {
        exact = -exact;
    }
    let float = text.parse::<f64>().ok()?;
    Some((exact, float))
}

/// `%.{digits}g`-style formatting with trailing zeros removed.
pub fn format_significant(value: f64, digits: usize) -> String {
    let digits = digits.max(1);
    if value == 0.0 {
        return "0".into();
    }
    if !value.is_finite() {
        return format!("{value}");
    }
    let sci = format!("{:.*e}", digits - 1, value);
    let (mantissa, exp) = sci.split_once('e').expect("exponent marker");
    let exp: i64 = exp.parse().expect("integer exponent");
    if exp < -5 || exp >= digits as i64 {
        format!("{}e{exp}", trim_zeros(mantissa))
    } else {
        let decimals = (digits as i64 - 1 - exp).max(0) as usize;
        trim_zeros(&format!("{value:.decimals$}")).to_string()
    }
}

fn trim_zeros(s: &str) -> &str {
    if s.contains('.') {
        s.trim_end_matches('0').trim_end_matches('.')
    } else {
        s
    }
}

/// Terminating decimal when the denominator has only factors 2 and 5,
/// otherwise `p/q`.
pub fn exact_literal(value: &Rational) -> String {
    let mut den = value.denom().clone();
    let (two, five) = (BigInt::from(2), BigInt::from(5));
    let (mut twos, mut fives) = (0usize, 0usize);
    while den.is_even() {
        den /= &two;
        twos += 1;
    }
    while (&den % &five).is_zero() {
        den /= &five;
        fives += 1;
    }
    if !den.is_one() {
        return value.to_string();
    }
    let places = twos.max(fives);
    if places == 0 {
        return value.numer().to_string();
    }
    let scaled = (value * Rational::from_integer(num_traits::pow(BigInt::from(10), places))).to_integer();
    let digits = format!("{:0>width$}", scaled.abs().to_string(), width = places + 1);
    let (int_part, frac_part) = digits.split_at(digits.len() - places);
    let sign = if scaled.is_negative() { "-" } else { "" };
    format!("{sign}{int_part}.{frac_part}")
}
