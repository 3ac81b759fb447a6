//! Scalar abstractions.
//!
//! Continuous dynamics (annulus maps, suspension coordinates) is written
//! against [`Real`], implemented for `f32` and `f64`. Combinatorial geometry
//! (chain covers, piecewise-linear interval maps) is written against
//! [`Coord`], which additionally admits exact rationals so that containment
//! and tautness are decided without rounding.

use std::fmt::{Debug, Display};
use std::ops::Neg;

use num_rational::Ratio;
use num_traits::{Float, FloatConst, FromPrimitive, Num, ToPrimitive};

/// Floating point scalar used by the annulus and suspension modules.
pub trait Real: Float + FloatConst + FromPrimitive + Debug + Display + Default + Send + Sync + 'static {
    /// Lossy conversion from `f64`; constants in this crate are exact in `f32`.
    fn of(x: f64) -> Self {
        Self::from_f64(x).expect("f64 literal fits the scalar type")
    }

    fn as_f64(self) -> f64 {
        self.to_f64().unwrap_or(f64::NAN)
    }
}

impl Real for f32 {}
impl Real for f64 {}

/// Exact rational number used for chain geometry.
pub type Rational = Ratio<i128>;

/// Ordered field scalar for interval geometry.
pub trait Coord: Clone + PartialOrd + Num + Neg<Output = Self> + Debug + Send + Sync {
    fn ratio(num: i64, den: i64) -> Self;
    fn to_f64(&self) -> f64;

    fn min_of(a: &Self, b: &Self) -> Self {
        if a <= b {
            a.clone()
        } else {
            b.clone()
        }
    }

    fn max_of(a: &Self, b: &Self) -> Self {
        if a >= b {
            a.clone()
        } else {
            b.clone()
        }
    }
}

impl Coord for f64 {
    fn ratio(num: i64, den: i64) -> Self {
        num as f64 / den as f64
    }

    fn to_f64(&self) -> f64 {
        *self
    }
}

impl Coord for Rational {
    fn ratio(num: i64, den: i64) -> Self {
        Ratio::new(num as i128, den as i128)
    }

    fn to_f64(&self) -> f64 {
        ToPrimitive::to_f64(self).unwrap_or(f64::NAN)
    }
}

/// Parses a decimal or `p/q` literal into an exact rational.
pub fn parse_rational(text: &str) -> Option<Rational> {
    let text = text.trim();
    if let Some((p, q)) = text.split_once('/') {
        let p: i128 = p.trim().parse().ok()?;
        let q: i128 = q.trim().parse().ok()?;
        if q == 0 {
            return None;
        }
        return Some(Ratio::new(p, q));
    }
    let (negative, digits) = match text.strip_prefix('-') {
        Some(rest) => (true, rest),
        None => (false, text),
    };
    let (int_part, frac_part) = digits.split_once('.').unwrap_or((digits, ""));
    if int_part.is_empty() && frac_part.is_empty() {
        return None;
    }
    if !int_part.chars().all(|c| c.is_ascii_digit()) || !frac_part.chars().all(|c| c.is_ascii_digit()) {
        return None;
    }
    let scale = 10i128.checked_pow(frac_part.len() as u32)?;
    let whole: i128 = if int_part.is_empty() { 0 } else { int_part.parse().ok()? };
    let frac: i128 = if frac_part.is_empty() { 0 } else { frac_part.parse().ok()? };
    let value = Ratio::new(whole * scale + frac, scale);
    Some(if negative { -value } else { value })
}

/// `printf("%.9g")`: nine significant digits, trailing zeros removed.
pub fn format_g(x: f64) -> String {
    if x == 0.0 {
        return "0".into();
    }
    if !x.is_finite() {
        return if x.is_nan() {
            "nan".into()
        } else if x > 0.0 {
            "inf".into()
        } else {
            "-inf".into()
        };
    }
    let sci = format!("{:.8e}", x);
    let (mantissa, exp) = sci.split_once('e').expect("exponent present");
    let exp: i32 = exp.parse().expect("integer exponent");
    if !(-4..9).contains(&exp) {
        let mantissa = strip_zeros(mantissa);
        return format!("{mantissa}e{}{:02}", if exp < 0 { '-' } else { '+' }, exp.abs());
    }
    strip_zeros(&format!("{:.*}", (8 - exp) as usize, x)).to_string()
}

fn strip_zeros(s: &str) -> &str {
    if s.contains('.') {
        s.trim_end_matches('0').trim_end_matches('.')
    } else {
        s
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn formats_like_printf_g() {
        assert_eq!(format_g(0.0), "0");
        assert_eq!(format_g(0.5 * 2f64.ln()), "0.34657359");
        assert_eq!(format_g(1.0), "1");
        assert_eq!(format_g(-2.5e-7), "-2.5e-07");
        assert_eq!(format_g(123456789012.0), "1.23456789e+11");
        assert_eq!(format_g(0.0001), "0.0001");
    }

    #[test]
    fn parses_decimal_and_fraction_literals() {
        assert_eq!(parse_rational("0.25"), Some(Ratio::new(1, 4)));
        assert_eq!(parse_rational("-3/6"), Some(Ratio::new(-1, 2)));
        assert_eq!(parse_rational("7"), Some(Ratio::new(7, 1)));
        assert_eq!(parse_rational(".5"), Some(Ratio::new(1, 2)));
        assert_eq!(parse_rational("1/0"), None);
        assert_eq!(parse_rational("abc"), None);
    }

    #[test]
    fn real_conversion_round_trips_small_constants() {
        assert_eq!(<f32 as Real>::of(0.25), 0.25f32);
        assert_eq!(<f64 as Real>::of(0.1).as_f64(), 0.1);
    }
}
