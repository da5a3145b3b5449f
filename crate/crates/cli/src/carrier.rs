//! Carrier selection and the conversions between pixels, file tokens and
//! carrier elements.

use std::fmt;
use std::str::FromStr;

use anyhow::{anyhow, bail, Context, Result};
use num_integer::Integer;
use num_traits::{ToPrimitive, Zero};
use qkit::{ChainQuantale, Quantale, Rational, UnitQuantale};

/// `chain:<d>` (Łukasiewicz levels `0..=d`) or `float`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CarrierChoice {
    Chain(u32),
    Float,
}

impl FromStr for CarrierChoice {
    type Err = anyhow::Error;

    fn from_str(s: &str) -> Result<Self> {
        if s == "float" {
            return Ok(Self::Float);
        }
        let d = s
            .strip_prefix("chain:")
            .ok_or_else(|| anyhow!("carrier must be chain:<d> or float, got {s:?}"))?;
        let d: u32 = d.parse().with_context(|| format!("chain denominator {d:?}"))?;
        if d == 0 {
            bail!("chain denominator must be positive");
        }
        Ok(Self::Chain(d))
    }
}

impl fmt::Display for CarrierChoice {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::Chain(d) => write!(f, "chain:{d}"),
            Self::Float => write!(f, "float"),
        }
    }
}

/// The largest denominator a chain carrier may reach.
pub const MAX_DENOMINATOR: u64 = 1 << 30;

/// `lcm` of `base` and every listed factor, refusing oversized chains.
pub fn common_denominator(base: u32, factors: impl IntoIterator<Item = u64>) -> Result<u32> {
    let mut d = base.max(1) as u64;
    for f in factors {
        d = d.lcm(&f.max(1));
        if d > MAX_DENOMINATOR {
            bail!("chain denominator exceeds {MAX_DENOMINATOR}; use --carrier float");
        }
    }
    Ok(d as u32)
}

/// A value in `[0, 1]` written as a decimal (`0.25`), a fraction (`1/4`) or an integer.
pub fn parse_unit(s: &str) -> Result<Rational> {
    if s.starts_with(['-', '+']) {
        bail!("value {s:?} outside [0, 1]");
    }
    let r = if let Some((int, frac)) = s.split_once('.') {
        if frac.len() > 12 || !frac.chars().all(|c| c.is_ascii_digit()) {
            bail!("bad decimal {s:?}");
        }
        let scale = 10i64.pow(frac.len() as u32);
        let int: i64 = if int.is_empty() { 0 } else { int.parse().with_context(|| format!("bad decimal {s:?}"))? };
        let frac: i64 = if frac.is_empty() { 0 } else { frac.parse()? };
        Rational::new(int * scale + frac, scale)
    } else {
        Rational::from_str(s).map_err(|_| anyhow!("bad value {s:?}"))?
    };
    if r < Rational::zero() || r > Rational::from_integer(1) {
        bail!("value {s} outside [0, 1]");
    }
    Ok(r)
}

/// What the commands need from a carrier beyond the quantale operations.
pub trait Carrier: Quantale + Clone {
    /// Header tag for coefficient files.
    fn tag(&self) -> String;
    fn from_pixel(&self, g: u8, maxval: u8) -> Self::Elem;
    /// Nearest pixel value.
    fn to_pixel(&self, e: &Self::Elem, maxval: u8) -> u8;
    /// Largest pixel value whose carrier image lies below `e`.
    fn to_pixel_floor(&self, e: &Self::Elem, maxval: u8) -> u8;
    /// Nearest element, and whether it is exact.
    fn from_unit(&self, r: Rational) -> (Self::Elem, bool);
    fn format(&self, e: &Self::Elem) -> String;
    fn parse(&self, s: &str) -> Result<Self::Elem>;
}

impl Carrier for ChainQuantale {
    fn tag(&self) -> String {
        format!("chain:{}", self.denominator())
    }

    fn from_pixel(&self, g: u8, maxval: u8) -> u32 {
        let d = self.denominator() as u64;
        ((2 * g as u64 * d + maxval as u64) / (2 * maxval as u64)) as u32
    }

    fn to_pixel(&self, e: &u32, maxval: u8) -> u8 {
        let d = self.denominator() as u64;
        ((2 * *e as u64 * maxval as u64 + d) / (2 * d)) as u8
    }

    fn to_pixel_floor(&self, e: &u32, maxval: u8) -> u8 {
        (*e as u64 * maxval as u64 / self.denominator() as u64) as u8
    }

    fn from_unit(&self, r: Rational) -> (u32, bool) {
        let scaled = r * Rational::from_integer(self.denominator() as i64);
        (scaled.round().to_integer() as u32, scaled.is_integer())
    }

    fn format(&self, e: &u32) -> String {
        e.to_string()
    }

    fn parse(&self, s: &str) -> Result<u32> {
        let v: u32 = s.parse().with_context(|| format!("level {s:?}"))?;
        if v > self.denominator() {
            bail!("level {v} above {}", self.denominator());
        }
        Ok(v)
    }
}

impl Carrier for UnitQuantale {
    fn tag(&self) -> String {
        "float".into()
    }

    fn from_pixel(&self, g: u8, maxval: u8) -> f64 {
        g as f64 / maxval as f64
    }

    fn to_pixel(&self, e: &f64, maxval: u8) -> u8 {
        (e.clamp(0.0, 1.0) * maxval as f64).round() as u8
    }

    fn to_pixel_floor(&self, e: &f64, maxval: u8) -> u8 {
        (e.clamp(0.0, 1.0) * maxval as f64 + self.tolerance() * maxval as f64).floor() as u8
    }

    fn from_unit(&self, r: Rational) -> (f64, bool) {
        (r.to_f64().unwrap_or(0.0), true)
    }

    fn format(&self, e: &f64) -> String {
        e.to_string()
    }

    fn parse(&self, s: &str) -> Result<f64> {
        let v: f64 = s.parse().with_context(|| format!("value {s:?}"))?;
        if !(0.0..=1.0).contains(&v) {
            bail!("value {v} outside [0, 1]");
        }
        Ok(v)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn choices() {
        assert_eq!("chain:255".parse::<CarrierChoice>().unwrap(), CarrierChoice::Chain(255));
        assert_eq!("float".parse::<CarrierChoice>().unwrap(), CarrierChoice::Float);
        assert!("chain:0".parse::<CarrierChoice>().is_err());
        assert!("godel".parse::<CarrierChoice>().is_err());
        assert_eq!(CarrierChoice::Chain(7).to_string(), "chain:7");
    }

    #[test]
    fn units() {
        assert_eq!(parse_unit("0.25").unwrap(), Rational::new(1, 4));
        assert_eq!(parse_unit(".5").unwrap(), Rational::new(1, 2));
        assert_eq!(parse_unit("1").unwrap(), Rational::from_integer(1));
        assert_eq!(parse_unit("2/3").unwrap(), Rational::new(2, 3));
        assert!(parse_unit("1.5").is_err());
        assert!(parse_unit("-0.1").is_err());
        assert!(parse_unit("x").is_err());
    }

    #[test]
    fn pixel_round_trip_within_half_level() {
        for d in [255u32, 510, 16320, 10, 7] {
            let q = ChainQuantale::lukasiewicz(d).unwrap();
            for g in 0..=255u8 {
                let lv = q.from_pixel(g, 255);
                let exact = g as f64 * d as f64 / 255.0;
                assert!((lv as f64 - exact).abs() <= 0.5 + 1e-9);
                if d % 255 == 0 {
                    assert_eq!(q.to_pixel(&lv, 255), g);
                    assert_eq!(q.to_pixel_floor(&lv, 255), g);
                }
            }
        }
    }

    #[test]
    fn floor_stays_below() {
        let q = ChainQuantale::lukasiewicz(16320).unwrap();
        for lv in (0..=16320).step_by(37) {
            let g = q.to_pixel_floor(&lv, 255);
            assert!(q.from_pixel(g, 255) <= lv);
            assert!(g == 255 || q.from_pixel(g + 1, 255) > lv);
        }
    }

    #[test]
    fn denominators() {
        assert_eq!(common_denominator(255, [64, 8]).unwrap(), 16320);
        assert!(common_denominator(1 << 29, [3, 5, 7]).is_err());
    }
}
