//! Exact big-integer evaluation of the bound formulas, with a log-tower
//! form for values too large to materialize.
//!
//! Irrational constants enter only through outward-rounded rationals, so a
//! strict upper bound stays a true upper bound after rounding. The only
//! such constant here is `sqrt(e)`; its reference decimal is recorded
//! below and the rational used is checked against it by the test suite.

use std::cmp::Ordering;

use num_bigint::BigUint;
use num_traits::{One, ToPrimitive, Zero};

use crate::error::{Error, Result};

/// `sqrt(e)` truncated to 40 fractional digits (reference constant).
pub const SQRT_E_DECIMAL: &str = "1.6487212707001281468486507878141635716537";

/// Outward-rounded rational for `sqrt(e)`: `SQRT_E_NUM / 10^15` exceeds
/// `sqrt(e)` by less than `1e-12`.
pub const SQRT_E_NUM: u64 = 1_648_721_270_700_129;
pub const SQRT_E_DEN_POW10: u32 = 15;

/// Exact values are kept while they fit this many bits.
pub const DEFAULT_BIT_CAP: u64 = 1_000_000;

/// Either an exact natural number or a tower `base^base^..^top` recorded
/// by its height (number of entries, the topmost being `top`). A set
/// `truncated` flag means lower-order structure was dropped and the true
/// value is at least the recorded tower.
#[derive(Clone, Debug, PartialEq)]
pub enum Magnitude {
    Exact(BigUint),
    Tower { base: u64, height: u32, top: f64, truncated: bool },
    /// `base^(num/den)` for non-integral exponents.
    QPower { base: u64, num: u64, den: u64 },
}

/// A bound value together with the formula that produced it.
#[derive(Clone, Debug, PartialEq)]
pub struct BoundValue {
    pub magnitude: Magnitude,
    pub formula: &'static str,
}

impl BoundValue {
    fn exact(v: BigUint, formula: &'static str) -> Self {
        BoundValue { magnitude: Magnitude::Exact(v), formula }
    }

    pub fn as_exact(&self) -> Option<&BigUint> {
        match &self.magnitude {
            Magnitude::Exact(v) => Some(v),
            _ => None,
        }
    }

    /// Partial order: exact against exact is exact; towers over one base
    /// compare by height then top; an exact below the bit cap is smaller
    /// than any tower of height at least 2 whose materialization would
    /// overflow the cap.
    pub fn partial_cmp_value(&self, other: &BoundValue) -> Option<Ordering> {
        use Magnitude::*;
        match (&self.magnitude, &other.magnitude) {
            (Exact(a), Exact(b)) => Some(a.cmp(b)),
            (Tower { base: b1, height: h1, top: t1, .. }, Tower { base: b2, height: h2, top: t2, .. }) => {
                if b1 != b2 {
                    return None;
                }
                match h1.cmp(h2) {
                    Ordering::Equal => t1.partial_cmp(t2),
                    o => Some(o),
                }
            }
            (Exact(a), Tower { base, height, top, .. }) => {
                let tower_bits = tower_min_bits(*base, *height, *top)?;
                if BigUint::from(a.bits()) < tower_bits {
                    Some(Ordering::Less)
                } else {
                    None
                }
            }
            (Tower { .. }, Exact(_)) => other.partial_cmp_value(self).map(Ordering::reverse),
            _ => None,
        }
    }

    pub fn render(&self) -> String {
        match &self.magnitude {
            Magnitude::Exact(v) => v.to_string(),
            Magnitude::Tower { base, height, top, truncated } => {
                let mut s = String::new();
                if *truncated {
                    s.push_str(">= ");
                }
                for _ in 1..*height {
                    s.push_str(&format!("{base}^("));
                }
                s.push_str(&format!("{top}"));
                for _ in 1..*height {
                    s.push(')');
                }
                s
            }
            Magnitude::QPower { base, num, den } => format!("{base}^({num}/{den})"),
        }
    }
}

/// A conservative lower estimate of the bit length of `base^..^top`
/// (height entries), or `None` when it cannot be bounded in an `f64`.
fn tower_min_bits(base: u64, height: u32, top: f64) -> Option<BigUint> {
    if height == 0 || base < 2 {
        return None;
    }
    // value = base^E with E the (height-1)-tower; bits ~ E*log2(base)
    let mut exp = top;
    for _ in 2..height {
        if exp > 128.0 {
            // already astronomically larger than any capped exact value
            return Some(BigUint::from(u64::MAX));
        }
        exp = (base as f64).powf(exp);
    }
    if height >= 2 {
        let bits = exp * (base as f64).log2();
        if bits > u64::MAX as f64 {
            return Some(BigUint::from(u64::MAX));
        }
        Some(BigUint::from(bits as u64))
    } else {
        Some(BigUint::from(top.log2().max(0.0) as u64))
    }
}

fn factorial(n: u64) -> BigUint {
    let mut out = BigUint::one();
    for i in 2..=n {
        out *= i;
    }
    out
}

fn pow2(e: u64) -> BigUint {
    BigUint::one() << e as usize
}

/// `f(1,q) = 1` and `f(2,q) = 2q + 1`; this returns the latter.
pub fn f2_exact(q: u64) -> BoundValue {
    BoundValue::exact(BigUint::from(2 * q + 1), "f2")
}

/// One step of the containment recurrence: `(f + 1)(q^f + 1) - 1`.
/// Falls over to a tower once `q^f` would exceed the bit cap.
pub fn recur_upper(f: &BoundValue, q: u64) -> BoundValue {
    recur_upper_with_cap(f, q, DEFAULT_BIT_CAP)
}

pub fn recur_upper_with_cap(f: &BoundValue, q: u64, bit_cap: u64) -> BoundValue {
    match &f.magnitude {
        Magnitude::Exact(fv) => {
            let approx_bits = fv.to_f64().map(|v| v * (q as f64).log2());
            if let Some(bits) = approx_bits {
                if bits <= bit_cap as f64 {
                    let fe = fv.to_u64().expect("small exponent");
                    let qf = BigUint::from(q).pow(fe as u32);
                    let v = (fv + 1u32) * (&qf + 1u32) - 1u32;
                    return BoundValue::exact(v, "recur_upper");
                }
            }
            // q^f dominates; keep f as the top of a height-2 tower
            match fv.to_f64() {
                Some(top) if top.is_finite() => BoundValue {
                    magnitude: Magnitude::Tower { base: q, height: 2, top, truncated: true },
                    formula: "recur_upper",
                },
                _ => {
                    // even the exponent only fits as 2^bits
                    let top = fv.bits() as f64 * 2f64.log2() / (q as f64).log2();
                    BoundValue {
                        magnitude: Magnitude::Tower { base: q, height: 3, top, truncated: true },
                        formula: "recur_upper",
                    }
                }
            }
        }
        Magnitude::Tower { base, height, top, .. } => BoundValue {
            magnitude: Magnitude::Tower {
                base: *base.max(&q.max(1)),
                height: height + 1,
                top: *top,
                truncated: true,
            },
            formula: "recur_upper",
        },
        Magnitude::QPower { .. } => BoundValue {
            magnitude: f.magnitude.clone(),
            formula: "recur_upper",
        },
    }
}

/// Number of 2-minimal words over `q` symbols:
/// `q + sum_{r=1}^{q-1} q(q-1)..(q-r) * 2^r`.
pub fn t2_count(q: u64) -> BoundValue {
    let mut total = BigUint::from(q);
    for r in 1..q {
        let mut falling = BigUint::one();
        for x in (q - r)..=q {
            falling *= x;
        }
        total += falling * pow2(r);
    }
    BoundValue::exact(total, "t2_count")
}

/// `2^(q+1) * (q+1)!`.
pub fn f3_upper_rs(q: u64) -> BoundValue {
    BoundValue::exact(pow2(q + 1) * factorial(q + 1), "f3_upper_rs")
}

/// Strict upper bound `3 * sqrt(e) * 2^q * q!`, rounded outward to an
/// integer: the ceiling of `3 * r * 2^q * q!` with `r >= sqrt(e)`.
pub fn f3_upper_improved(q: u64) -> Result<BoundValue> {
    if q <= 3 {
        return Err(Error::invalid(format!("the improved upper bound needs q > 3, got {q}")));
    }
    let num = BigUint::from(3u32) * BigUint::from(SQRT_E_NUM) * pow2(q) * factorial(q);
    let den = BigUint::from(10u32).pow(SQRT_E_DEN_POW10);
    let v = (&num + &den - 1u32) / den;
    Ok(BoundValue::exact(v, "f3_upper_improved"))
}

/// Construction lower bound `3 * 2^(q-2) * q! + 2q - 4`.
pub fn f3_lower(q: u64) -> Result<BoundValue> {
    if q < 5 {
        return Err(Error::invalid(format!("the improved construction needs q >= 5, got {q}")));
    }
    let v = BigUint::from(3u32) * pow2(q - 2) * factorial(q) + BigUint::from(2 * q - 4);
    Ok(BoundValue::exact(v, "f3_lower"))
}

/// The tower of `n-1` copies of `q`, in tower form.
pub fn tower_bound(n: u32, q: u64) -> Result<BoundValue> {
    if n < 3 {
        return Err(Error::invalid(format!("the tower bound needs n >= 3, got {n}")));
    }
    Ok(BoundValue {
        magnitude: Magnitude::Tower { base: q, height: n - 1, top: q as f64, truncated: false },
        formula: "tower_bound",
    })
}

/// Exact check of `2^(q+1) * (q+1)! <= q^(q-1)`.
pub fn verify_base_inequality(q: u64) -> bool {
    if q < 1 {
        return false;
    }
    let lhs = pow2(q + 1) * factorial(q + 1);
    let rhs = BigUint::from(q).pow((q - 1) as u32);
    lhs <= rhs
}

/// Random-word threshold `q^(2^(n-1) - (n+1)/2)`: exact when the exponent
/// is integral (odd `n`), a rational-power record otherwise.
pub fn threshold_length(n: u32, q: u64) -> Result<BoundValue> {
    if n < 2 {
        return Err(Error::invalid(format!("the threshold formula needs n >= 2, got {n}")));
    }
    if n > 20 {
        return Err(Error::SizeLimit { what: "threshold level", requested: n as u64, limit: 20 });
    }
    // exponent = 2^(n-1) - (n+1)/2 = (2^n - n - 1) / 2
    let num = (1u64 << n) - n as u64 - 1;
    if num.is_multiple_of(2) {
        Ok(BoundValue::exact(BigUint::from(q).pow((num / 2) as u32), "threshold_length"))
    } else {
        Ok(BoundValue {
            magnitude: Magnitude::QPower { base: q, num, den: 2 },
            formula: "threshold_length",
        })
    }
}

/// `floor(log_q m)` for exact `m >= 1`, `q >= 2`.
pub fn log_count_bound(m: &BigUint, q: u64) -> Result<u64> {
    if q < 2 {
        return Err(Error::invalid(format!("log base must be at least 2, got {q}")));
    }
    if m.is_zero() {
        return Err(Error::invalid("log of zero".to_string()));
    }
    let q = BigUint::from(q);
    let mut acc = q.clone();
    let mut k = 0u64;
    while &acc <= m {
        acc *= &q;
        k += 1;
    }
    Ok(k)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn exact_u64(b: &BoundValue) -> u64 {
        b.as_exact().unwrap().to_u64().unwrap()
    }

    #[test]
    fn f2_values() {
        assert_eq!(exact_u64(&f2_exact(1)), 3);
        assert_eq!(exact_u64(&f2_exact(2)), 5);
        assert_eq!(exact_u64(&f2_exact(4)), 9);
    }

    #[test]
    fn recurrence_examples() {
        let f = BoundValue::exact(BigUint::from(5u32), "f2");
        assert_eq!(exact_u64(&recur_upper(&f, 2)), 197);
        let f = BoundValue::exact(BigUint::from(1u32), "f2");
        assert_eq!(exact_u64(&recur_upper(&f, 1)), 3);
    }

    #[test]
    fn recurrence_chain_turns_into_towers() {
        let mut v = f2_exact(2);
        let mut heights = Vec::new();
        for _ in 0..6 {
            v = recur_upper(&v, 2);
            heights.push(match &v.magnitude {
                Magnitude::Exact(_) => 0,
                Magnitude::Tower { height, .. } => *height,
                _ => unreachable!(),
            });
        }
        // 197, ~5e61, then towers of growing height
        assert_eq!(&heights[..2], &[0, 0]);
        assert_eq!(&heights[2..], &[2, 3, 4, 5]);
    }

    #[test]
    fn t2_matches_closed_forms() {
        assert_eq!(exact_u64(&t2_count(1)), 1);
        assert_eq!(exact_u64(&t2_count(2)), 6);
        assert_eq!(exact_u64(&t2_count(3)), 39);
        assert_eq!(exact_u64(&t2_count(4)), 316);
        assert_eq!(exact_u64(&t2_count(5)), 3165);
    }

    #[test]
    fn t2_stays_below_its_ceiling() {
        for q in 1..=20u64 {
            let t2 = t2_count(q);
            let cap = pow2(q) * factorial(q) - 1u32;
            assert!(t2.as_exact().unwrap() <= &cap, "q={q}");
        }
    }

    #[test]
    fn f3_bounds() {
        assert_eq!(exact_u64(&f3_upper_rs(2)), 48);
        assert_eq!(exact_u64(&f3_lower(5).unwrap()), 2886);
        assert!(f3_lower(4).is_err());
        assert!(f3_upper_improved(3).is_err());
        for q in 5..=30 {
            let lo = f3_lower(q).unwrap();
            let hi = f3_upper_improved(q).unwrap();
            assert_eq!(lo.partial_cmp_value(&hi), Some(Ordering::Less), "q={q}");
        }
    }

    #[test]
    fn improved_upper_at_26_has_the_right_magnitude() {
        let v = f3_upper_improved(26).unwrap();
        let lo = BigUint::from(10u32).pow(33);
        let hi = BigUint::from(10u32).pow(36);
        let v = v.as_exact().unwrap();
        assert!(&lo <= v && v <= &hi, "{v}");
        assert_eq!(v.to_string(), "133865113248831303017408221049972845");
    }

    #[test]
    fn base_inequality_turns_true_at_35() {
        assert!(verify_base_inequality(35));
        let least = (2..=100).find(|&q| verify_base_inequality(q)).unwrap();
        assert_eq!(least, 35);
    }

    #[test]
    fn tower_form() {
        let t = tower_bound(3, 7).unwrap();
        match t.magnitude {
            Magnitude::Tower { base: 7, height: 2, top, truncated: false } => {
                assert_eq!(top, 7.0)
            }
            ref other => panic!("{other:?}"),
        }
        assert_eq!(t.render(), "7^(7)");
        assert!(tower_bound(2, 7).is_err());
    }

    #[test]
    fn tower_comparisons_are_transitive() {
        let mk = |h| BoundValue {
            magnitude: Magnitude::Tower { base: 2, height: h, top: 10.0, truncated: false },
            formula: "t",
        };
        let (a, b, c) = (mk(2), mk(3), mk(4));
        assert_eq!(a.partial_cmp_value(&b), Some(Ordering::Less));
        assert_eq!(b.partial_cmp_value(&c), Some(Ordering::Less));
        assert_eq!(a.partial_cmp_value(&c), Some(Ordering::Less));
        let small = BoundValue::exact(BigUint::from(1_000_000u64), "e");
        assert_eq!(small.partial_cmp_value(&b), Some(Ordering::Less));
        assert_eq!(b.partial_cmp_value(&small), Some(Ordering::Greater));
    }

    #[test]
    fn threshold_values() {
        // n = 2: q^(1/2)
        match threshold_length(2, 365).unwrap().magnitude {
            Magnitude::QPower { base: 365, num: 1, den: 2 } => {}
            ref other => panic!("{other:?}"),
        }
        // n = 3: exponent 2
        let v = threshold_length(3, 26).unwrap();
        assert_eq!(exact_u64(&v), 676);
        // far below the guarantee bound at q = 26
        let hi = f3_upper_improved(26).unwrap();
        assert_eq!(v.partial_cmp_value(&hi), Some(Ordering::Less));
    }

    #[test]
    fn log_count() {
        let q = 7u64;
        let m = BigUint::from(q).pow(5);
        assert_eq!(log_count_bound(&m, q).unwrap(), 5);
        assert_eq!(log_count_bound(&(m - 1u32), q).unwrap(), 4);
        assert_eq!(log_count_bound(&BigUint::one(), 2).unwrap(), 0);
        assert!(log_count_bound(&BigUint::one(), 1).is_err());
    }

    #[test]
    fn sqrt_e_rational_is_outward_rounded() {
        // compare r = SQRT_E_NUM / 10^15 against the 40-digit reference,
        // exactly, over a common power-of-ten denominator
        let digits: String = SQRT_E_DECIMAL.chars().filter(|c| c.is_ascii_digit()).collect();
        let frac_digits = SQRT_E_DECIMAL.len() - 2; // "1." prefix
        let reference: BigUint = digits.parse().unwrap();
        let scale = BigUint::from(10u32).pow((frac_digits as u32) - SQRT_E_DEN_POW10);
        let r_scaled = BigUint::from(SQRT_E_NUM) * &scale;
        // r must exceed even the next representable value above the
        // truncated reference, so r >= sqrt(e) for sure
        assert!(r_scaled > &reference + 1u32);
        // and overshoot by less than 1e-12
        let max_gap = BigUint::from(10u32).pow(frac_digits as u32 - 12);
        assert!(&r_scaled - &reference < max_gap);
    }

    #[test]
    fn rendering() {
        assert_eq!(f2_exact(3).render(), "7");
        assert_eq!(tower_bound(4, 3).unwrap().render(), "3^(3^(3))");
        assert_eq!(threshold_length(2, 9).unwrap().render(), "9^(1/2)");
    }
}
