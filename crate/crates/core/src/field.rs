//! Exact arithmetic in the biquadratic field `Q(√2, √3)`.
//!
//! Every cosine `cos(π/m)` for a crystallographic label lies in this field,
//! so the Gram matrix of a crystallographic system can be handled without
//! rounding. Elements are `a + b√2 + c√3 + d√6` with rational coordinates.

use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Biquadratic {
    // Coordinates on the basis 1, √2, √3, √6.
    c: [BigRational; 4],
}

fn rat(n: i64, d: i64) -> BigRational {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

impl Biquadratic {
    pub fn new(a: BigRational, b: BigRational, c: BigRational, d: BigRational) -> Self {
        Self { c: [a, b, c, d] }
    }

    pub fn from_ratio(n: i64, d: i64) -> Self {
        Self::new(
            rat(n, d),
            BigRational::zero(),
            BigRational::zero(),
            BigRational::zero(),
        )
    }

    pub fn from_int(n: i64) -> Self {
        Self::from_ratio(n, 1)
    }

    /// `(p/q) · √2`.
    pub fn sqrt2_times(p: i64, q: i64) -> Self {
        Self::new(
            BigRational::zero(),
            rat(p, q),
            BigRational::zero(),
            BigRational::zero(),
        )
    }

    /// `(p/q) · √3`.
    pub fn sqrt3_times(p: i64, q: i64) -> Self {
        Self::new(
            BigRational::zero(),
            BigRational::zero(),
            rat(p, q),
            BigRational::zero(),
        )
    }

    pub fn coords(&self) -> &[BigRational; 4] {
        &self.c
    }

    pub fn is_zero(&self) -> bool {
        self.c.iter().all(Zero::is_zero)
    }

    /// Exact sign, decided by repeated squaring down the tower
    /// `Q ⊂ Q(√2) ⊂ Q(√2, √3)`.
    pub fn signum(&self) -> Ordering {
        // x = p + q√3 with p = a + b√2, q = c + d√2.
        let [a, b, c, d] = &self.c;
        let sp = sign_sqrt2(a, b);
        let sq = sign_sqrt2(c, d);
        combine_signs(sp, sq, || {
            // sign(p² − 3q²), an element of Q(√2).
            let (p2a, p2b) = square_sqrt2(a, b);
            let (q2a, q2b) = square_sqrt2(c, d);
            let three = rat(3, 1);
            sign_sqrt2(&(p2a - &three * q2a), &(p2b - three * q2b))
        })
    }

    /// Multiplicative inverse; `None` for zero.
    pub fn inverse(&self) -> Option<Self> {
        if self.is_zero() {
            return None;
        }
        // 1/(p + q√3) = (p − q√3) / (p² − 3q²), then the same trick over √2.
        let [a, b, c, d] = &self.c;
        let (p2a, p2b) = square_sqrt2(a, b);
        let (q2a, q2b) = square_sqrt2(c, d);
        let three = rat(3, 1);
        let na = p2a - &three * q2a;
        let nb = p2b - three * q2b;
        // 1/(na + nb√2) = (na − nb√2) / (na² − 2 nb²).
        let norm = &na * &na - rat(2, 1) * &nb * &nb;
        debug_assert!(!norm.is_zero());
        let inv_n = Self::new(
            &na / &norm,
            -(&nb / &norm),
            BigRational::zero(),
            BigRational::zero(),
        );
        let conj = Self::new(a.clone(), b.clone(), -c.clone(), -d.clone());
        Some(&conj * &inv_n)
    }

    /// Floating-point approximation, for display and cross-checks only.
    pub fn to_f64(&self) -> f64 {
        let f = |r: &BigRational| r.to_f64().unwrap_or(f64::NAN);
        f(&self.c[0])
            + f(&self.c[1]) * std::f64::consts::SQRT_2
            + f(&self.c[2]) * 3f64.sqrt()
            + f(&self.c[3]) * 6f64.sqrt()
    }
}

fn sign_of(r: &BigRational) -> Ordering {
    if r.is_zero() {
        Ordering::Equal
    } else if r.is_positive() {
        Ordering::Greater
    } else {
        Ordering::Less
    }
}

/// Sign of `u + v·w` given the signs of `u` and `v`, where `w > 0` is the
/// adjoined root; `diff` yields `sign(u² − v²w²)` when the signs disagree.
fn combine_signs(su: Ordering, sv: Ordering, diff: impl FnOnce() -> Ordering) -> Ordering {
    match (su, sv) {
        (Ordering::Equal, s) | (s, Ordering::Equal) => s,
        (x, y) if x == y => x,
        // Opposite signs: |u| vs |v|·w decides, oriented by sign(u).
        (x, _) => match diff() {
            Ordering::Equal => Ordering::Equal,
            Ordering::Greater => x,
            Ordering::Less => x.reverse(),
        },
    }
}

fn sign_sqrt2(a: &BigRational, b: &BigRational) -> Ordering {
    combine_signs(sign_of(a), sign_of(b), || {
        sign_of(&(a * a - rat(2, 1) * b * b))
    })
}

fn square_sqrt2(a: &BigRational, b: &BigRational) -> (BigRational, BigRational) {
    (a * a + rat(2, 1) * b * b, rat(2, 1) * a * b)
}

impl Zero for Biquadratic {
    fn zero() -> Self {
        Self::from_int(0)
    }

    fn is_zero(&self) -> bool {
        Biquadratic::is_zero(self)
    }
}

impl One for Biquadratic {
    fn one() -> Self {
        Self::from_int(1)
    }
}

impl Add for Biquadratic {
    type Output = Self;
    fn add(self, rhs: Self) -> Self {
        &self + &rhs
    }
}

impl Mul for Biquadratic {
    type Output = Self;
    fn mul(self, rhs: Self) -> Self {
        &self * &rhs
    }
}

impl<'a> Add<&'a Biquadratic> for &'a Biquadratic {
    type Output = Biquadratic;
    fn add(self, rhs: &Biquadratic) -> Biquadratic {
        Biquadratic {
            c: std::array::from_fn(|k| &self.c[k] + &rhs.c[k]),
        }
    }
}

impl<'a> Sub<&'a Biquadratic> for &'a Biquadratic {
    type Output = Biquadratic;
    fn sub(self, rhs: &Biquadratic) -> Biquadratic {
        Biquadratic {
            c: std::array::from_fn(|k| &self.c[k] - &rhs.c[k]),
        }
    }
}

impl Neg for &Biquadratic {
    type Output = Biquadratic;
    fn neg(self) -> Biquadratic {
        Biquadratic {
            c: std::array::from_fn(|k| -&self.c[k]),
        }
    }
}

impl<'a> Mul<&'a Biquadratic> for &'a Biquadratic {
    type Output = Biquadratic;
    fn mul(self, rhs: &Biquadratic) -> Biquadratic {
        let [a1, b1, c1, d1] = &self.c;
        let [a2, b2, c2, d2] = &rhs.c;
        let two = rat(2, 1);
        let three = rat(3, 1);
        let six = rat(6, 1);
        // √2√2 = 2, √3√3 = 3, √6√6 = 6, √2√3 = √6, √2√6 = 2√3, √3√6 = 3√2.
        let a = a1 * a2 + &two * b1 * b2 + &three * c1 * c2 + &six * d1 * d2;
        let b = a1 * b2 + b1 * a2 + &three * (c1 * d2 + d1 * c2);
        let c = a1 * c2 + c1 * a2 + &two * (b1 * d2 + d1 * b2);
        let d = a1 * d2 + d1 * a2 + b1 * c2 + c1 * b2;
        Biquadratic { c: [a, b, c, d] }
    }
}

impl fmt::Debug for Biquadratic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl fmt::Display for Biquadratic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let names = ["", "√2", "√3", "√6"];
        let mut wrote = false;
        for (coef, name) in self.c.iter().zip(names) {
            if coef.is_zero() {
                continue;
            }
            if wrote {
                f.write_str(if coef.is_negative() { " - " } else { " + " })?;
                write!(f, "{}", coef.abs())?;
            } else {
                write!(f, "{coef}")?;
            }
            if !name.is_empty() {
                write!(f, "·{name}")?;
            }
            wrote = true;
        }
        if !wrote {
            f.write_str("0")?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn elem(a: i64, b: i64, c: i64, d: i64, den: i64) -> Biquadratic {
        Biquadratic::new(rat(a, den), rat(b, den), rat(c, den), rat(d, den))
    }

    #[test]
    fn known_signs() {
        // √2 < 3/2
        assert_eq!(elem(-3, 2, 0, 0, 2).signum(), Ordering::Less);
        // 3√2 − 2√3 = 4.243 − 3.464 > 0
        assert_eq!(elem(0, 3, -2, 0, 1).signum(), Ordering::Greater);
        // √6 − √2·√3 = 0
        let s2 = Biquadratic::sqrt2_times(1, 1);
        let s3 = Biquadratic::sqrt3_times(1, 1);
        let diff = &(&s2 * &s3) - &elem(0, 0, 0, 1, 1);
        assert_eq!(diff.signum(), Ordering::Equal);
        // 5 + 2√6 − (√2 + √3)² = 0
        let sum = &s2 + &s3;
        assert!((&(&sum * &sum) - &elem(5, 0, 0, 2, 1)).is_zero());
    }

    #[test]
    fn inverse_of_sum_of_roots() {
        let x = elem(1, 1, 1, 1, 1);
        let inv = x.inverse().unwrap();
        assert_eq!(&x * &inv, Biquadratic::from_int(1));
        assert!(Biquadratic::from_int(0).inverse().is_none());
    }

    proptest! {
        #[test]
        fn sign_matches_float(a in -50i64..50, b in -50i64..50, c in -50i64..50, d in -50i64..50) {
            let x = elem(a, b, c, d, 7);
            let approx = x.to_f64();
            prop_assume!(approx.abs() > 1e-9);
            let expect = if approx > 0.0 { Ordering::Greater } else { Ordering::Less };
            prop_assert_eq!(x.signum(), expect);
        }

        #[test]
        fn product_with_inverse_is_one(a in -9i64..9, b in -9i64..9, c in -9i64..9, d in -9i64..9) {
            let x = elem(a, b, c, d, 3);
            prop_assume!(!x.is_zero());
            prop_assert_eq!(&x * &x.inverse().unwrap(), Biquadratic::from_int(1));
        }
    }
}
