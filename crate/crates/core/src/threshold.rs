//! The field-size threshold `q >= 1764^d / 25` for property (T), where `d`
//! is the largest rank of a finite special subgroup.

use num_bigint::BigUint;
use num_prime::nt_funcs::is_prime;
use num_prime::{Primality, PrimalityTestConfig};
use num_rational::BigRational;
use num_traits::Pow;
use serde::Serialize;

use crate::classify::max_spherical_rank;
use crate::error::{CoreError, Result};
use crate::system::CoxeterSystem;

/// How the primality of [`KazhdanThreshold::prime`] was established.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Certainty {
    /// Deterministic below `2^64`.
    Proven,
    /// Passed the Baillie-PSW test, which has no known counterexample.
    BailliePsw,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct KazhdanThreshold {
    pub d: usize,
    /// `1764^d / 25`, exactly.
    pub bound: BigRational,
    /// Smallest prime power `q >= bound`.
    pub q: BigUint,
    /// `q = prime^exponent`.
    pub prime: BigUint,
    pub exponent: u32,
    pub certainty: Certainty,
}

impl KazhdanThreshold {
    /// The bound as an exact decimal; `1764^d / 25` always has at most two
    /// fractional digits.
    pub fn bound_decimal(&self) -> String {
        let hundredths: num_bigint::BigInt = self.bound.numer() * 100 / self.bound.denom();
        let hundredths = hundredths.to_biguint().expect("bound is positive");
        let hundred = BigUint::from(100u32);
        format!(
            "{}.{:0>2}",
            &hundredths / &hundred,
            (&hundredths % &hundred).to_string()
        )
    }
}

impl Serialize for KazhdanThreshold {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        use serde::ser::SerializeStruct;
        let mut st = s.serialize_struct("KazhdanThreshold", 7)?;
        st.serialize_field("d", &self.d)?;
        st.serialize_field("bound", &self.bound.to_string())?;
        st.serialize_field("bound_decimal", &self.bound_decimal())?;
        st.serialize_field("q", &self.q.to_string())?;
        st.serialize_field("prime", &self.prime.to_string())?;
        st.serialize_field("exponent", &self.exponent)?;
        st.serialize_field("certainty", &self.certainty)?;
        st.end()
    }
}

/// The threshold for the system's largest finite special subgroup.
pub fn kazhdan_threshold(system: &CoxeterSystem) -> Result<KazhdanThreshold> {
    kazhdan_threshold_for_rank(max_spherical_rank(system))
}

/// The threshold for a given `d >= 1`.
pub fn kazhdan_threshold_for_rank(d: usize) -> Result<KazhdanThreshold> {
    if d == 0 {
        return Err(CoreError::Precondition(
            "the threshold needs a finite special subgroup of rank at least 1".into(),
        ));
    }
    let numer: BigUint = Pow::pow(BigUint::from(1764u32), d as u32);
    let bound = BigRational::new(numer.into(), BigUint::from(25u32).into());
    let mut candidate = bound
        .ceil()
        .to_integer()
        .to_biguint()
        .expect("bound is positive");
    loop {
        if let Some((prime, exponent, certainty)) = prime_power(&candidate) {
            return Ok(KazhdanThreshold {
                d,
                bound,
                q: candidate,
                prime,
                exponent,
                certainty,
            });
        }
        candidate += 1u32;
    }
}

/// `Some((p, k, certainty))` when `n = p^k` with `p` prime and `k >= 1`.
pub fn prime_power(n: &BigUint) -> Option<(BigUint, u32, Certainty)> {
    if *n < BigUint::from(2u32) {
        return None;
    }
    let bits = n.bits() as u32;
    for k in 1..=bits {
        let root = if k == 1 { n.clone() } else { n.nth_root(k) };
        if root < BigUint::from(2u32) {
            break;
        }
        if Pow::pow(&root, k) != *n {
            continue;
        }
        match is_prime(&root, Some(PrimalityTestConfig::bpsw())) {
            Primality::Yes => return Some((root, k, Certainty::Proven)),
            Primality::Probable(_) => return Some((root, k, Certainty::BailliePsw)),
            Primality::No => {}
        }
    }
    None
}
