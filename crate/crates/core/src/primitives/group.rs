use serde::{Deserialize, Serialize};

use super::PrimitiveError;

/// A safe-prime group: `p = 2q + 1` with `q` prime, and a generator `g` of the
/// order-`q` subgroup of quadratic residues.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GroupParams {
    pub p: u64,
    pub g: u64,
}

impl Default for GroupParams {
    /// The largest 62-bit safe prime, with `g = 4`.
    fn default() -> Self {
        Self {
            p: 4_611_686_018_427_377_339,
            g: 4,
        }
    }
}

impl GroupParams {
    pub fn new(p: u64, g: u64) -> Result<Self, PrimitiveError> {
        let params = Self { p, g };
        params.validate()?;
        Ok(params)
    }

    pub fn validate(&self) -> Result<(), PrimitiveError> {
        let bad = |m: &str| Err(PrimitiveError::InvalidParameters(m.to_string()));
        if self.p < 7 || !is_prime(self.p) {
            return bad("p must be a prime >= 7");
        }
        if !is_prime(self.order()) {
            return bad("p must be a safe prime ((p - 1) / 2 prime)");
        }
        if self.g <= 1 || self.g >= self.p - 1 {
            return bad("g must lie in (1, p - 1)");
        }
        if self.pow(self.g, self.order()) != 1 {
            return bad("g does not generate the prime-order subgroup");
        }
        Ok(())
    }

    /// Prime order `q` of the subgroup.
    pub fn order(&self) -> u64 {
        (self.p - 1) / 2
    }

    pub fn mul(&self, a: u64, b: u64) -> u64 {
        ((a as u128 * b as u128) % self.p as u128) as u64
    }

    pub fn pow(&self, base: u64, exp: u64) -> u64 {
        pow_mod(base, exp, self.p)
    }
}

fn pow_mod(base: u64, mut exp: u64, modulus: u64) -> u64 {
    let m = modulus as u128;
    let mut acc: u128 = 1 % m;
    let mut b = base as u128 % m;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = acc * b % m;
        }
        b = b * b % m;
        exp >>= 1;
    }
    acc as u64
}

/// Deterministic Miller-Rabin for 64-bit integers.
fn is_prime(n: u64) -> bool {
    const BASES: [u64; 12] = [2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37];
    if n < 2 {
        return false;
    }
    for &p in &BASES {
        if n.is_multiple_of(p) {
            return n == p;
        }
    }
    let (mut d, mut s) = (n - 1, 0);
    while d % 2 == 0 {
        d /= 2;
        s += 1;
    }
    'witness: for &a in &BASES {
        let mut x = pow_mod(a, d, n);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 1..s {
            x = ((x as u128 * x as u128) % n as u128) as u64;
            if x == n - 1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn primality() {
        let primes = [2u64, 3, 1019, 509, 2_305_843_009_213_693_951];
        assert!(primes.iter().all(|&p| is_prime(p)));
        assert!(![1u64, 4, 561, 1_000_000_007 * 3]
            .iter()
            .any(|&c| is_prime(c)));
    }

    #[test]
    fn default_group_is_valid() {
        GroupParams::default().validate().unwrap();
        GroupParams::new(1019, 4).unwrap();
    }

    #[test]
    fn rejects_bad_parameters() {
        assert!(GroupParams::new(1021, 4).is_err()); // prime, but 510 is not
        assert!(GroupParams::new(1019, 1).is_err());
        assert!(GroupParams::new(1019, 1018).is_err());
        // 2 is a non-residue mod 1019 (1019 = 3 mod 8), so it has order 2q
        assert!(GroupParams::new(1019, 2).is_err());
        assert!(GroupParams::new(1000, 4).is_err());
    }
}
