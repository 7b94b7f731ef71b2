use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use super::PrimitiveError;
use crate::qstate::BitString;
use crate::rng::{stream, Lane};

/// Largest input length for the table-backed toy function.
pub const TOY_MAX_BITS: usize = 16;
/// Largest input length for which brute-force enumeration is offered.
pub const ENUMERABLE_BITS: usize = 20;

/// Serializable description of a one-way function.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase", deny_unknown_fields)]
pub enum OwfParams {
    Hash { n: usize, m: usize },
    Toy { n: usize, m: usize, seed: u64 },
}

impl OwfParams {
    pub fn build(&self) -> Result<OwfSpec, PrimitiveError> {
        match *self {
            OwfParams::Hash { n, m } => OwfSpec::hash(n, m),
            OwfParams::Toy { n, m, seed } => OwfSpec::toy(n, m, seed),
        }
    }

    pub fn n(&self) -> usize {
        match *self {
            OwfParams::Hash { n, .. } | OwfParams::Toy { n, .. } => n,
        }
    }
}

#[derive(Clone)]
enum Kind {
    Hash,
    Toy {
        table: Arc<Vec<BitString>>,
        inverse: Arc<BTreeMap<BitString, Vec<u64>>>,
    },
}

/// A deterministic map `{0,1}^n -> {0,1}^m`.
#[derive(Clone)]
pub struct OwfSpec {
    params: OwfParams,
    kind: Kind,
}

impl fmt::Debug for OwfSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_tuple("OwfSpec").field(&self.params).finish()
    }
}

impl PartialEq for OwfSpec {
    fn eq(&self, other: &Self) -> bool {
        self.params == other.params
    }
}

/// SHA-256 in counter mode, truncated to `bits`.
pub(crate) fn expand(domain: &[u8], parts: &[&[u8]], bits: usize) -> BitString {
    let mut out = Vec::with_capacity(bits.div_ceil(8));
    let mut counter = 0u32;
    while out.len() * 8 < bits {
        let mut h = Sha256::new();
        h.update(domain);
        for p in parts {
            h.update((p.len() as u32).to_be_bytes());
            h.update(p);
        }
        h.update(counter.to_be_bytes());
        out.extend_from_slice(&h.finalize());
        counter += 1;
    }
    out.truncate(bits.div_ceil(8));
    if !bits.is_multiple_of(8) {
        let last = out.len() - 1;
        out[last] &= 0xffu8 << (8 - bits % 8);
    }
    BitString::from_bytes(&out, bits).expect("sized to bits")
}

impl OwfSpec {
    /// SHA-256 based function, domain-separated by `(n, m)`.
    pub fn hash(n: usize, m: usize) -> Result<Self, PrimitiveError> {
        if n < 8 || m < 8 {
            return Err(PrimitiveError::InvalidParameters(format!(
                "hash OWF needs n, m >= 8 (got {n}, {m})"
            )));
        }
        Ok(Self {
            params: OwfParams::Hash { n, m },
            kind: Kind::Hash,
        })
    }

    /// A seeded random table of `2^n` outputs; fully invertible by lookup.
    pub fn toy(n: usize, m: usize, seed: u64) -> Result<Self, PrimitiveError> {
        if n == 0 || n > TOY_MAX_BITS || m == 0 {
            return Err(PrimitiveError::InvalidParameters(format!(
                "toy OWF needs 1 <= n <= {TOY_MAX_BITS} and m >= 1 (got {n}, {m})"
            )));
        }
        let mut rng = stream(seed, Lane::Setup, 0);
        let table: Vec<BitString> = (0..1u64 << n)
            .map(|_| BitString::random(m, &mut rng).expect("m >= 1"))
            .collect();
        let mut inverse: BTreeMap<BitString, Vec<u64>> = BTreeMap::new();
        for (x, y) in table.iter().enumerate() {
            inverse.entry(y.clone()).or_default().push(x as u64);
        }
        Ok(Self {
            params: OwfParams::Toy { n, m, seed },
            kind: Kind::Toy {
                table: Arc::new(table),
                inverse: Arc::new(inverse),
            },
        })
    }

    pub fn params(&self) -> OwfParams {
        self.params
    }

    pub fn input_bits(&self) -> usize {
        self.params.n()
    }

    pub fn output_bits(&self) -> usize {
        match self.params {
            OwfParams::Hash { m, .. } | OwfParams::Toy { m, .. } => m,
        }
    }

    pub fn eval(&self, x: &BitString) -> Result<BitString, PrimitiveError> {
        let n = self.input_bits();
        if x.len() != n {
            return Err(PrimitiveError::InputLength {
                expected: n,
                got: x.len(),
            });
        }
        Ok(match &self.kind {
            Kind::Hash => {
                let m = self.output_bits() as u32;
                expand(
                    b"pvd-sim/owf/v1",
                    &[&(n as u32).to_be_bytes(), &m.to_be_bytes(), &x.to_bytes()],
                    m as usize,
                )
            }
            Kind::Toy { table, .. } => table[x.to_index().expect("n <= 16") as usize].clone(),
        })
    }

    pub fn is_enumerable(&self) -> bool {
        self.input_bits() <= ENUMERABLE_BITS
    }

    /// All preimages of `y`, in increasing order.
    pub fn preimages(&self, y: &BitString) -> Result<Vec<BitString>, PrimitiveError> {
        let n = self.input_bits();
        match &self.kind {
            Kind::Toy { inverse, .. } => Ok(inverse
                .get(y)
                .map(|xs| {
                    xs.iter()
                        .map(|&x| BitString::from_index(x, n).expect("x < 2^n"))
                        .collect()
                })
                .unwrap_or_default()),
            Kind::Hash => {
                if !self.is_enumerable() {
                    return Err(PrimitiveError::NotEnumerable(n));
                }
                let mut out = Vec::new();
                for idx in 0..1u64 << n {
                    let x = BitString::from_index(idx, n)?;
                    if &self.eval(&x)? == y {
                        out.push(x);
                    }
                }
                Ok(out)
            }
        }
    }

    /// Smallest preimage of `y`, if any.
    pub fn first_preimage(&self, y: &BitString) -> Result<Option<BitString>, PrimitiveError> {
        match &self.kind {
            Kind::Toy { .. } => Ok(self.preimages(y)?.into_iter().next()),
            Kind::Hash => {
                let n = self.input_bits();
                if !self.is_enumerable() {
                    return Err(PrimitiveError::NotEnumerable(n));
                }
                for idx in 0..1u64 << n {
                    let x = BitString::from_index(idx, n)?;
                    if &self.eval(&x)? == y {
                        return Ok(Some(x));
                    }
                }
                Ok(None)
            }
        }
    }

    /// Number of unordered pairs `{x, x'}` with `F(x) = F(x')`. Toy functions only.
    pub fn colliding_pairs(&self) -> Result<u64, PrimitiveError> {
        match &self.kind {
            Kind::Toy { inverse, .. } => Ok(inverse
                .values()
                .map(|xs| (xs.len() as u64) * (xs.len() as u64 - 1) / 2)
                .sum()),
            Kind::Hash => Err(PrimitiveError::NotEnumerable(self.input_bits())),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha20Rng;
    use std::collections::HashSet;

    #[test]
    fn hash_output_length_and_determinism() {
        let f = OwfSpec::hash(64, 72).unwrap();
        let mut rng = ChaCha20Rng::seed_from_u64(1);
        for _ in 0..50 {
            let x = BitString::random(64, &mut rng).unwrap();
            let y = f.eval(&x).unwrap();
            assert_eq!(y.len(), 72);
            assert_eq!(y, OwfSpec::hash(64, 72).unwrap().eval(&x).unwrap());
        }
        let zero = BitString::zeros(8).unwrap();
        let a = OwfSpec::hash(8, 8).unwrap().eval(&zero).unwrap();
        let b = OwfSpec::hash(8, 16).unwrap().eval(&zero).unwrap();
        assert_ne!(
            a.to_string(),
            b.slice(0, 8).unwrap().to_string(),
            "domain separated by m"
        );
    }

    #[test]
    fn hash_rejects_small_parameters() {
        assert!(OwfSpec::hash(7, 64).is_err());
        assert!(OwfSpec::hash(64, 4).is_err());
        let f = OwfSpec::hash(8, 8).unwrap();
        assert!(matches!(
            f.eval(&BitString::zeros(9).unwrap()),
            Err(PrimitiveError::InputLength {
                expected: 8,
                got: 9
            })
        ));
    }

    #[test]
    fn no_hash_collisions_in_random_sample() {
        let f = OwfSpec::hash(64, 64).unwrap();
        let mut rng = ChaCha20Rng::seed_from_u64(99);
        let mut seen = HashSet::new();
        let mut inputs = HashSet::new();
        for _ in 0..100_000 {
            let x = BitString::random(64, &mut rng).unwrap();
            if inputs.insert(x.clone()) {
                assert!(seen.insert(f.eval(&x).unwrap()), "collision found");
            }
        }
    }

    #[test]
    fn toy_preimages_contain_input() {
        let f = OwfSpec::toy(8, 6, 3).unwrap();
        for idx in 0..256 {
            let x = BitString::from_index(idx, 8).unwrap();
            let pre = f.preimages(&f.eval(&x).unwrap()).unwrap();
            assert!(pre.contains(&x));
            assert_eq!(
                f.first_preimage(&f.eval(&x).unwrap()).unwrap().as_ref(),
                pre.first()
            );
        }
        assert!(OwfSpec::toy(17, 8, 0).is_err());
    }

    #[test]
    fn toy_is_seed_deterministic() {
        let (a, b, c) = (
            OwfSpec::toy(8, 16, 5).unwrap(),
            OwfSpec::toy(8, 16, 5).unwrap(),
            OwfSpec::toy(8, 16, 6).unwrap(),
        );
        let x = BitString::from_index(77, 8).unwrap();
        assert_eq!(a.eval(&x).unwrap(), b.eval(&x).unwrap());
        let differs = (0..256).any(|i| {
            let x = BitString::from_index(i, 8).unwrap();
            a.eval(&x).unwrap() != c.eval(&x).unwrap()
        });
        assert!(differs);
    }

    #[test]
    fn toy_collision_counts_by_table_scan() {
        // 2^8 inputs into 2^16 outputs: C(256, 2) / 2^16 ~ 0.5 expected colliding pairs
        let counts: Vec<u64> = (0..40)
            .map(|seed| {
                OwfSpec::toy(8, 16, seed)
                    .unwrap()
                    .colliding_pairs()
                    .unwrap()
            })
            .collect();
        let mean = counts.iter().sum::<u64>() as f64 / counts.len() as f64;
        assert!(mean < 1.5, "mean colliding pairs {mean}");
        // independent oracle: count by comparing every pair
        let f = OwfSpec::toy(8, 16, 0).unwrap();
        let ys: Vec<BitString> = (0..256)
            .map(|i| f.eval(&BitString::from_index(i, 8).unwrap()).unwrap())
            .collect();
        let mut brute = 0;
        for i in 0..256 {
            for j in i + 1..256 {
                if ys[i] == ys[j] {
                    brute += 1;
                }
            }
        }
        assert_eq!(brute, counts[0]);
    }

    #[test]
    fn small_hash_is_enumerable() {
        let f = OwfSpec::hash(10, 12).unwrap();
        let x = BitString::from_index(700, 10).unwrap();
        let y = f.eval(&x).unwrap();
        assert!(f.preimages(&y).unwrap().contains(&x));
        assert!(OwfSpec::hash(64, 64).unwrap().preimages(&y).is_err());
    }
}
