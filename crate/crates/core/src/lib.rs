//! Publicly-verifiable deletion for quantum encryption, simulated.
//!
//! A ciphertext carries a classical encryption of `z = x0 ^ x1` together with
//! the two-branch state `(|x0> + (-1)^b |x1>) / sqrt(2)`. Decryption measures
//! in the Hadamard basis and outputs `z . w`; deletion measures in the
//! computational basis, and anyone holding `(F(x0), F(x1))` can check the
//! resulting certificate.
//!
//! * [`qstate`]: sparse two-branch and purified joint states, a small dense
//!   simulator used as an oracle, trace distance and the lemma checks.
//! * [`primitives`]: one-way functions, public-key encryption, commitments,
//!   one-way state generators and the semantic wrappers.
//! * [`pvd`]: the deletion-capable encryption schemes and the generic compiler.
//! * [`harness`]: security experiments, hybrids, adversaries and reports.

pub mod harness;
pub mod primitives;
pub mod pvd;
pub mod qstate;
pub mod rng;
