use std::fmt::Write;

use anyhow::Result;

use pvd_core::primitives::OwsgSpec;
use pvd_core::pvd::{OwsgPvdScheme, PvdCiphertext, PvdScheme, VerificationKey};
use pvd_core::rng::{stream, Lane};

use crate::config::{RunConfig, SchemeKind};

fn vk_summary(vk: &VerificationKey) -> Result<String> {
    Ok(match vk {
        VerificationKey::Classical { .. } => hex::encode(vk.to_bytes()?),
        VerificationKey::Quantum { copies0, copies1 } => {
            let qubits = copies0
                .iter()
                .chain(copies1)
                .next()
                .map_or(0, |s| s.num_qubits());
            format!(
                "{} + {} copies of {qubits}-qubit states",
                copies0.len(),
                copies1.len()
            )
        }
    })
}

fn ct_lines(out: &mut String, ct: &PvdCiphertext) {
    let _ = writeln!(
        out,
        "     ct.classical = {}",
        hex::encode(ct.classical_bytes())
    );
    let _ = writeln!(
        out,
        "     ct.quantum   = two-branch state on {} qubits",
        ct.num_qubits()
    );
}

/// Runs key generation, then decrypts one encryption of `b` and deletes a
/// second one. Returns the transcript and whether both behaved correctly.
pub fn run(cfg: &RunConfig) -> Result<(String, bool)> {
    let b = cfg.bit()?;
    let seed = cfg.seed;
    let mut out = String::new();
    let pke = cfg.pke_spec();
    let scheme = match cfg.scheme {
        SchemeKind::Owf => "owf",
        SchemeKind::Owsg => "owsg",
    };
    let _ = writeln!(
        out,
        "scheme {scheme}, n = {}, m = {}, pke {}, seed {seed}",
        cfg.n,
        cfg.m(),
        pke.name()
    );
    let _ = writeln!(out, "b = {}", u8::from(b));

    let (decrypted, verified) = match cfg.scheme {
        SchemeKind::Owf => {
            let owf = cfg.owf_params().build()?;
            let s = PvdScheme::new(pke, owf);
            let kp = s.keygen(&mut stream(seed, Lane::Keys, 0))?;
            let _ = writeln!(out, "gen  pk = {}", hex::encode(kp.pk.to_bytes()));
            let _ = writeln!(out, "     sk = {}", hex::encode(kp.sk.to_bytes()));
            let (vk, ct) = s.encrypt(&kp.pk, b, &mut stream(seed, Lane::Encryption, 0))?;
            let _ = writeln!(out, "enc  vk = {}", vk_summary(&vk)?);
            ct_lines(&mut out, &ct);
            let bit = s.decrypt(&kp.sk, ct, &mut stream(seed, Lane::Measurement, 0))?;
            let _ = writeln!(out, "dec  -> {}", u8::from(bit));
            let (vk, ct) = s.encrypt(&kp.pk, b, &mut stream(seed, Lane::Encryption, 1))?;
            let _ = writeln!(out, "enc  vk = {}", vk_summary(&vk)?);
            ct_lines(&mut out, &ct);
            let cert = s.delete(ct, &mut stream(seed, Lane::Measurement, 1));
            let _ = writeln!(out, "del  cert = {}", hex::encode(cert.to_bytes()));
            let ok = s.verify(&vk, &cert)?;
            (bit, ok)
        }
        SchemeKind::Owsg => {
            let owsg = OwsgSpec::new(cfg.owsg_params())?;
            let s = OwsgPvdScheme::new(pke, owsg, cfg.t)?;
            let kp = s.keygen(&mut stream(seed, Lane::Keys, 0))?;
            let _ = writeln!(out, "gen  pk = {}", hex::encode(kp.pk.to_bytes()));
            let _ = writeln!(out, "     sk = {}", hex::encode(kp.sk.to_bytes()));
            let (vk, ct) = s.encrypt(&kp.pk, b, &mut stream(seed, Lane::Encryption, 0))?;
            let _ = writeln!(out, "enc  vk = {}", vk_summary(&vk)?);
            ct_lines(&mut out, &ct);
            let bit = s.decrypt(&kp.sk, ct, &mut stream(seed, Lane::Measurement, 0))?;
            let _ = writeln!(out, "dec  -> {}", u8::from(bit));
            let (mut vk, ct) = s.encrypt(&kp.pk, b, &mut stream(seed, Lane::Encryption, 1))?;
            let _ = writeln!(out, "enc  vk = {}", vk_summary(&vk)?);
            ct_lines(&mut out, &ct);
            let cert = s.delete(ct, &mut stream(seed, Lane::Measurement, 1));
            let _ = writeln!(out, "del  cert = {}", hex::encode(cert.to_bytes()));
            let ok = s.verify(&mut vk, &cert, &mut stream(seed, Lane::Verification, 0))?;
            let _ = writeln!(out, "     vk after vrfy = {}", vk_summary(&vk)?);
            (bit, ok)
        }
    };
    let _ = writeln!(out, "vrfy -> {}", if verified { "⊤" } else { "⊥" });
    let ok = decrypted == b && verified;
    let _ = writeln!(out, "{}", if ok { "correct" } else { "INCORRECT" });
    Ok((out, ok))
}
