//! Versioned JSON artifacts: states, key files, code files, matrix files.
//!
//! Every artifact carries `format_version`; loaders reject unknown versions.
//! Matrices render as arrays of '0'/'1' row strings (index 0 leftmost), so
//! round trips are bit-exact. States store amplitudes as [re, im] pairs and
//! are rejected when the norm strays more than 1e-6 from 1.

use std::fs;
use std::path::Path;

use num::complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::codes::LinearCode;
use crate::error::{Error, Result};
use crate::gf2::BitMatrix;
use crate::pke::{KeyPair, PrivateKey, PublicKey};
use crate::qsim::StateVector;

/// Version written into every artifact this build produces.
pub const FORMAT_VERSION: u32 = 1;

fn check_version(found: u32) -> Result<()> {
    if found != FORMAT_VERSION {
        return Err(Error::FormatVersion(found));
    }
    Ok(())
}

fn check_kind(found: &str, expected: &str) -> Result<()> {
    if found != expected {
        return Err(Error::Format(format!(
            "expected kind {expected:?}, found {found:?}"
        )));
    }
    Ok(())
}

/// Quantum state artifact.
#[derive(Serialize, Deserialize)]
pub struct StateFile {
    pub format_version: u32,
    pub qubits: usize,
    pub amplitudes: Vec<[f64; 2]>,
}

impl StateFile {
    pub fn from_state(state: &StateVector) -> Self {
        StateFile {
            format_version: FORMAT_VERSION,
            qubits: state.qubits(),
            amplitudes: state.amplitudes().iter().map(|a| [a.re, a.im]).collect(),
        }
    }

    pub fn into_state(self) -> Result<StateVector> {
        check_version(self.format_version)?;
        if self.amplitudes.len() != 1usize.checked_shl(self.qubits as u32).unwrap_or(0) {
            return Err(Error::Format(format!(
                "{} amplitudes for {} qubits",
                self.amplitudes.len(),
                self.qubits
            )));
        }
        let amps = self
            .amplitudes
            .iter()
            .map(|[re, im]| Complex64::new(*re, *im))
            .collect();
        StateVector::from_amplitudes(amps)
    }
}

/// Public-key artifact.
#[derive(Serialize, Deserialize)]
pub struct PublicKeyFile {
    pub format_version: u32,
    pub kind: String,
    pub n: usize,
    pub k: usize,
    pub t: usize,
    pub g_prime: BitMatrix,
}

impl PublicKeyFile {
    pub fn from_key(pk: &PublicKey) -> Self {
        PublicKeyFile {
            format_version: FORMAT_VERSION,
            kind: "public".into(),
            n: pk.n(),
            k: pk.k(),
            t: pk.t(),
            g_prime: pk.g_prime().clone(),
        }
    }

    pub fn into_key(self) -> Result<PublicKey> {
        check_version(self.format_version)?;
        check_kind(&self.kind, "public")?;
        if self.g_prime.rows() != self.k || self.g_prime.cols() != self.n {
            return Err(Error::Format("public key shape disagrees with header".into()));
        }
        PublicKey::new(self.g_prime, self.t)
    }
}

/// Private-key artifact: scrambler, code parts and permutation. The
/// syndrome table is rebuilt on load and all invariants are revalidated.
#[derive(Serialize, Deserialize)]
pub struct PrivateKeyFile {
    pub format_version: u32,
    pub kind: String,
    pub n: usize,
    pub k: usize,
    pub d: usize,
    pub t: usize,
    pub s: BitMatrix,
    pub g: BitMatrix,
    pub h: BitMatrix,
    pub p: BitMatrix,
}

impl PrivateKeyFile {
    pub fn from_key(sk: &PrivateKey) -> Self {
        let code = sk.code();
        PrivateKeyFile {
            format_version: FORMAT_VERSION,
            kind: "private".into(),
            n: code.n(),
            k: code.k(),
            d: code.d(),
            t: code.t(),
            s: sk.scrambler().clone(),
            g: code.generator().clone(),
            h: code.check().clone(),
            p: sk.permutation().clone(),
        }
    }

    pub fn into_pair(self) -> Result<KeyPair> {
        check_version(self.format_version)?;
        check_kind(&self.kind, "private")?;
        if self.g.rows() != self.k || self.g.cols() != self.n {
            return Err(Error::Format("generator shape disagrees with header".into()));
        }
        let code = LinearCode::from_parts(self.g, self.h, self.d, self.t)?;
        KeyPair::from_parts(code, self.s, self.p)
    }
}

/// Double-scheme bundle of two public or two private halves.
#[derive(Serialize, Deserialize)]
pub struct DoublePublicFile {
    pub format_version: u32,
    pub kind: String,
    pub first: PublicKeyFile,
    pub second: PublicKeyFile,
}

impl DoublePublicFile {
    pub fn from_keys(first: &PublicKey, second: &PublicKey) -> Self {
        DoublePublicFile {
            format_version: FORMAT_VERSION,
            kind: "double_public".into(),
            first: PublicKeyFile::from_key(first),
            second: PublicKeyFile::from_key(second),
        }
    }

    pub fn into_keys(self) -> Result<(PublicKey, PublicKey)> {
        check_version(self.format_version)?;
        check_kind(&self.kind, "double_public")?;
        let first = self.first.into_key()?;
        let second = self.second.into_key()?;
        if second.k() != first.n() {
            return Err(Error::Format("double key layers do not compose".into()));
        }
        Ok((first, second))
    }
}

#[derive(Serialize, Deserialize)]
pub struct DoublePrivateFile {
    pub format_version: u32,
    pub kind: String,
    pub first: PrivateKeyFile,
    pub second: PrivateKeyFile,
}

impl DoublePrivateFile {
    pub fn from_pairs(first: &KeyPair, second: &KeyPair) -> Self {
        DoublePrivateFile {
            format_version: FORMAT_VERSION,
            kind: "double_private".into(),
            first: PrivateKeyFile::from_key(&first.private),
            second: PrivateKeyFile::from_key(&second.private),
        }
    }

    pub fn into_pairs(self) -> Result<(KeyPair, KeyPair)> {
        check_version(self.format_version)?;
        check_kind(&self.kind, "double_private")?;
        let first = self.first.into_pair()?;
        let second = self.second.into_pair()?;
        if second.public.k() != first.public.n() {
            return Err(Error::Format("double key layers do not compose".into()));
        }
        Ok((first, second))
    }
}

/// Standalone code artifact.
#[derive(Serialize, Deserialize)]
pub struct CodeFile {
    pub format_version: u32,
    pub n: usize,
    pub k: usize,
    pub d: usize,
    pub t: usize,
    pub g: BitMatrix,
    pub h: BitMatrix,
}

impl CodeFile {
    pub fn from_code(code: &LinearCode) -> Self {
        CodeFile {
            format_version: FORMAT_VERSION,
            n: code.n(),
            k: code.k(),
            d: code.d(),
            t: code.t(),
            g: code.generator().clone(),
            h: code.check().clone(),
        }
    }

    pub fn into_code(self) -> Result<LinearCode> {
        check_version(self.format_version)?;
        LinearCode::from_parts(self.g, self.h, self.d, self.t)
    }
}

/// Bare matrix artifact (used by the feasibility checker).
#[derive(Serialize, Deserialize)]
pub struct MatrixFile {
    pub format_version: u32,
    pub rows: BitMatrix,
}

impl MatrixFile {
    pub fn from_matrix(m: &BitMatrix) -> Self {
        MatrixFile {
            format_version: FORMAT_VERSION,
            rows: m.clone(),
        }
    }

    pub fn into_matrix(self) -> Result<BitMatrix> {
        check_version(self.format_version)?;
        Ok(self.rows)
    }
}

/// Writes any serializable artifact as pretty JSON with a trailing newline.
pub fn save<T: Serialize>(path: &Path, artifact: &T) -> Result<()> {
    let mut text = serde_json::to_string_pretty(artifact)?;
    text.push('\n');
    fs::write(path, text)?;
    Ok(())
}

/// Reads an artifact back.
pub fn load<T: for<'de> Deserialize<'de>>(path: &Path) -> Result<T> {
    let text = fs::read_to_string(path)?;
    Ok(serde_json::from_str(&text)?)
}
