//! Batch front end: every subcommand reads and writes files (or stdout) and
//! is a pure function of its inputs and the explicit seed, so reruns are
//! byte-identical.
//!
//! Exit codes: 0 success, 1 demo failure, 2 usage, 3 malformed file,
//! 4 dimension/parameter error, 5 budget or qubit cap exceeded.

mod demos;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use rand::SeedableRng;
use rand_chacha::ChaCha20Rng;

use qmceliece::attacks::{
    self, decimal_string, AttackRecord, SearchEngine, SearchRecord,
};
use qmceliece::codes::{ConstantWeightCode, LinearCode};
use qmceliece::feasibility::{annihilator_space, check_feasible, BasisMapSpec, Domain, Feasibility};
use qmceliece::gf2::{sample, BitVector};
use qmceliece::json::{
    self, DoublePrivateFile, DoublePublicFile, MatrixFile, PrivateKeyFile, PublicKeyFile,
    StateFile,
};
use qmceliece::pke::{self, ErrorWeight};
use qmceliece::qsim::StateVector;
use qmceliece::{Error, Result};

#[derive(Parser)]
#[command(name = "qmceliece", version, about = "Desk-scale quantum McEliece toolbox")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum CodeChoice {
    #[value(name = "hamming7_4")]
    Hamming74,
    Random,
}

#[derive(Args)]
struct CodeParams {
    /// Code backing the key pair
    #[arg(long, value_enum, default_value = "hamming7_4")]
    code: CodeChoice,
    /// Code length (random codes only)
    #[arg(long)]
    n: Option<usize>,
    /// Code dimension (random codes only)
    #[arg(long)]
    k: Option<usize>,
    /// Requested correction radius (random codes only; capped by the true d)
    #[arg(long)]
    t: Option<usize>,
}

impl CodeParams {
    fn build(&self, seed: u64) -> Result<LinearCode> {
        match self.code {
            CodeChoice::Hamming74 => Ok(LinearCode::hamming_7_4()),
            CodeChoice::Random => {
                let (n, k, t) = match (self.n, self.k, self.t) {
                    (Some(n), Some(k), Some(t)) => (n, k, t),
                    _ => {
                        return Err(Error::Parameter(
                            "--code random needs --n, --k and --t".into(),
                        ))
                    }
                };
                LinearCode::random(n, k, t, seed)
            }
        }
    }
}

#[derive(Subcommand)]
enum Command {
    /// Generate a key pair and write public/private JSON files
    Keygen {
        #[command(flatten)]
        code: CodeParams,
        #[arg(long)]
        seed: u64,
        /// Output paths: PUB PRIV
        #[arg(long, num_args = 2, value_names = ["PUB", "PRIV"])]
        out: Vec<PathBuf>,
    },
    /// Generate a double-encryption key bundle (two layered pairs)
    KeygenDouble {
        /// First-layer code
        #[arg(long, value_enum, default_value = "hamming7_4")]
        code1: CodeChoice,
        #[arg(long)]
        n1: Option<usize>,
        #[arg(long)]
        k1: Option<usize>,
        #[arg(long)]
        t1: Option<usize>,
        /// Second-layer code length (must have k2 = n1)
        #[arg(long, default_value_t = 15)]
        n2: usize,
        #[arg(long, default_value_t = 7)]
        k2: usize,
        #[arg(long, default_value_t = 2)]
        t2: usize,
        /// Seed for the second-layer code draw
        #[arg(long, default_value_t = 0)]
        code2_seed: u64,
        #[arg(long)]
        seed: u64,
        /// Output paths: PUB PRIV
        #[arg(long, num_args = 2, value_names = ["PUB", "PRIV"])]
        out: Vec<PathBuf>,
    },
    /// Encrypt a state file under a public key
    Encrypt {
        #[arg(long = "pub")]
        public: PathBuf,
        #[arg(long = "in")]
        input: PathBuf,
        #[arg(long)]
        seed: u64,
        /// Sample the error uniformly over weight <= t instead of exactly t
        #[arg(long)]
        leq_weight: bool,
        #[arg(long)]
        out: PathBuf,
    },
    /// Decrypt a cipher state file under a private key
    Decrypt {
        #[arg(long = "priv")]
        private: PathBuf,
        #[arg(long = "in")]
        input: PathBuf,
        /// Simulate the syndrome measurement instead of reading the support
        #[arg(long)]
        measure: bool,
        /// RNG seed for --measure
        #[arg(long)]
        seed: Option<u64>,
        #[arg(long)]
        out: PathBuf,
    },
    /// Encrypt under a double-key bundle
    Encrypt2 {
        #[arg(long = "pub")]
        public: PathBuf,
        #[arg(long = "in")]
        input: PathBuf,
        #[arg(long)]
        seed: u64,
        #[arg(long)]
        out: PathBuf,
    },
    /// Decrypt under a double-key bundle
    Decrypt2 {
        #[arg(long = "priv")]
        private: PathBuf,
        #[arg(long = "in")]
        input: PathBuf,
        #[arg(long)]
        out: PathBuf,
    },
    /// Run the ciphertext transform with a seeded right-inverse choice
    Attack {
        #[command(subcommand)]
        mode: AttackMode,
    },
    /// Low-weight column search over seeded random instances
    Search {
        #[arg(long)]
        engine: String,
        #[arg(long)]
        n: usize,
        #[arg(long)]
        k: usize,
        #[arg(long, default_value_t = 0)]
        column: usize,
        #[arg(long, default_value_t = 16)]
        budget: u64,
        /// Half-open seed range LO..HI, one instance per seed
        #[arg(long, value_parser = parse_seed_range)]
        seeds: (u64, u64),
        #[arg(long)]
        report: PathBuf,
    },
    /// Exact Pr[r.e = 0] for weight-t r against a weight-w mask
    Prob {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        t: usize,
        #[arg(long)]
        w: usize,
    },
    /// Constant-weight encode/decode
    Cwcode {
        #[command(subcommand)]
        direction: CwDirection,
    },
    /// Feasibility of a basis-state linear map on a domain
    Feasible {
        #[arg(long)]
        matrix: PathBuf,
        /// "full" or "cw:T" for the constant-weight-T domain
        #[arg(long, value_parser = parse_domain_arg)]
        domain: DomainArg,
    },
    /// Ciphertext and key expansion ratios of the double scheme
    Ratios {
        #[arg(long)]
        k: u64,
        #[arg(long)]
        n: u64,
        #[arg(long)]
        nprime: u64,
    },
    /// Run a named end-to-end scenario and print PASS/FAIL
    Demo {
        #[arg(value_parser = ["roundtrip", "theorem1", "eq9"])]
        scenario: String,
    },
    /// Write a state file (input helper for encrypt)
    State {
        #[command(subcommand)]
        which: StateKind,
    },
}

#[derive(Subcommand)]
enum AttackMode {
    /// Single-scheme transform
    Single {
        #[arg(long = "pub")]
        public: PathBuf,
        #[arg(long)]
        cipher: PathBuf,
        #[arg(long)]
        u_seed: u64,
        #[arg(long)]
        report: PathBuf,
        /// Optional path for the residual state
        #[arg(long)]
        residual_out: Option<PathBuf>,
    },
    /// Double-scheme transform (outer strip, Hadamard, inner strip)
    Double {
        #[arg(long = "pub")]
        public: PathBuf,
        #[arg(long)]
        cipher: PathBuf,
        #[arg(long)]
        u_seed: u64,
        #[arg(long)]
        report: PathBuf,
        #[arg(long)]
        residual_out: Option<PathBuf>,
    },
}

#[derive(Subcommand)]
enum CwDirection {
    Encode {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        t: usize,
        /// Message bits, length floor(log2 C(n,t))
        #[arg(long)]
        bits: String,
    },
    Decode {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        t: usize,
        /// Codeword bits, length n
        #[arg(long)]
        bits: String,
    },
}

#[derive(Subcommand)]
enum StateKind {
    /// Haar-like random state
    Random {
        #[arg(long)]
        qubits: usize,
        #[arg(long)]
        seed: u64,
        #[arg(long)]
        out: PathBuf,
    },
    /// Computational basis state
    Basis {
        #[arg(long)]
        bits: String,
        #[arg(long)]
        out: PathBuf,
    },
}

#[derive(Clone, Copy, Debug)]
enum DomainArg {
    Full,
    ConstantWeight(usize),
}

fn parse_domain_arg(s: &str) -> std::result::Result<DomainArg, String> {
    if s == "full" {
        return Ok(DomainArg::Full);
    }
    if let Some(t) = s.strip_prefix("cw:") {
        let t: usize = t.parse().map_err(|e| format!("bad weight in {s:?}: {e}"))?;
        return Ok(DomainArg::ConstantWeight(t));
    }
    Err(format!("domain must be \"full\" or \"cw:T\", got {s:?}"))
}

fn parse_seed_range(s: &str) -> std::result::Result<(u64, u64), String> {
    let (lo, hi) = s
        .split_once("..")
        .ok_or_else(|| format!("seed range must look like LO..HI, got {s:?}"))?;
    let lo: u64 = lo.parse().map_err(|e| format!("bad low seed: {e}"))?;
    let hi: u64 = hi.parse().map_err(|e| format!("bad high seed: {e}"))?;
    if lo >= hi {
        return Err("seed range is empty".into());
    }
    Ok((lo, hi))
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli.command) {
        Ok(code) => code,
        Err(err) => {
            eprintln!("error: {err}");
            ExitCode::from(exit_code(&err))
        }
    }
}

fn exit_code(err: &Error) -> u8 {
    match err {
        Error::Io(_)
        | Error::Json(_)
        | Error::Format(_)
        | Error::FormatVersion(_)
        | Error::NormDeviation(_) => 3,
        Error::Budget(_) | Error::QubitCap { .. } => 5,
        _ => 4,
    }
}

fn run(command: Command) -> Result<ExitCode> {
    match command {
        Command::Keygen { code, seed, out } => {
            let [pub_path, priv_path] = two_paths(out)?;
            let code = code.build(seed)?;
            let pair = pke::keygen(code, &mut ChaCha20Rng::seed_from_u64(seed))?;
            json::save(&pub_path, &PublicKeyFile::from_key(&pair.public))?;
            json::save(&priv_path, &PrivateKeyFile::from_key(&pair.private))?;
            println!(
                "wrote [{},{}] t={} keys to {} and {}",
                pair.public.n(),
                pair.public.k(),
                pair.public.t(),
                pub_path.display(),
                priv_path.display()
            );
        }
        Command::KeygenDouble {
            code1,
            n1,
            k1,
            t1,
            n2,
            k2,
            t2,
            code2_seed,
            seed,
            out,
        } => {
            let [pub_path, priv_path] = two_paths(out)?;
            let params1 = CodeParams {
                code: code1,
                n: n1,
                k: k1,
                t: t1,
            };
            let code1 = params1.build(seed)?;
            let code2 = LinearCode::random(n2, k2, t2, code2_seed)?;
            let dk = pke::keygen_double(code1, code2, &mut ChaCha20Rng::seed_from_u64(seed))?;
            json::save(
                &pub_path,
                &DoublePublicFile::from_keys(&dk.first.public, &dk.second.public),
            )?;
            json::save(
                &priv_path,
                &DoublePrivateFile::from_pairs(&dk.first, &dk.second),
            )?;
            println!(
                "wrote double keys [{},{}]+[{},{}] to {} and {}",
                dk.first.public.n(),
                dk.first.public.k(),
                dk.second.public.n(),
                dk.second.public.k(),
                pub_path.display(),
                priv_path.display()
            );
        }
        Command::Encrypt {
            public,
            input,
            seed,
            leq_weight,
            out,
        } => {
            let pk = json::load::<PublicKeyFile>(&public)?.into_key()?;
            let msg = json::load::<StateFile>(&input)?.into_state()?;
            let weight = if leq_weight {
                ErrorWeight::AtMost
            } else {
                ErrorWeight::Exact
            };
            let cipher = pke::encrypt_with_weight(
                &pk,
                &msg,
                weight,
                &mut ChaCha20Rng::seed_from_u64(seed),
            )?;
            json::save(&out, &StateFile::from_state(&cipher))?;
            println!("wrote {}-qubit cipher to {}", cipher.qubits(), out.display());
        }
        Command::Decrypt {
            private,
            input,
            measure,
            seed,
            out,
        } => {
            let pair = json::load::<PrivateKeyFile>(&private)?.into_pair()?;
            let cipher = json::load::<StateFile>(&input)?.into_state()?;
            let plain = if measure {
                let seed = seed.ok_or_else(|| {
                    Error::Parameter("--measure needs --seed".into())
                })?;
                pke::decrypt_measured(
                    &pair.private,
                    &cipher,
                    &mut ChaCha20Rng::seed_from_u64(seed),
                )?
            } else {
                pke::decrypt(&pair.private, &cipher)?
            };
            json::save(&out, &StateFile::from_state(&plain))?;
            println!("wrote {}-qubit state to {}", plain.qubits(), out.display());
        }
        Command::Encrypt2 {
            public,
            input,
            seed,
            out,
        } => {
            let (pk1, pk2) = json::load::<DoublePublicFile>(&public)?.into_keys()?;
            let msg = json::load::<StateFile>(&input)?.into_state()?;
            let cipher =
                pke::encrypt_double(&pk1, &pk2, &msg, &mut ChaCha20Rng::seed_from_u64(seed))?;
            json::save(&out, &StateFile::from_state(&cipher))?;
            println!("wrote {}-qubit cipher to {}", cipher.qubits(), out.display());
        }
        Command::Decrypt2 {
            private,
            input,
            out,
        } => {
            let (pair1, pair2) = json::load::<DoublePrivateFile>(&private)?.into_pairs()?;
            let cipher = json::load::<StateFile>(&input)?.into_state()?;
            let plain = pke::decrypt_double(&pair1.private, &pair2.private, &cipher)?;
            json::save(&out, &StateFile::from_state(&plain))?;
            println!("wrote {}-qubit state to {}", plain.qubits(), out.display());
        }
        Command::Attack { mode } => run_attack(mode)?,
        Command::Search {
            engine,
            n,
            k,
            column,
            budget,
            seeds,
            report,
        } => {
            let engine: SearchEngine = engine.parse()?;
            let mut writer = csv_writer(&report)?;
            for seed in seeds.0..seeds.1 {
                let (g_prime, g1inv) = attacks::search_instance(n, k, seed)?;
                let result =
                    attacks::low_weight_search(&g1inv, &g_prime, column, engine, budget, seed)?;
                writer
                    .serialize(SearchRecord::from_result(&result, n, k, column))
                    .map_err(csv_err)?;
            }
            writer.flush()?;
            println!(
                "wrote {} search rows to {}",
                seeds.1 - seeds.0,
                report.display()
            );
        }
        Command::Prob { n, t, w } => {
            let exact = attacks::prob_r_dot_e_zero(n, t, w)?;
            println!("exact: {}/{}", exact.numer(), exact.denom());
            println!("decimal: {}", decimal_string(&exact, 30));
        }
        Command::Cwcode { direction } => match direction {
            CwDirection::Encode { n, t, bits } => {
                let cw = ConstantWeightCode::new(n, t)?;
                let m: BitVector = bits.parse()?;
                println!("{}", cw.encode(&m)?);
            }
            CwDirection::Decode { n, t, bits } => {
                let cw = ConstantWeightCode::new(n, t)?;
                let w: BitVector = bits.parse()?;
                println!("{}", cw.decode(&w)?);
            }
        },
        Command::Feasible { matrix, domain } => {
            let m = json::load::<MatrixFile>(&matrix)?.into_matrix()?;
            let bits = m.rows();
            let domain = match domain {
                DomainArg::Full => Domain::Full { bits },
                DomainArg::ConstantWeight(weight) => Domain::ConstantWeight { bits, weight },
            };
            let spec = BasisMapSpec::new(m, domain)?;
            match check_feasible(&spec)? {
                Feasibility::Feasible => println!("feasible"),
                Feasibility::Infeasible { witness: (a, b) } => {
                    println!("infeasible");
                    println!("witness: {a} {b}");
                }
            }
            let annihilator = annihilator_space(&domain)?;
            println!("annihilator dimension: {}", annihilator.rows());
        }
        Command::Ratios { k, n, nprime } => {
            let report = pke::expansion_report(k, n, nprime)?;
            println!(
                "cipher_expansion: {}/{} = {}",
                report.cipher_expansion.numer(),
                report.cipher_expansion.denom(),
                report.cipher_expansion_f64()
            );
            println!(
                "key_bit_expansion: {}/{} = {}",
                report.key_bit_expansion.numer(),
                report.key_bit_expansion.denom(),
                report.key_bit_expansion_f64()
            );
        }
        Command::Demo { scenario } => {
            let pass = match scenario.as_str() {
                "roundtrip" => demos::roundtrip()?,
                "theorem1" => demos::theorem1()?,
                "eq9" => demos::eq9()?,
                _ => unreachable!("clap restricts the values"),
            };
            return Ok(if pass {
                ExitCode::SUCCESS
            } else {
                ExitCode::FAILURE
            });
        }
        Command::State { which } => match which {
            StateKind::Random { qubits, seed, out } => {
                let s = StateVector::random(qubits, &mut ChaCha20Rng::seed_from_u64(seed))?;
                json::save(&out, &StateFile::from_state(&s))?;
                println!("wrote {qubits}-qubit random state to {}", out.display());
            }
            StateKind::Basis { bits, out } => {
                let bits: BitVector = bits.parse()?;
                let s = StateVector::basis_state(&bits)?;
                json::save(&out, &StateFile::from_state(&s))?;
                println!(
                    "wrote {}-qubit basis state to {}",
                    s.qubits(),
                    out.display()
                );
            }
        },
    }
    Ok(ExitCode::SUCCESS)
}

fn run_attack(mode: AttackMode) -> Result<()> {
    match mode {
        AttackMode::Single {
            public,
            cipher,
            u_seed,
            report,
            residual_out,
        } => {
            let pk = json::load::<PublicKeyFile>(&public)?.into_key()?;
            let cipher = json::load::<StateFile>(&cipher)?.into_state()?;
            let mut rng = ChaCha20Rng::seed_from_u64(u_seed);
            let u = sample::random_matrix(pk.n(), pk.k(), &mut rng);
            let outcome = attacks::attack_transform(&pk, &cipher, &u)?;
            let mut writer = csv_writer(&report)?;
            writer
                .serialize(AttackRecord {
                    layer: "single",
                    n: pk.n(),
                    k: pk.k(),
                    u_seed,
                    leak: outcome.leak.to_string(),
                    leak_weight: outcome.leak.weight(),
                    leak_space_rank: attacks::leak_space_rank(
                        pk.g_prime(),
                        &outcome.applied_inverse,
                    )?,
                })
                .map_err(csv_err)?;
            writer.flush()?;
            if let Some(path) = residual_out {
                json::save(&path, &StateFile::from_state(&outcome.residual))?;
            }
            println!("leak: {}", outcome.leak);
        }
        AttackMode::Double {
            public,
            cipher,
            u_seed,
            report,
            residual_out,
        } => {
            let (pk1, pk2) = json::load::<DoublePublicFile>(&public)?.into_keys()?;
            let cipher = json::load::<StateFile>(&cipher)?.into_state()?;
            let mut rng = ChaCha20Rng::seed_from_u64(u_seed);
            let u_outer = sample::random_matrix(pk2.n(), pk2.k(), &mut rng);
            let u_inner = sample::random_matrix(pk1.n(), pk1.k(), &mut rng);
            let outcome =
                attacks::attack_transform_double(&pk2, &pk1, &cipher, &u_outer, &u_inner)?;
            let mut writer = csv_writer(&report)?;
            writer
                .serialize(AttackRecord {
                    layer: "outer",
                    n: pk2.n(),
                    k: pk2.k(),
                    u_seed,
                    leak: outcome.leak_outer.to_string(),
                    leak_weight: outcome.leak_outer.weight(),
                    leak_space_rank: attacks::leak_space_rank(
                        pk2.g_prime(),
                        &outcome.applied_inverse_outer,
                    )?,
                })
                .map_err(csv_err)?;
            writer
                .serialize(AttackRecord {
                    layer: "inner",
                    n: pk1.n(),
                    k: pk1.k(),
                    u_seed,
                    leak: outcome.leak_inner.to_string(),
                    leak_weight: outcome.leak_inner.weight(),
                    leak_space_rank: attacks::leak_space_rank(
                        pk1.g_prime(),
                        &outcome.applied_inverse_inner,
                    )?,
                })
                .map_err(csv_err)?;
            writer.flush()?;
            if let Some(path) = residual_out {
                json::save(&path, &StateFile::from_state(&outcome.residual))?;
            }
            println!("leak outer: {}", outcome.leak_outer);
            println!("leak inner: {}", outcome.leak_inner);
        }
    }
    Ok(())
}

fn two_paths(out: Vec<PathBuf>) -> Result<[PathBuf; 2]> {
    out.try_into()
        .map_err(|_| Error::Parameter("--out needs exactly two paths".into()))
}

fn csv_writer(path: &PathBuf) -> Result<csv::Writer<std::fs::File>> {
    csv::Writer::from_path(path).map_err(csv_err)
}

fn csv_err(err: csv::Error) -> Error {
    match err.into_kind() {
        csv::ErrorKind::Io(io) => Error::Io(io),
        other => Error::Format(format!("csv: {other:?}")),
    }
}
