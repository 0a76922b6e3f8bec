//! Randomized verification over a large prime field.
//!
//! Representations are sampled with uniformly random matrices, and
//! `dim Hom` is computed exactly as the nullity of the linear system
//! `V(phi) f_t = f_h U(phi)`. Generic values are minima over samples
//! (semicontinuity), so a false mismatch needs every trial to land on a
//! proper subvariety; at `p = 2^31 - 1` that probability is negligible.
//! This module shares nothing with the symbolic calculus except the
//! quiver data model and the Euler form.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::decomposition::Decomposition;
use crate::error::{Error, Result};
use crate::quiver::{DimVector, Quiver};

pub const DEFAULT_PRIME: u64 = 2_147_483_647;
pub const DEFAULT_TRIALS: u32 = 5;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct OracleConfig {
    pub prime: u64,
    pub trials: u32,
    pub seed: u64,
}

impl Default for OracleConfig {
    fn default() -> Self {
        OracleConfig {
            prime: DEFAULT_PRIME,
            trials: DEFAULT_TRIALS,
            seed: 0,
        }
    }
}

impl OracleConfig {
    pub fn new(prime: u64, trials: u32, seed: u64) -> Result<Self> {
        let cfg = OracleConfig {
            prime,
            trials,
            seed,
        };
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn validate(&self) -> Result<()> {
        if self.prime <= 1_000_000 || self.prime >= 1 << 62 || !is_prime(self.prime) {
            return Err(Error::Oracle(format!(
                "modulus {} must be a prime between 10^6 and 2^62",
                self.prime
            )));
        }
        if self.trials == 0 {
            return Err(Error::Oracle("at least one trial is required".into()));
        }
        Ok(())
    }

    /// The generator for one trial; seeds are `seed ^ trial`.
    pub fn trial_rng(&self, trial: u32) -> ChaCha8Rng {
        ChaCha8Rng::seed_from_u64(self.seed ^ u64::from(trial))
    }
}

fn is_prime(p: u64) -> bool {
    if p < 2 {
        return false;
    }
    let mut d = 2u64;
    while d.saturating_mul(d) <= p {
        if p.is_multiple_of(d) {
            return false;
        }
        d += 1;
    }
    true
}

/// An explicit representation over `F_p`: one `dims[h] x dims[t]` matrix
/// per arrow, stored row-major, in the quiver's arrow order.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FieldRep {
    pub quiver: Quiver,
    pub dims: DimVector,
    pub prime: u64,
    pub matrices: Vec<Vec<u64>>,
}

impl FieldRep {
    /// Checks shapes and entry ranges.
    pub fn validate(&self) -> Result<()> {
        self.quiver.check_dim(self.dims.as_slice())?;
        let d = self.dims.as_slice();
        if self.matrices.len() != self.quiver.arrows().len() {
            return Err(Error::Oracle("one matrix per arrow required".into()));
        }
        for (m, &(t, h)) in self.matrices.iter().zip(self.quiver.arrows()) {
            if m.len() as i64 != d[t] * d[h] {
                return Err(Error::Oracle(format!(
                    "matrix for arrow {}->{} has {} entries, expected {}",
                    t + 1,
                    h + 1,
                    m.len(),
                    d[t] * d[h]
                )));
            }
            if m.iter().any(|&x| x >= self.prime) {
                return Err(Error::Oracle("matrix entry out of range".into()));
            }
        }
        Ok(())
    }
}

/// Draws a representation with i.i.d. uniform matrix entries from `rng`.
pub fn sample_with(q: &Quiver, dims: &DimVector, prime: u64, rng: &mut impl Rng) -> FieldRep {
    let d = dims.as_slice();
    let matrices = q
        .arrows()
        .iter()
        .map(|&(t, h)| {
            let len = (d[t] * d[h]) as usize;
            (0..len).map(|_| rng.gen_range(0..prime)).collect()
        })
        .collect();
    FieldRep {
        quiver: q.clone(),
        dims: dims.clone(),
        prime,
        matrices,
    }
}

/// A single sample, deterministic in `(cfg.seed, trial)`.
pub fn sample_rep(
    q: &Quiver,
    dims: &DimVector,
    cfg: &OracleConfig,
    trial: u32,
) -> Result<FieldRep> {
    q.check_dim(dims.as_slice())?;
    Ok(sample_with(q, dims, cfg.prime, &mut cfg.trial_rng(trial)))
}

/// `dim Hom(U, V)` as `unknowns - rank` of the defining linear system.
pub fn hom_dim(u: &FieldRep, v: &FieldRep) -> usize {
    assert_eq!(u.quiver, v.quiver, "representations of different quivers");
    assert_eq!(u.prime, v.prime, "representations over different fields");
    let p = u.prime;
    let q = &u.quiver;
    let n = q.vertex_count();
    let du = u.dims.as_slice();
    let dv = v.dims.as_slice();

    // f_x is a dv[x] x du[x] block of unknowns.
    let mut offset = vec![0usize; n + 1];
    for x in 0..n {
        offset[x + 1] = offset[x] + (dv[x] * du[x]) as usize;
    }
    let unknowns = offset[n];
    if unknowns == 0 {
        return 0;
    }
    let var = |x: usize, r: usize, c: usize| offset[x] + r * du[x] as usize + c;

    let mut rows: Vec<Vec<u64>> = Vec::new();
    for (k, &(t, h)) in q.arrows().iter().enumerate() {
        let um = &u.matrices[k];
        let vm = &v.matrices[k];
        let (ut, uh) = (du[t] as usize, du[h] as usize);
        let (vt, vh) = (dv[t] as usize, dv[h] as usize);
        // Entry (r, c) of V(phi) f_t - f_h U(phi), r < vh, c < ut.
        for r in 0..vh {
            for c in 0..ut {
                let mut row = vec![0u64; unknowns];
                for j in 0..vt {
                    let coef = vm[r * vt + j];
                    let idx = var(t, j, c);
                    row[idx] = (row[idx] + coef) % p;
                }
                for j in 0..uh {
                    let coef = um[j * ut + c];
                    let idx = var(h, r, j);
                    row[idx] = (row[idx] + p - coef) % p;
                }
                rows.push(row);
            }
        }
    }
    unknowns - rank_mod(&mut rows, p)
}

/// Rank of a matrix over `F_p` by Gaussian elimination.
pub fn rank_mod(rows: &mut [Vec<u64>], p: u64) -> usize {
    let Some(cols) = rows.first().map(Vec::len) else {
        return 0;
    };
    let mut rank = 0;
    for col in 0..cols {
        let Some(pivot) = (rank..rows.len()).find(|&r| rows[r][col] != 0) else {
            continue;
        };
        rows.swap(rank, pivot);
        let inv = pow_mod(rows[rank][col], p - 2, p);
        for x in rows[rank][col..].iter_mut() {
            *x = mul_mod(*x, inv, p);
        }
        let (head, tail) = rows.split_at_mut(rank + 1);
        let pivot_row = &head[rank];
        for row in tail.iter_mut() {
            let f = row[col];
            if f == 0 {
                continue;
            }
            for (x, &y) in row[col..].iter_mut().zip(&pivot_row[col..]) {
                *x = (*x + p - mul_mod(f, y, p)) % p;
            }
        }
        rank += 1;
        if rank == rows.len() {
            break;
        }
    }
    rank
}

fn mul_mod(a: u64, b: u64, p: u64) -> u64 {
    ((a as u128 * b as u128) % p as u128) as u64
}

fn pow_mod(mut base: u64, mut exp: u64, p: u64) -> u64 {
    let mut acc = 1u64;
    base %= p;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = mul_mod(acc, base, p);
        }
        base = mul_mod(base, base, p);
        exp >>= 1;
    }
    acc
}

/// Generic `dim Hom(A, B)` for an independent pair, as the minimum over
/// `cfg.trials` freshly sampled pairs.
pub fn oracle_hom(q: &Quiver, a: &DimVector, b: &DimVector, cfg: &OracleConfig) -> Result<i64> {
    cfg.validate()?;
    q.check_dim(a.as_slice())?;
    q.check_dim(b.as_slice())?;
    let best = (0..cfg.trials)
        .map(|trial| {
            let mut rng = cfg.trial_rng(trial);
            let u = sample_with(q, a, cfg.prime, &mut rng);
            let v = sample_with(q, b, cfg.prime, &mut rng);
            hom_dim(&u, &v)
        })
        .min()
        .expect("at least one trial");
    Ok(best as i64)
}

/// Generic `dim Ext(A, B) = hom - <a, b>`.
pub fn oracle_ext(q: &Quiver, a: &DimVector, b: &DimVector, cfg: &OracleConfig) -> Result<i64> {
    let hom = oracle_hom(q, a, b, cfg)?;
    let euler = q.euler(a.as_slice(), b.as_slice())?;
    if hom < euler {
        return Err(Error::NegativeExt { hom, euler });
    }
    Ok(hom - euler)
}

/// Generic `dim End(V)`: a single sample on both sides.
pub fn oracle_end_dim(q: &Quiver, a: &DimVector, cfg: &OracleConfig) -> Result<i64> {
    cfg.validate()?;
    q.check_dim(a.as_slice())?;
    if a.is_zero() {
        return Err(Error::Precondition("End of the zero vector".into()));
    }
    let best = (0..cfg.trials)
        .map(|trial| {
            let v = sample_with(q, a, cfg.prime, &mut cfg.trial_rng(trial));
            hom_dim(&v, &v)
        })
        .min()
        .expect("at least one trial");
    Ok(best as i64)
}

pub fn oracle_is_schur(q: &Quiver, a: &DimVector, cfg: &OracleConfig) -> Result<bool> {
    Ok(oracle_end_dim(q, a, cfg)? == 1)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum DecompositionKind {
    Generic,
    Lss,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Check {
    pub name: String,
    pub passed: bool,
    pub detail: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct VerificationReport {
    pub kind: DecompositionKind,
    pub passed: bool,
    pub checks: Vec<Check>,
}

impl VerificationReport {
    pub fn failures(&self) -> impl Iterator<Item = &Check> {
        self.checks.iter().filter(|c| !c.passed)
    }
}

/// Checks a decomposition against sampled representations.
///
/// Generic: every root is Schur, distinct terms have vanishing ext both
/// ways, and repeated terms have vanishing ext with themselves.
/// Locally semi-simple: distinct terms have vanishing hom, the reversed
/// Euler values are nonpositive, and the almost-loopless flag matches the
/// terms. Oracle failures (unlucky samples) are reported as failed checks.
pub fn verify_decomposition(
    q: &Quiver,
    d: &Decomposition,
    kind: DecompositionKind,
    cfg: &OracleConfig,
) -> VerificationReport {
    let mut checks = Vec::new();
    let mut record = |name: String, outcome: Result<(bool, String)>| {
        let (passed, detail) = outcome.unwrap_or_else(|e| (false, e.to_string()));
        checks.push(Check {
            name,
            passed,
            detail,
        });
    };
    let total = d
        .terms
        .iter()
        .try_fold(DimVector::zero(q.vertex_count()), |acc, t| {
            acc.checked_add(&t.root.checked_scale(t.mult as i64)?)
        });
    record(
        "sum".into(),
        total.map(|s| (s == d.total, format!("terms sum to {s}, total {}", d.total))),
    );
    let terms = &d.terms;
    match kind {
        DecompositionKind::Generic => {
            for t in terms {
                record(
                    format!("schur {}", t.root),
                    oracle_end_dim(q, &t.root, cfg).map(|e| (e == 1, format!("end = {e}"))),
                );
                if t.mult > 1 {
                    record(
                        format!("self-ext {}", t.root),
                        oracle_ext(q, &t.root, &t.root, cfg)
                            .map(|e| (e == 0, format!("ext = {e}"))),
                    );
                }
            }
            for (i, s) in terms.iter().enumerate() {
                for (j, t) in terms.iter().enumerate() {
                    if i != j {
                        record(
                            format!("ext {} {}", s.root, t.root),
                            oracle_ext(q, &s.root, &t.root, cfg)
                                .map(|e| (e == 0, format!("ext = {e}"))),
                        );
                    }
                }
            }
        }
        DecompositionKind::Lss => {
            for (i, s) in terms.iter().enumerate() {
                for (j, t) in terms.iter().enumerate() {
                    if i == j {
                        continue;
                    }
                    record(
                        format!("hom {} {}", s.root, t.root),
                        oracle_hom(q, &s.root, &t.root, cfg)
                            .map(|h| (h == 0, format!("hom = {h}"))),
                    );
                    if i < j {
                        record(
                            format!("euler {} {}", t.root, s.root),
                            q.euler(t.root.as_slice(), s.root.as_slice())
                                .map(|e| (e <= 0, format!("<later, earlier> = {e}"))),
                        );
                    }
                }
            }
            record(
                "almost loopless".into(),
                d.is_almost_loopless()
                    .map(|flag| (flag, format!("almost loopless = {flag}"))),
            );
        }
    }
    let passed = checks.iter().all(|c| c.passed);
    VerificationReport {
        kind,
        passed,
        checks,
    }
}
