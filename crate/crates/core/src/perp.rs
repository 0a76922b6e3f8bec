//! Perpendicular categories of real Schur roots and of perpendicular
//! sequences, local quivers, and quiver Schur sequence validation.
//!
//! A perpendicular category is described by the dimension vectors of its
//! simple objects. For a single real Schur root the simples are recovered
//! from the projective (or injective) objects of the category, whose
//! dimensions are the generic summands of `P_a - <g, P_a> g` (resp.
//! `I_a - <I_a, g> g`). Sequences are handled one root at a time inside
//! the category cut out so far, using its own quiver of simples.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::homext::{stable_topological, GenericCalculus};
use crate::linalg;
use crate::quiver::{combine, DimVector, Quiver, RootClass};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Side {
    /// `W^perp`: Hom and Ext from `W` vanish.
    Right,
    /// `^perp W`: Hom and Ext into `W` vanish.
    Left,
}

/// An ordered sequence of roots, optionally with multiplicities.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct RootSequence {
    pub roots: Vec<DimVector>,
    pub mults: Option<Vec<u64>>,
}

impl RootSequence {
    pub fn new(roots: Vec<DimVector>) -> Self {
        RootSequence { roots, mults: None }
    }

    pub fn with_mults(roots: Vec<DimVector>, mults: Vec<u64>) -> Result<Self> {
        if mults.len() != roots.len() {
            return Err(Error::Precondition(format!(
                "{} multiplicities for {} roots",
                mults.len(),
                roots.len()
            )));
        }
        Ok(RootSequence {
            roots,
            mults: Some(mults),
        })
    }

    pub fn len(&self) -> usize {
        self.roots.len()
    }

    pub fn is_empty(&self) -> bool {
        self.roots.is_empty()
    }

    pub fn mult(&self, i: usize) -> u64 {
        self.mults.as_ref().map_or(1, |m| m[i])
    }
}

/// The quiver of a sequence: `delta_ij - <r_i, r_j>` arrows `i -> j`,
/// with the multiplicities as a dimension vector.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LocalQuiver {
    pub quiver: Quiver,
    pub source: RootSequence,
    pub gamma: DimVector,
}

/// Local quiver of a sequence whose members have pairwise vanishing
/// generic hom (checked).
pub fn local_quiver(calc: &GenericCalculus, seq: &RootSequence) -> Result<LocalQuiver> {
    check_hom_trivial(calc, &seq.roots)?;
    let quiver = euler_quiver(calc.quiver(), &seq.roots)?;
    let gamma = (0..seq.len())
        .map(|i| i64::try_from(seq.mult(i)).map_err(|_| Error::Overflow("multiplicity")))
        .collect::<Result<Vec<_>>>()?;
    Ok(LocalQuiver {
        quiver,
        source: seq.clone(),
        gamma: DimVector::new(gamma)?,
    })
}

fn check_hom_trivial(calc: &GenericCalculus, roots: &[DimVector]) -> Result<()> {
    for (i, a) in roots.iter().enumerate() {
        for (j, b) in roots.iter().enumerate() {
            if i != j {
                let hom = calc.generic_hom(a, b)?;
                if hom != 0 {
                    return Err(Error::HomNotTrivial {
                        from: i + 1,
                        to: j + 1,
                        hom,
                    });
                }
            }
        }
    }
    Ok(())
}

/// The local quiver read off the Euler form alone.
pub(crate) fn euler_quiver(q: &Quiver, roots: &[DimVector]) -> Result<Quiver> {
    let k = roots.len();
    let mut counts = vec![0i64; k * k];
    for i in 0..k {
        for j in 0..k {
            let count = i64::from(i == j) - q.euler(roots[i].as_slice(), roots[j].as_slice())?;
            if count < 0 {
                return Err(Error::NegativeArrowCount {
                    from: i + 1,
                    to: j + 1,
                    count,
                });
            }
            counts[i * k + j] = count;
        }
    }
    Quiver::from_counts(k, &counts)
}

pub fn right_perp_schur(calc: &GenericCalculus, g: &DimVector) -> Result<Vec<DimVector>> {
    perp_schur(calc, g, Side::Right)
}

pub fn left_perp_schur(calc: &GenericCalculus, g: &DimVector) -> Result<Vec<DimVector>> {
    perp_schur(calc, g, Side::Left)
}

/// Dimension vectors of the `n - 1` simple objects of the perpendicular
/// category of a real Schur root `g`, ordered as a perpendicular sequence.
pub fn perp_schur(calc: &GenericCalculus, g: &DimVector, side: Side) -> Result<Vec<DimVector>> {
    let q = calc.quiver();
    q.check_dim(g.as_slice())?;
    if g.is_zero() || q.root_class(g.as_slice())? != RootClass::Real || !calc.is_schur_root(g)? {
        return Err(Error::NotRealSchurRoot(g.as_slice().to_vec()));
    }
    let n = q.vertex_count();
    let indecomposables = match side {
        Side::Right => q.projective_dims()?,
        Side::Left => q.injective_dims()?,
    };
    if let Some(a) = indecomposables.iter().position(|p| p == g) {
        let simples = (0..n)
            .filter(|&v| v != a)
            .map(|v| DimVector::unit(n, v))
            .collect();
        return perpendicular_order(q, simples);
    }

    // Projective (injective) objects of the category.
    let mut summands: Vec<DimVector> = Vec::new();
    for p in &indecomposables {
        let shift = match side {
            Side::Right => -q.euler(g.as_slice(), p.as_slice())?,
            Side::Left => -q.euler(p.as_slice(), g.as_slice())?,
        };
        let target = DimVector::new(combine(p.as_slice(), 1, g.as_slice(), shift)?)?;
        for term in calc.generic_decomposition(&target)?.terms {
            if !summands.contains(&term.root) {
                summands.push(term.root);
            }
        }
    }
    if summands.len() != n - 1 {
        return Err(Error::SummandCountMismatch {
            expected: n - 1,
            found: summands.len(),
        });
    }
    let simples = simples_from_indecomposables(q, &summands, side)?;
    perpendicular_order(q, simples)
}

/// Inverts the path-counting relation between the projectives (or
/// injectives) of an acyclic category and its simples, using only the
/// Euler form.
///
/// Right side: `<P_k, P_j>` counts paths `j -> k`, so an entry whose
/// values against every other white entry vanish is a sink among the
/// white entries and its simple is `P_j` minus the already recovered
/// simples weighted by path counts. The left side is the mirror image.
fn simples_from_indecomposables(
    q: &Quiver,
    betas: &[DimVector],
    side: Side,
) -> Result<Vec<DimVector>> {
    let k = betas.len();
    let paths = |from: usize, to: usize| -> Result<i64> {
        match side {
            Side::Right => q.euler(betas[to].as_slice(), betas[from].as_slice()),
            Side::Left => q.euler(betas[from].as_slice(), betas[to].as_slice()),
        }
    };
    let mut white = vec![true; k];
    let mut alphas: Vec<Option<Vec<i64>>> = vec![None; k];
    for _ in 0..k {
        let mut chosen = None;
        for j in (0..k).filter(|&j| white[j]) {
            let mut sink = true;
            for other in (0..k).filter(|&o| o != j && white[o]) {
                if paths(j, other)? != 0 {
                    sink = false;
                    break;
                }
            }
            if sink {
                chosen = Some(j);
                break;
            }
        }
        let j = chosen.ok_or(Error::NoWhiteSink)?;
        let mut alpha = betas[j].as_slice().to_vec();
        for b in (0..k).filter(|&b| !white[b]) {
            let weight = paths(j, b)?;
            let recovered = alphas[b].as_ref().expect("black entries are recovered");
            alpha = combine(&alpha, 1, recovered, -weight)?;
        }
        white[j] = false;
        alphas[j] = Some(alpha);
    }
    alphas
        .into_iter()
        .map(|a| DimVector::new(a.expect("every entry recovered")))
        .collect()
}

/// Orders simples of a category so that `<s_i, s_j> >= 0` for `i < j`,
/// i.e. no local arrow points from an earlier to a later member.
fn perpendicular_order(q: &Quiver, simples: Vec<DimVector>) -> Result<Vec<DimVector>> {
    let k = simples.len();
    let mut follows = vec![false; k * k];
    for i in 0..k {
        for j in 0..k {
            if i != j {
                follows[i * k + j] = q.euler(simples[i].as_slice(), simples[j].as_slice())? < 0;
            }
        }
    }
    let order = stable_topological(k, |i, j| follows[i * k + j])
        .ok_or_else(|| Error::NonLoopCycle((0..k).collect()))?;
    Ok(order.into_iter().map(|i| simples[i].clone()).collect())
}

pub fn right_perp_sequence(calc: &GenericCalculus, seq: &[DimVector]) -> Result<Vec<DimVector>> {
    perp_sequence(calc, seq, Side::Right)
}

pub fn left_perp_sequence(calc: &GenericCalculus, seq: &[DimVector]) -> Result<Vec<DimVector>> {
    perp_sequence(calc, seq, Side::Left)
}

/// Simples of the perpendicular category of a perpendicular sequence of
/// real Schur roots: `n - t` roots, ordered as a perpendicular sequence.
/// The right side consumes the sequence front to back, the left side back
/// to front.
pub fn perp_sequence(
    calc: &GenericCalculus,
    seq: &[DimVector],
    side: Side,
) -> Result<Vec<DimVector>> {
    let q = calc.quiver();
    let n = q.vertex_count();
    for root in seq {
        q.check_dim(root.as_slice())?;
    }
    let mut simples = perpendicular_order(q, (0..n).map(|v| DimVector::unit(n, v)).collect())?;
    let steps: Box<dyn Iterator<Item = &DimVector>> = match side {
        Side::Right => Box::new(seq.iter()),
        Side::Left => Box::new(seq.iter().rev()),
    };
    for root in steps {
        let sigma = euler_quiver(q, &simples)?;
        let basis: Vec<&[i64]> = simples.iter().map(DimVector::as_slice).collect();
        let gamma = DimVector::new(linalg::solve_nonnegative_integer(&basis, root.as_slice())?)?;
        let local = GenericCalculus::new(sigma)?;
        let local_simples = perp_schur(&local, &gamma, side)?;
        simples = local_simples
            .iter()
            .map(|s| DimVector::new(linalg::combination(s.as_slice(), &basis, n)?))
            .collect::<Result<_>>()?;
    }
    perpendicular_order(q, simples)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct QuiverSchurReport {
    /// Every root is Schur and `hom = ext = 0` from earlier to later.
    pub perpendicular: bool,
    /// `<later, earlier> <= 0` for every pair.
    pub euler_nonpos: bool,
    /// False when some pair of distinct imaginary roots leaves the
    /// one-dimensional semi-invariant condition unverified.
    pub circ_checked: bool,
    /// 1-based positions of the unverified pairs.
    pub unchecked_pairs: Vec<(usize, usize)>,
}

impl QuiverSchurReport {
    /// All three conditions hold and none was left unverified.
    pub fn is_quiver_schur(&self) -> bool {
        self.perpendicular && self.euler_nonpos && self.circ_checked
    }
}

/// Diagnoses whether a sequence is a quiver Schur sequence. The
/// semi-invariant condition holds automatically when at most one root of
/// a pair is imaginary; imaginary pairs are reported as unchecked.
pub fn is_quiver_schur_sequence(
    calc: &GenericCalculus,
    seq: &[DimVector],
) -> Result<QuiverSchurReport> {
    let q = calc.quiver();
    let mut perpendicular = true;
    for root in seq {
        if root.is_zero() || !calc.is_schur_root(root)? {
            perpendicular = false;
        }
    }
    let mut euler_nonpos = true;
    let mut unchecked_pairs = Vec::new();
    for i in 0..seq.len() {
        for j in i + 1..seq.len() {
            let (a, b) = (&seq[i], &seq[j]);
            if perpendicular && (calc.generic_hom(a, b)? != 0 || calc.generic_ext(a, b)? != 0) {
                perpendicular = false;
            }
            if q.euler(b.as_slice(), a.as_slice())? > 0 {
                euler_nonpos = false;
            }
            if a != b
                && q.root_class(a.as_slice())?.is_imaginary()
                && q.root_class(b.as_slice())?.is_imaginary()
            {
                unchecked_pairs.push((i + 1, j + 1));
            }
        }
    }
    Ok(QuiverSchurReport {
        perpendicular,
        euler_nonpos,
        circ_checked: unchecked_pairs.is_empty(),
        unchecked_pairs,
    })
}

/// Reorders a sequence with pairwise vanishing hom so that every arrow of
/// its loop-free local quiver points from a later member to an earlier
/// one. Ties keep the input order.
pub fn canonical_order(calc: &GenericCalculus, seq: &RootSequence) -> Result<RootSequence> {
    let local = local_quiver(calc, seq)?.quiver.without_loops();
    let k = seq.len();
    let order =
        stable_topological(k, |i, j| local.arrow_count(i, j) > 0).ok_or_else(|| {
            match local.topological_order() {
                Err(Error::OrientedCycle(c)) => Error::NonLoopCycle(c),
                _ => Error::NonLoopCycle((0..k).collect()),
            }
        })?;
    let roots = order.iter().map(|&i| seq.roots[i].clone()).collect();
    let mults = seq
        .mults
        .as_ref()
        .map(|m| order.iter().map(|&i| m[i]).collect());
    Ok(RootSequence { roots, mults })
}
