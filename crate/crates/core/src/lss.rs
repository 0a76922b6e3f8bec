//! Generic locally semi-simple decompositions.
//!
//! Starting from the generic decomposition ordered as a perpendicular
//! sequence, imaginary members are moved to the front by pushing them
//! left past real members, the real tail is replaced by the double
//! perpendicular of itself, and remaining positive reversed Euler values
//! are removed by pushing imaginary members right past real ones. The
//! result is a quiver Schur sequence whose summands have pairwise
//! vanishing hom.
//!
//! For prehomogeneous dimension vectors (every generic summand real) the
//! same decomposition is read off the double perpendicular directly, and
//! the subsequences of the perpendicular sequence index the Luna strata.

use std::fmt;
use std::ops::Deref;

use serde::Serialize;

use crate::decomposition::{Decomposition, Term};
use crate::error::{Error, Result};
use crate::homext::GenericCalculus;
use crate::linalg;
use crate::perp::{left_perp_sequence, right_perp_sequence};
use crate::quiver::{combine, DimVector, Quiver, Weight};

/// A member of a working sequence: root and multiplicity.
pub type Member = (DimVector, u64);

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct LssDecomposition {
    #[serde(flatten)]
    pub decomposition: Decomposition,
    pub almost_loopless: bool,
}

impl LssDecomposition {
    fn from_members(q: &Quiver, total: &DimVector, members: Vec<Member>) -> Result<Self> {
        let terms = members
            .into_iter()
            .filter(|(_, m)| *m > 0)
            .map(|(root, mult)| Term::new(q, root, mult))
            .collect::<Result<Vec<_>>>()?;
        let decomposition = Decomposition::new(total.clone(), terms);
        let almost_loopless = decomposition.is_almost_loopless()?;
        Ok(LssDecomposition {
            decomposition,
            almost_loopless,
        })
    }
}

impl fmt::Display for LssDecomposition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.decomposition.fmt(f)
    }
}

impl Deref for LssDecomposition {
    type Target = Decomposition;

    fn deref(&self) -> &Decomposition {
        &self.decomposition
    }
}

fn mult_i64(m: u64) -> Result<i64> {
    i64::try_from(m).map_err(|_| Error::Overflow("multiplicity"))
}

fn pushed_mult(base: u64, p: i64, other: u64) -> Result<u64> {
    let p = u64::try_from(p).expect("p is nonnegative");
    p.checked_mul(other)
        .and_then(|x| x.checked_add(base))
        .ok_or(Error::Overflow("multiplicity"))
}

/// Pushes `a` right past `b`: `(a, b) -> (b, a - p b)` with
/// `p = <b, a>`, conserving `m_a a + m_b b`.
///
/// Valid input has `hom(a, b) = 0`, both exts vanishing, and `a`
/// imaginary when `p > 0`; only the consequences visible in the Euler
/// form are checked here. `p = 0` is a plain transposition.
pub fn push_right(q: &Quiver, a: &Member, b: &Member) -> Result<[Member; 2]> {
    let p = q.euler(b.0.as_slice(), a.0.as_slice())?;
    if p < 0 {
        return Err(Error::Precondition(format!(
            "<{}, {}> = {p} is negative although ext should vanish",
            b.0, a.0
        )));
    }
    if p == 0 {
        return Ok([b.clone(), a.clone()]);
    }
    if !q.root_class(a.0.as_slice())?.is_imaginary() {
        return Err(Error::Precondition(format!(
            "pushed root {} is not imaginary",
            a.0
        )));
    }
    let rest = DimVector::new(combine(a.0.as_slice(), 1, b.0.as_slice(), -p)?).map_err(|_| {
        Error::Precondition(format!("{} - {p} * {} has a negative entry", a.0, b.0))
    })?;
    Ok([(b.0.clone(), pushed_mult(b.1, p, a.1)?), (rest, a.1)])
}

/// Pushes `b` left past `a`: `(a, b) -> (b - p a, a)` with `p = <b, a>`,
/// conserving `m_a a + m_b b`. Mirror image of [`push_right`], with `b`
/// the imaginary member.
pub fn push_left(q: &Quiver, a: &Member, b: &Member) -> Result<[Member; 2]> {
    let p = q.euler(b.0.as_slice(), a.0.as_slice())?;
    if p < 0 {
        return Err(Error::Precondition(format!(
            "<{}, {}> = {p} is negative although ext should vanish",
            b.0, a.0
        )));
    }
    if p == 0 {
        return Ok([b.clone(), a.clone()]);
    }
    if !q.root_class(b.0.as_slice())?.is_imaginary() {
        return Err(Error::Precondition(format!(
            "pushed root {} is not imaginary",
            b.0
        )));
    }
    let rest = DimVector::new(combine(b.0.as_slice(), 1, a.0.as_slice(), -p)?).map_err(|_| {
        Error::Precondition(format!("{} - {p} * {} has a negative entry", b.0, a.0))
    })?;
    Ok([(rest, b.1), (a.0.clone(), pushed_mult(a.1, p, b.1)?)])
}

fn is_imaginary(q: &Quiver, root: &DimVector) -> Result<bool> {
    Ok(q.root_class(root.as_slice())?.is_imaginary())
}

fn check_tits_preserved(
    q: &Quiver,
    before: &DimVector,
    after: &DimVector,
    stage: u8,
) -> Result<()> {
    let (qa, _) = q.tits(before.as_slice())?;
    let (qb, _) = q.tits(after.as_slice())?;
    if qa != qb {
        return Err(Error::Stage {
            stage,
            detail: format!("pushing changed the Tits value of {before} ({qa}) to {after} ({qb})"),
        });
    }
    Ok(())
}

/// Decomposes `target` over `basis` with nonnegative integer coefficients.
fn expand(basis: &[DimVector], target: &DimVector) -> Result<Vec<u64>> {
    let cols: Vec<&[i64]> = basis.iter().map(DimVector::as_slice).collect();
    Ok(linalg::solve_nonnegative_integer(&cols, target.as_slice())?
        .into_iter()
        .map(|c| c as u64)
        .collect())
}

fn weighted_sum(q: &Quiver, members: &[Member]) -> Result<DimVector> {
    members
        .iter()
        .try_fold(DimVector::zero(q.vertex_count()), |acc, (root, m)| {
            acc.checked_add(&root.checked_scale(mult_i64(*m)?)?)
        })
}

const STAGE_THREE_LIMIT: usize = 100_000;

/// The generic locally semi-simple decomposition of `a`, as an almost
/// loopless quiver Schur sequence with as many members as the generic
/// decomposition.
pub fn generic_lss_decomposition(
    calc: &GenericCalculus,
    a: &DimVector,
) -> Result<LssDecomposition> {
    let q = calc.quiver();
    let generic = calc.generic_decomposition(a)?;
    let mut seq: Vec<Member> = generic
        .terms
        .iter()
        .map(|t| (t.root.clone(), t.mult))
        .collect();
    let t = seq.len();

    // Stage 1: move imaginary members in front of the real ones.
    for i in 1..t {
        let mut j = i;
        while j >= 1 && is_imaginary(q, &seq[j].0)? && !is_imaginary(q, &seq[j - 1].0)? {
            let [left, right] = push_left(q, &seq[j - 1], &seq[j]).map_err(|e| e.in_stage(1))?;
            check_tits_preserved(q, &seq[j].0, &left.0, 1)?;
            seq[j - 1] = left;
            seq[j] = right;
            j -= 1;
        }
    }
    let s = seq
        .iter()
        .take_while(|(r, _)| is_imaginary(q, r).unwrap_or(false))
        .count();
    for (root, _) in &seq[s..] {
        if is_imaginary(q, root)? {
            return Err(Error::Stage {
                stage: 1,
                detail: format!("imaginary root {root} left behind a real one"),
            });
        }
    }

    // Stage 2: the real tail becomes its double perpendicular.
    if s < t {
        let tail_roots: Vec<DimVector> = seq[s..].iter().map(|(r, _)| r.clone()).collect();
        let rho = weighted_sum(q, &seq[s..]).map_err(|e| e.in_stage(2))?;
        let replaced = right_perp_sequence(calc, &tail_roots)
            .and_then(|perp| left_perp_sequence(calc, &perp))
            .map_err(|e| e.in_stage(2))?;
        if replaced.len() != t - s {
            return Err(Error::Stage {
                stage: 2,
                detail: format!(
                    "double perpendicular has {} members, expected {}",
                    replaced.len(),
                    t - s
                ),
            });
        }
        let mults = expand(&replaced, &rho).map_err(|e| e.in_stage(2))?;
        seq.truncate(s);
        seq.extend(replaced.into_iter().zip(mults));
    }

    // Stage 3: clear positive reversed Euler values on minimal segments.
    let mut steps = 0;
    while let Some((i, j)) = minimal_positive_segment(q, &seq)? {
        steps += 1;
        if steps > STAGE_THREE_LIMIT {
            return Err(Error::Stage {
                stage: 3,
                detail: "no termination within the step limit".into(),
            });
        }
        if !is_imaginary(q, &seq[i].0)? || is_imaginary(q, &seq[j].0)? {
            return Err(Error::Stage {
                stage: 3,
                detail: format!("expected imaginary {} before real {}", seq[i].0, seq[j].0),
            });
        }
        for k in i + 1..j {
            let v = q.euler(seq[j].0.as_slice(), seq[k].0.as_slice())?;
            if v != 0 {
                return Err(Error::Stage {
                    stage: 3,
                    detail: format!(
                        "<{}, {}> = {v} inside a minimal segment",
                        seq[j].0, seq[k].0
                    ),
                });
            }
        }
        let moved = seq.remove(j);
        seq.insert(i + 1, moved);
        let [left, right] = push_right(q, &seq[i], &seq[i + 1]).map_err(|e| e.in_stage(3))?;
        check_tits_preserved(q, &seq[i].0, &right.0, 3)?;
        seq[i] = left;
        seq[i + 1] = right;
    }

    if weighted_sum(q, &seq)? != *a {
        return Err(Error::Stage {
            stage: 3,
            detail: "dimension vector not conserved".into(),
        });
    }
    LssDecomposition::from_members(q, a, seq)
}

/// The pair `i < j` with `<r_j, r_i> > 0` minimizing `j - i`, then `i`.
fn minimal_positive_segment(q: &Quiver, seq: &[Member]) -> Result<Option<(usize, usize)>> {
    for width in 1..seq.len() {
        for i in 0..seq.len() - width {
            let j = i + width;
            if q.euler(seq[j].0.as_slice(), seq[i].0.as_slice())? > 0 {
                return Ok(Some((i, j)));
            }
        }
    }
    Ok(None)
}

/// True iff every summand of the generic decomposition is a real root.
pub fn is_prehomogeneous(calc: &GenericCalculus, a: &DimVector) -> Result<bool> {
    Ok(calc
        .generic_decomposition(a)?
        .terms
        .iter()
        .all(|t| t.class.is_real()))
}

/// Generic decomposition roots of a prehomogeneous vector and the simples
/// of their right perpendicular category.
fn prehomogeneous_perp(
    calc: &GenericCalculus,
    b: &DimVector,
) -> Result<(Decomposition, Vec<DimVector>)> {
    let generic = calc.generic_decomposition(b)?;
    if !generic.terms.iter().all(|t| t.class.is_real()) {
        return Err(Error::NotPrehomogeneous(b.as_slice().to_vec()));
    }
    let perp = right_perp_sequence(calc, &generic.roots())?;
    Ok((generic, perp))
}

/// The generic locally semi-simple decomposition of a prehomogeneous
/// vector, read off the double perpendicular of its generic summands.
pub fn preh_lss(calc: &GenericCalculus, b: &DimVector) -> Result<LssDecomposition> {
    let (_, perp) = prehomogeneous_perp(calc, b)?;
    let basis = left_perp_sequence(calc, &perp)?;
    let mults = expand(&basis, b)?;
    LssDecomposition::from_members(calc.quiver(), b, basis.into_iter().zip(mults).collect())
}

/// A semi-invariant generator: a root of the perpendicular sequence and
/// the weight of its determinantal semi-invariant.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Generator {
    pub root: DimVector,
    pub weight: Weight,
}

/// The weight `a -> -<e_a, root>`.
pub fn determinantal_weight(q: &Quiver, root: &DimVector) -> Result<Weight> {
    let n = q.vertex_count();
    let entries = (0..n)
        .map(|a| Ok(-q.euler(DimVector::unit(n, a).as_slice(), root.as_slice())?))
        .collect::<Result<Vec<_>>>()?;
    Ok(Weight::new(entries))
}

/// Roots and weights of an algebraically independent generating system
/// of semi-invariants on a prehomogeneous representation space.
pub fn semi_invariant_generators(calc: &GenericCalculus, b: &DimVector) -> Result<Vec<Generator>> {
    let (_, perp) = prehomogeneous_perp(calc, b)?;
    perp.into_iter()
        .map(|root| {
            let weight = determinantal_weight(calc.quiver(), &root)?;
            Ok(Generator { root, weight })
        })
        .collect()
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Stratum {
    /// 0-based positions in the perpendicular sequence.
    pub members: Vec<usize>,
    pub subsequence: Vec<DimVector>,
    pub decomposition: LssDecomposition,
    /// Weights of the semi-invariants not vanishing on the stratum.
    pub nonvanishing: Vec<Weight>,
}

impl Stratum {
    /// Whether this stratum lies in the closure of `other`.
    pub fn is_in_closure_of(&self, other: &Stratum) -> bool {
        self.members.iter().all(|m| other.members.contains(m))
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Strata {
    pub perp: Vec<DimVector>,
    /// Sorted by subsequence size, then lexicographically by members:
    /// the minimal stratum comes first and the maximal one last.
    pub strata: Vec<Stratum>,
}

impl Strata {
    pub fn minimal(&self) -> &Stratum {
        self.strata
            .first()
            .expect("the empty subsequence is always present")
    }

    pub fn maximal(&self) -> &Stratum {
        self.strata
            .last()
            .expect("the full subsequence is always present")
    }

    /// Covering pairs `(i, j)`: stratum `i` lies in the closure of stratum
    /// `j` and the subsequences differ by one member.
    pub fn covers(&self) -> Vec<(usize, usize)> {
        let mut out = Vec::new();
        for (i, s) in self.strata.iter().enumerate() {
            for (j, t) in self.strata.iter().enumerate() {
                if t.members.len() == s.members.len() + 1 && s.is_in_closure_of(t) {
                    out.push((i, j));
                }
            }
        }
        out
    }
}

/// Luna strata of a prehomogeneous vector, one per subsequence of the
/// perpendicular sequence of its generic summands.
pub fn luna_strata(calc: &GenericCalculus, b: &DimVector) -> Result<Strata> {
    let q = calc.quiver();
    let (_, perp) = prehomogeneous_perp(calc, b)?;
    let k = perp.len();
    if k >= 20 {
        return Err(Error::Precondition(format!(
            "2^{k} strata is too many to list"
        )));
    }
    let mut subsets: Vec<Vec<usize>> = (0u32..1 << k)
        .map(|mask| (0..k).filter(|i| mask & (1 << i) != 0).collect())
        .collect();
    subsets.sort_by(|x, y| x.len().cmp(&y.len()).then_with(|| x.cmp(y)));
    let strata = subsets
        .into_iter()
        .map(|members| {
            let subsequence: Vec<DimVector> = members.iter().map(|&i| perp[i].clone()).collect();
            let basis = left_perp_sequence(calc, &subsequence)?;
            let mults = expand(&basis, b)?;
            let decomposition =
                LssDecomposition::from_members(q, b, basis.into_iter().zip(mults).collect())?;
            let nonvanishing = subsequence
                .iter()
                .map(|r| determinantal_weight(q, r))
                .collect::<Result<_>>()?;
            Ok(Stratum {
                members,
                subsequence,
                decomposition,
                nonvanishing,
            })
        })
        .collect::<Result<_>>()?;
    Ok(Strata { perp, strata })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::quiver::parse_quiver;

    fn dv(v: &[i64]) -> DimVector {
        DimVector::new(v.to_vec()).unwrap()
    }

    fn kronecker(r: usize) -> Quiver {
        Quiver::new(2, vec![(0, 1); r]).unwrap()
    }

    fn calc(q: Quiver) -> GenericCalculus {
        GenericCalculus::new(q).unwrap()
    }

    fn a2() -> Quiver {
        parse_quiver("vertices 2\narrow 1 2").unwrap()
    }

    fn members(d: &Decomposition) -> Vec<(Vec<i64>, u64)> {
        d.terms
            .iter()
            .map(|t| (t.root.as_slice().to_vec(), t.mult))
            .collect()
    }

    #[test]
    fn push_right_example() {
        // <(1,0), (1,1)> = 1 when the arrows point from vertex 2 to 1.
        let q = kronecker(2).opposite();
        let out = push_right(&q, &(dv(&[1, 1]), 1), &(dv(&[1, 0]), 1)).unwrap();
        assert_eq!(out, [(dv(&[1, 0]), 2), (dv(&[0, 1]), 1)]);
        // With arrows 1 -> 2 the same pair has <b, a> = -1.
        assert!(matches!(
            push_right(&kronecker(2), &(dv(&[1, 1]), 1), &(dv(&[1, 0]), 1)),
            Err(Error::Precondition(_))
        ));
    }

    #[test]
    fn push_left_example() {
        let out = push_left(&kronecker(2), &(dv(&[1, 0]), 1), &(dv(&[1, 1]), 1)).unwrap();
        assert_eq!(out, [(dv(&[0, 1]), 1), (dv(&[1, 0]), 2)]);
    }

    #[test]
    fn zero_push_is_transposition() {
        // (1,1,1) and (0,1,0) on A3 are orthogonal both ways.
        let q = parse_quiver("vertices 3\narrow 1 2\narrow 2 3").unwrap();
        let a = (dv(&[1, 1, 1]), 2);
        let b = (dv(&[0, 1, 0]), 5);
        assert_eq!(push_right(&q, &a, &b).unwrap(), [b.clone(), a.clone()]);
        assert_eq!(push_left(&q, &a, &b).unwrap(), [b, a]);
    }

    #[test]
    fn push_rejects_real_pushed_root() {
        // A2: <(1,1),(1,0)> = 1 but (1,0) is real.
        assert!(matches!(
            push_right(&a2(), &(dv(&[1, 0]), 1), &(dv(&[1, 1]), 1)),
            Err(Error::Precondition(_))
        ));
    }

    #[test]
    fn push_rejects_negative_result() {
        let q = kronecker(3).opposite();
        // <(2,0),(1,1)> = 2 on the opposite 3-Kronecker; (1,1) - 2 (2,0) < 0.
        assert!(matches!(
            push_right(&q, &(dv(&[1, 1]), 1), &(dv(&[2, 0]), 1)),
            Err(Error::Precondition(_))
        ));
    }

    #[test]
    fn lss_examples() {
        let d = generic_lss_decomposition(&calc(a2()), &dv(&[2, 1])).unwrap();
        assert_eq!(members(&d), vec![(vec![0, 1], 1), (vec![1, 0], 2)]);
        assert!(d.almost_loopless);

        let d = generic_lss_decomposition(&calc(kronecker(3)), &dv(&[4, 1])).unwrap();
        assert_eq!(d.multiset(), vec![(dv(&[0, 1]), 1), (dv(&[1, 0]), 4)]);

        let d = generic_lss_decomposition(&calc(kronecker(2)), &dv(&[2, 1])).unwrap();
        assert_eq!(members(&d), vec![(vec![2, 1], 1)]);

        let d = generic_lss_decomposition(&calc(kronecker(2)), &dv(&[3, 3])).unwrap();
        assert_eq!(members(&d), vec![(vec![1, 1], 3)]);
        assert!(d.almost_loopless);
    }

    #[test]
    fn prehomogeneous_examples() {
        let k2 = calc(kronecker(2));
        assert!(is_prehomogeneous(&k2, &dv(&[2, 1])).unwrap());
        assert!(!is_prehomogeneous(&k2, &dv(&[1, 1])).unwrap());
        assert!(is_prehomogeneous(&calc(kronecker(3)), &dv(&[4, 1])).unwrap());
    }

    #[test]
    fn preh_lss_examples() {
        let k2 = calc(kronecker(2));
        assert_eq!(
            members(&preh_lss(&k2, &dv(&[2, 1])).unwrap()),
            vec![(vec![2, 1], 1)]
        );
        assert_eq!(
            members(&preh_lss(&k2, &dv(&[4, 2])).unwrap()),
            vec![(vec![2, 1], 2)]
        );
        assert_eq!(
            members(&preh_lss(&calc(a2()), &dv(&[2, 1])).unwrap()),
            vec![(vec![0, 1], 1), (vec![1, 0], 2)]
        );
        assert!(matches!(
            preh_lss(&k2, &dv(&[1, 1])),
            Err(Error::NotPrehomogeneous(_))
        ));
    }

    #[test]
    fn strata_examples() {
        let strata = luna_strata(&calc(kronecker(2)), &dv(&[2, 1])).unwrap();
        assert_eq!(strata.strata.len(), 2);
        assert_eq!(
            strata.minimal().decomposition.multiset(),
            vec![(dv(&[0, 1]), 1), (dv(&[1, 0]), 2)]
        );
        assert_eq!(
            strata.maximal().decomposition.multiset(),
            vec![(dv(&[2, 1]), 1)]
        );
        assert_eq!(strata.maximal().subsequence, vec![dv(&[3, 2])]);
        assert!(strata.minimal().is_in_closure_of(strata.maximal()));
        assert!(!strata.maximal().is_in_closure_of(strata.minimal()));
        assert_eq!(strata.covers(), vec![(0, 1)]);

        assert_eq!(
            luna_strata(&calc(a2()), &dv(&[2, 1])).unwrap().strata.len(),
            1
        );
        assert_eq!(
            luna_strata(&calc(kronecker(3)), &dv(&[4, 1]))
                .unwrap()
                .strata
                .len(),
            1
        );
    }

    #[test]
    fn generator_examples() {
        let k2 = calc(kronecker(2));
        let gens = semi_invariant_generators(&k2, &dv(&[2, 1])).unwrap();
        assert_eq!(
            gens,
            vec![Generator {
                root: dv(&[3, 2]),
                weight: Weight::new(vec![1, -2])
            }]
        );
        assert_eq!(gens[0].weight.pair(&dv(&[2, 1])).unwrap(), 0);
        assert!(semi_invariant_generators(&calc(a2()), &dv(&[2, 1]))
            .unwrap()
            .is_empty());
        let gens = semi_invariant_generators(&k2, &dv(&[4, 2])).unwrap();
        assert_eq!(gens[0].weight, Weight::new(vec![1, -2]));
        assert!(matches!(
            semi_invariant_generators(&k2, &dv(&[1, 1])),
            Err(Error::NotPrehomogeneous(_))
        ));
    }
}
