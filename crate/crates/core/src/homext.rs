//! Generic hom and ext dimensions, generic subrepresentations, Schur
//! roots and generic decompositions, all computed symbolically from the
//! Euler form.
//!
//! `ext(a, b)` is the maximum of `-<a', b>` over dimension vectors `a'` of
//! generic subrepresentations of a generic representation of dimension
//! `a`, and `a' -> a` is a generic subrepresentation exactly when
//! `ext(a', a - a') = 0`. The recursion terminates because `a'` is a
//! proper subvector whenever the test is needed. Dually, `ext(a, b)` is
//! the maximum of `-<a, b''>` over generic quotients `b''` of `b`; the
//! side with fewer subvectors is enumerated. Candidates failing
//! `<a', a - a'> >= 0` or the generic rank bound along an arrow are
//! discarded before the recursive test.
//!
//! Generic decompositions first peel off simple summands at sinks and
//! sources and apply reflection functors while that shrinks the vector
//! (the generic rank of the maps at the vertex gives the number of simple
//! summands there); the split search only runs on vectors that no such
//! reflection shrinks.
//!
//! `hom(a, b)` and `ext(a, b)` always refer to an independent generic pair
//! `(A, B)`. For `a = b` this is NOT `dim End(A)`: on the Kronecker quiver
//! `hom((1,1), (1,1)) = 0` while a generic representation of dimension
//! `(1,1)` has a one-dimensional endomorphism ring.

use std::cell::RefCell;
use std::collections::HashMap;
use std::rc::Rc;

use crate::decomposition::{Decomposition, Term};
use crate::error::{Error, Result};
use crate::quiver::{combine, DimVector, Quiver};

/// Order in which candidate splits `b + (a - b)` are tried.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum SearchOrder {
    /// Lexicographically increasing `b`.
    #[default]
    Forward,
    /// Lexicographically decreasing `b`.
    Backward,
}

type Key = Vec<i64>;
type Summands = Vec<(DimVector, u64)>;

/// Memoizing evaluator for one quiver.
///
/// Caches live as long as the value and are not shared between threads;
/// all cached entries are deterministic functions of their keys.
#[derive(Debug)]
pub struct GenericCalculus {
    quiver: Quiver,
    order: SearchOrder,
    reflections: bool,
    ext_cache: RefCell<HashMap<(Key, Key), i64>>,
    split_cache: RefCell<HashMap<Key, Option<Key>>>,
    decomposition_cache: RefCell<HashMap<Key, Rc<Summands>>>,
}

impl GenericCalculus {
    pub fn new(quiver: Quiver) -> Result<Self> {
        Self::with_order(quiver, SearchOrder::Forward)
    }

    pub fn with_order(quiver: Quiver, order: SearchOrder) -> Result<Self> {
        quiver.topological_order()?;
        Ok(GenericCalculus {
            quiver,
            order,
            reflections: true,
            ext_cache: RefCell::default(),
            split_cache: RefCell::default(),
            decomposition_cache: RefCell::default(),
        })
    }

    /// Disables the reflection shortcut so decompositions use the split
    /// search alone.
    pub fn without_reflections(mut self) -> Self {
        self.reflections = false;
        self
    }

    pub fn quiver(&self) -> &Quiver {
        &self.quiver
    }

    pub fn euler(&self, a: &DimVector, b: &DimVector) -> Result<i64> {
        self.quiver.euler(a.as_slice(), b.as_slice())
    }

    pub fn generic_ext(&self, a: &DimVector, b: &DimVector) -> Result<i64> {
        self.quiver.check_dim(a.as_slice())?;
        self.quiver.check_dim(b.as_slice())?;
        self.ext(a.as_slice(), b.as_slice())
    }

    /// `hom(a, b) = <a, b> + ext(a, b)`.
    pub fn generic_hom(&self, a: &DimVector, b: &DimVector) -> Result<i64> {
        let ext = self.generic_ext(a, b)?;
        self.euler(a, b)?
            .checked_add(ext)
            .ok_or(Error::Overflow("generic hom"))
    }

    /// Whether a generic representation of dimension `a` has a
    /// subrepresentation of dimension `sub`.
    pub fn is_generic_subrep(&self, sub: &DimVector, a: &DimVector) -> Result<bool> {
        self.quiver.check_dim(a.as_slice())?;
        if !sub.le(a) {
            return Err(Error::Precondition(format!("{sub} is not below {a}")));
        }
        self.subrep(sub.as_slice(), a.as_slice())
    }

    pub fn is_schur_root(&self, a: &DimVector) -> Result<bool> {
        self.quiver.check_dim(a.as_slice())?;
        if a.is_zero() {
            return Err(Error::Precondition("the zero vector is not a root".into()));
        }
        let summands = self.summands(a.as_slice())?;
        Ok(summands.len() == 1 && summands[0].1 == 1)
    }

    /// The generic decomposition of `a`, ordered as a perpendicular
    /// sequence: `hom(r_i, r_j) = 0 = ext(r_i, r_j)` for `i < j`.
    pub fn generic_decomposition(&self, a: &DimVector) -> Result<Decomposition> {
        self.quiver.check_dim(a.as_slice())?;
        if a.is_zero() {
            return Err(Error::Precondition(
                "cannot decompose the zero vector".into(),
            ));
        }
        let summands = self.summands(a.as_slice())?;
        let ordered = self.perpendicular_order(a, &summands)?;
        let terms = ordered
            .into_iter()
            .map(|(root, mult)| Term::new(&self.quiver, root, mult))
            .collect::<Result<_>>()?;
        Ok(Decomposition::new(a.clone(), terms))
    }

    fn ext(&self, a: &[i64], b: &[i64]) -> Result<i64> {
        if a.iter().all(|&x| x == 0) || b.iter().all(|&x| x == 0) {
            return Ok(0);
        }
        let key = (a.to_vec(), b.to_vec());
        if let Some(&v) = self.ext_cache.borrow().get(&key) {
            return Ok(v);
        }
        let value = self.compute_ext(a, b)?;
        self.ext_cache.borrow_mut().insert(key, value);
        Ok(value)
    }

    fn compute_ext(&self, a: &[i64], b: &[i64]) -> Result<i64> {
        // Maximize -<x, b> over generic subvectors x of a, or dually
        // -<a, y> over generic quotients y of b, whichever box is smaller.
        let quotient_side = box_size(b) < box_size(a);
        let (bound, w) = if quotient_side {
            (b, self.quiver.euler_col_against(a)?)
        } else {
            (a, self.quiver.euler_row_against(b)?)
        };
        let gain: Vec<i64> = w.iter().map(|x| -x).collect();
        bound_check(bound, &gain)?;

        let mut candidates: Vec<(i64, Key)> = Vec::new();
        for x in SubVectors::new(bound) {
            let value: i64 = x.iter().zip(&gain).map(|(x, g)| x * g).sum();
            if value <= 0 {
                continue;
            }
            let sub = if quotient_side {
                combine(bound, 1, &x, -1)?
            } else {
                x
            };
            if self.may_be_subrep(&sub, bound)? {
                candidates.push((value, sub));
            }
        }
        candidates.sort_by(|p, q| q.0.cmp(&p.0).then_with(|| p.1.cmp(&q.1)));
        for (value, sub) in candidates {
            if self.subrep(&sub, bound)? {
                return Ok(value);
            }
        }
        Ok(0)
    }

    /// Cheap necessary conditions for `sub` to be a generic subdimension
    /// vector of `a`.
    fn may_be_subrep(&self, sub: &[i64], a: &[i64]) -> Result<bool> {
        // A generic map along t -> h has kernel of dimension max(0, a_t - a_h).
        for &(t, h) in self.quiver.arrows() {
            if sub[h] < sub[t] - (a[t] - a[h]).max(0) {
                return Ok(false);
            }
        }
        let quotient = combine(a, 1, sub, -1)?;
        // ext(sub, quotient) = 0 forces hom = <sub, quotient> >= 0.
        Ok(self.quiver.euler(sub, &quotient)? >= 0)
    }

    fn subrep(&self, sub: &[i64], a: &[i64]) -> Result<bool> {
        if sub.iter().all(|&x| x == 0) || sub == a {
            return Ok(true);
        }
        let quotient = combine(a, 1, sub, -1)?;
        Ok(self.ext(sub, &quotient)? == 0)
    }

    /// A split `a = b + c` with both exts vanishing, or `None` when `a` is
    /// a Schur root.
    fn split(&self, a: &[i64]) -> Result<Option<Key>> {
        if let Some(v) = self.split_cache.borrow().get(a) {
            return Ok(v.clone());
        }
        let mut halves: Vec<Key> = SubVectors::new(a)
            .filter(|b| {
                let c: Vec<i64> = a.iter().zip(b).map(|(x, y)| x - y).collect();
                b.iter().any(|&x| x != 0) && c.iter().any(|&x| x != 0) && *b <= c
            })
            .collect();
        if self.order == SearchOrder::Backward {
            halves.reverse();
        }
        // A multiple k * r usually splits as r + (k - 1) r; try that first.
        if let Some(r) = primitive_part(a) {
            halves.insert(0, r);
        }
        let mut found = None;
        for b in halves {
            let c = combine(a, 1, &b, -1)?;
            // Vanishing ext forces hom = <,> >= 0 in both directions.
            if self.quiver.euler(&b, &c)? < 0 || self.quiver.euler(&c, &b)? < 0 {
                continue;
            }
            if self.ext(&b, &c)? == 0 && self.ext(&c, &b)? == 0 {
                found = Some(b);
                break;
            }
        }
        self.split_cache
            .borrow_mut()
            .insert(a.to_vec(), found.clone());
        Ok(found)
    }

    /// Unordered summands with merged multiplicities, sorted by root.
    fn summands(&self, a: &[i64]) -> Result<Rc<Summands>> {
        if let Some(v) = self.decomposition_cache.borrow().get(a) {
            return Ok(Rc::clone(v));
        }
        let reflected = if self.reflections {
            self.reflected_summands(a)?
        } else {
            None
        };
        let result = match reflected {
            Some(r) => r,
            None => match self.split(a)? {
                None => vec![(DimVector::new(a.to_vec())?, 1)],
                Some(b) => {
                    let c = combine(a, 1, &b, -1)?;
                    let mut merged = Vec::new();
                    for part in [self.summands(&b)?, self.summands(&c)?] {
                        merge_into(&mut merged, part.iter().cloned());
                    }
                    merged
                }
            },
        };
        let result = Rc::new(result);
        self.decomposition_cache
            .borrow_mut()
            .insert(a.to_vec(), Rc::clone(&result));
        Ok(result)
    }

    /// Reduces `a` at the first sink or source where splitting off simple
    /// summands and reflecting lowers the entry; `None` if there is none.
    fn reflected_summands(&self, a: &[i64]) -> Result<Option<Vec<(DimVector, u64)>>> {
        let q = &self.quiver;
        let n = q.vertex_count();
        for k in 0..n {
            if a[k] == 0 || !(q.is_sink(k) || q.is_source(k)) {
                continue;
            }
            let mut neighbours = 0i64;
            for h in (0..n).filter(|&h| h != k) {
                neighbours = q
                    .edge_count(k, h)
                    .checked_mul(a[h])
                    .and_then(|x| x.checked_add(neighbours))
                    .ok_or(Error::Overflow("reflection"))?;
            }
            let rank = a[k].min(neighbours);
            let simples = a[k] - rank;
            let reflected_entry = neighbours - rank;
            if reflected_entry >= a[k] {
                continue;
            }
            let mut b = a.to_vec();
            b[k] = reflected_entry;
            let mut merged = Vec::new();
            if simples > 0 {
                merged.push((DimVector::unit(n, k), simples as u64));
            }
            if b.iter().any(|&x| x != 0) {
                let reflected = q.reflected_at(k);
                let inner = if reflected == *q {
                    self.summands(&b)?
                } else {
                    let calc = GenericCalculus::with_order(reflected, self.order)?;
                    calc.summands(&b)?
                };
                let mut back = Vec::with_capacity(inner.len());
                for (root, mult) in inner.iter() {
                    back.push((reflect_vector(q, k, root.as_slice())?, *mult));
                }
                merge_into(&mut merged, back.into_iter());
            }
            return Ok(Some(merged));
        }
        Ok(None)
    }

    /// Orders summands so that `hom(r_i, r_j) = 0` for `i < j`: a root
    /// with nonzero hom into another must come after it. Ties go to the
    /// smallest root.
    fn perpendicular_order(
        &self,
        total: &DimVector,
        summands: &[(DimVector, u64)],
    ) -> Result<Vec<(DimVector, u64)>> {
        // Distinct summands have vanishing ext, so hom is the Euler form.
        let k = summands.len();
        let mut after = vec![vec![false; k]; k];
        for i in 0..k {
            for j in 0..k {
                if i != j {
                    let hom = self.euler(&summands[i].0, &summands[j].0)?;
                    if hom < 0 {
                        return Err(Error::OrderingFailure(total.as_slice().to_vec()));
                    }
                    after[i][j] = hom > 0;
                }
            }
        }
        let order = stable_topological(k, |i, j| after[i][j])
            .ok_or_else(|| Error::OrderingFailure(total.as_slice().to_vec()))?;
        Ok(order.iter().map(|&i| summands[i].clone()).collect())
    }
}

fn merge_into(merged: &mut Vec<(DimVector, u64)>, part: impl Iterator<Item = (DimVector, u64)>) {
    for (root, mult) in part {
        match merged.iter_mut().find(|(r, _)| *r == root) {
            Some((_, m)) => *m += mult,
            None => merged.push((root, mult)),
        }
    }
    merged.sort();
}

/// The simple reflection at `k`: entry `k` becomes the weighted sum of its
/// neighbours minus itself.
fn reflect_vector(q: &Quiver, k: usize, x: &[i64]) -> Result<DimVector> {
    let mut y = x.to_vec();
    let mut sum = -x[k];
    for h in (0..x.len()).filter(|&h| h != k) {
        sum = q
            .edge_count(k, h)
            .checked_mul(x[h])
            .and_then(|p| p.checked_add(sum))
            .ok_or(Error::Overflow("reflection"))?;
    }
    y[k] = sum;
    DimVector::new(y).map_err(|_| {
        Error::Precondition(format!(
            "reflection at vertex {} left the positive cone",
            k + 1
        ))
    })
}

/// Orders `0..k` so that `i` comes after `j` whenever `must_follow(i, j)`,
/// picking the smallest available index each time. `None` on a cycle.
pub(crate) fn stable_topological(
    k: usize,
    must_follow: impl Fn(usize, usize) -> bool,
) -> Option<Vec<usize>> {
    let mut placed = vec![false; k];
    let mut order = Vec::with_capacity(k);
    while order.len() < k {
        let next = (0..k)
            .find(|&i| !placed[i] && (0..k).all(|j| j == i || placed[j] || !must_follow(i, j)))?;
        placed[next] = true;
        order.push(next);
    }
    Some(order)
}

/// Rejects inputs whose subvector sums could overflow.
/// `a / gcd(a)` when the gcd exceeds one.
fn primitive_part(a: &[i64]) -> Option<Key> {
    let g = a.iter().fold(0i64, |g, &x| crate::quiver::gcd(g, x));
    (g > 1).then(|| a.iter().map(|x| x / g).collect())
}

fn box_size(a: &[i64]) -> f64 {
    a.iter().map(|&x| (x + 1) as f64).product()
}

fn bound_check(a: &[i64], gain: &[i64]) -> Result<()> {
    a.iter().zip(gain).try_fold(0i64, |acc, (x, g)| {
        x.checked_mul(g.abs())
            .and_then(|p| acc.checked_add(p))
            .ok_or(Error::Overflow("generic ext"))
    })?;
    Ok(())
}

/// All vectors `0 <= x <= bound`, lexicographically increasing.
pub(crate) struct SubVectors<'a> {
    bound: &'a [i64],
    next: Option<Vec<i64>>,
}

impl<'a> SubVectors<'a> {
    pub(crate) fn new(bound: &'a [i64]) -> Self {
        SubVectors {
            bound,
            next: Some(vec![0; bound.len()]),
        }
    }
}

impl Iterator for SubVectors<'_> {
    type Item = Vec<i64>;

    fn next(&mut self) -> Option<Vec<i64>> {
        let current = self.next.take()?;
        let mut succ = current.clone();
        let mut i = succ.len();
        loop {
            if i == 0 {
                break;
            }
            i -= 1;
            if succ[i] < self.bound[i] {
                succ[i] += 1;
                self.next = Some(succ);
                break;
            }
            succ[i] = 0;
        }
        Some(current)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn dv(v: &[i64]) -> DimVector {
        DimVector::new(v.to_vec()).unwrap()
    }

    fn kronecker(r: usize) -> GenericCalculus {
        GenericCalculus::new(Quiver::new(2, vec![(0, 1); r]).unwrap()).unwrap()
    }

    fn a2() -> GenericCalculus {
        GenericCalculus::new(Quiver::new(2, vec![(0, 1)]).unwrap()).unwrap()
    }

    #[test]
    fn subvectors_enumerate_box() {
        let all: Vec<_> = SubVectors::new(&[1, 2]).collect();
        assert_eq!(
            all,
            vec![
                vec![0, 0],
                vec![0, 1],
                vec![0, 2],
                vec![1, 0],
                vec![1, 1],
                vec![1, 2]
            ]
        );
        assert_eq!(SubVectors::new(&[]).count(), 1);
    }

    #[test]
    fn hom_ext_examples() {
        let a2 = a2();
        assert_eq!(a2.generic_hom(&dv(&[1, 0]), &dv(&[0, 1])).unwrap(), 0);
        assert_eq!(a2.generic_ext(&dv(&[1, 0]), &dv(&[0, 1])).unwrap(), 1);

        let k2 = kronecker(2);
        assert_eq!(k2.generic_ext(&dv(&[1, 0]), &dv(&[0, 1])).unwrap(), 2);
        assert_eq!(k2.generic_hom(&dv(&[1, 0]), &dv(&[0, 1])).unwrap(), 0);

        let k3 = kronecker(3);
        assert_eq!(k3.generic_hom(&dv(&[3, 1]), &dv(&[1, 0])).unwrap(), 3);
        assert_eq!(k3.generic_ext(&dv(&[3, 1]), &dv(&[1, 0])).unwrap(), 0);
    }

    #[test]
    fn independent_pair_is_not_endomorphisms() {
        let k2 = kronecker(2);
        assert_eq!(k2.generic_hom(&dv(&[1, 1]), &dv(&[1, 1])).unwrap(), 0);
    }

    #[test]
    fn subrep_examples() {
        let k2 = kronecker(2);
        assert!(k2.is_generic_subrep(&dv(&[0, 1]), &dv(&[1, 1])).unwrap());
        assert!(!k2.is_generic_subrep(&dv(&[1, 1]), &dv(&[1, 2])).unwrap());
        assert!(!k2.is_generic_subrep(&dv(&[1, 0]), &dv(&[1, 1])).unwrap());
        for a in [dv(&[2, 3]), dv(&[0, 0])] {
            assert!(k2.is_generic_subrep(&dv(&[0, 0]), &a).unwrap());
            assert!(k2.is_generic_subrep(&a, &a).unwrap());
        }
        assert!(matches!(
            k2.is_generic_subrep(&dv(&[2, 0]), &dv(&[1, 1])),
            Err(Error::Precondition(_))
        ));
    }

    #[test]
    fn schur_examples() {
        let k2 = kronecker(2);
        assert!(k2.is_schur_root(&dv(&[1, 1])).unwrap());
        assert!(!k2.is_schur_root(&dv(&[2, 2])).unwrap());
        assert!(k2.is_schur_root(&dv(&[3, 2])).unwrap());
        assert!(!a2().is_schur_root(&dv(&[1, 2])).unwrap());
        assert!(matches!(
            k2.is_schur_root(&dv(&[0, 0])),
            Err(Error::Precondition(_))
        ));
    }

    fn terms(d: &Decomposition) -> Vec<(Vec<i64>, u64)> {
        d.terms
            .iter()
            .map(|t| (t.root.as_slice().to_vec(), t.mult))
            .collect()
    }

    #[test]
    fn decomposition_examples() {
        let k3 = kronecker(3);
        let d = k3.generic_decomposition(&dv(&[4, 1])).unwrap();
        assert_eq!(terms(&d), vec![(vec![1, 0], 1), (vec![3, 1], 1)]);

        let d = a2().generic_decomposition(&dv(&[2, 1])).unwrap();
        assert_eq!(terms(&d), vec![(vec![1, 0], 1), (vec![1, 1], 1)]);

        let d = kronecker(2).generic_decomposition(&dv(&[3, 3])).unwrap();
        assert_eq!(terms(&d), vec![(vec![1, 1], 3)]);
        assert_eq!(d.to_string(), "3 x (1,1) [isotropic]");
    }

    #[test]
    fn decomposition_rejects_zero_and_cycles() {
        assert!(a2().generic_decomposition(&dv(&[0, 0])).is_err());
        let cyclic = Quiver::new(2, vec![(0, 1), (1, 0)]).unwrap();
        assert!(matches!(
            GenericCalculus::new(cyclic),
            Err(Error::OrientedCycle(_))
        ));
    }

    #[test]
    fn overflow_is_reported() {
        let k3 = kronecker(3);
        let huge = dv(&[i64::MAX / 2, 1]);
        assert!(matches!(
            k3.generic_ext(&huge, &dv(&[0, i64::MAX / 2])),
            Err(Error::Overflow(_))
        ));
    }

    #[test]
    fn stable_topological_breaks_ties_by_index() {
        assert_eq!(stable_topological(3, |_, _| false), Some(vec![0, 1, 2]));
        assert_eq!(
            stable_topological(2, |i, j| i == 0 && j == 1),
            Some(vec![1, 0])
        );
        assert_eq!(stable_topological(2, |i, j| i != j), None);
    }
}
