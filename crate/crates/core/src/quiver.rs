//! Quivers, dimension vectors, and the Euler and Tits forms.
//!
//! Vertices are 0-based internally and 1-based in every textual format.

use std::cmp::Reverse;
use std::collections::BinaryHeap;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// A dimension vector: one nonnegative integer per vertex.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct DimVector(Vec<i64>);

impl DimVector {
    pub fn new(entries: Vec<i64>) -> Result<Self> {
        if entries.iter().any(|&x| x < 0) {
            return Err(Error::NegativeEntry(entries));
        }
        Ok(DimVector(entries))
    }

    pub fn zero(n: usize) -> Self {
        DimVector(vec![0; n])
    }

    /// The unit vector of vertex `v` (0-based).
    pub fn unit(n: usize, v: usize) -> Self {
        let mut e = vec![0; n];
        e[v] = 1;
        DimVector(e)
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn as_slice(&self) -> &[i64] {
        &self.0
    }

    pub fn into_inner(self) -> Vec<i64> {
        self.0
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(|&x| x == 0)
    }

    pub fn total(&self) -> i64 {
        self.0.iter().sum()
    }

    /// Componentwise `self <= other`.
    pub fn le(&self, other: &DimVector) -> bool {
        self.0.len() == other.0.len() && self.0.iter().zip(&other.0).all(|(a, b)| a <= b)
    }

    pub fn checked_add(&self, other: &DimVector) -> Result<DimVector> {
        combine(&self.0, 1, &other.0, 1).map(DimVector)
    }

    /// `self - other`, failing when an entry would become negative.
    pub fn checked_sub(&self, other: &DimVector) -> Result<DimVector> {
        DimVector::new(combine(&self.0, 1, &other.0, -1)?)
    }

    pub fn checked_scale(&self, k: i64) -> Result<DimVector> {
        DimVector::new(scale(&self.0, k)?)
    }

    /// If `self` is a positive multiple `k * r` of a vector `r` with
    /// coprime entries, returns `(k, r)`.
    pub fn primitive(&self) -> (i64, DimVector) {
        let g = self.0.iter().fold(0i64, |g, &x| gcd(g, x));
        if g <= 1 {
            return (1.max(g), self.clone());
        }
        (g, DimVector(self.0.iter().map(|x| x / g).collect()))
    }
}

impl fmt::Display for DimVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write_tuple(f, &self.0)
    }
}

impl FromStr for DimVector {
    type Err = Error;

    /// Parses the comma-separated form `2,3`.
    fn from_str(s: &str) -> Result<Self> {
        let entries = parse_csv(s)?;
        DimVector::new(entries)
    }
}

impl AsRef<[i64]> for DimVector {
    fn as_ref(&self) -> &[i64] {
        &self.0
    }
}

/// A character of the base-change group, one signed integer per vertex.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Weight(Vec<i64>);

impl Weight {
    pub fn new(entries: Vec<i64>) -> Self {
        Weight(entries)
    }

    pub fn as_slice(&self) -> &[i64] {
        &self.0
    }

    /// Evaluates the character on a dimension vector: `sum_a w_a * d_a`.
    pub fn pair(&self, d: &DimVector) -> Result<i64> {
        dot(&self.0, d.as_slice())
    }
}

impl fmt::Display for Weight {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write_tuple(f, &self.0)
    }
}

/// Classification of a dimension vector by its Tits form value.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum RootClass {
    /// `q = 1`
    Real,
    /// `q = 0`
    Isotropic,
    /// `q < 0`
    StrictlyImaginary,
    /// `q > 1`; no root has such a Tits value.
    NotARootCandidate,
}

impl RootClass {
    pub fn from_tits(q: i64) -> Self {
        match q {
            1 => RootClass::Real,
            0 => RootClass::Isotropic,
            q if q < 0 => RootClass::StrictlyImaginary,
            _ => RootClass::NotARootCandidate,
        }
    }

    /// Imaginary in the wide sense, `q <= 0`.
    pub fn is_imaginary(self) -> bool {
        matches!(self, RootClass::Isotropic | RootClass::StrictlyImaginary)
    }

    pub fn is_real(self) -> bool {
        self == RootClass::Real
    }

    pub fn label(self) -> &'static str {
        match self {
            RootClass::Real => "real",
            RootClass::Isotropic => "isotropic",
            RootClass::StrictlyImaginary => "imaginary",
            RootClass::NotARootCandidate => "not-a-root",
        }
    }
}

impl fmt::Display for RootClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.label())
    }
}

/// A finite quiver. Parallel arrows are stored individually; loops and
/// cycles are representable (local quivers need loops) but rejected by
/// every algorithm that requires acyclicity.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Quiver {
    n: usize,
    arrows: Vec<(usize, usize)>,
    /// `counts[t * n + h]` is the number of arrows `t -> h`.
    counts: Vec<i64>,
}

impl Quiver {
    pub fn new(n: usize, arrows: Vec<(usize, usize)>) -> Result<Self> {
        let mut counts = vec![0i64; n * n];
        for &(t, h) in &arrows {
            for v in [t, h] {
                if v >= n {
                    return Err(Error::InvalidArrow { vertex: v + 1, n });
                }
            }
            counts[t * n + h] += 1;
        }
        Ok(Quiver { n, arrows, counts })
    }

    /// Builds a quiver from an arrow-count matrix, arrows listed row by row.
    pub fn from_counts(n: usize, counts: &[i64]) -> Result<Self> {
        assert_eq!(counts.len(), n * n, "count matrix must be n x n");
        let mut arrows = Vec::new();
        for t in 0..n {
            for h in 0..n {
                let c = counts[t * n + h];
                if c < 0 {
                    return Err(Error::Precondition(format!(
                        "negative arrow count {c} from {} to {}",
                        t + 1,
                        h + 1
                    )));
                }
                arrows.extend(std::iter::repeat_n((t, h), c as usize));
            }
        }
        Quiver::new(n, arrows)
    }

    pub fn vertex_count(&self) -> usize {
        self.n
    }

    pub fn arrows(&self) -> &[(usize, usize)] {
        &self.arrows
    }

    pub fn arrow_count(&self, t: usize, h: usize) -> i64 {
        self.counts[t * self.n + h]
    }

    pub fn has_loops(&self) -> bool {
        (0..self.n).any(|v| self.arrow_count(v, v) > 0)
    }

    /// The same quiver with every loop removed.
    pub fn without_loops(&self) -> Quiver {
        let arrows = self
            .arrows
            .iter()
            .copied()
            .filter(|(t, h)| t != h)
            .collect();
        Quiver::new(self.n, arrows).expect("endpoints already validated")
    }

    /// The quiver with every arrow reversed.
    pub fn opposite(&self) -> Quiver {
        let arrows = self.arrows.iter().map(|&(t, h)| (h, t)).collect();
        Quiver::new(self.n, arrows).expect("endpoints already validated")
    }

    /// The quiver with the arrows at `v` reversed (sink and source swap).
    pub fn reflected_at(&self, v: usize) -> Quiver {
        let arrows = self
            .arrows
            .iter()
            .map(|&(t, h)| if t == v || h == v { (h, t) } else { (t, h) })
            .collect();
        Quiver::new(self.n, arrows).expect("endpoints already validated")
    }

    /// Number of arrows between `u` and `v` in either direction.
    pub fn edge_count(&self, u: usize, v: usize) -> i64 {
        self.arrow_count(u, v) + if u == v { 0 } else { self.arrow_count(v, u) }
    }

    pub fn is_sink(&self, v: usize) -> bool {
        (0..self.n).all(|h| self.arrow_count(v, h) == 0)
    }

    pub fn is_source(&self, v: usize) -> bool {
        (0..self.n).all(|t| self.arrow_count(t, v) == 0)
    }

    pub fn check_dim(&self, a: &[i64]) -> Result<()> {
        if a.len() != self.n {
            return Err(Error::LengthMismatch {
                expected: self.n,
                got: a.len(),
            });
        }
        Ok(())
    }

    /// The Euler form `<a, b> = sum_v a_v b_v - sum_{t -> h} a_t b_h`.
    pub fn euler(&self, a: &[i64], b: &[i64]) -> Result<i64> {
        self.check_dim(a)?;
        self.check_dim(b)?;
        let mut acc = dot(a, b)?;
        for t in 0..self.n {
            if a[t] == 0 {
                continue;
            }
            for h in 0..self.n {
                let c = self.counts[t * self.n + h];
                if c == 0 || b[h] == 0 {
                    continue;
                }
                let term = c
                    .checked_mul(a[t])
                    .and_then(|x| x.checked_mul(b[h]))
                    .ok_or(Error::Overflow("euler form"))?;
                acc = acc.checked_sub(term).ok_or(Error::Overflow("euler form"))?;
            }
        }
        Ok(acc)
    }

    /// The Tits form `q(a) = <a, a>` with its root classification.
    pub fn tits(&self, a: &[i64]) -> Result<(i64, RootClass)> {
        let q = self.euler(a, a)?;
        Ok((q, RootClass::from_tits(q)))
    }

    pub fn root_class(&self, a: &[i64]) -> Result<RootClass> {
        Ok(self.tits(a)?.1)
    }

    /// Coefficients `w` with `<x, b> = sum_v x_v w_v` for every `x`.
    pub(crate) fn euler_row_against(&self, b: &[i64]) -> Result<Vec<i64>> {
        let n = self.n;
        (0..n)
            .map(|v| {
                let mut w = b[v];
                for h in 0..n {
                    let c = self.counts[v * n + h];
                    if c != 0 {
                        let term = c.checked_mul(b[h]).ok_or(Error::Overflow("euler form"))?;
                        w = w.checked_sub(term).ok_or(Error::Overflow("euler form"))?;
                    }
                }
                Ok(w)
            })
            .collect()
    }

    /// Coefficients `u` with `<a, y> = sum_v u_v y_v` for every `y`.
    pub(crate) fn euler_col_against(&self, a: &[i64]) -> Result<Vec<i64>> {
        let n = self.n;
        (0..n)
            .map(|v| {
                let mut u = a[v];
                for t in 0..n {
                    let c = self.counts[t * n + v];
                    if c != 0 {
                        let term = c.checked_mul(a[t]).ok_or(Error::Overflow("euler form"))?;
                        u = u.checked_sub(term).ok_or(Error::Overflow("euler form"))?;
                    }
                }
                Ok(u)
            })
            .collect()
    }

    /// A topological order of the vertices; ties go to the smallest label.
    pub fn topological_order(&self) -> Result<Vec<usize>> {
        let n = self.n;
        let mut indeg = vec![0i64; n];
        for &(_, h) in &self.arrows {
            indeg[h] += 1;
        }
        let mut ready: BinaryHeap<Reverse<usize>> =
            (0..n).filter(|&v| indeg[v] == 0).map(Reverse).collect();
        let mut order = Vec::with_capacity(n);
        while let Some(Reverse(v)) = ready.pop() {
            order.push(v);
            for h in 0..n {
                let c = self.counts[v * n + h];
                if c > 0 {
                    indeg[h] -= c;
                    if indeg[h] == 0 {
                        ready.push(Reverse(h));
                    }
                }
            }
        }
        if order.len() == n {
            return Ok(order);
        }
        Err(Error::OrientedCycle(self.find_cycle(&indeg)))
    }

    pub fn is_acyclic(&self) -> bool {
        self.topological_order().is_ok()
    }

    /// Every vertex left with positive in-degree has a predecessor that is
    /// also left over, so walking predecessors must revisit a vertex.
    fn find_cycle(&self, indeg: &[i64]) -> Vec<usize> {
        let n = self.n;
        let start = (0..n).find(|&v| indeg[v] > 0).expect("a vertex remains");
        let mut pos = vec![usize::MAX; n];
        let mut walk = Vec::new();
        let mut v = start;
        while pos[v] == usize::MAX {
            pos[v] = walk.len();
            walk.push(v);
            v = (0..n)
                .find(|&t| indeg[t] > 0 && self.counts[t * n + v] > 0)
                .expect("remaining vertex has a remaining predecessor");
        }
        let mut cycle: Vec<usize> = walk[pos[v]..].to_vec();
        cycle.reverse();
        cycle
    }

    /// Dimension vectors of the indecomposable projectives: entry `v` of
    /// `P_a` counts oriented paths `a -> v`, the trivial path included.
    pub fn projective_dims(&self) -> Result<Vec<DimVector>> {
        let order = self.topological_order()?;
        let n = self.n;
        (0..n)
            .map(|a| {
                let mut paths = vec![0i64; n];
                paths[a] = 1;
                for &t in &order {
                    if paths[t] == 0 {
                        continue;
                    }
                    for h in 0..n {
                        let c = self.counts[t * n + h];
                        if c > 0 {
                            let add = c
                                .checked_mul(paths[t])
                                .ok_or(Error::Overflow("path count"))?;
                            paths[h] = paths[h]
                                .checked_add(add)
                                .ok_or(Error::Overflow("path count"))?;
                        }
                    }
                }
                Ok(DimVector(paths))
            })
            .collect()
    }

    /// Dimension vectors of the indecomposable injectives: entry `v` of
    /// `I_a` counts oriented paths `v -> a`.
    pub fn injective_dims(&self) -> Result<Vec<DimVector>> {
        self.opposite().projective_dims()
    }

    /// Serializes to the line-oriented quiver file format.
    pub fn to_file_string(&self) -> String {
        let mut s = format!("vertices {}\n", self.n);
        for &(t, h) in &self.arrows {
            s.push_str(&format!("arrow {} {}\n", t + 1, h + 1));
        }
        s
    }
}

impl FromStr for Quiver {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        parse_quiver(s)
    }
}

/// Parses the quiver file format:
///
/// ```text
/// # comment
/// vertices 2
/// arrow 1 2
/// arrow 1 2
/// ```
pub fn parse_quiver(text: &str) -> Result<Quiver> {
    let mut n: Option<usize> = None;
    let mut arrows = Vec::new();
    for (idx, raw) in text.lines().enumerate() {
        let line_no = idx + 1;
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let mut words = line.split_whitespace();
        let keyword = words.next().unwrap_or_default();
        let args: Vec<&str> = words.collect();
        let syntax = |message: String| Error::Syntax {
            line: line_no,
            message,
        };
        match keyword {
            "vertices" => {
                let [count] = args[..] else {
                    return Err(syntax("expected `vertices <n>`".into()));
                };
                let count: usize = count
                    .parse()
                    .map_err(|_| syntax(format!("invalid vertex count `{count}`")))?;
                match n {
                    Some(prev) if prev != count => return Err(Error::VertexCount(format!(
                        "line {line_no} declares {count} vertices, earlier declaration says {prev}"
                    ))),
                    Some(_) => {}
                    None if !arrows.is_empty() => {
                        return Err(Error::VertexCount(format!(
                            "line {line_no}: `vertices` must precede every arrow"
                        )))
                    }
                    None => n = Some(count),
                }
            }
            "arrow" => {
                let Some(count) = n else {
                    return Err(Error::VertexCount(format!(
                        "line {line_no}: arrow before the `vertices` declaration"
                    )));
                };
                let [t, h] = args[..] else {
                    return Err(syntax("expected `arrow <tail> <head>`".into()));
                };
                let mut ends = [0usize; 2];
                for (slot, word) in ends.iter_mut().zip([t, h]) {
                    let v: i64 = word
                        .parse()
                        .map_err(|_| syntax(format!("invalid vertex `{word}`")))?;
                    if v < 1 || v as usize > count {
                        return Err(Error::VertexOutOfRange {
                            line: line_no,
                            vertex: v,
                            n: count,
                        });
                    }
                    *slot = v as usize - 1;
                }
                arrows.push((ends[0], ends[1]));
            }
            other => return Err(syntax(format!("unknown keyword `{other}`"))),
        }
    }
    let n = n.ok_or_else(|| Error::VertexCount("missing `vertices` declaration".into()))?;
    Quiver::new(n, arrows)
}

/// Parses `2,3` into integers, signs allowed.
pub fn parse_csv(s: &str) -> Result<Vec<i64>> {
    s.split(',')
        .map(|w| {
            let w = w.trim();
            w.parse::<i64>().map_err(|_| Error::Syntax {
                line: 0,
                message: format!("invalid integer `{w}` in `{s}`"),
            })
        })
        .collect()
}

pub(crate) fn gcd(a: i64, b: i64) -> i64 {
    let (mut a, mut b) = (a.abs(), b.abs());
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a
}

pub(crate) fn dot(a: &[i64], b: &[i64]) -> Result<i64> {
    a.iter().zip(b).try_fold(0i64, |acc, (x, y)| {
        x.checked_mul(*y)
            .and_then(|p| acc.checked_add(p))
            .ok_or(Error::Overflow("dot product"))
    })
}

/// `ka * a + kb * b`, checked.
pub(crate) fn combine(a: &[i64], ka: i64, b: &[i64], kb: i64) -> Result<Vec<i64>> {
    a.iter()
        .zip(b)
        .map(|(x, y)| {
            x.checked_mul(ka)
                .zip(y.checked_mul(kb))
                .and_then(|(p, q)| p.checked_add(q))
                .ok_or(Error::Overflow("vector arithmetic"))
        })
        .collect()
}

pub(crate) fn scale(a: &[i64], k: i64) -> Result<Vec<i64>> {
    a.iter()
        .map(|x| x.checked_mul(k).ok_or(Error::Overflow("vector arithmetic")))
        .collect()
}

fn write_tuple(f: &mut fmt::Formatter<'_>, v: &[i64]) -> fmt::Result {
    f.write_str("(")?;
    for (i, x) in v.iter().enumerate() {
        if i > 0 {
            f.write_str(",")?;
        }
        write!(f, "{x}")?;
    }
    f.write_str(")")
}
