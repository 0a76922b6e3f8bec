#![allow(dead_code)]

use quiver_lss::{DimVector, Quiver};

pub fn dv(v: &[i64]) -> DimVector {
    DimVector::new(v.to_vec()).unwrap()
}

pub fn kronecker(r: usize) -> Quiver {
    Quiver::new(2, vec![(0, 1); r]).unwrap()
}

pub fn a2() -> Quiver {
    Quiver::new(2, vec![(0, 1)]).unwrap()
}

pub fn a3() -> Quiver {
    Quiver::new(3, vec![(0, 1), (1, 2)]).unwrap()
}

/// Acyclic quivers on 1 to 3 vertices with at most two parallel arrows per
/// ordered pair. With `labeled` every labelling is listed; otherwise only
/// representatives whose arrows go from lower to higher label (one per
/// isomorphism class at least).
pub fn grid_quivers(labeled: bool) -> Vec<Quiver> {
    let mut out = vec![Quiver::new(1, vec![]).unwrap()];
    for n in 2..=3usize {
        let pairs: Vec<(usize, usize)> = (0..n)
            .flat_map(|i| (0..n).map(move |j| (i, j)))
            .filter(|&(i, j)| i != j && (labeled || i < j))
            .collect();
        for code in 0..3usize.pow(pairs.len() as u32) {
            let mut c = code;
            let mut arrows = Vec::new();
            for &(i, j) in &pairs {
                arrows.extend(std::iter::repeat_n((i, j), c % 3));
                c /= 3;
            }
            let q = Quiver::new(n, arrows).unwrap();
            if q.is_acyclic() {
                out.push(q);
            }
        }
    }
    out
}

/// Nonzero vectors of length `n` with entries in `0..=max`.
pub fn grid_vectors(n: usize, max: i64) -> Vec<DimVector> {
    let base = max + 1;
    (1..base.pow(n as u32))
        .map(|code| {
            let mut c = code;
            let v = (0..n)
                .map(|_| {
                    let x = c % base;
                    c /= base;
                    x
                })
                .collect();
            DimVector::new(v).unwrap()
        })
        .collect()
}

pub fn sorted(mut v: Vec<DimVector>) -> Vec<DimVector> {
    v.sort();
    v
}

pub fn describe(q: &Quiver) -> String {
    let arrows: Vec<String> = q
        .arrows()
        .iter()
        .map(|&(t, h)| format!("{}->{}", t + 1, h + 1))
        .collect();
    format!("n={} [{}]", q.vertex_count(), arrows.join(" "))
}
