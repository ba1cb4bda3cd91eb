use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::linalg;
use crate::rational::Q;

use super::checks::{check_all, check_couplings, check_first_order, check_obstructions};
use super::{CouplingData, Tensor};

/// Relations in which `e` enters; each is linear and homogeneous in `e`.
const E_RELATIONS: [&str; 6] = [
    "couplings.e_symmetry",
    "couplings.e_invariance",
    "couplings.e_intertwining",
    "first_order.e_symmetry",
    "obstructions.ea",
    "obstructions.ec",
];

fn e_residuals(cd: &CouplingData) -> Vec<Q> {
    let mut r = check_couplings(cd);
    r.extend(check_first_order(cd));
    r.extend(check_obstructions(cd));
    E_RELATIONS
        .iter()
        .flat_map(|n| r.get(n).expect("relation exists").residual.data().to_vec())
        .collect()
}

/// Linear space of admissible symmetric couplings for fixed `a, b, c, g, g'`.
///
/// The relations on `e` make `x -> e_{x..}` a 1-cocycle of A' with values
/// in symmetric bilinear forms on A. Coboundaries `x -> x.S` always solve
/// them and are listed separately in `trivial`.
#[derive(Clone, Debug)]
pub struct ESolution {
    pub basis: Vec<Tensor>,
    pub trivial: Vec<Tensor>,
    dims: Vec<usize>,
}

impl ESolution {
    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    /// Dimension of the solutions modulo coboundaries.
    pub fn nontrivial_dim(&self) -> usize {
        self.basis.len() - self.trivial.len()
    }

    /// Whether `e` lies in the span of the basis.
    pub fn contains(&self, e: &Tensor) -> bool {
        if e.dims() != self.dims.as_slice() {
            return false;
        }
        let n = self.basis.len();
        let rows: Vec<Vec<Q>> = (0..e.data().len())
            .map(|i| self.basis.iter().map(|v| v.data()[i].clone()).collect())
            .collect();
        linalg::solve_least(&rows, e.data(), n).is_some()
    }
}

/// Solves the stacked linear system for `e`. The `e` already stored in
/// `cd` is ignored. Fails if the remaining data violates its own relations.
pub fn solve_e_given_abc(cd: &CouplingData) -> Result<ESolution> {
    let dims = [cd.kp, cd.k, cd.k];
    let zeroed = cd.with_e(Tensor::zeros(&dims));
    let bad: Vec<String> = check_all(&zeroed)
        .failures()
        .iter()
        .map(|c| c.name.clone())
        .collect();
    if !bad.is_empty() {
        return Err(Error::Inconsistent(format!("couplings fail {}", bad.join(", "))));
    }
    let n: usize = dims.iter().product();
    let columns: Vec<Vec<Q>> = (0..n)
        .map(|i| {
            let mut e = Tensor::zeros(&dims);
            e.data_mut()[i] = Q::one();
            e_residuals(&zeroed.with_e(e))
        })
        .collect();
    let m = columns.first().map_or(0, Vec::len);
    let rows: Vec<Vec<Q>> = (0..m)
        .map(|r| columns.iter().map(|col| col[r].clone()).collect())
        .filter(|row: &Vec<Q>| row.iter().any(|x| !x.is_zero()))
        .collect();
    let basis: Vec<Vec<Q>> = linalg::nullspace(&rows, n);
    let trivial = solutions_among(&basis, &coboundaries(cd), n);
    let wrap = |v: Vec<Q>| Tensor::from_vec(&dims, v).expect("dims");
    Ok(ESolution {
        basis: basis.into_iter().map(wrap).collect(),
        trivial: trivial.into_iter().map(wrap).collect(),
        dims: dims.to_vec(),
    })
}

/// `e^{a'}_{bc} = g'^{a'd'} (d'.S)_{bc}` with
/// `(d'.S)_{bc} = -S_{fc} b^f_{d'b} - S_{bf} b^f_{d'c}`, for `S` running
/// over a basis of symmetric forms.
fn coboundaries(cd: &CouplingData) -> Vec<Vec<Q>> {
    let (k, kp) = (cd.k, cd.kp);
    let gpi = cd.gp_inv();
    let mut out = Vec::new();
    for s0 in 0..k {
        for s1 in s0..k {
            let s = |i: usize, j: usize| (i == s0 && j == s1) || (i == s1 && j == s0);
            let low = Tensor::from_fn(&[kp, k, k], |x| {
                let (d, u, v) = (x[0], x[1], x[2]);
                let mut acc = Q::zero();
                for f in 0..k {
                    if s(f, v) {
                        acc -= cd.b.at3(f, d, u);
                    }
                    if s(u, f) {
                        acc -= cd.b.at3(f, d, v);
                    }
                }
                acc
            });
            let up = Tensor::from_fn(&[kp, k, k], |x| {
                (0..kp).map(|d| gpi.at2(x[0], d) * low.at3(d, x[1], x[2])).sum()
            });
            out.push(up.data().to_vec());
        }
    }
    out
}

/// Basis of `span(z) ∩ span(b)`.
fn solutions_among(z: &[Vec<Q>], b: &[Vec<Q>], n: usize) -> Vec<Vec<Q>> {
    let cols: Vec<&Vec<Q>> = z.iter().chain(b).collect();
    let m: Vec<Vec<Q>> = (0..n)
        .map(|r| {
            cols.iter()
                .enumerate()
                .map(|(i, c)| if i < z.len() { c[r].clone() } else { -c[r].clone() })
                .collect()
        })
        .collect();
    let mut vecs: Vec<Vec<Q>> = linalg::nullspace(&m, cols.len())
        .into_iter()
        .map(|coef| {
            (0..n)
                .map(|r| z.iter().zip(&coef).map(|(v, a)| &v[r] * a).sum())
                .collect()
        })
        .collect();
    // Dependent combinations of b collapse onto the same vector; keep a basis.
    let mut basis: Vec<Vec<Q>> = Vec::new();
    for v in vecs.drain(..) {
        let mut trial = basis.clone();
        trial.push(v.clone());
        if linalg::rank(&trial) == trial.len() {
            basis.push(v);
        }
    }
    basis
}
