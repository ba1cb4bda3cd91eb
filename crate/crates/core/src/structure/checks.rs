use std::fmt;

use crate::rational::{fmt_q, Q};

use super::{CouplingData, Tensor};

/// Outcome of one algebraic relation: the full residual tensor.
#[derive(Clone, Debug)]
pub struct RelationCheck {
    pub name: String,
    pub residual: Tensor,
}

impl RelationCheck {
    fn new(group: &str, relation: &str, residual: Tensor) -> Self {
        RelationCheck { name: format!("{group}.{relation}"), residual }
    }

    pub fn passed(&self) -> bool {
        self.residual.is_zero()
    }

    /// `"0"` or the largest residual entry with its index.
    pub fn summary(&self) -> String {
        match self.residual.witness() {
            None => "0".to_string(),
            Some((idx, v)) => format!("{} at {idx:?}", fmt_q(&v)),
        }
    }
}

#[derive(Clone, Debug, Default)]
pub struct StructureReport {
    pub checks: Vec<RelationCheck>,
}

impl StructureReport {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(RelationCheck::passed)
    }

    pub fn failures(&self) -> Vec<&RelationCheck> {
        self.checks.iter().filter(|c| !c.passed()).collect()
    }

    pub fn get(&self, name: &str) -> Option<&RelationCheck> {
        self.checks.iter().find(|c| c.name == name)
    }

    pub fn extend(&mut self, other: StructureReport) {
        self.checks.extend(other.checks);
    }
}

impl fmt::Display for StructureReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for c in &self.checks {
            let status = if c.passed() { "pass" } else { "FAIL" };
            writeln!(f, "{status} {} residual {}", c.name, c.summary())?;
        }
        Ok(())
    }
}

/// Sum over all permutations of three slots of a rank-4 tensor, with sign.
fn antisymmetrize3(t: &Tensor, slots: [usize; 3]) -> Tensor {
    const PERMS: [([usize; 3], i64); 6] = [
        ([0, 1, 2], 1),
        ([1, 2, 0], 1),
        ([2, 0, 1], 1),
        ([1, 0, 2], -1),
        ([0, 2, 1], -1),
        ([2, 1, 0], -1),
    ];
    Tensor::from_fn(t.dims(), |idx| {
        let mut acc = Q::default();
        for (p, s) in PERMS {
            let mut j = idx.to_vec();
            for n in 0..3 {
                j[slots[n]] = idx[slots[p[n]]];
            }
            if s > 0 {
                acc += t.get(&j);
            } else {
                acc -= t.get(&j);
            }
        }
        acc
    })
}

fn sum(n: usize, f: impl Fn(usize) -> Q) -> Q {
    (0..n).map(f).sum()
}

/// Antisymmetry, Jacobi and metric invariance for both Lie brackets.
pub fn check_lie_structures(cd: &CouplingData) -> StructureReport {
    let (k, kp) = (cd.k, cd.kp);
    let (a, c, g) = (&cd.a, &cd.c, &cd.g);
    let al = cd.a_low();
    let jac_a = |x: &[usize]| {
        let br = |u, v, w| sum(k, |d| a.at3(x[0], u, d) * a.at3(d, v, w));
        br(x[1], x[2], x[3]) + br(x[2], x[3], x[1]) + br(x[3], x[1], x[2])
    };
    let jac_c = |x: &[usize]| {
        let br = |u, v, w| sum(kp, |d| c.at3(v, w, d) * c.at3(u, d, x[3]));
        br(x[0], x[1], x[2]) + br(x[1], x[2], x[0]) + br(x[2], x[0], x[1])
    };
    let checks = vec![
        RelationCheck::new(
            "lie",
            "a_antisymmetry",
            Tensor::from_fn(&[k, k, k], |x| al.at3(x[0], x[1], x[2]) + al.at3(x[0], x[2], x[1])),
        ),
        RelationCheck::new("lie", "a_jacobi", Tensor::from_fn(&[k; 4], jac_a)),
        RelationCheck::new(
            "lie",
            "c_antisymmetry",
            Tensor::from_fn(&[kp, kp, kp], |x| c.at3(x[0], x[1], x[2]) + c.at3(x[1], x[0], x[2])),
        ),
        RelationCheck::new("lie", "c_jacobi", Tensor::from_fn(&[kp; 4], jac_c)),
        RelationCheck::new(
            "lie",
            "g_invariance",
            Tensor::from_fn(&[k, k, k], |x| {
                sum(k, |d| {
                    g.at2(x[0], d) * a.at3(d, x[1], x[2]) - g.at2(d, x[2]) * a.at3(d, x[0], x[1])
                })
            }),
        ),
        RelationCheck::new(
            "lie",
            "g_symmetry",
            Tensor::from_fn(&[k, k], |x| g.at2(x[0], x[1]) - g.at2(x[1], x[0])),
        ),
        RelationCheck::new(
            "lie",
            "gprime_symmetry",
            Tensor::from_fn(&[kp, kp], |x| cd.gp.at2(x[0], x[1]) - cd.gp.at2(x[1], x[0])),
        ),
    ];
    StructureReport { checks }
}

/// Representation and derivation properties of `b`, symmetry and
/// invariance of `e`, and the intertwining relation between them.
pub fn check_couplings(cd: &CouplingData) -> StructureReport {
    let (k, kp) = (cd.k, cd.kp);
    let (a, b, c, e) = (&cd.a, &cd.b, &cd.c, &cd.e);
    let rep = Tensor::from_fn(&[kp, kp, k, k], |x| {
        let (u, v, i, j) = (x[0], x[1], x[2], x[3]);
        sum(k, |d| b.at3(i, u, d) * b.at3(d, v, j) - b.at3(i, v, d) * b.at3(d, u, j))
            - sum(kp, |w| c.at3(u, v, w) * b.at3(i, w, j))
    });
    let der = Tensor::from_fn(&[kp, k, k, k], |x| {
        let (w, i, u, v) = (x[0], x[1], x[2], x[3]);
        sum(k, |d| {
            b.at3(i, w, d) * a.at3(d, u, v)
                - a.at3(i, d, v) * b.at3(d, w, u)
                - a.at3(i, u, d) * b.at3(d, w, v)
        })
    });
    let esym = Tensor::from_fn(&[kp, k, k], |x| e.at3(x[0], x[1], x[2]) - e.at3(x[0], x[2], x[1]));
    let einv = Tensor::from_fn(&[kp, k, k, k], |x| {
        let (p, u, v, w) = (x[0], x[1], x[2], x[3]);
        sum(k, |d| e.at3(p, u, d) * a.at3(d, v, w) - e.at3(p, d, w) * a.at3(d, u, v))
    });
    StructureReport {
        checks: vec![
            RelationCheck::new("couplings", "b_representation", rep),
            RelationCheck::new("couplings", "b_derivation", der),
            RelationCheck::new("couplings", "e_symmetry", esym),
            RelationCheck::new("couplings", "e_invariance", einv),
            RelationCheck::new("couplings", "e_intertwining", intertwining(cd)),
        ],
    }
}

type Mat = Vec<Vec<Q>>;

fn matmul(x: &Mat, y: &Mat) -> Mat {
    let n = x.len();
    (0..n)
        .map(|i| (0..n).map(|j| sum(n, |d| &x[i][d] * &y[d][j])).collect())
        .collect()
}

fn combine(x: &Mat, y: &Mat, s: &Q) -> Mat {
    x.iter()
        .zip(y)
        .map(|(r, t)| r.iter().zip(t).map(|(p, q)| p + s * q).collect())
        .collect()
}

/// Residual, indexed `[u'][v'][row][col]`, of
/// `e^S([u',v']) - [e^S(u'), b^A(v')] - [b^A(u'), e^S(v')]
///  - {e^S(u'), b^S(v')} + {b^S(u'), e^S(v')}`.
fn intertwining(cd: &CouplingData) -> Tensor {
    let (k, kp) = (cd.k, cd.kp);
    let half = Q::new(1.into(), 2.into());
    let one = Q::from_integer(1.into());
    let minus = -one.clone();
    let em = cd.e_mixed();
    let bt = cd.b_transpose();
    // Matrices act on column vectors: M[row][col].
    let es: Vec<Mat> = (0..kp)
        .map(|u| (0..k).map(|r| (0..k).map(|s| em.at3(u, s, r).clone()).collect()).collect())
        .collect();
    let bm = |t: &Tensor, u| -> Mat {
        (0..k).map(|r| (0..k).map(|s| t.at3(r, u, s).clone()).collect()).collect()
    };
    let bs: Vec<Mat> = (0..kp)
        .map(|u| combine(&bm(&cd.b, u), &bm(&bt, u), &one).iter()
            .map(|r| r.iter().map(|x| x * &half).collect()).collect())
        .collect();
    let ba: Vec<Mat> = (0..kp)
        .map(|u| combine(&bm(&cd.b, u), &bm(&bt, u), &minus).iter()
            .map(|r| r.iter().map(|x| x * &half).collect()).collect())
        .collect();
    let comm = |x: &Mat, y: &Mat| combine(&matmul(x, y), &matmul(y, x), &minus);
    let acomm = |x: &Mat, y: &Mat| combine(&matmul(x, y), &matmul(y, x), &one);
    let mut out = Tensor::zeros(&[kp, kp, k, k]);
    for u in 0..kp {
        for v in 0..kp {
            let mut lhs: Mat = vec![vec![Q::default(); k]; k];
            for w in 0..kp {
                lhs = combine(&lhs, &es[w], cd.c.at3(u, v, w));
            }
            lhs = combine(&lhs, &comm(&es[u], &ba[v]), &minus);
            lhs = combine(&lhs, &comm(&ba[u], &es[v]), &minus);
            lhs = combine(&lhs, &acomm(&es[u], &bs[v]), &minus);
            lhs = combine(&lhs, &acomm(&bs[u], &es[v]), &one);
            for r in 0..k {
                for s in 0..k {
                    out.set(&[u, v, r, s], lhs[r][s].clone());
                }
            }
        }
    }
    out
}

/// The relations required of a first-order deformation.
pub fn check_first_order(cd: &CouplingData) -> StructureReport {
    let (k, kp) = (cd.k, cd.kp);
    let (a, b, c) = (&cd.a, &cd.b, &cd.c);
    let (al, bl, cl, el) = (cd.a_low(), cd.b_low(), cd.c_low(), cd.e_low());
    let a_anti = Tensor::from_fn(&[k, k, k], |x| al.at3(x[0], x[1], x[2]) + al.at3(x[0], x[2], x[1]));
    let a_jac = antisymmetrize3(
        &Tensor::from_fn(&[k; 4], |x| sum(k, |d| al.at3(x[0], d, x[1]) * a.at3(d, x[2], x[3]))),
        [1, 2, 3],
    );
    let c_anti =
        Tensor::from_fn(&[kp, kp, kp], |x| cl.at3(x[0], x[1], x[2]) + cl.at3(x[1], x[0], x[2]));
    // slots: d', e', b', a'
    let c_jac = antisymmetrize3(
        &Tensor::from_fn(&[kp; 4], |x| sum(kp, |d| c.at3(x[0], x[1], d) * cl.at3(x[2], d, x[3]))),
        [0, 1, 2],
    );
    // slots: a, b', d', e
    let bb = Tensor::from_fn(&[k, kp, kp, k], |x| {
        let (i, p, q, j) = (x[0], x[1], x[2], x[3]);
        sum(k, |d| bl.at3(i, p, d) * b.at3(d, q, j) - bl.at3(i, q, d) * b.at3(d, p, j))
            - sum(kp, |w| bl.at3(i, w, j) * c.at3(p, q, w))
    });
    let e_sym = Tensor::from_fn(&[kp, k, k], |x| el.at3(x[0], x[1], x[2]) - el.at3(x[0], x[2], x[1]));
    StructureReport {
        checks: vec![
            RelationCheck::new("first_order", "a_antisymmetry", a_anti),
            RelationCheck::new("first_order", "a_jacobi", a_jac),
            RelationCheck::new("first_order", "c_antisymmetry", c_anti),
            RelationCheck::new("first_order", "c_jacobi", c_jac),
            RelationCheck::new("first_order", "b_commutator", bb),
            RelationCheck::new("first_order", "e_symmetry", e_sym),
        ],
    }
}

/// Integrability conditions for second-order deformations mixing all
/// three coupling types.
pub fn check_obstructions(cd: &CouplingData) -> StructureReport {
    let (k, kp) = (cd.k, cd.kp);
    let (a, b, c) = (&cd.a, &cd.b, &cd.c);
    let (al, bl, el) = (cd.a_low(), cd.b_low(), cd.e_low());
    // slots: a, d', c, e
    let ab = Tensor::from_fn(&[k, kp, k, k], |x| {
        let (i, p, s, t) = (x[0], x[1], x[2], x[3]);
        sum(k, |d| {
            al.at3(i, d, s) * b.at3(d, p, t) - al.at3(i, d, t) * b.at3(d, p, s)
                - bl.at3(i, p, d) * a.at3(d, t, s)
        })
    });
    // slots: a', b, d, e
    let ea = Tensor::from_fn(&[kp, k, k, k], |x| {
        let (p, u, v, w) = (x[0], x[1], x[2], x[3]);
        sum(k, |d| el.at3(p, d, u) * a.at3(d, v, w) + el.at3(p, d, v) * a.at3(d, u, w))
    });
    // slots: d', e', a, b
    let ec = Tensor::from_fn(&[kp, kp, k, k], |x| {
        let (p, q, i, j) = (x[0], x[1], x[2], x[3]);
        sum(kp, |w| c.at3(p, q, w) * el.at3(w, i, j))
            - sum(k, |d| {
                el.at3(p, d, i) * b.at3(d, q, j) - el.at3(q, d, i) * b.at3(d, p, j)
                    + el.at3(p, d, j) * b.at3(d, q, i)
                    - el.at3(q, d, j) * b.at3(d, p, i)
            })
    });
    StructureReport {
        checks: vec![
            RelationCheck::new("obstructions", "ab", ab),
            RelationCheck::new("obstructions", "ea", ea),
            RelationCheck::new("obstructions", "ec", ec),
        ],
    }
}

/// Every relation, grouped in a fixed order.
pub fn check_all(cd: &CouplingData) -> StructureReport {
    let mut r = check_lie_structures(cd);
    r.extend(check_couplings(cd));
    r.extend(check_first_order(cd));
    r.extend(check_obstructions(cd));
    r
}
