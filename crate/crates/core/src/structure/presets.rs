use num_traits::{One, Zero};
use rand::Rng;

use crate::error::{Error, Result};
use crate::linalg;
use crate::rational::{q, qi, Q};

use super::{epsilon3, CouplingData, Tensor};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Preset {
    U1Cm,
    Su2Ymcm,
    FtCmSemidirect,
    ExftAdjoint,
    ExftCmSemidirect,
}

pub const PRESETS: [Preset; 5] = [
    Preset::U1Cm,
    Preset::Su2Ymcm,
    Preset::FtCmSemidirect,
    Preset::ExftAdjoint,
    Preset::ExftCmSemidirect,
];

impl Preset {
    pub fn name(self) -> &'static str {
        match self {
            Preset::U1Cm => "u1-cm",
            Preset::Su2Ymcm => "su2-ymcm",
            Preset::FtCmSemidirect => "ft-cm-semidirect",
            Preset::ExftAdjoint => "exft-adjoint",
            Preset::ExftCmSemidirect => "exft-cm-semidirect",
        }
    }

    pub fn from_name(s: &str) -> Result<Self> {
        PRESETS
            .into_iter()
            .find(|p| p.name() == s)
            .ok_or_else(|| Error::UnknownPreset(s.to_string()))
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PresetParams {
    /// Overall scale of the symmetric coupling `e`; ignored by
    /// `exft-adjoint`.
    pub e: Q,
}

impl Default for PresetParams {
    fn default() -> Self {
        PresetParams { e: Q::one() }
    }
}

/// Unit vector in su(2) fixing the u(1) action in the semidirect presets.
pub fn default_e_hat() -> Vec<Q> {
    vec![q(1, 2), q(1, 2), Q::zero()]
}

fn su2_structure(dim: usize, offset: usize) -> Tensor {
    Tensor::from_fn(&[dim, dim, dim], |x| {
        if x.iter().any(|&i| i < offset) {
            return Q::zero();
        }
        qi(epsilon3(x[0] - offset, x[1] - offset, x[2] - offset))
    })
}

/// `-a^d_{ca} a^c_{db}`.
pub fn cartan_killing(a: &Tensor) -> Tensor {
    let k = a.dims()[0];
    Tensor::from_fn(&[k, k], |x| {
        let mut s = Q::zero();
        for c in 0..k {
            for d in 0..k {
                s -= a.at3(d, c, x[0]) * a.at3(c, d, x[1]);
            }
        }
        s
    })
}

/// `A' = u(1) ⋉ su(2)` with the u(1) generator at index 0 acting by
/// `ad(ê)`; metric block-diagonal, Cartan-Killing on su(2).
fn semidirect_c_gp(e_hat: &[Q]) -> (Tensor, Tensor) {
    let mut c = su2_structure(4, 1);
    for j in 1..4 {
        for l in 1..4 {
            let v: Q = (0..3).map(|m| &e_hat[m] * qi(epsilon3(m, j - 1, l - 1))).sum();
            c.set(&[0, j, l], v.clone());
            c.set(&[j, 0, l], -v);
        }
    }
    let ck = cartan_killing(&su2_structure(3, 0));
    let gp = Tensor::from_fn(&[4, 4], |x| match (x[0], x[1]) {
        (0, 0) => Q::one(),
        (0, _) | (_, 0) => Q::zero(),
        (i, j) => ck.at2(i - 1, j - 1).clone(),
    });
    (c, gp)
}

pub fn construct_preset(preset: Preset, params: &PresetParams) -> Result<CouplingData> {
    let e = &params.e;
    let cd = match preset {
        Preset::U1Cm => {
            let mut cd = CouplingData::free(Tensor::diag(1, &Q::one()), Tensor::diag(1, &Q::one()))?;
            cd.e.set(&[0, 0, 0], e.clone());
            cd
        }
        Preset::Su2Ymcm => {
            let a = su2_structure(3, 0);
            let g = cartan_killing(&a);
            let mut cd = CouplingData::free(g.clone(), Tensor::diag(1, &Q::one()))?;
            cd.e = Tensor::from_fn(&[1, 3, 3], |x| e * g.at2(x[1], x[2]));
            cd.a = a;
            cd
        }
        Preset::FtCmSemidirect | Preset::ExftCmSemidirect => {
            let (c, gp) = semidirect_c_gp(&default_e_hat());
            let mut cd = CouplingData::free(Tensor::diag(1, &Q::one()), gp)?;
            cd.c = c;
            cd.e.set(&[0, 0, 0], e.clone());
            if preset == Preset::ExftCmSemidirect {
                cd.b.set(&[0, 0, 0], Q::one());
            }
            cd
        }
        Preset::ExftAdjoint => {
            let eps = su2_structure(3, 0);
            let g = cartan_killing(&eps);
            let mut cd = CouplingData::free(g.clone(), g)?;
            cd.b = eps.clone();
            cd.c = eps;
            // e is not free here: the only admissible symmetric coupling is 0.
            cd
        }
    };
    cd.validated()
}

/// The data of a semidirect coupling `u(1) ⋉ S'` on a single abelian
/// vector: u(1) acts on `S'` by `ad(ê)` and `e^{a'}_{11} = e δ^{a'}_t`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SemidirectSplit {
    /// Components of `ê` in `S'` (indices 1..k').
    pub e_hat: Vec<Q>,
    pub e: Q,
    /// `b^1_{t1}`, the u(1) charge of A.
    pub charge: Q,
}

pub fn semidirect_split(cd: &CouplingData) -> Result<SemidirectSplit> {
    let bad = |m: &str| Error::Coupling(format!("not of semidirect shape: {m}"));
    let kp = cd.kp;
    if cd.k != 1 || kp < 2 {
        return Err(bad("need k = 1 and k' >= 2"));
    }
    if !cd.a.is_zero() {
        return Err(bad("A must be abelian"));
    }
    for i in 0..kp {
        for j in 0..kp {
            if !cd.c.at3(i, j, 0).is_zero() {
                return Err(bad("the u(1) generator appears in a bracket"));
            }
        }
    }
    if !cd.gp.at2(0, 0).is_one() || (1..kp).any(|j| !cd.gp.at2(0, j).is_zero()) {
        return Err(bad("g' must be block-diagonal with g'_tt = 1"));
    }
    if (1..kp).any(|s| !cd.e.at3(s, 0, 0).is_zero() || !cd.b.at3(0, s, 0).is_zero()) {
        return Err(bad("e and b must live on the u(1) generator"));
    }
    // c_{tj}^l = ê^m c_{mj}^l for j, l in S'.
    let n = kp - 1;
    let mut rows = Vec::new();
    let mut rhs = Vec::new();
    for j in 1..kp {
        for l in 1..kp {
            rows.push((1..kp).map(|m| cd.c.at3(m, j, l).clone()).collect());
            rhs.push(cd.c.at3(0, j, l).clone());
        }
    }
    let e_hat = linalg::solve_least(&rows, &rhs, n)
        .ok_or_else(|| bad("u(1) does not act by an inner derivation"))?;
    let norm: Q = (0..n)
        .flat_map(|i| (0..n).map(move |j| (i, j)))
        .map(|(i, j)| &e_hat[i] * cd.gp.at2(i + 1, j + 1) * &e_hat[j])
        .sum();
    if !norm.is_one() {
        return Err(bad("ê must have unit norm"));
    }
    Ok(SemidirectSplit {
        e_hat,
        e: cd.e.at3(0, 0, 0) / cd.g.at2(0, 0),
        charge: cd.b.at3(0, 0, 0).clone(),
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum TensorName {
    A,
    B,
    C,
    E,
    G,
    Gp,
}

impl TensorName {
    pub fn name(self) -> &'static str {
        match self {
            TensorName::A => "a",
            TensorName::B => "b",
            TensorName::C => "c",
            TensorName::E => "e",
            TensorName::G => "g",
            TensorName::Gp => "gprime",
        }
    }
}

/// Entries whose single perturbation must break a relation: every entry
/// of `a` and `c` and the off-diagonal entries of `e`.
pub fn mutation_sites(cd: &CouplingData) -> Vec<(TensorName, Vec<usize>)> {
    let mut out = Vec::new();
    for name in [TensorName::A, TensorName::C, TensorName::E] {
        let t = cd.tensor(name);
        for flat in 0..t.data().len() {
            let idx = t.unravel(flat);
            if name == TensorName::E && idx[1] == idx[2] {
                continue;
            }
            out.push((name, idx));
        }
    }
    out
}

/// Adds a random nonzero rational to one random mutation site.
pub fn mutate_entry<R: Rng>(cd: &CouplingData, rng: &mut R) -> (CouplingData, TensorName, Vec<usize>, Q) {
    let sites = mutation_sites(cd);
    let (name, idx) = sites[rng.gen_range(0..sites.len())].clone();
    let mut delta = Q::zero();
    while delta.is_zero() {
        delta = q(rng.gen_range(-4..=4), rng.gen_range(1..=3));
    }
    let mut out = cd.clone();
    let t = out.tensor_mut(name);
    let v = t.get(&idx) + &delta;
    t.set(&idx, v);
    (out, name, idx, delta)
}
