//! Coupling tensors of the internal algebras and their algebraic relations.
//!
//! Storage follows a fixed index placement:
//!
//! | tensor | shape | entry `[i][j][l]` |
//! |--------|-------|-------------------|
//! | `a` | k, k, k | `a^i_{jl}` |
//! | `b` | k, k', k | `b^i_{j'l}` |
//! | `c` | k', k', k' | `c_{i'j'}^{l'}` |
//! | `e` | k', k, k | `e^{i'}_{jl}` |
//!
//! and `g`, `gp` are the metrics on A and A'. Every raised or lowered
//! variant is derived explicitly by a method below.

mod checks;
mod esolve;
mod presets;
mod tensor;

pub use checks::{
    check_all, check_couplings, check_first_order, check_lie_structures, check_obstructions,
    RelationCheck, StructureReport,
};
pub use esolve::{solve_e_given_abc, ESolution};
pub use presets::{construct_preset, mutate_entry, mutation_sites, semidirect_split, Preset,
    PresetParams, SemidirectSplit, TensorName, PRESETS};
pub use tensor::Tensor;

use crate::error::{Error, Result};
use crate::linalg;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CouplingData {
    pub k: usize,
    pub kp: usize,
    pub a: Tensor,
    pub b: Tensor,
    pub c: Tensor,
    pub e: Tensor,
    pub g: Tensor,
    pub gp: Tensor,
}

impl CouplingData {
    /// All couplings zero with the given metrics.
    pub fn free(g: Tensor, gp: Tensor) -> Result<Self> {
        let (k, kp) = (g.dims()[0], gp.dims()[0]);
        CouplingData {
            k,
            kp,
            a: Tensor::zeros(&[k, k, k]),
            b: Tensor::zeros(&[k, kp, k]),
            c: Tensor::zeros(&[kp, kp, kp]),
            e: Tensor::zeros(&[kp, k, k]),
            g,
            gp,
        }
        .validated()
    }

    /// Checks shapes and that both metrics are symmetric and invertible.
    pub fn validated(self) -> Result<Self> {
        let (k, kp) = (self.k, self.kp);
        let shapes: [(&str, &Tensor, Vec<usize>); 6] = [
            ("a", &self.a, vec![k, k, k]),
            ("b", &self.b, vec![k, kp, k]),
            ("c", &self.c, vec![kp, kp, kp]),
            ("e", &self.e, vec![kp, k, k]),
            ("g", &self.g, vec![k, k]),
            ("gprime", &self.gp, vec![kp, kp]),
        ];
        for (name, t, want) in shapes {
            if t.dims() != want.as_slice() {
                return Err(Error::Shape(format!(
                    "{name} has dims {:?}, expected {want:?}",
                    t.dims()
                )));
            }
        }
        for (name, m) in [("g", &self.g), ("gprime", &self.gp)] {
            if *m != m.transpose() {
                return Err(Error::Coupling(format!("{name} is not symmetric")));
            }
            if linalg::inverse(&m.rows()).is_err() {
                return Err(Error::Coupling(format!("{name} is not invertible")));
            }
        }
        Ok(self)
    }

    pub fn g_inv(&self) -> Tensor {
        inverse(&self.g)
    }

    pub fn gp_inv(&self) -> Tensor {
        inverse(&self.gp)
    }

    /// `a_{ijl} = g_{id} a^d_{jl}`.
    pub fn a_low(&self) -> Tensor {
        let k = self.k;
        Tensor::from_fn(&[k, k, k], |x| {
            (0..k).map(|d| self.g.at2(x[0], d) * self.a.at3(d, x[1], x[2])).sum()
        })
    }

    /// `b_{i j' l} = g_{id} b^d_{j'l}`.
    pub fn b_low(&self) -> Tensor {
        let (k, kp) = (self.k, self.kp);
        Tensor::from_fn(&[k, kp, k], |x| {
            (0..k).map(|d| self.g.at2(x[0], d) * self.b.at3(d, x[1], x[2])).sum()
        })
    }

    /// `c_{i'j'l'} = c_{i'j'}^{d'} g'_{d'l'}`.
    pub fn c_low(&self) -> Tensor {
        let kp = self.kp;
        Tensor::from_fn(&[kp, kp, kp], |x| {
            (0..kp).map(|d| self.c.at3(x[0], x[1], d) * self.gp.at2(d, x[2])).sum()
        })
    }

    /// `e_{i'jl} = g'_{i'd'} e^{d'}_{jl}`.
    pub fn e_low(&self) -> Tensor {
        let (k, kp) = (self.k, self.kp);
        Tensor::from_fn(&[kp, k, k], |x| {
            (0..kp).map(|d| self.gp.at2(x[0], d) * self.e.at3(d, x[1], x[2])).sum()
        })
    }

    /// g-transpose of `b(w')`, stored like `b`: `[i][j'][l] = g^{id} b_{l j' d}`.
    pub fn b_transpose(&self) -> Tensor {
        let (k, kp) = (self.k, self.kp);
        let gi = self.g_inv();
        let bl = self.b_low();
        Tensor::from_fn(&[k, kp, k], |x| {
            (0..k).map(|d| gi.at2(x[0], d) * bl.at3(x[2], x[1], d)).sum()
        })
    }

    /// `b_j{}^{i'}{}_l = g'^{i'd'} b_{j d' l}`, stored `[j][i'][l]`.
    pub fn b_dual(&self) -> Tensor {
        let (k, kp) = (self.k, self.kp);
        let gpi = self.gp_inv();
        let bl = self.b_low();
        Tensor::from_fn(&[k, kp, k], |x| {
            (0..kp).map(|d| gpi.at2(x[1], d) * bl.at3(x[0], d, x[2])).sum()
        })
    }

    /// Matrix of the symmetric product against `u'`:
    /// `[i'][j][l] = e_{i'j}{}^l = g^{ld} e_{i'jd}`.
    pub fn e_mixed(&self) -> Tensor {
        let (k, kp) = (self.k, self.kp);
        let gi = self.g_inv();
        let el = self.e_low();
        Tensor::from_fn(&[kp, k, k], |x| {
            (0..k).map(|d| gi.at2(x[2], d) * el.at3(x[0], x[1], d)).sum()
        })
    }

    /// Co-adjoint structure constants
    /// `[i'][j'][l'] = g'^{i'd'} c_{d'j'}^{f'} g'_{f'l'}`.
    pub fn c_transpose(&self) -> Tensor {
        let kp = self.kp;
        let gpi = self.gp_inv();
        let cl = self.c_low();
        Tensor::from_fn(&[kp, kp, kp], |x| {
            (0..kp).map(|d| gpi.at2(x[0], d) * cl.at3(d, x[1], x[2])).sum()
        })
    }

    pub fn tensor(&self, name: TensorName) -> &Tensor {
        match name {
            TensorName::A => &self.a,
            TensorName::B => &self.b,
            TensorName::C => &self.c,
            TensorName::E => &self.e,
            TensorName::G => &self.g,
            TensorName::Gp => &self.gp,
        }
    }

    pub fn tensor_mut(&mut self, name: TensorName) -> &mut Tensor {
        match name {
            TensorName::A => &mut self.a,
            TensorName::B => &mut self.b,
            TensorName::C => &mut self.c,
            TensorName::E => &mut self.e,
            TensorName::G => &mut self.g,
            TensorName::Gp => &mut self.gp,
        }
    }

    pub fn with_e(&self, e: Tensor) -> Self {
        CouplingData { e, ..self.clone() }
    }

    pub fn b_is_zero(&self) -> bool {
        self.b.is_zero()
    }
}

fn inverse(m: &Tensor) -> Tensor {
    let n = m.dims()[0];
    let inv = linalg::inverse(&m.rows()).expect("metrics are validated invertible");
    Tensor::from_vec(&[n, n], inv.into_iter().flatten().collect()).expect("square")
}

/// Levi-Civita symbol in three indices.
pub fn epsilon3(i: usize, j: usize, l: usize) -> i64 {
    match (i, j, l) {
        (0, 1, 2) | (1, 2, 0) | (2, 0, 1) => 1,
        (0, 2, 1) | (2, 1, 0) | (1, 0, 2) => -1,
        _ => 0,
    }
}


#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{q, qi, Q};
    use num_traits::Zero;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn preset(p: Preset) -> CouplingData {
        construct_preset(p, &PresetParams::default()).unwrap()
    }

    #[test]
    fn every_preset_passes_every_relation() {
        for p in PRESETS {
            let r = check_all(&preset(p));
            assert!(r.passed(), "{}:\n{r}", p.name());
        }
    }

    #[test]
    fn su2_cartan_killing_is_twice_identity() {
        let cd = preset(Preset::Su2Ymcm);
        assert_eq!(cd.g, Tensor::diag(3, &qi(2)));
    }

    #[test]
    fn perturbed_su2_fails_jacobi() {
        let mut cd = preset(Preset::Su2Ymcm);
        cd.g = Tensor::diag(3, &qi(1));
        cd.e = Tensor::zeros(&[1, 3, 3]);
        assert!(check_lie_structures(&cd).passed());
        cd.a.set(&[0, 1, 2], qi(2));
        let r = check_lie_structures(&cd);
        assert!(!r.get("lie.a_jacobi").unwrap().passed());
    }

    #[test]
    fn scaled_c_fails_first_order_b_relation() {
        let mut cd = preset(Preset::ExftAdjoint);
        cd.c = cd.c.scale(&qi(2));
        let r = check_first_order(&cd);
        assert!(!r.get("first_order.b_commutator").unwrap().passed());
    }

    #[test]
    fn e_along_commutator_ideal_fails_intertwining() {
        // A' nonabelian: e' = ê in su(2) lies in [A', A'].
        let mut cd = preset(Preset::ExftAdjoint);
        cd.b = Tensor::zeros(&[3, 3, 3]);
        let g = cd.g.clone();
        cd.e = Tensor::from_fn(&[3, 3, 3], |x| {
            if x[0] == 0 {
                g.at2(x[1], x[2]).clone()
            } else {
                Q::zero()
            }
        });
        let r = check_couplings(&cd);
        assert!(!r.get("couplings.e_intertwining").unwrap().passed());
    }

    #[test]
    fn e_proportional_to_g_passes_obstructions_when_c_vanishes() {
        let cd = construct_preset(Preset::Su2Ymcm, &PresetParams { e: q(-3, 7) }).unwrap();
        assert!(check_obstructions(&cd).passed());
    }

    #[test]
    fn adjoint_b_admits_only_trivial_e() {
        let cd = preset(Preset::ExftAdjoint);
        let sol = solve_e_given_abc(&cd).unwrap();
        assert_eq!(sol.nontrivial_dim(), 0);
        // Sym^2 of a 3-dim space minus the invariant metric.
        assert_eq!(sol.dim(), 5);
        for v in &sol.basis {
            assert!(check_all(&cd.with_e(v.clone())).passed());
        }
    }

    #[test]
    fn su2_admits_one_parameter_family() {
        let cd = preset(Preset::Su2Ymcm);
        let sol = solve_e_given_abc(&cd).unwrap();
        assert_eq!(sol.dim(), 1);
        assert_eq!(sol.nontrivial_dim(), 1);
        assert!(sol.contains(&cd.e));
        for v in &sol.basis {
            assert!(check_all(&cd.with_e(v.clone())).passed());
        }
    }

    #[test]
    fn abelian_with_symmetric_b_contains_e_times_bs() {
        // k = 2 abelian A, A' = u(1) acting by a symmetric matrix.
        let mut cd = CouplingData::free(Tensor::diag(2, &qi(1)), Tensor::diag(1, &qi(1))).unwrap();
        cd.b.set(&[0, 0, 0], qi(1));
        cd.b.set(&[1, 0, 1], qi(-1));
        cd.b.set(&[0, 0, 1], qi(2));
        cd.b.set(&[1, 0, 0], qi(2));
        let sol = solve_e_given_abc(&cd).unwrap();
        // e^S(w') = e b^S(w') lowered with g = 1 gives e^{1}_{bc} = b^c_{1b}.
        let e = Tensor::from_fn(&[1, 2, 2], |x| cd.b.at3(x[2], 0, x[1]).clone());
        assert!(sol.contains(&e));
        assert!(check_all(&cd.with_e(e)).passed());
    }

    #[test]
    fn inconsistent_input_is_rejected() {
        let mut cd = preset(Preset::Su2Ymcm);
        cd.a.set(&[0, 1, 2], qi(5));
        assert!(solve_e_given_abc(&cd).is_err());
    }

    #[test]
    fn semidirect_presets_split() {
        for p in [Preset::FtCmSemidirect, Preset::ExftCmSemidirect] {
            let s = semidirect_split(&preset(p)).unwrap();
            assert_eq!(s.e_hat, presets::default_e_hat());
            assert_eq!(s.e, qi(1));
        }
        assert!(semidirect_split(&preset(Preset::Su2Ymcm)).is_err());
    }

    #[test]
    fn mutations_break_a_relation() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for p in PRESETS {
            let cd = preset(p);
            for _ in 0..20 {
                let (m, name, idx, _) = mutate_entry(&cd, &mut rng);
                assert!(!check_all(&m).passed(), "{} {:?} {idx:?}", p.name(), name);
            }
        }
    }

    #[test]
    fn metric_validation() {
        let mut g = Tensor::diag(2, &qi(1));
        g.set(&[0, 1], qi(1));
        assert!(CouplingData::free(g, Tensor::diag(1, &qi(1))).is_err());
        assert!(CouplingData::free(Tensor::zeros(&[2, 2]), Tensor::diag(1, &qi(1))).is_err());
        assert!(Preset::from_name("so3").is_err());
    }
}
