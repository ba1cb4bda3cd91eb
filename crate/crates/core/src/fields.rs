//! Gauge fields over a [`CouplingData`]: curvatures, covariant derivatives,
//! Chern-Simons 3-forms and the infinitesimal gauge symmetries of each
//! theory.

use num_traits::Zero;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::actions::TheoryTag;
use crate::error::{Error, Result};
use crate::jet::{lift_form, lift_internal, Jet};
use crate::forms::{random_form_with, random_internal_with, Form, InternalForm, Signature, Space};
use crate::rational::{q, qi, Q};
use crate::scalar::Scalar;
use crate::structure::{semidirect_split, CouplingData};

type IF<S> = InternalForm<S>;

/// `out^i = sum_{j,l} coef(i,j,l) x^j ^ y^l`. Each wedge `x^j ^ y^l` is
/// computed at most once.
pub fn contract<S: Scalar>(
    space: Space,
    n: usize,
    coef: impl Fn(usize, usize, usize) -> Q,
    x: &IF<S>,
    y: &IF<S>,
) -> Result<IF<S>> {
    let deg = x.degree().unwrap_or(0) + y.degree().unwrap_or(0);
    if deg > 4 {
        return Err(Error::DegreeOverflow(x.degree().unwrap_or(0), y.degree().unwrap_or(0)));
    }
    let mut out = IF::zero(space, n, deg);
    for (j, xj) in x.entries.iter().enumerate() {
        if xj.is_zero() {
            continue;
        }
        for (l, yl) in y.entries.iter().enumerate() {
            let cs: Vec<Q> = (0..n).map(|i| coef(i, j, l)).collect();
            if cs.iter().all(Zero::is_zero) || yl.is_zero() {
                continue;
            }
            let w = xj.wedge(yl)?;
            for (o, c) in out.entries.iter_mut().zip(&cs) {
                if !c.is_zero() {
                    o.axpy(c, &w);
                }
            }
        }
    }
    Ok(out)
}

/// `out^i = sum_j m(i,j) x^j`.
pub fn transform<S: Scalar>(space: Space, n: usize, m: impl Fn(usize, usize) -> Q, x: &IF<S>) -> IF<S> {
    let mut out = IF::zero(space, n, x.degree().unwrap_or(0));
    for (i, o) in out.entries.iter_mut().enumerate() {
        for (j, xj) in x.entries.iter().enumerate() {
            let c = m(i, j);
            if !c.is_zero() {
                o.axpy(&c, xj);
            }
        }
    }
    out
}

/// `sum_i x^i ^ y^i`.
pub fn dot<S: Scalar>(x: &IF<S>, y: &IF<S>) -> Result<Form<S>> {
    let mut out = Form::zero(x.degree().unwrap_or(0) + y.degree().unwrap_or(0));
    for (a, b) in x.entries.iter().zip(&y.entries) {
        out.add_assign(&a.wedge(b)?);
    }
    Ok(out)
}

/// Multiplies every component by the same scalar form: `x^i ^ f`.
pub fn wedge_right<S: Scalar>(x: &IF<S>, f: &Form<S>) -> Result<IF<S>> {
    Ok(IF::new(x.space, x.entries.iter().map(|e| e.wedge(f)).collect::<Result<_>>()?))
}

/// `f ^ x^i`.
pub fn wedge_left<S: Scalar>(f: &Form<S>, x: &IF<S>) -> Result<IF<S>> {
    Ok(IF::new(x.space, x.entries.iter().map(|e| f.wedge(e)).collect::<Result<_>>()?))
}

/// Lowers the internal index with `g` (space A) or `g'` (space A').
pub fn lower<S: Scalar>(x: &IF<S>, cd: &CouplingData) -> IF<S> {
    let m = match x.space {
        Space::A => &cd.g,
        Space::APrime => &cd.gp,
    };
    transform(x.space, x.dim(), |i, j| m.at2(i, j).clone(), x)
}

fn check_dim<S: Scalar>(x: &IF<S>, want: usize, deg: usize, what: &str) -> Result<()> {
    if x.dim() != want {
        return Err(Error::Dim(format!("{what}: internal dimension {} != {want}", x.dim())));
    }
    if x.degree().is_some_and(|d| d != deg) {
        return Err(Error::Degree { expected: deg, got: x.degree().unwrap_or(0) });
    }
    Ok(())
}

/// `F^a = dA^a + 1/2 a^a_{bc} A^b A^c`.
pub fn curv_f<S: Scalar>(a: &IF<S>, cd: &CouplingData) -> Result<IF<S>> {
    check_dim(a, cd.k, 1, "A")?;
    let half = q(1, 2);
    let quad = contract(Space::A, cd.k, |i, j, l| cd.a.at3(i, j, l) * &half, a, a)?;
    Ok(a.d()?.add(&quad))
}

/// `R^{a'} = dK^{a'} + 1/2 c_{b'c'}^{a'} K^{b'} K^{c'}`.
pub fn curv_k<S: Scalar>(k: &IF<S>, cd: &CouplingData) -> Result<IF<S>> {
    check_dim(k, cd.kp, 1, "K")?;
    let half = q(1, 2);
    let quad = contract(Space::APrime, cd.kp, |i, j, l| cd.c.at3(j, l, i) * &half, k, k)?;
    Ok(k.d()?.add(&quad))
}

/// `D_K` acting through `b` on A-valued forms and through the adjoint
/// bracket `c` on A'-valued forms.
pub fn covd_k<S: Scalar>(w: &IF<S>, k: &IF<S>, cd: &CouplingData) -> Result<IF<S>> {
    check_dim(k, cd.kp, 1, "K")?;
    let rot = match w.space {
        Space::A => contract(Space::A, cd.k, |i, j, l| cd.b.at3(i, j, l).clone(), k, w)?,
        Space::APrime => contract(Space::APrime, cd.kp, |i, j, l| cd.c.at3(j, l, i).clone(), k, w)?,
    };
    Ok(w.d()?.add(&rot))
}

/// `D_K` on A'-valued forms through the co-adjoint constants
/// `g'^{a'd'} c_{d'b'}^{f'} g'_{f'c'}`; this is the derivative appearing
/// in the B-field gauge symmetry and agrees with [`covd_k`] when `g'` is
/// invariant.
pub fn covd_k_coadjoint<S: Scalar>(w: &IF<S>, k: &IF<S>, cd: &CouplingData) -> Result<IF<S>> {
    check_dim(w, cd.kp, w.degree().unwrap_or(0), "A'-valued form")?;
    let ct = cd.c_transpose();
    let rot = contract(Space::APrime, cd.kp, |i, j, l| ct.at3(i, j, l).clone(), k, w)?;
    Ok(w.d()?.add(&rot))
}

/// `D_{K+A} xi = d xi + b(K) xi + [A, xi]`.
pub fn covd_a<S: Scalar>(xi: &IF<S>, a: &IF<S>, k: &IF<S>, cd: &CouplingData) -> Result<IF<S>> {
    let brk = contract(Space::A, cd.k, |i, j, l| cd.a.at3(i, j, l).clone(), a, xi)?;
    Ok(covd_k(xi, k, cd)?.add(&brk))
}

/// `J^a = F^a + b^a_{b'c} K^{b'} A^c`.
pub fn curv_j<S: Scalar>(a: &IF<S>, k: &IF<S>, cd: &CouplingData) -> Result<IF<S>> {
    let bka = contract(Space::A, cd.k, |i, j, l| cd.b.at3(i, j, l).clone(), k, a)?;
    Ok(curv_f(a, cd)?.add(&bka))
}

/// `J^a = D_K A^a + 1/2 a^a_{bc} A^b A^c`, the second expansion.
pub fn curv_j_covariant<S: Scalar>(a: &IF<S>, k: &IF<S>, cd: &CouplingData) -> Result<IF<S>> {
    let half = q(1, 2);
    let quad = contract(Space::A, cd.k, |i, j, l| cd.a.at3(i, j, l) * &half, a, a)?;
    Ok(covd_k(a, k, cd)?.add(&quad))
}

/// `[A, A]^c / 3` contracted into `A^b (dA^c + ...)` style cubic pieces:
/// returns `X^c + 1/3 a^c_{de} A^d A^e` for a given 2-form `X`.
fn plus_third_bracket<S: Scalar>(x: &IF<S>, a: &IF<S>, cd: &CouplingData) -> Result<IF<S>> {
    let third = q(1, 3);
    let aa = contract(Space::A, cd.k, |i, j, l| cd.a.at3(i, j, l) * &third, a, a)?;
    Ok(x.add(&aa))
}

/// `e^{a'}_{bc} A^b X^c`.
fn e_pair<S: Scalar>(a: &IF<S>, x: &IF<S>, cd: &CouplingData) -> Result<IF<S>> {
    contract(Space::APrime, cd.kp, |i, j, l| cd.e.at3(i, j, l).clone(), a, x)
}

/// `G_A^{a'} = e^{a'}_{bc}(A^b dA^c + 1/3 a^c_{de} A^b A^d A^e)`.
pub fn cs_ga<S: Scalar>(a: &IF<S>, cd: &CouplingData) -> Result<IF<S>> {
    check_dim(a, cd.k, 1, "A")?;
    e_pair(a, &plus_third_bracket(&a.d()?, a, cd)?, cd)
}

/// `G^{a'} = G_A^{a'} - e^{a'}_{bc} b^c_{b'd} A^b A^d K^{b'}`.
pub fn cs_g<S: Scalar>(a: &IF<S>, k: &IF<S>, cd: &CouplingData) -> Result<IF<S>> {
    let (kk, kp) = (cd.k, cd.kp);
    let mut eb = vec![Q::zero(); kp * kk * kk * kp];
    for p in 0..kp {
        for b in 0..kk {
            for d in 0..kk {
                for w in 0..kp {
                    eb[((p * kk + b) * kk + d) * kp + w] =
                        (0..kk).map(|c| cd.e.at3(p, b, c) * cd.b.at3(c, w, d)).sum();
                }
            }
        }
    }
    Ok(cs_ga(a, cd)?.sub(&cubic_aak(a, k, cd, |p, b, d, w| eb[((p * kk + b) * kk + d) * kp + w].clone())?))
}

/// `G^{a'} = e^{a'}_{bc} A^b (D_K A^c + 1/3 a^c_{de} A^d A^e)`.
pub fn cs_g_covariant<S: Scalar>(a: &IF<S>, k: &IF<S>, cd: &CouplingData) -> Result<IF<S>> {
    e_pair(a, &plus_third_bracket(&covd_k(a, k, cd)?, a, cd)?, cd)
}

/// `sum coef(a',b,d,b') A^b A^d K^{b'}`.
fn cubic_aak<S: Scalar>(
    a: &IF<S>,
    k: &IF<S>,
    cd: &CouplingData,
    coef: impl Fn(usize, usize, usize, usize) -> Q,
) -> Result<IF<S>> {
    let (kk, kp) = (cd.k, cd.kp);
    let mut out = IF::zero(Space::APrime, kp, 3);
    for b in 0..kk {
        for d in 0..kk {
            if b == d {
                continue;
            }
            let cs: Vec<Vec<Q>> = (0..kp).map(|p| (0..kp).map(|w| coef(p, b, d, w)).collect()).collect();
            if cs.iter().flatten().all(Zero::is_zero) {
                continue;
            }
            let ab = a.entries[b].wedge(&a.entries[d])?;
            for w in 0..kp {
                if cs.iter().all(|r| r[w].is_zero()) {
                    continue;
                }
                let t = ab.wedge(&k.entries[w])?;
                for (p, o) in out.entries.iter_mut().enumerate() {
                    o.axpy(&cs[p][w], &t);
                }
            }
        }
    }
    Ok(out)
}

/// `G_K^{a'} = G_A^{a'} - (e^{a'}_{bc} b^c_{b'd} + b_c{}^{a'}{}_b e_{b'd}{}^c) A^b A^d K^{b'}`.
pub fn cs_gk<S: Scalar>(a: &IF<S>, k: &IF<S>, cd: &CouplingData) -> Result<IF<S>> {
    let bd = cd.b_dual();
    let em = cd.e_mixed();
    let (kk, kp) = (cd.k, cd.kp);
    let coef = |p: usize, b: usize, d: usize, w: usize| -> Q {
        (0..kk)
            .map(|c| cd.e.at3(p, b, c) * cd.b.at3(c, w, d) + bd.at3(c, p, b) * em.at3(w, d, c))
            .sum()
    };
    let _ = kp;
    Ok(cs_ga(a, cd)?.sub(&cubic_aak(a, k, cd, coef)?))
}

/// `G~_K^{a'} = b_b{}^{a'}{}_c A^c *J^b`.
pub fn cs_tgk<S: Scalar>(a: &IF<S>, k: &IF<S>, cd: &CouplingData, sig: Signature) -> Result<IF<S>> {
    let bd = cd.b_dual();
    let sj = curv_j(a, k, cd)?.hodge(sig);
    contract(Space::APrime, cd.kp, |p, c, b| bd.at3(b, p, c).clone(), a, &sj)
}

/// Field content of every theory. `phi` is the dilaton and `chiral` the
/// Maurer-Cartan form `U^{-1} dU` of the chiral field, with values in A'
/// (extended theories) or in the semisimple part `S'` (semidirect theories).
#[derive(Clone, Debug, PartialEq)]
pub struct FieldConfig<S: Scalar> {
    pub a: IF<S>,
    pub b: IF<S>,
    pub k: IF<S>,
    pub phi: Option<Form<S>>,
    pub chiral: Option<IF<S>>,
    pub signature: Signature,
}

impl<S: Scalar> FieldConfig<S> {
    pub fn zero(cd: &CouplingData, signature: Signature) -> Self {
        FieldConfig {
            a: IF::zero(Space::A, cd.k, 1),
            b: IF::zero(Space::APrime, cd.kp, 2),
            k: IF::zero(Space::APrime, cd.kp, 1),
            phi: None,
            chiral: None,
            signature,
        }
    }

    /// Random `A, B, K` and dilaton; no chiral field (see the duality module).
    pub fn random_with<R: Rng>(rng: &mut R, cd: &CouplingData, signature: Signature, cutoff: u32) -> Self {
        FieldConfig {
            a: random_internal_with(rng, Space::A, 1, cd.k, cutoff),
            b: random_internal_with(rng, Space::APrime, 2, cd.kp, cutoff),
            k: random_internal_with(rng, Space::APrime, 1, cd.kp, cutoff),
            phi: Some(random_form_with(rng, 0, cutoff)),
            chiral: None,
            signature,
        }
    }

    pub fn random(cd: &CouplingData, signature: Signature, seed: u64, cutoff: u32) -> Self {
        Self::random_with(&mut ChaCha8Rng::seed_from_u64(seed), cd, signature, cutoff)
    }

    /// `self + eps * dir`; absent optional fields of `dir` count as zero.
    pub fn axpy(&self, eps: &Q, dir: &Self) -> Self {
        let mut out = self.clone();
        out.a.axpy(eps, &dir.a);
        out.b.axpy(eps, &dir.b);
        out.k.axpy(eps, &dir.k);
        if let Some(dp) = &dir.phi {
            let mut p = out.phi.clone().unwrap_or_else(|| Form::zero(0));
            p.axpy(eps, dp);
            out.phi = Some(p);
        }
        if let Some(dc) = &dir.chiral {
            let mut c = out.chiral.clone().unwrap_or_else(|| IF::zero(dc.space, dc.dim(), 1));
            c.axpy(eps, dc);
            out.chiral = Some(c);
        }
        out
    }

    /// Jet-valued fields `self + eps * dir` with `eps^2 = 0`; absent
    /// optional fields of `dir` count as zero.
    pub fn jet(&self, dir: &Self) -> Result<FieldConfig<Jet<S>>> {
        let opt_form = |v: &Option<Form<S>>, t: &Option<Form<S>>| -> Result<Option<Form<Jet<S>>>> {
            match (v, t) {
                (None, None) => Ok(None),
                (Some(v), t) => Ok(Some(lift_form(v, &t.clone().unwrap_or_else(|| Form::zero(v.degree())))?)),
                (None, Some(t)) => Ok(Some(lift_form(&Form::zero(t.degree()), t)?)),
            }
        };
        let chiral = match (&self.chiral, &dir.chiral) {
            (None, None) => None,
            (Some(v), t) => Some(lift_internal(v, &t.clone().unwrap_or_else(|| IF::zero(v.space, v.dim(), 1)))?),
            (None, Some(t)) => Some(lift_internal(&IF::zero(t.space, t.dim(), 1), t)?),
        };
        Ok(FieldConfig {
            a: lift_internal(&self.a, &dir.a)?,
            b: lift_internal(&self.b, &dir.b)?,
            k: lift_internal(&self.k, &dir.k)?,
            phi: opt_form(&self.phi, &dir.phi)?,
            chiral,
            signature: self.signature,
        })
    }

    pub fn scale(&self, c: &Q) -> Self {
        FieldConfig {
            a: self.a.scale(c),
            b: self.b.scale(c),
            k: self.k.scale(c),
            phi: self.phi.as_ref().map(|p| p.scale(c)),
            chiral: self.chiral.as_ref().map(|x| x.scale(c)),
            signature: self.signature,
        }
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.axpy(&qi(-1), other)
    }

    pub fn is_zero(&self) -> bool {
        self.a.is_zero()
            && self.b.is_zero()
            && self.k.is_zero()
            && self.phi.as_ref().is_none_or(Form::is_zero)
            && self.chiral.as_ref().is_none_or(IF::is_zero)
    }

    pub fn phi(&self) -> Result<&Form<S>> {
        self.phi.as_ref().ok_or(Error::MissingField("phi"))
    }

    pub fn chiral(&self) -> Result<&IF<S>> {
        self.chiral.as_ref().ok_or(Error::MissingField("chiral"))
    }
}

/// Gauge parameters: `xi` an A-valued 0-form, `chi` an A'-valued 1-form.
#[derive(Clone, Debug, PartialEq)]
pub struct GaugeParams<S: Scalar> {
    pub xi: IF<S>,
    pub chi: IF<S>,
}

impl<S: Scalar> GaugeParams<S> {
    pub fn zero(cd: &CouplingData) -> Self {
        GaugeParams {
            xi: IF::zero(Space::A, cd.k, 0),
            chi: IF::zero(Space::APrime, cd.kp, 1),
        }
    }

    pub fn random_with<R: Rng>(rng: &mut R, cd: &CouplingData, cutoff: u32) -> Self {
        GaugeParams {
            xi: random_internal_with(rng, Space::A, 0, cd.k, cutoff),
            chi: random_internal_with(rng, Space::APrime, 1, cd.kp, cutoff),
        }
    }

    pub fn xi_only(&self, cd: &CouplingData) -> Self {
        GaugeParams { xi: self.xi.clone(), chi: IF::zero(Space::APrime, cd.kp, 1) }
    }

    pub fn chi_only(&self, cd: &CouplingData) -> Self {
        GaugeParams { xi: IF::zero(Space::A, cd.k, 0), chi: self.chi.clone() }
    }
}

/// The flat A'-valued connection of a dual theory, rebuilt from the
/// dilaton and chiral fields.
pub fn dual_connection<S: Scalar>(fc: &FieldConfig<S>, tag: TheoryTag, cd: &CouplingData) -> Result<IF<S>> {
    match tag {
        TheoryTag::YmcmDual | TheoryTag::AbelianCmDual => {
            if cd.kp != 1 {
                return Err(Error::Coupling(format!("{} needs k' = 1", tag.name())));
            }
            Ok(IF::new(Space::APrime, vec![fc.phi()?.d()?]))
        }
        TheoryTag::FtcmDual | TheoryTag::ExftcmDual => {
            let split = semidirect_split(cd)?;
            let dphi = fc.phi()?.d()?;
            let k = fc.chiral()?;
            check_dim(k, cd.kp - 1, 1, "chiral")?;
            let mut entries = vec![dphi.clone()];
            for (ks, eh) in k.entries.iter().zip(&split.e_hat) {
                let mut v = ks.clone();
                v.axpy(&-eh.clone(), &dphi);
                entries.push(v);
            }
            Ok(IF::new(Space::APrime, entries))
        }
        TheoryTag::ExftDual => {
            let k = fc.chiral()?;
            check_dim(k, cd.kp, 1, "chiral")?;
            Ok(k.clone())
        }
        _ => Err(Error::Inconsistent(format!("{} is not a dual theory", tag.name()))),
    }
}

/// Field deltas of the gauge symmetry with parameters `gp` in theory `tag`.
pub fn gauge_variation<S: Scalar>(
    fc: &FieldConfig<S>,
    gp: &GaugeParams<S>,
    tag: TheoryTag,
    cd: &CouplingData,
) -> Result<FieldConfig<S>> {
    tag.check_couplings(cd)?;
    check_dim(&gp.xi, cd.k, 0, "xi")?;
    check_dim(&gp.chi, cd.kp, 1, "chi")?;
    let mut out = FieldConfig::zero(cd, fc.signature);
    let zero_k = IF::zero(Space::APrime, cd.kp, 1);
    match tag {
        TheoryTag::Linear => {
            out.a = gp.xi.d()?;
            out.b = gp.chi.d()?;
        }
        TheoryTag::AbelianCm2ndOrder => {
            out.a = gp.xi.d()?;
            let f = fc.a.d()?;
            out.b = e_pair(&f, &gp.xi, cd)?.add(&gp.chi.d()?);
        }
        TheoryTag::Ymcm => {
            out.a = covd_a(&gp.xi, &fc.a, &zero_k, cd)?;
            out.b = e_pair(&fc.a, &gp.xi.d()?, cd)?.add(&gp.chi.d()?);
        }
        TheoryTag::YmcmDual
        | TheoryTag::AbelianCmDual
        | TheoryTag::FtcmDual
        | TheoryTag::ExftDual
        | TheoryTag::ExftcmDual => {
            let k = dual_connection(fc, tag, cd)?;
            out.a = covd_a(&gp.xi, &fc.a, &k, cd)?;
        }
        TheoryTag::AbelianCm1stOrder
        | TheoryTag::Full1stOrder
        | TheoryTag::Full2ndOrder
        | TheoryTag::Ftcm1stOrder
        | TheoryTag::Exft => {
            out.a = covd_a(&gp.xi, &fc.a, &fc.k, cd)?;
            out.b = xi_variation_b(fc, &gp.xi, cd)?.add(&covd_k_coadjoint(&gp.chi, &fc.k, cd)?);
        }
    }
    Ok(out)
}

/// `e^{a'}_{bc} A^b D_K xi^c - b_b{}^{a'}{}_c (*J^b + 2 e_{b'd}{}^b A^d K^{b'}) xi^c`.
fn xi_variation_b<S: Scalar>(fc: &FieldConfig<S>, xi: &IF<S>, cd: &CouplingData) -> Result<IF<S>> {
    let cm = e_pair(&fc.a, &covd_k(xi, &fc.k, cd)?, cd)?;
    let em = cd.e_mixed();
    let two = qi(2);
    // (e A K)^b = e_{b'd}^b A^d K^{b'}
    let eak = contract(Space::A, cd.k, |b, d, w| em.at3(w, d, b) * &two, &fc.a, &fc.k)?;
    let inner = curv_j(&fc.a, &fc.k, cd)?.hodge(fc.signature).add(&eak);
    let bd = cd.b_dual();
    let ft = contract(Space::APrime, cd.kp, |p, b, c| bd.at3(b, p, c).clone(), &inner, xi)?;
    Ok(cm.sub(&ft))
}

/// Exact derivative at 0 of a map polynomial of degree at most 4 in `eps`,
/// from the five-point stencil.
pub fn derivative_at_zero<T>(
    f: impl Fn(&Q) -> Result<T>,
    combine: impl Fn(&[(Q, T)]) -> T,
) -> Result<T> {
    let pts = [(qi(1), q(8, 12)), (qi(-1), q(-8, 12)), (qi(2), q(-1, 12)), (qi(-2), q(1, 12))];
    let vals = pts
        .into_iter()
        .map(|(e, w)| Ok((w, f(&e)?)))
        .collect::<Result<Vec<_>>>()?;
    Ok(combine(&vals))
}

fn combine_fields<S: Scalar>(base: &FieldConfig<S>) -> impl Fn(&[(Q, FieldConfig<S>)]) -> FieldConfig<S> + '_ {
    move |vals| {
        let mut acc = base.scale(&Q::zero());
        for (w, v) in vals {
            acc = acc.axpy(w, v);
        }
        acc
    }
}

/// `[delta_1, delta_2] - delta_3` on all fields, with
/// `xi_3 = a^a_{bc} xi_1^b xi_2^c` and `chi_3 = 0`. Exactly zero on `A`
/// for pure Yang-Mills; otherwise reported for inspection only.
pub fn gauge_commutator_residual<S: Scalar>(
    fc: &FieldConfig<S>,
    gp1: &GaugeParams<S>,
    gp2: &GaugeParams<S>,
    tag: TheoryTag,
    cd: &CouplingData,
) -> Result<FieldConfig<S>> {
    // delta_1 (delta_2 X): derivative of v_2 along v_1.
    let nested = |g1: &GaugeParams<S>, g2: &GaugeParams<S>| -> Result<FieldConfig<S>> {
        let v1 = gauge_variation(fc, g1, tag, cd)?;
        derivative_at_zero(|e| gauge_variation(&fc.axpy(e, &v1), g2, tag, cd), combine_fields(fc))
    };
    let comm = nested(gp1, gp2)?.sub(&nested(gp2, gp1)?);
    let xi3 = contract(Space::A, cd.k, |i, j, l| cd.a.at3(i, j, l).clone(), &gp1.xi, &gp2.xi)?;
    let gp3 = GaugeParams { xi: xi3, chi: IF::zero(Space::APrime, cd.kp, 1) };
    Ok(comm.sub(&gauge_variation(fc, &gp3, tag, cd)?))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::Fourier;
    use crate::structure::{construct_preset, Preset, PresetParams, PRESETS};

    fn preset(p: Preset) -> CouplingData {
        construct_preset(p, &PresetParams::default()).unwrap()
    }

    fn fields(cd: &CouplingData, seed: u64) -> FieldConfig<Fourier> {
        FieldConfig::random(cd, Signature::LORENTZIAN, seed, 1)
    }

    #[test]
    fn chern_simons_derivative_is_chern_class() {
        for p in PRESETS {
            let cd = preset(p);
            for seed in 0..3 {
                let fc = fields(&cd, seed);
                let f = curv_f(&fc.a, &cd).unwrap();
                let lhs = cs_ga(&fc.a, &cd).unwrap().d().unwrap();
                let rhs = contract(Space::APrime, cd.kp, |i, j, l| cd.e.at3(i, j, l).clone(), &f, &f).unwrap();
                assert_eq!(lhs, rhs, "{}", p.name());
            }
        }
    }

    #[test]
    fn bianchi_identity() {
        for p in PRESETS {
            let cd = preset(p);
            let fc = fields(&cd, 7);
            let r = curv_k(&fc.k, &cd).unwrap();
            assert!(covd_k(&r, &fc.k, &cd).unwrap().is_zero(), "{}", p.name());
        }
    }

    #[test]
    fn both_expansions_agree() {
        for p in PRESETS {
            let cd = preset(p);
            let fc = fields(&cd, 11);
            assert_eq!(curv_j(&fc.a, &fc.k, &cd).unwrap(), curv_j_covariant(&fc.a, &fc.k, &cd).unwrap());
            assert_eq!(cs_g(&fc.a, &fc.k, &cd).unwrap(), cs_g_covariant(&fc.a, &fc.k, &cd).unwrap());
        }
    }

    #[test]
    fn pure_yang_mills_algebra_closes() {
        let cd = preset(Preset::Su2Ymcm);
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let fc = fields(&cd, 5);
        let g1 = GaugeParams::random_with(&mut rng, &cd, 1).xi_only(&cd);
        let g2 = GaugeParams::random_with(&mut rng, &cd, 1).xi_only(&cd);
        let r = gauge_commutator_residual(&fc, &g1, &g2, TheoryTag::Ymcm, &cd).unwrap();
        assert!(r.a.is_zero());
    }

    #[test]
    fn curvature_is_covariant() {
        let cd = preset(Preset::Su2Ymcm);
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        let fc = fields(&cd, 9);
        let gp = GaugeParams::random_with(&mut rng, &cd, 1);
        let zero_k = IF::zero(Space::APrime, 1, 1);
        let da = covd_a(&gp.xi, &fc.a, &zero_k, &cd).unwrap();
        let df = derivative_at_zero(
            |e| curv_f(&fc.a.add(&da.scale(e)), &cd),
            |vals| {
                let mut acc = IF::zero(Space::A, 3, 2);
                for (w, v) in vals {
                    acc.axpy(w, v);
                }
                acc
            },
        )
        .unwrap();
        let f = curv_f(&fc.a, &cd).unwrap();
        let want = contract(Space::A, 3, |i, j, l| cd.a.at3(i, j, l).clone(), &f, &gp.xi).unwrap();
        assert_eq!(df, want);
    }
}
