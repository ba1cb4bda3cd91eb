//! Lagrangians, exact actions and first variations.

use num_traits::Zero;

use crate::error::{Error, Result};
use crate::fields::{
    contract, covd_a, covd_k_coadjoint, cs_g, cs_ga, curv_f, curv_j, curv_k, dual_connection, gauge_variation, lower, wedge_right,
    FieldConfig, GaugeParams,
};
use crate::forms::{Form, InternalForm, Signature, Space, TorusIntegral};
use crate::jet::{tangent_part, value_part};
use crate::linalg;
use crate::rational::{q, qi, Q};
use crate::scalar::{Fourier, Scalar};
use crate::structure::{semidirect_split, CouplingData};

type IF<S> = InternalForm<S>;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum TheoryTag {
    Linear,
    AbelianCm2ndOrder,
    AbelianCm1stOrder,
    Full1stOrder,
    Full2ndOrder,
    Ymcm,
    YmcmDual,
    AbelianCmDual,
    Ftcm1stOrder,
    FtcmDual,
    Exft,
    ExftDual,
    ExftcmDual,
}

pub const THEORY_TAGS: [TheoryTag; 13] = [
    TheoryTag::Linear,
    TheoryTag::AbelianCm2ndOrder,
    TheoryTag::AbelianCm1stOrder,
    TheoryTag::Full1stOrder,
    TheoryTag::Full2ndOrder,
    TheoryTag::Ymcm,
    TheoryTag::YmcmDual,
    TheoryTag::AbelianCmDual,
    TheoryTag::Ftcm1stOrder,
    TheoryTag::FtcmDual,
    TheoryTag::Exft,
    TheoryTag::ExftDual,
    TheoryTag::ExftcmDual,
];

impl TheoryTag {
    pub fn name(self) -> &'static str {
        match self {
            TheoryTag::Linear => "Linear",
            TheoryTag::AbelianCm2ndOrder => "AbelianCM_2ndOrder",
            TheoryTag::AbelianCm1stOrder => "AbelianCM_1stOrder",
            TheoryTag::Full1stOrder => "Full_1stOrder",
            TheoryTag::Full2ndOrder => "Full_2ndOrder",
            TheoryTag::Ymcm => "YMCM",
            TheoryTag::YmcmDual => "YMCM_Dual",
            TheoryTag::AbelianCmDual => "AbelianCM_Dual",
            TheoryTag::Ftcm1stOrder => "FTCM_1stOrder",
            TheoryTag::FtcmDual => "FTCM_Dual",
            TheoryTag::Exft => "ExFT",
            TheoryTag::ExftDual => "ExFT_Dual",
            TheoryTag::ExftcmDual => "ExFTCM_Dual",
        }
    }

    /// Polynomial degree of the Lagrangian in the fields. Quartic except
    /// for the quadratic free theory and the squared Chern-Simons term.
    pub fn field_degree(self) -> usize {
        match self {
            TheoryTag::Linear => 2,
            TheoryTag::Ymcm => 6,
            _ => 4,
        }
    }

    pub fn from_name(s: &str) -> Result<Self> {
        THEORY_TAGS
            .into_iter()
            .find(|t| t.name() == s)
            .ok_or_else(|| Error::Param(format!("unknown theory {s}")))
    }

    /// Coupling constraints specific to the theory.
    pub fn check_couplings(self, cd: &CouplingData) -> Result<()> {
        let fail = |m: &str| Err(Error::Coupling(format!("{}: {m}", self.name())));
        let abelian_pair = cd.k == 1 && cd.kp == 1;
        let no_ft = cd.b.is_zero() && cd.c.is_zero();
        match self {
            TheoryTag::Linear | TheoryTag::Full1stOrder => Ok(()),
            TheoryTag::AbelianCm2ndOrder | TheoryTag::AbelianCm1stOrder | TheoryTag::AbelianCmDual => {
                if !abelian_pair || !cd.a.is_zero() || !no_ft {
                    return fail("needs k = k' = 1 with a = b = c = 0");
                }
                Ok(())
            }
            TheoryTag::Ymcm | TheoryTag::YmcmDual => {
                if cd.kp != 1 || !no_ft {
                    return fail("needs k' = 1 with b = c = 0");
                }
                Ok(())
            }
            TheoryTag::Full2ndOrder => Ok(()),
            TheoryTag::Ftcm1stOrder | TheoryTag::FtcmDual => {
                let s = semidirect_split(cd)?;
                if !s.charge.is_zero() || !cd.b.is_zero() {
                    return fail("needs b = 0");
                }
                Ok(())
            }
            TheoryTag::ExftcmDual => semidirect_split(cd).map(|_| ()),
            TheoryTag::Exft | TheoryTag::ExftDual => {
                if !cd.a.is_zero() || !cd.e.is_zero() {
                    return fail("needs a = 0 and e = 0");
                }
                Ok(())
            }
        }
    }
}

/// A theory: which Lagrangian, over which couplings, in which signature.
#[derive(Clone, Debug)]
pub struct Theory {
    pub tag: TheoryTag,
    pub couplings: CouplingData,
    pub signature: Signature,
}

impl Theory {
    pub fn new(tag: TheoryTag, couplings: CouplingData, signature: Signature) -> Result<Self> {
        tag.check_couplings(&couplings)?;
        Ok(Theory { tag, couplings, signature })
    }

    pub fn sigma(&self) -> Q {
        qi(self.signature.kinetic_sign())
    }
}

/// A 4-form kept as a sum of wedge products `c * alpha ^ beta`, so that
/// torus integrals need only zero modes of each product.
#[derive(Clone, Debug, Default)]
pub struct FourForm<S: Scalar> {
    pub terms: Vec<(Q, Form<S>, Form<S>)>,
}

impl<S: Scalar> FourForm<S> {
    pub fn new() -> Self {
        FourForm { terms: Vec::new() }
    }

    pub fn push(&mut self, c: Q, alpha: Form<S>, beta: Form<S>) {
        debug_assert_eq!(alpha.degree() + beta.degree(), 4);
        if !c.is_zero() && !alpha.is_zero() && !beta.is_zero() {
            self.terms.push((c, alpha, beta));
        }
    }

    /// `c * sum_i x^i ^ y^i`.
    pub fn push_dot(&mut self, c: &Q, x: &IF<S>, y: &IF<S>) {
        for (a, b) in x.entries.iter().zip(&y.entries) {
            self.push(c.clone(), a.clone(), b.clone());
        }
    }

    /// `*X ^ X` contracted with the metric of X's space.
    fn kinetic(&mut self, c: &Q, x: &IF<S>, cd: &CouplingData, sig: Signature) {
        self.push_dot(c, &x.hodge(sig), &lower(x, cd));
    }

    pub fn to_form(&self) -> Result<Form<S>> {
        let mut out = Form::zero(4);
        for (c, a, b) in &self.terms {
            out.axpy(c, &a.wedge(b)?);
        }
        Ok(out)
    }
}

impl FourForm<Fourier> {
    pub fn integrate(&self) -> Result<TorusIntegral> {
        let mut acc = Q::zero();
        for (c, a, b) in &self.terms {
            acc += c * a.integrate_wedge(b)?.0;
        }
        Ok(TorusIntegral(acc))
    }
}

fn check_signature<S: Scalar>(th: &Theory, fc: &FieldConfig<S>) -> Result<()> {
    if th.signature != fc.signature {
        return Err(Error::Inconsistent(format!(
            "fields in {} signature, theory in {}",
            fc.signature.name(),
            th.signature.name()
        )));
    }
    Ok(())
}

/// `*J J g + 2 B R g' + sigma *K K g' + 2 G K g'`.
fn first_order_terms<S: Scalar>(th: &Theory, fc: &FieldConfig<S>, l: &mut FourForm<S>) -> Result<()> {
    let cd = &th.couplings;
    let sig = th.signature;
    let j = curv_j(&fc.a, &fc.k, cd)?;
    l.kinetic(&qi(1), &j, cd, sig);
    let lk = lower(&fc.k, cd);
    l.push_dot(&qi(2), &fc.b, &lower(&curv_k(&fc.k, cd)?, cd));
    l.push_dot(&th.sigma(), &fc.k.hodge(sig), &lk);
    l.push_dot(&qi(2), &cs_g(&fc.a, &fc.k, cd)?, &lk);
    Ok(())
}

/// The S'-sector of the semidirect dual theories,
/// `sigma g'_S(*k, k - 2 ê dphi)`, plus `2(G^t + sigma *dphi) dphi`.
fn semidirect_dual_terms<S: Scalar>(
    th: &Theory,
    fc: &FieldConfig<S>,
    k_full: &IF<S>,
    l: &mut FourForm<S>,
) -> Result<()> {
    let cd = &th.couplings;
    let sig = th.signature;
    let sigma = th.sigma();
    let split = semidirect_split(cd)?;
    let dphi = fc.phi()?.d()?;
    let g = cs_g(&fc.a, k_full, cd)?;
    l.push(qi(2), g.entries[0].clone(), dphi.clone());
    l.push(&sigma * qi(2), dphi.hodge(sig), dphi.clone());
    let k = fc.chiral()?;
    let n = cd.kp - 1;
    for s in 0..n {
        let sk = k.entries[s].hodge(sig);
        for r in 0..n {
            let m = cd.gp.at2(s + 1, r + 1);
            if m.is_zero() {
                continue;
            }
            let mut v = k.entries[r].clone();
            v.axpy(&(&split.e_hat[r] * qi(-2)), &dphi);
            l.push(&sigma * m, sk.clone(), v);
        }
    }
    Ok(())
}

/// The Lagrangian of `th` as a sum of wedge products.
pub fn lagrangian_terms<S: Scalar>(th: &Theory, fc: &FieldConfig<S>) -> Result<FourForm<S>> {
    check_signature(th, fc)?;
    let cd = &th.couplings;
    let sig = th.signature;
    let one = qi(1);
    let mut l = FourForm::new();
    match th.tag {
        TheoryTag::Linear => {
            l.kinetic(&one, &fc.a.d()?, cd, sig);
            l.kinetic(&one, &fc.b.d()?, cd, sig);
        }
        TheoryTag::AbelianCm2ndOrder => {
            let f = fc.a.d()?;
            let efa = contract(Space::APrime, cd.kp, |i, j, m| cd.e.at3(i, j, m).clone(), &f, &fc.a)?;
            l.kinetic(&one, &f, cd, sig);
            l.kinetic(&one, &fc.b.d()?.sub(&efa), cd, sig);
        }
        TheoryTag::AbelianCm1stOrder | TheoryTag::Full1stOrder | TheoryTag::Ftcm1stOrder | TheoryTag::Exft => {
            first_order_terms(th, fc, &mut l)?;
        }
        TheoryTag::Full2ndOrder => {
            let hg = fc.b.d()?.sub(&cs_ga(&fc.a, cd)?);
            l.push_dot(&one, &fc.k, &lower(&hg, cd));
            let j = curv_j(&fc.a, &fc.k, cd)?;
            l.push_dot(&one, &j.hodge(sig), &lower(&curv_f(&fc.a, cd)?, cd));
        }
        TheoryTag::Ymcm => {
            l.kinetic(&one, &curv_f(&fc.a, cd)?, cd, sig);
            l.kinetic(&one, &fc.b.d()?.sub(&cs_ga(&fc.a, cd)?), cd, sig);
        }
        TheoryTag::YmcmDual | TheoryTag::AbelianCmDual => {
            l.kinetic(&one, &curv_f(&fc.a, cd)?, cd, sig);
            let gp = cd.gp.at2(0, 0);
            let dphi = fc.phi()?.d()?;
            let ga = cs_ga(&fc.a, cd)?;
            l.push(gp * qi(2), ga.entries[0].clone(), dphi.clone());
            l.push(gp * th.sigma(), dphi.hodge(sig), dphi);
        }
        TheoryTag::FtcmDual | TheoryTag::ExftcmDual => {
            let k = dual_connection(fc, th.tag, cd)?;
            l.kinetic(&one, &curv_j(&fc.a, &k, cd)?, cd, sig);
            semidirect_dual_terms(th, fc, &k, &mut l)?;
        }
        TheoryTag::ExftDual => {
            let k = fc.chiral()?;
            l.kinetic(&one, &curv_j(&fc.a, k, cd)?, cd, sig);
            l.kinetic(&th.sigma(), k, cd, sig);
        }
    }
    Ok(l)
}

pub fn lagrangian<S: Scalar>(th: &Theory, fc: &FieldConfig<S>) -> Result<Form<S>> {
    lagrangian_terms(th, fc)?.to_form()
}

/// Exact action, in units of `(2 pi)^4`.
pub fn action(th: &Theory, fc: &FieldConfig<Fourier>) -> Result<TorusIntegral> {
    lagrangian_terms(th, fc)?.integrate()
}

/// The action along `fc + eps * dir` as an exact polynomial in `eps`.
#[derive(Clone, Debug, PartialEq)]
pub struct VariationResult {
    /// `(eps, S(eps))` at the interpolation nodes and one extra check node.
    pub samples: Vec<(Q, Q)>,
    /// Coefficients of `eps^0 .. eps^n` with `n` the theory's field degree.
    pub coefficients: Vec<Q>,
    /// Whether the interpolant reproduces the extra node.
    pub consistent: bool,
}

impl VariationResult {
    pub fn first_order(&self) -> &Q {
        &self.coefficients[1]
    }

    pub fn degree(&self) -> usize {
        self.coefficients.iter().rposition(|c| !c.is_zero()).unwrap_or(0)
    }
}

const NODES: [i64; 7] = [0, 1, -1, 2, -2, 3, -3];

pub fn first_variation(th: &Theory, fc: &FieldConfig<Fourier>, dir: &FieldConfig<Fourier>) -> Result<VariationResult> {
    let n = th.tag.field_degree() + 1;
    let nodes = &NODES[..n];
    let check_node = nodes.iter().map(|e| e.abs()).max().unwrap_or(0) + 1;
    let eval = |e: i64| -> Result<Q> { Ok(action(th, &fc.axpy(&qi(e), dir))?.0) };
    let mut samples = Vec::new();
    for &e in nodes {
        samples.push((qi(e), eval(e)?));
    }
    let vander: Vec<Vec<Q>> = nodes
        .iter()
        .map(|&e| (0..n as u32).map(|p| qi(e.pow(p))).collect())
        .collect();
    let values: Vec<Q> = samples.iter().map(|(_, s)| s.clone()).collect();
    let coefficients = linalg::solve(&vander, &values)?;
    let check = eval(check_node)?;
    let predicted: Q = (0..n as u32).map(|p| &coefficients[p as usize] * qi(check_node.pow(p))).sum();
    samples.push((qi(check_node), check.clone()));
    Ok(VariationResult { samples, coefficients, consistent: predicted == check })
}

/// Exact derivative of the action at `eps = 0` along `fc + eps * dir`,
/// evaluated once on first-order jets. Agrees with the linear coefficient
/// of [`first_variation`] and is far cheaper for large directions.
pub fn first_variation_jet(th: &Theory, fc: &FieldConfig<Fourier>, dir: &FieldConfig<Fourier>) -> Result<Q> {
    let l = lagrangian_terms(th, &fc.jet(dir)?)?;
    let mut acc = Q::zero();
    for (c, a, b) in &l.terms {
        let (av, at) = (value_part(a), tangent_part(a));
        let (bv, bt) = (value_part(b), tangent_part(b));
        acc += c * (at.integrate_wedge(&bv)?.0 + av.integrate_wedge(&bt)?.0);
    }
    Ok(acc)
}

/// First variation of the action along the gauge symmetry `gp`;
/// invariance means it vanishes exactly.
pub fn check_gauge_invariance(
    th: &Theory,
    fc: &FieldConfig<Fourier>,
    gp: &GaugeParams<Fourier>,
) -> Result<Q> {
    let delta = gauge_variation(fc, gp, th.tag, &th.couplings)?;
    first_variation_jet(th, fc, &delta)
}

/// Which field a displayed field equation belongs to.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum ElField {
    A,
    B,
    Phi,
    /// the chiral field `U`, varied as `delta U = U X`
    Chiral,
}

/// One displayed field equation `R = 0`, with `R` lowered by the metric of
/// its space so that it pairs directly with field variations.
#[derive(Clone, Debug, PartialEq)]
pub struct ElResidual<S: Scalar> {
    pub field: ElField,
    pub residual: IF<S>,
}

/// A variation of the fields. For the chiral field the direction is the
/// algebra element `X` of `delta U = U X`, acting on `k = U^{-1} dU` by
/// `delta k = dX + [k, X]`.
#[derive(Clone, Debug, PartialEq)]
pub struct ElDirection<S: Scalar> {
    pub a: IF<S>,
    pub b: IF<S>,
    pub phi: Form<S>,
    pub chiral: Option<IF<S>>,
}

impl<S: Scalar> ElDirection<S> {
    /// The induced variation of the field configuration.
    pub fn to_fields(&self, fc: &FieldConfig<S>, cd: &CouplingData) -> Result<FieldConfig<S>> {
        let chiral = match &self.chiral {
            None => None,
            Some(x) => {
                let k = fc.chiral()?;
                let n = x.dim();
                let off = cd.kp - n;
                let rot = contract(Space::APrime, n, |s, r, q| cd.c.at3(r + off, q + off, s + off).clone(), k, x)?;
                Some(x.d()?.add(&rot))
            }
        };
        Ok(FieldConfig {
            a: self.a.clone(),
            b: self.b.clone(),
            k: IF::zero(Space::APrime, cd.kp, 1),
            phi: Some(self.phi.clone()),
            chiral,
            signature: fc.signature,
        })
    }
}

fn small_coef<R: rand::Rng>(rng: &mut R) -> Q {
    Q::new(rng.gen_range(-3i64..=3).into(), rng.gen_range(1i64..=3).into())
}

impl ElDirection<Fourier> {
    /// Random direction in the fields with displayed equations. Every
    /// component adds random multiples of a few sampled modes of the Hodge
    /// duals of all residual components of matching degree, so that
    /// low-cutoff directions still overlap the residuals' frequency support.
    pub fn random_with<R: rand::Rng>(rng: &mut R, th: &Theory, fc: &FieldConfig<Fourier>, cutoff: u32) -> Result<Self> {
        let cd = &th.couplings;
        let sig = th.signature;
        let residuals = el_residual(th, fc)?;
        let pool: Vec<Form<Fourier>> = residuals
            .iter()
            .flat_map(|r| r.residual.entries.iter().map(|x| x.hodge(sig)))
            .collect();
        let fields = el_fields(th.tag);
        let enrich = |f: ElField, mut base: IF<Fourier>, rng: &mut R| -> IF<Fourier> {
            if !fields.contains(&f) {
                return IF::zero(base.space, base.dim(), base.degree().unwrap_or(0));
            }
            for x in base.entries.iter_mut() {
                let deg = x.degree();
                for p in pool.iter().filter(|p| p.degree() == deg) {
                    let c = small_coef(rng);
                    let sampled = p.map_mut(|f| f.sample_modes(rng, 2));
                    x.axpy(&c, &sampled);
                }
            }
            base
        };
        let a = crate::forms::random_internal_with(rng, Space::A, 1, cd.k, cutoff);
        let a = enrich(ElField::A, a, rng);
        let b = crate::forms::random_internal_with(rng, Space::APrime, 2, cd.kp, cutoff);
        let b = enrich(ElField::B, b, rng);
        let phi = single(crate::forms::random_form_with(rng, 0, cutoff));
        let phi = enrich(ElField::Phi, phi, rng);
        let chiral = match th.tag {
            TheoryTag::FtcmDual | TheoryTag::ExftcmDual => {
                let x = crate::forms::random_internal_with(rng, Space::APrime, 0, cd.kp - 1, cutoff);
                Some(enrich(ElField::Chiral, x, rng))
            }
            _ => None,
        };
        Ok(ElDirection { a, b, phi: phi.entries[0].clone(), chiral })
    }
}

/// Fields with displayed field equations, per theory.
pub fn el_fields(tag: TheoryTag) -> &'static [ElField] {
    match tag {
        TheoryTag::AbelianCm2ndOrder | TheoryTag::Exft => &[ElField::A, ElField::B],
        TheoryTag::YmcmDual | TheoryTag::AbelianCmDual => &[ElField::A, ElField::Phi],
        TheoryTag::FtcmDual => &[ElField::A, ElField::Phi, ElField::Chiral],
        _ => &[],
    }
}

fn no_display(tag: TheoryTag) -> Error {
    Error::Inconsistent(format!("{} has no displayed field equations", tag.name()))
}

fn single<S: Scalar>(f: Form<S>) -> IF<S> {
    IF::new(Space::APrime, vec![f])
}

/// The displayed field equations of `th`, evaluated on `fc`.
pub fn el_residual<S: Scalar>(th: &Theory, fc: &FieldConfig<S>) -> Result<Vec<ElResidual<S>>> {
    check_signature(th, fc)?;
    let cd = &th.couplings;
    let sig = th.signature;
    let sigma = th.sigma();
    let zero_k = IF::zero(Space::APrime, cd.kp, 1);
    let mut out = Vec::new();
    match th.tag {
        TheoryTag::AbelianCm2ndOrder => {
            // d*F + e(2 F Pi - A dPi) = 0 and dPi = 0 with Pi = *(H - e F A).
            let (g, gp, e) = (cd.g.at2(0, 0), cd.gp.at2(0, 0), cd.e.at3(0, 0, 0));
            let a = &fc.a.entries[0];
            let f = a.d()?;
            let pi = fc.b.entries[0].d()?.sub(&f.wedge(a)?.scale(e)).hodge(sig);
            let dpi = pi.d()?;
            let mut ra = f.hodge(sig).d()?.scale(g);
            ra.axpy(&(e * gp), &f.wedge(&pi)?.scale(&qi(2)).sub(&a.wedge(&dpi)?));
            out.push(ElResidual { field: ElField::A, residual: IF::new(Space::A, vec![ra]) });
            out.push(ElResidual { field: ElField::B, residual: single(dpi.scale(gp)) });
        }
        TheoryTag::YmcmDual | TheoryTag::AbelianCmDual => {
            // D_A *F = -2 e F dphi and d*dphi = -sigma e(F, F).
            let gp = cd.gp.at2(0, 0);
            let f = curv_f(&fc.a, cd)?;
            let dphi = fc.phi()?.d()?;
            let dsf = covd_a(&f.hodge(sig), &fc.a, &zero_k, cd)?;
            let ef = crate::fields::transform(Space::A, cd.k, |a, c| cd.e.at3(0, a, c) * gp, &f);
            let ra = lower(&dsf, cd).add(&wedge_right(&ef, &dphi)?.scale(&qi(2)));
            let eff = contract(Space::APrime, 1, |_, b, c| cd.e.at3(0, b, c).clone(), &f, &f)?;
            let mut rphi = dphi.hodge(sig).d()?;
            rphi.axpy(&sigma, &eff.entries[0]);
            out.push(ElResidual { field: ElField::A, residual: ra });
            out.push(ElResidual { field: ElField::Phi, residual: single(rphi.scale(gp)) });
        }
        TheoryTag::Exft => {
            // D_K *J = 0 and dK + [K, K]/2 = 0.
            let j = curv_j(&fc.a, &fc.k, cd)?;
            let ra = covd_a(&j.hodge(sig), &fc.a, &fc.k, cd)?;
            out.push(ElResidual { field: ElField::A, residual: lower(&ra, cd) });
            out.push(ElResidual { field: ElField::B, residual: lower(&curv_k(&fc.k, cd)?, cd) });
        }
        TheoryTag::FtcmDual => {
            // d*F = -2 e F dphi, d*dphi = -sigma e F F and
            // d*k - [k, ê] *dphi + sigma e F F ê = 0 for k = U^{-1} dU.
            let split = semidirect_split(cd)?;
            let e = &split.e;
            let g = cd.g.at2(0, 0);
            let f = fc.a.entries[0].d()?;
            let dphi = fc.phi()?.d()?;
            let sdphi = dphi.hodge(sig);
            let ff = f.wedge(&f)?;
            let mut ra = f.hodge(sig).d()?.scale(g);
            ra.axpy(&(e * qi(2)), &f.wedge(&dphi)?);
            let mut rphi = sdphi.d()?;
            rphi.axpy(&(&sigma * e), &ff);
            let k = fc.chiral()?;
            let n = k.dim();
            let ehat = IF::new(
                Space::APrime,
                split.e_hat.iter().map(|x| Form::constant(x)).collect(),
            );
            let kxe = contract(Space::APrime, n, |s, r, q| cd.c.at3(r + 1, q + 1, s + 1).clone(), k, &ehat)?;
            let mut ru = k.hodge(sig).d()?.sub(&wedge_right(&kxe, &sdphi)?);
            for (s, x) in ru.entries.iter_mut().enumerate() {
                x.axpy(&(&sigma * e * &split.e_hat[s]), &ff);
            }
            let gs = |x: &IF<S>| crate::fields::transform(Space::APrime, n, |i, j| cd.gp.at2(i + 1, j + 1).clone(), x);
            out.push(ElResidual { field: ElField::A, residual: IF::new(Space::A, vec![ra]) });
            out.push(ElResidual { field: ElField::Phi, residual: single(rphi) });
            out.push(ElResidual { field: ElField::Chiral, residual: gs(&ru) });
        }
        _ => return Err(no_display(th.tag)),
    }
    Ok(out)
}

/// Frozen normalizations of the pairing terms, fixed once by
/// [`derive_el_constants`].
pub fn el_constants(th: &Theory) -> Result<Vec<Q>> {
    let s = th.sigma();
    Ok(match th.tag {
        TheoryTag::AbelianCm2ndOrder => vec![qi(2), qi(2)],
        TheoryTag::YmcmDual | TheoryTag::AbelianCmDual => vec![qi(2), qi(2) * &s],
        TheoryTag::Exft => vec![qi(2), qi(2)],
        TheoryTag::FtcmDual => vec![qi(2), qi(4) * &s, qi(-2) * &s, qi(2) * &s, qi(-2) * &s],
        _ => return Err(no_display(th.tag)),
    })
}

fn pair(v: &IF<Fourier>, r: &IF<Fourier>) -> Result<Q> {
    let mut acc = Q::zero();
    for (x, y) in v.entries.iter().zip(&r.entries) {
        acc += x.integrate_wedge(y)?.0;
    }
    Ok(acc)
}

/// The individual pairing integrals of the residuals with a direction,
/// before normalization.
pub fn el_pairing_terms(
    th: &Theory,
    residuals: &[ElResidual<Fourier>],
    dir: &ElDirection<Fourier>,
) -> Result<Vec<Q>> {
    let get = |f: ElField| -> Result<&IF<Fourier>> {
        residuals
            .iter()
            .find(|r| r.field == f)
            .map(|r| &r.residual)
            .ok_or(Error::MissingField("residual"))
    };
    let phi = || IF::new(Space::APrime, vec![dir.phi.clone()]);
    Ok(match th.tag {
        TheoryTag::AbelianCm2ndOrder | TheoryTag::Exft => {
            vec![pair(&dir.a, get(ElField::A)?)?, pair(&dir.b, get(ElField::B)?)?]
        }
        TheoryTag::YmcmDual | TheoryTag::AbelianCmDual => {
            vec![pair(&dir.a, get(ElField::A)?)?, pair(&phi(), get(ElField::Phi)?)?]
        }
        TheoryTag::FtcmDual => {
            let split = semidirect_split(&th.couplings)?;
            let x = dir.chiral.as_ref().ok_or(Error::MissingField("chiral direction"))?;
            let rphi = get(ElField::Phi)?;
            let ru = get(ElField::Chiral)?;
            let n = x.dim();
            let gp = &th.couplings.gp;
            // g_S(ê, X) and ê^s dphi-direction.
            let mut ex = Form::zero(0);
            for (s, xs) in x.entries.iter().enumerate() {
                let w: Q = (0..n).map(|r| gp.at2(r + 1, s + 1) * &split.e_hat[r]).sum();
                ex.axpy(&w, xs);
            }
            let ephi = IF::new(Space::APrime, split.e_hat.iter().map(|c| dir.phi.scale(c)).collect());
            vec![
                pair(&dir.a, get(ElField::A)?)?,
                pair(&phi(), rphi)?,
                pair(&IF::new(Space::APrime, vec![ex]), rphi)?,
                pair(x, ru)?,
                pair(&ephi, ru)?,
            ]
        }
        _ => return Err(no_display(th.tag)),
    })
}

/// Exact first variation along `dir` and the normalized pairing of the
/// displayed residuals with `dir`; they agree when the displays are the
/// Euler-Lagrange equations of the Lagrangian.
#[derive(Clone, Debug, PartialEq)]
pub struct PairingCheck {
    pub variation: Q,
    pub pairing: Q,
}

impl PairingCheck {
    pub fn passed(&self) -> bool {
        self.variation == self.pairing
    }
}

pub fn el_pairing_check(th: &Theory, fc: &FieldConfig<Fourier>, dir: &ElDirection<Fourier>) -> Result<PairingCheck> {
    let residuals = el_residual(th, fc)?;
    let terms = el_pairing_terms(th, &residuals, dir)?;
    let pairing = terms.iter().zip(el_constants(th)?).map(|(t, c)| t * c).sum();
    let variation = first_variation_jet(th, fc, &dir.to_fields(fc, &th.couplings)?)?;
    Ok(PairingCheck { variation, pairing })
}

/// Derivation oracle for the pairing normalizations: solves for the
/// constants that make the pairing reproduce the first variation over the
/// given directions. `None` if no constants do or the directions do not
/// determine them uniquely.
pub fn derive_el_constants(
    th: &Theory,
    fc: &FieldConfig<Fourier>,
    dirs: &[ElDirection<Fourier>],
) -> Result<Option<Vec<Q>>> {
    let residuals = el_residual(th, fc)?;
    let mut rows = Vec::new();
    let mut rhs = Vec::new();
    for d in dirs {
        rows.push(el_pairing_terms(th, &residuals, d)?);
        rhs.push(first_variation_jet(th, fc, &d.to_fields(fc, &th.couplings)?)?);
    }
    let cols = rows.first().map_or(0, Vec::len);
    if linalg::rank(&rows) < cols {
        return Ok(None);
    }
    Ok(linalg::solve_least(&rows, &rhs, cols))
}

/// The K field equation of the first-order theory, `K + *G - b^T *(A (*J + e A K)) - *D_K B`,
/// with `b^T`, `e^T` the metric transposes and `D_K` the co-adjoint action on B.
pub fn keq_residual<S: Scalar>(fc: &FieldConfig<S>, cd: &CouplingData) -> Result<IF<S>> {
    let sig = fc.signature;
    let (a, k) = (&fc.a, &fc.k);
    let em = cd.e_mixed();
    let bd = cd.b_dual();
    let eak = contract(Space::A, cd.k, |b, e, w| em.at3(w, e, b).clone(), a, k)?;
    let inner = curv_j(a, k, cd)?.hodge(sig).add(&eak);
    let bt = contract(Space::APrime, cd.kp, |p, c, b| bd.at3(b, p, c).clone(), a, &inner)?;
    let dkb = covd_k_coadjoint(&fc.b, k, cd)?;
    Ok(k.add(&cs_g(a, k, cd)?.hodge(sig)).sub(&bt.hodge(sig)).sub(&dkb.hodge(sig)))
}

/// `Y(K)` assembled block by block:
/// `K - c^T *(B K) + b^T b *(A *(A K)) + s (e b - e^T b^T) *(A A K)`,
/// with `s = -1` for the block sign forced by the K equation and `s = +1`
/// for the sign as commonly displayed.
pub fn ymap<S: Scalar>(fc: &FieldConfig<S>, cd: &CouplingData, e_block_sign: i64) -> Result<IF<S>> {
    let sig = fc.signature;
    let (a, k, b) = (&fc.a, &fc.k, &fc.b);
    let (kk, kp) = (cd.k, cd.kp);
    let ct = cd.c_transpose();
    let bd = cd.b_dual();
    let em = cd.e_mixed();
    // c^T_{a'b'c'} B^{c'} K^{b'}
    let bk = contract(Space::APrime, kp, |p, c, w| ct.at3(p, w, c).clone(), b, k)?;
    let mut out = k.sub(&bk.hodge(sig));
    // b_dual[b][a'][c] b^b_{b'd} *(A^c *(A^d K^{b'}))
    let ak = |d: usize, w: usize| -> Result<Form<S>> { a.entries[d].wedge(&k.entries[w]) };
    let mut third = IF::zero(Space::APrime, kp, 1);
    for c in 0..kk {
        // X_c^{a'} = sum_{d,b'} (sum_b bd[b][a'][c] b^b_{b'd}) *(A^d K^{b'})
        let mut x = IF::zero(Space::APrime, kp, 2);
        for d in 0..kk {
            for w in 0..kp {
                let mut hak: Option<Form<S>> = None;
                for (p, xp) in x.entries.iter_mut().enumerate() {
                    let coef: Q = (0..kk).map(|bb| bd.at3(bb, p, c) * cd.b.at3(bb, w, d)).sum();
                    if coef.is_zero() {
                        continue;
                    }
                    if hak.is_none() {
                        hak = Some(ak(d, w)?.hodge(sig));
                    }
                    xp.axpy(&coef, hak.as_ref().expect("set above"));
                }
            }
        }
        for (p, tp) in third.entries.iter_mut().enumerate() {
            if !x.entries[p].is_zero() {
                tp.add_assign(&a.entries[c].wedge(&x.entries[p])?.hodge(sig));
            }
        }
    }
    out = out.add(&third);
    // (e^{a'}_{bd} b^d_{b'c} - e_{b'b}^d b_dual[d][a'][c]) *(A^b A^c K^{b'})
    let mut fourth = IF::zero(Space::APrime, kp, 3);
    for bb in 0..kk {
        for c in 0..kk {
            if bb == c {
                continue;
            }
            let aa = a.entries[bb].wedge(&a.entries[c])?;
            if aa.is_zero() {
                continue;
            }
            for w in 0..kp {
                let mut aak: Option<Form<S>> = None;
                for (p, fp) in fourth.entries.iter_mut().enumerate() {
                    let coef: Q = (0..kk)
                        .map(|d| cd.e.at3(p, bb, d) * cd.b.at3(d, w, c) - em.at3(w, bb, d) * bd.at3(d, p, c))
                        .sum();
                    if coef.is_zero() {
                        continue;
                    }
                    if aak.is_none() {
                        aak = Some(aa.wedge(&k.entries[w])?);
                    }
                    fp.axpy(&coef, aak.as_ref().expect("set above"));
                }
            }
        }
    }
    out.axpy(&qi(e_block_sign), &fourth.hodge(sig));
    Ok(out)
}

/// `*H - *G_A + b^T *(A *F)`, the K-independent side of the K equation.
pub fn ymap_source<S: Scalar>(fc: &FieldConfig<S>, cd: &CouplingData, with_b_source: bool) -> Result<IF<S>> {
    let sig = fc.signature;
    let mut out = fc.b.d()?.sub(&cs_ga(&fc.a, cd)?).hodge(sig);
    if with_b_source {
        let bd = cd.b_dual();
        let sf = curv_f(&fc.a, cd)?.hodge(sig);
        let t = contract(Space::APrime, cd.kp, |p, c, b| bd.at3(b, p, c).clone(), &fc.a, &sf)?;
        out = out.add(&t.hodge(sig));
    }
    Ok(out)
}

/// Forward check of the K elimination: the K equation against
/// `Y(K) - source`, for the block-derived and the literal Y.
#[derive(Clone, Debug, PartialEq)]
pub struct YmapReport {
    pub keq: IF<Fourier>,
    pub derived: IF<Fourier>,
    /// `keq - (Y_literal(K) - (*H - *G_A))`; reported, not asserted.
    pub literal_discrepancy: IF<Fourier>,
}

impl YmapReport {
    pub fn passed(&self) -> bool {
        self.keq == self.derived
    }
}

pub fn ymap_residual_equivalence(fc: &FieldConfig<Fourier>, cd: &CouplingData) -> Result<YmapReport> {
    let keq = keq_residual(fc, cd)?;
    let derived = ymap(fc, cd, -1)?.sub(&ymap_source(fc, cd, true)?);
    let literal = ymap(fc, cd, 1)?.sub(&ymap_source(fc, cd, false)?);
    Ok(YmapReport { literal_discrepancy: keq.sub(&literal), keq, derived })
}

/// First variation of the first-order action along `delta K`, and the
/// pairing `int g'(delta K) ^ *keq` that it should equal up to the frozen
/// factor [`KEQ_CONSTANT`] times the kinetic sign.
pub fn keq_pairing(th: &Theory, fc: &FieldConfig<Fourier>, dk: &IF<Fourier>) -> Result<PairingCheck> {
    let mut dir = FieldConfig::zero(&th.couplings, fc.signature);
    dir.k = dk.clone();
    let variation = first_variation_jet(th, fc, &dir)?;
    let r = keq_residual(fc, &th.couplings)?;
    let raw = pair(&lower(dk, &th.couplings), &r.hodge(fc.signature))?;
    Ok(PairingCheck { variation, pairing: raw * qi(KEQ_CONSTANT) * th.sigma() })
}

pub const KEQ_CONSTANT: i64 = -2;

/// The four cubic first-order deformation terms.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum CubicTerm {
    /// `1/2 a_{abc} *F^a A^b A^c`
    Ym,
    /// `-1/2 c_{a'b'c'} *H^{a'} *H^{b'} B^{c'}`
    Ft,
    /// `b_{ab'c} *F^a *H^{b'} A^c`
    ExFt,
    /// `-e_{a'bc} *H^{a'} F^b A^c`
    Cm,
}

impl CubicTerm {
    pub const ALL: [CubicTerm; 4] = [CubicTerm::Ym, CubicTerm::Ft, CubicTerm::ExFt, CubicTerm::Cm];

    pub fn name(self) -> &'static str {
        match self {
            CubicTerm::Ym => "YM",
            CubicTerm::Ft => "FT",
            CubicTerm::ExFt => "exFT",
            CubicTerm::Cm => "CM",
        }
    }

    /// Parity sign `s` with `term(PA, PB) = s P(term(A, B))`.
    pub fn expected_sign(self) -> i64 {
        match self {
            CubicTerm::Ym | CubicTerm::Cm => -1,
            CubicTerm::Ft | CubicTerm::ExFt => 1,
        }
    }
}

/// The cubic deformation 4-form of one type with linear field strengths
/// `F = dA`, `H = dB`.
pub fn cubic_term<S: Scalar>(
    term: CubicTerm,
    a: &IF<S>,
    b: &IF<S>,
    cd: &CouplingData,
    sig: Signature,
) -> Result<Form<S>> {
    let f = a.d()?;
    let h = b.d()?;
    let mut out = Form::zero(4);
    let mut acc = |c: Q, x: &Form<S>, y: &Form<S>, z: &Form<S>| -> Result<()> {
        if !c.is_zero() {
            out.axpy(&c, &x.wedge(y)?.wedge(z)?);
        }
        Ok(())
    };
    match term {
        CubicTerm::Ym => {
            let al = cd.a_low();
            let sf = f.hodge(sig);
            for i in 0..cd.k {
                for j in 0..cd.k {
                    for l in 0..cd.k {
                        acc(al.at3(i, j, l) * q(1, 2), &sf.entries[i], &a.entries[j], &a.entries[l])?;
                    }
                }
            }
        }
        CubicTerm::Ft => {
            let cl = cd.c_low();
            let sh = h.hodge(sig);
            for i in 0..cd.kp {
                for j in 0..cd.kp {
                    for l in 0..cd.kp {
                        acc(cl.at3(i, j, l) * q(-1, 2), &sh.entries[i], &sh.entries[j], &b.entries[l])?;
                    }
                }
            }
        }
        CubicTerm::ExFt => {
            let bl = cd.b_low();
            let (sf, sh) = (f.hodge(sig), h.hodge(sig));
            for i in 0..cd.k {
                for j in 0..cd.kp {
                    for l in 0..cd.k {
                        acc(bl.at3(i, j, l).clone(), &sf.entries[i], &sh.entries[j], &a.entries[l])?;
                    }
                }
            }
        }
        CubicTerm::Cm => {
            let el = cd.e_low();
            let sh = h.hodge(sig);
            for i in 0..cd.kp {
                for j in 0..cd.k {
                    for l in 0..cd.k {
                        acc(-el.at3(i, j, l), &sh.entries[i], &f.entries[j], &a.entries[l])?;
                    }
                }
            }
        }
    }
    Ok(out)
}

/// Parity behaviour of one cubic term: `Some(s)` when
/// `term(PA, PB) = s P(term)` exactly with the term nonzero.
#[derive(Clone, Debug, PartialEq)]
pub struct ParitySign {
    pub term: CubicTerm,
    pub sign: Option<i64>,
}

impl ParitySign {
    pub fn passed(&self) -> bool {
        self.sign == Some(self.term.expected_sign())
    }
}

pub fn parity_check(cd: &CouplingData, sig: Signature, seed: u64, cutoff: u32) -> Result<Vec<ParitySign>> {
    let fc = FieldConfig::<Fourier>::random(cd, sig, seed, cutoff);
    let (pa, pb) = (fc.a.parity(), fc.b.parity());
    CubicTerm::ALL
        .iter()
        .map(|&term| {
            let t = cubic_term(term, &fc.a, &fc.b, cd, sig)?;
            let reflected = cubic_term(term, &pa, &pb, cd, sig)?;
            let pt = t.parity();
            let sign = if t.is_zero() {
                None
            } else if reflected == pt {
                Some(1)
            } else if reflected == pt.scale(&qi(-1)) {
                Some(-1)
            } else {
                None
            };
            Ok(ParitySign { term, sign })
        })
        .collect()
}

/// Couplings with every cubic term switched on: `k = k' = 3`,
/// `a = b = c = epsilon`, `e^{a'}_{bc} = delta_{bc}`, unit metrics.
pub fn parity_probe_couplings() -> CouplingData {
    use crate::structure::{epsilon3, Tensor};
    let eps = Tensor::from_fn(&[3, 3, 3], |x| qi(epsilon3(x[0], x[1], x[2])));
    let id = Tensor::diag(3, &qi(1));
    let mut cd = CouplingData::free(id.clone(), id).expect("unit metrics are valid");
    cd.a = eps.clone();
    cd.b = eps.clone();
    cd.c = eps;
    cd.e = Tensor::from_fn(&[3, 3, 3], |x| if x[1] == x[2] { qi(1) } else { Q::zero() });
    cd
}

/// The Lagrangian a tag collapses to when every coupling tensor vanishes:
/// the linear kinetic terms plus, for first-order tags, the free K-sector
/// `2 B dK + sigma *K K`. Semidirect dual tags have no zero-coupling limit.
pub fn free_lagrangian<S: Scalar>(th: &Theory, fc: &FieldConfig<S>) -> Result<Form<S>> {
    let cd = &th.couplings;
    let sig = th.signature;
    let one = qi(1);
    let mut l = FourForm::new();
    let da = fc.a.d()?;
    l.kinetic(&one, &da, cd, sig);
    match th.tag {
        TheoryTag::Linear | TheoryTag::AbelianCm2ndOrder | TheoryTag::Ymcm => {
            l.kinetic(&one, &fc.b.d()?, cd, sig);
        }
        TheoryTag::AbelianCm1stOrder | TheoryTag::Full1stOrder | TheoryTag::Ftcm1stOrder | TheoryTag::Exft => {
            l.push_dot(&qi(2), &fc.b, &lower(&fc.k.d()?, cd));
            l.push_dot(&th.sigma(), &fc.k.hodge(sig), &lower(&fc.k, cd));
        }
        TheoryTag::Full2ndOrder => l.push_dot(&one, &fc.k, &lower(&fc.b.d()?, cd)),
        TheoryTag::YmcmDual | TheoryTag::AbelianCmDual => {
            let dphi = fc.phi()?.d()?;
            l.push(cd.gp.at2(0, 0) * th.sigma(), dphi.hodge(sig), dphi);
        }
        TheoryTag::ExftDual => l.kinetic(&th.sigma(), fc.chiral()?, cd, sig),
        TheoryTag::FtcmDual | TheoryTag::ExftcmDual => {
            return Err(Error::Coupling(format!("{} has no zero-coupling limit", th.tag.name())))
        }
    }
    l.to_form()
}
