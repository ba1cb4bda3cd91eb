//! Seeded verification suites. Every check is exact; a check passes when
//! its residual is the rational zero.

use std::fmt;
use std::time::Instant;

use num_traits::Zero;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::actions::{
    check_gauge_invariance, derive_el_constants, el_constants, el_fields, el_pairing_check, free_lagrangian, keq_pairing,
    keq_residual, lagrangian, parity_check, parity_probe_couplings, ymap_residual_equivalence, CubicTerm, ElDirection,
    Theory, TheoryTag, THEORY_TAGS,
};
use crate::duality::{
    abelian_dual_roundtrip, adjoint_generators, b_generators, chern_relation_check_abelian, chern_residual_nonabelian,
    dilaton_scaling_check, exft_decoupling_check, flat_connection, ftcm_decoupling_residual, ftcm_dual_identity_checks,
    random_fields_for, Factor, GroupMap,
};
use crate::error::{Error, Result};
use crate::exppoly::ExpPoly;
use crate::fields::{contract, covd_k, cs_ga, curv_f, curv_k, FieldConfig, GaugeParams};
use crate::forms::{random_form_with, random_internal_with, Form, InternalForm, Signature, Space};
use crate::rational::{fmt_q, q, qi, Q};
use crate::scalar::Fourier;
use crate::structure::{
    check_all, construct_preset, mutate_entry, solve_e_given_abc, CouplingData, Preset, PresetParams, PRESETS,
};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum SuiteName {
    Structure,
    Invariance,
    El,
    Duality,
    Parity,
    All,
}

impl SuiteName {
    pub const ALL: [SuiteName; 6] = [
        SuiteName::Structure,
        SuiteName::Invariance,
        SuiteName::El,
        SuiteName::Duality,
        SuiteName::Parity,
        SuiteName::All,
    ];

    pub fn name(self) -> &'static str {
        match self {
            SuiteName::Structure => "structure",
            SuiteName::Invariance => "invariance",
            SuiteName::El => "el",
            SuiteName::Duality => "duality",
            SuiteName::Parity => "parity",
            SuiteName::All => "all",
        }
    }

    pub fn from_name(s: &str) -> Result<Self> {
        Self::ALL
            .into_iter()
            .find(|x| x.name() == s)
            .ok_or_else(|| Error::Parse(format!("unknown suite {s:?}")))
    }

    /// The concrete suites this name stands for.
    pub fn members(self) -> Vec<SuiteName> {
        match self {
            SuiteName::All => Self::ALL[..5].to_vec(),
            s => vec![s],
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Status {
    Pass,
    Fail,
    /// Reported residual with no pass/fail meaning.
    Info,
}

impl Status {
    pub fn name(self) -> &'static str {
        match self {
            Status::Pass => "pass",
            Status::Fail => "fail",
            Status::Info => "info",
        }
    }

    pub fn from_name(s: &str) -> Result<Self> {
        match s {
            "pass" => Ok(Status::Pass),
            "fail" => Ok(Status::Fail),
            "info" => Ok(Status::Info),
            _ => Err(Error::Parse(format!("unknown status {s:?}"))),
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct CheckOutcome {
    pub name: String,
    pub theory: Option<String>,
    pub seed: u64,
    pub status: Status,
    /// `"0"` or a description of the first nonzero residual.
    pub residual: String,
    pub wall_time_ms: u64,
}

impl fmt::Display for CheckOutcome {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} {} residual {}", self.status.name(), self.name, self.residual)
    }
}

/// What the suites run against: the five presets with each check on its
/// natural preset in both signatures, or one user configuration.
#[derive(Clone, Debug)]
pub enum Target {
    Presets,
    Config { couplings: CouplingData, signature: Signature },
}

#[derive(Clone, Debug)]
pub struct SuiteOptions {
    pub seed: u64,
    pub cutoff: u32,
    pub invariance_seeds: usize,
    pub el_directions: usize,
    pub ymap_seeds: usize,
    pub identity_seeds: usize,
    pub mutations: usize,
    pub duality_seeds: usize,
}

impl Default for SuiteOptions {
    fn default() -> Self {
        SuiteOptions {
            seed: 0,
            cutoff: 1,
            invariance_seeds: 50,
            el_directions: 20,
            ymap_seeds: 50,
            identity_seeds: 100,
            mutations: 20,
            duality_seeds: 10,
        }
    }
}

/// Runs `suite` and returns its checks sorted by name.
pub fn run_suite(suite: SuiteName, target: &Target, opts: &SuiteOptions) -> Vec<CheckOutcome> {
    let mut jobs: Vec<Job> = Vec::new();
    for s in suite.members() {
        match s {
            SuiteName::Structure => structure_jobs(target, opts, &mut jobs),
            SuiteName::Invariance => invariance_jobs(target, opts, &mut jobs),
            SuiteName::El => el_jobs(target, opts, &mut jobs),
            SuiteName::Duality => duality_jobs(opts, &mut jobs),
            SuiteName::Parity => parity_jobs(opts, &mut jobs),
            SuiteName::All => unreachable!("expanded by members"),
        }
    }
    let mut out: Vec<CheckOutcome> = jobs.into_par_iter().map(|j| j.run(opts.seed)).collect();
    out.sort_by(|a, b| a.name.cmp(&b.name));
    out
}

/// Structure checks of one configuration, one per relation.
pub fn structure_checks(cd: &CouplingData) -> Vec<CheckOutcome> {
    check_all(cd)
        .checks
        .iter()
        .map(|c| CheckOutcome {
            name: format!("structure.{}", c.name),
            theory: None,
            seed: 0,
            status: if c.passed() { Status::Pass } else { Status::Fail },
            residual: c.summary(),
            wall_time_ms: 0,
        })
        .collect()
}

pub fn all_passed(checks: &[CheckOutcome]) -> bool {
    checks.iter().all(|c| c.status != Status::Fail)
}

/// The preset each theory is exercised on.
pub fn preset_for(tag: TheoryTag) -> Preset {
    match tag {
        TheoryTag::Linear
        | TheoryTag::Ymcm
        | TheoryTag::YmcmDual
        | TheoryTag::Full1stOrder
        | TheoryTag::Full2ndOrder => Preset::Su2Ymcm,
        TheoryTag::AbelianCm2ndOrder | TheoryTag::AbelianCm1stOrder | TheoryTag::AbelianCmDual => Preset::U1Cm,
        TheoryTag::Ftcm1stOrder | TheoryTag::FtcmDual => Preset::FtCmSemidirect,
        TheoryTag::Exft | TheoryTag::ExftDual => Preset::ExftAdjoint,
        TheoryTag::ExftcmDual => Preset::ExftCmSemidirect,
    }
}

/// Whether the B gauge symmetry acts in `tag`.
pub fn has_chi_symmetry(tag: TheoryTag) -> bool {
    !matches!(
        tag,
        TheoryTag::YmcmDual | TheoryTag::AbelianCmDual | TheoryTag::FtcmDual | TheoryTag::ExftDual | TheoryTag::ExftcmDual
    )
}

fn preset(p: Preset) -> CouplingData {
    construct_preset(p, &PresetParams::default()).expect("presets are valid")
}

fn signature_of(i: usize) -> Signature {
    if i % 2 == 0 {
        Signature::LORENTZIAN
    } else {
        Signature::EUCLIDEAN
    }
}

/// Deterministic per-check RNG, independent of execution order.
fn rng_for(seed: u64, name: &str, i: usize) -> ChaCha8Rng {
    let mut h: u64 = 0xcbf2_9ce4_8422_2325;
    for b in name.bytes() {
        h = (h ^ b as u64).wrapping_mul(0x0100_0000_01b3);
    }
    let mix = seed.wrapping_mul(0x9e37_79b9_7f4a_7c15) ^ h ^ (i as u64).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    ChaCha8Rng::seed_from_u64(mix)
}

type Body = Box<dyn Fn(u64) -> Result<(Status, String)> + Send>;

struct Job {
    name: String,
    theory: Option<String>,
    body: Body,
}

impl Job {
    fn run(self, seed: u64) -> CheckOutcome {
        let start = Instant::now();
        let (status, residual) = match (self.body)(seed) {
            Ok(r) => r,
            Err(e) => (Status::Fail, format!("error: {e}")),
        };
        CheckOutcome {
            name: self.name,
            theory: self.theory,
            seed,
            status,
            residual,
            wall_time_ms: start.elapsed().as_millis() as u64,
        }
    }
}

fn job(jobs: &mut Vec<Job>, name: String, theory: Option<TheoryTag>, body: impl Fn(u64) -> Result<(Status, String)> + Send + 'static) {
    jobs.push(Job { name, theory: theory.map(|t| t.name().to_string()), body: Box::new(body) });
}

/// Runs `n` seeded trials; each returns `None` on success or a residual
/// description. The check passes when every trial does.
fn trials(
    seed: u64,
    name: &str,
    n: usize,
    mut f: impl FnMut(usize, &mut ChaCha8Rng) -> Result<Option<String>>,
) -> Result<(Status, String)> {
    for i in 0..n {
        let mut rng = rng_for(seed, name, i);
        if let Some(r) = f(i, &mut rng)? {
            return Ok((Status::Fail, format!("trial {i}: {r}")));
        }
    }
    Ok((Status::Pass, "0".into()))
}

fn nonzero<T: fmt::Display>(zero: bool, r: &T) -> Option<String> {
    if zero {
        None
    } else {
        Some(truncate(r.to_string()))
    }
}

fn truncate(mut s: String) -> String {
    const MAX: usize = 160;
    if s.len() > MAX {
        let mut cut = MAX;
        while !s.is_char_boundary(cut) {
            cut -= 1;
        }
        s.truncate(cut);
        s.push_str("...");
    }
    s
}

fn q_residual(r: &Q) -> Option<String> {
    if r.is_zero() {
        None
    } else {
        Some(fmt_q(r))
    }
}

fn small_q<R: Rng>(rng: &mut R) -> Q {
    q(rng.gen_range(-3..=3), rng.gen_range(1..=3))
}

// structure

fn structure_jobs(target: &Target, opts: &SuiteOptions, jobs: &mut Vec<Job>) {
    identity_jobs(opts, jobs);
    let configs: Vec<(String, CouplingData)> = match target {
        Target::Presets => PRESETS.iter().map(|&p| (p.name().to_string(), preset(p))).collect(),
        Target::Config { couplings, .. } => vec![("config".to_string(), couplings.clone())],
    };
    for (label, cd) in configs {
        for rel in check_all(&cd).checks {
            let name = format!("structure.{label}.{}", rel.name);
            job(jobs, name, None, move |_| {
                Ok((if rel.passed() { Status::Pass } else { Status::Fail }, rel.summary()))
            });
        }
        if matches!(target, Target::Presets) {
            let n = opts.mutations;
            let name = format!("structure.{label}.mutations");
            let cd2 = cd.clone();
            job(jobs, name.clone(), None, move |seed| {
                let mut rng = rng_for(seed, &name, 0);
                for i in 0..n {
                    let (m, t, idx, v) = mutate_entry(&cd2, &mut rng);
                    if check_all(&m).passed() {
                        return Ok((Status::Fail, format!("mutation {i} of {}{idx:?} to {} undetected", t.name(), fmt_q(&v))));
                    }
                }
                Ok((Status::Pass, "0".into()))
            });
        }
    }
    match target {
        Target::Presets => {
            job(jobs, "structure.esolve.exft-adjoint".into(), None, |_| {
                let sol = solve_e_given_abc(&preset(Preset::ExftAdjoint))?;
                let ok = sol.nontrivial_dim() == 0;
                Ok((status(ok), format!("nontrivial {} of {} (coboundaries {})", sol.nontrivial_dim(), sol.dim(), sol.trivial.len())))
            });
            job(jobs, "structure.esolve.su2-ymcm".into(), None, |_| {
                let cd = preset(Preset::Su2Ymcm);
                let sol = solve_e_given_abc(&cd)?;
                let ok = sol.nontrivial_dim() == 1 && sol.contains(&cd.e);
                Ok((status(ok), format!("nontrivial {} of {} contains preset e {}", sol.nontrivial_dim(), sol.dim(), sol.contains(&cd.e))))
            });
        }
        Target::Config { couplings, .. } => {
            let cd = couplings.clone();
            job(jobs, "structure.esolve.config".into(), None, move |_| {
                Ok(match solve_e_given_abc(&cd) {
                    Ok(sol) => (
                        Status::Info,
                        format!("nontrivial {} of {} contains e {}", sol.nontrivial_dim(), sol.dim(), sol.contains(&cd.e)),
                    ),
                    Err(e) => (Status::Info, format!("no solve: {e}")),
                })
            });
        }
    }
}

fn status(ok: bool) -> Status {
    if ok {
        Status::Pass
    } else {
        Status::Fail
    }
}

fn identity_jobs(opts: &SuiteOptions, jobs: &mut Vec<Job>) {
    let (n, cutoff) = (opts.identity_seeds, opts.cutoff);
    job(jobs, "identity.dd".into(), None, move |seed| {
        trials(seed, "identity.dd", n, |i, rng| {
            let w: Form<Fourier> = random_form_with(rng, i % 3, cutoff);
            let dd = w.d()?.d()?;
            Ok(nonzero(dd.is_zero(), &dd))
        })
    });
    job(jobs, "identity.star_squared".into(), None, move |seed| {
        trials(seed, "identity.star_squared", n, |i, rng| {
            let sig = signature_of(i);
            let p = i % 5;
            let w: Form<Fourier> = random_form_with(rng, p, cutoff);
            let r = w.hodge(sig).hodge(sig).sub(&w.scale(&qi(sig.star_squared(p))));
            Ok(nonzero(r.is_zero(), &r))
        })
    });
    job(jobs, "identity.stokes".into(), None, move |seed| {
        trials(seed, "identity.stokes", n, |_, rng| {
            let w: Form<Fourier> = random_form_with(rng, 3, cutoff);
            Ok(q_residual(&w.d()?.integrate()?.0))
        })
    });
    job(jobs, "identity.chern_simons".into(), None, move |seed| {
        trials(seed, "identity.chern_simons", n, |i, rng| {
            let cd = preset(PRESETS[i % PRESETS.len()]);
            let a = random_internal_with::<Fourier, _>(rng, Space::A, 1, cd.k, cutoff);
            let f = curv_f(&a, &cd)?;
            let lhs = cs_ga(&a, &cd)?.d()?;
            let rhs = contract(Space::APrime, cd.kp, |x, y, z| cd.e.at3(x, y, z).clone(), &f, &f)?;
            let r = lhs.sub(&rhs);
            Ok(nonzero(r.is_zero(), &r))
        })
    });
    job(jobs, "identity.bianchi".into(), None, move |seed| {
        trials(seed, "identity.bianchi", n, |i, rng| {
            let cd = preset(PRESETS[i % PRESETS.len()]);
            let k = random_internal_with::<Fourier, _>(rng, Space::APrime, 1, cd.kp, cutoff);
            let r = covd_k(&curv_k(&k, &cd)?, &k, &cd)?;
            Ok(nonzero(r.is_zero(), &r))
        })
    });
}

// invariance

/// Theories exercised against `target`, with their couplings.
fn theories(target: &Target) -> Vec<(TheoryTag, CouplingData, Option<Signature>)> {
    THEORY_TAGS
        .iter()
        .filter_map(|&tag| match target {
            Target::Presets => Some((tag, preset(preset_for(tag)), None)),
            Target::Config { couplings, signature } => {
                Theory::new(tag, couplings.clone(), *signature).ok().map(|_| (tag, couplings.clone(), Some(*signature)))
            }
        })
        .collect()
}

fn invariance_jobs(target: &Target, opts: &SuiteOptions, jobs: &mut Vec<Job>) {
    let (n, cutoff) = (opts.invariance_seeds, opts.cutoff);
    for (tag, cd, fixed_sig) in theories(target) {
        let mut symmetries = vec!["xi"];
        if has_chi_symmetry(tag) {
            symmetries.push("chi");
        }
        for sym in symmetries {
            let name = format!("invariance.{}.{sym}", tag.name());
            let cd = cd.clone();
            job(jobs, name.clone(), Some(tag), move |seed| {
                trials(seed, &name, n, |i, rng| {
                    let sig = fixed_sig.unwrap_or_else(|| signature_of(i));
                    let th = Theory::new(tag, cd.clone(), sig)?;
                    let fc = random_fields_for(tag, &cd, sig, rng, cutoff, 2)?;
                    let gp = GaugeParams::random_with(rng, &cd, cutoff);
                    let gp = if sym == "xi" { gp.xi_only(&cd) } else { gp.chi_only(&cd) };
                    Ok(q_residual(&check_gauge_invariance(&th, &fc, &gp)?))
                })
            });
        }
        if matches!(tag, TheoryTag::FtcmDual | TheoryTag::ExftcmDual) {
            continue;
        }
        let name = format!("invariance.{}.zero_coupling", tag.name());
        let seeds = opts.duality_seeds;
        job(jobs, name.clone(), Some(tag), move |seed| {
            trials(seed, &name, seeds, |i, rng| {
                let sig = fixed_sig.unwrap_or_else(|| signature_of(i));
                let zero = CouplingData::free(cd.g.clone(), cd.gp.clone())?;
                let th = Theory { tag, couplings: zero.clone(), signature: sig };
                let mut fc = FieldConfig::<Fourier>::random_with(rng, &zero, sig, cutoff);
                if tag == TheoryTag::ExftDual {
                    fc.chiral = Some(random_internal_with(rng, Space::APrime, 1, zero.kp, cutoff));
                }
                let r = lagrangian(&th, &fc)?.sub(&free_lagrangian(&th, &fc)?);
                Ok(nonzero(r.is_zero(), &r))
            })
        });
    }
}

// field equations

fn el_jobs(target: &Target, opts: &SuiteOptions, jobs: &mut Vec<Job>) {
    let (n, cutoff) = (opts.el_directions, opts.cutoff);
    for (tag, cd, fixed_sig) in theories(target) {
        if el_fields(tag).is_empty() {
            continue;
        }
        let name = format!("el.{}.pairing", tag.name());
        let cd2 = cd.clone();
        job(jobs, name.clone(), Some(tag), move |seed| {
            trials(seed, &name, n, |i, rng| {
                let sig = fixed_sig.unwrap_or_else(|| signature_of(i));
                let th = Theory::new(tag, cd2.clone(), sig)?;
                let fc = random_fields_for(tag, &cd2, sig, rng, cutoff, 2)?;
                let dir = ElDirection::random_with(rng, &th, &fc, cutoff)?;
                let c = el_pairing_check(&th, &fc, &dir)?;
                Ok((!c.passed()).then(|| format!("variation {} pairing {}", fmt_q(&c.variation), fmt_q(&c.pairing))))
            })
        });
        let name = format!("el.{}.constants", tag.name());
        job(jobs, name.clone(), Some(tag), move |seed| {
            let sigs: Vec<Signature> = match fixed_sig {
                Some(s) => vec![s],
                None => vec![Signature::LORENTZIAN, Signature::EUCLIDEAN],
            };
            for sig in sigs {
                let mut rng = rng_for(seed, &name, 0);
                let th = Theory::new(tag, cd.clone(), sig)?;
                let fc = random_fields_for(tag, &cd, sig, &mut rng, cutoff, 2)?;
                let width = el_constants(&th)?.len();
                // some pairing terms are nearly collinear; add directions
                // until they are separated
                let mut dirs = Vec::new();
                let mut derived = None;
                while derived.is_none() && dirs.len() < 8 * width {
                    for _ in 0..width {
                        dirs.push(ElDirection::random_with(&mut rng, &th, &fc, cutoff)?);
                    }
                    derived = derive_el_constants(&th, &fc, &dirs)?;
                }
                let frozen = el_constants(&th)?;
                match derived {
                    None => return Ok((Status::Fail, format!("{}: constants not determined", sig.name()))),
                    Some(d) if d != frozen => {
                        let show = |v: &[Q]| v.iter().map(fmt_q).collect::<Vec<_>>().join(",");
                        return Ok((Status::Fail, format!("{}: derived [{}] frozen [{}]", sig.name(), show(&d), show(&frozen))));
                    }
                    _ => {}
                }
            }
            Ok((Status::Pass, "0".into()))
        });
    }
    let full: Vec<CouplingData> = match target {
        Target::Presets => PRESETS.iter().map(|&p| preset(p)).collect(),
        Target::Config { couplings, signature } => {
            if Theory::new(TheoryTag::Full1stOrder, couplings.clone(), *signature).is_err() {
                return;
            }
            vec![couplings.clone()]
        }
    };
    let fixed_sig = match target {
        Target::Presets => None,
        Target::Config { signature, .. } => Some(*signature),
    };
    let n = opts.ymap_seeds;
    let configs = full.clone();
    job(jobs, "el.ymap".into(), Some(TheoryTag::Full1stOrder), move |seed| {
        trials(seed, "el.ymap", n, |i, rng| {
            let cd = &configs[i % configs.len()];
            let sig = fixed_sig.unwrap_or_else(|| signature_of(i / configs.len()));
            let fc = FieldConfig::random_with(rng, cd, sig, cutoff);
            let r = ymap_residual_equivalence(&fc, cd)?;
            let diff = r.keq.sub(&r.derived);
            Ok(nonzero(r.passed(), &diff))
        })
    });
    let n = opts.duality_seeds;
    job(jobs, "el.keq_pairing".into(), Some(TheoryTag::Full1stOrder), move |seed| {
        trials(seed, "el.keq_pairing", n, |i, rng| {
            let cd = &full[i % full.len()];
            let sig = fixed_sig.unwrap_or_else(|| signature_of(i / full.len()));
            let th = Theory::new(TheoryTag::Full1stOrder, cd.clone(), sig)?;
            let fc = FieldConfig::random_with(rng, cd, sig, cutoff);
            let mut dk = random_internal_with(rng, Space::APrime, 1, cd.kp, cutoff);
            dk.axpy(&small_q(rng), &keq_residual(&fc, cd)?);
            let c = keq_pairing(&th, &fc, &dk)?;
            Ok((!c.passed()).then(|| format!("variation {} pairing {}", fmt_q(&c.variation), fmt_q(&c.pairing))))
        })
    });
}

// duality

fn random_factors<R: Rng>(rng: &mut R, dim: usize, count: usize, cutoff: u32) -> Vec<Factor> {
    let c = cutoff.max(1) as i32;
    (0..count)
        .map(|_| {
            let mut freq = [0i32; 4];
            while freq == [0; 4] {
                for f in freq.iter_mut() {
                    *f = rng.gen_range(-c..=c);
                }
            }
            Factor { axis: rng.gen_range(0..dim), freq }
        })
        .collect()
}

fn duality_jobs(opts: &SuiteOptions, jobs: &mut Vec<Job>) {
    let (n, cutoff) = (opts.duality_seeds, opts.cutoff);
    job(jobs, "duality.flatness".into(), None, move |seed| {
        trials(seed, "duality.flatness", n, |i, rng| {
            let (cd, offset) = if i % 2 == 0 {
                (preset(Preset::ExftAdjoint), 0)
            } else {
                (preset(Preset::FtCmSemidirect), 1)
            };
            let u = GroupMap::random(rng, adjoint_generators(&cd, offset), 3, cutoff)?;
            if !u.inverse_holds() {
                return Ok(Some("U U^-1 != 1".into()));
            }
            let k = flat_connection(&u, Space::APrime)?;
            // S'-valued connections sit in A' with zero t component
            let mut entries = vec![Form::zero(1); offset];
            entries.extend(k.entries);
            let full = InternalForm::new(Space::APrime, entries);
            let r = curv_k(&full, &cd)?;
            Ok(nonzero(r.is_zero(), &r))
        })
    });
    job(jobs, "duality.exft_decoupling".into(), None, move |seed| {
        trials(seed, "duality.exft_decoupling", n, |i, rng| {
            let cd = preset(Preset::ExftAdjoint);
            let f = random_factors(rng, cd.kp, 2, cutoff);
            let ua = GroupMap::from_factors(adjoint_generators(&cd, 0), &f)?;
            let ub = GroupMap::from_factors(b_generators(&cd), &f)?;
            let a = random_internal_with(rng, Space::A, 1, cd.k, cutoff);
            let r = exft_decoupling_check(&ua, &ub, &a, &cd, signature_of(i))?;
            Ok((!r.passed()).then(|| truncate(format!("strength {} field equation {}", r.strength, r.field_equation))))
        })
    });
    job(jobs, "duality.dilaton_scaling".into(), None, move |seed| {
        trials(seed, "duality.dilaton_scaling", n, |_, rng| {
            let lambda = [small_q(rng), small_q(rng), small_q(rng), small_q(rng)];
            let phi = ExpPoly::linear(&lambda);
            let a: Form<ExpPoly> = random_form_with(rng, 1, cutoff + 1);
            let r = dilaton_scaling_check(&phi, &a)?;
            Ok(nonzero(r.is_zero(), &r))
        })
    });
    job(jobs, "duality.chern_abelian".into(), None, move |seed| {
        trials(seed, "duality.chern_abelian", n, |i, rng| {
            let cd = preset(Preset::ExftCmSemidirect);
            let phi: Form<Fourier> = random_form_with(rng, 0, cutoff);
            let a: Form<Fourier> = random_form_with(rng, 1, cutoff);
            let r = chern_relation_check_abelian(&phi, &a, &cd, signature_of(i))?;
            Ok(nonzero(r.passed(), &r.residual()))
        })
    });
    job(jobs, "duality.abelian_roundtrip.fourier".into(), None, move |seed| {
        trials(seed, "duality.abelian_roundtrip.fourier", n, |i, rng| {
            let cd = preset(Preset::U1Cm);
            let sig = signature_of(i);
            let fc = FieldConfig::<Fourier>::random_with(rng, &cd, sig, cutoff);
            let r = abelian_dual_roundtrip(&fc, &cd, sig)?;
            Ok(nonzero(r.is_zero(), &r))
        })
    });
    job(jobs, "duality.abelian_roundtrip.exppoly".into(), None, move |seed| {
        trials(seed, "duality.abelian_roundtrip.exppoly", n, |i, rng| {
            let cd = preset(Preset::U1Cm);
            let sig = signature_of(i);
            let fc = FieldConfig::<ExpPoly>::random_with(rng, &cd, sig, cutoff);
            let r = abelian_dual_roundtrip(&fc, &cd, sig)?;
            Ok(nonzero(r.is_zero(), &r))
        })
    });
    job(jobs, "duality.ftcm_dual".into(), Some(TheoryTag::FtcmDual), move |seed| {
        trials(seed, "duality.ftcm_dual", n, |i, rng| {
            let cd = preset(Preset::FtCmSemidirect);
            let fc = random_fields_for(TheoryTag::FtcmDual, &cd, signature_of(i), rng, cutoff, 2)?;
            let r = ftcm_dual_identity_checks(&fc, &cd)?;
            Ok((!r.passed()).then(|| truncate(format!("curvature {} lagrangian {}", r.curvature, r.lagrangian))))
        })
    });
    job(jobs, "duality.ftcm_decoupling".into(), Some(TheoryTag::FtcmDual), move |seed| {
        trials(seed, "duality.ftcm_decoupling", n, |i, rng| {
            let cd = preset(Preset::FtCmSemidirect);
            let fc = random_fields_for(TheoryTag::FtcmDual, &cd, signature_of(i), rng, cutoff, 2)?;
            let r = ftcm_decoupling_residual(&fc, &cd)?;
            Ok(nonzero(r.is_zero(), &r))
        })
    });
    job(jobs, "duality.chern_nonabelian".into(), None, move |seed| {
        let cd = preset(Preset::Su2Ymcm);
        let mut rng = rng_for(seed, "duality.chern_nonabelian", 0);
        let fc = FieldConfig::<Fourier>::random_with(&mut rng, &cd, Signature::LORENTZIAN, cutoff);
        let r = chern_residual_nonabelian(&fc, &cd, Signature::LORENTZIAN)?;
        Ok((Status::Info, if r.is_zero() { "0".into() } else { truncate(r.to_string()) }))
    });
}

// parity

fn parity_jobs(opts: &SuiteOptions, jobs: &mut Vec<Job>) {
    let cutoff = opts.cutoff;
    for term in CubicTerm::ALL {
        let name = format!("parity.{}", term.name());
        job(jobs, name.clone(), None, move |seed| {
            let cd = parity_probe_couplings();
            let mut seen = Vec::new();
            for i in 0..4 {
                let sig = signature_of(i);
                let s = rng_for(seed, &name, i).gen();
                let sign = parity_check(&cd, sig, s, cutoff)?
                    .into_iter()
                    .find(|p| p.term == term)
                    .and_then(|p| p.sign);
                seen.push(sign);
            }
            let want = Some(term.expected_sign());
            let shown = |s: &Option<i64>| s.map_or("none".to_string(), |v| format!("{v:+}"));
            if seen.iter().all(|s| *s == want) {
                Ok((Status::Pass, format!("sign {}", shown(&want))))
            } else {
                let list: Vec<String> = seen.iter().map(shown).collect();
                Ok((Status::Fail, format!("signs [{}] expected {}", list.join(","), shown(&want))))
            }
        });
    }
}
