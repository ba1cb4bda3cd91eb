//! Differential forms on flat four-dimensional space.
//!
//! Components are stored over strictly increasing multi-indices, encoded as
//! 4-bit masks. Orientation is fixed by `dx^0 ^ dx^1 ^ dx^2 ^ dx^3` having
//! `epsilon_{0123} = +1`; the Lorentzian metric is `diag(-1, +1, +1, +1)`.

use std::fmt;
use std::sync::OnceLock;

use num_traits::Zero;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::fourier::Fourier;
use crate::rational::{qi, Q};
use crate::scalar::Scalar;

pub const DIM: usize = 4;

struct Tables {
    /// masks of each degree, in lexicographic order of their index lists
    basis: [Vec<u8>; 5],
    /// position of a mask inside `basis[popcount]`
    position: [usize; 16],
}

fn tables() -> &'static Tables {
    static T: OnceLock<Tables> = OnceLock::new();
    T.get_or_init(|| {
        let mut basis: [Vec<u8>; 5] = Default::default();
        let mut masks: Vec<u8> = (0u8..16).collect();
        masks.sort_by_key(|m| {
            let idx: Vec<u8> = (0..4).filter(|i| m & (1 << i) != 0).collect();
            (m.count_ones(), idx)
        });
        let mut position = [0usize; 16];
        for m in masks {
            let p = m.count_ones() as usize;
            position[m as usize] = basis[p].len();
            basis[p].push(m);
        }
        Tables { basis, position }
    })
}

/// Strictly increasing multi-indices of degree `p`, as bit masks.
pub fn basis(p: usize) -> &'static [u8] {
    &tables().basis[p]
}

fn position(mask: u8) -> usize {
    tables().position[mask as usize]
}

pub fn indices(mask: u8) -> Vec<usize> {
    (0..4).filter(|i| mask & (1 << i) != 0).collect()
}

/// Sign of `dx^I ^ dx^J` relative to `dx^{I u J}` for disjoint `I`, `J`.
pub fn merge_sign(i: u8, j: u8) -> i64 {
    debug_assert_eq!(i & j, 0);
    let mut inversions = 0;
    for a in 0..4 {
        if i & (1 << a) != 0 {
            inversions += (j & ((1u8 << a) - 1)).count_ones();
        }
    }
    if inversions % 2 == 0 {
        1
    } else {
        -1
    }
}

pub fn binomial4(p: usize) -> usize {
    [1, 4, 6, 4, 1][p]
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum SignatureKind {
    Euclidean,
    Lorentzian,
}

/// Flat metric and orientation.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Signature {
    pub kind: SignatureKind,
}

impl Signature {
    pub const EUCLIDEAN: Signature = Signature {
        kind: SignatureKind::Euclidean,
    };
    pub const LORENTZIAN: Signature = Signature {
        kind: SignatureKind::Lorentzian,
    };

    pub fn metric(&self, mu: usize) -> i64 {
        match (self.kind, mu) {
            (SignatureKind::Lorentzian, 0) => -1,
            _ => 1,
        }
    }

    /// Sign of the metric determinant.
    pub fn det_sign(&self) -> i64 {
        match self.kind {
            SignatureKind::Euclidean => 1,
            SignatureKind::Lorentzian => -1,
        }
    }

    /// `** = star_squared(p) id` on p-forms.
    pub fn star_squared(&self, p: usize) -> i64 {
        let parity = if (p * (4 - p)) % 2 == 0 { 1 } else { -1 };
        self.det_sign() * parity
    }

    /// Sign in front of the `*K ^ K` term of the first-order Lagrangians.
    /// Eliminating `K` reproduces `K = *(H - ...)` exactly when this equals
    /// minus the metric determinant sign.
    pub fn kinetic_sign(&self) -> i64 {
        -self.det_sign()
    }

    pub fn name(&self) -> &'static str {
        match self.kind {
            SignatureKind::Euclidean => "euclidean",
            SignatureKind::Lorentzian => "lorentzian",
        }
    }

    pub fn from_name(s: &str) -> Result<Self> {
        match s {
            "euclidean" => Ok(Self::EUCLIDEAN),
            "lorentzian" => Ok(Self::LORENTZIAN),
            _ => Err(Error::Parse(format!("unknown signature {s:?}"))),
        }
    }
}

/// A degree-`p` form with one coefficient per increasing multi-index.
#[derive(Clone, Debug, PartialEq)]
pub struct Form<S: Scalar> {
    degree: usize,
    comps: Vec<S>,
}

impl<S: Scalar> Form<S> {
    pub fn zero(degree: usize) -> Self {
        assert!(degree <= 4, "form degree {degree} > 4");
        Self {
            degree,
            comps: vec![S::zero(); binomial4(degree)],
        }
    }

    pub fn scalar(f: S) -> Self {
        Self {
            degree: 0,
            comps: vec![f],
        }
    }

    pub fn constant(c: &Q) -> Self {
        Self::scalar(S::constant(c))
    }

    /// `f dx^{mu_1} ^ ... ^ dx^{mu_p}` with the indices in any order.
    pub fn monomial(f: S, idx: &[usize]) -> Self {
        let mut mask = 0u8;
        let mut sign = 1i64;
        for &mu in idx {
            assert!(mu < 4);
            let bit = 1u8 << mu;
            if mask & bit != 0 {
                return Self::zero(idx.len());
            }
            // moving dx^mu past the higher indices already present
            sign *= if (mask & !((bit << 1) - 1)).count_ones() % 2 == 0 {
                1
            } else {
                -1
            };
            mask |= bit;
        }
        let mut out = Self::zero(idx.len());
        out.comps[position(mask)] = f.scale(&qi(sign));
        out
    }

    /// The coordinate 1-form `dx^mu`.
    pub fn dx(mu: usize) -> Self {
        Self::monomial(S::constant(&qi(1)), &[mu])
    }

    pub fn volume() -> Self {
        Self::dx(0)
            .wedge(&Self::dx(1))
            .and_then(|w| w.wedge(&Self::dx(2)))
            .and_then(|w| w.wedge(&Self::dx(3)))
            .expect("degree 4")
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    /// Component on the increasing multi-index `idx`.
    pub fn component(&self, idx: &[usize]) -> &S {
        let mask = idx.iter().fold(0u8, |m, &i| m | (1 << i));
        assert_eq!(mask.count_ones() as usize, self.degree);
        &self.comps[position(mask)]
    }

    pub fn components(&self) -> impl Iterator<Item = (u8, &S)> {
        basis(self.degree).iter().copied().zip(self.comps.iter())
    }

    pub fn component_mut(&mut self, idx: &[usize]) -> &mut S {
        let mask = idx.iter().fold(0u8, |m, &i| m | (1 << i));
        assert_eq!(mask.count_ones() as usize, self.degree);
        &mut self.comps[position(mask)]
    }

    pub fn is_zero(&self) -> bool {
        self.comps.iter().all(S::is_zero)
    }

    /// Total number of stored coefficient terms across components.
    pub fn term_count(&self) -> usize {
        self.comps.iter().map(S::len).sum()
    }

    pub fn map(&self, f: impl Fn(&S) -> S) -> Self {
        Self {
            degree: self.degree,
            comps: self.comps.iter().map(f).collect(),
        }
    }

    /// Componentwise map with a stateful closure, in component order.
    pub fn map_mut(&self, mut f: impl FnMut(&S) -> S) -> Self {
        Self {
            degree: self.degree,
            comps: self.comps.iter().map(&mut f).collect(),
        }
    }

    /// Componentwise change of backend.
    pub fn map_into<T: Scalar>(&self, f: impl Fn(&S) -> T) -> Form<T> {
        Form {
            degree: self.degree,
            comps: self.comps.iter().map(f).collect(),
        }
    }

    /// Componentwise combination of two forms of equal degree.
    pub fn zip_into<T: Scalar>(&self, other: &Self, f: impl Fn(&S, &S) -> T) -> Result<Form<T>> {
        if self.degree != other.degree {
            return Err(Error::Degree {
                expected: self.degree,
                got: other.degree,
            });
        }
        Ok(Form {
            degree: self.degree,
            comps: self.comps.iter().zip(&other.comps).map(|(a, b)| f(a, b)).collect(),
        })
    }

    fn check_same_degree(&self, other: &Self) {
        assert_eq!(
            self.degree, other.degree,
            "adding forms of different degree"
        );
    }

    pub fn add_assign(&mut self, other: &Self) {
        self.check_same_degree(other);
        for (a, b) in self.comps.iter_mut().zip(&other.comps) {
            a.add_assign(b);
        }
    }

    pub fn sub_assign(&mut self, other: &Self) {
        self.check_same_degree(other);
        for (a, b) in self.comps.iter_mut().zip(&other.comps) {
            a.sub_assign(b);
        }
    }

    /// `self += c * other`
    pub fn axpy(&mut self, c: &Q, other: &Self) {
        if c.is_zero() {
            return;
        }
        self.check_same_degree(other);
        for (a, b) in self.comps.iter_mut().zip(&other.comps) {
            a.axpy(c, b);
        }
    }

    pub fn add(&self, other: &Self) -> Self {
        let mut out = self.clone();
        out.add_assign(other);
        out
    }

    pub fn sub(&self, other: &Self) -> Self {
        let mut out = self.clone();
        out.sub_assign(other);
        out
    }

    pub fn scale(&self, c: &Q) -> Self {
        if c.is_zero() {
            return Self::zero(self.degree);
        }
        self.map(|s| s.scale(c))
    }

    pub fn neg(&self) -> Self {
        self.scale(&qi(-1))
    }

    /// Multiplication by a 0-form coefficient.
    pub fn mul_scalar(&self, f: &S) -> Self {
        self.map(|s| s.mul(f))
    }

    /// The 0-form coefficient of a degree-0 form.
    pub fn as_scalar(&self) -> &S {
        assert_eq!(self.degree, 0);
        &self.comps[0]
    }

    pub fn wedge(&self, other: &Self) -> Result<Self> {
        let (p, r) = (self.degree, other.degree);
        if p + r > 4 {
            return Err(Error::DegreeOverflow(p, r));
        }
        let mut out = Self::zero(p + r);
        for (i, a) in self.components() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in other.components() {
                if i & j != 0 || b.is_zero() {
                    continue;
                }
                let prod = a.mul(b);
                let slot = &mut out.comps[position(i | j)];
                if merge_sign(i, j) > 0 {
                    slot.add_assign(&prod);
                } else {
                    slot.sub_assign(&prod);
                }
            }
        }
        Ok(out)
    }

    /// Exterior derivative. A 4-form input is an error so callers handle
    /// top-degree forms explicitly.
    pub fn d(&self) -> Result<Self> {
        if self.degree == 4 {
            return Err(Error::TopDegree);
        }
        let mut out = Self::zero(self.degree + 1);
        for (i, f) in self.components() {
            if f.is_zero() {
                continue;
            }
            for mu in 0..4 {
                let bit = 1u8 << mu;
                if i & bit != 0 {
                    continue;
                }
                let df = f.partial(mu);
                let slot = &mut out.comps[position(i | bit)];
                if merge_sign(bit, i) > 0 {
                    slot.add_assign(&df);
                } else {
                    slot.sub_assign(&df);
                }
            }
        }
        Ok(out)
    }

    /// Hodge dual: `*dx^I = eta_I eps(I, I^c) dx^{I^c}` where `eta_I` is the
    /// product of the diagonal metric entries over `I`.
    pub fn hodge(&self, sig: Signature) -> Self {
        let mut out = Self::zero(4 - self.degree);
        for (i, f) in self.components() {
            if f.is_zero() {
                continue;
            }
            let comp = 0b1111 ^ i;
            let eta: i64 = indices(i).iter().map(|&mu| sig.metric(mu)).product();
            let sign = eta * merge_sign(i, comp);
            out.comps[position(comp)] = f.scale(&qi(sign));
        }
        out
    }
}

impl<S: Scalar> fmt::Display for Form<S> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}-form[", self.degree)?;
        let mut first = true;
        for (m, c) in self.components() {
            if c.is_zero() {
                continue;
            }
            if !first {
                write!(f, ", ")?;
            }
            first = false;
            let idx: Vec<String> = indices(m).iter().map(|i| i.to_string()).collect();
            write!(f, "dx{}: {} terms", idx.join(""), c.len())?;
        }
        write!(f, "]")
    }
}

impl<S: Scalar> fmt::Display for InternalForm<S> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{")?;
        let mut first = true;
        for (i, e) in self.entries.iter().enumerate() {
            if e.is_zero() {
                continue;
            }
            if !first {
                write!(f, "; ")?;
            }
            first = false;
            write!(f, "{i}: {e}")?;
        }
        write!(f, "}}")
    }
}

/// Exact torus integral, in units of `(2 pi)^4`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct TorusIntegral(pub Q);

impl TorusIntegral {
    pub fn zero() -> Self {
        Self(Q::zero())
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_zero()
    }
}

impl fmt::Display for TorusIntegral {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}*(2pi)^4", crate::rational::fmt_q(&self.0))
    }
}

impl Form<Fourier> {
    /// Integral of a 4-form over `(R / 2 pi Z)^4`.
    pub fn integrate(&self) -> Result<TorusIntegral> {
        if self.degree != 4 {
            return Err(Error::Degree {
                expected: 4,
                got: self.degree,
            });
        }
        let c = self.comps[0].zero_mode();
        if !c.im.is_zero() {
            return Err(Error::NonReal);
        }
        Ok(TorusIntegral(c.re))
    }

    /// `integral(self ^ other)` computed from zero modes only.
    pub fn integrate_wedge(&self, other: &Self) -> Result<TorusIntegral> {
        let (p, r) = (self.degree, other.degree);
        if p + r != 4 {
            return Err(Error::Degree {
                expected: 4,
                got: p + r,
            });
        }
        let mut acc = crate::fourier::C::zero();
        for (i, a) in self.components() {
            let j = 0b1111 ^ i;
            let b = &other.comps[position(j)];
            let z = a.product_zero_mode(b);
            if merge_sign(i, j) > 0 {
                acc += z;
            } else {
                acc -= z;
            }
        }
        if !acc.im.is_zero() {
            return Err(Error::NonReal);
        }
        Ok(TorusIntegral(acc.re))
    }

    /// Pullback under the spatial reflection `(x^0, x^i) -> (x^0, -x^i)`,
    /// an orientation-reversing isometry of both signatures.
    pub fn parity(&self) -> Self {
        let mut out = Self::zero(self.degree);
        for (k, (i, f)) in self.components().enumerate() {
            let spatial = (i & 0b1110).count_ones();
            let g = f.reflect_space();
            out.comps[k] = if spatial % 2 == 0 { g } else { g.scale(&qi(-1)) };
        }
        out
    }

    pub fn is_real(&self) -> bool {
        self.comps.iter().all(Fourier::is_real)
    }
}

/// Which internal vector space an internal form takes values in.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Space {
    /// the 1-form algebra, dimension k
    A,
    /// the 2-form algebra, dimension k'
    APrime,
}

/// A form with an internal vector index: one [`Form`] per internal component.
#[derive(Clone, Debug, PartialEq)]
pub struct InternalForm<S: Scalar> {
    pub space: Space,
    pub entries: Vec<Form<S>>,
}

impl<S: Scalar> InternalForm<S> {
    pub fn zero(space: Space, dim: usize, degree: usize) -> Self {
        Self {
            space,
            entries: vec![Form::zero(degree); dim],
        }
    }

    pub fn new(space: Space, entries: Vec<Form<S>>) -> Self {
        if let Some(f) = entries.first() {
            assert!(entries.iter().all(|e| e.degree() == f.degree()));
        }
        Self { space, entries }
    }

    pub fn dim(&self) -> usize {
        self.entries.len()
    }

    pub fn degree(&self) -> Option<usize> {
        self.entries.first().map(Form::degree)
    }

    pub fn is_zero(&self) -> bool {
        self.entries.iter().all(Form::is_zero)
    }

    pub fn map(&self, f: impl Fn(&Form<S>) -> Form<S>) -> Self {
        Self {
            space: self.space,
            entries: self.entries.iter().map(f).collect(),
        }
    }

    pub fn add(&self, other: &Self) -> Self {
        assert_eq!(self.dim(), other.dim());
        Self {
            space: self.space,
            entries: self
                .entries
                .iter()
                .zip(&other.entries)
                .map(|(a, b)| a.add(b))
                .collect(),
        }
    }

    pub fn sub(&self, other: &Self) -> Self {
        assert_eq!(self.dim(), other.dim());
        Self {
            space: self.space,
            entries: self
                .entries
                .iter()
                .zip(&other.entries)
                .map(|(a, b)| a.sub(b))
                .collect(),
        }
    }

    pub fn axpy(&mut self, c: &Q, other: &Self) {
        assert_eq!(self.dim(), other.dim());
        for (a, b) in self.entries.iter_mut().zip(&other.entries) {
            a.axpy(c, b);
        }
    }

    pub fn scale(&self, c: &Q) -> Self {
        self.map(|f| f.scale(c))
    }

    pub fn d(&self) -> Result<Self> {
        Ok(Self {
            space: self.space,
            entries: self.entries.iter().map(Form::d).collect::<Result<_>>()?,
        })
    }

    pub fn hodge(&self, sig: Signature) -> Self {
        self.map(|f| f.hodge(sig))
    }
}

impl InternalForm<Fourier> {
    pub fn parity(&self) -> Self {
        self.map(Form::parity)
    }
}

/// Random form with every component drawn from `S::random`.
pub fn random_form_with<S: Scalar, R: Rng>(rng: &mut R, degree: usize, cutoff: u32) -> Form<S> {
    let mut out = Form::zero(degree);
    for c in out.comps.iter_mut() {
        *c = S::random(rng, cutoff);
    }
    out
}

pub fn random_internal_with<S: Scalar, R: Rng>(
    rng: &mut R,
    space: Space,
    degree: usize,
    dim: usize,
    cutoff: u32,
) -> InternalForm<S> {
    InternalForm {
        space,
        entries: (0..dim)
            .map(|_| random_form_with(rng, degree, cutoff))
            .collect(),
    }
}

/// Deterministic random internal form; the backend is the type parameter.
pub fn random_form<S: Scalar>(
    seed: u64,
    degree: usize,
    dim: usize,
    cutoff: u32,
    space: Space,
) -> Result<InternalForm<S>> {
    if cutoff < 1 {
        return Err(Error::Param("cutoff must be at least 1".into()));
    }
    if degree > 4 {
        return Err(Error::Param(format!("degree {degree} > 4")));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    Ok(random_internal_with(&mut rng, space, degree, dim, cutoff))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fourier::C;
    use crate::scalar::ExpPoly;

    type F = Form<Fourier>;

    fn one() -> Fourier {
        Fourier::constant(&qi(1))
    }

    #[test]
    fn basis_orders_lexicographically() {
        assert_eq!(basis(2), &[0b0011, 0b0101, 0b1001, 0b0110, 0b1010, 0b1100]);
        assert_eq!(basis(0), &[0]);
        assert_eq!(basis(4), &[0b1111]);
    }

    #[test]
    fn wedge_is_graded_antisymmetric_on_coordinates() {
        let a = F::dx(0).wedge(&F::dx(1)).unwrap();
        let b = F::dx(1).wedge(&F::dx(0)).unwrap();
        assert_eq!(a, b.neg());
        let w = F::dx(0).add(&F::dx(1));
        assert!(w.wedge(&w).unwrap().is_zero());
    }

    #[test]
    fn zero_form_wedge_scales_pointwise() {
        let f = F::scalar(Fourier::real_mode([1, 0, 0, 0], qi(2)));
        let w = F::dx(2);
        assert_eq!(f.wedge(&w).unwrap(), w.mul_scalar(f.as_scalar()));
    }

    #[test]
    fn degree_overflow_is_an_error() {
        let v = F::volume();
        assert_eq!(v.wedge(&F::dx(0)), Err(Error::DegreeOverflow(4, 1)));
        assert_eq!(v.d(), Err(Error::TopDegree));
    }

    #[test]
    fn monomial_sorts_with_sign() {
        let a = F::monomial(one(), &[2, 0]);
        let b = F::dx(2).wedge(&F::dx(0)).unwrap();
        assert_eq!(a, b);
        assert_eq!(*a.component(&[0, 2]), Fourier::constant(&qi(-1)));
    }

    #[test]
    fn d_of_single_mode() {
        // d exp(i x0) = i exp(i x0) dx0
        let f = F::scalar(Fourier::real_mode([1, 0, 0, 0], qi(1)));
        let expected = F::monomial(Fourier::mode([1, 0, 0, 0], C::new(qi(0), qi(1))), &[0]);
        assert_eq!(f.d().unwrap(), expected);
    }

    #[test]
    fn hodge_examples() {
        let sig = Signature::EUCLIDEAN;
        let w01 = F::dx(0).wedge(&F::dx(1)).unwrap();
        let w23 = F::dx(2).wedge(&F::dx(3)).unwrap();
        assert_eq!(w01.hodge(sig), w23);
        assert_eq!(F::constant(&qi(1)).hodge(sig), F::volume());
        // Lorentzian: *dx0 = -dx1 dx2 dx3
        let star = F::dx(0).hodge(Signature::LORENTZIAN);
        let e123 = F::monomial(one(), &[1, 2, 3]);
        assert_eq!(star, e123.neg());
    }

    #[test]
    fn hodge_matches_levi_civita_contraction() {
        // (*w)_{nu..} = (1/p!) w^{mu..} eps_{mu.. nu..}; the oracle sums over
        // all index permutations explicitly.
        fn perm_sign(p: &[usize]) -> i64 {
            let mut s = 1;
            for i in 0..p.len() {
                for j in i + 1..p.len() {
                    if p[i] > p[j] {
                        s = -s;
                    } else if p[i] == p[j] {
                        return 0;
                    }
                }
            }
            s
        }
        for sig in [Signature::EUCLIDEAN, Signature::LORENTZIAN] {
            for p in 0..=4 {
                for &m in basis(p) {
                    let idx = indices(m);
                    let w = F::monomial(one(), &idx);
                    let star = w.hodge(sig);
                    for &n in basis(4 - p) {
                        let nidx = indices(n);
                        // only the sorted term of w contributes; the p! orderings
                        // cancel the 1/p!
                        let raised: i64 = idx.iter().map(|&mu| sig.metric(mu)).product();
                        let mut full = idx.clone();
                        full.extend(&nidx);
                        let expect = raised * perm_sign(&full);
                        assert_eq!(*star.component(&nidx), Fourier::constant(&qi(expect)));
                    }
                }
            }
        }
    }

    #[test]
    fn integrate_examples() {
        let v = F::volume().scale(&qi(3));
        assert_eq!(v.integrate().unwrap(), TorusIntegral(qi(3)));
        let osc = F::volume().mul_scalar(&Fourier::real_mode([1, 0, 0, 0], qi(1)));
        assert_eq!(osc.integrate().unwrap(), TorusIntegral::zero());
        assert!(F::dx(0).integrate().is_err());
    }

    #[test]
    fn parity_examples() {
        let f = Fourier::real_mode([1, 1, 0, 0], qi(1));
        let w = F::monomial(f.clone(), &[1]);
        let pw = w.parity();
        assert_eq!(pw, F::monomial(Fourier::real_mode([1, -1, 0, 0], qi(-1)), &[1]));
        assert_eq!(pw.parity(), w);
        // time direction is untouched
        let t = F::monomial(f, &[0]);
        assert_eq!(*t.parity().component(&[0]), Fourier::real_mode([1, -1, 0, 0], qi(1)));
    }

    #[test]
    fn random_form_is_deterministic() {
        let a = random_form::<Fourier>(42, 1, 3, 1, Space::A).unwrap();
        let b = random_form::<Fourier>(42, 1, 3, 1, Space::A).unwrap();
        let c = random_form::<Fourier>(43, 1, 3, 1, Space::A).unwrap();
        assert_eq!(a, b);
        assert_ne!(a, c);
        assert!(a.entries.iter().all(F::is_real));
        assert!(random_form::<ExpPoly>(1, 2, 1, 0, Space::A).is_err());
    }
}
