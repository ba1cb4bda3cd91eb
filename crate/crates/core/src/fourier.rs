//! Truncated Fourier series with Gaussian-rational coefficients on the torus
//! `(R / 2 pi Z)^4`.

use std::collections::BTreeMap;
use std::collections::HashMap;

use num_complex::Complex;
use num_traits::{One, Zero};
use rand::Rng;

use crate::rational::{qi, Q};
use crate::scalar::Scalar;

/// Gaussian rational `re + i im`.
pub type C = Complex<Q>;

pub type Freq = [i32; 4];

/// Finite sum of `c_n exp(i n.x)`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Default)]
pub struct Fourier {
    modes: BTreeMap<Freq, C>,
}

fn c_is_zero(c: &C) -> bool {
    c.re.is_zero() && c.im.is_zero()
}

impl Fourier {
    /// Single mode `c exp(i n.x)`.
    pub fn mode(n: Freq, c: C) -> Self {
        let mut modes = BTreeMap::new();
        if !c_is_zero(&c) {
            modes.insert(n, c);
        }
        Self { modes }
    }

    pub fn real_mode(n: Freq, re: Q) -> Self {
        Self::mode(n, C::new(re, Q::zero()))
    }

    /// `cos(n.x)`
    pub fn cos(n: Freq) -> Self {
        let h = Q::new(1.into(), 2.into());
        let mut f = Self::real_mode(n, h.clone());
        f.add_assign(&Self::real_mode(neg_freq(n), h));
        f
    }

    /// `sin(n.x)`
    pub fn sin(n: Freq) -> Self {
        let h = Q::new(1.into(), 2.into());
        let mut f = Self::mode(n, C::new(Q::zero(), -h.clone()));
        f.add_assign(&Self::mode(neg_freq(n), C::new(Q::zero(), h)));
        f
    }

    pub fn coefficient(&self, n: &Freq) -> C {
        self.modes.get(n).cloned().unwrap_or_else(C::zero)
    }

    pub fn modes(&self) -> impl Iterator<Item = (&Freq, &C)> {
        self.modes.iter()
    }

    pub fn zero_mode(&self) -> C {
        self.coefficient(&[0; 4])
    }

    /// Largest `|n_mu|` over the support.
    pub fn max_frequency(&self) -> i32 {
        self.modes
            .keys()
            .flat_map(|n| n.iter().map(|x| x.abs()))
            .max()
            .unwrap_or(0)
    }

    /// Reality: `c(-n) = conj(c(n))` for every mode.
    pub fn is_real(&self) -> bool {
        self.modes
            .iter()
            .all(|(n, c)| self.coefficient(&neg_freq(*n)) == c.conj())
    }

    pub fn scale_c(&self, c: &C) -> Self {
        if c_is_zero(c) {
            return Self::zero();
        }
        Self {
            modes: self.modes.iter().map(|(n, x)| (*n, x * c)).collect(),
        }
    }

    /// Pullback under the spatial reflection `(x^0, x^i) -> (x^0, -x^i)`.
    /// Up to `count` randomly chosen modes together with their conjugate
    /// partners, so a real series stays real.
    pub fn sample_modes<R: Rng>(&self, rng: &mut R, count: usize) -> Self {
        let keys: Vec<Freq> = self.modes.keys().copied().collect();
        let mut out = Self::zero();
        if keys.is_empty() {
            return out;
        }
        for _ in 0..count {
            let n = keys[rng.gen_range(0..keys.len())];
            for m in [n, neg_freq(n)] {
                if let Some(c) = self.modes.get(&m) {
                    out.modes.insert(m, c.clone());
                }
            }
        }
        out
    }

    pub fn reflect_space(&self) -> Self {
        Self {
            modes: self
                .modes
                .iter()
                .map(|(n, c)| ([n[0], -n[1], -n[2], -n[3]], c.clone()))
                .collect(),
        }
    }

    /// Zero-mode of `self * other` without forming the product.
    pub fn product_zero_mode(&self, other: &Self) -> C {
        let (small, big) = if self.modes.len() <= other.modes.len() {
            (self, other)
        } else {
            (other, self)
        };
        let mut acc = C::zero();
        for (n, c) in &small.modes {
            if let Some(d) = big.modes.get(&neg_freq(*n)) {
                acc += c * d;
            }
        }
        acc
    }
}

pub fn neg_freq(n: Freq) -> Freq {
    [-n[0], -n[1], -n[2], -n[3]]
}

fn add_freq(a: &Freq, b: &Freq) -> Freq {
    [a[0] + b[0], a[1] + b[1], a[2] + b[2], a[3] + b[3]]
}

fn small_rational<R: Rng>(rng: &mut R) -> Q {
    let num = rng.gen_range(-3i64..=3);
    let den = rng.gen_range(1i64..=2);
    Q::new(num.into(), den.into())
}

impl Scalar for Fourier {
    const BACKEND: &'static str = "fourier";

    fn zero() -> Self {
        Self::default()
    }

    fn constant(c: &Q) -> Self {
        Self::real_mode([0; 4], c.clone())
    }

    fn is_zero(&self) -> bool {
        self.modes.is_empty()
    }

    fn add_assign(&mut self, other: &Self) {
        for (n, c) in &other.modes {
            match self.modes.get_mut(n) {
                Some(x) => {
                    *x += c;
                    if c_is_zero(x) {
                        self.modes.remove(n);
                    }
                }
                None => {
                    self.modes.insert(*n, c.clone());
                }
            }
        }
    }

    fn sub_assign(&mut self, other: &Self) {
        for (n, c) in &other.modes {
            match self.modes.get_mut(n) {
                Some(x) => {
                    *x -= c;
                    if c_is_zero(x) {
                        self.modes.remove(n);
                    }
                }
                None => {
                    self.modes.insert(*n, -c.clone());
                }
            }
        }
    }

    fn mul(&self, other: &Self) -> Self {
        if self.is_zero() || other.is_zero() {
            return Self::zero();
        }
        let mut acc: HashMap<Freq, C> = HashMap::with_capacity(self.modes.len() * other.modes.len());
        for (n, c) in &self.modes {
            for (m, d) in &other.modes {
                let p = c * d;
                acc.entry(add_freq(n, m))
                    .and_modify(|x| *x += &p)
                    .or_insert(p);
            }
        }
        Self {
            modes: acc.into_iter().filter(|(_, c)| !c_is_zero(c)).collect(),
        }
    }

    fn scale(&self, c: &Q) -> Self {
        if c.is_zero() {
            return Self::zero();
        }
        if c.is_one() {
            return self.clone();
        }
        Self {
            modes: self
                .modes
                .iter()
                .map(|(n, x)| (*n, C::new(&x.re * c, &x.im * c)))
                .collect(),
        }
    }

    fn partial(&self, mu: usize) -> Self {
        // d/dx^mu exp(i n.x) = i n_mu exp(i n.x)
        Self {
            modes: self
                .modes
                .iter()
                .filter(|(n, _)| n[mu] != 0)
                .map(|(n, c)| {
                    let k = qi(n[mu] as i64);
                    (*n, C::new(-&c.im * &k, &c.re * &k))
                })
                .collect(),
        }
    }

    fn random<R: Rng>(rng: &mut R, cutoff: u32) -> Self {
        let cut = cutoff as i32;
        let mut out = Self::zero();
        let count = rng.gen_range(1..=2);
        for _ in 0..count {
            let n: Freq = std::array::from_fn(|_| rng.gen_range(-cut..=cut));
            if n == [0; 4] {
                out.add_assign(&Self::constant(&small_rational(rng)));
            } else {
                let c = C::new(small_rational(rng), small_rational(rng));
                out.add_assign(&Self::mode(n, c.clone()));
                out.add_assign(&Self::mode(neg_freq(n), c.conj()));
            }
        }
        out
    }

    fn len(&self) -> usize {
        self.modes.len()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::q;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn derivative_of_single_mode() {
        // d/dx0 exp(i x0) = i exp(i x0)
        let f = Fourier::real_mode([1, 0, 0, 0], qi(1));
        let df = f.partial(0);
        assert_eq!(df, Fourier::mode([1, 0, 0, 0], C::new(qi(0), qi(1))));
        assert!(f.partial(1).is_zero());
    }

    #[test]
    fn cos_squared_plus_sin_squared() {
        let n = [0, 1, 2, 0];
        let c = Fourier::cos(n);
        let s = Fourier::sin(n);
        assert_eq!(c.mul(&c).add(&s.mul(&s)), Fourier::constant(&qi(1)));
        assert!(c.is_real() && s.is_real());
    }

    #[test]
    fn product_zero_mode_matches_full_product() {
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        for _ in 0..20 {
            let a = Fourier::random(&mut rng, 2);
            let b = Fourier::random(&mut rng, 2);
            assert_eq!(a.product_zero_mode(&b), a.mul(&b).zero_mode());
        }
    }

    #[test]
    fn random_fields_are_real() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        for _ in 0..50 {
            assert!(Fourier::random(&mut rng, 1).is_real());
        }
    }

    #[test]
    fn leibniz_on_products() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let f = Fourier::random(&mut rng, 1);
        let g = Fourier::random(&mut rng, 1);
        for mu in 0..4 {
            let lhs = f.mul(&g).partial(mu);
            let rhs = f.partial(mu).mul(&g).add(&f.mul(&g.partial(mu)));
            assert_eq!(lhs, rhs);
        }
        assert_eq!(f.scale(&q(0, 1)), Fourier::zero());
    }
}
