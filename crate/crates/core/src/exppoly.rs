//! Exponential polynomials `sum p_k(x) exp(lambda_k . x)` on flat `R^4`.

use std::collections::BTreeMap;

use num_traits::{One, Zero};
use rand::Rng;

use crate::rational::{qi, Q};
use crate::scalar::Scalar;

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
struct Key {
    lambda: [Q; 4],
    powers: [u32; 4],
}

#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct ExpPoly {
    terms: BTreeMap<Key, Q>,
}

fn zero_lambda() -> [Q; 4] {
    std::array::from_fn(|_| Q::zero())
}

impl ExpPoly {
    /// `c x^powers exp(lambda . x)`
    pub fn term(c: Q, powers: [u32; 4], lambda: [Q; 4]) -> Self {
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(Key { lambda, powers }, c);
        }
        Self { terms }
    }

    pub fn monomial(c: Q, powers: [u32; 4]) -> Self {
        Self::term(c, powers, zero_lambda())
    }

    /// The coordinate function `x^mu`.
    pub fn coordinate(mu: usize) -> Self {
        let mut p = [0; 4];
        p[mu] = 1;
        Self::monomial(Q::one(), p)
    }

    /// `exp(lambda . x)`
    pub fn exp_linear(lambda: [Q; 4]) -> Self {
        Self::term(Q::one(), [0; 4], lambda)
    }

    /// Linear function `lambda . x`.
    pub fn linear(lambda: &[Q; 4]) -> Self {
        let mut out = Self::zero();
        for (mu, l) in lambda.iter().enumerate() {
            out.add_assign(&Self::coordinate(mu).scale(l));
        }
        out
    }

    /// If `self` is `lambda . x` (no constant term), return `lambda`.
    pub fn as_linear(&self) -> Option<[Q; 4]> {
        let mut out = zero_lambda();
        for (k, c) in &self.terms {
            if k.lambda != zero_lambda() {
                return None;
            }
            let deg: u32 = k.powers.iter().sum();
            if deg != 1 {
                return None;
            }
            let mu = k.powers.iter().position(|&p| p == 1)?;
            out[mu] = c.clone();
        }
        Some(out)
    }
}

impl Scalar for ExpPoly {
    const BACKEND: &'static str = "exppoly";

    fn zero() -> Self {
        Self::default()
    }

    fn constant(c: &Q) -> Self {
        Self::monomial(c.clone(), [0; 4])
    }

    fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    fn add_assign(&mut self, other: &Self) {
        for (k, c) in &other.terms {
            match self.terms.get_mut(k) {
                Some(x) => {
                    *x += c;
                    if x.is_zero() {
                        self.terms.remove(k);
                    }
                }
                None => {
                    self.terms.insert(k.clone(), c.clone());
                }
            }
        }
    }

    fn sub_assign(&mut self, other: &Self) {
        for (k, c) in &other.terms {
            match self.terms.get_mut(k) {
                Some(x) => {
                    *x -= c;
                    if x.is_zero() {
                        self.terms.remove(k);
                    }
                }
                None => {
                    self.terms.insert(k.clone(), -c.clone());
                }
            }
        }
    }

    fn mul(&self, other: &Self) -> Self {
        let mut out = Self::zero();
        for (k1, c1) in &self.terms {
            for (k2, c2) in &other.terms {
                let key = Key {
                    lambda: std::array::from_fn(|i| &k1.lambda[i] + &k2.lambda[i]),
                    powers: std::array::from_fn(|i| k1.powers[i] + k2.powers[i]),
                };
                out.add_assign(&Self {
                    terms: BTreeMap::from([(key, c1 * c2)]),
                });
            }
        }
        out
    }

    fn scale(&self, c: &Q) -> Self {
        if c.is_zero() {
            return Self::zero();
        }
        Self {
            terms: self.terms.iter().map(|(k, x)| (k.clone(), x * c)).collect(),
        }
    }

    fn partial(&self, mu: usize) -> Self {
        let mut out = Self::zero();
        for (k, c) in &self.terms {
            if !k.lambda[mu].is_zero() {
                out.add_assign(&Self::term(c * &k.lambda[mu], k.powers, k.lambda.clone()));
            }
            if k.powers[mu] > 0 {
                let mut p = k.powers;
                p[mu] -= 1;
                out.add_assign(&Self::term(
                    c * qi(k.powers[mu] as i64),
                    p,
                    k.lambda.clone(),
                ));
            }
        }
        out
    }

    fn random<R: Rng>(rng: &mut R, cutoff: u32) -> Self {
        let lambdas = [qi(0), qi(1), qi(-1), Q::new(1.into(), 2.into())];
        let mut out = Self::zero();
        for _ in 0..rng.gen_range(1..=2) {
            let lambda: [Q; 4] =
                std::array::from_fn(|_| lambdas[rng.gen_range(0..lambdas.len())].clone());
            for _ in 0..rng.gen_range(1..=2) {
                let mut powers = [0u32; 4];
                for _ in 0..rng.gen_range(0..=cutoff) {
                    powers[rng.gen_range(0..4)] += 1;
                }
                let c = Q::new(rng.gen_range(-3i64..=3).into(), rng.gen_range(1i64..=2).into());
                out.add_assign(&Self::term(c, powers, lambda.clone()));
            }
        }
        out
    }

    fn len(&self) -> usize {
        self.terms.len()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::q;

    #[test]
    fn derivative_of_exponential_times_polynomial() {
        // d/dx0 [x0 exp(2 x0)] = exp(2 x0) + 2 x0 exp(2 x0)
        let lam = [qi(2), qi(0), qi(0), qi(0)];
        let f = ExpPoly::coordinate(0).mul(&ExpPoly::exp_linear(lam.clone()));
        let expected = ExpPoly::exp_linear(lam.clone())
            .add(&ExpPoly::term(qi(2), [1, 0, 0, 0], lam));
        assert_eq!(f.partial(0), expected);
    }

    #[test]
    fn exponentials_multiply_by_adding_rates() {
        let a = ExpPoly::exp_linear([q(1, 2), qi(0), qi(0), qi(0)]);
        let b = ExpPoly::exp_linear([q(-1, 2), qi(0), qi(0), qi(0)]);
        assert_eq!(a.mul(&b), ExpPoly::constant(&qi(1)));
    }

    #[test]
    fn linear_roundtrip() {
        let lam = [qi(1), q(-1, 3), qi(0), qi(2)];
        assert_eq!(ExpPoly::linear(&lam).as_linear(), Some(lam));
        assert_eq!(ExpPoly::constant(&qi(1)).as_linear(), None);
    }
}
