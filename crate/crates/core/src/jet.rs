//! First-order jets `v + eps t` with `eps^2 = 0` over any backend.
//!
//! Evaluating a polynomial functional on jet-valued fields yields its value
//! and its exact directional derivative in one pass, at a cost linear in
//! the size of the direction.

use rand::Rng;

use crate::error::Result;
use crate::forms::{Form, InternalForm};
use crate::rational::Q;
use crate::scalar::Scalar;

#[derive(Clone, Debug, PartialEq)]
pub struct Jet<S: Scalar> {
    pub value: S,
    pub tangent: S,
}

impl<S: Scalar> Jet<S> {
    pub fn new(value: S, tangent: S) -> Self {
        Jet { value, tangent }
    }
}

impl<S: Scalar> Scalar for Jet<S> {
    const BACKEND: &'static str = S::BACKEND;

    fn zero() -> Self {
        Jet::new(S::zero(), S::zero())
    }

    fn constant(c: &Q) -> Self {
        Jet::new(S::constant(c), S::zero())
    }

    fn is_zero(&self) -> bool {
        self.value.is_zero() && self.tangent.is_zero()
    }

    fn add_assign(&mut self, other: &Self) {
        self.value.add_assign(&other.value);
        self.tangent.add_assign(&other.tangent);
    }

    fn sub_assign(&mut self, other: &Self) {
        self.value.sub_assign(&other.value);
        self.tangent.sub_assign(&other.tangent);
    }

    fn mul(&self, other: &Self) -> Self {
        let mut tangent = S::zero();
        if !other.tangent.is_zero() && !self.value.is_zero() {
            tangent = self.value.mul(&other.tangent);
        }
        if !self.tangent.is_zero() && !other.value.is_zero() {
            tangent.add_assign(&self.tangent.mul(&other.value));
        }
        Jet::new(self.value.mul(&other.value), tangent)
    }

    fn scale(&self, c: &Q) -> Self {
        Jet::new(self.value.scale(c), self.tangent.scale(c))
    }

    fn partial(&self, mu: usize) -> Self {
        Jet::new(self.value.partial(mu), self.tangent.partial(mu))
    }

    fn random<R: Rng>(rng: &mut R, cutoff: u32) -> Self {
        Jet::new(S::random(rng, cutoff), S::zero())
    }

    fn len(&self) -> usize {
        self.value.len() + self.tangent.len()
    }
}

pub fn lift_form<S: Scalar>(value: &Form<S>, tangent: &Form<S>) -> Result<Form<Jet<S>>> {
    value.zip_into(tangent, |v, t| Jet::new(v.clone(), t.clone()))
}

pub fn lift_internal<S: Scalar>(value: &InternalForm<S>, tangent: &InternalForm<S>) -> Result<InternalForm<Jet<S>>> {
    if value.space != tangent.space || value.dim() != tangent.dim() {
        return Err(crate::error::Error::Shape(format!(
            "cannot pair a {}-dimensional {:?} form with a {}-dimensional {:?} direction",
            value.dim(),
            value.space,
            tangent.dim(),
            tangent.space
        )));
    }
    let entries = value
        .entries
        .iter()
        .zip(&tangent.entries)
        .map(|(v, t)| lift_form(v, t))
        .collect::<Result<Vec<_>>>()?;
    Ok(InternalForm { space: value.space, entries })
}

pub fn value_part<S: Scalar>(f: &Form<Jet<S>>) -> Form<S> {
    f.map_into(|j| j.value.clone())
}

pub fn tangent_part<S: Scalar>(f: &Form<Jet<S>>) -> Form<S> {
    f.map_into(|j| j.tangent.clone())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::forms::random_form_with;
    use crate::fourier::Fourier;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn product_rule() {
        let mut rng = ChaCha8Rng::seed_from_u64(4);
        let (a, da): (Form<Fourier>, Form<Fourier>) = (random_form_with(&mut rng, 1, 1), random_form_with(&mut rng, 1, 1));
        let (b, db): (Form<Fourier>, Form<Fourier>) = (random_form_with(&mut rng, 2, 1), random_form_with(&mut rng, 2, 1));
        let p = lift_form(&a, &da).unwrap().wedge(&lift_form(&b, &db).unwrap()).unwrap();
        assert_eq!(value_part(&p), a.wedge(&b).unwrap());
        let expect = da.wedge(&b).unwrap().add(&a.wedge(&db).unwrap());
        assert_eq!(tangent_part(&p), expect);
        let d = lift_form(&a, &da).unwrap().d().unwrap();
        assert_eq!(tangent_part(&d), da.d().unwrap());
    }
}
