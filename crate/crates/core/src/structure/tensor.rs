use std::fmt;

use num_traits::{Signed, Zero};

use crate::error::{Error, Result};
use crate::rational::{fmt_q, Q};

/// Dense rational tensor, row-major.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Tensor {
    dims: Vec<usize>,
    data: Vec<Q>,
}

impl Tensor {
    pub fn zeros(dims: &[usize]) -> Self {
        Tensor {
            dims: dims.to_vec(),
            data: vec![Q::zero(); dims.iter().product()],
        }
    }

    pub fn from_fn(dims: &[usize], f: impl Fn(&[usize]) -> Q) -> Self {
        let mut t = Tensor::zeros(dims);
        let mut idx = vec![0; dims.len()];
        for slot in 0..t.data.len() {
            t.data[slot] = f(&idx);
            advance(&mut idx, dims);
        }
        t
    }

    pub fn from_vec(dims: &[usize], data: Vec<Q>) -> Result<Self> {
        if data.len() != dims.iter().product::<usize>() {
            return Err(Error::Shape(format!(
                "{} entries do not fill dims {dims:?}",
                data.len()
            )));
        }
        Ok(Tensor { dims: dims.to_vec(), data })
    }

    /// Identity matrix scaled by `c`.
    pub fn diag(n: usize, c: &Q) -> Self {
        Tensor::from_fn(&[n, n], |i| if i[0] == i[1] { c.clone() } else { Q::zero() })
    }

    pub fn dims(&self) -> &[usize] {
        &self.dims
    }

    pub fn data(&self) -> &[Q] {
        &self.data
    }

    pub fn data_mut(&mut self) -> &mut [Q] {
        &mut self.data
    }

    fn offset(&self, idx: &[usize]) -> usize {
        debug_assert_eq!(idx.len(), self.dims.len());
        idx.iter().zip(&self.dims).fold(0, |acc, (&i, &n)| {
            debug_assert!(i < n);
            acc * n + i
        })
    }

    pub fn get(&self, idx: &[usize]) -> &Q {
        &self.data[self.offset(idx)]
    }

    pub fn set(&mut self, idx: &[usize], v: Q) {
        let o = self.offset(idx);
        self.data[o] = v;
    }

    pub fn at2(&self, i: usize, j: usize) -> &Q {
        &self.data[i * self.dims[1] + j]
    }

    pub fn at3(&self, i: usize, j: usize, k: usize) -> &Q {
        &self.data[(i * self.dims[1] + j) * self.dims[2] + k]
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(Zero::is_zero)
    }

    pub fn scale(&self, c: &Q) -> Self {
        Tensor {
            dims: self.dims.clone(),
            data: self.data.iter().map(|x| x * c).collect(),
        }
    }

    pub fn add(&self, other: &Self) -> Self {
        assert_eq!(self.dims, other.dims, "tensor dims differ");
        Tensor {
            dims: self.dims.clone(),
            data: self.data.iter().zip(&other.data).map(|(x, y)| x + y).collect(),
        }
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.scale(&-Q::from_integer(1.into())))
    }

    /// Entry of largest absolute value, if any entry is nonzero.
    pub fn witness(&self) -> Option<(Vec<usize>, Q)> {
        let mut best: Option<(usize, &Q)> = None;
        for (i, x) in self.data.iter().enumerate() {
            if !x.is_zero() && best.is_none_or(|(_, b)| x.abs() > b.abs()) {
                best = Some((i, x));
            }
        }
        best.map(|(i, x)| (self.unravel(i), x.clone()))
    }

    pub fn unravel(&self, mut flat: usize) -> Vec<usize> {
        let mut idx = vec![0; self.dims.len()];
        for (slot, &n) in idx.iter_mut().zip(&self.dims).rev() {
            *slot = flat % n;
            flat /= n;
        }
        idx
    }

    /// Matrix transpose of a rank-2 tensor.
    pub fn transpose(&self) -> Self {
        assert_eq!(self.dims.len(), 2);
        Tensor::from_fn(&[self.dims[1], self.dims[0]], |i| self.at2(i[1], i[0]).clone())
    }

    pub fn rows(&self) -> Vec<Vec<Q>> {
        assert_eq!(self.dims.len(), 2);
        self.data.chunks(self.dims[1]).map(<[Q]>::to_vec).collect()
    }

    pub fn nonzero_count(&self) -> usize {
        self.data.iter().filter(|x| !x.is_zero()).count()
    }
}

fn advance(idx: &mut [usize], dims: &[usize]) {
    for (i, &n) in idx.iter_mut().zip(dims).rev() {
        *i += 1;
        if *i < n {
            return;
        }
        *i = 0;
    }
}

impl fmt::Display for Tensor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[")?;
        for (i, x) in self.data.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{}", fmt_q(x))?;
        }
        write!(f, "]")
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::qi;

    #[test]
    fn indexing_is_row_major() {
        let t = Tensor::from_fn(&[2, 3, 4], |i| qi((i[0] * 100 + i[1] * 10 + i[2]) as i64));
        assert_eq!(*t.at3(1, 2, 3), qi(123));
        assert_eq!(*t.get(&[0, 1, 2]), qi(12));
        assert_eq!(t.unravel(23), vec![1, 2, 3]);
    }

    #[test]
    fn witness_picks_largest() {
        let mut t = Tensor::zeros(&[2, 2]);
        assert!(t.witness().is_none());
        t.set(&[0, 1], qi(-5));
        t.set(&[1, 0], qi(3));
        assert_eq!(t.witness(), Some((vec![0, 1], qi(-5))));
    }
}
