//! Doubly indexed coefficient vectors: cylinder `p`, mode `m ∈ [-N, N]`.

use num_complex::Complex64;
use std::ops::{Index, IndexMut};

use crate::{Error, Result};

/// Sequence-space norm used to measure coefficient differences.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Norm {
    /// Plain ℓ² over all entries.
    #[default]
    L0,
    /// Entry `(p, m)` weighted by `(1 + m²)^(-1/2)`.
    LMinusHalf,
}

impl Norm {
    pub fn weight(self, m: i32) -> f64 {
        match self {
            Norm::L0 => 1.0,
            Norm::LMinusHalf => 1.0 / (1.0 + f64::from(m) * f64::from(m)).sqrt(),
        }
    }
}

/// Coefficients laid out cylinder-major, modes ascending from `-N`.
#[derive(Debug, Clone, PartialEq)]
pub struct CoefficientVector {
    cylinders: usize,
    truncation: usize,
    data: Vec<Complex64>,
}

impl CoefficientVector {
    pub fn zeros(cylinders: usize, truncation: usize) -> Self {
        CoefficientVector {
            cylinders,
            truncation,
            data: vec![Complex64::new(0.0, 0.0); cylinders * (2 * truncation + 1)],
        }
    }

    pub fn from_vec(cylinders: usize, truncation: usize, data: Vec<Complex64>) -> Result<Self> {
        if data.len() != cylinders * (2 * truncation + 1) {
            return Err(Error::DimensionMismatch(format!(
                "expected {} entries for M={cylinders}, N={truncation}, got {}",
                cylinders * (2 * truncation + 1),
                data.len()
            )));
        }
        Ok(CoefficientVector {
            cylinders,
            truncation,
            data,
        })
    }

    pub fn from_blocks(truncation: usize, blocks: Vec<Vec<Complex64>>) -> Result<Self> {
        let cylinders = blocks.len();
        let data: Vec<Complex64> = blocks.into_iter().flatten().collect();
        Self::from_vec(cylinders, truncation, data)
    }

    pub fn cylinders(&self) -> usize {
        self.cylinders
    }

    pub fn truncation(&self) -> usize {
        self.truncation
    }

    pub fn modes(&self) -> usize {
        2 * self.truncation + 1
    }

    pub fn len(&self) -> usize {
        self.data.len()
    }

    pub fn is_empty(&self) -> bool {
        self.data.is_empty()
    }

    pub fn as_slice(&self) -> &[Complex64] {
        &self.data
    }

    pub fn as_mut_slice(&mut self) -> &mut [Complex64] {
        &mut self.data
    }

    pub fn into_vec(self) -> Vec<Complex64> {
        self.data
    }

    fn offset(&self, p: usize, m: i32) -> usize {
        let n = self.truncation as i32;
        assert!(
            p < self.cylinders && (-n..=n).contains(&m),
            "index ({p}, {m}) out of range"
        );
        p * self.modes() + (m + n) as usize
    }

    pub fn get(&self, p: usize, m: i32) -> Option<Complex64> {
        let n = self.truncation as i32;
        (p < self.cylinders && m.abs() <= n).then(|| self.data[self.offset(p, m)])
    }

    pub fn block(&self, p: usize) -> &[Complex64] {
        &self.data[p * self.modes()..(p + 1) * self.modes()]
    }

    pub fn block_mut(&mut self, p: usize) -> &mut [Complex64] {
        let w = self.modes();
        &mut self.data[p * w..(p + 1) * w]
    }

    /// `(p, m, value)` in storage order.
    pub fn iter(&self) -> impl Iterator<Item = (usize, i32, Complex64)> + '_ {
        let w = self.modes();
        let n = self.truncation as i32;
        self.data
            .iter()
            .enumerate()
            .map(move |(i, &v)| ((i / w), (i % w) as i32 - n, v))
    }

    /// Embeds into a larger truncation, filling new modes with exact zeros.
    pub fn zero_pad(&self, truncation: usize) -> Result<Self> {
        if truncation < self.truncation {
            return Err(Error::DimensionMismatch(format!(
                "cannot zero-pad N={} down to N={truncation}",
                self.truncation
            )));
        }
        let mut out = Self::zeros(self.cylinders, truncation);
        let shift = truncation - self.truncation;
        for p in 0..self.cylinders {
            out.block_mut(p)[shift..shift + self.modes()].copy_from_slice(self.block(p));
        }
        Ok(out)
    }

    /// Keeps modes `[-N', N']`.
    pub fn truncate(&self, truncation: usize) -> Result<Self> {
        if truncation > self.truncation {
            return Err(Error::DimensionMismatch(format!(
                "cannot truncate N={} up to N={truncation}",
                self.truncation
            )));
        }
        let shift = self.truncation - truncation;
        let w = 2 * truncation + 1;
        let data = (0..self.cylinders)
            .flat_map(|p| self.block(p)[shift..shift + w].iter().copied())
            .collect();
        Ok(CoefficientVector {
            cylinders: self.cylinders,
            truncation,
            data,
        })
    }

    pub fn norm(&self, norm: Norm) -> f64 {
        self.iter()
            .map(|(_, m, v)| norm.weight(m).powi(2) * v.norm_sqr())
            .sum::<f64>()
            .sqrt()
    }

    pub fn l2(&self) -> f64 {
        self.norm(Norm::L0)
    }

    /// `self - other` after zero-padding both to the larger truncation.
    pub fn padded_difference(&self, other: &Self) -> Result<Self> {
        if self.cylinders != other.cylinders {
            return Err(Error::DimensionMismatch(format!(
                "cylinder counts differ: {} vs {}",
                self.cylinders, other.cylinders
            )));
        }
        let n = self.truncation.max(other.truncation);
        let mut a = self.zero_pad(n)?;
        let b = other.zero_pad(n)?;
        for (x, y) in a.data.iter_mut().zip(&b.data) {
            *x -= y;
        }
        Ok(a)
    }

    pub fn scale(&self, c: Complex64) -> Self {
        CoefficientVector {
            data: self.data.iter().map(|v| v * c).collect(),
            ..self.clone()
        }
    }
}

impl Index<(usize, i32)> for CoefficientVector {
    type Output = Complex64;

    fn index(&self, (p, m): (usize, i32)) -> &Complex64 {
        &self.data[self.offset(p, m)]
    }
}

impl IndexMut<(usize, i32)> for CoefficientVector {
    fn index_mut(&mut self, (p, m): (usize, i32)) -> &mut Complex64 {
        let i = self.offset(p, m);
        &mut self.data[i]
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64) -> Complex64 {
        Complex64::new(re, -re)
    }

    #[test]
    fn layout_and_padding() {
        let mut v = CoefficientVector::zeros(2, 1);
        v[(0, -1)] = c(1.0);
        v[(1, 1)] = c(2.0);
        assert_eq!(v.as_slice()[0], c(1.0));
        assert_eq!(v.as_slice()[5], c(2.0));
        let w = v.zero_pad(3).unwrap();
        assert_eq!(w.modes(), 7);
        assert_eq!(w[(0, -1)], c(1.0));
        assert_eq!(w[(1, 1)], c(2.0));
        assert_eq!(
            w.iter()
                .filter(|(_, _, x)| *x != Complex64::new(0.0, 0.0))
                .count(),
            2
        );
        assert_eq!(w.truncate(1).unwrap(), v);
        assert!(v.truncate(2).is_err());
        assert_eq!(v.get(0, 2), None);
    }

    #[test]
    fn norms() {
        let v = CoefficientVector::from_blocks(1, vec![vec![c(1.0), c(0.0), c(1.0)]]).unwrap();
        assert!((v.l2() - 2.0).abs() < 1e-15);
        assert!((v.norm(Norm::LMinusHalf) - 2.0f64.sqrt()).abs() < 1e-15);
        let d = v.padded_difference(&v.truncate(0).unwrap()).unwrap();
        assert!((d.l2() - 2.0).abs() < 1e-15);
        assert!(v
            .padded_difference(&CoefficientVector::zeros(2, 1))
            .is_err());
    }
}
