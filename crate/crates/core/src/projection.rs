//! Order projections on `F = R^m`: coordinate masks.

use std::fmt;

use num_traits::Zero;

use crate::element::LatticeElement;
use crate::error::{Error, Result};
use crate::rational::Rational;

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct OrderProjection {
    mask: Vec<bool>,
}

impl OrderProjection {
    pub fn new(mask: Vec<bool>) -> Self {
        OrderProjection { mask }
    }

    /// Projection onto the listed 0-based coordinates.
    pub fn from_indices(dim: usize, indices: &[usize]) -> Self {
        let mut mask = vec![false; dim];
        for &i in indices {
            mask[i] = true;
        }
        OrderProjection { mask }
    }

    pub fn identity(dim: usize) -> Self {
        OrderProjection { mask: vec![true; dim] }
    }

    pub fn empty(dim: usize) -> Self {
        OrderProjection { mask: vec![false; dim] }
    }

    /// All `2^m` projections, by bitmask ascending.
    pub fn all(dim: usize) -> impl Iterator<Item = OrderProjection> {
        (0u64..1u64 << dim)
            .map(move |bits| OrderProjection { mask: (0..dim).map(|i| bits >> i & 1 == 1).collect() })
    }

    pub fn dim(&self) -> usize {
        self.mask.len()
    }

    pub fn mask(&self) -> &[bool] {
        &self.mask
    }

    pub fn contains(&self, i: usize) -> bool {
        self.mask[i]
    }

    pub fn indices(&self) -> Vec<usize> {
        (0..self.dim()).filter(|&i| self.mask[i]).collect()
    }

    pub fn is_empty(&self) -> bool {
        !self.mask.iter().any(|&b| b)
    }

    /// `ρ^⊥`.
    pub fn complement(&self) -> Self {
        OrderProjection { mask: self.mask.iter().map(|b| !b).collect() }
    }

    /// Zeroes the coordinates outside the mask.
    pub fn apply(&self, g: &LatticeElement) -> Result<LatticeElement> {
        let coords = g.as_finite().ok_or_else(|| Error::ModelMismatch {
            left: format!("finite:{}", self.dim()),
            right: g.model().to_string(),
        })?;
        if coords.len() != self.dim() {
            return Err(Error::DimensionMismatch { expected: self.dim(), found: coords.len() });
        }
        Ok(LatticeElement::finite(
            coords
                .iter()
                .zip(&self.mask)
                .map(|(c, &keep)| if keep { c.clone() } else { Rational::zero() })
                .collect(),
        ))
    }
}

impl fmt::Display for OrderProjection {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let idx: Vec<String> = self.indices().iter().map(|i| (i + 1).to_string()).collect();
        write!(f, "{{{}}}", idx.join(","))
    }
}

/// Projection onto the band generated by `g`, i.e. onto its support.
pub fn element_band_projection(g: &LatticeElement) -> Result<OrderProjection> {
    let coords = g.as_finite().ok_or_else(|| Error::ModelMismatch {
        left: "finite".into(),
        right: g.model().to_string(),
    })?;
    Ok(OrderProjection::new(coords.iter().map(|c| !c.is_zero()).collect()))
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PartitionOfUnity {
    blocks: Vec<OrderProjection>,
}

impl PartitionOfUnity {
    pub fn new(blocks: Vec<OrderProjection>) -> Result<Self> {
        let dim = blocks.first().ok_or(Error::Empty("partition of unity"))?.dim();
        let mut covered = vec![false; dim];
        for b in &blocks {
            if b.dim() != dim {
                return Err(Error::DimensionMismatch { expected: dim, found: b.dim() });
            }
            if b.is_empty() {
                return Err(Error::Inconsistent("empty block in partition of unity".into()));
            }
            for i in b.indices() {
                if covered[i] {
                    return Err(Error::Inconsistent(format!("coordinate {} covered twice", i + 1)));
                }
                covered[i] = true;
            }
        }
        if covered.iter().any(|c| !c) {
            return Err(Error::Inconsistent("blocks do not cover every coordinate".into()));
        }
        Ok(PartitionOfUnity { blocks })
    }

    pub fn blocks(&self) -> &[OrderProjection] {
        &self.blocks
    }

    pub fn dim(&self) -> usize {
        self.blocks[0].dim()
    }
}

impl fmt::Display for PartitionOfUnity {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.blocks.iter().map(|b| b.to_string()).collect();
        write!(f, "{{{}}}", parts.join(", "))
    }
}

/// Set partitions of `{1..m}` with at most `max_blocks` blocks, generated as
/// restricted growth strings in lexicographic order.
pub fn partitions_of_unity(m: usize, max_blocks: usize) -> PartitionsOfUnity {
    PartitionsOfUnity {
        m,
        max_blocks,
        rgs: if m == 0 || max_blocks == 0 { None } else { Some(vec![0; m]) },
    }
}

pub struct PartitionsOfUnity {
    m: usize,
    max_blocks: usize,
    rgs: Option<Vec<usize>>,
}

impl PartitionsOfUnity {
    fn advance(&mut self) {
        let Some(rgs) = self.rgs.as_mut() else { return };
        // rightmost position that can be incremented
        for i in (1..self.m).rev() {
            let prefix_max = rgs[..i].iter().copied().max().unwrap_or(0);
            if rgs[i] <= prefix_max && rgs[i] + 1 < self.max_blocks {
                rgs[i] += 1;
                for r in rgs.iter_mut().skip(i + 1) {
                    *r = 0;
                }
                return;
            }
        }
        self.rgs = None;
    }
}

impl Iterator for PartitionsOfUnity {
    type Item = PartitionOfUnity;

    fn next(&mut self) -> Option<PartitionOfUnity> {
        let rgs = self.rgs.clone()?;
        self.advance();
        let count = rgs.iter().max().unwrap() + 1;
        let blocks = (0..count)
            .map(|b| OrderProjection::new(rgs.iter().map(|&r| r == b).collect()))
            .collect();
        Some(PartitionOfUnity { blocks })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn band_projection_is_support() {
        let p = element_band_projection(&LatticeElement::from_ints(&[2, 0])).unwrap();
        assert_eq!(p.indices(), vec![0]);
        assert!(element_band_projection(&LatticeElement::from_ints(&[0, 0])).unwrap().is_empty());
        let p = element_band_projection(&LatticeElement::from_ints(&[0, -3, 1])).unwrap();
        assert_eq!(p.indices(), vec![1, 2]);
    }

    #[test]
    fn projection_apply_and_complement() {
        let p = OrderProjection::from_indices(3, &[0, 2]);
        let g = LatticeElement::from_ints(&[4, 5, 6]);
        assert_eq!(p.apply(&g).unwrap(), LatticeElement::from_ints(&[4, 0, 6]));
        assert_eq!(p.complement().apply(&g).unwrap(), LatticeElement::from_ints(&[0, 5, 0]));
        let twice = p.apply(&p.apply(&g).unwrap()).unwrap();
        assert_eq!(twice, p.apply(&g).unwrap());
        assert_eq!(OrderProjection::all(3).count(), 8);
    }

    #[test]
    fn set_partitions_small() {
        let two: Vec<_> = partitions_of_unity(2, 2).collect();
        assert_eq!(two.len(), 2);
        assert_eq!(two[0].blocks().len(), 1);
        assert_eq!(two[1].to_string(), "{{1}, {2}}");
        let one: Vec<_> = partitions_of_unity(1, 4).collect();
        assert_eq!(one.len(), 1);
        assert_eq!(one[0].to_string(), "{{1}}");
        assert_eq!(partitions_of_unity(3, 3).count(), 5);
        assert_eq!(partitions_of_unity(3, 2).count(), 4);
        assert_eq!(partitions_of_unity(2, 1).count(), 1);
    }

    /// Stirling numbers of the second kind by recurrence, summed.
    fn bounded_bell(m: usize, k: usize) -> usize {
        let mut s = vec![vec![0usize; k + 1]; m + 1];
        s[0][0] = 1;
        for n in 1..=m {
            for j in 1..=k {
                s[n][j] = j * s[n - 1][j] + s[n - 1][j - 1];
            }
        }
        s[m].iter().sum()
    }

    #[test]
    fn counts_match_stirling_sums() {
        for m in 1..=7 {
            for k in 1..=m {
                let parts: Vec<_> = partitions_of_unity(m, k).collect();
                assert_eq!(parts.len(), bounded_bell(m, k), "m={m} k={k}");
                for p in &parts {
                    assert!(PartitionOfUnity::new(p.blocks().to_vec()).is_ok());
                    assert!(p.blocks().len() <= k);
                }
            }
        }
    }

    #[test]
    fn partition_validation() {
        let a = OrderProjection::from_indices(2, &[0]);
        assert!(PartitionOfUnity::new(vec![a.clone()]).is_err());
        assert!(PartitionOfUnity::new(vec![a.clone(), a.clone()]).is_err());
        assert!(PartitionOfUnity::new(vec![a, OrderProjection::from_indices(2, &[1])]).is_ok());
        assert!(PartitionOfUnity::new(vec![]).is_err());
    }
}
