//! Continuous piecewise-linear functions `R -> R` with rational data.
//!
//! A function is a strictly increasing list of breakpoints `(t, value)` plus
//! the slopes of the two unbounded rays. The class is closed under sums,
//! scalar multiples, and pointwise max/min; all are computed exactly.

use serde::{Deserialize, Serialize};

use num_traits::{Signed, Zero};

use crate::error::{Error, Result};
use crate::rational::{self, Rational};

#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "RawPwl", into = "RawPwl")]
pub struct PiecewiseLinearFn {
    breakpoints: Vec<(Rational, Rational)>,
    left_slope: Rational,
    right_slope: Rational,
}

#[derive(Serialize, Deserialize)]
struct RawPwl {
    breakpoints: Vec<[String; 2]>,
    #[serde(with = "rational::serde_text")]
    left_slope: Rational,
    #[serde(with = "rational::serde_text")]
    right_slope: Rational,
}

impl TryFrom<RawPwl> for PiecewiseLinearFn {
    type Error = Error;

    fn try_from(raw: RawPwl) -> Result<Self> {
        let points = raw
            .breakpoints
            .iter()
            .map(|[t, v]| Ok((rational::parse(t)?, rational::parse(v)?)))
            .collect::<Result<Vec<_>>>()?;
        PiecewiseLinearFn::new(points, raw.left_slope, raw.right_slope)
    }
}

impl From<PiecewiseLinearFn> for RawPwl {
    fn from(f: PiecewiseLinearFn) -> Self {
        RawPwl {
            breakpoints: f
                .breakpoints
                .iter()
                .map(|(t, v)| [rational::format(t), rational::format(v)])
                .collect(),
            left_slope: f.left_slope,
            right_slope: f.right_slope,
        }
    }
}

impl PiecewiseLinearFn {
    pub fn new(
        breakpoints: Vec<(Rational, Rational)>,
        left_slope: Rational,
        right_slope: Rational,
    ) -> Result<Self> {
        if breakpoints.is_empty() {
            return Err(Error::InvalidFunction("no breakpoints".into()));
        }
        if breakpoints.windows(2).any(|w| w[0].0 >= w[1].0) {
            return Err(Error::InvalidFunction("breakpoints not strictly increasing".into()));
        }
        Ok(PiecewiseLinearFn { breakpoints, left_slope, right_slope })
    }

    pub fn zero() -> Self {
        Self::linear(Rational::zero())
    }

    /// `t ↦ slope·t`.
    pub fn linear(slope: Rational) -> Self {
        PiecewiseLinearFn {
            breakpoints: vec![(Rational::zero(), Rational::zero())],
            left_slope: slope.clone(),
            right_slope: slope,
        }
    }

    /// `t ↦ |t|`.
    pub fn abs() -> Self {
        PiecewiseLinearFn {
            breakpoints: vec![(Rational::zero(), Rational::zero())],
            left_slope: rational::int(-1),
            right_slope: rational::int(1),
        }
    }

    pub fn breakpoints(&self) -> &[(Rational, Rational)] {
        &self.breakpoints
    }

    pub fn left_slope(&self) -> &Rational {
        &self.left_slope
    }

    pub fn right_slope(&self) -> &Rational {
        &self.right_slope
    }

    pub fn eval(&self, t: &Rational) -> Rational {
        let bp = &self.breakpoints;
        let k = bp.partition_point(|(s, _)| s <= t);
        if k == 0 {
            let (t0, v0) = &bp[0];
            return v0 + &self.left_slope * (t - t0);
        }
        let (ta, va) = &bp[k - 1];
        if k == bp.len() {
            return va + &self.right_slope * (t - ta);
        }
        let (tb, vb) = &bp[k];
        va + (vb - va) * (t - ta) / (tb - ta)
    }

    pub fn vanishes_at_origin(&self) -> bool {
        self.eval(&Rational::zero()).is_zero()
    }

    /// Same function on the merged breakpoint grid of `self` and `other`,
    /// combined through a map that is affine in each argument.
    fn combine_affine(
        &self,
        other: &Self,
        op: impl Fn(&Rational, &Rational) -> Rational,
    ) -> Self {
        let ts = merge_ts(self, other, &[]);
        let breakpoints = ts.into_iter().map(|t| {
            let v = op(&self.eval(&t), &other.eval(&t));
            (t, v)
        });
        PiecewiseLinearFn {
            breakpoints: breakpoints.collect(),
            left_slope: op(&self.left_slope, &other.left_slope),
            right_slope: op(&self.right_slope, &other.right_slope),
        }
        .canonical()
    }

    pub fn add(&self, other: &Self) -> Self {
        self.combine_affine(other, |a, b| a + b)
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.combine_affine(other, |a, b| a - b)
    }

    pub fn scale(&self, c: &Rational) -> Self {
        PiecewiseLinearFn {
            breakpoints: self.breakpoints.iter().map(|(t, v)| (t.clone(), v * c)).collect(),
            left_slope: &self.left_slope * c,
            right_slope: &self.right_slope * c,
        }
        .canonical()
    }

    fn envelope(&self, other: &Self, upper: bool) -> Self {
        let diff = self.sub(other);
        let crossings = diff.sign_changes();
        let ts = merge_ts(self, other, &crossings);
        let pick = |a: Rational, b: Rational| if (a >= b) == upper { a } else { b };
        let breakpoints = ts
            .into_iter()
            .map(|t| {
                let v = pick(self.eval(&t), other.eval(&t));
                (t, v)
            })
            .collect();
        // far left the larger function has the smaller slope, far right the larger one
        let (left_slope, right_slope) = if upper {
            (
                self.left_slope.clone().min(other.left_slope.clone()),
                self.right_slope.clone().max(other.right_slope.clone()),
            )
        } else {
            (
                self.left_slope.clone().max(other.left_slope.clone()),
                self.right_slope.clone().min(other.right_slope.clone()),
            )
        };
        PiecewiseLinearFn { breakpoints, left_slope, right_slope }.canonical()
    }

    /// Pointwise maximum.
    pub fn max(&self, other: &Self) -> Self {
        self.envelope(other, true)
    }

    /// Pointwise minimum.
    pub fn min(&self, other: &Self) -> Self {
        self.envelope(other, false)
    }

    /// Points where the function crosses zero strictly inside a segment or ray.
    fn sign_changes(&self) -> Vec<Rational> {
        let bp = &self.breakpoints;
        let mut out = Vec::new();
        let (t0, v0) = &bp[0];
        if !self.left_slope.is_zero() && !v0.is_zero() {
            let root = t0 - v0 / &self.left_slope;
            if &root < t0 {
                out.push(root);
            }
        }
        for w in bp.windows(2) {
            let ((ta, va), (tb, vb)) = (&w[0], &w[1]);
            if (va.is_positive() && vb.is_negative()) || (va.is_negative() && vb.is_positive()) {
                out.push(ta + (tb - ta) * va / (va - vb));
            }
        }
        let (tk, vk) = bp.last().unwrap();
        if !self.right_slope.is_zero() && !vk.is_zero() {
            let root = tk - vk / &self.right_slope;
            if &root > tk {
                out.push(root);
            }
        }
        out
    }

    /// Minimal representation: only genuine kinks are kept; a globally affine
    /// function keeps the single breakpoint `t = 0`.
    pub fn canonical(&self) -> Self {
        let bp = &self.breakpoints;
        let slope = |k: usize| -> Rational {
            // slope of the segment left of breakpoint k
            if k == 0 {
                self.left_slope.clone()
            } else if k == bp.len() {
                self.right_slope.clone()
            } else {
                (&bp[k].1 - &bp[k - 1].1) / (&bp[k].0 - &bp[k - 1].0)
            }
        };
        let kinks: Vec<(Rational, Rational)> = (0..bp.len())
            .filter(|&k| slope(k) != slope(k + 1))
            .map(|k| bp[k].clone())
            .collect();
        let breakpoints = if kinks.is_empty() {
            vec![(Rational::zero(), self.eval(&Rational::zero()))]
        } else {
            kinks
        };
        PiecewiseLinearFn {
            breakpoints,
            left_slope: self.left_slope.clone(),
            right_slope: self.right_slope.clone(),
        }
    }

    /// Equality as functions on `R`.
    pub fn same_function(&self, other: &Self) -> bool {
        self.canonical() == other.canonical()
    }

    /// `f(t) >= 0` for every real `t`.
    pub fn is_nonnegative(&self) -> bool {
        self.breakpoints.iter().all(|(_, v)| !v.is_negative())
            && !self.left_slope.is_positive()
            && !self.right_slope.is_negative()
    }

    /// Some `t` with `f(t) < 0`, if any.
    pub fn negative_witness(&self) -> Option<Rational> {
        if let Some((t, _)) = self.breakpoints.iter().find(|(_, v)| v.is_negative()) {
            return Some(t.clone());
        }
        let one = rational::one();
        if self.left_slope.is_positive() {
            let (t0, v0) = &self.breakpoints[0];
            return Some(t0 - (v0 + &one) / &self.left_slope);
        }
        if self.right_slope.is_negative() {
            let (tk, vk) = self.breakpoints.last().unwrap();
            return Some(tk + (vk + &one) / -&self.right_slope);
        }
        None
    }

    /// Exact `(min, max)` of the function on `[lo, hi]`.
    pub fn range_on(&self, lo: &Rational, hi: &Rational) -> (Rational, Rational) {
        let mut values = vec![self.eval(lo), self.eval(hi)];
        values.extend(
            self.breakpoints
                .iter()
                .filter(|(t, _)| t >= lo && t <= hi)
                .map(|(_, v)| v.clone()),
        );
        let min = values.iter().min().unwrap().clone();
        let max = values.iter().max().unwrap().clone();
        (min, max)
    }

    /// Points where the function's behavior can change: breakpoints, zero
    /// crossings, midpoints between them, and one point beyond each end.
    /// Every connected piece of the zero set contains one of these.
    pub fn probe_points(fs: &[&PiecewiseLinearFn]) -> Vec<Rational> {
        let mut ts: Vec<Rational> = Vec::new();
        for f in fs {
            ts.extend(f.breakpoints.iter().map(|(t, _)| t.clone()));
            ts.extend(f.sign_changes());
        }
        ts.push(Rational::zero());
        ts.sort();
        ts.dedup();
        let mut out = ts.clone();
        out.extend(ts.windows(2).map(|w| (&w[0] + &w[1]) / rational::int(2)));
        out.push(ts.first().unwrap() - rational::one());
        out.push(ts.last().unwrap() + rational::one());
        out.sort();
        out.dedup();
        out
    }
}

fn merge_ts(f: &PiecewiseLinearFn, g: &PiecewiseLinearFn, extra: &[Rational]) -> Vec<Rational> {
    let mut ts: Vec<Rational> = f
        .breakpoints
        .iter()
        .chain(&g.breakpoints)
        .map(|(t, _)| t.clone())
        .chain(extra.iter().cloned())
        .collect();
    ts.sort();
    ts.dedup();
    ts
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{int, ratio};

    fn pts(p: &[(i64, i64)], ls: i64, rs: i64) -> PiecewiseLinearFn {
        PiecewiseLinearFn::new(
            p.iter().map(|&(t, v)| (int(t), int(v))).collect(),
            int(ls),
            int(rs),
        )
        .unwrap()
    }

    #[test]
    fn evaluation() {
        let f = pts(&[(-1, 1), (0, 0), (2, 4)], -2, 0);
        assert_eq!(f.eval(&int(-3)), int(5));
        assert_eq!(f.eval(&int(1)), int(2));
        assert_eq!(f.eval(&ratio(1, 2)), int(1));
        assert_eq!(f.eval(&int(10)), int(4));
        assert!(f.vanishes_at_origin());
    }

    #[test]
    fn rejects_unsorted() {
        assert!(PiecewiseLinearFn::new(vec![(int(1), int(0)), (int(0), int(0))], int(0), int(0)).is_err());
        assert!(PiecewiseLinearFn::new(vec![], int(0), int(0)).is_err());
    }

    #[test]
    fn max_of_identity_and_negation_is_abs() {
        let id = PiecewiseLinearFn::linear(int(1));
        let neg = PiecewiseLinearFn::linear(int(-1));
        let m = id.max(&neg);
        assert_eq!(m, PiecewiseLinearFn::abs());
        assert_eq!(id.min(&neg), PiecewiseLinearFn::abs().scale(&int(-1)));
    }

    #[test]
    fn envelope_with_crossings_on_rays() {
        // f = t, g = 1 (for t<=... no, g(t) = t/2 + 1): crossing at t = 2 on the right ray
        let f = PiecewiseLinearFn::linear(int(1));
        let g = PiecewiseLinearFn::new(vec![(int(0), int(1))], ratio(1, 2), ratio(1, 2)).unwrap();
        let m = f.max(&g);
        for k in -12..=12 {
            let t = ratio(k, 3);
            assert_eq!(m.eval(&t), f.eval(&t).max(g.eval(&t)));
        }
        assert_eq!(m.breakpoints().len(), 1);
        assert_eq!(m.breakpoints()[0].0, int(2));
    }

    #[test]
    fn canonical_drops_collinear_points() {
        let f = pts(&[(-1, -1), (0, 0), (3, 3)], 1, 1);
        assert_eq!(f.canonical(), PiecewiseLinearFn::linear(int(1)));
        assert!(f.same_function(&PiecewiseLinearFn::linear(int(1))));
    }

    #[test]
    fn positivity_and_witness() {
        assert!(PiecewiseLinearFn::abs().is_nonnegative());
        let id = PiecewiseLinearFn::linear(int(1));
        assert!(!id.is_nonnegative());
        let w = id.negative_witness().unwrap();
        assert!(id.eval(&w) < int(0));
        let dip = pts(&[(0, 0), (1, -1), (2, 0)], 0, 1);
        let w = dip.negative_witness().unwrap();
        assert!(dip.eval(&w) < int(0));
        let falling = pts(&[(0, 0), (1, 3)], 0, -1);
        let w = falling.negative_witness().unwrap();
        assert!(falling.eval(&w) < int(0));
        assert_eq!(PiecewiseLinearFn::abs().negative_witness(), None);
    }

    #[test]
    fn range_includes_interior_breakpoints() {
        let f = pts(&[(-1, 1), (0, 0), (1, 1)], -1, 1);
        assert_eq!(f.range_on(&int(-2), &int(2)), (int(0), int(2)));
        assert_eq!(f.range_on(&int(1), &int(3)), (int(1), int(3)));
    }

    #[test]
    fn probe_points_find_zero_crossing() {
        // zero at t = 0 and t = 2; probe set must contain 2
        let f = pts(&[(0, 0), (1, 1)], 0, -1);
        let probes = PiecewiseLinearFn::probe_points(&[&f]);
        assert!(probes.contains(&int(2)));
    }

    #[test]
    fn serde_round_trip() {
        let f = pts(&[(-1, 1), (0, 0)], -1, 3);
        let text = serde_json::to_string(&f).unwrap();
        let back: PiecewiseLinearFn = serde_json::from_str(&text).unwrap();
        assert_eq!(f, back);
    }
}
