//! Abstract Uryson operators `T: E -> R^m`.
//!
//! The concrete representation is a kernel matrix of scalar functions,
//! `(Tx)_i = Σ_j T_ij(x_j)`, optionally extended on sequence domains by a tail
//! column `Φ_i(tail(x))`. Anything else that evaluates pointwise (derived
//! operators, deliberately broken controls) implements [`Operator`].

use std::fmt;
use std::str::FromStr;

use num_traits::Zero;

use crate::element::{LatticeElement, Model};
use crate::error::{Error, Result};
use crate::pwl::PiecewiseLinearFn;
use crate::random;
use crate::rational::{self, Rational};
use crate::report::Verdict;

/// Domain of an operator: `R^n`, or sequences read through the first `J`
/// coordinates (plus the tail, when a tail column is present).
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Domain {
    Finite(usize),
    EcSeq(usize),
}

impl Domain {
    pub fn model(&self) -> Model {
        match *self {
            Domain::Finite(n) => Model::Finite(n),
            Domain::EcSeq(_) => Model::EcSeq,
        }
    }

    /// Number of kernel columns.
    pub fn columns(&self) -> usize {
        match *self {
            Domain::Finite(n) | Domain::EcSeq(n) => n,
        }
    }

    pub fn check(&self, x: &LatticeElement) -> Result<()> {
        if x.model() == self.model() {
            Ok(())
        } else {
            Err(Error::ModelMismatch { left: self.to_string(), right: x.model().to_string() })
        }
    }
}

impl fmt::Display for Domain {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Domain::Finite(n) => write!(f, "finite:{n}"),
            Domain::EcSeq(j) => write!(f, "ecseq:{j}"),
        }
    }
}

impl FromStr for Domain {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let bad = || Error::Scenario(format!("bad domain `{s}` (expected finite:n or ecseq:J)"));
        let (kind, size) = s.trim().split_once(':').ok_or_else(bad)?;
        let size: usize = size.trim().parse().map_err(|_| bad())?;
        match kind.trim() {
            "finite" => Ok(Domain::Finite(size)),
            "ecseq" => Ok(Domain::EcSeq(size)),
            _ => Err(bad()),
        }
    }
}

/// Anything that evaluates like an orthogonally additive operator.
pub trait Operator {
    fn domain(&self) -> Domain;

    fn codomain(&self) -> usize;

    fn apply(&self, x: &LatticeElement) -> Result<LatticeElement>;

    /// Positivity as far as the representation can decide it.
    fn is_positive(&self) -> bool;
}

impl<O: Operator + ?Sized> Operator for &O {
    fn domain(&self) -> Domain {
        (**self).domain()
    }

    fn codomain(&self) -> usize {
        (**self).codomain()
    }

    fn apply(&self, x: &LatticeElement) -> Result<LatticeElement> {
        (**self).apply(x)
    }

    fn is_positive(&self) -> bool {
        (**self).is_positive()
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct UrysonOperator {
    domain: Domain,
    codomain: usize,
    kernel: Vec<Vec<PiecewiseLinearFn>>,
    tail: Option<Vec<PiecewiseLinearFn>>,
}

impl UrysonOperator {
    pub fn new(
        domain: Domain,
        codomain: usize,
        kernel: Vec<Vec<PiecewiseLinearFn>>,
        tail: Option<Vec<PiecewiseLinearFn>>,
    ) -> Result<Self> {
        if kernel.len() != codomain {
            return Err(Error::DimensionMismatch { expected: codomain, found: kernel.len() });
        }
        for (i, row) in kernel.iter().enumerate() {
            if row.len() != domain.columns() {
                return Err(Error::DimensionMismatch { expected: domain.columns(), found: row.len() });
            }
            if let Some(j) = row.iter().position(|f| !f.vanishes_at_origin()) {
                return Err(Error::KernelNotZeroAtOrigin { row: i + 1, col: j + 1 });
            }
        }
        if let Some(tail) = &tail {
            if matches!(domain, Domain::Finite(_)) {
                return Err(Error::TailOnFiniteDomain);
            }
            if tail.len() != codomain {
                return Err(Error::DimensionMismatch { expected: codomain, found: tail.len() });
            }
            if let Some(i) = tail.iter().position(|f| !f.vanishes_at_origin()) {
                return Err(Error::TailNotZeroAtOrigin { row: i + 1 });
            }
        }
        Ok(UrysonOperator { domain, codomain, kernel, tail })
    }

    /// Pure kernel operator on `R^n`; `rows` is `m × n`.
    pub fn finite(rows: Vec<Vec<PiecewiseLinearFn>>) -> Result<Self> {
        let n = rows.first().map_or(0, Vec::len);
        Self::new(Domain::Finite(n), rows.len(), rows, None)
    }

    pub fn zero(domain: Domain, codomain: usize) -> Self {
        let kernel = vec![vec![PiecewiseLinearFn::zero(); domain.columns()]; codomain];
        UrysonOperator { domain, codomain, kernel, tail: None }
    }

    /// Square diagonal operator on `R^n` with the same entry on the diagonal.
    pub fn diagonal(n: usize, entry: &PiecewiseLinearFn) -> Self {
        let kernel = (0..n)
            .map(|i| {
                (0..n)
                    .map(|j| if i == j { entry.clone() } else { PiecewiseLinearFn::zero() })
                    .collect()
            })
            .collect();
        Self::finite(kernel).expect("diagonal entries vanish at 0")
    }

    pub fn kernel(&self) -> &[Vec<PiecewiseLinearFn>] {
        &self.kernel
    }

    pub fn tail(&self) -> Option<&[PiecewiseLinearFn]> {
        self.tail.as_deref()
    }

    pub fn has_tail(&self) -> bool {
        self.tail.is_some()
    }

    fn entries(&self) -> impl Iterator<Item = &PiecewiseLinearFn> {
        self.kernel.iter().flatten().chain(self.tail.iter().flatten())
    }

    fn check_compatible(&self, other: &Self) -> Result<()> {
        if self.domain != other.domain {
            return Err(Error::ModelMismatch {
                left: self.domain.to_string(),
                right: other.domain.to_string(),
            });
        }
        if self.codomain != other.codomain {
            return Err(Error::DimensionMismatch { expected: self.codomain, found: other.codomain });
        }
        Ok(())
    }

    /// Entrywise combination of two operators on the same domain. A missing
    /// tail column counts as zero.
    pub fn zip_entries(
        &self,
        other: &Self,
        op: impl Fn(&PiecewiseLinearFn, &PiecewiseLinearFn) -> PiecewiseLinearFn,
    ) -> Result<Self> {
        self.check_compatible(other)?;
        let kernel = self
            .kernel
            .iter()
            .zip(&other.kernel)
            .map(|(a, b)| a.iter().zip(b).map(|(f, g)| op(f, g)).collect())
            .collect();
        let tail = match (&self.tail, &other.tail) {
            (None, None) => None,
            (a, b) => {
                let zeros = vec![PiecewiseLinearFn::zero(); self.codomain];
                let a = a.as_ref().unwrap_or(&zeros);
                let b = b.as_ref().unwrap_or(&zeros);
                Some(a.iter().zip(b).map(|(f, g)| op(f, g)).collect())
            }
        };
        Self::new(self.domain, self.codomain, kernel, tail)
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.zip_entries(other, PiecewiseLinearFn::add)
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.zip_entries(other, PiecewiseLinearFn::sub)
    }

    pub fn scale(&self, c: &Rational) -> Self {
        UrysonOperator {
            domain: self.domain,
            codomain: self.codomain,
            kernel: self.kernel.iter().map(|row| row.iter().map(|f| f.scale(c)).collect()).collect(),
            tail: self.tail.as_ref().map(|t| t.iter().map(|f| f.scale(c)).collect()),
        }
    }

    /// The kernel part alone (tail column dropped).
    pub fn kernel_part(&self) -> Self {
        UrysonOperator { tail: None, ..self.clone() }
    }

    /// The tail column alone, with a zero kernel.
    pub fn tail_part(&self) -> Self {
        UrysonOperator { tail: self.tail.clone(), ..Self::zero(self.domain, self.codomain) }
    }

    /// `other <= self` in the operator order, i.e. `self - other` is positive.
    pub fn dominates(&self, other: &Self) -> Result<bool> {
        Ok(self.sub(other)?.is_positive())
    }

    /// Equality as maps (entrywise function equality).
    pub fn same_operator(&self, other: &Self) -> bool {
        self.domain == other.domain
            && self.codomain == other.codomain
            && self
                .sub(other)
                .map(|d| d.entries().all(|f| f.same_function(&PiecewiseLinearFn::zero())))
                .unwrap_or(false)
    }

    /// An input `x` and row `i` with `(Tx)_i < 0`, when `T` is not positive.
    pub fn positivity_witness(&self) -> Option<(LatticeElement, usize)> {
        let cols = self.domain.columns();
        for (i, row) in self.kernel.iter().enumerate() {
            for (j, f) in row.iter().enumerate() {
                if let Some(t) = f.negative_witness() {
                    let mut coords = vec![Rational::zero(); cols];
                    coords[j] = t;
                    let x = match self.domain {
                        Domain::Finite(_) => LatticeElement::finite(coords),
                        Domain::EcSeq(_) => LatticeElement::ec_seq(coords, Rational::zero()),
                    };
                    return Some((x, i));
                }
            }
        }
        for (i, f) in self.tail.iter().flatten().enumerate() {
            if let Some(t) = f.negative_witness() {
                let x = LatticeElement::ec_seq(vec![Rational::zero(); cols], t);
                return Some((x, i));
            }
        }
        None
    }

    /// A box `[lo, hi]` in `R^m` containing `T([-b, b])`, computed from the
    /// exact ranges of every entry. Requires `b >= 0`.
    pub fn range_box(&self, b: &LatticeElement) -> Result<(LatticeElement, LatticeElement)> {
        self.domain.check(b)?;
        if !b.is_nonnegative() {
            return Err(Error::Inconsistent("order interval bound must be nonnegative".into()));
        }
        let mut lo = vec![Rational::zero(); self.codomain];
        let mut hi = vec![Rational::zero(); self.codomain];
        for i in 0..self.codomain {
            for (j, f) in self.kernel[i].iter().enumerate() {
                let (a, c) = f.range_on(&-b.coord(j), b.coord(j));
                lo[i] += a;
                hi[i] += c;
            }
            if let (Some(tail), Some(bt)) = (&self.tail, b.tail()) {
                let (a, c) = tail[i].range_on(&-bt, bt);
                lo[i] += a;
                hi[i] += c;
            }
        }
        Ok((LatticeElement::finite(lo), LatticeElement::finite(hi)))
    }
}

impl Operator for UrysonOperator {
    fn domain(&self) -> Domain {
        self.domain
    }

    fn codomain(&self) -> usize {
        self.codomain
    }

    fn apply(&self, x: &LatticeElement) -> Result<LatticeElement> {
        self.domain.check(x)?;
        let out = (0..self.codomain)
            .map(|i| {
                // entries vanish at 0, so zero coordinates contribute nothing
                let mut acc: Rational = self.kernel[i]
                    .iter()
                    .enumerate()
                    .filter(|(j, _)| !x.coord(*j).is_zero())
                    .map(|(j, f)| f.eval(x.coord(j)))
                    .sum();
                if let (Some(tail), Some(t)) = (&self.tail, x.tail()) {
                    if !t.is_zero() {
                        acc += tail[i].eval(t);
                    }
                }
                acc
            })
            .collect();
        Ok(LatticeElement::finite(out))
    }

    fn is_positive(&self) -> bool {
        self.entries().all(PiecewiseLinearFn::is_nonnegative)
    }
}

/// `φ ⊗ u`: `e ↦ u·φ(e)` with scalar-valued `φ`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OneDimensionalOperator {
    phi: UrysonOperator,
    u: LatticeElement,
}

impl OneDimensionalOperator {
    pub fn new(phi: UrysonOperator, u: LatticeElement) -> Result<Self> {
        if phi.codomain != 1 {
            return Err(Error::DimensionMismatch { expected: 1, found: phi.codomain });
        }
        if u.as_finite().is_none() {
            return Err(Error::ModelMismatch { left: "finite".into(), right: u.model().to_string() });
        }
        Ok(OneDimensionalOperator { phi, u })
    }

    pub fn phi(&self) -> &UrysonOperator {
        &self.phi
    }

    pub fn u(&self) -> &LatticeElement {
        &self.u
    }

    /// Materialized as a kernel operator with entries `u_i · φ_j`.
    pub fn to_operator(&self) -> UrysonOperator {
        let u = self.u.coords();
        let kernel = u
            .iter()
            .map(|ui| self.phi.kernel[0].iter().map(|f| f.scale(ui)).collect())
            .collect();
        let tail = self.phi.tail.as_ref().map(|t| u.iter().map(|ui| t[0].scale(ui)).collect());
        UrysonOperator::new(self.phi.domain, u.len(), kernel, tail)
            .expect("scaled entries still vanish at 0")
    }
}

pub fn one_dimensional(phi: &UrysonOperator, u: &LatticeElement) -> Result<UrysonOperator> {
    Ok(OneDimensionalOperator::new(phi.clone(), u.clone())?.to_operator())
}

/// Discrete integral operator `(Tf)(s) = Σ_t μ(t)·K(s, t, f(t))` over finite
/// index sets. `kernel[s][t]` is `K(s, t, ·)`.
pub fn from_integral_kernel(
    kernel: &[Vec<PiecewiseLinearFn>],
    weights: &[Rational],
) -> Result<UrysonOperator> {
    if let Some(index) = weights.iter().position(|w| *w <= Rational::zero()) {
        return Err(Error::NonpositiveWeight { index: index + 1 });
    }
    let rows = kernel
        .iter()
        .map(|row| {
            if row.len() != weights.len() {
                return Err(Error::DimensionMismatch { expected: weights.len(), found: row.len() });
            }
            Ok(row.iter().zip(weights).map(|(k, w)| k.scale(w)).collect())
        })
        .collect::<Result<Vec<_>>>()?;
    // C0 is checked on the unscaled kernel so the error names the input entry
    for (s, row) in kernel.iter().enumerate() {
        if let Some(t) = row.iter().position(|k| !k.vanishes_at_origin()) {
            return Err(Error::KernelNotZeroAtOrigin { row: s + 1, col: t + 1 });
        }
    }
    UrysonOperator::new(Domain::Finite(weights.len()), kernel.len(), rows, None)
}

type EvalFn<'a> = Box<dyn Fn(&LatticeElement) -> Result<LatticeElement> + Send + Sync + 'a>;

/// An operator given by an arbitrary evaluation rule.
pub struct PointwiseOperator<'a> {
    domain: Domain,
    codomain: usize,
    positive: bool,
    eval: EvalFn<'a>,
}

impl<'a> PointwiseOperator<'a> {
    /// `positive` is a claim about the rule, trusted by callers that require
    /// positive operators.
    pub fn new(
        domain: Domain,
        codomain: usize,
        positive: bool,
        eval: impl Fn(&LatticeElement) -> Result<LatticeElement> + Send + Sync + 'a,
    ) -> Self {
        PointwiseOperator { domain, codomain, positive, eval: Box::new(eval) }
    }

    /// `a - b`, evaluated pointwise.
    pub fn difference<A, B>(a: &'a A, b: &'a B, positive: bool) -> Self
    where
        A: Operator + Sync + ?Sized,
        B: Operator + Sync + ?Sized,
    {
        PointwiseOperator::new(a.domain(), a.codomain(), positive, move |x| {
            a.apply(x)?.try_sub(&b.apply(x)?)
        })
    }
}

impl Operator for PointwiseOperator<'_> {
    fn domain(&self) -> Domain {
        self.domain
    }

    fn codomain(&self) -> usize {
        self.codomain
    }

    fn apply(&self, x: &LatticeElement) -> Result<LatticeElement> {
        self.domain.check(x)?;
        (self.eval)(x)
    }

    fn is_positive(&self) -> bool {
        self.positive
    }
}

/// A kernel operator with an injected cross term `c·x_1·x_2` in the first
/// output row. Not orthogonally additive; used as a negative control.
#[derive(Clone, Debug)]
pub struct CrossTermOperator {
    pub base: UrysonOperator,
    pub coefficient: Rational,
}

impl Operator for CrossTermOperator {
    fn domain(&self) -> Domain {
        self.base.domain()
    }

    fn codomain(&self) -> usize {
        self.base.codomain()
    }

    fn apply(&self, x: &LatticeElement) -> Result<LatticeElement> {
        let mut out = self.base.apply(x)?.coords().to_vec();
        let cols = self.domain().columns();
        let second = if cols > 1 { x.coord(1) } else { x.coord(0) };
        if cols > 0 && !out.is_empty() {
            out[0] += &self.coefficient * x.coord(0) * second;
        }
        Ok(LatticeElement::finite(out))
    }

    fn is_positive(&self) -> bool {
        self.base.is_positive()
    }
}

/// Samples disjoint pairs `(y, z)` by splitting random elements along a random
/// support mask and checks `T(y + z) = Ty + Tz` exactly.
pub fn check_orthogonal_additivity<O: Operator + ?Sized>(op: &O, trials: usize, seed: u64) -> Verdict {
    let mut rng = random::rng(seed);
    let model = op.domain().model();
    let max_prefix = op.domain().columns() + 2;
    for trial in 0..trials {
        let x = random::element(&mut rng, model, max_prefix);
        let (y, z) = random::support_split(&mut rng, &x);
        let outcome = (|| -> Result<Option<String>> {
            let whole = op.apply(&(&y + &z))?;
            let parts = &op.apply(&y)? + &op.apply(&z)?;
            Ok((whole != parts).then(|| format!("y={y} z={z}: T(y+z)={whole} but Ty+Tz={parts}")))
        })();
        match outcome {
            Ok(None) => {}
            Ok(Some(w)) => return Verdict::fail(trial + 1, w),
            Err(e) => return Verdict::fail(trial + 1, format!("evaluation error: {e}")),
        }
    }
    Verdict::pass(trials)
}

/// Row labels for error messages and reports.
pub fn describe(op: &UrysonOperator) -> String {
    let mut rows = Vec::new();
    for (i, row) in op.kernel.iter().enumerate() {
        let entries: Vec<String> = row
            .iter()
            .map(|f| {
                let pts: Vec<String> = f
                    .breakpoints()
                    .iter()
                    .map(|(t, v)| format!("{}:{}", rational::format(t), rational::format(v)))
                    .collect();
                format!(
                    "[{}; {} {}]",
                    pts.join(","),
                    rational::format(f.left_slope()),
                    rational::format(f.right_slope())
                )
            })
            .collect();
        rows.push(format!("row{}={}", i + 1, entries.join(" ")));
    }
    if op.tail.is_some() {
        rows.push("tail".into());
    }
    rows.join(" ")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{int, ratio};

    fn lin(c: i64) -> PiecewiseLinearFn {
        PiecewiseLinearFn::linear(int(c))
    }

    fn two_column() -> UrysonOperator {
        UrysonOperator::finite(vec![vec![lin(1), lin(-1)]]).unwrap()
    }

    #[test]
    fn apply_examples() {
        let t = two_column();
        assert_eq!(t.apply(&LatticeElement::from_ints(&[1, 1])).unwrap(), LatticeElement::from_ints(&[0]));
        assert!(t.apply(&LatticeElement::from_ints(&[0, 0])).unwrap().is_zero());
        let k = UrysonOperator::new(Domain::EcSeq(1), 1, vec![vec![lin(1)]], Some(vec![lin(1)])).unwrap();
        let e = LatticeElement::ec_seq(vec![int(5)], int(3));
        assert_eq!(k.apply(&e).unwrap(), LatticeElement::from_ints(&[8]));
        assert!(t.apply(&e).is_err());
    }

    #[test]
    fn construction_errors() {
        let shifted = PiecewiseLinearFn::new(vec![(int(0), int(1))], int(0), int(0)).unwrap();
        assert_eq!(
            UrysonOperator::finite(vec![vec![lin(1), shifted]]),
            Err(Error::KernelNotZeroAtOrigin { row: 1, col: 2 })
        );
        assert_eq!(
            UrysonOperator::new(Domain::Finite(1), 1, vec![vec![lin(1)]], Some(vec![lin(1)])),
            Err(Error::TailOnFiniteDomain)
        );
        assert!(UrysonOperator::new(Domain::Finite(2), 1, vec![vec![lin(1)]], None).is_err());
    }

    #[test]
    fn integral_kernel() {
        let t = from_integral_kernel(&[vec![lin(1)]], &[int(1)]).unwrap();
        assert!(t.kernel()[0][0].same_function(&lin(1)));
        let t = from_integral_kernel(&[vec![lin(1)]], &[int(2)]).unwrap();
        assert_eq!(t.apply(&LatticeElement::from_ints(&[3])).unwrap(), LatticeElement::from_ints(&[6]));
        let bad = PiecewiseLinearFn::new(vec![(int(0), int(1))], int(0), int(0)).unwrap();
        assert_eq!(
            from_integral_kernel(&[vec![bad]], &[int(1)]),
            Err(Error::KernelNotZeroAtOrigin { row: 1, col: 1 })
        );
        assert_eq!(
            from_integral_kernel(&[vec![lin(1)]], &[int(0)]),
            Err(Error::NonpositiveWeight { index: 1 })
        );
    }

    #[test]
    fn positivity() {
        let abs = UrysonOperator::finite(vec![vec![PiecewiseLinearFn::abs()]]).unwrap();
        assert!(abs.is_positive());
        assert!(abs.positivity_witness().is_none());
        let id = UrysonOperator::finite(vec![vec![lin(1)]]).unwrap();
        assert!(!id.is_positive());
        let mixed = UrysonOperator::finite(vec![vec![PiecewiseLinearFn::abs(), lin(-2)]]).unwrap();
        assert!(!mixed.is_positive());
        let (x, i) = mixed.positivity_witness().unwrap();
        assert!(mixed.apply(&x).unwrap().coord(i) < &int(0));
        assert!(x.coord(0).is_zero());
    }

    #[test]
    fn one_dimensional_examples() {
        let phi = UrysonOperator::finite(vec![vec![PiecewiseLinearFn::abs(), PiecewiseLinearFn::abs()]]).unwrap();
        let s = one_dimensional(&phi, &LatticeElement::from_ints(&[1, 0])).unwrap();
        assert_eq!(s.apply(&LatticeElement::from_ints(&[1, 1])).unwrap(), LatticeElement::from_ints(&[2, 0]));
        let z = one_dimensional(&phi, &LatticeElement::from_ints(&[0, 0])).unwrap();
        assert!(z.same_operator(&UrysonOperator::zero(Domain::Finite(2), 2)));
        let z = one_dimensional(&UrysonOperator::zero(Domain::Finite(2), 1), &LatticeElement::from_ints(&[3, 1])).unwrap();
        assert!(z.same_operator(&UrysonOperator::zero(Domain::Finite(2), 2)));
        assert!(one_dimensional(&s, &LatticeElement::from_ints(&[1])).is_err());
    }

    #[test]
    fn orthogonal_additivity_and_negative_control() {
        let mut rng = random::rng(3);
        for _ in 0..10 {
            let t = random::kernel_operator(&mut rng, Domain::Finite(3), 2, false, 5);
            assert!(check_orthogonal_additivity(&t, 100, 11).passed);
            let s = random::kernel_operator_with_tail(&mut rng, 2, 2, false, 5);
            assert!(check_orthogonal_additivity(&s, 100, 12).passed);
        }
        let bad = CrossTermOperator { base: two_column(), coefficient: int(1) };
        let v = check_orthogonal_additivity(&bad, 200, 1);
        assert!(!v.passed);
        assert!(v.witness.is_some());
    }

    #[test]
    fn range_box_contains_images() {
        let mut rng = random::rng(8);
        for _ in 0..20 {
            let t = random::kernel_operator(&mut rng, Domain::Finite(3), 2, false, 5);
            let b = LatticeElement::finite(vec![int(2), ratio(1, 2), int(3)]);
            let (lo, hi) = t.range_box(&b).unwrap();
            for _ in 0..50 {
                let x = random::element_in_box(&mut rng, &b);
                let y = t.apply(&x).unwrap();
                assert!(lo.le(&y).unwrap() && y.le(&hi).unwrap());
            }
        }
    }

    #[test]
    fn parse_domain() {
        assert_eq!("finite:3".parse::<Domain>().unwrap(), Domain::Finite(3));
        assert_eq!("ecseq:2".parse::<Domain>().unwrap(), Domain::EcSeq(2));
        assert!("banach:2".parse::<Domain>().is_err());
    }
}
