//! Lattice operations on operators, evaluated pointwise.
//!
//! For `f` in `E`:
//!
//! * `(T ∨ S)(f) = sup { Tg + Sh : f = g + h, g ⊥ h }`
//! * `(T ∧ S)(f) = inf { Tg + Sh : f = g + h, g ⊥ h }`
//! * `T⁺(f) = sup { Tg : g ⊑ f }`, `T⁻(f) = -inf { Tg : g ⊑ f }`
//! * `|T|(f) = T⁺(f) + T⁻(f)`
//!
//! Suprema in `R^m` over the finite fragment set are coordinatewise maxima.
//! Kernel operators also have closed forms (entrywise envelopes), which are
//! checked against the enumeration.

use std::fmt;

use crate::element::{disjoint_partitions, LatticeElement};
use crate::error::{Error, Result};
use crate::operator::{Operator, UrysonOperator};
use crate::pwl::PiecewiseLinearFn;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Formula {
    Join,
    Meet,
    Pos,
    Neg,
    Abs,
}

impl fmt::Display for Formula {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Formula::Join => "join",
            Formula::Meet => "meet",
            Formula::Pos => "pos",
            Formula::Neg => "neg",
            Formula::Abs => "abs",
        })
    }
}

impl std::str::FromStr for Formula {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "join" => Ok(Formula::Join),
            "meet" => Ok(Formula::Meet),
            "pos" => Ok(Formula::Pos),
            "neg" => Ok(Formula::Neg),
            "abs" => Ok(Formula::Abs),
            other => Err(Error::Inconsistent(format!("unknown formula `{other}`"))),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PointwiseValue {
    pub input: LatticeElement,
    pub output: LatticeElement,
    pub formula: Formula,
}

fn check_pair<T: Operator + ?Sized, S: Operator + ?Sized>(t: &T, s: &S) -> Result<()> {
    if t.domain() != s.domain() {
        return Err(Error::ModelMismatch { left: t.domain().to_string(), right: s.domain().to_string() });
    }
    if t.codomain() != s.codomain() {
        return Err(Error::DimensionMismatch { expected: t.codomain(), found: s.codomain() });
    }
    Ok(())
}

/// Coordinatewise max (or min) of `values(g, f - g)` over all fragments `g`.
fn extremum<V>(f: &LatticeElement, resolution: usize, upper: bool, values: V) -> Result<LatticeElement>
where
    V: Fn(&LatticeElement, &LatticeElement) -> Result<LatticeElement>,
{
    let mut best: Option<LatticeElement> = None;
    for (g, h) in disjoint_partitions(f, resolution)? {
        let v = values(&g, &h)?;
        best = Some(match best {
            None => v,
            Some(b) if upper => b.sup(&v)?,
            Some(b) => b.inf(&v)?,
        });
    }
    Ok(best.expect("every element has the zero fragment"))
}

fn join_or_meet<T, S>(t: &T, s: &S, f: &LatticeElement, resolution: usize, upper: bool) -> Result<LatticeElement>
where
    T: Operator + ?Sized,
    S: Operator + ?Sized,
{
    check_pair(t, s)?;
    t.domain().check(f)?;
    extremum(f, resolution, upper, |g, h| t.apply(g)?.try_add(&s.apply(h)?))
}

pub fn op_join_at<T, S>(t: &T, s: &S, f: &LatticeElement, resolution: usize) -> Result<LatticeElement>
where
    T: Operator + ?Sized,
    S: Operator + ?Sized,
{
    join_or_meet(t, s, f, resolution, true)
}

pub fn op_meet_at<T, S>(t: &T, s: &S, f: &LatticeElement, resolution: usize) -> Result<LatticeElement>
where
    T: Operator + ?Sized,
    S: Operator + ?Sized,
{
    join_or_meet(t, s, f, resolution, false)
}

pub fn op_pos_at<T: Operator + ?Sized>(t: &T, f: &LatticeElement, resolution: usize) -> Result<LatticeElement> {
    t.domain().check(f)?;
    extremum(f, resolution, true, |g, _| t.apply(g))
}

pub fn op_neg_at<T: Operator + ?Sized>(t: &T, f: &LatticeElement, resolution: usize) -> Result<LatticeElement> {
    t.domain().check(f)?;
    Ok(-&extremum(f, resolution, false, |g, _| t.apply(g))?)
}

/// `|T|(f)`; also verifies `|Tf| <= |T|(f)` before returning.
pub fn op_abs_at<T: Operator + ?Sized>(t: &T, f: &LatticeElement, resolution: usize) -> Result<LatticeElement> {
    let abs = op_pos_at(t, f, resolution)?.try_add(&op_neg_at(t, f, resolution)?)?;
    let tf = t.apply(f)?.abs();
    if !tf.le(&abs)? {
        return Err(Error::Inconsistent(format!("|Tf| = {tf} exceeds |T|(f) = {abs}")));
    }
    Ok(abs)
}

/// Dispatches on the formula; `s` is required for join and meet.
pub fn pointwise<T, S>(
    formula: Formula,
    t: &T,
    s: Option<&S>,
    f: &LatticeElement,
    resolution: usize,
) -> Result<PointwiseValue>
where
    T: Operator + ?Sized,
    S: Operator + ?Sized,
{
    let need_s = || s.ok_or_else(|| Error::Inconsistent(format!("`{formula}` needs two operators")));
    let output = match formula {
        Formula::Join => op_join_at(t, need_s()?, f, resolution)?,
        Formula::Meet => op_meet_at(t, need_s()?, f, resolution)?,
        Formula::Pos => op_pos_at(t, f, resolution)?,
        Formula::Neg => op_neg_at(t, f, resolution)?,
        Formula::Abs => op_abs_at(t, f, resolution)?,
    };
    Ok(PointwiseValue { input: f.clone(), output, formula })
}

fn closed_form(
    t: &UrysonOperator,
    s: &UrysonOperator,
    op: impl Fn(&PiecewiseLinearFn, &PiecewiseLinearFn) -> PiecewiseLinearFn,
) -> Result<UrysonOperator> {
    if t.has_tail() || s.has_tail() {
        return Err(Error::TailColumnsUnsupported);
    }
    t.zip_entries(s, op)
}

/// `T ∨ S` for kernel operators: `(T ∨ S)_ij = T_ij ∨ S_ij`. Each output row
/// picks `g_j ∈ {0, f_j}` independently per column, so the supremum separates.
pub fn kernel_join_closed_form(t: &UrysonOperator, s: &UrysonOperator) -> Result<UrysonOperator> {
    closed_form(t, s, PiecewiseLinearFn::max)
}

pub fn kernel_meet_closed_form(t: &UrysonOperator, s: &UrysonOperator) -> Result<UrysonOperator> {
    closed_form(t, s, PiecewiseLinearFn::min)
}

/// `|T|` for kernel operators: entries `T_ij ∨ 0 - (T_ij ∧ 0)`.
pub fn kernel_abs_closed_form(t: &UrysonOperator) -> Result<UrysonOperator> {
    let zero = UrysonOperator::zero(t.domain(), t.codomain());
    let pos = kernel_join_closed_form(t, &zero)?;
    let neg = kernel_meet_closed_form(t, &zero)?;
    pos.sub(&neg)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::operator::Domain;
    use crate::random;
    use crate::rational::int;

    fn lin(c: i64) -> PiecewiseLinearFn {
        PiecewiseLinearFn::linear(int(c))
    }

    fn scalar(c: i64) -> UrysonOperator {
        UrysonOperator::finite(vec![vec![lin(c)]]).unwrap()
    }

    fn v(c: &[i64]) -> LatticeElement {
        LatticeElement::from_ints(c)
    }

    #[test]
    fn join_and_meet_examples() {
        let (t, s) = (scalar(1), scalar(-1));
        assert_eq!(op_join_at(&t, &s, &v(&[2]), 0).unwrap(), v(&[2]));
        assert_eq!(op_meet_at(&t, &s, &v(&[2]), 0).unwrap(), v(&[-2]));
        assert_eq!(op_join_at(&t, &t, &v(&[2]), 0).unwrap(), v(&[2]));
        assert_eq!(op_meet_at(&t, &t, &v(&[-3]), 0).unwrap(), v(&[-3]));
        assert!(op_join_at(&t, &s, &v(&[0]), 0).unwrap().is_zero());
    }

    #[test]
    fn disjoint_positive_operators_meet_to_zero() {
        // T reads coordinate 1, S reads coordinate 2: T ∧ S = 0
        let a = PiecewiseLinearFn::abs();
        let z = PiecewiseLinearFn::zero();
        let t = UrysonOperator::finite(vec![vec![a.clone(), z.clone()]]).unwrap();
        let s = UrysonOperator::finite(vec![vec![z, a]]).unwrap();
        for f in [v(&[1, 1]), v(&[-2, 3]), v(&[0, 5])] {
            assert!(op_meet_at(&t, &s, &f, 0).unwrap().is_zero());
        }
    }

    #[test]
    fn positive_and_negative_parts() {
        let t = UrysonOperator::finite(vec![vec![lin(1), lin(-1)]]).unwrap();
        let f = v(&[1, 1]);
        assert_eq!(op_pos_at(&t, &f, 0).unwrap(), v(&[1]));
        assert_eq!(op_neg_at(&t, &f, 0).unwrap(), v(&[1]));
        assert_eq!(op_abs_at(&t, &f, 0).unwrap(), v(&[2]));
        assert_eq!(t.apply(&f).unwrap(), v(&[0]));
        assert!(op_pos_at(&t, &v(&[0, 0]), 0).unwrap().is_zero());
        let zero = UrysonOperator::zero(Domain::Finite(2), 1);
        assert!(op_abs_at(&zero, &f, 0).unwrap().is_zero());
    }

    #[test]
    fn positive_operator_parts_are_trivial() {
        let mut rng = random::rng(21);
        for _ in 0..20 {
            let t = random::kernel_operator(&mut rng, Domain::Finite(3), 2, true, 4);
            let f = random::element(&mut rng, t.domain().model(), 0);
            let tf = t.apply(&f).unwrap();
            assert_eq!(op_pos_at(&t, &f, 0).unwrap(), tf);
            assert!(op_neg_at(&t, &f, 0).unwrap().is_zero());
            assert_eq!(op_abs_at(&t, &f, 0).unwrap(), tf);
        }
    }

    #[test]
    fn closed_form_matches_example() {
        let j = kernel_join_closed_form(&scalar(1), &scalar(-1)).unwrap();
        assert!(j.kernel()[0][0].same_function(&PiecewiseLinearFn::abs()));
        assert_eq!(j.apply(&v(&[2])).unwrap(), v(&[2]));
        let t = scalar(3);
        assert!(kernel_join_closed_form(&t, &t).unwrap().same_operator(&t));
    }

    #[test]
    fn closed_forms_agree_with_enumeration() {
        let mut rng = random::rng(5);
        for _ in 0..20 {
            let t = random::kernel_operator(&mut rng, Domain::Finite(3), 3, false, 5);
            let s = random::kernel_operator(&mut rng, Domain::Finite(3), 3, false, 5);
            let join = kernel_join_closed_form(&t, &s).unwrap();
            let meet = kernel_meet_closed_form(&t, &s).unwrap();
            let abs = kernel_abs_closed_form(&t).unwrap();
            for _ in 0..10 {
                let f = random::element(&mut rng, t.domain().model(), 0);
                assert_eq!(join.apply(&f).unwrap(), op_join_at(&t, &s, &f, 0).unwrap());
                assert_eq!(meet.apply(&f).unwrap(), op_meet_at(&t, &s, &f, 0).unwrap());
                assert_eq!(abs.apply(&f).unwrap(), op_abs_at(&t, &f, 0).unwrap());
            }
        }
    }

    #[test]
    fn closed_form_rejects_tails() {
        let mut rng = random::rng(1);
        let t = random::kernel_operator_with_tail(&mut rng, 2, 1, true, 3);
        assert_eq!(kernel_join_closed_form(&t, &t), Err(Error::TailColumnsUnsupported));
    }

    #[test]
    fn sequence_values_stabilize_past_columns() {
        let mut rng = random::rng(9);
        for _ in 0..10 {
            let t = random::kernel_operator_with_tail(&mut rng, 3, 2, false, 4);
            let s = random::kernel_operator_with_tail(&mut rng, 3, 2, false, 4);
            let f = random::element(&mut rng, t.domain().model(), 3);
            for formula in [Formula::Join, Formula::Meet, Formula::Pos, Formula::Neg, Formula::Abs] {
                let a = pointwise(formula, &t, Some(&s), &f, 3).unwrap();
                let b = pointwise(formula, &t, Some(&s), &f, 6).unwrap();
                assert_eq!(a.output, b.output, "{formula}");
            }
        }
    }

    #[test]
    fn mismatched_operators_error() {
        let t = scalar(1);
        let s = UrysonOperator::finite(vec![vec![lin(1), lin(1)]]).unwrap();
        assert!(op_join_at(&t, &s, &v(&[1]), 0).is_err());
        assert!(op_pos_at(&t, &v(&[1, 1]), 0).is_err());
    }
}
