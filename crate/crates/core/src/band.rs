//! Band projections in the operator lattice, evaluated pointwise.
//!
//! For positive `T`, `S` and `e` in `E`, the projection of `T` onto the band
//! generated by `S` splits `Te = π_S Te + σ_S Te` with
//!
//! ```text
//! σ_S Te = inf_{ε>0} sup { ρTf : ρSf <= ε·Se,       ρ ∈ B(F), f ⊑ e }
//! π_S Te = sup_{ε>0} inf { ρTf + ρ^⊥Te : ρS(e-f) <= ε·Se }
//! ```
//!
//! The feasible pairs `(ρ, f)` form a finite set, so the limit in `ε` is
//! reached once `ε` drops below the smallest positive ratio `(Sf)_i / (Se)_i`.
//! [`EvalMode::ExactLimit`] evaluates that limit directly (a fragment is
//! admitted for row `i` iff `(Sf)_i = 0`); [`EvalMode::Epsilon`] evaluates the
//! literal formula at a fixed `ε`, enumerating every projection `ρ`.

use std::fmt;

use num_traits::{Signed, Zero};

use crate::calculus::kernel_join_closed_form;
use crate::element::{fragments, LatticeElement};
use crate::error::{Error, Result};
use crate::operator::{one_dimensional, Operator, UrysonOperator};
use crate::projection::{element_band_projection, partitions_of_unity, OrderProjection, PartitionOfUnity};
use crate::rational::Rational;

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum EvalMode {
    ExactLimit,
    Epsilon(Rational),
}

impl fmt::Display for EvalMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            EvalMode::ExactLimit => f.write_str("exact-limit"),
            EvalMode::Epsilon(e) => write!(f, "epsilon-grid({})", crate::rational::format(e)),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ProjectionValue {
    pub pi_part: LatticeElement,
    pub sigma_part: LatticeElement,
    pub mode: EvalMode,
}

fn require_positive<O: Operator + ?Sized>(op: &O, name: &str) -> Result<()> {
    if op.is_positive() {
        Ok(())
    } else {
        Err(Error::NotPositive(name.to_string()))
    }
}

/// Images of every fragment of `e` under `T` and `S`, plus `Te`, `Se`.
struct Table {
    frags: Vec<LatticeElement>,
    t_f: Vec<Vec<Rational>>,
    s_f: Vec<Vec<Rational>>,
    t_e: Vec<Rational>,
    s_e: Vec<Rational>,
}

impl Table {
    fn build<T, S>(t: &T, s: &S, e: &LatticeElement, resolution: usize) -> Result<Self>
    where
        T: Operator + ?Sized,
        S: Operator + ?Sized,
    {
        if t.domain() != s.domain() {
            return Err(Error::ModelMismatch { left: t.domain().to_string(), right: s.domain().to_string() });
        }
        if t.codomain() != s.codomain() {
            return Err(Error::DimensionMismatch { expected: t.codomain(), found: s.codomain() });
        }
        t.domain().check(e)?;
        let frags = fragments(e, resolution)?;
        let mut t_f = Vec::with_capacity(frags.len());
        let mut s_f = Vec::with_capacity(frags.len());
        for f in &frags {
            t_f.push(t.apply(f)?.coords().to_vec());
            s_f.push(s.apply(f)?.coords().to_vec());
        }
        Ok(Table {
            t_e: t.apply(e)?.coords().to_vec(),
            s_e: s.apply(e)?.coords().to_vec(),
            frags,
            t_f,
            s_f,
        })
    }

    fn dim(&self) -> usize {
        self.t_e.len()
    }

    /// Index of the complementary fragment `e - f`.
    fn complement_index(&self, k: usize, e: &LatticeElement) -> usize {
        let target = e - &self.frags[k];
        self.frags.iter().position(|g| *g == target).expect("fragments are closed under complement")
    }
}

fn max_or_zero<'a>(values: impl Iterator<Item = &'a Rational>) -> Rational {
    values.fold(Rational::zero(), |acc, v| acc.max(v.clone()))
}

fn sigma_from_table(table: &Table, mode: &EvalMode) -> LatticeElement {
    let m = table.dim();
    let n = table.frags.len();
    match mode {
        EvalMode::ExactLimit => LatticeElement::finite(
            (0..m)
                .map(|i| max_or_zero((0..n).filter(|&k| table.s_f[k][i].is_zero()).map(|k| &table.t_f[k][i])))
                .collect(),
        ),
        EvalMode::Epsilon(eps) => {
            let mut best = vec![Rational::zero(); m];
            for rho in OrderProjection::all(m) {
                for k in 0..n {
                    let feasible = rho
                        .indices()
                        .into_iter()
                        .all(|i| table.s_f[k][i] <= eps * &table.s_e[i]);
                    if feasible {
                        for i in rho.indices() {
                            if table.t_f[k][i] > best[i] {
                                best[i] = table.t_f[k][i].clone();
                            }
                        }
                    }
                }
            }
            LatticeElement::finite(best)
        }
    }
}

fn pi_from_table(table: &Table, e: &LatticeElement, mode: &EvalMode) -> LatticeElement {
    let m = table.dim();
    let n = table.frags.len();
    let complement: Vec<usize> = (0..n).map(|k| table.complement_index(k, e)).collect();
    match mode {
        EvalMode::ExactLimit => LatticeElement::finite(
            (0..m)
                .map(|i| {
                    (0..n)
                        .filter(|&k| table.s_f[complement[k]][i].is_zero())
                        .map(|k| table.t_f[k][i].clone())
                        .min()
                        .expect("f = e is always admissible")
                })
                .collect(),
        ),
        EvalMode::Epsilon(eps) => {
            let mut best = table.t_e.clone();
            for rho in OrderProjection::all(m) {
                for (t_fk, &c) in table.t_f.iter().zip(&complement) {
                    let rest = &table.s_f[c];
                    let feasible = rho.indices().into_iter().all(|i| rest[i] <= eps * &table.s_e[i]);
                    if feasible {
                        for (i, b) in best.iter_mut().enumerate() {
                            let v = if rho.contains(i) { &t_fk[i] } else { &table.t_e[i] };
                            if v < b {
                                *b = v.clone();
                            }
                        }
                    }
                }
            }
            LatticeElement::finite(best)
        }
    }
}

fn check_mode(mode: &EvalMode) -> Result<()> {
    match mode {
        EvalMode::Epsilon(e) if !e.is_positive() => Err(Error::NegativeEpsilon),
        _ => Ok(()),
    }
}

/// `σ_S Te`: the part of `Te` disjoint from the band generated by `S`.
pub fn sigma_at<T, S>(t: &T, s: &S, e: &LatticeElement, mode: &EvalMode, resolution: usize) -> Result<LatticeElement>
where
    T: Operator + ?Sized,
    S: Operator + ?Sized,
{
    require_positive(t, "T")?;
    require_positive(s, "S")?;
    check_mode(mode)?;
    Ok(sigma_from_table(&Table::build(t, s, e, resolution)?, mode))
}

/// `π_S Te`: the part of `Te` in the band generated by `S`.
pub fn pi_at<T, S>(t: &T, s: &S, e: &LatticeElement, mode: &EvalMode, resolution: usize) -> Result<LatticeElement>
where
    T: Operator + ?Sized,
    S: Operator + ?Sized,
{
    require_positive(t, "T")?;
    require_positive(s, "S")?;
    check_mode(mode)?;
    Ok(pi_from_table(&Table::build(t, s, e, resolution)?, e, mode))
}

/// Both parts from one fragment table.
pub fn project<T, S>(t: &T, s: &S, e: &LatticeElement, mode: &EvalMode, resolution: usize) -> Result<ProjectionValue>
where
    T: Operator + ?Sized,
    S: Operator + ?Sized,
{
    require_positive(t, "T")?;
    require_positive(s, "S")?;
    check_mode(mode)?;
    let table = Table::build(t, s, e, resolution)?;
    Ok(ProjectionValue {
        pi_part: pi_from_table(&table, e, mode),
        sigma_part: sigma_from_table(&table, mode),
        mode: mode.clone(),
    })
}

/// Smallest positive ratio `(Sf)_i / (Se)_i` over fragments `f` of `e`.
/// Every `ε` strictly below it gives the limiting value; `None` means the
/// grid is constant in `ε`.
pub fn stabilization_threshold<S: Operator + ?Sized>(
    s: &S,
    e: &LatticeElement,
    resolution: usize,
) -> Result<Option<Rational>> {
    s.domain().check(e)?;
    let s_e = s.apply(e)?;
    let mut best: Option<Rational> = None;
    for f in fragments(e, resolution)? {
        let s_f = s.apply(&f)?;
        for i in 0..s_e.explicit_len() {
            let (num, den) = (s_f.coord(i), s_e.coord(i));
            if num.is_positive() && den.is_positive() {
                let r = num / den;
                if best.as_ref().is_none_or(|b| r < *b) {
                    best = Some(r);
                }
            }
        }
    }
    Ok(best)
}

/// `ρ_{Se}^⊥ σ_S Te = ρ_{Se}^⊥ Te` and `ρ_{Se} π_S Te = π_S Te`.
pub fn check_observation<T, S>(t: &T, s: &S, e: &LatticeElement, resolution: usize) -> Result<bool>
where
    T: Operator + ?Sized,
    S: Operator + ?Sized,
{
    let value = project(t, s, e, &EvalMode::ExactLimit, resolution)?;
    let rho = element_band_projection(&s.apply(e)?)?;
    let off = rho.complement();
    let te = t.apply(e)?;
    Ok(off.apply(&value.sigma_part)? == off.apply(&te)? && rho.apply(&value.pi_part)? == value.pi_part)
}

/// A finite upward-directed set of positive operators.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IncreasingSet {
    members: Vec<UrysonOperator>,
}

impl IncreasingSet {
    pub fn new(members: Vec<UrysonOperator>) -> Result<Self> {
        let first = members.first().ok_or(Error::Empty("increasing set"))?;
        for (k, m) in members.iter().enumerate() {
            if m.domain() != first.domain() || m.codomain() != first.codomain() {
                return Err(Error::ModelMismatch { left: first.domain().to_string(), right: m.domain().to_string() });
            }
            if !m.is_positive() {
                return Err(Error::NotPositive(format!("member {}", k + 1)));
            }
        }
        for a in 0..members.len() {
            for b in a + 1..members.len() {
                if !Self::has_upper_bound(&members, a, b)? {
                    return Err(Error::Inconsistent(format!(
                        "members {} and {} have no common upper bound in the set",
                        a + 1,
                        b + 1
                    )));
                }
            }
        }
        Ok(IncreasingSet { members })
    }

    fn has_upper_bound(members: &[UrysonOperator], a: usize, b: usize) -> Result<bool> {
        for q in members {
            if q.dominates(&members[a])? && q.dominates(&members[b])? {
                return Ok(true);
            }
        }
        Ok(false)
    }

    /// Appends the supremum of all members when the list is not already
    /// directed. Kernel operators use the closed-form join; with tail
    /// columns the sum is used, which generates the same band.
    pub fn with_directed_closure(members: Vec<UrysonOperator>) -> Result<Self> {
        match Self::new(members.clone()) {
            Ok(set) => Ok(set),
            Err(Error::Inconsistent(_)) => {
                let mut top = members[0].clone();
                for m in &members[1..] {
                    top = match kernel_join_closed_form(&top, m) {
                        Ok(j) => j,
                        Err(Error::TailColumnsUnsupported) => top.add(m)?,
                        Err(e) => return Err(e),
                    };
                }
                let mut members = members;
                members.push(top);
                Self::new(members)
            }
            Err(e) => Err(e),
        }
    }

    pub fn members(&self) -> &[UrysonOperator] {
        &self.members
    }
}

/// `σ_A Te` for an increasing set `A`: the minimum over members of the
/// exact-limit `σ_S Te`.
pub fn sigma_increasing<T: Operator + ?Sized>(
    t: &T,
    set: &IncreasingSet,
    e: &LatticeElement,
    resolution: usize,
) -> Result<LatticeElement> {
    let mut best: Option<LatticeElement> = None;
    for s in set.members() {
        let v = sigma_at(t, s, e, &EvalMode::ExactLimit, resolution)?;
        best = Some(match best {
            None => v,
            Some(b) => b.inf(&v)?,
        });
    }
    best.ok_or(Error::Empty("increasing set"))
}

pub fn pi_increasing<T: Operator + ?Sized>(
    t: &T,
    set: &IncreasingSet,
    e: &LatticeElement,
    resolution: usize,
) -> Result<LatticeElement> {
    t.apply(e)?.try_sub(&sigma_increasing(t, set, e, resolution)?)
}

/// Witness that `T` and `S` are disjoint at `e` for a given `ε`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DisjointnessCertificate {
    pub partition: PartitionOfUnity,
    pub fragments: Vec<LatticeElement>,
    pub epsilon: Rational,
}

impl DisjointnessCertificate {
    /// Re-checks `ρ_α T e_α <= ε Te` and `ρ_α S(e - e_α) <= ε Se` per block.
    pub fn verify<T, S>(&self, t: &T, s: &S, e: &LatticeElement, resolution: usize) -> Result<bool>
    where
        T: Operator + ?Sized,
        S: Operator + ?Sized,
    {
        let te = t.apply(e)?.scale(&self.epsilon);
        let se = s.apply(e)?.scale(&self.epsilon);
        let frags = fragments(e, resolution)?;
        for (rho, ea) in self.partition.blocks().iter().zip(&self.fragments) {
            if !frags.contains(ea) {
                return Ok(false);
            }
            let rest = e.try_sub(ea)?;
            if !rho.apply(&t.apply(ea)?)?.le(&te)? || !rho.apply(&s.apply(&rest)?)?.le(&se)? {
                return Ok(false);
            }
        }
        Ok(self.partition.blocks().len() == self.fragments.len())
    }
}

impl fmt::Display for DisjointnessCertificate {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let frags: Vec<String> = self.fragments.iter().map(|x| x.to_string()).collect();
        write!(
            f,
            "partition {} fragments [{}] eps {}",
            self.partition,
            frags.join(", "),
            crate::rational::format(&self.epsilon)
        )
    }
}

/// Searches partitions of unity (fewest blocks first) and, per block, fragments
/// of `e` (largest support first) for a certificate. `ε = 0` asks for the
/// limiting certificate, which exists at `e` iff `(T ∧ S)(e) = 0`.
///
/// Refining a block never breaks it, so the search first checks the
/// all-singletons partition and returns `None` early when even that fails.
pub fn disjointness_certificate<T, S>(
    t: &T,
    s: &S,
    e: &LatticeElement,
    epsilon: &Rational,
    resolution: usize,
) -> Result<Option<DisjointnessCertificate>>
where
    T: Operator + ?Sized,
    S: Operator + ?Sized,
{
    require_positive(t, "T")?;
    require_positive(s, "S")?;
    if epsilon.is_negative() {
        return Err(Error::NegativeEpsilon);
    }
    let table = Table::build(t, s, e, resolution)?;
    let m = table.dim();
    let n = table.frags.len();
    let support = |x: &LatticeElement| {
        (0..x.explicit_len()).filter(|&i| !x.coord(i).is_zero()).count()
            + usize::from(x.tail().is_some_and(|t| !t.is_zero()))
    };
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by_key(|&k| std::cmp::Reverse(support(&table.frags[k])));
    let complement: Vec<usize> = (0..n).map(|k| table.complement_index(k, e)).collect();
    let row_ok = |i: usize, k: usize| {
        table.t_f[k][i] <= epsilon * &table.t_e[i] && table.s_f[complement[k]][i] <= epsilon * &table.s_e[i]
    };
    if !(0..m).all(|i| (0..n).any(|k| row_ok(i, k))) {
        return Ok(None);
    }
    for blocks in 1..=m {
        for partition in partitions_of_unity(m, blocks).filter(|p| p.blocks().len() == blocks) {
            let choice: Option<Vec<usize>> = partition
                .blocks()
                .iter()
                .map(|rho| order.iter().copied().find(|&k| rho.indices().into_iter().all(|i| row_ok(i, k))))
                .collect();
            if let Some(choice) = choice {
                return Ok(Some(DisjointnessCertificate {
                    partition,
                    fragments: choice.into_iter().map(|k| table.frags[k].clone()).collect(),
                    epsilon: epsilon.clone(),
                }));
            }
        }
    }
    unreachable!("the singleton partition succeeds once every row has a fragment")
}

fn check_onedim(phi: &UrysonOperator, u: &LatticeElement) -> Result<()> {
    if phi.codomain() != 1 {
        return Err(Error::DimensionMismatch { expected: 1, found: phi.codomain() });
    }
    require_positive(phi, "phi")?;
    if !u.is_nonnegative() {
        return Err(Error::Inconsistent("u must be nonnegative".into()));
    }
    Ok(())
}

/// `σ_{φ⊗u} Te = ρ_u^⊥ Te + sup { ρ_u Tf : φ(f) = 0, f ⊑ e }`.
pub fn sigma_onedim<T: Operator + ?Sized>(
    t: &T,
    phi: &UrysonOperator,
    u: &LatticeElement,
    e: &LatticeElement,
    resolution: usize,
) -> Result<LatticeElement> {
    check_onedim(phi, u)?;
    require_positive(t, "T")?;
    if u.explicit_len() != t.codomain() {
        return Err(Error::DimensionMismatch { expected: t.codomain(), found: u.explicit_len() });
    }
    let rho_u = element_band_projection(u)?;
    let mut inner = LatticeElement::zero(u.model());
    for f in fragments(e, resolution)? {
        if phi.apply(&f)?.coord(0).is_zero() {
            inner = inner.sup(&t.apply(&f)?)?;
        }
    }
    let te = t.apply(e)?;
    rho_u.complement().apply(&te)?.try_add(&rho_u.apply(&inner)?)
}

/// `π_{φ⊗u} Te = Te - σ_{φ⊗u} Te`.
pub fn pi_onedim<T: Operator + ?Sized>(
    t: &T,
    phi: &UrysonOperator,
    u: &LatticeElement,
    e: &LatticeElement,
    resolution: usize,
) -> Result<LatticeElement> {
    t.apply(e)?.try_sub(&sigma_onedim(t, phi, u, e, resolution)?)
}

/// Projection onto the band generated by the one-dimensional operators
/// `φ_k ⊗ u_k`, through the increasing set they generate.
pub fn pi_onedim_band<T: Operator + ?Sized>(
    t: &T,
    phis: &[UrysonOperator],
    us: &[LatticeElement],
    e: &LatticeElement,
    resolution: usize,
) -> Result<LatticeElement> {
    if phis.is_empty() {
        return Err(Error::Empty("one-dimensional family"));
    }
    if phis.len() != us.len() {
        return Err(Error::DimensionMismatch { expected: phis.len(), found: us.len() });
    }
    let members = phis
        .iter()
        .zip(us)
        .map(|(phi, u)| {
            check_onedim(phi, u)?;
            one_dimensional(phi, u)
        })
        .collect::<Result<Vec<_>>>()?;
    let set = IncreasingSet::with_directed_closure(members)?;
    pi_increasing(t, &set, e, resolution)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::calculus::op_meet_at;
    use crate::operator::{Domain, PointwiseOperator};
    use crate::pwl::PiecewiseLinearFn;
    use crate::random;
    use crate::rational::{int, ratio};

    fn v(c: &[i64]) -> LatticeElement {
        LatticeElement::from_ints(c)
    }

    /// `x ↦ (|x_1|, |x_2|)`: the positive identity-like kernel.
    fn abs_identity(n: usize) -> UrysonOperator {
        UrysonOperator::diagonal(n, &PiecewiseLinearFn::abs())
    }

    fn phi_sum_abs(n: usize) -> UrysonOperator {
        UrysonOperator::finite(vec![vec![PiecewiseLinearFn::abs(); n]]).unwrap()
    }

    #[test]
    fn worked_example() {
        let t = abs_identity(2);
        let s = one_dimensional(&phi_sum_abs(2), &v(&[1, 0])).unwrap();
        let e = v(&[1, 1]);
        let p = project(&t, &s, &e, &EvalMode::ExactLimit, 0).unwrap();
        assert_eq!(p.sigma_part, v(&[0, 1]));
        assert_eq!(p.pi_part, v(&[1, 0]));
        assert_eq!(pi_onedim(&t, &phi_sum_abs(2), &v(&[1, 0]), &e, 0).unwrap(), v(&[1, 0]));
        assert!(check_observation(&t, &s, &e, 0).unwrap());
        let g = project(&t, &s, &e, &EvalMode::Epsilon(ratio(1, 1 << 20)), 0).unwrap();
        assert_eq!(g, ProjectionValue { mode: g.mode.clone(), ..p });
    }

    #[test]
    fn zero_generator() {
        let t = abs_identity(2);
        let s = UrysonOperator::zero(Domain::Finite(2), 2);
        let e = v(&[3, -1]);
        let p = project(&t, &s, &e, &EvalMode::ExactLimit, 0).unwrap();
        assert_eq!(p.sigma_part, t.apply(&e).unwrap());
        assert!(p.pi_part.is_zero());
        assert!(check_observation(&t, &s, &e, 0).unwrap());
    }

    #[test]
    fn self_projection() {
        let t = abs_identity(3);
        let e = v(&[1, -2, 5]);
        let p = project(&t, &t, &e, &EvalMode::ExactLimit, 0).unwrap();
        assert!(p.sigma_part.is_zero());
        assert_eq!(p.pi_part, t.apply(&e).unwrap());
    }

    #[test]
    fn rejects_non_positive() {
        let id = UrysonOperator::diagonal(1, &PiecewiseLinearFn::linear(int(1)));
        let t = abs_identity(1);
        assert_eq!(sigma_at(&id, &t, &v(&[1]), &EvalMode::ExactLimit, 0), Err(Error::NotPositive("T".into())));
        assert_eq!(pi_at(&t, &id, &v(&[1]), &EvalMode::ExactLimit, 0), Err(Error::NotPositive("S".into())));
        assert!(sigma_at(&t, &t, &v(&[1]), &EvalMode::Epsilon(int(0)), 0).is_err());
    }

    #[test]
    fn grid_is_monotone_and_stabilizes() {
        let mut rng = random::rng(4);
        for _ in 0..20 {
            let t = random::kernel_operator(&mut rng, Domain::Finite(3), 2, true, 4);
            let s = random::kernel_operator(&mut rng, Domain::Finite(3), 2, true, 4);
            let e = random::element(&mut rng, t.domain().model(), 0);
            let exact = project(&t, &s, &e, &EvalMode::ExactLimit, 0).unwrap();
            let thr = stabilization_threshold(&s, &e, 0).unwrap();
            let mut prev: Option<ProjectionValue> = None;
            for k in 0..=24 {
                let eps = ratio(1, 1 << k);
                let g = project(&t, &s, &e, &EvalMode::Epsilon(eps.clone()), 0).unwrap();
                if let Some(p) = &prev {
                    // shrinking ε: σ decreases, π increases
                    assert!(g.sigma_part.le(&p.sigma_part).unwrap());
                    assert!(p.pi_part.le(&g.pi_part).unwrap());
                }
                if thr.as_ref().is_none_or(|t| eps < *t) {
                    assert_eq!(g.sigma_part, exact.sigma_part);
                    assert_eq!(g.pi_part, exact.pi_part);
                }
                prev = Some(g);
            }
        }
    }

    #[test]
    fn increasing_set_forms() {
        let mut rng = random::rng(6);
        let t = random::kernel_operator(&mut rng, Domain::Finite(3), 2, true, 4);
        let s = random::kernel_operator(&mut rng, Domain::Finite(3), 2, true, 4);
        let e = random::element(&mut rng, t.domain().model(), 0);
        let single = IncreasingSet::new(vec![s.clone()]).unwrap();
        let direct = sigma_at(&t, &s, &e, &EvalMode::ExactLimit, 0).unwrap();
        assert_eq!(sigma_increasing(&t, &single, &e, 0).unwrap(), direct);
        let scaled = IncreasingSet::new(vec![s.clone(), s.scale(&int(2))]).unwrap();
        assert_eq!(sigma_increasing(&t, &scaled, &e, 0).unwrap(), direct);
        assert!(IncreasingSet::new(vec![]).is_err());
    }

    #[test]
    fn directed_closure_of_one_dimensional_pair() {
        let mut rng = random::rng(12);
        for _ in 0..10 {
            let d = Domain::Finite(3);
            let s1 = one_dimensional(&random::positive_functional(&mut rng, d), &random::positive_vector(&mut rng, 2)).unwrap();
            let s2 = one_dimensional(&random::positive_functional(&mut rng, d), &random::positive_vector(&mut rng, 2)).unwrap();
            let set = IncreasingSet::with_directed_closure(vec![s1.clone(), s2.clone()]).unwrap();
            let t = random::kernel_operator(&mut rng, d, 2, true, 4);
            let e = random::element(&mut rng, d.model(), 0);
            let both = sigma_increasing(&t, &set, &e, 0).unwrap();
            for s in [&s1, &s2] {
                let one = sigma_at(&t, s, &e, &EvalMode::ExactLimit, 0).unwrap();
                assert!(both.le(&one).unwrap());
            }
        }
        let a = abs_identity(1);
        assert!(IncreasingSet::new(vec![a.clone(), a.scale(&int(-1))]).is_err());
    }

    #[test]
    fn certificate_examples() {
        let phi = phi_sum_abs(2);
        let t = one_dimensional(&phi, &v(&[1, 0])).unwrap();
        let s = one_dimensional(&phi, &v(&[0, 1])).unwrap();
        let e = v(&[2, -1]);
        let cert = disjointness_certificate(&t, &s, &e, &ratio(1, 10), 0).unwrap().unwrap();
        assert_eq!(cert.partition.to_string(), "{{1}, {2}}");
        assert_eq!(cert.fragments, vec![v(&[0, 0]), e.clone()]);
        assert!(cert.verify(&t, &s, &e, 0).unwrap());

        assert_eq!(disjointness_certificate(&t, &t, &e, &ratio(1, 10), 0).unwrap(), None);
        // at ε = 1 the trivial choice e_α = e always works
        assert!(disjointness_certificate(&t, &t, &e, &int(1), 0).unwrap().is_some());

        let zero = UrysonOperator::zero(Domain::Finite(2), 2);
        let cert = disjointness_certificate(&zero, &s, &e, &ratio(1, 10), 0).unwrap().unwrap();
        assert_eq!(cert.partition.blocks().len(), 1);
        assert!(cert.verify(&zero, &s, &e, 0).unwrap());
    }

    #[test]
    fn limiting_certificate_iff_meet_vanishes() {
        let mut rng = random::rng(31);
        let d = Domain::Finite(3);
        for _ in 0..40 {
            let t = random::kernel_operator(&mut rng, d, 2, true, 3);
            let s = random::kernel_operator(&mut rng, d, 2, true, 3);
            let e = random::element(&mut rng, d.model(), 0);
            let meet_zero = op_meet_at(&t, &s, &e, 0).unwrap().is_zero();
            let cert = disjointness_certificate(&t, &s, &e, &int(0), 0).unwrap();
            assert_eq!(meet_zero, cert.is_some());
        }
    }

    #[test]
    fn onedim_edge_cases() {
        let t = abs_identity(2);
        let phi = phi_sum_abs(2);
        // φ(e) = 0: π vanishes on supp(u)
        assert!(pi_onedim(&t, &phi, &v(&[1, 0]), &v(&[0, 0]), 0).unwrap().is_zero());
        assert!(pi_onedim(&t, &phi, &v(&[0, 0]), &v(&[3, 1]), 0).unwrap().is_zero());
        let pos = phi_sum_abs(2);
        let full = pi_onedim_band(&t, &[pos.clone(), pos.clone()], &[v(&[1, 0]), v(&[0, 1])], &v(&[3, -2]), 0).unwrap();
        assert_eq!(full, t.apply(&v(&[3, -2])).unwrap());
        let zero = pi_onedim_band(&t, std::slice::from_ref(&pos), &[v(&[0, 0])], &v(&[3, -2]), 0).unwrap();
        assert!(zero.is_zero());
        assert!(pi_onedim_band(&t, &[], &[], &v(&[1, 1]), 0).is_err());
        let single = pi_onedim_band(&t, std::slice::from_ref(&pos), &[v(&[1, 0])], &v(&[1, 1]), 0).unwrap();
        assert_eq!(single, pi_onedim(&t, &pos, &v(&[1, 0]), &v(&[1, 1]), 0).unwrap());
    }

    #[test]
    fn sigma_is_idempotent_on_remainder() {
        let mut rng = random::rng(17);
        let d = Domain::Finite(3);
        for _ in 0..10 {
            let t = random::kernel_operator(&mut rng, d, 2, true, 3);
            let s = random::kernel_operator(&mut rng, d, 2, true, 3);
            let rem = PointwiseOperator::new(d, 2, true, |x| sigma_at(&t, &s, x, &EvalMode::ExactLimit, 0));
            for _ in 0..5 {
                let e = random::element(&mut rng, d.model(), 0);
                assert_eq!(
                    sigma_at(&rem, &s, &e, &EvalMode::ExactLimit, 0).unwrap(),
                    sigma_at(&t, &s, &e, &EvalMode::ExactLimit, 0).unwrap()
                );
            }
        }
    }
}
