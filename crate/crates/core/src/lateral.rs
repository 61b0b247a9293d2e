//! Admissible sets, the projections `π^D`, singular operators and the
//! laterally continuous part of a positive operator.
//!
//! An admissible set `D ⊂ E` is closed under taking fragments and under
//! sums of disjoint members. For positive `T`,
//! `π^D T(x) = sup { Ty : y ⊑ x, y ∈ D }` is again a positive orthogonally
//! additive operator and a fragment of `T`. Taking the infimum over the
//! laterally dense admissible sets gives the laterally continuous part
//! `T_n`; the remainder `T_s = T - T_n` is singular.
//!
//! Every finite-dimensional operator is laterally continuous, so the split is
//! only interesting on eventually constant sequences, where the tail column
//! of a kernel operator is exactly its singular part.

use std::fmt;
use std::sync::Arc;

use num_traits::Zero;

use crate::calculus::op_meet_at;
use crate::element::{fragments, is_fragment, FragmentChain, LatticeElement, Model};
use crate::error::{Error, Result};
use crate::operator::{Operator, PointwiseOperator, UrysonOperator};
use crate::pwl::PiecewiseLinearFn;
use crate::rational::{int, ratio, Rational};
use crate::report::Verdict;

type Predicate = Arc<dyn Fn(&LatticeElement) -> bool + Send + Sync>;

#[derive(Clone)]
pub enum AdmissibleKind {
    /// The whole space.
    Whole,
    /// Elements vanishing outside `mask`. On sequences, positions at or past
    /// `mask.len()` (and the tail) are allowed iff `beyond`.
    Ideal { mask: Vec<bool>, beyond: bool },
    /// `F_e`.
    Fragments(LatticeElement),
    /// `N_T = { x : Tx = 0 }` for positive `T`.
    NullSet(UrysonOperator),
    /// Finitely supported sequences.
    FinitelySupported,
    /// An arbitrary membership rule. Not assumed admissible.
    Custom(Predicate),
}

impl fmt::Debug for AdmissibleKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            AdmissibleKind::Whole => f.write_str("Whole"),
            AdmissibleKind::Ideal { mask, beyond } => {
                f.debug_struct("Ideal").field("mask", mask).field("beyond", beyond).finish()
            }
            AdmissibleKind::Fragments(e) => write!(f, "Fragments({e})"),
            AdmissibleKind::NullSet(_) => f.write_str("NullSet(..)"),
            AdmissibleKind::FinitelySupported => f.write_str("FinitelySupported"),
            AdmissibleKind::Custom(_) => f.write_str("Custom(..)"),
        }
    }
}

/// A named subset of `E` with a membership test, a sample generator and a
/// lateral density flag.
#[derive(Clone, Debug)]
pub struct AdmissibleSet {
    name: String,
    model: Model,
    kind: AdmissibleKind,
    laterally_dense: bool,
    justification: String,
}

impl AdmissibleSet {
    fn build(name: impl Into<String>, model: Model, kind: AdmissibleKind, dense: bool, why: &str) -> Self {
        AdmissibleSet { name: name.into(), model, kind, laterally_dense: dense, justification: why.into() }
    }

    pub fn whole(model: Model) -> Self {
        Self::build("E", model, AdmissibleKind::Whole, true, "contains every element")
    }

    /// The order ideal of elements supported in `mask`.
    pub fn ideal(model: Model, mask: Vec<bool>, beyond: bool) -> Result<Self> {
        if let Model::Finite(n) = model {
            if mask.len() != n {
                return Err(Error::DimensionMismatch { expected: n, found: mask.len() });
            }
        }
        let full = mask.iter().all(|&b| b) && (beyond || matches!(model, Model::Finite(_)));
        let why = if full { "the ideal is the whole space" } else { "elements outside the support mask are not lateral limits" };
        let name = format!("ideal{}", mask_text(&mask, beyond, model));
        Ok(Self::build(name, model, AdmissibleKind::Ideal { mask, beyond }, full, why))
    }

    pub fn fragments_of(e: &LatticeElement) -> Self {
        let dense = matches!(e.model(), Model::Finite(0));
        Self::build(
            format!("F{e}"),
            e.model(),
            AdmissibleKind::Fragments(e.clone()),
            dense,
            "only fragments of a single element",
        )
    }

    /// `N_T` for a positive operator. Dense iff `T` vanishes on every
    /// finitely supported element: `T = 0` on `R^n`, zero kernel part on
    /// sequences.
    pub fn null_set(t: &UrysonOperator) -> Result<Self> {
        if !t.is_positive() {
            return Err(Error::NotPositive("T".into()));
        }
        let model = t.domain().model();
        let zero_on_c00 = t.kernel().iter().flatten().all(|f| f.same_function(&PiecewiseLinearFn::zero()));
        let dense = zero_on_c00 && (model == Model::EcSeq || !t.has_tail());
        let why = if dense { "T vanishes on all finitely supported elements" } else { "T is nonzero on some finitely supported element" };
        Ok(Self::build("N_T", model, AdmissibleKind::NullSet(t.clone()), dense, why))
    }

    pub fn finitely_supported() -> Self {
        Self::build(
            "c00",
            Model::EcSeq,
            AdmissibleKind::FinitelySupported,
            true,
            "prefix truncations form lateral chains converging to any element",
        )
    }

    pub fn custom(
        name: impl Into<String>,
        model: Model,
        predicate: impl Fn(&LatticeElement) -> bool + Send + Sync + 'static,
    ) -> Self {
        Self::build(name, model, AdmissibleKind::Custom(Arc::new(predicate)), false, "no density claim")
    }

    /// Overrides the lateral density flag of a custom set.
    pub fn with_density(mut self, dense: bool, justification: impl Into<String>) -> Self {
        self.laterally_dense = dense;
        self.justification = justification.into();
        self
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn with_name(mut self, name: impl Into<String>) -> Self {
        self.name = name.into();
        self
    }

    pub fn model(&self) -> Model {
        self.model
    }

    pub fn kind(&self) -> &AdmissibleKind {
        &self.kind
    }

    pub fn laterally_dense(&self) -> bool {
        self.laterally_dense
    }

    pub fn justification(&self) -> &str {
        &self.justification
    }

    pub fn contains(&self, x: &LatticeElement) -> bool {
        if x.model() != self.model {
            return false;
        }
        match &self.kind {
            AdmissibleKind::Whole => true,
            AdmissibleKind::Ideal { mask, beyond } => {
                let span = x.explicit_len().max(if x.tail().is_some() { mask.len() } else { 0 });
                let inside = (0..span).all(|i| x.coord(i).is_zero() || mask.get(i).copied().unwrap_or(*beyond));
                let tail_ok = x.tail().is_none_or(|t| t.is_zero() || *beyond);
                inside && tail_ok
            }
            AdmissibleKind::Fragments(e) => is_fragment(x, e).unwrap_or(false),
            AdmissibleKind::NullSet(t) => t.apply(x).is_ok_and(|y| y.is_zero()),
            AdmissibleKind::FinitelySupported => x.tail().is_some_and(|t| t.is_zero()),
            AdmissibleKind::Custom(p) => p(x),
        }
    }

    /// Elements whose fragments make up the sample universe.
    fn probes(&self, resolution: usize) -> Vec<LatticeElement> {
        let mut out = standard_probes(self.model, resolution);
        match &self.kind {
            AdmissibleKind::Fragments(e) => out.push(e.clone()),
            AdmissibleKind::NullSet(t) => out.push(null_probe(t, resolution)),
            _ => {}
        }
        out.retain(|p| p.model() != Model::EcSeq || p.explicit_len() <= resolution);
        out
    }

    /// Members among the fragments of each probe, grouped by probe. Each
    /// group is indexed by the fragment bitmask of [`fragments`].
    fn groups(&self, resolution: usize) -> Result<Vec<(Vec<LatticeElement>, Vec<bool>)>> {
        self.probes(resolution)
            .into_iter()
            .map(|p| {
                let frags = fragments(&p, resolution)?;
                let member = frags.iter().map(|f| self.contains(f)).collect();
                Ok((frags, member))
            })
            .collect()
    }

    /// Sampled members at `resolution`, deduplicated, in a fixed order.
    pub fn samples(&self, resolution: usize) -> Result<Vec<LatticeElement>> {
        let mut out: Vec<LatticeElement> = Vec::new();
        for (frags, member) in self.groups(resolution)? {
            for (f, m) in frags.into_iter().zip(member) {
                if m && !out.contains(&f) {
                    out.push(f);
                }
            }
        }
        Ok(out)
    }
}

impl fmt::Display for AdmissibleSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} on {} ({})", self.name, self.model, if self.laterally_dense { "laterally dense" } else { "not dense" })
    }
}

fn mask_text(mask: &[bool], beyond: bool, model: Model) -> String {
    let idx: Vec<String> = mask.iter().enumerate().filter(|(_, &b)| b).map(|(i, _)| (i + 1).to_string()).collect();
    let more = if beyond && model == Model::EcSeq { ",..." } else { "" };
    format!("{{{}{}}}", idx.join(","), more)
}

/// `(1, 2, ..., k)` and an alternating mixed-sign vector, with tails on sequences.
fn standard_probes(model: Model, resolution: usize) -> Vec<LatticeElement> {
    let len = match model {
        Model::Finite(n) => n,
        Model::EcSeq => resolution,
    };
    let ramp: Vec<Rational> = (1..=len as i64).map(int).collect();
    let mixed: Vec<Rational> =
        (1..=len as i64).map(|i| if i % 2 == 1 { int(-i) } else { ratio(1, i) }).collect();
    match model {
        Model::Finite(_) => vec![LatticeElement::finite(ramp), LatticeElement::finite(mixed)],
        Model::EcSeq => vec![
            LatticeElement::ec_seq(ramp, int(len as i64 + 1)),
            LatticeElement::ec_seq(mixed, ratio(-1, len as i64 + 1)),
        ],
    }
}

/// First nonzero probe point where every function vanishes, if any.
fn common_zero(fs: &[&PiecewiseLinearFn]) -> Rational {
    PiecewiseLinearFn::probe_points(fs)
        .into_iter()
        .filter(|t| !t.is_zero())
        .find(|t| fs.iter().all(|f| f.eval(t).is_zero()))
        .unwrap_or_else(Rational::zero)
}

/// An element whose every coordinate lies in the zero set of the matching
/// kernel column, so its fragments exercise `N_T` nontrivially.
fn null_probe(t: &UrysonOperator, resolution: usize) -> LatticeElement {
    let cols = t.domain().columns();
    let column = |j: usize| -> Vec<&PiecewiseLinearFn> { t.kernel().iter().map(|row| &row[j]).collect() };
    match t.domain().model() {
        Model::Finite(_) => LatticeElement::finite((0..cols).map(|j| common_zero(&column(j))).collect()),
        Model::EcSeq => {
            let prefix: Vec<Rational> = (0..resolution.max(cols))
                .map(|j| if j < cols { common_zero(&column(j)) } else { int(j as i64 + 1) })
                .collect();
            let tail = match t.tail() {
                Some(tail) => common_zero(&tail.iter().collect::<Vec<_>>()),
                None => int(resolution as i64 + 2),
            };
            LatticeElement::ec_seq(prefix, tail)
        }
    }
}

/// Checks closure under fragments and under disjoint sums on every probe's
/// fragment lattice, exhaustively.
pub fn check_admissible(d: &AdmissibleSet, resolution: usize) -> Result<Verdict> {
    let groups = d.groups(resolution)?;
    if groups.iter().all(|(_, m)| !m.iter().any(|&b| b)) {
        return Err(Error::Empty("admissible set samples"));
    }
    let mut checked = 0;
    for (frags, member) in &groups {
        let full = frags.len() - 1;
        for a in (0..frags.len()).filter(|&a| member[a]) {
            // fragments of a member: submasks of a
            let mut z = a;
            loop {
                checked += 1;
                if !member[z] {
                    return Ok(Verdict::fail(
                        checked,
                        format!("fragment {} of member {} is not in {}", frags[z], frags[a], d.name),
                    ));
                }
                if z == 0 {
                    break;
                }
                z = (z - 1) & a;
            }
            // disjoint members: submasks of the complement of a
            let rest = full & !a;
            let mut b = rest;
            loop {
                if member[b] {
                    checked += 1;
                    if !member[a | b] {
                        return Ok(Verdict::fail(
                            checked,
                            format!("disjoint members {} and {} sum outside {}", frags[a], frags[b], d.name),
                        ));
                    }
                }
                if b == 0 {
                    break;
                }
                b = (b - 1) & rest;
            }
        }
    }
    Ok(Verdict::pass(checked))
}

/// A finite list of admissible sets standing for the upward-saturated family
/// it generates.
#[derive(Clone, Debug)]
pub struct FamilyOfAdmissible {
    generators: Vec<AdmissibleSet>,
}

impl FamilyOfAdmissible {
    pub fn new(generators: Vec<AdmissibleSet>) -> Result<Self> {
        if generators.is_empty() {
            return Err(Error::Empty("admissible family"));
        }
        Ok(FamilyOfAdmissible { generators })
    }

    pub fn generators(&self) -> &[AdmissibleSet] {
        &self.generators
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LateralDecomposition {
    pub continuous_part: LatticeElement,
    pub singular_part: LatticeElement,
}

fn require_positive<O: Operator + ?Sized>(t: &O) -> Result<()> {
    if t.is_positive() {
        Ok(())
    } else {
        Err(Error::NotPositive("T".into()))
    }
}

/// `π^D T(x) = sup { Ty : y ⊑ x, y ∈ D }`, zero when no fragment lies in `D`.
pub fn pi_d_at<O: Operator + ?Sized>(
    t: &O,
    d: &AdmissibleSet,
    x: &LatticeElement,
    resolution: usize,
) -> Result<LatticeElement> {
    require_positive(t)?;
    t.domain().check(x)?;
    let mut best = LatticeElement::zero(Model::Finite(t.codomain()));
    for y in fragments(x, resolution)? {
        if d.contains(&y) {
            best = best.sup(&t.apply(&y)?)?;
        }
    }
    Ok(best)
}

/// Checks on `samples` that `π^D T` is orthogonally additive, lies between
/// `0` and `T`, and is disjoint from `T - π^D T`.
pub fn check_fragment_property<O: Operator + Sync + ?Sized>(
    t: &O,
    d: &AdmissibleSet,
    samples: &[LatticeElement],
    resolution: usize,
) -> Result<Verdict> {
    require_positive(t)?;
    let pi = PointwiseOperator::new(t.domain(), t.codomain(), true, |x| pi_d_at(t, d, x, resolution));
    let rest = PointwiseOperator::difference(t, &pi, true);
    let mut checked = 0;
    for x in samples {
        let px = pi.apply(x)?;
        let tx = t.apply(x)?;
        checked += 1;
        let zero = LatticeElement::zero(px.model());
        if !zero.le(&px)? || !px.le(&tx)? {
            return Ok(Verdict::fail(checked, format!("0 <= pi^D T <= T fails at x={x}: pi={px}, T={tx}")));
        }
        for z in fragments(x, resolution)? {
            let w = x - &z;
            let parts = pi.apply(&z)?.try_add(&pi.apply(&w)?)?;
            checked += 1;
            if parts != px {
                return Ok(Verdict::fail(
                    checked,
                    format!("pi^D T not additive on {z} + {w}: {parts} vs {px}"),
                ));
            }
        }
        let meet = op_meet_at(&pi, &rest, x, resolution)?;
        checked += 1;
        if !meet.is_zero() {
            return Ok(Verdict::fail(checked, format!("pi^D T and T - pi^D T meet at x={x}: {meet}")));
        }
    }
    Ok(Verdict::pass(checked))
}

/// `π^𝔄 T(e)`: the infimum of the `π^D T` over the generators, taken in the
/// operator lattice, i.e. the minimum over splittings `e = y_1 + ... + y_k`
/// into disjoint fragments of `Σ π^{D_k} T(y_k)`. For nested generators this
/// is the coordinatewise minimum.
pub fn pi_family_at<O: Operator + ?Sized>(
    t: &O,
    family: &FamilyOfAdmissible,
    e: &LatticeElement,
    resolution: usize,
) -> Result<LatticeElement> {
    meet_over(t, family.generators(), e, resolution)
}

/// `π^D T` at every fragment of `e`, indexed like [`fragments`]: bit `k` of
/// the index keeps the `k`-th nonzero slot. A fragment's value is the max of
/// its own `Ty` (when in `D`) and the values one slot below it.
fn pi_table(d: &AdmissibleSet, frags: &[LatticeElement], images: &[LatticeElement], zero: &LatticeElement) -> Result<Vec<LatticeElement>> {
    let mut table: Vec<LatticeElement> = Vec::with_capacity(frags.len());
    for (x, y) in frags.iter().enumerate() {
        let mut best = if d.contains(y) { images[x].clone() } else { zero.clone() };
        let mut bits = x;
        while bits != 0 {
            let low = bits & bits.wrapping_neg();
            best = best.sup(&table[x ^ low])?;
            bits ^= low;
        }
        table.push(best);
    }
    Ok(table)
}

fn meet_over<O: Operator + ?Sized>(
    t: &O,
    sets: &[AdmissibleSet],
    e: &LatticeElement,
    resolution: usize,
) -> Result<LatticeElement> {
    require_positive(t)?;
    t.domain().check(e)?;
    let (last, rest) = sets.split_last().ok_or(Error::Empty("admissible family"))?;
    let frags = fragments(e, resolution)?;
    let full = frags.len() - 1;
    let images = frags.iter().map(|y| t.apply(y)).collect::<Result<Vec<_>>>()?;
    let zero = LatticeElement::zero(Model::Finite(t.codomain()));
    let mut acc = pi_table(last, &frags, &images, &zero)?;
    for (k, d) in rest.iter().enumerate().rev() {
        let own = pi_table(d, &frags, &images, &zero)?;
        // only the full mask is needed after the final combination
        let targets: Vec<usize> = if k == 0 { vec![full] } else { (0..=full).collect() };
        let mut next = acc.clone();
        for x in targets {
            let mut best: Option<LatticeElement> = None;
            let mut y = x;
            loop {
                let v = own[y].try_add(&acc[x ^ y])?;
                best = Some(match best {
                    None => v,
                    Some(b) => b.inf(&v)?,
                });
                if y == 0 {
                    break;
                }
                y = (y - 1) & x;
            }
            next[x] = best.expect("the empty submask");
        }
        acc = next;
    }
    Ok(acc.swap_remove(full))
}

/// Laterally dense admissible sets used for `π_n` on each model.
pub fn dense_catalog(model: Model) -> Vec<AdmissibleSet> {
    match model {
        Model::Finite(_) => vec![AdmissibleSet::whole(model)],
        Model::EcSeq => vec![AdmissibleSet::whole(model), AdmissibleSet::finitely_supported()],
    }
}

/// `inf { π^D T(e) : D in the dense catalog }`.
pub fn continuous_by_catalog<O: Operator + ?Sized>(t: &O, e: &LatticeElement, resolution: usize) -> Result<LatticeElement> {
    let family = FamilyOfAdmissible::new(dense_catalog(e.model()))?;
    pi_family_at(t, &family, e, resolution)
}

/// `inf over chains e_α → e of sup_α T e_α`, over the constant and the prefix chain.
pub fn continuous_by_chains<O: Operator + ?Sized>(t: &O, e: &LatticeElement, resolution: usize) -> Result<LatticeElement> {
    require_positive(t)?;
    let chains = [FragmentChain::constant(e), FragmentChain::prefix_chain(e, resolution)?];
    let mut best: Option<LatticeElement> = None;
    for chain in &chains {
        let mut top = LatticeElement::zero(Model::Finite(t.codomain()));
        for step in chain.steps() {
            top = top.sup(&t.apply(step)?)?;
        }
        best = Some(match best {
            None => top,
            Some(b) => b.inf(&top)?,
        });
    }
    Ok(best.expect("two chains"))
}

/// Splits `Te` into its laterally continuous and singular parts. Both
/// formulas are evaluated at `resolution` and `resolution + 3` and must
/// agree.
pub fn continuous_part_at<O: Operator + ?Sized>(
    t: &O,
    e: &LatticeElement,
    resolution: usize,
) -> Result<LateralDecomposition> {
    require_positive(t)?;
    t.domain().check(e)?;
    let te = t.apply(e)?;
    let catalog = continuous_by_catalog(t, e, resolution)?;
    let chains = continuous_by_chains(t, e, resolution)?;
    if catalog != chains {
        return Err(Error::Inconsistent(format!("catalog value {catalog} differs from chain value {chains} at e={e}")));
    }
    if e.model() == Model::EcSeq {
        let finer = continuous_by_catalog(t, e, resolution + 3)?;
        let finer_chains = continuous_by_chains(t, e, resolution + 3)?;
        if finer != catalog || finer_chains != chains {
            return Err(Error::Inconsistent(format!(
                "continuous part at e={e} moves from {catalog} to {finer} between resolutions {resolution} and {}",
                resolution + 3
            )));
        }
    }
    let singular = te.try_sub(&catalog)?;
    Ok(LateralDecomposition { continuous_part: catalog, singular_part: singular })
}

/// A sampled member of `D` that `T` does not annihilate.
pub fn singular_witness<O: Operator + ?Sized>(
    t: &O,
    d: &AdmissibleSet,
    resolution: usize,
) -> Result<Option<LatticeElement>> {
    if !d.laterally_dense() {
        return Err(Error::NotLaterallyDense(d.name().to_string()));
    }
    for y in d.samples(resolution)? {
        if !t.apply(&y)?.is_zero() {
            return Ok(Some(y));
        }
    }
    Ok(None)
}

/// `T` vanishes on every sampled member of the laterally dense set `D`.
pub fn is_singular<O: Operator + ?Sized>(t: &O, d: &AdmissibleSet, resolution: usize) -> Result<bool> {
    Ok(singular_witness(t, d, resolution)?.is_none())
}

/// A pure kernel operator and a pure tail operator are disjoint, and their
/// sum splits back into them.
pub fn check_kernel_tail_orthogonality(
    kernel: &UrysonOperator,
    tail: &UrysonOperator,
    samples: &[LatticeElement],
    resolution: usize,
) -> Result<Verdict> {
    if kernel.has_tail() {
        return Err(Error::Inconsistent("kernel operator carries a tail column".into()));
    }
    if !tail.kernel_part().same_operator(&UrysonOperator::zero(tail.domain(), tail.codomain())) {
        return Err(Error::Inconsistent("tail operator has a nonzero kernel part".into()));
    }
    require_positive(kernel)?;
    require_positive(tail)?;
    let sum = kernel.add(tail)?;
    let mut checked = 0;
    for e in samples {
        checked += 1;
        let meet = op_meet_at(kernel, tail, e, resolution)?;
        if !meet.is_zero() {
            return Ok(Verdict::fail(checked, format!("kernel and tail parts meet at e={e}: {meet}")));
        }
        let parts = continuous_part_at(&sum, e, resolution)?;
        let expected = LateralDecomposition { continuous_part: kernel.apply(e)?, singular_part: tail.apply(e)? };
        if parts != expected {
            return Ok(Verdict::fail(
                checked,
                format!(
                    "decomposition at e={e} is ({}, {}), expected ({}, {})",
                    parts.continuous_part, parts.singular_part, expected.continuous_part, expected.singular_part
                ),
            ));
        }
    }
    Ok(Verdict::pass(checked))
}

/// `D ⊆ D'` on samples implies `π^D T <= π^{D'} T` there.
pub fn check_antitone<O: Operator + ?Sized>(
    t: &O,
    small: &AdmissibleSet,
    large: &AdmissibleSet,
    samples: &[LatticeElement],
    resolution: usize,
) -> Result<Verdict> {
    for (k, x) in samples.iter().enumerate() {
        let a = pi_d_at(t, small, x, resolution)?;
        let b = pi_d_at(t, large, x, resolution)?;
        if !a.le(&b)? {
            return Ok(Verdict::fail(k + 1, format!("pi^{} = {a} exceeds pi^{} = {b} at x={x}", small.name(), large.name())));
        }
    }
    Ok(Verdict::pass(samples.len()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::operator::Domain;
    use crate::random;

    fn v(c: &[i64]) -> LatticeElement {
        LatticeElement::from_ints(c)
    }

    fn seq(prefix: &[i64], tail: i64) -> LatticeElement {
        LatticeElement::ec_seq(prefix.iter().map(|&p| int(p)).collect(), int(tail))
    }

    fn abs_identity(n: usize) -> UrysonOperator {
        UrysonOperator::diagonal(n, &PiecewiseLinearFn::abs())
    }

    /// `x ↦ |x_1| + |tail|` on sequences.
    fn kernel_plus_tail() -> UrysonOperator {
        UrysonOperator::new(
            Domain::EcSeq(1),
            1,
            vec![vec![PiecewiseLinearFn::abs()]],
            Some(vec![PiecewiseLinearFn::abs()]),
        )
        .unwrap()
    }

    fn tail_only() -> UrysonOperator {
        UrysonOperator::new(Domain::EcSeq(1), 1, vec![vec![PiecewiseLinearFn::zero()]], Some(vec![PiecewiseLinearFn::abs()]))
            .unwrap()
    }

    #[test]
    fn shipped_sets_are_admissible() {
        let f2 = Model::Finite(2);
        let sets = vec![
            AdmissibleSet::fragments_of(&v(&[1, 2])),
            AdmissibleSet::whole(f2),
            AdmissibleSet::ideal(f2, vec![true, false], false).unwrap(),
            AdmissibleSet::null_set(&abs_identity(2)).unwrap(),
            AdmissibleSet::finitely_supported(),
            AdmissibleSet::whole(Model::EcSeq),
            AdmissibleSet::ideal(Model::EcSeq, vec![false, true], true).unwrap(),
            AdmissibleSet::null_set(&tail_only()).unwrap(),
        ];
        for d in &sets {
            for n in [2, 6] {
                let verdict = check_admissible(d, n).unwrap();
                assert!(verdict.passed, "{d}: {:?}", verdict.witness);
            }
        }
        assert!(AdmissibleSet::finitely_supported().laterally_dense());
        assert!(AdmissibleSet::null_set(&tail_only()).unwrap().laterally_dense());
        assert!(!AdmissibleSet::fragments_of(&v(&[1, 2])).laterally_dense());
    }

    #[test]
    fn negative_control_fails_fragment_closure() {
        let d = AdmissibleSet::custom("x1=1", Model::Finite(3), |x| *x.coord(0) == int(1));
        let verdict = check_admissible(&d, 0).unwrap();
        assert!(!verdict.passed);
        assert!(verdict.witness.unwrap().contains("is not in x1=1"));
        let never = AdmissibleSet::custom("none", Model::Finite(2), |_| false);
        assert!(check_admissible(&never, 0).is_err());
    }

    #[test]
    fn null_set_of_kernel_with_flat_zero() {
        // |t| - |t - 1| ... built from a kernel vanishing on [-1, 0]
        let f = PiecewiseLinearFn::new(vec![(int(-1), int(0)), (int(0), int(0))], int(-1), int(1)).unwrap();
        let t = UrysonOperator::diagonal(2, &f);
        let d = AdmissibleSet::null_set(&t).unwrap();
        let samples = d.samples(0).unwrap();
        assert!(samples.iter().any(|x| !x.is_zero()));
        assert!(check_admissible(&d, 0).unwrap().passed);
    }

    #[test]
    fn pi_d_examples() {
        let t = abs_identity(2);
        let x = v(&[1, 1]);
        assert_eq!(pi_d_at(&t, &AdmissibleSet::fragments_of(&v(&[1, 0])), &x, 0).unwrap(), v(&[1, 0]));
        assert_eq!(pi_d_at(&t, &AdmissibleSet::whole(Model::Finite(2)), &x, 0).unwrap(), v(&[1, 1]));
        assert!(pi_d_at(&t, &AdmissibleSet::fragments_of(&v(&[0, 0])), &x, 0).unwrap().is_zero());
        let id = UrysonOperator::diagonal(2, &PiecewiseLinearFn::linear(int(1)));
        assert!(pi_d_at(&id, &AdmissibleSet::whole(Model::Finite(2)), &x, 0).is_err());
    }

    #[test]
    fn fragment_property() {
        let t = abs_identity(2);
        let samples = vec![v(&[1, 1]), v(&[2, -3]), v(&[0, 5])];
        for d in [
            AdmissibleSet::fragments_of(&v(&[1, 0])),
            AdmissibleSet::whole(Model::Finite(2)),
            AdmissibleSet::null_set(&t).unwrap(),
        ] {
            let verdict = check_fragment_property(&t, &d, &samples, 0).unwrap();
            assert!(verdict.passed, "{d}: {:?}", verdict.witness);
        }
        let d = AdmissibleSet::null_set(&t).unwrap();
        assert!(pi_d_at(&t, &d, &v(&[2, -3]), 0).unwrap().is_zero());
    }

    #[test]
    fn family_minimum() {
        let t = abs_identity(2);
        let e = v(&[1, 1]);
        let a = AdmissibleSet::fragments_of(&v(&[1, 0]));
        let b = AdmissibleSet::fragments_of(&v(&[0, 1]));
        let fam = FamilyOfAdmissible::new(vec![a.clone(), b]).unwrap();
        assert!(pi_family_at(&t, &fam, &e, 0).unwrap().is_zero());
        let single = FamilyOfAdmissible::new(vec![a.clone()]).unwrap();
        assert_eq!(pi_family_at(&t, &single, &e, 0).unwrap(), v(&[1, 0]));
        assert!(FamilyOfAdmissible::new(vec![]).is_err());

        // the generator-wise minimum is not additive; the meet is
        let phi = UrysonOperator::finite(vec![vec![PiecewiseLinearFn::abs(); 2]]).unwrap();
        assert!(pi_family_at(&phi, &fam, &e, 0).unwrap().is_zero());
        let nested = FamilyOfAdmissible::new(vec![AdmissibleSet::whole(Model::Finite(2)), a]).unwrap();
        assert_eq!(pi_family_at(&t, &nested, &e, 0).unwrap(), v(&[1, 0]));
    }

    #[test]
    fn decomposition_examples() {
        let t = kernel_plus_tail();
        let e = seq(&[5], 3);
        let parts = continuous_part_at(&t, &e, 8).unwrap();
        assert_eq!(parts.continuous_part, v(&[5]));
        assert_eq!(parts.singular_part, v(&[3]));

        let parts = continuous_part_at(&tail_only(), &seq(&[4, 1], 0), 8).unwrap();
        assert!(parts.continuous_part.is_zero() && parts.singular_part.is_zero());

        let mut rng = random::rng(3);
        for _ in 0..10 {
            let t = random::kernel_operator(&mut rng, Domain::Finite(3), 2, true, 4);
            let e = random::element(&mut rng, Model::Finite(3), 0);
            let parts = continuous_part_at(&t, &e, 0).unwrap();
            assert_eq!(parts.continuous_part, t.apply(&e).unwrap());
            assert!(parts.singular_part.is_zero());
        }
    }

    #[test]
    fn singularity() {
        let c00 = AdmissibleSet::finitely_supported();
        assert!(is_singular(&tail_only(), &c00, 6).unwrap());
        let k = UrysonOperator::new(Domain::EcSeq(2), 1, vec![vec![PiecewiseLinearFn::abs(); 2]], None).unwrap();
        assert!(singular_witness(&k, &c00, 6).unwrap().is_some());
        assert!(!is_singular(&k, &c00, 6).unwrap());
        assert!(is_singular(&UrysonOperator::zero(Domain::EcSeq(2), 1), &c00, 6).unwrap());
        let not_dense = AdmissibleSet::fragments_of(&seq(&[1], 0));
        assert_eq!(is_singular(&k, &not_dense, 6), Err(Error::NotLaterallyDense(not_dense.name().into())));
    }

    #[test]
    fn kernel_and_tail_parts_are_orthogonal() {
        let k = UrysonOperator::new(Domain::EcSeq(1), 1, vec![vec![PiecewiseLinearFn::abs()]], None).unwrap();
        let samples = vec![seq(&[5], 3), seq(&[], 2), seq(&[0, 1], 0)];
        assert!(check_kernel_tail_orthogonality(&k, &tail_only(), &samples, 8).unwrap().passed);
        let zero_tail = UrysonOperator::zero(Domain::EcSeq(1), 1);
        assert!(check_kernel_tail_orthogonality(&k, &zero_tail, &samples, 8).unwrap().passed);
        assert!(check_kernel_tail_orthogonality(&kernel_plus_tail(), &tail_only(), &samples, 8).is_err());
    }

    #[test]
    fn antitone_in_d() {
        let t = abs_identity(3);
        let small = AdmissibleSet::fragments_of(&v(&[1, 0, 2]));
        let large = AdmissibleSet::whole(Model::Finite(3));
        let samples = large.samples(0).unwrap();
        assert!(check_antitone(&t, &small, &large, &samples, 0).unwrap().passed);
    }
}
