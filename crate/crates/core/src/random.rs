//! Seeded generators for operators and elements. ChaCha8 keeps streams
//! identical across platforms, so reports are reproducible from the seed.

use num_traits::Zero;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::element::{LatticeElement, Model};
use crate::operator::{Domain, UrysonOperator};
use crate::pwl::PiecewiseLinearFn;
use crate::rational::{self, Rational};

pub type SuiteRng = ChaCha8Rng;

pub fn rng(seed: u64) -> SuiteRng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Small rational `p/q` with `|p| <= 6`, `1 <= q <= 4`.
pub fn rational(rng: &mut SuiteRng) -> Rational {
    rational::ratio(rng.random_range(-6..=6), rng.random_range(1..=4))
}

pub fn nonnegative(rng: &mut SuiteRng) -> Rational {
    rational::ratio(rng.random_range(0..=6), rng.random_range(1..=4))
}

pub fn nonzero(rng: &mut SuiteRng) -> Rational {
    loop {
        let r = rational(rng);
        if !r.is_zero() {
            return r;
        }
    }
}

/// A kernel entry: vanishes at 0, at most `max_breakpoints` breakpoints.
/// Positive entries have nonnegative values and outward-nonnegative slopes.
pub fn pwl(rng: &mut SuiteRng, max_breakpoints: usize, positive: bool) -> PiecewiseLinearFn {
    let count = rng.random_range(1..=max_breakpoints.max(1));
    let mut ts = vec![Rational::zero()];
    while ts.len() < count {
        let t = nonzero(rng);
        if !ts.contains(&t) {
            ts.push(t);
        }
    }
    ts.sort();
    let breakpoints = ts
        .into_iter()
        .map(|t| {
            let v = if t.is_zero() {
                Rational::zero()
            } else if positive {
                nonnegative(rng)
            } else {
                rational(rng)
            };
            (t, v)
        })
        .collect();
    let (left, right) = if positive {
        (-nonnegative(rng), nonnegative(rng))
    } else {
        (rational(rng), rational(rng))
    };
    PiecewiseLinearFn::new(breakpoints, left, right).expect("sorted distinct breakpoints")
}

fn matrix(rng: &mut SuiteRng, rows: usize, cols: usize, positive: bool, max_bp: usize) -> Vec<Vec<PiecewiseLinearFn>> {
    (0..rows).map(|_| (0..cols).map(|_| pwl(rng, max_bp, positive)).collect()).collect()
}

/// Pure kernel operator.
pub fn kernel_operator(
    rng: &mut SuiteRng,
    domain: Domain,
    codomain: usize,
    positive: bool,
    max_bp: usize,
) -> UrysonOperator {
    let kernel = matrix(rng, codomain, domain.columns(), positive, max_bp);
    UrysonOperator::new(domain, codomain, kernel, None).expect("generated entries vanish at 0")
}

/// Kernel on the first `columns` coordinates plus a tail column.
pub fn kernel_operator_with_tail(
    rng: &mut SuiteRng,
    columns: usize,
    codomain: usize,
    positive: bool,
    max_bp: usize,
) -> UrysonOperator {
    let kernel = matrix(rng, codomain, columns, positive, max_bp);
    let tail = (0..codomain).map(|_| pwl(rng, max_bp, positive)).collect();
    UrysonOperator::new(Domain::EcSeq(columns), codomain, kernel, Some(tail))
        .expect("generated entries vanish at 0")
}

/// Positive scalar functional `x ↦ Σ_j c_j |x_j|` with random `c_j >= 0`.
pub fn positive_functional(rng: &mut SuiteRng, domain: Domain) -> UrysonOperator {
    let row = (0..domain.columns())
        .map(|_| PiecewiseLinearFn::abs().scale(&nonnegative(rng)))
        .collect();
    UrysonOperator::new(domain, 1, vec![row], None).expect("scaled |t| vanishes at 0")
}

fn coordinate(rng: &mut SuiteRng) -> Rational {
    if rng.random_range(0..4) == 0 {
        Rational::zero()
    } else {
        nonzero(rng)
    }
}

/// Random element; sequences get a prefix of length at most `max_prefix`.
pub fn element(rng: &mut SuiteRng, model: Model, max_prefix: usize) -> LatticeElement {
    match model {
        Model::Finite(n) => LatticeElement::finite((0..n).map(|_| coordinate(rng)).collect()),
        Model::EcSeq => {
            let len = rng.random_range(0..=max_prefix);
            let prefix = (0..len).map(|_| coordinate(rng)).collect();
            let tail = if rng.random_range(0..3) == 0 { Rational::zero() } else { nonzero(rng) };
            LatticeElement::ec_seq(prefix, tail)
        }
    }
}

/// Random nonnegative vector in `R^m` with at least one positive entry.
pub fn positive_vector(rng: &mut SuiteRng, m: usize) -> LatticeElement {
    loop {
        let v = LatticeElement::finite((0..m).map(|_| nonnegative(rng)).collect());
        if !v.is_zero() {
            return v;
        }
    }
}

/// Splits `x` into `y + z` with `y ⊥ z` along a random coordinate mask.
pub fn support_split(rng: &mut SuiteRng, x: &LatticeElement) -> (LatticeElement, LatticeElement) {
    let span = x.explicit_len();
    let mask: Vec<bool> = (0..span).map(|_| rng.random_bool(0.5)).collect();
    let y = match x.model() {
        Model::Finite(_) => LatticeElement::finite(
            (0..span)
                .map(|i| if mask[i] { x.coord(i).clone() } else { Rational::zero() })
                .collect(),
        ),
        Model::EcSeq => {
            let prefix = (0..span)
                .map(|i| if mask[i] { x.coord(i).clone() } else { Rational::zero() })
                .collect();
            let tail = if rng.random_bool(0.5) { x.tail().unwrap().clone() } else { Rational::zero() };
            LatticeElement::ec_seq(prefix, tail)
        }
    };
    let z = x - &y;
    (y, z)
}

/// Uniform-ish rational point of the order interval `[-b, b]` (finite `b`).
pub fn element_in_box(rng: &mut SuiteRng, b: &LatticeElement) -> LatticeElement {
    let coords = b
        .coords()
        .iter()
        .map(|bi| bi * rational::ratio(rng.random_range(-8i64..=8), 8))
        .collect();
    LatticeElement::finite(coords)
}
