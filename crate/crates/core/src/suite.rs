//! Randomized verification suites.
//!
//! Each suite draws operators and elements from a seeded generator, runs a
//! fixed list of checks and emits one [`Record`] per check. A check stops at
//! its first failure and keeps that case as the witness. Output depends only
//! on the scenario parameters and the seed.

use num_traits::Zero;
use rand::Rng;

use crate::band::{
    check_observation, disjointness_certificate, pi_at, pi_onedim, pi_onedim_band, project, sigma_at,
    sigma_increasing, stabilization_threshold, EvalMode, IncreasingSet,
};
use crate::calculus::{
    kernel_abs_closed_form, kernel_join_closed_form, kernel_meet_closed_form, op_join_at, op_meet_at, op_neg_at,
    op_pos_at,
};
use crate::element::{fragments, LatticeElement, Model};
use crate::error::{Error, Result};
use crate::lateral::{
    check_admissible, check_antitone, check_fragment_property, check_kernel_tail_orthogonality, continuous_part_at,
    is_singular, pi_d_at, pi_family_at, singular_witness, AdmissibleSet, FamilyOfAdmissible, LateralDecomposition,
};
use crate::operator::{
    check_orthogonal_additivity, describe, from_integral_kernel, one_dimensional, CrossTermOperator, Domain,
    Operator, PointwiseOperator, UrysonOperator,
};
use crate::pwl::PiecewiseLinearFn;
use crate::random::{self, SuiteRng};
use crate::rational::{int, ratio, Rational};
use crate::report::{Record, Report, Verdict};
use crate::scenario::Scenario;

pub const SUITES: [&str; 5] = ["th1", "disjointness", "band", "onedim", "lateral"];

/// Elements drawn per random operator.
const ELEMENTS: usize = 5;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SuiteOptions {
    pub trials: usize,
    pub resolution: usize,
    pub max_dim: usize,
    pub inject_corruption: bool,
}

impl SuiteOptions {
    pub fn from_scenario(scenario: &Scenario) -> Self {
        SuiteOptions {
            trials: scenario.suites.trials,
            resolution: scenario.suites.resolution,
            max_dim: scenario.suites.max_dim,
            inject_corruption: false,
        }
    }
}

/// Runs `name` (one of [`SUITES`] or `all`) on `scenario` with `seed`.
pub fn run_suite(scenario: &Scenario, name: &str, seed: u64) -> Result<Report> {
    run_suite_with(scenario, name, seed, &SuiteOptions::from_scenario(scenario))
}

pub fn run_suite_with(scenario: &Scenario, name: &str, seed: u64, options: &SuiteOptions) -> Result<Report> {
    let names: Vec<&str> = match name {
        "all" => SUITES.to_vec(),
        n if SUITES.contains(&n) => vec![n],
        n => return Err(Error::UnknownSuite(n.to_string())),
    };
    let mut report = Report::new(name, seed);
    for (k, suite) in SUITES.iter().enumerate() {
        if !names.contains(suite) {
            continue;
        }
        let ctx = Ctx { suite, seed, tag: k as u64 + 1, options, scenario };
        let records = match *suite {
            "th1" => th1(&ctx),
            "disjointness" => disjointness(&ctx),
            "band" => band(&ctx),
            "onedim" => onedim(&ctx),
            _ => lateral(&ctx),
        }?;
        for r in records {
            report.push(r);
        }
    }
    if options.inject_corruption {
        report.push(corruption_control(seed));
    }
    Ok(report)
}

struct Ctx<'a> {
    suite: &'a str,
    seed: u64,
    tag: u64,
    options: &'a SuiteOptions,
    scenario: &'a Scenario,
}

impl Ctx<'_> {
    fn rng(&self) -> SuiteRng {
        random::rng(self.seed.wrapping_add(self.tag.wrapping_mul(0x9E37_79B9_7F4A_7C15)))
    }

    fn dim(&self, rng: &mut SuiteRng, lo: usize, hi: usize) -> usize {
        rng.random_range(lo..=hi.min(self.options.max_dim).max(lo))
    }

    fn record(&self, tally: Tally) -> Record {
        let inputs = format!(
            "suite={} check={} seed={} trials={} resolution={}",
            self.suite, tally.id, self.seed, self.options.trials, self.options.resolution
        );
        let actual = match &tally.witness {
            None => format!("holds on {} cases", tally.checked),
            Some(_) => format!("violated at case {}", tally.checked),
        };
        Record::new(tally.id, tally.anchor, &inputs, tally.expected, actual, tally.witness.is_none(), tally.witness)
    }
}

/// Running outcome of one named check.
struct Tally {
    id: &'static str,
    anchor: &'static str,
    expected: &'static str,
    checked: usize,
    witness: Option<String>,
}

impl Tally {
    fn new(id: &'static str, anchor: &'static str, expected: &'static str) -> Self {
        Tally { id, anchor, expected, checked: 0, witness: None }
    }

    /// Runs one case; `Some(w)` or an error marks the check failed.
    fn case(&mut self, f: impl FnOnce() -> Result<Option<String>>) {
        if self.witness.is_some() {
            return;
        }
        self.checked += 1;
        match f() {
            Ok(None) => {}
            Ok(Some(w)) => self.witness = Some(w),
            Err(e) => self.witness = Some(format!("evaluation error: {e}")),
        }
    }

    fn verdict(&mut self, f: impl FnOnce() -> Result<Verdict>) {
        self.case(|| {
            let v = f()?;
            Ok(v.witness.filter(|_| !v.passed))
        });
    }
}

fn fail_unless(ok: bool, witness: impl FnOnce() -> String) -> Option<String> {
    (!ok).then(witness)
}

/// `x ↦ Σ_j c_j |x_j|` with every `c_j > 0`.
fn strict_functional(rng: &mut SuiteRng, n: usize) -> UrysonOperator {
    let row = (0..n)
        .map(|_| PiecewiseLinearFn::abs().scale(&(random::nonnegative(rng) + int(1))))
        .collect();
    UrysonOperator::finite(vec![row]).expect("scaled |t| vanishes at 0")
}

/// Nonnegative `u_1, u_2` in `R^m` (`m >= 2`) with disjoint nonempty supports.
fn orthogonal_pair(rng: &mut SuiteRng, m: usize) -> (LatticeElement, LatticeElement) {
    let side: Vec<bool> = (0..m).map(|i| if i < 2 { i == 0 } else { rng.random_bool(0.5) }).collect();
    let value = |rng: &mut SuiteRng| random::nonnegative(rng) + ratio(1, 2);
    let mut u1 = Vec::with_capacity(m);
    let mut u2 = Vec::with_capacity(m);
    for &left in &side {
        let v = value(rng);
        if left {
            u1.push(v);
            u2.push(Rational::zero());
        } else {
            u1.push(Rational::zero());
            u2.push(v);
        }
    }
    (LatticeElement::finite(u1), LatticeElement::finite(u2))
}

fn show(op: &UrysonOperator) -> String {
    format!("{{{} on {}}}", describe(op), op.domain())
}

fn th1(ctx: &Ctx) -> Result<Vec<Record>> {
    let mut rng = ctx.rng();
    let mut sum = Tally::new("th1.join-plus-meet", "th-1", "(T∨S)f + (T∧S)f = Tf + Sf");
    let mut jordan = Tally::new("th1.jordan", "th-1", "T⁺f - T⁻f = Tf");
    let mut modulus = Tally::new("th1.modulus", "th-1", "|Tf| <= |T|(f)");
    let mut upper = Tally::new("th1.join-upper-bound", "th-1", "(T∨S)f >= Tf and (T∨S)f >= Sf");
    let mut closed = Tally::new("th1.closed-form", "th-1", "kernel closed forms of ∨, ∧, |.| match the fragment formulas");
    let mut oa = Tally::new("ex1.orthogonal-additivity", "Ex-1", "kernel operators are orthogonally additive");
    let mut positivity = Tally::new(
        "def.positivity",
        "def:ddmjf0",
        "positive kernels map into the cone; every non-positive kernel has a witness",
    );
    let mut integral = Tally::new("ex0.discrete-integral", "Ex-0", "discrete integral operators evaluate as Σ μ(t) K(s,t,f(t))");

    for (name, op) in &ctx.scenario.operators {
        oa.case(|| {
            let v = check_orthogonal_additivity(op, ctx.options.trials, ctx.seed);
            Ok(v.witness.filter(|_| !v.passed).map(|w| format!("scenario operator {name}: {w}")))
        });
    }

    for _ in 0..ctx.options.trials {
        let n = ctx.dim(&mut rng, 1, 4);
        let m = ctx.dim(&mut rng, 1, 4);
        let d = Domain::Finite(n);
        let t = random::kernel_operator(&mut rng, d, m, false, 5);
        let s = random::kernel_operator(&mut rng, d, m, false, 5);
        let tp = random::kernel_operator(&mut rng, d, m, true, 5);
        let with_tail = random::kernel_operator_with_tail(&mut rng, n, m, false, 4);
        let oa_seed: u64 = rng.random();
        let forms = (kernel_join_closed_form(&t, &s), kernel_meet_closed_form(&t, &s), kernel_abs_closed_form(&t));

        oa.verdict(|| Ok(check_orthogonal_additivity(&t, 10, oa_seed)));
        oa.verdict(|| Ok(check_orthogonal_additivity(&with_tail, 10, oa_seed)));

        for _ in 0..ELEMENTS {
            let f = random::element(&mut rng, Model::Finite(n), 0);
            let witness = |what: &str, lhs: &LatticeElement, rhs: &LatticeElement| {
                format!("T={} S={} f={f}: {what}: {lhs} vs {rhs}", show(&t), show(&s))
            };
            let (tf, sf) = (t.apply(&f)?, s.apply(&f)?);
            let join = op_join_at(&t, &s, &f, 0)?;
            let meet = op_meet_at(&t, &s, &f, 0)?;
            let pos = op_pos_at(&t, &f, 0)?;
            let neg = op_neg_at(&t, &f, 0)?;
            sum.case(|| {
                let (l, r) = (join.try_add(&meet)?, tf.try_add(&sf)?);
                Ok(fail_unless(l == r, || witness("join + meet vs Tf + Sf", &l, &r)))
            });
            jordan.case(|| {
                let l = pos.try_sub(&neg)?;
                Ok(fail_unless(l == tf, || witness("T⁺f - T⁻f vs Tf", &l, &tf)))
            });
            modulus.case(|| {
                let abs = pos.try_add(&neg)?;
                Ok(fail_unless(tf.abs().le(&abs)?, || witness("|Tf| vs |T|f", &tf.abs(), &abs)))
            });
            upper.case(|| {
                let ok = tf.le(&join)? && sf.le(&join)?;
                Ok(fail_unless(ok, || witness("join vs Tf", &join, &tf)))
            });
            closed.case(|| {
                let (j, mt, a) = (forms.0.clone()?, forms.1.clone()?, forms.2.clone()?);
                let (jf, mf, af) = (j.apply(&f)?, mt.apply(&f)?, a.apply(&f)?);
                let abs = pos.try_add(&neg)?;
                Ok(if jf != join {
                    Some(witness("closed-form join vs fragment join", &jf, &join))
                } else if mf != meet {
                    Some(witness("closed-form meet vs fragment meet", &mf, &meet))
                } else if af != abs {
                    Some(witness("closed-form |T| vs fragment |T|", &af, &abs))
                } else {
                    None
                })
            });
        }

        positivity.case(|| {
            if !tp.is_positive() {
                return Ok(Some(format!("generated positive kernel {} rejected", show(&tp))));
            }
            for _ in 0..3 {
                let x = random::element(&mut rng, Model::Finite(n), 0);
                if !tp.apply(&x)?.is_nonnegative() {
                    return Ok(Some(format!("T={} x={x}: Tx is not nonnegative", show(&tp))));
                }
            }
            if !t.is_positive() {
                match t.positivity_witness() {
                    Some((x, row)) if t.apply(&x)?.coord(row) < &Rational::zero() => {}
                    _ => return Ok(Some(format!("T={} is not positive but no witness was found", show(&t)))),
                }
            }
            Ok(None)
        });

        integral.case(|| {
            let rows = ctx.dim(&mut rng, 1, 3);
            let kernel: Vec<Vec<PiecewiseLinearFn>> =
                (0..rows).map(|_| (0..n).map(|_| random::pwl(&mut rng, 3, false)).collect()).collect();
            let weights: Vec<Rational> = (0..n).map(|_| random::nonnegative(&mut rng) + ratio(1, 3)).collect();
            let op = from_integral_kernel(&kernel, &weights)?;
            let f = random::element(&mut rng, Model::Finite(n), 0);
            let direct: Vec<Rational> = kernel
                .iter()
                .map(|row| row.iter().zip(&weights).enumerate().map(|(j, (k, w))| w * k.eval(f.coord(j))).sum())
                .collect();
            let direct = LatticeElement::finite(direct);
            let value = op.apply(&f)?;
            Ok(fail_unless(value == direct, || format!("f={f}: operator gives {value}, direct sum {direct}")))
        });
    }
    Ok([sum, jordan, modulus, upper, closed, oa, positivity, integral].into_iter().map(|t| ctx.record(t)).collect())
}

fn disjointness(ctx: &Ctx) -> Result<Vec<Record>> {
    let mut rng = ctx.rng();
    let mut exists = Tally::new(
        "disjoint.certificate-exists",
        "disjoint",
        "disjoint one-dimensional pairs admit verified certificates for ε in {1, 1/2, 1/10}",
    );
    let mut meet = Tally::new("disjoint.meet-vanishes", "disjoint", "(T∧S)e = 0 for the constructed disjoint pairs");
    let mut none = Tally::new("disjoint.none-when-equal", "disjoint", "no certificate at ε = 1/10 when S = T and Te ≠ 0");
    let mut limit =
        Tally::new("disjoint.limit-iff-meet", "disjoint", "a limiting certificate exists iff (T∧S)e = 0");
    let epsilons = [int(1), ratio(1, 2), ratio(1, 10)];
    let n_res = ctx.options.resolution;

    for _ in 0..ctx.options.trials {
        let n = ctx.dim(&mut rng, 2, 4);
        let m = ctx.dim(&mut rng, 2, 4);
        let (u1, u2) = orthogonal_pair(&mut rng, m);
        let phi1 = strict_functional(&mut rng, n);
        let phi2 = strict_functional(&mut rng, n);
        let t = one_dimensional(&phi1, &u1)?;
        let s = one_dimensional(&phi2, &u2)?;
        for _ in 0..ELEMENTS {
            let e = random::element(&mut rng, Model::Finite(n), 0);
            meet.case(|| {
                let v = op_meet_at(&t, &s, &e, n_res)?;
                Ok(fail_unless(v.is_zero(), || format!("u1={u1} u2={u2} e={e}: meet {v}")))
            });
            for eps in &epsilons {
                exists.case(|| {
                    Ok(match disjointness_certificate(&t, &s, &e, eps, n_res)? {
                        Some(c) if c.verify(&t, &s, &e, n_res)? => None,
                        Some(c) => Some(format!("e={e}: certificate {c} does not verify")),
                        None => Some(format!("u1={u1} u2={u2} e={e} ε={}: no certificate", crate::rational::format(eps))),
                    })
                });
            }
        }
        let mut e = random::element(&mut rng, Model::Finite(n), 0);
        while e.is_zero() {
            e = random::element(&mut rng, Model::Finite(n), 0);
        }
        none.case(|| {
            Ok(disjointness_certificate(&t, &t, &e, &ratio(1, 10), n_res)?
                .map(|c| format!("S = T = φ⊗{u1}, e={e}: unexpected certificate {c}")))
        });

        let d = Domain::Finite(ctx.dim(&mut rng, 1, 3));
        let a = random::kernel_operator(&mut rng, d, m, true, 3);
        let b = random::kernel_operator(&mut rng, d, m, true, 3);
        let x = random::element(&mut rng, d.model(), 0);
        limit.case(|| {
            let zero = op_meet_at(&a, &b, &x, n_res)?.is_zero();
            let cert = disjointness_certificate(&a, &b, &x, &Rational::zero(), n_res)?;
            Ok(fail_unless(zero == cert.is_some(), || {
                format!("T={} S={} e={x}: meet zero {zero}, certificate {}", show(&a), show(&b), cert.is_some())
            }))
        });
    }
    Ok([exists, meet, none, limit].into_iter().map(|t| ctx.record(t)).collect())
}

fn band(ctx: &Ctx) -> Result<Vec<Record>> {
    let mut rng = ctx.rng();
    let exact = EvalMode::ExactLimit;
    let mut complement = Tally::new("cor2.complement", "cor:2", "π_S Te + σ_S Te = Te");
    let mut generator = Tally::new("cor2.generator", "cor:2", "π_S Se = Se and σ_S Se = 0");
    let mut observation = Tally::new(
        "cor2.observation",
        "cor:2",
        "ρ_Se^⊥ σ_S Te = ρ_Se^⊥ Te and π_S Te lies in the band of Se",
    );
    let mut grid = Tally::new(
        "cor2.grid-limit",
        "cor:2",
        "ε-grid values are monotone and equal the exact limit below the threshold and at ε = 2^-20",
    );
    let mut zero_gen = Tally::new("cor2.zero-generator", "cor:2", "S = 0 gives σ = Te and π = 0");
    let mut idempotent = Tally::new("cor2.idempotent", "cor:2", "σ_S applied to σ_S T changes nothing");
    let mut singleton = Tally::new("proj1.singleton", "proj-1", "σ over {S} equals σ_S");
    let mut scaling = Tally::new("proj1.scaling", "proj-1", "σ over {S, 2S} equals σ_S");
    let mut closure = Tally::new("proj1.directed-closure", "proj-1", "σ over the directed closure is below each member's σ");
    let tiny = ratio(1, 1 << 20);
    let n_res = ctx.options.resolution;

    for _ in 0..ctx.options.trials {
        let n = ctx.dim(&mut rng, 1, 3);
        let m = ctx.dim(&mut rng, 1, 3);
        let d = Domain::Finite(n);
        let t = random::kernel_operator(&mut rng, d, m, true, 4);
        let s = random::kernel_operator(&mut rng, d, m, true, 4);
        let s2 = random::kernel_operator(&mut rng, d, m, true, 4);
        let e = random::element(&mut rng, d.model(), 0);
        let who = || format!("T={} S={} e={e}", show(&t), show(&s));
        let p = project(&t, &s, &e, &exact, n_res)?;
        let te = t.apply(&e)?;

        complement.case(|| {
            let total = p.pi_part.try_add(&p.sigma_part)?;
            Ok(fail_unless(total == te, || format!("{}: π + σ = {total}, Te = {te}", who())))
        });
        generator.case(|| {
            let q = project(&s, &s, &e, &exact, n_res)?;
            let se = s.apply(&e)?;
            Ok(fail_unless(q.pi_part == se && q.sigma_part.is_zero(), || {
                format!("{}: π_S Se = {}, σ_S Se = {}, Se = {se}", who(), q.pi_part, q.sigma_part)
            }))
        });
        observation.case(|| Ok(fail_unless(check_observation(&t, &s, &e, n_res)?, who)));
        grid.case(|| {
            let g = project(&t, &s, &e, &EvalMode::Epsilon(tiny.clone()), n_res)?;
            if g.pi_part != p.pi_part || g.sigma_part != p.sigma_part {
                return Ok(Some(format!("{}: ε = 2^-20 gives ({}, {}), exact ({}, {})", who(), g.pi_part, g.sigma_part, p.pi_part, p.sigma_part)));
            }
            if let Some(thr) = stabilization_threshold(&s, &e, n_res)? {
                let below = thr / int(2);
                let g = project(&t, &s, &e, &EvalMode::Epsilon(below), n_res)?;
                if g.pi_part != p.pi_part || g.sigma_part != p.sigma_part {
                    return Ok(Some(format!("{}: below the threshold the grid has not stabilized", who())));
                }
            }
            let mut prev: Option<(LatticeElement, LatticeElement)> = None;
            for k in 0..4 {
                let g = project(&t, &s, &e, &EvalMode::Epsilon(ratio(1, 1 << k)), n_res)?;
                if let Some((pi, sigma)) = &prev {
                    if !g.sigma_part.le(sigma)? || !pi.le(&g.pi_part)? {
                        return Ok(Some(format!("{}: grid not monotone at ε = 2^-{k}", who())));
                    }
                }
                prev = Some((g.pi_part, g.sigma_part));
            }
            Ok(None)
        });
        zero_gen.case(|| {
            let z = UrysonOperator::zero(d, m);
            let q = project(&t, &z, &e, &exact, n_res)?;
            Ok(fail_unless(q.sigma_part == te && q.pi_part.is_zero(), || {
                format!("{}: with S = 0, π = {}, σ = {}", who(), q.pi_part, q.sigma_part)
            }))
        });
        idempotent.case(|| {
            let rem = PointwiseOperator::new(d, m, true, |x| sigma_at(&t, &s, x, &exact, n_res));
            let twice = sigma_at(&rem, &s, &e, &exact, n_res)?;
            Ok(fail_unless(twice == p.sigma_part, || format!("{}: σσT e = {twice}, σT e = {}", who(), p.sigma_part)))
        });
        singleton.case(|| {
            let v = sigma_increasing(&t, &IncreasingSet::new(vec![s.clone()])?, &e, n_res)?;
            Ok(fail_unless(v == p.sigma_part, || format!("{}: {v} vs {}", who(), p.sigma_part)))
        });
        scaling.case(|| {
            let set = IncreasingSet::new(vec![s.clone(), s.scale(&int(2))])?;
            let v = sigma_increasing(&t, &set, &e, n_res)?;
            Ok(fail_unless(v == p.sigma_part, || format!("{}: {v} vs {}", who(), p.sigma_part)))
        });
        closure.case(|| {
            let set = IncreasingSet::with_directed_closure(vec![s.clone(), s2.clone()])?;
            let v = sigma_increasing(&t, &set, &e, n_res)?;
            let other = sigma_at(&t, &s2, &e, &exact, n_res)?;
            Ok(fail_unless(v.le(&p.sigma_part)? && v.le(&other)?, || {
                format!("{} S2={}: closure σ {v} exceeds a member's σ", who(), show(&s2))
            }))
        });
    }
    Ok([complement, generator, observation, grid, zero_gen, idempotent, singleton, scaling, closure]
        .into_iter()
        .map(|t| ctx.record(t))
        .collect())
}

fn onedim(ctx: &Ctx) -> Result<Vec<Record>> {
    let mut rng = ctx.rng();
    let mut generic = Tally::new("lem6.generic-agreement", "lem:6", "the one-dimensional formula equals π_S with S = φ⊗u");
    let mut example = Tally::new(
        "lem6.worked-example",
        "lem:6",
        "φ = |x1|+|x2|, u = (1,0), T = (|x1|,|x2|), e = (1,1) gives π = (1,0), σ = (0,1)",
    );
    let mut family = Tally::new(
        "cor4.family-join",
        "cor:4",
        "the projection onto the band of {φ_k⊗u_k} is the join of the single projections",
    );
    let exact = EvalMode::ExactLimit;
    let n_res = ctx.options.resolution;

    example.case(|| {
        let t = UrysonOperator::diagonal(2, &PiecewiseLinearFn::abs());
        let phi = UrysonOperator::finite(vec![vec![PiecewiseLinearFn::abs(); 2]])?;
        let u = LatticeElement::from_ints(&[1, 0]);
        let e = LatticeElement::from_ints(&[1, 1]);
        let pi = pi_onedim(&t, &phi, &u, &e, n_res)?;
        let sigma = t.apply(&e)?.try_sub(&pi)?;
        let generic = project(&t, &one_dimensional(&phi, &u)?, &e, &exact, n_res)?;
        let want = (LatticeElement::from_ints(&[1, 0]), LatticeElement::from_ints(&[0, 1]));
        Ok(fail_unless(
            (pi.clone(), sigma.clone()) == want && generic.pi_part == want.0 && generic.sigma_part == want.1,
            || format!("got π = {pi}, σ = {sigma}"),
        ))
    });

    for _ in 0..ctx.options.trials {
        let n = ctx.dim(&mut rng, 1, 3);
        let m = ctx.dim(&mut rng, 1, 3);
        let d = Domain::Finite(n);
        let t = random::kernel_operator(&mut rng, d, m, true, 4);
        let phi = random::positive_functional(&mut rng, d);
        let u = random::positive_vector(&mut rng, m);
        let phi2 = random::positive_functional(&mut rng, d);
        let u2 = random::positive_vector(&mut rng, m);
        let e = random::element(&mut rng, d.model(), 0);
        let who = || format!("T={} φ={} u={u} e={e}", show(&t), show(&phi));
        generic.case(|| {
            let a = pi_onedim(&t, &phi, &u, &e, n_res)?;
            let b = pi_at(&t, &one_dimensional(&phi, &u)?, &e, &exact, n_res)?;
            Ok(fail_unless(a == b, || format!("{}: formula {a}, generic {b}", who())))
        });
        family.case(|| {
            let whole = pi_onedim_band(&t, &[phi.clone(), phi2.clone()], &[u.clone(), u2.clone()], &e, n_res)?;
            let p1 = PointwiseOperator::new(d, m, true, |x| pi_onedim(&t, &phi, &u, x, n_res));
            let p2 = PointwiseOperator::new(d, m, true, |x| pi_onedim(&t, &phi2, &u2, x, n_res));
            let join = op_join_at(&p1, &p2, &e, n_res)?;
            Ok(fail_unless(whole == join, || format!("{} u2={u2}: band {whole}, join {join}", who())))
        });
    }
    Ok([generic, example, family].into_iter().map(|t| ctx.record(t)).collect())
}

/// Admissible sets shipped with the suites, plus the scenario's own.
pub fn shipped_sets(scenario: &Scenario, rng: &mut SuiteRng) -> Result<Vec<AdmissibleSet>> {
    let f3 = Model::Finite(3);
    let positive = random::kernel_operator(rng, Domain::Finite(3), 2, true, 3);
    let flat = PiecewiseLinearFn::new(vec![(int(-1), int(0)), (int(0), int(0))], int(-1), int(1))?;
    let flat_kernel = UrysonOperator::diagonal(3, &flat);
    let tail_only = UrysonOperator::new(
        Domain::EcSeq(2),
        1,
        vec![vec![PiecewiseLinearFn::zero(); 2]],
        Some(vec![PiecewiseLinearFn::abs()]),
    )?;
    let mut sets = vec![
        AdmissibleSet::whole(f3),
        AdmissibleSet::ideal(f3, vec![true, false, true], false)?,
        AdmissibleSet::fragments_of(&LatticeElement::from_ints(&[1, 0, 2])),
        AdmissibleSet::null_set(&positive)?,
        AdmissibleSet::null_set(&flat_kernel)?,
        AdmissibleSet::whole(Model::EcSeq),
        AdmissibleSet::finitely_supported(),
        AdmissibleSet::ideal(Model::EcSeq, vec![false, true], true)?,
        AdmissibleSet::null_set(&tail_only)?,
    ];
    for name in scenario.admissible_specs.keys() {
        sets.push(scenario.admissible(name)?);
    }
    Ok(sets)
}

fn lateral(ctx: &Ctx) -> Result<Vec<Record>> {
    let mut rng = ctx.rng();
    let n_res = ctx.options.resolution;
    let mut adm = Tally::new("adm.shipped-sets", "def:adm", "shipped sets are closed under fragments and disjoint sums");
    let mut control = Tally::new("adm.negative-control", "def:adm", "{x : x1 = 1} fails fragment closure");
    let mut fragment = Tally::new(
        "le01.fragment-property",
        "le:01",
        "π^D T is orthogonally additive, 0 <= π^D T <= T, and disjoint from T - π^D T",
    );
    let mut antitone = Tally::new("le01.antitone", "le:01", "D ⊆ D' gives π^D T <= π^D' T");
    let mut satur = Tally::new(
        "satur.family-meet",
        "satur",
        "π over a two-set family is the meet of the two projections and is orthogonally additive",
    );
    let mut finite = Tally::new("projection.finite-collapse", "projection", "on R^n the continuous part is Te and the singular part 0");
    let mut split = Tally::new(
        "projection.sequence-split",
        "projection",
        "kernel+tail operators split into kernel part and tail part; both formulas agree and are stable in N",
    );
    let mut additive = Tally::new("projection.additive", "projection", "parts of T + T' are sums of parts");
    let mut example = Tally::new("projection.worked-example", "projection", "|x1| + |tail| at (5 | 3) splits as (5, 3)");
    let mut ortho = Tally::new("singular.orthogonality", "singular", "kernel and tail parts are disjoint and recovered from the sum");
    let mut singular = Tally::new(
        "singular.c00",
        "singular",
        "tail parts vanish on c00, kernel parts vanish there only when zero",
    );

    let sets = shipped_sets(ctx.scenario, &mut rng)?;
    for d in &sets {
        adm.case(|| {
            let v = check_admissible(d, n_res.min(8))?;
            Ok(v.witness.filter(|_| !v.passed).map(|w| format!("{}: {w}", d.name())))
        });
    }
    control.case(|| {
        let d = AdmissibleSet::custom("x1=1", Model::Finite(3), |x| *x.coord(0) == int(1));
        let v = check_admissible(&d, n_res)?;
        Ok(fail_unless(!v.passed, || "the set {x1 = 1} passed the admissibility check".into()))
    });
    example.case(|| {
        let k = UrysonOperator::new(
            Domain::EcSeq(1),
            1,
            vec![vec![PiecewiseLinearFn::abs()]],
            Some(vec![PiecewiseLinearFn::abs()]),
        )?;
        let e = LatticeElement::ec_seq(vec![int(5)], int(3));
        let parts = continuous_part_at(&k, &e, n_res)?;
        let want = LateralDecomposition {
            continuous_part: LatticeElement::from_ints(&[5]),
            singular_part: LatticeElement::from_ints(&[3]),
        };
        Ok(fail_unless(parts == want, || format!("got ({}, {})", parts.continuous_part, parts.singular_part)))
    });

    let c00 = AdmissibleSet::finitely_supported();
    let finite_sets: Vec<&AdmissibleSet> = sets.iter().filter(|d| d.model() == Model::Finite(3)).collect();
    let seq_sets: Vec<&AdmissibleSet> = sets.iter().filter(|d| d.model() == Model::EcSeq).collect();
    for _ in 0..ctx.options.trials {
        let m = ctx.dim(&mut rng, 1, 3);
        let t3 = random::kernel_operator(&mut rng, Domain::Finite(3), m, true, 3);
        let samples: Vec<LatticeElement> = (0..3).map(|_| random::element(&mut rng, Model::Finite(3), 0)).collect();
        for d in &finite_sets {
            fragment.verdict(|| check_fragment_property(&t3, d, &samples, 0));
        }
        let small_res = 3;
        let tseq = random::kernel_operator_with_tail(&mut rng, 2, m, true, 3);
        let seq_samples: Vec<LatticeElement> =
            (0..2).map(|_| random::element(&mut rng, Model::EcSeq, small_res)).collect();
        for d in &seq_sets {
            fragment.verdict(|| check_fragment_property(&tseq, d, &seq_samples, small_res));
        }
        antitone.verdict(|| {
            let whole = AdmissibleSet::whole(Model::Finite(3));
            let v = check_antitone(&t3, finite_sets[2], &whole, &samples, 0)?;
            Ok(v.and(check_antitone(&tseq, &c00, &AdmissibleSet::whole(Model::EcSeq), &seq_samples, small_res)?))
        });

        let a = random::element(&mut rng, Model::Finite(3), 0);
        let b = random::element(&mut rng, Model::Finite(3), 0);
        let (da, db) = (AdmissibleSet::fragments_of(&a), AdmissibleSet::fragments_of(&b));
        let fam = FamilyOfAdmissible::new(vec![da.clone(), db.clone()])?;
        satur.case(|| {
            let pa = PointwiseOperator::new(Domain::Finite(3), m, true, |x| pi_d_at(&t3, &da, x, 0));
            let pb = PointwiseOperator::new(Domain::Finite(3), m, true, |x| pi_d_at(&t3, &db, x, 0));
            for x in &samples {
                let v = pi_family_at(&t3, &fam, x, 0)?;
                let meet = op_meet_at(&pa, &pb, x, 0)?;
                if v != meet {
                    return Ok(Some(format!("T={} F{a}, F{b}, x={x}: family {v}, meet {meet}", show(&t3))));
                }
                for z in fragments(x, 0)? {
                    let parts = pi_family_at(&t3, &fam, &z, 0)?.try_add(&pi_family_at(&t3, &fam, &(x - &z), 0)?)?;
                    if parts != v {
                        return Ok(Some(format!("T={} x={x} z={z}: family projection not additive", show(&t3))));
                    }
                }
            }
            Ok(None)
        });

        let n = ctx.dim(&mut rng, 1, 6);
        let tn = random::kernel_operator(&mut rng, Domain::Finite(n), m, true, 3);
        for _ in 0..2 {
            let e = random::element(&mut rng, Model::Finite(n), 0);
            finite.case(|| {
                let parts = continuous_part_at(&tn, &e, n_res)?;
                let te = tn.apply(&e)?;
                Ok(fail_unless(parts.continuous_part == te && parts.singular_part.is_zero(), || {
                    format!("T={} e={e}: ({}, {})", show(&tn), parts.continuous_part, parts.singular_part)
                }))
            });
        }

        let j = ctx.dim(&mut rng, 1, 4);
        let tk = random::kernel_operator_with_tail(&mut rng, j, m, true, 3);
        let other = random::kernel_operator_with_tail(&mut rng, j, m, true, 3);
        let (kernel, tail) = (tk.kernel_part(), tk.tail_part());
        let e = random::element(&mut rng, Model::EcSeq, 4);
        split.case(|| {
            let parts = continuous_part_at(&tk, &e, n_res)?;
            let (ke, se) = (kernel.apply(&e)?, tail.apply(&e)?);
            Ok(fail_unless(parts.continuous_part == ke && parts.singular_part == se, || {
                format!("T={} e={e}: ({}, {}) vs ({ke}, {se})", show(&tk), parts.continuous_part, parts.singular_part)
            }))
        });
        additive.case(|| {
            let sum = tk.add(&other)?;
            let (p, q, r) = (
                continuous_part_at(&tk, &e, n_res)?,
                continuous_part_at(&other, &e, n_res)?,
                continuous_part_at(&sum, &e, n_res)?,
            );
            let ok = r.continuous_part == p.continuous_part.try_add(&q.continuous_part)?
                && r.singular_part == p.singular_part.try_add(&q.singular_part)?;
            Ok(fail_unless(ok, || format!("T={} T'={} e={e}", show(&tk), show(&other))))
        });
        ortho.verdict(|| check_kernel_tail_orthogonality(&kernel, &tail, std::slice::from_ref(&e), n_res));
        singular.case(|| {
            if !is_singular(&tail, &c00, n_res.min(6))? {
                return Ok(Some(format!("tail part of {} is not singular", show(&tk))));
            }
            let zero_kernel = kernel.same_operator(&UrysonOperator::zero(kernel.domain(), m));
            let w = singular_witness(&kernel, &c00, n_res.min(6))?;
            Ok(fail_unless(w.is_none() == zero_kernel, || format!("kernel part of {}: witness {w:?}", show(&tk))))
        });
    }
    Ok([adm, control, fragment, antitone, satur, finite, split, additive, example, ortho, singular]
        .into_iter()
        .map(|t| ctx.record(t))
        .collect())
}

/// An orthogonal additivity check on an operator with an injected cross
/// term. Expected to fail.
fn corruption_control(seed: u64) -> Record {
    let base = UrysonOperator::diagonal(2, &PiecewiseLinearFn::abs());
    let corrupted = CrossTermOperator { base, coefficient: int(1) };
    let v = check_orthogonal_additivity(&corrupted, 50, seed);
    let inputs = format!("control=cross-term seed={seed}");
    Record::from_verdict("control.cross-term", "Ex-1", &inputs, &v)
}
