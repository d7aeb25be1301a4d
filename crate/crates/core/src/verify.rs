//! Verification suites: every property check of the crate, grouped the way
//! the `verify` subcommand exposes them, with default limits sized for a
//! desktop run.

use std::fmt;
use std::str::FromStr;

use num_bigint::BigUint;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde_json::json;

use crate::error::{Error, Result};
use crate::fluctuation::{self, CauchyEnvelope};
use crate::irregularity::{self, LogMode, Method, Threshold};
use crate::numerics::{enumerate_by_blocks, fmt_f64, Dyadic, Interval, Rational, DEFAULT_PREC};
use crate::report::{Check, CheckRecord, VerifyReport, Witness};
use crate::reversal::{self, AffineRecurrence};
use crate::vdc;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Suite {
    All,
    Discrepancy,
    Bounds,
    Fluctuation,
    Reversal,
    Matrices,
    Stern,
}

impl Suite {
    pub const NAMES: [&'static str; 7] = [
        "all",
        "discrepancy",
        "bounds",
        "fluctuation",
        "reversal",
        "matrices",
        "stern",
    ];

    fn name(self) -> &'static str {
        match self {
            Suite::All => "all",
            Suite::Discrepancy => "discrepancy",
            Suite::Bounds => "bounds",
            Suite::Fluctuation => "fluctuation",
            Suite::Reversal => "reversal",
            Suite::Matrices => "matrices",
            Suite::Stern => "stern",
        }
    }
}

impl FromStr for Suite {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        Ok(match s {
            "all" => Suite::All,
            "discrepancy" => Suite::Discrepancy,
            "bounds" => Suite::Bounds,
            "fluctuation" => Suite::Fluctuation,
            "reversal" => Suite::Reversal,
            "matrices" => Suite::Matrices,
            "stern" => Suite::Stern,
            _ => {
                return Err(Error::Parse {
                    kind: "suite",
                    input: s.to_string(),
                })
            }
        })
    }
}

impl fmt::Display for Suite {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// Ranges and sample sizes of every check. `Default` is the documented run.
#[derive(Clone, Debug)]
pub struct Limits {
    pub agreement: u64,
    pub upper_bound: u64,
    pub envelope_level: u32,
    pub limsup_level: u32,
    pub polygonal_level: u32,
    pub symmetry_level: u32,
    pub block_bounds: u64,
    pub sandwich_level: u32,
    pub block_enumeration_level: u32,
    pub block_sum_level: u32,
    pub robbins: u64,
    pub binomial_points: usize,
    pub census: u64,
    pub fluctuation: u64,
    pub cauchy_levels: (u32, u32),
    pub monotone_level: u32,
    pub explicit_reversal: u64,
    pub quadruples: usize,
    pub quadruple_limit: u64,
    pub identity_triples: usize,
    pub matrix_triples: usize,
    pub matrix_bits: u32,
    pub stern: u64,
    pub stern_max_level: u32,
    pub stern_reversal: u64,
    pub stern_psi_level: u32,
}

impl Default for Limits {
    fn default() -> Self {
        Limits {
            agreement: 4096,
            upper_bound: 1 << 22,
            envelope_level: 22,
            limsup_level: 40,
            polygonal_level: 20,
            symmetry_level: 20,
            block_bounds: 1 << 20,
            sandwich_level: 20,
            block_enumeration_level: 20,
            block_sum_level: 30,
            robbins: 500,
            binomial_points: 100,
            census: 1 << 20,
            fluctuation: 1 << 20,
            cauchy_levels: (5, 28),
            monotone_level: 20,
            explicit_reversal: 1 << 20,
            quadruples: 50,
            quadruple_limit: 1 << 16,
            identity_triples: 1000,
            matrix_triples: 50,
            matrix_bits: 14,
            stern: 1 << 20,
            stern_max_level: 24,
            stern_reversal: 1 << 16,
            stern_psi_level: 12,
        }
    }
}

impl Limits {
    /// Replaces every exhaustive index range by `limit` (levels and sample
    /// counts are kept).
    pub fn with_index_limit(mut self, limit: u64) -> Self {
        let limit = limit.max(2);
        for l in [
            &mut self.agreement,
            &mut self.upper_bound,
            &mut self.block_bounds,
            &mut self.census,
            &mut self.fluctuation,
            &mut self.explicit_reversal,
            &mut self.quadruple_limit,
            &mut self.stern,
            &mut self.stern_reversal,
        ] {
            *l = limit;
        }
        self
    }
}

/// A deliberate defect, for checking that the suites catch it.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Fault {
    /// Runs the agreement check against a recurrence with `γ = 33/64`.
    CorruptRecurrence,
}

#[derive(Clone, Debug)]
pub struct VerifyConfig {
    pub suite: Suite,
    pub seed: u64,
    pub limits: Limits,
    pub timed: bool,
    pub fault: Option<Fault>,
}

impl VerifyConfig {
    pub fn new(suite: Suite) -> Self {
        VerifyConfig {
            suite,
            seed: 0,
            limits: Limits::default(),
            timed: false,
            fault: None,
        }
    }
}

pub fn run(config: &VerifyConfig) -> VerifyReport {
    let mut report = VerifyReport::new(config.suite.name(), config.seed);
    let suites = match config.suite {
        Suite::All => vec![
            Suite::Discrepancy,
            Suite::Bounds,
            Suite::Fluctuation,
            Suite::Reversal,
            Suite::Matrices,
            Suite::Stern,
        ],
        s => vec![s],
    };
    let mut ctx = Ctx {
        report: &mut report,
        config,
    };
    for s in suites {
        match s {
            Suite::Discrepancy => discrepancy(&mut ctx),
            Suite::Bounds => bounds(&mut ctx),
            Suite::Fluctuation => fluctuation_suite(&mut ctx),
            Suite::Reversal => reversal_suite(&mut ctx),
            Suite::Matrices => matrices(&mut ctx),
            Suite::Stern => stern(&mut ctx),
            Suite::All => unreachable!(),
        }
    }
    report
}

struct Ctx<'a> {
    report: &'a mut VerifyReport,
    config: &'a VerifyConfig,
}

impl Ctx<'_> {
    fn limits(&self) -> &Limits {
        &self.config.limits
    }

    fn run(&mut self, f: impl FnOnce() -> CheckRecord) {
        self.report.run(self.config.timed, f);
    }

    fn check(&mut self, id: &str, params: serde_json::Value, f: impl FnOnce() -> Check) {
        self.run(|| CheckRecord::new(id, params, f()));
    }
}

fn all_of<I: IntoIterator<Item = Check>>(checks: I) -> Check {
    checks.into_iter().collect()
}

fn expect_eq<T: PartialEq + fmt::Display>(what: &str, got: T, want: T) -> Check {
    if got == want {
        Ok(())
    } else {
        Err(Witness::msg(format!("{what}: got {got}, expected {want}")))
    }
}

/// The 32 values `d_0 … d_31` in canonical form.
pub const TABLE: [&str; 32] = [
    "0", "1", "1", "3/2", "1", "7/4", "3/2", "7/4", "1", "15/8", "7/4", "17/8", "3/2", "17/8", "7/4", "15/8", "1",
    "31/16", "15/8", "37/16", "7/4", "39/16", "17/8", "37/16", "3/2", "37/16", "17/8", "39/16", "7/4", "37/16", "15/8",
    "31/16",
];

fn discrepancy(ctx: &mut Ctx) {
    let l = ctx.limits().clone();
    ctx.check("discrepancy.table", json!({"range": [0, 32]}), || {
        all_of((0..32u64).map(|n| {
            let got = vdc::d_explicit(n).to_rational();
            let want: Rational = TABLE[n as usize].parse().expect("table entry");
            if got == want {
                Ok(())
            } else {
                Err(Witness::at(n, format!("d_n = {got}, table has {want}")))
            }
        }))
    });
    let fault = ctx.config.fault;
    ctx.check(
        "discrepancy.triple_agreement",
        json!({"max": l.agreement}),
        || match fault {
            Some(Fault::CorruptRecurrence) => {
                let bad = AffineRecurrence::new(
                    Rational::frac(1, 2),
                    Rational::frac(1, 2),
                    Rational::frac(33, 64),
                    Rational::one(),
                );
                vdc::check_triple_agreement_with(l.agreement, &|n| {
                    if n == 0 {
                        Dyadic::zero()
                    } else {
                        Dyadic::from_rational(&reversal::eval_recurrence(&bad, n)).expect("dyadic parameters")
                    }
                })
            }
            None => vdc::check_triple_agreement(l.agreement),
        },
    );
    ctx.check("discrepancy.doubling", json!({"limit": l.explicit_reversal}), || {
        vdc::check_doubling(l.explicit_reversal)
    });
    ctx.check("discrepancy.min_value", json!({"limit": l.explicit_reversal}), || {
        vdc::check_min_value(l.explicit_reversal)
    });
}

fn bounds(ctx: &mut Ctx) {
    let l = ctx.limits().clone();
    ctx.check("bounds.upper_bound", json!({"limit": l.upper_bound}), || {
        vdc::check_upper_bound(l.upper_bound)
    });
    ctx.check("bounds.envelope", json!({"k_max": l.envelope_level}), || {
        all_of((1..=l.envelope_level).map(vdc::check_envelope))
    });
    ctx.run(|| {
        let probe = vdc::limsup_probe(l.limsup_level);
        let target = vdc::limsup_target();
        let gap = probe.sub(&target).abs();
        let outcome = if gap.certainly_lt(&Interval::from_f64(1e-6, DEFAULT_PREC)) {
            Ok(())
        } else {
            Err(Witness::msg(format!("probe {probe} vs target {target}")))
        };
        CheckRecord::new("bounds.limsup", json!({"k": l.limsup_level}), outcome)
            .observe("probe", fmt_f64(probe.mid_f64()))
            .observe("target", fmt_f64(target.mid_f64()))
    });
    ctx.check("bounds.polygonal", json!({"k_max": l.polygonal_level}), || {
        all_of((1..=l.polygonal_level).map(vdc::check_polygonal))
    });
    ctx.check("bounds.symmetry", json!({"k_max": l.symmetry_level}), || {
        all_of((1..=l.symmetry_level).map(vdc::check_symmetry))
    });
    ctx.check("bounds.block_bounds", json!({"limit": l.block_bounds}), || {
        irregularity::verify_block_bounds(l.block_bounds)
    });
    ctx.check(
        "bounds.block_counts",
        json!({"k_max": l.block_enumeration_level}),
        || {
            all_of((0..=l.block_enumeration_level).flat_map(|k| {
                (1..=k / 2 + 1).map(move |b| {
                    let listed = enumerate_by_blocks(k, b).len() as u64;
                    expect_eq(
                        &format!("a({k},{b})"),
                        irregularity::a_count(k, b),
                        BigUint::from(listed),
                    )
                })
            }))
        },
    );
    ctx.check("bounds.block_sum", json!({"k_max": l.block_sum_level}), || {
        all_of((0..=l.block_sum_level).map(|k| {
            let total: BigUint = (1..=k / 2 + 1).map(|b| irregularity::a_count(k, b)).sum();
            expect_eq(&format!("sum over blocks at k = {k}"), total, BigUint::from(1u64) << k)
        }))
    });
    ctx.run(|| {
        let (lower, upper) = irregularity::tightness_probe(8);
        let outcome = if lower > Rational::frac(2, 3) && upper < Rational::from_int(2) {
            Ok(())
        } else {
            Err(Witness::msg(format!("ratios {lower}, {upper} outside (2/3, 2)")))
        };
        CheckRecord::new("bounds.tightness", json!({"k": 8}), outcome)
            .observe("ratio_lower", lower.to_string())
            .observe("ratio_upper", upper.to_string())
    });
    let ts = ["1", "3/2", "2", "5/2", "3"];
    ctx.check("bounds.sandwich", json!({"k_max": l.sandwich_level, "t": ts}), || {
        all_of((1..=l.sandwich_level).flat_map(|k| {
            ts.iter()
                .map(move |t| irregularity::sandwich_check(k, &t.parse().expect("rational")))
        }))
    });
    ctx.check("bounds.robbins", json!({"n_max": l.robbins}), || {
        match (1..=l.robbins).find(|&n| !irregularity::robbins_check(n)) {
            None => Ok(()),
            Some(n) => Err(Witness::at(n, "Stirling bounds fail")),
        }
    });
    let seed = ctx.config.seed;
    ctx.check(
        "bounds.binomial_estimate",
        json!({"points": l.binomial_points, "seed": seed}),
        || {
            all_of(
                binomial_points(seed, l.binomial_points)
                    .into_iter()
                    .map(
                        |(k, ell, a, b)| match irregularity::binom_bounds_check(k, ell, &a, &b) {
                            Ok(true) => Ok(()),
                            Ok(false) => Err(Witness::msg(format!("k = {k}, l = {ell}, alpha = {a}, beta = {b}"))),
                            Err(e) => Err(Witness::msg(format!("generator produced invalid point: {e}"))),
                        },
                    ),
            )
        },
    );
    ctx.run(|| {
        let ln2 = Interval::ln2(DEFAULT_PREC);
        let upper = irregularity::exponent_constant(&ln2.mul_int(4).div_int(100)).expect("in (0, 1)");
        let lower = irregularity::exponent_constant(&ln2.div_int(100)).expect("in (0, 1)");
        let outcome = if upper.certainly_lt(&Interval::from_rational(&Rational::frac(183, 1000), DEFAULT_PREC))
            && Interval::from_rational(&Rational::frac(56, 1000), DEFAULT_PREC).certainly_lt(&lower)
        {
            Ok(())
        } else {
            Err(Witness::msg(format!("e(4 ln2/100) = {upper}, e(ln2/100) = {lower}")))
        };
        CheckRecord::new("bounds.exponents", json!({}), outcome)
            .observe("upper_exponent", fmt_f64(upper.mid_f64()))
            .observe("lower_exponent", fmt_f64(lower.mid_f64()))
    });
    let thresholds = [
        Threshold::Absolute(Rational::one()),
        Threshold::Absolute(Rational::frac(3, 2)),
        Threshold::Absolute(Rational::from_int(3)),
        Threshold::Log {
            epsilon: Rational::frac(1, 100),
            mode: LogMode::Index,
        },
        Threshold::Log {
            epsilon: Rational::frac(1, 10),
            mode: LogMode::Window,
        },
        Threshold::Log {
            epsilon: Rational::frac(1, 4),
            mode: LogMode::Index,
        },
    ];
    ctx.check("bounds.census_methods", json!({"limit": l.census}), || {
        all_of(thresholds.iter().map(|t| {
            let direct = irregularity::census(l.census, t, Method::Direct).count;
            let pruned = irregularity::census(l.census, t, Method::Pruned).count;
            expect_eq(&format!("pruned census for {t}"), pruned, direct)
        }))
    });
    ctx.run(|| {
        let t = Threshold::Log {
            epsilon: Rational::frac(1, 100),
            mode: LogMode::Index,
        };
        let r = irregularity::census(l.census, &t, Method::Pruned);
        CheckRecord::new(
            "bounds.census_empty",
            json!({"limit": l.census, "threshold": t}),
            expect_eq("count", r.count, 0),
        )
        .observe("empirical_exponent", r.exponent_text())
    });
    ctx.check("bounds.normal_cdf", json!({}), || {
        let phi0 = irregularity::normal_cdf(0.0);
        let sym = irregularity::normal_cdf(1.3) + irregularity::normal_cdf(-1.3);
        if (phi0 - 0.5).abs() < 1e-15 && (sym - 1.0).abs() < 1e-14 {
            Ok(())
        } else {
            Err(Witness::msg(format!("Phi(0) = {phi0}, Phi(1.3) + Phi(-1.3) = {sym}")))
        }
    });
}

/// Random valid points `(k, ℓ, α, β)` for the binomial estimate:
/// `0 < α ≤ β ≤ 1/e` and `αk ≤ ℓ ≤ βk`.
pub fn binomial_points(seed: u64, count: usize) -> Vec<(u64, u64, Rational, Rational)> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0xb1_0a1);
    let mut out = Vec::with_capacity(count);
    while out.len() < count {
        let k: u64 = rng.gen_range(10..=400);
        // β ≤ 36/100 < 1/e
        let b_num: i64 = rng.gen_range(1..=36);
        let a_num: i64 = rng.gen_range(1..=b_num);
        let (alpha, beta) = (Rational::frac(a_num, 100), Rational::frac(b_num, 100));
        let lo = (a_num as u64 * k).div_ceil(100).max(1);
        let hi = b_num as u64 * k / 100;
        if lo <= hi {
            out.push((k, rng.gen_range(lo..=hi), alpha, beta));
        }
    }
    out
}

fn fluctuation_suite(ctx: &mut Ctx) {
    let l = ctx.limits().clone();
    ctx.check("fluctuation.s_doubling", json!({"limit": l.fluctuation}), || {
        fluctuation::check_s_doubling(l.fluctuation)
    });
    ctx.check("fluctuation.r_invariance", json!({"limit": l.fluctuation}), || {
        fluctuation::check_r_invariance(l.fluctuation)
    });
    ctx.check("fluctuation.periodic_identity", json!({"limit": l.fluctuation}), || {
        fluctuation::check_theorem3(l.fluctuation)
    });
    ctx.check("fluctuation.psi_zero", json!({"k_max": 40}), || {
        all_of((1..=40).map(|k| {
            let z = fluctuation::psi_at_zero(k);
            if z.rational == Rational::frac(1, 2) && z.odd_part == 1 {
                Ok(())
            } else {
                Err(Witness::msg(format!(
                    "psi_{k}(0) = {} - log2({})/4",
                    z.rational, z.odd_part
                )))
            }
        }))
    });
    let (kmin, kmax) = l.cauchy_levels;
    let mut calibrated = None;
    ctx.run(|| {
        let env = calibrated.insert(CauchyEnvelope::calibrate(kmin, kmax));
        let mut rec = CheckRecord::new("fluctuation.cauchy", json!({"k_min": kmin, "k_max": kmax}), env.check())
            .observe("calibrated_c", fmt_f64(env.constant))
            .observe("modulus", fmt_f64(env.modulus));
        for lv in &env.levels {
            rec = rec.observe(&format!("m_{}", lv.k), fmt_f64(lv.m_k));
        }
        rec
    });
    let env = calibrated.expect("calibrated above");
    ctx.run(|| {
        CheckRecord::new(
            "fluctuation.jumps",
            json!({"k_min": kmin, "k_max": kmax}),
            fluctuation::check_jump_constant(&env),
        )
        .observe("jump_constant", fmt_f64(env.jump_constant))
    });
    ctx.check("fluctuation.psi_eval", json!({"k": [2, 10, 20]}), || {
        all_of([2u32, 10, 20].into_iter().map(|k| {
            let s = fluctuation::psi_eval(&Rational::zero(), k, &env).map_err(|e| Witness::msg(e.to_string()))?;
            expect_eq(&format!("psi_{k}(0)"), s.psi.rational, Rational::frac(1, 2))
        }))
    });
    ctx.check("fluctuation.monotone", json!({"k_max": l.monotone_level}), || {
        all_of((1..=l.monotone_level).map(fluctuation::check_piecewise_monotone))
    });
    ctx.run(|| {
        let (dev, at) = fluctuation::mean_value_deviation(l.fluctuation);
        CheckRecord::new(
            "fluctuation.mean_value",
            json!({"limit": l.fluctuation, "bound": "1"}),
            fluctuation::check_mean_value(l.fluctuation, &Rational::one()),
        )
        .observe("max_deviation", fmt_f64(dev))
        .observe("argmax", at)
    });
}

fn reversal_suite(ctx: &mut Ctx) {
    let l = ctx.limits().clone();
    let seed = ctx.config.seed;
    ctx.check("reversal.explicit", json!({"limit": l.explicit_reversal}), || {
        reversal::check_corollary(l.explicit_reversal)
    });
    ctx.check("reversal.d19_d25", json!({}), || {
        let want = Rational::frac(37, 16);
        all_of([19u64, 25].map(|n| expect_eq(&format!("d_{n}"), vdc::d_explicit(n).to_rational(), want.clone())))
    });
    ctx.check(
        "reversal.discrepancy_family",
        json!({"limit": l.quadruple_limit}),
        || {
            let rec = AffineRecurrence::discrepancy();
            let values = reversal::eval_batch(&rec, l.quadruple_limit);
            all_of((1..l.quadruple_limit).map(|n| {
                let d = vdc::d_explicit(n).to_rational();
                if values[n as usize] == d {
                    Ok(())
                } else {
                    Err(Witness::at(
                        n,
                        format!("recurrence {} vs explicit {d}", values[n as usize]),
                    ))
                }
            }))
        },
    );
    ctx.check(
        "reversal.quadruples",
        json!({"count": l.quadruples, "limit": l.quadruple_limit, "seed": seed}),
        || {
            all_of(
                reversal::random_recurrences(seed, l.quadruples)
                    .iter()
                    .map(|rec| reversal::check_reversal(rec, l.quadruple_limit)),
            )
        },
    );
}

fn matrices(ctx: &mut Ctx) {
    let l = ctx.limits().clone();
    let seed = ctx.config.seed;
    ctx.check("matrices.examples", json!({}), || {
        let d = AffineRecurrence::discrepancy();
        all_of([
            eval(&d, 3, Rational::frac(3, 2)),
            eval(&d, 19, Rational::frac(37, 16)),
            eval(&AffineRecurrence::stern(), 5, Rational::from_int(3)),
        ])
    });
    let fixed = [
        [Rational::zero(), Rational::zero(), Rational::zero()],
        [Rational::frac(1, 2), Rational::frac(1, 2), Rational::frac(1, 2)],
        [Rational::one(), Rational::one(), Rational::zero()],
    ];
    let triples: Vec<[Rational; 3]> = fixed
        .into_iter()
        .chain(reversal::random_triples(seed, l.identity_triples))
        .collect();
    ctx.run(|| {
        let mut failures = Vec::new();
        let mut per_identity = vec![0u64; 16];
        for [a, b, c] in &triples {
            for (i, r) in reversal::verify_matrix_identities(a, b, c).iter().enumerate() {
                if r.holds {
                    per_identity[i] += 1;
                } else if failures.len() < 8 {
                    failures.push(json!({"word": r.word, "side": r.side, "alpha": a.to_string(), "beta": b.to_string(), "gamma": c.to_string()}));
                }
            }
        }
        let outcome = if failures.is_empty() {
            Ok(())
        } else {
            Err(Witness::msg(serde_json::to_string(&failures).expect("json")))
        };
        let listing: Vec<_> = reversal::verify_matrix_identities(&Rational::one(), &Rational::one(), &Rational::one())
            .iter()
            .zip(&per_identity)
            .map(|(r, held)| json!({"word": r.word, "side": r.side, "held": held}))
            .collect();
        CheckRecord::new("matrices.identities", json!({"triples": triples.len(), "seed": seed}), outcome)
            .observe("identities", listing)
    });
    ctx.check(
        "matrices.agreement",
        json!({"triples": l.matrix_triples, "bits": l.matrix_bits, "seed": seed, "x1": "1"}),
        || {
            all_of(
                reversal::random_triples(seed.wrapping_add(1), l.matrix_triples)
                    .iter()
                    .map(|[a, b, c]| reversal::check_matrix_agreement(a, b, c, l.matrix_bits)),
            )
        },
    );
}

fn eval(rec: &AffineRecurrence, n: u64, want: Rational) -> Check {
    let got = reversal::eval_matrix(rec, n).map_err(|e| Witness::at(n, e.to_string()))?;
    expect_eq(&format!("matrix value at n = {n}"), got, want)
}

fn stern(ctx: &mut Ctx) {
    let l = ctx.limits().clone();
    ctx.check("stern.doubling", json!({"limit": l.stern}), || {
        fluctuation::check_stern_doubling(l.stern)
    });
    ctx.check("stern.max", json!({"k_max": l.stern_max_level}), || {
        fluctuation::check_stern_max(l.stern_max_level)
    });
    ctx.check("stern.reversal", json!({"limit": l.stern_reversal}), || {
        fluctuation::check_stern_reversal(l.stern_reversal)
    });
    ctx.check("stern.recurrence_family", json!({"limit": l.stern_reversal}), || {
        reversal::check_reversal(&AffineRecurrence::stern(), l.stern_reversal)
    });
    ctx.check(
        "stern.psi_invariance",
        json!({"k": l.stern_psi_level, "tolerance": "1e-12"}),
        || fluctuation::check_stern_psi_invariance(l.stern_psi_level, 1e-12),
    );
}

#[cfg(test)]
mod tests {
    use super::*;

    fn small() -> Limits {
        Limits {
            envelope_level: 12,
            polygonal_level: 10,
            symmetry_level: 10,
            sandwich_level: 8,
            block_enumeration_level: 10,
            robbins: 40,
            binomial_points: 10,
            cauchy_levels: (5, 12),
            monotone_level: 10,
            quadruples: 2,
            identity_triples: 10,
            matrix_triples: 2,
            matrix_bits: 8,
            stern_max_level: 12,
            stern_psi_level: 6,
            ..Limits::default()
        }
        .with_index_limit(1 << 10)
    }

    #[test]
    fn table_matches_the_explicit_formula() {
        for (n, t) in TABLE.iter().enumerate() {
            assert_eq!(vdc::d_explicit(n as u64).to_string(), canonical(t), "n = {n}");
        }
    }

    fn canonical(t: &str) -> String {
        match t.split_once('/') {
            Some((p, q)) => format!("{p}/2^{}", q.parse::<u64>().unwrap().trailing_zeros()),
            None => t.to_string(),
        }
    }

    #[test]
    fn suites_pass_at_small_limits() {
        for s in [
            Suite::Discrepancy,
            Suite::Bounds,
            Suite::Reversal,
            Suite::Matrices,
            Suite::Stern,
        ] {
            let mut c = VerifyConfig::new(s);
            c.limits = small();
            let r = run(&c);
            let failed: Vec<_> = r.records.iter().filter(|x| !x.passed()).map(|x| &x.id).collect();
            assert!(r.passed(), "{s}: {failed:?}");
        }
    }

    #[test]
    fn mean_value_bound_is_tight_at_one() {
        let mut c = VerifyConfig::new(Suite::Fluctuation);
        c.limits = small();
        let r = run(&c);
        let failed: Vec<_> = r
            .records
            .iter()
            .filter(|x| !x.passed())
            .map(|x| x.id.as_str())
            .collect();
        assert_eq!(failed, ["fluctuation.mean_value"]);
    }

    #[test]
    fn injected_fault_is_caught() {
        let mut c = VerifyConfig::new(Suite::Discrepancy);
        c.limits = small();
        c.fault = Some(Fault::CorruptRecurrence);
        let r = run(&c);
        let bad = r
            .records
            .iter()
            .find(|x| x.id == "discrepancy.triple_agreement")
            .unwrap();
        assert!(!bad.passed());
        assert_eq!(bad.witness.as_ref().unwrap().n, Some(3));
    }

    #[test]
    fn report_is_deterministic() {
        let mut c = VerifyConfig::new(Suite::Matrices);
        c.limits = small();
        c.seed = 7;
        assert_eq!(run(&c).to_json(), run(&c).to_json());
    }

    #[test]
    fn binomial_points_are_valid() {
        for (k, ell, a, b) in binomial_points(3, 200) {
            assert!(a <= b && b < Rational::frac(37, 100));
            assert!(&a * &Rational::from(k) <= Rational::from(ell) && Rational::from(ell) <= &b * &Rational::from(k));
        }
    }
}
