//! Named verification suites.
//!
//! Each suite draws seeded cases, checks one identity on every case and
//! returns a [`Report`]. Reports depend only on the suite name, the resolved
//! parameters and the seed; `elapsed_ms` is the single exception.

mod algebra;
mod transfer;

use std::time::Instant;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::field::{field_of_order, is_prime, FiniteField, DEFAULT_ORDER_BOUND};
use crate::sample::{self, SampleRng};
use crate::transfers::TransferMode;

/// User-facing knobs; `None` picks the suite default.
#[derive(Clone, Debug, Default)]
pub struct SuiteParams {
    pub q: Option<u64>,
    pub max_degree: Option<u32>,
    pub samples: Option<u32>,
    pub seed: u64,
    pub mode: Option<TransferMode>,
}

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Serialize)]
pub struct Failure {
    pub case: String,
    pub expected: String,
    pub got: String,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Report {
    pub suite: String,
    pub params: serde_json::Value,
    pub seed: u64,
    pub cases_run: u64,
    pub failures: Vec<Failure>,
    pub elapsed_ms: u64,
    pub pass: bool,
}

struct Defaults {
    qs: &'static [u64],
    max_degree: u32,
    degree_cap: u32,
    samples: u32,
    mode: Option<TransferMode>,
    prime_only: bool,
}

pub struct SuiteInfo {
    pub name: &'static str,
    /// The statement the suite verifies.
    pub statement: &'static str,
    defaults: Defaults,
    run: fn(&Config, &mut Ctx) -> Result<()>,
}

const fn d(qs: &'static [u64], max_degree: u32, degree_cap: u32, samples: u32, mode: Option<TransferMode>, prime_only: bool) -> Defaults {
    Defaults { qs, max_degree, degree_cap, samples, mode, prime_only }
}

use TransferMode::{Bt, Geo};

static REGISTRY: [SuiteInfo; 14] = [
    SuiteInfo {
        name: "homotopy-ses",
        statement: "0 -> K^MW_n(E) -> K^MW_n(E(t)) -> sum_x K^MW_{n-1}(kappa(x)) -> 0 is split exact: specialization inverts restriction and unramified classes are constant",
        defaults: d(&[3, 5], 2, 2, 100, None, false),
        run: algebra::homotopy_ses,
    },
    SuiteInfo {
        name: "characterization",
        statement: "sum_x Tr_x d_x(gamma) + d_inf(gamma) = 0 for every gamma in K^MW_n(E(t))",
        defaults: d(&[3, 5, 7], 3, 4, 100, None, true),
        run: algebra::characterization,
    },
    SuiteInfo {
        name: "generation",
        statement: "K^MW(E(x)) is generated over K^MW(E) by symbols [p_1(x),...,p_n(x)] with deg p_1 < ... < deg p_n < [E(x):E]",
        defaults: d(&[3, 5], 4, 6, 200, None, false),
        run: algebra::generation,
    },
    SuiteInfo {
        name: "prime-generation",
        statement: "for [F:E] prime, K^MW(F) is generated over K^MW(E) by symbols in elements of F^x",
        defaults: d(&[3, 5], 5, 7, 200, None, false),
        run: algebra::prime_generation,
    },
    SuiteInfo {
        name: "projection",
        statement: "Tr(res(alpha) * beta) = alpha * Tr(beta)",
        defaults: d(&[3, 5], 3, 4, 20, None, true),
        run: transfer::projection,
    },
    SuiteInfo {
        name: "lam-formulas",
        statement: "Tr(1) = n_eps for odd n, and Tr(<x>) = (n-1)_eps + <-N(x)> for even n, over finite fields and the rationals",
        defaults: d(&[3, 5, 7], 5, 5, 4, Some(Bt), true),
        run: transfer::lam_formulas,
    },
    SuiteInfo {
        name: "nilpotence",
        statement: "alpha = <u> - 1 and Tr_{F/E}(1) - [F:E] are nilpotent in GW(E); alpha^n = (-2)^(n-1) alpha and alpha^3 = 0",
        defaults: d(&[3, 5, 7, 9, 27], 3, 4, 1, None, false),
        run: algebra::nilpotence,
    },
    SuiteInfo {
        name: "coprime-kill",
        statement: "an element of K^MW_n(E) restricting to zero in extensions of coprime degrees 2 and 3 is zero",
        defaults: d(&[3, 5], 3, 3, 1, None, false),
        run: algebra::coprime_kill,
    },
    SuiteInfo {
        name: "r3a",
        statement: "d_w(res alpha) = e_eps * res(d_v alpha) for t = s^e, ramification index e",
        defaults: d(&[3, 5], 4, 6, 100, None, true),
        run: algebra::r3a,
    },
    SuiteInfo {
        name: "r1c-weak",
        statement: "res_{L/E} Tr_x = sum_{y over x} Tr_y res for a closed point x of A^1_E and a finite extension L/E",
        defaults: d(&[3], 3, 4, 20, Some(Geo), true),
        run: transfer::r1c_weak,
    },
    SuiteInfo {
        name: "r1c-strong",
        statement: "res_{L/E} Tr_{F/E} = sum over the components of F (x)_E L of Tr res",
        defaults: d(&[3], 4, 4, 30, Some(Geo), true),
        run: transfer::r1c_strong,
    },
    SuiteInfo {
        name: "prime-degree-independence",
        statement: "for [F:E] prime, Tr_{x/E} does not depend on the generator x",
        defaults: d(&[3, 5], 5, 5, 20, Some(Geo), true),
        run: transfer::prime_degree_independence,
    },
    SuiteInfo {
        name: "composite-square",
        statement: "Tr_{L/E} Tr_{a/L} = Tr_{a/E} Tr_{L(a)/E(a)} for L/E normal of prime degree and E(a)/E monogenic",
        defaults: d(&[3, 5], 6, 6, 10, Some(Geo), true),
        run: transfer::composite_square,
    },
    SuiteInfo {
        name: "kato-morel",
        statement: "tower transfers Tr_{x_1,...,x_r/E} do not depend on the generating system",
        defaults: d(&[3, 5], 6, 6, 50, Some(Geo), true),
        run: transfer::kato_morel,
    },
];

pub fn registry() -> &'static [SuiteInfo] {
    &REGISTRY
}

pub fn find(name: &str) -> Result<&'static SuiteInfo> {
    REGISTRY.iter().find(|s| s.name == name).ok_or_else(|| Error::UnknownSuite(name.to_string()))
}

/// Resolved parameters handed to a suite body.
pub(crate) struct Config {
    pub qs: Vec<u64>,
    pub max_degree: u32,
    pub samples: u32,
    pub seed: u64,
    /// Modes to run; a suite without a mode default runs both.
    pub modes: Vec<TransferMode>,
}

impl Config {
    /// A generator stream specific to `salt`, so that cases for one field do
    /// not shift when another field is added or removed.
    pub fn rng(&self, salt: u64) -> SampleRng {
        sample::rng(self.seed ^ salt.wrapping_mul(0x9e37_79b9_7f4a_7c15))
    }

    pub fn field(&self, q: u64) -> Result<FiniteField> {
        field_of_order(q)
    }
}

fn mode_name(m: TransferMode) -> &'static str {
    match m {
        Bt => "bt",
        Geo => "geo",
    }
}

impl SuiteInfo {
    fn resolve(&self, p: &SuiteParams) -> Result<Config> {
        let dft = &self.defaults;
        let qs = match p.q {
            Some(q) => vec![q],
            None => dft.qs.to_vec(),
        };
        for &q in &qs {
            let f = field_of_order(q)?;
            if dft.prime_only && f.degree() != 1 {
                return Err(Error::InvalidParam(format!("suite {} needs a prime q, got {q}", self.name)));
            }
        }
        let max_degree = p.max_degree.unwrap_or(dft.max_degree);
        if max_degree == 0 || max_degree > dft.degree_cap {
            return Err(Error::InvalidParam(format!("--max-degree must lie in 1..={} for {}", dft.degree_cap, self.name)));
        }
        let samples = p.samples.unwrap_or(dft.samples);
        if samples == 0 || samples > 10_000 {
            return Err(Error::InvalidParam("--samples must lie in 1..=10000".into()));
        }
        let modes = match (p.mode, dft.mode) {
            (Some(m), _) => vec![m],
            (None, Some(m)) => vec![m],
            (None, None) => vec![Bt, Geo],
        };
        Ok(Config { qs, max_degree, samples, seed: p.seed, modes })
    }
}

/// Failures and case counts accumulated while a suite runs.
#[derive(Default)]
pub(crate) struct Ctx {
    cases: u64,
    failures: Vec<Failure>,
}

impl Ctx {
    pub fn case(&mut self) {
        self.cases += 1;
    }

    pub fn check(&mut self, ok: bool, fail: impl FnOnce() -> Failure) {
        if !ok {
            self.failures.push(fail());
        }
    }

    /// Records an evaluation error as a failure of the case.
    pub fn error(&mut self, case: String, expected: String, e: Error) {
        self.failures.push(Failure { case, expected, got: format!("error: {e}") });
    }
}

pub fn run_suite(name: &str, params: &SuiteParams) -> Result<Report> {
    let info = find(name)?;
    let cfg = info.resolve(params)?;
    let start = Instant::now();
    let mut ctx = Ctx::default();
    (info.run)(&cfg, &mut ctx)?;
    let mut failures = ctx.failures;
    failures.sort();
    failures.dedup();
    let echo = serde_json::json!({
        "q": cfg.qs,
        "max_degree": cfg.max_degree,
        "samples": cfg.samples,
        "mode": cfg.modes.iter().map(|&m| mode_name(m)).collect::<Vec<_>>(),
    });
    Ok(Report {
        suite: info.name.to_string(),
        params: echo,
        seed: cfg.seed,
        cases_run: ctx.cases,
        pass: failures.is_empty(),
        failures,
        elapsed_ms: start.elapsed().as_millis() as u64,
    })
}

/// Largest field order the suites will build.
pub(crate) fn fits(q: u64, d: u32) -> bool {
    q.checked_pow(d).is_some_and(|n| n <= DEFAULT_ORDER_BOUND)
}

pub(crate) fn prime_degrees(max: u32) -> impl Iterator<Item = u32> {
    (2..=max).filter(|&d| is_prime(d as u64))
}

#[cfg(test)]
mod tests;
