//! Seeded verification suites and their JSON reports.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::filling::{monotonicity_harness, AREA_HARD_CAP};
use crate::freegroup::{t_map, Word};
use crate::natural_maps::{check_rho_simplicial, check_square, BasisEmbedding};
use crate::sampling::{random_adjacent_pair, random_vertex, rng_from_seed};
use crate::spine::Mode;

pub const SCHEMA_VERSION: u32 = 1;

/// Complex and loop size bounds used by the area suite.
pub const AREA_MAX_TRIANGLES: usize = 6;
pub const AREA_MAX_VERTICES: usize = 6;
pub const AREA_MAX_LOOP: usize = 6;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Suite {
    Square,
    Rho,
    Area,
    Growth,
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Parameters {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub m: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub n: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub i: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub budget: Option<usize>,
}

/// Outcome of one suite. Everything except the optional wall time is a function of the
/// parameters and seed, so reports from equal inputs are byte-identical.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct VerificationReport {
    pub schema_version: u32,
    pub suite: Suite,
    pub parameters: Parameters,
    pub samples: u64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
    pub failures: Vec<Value>,
    pub pass: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub details: Option<Value>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub wall_time_ms: Option<u64>,
}

impl VerificationReport {
    fn new(suite: Suite, parameters: Parameters, samples: u64, seed: Option<u64>, failures: Vec<Value>) -> Self {
        VerificationReport {
            schema_version: SCHEMA_VERSION,
            suite,
            parameters,
            samples,
            seed,
            pass: failures.is_empty(),
            failures,
            details: None,
            wall_time_ms: None,
        }
    }
}

/// `check_square` on `samples` random `L_m` vertices. Samples are drawn in order from the
/// seed before any checking, so the result does not depend on the thread count.
pub fn verify_square(m: usize, n: usize, samples: usize, seed: u64) -> Result<VerificationReport> {
    let emb = BasisEmbedding::new(m, n)?;
    let mut rng = rng_from_seed(seed);
    let vertices = (0..samples).map(|_| random_vertex(&mut rng, m, Mode::L)).collect::<Result<Vec<_>>>()?;
    let outcomes: Vec<Result<bool>> = vertices.par_iter().map(|v| check_square(v, emb)).collect();
    let mut failures = Vec::new();
    for (k, (v, ok)) in vertices.iter().zip(outcomes).enumerate() {
        match ok {
            Ok(true) => {}
            Ok(false) => failures.push(json!({ "index": k, "vertex": v.to_json() })),
            Err(e) => failures.push(json!({ "index": k, "vertex": v.to_json(), "error": e.to_string() })),
        }
    }
    let params = Parameters { m: Some(m), n: Some(n), ..Parameters::default() };
    Ok(VerificationReport::new(Suite::Square, params, samples as u64, Some(seed), failures))
}

/// `check_rho_simplicial` on `samples` random adjacent pairs in `K_n`.
pub fn verify_rho(m: usize, n: usize, samples: usize, seed: u64) -> Result<VerificationReport> {
    let emb = BasisEmbedding::new(m, n)?;
    let mut rng = rng_from_seed(seed);
    let pairs = (0..samples).map(|_| random_adjacent_pair(&mut rng, n, Mode::K)).collect::<Result<Vec<_>>>()?;
    let outcomes: Vec<Result<bool>> = pairs.par_iter().map(|(a, b)| check_rho_simplicial(a, b, emb)).collect();
    let mut failures = Vec::new();
    for (k, ((a, b), ok)) in pairs.iter().zip(outcomes).enumerate() {
        let mut record = json!({ "index": k, "first": a.to_json(), "second": b.to_json() });
        match ok {
            Ok(true) => continue,
            Ok(false) => {}
            Err(e) => record["error"] = json!(e.to_string()),
        }
        failures.push(record);
    }
    let params = Parameters { m: Some(m), n: Some(n), ..Parameters::default() };
    Ok(VerificationReport::new(Suite::Rho, params, samples as u64, Some(seed), failures))
}

/// The exhaustive area-monotonicity harness over small complexes.
pub fn verify_area(budget: usize) -> Result<VerificationReport> {
    if budget > AREA_HARD_CAP {
        return Err(Error::BudgetTooLarge { budget, cap: AREA_HARD_CAP });
    }
    let r = monotonicity_harness(budget, AREA_MAX_TRIANGLES, AREA_MAX_VERTICES, AREA_MAX_LOOP)?;
    let mut failures: Vec<Value> = r.violations.iter().map(|v| json!(v)).collect();
    if r.violation_count > r.violations.len() as u64 {
        failures.push(json!({ "unlisted_violations": r.violation_count - r.violations.len() as u64 }));
    }
    if r.length_violations > 0 {
        failures.push(json!({ "length_violations": r.length_violations }));
    }
    if r.upper_violations > 0 {
        failures.push(json!({ "upper_bound_violations": r.upper_violations }));
    }
    let params = Parameters { budget: Some(budget), ..Parameters::default() };
    let mut report = VerificationReport::new(Suite::Area, params, r.instances, None, failures);
    report.details = Some(json!(r));
    Ok(report)
}

/// `|T^i(a1)|` and `|T^i(a2)|` for `i = 0..=i_max`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct GrowthTable {
    pub p: Vec<u64>,
    pub q: Vec<u64>,
    /// Lengths up to this exponent come from reduced words; beyond it from letter counts,
    /// which is exact because every image of `T` is a positive word.
    pub words_up_to: usize,
}

/// Exponent up to which the growth suite builds the words themselves.
pub const GROWTH_WORDS_UP_TO: usize = 14;

pub fn growth_table(i_max: usize) -> GrowthTable {
    let t = t_map();
    let direct = i_max.min(GROWTH_WORDS_UP_TO);
    let mut words = [Word::generator(1), Word::generator(2)];
    let (mut p, mut q) = (vec![1u64], vec![1u64]);
    for _ in 0..direct {
        words = words.map(|w| t.apply(&w).expect("rank 3"));
        p.push(words[0].len() as u64);
        q.push(words[1].len() as u64);
    }
    // Letter counts of positive words: c(T(w)) = M c(w), M the abelianization of T.
    let count = |w: &Word| -> [u64; 3] {
        let mut c = [0u64; 3];
        for l in w.letters() {
            c[l.generator() - 1] += 1;
        }
        c
    };
    let m: Vec<[u64; 3]> = (1..=3).map(|k| count(t.image(k))).collect();
    let apply = |c: [u64; 3]| -> [u64; 3] {
        let mut out = [0u64; 3];
        for (k, &ck) in c.iter().enumerate() {
            for r in 0..3 {
                out[r] += ck * m[k][r];
            }
        }
        out
    };
    let mut counts = words.each_ref().map(count);
    for _ in direct..i_max {
        counts = counts.map(apply);
        p.push(counts[0].iter().sum());
        q.push(counts[1].iter().sum());
    }
    GrowthTable { p, q, words_up_to: direct }
}

/// Largest eigenvalue of a positive 2×2 matrix by power iteration.
pub fn power_iteration(a: [[f64; 2]; 2], iterations: usize) -> f64 {
    let mut v = [1.0, 1.0];
    let mut lambda = 0.0;
    for _ in 0..iterations {
        let w = [a[0][0] * v[0] + a[0][1] * v[1], a[1][0] * v[0] + a[1][1] * v[1]];
        let norm = w[0].hypot(w[1]);
        lambda = (w[0] * v[0] + w[1] * v[1]) / (v[0] * v[0] + v[1] * v[1]);
        v = [w[0] / norm, w[1] / norm];
    }
    lambda
}

/// Checks `p_{i+1} = 2 p_i + q_i` and `q_{i+1} = p_i + q_i` for `i < i_max`, and that
/// `p_{i_max} / p_{i_max - 1}` is within 1% of the leading eigenvalue of `((2,1),(1,1))`.
pub fn verify_growth(i_max: usize) -> Result<VerificationReport> {
    if i_max < 2 {
        return Err(Error::InvalidParameter("growth needs i >= 2".into()));
    }
    let g = growth_table(i_max);
    let mut failures = Vec::new();
    for i in 0..i_max {
        if g.p[i + 1] != 2 * g.p[i] + g.q[i] || g.q[i + 1] != g.p[i] + g.q[i] {
            failures.push(json!({ "i": i, "p": [g.p[i], g.p[i + 1]], "q": [g.q[i], g.q[i + 1]] }));
        }
    }
    let eigenvalue = power_iteration([[2.0, 1.0], [1.0, 1.0]], 200);
    let ratio = g.p[i_max] as f64 / g.p[i_max - 1] as f64;
    let relative_error = (ratio - eigenvalue).abs() / eigenvalue;
    if relative_error > 0.01 {
        failures.push(json!({ "ratio": ratio, "eigenvalue": eigenvalue }));
    }
    let params = Parameters { i: Some(i_max), ..Parameters::default() };
    let mut report = VerificationReport::new(Suite::Growth, params, i_max as u64, None, failures);
    report.details = Some(json!({
        "p": g.p,
        "q": g.q,
        "words_up_to": g.words_up_to,
        "ratio": ratio,
        "eigenvalue": eigenvalue,
        "relative_error": relative_error,
    }));
    Ok(report)
}
