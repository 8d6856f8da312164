//! Markov reliability model and mean time to data loss.
//!
//! States count the alive nodes of a stripe, from `n` down to `n - f`;
//! one more failure reaches the absorbing data-loss state. From `i` alive
//! nodes a failure happens at rate `i * lambda`. The single-failure state
//! repairs at `mu = epsilon (N-1) B / (C S)`, where `C` is the repair
//! traffic in node-capacity units; deeper states repair at `1/T`.

use std::io::Write;

use num_rational::Ratio;

use crate::code::CodeDefinition;
use crate::error::{Error, Result};
use crate::metrics::{compute_metrics, csv_err};
use crate::placement::PlacementMap;
use crate::report::{ratio_f64, sig6};

pub const SECONDS_PER_YEAR: f64 = 365.25 * 86_400.0;

#[derive(Clone, Debug, PartialEq)]
pub struct MarkovParams {
    /// Nodes in the system.
    pub nodes: u64,
    /// Node capacity in bytes.
    pub capacity_bytes: f64,
    /// Per-node bandwidth in bits per second.
    pub bandwidth_bps: f64,
    /// Fraction of node bandwidth given to recovery.
    pub epsilon: f64,
    /// Weight of inner-cluster traffic relative to cross-cluster traffic.
    pub delta: Ratio<u64>,
    /// Detect-and-trigger time for multi-failure repair, seconds.
    pub detect_time: f64,
    /// Per-node failure rate, 1/s.
    pub lambda: f64,
    pub f: usize,
}

impl MarkovParams {
    /// 400 nodes of 16 TB, 1 Gb/s, epsilon 0.1, delta 0.1, 30 min trigger,
    /// four-year node lifetime.
    pub fn defaults(f: usize) -> MarkovParams {
        MarkovParams {
            nodes: 400,
            capacity_bytes: 16e12,
            bandwidth_bps: 1e9,
            epsilon: 0.1,
            delta: Ratio::new(1, 10),
            detect_time: 1800.0,
            lambda: 1.0 / (4.0 * SECONDS_PER_YEAR),
            f,
        }
    }

    pub fn validate(&self) -> Result<()> {
        let positive = [self.capacity_bytes, self.bandwidth_bps, self.epsilon, self.detect_time, self.lambda];
        if self.nodes < 2 || positive.iter().any(|&x| !(x > 0.0 && x.is_finite())) {
            return Err(Error::Parameter("Markov parameters must be positive and finite, with N >= 2".into()));
        }
        if self.delta > Ratio::from_integer(1) || self.epsilon > 1.0 {
            return Err(Error::Parameter("delta and epsilon must not exceed 1".into()));
        }
        if self.f < 1 {
            return Err(Error::Parameter("f must be at least 1".into()));
        }
        Ok(())
    }

    /// Repair rate of the single-failure state, 1/s.
    pub fn mu(&self, cost: &RecoveryCost) -> Result<f64> {
        let c = ratio_f64(cost.c);
        if c <= 0.0 {
            return Err(Error::Model("recovery traffic is zero; repair rate is unbounded".into()));
        }
        let recovery_bytes_per_s = self.epsilon * (self.nodes - 1) as f64 * self.bandwidth_bps / 8.0;
        Ok(recovery_bytes_per_s / (c * self.capacity_bytes))
    }
}

/// Parses a plain decimal such as `0.1` into an exact fraction.
pub fn decimal_ratio(s: &str) -> Result<Ratio<u64>> {
    let bad = || Error::Parameter(format!("not a non-negative decimal: {s:?}"));
    let (int, frac) = s.trim().split_once('.').unwrap_or((s.trim(), ""));
    if int.is_empty() && frac.is_empty() || frac.len() > 18 {
        return Err(bad());
    }
    let whole: u64 = if int.is_empty() { 0 } else { int.parse().map_err(|_| bad())? };
    let num: u64 = if frac.is_empty() { 0 } else { frac.parse().map_err(|_| bad())? };
    let den = 10u64.pow(frac.len() as u32);
    Ok(Ratio::from_integer(whole) + Ratio::new(num, den))
}

/// Mean per-block repair traffic in blocks.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RecoveryCost {
    /// Cross-cluster blocks.
    pub c1: Ratio<u64>,
    /// Inner-cluster blocks.
    pub c2: Ratio<u64>,
    /// `c1 + delta * c2`.
    pub c: Ratio<u64>,
}

pub fn recovery_cost(code: &CodeDefinition, map: &PlacementMap, delta: Ratio<u64>) -> Result<RecoveryCost> {
    let m = compute_metrics(code, map)?;
    let c1 = m.carc;
    let c2 = m.arc - m.carc;
    Ok(RecoveryCost { c1, c2, c: c1 + delta * c2 })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum TransitionKind {
    Failure,
    /// Single-failure repair at `mu`.
    Repair,
    /// Multi-failure repair at `1/T`.
    MultiRepair,
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Transition {
    /// Alive nodes before.
    pub from: usize,
    /// Alive nodes after.
    pub to: usize,
    pub rate: f64,
    pub kind: TransitionKind,
}

#[derive(Clone, Debug, PartialEq)]
pub struct MarkovChain {
    pub n: usize,
    pub f: usize,
    pub transitions: Vec<Transition>,
}

impl MarkovChain {
    /// Live states, from `n` down to `n - f`.
    pub fn states(&self) -> Vec<usize> {
        (self.n - self.f..=self.n).rev().collect()
    }

    pub fn absorbing(&self) -> usize {
        self.n - self.f - 1
    }

    pub fn count(&self, kind: TransitionKind) -> usize {
        self.transitions.iter().filter(|t| t.kind == kind).count()
    }

    /// Same chain with every rate multiplied by `factor`.
    pub fn scaled(&self, factor: f64) -> MarkovChain {
        let mut c = self.clone();
        for t in &mut c.transitions {
            t.rate *= factor;
        }
        c
    }
}

pub fn build_chain(params: &MarkovParams, cost: &RecoveryCost, n: usize) -> Result<MarkovChain> {
    params.validate()?;
    let f = params.f;
    if f >= n {
        return Err(Error::Parameter(format!("f = {f} must be below n = {n}")));
    }
    let mu = params.mu(cost)?;
    let mu_multi = 1.0 / params.detect_time;
    let mut transitions = Vec::new();
    for alive in (n - f..=n).rev() {
        transitions.push(Transition {
            from: alive,
            to: alive - 1,
            rate: alive as f64 * params.lambda,
            kind: TransitionKind::Failure,
        });
    }
    for alive in n - f..n {
        let (rate, kind) =
            if alive == n - 1 { (mu, TransitionKind::Repair) } else { (mu_multi, TransitionKind::MultiRepair) };
        transitions.push(Transition { from: alive, to: alive + 1, rate, kind });
    }
    Ok(MarkovChain { n, f, transitions })
}

/// Expected time, in years, from all nodes alive to data loss.
///
/// Solves the first-passage equations `out_i E_i = 1 + sum_j q_ij E_j` by
/// eliminating live states from the deepest one upward. Each elimination
/// folds the removed state's rates into its predecessors and recomputes
/// their outflow as a sum of rates rather than by subtraction, which keeps
/// the solve accurate when repairs outpace failures by many orders of
/// magnitude.
pub fn mttdl_exact(chain: &MarkovChain) -> Result<f64> {
    let states = chain.states();
    let m = states.len();
    let index = |alive: usize| states.iter().position(|&s| s == alive);
    // q[i][j]: rate between live states; exit[i]: rate into data loss;
    // reward[i]: expected time accrued per visit, scaled by outflow
    let mut q = vec![vec![0.0f64; m]; m];
    let mut exit = vec![0.0f64; m];
    let mut reward = vec![1.0f64; m];
    for t in &chain.transitions {
        if !(t.rate >= 0.0 && t.rate.is_finite()) {
            return Err(Error::Model(format!("bad rate {} on {} -> {}", t.rate, t.from, t.to)));
        }
        let i = index(t.from).ok_or_else(|| Error::Model(format!("transition from unknown state {}", t.from)))?;
        match index(t.to) {
            Some(j) if j != i => q[i][j] += t.rate,
            Some(_) => {}
            None => exit[i] += t.rate,
        }
    }
    let outflow = |q: &[Vec<f64>], exit: &[f64], i: usize, alive: usize| -> f64 {
        (0..alive).filter(|&j| j != i).map(|j| q[i][j]).sum::<f64>() + exit[i]
    };
    for p in (1..m).rev() {
        let out_p = outflow(&q, &exit, p, p + 1);
        if !(out_p > 0.0) {
            return Err(Error::Model(format!("state {} has no way out", states[p])));
        }
        for i in 0..p {
            let w = q[i][p] / out_p;
            if w == 0.0 {
                continue;
            }
            reward[i] += w * reward[p];
            exit[i] += w * exit[p];
            for j in 0..p {
                if j != i {
                    q[i][j] += w * q[p][j];
                }
            }
            q[i][p] = 0.0;
        }
    }
    if !(exit[0] > 0.0) {
        return Err(Error::Model("data loss is unreachable from the all-alive state".into()));
    }
    let seconds = reward[0] / exit[0];
    if !(seconds > 0.0 && seconds.is_finite()) {
        return Err(Error::Model("first-passage time is not positive and finite".into()));
    }
    Ok(seconds / SECONDS_PER_YEAR)
}

/// Product of all repair rates over the product of all failure rates, in years.
pub fn mttdl_product(chain: &MarkovChain) -> f64 {
    // accumulate in log space; the raw products overflow for long chains
    let log_sum = |kinds: &[TransitionKind]| -> f64 {
        chain.transitions.iter().filter(|t| kinds.contains(&t.kind)).map(|t| t.rate.ln()).sum()
    };
    let up = log_sum(&[TransitionKind::Repair, TransitionKind::MultiRepair]);
    let down = log_sum(&[TransitionKind::Failure]);
    (up - down).exp() / SECONDS_PER_YEAR
}

#[derive(Clone, Debug, PartialEq)]
pub struct MttdlResult {
    pub cost: RecoveryCost,
    /// Years.
    pub exact: f64,
    /// Years.
    pub product: f64,
    pub chain: MarkovChain,
}

/// Full pipeline for one placed code; `params.f` is taken from the code.
pub fn mttdl(code: &CodeDefinition, map: &PlacementMap, params: &MarkovParams) -> Result<MttdlResult> {
    let params = MarkovParams { f: code.spec.f, ..params.clone() };
    let cost = recovery_cost(code, map, params.delta)?;
    let chain = build_chain(&params, &cost, code.n())?;
    Ok(MttdlResult { exact: mttdl_exact(&chain)?, product: mttdl_product(&chain), cost, chain })
}

pub const MTTDL_CSV_HEADER: [&str; 7] = ["scheme", "family", "c1", "c2", "c", "mttdl_exact", "mttdl_product"];

pub fn write_mttdl_csv<W: Write>(out: W, rows: &[(String, String, MttdlResult)]) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(MTTDL_CSV_HEADER).map_err(csv_err)?;
    for (scheme, family, r) in rows {
        w.write_record([
            scheme.clone(),
            family.clone(),
            sig6(ratio_f64(r.cost.c1)),
            sig6(ratio_f64(r.cost.c2)),
            sig6(ratio_f64(r.cost.c)),
            sig6(r.exact),
            sig6(r.product),
        ])
        .map_err(csv_err)?;
    }
    w.flush()?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::code::build_unilrc;
    use crate::placement::place_default;
    use crate::presets::{build, Scheme};
    use crate::Family;

    /// Birth-death recursion: expected time to move from `i` failures to
    /// `i + 1`, summed over the live states.
    fn birth_death_oracle(chain: &MarkovChain) -> f64 {
        let mut total = 0.0;
        let mut prev = 0.0;
        for (i, alive) in chain.states().into_iter().enumerate() {
            let fail = chain.transitions.iter().find(|t| t.from == alive && t.to + 1 == alive).unwrap().rate;
            let repair =
                chain.transitions.iter().find(|t| t.from == alive && t.to == alive + 1).map_or(0.0, |t| t.rate);
            let step = if i == 0 { 1.0 / fail } else { (1.0 + repair * prev) / fail };
            total += step;
            prev = step;
        }
        total / SECONDS_PER_YEAR
    }

    fn unilrc42() -> MttdlResult {
        let c = build_unilrc(1, 6).unwrap();
        mttdl(&c, &place_default(&c).unwrap(), &MarkovParams::defaults(0)).unwrap()
    }

    #[test]
    fn unilrc_recovery_traffic() {
        let r = unilrc42();
        assert_eq!(r.cost.c, Ratio::new(3, 5));
        assert_eq!(r.cost.c1, Ratio::from_integer(0));
        let c = build_unilrc(1, 6).unwrap();
        let only_cross = recovery_cost(&c, &place_default(&c).unwrap(), Ratio::from_integer(0)).unwrap();
        assert_eq!(only_cross.c, only_cross.c1);
    }

    #[test]
    fn chain_shape() {
        let r = unilrc42();
        assert_eq!(r.chain.states(), (35..=42).rev().collect::<Vec<_>>());
        assert_eq!(r.chain.count(TransitionKind::Failure), 8);
        assert_eq!(r.chain.count(TransitionKind::Repair), 1);
        assert_eq!(r.chain.count(TransitionKind::MultiRepair), 6);
        assert_eq!(r.chain.absorbing(), 34);
    }

    #[test]
    fn mu_units() {
        let p = MarkovParams::defaults(7);
        let cost = RecoveryCost { c1: Ratio::from_integer(0), c2: Ratio::from_integer(6), c: Ratio::new(3, 5) };
        // 0.6 * 16 TB moved at 10% of 399 nodes' 125 MB/s
        let seconds = 0.6 * 16e12 / (0.1 * 399.0 * 125e6);
        assert!((1.0 / p.mu(&cost).unwrap() - seconds).abs() < 1e-6 * seconds);
        assert!((seconds - 1924.812).abs() < 1e-3);
    }

    #[test]
    fn exact_matches_closed_forms() {
        let single = MarkovChain {
            n: 1,
            f: 0,
            transitions: vec![Transition { from: 1, to: 0, rate: 2.0, kind: TransitionKind::Failure }],
        };
        assert!((mttdl_exact(&single).unwrap() * SECONDS_PER_YEAR - 0.5).abs() < 1e-12);

        let (l1, l2, mu) = (3.0, 2.0, 50.0);
        let two = MarkovChain {
            n: 2,
            f: 1,
            transitions: vec![
                Transition { from: 2, to: 1, rate: l1, kind: TransitionKind::Failure },
                Transition { from: 1, to: 0, rate: l2, kind: TransitionKind::Failure },
                Transition { from: 1, to: 2, rate: mu, kind: TransitionKind::Repair },
            ],
        };
        let want = (l1 + l2 + mu) / (l1 * l2);
        assert!((mttdl_exact(&two).unwrap() * SECONDS_PER_YEAR - want).abs() < 1e-9 * want);
        assert!((mttdl_product(&two) * SECONDS_PER_YEAR - mu / (l1 * l2)).abs() < 1e-9);
    }

    #[test]
    fn exact_matches_birth_death_recursion() {
        for s in Scheme::ALL {
            for fam in Family::ALL {
                let c = build(fam, s).unwrap();
                let r = mttdl(&c, &place_default(&c).unwrap(), &MarkovParams::defaults(0)).unwrap();
                let oracle = birth_death_oracle(&r.chain);
                assert!((r.exact - oracle).abs() <= 1e-9 * oracle, "{fam} {s}: {} vs {oracle}", r.exact);
                assert!((r.product - r.exact).abs() <= 0.1 * r.exact, "{fam} {s}");
            }
        }
    }

    #[test]
    fn ordering_under_defaults() {
        for s in Scheme::ALL {
            let get = |fam| {
                let c = build(fam, s).unwrap();
                mttdl(&c, &place_default(&c).unwrap(), &MarkovParams::defaults(0)).unwrap().exact
            };
            let (a, o, u, uni) = (get(Family::Alrc), get(Family::Olrc), get(Family::Ulrc), get(Family::UniLrc));
            assert!(o > 1e3 * uni && uni > u && u > a, "{s}: {o} {uni} {u} {a}");
        }
    }

    #[test]
    fn monotonicity_and_scaling() {
        let base = unilrc42().chain;
        let e = mttdl_exact(&base).unwrap();
        let scaled = mttdl_exact(&base.scaled(3.0)).unwrap();
        assert!((scaled * 3.0 - e).abs() < 1e-9 * e);
        let bump = |kind: TransitionKind, factor: f64| {
            let mut c = base.clone();
            for t in c.transitions.iter_mut().filter(|t| t.kind == kind) {
                t.rate *= factor;
            }
            mttdl_exact(&c).unwrap()
        };
        assert!(bump(TransitionKind::Failure, 1.1) < e);
        assert!(bump(TransitionKind::Repair, 1.1) > e);
        assert!(bump(TransitionKind::MultiRepair, 1.1) > e);

        let c = build_unilrc(1, 6).unwrap();
        let map = place_default(&c).unwrap();
        let p = MarkovParams { f: 7, ..MarkovParams::defaults(7) };
        let mut last = f64::INFINITY;
        for d in [1u64, 2, 5, 10] {
            let cost = recovery_cost(&c, &map, Ratio::new(d, 10)).unwrap();
            let chain = build_chain(&p, &cost, 42).unwrap();
            let v = mttdl_product(&chain);
            assert!(v < last);
            last = v;
        }
    }

    #[test]
    fn f1_is_raid_formula() {
        let p = MarkovParams::defaults(1);
        let cost = RecoveryCost { c1: Ratio::from_integer(1), c2: Ratio::from_integer(0), c: Ratio::from_integer(1) };
        let chain = build_chain(&p, &cost, 10).unwrap();
        assert_eq!(chain.states(), vec![10, 9]);
        assert_eq!(chain.count(TransitionKind::Repair), 1);
        let mu = p.mu(&cost).unwrap();
        let want = mu / (10.0 * p.lambda * 9.0 * p.lambda) / SECONDS_PER_YEAR;
        assert!((mttdl_product(&chain) - want).abs() < 1e-9 * want);
    }

    #[test]
    fn parameter_validation() {
        assert!(MarkovParams { lambda: 0.0, ..MarkovParams::defaults(2) }.validate().is_err());
        assert!(MarkovParams { delta: Ratio::new(3, 2), ..MarkovParams::defaults(2) }.validate().is_err());
        assert!(MarkovParams::defaults(0).validate().is_err());
        assert_eq!(decimal_ratio("0.1").unwrap(), Ratio::new(1, 10));
        assert_eq!(decimal_ratio("2").unwrap(), Ratio::from_integer(2));
        assert_eq!(decimal_ratio(".25").unwrap(), Ratio::new(1, 4));
        assert!(decimal_ratio("-1").is_err());
        assert!(decimal_ratio("x").is_err());
    }

    #[test]
    fn csv_layout() {
        let mut buf = Vec::new();
        write_mttdl_csv(&mut buf, &[("30-of-42".into(), "UniLRC".into(), unilrc42())]).unwrap();
        let text = String::from_utf8(buf).unwrap();
        let mut lines = text.lines();
        assert_eq!(lines.next().unwrap(), "scheme,family,c1,c2,c,mttdl_exact,mttdl_product");
        assert!(lines.next().unwrap().starts_with("30-of-42,UniLRC,0,6,0.6,"));
    }
}
