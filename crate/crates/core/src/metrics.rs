//! Repair and read-balance metrics of a placed code.
//!
//! `cost(b)` is the number of helper blocks read to rebuild block `b`;
//! `cost_c(b)` is the part of that traffic crossing cluster gateways.
//!
//! | metric | definition                         |
//! |--------|------------------------------------|
//! | ADRC   | mean `cost` over data blocks       |
//! | CDRC   | mean `cost_c` over data blocks     |
//! | ARC    | mean `cost` over all blocks        |
//! | CARC   | mean `cost_c` over all blocks      |
//! | LBNR   | busiest cluster's data blocks over the mean, full-stripe read |

use std::io::Write;

use num_rational::Ratio;

use crate::code::CodeDefinition;
use crate::error::{Error, Result};
use crate::placement::{cross_cluster_cost, PlacementMap};
use crate::report::{ratio_f64, sig6};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MetricsReport {
    pub per_block_cost: Vec<usize>,
    pub per_block_cross_cost: Vec<usize>,
    pub adrc: Ratio<u64>,
    pub cdrc: Ratio<u64>,
    pub arc: Ratio<u64>,
    pub carc: Ratio<u64>,
    pub lbnr: Ratio<u64>,
    /// Recovery locality; equal to `arc`.
    pub r_bar: Ratio<u64>,
}

impl MetricsReport {
    /// `(name, value)` in the fixed CSV order.
    pub fn named(&self) -> [(&'static str, Ratio<u64>); 6] {
        [
            ("adrc", self.adrc),
            ("cdrc", self.cdrc),
            ("arc", self.arc),
            ("carc", self.carc),
            ("lbnr", self.lbnr),
            ("r_bar", self.r_bar),
        ]
    }
}

fn mean(v: &[usize]) -> Ratio<u64> {
    Ratio::new(v.iter().sum::<usize>() as u64, v.len().max(1) as u64)
}

pub fn compute_metrics(code: &CodeDefinition, map: &PlacementMap) -> Result<MetricsReport> {
    if map.n() != code.n() {
        return Err(Error::Domain(format!("placement covers {} blocks, code has {}", map.n(), code.n())));
    }
    let k = code.k();
    let cost: Vec<usize> = (0..code.n()).map(|b| code.repair_cost(b)).collect();
    let cross = (0..code.n()).map(|b| cross_cluster_cost(code, map, b)).collect::<Result<Vec<_>>>()?;
    let arc = mean(&cost);
    Ok(MetricsReport {
        adrc: mean(&cost[..k]),
        cdrc: mean(&cross[..k]),
        arc,
        carc: mean(&cross),
        lbnr: lbnr_of(map, code),
        r_bar: arc,
        per_block_cost: cost,
        per_block_cross_cost: cross,
    })
}

/// Busiest cluster's data-block count over the mean count, the mean taken
/// over clusters that hold at least one block of the stripe.
pub fn lbnr_of(map: &PlacementMap, code: &CodeDefinition) -> Ratio<u64> {
    let data = map.data_per_cluster(code.k());
    let clusters = map.clusters();
    let used: Vec<usize> = (0..map.num_clusters).filter(|&c| !clusters[c].is_empty()).map(|c| data[c]).collect();
    let max = used.iter().copied().max().unwrap_or(0) as u64;
    let total = used.iter().sum::<usize>() as u64;
    if total == 0 {
        return Ratio::from_integer(1);
    }
    Ratio::new(max * used.len() as u64, total)
}

pub const METRICS_CSV_HEADER: [&str; 5] = ["family", "scheme", "metric", "value", "exact"];

/// One CSV row per metric: `family,scheme,metric,value,exact`, where
/// `value` has six significant digits and `exact` is the reduced fraction.
pub fn write_metrics_csv<W: Write>(out: W, rows: &[(String, String, MetricsReport)]) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(METRICS_CSV_HEADER).map_err(csv_err)?;
    for (family, scheme, report) in rows {
        for (name, v) in report.named() {
            w.write_record([family.as_str(), scheme.as_str(), name, &sig6(ratio_f64(v)), &v.to_string()])
                .map_err(csv_err)?;
        }
    }
    w.flush()?;
    Ok(())
}

pub(crate) fn csv_err(e: csv::Error) -> Error {
    Error::Format(e.to_string())
}
