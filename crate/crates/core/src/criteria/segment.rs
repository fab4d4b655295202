use serde::Serialize;

use crate::error::{Error, Result};
use crate::graph::{bridge_edges, unbranched_segments, UnbranchedSegment, WeightedGraph};

/// Largest admissible magnitude of the single negative link on an
/// unbranched segment.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SegmentBound {
    pub segment: UnbranchedSegment,
    /// Position of the negative link within `segment.links`.
    pub x: usize,
    pub weight: f64,
    /// `prod(w) / e_{d-2}(w)` over the other `d - 1` links.
    pub bound: f64,
    /// Bounds from the growing node sets `S_1, ..., S_{d-1}`; the last one
    /// equals `bound`.
    pub sequence: Vec<f64>,
}

impl SegmentBound {
    pub fn is_violated(&self) -> bool {
        -self.weight >= self.bound
    }

    pub fn is_strictly_violated(&self) -> bool {
        -self.weight > self.bound
    }
}

/// Elementary symmetric polynomial `e_k` of `w`.
pub fn elementary_symmetric(w: &[f64], k: usize) -> f64 {
    let mut e = vec![0.0; k + 1];
    e[0] = 1.0;
    for &v in w {
        for j in (1..=k.min(w.len())).rev() {
            e[j] += e[j - 1] * v;
        }
    }
    e[k]
}

fn ratio_bound(others: &[f64]) -> f64 {
    let product: f64 = others.iter().product();
    product / elementary_symmetric(others, others.len() - 1)
}

pub fn segment_bound(seg: &UnbranchedSegment, x: usize) -> Result<SegmentBound> {
    let d = seg.len();
    if d < 2 {
        return Err(Error::SegmentTooShort(d));
    }
    let negatives = seg.negative_positions();
    match negatives.len() {
        0 => return Err(Error::NoNegative),
        1 => {}
        k => return Err(Error::MultipleNegatives(k)),
    }
    if negatives[0] != x {
        return Err(Error::NotTheNegativeLink { index: x });
    }
    // walk from the node right of the negative link; flip if there is none
    let (work, x_work) = if x == d - 1 {
        (seg.reversed(), 0)
    } else {
        (seg.clone(), x)
    };
    let w = &work.weights;
    // interior nodes 1..=d-1; node k touches links k-1 and k
    let mut order: Vec<usize> = (x_work + 1..d).collect();
    order.extend((1..=x_work).rev());
    let mut sequence = Vec::with_capacity(d - 1);
    let mut lo = x_work + 1;
    let mut hi = x_work + 1;
    for &node in &order {
        lo = lo.min(node);
        hi = hi.max(node);
        let others: Vec<f64> = (lo - 1..=hi).filter(|&k| k != x_work).map(|k| w[k]).collect();
        sequence.push(ratio_bound(&others));
    }
    let others: Vec<f64> = (0..d).filter(|&k| k != x).map(|k| seg.weights[k]).collect();
    Ok(SegmentBound {
        segment: seg.clone(),
        x,
        weight: seg.weights[x],
        bound: ratio_bound(&others),
        sequence,
    })
}

/// Objections that follow from link weights on the mesoscale.
#[derive(Debug, Clone, Default, PartialEq, Serialize)]
pub struct MesoscaleReport {
    /// Edge indices of negative links that lie on no cycle.
    pub negative_bridges: Vec<usize>,
    /// Segments with two or more negative links.
    pub multiple_negatives: Vec<UnbranchedSegment>,
    /// Single negative links with `|w_x| >= B`.
    pub bound_violations: Vec<SegmentBound>,
    /// Every bound evaluated, violated or not.
    pub bounds: Vec<SegmentBound>,
}

impl MesoscaleReport {
    pub fn is_empty(&self) -> bool {
        self.negative_bridges.is_empty()
            && self.multiple_negatives.is_empty()
            && self.bound_violations.is_empty()
    }

    /// Objections that force a wrong-signed minor, not merely a zero one.
    pub fn has_strict_violation(&self) -> bool {
        !self.negative_bridges.is_empty()
            || !self.multiple_negatives.is_empty()
            || self.bound_violations.iter().any(SegmentBound::is_strictly_violated)
    }
}

pub fn mesoscale_report(g: &WeightedGraph) -> MesoscaleReport {
    let mut report = MesoscaleReport {
        negative_bridges: bridge_edges(g)
            .into_iter()
            .filter(|&k| g.edge(k).w < 0.0)
            .collect(),
        ..MesoscaleReport::default()
    };
    for seg in unbranched_segments(g) {
        let negatives = seg.negative_positions();
        match negatives.len() {
            0 => {}
            1 if seg.len() >= 2 => {
                let b = segment_bound(&seg, negatives[0]).expect("single negative link");
                if b.is_violated() {
                    report.bound_violations.push(b.clone());
                }
                report.bounds.push(b);
            }
            1 => {}
            _ => report.multiple_negatives.push(seg),
        }
    }
    report
}
