use serde::Serialize;

use crate::report::fixed6;

/// Precision, recall and F1 from exact counts.
///
/// A 0/0 ratio is reported as 0 and flagged, except when there is nothing
/// to find and nothing was predicted: that agreement scores 1 on every
/// metric (still flagged).
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct DetectionMetrics {
    pub tp: usize,
    pub fp: usize,
    #[serde(rename = "fn")]
    pub fn_: usize,
    #[serde(serialize_with = "fixed6")]
    pub precision: f64,
    #[serde(serialize_with = "fixed6")]
    pub recall: f64,
    #[serde(serialize_with = "fixed6")]
    pub f1: f64,
    pub precision_undefined: bool,
    pub recall_undefined: bool,
}

impl DetectionMetrics {
    pub fn from_counts(tp: usize, fp: usize, fn_: usize) -> Self {
        let precision_undefined = tp + fp == 0;
        let recall_undefined = tp + fn_ == 0;
        if precision_undefined && recall_undefined {
            return DetectionMetrics {
                tp,
                fp,
                fn_,
                precision: 1.0,
                recall: 1.0,
                f1: 1.0,
                precision_undefined,
                recall_undefined,
            };
        }
        let precision = ratio(tp, tp + fp);
        let recall = ratio(tp, tp + fn_);
        DetectionMetrics {
            tp,
            fp,
            fn_,
            precision,
            recall,
            f1: harmonic(precision, recall),
            precision_undefined,
            recall_undefined,
        }
    }
}

pub(crate) fn ratio(num: usize, den: usize) -> f64 {
    if den == 0 {
        0.0
    } else {
        num as f64 / den as f64
    }
}

pub(crate) fn harmonic(p: f64, r: f64) -> f64 {
    if p + r == 0.0 {
        0.0
    } else {
        2.0 * p * r / (p + r)
    }
}
