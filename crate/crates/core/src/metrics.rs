//! Imbalanced-data metrics with the anomaly class as positive.

use serde::{Deserialize, Serialize};

use crate::data::Label;
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
pub struct Confusion {
    pub tp: usize,
    pub fp: usize,
    pub tn: usize,
    #[serde(rename = "fn")]
    pub fn_: usize,
}

impl Confusion {
    pub fn total(&self) -> usize {
        self.tp + self.fp + self.tn + self.fn_
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Prf1 {
    pub precision: f64,
    pub recall: f64,
    pub f1: f64,
    /// A zero denominator was replaced by 0.
    pub zero_division: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EvalReport {
    pub precision: f64,
    pub recall: f64,
    pub f1: f64,
    pub average_precision: f64,
    pub confusion: Confusion,
    pub zero_division: bool,
}

fn check_len(a: usize, b: usize) -> Result<()> {
    if a != b {
        return Err(Error::DimensionMismatch {
            expected: a,
            actual: b,
            context: "metric inputs",
        });
    }
    Ok(())
}

pub fn confusion(truth: &[Label], pred: &[Label]) -> Result<Confusion> {
    check_len(truth.len(), pred.len())?;
    let mut c = Confusion::default();
    for (t, p) in truth.iter().zip(pred) {
        match (t.is_anomaly(), p.is_anomaly()) {
            (true, true) => c.tp += 1,
            (false, true) => c.fp += 1,
            (false, false) => c.tn += 1,
            (true, false) => c.fn_ += 1,
        }
    }
    Ok(c)
}

fn ratio(num: usize, den: usize, flag: &mut bool) -> f64 {
    if den == 0 {
        *flag = true;
        0.0
    } else {
        num as f64 / den as f64
    }
}

pub fn prf1_from(c: &Confusion) -> Prf1 {
    let mut zero_division = false;
    let precision = ratio(c.tp, c.tp + c.fp, &mut zero_division);
    let recall = ratio(c.tp, c.tp + c.fn_, &mut zero_division);
    let f1 = if precision + recall == 0.0 {
        zero_division = true;
        0.0
    } else {
        2.0 * precision * recall / (precision + recall)
    };
    Prf1 {
        precision,
        recall,
        f1,
        zero_division,
    }
}

pub fn prf1(truth: &[Label], pred: &[Label]) -> Result<Prf1> {
    Ok(prf1_from(&confusion(truth, pred)?))
}

/// Step-wise area under the precision-recall curve,
/// `Σ_k (R_k - R_{k-1}) P_k`, over thresholds at each distinct score in
/// descending order. Higher scores mean more anomalous. Tied scores share one
/// threshold.
pub fn average_precision(truth: &[Label], anomaly_scores: &[f64]) -> Result<f64> {
    check_len(truth.len(), anomaly_scores.len())?;
    if anomaly_scores.iter().any(|s| !s.is_finite()) {
        return Err(Error::NonFinite("anomaly scores"));
    }
    let positives = truth.iter().filter(|l| l.is_anomaly()).count();
    if positives == 0 {
        return Err(Error::UndefinedMetric("average precision needs at least one anomaly"));
    }
    let mut order: Vec<usize> = (0..truth.len()).collect();
    order.sort_by(|&a, &b| anomaly_scores[b].total_cmp(&anomaly_scores[a]).then(a.cmp(&b)));
    let mut ap = 0.0;
    let mut tp = 0usize;
    let mut prev_recall = 0.0;
    for (rank, &idx) in order.iter().enumerate() {
        if truth[idx].is_anomaly() {
            tp += 1;
        }
        let last_of_tie = order
            .get(rank + 1)
            .is_none_or(|&next| anomaly_scores[next] != anomaly_scores[idx]);
        if last_of_tie {
            let recall = tp as f64 / positives as f64;
            let precision = tp as f64 / (rank + 1) as f64;
            ap += (recall - prev_recall) * precision;
            prev_recall = recall;
        }
    }
    Ok(ap)
}

/// Anomaly scores from SVM decision values: lower decision means more
/// anomalous.
pub fn anomaly_scores(decision: &[f64]) -> Vec<f64> {
    decision.iter().map(|d| -d).collect()
}

/// Thresholded metrics from the sign of `decision`, AP from its negation.
pub fn evaluate(truth: &[Label], decision: &[f64]) -> Result<EvalReport> {
    let pred = crate::ocsvm::predict(decision);
    let c = confusion(truth, &pred)?;
    let p = prf1_from(&c);
    Ok(EvalReport {
        precision: p.precision,
        recall: p.recall,
        f1: p.f1,
        average_precision: average_precision(truth, &anomaly_scores(decision))?,
        confusion: c,
        zero_division: p.zero_division,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use Label::{Anomaly as A, Normal as N};

    #[test]
    fn perfect_predictions() {
        let t = [A, N, A, N];
        let p = prf1(&t, &t).unwrap();
        assert_eq!((p.precision, p.recall, p.f1), (1.0, 1.0, 1.0));
        assert!(!p.zero_division);
    }

    #[test]
    fn hand_counted_fixture() {
        // TP = 3, FP = 1, FN = 3, TN = 2.
        let truth = [A, A, A, N, A, A, A, N, N];
        let pred = [A, A, A, A, N, N, N, N, N];
        let c = confusion(&truth, &pred).unwrap();
        assert_eq!(c, Confusion { tp: 3, fp: 1, tn: 2, fn_: 3 });
        let p = prf1_from(&c);
        assert!((p.precision - 0.75).abs() < 1e-15);
        assert!((p.recall - 0.5).abs() < 1e-15);
        assert!((p.f1 - 0.6).abs() < 1e-15);
    }

    #[test]
    fn equal_precision_recall() {
        // TP = 2, FP = 2, FN = 2.
        let truth = [A, A, N, N, A, A];
        let pred = [A, A, A, A, N, N];
        let p = prf1(&truth, &pred).unwrap();
        assert!((p.precision - 0.5).abs() < 1e-15 && (p.recall - 0.5).abs() < 1e-15);
        assert!((p.f1 - 0.5).abs() < 1e-15);
    }

    #[test]
    fn zero_denominators() {
        let p = prf1(&[N, N], &[N, N]).unwrap();
        assert_eq!((p.precision, p.recall, p.f1), (0.0, 0.0, 0.0));
        assert!(p.zero_division);
        assert!(prf1(&[N], &[N, A]).is_err());
    }

    #[test]
    fn ap_examples() {
        assert_eq!(average_precision(&[A, N, A, N], &[0.9, 0.8, 0.7, 0.1]).unwrap(), 0.5 + 0.5 * 2.0 / 3.0);
        assert_eq!(average_precision(&[N, A, A, N], &[0.1, 0.9, 0.8, 0.2]).unwrap(), 1.0);
        let truth = [A, N, N, N, A, N, N, N, N, N];
        assert!((average_precision(&truth, &[0.3; 10]).unwrap() - 0.2).abs() < 1e-15);
        assert!(matches!(average_precision(&[N, N], &[0.1, 0.2]), Err(Error::UndefinedMetric(_))));
    }

    #[test]
    fn evaluate_uses_negated_decision() {
        let truth = [A, N, N, A];
        let decision = [-1.0, 0.5, 0.2, -0.1];
        let r = evaluate(&truth, &decision).unwrap();
        assert_eq!(r.average_precision, 1.0);
        assert_eq!(r.f1, 1.0);
        assert_eq!(r.confusion.total(), 4);
    }
}
