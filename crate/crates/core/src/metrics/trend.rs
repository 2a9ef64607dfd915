//! Descriptive checks on how the metrics vary across categories.

use num_rational::Ratio;
use serde::{Deserialize, Serialize};

use super::{CategoryKey, CategoryStats};
use crate::stats::{slope_through_origin, spearman};

/// Fewer semantic categories than this and the diagnostics are not computed.
pub const MIN_SEMANTIC_CATEGORIES: usize = 3;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct WcExtreme {
    pub category: CategoryKey,
    pub value: Ratio<u64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TrendDiagnostics {
    /// Semantic categories with D(C) >= 1.
    pub semantic_categories: usize,
    pub sufficient: bool,
    /// Lowest and highest WC(A) over every category with k > 0.
    pub wc_a_min: Option<WcExtreme>,
    pub wc_a_max: Option<WcExtreme>,
    /// Rank correlation between D(C) and f.
    pub spearman_dc_f: Option<f64>,
    /// c in f = c / D(C), least squares.
    pub inverse_fit_c: Option<f64>,
}

impl TrendDiagnostics {
    pub fn wc_a_spread(&self) -> Option<Ratio<u64>> {
        Some(self.wc_a_max?.value - self.wc_a_min?.value)
    }
}

pub fn trend_diagnostics(stats: &[CategoryStats]) -> TrendDiagnostics {
    let semantic: Vec<(f64, f64)> = stats
        .iter()
        .filter_map(|s| match s.category {
            CategoryKey::Semantic(d) if d >= 1 => Some((d as f64, s.f as f64)),
            _ => None,
        })
        .collect();
    let semantic_count = stats
        .iter()
        .filter(|s| matches!(s.category, CategoryKey::Semantic(_)))
        .count();
    let sufficient = semantic_count >= MIN_SEMANTIC_CATEGORIES;

    let mut wc: Vec<WcExtreme> = stats
        .iter()
        .filter(|s| s.k > 0)
        .map(|s| WcExtreme {
            category: s.category,
            value: Ratio::new(s.a, s.k),
        })
        .collect();
    // Stable sort keeps the table order among ties.
    wc.sort_by_key(|w| w.value);

    let (spearman_dc_f, inverse_fit_c) = if sufficient {
        let d: Vec<f64> = semantic.iter().map(|p| p.0).collect();
        let f: Vec<f64> = semantic.iter().map(|p| p.1).collect();
        let inv: Vec<f64> = d.iter().map(|x| 1.0 / x).collect();
        (spearman(&d, &f), slope_through_origin(&inv, &f))
    } else {
        (None, None)
    };

    TrendDiagnostics {
        semantic_categories: semantic.len(),
        sufficient,
        wc_a_min: wc.first().copied().filter(|_| sufficient),
        wc_a_max: wc.last().and_then(|top| wc.iter().find(|e| e.value == top.value)).copied().filter(|_| sufficient),
        spearman_dc_f,
        inverse_fit_c,
    }
}
