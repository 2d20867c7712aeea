//! Named margins and verdicts.

use alloc::string::{String, ToString};
use alloc::vec::Vec;

use crate::numerics::Tolerances;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Verdict {
    Satisfied,
    Violated,
    Borderline,
}

impl Verdict {
    pub fn from_margin(value: f64, tol: &Tolerances) -> Self {
        if value.abs() <= tol.margin_tol {
            Verdict::Borderline
        } else if value > tol.margin_tol {
            Verdict::Satisfied
        } else {
            Verdict::Violated
        }
    }

    pub fn as_str(self) -> &'static str {
        match self {
            Verdict::Satisfied => "satisfied",
            Verdict::Violated => "violated",
            Verdict::Borderline => "borderline",
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum MarginKind {
    /// Computed from a decomposition, up to round-off.
    Exact,
    /// Obtained by a search; may overestimate the true infimum.
    Estimate,
    /// The criterion holds trivially; the value is `+∞`.
    Vacuous,
}

impl MarginKind {
    pub fn as_str(self) -> &'static str {
        match self {
            MarginKind::Exact => "exact",
            MarginKind::Estimate => "estimate",
            MarginKind::Vacuous => "vacuous",
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct Margin {
    pub id: String,
    pub value: f64,
    pub kind: MarginKind,
    pub verdict: Verdict,
}

/// Criterion id → margin and verdict, plus auxiliary values and flags that
/// carry no verdict.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct MarginReport {
    pub entries: Vec<Margin>,
    pub values: Vec<(String, f64)>,
    pub flags: Vec<(String, bool)>,
}

impl MarginReport {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn push(&mut self, id: &str, value: f64, tol: &Tolerances) {
        self.entries.push(Margin {
            id: id.to_string(),
            value,
            kind: MarginKind::Exact,
            verdict: Verdict::from_margin(value, tol),
        });
    }

    pub fn push_estimate(&mut self, id: &str, value: f64, tol: &Tolerances) {
        self.entries.push(Margin {
            id: id.to_string(),
            value,
            kind: MarginKind::Estimate,
            verdict: Verdict::from_margin(value, tol),
        });
    }

    pub fn push_vacuous(&mut self, id: &str) {
        self.entries.push(Margin {
            id: id.to_string(),
            value: f64::INFINITY,
            kind: MarginKind::Vacuous,
            verdict: Verdict::Satisfied,
        });
    }

    pub fn value(&mut self, id: &str, v: f64) {
        self.values.push((id.to_string(), v));
    }

    pub fn flag(&mut self, id: &str, b: bool) {
        self.flags.push((id.to_string(), b));
    }

    pub fn get(&self, id: &str) -> Option<&Margin> {
        self.entries.iter().find(|m| m.id == id)
    }

    pub fn margin(&self, id: &str) -> Option<f64> {
        self.get(id).map(|m| m.value)
    }

    pub fn get_value(&self, id: &str) -> Option<f64> {
        self.values.iter().find(|(k, _)| k == id).map(|(_, v)| *v)
    }

    pub fn get_flag(&self, id: &str) -> Option<bool> {
        self.flags.iter().find(|(k, _)| k == id).map(|(_, v)| *v)
    }

    pub fn all_satisfied(&self) -> bool {
        self.entries.iter().all(|m| m.verdict == Verdict::Satisfied)
    }

    /// Appends every entry of `other`, prefixing ids with `prefix.`.
    pub fn merge(&mut self, prefix: &str, other: MarginReport) {
        let name = |id: String| {
            let mut s = String::from(prefix);
            s.push('.');
            s.push_str(&id);
            s
        };
        for mut m in other.entries {
            m.id = name(m.id);
            self.entries.push(m);
        }
        for (k, v) in other.values {
            self.values.push((name(k), v));
        }
        for (k, v) in other.flags {
            self.flags.push((name(k), v));
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn verdict_thresholds() {
        let t = Tolerances::default();
        assert_eq!(Verdict::from_margin(1e-3, &t), Verdict::Satisfied);
        assert_eq!(Verdict::from_margin(5e-9, &t), Verdict::Borderline);
        assert_eq!(Verdict::from_margin(-5e-9, &t), Verdict::Borderline);
        assert_eq!(Verdict::from_margin(-1e-3, &t), Verdict::Violated);
    }

    #[test]
    fn vacuous_is_satisfied() {
        let mut r = MarginReport::new();
        r.push_vacuous("x");
        assert!(r.all_satisfied());
        assert!(r.margin("x").unwrap().is_infinite());
    }
}
