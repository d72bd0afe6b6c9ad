//! Self-contained pass/fail records.

use std::collections::BTreeMap;
use std::fmt;

/// How a measured value is compared with its threshold.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Relation {
    AtMost,
    AtLeast,
    Equal,
}

impl Relation {
    pub fn holds(self, value: f64, threshold: f64) -> bool {
        match self {
            Relation::AtMost => value <= threshold,
            Relation::AtLeast => value >= threshold,
            Relation::Equal => value == threshold,
        }
    }

    pub fn as_str(self) -> &'static str {
        match self {
            Relation::AtMost => "<=",
            Relation::AtLeast => ">=",
            Relation::Equal => "==",
        }
    }
}

impl std::str::FromStr for Relation {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "<=" => Ok(Relation::AtMost),
            ">=" => Ok(Relation::AtLeast),
            "==" => Ok(Relation::Equal),
            other => Err(format!("unknown relation {other:?}")),
        }
    }
}

impl fmt::Display for Relation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct Measurement {
    pub label: String,
    pub j: Option<usize>,
    pub value: f64,
    pub threshold: f64,
    pub relation: Relation,
}

impl Measurement {
    pub fn passed(&self) -> bool {
        self.relation.holds(self.value, self.threshold)
    }
}

/// A named check with its measurements; the verdict is derived, never stored.
#[derive(Clone, Debug, PartialEq, Default)]
pub struct CheckReport {
    pub check: String,
    pub anchor: String,
    pub multi_index: Option<String>,
    pub measurements: Vec<Measurement>,
    pub metadata: BTreeMap<String, String>,
    pub notes: Vec<String>,
}

impl CheckReport {
    pub fn new(check: &str, anchor: &str) -> Self {
        let mut metadata = BTreeMap::new();
        metadata.insert("precision".into(), crate::numkernel::precision().to_string());
        CheckReport {
            check: check.into(),
            anchor: anchor.into(),
            metadata,
            ..Default::default()
        }
    }

    pub fn with_index(mut self, n: impl fmt::Display) -> Self {
        self.multi_index = Some(n.to_string());
        self
    }

    pub fn push(&mut self, label: impl Into<String>, j: Option<usize>, value: f64, threshold: f64, relation: Relation) {
        self.measurements.push(Measurement {
            label: label.into(),
            j,
            value,
            threshold,
            relation,
        });
    }

    pub fn at_most(&mut self, label: impl Into<String>, j: Option<usize>, value: f64, threshold: f64) {
        self.push(label, j, value, threshold, Relation::AtMost);
    }

    pub fn at_least(&mut self, label: impl Into<String>, j: Option<usize>, value: f64, threshold: f64) {
        self.push(label, j, value, threshold, Relation::AtLeast);
    }

    pub fn equal(&mut self, label: impl Into<String>, j: Option<usize>, value: f64, threshold: f64) {
        self.push(label, j, value, threshold, Relation::Equal);
    }

    pub fn meta(&mut self, key: &str, value: impl ToString) {
        self.metadata.insert(key.into(), value.to_string());
    }

    pub fn note(&mut self, text: impl Into<String>) {
        self.notes.push(text.into());
    }

    pub fn passed(&self) -> bool {
        self.measurements.iter().all(Measurement::passed)
    }

    /// Measurements that fail their relation.
    pub fn failures(&self) -> Vec<&Measurement> {
        self.measurements.iter().filter(|m| !m.passed()).collect()
    }

    pub fn merge(&mut self, other: CheckReport) {
        self.measurements.extend(other.measurements);
        self.notes.extend(other.notes);
        for (k, v) in other.metadata {
            self.metadata.entry(k).or_insert(v);
        }
    }
}

impl fmt::Display for CheckReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{} {}{} [{}]: {} measurements",
            if self.passed() { "PASS" } else { "FAIL" },
            self.check,
            self.multi_index.as_deref().map(|n| format!(" n={n}")).unwrap_or_default(),
            self.anchor,
            self.measurements.len()
        )?;
        if let Some(worst) = self.failures().first() {
            write!(f, "; first failure {}: {:e} {} {:e}", worst.label, worst.value, worst.relation, worst.threshold)?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn verdict_is_recomputed() {
        let mut r = CheckReport::new("demo", "demo-anchor");
        assert!(r.passed());
        r.at_most("a", None, 1e-30, 1e-20);
        r.at_least("b", Some(1), 5.0, 5.0);
        r.equal("c", None, 2.0, 2.0);
        assert!(r.passed());
        r.measurements[0].value = 1e-10;
        assert!(!r.passed());
        assert_eq!(r.failures().len(), 1);
        assert!(r.to_string().starts_with("FAIL demo"));
    }

    #[test]
    fn nan_never_passes() {
        let mut r = CheckReport::new("nan", "x");
        r.at_most("a", None, f64::NAN, 1.0);
        assert!(!r.passed());
    }
}
