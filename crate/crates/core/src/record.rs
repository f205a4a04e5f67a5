use serde::{Deserialize, Serialize};

/// Direction of a checked inequality.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Relation {
    /// `lhs <= rhs`
    Le,
    /// `lhs >= rhs`
    Ge,
}

/// One evaluated inequality with both sides kept for inspection.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct VerificationRecord {
    pub name: String,
    #[serde(with = "extended_f64")]
    pub lhs: f64,
    #[serde(with = "extended_f64")]
    pub rhs: f64,
    pub relation: Relation,
    pub passed: bool,
    /// True when the check holds for a trivial reason (for instance a
    /// nonpositive lower bound) rather than through the quantity itself.
    pub vacuous: bool,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub detail: Option<String>,
}

impl VerificationRecord {
    /// Compares with an absolute-plus-relative slack of `tol` to absorb
    /// round-off in floating-point sides.
    pub fn check(
        name: impl Into<String>,
        lhs: f64,
        relation: Relation,
        rhs: f64,
        tol: f64,
    ) -> Self {
        let scale = if lhs.is_finite() && rhs.is_finite() {
            lhs.abs().max(rhs.abs())
        } else {
            0.0
        };
        let slack = tol * (1.0 + scale);
        let passed = match relation {
            Relation::Le => lhs <= rhs + slack,
            Relation::Ge => lhs + slack >= rhs,
        };
        Self {
            name: name.into(),
            lhs,
            rhs,
            relation,
            passed,
            vacuous: false,
            detail: None,
        }
    }

    /// Exact comparison for integer-valued sides.
    pub fn exact(name: impl Into<String>, lhs: f64, relation: Relation, rhs: f64) -> Self {
        Self::check(name, lhs, relation, rhs, 0.0)
    }

    pub fn with_detail(mut self, detail: impl Into<String>) -> Self {
        self.detail = Some(detail.into());
        self
    }

    pub fn mark_vacuous(mut self) -> Self {
        self.vacuous = true;
        self
    }

    /// Slack `lhs - rhs` oriented so that positive means the inequality holds.
    pub fn margin(&self) -> f64 {
        match self.relation {
            Relation::Le => self.rhs - self.lhs,
            Relation::Ge => self.lhs - self.rhs,
        }
    }
}

/// Serde adapter for `f64` values that may be infinite or NaN: finite
/// values stay JSON numbers, the rest become `"inf"`, `"-inf"` or `"nan"`.
pub mod extended_f64 {
    use serde::{de, Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(v: &f64, s: S) -> Result<S::Ok, S::Error> {
        if v.is_finite() {
            s.serialize_f64(*v)
        } else if v.is_nan() {
            s.serialize_str("nan")
        } else if *v > 0.0 {
            s.serialize_str("inf")
        } else {
            s.serialize_str("-inf")
        }
    }

    #[derive(Deserialize)]
    #[serde(untagged)]
    enum Repr {
        Num(f64),
        Text(String),
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<f64, D::Error> {
        match Repr::deserialize(d)? {
            Repr::Num(v) => Ok(v),
            Repr::Text(t) => match t.as_str() {
                "inf" => Ok(f64::INFINITY),
                "-inf" => Ok(f64::NEG_INFINITY),
                "nan" => Ok(f64::NAN),
                other => Err(de::Error::custom(format!("not a number: {other}"))),
            },
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn slack_and_direction() {
        assert!(VerificationRecord::check("a", 1.0, Relation::Le, 1.0 - 1e-12, 1e-9).passed);
        assert!(!VerificationRecord::exact("a", 1.0, Relation::Le, 1.0 - 1e-12).passed);
        assert!(VerificationRecord::exact("b", f64::INFINITY, Relation::Ge, 3.0).passed);
        assert_eq!(
            VerificationRecord::exact("c", 2.0, Relation::Ge, 0.5).margin(),
            1.5
        );
    }

    #[test]
    fn infinite_sides_round_trip() {
        let r = VerificationRecord::exact("x", f64::INFINITY, Relation::Ge, -1.0);
        let json = serde_json::to_string(&r).unwrap();
        assert!(json.contains("\"lhs\":\"inf\""));
        let back: VerificationRecord = serde_json::from_str(&json).unwrap();
        assert_eq!(back, r);
    }
}
