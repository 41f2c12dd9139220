use std::fmt;
use std::sync::Arc;

use num_bigint::BigInt;
use serde::{Deserialize, Serialize};

use super::ball::PrecReal;
use super::{DEFAULT_PRECISION, PRECISION_CEILING};
use crate::error::{Error, Result};

/// Starting precision and the ceiling escalation may not exceed.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PrecisionPolicy {
    pub start: u32,
    pub ceiling: u32,
}

impl Default for PrecisionPolicy {
    fn default() -> Self {
        Self {
            start: DEFAULT_PRECISION,
            ceiling: PRECISION_CEILING,
        }
    }
}

/// A value together with the precision that certified it.
#[derive(Clone, Debug)]
pub struct Certified<T> {
    pub value: T,
    pub bits: u32,
}

impl PrecisionPolicy {
    pub fn new(start: u32, ceiling: u32) -> Result<Self> {
        if start < 16 || ceiling < start {
            return Err(Error::Config(format!(
                "precision start {start} must be >= 16 and <= ceiling {ceiling}"
            )));
        }
        Ok(Self { start, ceiling })
    }

    /// The same policy starting at `bits` (clamped to the ceiling).
    pub fn starting_at(&self, bits: u32) -> Self {
        Self {
            start: bits.max(self.start).min(self.ceiling),
            ceiling: self.ceiling,
        }
    }

    /// Runs `attempt` at doubling precisions until it returns `Some`.
    ///
    /// `Ok(None)` and recoverable errors trigger escalation; any other error
    /// is returned as is. Hitting the ceiling yields `ResourceLimit`.
    pub fn escalate<T>(
        &self,
        context: &str,
        mut attempt: impl FnMut(u32) -> Result<Option<T>>,
    ) -> Result<Certified<T>> {
        let mut bits = self.start;
        loop {
            match attempt(bits) {
                Ok(Some(value)) => return Ok(Certified { value, bits }),
                Ok(None) => {}
                Err(e) if e.is_recoverable() => {}
                Err(e) => return Err(e),
            }
            if bits >= self.ceiling {
                return Err(Error::ResourceLimit {
                    ceiling: self.ceiling,
                    context: context.to_string(),
                });
            }
            bits = bits.saturating_mul(2).min(self.ceiling);
        }
    }

    /// Certified floor of a re-evaluable value.
    pub fn floor(&self, source: &RealSource) -> Result<Certified<BigInt>> {
        match self.escalate(&source.label, |bits| Ok(source.eval(bits)?.floor())) {
            Err(Error::ResourceLimit { ceiling, context }) => Err(Error::Ambiguous {
                bits: ceiling,
                context,
            }),
            other => other,
        }
    }

    /// Certified sign of a re-evaluable value; `Ambiguous` if it stays
    /// undecided up to the ceiling (e.g. the value is exactly zero).
    pub fn sign(&self, source: &RealSource) -> Result<Certified<std::cmp::Ordering>> {
        use std::cmp::Ordering;
        let res = self.escalate(&source.label, |bits| {
            let v = source.eval(bits)?;
            Ok(if v.is_positive() {
                Some(Ordering::Greater)
            } else if v.is_negative() {
                Some(Ordering::Less)
            } else if v.is_exact() {
                Some(Ordering::Equal)
            } else {
                None
            })
        });
        match res {
            Err(Error::ResourceLimit { ceiling, context }) => Err(Error::Ambiguous {
                bits: ceiling,
                context,
            }),
            other => other,
        }
    }
}

type Evaluator = dyn Fn(u32) -> Result<PrecReal> + Send + Sync;

/// A real number that can be re-evaluated at any precision.
#[derive(Clone)]
pub struct RealSource {
    pub label: String,
    eval: Arc<Evaluator>,
}

impl RealSource {
    pub fn new(
        label: impl Into<String>,
        eval: impl Fn(u32) -> Result<PrecReal> + Send + Sync + 'static,
    ) -> Self {
        Self {
            label: label.into(),
            eval: Arc::new(eval),
        }
    }

    /// A fixed ball. Escalation cannot improve it.
    pub fn constant(label: impl Into<String>, v: PrecReal) -> Self {
        Self::new(label, move |_| Ok(v.clone()))
    }

    pub fn eval(&self, bits: u32) -> Result<PrecReal> {
        (self.eval)(bits)
    }
}

impl fmt::Debug for RealSource {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("RealSource").field("label", &self.label).finish()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn escalation_stops_at_first_success() {
        let p = PrecisionPolicy::new(64, 4096).unwrap();
        let c = p.escalate("test", |b| Ok((b >= 512).then_some(b))).unwrap();
        assert_eq!(c.bits, 512);
        assert_eq!(c.value, 512);
    }

    #[test]
    fn escalation_ceiling_is_resource_limit() {
        let p = PrecisionPolicy::new(64, 300).unwrap();
        let err = p.escalate::<()>("never", |_| Ok(None)).unwrap_err();
        assert!(matches!(err, Error::ResourceLimit { ceiling: 300, .. }));
    }

    #[test]
    fn floor_of_integer_is_ambiguous_at_ceiling() {
        let p = PrecisionPolicy::new(64, 256).unwrap();
        // 3 = 9 * (1/3), never exact in binary
        let src = RealSource::new("three", |b| {
            Ok(PrecReal::from_ratio(1.into(), 3.into(), b)?.mul_int(&BigInt::from(9)))
        });
        assert!(matches!(p.floor(&src), Err(Error::Ambiguous { bits: 256, .. })));
    }

    #[test]
    fn invalid_policy() {
        assert!(PrecisionPolicy::new(512, 256).is_err());
    }
}
