use alloc::vec;
use alloc::vec::Vec;
use core::fmt;
use core::str::FromStr;

use crate::error::{Error, Result};
use crate::source::SourceId;

/// Which tasks a network is trained on.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Variant {
    /// The target source alone.
    Singleton,
    /// All nine sources.
    Multi,
    /// All nine sources plus ANY.
    MultiAny,
    /// ANY only; its head ranks sentences for every target.
    Any,
    /// The target source plus ANY.
    SingletonAny,
}

impl Variant {
    pub const ALL: [Variant; 5] =
        [Variant::Singleton, Variant::Multi, Variant::MultiAny, Variant::Any, Variant::SingletonAny];

    pub const fn name(self) -> &'static str {
        match self {
            Variant::Singleton => "singleton",
            Variant::Multi => "multi",
            Variant::MultiAny => "multi+any",
            Variant::Any => "any",
            Variant::SingletonAny => "singleton+any",
        }
    }

    /// Whether a task set of this variant is built around one target source.
    pub const fn per_target(self) -> bool {
        matches!(self, Variant::Singleton | Variant::SingletonAny | Variant::Any)
    }
}

impl fmt::Display for Variant {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Variant {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let norm = s.trim().to_ascii_lowercase().replace(['_', '-'], "+");
        Variant::ALL
            .into_iter()
            .find(|v| v.name() == norm)
            .ok_or_else(|| Error::InvalidConfig(alloc::format!("unknown variant {s:?}")))
    }
}

/// An ordered list of trained tasks, one output head each.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct TaskSet {
    variant: Variant,
    target: Option<SourceId>,
    tasks: Vec<SourceId>,
}

impl TaskSet {
    fn real_target(target: SourceId) -> Result<SourceId> {
        if target.is_real() {
            Ok(target)
        } else {
            Err(Error::InvalidConfig("target must be one of the nine sources".into()))
        }
    }

    pub fn singleton(target: SourceId) -> Result<TaskSet> {
        let t = Self::real_target(target)?;
        Ok(TaskSet { variant: Variant::Singleton, target: Some(t), tasks: vec![t] })
    }

    pub fn multi() -> TaskSet {
        TaskSet { variant: Variant::Multi, target: None, tasks: SourceId::REAL.to_vec() }
    }

    pub fn multi_any() -> TaskSet {
        let mut tasks = SourceId::REAL.to_vec();
        tasks.push(SourceId::Any);
        TaskSet { variant: Variant::MultiAny, target: None, tasks }
    }

    pub fn any(target: SourceId) -> Result<TaskSet> {
        let t = Self::real_target(target)?;
        Ok(TaskSet { variant: Variant::Any, target: Some(t), tasks: vec![SourceId::Any] })
    }

    pub fn singleton_any(target: SourceId) -> Result<TaskSet> {
        let t = Self::real_target(target)?;
        Ok(TaskSet { variant: Variant::SingletonAny, target: Some(t), tasks: vec![t, SourceId::Any] })
    }

    /// The multi task set with one source left out of the training targets.
    pub fn multi_without(removed: SourceId) -> TaskSet {
        TaskSet {
            variant: Variant::Multi,
            target: None,
            tasks: SourceId::REAL.iter().copied().filter(|s| *s != removed).collect(),
        }
    }

    /// Arbitrary non-empty list of distinct tasks, tagged with `variant`.
    pub fn custom(variant: Variant, target: Option<SourceId>, tasks: Vec<SourceId>) -> Result<TaskSet> {
        if tasks.is_empty() {
            return Err(Error::InvalidConfig("a task set needs at least one task".into()));
        }
        for (i, t) in tasks.iter().enumerate() {
            if tasks[..i].contains(t) {
                return Err(Error::InvalidConfig(alloc::format!("task {t} listed twice")));
            }
        }
        Ok(TaskSet { variant, target, tasks })
    }

    pub fn build(variant: Variant, target: Option<SourceId>) -> Result<TaskSet> {
        let need = || target.ok_or_else(|| Error::InvalidConfig(alloc::format!("variant {variant} needs a target")));
        match variant {
            Variant::Singleton => TaskSet::singleton(need()?),
            Variant::Multi => Ok(TaskSet::multi()),
            Variant::MultiAny => Ok(TaskSet::multi_any()),
            Variant::Any => TaskSet::any(need()?),
            Variant::SingletonAny => TaskSet::singleton_any(need()?),
        }
    }

    pub fn variant(&self) -> Variant {
        self.variant
    }

    pub fn target(&self) -> Option<SourceId> {
        self.target
    }

    pub fn tasks(&self) -> &[SourceId] {
        &self.tasks
    }

    pub fn len(&self) -> usize {
        self.tasks.len()
    }

    pub fn is_empty(&self) -> bool {
        self.tasks.is_empty()
    }

    /// Head whose probabilities rank sentences for `source`.
    /// For the `any` variant the single ANY head serves every target.
    pub fn head_for(&self, source: SourceId) -> Option<usize> {
        self.tasks.iter().position(|t| *t == source).or_else(|| {
            (self.variant == Variant::Any && source.is_real()).then_some(0)
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sizes_per_variant() {
        assert_eq!(TaskSet::singleton(SourceId::Pf).unwrap().len(), 1);
        assert_eq!(TaskSet::singleton_any(SourceId::Pf).unwrap().tasks(), &[SourceId::Pf, SourceId::Any]);
        assert_eq!(TaskSet::multi().len(), 9);
        assert_eq!(TaskSet::multi_any().len(), 10);
        assert_eq!(TaskSet::any(SourceId::Nyt).unwrap().tasks(), &[SourceId::Any]);
        assert_eq!(TaskSet::multi_without(SourceId::Nyt).len(), 8);
        assert!(TaskSet::singleton(SourceId::Any).is_err());
        assert!(TaskSet::build(Variant::Singleton, None).is_err());
    }

    #[test]
    fn any_head_serves_all_targets() {
        let ts = TaskSet::any(SourceId::Cnn).unwrap();
        assert_eq!(ts.head_for(SourceId::Wp), Some(0));
        assert_eq!(TaskSet::singleton(SourceId::Cnn).unwrap().head_for(SourceId::Wp), None);
        assert_eq!(TaskSet::multi().head_for(SourceId::Fc), Some(8));
    }

    #[test]
    fn variant_names_parse() {
        for v in Variant::ALL {
            assert_eq!(v.name().parse::<Variant>().unwrap(), v);
        }
        assert_eq!("multi_any".parse::<Variant>().unwrap(), Variant::MultiAny);
        assert_eq!("singleton-any".parse::<Variant>().unwrap(), Variant::SingletonAny);
    }
}
