//! The nine fact-checking sources plus the derived ANY task.

use core::fmt;
use core::str::FromStr;

/// A fact-checking organization whose selections supply one label column,
/// or the synthetic [`SourceId::Any`] column (OR over the nine).
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum SourceId {
    /// Chicago Tribune
    Ct,
    /// ABC News
    Abc,
    /// CNN
    Cnn,
    /// The Washington Post
    Wp,
    /// NPR
    Npr,
    /// PolitiFact
    Pf,
    /// The Guardian
    Tg,
    /// The New York Times
    Nyt,
    /// FactCheck.org
    Fc,
    /// Derived: selected by at least one real source. Never stored in input files.
    Any,
}

impl SourceId {
    /// The nine real sources in label-column order.
    pub const REAL: [SourceId; 9] = [
        SourceId::Ct,
        SourceId::Abc,
        SourceId::Cnn,
        SourceId::Wp,
        SourceId::Npr,
        SourceId::Pf,
        SourceId::Tg,
        SourceId::Nyt,
        SourceId::Fc,
    ];

    pub const fn code(self) -> &'static str {
        match self {
            SourceId::Ct => "CT",
            SourceId::Abc => "ABC",
            SourceId::Cnn => "CNN",
            SourceId::Wp => "WP",
            SourceId::Npr => "NPR",
            SourceId::Pf => "PF",
            SourceId::Tg => "TG",
            SourceId::Nyt => "NYT",
            SourceId::Fc => "FC",
            SourceId::Any => "ANY",
        }
    }

    /// Label column for real sources, `None` for ANY.
    pub const fn column(self) -> Option<usize> {
        match self {
            SourceId::Any => None,
            s => Some(s as usize),
        }
    }

    pub const fn is_real(self) -> bool {
        !matches!(self, SourceId::Any)
    }

    pub fn from_code(code: &str) -> Option<SourceId> {
        let all = SourceId::REAL.iter().copied().chain(core::iter::once(SourceId::Any));
        for s in all {
            if s.code().eq_ignore_ascii_case(code) {
                return Some(s);
            }
        }
        None
    }
}

impl fmt::Display for SourceId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.code())
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct UnknownSource;

impl fmt::Display for UnknownSource {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("unknown source code")
    }
}

impl FromStr for SourceId {
    type Err = UnknownSource;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        SourceId::from_code(s).ok_or(UnknownSource)
    }
}
