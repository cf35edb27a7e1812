use std::fmt;

use serde::{Deserialize, Serialize};

/// Outcome of an LRD classifier; `Lrd` is the positive class.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Label {
    #[serde(rename = "LRD")]
    Lrd,
    #[serde(rename = "non-LRD")]
    NonLrd,
}

impl Label {
    pub fn from_positive(positive: bool) -> Self {
        if positive {
            Label::Lrd
        } else {
            Label::NonLrd
        }
    }

    pub fn is_lrd(self) -> bool {
        self == Label::Lrd
    }
}

impl fmt::Display for Label {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Label::Lrd => "LRD",
            Label::NonLrd => "non-LRD",
        })
    }
}
