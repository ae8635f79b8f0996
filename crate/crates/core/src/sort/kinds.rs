use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

macro_rules! sorts {
    ($($v:ident),* $(,)?) => {
        /// Structural sort of a term. Composite tags spell the cut letters
        /// top-to-bottom around their `B` cores (`BU` = body above an Up).
        #[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
        pub enum Sort { $($v),* }

        impl Sort {
            pub const ALL: &'static [Sort] = &[$(Sort::$v),*];

            pub fn name(self) -> &'static str {
                match self { $(Sort::$v => stringify!($v)),* }
            }
        }

        impl FromStr for Sort {
            type Err = String;
            fn from_str(s: &str) -> Result<Sort, String> {
                match s {
                    $(stringify!($v) => Ok(Sort::$v),)*
                    other => Err(format!("unknown sort `{other}`")),
                }
            }
        }
    };
}

sorts! {
    E, B, X, CS, U, D, S, O,
    UB, BU, DB, BD,
    OB, BO, SB, BS, OBO, OBS, SBO, SBS,
    BUBO, BUBS, BDBO, BDBS, SBDB, SBUB, OBDB, OBUB,
    BOBU, BOBD, BSBU, BSBD, DBSB, DBOB, UBSB, UBOB,
    H, T,
}

impl Sort {
    /// Occurrences of a cut letter (`U`, `D`, `S`, `O`) in the tag.
    pub fn cut_letters(self, letter: char) -> usize {
        if self == Sort::CS {
            return 0;
        }
        self.name().chars().filter(|&c| c == letter).count()
    }

    /// Coarsening onto the head/body/tail layer.
    pub fn fundamental(self) -> Option<Sort> {
        match self {
            Sort::E | Sort::H => Some(Sort::H),
            Sort::X | Sort::T => Some(Sort::T),
            Sort::B => Some(Sort::B),
            Sort::CS => Some(Sort::CS),
            _ => None,
        }
    }
}

impl fmt::Display for Sort {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// Abstract interface: an ordered column of Pins, `ε` when empty.
///
/// Every element is a Pin at this level, so the sequence is fully described
/// by its length; juxtaposition is concatenation.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Interface(pub usize);

impl Interface {
    pub const EMPTY: Interface = Interface(0);
    pub const PIN: Interface = Interface(1);

    pub fn pins(n: usize) -> Interface {
        Interface(n)
    }

    pub fn len(self) -> usize {
        self.0
    }

    pub fn is_empty(self) -> bool {
        self.0 == 0
    }

    /// `self / other`.
    pub fn juxta(self, other: Interface) -> Interface {
        Interface(self.0 + other.0)
    }
}

impl fmt::Display for Interface {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0 == 0 {
            return f.write_str("ε");
        }
        let parts = vec!["Pin"; self.0];
        f.write_str(&parts.join("/"))
    }
}

impl FromStr for Interface {
    type Err = String;

    fn from_str(s: &str) -> Result<Interface, String> {
        let s = s.trim();
        if s.is_empty() || s == "ε" || s == "eps" {
            return Ok(Interface::EMPTY);
        }
        let mut n = 0;
        for part in s.split('/') {
            match part.trim() {
                "Pin" => n += 1,
                "ε" | "eps" => {}
                other => return Err(format!("unknown interface element `{other}`")),
            }
        }
        Ok(Interface(n))
    }
}
