//! Named code instances at the three stripe widths used for comparisons.

use std::fmt;

use crate::code::{build_alrc, build_olrc, build_ulrc, build_unilrc, CodeDefinition, Family};
use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Scheme {
    /// 30-of-42
    N42,
    /// 112-of-136
    N136,
    /// 180-of-210
    N210,
}

impl Scheme {
    pub const ALL: [Scheme; 3] = [Scheme::N42, Scheme::N136, Scheme::N210];

    pub fn n(self) -> usize {
        match self {
            Scheme::N42 => 42,
            Scheme::N136 => 136,
            Scheme::N210 => 210,
        }
    }

    pub fn k(self) -> usize {
        match self {
            Scheme::N42 => 30,
            Scheme::N136 => 112,
            Scheme::N210 => 180,
        }
    }

    /// UniLRC `(alpha, z)` for this width.
    pub fn unilrc_params(self) -> (usize, usize) {
        match self {
            Scheme::N42 => (1, 6),
            Scheme::N136 => (2, 8),
            Scheme::N210 => (2, 10),
        }
    }

    pub fn label(self) -> String {
        format!("{}-of-{}", self.k(), self.n())
    }
}

impl fmt::Display for Scheme {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.label())
    }
}

impl std::str::FromStr for Scheme {
    type Err = Error;
    fn from_str(s: &str) -> Result<Scheme> {
        let n = s.rsplit(['-', '_']).next().unwrap_or(s);
        match n.trim_start_matches('n') {
            "42" => Ok(Scheme::N42),
            "136" => Ok(Scheme::N136),
            "210" => Ok(Scheme::N210),
            _ => Err(Error::Parameter(format!("unknown scheme {s:?}; expected 42, 136 or 210"))),
        }
    }
}

/// The code of `family` at width `scheme`.
///
/// | scheme | ALRC (k, group data, g) | OLRC (k, r, g, l) | ULRC (k, small x count, large x count) |
/// |--------|-------------------------|-------------------|----------------------------------------|
/// | 42     | 30, 5, 6                | 30, 25, 10, 2     | 30, 7 x 3, 8 x 2                        |
/// | 136    | 112, 14, 16             | 112, 78, 22, 2    | 112, 18 x 4, 19 x 3                     |
/// | 210    | 180, 18, 20             | 180, 87, 27, 3    | 180, 22 x 6, 23 x 3                     |
pub fn build(family: Family, scheme: Scheme) -> Result<CodeDefinition> {
    match (family, scheme) {
        (Family::UniLrc, s) => {
            let (a, z) = s.unilrc_params();
            build_unilrc(a, z)
        }
        (Family::Alrc, Scheme::N42) => build_alrc(30, 5, 6),
        (Family::Alrc, Scheme::N136) => build_alrc(112, 14, 16),
        (Family::Alrc, Scheme::N210) => build_alrc(180, 18, 20),
        (Family::Olrc, Scheme::N42) => build_olrc(30, 25, 10, 2),
        (Family::Olrc, Scheme::N136) => build_olrc(112, 78, 22, 2),
        (Family::Olrc, Scheme::N210) => build_olrc(180, 87, 27, 3),
        (Family::Ulrc, Scheme::N42) => build_ulrc(30, 7, 3, 8, 2),
        (Family::Ulrc, Scheme::N136) => build_ulrc(112, 18, 4, 19, 3),
        (Family::Ulrc, Scheme::N210) => build_ulrc(180, 22, 6, 23, 3),
    }
}
