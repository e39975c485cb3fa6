//! Integer-flag encoding of the boxes explored by the interval search.
//!
//! Since coordinates are only ever split at zero, each coordinate of a box
//! is in one of three states, and the original [`SearchBox`](crate::qp::SearchBox)
//! is kept once for the whole run.

use std::fmt;

use crate::error::{Error, Result};
use crate::qp::IndexSet;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
#[repr(u8)]
pub enum Flag {
    /// The degenerate interval `[0, 0]`.
    Zero = 0,
    /// Undecided: the interval still contains zero.
    Free = 1,
    /// The interval excludes zero.
    NonZero = 2,
}

impl Flag {
    pub fn digit(self) -> u8 {
        self as u8
    }

    pub fn from_digit(d: u8) -> Option<Self> {
        match d {
            0 => Some(Flag::Zero),
            1 => Some(Flag::Free),
            2 => Some(Flag::NonZero),
            _ => None,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct FlagBox {
    flags: Vec<Flag>,
}

/// Outcome of the cardinality deletion rules for one box.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum DeletionVerdict {
    /// More than `k` nonzero-forced or more than `p - k` zero-fixed coordinates.
    Infeasible,
    /// Exactly `k` nonzero-forced coordinates; the rest collapse to zero.
    TerminalFixedSupport(IndexSet),
    /// Exactly `p - k` zero-fixed coordinates; every other coordinate is kept.
    TerminalFreeSupport(IndexSet),
    Continue,
}

impl DeletionVerdict {
    pub fn terminal_support(&self) -> Option<&IndexSet> {
        match self {
            DeletionVerdict::TerminalFixedSupport(s) | DeletionVerdict::TerminalFreeSupport(s) => Some(s),
            _ => None,
        }
    }
}

/// The root box: every coordinate undecided.
pub fn initial_flagbox(p: usize) -> FlagBox {
    assert!(p >= 1, "dimension must be positive");
    FlagBox {
        flags: vec![Flag::Free; p],
    }
}

impl FlagBox {
    pub fn from_flags(flags: Vec<Flag>) -> Self {
        Self { flags }
    }

    pub fn dim(&self) -> usize {
        self.flags.len()
    }

    pub fn flags(&self) -> &[Flag] {
        &self.flags
    }

    pub fn flag(&self, i: usize) -> Flag {
        self.flags[i]
    }

    pub fn count(&self, flag: Flag) -> usize {
        self.flags.iter().filter(|&&f| f == flag).count()
    }

    /// Coordinates with a nonzero flag.
    pub fn support(&self) -> IndexSet {
        self.indices_where(|f| f != Flag::Zero)
    }

    pub fn nonzero_forced(&self) -> IndexSet {
        self.indices_where(|f| f == Flag::NonZero)
    }

    pub fn free(&self) -> IndexSet {
        self.indices_where(|f| f == Flag::Free)
    }

    fn indices_where(&self, pred: impl Fn(Flag) -> bool) -> IndexSet {
        IndexSet::from_unsorted(
            self.flags
                .iter()
                .enumerate()
                .filter(|(_, &f)| pred(f))
                .map(|(i, _)| i)
                .collect(),
        )
    }

    /// Splits coordinate `eta` at zero into `(zero child, nonzero child)`.
    pub fn branch(&self, eta: usize) -> Result<(FlagBox, FlagBox)> {
        match self.flags.get(eta) {
            Some(Flag::Free) => {}
            Some(&f) => {
                return Err(Error::NotBranchable {
                    index: eta,
                    flag: f.digit(),
                })
            }
            None => {
                return Err(Error::NotBranchable {
                    index: eta,
                    flag: u8::MAX,
                })
            }
        }
        let mut zero = self.clone();
        zero.flags[eta] = Flag::Zero;
        let mut two = self.clone();
        two.flags[eta] = Flag::NonZero;
        Ok((zero, two))
    }

    /// Applies the four cardinality rules in priority order: infeasibility
    /// first, then a full nonzero set, then a full zero set.
    pub fn check_deletion(&self, k: usize) -> DeletionVerdict {
        let p = self.dim();
        let twos = self.count(Flag::NonZero);
        let zeros = self.count(Flag::Zero);
        if twos > k || zeros > p - k {
            DeletionVerdict::Infeasible
        } else if twos == k {
            DeletionVerdict::TerminalFixedSupport(self.nonzero_forced())
        } else if zeros == p - k {
            DeletionVerdict::TerminalFreeSupport(self.support())
        } else {
            DeletionVerdict::Continue
        }
    }

    /// The box as drawn once a terminal verdict is resolved: the resolved
    /// support shown as `2`, everything else as `0`.
    pub fn collapsed(&self, verdict: &DeletionVerdict) -> FlagBox {
        match verdict.terminal_support() {
            Some(support) => FlagBox {
                flags: (0..self.dim())
                    .map(|i| if support.contains(i) { Flag::NonZero } else { Flag::Zero })
                    .collect(),
            },
            None => self.clone(),
        }
    }
}

/// Free-function form of [`FlagBox::branch`].
pub fn branch(fb: &FlagBox, eta: usize) -> Result<(FlagBox, FlagBox)> {
    fb.branch(eta)
}

/// Free-function form of [`FlagBox::check_deletion`]; requires `1 <= k < p`.
pub fn check_deletion(fb: &FlagBox, p: usize, k: usize) -> Result<DeletionVerdict> {
    if k == 0 || k >= p || fb.dim() != p {
        return Err(Error::InvalidK { k, p });
    }
    Ok(fb.check_deletion(k))
}

pub fn support(fb: &FlagBox) -> IndexSet {
    fb.support()
}

impl fmt::Display for FlagBox {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for flag in &self.flags {
            write!(f, "{}", flag.digit())?;
        }
        Ok(())
    }
}

impl std::str::FromStr for FlagBox {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        s.bytes()
            .map(|b| {
                b.checked_sub(b'0')
                    .and_then(Flag::from_digit)
                    .ok_or_else(|| Error::InvalidIndexSet(format!("'{s}' is not a flag string")))
            })
            .collect::<Result<Vec<_>>>()
            .map(FlagBox::from_flags)
    }
}
