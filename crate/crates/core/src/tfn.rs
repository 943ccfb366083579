//! Triangular fuzzy numbers and the fuzzified Saaty scale.

use std::fmt;
use std::ops::Add;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::consistency::ComparisonMatrix;

const SCALE_TOL: f64 = 1e-9;
const RECIPROCITY_TOL: f64 = 1e-12;

#[derive(Debug, Error, PartialEq)]
pub enum TfnError {
    #[error("fuzzy number ({l}, {m}, {u}) violates l <= m <= u")]
    Unordered { l: f64, m: f64, u: f64 },
    #[error("reciprocal needs a positive lower support, got {0}")]
    NonPositiveSupport(f64),
    #[error("intensity {0} is not on the 1..=9 scale")]
    UnknownIntensity(i64),
    #[error("entry ({i},{j}) = {value} is not a Saaty intensity or its reciprocal")]
    NonScaleEntry { i: usize, j: usize, value: f64 },
    #[error("invalid scale table: {0}")]
    InvalidTable(String),
    #[error("invalid fuzzy comparison matrix: {0}")]
    InvalidMatrix(String),
}

/// Triangular fuzzy number `(l, m, u)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Tfn {
    pub l: f64,
    pub m: f64,
    pub u: f64,
}

impl Tfn {
    pub const ONE: Tfn = Tfn {
        l: 1.0,
        m: 1.0,
        u: 1.0,
    };
    pub const ZERO: Tfn = Tfn {
        l: 0.0,
        m: 0.0,
        u: 0.0,
    };

    pub fn new(l: f64, m: f64, u: f64) -> Result<Self, TfnError> {
        if l.is_finite() && m.is_finite() && u.is_finite() && l <= m && m <= u {
            Ok(Self { l, m, u })
        } else {
            Err(TfnError::Unordered { l, m, u })
        }
    }

    /// Crisp number `(x, x, x)`.
    pub fn crisp(x: f64) -> Self {
        Self { l: x, m: x, u: x }
    }

    /// `(1/u, 1/m, 1/l)`.
    pub fn reciprocal(self) -> Result<Self, TfnError> {
        if self.l <= 0.0 {
            return Err(TfnError::NonPositiveSupport(self.l));
        }
        Ok(Self {
            l: 1.0 / self.u,
            m: 1.0 / self.m,
            u: 1.0 / self.l,
        })
    }

    /// Triangular membership grade of `x`; only used for plotting.
    pub fn membership(&self, x: f64) -> f64 {
        if x < self.l || x > self.u {
            0.0
        } else if x == self.m {
            1.0
        } else if x < self.m {
            (x - self.l) / (self.m - self.l)
        } else {
            (self.u - x) / (self.u - self.m)
        }
    }

    pub fn max_abs_diff(&self, other: &Tfn) -> f64 {
        (self.l - other.l)
            .abs()
            .max((self.m - other.m).abs())
            .max((self.u - other.u).abs())
    }
}

impl Add for Tfn {
    type Output = Tfn;

    fn add(self, rhs: Tfn) -> Tfn {
        Tfn {
            l: self.l + rhs.l,
            m: self.m + rhs.m,
            u: self.u + rhs.u,
        }
    }
}

impl std::iter::Sum for Tfn {
    fn sum<I: Iterator<Item = Tfn>>(iter: I) -> Tfn {
        iter.fold(Tfn::ZERO, Add::add)
    }
}

impl fmt::Display for Tfn {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {}, {})", self.l, self.m, self.u)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Direction {
    Real,
    Inverse,
}

/// A fraction `num / den`.
pub type Fraction = (i64, i64);

/// One row of the comparative scale, as exact fractions.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ExactScaleRow {
    pub intensity: u8,
    pub label: &'static str,
    pub real: [Fraction; 3],
    pub inverse: [Fraction; 3],
}

/// Fuzzified Saaty scale. Inverses of intensities 6 and 8 are `(1/u, 1/m, 1/l)` of the real row.
pub const SAATY_TFN_SCALE: [ExactScaleRow; 9] = [
    ExactScaleRow {
        intensity: 1,
        label: "Just Equal",
        real: [(1, 1), (1, 1), (1, 1)],
        inverse: [(1, 1), (1, 1), (1, 1)],
    },
    ExactScaleRow {
        intensity: 2,
        label: "Intermediate",
        real: [(1, 2), (3, 4), (1, 1)],
        inverse: [(1, 1), (4, 3), (2, 1)],
    },
    ExactScaleRow {
        intensity: 3,
        label: "Moderately Important",
        real: [(2, 3), (1, 1), (3, 2)],
        inverse: [(2, 3), (1, 1), (3, 2)],
    },
    ExactScaleRow {
        intensity: 4,
        label: "Intermediate",
        real: [(1, 1), (3, 2), (2, 1)],
        inverse: [(1, 2), (2, 3), (1, 1)],
    },
    ExactScaleRow {
        intensity: 5,
        label: "Strong Important",
        real: [(3, 2), (2, 1), (5, 2)],
        inverse: [(2, 5), (1, 2), (2, 3)],
    },
    ExactScaleRow {
        intensity: 6,
        label: "Intermediate",
        real: [(2, 1), (5, 2), (3, 1)],
        inverse: [(1, 3), (2, 5), (1, 2)],
    },
    ExactScaleRow {
        intensity: 7,
        label: "Very Strong",
        real: [(5, 2), (3, 1), (7, 2)],
        inverse: [(2, 7), (1, 3), (2, 5)],
    },
    ExactScaleRow {
        intensity: 8,
        label: "Intermediate",
        real: [(3, 1), (7, 2), (4, 1)],
        inverse: [(1, 4), (2, 7), (1, 3)],
    },
    ExactScaleRow {
        intensity: 9,
        label: "Extremely Strong",
        real: [(7, 2), (4, 1), (9, 2)],
        inverse: [(2, 9), (1, 4), (2, 7)],
    },
];

fn from_fractions(f: [Fraction; 3]) -> Tfn {
    let v = |(n, d): Fraction| n as f64 / d as f64;
    Tfn {
        l: v(f[0]),
        m: v(f[1]),
        u: v(f[2]),
    }
}

/// One exported scale entry.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ScaleEntry {
    pub intensity: u8,
    pub direction: Direction,
    pub l: f64,
    pub m: f64,
    pub u: f64,
}

/// Intensity 1..=9 -> (real, inverse) fuzzy numbers.
#[derive(Debug, Clone, PartialEq)]
pub struct ScaleTable {
    rows: [(Tfn, Tfn); 9],
}

impl Default for ScaleTable {
    fn default() -> Self {
        let mut rows = [(Tfn::ONE, Tfn::ONE); 9];
        for (slot, row) in rows.iter_mut().zip(SAATY_TFN_SCALE.iter()) {
            *slot = (from_fractions(row.real), from_fractions(row.inverse));
        }
        Self { rows }
    }
}

impl ScaleTable {
    pub fn from_rows(rows: [(Tfn, Tfn); 9]) -> Result<Self, TfnError> {
        for (k, (real, inverse)) in rows.iter().enumerate() {
            for t in [real, inverse] {
                Tfn::new(t.l, t.m, t.u)?;
                if t.l <= 0.0 {
                    return Err(TfnError::InvalidTable(format!(
                        "intensity {} has non-positive support",
                        k + 1
                    )));
                }
            }
            if real.reciprocal()?.max_abs_diff(inverse) > RECIPROCITY_TOL {
                return Err(TfnError::InvalidTable(format!(
                    "intensity {}: inverse {} is not the reciprocal of {}",
                    k + 1,
                    inverse,
                    real
                )));
            }
        }
        Ok(Self { rows })
    }

    pub fn lookup(&self, intensity: i64, direction: Direction) -> Result<Tfn, TfnError> {
        if !(1..=9).contains(&intensity) {
            return Err(TfnError::UnknownIntensity(intensity));
        }
        let (real, inverse) = self.rows[(intensity - 1) as usize];
        Ok(match direction {
            Direction::Real => real,
            Direction::Inverse => inverse,
        })
    }

    pub fn entries(&self) -> Vec<ScaleEntry> {
        let mut out = Vec::with_capacity(18);
        for (k, (real, inverse)) in self.rows.iter().enumerate() {
            for (direction, t) in [(Direction::Real, real), (Direction::Inverse, inverse)] {
                out.push(ScaleEntry {
                    intensity: k as u8 + 1,
                    direction,
                    l: t.l,
                    m: t.m,
                    u: t.u,
                });
            }
        }
        out
    }

    pub fn from_entries(entries: &[ScaleEntry]) -> Result<Self, TfnError> {
        let mut rows: [(Option<Tfn>, Option<Tfn>); 9] = [(None, None); 9];
        for e in entries {
            if !(1..=9).contains(&e.intensity) {
                return Err(TfnError::UnknownIntensity(e.intensity as i64));
            }
            let t = Tfn::new(e.l, e.m, e.u)?;
            let slot = &mut rows[e.intensity as usize - 1];
            let target = match e.direction {
                Direction::Real => &mut slot.0,
                Direction::Inverse => &mut slot.1,
            };
            if target.replace(t).is_some() {
                return Err(TfnError::InvalidTable(format!(
                    "duplicate entry for intensity {} ({:?})",
                    e.intensity, e.direction
                )));
            }
        }
        let mut full = [(Tfn::ONE, Tfn::ONE); 9];
        for (k, (real, inverse)) in rows.into_iter().enumerate() {
            match (real, inverse) {
                (Some(r), Some(i)) => full[k] = (r, i),
                _ => {
                    return Err(TfnError::InvalidTable(format!(
                        "intensity {} is missing a direction",
                        k + 1
                    )))
                }
            }
        }
        Self::from_rows(full)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(&self.entries()).expect("scale entries serialize")
    }

    pub fn from_json(text: &str) -> Result<Self, TfnError> {
        let entries: Vec<ScaleEntry> =
            serde_json::from_str(text).map_err(|e| TfnError::InvalidTable(e.to_string()))?;
        Self::from_entries(&entries)
    }
}

/// Looks up the default scale.
pub fn scale_lookup(intensity: i64, direction: Direction) -> Result<Tfn, TfnError> {
    ScaleTable::default().lookup(intensity, direction)
}

/// n x n matrix of fuzzy judgments, row-major.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct FuzzyComparisonMatrix {
    n: usize,
    entries: Vec<Tfn>,
}

impl FuzzyComparisonMatrix {
    pub fn from_rows(rows: Vec<Vec<Tfn>>) -> Result<Self, TfnError> {
        let n = rows.len();
        if rows.iter().any(|r| r.len() != n) {
            return Err(TfnError::InvalidMatrix("not square".into()));
        }
        let m = Self {
            n,
            entries: rows.into_iter().flatten().collect(),
        };
        for i in 0..n {
            if m.get(i, i) != Tfn::ONE {
                return Err(TfnError::InvalidMatrix(format!("diagonal {i} is not (1,1,1)")));
            }
            for j in i + 1..n {
                if m.get(i, j).reciprocal()?.max_abs_diff(&m.get(j, i)) > RECIPROCITY_TOL {
                    return Err(TfnError::InvalidMatrix(format!(
                        "entries ({i},{j}) and ({j},{i}) are not reciprocal"
                    )));
                }
            }
        }
        Ok(m)
    }

    pub fn order(&self) -> usize {
        self.n
    }

    pub fn get(&self, i: usize, j: usize) -> Tfn {
        self.entries[i * self.n + j]
    }

    pub fn row(&self, i: usize) -> &[Tfn] {
        &self.entries[i * self.n..(i + 1) * self.n]
    }

    pub fn to_rows(&self) -> Vec<Vec<Tfn>> {
        (0..self.n).map(|i| self.row(i).to_vec()).collect()
    }
}

/// Rounds `x` to an intensity if it is one within tolerance.
fn as_intensity(x: f64) -> Option<i64> {
    let k = x.round();
    ((1.0..=9.0).contains(&k) && (x - k).abs() <= SCALE_TOL).then_some(k as i64)
}

/// Replaces each crisp judgment by its scale-table fuzzy number.
///
/// `s >= 1` uses the real row of `round(s)`, `s < 1` the inverse row of `round(1/s)`.
pub fn fuzzify(c: &ComparisonMatrix, table: &ScaleTable) -> Result<FuzzyComparisonMatrix, TfnError> {
    let n = c.order();
    let mut entries = Vec::with_capacity(n * n);
    for i in 0..n {
        for j in 0..n {
            let s = c.get(i, j);
            let t = if i == j {
                Tfn::ONE
            } else if s >= 1.0 {
                let k = as_intensity(s).ok_or(TfnError::NonScaleEntry { i, j, value: s })?;
                table.lookup(k, Direction::Real)?
            } else {
                let k = as_intensity(1.0 / s).ok_or(TfnError::NonScaleEntry { i, j, value: s })?;
                table.lookup(k, Direction::Inverse)?
            };
            entries.push(t);
        }
    }
    Ok(FuzzyComparisonMatrix { n, entries })
}
