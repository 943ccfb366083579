//! Loading the per-user category ratings into a [`RatingMatrix`].
//!
//! The default layout is the public UCI "Travel Reviews" file: a `User ID`
//! column followed by `Category 1` .. `Category 10`, each cell holding one
//! user's average rating for that attraction category on a 0..=4 scale.

use std::collections::HashSet;
use std::fs::File;
use std::io::Read;
use std::path::Path;

use serde::{Deserialize, Serialize};
use thiserror::Error;

/// Lowest admissible rating.
pub const RATING_MIN: f64 = 0.0;
/// Highest admissible rating ("Excellent").
pub const RATING_MAX: f64 = 4.0;

#[derive(Debug, Error)]
pub enum IngestError {
    #[error("input file not found: {0}")]
    MissingFile(String),
    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),
    #[error("csv error: {0}")]
    Csv(#[from] csv::Error),
    #[error("invalid schema: {0}")]
    InvalidSchema(String),
    #[error("column `{0}` not found in header")]
    MissingColumn(String),
    #[error("row {row}, column `{column}`: cell `{cell}` is not a number")]
    NonNumericCell {
        row: usize,
        column: String,
        cell: String,
    },
    #[error("row {row}, column `{column}`: value {value} outside [0, 4]")]
    OutOfRange {
        row: usize,
        column: String,
        value: f64,
    },
    #[error("dataset has no data rows")]
    EmptyDataset,
    #[error("at least 2 criteria are required, got {0}")]
    TooFewCriteria(usize),
    #[error("ragged matrix: row {row} has {got} cells, expected {expected}")]
    Ragged {
        row: usize,
        got: usize,
        expected: usize,
    },
    #[error("schema file: {0}")]
    SchemaFile(#[from] serde_json::Error),
}

/// One mapped criterion column.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CriterionColumn {
    pub column: String,
    pub label: String,
}

/// Which CSV columns hold the user id and the criteria, and how criteria are labelled.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct DatasetSchema {
    pub id_column: String,
    pub criteria_columns: Vec<CriterionColumn>,
}

/// Category number -> attraction label, per the dataset's documentation.
const TRAVEL_REVIEWS_LABELS: [&str; 10] = [
    "Art Galleries",
    "Dance Clubs",
    "Juice Bars",
    "Restaurants",
    "Museums",
    "Resorts",
    "Parks/Picnic Spots",
    "Beaches",
    "Theaters",
    "Religious Institutions",
];

/// On-disk override format: `{"id_column": "...", "columns": {"<csv column>": "<label>", ...}}`.
///
/// Column order in the object is the criterion order.
#[derive(Debug, Deserialize)]
struct SchemaFile {
    id_column: String,
    columns: serde_json::Map<String, serde_json::Value>,
}

impl DatasetSchema {
    pub fn new(
        id_column: impl Into<String>,
        criteria: impl IntoIterator<Item = (String, String)>,
    ) -> Result<Self, IngestError> {
        let schema = Self {
            id_column: id_column.into(),
            criteria_columns: criteria
                .into_iter()
                .map(|(column, label)| CriterionColumn { column, label })
                .collect(),
        };
        schema.validate()?;
        Ok(schema)
    }

    /// The UCI Travel Reviews layout.
    pub fn travel_reviews() -> Self {
        Self {
            id_column: "User ID".to_string(),
            criteria_columns: TRAVEL_REVIEWS_LABELS
                .iter()
                .enumerate()
                .map(|(i, label)| CriterionColumn {
                    column: format!("Category {}", i + 1),
                    label: (*label).to_string(),
                })
                .collect(),
        }
    }

    pub fn from_json_str(text: &str) -> Result<Self, IngestError> {
        let file: SchemaFile = serde_json::from_str(text)?;
        let mut criteria = Vec::with_capacity(file.columns.len());
        for (column, label) in file.columns {
            let label = label.as_str().ok_or_else(|| {
                IngestError::InvalidSchema(format!("label for `{column}` must be a string"))
            })?;
            criteria.push((column, label.to_string()));
        }
        Self::new(file.id_column, criteria)
    }

    pub fn from_json_file(path: &Path) -> Result<Self, IngestError> {
        let text = read_to_string(path)?;
        Self::from_json_str(&text)
    }

    pub fn labels(&self) -> Vec<String> {
        self.criteria_columns.iter().map(|c| c.label.clone()).collect()
    }

    pub fn validate(&self) -> Result<(), IngestError> {
        if self.criteria_columns.is_empty() {
            return Err(IngestError::InvalidSchema("no criteria columns".into()));
        }
        let mut columns = HashSet::new();
        let mut labels = HashSet::new();
        for c in &self.criteria_columns {
            if !columns.insert(c.column.as_str()) {
                return Err(IngestError::InvalidSchema(format!(
                    "duplicate column `{}`",
                    c.column
                )));
            }
            if !labels.insert(c.label.as_str()) {
                return Err(IngestError::InvalidSchema(format!(
                    "duplicate label `{}`",
                    c.label
                )));
            }
        }
        Ok(())
    }
}

impl Default for DatasetSchema {
    fn default() -> Self {
        Self::travel_reviews()
    }
}

/// Users x criteria matrix of average ratings, stored row-major.
#[derive(Debug, Clone, PartialEq)]
pub struct RatingMatrix {
    values: Vec<f64>,
    rows: usize,
    row_ids: Vec<String>,
    criteria: Vec<String>,
}

impl RatingMatrix {
    /// Builds a matrix from rows, checking shape and the rating range.
    pub fn from_rows(
        row_ids: Vec<String>,
        criteria: Vec<String>,
        rows: Vec<Vec<f64>>,
    ) -> Result<Self, IngestError> {
        let cols = criteria.len();
        if cols < 2 {
            return Err(IngestError::TooFewCriteria(cols));
        }
        if rows.is_empty() {
            return Err(IngestError::EmptyDataset);
        }
        if row_ids.len() != rows.len() {
            return Err(IngestError::InvalidSchema(format!(
                "{} row ids for {} rows",
                row_ids.len(),
                rows.len()
            )));
        }
        let mut values = Vec::with_capacity(rows.len() * cols);
        for (r, row) in rows.iter().enumerate() {
            if row.len() != cols {
                return Err(IngestError::Ragged {
                    row: r + 1,
                    got: row.len(),
                    expected: cols,
                });
            }
            for (c, &v) in row.iter().enumerate() {
                check_range(v, r + 1, &criteria[c])?;
                values.push(v);
            }
        }
        Ok(Self {
            values,
            rows: rows.len(),
            row_ids,
            criteria,
        })
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.criteria.len()
    }

    pub fn get(&self, row: usize, col: usize) -> f64 {
        self.values[row * self.cols() + col]
    }

    pub fn row(&self, row: usize) -> &[f64] {
        let n = self.cols();
        &self.values[row * n..(row + 1) * n]
    }

    pub fn column(&self, col: usize) -> impl Iterator<Item = f64> + '_ {
        self.values.iter().skip(col).step_by(self.cols()).copied()
    }

    pub fn row_ids(&self) -> &[String] {
        &self.row_ids
    }

    pub fn criteria(&self) -> &[String] {
        &self.criteria
    }
}

fn check_range(value: f64, row: usize, column: &str) -> Result<(), IngestError> {
    if value.is_finite() && (RATING_MIN..=RATING_MAX).contains(&value) {
        Ok(())
    } else {
        Err(IngestError::OutOfRange {
            row,
            column: column.to_string(),
            value,
        })
    }
}

fn open(path: &Path) -> Result<File, IngestError> {
    File::open(path).map_err(|e| match e.kind() {
        std::io::ErrorKind::NotFound => IngestError::MissingFile(path.display().to_string()),
        _ => IngestError::Io(e),
    })
}

fn read_to_string(path: &Path) -> Result<String, IngestError> {
    let mut file = open(path)?;
    let mut text = String::new();
    file.read_to_string(&mut text)?;
    Ok(text)
}

/// Reads a ratings CSV, keeping the columns named by `schema` in schema order.
pub fn load_csv(path: &Path, schema: &DatasetSchema) -> Result<RatingMatrix, IngestError> {
    load_reader(open(path)?, schema)
}

/// Same as [`load_csv`] over any byte source.
pub fn load_reader<R: Read>(reader: R, schema: &DatasetSchema) -> Result<RatingMatrix, IngestError> {
    schema.validate()?;
    if schema.criteria_columns.len() < 2 {
        return Err(IngestError::TooFewCriteria(schema.criteria_columns.len()));
    }

    let mut rdr = csv::ReaderBuilder::new()
        .has_headers(true)
        .trim(csv::Trim::All)
        .from_reader(reader);
    let header = rdr.headers()?.clone();
    let position = |name: &str| {
        header
            .iter()
            .position(|h| h == name)
            .ok_or_else(|| IngestError::MissingColumn(name.to_string()))
    };
    let id_idx = position(&schema.id_column)?;
    let col_idx = schema
        .criteria_columns
        .iter()
        .map(|c| position(&c.column))
        .collect::<Result<Vec<_>, _>>()?;

    let cols = col_idx.len();
    let mut values = Vec::new();
    let mut row_ids = Vec::new();
    let mut record = csv::StringRecord::new();
    let mut row = 0usize;
    while rdr.read_record(&mut record)? {
        row += 1;
        row_ids.push(record.get(id_idx).unwrap_or_default().to_string());
        for (c, &idx) in col_idx.iter().enumerate() {
            let column = &schema.criteria_columns[c].column;
            let cell = record.get(idx).unwrap_or_default();
            let value: f64 = cell.parse().map_err(|_| IngestError::NonNumericCell {
                row,
                column: column.clone(),
                cell: cell.to_string(),
            })?;
            check_range(value, row, column)?;
            values.push(value);
        }
    }
    if row == 0 {
        return Err(IngestError::EmptyDataset);
    }
    debug_assert_eq!(values.len(), row * cols);
    Ok(RatingMatrix {
        values,
        rows: row,
        row_ids,
        criteria: schema.labels(),
    })
}

/// Per-criterion arithmetic mean over all users.
pub fn column_means(m: &RatingMatrix) -> Vec<f64> {
    crate::matrix::means(m)
}
