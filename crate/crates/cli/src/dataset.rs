//! CSV datasets with header `x1,...,xd,f`, one sample point per row.

use std::fs;
use std::path::Path;

use ksn_core::mixing::unit;
use ksn_core::{Rational, SampleSet, Scalar};
use num_traits::ToPrimitive;

use crate::numtext::{exact_literal, parse_exact, NumText};
use crate::{KsnError, Result};

/// Discontinuous targets for generated datasets.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Target {
    /// 1 when `x1 >= 1/2`, else 0.
    Step,
    /// Parity of `sum_j floor(m x_j)`.
    Checker(u32),
    /// Pseudo-random values in `[0, 1)` from the fixed mixing function.
    Random(u64),
}

impl Target {
    fn value(&self, x: &[Rational], index: u64) -> String {
        match *self {
            Target::Step => u8::from(x[0] >= Rational::ratio(1, 2)).to_string(),
            Target::Checker(m) => {
                let m = Rational::from_i64(m as i64);
                let total: i64 = x.iter().map(|v| (m.clone() * v).floor().to_integer().to_i64().unwrap_or(0)).sum();
                (total.rem_euclid(2)).to_string()
            }
            Target::Random(seed) => unit(seed, index).to_canonical(),
        }
    }
}

/// A dataset kept as validated text so that each numeric mode can parse it
/// on its own terms.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Dataset {
    d: usize,
    rows: Vec<Vec<String>>,
}

impl Dataset {
    /// All `grid^d` points of the uniform lattice on `[0, 1]^d`, endpoints
    /// included, with `x1` varying slowest.
    pub fn lattice(target: Target, d: usize, grid: usize) -> Result<Self> {
        if d < 2 {
            return Err(KsnError::Args("lattice datasets need d > 1".into()));
        }
        if grid < 2 {
            return Err(KsnError::Args("lattice datasets need grid >= 2".into()));
        }
        let total = (grid as u128).checked_pow(d as u32).filter(|&t| t <= 50_000_000);
        let total = total.ok_or_else(|| KsnError::Args("lattice too large".into()))? as usize;
        let step = Rational::ratio(1, grid as i64 - 1);
        let mut rows = Vec::with_capacity(total);
        for index in 0..total {
            let mut rest = index;
            let mut x = vec![Rational::from_i64(0); d];
            for j in (0..d).rev() {
                x[j] = step.clone() * Rational::from_i64((rest % grid) as i64);
                rest /= grid;
            }
            rows.push(Self::row(&x, target.value(&x, index as u64)));
        }
        Ok(Dataset { d, rows })
    }

    /// `n` pseudo-random points of the unit cube. Coordinates come from the
    /// mixing stream seeded with `!seed`.
    pub fn scattered(target: Target, d: usize, n: usize, seed: u64) -> Result<Self> {
        if d < 2 {
            return Err(KsnError::Args("datasets need d > 1".into()));
        }
        let rows = (0..n)
            .map(|i| {
                let x: Vec<Rational> = (0..d)
                    .map(|j| parse_exact(&unit(!seed, (i * d + j) as u64).to_canonical()).expect("float literal"))
                    .collect();
                Self::row(&x, target.value(&x, i as u64))
            })
            .collect();
        Ok(Dataset { d, rows })
    }

    fn row(x: &[Rational], value: String) -> Vec<String> {
        x.iter().map(exact_literal).chain(std::iter::once(value)).collect()
    }

    pub fn d(&self) -> usize {
        self.d
    }

    pub fn len(&self) -> usize {
        self.rows.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rows.is_empty()
    }

    pub fn rows(&self) -> &[Vec<String>] {
        &self.rows
    }

    /// Appends a copy of row `index`.
    pub fn duplicate_row(&mut self, index: usize) {
        let row = self.rows[index].clone();
        self.rows.push(row);
    }

    pub fn from_csv(text: &str, origin: &str) -> Result<Self> {
        let (d, has_value, rows) = parse_table(text, origin)?;
        if !has_value {
            return Err(KsnError::format(format!("{origin}:1"), "missing target column `f`"));
        }
        let dataset = Dataset { d, rows };
        // Validate every literal once so later parsing cannot fail.
        dataset.sample::<Rational>(origin)?;
        Ok(dataset)
    }

    pub fn read(path: &Path) -> Result<Self> {
        let text = fs::read_to_string(path).map_err(|e| KsnError::io(path, e))?;
        Self::from_csv(&text, &path.display().to_string())
    }

    pub fn to_csv(&self) -> String {
        let mut out = String::new();
        let header: Vec<String> = (1..=self.d).map(|j| format!("x{j}")).chain(["f".to_string()]).collect();
        out.push_str(&header.join(","));
        out.push('\n');
        for row in &self.rows {
            out.push_str(&row.join(","));
            out.push('\n');
        }
        out
    }

    pub fn write(&self, path: &Path) -> Result<()> {
        fs::write(path, self.to_csv()).map_err(|e| KsnError::io(path, e))
    }

    /// Parses the dataset in the numeric mode `S`.
    pub fn sample<S: NumText>(&self, origin: &str) -> Result<SampleSet<S>> {
        let mut points = Vec::with_capacity(self.rows.len());
        let mut values = Vec::with_capacity(self.rows.len());
        for (i, row) in self.rows.iter().enumerate() {
            let line = i + 2;
            points.push(parse_coordinates::<S>(&row[..self.d], origin, line)?);
            values.push(parse_field::<S>(&row[self.d], origin, line, "f")?);
        }
        Ok(SampleSet::new(self.d, points, values)?)
    }
}

/// Points from a CSV with header `x1,...,xd` and an optional `f` column,
/// which is ignored.
pub fn parse_points<S: NumText>(text: &str, origin: &str) -> Result<Vec<Vec<S>>> {
    let (d, _, rows) = parse_table(text, origin)?;
    rows.iter().enumerate().map(|(i, row)| parse_coordinates(&row[..d], origin, i + 2)).collect()
}

/// One inline point such as `0.25,1/3`.
pub fn parse_point<S: NumText>(text: &str) -> Result<Vec<S>> {
    text.split(',')
        .enumerate()
        .map(|(j, field)| {
            S::parse_literal(field).ok_or_else(|| KsnError::Args(format!("invalid coordinate x{}: {field:?}", j + 1)))
        })
        .collect()
}

fn parse_coordinates<S: NumText>(fields: &[String], origin: &str, line: usize) -> Result<Vec<S>> {
    fields
        .iter()
        .enumerate()
        .map(|(j, field)| {
            let v: S = parse_field(field, origin, line, &format!("x{}", j + 1))?;
            if v < S::zero() || v > S::one() {
                return Err(KsnError::format(
                    format!("{origin}:{line}"),
                    format!("x{} = {field} outside [0, 1]", j + 1),
                ));
            }
            Ok(v)
        })
        .collect()
}

fn parse_field<S: NumText>(field: &str, origin: &str, line: usize, column: &str) -> Result<S> {
    S::parse_literal(field).ok_or_else(|| {
        KsnError::format(format!("{origin}:{line}"), format!("invalid number in column {column}: {field:?}"))
    })
}

/// Header check plus raw rows. Returns `(d, has_f_column, rows)`.
fn parse_table(text: &str, origin: &str) -> Result<(usize, bool, Vec<Vec<String>>)> {
    let mut reader = csv::ReaderBuilder::new().has_headers(true).trim(csv::Trim::All).from_reader(text.as_bytes());
    let header = reader.headers().map_err(|e| KsnError::format(format!("{origin}:1"), e.to_string()))?.clone();
    let names: Vec<&str> = header.iter().collect();
    let has_value = names.last() == Some(&"f");
    let d = names.len() - usize::from(has_value);
    let expected = (1..=d).map(|j| format!("x{j}"));
    if d == 0 || !expected.zip(&names).all(|(e, n)| e == *n) {
        return Err(KsnError::format(
            format!("{origin}:1"),
            format!("expected header x1,...,xd[,f], found {:?}", names.join(",")),
        ));
    }
    let mut rows = Vec::new();
    for record in reader.records() {
        let record = record.map_err(|e| {
            let line = e.position().map_or(0, |p| p.line());
            KsnError::format(format!("{origin}:{line}"), e.to_string())
        })?;
        rows.push(record.iter().map(str::to_string).collect());
    }
    Ok((d, has_value, rows))
}
