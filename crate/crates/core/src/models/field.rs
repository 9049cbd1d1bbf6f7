use num_complex::Complex64;

use crate::contour::{derivative, ContourGrid, SampledFunction};
use crate::error::{invalid, Result};
use crate::special::Series;

/// How derivatives of model functions are obtained.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum DerivativeMode {
    /// Exact Taylor jets at every node; any grid.
    #[default]
    Analytic,
    /// Fourth-order finite differences on samples; uniform grids only.
    Fd,
}

impl DerivativeMode {
    pub fn name(self) -> &'static str {
        match self {
            DerivativeMode::Analytic => "analytic",
            DerivativeMode::Fd => "fd",
        }
    }
}

impl std::str::FromStr for DerivativeMode {
    type Err = crate::Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "analytic" => Ok(DerivativeMode::Analytic),
            "fd" => Ok(DerivativeMode::Fd),
            other => Err(invalid(format!("unknown derivative mode '{other}'"))),
        }
    }
}

/// A function on the nodes of a grid, either as Taylor jets or as plain
/// samples.
///
/// Jets keep derivatives exact; samples differentiate by finite differences.
/// Mixed arithmetic falls back to samples.
#[derive(Debug, Clone, PartialEq)]
pub enum Field {
    Jets(Vec<Series>),
    Samples(SampledFunction),
}

impl Field {
    /// Evaluates `f` at every node. The closure receives the real variable
    /// expanded at the node.
    pub fn from_fn(grid: &ContourGrid, mode: DerivativeMode, f: impl Fn(Series) -> Series) -> Field {
        let jets: Vec<Series> = grid
            .nodes()
            .iter()
            .map(|&x| f(Series::variable(Complex64::new(x, 0.0))))
            .collect();
        match mode {
            DerivativeMode::Analytic => Field::Jets(jets),
            DerivativeMode::Fd => Field::Samples(SampledFunction::new(jets.iter().map(Series::value).collect())),
        }
    }

    pub fn mode(&self) -> DerivativeMode {
        match self {
            Field::Jets(_) => DerivativeMode::Analytic,
            Field::Samples(_) => DerivativeMode::Fd,
        }
    }

    pub fn len(&self) -> usize {
        match self {
            Field::Jets(j) => j.len(),
            Field::Samples(s) => s.len(),
        }
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn samples(&self) -> SampledFunction {
        match self {
            Field::Jets(j) => SampledFunction::new(j.iter().map(Series::value).collect()),
            Field::Samples(s) => s.clone(),
        }
    }

    /// Drops the jets, keeping values.
    pub fn to_samples(&self) -> Field {
        Field::Samples(self.samples())
    }

    /// Converts to the representation of `mode`. Samples cannot be lifted to
    /// jets.
    pub fn in_mode(&self, mode: DerivativeMode) -> Result<Field> {
        match (self, mode) {
            (Field::Samples(_), DerivativeMode::Analytic) => {
                Err(invalid("sampled data carries no analytic derivatives"))
            }
            (_, DerivativeMode::Fd) => Ok(self.to_samples()),
            (Field::Jets(_), DerivativeMode::Analytic) => Ok(self.clone()),
        }
    }

    pub fn derivative(&self, grid: &ContourGrid) -> Result<Field> {
        if self.len() != grid.count() {
            return Err(invalid("field is not aligned with the grid"));
        }
        match self {
            Field::Jets(j) => Ok(Field::Jets(j.iter().map(Series::derivative).collect())),
            Field::Samples(s) => Ok(Field::Samples(derivative(s, grid, 1)?)),
        }
    }

    pub fn second_derivative(&self, grid: &ContourGrid) -> Result<Field> {
        match self {
            Field::Jets(_) => self.derivative(grid)?.derivative(grid),
            Field::Samples(s) => {
                if s.len() != grid.count() {
                    return Err(invalid("field is not aligned with the grid"));
                }
                Ok(Field::Samples(derivative(s, grid, 2)?))
            }
        }
    }

    pub fn scale(&self, c: Complex64) -> Field {
        match self {
            Field::Jets(j) => Field::Jets(j.iter().map(|s| s.scale(c)).collect()),
            Field::Samples(s) => Field::Samples(s.scale(c)),
        }
    }

    pub fn conj(&self) -> Field {
        match self {
            Field::Jets(j) => Field::Jets(j.iter().map(Series::conj).collect()),
            Field::Samples(s) => Field::Samples(s.conj()),
        }
    }

    pub fn add(&self, other: &Field) -> Field {
        self.zip(other, |a, b| a + b, |a, b| a + b)
    }

    pub fn sub(&self, other: &Field) -> Field {
        self.zip(other, |a, b| a - b, |a, b| a - b)
    }

    /// Pointwise product.
    pub fn mul(&self, other: &Field) -> Field {
        self.zip(other, |a, b| a * b, |a, b| a * b)
    }

    fn zip(
        &self,
        other: &Field,
        jet: impl Fn(Series, Series) -> Series,
        val: impl Fn(Complex64, Complex64) -> Complex64,
    ) -> Field {
        assert_eq!(self.len(), other.len(), "fields of different length");
        match (self, other) {
            (Field::Jets(a), Field::Jets(b)) => {
                Field::Jets(a.iter().zip(b).map(|(&x, &y)| jet(x, y)).collect())
            }
            _ => {
                let a = self.samples();
                let b = other.samples();
                Field::Samples(SampledFunction::new(
                    a.values().iter().zip(b.values()).map(|(&x, &y)| val(x, y)).collect(),
                ))
            }
        }
    }
}
