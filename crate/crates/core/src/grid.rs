//! Structured-mesh bridge data model.
//!
//! A [`Mesh`] is a single-block 2D structured grid carrying any number of
//! named [`Field`]s. Values are stored row-major, element `(i, j)` at flat
//! index `i * ny1 + j`.

use indexmap::IndexMap;
use num_complex::Complex;

use crate::error::{Error, Result};
use crate::scalar::Scalar;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum FieldKind {
    Real,
    Complex,
}

impl std::fmt::Display for FieldKind {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            FieldKind::Real => "real",
            FieldKind::Complex => "complex",
        })
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum FieldData<T> {
    Real(Vec<T>),
    Complex(Vec<Complex<T>>),
}

impl<T> FieldData<T> {
    pub fn len(&self) -> usize {
        match self {
            FieldData::Real(v) => v.len(),
            FieldData::Complex(v) => v.len(),
        }
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn kind(&self) -> FieldKind {
        match self {
            FieldData::Real(_) => FieldKind::Real,
            FieldData::Complex(_) => FieldKind::Complex,
        }
    }
}

/// Named real or complex array on an `ny0 x ny1` grid.
#[derive(Debug, Clone, PartialEq)]
pub struct Field<T> {
    name: String,
    ny0: usize,
    ny1: usize,
    data: FieldData<T>,
}

impl<T: Scalar> Field<T> {
    pub fn new(
        name: impl Into<String>,
        ny0: usize,
        ny1: usize,
        data: FieldData<T>,
    ) -> Result<Self> {
        let name = name.into();
        if name.is_empty() {
            return Err(Error::config("field name must be non-empty"));
        }
        check_dims(ny0, ny1)?;
        if data.len() != ny0 * ny1 {
            return Err(Error::dimension(format!(
                "field \"{name}\" has {} values, expected {ny0}x{ny1} = {}",
                data.len(),
                ny0 * ny1
            )));
        }
        let field = Field {
            name,
            ny0,
            ny1,
            data,
        };
        field.check_finite()?;
        Ok(field)
    }

    pub fn real(name: impl Into<String>, ny0: usize, ny1: usize, values: Vec<T>) -> Result<Self> {
        Self::new(name, ny0, ny1, FieldData::Real(values))
    }

    pub fn complex(
        name: impl Into<String>,
        ny0: usize,
        ny1: usize,
        values: Vec<Complex<T>>,
    ) -> Result<Self> {
        Self::new(name, ny0, ny1, FieldData::Complex(values))
    }

    /// Builds a real field by evaluating `f(i, j)` at every grid point.
    pub fn from_fn(
        name: impl Into<String>,
        ny0: usize,
        ny1: usize,
        mut f: impl FnMut(usize, usize) -> T,
    ) -> Result<Self> {
        let mut values = Vec::with_capacity(ny0 * ny1);
        for i in 0..ny0 {
            for j in 0..ny1 {
                values.push(f(i, j));
            }
        }
        Self::real(name, ny0, ny1, values)
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn ny0(&self) -> usize {
        self.ny0
    }

    pub fn ny1(&self) -> usize {
        self.ny1
    }

    pub fn dims(&self) -> (usize, usize) {
        (self.ny0, self.ny1)
    }

    pub fn kind(&self) -> FieldKind {
        self.data.kind()
    }

    pub fn data(&self) -> &FieldData<T> {
        &self.data
    }

    pub fn into_data(self) -> FieldData<T> {
        self.data
    }

    pub fn as_real(&self) -> Result<&[T]> {
        match &self.data {
            FieldData::Real(v) => Ok(v),
            FieldData::Complex(_) => Err(Error::Kind(format!(
                "field \"{}\" is complex, expected real",
                self.name
            ))),
        }
    }

    pub fn as_complex(&self) -> Result<&[Complex<T>]> {
        match &self.data {
            FieldData::Complex(v) => Ok(v),
            FieldData::Real(_) => Err(Error::Kind(format!(
                "field \"{}\" is real, expected complex",
                self.name
            ))),
        }
    }

    pub fn renamed(mut self, name: impl Into<String>) -> Result<Self> {
        let name = name.into();
        if name.is_empty() {
            return Err(Error::config("field name must be non-empty"));
        }
        self.name = name;
        Ok(self)
    }

    /// Drops the imaginary part of a complex field; real fields are returned as is.
    pub fn real_part(&self) -> Field<T> {
        let data = match &self.data {
            FieldData::Real(v) => FieldData::Real(v.clone()),
            FieldData::Complex(v) => FieldData::Real(v.iter().map(|z| z.re).collect()),
        };
        Field {
            name: self.name.clone(),
            ny0: self.ny0,
            ny1: self.ny1,
            data,
        }
    }

    /// Applies `f` to the raw storage and re-validates finiteness.
    pub(crate) fn update(&mut self, f: impl FnOnce(&mut FieldData<T>)) -> Result<()> {
        f(&mut self.data);
        self.check_finite()
    }

    fn check_finite(&self) -> Result<()> {
        let finite = match &self.data {
            FieldData::Real(v) => v.iter().all(|x| x.is_finite()),
            FieldData::Complex(v) => v.iter().all(|z| z.re.is_finite() && z.im.is_finite()),
        };
        if finite {
            Ok(())
        } else {
            Err(Error::NonFinite(self.name.clone()))
        }
    }
}

/// Promotes a real field to complex with zero imaginary parts.
pub fn to_complex<T: Scalar>(field: &Field<T>) -> Result<Field<T>> {
    let values = field.as_real()?;
    Ok(Field {
        name: field.name.clone(),
        ny0: field.ny0,
        ny1: field.ny1,
        data: FieldData::Complex(values.iter().map(|&v| Complex::new(v, T::zero())).collect()),
    })
}

/// Single-block structured mesh: grid dimensions plus an ordered set of fields.
#[derive(Debug, Clone, PartialEq)]
pub struct Mesh<T> {
    name: String,
    ny0: usize,
    ny1: usize,
    fields: IndexMap<String, Field<T>>,
}

impl<T: Scalar> Mesh<T> {
    pub fn new(name: impl Into<String>, ny0: usize, ny1: usize) -> Result<Self> {
        check_dims(ny0, ny1)?;
        Ok(Mesh {
            name: name.into(),
            ny0,
            ny1,
            fields: IndexMap::new(),
        })
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn ny0(&self) -> usize {
        self.ny0
    }

    pub fn ny1(&self) -> usize {
        self.ny1
    }

    pub fn dims(&self) -> (usize, usize) {
        (self.ny0, self.ny1)
    }

    pub fn len(&self) -> usize {
        self.fields.len()
    }

    pub fn is_empty(&self) -> bool {
        self.fields.is_empty()
    }

    pub fn field_names(&self) -> impl Iterator<Item = &str> {
        self.fields.keys().map(String::as_str)
    }

    pub fn fields(&self) -> impl Iterator<Item = &Field<T>> {
        self.fields.values()
    }

    pub fn add_field(&mut self, field: Field<T>) -> Result<()> {
        if field.dims() != self.dims() {
            return Err(Error::dimension(format!(
                "field \"{}\" is {}x{} but mesh \"{}\" is {}x{}",
                field.name, field.ny0, field.ny1, self.name, self.ny0, self.ny1
            )));
        }
        if self.fields.contains_key(&field.name) {
            return Err(Error::NameCollision(field.name));
        }
        self.fields.insert(field.name.clone(), field);
        Ok(())
    }

    pub fn with_field(mut self, field: Field<T>) -> Result<Self> {
        self.add_field(field)?;
        Ok(self)
    }

    pub fn get_field(&self, name: &str) -> Result<&Field<T>> {
        self.fields.get(name).ok_or_else(|| self.missing(name))
    }

    pub(crate) fn get_field_mut(&mut self, name: &str) -> Result<&mut Field<T>> {
        if !self.fields.contains_key(name) {
            return Err(self.missing(name));
        }
        Ok(self.fields.get_mut(name).expect("checked above"))
    }

    /// Replaces an existing field in place, keeping its position in the mesh.
    pub fn replace_field(&mut self, field: Field<T>) -> Result<Field<T>> {
        if field.dims() != self.dims() {
            return Err(Error::dimension(format!(
                "replacement \"{}\" is {}x{} but mesh is {}x{}",
                field.name, field.ny0, field.ny1, self.ny0, self.ny1
            )));
        }
        let slot = self.get_field_mut(&field.name)?;
        Ok(std::mem::replace(slot, field))
    }

    fn missing(&self, array: &str) -> Error {
        Error::MissingArray {
            mesh: self.name.clone(),
            array: array.to_string(),
        }
    }
}

fn check_dims(ny0: usize, ny1: usize) -> Result<()> {
    if ny0 == 0 || ny1 == 0 {
        return Err(Error::dimension(format!(
            "grid dimensions must be positive, got {ny0}x{ny1}"
        )));
    }
    Ok(())
}

/// A rank's contiguous block of global rows.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Slab {
    pub local_n0: usize,
    pub local_0_start: usize,
}

impl Slab {
    pub fn rows(&self) -> std::ops::Range<usize> {
        self.local_0_start..self.local_0_start + self.local_n0
    }
}

/// Block row distribution of `ny0` rows over `ranks`; the first
/// `ny0 % ranks` ranks take one extra row.
pub fn local_slab(ny0: usize, ranks: usize, rank: usize) -> Result<Slab> {
    if ranks == 0 || rank >= ranks {
        return Err(Error::Rank { rank, ranks });
    }
    let base = ny0 / ranks;
    let extra = ny0 % ranks;
    let local_n0 = base + usize::from(rank < extra);
    let local_0_start = rank * base + rank.min(extra);
    Ok(Slab {
        local_n0,
        local_0_start,
    })
}

/// All slabs of a decomposition, ordered by rank.
pub fn slabs(ny0: usize, ranks: usize) -> Result<Vec<Slab>> {
    (0..ranks).map(|r| local_slab(ny0, ranks, r)).collect()
}
