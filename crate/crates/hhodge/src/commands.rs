//! The JSON-producing bodies of the subcommands.

use std::fs;
use std::path::Path;

use hhodge_core::line::{build_matrix_line, evaluate_line, line_budget, scale_matrix_line};
use hhodge_core::series::{hodge_onepoint, hurwitz_hodge_onepoint, initial_onepoint};
use hhodge_core::surface::{
    build_matrix_surface, evaluate_surface, scale_matrix_surface, surface_budget, MatrixMode,
};
use hhodge_core::{GammaTable, IntegralSpec, Matrix, Rational, StackyType, Theory, ZPolySeries};
use serde::{Deserialize, Serialize};

use crate::error::{usage, CliError, Result};

/// `{"N", "g", "n", "k", "l"}` plus an optional one-point `"initial"`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SpecInput {
    #[serde(rename = "N")]
    pub modulus: u32,
    pub g: u32,
    #[serde(default)]
    pub n: Option<Vec<u32>>,
    #[serde(default)]
    pub k: Vec<u32>,
    #[serde(default)]
    pub l: Vec<u32>,
    #[serde(default)]
    pub initial: Option<Rational>,
}

impl SpecInput {
    /// Accepts inline JSON (starting with `{`) or a path to a JSON file.
    pub fn load(arg: &str) -> Result<Self> {
        let text = if arg.trim_start().starts_with('{') {
            arg.to_string()
        } else {
            fs::read_to_string(Path::new(arg)).map_err(|source| CliError::Io {
                path: arg.into(),
                source,
            })?
        };
        serde_json::from_str(&text).map_err(|source| CliError::Json {
            context: "integral spec".into(),
            source,
        })
    }

    pub fn stacky(&self) -> Result<StackyType> {
        match &self.n {
            Some(n) => Ok(StackyType::new(self.modulus, n.clone())?),
            None => Ok(StackyType::empty(self.modulus)?),
        }
    }

    pub fn spec(&self) -> IntegralSpec {
        IntegralSpec::new(self.g, self.l.clone(), self.k.clone())
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct IntegralOutput {
    pub value: Rational,
    pub admissible: bool,
    pub dim_ok: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub c: Option<Vec<Rational>>,
}

pub fn cmd_integral(
    theory: Theory,
    input: &SpecInput,
    tables: &GammaTable,
    initial: Option<&Rational>,
    mode: MatrixMode,
) -> Result<IntegralOutput> {
    let x = input.stacky()?;
    let spec = input.spec();
    let initial = initial.or(input.initial.as_ref());
    Ok(match theory {
        Theory::Line => {
            let e = evaluate_line(&x, &spec, tables, initial)?;
            IntegralOutput {
                value: e.value,
                admissible: e.admissible,
                dim_ok: e.dim_ok,
                c: e.coeffs.map(|c| c.0),
            }
        }
        Theory::Surface => {
            let e = evaluate_surface(&x, &spec, tables, initial, mode)?;
            IntegralOutput {
                value: e.value,
                admissible: e.admissible,
                dim_ok: e.dim_ok,
                c: e.coeffs.map(|c| c.0),
            }
        }
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, clap::ValueEnum)]
pub enum SeriesName {
    /// `((t/2)/sin(t/2))^{z+1}`
    Hodge,
    /// `(1/N) ((Nt/2)/sin(Nt/2))^z (t/2)/sin(t/2)`
    Hurwitz,
    /// The difference of the two, whose `z¹` part holds the line initial values.
    Initial,
}

/// `(t-degree, z-degree, coefficient)`.
pub type SeriesTriple = (usize, usize, Rational);

pub fn series_triples(s: &ZPolySeries) -> Vec<SeriesTriple> {
    let mut out = Vec::new();
    for (t, poly) in s.coeffs().iter().enumerate() {
        let cs = poly.coeffs();
        if cs.is_empty() {
            out.push((t, 0, Rational::zero()));
        }
        for (z, c) in cs.iter().enumerate() {
            out.push((t, z, c.clone()));
        }
    }
    out
}

pub fn cmd_series(
    name: SeriesName,
    modulus: u32,
    order: usize,
    max_order: usize,
) -> Result<Vec<SeriesTriple>> {
    if order < 2 || order > max_order {
        return Err(usage(format!(
            "order must lie in 2..={max_order}, got {order}"
        )));
    }
    let s = match name {
        SeriesName::Hodge => hodge_onepoint(order)?,
        SeriesName::Hurwitz => hurwitz_hodge_onepoint(modulus, order)?,
        SeriesName::Initial => initial_onepoint(modulus, order)?,
    };
    Ok(series_triples(&s))
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct MatrixOutput {
    pub a: Rational,
    pub matrix: Vec<Vec<Rational>>,
    pub determinant: Rational,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub scaled: Option<Vec<Vec<Rational>>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub matrix_mode: Option<MatrixMode>,
}

fn matrix_output(
    m: Matrix,
    a: Rational,
    scaled: Option<Matrix>,
    mode: Option<MatrixMode>,
) -> Result<MatrixOutput> {
    Ok(MatrixOutput {
        determinant: m.determinant()?,
        a,
        matrix: m.to_rows(),
        scaled: scaled.map(|s| s.to_rows()),
        matrix_mode: mode,
    })
}

/// The unscaled matrix, its determinant and, when `a` is a nonnegative
/// integer, the row-scaled matrix.
pub fn cmd_matrix(
    theory: Theory,
    genus: u32,
    x: &StackyType,
    mode: MatrixMode,
) -> Result<MatrixOutput> {
    if x.total() == 0 {
        return Err(usage("the matrix needs at least one stacky point"));
    }
    match theory {
        Theory::Line => {
            let a = line_budget(genus, x);
            let m = build_matrix_line(x, &a);
            let scaled = scale_matrix_line(&m, genus, x, &a).ok();
            matrix_output(m, a, scaled, None)
        }
        Theory::Surface => {
            let a = surface_budget(genus, x);
            let m = build_matrix_surface(x, &a, mode);
            let scaled = match scale_matrix_surface(&m, genus, x, &a) {
                Ok(s) => Some(s),
                Err(e @ hhodge_core::Error::DegenerateWeight { .. }) => return Err(e.into()),
                Err(_) => None,
            };
            matrix_output(m, a, scaled, Some(mode))
        }
    }
}
