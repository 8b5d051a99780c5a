//! JSON file formats.
//!
//! Function file: `{"n": int, "mode": "exact"|"float", "entries":
//! [{"perm": [1-based images], "value": "decimal"}]}`.
//!
//! Marginal file: `{"n": int, "shape": [parts], "cells": [[row, col,
//! "decimal"], …]}` with rows and columns 1-based and cells sorted by
//! (row, col). Marginal files carry no mode; the reader picks one.
//!
//! Values are strings so rationals round-trip losslessly (`"3/7"` when the
//! value has no finite decimal form).

use std::fs;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::marginals::{MarginalMatrix, SparseSupportFunction};
use crate::scalar::{Scalar, ValueMode};
use crate::symgroup::{LambdaShape, Permutation};

#[derive(Serialize, Deserialize)]
struct FunctionEntryRaw {
    perm: Vec<u32>,
    value: String,
}

#[derive(Serialize, Deserialize)]
struct FunctionFileRaw {
    n: u32,
    mode: ValueMode,
    entries: Vec<FunctionEntryRaw>,
}

#[derive(Serialize, Deserialize)]
struct MarginalFileRaw {
    n: u32,
    shape: Vec<u32>,
    cells: Vec<(u64, u64, String)>,
}

fn read_json<T: for<'de> Deserialize<'de>>(path: &Path) -> Result<T> {
    let text =
        fs::read_to_string(path).map_err(|e| Error::Io(format!("{}: {e}", path.display())))?;
    serde_json::from_str(&text)
        .map_err(|e| Error::MalformedFile(format!("{}: {e}", path.display())))
}

fn write_json<T: Serialize>(path: &Path, value: &T) -> Result<()> {
    let mut text =
        serde_json::to_string_pretty(value).map_err(|e| Error::MalformedFile(e.to_string()))?;
    text.push('\n');
    fs::write(path, text).map_err(|e| Error::Io(format!("{}: {e}", path.display())))
}

pub fn load_function(path: &Path) -> Result<SparseSupportFunction> {
    let raw: FunctionFileRaw = read_json(path)?;
    let mut pairs = Vec::with_capacity(raw.entries.len());
    for entry in raw.entries {
        let perm = Permutation::from_images(entry.perm)?;
        let value = Scalar::parse(&entry.value, raw.mode)?;
        pairs.push((perm, value));
    }
    SparseSupportFunction::new(raw.n, raw.mode, pairs)
}

pub fn save_function(path: &Path, f: &SparseSupportFunction) -> Result<()> {
    let raw = FunctionFileRaw {
        n: f.n(),
        mode: f.mode(),
        entries: f
            .entries()
            .iter()
            .map(|(perm, value)| FunctionEntryRaw {
                perm: perm.images().to_vec(),
                value: value.render(),
            })
            .collect(),
    };
    write_json(path, &raw)
}

pub fn load_marginal(path: &Path, mode: ValueMode, cap: u64) -> Result<MarginalMatrix> {
    let raw: MarginalFileRaw = read_json(path)?;
    let shape = LambdaShape::new(raw.shape)?;
    if shape.n() != raw.n {
        return Err(Error::MalformedFile(format!(
            "{}: shape sums to {}, file says n={}",
            path.display(),
            shape.n(),
            raw.n
        )));
    }
    let mut cells = Vec::with_capacity(raw.cells.len());
    for (row, col, value) in raw.cells {
        if row == 0 || col == 0 {
            return Err(Error::MalformedFile(format!(
                "{}: cell indices are 1-based, got ({row}, {col})",
                path.display()
            )));
        }
        cells.push((row - 1, col - 1, Scalar::parse(&value, mode)?));
    }
    MarginalMatrix::from_cells(shape, mode, cap, cells)
}

pub fn save_marginal(path: &Path, m: &MarginalMatrix) -> Result<()> {
    let raw = MarginalFileRaw {
        n: m.shape().n(),
        shape: m.shape().parts().to_vec(),
        // BTreeMap iteration is already (row, col)-sorted.
        cells: m
            .iter()
            .map(|(&(i, j), v)| (i + 1, j + 1, v.render()))
            .collect(),
    };
    write_json(path, &raw)
}
