//! Tables assembled from stored class databases.

use clap::ValueEnum;
use cliffhier::classify::{
    classify_cycle_structures, count_ae_classes_full, extend_classification, shape_label,
    table_shapes, ClassifyOptions, CycleClassification, PermCensus, TwoSidedMethod,
    MAX_DIRECT_QUBITS,
};
use cliffhier::STATE_INDEX_CONVENTION;
use rayon::prelude::*;
use serde::Serialize;

use crate::cache::{shape_arg, to_sorted_json, Cache};
use crate::{progress, CliError, CliResult};

pub const TABLE2_QUBITS: [usize; 3] = [1, 2, 3];
/// Rows of the cycle table; the last one comes from extension.
pub const TABLE3_QUBITS: [usize; 5] = [1, 2, 3, 4, 5];

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum TableFormat {
    Csv,
    Json,
    Md,
}

#[derive(Serialize)]
struct Table2Row {
    n: usize,
    classes: usize,
    in_ch: usize,
    total_permutations: u64,
}

#[derive(Serialize)]
struct Table3Cell {
    shape: String,
    cell: String,
    conjugation_cell: String,
    two_sided_method: TwoSidedMethod,
    unresolved_pairs: Vec<(String, String)>,
}

#[derive(Serialize)]
struct Table3Row {
    n: usize,
    cells: Vec<Table3Cell>,
}

#[derive(Serialize)]
struct TableDoc<R> {
    table: u8,
    state_index_convention: &'static str,
    columns: Vec<String>,
    rows: Vec<R>,
    /// True when some cell holds classes whose distinctness was not certified.
    flagged: bool,
}

fn census(cache: &Cache, n: usize, compute: bool) -> CliResult<PermCensus> {
    if let Some(c) = cache.load_census(n)? {
        return Ok(c);
    }
    if !compute {
        return Err(CliError::MissingDatabase(format!(
            "no permutation census for n={n}; run `cliffhier classify-perms --qubits {n}`"
        )));
    }
    progress(&format!("computing permutation census for n={n}"));
    let c = count_ae_classes_full(n)?;
    cache.store_census(&c)?;
    Ok(c)
}

pub fn cell(
    cache: &Cache,
    n: usize,
    shape: &[usize],
    compute: bool,
) -> CliResult<CycleClassification> {
    if let Some(c) = cache.load_cell(n, shape)? {
        return Ok(c);
    }
    if !compute {
        let hint = if n <= MAX_DIRECT_QUBITS {
            format!(
                "cliffhier classify-cycles --shape {} --qubits {n}",
                shape_arg(shape)
            )
        } else {
            format!(
                "cliffhier classify-cycles --shape {} --qubits {MAX_DIRECT_QUBITS} --extend-to {n}",
                shape_arg(shape)
            )
        };
        return Err(CliError::MissingDatabase(format!(
            "no class database for n={n}, shape {}; run `{hint}`",
            shape_label(shape)
        )));
    }
    let c = if n <= MAX_DIRECT_QUBITS {
        progress(&format!("classifying n={n}, shape {}", shape_label(shape)));
        classify_cycle_structures(n, shape)?
    } else {
        let prev = cell(cache, n - 1, shape, true)?;
        progress(&format!("extending shape {} to n={n}", shape_label(shape)));
        extend_classification(&prev, &ClassifyOptions::default())?
    };
    cache.store_cell(&c)?;
    Ok(c)
}

fn csv_text(header: Vec<String>, rows: Vec<Vec<String>>) -> CliResult<String> {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(&header)
        .map_err(|e| CliError::Io(e.to_string()))?;
    for r in rows {
        w.write_record(&r)
            .map_err(|e| CliError::Io(e.to_string()))?;
    }
    let bytes = w.into_inner().map_err(|e| CliError::Io(e.to_string()))?;
    let body = String::from_utf8(bytes).map_err(|e| CliError::Io(e.to_string()))?;
    Ok(format!("# {STATE_INDEX_CONVENTION}\n{body}"))
}

fn markdown(header: Vec<String>, rows: Vec<Vec<String>>, notes: &[String]) -> String {
    let mut out = format!("<!-- {STATE_INDEX_CONVENTION} -->\n");
    out += &format!("| {} |\n", header.join(" | "));
    out += &format!("|{}\n", "---|".repeat(header.len()));
    for r in rows {
        out += &format!("| {} |\n", r.join(" | "));
    }
    for n in notes {
        out += &format!("\n{n}\n");
    }
    out
}

pub fn table2(cache: &Cache, format: TableFormat, compute: bool) -> CliResult<String> {
    let mut rows = Vec::new();
    for n in TABLE2_QUBITS {
        let c = census(cache, n, compute)?;
        rows.push(Table2Row {
            n,
            classes: c.classes.len(),
            in_ch: c.num_in_ch(),
            total_permutations: c.total_permutations,
        });
    }
    let header = ["n", "classes", "in_ch"].map(String::from).to_vec();
    let cells = || {
        rows.iter()
            .map(|r| vec![r.n.to_string(), r.classes.to_string(), r.in_ch.to_string()])
            .collect::<Vec<_>>()
    };
    match format {
        TableFormat::Json => to_sorted_json(&TableDoc {
            table: 2,
            state_index_convention: STATE_INDEX_CONVENTION,
            columns: header,
            flagged: false,
            rows,
        }),
        TableFormat::Csv => csv_text(header, cells()),
        TableFormat::Md => Ok(markdown(header, cells(), &[])),
    }
}

pub fn table3(cache: &Cache, format: TableFormat, compute: bool) -> CliResult<String> {
    let shapes = table_shapes();
    // Cells are independent; each shape's column is built bottom-up in parallel.
    let columns: Vec<Vec<CycleClassification>> = shapes
        .par_iter()
        .map(|shape| {
            TABLE3_QUBITS
                .iter()
                .map(|&n| cell(cache, n, shape, compute))
                .collect::<CliResult<Vec<_>>>()
        })
        .collect::<CliResult<_>>()?;
    let mut rows = Vec::new();
    for (i, &n) in TABLE3_QUBITS.iter().enumerate() {
        let mut cells = Vec::new();
        for (shape, column) in shapes.iter().zip(&columns) {
            let c = column[i].clone();
            cells.push(Table3Cell {
                shape: shape_label(shape),
                cell: c.cell(),
                conjugation_cell: c.conjugation_cell(),
                two_sided_method: c.two_sided_method,
                unresolved_pairs: c.unresolved_pairs,
            });
        }
        rows.push(Table3Row { n, cells });
    }
    let flagged = rows
        .iter()
        .flat_map(|r| &r.cells)
        .any(|c| !c.unresolved_pairs.is_empty());
    let mut header = vec!["n".to_string()];
    header.extend(shapes.iter().map(|s| shape_label(s)));
    let text_rows = |mark: &str| {
        rows.iter()
            .map(|r| {
                let mut v = vec![r.n.to_string()];
                v.extend(r.cells.iter().map(|c| {
                    if c.unresolved_pairs.is_empty() {
                        c.cell.clone()
                    } else {
                        format!("{}{mark}", c.cell)
                    }
                }));
                v
            })
            .collect::<Vec<_>>()
    };
    match format {
        TableFormat::Json => to_sorted_json(&TableDoc {
            table: 3,
            state_index_convention: STATE_INDEX_CONVENTION,
            columns: header,
            flagged,
            rows,
        }),
        TableFormat::Csv => csv_text(header, text_rows("*")),
        TableFormat::Md => {
            let mut notes = vec![
                "Cells count two-sided affine classes: in CH / total; 0 marks an empty cell."
                    .to_string(),
            ];
            if flagged {
                notes.push("* some classes in this cell are not certified distinct.".to_string());
            }
            Ok(markdown(header, text_rows("*"), &notes))
        }
    }
}
