//! Scene file formats: ESRI ASCII grid DEMs and JSON footprint sets.

use super::{DemGrid, Footprint, FootprintSet};
use crate::error::{Error, Result};
use crate::geom::{ring_signed_area2, Vec2};
use serde::{Deserialize, Serialize};
use std::collections::BTreeSet;
use std::fmt::Write as _;
use std::path::Path;

/// Save a DEM as an ESRI ASCII grid (north-up rows).
pub fn save_dem(path: &Path, dem: &DemGrid) -> Result<()> {
    dem.validate()?;
    let mut out = String::new();
    let _ = writeln!(out, "ncols {}", dem.ncols);
    let _ = writeln!(out, "nrows {}", dem.nrows);
    let _ = writeln!(out, "xllcorner {}", dem.origin_x);
    let _ = writeln!(out, "yllcorner {}", dem.origin_y);
    let _ = writeln!(out, "cellsize {}", dem.cellsize);
    let _ = writeln!(out, "NODATA_value {}", dem.nodata);
    // File rows run north to south; internal rows run south to north.
    for row in (0..dem.nrows).rev() {
        for col in 0..dem.ncols {
            if col > 0 {
                out.push(' ');
            }
            let _ = write!(out, "{}", dem.height(col, row));
        }
        out.push('\n');
    }
    std::fs::write(path, out).map_err(|e| Error::io(path.display().to_string(), e))
}

/// Load an ESRI ASCII grid DEM.
pub fn load_dem(path: &Path) -> Result<DemGrid> {
    let text =
        std::fs::read_to_string(path).map_err(|e| Error::io(path.display().to_string(), e))?;
    let mut lines = text.lines().enumerate();

    let mut header: Vec<(String, f64, usize)> = Vec::new();
    let mut data_tokens: Vec<(f64, usize)> = Vec::new();
    let header_keys = [
        "ncols",
        "nrows",
        "xllcorner",
        "yllcorner",
        "cellsize",
        "nodata_value",
    ];
    for (idx, line) in &mut lines {
        let lineno = idx + 1;
        let mut tokens = line.split_whitespace();
        let Some(first) = tokens.next() else { continue };
        let key = first.to_ascii_lowercase();
        if header.len() < 6 && header_keys.contains(&key.as_str()) {
            let value_tok = tokens.next().ok_or(Error::DemParse {
                line: lineno,
                msg: format!("header field `{first}` has no value"),
            })?;
            let value: f64 = value_tok.parse().map_err(|_| Error::DemParse {
                line: lineno,
                msg: format!("header field `{first}` has non-numeric value `{value_tok}`"),
            })?;
            header.push((key, value, lineno));
            continue;
        }
        // Data row.
        for tok in std::iter::once(first).chain(tokens) {
            let v: f64 = tok.parse().map_err(|_| Error::DemParse {
                line: lineno,
                msg: format!("non-numeric cell value `{tok}`"),
            })?;
            data_tokens.push((v, lineno));
        }
    }

    let get = |name: &str| -> Result<f64> {
        header
            .iter()
            .find(|(k, _, _)| k == name)
            .map(|(_, v, _)| *v)
            .ok_or(Error::DemParse {
                line: header.len() + 1,
                msg: format!("missing header field `{name}`"),
            })
    };
    let ncols = get("ncols")? as usize;
    let nrows = get("nrows")? as usize;
    let origin_x = get("xllcorner")?;
    let origin_y = get("yllcorner")?;
    let cellsize = get("cellsize")?;
    let nodata = get("nodata_value")?;

    if data_tokens.len() != ncols * nrows {
        let line = data_tokens.last().map(|&(_, l)| l).unwrap_or(7);
        return Err(Error::DemParse {
            line,
            msg: format!(
                "expected {} cell values, found {}",
                ncols * nrows,
                data_tokens.len()
            ),
        });
    }

    // Flip from north-up file rows to south-up internal rows.
    let mut heights = vec![0.0; ncols * nrows];
    for (i, &(v, _)) in data_tokens.iter().enumerate() {
        let file_row = i / ncols;
        let col = i % ncols;
        let row = nrows - 1 - file_row;
        heights[row * ncols + col] = v;
    }
    let dem = DemGrid {
        ncols,
        nrows,
        origin_x,
        origin_y,
        cellsize,
        nodata,
        heights,
    };
    dem.validate()?;
    Ok(dem)
}

#[derive(Serialize, Deserialize)]
struct FootprintRecord {
    id: String,
    ring: Vec<[f64; 2]>,
    #[serde(skip_serializing_if = "Option::is_none")]
    gt_height: Option<f64>,
}

/// Save footprints as a JSON array of `{id, ring, gt_height}` records.
pub fn save_footprints(path: &Path, footprints: &FootprintSet) -> Result<()> {
    let records: Vec<FootprintRecord> = footprints
        .iter()
        .map(|f| FootprintRecord {
            id: f.id.clone(),
            ring: f.ring.iter().map(|v| [v.x, v.y]).collect(),
            gt_height: f.gt_height,
        })
        .collect();
    let json = serde_json::to_string_pretty(&records)
        .map_err(|e| Error::Other(format!("footprint serialization: {e}")))?;
    std::fs::write(path, json).map_err(|e| Error::io(path.display().to_string(), e))
}

/// Load footprints from JSON, normalizing rings to counter-clockwise order.
pub fn load_footprints(path: &Path) -> Result<FootprintSet> {
    let text =
        std::fs::read_to_string(path).map_err(|e| Error::io(path.display().to_string(), e))?;
    let records: Vec<FootprintRecord> = serde_json::from_str(&text)
        .map_err(|e| Error::Footprint(format!("{}: {e}", path.display())))?;

    let mut seen = BTreeSet::new();
    let mut out = Vec::with_capacity(records.len());
    for rec in records {
        if !seen.insert(rec.id.clone()) {
            return Err(Error::Footprint(format!("duplicate footprint id `{}`", rec.id)));
        }
        let mut ring: Vec<Vec2> = rec.ring.iter().map(|&[x, y]| Vec2::new(x, y)).collect();
        if ring.len() < 3 {
            return Err(Error::Footprint(format!(
                "footprint {} has {} vertices, need at least 3",
                rec.id,
                ring.len()
            )));
        }
        // Normalize to CCW; vertex order within the cycle is preserved.
        if ring_signed_area2(&ring) < 0.0 {
            ring.reverse();
        }
        let fp = Footprint {
            id: rec.id,
            ring,
            gt_height: rec.gt_height,
        };
        fp.validate()?;
        out.push(fp);
    }
    Ok(out)
}
