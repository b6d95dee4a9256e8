//! OFF mesh export: one triangulated hull per chain piece, positive pieces
//! in `BASE.pos.off`, negative pieces in `BASE.neg.off`. Output is
//! byte-stable: vertices and faces come out in a canonical order.

use std::fs;
use std::path::Path;

use anyhow::{bail, Context, Result};
use polydd::chain::Chain;
use polydd::geometry::{hull_mesh_3d, Mesh};
use polydd::rational::decimal_string;
use polydd::Error;

pub fn parse_projection(spec: &str, dim: usize) -> Result<[usize; 3]> {
    let coords: Vec<usize> = spec
        .split(',')
        .map(|t| {
            t.trim()
                .parse::<usize>()
                .context("projection needs 1-based coordinates")
        })
        .collect::<Result<_>>()?;
    if coords.len() != 3 || coords.iter().any(|&c| c == 0 || c > dim) {
        bail!("projection must name three coordinates in 1..={dim}");
    }
    Ok([coords[0] - 1, coords[1] - 1, coords[2] - 1])
}

pub fn write_off(chain: &Chain, projection: Option<[usize; 3]>, base: &str) -> Result<()> {
    let dim = chain.space().dim();
    let pick: [usize; 3] = match projection {
        Some(p) => p,
        None => {
            if dim != 3 {
                return Err(Error::DimensionUnsupported { got: dim }.into());
            }
            [0, 1, 2]
        }
    };
    let mut positives: Vec<(i64, Mesh)> = Vec::new();
    let mut negatives: Vec<(i64, Mesh)> = Vec::new();
    for (coeff, piece) in chain.terms() {
        let points: Vec<Vec<polydd::Rat>> = piece
            .points()
            .iter()
            .map(|p| {
                let full = chain.to_rational(p);
                pick.iter().map(|&k| full[k]).collect()
            })
            .collect();
        let mesh = hull_mesh_3d(&points)?;
        if *coeff > 0 {
            positives.push((*coeff, mesh));
        } else {
            negatives.push((*coeff, mesh));
        }
    }
    write_mesh_file(&format!("{base}.pos.off"), &positives)?;
    if !negatives.is_empty() {
        write_mesh_file(&format!("{base}.neg.off"), &negatives)?;
    }
    Ok(())
}

fn write_mesh_file(path: &str, meshes: &[(i64, Mesh)]) -> Result<()> {
    let total_v: usize = meshes.iter().map(|(_, m)| m.vertices.len()).sum();
    let total_f: usize = meshes.iter().map(|(_, m)| m.triangles.len()).sum();
    let mut out = String::from("OFF\n");
    out.push_str(&format!("# {} piece(s)\n", meshes.len()));
    out.push_str(&format!("{total_v} {total_f} 0\n"));
    for (idx, (coeff, mesh)) in meshes.iter().enumerate() {
        out.push_str(&format!(
            "# piece {} vertices (coefficient {coeff})\n",
            idx + 1
        ));
        for v in &mesh.vertices {
            let coords: Vec<String> = v.iter().map(decimal_string).collect();
            out.push_str(&coords.join(" "));
            out.push('\n');
        }
    }
    let mut offset = 0usize;
    for (idx, (_, mesh)) in meshes.iter().enumerate() {
        out.push_str(&format!("# piece {} faces\n", idx + 1));
        for t in &mesh.triangles {
            out.push_str(&format!(
                "3 {} {} {}\n",
                t[0] + offset,
                t[1] + offset,
                t[2] + offset
            ));
        }
        offset += mesh.vertices.len();
    }
    if let Some(parent) = Path::new(path).parent() {
        if !parent.as_os_str().is_empty() {
            fs::create_dir_all(parent)?;
        }
    }
    fs::write(path, out).with_context(|| format!("writing {path}"))?;
    Ok(())
}
