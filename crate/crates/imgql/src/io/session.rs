//! Session driver: load, expand, check, write outputs.

use std::path::{Path, PathBuf};
use std::sync::Arc;
use std::time::Instant;

use crate::checker::Evaluator;
use crate::error::{EvalError, LoadError, Result};
use crate::lang::{self, ast::ModelDecl};
use crate::model::Model;
use crate::space::{Adjacency, GridSpace, PointSet};

use super::{read_volume, write_nifti, write_overlay_png, Volume, VolumeData};

/// Options of a session run.
#[derive(Debug, Clone)]
pub struct SessionOptions {
    /// Adjacency relation of the session's closure space (and of the
    /// chamfer distance transform).
    pub adjacency: Adjacency,
    /// Directory output files are written to. Defaults to the current
    /// working directory.
    pub out_dir: Option<PathBuf>,
}

impl Default for SessionOptions {
    fn default() -> Self {
        SessionOptions {
            adjacency: Adjacency::Orthodiagonal,
            out_dir: None,
        }
    }
}

/// One evaluated `Check` directive.
#[derive(Debug, Clone)]
pub struct CheckOutcome {
    pub label: u16,
    /// The formula as printed in the session file.
    pub source: String,
    pub points: usize,
    pub millis: f64,
    pub region: Arc<PointSet>,
}

/// Everything a session run produced.
#[derive(Debug)]
pub struct SessionReport {
    pub outcomes: Vec<CheckOutcome>,
    /// Path of the label volume, when an `Output` declaration was present
    /// and at least one `Check` ran.
    pub label_volume: Option<PathBuf>,
    /// Path of the RGB overlay (2D inputs only).
    pub overlay: Option<PathBuf>,
}

/// Builds a model from a `Model` declaration: one channel per binding.
/// All volumes must agree on dimensions and spacing; nothing is
/// resampled.
pub fn load_model(
    decl: &ModelDecl,
    base_dir: &Path,
    adjacency: Adjacency,
) -> Result<(Model, Volume)> {
    if decl.kind != "med" {
        return Err(LoadError::UnsupportedModelKind {
            kind: decl.kind.clone(),
        }
        .into());
    }
    let mut volumes: Vec<(String, Volume)> = Vec::new();
    for (name, file) in &decl.bindings {
        let path = base_dir.join(file);
        let vol = read_volume(&path)?;
        volumes.push((name.clone(), vol));
    }
    let (first_name, first) = &volumes[0];
    let mismatched: Vec<String> = volumes
        .iter()
        .filter(|(_, v)| v.dims != first.dims || v.spacing != first.spacing)
        .map(|(n, v)| {
            format!(
                "{n} is {:?} at spacing {:?} but {first_name} is {:?} at spacing {:?}",
                v.dims, v.spacing, first.dims, first.spacing
            )
        })
        .collect();
    if !mismatched.is_empty() {
        return Err(LoadError::GridMismatch {
            details: mismatched.join("; "),
        }
        .into());
    }

    let space = Arc::new(GridSpace::new(&first.dims, &first.spacing, adjacency)?);
    let mut model = Model::new(space);
    for (name, vol) in &volumes {
        model.attach_channel(name.clone(), vol.attribute_values())?;
    }
    let base = volumes.swap_remove(0).1;
    Ok((model, base))
}

/// Runs a session file end to end: parse, load, expand, evaluate every
/// `Check` in source order with a shared cache, and write the label
/// volume (and, for 2D inputs, an RGB overlay). Later checks overwrite
/// earlier labels where regions overlap.
pub fn run_session(session_path: &Path, opts: &SessionOptions) -> Result<SessionReport> {
    let text = std::fs::read_to_string(session_path).map_err(|e| LoadError::Io {
        path: session_path.to_path_buf(),
        source: e,
    })?;
    let session = lang::parse(&text)?;
    let decl = session.model.as_ref().ok_or(EvalError::NoModel)?;
    let base_dir = session_path.parent().unwrap_or(Path::new("."));
    let (model, base_volume) = load_model(decl, base_dir, opts.adjacency)?;

    let attrs: Vec<String> = model.channel_names().map(String::from).collect();
    let expanded = lang::expand_session(&session, Some(&attrs))?;

    let mut labels: Vec<u16> = vec![0; model.space().len()];
    let mut outcomes = Vec::new();
    let mut evaluator = Evaluator::new(&model);
    for (check, decl) in expanded.iter().zip(&session.checks) {
        let label: u16 = check.label.trim().parse().ok().filter(|&l| l > 0).ok_or_else(|| {
            EvalError::Parameter(format!(
                "Check label \"{}\" must be an integer in 1..=65535 (0 marks unlabeled points)",
                check.label
            ))
        })?;
        let start = Instant::now();
        let region = evaluator.check(&check.formula)?;
        let millis = start.elapsed().as_secs_f64() * 1e3;
        for idx in region.iter() {
            labels[idx] = label;
        }
        outcomes.push(CheckOutcome {
            label,
            source: check_source(&decl.expr),
            points: region.count(),
            millis,
            region: region.clone(),
        });
    }

    let mut report = SessionReport {
        outcomes,
        label_volume: None,
        overlay: None,
    };
    if let Some(output) = &session.output {
        if !session.checks.is_empty() {
            let out_dir = opts
                .out_dir
                .clone()
                .unwrap_or_else(|| PathBuf::from("."));
            std::fs::create_dir_all(&out_dir).map_err(|e| LoadError::Io {
                path: out_dir.clone(),
                source: e,
            })?;
            let mut label_path = out_dir.join(&output.path);
            if label_path.extension().and_then(|e| e.to_str()) != Some("nii") {
                label_path.set_extension("nii");
            }
            let vol = Volume::new(
                model.space().dims().to_vec(),
                model.space().spacing().to_vec(),
                VolumeData::U16(labels.clone()),
            )?;
            write_nifti(&label_path, &vol)?;
            report.label_volume = Some(label_path.clone());

            if model.space().ndim() == 2 {
                let overlay_path = label_path.with_extension("png");
                write_overlay_png(
                    &overlay_path,
                    model.space().dims(),
                    &base_volume.attribute_values(),
                    &labels,
                )?;
                report.overlay = Some(overlay_path);
            }
        }
    }
    Ok(report)
}

// Checked formulas are almost always bare names in session files.
fn check_source(expr: &crate::lang::ast::Expr) -> String {
    match expr {
        crate::lang::ast::Expr::Name { name, args, .. } if args.is_empty() => name.clone(),
        _ => "<formula>".to_string(),
    }
}
