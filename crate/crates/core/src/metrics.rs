//! Dataset ingestion, the coefficient-budget reconstruction sweep, and the
//! SEC / OES efficiency scores.

use rayon::prelude::*;
use serde::Deserialize;
use serde_json::Value;
use std::fs;
use std::path::Path;

use crate::codec::{decode, encode, truncate};
use crate::error::{Error, Result};
use crate::geometry::{chamfer_distance, resample, Polygon};

/// Default number of resampled contour points.
pub const DEFAULT_N_PTS: usize = 60;

/// Default harmonic cutoffs for the reconstruction sweep. The largest cutoff
/// must satisfy `n_pts >= 2 * max + 1`, which bounds these at 16 for the
/// default point count.
pub const DEFAULT_CUTOFFS: &[usize] = &[1, 2, 4, 8, 16];

/// One polygon pulled out of an annotation file. Multi-part segmentations
/// yield one entry per part.
#[derive(Debug, Clone)]
pub struct AnnotationEntry {
    pub annotation_id: u64,
    pub image_id: u64,
    pub category_id: u64,
    pub polygon: Polygon,
}

/// Why entries were dropped during loading.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct SkipCounts {
    /// Polygon parts with fewer than 3 points.
    pub too_few_points: usize,
    /// Run-length-encoded segmentations ("rle-unsupported").
    pub rle_unsupported: usize,
    /// Crowd annotations.
    pub crowd: usize,
    /// Parts that failed polygon validation (e.g. all points coincident).
    pub invalid: usize,
}

impl SkipCounts {
    pub fn total(&self) -> usize {
        self.too_few_points + self.rle_unsupported + self.crowd + self.invalid
    }
}

impl std::fmt::Display for SkipCounts {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(
            f,
            "too-few-points: {}, rle-unsupported: {}, crowd: {}, invalid: {}",
            self.too_few_points, self.rle_unsupported, self.crowd, self.invalid
        )
    }
}

/// Polygons loaded from a COCO-format annotation file, in annotation-id
/// order, plus the skip counters.
#[derive(Debug, Clone)]
pub struct AnnotationSet {
    pub entries: Vec<AnnotationEntry>,
    pub skipped: SkipCounts,
}

#[derive(Deserialize)]
struct CocoFile {
    annotations: Vec<CocoAnnotation>,
}

#[derive(Deserialize)]
struct CocoAnnotation {
    id: u64,
    image_id: u64,
    category_id: u64,
    segmentation: Value,
    #[serde(default)]
    iscrowd: u64,
}

fn byte_offset_of(text: &str, line: usize, column: usize) -> usize {
    // serde_json reports 1-based lines and columns.
    let mut offset = 0;
    for (i, l) in text.split('\n').enumerate() {
        if i + 1 == line {
            return offset + column.saturating_sub(1);
        }
        offset += l.len() + 1;
    }
    offset
}

fn polygon_parts(segmentation: &Value) -> Result<Option<Vec<Vec<f64>>>> {
    match segmentation {
        // RLE form: {"counts": ..., "size": ...}
        Value::Object(_) => Ok(None),
        Value::Array(parts) => {
            let mut out = Vec::with_capacity(parts.len());
            for part in parts {
                let coords = part
                    .as_array()
                    .ok_or_else(|| Error::Schema {
                        field: "segmentation".into(),
                        message: "expected a list of flat coordinate lists".into(),
                    })?
                    .iter()
                    .map(|v| {
                        v.as_f64().ok_or_else(|| Error::Schema {
                            field: "segmentation".into(),
                            message: "non-numeric coordinate".into(),
                        })
                    })
                    .collect::<Result<Vec<f64>>>()?;
                if coords.len() % 2 != 0 {
                    return Err(Error::Schema {
                        field: "segmentation".into(),
                        message: "odd number of coordinates".into(),
                    });
                }
                out.push(coords);
            }
            Ok(Some(out))
        }
        _ => Err(Error::Schema {
            field: "segmentation".into(),
            message: "expected a list or an RLE object".into(),
        }),
    }
}

/// Loads polygons from a COCO-format annotation JSON. Entries come out in
/// annotation-id order (parts in file order within an annotation); crowd and
/// RLE segmentations and sub-3-point parts are skipped and counted. `limit`
/// keeps only the first entries after ordering.
pub fn load_annotations(path: &Path, limit: Option<usize>) -> Result<AnnotationSet> {
    let text = fs::read_to_string(path)?;
    let file: CocoFile = serde_json::from_str(&text).map_err(|e| {
        if e.is_data() {
            Error::Schema {
                field: "annotations".into(),
                message: e.to_string(),
            }
        } else {
            Error::JsonSyntax {
                offset: byte_offset_of(&text, e.line(), e.column()),
                line: e.line(),
                column: e.column(),
                message: e.to_string(),
            }
        }
    })?;

    let mut annotations = file.annotations;
    annotations.sort_by_key(|a| a.id);

    let mut entries = Vec::new();
    let mut skipped = SkipCounts::default();
    for ann in &annotations {
        if ann.iscrowd != 0 {
            skipped.crowd += 1;
            continue;
        }
        let Some(parts) = polygon_parts(&ann.segmentation)? else {
            skipped.rle_unsupported += 1;
            continue;
        };
        for coords in parts {
            if coords.len() < 6 {
                skipped.too_few_points += 1;
                continue;
            }
            match Polygon::from_flat_xy(&coords) {
                Ok(polygon) => entries.push(AnnotationEntry {
                    annotation_id: ann.id,
                    image_id: ann.image_id,
                    category_id: ann.category_id,
                    polygon,
                }),
                Err(_) => skipped.invalid += 1,
            }
        }
    }
    if let Some(limit) = limit {
        entries.truncate(limit);
    }
    Ok(AnnotationSet { entries, skipped })
}

/// One aggregate row of the reconstruction sweep.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SweepRow {
    pub n_keep: usize,
    pub n_real_coeffs: usize,
    pub mean_chamfer: f64,
    pub median_chamfer: f64,
    pub count: usize,
}

/// Reconstruction error versus coefficient budget over a corpus.
#[derive(Debug, Clone)]
pub struct SweepReport {
    pub n_pts: usize,
    pub rows: Vec<SweepRow>,
}

fn median(sorted: &[f64]) -> f64 {
    let n = sorted.len();
    if n % 2 == 1 {
        sorted[n / 2]
    } else {
        (sorted[n / 2 - 1] + sorted[n / 2]) / 2.0
    }
}

/// Per polygon: resample, encode the full spectrum, truncate at each cutoff,
/// decode, and compare against the resampled original with the Chamfer
/// distance. Aggregates mean and median per cutoff.
///
/// Polygons are processed in parallel; aggregation runs in input order so
/// the report is identical for any worker count.
pub fn reconstruction_sweep(
    set: &AnnotationSet,
    n_pts: usize,
    cutoffs: &[usize],
) -> Result<SweepReport> {
    if set.entries.is_empty() {
        return Err(Error::EmptyAnnotationSet);
    }
    if cutoffs.is_empty() {
        return Err(Error::Domain("no cutoffs given".into()));
    }
    if cutoffs.windows(2).any(|w| w[0] >= w[1]) {
        return Err(Error::Domain(
            "cutoffs must be strictly ascending".into(),
        ));
    }
    let max_cutoff = *cutoffs.last().unwrap();
    if n_pts < 2 * max_cutoff + 1 {
        return Err(Error::Domain(format!(
            "n_pts = {n_pts} too small for cutoff {max_cutoff}; need at least {}",
            2 * max_cutoff + 1
        )));
    }
    let n_full = (n_pts - 1) / 2;

    let per_polygon: Vec<Result<Vec<f64>>> = set
        .entries
        .par_iter()
        .map(|entry| {
            let samples = resample(&entry.polygon, n_pts)?;
            let full = encode(&samples, n_full)?;
            cutoffs
                .iter()
                .map(|&cut| {
                    let dec = decode(&truncate(&full, cut)?, n_pts)?;
                    chamfer_distance(dec.points(), samples.points())
                })
                .collect()
        })
        .collect();

    let mut per_cutoff: Vec<Vec<f64>> = vec![Vec::with_capacity(set.entries.len()); cutoffs.len()];
    for result in per_polygon {
        let values = result?;
        for (bucket, v) in per_cutoff.iter_mut().zip(values) {
            bucket.push(v);
        }
    }

    let rows = cutoffs
        .iter()
        .zip(per_cutoff)
        .map(|(&n_keep, values)| {
            let count = values.len();
            let mean = values.iter().sum::<f64>() / count as f64;
            let mut sorted = values;
            sorted.sort_by(|a, b| a.partial_cmp(b).unwrap());
            SweepRow {
                n_keep,
                n_real_coeffs: 2 * (2 * n_keep + 1),
                mean_chamfer: mean,
                median_chamfer: median(&sorted),
                count,
            }
        })
        .collect();
    Ok(SweepReport { n_pts, rows })
}

/// Renders a sweep report as CSV with header
/// `n_keep,n_real_coeffs,mean_chamfer,median_chamfer,count`.
pub fn sweep_to_csv(report: &SweepReport) -> String {
    let mut out = String::from("n_keep,n_real_coeffs,mean_chamfer,median_chamfer,count\n");
    for r in &report.rows {
        out.push_str(&format!(
            "{},{},{},{},{}\n",
            r.n_keep, r.n_real_coeffs, r.mean_chamfer, r.median_chamfer, r.count
        ));
    }
    out
}

/// Shape Encoding Complexity: memory for one regressed object, in bits.
pub fn compute_sec(n_real_coeffs: u64, bits_per_value: u64) -> u64 {
    n_real_coeffs * bits_per_value
}

/// Overall Efficiency Score, `100 * mAP * FPS / SEC`.
pub fn compute_oes(map_percent: f64, fps: f64, sec_bits: u64) -> f64 {
    100.0 * map_percent * fps / sec_bits as f64
}

/// The accuracy / speed / compactness triple and its combined score.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EfficiencyScore {
    pub map_percent: f64,
    pub fps: f64,
    pub sec_bits: u64,
    pub oes: f64,
}

impl EfficiencyScore {
    pub fn new(map_percent: f64, fps: f64, sec_bits: u64) -> Self {
        EfficiencyScore {
            map_percent,
            fps,
            sec_bits,
            oes: compute_oes(map_percent, fps, sec_bits),
        }
    }
}

/// Renders efficiency rows as CSV with header `method,map,fps,sec,oes`.
pub fn efficiency_to_csv(rows: &[(String, EfficiencyScore)]) -> String {
    let mut out = String::from("method,map,fps,sec,oes\n");
    for (method, s) in rows {
        out.push_str(&format!(
            "{},{},{},{},{}\n",
            method, s.map_percent, s.fps, s.sec_bits, s.oes
        ));
    }
    out
}
