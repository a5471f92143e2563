use std::fs::{self, File};
use std::io::BufWriter;
use std::path::{Path, PathBuf};

use serde_json::Value;

use super::{at, Analysis, AnalysisReport, GlossReport, PipelineError, Stage};
use crate::elicitation::Relation;
use crate::matcher::{write_classified, ClassifiedTriplet};
use crate::metrics::{FrequencyTable, MannWhitney, MismatchMatrix, TestMethod};

pub(crate) fn fmt6(x: f64) -> String {
    let s = format!("{x:.6}");
    if s == "-0.000000" {
        "0.000000".into()
    } else {
        s
    }
}

fn opt6(x: Option<f64>) -> String {
    x.map(fmt6).unwrap_or_default()
}

fn prepare(dir: &Path) -> Result<(), PipelineError> {
    fs::create_dir_all(dir).map_err(at(Stage::Report))
}

fn write_csv(dir: &Path, name: &str, header: &[&str], rows: &[Vec<String>]) -> Result<PathBuf, PipelineError> {
    prepare(dir)?;
    let path = dir.join(name);
    let mut w = csv::Writer::from_path(&path).map_err(at(Stage::Report))?;
    w.write_record(header).map_err(at(Stage::Report))?;
    for row in rows {
        w.write_record(row).map_err(at(Stage::Report))?;
    }
    w.flush().map_err(at(Stage::Report))?;
    Ok(path)
}

pub fn write_classified_csv(dir: &Path, classified: &[ClassifiedTriplet]) -> Result<PathBuf, PipelineError> {
    prepare(dir)?;
    let path = dir.join("classified.csv");
    let file = File::create(&path).map_err(at(Stage::Report))?;
    write_classified(BufWriter::new(file), classified).map_err(at(Stage::Report))?;
    Ok(path)
}

fn matrix_rows(m: &MismatchMatrix) -> Vec<Vec<String>> {
    Relation::ALL
        .into_iter()
        .map(|documented| {
            let mut row = vec![documented.as_str().to_string()];
            row.extend(
                Relation::ALL
                    .into_iter()
                    .map(|elicited| opt6(m.populated[elicited.index()].then(|| m.get(documented, elicited)).flatten())),
            );
            row
        })
        .collect()
}

const MATRIX_HEADER: [&str; 7] = ["documented", "HYP", "HPO", "HOL", "MER", "ANT", "SYN"];

fn test_cells(t: &Option<MannWhitney>) -> [String; 4] {
    match t {
        None => Default::default(),
        Some(t) => [
            fmt6(t.u),
            fmt6(t.p_value),
            t.reject.to_string(),
            match t.method {
                TestMethod::Exact => "exact".into(),
                TestMethod::Normal => "normal".into(),
            },
        ],
    }
}

/// Tables for every statistic except the gloss study.
pub fn write_metric_outputs(
    dir: &Path,
    analysis: &Analysis,
    freq: &FrequencyTable,
) -> Result<Vec<PathBuf>, PipelineError> {
    let mut files = Vec::new();

    let t = &analysis.table1;
    let mut rows: Vec<Vec<String>> = t
        .rows
        .iter()
        .map(|r| {
            vec![
                r.relation.as_str().into(),
                r.target_words.to_string(),
                r.templates.to_string(),
                r.triplets.to_string(),
                r.hapax.to_string(),
                r.non_hapax.to_string(),
            ]
        })
        .collect();
    rows.push(vec![
        "TOTAL".into(),
        t.total_target_words.to_string(),
        t.rows.iter().map(|r| r.templates).sum::<usize>().to_string(),
        t.total_triplets.to_string(),
        t.total_hapax.to_string(),
        t.total_non_hapax.to_string(),
    ]);
    files.push(write_csv(
        dir,
        "table1.csv",
        &["relation", "target_words", "templates", "triplets", "hapax", "non_hapax"],
        &rows,
    )?);

    let s = &analysis.status_dist;
    let rows: Vec<Vec<String>> = [&s.all, &s.hapax, &s.non_hapax]
        .into_iter()
        .flatten()
        .map(|c| {
            vec![
                c.subset.as_str().into(),
                c.relation.as_str().into(),
                c.matched.to_string(),
                c.missing.to_string(),
                c.mismatched.to_string(),
                c.excluded.to_string(),
                fmt6(c.matched_share()),
                fmt6(c.missing_share()),
                fmt6(c.mismatched_share()),
            ]
        })
        .collect();
    files.push(write_csv(
        dir,
        "status_distribution.csv",
        &[
            "subset",
            "relation",
            "matched",
            "missing",
            "mismatched",
            "excluded",
            "matched_share",
            "missing_share",
            "mismatched_share",
        ],
        &rows,
    )?);

    let rows: Vec<Vec<String>> = freq
        .iter()
        .map(|(k, f)| vec![k.target.clone(), k.relation.as_str().into(), k.relatum.clone(), fmt6(f)])
        .collect();
    files.push(write_csv(dir, "frequency.csv", &["target", "relation", "relatum", "frequency"], &rows)?);

    for curve in &analysis.curves {
        let rows: Vec<Vec<String>> = curve
            .points
            .iter()
            .map(|p| vec![fmt6(p.threshold), fmt6(p.match_rate), p.n_retained.to_string(), p.n_matched.to_string()])
            .collect();
        let name = format!("curve_{}.csv", curve.relation.as_str().to_lowercase());
        files.push(write_csv(dir, &name, &["threshold", "match_rate", "n_retained", "n_matched"], &rows)?);
    }

    let m = &analysis.matrix;
    files.push(write_csv(dir, "mismatch_matrix.csv", &MATRIX_HEADER, &matrix_rows(&m.overall))?);
    files.push(write_csv(
        dir,
        "mismatch_matrix_abstract.csv",
        &MATRIX_HEADER,
        &matrix_rows(&m.split.abstract_matrix),
    )?);
    files.push(write_csv(
        dir,
        "mismatch_matrix_physical.csv",
        &MATRIX_HEADER,
        &matrix_rows(&m.split.physical_matrix),
    )?);
    let ts = &m.split.target_synsets;
    let mut row = vec![
        m.split.n_abstract.to_string(),
        m.split.n_physical.to_string(),
        ts.n_abstract_targets.to_string(),
        ts.n_physical_targets.to_string(),
        fmt6(ts.abstract_mean_synsets),
        fmt6(ts.physical_mean_synsets),
    ];
    row.extend(test_cells(&ts.test));
    files.push(write_csv(
        dir,
        "abstract_physical.csv",
        &[
            "n_abstract_triplets",
            "n_physical_triplets",
            "n_abstract_targets",
            "n_physical_targets",
            "abstract_mean_synsets",
            "physical_mean_synsets",
            "u",
            "p_value",
            "reject",
            "method",
        ],
        &[row],
    )?);

    let rows: Vec<Vec<String>> = analysis
        .association
        .iter()
        .map(|a| {
            vec![
                a.relation.as_str().into(),
                opt6(a.gjsd_mean),
                opt6(a.cramers_v_mean),
                a.n_targets.to_string(),
            ]
        })
        .collect();
    files.push(write_csv(dir, "association.csv", &["relation", "gjsd", "cramers_v", "n_targets"], &rows)?);

    let rows: Vec<Vec<String>> = analysis
        .distances
        .iter()
        .map(|d| {
            vec![
                d.relation.as_str().into(),
                d.n_direct.to_string(),
                d.n_missing.to_string(),
                d.n_indirect.to_string(),
                opt6(d.recovery_rate),
                d.n_indirect_2_to_4.to_string(),
                opt6(d.share_indirect_2_to_4),
                opt6(d.spearman),
            ]
        })
        .collect();
    files.push(write_csv(
        dir,
        "distance_corr.csv",
        &[
            "relation",
            "n_direct",
            "n_missing",
            "n_indirect",
            "recovery_rate",
            "n_indirect_2_to_4",
            "share_indirect_2_to_4",
            "spearman",
        ],
        &rows,
    )?);
    let rows: Vec<Vec<String>> = analysis
        .distances
        .iter()
        .flat_map(|d| {
            d.histogram
                .iter()
                .map(move |(dist, n)| vec![d.relation.as_str().into(), dist.to_string(), n.to_string()])
        })
        .collect();
    files.push(write_csv(dir, "distances.csv", &["relation", "distance", "count"], &rows)?);

    Ok(files)
}

pub fn write_gloss_outputs(dir: &Path, gloss: &GlossReport) -> Result<Vec<PathBuf>, PipelineError> {
    let mut means = Vec::new();
    let mut tests = Vec::new();
    for c in &gloss.comparisons {
        let rel = c.relation.as_str().to_string();
        for (name, g) in [("matched", &c.matched), ("missing", &c.missing), ("unrelated", &c.unrelated)] {
            means.push(vec![rel.clone(), name.into(), opt6(g.mean), g.n.to_string()]);
        }
        for (name, t) in [
            ("unrelated_vs_matched", &c.unrelated_vs_matched),
            ("unrelated_vs_missing", &c.unrelated_vs_missing),
            ("matched_vs_missing", &c.matched_vs_missing),
        ] {
            let mut row = vec![rel.clone(), name.into()];
            row.extend(test_cells(t));
            tests.push(row);
        }
    }
    Ok(vec![
        write_csv(dir, "gloss_sim.csv", &["relation", "group", "mean", "n"], &means)?,
        write_csv(
            dir,
            "tests.csv",
            &["relation", "comparison", "u", "p_value", "reject", "method"],
            &tests,
        )?,
    ])
}

fn round_floats(v: &mut Value) {
    match v {
        Value::Number(n) if n.is_f64() => {
            let x = n.as_f64().unwrap_or(0.0);
            let rounded: f64 = fmt6(x).parse().unwrap_or(x);
            if let Some(r) = serde_json::Number::from_f64(rounded) {
                *n = r;
            }
        }
        Value::Array(items) => items.iter_mut().for_each(round_floats),
        Value::Object(map) => map.values_mut().for_each(round_floats),
        _ => {}
    }
}

/// The report as JSON with every float rounded to six decimals.
pub fn report_json(report: &AnalysisReport) -> String {
    let mut value = serde_json::to_value(report).expect("report serializes");
    round_floats(&mut value);
    let mut s = serde_json::to_string_pretty(&value).expect("value serializes");
    s.push('\n');
    s
}

pub fn write_report(dir: &Path, report: &AnalysisReport) -> Result<PathBuf, PipelineError> {
    prepare(dir)?;
    let path = dir.join("report.json");
    fs::write(&path, report_json(report)).map_err(at(Stage::Report))?;
    Ok(path)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn six_decimals() {
        assert_eq!(fmt6(1.0 / 3.0), "0.333333");
        assert_eq!(fmt6(-1e-9), "0.000000");
        assert_eq!(opt6(None), "");
        let mut v = serde_json::json!({"a": [0.1234567, 3], "b": {"c": 2.0000004}});
        round_floats(&mut v);
        assert_eq!(v, serde_json::json!({"a": [0.123457, 3], "b": {"c": 2.0}}));
    }
}
