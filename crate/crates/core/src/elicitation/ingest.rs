use std::collections::{HashMap, HashSet};
use std::fs;
use std::io::Write;
use std::path::Path;

use super::{is_single_token, ElicitError, ElicitationRecord, Relation, SeedTriplet, TaskSentence};

const RESPONSE_COLUMNS: [&str; 6] = [
    "participant_id",
    "template_id",
    "relation",
    "target",
    "rank",
    "relatum",
];

fn read(path: &Path) -> Result<String, ElicitError> {
    fs::read_to_string(path).map_err(|source| ElicitError::Io {
        path: path.to_path_buf(),
        source,
    })
}

fn normalize(word: &str) -> String {
    word.trim().to_lowercase()
}

/// Reads the tab-separated response file. Row numbers in errors are file
/// line numbers (the header is line 1).
pub fn ingest_responses(path: impl AsRef<Path>) -> Result<Vec<ElicitationRecord>, ElicitError> {
    ingest_responses_str(&read(path.as_ref())?)
}

pub fn ingest_responses_str(text: &str) -> Result<Vec<ElicitationRecord>, ElicitError> {
    let mut reader = csv::ReaderBuilder::new()
        .delimiter(b'\t')
        .quoting(false)
        .has_headers(false)
        .flexible(true)
        .from_reader(text.as_bytes());

    let mut rows = reader.records();
    let header = match rows.next() {
        Some(Ok(h)) => h,
        Some(Err(e)) => return Err(malformed(1, e.to_string())),
        None => return Err(malformed(1, "missing header row".into())),
    };
    let names: Vec<String> = header.iter().map(|c| c.trim().to_lowercase()).collect();
    if names != RESPONSE_COLUMNS {
        return Err(malformed(
            1,
            format!("expected header {:?}, found {names:?}", RESPONSE_COLUMNS),
        ));
    }

    let mut out = Vec::new();
    let mut seen: HashMap<(String, String, String, u8), usize> = HashMap::new();
    for row in rows {
        let row = row.map_err(|e| malformed(0, e.to_string()))?;
        let line = row.position().map_or(0, |p| p.line() as usize);
        if row.len() == 1 && row[0].trim().is_empty() {
            continue;
        }
        if row.len() != RESPONSE_COLUMNS.len() {
            return Err(malformed(
                line,
                format!("expected {} columns, found {}", RESPONSE_COLUMNS.len(), row.len()),
            ));
        }
        let participant = row[0].trim().to_string();
        let template = row[1].trim().to_string();
        let relation: Relation = row[2]
            .parse()
            .map_err(|e: super::UnknownRelation| malformed(line, e.to_string()))?;
        let target = normalize(&row[3]);
        let rank: u8 = row[4]
            .trim()
            .parse()
            .map_err(|_| malformed(line, format!("bad rank {:?}", &row[4])))?;
        if !(1..=5).contains(&rank) {
            return Err(malformed(line, format!("rank {rank} outside 1..=5")));
        }
        let relatum = normalize(&row[5]);
        if participant.is_empty() || template.is_empty() {
            return Err(malformed(line, "empty participant or template id".into()));
        }
        if !is_single_token(&target) {
            return Err(malformed(line, format!("target {:?} is not a single token", &row[3])));
        }
        if !is_single_token(&relatum) {
            return Err(malformed(line, format!("relatum {:?} is not a single token", &row[5])));
        }
        let key = (participant.clone(), template.clone(), target.clone(), rank);
        if let Some(&first) = seen.get(&key) {
            return Err(ElicitError::DuplicateRow { row: line, first });
        }
        seen.insert(key, line);
        out.push(ElicitationRecord {
            participant,
            template,
            relation,
            target,
            rank,
            relatum,
        });
    }
    Ok(out)
}

fn malformed(row: usize, reason: String) -> ElicitError {
    ElicitError::MalformedRow { row, reason }
}

/// Seed triplets from a CSV with header `target,relation,relatum`.
pub fn load_seeds(path: impl AsRef<Path>) -> Result<Vec<SeedTriplet>, ElicitError> {
    let text = read(path.as_ref())?;
    let mut reader = csv::ReaderBuilder::new()
        .trim(csv::Trim::All)
        .from_reader(text.as_bytes());
    let mut out = Vec::new();
    for row in reader.deserialize::<SeedTriplet>() {
        let seed = row.map_err(|e| {
            let line = e.position().map_or(0, |p| p.line() as usize);
            malformed(line, e.to_string())
        })?;
        out.push(SeedTriplet {
            target: normalize(&seed.target),
            relation: seed.relation,
            relatum: normalize(&seed.relatum),
        });
    }
    Ok(out)
}

/// One word per line; blank lines ignored, words lowercased.
pub fn load_allowlist(path: impl AsRef<Path>) -> Result<HashSet<String>, ElicitError> {
    Ok(read(path.as_ref())?
        .lines()
        .map(normalize)
        .filter(|w| !w.is_empty())
        .collect())
}

/// Writes `subset,template_id,relation,target,rendered` rows.
pub fn write_tasks<W: Write>(out: W, subsets: &[Vec<TaskSentence>]) -> csv::Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(["subset", "template_id", "relation", "target", "rendered"])?;
    for (i, subset) in subsets.iter().enumerate() {
        for s in subset {
            w.write_record([
                (i + 1).to_string().as_str(),
                &s.template,
                s.relation.as_str(),
                &s.target,
                &s.rendered,
            ])?;
        }
    }
    w.flush()?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    const HEADER: &str = "participant_id\ttemplate_id\trelation\ttarget\trank\trelatum\n";

    #[test]
    fn well_formed_rows() {
        let text = format!(
            "{HEADER}p1\tHYP-01\tHYP\torange\t1\tfruit\np1\tHYP-01\tHYP\torange\t2\t Food \np2\tSYN-01\tSYN\tcar\t1\tauto\n"
        );
        let recs = ingest_responses_str(&text).unwrap();
        assert_eq!(recs.len(), 3);
        assert_eq!(recs[1].relatum, "food");
        assert_eq!(recs[2].relation, Relation::Syn);
    }

    #[test]
    fn multi_word_relatum_is_rejected() {
        let text = format!("{HEADER}p1\tHPO-01\tHPO\tfood\t1\thot dog\n");
        match ingest_responses_str(&text) {
            Err(ElicitError::MalformedRow { row, .. }) => assert_eq!(row, 2),
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn rank_out_of_range() {
        for rank in ["0", "6", "x"] {
            let text = format!("{HEADER}p1\tHPO-01\tHPO\tfood\t{rank}\tbread\n");
            assert!(matches!(
                ingest_responses_str(&text),
                Err(ElicitError::MalformedRow { row: 2, .. })
            ));
        }
    }

    #[test]
    fn duplicate_row() {
        let text = format!(
            "{HEADER}p1\tHPO-01\tHPO\tfood\t1\tbread\np2\tHPO-01\tHPO\tfood\t1\tbread\np1\tHPO-01\tHPO\tfood\t1\trice\n"
        );
        assert!(matches!(
            ingest_responses_str(&text),
            Err(ElicitError::DuplicateRow { row: 4, first: 2 })
        ));
    }

    #[test]
    fn header_is_required() {
        assert!(ingest_responses_str("p1\tHPO-01\tHPO\tfood\t1\tbread\n").is_err());
        assert!(ingest_responses_str("").is_err());
        let short = format!("{HEADER}p1\tHPO-01\tHPO\tfood\t1\n");
        assert!(matches!(
            ingest_responses_str(&short),
            Err(ElicitError::MalformedRow { row: 2, .. })
        ));
    }
}
