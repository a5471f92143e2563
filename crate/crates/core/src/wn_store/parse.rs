use std::collections::{BTreeMap, HashMap, HashSet};
use std::fs;
use std::path::Path;

use super::{LemmaEdge, RelationKind, Synset, SynsetId, WnError, WordNetGraph};

const INDEX_FILE: &str = "index.noun";
const DATA_FILE: &str = "data.noun";

/// Parses `index.noun` and `data.noun` from `dir`.
pub fn parse_wordnet(dir: impl AsRef<Path>) -> Result<WordNetGraph, WnError> {
    let dir = dir.as_ref();
    let index = read(&dir.join(INDEX_FILE))?;
    let data = read(&dir.join(DATA_FILE))?;
    parse_wndb_str(&index, &data)
}

fn read(path: &Path) -> Result<String, WnError> {
    if !path.is_file() {
        return Err(WnError::MissingFile(path.to_path_buf()));
    }
    fs::read_to_string(path).map_err(|source| WnError::Io {
        path: path.to_path_buf(),
        source,
    })
}

struct RawPointer {
    kind: RelationKind,
    target: u32,
    /// zero-based (source, target) lemma numbers for lexical pointers
    lexical: Option<(u16, u16)>,
    line: usize,
}

struct RawSynset {
    id: SynsetId,
    lemmas: Vec<String>,
    gloss: String,
    pointers: Vec<RawPointer>,
}

fn is_license_line(line: &str) -> bool {
    line.starts_with("  ") || line.trim().is_empty()
}

/// Parses wndb text already loaded into memory.
pub fn parse_wndb_str(index: &str, data: &str) -> Result<WordNetGraph, WnError> {
    let mut raw = Vec::new();
    let mut seen = HashMap::new();
    for (i, line) in data.lines().enumerate() {
        if is_license_line(line) {
            continue;
        }
        let lineno = i + 1;
        let rec = parse_data_line(line, lineno)?;
        if seen.insert(rec.id.offset, raw.len()).is_some() {
            return Err(malformed(
                DATA_FILE,
                lineno,
                format!("duplicate offset {:08}", rec.id.offset),
            ));
        }
        raw.push(rec);
    }

    let lemma_counts: HashMap<u32, usize> =
        raw.iter().map(|r| (r.id.offset, r.lemmas.len())).collect();

    let mut synsets = Vec::with_capacity(raw.len());
    for rec in raw {
        let mut edges = Vec::new();
        let mut lemma_edges = Vec::new();
        for p in rec.pointers {
            let Some(&n_target_lemmas) = lemma_counts.get(&p.target) else {
                return Err(WnError::DanglingPointer {
                    file: DATA_FILE.to_string(),
                    line: p.line,
                    offset: p.target,
                });
            };
            let target = SynsetId::noun(p.target);
            match p.lexical {
                None => edges.push((p.kind, target)),
                Some((source, target_lemma)) => {
                    if usize::from(target_lemma) >= n_target_lemmas {
                        return Err(malformed(
                            DATA_FILE,
                            p.line,
                            format!("target lemma {} out of range", target_lemma + 1),
                        ));
                    }
                    lemma_edges.push(LemmaEdge {
                        source,
                        kind: p.kind,
                        target,
                        target_lemma,
                    });
                }
            }
        }
        synsets.push(Synset {
            id: rec.id,
            lemmas: rec.lemmas,
            gloss: rec.gloss,
            edges,
            lemma_edges,
        });
    }
    complete_mirrors(&mut synsets);

    let known: HashSet<u32> = synsets.iter().map(|s| s.id.offset).collect();
    let mut lemma_index = BTreeMap::new();
    for (i, line) in index.lines().enumerate() {
        if is_license_line(line) {
            continue;
        }
        let lineno = i + 1;
        let (lemma, offsets) = parse_index_line(line, lineno)?;
        for &off in &offsets {
            if !known.contains(&off) {
                return Err(WnError::DanglingPointer {
                    file: INDEX_FILE.to_string(),
                    line: lineno,
                    offset: off,
                });
            }
        }
        let ids = offsets.into_iter().map(SynsetId::noun).collect();
        if lemma_index.insert(lemma.to_lowercase(), ids).is_some() {
            return Err(malformed(INDEX_FILE, lineno, format!("duplicate lemma {lemma:?}")));
        }
    }

    Ok(WordNetGraph::from_parts(synsets, lemma_index))
}

fn malformed(file: &str, line: usize, reason: impl Into<String>) -> WnError {
    WnError::MalformedRecord {
        file: file.to_string(),
        line,
        reason: reason.into(),
    }
}

fn parse_data_line(line: &str, lineno: usize) -> Result<RawSynset, WnError> {
    let bad = |reason: String| malformed(DATA_FILE, lineno, reason);
    let (fields, gloss) = match line.split_once('|') {
        Some((f, g)) => (f, g.trim()),
        None => (line, ""),
    };
    let mut tok = fields.split_whitespace();
    let mut next = |what: &str| tok.next().ok_or_else(|| bad(format!("missing {what}")));

    let offset = parse_offset(next("offset")?).ok_or_else(|| bad("bad offset".into()))?;
    let lex_filenum = next("lex_filenum")?;
    if lex_filenum.parse::<u8>().is_err() {
        return Err(bad(format!("bad lex_filenum {lex_filenum:?}")));
    }
    let ss_type = next("ss_type")?;
    if ss_type != "n" {
        return Err(bad(format!("unexpected ss_type {ss_type:?} in noun file")));
    }
    let w_cnt = next("w_cnt")?;
    let w_cnt = usize::from_str_radix(w_cnt, 16).map_err(|_| bad(format!("bad w_cnt {w_cnt:?}")))?;
    if w_cnt == 0 {
        return Err(bad("synset without lemmas".into()));
    }
    let mut lemmas = Vec::with_capacity(w_cnt);
    for _ in 0..w_cnt {
        let word = next("word")?;
        let lex_id = next("lex_id")?;
        if u8::from_str_radix(lex_id, 16).is_err() {
            return Err(bad(format!("bad lex_id {lex_id:?}")));
        }
        lemmas.push(word.to_string());
    }
    let p_cnt = next("p_cnt")?;
    let p_cnt: usize = p_cnt.parse().map_err(|_| bad(format!("bad p_cnt {p_cnt:?}")))?;
    let mut pointers = Vec::with_capacity(p_cnt);
    for _ in 0..p_cnt {
        let symbol = next("pointer symbol")?;
        let target = next("pointer offset")?;
        let target = parse_offset(target).ok_or_else(|| bad(format!("bad pointer offset {target:?}")))?;
        let pos = next("pointer pos")?;
        let st = next("pointer source/target")?;
        if st.len() != 4 {
            return Err(bad(format!("bad source/target {st:?}")));
        }
        let src = u16::from_str_radix(&st[..2], 16).map_err(|_| bad(format!("bad source/target {st:?}")))?;
        let tgt = u16::from_str_radix(&st[2..], 16).map_err(|_| bad(format!("bad source/target {st:?}")))?;
        match pos {
            "n" => {}
            // cross-POS pointers lead outside the noun graph
            "v" | "a" | "s" | "r" => continue,
            other => return Err(bad(format!("bad pointer pos {other:?}"))),
        }
        let lexical = match (src, tgt) {
            (0, 0) => None,
            (0, _) | (_, 0) => return Err(bad(format!("bad source/target {st:?}"))),
            (s, t) => {
                if usize::from(s) > w_cnt {
                    return Err(bad(format!("source lemma {s} out of range")));
                }
                Some((s - 1, t - 1))
            }
        };
        pointers.push(RawPointer {
            kind: RelationKind::from_symbol(symbol),
            target,
            lexical,
            line: lineno,
        });
    }
    if let Some(extra) = tok.next() {
        return Err(bad(format!("unexpected trailing field {extra:?}")));
    }
    Ok(RawSynset {
        id: SynsetId::noun(offset),
        lemmas,
        gloss: gloss.to_string(),
        pointers,
    })
}

fn parse_index_line(line: &str, lineno: usize) -> Result<(String, Vec<u32>), WnError> {
    let bad = |reason: String| malformed(INDEX_FILE, lineno, reason);
    let tok: Vec<&str> = line.split_whitespace().collect();
    if tok.len() < 6 {
        return Err(bad("too few fields".into()));
    }
    if tok[1] != "n" {
        return Err(bad(format!("unexpected pos {:?} in noun index", tok[1])));
    }
    let count = |i: usize| -> Result<usize, WnError> {
        tok[i].parse().map_err(|_| bad(format!("bad count {:?}", tok[i])))
    };
    let synset_cnt = count(2)?;
    let p_cnt = count(3)?;
    let offsets_at = 4 + p_cnt + 2;
    if tok.len() != offsets_at + synset_cnt {
        return Err(bad(format!(
            "expected {synset_cnt} synset offsets, found {}",
            tok.len().saturating_sub(offsets_at)
        )));
    }
    count(4 + p_cnt)?;
    count(5 + p_cnt)?;
    let offsets = tok[offsets_at..]
        .iter()
        .map(|t| parse_offset(t).ok_or_else(|| bad(format!("bad offset {t:?}"))))
        .collect::<Result<Vec<_>, _>>()?;
    Ok((tok[0].to_string(), offsets))
}

fn parse_offset(tok: &str) -> Option<u32> {
    if tok.is_empty() || !tok.bytes().all(|b| b.is_ascii_digit()) {
        return None;
    }
    tok.parse().ok()
}

/// Adds any missing inverse pointer so each mirrorable edge is recorded on
/// both synsets.
fn complete_mirrors(synsets: &mut [Synset]) {
    let pos: HashMap<SynsetId, usize> = synsets.iter().enumerate().map(|(i, s)| (s.id, i)).collect();

    let mut present: HashSet<(SynsetId, RelationKind, SynsetId)> = HashSet::new();
    let mut present_lex: HashSet<(SynsetId, u16, SynsetId, u16)> = HashSet::new();
    for s in synsets.iter() {
        for (k, t) in &s.edges {
            present.insert((s.id, k.clone(), *t));
        }
        for e in &s.lemma_edges {
            if e.kind == RelationKind::Antonym {
                present_lex.insert((s.id, e.source, e.target, e.target_lemma));
            }
        }
    }

    let mut add_edges: Vec<(usize, RelationKind, SynsetId)> = Vec::new();
    let mut add_lex: Vec<(usize, LemmaEdge)> = Vec::new();
    for s in synsets.iter() {
        for (k, t) in &s.edges {
            if let Some(m) = k.mirror() {
                if present.insert((*t, m.clone(), s.id)) {
                    add_edges.push((pos[t], m, s.id));
                }
            }
        }
        for e in &s.lemma_edges {
            if e.kind == RelationKind::Antonym
                && present_lex.insert((e.target, e.target_lemma, s.id, e.source))
            {
                add_lex.push((
                    pos[&e.target],
                    LemmaEdge {
                        source: e.target_lemma,
                        kind: RelationKind::Antonym,
                        target: s.id,
                        target_lemma: e.source,
                    },
                ));
            }
        }
    }
    for (i, k, t) in add_edges {
        synsets[i].edges.push((k, t));
    }
    for (i, e) in add_lex {
        synsets[i].lemma_edges.push(e);
    }
}


#[cfg(test)]
mod tests {
    use super::*;

    const DATA: &str = "  1 license header line\n  2 more header\n\
00000010 03 n 01 dog 0 001 @ 00000020 n 0000 | a domestic animal; \"the dog barked\"\n\
00000020 03 n 02 animal 0 beast 0 000 | a living organism\n";
    const INDEX: &str = "  1 license header\n\
animal n 1 1 ~ 1 0 00000020\n\
beast n 1 1 ~ 1 0 00000020\n\
dog n 1 1 @ 1 0 00000010\n";

    #[test]
    fn two_synset_fixture_gets_mirror_edge() {
        let g = parse_wndb_str(INDEX, DATA).unwrap();
        assert_eq!(g.len(), 2);
        let dog = g.synset(SynsetId::noun(10)).unwrap();
        assert_eq!(dog.edges, vec![(RelationKind::Hypernym, SynsetId::noun(20))]);
        let animal = g.synset(SynsetId::noun(20)).unwrap();
        assert_eq!(animal.edges, vec![(RelationKind::Hyponym, SynsetId::noun(10))]);
        assert_eq!(animal.lemmas, vec!["animal", "beast"]);
        assert_eq!(dog.gloss, "a domestic animal; \"the dog barked\"");
    }

    #[test]
    fn empty_directory_is_missing_file() {
        let dir = tempfile::tempdir().unwrap();
        assert!(matches!(parse_wordnet(dir.path()), Err(WnError::MissingFile(_))));
    }

    #[test]
    fn malformed_record_carries_line_number() {
        let data = "  header\n00000010 03 n 01 dog 0 002 @ 00000020 n 0000 | short\n";
        match parse_wndb_str("", data) {
            Err(WnError::MalformedRecord { line, .. }) => assert_eq!(line, 2),
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn dangling_pointer_is_reported() {
        let data = "00000010 03 n 01 dog 0 001 @ 00000099 n 0000 | x\n";
        match parse_wndb_str("", data) {
            Err(WnError::DanglingPointer { offset, line, .. }) => {
                assert_eq!(offset, 99);
                assert_eq!(line, 1);
            }
            other => panic!("unexpected {other:?}"),
        }
        let index = "dog n 1 0 1 0 00000077\n";
        let data = "00000010 03 n 01 dog 0 000 | x\n";
        assert!(matches!(
            parse_wndb_str(index, data),
            Err(WnError::DanglingPointer { offset: 77, .. })
        ));
    }

    #[test]
    fn index_offset_count_is_checked() {
        let index = "dog n 2 0 2 0 00000010\n";
        let data = "00000010 03 n 01 dog 0 000 | x\n";
        assert!(matches!(
            parse_wndb_str(index, data),
            Err(WnError::MalformedRecord { line: 1, .. })
        ));
    }

    #[test]
    fn cross_pos_pointers_are_dropped_and_antonyms_are_lexical() {
        let data = "\
00000010 03 n 01 day 0 002 ! 00000020 n 0101 + 01234567 v 0101 | daytime\n\
00000020 03 n 01 night 0 000 | nighttime\n";
        let g = parse_wndb_str("", data).unwrap();
        let day = g.synset(SynsetId::noun(10)).unwrap();
        assert!(day.edges.is_empty());
        assert_eq!(day.lemma_edges.len(), 1);
        let night = g.synset(SynsetId::noun(20)).unwrap();
        assert_eq!(
            night.lemma_edges,
            vec![LemmaEdge {
                source: 0,
                kind: RelationKind::Antonym,
                target: SynsetId::noun(10),
                target_lemma: 0
            }]
        );
    }

    #[test]
    fn duplicate_offset_is_malformed() {
        let data = "00000010 03 n 01 a 0 000 | x\n00000010 03 n 01 b 0 000 | y\n";
        assert!(matches!(
            parse_wndb_str("", data),
            Err(WnError::MalformedRecord { line: 2, .. })
        ));
    }
}
