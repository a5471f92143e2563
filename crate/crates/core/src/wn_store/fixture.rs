//! Renders small synthetic graphs in wndb format, for tests and demos.

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::fs;
use std::io;
use std::path::Path;

#[derive(Debug, Clone, Default)]
pub struct FixtureSynset {
    pub offset: u32,
    pub lemmas: Vec<String>,
    /// Semantic pointers as (wndb symbol, target offset).
    pub pointers: Vec<(String, u32)>,
    /// Lemma-level antonym pointers as (source lemma, target offset, target lemma),
    /// lemma positions zero-based.
    pub antonyms: Vec<(u16, u32, u16)>,
    pub gloss: String,
}

impl FixtureSynset {
    pub fn new(offset: u32, lemmas: &[&str], gloss: &str) -> Self {
        Self {
            offset,
            lemmas: lemmas.iter().map(|s| s.to_string()).collect(),
            gloss: gloss.to_string(),
            ..Self::default()
        }
    }

    pub fn pointer(mut self, symbol: &str, target: u32) -> Self {
        self.pointers.push((symbol.to_string(), target));
        self
    }

    pub fn antonym(mut self, source: u16, target: u32, target_lemma: u16) -> Self {
        self.antonyms.push((source, target, target_lemma));
        self
    }
}

/// Returns `(index.noun, data.noun)` contents. Sense order of a lemma
/// follows the order synsets appear in `synsets`.
pub fn render_wndb(synsets: &[FixtureSynset]) -> (String, String) {
    let mut data = String::from("  1 synthetic fixture\n");
    let mut senses: BTreeMap<String, Vec<u32>> = BTreeMap::new();
    for s in synsets {
        let _ = write!(data, "{:08} 03 n {:02x}", s.offset, s.lemmas.len());
        for lemma in &s.lemmas {
            let _ = write!(data, " {lemma} 0");
            let entry = senses.entry(lemma.to_lowercase()).or_default();
            if !entry.contains(&s.offset) {
                entry.push(s.offset);
            }
        }
        let _ = write!(data, " {:03}", s.pointers.len() + s.antonyms.len());
        for (sym, target) in &s.pointers {
            let _ = write!(data, " {sym} {target:08} n 0000");
        }
        for (src, target, tgt) in &s.antonyms {
            let _ = write!(data, " ! {target:08} n {:02x}{:02x}", src + 1, tgt + 1);
        }
        let _ = writeln!(data, " | {}", s.gloss);
    }
    let mut index = String::from("  1 synthetic fixture\n");
    for (lemma, offsets) in senses {
        let _ = write!(index, "{lemma} n {} 0 {} 0", offsets.len(), offsets.len());
        for off in offsets {
            let _ = write!(index, " {off:08}");
        }
        index.push('\n');
    }
    (index, data)
}

pub fn write_wndb(dir: &Path, synsets: &[FixtureSynset]) -> io::Result<()> {
    let (index, data) = render_wndb(synsets);
    fs::create_dir_all(dir)?;
    fs::write(dir.join("index.noun"), index)?;
    fs::write(dir.join("data.noun"), data)
}
