//! The bundled sentiment lexicon.

use panelforge_core::sentiment::SentimentLexicon;

pub const LEXICON_TSV: &str = include_str!("../data/lexicon.tsv");

pub fn default_lexicon() -> SentimentLexicon {
    SentimentLexicon::parse(LEXICON_TSV).expect("bundled lexicon is well formed")
}
