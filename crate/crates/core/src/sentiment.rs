//! Lexicon sentiment scoring and the valence-to-expression table.

use alloc::collections::BTreeMap;
use alloc::string::{String, ToString};
use alloc::vec::Vec;
use core::fmt;
use core::str::FromStr;

use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ExpressionTag {
    Neutral,
    Happy,
    Sad,
    Angry,
    Surprised,
}

impl ExpressionTag {
    pub const ALL: [ExpressionTag; 5] = [
        ExpressionTag::Neutral,
        ExpressionTag::Happy,
        ExpressionTag::Sad,
        ExpressionTag::Angry,
        ExpressionTag::Surprised,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            ExpressionTag::Neutral => "neutral",
            ExpressionTag::Happy => "happy",
            ExpressionTag::Sad => "sad",
            ExpressionTag::Angry => "angry",
            ExpressionTag::Surprised => "surprised",
        }
    }
}

impl fmt::Display for ExpressionTag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct UnknownTag(pub String);

impl fmt::Display for UnknownTag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "unknown expression tag {:?}", self.0)
    }
}

impl FromStr for ExpressionTag {
    type Err = UnknownTag;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        ExpressionTag::ALL
            .into_iter()
            .find(|t| t.as_str() == s)
            .ok_or_else(|| UnknownTag(s.to_string()))
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum LexiconError {
    Syntax { line: usize },
    BadValence { line: usize, value: String },
    OutOfRange { line: usize, valence: f64 },
}

impl fmt::Display for LexiconError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::Syntax { line } => write!(f, "line {line}: expected `word<TAB>valence`"),
            Self::BadValence { line, value } => write!(f, "line {line}: {value:?} is not a number"),
            Self::OutOfRange { line, valence } => {
                write!(f, "line {line}: valence {valence} is outside [-1, 1]")
            }
        }
    }
}

/// Lowercase word to valence in `[-1, 1]`.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct SentimentLexicon {
    words: BTreeMap<String, f64>,
}

impl SentimentLexicon {
    pub fn new() -> Self {
        Self::default()
    }

    /// Parses `word<TAB>valence` lines; blank lines and `#` comments are
    /// skipped.
    pub fn parse(text: &str) -> Result<Self, LexiconError> {
        let mut lexicon = Self::new();
        for (i, raw) in text.lines().enumerate() {
            let line = i + 1;
            let trimmed = raw.trim();
            if trimmed.is_empty() || trimmed.starts_with('#') {
                continue;
            }
            let (word, value) = trimmed.split_once('\t').ok_or(LexiconError::Syntax { line })?;
            let word = word.trim();
            let value = value.trim();
            if word.is_empty() || !word.chars().all(char::is_alphabetic) {
                return Err(LexiconError::Syntax { line });
            }
            let valence: f64 = value
                .parse()
                .map_err(|_| LexiconError::BadValence { line, value: value.to_string() })?;
            if !(-1.0..=1.0).contains(&valence) {
                return Err(LexiconError::OutOfRange { line, valence });
            }
            lexicon.words.insert(word.to_lowercase(), valence);
        }
        Ok(lexicon)
    }

    /// Inserts a word, lowercased. Returns `false` for an out-of-range
    /// valence.
    pub fn insert(&mut self, word: &str, valence: f64) -> bool {
        if !(-1.0..=1.0).contains(&valence) {
            return false;
        }
        self.words.insert(word.to_lowercase(), valence);
        true
    }

    pub fn get(&self, word: &str) -> Option<f64> {
        self.words.get(word).copied()
    }

    pub fn len(&self) -> usize {
        self.words.len()
    }

    pub fn is_empty(&self) -> bool {
        self.words.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = (&str, f64)> {
        self.words.iter().map(|(w, v)| (w.as_str(), *v))
    }
}

/// Lowercased runs of letters.
pub fn tokenize(text: &str) -> Vec<String> {
    text.split(|c: char| !c.is_alphabetic())
        .filter(|t| !t.is_empty())
        .map(|t| t.to_lowercase())
        .collect()
}

/// Mean valence of the words found in the lexicon; 0 when none match.
pub fn score_sentiment(lexicon: &SentimentLexicon, text: &str) -> f64 {
    let (sum, count) = tokenize(text)
        .iter()
        .filter_map(|t| lexicon.get(t))
        .fold((0.0, 0usize), |(s, n), v| (s + v, n + 1));
    if count == 0 {
        0.0
    } else {
        (sum / count as f64).clamp(-1.0, 1.0)
    }
}

pub const HAPPY_THRESHOLD: f64 = 0.25;
pub const SAD_THRESHOLD: f64 = -0.25;
pub const ANGRY_THRESHOLD: f64 = -0.6;

pub fn select_expression(valence: f64) -> ExpressionTag {
    if valence >= HAPPY_THRESHOLD {
        ExpressionTag::Happy
    } else if valence <= ANGRY_THRESHOLD {
        ExpressionTag::Angry
    } else if valence <= SAD_THRESHOLD {
        ExpressionTag::Sad
    } else {
        ExpressionTag::Neutral
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn lex(pairs: &[(&str, f64)]) -> SentimentLexicon {
        let mut l = SentimentLexicon::new();
        for (w, v) in pairs {
            assert!(l.insert(w, *v));
        }
        l
    }

    #[test]
    fn single_match() {
        assert_eq!(score_sentiment(&lex(&[("happy", 0.8)]), "What a happy day"), 0.8);
    }

    #[test]
    fn no_match_is_zero() {
        assert_eq!(score_sentiment(&lex(&[("happy", 0.8)]), "xyzzy"), 0.0);
        assert_eq!(score_sentiment(&lex(&[("happy", 0.8)]), ""), 0.0);
    }

    #[test]
    fn mean_of_matches() {
        let l = lex(&[("good", 0.6), ("terrible", -0.9)]);
        assert!((score_sentiment(&l, "good but terrible") - (-0.15)).abs() < 1e-15);
        assert!((score_sentiment(&l, "GOOD, but... Terrible!") - (-0.15)).abs() < 1e-15);
    }

    #[test]
    fn threshold_table() {
        use ExpressionTag::*;
        let cases = [
            (-1.0, Angry),
            (-0.6, Angry),
            (-0.59, Sad),
            (-0.25, Sad),
            (-0.24, Neutral),
            (0.0, Neutral),
            (0.24, Neutral),
            (0.25, Happy),
            (0.6, Happy),
            (0.8, Happy),
            (1.0, Happy),
        ];
        for (v, tag) in cases {
            assert_eq!(select_expression(v), tag, "valence {v}");
        }
    }

    #[test]
    fn lexicon_file_format() {
        let text = "# comment\n\nhappy\t0.8\nSad\t-0.5\n";
        let l = SentimentLexicon::parse(text).unwrap();
        assert_eq!(l.len(), 2);
        assert_eq!(l.get("sad"), Some(-0.5));
        assert_eq!(SentimentLexicon::parse("happy 0.8"), Err(LexiconError::Syntax { line: 1 }));
        assert!(matches!(SentimentLexicon::parse("happy\tlots"), Err(LexiconError::BadValence { line: 1, .. })));
        assert!(matches!(SentimentLexicon::parse("ok\t0\nwow\t1.5"), Err(LexiconError::OutOfRange { line: 2, .. })));
    }

    #[test]
    fn tags_round_trip_through_strings() {
        for t in ExpressionTag::ALL {
            assert_eq!(t.as_str().parse::<ExpressionTag>(), Ok(t));
        }
        assert!("grumpy".parse::<ExpressionTag>().is_err());
    }
}
