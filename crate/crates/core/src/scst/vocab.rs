use std::collections::HashMap;

use super::ScstError;

/// End-of-sequence marker of every toy vocabulary.
pub const EOS: &str = "<eos>";

/// Word list of the toy task. The end marker always sits at index 0.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ToyVocabulary {
    tokens: Vec<String>,
    index: HashMap<String, usize>,
}

impl ToyVocabulary {
    /// Builds a vocabulary from words; the end marker is prepended and must
    /// not appear among `words`. Words must be unique.
    pub fn new<I, S>(words: I) -> Result<Self, ScstError>
    where
        I: IntoIterator<Item = S>,
        S: Into<String>,
    {
        let mut tokens = vec![EOS.to_string()];
        let mut index = HashMap::from([(EOS.to_string(), 0)]);
        for w in words {
            let w = w.into();
            if w.is_empty() || w.chars().any(char::is_whitespace) {
                return Err(ScstError::InvalidConfig(format!("bad vocabulary word {w:?}")));
            }
            if index.insert(w.clone(), tokens.len()).is_some() {
                return Err(ScstError::InvalidConfig(format!("duplicate vocabulary word {w:?}")));
            }
            tokens.push(w);
        }
        Ok(ToyVocabulary { tokens, index })
    }

    pub fn len(&self) -> usize {
        self.tokens.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn eos(&self) -> usize {
        0
    }

    pub fn word(&self, id: usize) -> &str {
        &self.tokens[id]
    }

    pub fn id(&self, word: &str) -> Option<usize> {
        self.index.get(word).copied()
    }

    pub fn words(&self) -> &[String] {
        &self.tokens
    }

    /// Maps whitespace-separated words to ids.
    pub fn encode(&self, text: &str) -> Result<Vec<usize>, ScstError> {
        text.split_whitespace()
            .map(|w| {
                let w = w.to_lowercase();
                self.id(&w).ok_or(ScstError::UnknownToken(w))
            })
            .collect()
    }

    pub fn decode(&self, ids: &[usize]) -> Vec<&str> {
        ids.iter().map(|&i| self.word(i)).collect()
    }
}
