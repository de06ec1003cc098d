//! Reference streams with channel-change tokens.
//!
//! A speaker's utterances become one stream with an out-of-band change token
//! before every utterance. Change tokens are the only positions where the
//! constrained DP may switch its active (speaker, channel) pair, which is
//! what penalizes splitting an utterance across channels.

use crate::types::{ReferenceSet, Word};

/// One stream item: either a vocabulary word or the reserved channel-change
/// marker. The marker is out-of-band by construction and can never equal a
/// vocabulary word.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum StreamItem {
    Change,
    Word(Word),
}

/// One speaker's utterances flattened into a token stream: a leading change
/// token, then each utterance's words with a change token between
/// consecutive utterances.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ReferenceStream {
    speaker: String,
    items: Vec<StreamItem>,
}

impl ReferenceStream {
    pub fn speaker(&self) -> &str {
        &self.speaker
    }

    pub fn items(&self) -> &[StreamItem] {
        &self.items
    }

    /// Number of change tokens; equals the number of utterances.
    pub fn change_token_count(&self) -> usize {
        self.items
            .iter()
            .filter(|i| matches!(i, StreamItem::Change))
            .count()
    }

    /// The stream with change tokens removed: the concatenation of the
    /// speaker's utterance words in order.
    pub fn words(&self) -> Vec<&Word> {
        self.items
            .iter()
            .filter_map(|i| match i {
                StreamItem::Word(w) => Some(w),
                StreamItem::Change => None,
            })
            .collect()
    }
}

/// Build one stream per speaker. An utterance contributes its words preceded
/// by one change token, so a speaker with utterances `[[a, b], [c]]` yields
/// `[*, a, b, *, c]`.
pub fn build_reference_streams(refset: &ReferenceSet) -> Vec<ReferenceStream> {
    refset
        .speakers()
        .iter()
        .map(|spk| {
            let mut items = Vec::new();
            for utterance in spk.utterances() {
                items.push(StreamItem::Change);
                items.extend(utterance.words().iter().cloned().map(StreamItem::Word));
            }
            ReferenceStream {
                speaker: spk.label().to_string(),
                items,
            }
        })
        .collect()
}
