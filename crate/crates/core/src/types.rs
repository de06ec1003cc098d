//! Domain types shared by all solvers: words, utterances, reference and
//! hypothesis sets, edit costs, error counts and scoring results.
//!
//! All types are immutable after construction and safe to share across
//! concurrently scored sessions.

use std::fmt;

use serde::Serialize;

use crate::error::{MevalError, Result};

/// A single word token. Case-sensitive, non-empty, no internal whitespace;
/// equality is exact symbol equality with no normalization.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
#[serde(transparent)]
pub struct Word(String);

impl Word {
    pub fn new(token: impl Into<String>) -> Result<Self> {
        let token = token.into();
        if token.is_empty() || token.chars().any(char::is_whitespace) {
            return Err(MevalError::InvalidWord(token));
        }
        Ok(Word(token))
    }

    pub fn as_str(&self) -> &str {
        &self.0
    }
}

impl fmt::Display for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

/// Split text into words on runs of whitespace. No case folding, no
/// punctuation stripping; empty text yields an empty sequence.
pub fn tokenize(text: &str) -> Vec<Word> {
    text.split_whitespace()
        .map(|t| Word(t.to_string()))
        .collect()
}

/// A contiguous portion of speech by a single speaker, treated as atomic by
/// the solvers: it must map to exactly one hypothesis channel.
#[derive(Debug, Clone, PartialEq)]
pub struct Utterance {
    words: Vec<Word>,
    begin_time: Option<f64>,
    source_index: usize,
}

impl Utterance {
    /// `begin_time`, when present, must be finite and non-negative.
    /// `source_index` is the position of the segment in its input file and
    /// must be unique within a session.
    pub fn new(words: Vec<Word>, begin_time: Option<f64>, source_index: usize) -> Result<Self> {
        if let Some(t) = begin_time
            && (!t.is_finite() || t < 0.0)
        {
            return Err(MevalError::InvalidSegment(format!(
                "begin time must be a non-negative real, got {t}"
            )));
        }
        Ok(Utterance {
            words,
            begin_time,
            source_index,
        })
    }

    pub fn words(&self) -> &[Word] {
        &self.words
    }

    pub fn begin_time(&self) -> Option<f64> {
        self.begin_time
    }

    pub fn source_index(&self) -> usize {
        self.source_index
    }

    /// Empty utterances are allowed (empty transcript) and contribute 0 to
    /// the reference length.
    pub fn len(&self) -> usize {
        self.words.len()
    }

    pub fn is_empty(&self) -> bool {
        self.words.is_empty()
    }
}

/// One reference speaker and their utterance stream, in temporal order.
#[derive(Debug, Clone, PartialEq)]
pub struct Speaker {
    label: String,
    utterances: Vec<Utterance>,
}

impl Speaker {
    /// Orders the utterances by begin time when every utterance carries one,
    /// otherwise by source index. Ties break by source index (stable). This
    /// order is immutable afterwards: solvers never reorder a speaker's
    /// utterances.
    pub fn new(label: impl Into<String>, mut utterances: Vec<Utterance>) -> Self {
        if utterances.iter().all(|u| u.begin_time.is_some()) {
            utterances.sort_by(|a, b| {
                a.begin_time
                    .unwrap()
                    .total_cmp(&b.begin_time.unwrap())
                    .then(a.source_index.cmp(&b.source_index))
            });
        } else {
            utterances.sort_by_key(|u| u.source_index);
        }
        Speaker {
            label: label.into(),
            utterances,
        }
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn utterances(&self) -> &[Utterance] {
        &self.utterances
    }

    /// Total number of words across all utterances.
    pub fn word_count(&self) -> usize {
        self.utterances.iter().map(Utterance::len).sum()
    }
}

/// Per-session reference: K speakers, each with an ordered utterance stream.
#[derive(Debug, Clone, PartialEq)]
pub struct ReferenceSet {
    speakers: Vec<Speaker>,
}

impl ReferenceSet {
    pub fn new(speakers: Vec<Speaker>) -> Self {
        ReferenceSet { speakers }
    }

    pub fn speakers(&self) -> &[Speaker] {
        &self.speakers
    }

    /// K, the number of reference streams.
    pub fn speaker_count(&self) -> usize {
        self.speakers.len()
    }

    /// Total reference length in words; empty utterances contribute 0.
    pub fn word_count(&self) -> usize {
        self.speakers.iter().map(Speaker::word_count).sum()
    }

    /// Total number of utterances across speakers.
    pub fn utterance_count(&self) -> usize {
        self.speakers.iter().map(|s| s.utterances.len()).sum()
    }
}

/// One output channel of the ASR system: a word stream in emission order.
#[derive(Debug, Clone, PartialEq)]
pub struct Channel {
    label: String,
    words: Vec<Word>,
}

impl Channel {
    pub fn new(label: impl Into<String>, words: Vec<Word>) -> Self {
        Channel {
            label: label.into(),
            words,
        }
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn words(&self) -> &[Word] {
        &self.words
    }
}

/// Per-session hypothesis: C channels, empty channels permitted.
#[derive(Debug, Clone, PartialEq)]
pub struct HypothesisSet {
    channels: Vec<Channel>,
}

impl HypothesisSet {
    pub fn new(channels: Vec<Channel>) -> Self {
        HypothesisSet { channels }
    }

    pub fn channels(&self) -> &[Channel] {
        &self.channels
    }

    /// C, the number of hypothesis channels.
    pub fn channel_count(&self) -> usize {
        self.channels.len()
    }

    pub fn word_count(&self) -> usize {
        self.channels.iter().map(|c| c.words.len()).sum()
    }
}

/// Edit-operation costs. The default (0, 1, 1, 1) gives the classic
/// Levenshtein distance; other toolkits use other values.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct CostConfig {
    pub correct: u32,
    pub substitution: u32,
    pub insertion: u32,
    pub deletion: u32,
}

impl CostConfig {
    /// Rejects configurations where substituting an identical word would be
    /// cheaper than matching it (`correct > substitution`).
    pub fn new(correct: u32, substitution: u32, insertion: u32, deletion: u32) -> Result<Self> {
        if correct > substitution {
            return Err(MevalError::InvalidCosts(format!(
                "correct cost {correct} exceeds substitution cost {substitution}"
            )));
        }
        Ok(CostConfig {
            correct,
            substitution,
            insertion,
            deletion,
        })
    }
}

impl Default for CostConfig {
    fn default() -> Self {
        CostConfig {
            correct: 0,
            substitution: 1,
            insertion: 1,
            deletion: 1,
        }
    }
}

/// Substitution/insertion/deletion/correct tallies from an alignment,
/// together with the reference length they were counted against.
///
/// Invariant: `substitutions + deletions + correct == ref_length`.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize)]
pub struct ErrorCounts {
    pub substitutions: u64,
    pub insertions: u64,
    pub deletions: u64,
    pub correct: u64,
    pub ref_length: u64,
}

impl ErrorCounts {
    pub fn new(
        substitutions: u64,
        insertions: u64,
        deletions: u64,
        correct: u64,
        ref_length: u64,
    ) -> Self {
        debug_assert_eq!(substitutions + deletions + correct, ref_length);
        ErrorCounts {
            substitutions,
            insertions,
            deletions,
            correct,
            ref_length,
        }
    }

    /// Total error count: substitutions + insertions + deletions.
    pub fn errors(&self) -> u64 {
        self.substitutions + self.insertions + self.deletions
    }

    /// Fieldwise sum, used for pooling channels within a session and
    /// sessions within a corpus (micro-averaging). Overflow is a fatal
    /// error rather than a silent wrap.
    pub fn combine(&self, other: &ErrorCounts) -> Result<ErrorCounts> {
        let add = |a: u64, b: u64| a.checked_add(b).ok_or(MevalError::CountOverflow);
        Ok(ErrorCounts {
            substitutions: add(self.substitutions, other.substitutions)?,
            insertions: add(self.insertions, other.insertions)?,
            deletions: add(self.deletions, other.deletions)?,
            correct: add(self.correct, other.correct)?,
            ref_length: add(self.ref_length, other.ref_length)?,
        })
    }

    /// The error rate for these counts.
    pub fn rate(&self) -> Rate {
        Rate {
            errors: self.errors(),
            length: self.ref_length,
        }
    }
}

/// Fieldwise sum of two error counts. See [`ErrorCounts::combine`].
pub fn combine(a: &ErrorCounts, b: &ErrorCounts) -> Result<ErrorCounts> {
    a.combine(b)
}

/// An error rate kept as an exact integer numerator/denominator pair so
/// golden tests never compare floats.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Rate {
    errors: u64,
    length: u64,
}

impl Rate {
    pub fn new(errors: u64, length: u64) -> Self {
        Rate { errors, length }
    }

    pub fn errors(&self) -> u64 {
        self.errors
    }

    pub fn length(&self) -> u64 {
        self.length
    }

    /// The rate as a float: errors/length, 0 when both are 0, and `None`
    /// (undefined) when the length is 0 but errors were counted.
    pub fn value(&self) -> Option<f64> {
        if self.length > 0 {
            Some(self.errors as f64 / self.length as f64)
        } else if self.errors == 0 {
            Some(0.0)
        } else {
            None
        }
    }

    /// Whether a denominator exists. Reports flag rates with `length == 0`
    /// as undefined even when the numerator is 0.
    pub fn is_defined(&self) -> bool {
        self.length > 0
    }

    /// Exact rendering as "errors/length", e.g. "4/4".
    pub fn ratio_string(&self) -> String {
        format!("{}/{}", self.errors, self.length)
    }

    /// Fixed six-decimal rendering of [`Rate::value`], or `None` when
    /// undefined.
    pub fn decimal_string(&self) -> Option<String> {
        self.value().map(|v| format!("{v:.6}"))
    }
}

impl fmt::Display for Rate {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.ratio_string())
    }
}

/// The error rate of pooled counts. Micro-average: pooled numerator over
/// pooled denominator, never the mean of per-session rates.
pub fn error_rate(counts: &ErrorCounts) -> Rate {
    counts.rate()
}

/// One solver decision: which channel a reference utterance was matched to.
/// `channel` is `None` when the speaker was paired with a padding (dummy)
/// channel by the cpWER permutation, i.e. the utterance words are pure
/// deletions.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Decision {
    pub speaker: String,
    pub utterance: usize,
    pub channel: Option<String>,
}

/// The winning assignment of reference utterances to hypothesis channels, in
/// DP consumption order. Per speaker, utterance indices appear in strictly
/// increasing order, and every reference utterance appears exactly once.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize)]
#[serde(transparent)]
pub struct Assignment {
    decisions: Vec<Decision>,
}

impl Assignment {
    pub fn new(decisions: Vec<Decision>) -> Self {
        Assignment { decisions }
    }

    pub fn decisions(&self) -> &[Decision] {
        &self.decisions
    }

    pub fn is_empty(&self) -> bool {
        self.decisions.is_empty()
    }
}

/// Final result of scoring one session with one metric.
#[derive(Debug, Clone, PartialEq)]
pub struct WerResult {
    counts: ErrorCounts,
    rate: Rate,
    assignment: Assignment,
}

impl WerResult {
    /// The rate is derived from the counts, keeping numerator and
    /// denominator consistent by construction.
    pub fn new(counts: ErrorCounts, assignment: Assignment) -> Self {
        WerResult {
            counts,
            rate: counts.rate(),
            assignment,
        }
    }

    pub fn counts(&self) -> &ErrorCounts {
        &self.counts
    }

    pub fn rate(&self) -> Rate {
        self.rate
    }

    pub fn assignment(&self) -> &Assignment {
        &self.assignment
    }

    /// Shorthand for `counts().errors()`.
    pub fn errors(&self) -> u64 {
        self.counts.errors()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn words(text: &str) -> Vec<Word> {
        tokenize(text)
    }

    #[test]
    fn tokenize_splits_on_whitespace() {
        assert_eq!(
            tokenize("a b"),
            vec![Word::new("a").unwrap(), Word::new("b").unwrap()]
        );
    }

    #[test]
    fn tokenize_empty_text() {
        assert!(tokenize("").is_empty());
    }

    #[test]
    fn tokenize_collapses_whitespace_runs() {
        let got: Vec<String> = tokenize("a  b\tc").iter().map(|w| w.to_string()).collect();
        assert_eq!(got, ["a", "b", "c"]);
    }

    #[test]
    fn word_rejects_empty_and_whitespace() {
        assert!(Word::new("").is_err());
        assert!(Word::new("a b").is_err());
        assert!(Word::new("ok").is_ok());
    }

    #[test]
    fn words_compare_case_sensitively() {
        assert_ne!(Word::new("Hello").unwrap(), Word::new("hello").unwrap());
    }

    #[test]
    fn combine_identity() {
        let a = ErrorCounts::new(1, 0, 1, 3, 5);
        let zero = ErrorCounts::default();
        assert_eq!(a.combine(&zero).unwrap(), a);
    }

    #[test]
    fn combine_fieldwise() {
        let a = ErrorCounts::new(1, 1, 0, 2, 3);
        let b = ErrorCounts::new(0, 0, 2, 2, 4);
        assert_eq!(a.combine(&b).unwrap(), ErrorCounts::new(1, 1, 2, 4, 7));
    }

    #[test]
    fn combine_cpwer_pair_counts() {
        // The two per-pair alignments behind the 4/4 diarization-error case:
        // two insertions on the matched channel, two deletions on the empty one.
        let pair1 = ErrorCounts::new(0, 2, 0, 2, 2);
        let pair2 = ErrorCounts::new(0, 0, 2, 0, 2);
        let total = pair1.combine(&pair2).unwrap();
        assert_eq!(total.errors(), 4);
        assert_eq!(total.ref_length, 4);
    }

    #[test]
    fn combine_is_associative_and_commutative() {
        let a = ErrorCounts::new(1, 2, 0, 3, 4);
        let b = ErrorCounts::new(0, 1, 2, 2, 4);
        let c = ErrorCounts::new(2, 0, 1, 0, 3);
        assert_eq!(a.combine(&b).unwrap(), b.combine(&a).unwrap());
        assert_eq!(
            a.combine(&b).unwrap().combine(&c).unwrap(),
            a.combine(&b.combine(&c).unwrap()).unwrap()
        );
    }

    #[test]
    fn combine_overflow_is_fatal() {
        let a = ErrorCounts {
            substitutions: u64::MAX,
            ..Default::default()
        };
        let b = ErrorCounts {
            substitutions: 1,
            ..Default::default()
        };
        assert_eq!(a.combine(&b), Err(MevalError::CountOverflow));
    }

    #[test]
    fn error_rate_examples() {
        assert_eq!(Rate::new(4, 4).value(), Some(1.0));
        assert_eq!(Rate::new(0, 8).value(), Some(0.0));
        assert_eq!(Rate::new(3, 0).value(), None);
        assert_eq!(Rate::new(0, 0).value(), Some(0.0));
        assert!(!Rate::new(0, 0).is_defined());
    }

    #[test]
    fn rate_rendering() {
        let r = Rate::new(2, 5);
        assert_eq!(r.ratio_string(), "2/5");
        assert_eq!(r.decimal_string().unwrap(), "0.400000");
        assert_eq!(Rate::new(3, 0).decimal_string(), None);
    }

    #[test]
    fn cost_config_rejects_cheap_substitution() {
        assert!(CostConfig::new(2, 1, 1, 1).is_err());
        assert!(CostConfig::new(0, 1, 1, 1).is_ok());
        assert!(CostConfig::new(1, 1, 1, 1).is_ok());
    }

    #[test]
    fn speaker_orders_by_begin_time_then_source() {
        let u = |t: Option<f64>, idx: usize| Utterance::new(words("x"), t, idx).unwrap();
        let spk = Speaker::new("A", vec![u(Some(2.0), 0), u(Some(1.0), 1)]);
        assert_eq!(spk.utterances()[0].source_index(), 1);

        // Equal times keep input-file order.
        let spk = Speaker::new("A", vec![u(Some(1.0), 5), u(Some(1.0), 3)]);
        assert_eq!(spk.utterances()[0].source_index(), 3);

        // Any missing time falls back to source order entirely.
        let spk = Speaker::new("A", vec![u(None, 2), u(Some(0.0), 1)]);
        assert_eq!(spk.utterances()[0].source_index(), 1);
    }

    #[test]
    fn utterance_rejects_bad_begin_time() {
        assert!(Utterance::new(vec![], Some(-1.0), 0).is_err());
        assert!(Utterance::new(vec![], Some(f64::NAN), 0).is_err());
        assert!(Utterance::new(vec![], Some(0.0), 0).is_ok());
    }

    #[test]
    fn reference_set_word_count_skips_empty_utterances() {
        let spk = Speaker::new(
            "A",
            vec![
                Utterance::new(words("a b"), None, 0).unwrap(),
                Utterance::new(vec![], None, 1).unwrap(),
            ],
        );
        let refs = ReferenceSet::new(vec![spk]);
        assert_eq!(refs.word_count(), 2);
        assert_eq!(refs.utterance_count(), 2);
    }
}
