//! Deterministic pseudo-random session generation for benchmarking: a CSS
//! style scenario with utterances round-robin over speakers and a hypothesis
//! assembled as a valid zero-cost assignment plus optional per-word
//! corruption.

use meval_core::{Channel, HypothesisSet, ReferenceSet, Speaker, Utterance, tokenize};
use rand::prelude::*;
use rand_chacha::ChaCha8Rng;

/// One benchmark grid point. Generation is a pure function of the fields.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BenchScenario {
    /// K, number of reference speakers.
    pub speakers: usize,
    /// C, number of hypothesis channels.
    pub channels: usize,
    /// U, total number of utterances (round-robin over speakers).
    pub utterances: usize,
    /// W, words per utterance.
    pub words_per_utterance: usize,
    /// V, vocabulary size.
    pub vocabulary: usize,
    pub seed: u64,
    /// Per-word probability of replacing a hypothesis word with a random
    /// vocabulary word.
    pub corruption: f64,
}

impl BenchScenario {
    pub fn new(
        speakers: usize,
        channels: usize,
        utterances: usize,
        words_per_utterance: usize,
        vocabulary: usize,
        seed: u64,
        corruption: f64,
    ) -> Self {
        assert!(speakers > 0 && channels > 0 && words_per_utterance > 0 && vocabulary > 0);
        BenchScenario {
            speakers,
            channels,
            utterances,
            words_per_utterance,
            vocabulary,
            seed,
            corruption,
        }
    }
}

/// Generate the session for a scenario. Utterance `i` belongs to speaker
/// `i mod K` and begins at time `i`; the hypothesis assigns every utterance
/// to a pseudo-random channel and concatenates in time order, so with
/// corruption 0 a zero-cost assignment exists by construction.
pub fn generate_scenario(scenario: &BenchScenario) -> (ReferenceSet, HypothesisSet) {
    let mut rng = ChaCha8Rng::seed_from_u64(scenario.seed);
    let vocabulary: Vec<String> = (0..scenario.vocabulary).map(|i| format!("w{i}")).collect();

    let mut utterances: Vec<Vec<usize>> = Vec::with_capacity(scenario.utterances);
    for _ in 0..scenario.utterances {
        utterances.push(
            (0..scenario.words_per_utterance)
                .map(|_| rng.random_range(0..scenario.vocabulary))
                .collect(),
        );
    }

    let mut per_speaker: Vec<Vec<Utterance>> = vec![Vec::new(); scenario.speakers];
    for (i, words) in utterances.iter().enumerate() {
        let text: Vec<&str> = words.iter().map(|&w| vocabulary[w].as_str()).collect();
        per_speaker[i % scenario.speakers].push(
            Utterance::new(tokenize(&text.join(" ")), Some(i as f64), i)
                .expect("generated utterances are valid"),
        );
    }
    let refset = ReferenceSet::new(
        per_speaker
            .into_iter()
            .enumerate()
            .map(|(k, utts)| Speaker::new(format!("spk{k}"), utts))
            .collect(),
    );

    let mut channel_words: Vec<Vec<usize>> = vec![Vec::new(); scenario.channels];
    for words in &utterances {
        let channel = rng.random_range(0..scenario.channels);
        for &w in words {
            let emitted = if scenario.corruption > 0.0 && rng.random::<f64>() < scenario.corruption
            {
                rng.random_range(0..scenario.vocabulary)
            } else {
                w
            };
            channel_words[channel].push(emitted);
        }
    }
    let hypset = HypothesisSet::new(
        channel_words
            .into_iter()
            .enumerate()
            .map(|(c, words)| {
                let text: Vec<&str> = words.iter().map(|&w| vocabulary[w].as_str()).collect();
                Channel::new(format!("ch{c}"), tokenize(&text.join(" ")))
            })
            .collect(),
    );

    (refset, hypset)
}
