use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;

use crate::corpus::Debate;
use crate::text::tokenize;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SpeakerRole {
    Candidate,
    Moderator,
    /// Audience members and anyone not listed.
    Other,
}

impl SpeakerRole {
    pub const ALL: [SpeakerRole; 3] = [SpeakerRole::Candidate, SpeakerRole::Moderator, SpeakerRole::Other];
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Candidate {
    /// Speaker label as it appears in transcripts, matched case-insensitively.
    pub name: String,
    /// Lowercase tokens that refer to this candidate in running text.
    pub aliases: Vec<String>,
}

/// Who is a candidate and who moderates.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SpeakerRoles {
    pub candidates: Vec<Candidate>,
    pub moderators: Vec<String>,
}

impl SpeakerRoles {
    /// Participants of the 2016 US presidential and vice-presidential debates.
    pub fn us_2016() -> SpeakerRoles {
        let cand = |name: &str, aliases: &[&str]| Candidate {
            name: name.into(),
            aliases: aliases.iter().map(|a| String::from(*a)).collect(),
        };
        SpeakerRoles {
            candidates: vec![
                cand("Clinton", &["clinton", "hillary"]),
                cand("Trump", &["trump", "donald"]),
                cand("Pence", &["pence"]),
                cand("Kaine", &["kaine"]),
            ],
            moderators: ["Holt", "Raddatz", "Cooper", "Wallace", "Quijano"]
                .iter()
                .map(|m| String::from(*m))
                .collect(),
        }
    }

    fn candidate_index(&self, speaker: &str) -> Option<usize> {
        self.candidates.iter().position(|c| c.name.eq_ignore_ascii_case(speaker.trim()))
    }

    pub fn role(&self, speaker: &str) -> SpeakerRole {
        if self.candidate_index(speaker).is_some() {
            SpeakerRole::Candidate
        } else if self.moderators.iter().any(|m| m.eq_ignore_ascii_case(speaker.trim())) {
            SpeakerRole::Moderator
        } else {
            SpeakerRole::Other
        }
    }

    /// True when `tokens` name a candidate other than `speaker`.
    pub fn mentions_opponent(&self, speaker: &str, tokens: &[String]) -> bool {
        let own = self.candidate_index(speaker);
        self.candidates
            .iter()
            .enumerate()
            .filter(|(i, _)| Some(*i) != own)
            .any(|(_, c)| tokens.iter().any(|t| c.aliases.iter().any(|a| a == t)))
    }
}

impl Default for SpeakerRoles {
    fn default() -> Self {
        SpeakerRoles::us_2016()
    }
}

/// Interventions (maximal same-speaker runs) of one debate.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DebateLayout {
    /// For every sentence: (run start, run length).
    runs: Vec<(usize, usize)>,
}

impl DebateLayout {
    pub fn new(debate: &Debate) -> DebateLayout {
        let n = debate.len();
        let mut runs = vec![(0, 0); n];
        let mut start = 0;
        while start < n {
            let speaker = &debate.sentences[start].speaker;
            let mut end = start + 1;
            while end < n && &debate.sentences[end].speaker == speaker {
                end += 1;
            }
            for r in &mut runs[start..end] {
                *r = (start, end - start);
            }
            start = end;
        }
        DebateLayout { runs }
    }

    pub fn intervention(&self, index: usize) -> (usize, usize) {
        self.runs[index]
    }
}

/// Position, segment and speaker features of one sentence.
#[derive(Clone, Debug, PartialEq)]
pub struct Structural {
    /// `index / (n - 1)`, 0 for single-sentence debates.
    pub debate_position: f64,
    pub intervention_length: usize,
    /// Offset within the intervention over `(length - 1)`, 0 for one-sentence runs.
    pub intervention_position: f64,
    pub role: SpeakerRole,
    pub opponent_mentioned: bool,
}

pub fn structural_features(
    debate: &Debate,
    layout: &DebateLayout,
    index: usize,
    roles: &SpeakerRoles,
) -> Structural {
    let n = debate.len();
    let s = &debate.sentences[index];
    let (start, len) = layout.intervention(index);
    let debate_position = if n > 1 { index as f64 / (n - 1) as f64 } else { 0.0 };
    let intervention_position =
        if len > 1 { (index - start) as f64 / (len - 1) as f64 } else { 0.0 };
    let tokens = tokenize(&s.text);
    Structural {
        debate_position,
        intervention_length: len,
        intervention_position,
        role: roles.role(&s.speaker),
        opponent_mentioned: roles.mentions_opponent(&s.speaker, &tokens),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::corpus::tests::sentence;
    use crate::corpus::Corpus;

    fn debate(speakers: &[&str]) -> Debate {
        let sentences = speakers
            .iter()
            .enumerate()
            .map(|(i, s)| sentence("d", i, s, "Something was said.", [0; 9]));
        Corpus::from_sentences(sentences).unwrap().debates()[0].clone()
    }

    #[test]
    fn debate_position_boundaries() {
        let d = debate(&["Holt", "Clinton", "Trump", "Holt"]);
        let layout = DebateLayout::new(&d);
        let roles = SpeakerRoles::default();
        assert_eq!(structural_features(&d, &layout, 0, &roles).debate_position, 0.0);
        assert_eq!(structural_features(&d, &layout, 3, &roles).debate_position, 1.0);
    }

    #[test]
    fn seven_sentence_intervention() {
        let mut speakers = vec!["Holt"];
        speakers.extend([ "Clinton"; 7]);
        speakers.push("Trump");
        let d = debate(&speakers);
        let layout = DebateLayout::new(&d);
        let f = structural_features(&d, &layout, 3, &SpeakerRoles::default());
        assert_eq!(f.intervention_length, 7);
        assert!((f.intervention_position - 2.0 / 6.0).abs() < 1e-12);
        assert!((f.intervention_position - 0.3333).abs() < 1e-4);
        assert_eq!(f.role, SpeakerRole::Candidate);
    }

    #[test]
    fn roles_and_opponent_mentions() {
        let roles = SpeakerRoles::default();
        assert_eq!(roles.role("HOLT"), SpeakerRole::Moderator);
        assert_eq!(roles.role("Audience"), SpeakerRole::Other);
        let t = tokenize("Donald thinks that climate change is a hoax");
        assert!(roles.mentions_opponent("Clinton", &t));
        assert!(!roles.mentions_opponent("Trump", &t));
    }
}
