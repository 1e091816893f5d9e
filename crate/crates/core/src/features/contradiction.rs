//! Contradiction cues: negation, numbers, dates and times.

use crate::text::tokenize;

const NEGATIONS: &[&str] = &[
    "not", "no", "never", "nothing", "nobody", "none", "neither", "nor", "nowhere", "cannot",
    "without", "nope",
];

// Stems left behind when the tokenizer splits "n't" contractions ("didn't" -> "didn", "t").
const NT_STEMS: &[&str] = &[
    "don", "didn", "doesn", "isn", "wasn", "aren", "weren", "won", "wouldn", "shouldn", "couldn",
    "can", "haven", "hasn", "hadn", "ain", "mustn", "needn",
];

const MAGNITUDES: &[&str] = &["hundred", "thousand", "million", "billion", "trillion", "percent", "dozen"];

const MONTHS: &[&str] = &[
    "january", "february", "march", "april", "june", "july", "august", "september", "october",
    "november", "december",
];

const WEEKDAYS: &[&str] = &["monday", "tuesday", "wednesday", "thursday", "friday", "saturday", "sunday"];

const RELATIVE_TIME: &[&str] = &["yesterday", "today", "tomorrow", "tonight", "ago", "decade", "decades"];

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct ContradictionCounts {
    pub negations: usize,
    pub numbers: usize,
    pub dates: usize,
}

impl ContradictionCounts {
    pub fn to_array(self) -> [f64; 3] {
        [self.negations as f64, self.numbers as f64, self.dates as f64]
    }
}

fn is_digits(t: &str) -> bool {
    !t.is_empty() && t.chars().all(|c| c.is_ascii_digit())
}

fn is_year(t: &str) -> bool {
    t.len() == 4 && is_digits(t) && matches!(&t[..2], "18" | "19" | "20")
}

/// Decade tokens such as `1990s` or `80s`.
fn is_decade(t: &str) -> bool {
    t.len() >= 3 && t.ends_with('s') && is_digits(&t[..t.len() - 1]) && t[..t.len() - 1].ends_with('0')
}

/// Counts numeric expressions in raw text: maximal digit runs, allowing
/// internal `.` or `,` between digits ("3.5", "1,000").
fn numeric_spans(text: &str) -> usize {
    let bytes = text.as_bytes();
    let mut count = 0;
    let mut i = 0;
    while i < bytes.len() {
        if bytes[i].is_ascii_digit() {
            count += 1;
            while i < bytes.len()
                && (bytes[i].is_ascii_digit()
                    || (matches!(bytes[i], b'.' | b',')
                        && i + 1 < bytes.len()
                        && bytes[i + 1].is_ascii_digit()))
            {
                i += 1;
            }
        } else {
            i += 1;
        }
    }
    count
}

pub fn contradiction_features(text: &str) -> ContradictionCounts {
    let tokens = tokenize(text);
    let mut c = ContradictionCounts { numbers: numeric_spans(text), ..Default::default() };
    for (i, t) in tokens.iter().enumerate() {
        let t = t.as_str();
        let prev = i.checked_sub(1).map(|j| tokens[j].as_str());
        if NEGATIONS.contains(&t) || (t == "t" && prev.is_some_and(|p| NT_STEMS.contains(&p))) {
            c.negations += 1;
        }
        // A magnitude word right after a number belongs to that number.
        if MAGNITUDES.contains(&t) && !prev.is_some_and(is_digits) {
            c.numbers += 1;
        }
        if MONTHS.contains(&t) || WEEKDAYS.contains(&t) || RELATIVE_TIME.contains(&t) || is_year(t) || is_decade(t) {
            c.dates += 1;
        }
        // clock times: "9:30", "10 pm"
        if matches!(t, "am" | "pm") && prev.is_some_and(is_digits) {
            c.dates += 1;
        }
    }
    let bytes = text.as_bytes();
    for w in bytes.windows(3) {
        if w[0].is_ascii_digit() && w[1] == b':' && w[2].is_ascii_digit() {
            c.dates += 1;
        }
    }
    c
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn negation_in_short_denial() {
        let c = contradiction_features("I did not.");
        assert_eq!(c.negations, 1);
        assert_eq!(c.numbers, 0);
        assert_eq!(c.dates, 0);
    }

    #[test]
    fn contractions_count_as_negation() {
        assert_eq!(contradiction_features("I didn't say that, and I can't.").negations, 2);
        assert_eq!(contradiction_features("I can do it.").negations, 0);
    }

    #[test]
    fn numbers_in_the_tax_plan_sentence() {
        let c = contradiction_features(
            "if his tax plan, which would blow up the debt by over $5 trillion and would in some \
             instances disadvantage middle-class families compared to the wealthy, were to go into \
             effect, we would lose 3.5 million jobs and maybe have another recession.",
        );
        assert!(c.numbers >= 1);
        assert_eq!(c.numbers, 2);
    }

    #[test]
    fn dates_and_times() {
        let c = contradiction_features("Since January 1st, 2016 and back in the 1990s, at 9:30 pm.");
        assert_eq!(c.dates, 5);
    }

    #[test]
    fn plain_sentence_has_no_triggers() {
        assert_eq!(contradiction_features("Take clean energy."), ContradictionCounts::default());
    }
}
