use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};

/// Every family of macrorealism condition the crate evaluates.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Family {
    Lg2Dichotomic,
    Lg2Nvalued,
    Lg2Qrs,
    Lg3Dichotomic,
    Lg3Nvalued,
    Lg3Qrs,
    Lg4Chsh,
    NsitFull,
    NsitDichotomic,
    Nsit3Second,
    Nsit3First,
    Nsit3Middle,
}

impl Family {
    pub const ALL: [Family; 12] = [
        Family::Lg2Dichotomic,
        Family::Lg2Nvalued,
        Family::Lg2Qrs,
        Family::Lg3Dichotomic,
        Family::Lg3Nvalued,
        Family::Lg3Qrs,
        Family::Lg4Chsh,
        Family::NsitFull,
        Family::NsitDichotomic,
        Family::Nsit3Second,
        Family::Nsit3First,
        Family::Nsit3Middle,
    ];

    pub fn tag(self) -> &'static str {
        match self {
            Family::Lg2Dichotomic => "LG2-dichotomic",
            Family::Lg2Nvalued => "LG2-Nvalued",
            Family::Lg2Qrs => "LG2-QRS",
            Family::Lg3Dichotomic => "LG3-dichotomic",
            Family::Lg3Nvalued => "LG3-Nvalued",
            Family::Lg3Qrs => "LG3-QRS",
            Family::Lg4Chsh => "LG4-CHSH",
            Family::NsitFull => "NSIT-full",
            Family::NsitDichotomic => "NSIT-dichotomic",
            Family::Nsit3Second => "NSIT3-(2)3",
            Family::Nsit3First => "NSIT3-(1)23",
            Family::Nsit3Middle => "NSIT3-1(2)3",
        }
    }

    /// One-line statement of the condition checked by reports of this family.
    pub fn definition(self) -> &'static str {
        match self {
            Family::Lg2Dichotomic => "1 + s1<Q_i> + s2<Q_j> + s1 s2 C_ij >= 0 for one dichotomic Q per time",
            Family::Lg2Nvalued => "1 + <Q_i(n_i)> + <Q_j(n_j)> + <Q_i(n_i) Q_j(n_j)> >= 0 (optionally with Q(n) sign-flipped)",
            Family::Lg2Qrs => "N=3 two-time set in Q,R only after eliminating S = -1 - Q - R (labels a..i)",
            Family::Lg3Dichotomic => "1 + s1 s2 C12 + s2 s3 C23 + s1 s3 C13 >= 0 for one dichotomic Q per time",
            Family::Lg3Nvalued => "1 + <Q1(n1)Q2(n2)> + <Q2(n2)Q3(n3)> + <Q1(n1)Q3(n3)> >= 0 (optionally sign-flipped)",
            Family::Lg3Qrs => "N=3 three-time set labelled by Q/R/S per time, evaluated from Q,R moments",
            Family::Lg4Chsh => "|C12 + C23 + C34 + C14 with one term negated| <= 2",
            Family::NsitFull => "p_j(n_j) - sum_{n_i} p_ij(n_i, n_j) = 0",
            Family::NsitDichotomic => "p_j(n_j) - sum_s p^Q_ij(s, n_j) = 0 with Q measured at the earlier time",
            Family::Nsit3Second => "p3(n3) - sum_{n2} p23(n2, n3) = 0",
            Family::Nsit3First => "p23(n2, n3) - sum_{n1} p123(n1, n2, n3) = 0",
            Family::Nsit3Middle => "p13(n1, n3) - sum_{n2} p123(n1, n2, n3) = 0",
        }
    }

    pub fn is_nsit(self) -> bool {
        matches!(
            self,
            Family::NsitFull
                | Family::NsitDichotomic
                | Family::Nsit3Second
                | Family::Nsit3First
                | Family::Nsit3Middle
        )
    }

    /// Number of measurement times the family involves.
    pub fn time_count(self) -> usize {
        match self {
            Family::Lg2Dichotomic | Family::Lg2Nvalued | Family::Lg2Qrs => 2,
            Family::NsitFull | Family::NsitDichotomic => 2,
            Family::Lg4Chsh => 4,
            _ => 3,
        }
    }
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.tag())
    }
}

impl FromStr for Family {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Family::ALL
            .into_iter()
            .find(|fam| fam.tag() == s)
            .ok_or_else(|| Error::InvalidSpec(format!("unknown condition family `{s}`")))
    }
}

impl Serialize for Family {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(self.tag())
    }
}

impl<'de> Deserialize<'de> for Family {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

/// Identifier of one condition: family, time labels (1-based), outcome
/// tuple (1-based), sign pattern and, where relevant, the observable label.
///
/// Canonical text form: `FAMILY[t=1,2;n=1,3;s=+-;obs=+--;k=a]`, empty
/// fields omitted.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ConditionId {
    pub family: Family,
    pub times: Vec<usize>,
    pub outcomes: Vec<usize>,
    pub signs: Vec<i8>,
    pub observable: Option<String>,
    pub label: Option<String>,
}

impl ConditionId {
    pub fn new(family: Family, times: Vec<usize>) -> Self {
        Self {
            family,
            times,
            outcomes: Vec::new(),
            signs: Vec::new(),
            observable: None,
            label: None,
        }
    }

    pub fn outcomes(mut self, zero_based: &[usize]) -> Self {
        self.outcomes = zero_based.iter().map(|n| n + 1).collect();
        self
    }

    pub fn signs(mut self, signs: &[i8]) -> Self {
        self.signs = signs.to_vec();
        self
    }

    pub fn observable(mut self, label: impl Into<String>) -> Self {
        self.observable = Some(label.into());
        self
    }

    pub fn label(mut self, label: impl Into<String>) -> Self {
        self.label = Some(label.into());
        self
    }
}

fn join<T: ToString>(v: &[T]) -> String {
    v.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(",")
}

fn sign_string(signs: &[i8]) -> String {
    signs.iter().map(|&s| if s > 0 { '+' } else { '-' }).collect()
}

impl fmt::Display for ConditionId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut parts = vec![format!("t={}", join(&self.times))];
        if !self.outcomes.is_empty() {
            parts.push(format!("n={}", join(&self.outcomes)));
        }
        if !self.signs.is_empty() {
            parts.push(format!("s={}", sign_string(&self.signs)));
        }
        if let Some(o) = &self.observable {
            parts.push(format!("obs={o}"));
        }
        if let Some(l) = &self.label {
            parts.push(format!("k={l}"));
        }
        write!(f, "{}[{}]", self.family, parts.join(";"))
    }
}

fn parse_list(s: &str) -> Result<Vec<usize>> {
    s.split(',')
        .map(|x| {
            x.parse()
                .map_err(|_| Error::InvalidSpec(format!("bad index `{x}` in condition id")))
        })
        .collect()
}

impl FromStr for ConditionId {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let bad = || Error::InvalidSpec(format!("malformed condition id `{s}`"));
        let open = s.find('[').ok_or_else(bad)?;
        if !s.ends_with(']') {
            return Err(bad());
        }
        let family: Family = s[..open].parse()?;
        let mut id = ConditionId::new(family, Vec::new());
        for part in s[open + 1..s.len() - 1].split(';') {
            let (key, value) = part.split_once('=').ok_or_else(bad)?;
            match key {
                "t" => id.times = parse_list(value)?,
                "n" => id.outcomes = parse_list(value)?,
                "s" => {
                    id.signs = value
                        .chars()
                        .map(|c| match c {
                            '+' => Ok(1),
                            '-' => Ok(-1),
                            _ => Err(bad()),
                        })
                        .collect::<Result<_>>()?
                }
                "obs" => id.observable = Some(value.to_string()),
                "k" => id.label = Some(value.to_string()),
                _ => return Err(bad()),
            }
        }
        Ok(id)
    }
}

impl Serialize for ConditionId {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for ConditionId {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn canonical_form_round_trips() {
        let id = ConditionId::new(Family::Lg3Nvalued, vec![1, 2, 3])
            .outcomes(&[0, 2, 1])
            .signs(&[-1, 1, 1]);
        let text = id.to_string();
        assert_eq!(text, "LG3-Nvalued[t=1,2,3;n=1,3,2;s=-++]");
        assert_eq!(text.parse::<ConditionId>().unwrap(), id);
        let nsit = ConditionId::new(Family::Nsit3Middle, vec![1, 2, 3])
            .outcomes(&[1, 0])
            .observable("+--");
        assert_eq!(nsit.to_string().parse::<ConditionId>().unwrap(), nsit);
    }

    #[test]
    fn family_tags_unique_and_parse() {
        for f in Family::ALL {
            assert_eq!(f.tag().parse::<Family>().unwrap(), f);
        }
        assert!("LG5".parse::<Family>().is_err());
    }
}
