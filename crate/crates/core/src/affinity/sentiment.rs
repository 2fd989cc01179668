use std::collections::BTreeMap;
use std::fs;
use std::path::Path;

use serde::{Deserialize, Serialize};

use super::AffinityError;
use crate::dictionary::ReactionCategory;
use crate::labeler::Sentiment;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Polarity {
    Positive,
    Negative,
    Excluded,
}

impl Polarity {
    pub fn sentiment(self) -> Option<Sentiment> {
        match self {
            Polarity::Positive => Some(Sentiment::Positive),
            Polarity::Negative => Some(Sentiment::Negative),
            Polarity::Excluded => None,
        }
    }
}

/// Category → polarity. Serialized as a flat JSON object.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct SentimentMap(BTreeMap<ReactionCategory, Polarity>);

impl SentimentMap {
    pub fn from_map(map: BTreeMap<ReactionCategory, Polarity>) -> Self {
        SentimentMap(map)
    }

    pub fn get(&self, cat: &ReactionCategory) -> Option<Polarity> {
        self.0.get(cat).copied()
    }

    pub fn insert(&mut self, cat: ReactionCategory, polarity: Polarity) {
        self.0.insert(cat, polarity);
    }

    pub fn iter(&self) -> impl Iterator<Item = (&ReactionCategory, Polarity)> {
        self.0.iter().map(|(c, p)| (c, *p))
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn count(&self, polarity: Polarity) -> usize {
        self.0.values().filter(|p| **p == polarity).count()
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("sentiment map serializes");
        s.push('\n');
        s
    }

    pub fn load(path: &Path) -> Result<Self, std::io::Error> {
        let text = fs::read_to_string(path)?;
        serde_json::from_str(&text).map_err(|e| std::io::Error::new(std::io::ErrorKind::InvalidData, e))
    }
}

/// Assigns `negative` cluster members to negative, the other cluster to
/// positive, and `excluded` to excluded. Excluded names are removed from
/// the clusters first.
pub fn derive_sentiment_map(
    partition: &[Vec<ReactionCategory>],
    negative: usize,
    excluded: &[ReactionCategory],
) -> Result<SentimentMap, AffinityError> {
    if partition.len() != 2 {
        return Err(AffinityError::NotTwoClusters(partition.len()));
    }
    if negative > 1 {
        return Err(AffinityError::BadHint(negative));
    }
    let mut map = BTreeMap::new();
    for (idx, part) in partition.iter().enumerate() {
        let polarity = if idx == negative { Polarity::Negative } else { Polarity::Positive };
        let mut kept = 0;
        for cat in part {
            if excluded.contains(cat) {
                continue;
            }
            if map.insert(cat.clone(), polarity).is_some() {
                return Err(AffinityError::OverlappingClusters(cat.to_string()));
            }
            kept += 1;
        }
        if kept == 0 {
            return Err(AffinityError::EmptyPolarity(idx));
        }
    }
    for cat in excluded {
        map.insert(cat.clone(), Polarity::Excluded);
    }
    Ok(SentimentMap(map))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cats(names: &[&str]) -> Vec<ReactionCategory> {
        names.iter().map(|n| (*n).into()).collect()
    }

    fn clusters() -> Vec<Vec<ReactionCategory>> {
        vec![cats(&["mic drop", "smh"]), cats(&["hug", "slow clap"])]
    }

    #[test]
    fn hinted_cluster_is_negative() {
        let m = derive_sentiment_map(&clusters(), 0, &cats(&["popcorn", "thank you"])).unwrap();
        assert_eq!(m.get(&"smh".into()), Some(Polarity::Negative));
        assert_eq!(m.get(&"mic drop".into()), Some(Polarity::Negative));
        assert_eq!(m.get(&"hug".into()), Some(Polarity::Positive));
        assert_eq!(m.get(&"popcorn".into()), Some(Polarity::Excluded));
        assert_eq!(m.get(&"thank you".into()), Some(Polarity::Excluded));
        assert_eq!(m.len(), 6);
    }

    #[test]
    fn no_exclusions_gives_total_binary_map() {
        let m = derive_sentiment_map(&clusters(), 0, &[]).unwrap();
        assert_eq!(m.count(Polarity::Excluded), 0);
        assert_eq!(m.count(Polarity::Positive) + m.count(Polarity::Negative), 4);
    }

    #[test]
    fn swapping_the_hint_swaps_polarity() {
        let a = derive_sentiment_map(&clusters(), 0, &[]).unwrap();
        let b = derive_sentiment_map(&clusters(), 1, &[]).unwrap();
        for (cat, p) in a.iter() {
            let flipped = match p {
                Polarity::Positive => Polarity::Negative,
                Polarity::Negative => Polarity::Positive,
                Polarity::Excluded => Polarity::Excluded,
            };
            assert_eq!(b.get(cat), Some(flipped));
        }
    }

    #[test]
    fn errors() {
        assert_eq!(derive_sentiment_map(&clusters(), 2, &[]), Err(AffinityError::BadHint(2)));
        assert_eq!(
            derive_sentiment_map(&clusters()[..1], 0, &[]),
            Err(AffinityError::NotTwoClusters(1))
        );
        let overlapping = vec![cats(&["a", "b"]), cats(&["b", "c"])];
        assert!(matches!(
            derive_sentiment_map(&overlapping, 0, &[]),
            Err(AffinityError::OverlappingClusters(_))
        ));
        assert_eq!(
            derive_sentiment_map(&clusters(), 0, &cats(&["mic drop", "smh"])),
            Err(AffinityError::EmptyPolarity(0))
        );
    }

    #[test]
    fn json_shape() {
        let m = derive_sentiment_map(&clusters(), 0, &cats(&["popcorn"])).unwrap();
        let v: serde_json::Value = serde_json::from_str(&m.to_json()).unwrap();
        assert_eq!(v["popcorn"], "excluded");
        assert_eq!(v["hug"], "positive");
    }
}
