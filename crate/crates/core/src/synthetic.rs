//! Seeded synthetic corpora: GIF listings, conversation pairs and
//! annotation sheets shaped like the real inputs.

use std::fs;
use std::io;
use std::path::Path;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::augment::{AnnotationSheet, Emotion, EmotionSet};
use crate::dictionary::{CategoryListing, CategoryRegistry, ReactionCategory};
use crate::digest::ContentDigest;
use crate::ingest::{write_pairs, ConversationPair, FilterRules, GifRef};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Group {
    Positive,
    Negative,
    Excluded,
}

struct CategorySpec {
    name: &'static str,
    group: Group,
    weight: u32,
    cues: [&'static str; 3],
    emotions: &'static [Emotion],
}

use Emotion::*;

const CATEGORIES: &[CategorySpec] = &[
    CategorySpec { name: "applause", group: Group::Positive, weight: 9, cues: ["nailed", "brilliant", "speech"], emotions: &[Admiration, Approval] },
    CategorySpec { name: "eyeroll", group: Group::Negative, weight: 6, cues: ["obviously", "again", "whatever"], emotions: &[Annoyance, Disapproval] },
    CategorySpec { name: "facepalm", group: Group::Negative, weight: 8, cues: ["locked", "forgot", "oops"], emotions: &[Embarrassment, Disappointment] },
    CategorySpec { name: "high five", group: Group::Positive, weight: 6, cues: ["passed", "finally", "won"], emotions: &[Excitement, Joy] },
    CategorySpec { name: "hug", group: Group::Positive, weight: 8, cues: ["miss", "rough", "tired"], emotions: &[Caring, Love] },
    CategorySpec { name: "idk", group: Group::Negative, weight: 5, cues: ["which", "confusing", "guess"], emotions: &[Confusion] },
    CategorySpec { name: "popcorn", group: Group::Excluded, weight: 4, cues: ["drama", "thread", "tea"], emotions: &[Amusement, Curiosity] },
    CategorySpec { name: "shrug", group: Group::Negative, weight: 5, cues: ["maybe", "dunno", "whoknows"], emotions: &[Confusion, Disappointment] },
    CategorySpec { name: "smh", group: Group::Negative, weight: 6, cues: ["unbelievable", "ridiculous", "seriously"], emotions: &[Disapproval, Disgust] },
    CategorySpec { name: "thank you", group: Group::Excluded, weight: 4, cues: ["helped", "grateful", "favor"], emotions: &[Gratitude] },
    CategorySpec { name: "thumbs up", group: Group::Positive, weight: 7, cues: ["sounds", "deal", "agreed"], emotions: &[Approval, Optimism] },
];

const FILLER: &[&str] = &[
    "today", "work", "phone", "coffee", "morning", "weekend", "people", "night", "game", "friend", "school", "car",
    "dinner", "movie", "music", "team", "city", "rain", "home", "week",
];

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FixtureParams {
    pub seed: u64,
    pub pairs: usize,
    pub gifs_per_category: usize,
    pub annotators: usize,
}

impl Default for FixtureParams {
    fn default() -> Self {
        FixtureParams {
            seed: 7,
            pairs: 300,
            gifs_per_category: 12,
            annotators: 3,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Fixture {
    pub registry: CategoryRegistry,
    pub listings: Vec<CategoryListing>,
    pub pairs: Vec<ConversationPair>,
    pub sheets: Vec<AnnotationSheet>,
}

fn gif(id: &str) -> GifRef {
    GifRef {
        asset_id: Some(id.to_string()),
        content_digest: Some(ContentDigest::of_bytes(id.as_bytes())),
        media_url: None,
    }
}

fn slug(name: &str) -> String {
    name.replace(' ', "-")
}

/// Names of the fixture categories in each group.
pub fn fixture_categories(group: Group) -> Vec<ReactionCategory> {
    CATEGORIES.iter().filter(|c| c.group == group).map(|c| c.name.into()).collect()
}

fn listings(rng: &mut ChaCha8Rng, per_category: usize) -> Vec<CategoryListing> {
    let pool = |prefix: &str, n: usize| (0..n).map(|i| format!("shared-{prefix}-{i:02}")).collect::<Vec<_>>();
    let pos_pool = pool("pos", 8);
    let neg_pool = pool("neg", 8);
    let mix_pool = pool("mix", 4);
    CATEGORIES
        .iter()
        .map(|c| {
            let mut ids: Vec<String> = match c.group {
                Group::Positive => pos_pool.choose_multiple(rng, 4).cloned().collect(),
                Group::Negative => neg_pool.choose_multiple(rng, 4).cloned().collect(),
                Group::Excluded => mix_pool.choose_multiple(rng, 2).cloned().collect(),
            };
            if c.group != Group::Excluded && rng.gen_bool(0.3) {
                ids.push(mix_pool.choose(rng).expect("non-empty").clone());
            }
            let own = per_category.saturating_sub(ids.len());
            ids.extend((0..own).map(|i| format!("gif-{}-{i:02}", slug(c.name))));
            ids.shuffle(rng);
            CategoryListing {
                category: c.name.to_string(),
                gifs: ids.iter().map(|id| gif(id)).collect(),
            }
        })
        .collect()
}

fn text_for(rng: &mut ChaCha8Rng, spec: &CategorySpec) -> String {
    let mut words: Vec<&str> = spec.cues.choose_multiple(rng, 2).copied().collect();
    let n_filler = rng.gen_range(2..5);
    words.extend(FILLER.choose_multiple(rng, n_filler).copied());
    words.shuffle(rng);
    let mut text = words.join(" ");
    if rng.gen_bool(0.3) {
        text.push('!');
    }
    text
}

fn pairs(rng: &mut ChaCha8Rng, listings: &[CategoryListing], n: usize) -> Vec<ConversationPair> {
    let total_weight: u32 = CATEGORIES.iter().map(|c| c.weight).sum();
    (0..n)
        .map(|i| {
            let mut pick = rng.gen_range(0..total_weight);
            let c = CATEGORIES
                .iter()
                .position(|c| {
                    if pick < c.weight {
                        true
                    } else {
                        pick -= c.weight;
                        false
                    }
                })
                .expect("weights cover range");
            let spec = &CATEGORIES[c];
            let mut reply_gif = listings[c].gifs.choose(rng).expect("non-empty listing").clone();
            let mut pair = ConversationPair {
                root_id: format!("r{i:05}"),
                root_text: text_for(rng, spec),
                root_lang: Some("en".into()),
                root_has_media: false,
                root_has_links: false,
                reply_id: format!("p{i:05}"),
                reply_gif: reply_gif.clone(),
                reply_extra_content: false,
            };
            match rng.gen_range(0..40) {
                0 => pair.root_lang = Some("es".into()),
                1 => pair.root_has_media = true,
                2 => pair.reply_extra_content = true,
                3 => pair.reply_gif = gif(&format!("gif-unlisted-{i:05}")),
                4..=11 => {
                    reply_gif.asset_id = None;
                    pair.reply_gif = reply_gif;
                }
                _ => {}
            }
            pair
        })
        .collect()
}

fn sheets(rng: &mut ChaCha8Rng, annotators: usize) -> Vec<AnnotationSheet> {
    (1..=annotators)
        .map(|a| {
            let mapping = CATEGORIES
                .iter()
                .map(|c| {
                    let mut set = EmotionSet::EMPTY;
                    for &e in c.emotions {
                        if !rng.gen_bool(0.15) {
                            set.insert(e);
                        }
                    }
                    if rng.gen_bool(0.2) {
                        set.insert(*Emotion::ALL.choose(rng).expect("non-empty"));
                    }
                    (c.name.into(), set)
                })
                .collect();
            AnnotationSheet {
                annotator_id: format!("annotator-{a}"),
                mapping,
            }
        })
        .collect()
}

pub fn generate(params: &FixtureParams) -> Fixture {
    let mut rng = ChaCha8Rng::seed_from_u64(params.seed);
    let registry = CategoryRegistry::from_names(CATEGORIES.iter().map(|c| c.name)).expect("fixture names are unique");
    let listings = listings(&mut rng, params.gifs_per_category);
    let pairs = pairs(&mut rng, &listings, params.pairs);
    let sheets = sheets(&mut rng, params.annotators);
    Fixture {
        registry,
        listings,
        pairs,
        sheets,
    }
}

impl Fixture {
    /// Writes `registry.txt`, `rules.json`, `pairs.jsonl`, `listings/` and
    /// `sheets/` under `dir`.
    pub fn write_to(&self, dir: &Path) -> io::Result<()> {
        fs::create_dir_all(dir.join("listings"))?;
        fs::create_dir_all(dir.join("sheets"))?;
        let mut registry = String::new();
        for name in self.registry.names() {
            registry.push_str(name.as_str());
            registry.push('\n');
        }
        fs::write(dir.join("registry.txt"), registry)?;
        let rules = serde_json::to_string_pretty(&FilterRules::default()).map_err(io::Error::other)?;
        fs::write(dir.join("rules.json"), rules + "\n")?;
        for (i, l) in self.listings.iter().enumerate() {
            let json = serde_json::to_string_pretty(l).map_err(io::Error::other)?;
            fs::write(dir.join("listings").join(format!("{i:02}-{}.json", slug(&l.category))), json + "\n")?;
        }
        for s in &self.sheets {
            let json = serde_json::to_string_pretty(s).map_err(io::Error::other)?;
            fs::write(dir.join("sheets").join(format!("{}.json", s.annotator_id)), json + "\n")?;
        }
        let mut out = Vec::new();
        write_pairs(&mut out, &self.pairs)?;
        fs::write(dir.join("pairs.jsonl"), out)
    }
}

/// A two-turn thread whose reply GIF is listed under `hug` (rank 2) and
/// under `thank you` (rank 5).
pub fn hug_thread() -> (CategoryRegistry, Vec<CategoryListing>, ConversationPair) {
    let registry = CategoryRegistry::from_names(["hug", "thank you", "facepalm"]).expect("unique names");
    let hugging_bear = gif("hugging-bear");
    let listings = vec![
        CategoryListing {
            category: "hug".into(),
            gifs: vec![gif("hug-01"), hugging_bear.clone(), gif("hug-03")],
        },
        CategoryListing {
            category: "thank you".into(),
            gifs: vec![gif("ty-01"), gif("ty-02"), gif("ty-03"), gif("ty-04"), hugging_bear.clone()],
        },
        CategoryListing {
            category: "facepalm".into(),
            gifs: vec![gif("fp-01")],
        },
    ];
    let pair = ConversationPair {
        root_id: "1".into(),
        root_text: "I can't take this any more!".into(),
        root_lang: Some("en".into()),
        root_has_media: false,
        root_has_links: false,
        reply_id: "2".into(),
        reply_gif: GifRef::from_asset("hugging-bear"),
        reply_extra_content: false,
    };
    (registry, listings, pair)
}
