//! The GIF dictionary: every catalog GIF with its (category, position)
//! placements.
//!
//! The dictionary is built from per-category listings, the ordered GIFs a
//! user is offered after picking a reaction category. Position 1 is the
//! first GIF offered. A GIF can be listed under several categories.
//!
//! GIF identity follows [`GifRef::same_gif`]. Entries connected through that
//! rule form one identity group; lookups and overlap counts work on groups.

mod registry;

use std::collections::BTreeMap;
use std::fs;
use std::io;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::digest::ContentDigest;
use crate::ingest::GifRef;

pub use registry::{CategoryRegistry, ReactionCategory};

pub const DEFAULT_MAX_PER_CATEGORY: usize = 100;
pub const SCHEMA_VERSION: u32 = 1;

#[derive(Debug, Error)]
pub enum DictionaryError {
    #[error("unknown category `{0}`")]
    UnknownCategory(String),
    #[error("category `{0}` has more than one listing")]
    DuplicateListing(String),
    #[error("GIF {gif} appears more than once in category `{category}`")]
    DuplicateGif { category: String, gif: String },
    #[error("GIF in category `{category}` has no identity")]
    MissingIdentity { category: String },
    #[error("conflicting asset ids {0} and {1} share a content digest")]
    AmbiguousIdentity(String, String),
    #[error("category `{category}` positions are not contiguous from 1 (found {found} at slot {expected})")]
    Positions {
        category: String,
        expected: u32,
        found: u32,
    },
    #[error("category `{category}` has {count} entries, limit is {limit}")]
    TooManyEntries {
        category: String,
        count: usize,
        limit: usize,
    },
    #[error("invalid registry: {0}")]
    Registry(String),
    #[error("unsupported dictionary schema version {found} (expected {expected})")]
    SchemaVersion { found: u32, expected: u32 },
    #[error("cannot access {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: io::Error,
    },
    #[error("invalid JSON in {path}: {message}")]
    Parse { path: PathBuf, message: String },
}

/// The ordered GIFs offered under one category.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CategoryListing {
    pub category: String,
    pub gifs: Vec<GifRef>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct DictionaryEntry {
    pub gif: GifRef,
    pub category: ReactionCategory,
    /// 1-based rank within the category listing.
    pub position: u32,
}

/// Where a GIF is offered: category and 1-based rank.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Placement {
    pub category: ReactionCategory,
    pub position: u32,
}

impl Placement {
    pub fn new(category: &str, position: u32) -> Self {
        Placement {
            category: ReactionCategory::new(category),
            position,
        }
    }
}

/// Immutable GIF catalog. Safe to share across threads for lookups.
#[derive(Debug, Clone)]
pub struct GifDictionary {
    registry: CategoryRegistry,
    max_per_category: usize,
    entries: Vec<DictionaryEntry>,
    // identity group id per entry, numbered by first appearance
    group_of: Vec<usize>,
    groups: Vec<Vec<usize>>,
    by_asset: BTreeMap<String, Vec<usize>>,
    by_digest: BTreeMap<ContentDigest, Vec<usize>>,
}

impl PartialEq for GifDictionary {
    fn eq(&self, other: &Self) -> bool {
        self.registry == other.registry
            && self.max_per_category == other.max_per_category
            && self.entries == other.entries
    }
}

impl Eq for GifDictionary {}

/// Builds the dictionary from the first `max_per_category` GIFs of each
/// listing. Listing order in `listings` does not matter; entries are stored
/// in registry order.
pub fn build_dictionary(
    registry: &CategoryRegistry,
    listings: &[CategoryListing],
    max_per_category: usize,
) -> Result<GifDictionary, DictionaryError> {
    let mut slots: Vec<Option<&CategoryListing>> = vec![None; registry.len()];
    for listing in listings {
        let cat = registry.resolve(&listing.category)?;
        let idx = registry.index_of(&cat).expect("resolved");
        if slots[idx].is_some() {
            return Err(DictionaryError::DuplicateListing(cat.to_string()));
        }
        slots[idx] = Some(listing);
    }

    let mut entries = Vec::new();
    let mut listing_len = Vec::new();
    for (cat, listing) in registry.names().iter().zip(&slots) {
        let Some(listing) = listing else { continue };
        for gif in &listing.gifs {
            if gif.asset_id.is_none() && gif.content_digest.is_none() {
                return Err(DictionaryError::MissingIdentity {
                    category: cat.to_string(),
                });
            }
        }
        check_distinct(cat, &listing.gifs)?;
        listing_len.push(listing.gifs.len());
        for (i, gif) in listing.gifs.iter().take(max_per_category).enumerate() {
            entries.push(DictionaryEntry {
                gif: gif.clone(),
                category: cat.clone(),
                position: i as u32 + 1,
            });
        }
    }
    GifDictionary::from_entries(registry.clone(), max_per_category, entries)
}

fn check_distinct(cat: &ReactionCategory, gifs: &[GifRef]) -> Result<(), DictionaryError> {
    let entries: Vec<DictionaryEntry> = gifs
        .iter()
        .enumerate()
        .map(|(i, g)| DictionaryEntry {
            gif: g.clone(),
            category: cat.clone(),
            position: i as u32 + 1,
        })
        .collect();
    let (group_of, _) = identity_groups(&entries)?;
    let mut seen = vec![false; entries.len()];
    for (i, &g) in group_of.iter().enumerate() {
        if seen[g] {
            return Err(DictionaryError::DuplicateGif {
                category: cat.to_string(),
                gif: entries[i].gif.describe(),
            });
        }
        seen[g] = true;
    }
    Ok(())
}

struct DisjointSet {
    parent: Vec<usize>,
}

impl DisjointSet {
    fn new(n: usize) -> Self {
        DisjointSet {
            parent: (0..n).collect(),
        }
    }

    fn find(&mut self, mut x: usize) -> usize {
        while self.parent[x] != x {
            self.parent[x] = self.parent[self.parent[x]];
            x = self.parent[x];
        }
        x
    }

    fn union(&mut self, a: usize, b: usize) {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra != rb {
            // keep the smaller index as root so group numbering is stable
            let (lo, hi) = if ra < rb { (ra, rb) } else { (rb, ra) };
            self.parent[hi] = lo;
        }
    }
}

/// Connected components of the identity rule over `entries`. Returns the
/// group id of each entry and the member lists, groups numbered by first
/// member.
fn identity_groups(entries: &[DictionaryEntry]) -> Result<(Vec<usize>, Vec<Vec<usize>>), DictionaryError> {
    let mut ds = DisjointSet::new(entries.len());
    let mut by_asset: BTreeMap<&str, usize> = BTreeMap::new();
    let mut by_digest: BTreeMap<&ContentDigest, Vec<usize>> = BTreeMap::new();
    for (i, e) in entries.iter().enumerate() {
        if let Some(a) = &e.gif.asset_id {
            match by_asset.get(a.as_str()) {
                Some(&first) => ds.union(first, i),
                None => {
                    by_asset.insert(a, i);
                }
            }
        }
        if let Some(d) = &e.gif.content_digest {
            by_digest.entry(d).or_default().push(i);
        }
    }
    // digest matches apply unless both sides carry an asset id, so every
    // entry sharing a digest with an asset-less entry joins that entry
    for members in by_digest.values() {
        if let Some(&anchor) = members.iter().find(|&&i| entries[i].gif.asset_id.is_none()) {
            for &i in members {
                ds.union(anchor, i);
            }
        }
    }

    let mut group_of = vec![usize::MAX; entries.len()];
    let mut root_group: BTreeMap<usize, usize> = BTreeMap::new();
    let mut groups: Vec<Vec<usize>> = Vec::new();
    for i in 0..entries.len() {
        let root = ds.find(i);
        let g = *root_group.entry(root).or_insert_with(|| {
            groups.push(Vec::new());
            groups.len() - 1
        });
        group_of[i] = g;
        groups[g].push(i);
    }

    for members in &groups {
        let mut asset: Option<&str> = None;
        for &i in members {
            if let Some(a) = entries[i].gif.asset_id.as_deref() {
                match asset {
                    Some(prev) if prev != a => {
                        return Err(DictionaryError::AmbiguousIdentity(prev.to_string(), a.to_string()))
                    }
                    _ => asset = Some(a),
                }
            }
        }
    }
    Ok((group_of, groups))
}

impl GifDictionary {
    fn from_entries(
        registry: CategoryRegistry,
        max_per_category: usize,
        entries: Vec<DictionaryEntry>,
    ) -> Result<Self, DictionaryError> {
        let (group_of, groups) = identity_groups(&entries)?;
        for members in &groups {
            for (k, &i) in members.iter().enumerate() {
                if members[..k].iter().any(|&j| entries[j].category == entries[i].category) {
                    return Err(DictionaryError::DuplicateGif {
                        category: entries[i].category.to_string(),
                        gif: entries[i].gif.describe(),
                    });
                }
            }
        }
        let mut by_asset: BTreeMap<String, Vec<usize>> = BTreeMap::new();
        let mut by_digest: BTreeMap<ContentDigest, Vec<usize>> = BTreeMap::new();
        for (i, e) in entries.iter().enumerate() {
            if let Some(a) = &e.gif.asset_id {
                by_asset.entry(a.clone()).or_default().push(i);
            }
            if let Some(d) = &e.gif.content_digest {
                by_digest.entry(d.clone()).or_default().push(i);
            }
        }
        Ok(GifDictionary {
            registry,
            max_per_category,
            entries,
            group_of,
            groups,
            by_asset,
            by_digest,
        })
    }

    pub fn registry(&self) -> &CategoryRegistry {
        &self.registry
    }

    pub fn max_per_category(&self) -> usize {
        self.max_per_category
    }

    pub fn entries(&self) -> &[DictionaryEntry] {
        &self.entries
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    /// Identity groups as lists of entry indices.
    pub fn identity_groups(&self) -> &[Vec<usize>] {
        &self.groups
    }

    /// Entries directly matching `gif` under the identity rule.
    fn direct_matches(&self, gif: &GifRef) -> Vec<usize> {
        let mut hits = Vec::new();
        if let Some(a) = &gif.asset_id {
            if let Some(ix) = self.by_asset.get(a) {
                hits.extend(ix.iter().copied());
            }
        }
        if let Some(d) = &gif.content_digest {
            if let Some(ix) = self.by_digest.get(d) {
                hits.extend(ix.iter().copied().filter(|&i| gif.same_gif(&self.entries[i].gif)));
            }
        }
        hits
    }

    /// All placements of `gif`, sorted by position then category name.
    pub fn lookup(&self, gif: &GifRef) -> Vec<Placement> {
        let mut groups: Vec<usize> = self.direct_matches(gif).into_iter().map(|i| self.group_of[i]).collect();
        groups.sort_unstable();
        groups.dedup();
        let mut placements: Vec<Placement> = groups
            .iter()
            .flat_map(|&g| self.groups[g].iter())
            .map(|&i| Placement {
                category: self.entries[i].category.clone(),
                position: self.entries[i].position,
            })
            .collect();
        placements.sort_by(|a, b| a.position.cmp(&b.position).then_with(|| a.category.cmp(&b.category)));
        placements.dedup();
        placements
    }

    /// Number of distinct GIFs listed under two or more categories.
    pub fn multi_category_count(&self) -> usize {
        self.groups.iter().filter(|m| m.len() >= 2).count()
    }

    pub fn category_size(&self, cat: &ReactionCategory) -> usize {
        self.entries.iter().filter(|e| &e.category == cat).count()
    }

    pub fn save(&self, path: &Path) -> Result<(), DictionaryError> {
        let json = self.to_json();
        fs::write(path, json).map_err(|source| DictionaryError::Io {
            path: path.to_path_buf(),
            source,
        })
    }

    pub fn to_json(&self) -> String {
        let file = DictionaryFile {
            schema_version: SCHEMA_VERSION,
            registry: self.registry.names().to_vec(),
            max_per_category: self.max_per_category,
            entries: self.entries.clone(),
        };
        let mut s = serde_json::to_string_pretty(&file).expect("dictionary serializes");
        s.push('\n');
        s
    }

    pub fn load(path: &Path) -> Result<Self, DictionaryError> {
        let text = fs::read_to_string(path).map_err(|source| DictionaryError::Io {
            path: path.to_path_buf(),
            source,
        })?;
        Self::from_json(&text).map_err(|e| match e {
            DictionaryError::Parse { message, .. } => DictionaryError::Parse {
                path: path.to_path_buf(),
                message,
            },
            other => other,
        })
    }

    pub fn from_json(text: &str) -> Result<Self, DictionaryError> {
        let parse_err = |e: serde_json::Error| DictionaryError::Parse {
            path: PathBuf::new(),
            message: e.to_string(),
        };
        let raw: serde_json::Value = serde_json::from_str(text).map_err(parse_err)?;
        let version = raw.get("schema_version").and_then(|v| v.as_u64()).unwrap_or(0) as u32;
        if version != SCHEMA_VERSION {
            return Err(DictionaryError::SchemaVersion {
                found: version,
                expected: SCHEMA_VERSION,
            });
        }
        let file: DictionaryFile = serde_json::from_value(raw).map_err(parse_err)?;
        let registry = CategoryRegistry::from_names(file.registry.iter().map(|c| c.as_str()))?;

        // regroup by category and verify positions are 1..n
        let mut per_cat: Vec<Vec<DictionaryEntry>> = vec![Vec::new(); registry.len()];
        for e in file.entries {
            let idx = registry
                .index_of(&e.category)
                .ok_or_else(|| DictionaryError::UnknownCategory(e.category.to_string()))?;
            per_cat[idx].push(e);
        }
        let mut entries = Vec::new();
        for mut list in per_cat {
            list.sort_by_key(|e| e.position);
            if list.len() > file.max_per_category {
                return Err(DictionaryError::TooManyEntries {
                    category: list[0].category.to_string(),
                    count: list.len(),
                    limit: file.max_per_category,
                });
            }
            for (i, e) in list.iter().enumerate() {
                if e.position != i as u32 + 1 {
                    return Err(DictionaryError::Positions {
                        category: e.category.to_string(),
                        expected: i as u32 + 1,
                        found: e.position,
                    });
                }
            }
            entries.extend(list);
        }
        GifDictionary::from_entries(registry, file.max_per_category, entries)
    }
}

#[derive(Serialize, Deserialize)]
struct DictionaryFile {
    schema_version: u32,
    registry: Vec<ReactionCategory>,
    max_per_category: usize,
    entries: Vec<DictionaryEntry>,
}

/// Reads every `*.json` listing file in `dir`, in file-name order.
pub fn load_listings(dir: &Path) -> Result<Vec<CategoryListing>, DictionaryError> {
    let io_err = |source| DictionaryError::Io {
        path: dir.to_path_buf(),
        source,
    };
    let mut paths: Vec<PathBuf> = fs::read_dir(dir)
        .map_err(io_err)?
        .filter_map(|e| e.ok().map(|e| e.path()))
        .filter(|p| p.extension().is_some_and(|x| x == "json"))
        .collect();
    paths.sort();
    paths
        .into_iter()
        .map(|path| {
            let text = fs::read_to_string(&path).map_err(|source| DictionaryError::Io {
                path: path.clone(),
                source,
            })?;
            serde_json::from_str(&text).map_err(|e| DictionaryError::Parse {
                path,
                message: e.to_string(),
            })
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;
    use std::collections::BTreeSet;

    fn g(id: &str) -> GifRef {
        GifRef {
            asset_id: Some(id.into()),
            content_digest: Some(ContentDigest::of_bytes(id.as_bytes())),
            media_url: None,
        }
    }

    fn listing(cat: &str, ids: &[&str]) -> CategoryListing {
        CategoryListing {
            category: cat.into(),
            gifs: ids.iter().map(|i| g(i)).collect(),
        }
    }

    fn small() -> GifDictionary {
        let reg = CategoryRegistry::default_registry();
        build_dictionary(&reg, &[listing("hug", &["g1", "g2"]), listing("ok", &["g2"])], 100).unwrap()
    }

    #[test]
    fn small_dictionary() {
        let d = small();
        assert_eq!(d.len(), 3);
        assert_eq!(d.lookup(&g("g2")), vec![Placement::new("ok", 1), Placement::new("hug", 2)]);
        assert_eq!(d.lookup(&g("g1")), vec![Placement::new("hug", 1)]);
        assert!(d.lookup(&g("g9")).is_empty());
        assert_eq!(d.multi_category_count(), 1);
    }

    #[test]
    fn truncates_to_max_per_category() {
        let reg = CategoryRegistry::default_registry();
        let ids: Vec<String> = (0..150).map(|i| format!("x{i}")).collect();
        let refs: Vec<&str> = ids.iter().map(String::as_str).collect();
        let d = build_dictionary(&reg, &[listing("hug", &refs)], 100).unwrap();
        assert_eq!(d.len(), 100);
        let positions: Vec<u32> = d.entries().iter().map(|e| e.position).collect();
        assert_eq!(positions, (1..=100).collect::<Vec<_>>());
    }

    #[test]
    fn full_catalog_has_4300_entries() {
        let reg = CategoryRegistry::default_registry();
        let listings: Vec<CategoryListing> = reg
            .names()
            .iter()
            .map(|c| CategoryListing {
                category: c.to_string(),
                gifs: (0..100).map(|i| g(&format!("{c}/{i}"))).collect(),
            })
            .collect();
        let d = build_dictionary(&reg, &listings, DEFAULT_MAX_PER_CATEGORY).unwrap();
        assert_eq!(d.len(), 4300);
        assert_eq!(d.multi_category_count(), 0);
    }

    #[test]
    fn lookup_by_asset_id_ignores_digest_mismatch() {
        let d = small();
        let mut probe = g("g2");
        probe.content_digest = Some(ContentDigest::of_bytes(b"re-encoded"));
        assert_eq!(d.lookup(&probe).len(), 2);
        // digest-only probe matches catalog entries that carry asset ids
        let probe = GifRef::from_digest(ContentDigest::of_bytes(b"g1"));
        assert_eq!(d.lookup(&probe), vec![Placement::new("hug", 1)]);
    }

    #[test]
    fn build_errors() {
        let reg = CategoryRegistry::default_registry();
        assert!(matches!(
            build_dictionary(&reg, &[listing("nope", &["a"])], 100),
            Err(DictionaryError::UnknownCategory(_))
        ));
        assert!(matches!(
            build_dictionary(&reg, &[listing("hug", &["a", "b", "a"])], 100),
            Err(DictionaryError::DuplicateGif { .. })
        ));
        assert!(matches!(
            build_dictionary(&reg, &[listing("hug", &["a"]), listing("HUG", &["b"])], 100),
            Err(DictionaryError::DuplicateListing(_))
        ));
    }

    #[test]
    fn conflicting_assets_through_shared_digest() {
        let reg = CategoryRegistry::default_registry();
        let d = ContentDigest::of_bytes(b"same");
        let bare = GifRef::from_digest(d.clone());
        let a = GifRef {
            asset_id: Some("a".into()),
            content_digest: Some(d.clone()),
            media_url: None,
        };
        let b = GifRef {
            asset_id: Some("b".into()),
            content_digest: Some(d),
            media_url: None,
        };
        let listings = [
            CategoryListing { category: "hug".into(), gifs: vec![a] },
            CategoryListing { category: "ok".into(), gifs: vec![bare] },
            CategoryListing { category: "kiss".into(), gifs: vec![b] },
        ];
        assert!(matches!(
            build_dictionary(&reg, &listings, 100),
            Err(DictionaryError::AmbiguousIdentity(..))
        ));
    }

    #[test]
    fn save_load_round_trip() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("dict.json");
        let d = small();
        d.save(&path).unwrap();
        let back = GifDictionary::load(&path).unwrap();
        assert_eq!(back, d);
        assert_eq!(back.multi_category_count(), 1);
    }

    #[test]
    fn unknown_schema_version_is_rejected() {
        let json = small().to_json().replace("\"schema_version\": 1", "\"schema_version\": 7");
        assert!(matches!(
            GifDictionary::from_json(&json),
            Err(DictionaryError::SchemaVersion { found: 7, .. })
        ));
    }

    #[test]
    fn gapped_positions_are_rejected_on_load() {
        let json = small().to_json().replacen("\"position\": 2", "\"position\": 3", 1);
        assert!(matches!(
            GifDictionary::from_json(&json),
            Err(DictionaryError::Positions { .. })
        ));
    }

    // Random dictionaries over a small GIF pool so categories overlap.
    fn arb_listings() -> impl Strategy<Value = Vec<(usize, Vec<usize>)>> {
        prop::collection::vec(
            (0usize..43, prop::collection::btree_set(0usize..60, 0..25)),
            1..12,
        )
        .prop_map(|v| {
            let mut seen = BTreeSet::new();
            v.into_iter()
                .filter(|(c, _)| seen.insert(*c))
                .map(|(c, s)| (c, s.into_iter().collect::<Vec<_>>()))
                .collect()
        })
    }

    proptest! {
        #[test]
        fn dictionary_properties(layout in arb_listings(), cap in 5usize..30) {
            let reg = CategoryRegistry::default_registry();
            let listings: Vec<CategoryListing> = layout
                .iter()
                .map(|(c, ids)| CategoryListing {
                    category: reg.names()[*c].to_string(),
                    gifs: ids.iter().map(|i| g(&format!("p{i}"))).collect(),
                })
                .collect();
            let d = build_dictionary(&reg, &listings, cap).unwrap();

            // positions are 1..n per category
            for cat in reg.names() {
                let pos: Vec<u32> = d.entries().iter().filter(|e| &e.category == cat).map(|e| e.position).collect();
                prop_assert_eq!(pos, (1..=d.category_size(cat) as u32).collect::<Vec<_>>());
                prop_assert!(d.category_size(cat) <= cap);
            }

            // lookup size = number of holding categories; brute-force multi count
            let mut holders: BTreeMap<String, BTreeSet<String>> = BTreeMap::new();
            for (c, ids) in &layout {
                for id in ids.iter().take(cap) {
                    holders.entry(format!("p{id}")).or_default().insert(reg.names()[*c].to_string());
                }
            }
            for i in 0..60 {
                let id = format!("p{i}");
                let expect = holders.get(&id).map_or(0, BTreeSet::len);
                prop_assert_eq!(d.lookup(&g(&id)).len(), expect);
            }
            let brute = holders.values().filter(|s| s.len() >= 2).count();
            prop_assert_eq!(d.multi_category_count(), brute);

            let back = GifDictionary::from_json(&d.to_json()).unwrap();
            prop_assert_eq!(&back, &d);
        }
    }
}
