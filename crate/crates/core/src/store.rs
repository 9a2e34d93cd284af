//! In-memory folksonomy: users posting bookmarks for resources, each bookmark
//! annotated with a set of tags.
//!
//! All tag-frequency quantities used downstream (per-resource tag counts,
//! personomies, and the distinct resource/user/bookmark counts of every tag)
//! are maintained incrementally as bookmarks are appended.

use std::collections::{BTreeMap, BTreeSet, HashMap};

use crate::error::{Error, Result};

macro_rules! id_type {
    ($(#[$meta:meta])* $name:ident) => {
        $(#[$meta])*
        #[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
        pub struct $name(pub u32);

        impl $name {
            #[inline]
            pub fn index(self) -> usize {
                self.0 as usize
            }
        }
    };
}

id_type!(
    /// Interned user identifier.
    UserId
);
id_type!(
    /// Interned resource identifier.
    ResourceId
);
id_type!(
    /// Interned (normalized) tag identifier.
    TagId
);

/// Normalizes a raw tag: surrounding whitespace trimmed, Unicode lowercase.
pub fn normalize_tag(raw: &str) -> String {
    raw.trim().to_lowercase()
}

/// Bidirectional string <-> dense index map.
#[derive(Clone, Debug, Default)]
pub struct Interner {
    names: Vec<String>,
    index: HashMap<String, u32>,
}

impl Interner {
    pub fn get(&self, name: &str) -> Option<u32> {
        self.index.get(name).copied()
    }

    pub fn intern(&mut self, name: &str) -> u32 {
        if let Some(&id) = self.index.get(name) {
            return id;
        }
        let id = u32::try_from(self.names.len()).expect("more than u32::MAX interned names");
        self.names.push(name.to_owned());
        self.index.insert(name.to_owned(), id);
        id
    }

    pub fn name(&self, id: u32) -> &str {
        &self.names[id as usize]
    }

    pub fn len(&self) -> usize {
        self.names.len()
    }

    pub fn is_empty(&self) -> bool {
        self.names.is_empty()
    }
}

/// One annotation event.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Bookmark {
    pub user: UserId,
    pub resource: ResourceId,
    /// Sorted, deduplicated.
    pub tags: Vec<TagId>,
    /// Position within the resource's bookmark list, 0 = earliest.
    pub seq: u64,
}

/// Which entity a tag frequency is counted over.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum EntityKind {
    Resources,
    Users,
    Bookmarks,
}

impl EntityKind {
    pub const ALL: [EntityKind; 3] = [EntityKind::Resources, EntityKind::Users, EntityKind::Bookmarks];

    pub fn name(self) -> &'static str {
        match self {
            EntityKind::Resources => "resources",
            EntityKind::Users => "users",
            EntityKind::Bookmarks => "bookmarks",
        }
    }
}

/// Distinct resource, user and bookmark counts of one tag.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct TagFrequencies {
    pub rf: u64,
    pub uf: u64,
    pub bf: u64,
}

impl TagFrequencies {
    pub fn get(&self, kind: EntityKind) -> u64 {
        match kind {
            EntityKind::Resources => self.rf,
            EntityKind::Users => self.uf,
            EntityKind::Bookmarks => self.bf,
        }
    }
}

/// Indexed triple store of annotated bookmarks.
///
/// Only users and resources that own at least one stored bookmark are
/// interned, so the entity totals always count annotated entities.
#[derive(Clone, Debug)]
pub struct Folksonomy {
    users: Interner,
    resources: Interner,
    tags: Interner,
    bookmarks: Vec<Bookmark>,
    freqs: Vec<TagFrequencies>,
    resource_tags: Vec<BTreeMap<TagId, u64>>,
    resource_bookmarks: Vec<Vec<usize>>,
    user_tags: Vec<BTreeMap<TagId, u64>>,
    user_bookmarks: Vec<u64>,
    ordered: bool,
}

impl Default for Folksonomy {
    fn default() -> Self {
        Self::new()
    }
}

impl Folksonomy {
    pub fn new() -> Self {
        Folksonomy {
            users: Interner::default(),
            resources: Interner::default(),
            tags: Interner::default(),
            bookmarks: Vec::new(),
            freqs: Vec::new(),
            resource_tags: Vec::new(),
            resource_bookmarks: Vec::new(),
            user_tags: Vec::new(),
            user_bookmarks: Vec::new(),
            ordered: true,
        }
    }

    /// Appends a bookmark. Tags are normalized and deduplicated; an empty
    /// (post-normalization) tag set is rejected.
    pub fn add_bookmark<I, S>(&mut self, user: &str, resource: &str, tags: I) -> Result<usize>
    where
        I: IntoIterator<Item = S>,
        S: AsRef<str>,
    {
        let normalized: BTreeSet<String> = tags
            .into_iter()
            .map(|t| normalize_tag(t.as_ref()))
            .filter(|t| !t.is_empty())
            .collect();
        if normalized.is_empty() {
            return Err(Error::NonAnnotatedBookmark {
                user: user.to_owned(),
                resource: resource.to_owned(),
            });
        }
        let tag_ids: Vec<TagId> = normalized.iter().map(|t| self.intern_tag(t)).collect();
        let user = self.intern_user(user);
        let resource = self.intern_resource(resource);
        Ok(self.insert(user, resource, tag_ids))
    }

    /// Appends a bookmark over already-interned tags.
    pub fn add_bookmark_ids(&mut self, user: &str, resource: &str, tags: &[TagId]) -> Result<usize> {
        if tags.is_empty() {
            return Err(Error::NonAnnotatedBookmark {
                user: user.to_owned(),
                resource: resource.to_owned(),
            });
        }
        if let Some(bad) = tags.iter().find(|t| t.index() >= self.tags.len()) {
            return Err(Error::UnknownTag(bad.0));
        }
        let user = self.intern_user(user);
        let resource = self.intern_resource(resource);
        Ok(self.insert(user, resource, tags.to_vec()))
    }

    /// Interns a normalized tag without attaching it to any bookmark.
    ///
    /// Tags interned this way but never used have zero frequencies and are
    /// excluded from [`Folksonomy::used_tags`].
    pub fn intern_tag(&mut self, normalized: &str) -> TagId {
        let id = TagId(self.tags.intern(normalized));
        if self.freqs.len() < self.tags.len() {
            self.freqs.push(TagFrequencies::default());
        }
        id
    }

    fn intern_user(&mut self, name: &str) -> UserId {
        let id = UserId(self.users.intern(name));
        if self.user_tags.len() < self.users.len() {
            self.user_tags.push(BTreeMap::new());
            self.user_bookmarks.push(0);
        }
        id
    }

    fn intern_resource(&mut self, name: &str) -> ResourceId {
        let id = ResourceId(self.resources.intern(name));
        if self.resource_tags.len() < self.resources.len() {
            self.resource_tags.push(BTreeMap::new());
            self.resource_bookmarks.push(Vec::new());
        }
        id
    }

    fn insert(&mut self, user: UserId, resource: ResourceId, mut tags: Vec<TagId>) -> usize {
        tags.sort_unstable();
        tags.dedup();
        let index = self.bookmarks.len();
        let seq = self.resource_bookmarks[resource.index()].len() as u64;
        for &tag in &tags {
            let freq = &mut self.freqs[tag.index()];
            freq.bf += 1;
            let in_resource = self.resource_tags[resource.index()].entry(tag).or_insert(0);
            if *in_resource == 0 {
                freq.rf += 1;
            }
            *in_resource += 1;
            let in_user = self.user_tags[user.index()].entry(tag).or_insert(0);
            if *in_user == 0 {
                freq.uf += 1;
            }
            *in_user += 1;
        }
        self.resource_bookmarks[resource.index()].push(index);
        self.user_bookmarks[user.index()] += 1;
        self.bookmarks.push(Bookmark { user, resource, tags, seq });
        index
    }

    /// Number of the resource's bookmarks containing the tag.
    pub fn tf(&self, tag: TagId, resource: ResourceId) -> u64 {
        self.resource_tags
            .get(resource.index())
            .and_then(|m| m.get(&tag))
            .copied()
            .unwrap_or(0)
    }

    /// String-keyed [`Folksonomy::tf`]; unknown names yield 0.
    pub fn tf_by_name(&self, tag: &str, resource: &str) -> u64 {
        match (self.tag_id(tag), self.resource_id(resource)) {
            (Some(t), Some(r)) => self.tf(t, r),
            _ => 0,
        }
    }

    pub fn frequencies(&self, tag: TagId) -> TagFrequencies {
        self.freqs.get(tag.index()).copied().unwrap_or_default()
    }

    pub fn frequencies_by_name(&self, tag: &str) -> TagFrequencies {
        self.tag_id(tag).map(|t| self.frequencies(t)).unwrap_or_default()
    }

    /// Weighted tag union of a resource (tag -> number of its bookmarks with the tag).
    pub fn resource_tags(&self, resource: ResourceId) -> &BTreeMap<TagId, u64> {
        &self.resource_tags[resource.index()]
    }

    /// A user's personomy (tag -> number of the user's bookmarks with the tag).
    pub fn user_tags(&self, user: UserId) -> &BTreeMap<TagId, u64> {
        &self.user_tags[user.index()]
    }

    /// Bookmark indices of a resource in `seq` order.
    pub fn resource_bookmarks(&self, resource: ResourceId) -> impl Iterator<Item = &Bookmark> {
        self.resource_bookmarks[resource.index()].iter().map(move |&i| &self.bookmarks[i])
    }

    pub fn user_bookmark_count(&self, user: UserId) -> u64 {
        self.user_bookmarks[user.index()]
    }

    pub fn bookmarks(&self) -> &[Bookmark] {
        &self.bookmarks
    }

    pub fn n_users(&self) -> u64 {
        self.users.len() as u64
    }

    pub fn n_resources(&self) -> u64 {
        self.resources.len() as u64
    }

    pub fn n_bookmarks(&self) -> u64 {
        self.bookmarks.len() as u64
    }

    pub fn total(&self, kind: EntityKind) -> u64 {
        match kind {
            EntityKind::Resources => self.n_resources(),
            EntityKind::Users => self.n_users(),
            EntityKind::Bookmarks => self.n_bookmarks(),
        }
    }

    pub fn is_empty(&self) -> bool {
        self.bookmarks.is_empty()
    }

    /// Tags carried by at least one bookmark, in id order.
    pub fn used_tags(&self) -> impl Iterator<Item = TagId> + '_ {
        self.freqs
            .iter()
            .enumerate()
            .filter(|(_, f)| f.bf > 0)
            .map(|(i, _)| TagId(i as u32))
    }

    pub fn n_tags(&self) -> usize {
        self.used_tags().count()
    }

    pub fn users(&self) -> impl Iterator<Item = UserId> {
        (0..self.users.len() as u32).map(UserId)
    }

    pub fn resources(&self) -> impl Iterator<Item = ResourceId> {
        (0..self.resources.len() as u32).map(ResourceId)
    }

    pub fn tag_id(&self, tag: &str) -> Option<TagId> {
        self.tags.get(&normalize_tag(tag)).map(TagId)
    }

    pub fn user_id(&self, user: &str) -> Option<UserId> {
        self.users.get(user).map(UserId)
    }

    pub fn resource_id(&self, resource: &str) -> Option<ResourceId> {
        self.resources.get(resource).map(ResourceId)
    }

    pub fn tag_name(&self, tag: TagId) -> &str {
        self.tags.name(tag.0)
    }

    pub fn user_name(&self, user: UserId) -> &str {
        self.users.name(user.0)
    }

    pub fn resource_name(&self, resource: ResourceId) -> &str {
        self.resources.name(resource.0)
    }

    /// Whether `seq` reflects the real annotation order.
    pub fn is_ordered(&self) -> bool {
        self.ordered
    }

    /// Declares that bookmark order carries no chronological meaning.
    pub fn mark_unordered(&mut self) {
        self.ordered = false;
    }
}
