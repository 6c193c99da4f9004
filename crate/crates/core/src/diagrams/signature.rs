//! Skeleton signatures: the ordered set of labelled components a diagram may attach to.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum ComponentKind {
    /// Oriented interval, legs linearly ordered.
    Interval,
    /// Oriented circle, legs cyclically ordered.
    Circle,
    /// Unordered legs.
    Asterisk,
    /// Unordered legs subject to the link relations.
    CircledAsterisk,
}

impl ComponentKind {
    pub fn is_skeleton(self) -> bool {
        matches!(self, ComponentKind::Interval | ComponentKind::Circle)
    }

    pub fn is_free(self) -> bool {
        !self.is_skeleton()
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Component {
    pub kind: ComponentKind,
    pub label: String,
}

impl Component {
    pub fn new(kind: ComponentKind, label: impl Into<String>) -> Self {
        Component {
            kind,
            label: label.into(),
        }
    }
}

impl fmt::Display for Component {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.kind {
            ComponentKind::Interval => write!(f, "up:{}", self.label),
            ComponentKind::Circle => write!(f, "circle:{}", self.label),
            ComponentKind::Asterisk => write!(f, "*{}", self.label),
            ComponentKind::CircledAsterisk => write!(f, "@{}", self.label),
        }
    }
}

/// Ordered list of components with distinct labels. Diagrams refer to components by index.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(try_from = "String", into = "String")]
pub struct Signature {
    components: Vec<Component>,
}

pub const MAX_COMPONENTS: usize = 32;

fn valid_label(label: &str) -> bool {
    !label.is_empty()
        && label
            .chars()
            .all(|c| c.is_alphanumeric() || c == '_' || c == '\'' || c == '.')
}

impl Signature {
    pub fn new(components: Vec<Component>) -> Result<Self> {
        if components.len() > MAX_COMPONENTS {
            return Err(Error::Signature(format!(
                "at most {MAX_COMPONENTS} components are supported"
            )));
        }
        for (i, c) in components.iter().enumerate() {
            if !valid_label(&c.label) {
                return Err(Error::Signature(format!("invalid label {:?}", c.label)));
            }
            if components[..i].iter().any(|o| o.label == c.label) {
                return Err(Error::Signature(format!("duplicate label {:?}", c.label)));
            }
        }
        Ok(Signature { components })
    }

    pub fn empty() -> Self {
        Signature::default()
    }

    pub fn single(kind: ComponentKind, label: &str) -> Self {
        Signature::new(vec![Component::new(kind, label)]).expect("valid single-component signature")
    }

    pub fn interval(label: &str) -> Self {
        Self::single(ComponentKind::Interval, label)
    }

    pub fn circle(label: &str) -> Self {
        Self::single(ComponentKind::Circle, label)
    }

    pub fn asterisk(label: &str) -> Self {
        Self::single(ComponentKind::Asterisk, label)
    }

    pub fn circled(label: &str) -> Self {
        Self::single(ComponentKind::CircledAsterisk, label)
    }

    pub fn components(&self) -> &[Component] {
        &self.components
    }

    pub fn len(&self) -> usize {
        self.components.len()
    }

    pub fn is_empty(&self) -> bool {
        self.components.is_empty()
    }

    pub fn kind(&self, comp: usize) -> ComponentKind {
        self.components[comp].kind
    }

    pub fn label(&self, comp: usize) -> &str {
        &self.components[comp].label
    }

    pub fn index_of(&self, label: &str) -> Option<usize> {
        self.components.iter().position(|c| c.label == label)
    }

    pub fn require(&self, label: &str) -> Result<usize> {
        self.index_of(label)
            .ok_or_else(|| Error::Signature(format!("no component labelled {label:?} in [{self}]")))
    }

    pub fn has_skeleton(&self) -> bool {
        self.components.iter().any(|c| c.kind.is_skeleton())
    }

    /// Same components, one of them with a different kind.
    pub fn with_kind(&self, label: &str, kind: ComponentKind) -> Result<Self> {
        let i = self.require(label)?;
        let mut comps = self.components.clone();
        comps[i].kind = kind;
        Ok(Signature { components: comps })
    }

    pub fn renamed(&self, from: &str, to: &str) -> Result<Self> {
        let i = self.require(from)?;
        let mut comps = self.components.clone();
        comps[i].label = to.to_string();
        Signature::new(comps)
    }

    pub fn push(&self, c: Component) -> Result<Self> {
        let mut comps = self.components.clone();
        comps.push(c);
        Signature::new(comps)
    }

    pub fn without(&self, label: &str) -> Result<Self> {
        let i = self.require(label)?;
        let mut comps = self.components.clone();
        comps.remove(i);
        Ok(Signature { components: comps })
    }

    /// Union by label. Returns the merged signature and the index map for `other`.
    /// A label present in both must have the same kind.
    pub fn merge(&self, other: &Signature) -> Result<(Signature, Vec<usize>)> {
        let mut comps = self.components.clone();
        let mut map = Vec::with_capacity(other.len());
        for c in &other.components {
            match comps.iter().position(|o| o.label == c.label) {
                Some(i) => {
                    if comps[i].kind != c.kind {
                        return Err(Error::Signature(format!(
                            "label {:?} has kinds {:?} and {:?}",
                            c.label, comps[i].kind, c.kind
                        )));
                    }
                    map.push(i);
                }
                None => {
                    map.push(comps.len());
                    comps.push(c.clone());
                }
            }
        }
        Ok((Signature::new(comps)?, map))
    }
}

impl fmt::Display for Signature {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, c) in self.components.iter().enumerate() {
            if i > 0 {
                f.write_str(",")?;
            }
            write!(f, "{c}")?;
        }
        Ok(())
    }
}

/// Grammar: comma separated atoms `up[:label]`, `circle[:label]`, `*label`, `@label`.
/// Unlabelled skeleton atoms get the label `x`.
impl FromStr for Signature {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        if s.is_empty() || s == "empty" {
            return Ok(Signature::empty());
        }
        let mut comps = Vec::new();
        for atom in s.split(',') {
            let atom = atom.trim();
            let comp = if let Some(rest) = atom.strip_prefix('*') {
                Component::new(ComponentKind::Asterisk, rest)
            } else if let Some(rest) = atom.strip_prefix('@') {
                Component::new(ComponentKind::CircledAsterisk, rest)
            } else {
                let (head, label) = match atom.split_once(':') {
                    Some((h, l)) => (h, l),
                    None => (atom, "x"),
                };
                let kind = match head {
                    "up" => ComponentKind::Interval,
                    "circle" => ComponentKind::Circle,
                    _ => return Err(Error::Parse(format!("unknown component atom {atom:?}"))),
                };
                Component::new(kind, label)
            };
            comps.push(comp);
        }
        Signature::new(comps)
    }
}

impl TryFrom<String> for Signature {
    type Error = Error;
    fn try_from(s: String) -> Result<Self> {
        s.parse()
    }
}

impl From<Signature> for String {
    fn from(s: Signature) -> String {
        s.to_string()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_display_round_trip() {
        let s: Signature = "up:x,circle:y,*z,@w".parse().unwrap();
        assert_eq!(s.len(), 4);
        assert_eq!(s.kind(3), ComponentKind::CircledAsterisk);
        assert_eq!(s.to_string().parse::<Signature>().unwrap(), s);
        let bare: Signature = "up".parse().unwrap();
        assert_eq!(bare, Signature::interval("x"));
    }

    #[test]
    fn rejects_duplicates_and_junk() {
        assert!("*x,*x".parse::<Signature>().is_err());
        assert!("line:x".parse::<Signature>().is_err());
        assert!("*".parse::<Signature>().is_err());
    }

    #[test]
    fn merge_checks_kinds() {
        let a: Signature = "*x,up:z".parse().unwrap();
        let b: Signature = "*y,*x".parse().unwrap();
        let (m, map) = a.merge(&b).unwrap();
        assert_eq!(m.to_string(), "*x,up:z,*y");
        assert_eq!(map, vec![2, 0]);
        let c: Signature = "@x".parse().unwrap();
        assert!(a.merge(&c).is_err());
    }
}
