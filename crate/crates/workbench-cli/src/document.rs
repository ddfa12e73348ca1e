//! The document format: named declarations followed by an ordered list of
//! commands, all in one JSON object. Regions, elements and rationals are
//! written as compact string literals.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::error::{CliError, Result};

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Document {
    /// Defaults for commands that sample; the command line overrides them.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub spaces: Vec<SpaceDecl>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub algebras: Vec<AlgebraDecl>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub regions: Vec<RegionDecl>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub maps: Vec<MapDecl>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub morphisms: Vec<MorphismDecl>,
    #[serde(default)]
    pub commands: Vec<Command>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SpaceDecl {
    pub name: String,
    pub points: Vec<String>,
    /// Omitted for the discrete topology.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub opens: Option<Vec<Vec<String>>>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum AlgebraKind {
    Finite,
    CofiniteNat,
    RationalInterval,
    /// The regular closed sets of a declared space.
    Space,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ContactPreset {
    Smallest,
    Largest,
}

/// A matrix cell, written as a boolean or as 0/1.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Cell {
    Bool(bool),
    Bit(u8),
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AlgebraDecl {
    pub name: String,
    pub kind: AlgebraKind,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub atoms: Option<Vec<String>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub adjacency: Option<Vec<Vec<Cell>>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub edges: Option<Vec<(String, String)>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub contact: Option<ContactPreset>,
    /// Atoms below the top bounded element; all atoms when omitted.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub bounded: Option<Vec<String>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub space: Option<String>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RegionDecl {
    pub name: String,
    pub algebra: String,
    pub literal: String,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum MapKind {
    /// Piecewise-linear on the rationals.
    Pl,
    /// On the naturals.
    Nat,
    /// Between declared finite spaces.
    Space,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum TailDecl {
    Shift(u64),
    Constant(u64),
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MapDecl {
    pub name: String,
    pub kind: MapKind,
    /// `identity`, `abs`, `hat`, `linear <q>`, `constant <q>` for pl maps;
    /// `shift <k>`, `constant <c>` for nat maps.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub preset: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub breakpoints: Option<Vec<(String, String)>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub left_slope: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub right_slope: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub table: Option<Vec<u64>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub tail: Option<TailDecl>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub from: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub to: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub assign: Option<BTreeMap<String, String>>,
}

/// Either an explicit table of element-literal pairs between two finite
/// algebras, or `φ_f` for a declared map.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MorphismDecl {
    pub name: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub source: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub target: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub table: Option<Vec<(String, String)>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub map: Option<String>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ModeDecl {
    Exhaustive,
    Sampled,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ClusterModeDecl {
    Brute,
    Ultrafilter,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ContactDecl {
    Rho,
    Alexandroff,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum DotTarget {
    ContactGraph,
    DualSpace,
}

/// Per-command overrides of the run-wide sampling settings.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Sampling {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub samples: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub depth: Option<usize>,
}

impl Sampling {
    fn is_empty(&self) -> bool {
        *self == Sampling::default()
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "command", rename_all = "kebab-case", deny_unknown_fields)]
pub enum Command {
    CheckAxioms {
        algebra: String,
        suite: String,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        mode: Option<ModeDecl>,
        #[serde(default, skip_serializing_if = "Sampling::is_empty")]
        sampling: Sampling,
    },
    Clusters {
        algebra: String,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        mode: Option<ClusterModeDecl>,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        contact: Option<ContactDecl>,
    },
    Dualize {
        algebra: String,
    },
    /// On an algebra checks `λᵍ`; on a space checks `t_X`.
    Roundtrip {
        #[serde(default, skip_serializing_if = "Option::is_none")]
        algebra: Option<String>,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        space: Option<String>,
    },
    IdealFrame {
        algebra: String,
    },
    PrimeBijection {
        algebra: String,
    },
    CheckMorphism {
        morphism: String,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        families: Option<String>,
        #[serde(default, skip_serializing_if = "Sampling::is_empty")]
        sampling: Sampling,
    },
    /// `second ⋄ first`, then a family check on the result.
    Compose {
        first: String,
        second: String,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        families: Option<String>,
        #[serde(default, skip_serializing_if = "Sampling::is_empty")]
        sampling: Sampling,
    },
    DualMap {
        morphism: String,
    },
    /// Two morphisms, two space maps, or two maps of one stock model.
    FunctorLaws {
        first: String,
        second: String,
        #[serde(default, skip_serializing_if = "Sampling::is_empty")]
        sampling: Sampling,
    },
    Naturality {
        subject: String,
        /// Sampled points for stock maps.
        #[serde(default, skip_serializing_if = "Option::is_none")]
        points: Option<usize>,
        /// Declared regions tested in addition to the sampled ones.
        #[serde(default, skip_serializing_if = "Vec::is_empty")]
        regions: Vec<String>,
        #[serde(default, skip_serializing_if = "Sampling::is_empty")]
        sampling: Sampling,
    },
    Classify {
        morphism: String,
        #[serde(default, skip_serializing_if = "Sampling::is_empty")]
        sampling: Sampling,
    },
    EmitDot {
        target: DotTarget,
        algebra: String,
    },
}

impl Command {
    pub fn name(&self) -> &'static str {
        match self {
            Command::CheckAxioms { .. } => "check-axioms",
            Command::Clusters { .. } => "clusters",
            Command::Dualize { .. } => "dualize",
            Command::Roundtrip { .. } => "roundtrip",
            Command::IdealFrame { .. } => "ideal-frame",
            Command::PrimeBijection { .. } => "prime-bijection",
            Command::CheckMorphism { .. } => "check-morphism",
            Command::Compose { .. } => "compose",
            Command::DualMap { .. } => "dual-map",
            Command::FunctorLaws { .. } => "functor-laws",
            Command::Naturality { .. } => "naturality",
            Command::Classify { .. } => "classify",
            Command::EmitDot { .. } => "emit-dot",
        }
    }

    pub fn sampling(&self) -> Sampling {
        match self {
            Command::CheckAxioms { sampling, .. }
            | Command::CheckMorphism { sampling, .. }
            | Command::Compose { sampling, .. }
            | Command::FunctorLaws { sampling, .. }
            | Command::Naturality { sampling, .. }
            | Command::Classify { sampling, .. } => *sampling,
            _ => Sampling::default(),
        }
    }
}

/// Syntax and shape only; names and literals are checked by
/// [`crate::resolve::resolve`].
pub fn parse(text: &str) -> Result<Document> {
    serde_json::from_str(text).map_err(|e| {
        let msg = e.to_string();
        let reason = match msg.rfind(" at line ") {
            Some(i) => msg[..i].to_string(),
            None => msg,
        };
        CliError::Parse { line: e.line(), reason }
    })
}

pub fn print(doc: &Document) -> String {
    serde_json::to_string_pretty(doc).expect("documents serialize")
}
