use std::collections::{BTreeMap, HashMap};

use serde::Deserialize;
use serde_json::json;

use crate::error::{domain, Error, Result};
use crate::graph::{EdgeId, EdgeSet, MultiGraph, NodeId};
use crate::schemes::{Decision, LinkCircularScheme, PortRef, RouteError, RouteInput, RoutingScheme, SchemeInfo, TableFile};

/// Hand-transcribed forwarding rules grouped into arc families.
#[derive(Debug, Clone, PartialEq, Eq, Deserialize)]
#[serde(deny_unknown_fields, rename_all = "camelCase")]
pub struct ArcFamilyFile {
    pub notes: Vec<String>,
    pub source: String,
    pub destination: String,
    pub start: String,
    pub non_kernel: Vec<[String; 2]>,
    pub families: BTreeMap<String, Vec<[String; 2]>>,
}

impl ArcFamilyFile {
    pub fn parse(text: &str) -> Result<Self> {
        Ok(serde_json::from_str(text)?)
    }

    pub fn non_kernel(&self, g: &MultiGraph) -> Result<EdgeSet> {
        let ids = self
            .non_kernel
            .iter()
            .map(|[a, b]| g.edge_named(a, b))
            .collect::<Result<Vec<_>>>()?;
        EdgeSet::new(g, ids)
    }
}

/// Follows the family of the in-arc. A dead out-arc `(v, w)` hands the
/// packet to the family of `(w, v)`, as if it had just arrived from `w`.
#[derive(Debug, Clone)]
pub struct ArcFamilyScheme {
    source: NodeId,
    destination: NodeId,
    start: usize,
    names: Vec<String>,
    /// Family of the arc leaving `tail` over `edge`.
    family: HashMap<(EdgeId, NodeId), usize>,
    /// Out-arc edge of each family at each node.
    out: HashMap<(NodeId, usize), EdgeId>,
}

impl ArcFamilyScheme {
    pub fn new(g: &MultiGraph, file: &ArcFamilyFile) -> Result<Self> {
        let names: Vec<String> = file.families.keys().cloned().collect();
        let start = names
            .iter()
            .position(|n| *n == file.start)
            .ok_or_else(|| Error::Domain(format!("unknown start family `{}`", file.start)))?;
        let mut family = HashMap::new();
        let mut out = HashMap::new();
        for (i, arcs) in file.families.values().enumerate() {
            for [tail, head] in arcs {
                let e = g.edge_named(tail, head)?;
                let v = g.require(tail)?;
                if family.insert((e, v), i).is_some() {
                    return domain(format!("arc ({tail}, {head}) is in two families"));
                }
                if out.insert((v, i), e).is_some() {
                    return domain(format!("family `{}` leaves `{tail}` twice", names[i]));
                }
            }
        }
        Ok(Self {
            source: g.require(&file.source)?,
            destination: g.require(&file.destination)?,
            start,
            names,
            family,
            out,
        })
    }
}

impl ArcFamilyScheme {
    /// Puts the arc `(tail, head)` in `family` for packets arriving over
    /// it, without making it an out-arc of `tail`.
    pub fn with_arrival(mut self, g: &MultiGraph, tail: &str, head: &str, family: &str) -> Result<Self> {
        let e = g.edge_named(tail, head)?;
        let i = self
            .names
            .iter()
            .position(|n| n == family)
            .ok_or_else(|| Error::Domain(format!("unknown family `{family}`")))?;
        if self.family.insert((e, g.require(tail)?), i).is_some() {
            return domain(format!("arc ({tail}, {head}) already has a family"));
        }
        Ok(self)
    }
}

impl RoutingScheme for ArcFamilyScheme {
    fn destination(&self) -> NodeId {
        self.destination
    }

    fn bit_capacity(&self) -> u8 {
        0
    }

    fn decide(&self, g: &MultiGraph, input: &RouteInput<'_>) -> std::result::Result<Decision, RouteError> {
        let v = input.node;
        let mut current = match input.in_port {
            PortRef::Origin if v == self.source => self.start,
            PortRef::Origin => return Err(RouteError::Stuck),
            PortRef::Edge(e) => {
                let w = g.other(e, v).ok_or(RouteError::Stuck)?;
                *self.family.get(&(e, w)).ok_or(RouteError::Stuck)?
            }
        };
        for _ in 0..=self.names.len() * g.degree(v) {
            let e = *self.out.get(&(v, current)).ok_or(RouteError::Stuck)?;
            if input.is_active(e) {
                return Ok(Decision { out: e, header: input.header });
            }
            let w = g.other(e, v).expect("family arcs are incident");
            current = *self.family.get(&(e, w)).ok_or(RouteError::Stuck)?;
        }
        Err(RouteError::Stuck)
    }

    fn info(&self, g: &MultiGraph) -> SchemeInfo {
        SchemeInfo {
            kind: "arc-families".into(),
            params: json!({
                "source": g.name(self.source),
                "destination": g.name(self.destination),
                "families": self.names,
                "start": self.names[self.start],
            }),
        }
    }
}

/// The table form of the transcribed rules, as checked in.
pub fn tabulate(g: &MultiGraph, file: &ArcFamilyFile) -> Result<TableFile> {
    let scheme = ArcFamilyScheme::new(g, file)?;
    TableFile::tabulate(g, &scheme, scheme.source, file.notes.clone())
}

/// Link-circular routing at a few nodes, arc families everywhere else.
#[derive(Debug, Clone)]
pub struct SplicedScheme {
    families: ArcFamilyScheme,
    circular: LinkCircularScheme,
    at: Vec<NodeId>,
}

impl SplicedScheme {
    pub fn new(families: ArcFamilyScheme, circular: LinkCircularScheme, at: Vec<NodeId>) -> Result<Self> {
        if families.destination != circular.destination() {
            return domain("spliced schemes disagree on the destination");
        }
        Ok(Self { families, circular, at })
    }
}

impl RoutingScheme for SplicedScheme {
    fn destination(&self) -> NodeId {
        self.families.destination
    }

    fn bit_capacity(&self) -> u8 {
        0
    }

    fn decide(&self, g: &MultiGraph, input: &RouteInput<'_>) -> std::result::Result<Decision, RouteError> {
        if self.at.contains(&input.node) {
            self.circular.decide(g, input)
        } else {
            self.families.decide(g, input)
        }
    }

    fn info(&self, g: &MultiGraph) -> SchemeInfo {
        let circular = self.circular.info(g).params["orders"].clone();
        let at: serde_json::Map<String, serde_json::Value> = self
            .at
            .iter()
            .map(|&v| (g.name(v).to_string(), circular[g.name(v)].clone()))
            .collect();
        SchemeInfo {
            kind: "spliced".into(),
            params: json!({ "families": self.families.info(g).params, "linkCircular": at }),
        }
    }
}
