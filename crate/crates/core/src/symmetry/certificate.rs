use std::time::Instant;

use serde::Serialize;

use super::{
    edge_reversing_involution, exhaustive_involution_scan, find_one_regular_subgroups,
    full_aut_vertex_stabilizer, hall_witness, is_prime, is_s_regular, pappus_quotient_check,
    HallWitness, PappusCheck, SymmetryError,
};
use crate::kgroup::{find_unit_cube_roots, KParams};
use crate::perm::{cyclic_sylow2_witness, GeneratedGroup, Sylow2Witness};
use crate::voltage::{base_automorphisms, lift_test, lifted_group, ncg_cover, ncg_spanning_tree, table1_report};

/// Default vertex budget for building covers and for the full automorphism search.
pub const DEFAULT_VERTEX_CAP: usize = 100_000;
const EXHAUSTIVE_SCAN_LIMIT: u128 = 100_000;

#[derive(Clone, Debug)]
pub struct CertifyOptions {
    pub root: Option<u64>,
    pub vertex_cap: usize,
    pub skip_full_aut: bool,
    pub seed: u64,
    pub record_timings: bool,
}

impl Default for CertifyOptions {
    fn default() -> Self {
        CertifyOptions {
            root: None,
            vertex_cap: DEFAULT_VERTEX_CAP,
            skip_full_aut: false,
            seed: 0,
            record_timings: false,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Stage {
    pub stage: String,
    pub seconds: f64,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct GraphRecord {
    pub order: usize,
    pub edges: usize,
    pub cubic: bool,
    pub connected: bool,
    pub bipartite: bool,
    pub part_sizes: Vec<usize>,
    pub girth: Option<usize>,
    pub voltages_generate: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct LiftRecord {
    pub automorphism: String,
    pub lifts: bool,
    pub images: [String; 4],
    pub failed_relations: Vec<String>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SRegularityRecord {
    pub s: usize,
    pub arc_count: u128,
    pub orbit_size: u128,
    pub transitive: bool,
    pub regular: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct InvolutionRecord {
    pub pinned_arc: [usize; 2],
    pub coset_involution_found: bool,
    /// `None` when the group is too large to scan.
    pub exhaustive_involution_found: Option<bool>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct IndexTwoRecord {
    pub applicable: bool,
    pub count: usize,
    pub one_regular_count: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct FullAutRecord {
    pub vertex: usize,
    pub stabilizer_order: u128,
    pub automorphism_group_order: u128,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ToolRecord {
    pub name: String,
    pub version: String,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Certificate {
    pub tool: ToolRecord,
    pub params: KParams,
    pub roots: Vec<u64>,
    pub graph: GraphRecord,
    pub table1_match: bool,
    pub lifts: Vec<LiftRecord>,
    /// Order of the group induced on the base graph by the lifts.
    pub base_group_order: u128,
    pub lifted_group_order: u128,
    pub lifted_group_vertex_transitive: bool,
    pub s_regularity: Vec<SRegularityRecord>,
    pub type_tag: String,
    pub involution: InvolutionRecord,
    pub index_two: IndexTwoRecord,
    pub sylow2: Sylow2Witness,
    pub hall: HallWitness,
    pub full_aut: Option<FullAutRecord>,
    pub pappus: Option<PappusCheck>,
    pub complete: bool,
    pub non_cayley: bool,
    pub contradictions: Vec<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub timings: Option<Vec<Stage>>,
}

impl Certificate {
    fn s_regular(&self, s: usize) -> Option<&SRegularityRecord> {
        self.s_regularity.iter().find(|r| r.s == s)
    }

    /// Recomputes the verdict from the recorded prerequisites.
    pub fn derive_non_cayley(&self) -> bool {
        let Some(full) = &self.full_aut else {
            return false;
        };
        let two_regular = self.s_regular(2).is_some_and(|r| r.regular);
        full.stabilizer_order == 6
            && full.automorphism_group_order == self.lifted_group_order
            && self.graph.connected
            && self.graph.cubic
            && self.lifted_group_vertex_transitive
            && two_regular
            && self.type_tag == "2^2"
            && self.index_two.applicable
            && self.index_two.one_regular_count == 0
            && self.hall.normal
            && self.hall.structure_ok
    }

    /// Expected properties that the recorded values violate.
    pub fn find_contradictions(&self) -> Vec<String> {
        let mut out = Vec::new();
        let mut check = |ok: bool, msg: String| {
            if !ok {
                out.push(msg);
            }
        };
        let n = self.params.n() as usize;
        let order = 18 * n * n * n;
        let g = &self.graph;
        check(g.order == order, format!("order {} differs from 18n^3 = {order}", g.order));
        check(g.edges * 2 == 3 * g.order, format!("{} edges for {} vertices", g.edges, g.order));
        check(g.cubic && g.connected && g.bipartite, "graph is not cubic, connected and bipartite".into());
        check(g.voltages_generate, "cycle voltages do not generate K".into());
        check(self.table1_match, "image cycle voltages differ from the expected table".into());
        for l in &self.lifts {
            let expected = l.automorphism != "beta";
            check(
                l.lifts == expected,
                format!("{} lifts = {}, expected {expected}", l.automorphism, l.lifts),
            );
        }
        check(self.base_group_order == 36, format!("lifted base group has order {}", self.base_group_order));
        let expected_f = 6 * order as u128;
        check(
            self.lifted_group_order == expected_f,
            format!("|F| = {} differs from 6|V| = {expected_f}", self.lifted_group_order),
        );
        check(self.lifted_group_vertex_transitive, "F is not vertex-transitive".into());
        check(self.s_regular(2).is_some_and(|r| r.regular), "F is not 2-regular".into());
        check(!self.s_regular(3).is_some_and(|r| r.transitive), "F is 3-arc-transitive".into());
        check(self.type_tag == "2^2", format!("type is {}", self.type_tag));
        check(
            self.index_two.applicable && self.index_two.one_regular_count == 0,
            "a 1-regular subgroup exists".into(),
        );
        check(
            self.sylow2.is_cyclic && self.sylow2.sylow2_order == 4,
            format!("Sylow 2-subgroup of order {} is not cyclic of order 4", self.sylow2.sylow2_order),
        );
        check(self.hall.normal && self.hall.structure_ok, "Hall 2'-subgroup has the wrong structure".into());
        if let Some(f) = &self.full_aut {
            check(f.stabilizer_order == 6, format!("full vertex stabilizer has order {}", f.stabilizer_order));
        }
        if let Some(p) = &self.pappus {
            check(p.passed, "quotient by the Sylow subgroup is not the Pappus graph".into());
        }
        out
    }
}

/// Runs every check for the graph of order `18n^3` and records the outcome.
pub fn certify_non_cayley(
    n: u64,
    options: &CertifyOptions,
    mut progress: impl FnMut(&str, f64),
) -> Result<Certificate, SymmetryError> {
    let mut timings = Vec::new();
    let mut clock = Instant::now();
    let mut lap = |stage: &str, timings: &mut Vec<Stage>| {
        let seconds = clock.elapsed().as_secs_f64();
        progress(stage, seconds);
        timings.push(Stage {
            stage: stage.to_string(),
            seconds,
        });
        clock = Instant::now();
    };

    let roots = find_unit_cube_roots(n)?;
    if roots.is_empty() {
        return Err(SymmetryError::NoRoot(n));
    }
    let order = 18u128 * (n as u128).pow(3);
    if order > options.vertex_cap as u128 {
        return Err(SymmetryError::SizeCap {
            what: "cover".into(),
            size: order,
            cap: options.vertex_cap as u128,
        });
    }
    let params = match options.root {
        Some(r) => KParams::new(n, r)?,
        None => KParams::with_default_root(n)?,
    };
    let cover = ncg_cover(&params)?;
    let sp = ncg_spanning_tree();
    let g = cover.graph();
    let pred = g.predicates();
    let graph = GraphRecord {
        order: g.vertex_count(),
        edges: g.edge_count(),
        cubic: pred.is_cubic,
        connected: pred.is_connected,
        bipartite: pred.is_bipartite,
        part_sizes: pred.parts.as_ref().map(|p| vec![p[0].len(), p[1].len()]).unwrap_or_default(),
        girth: pred.girth,
        voltages_generate: cover.assignment().cycle_voltages_generate(&sp)?,
    };
    lap("cover", &mut timings);

    let table1_match = table1_report(&params).all_match;
    let mut lifts = Vec::new();
    for alpha in base_automorphisms() {
        let r = lift_test(cover.assignment(), &sp, &alpha.perm)?;
        lifts.push(LiftRecord {
            automorphism: alpha.name.to_string(),
            lifts: r.lifts,
            images: r.image_words,
            failed_relations: r.failed_relations,
        });
    }
    lap("lifts", &mut timings);

    let f = lifted_group(&cover, &sp)?;
    let base_group = GeneratedGroup::new(
        6,
        base_automorphisms()
            .into_iter()
            .filter(|a| a.name != "beta")
            .map(|a| a.perm)
            .collect(),
    )?;
    let group = &f.group;
    let lifted_group_order = group.order();
    let lifted_group_vertex_transitive = group.orbit(0)?.len() == g.vertex_count();
    lap("lifted group", &mut timings);

    let mut s_regularity = Vec::new();
    for s in 1..=3 {
        let r = is_s_regular(group, g, s)?;
        s_regularity.push(SRegularityRecord {
            s,
            arc_count: r.arc_count,
            orbit_size: r.orbit_size,
            transitive: r.transitive_on_s_arcs,
            regular: r.regular_on_s_arcs,
        });
    }
    lap("s-arcs", &mut timings);

    let two_regular = s_regularity[1].regular;
    let pinned = (cover.vertex(0, &params.identity()), cover.vertex(3, &params.identity()));
    let coset = edge_reversing_involution(group, g, pinned)?;
    let exhaustive = (lifted_group_order <= EXHAUSTIVE_SCAN_LIMIT)
        .then(|| exhaustive_involution_scan(group, g).is_some());
    let involution = InvolutionRecord {
        pinned_arc: [pinned.0, pinned.1],
        coset_involution_found: coset.is_some(),
        exhaustive_involution_found: exhaustive,
    };
    let type_tag = if !two_regular {
        "n/a"
    } else if coset.is_some() || exhaustive == Some(true) {
        "2^1"
    } else {
        "2^2"
    }
    .to_string();
    lap("type", &mut timings);

    let one_reg = find_one_regular_subgroups(group, g)?;
    let index_two = IndexTwoRecord {
        applicable: one_reg.applicable,
        count: one_reg.index_two_count,
        one_regular_count: one_reg.one_regular_count,
    };
    lap("index-two subgroups", &mut timings);

    let sylow2 = cyclic_sylow2_witness(group, options.seed);
    lap("sylow", &mut timings);
    let hall = hall_witness(group, g)?;
    lap("hall", &mut timings);

    let full_aut = if options.skip_full_aut {
        None
    } else {
        let st = full_aut_vertex_stabilizer(g, 0, options.vertex_cap)?;
        lap("full automorphism group", &mut timings);
        Some(FullAutRecord {
            vertex: 0,
            stabilizer_order: st.order,
            automorphism_group_order: st.order * g.vertex_count() as u128,
        })
    };

    let pappus = if is_prime(n) {
        let p = pappus_quotient_check(&cover)?;
        lap("pappus", &mut timings);
        Some(p)
    } else {
        None
    };

    let mut cert = Certificate {
        tool: ToolRecord {
            name: "ncg".into(),
            version: env!("CARGO_PKG_VERSION").into(),
        },
        params,
        roots,
        graph,
        table1_match,
        lifts,
        base_group_order: base_group.order(),
        lifted_group_order,
        lifted_group_vertex_transitive,
        s_regularity,
        type_tag,
        involution,
        index_two,
        sylow2,
        hall,
        complete: full_aut.is_some(),
        full_aut,
        pappus,
        non_cayley: false,
        contradictions: Vec::new(),
        timings: options.record_timings.then_some(timings),
    };
    cert.contradictions = cert.find_contradictions();
    cert.non_cayley = cert.derive_non_cayley() && cert.contradictions.is_empty();
    Ok(cert)
}
