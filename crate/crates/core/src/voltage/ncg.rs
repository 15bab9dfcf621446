//! The `K`-cover of `K_{3,3}` defining `NCG_{18n^3}`, its fundamental
//! walks, and lifts of base automorphisms.

use serde::Serialize;

use super::{CoverGraph, VoltageAssignment, VoltageError, VoltageGroup};
use crate::graph::{k33, SpanningData, K33_NAMES};
use crate::kgroup::{GeneratorImages, KElement, KParams};
use crate::perm::{GeneratedGroup, Permutation};

/// Tree edges carrying the identity: `ux, uy, uz, vy, wz`.
pub const NCG_TREE_EDGES: [(usize, usize); 5] = [(0, 3), (0, 4), (0, 5), (1, 4), (2, 5)];
/// Cotree arcs `(v,z), (w,x), (v,x), (w,y)`.
pub const NCG_COTREE_ARCS: [(usize, usize); 4] = [(1, 5), (2, 3), (1, 3), (2, 4)];
const COTREE_WORDS: [&str; 4] = ["h", "h^-1 a", "h^-1 b", "h c"];

/// Image walk and its voltage for each fundamental cycle, per base automorphism.
const EXPECTED_IMAGES: [(&str, [(&str, &str); 4]); 4] = [
    (
        "alpha1",
        [
            ("vywz", "h c^{-r}"),
            ("vzux", "h^{-1} b^{-r}"),
            ("vywx", "h^{-1} a^{r} b^{-r} c^{-r^2}"),
            ("vzuy", "h"),
        ],
    ),
    (
        "alpha2",
        [
            ("uzvx", "h b"),
            ("uxwy", "h^{-1} a^{-r^2} c"),
            ("uzvy", "h^{-1}"),
            ("uxwz", "h a^{-r}"),
        ],
    ),
    (
        "beta",
        [
            ("xvyw", "h^{-1} a b^{-r^2} c^{-r}"),
            ("xwzu", "h a^{-r}"),
            ("xvyu", "h b^{-r}"),
            ("xwzv", "h^{-1} a^{-r^2} b"),
        ],
    ),
    (
        "delta",
        [
            ("xwyv", "h a^{-r} b c^{r^2}"),
            ("xvzu", "h^{-1} b^{-r^2}"),
            ("xwyu", "h^{-1} a^{-r^2} c"),
            ("xvzw", "h a b^{-r}"),
        ],
    ),
];

pub fn ncg_spanning_tree() -> SpanningData {
    k33()
        .pinned_spanning_tree(0, &NCG_TREE_EDGES, &NCG_COTREE_ARCS)
        .expect("pinned tree spans K3,3")
}

pub fn ncg_assignment(p: &KParams) -> VoltageAssignment<KParams> {
    let arcs: Vec<(usize, usize, KElement)> = NCG_COTREE_ARCS
        .iter()
        .zip(COTREE_WORDS)
        .map(|(&(u, v), w)| (u, v, p.parse_word(w).expect("fixed word parses")))
        .collect();
    VoltageAssignment::new(*p, k33(), &arcs).expect("cotree arcs are edges of K3,3")
}

pub fn ncg_cover(p: &KParams) -> Result<CoverGraph<KParams>, VoltageError> {
    CoverGraph::build(ncg_assignment(p))
}

#[derive(Clone, Debug)]
pub struct BaseAutomorphism {
    pub name: &'static str,
    pub perm: Permutation,
}

/// `alpha1 = (u v w)`, `alpha2 = (x y z)`, `beta = (u x)(v y)(w z)`,
/// `delta = (v y w z)(u x)`.
pub fn base_automorphisms() -> Vec<BaseAutomorphism> {
    let cyc = |c: &[&[usize]]| Permutation::from_cycles(6, c).expect("valid cycles");
    vec![
        BaseAutomorphism {
            name: "alpha1",
            perm: cyc(&[&[0, 1, 2]]),
        },
        BaseAutomorphism {
            name: "alpha2",
            perm: cyc(&[&[3, 4, 5]]),
        },
        BaseAutomorphism {
            name: "beta",
            perm: cyc(&[&[0, 3], &[1, 4], &[2, 5]]),
        },
        BaseAutomorphism {
            name: "delta",
            perm: cyc(&[&[1, 4, 2, 5], &[0, 3]]),
        },
    ]
}

fn walk_name(vertices: &[usize]) -> String {
    vertices[..vertices.len() - 1]
        .iter()
        .map(|&v| K33_NAMES[v])
        .collect()
}

#[derive(Clone, Debug, Serialize)]
pub struct Table1Row {
    pub automorphism: String,
    pub cycle: String,
    pub cycle_voltage: KElement,
    pub image_walk: String,
    pub voltage: KElement,
    pub voltage_normal_form: String,
    pub expected_walk: String,
    pub expected_expression: String,
    pub expected_voltage: KElement,
    pub matches: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct Table1 {
    pub rows: Vec<Table1Row>,
    pub all_match: bool,
}

/// Image walks and voltages of the fundamental cycles under the four base
/// automorphisms, compared with the expected expressions.
pub fn table1_report(p: &KParams) -> Table1 {
    let va = ncg_assignment(p);
    let sp = ncg_spanning_tree();
    let cycles = va.base().fundamental_cycles(&sp);
    let mut rows = Vec::new();
    for (alpha, (name, expected)) in base_automorphisms().iter().zip(EXPECTED_IMAGES) {
        assert_eq!(alpha.name, name);
        for (cycle, (exp_walk, exp_word)) in cycles.iter().zip(expected) {
            let image = cycle.image(&alpha.perm);
            let voltage = va.walk_voltage(&image.vertices).expect("image of a walk is a walk");
            let expected_voltage = p.parse_word(exp_word).expect("expected expression parses");
            let image_walk = walk_name(&image.vertices);
            rows.push(Table1Row {
                automorphism: name.to_string(),
                cycle: walk_name(&cycle.vertices),
                cycle_voltage: va.walk_voltage(&cycle.vertices).expect("cycle is a walk"),
                matches: voltage == expected_voltage && image_walk == exp_walk,
                image_walk,
                voltage,
                voltage_normal_form: p.to_word(&voltage),
                expected_walk: exp_walk.to_string(),
                expected_expression: exp_word.to_string(),
                expected_voltage,
            });
        }
    }
    let all_match = rows.iter().all(|r| r.matches);
    Table1 { rows, all_match }
}

#[derive(Clone, Debug, Serialize)]
pub struct LiftResult {
    pub lifts: bool,
    /// The only candidate extension, forced by the cycle voltages; an
    /// automorphism of `K` exactly when `lifts` holds.
    pub images: GeneratorImages,
    pub image_words: [String; 4],
    pub failed_relations: Vec<String>,
}

/// Decides whether `alpha` lifts along the cover with the NCG voltages.
///
/// The fundamental cycle voltages are `h, h^-1 a, h^-1 b, h c`, so a lift
/// would have to send `h` to the voltage of the image of the first cycle,
/// `a` to `h' * (h^-1 a)'`, `b` to `h' * (h^-1 b)'` and `c` to
/// `h'^-1 * (h c)'`, where a prime marks the voltage of the image cycle.
pub fn lift_test(
    va: &VoltageAssignment<KParams>,
    sp: &SpanningData,
    alpha: &Permutation,
) -> Result<LiftResult, VoltageError> {
    if !va.base().is_automorphism(alpha) {
        return Err(VoltageError::NotAutomorphism);
    }
    let p = *va.group();
    let cycles = va.base().fundamental_cycles(sp);
    let expected: Vec<KElement> = COTREE_WORDS
        .iter()
        .map(|w| p.parse_word(w).expect("fixed word parses"))
        .collect();
    if va.cycle_voltages(&cycles)? != expected {
        return Err(VoltageError::UnexpectedCycleVoltages);
    }
    let images: Vec<KElement> = cycles
        .iter()
        .map(|c| va.walk_voltage(&c.image(alpha).vertices))
        .collect::<Result<_, _>>()?;
    let h = images[0];
    let sigma = GeneratorImages {
        a: p.multiply(&h, &images[1]),
        b: p.multiply(&h, &images[2]),
        c: p.multiply(&p.inverse(&h), &images[3]),
        h,
    };
    let check = p.check_generator_images(&sigma);
    Ok(LiftResult {
        lifts: check.is_automorphism,
        image_words: [sigma.a, sigma.b, sigma.c, sigma.h].map(|e| p.to_word(&e)),
        images: sigma,
        failed_relations: check.failed_relations,
    })
}

/// The lift `(v, k) -> (alpha(v), sigma(k) * phi(T_v^alpha))`, where `T_v`
/// is the tree path from the root to `v`.
pub fn construct_lift(
    cover: &CoverGraph<KParams>,
    sp: &SpanningData,
    alpha: &Permutation,
    sigma: &GeneratorImages,
) -> Result<Permutation, VoltageError> {
    let p = *cover.group();
    if !p.check_generator_images(sigma).is_automorphism {
        return Err(VoltageError::NotGroupAutomorphism);
    }
    let va = cover.assignment();
    let m = VoltageGroup::order(&p);
    let sigma_table: Vec<KElement> = (0..m)
        .map(|i| p.apply_images(sigma, &p.element_at(i)))
        .collect();
    let mut images = vec![0u32; cover.graph().vertex_count()];
    for v in 0..cover.base().vertex_count() {
        let path: Vec<usize> = sp.tree_path(v).iter().map(|&x| alpha.apply(x)).collect();
        let correction = va.walk_voltage(&path)?;
        let target = alpha.apply(v);
        for (i, s) in sigma_table.iter().enumerate() {
            images[v * m + i] = cover.vertex(target, &p.multiply(s, &correction)) as u32;
        }
    }
    let lift = Permutation::from_images(images)
        .map_err(|_| VoltageError::BadLift("not a bijection".into()))?;
    if !cover.graph().is_automorphism(&lift) {
        return Err(VoltageError::BadLift("not a graph automorphism".into()));
    }
    if !cover.projects_to(&lift, alpha) {
        return Err(VoltageError::BadLift("does not project to the base automorphism".into()));
    }
    Ok(lift)
}

#[derive(Clone, Debug)]
pub struct LiftedGroup {
    /// Generated by the translations `t_a, t_b, t_c, t_h` and the lifts of
    /// `alpha1, alpha2, delta`, in that order.
    pub group: GeneratedGroup,
    pub lifts: Vec<(String, GeneratorImages, Permutation)>,
}

pub fn lifted_group(cover: &CoverGraph<KParams>, sp: &SpanningData) -> Result<LiftedGroup, VoltageError> {
    let p = *cover.group();
    let mut gens: Vec<Permutation> = [p.a(), p.b(), p.c(), p.h()]
        .iter()
        .map(|k| cover.translation(k))
        .collect();
    let mut lifts = Vec::new();
    for alpha in base_automorphisms() {
        if alpha.name == "beta" {
            continue;
        }
        let result = lift_test(cover.assignment(), sp, &alpha.perm)?;
        if !result.lifts {
            return Err(VoltageError::DoesNotLift(alpha.name.to_string()));
        }
        let lift = construct_lift(cover, sp, &alpha.perm, &result.images)?;
        gens.push(lift.clone());
        lifts.push((alpha.name.to_string(), result.images, lift));
    }
    let group = GeneratedGroup::new(cover.graph().vertex_count(), gens)?;
    Ok(LiftedGroup { group, lifts })
}
