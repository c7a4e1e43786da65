//! Full pipeline: surface checks, Property (L), Reeb construction, tree
//! test, disk-side orientation, sink and local stabilizer, ending in the
//! splitting verdict.

use serde::Serialize;

use crate::contour::check_property_l;
use crate::orient::{check_sink_complement, orient_tree};
use crate::reeb::build_reeb;
use crate::surface::{Mesh, SurfaceStats};
use crate::symmetry::{is_hypothesis_satisfied, local_stabilizer};

pub const SPLITTING_FORMULA: &str = "π₁O(f)_f ≅ π₁D_id(T²) × π₀S′(f) ≅ ℤ² × π₀S′(f)";

/// Why the splitting criterion does not apply to an input.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum NotApplicableReason {
    NotATorus,
    PropertyLViolated,
    GraphNotTree,
    InvalidInput(String),
}

/// Outcome of the analysis.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Conclusion {
    /// All hypotheses verified; the fundamental group of the orbit splits.
    Splits,
    /// The computed local stabilizer is nontrivial; since it only
    /// over-approximates the realized group, nothing is concluded.
    HypothesisFailsInconclusive,
    NotApplicable(NotApplicableReason),
}

impl std::fmt::Display for Conclusion {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Conclusion::Splits => write!(f, "Splits"),
            Conclusion::HypothesisFailsInconclusive => {
                write!(f, "HypothesisFailsInconclusive")
            }
            Conclusion::NotApplicable(r) => match r {
                NotApplicableReason::NotATorus => write!(f, "NotApplicable(NotATorus)"),
                NotApplicableReason::PropertyLViolated => {
                    write!(f, "NotApplicable(PropertyLViolated)")
                }
                NotApplicableReason::GraphNotTree => write!(f, "NotApplicable(GraphNotTree)"),
                NotApplicableReason::InvalidInput(d) => {
                    write!(f, "NotApplicable(InvalidInput: {d})")
                }
            },
        }
    }
}

/// Structured report of the hypothesis checks and the conclusion.
#[derive(Clone, Debug)]
pub struct Verdict {
    pub stats: SurfaceStats,
    pub property_l_ok: bool,
    pub tree_ok: bool,
    pub sink: Option<usize>,
    pub local_stabilizer_order: usize,
    pub caveat_overapprox: bool,
    pub conclusion: Conclusion,
    pub formula: Option<String>,
}

#[derive(Serialize)]
struct SurfaceJson {
    chi: i64,
    genus: u32,
}

#[derive(Serialize)]
struct VerdictJson<'a> {
    surface: SurfaceJson,
    #[serde(rename = "property_L")]
    property_l: bool,
    tree: bool,
    sink: Option<usize>,
    local_stabilizer_order: usize,
    caveat_overapprox: bool,
    conclusion: String,
    formula: Option<&'a str>,
}

impl Verdict {
    pub fn surface_ok(&self) -> bool {
        self.stats.is_torus
    }

    /// Deterministic JSON rendering; identical meshes give byte-identical
    /// reports.
    pub fn to_json(&self) -> String {
        let v = VerdictJson {
            surface: SurfaceJson {
                chi: self.stats.euler_characteristic,
                genus: self.stats.genus,
            },
            property_l: self.property_l_ok,
            tree: self.tree_ok,
            sink: self.sink,
            local_stabilizer_order: self.local_stabilizer_order,
            caveat_overapprox: self.caveat_overapprox,
            conclusion: self.conclusion.to_string(),
            formula: self.formula.as_deref(),
        };
        let mut s = serde_json::to_string_pretty(&v).expect("verdict serialization");
        s.push('\n');
        s
    }

    /// Process exit code: 0 splits, 2 inconclusive, 3 not applicable.
    pub fn exit_code(&self) -> i32 {
        match self.conclusion {
            Conclusion::Splits => 0,
            Conclusion::HypothesisFailsInconclusive => 2,
            Conclusion::NotApplicable(_) => 3,
        }
    }
}

/// Verdict together with the pipeline artifacts that were built on the way.
pub struct Analysis {
    pub verdict: Verdict,
    /// Present once the Reeb graph was built, with levels snapped by the
    /// requested tolerance.
    pub graph: Option<crate::reeb::ReebGraph>,
    /// Present once the tree was oriented.
    pub tree: Option<crate::orient::OrientedReebTree>,
}

/// Runs the whole pipeline on a validated mesh with exact level comparison.
pub fn analyze(mesh: &Mesh) -> Verdict {
    analyze_with_tolerance(mesh, 0.0)
}

/// Runs the pipeline, snapping Reeb levels within `tol` before the symmetry
/// stage. The first failing stage determines the conclusion.
pub fn analyze_with_tolerance(mesh: &Mesh, tol: f64) -> Verdict {
    analyze_full(mesh, tol).verdict
}

/// Like [`analyze_with_tolerance`], also returning the graph and oriented
/// tree for rendering.
pub fn analyze_full(mesh: &Mesh, tol: f64) -> Analysis {
    let stats = mesh.stats();
    let mut verdict = Verdict {
        stats,
        property_l_ok: false,
        tree_ok: false,
        sink: None,
        local_stabilizer_order: 0,
        caveat_overapprox: false,
        conclusion: Conclusion::NotApplicable(NotApplicableReason::NotATorus),
        formula: None,
    };
    let done = |verdict: Verdict, graph, tree| Analysis {
        verdict,
        graph,
        tree,
    };
    if !stats.is_torus {
        return done(verdict, None, None);
    }
    verdict.property_l_ok = check_property_l(mesh).ok;
    if !verdict.property_l_ok {
        verdict.conclusion = Conclusion::NotApplicable(NotApplicableReason::PropertyLViolated);
        return done(verdict, None, None);
    }
    let graph = match build_reeb(mesh) {
        Ok(g) => g,
        Err(e) => {
            verdict.conclusion =
                Conclusion::NotApplicable(NotApplicableReason::InvalidInput(e.to_string()));
            return done(verdict, None, None);
        }
    };
    let snapped = match graph.with_level_tolerance(tol) {
        Ok(g) => g,
        Err(e) => {
            verdict.conclusion =
                Conclusion::NotApplicable(NotApplicableReason::InvalidInput(e.to_string()));
            return done(verdict, Some(graph), None);
        }
    };
    verdict.tree_ok = graph.is_tree();
    if !verdict.tree_ok {
        verdict.conclusion = Conclusion::NotApplicable(NotApplicableReason::GraphNotTree);
        return done(verdict, Some(snapped), None);
    }
    // Orientation works on the raw levels; the snapped graph carries the same
    // structure, so the directions transfer verbatim.
    let tree = match orient_tree(mesh, &graph) {
        Ok(t) => t,
        Err(e) => {
            verdict.conclusion =
                Conclusion::NotApplicable(NotApplicableReason::InvalidInput(e.to_string()));
            return done(verdict, Some(snapped), None);
        }
    };
    let sink = tree.sink();
    verdict.sink = Some(sink.0);
    // Re-run the complement characterization of the sink as a guard.
    if !check_sink_complement(mesh, &graph, sink) {
        verdict.conclusion = Conclusion::NotApplicable(NotApplicableReason::InvalidInput(
            "sink complement is not a union of disks".into(),
        ));
        return done(verdict, Some(snapped), None);
    }
    verdict.local_stabilizer_order = local_stabilizer(&snapped, sink).order();
    let check = is_hypothesis_satisfied(&snapped, sink);
    verdict.caveat_overapprox = check.caveat_overapproximation;
    if check.trivial {
        verdict.conclusion = Conclusion::Splits;
        verdict.formula = Some(SPLITTING_FORMULA.to_string());
    } else {
        verdict.conclusion = Conclusion::HypothesisFailsInconclusive;
    }
    let toward_upper: Vec<bool> = graph
        .edges()
        .iter()
        .map(|e| tree.direction(e.id).1 == e.ends[1])
        .collect();
    let snapped_tree = crate::orient::OrientedReebTree::from_parts(snapped.clone(), toward_upper)
        .expect("orientation transfers to the snapped graph");
    done(verdict, Some(snapped), Some(snapped_tree))
}
