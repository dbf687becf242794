//! Separability-class bounds and verdicts.
//!
//! For a partition `P`, a state that factorizes across `P` can give value ±1
//! simultaneously only to members of σ that pairwise cut-commute under `P`,
//! and every pairwise cut-anticommuting family contributes at most 1 in
//! total. The largest attainable `Q` over such states is therefore the clique
//! number of the cut-commutativity graph, which is the bound reported here.
//! Mixing cannot increase `Q`, so the bound of a class of states is the
//! maximum over the partitions the class ranges over.

use std::collections::BTreeMap;

use serde::Serialize;

use crate::cuts::{self, Partition, Permutation, SeparabilityClass};
use crate::error::{Error, Result};
use crate::graph::{self, build_graph, Relation};
use crate::oracle::Verification;
use crate::pauli::{OperatorSet, PauliString};

/// Slack for the "Q above the commuting-clique value" warning.
pub const QUANTUM_WARN_TOL: f64 = 1e-6;

/// Caps and switches for report generation.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ReportOptions {
    /// Run the exact coloring search for an upper bound on the quantum maximum.
    pub quantum_upper: bool,
    /// Compute one bound per symmetry orbit and replicate it.
    pub prune_symmetry: bool,
    pub clique_cap: usize,
    pub coloring_cap: usize,
    pub bipartition_cap: usize,
    pub symmetry_cap: usize,
}

impl Default for ReportOptions {
    fn default() -> Self {
        ReportOptions {
            quantum_upper: false,
            prune_symmetry: true,
            clique_cap: graph::CLIQUE_VERTEX_CAP,
            coloring_cap: graph::COLORING_VERTEX_CAP,
            bipartition_cap: cuts::BIPARTITION_WIDTH_CAP,
            symmetry_cap: cuts::SYMMETRY_WIDTH_CAP,
        }
    }
}

/// Bound for one partition and a family attaining it.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct PartitionBound {
    pub bound: usize,
    /// Pairwise cut-commuting members of σ, in σ order.
    pub witness: Vec<PauliString>,
}

fn check_width(sigma: &OperatorSet, part: &Partition) -> Result<()> {
    if sigma.width() != part.width() {
        return Err(Error::WidthMismatch {
            expected: sigma.width(),
            found: part.width(),
        });
    }
    Ok(())
}

fn verify_family(family: &[PauliString], part: &Partition) -> Result<()> {
    for (i, p) in family.iter().enumerate() {
        for q in &family[i + 1..] {
            if cuts::cut_anticommute(p, q, part)? {
                return Err(Error::Internal(format!(
                    "witness members {p} and {q} cut-anticommute under {part}"
                )));
            }
        }
    }
    Ok(())
}

pub fn bound_for_partition(sigma: &OperatorSet, part: &Partition) -> Result<PartitionBound> {
    bound_for_partition_capped(sigma, part, graph::CLIQUE_VERTEX_CAP)
}

pub fn bound_for_partition_capped(
    sigma: &OperatorSet,
    part: &Partition,
    clique_cap: usize,
) -> Result<PartitionBound> {
    check_width(sigma, part)?;
    let g = build_graph(sigma, part, Relation::Commute)?;
    let clique = graph::max_clique_capped(&g, clique_cap)?;
    let witness: Vec<_> = clique.witness.iter().map(|&i| sigma.members()[i]).collect();
    verify_family(&witness, part)?;
    Ok(PartitionBound {
        bound: clique.size,
        witness,
    })
}

/// Bounds for a list of partitions, computed once per symmetry orbit when
/// `group` is nontrivial. Witnesses of non-representatives are the images of
/// the representative's witness.
fn bounds_for_partitions(
    sigma: &OperatorSet,
    parts: &[Partition],
    group: &[Permutation],
    clique_cap: usize,
) -> Result<Vec<(Partition, PartitionBound)>> {
    let mut cache: BTreeMap<Partition, PartitionBound> = BTreeMap::new();
    let mut out = Vec::with_capacity(parts.len());
    for part in parts {
        check_width(sigma, part)?;
        // g maps `part` onto its orbit representative
        let (rep, g) = smallest_image(part, group)?;
        if !cache.contains_key(&rep) {
            cache.insert(
                rep.clone(),
                bound_for_partition_capped(sigma, &rep, clique_cap)?,
            );
        }
        let rb = &cache[&rep];
        let inverse = invert(&g);
        let mut witness = rb
            .witness
            .iter()
            .map(|q| q.permute(&inverse))
            .collect::<Result<Vec<_>>>()?;
        witness.sort_by_key(|q| sigma.position(q).unwrap_or(usize::MAX));
        if witness.iter().any(|q| !sigma.contains(q)) {
            return Err(Error::Internal(
                "symmetry image left the operator set".into(),
            ));
        }
        verify_family(&witness, part)?;
        out.push((
            part.clone(),
            PartitionBound {
                bound: rb.bound,
                witness,
            },
        ));
    }
    Ok(out)
}

fn smallest_image(part: &Partition, group: &[Permutation]) -> Result<(Partition, Permutation)> {
    let identity: Permutation = (0..part.width()).collect();
    let mut best = (part.clone(), identity);
    for g in group {
        let img = part.relabel(g)?;
        if img < best.0 {
            best = (img, g.clone());
        }
    }
    Ok(best)
}

fn invert(g: &[usize]) -> Permutation {
    let mut inv = vec![0; g.len()];
    for (i, &t) in g.iter().enumerate() {
        inv[t] = i;
    }
    inv
}

fn group_for(sigma: &OperatorSet, opts: &ReportOptions) -> Result<Vec<Permutation>> {
    if opts.prune_symmetry && sigma.width() <= opts.symmetry_cap {
        cuts::symmetry_group_capped(sigma, opts.symmetry_cap)
    } else {
        Ok(vec![(0..sigma.width()).collect()])
    }
}

/// Maximum of the partition bounds over the partitions `cls` ranges over.
pub fn bound_for_class(sigma: &OperatorSet, cls: &SeparabilityClass) -> Result<usize> {
    bound_for_class_with(sigma, cls, &ReportOptions::default())
}

pub fn bound_for_class_with(
    sigma: &OperatorSet,
    cls: &SeparabilityClass,
    opts: &ReportOptions,
) -> Result<usize> {
    let parts = match cls {
        SeparabilityClass::AnyBipartition => {
            cuts::enumerate_bipartitions_capped(sigma.width(), opts.bipartition_cap)?
        }
        other => other.partitions(sigma.width())?,
    };
    let group = group_for(sigma, opts)?;
    let bounds = bounds_for_partitions(sigma, &parts, &group, opts.clique_cap)?;
    Ok(bounds.iter().map(|(_, b)| b.bound).max().unwrap_or(0))
}

/// Lower and optional upper bound on the largest `Q` over all states.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct QuantumBounds {
    /// Clique number of the commutativity graph; attained by a common eigenstate.
    pub lower: usize,
    pub lower_witness: Vec<PauliString>,
    /// Chromatic number of the commutativity graph: σ splits into this many
    /// pairwise anticommuting families, each contributing at most 1.
    pub upper: Option<usize>,
    pub anticommuting_families: Option<Vec<Vec<PauliString>>>,
}

pub fn quantum_bounds(sigma: &OperatorSet, with_upper: bool) -> Result<QuantumBounds> {
    let opts = ReportOptions {
        quantum_upper: with_upper,
        ..ReportOptions::default()
    };
    quantum_bounds_with(sigma, &opts)
}

pub fn quantum_bounds_with(sigma: &OperatorSet, opts: &ReportOptions) -> Result<QuantumBounds> {
    let whole = Partition::trivial(sigma.width())?;
    let lower = bound_for_partition_capped(sigma, &whole, opts.clique_cap)?;
    let (upper, families) = if opts.quantum_upper {
        let g = build_graph(sigma, &whole, Relation::Commute)?;
        let coloring = graph::chromatic_number_capped(&g, opts.coloring_cap)?;
        let families: Vec<Vec<PauliString>> = coloring
            .classes()
            .into_iter()
            .map(|c| c.into_iter().map(|i| sigma.members()[i]).collect())
            .collect();
        for fam in &families {
            for (i, p) in fam.iter().enumerate() {
                for q in &fam[i + 1..] {
                    if !p.anticommutes(q)? {
                        return Err(Error::Internal(format!(
                            "color class holds commuting {p}, {q}"
                        )));
                    }
                }
            }
        }
        (Some(coloring.count), Some(families))
    } else {
        (None, None)
    };
    Ok(QuantumBounds {
        lower: lower.bound,
        lower_witness: lower.witness,
        upper,
        anticommuting_families: families,
    })
}

/// One row of a report: a partition, its orbit and bound.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct PartitionEntry {
    pub partition: Partition,
    /// Orbit representative under the symmetry group of σ.
    pub orbit: Partition,
    pub shape: Vec<usize>,
    pub bound: usize,
    pub witness: Vec<PauliString>,
}

/// Everything needed to turn a measured `Q` into separability verdicts.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BoundReport {
    pub width: usize,
    pub sigma: Vec<PauliString>,
    pub symmetry_group_order: usize,
    pub partitions: Vec<PartitionEntry>,
    /// Keyed by class name; `BTreeMap` keeps the JSON key order stable.
    pub class_bounds: BTreeMap<String, usize>,
    pub quantum_lower: usize,
    pub quantum_lower_witness: Vec<PauliString>,
    pub quantum_upper_coloring: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub anticommuting_families: Option<Vec<Vec<PauliString>>>,
    pub notes: Vec<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub verification: Option<Vec<Verification>>,
}

impl BoundReport {
    pub fn class_bound(&self, key: &str) -> Option<usize> {
        self.class_bounds.get(key).copied()
    }

    pub fn partition_bound(&self, part: &Partition) -> Option<usize> {
        self.partitions
            .iter()
            .find(|e| &e.partition == part)
            .map(|e| e.bound)
    }

    /// Distinct orbit representatives, finest partition first.
    pub fn orbit_representatives(&self) -> Vec<Partition> {
        let mut reps: Vec<Partition> = Vec::new();
        for e in &self.partitions {
            if !reps.contains(&e.orbit) {
                reps.push(e.orbit.clone());
            }
        }
        reps
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }
}

pub fn criteria_report(sigma: &OperatorSet) -> Result<BoundReport> {
    criteria_report_with(sigma, &ReportOptions::default())
}

pub fn criteria_report_with(sigma: &OperatorSet, opts: &ReportOptions) -> Result<BoundReport> {
    let width = sigma.width();
    let group = group_for(sigma, opts)?;
    let finest = Partition::finest(width)?;
    let mut parts = vec![finest.clone()];
    if width >= 2 {
        for b in cuts::enumerate_bipartitions_capped(width, opts.bipartition_cap)? {
            if b != finest {
                parts.push(b);
            }
        }
    }
    let bounds = bounds_for_partitions(sigma, &parts, &group, opts.clique_cap)?;

    let mut partitions = Vec::with_capacity(bounds.len());
    for (part, pb) in bounds {
        partitions.push(PartitionEntry {
            orbit: cuts::canonical_under(&part, &group)?,
            shape: part.shape(),
            bound: pb.bound,
            witness: pb.witness,
            partition: part,
        });
    }

    let mut class_bounds = BTreeMap::new();
    class_bounds.insert("full_separability".to_string(), partitions[0].bound);
    if width >= 2 {
        let any = partitions
            .iter()
            .filter(|e| e.partition.block_count() == 2)
            .map(|e| e.bound)
            .max()
            .unwrap_or(0);
        class_bounds.insert("any_bipartition".to_string(), any);
    }

    let qb = quantum_bounds_with(sigma, opts)?;
    if partitions.iter().any(|e| e.bound > qb.lower) {
        return Err(Error::Internal(
            "a partition bound exceeds the uncut clique number".into(),
        ));
    }

    let mut notes = vec![
        "class bound = max over member partitions (mixing cannot increase Q)".to_string(),
        "verdicts use strict inequality Q > bound".to_string(),
    ];
    if group.len() > 1 {
        notes.push(format!(
            "symmetry group of order {} used to share bounds across {} orbits",
            group.len(),
            partitions
                .iter()
                .map(|e| &e.orbit)
                .collect::<std::collections::BTreeSet<_>>()
                .len()
        ));
    }
    if let Some(u) = qb.upper {
        if u == qb.lower {
            notes.push(format!(
                "quantum maximum certified: clique and chromatic numbers both {u}"
            ));
        } else {
            notes.push(format!("quantum maximum lies in [{}, {u}]", qb.lower));
        }
    }

    Ok(BoundReport {
        width,
        sigma: sigma.members().to_vec(),
        symmetry_group_order: group.len(),
        partitions,
        class_bounds,
        quantum_lower: qb.lower,
        quantum_lower_witness: qb.lower_witness,
        quantum_upper_coloring: qb.upper,
        anticommuting_families: qb.anticommuting_families,
        notes,
        verification: None,
    })
}

/// A conclusion drawn from `Q` exceeding a threshold.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Claim {
    pub claim: String,
    pub threshold: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Verdict {
    pub q_value: f64,
    pub detected: Vec<Claim>,
    pub warnings: Vec<String>,
}

pub const CLAIM_ENTANGLED: &str = "entangled (not fully separable)";
pub const CLAIM_GENUINE: &str = "genuinely multipartite entangled";

/// Compares `q` against every threshold in `report` (strictly).
pub fn classify(q: f64, report: &BoundReport) -> Result<Verdict> {
    if q.is_nan() || q < 0.0 {
        return Err(Error::InvalidArgument(format!(
            "Q must be non-negative, got {q}"
        )));
    }
    let mut detected = Vec::new();
    if let Some(full) = report.class_bound("full_separability") {
        if q > full as f64 {
            detected.push(Claim {
                claim: CLAIM_ENTANGLED.to_string(),
                threshold: full as f64,
            });
        }
    }
    for e in report
        .partitions
        .iter()
        .filter(|e| !e.partition.is_finest())
    {
        if q > e.bound as f64 {
            detected.push(Claim {
                claim: format!("not separable w.r.t. partition {}", e.partition),
                threshold: e.bound as f64,
            });
        }
    }
    if let Some(any) = report.class_bound("any_bipartition") {
        if q > any as f64 {
            detected.push(Claim {
                claim: CLAIM_GENUINE.to_string(),
                threshold: any as f64,
            });
        }
    }
    let mut warnings = Vec::new();
    if q > report.quantum_lower as f64 + QUANTUM_WARN_TOL {
        warnings.push(format!(
            "Q = {q} exceeds the commuting-clique value {}; check the input",
            report.quantum_lower
        ));
    }
    if let Some(u) = report.quantum_upper_coloring {
        if q > u as f64 + QUANTUM_WARN_TOL {
            warnings.push(format!(
                "Q = {q} exceeds the quantum maximum {u}; input is inconsistent"
            ));
        }
    }
    Ok(Verdict {
        q_value: q,
        detected,
        warnings,
    })
}
