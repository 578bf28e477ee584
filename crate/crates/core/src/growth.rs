//! Word growth: exact ball sizes by breadth-first search over canonical portraits.

use std::collections::HashSet;
use std::time::Instant;

use serde::Serialize;

use crate::canonical::{Group, PortraitId};
use crate::error::{Error, Result};
use crate::family::{build_dw, BinSeqEP};
use crate::tree::Element;

/// Default bound on the number of distinct elements kept during one search.
pub const DEFAULT_BUDGET: usize = 2_000_000;

/// Ball sizes `r(0..)` of one group and generating set.
#[derive(Debug, Clone, Serialize)]
pub struct GrowthTable {
    pub label: String,
    pub generating_set: String,
    /// `sizes[n] = |B(n)|`.
    pub sizes: Vec<u64>,
    /// `boundary[n] = |B(n) \ B(n-1)|`.
    pub boundary: Vec<u64>,
    /// Cumulative wall-clock seconds at each radius.
    pub seconds: Vec<f64>,
    /// Requested radius.
    pub radius: usize,
    /// Set when the search stopped early; radii from `sizes.len()` on are absent.
    pub truncated: Option<String>,
}

impl GrowthTable {
    pub fn complete(&self) -> bool {
        self.truncated.is_none() && self.sizes.len() == self.radius + 1
    }
}

/// Exact `|B(n)|` for `n ≤ radius` in `group` with respect to `gens`.
///
/// Elements are deduplicated by portrait handle, so each element is counted
/// once however many words represent it. Generators that are involutions are
/// used as they are; the others contribute their inverses as well.
pub fn ball_sizes(group: &mut Group, gens: &[Element], radius: usize, budget: usize) -> Result<GrowthTable> {
    let start = Instant::now();
    let mut alphabet: Vec<PortraitId> = Vec::new();
    for g in gens {
        let p = group.portrait(g)?;
        alphabet.push(p);
        if !group.is_trivial(&g.pow(2))? {
            alphabet.push(group.portrait(&g.inverse())?);
        }
    }
    alphabet.sort();
    alphabet.dedup();
    let label_gens: Vec<String> = gens.iter().map(|g| g.to_string()).collect();
    let mut table = GrowthTable {
        label: String::new(),
        generating_set: label_gens.join(" "),
        sizes: vec![1],
        boundary: vec![1],
        seconds: vec![start.elapsed().as_secs_f64()],
        radius,
        truncated: None,
    };
    let id = group.identity_portrait();
    let mut seen: HashSet<PortraitId> = HashSet::from([id]);
    let mut frontier = vec![id];
    for n in 1..=radius {
        let mut next = Vec::new();
        for &p in &frontier {
            for &s in &alphabet {
                let q = match group.mul(p, s) {
                    Ok(q) => q,
                    Err(e @ Error::ContractionCap { .. }) => {
                        table.truncated = Some(format!("radius {n}: {e}"));
                        return Ok(table);
                    }
                    Err(e) => return Err(e),
                };
                if seen.insert(q) {
                    next.push(q);
                }
            }
            if seen.len() > budget {
                table.truncated = Some(format!("radius {n}: more than {budget} elements"));
                return Ok(table);
            }
        }
        table.sizes.push(seen.len() as u64);
        table.boundary.push(next.len() as u64);
        table.seconds.push(start.elapsed().as_secs_f64());
        frontier = next;
    }
    Ok(table)
}

/// Growth table of `𝒟_w` with respect to `{alpha_w, beta_w, gamma_w}`.
pub fn family_growth(w: &BinSeqEP, radius: usize, nucleus_cap: usize, budget: usize) -> Result<GrowthTable> {
    let ctx = build_dw(w);
    let gens = ctx.generators();
    let mut group = Group::new(&gens, nucleus_cap)?;
    let mut table = ball_sizes(&mut group, &gens, radius, budget)?;
    table.label = w.to_string();
    table.generating_set = "alpha_w beta_w gamma_w".into();
    Ok(table)
}

/// Pointwise comparison of two tables over their common radii.
#[derive(Debug, Clone, Serialize)]
pub struct Dominance {
    pub first: String,
    pub second: String,
    pub radii: usize,
    pub first_le_second: bool,
    pub second_le_first: bool,
}

#[derive(Debug, Clone, Serialize)]
pub struct GrowthComparison {
    pub tables: Vec<GrowthTable>,
    /// Per-sequence failures (for example a nucleus cap), in input order.
    pub errors: Vec<(String, String)>,
    pub dominance: Vec<Dominance>,
}

/// Growth tables for several sequences plus a pairwise pointwise-dominance summary.
pub fn compare_growth(ws: &[BinSeqEP], radius: usize, nucleus_cap: usize, budget: usize) -> GrowthComparison {
    let mut tables = Vec::new();
    let mut errors = Vec::new();
    for w in ws {
        match family_growth(w, radius, nucleus_cap, budget) {
            Ok(t) => tables.push(t),
            Err(e) => errors.push((w.to_string(), e.to_string())),
        }
    }
    let mut dominance = Vec::new();
    for (i, a) in tables.iter().enumerate() {
        for b in &tables[i + 1..] {
            let radii = a.sizes.len().min(b.sizes.len());
            dominance.push(Dominance {
                first: a.label.clone(),
                second: b.label.clone(),
                radii,
                first_le_second: (0..radii).all(|n| a.sizes[n] <= b.sizes[n]),
                second_le_first: (0..radii).all(|n| b.sizes[n] <= a.sizes[n]),
            });
        }
    }
    GrowthComparison { tables, errors, dominance }
}

impl GrowthComparison {
    /// CSV with columns `w, radius, ball_size, boundary_size, seconds`; radii that were
    /// not reached are written as `absent`.
    pub fn to_csv(&self) -> Result<String> {
        let mut wr = csv::Writer::from_writer(Vec::new());
        let io = |e: csv::Error| Error::ResourceLimit(format!("csv: {e}"));
        wr.write_record(["w", "radius", "ball_size", "boundary_size", "seconds"]).map_err(io)?;
        for t in &self.tables {
            for n in 0..=t.radius {
                let row = match t.sizes.get(n) {
                    Some(s) => [
                        t.label.clone(),
                        n.to_string(),
                        s.to_string(),
                        t.boundary[n].to_string(),
                        format!("{:.6}", t.seconds[n]),
                    ],
                    None => [t.label.clone(), n.to_string(), "absent".into(), "absent".into(), String::new()],
                };
                wr.write_record(&row).map_err(io)?;
            }
        }
        for (w, _) in &self.errors {
            wr.write_record([w.as_str(), "", "absent", "absent", ""]).map_err(io)?;
        }
        let bytes = wr.into_inner().map_err(|e| Error::ResourceLimit(format!("csv: {e}")))?;
        Ok(String::from_utf8(bytes).expect("csv output is utf-8"))
    }
}
