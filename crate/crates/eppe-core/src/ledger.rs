//! Bookkeeping for generated variables, and the quantifier budget that
//! motivates combining relations before eliminating quantifiers.

use std::collections::BTreeMap;

use serde::Serialize;

/// One variable tracked by a construction.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct LedgerEntry {
    /// Machine identifier as it appears in emitted formulas,
    /// e.g. `divb.f@7`.
    pub ident: String,
    /// Stage or gadget that introduced the variable, e.g. `divb`.
    pub origin: String,
    /// Compact display name used by the LaTeX emitter, e.g. `f8`.
    pub display: Option<String>,
}

/// Ordered record of every variable a construction introduces.
///
/// Identifiers have the shape `origin.role@ordinal`, with ordinals counted
/// per `(origin, role)` pair, so variables from different gadget instances
/// never collide and readers can see at a glance where each came from.
#[derive(Debug, Clone, Default)]
pub struct VarLedger {
    entries: Vec<LedgerEntry>,
    index: BTreeMap<String, usize>,
    counters: BTreeMap<(String, String), usize>,
}

impl VarLedger {
    pub fn new() -> Self {
        Self::default()
    }

    /// Mint a fresh identifier `origin.role@k`.
    pub fn fresh(&mut self, origin: &str, role: &str) -> String {
        self.fresh_entry(origin, role, None)
    }

    /// Mint a fresh identifier carrying a compact display name.
    pub fn fresh_named(&mut self, origin: &str, role: &str, display: &str) -> String {
        self.fresh_entry(origin, role, Some(display.to_string()))
    }

    fn fresh_entry(&mut self, origin: &str, role: &str, display: Option<String>) -> String {
        let key = (origin.to_string(), role.to_string());
        let n = self.counters.entry(key).or_insert(0);
        let ident = format!("{origin}.{role}@{n}");
        *n += 1;
        self.push_entry(LedgerEntry {
            ident: ident.clone(),
            origin: origin.to_string(),
            display,
        });
        ident
    }

    /// Record a variable created elsewhere (a parameter carried into a
    /// construction, or a variable adopted from a sub-ledger).
    pub fn note_existing(&mut self, ident: &str, origin: &str, display: Option<&str>) {
        if self.index.contains_key(ident) {
            return;
        }
        self.push_entry(LedgerEntry {
            ident: ident.to_string(),
            origin: origin.to_string(),
            display: display.map(str::to_string),
        });
    }

    fn push_entry(&mut self, e: LedgerEntry) {
        self.index.insert(e.ident.clone(), self.entries.len());
        self.entries.push(e);
    }

    /// Attach or replace the display name of an already-recorded variable.
    pub fn set_display(&mut self, ident: &str, display: &str) {
        if let Some(&i) = self.index.get(ident) {
            self.entries[i].display = Some(display.to_string());
        }
    }

    pub fn display_of(&self, ident: &str) -> Option<&str> {
        self.index
            .get(ident)
            .and_then(|&i| self.entries[i].display.as_deref())
    }

    pub fn contains(&self, ident: &str) -> bool {
        self.index.contains_key(ident)
    }

    pub fn entries(&self) -> &[LedgerEntry] {
        &self.entries
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    /// Adopt every entry of `other` (in order) that is not already known.
    pub fn absorb(&mut self, other: &VarLedger) {
        for e in &other.entries {
            if !self.index.contains_key(&e.ident) {
                self.push_entry(e.clone());
            }
        }
    }

    /// Tab-separated table: identifier, origin, display name (`-` if none).
    pub fn to_tsv(&self) -> String {
        let mut out = String::from("ident\torigin\tdisplay\n");
        for e in &self.entries {
            out.push_str(&e.ident);
            out.push('\t');
            out.push_str(&e.origin);
            out.push('\t');
            out.push_str(e.display.as_deref().unwrap_or("-"));
            out.push('\n');
        }
        out
    }
}

/// Variable cost of eliminating a bounded universal quantifier over a
/// conjunction of `gamma + 1` relations, comparing the route that
/// eliminates each relation separately against the route that first
/// combines them into a single equation.
///
/// In the polynomial setting each separately-eliminated relation spends a
/// package of ten variables on top of a shared overhead of twenty-two;
/// combining first leaves two per relation plus an overhead of two.  When
/// exponentiation is available in the matrix the per-relation packages
/// vanish from both routes and only the overheads remain.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct CostModel {
    /// The conjunction has `gamma + 1` relations.
    pub gamma: u64,
}

impl CostModel {
    pub fn new(gamma: u64) -> Self {
        CostModel { gamma }
    }

    /// Variables spent eliminating each relation on its own (polynomial
    /// matrix).
    pub fn save1(&self) -> u64 {
        10 * (self.gamma + 1) + 22
    }

    /// Variables spent after first combining the relations into one
    /// (polynomial matrix).
    pub fn save2(&self) -> u64 {
        2 * (self.gamma + 1) + 2
    }

    /// Variables conserved by combining, polynomial matrix.
    pub fn conserved(&self) -> u64 {
        self.save1() - self.save2()
    }

    /// Separate-elimination cost when the matrix may use exponentiation:
    /// only the overhead survives.
    pub fn save1_exponential(&self) -> u64 {
        22
    }

    /// Combined-elimination cost when the matrix may use exponentiation.
    pub fn save2_exponential(&self) -> u64 {
        2
    }

    /// Variables conserved by combining, exponential matrix.
    pub fn conserved_exponential(&self) -> u64 {
        self.save1_exponential() - self.save2_exponential()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn fresh_names_count_per_origin_and_role() {
        let mut l = VarLedger::new();
        assert_eq!(l.fresh("rem", "v"), "rem.v@0");
        assert_eq!(l.fresh("rem", "v"), "rem.v@1");
        assert_eq!(l.fresh("rem", "q"), "rem.q@0");
        assert_eq!(l.fresh("crt", "v"), "crt.v@0");
        assert_eq!(l.len(), 4);
    }

    #[test]
    fn display_names_attach_and_survive_absorb() {
        let mut a = VarLedger::new();
        let x = a.fresh_named("ph2", "c", "c");
        assert_eq!(a.display_of(&x), Some("c"));
        let mut b = VarLedger::new();
        b.note_existing(&x, "ph2", Some("c"));
        b.fresh("rem", "v");
        let mut c = VarLedger::new();
        c.absorb(&a);
        c.absorb(&b);
        assert_eq!(c.len(), 2);
        assert_eq!(c.display_of(&x), Some("c"));
    }

    #[test]
    fn polynomial_cost_figures() {
        let c = CostModel::new(5);
        assert_eq!(c.save1(), 82);
        assert_eq!(c.save2(), 14);
        assert_eq!(c.conserved(), 68);
    }

    #[test]
    fn exponential_cost_figures() {
        let c = CostModel::new(5);
        assert_eq!(c.save1_exponential(), 22);
        assert_eq!(c.save2_exponential(), 2);
        assert_eq!(c.conserved_exponential(), 20);
    }

    #[test]
    fn conserved_grows_linearly_in_gamma() {
        for g in 0..32 {
            let c = CostModel::new(g);
            assert_eq!(c.conserved(), 8 * (g + 1) + 20);
            assert_eq!(c.conserved_exponential(), 20);
        }
    }
}
