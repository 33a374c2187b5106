//! Shared workloads for the criterion benches.

use plurispec_core::quadrature::rule_for;
use plurispec_core::symbol::parse_symbol;
use plurispec_core::{DomainKind, QuadratureRule, SpaceFlavor, SpaceSpec, SymbolExpr, Truncation};

/// A pluriharmonic space, a rule exact for its `D = degree` truncation and a
/// real polynomial symbol of degree 2.
pub struct Workload {
    pub space: SpaceSpec,
    pub truncation: Truncation,
    pub rule: QuadratureRule,
    pub symbol: SymbolExpr,
}

pub fn workload(domain: DomainKind, lambda: f64, degree: u32) -> Workload {
    let space = SpaceSpec::new(domain, lambda, SpaceFlavor::Plurih).expect("valid space");
    let rule = rule_for(&space, 2 * degree + 4, 4 * degree + 9).expect("rule");
    Workload {
        space,
        truncation: Truncation::plurih(degree),
        rule,
        symbol: parse_symbol("z*conj(z) + (z + conj(z))/2").expect("symbol"),
    }
}
