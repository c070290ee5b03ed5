#pragma once

#include "bpcheck/model.hpp"

#include <span>
#include <string_view>
#include <vector>

namespace bpcheck
{

/// Parameters of a template instantiation. `second` is ignored for unary templates.
struct Binding
{
    std::string_view first;
    std::string_view second;
};

/// Finite-trace verdict of a template on a sequence, with activation tracking.
///
/// A sequence violates the template when the template's formula fails at its first position.
/// Otherwise the verdict is SatisfiedActivated when the activation condition fires at least once
/// (unary templates are activated by any non-empty sequence) and SatisfiedVacuously if not.
/// AlternatePrecedence(a, b) is read operationally: every b needs an earlier a with no b in between.
[[nodiscard]] Verdict evaluate( Template t, Binding params, std::span< const Label > sequence );

/// Throws std::invalid_argument if the number of parameters does not match the template arity.
[[nodiscard]] Verdict evaluate( Template t, std::span< const Label > params, std::span< const Label > sequence );

/// Absence(a) activated by events of `a` whose role differs from `r`; an absent role always differs.
[[nodiscard]] Verdict evaluate_role( const ConstraintKey& constraint, const Trace& trace );

struct HoldsOnAll
{
    bool holds = true;
    bool activated_somewhere = false;

    [[nodiscard]] bool minable() const { return holds && activated_somewhere; }
};

template < typename Sequences >
[[nodiscard]] HoldsOnAll holds_on_all( Template t, Binding params, const Sequences& sequences )
{
    HoldsOnAll out;
    for ( const auto& seq : sequences )
    {
        const auto v = evaluate( t, params, std::span< const Label >( seq ) );
        if ( v == Verdict::Violated )
        {
            out.holds = false;
            return out;
        }
        out.activated_somewhere |= v == Verdict::SatisfiedActivated;
    }
    return out;
}

/// One edge of the subsumption lattice: `stronger(a, b)` implies `weaker(a, b)`, or
/// `weaker(b, a)` when `swapped` is set.
struct SubsumptionEdge
{
    Template stronger;
    Template weaker;
    bool swapped = false;
};

/// Direct edges of the lattice.
[[nodiscard]] std::span< const SubsumptionEdge > subsumption_edges();

/// Reflexive-free transitive closure of the lattice, with the parameter order composed along paths.
[[nodiscard]] const std::vector< SubsumptionEdge >& subsumption_closure();

/// True iff `stronger` with binding `(s1, s2)` implies `weaker` with binding `(w1, w2)` via the lattice.
[[nodiscard]] bool subsumes( Template stronger, Binding strong_params, Template weaker, Binding weak_params );

} // namespace bpcheck
