#pragma once

#include "bpcheck/model.hpp"
#include "bpcheck/petri.hpp"

#include <cstdint>
#include <map>
#include <memory>
#include <set>
#include <string>
#include <vector>

namespace bpcheck
{

/// Block-structured process tree; leaves are activities or silent steps.
struct ProcessTree
{
    enum class Op : std::uint8_t
    {
        Activity,
        Silent,
        Sequence,
        Choice,
        Parallel,
        Loop, // children: body, redo
    };
    Op op = Op::Silent;
    Label label;
    std::vector< ProcessTree > children;

    [[nodiscard]] static ProcessTree activity( Label l ) { return { Op::Activity, std::move( l ), {} }; }
    [[nodiscard]] static ProcessTree silent() { return { Op::Silent, {}, {} }; }
    [[nodiscard]] static ProcessTree node( Op op, std::vector< ProcessTree > children )
    {
        return { op, {}, std::move( children ) };
    }
};

/// Sound workflow net with one source place and one sink place.
[[nodiscard]] WorkflowNet to_workflow_net( const ProcessTree& tree );

struct SyntheticModel
{
    std::string id;
    ProcessTree tree;
    WorkflowNet net;
    std::set< Label > activities;
    std::set< Label > roles;
    std::map< Label, Label > role_map;

    /// Plays out the net with the default loop bound.
    [[nodiscard]] ProcessModel to_process_model() const;
};

/// `count` models composed from a library of business-object lifecycles (orders, invoices,
/// goods, claims, ...), with varied label styles, synonyms, optional steps, rework loops and roles.
[[nodiscard]] std::vector< SyntheticModel > synthetic_collection( std::size_t count = 20, std::uint64_t seed = 7 );

} // namespace bpcheck
