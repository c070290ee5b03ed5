#pragma once

#include "bpcheck/model.hpp"

#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

namespace bpcheck
{

class PlayoutError : public ModelError
{
public:
    using ModelError::ModelError;
};

/// A labeled workflow net. Transitions without a label are silent.
struct WorkflowNet
{
    struct Transition
    {
        std::string id;
        std::optional< Label > label;

        friend bool operator==( const Transition&, const Transition& ) = default;
    };
    struct Arc
    {
        std::string from;
        std::string to;

        friend bool operator==( const Arc&, const Arc& ) = default;
    };

    std::vector< std::string > places;
    std::vector< Transition > transitions;
    std::vector< Arc > arcs;
    std::map< std::string, unsigned > initial;
    std::map< std::string, unsigned > final;

    /// Throws ModelError on unknown arc endpoints, place-to-place or transition-to-transition arcs,
    /// duplicate identifiers, or markings over unknown places.
    void validate() const;

    friend bool operator==( const WorkflowNet&, const WorkflowNet& ) = default;
};

struct PlayoutOptions
{
    unsigned loop_bound = 1;      // each marking may recur this many times along one run
    std::size_t variant_cap = 1000;
};

/// Labeled sequences of all runs from the initial to the final marking. Runs that get stuck
/// before the final marking are discarded. Throws PlayoutError past the variant cap.
[[nodiscard]] std::set< Sequence > playout( const WorkflowNet& net, const PlayoutOptions& opts = {} );

} // namespace bpcheck
