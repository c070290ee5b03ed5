#pragma once

#include "bpcheck/automaton.hpp"
#include "bpcheck/miner.hpp"
#include "bpcheck/model.hpp"
#include "bpcheck/semantics.hpp"
#include "bpcheck/similarity.hpp"

#include <array>
#include <set>
#include <string>
#include <vector>

namespace bpcheck
{

/// Match thresholds per component type. Actions of intra-object constraints are matched through
/// the synonym lexicon and have no threshold.
struct MatchThresholds
{
    double activity = 0.5;
    double object = 0.5;
    double role = 0.5;

    friend bool operator==( const MatchThresholds&, const MatchThresholds& ) = default;
};

enum class Strategy : std::uint8_t
{
    TopK,
    Threshold,
};

struct KindSelection
{
    Strategy strategy = Strategy::TopK;
    std::size_t k = 100;
    double tau = 0.5;

    friend bool operator==( const KindSelection&, const KindSelection& ) = default;
};

struct SelectionConfig
{
    MatchThresholds epsilon;
    double omega = 0.9;
    std::array< KindSelection, 4 > per_kind{}; // indexed by ConstraintKind
    std::size_t mcs_size_cap = 3;
    ConsistencyOptions consistency;

    [[nodiscard]] KindSelection& rule( ConstraintKind k ) { return per_kind[ static_cast< std::size_t >( k ) ]; }
    [[nodiscard]] const KindSelection& rule( ConstraintKind k ) const { return per_kind[ static_cast< std::size_t >( k ) ]; }

    void use_top_k( std::size_t k );
    void use_threshold( double tau );

    /// Throws std::invalid_argument when a knob is out of range.
    void validate() const;
};

struct ReviewFilter
{
    std::set< Label > objects;
    std::set< Label > actions;
    std::set< Label > activities;
    std::set< Label > roles;
    std::set< std::string > pinned; // ConstraintKey::str() of protected constraints

    [[nodiscard]] bool empty() const
    {
        return objects.empty() && actions.empty() && activities.empty() && roles.empty() && pinned.empty();
    }
    [[nodiscard]] bool is_pinned( const ConstraintKey& key ) const { return pinned.contains( key.str() ); }
    /// True if the constraint mentions an excluded component.
    [[nodiscard]] bool excludes( const ConstraintKey& key, const LabelIndex& labels ) const;
    /// Throws ModelError when a pinned constraint is excluded or a pin is not a valid key.
    void validate( const LabelIndex& labels ) const;

    friend bool operator==( const ReviewFilter&, const ReviewFilter& ) = default;
};

/// Instantiates mined constraints over the components of a log. Scores of accepted matches are
/// recorded in the similarity map. When several mined constraints fit to the same log-side
/// constraint, the best-matching one (then the best-supported, then the smallest source key) wins.
/// Provider failures propagate as SimilarityError.
[[nodiscard]] std::vector< FittedConstraint > fit_constraints( const std::vector< MinedConstraint >& mined,
                                                               const EventLog& log, const SelectionConfig& config,
                                                               const SimilarityProvider& provider,
                                                               const LabelIndex& labels );

/// omega * mean similarity + (1 - omega) * support / (largest support of the same kind in `all`).
[[nodiscard]] double relevance( const FittedConstraint& c, const std::vector< FittedConstraint >& all, double omega );

/// Sets the relevance of every constraint.
void score_relevance( std::vector< FittedConstraint >& constraints, double omega );

/// Top-k or relevance > tau per kind, in descending relevance (ties: higher support, then key).
[[nodiscard]] std::vector< FittedConstraint > select( const std::vector< FittedConstraint >& constraints,
                                                      const SelectionConfig& config );

[[nodiscard]] std::vector< FittedConstraint > apply_review( const std::vector< FittedConstraint >& constraints,
                                                            const ReviewFilter& filter, const LabelIndex& labels );

/// Consistency scope of a constraint: its kind plus the object for intra-object constraints.
/// Role constraints have no scope.
[[nodiscard]] std::optional< std::pair< ConstraintKind, Label > > consistency_scope( const ConstraintKey& key );

struct RepairResult
{
    std::vector< FittedConstraint > constraints;
    std::vector< ConstraintKey > removed;
    std::vector< std::string > diagnostics; // unresolved groups
};

/// Removes, per inconsistent scope group, the correction set of lowest cumulative relevance
/// (ties: fewer constraints, then smaller keys), never touching pinned constraints.
[[nodiscard]] RepairResult ensure_consistency( const std::vector< FittedConstraint >& constraints,
                                               const SelectionConfig& config, const ReviewFilter& filter );

} // namespace bpcheck
