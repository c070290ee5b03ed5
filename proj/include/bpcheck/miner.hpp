#pragma once

#include "bpcheck/model.hpp"
#include "bpcheck/semantics.hpp"

#include <map>
#include <set>
#include <string>
#include <utility>
#include <vector>

namespace bpcheck
{

/// Binary templates over ordered pairs of distinct activities, kept when they hold on every
/// sequence of the model and are activated by at least one.
[[nodiscard]] std::vector< MinedConstraint > mine_activity_constraints( const ProcessModel& model );

/// As the activity miner, over the object projection of each sequence.
[[nodiscard]] std::vector< MinedConstraint > mine_interobject_constraints( const ProcessModel& model,
                                                                           const LabelIndex& labels );

/// For each object, the action sequence of every model sequence (empty when the object is absent).
[[nodiscard]] std::map< Label, std::vector< Sequence > > project_per_object( const std::set< Sequence >& sequences,
                                                                             const std::set< Label >& objects,
                                                                             const LabelIndex& labels );

/// All 13 templates over each object's actions. Sequences in which the object does not occur are
/// skipped, so constraints describe only the lifecycles where the object is present.
[[nodiscard]] std::vector< MinedConstraint > mine_intraobject_constraints( const ProcessModel& model,
                                                                           const LabelIndex& labels );

/// Absence(a) unless performed by r, for each entry a -> r of the role map.
[[nodiscard]] std::vector< MinedConstraint > mine_role_constraints( const ProcessModel& model );

/// The four miners combined, with raw (unstandardized) labels.
[[nodiscard]] std::vector< MinedConstraint > mine_model( const ProcessModel& model, const LabelIndex& labels );

/// Rewrites labels into canonical form: activities via standardize_label, actions via
/// standardize_action. Returns nothing when standardization makes two parameters equal.
[[nodiscard]] std::optional< ConstraintKey > standardize_key( const ConstraintKey& key, const Lexicon& lex );

/// Merged constraints with the ids of the models they were mined from.
class ConstraintCollection
{
    std::map< ConstraintKey, std::set< std::string > > _provenance;

public:
    void add( const ConstraintKey& key, const std::string& model_id );
    void add( const ConstraintKey& key, const std::set< std::string >& model_ids );
    void erase( const ConstraintKey& key ) { _provenance.erase( key ); }

    [[nodiscard]] std::size_t size() const { return _provenance.size(); }
    [[nodiscard]] bool empty() const { return _provenance.empty(); }
    [[nodiscard]] bool contains( const ConstraintKey& key ) const { return _provenance.contains( key ); }
    [[nodiscard]] std::uint32_t support( const ConstraintKey& key ) const;
    [[nodiscard]] const std::set< std::string >& provenance( const ConstraintKey& key ) const;
    [[nodiscard]] const std::map< ConstraintKey, std::set< std::string > >& entries() const { return _provenance; }

    /// Constraints in key order, support = number of source models.
    [[nodiscard]] std::vector< MinedConstraint > constraints() const;

    friend bool operator==( const ConstraintCollection&, const ConstraintCollection& ) = default;
};

/// Drops every constraint implied by another one with the same kind, scope and support.
[[nodiscard]] ConstraintCollection prune_subsumed( const ConstraintCollection& c );

/// Standardizes labels, merges per key (support counts distinct models), then prunes.
[[nodiscard]] ConstraintCollection refine_collection(
    const std::vector< std::pair< std::string, std::vector< MinedConstraint > > >& per_model, const Lexicon& lex );

/// Mines every model (in parallel when `jobs` > 1) and refines the union.
[[nodiscard]] ConstraintCollection mine_collection( const std::vector< ProcessModel >& models, const LabelIndex& labels,
                                                    unsigned jobs = 1 );

} // namespace bpcheck
