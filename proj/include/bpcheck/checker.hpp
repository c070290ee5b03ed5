#pragma once

#include "bpcheck/model.hpp"
#include "bpcheck/semantics.hpp"

#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

namespace bpcheck
{

/// Verdict of a constraint on one trace, on the projection matching its kind.
[[nodiscard]] Verdict evaluate_on_trace( const ConstraintKey& constraint, const Trace& trace, const LabelIndex& labels );

[[nodiscard]] std::optional< Violation > check_trace( const Trace& trace, const ConstraintKey& constraint,
                                                      const LabelIndex& labels );

/// Every violated (trace, constraint) pair; a trace counts once per constraint.
[[nodiscard]] std::set< Violation > check_log( const EventLog& log, const std::vector< ConstraintKey >& constraints,
                                               const LabelIndex& labels, unsigned jobs = 1 );

[[nodiscard]] std::vector< ConstraintKey > keys_of( const std::vector< FittedConstraint >& constraints );

/// One-sentence reading of a constraint.
[[nodiscard]] std::string explain( const ConstraintKey& constraint, const Lexicon& lex = Lexicon::builtin() );

struct ViolationGroup
{
    ConstraintKey constraint;
    std::string explanation;
    std::vector< std::string > case_ids; // sorted
    std::size_t count = 0;

    friend bool operator==( const ViolationGroup&, const ViolationGroup& ) = default;
};

struct ViolationReport
{
    std::vector< ViolationGroup > groups;        // by descending count, then key
    std::map< std::string, std::size_t > totals; // per kind name, every kind present
    std::map< std::string, std::string > config; // echo of the run configuration, including the seed
    std::size_t traces = 0;

    [[nodiscard]] std::size_t total() const;

    friend bool operator==( const ViolationReport&, const ViolationReport& ) = default;
};

/// Groups violations per constraint. Throws ModelError if a violation names a case missing from the log.
[[nodiscard]] ViolationReport aggregate( const std::set< Violation >& violations, const EventLog& log,
                                         const Lexicon& lex = Lexicon::builtin() );

/// Aligned plain-text table: constraint, explanation, count, cases.
[[nodiscard]] std::string render_text( const ViolationReport& report );

} // namespace bpcheck
