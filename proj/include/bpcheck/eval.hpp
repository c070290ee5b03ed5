#pragma once

#include "bpcheck/model.hpp"
#include "bpcheck/selector.hpp"
#include "bpcheck/semantics.hpp"
#include "bpcheck/similarity.hpp"

#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

namespace bpcheck
{

/// Derives an independent seed for a named sub-task from a run seed.
[[nodiscard]] std::uint64_t derive_seed( std::uint64_t seed, std::string_view tag );

/// One trace per model sequence (case ids `<model>-0001`, ...), then seeded cycling through the
/// sequences until the log has `min_traces` traces. Roles come from the model's role map.
[[nodiscard]] EventLog generate_log( const ProcessModel& model, std::uint64_t seed, std::size_t min_traces = 100 );

struct Mutation
{
    enum class Op : std::uint8_t
    {
        Insert,       // `activity` with `role` at `pos`
        Remove,       // event at `pos`
        Swap,         // events at `pos` and `other`
        ReassignRole, // event at `pos` gets `role`
    };
    Op op = Op::Insert;
    std::size_t pos = 0;
    std::size_t other = 0;
    Label activity;
    std::optional< Label > role;

    friend bool operator==( const Mutation&, const Mutation& ) = default;
};

struct MutationRecord
{
    std::string case_id;
    std::vector< Mutation > ops; // in application order

    friend bool operator==( const MutationRecord&, const MutationRecord& ) = default;
};

struct NoiseOptions
{
    double p_trace = 0.5;
    double p_repeat = 0.5;
    std::size_t max_ops = 10;
};

struct NoisyLog
{
    EventLog log;
    std::vector< MutationRecord > records; // only traces that were mutated
};

/// Per trace, applies one random operation with probability p_trace, then further ones with
/// probability p_repeat each, up to max_ops. Inserted activities come from the model, with their
/// mapped role. Operations that cannot apply (swap on one event, emptying removal, no alternative
/// role) are redrawn.
[[nodiscard]] NoisyLog inject_noise( const EventLog& log, const ProcessModel& model, std::uint64_t seed,
                                     const NoiseOptions& opts = {} );

void apply( Trace& trace, const Mutation& m );
[[nodiscard]] EventLog replay( const EventLog& clean, const std::vector< MutationRecord >& records );

/// The model's own constraints over its raw labels, pruned at equal support.
[[nodiscard]] std::vector< ConstraintKey > model_constraints( const ProcessModel& model, const LabelIndex& labels );

/// Rewrites violation keys into canonical form so detections and ground truth compare by identity.
[[nodiscard]] std::set< Violation > standardized( const std::set< Violation >& violations, const Lexicon& lex );

/// Violations of the model's own constraints in `log`, standardized.
[[nodiscard]] std::set< Violation > ground_truth_violations( const ProcessModel& model, const EventLog& log,
                                                             const LabelIndex& labels, unsigned jobs = 1 );

struct EvalRecord
{
    std::size_t tp = 0;
    std::size_t fp = 0;
    std::size_t fn = 0;

    [[nodiscard]] std::optional< double > precision() const;
    [[nodiscard]] std::optional< double > recall() const;

    friend bool operator==( const EvalRecord&, const EvalRecord& ) = default;
};

struct EvalScores
{
    std::map< ConstraintKind, EvalRecord > per_kind; // every kind present
    EvalRecord overall;
};

[[nodiscard]] EvalScores score( const std::set< Violation >& detected, const std::set< Violation >& truth );

/// A selection configuration evaluated in cross-validation: top-k (k set) or threshold (tau set).
struct EvalSetting
{
    std::optional< std::size_t > k;
    std::optional< double > tau;
    double omega = 0.9;

    [[nodiscard]] SelectionConfig selection( const SelectionConfig& base ) const;
    friend bool operator==( const EvalSetting&, const EvalSetting& ) = default;
};

/// tau = 0.5, tau = 0.8, k = 10 and k = 100, each with omega = 0.9.
[[nodiscard]] std::vector< EvalSetting > default_eval_settings();

struct MetricsRow
{
    std::size_t fold = 0;
    std::string model_id;
    std::string kind; // kind name or "all"
    EvalSetting setting;
    EvalRecord record;

    friend bool operator==( const MetricsRow&, const MetricsRow& ) = default;
};

struct CrossValidationOptions
{
    std::size_t folds = 5;
    std::uint64_t seed = 0;
    std::vector< EvalSetting > settings = default_eval_settings();
    SelectionConfig base; // epsilon, MCS cap and consistency limits
    NoiseOptions noise;
    std::size_t min_traces = 100;
    unsigned jobs = 1;
};

/// Seeded k-fold split; per fold, mines the training models and evaluates every held-out model's
/// noisy log under each setting. Throws std::invalid_argument if there are fewer models than folds.
[[nodiscard]] std::vector< MetricsRow > cross_validate( const std::vector< ProcessModel >& models,
                                                        const CrossValidationOptions& opts,
                                                        const SimilarityProvider& provider, const LabelIndex& labels );

struct SummaryRow
{
    std::string kind;
    EvalSetting setting;
    double tp = 0, fp = 0, fn = 0; // means over logs
    std::optional< double > precision; // mean over logs where defined
    std::optional< double > recall;
    std::size_t logs = 0;
    std::size_t undefined_precision = 0;
};

/// Per setting and kind, averages across logs and folds.
[[nodiscard]] std::vector< SummaryRow > summarize( const std::vector< MetricsRow >& rows );

} // namespace bpcheck
