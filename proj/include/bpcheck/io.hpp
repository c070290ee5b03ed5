#pragma once

#include "bpcheck/checker.hpp"
#include "bpcheck/eval.hpp"
#include "bpcheck/miner.hpp"
#include "bpcheck/model.hpp"
#include "bpcheck/petri.hpp"
#include "bpcheck/selector.hpp"

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <map>
#include <optional>
#include <string>
#include <vector>

namespace bpcheck
{

/// Unreadable or malformed input. Messages name the file and, where known, the line or element.
class DataError : public std::runtime_error
{
public:
    using std::runtime_error::runtime_error;
};

/// Seed and configuration recorded in every output file.
struct RunInfo
{
    std::uint64_t seed = 0;
    std::map< std::string, std::string > config;

    friend bool operator==( const RunInfo&, const RunInfo& ) = default;
};

[[nodiscard]] std::string read_text( const std::filesystem::path& path );
void write_text( const std::filesystem::path& path, const std::string& content );

// Event logs. `.xes` reads `concept:name` (case id and activity) and `org:role`; anything else is
// ignored. `.csv` needs `case_id` and `activity` columns, with optional `role` and `timestamp`.
[[nodiscard]] EventLog read_log( const std::filesystem::path& path );
[[nodiscard]] EventLog parse_xes( const std::string& text, const std::string& source = "<xes>" );
[[nodiscard]] EventLog parse_csv_log( const std::string& text, const std::string& source = "<csv>" );
[[nodiscard]] std::string to_csv( const EventLog& log );
[[nodiscard]] std::string to_xes( const EventLog& log );

/// RFC 4180 records; throws DataError with the line number on unterminated quotes.
[[nodiscard]] std::vector< std::vector< std::string > > parse_csv( const std::string& text, const std::string& source );

// Process models: JSON with id, activities, roles, role_map and exactly one of `sequences` or `net`.
[[nodiscard]] ProcessModel read_model( const std::filesystem::path& path, const PlayoutOptions& playout_opts = {} );
[[nodiscard]] ProcessModel parse_model( const std::string& text, const std::string& source = "<model>",
                                        const PlayoutOptions& playout_opts = {} );
/// Every `*.json` model in `dir`, in file-name order.
[[nodiscard]] std::vector< ProcessModel > read_models( const std::filesystem::path& dir,
                                                       const PlayoutOptions& playout_opts = {} );
[[nodiscard]] std::string model_to_json( const ProcessModel& model );
[[nodiscard]] std::string net_model_to_json( const std::string& id, const std::set< Label >& activities,
                                             const std::set< Label >& roles, const std::map< Label, Label >& role_map,
                                             const WorkflowNet& net );

// Constraint collections: JSON lines, a header line then one constraint per line.
struct ConstraintFile
{
    ConstraintCollection collection;
    RunInfo info;
};
[[nodiscard]] std::string constraints_to_jsonl( const ConstraintCollection& c, const RunInfo& info );
[[nodiscard]] ConstraintFile parse_constraints( const std::string& text, const std::string& source = "<constraints>" );

// Selected constraint sets.
struct SelectedSet
{
    std::vector< FittedConstraint > constraints;
    std::vector< ConstraintKey > removed;
    std::vector< std::string > diagnostics;
    RunInfo info;

    friend bool operator==( const SelectedSet&, const SelectedSet& ) = default;
};
[[nodiscard]] std::string selected_to_json( const SelectedSet& s );
[[nodiscard]] SelectedSet parse_selected( const std::string& text, const std::string& source = "<selected>" );

// Violation reports. The seed lives in the report's config echo.
[[nodiscard]] std::string report_to_json( const ViolationReport& r );
[[nodiscard]] ViolationReport parse_report( const std::string& text, const std::string& source = "<report>" );

// Review filters: {"exclude":{"objects":[],"actions":[],"activities":[],"roles":[]},"pin":[]}.
[[nodiscard]] std::string filter_to_json( const ReviewFilter& f );
[[nodiscard]] ReviewFilter parse_filter( const std::string& text, const std::string& source = "<filter>" );

// Evaluation metrics. Undefined precision or recall is written as NA.
[[nodiscard]] std::string metrics_to_csv( const std::vector< MetricsRow >& rows, const RunInfo& info );
[[nodiscard]] std::string summary_to_text( const std::vector< SummaryRow >& rows );

} // namespace bpcheck
