#pragma once

#include "bpcheck/selector.hpp"
#include "bpcheck/semantics.hpp"

#include <iosfwd>
#include <string>
#include <vector>

namespace bpcheck
{

inline constexpr int exit_ok = 0;
inline constexpr int exit_usage = 1;
inline constexpr int exit_data = 2;

/// Applies line commands to a filter until "done" or end of input:
///   drop|exclude object|action|activity|role <label>
///   pin <constraint-key>
///   list
/// Returns false if a command was malformed (the rest is still processed).
bool run_review_session( std::istream& in, std::ostream& out, const std::vector< FittedConstraint >& shown,
                         ReviewFilter& filter );

/// Entry point of the `bpcheck` tool. Returns the process exit status.
int run_cli( const std::vector< std::string >& args, std::istream& in, std::ostream& out, std::ostream& err );

} // namespace bpcheck
