#pragma once

#include "bpcheck/automaton.hpp"
#include "bpcheck/io.hpp"
#include "bpcheck/model.hpp"

#include <filesystem>
#include <initializer_list>
#include <optional>
#include <random>
#include <set>
#include <string>
#include <utility>
#include <vector>

namespace testing
{

using bpcheck::Label;
using bpcheck::Sequence;

[[nodiscard]] std::filesystem::path source_path( const std::string& relative );

struct E
{
    const char* activity;
    const char* role = nullptr;
};
[[nodiscard]] bpcheck::Trace trace( std::string case_id, std::initializer_list< E > events );

/// Fresh empty directory under the system temp dir, removed on destruction.
class TempDir
{
    std::filesystem::path _path;

public:
    explicit TempDir( const std::string& tag );
    ~TempDir();
    TempDir( const TempDir& ) = delete;
    TempDir& operator=( const TempDir& ) = delete;
    [[nodiscard]] const std::filesystem::path& path() const { return _path; }
};

/// Per-member activatability by enumerating every word up to `max_len` over the group's symbols
/// plus one unrelated symbol, using only the reference semantics.
[[nodiscard]] std::vector< bool > brute_activatable( const std::vector< bpcheck::TemplateInstance >& group,
                                                     std::size_t max_len );

/// Reference-semantics reading of "holds on every sequence and is activated by one".
[[nodiscard]] bool brute_minable( bpcheck::Template t, const Label& a, const Label& b,
                                  const std::set< Sequence >& sequences );

/// Random group of `size` instances over `symbols`.
[[nodiscard]] std::vector< bpcheck::TemplateInstance > random_group( std::mt19937_64& rng, std::size_t size,
                                                                     const std::vector< Label >& symbols );

/// Normalized label with spaces, quotes, commas and non-ASCII letters (never '|').
[[nodiscard]] Label random_label( std::mt19937_64& rng );
/// A key that MinedConstraint accepts.
[[nodiscard]] bpcheck::ConstraintKey random_key( std::mt19937_64& rng );
[[nodiscard]] bpcheck::ConstraintCollection random_collection( std::mt19937_64& rng );
[[nodiscard]] bpcheck::RunInfo random_info( std::mt19937_64& rng );
[[nodiscard]] bpcheck::ViolationReport random_report( std::mt19937_64& rng );
[[nodiscard]] bpcheck::ReviewFilter random_filter( std::mt19937_64& rng );
[[nodiscard]] bpcheck::SelectedSet random_selected( std::mt19937_64& rng );

} // namespace testing
