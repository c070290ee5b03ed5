#pragma once

#include "bpcheck/declare.hpp"
#include "bpcheck/model.hpp"

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace bpcheck
{

/// Symbol standing for every activity outside a consistency alphabet.
inline constexpr std::string_view other_symbol = "\x1f<other>";

/// A template instantiation over plain symbols, the unit of consistency reasoning.
struct TemplateInstance
{
    Template templ;
    Label first;
    Label second; // empty for unary templates

    auto operator<=>( const TemplateInstance& ) const = default;
};

/// Deterministic, total automaton over `alphabet` (whose last symbol is the OTHER symbol).
/// Accepts exactly the finite sequences that do not violate its constraint.
class ConstraintAutomaton
{
    std::vector< Label > _alphabet;
    std::vector< std::vector< std::uint16_t > > _delta; // [state][symbol]
    std::vector< bool > _accepting;
    std::vector< std::vector< bool > > _activating; // [state][symbol]
    std::vector< bool > _live;                      // an accepting state is reachable

public:
    ConstraintAutomaton( std::vector< Label > alphabet, std::vector< std::vector< std::uint16_t > > delta,
                         std::vector< bool > accepting, std::vector< std::vector< bool > > activating );

    [[nodiscard]] const std::vector< Label >& alphabet() const { return _alphabet; }
    [[nodiscard]] std::size_t state_count() const { return _delta.size(); }
    [[nodiscard]] static constexpr std::uint16_t initial() { return 0; }
    [[nodiscard]] std::uint16_t step( std::uint16_t state, std::size_t symbol ) const { return _delta[ state ][ symbol ]; }
    [[nodiscard]] bool accepting( std::uint16_t state ) const { return _accepting[ state ]; }
    [[nodiscard]] bool activating( std::uint16_t state, std::size_t symbol ) const { return _activating[ state ][ symbol ]; }
    [[nodiscard]] bool live( std::uint16_t state ) const { return _live[ state ]; }

    /// Index of a symbol; labels outside the alphabet map to OTHER.
    [[nodiscard]] std::size_t symbol_index( std::string_view label ) const;

    struct Run
    {
        bool accepted = false;
        bool activated = false;
    };
    [[nodiscard]] Run run( std::span< const Label > word ) const;
};

/// `alphabet` must contain the instance's parameters; OTHER is appended when missing.
[[nodiscard]] ConstraintAutomaton to_automaton( const TemplateInstance& c, std::vector< Label > alphabet );

/// Union of the parameters of `group`, sorted, followed by OTHER.
[[nodiscard]] std::vector< Label > consistency_alphabet( std::span< const TemplateInstance > group );

class ConsistencyLimitError : public std::runtime_error
{
public:
    using std::runtime_error::runtime_error;
};

struct ConsistencyOptions
{
    std::size_t max_product_states = 500000;
};

/// Quasi-consistency: every member can be activated by a non-empty word satisfying all members.
/// Throws ConsistencyLimitError when the product automaton exceeds the configured size.
[[nodiscard]] bool is_consistent( std::span< const TemplateInstance > group, const ConsistencyOptions& opts = {} );

/// Per-member activatability within the whole group (same search as is_consistent).
[[nodiscard]] std::vector< bool > activatable_members( std::span< const TemplateInstance > group,
                                                       const ConsistencyOptions& opts = {} );

/// Indices into the group.
using CorrectionSet = std::vector< std::size_t >;

struct CorrectionSearch
{
    std::vector< CorrectionSet > sets; // subset-minimal, sorted by size then lexicographically
    std::optional< std::string > diagnostic;
};

/// All subset-minimal correction sets of size at most `size_cap` that avoid `protected_members`.
/// Throws std::invalid_argument if the group is already consistent or `size_cap` is zero.
[[nodiscard]] CorrectionSearch minimal_correction_sets( std::span< const TemplateInstance > group, std::size_t size_cap,
                                                        std::span< const std::size_t > protected_members = {},
                                                        const ConsistencyOptions& opts = {} );

} // namespace bpcheck
