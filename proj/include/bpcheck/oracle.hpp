#pragma once

// Brute-force reference semantics for the Declare templates, used only by tests.
// Formulas are interpreted by direct recursion over positions of a finite word and share
// no code with the engine or the automata.

#include "bpcheck/model.hpp"

#include <memory>
#include <set>
#include <span>
#include <stdexcept>
#include <vector>

namespace bpcheck::oracle
{

struct Formula;
using FormulaPtr = std::shared_ptr< const Formula >;

struct Formula
{
    enum class Op
    {
        Atom,
        True,
        Not,
        And,
        Or,
        Implies,
        Iff,
        Next,      // strong next
        Yesterday, // strong previous
        Eventually,
        Always,
        Until,
        Since,
        Once,
    };
    Op op;
    Label atom;
    FormulaPtr lhs;
    FormulaPtr rhs;
};

/// LTL-f formula of a template over parameters (a, b).
[[nodiscard]] FormulaPtr formula( Template t, const Label& a, const Label& b );

[[nodiscard]] bool holds( const Formula& f, std::span< const Label > word, std::size_t pos );

/// Word satisfies the template formula at its first position.
[[nodiscard]] bool satisfies( Template t, const Label& a, const Label& b, std::span< const Label > word );

/// Activation column of the template table, read literally.
[[nodiscard]] bool activated( Template t, const Label& a, const Label& b, std::span< const Label > word );

class OracleBoundsError : public std::invalid_argument
{
public:
    using std::invalid_argument::invalid_argument;
};

/// All words of length 1..max_len over `alphabet` satisfying the template.
/// Requires |alphabet| <= 5 and max_len <= 8.
[[nodiscard]] std::set< Sequence > oracle_satisfying( Template t, const Label& a, const Label& b,
                                                      std::span< const Label > alphabet, std::size_t max_len );

/// Every word of length 0..max_len over `alphabet`, shortest first.
[[nodiscard]] std::vector< Sequence > all_words( std::span< const Label > alphabet, std::size_t max_len );

} // namespace bpcheck::oracle
