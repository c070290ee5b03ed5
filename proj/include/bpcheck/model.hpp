#pragma once

#include <array>
#include <compare>
#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace bpcheck
{

using Label = std::string;
using Sequence = std::vector< Label >;

/// Case-folds and collapses whitespace. Labels are compared in this form everywhere.
[[nodiscard]] Label normalize_label( std::string_view raw );

class ModelError : public std::runtime_error
{
public:
    using std::runtime_error::runtime_error;
};

struct Event
{
    Label activity;
    std::optional< Label > role; // absent encodes an unassigned role

    Event( std::string_view activity_label, std::optional< std::string_view > role_label = std::nullopt );

    friend bool operator==( const Event&, const Event& ) = default;
};

struct Trace
{
    std::string case_id;
    std::vector< Event > events;

    [[nodiscard]] Sequence activities() const;

    friend bool operator==( const Trace&, const Trace& ) = default;
};

struct EventLog
{
    std::vector< Trace > traces;

    friend bool operator==( const EventLog&, const EventLog& ) = default;
};

[[nodiscard]] std::set< Label > activities_of( const EventLog& log );
[[nodiscard]] std::set< Label > roles_of( const EventLog& log );
[[nodiscard]] std::map< Sequence, std::size_t > variants_of( const EventLog& log );

/// A process model reduced to the parts that matter for mining: its activities, the finite
/// execution sequences it allows, its roles and the activity-to-role assignment.
class ProcessModel
{
    std::string _id;
    std::set< Label > _activities;
    std::set< Sequence > _sequences;
    std::set< Label > _roles;
    std::map< Label, Label > _role_map;

public:
    ProcessModel( std::string id, std::set< Label > activities, std::set< Sequence > sequences,
                  std::set< Label > roles, std::map< Label, Label > role_map );

    [[nodiscard]] const std::string& id() const { return _id; }
    [[nodiscard]] const std::set< Label >& activities() const { return _activities; }
    [[nodiscard]] const std::set< Sequence >& sequences() const { return _sequences; }
    [[nodiscard]] const std::set< Label >& roles() const { return _roles; }
    [[nodiscard]] const std::map< Label, Label >& role_map() const { return _role_map; }
};

enum class Template : std::uint8_t
{
    AtLeastOne,
    AtMostOne,
    ExactlyOne,
    Absence,
    RespondedExistence,
    Response,
    AlternateResponse,
    Precedence,
    AlternatePrecedence,
    CoExistence,
    Succession,
    AlternateSuccession,
    NotCoExistence,
};

inline constexpr std::array< Template, 13 > all_templates = {
    Template::AtLeastOne,         Template::AtMostOne,           Template::ExactlyOne,
    Template::Absence,            Template::RespondedExistence,  Template::Response,
    Template::AlternateResponse,  Template::Precedence,          Template::AlternatePrecedence,
    Template::CoExistence,        Template::Succession,          Template::AlternateSuccession,
    Template::NotCoExistence,
};

inline constexpr std::array< Template, 9 > binary_templates = {
    Template::RespondedExistence, Template::Precedence,  Template::AlternatePrecedence,
    Template::Response,           Template::AlternateResponse, Template::Succession,
    Template::AlternateSuccession, Template::CoExistence, Template::NotCoExistence,
};

inline constexpr std::array< Template, 4 > unary_templates = {
    Template::AtLeastOne, Template::AtMostOne, Template::ExactlyOne, Template::Absence,
};

[[nodiscard]] constexpr int arity( Template t )
{
    switch ( t )
    {
    case Template::AtLeastOne:
    case Template::AtMostOne:
    case Template::ExactlyOne:
    case Template::Absence:
        return 1;
    default:
        return 2;
    }
}

[[nodiscard]] std::string_view to_string( Template t );
[[nodiscard]] std::optional< Template > template_from_string( std::string_view name );

enum class ConstraintKind : std::uint8_t
{
    Activity,
    InterObject,
    IntraObject,
    Role,
};

inline constexpr std::array< ConstraintKind, 4 > all_kinds = {
    ConstraintKind::Activity, ConstraintKind::InterObject, ConstraintKind::IntraObject, ConstraintKind::Role,
};

[[nodiscard]] std::string_view to_string( ConstraintKind k );
[[nodiscard]] std::optional< ConstraintKind > kind_from_string( std::string_view name );

/// Templates admitted per constraint kind.
[[nodiscard]] bool template_allowed( ConstraintKind kind, Template t );

/// Kind-specific parameters.
///   activity:  first = a1, second = a2
///   interobj:  first = o1, second = o2
///   intraobj:  scope = object, first = n1, second = n2 (empty for unary templates)
///   role:      first = activity, second = role
struct ConstraintParams
{
    Label scope;
    Label first;
    Label second;

    auto operator<=>( const ConstraintParams& ) const = default;
};

/// Identity of a constraint independent of support, similarity and provenance.
struct ConstraintKey
{
    ConstraintKind kind;
    Template templ;
    ConstraintParams params;

    auto operator<=>( const ConstraintKey& ) const = default;

    /// Stable textual form, e.g. `intraobj|Precedence|order|check|approve`.
    [[nodiscard]] std::string str() const;
    /// Human-readable form, e.g. `Precedence(check, approve)|order`.
    [[nodiscard]] std::string display() const;

    /// Inverse of str(). Throws ModelError on malformed input.
    [[nodiscard]] static ConstraintKey parse( std::string_view text );
};

class MinedConstraint
{
    ConstraintKey _key;
    std::uint32_t _support;

public:
    /// Throws ModelError when the template is not admitted for the kind, when parameters are
    /// missing or equal, or when support is zero.
    MinedConstraint( ConstraintKind kind, Template templ, ConstraintParams params, std::uint32_t support = 1 );

    [[nodiscard]] const ConstraintKey& key() const { return _key; }
    [[nodiscard]] ConstraintKind kind() const { return _key.kind; }
    [[nodiscard]] Template templ() const { return _key.templ; }
    [[nodiscard]] const ConstraintParams& params() const { return _key.params; }
    [[nodiscard]] std::uint32_t support() const { return _support; }
    [[nodiscard]] bool unary() const { return arity( _key.templ ) == 1; }

    friend bool operator==( const MinedConstraint&, const MinedConstraint& ) = default;
};

struct SimilarityEntry
{
    Label model_component;
    Label log_component;
    double score = 0.0;

    friend bool operator==( const SimilarityEntry&, const SimilarityEntry& ) = default;
};

/// A mined constraint re-expressed over components found in a concrete log.
struct FittedConstraint
{
    ConstraintKey source;
    ConstraintKey key; // same kind and template as source, log-side components
    std::uint32_t support = 1;
    std::vector< SimilarityEntry > sim;
    double relevance = 0.0;

    [[nodiscard]] ConstraintKind kind() const { return key.kind; }
    [[nodiscard]] Template templ() const { return key.templ; }
    [[nodiscard]] const ConstraintParams& params() const { return key.params; }
    [[nodiscard]] double average_similarity() const;

    friend bool operator==( const FittedConstraint&, const FittedConstraint& ) = default;
};

/// Identity fitting: the constraint applied verbatim, with no similarity entries.
[[nodiscard]] FittedConstraint as_fitted( const MinedConstraint& c );

enum class Verdict : std::uint8_t
{
    Violated,
    SatisfiedActivated,
    SatisfiedVacuously,
};

[[nodiscard]] std::string_view to_string( Verdict v );

struct Violation
{
    std::string case_id;
    ConstraintKey constraint;

    auto operator<=>( const Violation& ) const = default;
};

} // namespace bpcheck
