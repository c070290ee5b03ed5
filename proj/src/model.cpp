#include "bpcheck/model.hpp"

#include <algorithm>
#include <cctype>
#include <numeric>

namespace bpcheck
{

Label normalize_label( std::string_view raw )
{
    Label out;
    out.reserve( raw.size() );
    bool pending_space = false;
    char prev = '\0';
    for ( char ch : raw )
    {
        const auto uc = static_cast< unsigned char >( ch );
        if ( std::isspace( uc ) || ch == '_' )
        {
            pending_space = !out.empty();
            prev = ' ';
            continue;
        }
        // camelCase boundary
        if ( std::isupper( uc ) && std::islower( static_cast< unsigned char >( prev ) ) )
            pending_space = true;
        if ( pending_space )
        {
            out.push_back( ' ' );
            pending_space = false;
        }
        out.push_back( static_cast< char >( std::tolower( uc ) ) );
        prev = ch;
    }
    return out;
}

Event::Event( std::string_view activity_label, std::optional< std::string_view > role_label )
    : activity{ normalize_label( activity_label ) }
{
    if ( activity.empty() )
        throw ModelError( "event activity must be non-empty" );
    if ( role_label )
    {
        auto r = normalize_label( *role_label );
        if ( !r.empty() )
            role = std::move( r );
    }
}

Sequence Trace::activities() const
{
    Sequence out;
    out.reserve( events.size() );
    for ( const auto& e : events )
        out.push_back( e.activity );
    return out;
}

std::set< Label > activities_of( const EventLog& log )
{
    std::set< Label > out;
    for ( const auto& t : log.traces )
        for ( const auto& e : t.events )
            out.insert( e.activity );
    return out;
}

std::set< Label > roles_of( const EventLog& log )
{
    std::set< Label > out;
    for ( const auto& t : log.traces )
        for ( const auto& e : t.events )
            if ( e.role )
                out.insert( *e.role );
    return out;
}

std::map< Sequence, std::size_t > variants_of( const EventLog& log )
{
    std::map< Sequence, std::size_t > out;
    for ( const auto& t : log.traces )
        ++out[ t.activities() ];
    return out;
}

ProcessModel::ProcessModel( std::string id, std::set< Label > activities, std::set< Sequence > sequences,
                            std::set< Label > roles, std::map< Label, Label > role_map )
    : _id{ std::move( id ) }
{
    for ( const auto& a : activities )
    {
        auto n = normalize_label( a );
        if ( n.empty() )
            throw ModelError( "model '" + _id + "': empty activity label" );
        _activities.insert( std::move( n ) );
    }
    for ( const auto& r : roles )
        if ( auto n = normalize_label( r ); !n.empty() )
            _roles.insert( std::move( n ) );

    for ( const auto& seq : sequences )
    {
        Sequence norm;
        norm.reserve( seq.size() );
        for ( const auto& a : seq )
        {
            auto n = normalize_label( a );
            if ( !_activities.contains( n ) )
                throw ModelError( "model '" + _id + "': sequence references undeclared activity '" + n + "'" );
            norm.push_back( std::move( n ) );
        }
        _sequences.insert( std::move( norm ) );
    }

    for ( const auto& [ a, r ] : role_map )
    {
        auto na = normalize_label( a );
        auto nr = normalize_label( r );
        if ( !_activities.contains( na ) )
            throw ModelError( "model '" + _id + "': role_map key '" + na + "' is not a declared activity" );
        if ( !_roles.contains( nr ) )
            throw ModelError( "model '" + _id + "': role_map value '" + nr + "' is not a declared role" );
        _role_map.emplace( std::move( na ), std::move( nr ) );
    }
}

namespace
{

constexpr std::array< std::string_view, 13 > template_names = {
    "AtLeastOne",         "AtMostOne",         "ExactlyOne",          "Absence",
    "RespondedExistence", "Response",          "AlternateResponse",   "Precedence",
    "AlternatePrecedence", "CoExistence",      "Succession",          "AlternateSuccession",
    "NotCoExistence",
};

constexpr std::array< std::string_view, 4 > kind_names = { "activity", "interobj", "intraobj", "role" };

} // namespace

std::string_view to_string( Template t ) { return template_names[ static_cast< std::size_t >( t ) ]; }

std::optional< Template > template_from_string( std::string_view name )
{
    for ( std::size_t i = 0; i < template_names.size(); ++i )
        if ( template_names[ i ] == name )
            return static_cast< Template >( i );
    return std::nullopt;
}

std::string_view to_string( ConstraintKind k ) { return kind_names[ static_cast< std::size_t >( k ) ]; }

std::optional< ConstraintKind > kind_from_string( std::string_view name )
{
    for ( std::size_t i = 0; i < kind_names.size(); ++i )
        if ( kind_names[ i ] == name )
            return static_cast< ConstraintKind >( i );
    return std::nullopt;
}

bool template_allowed( ConstraintKind kind, Template t )
{
    switch ( kind )
    {
    case ConstraintKind::Activity:
    case ConstraintKind::InterObject:
        return arity( t ) == 2;
    case ConstraintKind::IntraObject:
        return true;
    case ConstraintKind::Role:
        return t == Template::Absence;
    }
    return false;
}

std::string_view to_string( Verdict v )
{
    switch ( v )
    {
    case Verdict::Violated:
        return "violated";
    case Verdict::SatisfiedActivated:
        return "satisfied";
    case Verdict::SatisfiedVacuously:
        return "vacuous";
    }
    return "?";
}

std::string ConstraintKey::str() const
{
    std::string out{ to_string( kind ) };
    out += '|';
    out += to_string( templ );
    if ( kind == ConstraintKind::IntraObject )
    {
        out += '|';
        out += params.scope;
    }
    out += '|';
    out += params.first;
    if ( !params.second.empty() )
    {
        out += '|';
        out += params.second;
    }
    return out;
}

std::string ConstraintKey::display() const
{
    std::string out{ to_string( templ ) };
    out += '(';
    out += params.first;
    if ( kind != ConstraintKind::Role && !params.second.empty() )
    {
        out += ", ";
        out += params.second;
    }
    out += ')';
    if ( kind == ConstraintKind::IntraObject )
        out += "|" + params.scope;
    else if ( kind == ConstraintKind::Role )
        out += "|role != " + params.second;
    return out;
}

ConstraintKey ConstraintKey::parse( std::string_view text )
{
    std::vector< std::string > fields;
    std::size_t start = 0;
    while ( true )
    {
        const auto bar = text.find( '|', start );
        fields.emplace_back( text.substr( start, bar == std::string_view::npos ? bar : bar - start ) );
        if ( bar == std::string_view::npos )
            break;
        start = bar + 1;
    }
    const auto bad = [ & ] { return ModelError( "malformed constraint key '" + std::string( text ) + "'" ); };
    if ( fields.size() < 3 )
        throw bad();
    const auto kind = kind_from_string( fields[ 0 ] );
    const auto templ = template_from_string( fields[ 1 ] );
    if ( !kind || !templ )
        throw bad();

    ConstraintKey key{ *kind, *templ, {} };
    std::size_t i = 2;
    if ( *kind == ConstraintKind::IntraObject )
        key.params.scope = fields[ i++ ];
    const bool has_second = arity( *templ ) == 2 || *kind == ConstraintKind::Role;
    if ( fields.size() != i + ( has_second ? 2 : 1 ) )
        throw bad();
    key.params.first = fields[ i ];
    if ( has_second )
        key.params.second = fields[ i + 1 ];
    return key;
}

MinedConstraint::MinedConstraint( ConstraintKind kind, Template templ, ConstraintParams params, std::uint32_t support )
    : _key{ kind, templ, std::move( params ) }, _support{ support }
{
    if ( !template_allowed( kind, templ ) )
        throw ModelError( std::string( "template " ) + std::string( to_string( templ ) ) +
                          " is not admitted for " + std::string( to_string( kind ) ) + " constraints" );
    if ( support == 0 )
        throw ModelError( "constraint support must be positive" );

    const auto& p = _key.params;
    if ( p.first.empty() )
        throw ModelError( "constraint is missing its first parameter" );
    if ( kind == ConstraintKind::IntraObject )
    {
        if ( p.scope.empty() )
            throw ModelError( "intra-object constraint is missing its object" );
        if ( arity( templ ) == 1 && !p.second.empty() )
            throw ModelError( "unary intra-object constraint must not carry a second action" );
    }
    else if ( !p.scope.empty() )
        throw ModelError( "only intra-object constraints carry an object scope" );

    if ( arity( templ ) == 2 || kind == ConstraintKind::Role )
    {
        if ( p.second.empty() )
            throw ModelError( "constraint is missing its second parameter" );
        if ( kind != ConstraintKind::Role && p.first == p.second )
            throw ModelError( "binary constraint parameters must differ: '" + p.first + "'" );
    }
}

double FittedConstraint::average_similarity() const
{
    if ( sim.empty() )
        return 1.0;
    const double total = std::accumulate( sim.begin(), sim.end(), 0.0,
                                          []( double acc, const SimilarityEntry& e ) { return acc + e.score; } );
    return total / static_cast< double >( sim.size() );
}

FittedConstraint as_fitted( const MinedConstraint& c )
{
    FittedConstraint f;
    f.source = c.key();
    f.key = c.key();
    f.support = c.support();
    f.relevance = 1.0;
    return f;
}

} // namespace bpcheck
