#include "bpcheck/checker.hpp"

#include "bpcheck/declare.hpp"
#include "bpcheck/parallel.hpp"

#include <algorithm>
#include <array>
#include <cctype>
#include <sstream>

namespace bpcheck
{

Verdict evaluate_on_trace( const ConstraintKey& c, const Trace& trace, const LabelIndex& labels )
{
    const Binding binding{ c.params.first, c.params.second };
    switch ( c.kind )
    {
    case ConstraintKind::Activity:
        return evaluate( c.templ, binding, trace.activities() );
    case ConstraintKind::InterObject:
        return evaluate( c.templ, binding, labels.object_projection( trace.activities() ) );
    case ConstraintKind::IntraObject: {
        const auto actions = labels.action_projection( trace.activities(), c.params.scope );
        if ( actions.empty() )
            return Verdict::SatisfiedVacuously;
        return evaluate( c.templ, binding, actions );
    }
    case ConstraintKind::Role:
        return evaluate_role( c, trace );
    }
    return Verdict::SatisfiedVacuously;
}

std::optional< Violation > check_trace( const Trace& trace, const ConstraintKey& constraint, const LabelIndex& labels )
{
    if ( evaluate_on_trace( constraint, trace, labels ) == Verdict::Violated )
        return Violation{ trace.case_id, constraint };
    return std::nullopt;
}

std::set< Violation > check_log( const EventLog& log, const std::vector< ConstraintKey >& constraints,
                                 const LabelIndex& labels, unsigned jobs )
{
    std::vector< std::vector< Violation > > per_trace( log.traces.size() );
    parallel_for( log.traces.size(), jobs, [ & ]( std::size_t i ) {
        for ( const auto& c : constraints )
            if ( auto v = check_trace( log.traces[ i ], c, labels ) )
                per_trace[ i ].push_back( std::move( *v ) );
    } );
    std::set< Violation > out;
    for ( auto& vs : per_trace )
        out.insert( std::make_move_iterator( vs.begin() ), std::make_move_iterator( vs.end() ) );
    return out;
}

std::vector< ConstraintKey > keys_of( const std::vector< FittedConstraint >& constraints )
{
    std::vector< ConstraintKey > out;
    out.reserve( constraints.size() );
    for ( const auto& c : constraints )
        out.push_back( c.key );
    return out;
}

namespace
{

std::string article( std::string_view noun )
{
    const char c = noun.empty() ? 'x' : static_cast< char >( std::tolower( static_cast< unsigned char >( noun[ 0 ] ) ) );
    return std::string( "aeiou" ).find( c ) != std::string::npos ? "an" : "a";
}

std::string capitalized( std::string s )
{
    if ( !s.empty() )
        s[ 0 ] = static_cast< char >( std::toupper( static_cast< unsigned char >( s[ 0 ] ) ) );
    return s;
}

std::string quoted( const std::string& s ) { return "'" + s + "'"; }

std::string explain_intraobject( const ConstraintKey& c, const Lexicon& lex )
{
    const auto& o = c.params.scope;
    const std::string an_o = article( o ) + " " + o;
    const auto p1 = past_participle( c.params.first, lex );
    const auto p2 = c.params.second.empty() ? std::string{} : past_participle( c.params.second, lex );
    switch ( c.templ )
    {
    case Template::AtLeastOne:
        return "Each " + o + " must be " + p1;
    case Template::AtMostOne:
        return capitalized( an_o ) + " must not be " + p1 + " more than once";
    case Template::ExactlyOne:
        return "Each " + o + " must be " + p1 + " exactly once";
    case Template::Absence:
        return capitalized( an_o ) + " must never be " + p1;
    case Template::RespondedExistence:
        return "If " + an_o + " is " + p1 + ", it must also be " + p2;
    case Template::Response:
        return "After " + an_o + " is " + p1 + ", it should be " + p2 + ".";
    case Template::AlternateResponse:
        return "Each time " + an_o + " is " + p1 + ", it should be " + p2 + " before it is " + p1 + " again";
    case Template::Precedence:
        return capitalized( an_o ) + " must be " + p1 + " before it is " + p2;
    case Template::AlternatePrecedence:
        return "Each time " + an_o + " is " + p2 + ", it must have been " + p1 + " since it was last " + p2;
    case Template::CoExistence:
        return "If " + an_o + " is " + p1 + " or " + p2 + ", it must be both";
    case Template::Succession:
        return capitalized( an_o ) + " must be " + p1 + " before it is " + p2 + ", and once " + p1 + " it must be " + p2;
    case Template::AlternateSuccession:
        return "Each time " + an_o + " is " + p1 + ", it must be " + p2 + " before it is " + p1 +
               " again, and every time it is " + p2 + " it must have been " + p1 + " first";
    case Template::NotCoExistence:
        return capitalized( an_o ) + " must not be both " + p1 + " and " + p2;
    }
    return c.display();
}

std::string explain_interobject( const ConstraintKey& c )
{
    const auto& o1 = c.params.first;
    const auto& o2 = c.params.second;
    const std::string a1 = article( o1 ) + " " + o1;
    const std::string a2 = article( o2 ) + " " + o2;
    switch ( c.templ )
    {
    case Template::RespondedExistence:
        return "If there is " + a1 + ", there should be " + a2;
    case Template::Response:
        return "After " + a1 + " appears, " + a2 + " should appear";
    case Template::AlternateResponse:
        return "After each " + o1 + ", " + a2 + " should appear before the next " + o1;
    case Template::Precedence:
        return capitalized( a1 ) + " should appear before " + a2;
    case Template::AlternatePrecedence:
        return "Each " + o2 + " should be preceded by " + a1 + " since the previous " + o2;
    case Template::CoExistence:
        return capitalized( a1 ) + " and " + a2 + " should appear together";
    case Template::Succession:
        return capitalized( a1 ) + " should appear before " + a2 + ", and " + a2 + " should follow it";
    case Template::AlternateSuccession:
        return capitalized( a1 ) + " and " + a2 + " should alternate, starting with " + a1;
    case Template::NotCoExistence:
        return capitalized( a1 ) + " and " + a2 + " should not both appear";
    default:
        return c.display();
    }
}

std::string explain_activity( const ConstraintKey& c )
{
    const auto a1 = quoted( c.params.first );
    const auto a2 = quoted( c.params.second );
    switch ( c.templ )
    {
    case Template::RespondedExistence:
        return "If " + a1 + " occurs, " + a2 + " should also occur";
    case Template::Response:
        return "After " + a1 + ", " + a2 + " should eventually occur";
    case Template::AlternateResponse:
        return "After each " + a1 + ", " + a2 + " should occur before the next " + a1;
    case Template::Precedence:
        return a1 + " should occur before " + a2;
    case Template::AlternatePrecedence:
        return "Each " + a2 + " should be preceded by " + a1 + " since the previous " + a2;
    case Template::CoExistence:
        return a1 + " and " + a2 + " should occur together";
    case Template::Succession:
        return a1 + " should occur before " + a2 + ", and " + a2 + " should follow " + a1;
    case Template::AlternateSuccession:
        return a1 + " and " + a2 + " should alternate, starting with " + a1;
    case Template::NotCoExistence:
        return a1 + " and " + a2 + " should not both occur";
    default:
        return c.display();
    }
}

} // namespace

std::string explain( const ConstraintKey& c, const Lexicon& lex )
{
    switch ( c.kind )
    {
    case ConstraintKind::Activity:
        return explain_activity( c );
    case ConstraintKind::InterObject:
        return explain_interobject( c );
    case ConstraintKind::IntraObject:
        return explain_intraobject( c, lex );
    case ConstraintKind::Role:
        return capitalized( c.params.first ) + " should be performed by " + c.params.second;
    }
    return c.display();
}

std::size_t ViolationReport::total() const
{
    std::size_t n = 0;
    for ( const auto& [ kind, count ] : totals )
        n += count;
    return n;
}

ViolationReport aggregate( const std::set< Violation >& violations, const EventLog& log, const Lexicon& lex )
{
    std::set< std::string > cases;
    for ( const auto& t : log.traces )
        cases.insert( t.case_id );

    ViolationReport report;
    report.traces = log.traces.size();
    for ( ConstraintKind k : all_kinds )
        report.totals[ std::string( to_string( k ) ) ] = 0;

    std::map< ConstraintKey, std::vector< std::string > > by_constraint;
    for ( const auto& v : violations )
    {
        if ( !cases.contains( v.case_id ) )
            throw ModelError( "violation references unknown case '" + v.case_id + "'" );
        by_constraint[ v.constraint ].push_back( v.case_id );
        ++report.totals[ std::string( to_string( v.constraint.kind ) ) ];
    }
    for ( auto& [ key, ids ] : by_constraint )
    {
        std::sort( ids.begin(), ids.end() );
        const auto n = ids.size();
        report.groups.push_back( { key, explain( key, lex ), std::move( ids ), n } );
    }
    std::stable_sort( report.groups.begin(), report.groups.end(),
                      []( const ViolationGroup& a, const ViolationGroup& b ) { return a.count > b.count; } );
    return report;
}

std::string render_text( const ViolationReport& report )
{
    std::vector< std::array< std::string, 4 > > rows;
    rows.push_back( { "Constraint", "Explanation", "Count", "Cases" } );
    for ( const auto& g : report.groups )
    {
        std::string ids;
        for ( const auto& id : g.case_ids )
            ids += ( ids.empty() ? "" : ", " ) + id;
        rows.push_back( { g.constraint.display(), g.explanation, std::to_string( g.count ), ids } );
    }
    std::array< std::size_t, 4 > width{};
    for ( const auto& r : rows )
        for ( std::size_t i = 0; i < 3; ++i )
            width[ i ] = std::max( width[ i ], r[ i ].size() );

    std::ostringstream out;
    for ( std::size_t r = 0; r < rows.size(); ++r )
    {
        for ( std::size_t i = 0; i < 4; ++i )
        {
            out << rows[ r ][ i ];
            if ( i < 3 )
                out << std::string( width[ i ] - rows[ r ][ i ].size() + 2, ' ' );
        }
        out << '\n';
        if ( r == 0 )
        {
            for ( std::size_t i = 0; i < 3; ++i )
                out << std::string( width[ i ], '-' ) << "  ";
            out << "-----\n";
        }
    }
    out << '\n' << "Violations: " << report.total() << " in " << report.traces << " traces";
    for ( const auto& [ kind, count ] : report.totals )
        out << "; " << kind << ' ' << count;
    out << '\n';
    return out.str();
}

} // namespace bpcheck
