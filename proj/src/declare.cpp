#include "bpcheck/declare.hpp"

#include <algorithm>
#include <optional>
#include <stdexcept>

namespace bpcheck
{

namespace
{

struct Scan
{
    std::size_t count_a = 0;
    std::size_t count_b = 0;
    std::optional< std::size_t > first_a, first_b, last_a, last_b;
};

Scan scan( Binding p, std::span< const Label > seq )
{
    Scan s;
    for ( std::size_t i = 0; i < seq.size(); ++i )
    {
        if ( seq[ i ] == p.first )
        {
            ++s.count_a;
            if ( !s.first_a )
                s.first_a = i;
            s.last_a = i;
        }
        if ( seq[ i ] == p.second )
        {
            ++s.count_b;
            if ( !s.first_b )
                s.first_b = i;
            s.last_b = i;
        }
    }
    return s;
}

// G(a -> F b); F includes the current position.
bool response_holds( const Scan& s )
{
    return !s.last_a || ( s.last_b && *s.last_b >= *s.last_a );
}

// G(b -> O a); O includes the current position.
bool precedence_holds( const Scan& s )
{
    return !s.first_b || ( s.first_a && *s.first_a <= *s.first_b );
}

// G(a -> X(!a U b)): after each a, the next a-or-b must be a b.
bool alternate_response_holds( Binding p, std::span< const Label > seq )
{
    for ( std::size_t i = 0; i < seq.size(); ++i )
    {
        if ( seq[ i ] != p.first )
            continue;
        bool closed = false;
        for ( std::size_t j = i + 1; j < seq.size(); ++j )
        {
            if ( seq[ j ] == p.second )
            {
                closed = true;
                break;
            }
            if ( seq[ j ] == p.first )
                break;
        }
        if ( !closed )
            return false;
    }
    return true;
}

// Before each b, the closest earlier a-or-b must be an a.
bool alternate_precedence_holds( Binding p, std::span< const Label > seq )
{
    for ( std::size_t i = 0; i < seq.size(); ++i )
    {
        if ( seq[ i ] != p.second )
            continue;
        bool opened = false;
        for ( std::size_t j = i; j-- > 0; )
        {
            if ( seq[ j ] == p.first )
            {
                opened = true;
                break;
            }
            if ( seq[ j ] == p.second )
                break;
        }
        if ( !opened )
            return false;
    }
    return true;
}

} // namespace

Verdict evaluate( Template t, Binding p, std::span< const Label > seq )
{
    const Scan s = scan( p, seq );
    bool holds = true;
    bool activated = false;

    switch ( t )
    {
    case Template::AtLeastOne:
        holds = s.count_a >= 1;
        break;
    case Template::AtMostOne:
        holds = s.count_a <= 1;
        break;
    case Template::ExactlyOne:
        holds = s.count_a == 1;
        break;
    case Template::Absence:
        holds = s.count_a == 0;
        break;
    case Template::RespondedExistence:
        holds = s.count_a == 0 || s.count_b > 0;
        break;
    case Template::Response:
        holds = response_holds( s );
        break;
    case Template::AlternateResponse:
        holds = alternate_response_holds( p, seq );
        break;
    case Template::Precedence:
        holds = precedence_holds( s );
        break;
    case Template::AlternatePrecedence:
        holds = alternate_precedence_holds( p, seq );
        break;
    case Template::CoExistence:
        holds = ( s.count_a > 0 ) == ( s.count_b > 0 );
        break;
    case Template::Succession:
        holds = response_holds( s ) && precedence_holds( s );
        break;
    case Template::AlternateSuccession:
        holds = alternate_response_holds( p, seq ) && alternate_precedence_holds( p, seq );
        break;
    case Template::NotCoExistence:
        holds = s.count_a == 0 || s.count_b == 0;
        break;
    }

    if ( !holds )
        return Verdict::Violated;

    switch ( t )
    {
    case Template::AtLeastOne:
    case Template::AtMostOne:
    case Template::ExactlyOne:
    case Template::Absence:
        activated = !seq.empty();
        break;
    case Template::RespondedExistence:
    case Template::Response:
    case Template::AlternateResponse:
        activated = s.count_a > 0;
        break;
    case Template::Precedence:
    case Template::AlternatePrecedence:
        activated = s.count_b > 0;
        break;
    case Template::CoExistence:
    case Template::Succession:
    case Template::AlternateSuccession:
    case Template::NotCoExistence:
        activated = s.count_a > 0 || s.count_b > 0;
        break;
    }
    return activated ? Verdict::SatisfiedActivated : Verdict::SatisfiedVacuously;
}

Verdict evaluate( Template t, std::span< const Label > params, std::span< const Label > sequence )
{
    if ( params.size() != static_cast< std::size_t >( arity( t ) ) )
        throw std::invalid_argument( std::string( to_string( t ) ) + " expects " + std::to_string( arity( t ) ) +
                                     " parameter(s), got " + std::to_string( params.size() ) );
    const Binding b{ params[ 0 ], params.size() > 1 ? std::string_view( params[ 1 ] ) : std::string_view{} };
    return evaluate( t, b, sequence );
}

Verdict evaluate_role( const ConstraintKey& constraint, const Trace& trace )
{
    if ( constraint.kind != ConstraintKind::Role )
        throw std::invalid_argument( "evaluate_role requires a role constraint" );
    const auto& activity = constraint.params.first;
    const auto& role = constraint.params.second;

    bool occurred = false;
    for ( const auto& e : trace.events )
    {
        if ( e.activity != activity )
            continue;
        occurred = true;
        if ( !e.role || *e.role != role )
            return Verdict::Violated;
    }
    return occurred ? Verdict::SatisfiedActivated : Verdict::SatisfiedVacuously;
}

namespace
{

constexpr SubsumptionEdge lattice[] = {
    { Template::AlternateSuccession, Template::Succession },
    { Template::AlternateSuccession, Template::AlternateResponse },
    { Template::AlternateSuccession, Template::AlternatePrecedence },
    { Template::Succession, Template::Response },
    { Template::Succession, Template::Precedence },
    { Template::Succession, Template::CoExistence },
    { Template::AlternateResponse, Template::Response },
    { Template::AlternatePrecedence, Template::Precedence },
    { Template::Response, Template::RespondedExistence },
    { Template::CoExistence, Template::RespondedExistence },
    { Template::CoExistence, Template::RespondedExistence, true },
    { Template::ExactlyOne, Template::AtLeastOne },
    { Template::ExactlyOne, Template::AtMostOne },
    { Template::Absence, Template::AtMostOne },
};

std::vector< SubsumptionEdge > compute_closure()
{
    std::vector< SubsumptionEdge > out( std::begin( lattice ), std::end( lattice ) );
    auto contains = [ & ]( const SubsumptionEdge& e ) {
        return std::ranges::any_of( out, [ & ]( const SubsumptionEdge& o ) {
            return o.stronger == e.stronger && o.weaker == e.weaker && o.swapped == e.swapped;
        } );
    };
    for ( bool grew = true; grew; )
    {
        grew = false;
        const auto snapshot = out;
        for ( const auto& x : snapshot )
            for ( const auto& y : snapshot )
            {
                if ( x.weaker != y.stronger )
                    continue;
                const SubsumptionEdge e{ x.stronger, y.weaker, x.swapped != y.swapped };
                if ( !contains( e ) )
                {
                    out.push_back( e );
                    grew = true;
                }
            }
    }
    return out;
}

} // namespace

std::span< const SubsumptionEdge > subsumption_edges() { return lattice; }

const std::vector< SubsumptionEdge >& subsumption_closure()
{
    static const auto closure = compute_closure();
    return closure;
}

bool subsumes( Template stronger, Binding s, Template weaker, Binding w )
{
    if ( arity( stronger ) != arity( weaker ) )
        return false;
    const bool unary = arity( stronger ) == 1;
    for ( const auto& e : subsumption_closure() )
    {
        if ( e.stronger != stronger || e.weaker != weaker )
            continue;
        if ( unary )
        {
            if ( s.first == w.first )
                return true;
        }
        else if ( !e.swapped ? ( s.first == w.first && s.second == w.second )
                             : ( s.first == w.second && s.second == w.first ) )
            return true;
    }
    return false;
}

} // namespace bpcheck
