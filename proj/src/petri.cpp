#include "bpcheck/petri.hpp"

#include <functional>

namespace bpcheck
{

void WorkflowNet::validate() const
{
    std::set< std::string > place_ids, transition_ids;
    for ( const auto& p : places )
        if ( !place_ids.insert( p ).second )
            throw ModelError( "net: duplicate place '" + p + "'" );
    for ( const auto& t : transitions )
        if ( place_ids.contains( t.id ) || !transition_ids.insert( t.id ).second )
            throw ModelError( "net: duplicate node '" + t.id + "'" );
    for ( const auto& a : arcs )
    {
        const bool pt = place_ids.contains( a.from ) && transition_ids.contains( a.to );
        const bool tp = transition_ids.contains( a.from ) && place_ids.contains( a.to );
        if ( !pt && !tp )
            throw ModelError( "net: arc " + a.from + " -> " + a.to + " must join a place and a transition" );
    }
    for ( const auto* marking : { &initial, &final } )
        for ( const auto& [ p, n ] : *marking )
            if ( !place_ids.contains( p ) )
                throw ModelError( "net: marking references unknown place '" + p + "'" );
    if ( initial.empty() || final.empty() )
        throw ModelError( "net: initial and final markings must be non-empty" );
}

std::set< Sequence > playout( const WorkflowNet& net, const PlayoutOptions& opts )
{
    net.validate();
    constexpr std::size_t step_cap = 5'000'000;

    std::map< std::string, std::size_t > place_index;
    for ( std::size_t i = 0; i < net.places.size(); ++i )
        place_index[ net.places[ i ] ] = i;
    std::map< std::string, std::size_t > transition_index;
    for ( std::size_t i = 0; i < net.transitions.size(); ++i )
        transition_index[ net.transitions[ i ].id ] = i;

    using Marking = std::vector< unsigned >;
    std::vector< Marking > pre( net.transitions.size(), Marking( net.places.size(), 0 ) );
    std::vector< Marking > post = pre;
    for ( const auto& a : net.arcs )
    {
        if ( const auto p = place_index.find( a.from ); p != place_index.end() )
            ++pre[ transition_index.at( a.to ) ][ p->second ];
        else
            ++post[ transition_index.at( a.from ) ][ place_index.at( a.to ) ];
    }

    const auto to_marking = [ & ]( const std::map< std::string, unsigned >& m ) {
        Marking out( net.places.size(), 0 );
        for ( const auto& [ p, n ] : m )
            out[ place_index.at( p ) ] = n;
        return out;
    };
    const Marking initial = to_marking( net.initial );
    const Marking final = to_marking( net.final );

    std::set< Sequence > variants;
    std::map< Marking, unsigned > visits;
    Sequence trace;
    std::size_t steps = 0;

    std::function< void( const Marking& ) > explore = [ & ]( const Marking& m ) {
        if ( ++steps > step_cap )
            throw PlayoutError( "net playout exceeded " + std::to_string( step_cap ) + " steps" );
        if ( m == final )
        {
            variants.insert( trace );
            if ( variants.size() > opts.variant_cap )
                throw PlayoutError( "net has more than " + std::to_string( opts.variant_cap ) + " variants" );
            return;
        }
        auto& count = visits[ m ];
        if ( count > opts.loop_bound )
            return;
        ++count;
        for ( std::size_t t = 0; t < net.transitions.size(); ++t )
        {
            bool enabled = true;
            for ( std::size_t p = 0; p < m.size() && enabled; ++p )
                enabled = m[ p ] >= pre[ t ][ p ];
            if ( !enabled )
                continue;
            Marking next = m;
            for ( std::size_t p = 0; p < m.size(); ++p )
                next[ p ] = next[ p ] - pre[ t ][ p ] + post[ t ][ p ];
            const auto& label = net.transitions[ t ].label;
            if ( label )
                trace.push_back( normalize_label( *label ) );
            explore( next );
            if ( label )
                trace.pop_back();
        }
        --visits[ m ];
    };
    explore( initial );
    return variants;
}

} // namespace bpcheck
