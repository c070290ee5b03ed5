#include "bpcheck/automaton.hpp"

#include <algorithm>
#include <boost/functional/hash.hpp>
#include <deque>
#include <limits>
#include <map>
#include <numeric>
#include <queue>
#include <optional>
#include <set>
#include <stdexcept>
#include <unordered_map>

namespace bpcheck
{

namespace
{

using State = std::uint8_t;

constexpr State seen_a = 1;
constexpr State seen_b = 2;
constexpr State dead = 4;

State step_count( State s, bool is_a ) { return is_a ? static_cast< State >( std::min( s + 1, 2 ) ) : s; }

State step_response( State pending, bool is_a, bool is_b )
{
    if ( is_a )
        pending = 1;
    if ( is_b )
        pending = 0;
    return pending;
}

State step_alt_response( State s, bool is_a, bool is_b )
{
    if ( s & dead )
        return s;
    if ( s & seen_a )
    {
        if ( is_b )
            s = 0;
        else if ( is_a )
            return dead;
    }
    if ( is_a )
        s = seen_a;
    return s;
}

State step_precedence( State s, bool is_a, bool is_b )
{
    if ( s & dead )
        return s;
    if ( is_a )
        s |= seen_a;
    if ( is_b && !( s & seen_a ) )
        return dead;
    return s;
}

// seen_a marks "armed": an a occurred since the last b.
State step_alt_precedence( State s, bool is_a, bool is_b )
{
    if ( s & dead )
        return s;
    if ( is_b )
    {
        if ( !( s & seen_a ) )
            return dead;
        s = 0;
    }
    if ( is_a )
        s = seen_a;
    return s;
}

State step_bits( State s, bool is_a, bool is_b )
{
    if ( is_a )
        s |= seen_a;
    if ( is_b )
        s |= seen_b;
    return s;
}

State pack( State lo, State hi ) { return static_cast< State >( lo | ( hi << 4 ) ); }
State lo( State s ) { return s & 0x0f; }
State hi( State s ) { return s >> 4; }

State step( Template t, State s, bool is_a, bool is_b )
{
    switch ( t )
    {
    case Template::AtLeastOne:
    case Template::AtMostOne:
    case Template::ExactlyOne:
    case Template::Absence:
        return step_count( s, is_a );
    case Template::Response:
        return step_response( s, is_a, is_b );
    case Template::AlternateResponse:
        return step_alt_response( s, is_a, is_b );
    case Template::Precedence:
        return step_precedence( s, is_a, is_b );
    case Template::AlternatePrecedence:
        return step_alt_precedence( s, is_a, is_b );
    case Template::Succession:
        return pack( step_response( lo( s ), is_a, is_b ), step_precedence( hi( s ), is_a, is_b ) );
    case Template::AlternateSuccession:
        return pack( step_alt_response( lo( s ), is_a, is_b ), step_alt_precedence( hi( s ), is_a, is_b ) );
    case Template::RespondedExistence:
    case Template::CoExistence:
    case Template::NotCoExistence:
        return step_bits( s, is_a, is_b );
    }
    return s;
}

bool accepting( Template t, State s )
{
    switch ( t )
    {
    case Template::AtLeastOne:
        return s >= 1;
    case Template::AtMostOne:
        return s <= 1;
    case Template::ExactlyOne:
        return s == 1;
    case Template::Absence:
        return s == 0;
    case Template::Response:
        return s == 0;
    case Template::AlternateResponse:
        return s == 0;
    case Template::Precedence:
    case Template::AlternatePrecedence:
        return !( s & dead );
    case Template::Succession:
        return lo( s ) == 0 && !( hi( s ) & dead );
    case Template::AlternateSuccession:
        return lo( s ) == 0 && !( hi( s ) & dead );
    case Template::RespondedExistence:
        return !( s & seen_a ) || ( s & seen_b );
    case Template::CoExistence:
        return static_cast< bool >( s & seen_a ) == static_cast< bool >( s & seen_b );
    case Template::NotCoExistence:
        return ( s & ( seen_a | seen_b ) ) != ( seen_a | seen_b );
    }
    return false;
}

bool activates( Template t, bool is_a, bool is_b )
{
    switch ( t )
    {
    case Template::AtLeastOne:
    case Template::AtMostOne:
    case Template::ExactlyOne:
    case Template::Absence:
        return true;
    case Template::RespondedExistence:
    case Template::Response:
    case Template::AlternateResponse:
        return is_a;
    case Template::Precedence:
    case Template::AlternatePrecedence:
        return is_b;
    default:
        return is_a || is_b;
    }
}

struct Classified
{
    bool is_a = false;
    bool is_b = false;
};

std::vector< Classified > classify( const TemplateInstance& c, const std::vector< Label >& alphabet )
{
    std::vector< Classified > out;
    out.reserve( alphabet.size() );
    const bool unary = arity( c.templ ) == 1;
    for ( const auto& sym : alphabet )
        out.push_back( { sym == c.first, !unary && sym == c.second } );
    return out;
}

} // namespace

ConstraintAutomaton::ConstraintAutomaton( std::vector< Label > alphabet, std::vector< std::vector< std::uint16_t > > delta,
                                          std::vector< bool > accepting, std::vector< std::vector< bool > > activating )
    : _alphabet{ std::move( alphabet ) }, _delta{ std::move( delta ) }, _accepting{ std::move( accepting ) },
      _activating{ std::move( activating ) }, _live( _delta.size(), false )
{
    for ( std::size_t q = 0; q < _delta.size(); ++q )
        _live[ q ] = _accepting[ q ];
    for ( bool changed = true; changed; )
    {
        changed = false;
        for ( std::size_t q = 0; q < _delta.size(); ++q )
            if ( !_live[ q ] && std::ranges::any_of( _delta[ q ], [ & ]( std::uint16_t n ) { return _live[ n ]; } ) )
                _live[ q ] = changed = true;
    }
}

std::size_t ConstraintAutomaton::symbol_index( std::string_view label ) const
{
    const auto it = std::find( _alphabet.begin(), _alphabet.end(), label );
    return it == _alphabet.end() ? _alphabet.size() - 1 : static_cast< std::size_t >( it - _alphabet.begin() );
}

ConstraintAutomaton::Run ConstraintAutomaton::run( std::span< const Label > word ) const
{
    Run r;
    std::uint16_t q = initial();
    for ( const auto& w : word )
    {
        const auto x = symbol_index( w );
        r.activated |= activating( q, x );
        q = step( q, x );
    }
    r.accepted = accepting( q );
    return r;
}

ConstraintAutomaton to_automaton( const TemplateInstance& c, std::vector< Label > alphabet )
{
    if ( alphabet.empty() || alphabet.back() != other_symbol )
        alphabet.emplace_back( other_symbol );
    const auto has = [ & ]( const Label& l ) { return std::find( alphabet.begin(), alphabet.end(), l ) != alphabet.end(); };
    if ( !has( c.first ) || ( arity( c.templ ) == 2 && !has( c.second ) ) )
        throw std::invalid_argument( "automaton alphabet must contain the constraint's parameters" );

    const auto classes = classify( c, alphabet );
    std::map< State, std::uint16_t > ids{ { State{ 0 }, 0 } };
    std::vector< State > states{ 0 };
    std::vector< std::vector< std::uint16_t > > delta;
    std::vector< std::vector< bool > > activating;

    for ( std::size_t i = 0; i < states.size(); ++i )
    {
        const State s = states[ i ];
        std::vector< std::uint16_t > row( alphabet.size() );
        std::vector< bool > act( alphabet.size() );
        for ( std::size_t x = 0; x < alphabet.size(); ++x )
        {
            const State n = step( c.templ, s, classes[ x ].is_a, classes[ x ].is_b );
            auto [ it, fresh ] = ids.try_emplace( n, static_cast< std::uint16_t >( states.size() ) );
            if ( fresh )
                states.push_back( n );
            row[ x ] = it->second;
            act[ x ] = activates( c.templ, classes[ x ].is_a, classes[ x ].is_b );
        }
        delta.push_back( std::move( row ) );
        activating.push_back( std::move( act ) );
    }

    std::vector< bool > acc;
    acc.reserve( states.size() );
    for ( State s : states )
        acc.push_back( accepting( c.templ, s ) );
    return ConstraintAutomaton( std::move( alphabet ), std::move( delta ), std::move( acc ), std::move( activating ) );
}

std::vector< Label > consistency_alphabet( std::span< const TemplateInstance > group )
{
    std::set< Label > symbols;
    for ( const auto& c : group )
    {
        symbols.insert( c.first );
        if ( arity( c.templ ) == 2 )
            symbols.insert( c.second );
    }
    std::vector< Label > out( symbols.begin(), symbols.end() );
    out.emplace_back( other_symbol );
    return out;
}

namespace
{

// Members whose parameters are connected through shared symbols. Constraints only observe their
// own parameters, so disconnected components can be satisfied independently and interleaved.
std::vector< std::vector< std::size_t > > components( std::span< const TemplateInstance > group )
{
    std::vector< std::size_t > parent( group.size() );
    std::iota( parent.begin(), parent.end(), 0 );
    auto find = [ & ]( std::size_t x ) {
        while ( parent[ x ] != x )
            x = parent[ x ] = parent[ parent[ x ] ];
        return x;
    };
    std::map< Label, std::size_t > owner;
    for ( std::size_t i = 0; i < group.size(); ++i )
    {
        for ( const Label* sym : { &group[ i ].first, &group[ i ].second } )
        {
            if ( sym->empty() )
                continue;
            auto [ it, fresh ] = owner.try_emplace( *sym, i );
            if ( !fresh )
                parent[ find( i ) ] = find( it->second );
        }
    }
    std::map< std::size_t, std::vector< std::size_t > > by_root;
    for ( std::size_t i = 0; i < group.size(); ++i )
        by_root[ find( i ) ].push_back( i );
    std::vector< std::vector< std::size_t > > out;
    for ( auto& [ _, members ] : by_root )
        out.push_back( std::move( members ) );
    return out;
}

std::vector< TemplateInstance > subset( std::span< const TemplateInstance > group, std::span< const std::size_t > idx )
{
    std::vector< TemplateInstance > out;
    out.reserve( idx.size() );
    for ( auto i : idx )
        out.push_back( group[ i ] );
    return out;
}

// Partial DFA over the consistency alphabet; state 0 is initial, `none` marks a missing transition.
struct Dfa
{
    static constexpr std::uint32_t none = std::numeric_limits< std::uint32_t >::max();
    std::size_t symbols = 0;
    std::vector< std::uint32_t > delta; // [state * symbols + x]
    std::vector< bool > accepting;

    [[nodiscard]] std::size_t size() const { return accepting.size(); }
    [[nodiscard]] std::uint32_t next( std::size_t s, std::size_t x ) const { return delta[ s * symbols + x ]; }
};

Dfa universal( std::size_t symbols )
{
    return { symbols, std::vector< std::uint32_t >( symbols, 0 ), { true } };
}

// Reachable part of the product, skipping states where `b` can no longer accept.
Dfa product( const Dfa& a, const ConstraintAutomaton& b, const ConsistencyOptions& opts )
{
    Dfa out{ a.symbols, {}, {} };
    std::unordered_map< std::uint64_t, std::uint32_t > ids{ { 0, 0 } };
    std::vector< std::pair< std::uint32_t, std::uint16_t > > states{ { 0, 0 } };
    for ( std::size_t i = 0; i < states.size(); ++i )
    {
        const auto [ qa, qb ] = states[ i ];
        out.accepting.push_back( a.accepting[ qa ] && b.accepting( qb ) );
        for ( std::size_t x = 0; x < a.symbols; ++x )
        {
            const auto na = a.next( qa, x );
            const auto nb = b.step( qb, x );
            if ( na == Dfa::none || !b.live( nb ) )
            {
                out.delta.push_back( Dfa::none );
                continue;
            }
            const auto key = ( std::uint64_t{ na } << 16 ) | nb;
            auto [ it, fresh ] = ids.try_emplace( key, static_cast< std::uint32_t >( states.size() ) );
            if ( fresh )
            {
                if ( states.size() >= opts.max_product_states )
                    throw ConsistencyLimitError( "consistency search exceeded " +
                                                 std::to_string( opts.max_product_states ) + " product states" );
                states.emplace_back( na, nb );
            }
            out.delta.push_back( it->second );
        }
    }
    return out;
}

// Drops states that cannot reach acceptance and renumbers the rest from the initial state, merging
// equivalent states when `minimize` is set (Moore refinement). An empty language yields no states.
Dfa trim( const Dfa& d, bool minimize )
{
    const std::size_t n = d.size();
    std::vector< std::vector< std::uint32_t > > pred( n );
    for ( std::size_t s = 0; s < n; ++s )
        for ( std::size_t x = 0; x < d.symbols; ++x )
            if ( const auto t = d.next( s, x ); t != Dfa::none )
                pred[ t ].push_back( static_cast< std::uint32_t >( s ) );
    std::vector< bool > useful( n, false );
    std::vector< std::uint32_t > stack;
    for ( std::size_t s = 0; s < n; ++s )
        if ( d.accepting[ s ] )
        {
            useful[ s ] = true;
            stack.push_back( static_cast< std::uint32_t >( s ) );
        }
    while ( !stack.empty() )
    {
        const auto s = stack.back();
        stack.pop_back();
        for ( auto p : pred[ s ] )
            if ( !useful[ p ] )
            {
                useful[ p ] = true;
                stack.push_back( p );
            }
    }
    if ( n == 0 || !useful[ 0 ] )
        return { d.symbols, {}, {} };

    // Class per useful state; useless states and missing transitions share class `none`.
    std::vector< std::uint32_t > cls( n, Dfa::none );
    std::size_t classes = 0;
    for ( std::size_t s = 0; s < n; ++s )
        if ( useful[ s ] )
            cls[ s ] = minimize ? ( d.accepting[ s ] ? 1 : 0 ) : static_cast< std::uint32_t >( classes++ );

    while ( minimize )
    {
        std::unordered_map< std::vector< std::uint32_t >, std::uint32_t, boost::hash< std::vector< std::uint32_t > > >
            signature;
        std::vector< std::uint32_t > refined( n, Dfa::none );
        std::vector< std::uint32_t > sig( d.symbols + 1 );
        for ( std::size_t s = 0; s < n; ++s )
        {
            if ( !useful[ s ] )
                continue;
            sig[ 0 ] = cls[ s ];
            for ( std::size_t x = 0; x < d.symbols; ++x )
            {
                const auto t = d.next( s, x );
                sig[ x + 1 ] = t == Dfa::none ? Dfa::none : cls[ t ];
            }
            refined[ s ] = signature.try_emplace( sig, static_cast< std::uint32_t >( signature.size() ) ).first->second;
        }
        cls = std::move( refined );
        if ( signature.size() == classes )
            break;
        classes = signature.size();
    }

    std::vector< std::uint32_t > id( classes, Dfa::none );
    std::vector< std::uint32_t > rep;
    id[ cls[ 0 ] ] = 0;
    rep.push_back( 0 );
    Dfa out{ d.symbols, {}, {} };
    for ( std::size_t i = 0; i < rep.size(); ++i )
    {
        const auto s = rep[ i ];
        out.accepting.push_back( d.accepting[ s ] );
        for ( std::size_t x = 0; x < d.symbols; ++x )
        {
            const auto t = d.next( s, x );
            if ( t == Dfa::none || !useful[ t ] )
            {
                out.delta.push_back( Dfa::none );
                continue;
            }
            auto& slot = id[ cls[ t ] ];
            if ( slot == Dfa::none )
            {
                slot = static_cast< std::uint32_t >( rep.size() );
                rep.push_back( t );
            }
            out.delta.push_back( slot );
        }
    }
    return out;
}

std::vector< bool > used_symbols( const Dfa& d )
{
    std::vector< bool > used( d.symbols, false );
    for ( std::size_t s = 0; s < d.size(); ++s )
        for ( std::size_t x = 0; x < d.symbols; ++x )
            if ( d.next( s, x ) != Dfa::none )
                used[ x ] = true;
    return used;
}

// Direct product of all members, never expanding states in which some member can no longer
// accept. Fast when the members constrain each other tightly; nullopt once `budget` states are
// exceeded.
std::optional< std::vector< bool > > activatable_direct( const std::vector< ConstraintAutomaton >& automata,
                                                         std::size_t symbols, std::size_t budget )
{
    const std::size_t n = automata.size();
    std::unordered_map< std::string, std::uint32_t > ids;
    std::string states; // n bytes per state
    std::vector< std::uint32_t > succ; // [state * symbols + x]
    const auto state_of = [ & ]( std::size_t s, std::size_t k ) {
        return static_cast< std::uint8_t >( states[ s * n + k ] );
    };

    ids.emplace( std::string( n, '\0' ), 0 );
    states.assign( n, '\0' );
    std::size_t count = 1;
    std::string next( n, '\0' );
    for ( std::size_t i = 0; i < count; ++i )
        for ( std::size_t x = 0; x < symbols; ++x )
        {
            bool alive = true;
            for ( std::size_t k = 0; k < n && alive; ++k )
            {
                const auto q = automata[ k ].step( state_of( i, k ), x );
                alive = automata[ k ].live( q );
                next[ k ] = static_cast< char >( q );
            }
            if ( !alive )
            {
                succ.push_back( Dfa::none );
                continue;
            }
            auto [ it, fresh ] = ids.try_emplace( next, static_cast< std::uint32_t >( count ) );
            if ( fresh )
            {
                if ( count >= budget )
                    return std::nullopt;
                states += next;
                ++count;
            }
            succ.push_back( it->second );
        }

    Dfa d{ symbols, std::move( succ ), {} };
    for ( std::size_t s = 0; s < count; ++s )
    {
        bool all = true;
        for ( std::size_t k = 0; k < n && all; ++k )
            all = automata[ k ].accepting( state_of( s, k ) );
        d.accepting.push_back( all );
    }
    const auto joint = trim( d, false );
    const auto used = joint.size() == 0 ? std::vector< bool >( symbols, false ) : used_symbols( joint );
    std::vector< bool > out( n, false );
    for ( std::size_t k = 0; k < n; ++k )
        for ( std::size_t x = 0; x < symbols && !out[ k ]; ++x )
            out[ k ] = used[ x ] && automata[ k ].activating( ConstraintAutomaton::initial(), x );
    return out;
}

// Words accepted by some group, reused as witnesses: every subset of a group accepts them too.
struct Witnesses
{
    static constexpr std::size_t capacity = 256;
    std::deque< std::vector< Label > > words;

    void add( std::vector< Label > w )
    {
        words.push_front( std::move( w ) );
        if ( words.size() > capacity )
            words.pop_back();
    }
};

enum class Search : std::uint8_t
{
    Found,
    Impossible,
    Undecided,
};

// Symbols present in every accepted word that contains `symbol`: the least set closed under the
// members' existence implications. Dropping all other symbols from an accepted word keeps it
// accepted, so witnesses for `symbol` only need these. Empty if the set itself is contradictory.
std::optional< std::vector< bool > > required_symbols( std::span< const TemplateInstance > group,
                                                       const ConstraintAutomaton& any, std::size_t symbols,
                                                       std::size_t symbol )
{
    const auto index = [ & ]( const Label& l ) { return any.symbol_index( l ); };
    std::vector< bool > in( symbols, false );
    in[ symbol ] = true;
    for ( const auto& c : group )
        if ( c.templ == Template::AtLeastOne || c.templ == Template::ExactlyOne )
            in[ index( c.first ) ] = true;

    for ( bool changed = true; changed; )
    {
        changed = false;
        const auto require = [ & ]( std::size_t from, std::size_t to ) {
            if ( in[ from ] && !in[ to ] )
                in[ to ] = changed = true;
        };
        for ( const auto& c : group )
        {
            if ( arity( c.templ ) != 2 )
                continue;
            const auto a = index( c.first ), b = index( c.second );
            switch ( c.templ )
            {
            case Template::RespondedExistence:
            case Template::Response:
            case Template::AlternateResponse:
                require( a, b );
                break;
            case Template::Precedence:
            case Template::AlternatePrecedence:
                require( b, a );
                break;
            case Template::CoExistence:
            case Template::Succession:
            case Template::AlternateSuccession:
                require( a, b );
                require( b, a );
                break;
            default:
                break;
            }
        }
    }

    for ( const auto& c : group )
    {
        if ( c.templ == Template::Absence && in[ index( c.first ) ] )
            return std::nullopt;
        if ( c.templ == Template::NotCoExistence && in[ index( c.first ) ] && in[ index( c.second ) ] )
            return std::nullopt;
    }
    return in;
}

// Candidate word using each required symbol once, ordered by the members' precedence edges.
// Returns false if the edges are cyclic or the word is rejected by some member.
bool single_occurrence_witness( std::span< const TemplateInstance > group,
                                const std::vector< ConstraintAutomaton >& automata, const std::vector< bool >& in,
                                std::vector< std::size_t >& word )
{
    const std::size_t symbols = in.size();
    const auto index = [ & ]( const Label& l ) { return automata.front().symbol_index( l ); };
    std::vector< std::vector< std::size_t > > after( symbols );
    std::vector< std::size_t > indegree( symbols, 0 );
    for ( const auto& c : group )
    {
        if ( arity( c.templ ) != 2 )
            continue;
        const auto a = index( c.first ), b = index( c.second );
        const bool ordered = c.templ != Template::RespondedExistence && c.templ != Template::CoExistence &&
                             c.templ != Template::NotCoExistence;
        if ( ordered && in[ a ] && in[ b ] )
        {
            after[ a ].push_back( b );
            ++indegree[ b ];
        }
    }

    word.clear();
    std::set< std::size_t > ready;
    for ( std::size_t x = 0; x < symbols; ++x )
        if ( in[ x ] && indegree[ x ] == 0 )
            ready.insert( x );
    while ( !ready.empty() )
    {
        const auto x = *ready.begin();
        ready.erase( ready.begin() );
        word.push_back( x );
        for ( auto y : after[ x ] )
            if ( --indegree[ y ] == 0 )
                ready.insert( y );
    }
    if ( word.size() != static_cast< std::size_t >( std::ranges::count( in, true ) ) )
        return false;

    return std::ranges::all_of( automata, [ & ]( const ConstraintAutomaton& m ) {
        std::uint16_t q = ConstraintAutomaton::initial();
        for ( auto x : word )
            q = m.step( q, x );
        return m.accepting( q );
    } );
}

// Best-first search (fewest non-accepting members first) for a word over `allowed` accepted by every
// member that contains `symbol`. Members without an allowed parameter never leave their initial,
// accepting state and are skipped. Exhausting the live product proves there is none.
Search find_witness( const std::vector< ConstraintAutomaton >& all, std::span< const TemplateInstance > group,
                     const std::vector< bool >& allowed, std::size_t symbol, std::size_t budget,
                     std::vector< std::size_t >& word )
{
    std::vector< std::size_t > letters;
    for ( std::size_t x = 0; x < allowed.size(); ++x )
        if ( allowed[ x ] )
            letters.push_back( x );
    std::vector< ConstraintAutomaton > automata;
    for ( std::size_t k = 0; k < group.size(); ++k )
    {
        const auto& c = group[ k ];
        if ( allowed[ all[ k ].symbol_index( c.first ) ] ||
             ( arity( c.templ ) == 2 && allowed[ all[ k ].symbol_index( c.second ) ] ) )
            automata.push_back( all[ k ] );
    }
    const std::size_t n = automata.size();
    std::unordered_map< std::string, std::uint32_t > ids;
    std::vector< std::string > keys; // member states, then the symbol flag
    std::vector< std::pair< std::uint32_t, std::uint32_t > > parent; // (node, symbol)
    using Entry = std::pair< std::size_t, std::uint32_t >;
    std::priority_queue< Entry, std::vector< Entry >, std::greater<> > open;

    const auto distance = [ & ]( const std::string& key ) {
        std::size_t d = key[ n ] ? 0 : 1;
        for ( std::size_t k = 0; k < n; ++k )
            d += automata[ k ].accepting( static_cast< std::uint8_t >( key[ k ] ) ) ? 0 : 1;
        return d;
    };
    const auto insert = [ & ]( std::string key, std::uint32_t from, std::uint32_t via ) {
        auto [ it, fresh ] = ids.try_emplace( key, static_cast< std::uint32_t >( keys.size() ) );
        if ( !fresh )
            return;
        open.emplace( distance( key ), it->second );
        keys.push_back( std::move( key ) );
        parent.emplace_back( from, via );
    };

    insert( std::string( n + 1, '\0' ), 0, 0 );
    std::string next( n + 1, '\0' );
    while ( !open.empty() )
    {
        const auto [ d, id ] = open.top();
        open.pop();
        if ( d == 0 )
        {
            word.clear();
            for ( auto at = id; at != 0; at = parent[ at ].first )
                word.push_back( parent[ at ].second );
            std::ranges::reverse( word );
            return Search::Found;
        }
        if ( keys.size() >= budget )
            return Search::Undecided;
        for ( auto x : letters )
        {
            bool alive = true;
            for ( std::size_t k = 0; k < n && alive; ++k )
            {
                const auto q = automata[ k ].step( static_cast< std::uint8_t >( keys[ id ][ k ] ), x );
                alive = automata[ k ].live( q );
                next[ k ] = static_cast< char >( q );
            }
            if ( !alive )
                continue;
            next[ n ] = static_cast< char >( keys[ id ][ n ] || x == symbol );
            insert( next, id, static_cast< std::uint32_t >( x ) );
        }
    }
    return Search::Impossible;
}

// Exact per-member activatability by exhaustive product construction. The joint automaton is built
// one member at a time and kept trimmed (and minimized whenever it has doubled). Adding members only
// shrinks the language, so with `stop_early` the search ends as soon as some member has lost all
// its activating symbols. A direct product of all members is tried first.
std::vector< bool > activatable_exhaustive( const std::vector< ConstraintAutomaton >& automata,
                                            std::span< const TemplateInstance > group, std::size_t symbols,
                                            const ConsistencyOptions& opts, bool stop_early )
{
    constexpr std::size_t direct_budget = 20000;
    if ( auto direct = activatable_direct( automata, symbols, direct_budget ) )
        return *direct;

    std::vector< std::size_t > order( group.size() );
    std::iota( order.begin(), order.end(), 0 );
    // Unary members first: they cut the language down the most.
    std::ranges::stable_sort( order, [ & ]( std::size_t x, std::size_t y ) {
        return arity( group[ x ].templ ) < arity( group[ y ].templ );
    } );

    std::vector< bool > out( group.size(), false );
    const auto activatable = [ & ]( const std::vector< bool >& used ) {
        for ( std::size_t k = 0; k < group.size(); ++k )
        {
            out[ k ] = false;
            for ( std::size_t x = 0; x < symbols && !out[ k ]; ++x )
                out[ k ] = used[ x ] && automata[ k ].activating( ConstraintAutomaton::initial(), x );
        }
        return std::ranges::find( out, false ) == out.end();
    };

    Dfa joint = universal( symbols );
    std::size_t minimized_size = 1;
    for ( std::size_t i = 0; i < order.size(); ++i )
    {
        joint = product( joint, automata[ order[ i ] ], opts );
        const bool minimize = joint.size() > 2 * minimized_size;
        joint = trim( joint, minimize );
        if ( joint.size() == 0 )
            return std::vector< bool >( group.size(), false );
        if ( minimize )
            minimized_size = joint.size();
        if ( stop_early && i + 1 < order.size() && !activatable( used_symbols( joint ) ) )
            return out;
    }
    activatable( used_symbols( joint ) );
    return out;
}

// Quasi-consistency of one connected component. Activation depends on the symbol only, so a member
// is activatable iff some word of the joint language contains one of its activating symbols. Each
// symbol is settled by a cached or searched witness over its required symbols, or by exhausting
// that restricted search; only searches over budget fall back to the full product.
std::vector< bool > activatable_component( std::span< const TemplateInstance > group, const ConsistencyOptions& opts,
                                           bool stop_early, Witnesses& witnesses )
{
    const auto alphabet = consistency_alphabet( group );
    const std::size_t symbols = alphabet.size();
    std::vector< ConstraintAutomaton > automata;
    automata.reserve( group.size() );
    for ( const auto& c : group )
        automata.push_back( to_automaton( c, alphabet ) );

    enum class Use : std::uint8_t
    {
        Unknown,
        Yes,
        No,
    };
    std::vector< Use > use( symbols, Use::Unknown );
    const auto mark_word = [ & ]( const std::vector< Label >& w ) {
        for ( const auto& l : w )
            use[ automata.front().symbol_index( l ) ] = Use::Yes;
    };
    for ( const auto& w : witnesses.words )
        if ( std::ranges::all_of( automata, [ & ]( const ConstraintAutomaton& a ) { return a.run( w ).accepted; } ) )
            mark_word( w );

    constexpr std::size_t witness_budget = 50000;
    std::vector< bool > out( group.size(), false );
    std::vector< std::size_t > word;
    for ( std::size_t k = 0; k < group.size(); ++k )
    {
        for ( std::size_t x = 0; x < symbols && !out[ k ]; ++x )
        {
            if ( !automata[ k ].activating( ConstraintAutomaton::initial(), x ) )
                continue;
            if ( use[ x ] == Use::Unknown )
            {
                const auto required = required_symbols( group, automata.front(), symbols, x );
                Search found = Search::Impossible;
                if ( required )
                    found = single_occurrence_witness( group, automata, *required, word )
                                ? Search::Found
                                : find_witness( automata, group, *required, x, witness_budget, word );
                switch ( found )
                {
                case Search::Found: {
                    std::vector< Label > labels;
                    for ( auto i : word )
                        labels.push_back( alphabet[ i ] );
                    mark_word( labels );
                    witnesses.add( std::move( labels ) );
                    break;
                }
                case Search::Impossible:
                    use[ x ] = Use::No;
                    break;
                case Search::Undecided:
                    return activatable_exhaustive( automata, group, symbols, opts, stop_early );
                }
            }
            out[ k ] = use[ x ] == Use::Yes;
        }
        if ( !out[ k ] && stop_early )
            return out;
    }
    return out;
}

} // namespace

std::vector< bool > activatable_members( std::span< const TemplateInstance > group, const ConsistencyOptions& opts )
{
    Witnesses witnesses;
    std::vector< bool > out( group.size(), true );
    for ( const auto& comp : components( group ) )
    {
        const auto members = subset( group, comp );
        const auto act = activatable_component( members, opts, false, witnesses );
        for ( std::size_t i = 0; i < comp.size(); ++i )
        {
            // Only these reject the empty word, and a non-empty word activates them, so when one is
            // not activatable its component (and with it the whole group) has an empty language.
            const auto t = members[ i ].templ;
            if ( !act[ i ] && ( t == Template::AtLeastOne || t == Template::ExactlyOne ) )
                return std::vector< bool >( group.size(), false );
            out[ comp[ i ] ] = act[ i ];
        }
    }
    return out;
}

namespace
{

bool consistent( std::span< const TemplateInstance > group, const ConsistencyOptions& opts, Witnesses& witnesses )
{
    for ( const auto& comp : components( group ) )
    {
        const auto act = activatable_component( subset( group, comp ), opts, true, witnesses );
        if ( std::ranges::find( act, false ) != act.end() )
            return false;
    }
    return true;
}

} // namespace

bool is_consistent( std::span< const TemplateInstance > group, const ConsistencyOptions& opts )
{
    Witnesses witnesses;
    return consistent( group, opts, witnesses );
}

namespace
{

bool consistent_without( std::span< const TemplateInstance > group, const std::set< std::size_t >& removed,
                         const ConsistencyOptions& opts, Witnesses& witnesses )
{
    std::vector< TemplateInstance > rest;
    for ( std::size_t i = 0; i < group.size(); ++i )
        if ( !removed.contains( i ) )
            rest.push_back( group[ i ] );
    return consistent( rest, opts, witnesses );
}

// QuickXplain over member indices: a minimal subset of `candidates` that is inconsistent together
// with `background`. Inconsistency is monotone, so divide and conquer applies.
std::vector< std::size_t > quick_xplain( std::span< const TemplateInstance > group, std::vector< std::size_t >& background,
                                         bool added, std::span< const std::size_t > candidates,
                                         const ConsistencyOptions& opts, Witnesses& witnesses )
{
    if ( added && !consistent( subset( group, background ), opts, witnesses ) )
        return {};
    if ( candidates.size() == 1 )
        return { candidates[ 0 ] };

    const auto half = candidates.size() / 2;
    const auto first = candidates.first( half );
    const auto second = candidates.subspan( half );

    const auto base = background.size();
    background.insert( background.end(), first.begin(), first.end() );
    auto from_second = quick_xplain( group, background, true, second, opts, witnesses );
    background.resize( base );

    background.insert( background.end(), from_second.begin(), from_second.end() );
    auto from_first = quick_xplain( group, background, !from_second.empty(), first, opts, witnesses );
    background.resize( base );

    from_first.insert( from_first.end(), from_second.begin(), from_second.end() );
    return from_first;
}

// A minimal inconsistent subset of the members not in `removed`.
std::vector< std::size_t > minimal_conflict( std::span< const TemplateInstance > group,
                                             const std::set< std::size_t >& removed, const ConsistencyOptions& opts,
                                             Witnesses& witnesses )
{
    std::vector< std::size_t > core;
    for ( std::size_t i = 0; i < group.size(); ++i )
        if ( !removed.contains( i ) )
            core.push_back( i );

    // Narrow to one inconsistent component; quasi-consistency is decided per component.
    const auto members = subset( group, core );
    for ( const auto& comp : components( members ) )
    {
        const auto act = activatable_component( subset( members, comp ), opts, true, witnesses );
        if ( std::ranges::find( act, false ) != act.end() )
        {
            std::vector< std::size_t > narrowed;
            for ( auto c : comp )
                narrowed.push_back( core[ c ] );
            core = std::move( narrowed );
            break;
        }
    }

    std::vector< std::size_t > background;
    auto conflict = quick_xplain( group, background, false, core, opts, witnesses );
    std::ranges::sort( conflict );
    return conflict;
}

} // namespace

CorrectionSearch minimal_correction_sets( std::span< const TemplateInstance > group, std::size_t size_cap,
                                          std::span< const std::size_t > protected_members,
                                          const ConsistencyOptions& opts )
{
    if ( size_cap == 0 )
        throw std::invalid_argument( "correction set size cap must be at least 1" );
    Witnesses witnesses;
    if ( consistent( group, opts, witnesses ) )
        throw std::invalid_argument( "minimal correction sets requested for a consistent group" );

    const std::set< std::size_t > pinned( protected_members.begin(), protected_members.end() );
    const auto beyond_cap = [ & ] {
        return CorrectionSearch{ {}, "no correction set within size cap " + std::to_string( size_cap ) };
    };

    // Conflicts whose unprotected parts are pairwise disjoint each need their own removal, so more of
    // them than the cap settle the search early.
    std::vector< std::vector< std::size_t > > conflicts;
    {
        std::set< std::size_t > hidden;
        while ( conflicts.size() <= size_cap && !consistent_without( group, hidden, opts, witnesses ) )
        {
            conflicts.push_back( minimal_conflict( group, hidden, opts, witnesses ) );
            const auto before = hidden.size();
            for ( auto m : conflicts.back() )
                if ( !pinned.contains( m ) )
                    hidden.insert( m );
            if ( hidden.size() == before )
                return { {}, "every correction set would remove a protected constraint" };
        }
        if ( conflicts.size() > size_cap )
            return beyond_cap();
    }

    // Breadth-first hitting-set tree over minimal conflicts. Every minimal correction set must hit
    // every conflict of the remaining members, so expanding each unprotected conflict member
    // level by level reaches all of them up to the cap.
    std::vector< std::set< std::size_t > > found;
    std::set< std::set< std::size_t > > visited;
    std::vector< std::set< std::size_t > > level{ {} };
    bool truncated = false;

    for ( std::size_t depth = 0; !level.empty(); ++depth )
    {
        std::vector< std::set< std::size_t > > next;
        for ( const auto& path : level )
        {
            if ( std::ranges::any_of( found, [ & ]( const auto& d ) {
                     return std::ranges::includes( path, d );
                 } ) )
                continue;

            if ( depth > 0 && consistent_without( group, path, opts, witnesses ) )
            {
                found.push_back( path );
                continue;
            }
            if ( depth == size_cap )
            {
                truncated = true;
                continue;
            }

            const std::vector< std::size_t >* label = nullptr;
            for ( const auto& k : conflicts )
                if ( std::ranges::none_of( k, [ & ]( std::size_t i ) { return path.contains( i ); } ) )
                {
                    label = &k;
                    break;
                }
            if ( !label )
            {
                conflicts.push_back( minimal_conflict( group, path, opts, witnesses ) );
                label = &conflicts.back();
            }

            for ( auto member : *label )
            {
                if ( pinned.contains( member ) )
                    continue;
                auto child = path;
                child.insert( member );
                if ( visited.insert( child ).second )
                    next.push_back( std::move( child ) );
            }
        }
        level = std::move( next );
    }

    CorrectionSearch out;
    for ( const auto& d : found )
    {
        const bool minimal = std::ranges::none_of( found, [ & ]( const auto& other ) {
            return other.size() < d.size() && std::ranges::includes( d, other );
        } );
        if ( minimal )
            out.sets.emplace_back( d.begin(), d.end() );
    }
    std::ranges::sort( out.sets, []( const CorrectionSet& x, const CorrectionSet& y ) {
        return x.size() != y.size() ? x.size() < y.size() : x < y;
    } );
    if ( out.sets.empty() )
        out.diagnostic = truncated ? *beyond_cap().diagnostic
                                   : std::string( "every correction set would remove a protected constraint" );
    return out;
}

} // namespace bpcheck
