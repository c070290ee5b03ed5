#include "bpcheck/oracle.hpp"

#include <algorithm>

namespace bpcheck::oracle
{

namespace
{

using Op = Formula::Op;

FormulaPtr make( Op op, FormulaPtr lhs = nullptr, FormulaPtr rhs = nullptr )
{
    return std::make_shared< const Formula >( Formula{ op, {}, std::move( lhs ), std::move( rhs ) } );
}

FormulaPtr atom( const Label& l ) { return std::make_shared< const Formula >( Formula{ Op::Atom, l, nullptr, nullptr } ); }
FormulaPtr lnot( FormulaPtr f ) { return make( Op::Not, std::move( f ) ); }
FormulaPtr land( FormulaPtr l, FormulaPtr r ) { return make( Op::And, std::move( l ), std::move( r ) ); }
FormulaPtr implies( FormulaPtr l, FormulaPtr r ) { return make( Op::Implies, std::move( l ), std::move( r ) ); }
FormulaPtr iff( FormulaPtr l, FormulaPtr r ) { return make( Op::Iff, std::move( l ), std::move( r ) ); }
FormulaPtr X( FormulaPtr f ) { return make( Op::Next, std::move( f ) ); }
FormulaPtr Y( FormulaPtr f ) { return make( Op::Yesterday, std::move( f ) ); }
FormulaPtr F( FormulaPtr f ) { return make( Op::Eventually, std::move( f ) ); }
FormulaPtr G( FormulaPtr f ) { return make( Op::Always, std::move( f ) ); }
FormulaPtr O( FormulaPtr f ) { return make( Op::Once, std::move( f ) ); }
FormulaPtr U( FormulaPtr l, FormulaPtr r ) { return make( Op::Until, std::move( l ), std::move( r ) ); }
FormulaPtr S( FormulaPtr l, FormulaPtr r ) { return make( Op::Since, std::move( l ), std::move( r ) ); }

} // namespace

FormulaPtr formula( Template t, const Label& a_label, const Label& b_label )
{
    const auto a = [ & ] { return atom( a_label ); };
    const auto b = [ & ] { return atom( b_label ); };

    const auto at_least_one = [ & ] { return F( a() ); };
    const auto at_most_one = [ & ] { return lnot( F( land( a(), X( F( a() ) ) ) ) ); };
    const auto response = [ & ] { return G( implies( a(), F( b() ) ) ); };
    const auto precedence = [ & ] { return G( implies( b(), O( a() ) ) ); };
    const auto alt_response = [ & ] { return G( implies( a(), X( U( lnot( a() ), b() ) ) ) ); };
    // Each b looks at the previous instant: since the last a there was no b.
    const auto alt_precedence = [ & ] { return G( implies( b(), Y( S( lnot( b() ), a() ) ) ) ); };

    switch ( t )
    {
    case Template::AtLeastOne:
        return at_least_one();
    case Template::AtMostOne:
        return at_most_one();
    case Template::ExactlyOne:
        return land( at_least_one(), at_most_one() );
    case Template::Absence:
        return lnot( F( a() ) );
    case Template::RespondedExistence:
        return implies( F( a() ), F( b() ) );
    case Template::Response:
        return response();
    case Template::AlternateResponse:
        return alt_response();
    case Template::Precedence:
        return precedence();
    case Template::AlternatePrecedence:
        return alt_precedence();
    case Template::CoExistence:
        return iff( F( a() ), F( b() ) );
    case Template::Succession:
        return land( response(), precedence() );
    case Template::AlternateSuccession:
        return land( alt_response(), alt_precedence() );
    case Template::NotCoExistence:
        return land( implies( F( a() ), lnot( F( b() ) ) ), implies( F( b() ), lnot( F( a() ) ) ) );
    }
    return make( Op::True );
}

bool holds( const Formula& f, std::span< const Label > w, std::size_t i )
{
    const std::size_t n = w.size();
    switch ( f.op )
    {
    case Op::True:
        return true;
    case Op::Atom:
        return i < n && w[ i ] == f.atom;
    case Op::Not:
        return !holds( *f.lhs, w, i );
    case Op::And:
        return holds( *f.lhs, w, i ) && holds( *f.rhs, w, i );
    case Op::Or:
        return holds( *f.lhs, w, i ) || holds( *f.rhs, w, i );
    case Op::Implies:
        return !holds( *f.lhs, w, i ) || holds( *f.rhs, w, i );
    case Op::Iff:
        return holds( *f.lhs, w, i ) == holds( *f.rhs, w, i );
    case Op::Next:
        return i + 1 < n && holds( *f.lhs, w, i + 1 );
    case Op::Yesterday:
        return i > 0 && i - 1 < n && holds( *f.lhs, w, i - 1 );
    case Op::Eventually:
        for ( std::size_t j = i; j < n; ++j )
            if ( holds( *f.lhs, w, j ) )
                return true;
        return false;
    case Op::Always:
        for ( std::size_t j = i; j < n; ++j )
            if ( !holds( *f.lhs, w, j ) )
                return false;
        return true;
    case Op::Until:
        for ( std::size_t j = i; j < n; ++j )
        {
            if ( holds( *f.rhs, w, j ) )
                return true;
            if ( !holds( *f.lhs, w, j ) )
                return false;
        }
        return false;
    case Op::Since:
        if ( i >= n )
            return false;
        for ( std::size_t j = i + 1; j-- > 0; )
        {
            if ( holds( *f.rhs, w, j ) )
                return true;
            if ( !holds( *f.lhs, w, j ) )
                return false;
        }
        return false;
    case Op::Once:
        if ( i >= n )
            return false;
        for ( std::size_t j = i + 1; j-- > 0; )
            if ( holds( *f.lhs, w, j ) )
                return true;
        return false;
    }
    return false;
}

bool satisfies( Template t, const Label& a, const Label& b, std::span< const Label > word )
{
    return holds( *formula( t, a, b ), word, 0 );
}

bool activated( Template t, const Label& a, const Label& b, std::span< const Label > word )
{
    const bool has_a = std::find( word.begin(), word.end(), a ) != word.end();
    const bool has_b = std::find( word.begin(), word.end(), b ) != word.end();
    switch ( t )
    {
    case Template::AtLeastOne:
    case Template::AtMostOne:
    case Template::ExactlyOne:
    case Template::Absence:
        return !word.empty();
    case Template::RespondedExistence:
    case Template::Response:
    case Template::AlternateResponse:
        return has_a;
    case Template::Precedence:
    case Template::AlternatePrecedence:
        return has_b;
    default:
        return has_a || has_b;
    }
}

std::vector< Sequence > all_words( std::span< const Label > alphabet, std::size_t max_len )
{
    std::vector< Sequence > out{ Sequence{} };
    std::size_t begin = 0;
    for ( std::size_t len = 1; len <= max_len; ++len )
    {
        const std::size_t end = out.size();
        for ( std::size_t i = begin; i < end; ++i )
            for ( const auto& sym : alphabet )
            {
                auto w = out[ i ];
                w.push_back( sym );
                out.push_back( std::move( w ) );
            }
        begin = end;
    }
    return out;
}

std::set< Sequence > oracle_satisfying( Template t, const Label& a, const Label& b, std::span< const Label > alphabet,
                                        std::size_t max_len )
{
    if ( alphabet.size() > 5 || max_len > 8 )
        throw OracleBoundsError( "oracle enumeration limited to 5 symbols and length 8" );
    const auto f = formula( t, a, b );
    std::set< Sequence > out;
    for ( const auto& w : all_words( alphabet, max_len ) )
        if ( !w.empty() && holds( *f, w, 0 ) )
            out.insert( w );
    return out;
}

} // namespace bpcheck::oracle
