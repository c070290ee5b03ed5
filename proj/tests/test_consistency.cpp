#include "doctest.h"
#include "support.hpp"

#include "bpcheck/automaton.hpp"

#include <algorithm>

using namespace bpcheck;

namespace
{

using Group = std::vector< TemplateInstance >;

const Group transitive{ { Template::Response, "a", "b" }, { Template::Response, "b", "c" },
                        { Template::NotCoExistence, "a", "c" } };

Group without( const Group& g, const CorrectionSet& removed )
{
    Group out;
    for ( std::size_t i = 0; i < g.size(); ++i )
        if ( std::ranges::find( removed, i ) == removed.end() )
            out.push_back( g[ i ] );
    return out;
}

} // namespace

TEST_CASE( "is_consistent: direct contradiction" )
{
    const Group g{ { Template::CoExistence, "a", "b" }, { Template::NotCoExistence, "a", "b" } };
    CHECK_FALSE( is_consistent( g ) );
}

TEST_CASE( "is_consistent: transitive contradiction" )
{
    CHECK_FALSE( is_consistent( transitive ) );
    CHECK( activatable_members( transitive ) == std::vector< bool >{ false, true, true } );
}

TEST_CASE( "is_consistent: compatible constraints" )
{
    const Group g{ { Template::Response, "a", "b" }, { Template::Precedence, "a", "b" } };
    CHECK( is_consistent( g ) );
    // The word <a, b> activates both.
    const std::vector< Label > w{ "a", "b" };
    for ( const auto& c : g )
    {
        const auto run = to_automaton( c, consistency_alphabet( g ) ).run( w );
        CHECK( run.accepted );
        CHECK( run.activated );
    }
}

TEST_CASE( "is_consistent: unsatisfiable unary members" )
{
    const Group g{ { Template::AtLeastOne, "a", "" }, { Template::Absence, "a", "" } };
    CHECK_FALSE( is_consistent( g ) );
    const Group h{ { Template::AtLeastOne, "a", "" }, { Template::Response, "a", "b" }, { Template::Absence, "b", "" } };
    CHECK( activatable_members( h ) == std::vector< bool >{ false, false, false } );
}

TEST_CASE( "is_consistent: members needing repeated events" )
{
    // b needs an a before it and an a after it, so witnesses must repeat a.
    const Group g{ { Template::AlternatePrecedence, "a", "b" },
                   { Template::AlternateResponse, "b", "a" },
                   { Template::AtLeastOne, "b", "" } };
    CHECK( is_consistent( g ) );
}

TEST_CASE( "minimal_correction_sets: transitive contradiction" )
{
    const auto r = minimal_correction_sets( transitive, 3 );
    CHECK( r.sets == std::vector< CorrectionSet >{ { 0 }, { 1 }, { 2 } } );
    CHECK_FALSE( r.diagnostic.has_value() );
}

TEST_CASE( "minimal_correction_sets: direct contradiction" )
{
    const Group g{ { Template::CoExistence, "a", "b" }, { Template::NotCoExistence, "a", "b" } };
    CHECK( minimal_correction_sets( g, 3 ).sets == std::vector< CorrectionSet >{ { 0 }, { 1 } } );
}

TEST_CASE( "minimal_correction_sets: preconditions" )
{
    const Group ok{ { Template::Response, "a", "b" } };
    CHECK_THROWS_AS( (void)minimal_correction_sets( ok, 3 ), std::invalid_argument );
    CHECK_THROWS_AS( (void)minimal_correction_sets( transitive, 0 ), std::invalid_argument );
}

TEST_CASE( "minimal_correction_sets: protected members and size cap" )
{
    const std::vector< std::size_t > keep{ 2 };
    CHECK( minimal_correction_sets( transitive, 3, keep ).sets == std::vector< CorrectionSet >{ { 0 }, { 1 } } );

    // Two independent contradictions need two removals.
    const Group two{ { Template::CoExistence, "a", "b" },
                     { Template::NotCoExistence, "a", "b" },
                     { Template::CoExistence, "c", "d" },
                     { Template::NotCoExistence, "c", "d" } };
    const auto capped = minimal_correction_sets( two, 1 );
    CHECK( capped.sets.empty() );
    REQUIRE( capped.diagnostic.has_value() );
    CHECK( capped.diagnostic->find( "size cap 1" ) != std::string::npos );
    CHECK( minimal_correction_sets( two, 2 ).sets.size() == 4 );

    const std::vector< std::size_t > all{ 0, 1 };
    const auto blocked = minimal_correction_sets( two, 3, all );
    CHECK( blocked.sets.empty() );
    CHECK( blocked.diagnostic.has_value() );
}

TEST_CASE( "property: activatability matches word enumeration" )
{
    std::mt19937_64 rng( 2024 );
    const std::vector< Label > symbols{ "a", "b", "c" };
    for ( int round = 0; round < 120; ++round )
    {
        const auto size = std::uniform_int_distribution< std::size_t >( 2, 4 )( rng );
        const auto group = testing::random_group( rng, size, symbols );
        const auto expected = testing::brute_activatable( group, 6 );
        CHECK( activatable_members( group ) == expected );
        CHECK( is_consistent( group ) == std::ranges::all_of( expected, []( bool b ) { return b; } ) );
    }
}

TEST_CASE( "property: correction sets restore consistency and are minimal" )
{
    std::mt19937_64 rng( 77 );
    const std::vector< Label > symbols{ "a", "b", "c" };
    int checked = 0;
    for ( int round = 0; round < 200 && checked < 40; ++round )
    {
        const auto group = testing::random_group( rng, 5, symbols );
        if ( is_consistent( group ) )
            continue;
        ++checked;
        const auto r = minimal_correction_sets( group, 3 );
        for ( const auto& set : r.sets )
        {
            CHECK( is_consistent( without( group, set ) ) );
            // Dropping any one element of the set leaves an inconsistent group; inconsistency is
            // preserved by supersets, so this covers every proper subset.
            for ( std::size_t skip = 0; skip < set.size(); ++skip )
            {
                CorrectionSet smaller = set;
                smaller.erase( smaller.begin() + static_cast< std::ptrdiff_t >( skip ) );
                CHECK_FALSE( is_consistent( without( group, smaller ) ) );
            }
        }
        // Completeness up to the cap: every consistent removal of size <= 2 contains a returned set.
        for ( std::size_t i = 0; i < group.size(); ++i )
            for ( std::size_t j = i; j < group.size(); ++j )
            {
                const CorrectionSet cand = i == j ? CorrectionSet{ i } : CorrectionSet{ i, j };
                if ( !is_consistent( without( group, cand ) ) )
                    continue;
                const bool covered = std::ranges::any_of( r.sets, [ & ]( const CorrectionSet& s ) {
                    return std::ranges::includes( cand, s );
                } );
                CHECK( covered );
            }
    }
    CHECK( checked > 10 );
}
