#include "doctest.h"
#include "support.hpp"

#include "bpcheck/automaton.hpp"
#include "bpcheck/declare.hpp"
#include "bpcheck/oracle.hpp"

using namespace bpcheck;
using testing::trace;

namespace
{

Verdict eval( Template t, const char* a, const char* b, const Sequence& s )
{
    return evaluate( t, Binding{ a, b }, std::span< const Label >( s ) );
}

Verdict expected_verdict( Template t, const Label& a, const Label& b, const Sequence& w )
{
    if ( !oracle::satisfies( t, a, b, w ) )
        return Verdict::Violated;
    return oracle::activated( t, a, b, w ) ? Verdict::SatisfiedActivated : Verdict::SatisfiedVacuously;
}

const std::vector< Label > abx{ "a", "b", "x" };

} // namespace

TEST_CASE( "evaluate: Precedence" )
{
    CHECK( eval( Template::Precedence, "check", "approve", { "approve" } ) == Verdict::Violated );
    CHECK( eval( Template::Precedence, "check", "approve", { "create" } ) == Verdict::SatisfiedVacuously );
    CHECK( eval( Template::Precedence, "check", "approve", { "check", "approve" } ) == Verdict::SatisfiedActivated );
}

TEST_CASE( "evaluate: NotCoExistence of approval and rejection" )
{
    CHECK( eval( Template::NotCoExistence, "approve po", "reject po", { "approve po", "reject po" } ) ==
           Verdict::Violated );
    CHECK( eval( Template::NotCoExistence, "approve po", "reject po", { "approve po" } ) ==
           Verdict::SatisfiedActivated );
}

TEST_CASE( "evaluate: AtMostOne" )
{
    CHECK( eval( Template::AtMostOne, "a", "", { "a", "x", "a" } ) == Verdict::Violated );
    CHECK( eval( Template::AtMostOne, "a", "", { "a", "x" } ) == Verdict::SatisfiedActivated );
}

TEST_CASE( "evaluate: AlternateResponse agrees with the reference semantics" )
{
    const Sequence bad{ "a", "a", "b" }, good{ "a", "b", "a", "b" };
    CHECK( eval( Template::AlternateResponse, "a", "b", bad ) == expected_verdict( Template::AlternateResponse, "a", "b", bad ) );
    CHECK( eval( Template::AlternateResponse, "a", "b", good ) ==
           expected_verdict( Template::AlternateResponse, "a", "b", good ) );
    CHECK( eval( Template::AlternateResponse, "a", "b", bad ) == Verdict::Violated );
    CHECK( eval( Template::AlternateResponse, "a", "b", good ) == Verdict::SatisfiedActivated );
}

TEST_CASE( "evaluate: arity mismatch is rejected" )
{
    const std::vector< Label > one{ "a" }, two{ "a", "b" };
    const Sequence s{ "a" };
    CHECK_THROWS_AS( (void)evaluate( Template::Response, one, s ), std::invalid_argument );
    CHECK_THROWS_AS( (void)evaluate( Template::Absence, two, s ), std::invalid_argument );
    CHECK_NOTHROW( (void)evaluate( Template::Response, two, s ) );
}

TEST_CASE( "evaluate: AlternatePrecedence is operational" )
{
    CHECK( eval( Template::AlternatePrecedence, "a", "b", { "a", "b", "a", "b" } ) == Verdict::SatisfiedActivated );
    CHECK( eval( Template::AlternatePrecedence, "a", "b", { "a", "b", "b" } ) == Verdict::Violated );
    CHECK( eval( Template::AlternatePrecedence, "a", "b", { "b" } ) == Verdict::Violated );
    CHECK( eval( Template::AlternatePrecedence, "a", "b", { "a", "x" } ) == Verdict::SatisfiedVacuously );
}

TEST_CASE( "evaluate_role" )
{
    const ConstraintKey c{ ConstraintKind::Role, Template::Absence, { "", "approve po", "manager" } };
    CHECK( evaluate_role( c, trace( "1", { { "create po", "clerk" }, { "approve po", "clerk" } } ) ) == Verdict::Violated );
    CHECK( evaluate_role( c, trace( "2", { { "approve po", "manager" } } ) ) == Verdict::SatisfiedActivated );
    CHECK( evaluate_role( c, trace( "3", { { "create po", "clerk" } } ) ) == Verdict::SatisfiedVacuously );
    // An unassigned role is not the required one.
    CHECK( evaluate_role( c, trace( "4", { { "approve po" } } ) ) == Verdict::Violated );
}

TEST_CASE( "holds_on_all" )
{
    const std::vector< Sequence > both{ { "a", "b" }, { "x" } };
    auto r = holds_on_all( Template::Response, { "a", "b" }, both );
    CHECK( r.holds );
    CHECK( r.activated_somewhere );

    const std::vector< Sequence > vacuous{ { "x" } };
    r = holds_on_all( Template::Response, { "a", "b" }, vacuous );
    CHECK( r.holds );
    CHECK_FALSE( r.activated_somewhere );
    CHECK_FALSE( r.minable() );

    const std::vector< Sequence > broken{ { "a", "b" }, { "a" } };
    CHECK_FALSE( holds_on_all( Template::Response, { "a", "b" }, broken ).holds );
}

TEST_CASE( "oracle_satisfying" )
{
    const std::vector< Label > ax{ "a", "x" }, a{ "a" }, ab{ "a", "b" };
    CHECK( oracle::oracle_satisfying( Template::AtMostOne, "a", "", ax, 2 ) ==
           std::set< Sequence >{ { "a" }, { "x" }, { "a", "x" }, { "x", "a" }, { "x", "x" } } );
    CHECK( oracle::oracle_satisfying( Template::Absence, "a", "", a, 2 ).empty() );
    CHECK( oracle::oracle_satisfying( Template::CoExistence, "a", "b", ab, 1 ).empty() );
    const std::vector< Label > six{ "a", "b", "c", "d", "e", "f" };
    CHECK_THROWS_AS( (void)oracle::oracle_satisfying( Template::Absence, "a", "", six, 2 ), oracle::OracleBoundsError );
    CHECK_THROWS_AS( (void)oracle::oracle_satisfying( Template::Absence, "a", "", ab, 9 ), oracle::OracleBoundsError );
}

TEST_CASE( "subsumes" )
{
    CHECK( subsumes( Template::Response, { "a", "b" }, Template::RespondedExistence, { "a", "b" } ) );
    CHECK( subsumes( Template::ExactlyOne, { "a", "" }, Template::AtLeastOne, { "a", "" } ) );
    CHECK( subsumes( Template::AlternateSuccession, { "a", "b" }, Template::RespondedExistence, { "b", "a" } ) );
    CHECK( subsumes( Template::CoExistence, { "a", "b" }, Template::RespondedExistence, { "b", "a" } ) );
    CHECK_FALSE( subsumes( Template::Response, { "a", "b" }, Template::RespondedExistence, { "b", "a" } ) );
    CHECK_FALSE( subsumes( Template::Response, { "a", "b" }, Template::Response, { "a", "b" } ) );

    CHECK_FALSE( subsumes( Template::Precedence, { "a", "b" }, Template::RespondedExistence, { "a", "b" } ) );
    // Witness: <a> satisfies Precedence(a, b) but violates RespondedExistence(a, b).
    const Sequence w{ "a" };
    CHECK( oracle::satisfies( Template::Precedence, "a", "b", w ) );
    CHECK_FALSE( oracle::satisfies( Template::RespondedExistence, "a", "b", w ) );
}

TEST_CASE( "to_automaton: small shapes" )
{
    const auto absence = to_automaton( { Template::Absence, "a", "" }, { "a" } );
    CHECK( absence.state_count() == 3 );
    const Sequence no_a{ "x", "x" }, with_a{ "x", "a" };
    CHECK( absence.run( no_a ).accepted );
    CHECK_FALSE( absence.run( with_a ).accepted );

    const auto response = to_automaton( { Template::Response, "a", "b" }, { "a", "b" } );
    const Sequence waiting{ "a" }, served{ "a", "b" }, again{ "a", "b", "a" };
    CHECK_FALSE( response.run( waiting ).accepted );
    CHECK( response.run( served ).accepted );
    CHECK( response.run( served ).activated );
    CHECK_FALSE( response.run( again ).accepted );
}

TEST_CASE( "property: automaton language equals the reference semantics up to length 6" )
{
    for ( auto t : all_templates )
    {
        const auto m = to_automaton( { t, "a", arity( t ) == 2 ? "b" : "" }, { "a", "b" } );
        const auto golden = oracle::oracle_satisfying( t, "a", arity( t ) == 2 ? "b" : "", abx, 6 );
        for ( const auto& w : oracle::all_words( abx, 6 ) )
        {
            if ( w.empty() )
                continue;
            const auto run = m.run( w );
            CHECK_MESSAGE( run.accepted == golden.contains( w ), to_string( t ) );
            if ( run.accepted )
                CHECK( run.activated == oracle::activated( t, "a", "b", w ) );
        }
    }
}

TEST_CASE( "property: evaluate agrees with the reference semantics" )
{
    const auto words = oracle::all_words( abx, 5 );
    for ( auto t : all_templates )
        for ( const auto& [ a, b ] : std::vector< std::pair< Label, Label > >{ { "a", "b" }, { "b", "a" }, { "a", "x" } } )
            for ( const auto& w : words )
            {
                if ( w.empty() )
                    continue;
                const auto second = arity( t ) == 2 ? b : Label{};
                CHECK( evaluate( t, Binding{ a, second }, w ) == expected_verdict( t, a, second, w ) );
            }
}

TEST_CASE( "property: lattice edges have no counterexample" )
{
    const auto words = oracle::all_words( abx, 6 );
    for ( const auto& e : subsumption_closure() )
        for ( const auto& w : words )
        {
            if ( w.empty() )
                continue;
            const Label a = "a", b = arity( e.stronger ) == 2 ? "b" : "";
            const Label wa = e.swapped ? b : a, wb = e.swapped ? a : b;
            if ( evaluate( e.stronger, Binding{ a, b }, w ) != Verdict::Violated )
                CHECK( evaluate( e.weaker, Binding{ wa, arity( e.weaker ) == 2 ? wb : "" }, w ) != Verdict::Violated );
        }
}

TEST_CASE( "property: composite templates are conjunctions" )
{
    const auto ok = []( Template t, const Label& a, const Label& b, const Sequence& w ) {
        return evaluate( t, Binding{ a, b }, w ) != Verdict::Violated;
    };
    for ( const auto& w : oracle::all_words( abx, 6 ) )
    {
        if ( w.empty() )
            continue;
        CHECK( ok( Template::Succession, "a", "b", w ) ==
               ( ok( Template::Response, "a", "b", w ) && ok( Template::Precedence, "a", "b", w ) ) );
        CHECK( ok( Template::AlternateSuccession, "a", "b", w ) ==
               ( ok( Template::AlternateResponse, "a", "b", w ) && ok( Template::AlternatePrecedence, "a", "b", w ) ) );
        CHECK( ok( Template::ExactlyOne, "a", "", w ) ==
               ( ok( Template::AtLeastOne, "a", "", w ) && ok( Template::AtMostOne, "a", "", w ) ) );
    }
}

TEST_CASE( "evaluate on the empty sequence" )
{
    const Sequence empty;
    for ( auto t : all_templates )
    {
        const auto v = evaluate( t, Binding{ "a", "b" }, empty );
        if ( t == Template::AtLeastOne || t == Template::ExactlyOne )
            CHECK( v == Verdict::Violated );
        else
            CHECK( v == Verdict::SatisfiedVacuously );
    }
}
