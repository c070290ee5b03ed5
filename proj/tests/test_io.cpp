#include "doctest.h"
#include "support.hpp"

#include "bpcheck/io.hpp"
#include "bpcheck/synthetic.hpp"

#include <random>

using namespace bpcheck;
using testing::trace;

namespace
{

bool mentions( const std::string& text, const std::string& needle ) { return text.find( needle ) != std::string::npos; }

template < class Fn >
std::string error_of( Fn&& fn )
{
    try
    {
        fn();
    }
    catch ( const DataError& e )
    {
        return e.what();
    }
    return {};
}

const char* two_traces_xes = R"(<?xml version="1.0" encoding="UTF-8"?>
<log xes.version="1.0">
  <string key="concept:name" value="demo"/>
  <trace>
    <string key="concept:name" value="c1"/>
    <event><string key="concept:name" value="Create Order"/><string key="org:role" value="clerk"/></event>
    <event><string key="concept:name" value="approve  order"/></event>
  </trace>
  <trace>
    <string key="concept:name" value="c2"/>
    <event><string key="concept:name" value="create order"/><date key="time:timestamp" value="2024-01-01T00:00:00"/></event>
  </trace>
</log>
)";

} // namespace

TEST_CASE( "parse_xes: traces, order, roles and normalization" )
{
    const auto log = parse_xes( two_traces_xes );
    REQUIRE( log.traces.size() == 2 );
    CHECK( log.traces[ 0 ].case_id == "c1" );
    CHECK( log.traces[ 0 ].activities() == Sequence{ "create order", "approve order" } );
    CHECK( log.traces[ 0 ].events[ 0 ].role == std::optional< Label >( "clerk" ) );
    CHECK_FALSE( log.traces[ 0 ].events[ 1 ].role.has_value() );
    CHECK( log.traces[ 1 ].activities() == Sequence{ "create order" } );
}

TEST_CASE( "parse_xes: malformed input" )
{
    CHECK( mentions( error_of( [] { (void)parse_xes( "<log><trace>", "bad.xes" ); } ), "bad.xes:" ) );
    CHECK( mentions( error_of( [] { (void)parse_xes( "<other/>", "x.xes" ); } ), "missing <log>" ) );
    CHECK( mentions( error_of( [] { (void)parse_xes( "<log><trace><event/></trace></log>", "x.xes" ); } ),
                     "trace #1 has no concept:name" ) );
    CHECK( mentions(
        error_of( [] {
            (void)parse_xes( R"(<log><trace><string key="concept:name" value="c"/><event/></trace></log>)", "x.xes" );
        } ),
        "event #1" ) );
}

TEST_CASE( "parse_csv_log: missing role column leaves roles unassigned" )
{
    const auto log = parse_csv_log( "case_id,activity\n1,create order\n1,ship order\n2,create order\n" );
    REQUIRE( log.traces.size() == 2 );
    CHECK( log.traces[ 0 ].activities() == Sequence{ "create order", "ship order" } );
    for ( const auto& t : log.traces )
        for ( const auto& e : t.events )
            CHECK_FALSE( e.role.has_value() );
}

TEST_CASE( "parse_csv_log: timestamps reorder events, empty role is unassigned" )
{
    const auto log = parse_csv_log( " Case_ID ,Activity,role,timestamp\n"
                                    "1,ship order,clerk,2024-01-01T10:00:00\n"
                                    "1,create order,,2024-01-01T09:00:00\n"
                                    "1,bill order,clerk,2024-01-01T09:30:00+00:00\n" );
    REQUIRE( log.traces.size() == 1 );
    CHECK( log.traces[ 0 ].activities() == Sequence{ "create order", "bill order", "ship order" } );
    CHECK_FALSE( log.traces[ 0 ].events[ 0 ].role.has_value() );
    CHECK( log.traces[ 0 ].events[ 2 ].role == std::optional< Label >( "clerk" ) );
}

TEST_CASE( "parse_csv_log: quoted fields" )
{
    const auto log = parse_csv_log( "case_id,activity\n\"a,1\",\"check \"\"quoted\"\" item\"\n" );
    REQUIRE( log.traces.size() == 1 );
    CHECK( log.traces[ 0 ].case_id == "a,1" );
    CHECK( log.traces[ 0 ].events[ 0 ].activity == "check \"quoted\" item" );
}

TEST_CASE( "parse_csv_log: malformed input names the line" )
{
    CHECK( mentions( error_of( [] { (void)parse_csv_log( "case_id,activity\n1,a\n2\n", "log.csv" ); } ), "log.csv:3:" ) );
    CHECK( mentions( error_of( [] { (void)parse_csv_log( "case,activity\n1,a\n", "log.csv" ); } ),
                     "missing required column 'case_id'" ) );
    CHECK( mentions( error_of( [] { (void)parse_csv_log( "case_id,activity\n1,\"a\n", "log.csv" ); } ), "log.csv:2:" ) );
    CHECK( mentions( error_of( [] { (void)parse_csv_log( "case_id,activity,timestamp\n1,a,yesterday\n", "log.csv" ); } ),
                     "unparsable timestamp" ) );
    CHECK( mentions( error_of( [] { (void)parse_csv_log( "case_id,activity\n,a\n", "log.csv" ); } ), "empty case_id" ) );
    CHECK( mentions( error_of( [] { (void)parse_csv_log( "", "log.csv" ); } ), "missing header" ) );
}

TEST_CASE( "read_log: dispatch on extension" )
{
    testing::TempDir dir( "io-log" );
    write_text( dir.path() / "l.xes", two_traces_xes );
    write_text( dir.path() / "l.csv", "case_id,activity\nc1,a\n" );
    write_text( dir.path() / "l.txt", "x" );
    CHECK( read_log( dir.path() / "l.xes" ).traces.size() == 2 );
    CHECK( read_log( dir.path() / "l.csv" ).traces.size() == 1 );
    CHECK_THROWS_AS( (void)read_log( dir.path() / "l.txt" ), DataError );
    CHECK_THROWS_AS( (void)read_log( dir.path() / "missing.csv" ), DataError );
}

TEST_CASE( "to_csv and to_xes round-trip" )
{
    const EventLog log{ { trace( "a,1", { { "create order", "clerk" }, { "check \"x\" order" } } ),
                          trace( "b", { { "münchen office" } } ) } };
    CHECK( parse_csv_log( to_csv( log ) ) == log );
    CHECK( parse_xes( to_xes( log ) ) == log );
}

TEST_CASE( "parse_model: explicit sequences" )
{
    const auto m = parse_model( R"({"id":"m","activities":["a","b"],"roles":["r"],"role_map":{"a":"r"},
                                    "sequences":[["a","b"],["a"]]})" );
    CHECK( m.id() == "m" );
    CHECK( m.sequences() == std::set< Sequence >{ { "a" }, { "a", "b" } } );
    CHECK( m.role_map().at( "a" ) == "r" );
}

TEST_CASE( "parse_model: net with an exclusive choice" )
{
    const auto m = parse_model( R"({"id":"n","activities":["a","b","c"],"net":{
        "places":["p0","p1","p2"],
        "transitions":[{"id":"t0","label":"a"},{"id":"t1","label":"b"},{"id":"t2","label":"c"}],
        "arcs":[["p0","t0"],["t0","p1"],["p1","t1"],["t1","p2"],["p1","t2"],["t2","p2"]],
        "initial":{"p0":1},"final":{"p2":1}}})" );
    CHECK( m.sequences() == std::set< Sequence >{ { "a", "b" }, { "a", "c" } } );
}

TEST_CASE( "parse_model: invalid models" )
{
    CHECK_THROWS_AS( (void)parse_model( R"({"id":"m","activities":["a"],"role_map":{"z":"r"},"roles":["r"],
                                            "sequences":[["a"]]})" ),
                     DataError );
    CHECK_THROWS_AS( (void)parse_model( R"({"id":"m","activities":["a"]})" ), DataError );
    CHECK_THROWS_AS( (void)parse_model( R"({"id":"m","activities":["a"],"sequences":[["b"]]})" ), DataError );
    CHECK_THROWS_AS( (void)parse_model( "{", "m.json" ), DataError );
}

TEST_CASE( "read_models: example directory and model_to_json round-trip" )
{
    const auto models = read_models( testing::source_path( "data/example/models" ) );
    REQUIRE( models.size() == 3 );
    CHECK( models[ 0 ].id() == "ordering" );
    CHECK( models[ 0 ].sequences().size() == 2 );
    for ( const auto& m : models )
    {
        const auto back = parse_model( model_to_json( m ) );
        CHECK( back.id() == m.id() );
        CHECK( back.sequences() == m.sequences() );
        CHECK( back.activities() == m.activities() );
        CHECK( back.role_map() == m.role_map() );
    }
}

TEST_CASE( "parse_constraints: three-line fixture" )
{
    const std::string text =
        R"({"kind":"activity","template":"Precedence","params":{"a1":"create order","a2":"ship order"},"support":2,"provenance":["m1","m2"]}
{"kind":"intraobj","template":"AtLeastOne","params":{"object":"order","n1":"create","n2":""},"support":1,"provenance":["m1"]}
{"kind":"role","template":"Absence","params":{"a":"approve order","r":"clerk"},"support":1,"provenance":["m2"]}
)";
    const auto f = parse_constraints( text );
    CHECK( f.collection.size() == 3 );
    CHECK( f.collection.support( { ConstraintKind::Activity, Template::Precedence, { "", "create order", "ship order" } } ) == 2 );
}

TEST_CASE( "parse_constraints: rejected lines" )
{
    const auto line = []( const std::string& tail ) {
        return R"({"kind":"activity","template":"Precedence","params":{"a1":"a","a2":"b"},)" + tail + "}\n";
    };
    CHECK( mentions( error_of( [ & ] { (void)parse_constraints( line( R"("support":0,"provenance":[])" ), "c.jsonl" ); } ),
                     "c.jsonl:1" ) );
    CHECK_THROWS_AS( (void)parse_constraints( line( R"("support":2,"provenance":["m"])" ) ), DataError );
    CHECK_THROWS_AS( (void)parse_constraints( line( R"("support":1,"provenance":["m"])" ) +
                                              line( R"("support":1,"provenance":["n"])" ) ),
                     DataError );
    CHECK_THROWS_AS( (void)parse_constraints( R"({"kind":"activity","template":"Sometimes","params":{"a1":"a","a2":"b"},"support":1,"provenance":["m"]})" ),
                     DataError );
    CHECK_THROWS_AS( (void)parse_constraints( R"({"kind":"role","template":"Response","params":{"a":"a","r":"b"},"support":1,"provenance":["m"]})" ),
                     DataError );
}

TEST_CASE( "property: constraint collections round-trip" )
{
    std::mt19937_64 rng( 11 );
    for ( int i = 0; i < 20; ++i )
    {
        const auto c = testing::random_collection( rng );
        const auto info = testing::random_info( rng );
        const auto back = parse_constraints( constraints_to_jsonl( c, info ) );
        CHECK( back.collection == c );
        CHECK( back.info == info );
    }
}

TEST_CASE( "property: selected sets, reports and filters round-trip" )
{
    std::mt19937_64 rng( 12 );
    for ( int i = 0; i < 20; ++i )
    {
        const auto s = testing::random_selected( rng );
        CHECK( parse_selected( selected_to_json( s ) ) == s );
        const auto r = testing::random_report( rng );
        CHECK( parse_report( report_to_json( r ) ) == r );
        const auto f = testing::random_filter( rng );
        CHECK( parse_filter( filter_to_json( f ) ) == f );
    }
}

TEST_CASE( "parse_report: count must match the case list" )
{
    std::mt19937_64 rng( 3 );
    auto r = testing::random_report( rng );
    while ( r.groups.empty() )
        r = testing::random_report( rng );
    r.groups[ 0 ].count += 1;
    CHECK_THROWS_AS( (void)parse_report( report_to_json( r ) ), DataError );
}

TEST_CASE( "parse_filter: labels are normalized, bad pins rejected" )
{
    const auto f = parse_filter( R"({"exclude":{"objects":["  Purchase   Order "]},"pin":["intraobj|AtLeastOne|order|create"]})" );
    CHECK( f.objects == std::set< Label >{ "purchase order" } );
    CHECK( f.pinned.size() == 1 );
    CHECK( parse_filter( "{}" ).empty() );
    CHECK_THROWS_AS( (void)parse_filter( R"({"pin":["nonsense"]})" ), DataError );
}

TEST_CASE( "metrics_to_csv: header and NA" )
{
    MetricsRow row;
    row.model_id = "m1";
    row.kind = "activity";
    row.setting = { std::nullopt, 0.5, 0.9 };
    row.record = { 0, 0, 0 };
    const auto csv = metrics_to_csv( { row }, {} );
    CHECK( mentions( csv, "fold,model_id,kind,k,tau,omega,tp,fp,fn,precision,recall\n" ) );
    CHECK( mentions( csv, "NA" ) );
}
